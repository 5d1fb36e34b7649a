use std::process::Command;

fn srball(args: &[&str]) -> (i32, String, String) {
    let o = Command::new(env!("CARGO_BIN_EXE_srball")).args(args).output().unwrap();
    (o.status.code().unwrap_or(-1), String::from_utf8(o.stdout).unwrap(), String::from_utf8(o.stderr).unwrap())
}

fn value(csv: &str, key: &str) -> f64 {
    csv.lines().find_map(|l| l.strip_prefix(&format!("{key},"))).unwrap().parse().unwrap()
}

#[test]
fn invariants_from_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.toml");
    std::fs::write(&path, "family = \"normal_form\"\nbeta = \"0\"\ngamma = \"x^2 + 2*x*y\"\n").unwrap();
    let (code, out, _) = srball(&["invariants", "--config", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(value(&out, "nominal_kappa"), 2.0);
    assert!((value(&out, "nominal_chi") - 2.0 * 2f64.sqrt()).abs() < 1e-11);
    assert_eq!(value(&out, "psi"), 1.0);
    assert!(value(&out, "sec_residual") < 1e-10);

    let (code, out, _) = srball(&["invariants", "--family", "heisenberg"]);
    assert_eq!(code, 0);
    assert_eq!((value(&out, "chi"), value(&out, "kappa")), (0.0, 0.0));
}

#[test]
fn frame_config_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.toml");
    std::fs::write(&path, "family = \"frame\"\nx1 = [\"1\", \"0\", \"-0.5*y\"]\nx2 = [\"0\", \"1\", \"0.5*x\"]\n").unwrap();
    let (code, out, _) = srball(&["--config", path.to_str().unwrap(), "--format", "json", "invariants"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["kappa"], 0.0);
    assert!(v.get("nominal_kappa").is_none());
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(&path, "family = \"normal_form\"\ngamma = \"x^2 + * y\"\n").unwrap();
    let (code, _, err) = srball(&["invariants", "--config", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("gamma") && err.contains("position"), "{err}");
    std::fs::write(&path, "family = \"normal_form\"\ngamma = \"x*z\"\n").unwrap();
    assert_eq!(srball(&["invariants", "--config", path.to_str().unwrap()]).0, 2);
    assert_eq!(srball(&["invariants", "--config", "/nonexistent.toml"]).0, 2);
    assert_eq!(srball(&["ball-volume", "--eps", "0.5"]).0, 2);
    assert_eq!(srball(&["frobnicate"]).0, 2);
}

#[test]
fn ball_volume_csv_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let args = |p: &std::path::Path| {
        vec!["ball-volume", "--family", "kappa4", "--eps", "0.1,0.05", "--quad", "4,8,12", "--out", p.to_str().unwrap()]
            .into_iter()
            .map(String::from)
            .collect::<Vec<_>>()
    };
    let run = |p: &std::path::Path| {
        let v = args(p);
        srball(&v.iter().map(String::as_str).collect::<Vec<_>>()).0
    };
    assert_eq!(run(&a), 0);
    assert_eq!(run(&b), 0);
    let ta = std::fs::read_to_string(&a).unwrap();
    assert_eq!(ta, std::fs::read_to_string(&b).unwrap());
    let mut lines = ta.lines();
    assert_eq!(lines.next().unwrap(), "eps,volume,volume_over_eps4,prediction,relative_deviation,error");
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0], "0.1");
    let scaled: f64 = row[2].parse().unwrap();
    assert!(scaled < 0.8259 && scaled > 0.8);
}

#[test]
fn geodesic_trace_and_verify() {
    let (code, out, _) = srball(&["geodesic", "--rho", "1", "--theta", "0.5", "--w", "-2", "--time", "1"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "t,x,y,z,theta,w");
    assert!(lines.len() > 10);
    assert!(lines.last().unwrap().starts_with("1,"));

    let (code, out, _) = srball(&["verify", "--family", "heisenberg"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.lines().all(|l| l.starts_with("PASS")));
}
