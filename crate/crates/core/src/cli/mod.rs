//! The `srball` command line.

pub mod config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::connection::verify_sec_identity;
use crate::contact::{chi_at, kappa_at, popp_density, ContactStructure};
use crate::error::{Error, Result};
use crate::geodesic::{integrate, CylCovector};
use crate::heisenberg::{c0, c1};
use crate::parallel::Execution;
use crate::report::sig12;
use crate::verify::{self, Outcome, SuiteOptions};
use crate::volume::{ball_volume, fit_expansion, QuadratureSpec, DEFAULT_LADDER};

pub use config::{resolve_structure, FileConfig, StructureSource};

#[derive(Parser, Debug)]
#[command(name = "srball", version, about = "Small sub-Riemannian ball volumes on 3D contact manifolds")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Structure definition file (TOML).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Built-in structure: heisenberg, kappa2, kappa4, chi4.
    #[arg(long, global = true)]
    pub family: Option<String>,
    /// Comma-separated ε values.
    #[arg(long, global = true, value_delimiter = ',')]
    pub eps: Option<Vec<f64>>,
    /// Quadrature nodes in ρ, θ, w.
    #[arg(long, global = true, value_delimiter = ',', num_args = 1)]
    pub quad: Option<Vec<usize>>,
    /// ODE tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output file (stdout when absent).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Run on one thread.
    #[arg(long, global = true)]
    pub sequential: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// χ(0), κ(0), ψ(0) and the Sec-identity residual.
    Invariants,
    /// Volumes of ε-balls at the origin.
    BallVolume {
        /// κ used in the prediction column.
        #[arg(long)]
        kappa: Option<f64>,
    },
    /// Fit vol/ε⁴ = c₀(1 + slope·ε²) along an ε ladder.
    Fit {
        #[arg(long)]
        kappa: Option<f64>,
    },
    /// Structure checks and the fast acceptance criteria.
    Verify {
        /// Run every acceptance criterion, including the slow ones.
        #[arg(long)]
        acceptance: bool,
    },
    /// Sampled geodesic from the origin.
    Geodesic {
        #[arg(long, default_value_t = 1.0)]
        rho: f64,
        #[arg(long, default_value_t = 0.0)]
        theta: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        w: f64,
        #[arg(long, default_value_t = 1.0)]
        time: f64,
    },
}

/// Resolved run configuration.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub source: StructureSource,
    pub eps: Option<Vec<f64>>,
    pub quad: QuadratureSpec,
    pub tol: f64,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    pub fn from_common(c: &Common) -> Result<RunConfig> {
        let file = match &c.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        let source = resolve_structure(&file, c.family.as_deref())?;
        let eps = c.eps.clone().or(file.eps.clone());
        if let Some(e) = &eps {
            if e.is_empty() || e.iter().any(|v| !(*v > 0.0 && *v <= 0.3)) || e.windows(2).any(|w| !(w[1] < w[0])) {
                return Err(Error::Config("eps entries must lie in (0, 0.3] and strictly decrease".into()));
            }
        }
        let tol = c.tol.or(file.tol).unwrap_or(1e-10);
        if !(tol >= 1e-13 && tol <= 1e-6) {
            return Err(Error::Config(format!("tol must lie in [1e-13, 1e-6], got {tol}")));
        }
        let mut quad = QuadratureSpec { tol_ode: tol, ..QuadratureSpec::default() };
        let q = match &c.quad {
            Some(v) if v.len() != 3 => return Err(Error::Config("--quad takes three counts R,T,W".into())),
            Some(v) => Some([v[0], v[1], v[2]]),
            None => file.quad,
        };
        if let Some([r, t, w]) = q {
            quad.n_rho = r;
            quad.n_theta = t;
            quad.n_w = w;
        }
        if c.sequential {
            quad.execution = Execution::Sequential;
        }
        quad.validate().map_err(|e| Error::Config(e.to_string()))?;
        Ok(RunConfig {
            source,
            eps,
            quad,
            tol,
            seed: c.seed.or(file.seed).unwrap_or(7),
            out: c.out.clone(),
            format: c.format,
        })
    }

    fn structure(&self) -> Result<ContactStructure> {
        ContactStructure::derive(self.source.frame.clone())
    }
}

/// κ used for the volume prediction: the quadratic-part value 2(a+c) for
/// normal forms, and κ(0)/3 otherwise (the two agree on normal forms).
pub fn expansion_kappa(cfg: &RunConfig, s: &ContactStructure) -> Result<f64> {
    match cfg.source.nominal() {
        Some((k, _)) => Ok(k),
        None => Ok(kappa_at(s, [0.0; 3])? / 3.0),
    }
}

/// A command's text output and whether it counts as success.
pub struct Output {
    pub text: String,
    pub ok: bool,
}

fn fields_csv(rows: &[(&str, f64)]) -> String {
    let mut out = String::from("quantity,value\n");
    for (k, v) in rows {
        out.push_str(&format!("{k},{}\n", sig12(*v)));
    }
    out
}

fn fields_json(rows: &[(&str, f64)]) -> String {
    let m: serde_json::Map<String, serde_json::Value> = rows.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
    serde_json::to_string_pretty(&m).unwrap_or_default() + "\n"
}

pub fn cmd_invariants(cfg: &RunConfig) -> Result<Output> {
    let s = cfg.structure()?;
    let o = [0.0; 3];
    let mut rows = vec![
        ("chi", chi_at(&s, o)?),
        ("kappa", kappa_at(&s, o)?),
        ("psi", popp_density(&s, o)?),
        ("sec_residual", verify_sec_identity(&s, o)?),
    ];
    if let Some((k, x)) = cfg.source.nominal() {
        rows.push(("nominal_kappa", k));
        rows.push(("nominal_chi", x));
    }
    let text = match cfg.format {
        Format::Csv => fields_csv(&rows),
        Format::Json => fields_json(&rows),
    };
    Ok(Output { text, ok: true })
}

pub fn cmd_ball_volume(cfg: &RunConfig, kappa: Option<f64>) -> Result<Output> {
    let s = cfg.structure()?;
    let k = match kappa {
        Some(k) => k,
        None => expansion_kappa(cfg, &s)?,
    };
    let eps = cfg.eps.clone().unwrap_or_else(|| vec![0.1]);
    let mut rows = Vec::new();
    let mut ok = true;
    for e in eps {
        let pred = c0() * (1.0 - c1() * k * e * e);
        match ball_volume(&s, e, &cfg.quad) {
            Ok(r) => rows.push(json!({
                "eps": e, "volume": r.volume, "volume_over_eps4": r.scaled, "prediction": pred,
                "relative_deviation": (r.scaled - pred) / pred, "error": null,
            })),
            Err(err) => {
                ok = false;
                rows.push(json!({ "eps": e, "prediction": pred, "error": err.to_string() }));
            }
        }
    }
    let text = match cfg.format {
        Format::Json => serde_json::to_string_pretty(&rows).unwrap_or_default() + "\n",
        Format::Csv => {
            let mut out = String::from("eps,volume,volume_over_eps4,prediction,relative_deviation,error\n");
            for r in &rows {
                let num = |k: &str| r[k].as_f64().map(sig12).unwrap_or_default();
                let err = r["error"].as_str().unwrap_or("").replace(',', ";");
                out.push_str(&format!(
                    "{},{},{},{},{},{err}\n",
                    num("eps"),
                    num("volume"),
                    num("volume_over_eps4"),
                    num("prediction"),
                    num("relative_deviation")
                ));
            }
            out
        }
    };
    Ok(Output { text, ok })
}

pub fn cmd_fit(cfg: &RunConfig, kappa: Option<f64>) -> Result<Output> {
    let s = cfg.structure()?;
    let k = match kappa {
        Some(k) => k,
        None => expansion_kappa(cfg, &s)?,
    };
    let eps = cfg.eps.clone().unwrap_or_else(|| DEFAULT_LADDER.to_vec());
    let r = fit_expansion(&s, &eps, &cfg.quad)?;
    let pred = r.predicted_slope(k);
    let text = match cfg.format {
        Format::Json => {
            let v = json!({ "report": r, "kappa_used": k, "predicted_slope": pred });
            serde_json::to_string_pretty(&v).unwrap_or_default() + "\n"
        }
        Format::Csv => {
            let mut out = format!(
                "# c0_est = {}\n# slope_est = {}\n# predicted_slope = {} (kappa {})\n# c0 = {}\n# c1 = {}\n# kappa(0) = {}\n# chi(0) = {}\n",
                sig12(r.c0_est),
                sig12(r.slope_est),
                sig12(pred),
                sig12(k),
                sig12(r.c0),
                sig12(r.c1),
                sig12(r.kappa),
                sig12(r.chi)
            );
            out.push_str("eps,volume,volume_over_eps4,fit_residual\n");
            for i in 0..r.eps_list.len() {
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    sig12(r.eps_list[i]),
                    sig12(r.volumes[i]),
                    sig12(r.scaled[i]),
                    sig12(r.residuals[i])
                ));
            }
            out
        }
    };
    Ok(Output { text, ok: r.negative_jacobian == 0 })
}

pub fn cmd_verify(cfg: &RunConfig, acceptance: bool) -> Result<Output> {
    let s = cfg.structure()?;
    let mut results = verify::structure_checks(&s, cfg.seed);
    let opts = SuiteOptions { seed: cfg.seed, execution: cfg.quad.execution, quad: cfg.quad, enforce_runtime: true };
    if acceptance {
        results.extend(verify::acceptance_suite(&opts));
    } else {
        for c in [verify::criterion_1, verify::criterion_2, verify::criterion_3, verify::criterion_5, verify::criterion_8, verify::criterion_9] {
            results.push(c(&opts));
        }
    }
    let ok = results.iter().all(|r| r.passed);
    let text = match cfg.format {
        Format::Json => serde_json::to_string_pretty(&results).unwrap_or_default() + "\n",
        Format::Csv => {
            let lines: Vec<String> = results.iter().map(Outcome::line).collect();
            lines.join("\n") + "\n"
        }
    };
    Ok(Output { text, ok })
}

pub fn cmd_geodesic(cfg: &RunConfig, rho: f64, theta: f64, w: f64, time: f64) -> Result<Output> {
    let s = cfg.structure()?;
    let tr = integrate(&s, &CylCovector::new(rho, theta, w)?, time, cfg.tol)?;
    let text = match cfg.format {
        Format::Csv => tr.to_csv(),
        Format::Json => serde_json::to_string_pretty(&tr).unwrap_or_default() + "\n",
    };
    Ok(Output { text, ok: true })
}

/// Errors caused by the user's input rather than by a computation.
pub fn is_input_error(e: &Error) -> bool {
    matches!(
        e,
        Error::Parse(_)
            | Error::Config(_)
            | Error::InvalidArgument(_)
            | Error::BoundaryCondition(_)
            | Error::Degenerate { .. }
            | Error::Io(_)
    )
}

pub fn execute(cli: &Cli) -> Result<Output> {
    let cfg = RunConfig::from_common(&cli.common)?;
    match &cli.command {
        Command::Invariants => cmd_invariants(&cfg),
        Command::BallVolume { kappa } => cmd_ball_volume(&cfg, *kappa),
        Command::Fit { kappa } => cmd_fit(&cfg, *kappa),
        Command::Verify { acceptance } => cmd_verify(&cfg, *acceptance),
        Command::Geodesic { rho, theta, w, time } => cmd_geodesic(&cfg, *rho, *theta, *w, *time),
    }
}

/// Parses `args`, runs the command, writes the output and returns the exit code.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(&cli) {
        Ok(out) => {
            let written = match &cli.common.out {
                Some(p) => std::fs::write(p, &out.text).map_err(Error::from),
                None => std::io::stdout().write_all(out.text.as_bytes()).map_err(Error::from),
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(if out.ok { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if is_input_error(&e) { 2 } else { 1 })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(args: &[&str]) -> RunConfig {
        let cli = Cli::try_parse_from(std::iter::once("srball").chain(args.iter().copied()).chain(["invariants"])).unwrap();
        RunConfig::from_common(&cli.common).unwrap()
    }

    #[test]
    fn invariants_of_families() {
        let t = cmd_invariants(&cfg(&["--family", "heisenberg"])).unwrap().text;
        assert!(t.contains("chi,0\n") && t.contains("kappa,0\n") && t.contains("psi,1\n"), "{t}");
        let t = cmd_invariants(&cfg(&["--family", "kappa4"])).unwrap().text;
        assert!(t.contains("nominal_kappa,4\n") && t.contains("kappa,12\n"), "{t}");
    }

    #[test]
    fn flag_validation() {
        let cli = Cli::try_parse_from(["srball", "--eps", "0.1,0.2", "invariants"]).unwrap();
        assert!(RunConfig::from_common(&cli.common).is_err());
        let cli = Cli::try_parse_from(["srball", "--quad", "8,8", "invariants"]).unwrap();
        assert!(RunConfig::from_common(&cli.common).is_err());
        let c = cfg(&["--quad", "8,16,12", "--tol", "1e-9"]);
        assert_eq!((c.quad.n_rho, c.quad.n_theta, c.quad.n_w, c.quad.tol_ode), (8, 16, 12, 1e-9));
    }
}
