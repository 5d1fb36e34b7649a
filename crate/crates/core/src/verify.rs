//! Verification suites: per-structure consistency checks and the numbered
//! acceptance criteria. Both the CLI and the `acceptance` test target run
//! these.

use std::f64::consts::{PI, TAU};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::connection::verify_sec_identity;
use crate::contact::{
    build_normal_frame, chi_at, gamma2, kappa_at, nominal_invariants, popp_density, ContactStructure, FrameField,
    NormalFormSpec,
};
use crate::dilation::{homogeneous_constant, tau, DilatedStructure};
use crate::error::{Point, Result};
use crate::families::Family;
use crate::geodesic::{exp_map, integrate, jacobian_exp, CylCovector, DEFAULT_FD_STEP};
use crate::heisenberg::{c0, c1, g0, heis_exp, heis_jacobian, jacobian_profile, sine_integral};
use crate::parallel::Execution;
use crate::polyexpr::{parse_poly, Polynomial};
use crate::quadrature::{integrate_adaptive, GaussLegendre};
use crate::volume::{fit_expansion, u2_integral_check, v2_theta_average_with, QuadratureSpec, V2Options, DEFAULT_LADDER};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Outcome {
    pub id: String,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl Outcome {
    pub fn line(&self) -> String {
        format!(
            "{} [{}] {} ({:.2}s): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.seconds,
            self.detail
        )
    }
}

fn run<F: FnOnce() -> Result<(bool, String)>>(id: &str, name: &str, max_seconds: Option<f64>, f: F) -> Outcome {
    let t = Instant::now();
    let r = f();
    let seconds = t.elapsed().as_secs_f64();
    let (mut passed, mut detail) = match r {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    if let Some(m) = max_seconds {
        if seconds > m {
            passed = false;
            detail.push_str(&format!("; runtime {seconds:.1}s over {m}s"));
        }
    }
    Outcome { id: id.into(), name: name.into(), passed, detail, seconds }
}

/// Options shared by the acceptance criteria.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuiteOptions {
    pub seed: u64,
    pub execution: Execution,
    pub quad: QuadratureSpec,
    /// Whether to enforce the stated runtime budgets.
    pub enforce_runtime: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { seed: 7, execution: Execution::default(), quad: QuadratureSpec::default(), enforce_runtime: true }
    }
}

impl SuiteOptions {
    fn budget(&self, s: f64) -> Option<f64> {
        self.enforce_runtime.then_some(s)
    }
}

fn derive_family(f: Family) -> Result<ContactStructure> {
    ContactStructure::derive(f.frame()?)
}

/// Random normal form: β with linear and mixed terms, γ quadratic plus
/// cubic and z-dependent terms.
pub fn random_normal_form(rng: &mut ChaCha8Rng) -> Result<FrameField> {
    let mut r = || rng.gen_range(-1.0..1.0);
    let beta = format!("{}*x + {}*y + {}*x*z", r(), r(), r());
    let gamma = format!(
        "{}*x^2 + {}*x*y + {}*y^2 + {}*x^3 + {}*x*y^2 + {}*x^2*z + {}*y^2*z",
        r(),
        r(),
        r(),
        r(),
        r(),
        r(),
        r()
    );
    build_normal_frame(&NormalFormSpec::new(parse_poly(&beta)?, parse_poly(&gamma)?)?)
}

fn random_quadratic(rng: &mut ChaCha8Rng) -> (f64, f64, f64) {
    (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))
}

fn near_point(rng: &mut ChaCha8Rng, r: f64) -> Point {
    loop {
        let p: Point = std::array::from_fn(|_| rng.gen_range(-r..r));
        if p.iter().map(|v| v * v).sum::<f64>().sqrt() <= r {
            return p;
        }
    }
}

/// 1: ∫_Ω det J exp⁰ = (1 + 2π Si(2π))/12 ≈ 0.826.
pub fn criterion_1(o: &SuiteOptions) -> Outcome {
    run("1", "Heisenberg unit-ball constant", o.budget(5.0), || {
        let rho = GaussLegendre::on(8, 0.0, 1.0);
        let w = GaussLegendre::on(64, -TAU, TAU);
        let n_theta = 8;
        let mut tensor = 0.0;
        for (r, wr) in rho.nodes.iter().zip(&rho.weights) {
            for j in 0..n_theta {
                let th = TAU * j as f64 / n_theta as f64;
                for (v, wv) in w.nodes.iter().zip(&w.weights) {
                    tensor += wr * wv * (TAU / n_theta as f64) * heis_jacobian(*r, th, *v);
                }
            }
        }
        let adaptive = 0.25 * TAU * integrate_adaptive(jacobian_profile, -TAU, TAU, 1e-13, 1e-13).value;
        let closed = (1.0 + TAU * sine_integral(TAU)) / 12.0;
        let e1 = (tensor - closed).abs();
        let e2 = (adaptive - closed).abs();
        let rounded = (closed - 0.826).abs();
        Ok((
            e1 <= 1e-6 && e2 <= 1e-6 && rounded <= 1e-3,
            format!("tensor {tensor:.12} adaptive {adaptive:.12} closed {closed:.12}; |Δ| = {e1:.1e}, {e2:.1e}; |c0 − 0.826| = {rounded:.1e}"),
        ))
    })
}

/// 2: the second-order integral identity and c₁ ≈ 0.149.
pub fn criterion_2(o: &SuiteOptions) -> Outcome {
    run("2", "c1 identity", o.budget(1.0), || {
        let (lhs, rhs) = u2_integral_check();
        let d = (lhs - rhs).abs();
        let c1v = -rhs / c0();
        let dc = (c1v - c1()).abs();
        let rounded = (c1() - 0.149).abs();
        Ok((
            d <= 1e-9 && dc <= 1e-12 && rounded <= 1e-3,
            format!("lhs {lhs:.14} rhs {rhs:.14} |Δ| = {d:.1e}; −rhs/c0 = {c1v:.12} vs c1 = {:.12}; |c1 − 0.149| = {rounded:.1e}", c1()),
        ))
    })
}

/// 3: numerical Heisenberg flow against the closed forms.
pub fn criterion_3(o: &SuiteOptions) -> Outcome {
    run("3", "ODE vs closed form", o.budget(30.0), || {
        let s = derive_family(Family::Heisenberg)?;
        let thetas = [0.0, PI / 3.0, PI / 2.0, 1.1 * PI, 1.9 * PI];
        let wmax = TAU - 0.1;
        let ws: Vec<f64> = (0..=24).map(|k| -wmax + 2.0 * wmax * k as f64 / 24.0).collect();
        let mut sup: f64 = 0.0;
        for &th in &thetas {
            for &w in &ws {
                let tr = integrate(&s, &CylCovector::new(1.0, th, w)?, 1.0, 1e-10)?;
                for (t, st) in &tr.samples {
                    let e = heis_exp(1.0, th, w, *t).point();
                    for i in 0..3 {
                        sup = sup.max((st.pt[i] - e[i]).abs());
                    }
                }
            }
        }
        let mut worst: f64 = 0.0;
        for &w in &[1.0, -1.0, 2.0, -2.0, PI, -PI, 5.0, -5.0] {
            for &th in &thetas {
                let j = jacobian_exp(&s, &CylCovector::new(1.0, th, w)?, DEFAULT_FD_STEP, 1e-11)?;
                let e = heis_jacobian(1.0, th, w);
                worst = worst.max(((j - e) / e).abs());
            }
        }
        Ok((sup <= 1e-8 && worst <= 1e-5, format!("sup |exp − closed| = {sup:.2e}; max rel Jacobian error = {worst:.2e}")))
    })
}

/// 4: κ(0) = 2(a+c) and χ(0) = 2√(b²+(c−a)²) on the quadratic family.
pub fn criterion_4(o: &SuiteOptions) -> Outcome {
    run("4", "invariant formulas on the quadratic family", o.budget(5.0), || {
        let mut rng = ChaCha8Rng::seed_from_u64(o.seed);
        let (mut dk, mut dx): (f64, f64) = (0.0, 0.0);
        let mut ratio_k: (f64, f64) = (f64::INFINITY, f64::NEG_INFINITY);
        let mut example = String::new();
        for n in 0..20 {
            let (a, b, c) = random_quadratic(&mut rng);
            let s = ContactStructure::derive(build_normal_frame(&NormalFormSpec::quadratic(a, b, c))?)?;
            let k = kappa_at(&s, [0.0; 3])?;
            let x = chi_at(&s, [0.0; 3])?;
            let (kn, xn) = nominal_invariants(a, b, c);
            dk = dk.max((k - kn).abs());
            dx = dx.max((x - xn).abs());
            if kn.abs() > 1e-3 {
                ratio_k = (ratio_k.0.min(k / kn), ratio_k.1.max(k / kn));
            }
            if n == 0 {
                example = format!("(a,b,c) = ({a:.3},{b:.3},{c:.3}): κ = {k:.6} vs {kn:.6}, χ = {x:.6} vs {xn:.6}");
            }
        }
        Ok((
            dk <= 1e-10 && dx <= 1e-10,
            format!(
                "max |Δκ| = {dk:.3e}, max |Δχ| = {dx:.3e}; κ/2(a+c) in [{:.6}, {:.6}]; e.g. {example}",
                ratio_k.0, ratio_k.1
            ),
        ))
    })
}

/// 5: |Sec(D) − (κ + χ² − 3/4)| ≤ 1e-8 on random structures.
pub fn criterion_5(o: &SuiteOptions) -> Outcome {
    run("5", "Sec identity", None, || {
        let mut rng = ChaCha8Rng::seed_from_u64(o.seed.wrapping_add(5));
        let mut worst: f64 = 0.0;
        for _ in 0..20 {
            let s = ContactStructure::derive(random_normal_form(&mut rng)?)?;
            worst = worst.max(verify_sec_identity(&s, [0.0; 3])?);
            for _ in 0..5 {
                worst = worst.max(verify_sec_identity(&s, near_point(&mut rng, 0.05))?);
            }
        }
        Ok((worst <= 1e-8, format!("max residual {worst:.2e} over 20 structures × 6 points")))
    })
}

/// 6: θ-averaged v₂ converges at order ≥ 1.8 and matches (κ/2)g₀(w).
pub fn criterion_6(o: &SuiteOptions) -> Outcome {
    run("6", "second-order Jacobian coefficient", o.budget(300.0), || {
        let s = derive_family(Family::Kappa4)?;
        let (kappa, _) = Family::Kappa4.nominal();
        let opts = V2Options { execution: o.execution, min_order: 0.0, ..V2Options::default() };
        let mut ok = true;
        let mut parts = Vec::new();
        for &w in &[1.0, 2.0, PI] {
            let v = v2_theta_average_with(&s, 1.0, w, &[0.1, 0.05, 0.025], &opts)?;
            let target = 0.5 * kappa * g0(w);
            let rel = ((v.limit - target) / target).abs();
            ok &= v.order >= 1.8 && rel <= 0.05;
            parts.push(format!("w={w:.4}: limit {:.8} target {target:.8} rel {rel:.1e} order {:.3}", v.limit, v.order));
        }
        parts.push(format!("κ label {kappa}, κ(0) = {:.6}", kappa_at(&s, [0.0; 3])?));
        Ok((ok, parts.join("; ")))
    })
}

/// 7: fitted ε² slope of vol/(c₀ε⁴) against −c₁κ.
pub fn criterion_7(o: &SuiteOptions) -> Outcome {
    run("7", "volume expansion end to end", o.budget(900.0), || {
        let quad = QuadratureSpec { execution: o.execution, ..o.quad };
        let mut ok = true;
        let mut parts = Vec::new();
        for f in [Family::Kappa2, Family::Kappa4, Family::Chi4] {
            let s = derive_family(f)?;
            let r = fit_expansion(&s, &DEFAULT_LADDER, &quad)?;
            let (kappa, chi) = f.nominal();
            let pred = r.predicted_slope(kappa);
            let pass = if kappa == 0.0 {
                r.slope_est.abs() <= 0.05
            } else {
                ((r.slope_est - pred) / pred).abs() <= 0.10
            };
            ok &= pass && r.negative_jacobian == 0;
            parts.push(format!(
                "{f} (κ={kappa}, χ={chi}; κ(0)={:.4}): c0_est {:.8} slope {:.6} vs {pred:.6}",
                r.kappa, r.c0_est, r.slope_est
            ));
        }
        Ok((ok, parts.join("; ")))
    })
}

/// 8: structure-constant homogeneity and δ_ε ∘ expᵉ = exp ∘ τ_ε.
pub fn criterion_8(o: &SuiteOptions) -> Outcome {
    run("8", "dilation homogeneity and diagram", None, || {
        let mut rng = ChaCha8Rng::seed_from_u64(o.seed.wrapping_add(8));
        let (mut hom, mut diag): (f64, f64) = (0.0, 0.0);
        for _ in 0..5 {
            let f = random_normal_form(&mut rng)?;
            let parent = ContactStructure::derive(f.clone())?;
            for eps in [0.5, 0.2, 0.1] {
                let d = DilatedStructure::new(eps, &f)?;
                for _ in 0..5 {
                    let q = near_point(&mut rng, 0.5);
                    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                        for k in 0..3 {
                            let got = d.structure().constant(i, j, k).eval(q);
                            hom = hom.max((got - homogeneous_constant(&parent, eps, i, j, k, q)).abs());
                        }
                    }
                }
                if eps == 0.1 {
                    continue;
                }
                for _ in 0..4 {
                    let cov = CylCovector::new(rng.gen_range(0.05..1.0), rng.gen_range(0.0..TAU), rng.gen_range(-PI..PI))?;
                    let lhs = d.to_parent(exp_map(d.structure(), &cov, 1e-11)?);
                    let rhs = exp_map(&parent, &tau(eps, &cov), 1e-11)?;
                    for i in 0..3 {
                        diag = diag.max((lhs[i] - rhs[i]).abs());
                    }
                }
            }
        }
        Ok((hom <= 1e-9 && diag <= 1e-8, format!("homogeneity max |Δc| = {hom:.2e}; diagram max |Δ| = {diag:.2e} (ODE tol 1e-11)")))
    })
}

/// 9: (ψ(δ_t q) − 1)/t² → −2γ^[2](q) with a linear-in-t remainder.
pub fn criterion_9(o: &SuiteOptions) -> Outcome {
    run("9", "Popp density expansion", None, || {
        let mut rng = ChaCha8Rng::seed_from_u64(o.seed.wrapping_add(9));
        let f = random_normal_form(&mut rng)?;
        let spec_gamma = gamma_of(&f);
        let s = ContactStructure::derive(f)?;
        let (a, b, c) = spec_gamma;
        let mut ok = true;
        let mut min_order: f64 = f64::INFINITY;
        let mut worst: f64 = 0.0;
        for _ in 0..10 {
            let v: Point = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            let q = v.map(|x| x / n);
            let target = -2.0 * (a * q[0] * q[0] + 2.0 * b * q[0] * q[1] + c * q[1] * q[1]);
            let ts = [4e-3, 2e-3, 1e-3];
            let mut r = [0.0; 3];
            for (k, t) in ts.iter().enumerate() {
                let p = [t * q[0], t * q[1], t * t * q[2]];
                r[k] = (popp_density(&s, p)? - 1.0) / (t * t) - target;
            }
            let order = (r[1].abs() / r[2].abs()).log2();
            let ratio_prev = (r[0].abs() / r[1].abs()).log2();
            min_order = min_order.min(order.min(ratio_prev));
            worst = worst.max(r[2].abs());
            ok &= order >= 0.9 && ratio_prev >= 0.9 && r[2].abs() <= 0.05;
        }
        Ok((ok, format!("smallest observed remainder order {min_order:.3}; max remainder at t = 1e-3: {worst:.3e}")))
    })
}

fn gamma_of(f: &FrameField) -> (f64, f64, f64) {
    // γ is recoverable from the z-component of X₂ on z = 0: x(1 + γ)/2.
    let c = f.x2.components[2].numerator();
    let g = Polynomial::from_terms(c.terms().filter(|(m, _)| m.0[0] >= 1).map(|(m, v)| {
        let mut e = m.0;
        e[0] -= 1;
        (e, 2.0 * v)
    }));
    let g = &g - &Polynomial::one();
    let spec = NormalFormSpec::new(Polynomial::zero(), g.at_z_zero());
    spec.map(|s| gamma2(&s)).unwrap_or((0.0, 0.0, 0.0))
}

pub type Criterion = fn(&SuiteOptions) -> Outcome;

pub const CRITERIA: [Criterion; 9] =
    [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8, criterion_9];

pub fn acceptance_suite(o: &SuiteOptions) -> Vec<Outcome> {
    CRITERIA.iter().map(|c| c(o)).collect()
}

/// Consistency checks of one structure at and near the origin.
pub fn structure_checks(s: &ContactStructure, seed: u64) -> Vec<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<Point> = std::iter::once([0.0; 3]).chain((0..20).map(|_| near_point(&mut rng, 0.05))).collect();
    let mut out = Vec::new();
    out.push(run("s1", "contact form and Reeb conditions", None, || {
        let mut worst: f64 = 0.0;
        for p in &pts {
            let om: Vec<f64> = s.omega().iter().map(|w| w.eval(*p)).collect();
            let pair = |v: [f64; 3]| (0..3).map(|i| om[i] * v[i]).sum::<f64>();
            let x0 = s.reeb().eval(*p);
            worst = worst
                .max(pair(s.frame().x1.eval(*p)).abs())
                .max(pair(s.frame().x2.eval(*p)).abs())
                .max((pair(s.x3().eval(*p)) - 1.0).abs())
                .max((pair(x0) - 1.0).abs());
            for j in 0..3 {
                let r: f64 = (0..3).map(|i| x0[i] * s.domega()[i][j].eval(*p)).sum();
                worst = worst.max(r.abs());
            }
        }
        Ok((worst < 1e-10, format!("max residual {worst:.2e}")))
    }));
    out.push(run("s2", "trace relation c01^1 + c02^2 = 0", None, || {
        let mut worst: f64 = 0.0;
        for p in &pts {
            let c = s.constants_at(*p)?;
            worst = worst.max((c[0][1][1] + c[0][2][2]).abs()).max((c[1][2][0] - 1.0).abs());
        }
        Ok((worst < 1e-10, format!("max residual {worst:.2e}")))
    }));
    out.push(run("s3", "Sec identity", None, || {
        let mut worst: f64 = 0.0;
        for p in &pts {
            worst = worst.max(verify_sec_identity(s, *p)?);
        }
        Ok((worst < 1e-8, format!("max residual {worst:.2e}")))
    }));
    out.push(run("s4", "frame-rotation invariance of chi and kappa", None, || {
        let mut worst: f64 = 0.0;
        for phi in [0.3, 1.7, 4.0] {
            let r = ContactStructure::derive(s.frame().rotated(phi))?;
            for p in pts.iter().take(5) {
                worst = worst
                    .max((chi_at(s, *p)? - chi_at(&r, *p)?).abs())
                    .max((kappa_at(s, *p)? - kappa_at(&r, *p)?).abs());
            }
        }
        Ok((worst < 1e-9, format!("max change {worst:.2e}")))
    }));
    out.push(run("s5", "structure-constant homogeneity", None, || {
        let mut worst: f64 = 0.0;
        for eps in [0.5, 0.1] {
            let d = DilatedStructure::new(eps, s.frame())?;
            for p in pts.iter().take(6) {
                for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                    for k in 0..3 {
                        let got = d.structure().constant(i, j, k).eval(*p);
                        worst = worst.max((got - homogeneous_constant(s, eps, i, j, k, *p)).abs());
                    }
                }
            }
        }
        Ok((worst < 1e-9, format!("max |Δc| = {worst:.2e}")))
    }));
    out.push(run("s6", "Popp density at origin", None, || {
        let psi = popp_density(s, [0.0; 3])?;
        let det = s.det().eval([0.0; 3]);
        Ok((psi.is_finite() && psi > 0.0, format!("psi(0) = {psi:.12}, det = {det:.12}")))
    }));
    out
}
