//! Popp volume of small balls by quadrature over the dilated exponential
//! map, and the ε-expansion diagnostics built on it.
//!
//! vol B(ε) = ε⁴ ∫ ψ(δ_ε expᵉ(ρ,θ,w))·|det J expᵉ| over ρ ≤ 1, θ ∈ [0,2π),
//! |w| ≤ 2π − ε²ρ²f(θ), where expᵉ is the exponential map of the dilated
//! frame and ψ the Popp density of the original one.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::contact::{chi_at, kappa_at, popp_density, ContactStructure};
use crate::cutdomain::{w_bound, OmegaDomain};
use crate::dilation::{dilate_point, DilatedStructure};
use crate::error::{Error, Result};
use crate::geodesic::{exp_with_jacobian, CylCovector, DEFAULT_FD_STEP};
use crate::heisenberg::{c0, c1, h_profile, heis_jacobian, sine_integral};
use crate::parallel::{map_ordered, Execution};
use crate::quadrature::{integrate_adaptive, GaussLegendre};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub n_rho: usize,
    pub n_theta: usize,
    pub n_w: usize,
    pub tol_ode: f64,
    pub fd_step: f64,
    /// When set, the rule is re-run with doubled node counts and a relative
    /// change above 10× this value is an error.
    pub convergence_tol: Option<f64>,
    pub execution: Execution,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            n_rho: 16,
            n_theta: 32,
            n_w: 48,
            tol_ode: 1e-10,
            fd_step: DEFAULT_FD_STEP,
            convergence_tol: None,
            execution: Execution::default(),
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_rho < 4 || self.n_theta < 4 || self.n_w < 4 {
            return Err(Error::InvalidArgument("quadrature counts must be at least 4".into()));
        }
        if self.n_theta % 2 != 0 {
            return Err(Error::InvalidArgument("n_theta must be even".into()));
        }
        Ok(())
    }

    pub fn doubled(&self) -> QuadratureSpec {
        QuadratureSpec {
            n_rho: 2 * self.n_rho,
            n_theta: 2 * self.n_theta,
            n_w: 2 * self.n_w,
            convergence_tol: None,
            ..*self
        }
    }

    pub fn nodes(&self) -> usize {
        self.n_rho * self.n_theta * self.n_w
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VolumeResult {
    pub eps: f64,
    pub volume: f64,
    /// volume / ε⁴.
    pub scaled: f64,
    pub nodes: usize,
    /// Nodes inside the domain where det J expᵉ < 0.
    pub negative_jacobian: usize,
    pub min_jacobian: f64,
    /// Relative change under node doubling, when requested.
    pub doubling_change: Option<f64>,
}

/// Popp volume of the ε-ball at the origin.
pub fn ball_volume(s: &ContactStructure, eps: f64, quad: &QuadratureSpec) -> Result<VolumeResult> {
    quad.validate()?;
    let o = [0.0; 3];
    let domain = OmegaDomain::new(eps, kappa_at(s, o)?, chi_at(s, o)?);
    domain.validate()?;
    let dilated = DilatedStructure::new(eps, s.frame())?;
    let mut r = volume_rule(s, &dilated, &domain, quad)?;
    if let Some(tol) = quad.convergence_tol {
        let fine = volume_rule(s, &dilated, &domain, &quad.doubled())?;
        let change = ((fine.scaled - r.scaled) / fine.scaled).abs();
        r.doubling_change = Some(change);
        if change > 10.0 * tol {
            return Err(Error::Quadrature(format!(
                "doubling nodes changed the volume by {change:e} (relative) at eps = {eps}"
            )));
        }
    }
    Ok(r)
}

struct Node {
    cov: CylCovector,
    weight: f64,
}

fn volume_rule(
    parent: &ContactStructure,
    dilated: &DilatedStructure<'_>,
    domain: &OmegaDomain,
    quad: &QuadratureSpec,
) -> Result<VolumeResult> {
    let eps = dilated.epsilon;
    let rho_rule = GaussLegendre::on(quad.n_rho, 0.0, domain.rho_max);
    let w_rule = GaussLegendre::new(quad.n_w);
    let dtheta = TAU / quad.n_theta as f64;
    let mut nodes = Vec::with_capacity(quad.nodes());
    for (rho, wr) in rho_rule.nodes.iter().zip(&rho_rule.weights) {
        for j in 0..quad.n_theta {
            let theta = dtheta * j as f64;
            let b = w_bound(domain, *rho, theta)?;
            for (x, ww) in w_rule.nodes.iter().zip(&w_rule.weights) {
                nodes.push(Node { cov: CylCovector { rho: *rho, theta, w: b * x }, weight: wr * dtheta * b * ww });
            }
        }
    }
    let ds = dilated.structure();
    let values = map_ordered(quad.execution, &nodes, |n| -> Result<(f64, f64)> {
        let e = exp_with_jacobian(ds, &n.cov, quad.fd_step, quad.tol_ode)?;
        let psi = popp_density(parent, dilate_point(eps, e.point))?;
        Ok((psi * e.det.abs(), e.det))
    });
    let mut sum = 0.0;
    let mut negative = 0;
    let mut min_j = f64::INFINITY;
    for (n, v) in nodes.iter().zip(values) {
        let (u, det) = v?;
        sum += n.weight * u;
        if det < 0.0 {
            negative += 1;
        }
        min_j = min_j.min(det);
    }
    Ok(VolumeResult {
        eps,
        volume: eps.powi(4) * sum,
        scaled: sum,
        nodes: nodes.len(),
        negative_jacobian: negative,
        min_jacobian: min_j,
        doubling_change: None,
    })
}

/// Default ε ladder for expansion fits.
pub const DEFAULT_LADDER: [f64; 5] = [0.20, 0.15, 0.10, 0.07, 0.05];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpansionReport {
    pub eps_list: Vec<f64>,
    pub volumes: Vec<f64>,
    /// volume / ε⁴ per ε.
    pub scaled: Vec<f64>,
    pub c0_est: f64,
    /// Estimate of the ε² coefficient of vol/(c₀ε⁴).
    pub slope_est: f64,
    pub residuals: Vec<f64>,
    pub c0: f64,
    pub c1: f64,
    /// κ(0) and χ(0) of the structure.
    pub kappa: f64,
    pub chi: f64,
    pub negative_jacobian: usize,
}

impl ExpansionReport {
    /// −c₁κ for a given κ.
    pub fn predicted_slope(&self, kappa: f64) -> f64 {
        -self.c1 * kappa
    }
}

/// Least-squares fit of y = A + Bx; returns (A, B, residuals).
pub fn fit_line(x: &[f64], y: &[f64]) -> Result<(f64, f64, Vec<f64>)> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    if !(sxx > 1e-14 * x.iter().map(|v| v * v).sum::<f64>()) {
        return Err(Error::Conditioning("abscissae are (nearly) identical".into()));
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let b = sxy / sxx;
    let a = my - b * mx;
    let res = x.iter().zip(y).map(|(u, v)| v - (a + b * u)).collect();
    Ok((a, b, res))
}

/// Volumes along an ε ladder and the fit vol/ε⁴ = c₀_est(1 + slope·ε²).
pub fn fit_expansion(s: &ContactStructure, eps_list: &[f64], quad: &QuadratureSpec) -> Result<ExpansionReport> {
    if eps_list.len() < 4 {
        return Err(Error::InvalidArgument("the eps ladder needs at least 4 entries".into()));
    }
    if eps_list.windows(2).any(|w| !(w[1] < w[0])) || eps_list[0] > 0.3 || eps_list.iter().any(|e| !(*e > 0.0)) {
        return Err(Error::InvalidArgument("the eps ladder must be strictly decreasing within (0, 0.3]".into()));
    }
    let mut volumes = Vec::new();
    let mut scaled = Vec::new();
    let mut negative = 0;
    for &e in eps_list {
        let r = ball_volume(s, e, quad)?;
        volumes.push(r.volume);
        scaled.push(r.scaled);
        negative += r.negative_jacobian;
    }
    let x: Vec<f64> = eps_list.iter().map(|e| e * e).collect();
    let (a, b, residuals) = fit_line(&x, &scaled)?;
    let o = [0.0; 3];
    Ok(ExpansionReport {
        eps_list: eps_list.to_vec(),
        volumes,
        scaled,
        c0_est: a,
        slope_est: b / a,
        residuals,
        c0: c0(),
        c1: c1(),
        kappa: kappa_at(s, o)?,
        chi: chi_at(s, o)?,
        negative_jacobian: negative,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct V2Options {
    pub n_theta: usize,
    pub tol_ode: f64,
    pub fd_step: f64,
    pub execution: Execution,
    /// Below this observed order the extrapolation is rejected.
    pub min_order: f64,
}

impl Default for V2Options {
    fn default() -> Self {
        V2Options { n_theta: 16, tol_ode: 1e-12, fd_step: 1e-3, execution: Execution::default(), min_order: 1.5 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct V2Estimate {
    pub eps_ladder: Vec<f64>,
    /// θ-averaged (det J expᵉ − det J exp⁰)/ε² per ε.
    pub values: Vec<f64>,
    pub limit: f64,
    /// Observed convergence order in ε (NaN when the values are at noise level).
    pub order: f64,
}

/// Order p with (e₁ᵖ − e₂ᵖ)/(e₂ᵖ − e₃ᵖ) = d₁/d₂, by bisection on p ∈ (0, 8).
fn observed_order(e: [f64; 3], d: [f64; 2]) -> f64 {
    let target = d[0] / d[1];
    if !(target > 0.0) || !target.is_finite() {
        return f64::NAN;
    }
    let g = |p: f64| (e[0].powf(p) - e[1].powf(p)) / (e[1].powf(p) - e[2].powf(p)) - target;
    let (mut lo, mut hi) = (1e-6, 8.0);
    if g(lo).signum() == g(hi).signum() {
        return if g(hi) < 0.0 { f64::INFINITY } else { 0.0 };
    }
    for _ in 0..200 {
        let m = 0.5 * (lo + hi);
        if g(m).signum() == g(lo).signum() {
            lo = m;
        } else {
            hi = m;
        }
    }
    0.5 * (lo + hi)
}

/// θ-average of the ε² coefficient of det J expᵉ at (ρ, w), Richardson
/// extrapolated (p = 2) to ε → 0 from the last two ladder entries.
pub fn v2_theta_average(s: &ContactStructure, rho: f64, w: f64, eps_ladder: &[f64]) -> Result<V2Estimate> {
    v2_theta_average_with(s, rho, w, eps_ladder, &V2Options::default())
}

pub fn v2_theta_average_with(
    s: &ContactStructure,
    rho: f64,
    w: f64,
    eps_ladder: &[f64],
    opts: &V2Options,
) -> Result<V2Estimate> {
    if !(w != 0.0 && w.abs() < TAU - 0.1) || !(rho > 0.0 && rho <= 1.0) {
        return Err(Error::InvalidArgument(format!("v2 needs 0 < |w| < 2π − 0.1 and 0 < ρ ≤ 1, got ρ = {rho}, w = {w}")));
    }
    if eps_ladder.len() < 3 {
        return Err(Error::InvalidArgument("v2 extrapolation needs at least 3 ladder entries".into()));
    }
    let j0 = heis_jacobian(rho, 0.0, w);
    let thetas: Vec<f64> = (0..opts.n_theta).map(|j| TAU * j as f64 / opts.n_theta as f64).collect();
    let mut values = Vec::new();
    for &eps in eps_ladder {
        let d = DilatedStructure::new(eps, s.frame())?;
        let ds = d.structure();
        let dets = map_ordered(opts.execution, &thetas, |th| {
            exp_with_jacobian(ds, &CylCovector { rho, theta: *th, w }, opts.fd_step, opts.tol_ode).map(|e| e.det)
        });
        let mut acc = 0.0;
        for v in dets {
            acc += v? - j0;
        }
        values.push(acc / (opts.n_theta as f64 * eps * eps));
    }
    let n = values.len();
    let r = eps_ladder[n - 2] / eps_ladder[n - 1];
    let limit = values[n - 1] + (values[n - 1] - values[n - 2]) / (r * r - 1.0);
    let noise = 1e-6 * rho.powi(5);
    let order = if values.iter().all(|v| v.abs() < noise) {
        f64::NAN
    } else {
        let e = [eps_ladder[n - 3], eps_ladder[n - 2], eps_ladder[n - 1]];
        let d = [values[n - 3] - values[n - 2], values[n - 2] - values[n - 1]];
        let p = observed_order(e, d);
        if !(p >= opts.min_order) {
            return Err(Error::Convergence { order: p, min: opts.min_order });
        }
        p
    };
    Ok(V2Estimate { eps_ladder: eps_ladder.to_vec(), values, limit, order })
}

/// (∫_{−2π}^{2π} (π/2)(5w sin w − (w²−8)cos w − 8)/w⁶ dw,
///  (1/π² − 2 − 4π Si(2π))/160).
pub fn u2_integral_check() -> (f64, f64) {
    let lhs = integrate_adaptive(|w| FRAC_PI_2 * h_profile(w), -TAU, TAU, 1e-14, 1e-14).value;
    let rhs = (1.0 / (PI * PI) - 2.0 - 4.0 * PI * sine_integral(TAU)) / 160.0;
    (lhs, rhs)
}

/// (vol/ε⁴ − c₀)/ε² at one ε: the integrated second-order density.
pub fn u2_from_volume(s: &ContactStructure, eps: f64, quad: &QuadratureSpec) -> Result<f64> {
    let r = ball_volume(s, eps, quad)?;
    Ok((r.scaled - c0()) / (eps * eps))
}
