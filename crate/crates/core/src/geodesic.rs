//! Normal geodesics in cylindrical covector coordinates (ρ, θ, w).
//!
//! ρ is conserved and enters as a parameter; the phase is (x, y, z, θ, w)
//! with θ unwrapped. Several covectors can be integrated as one stacked ODE,
//! which makes finite differences across them share a step sequence.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::contact::{ContactStructure, FlowCoeffs};
use crate::error::{Error, Point, Result};
use crate::ode::{self, OdeOptions, OdeStats};

/// Default finite-difference step of the Jacobian stencil.
pub const DEFAULT_FD_STEP: f64 = 1e-4;
/// Minimum number of uniform samples in a trace.
pub const TRACE_SAMPLES: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CylCovector {
    pub rho: f64,
    pub theta: f64,
    pub w: f64,
}

impl CylCovector {
    pub fn new(rho: f64, theta: f64, w: f64) -> Result<CylCovector> {
        if !(rho >= 0.0) || !theta.is_finite() || !w.is_finite() {
            return Err(Error::InvalidArgument(format!("covector ({rho}, {theta}, {w}) needs finite values and rho >= 0")));
        }
        Ok(CylCovector { rho, theta, w })
    }

    /// (h₁, h₂, h₀) = (ρ cos θ, ρ sin θ, −w).
    pub fn hamiltonian_coordinates(&self) -> [f64; 3] {
        [self.rho * self.theta.cos(), self.rho * self.theta.sin(), -self.w]
    }

    /// θ reduced to [0, 2π).
    pub fn wrapped_theta(&self) -> f64 {
        self.theta.rem_euclid(TAU)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeodesicState {
    pub pt: Point,
    pub theta: f64,
    pub w: f64,
}

impl GeodesicState {
    pub fn start(cov: &CylCovector) -> GeodesicState {
        GeodesicState { pt: [0.0; 3], theta: cov.theta, w: cov.w }
    }

    fn to_array(self) -> [f64; 5] {
        [self.pt[0], self.pt[1], self.pt[2], self.theta, self.w]
    }

    fn from_slice(s: &[f64]) -> GeodesicState {
        GeodesicState { pt: [s[0], s[1], s[2]], theta: s[3], w: s[4] }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeodesicTrace {
    pub samples: Vec<(f64, GeodesicState)>,
    pub rho: f64,
    /// Largest accepted local error estimate, in units of the tolerance.
    pub tolerance: f64,
    pub steps: usize,
}

impl GeodesicTrace {
    pub fn endpoint(&self) -> Point {
        self.samples.last().map(|s| s.1.pt).unwrap_or([0.0; 3])
    }

    /// CSV with columns t,x,y,z,theta,w; θ is reported in [0, 2π).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,x,y,z,theta,w\n");
        for (t, s) in &self.samples {
            let row = [*t, s.pt[0], s.pt[1], s.pt[2], s.theta.rem_euclid(TAU), s.w];
            let cells: Vec<String> = row.iter().map(|v| crate::report::sig12(*v)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

#[inline]
fn rhs_coeffs(c: &FlowCoeffs, rho: f64, y: &[f64], dy: &mut [f64]) {
    let (s, co) = y[3].sin_cos();
    let (u, v) = (rho * co, rho * s);
    for i in 0..3 {
        dy[i] = u * c.x1[i] + v * c.x2[i];
    }
    let b = c.c12_1 * co + c.c12_2 * s;
    let a = c.c01_1 * co * co + (c.c01_2 + c.c02_1) * co * s + c.c02_2 * s * s;
    dy[3] = y[4] - rho * b;
    dy[4] = -rho * rho * a;
}

/// Time derivative of the phase at `state` for speed `rho`.
pub fn rhs(s: &ContactStructure, rho: f64, state: &GeodesicState) -> Result<GeodesicState> {
    let c = s.flow().eval(state.pt)?;
    let mut d = [0.0; 5];
    rhs_coeffs(&c, rho, &state.to_array(), &mut d);
    Ok(GeodesicState::from_slice(&d))
}

fn check_tol(tol: f64) -> Result<()> {
    if !(1e-13..=1e-6).contains(&tol) {
        return Err(Error::InvalidArgument(format!("ODE tolerance {tol} outside [1e-13, 1e-6]")));
    }
    Ok(())
}

/// Solution on [0, t_final] sampled at ≥ 64 uniform times plus every
/// accepted step.
pub fn integrate(s: &ContactStructure, cov: &CylCovector, t_final: f64, tol: f64) -> Result<GeodesicTrace> {
    check_tol(tol)?;
    if !(t_final > 0.0) || !t_final.is_finite() {
        return Err(Error::InvalidArgument(format!("t_final = {t_final} must be positive")));
    }
    let flow = s.flow();
    let rho = cov.rho;
    let mut y = GeodesicState::start(cov).to_array();
    let stops: Vec<f64> = (1..=TRACE_SAMPLES).map(|k| t_final * k as f64 / TRACE_SAMPLES as f64).collect();
    let mut samples = Vec::new();
    let stats = ode::integrate(
        |_, y, dy| {
            let c = flow.eval([y[0], y[1], y[2]])?;
            rhs_coeffs(&c, rho, y, dy);
            Ok(())
        },
        0.0,
        &mut y,
        t_final,
        &OdeOptions::with_tol(tol),
        &stops,
        |t, y| samples.push((t, GeodesicState::from_slice(y))),
    )?;
    Ok(GeodesicTrace { samples, rho, tolerance: stats.max_error, steps: stats.accepted })
}

/// Time-1 endpoints of several covectors integrated as one stacked system.
pub fn flow_endpoints(s: &ContactStructure, covs: &[CylCovector], tol: f64) -> Result<(Vec<Point>, OdeStats)> {
    check_tol(tol)?;
    let flow = s.flow();
    let mut y: Vec<f64> = covs.iter().flat_map(|c| GeodesicState::start(c).to_array()).collect();
    let rhos: Vec<f64> = covs.iter().map(|c| c.rho).collect();
    let stats = ode::integrate(
        |_, y, dy| {
            for (k, rho) in rhos.iter().enumerate() {
                let b = 5 * k;
                let c = flow.eval([y[b], y[b + 1], y[b + 2]])?;
                rhs_coeffs(&c, *rho, &y[b..b + 5], &mut dy[b..b + 5]);
            }
            Ok(())
        },
        0.0,
        &mut y,
        1.0,
        &OdeOptions::with_tol(tol),
        &[],
        |_, _| {},
    )?;
    let pts = (0..covs.len()).map(|k| [y[5 * k], y[5 * k + 1], y[5 * k + 2]]).collect();
    Ok((pts, stats))
}

/// exp(ρ, θ, w): time-1 endpoint from the origin; ρ = 0 maps to the origin.
pub fn exp_map(s: &ContactStructure, cov: &CylCovector, tol: f64) -> Result<Point> {
    if cov.rho == 0.0 {
        return Ok([0.0; 3]);
    }
    Ok(flow_endpoints(s, std::slice::from_ref(cov), tol)?.0[0])
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Endpoint and Jacobian at one covector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExpJacobian {
    pub point: Point,
    pub det: f64,
    /// ∂exp/∂(ρ, θ, w), columns indexed by the covector coordinate.
    pub matrix: [[f64; 3]; 3],
    /// Jacobian determinants from the h and h/2 stencils alone.
    pub det_coarse: f64,
    pub det_fine: f64,
}

/// exp(cov) and det J exp via central differences at steps h and h/2,
/// combined by one Richardson step; all 13 trajectories share steps.
pub fn exp_with_jacobian(s: &ContactStructure, cov: &CylCovector, fd_step: f64, tol: f64) -> Result<ExpJacobian> {
    if !(fd_step > 0.0) {
        return Err(Error::InvalidArgument(format!("fd_step = {fd_step} must be positive")));
    }
    let mut covs = Vec::with_capacity(13);
    covs.push(*cov);
    for h in [fd_step, 0.5 * fd_step] {
        for k in 0..3 {
            for sign in [1.0, -1.0] {
                let mut c = *cov;
                match k {
                    0 => c.rho += sign * h,
                    1 => c.theta += sign * h,
                    _ => c.w += sign * h,
                }
                covs.push(c);
            }
        }
    }
    let (pts, _) = flow_endpoints(s, &covs, tol)?;
    let diff = |level: usize, h: f64| -> [[f64; 3]; 3] {
        let mut m = [[0.0; 3]; 3];
        for k in 0..3 {
            let p = pts[1 + 6 * level + 2 * k];
            let q = pts[2 + 6 * level + 2 * k];
            for i in 0..3 {
                m[i][k] = (p[i] - q[i]) / (2.0 * h);
            }
        }
        m
    };
    let coarse = diff(0, fd_step);
    let fine = diff(1, 0.5 * fd_step);
    let mut matrix = [[0.0; 3]; 3];
    for i in 0..3 {
        for k in 0..3 {
            matrix[i][k] = (4.0 * fine[i][k] - coarse[i][k]) / 3.0;
        }
    }
    Ok(ExpJacobian {
        point: pts[0],
        det: det3(&matrix),
        matrix,
        det_coarse: det3(&coarse),
        det_fine: det3(&fine),
    })
}

/// det J exp at `cov` with respect to (ρ, θ, w).
pub fn jacobian_exp(s: &ContactStructure, cov: &CylCovector, fd_step: f64, tol: f64) -> Result<f64> {
    if !(cov.rho > 0.0) {
        return Err(Error::InvalidArgument("jacobian_exp needs rho > 0".into()));
    }
    Ok(exp_with_jacobian(s, cov, fd_step, tol)?.det)
}

/// First t > 0 at which det J exp changes sign along t ↦ (t, θ, tw).
pub fn first_conjugate_time(s: &ContactStructure, theta: f64, w: f64, tol: f64) -> Result<f64> {
    if w == 0.0 || !w.is_finite() {
        return Err(Error::InvalidArgument("first_conjugate_time needs w != 0".into()));
    }
    let ode_tol = 1e-11;
    let period = TAU / w.abs();
    let limit = 3.0 * period;
    let step = 0.02 * period;
    let j = |t: f64| jacobian_exp(s, &CylCovector { rho: t, theta, w: t * w }, DEFAULT_FD_STEP.min(0.1 * t), ode_tol);
    let mut a = step;
    let mut ja = j(a)?;
    while a < limit {
        let b = (a + step).min(limit);
        let jb = j(b)?;
        if ja == 0.0 {
            return Ok(a);
        }
        if ja.signum() != jb.signum() {
            let (mut lo, mut hi, mut jlo) = (a, b, ja);
            while hi - lo > tol {
                let m = 0.5 * (lo + hi);
                let jm = j(m)?;
                if jm.signum() == jlo.signum() {
                    lo = m;
                    jlo = jm;
                } else {
                    hi = m;
                }
            }
            return Ok(0.5 * (lo + hi));
        }
        a = b;
        ja = jb;
    }
    Err(Error::NotFound { limit })
}
