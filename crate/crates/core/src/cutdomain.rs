//! Asymptotic cut time and the truncated injectivity domain in (ρ, θ, w).

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};

/// |w| below which the large-|w| cut-time expansion is flagged.
pub const DEFAULT_CUT_GUARD: f64 = 4.0 * PI;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CutTime {
    pub value: f64,
    /// True when |w| is below the guard and the expansion is unreliable.
    pub outside_regime: bool,
}

/// 2π/|w| − π(κ + 2χ sin²θ)/|w|³.
pub fn cut_time_asymptotic(kappa: f64, chi: f64, theta: f64, w: f64) -> CutTime {
    cut_time_asymptotic_guarded(kappa, chi, theta, w, DEFAULT_CUT_GUARD)
}

pub fn cut_time_asymptotic_guarded(kappa: f64, chi: f64, theta: f64, w: f64, guard: f64) -> CutTime {
    let a = w.abs();
    let s = theta.sin();
    CutTime {
        value: TAU / a - PI * (kappa + 2.0 * chi * s * s) / a.powi(3),
        outside_regime: a < guard,
    }
}

/// f(θ) = (κ + 2χ sin²θ)/(4π).
pub fn f_theta(kappa: f64, chi: f64, theta: f64) -> f64 {
    let s = theta.sin();
    (kappa + 2.0 * chi * s * s) / (4.0 * PI)
}

/// 2π/ρ − (κ + 2χ sin²θ)ρ/(4π).
pub fn inverse_cut(kappa: f64, chi: f64, theta: f64, rho: f64) -> f64 {
    TAU / rho - rho * f_theta(kappa, chi, theta)
}

/// Parameter domain {ρ ≤ ρ_max, |w| ≤ 2π − ε²ρ²f(θ)} of the dilated
/// exponential map.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OmegaDomain {
    pub eps: f64,
    pub kappa: f64,
    pub chi: f64,
    pub rho_max: f64,
}

impl OmegaDomain {
    pub fn new(eps: f64, kappa: f64, chi: f64) -> OmegaDomain {
        OmegaDomain { eps, kappa, chi, rho_max: 1.0 }
    }

    pub fn heisenberg() -> OmegaDomain {
        OmegaDomain::new(0.0, 0.0, 0.0)
    }

    /// Fails if the bound is nonpositive somewhere on ρ ≤ ρ_max.
    pub fn validate(&self) -> Result<()> {
        let worst = self.kappa.max(self.kappa + 2.0 * self.chi) / (4.0 * PI);
        let b = TAU - self.eps * self.eps * self.rho_max * self.rho_max * worst;
        if !(b > 0.0) {
            return Err(Error::Domain(format!("w bound {b} at eps = {}", self.eps)));
        }
        Ok(())
    }
}

/// 2π − ε²ρ²f(θ); the domain is |w| ≤ this value.
pub fn w_bound(d: &OmegaDomain, rho: f64, theta: f64) -> Result<f64> {
    let b = TAU - d.eps * d.eps * rho * rho * f_theta(d.kappa, d.chi, theta);
    if !(b > 0.0) {
        return Err(Error::Domain(format!("w bound {b} at eps = {}, rho = {rho}", d.eps)));
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cut_time_values() {
        assert_eq!(cut_time_asymptotic(0.0, 0.0, 1.0, 5.0 * PI).value, TAU / (5.0 * PI));
        let c = cut_time_asymptotic(2.0, 0.0, 0.3, 4.0 * PI);
        assert!((c.value - (0.5 - 1.0 / (32.0 * PI * PI))).abs() < 1e-15);
        assert!(!c.outside_regime);
        assert!(cut_time_asymptotic(1.0, 1.0, 0.0, 3.0).outside_regime);
        let th = 0.77;
        let a = cut_time_asymptotic(1.0, 3.0, th, -20.0).value;
        let b = cut_time_asymptotic(1.0, 3.0, PI - th, -20.0).value;
        assert!((a - b).abs() < 1e-15);
    }

    #[test]
    fn f_values() {
        assert_eq!(f_theta(0.0, 0.0, 1.0), 0.0);
        assert!((f_theta(2.0, 0.0, 0.4) - 1.0 / TAU).abs() < 1e-16);
        assert!((f_theta(0.0, 4.0, PI / 2.0) - 2.0 / PI).abs() < 1e-15);
    }

    #[test]
    fn w_bound_values() {
        let h = OmegaDomain::new(0.2, 0.0, 0.0);
        assert_eq!(w_bound(&h, 1.0, 0.3).unwrap(), TAU);
        let d = OmegaDomain::new(0.1, 2.0, 0.0);
        assert!((w_bound(&d, 1.0, 0.0).unwrap() - (TAU - 0.01 / TAU)).abs() < 1e-15);
        let tiny = OmegaDomain::new(1e-8, 2.0, 1.0);
        assert!((w_bound(&tiny, 1.0, 1.0).unwrap() - TAU).abs() < 1e-14);
        let big = OmegaDomain::new(10.0, 4.0, 0.0);
        assert!(w_bound(&big, 1.0, 0.0).is_err());
        assert!(big.validate().is_err());
        assert!(d.validate().is_ok());
    }

    #[test]
    fn inverse_cut_values() {
        assert!((inverse_cut(0.0, 0.0, 0.0, 0.1) - 20.0 * PI).abs() < 1e-12);
        assert!((inverse_cut(2.0, 0.0, 0.0, 0.1) - (20.0 * PI - 0.2 / (4.0 * PI))).abs() < 1e-12);
        for &rho in &[0.05, 0.1] {
            for &th in &[0.0, 0.9] {
                let w = inverse_cut(2.0, 1.5, th, rho);
                let t = cut_time_asymptotic(2.0, 1.5, th, w).value;
                assert!((t - rho).abs() < 5.0 * rho.powi(3), "rho={rho}: {t}");
            }
        }
    }

    #[test]
    fn multiplied_inverse_cut_is_w_bound() {
        for &(k, x, th, rho) in &[(2.0, 0.0, 0.0, 0.3), (1.0, 3.0, 1.1, 0.7), (-2.0, 0.5, 2.0, 0.05)] {
            let d = OmegaDomain::new(1.0, k, x);
            let lhs = rho * inverse_cut(k, x, th, rho);
            assert!((lhs - w_bound(&d, rho, th).unwrap()).abs() < 1e-14);
        }
    }
}
