//! Levi-Civita connection of the metric making {X₀, X₁, X₂} orthonormal, and
//! the sectional curvature of the distribution plane.

use crate::contact::{chi_at, kappa_at, ConstTable, ContactStructure};
use crate::error::{Error, Point, Result};

/// Structure constants of {X₀, X₁, X₂} at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtendedConstants {
    pub c: ConstTable<f64>,
}

impl ExtendedConstants {
    pub fn new(c: ConstTable<f64>) -> Result<ExtendedConstants> {
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let s = c[i][j][k] + c[j][i][k];
                    if s.abs() > 1e-12 * (1.0 + c[i][j][k].abs()) {
                        return Err(Error::InvalidArgument(format!("c[{i}][{j}][{k}] is not antisymmetric")));
                    }
                }
            }
        }
        Ok(ExtendedConstants { c })
    }

    pub fn at(s: &ContactStructure, p: Point) -> Result<ExtendedConstants> {
        Ok(ExtendedConstants { c: s.constants_at(p)? })
    }
}

/// Γᵢⱼᵏ = −½(cᵢⱼᵏ − cⱼₖⁱ + cₖᵢʲ).
pub fn christoffel(ext: &ExtendedConstants) -> ConstTable<f64> {
    let c = &ext.c;
    std::array::from_fn(|i| {
        std::array::from_fn(|j| std::array::from_fn(|k| -0.5 * (c[i][j][k] - c[j][k][i] + c[k][i][j])))
    })
}

/// Xₘ(Γᵢⱼᵏ) at `p`.
fn christoffel_derivative(s: &ContactStructure, m: usize, i: usize, j: usize, k: usize, p: Point) -> f64 {
    let d = |a, b, c| s.constant_derivative(m, a, b, c).eval(p);
    -0.5 * (d(i, j, k) - d(j, k, i) + d(k, i, j))
}

/// Sec(D) from the Christoffel symbols:
/// X₁(Γ₂₂¹) − X₂(Γ₁₂¹) + Σₖ(Γ₂₂ᵏΓ₁ₖ¹ − Γ₁₂ᵏΓ₂ₖ¹ + c₁₂ᵏΓₖ₂¹).
pub fn sectional_d(s: &ContactStructure, p: Point) -> Result<f64> {
    let ext = ExtendedConstants::at(s, p)?;
    let g = christoffel(&ext);
    let mut sec = christoffel_derivative(s, 1, 2, 2, 1, p) - christoffel_derivative(s, 2, 1, 2, 1, p);
    for k in 0..3 {
        sec += g[2][2][k] * g[1][k][1] - g[1][2][k] * g[2][k][1] + ext.c[1][2][k] * g[k][2][1];
    }
    Ok(sec)
}

/// Sec(D) by the closed expression
/// −X₁(c₁₂²) + X₂(c₁₂¹) − (c₁₂¹)² − (c₁₂²)² + (c₀₁² − c₀₂¹)/2 + (c₀₁¹)² + (c₀₂¹ + c₀₁²)²/4 − 3/4.
pub fn sectional_d_formula(s: &ContactStructure, p: Point) -> Result<f64> {
    let c = s.constants_at(p)?;
    let d1 = s.constant_derivative(1, 1, 2, 2).eval(p);
    let d2 = s.constant_derivative(2, 1, 2, 1).eval(p);
    let (a, b) = (c[1][2][1], c[1][2][2]);
    let off = c[0][2][1] + c[0][1][2];
    Ok(-d1 + d2 - a * a - b * b + 0.5 * (c[0][1][2] - c[0][2][1]) + c[0][1][1].powi(2) + 0.25 * off * off - 0.75)
}

/// |Sec(D) − (κ + χ² − 3/4)|.
pub fn verify_sec_identity(s: &ContactStructure, p: Point) -> Result<f64> {
    let k = kappa_at(s, p)?;
    let x = chi_at(s, p)?;
    Ok((sectional_d(s, p)? - (k + x * x - 0.75)).abs())
}
