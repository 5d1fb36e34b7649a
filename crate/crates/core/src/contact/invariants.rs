use super::structure::ContactStructure;
use crate::error::{Point, Result};

/// χ = √((c₀₁² + c₀₂¹)²/4 + (c₀₁¹)²).
pub fn chi_at(s: &ContactStructure, p: Point) -> Result<f64> {
    let c = s.constants_at(p)?;
    let off = c[0][1][2] + c[0][2][1];
    Ok((0.25 * off * off + c[0][1][1] * c[0][1][1]).sqrt())
}

/// χ evaluated with the middle term (c₀₁² + c₀₂²)²/4, for comparison only.
pub fn chi_at_as_printed(s: &ContactStructure, p: Point) -> Result<f64> {
    let c = s.constants_at(p)?;
    let off = c[0][1][2] + c[0][2][2];
    Ok((0.25 * off * off + c[0][1][1] * c[0][1][1]).sqrt())
}

/// κ = X₂(c₁₂¹) − X₁(c₁₂²) − (c₁₂¹)² − (c₁₂²)² + (c₀₁² − c₀₂¹)/2.
pub fn kappa_at(s: &ContactStructure, p: Point) -> Result<f64> {
    let c = s.constants_at(p)?;
    let d2c1 = s.constant_derivative(2, 1, 2, 1).eval(p);
    let d1c2 = s.constant_derivative(1, 1, 2, 2).eval(p);
    let (a, b) = (c[1][2][1], c[1][2][2]);
    Ok(d2c1 - d1c2 - a * a - b * b + 0.5 * (c[0][1][2] - c[0][2][1]))
}

/// Popp density ψ = 1/|det(X₁, X₂, X₃)|.
pub fn popp_density(s: &ContactStructure, p: Point) -> Result<f64> {
    Ok(1.0 / s.ensure_regular(p)?.abs())
}
