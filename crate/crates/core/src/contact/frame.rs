use crate::error::{Error, Point, Result};
use crate::polyexpr::{lie_bracket, Polynomial, RationalField3, Var};

/// Contact condition threshold on |det(X₁, X₂, [X₂,X₁])|.
pub const DET_THRESHOLD: f64 = 1e-10;

pub(crate) fn det3(a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> f64 {
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0])
}

/// Orthonormal frame (X₁, X₂) of a contact distribution near the origin.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameField {
    pub x1: RationalField3,
    pub x2: RationalField3,
}

impl FrameField {
    /// Checks the contact condition at the origin.
    pub fn new(x1: RationalField3, x2: RationalField3) -> Result<FrameField> {
        let f = FrameField { x1, x2 };
        f.check_at([0.0; 3])?;
        Ok(f)
    }

    pub(crate) fn new_unchecked(x1: RationalField3, x2: RationalField3) -> FrameField {
        FrameField { x1, x2 }
    }

    pub fn from_polys(x1: [Polynomial; 3], x2: [Polynomial; 3]) -> Result<FrameField> {
        FrameField::new(RationalField3::from_polys(x1), RationalField3::from_polys(x2))
    }

    /// X₃ = [X₂, X₁].
    pub fn x3(&self) -> RationalField3 {
        lie_bracket(&self.x2, &self.x1)
    }

    pub fn det_at(&self, p: Point) -> f64 {
        det3(self.x1.eval(p), self.x2.eval(p), self.x3().eval(p))
    }

    pub fn check_at(&self, p: Point) -> Result<f64> {
        let d = self.det_at(p);
        if d.abs() < DET_THRESHOLD || !d.is_finite() {
            return Err(Error::Degenerate { point: p, det: d, threshold: DET_THRESHOLD });
        }
        Ok(d)
    }

    /// Frame rotated by a constant angle.
    pub fn rotated(&self, phi: f64) -> FrameField {
        let (s, c) = phi.sin_cos();
        FrameField {
            x1: self.x1.scale(c).add(&self.x2.scale(s)),
            x2: self.x1.scale(-s).add(&self.x2.scale(c)),
        }
    }
}

/// X₁ = ∂x − (y/2)∂z, X₂ = ∂y + (x/2)∂z.
pub fn heisenberg_frame() -> FrameField {
    let x = Polynomial::var(Var::X);
    let y = Polynomial::var(Var::Y);
    FrameField::new_unchecked(
        RationalField3::from_polys([Polynomial::one(), Polynomial::zero(), y.scale(-0.5)]),
        RationalField3::from_polys([Polynomial::zero(), Polynomial::one(), x.scale(0.5)]),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heisenberg_values() {
        let h = heisenberg_frame();
        assert_eq!(h.x1.eval([0.0, 2.0, 0.0]), [1.0, 0.0, -1.0]);
        assert_eq!(h.x3(), RationalField3::coordinate(Var::Z).scale(-1.0));
        assert_eq!(h.det_at([0.3, 0.1, 9.0]), -1.0);
    }

    #[test]
    fn degenerate_frame_rejected() {
        let dx = RationalField3::coordinate(Var::X);
        let dy = RationalField3::coordinate(Var::Y);
        assert!(matches!(FrameField::new(dx, dy), Err(Error::Degenerate { .. })));
    }
}
