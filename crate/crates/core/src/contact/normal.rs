use super::frame::FrameField;
use crate::error::{Error, Result};
use crate::polyexpr::{Polynomial, RationalField3, Var};

/// Data (β, γ) of a frame in normal coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalFormSpec {
    beta: Polynomial,
    gamma: Polynomial,
}

impl NormalFormSpec {
    /// Validates the boundary conditions β(0,0,z) ≡ 0 and
    /// γ(0,0,z) ≡ ∂ₓγ(0,0,z) ≡ ∂ᵧγ(0,0,z) ≡ 0.
    pub fn new(beta: Polynomial, gamma: Polynomial) -> Result<NormalFormSpec> {
        let on_axis = |p: &Polynomial| {
            Polynomial::from_terms(
                p.terms()
                    .filter(|(m, _)| m.0[0] == 0 && m.0[1] == 0)
                    .map(|(m, c)| (m.0, *c)),
            )
        };
        let checks = [
            ("beta(0,0,z) = 0", on_axis(&beta)),
            ("gamma(0,0,z) = 0", on_axis(&gamma)),
            ("d/dx gamma(0,0,z) = 0", on_axis(&gamma.partial(Var::X))),
            ("d/dy gamma(0,0,z) = 0", on_axis(&gamma.partial(Var::Y))),
        ];
        for (name, residual) in checks {
            if !residual.is_zero() {
                return Err(Error::BoundaryCondition(format!(
                    "{name} fails: restriction is {residual}"
                )));
            }
        }
        Ok(NormalFormSpec { beta, gamma })
    }

    /// β = 0, γ = ax² + 2bxy + cy².
    pub fn quadratic(a: f64, b: f64, c: f64) -> NormalFormSpec {
        let gamma = Polynomial::from_terms([([2, 0, 0], a), ([1, 1, 0], 2.0 * b), ([0, 2, 0], c)]);
        NormalFormSpec { beta: Polynomial::zero(), gamma }
    }

    pub fn beta(&self) -> &Polynomial {
        &self.beta
    }

    pub fn gamma(&self) -> &Polynomial {
        &self.gamma
    }
}

/// X₁ = ∂x − (y/2)∂z + βy(y∂x − x∂y) − γ(y/2)∂z,
/// X₂ = ∂y + (x/2)∂z − βx(y∂x − x∂y) + γ(x/2)∂z.
pub fn build_normal_frame(spec: &NormalFormSpec) -> Result<FrameField> {
    let x = Polynomial::var(Var::X);
    let y = Polynomial::var(Var::Y);
    let one = Polynomial::one();
    let b = &spec.beta;
    let g = &spec.gamma;
    let half_one_plus_g = (&one + g).scale(0.5);
    let bxy = &(b * &x) * &y;
    let x1 = [
        &one + &(&(b * &y) * &y),
        -&bxy,
        -(&y * &half_one_plus_g),
    ];
    let x2 = [
        -&bxy,
        &one + &(&(b * &x) * &x),
        &x * &half_one_plus_g,
    ];
    FrameField::new(RationalField3::from_polys(x1), RationalField3::from_polys(x2))
}

/// (a, b, c) with γ^[2](x,y) = ax² + 2bxy + cy² read off at z = 0.
pub fn gamma2(spec: &NormalFormSpec) -> (f64, f64, f64) {
    let g = &spec.gamma;
    (g.coefficient([2, 0, 0]), 0.5 * g.coefficient([1, 1, 0]), g.coefficient([0, 2, 0]))
}

/// Labels κ = 2(a+c), χ = 2√(b² + (c−a)²) attached to the quadratic family
/// γ^[2] = ax² + 2bxy + cy².
pub fn nominal_invariants(a: f64, b: f64, c: f64) -> (f64, f64) {
    (2.0 * (a + c), 2.0 * (b * b + (c - a) * (c - a)).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contact::heisenberg_frame;
    use crate::polyexpr::parse_poly;

    #[test]
    fn zero_data_is_heisenberg() {
        let s = NormalFormSpec::new(Polynomial::zero(), Polynomial::zero()).unwrap();
        assert_eq!(build_normal_frame(&s).unwrap(), heisenberg_frame());
    }

    #[test]
    fn radial_gamma_frame_value() {
        let s = NormalFormSpec::new(Polynomial::zero(), parse_poly("x^2 + y^2").unwrap()).unwrap();
        let f = build_normal_frame(&s).unwrap();
        assert_eq!(f.x1.eval([0.0, 1.0, 0.0]), [1.0, 0.0, -1.0]);
    }

    #[test]
    fn boundary_conditions() {
        let lin = NormalFormSpec::new(Polynomial::zero(), parse_poly("x").unwrap());
        match lin {
            Err(Error::BoundaryCondition(m)) => assert!(m.contains("d/dx gamma")),
            other => panic!("expected boundary error, got {other:?}"),
        }
        assert!(NormalFormSpec::new(parse_poly("z").unwrap(), Polynomial::zero()).is_err());
        assert!(NormalFormSpec::new(Polynomial::zero(), parse_poly("z^2").unwrap()).is_err());
        assert!(NormalFormSpec::new(Polynomial::zero(), parse_poly("x*z").unwrap()).is_err());
        assert!(NormalFormSpec::new(parse_poly("x*z").unwrap(), parse_poly("x*y*z + y^3").unwrap()).is_ok());
    }

    #[test]
    fn gamma2_coefficients() {
        let q = |s: &str| gamma2(&NormalFormSpec::new(Polynomial::zero(), parse_poly(s).unwrap()).unwrap());
        assert_eq!(q("x^2 + y^2"), (1.0, 0.0, 1.0));
        assert_eq!(q("2*x*y"), (0.0, 1.0, 0.0));
        assert_eq!(q("x^3"), (0.0, 0.0, 0.0));
    }
}
