//! Anisotropic dilations δ_ε(x, y, z) = (εx, εy, ε²z), dilated frames and the
//! covector rescaling τ_ε.

use crate::contact::{ContactStructure, FrameField};
use crate::error::{Error, Point, Result};
use crate::geodesic::CylCovector;

/// Weights (d₀, d₁, d₂) = (2, 1, 1) of the frame {X₀, X₁, X₂}.
pub const WEIGHTS: [i32; 3] = [2, 1, 1];

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::InvalidArgument(format!("epsilon = {eps} must be positive")));
    }
    Ok(())
}

pub fn dilate_point(eps: f64, p: Point) -> Point {
    [eps * p[0], eps * p[1], eps * eps * p[2]]
}

pub fn contract_point(eps: f64, p: Point) -> Point {
    dilate_point(1.0 / eps, p)
}

/// X_iᵉ = ε(δ_{1/ε})_* X_i, i.e. X_iᵉ(q) = diag(1, 1, 1/ε)·X_i(δ_ε q).
pub fn dilate_frame(eps: f64, frame: &FrameField) -> Result<FrameField> {
    check_eps(eps)?;
    if eps == 1.0 {
        return Ok(frame.clone());
    }
    let s = [eps, eps, eps * eps];
    let c = [1.0, 1.0, 1.0 / eps];
    FrameField::new(
        frame.x1.scale_vars(s).scale_components(c),
        frame.x2.scale_vars(s).scale_components(c),
    )
}

/// τ_ε(ρ, θ, w) = (ερ, θ, w).
pub fn tau(eps: f64, cov: &CylCovector) -> CylCovector {
    CylCovector { rho: eps * cov.rho, ..*cov }
}

/// The structure of the ε-dilated frame, tied to its parent frame.
#[derive(Debug)]
pub struct DilatedStructure<'a> {
    pub epsilon: f64,
    pub frame: FrameField,
    pub parent: &'a FrameField,
    structure: ContactStructure,
}

impl<'a> DilatedStructure<'a> {
    pub fn new(eps: f64, parent: &'a FrameField) -> Result<DilatedStructure<'a>> {
        let frame = dilate_frame(eps, parent)?;
        let structure = ContactStructure::derive(frame.clone())?;
        Ok(DilatedStructure { epsilon: eps, frame, parent, structure })
    }

    pub fn structure(&self) -> &ContactStructure {
        &self.structure
    }

    /// Point of the original coordinates corresponding to `q`.
    pub fn to_parent(&self, q: Point) -> Point {
        dilate_point(self.epsilon, q)
    }
}

/// ε^{dᵢ+dⱼ−dₖ}·cᵢⱼᵏ(δ_ε q): the constants of the dilated structure predicted
/// from the parent.
pub fn homogeneous_constant(parent: &ContactStructure, eps: f64, i: usize, j: usize, k: usize, q: Point) -> f64 {
    let e = WEIGHTS[i] + WEIGHTS[j] - WEIGHTS[k];
    eps.powi(e) * parent.constant(i, j, k).eval(dilate_point(eps, q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contact::{build_normal_frame, heisenberg_frame, NormalFormSpec};
    use crate::geodesic::exp_map;
    use crate::polyexpr::{parse_poly, Polynomial, RationalField3, Var};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn point_maps() {
        let e = 0.3;
        assert_eq!(dilate_point(e, [1.0, 1.0, 1.0]), [e, e, e * e]);
        assert_eq!(dilate_point(1.0, [0.2, -0.1, 4.0]), [0.2, -0.1, 4.0]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let p: Point = std::array::from_fn(|_| rng.gen_range(-2.0..2.0));
            let q = dilate_point(e, contract_point(e, p));
            for i in 0..3 {
                assert!((p[i] - q[i]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn heisenberg_frame_fixed() {
        let h = heisenberg_frame();
        for eps in [0.5, 0.1, 2.0] {
            let d = dilate_frame(eps, &h).unwrap();
            assert!(d.x1.sub(&h.x1).is_zero() && d.x2.sub(&h.x2).is_zero());
        }
        assert_eq!(dilate_frame(1.0, &h).unwrap(), h);
        assert!(dilate_frame(0.0, &h).is_err());
    }

    #[test]
    fn quadratic_gamma_frame_expansion() {
        let spec = NormalFormSpec::quadratic(1.0, 0.5, -2.0);
        let f = build_normal_frame(&spec).unwrap();
        let eps = 0.1;
        let d = dilate_frame(eps, &f).unwrap();
        let h = heisenberg_frame();
        let g2 = spec.gamma().clone();
        let y = Polynomial::var(Var::Y);
        let x = Polynomial::var(Var::X);
        let e2 = eps * eps;
        let x1 = h.x1.add(&RationalField3::from_polys([
            Polynomial::zero(),
            Polynomial::zero(),
            (&y * &g2).scale(-0.5 * e2),
        ]));
        let x2 = h.x2.add(&RationalField3::from_polys([
            Polynomial::zero(),
            Polynomial::zero(),
            (&x * &g2).scale(0.5 * e2),
        ]));
        let p = [0.3, -0.7, 0.2];
        for (a, b) in [(d.x1.eval(p), x1.eval(p)), (d.x2.eval(p), x2.eval(p))] {
            for i in 0..3 {
                assert!((a[i] - b[i]).abs() < 1e-15);
            }
        }
    }

    fn random_structure(rng: &mut ChaCha8Rng) -> FrameField {
        let mut r = || rng.gen_range(-1.0..1.0);
        let beta = format!("{}*x + {}*y + {}*x*z", r(), r(), r());
        let gamma = format!("{}*x^2 + {}*x*y + {}*y^2 + {}*x^3 + {}*y^2*z", r(), r(), r(), r(), r());
        let spec = NormalFormSpec::new(parse_poly(&beta).unwrap(), parse_poly(&gamma).unwrap()).unwrap();
        build_normal_frame(&spec).unwrap()
    }

    #[test]
    fn structure_constant_homogeneity() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..3 {
            let f = random_structure(&mut rng);
            let parent = ContactStructure::derive(f.clone()).unwrap();
            for eps in [0.5, 0.1] {
                let d = DilatedStructure::new(eps, &f).unwrap();
                for _ in 0..5 {
                    let q: Point = std::array::from_fn(|_| rng.gen_range(-0.5..0.5));
                    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                        for k in 0..3 {
                            let got = d.structure().constant(i, j, k).eval(q);
                            let want = homogeneous_constant(&parent, eps, i, j, k, q);
                            assert!((got - want).abs() < 1e-9, "c[{i}][{j}][{k}] {got} vs {want}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn leading_constants_match_second_derivatives() {
        let (a, b, c) = (0.8, -0.4, 1.3);
        let gamma = format!("{a}*x^2 + {}*x*y + {c}*y^2 + 0.5*x^3 - y^2*z", 2.0 * b);
        let spec = NormalFormSpec::new(Polynomial::zero(), parse_poly(&gamma).unwrap()).unwrap();
        let f = build_normal_frame(&spec).unwrap();
        let q = [0.4, -0.3, 0.25];
        let g2 = NormalFormSpec::quadratic(a, b, c);
        let dy = g2.gamma().partial(Var::Y).eval(q);
        let dx = g2.gamma().partial(Var::X).eval(q);
        let (gxx, gxy, gyy) = (2.0 * a, 2.0 * b, 2.0 * c);
        let lead = |i: usize, j: usize, k: usize| match (i, j, k) {
            (1, 2, 1) => 2.0 * dy,
            (1, 2, 2) => -2.0 * dx,
            (0, 1, 1) => -2.0 * gxy,
            (0, 1, 2) => 2.0 * gxx,
            (0, 2, 1) => -2.0 * gyy,
            (0, 2, 2) => 2.0 * gxy,
            _ => unreachable!(),
        };
        let mut prev = f64::INFINITY;
        for eps in [0.1, 0.05, 0.025] {
            let d = DilatedStructure::new(eps, &f).unwrap();
            let mut worst: f64 = 0.0;
            for (i, j, k) in [(1, 2, 1), (1, 2, 2), (0, 1, 1), (0, 1, 2), (0, 2, 1), (0, 2, 2)] {
                let r = (d.structure().constant(i, j, k).eval(q) - eps * eps * lead(i, j, k)) / eps.powi(3);
                worst = worst.max(r.abs());
            }
            assert!(worst < 20.0 && worst <= 1.2 * prev + 1e-9, "remainder ratio {worst}");
            prev = worst;
        }
    }

    #[test]
    fn tau_maps() {
        let c = CylCovector::new(1.0, 0.4, 2.0).unwrap();
        assert_eq!(tau(0.3, &c), CylCovector::new(0.3, 0.4, 2.0).unwrap());
        assert_eq!(tau(1.0, &c), c);
        let back = tau(1.0 / 0.3, &tau(0.3, &c));
        assert!((back.rho - 1.0).abs() < 1e-15);
    }

    #[test]
    fn diagram_commutes() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let f = random_structure(&mut rng);
        let parent = ContactStructure::derive(f.clone()).unwrap();
        for eps in [0.5, 0.2] {
            let d = DilatedStructure::new(eps, &f).unwrap();
            for _ in 0..3 {
                let cov = CylCovector::new(rng.gen_range(0.1..1.0), rng.gen_range(0.0..6.28), rng.gen_range(-3.1..3.1)).unwrap();
                let lhs = d.to_parent(exp_map(d.structure(), &cov, 1e-11).unwrap());
                let rhs = exp_map(&parent, &tau(eps, &cov), 1e-11).unwrap();
                for i in 0..3 {
                    assert!((lhs[i] - rhs[i]).abs() < 1e-8, "{lhs:?} vs {rhs:?}");
                }
            }
        }
    }
}
