use std::fmt;

use super::polynomial::{Polynomial, Var};
use super::rational::RationalFn;

/// Vector field `Σ Vʲ ∂ⱼ` on ℝ³ with rational components.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalField3 {
    pub components: [RationalFn; 3],
}

impl RationalField3 {
    pub fn new(components: [RationalFn; 3]) -> RationalField3 {
        RationalField3 { components }
    }

    pub fn from_polys(p: [Polynomial; 3]) -> RationalField3 {
        let [a, b, c] = p;
        RationalField3::new([a.into(), b.into(), c.into()])
    }

    pub fn zero() -> RationalField3 {
        RationalField3::new([RationalFn::zero(), RationalFn::zero(), RationalFn::zero()])
    }

    /// Coordinate field `∂_v`.
    pub fn coordinate(v: Var) -> RationalField3 {
        let mut c = [RationalFn::zero(), RationalFn::zero(), RationalFn::zero()];
        c[v.index()] = RationalFn::one();
        RationalField3::new(c)
    }

    pub fn component(&self, v: Var) -> &RationalFn {
        &self.components[v.index()]
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(RationalFn::is_zero)
    }

    pub fn eval(&self, p: [f64; 3]) -> [f64; 3] {
        [
            self.components[0].eval(p),
            self.components[1].eval(p),
            self.components[2].eval(p),
        ]
    }

    /// Directional derivative `V(f) = Σ Vʲ ∂ⱼ f`.
    pub fn apply(&self, f: &RationalFn) -> RationalFn {
        let mut out = RationalFn::zero();
        for v in Var::ALL {
            let c = &self.components[v.index()];
            if c.is_zero() {
                continue;
            }
            out = &out + &(c * &f.partial(v));
        }
        out
    }

    pub fn add(&self, other: &RationalField3) -> RationalField3 {
        RationalField3::new(std::array::from_fn(|i| &self.components[i] + &other.components[i]))
    }

    pub fn sub(&self, other: &RationalField3) -> RationalField3 {
        RationalField3::new(std::array::from_fn(|i| &self.components[i] - &other.components[i]))
    }

    pub fn scale(&self, s: f64) -> RationalField3 {
        RationalField3::new(std::array::from_fn(|i| self.components[i].scale(s)))
    }

    /// Pointwise product with a function.
    pub fn mul_fn(&self, f: &RationalFn) -> RationalField3 {
        RationalField3::new(std::array::from_fn(|i| &self.components[i] * f))
    }

    /// Substitution `q ↦ (s₀x, s₁y, s₂z)` in every component.
    pub fn scale_vars(&self, s: [f64; 3]) -> RationalField3 {
        RationalField3::new(std::array::from_fn(|i| self.components[i].scale_vars(s)))
    }

    /// Multiplies component `i` by `c[i]`.
    pub fn scale_components(&self, c: [f64; 3]) -> RationalField3 {
        RationalField3::new(std::array::from_fn(|i| self.components[i].scale(c[i])))
    }
}

/// `[V, W]ᵏ = Σⱼ Vʲ ∂ⱼ Wᵏ − Wʲ ∂ⱼ Vᵏ`.
pub fn lie_bracket(v: &RationalField3, w: &RationalField3) -> RationalField3 {
    RationalField3::new(std::array::from_fn(|k| {
        &v.apply(&w.components[k]) - &w.apply(&v.components[k])
    }))
}

impl fmt::Display for RationalField3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}, {}]",
            self.components[0], self.components[1], self.components[2]
        )
    }
}
