use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::polynomial::{Polynomial, Var};

const BASE_MATCH_REL: f64 = 1e-12;

/// Quotient of polynomials. The denominator is kept as a product of powers of
/// normalized bases, so repeated differentiation of `n/D` yields `n'/D^k`
/// rather than an ever-growing unreduced product. No GCD reduction is done.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFn {
    num: Polynomial,
    den: Vec<(Polynomial, u32)>,
}

/// Scales a nonzero polynomial so its constant term (or, failing that, its
/// leading coefficient) is 1; returns the scale that was divided out.
fn normalize_base(p: &Polynomial) -> (Polynomial, f64) {
    let c = p.constant_term();
    let s = if c != 0.0 {
        c
    } else {
        p.leading().map(|(_, c)| c).unwrap_or(1.0)
    };
    (p.scale(1.0 / s), s)
}

impl RationalFn {
    pub fn zero() -> RationalFn {
        RationalFn::from_poly(Polynomial::zero())
    }

    pub fn one() -> RationalFn {
        RationalFn::constant(1.0)
    }

    pub fn constant(c: f64) -> RationalFn {
        RationalFn::from_poly(Polynomial::constant(c))
    }

    pub fn from_poly(p: Polynomial) -> RationalFn {
        RationalFn { num: p, den: Vec::new() }
    }

    /// `num / den`. Returns `None` if `den` is the zero polynomial.
    pub fn new(num: Polynomial, den: &Polynomial) -> Option<RationalFn> {
        RationalFn::from_poly(num).div_poly(den)
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> Polynomial {
        let mut d = Polynomial::one();
        for (b, e) in &self.den {
            d = &d * &b.pow(*e);
        }
        d
    }

    /// Distinct denominator bases with multiplicities.
    pub fn denominator_factors(&self) -> &[(Polynomial, u32)] {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    pub fn as_polynomial(&self) -> Option<&Polynomial> {
        self.den.is_empty().then_some(&self.num)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn eval(&self, p: [f64; 3]) -> f64 {
        let mut d = 1.0;
        for (b, e) in &self.den {
            d *= b.eval(p).powi(*e as i32);
        }
        self.num.eval(p) / d
    }

    /// Value of the denominator at `p`; the function has a pole where this is 0.
    pub fn eval_denominator(&self, p: [f64; 3]) -> f64 {
        self.den.iter().fold(1.0, |d, (b, e)| d * b.eval(p).powi(*e as i32))
    }

    pub fn scale(&self, s: f64) -> RationalFn {
        if s == 0.0 {
            return RationalFn::zero();
        }
        RationalFn { num: self.num.scale(s), den: self.den.clone() }
    }

    fn find_base(den: &[(Polynomial, u32)], b: &Polynomial) -> Option<usize> {
        den.iter().position(|(q, _)| q.approx_eq(b, BASE_MATCH_REL))
    }

    /// Divides by a polynomial; `None` for division by zero.
    pub fn div_poly(&self, d: &Polynomial) -> Option<RationalFn> {
        if d.is_zero() {
            return None;
        }
        if let Some(c) = d.as_constant() {
            return Some(self.scale(1.0 / c));
        }
        let (b, s) = normalize_base(d);
        let mut den = self.den.clone();
        match RationalFn::find_base(&den, &b) {
            Some(i) => den[i].1 += 1,
            None => den.push((b, 1)),
        }
        Some(RationalFn { num: self.num.scale(1.0 / s), den })
    }

    /// Multiplicative inverse; `None` for the zero function.
    pub fn recip(&self) -> Option<RationalFn> {
        let mut out = RationalFn::one();
        for (b, e) in &self.den {
            out = out.mul_poly(&b.pow(*e));
        }
        out.div_poly(&self.num)
    }

    pub fn div(&self, other: &RationalFn) -> Option<RationalFn> {
        other.recip().map(|r| self * &r)
    }

    pub fn mul_poly(&self, p: &Polynomial) -> RationalFn {
        RationalFn { num: &self.num * p, den: self.den.clone() }
    }

    /// Rewrites `self` and `other` over their least common factored denominator.
    fn common(&self, other: &RationalFn) -> (Polynomial, Polynomial, Vec<(Polynomial, u32)>) {
        let mut den = self.den.clone();
        let mut na = self.num.clone();
        let mut nb = other.num.clone();
        for (b, e) in &other.den {
            match RationalFn::find_base(&den, b) {
                Some(i) => {
                    let ea = den[i].1;
                    if *e > ea {
                        na = &na * &b.pow(e - ea);
                        den[i].1 = *e;
                    } else if ea > *e {
                        nb = &nb * &den[i].0.pow(ea - e);
                    }
                }
                None => {
                    na = &na * &b.pow(*e);
                    den.push((b.clone(), *e));
                }
            }
        }
        for (b, e) in &self.den {
            if RationalFn::find_base(&other.den, b).is_none() {
                nb = &nb * &b.pow(*e);
            }
        }
        (na, nb, den)
    }

    fn tidy(num: Polynomial, den: Vec<(Polynomial, u32)>) -> RationalFn {
        if num.is_zero() {
            return RationalFn::zero();
        }
        RationalFn { num, den }
    }

    /// Formal partial derivative by the quotient rule on the factored form:
    /// ∂(n/∏bᵢ^eᵢ) = (n'·∏bᵢ − n·Σ eᵢ bᵢ' ∏_{j≠i} bⱼ) / ∏bᵢ^(eᵢ+1).
    pub fn partial(&self, v: Var) -> RationalFn {
        if self.den.is_empty() {
            return RationalFn::from_poly(self.num.partial(v));
        }
        let bases: Vec<&Polynomial> = self.den.iter().map(|(b, _)| b).collect();
        let mut prod_all = Polynomial::one();
        for b in &bases {
            prod_all = &prod_all * b;
        }
        let mut num = &self.num.partial(v) * &prod_all;
        for (i, (b, e)) in self.den.iter().enumerate() {
            let db = b.partial(v);
            if db.is_zero() {
                continue;
            }
            let mut others = db.scale(*e as f64);
            for (j, bj) in bases.iter().enumerate() {
                if j != i {
                    others = &others * bj;
                }
            }
            num = &num - &(&self.num * &others);
        }
        let den = self.den.iter().map(|(b, e)| (b.clone(), e + 1)).collect();
        RationalFn::tidy(num, den)
    }

    /// Substitution `x ↦ s₀x, y ↦ s₁y, z ↦ s₂z`, keeping the bases normalized.
    pub fn scale_vars(&self, s: [f64; 3]) -> RationalFn {
        let mut num = self.num.scale_vars(s);
        let mut den = Vec::with_capacity(self.den.len());
        for (b, e) in &self.den {
            let (nb, c) = normalize_base(&b.scale_vars(s));
            num = num.scale(1.0 / c.powi(*e as i32));
            den.push((nb, *e));
        }
        RationalFn::tidy(num, den)
    }
}

impl Add for &RationalFn {
    type Output = RationalFn;
    fn add(self, rhs: &RationalFn) -> RationalFn {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let (a, b, den) = self.common(rhs);
        RationalFn::tidy(&a + &b, den)
    }
}

impl Sub for &RationalFn {
    type Output = RationalFn;
    fn sub(self, rhs: &RationalFn) -> RationalFn {
        if rhs.is_zero() {
            return self.clone();
        }
        let (a, b, den) = self.common(rhs);
        RationalFn::tidy(&a - &b, den)
    }
}

impl Mul for &RationalFn {
    type Output = RationalFn;
    fn mul(self, rhs: &RationalFn) -> RationalFn {
        if self.is_zero() || rhs.is_zero() {
            return RationalFn::zero();
        }
        let mut den = self.den.clone();
        for (b, e) in &rhs.den {
            match RationalFn::find_base(&den, b) {
                Some(i) => den[i].1 += e,
                None => den.push((b.clone(), *e)),
            }
        }
        RationalFn::tidy(&self.num * &rhs.num, den)
    }
}

impl Neg for &RationalFn {
    type Output = RationalFn;
    fn neg(self) -> RationalFn {
        self.scale(-1.0)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RationalFn {
            type Output = RationalFn;
            fn $m(self, rhs: RationalFn) -> RationalFn {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&RationalFn> for RationalFn {
            type Output = RationalFn;
            fn $m(self, rhs: &RationalFn) -> RationalFn {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for RationalFn {
    type Output = RationalFn;
    fn neg(self) -> RationalFn {
        self.scale(-1.0)
    }
}

impl From<Polynomial> for RationalFn {
    fn from(p: Polynomial) -> Self {
        RationalFn::from_poly(p)
    }
}

impl From<f64> for RationalFn {
    fn from(c: f64) -> Self {
        RationalFn::constant(c)
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        write!(f, "({})/(", self.num)?;
        for (n, (b, e)) in self.den.iter().enumerate() {
            if n > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "({b})")?;
            } else {
                write!(f, "({b})^{e}")?;
            }
        }
        write!(f, ")")
    }
}
