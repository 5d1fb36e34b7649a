use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Coordinate variable of ℝ³.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    X,
    Y,
    Z,
}

impl Var {
    pub const ALL: [Var; 3] = [Var::X, Var::Y, Var::Z];

    pub fn index(self) -> usize {
        match self {
            Var::X => 0,
            Var::Y => 1,
            Var::Z => 2,
        }
    }

    pub fn from_index(i: usize) -> Var {
        Var::ALL[i]
    }

    pub fn name(self) -> char {
        ['x', 'y', 'z'][self.index()]
    }
}

/// Exponent triple `x^i y^j z^k`, ordered graded-lexicographically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub [u32; 3]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0, 0, 0]);

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exp(&self, v: Var) -> u32 {
        self.0[v.index()]
    }

    fn times(self, other: Monomial) -> Monomial {
        Monomial([
            self.0[0] + other.0[0],
            self.0[1] + other.0[1],
            self.0[2] + other.0[2],
        ])
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Relative size under which a coefficient is dropped (against the largest one).
pub const DROP_RELATIVE: f64 = 1e-14;
/// A sum whose magnitude is this small against the summed magnitudes is a rounding zero.
pub(crate) const CANCEL_RELATIVE: f64 = 64.0 * f64::EPSILON;

/// Sparse polynomial in (x, y, z) with real coefficients.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, f64>,
}

/// Accumulates coefficient sums together with their absolute mass, so that
/// sums cancelling to rounding level can be recognised as exact zeros.
#[derive(Default)]
pub(crate) struct Accumulator {
    acc: BTreeMap<Monomial, (f64, f64)>,
}

impl Accumulator {
    pub(crate) fn push(&mut self, m: Monomial, c: f64) {
        let e = self.acc.entry(m).or_insert((0.0, 0.0));
        e.0 += c;
        e.1 += c.abs();
    }

    pub(crate) fn finish(self) -> Polynomial {
        let terms: BTreeMap<Monomial, f64> = self
            .acc
            .into_iter()
            .filter(|(_, (s, mass))| *s != 0.0 && s.abs() > CANCEL_RELATIVE * mass)
            .map(|(m, (s, _))| (m, s))
            .collect();
        Polynomial::normalized(terms)
    }
}

impl Polynomial {
    fn normalized(mut terms: BTreeMap<Monomial, f64>) -> Polynomial {
        let max = terms.values().fold(0.0_f64, |m, c| m.max(c.abs()));
        if max > 0.0 {
            terms.retain(|_, c| c.abs() >= DROP_RELATIVE * max);
        } else {
            terms.clear();
        }
        Polynomial { terms }
    }

    pub fn zero() -> Polynomial {
        Polynomial::default()
    }

    pub fn one() -> Polynomial {
        Polynomial::constant(1.0)
    }

    pub fn constant(c: f64) -> Polynomial {
        Polynomial::monomial(Monomial::ONE, c)
    }

    pub fn var(v: Var) -> Polynomial {
        let mut e = [0; 3];
        e[v.index()] = 1;
        Polynomial::monomial(Monomial(e), 1.0)
    }

    pub fn monomial(m: Monomial, c: f64) -> Polynomial {
        let mut terms = BTreeMap::new();
        if c != 0.0 {
            terms.insert(m, c);
        }
        Polynomial { terms }
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs; repeated
    /// monomials are summed.
    pub fn from_terms<I: IntoIterator<Item = ([u32; 3], f64)>>(it: I) -> Polynomial {
        let mut acc = Accumulator::default();
        for (e, c) in it {
            acc.push(Monomial(e), c);
        }
        acc.finish()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Value if the polynomial is a constant (including zero).
    pub fn as_constant(&self) -> Option<f64> {
        match self.terms.len() {
            0 => Some(0.0),
            1 => self.terms.get(&Monomial::ONE).copied(),
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &f64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: [u32; 3]) -> f64 {
        self.terms.get(&Monomial(e)).copied().unwrap_or(0.0)
    }

    pub fn constant_term(&self) -> f64 {
        self.coefficient([0, 0, 0])
    }

    /// Largest monomial under graded-lex order.
    pub fn leading(&self) -> Option<(Monomial, f64)> {
        self.terms.iter().next_back().map(|(m, c)| (*m, *c))
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn max_exponents(&self) -> [u32; 3] {
        let mut out = [0; 3];
        for m in self.terms.keys() {
            for (o, e) in out.iter_mut().zip(m.0) {
                *o = (*o).max(e);
            }
        }
        out
    }

    pub fn max_abs_coefficient(&self) -> f64 {
        self.terms.values().fold(0.0, |m: f64, c| m.max(c.abs()))
    }

    pub fn eval(&self, p: [f64; 3]) -> f64 {
        let mut s = 0.0;
        for (m, c) in &self.terms {
            s += c * p[0].powi(m.0[0] as i32) * p[1].powi(m.0[1] as i32) * p[2].powi(m.0[2] as i32);
        }
        s
    }

    pub fn scale(&self, s: f64) -> Polynomial {
        if s == 0.0 {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (*m, c * s)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Polynomial {
        let mut out = Polynomial::one();
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// Formal partial derivative.
    pub fn partial(&self, v: Var) -> Polynomial {
        let i = v.index();
        let mut acc = Accumulator::default();
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut d = m.0;
            d[i] -= 1;
            acc.push(Monomial(d), c * e as f64);
        }
        acc.finish()
    }

    /// Substitution `x ↦ s₀x, y ↦ s₁y, z ↦ s₂z`.
    pub fn scale_vars(&self, s: [f64; 3]) -> Polynomial {
        let mut acc = Accumulator::default();
        for (m, c) in &self.terms {
            let f = s[0].powi(m.0[0] as i32) * s[1].powi(m.0[1] as i32) * s[2].powi(m.0[2] as i32);
            acc.push(*m, c * f);
        }
        acc.finish()
    }

    /// Restriction to the plane `z = 0`.
    pub fn at_z_zero(&self) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.0[2] == 0)
                .map(|(m, c)| (*m, *c))
                .collect(),
        }
    }

    /// Homogeneous part of total degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (*m, *c))
                .collect(),
        }
    }

    /// Exact structural equality up to a relative coefficient tolerance.
    pub fn approx_eq(&self, other: &Polynomial, rel: f64) -> bool {
        let scale = self.max_abs_coefficient().max(other.max_abs_coefficient()).max(1e-300);
        let diff = self - other;
        diff.max_abs_coefficient() <= rel * scale
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let mut acc = Accumulator::default();
        for (m, c) in self.terms.iter().chain(rhs.terms.iter()) {
            acc.push(*m, *c);
        }
        acc.finish()
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        if rhs.is_zero() {
            return self.clone();
        }
        let mut acc = Accumulator::default();
        for (m, c) in &self.terms {
            acc.push(*m, *c);
        }
        for (m, c) in &rhs.terms {
            acc.push(*m, -*c);
        }
        acc.finish()
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        if let Some(c) = self.as_constant() {
            return rhs.scale(c);
        }
        if let Some(c) = rhs.as_constant() {
            return self.scale(c);
        }
        let mut acc = Accumulator::default();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                acc.push(ma.times(*mb), ca * cb);
            }
        }
        acc.finish()
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(-1.0)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: &Polynomial) -> Polynomial {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(-1.0)
    }
}

impl From<f64> for Polynomial {
    fn from(c: f64) -> Self {
        Polynomial::constant(c)
    }
}

/// Canonical printed form: descending graded-lex order, in the same grammar
/// the parser accepts.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_sign_negative();
            let a = c.abs();
            if n == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if a != 1.0 || *m == Monomial::ONE {
                factors.push(format!("{a}"));
            }
            for v in Var::ALL {
                match m.exp(v) {
                    0 => {}
                    1 => factors.push(v.name().to_string()),
                    e => factors.push(format!("{}^{}", v.name(), e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}
