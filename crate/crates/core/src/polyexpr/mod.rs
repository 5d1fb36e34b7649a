//! Sparse polynomials, rational functions and polynomial vector fields on ℝ³.

mod compiled;
mod field;
mod parse;
mod polynomial;
mod rational;

pub use compiled::CompiledSet;
pub use field::{lie_bracket, RationalField3};
pub use parse::{parse_poly, ParseError};
pub use polynomial::{Monomial, Polynomial, Var, DROP_RELATIVE};
pub use rational::RationalFn;

/// Partial derivative of a rational function.
pub fn partial_rational(r: &RationalFn, v: Var) -> RationalFn {
    r.partial(v)
}

/// Partial derivative of a polynomial.
pub fn partial(p: &Polynomial, v: Var) -> Polynomial {
    p.partial(v)
}
