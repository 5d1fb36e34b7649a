//! Built-in structures used by the CLI and the verification suite.

use std::fmt;
use std::str::FromStr;

use crate::contact::{build_normal_frame, heisenberg_frame, nominal_invariants, FrameField, NormalFormSpec};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Heisenberg,
    /// γ = (x² + y²)/2, nominal κ = 2.
    Kappa2,
    /// γ = x² + y², nominal κ = 4.
    Kappa4,
    /// γ = x² − y², nominal κ = 0, χ = 4.
    Chi4,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Heisenberg, Family::Kappa2, Family::Kappa4, Family::Chi4];

    /// (a, b, c) of γ = ax² + 2bxy + cy².
    pub fn coefficients(self) -> (f64, f64, f64) {
        match self {
            Family::Heisenberg => (0.0, 0.0, 0.0),
            Family::Kappa2 => (0.5, 0.0, 0.5),
            Family::Kappa4 => (1.0, 0.0, 1.0),
            Family::Chi4 => (1.0, 0.0, -1.0),
        }
    }

    pub fn spec(self) -> NormalFormSpec {
        let (a, b, c) = self.coefficients();
        NormalFormSpec::quadratic(a, b, c)
    }

    pub fn frame(self) -> Result<FrameField> {
        match self {
            Family::Heisenberg => Ok(heisenberg_frame()),
            f => build_normal_frame(&f.spec()),
        }
    }

    /// Nominal (κ, χ) labels of the family.
    pub fn nominal(self) -> (f64, f64) {
        let (a, b, c) = self.coefficients();
        nominal_invariants(a, b, c)
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Heisenberg => "heisenberg",
            Family::Kappa2 => "kappa2",
            Family::Kappa4 => "kappa4",
            Family::Chi4 => "chi4",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Family> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown family '{s}' (expected heisenberg, kappa2, kappa4 or chi4)")))
    }
}
