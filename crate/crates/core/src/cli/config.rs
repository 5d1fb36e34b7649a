//! Structure definition files.
//!
//! ```toml
//! family = "normal_form"     # heisenberg | kappa2 | kappa4 | chi4 | normal_form | frame
//! beta = "0"
//! gamma = "x^2 + y^2 + x^2*y"
//! # family = "frame"
//! # x1 = ["1", "0", "-0.5*y"]
//! # x2 = ["0", "1", "0.5*x"]
//! eps = [0.2, 0.15, 0.1, 0.07, 0.05]
//! quad = [16, 32, 48]
//! tol = 1e-10
//! seed = 7
//! ```

use std::path::Path;

use serde::Deserialize;

use crate::contact::{build_normal_frame, gamma2, heisenberg_frame, nominal_invariants, FrameField, NormalFormSpec};
use crate::error::{Error, Result};
use crate::families::Family;
use crate::polyexpr::{parse_poly, Polynomial};

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub family: Option<String>,
    pub beta: Option<String>,
    pub gamma: Option<String>,
    pub x1: Option<[String; 3]>,
    pub x2: Option<[String; 3]>,
    pub eps: Option<Vec<f64>>,
    pub quad: Option<[usize; 3]>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<FileConfig> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        FileConfig::parse(&text)
    }

    pub fn parse(text: &str) -> Result<FileConfig> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }
}

/// A resolved structure and how it was given.
#[derive(Clone, Debug)]
pub struct StructureSource {
    pub label: String,
    pub frame: FrameField,
    /// Normal-form data, when the structure was given that way.
    pub normal_form: Option<NormalFormSpec>,
}

impl StructureSource {
    pub fn family(f: Family) -> Result<StructureSource> {
        Ok(StructureSource {
            label: f.name().into(),
            frame: f.frame()?,
            normal_form: (f != Family::Heisenberg).then(|| f.spec()),
        })
    }

    /// Nominal (κ, χ) from the quadratic part of γ.
    pub fn nominal(&self) -> Option<(f64, f64)> {
        self.normal_form.as_ref().map(|s| {
            let (a, b, c) = gamma2(s);
            nominal_invariants(a, b, c)
        })
    }
}

fn poly(field: &str, s: &str) -> Result<Polynomial> {
    parse_poly(s).map_err(|e| Error::Config(format!("{field}: {e} in \"{s}\"")))
}

/// Structure named by `family` (which overrides the file) or described in the file.
pub fn resolve_structure(file: &FileConfig, family: Option<&str>) -> Result<StructureSource> {
    let name = family.or(file.family.as_deref()).unwrap_or("heisenberg");
    match name {
        "heisenberg" => Ok(StructureSource { label: name.into(), frame: heisenberg_frame(), normal_form: None }),
        "normal_form" => {
            let beta = poly("beta", file.beta.as_deref().unwrap_or("0"))?;
            let gamma = poly("gamma", file.gamma.as_deref().ok_or_else(|| Error::Config("normal_form needs gamma".into()))?)?;
            let spec = NormalFormSpec::new(beta, gamma)?;
            Ok(StructureSource { label: name.into(), frame: build_normal_frame(&spec)?, normal_form: Some(spec) })
        }
        "frame" => {
            let get = |k: &str, v: &Option<[String; 3]>| -> Result<[Polynomial; 3]> {
                let v = v.as_ref().ok_or_else(|| Error::Config(format!("frame needs {k}")))?;
                Ok([poly(k, &v[0])?, poly(k, &v[1])?, poly(k, &v[2])?])
            };
            let frame = FrameField::from_polys(get("x1", &file.x1)?, get("x2", &file.x2)?)?;
            Ok(StructureSource { label: name.into(), frame, normal_form: None })
        }
        other => StructureSource::family(other.parse()?),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resolves_each_kind() {
        let f = FileConfig::parse("family = \"normal_form\"\ngamma = \"x^2 + y^2\"\neps = [0.1]").unwrap();
        let s = resolve_structure(&f, None).unwrap();
        assert_eq!(s.nominal(), Some((4.0, 0.0)));
        let f = FileConfig::parse("family = \"frame\"\nx1 = [\"1\", \"0\", \"-0.5*y\"]\nx2 = [\"0\", \"1\", \"0.5*x\"]").unwrap();
        assert!(resolve_structure(&f, None).unwrap().nominal().is_none());
        assert_eq!(resolve_structure(&FileConfig::default(), Some("chi4")).unwrap().nominal(), Some((0.0, 4.0)));
    }

    #[test]
    fn reports_bad_input() {
        assert!(FileConfig::parse("colour = 3").is_err());
        let f = FileConfig::parse("family = \"normal_form\"\ngamma = \"x^2 +\"").unwrap();
        let e = resolve_structure(&f, None).unwrap_err().to_string();
        assert!(e.contains("gamma"), "{e}");
        let f = FileConfig::parse("family = \"normal_form\"\ngamma = \"x*z\"").unwrap();
        assert!(resolve_structure(&f, None).is_err());
        let f = FileConfig::parse("family = \"frame\"\nx1 = [\"1\", \"0\", \"0\"]\nx2 = [\"0\", \"1\", \"0\"]").unwrap();
        assert!(resolve_structure(&f, None).is_err());
    }
}
