use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::algebra::scalar::parse_scalar;
use crate::algebra::{HomogeneousPoly, Monomial, Scalar};
use crate::error::{Error, Result};
use crate::jacobian::instance::default_names;
use crate::jacobian::HypersurfaceInstance;

/// One term of `f`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermEntry {
    pub exp: Vec<u32>,
    pub coef: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileOptions {
    pub nmax: Option<u32>,
    pub budget: Option<usize>,
}

/// The on-disk instance description.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub n: usize,
    pub d: u32,
    #[serde(default)]
    pub variables: Option<Vec<String>>,
    pub f: Vec<TermEntry>,
    #[serde(default)]
    pub singular_points: Vec<Vec<String>>,
    #[serde(default)]
    pub options: FileOptions,
}

impl InstanceFile {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("instance files serialize")
    }

    pub fn polynomial(&self) -> Result<HomogeneousPoly> {
        let v = self.n + 2;
        let mut terms = Vec::with_capacity(self.f.len());
        for t in &self.f {
            if t.exp.len() != v {
                return Err(Error::Parse(format!(
                    "exponent vector {:?} has length {}, expected n + 2 = {v}",
                    t.exp,
                    t.exp.len()
                )));
            }
            let deg: u32 = t.exp.iter().sum();
            if deg != self.d {
                return Err(Error::Parse(format!(
                    "f is not homogeneous: term {:?} has degree {deg}, expected {}",
                    t.exp, self.d
                )));
            }
            terms.push((Monomial::new(t.exp.clone()), parse_scalar(&t.coef)?));
        }
        HomogeneousPoly::from_terms(v, self.d, terms)
    }

    pub fn points(&self) -> Result<Vec<Vec<Scalar>>> {
        self.singular_points
            .iter()
            .map(|p| {
                p.iter()
                    .map(|c| parse_scalar(c))
                    .collect::<Result<Vec<_>>>()
            })
            .collect()
    }

    pub fn instance(&self) -> Result<HypersurfaceInstance> {
        let names = self
            .variables
            .clone()
            .unwrap_or_else(|| default_names(self.n + 2));
        HypersurfaceInstance::with_variables(self.n, self.polynomial()?, &self.points()?, names)
            .map_err(|e| match e {
                Error::NotSingular(p) => {
                    Error::Parse(format!("declared point {p} is not singular"))
                }
                other => other,
            })
    }
}

pub fn parse_instance_str(text: &str) -> Result<(HypersurfaceInstance, FileOptions)> {
    let file = InstanceFile::from_toml(text)?;
    Ok((file.instance()?, file.options.clone()))
}

pub fn parse_instance(path: &Path) -> Result<(HypersurfaceInstance, FileOptions)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    parse_instance_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    const QUARTIC: &str = r#"
n = 2
d = 4
variables = ["x", "y", "z", "w"]
f = [
  { exp = [4, 0, 0, 0], coef = "1" },
  { exp = [0, 4, 0, 0], coef = "1" },
  { exp = [0, 0, 4, 0], coef = "1" },
  { exp = [0, 0, 0, 4], coef = "1" },
]
"#;

    #[test]
    fn smooth_quartic_parses() {
        let (h, opts) = parse_instance_str(QUARTIC).unwrap();
        assert_eq!((h.n(), h.d()), (2, 4));
        assert!(h.points().is_empty());
        assert_eq!(opts, FileOptions::default());
    }

    #[test]
    fn inhomogeneous_term_is_rejected() {
        let bad = QUARTIC.replace("[0, 0, 0, 4]", "[0, 0, 0, 3]");
        let err = parse_instance_str(&bad).unwrap_err();
        assert!(err.to_string().contains("not homogeneous"), "{err}");
    }

    #[test]
    fn smooth_declared_point_is_a_parse_error() {
        let text = format!("{QUARTIC}singular_points = [[\"1\", \"0\", \"0\", \"0\"]]\n");
        let err = parse_instance_str(&text).unwrap_err();
        assert!(
            err.to_string()
                .contains("declared point [1:0:0:0] is not singular"),
            "{err}"
        );
    }

    #[test]
    fn round_trips_through_toml() {
        let file = InstanceFile::from_toml(QUARTIC).unwrap();
        assert_eq!(InstanceFile::from_toml(&file.to_toml()).unwrap(), file);
    }
}
