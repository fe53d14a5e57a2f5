use std::collections::HashSet;

use crate::algebra::{HomogeneousPoly, Scalar};
use crate::error::{Error, Result};
use crate::local::{verify_singular, AffinePoint};

/// A projective hypersurface `X_f` in `P^{n+1}` with its declared singular
/// points.
#[derive(Clone, Debug)]
pub struct HypersurfaceInstance {
    n: usize,
    d: u32,
    f: HomogeneousPoly,
    variables: Vec<String>,
    points: Vec<AffinePoint>,
}

impl HypersurfaceInstance {
    pub fn new(n: usize, f: HomogeneousPoly, points: &[Vec<Scalar>]) -> Result<Self> {
        let variables = default_names(n + 2);
        Self::with_variables(n, f, points, variables)
    }

    pub fn with_variables(
        n: usize,
        f: HomogeneousPoly,
        points: &[Vec<Scalar>],
        variables: Vec<String>,
    ) -> Result<Self> {
        if n < 1 {
            return Err(Error::Parse(format!(
                "dimension n = {n} must be at least 1"
            )));
        }
        if f.nvars() != n + 2 {
            return Err(Error::Parse(format!(
                "f has {} variables, expected n + 2 = {}",
                f.nvars(),
                n + 2
            )));
        }
        if variables.len() != n + 2 {
            return Err(Error::Parse(format!(
                "{} variable names given, expected {}",
                variables.len(),
                n + 2
            )));
        }
        if f.is_zero() {
            return Err(Error::Parse("f is the zero polynomial".into()));
        }
        if f.degree() < 2 {
            return Err(Error::Parse(format!("degree {} is below 2", f.degree())));
        }
        let mut seen = HashSet::new();
        let mut affine = Vec::with_capacity(points.len());
        for p in points {
            if p.len() != n + 2 {
                return Err(Error::Parse(format!(
                    "point has {} coordinates, expected {}",
                    p.len(),
                    n + 2
                )));
            }
            let a = AffinePoint::from_projective(p)?;
            if !verify_singular(&f, p) {
                return Err(Error::NotSingular(a.to_string()));
            }
            if !seen.insert(a.to_string()) {
                return Err(Error::Parse(format!("point {a} declared twice")));
            }
            affine.push(a);
        }
        Ok(Self {
            n,
            d: f.degree(),
            f,
            variables,
            points: affine,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    /// Number of homogeneous coordinates, `n + 2`.
    pub fn nvars(&self) -> usize {
        self.n + 2
    }

    pub fn f(&self) -> &HomogeneousPoly {
        &self.f
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn points(&self) -> &[AffinePoint] {
        &self.points
    }

    /// Socle degree `(n + 2)(d - 2)`.
    pub fn sigma(&self) -> i64 {
        (self.n as i64 + 2) * (self.d as i64 - 2)
    }
}

/// `x0, x1, ...`
pub fn default_names(v: usize) -> Vec<String> {
    (0..v).map(|i| format!("x{i}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::int;
    use crate::algebra::Monomial;

    fn fermat(v: usize, d: u32) -> HomogeneousPoly {
        HomogeneousPoly::from_terms(
            v,
            d,
            (0..v).map(|i| {
                let mut e = vec![0; v];
                e[i] = d;
                (Monomial::new(e), int(1))
            }),
        )
        .unwrap()
    }

    #[test]
    fn sigma_of_quartic_surface() {
        let h = HypersurfaceInstance::new(2, fermat(4, 4), &[]).unwrap();
        assert_eq!(h.sigma(), 8);
        assert_eq!(h.variables()[3], "x3");
    }

    #[test]
    fn smooth_point_is_rejected() {
        let p = vec![int(1), int(0), int(0), int(0)];
        let err = HypersurfaceInstance::new(2, fermat(4, 4), &[p]).unwrap_err();
        assert!(matches!(err, Error::NotSingular(_)));
    }

    #[test]
    fn wrong_variable_count() {
        assert!(HypersurfaceInstance::new(3, fermat(4, 4), &[]).is_err());
    }
}
