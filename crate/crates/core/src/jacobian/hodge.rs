use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::analysis::Analysis;
use super::piece::GradedPiece;
use crate::algebra::complex::{bounded_rank, staircase_bound};
use crate::algebra::matrix::SparseRow;
use crate::algebra::{ExactMatrix, HomogeneousPoly, Monomial, Scalar};
use crate::error::{Error, Result};
use crate::par;

/// Which graded quotient of `A = k[x_0..x_{n+1}]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Quotient {
    #[serde(rename = "A/J")]
    AModJ,
    #[serde(rename = "I/J")]
    IModJ,
}

impl std::fmt::Display for Quotient {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Quotient::AModJ => "A/J",
            Quotient::IModJ => "I/J",
        })
    }
}

/// Dimensions of the two top graded pieces of the Hodge filtration on
/// `H^{n+1}(P^{n+1} - X_f)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HodgeGraded {
    pub n: usize,
    /// `(degree, dim (A/J)_degree)` for `Gr_F^{n+1}`.
    pub top: (i64, usize),
    /// `(degree, dim)` for `Gr_F^n`, in the quotient `next_space`.
    pub next: (i64, usize),
    pub next_space: Quotient,
}

#[derive(Clone, Debug)]
pub struct EquisingularTangent {
    pub degree: i64,
    pub ideal: Arc<GradedPiece>,
    /// `dim I_d - 1`, the tangent space being `I_d / <f>`.
    pub tangent_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationReport {
    pub quotient: Quotient,
    pub window: (i64, i64),
    /// Degrees `m` where linear forms times `M_m` fail to span `M_{m+1}`.
    pub failures: Vec<i64>,
    pub passed: bool,
}

impl Analysis {
    fn require_even(&self, what: &str) -> Result<()> {
        let n = self.instance().n();
        if n % 2 == 1 {
            return Err(Error::Unsupported(format!(
                "{what} requires n even, got n = {n}"
            )));
        }
        Ok(())
    }

    /// Degree of the source `(A/J)_{d-n-2}` of the IVHS multiplication.
    pub fn ivhs_source_degree(&self) -> i64 {
        self.instance().d() as i64 - self.instance().n() as i64 - 2
    }

    /// Degree and quotient of the IVHS target.
    pub fn ivhs_target(&self) -> (i64, Quotient) {
        let (n, d) = (self.instance().n() as i64, self.instance().d() as i64);
        if n == 2 {
            (2 * d - 4, Quotient::IModJ)
        } else {
            (2 * d - n - 2, Quotient::AModJ)
        }
    }

    pub fn quotient_dim(&self, which: Quotient, m: i64) -> Result<usize> {
        let q = self.quotient_dims(m)?;
        Ok(match which {
            Quotient::AModJ => q.a_mod_j,
            Quotient::IModJ => q.i_mod_j,
        })
    }

    pub fn hodge_graded(&self) -> Result<HodgeGraded> {
        self.require_even("hodge_graded")?;
        let top_deg = self.ivhs_source_degree();
        let (next_deg, space) = self.ivhs_target();
        let (top, next) = par::join(
            || self.quotient_dim(Quotient::AModJ, top_deg),
            || self.quotient_dim(space, next_deg),
        );
        Ok(HodgeGraded {
            n: self.instance().n(),
            top: (top_deg, top?),
            next: (next_deg, next?),
            next_space: space,
        })
    }

    /// `I_d / <f>`; requires the evaluation map in degree `d` to be onto.
    pub fn equisingular_tangent(&self) -> Result<EquisingularTangent> {
        let d = self.instance().d() as i64;
        if !self.evaluation_map(d)?.is_surjective() {
            return Err(Error::NonVersal { degree: d });
        }
        let ideal = self.ideal_piece(d)?;
        let tangent_dim = ideal.dim() - 1;
        Ok(EquisingularTangent {
            degree: d,
            ideal,
            tangent_dim,
        })
    }

    /// Codimension of the equisingular stratum, `h^0(O(d)) - dim I_d`.
    pub fn stratum_codim(&self) -> Result<usize> {
        let t = self.equisingular_tangent()?;
        Ok(self.h0(t.degree) - t.ideal.dim())
    }

    /// Basis of a quotient in degree `m` as rows in the monomial basis:
    /// unit vectors on standard monomials for `A/J`, the reduced
    /// complement for `I/J`.
    pub fn quotient_basis(&self, which: Quotient, m: i64) -> Result<Vec<SparseRow>> {
        Ok(match which {
            Quotient::AModJ => self
                .standard_monomials(m)?
                .into_iter()
                .map(|c| vec![(c, Scalar::from_integer(1.into()))])
                .collect(),
            Quotient::IModJ => {
                if m < 0 {
                    Vec::new()
                } else {
                    self.i_mod_j(m)?.rows().to_vec()
                }
            }
        })
    }

    /// Product of `row` (degree `a`) with the monomial `u`, in degree
    /// `a + deg u`.
    fn multiply_row(&self, a: i64, row: &[(usize, Scalar)], u: &Monomial) -> Result<SparseRow> {
        let src = self.basis(a)?;
        let dst = self.basis(a + u.degree() as i64)?;
        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (c, x) in row {
            let k = dst
                .index_of(&src.get(*c).mul(u))
                .expect("product in target basis");
            *acc.entry(k).or_insert_with(Scalar::zero) += x;
        }
        Ok(acc.into_iter().filter(|(_, x)| !x.is_zero()).collect())
    }

    /// Product of `row` (degree `a`) with the polynomial whose coordinates
    /// in degree `b` are `other`.
    fn multiply_rows(
        &self,
        a: i64,
        row: &[(usize, Scalar)],
        b: i64,
        other: &[(usize, Scalar)],
    ) -> Result<SparseRow> {
        let basis_b = self.basis(b)?;
        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (c, y) in other {
            for (k, x) in self.multiply_row(a, row, basis_b.get(*c))? {
                *acc.entry(k).or_insert_with(Scalar::zero) += x * y;
            }
        }
        Ok(acc.into_iter().filter(|(_, x)| !x.is_zero()).collect())
    }

    /// Coordinates of `row` (degree `m`) in the quotient basis of
    /// `which`; `row` must lie in `I_m` for `I/J`.
    fn quotient_coordinates(
        &self,
        which: Quotient,
        m: i64,
        row: &[(usize, Scalar)],
    ) -> Result<Vec<Scalar>> {
        let nf = self.reduce_mod_j(m, row)?;
        match which {
            Quotient::AModJ => {
                let std = self.standard_monomials(m)?;
                let mut out = vec![Scalar::zero(); std.len()];
                for (c, x) in nf {
                    let k = std
                        .binary_search(&c)
                        .expect("normal form on standard monomials");
                    out[k] = x;
                }
                Ok(out)
            }
            Quotient::IModJ => self
                .i_mod_j(m)?
                .coordinates(&nf)
                .ok_or(Error::NotInIdeal { degree: m }),
        }
    }

    /// Matrix of `g -> -xi * g` from `(A/J)_{d-n-2}` to the IVHS target,
    /// one column per source basis element.
    pub fn ivhs_differential(&self, xi: &HomogeneousPoly) -> Result<ExactMatrix> {
        let d = self.instance().d() as i64;
        if xi.nvars() != self.instance().nvars() || xi.degree() as i64 != d {
            return Err(Error::NotInIdeal { degree: d });
        }
        let basis = self.basis(d)?;
        let row = xi.coordinates(&basis);
        self.ivhs_on_row(&row)
    }

    pub(crate) fn ivhs_on_row(&self, xi: &[(usize, Scalar)]) -> Result<ExactMatrix> {
        self.require_even("ivhs_differential")?;
        let d = self.instance().d() as i64;
        if !self.in_ideal(d, xi)? {
            return Err(Error::NotInIdeal { degree: d });
        }
        let src = self.ivhs_source_degree();
        let (tgt, which) = self.ivhs_target();
        let source = self.quotient_basis(Quotient::AModJ, src)?;
        let target_dim = self.quotient_dim(which, tgt)?;
        let columns = par::map(source, |g| -> Result<Vec<Scalar>> {
            let prod = self.multiply_rows(d, xi, src, &g)?;
            let coords = self.quotient_coordinates(which, tgt, &prod)?;
            Ok(coords.into_iter().map(|x| -x).collect())
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        let dense: Vec<Vec<Scalar>> = (0..target_dim)
            .map(|r| columns.iter().map(|c| c[r].clone()).collect())
            .collect();
        Ok(ExactMatrix::from_dense(columns.len(), &dense))
    }

    /// Checks that linear forms times `M_m` span `M_{m+1}` modulo `J` for
    /// `m0 <= m <= sigma + 2`, where `M` is `A` or `I`.
    pub fn generation_check(&self, which: Quotient, m0: i64) -> Result<GenerationReport> {
        let start = m0.max(0);
        let end = self.sigma() + 2;
        let v = self.instance().nvars();
        let linear: Vec<Monomial> = (0..v).map(|i| Monomial::var(v, i)).collect();
        let degrees: Vec<i64> = (start..=end).collect();
        let checks = par::map(degrees, |m| -> Result<Option<i64>> {
            // M_{m+1} = A_1 M_m + J_{m+1}; every row below lies in M_{m+1},
            // so reaching dim M_{m+1} settles it
            let target = match which {
                Quotient::AModJ => self.h0(m + 1),
                Quotient::IModJ => self.ideal_dim(m + 1)?,
            };
            let source: Vec<SparseRow> = match which {
                Quotient::AModJ => (0..self.h0(m))
                    .map(|c| vec![(c, Scalar::from_integer(1.into()))])
                    .collect(),
                Quotient::IModJ => self.ideal_piece(m)?.span().row_slices().to_vec(),
            };
            let mut products = Vec::with_capacity(source.len() * v);
            for row in &source {
                for u in &linear {
                    products.push(self.multiply_row(m, row, u)?);
                }
            }
            let opts = self.options().elimination;
            let products = ExactMatrix::from_rows(self.h0(m + 1), products);
            if staircase_bound(&products) >= target
                || self.quotient_dim(which, m + 1)? == 0
                || bounded_rank(&products, Some(target), opts) == target
            {
                return Ok(None);
            }
            let jac = self.jacobian_piece(m + 1)?;
            let got = bounded_rank(
                &ExactMatrix::vstack(&[&products, jac.span()]),
                Some(target),
                opts,
            );
            Ok((got != target).then_some(m))
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        let failures: Vec<i64> = checks.into_iter().flatten().collect();
        Ok(GenerationReport {
            quotient: which,
            window: (start, end),
            passed: failures.is_empty(),
            failures,
        })
    }
}
