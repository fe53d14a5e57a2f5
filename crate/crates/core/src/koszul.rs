//! The graded Koszul complex `K(G)_m` of a space of forms `G` and its
//! cohomology.
//!
//! Position `p` carries `Λ^{r-p} G ⊗ A_{m-(r-p)D}`, where `r` is the number
//! of generators; the differential contracts against the generators, so
//! position `r` is `A_m` and `H^r = (A/(G))_m`.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::complex::{complex_ranks_bounded, ComplexRanks};
use crate::algebra::matrix::SparseRow;
use crate::algebra::monomial::{basis_size, binomial};
use crate::algebra::{EliminationOptions, ExactMatrix, HomogeneousPoly, MonomialBasis, Scalar};
use crate::error::{Error, Result};
use crate::jacobian::Analysis;
use crate::par;

#[derive(Clone, Debug)]
pub struct KoszulSetup {
    generators: Vec<HomogeneousPoly>,
    gen_degree: u32,
    degree: i64,
}

impl KoszulSetup {
    pub fn new(generators: Vec<HomogeneousPoly>, degree: i64) -> Result<Self> {
        let first = generators
            .first()
            .ok_or_else(|| Error::Unsupported("no generators".into()))?;
        let (nvars, gen_degree) = (first.nvars(), first.degree());
        for g in &generators {
            if g.degree() != gen_degree {
                return Err(Error::Setup {
                    expected: gen_degree,
                    found: g.degree(),
                });
            }
            if g.nvars() != nvars {
                return Err(Error::Unsupported(
                    "generators in different numbers of variables".into(),
                ));
            }
        }
        Ok(Self {
            generators,
            gen_degree,
            degree,
        })
    }

    /// The partial derivatives of `f`.
    pub fn jacobian(f: &HomogeneousPoly, degree: i64) -> Result<Self> {
        Self::new(f.gradient(), degree)
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn nvars(&self) -> usize {
        self.generators[0].nvars()
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    /// Polynomial degree of the term at position `p`.
    pub fn term_degree(&self, p: usize) -> i64 {
        self.degree - (self.rank() - p) as i64 * self.gen_degree as i64
    }

    /// `dim K^p = C(r, r - p) * h^0(O(m - (r - p)D))`.
    pub fn term_dim(&self, p: usize) -> usize {
        let r = self.rank();
        binomial(r as u64, (r - p) as u64) as usize * basis_size(self.nvars(), self.term_degree(p))
    }

    /// Largest monomial basis the complex needs.
    pub fn max_columns(&self) -> usize {
        basis_size(self.nvars(), self.degree)
    }
}

/// Subsets of `0..r` of size `k`, in lexicographic order.
fn subsets(r: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, r: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..r {
            cur.push(i);
            rec(i + 1, r, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, r, k, &mut Vec::new(), &mut out);
    out
}

/// The complex in one degree: term dimensions and differentials.
///
/// `differentials[p]` maps position `p` to `p + 1`; row `i` is the image of
/// the `i`-th basis element of position `p`.
#[derive(Clone, Debug)]
pub struct KoszulDegreePiece {
    pub degree: i64,
    pub term_dims: Vec<usize>,
    pub differentials: Vec<ExactMatrix>,
}

impl KoszulDegreePiece {
    /// Whether every composite `δ_{p+1} ∘ δ_p` vanishes.
    pub fn is_complex(&self) -> bool {
        self.differentials
            .windows(2)
            .all(|w| w[0].mul(&w[1]).is_zero())
    }
}

/// The differential from position `p` to `p + 1`.
pub fn koszul_differential(setup: &KoszulSetup, p: usize) -> ExactMatrix {
    let r = setup.rank();
    assert!(p < r, "position {p} has no outgoing differential");
    let v = setup.nvars();
    let src = MonomialBasis::homogeneous(v, setup.term_degree(p));
    let dst = MonomialBasis::homogeneous(v, setup.term_degree(p + 1));
    let from = subsets(r, r - p);
    let to = subsets(r, r - p - 1);
    let dst_index: BTreeMap<&[usize], usize> = to
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_slice(), i))
        .collect();
    let cells: Vec<(usize, usize)> = (0..from.len())
        .flat_map(|s| (0..src.len()).map(move |u| (s, u)))
        .collect();
    let rows = par::map(cells, |(s, u)| -> SparseRow {
        let set = &from[s];
        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (j, &i) in set.iter().enumerate() {
            let mut rest = set.clone();
            rest.remove(j);
            let offset = dst_index[rest.as_slice()] * dst.len();
            let prod = setup.generators[i].mul_monomial(src.get(u));
            for (m, c) in prod.terms() {
                let k = dst.index_of(m).expect("product lies in the target basis");
                let e = acc.entry(offset + k).or_insert_with(Scalar::zero);
                if j % 2 == 0 {
                    *e += c;
                } else {
                    *e -= c;
                }
            }
        }
        acc.into_iter().filter(|(_, x)| !x.is_zero()).collect()
    });
    ExactMatrix::from_rows(to.len() * dst.len(), rows)
}

pub fn build_koszul(setup: &KoszulSetup) -> KoszulDegreePiece {
    let r = setup.rank();
    let term_dims: Vec<usize> = (0..=r).map(|p| setup.term_dim(p)).collect();
    let differentials = par::map((0..r).collect(), |p| koszul_differential(setup, p));
    KoszulDegreePiece {
        degree: setup.degree(),
        term_dims,
        differentials,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KoszulCohomology {
    pub degree: i64,
    pub term_dims: Vec<usize>,
    pub ranks: Vec<usize>,
    /// Ranks settled by modular ranks at an exact position.
    pub certified: Vec<bool>,
    /// `h^0, ..., h^r`.
    pub h: Vec<usize>,
}

impl KoszulCohomology {
    /// `sum (-1)^p dim K^p`.
    pub fn euler_terms(&self) -> i64 {
        alternating(&self.term_dims)
    }

    /// `sum (-1)^p h^p`.
    pub fn euler_cohomology(&self) -> i64 {
        alternating(&self.h)
    }
}

fn alternating(xs: &[usize]) -> i64 {
    xs.iter()
        .enumerate()
        .map(|(p, &x)| if p % 2 == 0 { x as i64 } else { -(x as i64) })
        .sum()
}

/// Closed-form Euler characteristic `sum_p (-1)^p C(r, r-p) h^0(O(m-(r-p)D))`.
pub fn euler_closed_form(setup: &KoszulSetup) -> i64 {
    let dims: Vec<usize> = (0..=setup.rank()).map(|p| setup.term_dim(p)).collect();
    alternating(&dims)
}

pub fn cohomology_of(piece: &KoszulDegreePiece, opts: EliminationOptions) -> KoszulCohomology {
    cohomology_bounded(piece, &vec![None; piece.differentials.len()], opts)
}

/// As [`cohomology_of`], with proven upper bounds on the ranks.
pub fn cohomology_bounded(
    piece: &KoszulDegreePiece,
    bounds: &[Option<usize>],
    opts: EliminationOptions,
) -> KoszulCohomology {
    let maps: Vec<&ExactMatrix> = piece.differentials.iter().collect();
    let ComplexRanks { ranks, certified } = complex_ranks_bounded(&maps, bounds, opts);
    let r = piece.term_dims.len() - 1;
    let h = (0..=r)
        .map(|p| {
            let out = if p < r { ranks[p] } else { 0 };
            let inc = if p > 0 { ranks[p - 1] } else { 0 };
            piece.term_dims[p] - out - inc
        })
        .collect();
    KoszulCohomology {
        degree: piece.degree,
        term_dims: piece.term_dims.clone(),
        ranks,
        certified,
        h,
    }
}

pub fn koszul_cohomology(setup: &KoszulSetup) -> KoszulCohomology {
    cohomology_of(&build_koszul(setup), EliminationOptions::default())
}

/// One row of the comparison `h^{n+1}(K_m) = h^1(J_Sigma(sigma - m))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KoszulEvRow {
    pub koszul_degree: i64,
    pub ev_degree: i64,
    pub h_n1: usize,
    pub coker: usize,
    pub ev_surjective: bool,
    pub equal: bool,
}

impl KoszulEvRow {
    /// Surjectivity of the evaluation map forces `h^{n+1}` to vanish.
    pub fn vanishing_holds(&self) -> bool {
        !self.ev_surjective || self.h_n1 == 0
    }
}

impl Analysis {
    /// Koszul cohomology of the partials of `f` in degree `m`.
    pub fn koszul(&self, m: i64) -> Result<KoszulCohomology> {
        let setup = KoszulSetup::jacobian(self.instance().f(), m)?;
        let cols = setup.max_columns();
        if cols > self.options().budget {
            return Err(Error::BudgetExceeded {
                cols,
                budget: self.options().budget,
            });
        }
        Ok(self.koszul_of(&build_koszul(&setup)))
    }

    /// Cohomology of a built complex, using `J_m ⊆ I_m` to bound the rank
    /// of the last differential.
    pub fn koszul_of(&self, piece: &KoszulDegreePiece) -> KoszulCohomology {
        let mut bounds = vec![None; piece.differentials.len()];
        let m = piece.degree;
        if m >= 0 {
            if let (Some(last), Ok(dim)) = (piece.differentials.last(), self.ideal_dim(m)) {
                let contained = last
                    .row_slices()
                    .iter()
                    .all(|r| self.in_ideal(m, r).unwrap_or(false));
                if contained {
                    *bounds.last_mut().unwrap() = Some(dim);
                }
            }
        }
        cohomology_bounded(piece, &bounds, self.options().elimination)
    }

    pub fn koszul_ev_row(&self, m: i64, cohomology: &KoszulCohomology) -> Result<KoszulEvRow> {
        let n = self.instance().n();
        let ev_degree = self.sigma() - m;
        let coker = self.h1_ideal(ev_degree)?;
        let h_n1 = cohomology.h[n + 1];
        Ok(KoszulEvRow {
            koszul_degree: m,
            ev_degree,
            h_n1,
            coker,
            ev_surjective: coker == 0,
            equal: h_n1 == coker,
        })
    }

    /// Rows of the comparison for each Koszul degree in `degrees`.
    pub fn verify_koszul_ev(
        &self,
        degrees: impl IntoIterator<Item = i64>,
    ) -> Result<Vec<KoszulEvRow>> {
        let degrees: Vec<i64> = degrees.into_iter().collect();
        par::map(degrees, |m| {
            let c = self.koszul(m)?;
            self.koszul_ev_row(m, &c)
        })
        .into_iter()
        .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jacobian::tests::{fermat, one_node_quintic, poly};

    #[test]
    fn fermat_quartic_degree_four() {
        let a = fermat(2, 4);
        let c = a.koszul(4).unwrap();
        assert_eq!(c.h, vec![0, 0, 0, 0, 19]);
    }

    #[test]
    fn squares_of_differential_vanish() {
        let a = fermat(2, 4);
        let setup = KoszulSetup::jacobian(a.instance().f(), 6).unwrap();
        let k = build_koszul(&setup);
        assert!(k.is_complex());
        assert_eq!(k.term_dims[4], 84);
    }

    #[test]
    fn euler_characteristic_matches_closed_form() {
        let a = one_node_quintic();
        for m in [3, 8, 13] {
            let setup = KoszulSetup::jacobian(a.instance().f(), m).unwrap();
            let c = koszul_cohomology(&setup);
            assert_eq!(c.euler_cohomology(), euler_closed_form(&setup));
            assert_eq!(c.euler_terms(), euler_closed_form(&setup));
        }
    }

    #[test]
    fn negative_degree_terms_are_empty() {
        // two generators x^2, y^2 in degree 2: K^0 = Λ^2 ⊗ A_{-2} = 0
        let g = vec![poly(2, 2, &[(&[2, 0], 1)]), poly(2, 2, &[(&[0, 2], 1)])];
        let c = koszul_cohomology(&KoszulSetup::new(g, 2).unwrap());
        assert_eq!(c.term_dims, vec![0, 2, 3]);
        assert_eq!(c.h, vec![0, 0, 1]);
    }

    #[test]
    fn mismatched_generator_degrees() {
        let g = vec![poly(2, 2, &[(&[2, 0], 1)]), poly(2, 3, &[(&[0, 3], 1)])];
        assert_eq!(
            KoszulSetup::new(g, 4).unwrap_err(),
            Error::Setup {
                expected: 2,
                found: 3
            }
        );
    }

    #[test]
    fn one_node_quintic_rows() {
        let a = one_node_quintic();
        let c13 = a.koszul(13).unwrap();
        assert_eq!(c13.h[3], 1);
        let c6 = a.koszul(6).unwrap();
        assert_eq!(c6.h[3], 0);
        let rows = a.verify_koszul_ev([12]).unwrap();
        assert!(rows[0].equal && rows[0].vanishing_holds());
    }
}
