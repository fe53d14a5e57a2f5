//! Tjurina and Milnor algebras computed in truncated jet spaces.
//!
//! The ideal generated by the local equation (Tjurina) or only its partials
//! (Milnor) is spanned, modulo `m^(N+1)`, by the truncations of `u * g` for
//! every generator `g` and every monomial `u`. Jet columns are ordered with
//! the highest degree first, so the free columns of the reduced echelon
//! form are the low-degree standard monomials of the quotient.

use num_traits::One;
use serde::{Deserialize, Serialize};

use super::jet::{taylor_jet, verify_singular, AffinePoint, JetExpander, LocalPoly};
use crate::algebra::monomial::{monomials_up_to, Monomial, MonomialBasis};
use crate::algebra::{Echelon, HomogeneousPoly, Scalar, SparseRow};
use crate::error::{Error, Result};

/// Default cap on the truncation order of the determinacy loop.
pub const DEFAULT_N_MAX: u32 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgebraKind {
    Tjurina,
    Milnor,
}

/// Quotient of the order-`N` jet space by a truncated local ideal.
#[derive(Clone, Debug)]
pub struct LocalAlgebra {
    kind: AlgebraKind,
    order: u32,
    jets: MonomialBasis,
    ideal: Echelon,
    basis: Vec<Monomial>,
    basis_pos: Vec<usize>,
}

impl LocalAlgebra {
    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Standard monomials spanning the quotient, lowest first.
    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    /// Whether every monomial of degree `order - 1` lies in the truncated
    /// ideal, which makes the quotient independent of the truncation.
    pub fn determinacy_witness(&self) -> bool {
        if self.order == 0 {
            return false;
        }
        let k = self.order - 1;
        self.jets
            .monomials()
            .iter()
            .enumerate()
            .filter(|(_, m)| m.degree() == k)
            .all(|(c, _)| self.ideal.contains(&[(c, Scalar::one())]))
    }

    /// Coordinates of `g` in the quotient basis; `g` is truncated first.
    pub fn reduce(&self, g: &LocalPoly) -> Vec<Scalar> {
        let row = g.truncate(self.order).coordinates(&self.jets);
        self.reduce_row(&row)
    }

    fn reduce_row(&self, row: &SparseRow) -> Vec<Scalar> {
        let nf = self.ideal.reduce(row);
        let mut out = vec![num_traits::Zero::zero(); self.basis.len()];
        for (c, v) in nf {
            out[self.basis_pos[c]] = v;
        }
        out
    }

    /// Reduction of `u * g` is the reduction of the truncated product.
    pub fn reduces_to_zero(&self, g: &LocalPoly) -> bool {
        self.reduce(g).iter().all(num_traits::Zero::is_zero)
    }
}

/// Builds the local algebra of `f` at `p` with truncation order `order`.
pub fn local_algebra(
    f: &HomogeneousPoly,
    p: &AffinePoint,
    kind: AlgebraKind,
    order: u32,
) -> LocalAlgebra {
    let k = p.nvars() - 1;
    let jet = taylor_jet(f, p, order + 1);
    let mut gens: Vec<LocalPoly> = Vec::with_capacity(k + 1);
    if kind == AlgebraKind::Tjurina {
        gens.push(jet.truncate(order));
    }
    for i in 0..k {
        gens.push(jet.partial(i).truncate(order));
    }
    local_algebra_from_generators(k, &gens, kind, order)
}

pub(crate) fn local_algebra_from_generators(
    k: usize,
    gens: &[LocalPoly],
    kind: AlgebraKind,
    order: u32,
) -> LocalAlgebra {
    let jets = MonomialBasis::from_monomials(k, order as i64, monomials_up_to(k, order));
    let mut rows: Vec<SparseRow> = Vec::new();
    for g in gens {
        let Some(o) = g.order() else { continue };
        if o > order {
            continue;
        }
        for u in monomials_up_to(k, order - o) {
            let prod = g.mul_monomial_truncated(&u, order);
            if !prod.is_zero() {
                rows.push(prod.coordinates(&jets));
            }
        }
    }
    let ideal = Echelon::of_rows(jets.len(), &rows);
    // columns run from the highest monomial down, so reversing the free
    // columns lists the standard monomials lowest first
    let free = ideal.free_columns();
    let mut basis_pos = vec![usize::MAX; jets.len()];
    for (i, &c) in free.iter().rev().enumerate() {
        basis_pos[c] = i;
    }
    let basis = free.iter().rev().map(|&c| jets.get(c).clone()).collect();
    LocalAlgebra {
        kind,
        order,
        jets,
        ideal,
        basis,
        basis_pos,
    }
}

/// A stabilized local algebra dimension.
#[derive(Clone, Debug)]
pub struct Stabilized {
    pub value: usize,
    pub order: u32,
    pub algebra: LocalAlgebra,
}

/// Iterates the truncation order `4, 6, 8, ...` up to `n_max` until two
/// consecutive dimensions agree and the determinacy witness holds.
pub fn stabilized_algebra(
    f: &HomogeneousPoly,
    p: &AffinePoint,
    kind: AlgebraKind,
    n_max: u32,
) -> Result<Stabilized> {
    if !verify_singular(f, &p.projective()) {
        return Err(Error::NotSingular(p.to_string()));
    }
    let mut prev: Option<usize> = None;
    let mut order = 4;
    while order <= n_max {
        let alg = local_algebra(f, p, kind, order);
        let dim = alg.dim();
        if prev == Some(dim) && alg.determinacy_witness() {
            return Ok(Stabilized {
                value: dim,
                order,
                algebra: alg,
            });
        }
        prev = Some(dim);
        order += 2;
    }
    Err(Error::NoStabilization { n_max })
}

pub fn tjurina_number(f: &HomogeneousPoly, p: &AffinePoint, n_max: u32) -> Result<Stabilized> {
    stabilized_algebra(f, p, AlgebraKind::Tjurina, n_max)
}

pub fn milnor_number(f: &HomogeneousPoly, p: &AffinePoint, n_max: u32) -> Result<Stabilized> {
    stabilized_algebra(f, p, AlgebraKind::Milnor, n_max)
}

/// Evaluates ambient monomials into the local algebra at `p`: entry `j`
/// holds the coordinates of `monomials[j]`.
pub fn evaluate_monomials(
    alg: &LocalAlgebra,
    p: &AffinePoint,
    monomials: &[Monomial],
) -> Vec<Vec<Scalar>> {
    let mut expander = JetExpander::new(p, alg.order());
    monomials
        .iter()
        .map(|m| alg.reduce(&expander.expand_monomial(m)))
        .collect()
}
