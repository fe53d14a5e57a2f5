use std::sync::{Arc, OnceLock};

use crate::algebra::complex::{bounded_rank, rank_in_complex};
use crate::algebra::{Echelon, EliminationOptions, ExactMatrix, MonomialBasis};

/// A subspace of the degree-`m` forms, given by spanning rows in the
/// monomial basis.
#[derive(Debug)]
pub struct GradedPiece {
    degree: i64,
    basis: Arc<MonomialBasis>,
    span: ExactMatrix,
    /// Known left-kernel vectors of `span`, used to certify its rank.
    relations: Option<ExactMatrix>,
    /// Proven upper bound on the dimension.
    bound: Option<usize>,
    opts: EliminationOptions,
    rank: OnceLock<usize>,
    echelon: OnceLock<Echelon>,
}

impl GradedPiece {
    pub fn new(basis: Arc<MonomialBasis>, span: ExactMatrix, opts: EliminationOptions) -> Self {
        assert_eq!(span.cols(), basis.len());
        Self {
            degree: basis.degree(),
            basis,
            span,
            relations: None,
            bound: None,
            opts,
            rank: OnceLock::new(),
            echelon: OnceLock::new(),
        }
    }

    /// A piece whose rows are already in reduced echelon form.
    pub fn from_echelon(
        basis: Arc<MonomialBasis>,
        echelon: Echelon,
        opts: EliminationOptions,
    ) -> Self {
        let piece = Self::new(basis, echelon.to_matrix(), opts);
        let _ = piece.rank.set(echelon.rank());
        let _ = piece.echelon.set(echelon);
        piece
    }

    /// Attaches rows `y` with `y * span = 0`.
    pub fn with_relations(mut self, relations: ExactMatrix) -> Self {
        assert_eq!(relations.cols(), self.span.rows());
        self.relations = Some(relations);
        self
    }

    /// Records a proven upper bound on the dimension, e.g. the dimension
    /// of a space known to contain this one.
    pub fn with_bound(mut self, bound: usize) -> Self {
        self.bound = Some(bound);
        self
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn basis(&self) -> &Arc<MonomialBasis> {
        &self.basis
    }

    pub fn span(&self) -> &ExactMatrix {
        &self.span
    }

    /// Dimension of the subspace.
    pub fn dim(&self) -> usize {
        if let Some(e) = self.echelon.get() {
            return e.rank();
        }
        *self.rank.get_or_init(|| match &self.relations {
            Some(rel) => rank_in_complex(&[rel, &self.span], &[None, self.bound], 1, self.opts),
            None => bounded_rank(&self.span, self.bound, self.opts),
        })
    }

    /// Codimension in the degree-`m` forms.
    pub fn codim(&self) -> usize {
        self.basis.len() - self.dim()
    }

    pub fn echelon(&self) -> &Echelon {
        self.echelon.get_or_init(|| self.span.row_echelon())
    }
}

/// The jet-evaluation map in one degree.
#[derive(Debug)]
pub struct EvaluationMapPiece {
    pub degree: i64,
    /// Rows are indexed by the local algebra bases of all points, columns
    /// by the degree-`m` monomials.
    pub matrix: ExactMatrix,
    pub rank: usize,
    pub coker_dim: usize,
}

impl EvaluationMapPiece {
    pub fn is_surjective(&self) -> bool {
        self.coker_dim == 0
    }
}
