use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::analysis::{Analysis, Certificate};
use super::hodge::GenerationReport;
use super::hodge::Quotient;
use super::piece::GradedPiece;
use crate::algebra::matrix::SparseRow;
use crate::algebra::{ExactMatrix, Scalar};
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "injective")]
    Injective,
    #[serde(rename = "kernel_exceeds_J_d")]
    KernelExceedsJd,
    #[serde(rename = "hypotheses_not_satisfied")]
    HypothesesNotSatisfied,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Injective => "injective",
            Verdict::KernelExceedsJd => "kernel_exceeds_J_d",
            Verdict::HypothesesNotSatisfied => "hypotheses_not_satisfied",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Lifted kernel of the multiplication map against `J_d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum KernelComparison {
    #[serde(rename = "kernel_equals_J_d")]
    KernelEqualsJd,
    #[serde(rename = "kernel_exceeds_J_d")]
    KernelExceedsJd,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypotheses {
    /// `d - (n + 2)`, required positive.
    pub degree_margin: i64,
    /// Degree `d - (n + 3)` at which the evaluation map must be onto.
    pub ev_degree: i64,
    pub ev_surjective: bool,
    pub generation_a_mod_j: bool,
    pub generation_i_mod_j: bool,
}

impl Hypotheses {
    pub fn all_hold(&self) -> bool {
        self.degree_margin > 0
            && self.ev_surjective
            && self.generation_a_mod_j
            && self.generation_i_mod_j
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorelliReport {
    pub certificate: Certificate,
    pub hypotheses: Hypotheses,
    pub source_degree: i64,
    pub source_dim: usize,
    pub target_degree: i64,
    pub target_space: Quotient,
    pub target_dim: usize,
    /// `dim (I/J)_d`, the domain of the multiplication map.
    pub domain_dim: usize,
    pub kernel_dim: usize,
    pub kernel_lift_dim: usize,
    pub j_d_dim: usize,
    pub kernel_comparison: KernelComparison,
    pub verdict: Verdict,
}

/// The report together with the matrices behind it.
#[derive(Debug)]
pub struct TorelliOutcome {
    pub report: TorelliReport,
    /// Rows indexed by a basis of `(I/J)_d`, each the flattened matrix of
    /// its IVHS differential.
    pub map: ExactMatrix,
    /// Span of `J_d` and the lifted kernel, inside `I_d`.
    pub kernel_lift: GradedPiece,
    pub j_d: Arc<GradedPiece>,
    /// Generation checks behind the hypotheses, `A/J` then `I/J`.
    pub generation: Vec<GenerationReport>,
}

impl Analysis {
    pub fn torelli_report(&self) -> Result<TorelliOutcome> {
        let certificate = self.require_certificate()?;
        let (n, d) = (self.instance().n() as i64, self.instance().d() as i64);
        let margin = d - (n + 2);
        let ev_degree = d - (n + 3);
        let ev_surjective = ev_degree >= 0 && self.evaluation_map(ev_degree)?.is_surjective();
        let m0 = margin.max(0);
        let (gen_a, gen_i) = crate::par::join(
            || self.generation_check(Quotient::AModJ, m0),
            || self.generation_check(Quotient::IModJ, m0),
        );
        let generation = vec![gen_a?, gen_i?];
        let hypotheses = Hypotheses {
            degree_margin: margin,
            ev_degree,
            ev_surjective,
            generation_a_mod_j: generation[0].passed,
            generation_i_mod_j: generation[1].passed,
        };

        let source_degree = self.ivhs_source_degree();
        let (target_degree, target_space) = self.ivhs_target();
        let source_dim = self.quotient_dim(Quotient::AModJ, source_degree)?;
        let target_dim = self.quotient_dim(target_space, target_degree)?;

        let domain: Vec<SparseRow> = self.quotient_basis(Quotient::IModJ, d)?;
        let flattened = crate::par::map(domain.clone(), |c| -> Result<SparseRow> {
            let m = self.ivhs_on_row(&c)?;
            let width = m.cols();
            let mut row: SparseRow = Vec::new();
            for r in 0..m.rows() {
                for (k, x) in m.row(r) {
                    row.push((r * width + k, x.clone()));
                }
            }
            Ok(row)
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        let map = ExactMatrix::from_rows(source_dim * target_dim, flattened);
        // left kernel: combinations of domain elements mapping to zero
        let kernel = map.transpose().kernel_basis();

        let j_d = self.jacobian_piece(d)?;
        let mut lifted: Vec<SparseRow> = j_d.span().row_slices().to_vec();
        for coeffs in kernel.row_slices() {
            let mut acc = std::collections::BTreeMap::<usize, Scalar>::new();
            for (k, a) in coeffs {
                for (c, x) in &domain[*k] {
                    *acc.entry(*c).or_insert_with(Scalar::zero) += a * x;
                }
            }
            lifted.push(acc.into_iter().filter(|(_, x)| !x.is_zero()).collect());
        }
        let basis = j_d.basis().clone();
        let kernel_lift = GradedPiece::new(
            basis.clone(),
            ExactMatrix::from_rows(basis.len(), lifted),
            self.options().elimination,
        );
        // J_d is contained in the lift by construction, so equal ranks mean
        // equal subspaces
        let kernel_comparison = if kernel_lift.dim() == j_d.dim() {
            KernelComparison::KernelEqualsJd
        } else {
            KernelComparison::KernelExceedsJd
        };
        let verdict = if !hypotheses.all_hold() {
            Verdict::HypothesesNotSatisfied
        } else if kernel_comparison == KernelComparison::KernelEqualsJd {
            Verdict::Injective
        } else {
            Verdict::KernelExceedsJd
        };
        let report = TorelliReport {
            certificate,
            hypotheses,
            source_degree,
            source_dim,
            target_degree,
            target_space,
            target_dim,
            domain_dim: domain.len(),
            kernel_dim: kernel.rows(),
            kernel_lift_dim: kernel_lift.dim(),
            j_d_dim: j_d.dim(),
            kernel_comparison,
            verdict,
        };
        Ok(TorelliOutcome {
            report,
            map,
            kernel_lift,
            j_d,
            generation,
        })
    }
}
