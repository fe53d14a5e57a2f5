use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::instance::HypersurfaceInstance;
use super::piece::{EvaluationMapPiece, GradedPiece};
use crate::algebra::matrix::{sparse_dot, SparseRow};
use crate::algebra::monomial::basis_size;
use crate::algebra::{
    Echelon, EliminationOptions, ExactMatrix, HomogeneousPoly, MonomialBasis, Scalar,
};
use crate::error::{Error, Result};
use crate::koszul::{koszul_differential, KoszulSetup};
use crate::local::tjurina::{evaluate_monomials, DEFAULT_N_MAX};
use crate::local::{classify_ade, SingularityRecord};
use crate::par;

pub const DEFAULT_BUDGET: usize = 200_000;

const EVAL_CHUNK: usize = 128;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AnalysisOptions {
    pub n_max: u32,
    /// Largest monomial basis any computation may build.
    pub budget: usize,
    pub elimination: EliminationOptions,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            n_max: DEFAULT_N_MAX,
            budget: DEFAULT_BUDGET,
            elimination: EliminationOptions::default(),
        }
    }
}

/// `dim (A/J)_m` and `dim (I/J)_m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientDims {
    pub degree: i64,
    pub a_mod_j: usize,
    pub i_mod_j: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub degrees: Vec<i64>,
    pub stabilized: Vec<usize>,
    pub declared_tau: usize,
    pub passed: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualityRow {
    pub degree: i64,
    pub dim: usize,
    pub dual_dim: usize,
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualityReport {
    pub sigma: i64,
    pub rows: Vec<DualityRow>,
    /// `dim (I/J)_m` for `m = sigma + 1, sigma + 2`.
    pub beyond_sigma: Vec<(i64, usize)>,
    pub symmetric: bool,
    pub vanishes_beyond_sigma: bool,
}

impl DualityReport {
    pub fn holds(&self) -> bool {
        self.symmetric && self.vanishes_beyond_sigma
    }
}

/// How a computed p-value compares with the tabulated bound `s_k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableRelation {
    Equal,
    BelowTabulated,
    ExceedsTabulated,
    NotTabulated,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PValueReport {
    /// Length of the singular scheme, i.e. the total Tjurina number.
    pub length: usize,
    /// `(m, h^1(J_Sigma(m)))` for `m = 0..=p + 1`.
    pub sweep: Vec<(i64, usize)>,
    pub p: i64,
    pub monotone: bool,
    pub tabulated_s_k: Option<i64>,
    pub relation: TableRelation,
    pub discrepancy: bool,
}

/// Tabulated values of `s_k(P^{n+1})` for small `k`.
pub fn tabulated_s(k: usize) -> Option<i64> {
    match k {
        0 | 1 => Some(0),
        2 => Some(2),
        _ => None,
    }
}

type Cache<T> = Mutex<HashMap<i64, T>>;

fn cached<T: Clone>(cache: &Cache<T>, m: i64, build: impl FnOnce() -> Result<T>) -> Result<T> {
    if let Some(v) = cache.lock().unwrap().get(&m) {
        return Ok(v.clone());
    }
    let v = build()?;
    Ok(cache.lock().unwrap().entry(m).or_insert(v).clone())
}

/// A hypersurface with its classified singular points and per-degree
/// caches of the graded pieces.
pub struct Analysis {
    instance: HypersurfaceInstance,
    records: Vec<SingularityRecord>,
    opts: AnalysisOptions,
    gradient: Vec<HomogeneousPoly>,
    bases: Cache<Arc<MonomialBasis>>,
    jac: Cache<Arc<GradedPiece>>,
    ev: Cache<Arc<EvaluationMapPiece>>,
    ideal: Cache<Arc<GradedPiece>>,
    i_mod_j: Cache<Arc<Echelon>>,
}

impl Analysis {
    pub fn new(instance: HypersurfaceInstance, opts: AnalysisOptions) -> Result<Self> {
        let f = instance.f();
        let records = par::map(instance.points().to_vec(), |p| {
            classify_ade(f, &p, opts.n_max)
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        let gradient = f.gradient();
        Ok(Self {
            instance,
            records,
            opts,
            gradient,
            bases: Default::default(),
            jac: Default::default(),
            ev: Default::default(),
            ideal: Default::default(),
            i_mod_j: Default::default(),
        })
    }

    pub fn instance(&self) -> &HypersurfaceInstance {
        &self.instance
    }

    pub fn records(&self) -> &[SingularityRecord] {
        &self.records
    }

    pub fn options(&self) -> &AnalysisOptions {
        &self.opts
    }

    pub fn sigma(&self) -> i64 {
        self.instance.sigma()
    }

    pub fn total_tjurina(&self) -> usize {
        self.records.iter().map(|r| r.tjurina).sum()
    }

    /// `h^0(O(m))`.
    pub fn h0(&self, m: i64) -> usize {
        basis_size(self.instance.nvars(), m)
    }

    pub fn basis(&self, m: i64) -> Result<Arc<MonomialBasis>> {
        let cols = self.h0(m);
        if cols > self.opts.budget {
            return Err(Error::BudgetExceeded {
                cols,
                budget: self.opts.budget,
            });
        }
        cached(&self.bases, m, || {
            Ok(Arc::new(MonomialBasis::homogeneous(
                self.instance.nvars(),
                m,
            )))
        })
    }

    /// `J_m`, spanned by `x^u * df/dx_i` with `deg u = m - d + 1`.
    pub fn jacobian_piece(&self, m: i64) -> Result<Arc<GradedPiece>> {
        let basis = self.basis(m)?;
        cached(&self.jac, m, || {
            // J_m is the image of the last Koszul differential; the one
            // before it supplies the Koszul syzygies
            let setup = KoszulSetup::new(self.gradient.clone(), m)?;
            let r = setup.rank();
            let (span, relations) = par::join(
                || koszul_differential(&setup, r - 1),
                || koszul_differential(&setup, r - 2),
            );
            // once J_m ⊆ I_m is checked exactly, dim I_m bounds dim J_m
            self.check_rows_in_ideal(m, &span)?;
            let bound = self.ideal_dim(m)?;
            let piece = GradedPiece::new(basis.clone(), span, self.opts.elimination)
                .with_relations(relations)
                .with_bound(bound);
            Ok(Arc::new(piece))
        })
    }

    /// The jet-evaluation map `H^0(O(m)) -> sum_P O_{Sigma,P}`.
    pub fn evaluation_map(&self, m: i64) -> Result<Arc<EvaluationMapPiece>> {
        let basis = self.basis(m)?;
        cached(&self.ev, m, || {
            let mut rows: Vec<SparseRow> = Vec::with_capacity(self.total_tjurina());
            for rec in &self.records {
                let chunks: Vec<_> = basis.monomials().chunks(EVAL_CHUNK).enumerate().collect();
                let columns = par::map(chunks, |(k, ms)| {
                    (
                        k * EVAL_CHUNK,
                        evaluate_monomials(&rec.algebra, &rec.point, ms),
                    )
                });
                let mut local: Vec<SparseRow> = vec![Vec::new(); rec.algebra.dim()];
                for (offset, cols) in columns {
                    for (j, col) in cols.into_iter().enumerate() {
                        for (r, x) in col.into_iter().enumerate() {
                            if !x.is_zero() {
                                local[r].push((offset + j, x));
                            }
                        }
                    }
                }
                rows.extend(local);
            }
            let matrix = ExactMatrix::from_rows(basis.len(), rows);
            let rank = matrix.rank_with(self.opts.elimination);
            let coker_dim = matrix.rows() - rank;
            Ok(Arc::new(EvaluationMapPiece {
                degree: m,
                matrix,
                rank,
                coker_dim,
            }))
        })
    }

    /// `I_m`, the kernel of the evaluation map.
    pub fn ideal_piece(&self, m: i64) -> Result<Arc<GradedPiece>> {
        let ev = self.evaluation_map(m)?;
        let basis = self.basis(m)?;
        cached(&self.ideal, m, || {
            let ker = ev.matrix.row_echelon().kernel_basis();
            let piece = GradedPiece::new(basis.clone(), ker, self.opts.elimination);
            debug_assert_eq!(piece.span().rows(), basis.len() - ev.rank);
            Ok(Arc::new(piece))
        })
    }

    /// `dim I_m`, without building a kernel basis.
    pub fn ideal_dim(&self, m: i64) -> Result<usize> {
        let ev = self.evaluation_map(m)?;
        Ok(ev.matrix.cols() - ev.rank)
    }

    /// `h^1(J_Sigma(m))`, the cokernel of the evaluation map; for `m < 0`
    /// this is the full total Tjurina number.
    pub fn h1_ideal(&self, m: i64) -> Result<usize> {
        Ok(self.evaluation_map(m)?.coker_dim)
    }

    /// Whether `row` (coordinates in degree `m`) lies in `I_m`.
    pub fn in_ideal(&self, m: i64, row: &[(usize, Scalar)]) -> Result<bool> {
        let ev = self.evaluation_map(m)?;
        Ok(ev
            .matrix
            .row_slices()
            .iter()
            .all(|r| sparse_dot(r, row).is_zero()))
    }

    fn check_rows_in_ideal(&self, m: i64, rows: &ExactMatrix) -> Result<()> {
        for row in rows.row_slices() {
            if !self.in_ideal(m, row)? {
                return Err(Error::Consistency(format!(
                    "J_{m} is not contained in I_{m}; the declared singular locus is wrong"
                )));
            }
        }
        Ok(())
    }

    /// Asserts `J_m ⊆ I_m`; also checked whenever `J_m` is built.
    pub fn check_containment(&self, m: i64) -> Result<()> {
        let jac = self.jacobian_piece(m)?;
        self.check_rows_in_ideal(m, jac.span())
    }

    pub fn quotient_dims(&self, m: i64) -> Result<QuotientDims> {
        if m < 0 {
            return Ok(QuotientDims {
                degree: m,
                a_mod_j: 0,
                i_mod_j: 0,
            });
        }
        self.check_containment(m)?;
        let (j, i) = par::join(
            || self.jacobian_piece(m).map(|p| p.dim()),
            || self.ideal_dim(m),
        );
        let (j, i) = (j?, i?);
        Ok(QuotientDims {
            degree: m,
            a_mod_j: self.h0(m) - j,
            i_mod_j: i - j,
        })
    }

    pub fn hilbert_table(
        &self,
        degrees: impl IntoIterator<Item = i64>,
    ) -> Result<Vec<QuotientDims>> {
        let degrees: Vec<i64> = degrees.into_iter().collect();
        par::map(degrees, |m| self.quotient_dims(m))
            .into_iter()
            .collect()
    }

    /// Indices of the standard monomials of degree `m`, a basis of
    /// `(A/J)_m`.
    pub fn standard_monomials(&self, m: i64) -> Result<Vec<usize>> {
        if m < 0 {
            return Ok(Vec::new());
        }
        Ok(self.jacobian_piece(m)?.echelon().free_columns())
    }

    /// Normal form of `row` modulo `J_m`, supported on standard monomials.
    pub fn reduce_mod_j(&self, m: i64, row: &[(usize, Scalar)]) -> Result<SparseRow> {
        Ok(self.jacobian_piece(m)?.echelon().reduce(row))
    }

    /// Complement of `J_m` in `I_m`: the elements of `I_m` supported on
    /// standard monomials, in reduced echelon form.
    pub fn i_mod_j(&self, m: i64) -> Result<Arc<Echelon>> {
        let std = self.standard_monomials(m)?;
        let ev = self.evaluation_map(m)?;
        let cols = self.h0(m);
        cached(&self.i_mod_j, m, || {
            let mut pos = vec![usize::MAX; cols];
            for (k, &c) in std.iter().enumerate() {
                pos[c] = k;
            }
            let restricted: Vec<SparseRow> = ev
                .matrix
                .row_slices()
                .iter()
                .map(|r| {
                    r.iter()
                        .filter(|(c, _)| pos[*c] != usize::MAX)
                        .map(|(c, x)| (pos[*c], x.clone()))
                        .collect()
                })
                .collect();
            let ker = ExactMatrix::from_rows(std.len(), restricted).kernel_basis();
            let rows: Vec<SparseRow> = ker
                .into_rows()
                .into_iter()
                .map(|r| r.into_iter().map(|(k, x)| (std[k], x)).collect())
                .collect();
            Ok(Arc::new(Echelon::of_rows(cols, &rows)))
        })
    }

    /// Stabilized `dim (A/J)` at `sigma + 1` and `sigma + 2` against the
    /// declared total Tjurina number.
    pub fn completeness_certificate(&self) -> Result<Certificate> {
        let s = self.sigma();
        let degrees = vec![s + 1, s + 2];
        let dims = par::map(degrees.clone(), |m| {
            self.jacobian_piece(m).map(|p| p.codim())
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        let tau = self.total_tjurina();
        let passed = dims.iter().all(|&x| x == tau);
        Ok(Certificate {
            degrees,
            stabilized: dims,
            declared_tau: tau,
            passed,
        })
    }

    /// The certificate, turned into an error when it fails.
    pub fn require_certificate(&self) -> Result<Certificate> {
        let c = self.completeness_certificate()?;
        if c.passed {
            Ok(c)
        } else {
            Err(Error::IncompleteSingularLocus {
                stabilized: c.stabilized,
                declared: c.declared_tau,
            })
        }
    }

    /// `dim (I/J)_m` against `dim (I/J)_{sigma - m}` for `0 <= m <= sigma`.
    pub fn duality_report(&self) -> Result<DualityReport> {
        self.require_certificate()?;
        let s = self.sigma();
        let table = self.hilbert_table(0..=s + 2)?;
        let dim = |m: i64| table[m as usize].i_mod_j;
        let rows: Vec<DualityRow> = (0..=s)
            .map(|m| {
                let (a, b) = (dim(m), dim(s - m));
                DualityRow {
                    degree: m,
                    dim: a,
                    dual_dim: b,
                    equal: a == b,
                }
            })
            .collect();
        let beyond_sigma: Vec<(i64, usize)> = (s + 1..=s + 2).map(|m| (m, dim(m))).collect();
        Ok(DualityReport {
            sigma: s,
            symmetric: rows.iter().all(|r| r.equal),
            vanishes_beyond_sigma: beyond_sigma.iter().all(|&(_, x)| x == 0),
            rows,
            beyond_sigma,
        })
    }

    /// Least `m >= 0` with `h^1(J_Sigma(m)) = 0`, with a monotonicity check
    /// one degree further.
    pub fn p_value(&self) -> Result<PValueReport> {
        let k = self.total_tjurina();
        // k points in any scheme of length k impose independent conditions
        // in degree k - 1
        let bound = k.max(1) as i64;
        let mut sweep = Vec::new();
        let mut p = None;
        for m in 0..=bound {
            let h = self.h1_ideal(m)?;
            sweep.push((m, h));
            if h == 0 {
                p = Some(m);
                break;
            }
        }
        let p = p.ok_or_else(|| {
            Error::Consistency(format!(
                "h^1 still nonzero in degree {bound} for a scheme of length {k}"
            ))
        })?;
        let next = self.h1_ideal(p + 1)?;
        sweep.push((p + 1, next));
        let tabulated = tabulated_s(k);
        let relation = match tabulated {
            None => TableRelation::NotTabulated,
            Some(s) if s == p => TableRelation::Equal,
            Some(s) if p < s => TableRelation::BelowTabulated,
            Some(_) => TableRelation::ExceedsTabulated,
        };
        Ok(PValueReport {
            length: k,
            sweep,
            p,
            monotone: next == 0,
            tabulated_s_k: tabulated,
            relation,
            discrepancy: !matches!(relation, TableRelation::Equal | TableRelation::NotTabulated),
        })
    }
}
