//! Fraction-free elimination over the integers.
//!
//! Rational rows are scaled to primitive integer rows. Reduction of a row
//! `r` by a pivot row `p` on column `c` is `r <- (b/g) r - (a/g) p` with
//! `a = r[c]`, `b = p[c]`, `g = gcd(a, b)`, followed by removal of the row
//! content, so no rational arithmetic happens inside the elimination.
//! Working rows switch to a dense buffer once more than half their entries
//! are nonzero.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::{ExactMatrix, SparseRow};
use super::modular;
use super::multimodular;
use super::scalar::Scalar;

type IntRow = Vec<(usize, BigInt)>;

const NO_PIVOT: usize = usize::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EliminationOptions {
    /// Run the modular rank pre-pass before exact elimination.
    pub modular_prepass: bool,
}

impl Default for EliminationOptions {
    fn default() -> Self {
        Self {
            modular_prepass: true,
        }
    }
}

fn to_int_row(row: &SparseRow) -> IntRow {
    if row.is_empty() {
        return Vec::new();
    }
    let vals: Vec<Scalar> = row.iter().map(|e| e.1.clone()).collect();
    let ints = super::scalar::primitive_integers(&vals);
    row.iter().map(|e| e.0).zip(ints).collect()
}

fn primitive(row: &mut IntRow) {
    let mut g = BigInt::zero();
    for (_, v) in row.iter() {
        g = g.gcd(v);
        if g.is_one() {
            break;
        }
    }
    let neg = row.first().is_some_and(|e| e.1.is_negative());
    if g.is_zero() || (g.is_one() && !neg) {
        return;
    }
    if neg {
        g = -g;
    }
    for (_, v) in row.iter_mut() {
        *v = &*v / &g;
    }
}

/// `mb * r - ma * p`, merging sparse rows; entries that cancel are dropped.
fn combine_sparse(
    r: &[(usize, BigInt)],
    p: &[(usize, BigInt)],
    ma: &BigInt,
    mb: &BigInt,
) -> IntRow {
    let mut out = Vec::with_capacity(r.len() + p.len());
    let (mut i, mut j) = (0, 0);
    let unit = mb.is_one();
    while i < r.len() || j < p.len() {
        let ci = r.get(i).map_or(usize::MAX, |e| e.0);
        let cj = p.get(j).map_or(usize::MAX, |e| e.0);
        if ci < cj {
            let v = if unit { r[i].1.clone() } else { mb * &r[i].1 };
            out.push((ci, v));
            i += 1;
        } else if cj < ci {
            out.push((cj, -(ma * &p[j].1)));
            j += 1;
        } else {
            let v = if unit { r[i].1.clone() } else { mb * &r[i].1 } - ma * &p[j].1;
            if !v.is_zero() {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn multipliers(a: &BigInt, b: &BigInt) -> (BigInt, BigInt) {
    let g = a.gcd(b);
    let (mut ma, mut mb) = (a / &g, b / &g);
    if mb.is_negative() {
        ma = -ma;
        mb = -mb;
    }
    (ma, mb)
}

/// Semi-echelon basis: each stored row has a distinct leading column.
struct Reducer {
    cols: usize,
    slot: Vec<usize>,
    pivots: Vec<IntRow>,
}

impl Reducer {
    fn new(cols: usize) -> Self {
        Self {
            cols,
            slot: vec![NO_PIVOT; cols],
            pivots: Vec::new(),
        }
    }

    fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `row` until its leading column carries no pivot.
    fn reduce_top(&self, mut row: IntRow) -> IntRow {
        loop {
            let Some((c, _)) = row.first() else {
                return row;
            };
            let k = self.slot[*c];
            if k == NO_PIVOT {
                return row;
            }
            if 2 * row.len() > self.cols {
                return self.reduce_top_dense(row);
            }
            let p = &self.pivots[k];
            let (ma, mb) = multipliers(&row[0].1, &p[0].1);
            row = combine_sparse(&row[1..], &p[1..], &ma, &mb);
            if !mb.is_one() {
                primitive(&mut row);
            }
        }
    }

    fn reduce_top_dense(&self, row: IntRow) -> IntRow {
        let mut vals = vec![BigInt::zero(); self.cols];
        let mut lead = row[0].0;
        for (c, v) in row {
            vals[c] = v;
        }
        let mut dirty = false;
        loop {
            while lead < self.cols && vals[lead].is_zero() {
                lead += 1;
            }
            if lead == self.cols {
                return Vec::new();
            }
            let k = self.slot[lead];
            if k == NO_PIVOT {
                break;
            }
            let p = &self.pivots[k];
            let (ma, mb) = multipliers(&vals[lead], &p[0].1);
            if !mb.is_one() {
                for v in vals[lead..].iter_mut() {
                    if !v.is_zero() {
                        *v *= &mb;
                    }
                }
                dirty = true;
            }
            for (c, pv) in p {
                vals[*c] -= &ma * pv;
            }
            if dirty {
                let mut g = BigInt::zero();
                for v in &vals[lead..] {
                    if !v.is_zero() {
                        g = g.gcd(v);
                        if g.is_one() {
                            break;
                        }
                    }
                }
                if !g.is_zero() && !g.is_one() {
                    for v in vals[lead..].iter_mut() {
                        if !v.is_zero() {
                            *v = &*v / &g;
                        }
                    }
                }
                dirty = false;
            }
        }
        let mut out: IntRow = vals
            .into_iter()
            .enumerate()
            .skip(lead)
            .filter(|(_, v)| !v.is_zero())
            .collect();
        primitive(&mut out);
        out
    }

    /// Adds `row` to the basis. Returns whether it was independent.
    fn insert(&mut self, row: IntRow) -> bool {
        let mut r = self.reduce_top(row);
        if r.is_empty() {
            return false;
        }
        primitive(&mut r);
        self.slot[r[0].0] = self.pivots.len();
        self.pivots.push(r);
        true
    }

    /// Back-substitution to reduced echelon form over the rationals.
    fn into_echelon(mut self) -> Echelon {
        let mut order: Vec<usize> = (0..self.pivots.len()).collect();
        order.sort_by_key(|&k| std::cmp::Reverse(self.pivots[k][0].0));
        for &k in &order {
            let mut row = std::mem::take(&mut self.pivots[k]);
            let mut pos = 1;
            while pos < row.len() {
                let c = row[pos].0;
                let q = self.slot[c];
                if q == NO_PIVOT {
                    pos += 1;
                    continue;
                }
                let p = &self.pivots[q];
                let (ma, mb) = multipliers(&row[pos].1, &p[0].1);
                let head: IntRow = row[..pos].to_vec();
                let tail = combine_sparse(&row[pos + 1..], &p[1..], &ma, &mb);
                let scaled_head: IntRow = if mb.is_one() {
                    head
                } else {
                    head.into_iter().map(|(c, v)| (c, v * &mb)).collect()
                };
                row = merge_disjoint(scaled_head, tail);
                if !mb.is_one() {
                    primitive(&mut row);
                }
                // entries before `pos` are the lead and non-pivot columns
            }
            self.pivots[k] = row;
        }
        let mut pairs: Vec<(usize, SparseRow)> = self
            .pivots
            .into_iter()
            .map(|row| {
                let lead = row[0].1.clone();
                let c0 = row[0].0;
                let r: SparseRow = row
                    .into_iter()
                    .map(|(c, v)| (c, Scalar::new(v, lead.clone())))
                    .collect();
                (c0, r)
            })
            .collect();
        pairs.sort_by_key(|p| p.0);
        let cols = self.cols;
        let (pivots, rows): (Vec<usize>, Vec<SparseRow>) = pairs.into_iter().unzip();
        Echelon::from_parts(cols, pivots, rows)
    }
}

fn merge_disjoint(a: IntRow, b: IntRow) -> IntRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut ia, mut ib) = (a.into_iter().peekable(), b.into_iter().peekable());
    loop {
        match (ia.peek(), ib.peek()) {
            (Some(x), Some(y)) => {
                if x.0 < y.0 {
                    out.push(ia.next().unwrap());
                } else {
                    out.push(ib.next().unwrap());
                }
            }
            (Some(_), None) => out.push(ia.next().unwrap()),
            (None, Some(_)) => out.push(ib.next().unwrap()),
            (None, None) => break,
        }
    }
    out
}

/// Rows sorted by leading column, then by fill, so sparse rows become
/// pivots first.
fn default_order(m: &ExactMatrix) -> Vec<usize> {
    let mut order: Vec<usize> = (0..m.rows()).filter(|&i| !m.row(i).is_empty()).collect();
    order.sort_by_key(|&i| (m.row(i)[0].0, m.row(i).len()));
    order
}

/// Exact rank over the rationals.
pub fn rank(m: &ExactMatrix, opts: EliminationOptions) -> usize {
    if opts.modular_prepass {
        if let Some(pre) = modular::prepass(m) {
            if pre.rank == m.rows().min(m.cols()) {
                return pre.rank;
            }
        }
        if let Some((pivots, _)) = multimodular::rref(m.cols(), m.row_slices()) {
            return pivots.len();
        }
    }
    fraction_free_rank(m, opts)
}

fn fraction_free_rank(m: &ExactMatrix, opts: EliminationOptions) -> usize {
    let transposed;
    let m = if m.rows() > m.cols() {
        transposed = m.transpose();
        &transposed
    } else {
        m
    };
    if m.rows() == 0 || m.cols() == 0 {
        return 0;
    }
    let mut order = default_order(m);
    if opts.modular_prepass {
        if let Some(pre) = modular::prepass(m) {
            if pre.rank == m.rows() {
                return pre.rank;
            }
            let mut first = pre.pivot_rows.clone();
            first.sort_by_key(|&i| (m.row(i)[0].0, m.row(i).len()));
            let mut is_first = vec![false; m.rows()];
            for &i in &first {
                is_first[i] = true;
            }
            order.retain(|&i| !is_first[i]);
            first.extend(order);
            order = first;
        }
    }
    let full = m.cols().min(m.rows());
    let mut red = Reducer::new(m.cols());
    for i in order {
        red.insert(to_int_row(m.row(i)));
        if red.rank() == full {
            break;
        }
    }
    red.rank()
}

/// Reduced row echelon form of a row space.
///
/// Every stored row has a 1 in its pivot column and zeros in all other
/// pivot columns; pivots are increasing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Echelon {
    cols: usize,
    pivots: Vec<usize>,
    rows: Vec<SparseRow>,
    slot: Vec<usize>,
}

impl Echelon {
    pub fn of(m: &ExactMatrix) -> Self {
        Self::of_rows(m.cols(), m.row_slices())
    }

    /// Tries Chinese remaindering first and falls back to fraction-free
    /// elimination.
    pub fn of_rows(cols: usize, rows: &[SparseRow]) -> Self {
        match multimodular::rref(cols, rows) {
            Some((pivots, rref)) => Self::from_parts(cols, pivots, rref),
            None => Self::of_rows_fraction_free(cols, rows),
        }
    }

    pub fn of_rows_fraction_free(cols: usize, rows: &[SparseRow]) -> Self {
        let mut order: Vec<usize> = (0..rows.len()).filter(|&i| !rows[i].is_empty()).collect();
        order.sort_by_key(|&i| (rows[i][0].0, rows[i].len()));
        let mut red = Reducer::new(cols);
        for i in order {
            red.insert(to_int_row(&rows[i]));
            if red.rank() == cols {
                break;
            }
        }
        red.into_echelon()
    }

    /// The echelon form of the zero subspace of `cols`-space.
    pub fn empty(cols: usize) -> Self {
        Self::from_parts(cols, Vec::new(), Vec::new())
    }

    fn from_parts(cols: usize, pivots: Vec<usize>, rows: Vec<SparseRow>) -> Self {
        let mut slot = vec![NO_PIVOT; cols];
        for (k, &c) in pivots.iter().enumerate() {
            slot[c] = k;
        }
        Self {
            cols,
            pivots,
            rows,
            slot,
        }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rows(&self) -> &[SparseRow] {
        &self.rows
    }

    pub fn is_pivot(&self, c: usize) -> bool {
        self.slot[c] != NO_PIVOT
    }

    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.cols).filter(|&c| !self.is_pivot(c)).collect()
    }

    pub fn to_matrix(&self) -> ExactMatrix {
        ExactMatrix::from_rows(self.cols, self.rows.clone())
    }

    /// Normal form of `v` modulo the row space; supported on free columns.
    pub fn reduce(&self, v: &[(usize, Scalar)]) -> SparseRow {
        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (c, x) in v {
            let k = self.slot[*c];
            if k == NO_PIVOT {
                *acc.entry(*c).or_insert_with(Scalar::zero) += x;
            } else {
                for (c2, y) in &self.rows[k][1..] {
                    *acc.entry(*c2).or_insert_with(Scalar::zero) -= x * y;
                }
            }
        }
        acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
    }

    pub fn contains(&self, v: &[(usize, Scalar)]) -> bool {
        self.reduce(v).is_empty()
    }

    /// Coefficients of `v` on the stored rows, if `v` lies in the span.
    pub fn coordinates(&self, v: &[(usize, Scalar)]) -> Option<Vec<Scalar>> {
        if !self.contains(v) {
            return None;
        }
        let mut out = vec![Scalar::zero(); self.rank()];
        for (c, x) in v {
            let k = self.slot[*c];
            if k != NO_PIVOT {
                out[k] = x.clone();
            }
        }
        Some(out)
    }

    /// Rows span the orthogonal complement, i.e. the right kernel of any
    /// matrix with this row space.
    pub fn kernel_basis(&self) -> ExactMatrix {
        let free = self.free_columns();
        let mut index = vec![NO_PIVOT; self.cols];
        for (i, &c) in free.iter().enumerate() {
            index[c] = i;
        }
        let mut ker: Vec<SparseRow> = free.iter().map(|&c| vec![(c, Scalar::one())]).collect();
        for (k, row) in self.rows.iter().enumerate() {
            for (c, y) in &row[1..] {
                ker[index[*c]].push((self.pivots[k], -y.clone()));
            }
        }
        ExactMatrix::from_rows(self.cols, ker)
    }

    /// Whether the two row spaces coincide.
    pub fn same_space(&self, other: &Echelon) -> bool {
        self.cols == other.cols && self.pivots == other.pivots && self.rows == other.rows
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::{int, ratio};

    fn fraction_free() -> EliminationOptions {
        EliminationOptions {
            modular_prepass: false,
        }
    }

    #[test]
    fn rref_of_small_matrix() {
        let m = ExactMatrix::from_i64(&[vec![2, 4, 6], vec![1, 3, 5]]);
        let e = m.row_echelon();
        assert_eq!(e.pivots(), &[0, 1]);
        assert_eq!(e.rows()[0], vec![(0, int(1)), (2, int(-1))]);
        assert_eq!(e.rows()[1], vec![(1, int(1)), (2, int(2))]);
    }

    #[test]
    fn rank_strategies_agree() {
        let m = ExactMatrix::from_i64(&[
            vec![1, 2, 3, 4, 5],
            vec![2, 4, 6, 8, 10],
            vec![0, 1, 0, 1, 0],
            vec![1, 3, 3, 5, 5],
        ]);
        assert_eq!(rank(&m, fraction_free()), 2);
        assert_eq!(rank(&m, EliminationOptions::default()), 2);
    }

    #[test]
    fn reduce_and_coordinates() {
        let m = ExactMatrix::from_i64(&[vec![1, 1, 0], vec![0, 1, 1]]);
        let e = m.row_echelon();
        let v = vec![(0, int(2)), (1, int(5)), (2, int(3))];
        // stored rows are the RREF rows (1,0,-1), (0,1,1)
        let coords = e.coordinates(&v).unwrap();
        assert_eq!(coords, vec![int(2), int(5)]);
        let w = vec![(2, int(1))];
        assert_eq!(e.reduce(&w), vec![(2, int(1))]);
        assert!(e.coordinates(&w).is_none());
    }

    #[test]
    fn rational_entries() {
        let m = ExactMatrix::from_dense(
            2,
            &[vec![ratio(1, 2), ratio(1, 3)], vec![ratio(3, 2), int(1)]],
        );
        assert_eq!(rank(&m, fraction_free()), 1);
        let k = m.kernel_basis();
        assert_eq!(k.rows(), 1);
        assert!(m.mul(&k.transpose()).is_zero());
    }

    #[test]
    fn dense_path_matches_sparse() {
        // rows with > 50% fill force the dense working buffer
        let rows: Vec<Vec<i64>> = (0..6)
            .map(|i| (0..6).map(|j| ((i * 7 + j * 3) % 5) as i64 - 2).collect())
            .collect();
        let m = ExactMatrix::from_i64(&rows);
        let r = rank(&m, fraction_free());
        let mut t = m.transpose();
        t.push_row(vec![]);
        assert_eq!(rank(&t, fraction_free()), r);
        let k = m.kernel_basis();
        assert_eq!(k.rows() + r, 6);
        assert!(m.mul(&k.transpose()).is_zero());
    }
}
