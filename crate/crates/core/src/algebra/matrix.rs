use std::collections::BTreeMap;

use num_traits::Zero;

use super::echelon::{self, Echelon, EliminationOptions};
use super::scalar::{int, Scalar};

/// Sparse vector as `(index, value)` pairs, sorted by index, no zeros.
pub type SparseRow = Vec<(usize, Scalar)>;

/// A sparse rational matrix stored row-wise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<SparseRow>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let data = (0..n).map(|i| vec![(i, int(1))]).collect();
        Self {
            rows: n,
            cols: n,
            data,
        }
    }

    /// Builds a matrix from sparse rows. Entries are sorted, duplicates are
    /// summed and zeros dropped. Panics on an out-of-range column.
    pub fn from_rows(cols: usize, rows: Vec<SparseRow>) -> Self {
        let data: Vec<SparseRow> = rows.into_iter().map(|r| normalize_row(cols, r)).collect();
        Self {
            rows: data.len(),
            cols,
            data,
        }
    }

    pub fn from_dense(cols: usize, rows: &[Vec<Scalar>]) -> Self {
        let data = rows
            .iter()
            .map(|r| {
                assert_eq!(r.len(), cols, "ragged dense matrix");
                r.iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(j, v)| (j, v.clone()))
                    .collect()
            })
            .collect::<Vec<SparseRow>>();
        Self {
            rows: data.len(),
            cols,
            data,
        }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let dense: Vec<Vec<Scalar>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| int(v)).collect())
            .collect();
        Self::from_dense(cols, &dense)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &SparseRow {
        &self.data[i]
    }

    pub fn row_slices(&self) -> &[SparseRow] {
        &self.data
    }

    pub fn into_rows(self) -> Vec<SparseRow> {
        self.data
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.is_empty())
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        match self.data[i].binary_search_by_key(&j, |e| e.0) {
            Ok(k) => self.data[i][k].1.clone(),
            Err(_) => Scalar::zero(),
        }
    }

    pub fn push_row(&mut self, row: SparseRow) {
        let r = normalize_row(self.cols, row);
        self.data.push(r);
        self.rows += 1;
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut t: Vec<SparseRow> = vec![Vec::new(); self.cols];
        for (i, row) in self.data.iter().enumerate() {
            for (j, v) in row {
                t[*j].push((i, v.clone()));
            }
        }
        ExactMatrix {
            rows: self.cols,
            cols: self.rows,
            data: t,
        }
    }

    /// Stacks matrices with equal column counts.
    pub fn vstack(parts: &[&ExactMatrix]) -> ExactMatrix {
        let cols = parts.first().map_or(0, |m| m.cols);
        let mut data = Vec::new();
        for p in parts {
            assert_eq!(p.cols, cols, "vstack column mismatch");
            data.extend(p.data.iter().cloned());
        }
        ExactMatrix {
            rows: data.len(),
            cols,
            data,
        }
    }

    /// `self * x` for a sparse column vector `x`.
    pub fn apply(&self, x: &[(usize, Scalar)]) -> SparseRow {
        let mut out = Vec::new();
        for (i, row) in self.data.iter().enumerate() {
            let v = sparse_dot(row, x);
            if !v.is_zero() {
                out.push((i, v));
            }
        }
        out
    }

    pub fn mul(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
                for (k, a) in row {
                    for (j, b) in &other.data[*k] {
                        *acc.entry(*j).or_insert_with(Scalar::zero) += a * b;
                    }
                }
                acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
            })
            .collect();
        ExactMatrix {
            rows: self.rows,
            cols: other.cols,
            data,
        }
    }

    pub fn rank(&self) -> usize {
        echelon::rank(self, EliminationOptions::default())
    }

    pub fn rank_with(&self, opts: EliminationOptions) -> usize {
        echelon::rank(self, opts)
    }

    /// Reduced row echelon form of the row space.
    pub fn row_echelon(&self) -> Echelon {
        Echelon::of(self)
    }

    /// Rows span `{x : self * x = 0}`.
    pub fn kernel_basis(&self) -> ExactMatrix {
        self.row_echelon().kernel_basis()
    }

    /// Rows span the column space of `self`, in reduced echelon form.
    pub fn image_basis(&self) -> ExactMatrix {
        self.transpose().row_echelon().to_matrix()
    }
}

pub fn sparse_dot(a: &[(usize, Scalar)], b: &[(usize, Scalar)]) -> Scalar {
    let (mut i, mut j) = (0, 0);
    let mut acc = Scalar::zero();
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                acc += &a[i].1 * &b[j].1;
                i += 1;
                j += 1;
            }
        }
    }
    acc
}

fn normalize_row(cols: usize, mut r: SparseRow) -> SparseRow {
    r.sort_by_key(|e| e.0);
    let mut out: SparseRow = Vec::with_capacity(r.len());
    for (j, v) in r {
        assert!(j < cols, "column {j} out of range for {cols} columns");
        match out.last_mut() {
            Some(last) if last.0 == j => last.1 += v,
            _ => out.push((j, v)),
        }
    }
    out.retain(|e| !e.1.is_zero());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_zero() {
        let id = ExactMatrix::identity(5);
        assert_eq!(id.rank(), 5);
        assert_eq!(id.kernel_basis().rows(), 0);
        let z = ExactMatrix::zeros(3, 7);
        assert_eq!(z.rank(), 0);
        assert_eq!(z.kernel_basis().rows(), 7);
    }

    #[test]
    fn vandermonde_full_rank() {
        let v = ExactMatrix::from_i64(&[vec![1, 0, 0], vec![1, 1, 1], vec![1, 2, 4]]);
        assert_eq!(v.rank(), 3);
    }

    #[test]
    fn kernel_annihilates() {
        let m = ExactMatrix::from_i64(&[vec![1, 2, 3, 4], vec![2, 4, 6, 8], vec![0, 1, -1, 2]]);
        let k = m.kernel_basis();
        assert_eq!(k.rows(), 2);
        assert!(m.mul(&k.transpose()).is_zero());
    }

    #[test]
    fn image_of_projection() {
        let m = ExactMatrix::from_i64(&[vec![1, 1], vec![1, 1], vec![0, 0]]);
        let im = m.image_basis();
        assert_eq!(im.rows(), 1);
        assert_eq!(im.cols(), 3);
        assert_eq!(im.get(0, 0), int(1));
        assert_eq!(im.get(0, 1), int(1));
    }

    #[test]
    fn from_rows_merges_duplicates() {
        let m = ExactMatrix::from_rows(3, vec![vec![(2, int(1)), (0, int(2)), (2, int(-1))]]);
        assert_eq!(m.row(0), &vec![(0, int(2))]);
    }
}
