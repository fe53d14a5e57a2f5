//! Reduced echelon forms by Chinese remaindering.
//!
//! The RREF is computed modulo a growing set of word-size primes, its
//! entries lifted by CRT and recovered by rational reconstruction. A
//! candidate `R` with rank `r` is accepted only after an exact check that
//! every input row is the combination of the rows of `R` given by its
//! pivot entries. That puts the input row space inside the span of `R`,
//! while the modular rank `r` is a lower bound for the rank of the input,
//! so the two spaces agree and `R` is their RREF.

use std::sync::OnceLock;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::matrix::SparseRow;
use super::modular::{random_prime, MontField};
use super::scalar::{common_denominator, Scalar};
use crate::par;

/// Give up on reconstruction beyond this many primes.
pub const MAX_PRIMES: usize = 48;

/// Dense work arrays larger than this many entries are not attempted.
const MAX_DENSE_ENTRIES: usize = 20_000_000;

/// Deterministic sequence of 62-bit primes, distinct from the rank
/// pre-pass primes.
pub fn crt_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(0x6d75_6c74_696d_6f64);
        let mut out: Vec<u64> = Vec::with_capacity(MAX_PRIMES);
        while out.len() < MAX_PRIMES {
            let p = random_prime(&mut rng);
            if !out.contains(&p) {
                out.push(p);
            }
        }
        out
    })
}

/// RREF over `F_p`, entries in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModularEchelon {
    pub prime: u64,
    pub pivots: Vec<usize>,
    /// Row `k` restricted to the non-pivot columns, in increasing order.
    pub free_entries: Vec<Vec<u64>>,
}

/// Reduced row echelon form of the row space of `rows` modulo `p`, or
/// `None` when `p` divides a denominator.
pub fn rref_mod_p(cols: usize, rows: &[SparseRow], p: u64) -> Option<ModularEchelon> {
    let f = MontField::new(p);
    let pb = BigInt::from(p);
    let mut dense: Vec<Vec<u64>> = Vec::with_capacity(rows.len());
    for row in rows {
        if row.is_empty() {
            continue;
        }
        let mut d = vec![0u64; cols];
        for (j, v) in row {
            let num = v.numer().mod_floor(&pb).to_u64().unwrap();
            let den = v.denom().mod_floor(&pb).to_u64().unwrap();
            if den == 0 {
                return None;
            }
            d[*j] = f.mul(f.to_mont(num), f.inv(f.to_mont(den)));
        }
        dense.push(d);
    }
    let n = dense.len();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        if rank == n {
            break;
        }
        let Some(pos) = (rank..n).find(|&r| dense[r][col] != 0) else {
            continue;
        };
        dense.swap(rank, pos);
        let (head, tail) = dense.split_at_mut(rank + 1);
        let pivot = &mut head[rank];
        let inv = f.inv(pivot[col]);
        for v in pivot[col..].iter_mut() {
            if *v != 0 {
                *v = f.mul(*v, inv);
            }
        }
        let pivot = &head[rank];
        let eliminate = |row: &mut Vec<u64>| {
            let factor = row[col];
            if factor == 0 {
                return;
            }
            for j in col..cols {
                let pj = pivot[j];
                if pj != 0 {
                    row[j] = f.sub(row[j], f.mul(factor, pj));
                }
            }
        };
        if tail.len() * (cols - col) > 1 << 16 {
            par::for_each_mut(tail, eliminate);
        } else {
            tail.iter_mut().for_each(eliminate);
        }
        pivots.push(col);
        rank += 1;
    }
    dense.truncate(rank);
    // back substitution
    for k in (0..rank).rev() {
        let pc = pivots[k];
        let (upper, lower) = dense.split_at_mut(k);
        let pivot = &lower[0];
        let clear = |row: &mut Vec<u64>| {
            let factor = row[pc];
            if factor == 0 {
                return;
            }
            for j in pc..cols {
                let pj = pivot[j];
                if pj != 0 {
                    row[j] = f.sub(row[j], f.mul(factor, pj));
                }
            }
        };
        if upper.len() * (cols - pc) > 1 << 16 {
            par::for_each_mut(upper, clear);
        } else {
            upper.iter_mut().for_each(clear);
        }
    }
    let free = free_columns(cols, &pivots);
    let free_entries = dense
        .iter()
        .map(|row| free.iter().map(|&c| f.from_mont(row[c])).collect())
        .collect();
    Some(ModularEchelon {
        prime: p,
        pivots,
        free_entries,
    })
}

fn free_columns(cols: usize, pivots: &[usize]) -> Vec<usize> {
    let mut is_pivot = vec![false; cols];
    for &c in pivots {
        is_pivot[c] = true;
    }
    (0..cols).filter(|&c| !is_pivot[c]).collect()
}

/// `n / d` with `|n|, d <= sqrt(m / 2)` and `n = a d (mod m)`, if any.
pub fn rational_reconstruction(a: &BigInt, m: &BigInt) -> Option<Scalar> {
    let a = a.mod_floor(m);
    if a.is_zero() {
        return Some(Scalar::zero());
    }
    let bound = (m >> 1u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), a);
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let (q, r) = r0.div_rem(&r1);
        r0 = std::mem::replace(&mut r1, r);
        let t = &t0 - &q * &t1;
        t0 = std::mem::replace(&mut t1, t);
    }
    if t1.is_zero() || t1.abs() > bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(Scalar::new(r1, t1))
}

/// Residues of the free entries modulo the product of the primes used.
struct Accumulator {
    pivots: Vec<usize>,
    modulus: BigInt,
    residues: Vec<Vec<BigInt>>,
}

impl Accumulator {
    fn new(e: &ModularEchelon) -> Self {
        Self {
            pivots: e.pivots.clone(),
            modulus: BigInt::from(e.prime),
            residues: e
                .free_entries
                .iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        }
    }

    fn absorb(&mut self, e: &ModularEchelon) {
        let p = e.prime;
        let f = MontField::new(p);
        let pb = BigInt::from(p);
        let m_mod_p = self.modulus.mod_floor(&pb).to_u64().unwrap();
        let m_inv = f.inv(f.to_mont(m_mod_p));
        let modulus = &self.modulus;
        let lift = |(acc, new): (&mut Vec<BigInt>, &Vec<u64>)| {
            for (x, &b) in acc.iter_mut().zip(new) {
                let xm = x.mod_floor(&pb).to_u64().unwrap();
                if xm == b {
                    continue;
                }
                let diff = f.sub(f.to_mont(b), f.to_mont(xm));
                let t = f.from_mont(f.mul(diff, m_inv));
                *x += modulus * BigInt::from(t);
            }
        };
        self.residues.iter_mut().zip(&e.free_entries).for_each(lift);
        self.modulus *= pb;
    }

    fn reconstruct(&self) -> Option<Vec<Vec<Scalar>>> {
        let rows: Vec<Option<Vec<Scalar>>> =
            par::map(self.residues.iter().collect(), |r: &Vec<BigInt>| {
                r.iter()
                    .map(|x| rational_reconstruction(x, &self.modulus))
                    .collect()
            });
        rows.into_iter().collect()
    }
}

/// Pivot lists compare by rank first, then by earliest pivots: a prime
/// can only lose rank or push pivots to later columns.
fn better(a: &[usize], b: &[usize]) -> bool {
    a.len() > b.len() || (a.len() == b.len() && a < b)
}

/// Checks `v = sum_k v[pivot_k] R_k` on the free columns for every input
/// row, in integer arithmetic.
fn spans_input(
    cols: usize,
    pivots: &[usize],
    free: &[usize],
    cand: &[Vec<Scalar>],
    rows: &[SparseRow],
) -> bool {
    // R_k = N_k / D with one common denominator per row
    let ints: Vec<(BigInt, Vec<BigInt>)> = cand
        .iter()
        .map(|r| {
            let den = common_denominator(r.iter());
            let num = r.iter().map(|x| x.numer() * (&den / x.denom())).collect();
            (den, num)
        })
        .collect();
    let mut slot = vec![usize::MAX; cols];
    for (k, &c) in pivots.iter().enumerate() {
        slot[c] = k;
    }
    let mut free_pos = vec![usize::MAX; cols];
    for (i, &c) in free.iter().enumerate() {
        free_pos[c] = i;
    }
    let ok = par::map(rows.iter().collect(), |row: &SparseRow| {
        if row.is_empty() {
            return true;
        }
        let den = common_denominator(row.iter().map(|e| &e.1));
        let v: Vec<(usize, BigInt)> = row
            .iter()
            .map(|(c, x)| (*c, x.numer() * (&den / x.denom())))
            .collect();
        // acc = L * (v - sum v[p_k] R_k) on free columns, L = lcm of the D_k used
        let used: Vec<(usize, &BigInt)> = v
            .iter()
            .filter(|(c, _)| slot[*c] != usize::MAX)
            .map(|(c, x)| (slot[*c], x))
            .collect();
        let l = used
            .iter()
            .fold(BigInt::one(), |acc, (k, _)| acc.lcm(&ints[*k].0));
        let mut acc = vec![BigInt::zero(); free.len()];
        for (c, x) in &v {
            let i = free_pos[*c];
            if i != usize::MAX {
                acc[i] += x * &l;
            }
        }
        for (k, x) in used {
            let (d, num) = &ints[k];
            let scale = x * (&l / d);
            for (a, n) in acc.iter_mut().zip(num) {
                if n.sign() != Sign::NoSign {
                    *a -= &scale * n;
                }
            }
        }
        acc.iter().all(Zero::is_zero)
    });
    ok.into_iter().all(|b| b)
}

/// The RREF of the row space of `rows` as `(pivots, rows)`, each row
/// carrying its leading 1. `None` when the primes run out or the work
/// arrays would be too large.
pub fn rref(cols: usize, rows: &[SparseRow]) -> Option<(Vec<usize>, Vec<SparseRow>)> {
    if rows.len().saturating_mul(cols) > MAX_DENSE_ENTRIES {
        return None;
    }
    let primes = crt_primes();
    let mut acc: Option<Accumulator> = None;
    let mut used = 0;
    let mut next_try = 1;
    let mut batch = 1;
    let mut i = 0;
    while i < primes.len() {
        let end = (i + batch).min(primes.len());
        let results = par::map(primes[i..end].to_vec(), |p| rref_mod_p(cols, rows, p));
        i = end;
        for e in results.into_iter().flatten() {
            match &mut acc {
                Some(a) if a.pivots == e.pivots => {
                    a.absorb(&e);
                    used += 1;
                }
                Some(a) if !better(&e.pivots, &a.pivots) => {}
                _ => {
                    acc = Some(Accumulator::new(&e));
                    used = 1;
                    next_try = 1;
                }
            }
        }
        let Some(a) = &acc else { continue };
        if used < next_try {
            continue;
        }
        next_try = used * 2;
        batch = used.max(1);
        let Some(cand) = a.reconstruct() else {
            continue;
        };
        let free = free_columns(cols, &a.pivots);
        if spans_input(cols, &a.pivots, &free, &cand, rows) {
            let out = a
                .pivots
                .iter()
                .zip(cand)
                .map(|(&pc, vals)| {
                    let mut r: SparseRow = vec![(pc, Scalar::one())];
                    r.extend(
                        free.iter()
                            .zip(vals)
                            .filter(|(_, v)| !v.is_zero())
                            .map(|(&c, v)| (c, v)),
                    );
                    r.sort_by_key(|e| e.0);
                    r
                })
                .collect();
            return Some((a.pivots.clone(), out));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::matrix::ExactMatrix;
    use crate::algebra::scalar::{int, ratio};

    #[test]
    fn reconstruction_recovers_small_fractions() {
        let m = BigInt::from(crt_primes()[0]);
        for (p, q) in [(3, 7), (-5, 11), (0, 1), (12345, 678)] {
            let x = ratio(p, q);
            let pb = &m;
            let inv = x.denom().modpow(&(pb - 2), pb);
            let a = (x.numer() * inv).mod_floor(pb);
            assert_eq!(rational_reconstruction(&a, pb), Some(x));
        }
    }

    #[test]
    fn primes_are_distinct_and_large() {
        let ps = crt_primes();
        assert_eq!(ps.len(), MAX_PRIMES);
        for (i, p) in ps.iter().enumerate() {
            assert!(*p > 1 << 61);
            assert!(!ps[..i].contains(p));
        }
    }

    #[test]
    fn rref_matches_hand_computation() {
        // rows (1, 2, 3), (2, 4, 7): RREF (1, 2, 0), (0, 0, 1)
        let m = ExactMatrix::from_i64(&[vec![1, 2, 3], vec![2, 4, 7], vec![3, 6, 10]]);
        let (pivots, rows) = rref(3, m.row_slices()).unwrap();
        assert_eq!(pivots, vec![0, 2]);
        assert_eq!(rows[0], vec![(0, int(1)), (1, int(2))]);
        assert_eq!(rows[1], vec![(2, int(1))]);
    }

    #[test]
    fn large_entries_need_several_primes() {
        // the RREF entry is a ratio of 40-digit integers
        let big = |s: &str| Scalar::from_integer(s.parse::<BigInt>().unwrap());
        let a = big("1234567890123456789012345678901234567891");
        let b = big("9876543210987654321098765432109876543211");
        let rows = vec![vec![(0, b.clone()), (1, a.clone())]];
        let (_, r) = rref(2, &rows).unwrap();
        assert_eq!(r[0], vec![(0, int(1)), (1, a / b)]);
    }
}
