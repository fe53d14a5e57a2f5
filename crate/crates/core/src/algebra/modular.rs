//! Rank of a rational matrix reduced modulo a word-size prime.
//!
//! The modular rank never exceeds the rational rank, so a modular result
//! equal to `min(rows, cols)` settles the exact rank outright; otherwise the
//! pivot rows it finds are handed to the exact elimination as a row order.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::matrix::ExactMatrix;
use super::scalar::Scalar;
use crate::par;

/// Dense work arrays larger than this many entries skip the pre-pass.
const MAX_DENSE_ENTRIES: usize = 60_000_000;

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &SMALL {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    let mulm = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powm = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        b %= n;
        while e > 0 {
            if e & 1 == 1 {
                r = mulm(r, b);
            }
            b = mulm(b, b);
            e >>= 1;
        }
        r
    };
    'witness: for &a in &SMALL {
        let mut x = powm(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulm(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A uniformly drawn prime in `[2^61, 2^62)`.
pub fn random_prime<R: Rng + ?Sized>(rng: &mut R) -> u64 {
    loop {
        let c = rng.gen_range((1u64 << 61)..(1u64 << 62)) | 1;
        if is_prime(c) {
            return c;
        }
    }
}

/// Two fixed 62-bit primes drawn from a seeded generator, so runs are
/// reproducible.
pub fn prepass_primes() -> &'static [u64; 2] {
    static PRIMES: OnceLock<[u64; 2]> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(0x6a61_6372_696e_6721);
        [random_prime(&mut rng), random_prime(&mut rng)]
    })
}

/// Montgomery arithmetic modulo an odd prime below `2^63`.
#[derive(Clone, Copy, Debug)]
pub struct MontField {
    p: u64,
    p_inv_neg: u64,
    r2: u64,
}

impl MontField {
    pub fn new(p: u64) -> Self {
        assert!(p % 2 == 1 && p < (1 << 63));
        let mut inv: u64 = 1;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % p as u128) as u64;
        let r2 = ((r as u128 * r as u128) % p as u128) as u64;
        Self {
            p,
            p_inv_neg: inv.wrapping_neg(),
            r2,
        }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    #[inline]
    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.p_inv_neg);
        let u = ((t + m as u128 * self.p as u128) >> 64) as u64;
        if u >= self.p {
            u - self.p
        } else {
            u
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub fn to_mont(&self, a: u64) -> u64 {
        self.mul(a % self.p, self.r2)
    }

    pub fn from_mont(&self, a: u64) -> u64 {
        self.redc(a as u128)
    }

    pub fn inv(&self, a: u64) -> u64 {
        // a^(p-2) computed in Montgomery form
        let mut base = a;
        let mut e = self.p - 2;
        let mut r = self.to_mont(1);
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        r
    }
}

/// `x mod p`, or `None` when `p` divides the denominator.
pub fn reduce_scalar(x: &Scalar, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let num = x.numer().mod_floor(&pb).to_u64().unwrap();
    let den = x.denom().mod_floor(&pb).to_u64().unwrap();
    if den == 0 {
        return None;
    }
    let f = MontField::new(p);
    let v = f.mul(f.to_mont(num), f.inv(f.to_mont(den)));
    Some(f.from_mont(v))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModularRank {
    pub prime: u64,
    pub rank: usize,
    /// Original indices of the rows that became pivots.
    pub pivot_rows: Vec<usize>,
}

/// Rank of `m` over `F_p`. Returns `None` if some denominator vanishes
/// modulo `p` or the matrix is too large for the dense pre-pass.
pub fn rank_mod_p(m: &ExactMatrix, p: u64) -> Option<ModularRank> {
    let (rows, cols) = (m.rows(), m.cols());
    if rows.saturating_mul(cols) > MAX_DENSE_ENTRIES {
        return None;
    }
    let f = MontField::new(p);
    let pb = BigInt::from(p);
    let mut dense: Vec<(usize, Vec<u64>)> = Vec::with_capacity(rows);
    for (i, row) in m.row_slices().iter().enumerate() {
        let mut d = vec![0u64; cols];
        for (j, v) in row {
            let num = v.numer().mod_floor(&pb).to_u64().unwrap();
            let den = v.denom().mod_floor(&pb).to_u64().unwrap();
            if den == 0 {
                return None;
            }
            d[*j] = f.mul(f.to_mont(num), f.inv(f.to_mont(den)));
        }
        dense.push((i, d));
    }

    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pos) = (rank..rows).find(|&r| dense[r].1[col] != 0) else {
            continue;
        };
        dense.swap(rank, pos);
        let (head, tail) = dense.split_at_mut(rank + 1);
        let pivot = &mut head[rank].1;
        let inv = f.inv(pivot[col]);
        for v in pivot[col..].iter_mut() {
            if *v != 0 {
                *v = f.mul(*v, inv);
            }
        }
        let pivot = &head[rank].1;
        let eliminate = |row: &mut (usize, Vec<u64>)| {
            let factor = row.1[col];
            if factor == 0 {
                return;
            }
            for (x, &pj) in row.1[col..cols].iter_mut().zip(&pivot[col..cols]) {
                if pj != 0 {
                    *x = f.sub(*x, f.mul(factor, pj));
                }
            }
        };
        if tail.len() * (cols - col) > 1 << 16 {
            par::for_each_mut(tail, eliminate);
        } else {
            tail.iter_mut().for_each(eliminate);
        }
        rank += 1;
    }
    let pivot_rows = dense[..rank].iter().map(|(i, _)| *i).collect();
    Some(ModularRank {
        prime: p,
        rank,
        pivot_rows,
    })
}

/// Rank modulo the first pre-pass prime, falling back to the second (and
/// keeping the larger result) when the first falls short of full rank.
pub fn prepass(m: &ExactMatrix) -> Option<ModularRank> {
    prepass_until(m, m.rows().min(m.cols()))
}

/// Like [`prepass`], stopping as soon as a prime reaches `target`.
pub fn prepass_until(m: &ExactMatrix, target: usize) -> Option<ModularRank> {
    let mut best: Option<ModularRank> = None;
    for &p in prepass_primes() {
        if let Some(r) = rank_mod_p(m, p) {
            let done = r.rank >= target;
            if best.as_ref().is_none_or(|b| r.rank > b.rank) {
                best = Some(r);
            }
            if done {
                break;
            }
        }
    }
    best
}
