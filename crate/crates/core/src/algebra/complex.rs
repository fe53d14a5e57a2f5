//! Ranks of the maps in a cochain complex.
//!
//! Maps use the row convention: row `i` of `D_k` is the image of the `i`-th
//! basis vector, so `D_k * D_{k+1} = 0`. Over the rationals this gives
//! `rank D_k + rank D_{k+1} <= dim` of the shared space, while every
//! modular rank is a lower bound for the rational one. Whenever the modular
//! ranks at a position add up to its dimension, both rational ranks are
//! therefore known exactly and no rational elimination is needed. Any
//! externally known upper bound on a rank is used the same way.

use super::echelon::{self, EliminationOptions};
use super::matrix::ExactMatrix;
use super::modular;
use crate::par;

/// Which ranks were settled without rational elimination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexRanks {
    pub ranks: Vec<usize>,
    pub certified: Vec<bool>,
}

pub fn complex_ranks(maps: &[&ExactMatrix], opts: EliminationOptions) -> ComplexRanks {
    complex_ranks_bounded(maps, &vec![None; maps.len()], opts)
}

/// As [`complex_ranks`], with `bounds[i]` a proven upper bound on the
/// rational rank of `maps[i]`.
pub fn complex_ranks_bounded(
    maps: &[&ExactMatrix],
    bounds: &[Option<usize>],
    opts: EliminationOptions,
) -> ComplexRanks {
    let ranks = ranks_where(maps, bounds, &vec![true; maps.len()], opts);
    ComplexRanks {
        certified: ranks.iter().map(|r| r.1).collect(),
        ranks: ranks.into_iter().map(|r| r.0.unwrap()).collect(),
    }
}

/// Rank of `maps[index]` alone; the other maps only help certify it and
/// are never eliminated exactly.
pub fn rank_in_complex(
    maps: &[&ExactMatrix],
    bounds: &[Option<usize>],
    index: usize,
    opts: EliminationOptions,
) -> usize {
    let wanted: Vec<bool> = (0..maps.len()).map(|i| i == index).collect();
    ranks_where(maps, bounds, &wanted, opts)[index].0.unwrap()
}

/// `(rank, certified)` per map; ranks that are neither certified nor
/// `wanted` stay unknown.
fn ranks_where(
    maps: &[&ExactMatrix],
    bounds: &[Option<usize>],
    wanted: &[bool],
    opts: EliminationOptions,
) -> Vec<(Option<usize>, bool)> {
    assert_eq!(maps.len(), bounds.len());
    for w in maps.windows(2) {
        assert_eq!(w[0].cols(), w[1].rows(), "maps do not compose");
    }
    let k = maps.len();
    let mut ranks: Vec<Option<usize>> = vec![None; k];
    // rows with distinct end columns are independent, which settles many
    // maps before any elimination
    let mut modular: Vec<Option<usize>> = maps.iter().map(|m| Some(staircase_bound(m))).collect();
    certify(maps, bounds, &[], &modular, &mut ranks);
    if opts.modular_prepass {
        let mut composes: Option<Vec<bool>> = None;
        for &p in modular::prepass_primes() {
            let mut seen = vec![false; k];
            // the wanted maps first, since a bound or full rank may settle
            // them without touching their neighbours
            for alone in [true, false] {
                if (0..k).all(|i| !wanted[i] || ranks[i].is_some()) {
                    break;
                }
                let todo: Vec<usize> = (0..k)
                    .filter(|&i| ranks[i].is_none() && !seen[i] && (wanted[i] || !alone))
                    .collect();
                let fresh = par::map(todo.clone(), |i| {
                    modular::rank_mod_p(maps[i], p).map(|r| r.rank)
                });
                for (i, r) in todo.into_iter().zip(fresh) {
                    modular[i] = modular[i].max(r);
                    seen[i] = true;
                }
                let exact_composites: &[bool] = if alone {
                    &[]
                } else {
                    // a complex only if the composites vanish exactly
                    composes.get_or_insert_with(|| {
                        par::map((0..k.saturating_sub(1)).collect(), |i| {
                            maps[i].mul(maps[i + 1]).is_zero()
                        })
                    })
                };
                certify(maps, bounds, exact_composites, &modular, &mut ranks);
            }
        }
    }
    let certified: Vec<bool> = ranks.iter().map(Option::is_some).collect();
    let todo: Vec<usize> = (0..k)
        .filter(|&i| ranks[i].is_none() && wanted[i])
        .collect();
    let exact = par::map(todo.clone(), |i| echelon::rank(maps[i], opts));
    for (i, r) in todo.into_iter().zip(exact) {
        ranks[i] = Some(r);
    }
    ranks.into_iter().zip(certified).collect()
}

/// Lower bound on the rank: the larger of the numbers of distinct leading
/// and distinct trailing columns among the rows.
pub fn staircase_bound(m: &ExactMatrix) -> usize {
    let mut first = vec![false; m.cols()];
    let mut last = vec![false; m.cols()];
    for row in m.row_slices() {
        if let (Some(a), Some(b)) = (row.first(), row.last()) {
            first[a.0] = true;
            last[b.0] = true;
        }
    }
    let count = |v: &[bool]| v.iter().filter(|&&x| x).count();
    count(&first).max(count(&last))
}

/// Rank of a single matrix given an optional proven upper bound.
pub fn bounded_rank(m: &ExactMatrix, bound: Option<usize>, opts: EliminationOptions) -> usize {
    complex_ranks_bounded(&[m], &[bound], opts).ranks[0]
}

/// Fills in every rank the modular lower bounds pin down.
fn certify(
    maps: &[&ExactMatrix],
    bounds: &[Option<usize>],
    composes: &[bool],
    modular: &[Option<usize>],
    ranks: &mut [Option<usize>],
) {
    for i in 0..maps.len() {
        if let Some(r) = modular[i] {
            if r == maps[i].rows().min(maps[i].cols()) || Some(r) == bounds[i] {
                ranks[i] = Some(r);
            }
        }
    }
    for i in 0..composes.len() {
        if let (true, Some(a), Some(b)) = (composes[i], modular[i], modular[i + 1]) {
            if a + b == maps[i].cols() {
                ranks[i] = Some(a);
                ranks[i + 1] = Some(b);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fraction_free() -> EliminationOptions {
        EliminationOptions {
            modular_prepass: false,
        }
    }

    #[test]
    fn exact_sequence_is_certified() {
        // Q^2 -> Q^3 -> Q^3, exact in the middle; neither map has full rank
        // and the distinct end columns fall short of both ranks
        let d0 = ExactMatrix::from_i64(&[vec![1, 1, 0], vec![2, 2, 0]]);
        let d1 = ExactMatrix::from_i64(&[vec![1, 0, 1], vec![-1, 0, -1], vec![0, 1, 1]]);
        assert_eq!((staircase_bound(&d0), staircase_bound(&d1)), (1, 2));
        let r = complex_ranks(&[&d0, &d1], EliminationOptions::default());
        assert_eq!(r.ranks, vec![1, 2]);
        assert_eq!(r.certified, vec![true, true]);
        let plain = complex_ranks(&[&d0, &d1], fraction_free());
        assert_eq!(plain.ranks, vec![1, 2]);
        assert_eq!(plain.certified, vec![false, false]);
    }

    #[test]
    fn non_complex_is_not_trusted() {
        let d0 = ExactMatrix::from_i64(&[vec![1, 0], vec![0, 0]]);
        let d1 = ExactMatrix::from_i64(&[vec![1, 0], vec![0, 0]]);
        let r = complex_ranks(&[&d0, &d1], EliminationOptions::default());
        assert_eq!(r.ranks, vec![1, 1]);
        assert_eq!(r.certified, vec![false, false]);
        assert_eq!(
            rank_in_complex(&[&d0, &d1], &[None, None], 1, EliminationOptions::default()),
            1
        );
    }

    #[test]
    fn staircase_counts_distinct_ends() {
        let m = ExactMatrix::from_i64(&[vec![1, 1, 0, 0], vec![1, 0, 1, 0], vec![0, 0, 1, 1]]);
        // leading columns {0, 2}, trailing columns {1, 2, 3}
        assert_eq!(staircase_bound(&m), 3);
        assert_eq!(m.rank(), 3);
    }

    #[test]
    fn upper_bound_certifies() {
        let m = ExactMatrix::from_i64(&[vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]]);
        let r = complex_ranks_bounded(&[&m], &[Some(2)], EliminationOptions::default());
        assert_eq!(r.ranks, vec![2]);
        assert!(r.certified[0]);
        assert_eq!(bounded_rank(&m, None, EliminationOptions::default()), 2);
    }

    #[test]
    fn homology_leaves_ranks_to_elimination() {
        // d0 = 0 and d1 = 0 on Q: homology everywhere
        let d0 = ExactMatrix::zeros(1, 2);
        let d1 = ExactMatrix::from_i64(&[vec![1, 2], vec![2, 4]]);
        let r = complex_ranks(&[&d0, &d1], EliminationOptions::default());
        assert_eq!(r.ranks, vec![0, 1]);
        assert!(!r.certified[1]);
    }
}
