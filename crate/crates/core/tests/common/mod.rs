//! Shared oracles and random instances for the integration tests.
#![allow(dead_code)]

pub mod props;

use std::path::PathBuf;

use num_traits::{One, Zero};
use proptest::prelude::*;

use jacring::algebra::monomial::monomial_basis;
use jacring::algebra::scalar::int;
use jacring::algebra::{ExactMatrix, HomogeneousPoly, Monomial, Scalar};
use jacring::cli::parse_instance;
use jacring::jacobian::{Analysis, AnalysisOptions, HypersurfaceInstance};

pub fn instance_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("instances")
        .join(format!("{name}.toml"))
}

pub fn load(name: &str) -> Analysis {
    let (h, _) = parse_instance(&instance_path(name)).expect("instance parses");
    Analysis::new(h, AnalysisOptions::default()).expect("instance analyses")
}

/// Coefficient of `t^m` in `((1 - t^e) / (1 - t))^v`, by repeated
/// truncated series multiplication.
pub fn hilbert_oracle(v: usize, e: usize, m: usize) -> usize {
    let factor: Vec<i64> = (0..=m).map(|k| if k < e { 1 } else { 0 }).collect();
    let mut series = vec![0i64; m + 1];
    series[0] = 1;
    for _ in 0..v {
        let mut next = vec![0i64; m + 1];
        for (i, a) in series.iter().enumerate() {
            for (j, b) in factor.iter().enumerate().take(m + 1 - i) {
                next[i + j] += a * b;
            }
        }
        series = next;
    }
    series[m] as usize
}

/// `x_0^d + ... + x_{v-1}^d`.
pub fn fermat(v: usize, d: u32) -> HomogeneousPoly {
    HomogeneousPoly::from_terms(
        v,
        d,
        (0..v).map(|i| {
            let mut e = vec![0u32; v];
            e[i] = d;
            (Monomial::new(e), int(1))
        }),
    )
    .unwrap()
}

pub fn poly(v: usize, d: u32, terms: &[(&[u32], i64)]) -> HomogeneousPoly {
    HomogeneousPoly::from_terms(
        v,
        d,
        terms
            .iter()
            .map(|(e, c)| (Monomial::new(e.to_vec()), int(*c))),
    )
    .unwrap()
}

pub fn point(c: &[i64]) -> Vec<Scalar> {
    c.iter().map(|&x| int(x)).collect()
}

/// A combination, with coefficients `coeffs`, of a basis of the forms of
/// degree `d` singular at every point of `points`.
pub fn singular_form(
    v: usize,
    d: u32,
    points: &[Vec<Scalar>],
    coeffs: &[i64],
) -> Option<HomogeneousPoly> {
    let monos = monomial_basis(v, d);
    let mut rows = Vec::new();
    for p in points {
        for i in 0..v {
            // d/dx_i of each monomial, evaluated at p
            let row: Vec<Scalar> = monos
                .iter()
                .map(|m| {
                    let e = m.exps();
                    if e[i] == 0 {
                        return Scalar::zero();
                    }
                    let mut val = int(e[i] as i64);
                    for (j, &k) in e.iter().enumerate() {
                        let k = if j == i { k - 1 } else { k };
                        for _ in 0..k {
                            val *= &p[j];
                        }
                    }
                    val
                })
                .collect();
            rows.push(row);
        }
    }
    let ker = ExactMatrix::from_dense(monos.len(), &rows).kernel_basis();
    let mut f = HomogeneousPoly::zero(v, d);
    for (k, row) in ker.row_slices().iter().enumerate() {
        let c = int(coeffs[k % coeffs.len()] + k as i64 % 3);
        for (j, x) in row {
            f = f.add(&HomogeneousPoly::monomial(monos[*j].clone(), x * &c));
        }
    }
    (!f.is_zero()).then_some(f)
}

/// `f(M x)` for a square matrix `M`.
pub fn substitute(f: &HomogeneousPoly, m: &[Vec<Scalar>]) -> HomogeneousPoly {
    let v = f.nvars();
    let linear: Vec<HomogeneousPoly> = m
        .iter()
        .map(|row| {
            HomogeneousPoly::from_terms(
                v,
                1,
                row.iter()
                    .enumerate()
                    .map(|(j, c)| (Monomial::var(v, j), c.clone())),
            )
            .unwrap()
        })
        .collect();
    let mut out = HomogeneousPoly::zero(v, f.degree());
    for (mono, c) in f.terms() {
        let mut term = HomogeneousPoly::monomial(Monomial::one(v), c.clone());
        for (i, &k) in mono.exps().iter().enumerate() {
            for _ in 0..k {
                term = term.multiply(&linear[i]);
            }
        }
        out = out.add(&term);
    }
    out
}

/// Gauss-Jordan inverse of a square rational matrix.
pub fn inverse(m: &[Vec<Scalar>]) -> Option<Vec<Vec<Scalar>>> {
    let n = m.len();
    let mut a: Vec<Vec<Scalar>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut r = r.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    Scalar::one()
                } else {
                    Scalar::zero()
                }
            }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let inv = Scalar::one() / &a[col][col];
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot = a[col].clone();
                for (x, p) in a[r].iter_mut().zip(pivot) {
                    *x -= &f * p;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// A one-node (or worse) form of degree `d` in four variables, singular at
/// `[a:b:c:1]`, with the node declared.
pub fn one_point_instance(d: u32, p: [i64; 3], coeffs: &[i64]) -> Option<Analysis> {
    let pt = point(&[p[0], p[1], p[2], 1]);
    let f = singular_form(4, d, std::slice::from_ref(&pt), coeffs)?;
    let h = HypersurfaceInstance::new(2, f, &[pt]).ok()?;
    Analysis::new(h, AnalysisOptions::default()).ok()
}

/// Small integer matrices, half of them forced to low rank as a product.
pub fn small_matrix() -> impl Strategy<Value = ExactMatrix> {
    let dense = (1usize..7, 1usize..7).prop_flat_map(|(r, c)| {
        proptest::collection::vec(proptest::collection::vec(-3i64..=3, c), r)
            .prop_map(|rows| ExactMatrix::from_i64(&rows))
    });
    let low_rank = (1usize..7, 1usize..4, 1usize..7).prop_flat_map(|(r, k, c)| {
        (
            proptest::collection::vec(proptest::collection::vec(-3i64..=3, k), r),
            proptest::collection::vec(proptest::collection::vec(-3i64..=3, c), k),
        )
            .prop_map(|(a, b)| ExactMatrix::from_i64(&a).mul(&ExactMatrix::from_i64(&b)))
    });
    prop_oneof![dense, low_rank]
}

pub fn node_position() -> impl Strategy<Value = [i64; 3]> {
    [-2i64..=2, -2i64..=2, -2i64..=2]
}

pub fn coefficients() -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::vec(-4i64..=4, 8)
}

/// Unit lower times unit upper triangular, so always invertible.
pub fn coordinate_change(v: usize) -> impl Strategy<Value = Vec<Vec<Scalar>>> {
    proptest::collection::vec(-2i64..=2, v * v).prop_map(move |e| {
        let l = |i: usize, j: usize| {
            if i == j {
                1
            } else if j < i {
                e[i * v + j]
            } else {
                0
            }
        };
        let u = |i: usize, j: usize| {
            if i == j {
                1
            } else if j > i {
                e[i * v + j]
            } else {
                0
            }
        };
        (0..v)
            .map(|i| {
                (0..v)
                    .map(|j| int((0..v).map(|k| l(i, k) * u(k, j)).sum()))
                    .collect()
            })
            .collect()
    })
}
