//! ADE classification of isolated simple singularities.
//!
//! The type is read off from the corank of the Hessian of the local jet and
//! the Milnor number. In corank 2 the cubic part of the equation restricted
//! to the Hessian kernel is a binary cubic whose root multiplicities, found
//! with a gcd against its derivative, separate `D_4`, `D_k` and `E_k`.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::jet::{taylor_jet, AffinePoint, LocalPoly};
use super::tjurina::{milnor_number, tjurina_number, LocalAlgebra};
use crate::algebra::scalar::{int, ratio};
use crate::algebra::{ExactMatrix, HomogeneousPoly, Monomial, Scalar};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AdeType {
    A(u32),
    D(u32),
    E6,
    E7,
    E8,
}

impl AdeType {
    /// The index `k`, which is also the Milnor and Tjurina number.
    pub fn index(&self) -> u32 {
        match *self {
            AdeType::A(k) | AdeType::D(k) => k,
            AdeType::E6 => 6,
            AdeType::E7 => 7,
            AdeType::E8 => 8,
        }
    }

    /// Quasi-homogeneous weights of the normal form in `nlocal` variables,
    /// the trailing ones being the weights 1/2 of the square terms.
    pub fn weights(&self, nlocal: usize) -> Vec<Scalar> {
        let head: Vec<Scalar> = match *self {
            AdeType::A(k) => vec![ratio(1, k as i64 + 1)],
            AdeType::D(k) => {
                let k = k as i64;
                vec![ratio(k - 2, 2 * (k - 1)), ratio(1, k - 1)]
            }
            AdeType::E6 => vec![ratio(1, 3), ratio(1, 4)],
            AdeType::E7 => vec![ratio(1, 3), ratio(2, 9)],
            AdeType::E8 => vec![ratio(1, 3), ratio(1, 5)],
        };
        assert!(
            nlocal >= head.len(),
            "{self} needs at least {} variables",
            head.len()
        );
        let mut w = head;
        w.resize(nlocal, ratio(1, 2));
        w
    }

    /// Sum of the weights.
    pub fn alpha_tilde(&self, nlocal: usize) -> Scalar {
        self.weights(nlocal).into_iter().sum()
    }
}

impl fmt::Display for AdeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdeType::A(k) => write!(f, "A_{k}"),
            AdeType::D(k) => write!(f, "D_{k}"),
            AdeType::E6 => write!(f, "E_6"),
            AdeType::E7 => write!(f, "E_7"),
            AdeType::E8 => write!(f, "E_8"),
        }
    }
}

/// Analysis of one declared singular point.
#[derive(Clone, Debug)]
pub struct SingularityRecord {
    pub point: AffinePoint,
    pub ade_type: AdeType,
    pub tjurina: usize,
    pub milnor: usize,
    pub hessian_corank: usize,
    pub weights: Vec<Scalar>,
    pub alpha_tilde: Scalar,
    /// Stabilized Tjurina algebra, used by the evaluation maps.
    pub algebra: LocalAlgebra,
}

/// Classifies the singularity of `f` at `p`.
pub fn classify_ade(f: &HomogeneousPoly, p: &AffinePoint, n_max: u32) -> Result<SingularityRecord> {
    let tj = tjurina_number(f, p, n_max)?;
    let mi = milnor_number(f, p, n_max)?;
    if tj.value != mi.value {
        return Err(Error::NotQuasiHomogeneous {
            point: p.to_string(),
            milnor: mi.value,
            tjurina: tj.value,
        });
    }
    let mu = tj.value as u32;
    let nlocal = p.nvars() - 1;
    let jet = taylor_jet(f, p, 3);
    let hessian = hessian_of(&jet);
    let corank = nlocal - hessian.rank();
    let ade_type = match corank {
        0 if mu == 1 => AdeType::A(1),
        1 if mu >= 2 => AdeType::A(mu),
        2 => {
            let kernel = hessian.kernel_basis();
            let cubic = restrict_cubic(&jet.homogeneous_part(3), &kernel);
            match distinct_roots_binary(&cubic) {
                None => return Err(not_simple(p, "zero cubic term on the Hessian kernel")),
                Some(3) if mu == 4 => AdeType::D(4),
                Some(2) if mu >= 5 => AdeType::D(mu),
                Some(1) => match mu {
                    6 => AdeType::E6,
                    7 => AdeType::E7,
                    8 => AdeType::E8,
                    _ => {
                        return Err(not_simple(
                            p,
                            &format!("triple-root cubic with Milnor number {mu}"),
                        ))
                    }
                },
                Some(r) => {
                    return Err(not_simple(
                        p,
                        &format!("corank 2 with {r} distinct cubic roots and Milnor number {mu}"),
                    ))
                }
            }
        }
        c if c >= 3 => return Err(not_simple(p, &format!("Hessian corank {c}"))),
        c => {
            return Err(not_simple(
                p,
                &format!("Hessian corank {c} inconsistent with Milnor number {mu}"),
            ))
        }
    };
    let weights = ade_type.weights(nlocal);
    let alpha_tilde = weights.iter().sum();
    Ok(SingularityRecord {
        point: p.clone(),
        ade_type,
        tjurina: tj.value,
        milnor: mi.value,
        hessian_corank: corank,
        weights,
        alpha_tilde,
        algebra: tj.algebra,
    })
}

fn not_simple(p: &AffinePoint, why: &str) -> Error {
    Error::NotSimple(format!("{why} at {p}"))
}

/// Symmetric matrix of second derivatives at the origin.
fn hessian_of(jet: &LocalPoly) -> ExactMatrix {
    let k = jet.nvars();
    let mut h = vec![vec![Scalar::zero(); k]; k];
    for (m, c) in jet.terms() {
        if m.degree() != 2 {
            continue;
        }
        let idx: Vec<usize> = (0..k).filter(|&i| m.exps()[i] > 0).collect();
        match idx.as_slice() {
            [i] => h[*i][*i] = c * int(2),
            [i, j] => {
                h[*i][*j] = c.clone();
                h[*j][*i] = c.clone();
            }
            _ => unreachable!(),
        }
    }
    ExactMatrix::from_dense(k, &h)
}

/// Substitutes `t = a u + b v` (rows of `kernel`) into the cubic form and
/// returns the coefficients of `a^3, a^2 b, a b^2, b^3`.
fn restrict_cubic(cubic: &LocalPoly, kernel: &ExactMatrix) -> [Scalar; 4] {
    let k = cubic.nvars();
    let u: Vec<Scalar> = (0..k).map(|i| kernel.get(0, i)).collect();
    let v: Vec<Scalar> = (0..k).map(|i| kernel.get(1, i)).collect();
    let mut out: [Scalar; 4] = Default::default();
    for (m, c) in cubic.terms() {
        // product of linear forms u_i a + v_i b, as coefficients of a^(deg-j) b^j
        let mut prod: Vec<Scalar> = vec![c.clone()];
        for (i, &e) in m.exps().iter().enumerate() {
            for _ in 0..e {
                let mut next = vec![Scalar::zero(); prod.len() + 1];
                for (j, x) in prod.iter().enumerate() {
                    next[j] += x * &u[i];
                    next[j + 1] += x * &v[i];
                }
                prod = next;
            }
        }
        for (j, x) in prod.into_iter().enumerate() {
            out[j] += x;
        }
    }
    out
}

/// Number of distinct roots in `P^1` of a binary cubic, `None` if it is
/// identically zero.
pub fn distinct_roots_binary(c: &[Scalar; 4]) -> Option<usize> {
    // p(s) = C(s, 1); coefficient of s^j is c[3 - j]
    let p: Vec<Scalar> = (0..4).map(|j| c[3 - j].clone()).collect();
    let p = trim(p);
    if p.is_empty() {
        return None;
    }
    let deg = p.len() - 1;
    let at_infinity = usize::from(deg < 3);
    let finite = if deg == 0 {
        0
    } else {
        let g = poly_gcd(p.clone(), derivative(&p));
        deg - (g.len() - 1)
    };
    Some(finite + at_infinity)
}

fn trim(mut p: Vec<Scalar>) -> Vec<Scalar> {
    while p.last().is_some_and(|x| x.is_zero()) {
        p.pop();
    }
    p
}

fn derivative(p: &[Scalar]) -> Vec<Scalar> {
    trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(j, x)| x * int(j as i64))
            .collect(),
    )
}

/// Remainder of `a` divided by `b` (coefficients lowest first).
fn poly_rem(mut a: Vec<Scalar>, b: &[Scalar]) -> Vec<Scalar> {
    let lb = b.last().unwrap();
    while a.len() >= b.len() && !a.is_empty() {
        let shift = a.len() - b.len();
        let q = a.last().unwrap() / lb;
        for (j, x) in b.iter().enumerate() {
            a[shift + j] -= &q * x;
        }
        a = trim(a);
    }
    a
}

fn poly_gcd(mut a: Vec<Scalar>, mut b: Vec<Scalar>) -> Vec<Scalar> {
    while !b.is_empty() {
        let r = poly_rem(a, &b);
        a = b;
        b = r;
    }
    let lead = a.last().cloned().unwrap_or_else(Scalar::one);
    a.into_iter().map(|x| x / &lead).collect()
}

/// Local normal form of each type in `nlocal >= 2` variables, padded with
/// squares of the remaining variables.
pub fn normal_form(t: AdeType, nlocal: usize) -> LocalPoly {
    let mut terms: Vec<(Vec<u32>, i64)> = match t {
        AdeType::A(k) => vec![(vec![k + 1, 0], 1), (vec![0, 2], 1)],
        AdeType::D(k) => vec![(vec![2, 1], 1), (vec![0, k - 1], 1)],
        AdeType::E6 => vec![(vec![3, 0], 1), (vec![0, 4], 1)],
        AdeType::E7 => vec![(vec![3, 0], 1), (vec![1, 3], 1)],
        AdeType::E8 => vec![(vec![3, 0], 1), (vec![0, 5], 1)],
    };
    for e in terms.iter_mut() {
        e.0.resize(nlocal, 0);
    }
    for i in 2..nlocal {
        let mut e = vec![0; nlocal];
        e[i] = 2;
        terms.push((e, 1));
    }
    LocalPoly::from_terms(
        nlocal,
        terms.into_iter().map(|(e, c)| (Monomial::new(e), int(c))),
    )
}

/// The projective closure of a local polynomial in `nlocal` variables with
/// the chart variable appended last, in degree `d`.
pub fn homogenize(g: &LocalPoly, d: u32) -> HomogeneousPoly {
    let k = g.nvars();
    HomogeneousPoly::from_terms(
        k + 1,
        d,
        g.terms().map(|(m, c)| {
            let mut e = m.exps().to_vec();
            e.push(d - m.degree());
            (Monomial::new(e), c.clone())
        }),
    )
    .expect("degree too small for homogenization")
}

/// The ADE battery `A_1..A_5, D_4, D_5, E_6, E_7, E_8`.
pub fn battery() -> Vec<AdeType> {
    vec![
        AdeType::A(1),
        AdeType::A(2),
        AdeType::A(3),
        AdeType::A(4),
        AdeType::A(5),
        AdeType::D(4),
        AdeType::D(5),
        AdeType::E6,
        AdeType::E7,
        AdeType::E8,
    ]
}
