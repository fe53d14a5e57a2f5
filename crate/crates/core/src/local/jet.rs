//! Points in affine charts and truncated Taylor expansions.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::algebra::matrix::SparseRow;
use crate::algebra::monomial::{binomial, Monomial, MonomialBasis};
use crate::algebra::scalar::{format_scalar, int, Scalar};
use crate::algebra::HomogeneousPoly;
use crate::error::{Error, Result};

/// A point of projective space written in the chart `x_chart = 1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AffinePoint {
    chart: usize,
    coords: Vec<Scalar>,
}

impl AffinePoint {
    /// Dehomogenizes at the coordinate of largest absolute value (first one
    /// on ties).
    pub fn from_projective(p: &[Scalar]) -> Result<Self> {
        let mut chart = None;
        for (i, x) in p.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            match chart {
                None => chart = Some(i),
                Some(c) if x.abs() > p[c].abs() => chart = Some(i),
                _ => {}
            }
        }
        let chart = chart
            .ok_or_else(|| Error::Parse("projective point with all coordinates zero".into()))?;
        Self::with_chart(p, chart)
    }

    pub fn with_chart(p: &[Scalar], chart: usize) -> Result<Self> {
        if chart >= p.len() || p[chart].is_zero() {
            return Err(Error::InvalidChart { chart });
        }
        let c = &p[chart];
        let coords = p
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != chart)
            .map(|(_, x)| x / c)
            .collect();
        Ok(Self { chart, coords })
    }

    pub fn chart(&self) -> usize {
        self.chart
    }

    /// Affine coordinates, one per variable other than the chart variable.
    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    /// Number of homogeneous coordinates.
    pub fn nvars(&self) -> usize {
        self.coords.len() + 1
    }

    /// Index of ambient variable `i` among the local coordinates.
    pub fn local_index(&self, i: usize) -> Option<usize> {
        match i.cmp(&self.chart) {
            std::cmp::Ordering::Less => Some(i),
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Greater => Some(i - 1),
        }
    }

    /// Homogeneous coordinates normalized by `x_chart = 1`.
    pub fn projective(&self) -> Vec<Scalar> {
        let mut out = self.coords.clone();
        out.insert(self.chart, Scalar::one());
        out
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.projective().iter().map(format_scalar).collect()
    }
}

impl fmt::Display for AffinePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.projective().iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(":"))
    }
}

/// A polynomial in local coordinates, not necessarily homogeneous.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LocalPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, Scalar>,
}

impl LocalPoly {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars);
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m).or_insert_with(Scalar::zero);
        *e += c;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Lowest total degree of a term; `None` for zero.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).min()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// Part of total degree exactly `k`.
    pub fn homogeneous_part(&self, k: u32) -> LocalPoly {
        Self::from_terms(
            self.nvars,
            self.terms
                .iter()
                .filter(|(m, _)| m.degree() == k)
                .map(|(m, c)| (m.clone(), c.clone())),
        )
    }

    pub fn truncate(&self, order: u32) -> LocalPoly {
        Self {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= order)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn partial(&self, i: usize) -> LocalPoly {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exps()[i];
            if e == 0 {
                continue;
            }
            let mut ex = m.exps().to_vec();
            ex[i] -= 1;
            out.add_term(Monomial::new(ex), c * int(e as i64));
        }
        out
    }

    /// `u * self`, dropping terms above `order`.
    pub fn mul_monomial_truncated(&self, u: &Monomial, order: u32) -> LocalPoly {
        let du = u.degree();
        Self {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() + du <= order)
                .map(|(m, c)| (m.mul(u), c.clone()))
                .collect(),
        }
    }

    pub fn mul_truncated(&self, other: &LocalPoly, order: u32) -> LocalPoly {
        let mut out = Self::zero(self.nvars);
        for (a, ca) in &self.terms {
            let da = a.degree();
            for (b, cb) in &other.terms {
                if da + b.degree() <= order {
                    out.add_term(a.mul(b), ca * cb);
                }
            }
        }
        out
    }

    /// Multiplies by `sum_k coeffs[k] * t_j^k`, dropping terms above `order`.
    fn mul_univariate(&self, j: usize, coeffs: &[Scalar], order: u32) -> LocalPoly {
        let mut out: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (m, c) in &self.terms {
            let dm = m.degree();
            for (k, a) in coeffs.iter().enumerate() {
                if dm + k as u32 > order {
                    break;
                }
                if a.is_zero() {
                    continue;
                }
                let mut ex = m.exps().to_vec();
                ex[j] += k as u32;
                *out.entry(Monomial::new(ex)).or_insert_with(Scalar::zero) += c * a;
            }
        }
        out.retain(|_, v| !v.is_zero());
        Self {
            nvars: self.nvars,
            terms: out,
        }
    }

    pub fn eval_at_origin(&self) -> Scalar {
        self.coeff(&Monomial::one(self.nvars))
    }

    pub fn coordinates(&self, basis: &MonomialBasis) -> SparseRow {
        let mut row: SparseRow = self
            .terms
            .iter()
            .map(|(m, c)| {
                (
                    basis.index_of(m).expect("term outside the jet basis"),
                    c.clone(),
                )
            })
            .collect();
        row.sort_by_key(|e| e.0);
        row
    }
}

/// Taylor expansion of the dehomogenization of `f` at `p`, in local
/// coordinates centered at `p`, truncated to total degree `order`.
pub fn taylor_jet(f: &HomogeneousPoly, p: &AffinePoint, order: u32) -> LocalPoly {
    assert_eq!(
        f.nvars(),
        p.nvars(),
        "point and polynomial live in different spaces"
    );
    let mut expander = JetExpander::new(p, order);
    let mut out = LocalPoly::zero(p.nvars() - 1);
    for (m, c) in f.terms() {
        let piece = expander.expand_monomial(m);
        for (mm, cc) in piece.terms {
            out.add_term(mm, cc * c);
        }
    }
    out
}

/// Expands ambient monomials at a fixed point, caching binomial powers.
pub struct JetExpander<'a> {
    point: &'a AffinePoint,
    order: u32,
    powers: BTreeMap<(usize, u32), Vec<Scalar>>,
}

impl<'a> JetExpander<'a> {
    pub fn new(point: &'a AffinePoint, order: u32) -> Self {
        Self {
            point,
            order,
            powers: BTreeMap::new(),
        }
    }

    /// Coefficients of `(a + t)^e` up to `t^order`.
    fn binomial_powers(&mut self, j: usize, e: u32) -> &[Scalar] {
        let order = self.order;
        let a = &self.point.coords[j];
        self.powers.entry((j, e)).or_insert_with(|| {
            (0..=e.min(order))
                .map(|k| {
                    if a.is_zero() {
                        if k == e {
                            Scalar::one()
                        } else {
                            Scalar::zero()
                        }
                    } else {
                        int(binomial(e as u64, k as u64) as i64)
                            * num_traits::pow(a.clone(), (e - k) as usize)
                    }
                })
                .collect()
        })
    }

    pub fn expand_monomial(&mut self, m: &Monomial) -> LocalPoly {
        let k = self.point.nvars() - 1;
        let mut acc = LocalPoly::constant(k, Scalar::one());
        for (i, &e) in m.exps().iter().enumerate() {
            let Some(j) = self.point.local_index(i) else {
                continue;
            };
            if e == 0 {
                continue;
            }
            let order = self.order;
            let coeffs = self.binomial_powers(j, e).to_vec();
            acc = acc.mul_univariate(j, &coeffs, order);
            if acc.is_zero() {
                break;
            }
        }
        acc
    }
}

/// `f(P) = 0` and every partial derivative vanishes at `P`.
pub fn verify_singular(f: &HomogeneousPoly, point: &[Scalar]) -> bool {
    if point.len() != f.nvars() || point.iter().all(|x| x.is_zero()) {
        return false;
    }
    if !f.eval(point).is_zero() {
        return false;
    }
    if f.degree() == 0 {
        return true;
    }
    (0..f.nvars()).all(|i| f.partial(i).eval(point).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::ratio;

    fn mono(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    fn hpoly(nv: usize, d: u32, t: &[(&[u32], i64)]) -> HomogeneousPoly {
        HomogeneousPoly::from_terms(nv, d, t.iter().map(|(e, c)| (mono(e), int(*c)))).unwrap()
    }

    fn pt(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn chart_choice_is_largest_coordinate() {
        let p = AffinePoint::from_projective(&[int(1), int(-3), int(2)]).unwrap();
        assert_eq!(p.chart(), 1);
        assert_eq!(p.coords(), &[ratio(-1, 3), ratio(-2, 3)]);
        let q = AffinePoint::from_projective(&pt(&[2, 2, 0])).unwrap();
        assert_eq!(q.chart(), 0);
        assert!(AffinePoint::from_projective(&pt(&[0, 0])).is_err());
    }

    #[test]
    fn zero_chart_coordinate_rejected() {
        let err = AffinePoint::with_chart(&pt(&[1, 0, 0]), 2).unwrap_err();
        assert_eq!(err, Error::InvalidChart { chart: 2 });
    }

    #[test]
    fn jet_of_nodal_quintic() {
        // w^3 (x^2 + y^2 + z^2) + x^5 + y^5 + z^5 at [0:0:0:1]
        let f = hpoly(
            4,
            5,
            &[
                (&[2, 0, 0, 3], 1),
                (&[0, 2, 0, 3], 1),
                (&[0, 0, 2, 3], 1),
                (&[5, 0, 0, 0], 1),
                (&[0, 5, 0, 0], 1),
                (&[0, 0, 5, 0], 1),
            ],
        );
        let p = AffinePoint::from_projective(&pt(&[0, 0, 0, 1])).unwrap();
        let j = taylor_jet(&f, &p, 2);
        let expected = LocalPoly::from_terms(
            3,
            vec![
                (mono(&[2, 0, 0]), int(1)),
                (mono(&[0, 2, 0]), int(1)),
                (mono(&[0, 0, 2]), int(1)),
            ],
        );
        assert_eq!(j, expected);
    }

    #[test]
    fn constant_term_is_value_at_point() {
        let f = hpoly(3, 2, &[(&[2, 0, 0], 1), (&[0, 1, 1], -1), (&[0, 0, 2], 3)]);
        for p in [pt(&[1, 1, 0]), pt(&[2, 3, 5]), pt(&[0, 1, 1])] {
            let a = AffinePoint::from_projective(&p).unwrap();
            let j = taylor_jet(&f, &a, 2);
            let value = f.eval(&a.projective());
            assert_eq!(j.eval_at_origin(), value);
            assert_eq!(j.eval_at_origin().is_zero(), f.eval(&p).is_zero());
        }
    }

    #[test]
    fn full_jet_reproduces_shifted_polynomial() {
        // x^2 y at [1:2:1] in chart z: (1+s)^2 (2+t) with local coords s, t
        let f = hpoly(3, 3, &[(&[2, 1, 0], 1)]);
        let a = AffinePoint::with_chart(&pt(&[1, 2, 1]), 2).unwrap();
        let j = taylor_jet(&f, &a, 3);
        let expected = LocalPoly::from_terms(
            2,
            vec![
                (mono(&[0, 0]), int(2)),
                (mono(&[1, 0]), int(4)),
                (mono(&[0, 1]), int(1)),
                (mono(&[2, 0]), int(2)),
                (mono(&[1, 1]), int(2)),
                (mono(&[2, 1]), int(1)),
            ],
        );
        assert_eq!(j, expected);
    }

    #[test]
    fn singular_points() {
        let fermat = hpoly(
            4,
            4,
            &[
                (&[4, 0, 0, 0], 1),
                (&[0, 4, 0, 0], 1),
                (&[0, 0, 4, 0], 1),
                (&[0, 0, 0, 4], 1),
            ],
        );
        for i in 0..4 {
            let mut p = pt(&[0, 0, 0, 0]);
            p[i] = int(1);
            assert!(!verify_singular(&fermat, &p));
        }
        let nodal = hpoly(
            4,
            5,
            &[
                (&[2, 0, 0, 3], 1),
                (&[0, 2, 0, 3], 1),
                (&[0, 0, 2, 3], 1),
                (&[5, 0, 0, 0], 1),
                (&[0, 5, 0, 0], 1),
                (&[0, 0, 5, 0], 1),
            ],
        );
        assert!(verify_singular(&nodal, &pt(&[0, 0, 0, 1])));
        assert!(!verify_singular(&nodal, &pt(&[1, 0, 0, 0])));
        assert!(!verify_singular(&nodal, &pt(&[1, 1, 1, 1])));
    }
}
