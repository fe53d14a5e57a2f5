use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::matrix::SparseRow;
use super::monomial::{Monomial, MonomialBasis};
use super::scalar::{int, Scalar};
use crate::error::{Error, Result};

/// A homogeneous form with rational coefficients. The zero form keeps the
/// degree it was built with so graded bookkeeping stays total.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HomogeneousPoly {
    nvars: usize,
    degree: u32,
    terms: BTreeMap<Monomial, Scalar>,
}

impl HomogeneousPoly {
    pub fn zero(nvars: usize, degree: u32) -> Self {
        Self {
            nvars,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(m: Monomial, c: Scalar) -> Self {
        let mut p = Self::zero(m.nvars(), m.degree());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// Builds a form from terms, summing repeats. Fails if the terms are not
    /// all of degree `degree` in `nvars` variables.
    pub fn from_terms(
        nvars: usize,
        degree: u32,
        terms: impl IntoIterator<Item = (Monomial, Scalar)>,
    ) -> Result<Self> {
        let mut p = Self::zero(nvars, degree);
        for (m, c) in terms {
            if m.nvars() != nvars {
                return Err(Error::Parse(format!(
                    "exponent vector {:?} has length {}, expected {nvars}",
                    m,
                    m.nvars()
                )));
            }
            if m.degree() != degree {
                return Err(Error::Parse(format!(
                    "term {:?} has degree {}, polynomial is not homogeneous of degree {degree}",
                    m,
                    m.degree()
                )));
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m);
        match slot {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    /// `∂p/∂x_i`; the result has degree `deg p - 1`.
    pub fn partial(&self, i: usize) -> HomogeneousPoly {
        assert!(self.degree >= 1, "partial derivative of a degree-0 form");
        let mut out = Self::zero(self.nvars, self.degree - 1);
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

    pub fn gradient(&self) -> Vec<HomogeneousPoly> {
        (0..self.nvars).map(|i| self.partial(i)).collect()
    }

    pub fn multiply(&self, other: &HomogeneousPoly) -> HomogeneousPoly {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let mut out = Self::zero(self.nvars, self.degree + other.degree);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term(a.mul(b), ca * cb);
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial) -> HomogeneousPoly {
        let mut out = Self::zero(self.nvars, self.degree + m.degree());
        for (a, c) in &self.terms {
            out.terms.insert(a.mul(m), c.clone());
        }
        out
    }

    pub fn add(&self, other: &HomogeneousPoly) -> HomogeneousPoly {
        assert_eq!(
            self.degree, other.degree,
            "adding forms of different degree"
        );
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> HomogeneousPoly {
        if c.is_zero() {
            return Self::zero(self.nvars, self.degree);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= c;
        }
        out
    }

    pub fn neg(&self) -> HomogeneousPoly {
        self.scale(&-Scalar::one())
    }

    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        assert_eq!(point.len(), self.nvars);
        let mut acc = Scalar::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exps()) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// Coordinates with respect to `basis`; the basis must have this degree.
    pub fn coordinates(&self, basis: &MonomialBasis) -> SparseRow {
        let mut row: SparseRow = self
            .terms
            .iter()
            .map(|(m, c)| {
                let i = basis
                    .index_of(m)
                    .expect("monomial outside of the coordinate basis");
                (i, c.clone())
            })
            .collect();
        row.sort_by_key(|e| e.0);
        row
    }

    pub fn from_coordinates(basis: &MonomialBasis, row: &[(usize, Scalar)]) -> HomogeneousPoly {
        let mut out = Self::zero(basis.nvars(), basis.degree().max(0) as u32);
        for (i, c) in row {
            out.add_term(basis.get(*i).clone(), c.clone());
        }
        out
    }

    pub fn display_with<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        DisplayPoly { p: self, names }
    }
}

struct DisplayPoly<'a> {
    p: &'a HomogeneousPoly,
    names: &'a [String],
}

impl fmt::Display for DisplayPoly<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.p.terms.iter().rev().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if c.is_one() {
                write!(f, "{}", m.display_with(self.names))?;
            } else {
                write!(f, "({c})*{}", m.display_with(self.names))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    fn poly(nv: usize, d: u32, t: &[(&[u32], i64)]) -> HomogeneousPoly {
        HomogeneousPoly::from_terms(nv, d, t.iter().map(|(e, c)| (mono(e), int(*c)))).unwrap()
    }

    #[test]
    fn partials_of_x4() {
        let p = poly(2, 4, &[(&[4, 0], 1)]);
        assert_eq!(p.partial(0), poly(2, 3, &[(&[3, 0], 4)]));
        let dy = p.partial(1);
        assert!(dy.is_zero());
        assert_eq!(dy.degree(), 3);
    }

    #[test]
    fn products() {
        let x = poly(2, 1, &[(&[1, 0], 1)]);
        assert_eq!(x.multiply(&x), poly(2, 2, &[(&[2, 0], 1)]));
        let zero = HomogeneousPoly::zero(2, 3);
        let pz = x.multiply(&zero);
        assert!(pz.is_zero());
        assert_eq!(pz.degree(), 4);
        let s = poly(2, 1, &[(&[1, 0], 1), (&[0, 1], 1)]);
        let d = poly(2, 1, &[(&[1, 0], 1), (&[0, 1], -1)]);
        assert_eq!(s.multiply(&d), poly(2, 2, &[(&[2, 0], 1), (&[0, 2], -1)]));
    }

    #[test]
    fn euler_identity() {
        let p = poly(3, 3, &[(&[3, 0, 0], 2), (&[1, 1, 1], -5), (&[0, 1, 2], 7)]);
        let mut acc = HomogeneousPoly::zero(3, 3);
        for i in 0..3 {
            acc = acc.add(&p.partial(i).mul_monomial(&Monomial::var(3, i)));
        }
        assert_eq!(acc, p.scale(&int(3)));
    }

    #[test]
    fn rejects_inhomogeneous() {
        let r = HomogeneousPoly::from_terms(
            2,
            2,
            vec![(mono(&[2, 0]), int(1)), (mono(&[1, 0]), int(1))],
        );
        assert!(r.is_err());
    }

    #[test]
    fn coordinate_round_trip() {
        let b = MonomialBasis::homogeneous(3, 2);
        let p = poly(3, 2, &[(&[2, 0, 0], 3), (&[0, 1, 1], -1)]);
        let row = p.coordinates(&b);
        assert_eq!(HomogeneousPoly::from_coordinates(&b, &row), p);
    }

    #[test]
    fn evaluation() {
        let p = poly(2, 2, &[(&[2, 0], 1), (&[0, 2], -1)]);
        assert_eq!(p.eval(&[int(3), int(2)]), int(5));
    }
}
