//! Rational scalars and their "p/q" text form.

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Ground field element. `BigRational` keeps the denominator positive and
/// the fraction reduced after every operation.
pub type Scalar = BigRational;

pub fn int(v: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(v))
}

pub fn ratio(p: i64, q: i64) -> Scalar {
    Scalar::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `"p/q"`, `"p"` or `"-p/q"`. A zero denominator is rejected.
pub fn parse_scalar(s: &str) -> Result<Scalar> {
    let t = s.trim();
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    match t.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Scalar::new(p, q))
        }
        None => Ok(Scalar::from_integer(
            BigInt::from_str(t).map_err(|_| bad())?,
        )),
    }
}

/// Always emits the two-part form, e.g. `"3/2"`, `"-1/1"`.
pub fn format_scalar(x: &Scalar) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(it: impl IntoIterator<Item = &'a Scalar>) -> BigInt {
    it.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Clears denominators and divides out the content, returning integer
/// entries with gcd 1 and a positive first entry.
pub fn primitive_integers(values: &[Scalar]) -> Vec<BigInt> {
    let den = common_denominator(values);
    let mut ints: Vec<BigInt> = values
        .iter()
        .map(|x| x.numer() * (&den / x.denom()))
        .collect();
    make_primitive(&mut ints);
    ints
}

pub(crate) fn make_primitive(ints: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for v in ints.iter() {
        if !v.is_zero() {
            g = g.gcd(v);
            if g.is_one() {
                break;
            }
        }
    }
    if g.is_zero() {
        return;
    }
    let negate = ints
        .iter()
        .find(|v| !v.is_zero())
        .is_some_and(|v| v.is_negative());
    if g.is_one() && !negate {
        return;
    }
    if negate {
        g = -g;
    }
    for v in ints.iter_mut() {
        *v = &*v / &g;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_scalar("3/2").unwrap(), ratio(3, 2));
        assert_eq!(parse_scalar(" -4/6 ").unwrap(), ratio(-2, 3));
        assert_eq!(parse_scalar("7").unwrap(), int(7));
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("x").is_err());
    }

    #[test]
    fn format_is_lowest_terms() {
        assert_eq!(format_scalar(&ratio(4, -6)), "-2/3");
        assert_eq!(format_scalar(&int(5)), "5/1");
        assert_eq!(format_scalar(&int(0)), "0/1");
    }

    #[test]
    fn primitive_clears_and_normalizes() {
        let v = vec![ratio(-1, 2), ratio(3, 4), int(0)];
        let p = primitive_integers(&v);
        assert_eq!(p, vec![BigInt::from(2), BigInt::from(-3), BigInt::from(0)]);
    }
}
