//! Thin switch between rayon and sequential iteration.
//!
//! With the `parallel` feature disabled every helper degrades to a plain
//! iterator, so callers never need their own `cfg` blocks.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `items`, preserving order.
pub fn map<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.into_iter().map(f).collect()
    }
}

/// Runs both closures, concurrently when the feature is on.
pub fn join<A, B, RA, RB>(a: A, b: B) -> (RA, RB)
where
    A: FnOnce() -> RA + Send,
    B: FnOnce() -> RB + Send,
    RA: Send,
    RB: Send,
{
    #[cfg(feature = "parallel")]
    {
        rayon::join(a, b)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (a(), b())
    }
}

/// Applies `f` to every element of `rows` in place.
pub fn for_each_mut<T, F>(rows: &mut [T], f: F)
where
    T: Send,
    F: Fn(&mut T) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        rows.par_iter_mut().for_each(f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        rows.iter_mut().for_each(f)
    }
}

pub fn enabled() -> bool {
    cfg!(feature = "parallel")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_preserves_order() {
        let out = map((0..1000).collect(), |v: u64| v * v);
        let expected: Vec<u64> = (0..1000).map(|v| v * v).collect();
        assert_eq!(out, expected);
    }

    #[test]
    fn for_each_mut_touches_all() {
        let mut v = vec![1u32; 257];
        for_each_mut(&mut v, |x| *x += 1);
        assert!(v.iter().all(|&x| x == 2));
    }
}
