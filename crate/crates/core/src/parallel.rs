//! Ordered parallel maps. Results come back in index order, so downstream
//! reductions see the same sequence regardless of thread count.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// `f(0), …, f(n−1)` evaluated in parallel, collected in order.
pub fn map_indices<T, F>(n: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

/// Runs `f` inside a dedicated pool of `threads` workers (`0` = one per
/// core).
pub fn with_threads<R, F>(threads: usize, f: F) -> Result<R>
where
    R: Send,
    F: FnOnce() -> R + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Validation(format!("cannot build thread pool: {e}")))?;
    Ok(pool.install(f))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved_for_any_pool() {
        let serial: Vec<usize> = (0..1000).map(|i| i * i).collect();
        for t in [1, 2, 4] {
            let v = with_threads(t, || map_indices(1000, |i| Ok(i * i))).unwrap().unwrap();
            assert_eq!(v, serial);
        }
    }

    #[test]
    fn first_error_propagates() {
        let r: Result<Vec<usize>> = map_indices(10, |i| if i == 7 { Err(Error::Numerical("x".into())) } else { Ok(i) });
        assert!(r.is_err());
    }
}
