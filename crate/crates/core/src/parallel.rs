//! Replication-parallel map. Results are always returned in index order, so
//! downstream aggregation does not depend on the scheduler.

use crate::error::Result;

#[cfg(feature = "parallel")]
pub(crate) fn map_indexed<T, F>(count: usize, workers: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;

    if workers <= 1 {
        return Ok((0..count).map(f).collect());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| crate::error::Error::Harness(format!("thread pool: {e}")))?;
    Ok(pool.install(|| (0..count).into_par_iter().map(f).collect()))
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_indexed<T, F>(count: usize, _workers: usize, f: F) -> Result<Vec<T>>
where
    F: Fn(usize) -> T,
{
    Ok((0..count).map(f).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let seq = map_indexed(100, 1, |i| i * i).unwrap();
        let par = map_indexed(100, 4, |i| i * i).unwrap();
        assert_eq!(seq, par);
        assert_eq!(seq[7], 49);
    }
}
