//! Replica scheduling and order-stable aggregation.
//!
//! Replicas are embarrassingly parallel: each one derives every random
//! stream from (master seed, replica index), so results do not depend on
//! which worker ran them. Aggregation collects in replica order, making
//! every emitted number a pure function of (config, seed) regardless of the
//! worker count.

use phi4_core::error::{Error, Result};

/// Sample statistics used by every study.
pub mod stats {
    /// Linear-interpolation quantile of a sample; `p` in [0, 1].
    pub fn quantile(sorted: &[f64], p: f64) -> f64 {
        assert!(!sorted.is_empty() && (0.0..=1.0).contains(&p));
        let h = (sorted.len() - 1) as f64 * p;
        let lo = h.floor() as usize;
        let hi = h.ceil() as usize;
        sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
    }

    /// Median and quartiles `(q1, median, q3)` of an unsorted sample.
    pub fn quartiles(values: &[f64]) -> (f64, f64, f64) {
        let mut v = values.to_vec();
        v.sort_by(|a, b| a.partial_cmp(b).expect("finite statistics"));
        (
            quantile(&v, 0.25),
            quantile(&v, 0.5),
            quantile(&v, 0.75),
        )
    }

    /// Sample mean and its standard error (ddof 1).
    pub fn mean_stderr(values: &[f64]) -> (f64, f64) {
        let n = values.len();
        assert!(n >= 1);
        let mean = values.iter().sum::<f64>() / n as f64;
        if n == 1 {
            return (mean, f64::INFINITY);
        }
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        (mean, (var / n as f64).sqrt())
    }
}

/// Worker count: explicit flag, then the environment override, then the
/// machine's available parallelism.
pub fn resolve_workers(flag: Option<usize>) -> usize {
    if let Some(w) = flag {
        return w.max(1);
    }
    if let Ok(s) = std::env::var("PHI4_WORKERS") {
        if let Ok(w) = s.parse::<usize>() {
            return w.max(1);
        }
    }
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

/// Run `samples` independent replicas on a pool of `workers` threads and
/// collect their results in replica order.
pub fn run_replicas<T, F>(workers: usize, samples: usize, job: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync,
{
    if samples == 0 {
        return Err(Error::InvalidParameter("need at least one replica".into()));
    }
    if workers <= 1 {
        return (0..samples as u64).map(job).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("worker pool: {e}")))?;
    pool.install(|| {
        use rayon::prelude::*;
        (0..samples as u64).into_par_iter().map(&job).collect()
    })
}
