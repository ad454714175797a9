use rayon::prelude::*;

/// Maps `f` over `0..chunks` with `workers` threads and returns results in
/// chunk order, so the worker count never affects the output.
pub(crate) fn map_chunks<T, F>(chunks: u64, workers: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    if workers <= 1 || chunks <= 1 {
        return (0..chunks).map(f).collect();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(|| (0..chunks).into_par_iter().map(&f).collect()),
        Err(_) => (0..chunks).map(f).collect(),
    }
}
