//! Fixture corpora and the suite runners behind `corpus run`.

mod groups;
mod rings;

pub use groups::*;
pub use rings::*;

/// Thread pool honoring `BECKDIFF_MAX_THREADS`.
pub fn thread_pool() -> rayon::ThreadPool {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = std::env::var("BECKDIFF_MAX_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        b = b.num_threads(n.max(1));
    }
    b.build().expect("thread pool")
}
