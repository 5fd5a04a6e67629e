//! Term generation, per-step trace checking, strategy comparison and
//! benchmarking, plus the command-line front end.

mod bench;
mod check;
pub mod cli;
mod gen;
mod strategy;
mod workloads;

pub use bench::{run_bench, run_comparison, write_csv, write_json, BenchConfig, BenchError, BenchRecord, Status, CSV_HEADER};
pub use check::{check_trace, CheckReport};
pub use gen::{gen_corpus, gen_terms, GeneratedTerm};
pub use strategy::{digest, run_native, run_strategy, NativeResult, RunOutcome, Strategy};
pub use workloads::{church, Workload};

/// Stack size for threads that evaluate deep terms.
pub const BIG_STACK: usize = 1 << 30;

/// Runs `f` on a fresh thread with a [`BIG_STACK`] stack. A panic in `f`
/// comes back as `Err` with its message.
pub fn with_big_stack<R: Send + 'static>(f: impl FnOnce() -> R + Send + 'static) -> Result<R, String> {
    let handle = std::thread::Builder::new()
        .stack_size(BIG_STACK)
        .spawn(f)
        .map_err(|e| format!("cannot spawn evaluation thread: {e}"))?;
    handle.join().map_err(|payload| {
        payload
            .downcast_ref::<&str>()
            .map(|s| s.to_string())
            .or_else(|| payload.downcast_ref::<String>().cloned())
            .unwrap_or_else(|| "evaluation panicked".to_string())
    })
}
