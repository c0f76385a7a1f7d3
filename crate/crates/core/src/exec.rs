//! Trial execution: rayon when the `parallel` feature is on, a plain loop otherwise.

/// How independent Monte-Carlo trials are scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// Whether trials really run on the thread pool in this build.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Runs `trial(i)` for `i in 0..trials` and returns the results in index order.
///
/// Each trial must derive its own randomness from `i`, so the output does not
/// depend on the schedule.
pub fn map_trials<T, F>(trials: u64, exec: Execution, trial: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if exec == Execution::Parallel {
            use rayon::prelude::*;
            return (0..trials).into_par_iter().map(trial).collect();
        }
    }
    let _ = exec;
    (0..trials).map(trial).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedule_does_not_change_output() {
        let f = |i: u64| i.wrapping_mul(0x9e37_79b9_7f4a_7c15) >> 7;
        assert_eq!(map_trials(1000, Execution::Sequential, f), map_trials(1000, Execution::Parallel, f));
    }
}
