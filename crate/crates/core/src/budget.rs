//! Process-wide guard on the number of big-integer row/column operations.
//!
//! Set `PROLIM_OP_BUDGET` to a positive integer to abort runaway computations.
//! The guard panics with a descriptive message once the budget is spent; the
//! command-line front end turns that panic into an error exit.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::OnceLock;

pub const BUDGET_ENV: &str = "PROLIM_OP_BUDGET";

static SPENT: AtomicU64 = AtomicU64::new(0);
static LIMIT: OnceLock<Option<u64>> = OnceLock::new();

fn limit() -> Option<u64> {
    *LIMIT.get_or_init(|| {
        std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<u64>().ok())
            .filter(|&v| v > 0)
    })
}

/// Records `ops` elementary big-integer operations against the budget.
pub(crate) fn charge(ops: u64) {
    if let Some(max) = limit() {
        let spent = SPENT.fetch_add(ops, Ordering::Relaxed) + ops;
        if spent > max {
            panic!("big-integer operation budget exceeded ({spent} > {max}); raise {BUDGET_ENV} to continue");
        }
    }
}

/// Operations charged so far in this process.
pub fn spent() -> u64 {
    SPENT.load(Ordering::Relaxed)
}
