//! Process-wide size budget guarding runaway coefficient growth.
//!
//! The unit is "coefficient digits": roughly the number of decimal digits
//! (or residue words) an intermediate object may hold before an operation
//! gives up with `Error::BudgetExceeded`.

use crate::error::{Error, Result};
use std::sync::atomic::{AtomicUsize, Ordering};

pub const DEFAULT_BUDGET: usize = 10_000_000;

static BUDGET: AtomicUsize = AtomicUsize::new(DEFAULT_BUDGET);

pub fn size_budget() -> usize {
    BUDGET.load(Ordering::Relaxed)
}

pub fn set_size_budget(n: usize) {
    BUDGET.store(n.max(1), Ordering::Relaxed);
}

pub fn check(size: usize, what: &str) -> Result<()> {
    let b = size_budget();
    if size > b {
        Err(Error::BudgetExceeded(format!("{what} needs {size} > budget {b}")))
    } else {
        Ok(())
    }
}
