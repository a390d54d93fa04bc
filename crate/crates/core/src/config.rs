//! Process-wide limits: p-adic precision cap and group-order bound.
//!
//! Defaults can be replaced globally (the CLI reads `ROOTDATUM_PRECISION_DIGITS`
//! and `ROOTDATUM_ORDER_BOUND`) or overridden on the current thread with a guard.

use std::cell::Cell;
use std::sync::atomic::{AtomicU32, AtomicUsize, Ordering};

pub const DEFAULT_PRECISION_CAP: u32 = 1 << 12;
pub const DEFAULT_ORDER_BOUND: usize = 10_000_000;

pub const PRECISION_ENV: &str = "ROOTDATUM_PRECISION_DIGITS";
pub const ORDER_BOUND_ENV: &str = "ROOTDATUM_ORDER_BOUND";

static PRECISION_CAP: AtomicU32 = AtomicU32::new(DEFAULT_PRECISION_CAP);
static ORDER_BOUND: AtomicUsize = AtomicUsize::new(DEFAULT_ORDER_BOUND);

thread_local! {
    static PRECISION_OVERRIDE: Cell<Option<u32>> = const { Cell::new(None) };
}

/// Maximal number of p-adic digits expanded when deciding a valuation.
pub fn precision_cap() -> u32 {
    PRECISION_OVERRIDE.with(|c| c.get()).unwrap_or_else(|| PRECISION_CAP.load(Ordering::Relaxed))
}

pub fn set_precision_cap(digits: u32) {
    PRECISION_CAP.store(digits.max(1), Ordering::Relaxed);
}

pub fn order_bound() -> usize {
    ORDER_BOUND.load(Ordering::Relaxed)
}

pub fn set_order_bound(bound: usize) {
    ORDER_BOUND.store(bound.max(1), Ordering::Relaxed);
}

/// Applies the environment overrides, returning an error message for malformed values.
pub fn load_from_env() -> Result<(), String> {
    if let Ok(v) = std::env::var(PRECISION_ENV) {
        set_precision_cap(v.parse().map_err(|_| format!("{PRECISION_ENV}: not a number: {v}"))?);
    }
    if let Ok(v) = std::env::var(ORDER_BOUND_ENV) {
        set_order_bound(v.parse().map_err(|_| format!("{ORDER_BOUND_ENV}: not a number: {v}"))?);
    }
    Ok(())
}

/// Thread-local precision override, restored on drop.
pub struct PrecisionGuard {
    previous: Option<u32>,
}

impl PrecisionGuard {
    pub fn set(digits: u32) -> Self {
        let previous = PRECISION_OVERRIDE.with(|c| c.replace(Some(digits.max(1))));
        PrecisionGuard { previous }
    }
}

impl Drop for PrecisionGuard {
    fn drop(&mut self) {
        PRECISION_OVERRIDE.with(|c| c.set(self.previous));
    }
}
