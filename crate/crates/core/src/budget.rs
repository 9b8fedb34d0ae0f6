//! Step and wall-clock budgets for long-running computations.

use std::time::{Duration, Instant};

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_steps: u64,
    pub max_time: Duration,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_steps: 1_000_000, max_time: Duration::from_secs(60) }
    }
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget { max_steps: u64::MAX, max_time: Duration::MAX }
    }

    pub fn steps(max_steps: u64) -> Self {
        Budget { max_steps, ..Budget::default() }
    }
}

#[derive(Clone, Copy, Debug, Error, PartialEq, Eq)]
#[error("resource budget exceeded after {steps} reduction steps ({elapsed_ms} ms)")]
pub struct BudgetExceeded {
    pub steps: u64,
    pub elapsed_ms: u64,
}

/// Counts reduction steps against a [`Budget`].
#[derive(Debug)]
pub struct Meter {
    budget: Budget,
    start: Instant,
    steps: u64,
}

impl Meter {
    pub fn new(budget: Budget) -> Self {
        Meter { budget, start: Instant::now(), steps: 0 }
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn elapsed(&self) -> Duration {
        self.start.elapsed()
    }

    /// Records one step; fails once either limit is crossed.
    pub fn tick(&mut self) -> Result<(), BudgetExceeded> {
        self.steps += 1;
        if self.steps > self.budget.max_steps
            || (self.steps.is_multiple_of(256) && self.start.elapsed() > self.budget.max_time)
        {
            return Err(self.exceeded());
        }
        Ok(())
    }

    pub fn exceeded(&self) -> BudgetExceeded {
        BudgetExceeded { steps: self.steps, elapsed_ms: self.start.elapsed().as_millis() as u64 }
    }
}
