//! Wall-clock deadline plugged into engine budgets.

use flatkit_core::limits::Deadline;
use std::time::{Duration, Instant};

/// Monotonic deadline: expires once `budget` has elapsed since creation.
pub struct WallDeadline {
    start: Instant,
    budget: Duration,
}

impl WallDeadline {
    pub fn new(budget: Duration) -> Self {
        WallDeadline {
            start: Instant::now(),
            budget,
        }
    }

    pub fn elapsed(&self) -> Duration {
        self.start.elapsed()
    }
}

impl Deadline for WallDeadline {
    fn expired(&self) -> bool {
        self.start.elapsed() >= self.budget
    }
}
