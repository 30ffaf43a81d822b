//! Resource limits, budgets and engine statistics.
//!
//! Groebner computations can blow up; every engine entry point threads a
//! [`Budget`] and aborts with a typed error instead of looping forever. The
//! crate is `no_std`, so wall-clock enforcement is delegated to the host via
//! the [`Deadline`] trait; the companion CLI crate implements it on top of a
//! monotonic clock.

use core::fmt;
use core::time::Duration;

/// Hard caps for a single driver-level operation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResourceLimits {
    /// Abort when an S-pair or reduction step exceeds this total degree.
    pub max_total_degree: u32,
    /// Abort when a single basis grows beyond this many elements.
    pub max_basis_size: usize,
    /// Abort when the pending pair queue grows beyond this length.
    pub max_pair_queue: usize,
    /// Wall-clock budget; enforcement needs a [`Deadline`] in the budget.
    pub wall_budget: Option<Duration>,
}

impl Default for ResourceLimits {
    fn default() -> Self {
        ResourceLimits {
            max_total_degree: 40,
            max_basis_size: 5000,
            max_pair_queue: 250_000,
            wall_budget: Some(Duration::from_secs(60)),
        }
    }
}

impl ResourceLimits {
    /// Effectively unbounded, for oracles and tests that must run to the end.
    pub fn unbounded() -> Self {
        ResourceLimits {
            max_total_degree: u32::MAX,
            max_basis_size: usize::MAX,
            max_pair_queue: usize::MAX,
            wall_budget: None,
        }
    }
}

/// Host-provided wall-clock check.
pub trait Deadline {
    fn expired(&self) -> bool;
}

/// Which cap was hit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LimitKind {
    TotalDegree,
    BasisSize,
    PairQueue,
    WallClock,
}

impl fmt::Display for LimitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            LimitKind::TotalDegree => "total degree cap",
            LimitKind::BasisSize => "basis size cap",
            LimitKind::PairQueue => "pair queue cap",
            LimitKind::WallClock => "wall clock budget",
        };
        write!(f, "{s}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EngineError {
    ResourceExceeded(LimitKind),
}

impl fmt::Display for EngineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EngineError::ResourceExceeded(k) => write!(f, "resource limit exceeded: {k}"),
        }
    }
}

/// Counters reported alongside every verdict.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EngineStats {
    pub bases_computed: u64,
    pub spairs_considered: u64,
    pub spairs_reduced: u64,
    pub reduction_steps: u64,
    pub max_basis_size: usize,
    pub max_degree_seen: u32,
}

impl EngineStats {
    pub fn absorb(&mut self, other: &EngineStats) {
        self.bases_computed += other.bases_computed;
        self.spairs_considered += other.spairs_considered;
        self.spairs_reduced += other.spairs_reduced;
        self.reduction_steps += other.reduction_steps;
        self.max_basis_size = self.max_basis_size.max(other.max_basis_size);
        self.max_degree_seen = self.max_degree_seen.max(other.max_degree_seen);
    }
}

/// Limits plus an optional deadline plus running statistics, threaded by
/// mutable reference through every engine operation.
pub struct Budget<'a> {
    pub limits: ResourceLimits,
    pub deadline: Option<&'a dyn Deadline>,
    pub stats: EngineStats,
    clock_check: u32,
}

impl<'a> Budget<'a> {
    pub fn new(limits: ResourceLimits) -> Self {
        Budget {
            limits,
            deadline: None,
            stats: EngineStats::default(),
            clock_check: 0,
        }
    }

    pub fn with_deadline(limits: ResourceLimits, deadline: &'a dyn Deadline) -> Self {
        Budget {
            limits,
            deadline: Some(deadline),
            stats: EngineStats::default(),
            clock_check: 0,
        }
    }

    pub fn unbounded() -> Self {
        Budget::new(ResourceLimits::unbounded())
    }

    /// Checks the deadline on every 64th call to keep clock reads off the hot
    /// path.
    pub fn tick(&mut self) -> Result<(), EngineError> {
        self.clock_check = self.clock_check.wrapping_add(1);
        if self.clock_check.is_multiple_of(64) {
            self.check_deadline()?;
        }
        Ok(())
    }

    pub fn check_deadline(&self) -> Result<(), EngineError> {
        if let Some(d) = self.deadline {
            if d.expired() {
                return Err(EngineError::ResourceExceeded(LimitKind::WallClock));
            }
        }
        Ok(())
    }

    pub fn check_degree(&mut self, degree: u32) -> Result<(), EngineError> {
        self.stats.max_degree_seen = self.stats.max_degree_seen.max(degree);
        if degree > self.limits.max_total_degree {
            return Err(EngineError::ResourceExceeded(LimitKind::TotalDegree));
        }
        Ok(())
    }

    pub fn check_basis(&mut self, size: usize) -> Result<(), EngineError> {
        self.stats.max_basis_size = self.stats.max_basis_size.max(size);
        if size > self.limits.max_basis_size {
            return Err(EngineError::ResourceExceeded(LimitKind::BasisSize));
        }
        Ok(())
    }

    pub fn check_pair_queue(&self, len: usize) -> Result<(), EngineError> {
        if len > self.limits.max_pair_queue {
            return Err(EngineError::ResourceExceeded(LimitKind::PairQueue));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Always(bool);
    impl Deadline for Always {
        fn expired(&self) -> bool {
            self.0
        }
    }

    #[test]
    fn degree_cap_trips() {
        let mut b = Budget::new(ResourceLimits {
            max_total_degree: 5,
            ..ResourceLimits::unbounded()
        });
        assert!(b.check_degree(5).is_ok());
        assert_eq!(
            b.check_degree(6),
            Err(EngineError::ResourceExceeded(LimitKind::TotalDegree))
        );
        assert_eq!(b.stats.max_degree_seen, 6);
    }

    #[test]
    fn deadline_surfaces_through_tick() {
        let d = Always(true);
        let mut b = Budget::with_deadline(ResourceLimits::default(), &d);
        let mut tripped = false;
        for _ in 0..128 {
            if b.tick().is_err() {
                tripped = true;
                break;
            }
        }
        assert!(tripped);
    }

    #[test]
    fn stats_absorb_takes_maxima() {
        let mut a = EngineStats {
            bases_computed: 1,
            max_basis_size: 10,
            ..EngineStats::default()
        };
        let b = EngineStats {
            bases_computed: 2,
            max_basis_size: 4,
            max_degree_seen: 7,
            ..EngineStats::default()
        };
        a.absorb(&b);
        assert_eq!(a.bases_computed, 3);
        assert_eq!(a.max_basis_size, 10);
        assert_eq!(a.max_degree_seen, 7);
    }
}
