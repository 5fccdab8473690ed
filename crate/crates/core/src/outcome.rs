use std::time::Instant;

use crate::engine::Budget;

/// Result of an exact search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome<T> {
    Solved(T),
    /// The whole search space was exhausted without a solution.
    Unsat,
    /// The budget ran out first.
    Timeout,
}

impl<T> Outcome<T> {
    pub fn is_solved(&self) -> bool {
        matches!(self, Outcome::Solved(_))
    }

    pub fn solution(self) -> Option<T> {
        match self {
            Outcome::Solved(s) => Some(s),
            _ => None,
        }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Outcome<U> {
        match self {
            Outcome::Solved(s) => Outcome::Solved(f(s)),
            Outcome::Unsat => Outcome::Unsat,
            Outcome::Timeout => Outcome::Timeout,
        }
    }

    /// `Some(true)` for solved, `Some(false)` for unsat, `None` on timeout.
    pub fn verdict(&self) -> Option<bool> {
        match self {
            Outcome::Solved(_) => Some(true),
            Outcome::Unsat => Some(false),
            Outcome::Timeout => None,
        }
    }
}

/// Wall-clock limit for a solver call; `None` means unlimited.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TimeLimit(pub Option<std::time::Duration>);

impl TimeLimit {
    pub const UNLIMITED: TimeLimit = TimeLimit(None);

    pub fn millis(ms: u64) -> Self {
        TimeLimit(Some(std::time::Duration::from_millis(ms)))
    }

    pub(crate) fn start(&self) -> Budget {
        Budget::until(self.0.map(|d| Instant::now() + d))
    }
}
