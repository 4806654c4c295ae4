//! Failure-set and risky-set geometry on the shock-count lattice.
//!
//! The state space of the pair of shock counters is the nonnegative integer
//! lattice. For each threshold value `k` a scheme carves out the failure set
//! `S_k`; the risky set of cause `i` collects the states from which one more
//! type-`i` shock lands the process in `S_k`.
//!
//! The closed membership descriptions below are the production path; the
//! derivation from failure-set membership alone ([`Scheme::derived_risky_set`])
//! exists as a cross-check oracle and the equivalence of the two is asserted
//! in tests.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Which variable of the shock-count pair triggers failure when it reaches
/// the threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    /// Failure when `N_1 + N_2` first reaches `M`.
    Sum,
    /// Failure when `min(N_1, N_2)` first reaches `M` (parallel units).
    Min,
    /// Failure when `max(N_1, N_2)` first reaches `M` (serial units).
    Max,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::Sum, Scheme::Min, Scheme::Max];
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scheme::Sum => write!(f, "sum"),
            Scheme::Min => write!(f, "min"),
            Scheme::Max => write!(f, "max"),
        }
    }
}

impl FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "sum" => Ok(Scheme::Sum),
            "min" => Ok(Scheme::Min),
            "max" => Ok(Scheme::Max),
            other => Err(format!("unknown scheme `{other}` (expected sum|min|max)")),
        }
    }
}

/// Cause (shock type) index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Cause {
    One,
    Two,
}

impl Cause {
    pub const BOTH: [Cause; 2] = [Cause::One, Cause::Two];

    /// 0-based index, for arrays.
    pub fn index(self) -> usize {
        match self {
            Cause::One => 0,
            Cause::Two => 1,
        }
    }

    /// 1-based label, matching the usual `delta = i` notation.
    pub fn label(self) -> u8 {
        match self {
            Cause::One => 1,
            Cause::Two => 2,
        }
    }

    pub fn other(self) -> Cause {
        match self {
            Cause::One => Cause::Two,
            Cause::Two => Cause::One,
        }
    }
}

impl fmt::Display for Cause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// A state of the shock-count pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticePoint {
    pub x1: u64,
    pub x2: u64,
}

impl LatticePoint {
    pub fn new(x1: u64, x2: u64) -> Self {
        Self { x1, x2 }
    }

    /// Coordinate belonging to the given cause.
    pub fn coord(self, cause: Cause) -> u64 {
        match cause {
            Cause::One => self.x1,
            Cause::Two => self.x2,
        }
    }

    /// The state after one more shock of the given type.
    pub fn bumped(self, cause: Cause) -> Self {
        match cause {
            Cause::One => Self::new(self.x1 + 1, self.x2),
            Cause::Two => Self::new(self.x1, self.x2 + 1),
        }
    }

    pub fn transposed(self) -> Self {
        Self::new(self.x2, self.x1)
    }
}

impl Scheme {
    /// Membership of `pt` in the failure set `S_k`. For each scheme the sets
    /// `S_0, S_1, ...` partition the lattice.
    pub fn in_failure_set(self, k: u64, pt: LatticePoint) -> bool {
        match self {
            Scheme::Sum => pt.x1 + pt.x2 == k,
            Scheme::Min => pt.x1.min(pt.x2) == k,
            Scheme::Max => pt.x1.max(pt.x2) == k,
        }
    }

    /// Membership of `pt` in the risky set of `cause` at threshold `k >= 1`,
    /// by the closed per-scheme descriptions.
    pub fn in_risky_set(self, k: u64, cause: Cause, pt: LatticePoint) -> bool {
        assert!(k >= 1, "risky sets are defined for k >= 1");
        let own = pt.coord(cause);
        let other = pt.coord(cause.other());
        match self {
            Scheme::Sum => pt.x1 + pt.x2 == k - 1,
            Scheme::Min => own == k - 1 && other >= k,
            Scheme::Max => own == k - 1 && other <= k - 1,
        }
    }

    /// Risky-set membership derived purely from failure-set membership:
    /// `pt` is outside `S_k` and one more shock of `cause` enters `S_k`.
    pub fn derived_risky_set(self, k: u64, cause: Cause, pt: LatticePoint) -> bool {
        assert!(k >= 1, "risky sets are defined for k >= 1");
        !self.in_failure_set(k, pt) && self.in_failure_set(k, pt.bumped(cause))
    }

    /// All risky-set members with both coordinates at most `bound`, in
    /// lexicographic order.
    pub fn enumerate_risky_set(self, k: u64, cause: Cause, bound: u64) -> Vec<LatticePoint> {
        assert!(k >= 1, "risky sets are defined for k >= 1");
        let mut out = Vec::new();
        for x1 in 0..=bound {
            for x2 in 0..=bound {
                let pt = LatticePoint::new(x1, x2);
                if self.in_risky_set(k, cause, pt) {
                    out.push(pt);
                }
            }
        }
        out
    }
}
