//! The two hypothetical partial-swap machines.
//!
//! Both act on Bloch coordinates of a state pair, never as linear operators:
//!
//! ```text
//! PhaseSwap:     (θ1, φ1), (θ2, φ2)  ->  (θ1, φ2), (θ2, φ1)
//! AzimuthalSwap: (θ1, φ1), (θ2, φ2)  ->  (θ2, φ1), (θ1, φ2)
//! ```
//!
//! With the second state the complement of the first, these are the maps
//! `A(θ,φ)Ā(θ̄,φ̄) -> A(θ,φ̄)Ā(θ̄,φ)` and `A(θ,φ)Ā(θ̄,φ̄) -> A(θ̄,φ)Ā(θ,φ̄)`.

use std::fmt;
use std::str::FromStr;

use crate::bloch::{tensor, BlochAngles, TwoQubitState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SwapKind {
    /// Exchanges φ, keeps θ.
    PhaseSwap,
    /// Exchanges θ, keeps φ.
    AzimuthalSwap,
}

impl SwapKind {
    pub const ALL: [SwapKind; 2] = [SwapKind::PhaseSwap, SwapKind::AzimuthalSwap];

    pub fn as_str(&self) -> &'static str {
        match self {
            SwapKind::PhaseSwap => "phase",
            SwapKind::AzimuthalSwap => "azimuthal",
        }
    }
}

impl fmt::Display for SwapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SwapKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "phase" => Ok(SwapKind::PhaseSwap),
            "azimuthal" => Ok(SwapKind::AzimuthalSwap),
            other => Err(format!(
                "unknown swap kind `{other}` (expected `phase` or `azimuthal`)"
            )),
        }
    }
}

/// Ordered pair `|A(first)⟩|A(second)⟩`. The second entry need not be the
/// complement of the first.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StatePair {
    pub first: BlochAngles,
    pub second: BlochAngles,
}

impl StatePair {
    pub fn new(first: BlochAngles, second: BlochAngles) -> Self {
        Self { first, second }
    }

    /// `(a, complement(a))`
    pub fn antipodal(first: BlochAngles) -> Self {
        Self {
            first,
            second: first.complement(),
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.first.is_degenerate() || self.second.is_degenerate()
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.first.approx_eq(&other.first, tol) && self.second.approx_eq(&other.second, tol)
    }
}

pub fn partial_swap(kind: SwapKind, p: StatePair) -> StatePair {
    let StatePair { first, second } = p;
    match kind {
        SwapKind::PhaseSwap => StatePair {
            first: first.with_phi(second.phi()),
            second: second.with_phi(first.phi()),
        },
        SwapKind::AzimuthalSwap => StatePair {
            first: first.with_theta(second.theta()),
            second: second.with_theta(first.theta()),
        },
    }
}

/// Alternative azimuthal machine in which both outputs carry the first
/// state's phase: `(θ1, φ1), (θ2, φ2) -> (θ2, φ1), (θ1, φ1)`.
///
/// Only used to compare against [`SwapKind::AzimuthalSwap`] in the signalling
/// experiment; unlike the two proper machines it is not an involution.
pub fn azimuthal_swap_shared_phase(p: StatePair) -> StatePair {
    let StatePair { first, second } = p;
    StatePair {
        first: first.with_theta(second.theta()),
        second: first,
    }
}

/// `A(q.first) ⊗ A(q.second)` with `q = partial_swap(kind, p)`.
pub fn swap_product_state(kind: SwapKind, p: StatePair) -> TwoQubitState {
    let q = partial_swap(kind, p);
    tensor(&q.first.state(), &q.second.state())
}
