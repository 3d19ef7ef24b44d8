//! Numerical verifier for the "no partial swapping" theorem on Bloch-sphere qubits.
//!
//! A partial-swap machine exchanges exactly one of the two Bloch parameters
//! between a qubit and its partner: the phase angle φ ([`SwapKind::PhaseSwap`])
//! or the polar angle θ ([`SwapKind::AzimuthalSwap`]). The crate checks where
//! such a map could be unitary ([`feasibility`]) and simulates the twin-singlet
//! experiment in which a perfect machine would let Alice learn Bob's measurement
//! basis ([`signalling`]).
//!
//! Modules:
//! - [`bloch`]: Bloch angles, pure qubits, bases, inner products, tensor products.
//! - [`swap`]: the two coordinate-level swap machines.
//! - [`feasibility`]: inner-product preservation, the two feasibility conditions,
//!   Gram-matrix extendability, and a seeded feasible-set scan.
//! - [`signalling`]: twin singlets, term-wise machine application, Alice's reduced
//!   state after Bob's measurement, and the trace-distance witness.
//! - [`cli`]: the `partial-swap` command line.

pub mod bloch;
pub mod cli;
mod error;
pub mod feasibility;
pub mod format;
pub mod sampling;
pub mod signalling;
pub mod swap;

pub use bloch::{
    angles_inner_product, complement_angles, inner_product, state_from_angles, tensor,
    BlochAngles, PureQubit, QubitBasis, TwoQubitState,
};
pub use error::{Error, Result};
pub use feasibility::{
    check_feasibility, condition_i, condition_ii, scan_feasible_set, unitary_extension_exists,
    BarMode, FeasibilityInput, FeasibilityReport,
};
pub use signalling::{
    alice_mixture_after_bob_measurement, apply_machine_termwise, run_signalling_experiment,
    singlet_in_basis, trace_distance, twin_singlet, DensityMatrix4, FourQubitState,
    SignallingReport, TermMachine,
};
pub use swap::{partial_swap, swap_product_state, StatePair, SwapKind};
