//! Twin-singlet signalling experiment.
//!
//! Alice and Bob share two singlets. Qubits are ordered `(A1, B1, A2, B2)`:
//! singlet 1 lives on `(A1, B1)`, singlet 2 on `(A2, B2)`, and the amplitude
//! index is `8·a1 + 4·b1 + 2·a2 + b2`. Alice's reduced index is `2·a1 + a2`.
//!
//! Written in a basis `{ψ, ψ̄}` and grouped by party, the twin singlet is
//!
//! ```text
//! ½ [ (ψψ)_A (ψ̄ψ̄)_B + (ψ̄ψ̄)_A (ψψ)_B − (ψψ̄)_A (ψ̄ψ)_B − (ψ̄ψ)_A (ψψ̄)_B ]
//! ```
//!
//! A partial-swap machine is applied term by term to Alice's pair: the two
//! mixed terms are rewritten by the machine, the two same-state terms pass
//! through. Because the machine is not linear the result depends on the
//! decomposition basis, and Alice's reduced state after Bob measures can reveal
//! which basis was used.

use nalgebra::Matrix4;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::bloch::{BlochAngles, QubitBasis, TwoQubitState, NORM_TOL};
use crate::error::{check_tolerance, Error, Result};
use crate::sampling::{bloch_uniform_off_equator, sample_rng};
use crate::swap::{azimuthal_swap_shared_phase, partial_swap, StatePair, SwapKind};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Tolerances for [`DensityMatrix4`] validation.
pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = 1e-10;

/// Default threshold above which a trace distance counts as a signal.
pub const DEFAULT_THRESHOLD: f64 = 1e-8;

/// Index into a [`FourQubitState`] for qubit values `(a1, b1, a2, b2)`.
pub const fn four_qubit_index(a1: usize, b1: usize, a2: usize, b2: usize) -> usize {
    8 * a1 + 4 * b1 + 2 * a2 + b2
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourQubitState {
    amps: [Complex64; 16],
}

impl FourQubitState {
    pub fn new(amps: [Complex64; 16]) -> Result<Self> {
        let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if !norm_sqr.is_finite() || (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized {
                norm_sqr,
                tol: NORM_TOL,
            });
        }
        Ok(Self { amps })
    }

    pub fn amps(&self) -> &[Complex64; 16] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// ⟨self|other⟩
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amps
            .iter()
            .zip(other.amps.iter())
            .map(|(x, y)| x.conj() * y)
            .sum()
    }

    pub fn fidelity(&self, other: &Self) -> f64 {
        self.inner(other).norm_sqr()
    }
}

/// Alice's two-qubit density matrix over `(A1, A2)`, index `2·a1 + a2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix4 {
    entries: Matrix4<Complex64>,
}

impl DensityMatrix4 {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(entries: Matrix4<Complex64>) -> Result<Self> {
        for i in 0..4 {
            for j in 0..4 {
                let gap = (entries[(i, j)] - entries[(j, i)].conj()).norm();
                if !gap.is_finite() || gap > HERMITIAN_TOL {
                    return Err(Error::InvalidDensityMatrix(format!(
                        "not Hermitian at ({i}, {j}): gap {gap:e}"
                    )));
                }
            }
        }
        let trace = entries.trace();
        if (trace - Complex64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(Error::InvalidDensityMatrix(format!("trace {trace}")));
        }
        let min_eig = entries
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -PSD_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "negative eigenvalue {min_eig:e}"
            )));
        }
        Ok(Self { entries })
    }

    /// `I/4`, Alice's state when nothing is done to the twin singlet.
    pub fn maximally_mixed() -> Self {
        Self {
            entries: Matrix4::identity() * Complex64::new(0.25, 0.0),
        }
    }

    pub fn entries(&self) -> &Matrix4<Complex64> {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[(row, col)]
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.entries - other.entries)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Rows of `[re, im]` pairs, row-major.
    pub fn to_rows(&self) -> [[[f64; 2]; 4]; 4] {
        let mut rows = [[[0.0; 2]; 4]; 4];
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                let z = self.entries[(i, j)];
                *cell = [z.re, z.im];
            }
        }
        rows
    }
}

/// Which rewrite Alice's machine applies to the mixed terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TermMachine {
    /// Leaves every term alone; the no-signalling baseline.
    Identity,
    Swap(SwapKind),
    /// See [`azimuthal_swap_shared_phase`].
    AzimuthalSharedPhase,
}

impl TermMachine {
    fn rewrite(&self, pair: StatePair) -> StatePair {
        match self {
            TermMachine::Identity => pair,
            TermMachine::Swap(kind) => partial_swap(*kind, pair),
            TermMachine::AzimuthalSharedPhase => azimuthal_swap_shared_phase(pair),
        }
    }
}

impl From<SwapKind> for TermMachine {
    fn from(kind: SwapKind) -> Self {
        TermMachine::Swap(kind)
    }
}

/// `(|up⟩|down⟩ − |down⟩|up⟩)/√2`
pub fn singlet_in_basis(basis: &QubitBasis) -> TwoQubitState {
    let up = basis.up().amplitudes();
    let down = basis.down().amplitudes();
    let mut amps = [ZERO; 4];
    for i in 0..2 {
        for j in 0..2 {
            amps[2 * i + j] = (up[i] * down[j] - down[i] * up[j]) * std::f64::consts::FRAC_1_SQRT_2;
        }
    }
    TwoQubitState::new(amps).expect("singlet of an orthonormal basis is normalized")
}

/// Two singlets in `(A1, B1, A2, B2)` order.
pub fn twin_singlet(basis: &QubitBasis) -> FourQubitState {
    let s = singlet_in_basis(basis);
    let s = s.amps();
    let mut amps = [ZERO; 16];
    for a1 in 0..2 {
        for b1 in 0..2 {
            for a2 in 0..2 {
                for b2 in 0..2 {
                    amps[four_qubit_index(a1, b1, a2, b2)] = s[2 * a1 + b1] * s[2 * a2 + b2];
                }
            }
        }
    }
    FourQubitState { amps }
}

/// Result of rewriting the twin singlet term by term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MachineOutput {
    /// Renormalized post-machine state.
    pub state: FourQubitState,
    /// Norm before renormalization.
    pub pre_norm: f64,
    /// The decomposition basis sits at a pole.
    pub degenerate: bool,
}

/// Expands the twin singlet in `basis`, rewrites Alice's mixed pairs with the
/// machine, and renormalizes.
///
/// Alice's pairs `(ψ, ψ̄)` and `(ψ̄, ψ)` go through the machine as coordinate
/// pairs; `(ψ, ψ)` and `(ψ̄, ψ̄)` are left untouched. Signs are `+, +, −, −`
/// in the order listed in the module docs.
pub fn apply_machine_termwise(
    machine: impl Into<TermMachine>,
    basis: &QubitBasis,
) -> Result<MachineOutput> {
    let machine = machine.into();
    let up = basis.up_angles();
    let down = basis.down_angles();

    // (sign, Alice (A1, A2), Bob (B1, B2), Alice pair is mixed)
    let terms = [
        (1.0, (up, up), (down, down), false),
        (1.0, (down, down), (up, up), false),
        (-1.0, (up, down), (down, up), true),
        (-1.0, (down, up), (up, down), true),
    ];

    let mut amps = [ZERO; 16];
    for (sign, (x, y), (u, v), mixed) in terms {
        let (x, y) = if mixed {
            let out = machine.rewrite(StatePair::new(x, y));
            (out.first, out.second)
        } else {
            (x, y)
        };
        add_product_term(&mut amps, 0.5 * sign, [x, u, y, v]);
    }

    let pre_norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if !pre_norm.is_finite() || pre_norm <= 0.0 {
        return Err(Error::Numerical(format!(
            "post-machine state has norm {pre_norm}"
        )));
    }
    for a in amps.iter_mut() {
        *a /= pre_norm;
    }
    Ok(MachineOutput {
        state: FourQubitState::new(amps)?,
        pre_norm,
        degenerate: basis.is_degenerate(),
    })
}

/// `amps += coef · A(a1) ⊗ A(b1) ⊗ A(a2) ⊗ A(b2)` in `(A1, B1, A2, B2)` order.
fn add_product_term(amps: &mut [Complex64; 16], coef: f64, factors: [BlochAngles; 4]) {
    let [q0, q1, q2, q3] = factors.map(|a| a.state().amplitudes());
    for (a1, x) in q0.iter().enumerate() {
        for (b1, u) in q1.iter().enumerate() {
            for (a2, y) in q2.iter().enumerate() {
                for (b2, v) in q3.iter().enumerate() {
                    amps[four_qubit_index(a1, b1, a2, b2)] += x * u * y * v * coef;
                }
            }
        }
    }
}

/// Bob measures `(B1, B2)` in `bob_basis ⊗ bob_basis`; returns Alice's state
/// averaged over the four outcomes, `Σ_k p_k ρ_k`.
pub fn alice_mixture_after_bob_measurement(
    state: &FourQubitState,
    bob_basis: &QubitBasis,
) -> Result<DensityMatrix4> {
    let kets = bob_basis.vectors().map(|k| k.amplitudes());
    let mut rho = Matrix4::<Complex64>::zeros();
    for k1 in &kets {
        for k2 in &kets {
            // unnormalized conditional state ⟨k1 k2|_B |Ψ⟩, weight p_k = ‖v‖²
            let mut v = [ZERO; 4];
            for a1 in 0..2 {
                for a2 in 0..2 {
                    let mut acc = ZERO;
                    for b1 in 0..2 {
                        for b2 in 0..2 {
                            acc += k1[b1].conj()
                                * k2[b2].conj()
                                * state.amps[four_qubit_index(a1, b1, a2, b2)];
                        }
                    }
                    v[2 * a1 + a2] = acc;
                }
            }
            for r in 0..4 {
                for c in 0..4 {
                    rho[(r, c)] += v[r] * v[c].conj();
                }
            }
        }
    }
    DensityMatrix4::new(rho)
}

/// `½ Σ |λ_i(a − b)|`, clamped to `[0, 1]`.
pub fn trace_distance(a: &DensityMatrix4, b: &DensityMatrix4) -> f64 {
    let diff = a.entries - b.entries;
    // restore exact Hermiticity before the eigensolve
    let diff = (diff + diff.adjoint()) * Complex64::new(0.5, 0.0);
    let sum: f64 = diff.symmetric_eigenvalues().iter().map(|l| l.abs()).sum();
    (0.5 * sum).clamp(0.0, 1.0)
}

/// Experiment knobs beyond the machine and the two bases.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentOptions {
    pub machine: TermMachine,
    pub threshold: f64,
    /// Bob's measurement bases for the two arms. `None` makes Bob measure in
    /// the same basis the machine decomposition used.
    pub bob_bases: Option<(QubitBasis, QubitBasis)>,
}

impl ExperimentOptions {
    pub fn new(machine: impl Into<TermMachine>) -> Self {
        Self {
            machine: machine.into(),
            threshold: DEFAULT_THRESHOLD,
            bob_bases: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignallingReport {
    pub machine: TermMachine,
    pub basis1: QubitBasis,
    pub basis2: QubitBasis,
    pub rho_b1: DensityMatrix4,
    pub rho_b2: DensityMatrix4,
    pub trace_distance: f64,
    pub threshold: f64,
    pub signalling: bool,
    /// Per arm: the basis sits at a pole.
    pub degenerate_flags: [bool; 2],
    /// Per arm: norm of the rewritten state before renormalization.
    pub pre_norms: [f64; 2],
}

pub fn run_signalling_experiment(
    machine: impl Into<TermMachine>,
    basis1: &QubitBasis,
    basis2: &QubitBasis,
    threshold: f64,
) -> Result<SignallingReport> {
    let options = ExperimentOptions {
        threshold,
        ..ExperimentOptions::new(machine)
    };
    run_experiment(&options, basis1, basis2)
}

/// Arm `i` applies the machine in `basis_i` and lets Bob measure (by default
/// also in `basis_i`); the trace distance between the two resulting Alice
/// states is the signalling witness.
pub fn run_experiment(
    options: &ExperimentOptions,
    basis1: &QubitBasis,
    basis2: &QubitBasis,
) -> Result<SignallingReport> {
    check_tolerance(options.threshold)?;
    let (bob1, bob2) = options.bob_bases.unwrap_or((*basis1, *basis2));

    let out1 = apply_machine_termwise(options.machine, basis1)?;
    let out2 = apply_machine_termwise(options.machine, basis2)?;
    let rho_b1 = alice_mixture_after_bob_measurement(&out1.state, &bob1)?;
    let rho_b2 = alice_mixture_after_bob_measurement(&out2.state, &bob2)?;
    let distance = trace_distance(&rho_b1, &rho_b2);
    if !distance.is_finite() {
        return Err(Error::Numerical("non-finite trace distance".into()));
    }

    Ok(SignallingReport {
        machine: options.machine,
        basis1: *basis1,
        basis2: *basis2,
        rho_b1,
        rho_b2,
        trace_distance: distance,
        threshold: options.threshold,
        signalling: distance > options.threshold,
        degenerate_flags: [out1.degenerate || bob1.is_degenerate(), out2.degenerate || bob2.is_degenerate()],
        pre_norms: [out1.pre_norm, out2.pre_norm],
    })
}

/// One seeded random basis pair and its trace distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BatchRecord {
    pub basis1: BlochAngles,
    pub basis2: BlochAngles,
    pub trace_distance: f64,
}

/// Trace distances for `count` Bloch-uniform basis pairs whose polar angles
/// stay at least `equator_offset` away from π/2. Sample `i` draws from its own
/// stream, so output is independent of thread scheduling.
pub fn random_basis_pair_batch(
    machine: impl Into<TermMachine>,
    count: usize,
    seed: u64,
    equator_offset: f64,
) -> Result<Vec<BatchRecord>> {
    if count == 0 {
        return Err(Error::NoSamples);
    }
    let machine = machine.into();
    (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(seed, i);
            let a = bloch_uniform_off_equator(&mut rng, equator_offset);
            let b = bloch_uniform_off_equator(&mut rng, equator_offset);
            let report = run_experiment(
                &ExperimentOptions::new(machine),
                &QubitBasis::from_angles(a),
                &QubitBasis::from_angles(b),
            )?;
            Ok(BatchRecord {
                basis1: a,
                basis2: b,
                trace_distance: report.trace_distance,
            })
        })
        .collect()
}
