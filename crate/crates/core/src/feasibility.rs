//! Where could a partial-swap machine be unitary?
//!
//! For two input pairs `A(a1)A(b1)` and `A(a2)A(b2)` a unitary realization must
//! preserve the inner product:
//!
//! ```text
//! ⟨A(a1)|A(a2)⟩⟨A(b1)|A(b2)⟩ = ⟨out1|out2⟩   (out = swapped product states)
//! ```
//!
//! For either machine the difference factors as
//!
//! ```text
//! lhs − rhs = (e^{iΔφ} − e^{iΔφ̄}) · (s1 s2 c̄1 c̄2 − c1 c2 s̄1 s̄2)
//! ```
//!
//! with `s = sin(θ/2)`, `c = cos(θ/2)`, `Δφ = φ2 − φ1` and barred quantities
//! taken from the second member of each pair. The first factor vanishes under
//! condition (ii), `Δφ ≡ Δφ̄ (mod 2π)`, the second under condition (i),
//! `tan(θ1/2)tan(θ2/2) = tan(θ̄1/2)tan(θ̄2/2)`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::bloch::{circular_distance, inner_product, BlochAngles, TwoQubitState};
use crate::error::{check_tolerance, Error, Result};
use crate::sampling::{bloch_uniform, sample_rng};
use crate::swap::{partial_swap, swap_product_state, StatePair, SwapKind};

/// Default residual tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;

/// First-order bound on the residual per unit deviation in either condition:
/// `residual ≤ 2·|cond (i) gap|` and `residual ≤ |cond (ii) gap|`, so the
/// conditions are evaluated at `tol / CONDITION_SENSITIVITY`.
pub const CONDITION_SENSITIVITY: f64 = 4.0;

/// How barred angles are chosen when not supplied explicitly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BarMode {
    /// Barred point is the antipode of the unbarred one.
    Antipodal,
    /// Barred points are free parameters.
    Independent,
}

impl BarMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            BarMode::Antipodal => "antipodal",
            BarMode::Independent => "independent",
        }
    }
}

impl std::str::FromStr for BarMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "antipodal" => Ok(BarMode::Antipodal),
            "independent" => Ok(BarMode::Independent),
            other => Err(format!(
                "unknown bar mode `{other}` (expected `antipodal` or `independent`)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeasibilityInput {
    pub kind: SwapKind,
    pub angles1: BlochAngles,
    pub angles2: BlochAngles,
    pub bar1: BlochAngles,
    pub bar2: BlochAngles,
}

impl FeasibilityInput {
    /// Bars set to the complements of the unbarred points.
    pub fn antipodal(kind: SwapKind, angles1: BlochAngles, angles2: BlochAngles) -> Self {
        Self {
            kind,
            angles1,
            angles2,
            bar1: angles1.complement(),
            bar2: angles2.complement(),
        }
    }

    pub fn with_bars(
        kind: SwapKind,
        angles1: BlochAngles,
        angles2: BlochAngles,
        bar1: BlochAngles,
        bar2: BlochAngles,
    ) -> Self {
        Self {
            kind,
            angles1,
            angles2,
            bar1,
            bar2,
        }
    }

    pub fn pair1(&self) -> StatePair {
        StatePair::new(self.angles1, self.bar1)
    }

    pub fn pair2(&self) -> StatePair {
        StatePair::new(self.angles2, self.bar2)
    }

    pub fn is_degenerate(&self) -> bool {
        [self.angles1, self.angles2, self.bar1, self.bar2]
            .iter()
            .any(BlochAngles::is_degenerate)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeasibilityReport {
    pub input: FeasibilityInput,
    pub tol: f64,
    /// Product of the input overlaps.
    pub lhs: Complex64,
    /// Product of the output overlaps.
    pub rhs: Complex64,
    /// `|lhs − rhs|`
    pub residual: f64,
    /// `lhs − rhs` from the closed-form factorization.
    pub factored_residual: Complex64,
    pub condition_i: bool,
    pub condition_ii: bool,
    pub unitary_extendable: bool,
    pub degenerate: bool,
}

impl FeasibilityReport {
    pub fn feasible(&self) -> bool {
        self.unitary_extendable
    }
}

/// `(e^{iΔφ} − e^{iΔφ̄})·(s1 s2 c̄1 c̄2 − c1 c2 s̄1 s̄2)`; identical for both kinds.
pub fn factored_difference(input: &FeasibilityInput) -> Complex64 {
    let d_phi = input.angles2.phi() - input.angles1.phi();
    let d_bar = input.bar2.phi() - input.bar1.phi();
    let phase_gap = Complex64::from_polar(1.0, d_phi) - Complex64::from_polar(1.0, d_bar);
    phase_gap * theta_gap(
        input.angles1.theta(),
        input.angles2.theta(),
        input.bar1.theta(),
        input.bar2.theta(),
    )
}

/// `s1 s2 c̄1 c̄2 − c1 c2 s̄1 s̄2`, zero exactly when condition (i) holds.
fn theta_gap(theta1: f64, theta2: f64, bar_theta1: f64, bar_theta2: f64) -> f64 {
    let (s1, c1) = (0.5 * theta1).sin_cos();
    let (s2, c2) = (0.5 * theta2).sin_cos();
    let (sb1, cb1) = (0.5 * bar_theta1).sin_cos();
    let (sb2, cb2) = (0.5 * bar_theta2).sin_cos();
    (s1 * s2) * (cb1 * cb2) - (c1 * c2) * (sb1 * sb2)
}

/// `tan(θ1/2)tan(θ2/2) = tan(θ̄1/2)tan(θ̄2/2)` in cross-multiplied form,
/// which stays finite at θ = π.
pub fn condition_i(theta1: f64, theta2: f64, bar_theta1: f64, bar_theta2: f64, tol: f64) -> bool {
    theta_gap(theta1, theta2, bar_theta1, bar_theta2).abs() <= tol
}

/// `φ2 − φ1 ≡ φ̄2 − φ̄1 (mod 2π)` within `tol` of circular distance.
pub fn condition_ii(phi1: f64, phi2: f64, bar_phi1: f64, bar_phi2: f64, tol: f64) -> bool {
    circular_distance(phi2 - phi1, bar_phi2 - bar_phi1) <= tol
}

pub fn check_feasibility(input: &FeasibilityInput, tol: f64) -> Result<FeasibilityReport> {
    check_tolerance(tol)?;

    let lhs = inner_product(&input.angles1.state(), &input.angles2.state())
        * inner_product(&input.bar1.state(), &input.bar2.state());
    let out1 = partial_swap(input.kind, input.pair1());
    let out2 = partial_swap(input.kind, input.pair2());
    let rhs = inner_product(&out1.first.state(), &out2.first.state())
        * inner_product(&out1.second.state(), &out2.second.state());
    let residual = (lhs - rhs).norm();
    let factored_residual = factored_difference(input);
    if !residual.is_finite() || !factored_residual.norm().is_finite() {
        return Err(Error::Numerical(format!(
            "non-finite residual for {:?}",
            input
        )));
    }

    let cond_tol = tol / CONDITION_SENSITIVITY;
    Ok(FeasibilityReport {
        input: *input,
        tol,
        lhs,
        rhs,
        residual,
        factored_residual,
        condition_i: condition_i(
            input.angles1.theta(),
            input.angles2.theta(),
            input.bar1.theta(),
            input.bar2.theta(),
            cond_tol,
        ),
        condition_ii: condition_ii(
            input.angles1.phi(),
            input.angles2.phi(),
            input.bar1.phi(),
            input.bar2.phi(),
            cond_tol,
        ),
        unitary_extendable: residual < tol,
        degenerate: input.is_degenerate(),
    })
}

/// Largest entrywise gap between the input and output Gram matrices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GramDeviation {
    pub max_deviation: f64,
    /// `(i, j)` of the largest gap, `i ≤ j`.
    pub worst_entry: (usize, usize),
}

pub fn gram_deviation(
    inputs: &[TwoQubitState],
    outputs: &[TwoQubitState],
) -> Result<GramDeviation> {
    if inputs.len() != outputs.len() {
        return Err(Error::LengthMismatch {
            inputs: inputs.len(),
            outputs: outputs.len(),
        });
    }
    if inputs.is_empty() {
        return Err(Error::EmptyStateList);
    }
    let mut worst = GramDeviation {
        max_deviation: 0.0,
        worst_entry: (0, 0),
    };
    // Gram matrices are Hermitian; the upper triangle covers every entry.
    for i in 0..inputs.len() {
        for j in i..inputs.len() {
            let gap = (inputs[i].inner(&inputs[j]) - outputs[i].inner(&outputs[j])).norm();
            if !gap.is_finite() {
                return Err(Error::Numerical(format!("non-finite Gram entry ({i}, {j})")));
            }
            if gap > worst.max_deviation {
                worst = GramDeviation {
                    max_deviation: gap,
                    worst_entry: (i, j),
                };
            }
        }
    }
    Ok(worst)
}

/// A unitary mapping each `inputs[i]` to `outputs[i]` exists iff the Gram
/// matrices agree; agreement is tested as max entrywise deviation `< tol`.
pub fn unitary_extension_exists(
    inputs: &[TwoQubitState],
    outputs: &[TwoQubitState],
    tol: f64,
) -> Result<bool> {
    check_tolerance(tol)?;
    Ok(gram_deviation(inputs, outputs)?.max_deviation < tol)
}

/// Input and output product states of the two pairs in `input`, in the shape
/// [`unitary_extension_exists`] expects.
pub fn product_state_sets(input: &FeasibilityInput) -> ([TwoQubitState; 2], [TwoQubitState; 2]) {
    let ins = [input.pair1(), input.pair2()]
        .map(|p| crate::bloch::tensor(&p.first.state(), &p.second.state()));
    let outs = [input.pair1(), input.pair2()].map(|p| swap_product_state(input.kind, p));
    (ins, outs)
}

/// Input for sample `index`: two Bloch-uniform points, plus two more for the
/// bars in independent mode.
pub fn sample_input(kind: SwapKind, bar_mode: BarMode, seed: u64, index: u64) -> FeasibilityInput {
    let mut rng = sample_rng(seed, index);
    let a1 = bloch_uniform(&mut rng);
    let a2 = bloch_uniform(&mut rng);
    match bar_mode {
        BarMode::Antipodal => FeasibilityInput::antipodal(kind, a1, a2),
        BarMode::Independent => {
            let b1 = bloch_uniform(&mut rng);
            let b2 = bloch_uniform(&mut rng);
            FeasibilityInput::with_bars(kind, a1, a2, b1, b2)
        }
    }
}

/// Seeded scan of random inputs, one report per sample in index order.
pub fn scan_feasible_set(
    kind: SwapKind,
    sample_count: usize,
    seed: u64,
    bar_mode: BarMode,
    tol: f64,
) -> Result<Vec<FeasibilityReport>> {
    if sample_count == 0 {
        return Err(Error::NoSamples);
    }
    check_tolerance(tol)?;
    (0..sample_count as u64)
        .into_par_iter()
        .map(|i| check_feasibility(&sample_input(kind, bar_mode, seed, i), tol))
        .collect()
}

pub fn feasible_fraction(reports: &[FeasibilityReport]) -> f64 {
    if reports.is_empty() {
        return 0.0;
    }
    reports.iter().filter(|r| r.unitary_extendable).count() as f64 / reports.len() as f64
}
