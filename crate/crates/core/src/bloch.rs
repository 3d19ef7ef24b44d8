//! Bloch-sphere parametrization of pure qubits.
//!
//! A point (θ, φ) on the sphere maps to `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`.
//! The complement of a point is its antipode (π − θ, φ + π), which is the
//! orthogonal state. Barred states are ordinary Bloch states evaluated at the
//! barred coordinates, so every function here works on plain [`BlochAngles`].

use std::f64::consts::{PI, TAU};
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Normalization tolerance for state vectors.
pub const NORM_TOL: f64 = 1e-12;

/// A polar angle this close to 0 or π marks a pole, where φ has no effect.
pub const POLE_EPS: f64 = 1e-12;

/// Reduce an angle into `[0, 2π)`.
pub fn normalize_phase(phi: f64) -> f64 {
    let r = phi.rem_euclid(TAU);
    // rem_euclid can round up to exactly 2π for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Minimal distance between two angles on the circle, in `[0, π]`.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    let d = normalize_phase(a - b);
    d.min(TAU - d)
}

/// A point on the Bloch sphere. θ ∈ [0, π], φ ∈ [0, 2π).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochAngles {
    theta: f64,
    phi: f64,
}

impl BlochAngles {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::NonFiniteAngle {
                name: "theta",
                value: theta,
            });
        }
        if !phi.is_finite() {
            return Err(Error::NonFiniteAngle {
                name: "phi",
                value: phi,
            });
        }
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::ThetaOutOfRange(theta));
        }
        Ok(Self {
            theta,
            phi: normalize_phase(phi),
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// True at the poles. φ is kept as given there but does not change the state.
    pub fn is_degenerate(&self) -> bool {
        self.theta <= POLE_EPS || PI - self.theta <= POLE_EPS
    }

    pub fn complement(&self) -> Self {
        complement_angles(*self)
    }

    pub fn state(&self) -> PureQubit {
        state_from_angles(*self)
    }

    /// Same point with φ replaced; θ is already known to be valid.
    pub(crate) fn with_phi(&self, phi: f64) -> Self {
        Self {
            theta: self.theta,
            phi: normalize_phase(phi),
        }
    }

    /// Same point with θ replaced; `theta` must come from another valid point.
    pub(crate) fn with_theta(&self, theta: f64) -> Self {
        debug_assert!((0.0..=PI).contains(&theta));
        Self {
            theta,
            phi: self.phi,
        }
    }

    /// Congruence of both coordinates within `tol`, φ compared mod 2π.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self.theta - other.theta).abs() <= tol && circular_distance(self.phi, other.phi) <= tol
    }
}

impl fmt::Display for BlochAngles {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(θ={}, φ={})", self.theta, self.phi)
    }
}

/// Normalized single-qubit state `a0|0⟩ + a1|1⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureQubit {
    a0: Complex64,
    a1: Complex64,
}

impl PureQubit {
    pub fn new(a0: Complex64, a1: Complex64) -> Result<Self> {
        let norm_sqr = a0.norm_sqr() + a1.norm_sqr();
        if !norm_sqr.is_finite() || (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized {
                norm_sqr,
                tol: NORM_TOL,
            });
        }
        Ok(Self { a0, a1 })
    }

    pub fn ket0() -> Self {
        Self {
            a0: Complex64::new(1.0, 0.0),
            a1: Complex64::new(0.0, 0.0),
        }
    }

    pub fn ket1() -> Self {
        Self {
            a0: Complex64::new(0.0, 0.0),
            a1: Complex64::new(1.0, 0.0),
        }
    }

    pub fn a0(&self) -> Complex64 {
        self.a0
    }

    pub fn a1(&self) -> Complex64 {
        self.a1
    }

    pub fn amplitudes(&self) -> [Complex64; 2] {
        [self.a0, self.a1]
    }

    pub fn norm(&self) -> f64 {
        (self.a0.norm_sqr() + self.a1.norm_sqr()).sqrt()
    }

    /// Bloch coordinates of this state, discarding global phase.
    pub fn to_angles(&self) -> BlochAngles {
        let theta = 2.0 * self.a1.norm().atan2(self.a0.norm());
        let phi = (self.a0.conj() * self.a1).arg();
        // atan2 of non-negative arguments stays in [0, π/2]
        BlochAngles::new(theta.clamp(0.0, PI), phi).expect("finite angles from a normalized state")
    }

    /// |⟨self|other⟩|²
    pub fn fidelity(&self, other: &Self) -> f64 {
        inner_product(self, other).norm_sqr()
    }
}

/// An orthonormal single-qubit basis `{up, down}` that remembers the Bloch
/// coordinates of both vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitBasis {
    up: PureQubit,
    down: PureQubit,
    up_angles: BlochAngles,
    down_angles: BlochAngles,
}

impl QubitBasis {
    /// Basis `{A(a), A(complement(a))}`.
    pub fn from_angles(angles: BlochAngles) -> Self {
        let down_angles = complement_angles(angles);
        Self {
            up: state_from_angles(angles),
            down: state_from_angles(down_angles),
            up_angles: angles,
            down_angles,
        }
    }

    pub fn from_theta_phi(theta: f64, phi: f64) -> Result<Self> {
        Ok(Self::from_angles(BlochAngles::new(theta, phi)?))
    }

    /// Basis from explicit vectors; rejects non-orthogonal pairs.
    pub fn new(up: PureQubit, down: PureQubit) -> Result<Self> {
        let overlap = inner_product(&up, &down).norm();
        if overlap > NORM_TOL {
            return Err(Error::NotOrthonormal { overlap });
        }
        Ok(Self {
            up,
            down,
            up_angles: up.to_angles(),
            down_angles: down.to_angles(),
        })
    }

    pub fn computational() -> Self {
        Self::new(PureQubit::ket0(), PureQubit::ket1()).expect("computational basis")
    }

    pub fn up(&self) -> PureQubit {
        self.up
    }

    pub fn down(&self) -> PureQubit {
        self.down
    }

    pub fn up_angles(&self) -> BlochAngles {
        self.up_angles
    }

    pub fn down_angles(&self) -> BlochAngles {
        self.down_angles
    }

    pub fn vectors(&self) -> [PureQubit; 2] {
        [self.up, self.down]
    }

    pub fn is_degenerate(&self) -> bool {
        self.up_angles.is_degenerate()
    }
}

/// Two-qubit pure state, amplitude index `2·q0 + q1` with q0 the left factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitState {
    amps: [Complex64; 4],
}

impl TwoQubitState {
    pub fn new(amps: [Complex64; 4]) -> Result<Self> {
        Self::normalized_within(amps, NORM_TOL)
    }

    /// Accepts `amps` when `|Σ|a|² − 1| ≤ tol`.
    pub fn normalized_within(amps: [Complex64; 4], tol: f64) -> Result<Self> {
        let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if !norm_sqr.is_finite() || (norm_sqr - 1.0).abs() > tol {
            return Err(Error::NotNormalized { norm_sqr, tol });
        }
        Ok(Self { amps })
    }

    pub fn amps(&self) -> &[Complex64; 4] {
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

pub fn state_from_angles(angles: BlochAngles) -> PureQubit {
    let half = 0.5 * angles.theta;
    PureQubit {
        a0: Complex64::new(half.cos(), 0.0),
        a1: Complex64::from_polar(half.sin(), angles.phi),
    }
}

/// Antipode (π − θ, φ + π).
pub fn complement_angles(angles: BlochAngles) -> BlochAngles {
    BlochAngles {
        theta: PI - angles.theta,
        phi: normalize_phase(angles.phi + PI),
    }
}

/// ⟨x|y⟩, antilinear in `x`.
pub fn inner_product(x: &PureQubit, y: &PureQubit) -> Complex64 {
    x.a0.conj() * y.a0 + x.a1.conj() * y.a1
}

/// Closed form of `⟨A(p)|A(q)⟩`:
/// `cos(θp/2)cos(θq/2) + e^{i(φq−φp)} sin(θp/2)sin(θq/2)`.
pub fn angles_inner_product(p: BlochAngles, q: BlochAngles) -> Complex64 {
    let (sp, cp) = (0.5 * p.theta).sin_cos();
    let (sq, cq) = (0.5 * q.theta).sin_cos();
    Complex64::new(cp * cq, 0.0) + Complex64::from_polar(sp * sq, q.phi - p.phi)
}

pub fn tensor(x: &PureQubit, y: &PureQubit) -> TwoQubitState {
    let xs = x.amplitudes();
    let ys = y.amplitudes();
    let mut amps = [Complex64::new(0.0, 0.0); 4];
    for (i, xi) in xs.iter().enumerate() {
        for (j, yj) in ys.iter().enumerate() {
            amps[2 * i + j] = xi * yj;
        }
    }
    TwoQubitState { amps }
}
