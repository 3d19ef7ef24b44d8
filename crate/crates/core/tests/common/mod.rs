//! Dense brute-force oracles shared by the integration tests.
//!
//! Nothing here calls into the library's state construction, swap, partial
//! trace or eigen routines: kets are written out from the Bloch formula,
//! machine outputs from explicit coordinate substitution, reduced states from
//! full 16×16 projector arithmetic, and trace norms from a real Jacobi
//! eigensolver on the 8×8 real embedding of a Hermitian matrix.

#![allow(dead_code)]

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

pub type Ket = Vec<Complex64>;
pub type Dense = Vec<Vec<Complex64>>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn ket(theta: f64, phi: f64) -> Ket {
    vec![
        c((theta / 2.0).cos(), 0.0),
        c(phi.cos(), phi.sin()) * (theta / 2.0).sin(),
    ]
}

pub fn antipode(theta: f64, phi: f64) -> (f64, f64) {
    (PI - theta, (phi + PI).rem_euclid(TAU))
}

pub fn vdot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn kron(vs: &[&[Complex64]]) -> Ket {
    let mut out = vec![c(1.0, 0.0)];
    for v in vs {
        let mut next = Vec::with_capacity(out.len() * v.len());
        for x in &out {
            for y in v.iter() {
                next.push(x * y);
            }
        }
        out = next;
    }
    out
}

pub fn kron_mat(a: &Dense, b: &Dense) -> Dense {
    let (n, m) = (a.len(), b.len());
    let mut out = vec![vec![c(0.0, 0.0); n * m]; n * m];
    for i in 0..n {
        for j in 0..n {
            for k in 0..m {
                for l in 0..m {
                    out[i * m + k][j * m + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

pub fn outer(a: &[Complex64], b: &[Complex64]) -> Dense {
    a.iter()
        .map(|x| b.iter().map(|y| x * y.conj()).collect())
        .collect()
}

pub fn matmul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    let mut out = vec![vec![c(0.0, 0.0); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == c(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn identity(n: usize) -> Dense {
    (0..n)
        .map(|i| (0..n).map(|j| c(if i == j { 1.0 } else { 0.0 }, 0.0)).collect())
        .collect()
}

/// Coordinates of one machine output pair, by direct substitution.
///
/// `kind`: "phase", "azimuthal" or "identity".
pub fn machine_coords(
    kind: &str,
    first: (f64, f64),
    second: (f64, f64),
) -> ((f64, f64), (f64, f64)) {
    match kind {
        "phase" => ((first.0, second.1), (second.0, first.1)),
        "azimuthal" => ((second.0, first.1), (first.0, second.1)),
        "identity" => (first, second),
        other => panic!("unknown machine {other}"),
    }
}

/// Term-by-term post-machine state in `(A1, B1, A2, B2)` order, unnormalized.
pub fn machine_state(kind: &str, theta: f64, phi: f64) -> Ket {
    let up = (theta, phi);
    let dn = antipode(theta, phi);
    let terms = [
        (1.0, (up, up), (dn, dn)),
        (1.0, (dn, dn), (up, up)),
        (-1.0, (up, dn), (dn, up)),
        (-1.0, (dn, up), (up, dn)),
    ];
    let mut state = vec![c(0.0, 0.0); 16];
    for (sign, (a1, a2), (b1, b2)) in terms {
        let (a1, a2) = if a1 != a2 {
            machine_coords(kind, a1, a2)
        } else {
            (a1, a2)
        };
        let k = kron(&[
            &ket(a1.0, a1.1),
            &ket(b1.0, b1.1),
            &ket(a2.0, a2.1),
            &ket(b2.0, b2.1),
        ]);
        for (s, x) in state.iter_mut().zip(k) {
            *s += x * (0.5 * sign);
        }
    }
    state
}

/// Alice's `(A1, A2)` state after Bob measures `(B1, B2)` in the basis
/// `{ket(θ, φ), ket(antipode)}`: dephase the full 16×16 density matrix with
/// the four product projectors, then trace out `B1` and `B2`.
pub fn alice_after_bob(state: &[Complex64], bob_theta: f64, bob_phi: f64) -> Dense {
    let rho = outer(state, state);
    let up = ket(bob_theta, bob_phi);
    let (t, p) = antipode(bob_theta, bob_phi);
    let dn = ket(t, p);
    let i2 = identity(2);
    let mut dephased = vec![vec![c(0.0, 0.0); 16]; 16];
    for b1 in [&up, &dn] {
        for b2 in [&up, &dn] {
            let proj = kron_mat(
                &kron_mat(&kron_mat(&i2, &outer(b1, b1)), &i2),
                &outer(b2, b2),
            );
            let term = matmul(&matmul(&proj, &rho), &proj);
            for i in 0..16 {
                for j in 0..16 {
                    dephased[i][j] += term[i][j];
                }
            }
        }
    }
    partial_trace_bob(&dephased)
}

/// Trace over `B1`, `B2` of a 16×16 matrix in `(A1, B1, A2, B2)` order.
pub fn partial_trace_bob(m: &Dense) -> Dense {
    let idx = |a1: usize, b1: usize, a2: usize, b2: usize| 8 * a1 + 4 * b1 + 2 * a2 + b2;
    let mut out = vec![vec![c(0.0, 0.0); 4]; 4];
    for a1 in 0..2 {
        for a2 in 0..2 {
            for x1 in 0..2 {
                for x2 in 0..2 {
                    for b1 in 0..2 {
                        for b2 in 0..2 {
                            out[2 * a1 + a2][2 * x1 + x2] +=
                                m[idx(a1, b1, a2, b2)][idx(x1, b1, x2, b2)];
                        }
                    }
                }
            }
        }
    }
    out
}

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.
pub fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = cs * akp - sn * akq;
                    a[k][q] = sn * akp + cs * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = cs * apk - sn * aqk;
                    a[q][k] = sn * apk + cs * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i][i]).collect()
}

/// `½ Σ|λ(a − b)|` through the real embedding `[[Re, −Im], [Im, Re]]`,
/// whose spectrum is that of the Hermitian difference with each value doubled.
pub fn trace_distance(a: &Dense, b: &Dense) -> f64 {
    let n = a.len();
    let mut real = vec![vec![0.0; 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            let d = a[i][j] - b[i][j];
            real[i][j] = d.re;
            real[i][j + n] = -d.im;
            real[i + n][j] = d.im;
            real[i + n][j + n] = d.re;
        }
    }
    0.25 * jacobi_eigenvalues(real).iter().map(|l| l.abs()).sum::<f64>()
}

/// Full signalling pipeline for two bases with Bob measuring in the basis
/// the machine used.
pub fn signalling_distance(kind: &str, b1: (f64, f64), b2: (f64, f64)) -> f64 {
    let r1 = alice_after_bob(&machine_state(kind, b1.0, b1.1), b1.0, b1.1);
    let r2 = alice_after_bob(&machine_state(kind, b2.0, b2.1), b2.0, b2.1);
    trace_distance(&r1, &r2)
}

/// `(e^{iΔφ} − e^{iΔφ̄})(s1 s2 c̄1 c̄2 − c1 c2 s̄1 s̄2)` from raw coordinates.
pub fn factored_form(a1: (f64, f64), a2: (f64, f64), b1: (f64, f64), b2: (f64, f64)) -> Complex64 {
    let h = |t: f64| ((t / 2.0).sin(), (t / 2.0).cos());
    let (s1, c1) = h(a1.0);
    let (s2, c2) = h(a2.0);
    let (sb1, cb1) = h(b1.0);
    let (sb2, cb2) = h(b2.0);
    let e = |x: f64| c(x.cos(), x.sin());
    (e(a2.1 - a1.1) - e(b2.1 - b1.1)) * (s1 * s2 * cb1 * cb2 - c1 * c2 * sb1 * sb2)
}

/// Numpy reference values for the fixed examples (see `oracle/freeze_values.py`).
pub mod frozen {
    /// Trace distance, basis (π/3, 0.2) vs (π/5, 1.1), phase machine.
    pub const PHASE_WITNESS: f64 = 0.198_516_992_840_607_7;
    /// Same pair, azimuthal machine.
    pub const AZIMUTHAL_WITNESS: f64 = 0.198_516_992_840_607_75;
    /// `|lhs − rhs|` for θ = (π/2, π/3), θ̄ = (π/4, π/5), φ = (0, 1), φ̄ = (0.3, 0.9).
    pub const GENERIC_RESIDUAL: f64 = 0.094_660_883_619_938_3;
    /// Fraction of 10³ numpy-sampled off-equator basis pairs with distance > 1e-6.
    pub const POSITIVITY_FRACTION: f64 = 1.0;
}
