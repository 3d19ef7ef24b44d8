//! Seeded Bloch-uniform sampling.
//!
//! Every sample index gets its own ChaCha stream under the run seed, so batch
//! output does not depend on evaluation order or thread count.

use std::f64::consts::{FRAC_PI_2, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bloch::BlochAngles;

/// Generator for sample `index` of a run seeded with `seed`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Point drawn uniformly over the sphere surface: cos θ uniform on [−1, 1],
/// φ uniform on [0, 2π).
pub fn bloch_uniform<R: Rng + ?Sized>(rng: &mut R) -> BlochAngles {
    let z: f64 = rng.gen_range(-1.0..=1.0);
    let phi: f64 = rng.gen_range(0.0..TAU);
    BlochAngles::new(z.acos(), phi).expect("sampled angles are in range")
}

/// Bloch-uniform point at least `min_offset` away from the equator in θ.
pub fn bloch_uniform_off_equator<R: Rng + ?Sized>(rng: &mut R, min_offset: f64) -> BlochAngles {
    loop {
        let a = bloch_uniform(rng);
        if (a.theta() - FRAC_PI_2).abs() >= min_offset {
            return a;
        }
    }
}
