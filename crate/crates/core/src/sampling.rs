//! Seeded random draws shared by the generators and the trial campaigns.
//!
//! Every trial owns its own ChaCha stream selected by the trial index, so a
//! campaign gives the same per-trial values whether it runs serially or in
//! parallel.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::signal::Signal;

/// Retry cap for rejection sampling of degenerate draws.
pub const MAX_RETRIES: usize = 64;

/// Endpoint magnitude floor used by the endpoint-safe sampler.
pub const ENDPOINT_FLOOR: f64 = 0.1;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream for trial `index` of a campaign seeded with `seed`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Entries i.i.d. uniform on `[-1, 1]`.
pub fn uniform_signal<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Signal {
    assert!(len > 0, "signal length must be positive");
    Signal::from_vec_unchecked((0..len).map(|_| rng.gen_range(-1.0..=1.0)).collect())
}

/// Uniform `[-1, 1]` entries with both endpoints resampled until their
/// magnitude exceeds [`ENDPOINT_FLOOR`].
pub fn endpoint_safe_signal<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Signal {
    let mut v = uniform_signal(rng, len).into_vec();
    let last = len - 1;
    for idx in [0, last] {
        while v[idx].abs() <= ENDPOINT_FLOOR {
            v[idx] = rng.gen_range(-1.0..=1.0);
        }
    }
    Signal::from_vec_unchecked(v)
}

/// Uniform signal whose largest entry has magnitude above `floor`.
pub fn nonzero_signal<R: Rng + ?Sized>(
    rng: &mut R,
    len: usize,
    floor: f64,
    context: &'static str,
) -> Result<Signal> {
    for _ in 0..MAX_RETRIES {
        let s = uniform_signal(rng, len);
        if s.max_abs() > floor {
            return Ok(s);
        }
    }
    Err(Error::DegenerateDraws {
        attempts: MAX_RETRIES,
        context,
    })
}

/// Uniform signal on the dyadic grid `k / 2^20`, `|k| <= 2^20`.
///
/// Products and short sums of such values are exact in double precision,
/// which lets tests demand exact cancellation.
pub fn dyadic_signal<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Signal {
    const DENOM: i64 = 1 << 20;
    Signal::from_vec_unchecked(
        (0..len)
            .map(|_| rng.gen_range(-DENOM..=DENOM) as f64 / DENOM as f64)
            .collect(),
    )
}
