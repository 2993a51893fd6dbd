//! Heralded entanglement between two remote transducers.
//!
//! Each microwave cavity emits photons as a Poisson process with rate `r0`
//! over a window `dt`, giving a per-cavity mean `mu = r0 * dt`. The analytic
//! breakdowns below implement the heralding probability model exactly as
//! stated for each scheme, approximations included:
//!
//! - blue: `P1 = mu e^-mu`, `P0 = e^-mu`, `P11 = P1^2`,
//!   `Pmn = 2 (1 - P0 - P1)`, infidelity `Pmn + P11`. `Pmn` counts the
//!   multi-photon tail once per cavity, a union bound.
//! - red: `P0 = 1 - e^-mu`, `P11 = (1 - P0)^2`, infidelity `P11`.
//!
//! NOTE: the red-scheme `P0` is labelled "no photon generated" in the model
//! yet equals the Poisson probability of *at least one* photon. As written,
//! red infidelity is `e^(-2 mu)`, which falls as the rate grows, opposite to
//! the blue case. It is kept verbatim and not corrected here.
//!
//! [`mc_blue_infidelity`] samples the two Poisson counts directly and scores
//! the exact error events, which quantifies how far the union-bound term
//! drifts from the exact classification.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::{Error, Result, Scheme};

/// Trials per RNG stream. Streams are indexed by chunk, so the result does
/// not depend on how chunks are spread across threads.
pub const MC_CHUNK: u64 = 1 << 16;

/// Poisson means at or above this are outside the heralding regime.
pub const MAX_MU: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HeraldModel {
    /// Photon generation rate, 1/s.
    pub r0: f64,
    /// Heralding window, s.
    pub dt: f64,
    pub scheme: Scheme,
}

impl HeraldModel {
    pub fn new(r0: f64, dt: f64, scheme: Scheme) -> Result<Self> {
        if !(r0 >= 0.0 && r0.is_finite()) {
            return Err(Error::domain(format!("r0 must be >= 0, got {r0}")));
        }
        if !(dt >= 0.0 && dt.is_finite()) {
            return Err(Error::domain(format!("dt must be >= 0, got {dt}")));
        }
        Ok(Self { r0, dt, scheme })
    }

    /// Single-cavity Poisson mean `r0 * dt`.
    pub fn mu(&self) -> f64 {
        self.r0 * self.dt
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HeraldBreakdown {
    pub p0: f64,
    pub p1: f64,
    pub p11: f64,
    pub pmn: f64,
    pub infidelity: f64,
    pub scheme: Scheme,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub samples: u64,
    pub infidelity_mean: f64,
    pub standard_error: f64,
    pub seed: u64,
}

fn expect_scheme(m: &HeraldModel, expected: Scheme) -> Result<()> {
    if m.scheme != expected {
        return Err(Error::WrongScheme { expected, got: m.scheme });
    }
    Ok(())
}

pub fn blue_breakdown(m: &HeraldModel) -> Result<HeraldBreakdown> {
    expect_scheme(m, Scheme::Blue)?;
    let mu = m.mu();
    let p0 = (-mu).exp();
    let p1 = mu * p0;
    let p11 = p1 * p1;
    let pmn = 2.0 * (1.0 - p0 - p1);
    Ok(HeraldBreakdown { p0, p1, p11, pmn, infidelity: pmn + p11, scheme: Scheme::Blue })
}

/// Red-detuned breakdown. Only `p0` and `p11` are defined by the model;
/// `p1` and `pmn` are reported as zero since the scheme cannot place more
/// than one photon per cavity.
pub fn red_breakdown(m: &HeraldModel) -> Result<HeraldBreakdown> {
    expect_scheme(m, Scheme::Red)?;
    let p0 = 1.0 - (-m.mu()).exp();
    let p11 = (1.0 - p0) * (1.0 - p0);
    Ok(HeraldBreakdown { p0, p1: 0.0, p11, pmn: 0.0, infidelity: p11, scheme: Scheme::Red })
}

pub fn breakdown(m: &HeraldModel) -> Result<HeraldBreakdown> {
    match m.scheme {
        Scheme::Blue => blue_breakdown(m),
        Scheme::Red => red_breakdown(m),
    }
}

/// Inversion by sequential search. Exact for the supported range of `mu`.
pub fn sample_poisson<R: Rng + ?Sized>(rng: &mut R, mu: f64) -> u32 {
    let u: f64 = rng.random();
    let mut k = 0u32;
    let mut p = (-mu).exp();
    let mut cdf = p;
    // cdf saturates below 1 in floating point; the cap sits far in the tail
    while u >= cdf && k < 200 {
        k += 1;
        p *= mu / f64::from(k);
        cdf += p;
    }
    k
}

#[derive(Default, Clone, Copy)]
struct EventCounts {
    both_one: u64,
    any_multi: u64,
}

impl EventCounts {
    fn merge(self, o: Self) -> Self {
        Self { both_one: self.both_one + o.both_one, any_multi: self.any_multi + o.any_multi }
    }
}

fn run_chunk(seed: u64, chunk: u64, trials: u64, mu: f64) -> EventCounts {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    let mut counts = EventCounts::default();
    for _ in 0..trials {
        let na = sample_poisson(&mut rng, mu);
        let nb = sample_poisson(&mut rng, mu);
        if na >= 2 || nb >= 2 {
            counts.any_multi += 1;
        } else if na == 1 && nb == 1 {
            counts.both_one += 1;
        }
    }
    counts
}

/// Monte Carlo estimate of the blue-scheme error probability
/// `P(both cavities emit one) + P(either emits two or more)`.
///
/// Trials are split into fixed chunks of [`MC_CHUNK`], each with its own
/// ChaCha8 stream keyed by `(seed, chunk index)`; counts are integers summed
/// after the fact, so the estimate is bit-identical for any thread count.
pub fn mc_blue_infidelity(m: &HeraldModel, samples: u64, seed: u64) -> Result<McEstimate> {
    expect_scheme(m, Scheme::Blue)?;
    if samples == 0 {
        return Err(Error::Usage("Monte Carlo needs at least one sample".into()));
    }
    let mu = m.mu();
    if mu >= MAX_MU {
        return Err(Error::OutOfRegime { mu });
    }
    let chunks = samples.div_ceil(MC_CHUNK);
    let counts = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let trials = MC_CHUNK.min(samples - c * MC_CHUNK);
            run_chunk(seed, c, trials, mu)
        })
        .reduce(EventCounts::default, EventCounts::merge);

    let n = samples as f64;
    let hits = (counts.both_one + counts.any_multi) as f64;
    let mean = hits / n;
    // sample standard deviation of the 0/1 indicator
    let standard_error = if samples > 1 {
        let var = (hits - n * mean * mean) / (n - 1.0);
        (var.max(0.0) / n).sqrt()
    } else {
        0.0
    };
    Ok(McEstimate { samples, infidelity_mean: mean, standard_error, seed })
}

/// Probability that a stored microwave photon is lost to intrinsic decay
/// during `hold_time`: `1 - exp(-kappa_b_i * hold_time)`.
///
/// This is a memory-decay extension and is not part of the heralding
/// breakdowns above.
pub fn storage_loss_infidelity(kappa_b_i: f64, hold_time: f64) -> Result<f64> {
    if !(kappa_b_i >= 0.0) {
        return Err(Error::domain(format!("kappa_b_i must be >= 0, got {kappa_b_i}")));
    }
    if !(hold_time >= 0.0) {
        return Err(Error::domain(format!("hold_time must be >= 0, got {hold_time}")));
    }
    Ok(-(-kappa_b_i * hold_time).exp_m1())
}
