#![allow(dead_code)]

use std::f64::consts::PI;

use rand::Rng;
use xduce_core::transducer::{Mode, ModeLabel, TransducerConfig};

/// Telecom pump/signal around 193.5 THz with a 9 GHz microwave mode.
pub fn config(ka: (f64, f64), kb: (f64, f64), g_eo: f64) -> TransducerConfig {
    TransducerConfig::new(
        Mode::new(ModeLabel::A, 2.0 * PI * 193.5e12, ka.0, ka.1).unwrap(),
        Mode::new(ModeLabel::B, 2.0 * PI * 9e9, kb.0, kb.1).unwrap(),
        Mode::new(ModeLabel::P, 2.0 * PI * 193.5e12, 2.0 * PI * 50e6, 2.0 * PI * 50e6).unwrap(),
        g_eo,
    )
    .unwrap()
}

pub fn log_uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo.ln()..hi.ln()).exp()
}

/// Random configuration: total rates log-uniform in [1e2, 1e10] rad/s,
/// extraction fractions uniform in [0, 1] (kept away from exactly zero so
/// the extraction product is well defined).
pub fn random_config<R: Rng>(rng: &mut R) -> TransducerConfig {
    let ka = log_uniform(rng, 1e2, 1e10);
    let kb = log_uniform(rng, 1e2, 1e10);
    let fa: f64 = rng.random_range(1e-3..=1.0);
    let fb: f64 = rng.random_range(1e-3..=1.0);
    let g = log_uniform(rng, 1e-1, 1e4);
    config((ka * (1.0 - fa), ka * fa), (kb * (1.0 - fb), kb * fb), g)
}

/// Exact probability that two independent Poisson(mu) counts contain a
/// (1, 1) pair or any count >= 2, by summing the joint pmf over N <= 20.
pub fn truncated_poisson_error(mu: f64) -> f64 {
    let pmf = |k: u32| {
        let mut p = (-mu).exp();
        for j in 1..=k {
            p *= mu / f64::from(j);
        }
        p
    };
    let mut total = 0.0;
    for na in 0..=20u32 {
        for nb in 0..=20u32 {
            if (na == 1 && nb == 1) || na >= 2 || nb >= 2 {
                total += pmf(na) * pmf(nb);
            }
        }
    }
    total
}
