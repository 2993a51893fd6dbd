//! Scalar maximization of the conversion efficiency over pump power.

use crate::transducer::{self, DriveCondition, TransducerConfig};
use crate::{Error, Result, Scheme};

const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoldenResult {
    pub x: f64,
    pub fx: f64,
    pub iterations: usize,
}

/// Golden-section search for the maximum of a unimodal `f` on `[a, b]`.
/// Stops once the bracket is narrower than `tol` or after `max_iter`
/// shrink steps.
pub fn golden_section_max<F>(f: F, mut a: f64, mut b: f64, tol: f64, max_iter: usize) -> GoldenResult
where
    F: Fn(f64) -> f64,
{
    if a > b {
        std::mem::swap(&mut a, &mut b);
    }
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut iterations = 0;
    while (b - a) > tol && iterations < max_iter {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
        iterations += 1;
    }
    let (x, fx) = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    GoldenResult { x, fx, iterations }
}

/// Optimal pump power and the efficiency reached there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EfficiencyOptimum {
    pub pump_power: f64,
    pub eta: f64,
    pub iterations: usize,
}

fn eta_at(cfg: &TransducerConfig, detuning: f64, power: f64) -> Result<f64> {
    let drive = DriveCondition::new(power, detuning, Scheme::Red)?;
    Ok(transducer::evaluate(cfg, &drive)?.1.eta)
}

/// Maximizes `eta(P)` over a pump-power bracket `[lo, hi]` with `lo > 0`.
///
/// The search runs in `ln P`: with `C` proportional to `P`, the internal
/// efficiency is `sech^2(ln(C) / 2)`, a symmetric peak in log power, which
/// keeps the location resolvable to ~1e-8 relative even for brackets
/// spanning many decades. The bracket is accepted only if the finite
/// difference slope is positive at `lo` and negative at `hi`.
pub fn maximize_efficiency(cfg: &TransducerConfig, pump_detuning: f64, bracket: [f64; 2]) -> Result<EfficiencyOptimum> {
    let [lo, hi] = bracket;
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::domain(format!("pump bracket must satisfy 0 < lo < hi, got [{lo}, {hi}]")));
    }
    if cfg.g_eo() == 0.0 {
        return Err(Error::NoCriticalPoint);
    }
    let h = 1e-4;
    let slope = |p: f64| -> Result<f64> { Ok(eta_at(cfg, pump_detuning, p * (1.0 + h))? - eta_at(cfg, pump_detuning, p * (1.0 - h))?) };
    if !(slope(lo)? > 0.0 && slope(hi)? < 0.0) {
        return Err(Error::Bracketing { lo, hi });
    }

    let objective = |t: f64| eta_at(cfg, pump_detuning, t.exp()).unwrap_or(f64::NEG_INFINITY);
    let r = golden_section_max(objective, lo.ln(), hi.ln(), 1e-10, 200);
    let pump_power = r.x.exp();
    Ok(EfficiencyOptimum { pump_power, eta: eta_at(cfg, pump_detuning, pump_power)?, iterations: r.iterations })
}
