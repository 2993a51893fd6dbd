//! Pump-power by microwave-Q sweeps.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::herald::{self, HeraldModel, MAX_MU};
use crate::transducer::{self, DriveCondition, TransducerConfig};
use crate::{Error, Result, Scheme};

/// Log grids get this many points per decade by default.
pub const LOG_POINTS_PER_DECADE: usize = 200;
pub const MAX_DEFAULT_POINTS: usize = 2000;
pub const LINEAR_DEFAULT_POINTS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerAxis {
    pub min: f64,
    pub max: f64,
    /// `None` selects the default density for the spacing.
    pub points: Option<usize>,
    pub spacing: Spacing,
}

impl PowerAxis {
    pub fn validate(&self) -> Result<()> {
        if !(self.min >= 0.0 && self.max.is_finite()) {
            return Err(Error::domain(format!("power axis needs 0 <= min, finite max; got [{}, {}]", self.min, self.max)));
        }
        if self.spacing == Spacing::Log && self.min <= 0.0 {
            return Err(Error::domain("log power axis needs min > 0"));
        }
        match self.points {
            // a single point is only meaningful as a degenerate axis
            Some(1) if self.min == self.max => Ok(()),
            Some(n) if n < 2 => Err(Error::domain(format!("power axis needs at least 2 points, got {n}"))),
            _ if self.min >= self.max => {
                Err(Error::domain(format!("power axis needs min < max, got [{}, {}]", self.min, self.max)))
            }
            _ => Ok(()),
        }
    }

    pub fn resolved_points(&self) -> usize {
        match (self.points, self.spacing) {
            (Some(n), _) => n,
            (None, Spacing::Linear) => LINEAR_DEFAULT_POINTS,
            (None, Spacing::Log) => {
                let decades = (self.max / self.min).log10();
                ((decades * LOG_POINTS_PER_DECADE as f64).ceil() as usize + 1).clamp(2, MAX_DEFAULT_POINTS)
            }
        }
    }

    pub fn grid(&self) -> Result<Vec<f64>> {
        self.validate()?;
        let n = self.resolved_points();
        if n == 1 {
            return Ok(vec![self.min]);
        }
        let last = (n - 1) as f64;
        let mut out: Vec<f64> = match self.spacing {
            Spacing::Linear => (0..n).map(|i| self.min + (self.max - self.min) * i as f64 / last).collect(),
            Spacing::Log => {
                let (a, b) = (self.min.log10(), self.max.log10());
                (0..n).map(|i| 10f64.powf(a + (b - a) * i as f64 / last)).collect()
            }
        };
        out[0] = self.min;
        out[n - 1] = self.max;
        Ok(out)
    }
}

/// How the heralding photon rate is obtained for each row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum R0Mapping {
    /// Fixed rate, 1/s.
    Direct(f64),
    /// Modeling assumption `r0 = C * kappa_b`, the weak-pump pair rate.
    CKappaB,
}

impl R0Mapping {
    pub fn describe(&self) -> String {
        match self {
            R0Mapping::Direct(v) => format!("direct r0 = {v} 1/s"),
            R0Mapping::CKappaB => "c_kappa_b (assumption: r0 = C * kappa_b)".to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HeraldOptions {
    /// Heralding window, s.
    pub dt: f64,
    pub r0: R0Mapping,
    pub scheme: Scheme,
}

impl HeraldOptions {
    /// Heralding model for one operating point.
    pub fn model(&self, cfg: &TransducerConfig, cooperativity: f64) -> Result<HeraldModel> {
        let r0 = match self.r0 {
            R0Mapping::Direct(v) => v,
            R0Mapping::CKappaB => cooperativity * cfg.mode_b().kappa_total(),
        };
        let m = HeraldModel::new(r0, self.dt, self.scheme)?;
        if m.mu() >= MAX_MU {
            return Err(Error::OutOfRegime { mu: m.mu() });
        }
        Ok(m)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct SweepOutputs {
    pub efficiency: bool,
    pub cooperativity: bool,
    pub infidelity: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSpec {
    pub base: TransducerConfig,
    /// rad/s
    pub pump_detuning: f64,
    pub power_axis: PowerAxis,
    /// Loaded microwave quality factors. Each value rescales both loss
    /// channels of mode b, keeping its extraction ratio.
    pub q_axis: Vec<f64>,
    pub outputs: SweepOutputs,
    pub herald: Option<HeraldOptions>,
}

/// One operating point. Field names double as the CSV header.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub pump_power_w: f64,
    pub q_b: f64,
    pub n_p: f64,
    pub cooperativity: f64,
    pub eta_internal: f64,
    pub eta: f64,
    pub infidelity: Option<f64>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        self.power_axis.validate()?;
        if self.q_axis.is_empty() {
            return Err(Error::domain("q axis is empty"));
        }
        if let Some(q) = self.q_axis.iter().find(|q| !(**q > 0.0 && q.is_finite())) {
            return Err(Error::domain(format!("q values must be positive and finite, got {q}")));
        }
        if self.outputs.infidelity && self.herald.is_none() {
            return Err(Error::domain("infidelity requested without herald options"));
        }
        Ok(())
    }

    /// Q values in row order.
    pub fn sorted_q(&self) -> Vec<f64> {
        let mut qs = self.q_axis.clone();
        qs.sort_by(f64::total_cmp);
        qs
    }
}

fn row(spec: &SweepSpec, cfg: &TransducerConfig, q_b: f64, power: f64) -> Result<SweepRow> {
    let drive = DriveCondition::new(power, spec.pump_detuning, Scheme::Red)?;
    let (n_p, br) = transducer::evaluate(cfg, &drive)?;
    let infidelity = match (&spec.herald, spec.outputs.infidelity) {
        (Some(h), true) => Some(herald::breakdown(&h.model(cfg, br.cooperativity)?)?.infidelity),
        _ => None,
    };
    Ok(SweepRow {
        pump_power_w: power,
        q_b,
        n_p,
        cooperativity: br.cooperativity,
        eta_internal: br.eta_internal,
        eta: br.eta,
        infidelity,
    })
}

/// Evaluates every (Q, power) pair. Rows come back ordered by Q, then power.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let powers = spec.power_axis.grid()?;
    let mut points = Vec::with_capacity(powers.len() * spec.q_axis.len());
    for q in spec.sorted_q() {
        let cfg = spec.base.with_mode_b(spec.base.mode_b().with_loaded_q(q)?)?;
        points.extend(powers.iter().map(|&p| (q, p, cfg)));
    }
    points
        .par_iter()
        .map(|&(q, p, cfg)| {
            row(spec, &cfg, q, p).map_err(|e| Error::SweepRow { pump_power: p, q_b: q, source: Box::new(e) })
        })
        .collect()
}

/// Blue-scheme heralding infidelity along a power axis:
/// `P -> n_p -> C -> r0 -> mu -> infidelity`.
pub fn infidelity_curve(
    cfg: &TransducerConfig,
    pump_detuning: f64,
    powers: &[f64],
    herald_opts: &HeraldOptions,
) -> Result<Vec<(f64, f64)>> {
    if herald_opts.scheme != Scheme::Blue {
        return Err(Error::WrongScheme { expected: Scheme::Blue, got: herald_opts.scheme });
    }
    powers
        .iter()
        .map(|&p| {
            let drive = DriveCondition::new(p, pump_detuning, Scheme::Blue)?;
            let (_, br) = transducer::evaluate(cfg, &drive)?;
            let m = herald_opts.model(cfg, br.cooperativity)?;
            Ok((p, herald::blue_breakdown(&m)?.infidelity))
        })
        .collect()
}
