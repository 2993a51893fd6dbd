//! Closed-form transducer physics.
//!
//! Every mode stores its loss as an (intrinsic, external) pair so that the
//! extraction ratio `kappa_ex / kappa` is always defined. Rates are angular
//! and represent full-width energy decay rates.

use serde::{Deserialize, Serialize};

use crate::{Error, Result, Scheme};

/// Reduced Planck constant, CODATA 2018 (J·s).
pub const HBAR: f64 = 1.054_571_817e-34;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeLabel {
    /// Optical signal.
    A,
    /// Microwave.
    B,
    /// Optical pump.
    P,
}

impl std::fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ModeLabel::A => "a",
            ModeLabel::B => "b",
            ModeLabel::P => "p",
        })
    }
}

/// One resonant mode with its loss split into intrinsic and external parts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mode {
    label: ModeLabel,
    omega: f64,
    kappa_i: f64,
    kappa_ex: f64,
}

impl Mode {
    pub fn new(label: ModeLabel, omega: f64, kappa_i: f64, kappa_ex: f64) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::domain(format!("mode {label}: omega must be > 0, got {omega}")));
        }
        if !(kappa_i.is_finite() && kappa_i >= 0.0) {
            return Err(Error::domain(format!("mode {label}: kappa_i must be >= 0, got {kappa_i}")));
        }
        if !(kappa_ex.is_finite() && kappa_ex >= 0.0) {
            return Err(Error::domain(format!(
                "mode {label}: kappa_ex must be >= 0, got {kappa_ex}"
            )));
        }
        if kappa_i + kappa_ex <= 0.0 {
            return Err(Error::domain(format!("mode {label}: total loss rate must be > 0")));
        }
        Ok(Self { label, omega, kappa_i, kappa_ex })
    }

    /// Builds a mode from intrinsic and external quality factors. An infinite
    /// quality factor means the corresponding loss channel is absent.
    pub fn from_q(label: ModeLabel, omega: f64, q_i: f64, q_ex: f64) -> Result<Self> {
        Self::new(label, omega, q_to_kappa(omega, q_i)?, q_to_kappa(omega, q_ex)?)
    }

    pub fn label(&self) -> ModeLabel {
        self.label
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn kappa_i(&self) -> f64 {
        self.kappa_i
    }

    pub fn kappa_ex(&self) -> f64 {
        self.kappa_ex
    }

    pub fn kappa_total(&self) -> f64 {
        self.kappa_i + self.kappa_ex
    }

    /// Fraction of the decay routed into the external port.
    pub fn extraction(&self) -> f64 {
        self.kappa_ex / self.kappa_total()
    }

    /// Loaded quality factor `omega / kappa`.
    pub fn loaded_q(&self) -> f64 {
        self.omega / self.kappa_total()
    }

    /// Same mode with both loss channels scaled so that the loaded Q equals
    /// `q`. The extraction ratio is preserved.
    pub fn with_loaded_q(&self, q: f64) -> Result<Self> {
        let scale = q_to_kappa(self.omega, q)? / self.kappa_total();
        Self::new(self.label, self.omega, self.kappa_i * scale, self.kappa_ex * scale)
    }
}

/// Signal, microwave and pump modes plus the vacuum electro-optic coupling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransducerConfig {
    mode_a: Mode,
    mode_b: Mode,
    mode_p: Mode,
    g_eo: f64,
}

impl TransducerConfig {
    pub fn new(mode_a: Mode, mode_b: Mode, mode_p: Mode, g_eo: f64) -> Result<Self> {
        let expected = [
            (mode_a.label, ModeLabel::A),
            (mode_b.label, ModeLabel::B),
            (mode_p.label, ModeLabel::P),
        ];
        for (got, want) in expected {
            if got != want {
                return Err(Error::domain(format!("mode in slot {want} is labelled {got}")));
            }
        }
        if !(g_eo.is_finite() && g_eo >= 0.0) {
            return Err(Error::domain(format!("g_eo must be >= 0, got {g_eo}")));
        }
        Ok(Self { mode_a, mode_b, mode_p, g_eo })
    }

    pub fn mode_a(&self) -> &Mode {
        &self.mode_a
    }

    pub fn mode_b(&self) -> &Mode {
        &self.mode_b
    }

    pub fn mode_p(&self) -> &Mode {
        &self.mode_p
    }

    pub fn g_eo(&self) -> f64 {
        self.g_eo
    }

    /// Copy with the microwave mode replaced.
    pub fn with_mode_b(&self, mode_b: Mode) -> Result<Self> {
        Self::new(self.mode_a, mode_b, self.mode_p, self.g_eo)
    }

    pub fn with_g_eo(&self, g_eo: f64) -> Result<Self> {
        Self::new(self.mode_a, self.mode_b, self.mode_p, g_eo)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriveCondition {
    /// W
    pub pump_power: f64,
    /// Pump laser frequency minus pump-mode resonance, rad/s.
    pub pump_detuning: f64,
    pub scheme: Scheme,
}

impl DriveCondition {
    pub fn new(pump_power: f64, pump_detuning: f64, scheme: Scheme) -> Result<Self> {
        if !(pump_power.is_finite() && pump_power >= 0.0) {
            return Err(Error::domain(format!("pump power must be >= 0, got {pump_power}")));
        }
        if !pump_detuning.is_finite() {
            return Err(Error::domain("pump detuning must be finite"));
        }
        Ok(Self { pump_power, pump_detuning, scheme })
    }
}

/// Terms of the conversion efficiency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EfficiencyBreakdown {
    pub extraction_a: f64,
    pub extraction_b: f64,
    pub cooperativity: f64,
    pub eta_internal: f64,
    pub eta: f64,
}

/// `kappa = omega / Q`.
pub fn q_to_kappa(omega: f64, q: f64) -> Result<f64> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::domain(format!("omega must be > 0, got {omega}")));
    }
    if !(q > 0.0) {
        return Err(Error::domain(format!("Q must be > 0, got {q}")));
    }
    Ok(omega / q)
}

/// Photon lifetime `1 / kappa`.
pub fn kappa_to_lifetime(kappa: f64) -> Result<f64> {
    if !(kappa > 0.0) {
        return Err(Error::domain(format!("kappa must be > 0, got {kappa}")));
    }
    Ok(1.0 / kappa)
}

/// Steady-state intracavity pump photon number for a coherent drive of power
/// `P` through the pump's external port:
///
/// `n_p = kappa_ex * P / (hbar * omega_p * ((kappa/2)^2 + detuning^2))`
pub fn intracavity_photon_number(mode_p: &Mode, drive: &DriveCondition) -> f64 {
    if drive.pump_power == 0.0 {
        return 0.0;
    }
    let half = 0.5 * mode_p.kappa_total();
    let lorentzian = half * half + drive.pump_detuning * drive.pump_detuning;
    mode_p.kappa_ex() * drive.pump_power / (HBAR * mode_p.omega() * lorentzian)
}

/// `C = 4 n_p g_eo^2 / (kappa_a kappa_b)` using total loss rates.
pub fn cooperativity(cfg: &TransducerConfig, n_p: f64) -> Result<f64> {
    if !(n_p >= 0.0) {
        return Err(Error::domain(format!("n_p must be >= 0, got {n_p}")));
    }
    let denom = cfg.mode_a.kappa_total() * cfg.mode_b.kappa_total();
    if denom == 0.0 {
        return Err(Error::domain("kappa_a * kappa_b is zero"));
    }
    if n_p == 0.0 || cfg.g_eo == 0.0 {
        return Ok(0.0);
    }
    Ok(4.0 * n_p * cfg.g_eo * cfg.g_eo / denom)
}

/// `4C / (1 + C)^2`, unity at critical coupling.
pub fn internal_efficiency(c: f64) -> Result<f64> {
    if !(c >= 0.0) {
        return Err(Error::domain(format!("cooperativity must be >= 0, got {c}")));
    }
    if c.is_infinite() {
        return Ok(0.0);
    }
    let one_plus = 1.0 + c;
    Ok(4.0 * c / (one_plus * one_plus))
}

pub fn conversion_efficiency(cfg: &TransducerConfig, n_p: f64) -> Result<EfficiencyBreakdown> {
    let c = cooperativity(cfg, n_p)?;
    let eta_internal = internal_efficiency(c)?;
    let extraction_a = cfg.mode_a.extraction();
    let extraction_b = cfg.mode_b.extraction();
    Ok(EfficiencyBreakdown {
        extraction_a,
        extraction_b,
        cooperativity: c,
        eta_internal,
        eta: extraction_a * extraction_b * eta_internal,
    })
}

/// Pump photon number at which `C = 1`.
pub fn critical_photon_number(cfg: &TransducerConfig) -> Result<f64> {
    if cfg.g_eo == 0.0 {
        return Err(Error::NoCriticalPoint);
    }
    Ok(cfg.mode_a.kappa_total() * cfg.mode_b.kappa_total() / (4.0 * cfg.g_eo * cfg.g_eo))
}

/// Pump power that builds up the critical photon number at the given pump
/// detuning (rad/s).
pub fn critical_pump_power(cfg: &TransducerConfig, pump_detuning: f64) -> Result<f64> {
    let n_crit = critical_photon_number(cfg)?;
    let p = &cfg.mode_p;
    if p.kappa_ex() == 0.0 {
        return Err(Error::UndriveablePump);
    }
    let half = 0.5 * p.kappa_total();
    let lorentzian = half * half + pump_detuning * pump_detuning;
    Ok(n_crit * HBAR * p.omega() * lorentzian / p.kappa_ex())
}

/// Pump photon number and efficiency breakdown for a drive condition.
pub fn evaluate(cfg: &TransducerConfig, drive: &DriveCondition) -> Result<(f64, EfficiencyBreakdown)> {
    let n_p = intracavity_photon_number(&cfg.mode_p, drive);
    Ok((n_p, conversion_efficiency(cfg, n_p)?))
}
