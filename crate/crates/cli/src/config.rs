//! Run configuration.
//!
//! Configs are TOML. Frequencies and loss rates are given in Hz (cyclic) and
//! converted to rad/s exactly once, in [`RunConfig::normalize`]. Quality
//! factors are dimensionless and need no conversion.
//!
//! ```toml
//! [device]
//! g_eo_hz = 50.0
//!
//! [device.a]            # optical signal
//! frequency_hz = 193.5e12
//! kappa_i_hz = 100e6
//! kappa_ex_hz = 100e6
//!
//! [device.b]            # microwave; Q pair instead of kappa pair
//! frequency_hz = 9e9
//! q_i = 2e7
//! q_ex = 2e7
//!
//! [device.p]            # optical pump
//! frequency_hz = 193.5e12
//! kappa_i_hz = 50e6
//! kappa_ex_hz = 50e6
//!
//! [drive]
//! power_w = 1e-3        # or "critical"
//! detuning_hz = 0.0
//! scheme = "red"
//!
//! [herald]
//! scheme = "blue"       # defaults to the drive scheme
//! dt_s = 1e-6
//! r0_per_s = 1e5        # or: mapping = "c_kappa_b"
//!
//! [sweep]
//! power_min_w = 1e-9
//! power_max_w = 1e-2
//! points = 400          # optional
//! spacing = "log"
//! q_b = [1e6, 1e7]
//! outputs = ["efficiency", "cooperativity", "infidelity"]
//!
//! [output]
//! format = "csv"        # or "jsonl"
//! path = "sweep.csv"    # stdout when absent
//! plot = "sweep.svg"
//! plot_metric = "efficiency"
//! seed = 42
//! ```

use std::f64::consts::TAU;
use std::path::Path;

use serde::{Deserialize, Serialize};
use xduce_core::transducer::{critical_pump_power, DriveCondition, Mode, ModeLabel, TransducerConfig};
use xduce_core::{HeraldOptions, PowerAxis, R0Mapping, Scheme, Spacing, SweepOutputs};

use crate::error::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub device: Option<DeviceSection>,
    pub drive: Option<DriveSection>,
    pub herald: Option<HeraldSection>,
    pub sweep: Option<SweepSection>,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeviceSection {
    pub g_eo_hz: f64,
    pub a: ModeSection,
    pub b: ModeSection,
    pub p: ModeSection,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeSection {
    pub frequency_hz: f64,
    pub q_i: Option<f64>,
    pub q_ex: Option<f64>,
    pub kappa_i_hz: Option<f64>,
    pub kappa_ex_hz: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum PowerSetting {
    Watts(f64),
    Named(NamedPower),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NamedPower {
    Critical,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveSection {
    pub power_w: PowerSetting,
    #[serde(default)]
    pub detuning_hz: f64,
    pub scheme: Scheme,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MappingName {
    Direct,
    CKappaB,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HeraldSection {
    pub scheme: Option<Scheme>,
    pub dt_s: f64,
    pub r0_per_s: Option<f64>,
    pub mapping: Option<MappingName>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputKind {
    Efficiency,
    Cooperativity,
    Infidelity,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub power_min_w: f64,
    pub power_max_w: f64,
    pub points: Option<usize>,
    #[serde(default = "default_spacing")]
    pub spacing: Spacing,
    pub q_b: Vec<f64>,
    #[serde(default = "default_outputs")]
    pub outputs: Vec<OutputKind>,
}

fn default_spacing() -> Spacing {
    Spacing::Log
}

fn default_outputs() -> Vec<OutputKind> {
    vec![OutputKind::Efficiency, OutputKind::Cooperativity]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Jsonl,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub format: Option<Format>,
    pub path: Option<String>,
    pub plot: Option<String>,
    pub plot_metric: Option<OutputKind>,
    pub seed: Option<u64>,
}

/// Config with every rate in rad/s and every choice resolved.
#[derive(Debug, Clone, Serialize)]
pub struct NormalizedConfig {
    pub device: Option<TransducerConfig>,
    pub drive: Option<DriveCondition>,
    pub herald: Option<HeraldOptions>,
    pub sweep: Option<NormalizedSweep>,
    pub output: NormalizedOutput,
}

#[derive(Debug, Clone, Serialize)]
pub struct NormalizedSweep {
    pub power_axis: PowerAxis,
    pub q_b: Vec<f64>,
    pub outputs: SweepOutputs,
}

#[derive(Debug, Clone, Serialize)]
pub struct NormalizedOutput {
    pub format: Format,
    pub path: Option<String>,
    pub plot: Option<String>,
    pub plot_metric: OutputKind,
    pub seed: u64,
}

pub const DEFAULT_SEED: u64 = 0x5eed;

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn normalize(&self) -> Result<NormalizedConfig, CliError> {
        let device = self.device.as_ref().map(DeviceSection::normalize).transpose()?;
        let drive = match (&self.drive, &device) {
            (None, _) => None,
            (Some(d), dev) => Some(d.normalize(dev.as_ref())?),
        };
        let herald = self
            .herald
            .as_ref()
            .map(|h| h.normalize(drive.map(|d| d.scheme)))
            .transpose()?;
        let sweep = self.sweep.as_ref().map(SweepSection::normalize).transpose()?;
        let output = NormalizedOutput {
            format: self.output.format.unwrap_or_default(),
            path: self.output.path.clone(),
            plot: self.output.plot.clone(),
            plot_metric: self.output.plot_metric.unwrap_or(OutputKind::Efficiency),
            seed: self.output.seed.unwrap_or(DEFAULT_SEED),
        };
        Ok(NormalizedConfig { device, drive, herald, sweep, output })
    }
}

fn require_finite(field: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Config(format!("{field}: expected a finite number, got {v}")))
    }
}

impl ModeSection {
    fn normalize(&self, label: ModeLabel) -> Result<Mode, CliError> {
        let field = |f: &str| format!("device.{label}.{f}");
        let omega = TAU * require_finite(&field("frequency_hz"), self.frequency_hz)?;
        let mode = match (self.q_i, self.q_ex, self.kappa_i_hz, self.kappa_ex_hz) {
            (Some(q_i), Some(q_ex), None, None) => Mode::from_q(label, omega, q_i, q_ex),
            (None, None, Some(ki), Some(kex)) => {
                Mode::new(label, omega, TAU * require_finite(&field("kappa_i_hz"), ki)?, TAU * require_finite(&field("kappa_ex_hz"), kex)?)
            }
            _ => {
                return Err(CliError::Config(format!(
                    "device.{label}: give exactly one of (q_i, q_ex) or (kappa_i_hz, kappa_ex_hz)"
                )))
            }
        };
        mode.map_err(|e| CliError::Config(format!("device.{label}: {e}")))
    }
}

impl DeviceSection {
    fn normalize(&self) -> Result<TransducerConfig, CliError> {
        let g = TAU * require_finite("device.g_eo_hz", self.g_eo_hz)?;
        TransducerConfig::new(
            self.a.normalize(ModeLabel::A)?,
            self.b.normalize(ModeLabel::B)?,
            self.p.normalize(ModeLabel::P)?,
            g,
        )
        .map_err(|e| CliError::Config(format!("device: {e}")))
    }
}

impl DriveSection {
    fn normalize(&self, device: Option<&TransducerConfig>) -> Result<DriveCondition, CliError> {
        let detuning = TAU * require_finite("drive.detuning_hz", self.detuning_hz)?;
        let power = match self.power_w {
            PowerSetting::Watts(w) => w,
            PowerSetting::Named(NamedPower::Critical) => {
                let dev = device.ok_or_else(|| {
                    CliError::Config("drive.power_w = \"critical\" needs a [device] section".into())
                })?;
                critical_pump_power(dev, detuning)?
            }
        };
        DriveCondition::new(power, detuning, self.scheme)
            .map_err(|e| CliError::Config(format!("drive: {e}")))
    }
}

impl HeraldSection {
    fn normalize(&self, drive_scheme: Option<Scheme>) -> Result<HeraldOptions, CliError> {
        let scheme = self.scheme.or(drive_scheme).ok_or_else(|| {
            CliError::Config("herald.scheme: required when there is no [drive] section".into())
        })?;
        if !(self.dt_s >= 0.0 && self.dt_s.is_finite()) {
            return Err(CliError::Config(format!("herald.dt_s: must be >= 0, got {}", self.dt_s)));
        }
        let r0 = match (self.mapping, self.r0_per_s) {
            (None | Some(MappingName::Direct), Some(v)) => {
                if !(v >= 0.0 && v.is_finite()) {
                    return Err(CliError::Config(format!("herald.r0_per_s: must be >= 0, got {v}")));
                }
                R0Mapping::Direct(v)
            }
            (Some(MappingName::CKappaB), None) => R0Mapping::CKappaB,
            (Some(MappingName::CKappaB), Some(_)) => {
                return Err(CliError::Config(
                    "herald: r0_per_s conflicts with mapping = \"c_kappa_b\"".into(),
                ))
            }
            (_, None) => {
                return Err(CliError::Config(
                    "herald: give r0_per_s or mapping = \"c_kappa_b\"".into(),
                ))
            }
        };
        Ok(HeraldOptions { dt: self.dt_s, r0, scheme })
    }
}

impl SweepSection {
    fn normalize(&self) -> Result<NormalizedSweep, CliError> {
        let power_axis = PowerAxis {
            min: require_finite("sweep.power_min_w", self.power_min_w)?,
            max: require_finite("sweep.power_max_w", self.power_max_w)?,
            points: self.points,
            spacing: self.spacing,
        };
        power_axis.validate().map_err(|e| CliError::Config(format!("sweep: {e}")))?;
        if self.q_b.is_empty() {
            return Err(CliError::Config("sweep.q_b: needs at least one value".into()));
        }
        if let Some(q) = self.q_b.iter().find(|q| !(**q > 0.0 && q.is_finite())) {
            return Err(CliError::Config(format!("sweep.q_b: values must be positive, got {q}")));
        }
        let outputs = SweepOutputs {
            efficiency: self.outputs.contains(&OutputKind::Efficiency),
            cooperativity: self.outputs.contains(&OutputKind::Cooperativity),
            infidelity: self.outputs.contains(&OutputKind::Infidelity),
        };
        Ok(NormalizedSweep { power_axis, q_b: self.q_b.clone(), outputs })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"
[device]
g_eo_hz = 50.0
[device.a]
frequency_hz = 193.5e12
kappa_i_hz = 100e6
kappa_ex_hz = 100e6
[device.b]
frequency_hz = 9e9
q_i = 2e7
q_ex = 2e7
[device.p]
frequency_hz = 193.5e12
kappa_i_hz = 50e6
kappa_ex_hz = 50e6
[drive]
power_w = 1e-3
detuning_hz = 1e6
scheme = "red"
"#;

    #[test]
    fn hz_converted_once() {
        let n = RunConfig::parse(BASE).unwrap().normalize().unwrap();
        let dev = n.device.unwrap();
        assert_eq!(dev.mode_a().omega(), TAU * 193.5e12);
        assert_eq!(dev.mode_a().kappa_i(), TAU * 100e6);
        assert_eq!(dev.g_eo(), TAU * 50.0);
        assert_eq!(dev.mode_b().kappa_i(), TAU * 9e9 / 2e7);
        assert_eq!(n.drive.unwrap().pump_detuning, TAU * 1e6);
    }

    #[test]
    fn rejects_mixed_loss_spec() {
        let text = BASE.replace("q_i = 2e7", "q_i = 2e7\nkappa_i_hz = 3.0");
        let err = RunConfig::parse(&text).unwrap().normalize().unwrap_err();
        assert!(err.to_string().contains("device.b"), "{err}");
        let text = BASE.replace("q_ex = 2e7\n", "");
        assert!(RunConfig::parse(&text).unwrap().normalize().is_err());
    }

    #[test]
    fn parse_errors_carry_location() {
        let err = RunConfig::parse("[device]\ng_eo_hz = = 3").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        let err = RunConfig::parse("[drive]\npower = 1.0\nscheme = \"red\"").unwrap_err();
        assert!(err.to_string().contains("power"), "{err}");
    }

    #[test]
    fn critical_power_keyword() {
        let text = BASE.replace("power_w = 1e-3", "power_w = \"critical\"");
        let n = RunConfig::parse(&text).unwrap().normalize().unwrap();
        let p = n.drive.unwrap().pump_power;
        assert_eq!(p, critical_pump_power(&n.device.unwrap(), TAU * 1e6).unwrap());
    }

    #[test]
    fn herald_mapping_rules() {
        let ok = format!("{BASE}[herald]\ndt_s = 1e-6\nmapping = \"c_kappa_b\"\n");
        let h = RunConfig::parse(&ok).unwrap().normalize().unwrap().herald.unwrap();
        assert_eq!(h.r0, R0Mapping::CKappaB);
        assert_eq!(h.scheme, Scheme::Red);
        let both = format!("{BASE}[herald]\ndt_s = 1e-6\nmapping = \"c_kappa_b\"\nr0_per_s = 1.0\n");
        assert!(RunConfig::parse(&both).unwrap().normalize().is_err());
        let none = format!("{BASE}[herald]\ndt_s = 1e-6\n");
        assert!(RunConfig::parse(&none).unwrap().normalize().is_err());
    }

    #[test]
    fn sweep_defaults() {
        let text = format!("{BASE}[sweep]\npower_min_w = 1e-6\npower_max_w = 1e-3\nq_b = [1e6]\n");
        let s = RunConfig::parse(&text).unwrap().normalize().unwrap().sweep.unwrap();
        assert_eq!(s.power_axis.spacing, Spacing::Log);
        assert!(s.outputs.efficiency && s.outputs.cooperativity && !s.outputs.infidelity);
    }
}
