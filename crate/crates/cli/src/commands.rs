use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use xduce_core::herald::{breakdown, mc_blue_infidelity};
use xduce_core::steady_state::{build_linearized, parametric_threshold, scattering_at};
use xduce_core::sweep::run_sweep;
use xduce_core::transducer::{self, DriveCondition, TransducerConfig};
use xduce_core::{Error, HeraldModel, R0Mapping, Scheme, SweepSpec};

use crate::config::{Format, NormalizedConfig, OutputKind};
use crate::error::{io_err, CliError};
use crate::output::{write_record, write_rows, Record};
use crate::svg;

/// Deviation allowed between the scattering solve and the closed-form
/// efficiency at zero probe offset.
pub const VERIFY_TOL: f64 = 1e-9;
pub const VERIFY_PROBES: usize = 64;

/// Flags shared by every subcommand, already merged with the config.
pub struct Options {
    pub format: Format,
    pub seed: u64,
    pub mc_samples: Option<u64>,
    pub plot: Option<String>,
    pub out: Option<String>,
}

fn device(cfg: &NormalizedConfig) -> Result<&TransducerConfig, CliError> {
    cfg.device.as_ref().ok_or_else(|| CliError::Config("missing [device] section".into()))
}

fn drive(cfg: &NormalizedConfig) -> Result<&DriveCondition, CliError> {
    cfg.drive.as_ref().ok_or_else(|| CliError::Config("missing [drive] section".into()))
}

fn stdout_record(format: Format, rec: &Record) -> Result<(), CliError> {
    write_record(io::stdout().lock(), format, rec)
}

pub fn efficiency(cfg: &NormalizedConfig, opts: &Options) -> Result<(), CliError> {
    let dev = device(cfg)?;
    let drv = drive(cfg)?;
    let (n_p, br) = transducer::evaluate(dev, drv)?;
    let rec = Record::new()
        .num("pump_power_w", drv.pump_power)
        .num("n_p", n_p)
        .num("cooperativity", br.cooperativity)
        .num("eta_internal", br.eta_internal)
        .num("eta", br.eta)
        .num("extraction_a", br.extraction_a)
        .num("extraction_b", br.extraction_b);
    stdout_record(opts.format, &rec)
}

fn create(path: &str) -> Result<BufWriter<File>, CliError> {
    File::create(Path::new(path)).map(BufWriter::new).map_err(|e| io_err(path, e))
}

pub fn sweep(cfg: &NormalizedConfig, opts: &Options) -> Result<(), CliError> {
    let dev = device(cfg)?;
    let sw = cfg.sweep.as_ref().ok_or_else(|| CliError::Config("missing [sweep] section".into()))?;
    if sw.outputs.infidelity && cfg.herald.is_none() {
        return Err(CliError::Config("sweep.outputs: infidelity needs a [herald] section".into()));
    }
    let spec = SweepSpec {
        base: *dev,
        pump_detuning: cfg.drive.map_or(0.0, |d| d.pump_detuning),
        power_axis: sw.power_axis,
        q_axis: sw.q_b.clone(),
        outputs: sw.outputs,
        herald: cfg.herald,
    };
    let plot_metric = cfg.output.plot_metric;
    if opts.plot.is_some() && plot_metric == OutputKind::Infidelity && !sw.outputs.infidelity {
        return Err(CliError::Config("output.plot_metric = \"infidelity\" needs infidelity in sweep.outputs".into()));
    }

    let rows = run_sweep(&spec)?;
    if let (Some(h), true) = (&cfg.herald, sw.outputs.infidelity) {
        eprintln!("# herald scheme: {}; r0 mapping: {}", h.scheme, h.r0.describe());
    }

    match &opts.out {
        Some(path) => {
            let mut w = create(path)?;
            write_rows(&mut w, opts.format, &rows)?;
            w.flush().map_err(|e| io_err(path, e))?;
        }
        None => write_rows(io::stdout().lock(), opts.format, &rows)?,
    }
    if let Some(path) = &opts.plot {
        let mut w = create(path)?;
        w.write_all(svg::render(&rows, plot_metric).as_bytes()).map_err(|e| io_err(path, e))?;
        w.flush().map_err(|e| io_err(path, e))?;
    }
    Ok(())
}

fn herald_model(cfg: &NormalizedConfig) -> Result<HeraldModel, CliError> {
    let h = cfg.herald.as_ref().ok_or_else(|| CliError::Config("missing [herald] section".into()))?;
    match h.r0 {
        R0Mapping::Direct(r0) => {
            let m = HeraldModel::new(r0, h.dt, h.scheme)?;
            if m.mu() >= xduce_core::herald::MAX_MU {
                return Err(Error::OutOfRegime { mu: m.mu() }.into());
            }
            Ok(m)
        }
        R0Mapping::CKappaB => {
            let dev = device(cfg)?;
            let (_, br) = transducer::evaluate(dev, drive(cfg)?)?;
            Ok(h.model(dev, br.cooperativity)?)
        }
    }
}

pub fn herald(cfg: &NormalizedConfig, opts: &Options) -> Result<(), CliError> {
    let m = herald_model(cfg)?;
    if opts.mc_samples.is_some() && m.scheme == Scheme::Red {
        return Err(CliError::Unsupported("no Monte Carlo estimator exists for the red-detuned model".into()));
    }
    let b = breakdown(&m)?;
    let mut rec = Record::new()
        .text("scheme", m.scheme.to_string())
        .num("r0_per_s", m.r0)
        .num("dt_s", m.dt)
        .num("mu", m.mu())
        .num("p0", b.p0)
        .num("p1", b.p1)
        .num("p11", b.p11)
        .num("pmn", b.pmn)
        .num("infidelity", b.infidelity);
    if let Some(samples) = opts.mc_samples {
        let est = mc_blue_infidelity(&m, samples, opts.seed)?;
        let gap = b.infidelity - est.infidelity_mean;
        let gap_se = if est.standard_error > 0.0 {
            gap / est.standard_error
        } else if gap == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        rec = rec
            .int("mc_samples", est.samples)
            .int("mc_seed", est.seed)
            .num("mc_infidelity", est.infidelity_mean)
            .num("mc_standard_error", est.standard_error)
            .num("exact_classification", b.p11 + 1.0 - (b.p0 + b.p1).powi(2))
            .num("gap_se", gap_se);
    }
    stdout_record(opts.format, &rec)
}

pub fn verify(cfg: &NormalizedConfig, opts: &Options) -> Result<(), CliError> {
    let dev = device(cfg)?;
    let drv = drive(cfg)?;
    let (n_p, br) = transducer::evaluate(dev, drv)?;

    let red = build_linearized(dev, n_p, Scheme::Red)?;
    let at_zero = scattering_at(&red, 0.0)?;
    let deviation = if br.eta > 0.0 {
        ((at_zero.conversion - br.eta) / br.eta).abs()
    } else {
        (at_zero.conversion - br.eta).abs()
    };

    // random offsets: the red response must stay passive, reciprocal and
    // peaked at zero offset
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let span = red.kappa_a() + red.kappa_b();
    let mut max_probe = 0.0f64;
    let mut max_reciprocity = 0.0f64;
    for _ in 0..VERIFY_PROBES {
        let mag = span * 10f64.powf(rng.random_range(-3.0..3.0));
        let w = if rng.random_bool(0.5) { mag } else { -mag };
        let pt = scattering_at(&red, w)?;
        max_probe = max_probe.max(pt.conversion);
        let (ab, ba) = (pt.amplitude_ab.norm(), pt.amplitude_ba.norm());
        if ab.max(ba) > 0.0 {
            max_reciprocity = max_reciprocity.max((ab - ba).abs() / ab.max(ba));
        }
    }
    let spectrum_ok = max_probe <= at_zero.conversion * (1.0 + 1e-12) + 1e-15
        && max_probe <= 1.0 + 1e-12
        && max_reciprocity <= VERIFY_TOL;

    let blue = build_linearized(dev, n_p, Scheme::Blue)?;
    let threshold = parametric_threshold(&blue)?;
    let blue_stable = match scattering_at(&blue, 0.0) {
        Ok(_) => true,
        Err(Error::Instability { .. }) => false,
        Err(e) => return Err(e.into()),
    };

    let rec = Record::new()
        .num("n_p", n_p)
        .num("cooperativity", br.cooperativity)
        .num("eta", br.eta)
        .num("conversion_at_zero", at_zero.conversion)
        .num("deviation", deviation)
        .num("tolerance", VERIFY_TOL)
        .int("probes", VERIFY_PROBES as u64)
        .num("max_probe_conversion", max_probe)
        .num("max_reciprocity_deviation", max_reciprocity)
        .num("blue_threshold_cooperativity", threshold.cooperativity)
        .flag("blue_stable", blue_stable)
        .flag("pass", deviation <= VERIFY_TOL && spectrum_ok);
    stdout_record(opts.format, &rec)?;
    if !blue_stable {
        eprintln!(
            "blue-detuned operation is unstable: C = {} at or above threshold C = {}",
            blue.cooperativity(),
            threshold.cooperativity
        );
    }
    if deviation > VERIFY_TOL {
        return Err(CliError::Verification(format!(
            "scattering conversion deviates from closed-form efficiency by {deviation:e} (tolerance {VERIFY_TOL:e})"
        )));
    }
    if !spectrum_ok {
        return Err(CliError::Verification("red spectrum is not passive, reciprocal and peaked at zero offset".into()));
    }
    Ok(())
}
