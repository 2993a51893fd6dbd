//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use xduce_core::herald::{self, HeraldModel};
use xduce_core::optimize::maximize_efficiency;
use xduce_core::steady_state::{build_linearized, parametric_threshold, scattering_at};
use xduce_core::transducer::{
    conversion_efficiency, cooperativity, critical_photon_number, critical_pump_power, evaluate,
    intracavity_photon_number, DriveCondition, Mode, ModeLabel, TransducerConfig,
};
use xduce_core::Scheme;

use common::{code, fixture, golden, run, xduce};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn config(ka: (f64, f64), kb: (f64, f64), g_eo: f64) -> TransducerConfig {
    TransducerConfig::new(
        Mode::new(ModeLabel::A, 2.0 * PI * 193.5e12, ka.0, ka.1).unwrap(),
        Mode::new(ModeLabel::B, 2.0 * PI * 9e9, kb.0, kb.1).unwrap(),
        Mode::new(ModeLabel::P, 2.0 * PI * 193.5e12, 2.0 * PI * 50e6, 2.0 * PI * 50e6).unwrap(),
        g_eo,
    )
    .unwrap()
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo.ln()..hi.ln()).exp()
}

/// Total rates log-uniform in [1e2, 1e10] rad/s, extraction in (0, 1].
fn random_config(rng: &mut ChaCha8Rng) -> TransducerConfig {
    let ka = log_uniform(rng, 1e2, 1e10);
    let kb = log_uniform(rng, 1e2, 1e10);
    let fa: f64 = rng.random_range(1e-3..=1.0);
    let fb: f64 = rng.random_range(1e-3..=1.0);
    let g = log_uniform(rng, 1e-1, 1e4);
    config((ka * (1.0 - fa), ka * fa), (kb * (1.0 - fb), kb * fb), g)
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs().max(a.abs())
    }
}

fn unitary_conversion() -> Check {
    let cfg = config((0.0, 2.0 * PI * 200e6), (0.0, 2.0 * PI * 450.0), 2.0 * PI * 50.0);
    let start = Instant::now();
    let n_c = critical_photon_number(&cfg).map_err(|e| e.to_string())?;
    let br = conversion_efficiency(&cfg, n_c).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let dev = (br.eta - 1.0).abs();
    if dev > 1e-12 {
        return Err(format!("|eta - 1| = {dev:e}"));
    }
    if elapsed >= Duration::from_millis(1) {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!("|eta - 1| = {dev:e} in {elapsed:?}"))
}

fn oracle_equivalence() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let configs: Vec<(TransducerConfig, f64)> = (0..1000)
        .map(|_| {
            let cfg = random_config(&mut rng);
            let c = log_uniform(&mut rng, 1e-3, 1e3);
            let (ka, kb) = (cfg.mode_a().kappa_total(), cfg.mode_b().kappa_total());
            let n_p = c * ka * kb / (4.0 * cfg.g_eo() * cfg.g_eo());
            (cfg, n_p)
        })
        .collect();
    let start = Instant::now();
    let mut worst = 0.0f64;
    for (cfg, n_p) in &configs {
        let eta = conversion_efficiency(cfg, *n_p).map_err(|e| e.to_string())?.eta;
        let sys = build_linearized(cfg, *n_p, Scheme::Red).map_err(|e| e.to_string())?;
        let num = scattering_at(&sys, 0.0).map_err(|e| e.to_string())?.conversion;
        worst = worst.max(rel(num, eta));
    }
    let elapsed = start.elapsed();
    if worst > 1e-9 {
        return Err(format!("worst relative deviation {worst:e}"));
    }
    if elapsed >= Duration::from_secs(1) {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!("1000 configs, worst relative deviation {worst:e} in {elapsed:?}"))
}

fn cooperativity_linearity() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let cfg = random_config(&mut rng);
        let p = log_uniform(&mut rng, 1e-9, 1.0);
        let alpha = log_uniform(&mut rng, 1e-3, 1e3);
        let c_at = |cfg: &TransducerConfig, p: f64| -> Result<f64, String> {
            let d = DriveCondition::new(p, 0.0, Scheme::Red).map_err(|e| e.to_string())?;
            Ok(evaluate(cfg, &d).map_err(|e| e.to_string())?.1.cooperativity)
        };
        let c = c_at(&cfg, p)?;
        worst = worst.max(rel(c_at(&cfg, alpha * p)?, alpha * c));

        let b = cfg.mode_b();
        let high_q = cfg.with_mode_b(b.with_loaded_q(10.0 * b.loaded_q()).unwrap()).unwrap();
        worst = worst.max(rel(c_at(&high_q, p)?, 10.0 * c));

        // direct check on the photon-number dependence as well
        let n_p = intracavity_photon_number(cfg.mode_p(), &DriveCondition::new(p, 0.0, Scheme::Red).unwrap());
        let cn = cooperativity(&cfg, n_p).map_err(|e| e.to_string())?;
        worst = worst.max(rel(cooperativity(&cfg, alpha * n_p).map_err(|e| e.to_string())?, alpha * cn));
    }
    if worst > 1e-12 {
        return Err(format!("worst relative deviation {worst:e}"));
    }
    Ok(format!("100 configs, worst relative deviation {worst:e}"))
}

fn peak_shift() -> Check {
    let mut worst = 0.0f64;
    let bases = [
        config((2.0 * PI * 100e6, 2.0 * PI * 100e6), (2.0 * PI * 225.0, 2.0 * PI * 225.0), 2.0 * PI * 50.0),
        config((2e8, 6e8), (1e3, 4e3), 2.0 * PI * 20.0),
        config((5e9, 1e9), (3e4, 3e4), 2.0 * PI * 500.0),
    ];
    for cfg in bases {
        for detuning in [0.0, 3e8] {
            let b = cfg.mode_b();
            let high_q = cfg.with_mode_b(b.with_loaded_q(10.0 * b.loaded_q()).unwrap()).unwrap();
            let p_lo = critical_pump_power(&cfg, detuning).map_err(|e| e.to_string())?;
            let p_hi = critical_pump_power(&high_q, detuning).map_err(|e| e.to_string())?;
            let opt_lo = maximize_efficiency(&cfg, detuning, [p_lo / 300.0, p_lo * 70.0]).map_err(|e| e.to_string())?;
            let opt_hi =
                maximize_efficiency(&high_q, detuning, [p_hi / 300.0, p_hi * 70.0]).map_err(|e| e.to_string())?;
            worst = worst.max(rel(opt_hi.pump_power / opt_lo.pump_power, 0.1));
            worst = worst.max(rel(p_hi / p_lo, 0.1));
        }
    }
    if worst > 1e-6 {
        return Err(format!("worst relative deviation of the ratio from 0.1: {worst:e}"));
    }
    Ok(format!("P_opt(10Q)/P_opt(Q) within {worst:e} of 0.1"))
}

fn blue_herald_formulas() -> Check {
    let m = HeraldModel::new(1e5, 1e-6, Scheme::Blue).unwrap();
    let b = herald::blue_breakdown(&m).map_err(|e| e.to_string())?;
    let expected = [
        ("p1", b.p1, 0.090_483_741_803_596),
        ("p11", b.p11, 0.008_187_307_530_780),
        ("pmn", b.pmn, 0.009_357_680_320_889),
        ("infidelity", b.infidelity, 0.017_544_987_851_669),
    ];
    for (name, got, want) in expected {
        if (got - want).abs() > 1e-6 {
            return Err(format!("{name} = {got}, expected {want}"));
        }
    }
    for i in 0..=5000 {
        let mu = 5.0 * i as f64 / 5000.0;
        let b = herald::blue_breakdown(&HeraldModel::new(mu, 1.0, Scheme::Blue).unwrap()).map_err(|e| e.to_string())?;
        if b.p11 != b.p1 * b.p1 || b.pmn != 2.0 * (1.0 - b.p0 - b.p1) {
            return Err(format!("identity broken at mu = {mu}"));
        }
    }
    Ok(format!("infidelity(0.1) = {}, identities exact on 5001 points", b.infidelity))
}

/// Exact probability that two independent Poisson(mu) counts contain a
/// (1, 1) pair or any count >= 2, summing the joint pmf over counts <= 20.
fn truncated_poisson_error(mu: f64) -> f64 {
    let pmf = |k: u32| (1..=k).fold((-mu).exp(), |p, j| p * mu / f64::from(j));
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

fn monte_carlo() -> Check {
    const SAMPLES: u64 = 10_000_000;
    const SEED: u64 = 0x5eed;
    let start = Instant::now();
    let mut notes = Vec::new();
    for mu in [0.001, 0.01, 0.1] {
        let m = HeraldModel::new(mu, 1.0, Scheme::Blue).unwrap();
        let est = herald::mc_blue_infidelity(&m, SAMPLES, SEED).map_err(|e| e.to_string())?;
        let exact = truncated_poisson_error(mu);
        let z = (est.infidelity_mean - exact).abs() / est.standard_error;
        if z.is_nan() || z > 3.0 {
            return Err(format!("mu = {mu}: MC {} vs exact {exact}, {z:.2} SE", est.infidelity_mean));
        }
        let mut reference = None;
        for threads in [1, 3, 8] {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(|e| e.to_string())?;
            let again = pool.install(|| herald::mc_blue_infidelity(&m, SAMPLES, SEED)).map_err(|e| e.to_string())?;
            let bits = (again.infidelity_mean.to_bits(), again.standard_error.to_bits());
            if bits != (est.infidelity_mean.to_bits(), est.standard_error.to_bits()) {
                return Err(format!("mu = {mu}: result differs with {threads} threads"));
            }
            reference.get_or_insert(bits);
        }
        notes.push(format!("mu={mu}: {z:.2} SE"));
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(30) {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!("{}; bit-identical at 1/3/8 threads; {elapsed:.2?}", notes.join(", ")))
}

fn storage_loss_scaling() -> Check {
    let mut worst = 0.0f64;
    for kt in [1e-3, 5e-4, 1e-4, 1e-6, 1e-9] {
        for hold in [1e-6, 1e-3, 1.0] {
            let kappa = kt / hold;
            let low_q = herald::storage_loss_infidelity(kappa, hold).map_err(|e| e.to_string())?;
            let high_q = herald::storage_loss_infidelity(kappa / 10.0, hold).map_err(|e| e.to_string())?;
            worst = worst.max(rel(low_q / high_q, 10.0));
        }
    }
    if worst > 0.01 {
        return Err(format!("ratio off by {worst:e}"));
    }
    Ok(format!("ratio within {worst:e} of 10"))
}

fn blue_threshold() -> Check {
    let (ka, kb) = (2.0 * PI * 200e6, 2.0 * PI * 900.0);
    let mut worst = 0.0f64;
    for fa in [1.0, 0.75, 0.5, 0.1] {
        for fb in [1.0, 0.5, 0.2] {
            let cfg = config((ka * (1.0 - fa), ka * fa), (kb * (1.0 - fb), kb * fb), 2.0 * PI * 50.0);
            let sys = build_linearized(&cfg, 1e4, Scheme::Blue).map_err(|e| e.to_string())?;
            let th = parametric_threshold(&sys).map_err(|e| e.to_string())?;
            worst = worst.max((th.cooperativity - 1.0).abs());
            // the determinant vanishes at the threshold coupling
            let at = xduce_core::LinearizedSystem { coupling: sys.coupling * th.pump_scale.sqrt(), ..sys };
            let det = at.determinant(th.omega).norm() / (0.25 * ka * kb);
            worst = worst.max(det);
        }
    }
    if worst > 1e-9 {
        return Err(format!("worst deviation {worst:e}"));
    }
    Ok(format!("C_th = 1 within {worst:e} across 12 splits"))
}

fn cli_contract() -> Check {
    let a = run("sweep", "sweep_small.toml", &[]);
    let b = run("sweep", "sweep_small.toml", &[]);
    let want = std::fs::read(golden("sweep_small.csv")).map_err(|e| e.to_string())?;
    if code(&a) != 0 || a.stdout != b.stdout || a.stdout != want {
        return Err("sweep output is not byte-stable against the golden file".into());
    }

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "[device]\ng_eo_hz = = 1\n").map_err(|e| e.to_string())?;
    let big = dir.path().join("big.toml");
    std::fs::write(&big, "[herald]\nscheme = \"blue\"\ndt_s = 1.0\nr0_per_s = 20.0\n").map_err(|e| e.to_string())?;
    let cases = [
        ("config error", code(&xduce(&["efficiency", "--config", bad.to_str().unwrap()])), 2),
        ("domain error", code(&xduce(&["herald", "--config", big.to_str().unwrap()])), 3),
        ("io error", code(&run("sweep", "sweep_small.toml", &["--out", "/nonexistent-dir/rows.csv"])), 4),
        ("unsupported", code(&run("herald", "herald_red.toml", &["--mc", "10"])), 5),
        ("verify", code(&run("verify", "device.toml", &[])), 0),
    ];
    for (what, got, want) in cases {
        if got != want {
            return Err(format!("{what}: exit {got}, expected {want}"));
        }
    }
    if !fixture("device.toml").exists() {
        return Err("shipped fixture missing".into());
    }
    Ok("golden CSV stable; exits 2/3/4/5 reachable; verify exits 0".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("unitary conversion", unitary_conversion),
        ("oracle equivalence", oracle_equivalence),
        ("cooperativity linearity", cooperativity_linearity),
        ("peak shift", peak_shift),
        ("blue herald formulas", blue_herald_formulas),
        ("monte carlo", monte_carlo),
        ("storage loss scaling", storage_loss_scaling),
        ("blue threshold", blue_threshold),
        ("cli contract", cli_contract),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
