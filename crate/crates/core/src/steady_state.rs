//! Linearized input-output model of the triple-resonance interaction.
//!
//! The pump is replaced by its classical amplitude `sqrt(n_p)`, which turns
//! the three-wave-mixing Hamiltonian into a two-mode problem with effective
//! coupling `G = g_eo * sqrt(n_p)`. Red detuning keeps the beam-splitter
//! terms `G (a† b + a b†)`; blue detuning keeps the squeezing terms
//! `G (a b + a† b†)`, for which the microwave equation is written for `b†`.
//!
//! For a probe offset `omega` the steady state solves `M x = u` with
//!
//! ```text
//! red:  M = [ i(da - w) + ka/2        iG               ]
//!           [ iG                      i(db - w) + kb/2 ]
//! blue: M = [ i(da - w) + ka/2        iG               ]
//!           [ -iG                    -i(db + w) + kb/2 ]
//! ```
//!
//! and flux-normalized inputs `u = (sqrt(ka_ex) a_in, sqrt(kb_ex) b_in)`.
//! Outputs follow `out = sqrt(k_ex) x - in`. On resonance the red-scheme
//! `|S_ba|^2` reproduces the closed-form efficiency exactly, which is what
//! makes this module useful as an oracle for [`crate::transducer`].

use num_complex::Complex64;
use serde::Serialize;

use crate::transducer::TransducerConfig;
use crate::{Error, Result, Scheme};

/// Relative residual allowed on `M x = u` after the closed-form inverse.
const RESIDUAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearizedSystem {
    /// Effective coupling `G`, rad/s.
    pub coupling: f64,
    pub detuning_a: f64,
    pub detuning_b: f64,
    pub kappa_a_i: f64,
    pub kappa_a_ex: f64,
    pub kappa_b_i: f64,
    pub kappa_b_ex: f64,
    pub scheme: Scheme,
}

/// Response at one probe offset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScatteringPoint {
    pub omega: f64,
    /// Microwave input to optical output.
    pub amplitude_ab: Complex64,
    /// Optical input to microwave output.
    pub amplitude_ba: Complex64,
    pub reflection_a: Complex64,
    pub reflection_b: Complex64,
    /// `|amplitude_ba|^2`
    pub conversion: f64,
}

/// Stability boundary of the blue-detuned system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParametricThreshold {
    /// Cooperativity at which `M(omega)` first becomes singular for a real
    /// probe offset. Infinite if no coupling strength destabilizes the system.
    pub cooperativity: f64,
    /// Probe offset at which the singularity appears, rad/s.
    pub omega: f64,
    /// Factor by which the pump photon number must grow to reach the
    /// threshold from the current operating point. Infinite when `G = 0`.
    pub pump_scale: f64,
}

/// Linearizes the interaction around a pump photon number `n_p`. Detunings
/// start at zero (triple resonance); see [`LinearizedSystem::with_detunings`].
pub fn build_linearized(cfg: &TransducerConfig, n_p: f64, scheme: Scheme) -> Result<LinearizedSystem> {
    if !(n_p >= 0.0 && n_p.is_finite()) {
        return Err(Error::domain(format!("n_p must be >= 0, got {n_p}")));
    }
    let a = cfg.mode_a();
    let b = cfg.mode_b();
    Ok(LinearizedSystem {
        coupling: cfg.g_eo() * n_p.sqrt(),
        detuning_a: 0.0,
        detuning_b: 0.0,
        kappa_a_i: a.kappa_i(),
        kappa_a_ex: a.kappa_ex(),
        kappa_b_i: b.kappa_i(),
        kappa_b_ex: b.kappa_ex(),
        scheme,
    })
}

impl LinearizedSystem {
    pub fn with_detunings(mut self, detuning_a: f64, detuning_b: f64) -> Self {
        self.detuning_a = detuning_a;
        self.detuning_b = detuning_b;
        self
    }

    pub fn kappa_a(&self) -> f64 {
        self.kappa_a_i + self.kappa_a_ex
    }

    pub fn kappa_b(&self) -> f64 {
        self.kappa_b_i + self.kappa_b_ex
    }

    /// `4 G^2 / (kappa_a kappa_b)`
    pub fn cooperativity(&self) -> f64 {
        4.0 * self.coupling * self.coupling / (self.kappa_a() * self.kappa_b())
    }

    /// Dynamical matrix at probe offset `omega`, row-major.
    pub fn matrix(&self, omega: f64) -> [[Complex64; 2]; 2] {
        let i = Complex64::i();
        let g = i * self.coupling;
        let m00 = i * (self.detuning_a - omega) + 0.5 * self.kappa_a();
        match self.scheme {
            Scheme::Red => [[m00, g], [g, i * (self.detuning_b - omega) + 0.5 * self.kappa_b()]],
            Scheme::Blue => [[m00, g], [-g, -i * (self.detuning_b + omega) + 0.5 * self.kappa_b()]],
        }
    }

    pub fn determinant(&self, omega: f64) -> Complex64 {
        let m = self.matrix(omega);
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }
}

fn residual(m: &[[Complex64; 2]; 2], x: [Complex64; 2], u: [Complex64; 2]) -> f64 {
    let r0 = m[0][0] * x[0] + m[0][1] * x[1] - u[0];
    let r1 = m[1][0] * x[0] + m[1][1] * x[1] - u[1];
    let scale = u[0].norm().max(u[1].norm());
    if scale == 0.0 {
        return r0.norm().max(r1.norm());
    }
    r0.norm().max(r1.norm()) / scale
}

/// Solves the steady state at one probe offset.
pub fn scattering_at(sys: &LinearizedSystem, omega: f64) -> Result<ScatteringPoint> {
    if !(sys.kappa_a() > 0.0 && sys.kappa_b() > 0.0) {
        return Err(Error::domain("both modes need a positive total loss rate"));
    }
    if sys.scheme == Scheme::Blue {
        let th = parametric_threshold(sys)?;
        let c = sys.cooperativity();
        if c >= th.cooperativity {
            return Err(Error::Instability { cooperativity: c, threshold: th.cooperativity });
        }
    }

    let m = sys.matrix(omega);
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if det.norm() == 0.0 {
        return Err(Error::Instability { cooperativity: sys.cooperativity(), threshold: sys.cooperativity() });
    }
    let inv = [[m[1][1] / det, -m[0][1] / det], [-m[1][0] / det, m[0][0] / det]];
    let solve = |u: [Complex64; 2]| -> Result<[Complex64; 2]> {
        let x = [inv[0][0] * u[0] + inv[0][1] * u[1], inv[1][0] * u[0] + inv[1][1] * u[1]];
        let r = residual(&m, x, u);
        if r > RESIDUAL_TOL {
            return Err(Error::Residual { residual: r });
        }
        Ok(x)
    };

    let sa = sys.kappa_a_ex.sqrt();
    let sb = sys.kappa_b_ex.sqrt();
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);

    // unit flux into port a
    let xa = solve([one * sa, zero])?;
    // unit flux into port b
    let xb = solve([zero, one * sb])?;

    let amplitude_ba = xa[1] * sb;
    Ok(ScatteringPoint {
        omega,
        amplitude_ab: xb[0] * sa,
        amplitude_ba,
        reflection_a: xa[0] * sa - one,
        reflection_b: xb[1] * sb - one,
        conversion: amplitude_ba.norm_sqr(),
    })
}

pub fn conversion_spectrum(sys: &LinearizedSystem, omegas: &[f64]) -> Result<Vec<ScatteringPoint>> {
    if omegas.is_empty() {
        return Err(Error::Usage("conversion spectrum needs at least one probe offset".into()));
    }
    omegas.iter().map(|&w| scattering_at(sys, w)).collect()
}

/// Blue-detuned stability boundary.
///
/// `det M(w) = P(w) - G^2` with `P(w) = (ka/2 + i(da - w)) (kb/2 - i(db + w))`.
/// An eigenvalue reaches the imaginary axis when `det M(w) = 0` for a real
/// `w`, which needs `Im P(w) = 0`. That is linear in `w`, so there is a
/// single candidate offset and the threshold is `G^2 = Re P` there. At zero
/// detuning this gives `C = 1`.
pub fn parametric_threshold(sys: &LinearizedSystem) -> Result<ParametricThreshold> {
    if sys.scheme != Scheme::Blue {
        return Err(Error::WrongScheme { expected: Scheme::Blue, got: sys.scheme });
    }
    let (ka, kb) = (sys.kappa_a(), sys.kappa_b());
    if !(ka > 0.0 && kb > 0.0) {
        return Err(Error::domain("both modes need a positive total loss rate"));
    }
    let omega = (sys.detuning_a * kb - sys.detuning_b * ka) / (ka + kb);
    let g2 = 0.25 * ka * kb + (sys.detuning_a - omega) * (sys.detuning_b + omega);
    let cooperativity = if g2 > 0.0 { 4.0 * g2 / (ka * kb) } else { f64::INFINITY };
    let current = sys.cooperativity();
    let pump_scale = if current > 0.0 { cooperativity / current } else { f64::INFINITY };
    Ok(ParametricThreshold { cooperativity, omega, pump_scale })
}
