use crate::Scheme;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("no critical point: electro-optic coupling g_eo is zero")]
    NoCriticalPoint,

    #[error("pump mode cannot be driven: external coupling kappa_p,ex is zero")]
    UndriveablePump,

    #[error(
        "blue-detuned system is at or beyond its parametric threshold \
         (cooperativity {cooperativity}, threshold {threshold})"
    )]
    Instability { cooperativity: f64, threshold: f64 },

    #[error("operation requires the {expected} scheme, got {got}")]
    WrongScheme { expected: Scheme, got: Scheme },

    #[error("usage error: {0}")]
    Usage(String),

    #[error("bracket [{lo}, {hi}] does not contain the efficiency maximum")]
    Bracketing { lo: f64, hi: f64 },

    #[error("Poisson mean {mu} is outside the supported regime (mu < 10)")]
    OutOfRegime { mu: f64 },

    #[error("steady-state residual {residual:e} exceeds tolerance")]
    Residual { residual: f64 },

    #[error("sweep row at pump_power={pump_power} W, q_b={q_b}: {source}")]
    SweepRow {
        pump_power: f64,
        q_b: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
