use alloc::string::String;

/// Errors raised by lattice construction, stepping and gate synthesis.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum WalkError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("site {site} lies outside the lattice of half-width {half_width}")]
    SiteOutOfRange { site: i64, half_width: usize },
    #[error("wavepacket width {delta} is too large for half-width {half_width}")]
    PacketTooWide { delta: f64, half_width: usize },
    #[error("states live on different lattices")]
    ConfigMismatch,
    #[error("argument is not finite")]
    NonFinite,
    #[error("kernel tolerance {0} outside (0, 1e-6]")]
    Tolerance(f64),
    #[error("no amplitude at quasimomentum {q}")]
    NoAmplitudeAtQ { q: f64 },
    #[error("probability {mass:e} reached the lattice boundary at step {step}")]
    BoundaryLeak { step: usize, mass: f64 },
    #[error("eigenphases are degenerate at q = {q}")]
    Degenerate { q: f64 },
    #[error("group velocity is ill-defined at band crossing q = {q}")]
    BandCrossing { q: f64 },
    #[error("unknown gate `{0}`")]
    UnknownGate(String),
    #[error("gate target {target} exceeds modulation strength {gamma}")]
    Infeasible { target: f64, gamma: f64 },
    #[error("vector is not normalized (norm {0})")]
    NotNormalized(f64),
    #[error("schedule is empty")]
    EmptySchedule,
}

impl WalkError {
    /// True for failures of numerical validity (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            WalkError::BoundaryLeak { .. }
                | WalkError::Infeasible { .. }
                | WalkError::NoAmplitudeAtQ { .. }
                | WalkError::Degenerate { .. }
                | WalkError::BandCrossing { .. }
        )
    }
}
