use alloc::vec::Vec;

use crate::lattice::LatticeState;

/// Observables recorded after one roundtrip.
#[derive(Clone, Debug, PartialEq)]
pub struct StepRecord {
    pub step: usize,
    pub diffusion_distance: f64,
    pub centroid: f64,
    /// `|⟨s0|s_n⟩|²` with respect to the initial state.
    pub return_probability: f64,
    pub norm_sqr: f64,
    pub boundary_mass: f64,
    /// Accumulated norm lost at an open boundary (direct engine only).
    pub norm_leak: f64,
    /// `P(m, n)` in site order, when requested.
    pub distribution: Option<Vec<f64>>,
    pub state: Option<LatticeState>,
}

impl StepRecord {
    pub(crate) fn observe(step: usize, state: &LatticeState, initial: &LatticeState, leak: f64, with_dist: bool, with_state: bool) -> Self {
        StepRecord {
            step,
            diffusion_distance: state.diffusion_distance(),
            centroid: state.centroid(),
            return_probability: state.return_probability(initial).unwrap_or(0.0),
            norm_sqr: state.norm_sqr(),
            boundary_mass: state.boundary_mass(),
            norm_leak: leak,
            distribution: with_dist.then(|| state.probability_distribution()),
            state: with_state.then(|| state.clone()),
        }
    }
}

/// Per-step observables from step 0 (the initial state) onward, plus the
/// final state.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub records: Vec<StepRecord>,
    pub final_state: LatticeState,
}

impl Trajectory {
    /// Number of steps taken (records minus the initial snapshot).
    pub fn steps(&self) -> usize {
        self.records.len() - 1
    }

    pub fn diffusion_series(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.diffusion_distance).collect()
    }

    pub fn centroid_series(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.centroid).collect()
    }
}
