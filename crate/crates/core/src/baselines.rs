//! Reference walks for diffusion comparisons: the unbiased classical random
//! walk and the Hadamard-coined nearest-neighbour quantum walk.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::WalkError;
use crate::lattice::{Boundary, LatticeConfig, LatticeState, Polarization, BOUNDARY_STRIP};
use crate::math::{sqrt, C64};
use crate::step::{Record, BOUNDARY_LIMIT};
use crate::trajectory::{StepRecord, Trajectory};
use crate::Result;

/// Position distribution of the classical walk after `step` coin flips.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassicalDistribution {
    pub step: usize,
    /// `P(m)` for `m ∈ [-n, n]`, index `m + n`.
    pub probs: Vec<f64>,
}

impl ClassicalDistribution {
    pub fn probability(&self, m: i64) -> f64 {
        let idx = m + self.step as i64;
        if (0..self.probs.len() as i64).contains(&idx) {
            self.probs[idx as usize]
        } else {
            0.0
        }
    }

    /// `sqrt(Σ m² P(m))`, which equals `√n`.
    pub fn diffusion_distance(&self) -> f64 {
        let n = self.step as i64;
        let second: f64 = self
            .probs
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let m = (i as i64 - n) as f64;
                m * m * p
            })
            .sum();
        sqrt(second)
    }
}

/// Binomial distribution `P(m) = C(n, (n+m)/2) / 2ⁿ`, built row by row so no
/// factorial ever overflows.
pub fn classical_walk_distribution(n: usize) -> ClassicalDistribution {
    // row[k] = C(j, k) / 2^j
    let mut row = vec![1.0];
    for _ in 0..n {
        let mut next = vec![0.0; row.len() + 1];
        for (k, &p) in row.iter().enumerate() {
            next[k] += 0.5 * p;
            next[k + 1] += 0.5 * p;
        }
        row = next;
    }
    let mut probs = vec![0.0; 2 * n + 1];
    for (k, p) in row.into_iter().enumerate() {
        probs[2 * k] = p;
    }
    ClassicalDistribution { step: n, probs }
}

/// One Hadamard-walk step: coin `(1/√2)[[1,1],[1,-1]]`, then `H` moves to
/// `m + 1` and `V` to `m - 1`. Amplitude shifted past `±M` is dropped.
pub fn dtqw_step(s: &LatticeState) -> LatticeState {
    let r = core::f64::consts::FRAC_1_SQRT_2;
    let n = s.config().size();
    let (h, v) = (s.component(Polarization::H), s.component(Polarization::V));
    let zero = C64::new(0.0, 0.0);
    let mut out_h = vec![zero; n];
    let mut out_v = vec![zero; n];
    for i in 0..n {
        let (a, b) = (h[i], v[i]);
        if i + 1 < n {
            out_h[i + 1] = (a + b) * r;
        }
        if i > 0 {
            out_v[i - 1] = (a - b) * r;
        }
    }
    let config = s.config().with_boundary(Boundary::Truncated);
    LatticeState::from_raw(config, out_h, out_v).expect("sizes match and amplitudes are finite")
}

/// `n` Hadamard-walk steps with the same boundary-mass guard as
/// [`crate::evolve`].
pub fn dtqw_evolve(s: &LatticeState, n: usize, record: Record) -> Result<Trajectory> {
    let check = |step: usize, state: &LatticeState| {
        let mass = state.boundary_mass();
        if mass > BOUNDARY_LIMIT {
            Err(WalkError::BoundaryLeak { step, mass })
        } else {
            Ok(())
        }
    };
    check(0, s)?;
    let mut records = Vec::with_capacity(n + 1);
    records.push(StepRecord::observe(0, s, s, 0.0, record.distribution, record.states));
    let mut state = s.clone();
    for k in 1..=n {
        state = dtqw_step(&state);
        check(k, &state)?;
        records.push(StepRecord::observe(k, &state, s, 0.0, record.distribution, record.states));
    }
    Ok(Trajectory { records, final_state: state })
}

/// Diffusion distances `M(1..=n)` of the Hadamard walk started in `|0,H⟩`.
pub fn dtqw_diffusion(n: usize) -> Vec<f64> {
    // support after n steps is |m| ≤ n, which stays clear of the edge strip
    let config = LatticeConfig::new(n + BOUNDARY_STRIP + 1, Boundary::Truncated).expect("half-width is positive");
    let s0 = LatticeState::make_single_site(0, Polarization::H, config).expect("origin is on the lattice");
    let traj = dtqw_evolve(&s0, n, Record::SCALARS).expect("walk never reaches the edge strip");
    traj.records[1..].iter().map(|r| r.diffusion_distance).collect()
}
