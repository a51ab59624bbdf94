//! One roundtrip of the ring: `U = T·R(θ)`.
//!
//! The coin `R(θ)` rotates `(a_H, a_V)` at every site, then `T` translates
//! each polarization with its own Jacobi–Anger kernel. `T` can be applied as a
//! direct convolution on an open lattice or as a phase multiplication in
//! quasimomentum space on a periodic one.

use crate::error::WalkError;
use crate::fft::FftPlan;
use crate::kernel::{translation_kernel, TranslationKernel, DEFAULT_TOL};
use crate::lattice::{Boundary, LatticeConfig, LatticeState, Polarization};
use crate::math::{cis, cos, reduce_angle, sin, C64, TAU};
use crate::trajectory::{StepRecord, Trajectory};
use crate::Result;
use alloc::vec;
use alloc::vec::Vec;

/// Boundary mass at which an evolution is abandoned.
pub const BOUNDARY_LIMIT: f64 = 1e-6;

/// Open-boundary norm loss above which a translation is flagged.
pub const LEAK_FLAG: f64 = 1e-6;

/// Drive applied during one roundtrip.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModulationParams {
    gamma: f64,
    phi_h: f64,
    phi_v: f64,
    theta: f64,
}

impl ModulationParams {
    /// Phases are reduced into `[-π, π)` and `theta` into `(-2π, 2π]`.
    pub fn new(gamma: f64, phi_h: f64, phi_v: f64, theta: f64) -> Result<Self> {
        if ![gamma, phi_h, phi_v, theta].iter().all(|x| x.is_finite()) {
            return Err(WalkError::NonFinite);
        }
        if gamma < 0.0 {
            return Err(WalkError::Config("modulation strength must be non-negative".into()));
        }
        Ok(ModulationParams { gamma, phi_h: reduce_angle(phi_h), phi_v: reduce_angle(phi_v), theta: reduce_theta(theta) })
    }

    /// No modulation, no rotation.
    pub fn identity() -> Self {
        ModulationParams { gamma: 0.0, phi_h: 0.0, phi_v: 0.0, theta: 0.0 }
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn phi_h(&self) -> f64 {
        self.phi_h
    }

    pub fn phi_v(&self) -> f64 {
        self.phi_v
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Modulation phase seen by polarization index `p` (0 = H).
    pub fn phase(&self, p: usize) -> f64 {
        if p == 0 {
            self.phi_h
        } else {
            self.phi_v
        }
    }
}

/// `R(θ)` has period 4π; keep θ in `(-2π, 2π]`.
fn reduce_theta(theta: f64) -> f64 {
    -2.0 * reduce_angle(-theta / 2.0)
}

/// One [`ModulationParams`] per roundtrip, in application order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Schedule(pub Vec<ModulationParams>);

impl Schedule {
    pub fn uniform(params: ModulationParams, steps: usize) -> Self {
        Schedule(vec![params; steps])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> core::slice::Iter<'_, ModulationParams> {
        self.0.iter()
    }
}

/// How the translation is carried out.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Engine {
    /// Kernel convolution with an open (truncated) boundary.
    Direct,
    /// Multiplication by `e^{iΓcos(q+φ)}` on the FFT grid; periodic boundary.
    #[default]
    Spectral,
}

impl Engine {
    pub fn boundary(self) -> Boundary {
        match self {
            Engine::Direct => Boundary::Truncated,
            Engine::Spectral => Boundary::Periodic,
        }
    }
}

/// Result of an open-boundary translation.
#[derive(Clone, Debug, PartialEq)]
pub struct Translation {
    pub state: LatticeState,
    /// Mass pushed past `±M` and dropped.
    pub norm_leak: f64,
    /// Boundary mass of the input, to judge whether the open boundary mattered.
    pub input_boundary_mass: f64,
}

impl Translation {
    pub fn leak_flagged(&self) -> bool {
        self.norm_leak > LEAK_FLAG
    }
}

/// `R(θ) = [[cos θ/2, -sin θ/2], [sin θ/2, cos θ/2]]` at every site.
pub fn apply_rotation(s: &LatticeState, theta: f64) -> LatticeState {
    let mut out = s.clone();
    rotate_in_place(&mut out, theta);
    out
}

fn rotate_in_place(s: &mut LatticeState, theta: f64) {
    if theta == 0.0 {
        return;
    }
    let (c, sn) = (cos(theta / 2.0), sin(theta / 2.0));
    let [h, v] = s.components_mut();
    for (a, b) in h.iter_mut().zip(v.iter_mut()) {
        let (x, y) = (*a, *b);
        *a = x * c - y * sn;
        *b = x * sn + y * c;
    }
}

/// Convolve each polarization with its kernel; amplitude leaving `[-M, M]` is
/// dropped.
pub fn apply_translation_with_kernels(s: &LatticeState, kernels: [&TranslationKernel; 2]) -> Translation {
    let input_boundary_mass = s.boundary_mass();
    let mut out = LatticeState::vacuum(s.config().with_boundary(Boundary::Truncated));
    let mut norm_leak = 0.0;
    for (pol, kernel) in Polarization::ALL.into_iter().zip(kernels) {
        norm_leak += convolve_open(s.component(pol), kernel, &mut out.components_mut()[pol.index()]);
    }
    Translation { state: out, norm_leak, input_boundary_mass }
}

/// `dst[i] = Σ_l c_l src[i - l]`, summed in fixed `l` order. Returns the
/// mass that lands outside the lattice.
fn convolve_open(src: &[C64], kernel: &TranslationKernel, dst: &mut [C64]) -> f64 {
    let n = src.len() as i64;
    let half = kernel.half_len() as i64;
    let mut lost = 0.0;
    for i in -half..n + half {
        let lo = (i - (n - 1)).max(-half);
        let hi = i.min(half);
        let mut acc = C64::new(0.0, 0.0);
        for l in lo..=hi {
            acc += kernel.coeffs()[(l + half) as usize] * src[(i - l) as usize];
        }
        if (0..n).contains(&i) {
            dst[i as usize] = acc;
        } else {
            lost += acc.norm_sqr();
        }
    }
    lost
}

/// Open-boundary translation with Jacobi–Anger kernels truncated at `tol`.
pub fn apply_translation_direct(s: &LatticeState, p: &ModulationParams, tol: f64) -> Result<Translation> {
    let kh = translation_kernel(p.gamma, p.phi_h, tol)?;
    let kv = translation_kernel(p.gamma, p.phi_v, tol)?;
    Ok(apply_translation_with_kernels(s, [&kh, &kv]))
}

/// Periodic translation: multiply the `q_j = 2πj/N` components by
/// `e^{iΓcos(q_j + φ_p)}`.
pub fn apply_translation_spectral(s: &LatticeState, p: &ModulationParams) -> LatticeState {
    let plan = FftPlan::new(s.config().size());
    let mut out = s.clone();
    spectral_in_place(&mut out, &plan, &[multipliers(&plan, p.gamma, p.phi_h), multipliers(&plan, p.gamma, p.phi_v)]);
    out
}

fn multipliers(plan: &FftPlan, gamma: f64, phi: f64) -> Vec<C64> {
    let n = plan.len();
    (0..n)
        .map(|k| {
            let q = TAU * k as f64 / n as f64;
            cis(gamma * cos(q + phi))
        })
        .collect()
}

fn spectral_in_place(s: &mut LatticeState, plan: &FftPlan, mults: &[Vec<C64>; 2]) {
    let n = plan.len() as f64;
    s.set_boundary(Boundary::Periodic);
    for (field, mult) in s.components_mut().iter_mut().zip(mults) {
        // Σ_m a_m e^{+iq m}; the e^{-iqM} offset of storage order cancels on the way back
        plan.inverse(field);
        field.iter_mut().zip(mult).for_each(|(a, m)| *a *= m);
        plan.forward(field);
        field.iter_mut().for_each(|a| *a /= n);
    }
}

/// One roundtrip: rotation, then translation.
pub fn step(s: &LatticeState, p: &ModulationParams, engine: Engine) -> Result<LatticeState> {
    Stepper::new(*s.config(), engine).step(s, p).map(|(state, _)| state)
}

/// Reusable stepping context: FFT plan and per-drive caches.
#[derive(Debug)]
pub struct Stepper {
    config: LatticeConfig,
    engine: Engine,
    kernel_tol: f64,
    plan: Option<FftPlan>,
    cached: Option<(ModulationParams, CachedDrive)>,
}

#[derive(Debug)]
enum CachedDrive {
    Kernels([TranslationKernel; 2]),
    Multipliers([Vec<C64>; 2]),
}

impl Stepper {
    pub fn new(config: LatticeConfig, engine: Engine) -> Self {
        let plan = (engine == Engine::Spectral).then(|| FftPlan::new(config.size()));
        Stepper { config, engine, kernel_tol: DEFAULT_TOL, plan, cached: None }
    }

    /// Kernel truncation tolerance for the direct engine.
    pub fn with_kernel_tol(mut self, tol: f64) -> Result<Self> {
        if !(tol > 0.0 && tol <= crate::kernel::MAX_TOL) {
            return Err(WalkError::Tolerance(tol));
        }
        self.kernel_tol = tol;
        self.cached = None;
        Ok(self)
    }

    pub fn engine(&self) -> Engine {
        self.engine
    }

    fn refresh_drive(&mut self, p: &ModulationParams) -> Result<()> {
        let stale = !matches!(&self.cached, Some((cp, _)) if cp == p);
        if stale {
            let drive = match self.engine {
                Engine::Direct => CachedDrive::Kernels([
                    translation_kernel(p.gamma, p.phi_h, self.kernel_tol)?,
                    translation_kernel(p.gamma, p.phi_v, self.kernel_tol)?,
                ]),
                Engine::Spectral => {
                    let plan = self.plan.as_ref().expect("spectral stepper has a plan");
                    CachedDrive::Multipliers([multipliers(plan, p.gamma, p.phi_h), multipliers(plan, p.gamma, p.phi_v)])
                }
            };
            self.cached = Some((*p, drive));
        }
        Ok(())
    }

    /// Advance one roundtrip; returns the new state and the open-boundary
    /// norm leak (always zero for the spectral engine).
    pub fn step(&mut self, s: &LatticeState, p: &ModulationParams) -> Result<(LatticeState, f64)> {
        if !s.config().same_sites(&self.config) {
            return Err(WalkError::ConfigMismatch);
        }
        self.refresh_drive(p)?;
        let mut rotated = apply_rotation(s, p.theta);
        match &self.cached.as_ref().expect("drive cached above").1 {
            CachedDrive::Kernels([kh, kv]) => {
                let t = apply_translation_with_kernels(&rotated, [kh, kv]);
                Ok((t.state, t.norm_leak))
            }
            CachedDrive::Multipliers(m) => {
                let plan = self.plan.as_ref().expect("spectral stepper has a plan");
                spectral_in_place(&mut rotated, plan, m);
                Ok((rotated, 0.0))
            }
        }
    }
}

/// Which optional per-step data an evolution keeps.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Record {
    /// Keep `P(m, n)` rows.
    pub distribution: bool,
    /// Keep full state snapshots.
    pub states: bool,
}

impl Record {
    pub const SCALARS: Record = Record { distribution: false, states: false };
    pub const DISTRIBUTION: Record = Record { distribution: true, states: false };
}

/// Apply `schedule` to `s`, recording observables after every roundtrip.
///
/// Fails with [`WalkError::BoundaryLeak`] as soon as more than
/// [`BOUNDARY_LIMIT`] of probability sits at the lattice edge.
pub fn evolve(s: &LatticeState, schedule: &Schedule, engine: Engine, record: Record) -> Result<Trajectory> {
    let mut stepper = Stepper::new(*s.config(), engine);
    evolve_with(&mut stepper, s, schedule, record)
}

/// [`evolve`] with a caller-supplied [`Stepper`].
pub fn evolve_with(stepper: &mut Stepper, s: &LatticeState, schedule: &Schedule, record: Record) -> Result<Trajectory> {
    let check = |step: usize, state: &LatticeState| {
        let mass = state.boundary_mass();
        if mass > BOUNDARY_LIMIT {
            Err(WalkError::BoundaryLeak { step, mass })
        } else {
            Ok(())
        }
    };
    check(0, s)?;
    let mut records = Vec::with_capacity(schedule.len() + 1);
    records.push(StepRecord::observe(0, s, s, 0.0, record.distribution, record.states));
    let mut state = s.clone();
    let mut leak = 0.0;
    for (i, p) in schedule.iter().enumerate() {
        let (next, l) = stepper.step(&state, p)?;
        leak += l;
        state = next;
        check(i + 1, &state)?;
        records.push(StepRecord::observe(i + 1, &state, s, leak, record.distribution, record.states));
    }
    Ok(Trajectory { records, final_state: state })
}
