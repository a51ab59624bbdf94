//! The truncated frequency lattice and the walker's wavefunction on it.
//!
//! Sites `m ∈ [-M, M]` are resonant modes `ω_m = mΩ` (units `Ω = 1`,
//! `ω_0 = 0`); each site carries an `H` and a `V` amplitude. Quasimomentum is
//! stored dimensionless, `q ∈ [-π, π)`, and plane waves are `e^{-iqm}` so that
//! the `q`-component of a field is `Σ_m a_m e^{+iqm}`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::WalkError;
use crate::math::{cabs, cis, exp, ln, reduce_angle, sqrt, C64};
use crate::Result;

/// Width (in sites) of the edge strip watched by [`LatticeState::boundary_mass`].
pub const BOUNDARY_STRIP: usize = 5;

/// Gaussian tail allowed at the lattice edge, `e^{-M²/Δ²}`.
const GAUSSIAN_EDGE_TAIL: f64 = 1e-8;

/// Pseudo-spin of the walker. `H` always precedes `V` in vectors and matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarization {
    H,
    V,
}

impl Polarization {
    pub const ALL: [Polarization; 2] = [Polarization::H, Polarization::V];

    #[inline]
    pub const fn index(self) -> usize {
        match self {
            Polarization::H => 0,
            Polarization::V => 1,
        }
    }

    /// Unit spinor `|H⟩` or `|V⟩`.
    pub fn basis(self) -> [C64; 2] {
        let mut v = [C64::new(0.0, 0.0); 2];
        v[self.index()] = C64::new(1.0, 0.0);
        v
    }
}

/// Boundary semantics of the finite lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Boundary {
    /// Sites wrap around (circular convolution).
    Periodic,
    /// Amplitude pushed past `±M` is lost.
    Truncated,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LatticeConfig {
    half_width: usize,
    boundary: Boundary,
}

impl LatticeConfig {
    pub fn new(half_width: usize, boundary: Boundary) -> Result<Self> {
        if half_width == 0 {
            return Err(WalkError::Config("half-width must be at least 1".into()));
        }
        Ok(LatticeConfig { half_width, boundary })
    }

    pub fn periodic(half_width: usize) -> Result<Self> {
        Self::new(half_width, Boundary::Periodic)
    }

    pub fn half_width(&self) -> usize {
        self.half_width
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn with_boundary(self, boundary: Boundary) -> Self {
        LatticeConfig { boundary, ..self }
    }

    /// Number of sites, `2M + 1`.
    pub fn size(&self) -> usize {
        2 * self.half_width + 1
    }

    /// Storage index of site `m`, if it lies on the lattice.
    pub fn index_of(&self, m: i64) -> Option<usize> {
        let shifted = m.checked_add(self.half_width as i64)?;
        (0..self.size() as i64).contains(&shifted).then_some(shifted as usize)
    }

    /// Site label of storage index `i`.
    pub fn site(&self, i: usize) -> i64 {
        i as i64 - self.half_width as i64
    }

    /// All site labels in storage order.
    pub fn sites(&self) -> impl Iterator<Item = i64> {
        let m = self.half_width as i64;
        -m..=m
    }

    /// Same geometry (boundary semantics may differ).
    pub fn same_sites(&self, other: &LatticeConfig) -> bool {
        self.half_width == other.half_width
    }
}

/// Gaussian excitation `e^{-m²/Δ²} e^{-iqm} e_s`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WavepacketSpec {
    delta: f64,
    q: f64,
    spin: [C64; 2],
}

impl WavepacketSpec {
    /// `spin` is normalized here; `q` is reduced into `[-π, π)`.
    pub fn new(delta: f64, q: f64, spin: [C64; 2]) -> Result<Self> {
        if !delta.is_finite() || !q.is_finite() || spin.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(WalkError::NonFinite);
        }
        if delta <= 0.0 {
            return Err(WalkError::Config("wavepacket width must be positive".into()));
        }
        let norm = sqrt(spin[0].norm_sqr() + spin[1].norm_sqr());
        if norm == 0.0 {
            return Err(WalkError::NotNormalized(0.0));
        }
        Ok(WavepacketSpec { delta, q: reduce_angle(q), spin: [spin[0] / norm, spin[1] / norm] })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn spin(&self) -> [C64; 2] {
        self.spin
    }

    /// Smallest half-width satisfying the Gaussian edge-tail requirement.
    pub fn min_half_width(&self) -> usize {
        (self.delta * sqrt(-ln(GAUSSIAN_EDGE_TAIL))) as usize + 1
    }
}

/// Complex amplitudes `a_{m,p}` over the lattice.
///
/// Constructors return unit-norm states. Stepping preserves the norm only up
/// to boundary losses; [`LatticeState::vacuum`] and [`LatticeState::from_raw`]
/// build unnormalized fields for composite registers.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeState {
    config: LatticeConfig,
    amp: [Vec<C64>; 2],
}

impl LatticeState {
    /// All amplitude at `(m0, p)`.
    pub fn make_single_site(m0: i64, p: Polarization, config: LatticeConfig) -> Result<Self> {
        let idx = config.index_of(m0).ok_or(WalkError::SiteOutOfRange { site: m0, half_width: config.half_width })?;
        let mut state = Self::vacuum(config);
        state.amp[p.index()][idx] = C64::new(1.0, 0.0);
        Ok(state)
    }

    /// Normalized Gaussian packet centred on `m = 0`.
    pub fn make_gaussian(spec: &WavepacketSpec, config: LatticeConfig) -> Result<Self> {
        let m_max = config.half_width as f64;
        let delta = spec.delta;
        if exp(-(m_max * m_max) / (delta * delta)) >= GAUSSIAN_EDGE_TAIL {
            return Err(WalkError::PacketTooWide { delta, half_width: config.half_width });
        }
        let n = config.size();
        let mut h = Vec::with_capacity(n);
        let mut v = Vec::with_capacity(n);
        for m in config.sites() {
            let mf = m as f64;
            let env = exp(-(mf * mf) / (delta * delta));
            // reduce qm before the trig call to keep the phase exact for large m
            let phase = cis(-reduce_angle(spec.q * mf)) * env;
            h.push(phase * spec.spin[0]);
            v.push(phase * spec.spin[1]);
        }
        let mut state = LatticeState { config, amp: [h, v] };
        state.normalize()?;
        Ok(state)
    }

    /// Normalizing constructor from per-polarization amplitude vectors.
    pub fn from_amplitudes(config: LatticeConfig, h: Vec<C64>, v: Vec<C64>) -> Result<Self> {
        let mut state = Self::from_raw(config, h, v)?;
        state.normalize()?;
        Ok(state)
    }

    /// Wrap amplitudes as-is (no normalization).
    pub fn from_raw(config: LatticeConfig, h: Vec<C64>, v: Vec<C64>) -> Result<Self> {
        if h.len() != config.size() || v.len() != config.size() {
            return Err(WalkError::Config("amplitude vector length does not match lattice".into()));
        }
        if h.iter().chain(&v).any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(WalkError::NonFinite);
        }
        Ok(LatticeState { config, amp: [h, v] })
    }

    /// The zero field.
    pub fn vacuum(config: LatticeConfig) -> Self {
        let n = config.size();
        LatticeState { config, amp: [vec![C64::new(0.0, 0.0); n], vec![C64::new(0.0, 0.0); n]] }
    }

    fn normalize(&mut self) -> Result<()> {
        let norm = self.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(WalkError::NotNormalized(norm));
        }
        let inv = 1.0 / norm;
        self.amp.iter_mut().flatten().for_each(|z| *z *= inv);
        Ok(())
    }

    pub fn config(&self) -> &LatticeConfig {
        &self.config
    }

    pub(crate) fn set_boundary(&mut self, boundary: Boundary) {
        self.config = self.config.with_boundary(boundary);
    }

    pub fn amplitude(&self, m: i64, p: Polarization) -> Option<C64> {
        self.config.index_of(m).map(|i| self.amp[p.index()][i])
    }

    /// Amplitudes of one polarization in site order.
    pub fn component(&self, p: Polarization) -> &[C64] {
        &self.amp[p.index()]
    }

    pub(crate) fn components_mut(&mut self) -> &mut [Vec<C64>; 2] {
        &mut self.amp
    }

    /// Multiply every amplitude by `s`.
    pub fn scaled(&self, s: C64) -> Self {
        let mut out = self.clone();
        out.amp.iter_mut().flatten().for_each(|z| *z *= s);
        out
    }

    /// Amplitude-wise sum of two fields on the same lattice.
    pub fn superpose(&self, other: &LatticeState) -> Result<Self> {
        if !self.config.same_sites(&other.config) {
            return Err(WalkError::ConfigMismatch);
        }
        let mut out = self.clone();
        for (dst, src) in out.amp.iter_mut().zip(&other.amp) {
            dst.iter_mut().zip(src).for_each(|(a, b)| *a += b);
        }
        Ok(out)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amp.iter().flatten().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        sqrt(self.norm_sqr())
    }

    /// `P(m) = Σ_p |a_{m,p}|²` in site order.
    pub fn probability_distribution(&self) -> Vec<f64> {
        self.amp[0].iter().zip(&self.amp[1]).map(|(h, v)| h.norm_sqr() + v.norm_sqr()).collect()
    }

    /// `M = √(Σ_m m² P(m))`.
    pub fn diffusion_distance(&self) -> f64 {
        let second: f64 = self.config.sites().zip(self.probability_distribution()).map(|(m, p)| (m * m) as f64 * p).sum();
        sqrt(second)
    }

    /// `⟨m⟩ = Σ_m m P(m)`.
    pub fn centroid(&self) -> f64 {
        self.config.sites().zip(self.probability_distribution()).map(|(m, p)| m as f64 * p).sum()
    }

    /// Probability held within [`BOUNDARY_STRIP`] sites of either edge.
    pub fn boundary_mass(&self) -> f64 {
        let probs = self.probability_distribution();
        let n = probs.len();
        let strip = BOUNDARY_STRIP.min(n.div_ceil(2));
        if 2 * strip >= n {
            return probs.iter().sum();
        }
        probs[..strip].iter().chain(&probs[n - strip..]).sum()
    }

    /// `⟨other|self⟩`.
    pub fn overlap(&self, other: &LatticeState) -> Result<C64> {
        if !self.config.same_sites(&other.config) {
            return Err(WalkError::ConfigMismatch);
        }
        Ok(self.amp.iter().zip(&other.amp).flat_map(|(a, b)| a.iter().zip(b)).map(|(a, b)| b.conj() * a).sum())
    }

    /// `|⟨s0|self⟩|²`.
    pub fn return_probability(&self, s0: &LatticeState) -> Result<f64> {
        Ok(self.overlap(s0)?.norm_sqr())
    }

    /// Raw `q`-component `v[p] = Σ_m a_{m,p} e^{+iqm}`.
    pub fn q_component(&self, q: f64) -> [C64; 2] {
        let mut out = [C64::new(0.0, 0.0); 2];
        for (p, o) in out.iter_mut().enumerate() {
            *o = self.config.sites().zip(&self.amp[p]).map(|(m, a)| a * cis(reduce_angle(q * m as f64))).sum();
        }
        out
    }

    /// Normalized polarization spinor carried by the `q`-component.
    pub fn spin_projection_at_q(&self, q: f64) -> Result<[C64; 2]> {
        let v = self.q_component(q);
        let norm = sqrt(v[0].norm_sqr() + v[1].norm_sqr());
        if norm <= 1e-300 || !norm.is_finite() {
            return Err(WalkError::NoAmplitudeAtQ { q });
        }
        Ok([v[0] / norm, v[1] / norm])
    }

    /// Largest entrywise amplitude difference to another state.
    pub fn max_abs_diff(&self, other: &LatticeState) -> Result<f64> {
        if !self.config.same_sites(&other.config) {
            return Err(WalkError::ConfigMismatch);
        }
        Ok(self.amp.iter().zip(&other.amp).flat_map(|(a, b)| a.iter().zip(b)).map(|(a, b)| cabs(a - b)).fold(0.0, f64::max))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn cfg(m: usize) -> LatticeConfig {
        LatticeConfig::periodic(m).unwrap()
    }

    #[test]
    fn single_site_basics() {
        let s = LatticeState::make_single_site(0, Polarization::H, cfg(8)).unwrap();
        assert_eq!(s.norm(), 1.0);
        assert_eq!(s.amplitude(0, Polarization::H), Some(C64::new(1.0, 0.0)));
        assert_eq!(s.diffusion_distance(), 0.0);
        let p = s.probability_distribution();
        assert_eq!(p.iter().filter(|&&x| x != 0.0).count(), 1);
        assert_eq!(p[8], 1.0);
    }

    #[test]
    fn single_site_out_of_range() {
        let err = LatticeState::make_single_site(9, Polarization::H, cfg(8)).unwrap_err();
        assert_eq!(err, WalkError::SiteOutOfRange { site: 9, half_width: 8 });
        assert!(LatticeState::make_single_site(-9, Polarization::V, cfg(8)).is_err());
        assert!(LatticeConfig::periodic(0).is_err());
    }

    #[test]
    fn centroid_and_distance() {
        let s = LatticeState::make_single_site(3, Polarization::V, cfg(8)).unwrap();
        assert_eq!(s.centroid(), 3.0);
        let c = cfg(4);
        let mut h = vec![C64::new(0.0, 0.0); 9];
        h[c.index_of(2).unwrap()] = C64::new(1.0, 0.0);
        h[c.index_of(-2).unwrap()] = C64::new(0.0, 1.0);
        let s = LatticeState::from_amplitudes(c, h, vec![C64::new(0.0, 0.0); 9]).unwrap();
        assert!((s.diffusion_distance() - 2.0).abs() < 1e-15);
        assert!(s.centroid().abs() < 1e-15);
    }

    #[test]
    fn narrow_gaussian_concentrates_at_origin() {
        let spec = WavepacketSpec::new(0.3, 0.0, [C64::new(1.0, 0.0), C64::new(0.0, 0.0)]).unwrap();
        let s = LatticeState::make_gaussian(&spec, cfg(8)).unwrap();
        assert!((s.norm() - 1.0).abs() < 1e-12);
        assert!(s.probability_distribution()[8] >= 0.999);
    }

    #[test]
    fn gaussian_too_wide() {
        let spec = WavepacketSpec::new(25.0, 0.0, Polarization::H.basis()).unwrap();
        let err = LatticeState::make_gaussian(&spec, cfg(100)).unwrap_err();
        assert!(matches!(err, WalkError::PacketTooWide { .. }));
        assert!(LatticeState::make_gaussian(&spec, cfg(spec.min_half_width())).is_ok());
        assert!(LatticeState::make_gaussian(&spec, cfg(spec.min_half_width() - 2)).is_err());
    }

    #[test]
    fn wavepacket_spec_validation() {
        let spec = WavepacketSpec::new(5.0, 3.0 * PI, [C64::new(3.0, 0.0), C64::new(0.0, 4.0)]).unwrap();
        assert!((spec.q() + PI).abs() < 1e-12);
        assert!((spec.spin()[0].re - 0.6).abs() < 1e-15);
        assert!(WavepacketSpec::new(-1.0, 0.0, Polarization::H.basis()).is_err());
        assert!(WavepacketSpec::new(1.0, f64::NAN, Polarization::H.basis()).is_err());
        assert!(WavepacketSpec::new(1.0, 0.0, [C64::new(0.0, 0.0); 2]).is_err());
    }

    #[test]
    fn spin_projection_recovers_spinor() {
        let es = [C64::new(0.6, 0.0), C64::new(0.0, 0.8)];
        let spec = WavepacketSpec::new(10.0, 0.27 * PI, es).unwrap();
        let s = LatticeState::make_gaussian(&spec, cfg(60)).unwrap();
        let v = s.spin_projection_at_q(0.27 * PI).unwrap();
        let f = (v[0].conj() * es[0] + v[1].conj() * es[1]).norm_sqr();
        assert!(f > 1.0 - 1e-10);
        assert!(LatticeState::vacuum(cfg(3)).spin_projection_at_q(0.0).is_err());
    }

    #[test]
    fn return_probability_cases() {
        let a = LatticeState::make_single_site(0, Polarization::H, cfg(4)).unwrap();
        let b = LatticeState::make_single_site(0, Polarization::V, cfg(4)).unwrap();
        assert_eq!(a.return_probability(&a).unwrap(), 1.0);
        assert_eq!(a.return_probability(&b).unwrap(), 0.0);
        let c = LatticeState::make_single_site(0, Polarization::V, cfg(5)).unwrap();
        assert_eq!(a.return_probability(&c), Err(WalkError::ConfigMismatch));
    }

    #[test]
    fn boundary_mass_strip() {
        let c = cfg(20);
        let edge = LatticeState::make_single_site(-16, Polarization::H, c).unwrap();
        assert_eq!(edge.boundary_mass(), 1.0);
        let inner = LatticeState::make_single_site(-15, Polarization::H, c).unwrap();
        assert_eq!(inner.boundary_mass(), 0.0);
    }
}
