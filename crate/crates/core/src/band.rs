//! Floquet bands of the roundtrip operator.
//!
//! At quasimomentum `q` the step operator is the 2×2 matrix
//!
//! ```text
//! M(q) = [[e^{iΓα} c, -e^{iΓα} s], [e^{iΓβ} s, e^{iΓβ} c]]
//! α = cos(q+φ_H), β = cos(q+φ_V), c = cos θ/2, s = sin θ/2
//! ```
//!
//! Its eigenvalues are `e^{i(σ ± γ)}` with `σ = Γ(α+β)/2` and
//! `cos γ = c·cos[Γ(α-β)/2]`, `γ ∈ [0, π]`. Quasienergies `ε` (units of Ω)
//! are defined by `λ = e^{-i2πε}` and folded into `(-0.5, 0.5]`. The `Plus`
//! branch is the eigenvalue `e^{i(σ+γ)}`, whose real part is
//! `cos σ cos γ - sin σ sin γ`.

use alloc::vec::Vec;

use crate::error::WalkError;
use crate::fft::FftPlan;
use crate::lattice::{Boundary, LatticeState, Polarization};
use crate::math::{arg, atan2, cis, cos, fold_quasienergy, round, sin, sqrt, C64, TAU};
use crate::matrix::Mat2;
use crate::step::ModulationParams;
use crate::Result;

/// Finite-difference step for group velocities.
pub const VELOCITY_STEP: f64 = 1e-4;

/// Eigenphase gap below which eigenvectors are not resolved.
const DEGENERACY_GAP: f64 = 1e-10;

/// Quasimomentum operator at one `q`, with its auxiliary cosines.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UkMatrix {
    pub matrix: Mat2,
    /// `cos(q + φ_H)`
    pub alpha: f64,
    /// `cos(q + φ_V)`
    pub beta: f64,
}

pub fn uk_matrix(p: &ModulationParams, q: f64) -> UkMatrix {
    let alpha = cos(q + p.phi_h());
    let beta = cos(q + p.phi_v());
    let (c, s) = (cos(p.theta() / 2.0), sin(p.theta() / 2.0));
    let eh = cis(p.gamma() * alpha);
    let ev = cis(p.gamma() * beta);
    UkMatrix { matrix: Mat2::new([[eh * c, -eh * s], [ev * s, ev * c]]), alpha, beta }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn other(self) -> Self {
        match self {
            Branch::Plus => Branch::Minus,
            Branch::Minus => Branch::Plus,
        }
    }

    fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// Closed-form pieces `(σ, cos γ, sin γ)` at `q`.
#[derive(Clone, Copy, Debug)]
struct ClosedForm {
    sigma: f64,
    cos_gamma: f64,
    sin_gamma: f64,
}

impl ClosedForm {
    fn at(p: &ModulationParams, q: f64) -> Self {
        let alpha = cos(q + p.phi_h());
        let beta = cos(q + p.phi_v());
        let g = p.gamma();
        let cos_gamma = cos(p.theta() / 2.0) * cos(0.5 * g * (alpha - beta));
        ClosedForm { sigma: 0.5 * g * (alpha + beta), cos_gamma, sin_gamma: sqrt((1.0 - cos_gamma * cos_gamma).max(0.0)) }
    }

    /// `γ ∈ [0, π]`.
    fn gamma(&self) -> f64 {
        atan2(self.sin_gamma, self.cos_gamma)
    }

    /// Unfolded eigenphase `σ ± γ` of the branch.
    fn phase(&self, branch: Branch) -> f64 {
        self.sigma + branch.sign() * self.gamma()
    }

    /// Smallest distance between the two eigenphases on the circle.
    fn gap(&self) -> f64 {
        let g = self.gamma();
        2.0 * g.min(core::f64::consts::PI - g)
    }
}

/// `(cos 2πε₊, cos 2πε₋) = (cos σ cos γ - sin σ sin γ, cos σ cos γ + sin σ sin γ)`.
pub fn quasienergy_cosines(p: &ModulationParams, q: f64) -> (f64, f64) {
    let cf = ClosedForm::at(p, q);
    let a = cos(cf.sigma) * cf.cos_gamma;
    let b = sin(cf.sigma) * cf.sin_gamma;
    (a - b, a + b)
}

/// `(ε₊, ε₋)` from the closed form, folded into `(-0.5, 0.5]`.
pub fn quasienergy_closed_form(p: &ModulationParams, q: f64) -> (f64, f64) {
    let cf = ClosedForm::at(p, q);
    (fold_quasienergy(-cf.phase(Branch::Plus) / TAU), fold_quasienergy(-cf.phase(Branch::Minus) / TAU))
}

/// Quasienergies, polarization projections and spinors at one `q`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BandPoint {
    pub q: f64,
    pub eps_plus: f64,
    pub eps_minus: f64,
    pub nz_plus: f64,
    pub nz_minus: f64,
    pub spinor_plus: [C64; 2],
    pub spinor_minus: [C64; 2],
}

impl BandPoint {
    fn swapped(self) -> Self {
        BandPoint {
            q: self.q,
            eps_plus: self.eps_minus,
            eps_minus: self.eps_plus,
            nz_plus: self.nz_minus,
            nz_minus: self.nz_plus,
            spinor_plus: self.spinor_minus,
            spinor_minus: self.spinor_plus,
        }
    }
}

/// `⟨σ_z⟩ = |v_H|² - |v_V|²`.
pub fn polarization_projection(v: &[C64; 2]) -> f64 {
    v[0].norm_sqr() - v[1].norm_sqr()
}

/// Fix the global phase: largest-magnitude component real and positive.
fn gauge_fix(v: [C64; 2]) -> [C64; 2] {
    let norm = sqrt(v[0].norm_sqr() + v[1].norm_sqr());
    let lead = if v[0].norm_sqr() >= v[1].norm_sqr() { v[0] } else { v[1] };
    let phase = cis(-arg(lead));
    [v[0] * phase / norm, v[1] * phase / norm]
}

/// Unit eigenvector of `m` for eigenvalue `lambda`, or `None` if `m = λI`.
fn null_vector(m: &Mat2, lambda: C64) -> Option<[C64; 2]> {
    let e = &m.entries;
    let a = [e[0][1], lambda - e[0][0]];
    let b = [lambda - e[1][1], e[1][0]];
    let na = a[0].norm_sqr() + a[1].norm_sqr();
    let nb = b[0].norm_sqr() + b[1].norm_sqr();
    let (v, n) = if na >= nb { (a, na) } else { (b, nb) };
    (n > 1e-28).then(|| gauge_fix(v))
}

/// Diagonalize the quasimomentum matrix directly.
///
/// Independent of the closed form. Branches are labeled so that `Plus` is the
/// more `H`-polarized eigenvector (`nz_plus ≥ nz_minus`).
pub fn quasienergy_numeric(p: &ModulationParams, q: f64) -> BandPoint {
    let m = uk_matrix(p, q).matrix;
    let half_trace = m.trace() * 0.5;
    let disc = half_trace * half_trace - m.determinant();
    let root = disc.sqrt();
    let (l1, l2) = (half_trace + root, half_trace - root);
    let (v1, v2) = match (null_vector(&m, l1), null_vector(&m, l2)) {
        (Some(a), Some(b)) => (a, b),
        // scalar matrix: any basis diagonalizes it
        _ => ([C64::new(1.0, 0.0), C64::new(0.0, 0.0)], [C64::new(0.0, 0.0), C64::new(1.0, 0.0)]),
    };
    let point = BandPoint {
        q,
        eps_plus: fold_quasienergy(-arg(l1) / TAU),
        eps_minus: fold_quasienergy(-arg(l2) / TAU),
        nz_plus: polarization_projection(&v1),
        nz_minus: polarization_projection(&v2),
        spinor_plus: v1,
        spinor_minus: v2,
    };
    if point.nz_plus >= point.nz_minus {
        point
    } else {
        point.swapped()
    }
}

/// Bands sampled on `q_j = -π + 2πj/N_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct BandGrid {
    pub params: ModulationParams,
    pub points: Vec<BandPoint>,
}

impl BandGrid {
    /// `max ε - min ε` of the unwrapped branch.
    pub fn branch_width(&self, branch: Branch) -> f64 {
        let eps: Vec<f64> = self
            .points
            .iter()
            .map(|pt| match branch {
                Branch::Plus => pt.eps_plus,
                Branch::Minus => pt.eps_minus,
            })
            .collect();
        let mut unwrapped = Vec::with_capacity(eps.len());
        let mut offset = 0.0;
        for (i, &e) in eps.iter().enumerate() {
            if i > 0 {
                let prev = eps[i - 1];
                offset -= round(e - prev);
            }
            unwrapped.push(e + offset);
        }
        let max = unwrapped.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = unwrapped.iter().cloned().fold(f64::INFINITY, f64::min);
        max - min
    }

    /// `max ε - min ε` of the folded values as stored.
    pub fn folded_width(&self, branch: Branch) -> f64 {
        let it = self.points.iter().map(|pt| match branch {
            Branch::Plus => pt.eps_plus,
            Branch::Minus => pt.eps_minus,
        });
        let (lo, hi) = it.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), e| (lo.min(e), hi.max(e)));
        hi - lo
    }
}

/// Sample both bands on a uniform grid.
///
/// The first point is labeled by the closed form; after that each branch
/// follows the eigenvector with the larger overlap to its predecessor.
pub fn band_grid(p: &ModulationParams, n_k: usize) -> Result<BandGrid> {
    if n_k < 16 {
        return Err(WalkError::Config("band grid needs at least 16 points".into()));
    }
    let mut points = Vec::with_capacity(n_k);
    for j in 0..n_k {
        let q = -core::f64::consts::PI + TAU * j as f64 / n_k as f64;
        let mut pt = quasienergy_numeric(p, q);
        let swap = match points.last() {
            None => {
                let (ep, _) = quasienergy_closed_form(p, q);
                circular_distance(pt.eps_minus, ep) < circular_distance(pt.eps_plus, ep)
            }
            Some(prev) => {
                let prev: &BandPoint = prev;
                let keep = overlap(&prev.spinor_plus, &pt.spinor_plus) + overlap(&prev.spinor_minus, &pt.spinor_minus);
                let cross = overlap(&prev.spinor_plus, &pt.spinor_minus) + overlap(&prev.spinor_minus, &pt.spinor_plus);
                cross > keep
            }
        };
        if swap {
            pt = pt.swapped();
        }
        points.push(pt);
    }
    Ok(BandGrid { params: *p, points })
}

fn overlap(a: &[C64; 2], b: &[C64; 2]) -> f64 {
    (a[0].conj() * b[0] + a[1].conj() * b[1]).norm_sqr()
}

fn circular_distance(a: f64, b: f64) -> f64 {
    let d = a - b;
    (d - round(d)).abs()
}

/// Velocity of a wavepacket on `branch`, in sites per roundtrip: `-2π dε/dq`.
///
/// Central difference of the unwrapped quasienergy with step
/// [`VELOCITY_STEP`]. Fails near a band touching, where the branch phase has
/// a kink.
pub fn group_velocity(p: &ModulationParams, q: f64, branch: Branch) -> Result<f64> {
    let h = VELOCITY_STEP;
    for x in [q - h, q, q + h] {
        if ClosedForm::at(p, x).gap() < 10.0 * h {
            return Err(WalkError::BandCrossing { q });
        }
    }
    let eps = |x: f64| {
        let (ep, em) = quasienergy_closed_form(p, x);
        match branch {
            Branch::Plus => ep,
            Branch::Minus => em,
        }
    };
    let mut d = eps(q + h) - eps(q - h);
    d -= round(d);
    Ok(-TAU * d / (2.0 * h))
}

/// Unit eigenvector of the branch, largest component real positive.
pub fn eigen_spinor(p: &ModulationParams, q: f64, branch: Branch) -> Result<[C64; 2]> {
    let cf = ClosedForm::at(p, q);
    if cf.gap() < DEGENERACY_GAP {
        return Err(WalkError::Degenerate { q });
    }
    let lambda = cis(cf.phase(branch));
    null_vector(&uk_matrix(p, q).matrix, lambda).ok_or(WalkError::Degenerate { q })
}

/// Eigenvalue `e^{i(σ±γ)}` of the branch.
pub fn branch_eigenvalue(p: &ModulationParams, q: f64, branch: Branch) -> C64 {
    cis(ClosedForm::at(p, q).phase(branch))
}

/// Keep only the `branch` part of every quasimomentum mode of `s`, using the
/// spectral projector `(U - λ')/(λ - λ')` on the `2M+1` periodic grid. The
/// result lives on a periodic lattice and is not renormalized.
pub fn project_onto_branch(s: &LatticeState, p: &ModulationParams, branch: Branch) -> Result<LatticeState> {
    let config = s.config().with_boundary(Boundary::Periodic);
    let n = config.size();
    let plan = FftPlan::new(n);
    let mut h = s.component(Polarization::H).to_vec();
    let mut v = s.component(Polarization::V).to_vec();
    plan.inverse(&mut h);
    plan.inverse(&mut v);
    for k in 0..n {
        let q = TAU * k as f64 / n as f64;
        let cf = ClosedForm::at(p, q);
        if cf.gap() < DEGENERACY_GAP {
            return Err(WalkError::Degenerate { q });
        }
        let (keep, drop) = (cis(cf.phase(branch)), cis(cf.phase(branch.other())));
        let u = uk_matrix(p, q).matrix;
        let x = [h[k], v[k]];
        let y = u.apply(&x);
        h[k] = (y[0] - drop * x[0]) / (keep - drop);
        v[k] = (y[1] - drop * x[1]) / (keep - drop);
    }
    plan.forward(&mut h);
    plan.forward(&mut v);
    let scale = 1.0 / n as f64;
    h.iter_mut().chain(v.iter_mut()).for_each(|a| *a *= scale);
    LatticeState::from_raw(config, h, v)
}

/// `|cos 2πε|`-level consistency of a pair with the closed form: returns the
/// largest mismatch after matching the pair either way round.
pub fn closed_form_mismatch(p: &ModulationParams, q: f64) -> f64 {
    let (cp, cm) = quasienergy_cosines(p, q);
    let pt = quasienergy_numeric(p, q);
    let (np, nm) = (cos(TAU * pt.eps_plus), cos(TAU * pt.eps_minus));
    let straight = (cp - np).abs().max((cm - nm).abs());
    let crossed = (cp - nm).abs().max((cm - np).abs());
    straight.min(crossed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn working_point(gamma: f64) -> ModulationParams {
        ModulationParams::new(gamma, 0.0, 0.75 * PI, -PI / 2.0).unwrap()
    }

    #[test]
    fn x_gate_matrix() {
        // θ = π, Γα = π, Γβ = 0 with Γ = π, φ_H = -q, φ_V = π/2 - q
        let q = 0.4;
        let p = ModulationParams::new(PI, -q, PI / 2.0 - q, PI).unwrap();
        let m = uk_matrix(&p, q).matrix;
        let x = Mat2::from_real([[0.0, 1.0], [1.0, 0.0]]);
        assert!(m.max_abs_diff(&x) < 1e-12);
    }

    #[test]
    fn identity_without_drive() {
        let m = uk_matrix(&ModulationParams::identity(), 1.0).matrix;
        assert!(m.max_abs_diff(&Mat2::identity()) < 1e-15);
    }

    #[test]
    fn unitary_with_expected_determinant() {
        for &g in &[0.0, 0.06 * PI, 1.0, PI, 3.0 * PI] {
            let p = ModulationParams::new(g, 0.3, -1.2, 0.9).unwrap();
            for j in 0..64 {
                let q = -PI + TAU * j as f64 / 64.0;
                let uk = uk_matrix(&p, q);
                assert!(uk.matrix.unitarity_error() < 1e-12);
                let det = cis(g * (uk.alpha + uk.beta));
                assert!((uk.matrix.determinant() - det).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn flat_bands_without_modulation() {
        let (ep, em) = quasienergy_closed_form(&working_point(0.0), 0.7);
        assert!((ep + 0.125).abs() < 1e-15);
        assert!((em - 0.125).abs() < 1e-15);
        let grid = band_grid(&working_point(0.0), 32).unwrap();
        assert!(grid.branch_width(Branch::Plus) < 1e-14);
        assert!(grid.branch_width(Branch::Minus) < 1e-14);
    }

    #[test]
    fn projections() {
        let h = [C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
        let v = [C64::new(0.0, 0.0), C64::new(0.0, 1.0)];
        let d = [C64::new(0.5f64.sqrt(), 0.0), C64::new(0.0, 0.5f64.sqrt())];
        assert_eq!(polarization_projection(&h), 1.0);
        assert_eq!(polarization_projection(&v), -1.0);
        assert!(polarization_projection(&d).abs() < 1e-15);
    }

    #[test]
    fn numeric_spinors_are_eigenvectors() {
        let p = working_point(PI);
        for j in 0..50 {
            let q = -PI + TAU * j as f64 / 50.0;
            let pt = quasienergy_numeric(&p, q);
            let m = uk_matrix(&p, q).matrix;
            for (v, eps) in [(pt.spinor_plus, pt.eps_plus), (pt.spinor_minus, pt.eps_minus)] {
                let mv = m.apply(&v);
                let lambda = cis(-TAU * eps);
                assert!((mv[0] - lambda * v[0]).norm() < 1e-12);
                assert!((mv[1] - lambda * v[1]).norm() < 1e-12);
            }
            assert!(overlap(&pt.spinor_plus, &pt.spinor_minus) < 1e-24);
            assert!(pt.nz_plus >= pt.nz_minus);
        }
    }

    #[test]
    fn eigen_spinor_cases() {
        assert!(matches!(eigen_spinor(&ModulationParams::identity(), 0.2, Branch::Plus), Err(WalkError::Degenerate { .. })));
        // Z gate: θ = 0, Γα = 0, Γβ = π
        let p = ModulationParams::new(PI, PI / 2.0, 0.0, 0.0).unwrap();
        let plus = eigen_spinor(&p, 0.0, Branch::Plus).unwrap();
        let minus = eigen_spinor(&p, 0.0, Branch::Minus).unwrap();
        let basis = [plus, minus];
        let has = |target: usize| basis.iter().any(|v| (v[target] - C64::new(1.0, 0.0)).norm() < 1e-12);
        assert!(has(0) && has(1));
    }

    #[test]
    fn velocity_zero_without_modulation() {
        let p = working_point(0.0);
        for j in 0..16 {
            let q = -PI + TAU * j as f64 / 16.0;
            assert!(group_velocity(&p, q, Branch::Plus).unwrap().abs() < 1e-9);
            assert!(group_velocity(&p, q, Branch::Minus).unwrap().abs() < 1e-9);
        }
    }

    #[test]
    fn velocity_flags_band_touching() {
        // θ = 0 and Γ = 0 gives cos γ = 1 everywhere
        let p = ModulationParams::new(0.0, 0.0, 0.0, 0.0).unwrap();
        assert!(matches!(group_velocity(&p, 0.1, Branch::Plus), Err(WalkError::BandCrossing { .. })));
    }

    #[test]
    fn grid_is_periodic() {
        let p = working_point(3.0 * PI);
        let start = quasienergy_closed_form(&p, -PI);
        let end = quasienergy_closed_form(&p, PI);
        assert!(circular_distance(start.0, end.0) < 1e-12);
        assert!(circular_distance(start.1, end.1) < 1e-12);
        let grid = band_grid(&p, 64).unwrap();
        assert_eq!(grid.points.len(), 64);
        assert!(grid.points.windows(2).all(|w| w[1].q > w[0].q));
        assert!(band_grid(&p, 15).is_err());
    }

    #[test]
    fn branch_projectors_split_a_state() {
        use crate::lattice::{LatticeConfig, WavepacketSpec};
        let p = working_point(PI);
        let cfg = LatticeConfig::periodic(120).unwrap();
        let spec = WavepacketSpec::new(12.0, 0.3, [C64::new(0.8, 0.0), C64::new(0.0, 0.6)]).unwrap();
        let s = LatticeState::make_gaussian(&spec, cfg).unwrap();
        let plus = project_onto_branch(&s, &p, Branch::Plus).unwrap();
        let minus = project_onto_branch(&s, &p, Branch::Minus).unwrap();
        assert!(plus.superpose(&minus).unwrap().max_abs_diff(&s).unwrap() < 1e-13);
        assert!(plus.overlap(&minus).unwrap().norm() < 1e-13);
        let again = project_onto_branch(&plus, &p, Branch::Plus).unwrap();
        assert!(again.max_abs_diff(&plus).unwrap() < 1e-13);
    }
}
