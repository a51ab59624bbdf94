//! Truncated Jacobi–Anger hop amplitudes of one phase modulator.
//!
//! A phase modulation `e^{iΓcos(t+φ)}` moves amplitude from site `m` to
//! `m + l` with weight `c_l = i^l J_l(Γ) e^{ilφ}`. The list is cut at the
//! smallest `L` whose discarded power `Σ_{|l|>L} J_l²` is below a tolerance.

use alloc::vec::Vec;

use crate::bessel::bessel_j_sequence;
use crate::error::WalkError;
use crate::math::{cis, reduce_angle, C64};
use crate::Result;

/// Default truncation tolerance for kernels.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Largest accepted truncation tolerance.
pub const MAX_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct TranslationKernel {
    gamma: f64,
    phi: f64,
    half_len: usize,
    /// `c_l` for `l ∈ [-L, L]`, index `l + L`
    coeffs: Vec<C64>,
    tail_bound: f64,
}

/// Build the kernel for modulation strength `gamma ≥ 0` and phase `phi`.
pub fn translation_kernel(gamma: f64, phi: f64, tol: f64) -> Result<TranslationKernel> {
    if !(tol > 0.0 && tol <= MAX_TOL) {
        return Err(WalkError::Tolerance(tol));
    }
    if !gamma.is_finite() || !phi.is_finite() {
        return Err(WalkError::NonFinite);
    }
    if gamma < 0.0 {
        return Err(WalkError::Config("modulation strength must be non-negative".into()));
    }
    let bessel = bessel_table(gamma)?;
    // tails[L] = Σ_{|l|>L} J_l², accumulated from the top for accuracy
    let mut tails = alloc::vec![0.0; bessel.len()];
    for l in (0..bessel.len() - 1).rev() {
        tails[l] = tails[l + 1] + 2.0 * bessel[l + 1] * bessel[l + 1];
    }
    let half_len = tails.iter().position(|&t| t < tol).expect("bessel table extends past the tolerance");
    let phi = reduce_angle(phi);
    let coeffs = (-(half_len as i64)..=half_len as i64)
        .map(|l| {
            let j = bessel[l.unsigned_abs() as usize];
            let j = if l < 0 && l % 2 != 0 { -j } else { j };
            i_pow(l) * cis(reduce_angle(l as f64 * phi)) * j
        })
        .collect();
    Ok(TranslationKernel { gamma, phi, half_len, coeffs, tail_bound: tails[half_len] })
}

/// `J_0..J_n(Γ)` with `n` far enough out that the remaining power is negligible.
fn bessel_table(gamma: f64) -> Result<Vec<f64>> {
    let mut n = (gamma as usize) + 32;
    loop {
        let table = bessel_j_sequence(n, gamma)?;
        let edge = table[n - 1].abs().max(table[n].abs());
        if edge < 1e-30 {
            return Ok(table);
        }
        n *= 2;
    }
}

fn i_pow(l: i64) -> C64 {
    match l.rem_euclid(4) {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    }
}

impl TranslationKernel {
    /// Kernel that moves everything by exactly `shift` sites.
    pub fn unit_shift(shift: i64) -> Self {
        let half_len = shift.unsigned_abs() as usize;
        let mut coeffs = alloc::vec![C64::new(0.0, 0.0); 2 * half_len + 1];
        coeffs[(shift + half_len as i64) as usize] = C64::new(1.0, 0.0);
        TranslationKernel { gamma: f64::NAN, phi: 0.0, half_len, coeffs, tail_bound: 0.0 }
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Truncation order `L`.
    pub fn half_len(&self) -> usize {
        self.half_len
    }

    /// Discarded power `Σ_{|l|>L} |c_l|²`.
    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// `c_l`, zero beyond the truncation.
    pub fn coeff(&self, l: i64) -> C64 {
        let idx = l + self.half_len as i64;
        if (0..self.coeffs.len() as i64).contains(&idx) {
            self.coeffs[idx as usize]
        } else {
            C64::new(0.0, 0.0)
        }
    }

    /// Pairs `(l, c_l)`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, C64)> + '_ {
        let l0 = -(self.half_len as i64);
        self.coeffs.iter().enumerate().map(move |(i, &c)| (l0 + i as i64, c))
    }

    /// `Σ |c_l|²` over the kept terms.
    pub fn power(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Kernel symbol `Σ_l c_l e^{iql}`, which approximates `e^{iΓcos(q+φ)}`.
    pub fn symbol(&self, q: f64) -> C64 {
        self.iter().map(|(l, c)| c * cis(reduce_angle(q * l as f64))).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bessel::bessel_j;
    use core::f64::consts::PI;

    #[test]
    fn zero_modulation_is_identity() {
        let k = translation_kernel(0.0, 1.234, 1e-12).unwrap();
        assert_eq!(k.half_len(), 0);
        assert_eq!(k.coeffs(), &[C64::new(1.0, 0.0)]);
    }

    #[test]
    fn first_sideband_at_pi() {
        let k = translation_kernel(PI, 0.0, 1e-14).unwrap();
        // J_1(π) from the ascending series, 40 digits
        let c1 = k.coeff(1);
        assert!(c1.re.abs() < 1e-16);
        assert!((c1.im - 0.284_615_343_179_752_8).abs() < 1e-14);
        assert!(k.tail_bound() < 1e-14);
    }

    #[test]
    fn tolerance_range() {
        assert_eq!(translation_kernel(1.0, 0.0, 0.0), Err(WalkError::Tolerance(0.0)));
        assert_eq!(translation_kernel(1.0, 0.0, 1e-5), Err(WalkError::Tolerance(1e-5)));
        assert!(translation_kernel(1.0, 0.0, 1e-6).is_ok());
        assert!(translation_kernel(-1.0, 0.0, 1e-9).is_err());
    }

    #[test]
    fn smallest_truncation() {
        for &g in &[0.06 * PI, 1.0, PI, 3.0 * PI, 30.0] {
            for &tol in &[1e-6, 1e-9, 1e-12] {
                let k = translation_kernel(g, 0.3, tol).unwrap();
                let l = k.half_len();
                assert!(k.tail_bound() < tol);
                assert!((1.0 - k.power()).abs() <= tol);
                if l > 0 {
                    let shorter = k.tail_bound() + 2.0 * k.coeff(l as i64).norm_sqr();
                    assert!(shorter >= tol, "L={l} not minimal for Γ={g}, tol={tol}");
                }
            }
        }
    }

    #[test]
    fn symbol_is_jacobi_anger() {
        let (g, phi) = (3.0 * PI, 0.75 * PI);
        let k = translation_kernel(g, phi, 1e-14).unwrap();
        // amplitude error is bounded by Σ|J_l| over the dropped orders
        let l = k.half_len() as i32;
        let dropped: f64 = (l + 1..l + 60).map(|n| 2.0 * bessel_j(n, g).unwrap().abs()).sum();
        assert!(dropped < 1e-6);
        for i in 0..64 {
            let q = -PI + 2.0 * PI * i as f64 / 64.0;
            let want = cis(g * crate::math::cos(q + phi));
            assert!((k.symbol(q) - want).norm() <= dropped + 1e-13);
        }
    }

    #[test]
    fn unit_shift_kernel() {
        let k = TranslationKernel::unit_shift(-1);
        assert_eq!(k.coeff(-1), C64::new(1.0, 0.0));
        assert_eq!(k.coeff(0), C64::new(0.0, 0.0));
        assert_eq!(k.coeff(1), C64::new(0.0, 0.0));
    }
}
