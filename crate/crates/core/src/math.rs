//! Float shim over `libm`; `core` has no transcendental functions.

use core::f64::consts::PI;

pub type C64 = num_complex::Complex64;

pub(crate) const TAU: f64 = 2.0 * PI;

#[inline]
pub(crate) fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub(crate) fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub(crate) fn acos(x: f64) -> f64 {
    libm::acos(x)
}

#[inline]
pub(crate) fn atan2(y: f64, x: f64) -> f64 {
    libm::atan2(y, x)
}

#[inline]
pub(crate) fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub(crate) fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub(crate) fn floor(x: f64) -> f64 {
    libm::floor(x)
}

#[inline]
pub(crate) fn ceil(x: f64) -> f64 {
    libm::ceil(x)
}

#[inline]
pub(crate) fn round(x: f64) -> f64 {
    libm::round(x)
}

/// `e^{iθ}`.
#[inline]
pub(crate) fn cis(theta: f64) -> C64 {
    C64::new(cos(theta), sin(theta))
}

/// Argument of a complex number in `(-π, π]`.
#[inline]
pub(crate) fn arg(z: C64) -> f64 {
    atan2(z.im, z.re)
}

#[inline]
pub(crate) fn cabs(z: C64) -> f64 {
    libm::hypot(z.re, z.im)
}

/// Reduce an angle into `[-π, π)`.
pub fn reduce_angle(x: f64) -> f64 {
    let r = x - TAU * floor((x + PI) / TAU);
    // floor can land exactly on the upper edge after rounding
    if r >= PI {
        r - TAU
    } else if r < -PI {
        r + TAU
    } else {
        r
    }
}

/// Fold a quasienergy (units of Ω) into `(-0.5, 0.5]`.
pub(crate) fn fold_quasienergy(eps: f64) -> f64 {
    let r = eps - round(eps);
    if r <= -0.5 {
        r + 1.0
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduce_angle_range() {
        for &x in &[0.0, PI, -PI, 3.0 * PI, -7.5, 100.0, 1e-17, -1e-17] {
            let r = reduce_angle(x);
            assert!((-PI..PI).contains(&r), "{x} -> {r}");
            let k = (x - r) / TAU;
            assert!((k - round(k)).abs() < 1e-9);
        }
        assert_eq!(reduce_angle(PI), -PI);
    }

    #[test]
    fn fold_range() {
        assert_eq!(fold_quasienergy(0.5), 0.5);
        assert_eq!(fold_quasienergy(-0.5), 0.5);
        assert!((fold_quasienergy(0.75) + 0.25).abs() < 1e-15);
        assert!((fold_quasienergy(-1.125) + 0.125).abs() < 1e-15);
    }
}
