//! Bessel functions of the first kind, `J_l(x)`, for integer order.
//!
//! Small arguments use the ascending series. Otherwise the whole sequence
//! `J_0..J_n` comes from Miller's backward recurrence
//! `J_{k-1} = (2k/x) J_k - J_{k+1}`, normalized with
//! `J_0 + 2 Σ_{k≥1} J_{2k} = 1`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::WalkError;
use crate::math::{ceil, sqrt};
use crate::Result;

/// Below this argument the ascending series is used.
const SERIES_LIMIT: f64 = 2.0;

const RESCALE_ABOVE: f64 = 1e250;
const RESCALE_BY: f64 = 1e-250;

/// `J_l(x)` for any integer order and finite `x`.
pub fn bessel_j(order: i32, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(WalkError::NonFinite);
    }
    let n = order.unsigned_abs() as usize;
    let mut value = bessel_j_sequence(n, x.abs())?[n];
    // J_{-n} = (-1)^n J_n and J_n(-x) = (-1)^n J_n(x)
    if n % 2 == 1 && ((order < 0) != (x < 0.0)) {
        value = -value;
    }
    Ok(value)
}

/// `[J_0(x), J_1(x), …, J_{max_order}(x)]` for `x ≥ 0`.
pub fn bessel_j_sequence(max_order: usize, x: f64) -> Result<Vec<f64>> {
    if !x.is_finite() {
        return Err(WalkError::NonFinite);
    }
    if x < 0.0 {
        return Err(WalkError::Config("bessel_j_sequence needs x >= 0".into()));
    }
    if x == 0.0 {
        let mut out = vec![0.0; max_order + 1];
        out[0] = 1.0;
        return Ok(out);
    }
    if x < SERIES_LIMIT {
        return Ok((0..=max_order).map(|n| ascending_series(n, x)).collect());
    }
    Ok(miller(max_order, x))
}

/// `Σ_k (-1)^k (x/2)^{2k+n} / (k! (k+n)!)`.
fn ascending_series(n: usize, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut lead = 1.0;
    for j in 1..=n {
        lead *= half / j as f64;
    }
    if lead == 0.0 {
        return 0.0;
    }
    let q = -half * half;
    let mut term = lead;
    let mut sum = lead;
    for k in 1..200 {
        term *= q / (k as f64 * (k + n) as f64);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

fn miller(max_order: usize, x: f64) -> Vec<f64> {
    let top = (max_order as f64).max(x);
    let mut start = ceil(top + 20.0 + sqrt(60.0 * top)) as usize;
    if start % 2 == 1 {
        start += 1;
    }
    let mut vals = vec![0.0; start + 2];
    vals[start] = 1e-30;
    let two_over_x = 2.0 / x;
    for k in (1..=start).rev() {
        vals[k - 1] = k as f64 * two_over_x * vals[k] - vals[k + 1];
        if vals[k - 1].abs() > RESCALE_ABOVE {
            vals[k - 1..].iter_mut().for_each(|v| *v *= RESCALE_BY);
        }
    }
    let even_sum: f64 = vals.iter().step_by(2).skip(1).sum();
    let norm = vals[0] + 2.0 * even_sum;
    vals.truncate(max_order + 1);
    vals.iter_mut().for_each(|v| *v /= norm);
    vals
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    // mpmath, 40 digits
    const REFERENCE: &[(i32, f64, f64)] = &[
        (0, PI, -0.304_242_177_644_093_864_2),
        (1, PI, 0.284_615_343_179_752_757_3),
        (0, 1.0, 0.765_197_686_557_966_551_4),
        (5, 10.0, -0.234_061_528_186_793_640_4),
        (10, 0.5, 2.613_177_360_822_803e-13),
        (30, 40.0, -0.104_085_949_765_649_726_9),
        (80, 40.0, 1.029_563_089_370_400_9e-17),
        (1, 40.0, 0.126_038_318_037_584_999_2),
        (40, 40.0, 0.130_780_545_285_166_722_1),
        (2, 0.06 * PI, 0.004_428_186_345_655_773_6),
        (3, 2.0, 0.128_943_249_474_402_051_1),
        (7, 2.5, 7.765_531_875_334_849_5e-4),
    ];

    #[test]
    fn reference_values() {
        for &(n, x, want) in REFERENCE {
            let got = bessel_j(n, x).unwrap();
            assert!((got - want).abs() < 1e-14, "J_{n}({x}) = {got}, want {want}");
        }
    }

    #[test]
    fn trivial_values() {
        assert_eq!(bessel_j(0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(1, 0.0).unwrap(), 0.0);
        assert_eq!(bessel_j(-3, 0.0).unwrap(), 0.0);
        assert_eq!(bessel_j(0, f64::INFINITY), Err(WalkError::NonFinite));
        assert_eq!(bessel_j(2, f64::NAN), Err(WalkError::NonFinite));
    }

    #[test]
    fn parity_identity() {
        for l in 0..12 {
            for &x in &[0.3, 1.9, 2.1, 7.7, 33.0] {
                let pos = bessel_j(l, x).unwrap();
                let neg = bessel_j(-l, x).unwrap();
                let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
                assert_eq!(neg, sign * pos);
                assert_eq!(bessel_j(l, -x).unwrap(), sign * pos);
            }
        }
    }

    #[test]
    fn series_and_recurrence_agree_at_switch() {
        let above = miller(20, SERIES_LIMIT);
        for (n, b) in above.iter().enumerate() {
            assert!((ascending_series(n, SERIES_LIMIT) - b).abs() < 1e-15, "n={n}");
        }
    }
}
