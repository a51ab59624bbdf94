//! Discrete Fourier transform of arbitrary length.
//!
//! Lattices have odd size `2M + 1`, so lengths that are not powers of two go
//! through Bluestein's chirp-z identity on a power-of-two radix-2 transform.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::math::{cis, C64};

/// Precomputed transform of one length.
#[derive(Clone, Debug)]
pub struct FftPlan {
    len: usize,
    kind: PlanKind,
}

#[derive(Clone, Debug)]
enum PlanKind {
    Trivial,
    Radix2(Radix2),
    Bluestein {
        inner: Radix2,
        /// `e^{-iπ j²/n}`
        chirp: Vec<C64>,
        /// forward transform of the conjugate chirp, zero-padded and wrapped
        kernel_hat: Vec<C64>,
    },
}

#[derive(Clone, Debug)]
struct Radix2 {
    len: usize,
    /// `e^{-2πik/len}` for `k < len/2`
    twiddles: Vec<C64>,
}

impl Radix2 {
    fn new(len: usize) -> Self {
        debug_assert!(len.is_power_of_two());
        let twiddles = (0..len / 2).map(|k| cis(-2.0 * PI * k as f64 / len as f64)).collect();
        Radix2 { len, twiddles }
    }

    /// In-place forward (`e^{-i…}`) or unnormalized inverse transform.
    fn run(&self, data: &mut [C64], inverse: bool) {
        let n = self.len;
        let bits = n.trailing_zeros();
        if n <= 1 {
            return;
        }
        for i in 0..n {
            let j = i.reverse_bits() >> (usize::BITS - bits);
            if j > i {
                data.swap(i, j);
            }
        }
        let mut size = 2;
        while size <= n {
            let half = size / 2;
            let stride = n / size;
            for start in (0..n).step_by(size) {
                for k in 0..half {
                    let mut w = self.twiddles[k * stride];
                    if inverse {
                        w = w.conj();
                    }
                    let a = data[start + k];
                    let b = data[start + k + half] * w;
                    data[start + k] = a + b;
                    data[start + k + half] = a - b;
                }
            }
            size *= 2;
        }
    }
}

impl FftPlan {
    pub fn new(len: usize) -> Self {
        let kind = if len <= 1 {
            PlanKind::Trivial
        } else if len.is_power_of_two() {
            PlanKind::Radix2(Radix2::new(len))
        } else {
            let padded = (2 * len - 1).next_power_of_two();
            let inner = Radix2::new(padded);
            // j² mod 2n keeps the chirp phase exact for large j
            let modulus = 2 * len as u64;
            let chirp: Vec<C64> = (0..len as u64).map(|j| cis(-PI * ((j * j) % modulus) as f64 / len as f64)).collect();
            let mut kernel = vec![C64::new(0.0, 0.0); padded];
            kernel[0] = chirp[0].conj();
            for j in 1..len {
                kernel[j] = chirp[j].conj();
                kernel[padded - j] = chirp[j].conj();
            }
            inner.run(&mut kernel, false);
            PlanKind::Bluestein { inner, chirp, kernel_hat: kernel }
        };
        FftPlan { len, kind }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// `X_k = Σ_j x_j e^{-2πijk/n}`, in place.
    pub fn forward(&self, data: &mut [C64]) {
        self.transform(data, false);
    }

    /// `x_j = Σ_k X_k e^{+2πijk/n}` (no `1/n` factor), in place.
    pub fn inverse(&self, data: &mut [C64]) {
        self.transform(data, true);
    }

    fn transform(&self, data: &mut [C64], inverse: bool) {
        assert_eq!(data.len(), self.len, "FFT length mismatch");
        match &self.kind {
            PlanKind::Trivial => {}
            PlanKind::Radix2(r) => r.run(data, inverse),
            PlanKind::Bluestein { inner, chirp, kernel_hat } => {
                // the inverse is the forward transform under conjugation
                let mut work = vec![C64::new(0.0, 0.0); inner.len];
                for (j, (w, x)) in work.iter_mut().zip(data.iter()).enumerate() {
                    *w = if inverse { x.conj() * chirp[j] } else { x * chirp[j] };
                }
                inner.run(&mut work, false);
                for (w, k) in work.iter_mut().zip(kernel_hat) {
                    *w *= k;
                }
                inner.run(&mut work, true);
                let scale = 1.0 / inner.len as f64;
                for (j, x) in data.iter_mut().enumerate() {
                    let y = work[j] * scale * chirp[j];
                    *x = if inverse { y.conj() } else { y };
                }
            }
        }
    }
}
