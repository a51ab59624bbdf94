use freqwalk_core::fft::FftPlan;
use freqwalk_core::C64;
use proptest::prelude::*;
use rustfft::FftPlanner;

fn reference(data: &[C64], inverse: bool) -> Vec<C64> {
    let mut planner = FftPlanner::<f64>::new();
    let fft = if inverse { planner.plan_fft_inverse(data.len()) } else { planner.plan_fft_forward(data.len()) };
    let mut buf: Vec<rustfft::num_complex::Complex64> = data.iter().map(|z| rustfft::num_complex::Complex64::new(z.re, z.im)).collect();
    fft.process(&mut buf);
    buf.into_iter().map(|z| C64::new(z.re, z.im)).collect()
}

fn check(data: &[C64]) {
    let plan = FftPlan::new(data.len());
    let scale = data.iter().map(|z| z.norm()).sum::<f64>().max(1.0);
    for inverse in [false, true] {
        let mut got = data.to_vec();
        if inverse {
            plan.inverse(&mut got);
        } else {
            plan.forward(&mut got);
        }
        for (a, b) in got.iter().zip(reference(data, inverse)) {
            assert!((a - b).norm() < 1e-13 * scale, "n={} inverse={inverse}", data.len());
        }
    }
}

#[test]
fn lattice_sizes() {
    for m in [1usize, 2, 7, 60, 150, 1032, 2500] {
        let n = 2 * m + 1;
        let data: Vec<C64> = (0..n).map(|j| C64::new((j as f64 * 0.37).sin(), (j as f64 * 1.1).cos() - 0.2)).collect();
        check(&data);
    }
}

proptest! {
    #[test]
    fn random_inputs(data in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..300)) {
        let data: Vec<C64> = data.into_iter().map(|(re, im)| C64::new(re, im)).collect();
        check(&data);
    }
}
