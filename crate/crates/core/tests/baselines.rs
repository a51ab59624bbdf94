use freqwalk_core::baselines::{classical_walk_distribution, dtqw_diffusion};

#[test]
fn hadamard_spreads_ballistically() {
    let m = dtqw_diffusion(100);
    assert!((m[0] - 1.0).abs() < 1e-15);
    // M(n)/√n increases from n = 4 on
    let ratio = |n: usize| m[n - 1] / (n as f64).sqrt();
    assert!((4..100).all(|n| ratio(n + 1) > ratio(n)));
    // slope M(n)/n settles: within 5% across [50, 100]
    let slopes: Vec<f64> = (50..=100).map(|n| m[n - 1] / n as f64).collect();
    let (lo, hi) = slopes.iter().fold((f64::MAX, f64::MIN), |(a, b), &s| (a.min(s), b.max(s)));
    assert!(hi / lo < 1.05, "{lo} {hi}");
    // quantum walk beats the classical √n
    assert!(m[99] > classical_walk_distribution(100).diffusion_distance());
}
