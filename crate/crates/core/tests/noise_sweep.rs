use geomspin::gates::{synthesize_xy_gate, XyDesign};
use geomspin::noise::{sweep, NoiseModel, NoisyGate};
use geomspin::units::mhz;

#[test]
fn infidelity_grows_with_noise_strength() {
    let gate = synthesize_xy_gate(&XyDesign::default()).unwrap();
    let h0 = mhz(2.0);
    let grid: Vec<f64> = (0..=4).map(|k| 0.1 * k as f64 * h0).collect();
    let res = sweep(&[&gate as &dyn NoisyGate], &grid, &NoiseModel::new(0.0, 200, 7).unwrap()).unwrap();
    let means: Vec<f64> = res.rows.iter().map(|r| r.mean_infidelity).collect();
    assert!(means[0] < 1e-9);
    assert!(means.windows(2).all(|w| w[1] > w[0]), "{means:?}");
    // quasistatic error is quadratic in σ
    let ratio = means[4] / means[2];
    assert!((ratio - 4.0).abs() < 0.5, "ratio {ratio}");
}

#[test]
fn sample_counts_agree_within_error() {
    let gate = synthesize_xy_gate(&XyDesign::default()).unwrap();
    let sigma = 0.3 * mhz(2.0);
    let run = |n| sweep(&[&gate as &dyn NoisyGate], &[sigma], &NoiseModel::new(0.0, n, 11).unwrap()).unwrap().rows.remove(0);
    let (a, b) = (run(500), run(100));
    assert!((a.mean_infidelity - b.mean_infidelity).abs() < 3.0 * a.stderr.hypot(b.stderr));
}
