use std::f64::consts::PI;

use geomspin::gates::{invariant_trajectory, local_invariants, synthesize_xy_gate, LocalInvariants, XyDesign};
use geomspin::units::mhz;

#[test]
fn iswap_class_reached_only_at_the_end() {
    let gate = synthesize_xy_gate(&XyDesign::default()).unwrap();
    let traj = invariant_trajectory(&gate.schedule(0.0), 20).unwrap();
    let target = LocalInvariants::new(0.0, 0.0, -1.0);
    let (last, body) = traj.split_last().unwrap();
    assert!(last.invariants.distance(&target) < 1e-3);
    let early = body.iter().filter(|s| s.t < 0.9 * gate.tau).map(|s| s.invariants.distance(&target)).fold(f64::INFINITY, f64::min);
    assert!(early > 0.05, "iSWAP class reached before the end: {early}");
}

#[test]
fn gate_time_scales_inversely_with_peak_amplitude() {
    let slow = synthesize_xy_gate(&XyDesign { omega_max: mhz(25.0), ..Default::default() }).unwrap();
    let fast = synthesize_xy_gate(&XyDesign::default()).unwrap();
    assert!((slow.tau / fast.tau - 2.0).abs() < 1e-6);
}

#[test]
fn partial_rotation_gives_intermediate_invariants() {
    let gate = synthesize_xy_gate(&XyDesign { gamma: PI / 4.0, ..Default::default() }).unwrap();
    let inv = local_invariants(&gate.schedule(0.0).unitary().unwrap()).unwrap();
    // e^{iγ(XX+YY)/2} with γ = π/4: G1 = cos⁴γ, G3 = 1 + 2cos2γ
    let expected = LocalInvariants::new((PI / 4.0).cos().powi(4), 0.0, 1.0 + 2.0 * (PI / 2.0).cos());
    assert!(inv.distance(&expected) < 1e-3, "{inv:?}");
}
