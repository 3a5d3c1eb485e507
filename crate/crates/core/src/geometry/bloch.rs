use std::f64::consts::TAU;

use super::{ControlSchedule, Curve, PathSpec};
use crate::propagate::TimeGrid;
use crate::{Error, Result};

/// Below this `sin χ` the angle equations are replaced by the Bloch vector.
const POLE_GUARD: f64 = 1e-3;

type Angles = (f64, f64);
type Vec3 = [f64; 3];

fn angle_rate(ctrl: &ControlSchedule, t: f64, (chi, xi): Angles) -> Angles {
    let a = ctrl.amplitude(t);
    let d = ctrl.azimuth(t) - xi;
    (a * d.sin(), -a * d.cos() * chi.cos() / chi.sin())
}

fn vector_rate(ctrl: &ControlSchedule, t: f64, r: Vec3) -> Vec3 {
    let a = ctrl.amplitude(t);
    let az = ctrl.azimuth(t);
    let w = [a * az.cos(), a * az.sin(), 0.0];
    [w[1] * r[2] - w[2] * r[1], w[2] * r[0] - w[0] * r[2], w[0] * r[1] - w[1] * r[0]]
}

fn rk4_angles(ctrl: &ControlSchedule, t: f64, dt: f64, y: Angles) -> Angles {
    let add = |y: Angles, k: Angles, s: f64| (y.0 + s * k.0, y.1 + s * k.1);
    let k1 = angle_rate(ctrl, t, y);
    let k2 = angle_rate(ctrl, t + dt / 2.0, add(y, k1, dt / 2.0));
    let k3 = angle_rate(ctrl, t + dt / 2.0, add(y, k2, dt / 2.0));
    let k4 = angle_rate(ctrl, t + dt, add(y, k3, dt));
    (
        y.0 + dt / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0),
        y.1 + dt / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1),
    )
}

fn rk4_vector(ctrl: &ControlSchedule, t: f64, dt: f64, r: Vec3) -> Vec3 {
    let add = |r: Vec3, k: Vec3, s: f64| [r[0] + s * k[0], r[1] + s * k[1], r[2] + s * k[2]];
    let k1 = vector_rate(ctrl, t, r);
    let k2 = vector_rate(ctrl, t + dt / 2.0, add(r, k1, dt / 2.0));
    let k3 = vector_rate(ctrl, t + dt / 2.0, add(r, k2, dt / 2.0));
    let k4 = vector_rate(ctrl, t + dt, add(r, k3, dt));
    let mut out = [0.0; 3];
    for i in 0..3 {
        out[i] = r[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    let n = (out[0] * out[0] + out[1] * out[1] + out[2] * out[2]).sqrt();
    out.map(|x| x / n)
}

fn unwrap_near(angle: f64, reference: f64) -> f64 {
    angle + TAU * ((reference - angle) / TAU).round()
}

/// Integrates the angle equations of motion under `ctrl`.
///
/// The returned path is sampled on the grid nodes and interpolated
/// linearly; `ξ` is unwrapped to be continuous.
pub fn forward_angles(ctrl: &ControlSchedule, chi0: f64, xi0: f64, grid: &TimeGrid) -> Result<PathSpec> {
    if !(chi0 > 0.0 && chi0 < std::f64::consts::PI) {
        return Err(Error::Usage(format!("initial polar angle {chi0} must lie strictly between the poles")));
    }
    let dt = grid.dt();
    let mut ts = Vec::with_capacity(grid.steps + 1);
    let mut chis = Vec::with_capacity(grid.steps + 1);
    let mut xis = Vec::with_capacity(grid.steps + 1);
    let (mut chi, mut xi) = (chi0, xi0);
    ts.push(grid.t0);
    chis.push(chi);
    xis.push(xi);
    for k in 0..grid.steps {
        let t = grid.node(k);
        let next = rk4_angles(ctrl, t, dt, (chi, xi));
        if chi.sin() > POLE_GUARD && next.0.sin() > POLE_GUARD && next.0 > 0.0 && next.0 < std::f64::consts::PI {
            (chi, xi) = next;
        } else {
            let r = [chi.sin() * xi.cos(), chi.sin() * xi.sin(), chi.cos()];
            let r = rk4_vector(ctrl, t, dt, r);
            chi = r[2].clamp(-1.0, 1.0).acos();
            if chi.sin() > 1e-12 {
                xi = unwrap_near(r[1].atan2(r[0]), xi);
            }
        }
        ts.push(grid.node(k + 1));
        chis.push(chi);
        xis.push(xi);
    }
    Ok(PathSpec {
        chi: Curve::sampled(ts.clone(), chis),
        xi: Curve::sampled(ts, xis),
        f: None,
        duration: grid.t1,
        boundaries: Vec::new(),
        jumps: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_2, PI};
    use std::sync::Arc;

    use super::*;
    use crate::geometry::{invert_controls_s1, Frame, PoleJump};

    fn constant_ctrl(a: f64, phase: f64, duration: f64) -> ControlSchedule {
        ControlSchedule { amplitude: Arc::new(move |_| a), phase: Arc::new(move |_| phase), duration, frame: Frame::S1, boundaries: vec![] }
    }

    #[test]
    fn no_drive_is_stationary() {
        let p = forward_angles(&constant_ctrl(0.0, 0.0, 5.0), 1.0, 0.4, &TimeGrid::new(0.0, 5.0, 100).unwrap()).unwrap();
        assert_eq!(p.chi.value(5.0), 1.0);
        assert_eq!(p.xi.value(5.0), 0.4);
    }

    #[test]
    fn meridian_motion_is_linear() {
        let (h, xi0) = (0.3, 0.7);
        let ctrl = constant_ctrl(h, xi0 + FRAC_PI_2, 4.0);
        let p = forward_angles(&ctrl, 0.5, xi0, &TimeGrid::new(0.0, 4.0, 400).unwrap()).unwrap();
        for t in [1.0, 2.5, 4.0] {
            assert!((p.chi.value(t) - (0.5 + h * t)).abs() < 1e-12);
            assert!((p.xi.value(t) - xi0).abs() < 1e-12);
        }
    }

    #[test]
    fn crosses_a_pole() {
        // starting near the north pole heading north: passes over and emerges on the opposite meridian
        let ctrl = constant_ctrl(1.0, -FRAC_PI_2, 0.2);
        let p = forward_angles(&ctrl, 0.05, 0.0, &TimeGrid::new(0.0, 0.2, 200).unwrap()).unwrap();
        assert!((p.chi.value(0.2) - 0.15).abs() < 1e-9);
        assert!((p.xi.value(0.2).rem_euclid(2.0 * PI) - PI).abs() < 1e-9);
    }

    /// A smooth northern-hemisphere loop survives inversion and re-integration.
    #[test]
    fn inversion_round_trip() {
        let tau = 10.0;
        let w = 2.0 * PI / tau;
        let path = PathSpec {
            chi: Curve::new(move |t| 0.9 + 0.3 * (w * t).sin(), move |t| 0.3 * w * (w * t).cos()),
            xi: Curve::new(move |t| 0.2 + 1.5 * (1.0 - (w * t).cos()), move |t| 1.5 * w * (w * t).sin()),
            f: None,
            duration: tau,
            boundaries: vec![],
            jumps: Vec::<PoleJump>::new(),
        };
        let ctrl = invert_controls_s1(&path).unwrap();
        let fwd = forward_angles(&ctrl, path.chi.value(0.0), path.xi.value(0.0), &TimeGrid::new(0.0, tau, 4000).unwrap()).unwrap();
        let err = (0..=200)
            .map(|k| tau * k as f64 / 200.0)
            .map(|t| (fwd.chi.value(t) - path.chi.value(t)).abs().max((fwd.xi.value(t) - path.xi.value(t)).abs()))
            .fold(0.0, f64::max);
        assert!(err < 1e-4, "round-trip error {err}");
    }
}
