use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

use super::{ControlSchedule, Frame, PathSpec, SAMPLES_PER_SEGMENT};
use crate::{Error, Result};

/// Minimum `sin χ` tolerated strictly inside a segment.
const POLE_EPS: f64 = 1e-9;

fn transverse_rate(path: &PathSpec, t: f64) -> f64 {
    path.xi.rate(t) * path.chi.value(t).tan()
}

fn check_controllable(path: &PathSpec) -> Result<()> {
    for t in path.sample_times(SAMPLES_PER_SEGMENT) {
        if path.chi.value(t).sin() < POLE_EPS {
            return Err(Error::SingularControl { t, reason: "path touches a pole inside a segment".into() });
        }
        if !transverse_rate(path, t).is_finite() {
            return Err(Error::SingularControl { t, reason: "azimuthal motion on the equator is not drivable".into() });
        }
    }
    Ok(())
}

/// Magnetic controls `(h, φ)` that steer `cos(χ/2)|0⟩ + sin(χ/2)e^{iξ}|1⟩`
/// along `path`: `h = √(χ̇² + (ξ̇ tan χ)²)`, `φ = ξ + atan2(χ̇, −ξ̇ tan χ)`.
pub fn invert_controls_s1(path: &PathSpec) -> Result<ControlSchedule> {
    check_controllable(path)?;
    let (p1, p2) = (path.clone(), path.clone());
    Ok(ControlSchedule {
        amplitude: Arc::new(move |t| p1.chi.rate(t).hypot(transverse_rate(&p1, t))),
        phase: Arc::new(move |t| p2.xi.value(t) + p2.chi.rate(t).atan2(-transverse_rate(&p2, t))),
        duration: path.duration,
        frame: Frame::S1,
        boundaries: segment_cuts(path),
    })
}

fn segment_cuts(path: &PathSpec) -> Vec<f64> {
    path.segments().iter().skip(1).map(|s| s.0).collect()
}

/// Signed exchange Rabi frequency and phase of the `S₃` drive.
///
/// `Ω = −χ̇/sin(ξ + φ')` with `φ' = arctan(χ̇ cot χ / ξ̇) − ξ`, evaluated in
/// the equivalent form `Ω = −sgn(q)√(χ̇² + q²)` with `q = ξ̇ tan χ` so that
/// removable zeros of `ξ̇` and `cot χ` are handled.
fn s3_controls(path: &PathSpec, t: f64) -> (f64, f64) {
    let chi_dot = path.chi.rate(t);
    let q = transverse_rate(path, t);
    let xi = path.xi.value(t);
    if q != 0.0 {
        (-q.signum() * chi_dot.hypot(q), (chi_dot / q).atan() - xi)
    } else if chi_dot != 0.0 {
        (-chi_dot.abs(), chi_dot.signum() * FRAC_PI_2 - xi)
    } else {
        (0.0, -xi)
    }
}

/// A path normalised to a peak exchange Rabi frequency, with its controls.
#[derive(Clone, Debug)]
pub struct S3Synthesis {
    /// The input path traversed at the speed that meets the amplitude cap.
    pub path: PathSpec,
    pub controls: ControlSchedule,
    pub peak_amplitude: f64,
}

fn peak_abs(path: &PathSpec, samples: usize) -> f64 {
    let amp = |t: f64| s3_controls(path, t).0.abs();
    let mut best = 0.0f64;
    for (a, b) in path.segments() {
        let h = (b - a) / samples as f64;
        let ts: Vec<f64> = (0..samples).map(|k| a + (k as f64 + 0.5) * h).collect();
        let (k, _) = ts.iter().enumerate().map(|(k, &t)| (k, amp(t))).fold((0, f64::MIN), |m, x| if x.1 > m.1 { x } else { m });
        // golden-section refinement around the best sample
        let (mut lo, mut hi) = ((ts[k] - h).max(a), (ts[k] + h).min(b));
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let mut x1 = hi - g * (hi - lo);
        let mut x2 = lo + g * (hi - lo);
        let (mut f1, mut f2) = (amp(x1), amp(x2));
        for _ in 0..80 {
            if f1 > f2 {
                hi = x2;
                (x2, f2) = (x1, f1);
                x1 = hi - g * (hi - lo);
                f1 = amp(x1);
            } else {
                lo = x1;
                (x1, f1) = (x2, f2);
                x2 = lo + g * (hi - lo);
                f2 = amp(x2);
            }
        }
        best = best.max(f1).max(f2).max(amp(ts[k]));
    }
    best
}

/// Exchange-drive controls for `path`, with time rescaled so that
/// `max|Ω| = omega_max`.
pub fn invert_controls_s3(path: &PathSpec, omega_max: f64) -> Result<S3Synthesis> {
    if !(omega_max > 0.0 && omega_max.is_finite()) {
        return Err(Error::Usage(format!("peak Rabi frequency must be positive, got {omega_max}")));
    }
    for t in path.sample_times(SAMPLES_PER_SEGMENT) {
        let (om, ph) = s3_controls(path, t);
        if !(om.is_finite() && ph.is_finite()) {
            return Err(Error::SingularControl { t, reason: "exchange control diverges".into() });
        }
    }
    let peak = peak_abs(path, SAMPLES_PER_SEGMENT);
    let (scaled, peak_amplitude) = if peak > 0.0 { (path.time_scaled(peak / omega_max), omega_max) } else { (path.clone(), 0.0) };
    let (p1, p2) = (scaled.clone(), scaled.clone());
    let controls = ControlSchedule {
        amplitude: Arc::new(move |t| s3_controls(&p1, t).0),
        phase: Arc::new(move |t| s3_controls(&p2, t).1),
        duration: scaled.duration,
        frame: Frame::S3,
        boundaries: segment_cuts(&scaled),
    };
    Ok(S3Synthesis { path: scaled, controls, peak_amplitude })
}
