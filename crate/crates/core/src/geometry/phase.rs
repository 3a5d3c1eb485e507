use std::f64::consts::PI;

use serde::Serialize;

use super::{ControlSchedule, PathSpec, V2, SAMPLES_PER_SEGMENT};
use crate::linalg::c;
use crate::{Error, Result};

/// Tolerance on `χ` and `ξ` for declaring a path closed.
const CYCLIC_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PhaseDecomposition {
    pub total: f64,
    pub dynamical: f64,
    pub geometric: f64,
    /// Whether the path returns to its starting point; the geometric part
    /// is only gauge-meaningful when it does.
    pub cyclic: bool,
}

// three-point Gauss–Legendre on [-1, 1]
const GL_NODES: [f64; 3] = [-0.774_596_669_241_483_4, 0.0, 0.774_596_669_241_483_4];
const GL_WEIGHTS: [f64; 3] = [5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0];

pub(crate) fn integrate(a: f64, b: f64, n: usize, f: impl Fn(f64) -> f64) -> f64 {
    let h = (b - a) / n as f64;
    let mut sum = 0.0;
    for k in 0..n {
        let mid = a + (k as f64 + 0.5) * h;
        for (x, w) in GL_NODES.iter().zip(GL_WEIGHTS) {
            sum += w * f(mid + 0.5 * h * x);
        }
    }
    0.5 * h * sum
}

/// Refuses pieces where `ξ̇/cos χ` has a genuine pole on the equator.
fn check_equator(path: &PathSpec, a: f64, b: f64) -> Result<()> {
    let n = SAMPLES_PER_SEGMENT;
    let h = (b - a) / n as f64;
    let ts: Vec<f64> = (0..n).map(|k| a + (k as f64 + 0.5) * h).collect();
    let scale = ts.iter().map(|&t| path.xi.rate(t).abs()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Ok(());
    }
    for w in ts.windows(2) {
        let (mut lo, mut hi) = (w[0], w[1]);
        let g = |t: f64| path.chi.value(t).cos();
        if g(lo).signum() == g(hi).signum() && g(lo) != 0.0 {
            continue;
        }
        for _ in 0..60 {
            let m = 0.5 * (lo + hi);
            if g(m).signum() == g(lo).signum() {
                lo = m;
            } else {
                hi = m;
            }
        }
        let t = 0.5 * (lo + hi);
        if path.xi.rate(t).abs() > 1e-6 * scale {
            return Err(Error::PhaseSingular { t });
        }
    }
    Ok(())
}

/// Splits the phase of the dressed state `cos(χ/2)|0⟩ + sin(χ/2)e^{iξ}|1⟩`
/// into dynamical and geometric parts.
///
/// The total phase is `−½∫ξ̇ + ½∫ξ̇/cos χ`, with azimuth jumps at the poles
/// contributing `−½Δξ + ½Δξ/cos χ`. The dynamical phase is `−∫⟨H⟩dt` for
/// the generator of `ctrl`.
pub fn phase_decompose(path: &PathSpec, ctrl: &ControlSchedule) -> Result<PhaseDecomposition> {
    let n = SAMPLES_PER_SEGMENT;
    let mut total = 0.0;
    let mut dynamical = 0.0;
    for (a, b) in path.segments() {
        check_equator(path, a, b)?;
        total += integrate(a, b, n, |t| {
            let xi_dot = path.xi.rate(t);
            let cos = path.chi.value(t).cos();
            let ratio = if xi_dot == 0.0 { 0.0 } else { xi_dot / cos };
            -0.5 * xi_dot + 0.5 * ratio
        });
        dynamical -= integrate(a, b, n, |t| {
            let (chi, xi) = (path.chi.value(t), path.xi.value(t));
            0.5 * ctrl.amplitude(t) * chi.sin() * (ctrl.azimuth(t) - xi).cos()
        });
    }
    for j in &path.jumps {
        let cos = path.chi.value(j.at).cos();
        total += -0.5 * j.delta_xi + 0.5 * j.delta_xi / cos;
    }
    let d_chi = (path.chi.value(path.duration) - path.chi.value(0.0)).abs();
    let d_xi = path.xi.value(path.duration) - path.xi.value(0.0);
    let d_xi = (d_xi - 2.0 * PI * (d_xi / (2.0 * PI)).round()).abs();
    let at_pole = path.chi.value(0.0).sin() < CYCLIC_TOL;
    let cyclic = d_chi <= CYCLIC_TOL && (at_pole || d_xi <= CYCLIC_TOL);
    Ok(PhaseDecomposition { total, dynamical, geometric: total - dynamical, cyclic })
}

fn wrap(x: f64) -> f64 {
    let y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y - 2.0 * PI
    } else {
        y
    }
}

/// Aharonov–Anandan phase of a sampled cyclic evolution via the discrete
/// Pancharatnam product `−arg(Π⟨ζ_k|ζ_{k+1}⟩ ⟨ζ_N|ζ_0⟩)`, in `(−π, π]`.
pub fn aa_phase(states: &[V2]) -> Result<f64> {
    let (first, last) = match (states.first(), states.last()) {
        (Some(f), Some(l)) => (f, l),
        _ => return Err(Error::Usage("empty state sequence".into())),
    };
    let closure = last.dotc(first);
    let deficit = 1.0 - closure.norm() / (first.norm() * last.norm());
    if deficit > 1e-6 {
        return Err(Error::NonCyclic { deficit });
    }
    let mut prod = c(1.0, 0.0);
    for w in states.windows(2) {
        let o = w[0].dotc(&w[1]);
        prod *= o / o.norm();
    }
    prod *= closure / closure.norm();
    Ok(wrap(-prod.arg()))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_2, PI};
    use std::sync::Arc;

    use super::*;
    use crate::geometry::{cz_path, invert_controls_s3, xy_loop, Curve, Frame, PoleJump};
    use crate::linalg::cis;

    fn stationary() -> (PathSpec, ControlSchedule) {
        let path = PathSpec { chi: Curve::constant(1.0), xi: Curve::constant(0.3), f: None, duration: 4.0, boundaries: vec![], jumps: vec![] };
        let ctrl = ControlSchedule { amplitude: Arc::new(|_| 0.0), phase: Arc::new(|_| 0.0), duration: 4.0, frame: Frame::S1, boundaries: vec![] };
        (path, ctrl)
    }

    #[test]
    fn stationary_path_has_no_phase() {
        let (p, c) = stationary();
        let d = phase_decompose(&p, &c).unwrap();
        assert_eq!((d.total, d.dynamical, d.geometric), (0.0, 0.0, 0.0));
        assert!(d.cyclic);
    }

    #[test]
    fn meridian_has_no_dynamical_phase() {
        let (path, ctrl) = cz_path(PI / 25.0, 1.5 * PI, 0.0125).unwrap();
        let d = phase_decompose(&path, &ctrl).unwrap();
        assert!(d.dynamical.abs() <= 1e-6);
        assert!(d.total.abs() <= 1e-12);
        assert!(d.cyclic);
    }

    #[test]
    fn loop_is_purely_geometric() {
        let syn = invert_controls_s3(&xy_loop(FRAC_PI_2, 1.0), 0.3).unwrap();
        let d = phase_decompose(&syn.path, &syn.controls).unwrap();
        assert!(d.dynamical.abs() < 1e-9, "dynamical {}", d.dynamical);
        assert!((d.geometric - FRAC_PI_2).abs() < 1e-9);
        assert!((d.total - d.dynamical - d.geometric).abs() < 1e-12);
        assert!(d.cyclic);
    }

    /// Closed form of the dynamical phase: `½∫ξ̇ sin²χ / cos χ`.
    #[test]
    fn dynamical_phase_closed_form() {
        let syn = invert_controls_s3(&xy_loop(1.1, 1.0), 0.3).unwrap();
        let p = &syn.path;
        let (a, b) = p.segments()[0];
        let part = PathSpec { duration: b, boundaries: vec![], jumps: vec![], ..p.clone() };
        let d = phase_decompose(&part, &syn.controls).unwrap();
        let closed = integrate(a, b, 4000, |t| {
            let x = p.chi.value(t);
            0.5 * p.xi.rate(t) * x.sin().powi(2) / x.cos()
        });
        assert!((d.dynamical - closed).abs() < 1e-9);
        assert!(closed.abs() > 1e-3);
    }

    #[test]
    fn equator_crossing_is_refused() {
        let path = PathSpec {
            chi: Curve::new(|t| 1.0 + 0.2 * t, |_| 0.2),
            xi: Curve::new(|t| 0.5 * t, |_| 0.5),
            f: None,
            duration: 5.0,
            boundaries: vec![],
            jumps: vec![],
        };
        let (_, ctrl) = stationary();
        assert!(matches!(phase_decompose(&path, &ctrl), Err(Error::PhaseSingular { .. })));
    }

    #[test]
    fn jump_terms() {
        let path = PathSpec {
            chi: Curve::constant(PI),
            xi: Curve::new(|t| if t < 1.0 { 0.0 } else { -0.4 }, |_| 0.0),
            f: None,
            duration: 2.0,
            boundaries: vec![],
            jumps: vec![PoleJump { at: 1.0, delta_xi: -0.4 }],
        };
        let (_, ctrl) = stationary();
        let d = phase_decompose(&path, &ctrl).unwrap();
        assert!((d.total - 0.4).abs() < 1e-15);
        assert!(d.cyclic);
    }

    fn hemisphere_states(n: usize) -> Vec<V2> {
        // equator great circle: |ζ⟩ = (1, e^{iφ})/√2 encloses solid angle 2π
        (0..=n).map(|k| V2::new(c(1.0, 0.0), cis(2.0 * PI * k as f64 / n as f64)) / c(2f64.sqrt(), 0.0)).collect()
    }

    #[test]
    fn hemisphere_loop() {
        let g = aa_phase(&hemisphere_states(2000)).unwrap();
        assert!((g.abs() - PI).abs() < 1e-5);
    }

    #[test]
    fn constant_state() {
        let s = vec![V2::new(c(0.6, 0.0), c(0.0, 0.8)); 5];
        assert_eq!(aa_phase(&s).unwrap(), 0.0);
    }

    #[test]
    fn non_cyclic_is_refused() {
        let s = vec![V2::new(c(1.0, 0.0), c(0.0, 0.0)), V2::new(c(0.0, 0.0), c(1.0, 0.0))];
        assert!(matches!(aa_phase(&s), Err(Error::NonCyclic { .. })));
    }

    #[test]
    fn loop_states_aa_phase() {
        let syn = invert_controls_s3(&xy_loop(FRAC_PI_2, 1.0), 0.3).unwrap();
        let n = 20_000;
        let states: Vec<V2> = (0..=n).map(|k| syn.path.dressed_pair(syn.path.duration * k as f64 / n as f64).0).collect();
        let g = aa_phase(&states).unwrap();
        // |Φ(τ)⟩ = e^{iγ}|Φ(0)⟩ with no dynamical contribution
        assert!((g - FRAC_PI_2).abs() < 1e-3, "aa phase {g}");
    }

    proptest::proptest! {
        #[test]
        fn aa_gauge_invariance(seed in proptest::collection::vec(-10.0f64..10.0, 201)) {
            let base = hemisphere_states(200);
            let regauged: Vec<V2> = base.iter().zip(&seed).map(|(s, th)| s * cis(*th)).collect();
            let a = aa_phase(&base).unwrap();
            let b = aa_phase(&regauged).unwrap();
            let d = wrap(a - b).abs();
            proptest::prop_assert!(d <= 1e-9);
        }
    }
}
