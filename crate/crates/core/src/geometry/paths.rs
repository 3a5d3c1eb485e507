use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::Arc;

use super::{ControlSchedule, Curve, Frame, PathSpec, PoleJump};
use crate::{Error, Result};

/// Meridian excursion `A → pole → A` used for the CZ gate.
///
/// From `(χ₁, ξ₁)` the state is driven north at rate `h₀` until it reaches
/// the pole at `τ₁ = χ₁/h₀`, then back down the same meridian. The drive
/// phase is `ξ₁ − π/2` on the way up and `ξ₁ + π/2` on the way down.
pub fn cz_path(chi1: f64, xi1: f64, h0: f64) -> Result<(PathSpec, ControlSchedule)> {
    if !(chi1 > 0.0 && chi1 < FRAC_PI_2) {
        return Err(Error::Usage(format!("starting polar angle {chi1} must lie in (0, π/2)")));
    }
    if !(h0 > 0.0 && h0.is_finite()) {
        return Err(Error::Usage(format!("drive amplitude {h0} must be positive")));
    }
    let tau1 = chi1 / h0;
    let path = PathSpec {
        chi: Curve::new(
            move |t| if t < tau1 { chi1 - h0 * t } else { h0 * (t - tau1) },
            move |t| if t < tau1 { -h0 } else { h0 },
        ),
        xi: Curve::constant(xi1),
        f: None,
        duration: 2.0 * tau1,
        boundaries: vec![tau1],
        jumps: vec![],
    };
    let ctrl = ControlSchedule {
        amplitude: Arc::new(move |_| h0),
        phase: Arc::new(move |t| if t < tau1 { xi1 - FRAC_PI_2 } else { xi1 + FRAC_PI_2 }),
        duration: 2.0 * tau1,
        frame: Frame::S1,
        boundaries: vec![tau1],
    };
    Ok((path, ctrl))
}

fn quarter(t: f64, tau: f64) -> usize {
    ((4.0 * t / tau).floor().max(0.0) as usize).min(3)
}

/// Four-segment loop `equator → south pole → equator → north pole → equator`
/// whose azimuth jumps by `−γ` at the south pole and `+γ` at the north pole.
/// Driven cyclically it imprints the purely geometric phase `γ`.
///
/// `χ = π(1 ± sin²(2πt/τ))/2` (`+` in the first half),
/// `ξ = −(4/15)cos³χ` plus the jump offsets, and `f = cos(2χ)/5` plus the
/// offsets that keep the dressed state continuous through the jumps.
pub fn xy_loop(gamma: f64, tau: f64) -> PathSpec {
    let chi = move |t: f64| {
        let s = (2.0 * PI * t / tau).sin().powi(2);
        if t < tau / 2.0 {
            PI * (1.0 + s) / 2.0
        } else {
            PI * (1.0 - s) / 2.0
        }
    };
    let chi_dot = move |t: f64| {
        let v = PI * PI / tau * (4.0 * PI * t / tau).sin();
        if t < tau / 2.0 {
            v
        } else {
            -v
        }
    };
    let xi_offset = move |t: f64| if matches!(quarter(t, tau), 1 | 2) { -gamma } else { 0.0 };
    let f_offset = move |t: f64| -gamma * [0.0, 1.0, 1.0, 2.0][quarter(t, tau)];
    PathSpec {
        chi: Curve::new(chi, chi_dot),
        xi: Curve::new(
            move |t| -4.0 / 15.0 * chi(t).cos().powi(3) + xi_offset(t),
            move |t| {
                let x = chi(t);
                0.8 * x.sin() * x.cos().powi(2) * chi_dot(t)
            },
        ),
        f: Some(Curve::new(
            move |t| (2.0 * chi(t)).cos() / 5.0 + f_offset(t),
            move |t| -0.4 * (2.0 * chi(t)).sin() * chi_dot(t),
        )),
        duration: tau,
        boundaries: vec![tau / 4.0, tau / 2.0, 3.0 * tau / 4.0],
        jumps: vec![PoleJump { at: tau / 4.0, delta_xi: -gamma }, PoleJump { at: 3.0 * tau / 4.0, delta_xi: gamma }],
    }
}
