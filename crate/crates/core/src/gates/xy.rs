use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::targets::s3_embedded;
use super::{Generator, GateSchedule};
use crate::geometry::{integrate, invert_controls_s3, xy_loop, ControlSchedule, Frame, PathSpec};
use crate::hamiltonian::{build_exchange_interaction, static_frame_propagator, ExchangeDrive};
use crate::linalg::{mat_exp, pauli_x, Mat2, Mat4};
use crate::units::mhz;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct XyDesign {
    /// Peak exchange Rabi frequency.
    pub omega_max: f64,
    /// Geometric phase of the loop; `π/2` gives a NOT in `S₃`.
    pub gamma: f64,
    /// Local `S₃` phase; `0` selects iSWAP and `3π/2` SWAP.
    pub eta: f64,
    /// Physical `α'` before rounding to a commensurate value.
    pub alpha_guess: f64,
    /// Physical `β'` before rounding to a commensurate value.
    pub beta_guess: f64,
    pub steps_per_ns: f64,
}

impl Default for XyDesign {
    fn default() -> Self {
        Self { omega_max: mhz(50.0), gamma: FRAC_PI_2, eta: 0.0, alpha_guess: mhz(10_000.0), beta_guess: mhz(2_000.0), steps_per_ns: 120.0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum XyScheme {
    Geometric,
    /// Same envelope, constant phase, no geometric structure.
    Dynamical,
}

/// An exchange-driven gate on `S₃ = {↓↑, ↑↓}`.
#[derive(Clone, Debug)]
pub struct XyGate {
    pub scheme: XyScheme,
    /// Signed Rabi frequency `Ω = J₁/2` and phase `φ'`.
    pub controls: ControlSchedule,
    /// The dressed-state loop, for the geometric scheme.
    pub path: Option<PathSpec>,
    pub tau: f64,
    pub j0: f64,
    pub alpha_p: f64,
    pub beta_p: f64,
    pub eta: f64,
    pub gamma: f64,
    pub steps: usize,
    /// Ideal gate in tensor-product order.
    pub target: Mat4,
}

fn reduce_eta(eta: f64) -> Result<f64> {
    let r = eta.rem_euclid(TAU);
    let near = |x: f64| (r - x).abs() < 1e-9 || (r - x - TAU).abs() < 1e-9;
    if near(0.0) {
        Ok(0.0)
    } else if near(1.5 * PI) {
        Ok(1.5 * PI)
    } else {
        Err(Error::Usage(format!("local phase {eta} must be 0 or 3π/2 modulo 2π")))
    }
}

fn commensurate(guess: f64, period: f64, tau: f64) -> f64 {
    period * (guess * tau / period).round().max(1.0) / tau
}

/// `e^{iγσx}`.
fn s3_rotation(gamma: f64) -> Mat2 {
    mat_exp(&pauli_x(), -gamma).expect("Hermitian by construction")
}

fn assemble(scheme: XyScheme, controls: ControlSchedule, path: Option<PathSpec>, design: &XyDesign, eta: f64) -> Result<XyGate> {
    let tau = controls.duration;
    // the static −J₀/2 shift contributes e^{iJ₀τ/2} = e^{iη} on S₃
    let j0 = 2.0 * eta / tau;
    let alpha_p = commensurate(design.alpha_guess, TAU, tau);
    let beta_p = commensurate(design.beta_guess, 2.0 * TAU, tau);
    let steps = ((tau * design.steps_per_ns).ceil() as usize).max(1);
    let gate = XyGate {
        scheme,
        controls,
        path,
        tau,
        j0,
        alpha_p,
        beta_p,
        eta,
        gamma: design.gamma,
        steps,
        target: s3_embedded(&s3_rotation(design.gamma), eta),
    };
    let d = gate.drive(0.0);
    d.check_regime((0..=steps).map(|k| tau * k as f64 / steps as f64))?;
    Ok(gate)
}

/// Geometric iSWAP/SWAP from the four-segment dressed-state loop.
///
/// The loop is traversed at the speed where `max|Ω| = omega_max`, which
/// fixes `τ`. `J₀` is the smallest nonnegative value giving the requested
/// local phase, and `α'`, `β'` are rounded so that the static Zeeman frame
/// returns to the identity at `τ`.
pub fn synthesize_xy_gate(design: &XyDesign) -> Result<XyGate> {
    let eta = reduce_eta(design.eta)?;
    if !(design.steps_per_ns > 0.0) {
        return Err(Error::Usage("steps per ns must be positive".into()));
    }
    let syn = invert_controls_s3(&xy_loop(design.gamma, 1.0), design.omega_max)?;
    assemble(XyScheme::Geometric, syn.controls, Some(syn.path), design, eta)
}

const DYNAMICAL_SIGNS: [f64; 4] = [1.0, 1.0, 1.0, -1.0];

/// Resonant constant-phase baseline with the envelope of `geo`.
///
/// The humps of `|Ω|` get signs `(+, +, +, −)` and time is stretched so the
/// net area is `π`; with phase `π` this gives `e^{iπσx/2} = iσx` directly.
pub fn dynamical_not_schedule(geo: &XyGate) -> Result<XyGate> {
    let tau = geo.tau;
    let envelope = geo.controls.amplitude.clone();
    let quarter = move |t: f64| ((4.0 * t / tau).floor().max(0.0) as usize).min(3);
    let area: f64 = (0..4)
        .map(|q| {
            let (a, b) = (q as f64 * tau / 4.0, (q + 1) as f64 * tau / 4.0);
            DYNAMICAL_SIGNS[q] * integrate(a, b, 2000, |t| envelope(t).abs())
        })
        .sum();
    if !(area.abs() > 0.0) {
        return Err(Error::Usage("envelope has zero area".into()));
    }
    let k = PI / area.abs();
    let sign = area.signum();
    let controls = ControlSchedule {
        amplitude: Arc::new(move |t| {
            let s = t / k;
            sign * DYNAMICAL_SIGNS[quarter(s)] * envelope(s).abs()
        }),
        phase: Arc::new(|_| PI),
        duration: k * tau,
        frame: Frame::S3,
        boundaries: (1..4).map(|q| k * q as f64 * tau / 4.0).collect(),
    };
    let design = XyDesign {
        omega_max: geo.controls.amplitude.as_ref()(0.0).abs(),
        gamma: FRAC_PI_2,
        eta: geo.eta,
        alpha_guess: geo.alpha_p,
        beta_guess: geo.beta_p,
        steps_per_ns: geo.steps as f64 / geo.tau,
    };
    assemble(XyScheme::Dynamical, controls, None, &design, geo.eta)
}

impl XyGate {
    pub fn name(&self) -> &'static str {
        match (self.scheme, self.eta == 0.0) {
            (XyScheme::Geometric, true) => "iswap_geometric",
            (XyScheme::Geometric, false) => "swap_geometric",
            (XyScheme::Dynamical, true) => "iswap_dynamical",
            (XyScheme::Dynamical, false) => "swap_dynamical",
        }
    }

    /// Exchange drive with both `J₀` and `J₁` shifted by `delta_j`.
    pub fn drive(&self, delta_j: f64) -> ExchangeDrive {
        let (amp, phase) = (self.controls.amplitude.clone(), self.controls.phase.clone());
        ExchangeDrive {
            j0: self.j0 + delta_j,
            j1: Arc::new(move |t| 2.0 * amp(t) + delta_j),
            omega_p: self.beta_p,
            phi_p: phase,
            alpha_p: self.alpha_p,
            beta_p: self.beta_p,
        }
    }

    pub fn schedule(&self, delta_j: f64) -> GateSchedule {
        let d = self.drive(delta_j);
        let block = Arc::new(move |t: f64| {
            let h = build_exchange_interaction(&d, t).h_i;
            Mat2::new(h[(1, 1)], h[(1, 2)], h[(2, 1)], h[(2, 2)])
        });
        GateSchedule {
            generator: Generator::Block(block),
            duration: self.tau,
            steps: self.steps,
            post: static_frame_propagator(self.alpha_p, self.beta_p, self.tau),
        }
    }
}
