use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Generator, GateKind, GateSchedule};
use crate::geometry::{cz_path, ControlSchedule};
use crate::hamiltonian::{build_lab, build_rot_rwa, c2, h_s2, resonance_frequency, rotating_frame, DeviceParams, REGIME_MAX};
use crate::linalg::{cis, fidelity, mat_exp, optimal_phase, Mat2, Mat4};
use crate::{Error, Result};

use super::targets::z_pi;

/// Residual below which the two-segment `S₂` product counts as `Z(π)`.
pub const RESIDUAL_TOL: f64 = 1e-6;
/// Minimum fidelity of the effective two-block gate against CZ.
pub const BLOCK_FIDELITY_MIN: f64 = 0.999;

/// Exchange values scanned for the `S₂` condition.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CzScan {
    pub j_min: f64,
    pub j_max: f64,
    pub points: usize,
}

impl CzScan {
    /// `J ∈ [0, 100 h₀]` in steps of `h₀/40`.
    pub fn standard(h0: f64) -> Self {
        Self { j_min: 0.0, j_max: 100.0 * h0, points: 4001 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CzCalibration {
    pub h0: f64,
    pub chi1: f64,
    pub xi1: f64,
    /// Calibrated exchange.
    pub j: f64,
    pub tau1: f64,
    pub tau2: f64,
    /// Drive phases of the two segments.
    pub phi1: f64,
    pub phi2: f64,
    pub de_guess: f64,
    /// Gradient adjusted so that `C₂(τ₁+τ₂) = n π/2`.
    pub de_adjusted: f64,
    pub n_odd: i64,
    /// `min_θ ‖R₂R₁ − e^{iθ}Z(π)‖_F` at the calibrated exchange.
    pub residual: f64,
    /// The optimal `θ` above.
    pub s2_phase: f64,
    /// Fidelity against CZ of the effective two-block gate.
    pub block_fidelity: f64,
}

impl CzCalibration {
    pub fn duration(&self) -> f64 {
        self.tau1 + self.tau2
    }

    pub fn c2(&self) -> f64 {
        c2(self.j, self.de_adjusted)
    }

    pub fn residual_ok(&self) -> bool {
        self.residual <= RESIDUAL_TOL
    }

    /// `C₂(τ₁+τ₂) − n π/2`.
    pub fn commensurability_error(&self) -> f64 {
        self.c2() * self.duration() - self.n_odd as f64 * FRAC_PI_2
    }
}

fn s2_product(j: f64, h0: f64, (phi1, tau1): (f64, f64), (phi2, tau2): (f64, f64)) -> Mat2 {
    let r1 = mat_exp(&h_s2(j, h0, phi1), tau1).expect("Hermitian by construction");
    let r2 = mat_exp(&h_s2(j, h0, phi2), tau2).expect("Hermitian by construction");
    r2 * r1
}

fn golden_min(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 < f2 {
            hi = x2;
            (x2, f2) = (x1, f1);
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            (x1, f1) = (x2, f2);
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        }
    }
    0.5 * (lo + hi)
}

/// Calibrates the CZ construction over the standard exchange scan.
pub fn calibrate_cz(h0: f64, de_guess: f64, chi1: f64, xi1: f64) -> Result<CzCalibration> {
    calibrate_cz_with(h0, de_guess, chi1, xi1, &CzScan::standard(h0))
}

/// Finds the exchange `J` for which the two `S₂` segments compose to
/// `Z(π)` up to a global phase, then adjusts the gradient so the relative
/// `S₂` phase `C₂τ` completes the CZ.
///
/// The scan is evaluated in parallel but reduced in order, so the result
/// does not depend on the number of threads.
pub fn calibrate_cz_with(h0: f64, de_guess: f64, chi1: f64, xi1: f64, scan: &CzScan) -> Result<CzCalibration> {
    if !(de_guess > 0.0) {
        return Err(Error::Usage(format!("gradient guess {de_guess} must be positive")));
    }
    if scan.points < 3 || !(scan.j_max > scan.j_min) {
        return Err(Error::Usage("exchange scan needs at least three points over a nonempty range".into()));
    }
    let (path, ctrl) = cz_path(chi1, xi1, h0)?;
    let tau1 = path.boundaries[0];
    let tau2 = path.duration - tau1;
    let phi1 = ctrl.phase(0.5 * tau1);
    let phi2 = ctrl.phase(tau1 + 0.5 * tau2);
    let target = z_pi();
    let residual = |j: f64| (s2_product(j, h0, (phi1, tau1), (phi2, tau2)) - target).norm();

    let step = (scan.j_max - scan.j_min) / (scan.points - 1) as f64;
    let curve: Vec<(f64, f64)> = (0..scan.points)
        .into_par_iter()
        .map(|k| {
            let j = scan.j_min + k as f64 * step;
            (j, residual(j))
        })
        .collect();
    // the effective description only holds for J ≤ REGIME_MAX·ΔE′
    let admissible = curve.iter().take_while(|(j, _)| *j <= REGIME_MAX * de_guess).count();
    let (k_best, _) =
        curve[..admissible].iter().enumerate().fold((0, f64::INFINITY), |best, (k, &(_, r))| if r < best.1 { (k, r) } else { best });
    if k_best == 0 || k_best + 1 >= admissible {
        return Err(Error::Calibration { reason: "no interior minimum of the residual in the exchange scan".into(), curve });
    }

    // bisection on the sign of the slope, then golden-section polish
    let (mut lo, mut hi) = (curve[k_best - 1].0, curve[k_best + 1].0);
    let d = 1e-7 * h0;
    while hi - lo > 1e-4 * h0 {
        let m = 0.5 * (lo + hi);
        if residual(m + d) > residual(m - d) {
            hi = m;
        } else {
            lo = m;
        }
    }
    let j = golden_min(&residual, lo - 1e-4 * h0, hi + 1e-4 * h0, 1e-12 * h0);
    let r = s2_product(j, h0, (phi1, tau1), (phi2, tau2));
    let s2_phase = optimal_phase(&r, &target);
    let res = (r - target).norm();

    // relative S₂ phase: e^{iC₂τ} e^{iθ}(−i) = 1 needs C₂τ ≡ π/2 − θ
    let tau = tau1 + tau2;
    let class = if s2_phase.cos() >= 0.0 { 1 } else { 3 };
    let n_guess = c2(j, de_guess) * tau / FRAC_PI_2;
    let n_odd = 4 * ((n_guess - class as f64) / 4.0).round() as i64 + class;
    // C₂ = dE + J²/(2dE) − J/2 = nπ/(2τ): larger root of the quadratic in dE
    let k = n_odd as f64 * FRAC_PI_2 / tau + 0.5 * j;
    let disc = k * k - 2.0 * j * j;
    if !(disc >= 0.0) || n_odd <= 0 {
        return Err(Error::Calibration { reason: format!("no gradient realises C₂τ = {n_odd}π/2"), curve });
    }
    let de_adjusted = 0.5 * (k + disc.sqrt());
    if ((de_adjusted - de_guess) / de_guess).abs() > 0.01 {
        log::warn!("gradient moved by more than 1% ({de_guess} -> {de_adjusted} rad/ns)");
    }

    let mut blk = Mat4::identity();
    let s2 = r * cis(c2(j, de_adjusted) * tau);
    for a in 0..2 {
        for b in 0..2 {
            blk[(2 + a, 2 + b)] = s2[(a, b)];
        }
    }
    let block_fidelity = fidelity(&blk, &GateKind::Cz.matrix().expect("two-qubit target"));
    let cal = CzCalibration { h0, chi1, xi1, j, tau1, tau2, phi1, phi2, de_guess, de_adjusted, n_odd, residual: res, s2_phase, block_fidelity };
    if !cal.residual_ok() {
        log::warn!("S₂ residual {res:.3e} exceeds {RESIDUAL_TOL:e}; best achievable at J = {:.6} h₀", j / h0);
    }
    if block_fidelity < BLOCK_FIDELITY_MIN {
        return Err(Error::Calibration { reason: format!("effective CZ fidelity {block_fidelity:.6} below {BLOCK_FIDELITY_MIN}"), curve });
    }
    Ok(cal)
}

/// Transverse drive configuration of the CZ pulse.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CzDrive {
    /// Right-dot drive amplitude `B¹_{y,R}`; ignored when not included.
    pub by_r1: f64,
    pub include_right_drive: bool,
    pub steps_per_ns: f64,
}

impl Default for CzDrive {
    fn default() -> Self {
        Self { by_r1: 0.0, include_right_drive: false, steps_per_ns: 100.0 }
    }
}

/// Named intermediate points of the CZ evolution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CzMilestone {
    /// `√CNOT` class, reached at 3.342 ns.
    SqrtCnot,
    /// First CZ-class point, at 6.669 ns.
    CzPrime,
    /// End of the pulse.
    Cz,
}

impl CzMilestone {
    pub const ALL: [CzMilestone; 3] = [CzMilestone::SqrtCnot, CzMilestone::CzPrime, CzMilestone::Cz];

    pub fn name(&self) -> &'static str {
        match self {
            CzMilestone::SqrtCnot => "sqrt_cnot",
            CzMilestone::CzPrime => "cz_prime",
            CzMilestone::Cz => "cz",
        }
    }

    pub fn class(&self) -> GateKind {
        match self {
            CzMilestone::SqrtCnot => GateKind::SqrtCnot,
            _ => GateKind::Cz,
        }
    }
}

/// A calibrated CZ pulse in the rotating frame.
#[derive(Clone, Debug)]
pub struct CzGate {
    pub calibration: CzCalibration,
    pub drive: CzDrive,
    /// Rotating-frame parameters at zero exchange noise; `varphi` is set per
    /// segment from `controls`.
    pub params: DeviceParams,
    pub controls: ControlSchedule,
}

/// Builds the rotating-frame CZ schedule from a calibration.
pub fn synthesize_cz(cal: &CzCalibration, drive: CzDrive) -> Result<CzGate> {
    if !(drive.steps_per_ns > 0.0) {
        return Err(Error::Usage("steps per ns must be positive".into()));
    }
    let (_, controls) = cz_path(cal.chi1, cal.xi1, cal.h0)?;
    let params = DeviceParams {
        dez: cal.de_adjusted,
        j: cal.j,
        by_l1: 2.0 * cal.h0,
        by_r1: if drive.include_right_drive { drive.by_r1 } else { 0.0 },
        omega: resonance_frequency(0.0, cal.j, cal.de_adjusted),
        ..Default::default()
    };
    params.regime()?;
    Ok(CzGate { calibration: cal.clone(), drive, params, controls })
}

impl CzGate {
    pub fn duration(&self) -> f64 {
        self.controls.duration
    }

    pub fn target(&self) -> Mat4 {
        GateKind::Cz.matrix().expect("two-qubit target")
    }

    /// Default time of a milestone.
    pub fn milestone_time(&self, m: CzMilestone) -> f64 {
        match m {
            CzMilestone::SqrtCnot => 3.342,
            CzMilestone::CzPrime => 6.669,
            CzMilestone::Cz => self.duration(),
        }
    }

    /// Rotating-frame generator with the exchange shifted by `delta_j`; the
    /// drive frequency stays at its calibrated value.
    pub fn hamiltonian(&self, delta_j: f64) -> Arc<dyn Fn(f64) -> Mat4 + Send + Sync> {
        let mut p = self.params;
        p.j += delta_j;
        let ctrl = self.controls.clone();
        Arc::new(move |t| {
            let mut q = p;
            q.varphi = ctrl.phase(t) - FRAC_PI_2;
            build_rot_rwa(&q)
        })
    }

    fn steps_for(&self, t: f64) -> usize {
        // even, so the phase switch at mid-pulse falls on a node
        2 * ((0.5 * t * self.drive.steps_per_ns).ceil() as usize).max(1)
    }

    pub fn schedule(&self, delta_j: f64) -> GateSchedule {
        let duration = self.duration();
        GateSchedule { generator: Generator::Full(self.hamiltonian(delta_j)), duration, steps: self.steps_for(duration), post: Mat4::identity() }
    }

    pub fn schedule_until(&self, t_end: f64, delta_j: f64) -> GateSchedule {
        GateSchedule { generator: Generator::Full(self.hamiltonian(delta_j)), duration: t_end, steps: self.steps_for(t_end), post: Mat4::identity() }
    }

    pub fn milestone(&self, m: CzMilestone, delta_j: f64) -> GateSchedule {
        self.schedule_until(self.milestone_time(m), delta_j)
    }

    /// Lab-frame schedule at average splitting `ez`, transformed back into
    /// the rotating frame at the end. Resolves the carrier, so it needs
    /// `steps_per_ns` well above `ez/0.01`.
    pub fn lab_schedule(&self, ez: f64, steps_per_ns: f64) -> GateSchedule {
        let mut p = self.params;
        p.ez = ez;
        p.omega = resonance_frequency(ez, p.j, p.gradient());
        let ctrl = self.controls.clone();
        let duration = self.duration();
        let h = Arc::new(move |t: f64| {
            let mut q = p;
            q.varphi = ctrl.phase(t) - FRAC_PI_2;
            build_lab(&q, t)
        });
        let steps = 2 * ((0.5 * duration * steps_per_ns).ceil() as usize).max(1);
        GateSchedule { generator: Generator::Full(h), duration, steps, post: rotating_frame(p.omega, duration) }
    }
}
