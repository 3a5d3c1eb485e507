//! Device Hamiltonians for two exchange-coupled spins.
//!
//! Two-spin matrices built here use the Zeeman ordering
//! `{↑↑, ↓↑, ↑↓, ↓↓}`; [`to_computational`] converts to the tensor-product
//! ordering `{↑↑, ↑↓, ↓↑, ↓↓}` used for reported gates.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::sync::Arc;

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use crate::linalg::{c, cis, swap_middle, Mat2, Mat4, C64};
use crate::{Error, Result};

/// Above this `J/ΔE'` the effective two-block description is flagged.
pub const REGIME_WARN: f64 = 0.1;
/// Above this `J/ΔE'` the effective two-block description is refused.
pub const REGIME_MAX: f64 = 0.5;
/// Required ratio between the exchange drive and `α'`, `β'`.
pub const EXCHANGE_REGIME_MAX: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeviceParams {
    /// Average Zeeman splitting.
    pub ez: f64,
    /// Zeeman gradient between the dots.
    pub dez: f64,
    /// Extra average splitting from the longitudinal control field.
    pub ez1: f64,
    /// Extra gradient from the longitudinal control field.
    pub dez1: f64,
    pub bext_z: f64,
    /// Static exchange.
    pub j: f64,
    /// Transverse drive amplitude on the left dot.
    pub by_l1: f64,
    /// Transverse drive amplitude on the right dot.
    pub by_r1: f64,
    /// Drive frequency.
    pub omega: f64,
    /// Drive phase.
    pub varphi: f64,
}

impl Default for DeviceParams {
    fn default() -> Self {
        Self { ez: 0.0, dez: 0.0, ez1: 0.0, dez1: 0.0, bext_z: 0.0, j: 0.0, by_l1: 0.0, by_r1: 0.0, omega: 0.0, varphi: 0.0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    Valid,
    /// `J/ΔE'` lies in `(0.1, 0.5]`.
    Marginal,
}

impl DeviceParams {
    /// Total gradient `ΔE' = ΔE_z + ΔE¹_z`.
    pub fn gradient(&self) -> f64 {
        self.dez + self.dez1
    }

    pub fn regime(&self) -> Result<Regime> {
        if !(self.j >= 0.0) {
            return Err(Error::Regime(format!("negative exchange J = {}", self.j)));
        }
        let de = self.gradient();
        if !(de > 0.0) {
            return Err(Error::Regime(format!("gradient ΔE' = {de} must be positive")));
        }
        let ratio = self.j / de;
        if ratio > REGIME_MAX {
            Err(Error::Regime(format!("J/ΔE' = {ratio:.4} exceeds {REGIME_MAX}")))
        } else if ratio > REGIME_WARN {
            log::warn!("J/ΔE' = {ratio:.4} is above {REGIME_WARN}; effective blocks are approximate");
            Ok(Regime::Marginal)
        } else {
            Ok(Regime::Valid)
        }
    }
}

/// Permutes a Zeeman-ordered two-spin operator into tensor-product order.
pub fn to_computational(u: &Mat4) -> Mat4 {
    let p = swap_middle();
    p * u * p
}

fn hermitian_from_upper(diag: [f64; 4], upper: &[((usize, usize), C64)]) -> Mat4 {
    let mut h = Mat4::zeros();
    for (i, d) in diag.iter().enumerate() {
        h[(i, i)] = c(*d, 0.0);
    }
    for &((i, j), v) in upper {
        h[(i, j)] += v;
        h[(j, i)] += v.conj();
    }
    h
}

/// Lab-frame Hamiltonian with `B_{y,q}(t) = B¹_{y,q} cos(ωt + φ)`.
pub fn build_lab(p: &DeviceParams, t: f64) -> Mat4 {
    let e = p.ez + p.ez1;
    let de = p.gradient();
    let drive = (p.omega * t + p.varphi).cos();
    let bl = c(0.0, -0.5 * p.by_l1 * drive);
    let br = c(0.0, -0.5 * p.by_r1 * drive);
    hermitian_from_upper(
        [e, 0.5 * (-p.j + de), 0.5 * (-p.j - de), -e],
        &[((0, 1), bl), ((0, 2), br), ((1, 3), br), ((2, 3), bl), ((1, 2), c(0.5 * p.j, 0.0))],
    )
}

/// Change of frame `diag(e^{iωt}, 1, 1, e^{−iωt})` from the lab to the
/// frame rotating at the drive frequency.
pub fn rotating_frame(omega: f64, t: f64) -> Mat4 {
    Mat4::from_diagonal(&nalgebra::Vector4::new(cis(omega * t), c(1., 0.), c(1., 0.), cis(-omega * t)))
}

/// Rotating-frame Hamiltonian after the rotating-wave approximation.
/// Time-independent for fixed parameters.
pub fn build_rot_rwa(p: &DeviceParams) -> Mat4 {
    let detuning = p.ez + p.ez1 - p.omega;
    let de = p.gradient();
    let phase = cis(-p.varphi) * c(0.0, -1.0);
    let bl = phase * (0.25 * p.by_l1);
    let br = phase * (0.25 * p.by_r1);
    hermitian_from_upper(
        [detuning, 0.5 * (de - p.j), -0.5 * (de + p.j), -detuning],
        &[((0, 1), bl), ((0, 2), br), ((1, 3), br), ((2, 3), bl), ((1, 2), c(0.5 * p.j, 0.0))],
    )
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdiabaticAngle {
    pub theta: f64,
    /// Columns are `~↓↑` and `~↑↓` expressed in `{↓↑, ↑↓}`.
    pub basis: Matrix2<f64>,
}

/// Mixing angle of the instantaneous eigenstates of the central block.
pub fn adiabatic_angle(p: &DeviceParams) -> AdiabaticAngle {
    let theta = if p.j == 0.0 {
        FRAC_PI_2
    } else {
        let de = p.gradient();
        let alpha = de / p.j;
        let beta = (p.j * p.j + de * de).sqrt() / p.j;
        let s = alpha + beta;
        (s / (s * s + 1.0).sqrt()).asin()
    };
    let (s, co) = theta.sin_cos();
    AdiabaticAngle { theta, basis: Matrix2::new(s, -co, co, s) }
}

/// Two-spin unitary whose columns are `{↑↑, ~↓↑, ~↑↓, ↓↓}` in the Zeeman basis.
pub fn adiabatic_frame(p: &DeviceParams) -> Mat4 {
    let b = adiabatic_angle(p).basis;
    let mut u = Mat4::identity();
    for i in 0..2 {
        for j in 0..2 {
            u[(1 + i, 1 + j)] = c(b[(i, j)], 0.0);
        }
    }
    u
}

/// `E_s ≈ ΔE' + J²/(2ΔE')`, the splitting of the central block.
pub fn split_energy(j: f64, gradient: f64) -> f64 {
    gradient + j * j / (2.0 * gradient)
}

/// Drive frequency resonant with the `↑↑ ↔ ~↓↑` transition.
pub fn resonance_frequency(ez_total: f64, j: f64, gradient: f64) -> f64 {
    ez_total + 0.5 * (j - gradient - j * j / (2.0 * gradient))
}

/// Common phase rate of the `S₁` block.
pub fn c1(j: f64, gradient: f64) -> f64 {
    0.5 * (split_energy(j, gradient) - j)
}

/// Phase rate of the `S₂` block relative to `S₁`.
pub fn c2(j: f64, gradient: f64) -> f64 {
    split_energy(j, gradient) - 0.5 * j
}

/// `H_S1 = (h/2)(cos ϕ σx + sin ϕ σy)` on `{↑↑, ~↓↑}`.
pub fn h_s1(h: f64, phi: f64) -> Mat2 {
    let off = cis(-phi) * (0.5 * h);
    Mat2::new(c(0., 0.), off, off.conj(), c(0., 0.))
}

/// `H_S2` on `{~↑↓, ↓↓}`: exchange splitting plus the same transverse drive.
pub fn h_s2(j: f64, h: f64, phi: f64) -> Mat2 {
    let off = cis(-phi) * (0.5 * h);
    Mat2::new(c(-0.5 * j, 0.), off, off.conj(), c(0.5 * j, 0.))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EffectiveBlocks {
    pub h_s1: Mat2,
    pub h_s2: Mat2,
    pub c1: f64,
    pub c2: f64,
    pub h: f64,
    pub phi: f64,
    pub theta: f64,
    pub omega_res: f64,
    pub regime: Regime,
}

impl EffectiveBlocks {
    /// `C₁I ⊕ (H_S1 ⊕ (−C₂ĩ + H_S2))` on `{↑↑, ~↓↑, ~↑↓, ↓↓}`.
    pub fn reconstructed(&self) -> Mat4 {
        let mut h = Mat4::identity() * c(self.c1, 0.0);
        for i in 0..2 {
            for j in 0..2 {
                h[(i, j)] += self.h_s1[(i, j)];
                h[(2 + i, 2 + j)] += self.h_s2[(i, j)];
            }
        }
        h[(2, 2)] -= c(self.c2, 0.0);
        h[(3, 3)] -= c(self.c2, 0.0);
        h
    }
}

/// Two-block effective description valid for `J ≪ ΔE'`.
pub fn effective_blocks(p: &DeviceParams) -> Result<EffectiveBlocks> {
    let regime = p.regime()?;
    let de = p.gradient();
    let h = 0.5 * p.by_l1;
    let phi = p.varphi + FRAC_PI_2;
    Ok(EffectiveBlocks {
        h_s1: h_s1(h, phi),
        h_s2: h_s2(p.j, h, phi),
        c1: c1(p.j, de),
        c2: c2(p.j, de),
        h,
        phi,
        theta: adiabatic_angle(p).theta,
        omega_res: resonance_frequency(p.ez + p.ez1, p.j, de),
        regime,
    })
}

pub type Envelope = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Exchange modulated as `J(t) = J₀ + J₁(t) cos(ω't + φ'(t))`.
#[derive(Clone)]
pub struct ExchangeDrive {
    pub j0: f64,
    pub j1: Envelope,
    pub omega_p: f64,
    pub phi_p: Envelope,
    /// `α' = E_z + E¹_z`.
    pub alpha_p: f64,
    /// `β' = (ΔE_z + ΔE¹_z)/2`.
    pub beta_p: f64,
}

impl fmt::Debug for ExchangeDrive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExchangeDrive")
            .field("j0", &self.j0)
            .field("omega_p", &self.omega_p)
            .field("alpha_p", &self.alpha_p)
            .field("beta_p", &self.beta_p)
            .finish_non_exhaustive()
    }
}

impl ExchangeDrive {
    /// Rabi frequency `Ω = J₁/2`.
    pub fn omega(&self, t: f64) -> f64 {
        0.5 * (self.j1)(t)
    }

    pub fn detuning(&self) -> f64 {
        self.beta_p - self.omega_p
    }

    pub fn is_resonant(&self) -> bool {
        self.detuning().abs() <= 1e-12 * self.beta_p.abs().max(1.0)
    }

    /// Checks `J₀, max|J₁| ≤ 0.1 min(α', β')` on the given samples.
    pub fn check_regime(&self, times: impl IntoIterator<Item = f64>) -> Result<()> {
        let j1_max = times.into_iter().map(|t| (self.j1)(t).abs()).fold(0.0, f64::max);
        let scale = self.alpha_p.min(self.beta_p);
        let worst = self.j0.abs().max(j1_max);
        if worst > EXCHANGE_REGIME_MAX * scale {
            Err(Error::Regime(format!(
                "exchange drive {worst:.4e} rad/ns exceeds {EXCHANGE_REGIME_MAX} of min(α', β') = {scale:.4e} rad/ns"
            )))
        } else {
            Ok(())
        }
    }

    /// Lab-frame Hamiltonian in the Zeeman ordering.
    pub fn lab(&self, t: f64) -> Mat4 {
        let j = self.j0 + (self.j1)(t) * (self.omega_p * t + (self.phi_p)(t)).cos();
        hermitian_from_upper(
            [self.alpha_p, -0.5 * self.beta_p - 0.5 * j, 0.5 * self.beta_p - 0.5 * j, -self.alpha_p],
            &[((1, 2), c(0.5 * j, 0.0))],
        )
    }
}

/// Exchange Hamiltonian in the interaction picture of the static Zeeman terms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExchangeInteraction {
    /// Full two-spin form, zero outside the `{↓↑, ↑↓}` block.
    pub h_i: Mat4,
    /// Drive part on `S₃ = {↓↑, ↑↓}` with the `−J₀/2` shift removed.
    pub h_reduced: Mat2,
    /// Rate of the local `S₃` phase, `η̇ = −J₀/2`.
    pub eta_rate: f64,
    /// False when `ω' ≠ β'`; the form is then kept without RWA guarantees.
    pub resonant: bool,
}

pub fn build_exchange_interaction(d: &ExchangeDrive, t: f64) -> ExchangeInteraction {
    let resonant = d.is_resonant();
    let mut off = cis((d.phi_p)(t)) * (0.25 * (d.j1)(t));
    if !resonant {
        off *= cis(-d.detuning() * t);
    }
    let h_reduced = Mat2::new(c(0., 0.), off, off.conj(), c(0., 0.));
    let mut h_i = Mat4::zeros();
    h_i[(1, 1)] = c(-0.5 * d.j0, 0.0);
    h_i[(2, 2)] = c(-0.5 * d.j0, 0.0);
    h_i[(1, 2)] = off;
    h_i[(2, 1)] = off.conj();
    ExchangeInteraction { h_i, h_reduced, eta_rate: -0.5 * d.j0, resonant }
}

/// `exp(−iH't)` for the static Zeeman part `diag(α', −β'/2, β'/2, −α')`.
pub fn static_frame_propagator(alpha_p: f64, beta_p: f64, t: f64) -> Mat4 {
    Mat4::from_diagonal(&nalgebra::Vector4::new(
        cis(-alpha_p * t),
        cis(0.5 * beta_p * t),
        cis(-0.5 * beta_p * t),
        cis(alpha_p * t),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{fidelity, hermitian_defect, mat_exp};
    use crate::propagate::{propagate, TimeGrid};
    use crate::units::mhz;
    use proptest::prelude::*;

    fn sample_params(v: &[f64]) -> DeviceParams {
        DeviceParams {
            ez: v[0],
            dez: v[1],
            ez1: v[2],
            dez1: v[3],
            bext_z: 0.0,
            j: v[4].abs(),
            by_l1: v[5],
            by_r1: v[6],
            omega: v[7],
            varphi: v[8],
        }
    }

    #[test]
    fn zeeman_limit_is_diagonal() {
        let p = DeviceParams { ez: 3.0, dez: 0.4, dez1: 0.1, ..Default::default() };
        let h = build_lab(&p, 1.7);
        let expected = Mat4::from_diagonal(&nalgebra::Vector4::new(c(3., 0.), c(0.25, 0.), c(-0.25, 0.), c(-3., 0.)));
        assert!((h - expected).norm() < 1e-15);
    }

    #[test]
    fn lab_matrix_entries() {
        let p = DeviceParams { ez: 3.0, dez: 0.4, j: 0.2, by_l1: 0.6, by_r1: 0.3, omega: 2.0, varphi: 0.4, ..Default::default() };
        let t = 0.8;
        let bl = 0.6 * (2.0 * t + 0.4f64).cos();
        let h = build_lab(&p, t);
        assert!((h[(0, 1)] - c(0.0, -bl / 2.0)).norm() < 1e-15);
        assert!((h[(1, 2)] - c(0.1, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn rotating_frame_corner_magnitude() {
        let p = DeviceParams { ez: 3.0, dez: 0.4, j: 0.02, by_l1: 0.08, omega: 3.0, varphi: 0.3, ..Default::default() };
        let h = build_rot_rwa(&p);
        assert!((h[(0, 1)].norm() - 0.02).abs() < 1e-15);
        assert!(h[(0, 2)].norm() == 0.0);
        assert_eq!(h[(0, 0)].re, 0.0);
    }

    #[test]
    fn rotating_frame_drive_off_phases() {
        let p = DeviceParams { ez: 3.0, dez: 0.4, dez1: 0.05, j: 0.03, omega: 2.9, ..Default::default() };
        let h = build_rot_rwa(&p);
        let t = 13.0;
        let u = propagate(&|_t: f64| h, &TimeGrid::new(0.0, t, 50).unwrap()).unwrap();
        // ↑↑ and ↓↓ are decoupled: pure phases from the diagonal
        assert!((u[(0, 0)] - cis(-(3.0 - 2.9) * t)).norm() < 1e-8);
        assert!((u[(3, 3)] - cis((3.0 - 2.9) * t)).norm() < 1e-8);
    }

    /// Lab-frame evolution transformed into the rotating frame agrees with
    /// the RWA generator when the drive is weak compared with the carrier.
    #[test]
    fn rwa_matches_lab_frame() {
        let de = 1.0;
        let j = 0.05;
        let ez = 20.0;
        let mut p = DeviceParams { ez, dez: de, j, by_l1: 0.02, ..Default::default() };
        p.omega = resonance_frequency(ez, j, de);
        let t1 = 40.0;
        let lab = propagate(&|t: f64| build_lab(&p, t), &TimeGrid::new(0.0, t1, 400_000).unwrap()).unwrap();
        let r = rotating_frame(p.omega, t1);
        let rot = mat_exp(&build_rot_rwa(&p), t1).unwrap();
        assert!(fidelity(&(r * lab), &rot) > 0.999);
    }

    #[test]
    fn adiabatic_limits() {
        let p = DeviceParams { dez: 1.0, j: 1e-9, ..Default::default() };
        let a = adiabatic_angle(&p);
        assert!((a.theta.sin() - 1.0).abs() < 1e-12);
        let p = DeviceParams { dez: 1.0, j: 1.0, ..Default::default() };
        let a = adiabatic_angle(&p);
        // α = 1, β = √2: sinθ = (1+√2)/√((1+√2)²+1)
        let s = 1.0 + 2f64.sqrt();
        assert!((a.theta.sin() - s / (s * s + 1.0).sqrt()).abs() < 1e-15);
        assert!((a.basis.determinant() - 1.0).abs() < 1e-15);
        assert!((a.basis.transpose() * a.basis - Matrix2::identity()).norm() < 1e-15);
        assert_eq!(adiabatic_angle(&DeviceParams { dez: 1.0, ..Default::default() }).theta, FRAC_PI_2);
    }

    #[test]
    fn adiabatic_frame_diagonalises_central_block() {
        let p = DeviceParams { dez: 1.0, j: 0.3, ..Default::default() };
        let u = adiabatic_frame(&p);
        let h = u.adjoint() * build_rot_rwa(&p) * u;
        assert!(h[(1, 2)].norm() < 1e-14);
        // ~↓↑ carries the upper eigenvalue
        assert!(h[(1, 1)].re > h[(2, 2)].re);
    }

    #[test]
    fn drive_amplitude_convention() {
        let p = DeviceParams { dez: 1.0, by_l1: mhz(4.0), ..Default::default() };
        let b = effective_blocks(&p).unwrap();
        assert!((b.h - mhz(2.0)).abs() < 1e-15);
    }

    #[test]
    fn effective_rates_arithmetic() {
        let h0 = mhz(2.0);
        let (j, de) = (37.4879 * h0, 145.15 * h0);
        // J²/(2ΔE') = 1405.34/290.3 h0
        let es = 145.15 + 37.4879f64.powi(2) / 290.3;
        assert!((c2(j, de) / h0 - (es - 18.74395)).abs() < 1e-9);
        assert!((c1(j, de) / h0 - 0.5 * (es - 37.4879)).abs() < 1e-9);
        assert!((c2(0.0, de) - de).abs() < 1e-15);
        assert!((c1(0.0, de) - 0.5 * de).abs() < 1e-15);
    }

    #[test]
    fn effective_rates_match_spectrum() {
        let (de, j) = (1.0, 0.05);
        let p = DeviceParams { dez: de, j, omega: resonance_frequency(0.0, j, de), ..Default::default() };
        let u = adiabatic_frame(&p);
        let h = u.adjoint() * build_rot_rwa(&p) * u;
        let (a, b) = (c1(j, de), c2(j, de));
        let expected = [a, a, a - b - j / 2.0, a - b + j / 2.0];
        for (k, e) in expected.iter().enumerate() {
            // exact up to O(J⁴/ΔE'³)
            assert!((h[(k, k)].re - e).abs() < 2e-6, "{k}: {} vs {e}", h[(k, k)].re);
        }
    }

    #[test]
    fn block_spectra() {
        let p = DeviceParams { dez: 1.0, j: 0.07, by_l1: 0.02, varphi: 0.9, ..Default::default() };
        let b = effective_blocks(&p).unwrap();
        assert!(b.h_s1.trace().norm() < 1e-15);
        let eig = |m: &Mat2| {
            let (v, _) = crate::linalg::HermitianEigen::eigh(m);
            let mut v = v.to_vec();
            v.sort_by(f64::total_cmp);
            v
        };
        let e1 = eig(&b.h_s1);
        assert!((e1[1] - b.h / 2.0).abs() < 1e-15 && (e1[0] + b.h / 2.0).abs() < 1e-15);
        let r = (0.07f64.powi(2) + b.h * b.h).sqrt() / 2.0;
        let e2 = eig(&b.h_s2);
        assert!((e2[1] - r).abs() < 1e-15 && (e2[0] + r).abs() < 1e-15);
    }

    #[test]
    fn regime_flags() {
        let mut p = DeviceParams { dez: 1.0, j: 0.05, ..Default::default() };
        assert_eq!(p.regime().unwrap(), Regime::Valid);
        p.j = 0.3;
        assert_eq!(p.regime().unwrap(), Regime::Marginal);
        p.j = 0.6;
        assert!(effective_blocks(&p).is_err());
    }

    #[test]
    fn exchange_drive_off_limit() {
        let d = ExchangeDrive { j0: 0.2, j1: Arc::new(|_| 0.0), omega_p: 5.0, phi_p: Arc::new(|_| 0.0), alpha_p: 30.0, beta_p: 5.0 };
        let hi = build_exchange_interaction(&d, 1.0);
        assert_eq!(hi.h_reduced, Mat2::zeros());
        assert_eq!(hi.eta_rate, -0.1);
        assert!(hi.resonant);
        let u = mat_exp(&hi.h_i, 3.0).unwrap();
        assert!((u[(1, 1)] - cis(0.3)).norm() < 1e-14);
    }

    #[test]
    fn exchange_rabi_relation() {
        let om_max = mhz(50.0);
        let d = ExchangeDrive {
            j0: 0.0,
            j1: Arc::new(move |t: f64| 2.0 * om_max * t.sin()),
            omega_p: 10.0,
            phi_p: Arc::new(|t| 0.3 * t),
            alpha_p: 30.0,
            beta_p: 10.0,
        };
        let t = std::f64::consts::FRAC_PI_2;
        assert!((d.omega(t) - om_max).abs() < 1e-15);
        let hi = build_exchange_interaction(&d, t);
        assert!((hi.h_reduced[(0, 1)].norm() - om_max / 2.0).abs() < 1e-15);
        assert!(d.check_regime([t]).is_ok());
    }

    /// The interaction-picture form reproduces the lab-frame dynamics.
    #[test]
    fn exchange_rwa_matches_lab() {
        let beta = 20.0;
        let alpha = 60.0;
        let j1 = 0.2;
        let d = ExchangeDrive { j0: 0.05, j1: Arc::new(move |_| j1), omega_p: beta, phi_p: Arc::new(|_| 0.4), alpha_p: alpha, beta_p: beta };
        let t1 = 30.0;
        let lab = propagate(&|t: f64| d.lab(t), &TimeGrid::new(0.0, t1, 200_000).unwrap()).unwrap();
        let hi = build_exchange_interaction(&d, 0.0).h_i;
        let pred = static_frame_propagator(alpha, beta, t1) * mat_exp(&hi, t1).unwrap();
        assert!(fidelity(&lab, &pred) > 0.999);
    }

    proptest! {
        #[test]
        fn constructors_are_hermitian(v in prop::collection::vec(-5.0f64..5.0, 9), t in -10.0f64..10.0) {
            let p = sample_params(&v);
            prop_assert!(hermitian_defect(&build_lab(&p, t)) <= 1e-14);
            prop_assert!(hermitian_defect(&build_rot_rwa(&p)) <= 1e-14);
        }
    }
}
