use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use super::GateSchedule;
use crate::linalg::{c, unitarity_defect, Mat4};
use crate::{Error, Result};

/// Makhlin local invariants; equal for gates that differ only by
/// single-qubit operations.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalInvariants {
    pub g1: f64,
    pub g2: f64,
    pub g3: f64,
}

impl LocalInvariants {
    pub const fn new(g1: f64, g2: f64, g3: f64) -> Self {
        Self { g1, g2, g3 }
    }

    /// Largest componentwise difference.
    pub fn distance(&self, other: &Self) -> f64 {
        (self.g1 - other.g1).abs().max((self.g2 - other.g2).abs()).max((self.g3 - other.g3).abs())
    }
}

/// Columns `(|00⟩+|11⟩)/√2, −i(|00⟩−|11⟩)/√2, −i(|01⟩+|10⟩)/√2, (|01⟩−|10⟩)/√2`.
pub fn magic_basis() -> Mat4 {
    let r = FRAC_1_SQRT_2;
    let o = c(0., 0.);
    let p = c(r, 0.);
    let m = c(0., -r);
    Mat4::new(
        p, m, o, o, //
        o, o, m, p, //
        o, o, m, -p, //
        p, -m, o, o,
    )
}

/// `(Re, Im)` of `tr²M/(16 det U)` and `Re[(tr²M − tr M²)/(4 det U)]`
/// with `M = (Q†UQ)ᵀ(Q†UQ)`.
pub fn local_invariants(u: &Mat4) -> Result<LocalInvariants> {
    let defect = unitarity_defect(u);
    if defect > 1e-6 {
        return Err(Error::Usage(format!("local invariants need a unitary input (defect {defect:.3e})")));
    }
    let q = magic_basis();
    let ub = q.adjoint() * u * q;
    let m = ub.transpose() * ub;
    let det = u.determinant();
    let tr = m.trace();
    let g = tr * tr / (det * 16.0);
    let g3 = (tr * tr - (m * m).trace()) / (det * 4.0);
    Ok(LocalInvariants { g1: g.re, g2: g.im, g3: g3.re })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InvariantSample {
    pub t: f64,
    pub invariants: LocalInvariants,
}

/// Local invariants of `U(t)` along a schedule, every `every` steps.
pub fn invariant_trajectory(schedule: &GateSchedule, every: usize) -> Result<Vec<InvariantSample>> {
    schedule
        .trajectory(every)?
        .into_iter()
        .map(|(t, u)| Ok(InvariantSample { t, invariants: local_invariants(&u)? }))
        .collect()
}
