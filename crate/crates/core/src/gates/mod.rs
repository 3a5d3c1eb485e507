//! Two-qubit gate targets, local invariants and pulse-level gate synthesis.

mod cz;
mod invariants;
mod targets;
mod xy;

use std::fmt;
use std::sync::Arc;

use crate::hamiltonian::to_computational;
use crate::linalg::{embed_block, Mat2, Mat4};
use crate::propagate::{propagate, propagate_trajectory, TimeGrid};
use crate::Result;

pub use cz::{calibrate_cz, calibrate_cz_with, synthesize_cz, CzCalibration, CzDrive, CzGate, CzMilestone, CzScan, RESIDUAL_TOL};
pub use invariants::{invariant_trajectory, local_invariants, magic_basis, InvariantSample, LocalInvariants};
pub use targets::{s3_embedded, z_pi, GateKind};
pub use xy::{dynamical_not_schedule, synthesize_xy_gate, XyDesign, XyGate, XyScheme};

pub type Generator4 = Arc<dyn Fn(f64) -> Mat4 + Send + Sync>;
pub type Generator2 = Arc<dyn Fn(f64) -> Mat2 + Send + Sync>;

/// Time-dependent generator of a two-spin gate, Zeeman ordered.
#[derive(Clone)]
pub enum Generator {
    Full(Generator4),
    /// Acts only on `{↓↑, ↑↓}`; `↑↑` and `↓↓` stay idle.
    Block(Generator2),
}

/// Everything needed to produce one gate: the generator, its duration and
/// step count, and a fixed unitary applied afterwards.
#[derive(Clone)]
pub struct GateSchedule {
    pub generator: Generator,
    pub duration: f64,
    pub steps: usize,
    /// Applied after the evolution, e.g. the static Zeeman frame.
    pub post: Mat4,
}

impl fmt::Debug for GateSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GateSchedule").field("duration", &self.duration).field("steps", &self.steps).finish_non_exhaustive()
    }
}

impl GateSchedule {
    pub fn grid(&self) -> Result<TimeGrid> {
        TimeGrid::new(0.0, self.duration, self.steps)
    }

    pub fn hamiltonian(&self, t: f64) -> Mat4 {
        match &self.generator {
            Generator::Full(h) => h(t),
            Generator::Block(h) => embed_block(&h(t), 1, 2, &Mat4::zeros()),
        }
    }

    /// Zeeman-ordered evolution operator including `post`.
    pub fn evolve(&self) -> Result<Mat4> {
        let grid = self.grid()?;
        let u = match &self.generator {
            Generator::Full(h) => propagate(&|t: f64| h(t), &grid)?,
            Generator::Block(h) => embed_block(&propagate(&|t: f64| h(t), &grid)?, 1, 2, &Mat4::identity()),
        };
        Ok(self.post * u)
    }

    /// The gate in tensor-product order `{↑↑, ↑↓, ↓↑, ↓↓}`.
    pub fn unitary(&self) -> Result<Mat4> {
        Ok(to_computational(&self.evolve()?))
    }

    /// `(t, U(t))` in tensor-product order, without `post`.
    pub fn trajectory(&self, every: usize) -> Result<Vec<(f64, Mat4)>> {
        let grid = self.grid()?;
        let traj: Vec<(f64, Mat4)> = match &self.generator {
            Generator::Full(h) => propagate_trajectory(&|t: f64| h(t), &grid, every)?,
            Generator::Block(h) => propagate_trajectory(&|t: f64| h(t), &grid, every)?
                .into_iter()
                .map(|(t, u)| (t, embed_block(&u, 1, 2, &Mat4::identity())))
                .collect(),
        };
        Ok(traj.into_iter().map(|(t, u)| (t, to_computational(&u))).collect())
    }

    /// The same generator stopped at `t_end`, with no `post` factor.
    pub fn truncated(&self, t_end: f64) -> Self {
        let steps = ((self.steps as f64 * t_end / self.duration).round() as usize).max(1);
        Self { generator: self.generator.clone(), duration: t_end, steps, post: Mat4::identity() }
    }
}
