//! Time-ordered propagation with the exponential midpoint rule.

use crate::linalg::{hermitian_defect, unitarity_defect, ExpHermitian, Mat, HERMITIAN_TOL};
use crate::{Error, Result};

/// Largest `‖H‖·Δt` accepted by [`auto_steps`].
pub const DEFAULT_MAX_PHASE: f64 = 0.01;

/// Unitarity tolerance enforced on every propagated result.
pub const UNITARITY_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeGrid {
    pub t0: f64,
    pub t1: f64,
    pub steps: usize,
}

impl TimeGrid {
    pub fn new(t0: f64, t1: f64, steps: usize) -> Result<Self> {
        if !(t0.is_finite() && t1.is_finite()) {
            return Err(Error::InvalidGrid("non-finite endpoint".into()));
        }
        if t1 < t0 {
            return Err(Error::InvalidGrid(format!("t1 = {t1} precedes t0 = {t0}")));
        }
        if steps == 0 {
            return Err(Error::InvalidGrid("zero steps".into()));
        }
        Ok(Self { t0, t1, steps })
    }

    pub fn dt(&self) -> f64 {
        (self.t1 - self.t0) / self.steps as f64
    }

    pub fn node(&self, k: usize) -> f64 {
        if k == self.steps {
            self.t1
        } else {
            self.t0 + k as f64 * self.dt()
        }
    }

    pub fn midpoint(&self, k: usize) -> f64 {
        self.t0 + (k as f64 + 0.5) * self.dt()
    }
}

/// A time-dependent Hermitian generator `H(t)` (rad/ns).
pub trait Hamiltonian<const N: usize>: Sync {
    fn at(&self, t: f64) -> Mat<N>;
}

impl<F, const N: usize> Hamiltonian<N> for F
where
    F: Fn(f64) -> Mat<N> + Sync,
{
    fn at(&self, t: f64) -> Mat<N> {
        self(t)
    }
}

/// Step count such that `max‖H‖_F · Δt ≤ max_phase`, estimated on a
/// coarse probe of the interval.
pub fn auto_steps<const N: usize, H: Hamiltonian<N> + ?Sized>(h: &H, t0: f64, t1: f64, max_phase: f64) -> usize {
    let probes = 512;
    let span = t1 - t0;
    let peak = (0..=probes)
        .map(|k| h.at(t0 + span * k as f64 / probes as f64).norm())
        .fold(0.0, f64::max);
    ((peak * span / max_phase).ceil() as usize).max(1)
}

struct Stepper<const N: usize> {
    last_h: Option<Mat<N>>,
    last_u: Mat<N>,
}

impl<const N: usize> Stepper<N>
where
    Mat<N>: ExpHermitian<N>,
{
    fn new() -> Self {
        Self { last_h: None, last_u: Mat::<N>::identity() }
    }

    fn step(&mut self, h: Mat<N>, dt: f64, t: f64) -> Result<Mat<N>> {
        // piecewise-constant schedules reuse the previous exponential
        if self.last_h.as_ref() == Some(&h) {
            return Ok(self.last_u);
        }
        let defect = hermitian_defect(&h);
        if !(defect <= HERMITIAN_TOL * h.norm().max(1.0)) {
            log::debug!("non-Hermitian generator at t = {t}");
            return Err(Error::NotHermitian { defect });
        }
        self.last_u = h.exp_neg_i(dt);
        self.last_h = Some(h);
        Ok(self.last_u)
    }
}

fn check_unitary<const N: usize>(u: &Mat<N>) -> Result<()> {
    let defect = unitarity_defect(u);
    if defect <= UNITARITY_TOL {
        Ok(())
    } else {
        Err(Error::NotUnitary { defect })
    }
}

/// `U(t1, t0) ≈ Π_k exp(-i H(t_k + Δt/2) Δt)`, later times on the left.
pub fn propagate<const N: usize, H: Hamiltonian<N> + ?Sized>(h: &H, grid: &TimeGrid) -> Result<Mat<N>>
where
    Mat<N>: ExpHermitian<N>,
{
    let dt = grid.dt();
    let mut stepper = Stepper::new();
    let mut u = Mat::<N>::identity();
    for k in 0..grid.steps {
        let t = grid.midpoint(k);
        u = stepper.step(h.at(t), dt, t)? * u;
    }
    check_unitary(&u)?;
    Ok(u)
}

/// Like [`propagate`] but records `(t, U(t, t0))` at `t0`, every `every`
/// steps, and at `t1`.
pub fn propagate_trajectory<const N: usize, H: Hamiltonian<N> + ?Sized>(
    h: &H,
    grid: &TimeGrid,
    every: usize,
) -> Result<Vec<(f64, Mat<N>)>>
where
    Mat<N>: ExpHermitian<N>,
{
    let every = every.max(1);
    let dt = grid.dt();
    let mut stepper = Stepper::new();
    let mut u = Mat::<N>::identity();
    let mut out = Vec::with_capacity(grid.steps / every + 2);
    out.push((grid.t0, u));
    for k in 0..grid.steps {
        let t = grid.midpoint(k);
        u = stepper.step(h.at(t), dt, t)? * u;
        if (k + 1) % every == 0 || k + 1 == grid.steps {
            out.push((grid.node(k + 1), u));
        }
    }
    check_unitary(&u)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, mat_exp, pauli_x, pauli_z, Mat2};

    #[test]
    fn constant_generator_is_exact() {
        let h = pauli_x() * c(0.7, 0.0) + pauli_z() * c(0.3, 0.0);
        let grid = TimeGrid::new(0.0, 5.0, 37).unwrap();
        let u = propagate(&|_t: f64| h, &grid).unwrap();
        assert!((u - mat_exp(&h, 5.0).unwrap()).norm() < 1e-13);
    }

    #[test]
    fn rotating_field_matches_closed_form() {
        // H = (Ω/2)(cos ωt σx + sin ωt σy) is solved exactly in the rotating frame
        let (om, w, t1) = (1.3, 0.8, 4.0);
        let h = move |t: f64| {
            Mat2::new(c(0., 0.), c(0.5 * om, 0.0) * crate::linalg::cis(-w * t), c(0.5 * om, 0.0) * crate::linalg::cis(w * t), c(0., 0.))
        };
        let grid = TimeGrid::new(0.0, t1, 20_000).unwrap();
        let u = propagate(&h, &grid).unwrap();
        let frame = mat_exp(&(pauli_z() * c(0.5 * w, 0.0)), t1).unwrap();
        let hr = pauli_x() * c(0.5 * om, 0.0) - pauli_z() * c(0.5 * w, 0.0);
        let exact = frame * mat_exp(&hr, t1).unwrap();
        assert!((u - exact).norm() < 1e-7);
    }

    #[test]
    fn trajectory_endpoints() {
        let h = |_t: f64| pauli_x();
        let grid = TimeGrid::new(1.0, 2.0, 10).unwrap();
        let traj = propagate_trajectory(&h, &grid, 3).unwrap();
        assert_eq!(traj.first().unwrap().0, 1.0);
        assert_eq!(traj.last().unwrap().0, 2.0);
        assert_eq!(traj.len(), 5);
    }

    #[test]
    fn grid_validation() {
        assert!(TimeGrid::new(1.0, 0.0, 4).is_err());
        assert!(TimeGrid::new(0.0, 1.0, 0).is_err());
    }
}
