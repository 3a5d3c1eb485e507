//! Quasistatic exchange noise: `J → J + δJ` with `δJ ~ N(0, σ_J²)` held
//! fixed during one gate.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::gates::{CzGate, CzMilestone, GateSchedule, XyGate};
use crate::linalg::{fidelity, Mat4};
use crate::units::to_mhz;
use crate::{Error, Result};

pub const DEFAULT_SAMPLES: usize = 500;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NoiseModel {
    pub sigma_j: f64,
    pub samples: usize,
    pub seed: u64,
}

impl NoiseModel {
    pub fn new(sigma_j: f64, samples: usize, seed: u64) -> Result<Self> {
        if !(sigma_j >= 0.0 && sigma_j.is_finite()) {
            return Err(Error::Usage(format!("noise strength {sigma_j} must be finite and nonnegative")));
        }
        if samples == 0 {
            return Err(Error::Usage("at least one sample is required".into()));
        }
        Ok(Self { sigma_j, samples, seed })
    }

    pub fn with_sigma(&self, sigma_j: f64) -> Result<Self> {
        Self::new(sigma_j, self.samples, self.seed)
    }
}

/// Draw `k` of the standard-normal sequence for `seed`, scaled by `sigma`.
/// A pure function of its arguments.
pub fn draw(seed: u64, k: u64, sigma: f64) -> f64 {
    if sigma == 0.0 {
        return 0.0;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k);
    let z: f64 = rng.sample(StandardNormal);
    sigma * z
}

pub fn sample_delta_j(m: &NoiseModel) -> Vec<f64> {
    (0..m.samples as u64).map(|k| draw(m.seed, k, m.sigma_j)).collect()
}

/// A gate whose schedule can be rebuilt for any exchange offset.
pub trait NoisyGate: Sync {
    fn name(&self) -> String;
    fn schedule(&self, delta_j: f64) -> Result<GateSchedule>;
    /// Reference gate in tensor-product order.
    fn target(&self) -> Mat4;
}

impl NoisyGate for XyGate {
    fn name(&self) -> String {
        XyGate::name(self).to_string()
    }

    fn schedule(&self, delta_j: f64) -> Result<GateSchedule> {
        Ok(XyGate::schedule(self, delta_j))
    }

    fn target(&self) -> Mat4 {
        self.target
    }
}

/// The CZ pulse stopped at one of its milestones.
///
/// The `√CNOT` point is benchmarked against the noiseless operator at the
/// same time; the CZ-class points against `diag(1, 1, 1, −1)`.
#[derive(Clone, Debug)]
pub struct CzMilestoneGate {
    pub gate: CzGate,
    pub milestone: CzMilestone,
    pub target: Mat4,
}

impl CzMilestoneGate {
    pub fn new(gate: CzGate, milestone: CzMilestone) -> Result<Self> {
        let target = match milestone {
            CzMilestone::SqrtCnot => gate.milestone(milestone, 0.0).unitary()?,
            _ => gate.target(),
        };
        Ok(Self { gate, milestone, target })
    }
}

impl NoisyGate for CzMilestoneGate {
    fn name(&self) -> String {
        self.milestone.name().to_string()
    }

    fn schedule(&self, delta_j: f64) -> Result<GateSchedule> {
        Ok(self.gate.milestone(self.milestone, delta_j))
    }

    fn target(&self) -> Mat4 {
        self.target
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct McEstimate {
    pub mean: f64,
    /// Sample standard deviation over `√samples`.
    pub stderr: f64,
    pub samples: usize,
}

fn summarise(values: &[f64]) -> McEstimate {
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    let stderr = if n > 1 {
        let var = values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        (var / n as f64).sqrt()
    } else {
        0.0
    };
    McEstimate { mean, stderr, samples: n }
}

/// Mean of `1 − F(U(δJ), target)` over the noise model.
///
/// Samples run in parallel; the reduction is in sample order, so the result
/// is bit-identical for any number of threads.
pub fn mc_infidelity<F>(factory: F, target: &Mat4, m: &NoiseModel) -> Result<McEstimate>
where
    F: Fn(f64) -> Result<GateSchedule> + Sync,
{
    let values = (0..m.samples as u64)
        .into_par_iter()
        .map(|k| {
            let delta_j = draw(m.seed, k, m.sigma_j);
            let u = factory(delta_j)
                .and_then(|s| s.unitary())
                .map_err(|e| Error::Sample { delta_j, source: Box::new(e) })?;
            Ok(1.0 - fidelity(&u, target))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(summarise(&values))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub gate: String,
    pub sigma_j: f64,
    pub mean_infidelity: f64,
    pub stderr: f64,
    pub samples: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

pub const SWEEP_HEADER: &str = "gate,sigma_j_over_h0,sigma_j_mhz,mean_infidelity,stderr,samples,seed";

impl SweepResult {
    pub fn get(&self, gate: &str, sigma_j: f64) -> Option<&SweepRow> {
        self.rows.iter().find(|r| r.gate == gate && r.sigma_j == sigma_j)
    }

    /// CSV with `σ_J` reported relative to `h0` and in MHz.
    pub fn to_csv(&self, h0: f64) -> String {
        let mut s = String::from(SWEEP_HEADER);
        s.push('\n');
        for r in &self.rows {
            s.push_str(&format!(
                "{},{:.16e},{:.16e},{:.16e},{:.16e},{},{}\n",
                r.gate,
                r.sigma_j / h0,
                to_mhz(r.sigma_j),
                r.mean_infidelity,
                r.stderr,
                r.samples,
                r.seed
            ));
        }
        s
    }
}

/// One row per `(gate, σ_J)`; the sample count and seed come from `m`.
pub fn sweep(gates: &[&dyn NoisyGate], grid: &[f64], m: &NoiseModel) -> Result<SweepResult> {
    if grid.is_empty() {
        return Err(Error::Usage("noise grid is empty".into()));
    }
    let mut rows = Vec::with_capacity(gates.len() * grid.len());
    for gate in gates {
        let target = gate.target();
        for &sigma in grid {
            let model = m.with_sigma(sigma)?;
            let est = mc_infidelity(|d| gate.schedule(d), &target, &model)?;
            log::info!("{} sigma = {sigma:.4e}: infidelity {:.4e} ± {:.1e}", gate.name(), est.mean, est.stderr);
            rows.push(SweepRow { gate: gate.name(), sigma_j: sigma, mean_infidelity: est.mean, stderr: est.stderr, samples: est.samples, seed: m.seed });
        }
    }
    Ok(SweepResult { rows })
}
