use std::fmt::Write as _;

use anyhow::{Context, Result};
use geomspin::gates::{
    calibrate_cz_with, dynamical_not_schedule, invariant_trajectory, local_invariants, synthesize_cz, synthesize_xy_gate, CzCalibration, CzDrive,
    CzGate, CzMilestone, CzScan, GateKind, GateSchedule, InvariantSample, LocalInvariants, XyDesign, XyGate, RESIDUAL_TOL,
};
use geomspin::geometry::ControlSchedule;
use geomspin::linalg::fidelity;
use geomspin::noise::{sweep, CzMilestoneGate, NoiseModel, NoisyGate};
use geomspin::units::{mhz, to_mhz};
use geomspin::Error;
use serde::{Deserialize, Serialize};

use crate::config::{ConfigError, Frame, GateName, RunConfig};
use crate::output::{matrix_json, num, Sink};

/// Calibration finished but missed the residual tolerance.
#[derive(Debug)]
pub struct ResidualRejected(pub f64);

impl std::fmt::Display for ResidualRejected {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "calibration residual {:.3e} exceeds tolerance {RESIDUAL_TOL:e}", self.0)
    }
}

impl std::error::Error for ResidualRejected {}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CalibrationReport {
    pub calibration: CzCalibration,
    pub j_over_h0: f64,
    pub de_adjusted_over_h0: f64,
    pub gate_time_ns: f64,
    pub residual_tolerance: f64,
    pub residual_ok: bool,
}

impl CalibrationReport {
    fn new(cal: CzCalibration) -> Self {
        Self {
            j_over_h0: cal.j / cal.h0,
            de_adjusted_over_h0: cal.de_adjusted / cal.h0,
            gate_time_ns: cal.duration(),
            residual_tolerance: RESIDUAL_TOL,
            residual_ok: cal.residual_ok(),
            calibration: cal,
        }
    }
}

#[derive(Serialize)]
struct SimulateReport {
    gate: &'static str,
    frame: &'static str,
    gate_time_ns: f64,
    fidelity: f64,
    invariants: LocalInvariants,
    target_invariants: LocalInvariants,
    invariant_distance: f64,
    unitary: Vec<Vec<[f64; 2]>>,
    target: Vec<Vec<[f64; 2]>>,
}

pub struct Ctx {
    pub cfg: RunConfig,
    pub sink: Sink,
}

enum Built {
    Cz(CzGate, CzMilestone),
    Xy(XyGate),
}

impl Ctx {
    pub fn new(cfg: RunConfig) -> Result<Self> {
        let sink = Sink::new(&cfg.output.directory)?;
        Ok(Self { cfg, sink })
    }

    fn h0(&self) -> f64 {
        mhz(self.cfg.device.h0_mhz)
    }

    fn run_calibration(&self) -> Result<CzCalibration, Error> {
        let h0 = self.h0();
        let g = &self.cfg.gate;
        let scan = CzScan { j_min: 0.0, j_max: g.j_scan_max_over_h0 * h0, points: g.j_scan_points };
        calibrate_cz_with(h0, self.cfg.device.dez_over_h0 * h0, g.chi1, g.xi1, &scan)
    }

    fn calibration(&self) -> Result<CzCalibration> {
        match &self.cfg.gate.calibration {
            Some(path) => {
                let text = std::fs::read_to_string(path).with_context(|| format!("cannot read calibration {}", path.display()))?;
                let report: CalibrationReport =
                    serde_json::from_str(&text).map_err(|e| ConfigError(format!("{}: not a calibration report ({e})", path.display())))?;
                Ok(report.calibration)
            }
            None => {
                let cal = self.run_calibration()?;
                Ok(cal)
            }
        }
    }

    fn build(&self) -> Result<Built> {
        let cfg = &self.cfg;
        let milestone = match cfg.gate.name {
            GateName::Cz => CzMilestone::Cz,
            GateName::CzPrime => CzMilestone::CzPrime,
            GateName::SqrtCnot => CzMilestone::SqrtCnot,
            GateName::Iswap | GateName::Swap => {
                let design = XyDesign { omega_max: mhz(cfg.gate.omega_max_mhz), eta: cfg.eta(), steps_per_ns: cfg.sim.steps_per_ns, ..Default::default() };
                return Ok(Built::Xy(synthesize_xy_gate(&design)?));
            }
        };
        let drive = CzDrive {
            by_r1: cfg.device.by_r1_over_h0 * self.h0(),
            include_right_drive: cfg.device.include_right_drive,
            steps_per_ns: cfg.sim.steps_per_ns,
        };
        Ok(Built::Cz(synthesize_cz(&self.calibration()?, drive)?, milestone))
    }

    fn schedule(&self, built: &Built) -> GateSchedule {
        match built {
            Built::Cz(g, m) if self.cfg.sim.frame == Frame::Lab => {
                debug_assert_eq!(*m, CzMilestone::Cz);
                g.lab_schedule(mhz(self.cfg.sim.lab_ez_mhz), self.cfg.sim.lab_steps_per_ns)
            }
            Built::Cz(g, m) => g.milestone(*m, 0.0),
            Built::Xy(g) => g.schedule(0.0),
        }
    }

    fn class(&self) -> GateKind {
        match self.cfg.gate.name {
            GateName::Cz | GateName::CzPrime => GateKind::Cz,
            GateName::SqrtCnot => GateKind::SqrtCnot,
            GateName::Iswap => GateKind::Iswap,
            GateName::Swap => GateKind::Swap,
        }
    }

    fn noise_model(&self) -> Result<NoiseModel> {
        Ok(NoiseModel::new(0.0, self.cfg.noise.samples, self.cfg.noise.seed)?)
    }

    fn sigma_grid(&self) -> Vec<f64> {
        self.cfg.noise.sigma_grid.iter().map(|s| s * self.h0()).collect()
    }

    pub fn calibrate(&self) -> Result<()> {
        let cal = match self.run_calibration() {
            Ok(cal) => cal,
            Err(Error::Calibration { reason, curve }) => {
                let mut csv = String::from("j_over_h0,residual\n");
                for (j, r) in &curve {
                    writeln!(csv, "{},{}", num(j / self.h0()), num(*r)).unwrap();
                }
                self.sink.write("residual_curve.csv", csv.as_bytes())?;
                return Err(Error::Calibration { reason, curve }.into());
            }
            Err(e) => return Err(e.into()),
        };
        let report = CalibrationReport::new(cal);
        let c = &report.calibration;
        println!("J/h0           = {:.6}", report.j_over_h0);
        println!("dE'/h0         = {:.6} (guess {:.4})", report.de_adjusted_over_h0, c.de_guess / c.h0);
        println!("tau1, tau2     = {:.6} ns, {:.6} ns", c.tau1, c.tau2);
        println!("gate time      = {:.6} ns", report.gate_time_ns);
        println!("C2 tau         = {} pi/2", c.n_odd);
        println!("residual       = {:.6e} (tolerance {RESIDUAL_TOL:e})", c.residual);
        println!("block fidelity = {:.6}", c.block_fidelity);
        if self.cfg.output.json {
            self.sink.json("calibration.json", &report)?;
        }
        if !report.residual_ok {
            return Err(ResidualRejected(c.residual).into());
        }
        Ok(())
    }

    pub fn simulate(&self) -> Result<()> {
        let built = self.build()?;
        let u = self.schedule(&built).unitary()?;
        let class = self.class();
        let target = class.matrix().expect("two-qubit target");
        let inv = local_invariants(&u)?;
        let target_inv = local_invariants(&target)?;
        let time = gate_time(&built);
        let report = SimulateReport {
            gate: self.cfg.gate.name.as_str(),
            frame: if self.cfg.sim.frame == Frame::Lab { "lab" } else { "rot" },
            gate_time_ns: time,
            fidelity: fidelity(&u, &target),
            invariants: inv,
            target_invariants: target_inv,
            invariant_distance: inv.distance(&target_inv),
            unitary: matrix_json(&u),
            target: matrix_json(&target),
        };
        println!("gate           = {} ({} frame)", report.gate, report.frame);
        println!("gate time      = {:.6} ns", time);
        println!("fidelity       = {:.8} vs {}", report.fidelity, class.name());
        println!("invariants     = ({:.6}, {:.6}, {:.6})", inv.g1, inv.g2, inv.g3);
        if self.cfg.output.json {
            self.sink.json("simulate.json", &report)?;
        }
        Ok(())
    }

    pub fn invariants(&self) -> Result<()> {
        let built = self.build()?;
        let traj = invariant_trajectory(&self.schedule(&built), self.cfg.sim.trajectory_every)?;
        if self.cfg.output.csv {
            let mut csv = String::from("t_ns,g1,g2,g3\n");
            for s in &traj {
                let i = s.invariants;
                writeln!(csv, "{},{},{},{}", num(s.t), num(i.g1), num(i.g2), num(i.g3)).unwrap();
            }
            self.sink.write("invariants.csv", csv.as_bytes())?;
        }
        let marks: Vec<f64> = match &built {
            Built::Cz(g, m) => CzMilestone::ALL.iter().map(|k| g.milestone_time(*k)).filter(|t| *t <= g.milestone_time(*m) + 1e-9).collect(),
            Built::Xy(g) => vec![g.tau],
        };
        for t in marks {
            let s = nearest(&traj, t);
            let i = s.invariants;
            println!("t = {:>8.4} ns: G1 = {:.6}, G2 = {:.6}, G3 = {:.6}", s.t, i.g1, i.g2, i.g3);
        }
        Ok(())
    }

    pub fn noise_sweep(&self) -> Result<()> {
        let built = self.build()?;
        if self.cfg.sim.frame == Frame::Lab {
            log::warn!("noise sweeps run in the rotating frame");
        }
        let gate: Box<dyn NoisyGate> = match built {
            Built::Cz(g, m) => Box::new(CzMilestoneGate::new(g, m)?),
            Built::Xy(g) => Box::new(g),
        };
        let res = sweep(&[gate.as_ref()], &self.sigma_grid(), &self.noise_model()?)?;
        for r in &res.rows {
            println!(
                "{} sigma_J = {:.4} h0 ({:.4} MHz): fidelity {:.5}% ± {:.5}",
                r.gate,
                r.sigma_j / self.h0(),
                to_mhz(r.sigma_j),
                100.0 * (1.0 - r.mean_infidelity),
                100.0 * r.stderr
            );
        }
        if self.cfg.output.csv {
            self.sink.write("noise_sweep.csv", res.to_csv(self.h0()).as_bytes())?;
        }
        Ok(())
    }

    pub fn compare(&self) -> Result<()> {
        if !self.cfg.gate.name.is_exchange() {
            return Err(ConfigError(format!("compare needs an exchange gate (iswap or swap), not {}", self.cfg.gate.name.as_str())).into());
        }
        let Built::Xy(geo) = self.build()? else { unreachable!("exchange gate") };
        let dynm = dynamical_not_schedule(&geo)?;
        let grid = self.sigma_grid();
        let res = sweep(&[&geo as &dyn NoisyGate, &dynm], &grid, &self.noise_model()?)?;
        let (g_rows, d_rows) = res.rows.split_at(grid.len());
        let mut csv = String::from("sigma_j_over_h0,geometric_mean_infidelity,geometric_stderr,dynamical_mean_infidelity,dynamical_stderr,samples,seed\n");
        for (g, d) in g_rows.iter().zip(d_rows) {
            writeln!(
                csv,
                "{},{},{},{},{},{},{}",
                num(g.sigma_j / self.h0()),
                num(g.mean_infidelity),
                num(g.stderr),
                num(d.mean_infidelity),
                num(d.stderr),
                g.samples,
                g.seed
            )
            .unwrap();
            println!(
                "sigma_J = {:.3} h0: geometric {:.4e} ± {:.1e}, dynamical {:.4e} ± {:.1e}",
                g.sigma_j / self.h0(),
                g.mean_infidelity,
                g.stderr,
                d.mean_infidelity,
                d.stderr
            );
        }
        if self.cfg.output.csv {
            self.sink.write("compare.csv", csv.as_bytes())?;
        }
        Ok(())
    }

    pub fn pulses(&self) -> Result<()> {
        let built = self.build()?;
        let controls: &ControlSchedule = match &built {
            Built::Cz(g, _) => &g.controls,
            Built::Xy(g) => &g.controls,
        };
        let n = self.cfg.sim.pulse_samples;
        let peak = controls.tabulate(n).iter().map(|r| r.1.abs()).fold(0.0, f64::max);
        println!("duration       = {:.6} ns", controls.duration);
        println!("peak amplitude = {:.6} MHz", to_mhz(peak));
        if self.cfg.output.csv {
            self.sink.write("pulses.csv", controls.to_csv(n).as_bytes())?;
        }
        Ok(())
    }
}

fn gate_time(built: &Built) -> f64 {
    match built {
        Built::Cz(g, m) => g.milestone_time(*m),
        Built::Xy(g) => g.tau,
    }
}

fn nearest(traj: &[InvariantSample], t: f64) -> InvariantSample {
    *traj.iter().min_by(|a, b| (a.t - t).abs().total_cmp(&(b.t - t).abs())).expect("nonempty trajectory")
}
