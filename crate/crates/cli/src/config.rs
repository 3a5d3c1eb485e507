use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use ini::Ini;

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn bad(msg: impl Into<String>) -> ConfigError {
    ConfigError(msg.into())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GateName {
    Cz,
    CzPrime,
    SqrtCnot,
    Iswap,
    Swap,
}

impl GateName {
    pub const ALL: [GateName; 5] = [GateName::Cz, GateName::CzPrime, GateName::SqrtCnot, GateName::Iswap, GateName::Swap];

    pub fn as_str(&self) -> &'static str {
        match self {
            GateName::Cz => "cz",
            GateName::CzPrime => "cz_prime",
            GateName::SqrtCnot => "sqrt_cnot",
            GateName::Iswap => "iswap",
            GateName::Swap => "swap",
        }
    }

    pub fn is_exchange(&self) -> bool {
        matches!(self, GateName::Iswap | GateName::Swap)
    }
}

impl FromStr for GateName {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        GateName::ALL.into_iter().find(|g| g.as_str() == s).ok_or_else(|| {
            let names: Vec<_> = GateName::ALL.iter().map(|g| g.as_str()).collect();
            bad(format!("unknown gate '{s}' (expected one of {})", names.join(", ")))
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Frame {
    Rot,
    Lab,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Device {
    pub h0_mhz: f64,
    pub dez_over_h0: f64,
    pub by_r1_over_h0: f64,
    pub include_right_drive: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Gate {
    pub name: GateName,
    pub chi1: f64,
    pub xi1: f64,
    pub omega_max_mhz: f64,
    /// `None` picks the value implied by `name`.
    pub eta_target: Option<f64>,
    pub j_scan_max_over_h0: f64,
    pub j_scan_points: usize,
    /// Previously written calibration report to reuse.
    pub calibration: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sim {
    pub steps_per_ns: f64,
    pub frame: Frame,
    pub lab_ez_mhz: f64,
    pub lab_steps_per_ns: f64,
    pub trajectory_every: usize,
    pub pulse_samples: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Noise {
    /// `σ_J` values in units of `h0`.
    pub sigma_grid: Vec<f64>,
    pub samples: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Output {
    pub directory: PathBuf,
    pub csv: bool,
    pub json: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub device: Device,
    pub gate: Gate,
    pub sim: Sim,
    pub noise: Noise,
    pub output: Output,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            device: Device { h0_mhz: 2.0, dez_over_h0: 145.15, by_r1_over_h0: 2.0, include_right_drive: true },
            gate: Gate {
                name: GateName::Cz,
                chi1: PI / 25.0,
                xi1: 1.5 * PI,
                omega_max_mhz: 50.0,
                eta_target: None,
                j_scan_max_over_h0: 100.0,
                j_scan_points: 4001,
                calibration: None,
            },
            sim: Sim { steps_per_ns: 100.0, frame: Frame::Rot, lab_ez_mhz: 1000.0, lab_steps_per_ns: 3000.0, trajectory_every: 1, pulse_samples: 200 },
            noise: Noise { sigma_grid: vec![0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5], samples: 500, seed: 20_240_601 },
            output: Output { directory: PathBuf::from("out"), csv: true, json: true },
        }
    }
}

fn parse<T: FromStr>(section: &str, key: &str, value: &str) -> Result<T, ConfigError> {
    value.trim().parse().map_err(|_| bad(format!("{section}.{key}: cannot parse '{value}'")))
}

fn parse_bool(section: &str, key: &str, value: &str) -> Result<bool, ConfigError> {
    match value.trim().to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(bad(format!("{section}.{key}: expected a boolean, got '{value}'"))),
    }
}

fn parse_list(section: &str, key: &str, value: &str) -> Result<Vec<f64>, ConfigError> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty()).map(|s| parse(section, key, s)).collect()
}

impl RunConfig {
    /// Defaults, then the file (if any), then the overrides in order.
    pub fn load(path: Option<&Path>, overrides: &[(String, String, String)]) -> Result<Self, ConfigError> {
        let mut cfg = RunConfig::default();
        if let Some(path) = path {
            let ini = Ini::load_from_file(path).map_err(|e| bad(format!("{}: {e}", path.display())))?;
            for (section, props) in ini.iter() {
                let Some(section) = section else {
                    if let Some((key, _)) = props.iter().next() {
                        return Err(bad(format!("{}: key '{key}' outside any section", path.display())));
                    }
                    continue;
                };
                for (key, value) in props.iter() {
                    cfg.set(section, key, value)?;
                }
            }
        }
        for (section, key, value) in overrides {
            cfg.set(section, key, value)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn set(&mut self, section: &str, key: &str, value: &str) -> Result<(), ConfigError> {
        let v = value.trim();
        match (section, key) {
            ("device", "h0_mhz") => self.device.h0_mhz = parse(section, key, v)?,
            ("device", "dEz_over_h0") => self.device.dez_over_h0 = parse(section, key, v)?,
            ("device", "byR1_over_h0") => self.device.by_r1_over_h0 = parse(section, key, v)?,
            ("device", "include_right_drive") => self.device.include_right_drive = parse_bool(section, key, v)?,
            ("gate", "name") => self.gate.name = v.parse()?,
            ("gate", "chi1") => self.gate.chi1 = parse(section, key, v)?,
            ("gate", "xi1") => self.gate.xi1 = parse(section, key, v)?,
            ("gate", "omega_max_mhz") => self.gate.omega_max_mhz = parse(section, key, v)?,
            ("gate", "eta_target") => self.gate.eta_target = if v == "auto" { None } else { Some(parse(section, key, v)?) },
            ("gate", "j_scan_max_over_h0") => self.gate.j_scan_max_over_h0 = parse(section, key, v)?,
            ("gate", "j_scan_points") => self.gate.j_scan_points = parse(section, key, v)?,
            ("gate", "calibration") => self.gate.calibration = if v.is_empty() { None } else { Some(PathBuf::from(v)) },
            ("sim", "steps_per_ns") => self.sim.steps_per_ns = parse(section, key, v)?,
            ("sim", "frame") => {
                self.sim.frame = match v {
                    "rot" => Frame::Rot,
                    "lab" => Frame::Lab,
                    _ => return Err(bad(format!("sim.frame: expected 'rot' or 'lab', got '{v}'"))),
                }
            }
            ("sim", "lab_ez_mhz") => self.sim.lab_ez_mhz = parse(section, key, v)?,
            ("sim", "lab_steps_per_ns") => self.sim.lab_steps_per_ns = parse(section, key, v)?,
            ("sim", "trajectory_every") => self.sim.trajectory_every = parse(section, key, v)?,
            ("sim", "pulse_samples") => self.sim.pulse_samples = parse(section, key, v)?,
            ("noise", "sigma_grid") => self.noise.sigma_grid = parse_list(section, key, v)?,
            ("noise", "samples") => self.noise.samples = parse(section, key, v)?,
            ("noise", "seed") => self.noise.seed = parse(section, key, v)?,
            ("output", "directory") => self.output.directory = PathBuf::from(v),
            ("output", "formats") => {
                let (mut csv, mut json) = (false, false);
                for f in v.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                    match f {
                        "csv" => csv = true,
                        "json" => json = true,
                        _ => return Err(bad(format!("output.formats: unknown format '{f}'"))),
                    }
                }
                self.output.csv = csv;
                self.output.json = json;
            }
            _ => return Err(bad(format!("unknown key '{section}.{key}'"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let positive = [
            ("device.h0_mhz", self.device.h0_mhz),
            ("device.dEz_over_h0", self.device.dez_over_h0),
            ("gate.omega_max_mhz", self.gate.omega_max_mhz),
            ("gate.j_scan_max_over_h0", self.gate.j_scan_max_over_h0),
            ("sim.steps_per_ns", self.sim.steps_per_ns),
            ("sim.lab_ez_mhz", self.sim.lab_ez_mhz),
            ("sim.lab_steps_per_ns", self.sim.lab_steps_per_ns),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(bad(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if !(self.device.by_r1_over_h0 >= 0.0 && self.device.by_r1_over_h0.is_finite()) {
            return Err(bad("device.byR1_over_h0 must be non-negative"));
        }
        if !(self.gate.chi1 > 0.0 && self.gate.chi1 < PI) || !self.gate.xi1.is_finite() {
            return Err(bad("gate.chi1 must lie in (0, π) and gate.xi1 must be finite"));
        }
        if self.gate.j_scan_points < 3 {
            return Err(bad("gate.j_scan_points must be at least 3"));
        }
        if self.sim.trajectory_every == 0 || self.sim.pulse_samples < 2 {
            return Err(bad("sim.trajectory_every must be ≥ 1 and sim.pulse_samples ≥ 2"));
        }
        if self.noise.sigma_grid.is_empty() || self.noise.sigma_grid.iter().any(|s| !(*s >= 0.0 && s.is_finite())) {
            return Err(bad("noise.sigma_grid must be a nonempty list of non-negative values"));
        }
        if self.noise.samples < 2 {
            return Err(bad("noise.samples must be at least 2"));
        }
        if self.sim.frame == Frame::Lab && self.gate.name != GateName::Cz {
            return Err(bad("sim.frame = lab is only available for gate.name = cz"));
        }
        if !self.output.csv && !self.output.json {
            return Err(bad("output.formats must name at least one of csv, json"));
        }
        Ok(())
    }

    /// `S₃` phase for the exchange gates.
    pub fn eta(&self) -> f64 {
        self.gate.eta_target.unwrap_or(match self.gate.name {
            GateName::Swap => 1.5 * PI,
            _ => 0.0,
        })
    }
}

/// Splits `--section.key=value` (or `--section.key value`) out of the
/// argument list.
pub fn extract_overrides(args: Vec<String>) -> Result<(Vec<String>, Vec<(String, String, String)>), ConfigError> {
    let mut rest = Vec::new();
    let mut overrides = Vec::new();
    let mut it = args.into_iter();
    while let Some(arg) = it.next() {
        let Some(body) = arg.strip_prefix("--") else {
            rest.push(arg);
            continue;
        };
        let (name, value) = match body.split_once('=') {
            Some((n, v)) => (n.to_string(), Some(v.to_string())),
            None => (body.to_string(), None),
        };
        let Some((section, key)) = name.split_once('.') else {
            rest.push(arg);
            continue;
        };
        let value = match value {
            Some(v) => v,
            None => it.next().ok_or_else(|| bad(format!("--{name} needs a value")))?,
        };
        overrides.push((section.to_string(), key.to_string(), value));
    }
    Ok((rest, overrides))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(s: &str) -> Vec<String> {
        s.split_whitespace().map(String::from).collect()
    }

    #[test]
    fn overrides_are_split_out() {
        let (rest, ov) = extract_overrides(args("geomspin --config a.ini calibrate --gate.name=iswap --noise.seed 7")).unwrap();
        assert_eq!(rest, args("geomspin --config a.ini calibrate"));
        assert_eq!(ov, vec![("gate".into(), "name".into(), "iswap".into()), ("noise".into(), "seed".into(), "7".into())]);
    }

    #[test]
    fn unknown_keys_rejected() {
        let mut cfg = RunConfig::default();
        assert!(cfg.set("device", "h0_ghz", "2").is_err());
        assert!(cfg.set("plot", "dpi", "300").is_err());
        assert!(cfg.set("device", "h0_mhz", "3").is_ok());
    }

    #[test]
    fn file_then_overrides() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.ini");
        std::fs::write(&path, "[device]\nh0_mhz = 3\n[noise]\nsigma_grid = 0, 0.1\nsamples = 20\n").unwrap();
        let cfg = RunConfig::load(Some(&path), &[("noise".into(), "samples".into(), "40".into())]).unwrap();
        assert_eq!(cfg.device.h0_mhz, 3.0);
        assert_eq!(cfg.noise.sigma_grid, vec![0.0, 0.1]);
        assert_eq!(cfg.noise.samples, 40);
    }

    #[test]
    fn validation() {
        let bad_cfgs: [&[(&str, &str, &str)]; 4] = [
            &[("device", "h0_mhz", "-1")],
            &[("noise", "sigma_grid", "")],
            &[("output", "formats", "png")],
            &[("gate", "name", "iswap"), ("sim", "frame", "lab")],
        ];
        for ov in bad_cfgs {
            let ov: Vec<_> = ov.iter().map(|(s, k, v)| (s.to_string(), k.to_string(), v.to_string())).collect();
            assert!(RunConfig::load(None, &ov).is_err(), "{ov:?} accepted");
        }
    }

    #[test]
    fn shipped_config_equals_defaults() {
        let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/default.ini");
        assert_eq!(RunConfig::load(Some(&path), &[]).unwrap(), RunConfig::default());
    }

    #[test]
    fn eta_follows_gate_name() {
        let mut cfg = RunConfig::default();
        cfg.set("gate", "name", "swap").unwrap();
        assert_eq!(cfg.eta(), 1.5 * PI);
        cfg.set("gate", "eta_target", "0").unwrap();
        assert_eq!(cfg.eta(), 0.0);
    }
}
