//! Bloch-sphere paths of dressed states and the pulses that realise them.
//!
//! A two-level state is parametrised as
//! `cos(χ/2)|0⟩ + sin(χ/2)e^{iξ}|1⟩` (polar angle `χ`, azimuth `ξ`). A
//! transverse drive of amplitude `A` and azimuth `a` moves it according to
//! `χ̇ = A sin(a − ξ)`, `ξ̇ = −A cot χ cos(a − ξ)`.

mod bloch;
mod inverse;
mod paths;
mod phase;

use std::fmt;
use std::sync::Arc;

use nalgebra::Vector2;

use crate::linalg::{c, cis, Mat2, C64};

pub use bloch::forward_angles;
pub use inverse::{invert_controls_s1, invert_controls_s3, S3Synthesis};
pub use paths::{cz_path, xy_loop};
pub use phase::{aa_phase, phase_decompose, PhaseDecomposition};
pub(crate) use phase::integrate;

pub type V2 = Vector2<C64>;
pub type Scalar = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Default number of samples per smooth segment.
pub const SAMPLES_PER_SEGMENT: usize = 2000;

/// A scalar function of time together with its derivative.
#[derive(Clone)]
pub struct Curve {
    value: Scalar,
    rate: Scalar,
}

impl fmt::Debug for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Curve(..)")
    }
}

impl Curve {
    pub fn new(value: impl Fn(f64) -> f64 + Send + Sync + 'static, rate: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self { value: Arc::new(value), rate: Arc::new(rate) }
    }

    pub fn constant(v: f64) -> Self {
        Self::new(move |_| v, |_| 0.0)
    }

    /// Piecewise-linear interpolation through `(ts[k], vs[k])`; `ts` must be
    /// increasing. Values are held constant outside the sampled range.
    pub fn sampled(ts: Vec<f64>, vs: Vec<f64>) -> Self {
        assert_eq!(ts.len(), vs.len());
        assert!(ts.len() >= 2, "need at least two samples");
        let ts = Arc::new(ts);
        let vs = Arc::new(vs);
        let locate = {
            let ts = ts.clone();
            move |t: f64| ts.partition_point(|&x| x <= t).clamp(1, ts.len() - 1) - 1
        };
        let (t1, v1, loc1) = (ts.clone(), vs.clone(), locate.clone());
        let value = move |t: f64| {
            let k = loc1(t);
            let s = ((t - t1[k]) / (t1[k + 1] - t1[k])).clamp(0.0, 1.0);
            v1[k] + s * (v1[k + 1] - v1[k])
        };
        let rate = move |t: f64| {
            let k = locate(t);
            (vs[k + 1] - vs[k]) / (ts[k + 1] - ts[k])
        };
        Self::new(value, rate)
    }

    pub fn value(&self, t: f64) -> f64 {
        (self.value)(t)
    }

    pub fn rate(&self, t: f64) -> f64 {
        (self.rate)(t)
    }

    /// `c(t/k)`: the same curve traversed `k` times slower.
    pub fn time_scaled(&self, k: f64) -> Self {
        let (v, r) = (self.value.clone(), self.rate.clone());
        Self::new(move |t| v(t / k), move |t| r(t / k) / k)
    }
}

/// An instantaneous azimuth jump at a pole, where it costs no control.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PoleJump {
    pub at: f64,
    pub delta_xi: f64,
}

#[derive(Clone, Debug)]
pub struct PathSpec {
    pub chi: Curve,
    /// Azimuth including the effect of all jumps up to `t`.
    pub xi: Curve,
    /// Auxiliary phase of the dressed state; zero when absent.
    pub f: Option<Curve>,
    pub duration: f64,
    /// Interior segment boundaries, increasing.
    pub boundaries: Vec<f64>,
    pub jumps: Vec<PoleJump>,
}

impl PathSpec {
    /// `(start, end)` of every smooth piece.
    pub fn segments(&self) -> Vec<(f64, f64)> {
        let mut cuts: Vec<f64> = self.boundaries.iter().copied().chain(self.jumps.iter().map(|j| j.at)).collect();
        cuts.retain(|&t| t > 0.0 && t < self.duration);
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let mut out = Vec::with_capacity(cuts.len() + 1);
        let mut start = 0.0;
        for t in cuts {
            out.push((start, t));
            start = t;
        }
        out.push((start, self.duration));
        out
    }

    pub fn time_scaled(&self, k: f64) -> Self {
        Self {
            chi: self.chi.time_scaled(k),
            xi: self.xi.time_scaled(k),
            f: self.f.as_ref().map(|f| f.time_scaled(k)),
            duration: self.duration * k,
            boundaries: self.boundaries.iter().map(|t| t * k).collect(),
            jumps: self.jumps.iter().map(|j| PoleJump { at: j.at * k, delta_xi: j.delta_xi }).collect(),
        }
    }

    pub fn f_value(&self, t: f64) -> f64 {
        self.f.as_ref().map_or(0.0, |f| f.value(t))
    }

    /// `cos(χ/2)|0⟩ + sin(χ/2)e^{iξ}|1⟩`.
    pub fn bloch_state(&self, t: f64) -> V2 {
        let (chi, xi) = (self.chi.value(t), self.xi.value(t));
        V2::new(c((chi / 2.0).cos(), 0.0), cis(xi) * (chi / 2.0).sin())
    }

    /// Orthonormal dressed pair
    /// `|Φ⟩ = e^{−if/2}(cos(χ/2)e^{−iξ/2}, sin(χ/2)e^{iξ/2})` and
    /// `|Φ⊥⟩ = e^{if/2}(−sin(χ/2)e^{−iξ/2}, cos(χ/2)e^{iξ/2})`.
    pub fn dressed_pair(&self, t: f64) -> (V2, V2) {
        let (chi, xi, f) = (self.chi.value(t), self.xi.value(t), self.f_value(t));
        let (s, co) = (chi / 2.0).sin_cos();
        let (a, b) = (cis(-xi / 2.0), cis(xi / 2.0));
        let phi = V2::new(a * co, b * s) * cis(-f / 2.0);
        let perp = V2::new(a * (-s), b * co) * cis(f / 2.0);
        (phi, perp)
    }

    /// Interior sample times, `n` per smooth piece, avoiding piece endpoints.
    pub fn sample_times(&self, n: usize) -> Vec<f64> {
        let mut out = Vec::new();
        for (a, b) in self.segments() {
            out.extend((0..n).map(|k| a + (b - a) * (k as f64 + 0.5) / n as f64));
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Frame {
    /// Magnetic drive in the `S₁ = {↑↑, ~↓↑}` subspace:
    /// `H = (h/2)(cos φ σx + sin φ σy)`.
    S1,
    /// Exchange drive in `S₃ = {↓↑, ↑↓}`:
    /// `H = [[0, (Ω/2)e^{iφ'}], [(Ω/2)e^{−iφ'}, 0]]`.
    S3,
}

#[derive(Clone)]
pub struct ControlSchedule {
    pub amplitude: Scalar,
    pub phase: Scalar,
    pub duration: f64,
    pub frame: Frame,
    /// Times where the controls may be discontinuous.
    pub boundaries: Vec<f64>,
}

impl fmt::Debug for ControlSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ControlSchedule")
            .field("duration", &self.duration)
            .field("frame", &self.frame)
            .field("boundaries", &self.boundaries)
            .finish_non_exhaustive()
    }
}

impl ControlSchedule {
    pub fn amplitude(&self, t: f64) -> f64 {
        (self.amplitude)(t)
    }

    pub fn phase(&self, t: f64) -> f64 {
        (self.phase)(t)
    }

    /// Azimuth of the effective field on the Bloch sphere.
    pub fn azimuth(&self, t: f64) -> f64 {
        match self.frame {
            Frame::S1 => self.phase(t),
            Frame::S3 => -self.phase(t),
        }
    }

    /// Two-level generator `(A/2)(cos a σx + sin a σy)` with `a` the azimuth.
    pub fn hamiltonian(&self, t: f64) -> Mat2 {
        let off = cis(-self.azimuth(t)) * (0.5 * self.amplitude(t));
        Mat2::new(c(0., 0.), off, off.conj(), c(0., 0.))
    }

    pub fn segments(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        let mut start = 0.0;
        for &b in self.boundaries.iter().filter(|&&b| b > 0.0 && b < self.duration) {
            out.push((start, b));
            start = b;
        }
        out.push((start, self.duration));
        out
    }

    /// `(t, amplitude, phase)` at `n` interior points per segment.
    pub fn tabulate(&self, n: usize) -> Vec<(f64, f64, f64)> {
        let mut rows = Vec::new();
        for (a, b) in self.segments() {
            for k in 0..n {
                let t = a + (b - a) * (k as f64 + 0.5) / n as f64;
                rows.push((t, self.amplitude(t), self.phase(t)));
            }
        }
        rows
    }

    /// CSV with header `t_ns,amplitude_rad_per_ns,phase_rad`.
    pub fn to_csv(&self, n: usize) -> String {
        let mut s = String::from("t_ns,amplitude_rad_per_ns,phase_rad\n");
        for (t, a, p) in self.tabulate(n) {
            s.push_str(&format!("{t:.16e},{a:.16e},{p:.16e}\n"));
        }
        s
    }
}
