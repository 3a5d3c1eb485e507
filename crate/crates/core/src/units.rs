//! Unit conversions at the user boundary.

use std::f64::consts::TAU;

/// Converts a frequency quoted as `x` in "2π × MHz" into rad/ns.
pub fn mhz(x: f64) -> f64 {
    TAU * x * 1e-3
}

/// Inverse of [`mhz`].
pub fn to_mhz(rad_per_ns: f64) -> f64 {
    rad_per_ns / (TAU * 1e-3)
}
