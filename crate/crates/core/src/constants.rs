//! Physical constants (CODATA 2018, SI units).

use std::f64::consts::PI;

/// Reduced Planck constant, J s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380_649e-23;
/// Speed of light in vacuum, m/s.
pub const C_LIGHT: f64 = 299_792_458.0;
/// Vacuum magnetic permeability, N/A².
pub const MU_0: f64 = 1.256_637_062_12e-6;
/// Electron gyromagnetic ratio, rad s⁻¹ T⁻¹.
pub const GYROMAGNETIC_RATIO: f64 = 1.760_859_630_23e11;

/// Net spin density of YIG, m⁻³.
///
/// Not a fundamental constant: a commonly used literature value, needed only
/// when converting a microwave drive power into a Rabi frequency.
pub const YIG_SPIN_DENSITY: f64 = 4.22e27;

pub const TWO_PI: f64 = 2.0 * PI;

/// Angular frequency (rad/s) from an ordinary frequency in Hz.
#[inline]
pub fn angular(hz: f64) -> f64 {
    TWO_PI * hz
}

/// Ordinary frequency in Hz from an angular frequency (rad/s).
#[inline]
pub fn hertz(rad_per_s: f64) -> f64 {
    rad_per_s / TWO_PI
}
