//! Classical steady state of the driven system.
//!
//! The strong drives displace every mode. The magnon and optical amplitudes
//! set the effective couplings `G_m = √2 g_mb1 |⟨m⟩|` and
//! `G_c = √2 g_cb2 |⟨c⟩|`, and the mechanical displacements shift the
//! detunings:
//!
//! ```text
//! Δ̃m = Δm + 2 g_mb1 Re⟨b1⟩        Δ̃c = Δc − 2 g_cb2 Re⟨b2⟩
//! ```
//!
//! Since the amplitudes depend on `Δ̃` in turn, [`solve_self_consistent`]
//! closes the loop by successive substitution.

use std::f64::consts::SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::{C_LIGHT, GYROMAGNETIC_RATIO, HBAR, MU_0, YIG_SPIN_DENSITY};
use crate::model::SystemParams;
use crate::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Relative amplitude change at which the fixed point counts as converged.
pub const CONVERGENCE_TOL: f64 = 1e-12;
pub const MAX_ITERATIONS: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SteadyState {
    pub m_avg: Complex64,
    pub c_avg: Complex64,
    pub b1_avg: Complex64,
    pub b2_avg: Complex64,
    pub delta_m_eff: f64,
    pub delta_c_eff: f64,
    /// `G_m` (rad/s), real magnitude.
    pub g_m: f64,
    /// `G_c` (rad/s), real magnitude.
    pub g_c: f64,
    pub iterations: usize,
}

impl SteadyState {
    /// Steady state implied by a parameter set that already carries
    /// `G_m`, `G_c` and the effective detunings.
    ///
    /// The amplitudes take the phase of the resolved-sideband limit, where
    /// `⟨m⟩` and `⟨c⟩` are purely imaginary, so that `-i g_mb1 ⟨m⟩ = G_m/√2`
    /// and `i g_cb2 ⟨c⟩ = G_c/√2` are real.
    pub fn from_effective(params: &SystemParams) -> Result<Self> {
        params.validate()?;
        let amplitude = |g_eff: f64, g_bare: f64, name: &'static str| -> Result<f64> {
            if g_eff == 0.0 {
                Ok(0.0)
            } else if g_bare > 0.0 {
                Ok(g_eff / (SQRT_2 * g_bare))
            } else {
                Err(Error::InvalidParam {
                    name,
                    reason: "bare coupling must be positive when the effective coupling is"
                        .into(),
                })
            }
        };
        let m_avg = I * amplitude(params.g_m, params.g_mb1, "g_mb1")?;
        let c_avg = -I * amplitude(params.g_c, params.g_cb2, "g_cb2")?;
        let (b1_avg, b2_avg) = mechanical_displacements(m_avg, c_avg, params)?;
        Ok(SteadyState {
            m_avg,
            c_avg,
            b1_avg,
            b2_avg,
            delta_m_eff: params.delta_m_eff,
            delta_c_eff: params.delta_c_eff,
            g_m: params.g_m,
            g_c: params.g_c,
            iterations: 0,
        })
    }

    /// Linearized magnomechanical coupling `-i g_mb1 ⟨m⟩` (equal to `G_m/√2`
    /// when real).
    pub fn magnomechanical_coupling(&self, params: &SystemParams) -> Complex64 {
        -I * params.g_mb1 * self.m_avg
    }

    /// Linearized optomechanical coupling `i g_cb2 ⟨c⟩`.
    pub fn optomechanical_coupling(&self, params: &SystemParams) -> Complex64 {
        I * params.g_cb2 * self.c_avg
    }
}

/// How the magnon mode is driven.
#[derive(Clone, Debug, PartialEq)]
pub enum MagnonDrive {
    /// Rabi frequency Ω (rad/s) given directly.
    Rabi(f64),
    /// Microwave power `p0` (W) on a sphere of `radius` (m) holding
    /// `spin_count` spins.
    Power {
        p0: f64,
        radius: f64,
        spin_count: f64,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct DriveSpec {
    pub magnon: MagnonDrive,
    /// Laser power `P_L` (W).
    pub laser_power: f64,
    /// Laser angular frequency `ω_d2` (rad/s).
    pub laser_frequency: f64,
}

impl DriveSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |name, reason: &str| Err(Error::InvalidParam { name, reason: reason.into() });
        match self.magnon {
            MagnonDrive::Rabi(omega) if !(omega >= 0.0 && omega.is_finite()) => {
                return bad("rabi", "must be finite and non-negative")
            }
            MagnonDrive::Power { p0, radius, spin_count } => {
                if !(p0 >= 0.0 && p0.is_finite()) {
                    return bad("p0", "must be finite and non-negative");
                }
                if !(radius > 0.0 && radius.is_finite()) {
                    return bad("radius", "must be positive");
                }
                if !(spin_count >= 0.0 && spin_count.is_finite()) {
                    return bad("spin_count", "must be finite and non-negative");
                }
            }
            _ => {}
        }
        if !(self.laser_power >= 0.0 && self.laser_power.is_finite()) {
            return bad("laser_power", "must be finite and non-negative");
        }
        if !(self.laser_frequency > 0.0 && self.laser_frequency.is_finite()) {
            return bad("laser_frequency", "must be positive");
        }
        Ok(())
    }

    /// Rabi frequency Ω (rad/s).
    pub fn rabi(&self) -> Result<f64> {
        match self.magnon {
            MagnonDrive::Rabi(omega) => Ok(omega),
            MagnonDrive::Power { p0, radius, spin_count } => {
                Ok(rabi_frequency(drive_field_from_power(p0, radius)?, spin_count))
            }
        }
    }

    /// Laser coupling `E` (rad/s).
    pub fn laser_coupling(&self, gamma_c: f64) -> f64 {
        laser_drive(self.laser_power, gamma_c, self.laser_frequency)
    }
}

/// Drive field amplitude `H_d = (1/R) √(2 P0 μ0 / (π c))` in tesla.
pub fn drive_field_from_power(p0: f64, radius: f64) -> Result<f64> {
    if !(radius > 0.0) {
        return Err(Error::Domain(format!("sphere radius must be positive, got {radius}")));
    }
    if !(p0 >= 0.0) {
        return Err(Error::Domain(format!("drive power must be non-negative, got {p0}")));
    }
    Ok((2.0 * p0 * MU_0 / (std::f64::consts::PI * C_LIGHT)).sqrt() / radius)
}

/// `Ω = (√5/4) γ √N H_d` for a field amplitude `h_d` (T) and `spin_count` spins.
pub fn rabi_frequency(h_d: f64, spin_count: f64) -> f64 {
    5f64.sqrt() / 4.0 * GYROMAGNETIC_RATIO * spin_count.sqrt() * h_d
}

/// Number of spins in a YIG sphere of the given radius, from the
/// literature spin density (see [`YIG_SPIN_DENSITY`]).
pub fn yig_spin_count(radius: f64) -> f64 {
    YIG_SPIN_DENSITY * 4.0 / 3.0 * std::f64::consts::PI * radius.powi(3)
}

/// `E = √(2 γc P_L / (ħ ω_d2))`.
pub fn laser_drive(power: f64, gamma_c: f64, laser_frequency: f64) -> f64 {
    (2.0 * gamma_c * power / (HBAR * laser_frequency)).sqrt()
}

/// Steady-state magnon and optical amplitudes for Rabi frequency `rabi` and
/// laser coupling `e`, at the effective detunings stored in `params`.
pub fn steady_amplitudes(params: &SystemParams, rabi: f64, e: f64) -> Result<(Complex64, Complex64)> {
    let p = params;
    let cavity = Complex64::new(p.gamma_a, p.delta_a);
    if cavity.norm() == 0.0 {
        return Err(Error::Degenerate("microwave cavity response"));
    }
    let den_m = Complex64::new(p.gamma_m, p.delta_m_eff) + p.g_ma * p.g_ma / cavity;
    let den_c = Complex64::new(p.gamma_c, p.delta_c_eff);
    let scale_m = p.gamma_m + p.delta_m_eff.abs() + p.g_ma * p.g_ma / cavity.norm();
    if den_m.norm() <= f64::EPSILON * scale_m {
        return Err(Error::Degenerate("magnon amplitude"));
    }
    if den_c.norm() == 0.0 {
        return Err(Error::Degenerate("optical amplitude"));
    }
    Ok((rabi / den_m, e / den_c))
}

/// Mechanical displacements `⟨b1⟩`, `⟨b2⟩` driven by the radiation-pressure
/// and magnetostrictive forces.
pub fn mechanical_displacements(
    m_avg: Complex64,
    c_avg: Complex64,
    params: &SystemParams,
) -> Result<(Complex64, Complex64)> {
    let p = params;
    let r1 = Complex64::new(-p.omega_b1, p.gamma_b1);
    let r2 = Complex64::new(-p.omega_b2, p.gamma_b2);
    let den = p.g_b1b2 * p.g_b1b2 - r1 * r2;
    let scale = p.g_b1b2 * p.g_b1b2 + r1.norm() * r2.norm();
    if den.norm() <= f64::EPSILON * scale {
        return Err(Error::Degenerate("mechanical displacement"));
    }
    let fm = m_avg.norm_sqr() * p.g_mb1;
    let fc = c_avg.norm_sqr() * p.g_cb2;
    let b1 = (fc * p.g_b1b2 - fm * r2) / den;
    let b2 = (fc * r1 - fm * p.g_b1b2) / den;
    Ok((b1, b2))
}

/// `(G_m, G_c) = (√2 g_mb1 |⟨m⟩|, √2 g_cb2 |⟨c⟩|)`.
pub fn effective_couplings(m_avg: Complex64, c_avg: Complex64, params: &SystemParams) -> (f64, f64) {
    (
        SQRT_2 * params.g_mb1 * m_avg.norm(),
        SQRT_2 * params.g_cb2 * c_avg.norm(),
    )
}

fn relative_change(old: Complex64, new: Complex64) -> f64 {
    let diff = (new - old).norm();
    if diff == 0.0 {
        0.0
    } else {
        diff / old.norm().max(new.norm())
    }
}

/// Fixed point of amplitudes, displacements and effective detunings for bare
/// detunings `delta_m`, `delta_c`.
///
/// Uses undamped successive substitution starting from `Δ̃ = Δ`. Converged
/// when every amplitude changes by less than [`CONVERGENCE_TOL`] relative.
/// Everything in `params` except `g_m`, `g_c` and the effective detunings is
/// used as given; those four are outputs.
pub fn solve_self_consistent(
    params: &SystemParams,
    delta_m: f64,
    delta_c: f64,
    drive: &DriveSpec,
) -> Result<SteadyState> {
    params.validate()?;
    drive.validate()?;
    let rabi = drive.rabi()?;
    let e = drive.laser_coupling(params.gamma_c);

    let mut p = params.clone();
    p.delta_m_eff = delta_m;
    p.delta_c_eff = delta_c;
    let (mut m, mut c) = steady_amplitudes(&p, rabi, e)?;
    let (mut b1, mut b2) = mechanical_displacements(m, c, &p)?;

    let snapshot = |p: &SystemParams, m, c, b1, b2, iterations| {
        let (g_m, g_c) = effective_couplings(m, c, p);
        SteadyState {
            m_avg: m,
            c_avg: c,
            b1_avg: b1,
            b2_avg: b2,
            delta_m_eff: p.delta_m_eff,
            delta_c_eff: p.delta_c_eff,
            g_m,
            g_c,
            iterations,
        }
    };

    for iteration in 1..=MAX_ITERATIONS {
        p.delta_m_eff = delta_m + 2.0 * p.g_mb1 * b1.re;
        p.delta_c_eff = delta_c - 2.0 * p.g_cb2 * b2.re;
        let (m_new, c_new) = steady_amplitudes(&p, rabi, e)?;
        let (b1_new, b2_new) = mechanical_displacements(m_new, c_new, &p)?;
        let change = [
            relative_change(m, m_new),
            relative_change(c, c_new),
            relative_change(b1, b1_new),
            relative_change(b2, b2_new),
        ]
        .into_iter()
        .fold(0.0, f64::max);
        (m, c, b1, b2) = (m_new, c_new, b1_new, b2_new);
        if change < CONVERGENCE_TOL {
            return Ok(snapshot(&p, m, c, b1, b2, iteration));
        }
    }
    Err(Error::NonConvergence {
        iterations: MAX_ITERATIONS,
        last: Box::new(snapshot(&p, m, c, b1, b2, MAX_ITERATIONS)),
    })
}
