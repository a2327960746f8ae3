//! Physical parameters, thermal occupations and the drift/diffusion matrices
//! of the linearized quadrature dynamics.
//!
//! All quantities in this module are angular (rad/s). Conversion from the
//! Hz-valued config file happens once, in [`crate::config`].

use std::f64::consts::SQRT_2;

use nalgebra::{DMatrix, SMatrix, SVector};
use serde::{Deserialize, Serialize};

use crate::constants::{angular, C_LIGHT, HBAR, K_B, TWO_PI};
use crate::steady::SteadyState;
use crate::{Error, Mode, Result};

pub type Matrix10 = SMatrix<f64, 10, 10>;
pub type Vector10 = SVector<f64, 10>;

/// Physical constants of the five-mode model, in angular units.
///
/// `g_m`, `g_c` are the drive-enhanced couplings `G_m`, `G_c` (real
/// magnitudes). `delta_m_eff` and `delta_c_eff` are the displacement-shifted
/// detunings; `delta_a` is the bare microwave detuning.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    pub omega_a: f64,
    pub omega_m: f64,
    pub omega_b1: f64,
    pub omega_b2: f64,
    /// Optical resonance wavelength (m).
    pub lambda_c: f64,
    pub gamma_a: f64,
    pub gamma_m: f64,
    pub gamma_c: f64,
    pub gamma_b1: f64,
    pub gamma_b2: f64,
    pub g_ma: f64,
    pub g_b1b2: f64,
    pub g_mb1: f64,
    pub g_cb2: f64,
    pub g_m: f64,
    pub g_c: f64,
    pub delta_a: f64,
    pub delta_m_eff: f64,
    pub delta_c_eff: f64,
    /// Bath temperature (K).
    pub temperature: f64,
}

impl SystemParams {
    /// The experimentally feasible parameter set with the optimal detunings
    /// `Δa = Δ̃m = -ωb1`, `Δ̃c = ωb2` and couplings `gma/2π = 1.5 MHz`,
    /// `gb1b2/2π = 2.4 MHz`.
    pub fn reference() -> Self {
        let omega_b1 = angular(20.15e6);
        let omega_b2 = angular(20.11e6);
        SystemParams {
            omega_a: angular(10e9),
            omega_m: angular(10e9),
            omega_b1,
            omega_b2,
            lambda_c: 1550e-9,
            gamma_a: angular(1e6),
            gamma_m: angular(1e6),
            gamma_c: angular(1e6),
            gamma_b1: angular(100.0),
            gamma_b2: angular(100.0),
            g_ma: angular(1.5e6),
            g_b1b2: angular(2.4e6),
            g_mb1: angular(0.1),
            g_cb2: angular(100.0),
            g_m: angular(0.7e6),
            g_c: angular(2.7e6),
            delta_a: -omega_b1,
            delta_m_eff: -omega_b1,
            delta_c_eff: omega_b2,
            temperature: 0.01,
        }
    }

    /// Optical resonance angular frequency `2πc/λc`.
    pub fn omega_c(&self) -> f64 {
        TWO_PI * C_LIGHT / self.lambda_c
    }

    /// Resonance frequency of `mode`, used for its bath occupation.
    pub fn resonance(&self, mode: Mode) -> f64 {
        match mode {
            Mode::B1 => self.omega_b1,
            Mode::B2 => self.omega_b2,
            Mode::M => self.omega_m,
            Mode::C => self.omega_c(),
            Mode::A => self.omega_a,
        }
    }

    pub fn damping(&self, mode: Mode) -> f64 {
        match mode {
            Mode::B1 => self.gamma_b1,
            Mode::B2 => self.gamma_b2,
            Mode::M => self.gamma_m,
            Mode::C => self.gamma_c,
            Mode::A => self.gamma_a,
        }
    }

    /// Mean thermal occupation of the bath attached to `mode`.
    pub fn bath_occupation(&self, mode: Mode) -> Result<f64> {
        thermal_occupation(self.resonance(mode), self.temperature)
    }

    /// Copy of `self` with the effective couplings and detunings taken from a
    /// solved classical steady state.
    pub fn with_steady(&self, steady: &SteadyState) -> Self {
        SystemParams {
            g_m: steady.g_m,
            g_c: steady.g_c,
            delta_m_eff: steady.delta_m_eff,
            delta_c_eff: steady.delta_c_eff,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        fn check(name: &'static str, value: f64, ok: bool, what: &str) -> Result<()> {
            if !value.is_finite() {
                return Err(Error::InvalidParam {
                    name,
                    reason: format!("must be finite, got {value}"),
                });
            }
            if ok {
                Ok(())
            } else {
                Err(Error::InvalidParam {
                    name,
                    reason: format!("must be {what}, got {value}"),
                })
            }
        }
        let positive = [
            ("gamma_a", self.gamma_a),
            ("gamma_m", self.gamma_m),
            ("gamma_c", self.gamma_c),
            ("gamma_b1", self.gamma_b1),
            ("gamma_b2", self.gamma_b2),
            ("omega_b1", self.omega_b1),
            ("omega_b2", self.omega_b2),
            ("omega_a", self.omega_a),
            ("omega_m", self.omega_m),
            ("lambda_c", self.lambda_c),
        ];
        for (name, v) in positive {
            check(name, v, v > 0.0, "strictly positive")?;
        }
        let non_negative = [
            ("g_ma", self.g_ma),
            ("g_b1b2", self.g_b1b2),
            ("g_mb1", self.g_mb1),
            ("g_cb2", self.g_cb2),
            ("g_m", self.g_m),
            ("g_c", self.g_c),
            ("temperature", self.temperature),
        ];
        for (name, v) in non_negative {
            check(name, v, v >= 0.0, "non-negative")?;
        }
        for (name, v) in [
            ("delta_a", self.delta_a),
            ("delta_m_eff", self.delta_m_eff),
            ("delta_c_eff", self.delta_c_eff),
        ] {
            check(name, v, true, "")?;
        }
        Ok(())
    }
}

/// Bose-Einstein occupation `1 / (exp(ħω / kB T) - 1)`.
///
/// Returns exactly zero at `T = 0`. `omega` must be strictly positive.
pub fn thermal_occupation(omega: f64, temperature: f64) -> Result<f64> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::Domain(format!(
            "thermal occupation needs a positive frequency, got {omega}"
        )));
    }
    if !(temperature >= 0.0) || !temperature.is_finite() {
        return Err(Error::Domain(format!(
            "temperature must be non-negative, got {temperature}"
        )));
    }
    if temperature == 0.0 {
        return Ok(0.0);
    }
    let x = HBAR * omega / (K_B * temperature);
    Ok(1.0 / x.exp_m1())
}

/// The 10x10 drift matrix `A` in the ordering
/// `(Xb1, Yb1, Xb2, Yb2, Xm, Ym, Xc, Yc, Xa, Ya)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DriftMatrix(pub Matrix10);

impl DriftMatrix {
    pub fn as_matrix(&self) -> &Matrix10 {
        &self.0
    }

    pub fn to_dmatrix(&self) -> DMatrix<f64> {
        DMatrix::from_column_slice(10, 10, self.0.as_slice())
    }
}

/// Diagonal diffusion matrix `D`, stored as its diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct DiffusionMatrix(pub Vector10);

impl DiffusionMatrix {
    pub fn diagonal(&self) -> &Vector10 {
        &self.0
    }

    pub fn to_matrix(&self) -> Matrix10 {
        Matrix10::from_diagonal(&self.0)
    }

    pub fn to_dmatrix(&self) -> DMatrix<f64> {
        DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(self.0.as_slice()))
    }
}

/// Builds the drift matrix entry by entry.
///
/// Beamsplitter couplings (`gma`, `gb1b2`) enter antisymmetrically between the
/// partner modes. The drive-enhanced couplings enter as `±√2 G` in the
/// `(Yb1, Ym)`, `(Xm, Xb1)`, `(Yb2, Yc)` and `(Xc, Xb2)` positions only.
pub fn build_drift_matrix(params: &SystemParams) -> Result<DriftMatrix> {
    params.validate()?;
    let p = params;
    let gm = SQRT_2 * p.g_m;
    let gc = SQRT_2 * p.g_c;
    let mut a = Matrix10::zeros();

    // b1
    a[(0, 0)] = -p.gamma_b1;
    a[(0, 1)] = p.omega_b1;
    a[(0, 3)] = p.g_b1b2;
    a[(1, 0)] = -p.omega_b1;
    a[(1, 1)] = -p.gamma_b1;
    a[(1, 2)] = -p.g_b1b2;
    a[(1, 5)] = -gm;
    // b2
    a[(2, 1)] = p.g_b1b2;
    a[(2, 2)] = -p.gamma_b2;
    a[(2, 3)] = p.omega_b2;
    a[(3, 0)] = -p.g_b1b2;
    a[(3, 2)] = -p.omega_b2;
    a[(3, 3)] = -p.gamma_b2;
    a[(3, 7)] = -gc;
    // m
    a[(4, 0)] = gm;
    a[(4, 4)] = -p.gamma_m;
    a[(4, 5)] = p.delta_m_eff;
    a[(4, 9)] = p.g_ma;
    a[(5, 4)] = -p.delta_m_eff;
    a[(5, 5)] = -p.gamma_m;
    a[(5, 8)] = -p.g_ma;
    // c
    a[(6, 2)] = gc;
    a[(6, 6)] = -p.gamma_c;
    a[(6, 7)] = p.delta_c_eff;
    a[(7, 6)] = -p.delta_c_eff;
    a[(7, 7)] = -p.gamma_c;
    // a
    a[(8, 5)] = p.g_ma;
    a[(8, 8)] = -p.gamma_a;
    a[(8, 9)] = p.delta_a;
    a[(9, 4)] = -p.g_ma;
    a[(9, 8)] = -p.delta_a;
    a[(9, 9)] = -p.gamma_a;

    Ok(DriftMatrix(a))
}

/// `D = diag[γj (2Nj + 1)]`, two equal entries per mode.
pub fn build_diffusion_matrix(params: &SystemParams) -> Result<DiffusionMatrix> {
    params.validate()?;
    let mut d = Vector10::zeros();
    for mode in Mode::ALL {
        let n = params.bath_occupation(mode)?;
        let value = params.damping(mode) * (2.0 * n + 1.0);
        d[mode.x()] = value;
        d[mode.y()] = value;
    }
    Ok(DiffusionMatrix(d))
}
