//! Frequency-domain fluctuations and the optical cavity output spectrum.
//!
//! The linearized Langevin equations are Fourier transformed with
//! `f(ω) = ∫ f(t) e^{iωt} dt` and written over the doubled basis
//! `(δb1, δb1†, δb2, δb2†, δm, δm†, δc, δc†, δa, δa†)`, where `δj†(ω)` is the
//! transform of `δj†(t)`. The creation-operator rows are the complex
//! conjugates of the annihilation rows. Solving
//! `(-iω - M) x = L n` for the `δc` row gives
//!
//! ```text
//! δc(ω) = Σj [ Aj(ω) j_in(ω) + Bj(ω) j_in†(ω) ]
//! ```
//!
//! With `⟨j_in(ω) j_in†(ω')⟩ = 2π (Nj + 1) δ(ω + ω')` and
//! `⟨j_in†(ω) j_in(ω')⟩ = 2π Nj δ(ω + ω')`, the normal-ordered spectral
//! density of any linear combination of inputs with coefficients `Ãj`, `B̃j`
//! is `Σj Nj |Ãj|² + (Nj + 1) |B̃j|²`, per unit `dω/2π`. The output field is
//! `δc_out = √(2γc) δc - c_in`.

use nalgebra::{SMatrix, SVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constants::{angular, hertz};
use crate::model::SystemParams;
use crate::steady::SteadyState;
use crate::{Error, Mode, Result};

type CMatrix10 = SMatrix<Complex64, 10, 10>;
type CVector10 = SVector<Complex64, 10>;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Noise-to-`δc` transfer coefficients at one analysis frequency.
#[derive(Clone, Debug, PartialEq)]
pub struct FrequencyResponse {
    /// Analysis frequency in the rotating frame (rad/s).
    pub omega: f64,
    /// `Aj(ω)`, coefficient of `j_in(ω)`, indexed by [`Mode::index`].
    pub a: [Complex64; 5],
    /// `Bj(ω)`, coefficient of `j_in†(ω)`.
    pub b: [Complex64; 5],
}

impl FrequencyResponse {
    pub fn a(&self, mode: Mode) -> Complex64 {
        self.a[mode.index()]
    }

    pub fn b(&self, mode: Mode) -> Complex64 {
        self.b[mode.index()]
    }
}

/// Drift matrix of the fluctuation operators in the doubled basis.
fn operator_drift(params: &SystemParams, steady: &SteadyState) -> CMatrix10 {
    let p = params;
    let gm = steady.magnomechanical_coupling(p);
    let gc = steady.optomechanical_coupling(p);
    let mut m = CMatrix10::zeros();
    // annihilation-operator row `row`, column of operator `col`; the matching
    // creation row gets the conjugate coefficient on the partner operator.
    let mut put = |row: usize, col: usize, value: Complex64| {
        m[(row, col)] += value;
        m[(row + 1, col ^ 1)] += value.conj();
    };
    let (b1, b2, mm, c, a) = (0, 2, 4, 6, 8);

    put(b1, b1, -Complex64::new(p.gamma_b1, p.omega_b1));
    put(b1, mm + 1, gm);
    put(b1, mm, -gm.conj());
    put(b1, b2, -I * p.g_b1b2);

    put(b2, b2, -Complex64::new(p.gamma_b2, p.omega_b2));
    put(b2, c + 1, gc);
    put(b2, c, -gc.conj());
    put(b2, b1, -I * p.g_b1b2);

    put(mm, mm, -Complex64::new(p.gamma_m, steady.delta_m_eff));
    put(mm, b1, gm);
    put(mm, b1 + 1, gm);
    put(mm, a, -I * p.g_ma);

    put(c, c, -Complex64::new(p.gamma_c, steady.delta_c_eff));
    put(c, b2, gc);
    put(c, b2 + 1, gc);

    put(a, a, -Complex64::new(p.gamma_a, p.delta_a));
    put(a, mm, -I * p.g_ma);
    m
}

fn noise_gains(params: &SystemParams) -> [f64; 5] {
    Mode::ALL.map(|mode| (2.0 * params.damping(mode)).sqrt())
}

/// Solves the doubled-basis system at `omega` and returns the `δc` row.
pub fn solve_fluctuations(params: &SystemParams, steady: &SteadyState, omega: f64) -> Result<FrequencyResponse> {
    params.validate()?;
    let drift = operator_drift(params, steady);
    let gains = noise_gains(params);
    solve_row(&drift, &gains, omega)
}

fn solve_row(drift: &CMatrix10, gains: &[f64; 5], omega: f64) -> Result<FrequencyResponse> {
    let k = CMatrix10::identity() * (-I * omega) - drift;
    // row 6 of k⁻¹ is the solution of kᵀ y = e6
    let kt = k.transpose();
    let mut e6 = CVector10::zeros();
    e6[Mode::C.x()] = Complex64::new(1.0, 0.0);
    let y = kt
        .lu()
        .solve(&e6)
        .ok_or_else(|| Error::Numerical(format!("singular fluctuation system at ω = {omega:.6e}")))?;
    let residual = (kt * y - e6).norm();
    if !(residual < 1e-10) {
        return Err(Error::Numerical(format!(
            "fluctuation solve residual {residual:.3e} at ω = {omega:.6e}"
        )));
    }
    let mut a = [Complex64::ZERO; 5];
    let mut b = [Complex64::ZERO; 5];
    for mode in Mode::ALL {
        let g = gains[mode.index()];
        a[mode.index()] = y[mode.x()] * g;
        b[mode.index()] = y[mode.y()] * g;
    }
    Ok(FrequencyResponse { omega, a, b })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumPoint {
    /// Analysis frequency (rad/s).
    pub omega: f64,
    /// Spectral density (dimensionless).
    pub density: f64,
}

/// Sampled spectrum `S(ω)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumTrace {
    pub points: Vec<SpectrumPoint>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Field {
    Intracavity,
    Output,
}

fn density(resp: &FrequencyResponse, occupations: &[f64; 5], gamma_c: f64, field: Field) -> f64 {
    let scale = match field {
        Field::Intracavity => 1.0,
        Field::Output => (2.0 * gamma_c).sqrt(),
    };
    Mode::ALL
        .iter()
        .map(|&mode| {
            let n = occupations[mode.index()];
            let mut a = resp.a(mode) * scale;
            let b = resp.b(mode) * scale;
            if field == Field::Output && mode == Mode::C {
                a -= 1.0;
            }
            n * a.norm_sqr() + (n + 1.0) * b.norm_sqr()
        })
        .sum()
}

fn trace(params: &SystemParams, steady: &SteadyState, grid: &[f64], field: Field) -> Result<SpectrumTrace> {
    params.validate()?;
    let drift = operator_drift(params, steady);
    let gains = noise_gains(params);
    let mut occupations = [0.0; 5];
    for mode in Mode::ALL {
        occupations[mode.index()] = params.bath_occupation(mode)?;
    }
    let points = grid
        .par_iter()
        .map(|&omega| {
            let resp = solve_row(&drift, &gains, omega)?;
            Ok(SpectrumPoint {
                omega,
                density: density(&resp, &occupations, params.gamma_c, field),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectrumTrace { points })
}

/// Normal-ordered output spectrum `⟨δc_out†(ω) δc_out(ω)⟩` on `grid` (rad/s).
pub fn output_spectrum(params: &SystemParams, steady: &SteadyState, grid: &[f64]) -> Result<SpectrumTrace> {
    trace(params, steady, grid, Field::Output)
}

/// Normal-ordered intracavity spectrum of `δc`. Its integral over `dω/2π`
/// is the fluctuation photon number `⟨δc† δc⟩`.
pub fn intracavity_spectrum(params: &SystemParams, steady: &SteadyState, grid: &[f64]) -> Result<SpectrumTrace> {
    trace(params, steady, grid, Field::Intracavity)
}

/// `count` uniformly spaced points on `[center - half_span, center + half_span]`.
pub fn uniform_grid(center: f64, half_span: f64, count: usize) -> Vec<f64> {
    match count {
        0 => vec![],
        1 => vec![center],
        _ => {
            let step = 2.0 * half_span / (count - 1) as f64;
            (0..count).map(|k| center - half_span + step * k as f64).collect()
        }
    }
}

/// 4001 points within ±8 MHz of the mean mechanical frequency.
pub fn default_grid(params: &SystemParams) -> Vec<f64> {
    uniform_grid(0.5 * (params.omega_b1 + params.omega_b2), angular(8e6), 4001)
}

impl SpectrumTrace {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn max_density(&self) -> f64 {
        self.points.iter().map(|p| p.density).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Indices of interior local maxima whose height exceeds
    /// `rel_threshold` times the global maximum. No smoothing.
    pub fn peaks(&self, rel_threshold: f64) -> Vec<usize> {
        let s: Vec<f64> = self.points.iter().map(|p| p.density).collect();
        let floor = rel_threshold * self.max_density();
        (1..s.len().saturating_sub(1))
            .filter(|&k| s[k] > s[k - 1] && s[k] >= s[k + 1] && s[k] > floor)
            .collect()
    }

    /// Full width at half maximum (rad/s) of the peak at `index`, by linear
    /// interpolation of the half-height crossings. `None` if a crossing
    /// falls outside the grid.
    pub fn fwhm(&self, index: usize) -> Option<f64> {
        let p = &self.points;
        let half = 0.5 * p[index].density;
        let crossing = |k_in: usize, k_out: usize| {
            let (a, b) = (p[k_in], p[k_out]);
            let t = (a.density - half) / (a.density - b.density);
            a.omega + t * (b.omega - a.omega)
        };
        let mut l = index;
        while p[l].density > half {
            if l == 0 {
                return None;
            }
            l -= 1;
        }
        let mut r = index;
        while p[r].density > half {
            r += 1;
            if r == p.len() {
                return None;
            }
        }
        Some(crossing(r - 1, r) - crossing(l + 1, l))
    }

    /// Trapezoidal integral over `dω/2π`.
    pub fn integrate(&self) -> f64 {
        self.points
            .windows(2)
            .map(|w| 0.5 * (w[0].density + w[1].density) * (w[1].omega - w[0].omega))
            .sum::<f64>()
            / crate::constants::TWO_PI
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("spectra always serialize");
        s.push('\n');
        s
    }

    /// Two-column text: `ω/2π` in Hz and `S`, both with 17 significant digits.
    pub fn to_two_column(&self) -> String {
        let mut out = String::with_capacity(self.points.len() * 48);
        out.push_str("# omega_over_2pi_hz density\n");
        for p in &self.points {
            out.push_str(&format!("{:.16e} {:.16e}\n", hertz(p.omega), p.density));
        }
        out
    }
}
