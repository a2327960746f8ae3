//! Entanglement and occupation measures on the steady-state covariance
//! matrix.

use nalgebra::{Matrix2, Matrix4};
use serde::{Deserialize, Serialize};

use crate::lyapunov::CovarianceMatrix;
use crate::{Error, Mode, Result};

/// Round-off tolerance below which negative discriminants and occupations
/// are clamped rather than rejected.
pub const CLAMP_TOL: f64 = 1e-9;

/// A scalar measure plus whether round-off clamping was needed to get it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Measure {
    pub value: f64,
    pub clamped: bool,
}

/// Two-mode reduced covariance matrix `[[Vi, Vij], [Vijᵀ, Vj]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct BipartiteCM {
    pub v4: Matrix4<f64>,
    pub modes: (Mode, Mode),
}

impl BipartiteCM {
    pub fn new(v4: Matrix4<f64>, modes: (Mode, Mode)) -> Self {
        BipartiteCM { v4, modes }
    }

    pub fn first(&self) -> Matrix2<f64> {
        self.v4.fixed_view::<2, 2>(0, 0).into_owned()
    }

    pub fn second(&self) -> Matrix2<f64> {
        self.v4.fixed_view::<2, 2>(2, 2).into_owned()
    }

    pub fn correlation(&self) -> Matrix2<f64> {
        self.v4.fixed_view::<2, 2>(0, 2).into_owned()
    }

    /// `Σ = det Vi + det Vj - 2 det Vij`; the minus sign is the partial
    /// transpose of the second mode.
    pub fn sigma(&self) -> f64 {
        self.first().determinant() + self.second().determinant() - 2.0 * self.correlation().determinant()
    }
}

/// Reduced state of the pair `(i, j)`.
pub fn extract_bipartite(v: &CovarianceMatrix, i: Mode, j: Mode) -> Result<BipartiteCM> {
    if i == j {
        return Err(Error::Usage(format!(
            "bipartite extraction needs two distinct modes, got ({i}, {j})"
        )));
    }
    Ok(BipartiteCM::new(v.pair_block(i, j), (i, j)))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Negativity {
    /// `E_N = max(0, -ln 2η⁻)`.
    pub value: f64,
    /// Smallest symplectic eigenvalue of the partially transposed state.
    pub eta_minus: f64,
    pub clamped: bool,
}

impl From<Negativity> for Measure {
    fn from(n: Negativity) -> Self {
        Measure {
            value: n.value,
            clamped: n.clamped,
        }
    }
}

/// Logarithmic negativity of a two-mode Gaussian state.
///
/// `η⁻ = 2^{-1/2} [Σ - (Σ² - 4 det V4)^{1/2}]^{1/2}`. The discriminant and
/// the bracket may dip below zero by round-off; values down to
/// `-CLAMP_TOL` (relative to `Σ²`) are clamped to zero and flagged.
pub fn log_negativity(bp: &BipartiteCM) -> Result<Negativity> {
    let (i, j) = bp.modes;
    let det = bp.v4.determinant();
    let sigma = bp.sigma();
    let delta = bp.first().determinant() + bp.second().determinant() + 2.0 * bp.correlation().determinant();

    // bona fide two-mode state: det V4 >= 1/16 and Δ <= 4 det V4 + 1/4,
    // i.e. both symplectic eigenvalues are at least 1/2
    let tol = CLAMP_TOL * delta.abs().max(1.0);
    if det < 1.0 / 16.0 - tol || delta > 4.0 * det + 0.25 + tol {
        return Err(Error::Physicality(format!(
            "({i}, {j}) violates the uncertainty relation (det = {det:.6e}, Δ = {delta:.6e})"
        )));
    }

    let (eta_minus, clamped) = smallest_symplectic(sigma, det).ok_or_else(|| {
        Error::Physicality(format!(
            "negative partial-transpose discriminant (Σ = {sigma:.3e}) for ({i}, {j})"
        ))
    })?;
    let value = (-(2.0 * eta_minus).ln()).max(0.0);
    Ok(Negativity {
        value,
        eta_minus,
        clamped,
    })
}

/// Smaller root `η` of `η⁴ - s η² + det = 0`, i.e.
/// `η² = [s - (s² - 4 det)^{1/2}] / 2`, evaluated as `2 det / [s + (s² - 4 det)^{1/2}]`
/// to avoid cancellation. Returns `None` for a discriminant below
/// `-CLAMP_TOL · max(1, s²)` or a non-positive spectrum; smaller negative
/// discriminants are clamped and flagged.
fn smallest_symplectic(s: f64, det: f64) -> Option<(f64, bool)> {
    let tol = CLAMP_TOL * s.abs().max(1.0).powi(2);
    let mut disc = s * s - 4.0 * det;
    let mut clamped = false;
    if disc < 0.0 {
        if disc < -tol {
            return None;
        }
        disc = 0.0;
        clamped = true;
    }
    if !(s > 0.0 && det > 0.0) {
        return None;
    }
    Some(((2.0 * det / (s + disc.sqrt())).sqrt(), clamped))
}

/// Logarithmic negativity between `i` and `j` in the full state.
pub fn entanglement(v: &CovarianceMatrix, i: Mode, j: Mode) -> Result<Negativity> {
    log_negativity(&extract_bipartite(v, i, j)?)
}

/// Mean excitation number `(Vxx + Vyy - 1) / 2` of `mode`.
pub fn effective_occupation(v: &CovarianceMatrix, mode: Mode) -> Result<Measure> {
    let b = v.mode_block(mode);
    let n = 0.5 * (b[(0, 0)] + b[(1, 1)] - 1.0);
    if n >= 0.0 {
        Ok(Measure { value: n, clamped: false })
    } else if n >= -CLAMP_TOL {
        Ok(Measure { value: 0.0, clamped: true })
    } else {
        Err(Error::Physicality(format!("negative occupation {n:.3e} for mode {mode}")))
    }
}
