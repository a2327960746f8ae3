//! Stability of the linearized dynamics and the steady-state covariance
//! matrix.
//!
//! The steady state exists only when every eigenvalue of the drift matrix has
//! a strictly negative real part. The covariance matrix then solves
//! `A V + V Aᵀ = -D`, which is vectorized with the Kronecker identity
//! `vec(A V + V Aᵀ) = (I ⊗ A + A ⊗ I) vec(V)` and solved as one dense linear
//! system.

use nalgebra::{DMatrix, DVector, Matrix4, SMatrix};
use serde::{Deserialize, Serialize};

use crate::model::{DiffusionMatrix, DriftMatrix, Matrix10};
use crate::{Error, Mode, Result};

/// Relative residual the Lyapunov solve must reach.
pub const RESIDUAL_TOL: f64 = 1e-10;
/// Points with `max Re λ` in `(-MARGINAL_MARGIN, 0)` are flagged as marginal.
pub const MARGINAL_MARGIN: f64 = 1e3;
/// Eigenvalue floor for the bona-fide condition `V + (i/2) Ω ⪰ 0`.
pub const PHYSICALITY_FLOOR: f64 = -1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub stable: bool,
    /// Largest real part over the drift eigenvalues (rad/s).
    pub max_real_eig: f64,
}

impl StabilityReport {
    /// Stable, but within [`MARGINAL_MARGIN`] rad/s of the boundary.
    pub fn is_marginal(&self) -> bool {
        self.stable && self.max_real_eig > -MARGINAL_MARGIN
    }
}

/// Stability of an arbitrary square drift matrix.
pub fn stability_of(a: &DMatrix<f64>) -> Result<StabilityReport> {
    if !a.is_square() {
        return Err(Error::Numerical("drift matrix must be square".into()));
    }
    if a.iter().any(|x| !x.is_finite()) {
        return Err(Error::Numerical("drift matrix has non-finite entries".into()));
    }
    let schur = nalgebra::Schur::try_new(a.clone(), f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Numerical("eigenvalue iteration did not converge".into()))?;
    let max_real_eig = schur
        .complex_eigenvalues()
        .iter()
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(StabilityReport {
        stable: max_real_eig < 0.0,
        max_real_eig,
    })
}

pub fn is_stable(a: &DriftMatrix) -> Result<StabilityReport> {
    stability_of(&a.to_dmatrix())
}

/// Relative residual `‖A V + V Aᵀ + Q‖ / ‖Q‖` in the Frobenius norm.
pub fn lyapunov_residual(a: &DMatrix<f64>, v: &DMatrix<f64>, q: &DMatrix<f64>) -> f64 {
    let r = a * v + v * a.transpose() + q;
    r.norm() / q.norm()
}

/// Solves `A V + V Aᵀ = -Q` for a stable `A` of any size.
///
/// Returns the symmetrized solution. Fails with [`Error::Unstable`] rather
/// than returning a solution that does not describe a steady state.
pub fn solve_continuous_lyapunov(a: &DMatrix<f64>, q: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = a.nrows();
    if q.shape() != (n, n) {
        return Err(Error::Numerical(format!(
            "diffusion matrix is {:?}, drift is {n}x{n}",
            q.shape()
        )));
    }
    let report = stability_of(a)?;
    if !report.stable {
        return Err(Error::Unstable {
            max_real_eig: report.max_real_eig,
        });
    }

    let id = DMatrix::<f64>::identity(n, n);
    let k = id.kronecker(a) + a.kronecker(&id);
    let rhs = -DVector::from_column_slice(q.as_slice());
    let lu = k.clone().lu();
    let mut x = lu
        .solve(&rhs)
        .ok_or_else(|| Error::Numerical("singular Lyapunov operator".into()))?;
    // one step of iterative refinement
    let r = &rhs - &k * &x;
    if let Some(dx) = lu.solve(&r) {
        x += dx;
    }

    let v = DMatrix::from_column_slice(n, n, x.as_slice());
    let v = (&v + v.transpose()) * 0.5;
    if q.norm() > 0.0 {
        let residual = lyapunov_residual(a, &v, q);
        if !(residual < RESIDUAL_TOL) {
            return Err(Error::Numerical(format!(
                "Lyapunov residual {residual:.3e} exceeds {RESIDUAL_TOL:.0e}"
            )));
        }
    }
    Ok(v)
}

/// Steady-state covariance matrix of the ten quadrature fluctuations.
///
/// Entries are dimensionless with vacuum variance 1/2.
#[derive(Clone, Debug, PartialEq)]
pub struct CovarianceMatrix(pub Matrix10);

impl CovarianceMatrix {
    pub fn as_matrix(&self) -> &Matrix10 {
        &self.0
    }

    /// The 2x2 block of `mode`.
    pub fn mode_block(&self, mode: Mode) -> SMatrix<f64, 2, 2> {
        self.0.fixed_view::<2, 2>(mode.x(), mode.x()).into_owned()
    }

    /// Principal 4x4 submatrix on the quadratures of `p` then `q`.
    pub fn pair_block(&self, p: Mode, q: Mode) -> Matrix4<f64> {
        let idx = [p.x(), p.y(), q.x(), q.y()];
        Matrix4::from_fn(|i, j| self.0[(idx[i], idx[j])])
    }

    /// Largest relative asymmetry `max |Vij - Vji| / max |V|`.
    pub fn asymmetry(&self) -> f64 {
        let scale = self.0.amax();
        if scale == 0.0 {
            return 0.0;
        }
        (self.0 - self.0.transpose()).amax() / scale
    }

    /// Smallest eigenvalue of `V + (i/2) Ω`.
    ///
    /// Computed through the real symmetric embedding `[[V, -W], [W, V]]` with
    /// `W = Ω/2`, whose spectrum is that of the Hermitian matrix, doubled.
    pub fn physicality_floor(&self) -> f64 {
        let w = symplectic_form(5) * 0.5;
        let mut h = DMatrix::<f64>::zeros(20, 20);
        for i in 0..10 {
            for j in 0..10 {
                let v = 0.5 * (self.0[(i, j)] + self.0[(j, i)]);
                h[(i, j)] = v;
                h[(i + 10, j + 10)] = v;
                h[(i, j + 10)] = -w[(i, j)];
                h[(i + 10, j)] = w[(i, j)];
            }
        }
        h.symmetric_eigenvalues().min()
    }

    /// Symmetric to 1e-12 relative and a bona-fide quantum state.
    pub fn is_physical(&self) -> bool {
        self.asymmetry() <= 1e-12 && self.physicality_floor() >= PHYSICALITY_FLOOR
    }
}

/// Standard symplectic form `⊕ [[0, 1], [-1, 0]]` over `modes` modes.
pub fn symplectic_form(modes: usize) -> DMatrix<f64> {
    let mut w = DMatrix::zeros(2 * modes, 2 * modes);
    for k in 0..modes {
        w[(2 * k, 2 * k + 1)] = 1.0;
        w[(2 * k + 1, 2 * k)] = -1.0;
    }
    w
}

/// Steady-state covariance matrix for the given drift and diffusion matrices.
pub fn solve_lyapunov(a: &DriftMatrix, d: &DiffusionMatrix) -> Result<CovarianceMatrix> {
    let v = solve_continuous_lyapunov(&a.to_dmatrix(), &d.to_dmatrix())?;
    Ok(CovarianceMatrix(Matrix10::from_column_slice(v.as_slice())))
}
