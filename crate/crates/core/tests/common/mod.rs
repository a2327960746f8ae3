//! Independent oracles and generators shared by the integration tests.
#![allow(dead_code)]

use nalgebra::{DMatrix, Matrix2, Matrix4};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Prints one verdict line and returns whether it passed.
pub fn verdict(id: u32, name: &str, pass: bool, detail: &str) -> bool {
    println!("criterion {id:>2} [{}] {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    pass
}

fn rotation(theta: f64) -> Matrix2<f64> {
    let (s, c) = theta.sin_cos();
    Matrix2::new(c, -s, s, c)
}

fn local(a: Matrix2<f64>, b: Matrix2<f64>) -> Matrix4<f64> {
    let mut m = Matrix4::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(&a);
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(&b);
    m
}

/// Independent local rotations of the two modes.
pub fn local_rotation(t1: f64, t2: f64) -> Matrix4<f64> {
    local(rotation(t1), rotation(t2))
}

/// Random two-mode symplectic matrix built from elementary Gaussian
/// operations: local rotations and squeezers, beam splitters and two-mode
/// squeezers.
pub fn random_symplectic(rng: &mut StdRng) -> Matrix4<f64> {
    let mut s = Matrix4::identity();
    for _ in 0..4 {
        let tau = std::f64::consts::TAU;
        let (r1, r2) = (rng.random_range(-0.6..0.6), rng.random_range(-0.6..0.6));
        let squeeze = local(
            Matrix2::new(f64::exp(r1), 0.0, 0.0, f64::exp(-r1)),
            Matrix2::new(f64::exp(r2), 0.0, 0.0, f64::exp(-r2)),
        );
        let rot = local_rotation(rng.random_range(0.0..tau), rng.random_range(0.0..tau));
        let theta: f64 = rng.random_range(0.0..tau);
        let (st, ct) = theta.sin_cos();
        let bs = Matrix4::new(
            ct, 0.0, st, 0.0, //
            0.0, ct, 0.0, st, //
            -st, 0.0, ct, 0.0, //
            0.0, -st, 0.0, ct,
        );
        let r: f64 = rng.random_range(0.0..0.6);
        let (ch, sh) = (r.cosh(), r.sinh());
        let tms = Matrix4::new(
            ch, 0.0, sh, 0.0, //
            0.0, ch, 0.0, -sh, //
            sh, 0.0, ch, 0.0, //
            0.0, -sh, 0.0, ch,
        );
        s = tms * bs * rot * squeeze * s;
    }
    s
}

/// Random bona fide two-mode covariance matrix (vacuum = I/2).
pub fn random_physical_cm(rng: &mut StdRng) -> Matrix4<f64> {
    let (n1, n2): (f64, f64) = (rng.random_range(0.5..3.0), rng.random_range(0.5..3.0));
    let s = random_symplectic(rng);
    s * Matrix4::from_diagonal(&nalgebra::Vector4::new(n1, n1, n2, n2)) * s.transpose()
}

pub fn omega4() -> Matrix4<f64> {
    local(Matrix2::new(0.0, 1.0, -1.0, 0.0), Matrix2::new(0.0, 1.0, -1.0, 0.0))
}

/// Smallest symplectic eigenvalue of the partial transpose, from the
/// spectrum `±iη` of `Ω Ṽ` with `Ṽ = P V P`, `P = diag(1, 1, 1, -1)`.
pub fn pt_eta_minus(v4: &Matrix4<f64>) -> f64 {
    let p = Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0, 1.0, 1.0, -1.0));
    let m = omega4() * p * v4 * p;
    nalgebra::Schur::new(m)
        .complex_eigenvalues()
        .iter()
        .map(|z| z.im.abs())
        .fold(f64::INFINITY, f64::min)
}

pub fn log_negativity_oracle(v4: &Matrix4<f64>) -> f64 {
    (-(2.0 * pt_eta_minus(v4)).ln()).max(0.0)
}

/// `∫₀^∞ exp(At) Q exp(Aᵀt) dt` by composite Simpson on `[0, h]` followed
/// by interval doubling `V(2T) = V(T) + E(T) V(T) E(T)ᵀ`.
pub fn lyapunov_by_integration(a: &DMatrix<f64>, q: &DMatrix<f64>) -> DMatrix<f64> {
    let n_sub = 128;
    let h = 1.0 / a.norm();
    let step = (a * (h / n_sub as f64)).exp();
    let mut e = DMatrix::identity(a.nrows(), a.ncols());
    let mut v = DMatrix::zeros(a.nrows(), a.ncols());
    for k in 0..=n_sub {
        let w = if k == 0 || k == n_sub {
            1.0
        } else if k % 2 == 1 {
            4.0
        } else {
            2.0
        };
        v += &e * q * e.transpose() * w;
        e = &step * e;
    }
    v *= h / n_sub as f64 / 3.0;
    let mut e_t = (a * h).exp();
    for _ in 0..200 {
        let tail = &e_t * &v * e_t.transpose();
        let done = tail.norm() < 1e-18 * v.norm();
        v += tail;
        if done {
            break;
        }
        e_t = &e_t * &e_t;
    }
    v
}

/// Random `n x n` drift matrix whose spectral abscissa is `-margin`, and a
/// random positive semidefinite diffusion matrix.
pub fn random_stable_system(rng: &mut StdRng, n: usize) -> (DMatrix<f64>, DMatrix<f64>) {
    let m = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    let abscissa = nalgebra::Schur::new(m.clone())
        .complex_eigenvalues()
        .iter()
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max);
    let margin: f64 = rng.random_range(0.2..1.0);
    let a = m - DMatrix::identity(n, n) * (abscissa + margin);
    let b = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    let q = &b * b.transpose();
    (a, q)
}

pub fn relative_error(x: &DMatrix<f64>, reference: &DMatrix<f64>) -> f64 {
    (x - reference).norm() / reference.norm()
}
