//! Acceptance criteria. Each test prints one `criterion N [PASS|FAIL]` line
//! (run with `--nocapture` to see them) and fails when the criterion fails.

mod common;

use std::time::Instant;

use common::verdict;
use magnomech::constants::{angular, hertz};
use magnomech::lyapunov::{lyapunov_residual, solve_continuous_lyapunov, PHYSICALITY_FLOOR};
use magnomech::measures::log_negativity;
use magnomech::model::{build_diffusion_matrix, build_drift_matrix};
use magnomech::presets::figure_preset;
use magnomech::steady::{drive_field_from_power, solve_self_consistent, yig_spin_count, DriveSpec, MagnonDrive};
use magnomech::sweep::{run_point, run_spectrum, run_sweep, SweepResult, SweepSpec};
use magnomech::{BipartiteCM, Error, Mode, SystemParams};
use nalgebra::{DMatrix, Matrix4};
use rayon::prelude::*;

/// Optimal couplings of the `(G_m, G_c)` map.
fn fig4_optimum() -> SystemParams {
    let mut p = SystemParams::reference();
    p.g_m = angular(1.4e6);
    p.g_c = angular(3.2e6);
    p
}

/// `E_ac`, or `None` when the point is unstable.
fn e_ac(p: &SystemParams) -> Option<f64> {
    run_point(p).unwrap().entanglement(Mode::A, Mode::C)
}

/// Smallest `x` in `[lo, hi]` where `E_ac` vanishes (or the point turns
/// unstable): a coarse scan followed by bisection.
fn vanishing_point(lo: f64, hi: f64, at: impl Fn(f64) -> SystemParams) -> Option<f64> {
    let alive = |x: f64| e_ac(&at(x)).is_some_and(|e| e > 0.0);
    let steps = 200;
    let mut prev = lo;
    if !alive(lo) {
        return None;
    }
    for k in 1..=steps {
        let x = lo + (hi - lo) * k as f64 / steps as f64;
        if !alive(x) {
            let (mut a, mut b) = (prev, x);
            for _ in 0..60 {
                let mid = 0.5 * (a + b);
                if alive(mid) {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            return Some(0.5 * (a + b));
        }
        prev = x;
    }
    None
}

fn sweep_preset(name: &str) -> SweepResult {
    let spec = SweepSpec::from_config(&figure_preset(name).unwrap()).unwrap();
    run_sweep(&spec, None).unwrap()
}

#[test]
fn criterion_01_figure4_optimum_entanglement() {
    let start = Instant::now();
    let e = run_point(&fig4_optimum()).unwrap().entanglement(Mode::C, Mode::A).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    let pass = (e - 0.17).abs() <= 0.01 && elapsed < 1.0;
    let detail = format!("E_ca = {e:.4} (target 0.17 ± 0.01), {elapsed:.3} s");
    assert!(verdict(1, "E_ca at G_m = 1.4 MHz, G_c = 3.2 MHz", pass, &detail), "{detail}");
}

#[test]
fn criterion_02_mechanical_ground_state_cooling() {
    let r = run_point(&SystemParams::reference()).unwrap();
    let (n1, n2) = (r.occupation(Mode::B1).unwrap(), r.occupation(Mode::B2).unwrap());
    let pass = (n1 - 0.11).abs() <= 0.01 && (n2 - 0.08).abs() <= 0.01;
    let detail = format!("n_b1 = {n1:.4} (target 0.11 ± 0.01), n_b2 = {n2:.4} (target 0.08 ± 0.01)");
    assert!(verdict(2, "effective phonon numbers", pass, &detail), "{detail}");
}

#[test]
fn criterion_03_optimal_detunings() {
    let a = sweep_preset("fig2a");
    let b = sweep_preset("fig2b");
    let p = SystemParams::reference();
    let (target_x, target_y) = (hertz(-p.omega_b1), hertz(p.omega_b2));
    let dx = a.xs[1] - a.xs[0];
    let dy = a.ys[1] - a.ys[0];
    let arg = a.argmax();
    let located = !arg.is_empty()
        && arg.iter().all(|&k| {
            let q = &a.points[k];
            (q.x - target_x).abs() <= dx * (1.0 + 1e-9) && (q.y - target_y).abs() <= dy * (1.0 + 1e-9)
        });
    let (max_a, max_b) = (a.max_value().unwrap(), b.max_value().unwrap());
    let pass = located && max_b < max_a;
    let first = &a.points[arg[0]];
    let detail = format!(
        "argmax at ({:.3}, {:.3}) MHz vs ({:.3}, {:.3}); max E_ac {max_a:.4} (g_ma 1 MHz) vs {max_b:.4} (g_ma 2.5 MHz)",
        first.x / 1e6,
        first.y / 1e6,
        target_x / 1e6,
        target_y / 1e6
    );
    assert!(verdict(3, "optimal detunings and over-coupling", pass, &detail), "{detail}");
}

#[test]
fn criterion_04_robustness_thresholds() {
    let at_temperature = |t: f64| SystemParams { temperature: t, ..fig4_optimum() };
    let at_gamma_c = |hz: f64| SystemParams { gamma_c: angular(hz), ..fig4_optimum() };
    let t_max = vanishing_point(0.01, 1.0, at_temperature);
    let gc_max = vanishing_point(1e6, 40e6, at_gamma_c);

    let damped = |b1: f64, b2: f64| {
        let p = SystemParams { gamma_b1: angular(b1), gamma_b2: angular(b2), ..fig4_optimum() };
        e_ac(&p).unwrap_or(0.0)
    };
    let e_mid = [damped(5e4, 100.0), damped(100.0, 5e4)];
    let e_high = [damped(1e6, 100.0), damped(100.0, 1e6)];

    let t_ok = t_max.is_some_and(|t| (0.15..=0.25).contains(&t));
    let gc_ok = gc_max.is_some_and(|g| (8e6..=12e6).contains(&g));
    let gb_ok = e_mid.iter().all(|&e| e > 0.0) && e_high.iter().all(|&e| e <= 1e-3);
    let detail = format!(
        "T* = {} K (want 0.15-0.25), gamma_c* = {} MHz (want 8-12), E at gamma_b = 5e4 Hz: {:.4}/{:.4}, at 1e6 Hz: {:.4}/{:.4}",
        t_max.map_or("none".into(), |t| format!("{t:.4}")),
        gc_max.map_or("none".into(), |g| format!("{:.3}", g / 1e6)),
        e_mid[0],
        e_mid[1],
        e_high[0],
        e_high[1]
    );

    // the same thresholds at the (G_m, G_c) = (0.7, 2.7) MHz point, for reference
    let reference = SystemParams::reference();
    let t_ref = vanishing_point(0.01, 1.0, |t| SystemParams { temperature: t, ..reference.clone() });
    let gc_ref = vanishing_point(1e6, 40e6, |hz| SystemParams { gamma_c: angular(hz), ..reference.clone() });
    let diagonal = damped(5e4, 5e4);
    println!(
        "criterion  4 [INFO] at G_m = 0.7, G_c = 2.7 MHz: T* = {:?} K, gamma_c* = {:?} MHz; E at gamma_b1 = gamma_b2 = 5e4 Hz: {diagonal:.4}",
        t_ref,
        gc_ref.map(|g| g / 1e6)
    );
    let pass = t_ok && gc_ok && gb_ok;
    assert!(verdict(4, "robustness thresholds", pass, &detail), "{detail}");
}

#[test]
fn criterion_05_spectral_splitting() {
    let mut pass = true;
    let mut parts = vec![];
    for (name, g) in [("fig3a", 0.5e6), ("fig3b", 1.0e6), ("fig3c", 1.5e6), ("fig3d", 2.0e6)] {
        let start = Instant::now();
        let trace = match run_spectrum(&figure_preset(name).unwrap()) {
            Ok(trace) => trace,
            Err(Error::Unstable { max_real_eig }) => {
                pass = false;
                parts.push(format!(
                    "g = {:.1} MHz: unstable (max Re λ = {max_real_eig:.3e} rad/s), no spectrum",
                    g / 1e6
                ));
                continue;
            }
            Err(e) => panic!("{name}: {e}"),
        };
        let elapsed = start.elapsed().as_secs_f64();
        let peaks = trace.peaks(0.1);
        pass &= elapsed < 10.0;
        if g == 0.5e6 {
            pass &= peaks.len() == 1;
            parts.push(format!("g = 0.5 MHz: {} peak(s) ({elapsed:.2} s)", peaks.len()));
        } else {
            let sep = match (peaks.first(), peaks.last()) {
                (Some(&lo), Some(&hi)) if peaks.len() >= 2 => hertz(trace.points[hi].omega - trace.points[lo].omega),
                _ => 0.0,
            };
            pass &= (sep - 2.0 * g).abs() <= 0.1 * 2.0 * g;
            parts.push(format!(
                "g = {:.1} MHz: {} peaks, separation {:.3} MHz vs {:.1} ({elapsed:.2} s)",
                g / 1e6,
                peaks.len(),
                sep / 1e6,
                2.0 * g / 1e6
            ));
        }
    }
    let detail = parts.join("; ");
    assert!(verdict(5, "normal-mode splitting 2 g_b1b2", pass, &detail), "{detail}");
}

#[test]
fn criterion_06_lyapunov_correctness() {
    // every solve on the (G_m, G_c) grid
    let spec = SweepSpec::from_config(&figure_preset("fig4").unwrap()).unwrap();
    let (xs, ys) = (spec.x.values(), spec.y.values());
    let residuals: Vec<f64> = (0..xs.len() * ys.len())
        .into_par_iter()
        .filter_map(|k| {
            let p = spec.point_config(xs[k % xs.len()], ys[k / xs.len()]).unwrap().params().unwrap();
            let a = build_drift_matrix(&p).unwrap().to_dmatrix();
            let d = build_diffusion_matrix(&p).unwrap().to_dmatrix();
            solve_continuous_lyapunov(&a, &d).ok().map(|v| lyapunov_residual(&a, &v, &d))
        })
        .collect();
    let worst_residual = residuals.iter().copied().fold(0.0, f64::max);

    let mut rng = common::rng(6);
    let mut worst_oracle: f64 = 0.0;
    for _ in 0..100 {
        let (a, q) = common::random_stable_system(&mut rng, 6);
        let v: DMatrix<f64> = solve_continuous_lyapunov(&a, &q).unwrap();
        worst_oracle = worst_oracle.max(common::relative_error(&v, &common::lyapunov_by_integration(&a, &q)));
    }
    let pass = !residuals.is_empty() && worst_residual < 1e-10 && worst_oracle < 1e-6;
    let detail = format!(
        "max residual {worst_residual:.2e} over {} solves; max deviation from time integration {worst_oracle:.2e} over 100 systems",
        residuals.len()
    );
    assert!(verdict(6, "Lyapunov residual and integration oracle", pass, &detail), "{detail}");
}

#[test]
fn criterion_07_negativity_oracle() {
    let mut rng = common::rng(7);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let v4 = common::random_physical_cm(&mut rng);
        let e = log_negativity(&BipartiteCM::new(v4, (Mode::C, Mode::A))).unwrap().value;
        worst = worst.max((e - common::log_negativity_oracle(&v4)).abs());
    }
    let mut worst_tmsv: f64 = 0.0;
    for r in [0.1f64, 0.5, 1.0] {
        let (c, s) = ((2.0 * r).cosh() / 2.0, (2.0 * r).sinh() / 2.0);
        #[rustfmt::skip]
        let v4 = Matrix4::new(
            c, 0.0, s, 0.0,
            0.0, c, 0.0, -s,
            s, 0.0, c, 0.0,
            0.0, -s, 0.0, c,
        );
        let e = log_negativity(&BipartiteCM::new(v4, (Mode::C, Mode::A))).unwrap().value;
        worst_tmsv = worst_tmsv.max((e - 2.0 * r).abs());
    }
    let pass = worst < 1e-8 && worst_tmsv < 1e-8;
    let detail = format!("max deviation {worst:.2e} over 1000 states; TMSV max deviation {worst_tmsv:.2e}");
    assert!(verdict(7, "log-negativity oracle", pass, &detail), "{detail}");
}

#[test]
fn criterion_08_physicality() {
    let mut worst_floor = f64::INFINITY;
    let mut stable_points = 0;
    let mut failures = vec![];
    for name in ["fig2a", "fig2b", "fig2c", "fig4", "fig5a", "fig5b"] {
        let spec = SweepSpec::from_config(&figure_preset(name).unwrap()).unwrap();
        let (xs, ys) = (spec.x.values(), spec.y.values());
        let floors: Vec<Result<Option<f64>, String>> = (0..xs.len() * ys.len())
            .into_par_iter()
            .map(|k| {
                let p = spec.point_config(xs[k % xs.len()], ys[k / xs.len()]).unwrap().params().unwrap();
                run_point(&p)
                    .map(|r| r.measures.map(|m| m.physicality_floor))
                    .map_err(|e| e.to_string())
            })
            .collect();
        for f in floors {
            match f {
                Ok(Some(floor)) => {
                    stable_points += 1;
                    worst_floor = worst_floor.min(floor);
                }
                Ok(None) => {}
                Err(e) => failures.push(format!("{name}: {e}")),
            }
        }
    }
    // spectra exist only at stable points
    let mut spectra_ok = true;
    let mut traces = 0;
    for name in ["fig3a", "fig3b", "fig3c", "fig3d"] {
        match run_spectrum(&figure_preset(name).unwrap()) {
            Ok(trace) => {
                traces += 1;
                spectra_ok &= trace.points.iter().all(|q| q.density.is_finite() && q.density >= 0.0);
            }
            Err(Error::Unstable { .. }) => {}
            Err(e) => failures.push(format!("{name}: {e}")),
        }
    }
    let pass = failures.is_empty() && worst_floor >= PHYSICALITY_FLOOR && spectra_ok;
    let detail = format!(
        "lowest eigenvalue of V + iΩ/2 = {worst_floor:.3e} over {stable_points} stable points, {} failures; {traces} stable spectra non-negative: {spectra_ok}",
        failures.len()
    );
    assert!(verdict(8, "bona fide states and spectra", pass, &detail), "{detail} {failures:?}");
}

#[test]
fn criterion_09_complementarity() {
    let spec = SweepSpec::from_config(&figure_preset("fig2c").unwrap()).unwrap();
    let (xs, ys) = (spec.x.values(), spec.y.values());
    let pairs: Vec<(f64, f64)> = (0..xs.len() * ys.len())
        .into_par_iter()
        .filter_map(|k| {
            let p = spec.point_config(xs[k % xs.len()], ys[k / xs.len()]).unwrap().params().unwrap();
            let r = run_point(&p).unwrap();
            Some((r.entanglement(Mode::A, Mode::C)?, r.entanglement(Mode::M, Mode::C)?))
        })
        .filter(|&(ac, mc)| ac > 0.0 && mc > 0.0)
        .collect();
    let n = pairs.len() as f64;
    let (ma, mm) = (pairs.iter().map(|p| p.0).sum::<f64>() / n, pairs.iter().map(|p| p.1).sum::<f64>() / n);
    let cov: f64 = pairs.iter().map(|p| (p.0 - ma) * (p.1 - mm)).sum();
    let va: f64 = pairs.iter().map(|p| (p.0 - ma).powi(2)).sum();
    let vm: f64 = pairs.iter().map(|p| (p.1 - mm).powi(2)).sum();
    let corr = cov / (va * vm).sqrt();
    let pass = pairs.len() >= 3 && corr < 0.0;
    let detail = format!("Pearson correlation {corr:.4} over {} points with E_ac, E_mc > 0", pairs.len());
    assert!(verdict(9, "E_ac / E_mc complementarity", pass, &detail), "{detail}");
}

#[test]
fn criterion_10_power_conversions() {
    let h = drive_field_from_power(4e-3, 100e-6).unwrap();
    let p = SystemParams::reference();
    let drive = DriveSpec {
        magnon: MagnonDrive::Power {
            p0: 4e-3,
            radius: 100e-6,
            spin_count: yig_spin_count(100e-6),
        },
        laser_power: 30e-3,
        laser_frequency: p.omega_c() - p.omega_b2,
    };
    let s = solve_self_consistent(&p, -p.omega_b1, p.omega_b2, &drive).unwrap();
    let (gm, gc) = (hertz(s.g_m), hertz(s.g_c));
    let within = |x: f64, target: f64| x >= target / 1.5 && x <= target * 1.5;
    let pass = (h - 3.3e-5).abs() <= 0.05 * 3.3e-5 && within(gm, 0.7e6) && within(gc, 2.7e6);
    let detail = format!(
        "H_d = {h:.4e} T (3.3e-5 ± 5%), G_m/2π = {:.3} MHz (0.7, ×1.5), G_c/2π = {:.3} MHz (2.7, ×1.5)",
        gm / 1e6,
        gc / 1e6
    );
    assert!(verdict(10, "drive power conversions", pass, &detail), "{detail}");
}
