//! Ready-made documents for the published figure grids.
//!
//! Every preset starts from [`Config::reference`]: `ωa,m/2π = 10 GHz`,
//! `ωb1/2π = 20.15 MHz`, `ωb2/2π = 20.11 MHz`, `λc = 1550 nm`,
//! `γa,m,c/2π = 1 MHz`, `γb1,b2/2π = 100 Hz`, `Gm/2π = 0.7 MHz`,
//! `Gc/2π = 2.7 MHz`, `T = 10 mK`, at the detunings `Δa = Δ̃m = -ωb1`,
//! `Δ̃c = ωb2`.
//!
//! | name | job | axes |
//! |---|---|---|
//! | `fig2a`, `fig2b` | `E(a,c)` | `Δ̃m (= Δa)`, `Δ̃c`; `gma/2π` = 1 and 2.5 MHz, `gb1b2/2π = 1.5 MHz` |
//! | `fig2c`, `fig2d` | `E(a,c)`, `E(m,c)` | `gma`, `gb1b2` |
//! | `fig3a`..`fig3d` | output spectrum | `gb1b2/2π` = 0.5, 1.0, 1.5, 2.0 MHz |
//! | `fig4` | `E(a,c)` | `Gm`, `Gc` |
//! | `fig5a` | `E(a,c)` | `T`, `γc` |
//! | `fig5b` | `E(a,c)` | `γb1`, `γb2`, log-spaced |

use crate::config::{AxisSection, Config, Scale, SpectrumSection, SweepSection};
use crate::{Error, Result};

pub const PRESETS: [&str; 11] = [
    "fig2a", "fig2b", "fig2c", "fig2d", "fig3a", "fig3b", "fig3c", "fig3d", "fig4", "fig5a", "fig5b",
];

fn axis(paths: &[&str], min: f64, max: f64, count: usize) -> AxisSection {
    AxisSection {
        paths: paths.iter().map(|p| p.to_string()).collect(),
        min,
        max,
        count,
        scale: Scale::Linear,
    }
}

fn sweep(base: Config, observable: &str, x: AxisSection, y: AxisSection) -> Config {
    Config {
        sweep: Some(SweepSection {
            observable: observable.into(),
            x,
            y,
        }),
        ..base
    }
}

fn detuning_map(g_ma_hz: f64) -> Config {
    let mut c = Config::reference();
    c.system.g_ma_hz = g_ma_hz;
    c.system.g_b1b2_hz = 1.5e6;
    let (wb1, wb2) = (c.system.omega_b1_hz, c.system.omega_b2_hz);
    // ±2ωb with step ωb/10 puts (-ωb1, ωb2) on the grid
    sweep(
        c,
        "E(a,c)",
        axis(&["couplings.delta_m_eff_hz", "system.delta_a_hz"], -2.0 * wb1, 2.0 * wb1, 41),
        axis(&["couplings.delta_c_eff_hz"], -2.0 * wb2, 2.0 * wb2, 41),
    )
}

fn coupling_map(observable: &str) -> Config {
    sweep(
        Config::reference(),
        observable,
        axis(&["system.g_ma_hz"], 0.0, 3.0e6, 31),
        axis(&["system.g_b1b2_hz"], 0.0, 4.0e6, 41),
    )
}

fn spectrum(g_b1b2_hz: f64) -> Config {
    let mut c = Config::reference();
    c.system.g_b1b2_hz = g_b1b2_hz;
    let center_hz = 0.5 * (c.system.omega_b1_hz + c.system.omega_b2_hz);
    Config {
        spectrum: Some(SpectrumSection {
            center_hz,
            half_span_hz: 8e6,
            points: 4001,
        }),
        ..c
    }
}

/// Fully resolved document for the preset `name`.
pub fn figure_preset(name: &str) -> Result<Config> {
    let config = match name {
        "fig2a" => detuning_map(1.0e6),
        "fig2b" => detuning_map(2.5e6),
        "fig2c" => coupling_map("E(a,c)"),
        "fig2d" => coupling_map("E(m,c)"),
        "fig3a" => spectrum(0.5e6),
        "fig3b" => spectrum(1.0e6),
        "fig3c" => spectrum(1.5e6),
        "fig3d" => spectrum(2.0e6),
        "fig4" => sweep(
            Config::reference(),
            "E(a,c)",
            axis(&["couplings.g_m_hz"], 0.0, 2.0e6, 41),
            axis(&["couplings.g_c_hz"], 0.0, 5.0e6, 51),
        ),
        "fig5a" => sweep(
            Config::reference(),
            "E(a,c)",
            axis(&["system.temperature_k"], 0.0, 0.3, 31),
            axis(&["system.gamma_c_hz"], 0.5e6, 25.0e6, 50),
        ),
        "fig5b" => {
            let log = |path: &str| AxisSection {
                scale: Scale::Log,
                ..axis(&[path], 10.0, 1.0e6, 26)
            };
            sweep(Config::reference(), "E(a,c)", log("system.gamma_b1_hz"), log("system.gamma_b2_hz"))
        }
        other => {
            return Err(Error::Usage(format!(
                "unknown preset `{other}`; available presets: {}",
                PRESETS.join(", ")
            )))
        }
    };
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_validates_and_round_trips() {
        for name in PRESETS {
            let c = figure_preset(name).unwrap();
            c.validate().unwrap();
            let text = c.to_toml();
            assert_eq!(Config::from_toml(&text).unwrap().to_toml(), text, "{name}");
            assert!(c.sweep.is_some() != c.spectrum.is_some(), "{name}");
        }
    }

    #[test]
    fn fig4_axes() {
        let c = figure_preset("fig4").unwrap();
        let s = c.sweep.unwrap();
        assert_eq!(s.x.paths, ["couplings.g_m_hz"]);
        assert_eq!(s.y.paths, ["couplings.g_c_hz"]);
        assert_eq!(c.system.g_ma_hz, 1.5e6);
        assert_eq!(c.system.g_b1b2_hz, 2.4e6);
    }

    #[test]
    fn fig5b_is_log_spaced() {
        let s = figure_preset("fig5b").unwrap().sweep.unwrap();
        assert_eq!(s.x.scale, Scale::Log);
        assert_eq!(s.y.scale, Scale::Log);
        assert_eq!(s.x.paths, ["system.gamma_b1_hz"]);
        assert_eq!(s.y.paths, ["system.gamma_b2_hz"]);
    }

    #[test]
    fn unknown_preset_lists_names() {
        match figure_preset("fig6") {
            Err(Error::Usage(msg)) => assert!(msg.contains("fig2a") && msg.contains("fig5b")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn detuning_grid_contains_optimum() {
        let c = figure_preset("fig2a").unwrap();
        let s = c.sweep.unwrap();
        let xs = s.x.values();
        let ys = s.y.values();
        assert!(xs.iter().any(|&x| (x + c.system.omega_b1_hz).abs() < 1e-6));
        assert!(ys.iter().any(|&y| (y - c.system.omega_b2_hz).abs() < 1e-6));
    }
}
