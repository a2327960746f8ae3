//! TOML configuration documents.
//!
//! Every frequency, rate and coupling is given as an ordinary frequency
//! `ν = ω/2π` in Hz and converted to angular units once, when the document is
//! resolved into [`SystemParams`]. Temperatures are in K, lengths in m and
//! powers in W.
//!
//! A document describes one parameter point. The effective couplings either
//! come directly from a `[couplings]` table or are derived from drive powers
//! in a `[drive]` table; exactly one of the two must be present. Optional
//! `[sweep]` and `[spectrum]` tables describe batch jobs over that point.
//!
//! ```toml
//! schema = 1
//!
//! [system]
//! omega_a_hz = 10e9
//! omega_m_hz = 10e9
//! omega_b1_hz = 20.15e6
//! omega_b2_hz = 20.11e6
//! lambda_c_m = 1550e-9
//! gamma_a_hz = 1e6
//! gamma_m_hz = 1e6
//! gamma_c_hz = 1e6
//! gamma_b1_hz = 100.0
//! gamma_b2_hz = 100.0
//! g_ma_hz = 1.5e6
//! g_b1b2_hz = 2.4e6
//! g_mb1_hz = 0.1
//! g_cb2_hz = 100.0
//! delta_a_hz = -20.15e6
//! temperature_k = 0.01
//!
//! [couplings]
//! g_m_hz = 0.7e6
//! g_c_hz = 2.7e6
//! delta_m_eff_hz = -20.15e6
//! delta_c_eff_hz = 20.11e6
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::constants::{angular, hertz};
use crate::model::SystemParams;
use crate::steady::{solve_self_consistent, yig_spin_count, DriveSpec, MagnonDrive, SteadyState};
use crate::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub schema: u32,
    pub system: SystemSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub couplings: Option<CouplingSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub drive: Option<DriveSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<SpectrumSection>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSection {
    pub omega_a_hz: f64,
    pub omega_m_hz: f64,
    pub omega_b1_hz: f64,
    pub omega_b2_hz: f64,
    pub lambda_c_m: f64,
    pub gamma_a_hz: f64,
    pub gamma_m_hz: f64,
    pub gamma_c_hz: f64,
    pub gamma_b1_hz: f64,
    pub gamma_b2_hz: f64,
    pub g_ma_hz: f64,
    pub g_b1b2_hz: f64,
    pub g_mb1_hz: f64,
    pub g_cb2_hz: f64,
    pub delta_a_hz: f64,
    pub temperature_k: f64,
}

/// Effective couplings and detunings given directly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingSection {
    pub g_m_hz: f64,
    pub g_c_hz: f64,
    pub delta_m_eff_hz: f64,
    pub delta_c_eff_hz: f64,
}

/// Drive powers and bare detunings; the effective couplings and detunings
/// are solved self-consistently.
///
/// The magnon drive is either `rabi_hz` or `p0_w` with `radius_m`. Without
/// `spin_count` the spin number of a YIG sphere of that radius is used. The
/// laser frequency follows from the optical resonance and `delta_c_hz`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rabi_hz: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p0_w: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spin_count: Option<f64>,
    pub laser_power_w: f64,
    pub delta_m_hz: f64,
    pub delta_c_hz: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    /// `E(i,j)`, `nbar(j)` or `margin`.
    pub observable: String,
    pub x: AxisSection,
    pub y: AxisSection,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    #[default]
    Linear,
    Log,
}

/// One sweep axis. Every path in `paths` is set to the axis value, so that
/// e.g. `Δ̃m` and `Δa` can be swept together.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisSection {
    pub paths: Vec<String>,
    pub min: f64,
    pub max: f64,
    pub count: usize,
    #[serde(default)]
    pub scale: Scale,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumSection {
    pub center_hz: f64,
    pub half_span_hz: f64,
    pub points: usize,
}

impl AxisSection {
    /// Grid values in config units.
    pub fn values(&self) -> Vec<f64> {
        let n = self.count;
        if n == 1 {
            return vec![self.min];
        }
        (0..n)
            .map(|k| {
                let t = k as f64 / (n - 1) as f64;
                match self.scale {
                    Scale::Linear => self.min + t * (self.max - self.min),
                    Scale::Log => (self.min.ln() + t * (self.max.ln() - self.min.ln())).exp(),
                }
            })
            .collect()
    }

    pub fn validate(&self, axis: &str) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(format!("sweep axis {axis}: {msg}")));
        if self.paths.is_empty() {
            return bad("no parameter paths".into());
        }
        if !(self.min.is_finite() && self.max.is_finite()) {
            return bad("range must be finite".into());
        }
        match self.count {
            0 => return bad("count must be at least 1".into()),
            1 if self.min != self.max => return bad("a single-point axis needs min == max".into()),
            1 => {}
            _ if self.min >= self.max => return bad("min must be below max".into()),
            _ => {}
        }
        if self.scale == Scale::Log && !(self.min > 0.0) {
            return bad("log-spaced axis needs a positive range".into());
        }
        Ok(())
    }

    pub fn label(&self) -> String {
        self.paths.join(",")
    }
}

impl Config {
    /// The reference parameter point of [`SystemParams::reference`], written
    /// with exact Hz values.
    pub fn reference() -> Self {
        Config {
            schema: SCHEMA_VERSION,
            system: SystemSection {
                omega_a_hz: 10e9,
                omega_m_hz: 10e9,
                omega_b1_hz: 20.15e6,
                omega_b2_hz: 20.11e6,
                lambda_c_m: 1550e-9,
                gamma_a_hz: 1e6,
                gamma_m_hz: 1e6,
                gamma_c_hz: 1e6,
                gamma_b1_hz: 100.0,
                gamma_b2_hz: 100.0,
                g_ma_hz: 1.5e6,
                g_b1b2_hz: 2.4e6,
                g_mb1_hz: 0.1,
                g_cb2_hz: 100.0,
                delta_a_hz: -20.15e6,
                temperature_k: 0.01,
            },
            couplings: Some(CouplingSection {
                g_m_hz: 0.7e6,
                g_c_hz: 2.7e6,
                delta_m_eff_hz: -20.15e6,
                delta_c_eff_hz: 20.11e6,
            }),
            drive: None,
            sweep: None,
            spectrum: None,
        }
    }

    /// Document describing `params` with a `[couplings]` table.
    pub fn from_params(p: &SystemParams) -> Self {
        Config {
            schema: SCHEMA_VERSION,
            system: SystemSection {
                omega_a_hz: hertz(p.omega_a),
                omega_m_hz: hertz(p.omega_m),
                omega_b1_hz: hertz(p.omega_b1),
                omega_b2_hz: hertz(p.omega_b2),
                lambda_c_m: p.lambda_c,
                gamma_a_hz: hertz(p.gamma_a),
                gamma_m_hz: hertz(p.gamma_m),
                gamma_c_hz: hertz(p.gamma_c),
                gamma_b1_hz: hertz(p.gamma_b1),
                gamma_b2_hz: hertz(p.gamma_b2),
                g_ma_hz: hertz(p.g_ma),
                g_b1b2_hz: hertz(p.g_b1b2),
                g_mb1_hz: hertz(p.g_mb1),
                g_cb2_hz: hertz(p.g_cb2),
                delta_a_hz: hertz(p.delta_a),
                temperature_k: p.temperature,
            },
            couplings: Some(CouplingSection {
                g_m_hz: hertz(p.g_m),
                g_c_hz: hertz(p.g_c),
                delta_m_eff_hz: hertz(p.delta_m_eff),
                delta_c_eff_hz: hertz(p.delta_c_eff),
            }),
            drive: None,
            sweep: None,
            spectrum: None,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let config: Config = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Config::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config documents always serialize")
    }

    /// Structural checks that do not need the physics: schema version, the
    /// couplings/drive choice, and sweep axes.
    pub fn validate(&self) -> Result<()> {
        if self.schema != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "unsupported schema version {} (expected {SCHEMA_VERSION})",
                self.schema
            )));
        }
        match (&self.couplings, &self.drive) {
            (Some(_), Some(_)) => {
                return Err(Error::Config("give either [couplings] or [drive], not both".into()))
            }
            (None, None) => return Err(Error::Config("one of [couplings] or [drive] is required".into())),
            (None, Some(d)) => {
                d.magnon_drive()?;
            }
            _ => {}
        }
        if let Some(sweep) = &self.sweep {
            sweep.x.validate("x")?;
            sweep.y.validate("y")?;
            let mut probe = self.clone();
            for path in sweep.x.paths.iter().chain(&sweep.y.paths) {
                probe.set(path, 0.0)?;
            }
        }
        if let Some(s) = &self.spectrum {
            if s.points < 2 || !(s.half_span_hz > 0.0) || !s.center_hz.is_finite() {
                return Err(Error::Config(
                    "[spectrum] needs points >= 2 and a positive finite half span".into(),
                ));
            }
        }
        Ok(())
    }

    /// Mutable access to the numeric field at `path`, e.g. `system.g_ma_hz`.
    /// Optional drive fields are created on first access.
    fn field_mut(&mut self, path: &str) -> Option<&mut f64> {
        let (section, key) = path.split_once('.')?;
        match section {
            "system" => {
                let s = &mut self.system;
                Some(match key {
                    "omega_a_hz" => &mut s.omega_a_hz,
                    "omega_m_hz" => &mut s.omega_m_hz,
                    "omega_b1_hz" => &mut s.omega_b1_hz,
                    "omega_b2_hz" => &mut s.omega_b2_hz,
                    "lambda_c_m" => &mut s.lambda_c_m,
                    "gamma_a_hz" => &mut s.gamma_a_hz,
                    "gamma_m_hz" => &mut s.gamma_m_hz,
                    "gamma_c_hz" => &mut s.gamma_c_hz,
                    "gamma_b1_hz" => &mut s.gamma_b1_hz,
                    "gamma_b2_hz" => &mut s.gamma_b2_hz,
                    "g_ma_hz" => &mut s.g_ma_hz,
                    "g_b1b2_hz" => &mut s.g_b1b2_hz,
                    "g_mb1_hz" => &mut s.g_mb1_hz,
                    "g_cb2_hz" => &mut s.g_cb2_hz,
                    "delta_a_hz" => &mut s.delta_a_hz,
                    "temperature_k" => &mut s.temperature_k,
                    _ => return None,
                })
            }
            "couplings" => {
                let c = self.couplings.as_mut()?;
                Some(match key {
                    "g_m_hz" => &mut c.g_m_hz,
                    "g_c_hz" => &mut c.g_c_hz,
                    "delta_m_eff_hz" => &mut c.delta_m_eff_hz,
                    "delta_c_eff_hz" => &mut c.delta_c_eff_hz,
                    _ => return None,
                })
            }
            "drive" => {
                let d = self.drive.as_mut()?;
                Some(match key {
                    "rabi_hz" => d.rabi_hz.get_or_insert(0.0),
                    "p0_w" => d.p0_w.get_or_insert(0.0),
                    "radius_m" => d.radius_m.get_or_insert(0.0),
                    "spin_count" => d.spin_count.get_or_insert(0.0),
                    "laser_power_w" => &mut d.laser_power_w,
                    "delta_m_hz" => &mut d.delta_m_hz,
                    "delta_c_hz" => &mut d.delta_c_hz,
                    _ => return None,
                })
            }
            _ => None,
        }
    }

    /// Sets the numeric parameter at `path`.
    pub fn set(&mut self, path: &str, value: f64) -> Result<()> {
        let field = self
            .field_mut(path)
            .ok_or_else(|| Error::Config(format!("unknown parameter path `{path}`")))?;
        *field = value;
        Ok(())
    }

    /// Physical parameters without the effective couplings, which stay zero
    /// until a steady state is attached.
    fn base_params(&self) -> SystemParams {
        let s = &self.system;
        SystemParams {
            omega_a: angular(s.omega_a_hz),
            omega_m: angular(s.omega_m_hz),
            omega_b1: angular(s.omega_b1_hz),
            omega_b2: angular(s.omega_b2_hz),
            lambda_c: s.lambda_c_m,
            gamma_a: angular(s.gamma_a_hz),
            gamma_m: angular(s.gamma_m_hz),
            gamma_c: angular(s.gamma_c_hz),
            gamma_b1: angular(s.gamma_b1_hz),
            gamma_b2: angular(s.gamma_b2_hz),
            g_ma: angular(s.g_ma_hz),
            g_b1b2: angular(s.g_b1b2_hz),
            g_mb1: angular(s.g_mb1_hz),
            g_cb2: angular(s.g_cb2_hz),
            g_m: 0.0,
            g_c: 0.0,
            delta_a: angular(s.delta_a_hz),
            delta_m_eff: 0.0,
            delta_c_eff: 0.0,
            temperature: s.temperature_k,
        }
    }

    /// Resolves the document into a validated parameter set and the
    /// classical steady state it describes.
    pub fn resolve(&self) -> Result<(SystemParams, SteadyState)> {
        self.validate()?;
        let mut params = self.base_params();
        if let Some(c) = &self.couplings {
            params.g_m = angular(c.g_m_hz);
            params.g_c = angular(c.g_c_hz);
            params.delta_m_eff = angular(c.delta_m_eff_hz);
            params.delta_c_eff = angular(c.delta_c_eff_hz);
            let steady = SteadyState::from_effective(&params)?;
            return Ok((params, steady));
        }
        let d = self.drive.as_ref().expect("validated");
        params.validate()?;
        let delta_c = angular(d.delta_c_hz);
        let drive = DriveSpec {
            magnon: d.magnon_drive()?,
            laser_power: d.laser_power_w,
            laser_frequency: params.omega_c() - delta_c,
        };
        let steady = solve_self_consistent(&params, angular(d.delta_m_hz), delta_c, &drive)?;
        Ok((params.with_steady(&steady), steady))
    }

    /// Resolved parameters only.
    pub fn params(&self) -> Result<SystemParams> {
        Ok(self.resolve()?.0)
    }
}

impl DriveSection {
    fn magnon_drive(&self) -> Result<MagnonDrive> {
        match (self.rabi_hz, self.p0_w) {
            (Some(rabi), None) => {
                if self.radius_m.is_some() || self.spin_count.is_some() {
                    return Err(Error::Config("radius_m and spin_count only apply with p0_w".into()));
                }
                Ok(MagnonDrive::Rabi(angular(rabi)))
            }
            (None, Some(p0)) => {
                let radius = self
                    .radius_m
                    .ok_or_else(|| Error::Config("p0_w needs radius_m".into()))?;
                Ok(MagnonDrive::Power {
                    p0,
                    radius,
                    spin_count: self.spin_count.unwrap_or_else(|| yig_spin_count(radius)),
                })
            }
            _ => Err(Error::Config("[drive] needs exactly one of rabi_hz or p0_w".into())),
        }
    }
}
