//! Single-point reports and two-parameter sweeps.

use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{AxisSection, Config};
use crate::lyapunov::{is_stable, solve_lyapunov, StabilityReport};
use crate::measures::{effective_occupation, entanglement, Measure, Negativity};
use crate::model::{build_diffusion_matrix, build_drift_matrix, SystemParams};
use crate::spectrum::{output_spectrum, uniform_grid, SpectrumTrace};
use crate::constants::angular;
use crate::{Error, Mode, Result};

/// Absolute tolerance within which grid values count as tied for the maximum.
pub const ARGMAX_TIE_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairEntanglement {
    pub modes: (Mode, Mode),
    pub negativity: Negativity,
}

/// Measures of a stable point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointMeasures {
    /// Logarithmic negativity of all ten mode pairs.
    pub entanglement: Vec<PairEntanglement>,
    /// Effective occupation of every mode, in mode order.
    pub occupation: Vec<(Mode, Measure)>,
    /// Smallest eigenvalue of `V + (i/2) Ω`.
    pub physicality_floor: f64,
}

/// Everything computed at one parameter point. `measures` is absent when the
/// point is unstable.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointReport {
    pub stability: StabilityReport,
    pub measures: Option<PointMeasures>,
}

impl PointReport {
    /// `E_N` between `i` and `j` (in either order).
    pub fn entanglement(&self, i: Mode, j: Mode) -> Option<f64> {
        let m = self.measures.as_ref()?;
        m.entanglement
            .iter()
            .find(|e| e.modes == (i, j) || e.modes == (j, i))
            .map(|e| e.negativity.value)
    }

    pub fn occupation(&self, mode: Mode) -> Option<f64> {
        let m = self.measures.as_ref()?;
        m.occupation.iter().find(|(k, _)| *k == mode).map(|(_, n)| n.value)
    }

    /// Whether any measure needed round-off clamping.
    pub fn clamped(&self) -> bool {
        self.measures.as_ref().is_some_and(|m| {
            m.entanglement.iter().any(|e| e.negativity.clamped) || m.occupation.iter().any(|(_, n)| n.clamped)
        })
    }
}

impl PointReport {
    /// `quantity,value,clamped` rows; measures are omitted at unstable points.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("quantity,value,clamped\n");
        let _ = writeln!(out, "stable,{},", self.stability.stable as u8);
        let _ = writeln!(out, "marginal,{},", self.stability.is_marginal() as u8);
        let _ = writeln!(out, "max_real_eig,{},", float(self.stability.max_real_eig));
        if let Some(m) = &self.measures {
            for e in &m.entanglement {
                let (i, j) = e.modes;
                let _ = writeln!(out, "E({i},{j}),{},{}", float(e.negativity.value), e.negativity.clamped as u8);
            }
            for (mode, n) in &m.occupation {
                let _ = writeln!(out, "nbar({mode}),{},{}", float(n.value), n.clamped as u8);
            }
            let _ = writeln!(out, "physicality_floor,{},", float(m.physicality_floor));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("point reports always serialize");
        s.push('\n');
        s
    }
}

/// Stability, covariance matrix and measures for one parameter set.
pub fn run_point(params: &SystemParams) -> Result<PointReport> {
    let drift = build_drift_matrix(params)?;
    let stability = is_stable(&drift)?;
    if !stability.stable {
        return Ok(PointReport {
            stability,
            measures: None,
        });
    }
    let v = solve_lyapunov(&drift, &build_diffusion_matrix(params)?)?;
    let physicality_floor = v.physicality_floor();
    if !v.is_physical() {
        return Err(Error::Physicality(format!(
            "covariance matrix violates the uncertainty relation (floor {physicality_floor:.3e})"
        )));
    }
    let entanglement = Mode::pairs()
        .map(|(i, j)| {
            Ok(PairEntanglement {
                modes: (i, j),
                negativity: entanglement(&v, i, j)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let occupation = Mode::ALL
        .iter()
        .map(|&mode| Ok((mode, effective_occupation(&v, mode)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(PointReport {
        stability,
        measures: Some(PointMeasures {
            entanglement,
            occupation,
            physicality_floor,
        }),
    })
}

/// Quantity recorded at every sweep point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Observable {
    Entanglement(Mode, Mode),
    Occupation(Mode),
    /// `-max Re λ` of the drift matrix (rad/s).
    Margin,
}

impl Observable {
    pub fn evaluate(&self, report: &PointReport) -> Option<f64> {
        match *self {
            Observable::Entanglement(i, j) => report.entanglement(i, j),
            Observable::Occupation(mode) => report.occupation(mode),
            Observable::Margin => report.measures.as_ref().map(|_| -report.stability.max_real_eig),
        }
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Observable::Entanglement(i, j) => write!(f, "E({i},{j})"),
            Observable::Occupation(mode) => write!(f, "nbar({mode})"),
            Observable::Margin => f.write_str("margin"),
        }
    }
}

impl FromStr for Observable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Config(format!("unknown observable `{s}` (expected E(i,j), nbar(j) or margin)"));
        let args = |prefix: &str| {
            s.strip_prefix(prefix)
                .and_then(|r| r.strip_prefix('('))
                .and_then(|r| r.strip_suffix(')'))
        };
        if s == "margin" {
            return Ok(Observable::Margin);
        }
        if let Some(inner) = args("E") {
            let (i, j) = inner.split_once(',').ok_or_else(bad)?;
            let (i, j): (Mode, Mode) = (i.parse().map_err(|_| bad())?, j.parse().map_err(|_| bad())?);
            if i == j {
                return Err(bad());
            }
            return Ok(Observable::Entanglement(i, j));
        }
        if let Some(inner) = args("nbar") {
            return Ok(Observable::Occupation(inner.parse().map_err(|_| bad())?));
        }
        Err(bad())
    }
}

/// A fully validated sweep: a base document, the observable and two axes.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub base: Config,
    pub observable: Observable,
    pub x: AxisSection,
    pub y: AxisSection,
}

impl SweepSpec {
    /// Reads the `[sweep]` table of `config`. Every parameter path is checked
    /// before anything is computed.
    pub fn from_config(config: &Config) -> Result<Self> {
        config.validate()?;
        let sweep = config
            .sweep
            .as_ref()
            .ok_or_else(|| Error::Config("the document has no [sweep] table".into()))?;
        Ok(SweepSpec {
            base: config.clone(),
            observable: sweep.observable.parse()?,
            x: sweep.x.clone(),
            y: sweep.y.clone(),
        })
    }

    /// Document for grid point `(x, y)`.
    pub fn point_config(&self, x: f64, y: f64) -> Result<Config> {
        let mut c = self.base.clone();
        for path in &self.x.paths {
            c.set(path, x)?;
        }
        for path in &self.y.paths {
            c.set(path, y)?;
        }
        Ok(c)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub x: f64,
    pub y: f64,
    /// Observable value; `None` at unstable points.
    pub value: Option<f64>,
    pub stable: bool,
    pub marginal: bool,
    pub clamped: bool,
    pub max_real_eig: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    /// Seconds since the Unix epoch, only when requested, so that output is
    /// otherwise reproducible byte for byte.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
    /// The base document, as TOML.
    pub config: String,
}

impl Provenance {
    pub fn new(config: &Config, stamp: bool) -> Self {
        Provenance {
            tool: "magnomech".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            timestamp: stamp.then(|| {
                std::time::SystemTime::now()
                    .duration_since(std::time::UNIX_EPOCH)
                    .map(|d| d.as_secs())
                    .unwrap_or(0)
            }),
            config: config.to_toml(),
        }
    }
}

/// Sweep output. `points` is row-major with `x` varying fastest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub provenance: Provenance,
    pub observable: String,
    pub x_paths: Vec<String>,
    pub y_paths: Vec<String>,
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub points: Vec<SweepPoint>,
}

/// Evaluates `spec` on its grid. `threads = None` uses the global rayon
/// pool. The result does not depend on the thread count.
pub fn run_sweep(spec: &SweepSpec, threads: Option<usize>) -> Result<SweepResult> {
    let xs = spec.x.values();
    let ys = spec.y.values();
    let eval = || {
        (0..xs.len() * ys.len())
            .into_par_iter()
            .map(|k| {
                let (x, y) = (xs[k % xs.len()], ys[k / xs.len()]);
                let params = spec.point_config(x, y)?.params()?;
                let report = run_point(&params)?;
                Ok(SweepPoint {
                    x,
                    y,
                    value: spec.observable.evaluate(&report),
                    stable: report.stability.stable,
                    marginal: report.stability.is_marginal(),
                    clamped: report.clamped(),
                    max_real_eig: report.stability.max_real_eig,
                })
            })
            .collect::<Result<Vec<_>>>()
    };
    let points = match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Usage(format!("cannot start {n} worker threads: {e}")))?
            .install(eval)?,
        None => eval()?,
    };
    Ok(SweepResult {
        provenance: Provenance::new(&spec.base, false),
        observable: spec.observable.to_string(),
        x_paths: spec.x.paths.clone(),
        y_paths: spec.y.paths.clone(),
        xs,
        ys,
        points,
    })
}

/// Formats `v` with 17 significant digits.
fn float(v: f64) -> String {
    format!("{v:.16e}")
}

impl SweepResult {
    pub fn nx(&self) -> usize {
        self.xs.len()
    }

    pub fn ny(&self) -> usize {
        self.ys.len()
    }

    pub fn at(&self, ix: usize, iy: usize) -> &SweepPoint {
        &self.points[iy * self.nx() + ix]
    }

    /// Indices of every point within [`ARGMAX_TIE_TOL`] of the largest value.
    pub fn argmax(&self) -> Vec<usize> {
        let best = self
            .points
            .iter()
            .filter_map(|p| p.value)
            .fold(f64::NEG_INFINITY, f64::max);
        if best == f64::NEG_INFINITY {
            return vec![];
        }
        self.points
            .iter()
            .enumerate()
            .filter(|(_, p)| p.value.is_some_and(|v| best - v <= ARGMAX_TIE_TOL))
            .map(|(k, _)| k)
            .collect()
    }

    pub fn max_value(&self) -> Option<f64> {
        self.argmax().first().and_then(|&k| self.points[k].value)
    }

    fn header(&self, out: &mut String) {
        let p = &self.provenance;
        let _ = writeln!(out, "# {} {}", p.tool, p.version);
        if let Some(t) = p.timestamp {
            let _ = writeln!(out, "# timestamp = {t}");
        }
        let _ = writeln!(out, "# observable = {}", self.observable);
        let _ = writeln!(out, "# x = {}", self.x_paths.join(","));
        let _ = writeln!(out, "# y = {}", self.y_paths.join(","));
        let _ = writeln!(out, "# config:");
        for line in p.config.lines() {
            let _ = writeln!(out, "#   {line}");
        }
    }

    /// CSV with a commented provenance header. Unstable points leave
    /// `value` empty and have `stable = 0`.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        self.header(&mut out);
        out.push_str("x,y,value,stable,marginal,clamped,max_real_eig\n");
        for p in &self.points {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                float(p.x),
                float(p.y),
                p.value.map(float).unwrap_or_default(),
                p.stable as u8,
                p.marginal as u8,
                p.clamped as u8,
                float(p.max_real_eig)
            );
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("sweep results always serialize");
        s.push('\n');
        s
    }

    /// Gnuplot nonuniform matrix: the first row holds the x values, every
    /// following row starts with its y value. Unstable points are `NaN`.
    pub fn to_gnuplot_matrix(&self) -> String {
        let mut out = String::new();
        self.header(&mut out);
        out.push_str(&self.nx().to_string());
        for &x in &self.xs {
            out.push(' ');
            out.push_str(&float(x));
        }
        out.push('\n');
        for (iy, &y) in self.ys.iter().enumerate() {
            out.push_str(&float(y));
            for ix in 0..self.nx() {
                out.push(' ');
                match self.at(ix, iy).value {
                    Some(v) => out.push_str(&float(v)),
                    None => out.push_str("NaN"),
                }
            }
            out.push('\n');
        }
        out
    }
}

/// Output spectrum of the point described by `config`, on its `[spectrum]`
/// grid or the default grid.
pub fn run_spectrum(config: &Config) -> Result<SpectrumTrace> {
    let (params, steady) = config.resolve()?;
    let stability = is_stable(&build_drift_matrix(&params)?)?;
    if !stability.stable {
        return Err(Error::Unstable {
            max_real_eig: stability.max_real_eig,
        });
    }
    let grid = match &config.spectrum {
        Some(s) => uniform_grid(angular(s.center_hz), angular(s.half_span_hz), s.points),
        None => crate::spectrum::default_grid(&params),
    };
    output_spectrum(&params, &steady, &grid)
}
