//! Run configuration: a flat JSON document selecting either a named scenario
//! preset or an inline Bloch-curve definition, the phase method(s) to run,
//! grid and tolerance overrides, and the output destination. Unknown keys are
//! rejected; semantic problems name the offending field.

use std::collections::BTreeMap;

use serde::Deserialize;

use crate::curves::TimeGrid;
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::scenarios::{
    scenario_easy, scenario_parallel_circle, scenario_slater_rotation, scenario_slater_triangle,
    scenario_trefoil, Scenario,
};
use crate::tol::Tolerances;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    scenario: Option<String>,
    params: Option<BTreeMap<String, f64>>,
    curve: Option<RawCurve>,
    method: Option<String>,
    grid: Option<RawGrid>,
    tolerances: Option<BTreeMap<String, f64>>,
    output: Option<RawOutput>,
    seed: Option<u64>,
    gauge_checks: Option<usize>,
    sweep: Option<RawSweep>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCurve {
    kind: String,
    x: String,
    y: String,
    z: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    t0: f64,
    t1: f64,
    steps: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    path: Option<String>,
    format: Option<String>,
}

#[derive(Debug, Deserialize, Clone)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    param: String,
    from: f64,
    to: f64,
    points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodChoice {
    Uhlmann,
    Interferometric,
    Open,
    All,
}

impl MethodChoice {
    pub fn as_str(&self) -> &'static str {
        match self {
            MethodChoice::Uhlmann => "uhlmann",
            MethodChoice::Interferometric => "interferometric",
            MethodChoice::Open => "open",
            MethodChoice::All => "all",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Csv,
    JsonLines,
}

/// What the run computes phases over.
#[derive(Debug, Clone)]
pub enum CurveSource {
    Preset {
        name: String,
        params: BTreeMap<String, f64>,
    },
    InlineBloch {
        x: Expr,
        y: Expr,
        z: Expr,
        grid: TimeGrid,
    },
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub param: String,
    pub from: f64,
    pub to: f64,
    pub points: usize,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub source: CurveSource,
    pub method: MethodChoice,
    pub tolerances: Tolerances,
    pub output_path: Option<String>,
    pub output_format: OutputFormat,
    pub seed: u64,
    pub gauge_checks: usize,
    pub sweep: Option<SweepSpec>,
}

/// A preset scenario: its parameter schema (names, defaults, one-line docs)
/// and whether it carries a driving unitary.
pub struct Preset {
    pub name: &'static str,
    pub summary: &'static str,
    pub params: &'static [(&'static str, f64, &'static str)],
    pub has_unitary: bool,
}

pub const PRESETS: &[Preset] = &[
    Preset {
        name: "precession",
        summary: "qubit ensemble diag(p1, 1-p1) precessing about n = (sinθ, 0, cosθ)",
        params: &[
            ("omega", 1.0, "precession rate ω"),
            ("theta", std::f64::consts::FRAC_PI_3, "axis tilt θ"),
            ("p1", 0.8, "larger eigenvalue of the initial state"),
            ("tau", std::f64::consts::PI, "duration (τ = π/ω closes the loop)"),
            ("steps", 2000.0, "time steps"),
        ],
        has_unitary: true,
    },
    Preset {
        name: "slater-rotation",
        summary: "Bloch vector r ẑ rotated once about n = (0, sinξ, cosξ)",
        params: &[
            ("r", 0.5, "Bloch radius, in (0, 1)"),
            ("xi", std::f64::consts::FRAC_PI_3, "rotation-axis tilt ξ"),
            ("steps", 2000.0, "time steps"),
        ],
        has_unitary: true,
    },
    Preset {
        name: "slater-triangle",
        summary: "geodesic triangle (0,0) → (θ1,φ1) → (θ2,φ2) → (0,0) on the Bloch sphere",
        params: &[
            ("r", 0.5, "Bloch radius, in (0, 1)"),
            ("theta1", std::f64::consts::FRAC_PI_2, "first vertex colatitude"),
            ("phi1", 0.0, "first vertex longitude"),
            ("theta2", std::f64::consts::FRAC_PI_2, "second vertex colatitude"),
            ("phi2", std::f64::consts::FRAC_PI_2, "second vertex longitude"),
            ("steps", 2001.0, "time steps (rounded up to a multiple of 3)"),
        ],
        has_unitary: true,
    },
    Preset {
        name: "trefoil",
        summary: "closed non-isospectral Bloch curve x = cos(t)/2, y = sin(t)/4, z = sin²(t/2)/2",
        params: &[("steps", 4000.0, "time steps (≥ 1000)")],
        has_unitary: false,
    },
    Preset {
        name: "parallel-circle",
        summary: "parallel-transporting driving around the circle at colatitude θ0",
        params: &[
            ("r", 0.7, "Bloch radius, in (0, 1)"),
            ("theta0", 1.0, "circle colatitude θ0"),
            ("steps", 8000.0, "time steps"),
        ],
        has_unitary: true,
    },
];

pub fn preset(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}

/// Instantiate a preset scenario from a full parameter map.
pub fn build_preset(
    name: &str,
    params: &BTreeMap<String, f64>,
    tols: &Tolerances,
) -> Result<Scenario> {
    let get = |key: &str| -> f64 {
        params
            .get(key)
            .copied()
            .unwrap_or_else(|| preset(name).unwrap().params.iter().find(|p| p.0 == key).unwrap().1)
    };
    match name {
        "precession" => scenario_easy(
            get("omega"),
            get("theta"),
            get("p1"),
            get("tau"),
            get("steps") as usize,
            tols,
        ),
        "slater-rotation" => {
            scenario_slater_rotation(get("r"), get("xi"), get("steps") as usize, tols)
        }
        "slater-triangle" => scenario_slater_triangle(
            get("r"),
            get("theta1"),
            get("phi1"),
            get("theta2"),
            get("phi2"),
            get("steps") as usize,
            tols,
        ),
        "trefoil" => scenario_trefoil(get("steps") as usize, tols),
        "parallel-circle" => {
            scenario_parallel_circle(get("r"), get("theta0"), get("steps") as usize, tols)
        }
        other => Err(Error::Config(format!(
            "unknown scenario `{other}` (field: scenario); run `presets` for the list"
        ))),
    }
}

impl RunConfig {
    /// Parse and fully validate a JSON configuration document.
    pub fn from_json(text: &str) -> Result<RunConfig> {
        let raw: RawConfig = serde_json::from_str(text).map_err(|e| Error::ConfigSyntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        Self::from_raw(raw)
    }

    fn from_raw(raw: RawConfig) -> Result<RunConfig> {
        let mut tolerances = Tolerances::default();
        if let Some(overrides) = &raw.tolerances {
            for (name, value) in overrides {
                tolerances.apply_override(name, *value)?;
            }
        }

        let source = match (&raw.scenario, &raw.curve) {
            (Some(_), Some(_)) => {
                return Err(Error::Config(
                    "exactly one of `scenario` and `curve` must be given, not both".into(),
                ))
            }
            (None, None) => {
                return Err(Error::Config(
                    "one of `scenario` or `curve` is required".into(),
                ))
            }
            (Some(name), None) => {
                let p = preset(name).ok_or_else(|| {
                    Error::Config(format!(
                        "unknown scenario `{name}` (field: scenario); run `presets` for the list"
                    ))
                })?;
                if raw.grid.is_some() {
                    return Err(Error::Config(format!(
                        "field `grid` applies only to inline curves; use the `steps` parameter of scenario `{name}`"
                    )));
                }
                let mut params: BTreeMap<String, f64> = BTreeMap::new();
                for (key, default, _) in p.params {
                    params.insert((*key).into(), *default);
                }
                if let Some(user) = &raw.params {
                    for (key, value) in user {
                        if !params.contains_key(key) {
                            return Err(Error::Config(format!(
                                "scenario `{name}` has no parameter `{key}` (field: params)"
                            )));
                        }
                        params.insert(key.clone(), *value);
                    }
                }
                CurveSource::Preset {
                    name: name.clone(),
                    params,
                }
            }
            (None, Some(curve)) => {
                if curve.kind != "bloch" {
                    return Err(Error::Config(format!(
                        "unsupported curve kind `{}` (field: curve.kind); only `bloch` is available",
                        curve.kind
                    )));
                }
                if raw.params.is_some() {
                    return Err(Error::Config(
                        "field `params` applies only to scenario presets".into(),
                    ));
                }
                let grid = match &raw.grid {
                    Some(g) => TimeGrid::new(g.t0, g.t1, g.steps)?,
                    None => TimeGrid::new(0.0, 2.0 * std::f64::consts::PI, 4000)?,
                };
                CurveSource::InlineBloch {
                    x: Expr::parse(&curve.x)?,
                    y: Expr::parse(&curve.y)?,
                    z: Expr::parse(&curve.z)?,
                    grid,
                }
            }
        };

        let method = match raw.method.as_deref() {
            None => match &source {
                CurveSource::Preset { name, .. } if *name == "trefoil" => MethodChoice::Open,
                CurveSource::Preset { .. } => MethodChoice::All,
                CurveSource::InlineBloch { .. } => MethodChoice::Open,
            },
            Some("uhlmann") => MethodChoice::Uhlmann,
            Some("interferometric") => MethodChoice::Interferometric,
            Some("open") => MethodChoice::Open,
            Some("all") => MethodChoice::All,
            Some(other) => {
                return Err(Error::Config(format!(
                    "unknown method `{other}` (field: method); expected uhlmann, interferometric, open, or all"
                )))
            }
        };

        // method/source compatibility
        let has_unitary = match &source {
            CurveSource::Preset { name, .. } => preset(name).unwrap().has_unitary,
            CurveSource::InlineBloch { .. } => false,
        };
        if method == MethodChoice::Interferometric && !has_unitary {
            return Err(Error::Config(
                "method `interferometric` requires a unitary evolution source, but the configured \
                 curve provides only density operators (field: method)"
                    .into(),
            ));
        }

        let (output_path, output_format) = match &raw.output {
            None => (None, OutputFormat::Text),
            Some(out) => {
                let format = match out.format.as_deref() {
                    None | Some("text") => OutputFormat::Text,
                    Some("csv") => OutputFormat::Csv,
                    Some("json-lines") => OutputFormat::JsonLines,
                    Some(other) => {
                        return Err(Error::Config(format!(
                            "unknown output format `{other}` (field: output.format); expected text, csv, or json-lines"
                        )))
                    }
                };
                (out.path.clone(), format)
            }
        };

        let sweep = match &raw.sweep {
            None => None,
            Some(s) => {
                match &source {
                    CurveSource::Preset { name, params } => {
                        if s.param == "steps" || !params.contains_key(&s.param) {
                            return Err(Error::Config(format!(
                                "scenario `{name}` has no sweepable parameter `{}` (field: sweep.param)",
                                s.param
                            )));
                        }
                    }
                    CurveSource::InlineBloch { .. } => {
                        return Err(Error::Config(
                            "sweeps require a scenario preset (field: sweep)".into(),
                        ))
                    }
                }
                if s.points < 2 {
                    return Err(Error::Config(
                        "a sweep needs at least 2 points (field: sweep.points)".into(),
                    ));
                }
                if !(s.from.is_finite() && s.to.is_finite()) || s.from >= s.to {
                    return Err(Error::Config(
                        "sweep range must be finite with from < to (field: sweep)".into(),
                    ));
                }
                Some(SweepSpec {
                    param: s.param.clone(),
                    from: s.from,
                    to: s.to,
                    points: s.points,
                })
            }
        };

        Ok(RunConfig {
            source,
            method,
            tolerances,
            output_path,
            output_format,
            seed: raw.seed.unwrap_or(0),
            gauge_checks: raw.gauge_checks.unwrap_or(0),
            sweep,
        })
    }
}
