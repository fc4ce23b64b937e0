//! Plain-text experiment configuration.
//!
//! A config is a flat list of `key = value` pairs separated by newlines or
//! top-level commas. Lists use brackets, `#` starts a comment:
//!
//! ```text
//! experiment = sweep
//! environment = half_waveguide
//! n = 50
//! rd_over_a = [0, 0.1, 0.5, 1.0]
//! sweep_axis = lattice_spacing
//! sweep_log = [0.1, 10, 60]     # lo, hi, count
//! realizations = 100, seed = 7
//! ```
//!
//! Every physical quantity carries its unit in the key name. Unknown or
//! repeated keys are errors.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::dynamics::omega_grid;
use crate::ensemble::{
    log_grid, DisorderStrength, InitialState, SweepAxis, SweepSpec, DEFAULT_REALIZATIONS,
};
use crate::error::{Error, Result};
use crate::geometry::{DisorderSpec, Environment, LatticeSpec};
use crate::interactions::CouplingModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    Modes,
    Sweep,
    Evolve,
    Spectrum,
    MutualInfo,
    Scaling,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Modes => "modes",
            Experiment::Sweep => "sweep",
            Experiment::Evolve => "evolve",
            Experiment::Spectrum => "spectrum",
            Experiment::MutualInfo => "mutualinfo",
            Experiment::Scaling => "scaling",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "modes" => Some(Experiment::Modes),
            "sweep" => Some(Experiment::Sweep),
            "evolve" => Some(Experiment::Evolve),
            "spectrum" => Some(Experiment::Spectrum),
            "mutualinfo" => Some(Experiment::MutualInfo),
            "scaling" => Some(Experiment::Scaling),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum TimeGrid {
    Linear {
        t_max: f64,
        count: usize,
    },
    Log {
        t_min: f64,
        t_max: f64,
        count: usize,
    },
    Explicit {
        times: Vec<f64>,
    },
}

impl TimeGrid {
    pub fn times(&self) -> Vec<f64> {
        match self {
            TimeGrid::Linear { t_max, count } => match count {
                0 => Vec::new(),
                1 => vec![0.0],
                _ => (0..*count)
                    .map(|k| t_max * k as f64 / (*count - 1) as f64)
                    .collect(),
            },
            TimeGrid::Log {
                t_min,
                t_max,
                count,
            } => log_grid(*t_min, *t_max, *count),
            TimeGrid::Explicit { times } => times.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OmegaGrid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl OmegaGrid {
    pub fn values(&self) -> Vec<f64> {
        omega_grid(self.min, self.max, self.count)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSettings {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
}

/// A validated experiment description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub experiment: Experiment,
    pub lattice: LatticeSpec,
    /// Every `(r_d/a, ω_d)` combination, `r_d/a`-major.
    pub disorders: Vec<DisorderStrength>,
    pub realizations: usize,
    /// Realization drawn by `modes`.
    pub realization_index: u64,
    pub seed: u64,
    pub threads: Option<usize>,
    pub coupling: CouplingModel,
    pub initial: InitialState,
    pub times: TimeGrid,
    pub t_prime: f64,
    pub omega: OmegaGrid,
    pub sweep: Option<SweepSettings>,
    pub scaling_extents: Vec<usize>,
    pub output_dir: Option<PathBuf>,
}

impl RunConfig {
    /// Disorder spec of strength `k` at realization 0.
    pub fn disorder(&self, k: usize) -> DisorderSpec {
        let s = self.disorders[k];
        DisorderSpec {
            rd_over_a: s.rd_over_a,
            omega_d: s.omega_d,
            seed: self.seed,
            realization_index: 0,
        }
    }

    pub fn sweep_spec(&self) -> Option<SweepSpec> {
        self.sweep.as_ref().map(|s| SweepSpec {
            base: self.lattice.clone(),
            axis: s.axis,
            values: s.values.clone(),
            strengths: self.disorders.clone(),
            realizations: self.realizations,
            seed: self.seed,
        })
    }

    pub fn validate(&self) -> Result<()> {
        self.lattice.validate()?;
        for k in 0..self.disorders.len() {
            self.disorder(k).validate()?;
        }
        if self.disorders.is_empty() {
            return Err(Error::validation(
                "rd_over_a",
                "at least one disorder strength is required",
            ));
        }
        if self.realizations == 0 {
            return Err(Error::validation(
                "realizations",
                "realizations must be ≥ 1",
            ));
        }
        if self.threads == Some(0) {
            return Err(Error::validation("threads", "threads must be ≥ 1"));
        }
        let single = matches!(
            self.experiment,
            Experiment::Modes | Experiment::Evolve | Experiment::Spectrum | Experiment::MutualInfo
        );
        if single && self.disorders.len() != 1 {
            return Err(Error::validation(
                "rd_over_a",
                format!(
                    "experiment {} takes a single disorder strength",
                    self.experiment.name()
                ),
            ));
        }
        if let InitialState::Site(j) = self.initial {
            let n = self.lattice.atom_count();
            if j == 0 || j > n {
                return Err(Error::validation(
                    "initial_state",
                    format!("site {j} outside 1..={n}"),
                ));
            }
        }
        if matches!(self.experiment, Experiment::Evolve | Experiment::MutualInfo) {
            let times = self.times.times();
            if times.is_empty() {
                return Err(Error::validation("gamma0_times", "time grid is empty"));
            }
            if times.iter().any(|t| !t.is_finite() || *t < 0.0) {
                return Err(Error::validation(
                    "gamma0_times",
                    "times must be finite and ≥ 0",
                ));
            }
            if times.windows(2).any(|w| w[1] <= w[0]) {
                return Err(Error::validation(
                    "gamma0_times",
                    "times must be strictly ascending",
                ));
            }
        }
        if self.experiment == Experiment::Spectrum {
            if !(self.t_prime.is_finite() && self.t_prime >= 0.0) {
                return Err(Error::validation(
                    "gamma0_t_prime",
                    "must be finite and ≥ 0",
                ));
            }
            if self.omega.count == 0
                || self
                    .omega
                    .max
                    .partial_cmp(&self.omega.min)
                    .is_none_or(|o| o.is_lt())
            {
                return Err(Error::validation(
                    "omega_over_gamma0",
                    "empty or reversed ω grid",
                ));
            }
        }
        match self.experiment {
            Experiment::Sweep => {
                let spec = self
                    .sweep_spec()
                    .ok_or_else(|| Error::validation("sweep_axis", "sweep requires sweep_axis"))?;
                spec.validate()?;
            }
            Experiment::Scaling => {
                if !self.lattice.environment.is_free_space() {
                    return Err(Error::validation(
                        "environment",
                        "scaling runs on free-space lattices",
                    ));
                }
                if self.scaling_extents.is_empty() || self.scaling_extents.contains(&0) {
                    return Err(Error::validation(
                        "scaling_extents",
                        "need at least one positive extent",
                    ));
                }
                let values = &self
                    .sweep
                    .as_ref()
                    .map(|s| s.values.clone())
                    .unwrap_or_default();
                if values.is_empty() || values.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(Error::validation(
                        "sweep_values",
                        "scaling needs an ascending spacing grid",
                    ));
                }
                if self
                    .disorders
                    .iter()
                    .any(|d| *d != DisorderStrength::ORDERED)
                {
                    return Err(Error::validation("rd_over_a", "scaling runs are ordered"));
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// Reads the `config` object of a run manifest.
    pub fn from_manifest(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Manifest {
            config: RunConfig,
        }
        let m: Manifest = serde_json::from_str(text)?;
        m.config.validate()?;
        Ok(m.config)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Value {
    Scalar(String),
    List(Vec<String>),
}

#[derive(Debug)]
struct Entry {
    line: usize,
    value: Value,
}

const KNOWN_KEYS: &[&str] = &[
    "experiment",
    "environment",
    "n",
    "extents",
    "a_over_lambda0",
    "rd_over_a",
    "omega_d_over_gamma0",
    "realizations",
    "realization_index",
    "seed",
    "threads",
    "interactions",
    "initial_state",
    "gamma0_t_max",
    "gamma0_t_min",
    "n_times",
    "time_grid",
    "gamma0_times",
    "gamma0_t_prime",
    "omega_min_over_gamma0",
    "omega_max_over_gamma0",
    "n_omega",
    "sweep_axis",
    "sweep_values",
    "sweep_log",
    "scaling_extents",
    "output_dir",
];

const SWEEP_KEYS: &[&str] = &["sweep_axis", "sweep_values", "sweep_log"];
const SCALING_KEYS: &[&str] = &["scaling_extents"];
const TIME_KEYS: &[&str] = &[
    "gamma0_t_max",
    "gamma0_t_min",
    "n_times",
    "time_grid",
    "gamma0_times",
];
const SPECTRUM_KEYS: &[&str] = &[
    "gamma0_t_prime",
    "omega_min_over_gamma0",
    "omega_max_over_gamma0",
    "n_omega",
];
const STATE_KEYS: &[&str] = &["initial_state"];
const MODES_KEYS: &[&str] = &["realization_index"];
const DISORDER_KEYS: &[&str] = &["rd_over_a", "omega_d_over_gamma0", "realizations"];

/// Splits text into `(line, key, value)` triples.
fn tokenize(text: &str) -> Result<Vec<(usize, String, Value)>> {
    let mut pairs = Vec::new();
    let mut current = String::new();
    let mut start_line = 1;
    let mut depth = 0usize;

    let flush = |buf: &mut String, line: usize, pairs: &mut Vec<_>| -> Result<()> {
        let item = buf.trim();
        if !item.is_empty() {
            pairs.push(parse_pair(item, line)?);
        }
        buf.clear();
        Ok(())
    };

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        for ch in content.chars() {
            match ch {
                '[' => {
                    depth += 1;
                    current.push(ch);
                }
                ']' => {
                    depth = depth.checked_sub(1).ok_or(Error::Parse {
                        line,
                        reason: "unmatched ']'".into(),
                    })?;
                    current.push(ch);
                }
                ',' if depth == 0 => {
                    flush(&mut current, start_line, &mut pairs)?;
                    start_line = line;
                }
                _ => {
                    if current.trim().is_empty() {
                        start_line = line;
                    }
                    current.push(ch);
                }
            }
        }
        if depth == 0 {
            flush(&mut current, start_line, &mut pairs)?;
        } else {
            current.push(' ');
        }
    }
    if depth > 0 {
        return Err(Error::Parse {
            line: start_line,
            reason: "unterminated '['".into(),
        });
    }
    Ok(pairs)
}

fn parse_pair(item: &str, line: usize) -> Result<(usize, String, Value)> {
    let (key, value) = item.split_once('=').ok_or_else(|| Error::Parse {
        line,
        reason: format!("expected key = value, found {item:?}"),
    })?;
    let key = key.trim().to_string();
    let value = value.trim();
    if key.is_empty() {
        return Err(Error::Parse {
            line,
            reason: "empty key".into(),
        });
    }
    if value.is_empty() {
        return Err(Error::Parse {
            line,
            reason: format!("{key} has no value"),
        });
    }
    let value = if let Some(inner) = value.strip_prefix('[') {
        let inner = inner.strip_suffix(']').ok_or_else(|| Error::Parse {
            line,
            reason: format!("{key}: malformed list"),
        })?;
        if inner.contains('[') {
            return Err(Error::Parse {
                line,
                reason: format!("{key}: nested lists are not supported"),
            });
        }
        let items: Vec<String> = inner
            .split(',')
            .map(|s| s.trim().to_string())
            .filter(|s| !s.is_empty())
            .collect();
        Value::List(items)
    } else {
        Value::Scalar(value.to_string())
    };
    Ok((line, key, value))
}

struct Table {
    entries: BTreeMap<String, Entry>,
}

impl Table {
    fn new(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (line, key, value) in tokenize(text)? {
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(Error::Parse {
                    line,
                    reason: format!("unknown key {key:?}"),
                });
            }
            if let Some(prev) = entries.get(&key) {
                let prev: &Entry = prev;
                return Err(Error::Parse {
                    line,
                    reason: format!("{key} already set on line {}", prev.line),
                });
            }
            entries.insert(key, Entry { line, value });
        }
        Ok(Self { entries })
    }

    fn has(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    fn take(&self, key: &str) -> Option<(usize, Value)> {
        self.entries.get(key).map(|e| (e.line, e.value.clone()))
    }

    fn scalar<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.take(key) {
            None => Ok(None),
            Some((line, Value::Scalar(s))) => s.parse().map(Some).map_err(|_| Error::Parse {
                line,
                reason: format!("{key}: cannot parse {s:?}"),
            }),
            Some((line, Value::List(_))) => Err(Error::Parse {
                line,
                reason: format!("{key} takes a single value"),
            }),
        }
    }

    /// A scalar or a list, returned as a list.
    fn list<T: std::str::FromStr>(&self, key: &str) -> Result<Option<Vec<T>>> {
        let Some((line, value)) = self.take(key) else {
            return Ok(None);
        };
        let items = match value {
            Value::Scalar(s) => vec![s],
            Value::List(v) => v,
        };
        items
            .iter()
            .map(|s| {
                s.parse().map_err(|_| Error::Parse {
                    line,
                    reason: format!("{key}: cannot parse {s:?}"),
                })
            })
            .collect::<Result<Vec<T>>>()
            .map(Some)
    }

    fn line(&self, key: &str) -> usize {
        self.entries.get(key).map_or(0, |e| e.line)
    }
}

fn parse_initial_state(s: &str, line: usize) -> Result<InitialState> {
    if s == "random_phase" {
        return Ok(InitialState::RandomPhase);
    }
    if let Some(site) = s.strip_prefix("site:") {
        let j = site.trim().parse().map_err(|_| Error::Parse {
            line,
            reason: format!("initial_state: bad site {site:?}"),
        })?;
        return Ok(InitialState::Site(j));
    }
    Err(Error::Parse {
        line,
        reason: format!("initial_state: expected random_phase or site:<j>, found {s:?}"),
    })
}

/// Parses and validates a configuration.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let t = Table::new(text)?;

    let experiment = match t.scalar::<String>("experiment")? {
        None => Experiment::Evolve,
        Some(name) => Experiment::from_name(&name).ok_or_else(|| Error::Parse {
            line: t.line("experiment"),
            reason: format!(
                "experiment must be modes, sweep, evolve, spectrum, mutualinfo or scaling, found {name:?}"
            ),
        })?,
    };
    let sweep_axis = match t.scalar::<String>("sweep_axis")? {
        None => None,
        Some(name) => Some(SweepAxis::from_name(&name).ok_or_else(|| Error::Parse {
            line: t.line("sweep_axis"),
            reason: format!("unknown sweep_axis {name:?}"),
        })?),
    };
    let spacing_from_sweep = experiment == Experiment::Scaling
        || (experiment == Experiment::Sweep && sweep_axis == Some(SweepAxis::LatticeSpacing));
    let size_from_sweep = experiment == Experiment::Scaling
        || (experiment == Experiment::Sweep && sweep_axis == Some(SweepAxis::SystemSize));

    let mut missing = Vec::new();
    if !t.has("environment") {
        missing.push("environment");
    }
    if !t.has("n") && !t.has("extents") && !size_from_sweep {
        missing.push("n");
    }
    if !t.has("a_over_lambda0") && !spacing_from_sweep {
        missing.push("a_over_lambda0");
    }
    if experiment == Experiment::Sweep && sweep_axis.is_none() {
        missing.push("sweep_axis");
    }
    if !missing.is_empty() {
        return Err(Error::validation(
            "config",
            format!("missing required keys: {}", missing.join(", ")),
        ));
    }

    let env_name: String = t.scalar("environment")?.unwrap_or_default();
    let environment = Environment::from_name(&env_name).ok_or_else(|| Error::Parse {
        line: t.line("environment"),
        reason: format!(
            "environment must be half_waveguide, free_space_1d, free_space_2d or free_space_3d, found {env_name:?}"
        ),
    })?;
    let dims = environment.dimension();

    let n: Option<usize> = t.scalar("n")?;
    let extents: Option<Vec<usize>> = t.list("extents")?;
    let extents = match (n, extents) {
        (Some(_), Some(_)) => {
            return Err(Error::Parse {
                line: t.line("extents"),
                reason: "give either n or extents, not both".into(),
            })
        }
        (Some(n), None) if dims == 1 => vec![n],
        (Some(n), None) => {
            let side = (n as f64).powf(1.0 / dims as f64).round() as usize;
            if side.pow(dims as u32) != n {
                return Err(Error::validation(
                    "n",
                    format!("{n} atoms do not fill a {dims}D cubic lattice; use extents"),
                ));
            }
            vec![side; dims]
        }
        (None, Some(e)) => {
            if e.len() != dims {
                return Err(Error::validation(
                    "extents",
                    format!("{} entries for a {dims}D lattice", e.len()),
                ));
            }
            e
        }
        (None, None) => vec![1; dims],
    };

    let sweep_values = match (t.list::<f64>("sweep_values")?, t.list::<f64>("sweep_log")?) {
        (Some(_), Some(_)) => {
            return Err(Error::Parse {
                line: t.line("sweep_log"),
                reason: "give either sweep_values or sweep_log, not both".into(),
            })
        }
        (Some(v), None) => Some(v),
        (None, Some(l)) => {
            if l.len() != 3 || l[2] < 1.0 || l[2].fract() != 0.0 || !(l[0] > 0.0 && l[1] > 0.0) {
                return Err(Error::validation(
                    "sweep_log",
                    "expected [lo, hi, count] with lo, hi > 0 and integer count ≥ 1",
                ));
            }
            Some(log_grid(l[0], l[1], l[2] as usize))
        }
        (None, None) => None,
    };
    let sweep = match experiment {
        Experiment::Sweep => Some(SweepSettings {
            axis: sweep_axis.unwrap_or(SweepAxis::LatticeSpacing),
            values: sweep_values.ok_or_else(|| {
                Error::validation("sweep_values", "sweep requires sweep_values or sweep_log")
            })?,
        }),
        Experiment::Scaling => {
            if sweep_axis.is_some_and(|a| a != SweepAxis::LatticeSpacing) {
                return Err(Error::validation(
                    "sweep_axis",
                    "scaling sweeps lattice_spacing",
                ));
            }
            Some(SweepSettings {
                axis: SweepAxis::LatticeSpacing,
                values: sweep_values.unwrap_or_else(crate::ensemble::default_spacing_grid),
            })
        }
        _ => None,
    };

    let spacing = match t.scalar::<f64>("a_over_lambda0")? {
        Some(a) => a,
        None => sweep
            .as_ref()
            .and_then(|s| s.values.first().copied())
            .unwrap_or(1.0),
    };
    let mut lattice = LatticeSpec::new(environment, extents, spacing);
    if size_from_sweep && n.is_none() && lattice.extents.iter().all(|&e| e == 1) {
        if let Some(first) = sweep.as_ref().and_then(|s| s.values.first()) {
            lattice.extents = vec![first.max(1.0) as usize; dims];
        }
    }

    let rds: Vec<f64> = t.list("rd_over_a")?.unwrap_or_else(|| vec![0.0]);
    let omegas: Vec<f64> = t.list("omega_d_over_gamma0")?.unwrap_or_else(|| vec![0.0]);
    if rds.is_empty() || omegas.is_empty() {
        return Err(Error::validation("rd_over_a", "empty disorder list"));
    }
    for &rd in &rds {
        if rd.is_nan() || rd < 0.0 {
            return Err(Error::validation("rd_over_a", "rd_over_a must be ≥ 0"));
        }
    }
    for &w in &omegas {
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::validation(
                "omega_d_over_gamma0",
                "omega_d_over_gamma0 must lie in [0, 1]",
            ));
        }
    }
    let disorders = rds
        .iter()
        .flat_map(|&rd| {
            omegas.iter().map(move |&w| DisorderStrength {
                rd_over_a: rd,
                omega_d: w,
            })
        })
        .collect();

    let coupling = match t.scalar::<String>("interactions")?.as_deref() {
        None | Some("collective") => CouplingModel::Collective,
        Some("none") | Some("non_interacting") => CouplingModel::NonInteracting,
        Some(other) => {
            return Err(Error::Parse {
                line: t.line("interactions"),
                reason: format!(
                    "interactions must be collective or non_interacting, found {other:?}"
                ),
            })
        }
    };
    let initial = match t.scalar::<String>("initial_state")? {
        None => InitialState::RandomPhase,
        Some(s) => parse_initial_state(&s, t.line("initial_state"))?,
    };

    let explicit: Option<Vec<f64>> = t.list("gamma0_times")?;
    let t_max: Option<f64> = t.scalar("gamma0_t_max")?;
    let t_min: Option<f64> = t.scalar("gamma0_t_min")?;
    let n_times: Option<usize> = t.scalar("n_times")?;
    let grid_kind: Option<String> = t.scalar("time_grid")?;
    let times = match (explicit, grid_kind.as_deref()) {
        (Some(times), None) => TimeGrid::Explicit { times },
        (Some(_), Some(_)) => {
            return Err(Error::Parse {
                line: t.line("time_grid"),
                reason: "gamma0_times and time_grid are exclusive".into(),
            })
        }
        (None, None) | (None, Some("linear")) => TimeGrid::Linear {
            t_max: t_max.unwrap_or(200.0),
            count: n_times.unwrap_or(201),
        },
        (None, Some("log")) => TimeGrid::Log {
            t_min: t_min.unwrap_or(1e-2),
            t_max: t_max.unwrap_or(200.0),
            count: n_times.unwrap_or(201),
        },
        (None, Some(other)) => {
            return Err(Error::Parse {
                line: t.line("time_grid"),
                reason: format!("time_grid must be linear or log, found {other:?}"),
            })
        }
    };
    if let TimeGrid::Log { t_min, .. } = times {
        if t_min.is_nan() || t_min <= 0.0 {
            return Err(Error::validation(
                "gamma0_t_min",
                "must be > 0 for a log grid",
            ));
        }
    }

    let omega = OmegaGrid {
        min: t.scalar("omega_min_over_gamma0")?.unwrap_or(-3.0),
        max: t.scalar("omega_max_over_gamma0")?.unwrap_or(3.0),
        count: t.scalar("n_omega")?.unwrap_or(400),
    };

    let config = RunConfig {
        experiment,
        lattice,
        disorders,
        realizations: t.scalar("realizations")?.unwrap_or(DEFAULT_REALIZATIONS),
        realization_index: t.scalar("realization_index")?.unwrap_or(0),
        seed: t.scalar("seed")?.unwrap_or(0),
        threads: t.scalar("threads")?,
        coupling,
        initial,
        times,
        t_prime: t.scalar("gamma0_t_prime")?.unwrap_or(100.0),
        omega,
        sweep,
        scaling_extents: t.list("scaling_extents")?.unwrap_or_default(),
        output_dir: t.scalar::<String>("output_dir")?.map(PathBuf::from),
    };

    let ignored: &[&str] = match experiment {
        Experiment::Modes => &[SWEEP_KEYS, TIME_KEYS, SPECTRUM_KEYS, STATE_KEYS].concat(),
        Experiment::Sweep => &[
            TIME_KEYS,
            SPECTRUM_KEYS,
            STATE_KEYS,
            MODES_KEYS,
            SCALING_KEYS,
        ]
        .concat(),
        Experiment::Evolve | Experiment::MutualInfo => {
            &[SWEEP_KEYS, SPECTRUM_KEYS, MODES_KEYS].concat()
        }
        Experiment::Spectrum => &[SWEEP_KEYS, TIME_KEYS, MODES_KEYS].concat(),
        Experiment::Scaling => &[
            TIME_KEYS,
            SPECTRUM_KEYS,
            STATE_KEYS,
            MODES_KEYS,
            DISORDER_KEYS,
        ]
        .concat(),
    };
    let scaling_only = experiment != Experiment::Scaling;
    if let Some((key, e)) = t.entries.iter().find(|(k, _)| {
        ignored.contains(&k.as_str()) || (scaling_only && SCALING_KEYS.contains(&k.as_str()))
    }) {
        return Err(Error::Parse {
            line: e.line,
            reason: format!("{key} has no effect for experiment {}", experiment.name()),
        });
    }
    config.validate()?;
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_line_config() {
        let c = parse_config(
            "environment=half_waveguide, n=50, a_over_lambda0=0.15, rd_over_a=1.0, realizations=100",
        )
        .unwrap();
        assert_eq!(c.experiment, Experiment::Evolve);
        assert_eq!(c.lattice.environment, Environment::HalfWaveguide);
        assert_eq!(c.lattice.extents, vec![50]);
        assert_eq!(c.lattice.spacing, 0.15);
        assert_eq!(c.disorders, vec![DisorderStrength::positional(1.0)]);
        assert_eq!(c.realizations, 100);
    }

    #[test]
    fn empty_config_lists_required_keys() {
        let err = parse_config("").unwrap_err().to_string();
        for key in ["environment", "n", "a_over_lambda0"] {
            assert!(err.contains(key), "{err}");
        }
        let err = parse_config("# nothing here\n\n").unwrap_err().to_string();
        assert!(err.contains("missing required keys"));
    }

    #[test]
    fn negative_disorder_is_rejected() {
        let err = parse_config("environment=half_waveguide, n=5, a_over_lambda0=0.2, rd_over_a=-1")
            .unwrap_err();
        assert_eq!(err.kind(), "validation");
        assert!(err.to_string().contains("rd_over_a must be ≥ 0"), "{err}");
    }

    #[test]
    fn unknown_key_reports_line() {
        let err = parse_config("environment = half_waveguide\nn = 5\nspacing = 0.2\n").unwrap_err();
        match err {
            Error::Parse { line, reason } => {
                assert_eq!(line, 3);
                assert!(reason.contains("spacing"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn duplicate_and_malformed_lines() {
        assert!(matches!(
            parse_config("n = 5\nn = 6"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_config("environment half_waveguide"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_config("rd_over_a = [0, 1"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_config("environment=half_waveguide, n=5, a_over_lambda0=x"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn sweep_config_with_lists_and_comments() {
        let text = "\
experiment = sweep   # slowest rate against spacing
environment = half_waveguide
n = 50
rd_over_a = [0, 0.1,
             0.5, 1.0]
sweep_axis = lattice_spacing
sweep_log = [0.1, 10, 60]
realizations = 20, seed = 11
";
        let c = parse_config(text).unwrap();
        assert_eq!(c.disorders.len(), 4);
        let s = c.sweep.as_ref().unwrap();
        assert_eq!(s.values.len(), 60);
        assert_eq!(c.lattice.spacing, s.values[0]);
        assert_eq!(c.seed, 11);
        assert_eq!(
            c.sweep_spec().unwrap().strengths[3],
            DisorderStrength::positional(1.0)
        );
    }

    #[test]
    fn lattice_shapes() {
        let c =
            parse_config("environment=free_space_2d, n=100, a_over_lambda0=0.15, experiment=modes")
                .unwrap();
        assert_eq!(c.lattice.extents, vec![10, 10]);
        let c = parse_config(
            "environment=free_space_3d, extents=[2,3,4], a_over_lambda0=0.3, experiment=modes",
        )
        .unwrap();
        assert_eq!(c.lattice.atom_count(), 24);
        assert!(parse_config("environment=free_space_2d, n=10, a_over_lambda0=0.15").is_err());
    }

    #[test]
    fn initial_state_and_times() {
        let c = parse_config(
            "environment=half_waveguide, n=50, a_over_lambda0=0.15, initial_state=site:26, \
             time_grid=log, gamma0_t_min=0.1, gamma0_t_max=1e11, n_times=12",
        )
        .unwrap();
        assert_eq!(c.initial, InitialState::Site(26));
        let times = c.times.times();
        assert_eq!(times.len(), 12);
        assert!((times[11] / 1e11 - 1.0).abs() < 1e-12);
        assert!(parse_config(
            "environment=half_waveguide, n=5, a_over_lambda0=0.15, initial_state=site:6"
        )
        .is_err());
    }

    #[test]
    fn keys_without_effect_are_rejected() {
        let err = parse_config(
            "experiment=modes, environment=half_waveguide, n=5, a_over_lambda0=0.2, sweep_values=[1,2]",
        )
        .unwrap_err();
        assert!(err.to_string().contains("sweep_values"), "{err}");
    }

    #[test]
    fn manifest_round_trip() {
        let c = parse_config(
            "experiment=spectrum, environment=free_space_1d, n=8, a_over_lambda0=0.2, \
             omega_d_over_gamma0=0.5, gamma0_t_prime=5, n_omega=50",
        )
        .unwrap();
        let text = serde_json::json!({ "config": c, "version": "x" }).to_string();
        assert_eq!(RunConfig::from_manifest(&text).unwrap(), c);
    }
}
