//! Disorder ensembles and parameter sweeps.
//!
//! Realizations are independent jobs run on the current rayon pool. Results
//! are always collected and reduced in realization-index order, so every
//! aggregate is independent of scheduling. Populations are averaged with the
//! geometric mean by default; every other observable uses the arithmetic
//! mean.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{
    fluorescence_spectrum, random_phase_state, site_excitation_state, Propagator,
    SingleExcitationState, SpectrumResult,
};
use crate::entanglement::{mutual_information, BipartiteCut};
use crate::error::{Error, Result};
use crate::geometry::{build_realization, DisorderSpec, Environment, LatticeSpec};
use crate::interactions::{build_hamiltonian_with, CouplingModel};
use crate::output::{Cell, CsvTable};
use crate::seeding::{realization_rng, StreamPurpose};
use crate::spectral::{decompose_tagged, slowest_rate};

/// Values at or below this are floored before taking logarithms.
pub const GEOMETRIC_FLOOR: f64 = 1e-300;
pub const DEFAULT_REALIZATIONS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "site")]
pub enum InitialState {
    RandomPhase,
    /// One-based site index.
    Site(usize),
}

impl InitialState {
    pub fn prepare(self, n: usize, dis: &DisorderSpec) -> Result<SingleExcitationState> {
        match self {
            InitialState::RandomPhase => {
                let mut rng =
                    realization_rng(dis.seed, dis.realization_index, StreamPurpose::InitialState);
                Ok(random_phase_state(n, &mut rng))
            }
            InitialState::Site(j) => site_excitation_state(n, j),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumRequest {
    pub t_prime: f64,
    pub omega: Vec<f64>,
}

/// What to evaluate for each realization beyond the slowest decay rate.
#[derive(Debug, Clone, PartialEq)]
pub struct Observables {
    /// Keep the sorted decay rates and IPRs of every mode.
    pub decay_spectrum: bool,
    pub population: Option<Vec<f64>>,
    pub spectrum: Option<SpectrumRequest>,
    pub mutual_info: Option<Vec<f64>>,
    pub initial: InitialState,
    pub coupling: CouplingModel,
}

impl Default for Observables {
    fn default() -> Self {
        Self {
            decay_spectrum: false,
            population: None,
            spectrum: None,
            mutual_info: None,
            initial: InitialState::RandomPhase,
            coupling: CouplingModel::Collective,
        }
    }
}

impl Observables {
    pub fn slowest_rate_only() -> Self {
        Self::default()
    }

    fn needs_state(&self) -> bool {
        self.population.is_some() || self.spectrum.is_some() || self.mutual_info.is_some()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RealizationRecord {
    pub realization_index: u64,
    pub slowest_rate: f64,
    pub eigvec_condition: f64,
    pub decay_rates: Option<Vec<f64>>,
    pub iprs: Option<Vec<f64>>,
    pub population: Option<Vec<(f64, f64)>>,
    pub spectrum: Option<SpectrumResult>,
    pub mutual_info: Option<Vec<(f64, f64)>>,
}

/// Geometry → disorder → Hamiltonian → modes → requested observables.
pub fn run_realization(
    spec: &LatticeSpec,
    dis: &DisorderSpec,
    obs: &Observables,
) -> Result<RealizationRecord> {
    let geom = build_realization(spec, dis)?;
    let h = build_hamiltonian_with(&geom, obs.coupling)?;
    let dec = decompose_tagged(&h, dis.seed, dis.realization_index)?;

    let mut record = RealizationRecord {
        realization_index: dis.realization_index,
        slowest_rate: slowest_rate(&dec),
        eigvec_condition: dec.eigvec_condition,
        decay_rates: obs.decay_spectrum.then(|| dec.decay_rates.clone()),
        iprs: obs.decay_spectrum.then(|| dec.iprs.clone()),
        population: None,
        spectrum: None,
        mutual_info: None,
    };
    if !obs.needs_state() {
        return Ok(record);
    }

    let state0 = obs.initial.prepare(geom.len(), dis)?;
    let propagator = Propagator::new(&state0, &dec)?;
    if let Some(times) = &obs.population {
        let states = propagator.trajectory(times)?;
        record.population = Some(
            times
                .iter()
                .zip(&states)
                .map(|(&t, s)| (t, s.excited_population()))
                .collect(),
        );
    }
    if let Some(times) = &obs.mutual_info {
        let cut = BipartiteCut::half(geom.len());
        let states = propagator.trajectory(times)?;
        record.mutual_info = Some(
            times
                .iter()
                .zip(&states)
                .map(|(&t, s)| Ok((t, mutual_information(&s.amplitudes, &cut)?)))
                .collect::<Result<_>>()?,
        );
    }
    if let Some(req) = &obs.spectrum {
        let state = propagator.at(req.t_prime)?;
        record.spectrum = Some(fluorescence_spectrum(&state, &dec, &geom, &req.omega)?);
    }
    Ok(record)
}

/// `count` realizations `0..count` of `base`, executed in parallel and
/// returned in index order.
pub fn run_ensemble(
    spec: &LatticeSpec,
    base: &DisorderSpec,
    count: usize,
    obs: &Observables,
) -> Result<Vec<RealizationRecord>> {
    (0..count as u64)
        .into_par_iter()
        .map(|k| run_realization(spec, &base.with_realization(k), obs))
        .collect()
}

/// Aggregate statistics of one set of per-realization values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stats {
    pub mean_arith: f64,
    pub mean_geom: f64,
    pub minimum: f64,
    pub maximum: f64,
    /// Standard error of the arithmetic mean (zero for a single value).
    pub stderr: f64,
    pub count: usize,
    /// Values floored to [`GEOMETRIC_FLOOR`] for the geometric mean.
    pub floored: usize,
}

/// Summarizes `values` in the given (index) order.
pub fn summarize(values: &[f64]) -> Stats {
    let count = values.len();
    if count == 0 {
        return Stats {
            mean_arith: f64::NAN,
            mean_geom: f64::NAN,
            minimum: f64::NAN,
            maximum: f64::NAN,
            stderr: f64::NAN,
            count,
            floored: 0,
        };
    }
    let n = count as f64;
    let minimum = values.iter().copied().fold(f64::INFINITY, f64::min);
    let maximum = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mean_arith = (values.iter().sum::<f64>() / n).clamp(minimum, maximum);
    let floored = values.iter().filter(|&&v| v <= GEOMETRIC_FLOOR).count();
    let log_mean = values
        .iter()
        .map(|v| v.max(GEOMETRIC_FLOOR).ln())
        .sum::<f64>()
        / n;
    // Rounding in exp/ln can push the geometric mean a few ulps outside
    // [min, arith]; the exact value lies inside.
    let mean_geom = if minimum > 0.0 {
        log_mean.exp().clamp(minimum, mean_arith)
    } else {
        log_mean.exp()
    };
    let stderr = if count > 1 {
        let var = values.iter().map(|v| (v - mean_arith).powi(2)).sum::<f64>() / (n - 1.0);
        (var / n).sqrt()
    } else {
        0.0
    };
    Stats {
        mean_arith,
        mean_geom,
        minimum,
        maximum,
        stderr,
        count,
        floored,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    LatticeSpacing,
    DisorderStrength,
    DetuningWidth,
    /// Atoms per lattice axis.
    SystemSize,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::LatticeSpacing => "lattice_spacing",
            SweepAxis::DisorderStrength => "disorder_strength",
            SweepAxis::DetuningWidth => "detuning_width",
            SweepAxis::SystemSize => "system_size",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "lattice_spacing" => Some(SweepAxis::LatticeSpacing),
            "disorder_strength" => Some(SweepAxis::DisorderStrength),
            "detuning_width" => Some(SweepAxis::DetuningWidth),
            "system_size" => Some(SweepAxis::SystemSize),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DisorderStrength {
    pub rd_over_a: f64,
    pub omega_d: f64,
}

impl DisorderStrength {
    pub const ORDERED: Self = Self {
        rd_over_a: 0.0,
        omega_d: 0.0,
    };

    pub fn positional(rd_over_a: f64) -> Self {
        Self {
            rd_over_a,
            omega_d: 0.0,
        }
    }

    pub fn detuning(omega_d: f64) -> Self {
        Self {
            rd_over_a: 0.0,
            omega_d,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub base: LatticeSpec,
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    pub strengths: Vec<DisorderStrength>,
    pub realizations: usize,
    pub seed: u64,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::validation(
                "sweep_values",
                "at least one value is required",
            ));
        }
        let increasing = self.values.windows(2).all(|w| w[1] > w[0]);
        let decreasing = self.values.windows(2).all(|w| w[1] < w[0]);
        if !(increasing || decreasing) {
            return Err(Error::validation(
                "sweep_values",
                "values must be strictly monotone",
            ));
        }
        if self.strengths.is_empty() {
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
        for (lattice, dis) in self.points()? {
            lattice.validate()?;
            dis.validate()?;
        }
        Ok(())
    }

    /// Concrete `(lattice, disorder)` for every `(value, strength)` pair, in
    /// value-major order.
    pub fn points(&self) -> Result<Vec<(LatticeSpec, DisorderSpec)>> {
        let mut out = Vec::with_capacity(self.values.len() * self.strengths.len());
        for &value in &self.values {
            for strength in &self.strengths {
                let mut lattice = self.base.clone();
                let mut dis = DisorderSpec {
                    rd_over_a: strength.rd_over_a,
                    omega_d: strength.omega_d,
                    seed: self.seed,
                    realization_index: 0,
                };
                match self.axis {
                    SweepAxis::LatticeSpacing => lattice.spacing = value,
                    SweepAxis::DisorderStrength => dis.rd_over_a = value,
                    SweepAxis::DetuningWidth => dis.omega_d = value,
                    SweepAxis::SystemSize => {
                        if !(value >= 1.0 && value.fract() == 0.0) {
                            return Err(Error::validation(
                                "sweep_values",
                                format!("system size {value} is not a positive integer"),
                            ));
                        }
                        lattice.extents = vec![value as usize; lattice.environment.dimension()];
                    }
                }
                out.push((lattice, dis));
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryPoint {
    pub axis_value: f64,
    pub rd_over_a: f64,
    pub omega_d: f64,
    pub stats: Stats,
    pub raw: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSummary {
    pub axis: SweepAxis,
    pub points: Vec<SummaryPoint>,
}

impl EnsembleSummary {
    /// `sweep.csv`.
    pub fn to_csv(&self) -> CsvTable {
        let mut t = CsvTable::new(&[
            "axis_value",
            "r_d_over_a",
            "omega_d",
            "mean_arith",
            "mean_geom",
            "minimum",
            "maximum",
            "stderr",
            "n_realizations",
        ]);
        for p in &self.points {
            t.row(&[
                p.axis_value.into(),
                p.rd_over_a.into(),
                p.omega_d.into(),
                p.stats.mean_arith.into(),
                p.stats.mean_geom.into(),
                p.stats.minimum.into(),
                p.stats.maximum.into(),
                p.stats.stderr.into(),
                p.stats.count.into(),
            ]);
        }
        t
    }

    /// Points of one disorder strength, in sweep order.
    pub fn curve(&self, rd_over_a: f64, omega_d: f64) -> Vec<&SummaryPoint> {
        self.points
            .iter()
            .filter(|p| p.rd_over_a == rd_over_a && p.omega_d == omega_d)
            .collect()
    }
}

/// Slowest decay rate `|2 Im E_N|` over every sweep point. Ordered points are
/// deterministic and evaluated once.
pub fn sweep_slowest_rate(sweep: &SweepSpec, keep_raw: bool) -> Result<EnsembleSummary> {
    sweep.validate()?;
    let points = sweep.points()?;
    let jobs: Vec<(usize, DisorderSpec)> = points
        .iter()
        .enumerate()
        .flat_map(|(p, (_, dis))| {
            let count = if dis.is_ordered() {
                1
            } else {
                sweep.realizations
            };
            (0..count as u64).map(move |k| (p, dis.with_realization(k)))
        })
        .collect();
    let obs = Observables::slowest_rate_only();
    let rates: Vec<f64> = jobs
        .par_iter()
        .map(|(p, dis)| run_realization(&points[*p].0, dis, &obs).map(|r| r.slowest_rate))
        .collect::<Result<_>>()?;

    let mut out = Vec::with_capacity(points.len());
    let mut cursor = 0;
    for (p, (lattice, dis)) in points.iter().enumerate() {
        let end = cursor + jobs[cursor..].iter().take_while(|(q, _)| *q == p).count();
        let values = &rates[cursor..end];
        cursor = end;
        let axis_value = match sweep.axis {
            SweepAxis::LatticeSpacing => lattice.spacing,
            SweepAxis::DisorderStrength => dis.rd_over_a,
            SweepAxis::DetuningWidth => dis.omega_d,
            SweepAxis::SystemSize => lattice.extents[0] as f64,
        };
        out.push(SummaryPoint {
            axis_value,
            rd_over_a: dis.rd_over_a,
            omega_d: dis.omega_d,
            stats: summarize(values),
            raw: keep_raw.then(|| values.to_vec()),
        });
    }
    Ok(EnsembleSummary {
        axis: sweep.axis,
        points: out,
    })
}

/// Per-trajectory populations plus their geometric and arithmetic means.
#[derive(Debug, Clone, PartialEq)]
pub struct PopulationEnsemble {
    pub times: Vec<f64>,
    pub curves: Vec<Vec<f64>>,
    pub mean_geom: Vec<f64>,
    pub mean_arith: Vec<f64>,
    pub floored: Vec<usize>,
}

impl PopulationEnsemble {
    pub fn from_curves(times: Vec<f64>, curves: Vec<Vec<f64>>) -> Self {
        let mut mean_geom = Vec::with_capacity(times.len());
        let mut mean_arith = Vec::with_capacity(times.len());
        let mut floored = Vec::with_capacity(times.len());
        for k in 0..times.len() {
            let column: Vec<f64> = curves.iter().map(|c| c[k]).collect();
            let s = summarize(&column);
            mean_geom.push(s.mean_geom);
            mean_arith.push(s.mean_arith);
            floored.push(s.floored);
        }
        Self {
            times,
            curves,
            mean_geom,
            mean_arith,
            floored,
        }
    }

    /// `population.csv`: `(t, p_exc, trajectory_id)`.
    pub fn to_csv(&self) -> CsvTable {
        let mut t = CsvTable::new(&["t", "p_exc", "trajectory_id"]);
        for (id, curve) in self.curves.iter().enumerate() {
            for (time, p) in self.times.iter().zip(curve) {
                t.row(&[Cell::from(*time), Cell::from(*p), Cell::from(id)]);
            }
        }
        t
    }

    /// `population_mean.csv`.
    pub fn means_csv(&self) -> CsvTable {
        let mut t = CsvTable::new(&["t", "mean_geom", "mean_arith", "n_floored"]);
        for k in 0..self.times.len() {
            t.row(&[
                self.times[k].into(),
                self.mean_geom[k].into(),
                self.mean_arith[k].into(),
                self.floored[k].into(),
            ]);
        }
        t
    }
}

/// Population curves with both the disorder and the initial state resampled
/// for every trajectory in `disorders`.
pub fn population_ensemble(
    spec: &LatticeSpec,
    disorders: &[DisorderSpec],
    times: &[f64],
    initial: InitialState,
    coupling: CouplingModel,
) -> Result<PopulationEnsemble> {
    let obs = Observables {
        population: Some(times.to_vec()),
        initial,
        coupling,
        ..Observables::default()
    };
    let curves: Vec<Vec<f64>> = disorders
        .par_iter()
        .map(|dis| {
            run_realization(spec, dis, &obs).map(|r| {
                r.population
                    .unwrap_or_default()
                    .into_iter()
                    .map(|(_, p)| p)
                    .collect()
            })
        })
        .collect::<Result<_>>()?;
    Ok(PopulationEnsemble::from_curves(times.to_vec(), curves))
}

/// Disorder specs for realizations `0..count`.
pub fn realizations(base: DisorderSpec, count: usize) -> Vec<DisorderSpec> {
    (0..count as u64)
        .map(|k| base.with_realization(k))
        .collect()
}

/// Mean decay rate and IPR per sorted mode index.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSpectrumSummary {
    pub decay_rate: Vec<Stats>,
    pub ipr: Vec<Stats>,
}

impl ModeSpectrumSummary {
    pub fn from_records(records: &[RealizationRecord]) -> Result<Self> {
        let rates: Vec<&Vec<f64>> = records
            .iter()
            .map(|r| r.decay_rates.as_ref())
            .collect::<Option<_>>()
            .ok_or_else(|| Error::validation("observables", "decay spectrum was not recorded"))?;
        let iprs: Vec<&Vec<f64>> = records
            .iter()
            .map(|r| r.iprs.as_ref())
            .collect::<Option<_>>()
            .ok_or_else(|| Error::validation("observables", "IPRs were not recorded"))?;
        let n = rates.first().map_or(0, |r| r.len());
        let column = |rows: &[&Vec<f64>], k: usize| rows.iter().map(|r| r[k]).collect::<Vec<_>>();
        Ok(Self {
            decay_rate: (0..n).map(|k| summarize(&column(&rates, k))).collect(),
            ipr: (0..n).map(|k| summarize(&column(&iprs, k))).collect(),
        })
    }

    /// Mean IPR over the `count` slowest modes.
    pub fn slowest_mean_ipr(&self, count: usize) -> f64 {
        let n = self.ipr.len();
        let count = count.min(n).max(1);
        self.ipr[n - count..]
            .iter()
            .map(|s| s.mean_arith)
            .sum::<f64>()
            / count as f64
    }

    /// `decay_spectrum.csv`.
    pub fn to_csv(&self) -> CsvTable {
        let mut t = CsvTable::new(&[
            "n_sorted",
            "mean_decay_rate",
            "stderr_decay_rate",
            "mean_ipr",
            "stderr_ipr",
            "n_realizations",
        ]);
        for (k, (r, i)) in self.decay_rate.iter().zip(&self.ipr).enumerate() {
            t.row(&[
                (k + 1).into(),
                r.mean_arith.into(),
                r.stderr.into(),
                i.mean_arith.into(),
                i.stderr.into(),
                r.count.into(),
            ]);
        }
        t
    }
}

/// Arithmetic mean of per-realization spectra on a common grid.
pub fn mean_spectrum(records: &[RealizationRecord]) -> Result<SpectrumResult> {
    let spectra: Vec<&SpectrumResult> = records
        .iter()
        .map(|r| r.spectrum.as_ref())
        .collect::<Option<_>>()
        .ok_or_else(|| Error::validation("observables", "spectrum was not recorded"))?;
    let first = spectra
        .first()
        .ok_or_else(|| Error::validation("realizations", "no realizations"))?;
    let n = spectra.len() as f64;
    let values = (0..first.omega.len())
        .map(|k| spectra.iter().map(|s| s.values[k]).sum::<f64>() / n)
        .collect();
    let regularized = (0..first.omega.len())
        .map(|k| spectra.iter().any(|s| s.regularized[k]))
        .collect();
    Ok(SpectrumResult {
        omega: first.omega.clone(),
        values,
        t_prime: first.t_prime,
        regularized,
    })
}

/// `count` logarithmically spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            (0..count)
                .map(|k| (a + (b - a) * k as f64 / (count - 1) as f64).exp())
                .collect()
        }
    }
}

/// Default lattice-spacing grid: 60 log-spaced values over `[0.1, 10] λ0`.
pub fn default_spacing_grid() -> Vec<f64> {
    log_grid(0.1, 10.0, 60)
}

/// Ordered-array slowest rate against spacing for one system size.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingCurve {
    pub extent: usize,
    pub atoms: usize,
    pub summary: EnsembleSummary,
}

impl ScalingCurve {
    pub fn spacings(&self) -> Vec<f64> {
        self.summary.points.iter().map(|p| p.axis_value).collect()
    }

    pub fn rates(&self) -> Vec<f64> {
        self.summary
            .points
            .iter()
            .map(|p| p.stats.mean_arith)
            .collect()
    }

    /// Midpoint of the grid interval with the steepest drop in `log rate`
    /// towards smaller spacing.
    pub fn transition_midpoint(&self) -> Option<f64> {
        steepest_drop_midpoint(&self.spacings(), &self.rates())
    }
}

pub fn steepest_drop_midpoint(spacings: &[f64], rates: &[f64]) -> Option<f64> {
    let mut best: Option<(f64, f64)> = None;
    for k in 1..spacings.len() {
        let (lo, hi) = if spacings[k] > spacings[k - 1] {
            (k - 1, k)
        } else {
            (k, k - 1)
        };
        let drop = rates[hi].max(GEOMETRIC_FLOOR).log10() - rates[lo].max(GEOMETRIC_FLOOR).log10();
        if best.is_none_or(|(d, _)| drop > d) {
            best = Some((drop, 0.5 * (spacings[lo] + spacings[hi])));
        }
    }
    best.map(|(_, mid)| mid)
}

/// `scaling.csv` rows for a set of curves.
pub fn scaling_csv(environment: Environment, curves: &[ScalingCurve]) -> CsvTable {
    let mut t = CsvTable::new(&[
        "dimension",
        "extent",
        "n_atoms",
        "a_over_lambda0",
        "slowest_rate",
    ]);
    for c in curves {
        for p in &c.summary.points {
            t.row(&[
                environment.dimension().into(),
                c.extent.into(),
                c.atoms.into(),
                p.axis_value.into(),
                p.stats.mean_arith.into(),
            ]);
        }
    }
    t
}

/// Ordered free-space arrays of dimension `dims` with `extents[k]` atoms per
/// axis, swept over `spacings`.
pub fn size_scaling_sweep(
    dims: usize,
    extents: &[usize],
    spacings: &[f64],
) -> Result<Vec<ScalingCurve>> {
    let environment = match dims {
        1 => Environment::FreeSpace1D,
        2 => Environment::FreeSpace2D,
        3 => Environment::FreeSpace3D,
        _ => {
            return Err(Error::validation(
                "dimension",
                format!("{dims} is not 1, 2 or 3"),
            ))
        }
    };
    extents
        .iter()
        .map(|&extent| {
            let sweep = SweepSpec {
                base: LatticeSpec::new(environment, vec![extent; dims], spacings[0]),
                axis: SweepAxis::LatticeSpacing,
                values: spacings.to_vec(),
                strengths: vec![DisorderStrength::ORDERED],
                realizations: 1,
                seed: 0,
            };
            Ok(ScalingCurve {
                extent,
                atoms: extent.pow(dims as u32),
                summary: sweep_slowest_rate(&sweep, false)?,
            })
        })
        .collect()
}
