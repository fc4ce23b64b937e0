//! Executes a [`RunConfig`] and writes its artifacts.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

use crate::config::{Experiment, RunConfig};
use crate::ensemble::{
    mean_spectrum, population_ensemble, realizations, run_ensemble, scaling_csv,
    size_scaling_sweep, summarize, sweep_slowest_rate, ModeSpectrumSummary, Observables,
    SpectrumRequest,
};
use crate::entanglement::{mutual_information_csv, BipartiteCut};
use crate::error::{Error, Result};
use crate::geometry::build_realization;
use crate::interactions::build_hamiltonian_with;
use crate::output::{Cell, CsvTable};
use crate::spectral::decompose_tagged;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Serialize)]
pub struct Manifest<'a> {
    pub version: &'static str,
    pub experiment: &'static str,
    pub seed: u64,
    pub threads: usize,
    pub wall_time_s: f64,
    pub files: Vec<String>,
    pub config: &'a RunConfig,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub files: Vec<PathBuf>,
    pub wall_time_s: f64,
}

struct Writer<'a> {
    dir: &'a Path,
    files: Vec<PathBuf>,
}

impl Writer<'_> {
    fn csv(&mut self, name: &str, table: &CsvTable) -> Result<()> {
        let path = self.dir.join(name);
        table.write(&path)?;
        self.files.push(path);
        Ok(())
    }

    fn text(&mut self, name: &str, text: &str) -> Result<()> {
        let path = self.dir.join(name);
        std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
        self.files.push(path);
        Ok(())
    }
}

/// Runs `config` on a pool of `threads` workers (machine parallelism when
/// `None`) and writes every artifact plus `manifest.json` into `out`.
pub fn run(config: &RunConfig, out: &Path, threads: Option<usize>) -> Result<RunOutcome> {
    config.validate()?;
    std::fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::validation("threads", e.to_string()))?;
    let width = pool.current_num_threads();

    let start = Instant::now();
    let mut w = Writer {
        dir: out,
        files: Vec::new(),
    };
    pool.install(|| execute(config, &mut w))?;
    let wall_time_s = start.elapsed().as_secs_f64();

    let manifest = Manifest {
        version: VERSION,
        experiment: config.experiment.name(),
        seed: config.seed,
        threads: width,
        wall_time_s,
        files: w
            .files
            .iter()
            .filter_map(|p| p.file_name().map(|f| f.to_string_lossy().into_owned()))
            .collect(),
        config,
    };
    let text = serde_json::to_string_pretty(&manifest)?;
    w.text("manifest.json", &(text + "\n"))?;
    Ok(RunOutcome {
        files: w.files,
        wall_time_s,
    })
}

fn execute(config: &RunConfig, w: &mut Writer) -> Result<()> {
    match config.experiment {
        Experiment::Modes => modes(config, w),
        Experiment::Sweep => {
            let spec = config
                .sweep_spec()
                .ok_or_else(|| Error::validation("sweep_axis", "missing sweep settings"))?;
            w.csv("sweep.csv", &sweep_slowest_rate(&spec, false)?.to_csv())
        }
        Experiment::Evolve => {
            let dis = realizations(config.disorder(0), config.realizations);
            let ens = population_ensemble(
                &config.lattice,
                &dis,
                &config.times.times(),
                config.initial,
                config.coupling,
            )?;
            w.csv("population.csv", &ens.to_csv())?;
            w.csv("population_mean.csv", &ens.means_csv())
        }
        Experiment::Spectrum => {
            let obs = Observables {
                spectrum: Some(SpectrumRequest {
                    t_prime: config.t_prime,
                    omega: config.omega.values(),
                }),
                initial: config.initial,
                coupling: config.coupling,
                ..Observables::default()
            };
            let records = run_ensemble(
                &config.lattice,
                &config.disorder(0),
                config.realizations,
                &obs,
            )?;
            w.csv("spectrum.csv", &mean_spectrum(&records)?.to_csv())
        }
        Experiment::MutualInfo => mutual_info(config, w),
        Experiment::Scaling => {
            let values = config
                .sweep
                .as_ref()
                .map(|s| s.values.clone())
                .unwrap_or_default();
            let dims = config.lattice.environment.dimension();
            let curves = size_scaling_sweep(dims, &config.scaling_extents, &values)?;
            w.csv(
                "scaling.csv",
                &scaling_csv(config.lattice.environment, &curves),
            )
        }
    }
}

fn modes(config: &RunConfig, w: &mut Writer) -> Result<()> {
    let dis = config
        .disorder(0)
        .with_realization(config.realization_index);
    let geom = build_realization(&config.lattice, &dis)?;
    let h = build_hamiltonian_with(&geom, config.coupling)?;
    let dec = decompose_tagged(&h, dis.seed, dis.realization_index)?;
    w.text("geometry.json", &geom.to_json()?)?;
    w.text("hamiltonian.csv", &h.to_csv())?;
    w.csv("modes.csv", &dec.modes_csv())?;
    w.csv("profiles.csv", &dec.profiles_csv())?;
    if !dis.is_ordered() && config.realizations > 1 {
        let obs = Observables {
            decay_spectrum: true,
            coupling: config.coupling,
            ..Observables::default()
        };
        let records = run_ensemble(
            &config.lattice,
            &config.disorder(0),
            config.realizations,
            &obs,
        )?;
        w.csv(
            "decay_spectrum.csv",
            &ModeSpectrumSummary::from_records(&records)?.to_csv(),
        )?;
    }
    Ok(())
}

fn mutual_info(config: &RunConfig, w: &mut Writer) -> Result<()> {
    let times = config.times.times();
    let obs = Observables {
        mutual_info: Some(times.clone()),
        initial: config.initial,
        coupling: config.coupling,
        ..Observables::default()
    };
    let records = run_ensemble(
        &config.lattice,
        &config.disorder(0),
        config.realizations,
        &obs,
    )?;
    let curves: Vec<Vec<(f64, f64)>> = records
        .into_iter()
        .map(|r| r.mutual_info.unwrap_or_default())
        .collect();
    let cut = BipartiteCut::half(config.lattice.atom_count());
    w.csv("mutualinfo.csv", &mutual_information_csv(&cut, &curves))?;

    let mut mean = CsvTable::with_comments(
        &[
            "entropy log base: e (nats)".to_string(),
            format!("cut: {}", cut.describe()),
            "mean: arithmetic over trajectories".to_string(),
        ],
        &["t", "mean_I", "stderr", "n_realizations"],
    );
    for (k, &t) in times.iter().enumerate() {
        let column: Vec<f64> = curves.iter().map(|c| c[k].1).collect();
        let s = summarize(&column);
        mean.row(&[
            Cell::from(t),
            Cell::from(s.mean_arith),
            Cell::from(s.stderr),
            Cell::from(s.count),
        ]);
    }
    w.csv("mutualinfo_mean.csv", &mean)
}

/// Machine-readable description of a failed run.
pub fn error_record(err: &Error) -> serde_json::Value {
    let mut record = serde_json::json!({
        "status": "error",
        "kind": err.kind(),
        "message": err.to_string(),
        "version": VERSION,
    });
    match err {
        Error::Parse { line, .. } => record["line"] = (*line).into(),
        Error::Validation { field, .. } => record["field"] = field.clone().into(),
        Error::Decomposition {
            seed, realization, ..
        } => {
            record["seed"] = serde_json::json!(seed);
            record["realization"] = serde_json::json!(realization);
        }
        _ => {}
    }
    record
}
