//! Ordered lattices and seeded positional / detuning disorder.
//!
//! Conventions: the half-waveguide chain lies along `z` with the mirror at
//! `z = 0` and atoms at `z_i = i·a`, `i = 1..N`. The free-space chain lies along
//! `x`; square and cubic lattices fill the `xy` plane and `xyz` volume with the
//! same one-based indexing. Free-space dipoles point along `ẑ`.

use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seeding::{realization_rng, StreamPurpose};
use crate::units::MIN_SEPARATION;

/// Number of redraws allowed for one atom before giving up.
pub const MAX_RESAMPLE_ATTEMPTS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Environment {
    HalfWaveguide,
    #[serde(rename = "free_space_1d")]
    FreeSpace1D,
    #[serde(rename = "free_space_2d")]
    FreeSpace2D,
    #[serde(rename = "free_space_3d")]
    FreeSpace3D,
}

impl Environment {
    pub fn dimension(self) -> usize {
        match self {
            Environment::HalfWaveguide | Environment::FreeSpace1D => 1,
            Environment::FreeSpace2D => 2,
            Environment::FreeSpace3D => 3,
        }
    }

    pub fn is_free_space(self) -> bool {
        !matches!(self, Environment::HalfWaveguide)
    }

    pub fn name(self) -> &'static str {
        match self {
            Environment::HalfWaveguide => "half_waveguide",
            Environment::FreeSpace1D => "free_space_1d",
            Environment::FreeSpace2D => "free_space_2d",
            Environment::FreeSpace3D => "free_space_3d",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "half_waveguide" => Some(Environment::HalfWaveguide),
            "free_space_1d" => Some(Environment::FreeSpace1D),
            "free_space_2d" => Some(Environment::FreeSpace2D),
            "free_space_3d" => Some(Environment::FreeSpace3D),
            _ => None,
        }
    }

    /// Cartesian axes the lattice extends along (and that disorder displaces).
    fn lattice_axes(self) -> &'static [usize] {
        match self {
            Environment::HalfWaveguide => &[2],
            Environment::FreeSpace1D => &[0],
            Environment::FreeSpace2D => &[0, 1],
            Environment::FreeSpace3D => &[0, 1, 2],
        }
    }

    /// Axis whose coordinate enters the emission phase of the fluorescence
    /// spectrum.
    pub fn chain_axis(self) -> usize {
        self.lattice_axes()[0]
    }
}

impl std::fmt::Display for Environment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Ordered lattice: environment, atoms per axis and spacing in `λ0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub environment: Environment,
    pub extents: Vec<usize>,
    pub spacing: f64,
}

impl LatticeSpec {
    pub fn new(environment: Environment, extents: Vec<usize>, spacing: f64) -> Self {
        Self {
            environment,
            extents,
            spacing,
        }
    }

    pub fn chain(environment: Environment, n: usize, spacing: f64) -> Self {
        Self::new(environment, vec![n], spacing)
    }

    pub fn atom_count(&self) -> usize {
        self.extents.iter().product()
    }

    pub fn validate(&self) -> Result<()> {
        let dim = self.environment.dimension();
        if self.extents.len() != dim {
            return Err(Error::validation(
                "extents",
                format!(
                    "{} needs {dim} extent(s), got {}",
                    self.environment,
                    self.extents.len()
                ),
            ));
        }
        if self.extents.contains(&0) {
            return Err(Error::validation("extents", "every extent must be ≥ 1"));
        }
        if !(self.spacing.is_finite() && self.spacing >= MIN_SEPARATION) {
            return Err(Error::validation(
                "a_over_lambda0",
                format!("lattice spacing must be > 0, got {}", self.spacing),
            ));
        }
        Ok(())
    }
}

/// Disorder strengths and the seed selecting one realization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DisorderSpec {
    /// Positional disorder width as a fraction of the lattice spacing.
    pub rd_over_a: f64,
    /// Detuning distribution width in `γ0`.
    pub omega_d: f64,
    pub seed: u64,
    pub realization_index: u64,
}

impl DisorderSpec {
    pub fn ordered() -> Self {
        Self {
            rd_over_a: 0.0,
            omega_d: 0.0,
            seed: 0,
            realization_index: 0,
        }
    }

    pub fn positional(rd_over_a: f64, seed: u64, realization_index: u64) -> Self {
        Self {
            rd_over_a,
            omega_d: 0.0,
            seed,
            realization_index,
        }
    }

    pub fn detuning(omega_d: f64, seed: u64, realization_index: u64) -> Self {
        Self {
            rd_over_a: 0.0,
            omega_d,
            seed,
            realization_index,
        }
    }

    pub fn with_realization(self, realization_index: u64) -> Self {
        Self {
            realization_index,
            ..self
        }
    }

    pub fn is_ordered(&self) -> bool {
        self.rd_over_a == 0.0 && self.omega_d == 0.0
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rd_over_a.is_finite() && self.rd_over_a >= 0.0) {
            return Err(Error::validation("rd_over_a", "rd_over_a must be ≥ 0"));
        }
        if !(self.omega_d.is_finite() && self.omega_d >= 0.0) {
            return Err(Error::validation(
                "omega_d_over_gamma0",
                "omega_d_over_gamma0 must be ≥ 0",
            ));
        }
        if self.omega_d > 1.0 {
            return Err(Error::validation(
                "omega_d_over_gamma0",
                "omega_d_over_gamma0 must be ≤ 1 (resonant Green's tensor)",
            ));
        }
        Ok(())
    }
}

/// One concrete arrangement of atoms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArrayGeometry {
    pub environment: Environment,
    #[serde(rename = "a")]
    pub spacing: f64,
    pub extents: Vec<usize>,
    pub dipole: [f64; 3],
    pub positions: Vec<[f64; 3]>,
    pub detunings: Vec<f64>,
}

impl ArrayGeometry {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Coordinate of atom `i` along the lattice's first axis.
    pub fn chain_coordinate(&self, i: usize) -> f64 {
        self.positions[i][self.environment.chain_axis()]
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.positions.len();
        if n == 0 {
            return Err(Error::validation("positions", "geometry has no atoms"));
        }
        if self.detunings.len() != n {
            return Err(Error::validation(
                "detunings",
                format!("expected {n} detunings, got {}", self.detunings.len()),
            ));
        }
        let norm = self.dipole.iter().map(|d| d * d).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::validation(
                "dipole",
                format!("|d| = {norm}, expected 1"),
            ));
        }
        if self
            .positions
            .iter()
            .flatten()
            .chain(self.detunings.iter())
            .any(|v| !v.is_finite())
        {
            return Err(Error::validation(
                "positions",
                "non-finite coordinate or detuning",
            ));
        }
        if self.environment == Environment::HalfWaveguide {
            if let Some(i) = self.positions.iter().position(|p| p[2] <= 0.0) {
                return Err(Error::validation(
                    "positions",
                    format!(
                        "atom {i} at z = {} is not in front of the mirror",
                        self.positions[i][2]
                    ),
                ));
            }
        }
        for i in 0..n {
            for j in 0..i {
                let d = distance(&self.positions[i], &self.positions[j]);
                if d < MIN_SEPARATION {
                    return Err(Error::SingularSeparation { i, j, distance: d });
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let geom: Self = serde_json::from_str(text)?;
        geom.validate()?;
        Ok(geom)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n").map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}

pub(crate) fn distance(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

/// Builds the ordered lattice described by `spec`.
pub fn build_ordered(spec: &LatticeSpec) -> Result<ArrayGeometry> {
    spec.validate()?;
    let a = spec.spacing;
    let n = spec.atom_count();
    let axes = spec.environment.lattice_axes();
    let mut positions = Vec::with_capacity(n);
    for flat in 0..n {
        let mut p = [0.0; 3];
        let mut rest = flat;
        for (&axis, &extent) in axes.iter().zip(&spec.extents) {
            p[axis] = (rest % extent + 1) as f64 * a;
            rest /= extent;
        }
        positions.push(p);
    }
    Ok(ArrayGeometry {
        environment: spec.environment,
        spacing: a,
        extents: spec.extents.clone(),
        dipole: [0.0, 0.0, 1.0],
        positions,
        detunings: vec![0.0; n],
    })
}

/// Offsets every atom by independent uniform draws of width `r_d·a` along
/// each lattice axis. Draws that put an atom behind the mirror or within the
/// minimum separation of an already placed atom are redrawn.
pub fn apply_positional_disorder(
    geom: &ArrayGeometry,
    dis: &DisorderSpec,
) -> Result<ArrayGeometry> {
    dis.validate()?;
    if dis.rd_over_a == 0.0 {
        return Ok(geom.clone());
    }
    let width = dis.rd_over_a * geom.spacing;
    let axes = geom.environment.lattice_axes();
    let mut rng = realization_rng(dis.seed, dis.realization_index, StreamPurpose::Positions);
    let mut out = geom.clone();
    for i in 0..geom.len() {
        let mut attempts = 0;
        loop {
            if attempts == MAX_RESAMPLE_ATTEMPTS {
                return Err(Error::DegenerateConfiguration { atom: i, attempts });
            }
            attempts += 1;
            let mut p = geom.positions[i];
            for &axis in axes {
                p[axis] += width * (rng.random::<f64>() - 0.5);
            }
            if geom.environment == Environment::HalfWaveguide && p[2] <= 0.0 {
                continue;
            }
            if out.positions[..i]
                .iter()
                .any(|q| distance(&p, q) < MIN_SEPARATION)
            {
                continue;
            }
            out.positions[i] = p;
            break;
        }
    }
    Ok(out)
}

/// Draws every detuning uniformly from `[-ω_d/2, ω_d/2)`.
pub fn apply_detuning_disorder(geom: &ArrayGeometry, dis: &DisorderSpec) -> Result<ArrayGeometry> {
    dis.validate()?;
    let mut out = geom.clone();
    if dis.omega_d == 0.0 {
        out.detunings.iter_mut().for_each(|d| *d = 0.0);
        return Ok(out);
    }
    let mut rng = realization_rng(dis.seed, dis.realization_index, StreamPurpose::Detunings);
    for d in &mut out.detunings {
        *d = dis.omega_d * (rng.random::<f64>() - 0.5);
    }
    Ok(out)
}

/// Ordered lattice followed by positional and detuning disorder.
pub fn build_realization(spec: &LatticeSpec, dis: &DisorderSpec) -> Result<ArrayGeometry> {
    let ordered = build_ordered(spec)?;
    let displaced = apply_positional_disorder(&ordered, dis)?;
    apply_detuning_disorder(&displaced, dis)
}
