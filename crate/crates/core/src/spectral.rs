//! Eigenmodes of the effective Hamiltonian.
//!
//! Modes are ordered by decreasing decay rate `-2 Im E_n`, so index `N - 1`
//! (the paper-style `n = N`) is the slowest decaying mode. Right eigenvectors
//! are normalized to unit 2-norm with their largest component made real and
//! positive. Ties in the decay rate are broken by `Re E` ascending, then by
//! the solver's original index.

use std::sync::Once;

use faer::{c64, Mat};

use crate::error::{Error, Result};
use crate::interactions::EffectiveHamiltonian;
use crate::linalg;
use crate::output::{Cell, CsvTable};

/// Eigenvector-matrix condition number above which propagation switches to
/// the direct matrix exponential.
pub const CONDITION_LIMIT: f64 = 1e8;
/// Residual tolerance relative to `‖H‖_F` for accepting a decomposition.
pub const RESIDUAL_TOLERANCE: f64 = 1e-8;
/// Decay rates below this are reported but flagged as numerically zero.
pub const MACHINE_EPSILON_RATE: f64 = 1e-14;

static SEQUENTIAL: Once = Once::new();

/// Keeps faer's kernels single threaded so results do not depend on the
/// thread pool; parallelism lives at the ensemble level.
pub(crate) fn force_sequential_kernels() {
    SEQUENTIAL.call_once(|| faer::set_global_parallelism(faer::Par::Seq));
}

#[derive(Debug, Clone)]
pub struct ModeDecomposition {
    /// Eigenvalues in sorted order.
    pub eigenvalues: Vec<c64>,
    /// Columns are the normalized right eigenvectors in sorted order.
    pub vectors: Mat<c64>,
    /// Inverse of `vectors`.
    pub inverse: Mat<c64>,
    pub decay_rates: Vec<f64>,
    pub iprs: Vec<f64>,
    /// `‖Hψ_n - E_n ψ_n‖` per sorted mode.
    pub residuals: Vec<f64>,
    /// `order[n]` is the solver index of sorted mode `n`.
    pub order: Vec<usize>,
    /// `σ_max / σ_min` of `vectors`.
    pub eigvec_condition: f64,
    pub ill_conditioned: bool,
    /// Copy of the decomposed matrix for the exponential fallback.
    pub hamiltonian: Mat<c64>,
    pub hamiltonian_norm: f64,
}

impl ModeDecomposition {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn mode(&self, n: usize) -> Vec<c64> {
        (0..self.len()).map(|j| self.vectors[(j, n)]).collect()
    }

    pub fn at_machine_epsilon(&self, n: usize) -> bool {
        self.decay_rates[n].abs() < MACHINE_EPSILON_RATE
    }

    pub fn decay_rate_sum(&self) -> f64 {
        self.decay_rates.iter().sum()
    }

    /// Mean IPR of the `count` slowest modes.
    pub fn slowest_mean_ipr(&self, count: usize) -> f64 {
        let count = count.min(self.len()).max(1);
        self.iprs[self.len() - count..].iter().sum::<f64>() / count as f64
    }

    /// `modes.csv`: one row per sorted mode (`n_sorted` is one-based).
    pub fn modes_csv(&self) -> CsvTable {
        let mut t = CsvTable::new(&["n_sorted", "re_E", "im_E", "decay_rate", "ipr", "residual"]);
        for n in 0..self.len() {
            let e = self.eigenvalues[n];
            t.row(&[
                (n + 1).into(),
                e.re.into(),
                e.im.into(),
                self.decay_rates[n].into(),
                self.iprs[n].into(),
                self.residuals[n].into(),
            ]);
        }
        t
    }

    /// `profiles.csv`: `|ψ_n(j)|` with one-based `n_sorted` and `j`.
    pub fn profiles_csv(&self) -> CsvTable {
        let mut t = CsvTable::new(&["n_sorted", "j", "abs_psi"]);
        for (n, row) in mode_profile_table(self).iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                t.row(&[Cell::from(n + 1), Cell::from(j + 1), Cell::from(v)]);
            }
        }
        t
    }
}

/// Full non-Hermitian eigendecomposition of `H`.
pub fn decompose(h: &EffectiveHamiltonian) -> Result<ModeDecomposition> {
    decompose_matrix(&h.h).map_err(|e| match e {
        Error::Decomposition { reason, .. } => Error::Decomposition {
            seed: None,
            realization: None,
            reason: format!("{reason} ({} atoms, {})", h.len(), h.geometry.environment),
        },
        other => other,
    })
}

/// [`decompose`] with the realization's seed attached to any failure.
pub fn decompose_tagged(
    h: &EffectiveHamiltonian,
    seed: u64,
    realization: u64,
) -> Result<ModeDecomposition> {
    decompose(h).map_err(|e| match e {
        Error::Decomposition { reason, .. } => Error::Decomposition {
            seed: Some(seed),
            realization: Some(realization),
            reason,
        },
        other => other,
    })
}

fn failure(reason: impl Into<String>) -> Error {
    Error::Decomposition {
        seed: None,
        realization: None,
        reason: reason.into(),
    }
}

pub fn decompose_matrix(h: &Mat<c64>) -> Result<ModeDecomposition> {
    force_sequential_kernels();
    let n = h.nrows();
    if n == 0 || h.ncols() != n {
        return Err(failure("matrix must be square and non-empty"));
    }
    if (0..n).any(|j| (0..n).any(|i| !(h[(i, j)].re.is_finite() && h[(i, j)].im.is_finite()))) {
        return Err(failure("matrix has non-finite entries"));
    }
    let evd = h.eigen().map_err(|e| failure(format!("{e:?}")))?;
    let raw_values: Vec<c64> = (0..n).map(|k| evd.S()[k]).collect();
    let raw_vectors = evd.U();

    let mut order: Vec<usize> = (0..n).collect();
    let rate = |k: usize| -2.0 * raw_values[k].im;
    order.sort_by(|&a, &b| {
        rate(b)
            .total_cmp(&rate(a))
            .then(raw_values[a].re.total_cmp(&raw_values[b].re))
            .then(a.cmp(&b))
    });

    let mut vectors = Mat::<c64>::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        let norm = (0..n)
            .map(|j| raw_vectors[(j, k)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(failure(format!("eigenvector {k} has norm {norm}")));
        }
        let pivot = (0..n)
            .max_by(|&a, &b| {
                raw_vectors[(a, k)]
                    .norm()
                    .total_cmp(&raw_vectors[(b, k)].norm())
            })
            .unwrap_or(0);
        let phase = raw_vectors[(pivot, k)].conj() / raw_vectors[(pivot, k)].norm();
        for j in 0..n {
            vectors[(j, col)] = raw_vectors[(j, k)] * phase / norm;
        }
    }
    let eigenvalues: Vec<c64> = order.iter().map(|&k| raw_values[k]).collect();
    let decay_rates: Vec<f64> = eigenvalues.iter().map(|e| -2.0 * e.im).collect();
    let iprs: Vec<f64> = (0..n)
        .map(|col| (0..n).map(|j| vectors[(j, col)].norm_sqr().powi(2)).sum())
        .collect();

    let hv = h * &vectors;
    let residuals: Vec<f64> = (0..n)
        .map(|col| {
            (0..n)
                .map(|j| (hv[(j, col)] - eigenvalues[col] * vectors[(j, col)]).norm_sqr())
                .sum::<f64>()
                .sqrt()
        })
        .collect();
    let hamiltonian_norm = h.norm_l2();
    let worst = residuals.iter().copied().fold(0.0, f64::max);
    if worst > RESIDUAL_TOLERANCE * hamiltonian_norm.max(f64::MIN_POSITIVE) {
        return Err(failure(format!(
            "residual {worst:e} exceeds {RESIDUAL_TOLERANCE:e}·‖H‖ = {:e}",
            RESIDUAL_TOLERANCE * hamiltonian_norm
        )));
    }

    let singular = vectors
        .singular_values()
        .map_err(|e| failure(format!("{e:?}")))?;
    let smax = singular.iter().copied().fold(0.0, f64::max);
    let smin = singular.iter().copied().fold(f64::INFINITY, f64::min);
    let eigvec_condition = if smin > 0.0 {
        smax / smin
    } else {
        f64::INFINITY
    };
    let inverse = linalg::inverse(&vectors);

    Ok(ModeDecomposition {
        eigenvalues,
        vectors,
        inverse,
        decay_rates,
        iprs,
        residuals,
        order,
        eigvec_condition,
        ill_conditioned: eigvec_condition.is_nan() || eigvec_condition >= CONDITION_LIMIT,
        hamiltonian: h.clone(),
        hamiltonian_norm,
    })
}

/// Inverse participation ratio `Σ_j |ψ_j|⁴` of a normalized vector.
pub fn ipr(psi: &[c64]) -> Result<f64> {
    let norm2: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
    if (norm2.sqrt() - 1.0).abs() > 1e-9 {
        return Err(Error::validation(
            "psi",
            format!("IPR needs a normalized vector, got norm {}", norm2.sqrt()),
        ));
    }
    Ok(psi.iter().map(|z| z.norm_sqr().powi(2)).sum())
}

/// `|2 Im E_N|` for the slowest mode.
pub fn slowest_rate(dec: &ModeDecomposition) -> f64 {
    dec.decay_rates[dec.len() - 1].abs()
}

/// `|ψ_n(j)|` with rows in sorted mode order.
pub fn mode_profile_table(dec: &ModeDecomposition) -> Vec<Vec<f64>> {
    (0..dec.len())
        .map(|n| (0..dec.len()).map(|j| dec.vectors[(j, n)].norm()).collect())
        .collect()
}
