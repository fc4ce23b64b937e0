//! Single-excitation dynamics and the dynamic fluorescence spectrum.
//!
//! Amplitudes evolve as `c(t) = exp(-iHt) c(0)`. With a well-conditioned
//! eigenbasis this is evaluated exactly as `V exp(-iΛt) V⁻¹ c(0)`; otherwise the
//! matrix exponential of `-iHt` is formed directly.

use faer::{c64, Mat};
use rand::Rng;

use crate::error::{Error, Result};
use crate::geometry::ArrayGeometry;
use crate::linalg::expm;
use crate::output::CsvTable;
use crate::spectral::ModeDecomposition;
use crate::units::K0;

/// Extra decay assigned to numerically dark poles in the spectrum.
pub const SPECTRUM_REGULARIZER: f64 = 1e-12;
/// Grid points closer than this to a regularized pole are flagged.
pub const POLE_FLAG_WINDOW: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct SingleExcitationState {
    /// `c_j`: amplitude of the state with only atom `j` excited.
    pub amplitudes: Vec<c64>,
    pub time: f64,
}

impl SingleExcitationState {
    pub fn new(amplitudes: Vec<c64>) -> Self {
        Self {
            amplitudes,
            time: 0.0,
        }
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    /// Excited population `Σ_j |c_j|²`.
    pub fn excited_population(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// Equal-weight superposition with independent uniform phases.
pub fn random_phase_state<R: Rng + ?Sized>(n: usize, rng: &mut R) -> SingleExcitationState {
    let amp = 1.0 / (n as f64).sqrt();
    let amplitudes = (0..n)
        .map(|_| c64::from_polar(amp, std::f64::consts::TAU * rng.random::<f64>()))
        .collect();
    SingleExcitationState::new(amplitudes)
}

/// Atom `site` (one-based) excited, all others in the ground state.
pub fn site_excitation_state(n: usize, site: usize) -> Result<SingleExcitationState> {
    if site == 0 || site > n {
        return Err(Error::validation(
            "initial_site",
            format!("site {site} outside 1..={n}"),
        ));
    }
    let mut amplitudes = vec![c64::new(0.0, 0.0); n];
    amplitudes[site - 1] = c64::new(1.0, 0.0);
    Ok(SingleExcitationState::new(amplitudes))
}

fn apply(m: &Mat<c64>, v: &[c64]) -> Vec<c64> {
    (0..m.nrows())
        .map(|i| v.iter().enumerate().map(|(j, x)| m[(i, j)] * x).sum())
        .collect()
}

fn check_finite(state: &SingleExcitationState) -> Result<()> {
    if state
        .amplitudes
        .iter()
        .all(|z| z.re.is_finite() && z.im.is_finite())
    {
        Ok(())
    } else {
        Err(Error::Propagation(format!(
            "non-finite amplitudes at t = {}",
            state.time
        )))
    }
}

/// `exp(-iHt) c` via the direct matrix exponential.
pub fn propagate_direct(
    state: &SingleExcitationState,
    h: &Mat<c64>,
    t: f64,
) -> Result<SingleExcitationState> {
    let n = h.nrows();
    let generator = Mat::from_fn(n, n, |i, j| h[(i, j)] * c64::new(0.0, -t));
    let out = SingleExcitationState {
        amplitudes: apply(&expm(&generator), &state.amplitudes),
        time: state.time + t,
    };
    check_finite(&out)?;
    Ok(out)
}

/// Evolves `state` forward by `t`.
pub fn propagate(
    state: &SingleExcitationState,
    dec: &ModeDecomposition,
    t: f64,
) -> Result<SingleExcitationState> {
    Propagator::new(state, dec)?.at(t)
}

/// Evaluates one trajectory at many times without refactoring.
#[derive(Debug)]
pub struct Propagator<'a> {
    dec: &'a ModeDecomposition,
    initial: SingleExcitationState,
    modal: Option<Vec<c64>>,
}

impl<'a> Propagator<'a> {
    pub fn new(state: &SingleExcitationState, dec: &'a ModeDecomposition) -> Result<Self> {
        if state.len() != dec.len() {
            return Err(Error::validation(
                "state",
                format!("{} amplitudes for {} atoms", state.len(), dec.len()),
            ));
        }
        let modal = (!dec.ill_conditioned).then(|| apply(&dec.inverse, &state.amplitudes));
        Ok(Self {
            dec,
            initial: state.clone(),
            modal,
        })
    }

    /// Coefficients of the initial state in the eigenbasis, when used.
    pub fn modal_coefficients(&self) -> Option<&[c64]> {
        self.modal.as_deref()
    }

    pub fn at(&self, t: f64) -> Result<SingleExcitationState> {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::validation(
                "t",
                format!("elapsed time must be ≥ 0, got {t}"),
            ));
        }
        match &self.modal {
            Some(b) => {
                let n = self.dec.len();
                let weights: Vec<c64> = (0..n)
                    .map(|k| b[k] * (c64::new(0.0, -t) * self.dec.eigenvalues[k]).exp())
                    .collect();
                let out = SingleExcitationState {
                    amplitudes: apply(&self.dec.vectors, &weights),
                    time: self.initial.time + t,
                };
                check_finite(&out)?;
                Ok(out)
            }
            None => propagate_direct(&self.initial, &self.dec.hamiltonian, t),
        }
    }

    /// States at each elapsed time in `times` (ascending).
    pub fn trajectory(&self, times: &[f64]) -> Result<Vec<SingleExcitationState>> {
        check_ascending(times)?;
        if self.modal.is_some() {
            return times.iter().map(|&t| self.at(t)).collect();
        }
        // Direct path: step between consecutive samples.
        let mut out = Vec::with_capacity(times.len());
        let mut current = self.initial.clone();
        let mut elapsed = 0.0;
        for &t in times {
            current = propagate_direct(&current, &self.dec.hamiltonian, t - elapsed)?;
            elapsed = t;
            out.push(current.clone());
        }
        Ok(out)
    }
}

pub(crate) fn check_ascending(times: &[f64]) -> Result<()> {
    if times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
        return Err(Error::validation("times", "times must be finite and ≥ 0"));
    }
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::validation("times", "times must be ascending"));
    }
    Ok(())
}

/// `(t, p_exc(t))` for each elapsed time.
pub fn population_curve(
    state0: &SingleExcitationState,
    dec: &ModeDecomposition,
    times: &[f64],
) -> Result<Vec<(f64, f64)>> {
    let states = Propagator::new(state0, dec)?.trajectory(times)?;
    Ok(times
        .iter()
        .zip(states)
        .map(|(&t, s)| (t, s.excited_population()))
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    pub omega: Vec<f64>,
    pub values: Vec<f64>,
    pub t_prime: f64,
    /// Grid points evaluated next to a regularized (numerically dark) pole.
    pub regularized: Vec<bool>,
}

impl SpectrumResult {
    pub fn to_csv(&self) -> CsvTable {
        let mut t = CsvTable::new(&["omega", "S", "t_prime", "regularized"]);
        for k in 0..self.omega.len() {
            t.row(&[
                self.omega[k].into(),
                self.values[k].into(),
                self.t_prime.into(),
                (self.regularized[k] as usize).into(),
            ]);
        }
        t
    }
}

/// `count` evenly spaced detunings from `lo` to `hi` inclusive.
pub fn omega_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..count)
            .map(|k| lo + (hi - lo) * k as f64 / (count - 1) as f64)
            .collect(),
    }
}

/// 400 points over `[-3γ0, 3γ0]`.
pub fn default_omega_grid() -> Vec<f64> {
    omega_grid(-3.0, 3.0, 400)
}

/// Dynamic fluorescence spectrum at observation time `t′ = state.time`,
///
/// `S(ω, t′) = 2 Re Σ_n ∫_0^∞ dτ e^{i(k0 z_n - ωτ)} c_n*(t′+τ) c_n(t′)`,
///
/// with the τ-integral done analytically over the eigenmodes:
/// `∫_0^∞ e^{-iωτ} e^{iE_k*τ} dτ = i / (E_k* - ω)`. `z_n` is the coordinate
/// along the chain axis.
pub fn fluorescence_spectrum(
    state: &SingleExcitationState,
    dec: &ModeDecomposition,
    geom: &ArrayGeometry,
    omega: &[f64],
) -> Result<SpectrumResult> {
    let n = dec.len();
    if geom.len() != n || state.len() != n {
        return Err(Error::validation(
            "state",
            "state, geometry and decomposition sizes differ",
        ));
    }
    if omega.iter().any(|w| !w.is_finite()) || omega.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::validation(
            "omega",
            "grid must be finite and strictly increasing",
        ));
    }
    let b = modal_coefficients(state, dec)?;
    // w_k = Σ_n e^{ik0 z_n} c_n V_nk* b_k*
    let weights: Vec<c64> = (0..n)
        .map(|k| {
            let overlap: c64 = (0..n)
                .map(|j| {
                    c64::from_polar(1.0, K0 * geom.chain_coordinate(j))
                        * state.amplitudes[j]
                        * dec.vectors[(j, k)].conj()
                })
                .sum();
            overlap * b[k].conj()
        })
        .collect();
    let poles: Vec<(c64, bool)> = dec
        .eigenvalues
        .iter()
        .zip(&dec.decay_rates)
        .map(|(e, &rate)| {
            if rate < SPECTRUM_REGULARIZER {
                (c64::new(e.re, SPECTRUM_REGULARIZER / 2.0), true)
            } else {
                (e.conj(), false)
            }
        })
        .collect();

    let mut values = Vec::with_capacity(omega.len());
    let mut regularized = Vec::with_capacity(omega.len());
    for &w in omega {
        let mut sum = c64::new(0.0, 0.0);
        let mut flagged = false;
        for (k, &(pole, reg)) in poles.iter().enumerate() {
            let denom = pole - w;
            if reg && denom.norm() < POLE_FLAG_WINDOW && weights[k].norm() > 0.0 {
                flagged = true;
            }
            sum += weights[k] * c64::new(0.0, 1.0) / denom;
        }
        let s = 2.0 * sum.re;
        if !s.is_finite() {
            return Err(Error::Propagation(format!(
                "spectrum not finite at ω = {w}"
            )));
        }
        values.push(s);
        regularized.push(flagged);
    }
    Ok(SpectrumResult {
        omega: omega.to_vec(),
        values,
        t_prime: state.time,
        regularized,
    })
}

/// `V⁻¹ c`, falling back to a linear solve when the stored inverse is
/// unreliable.
fn modal_coefficients(state: &SingleExcitationState, dec: &ModeDecomposition) -> Result<Vec<c64>> {
    use faer::linalg::solvers::Solve;
    if !dec.ill_conditioned {
        return Ok(apply(&dec.inverse, &state.amplitudes));
    }
    let n = dec.len();
    let rhs = Mat::from_fn(n, 1, |i, _| state.amplitudes[i]);
    let x = dec.vectors.full_piv_lu().solve(&rhs);
    let out: Vec<c64> = (0..n).map(|i| x[(i, 0)]).collect();
    if out.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(out)
    } else {
        Err(Error::Propagation(
            "eigenbasis coefficients not finite".into(),
        ))
    }
}
