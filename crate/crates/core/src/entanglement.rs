//! Bipartite entropies in the single-excitation sector.
//!
//! Under the effective Hamiltonian the conditional amplitudes `c` lose norm;
//! the missing weight sits in the global ground state, so the full state is
//! `ρ = |ψ⟩⟨ψ| + (1 - ‖c‖²)|G⟩⟨G|`. Tracing out the complement of a subset `X`
//! leaves a two-level block with eigenvalues `p_X = Σ_{j∈X} |c_j|²` and
//! `1 - p_X`, hence `S(X) = h(p_X)` with the binary entropy `h` in nats.

use faer::c64;

use crate::dynamics::{Propagator, SingleExcitationState};
use crate::error::{Error, Result};
use crate::output::{Cell, CsvTable};
use crate::spectral::ModeDecomposition;

const NORM_SLACK: f64 = 1e-9;

/// Binary entropy `-p ln p - (1-p) ln(1-p)`, zero at the endpoints.
pub fn binary_entropy(p: f64) -> f64 {
    let term = |x: f64| if x <= 0.0 { 0.0 } else { -x * x.ln() };
    let p = p.clamp(0.0, 1.0);
    term(p) + term(1.0 - p)
}

/// Half-chain cut: `A` holds the first `⌈N/2⌉` atoms, `B` the rest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteCut {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

impl BipartiteCut {
    pub fn half(n: usize) -> Self {
        let split = n.div_ceil(2);
        Self {
            a: (0..split).collect(),
            b: (split..n).collect(),
        }
    }

    pub fn new(a: Vec<usize>, b: Vec<usize>) -> Result<Self> {
        let mut all: Vec<usize> = a.iter().chain(&b).copied().collect();
        all.sort_unstable();
        if all.iter().enumerate().any(|(k, &v)| k != v) {
            return Err(Error::validation(
                "cut",
                "the two parts must be disjoint and cover 0..N",
            ));
        }
        Ok(Self { a, b })
    }

    pub fn swapped(&self) -> Self {
        Self {
            a: self.b.clone(),
            b: self.a.clone(),
        }
    }

    pub fn describe(&self) -> String {
        let span = |v: &[usize]| match (v.first(), v.last()) {
            (Some(f), Some(l)) => format!("{}..{}", f + 1, l + 1),
            _ => "empty".to_string(),
        };
        format!("A = atoms {}, B = atoms {}", span(&self.a), span(&self.b))
    }
}

fn weight(c: &[c64], subset: &[usize]) -> Result<f64> {
    subset
        .iter()
        .map(|&j| {
            c.get(j)
                .map(|z| z.norm_sqr())
                .ok_or_else(|| Error::validation("subset", format!("index {j} out of range")))
        })
        .sum()
}

fn check_norm(c: &[c64]) -> Result<f64> {
    let total: f64 = c.iter().map(|z| z.norm_sqr()).sum();
    if total > 1.0 + NORM_SLACK {
        return Err(Error::validation(
            "amplitudes",
            format!("‖c‖² = {total} exceeds 1"),
        ));
    }
    Ok(total)
}

/// Von Neumann entropy (nats) of the atoms in `subset`.
pub fn subsystem_entropy(c: &[c64], subset: &[usize]) -> Result<f64> {
    check_norm(c)?;
    Ok(binary_entropy(weight(c, subset)?))
}

/// `I(A, B) = S(A) + S(B) - S(A, B)` in nats, with `S(A, B) = h(‖c‖²)`.
pub fn mutual_information(c: &[c64], cut: &BipartiteCut) -> Result<f64> {
    let total = check_norm(c)?;
    let pa = weight(c, &cut.a)?;
    let pb = weight(c, &cut.b)?;
    let info = binary_entropy(pa) + binary_entropy(pb) - binary_entropy(total);
    Ok(info.max(0.0))
}

/// `(t, I(t))` along the trajectory started from `state0`.
pub fn mutual_information_curve(
    state0: &SingleExcitationState,
    dec: &ModeDecomposition,
    cut: &BipartiteCut,
    times: &[f64],
) -> Result<Vec<(f64, f64)>> {
    let states = Propagator::new(state0, dec)?.trajectory(times)?;
    times
        .iter()
        .zip(&states)
        .map(|(&t, s)| Ok((t, mutual_information(&s.amplitudes, cut)?)))
        .collect()
}

/// `mutualinfo.csv` for one or more trajectories.
pub fn mutual_information_csv(cut: &BipartiteCut, curves: &[Vec<(f64, f64)>]) -> CsvTable {
    let mut t = CsvTable::with_comments(
        &[
            "entropy log base: e (nats)".to_string(),
            format!("cut: {}", cut.describe()),
        ],
        &["t", "I", "trajectory_id"],
    );
    for (id, curve) in curves.iter().enumerate() {
        for &(time, info) in curve {
            t.row(&[Cell::from(time), Cell::from(info), Cell::from(id)]);
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    fn re(v: &[f64]) -> Vec<c64> {
        v.iter().map(|&x| c64::new(x, 0.0)).collect()
    }

    #[test]
    fn binary_entropy_endpoints_and_midpoint() {
        assert_eq!(binary_entropy(0.0), 0.0);
        assert_eq!(binary_entropy(1.0), 0.0);
        assert!((binary_entropy(0.5) - LN_2).abs() < 1e-15);
    }

    #[test]
    fn product_state_has_zero_entropy() {
        let c = re(&[0.0, 0.0, 1.0]);
        assert_eq!(subsystem_entropy(&c, &[0, 1]).unwrap(), 0.0);
        assert_eq!(mutual_information(&c, &BipartiteCut::half(3)).unwrap(), 0.0);
    }

    #[test]
    fn bell_pair_values() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let c = re(&[s, s]);
        assert!((subsystem_entropy(&c, &[0]).unwrap() - LN_2).abs() < 1e-15);
        let info = mutual_information(&c, &BipartiteCut::half(2)).unwrap();
        assert!((info - 2.0 * LN_2).abs() < 1e-12);
        assert!((info - 1.386294).abs() < 1e-6);
    }

    #[test]
    fn half_cut_layout() {
        let cut = BipartiteCut::half(50);
        assert_eq!(cut.a.len(), 25);
        assert!(cut.b.contains(&25)); // atom 26, one-based
        let odd = BipartiteCut::half(5);
        assert_eq!(odd.a, vec![0, 1, 2]);
        assert_eq!(odd.b, vec![3, 4]);
        assert!(BipartiteCut::new(vec![0, 1], vec![1, 2]).is_err());
        assert!(BipartiteCut::new(vec![0], vec![2]).is_err());
        assert_eq!(cut.describe(), "A = atoms 1..25, B = atoms 26..50");
    }

    #[test]
    fn overfull_norm_is_rejected() {
        let c = re(&[1.0, 0.1]);
        assert!(matches!(
            subsystem_entropy(&c, &[0]),
            Err(Error::Validation { .. })
        ));
        assert!(mutual_information(&c, &BipartiteCut::half(2)).is_err());
    }

    #[test]
    fn csv_header_records_log_base_and_cut() {
        let cut = BipartiteCut::half(4);
        let t = mutual_information_csv(&cut, &[vec![(0.0, 0.0), (1.0, 0.25)]]);
        let mut lines = t.as_str().lines();
        assert_eq!(lines.next(), Some("# entropy log base: e (nats)"));
        assert_eq!(lines.next(), Some("# cut: A = atoms 1..2, B = atoms 3..4"));
        assert_eq!(lines.next(), Some("t,I,trajectory_id"));
        assert_eq!(t.as_str().lines().count(), 5);
    }
}
