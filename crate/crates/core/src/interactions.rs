//! Pair couplings and the single-excitation effective Hamiltonian.
//!
//! Every pair contributes a complex coupling `M_ij`; its real part is the
//! coherent exchange `J_ij` and `-2 Im M_ij` is the dissipative coupling
//! `Γ_ij`. The effective Hamiltonian in the frame rotating at `ω0` is
//! `H = J - (i/2) Γ + diag(Δ)`.

use faer::{c64, Mat, Side};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{distance, ArrayGeometry, Environment};
use crate::units::{cos_2pi, sin_2pi, GAMMA0, K0, LAMBDA0, MIN_SEPARATION};

/// Below this value of `k0 r` the free-space kernel switches to its series.
pub const SERIES_SWITCH: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coupling {
    pub j: f64,
    pub gamma: f64,
}

/// Half-waveguide coupling between atoms at `z_i`, `z_j` in front of a mirror
/// at `z = 0`: `M = -(iγ0/2)[exp(-ik0|z_i - z_j|) - exp(-ik0(z_i + z_j))]`.
pub fn hwg_couplings(z_i: f64, z_j: f64) -> Result<Coupling> {
    if !(z_i > 0.0 && z_j > 0.0) {
        return Err(Error::Domain(format!(
            "half-waveguide kernel needs z > 0, got z_i = {z_i}, z_j = {z_j}"
        )));
    }
    let direct = (z_i - z_j).abs() / LAMBDA0;
    let image = (z_i + z_j) / LAMBDA0;
    Ok(Coupling {
        j: -0.5 * GAMMA0 * (sin_2pi(direct) - sin_2pi(image)),
        gamma: GAMMA0 * (cos_2pi(direct) - cos_2pi(image)),
    })
}

/// The four radial functions of the vacuum Green's tensor projected on a real
/// dipole, each divided by `x = k0 r`:
/// `Re/Im[e^{ix} A]/x` (transverse part) and `Re/Im[e^{ix} B]/x`
/// (longitudinal part), with `A = 1 + i/x - 1/x²`, `B = -1 - 3i/x + 3/x²`.
#[derive(Debug, Clone, Copy)]
struct RadialParts {
    re_a: f64,
    im_a: f64,
    re_b: f64,
    im_b: f64,
}

fn radial_parts(x: f64) -> RadialParts {
    if x < SERIES_SWITCH {
        let x2 = x * x;
        let x3 = x2 * x;
        RadialParts {
            re_a: -1.0 / x3 + 0.5 / x - 0.375 * x,
            im_a: 2.0 / 3.0 - 2.0 * x2 / 15.0 + x2 * x2 / 140.0,
            re_b: 3.0 / x3 + 0.5 / x + 0.125 * x,
            im_b: x2 / 15.0 - x2 * x2 / 210.0,
        }
    } else {
        let (s, c) = x.sin_cos();
        let x2 = x * x;
        let x3 = x2 * x;
        RadialParts {
            re_a: c / x - s / x2 - c / x3,
            im_a: s / x + c / x2 - s / x3,
            re_b: -c / x + 3.0 * s / x2 + 3.0 * c / x3,
            im_b: -s / x - 3.0 * c / x2 + 3.0 * s / x3,
        }
    }
}

/// Free-space dipole-dipole coupling `M = -(3πγ0/k0) d†G(r, ω0) d` for a
/// real unit dipole `d` and separation `r` (contact term excluded).
pub fn green_coupling(r: [f64; 3], dipole: [f64; 3]) -> Result<Coupling> {
    let dist = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
    if dist.is_nan() || dist < MIN_SEPARATION {
        return Err(Error::SingularSeparation {
            i: 0,
            j: 1,
            distance: dist,
        });
    }
    let x = K0 * dist;
    let proj = (dipole[0] * r[0] + dipole[1] * r[1] + dipole[2] * r[2]) / dist;
    let d2 = dipole.iter().map(|d| d * d).sum::<f64>();
    let p = radial_parts(x);
    let cos2 = proj * proj;
    Ok(Coupling {
        j: -0.75 * GAMMA0 * (d2 * p.re_a + cos2 * p.re_b),
        gamma: 1.5 * GAMMA0 * (d2 * p.im_a + cos2 * p.im_b),
    })
}

/// Real symmetric coherent (`j`) and dissipative (`gamma`) coupling matrices.
#[derive(Debug, Clone)]
pub struct InteractionMatrices {
    pub j: Mat<f64>,
    pub gamma: Mat<f64>,
}

impl InteractionMatrices {
    pub fn len(&self) -> usize {
        self.j.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn gamma_trace(&self) -> f64 {
        (0..self.len()).map(|i| self.gamma[(i, i)]).sum()
    }

    /// Smallest eigenvalue of `Γ`; non-negative up to rounding.
    pub fn gamma_min_eigenvalue(&self) -> Result<f64> {
        let values = self
            .gamma
            .self_adjoint_eigenvalues(Side::Lower)
            .map_err(|e| Error::Decomposition {
                seed: None,
                realization: None,
                reason: format!("{e:?}"),
            })?;
        Ok(values.first().copied().unwrap_or(0.0))
    }
}

/// Which physical couplings enter the Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CouplingModel {
    /// Environment-appropriate pair kernel.
    #[default]
    Collective,
    /// Independent atoms decaying at `γ0` (reference curves).
    NonInteracting,
}

#[derive(Debug, Clone)]
pub struct EffectiveHamiltonian {
    pub h: Mat<c64>,
    pub couplings: InteractionMatrices,
    pub geometry: ArrayGeometry,
}

impl EffectiveHamiltonian {
    pub fn len(&self) -> usize {
        self.h.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Frobenius norm of `H`.
    pub fn norm(&self) -> f64 {
        self.h.norm_l2()
    }

    /// Row-major dump with real and imaginary parts interleaved per entry.
    pub fn to_csv(&self) -> String {
        let n = self.len();
        let mut out = String::new();
        for i in 0..n {
            let row: Vec<String> = (0..n)
                .flat_map(|j| {
                    let z = self.h[(i, j)];
                    [crate::output::fmt_f64(z.re), crate::output::fmt_f64(z.im)]
                })
                .collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        let n = self.len();
        let grab = |m: &Mat<f64>| -> Vec<Vec<f64>> {
            (0..n)
                .map(|i| (0..n).map(|j| m[(i, j)]).collect())
                .collect()
        };
        let h_re: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| self.h[(i, j)].re).collect())
            .collect();
        let h_im: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| self.h[(i, j)].im).collect())
            .collect();
        Ok(serde_json::to_string(&serde_json::json!({
            "n": n,
            "environment": self.geometry.environment,
            "h_re": h_re,
            "h_im": h_im,
            "j": grab(&self.couplings.j),
            "gamma": grab(&self.couplings.gamma),
        }))?)
    }
}

/// Fills `J` and `Γ` for every pair of `geom`.
pub fn interaction_matrices(geom: &ArrayGeometry) -> Result<InteractionMatrices> {
    let n = geom.len();
    let mut j = Mat::<f64>::zeros(n, n);
    let mut gamma = Mat::<f64>::zeros(n, n);
    for a in 0..n {
        for b in 0..=a {
            let c = pair_coupling(geom, a, b)?;
            j[(a, b)] = c.j;
            j[(b, a)] = c.j;
            gamma[(a, b)] = c.gamma;
            gamma[(b, a)] = c.gamma;
        }
    }
    Ok(InteractionMatrices { j, gamma })
}

fn pair_coupling(geom: &ArrayGeometry, a: usize, b: usize) -> Result<Coupling> {
    let (pa, pb) = (&geom.positions[a], &geom.positions[b]);
    match geom.environment {
        // The i = j term keeps the mirror-image self-interaction, which
        // modulates both the on-site decay and the on-site shift with z.
        Environment::HalfWaveguide => hwg_couplings(pa[2], pb[2]),
        _ if a == b => Ok(Coupling {
            j: 0.0,
            gamma: GAMMA0,
        }),
        _ => {
            let r = [pa[0] - pb[0], pa[1] - pb[1], pa[2] - pb[2]];
            green_coupling(r, geom.dipole).map_err(|e| match e {
                Error::SingularSeparation { .. } => Error::SingularSeparation {
                    i: a,
                    j: b,
                    distance: distance(pa, pb),
                },
                other => other,
            })
        }
    }
}

pub fn build_hamiltonian(geom: &ArrayGeometry) -> Result<EffectiveHamiltonian> {
    build_hamiltonian_with(geom, CouplingModel::Collective)
}

pub fn build_hamiltonian_with(
    geom: &ArrayGeometry,
    model: CouplingModel,
) -> Result<EffectiveHamiltonian> {
    geom.validate()?;
    let n = geom.len();
    let couplings = match model {
        CouplingModel::Collective => interaction_matrices(geom)?,
        CouplingModel::NonInteracting => InteractionMatrices {
            j: Mat::zeros(n, n),
            gamma: Mat::from_fn(n, n, |i, j| if i == j { GAMMA0 } else { 0.0 }),
        },
    };
    let h = Mat::<c64>::from_fn(n, n, |i, j| {
        let detuning = if i == j { geom.detunings[i] } else { 0.0 };
        c64::new(
            couplings.j[(i, j)] + detuning,
            -0.5 * couplings.gamma[(i, j)],
        )
    });
    Ok(EffectiveHamiltonian {
        h,
        couplings,
        geometry: geom.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_ordered, build_realization, DisorderSpec, LatticeSpec};
    use std::f64::consts::PI;

    #[test]
    fn hwg_diagonal_at_quarter_wavelength_doubles_rate() {
        let c = hwg_couplings(0.25, 0.25).unwrap();
        assert!((c.gamma - 2.0).abs() < 1e-15);
    }

    #[test]
    fn hwg_diagonal_vanishes_at_half_wavelength() {
        let c = hwg_couplings(0.5, 0.5).unwrap();
        assert_eq!(c.gamma, 0.0);
        assert_eq!(c.j, 0.0);
    }

    #[test]
    fn hwg_couplings_vanish_next_to_mirror() {
        let mut prev = f64::INFINITY;
        for k in 1..8 {
            let z = 10f64.powi(-k);
            let c = hwg_couplings(z, 1.01 * z).unwrap();
            let size = c.j.abs() + c.gamma.abs();
            assert!(size < prev);
            prev = size;
        }
        assert!(prev < 1e-5);
    }

    #[test]
    fn hwg_matches_complex_kernel() {
        for &(zi, zj) in &[(0.13, 0.77), (1.35, 2.7), (0.4, 0.4), (3.1, 0.2)] {
            let m = c64::new(0.0, -0.5)
                * (c64::from_polar(1.0, -K0 * f64::abs(zi - zj))
                    - c64::from_polar(1.0, -K0 * (zi + zj)));
            let c = hwg_couplings(zi, zj).unwrap();
            assert!((c.j - m.re).abs() < 1e-12);
            assert!((c.gamma + 2.0 * m.im).abs() < 1e-12);
        }
    }

    #[test]
    fn hwg_rejects_points_behind_mirror() {
        assert!(matches!(hwg_couplings(0.0, 0.3), Err(Error::Domain(_))));
        assert!(hwg_couplings(0.3, -0.1).is_err());
    }

    #[test]
    fn perpendicular_rate_one_wavelength_apart() {
        let c = green_coupling([LAMBDA0, 0.0, 0.0], [0.0, 0.0, 1.0]).unwrap();
        let want = 3.0 / (8.0 * PI * PI);
        assert!((c.gamma - want).abs() < 1e-14, "{} vs {want}", c.gamma);
    }

    #[test]
    fn perpendicular_rate_small_separation_limit() {
        for &x in &[1e-6, 1e-4, 5e-4, 2e-3, 1e-2] {
            let c = green_coupling([x / K0, 0.0, 0.0], [0.0, 0.0, 1.0]).unwrap();
            let series = 1.0 - x * x / 5.0;
            assert!((c.gamma - series).abs() < 1e-9, "x = {x}");
        }
    }

    #[test]
    fn series_and_closed_form_agree_at_switch() {
        let below = radial_parts(SERIES_SWITCH * (1.0 - 1e-9));
        let above = radial_parts(SERIES_SWITCH * (1.0 + 1e-9));
        assert!((below.im_a - above.im_a).abs() < 1e-9);
        assert!((below.im_b - above.im_b).abs() < 1e-9);
        assert!((below.re_a / above.re_a - 1.0).abs() < 1e-8);
        assert!((below.re_b / above.re_b - 1.0).abs() < 1e-8);
    }

    #[test]
    fn coupling_is_even_in_separation() {
        let d = [0.3f64, -0.5, 0.7];
        let norm = d.iter().map(|v| v * v).sum::<f64>().sqrt();
        let d = d.map(|v| v / norm);
        for r in [[0.1, 0.2, -0.05], [1.3, -0.4, 0.9], [0.0, 0.0, 2e-4]] {
            let a = green_coupling(r, d).unwrap();
            let b = green_coupling(r.map(|v| -v), d).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn coincident_atoms_are_singular() {
        assert!(matches!(
            green_coupling([1e-12, 0.0, 0.0], [0.0, 0.0, 1.0]),
            Err(Error::SingularSeparation { .. })
        ));
    }

    #[test]
    fn single_free_space_atom_hamiltonian() {
        let g = build_ordered(&LatticeSpec::chain(Environment::FreeSpace1D, 1, 0.5)).unwrap();
        let h = build_hamiltonian(&g).unwrap();
        assert_eq!(h.h[(0, 0)], c64::new(0.0, -0.5));
    }

    #[test]
    fn matrices_are_symmetric_with_expected_diagonal() {
        let spec = LatticeSpec::new(Environment::FreeSpace2D, vec![4, 3], 0.2);
        let g = build_realization(&spec, &DisorderSpec::positional(1.0, 11, 0)).unwrap();
        let m = interaction_matrices(&g).unwrap();
        for i in 0..g.len() {
            assert_eq!(m.gamma[(i, i)], 1.0);
            assert_eq!(m.j[(i, i)], 0.0);
            for k in 0..g.len() {
                assert!((m.j[(i, k)] - m.j[(k, i)]).abs() < 1e-12);
                assert!((m.gamma[(i, k)] - m.gamma[(k, i)]).abs() < 1e-12);
            }
        }
        assert!(m.gamma_min_eigenvalue().unwrap() >= -1e-10);

        let g = build_realization(
            &LatticeSpec::chain(Environment::HalfWaveguide, 12, 0.15),
            &DisorderSpec::positional(1.0, 11, 0),
        )
        .unwrap();
        let m = interaction_matrices(&g).unwrap();
        for (i, p) in g.positions.iter().enumerate() {
            let want = 1.0 - (2.0 * K0 * p[2]).cos();
            assert!((m.gamma[(i, i)] - want).abs() < 1e-12);
        }
        assert!(m.gamma_min_eigenvalue().unwrap() >= -1e-10);
    }

    #[test]
    fn anti_hermitian_part_is_half_gamma() {
        let g = build_realization(
            &LatticeSpec::chain(Environment::FreeSpace1D, 8, 0.3),
            &DisorderSpec {
                rd_over_a: 0.5,
                omega_d: 0.8,
                seed: 2,
                realization_index: 1,
            },
        )
        .unwrap();
        let h = build_hamiltonian(&g).unwrap();
        for i in 0..8 {
            for k in 0..8 {
                let anti = (h.h[(i, k)] - h.h[(k, i)].conj()) * 0.5;
                assert!((anti - c64::new(0.0, -0.5 * h.couplings.gamma[(i, k)])).norm() < 1e-12);
            }
            assert!((h.h[(i, i)].re - g.detunings[i]).abs() < 1e-15);
        }
    }

    #[test]
    fn ordered_free_space_hermitian_diagonal_is_zero() {
        let g = build_ordered(&LatticeSpec::new(
            Environment::FreeSpace3D,
            vec![2, 2, 2],
            0.2,
        ))
        .unwrap();
        let h = build_hamiltonian(&g).unwrap();
        assert!((0..8).all(|i| h.h[(i, i)].re == 0.0));
    }

    #[test]
    fn non_interacting_model_is_diagonal() {
        let g = build_ordered(&LatticeSpec::chain(Environment::HalfWaveguide, 4, 0.15)).unwrap();
        let h = build_hamiltonian_with(&g, CouplingModel::NonInteracting).unwrap();
        for i in 0..4 {
            for k in 0..4 {
                let want = if i == k {
                    c64::new(0.0, -0.5)
                } else {
                    c64::new(0.0, 0.0)
                };
                assert_eq!(h.h[(i, k)], want);
            }
        }
    }

    #[test]
    fn resonant_half_waveguide_has_no_dissipation() {
        let g = build_ordered(&LatticeSpec::chain(Environment::HalfWaveguide, 50, 1.0)).unwrap();
        let m = interaction_matrices(&g).unwrap();
        for i in 0..50 {
            for k in 0..50 {
                assert_eq!(m.gamma[(i, k)], 0.0);
            }
        }
    }

    #[test]
    fn hamiltonian_exports() {
        let g = build_ordered(&LatticeSpec::chain(Environment::FreeSpace1D, 2, 0.2)).unwrap();
        let h = build_hamiltonian(&g).unwrap();
        let csv = h.to_csv();
        let rows: Vec<&str> = csv.lines().collect();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].split(',').count(), 4);
        let first: f64 = rows[0].split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(first, -0.5);
        let json: serde_json::Value = serde_json::from_str(&h.to_json().unwrap()).unwrap();
        assert_eq!(json["n"], 2);
        assert_eq!(json["gamma"][0][0], 1.0);
    }
}
