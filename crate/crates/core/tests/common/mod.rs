//! Independent reference computations shared by the integration tests. None
//! of these use the eigendecomposition.
#![allow(dead_code)]

use coopdecay::c64;
use faer::{Mat, Side};

/// Eight-point Gauss–Legendre nodes and weights on `[-1, 1]`.
const GL8: [(f64, f64); 8] = [
    (-0.960_289_856_497_536_2, 0.101_228_536_290_376_26),
    (-0.796_666_477_413_626_7, 0.222_381_034_453_374_47),
    (-0.525_532_409_916_329, 0.313_706_645_877_887_3),
    (-0.183_434_642_495_649_8, 0.362_683_783_378_362),
    (0.183_434_642_495_649_8, 0.362_683_783_378_362),
    (0.525_532_409_916_329, 0.313_706_645_877_887_3),
    (0.796_666_477_413_626_7, 0.222_381_034_453_374_47),
    (0.960_289_856_497_536_2, 0.101_228_536_290_376_26),
];

fn matvec(h: &Mat<c64>, v: &[c64]) -> Vec<c64> {
    let n = v.len();
    (0..n)
        .map(|i| (0..n).map(|j| h[(i, j)] * v[j]).sum())
        .collect()
}

/// `e^{-iHt} c` by a Taylor series in steps no longer than `max_step`.
pub fn taylor_propagate(h: &Mat<c64>, c: &[c64], t: f64, max_step: f64) -> Vec<c64> {
    let steps = (t / max_step).ceil().max(1.0) as usize;
    let dt = t / steps as f64;
    let mut state = c.to_vec();
    for _ in 0..steps {
        state = taylor_step(h, &state, dt);
    }
    state
}

fn taylor_step(h: &Mat<c64>, c: &[c64], dt: f64) -> Vec<c64> {
    let mut out = c.to_vec();
    let mut term = c.to_vec();
    let scale = c.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-300);
    for k in 1..200 {
        let hv = matvec(h, &term);
        let f = c64::new(0.0, -dt / k as f64);
        term = hv.into_iter().map(|z| z * f).collect();
        for (o, t) in out.iter_mut().zip(&term) {
            *o += *t;
        }
        if term.iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-18 * scale {
            break;
        }
    }
    out
}

/// Fluorescence spectrum by direct time integration of
/// `2 Re Σ_n ∫_0^∞ e^{i(k0 z_n - ωτ)} c_n*(t′+τ) c_n(t′) dτ`,
/// starting from the state `c_tp` at `t′`. The τ-integral runs on
/// Gauss–Legendre panels of width `panel` until `‖c‖² < cutoff`.
pub fn quadrature_spectrum(
    h: &Mat<c64>,
    c_tp: &[c64],
    chain_coordinates: &[f64],
    omega: &[f64],
    panel: f64,
    cutoff: f64,
) -> Vec<f64> {
    let n = c_tp.len();
    let k0 = 2.0 * std::f64::consts::PI;
    let phase: Vec<c64> = chain_coordinates
        .iter()
        .map(|&z| c64::from_polar(1.0, k0 * z))
        .collect();
    let mut acc = vec![c64::new(0.0, 0.0); omega.len()];
    let mut start = c_tp.to_vec();
    let mut t0 = 0.0;
    let half = panel / 2.0;
    loop {
        let mut prev_t = 0.0;
        let mut state = start.clone();
        for &(x, wgt) in &GL8 {
            let local = half * (x + 1.0);
            state = taylor_propagate(h, &state, local - prev_t, 0.25);
            prev_t = local;
            let corr: c64 = (0..n).map(|j| phase[j] * state[j].conj() * c_tp[j]).sum();
            let tau = t0 + local;
            for (a, &w) in acc.iter_mut().zip(omega) {
                *a += corr * c64::from_polar(half * wgt, -w * tau);
            }
        }
        start = taylor_propagate(h, &start, panel, 0.25);
        t0 += panel;
        let norm2: f64 = start.iter().map(|z| z.norm_sqr()).sum();
        if norm2 < cutoff {
            break;
        }
    }
    acc.iter().map(|a| 2.0 * a.re).collect()
}

fn entropy_of(rho: &Mat<c64>) -> f64 {
    let vals = rho
        .self_adjoint_eigenvalues(Side::Lower)
        .expect("hermitian eigenvalues");
    vals.iter()
        .filter(|&&l| l > 1e-300)
        .map(|&l| -l * l.ln())
        .sum()
}

/// Full `2^N` density matrix `|ψ⟩⟨ψ| + (1 - ‖c‖²)|G⟩⟨G|` with atom `j`
/// excited in basis index `1 << j`.
pub fn dense_state(c: &[c64]) -> Mat<c64> {
    let n = c.len();
    let dim = 1usize << n;
    let mut psi = vec![c64::new(0.0, 0.0); dim];
    for (j, &z) in c.iter().enumerate() {
        psi[1 << j] = z;
    }
    let ground = 1.0 - c.iter().map(|z| z.norm_sqr()).sum::<f64>();
    Mat::from_fn(dim, dim, |i, k| {
        let mut v = psi[i] * psi[k].conj();
        if i == 0 && k == 0 {
            v += c64::new(ground, 0.0);
        }
        v
    })
}

/// Reduced density matrix on the atoms in `keep` (bit order follows `keep`).
pub fn partial_trace(rho: &Mat<c64>, n: usize, keep: &[usize]) -> Mat<c64> {
    let traced: Vec<usize> = (0..n).filter(|j| !keep.contains(j)).collect();
    let sub = 1usize << keep.len();
    let env = 1usize << traced.len();
    let index = |a: usize, e: usize| {
        let mut idx = 0;
        for (b, &j) in keep.iter().enumerate() {
            if a >> b & 1 == 1 {
                idx |= 1 << j;
            }
        }
        for (b, &j) in traced.iter().enumerate() {
            if e >> b & 1 == 1 {
                idx |= 1 << j;
            }
        }
        idx
    };
    Mat::from_fn(sub, sub, |a, b| {
        (0..env).map(|e| rho[(index(a, e), index(b, e))]).sum()
    })
}

/// `S(A) + S(B) - S(AB)` from dense matrices.
pub fn dense_mutual_information(c: &[c64], a: &[usize], b: &[usize]) -> f64 {
    let n = c.len();
    let rho = dense_state(c);
    entropy_of(&partial_trace(&rho, n, a)) + entropy_of(&partial_trace(&rho, n, b))
        - entropy_of(&rho)
}

/// Closed-form perpendicular-dipole decay coupling.
pub fn gamma_perpendicular(x: f64) -> f64 {
    1.5 * (x.sin() / x + x.cos() / (x * x) - x.sin() / (x * x * x))
}

/// `M = -(3π/k0) d†G(r)d` from the full 3×3 Green's tensor
/// `G = e^{ikr}/(4πk²r³)[(k²r² + ikr - 1)I + (3 - 3ikr - k²r²) r̂r̂]`.
pub fn green_tensor_coupling(r: [f64; 3], d: [f64; 3]) -> (f64, f64) {
    let k = 2.0 * std::f64::consts::PI;
    let dist = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
    let rhat = [r[0] / dist, r[1] / dist, r[2] / dist];
    let kr = k * dist;
    let pre = c64::from_polar(1.0, kr) / (4.0 * std::f64::consts::PI * k * k * dist.powi(3));
    let a = c64::new(kr * kr - 1.0, kr);
    let b = c64::new(3.0 - kr * kr, -3.0 * kr);
    let mut m = c64::new(0.0, 0.0);
    for p in 0..3 {
        for q in 0..3 {
            let delta = if p == q { 1.0 } else { 0.0 };
            let g = pre * (a * delta + b * rhat[p] * rhat[q]);
            m += d[p] * g * d[q];
        }
    }
    let m = m * (-3.0 * std::f64::consts::PI / k);
    (m.re, -2.0 * m.im)
}
