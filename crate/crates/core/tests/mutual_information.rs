mod common;

use common::{dense_mutual_information, dense_state, partial_trace};
use coopdecay::entanglement::{binary_entropy, subsystem_entropy};
use coopdecay::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_amplitudes(rng: &mut ChaCha8Rng, n: usize) -> Vec<c64> {
    let raw: Vec<c64> = (0..n)
        .map(|_| c64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect();
    let norm = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let target = rng.random::<f64>().max(1e-3);
    raw.into_iter()
        .map(|z| z * (target.sqrt() / norm))
        .collect()
}

#[test]
fn matches_dense_density_matrix() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for trial in 0..100 {
        let n = 2 + trial % 7;
        let c = random_amplitudes(&mut rng, n);
        let cut = BipartiteCut::half(n);
        let fast = mutual_information(&c, &cut).unwrap();
        let dense = dense_mutual_information(&c, &cut.a, &cut.b);
        assert!((fast - dense).abs() <= 1e-10, "n={n}: {fast} vs {dense}");
    }
}

#[test]
fn arbitrary_cuts_match_dense() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let c = random_amplitudes(&mut rng, 6);
    let cut = BipartiteCut::new(vec![0, 3, 5], vec![1, 2, 4]).unwrap();
    let fast = mutual_information(&c, &cut).unwrap();
    let dense = dense_mutual_information(&c, &cut.a, &cut.b);
    assert!((fast - dense).abs() <= 1e-10);
}

#[test]
fn reduced_state_is_two_level() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let c = random_amplitudes(&mut rng, 5);
    let rho = dense_state(&c);
    let reduced = partial_trace(&rho, 5, &[1, 2]);
    let trace: f64 = (0..4).map(|k| reduced[(k, k)].re).sum();
    assert!((trace - 1.0).abs() < 1e-14);
    let s = subsystem_entropy(&c, &[1, 2]).unwrap();
    let p = c[1].norm_sqr() + c[2].norm_sqr();
    assert!((s - binary_entropy(p)).abs() < 1e-15);
}

#[test]
fn bell_pair() {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let c = vec![c64::new(s, 0.0), c64::new(0.0, s)];
    let info = mutual_information(&c, &BipartiteCut::half(2)).unwrap();
    assert!((info - 2.0 * std::f64::consts::LN_2).abs() <= 1e-12);
    let dense = dense_mutual_information(&c, &[0], &[1]);
    assert!((dense - 2.0 * std::f64::consts::LN_2).abs() <= 1e-12);
}

#[test]
fn symmetric_under_swap_and_bounded() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for n in 2..9 {
        let c = random_amplitudes(&mut rng, n);
        let cut = BipartiteCut::half(n);
        let a = mutual_information(&c, &cut).unwrap();
        let b = mutual_information(&c, &cut.swapped()).unwrap();
        assert_eq!(a, b);
        assert!((0.0..=2.0 * std::f64::consts::LN_2 + 1e-12).contains(&a));
    }
}
