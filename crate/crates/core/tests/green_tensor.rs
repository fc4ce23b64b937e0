mod common;

use common::{gamma_perpendicular, green_tensor_coupling};
use coopdecay::green_coupling;
use proptest::prelude::*;

fn unit(v: [f64; 3]) -> Option<[f64; 3]> {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    (n > 1e-3).then(|| [v[0] / n, v[1] / n, v[2] / n])
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn matches_full_tensor(
        dir in prop::array::uniform3(-1.0f64..1.0),
        dip in prop::array::uniform3(-1.0f64..1.0),
        len in 1.5e-3f64..20.0,
    ) {
        let (Some(dir), Some(d)) = (unit(dir), unit(dip)) else { return Ok(()) };
        let r = [dir[0] * len, dir[1] * len, dir[2] * len];
        let got = green_coupling(r, d).unwrap();
        let (j, gamma) = green_tensor_coupling(r, d);
        // J carries a 1/x³ near field; Γ stays O(1). Compare each against
        // its own natural scale.
        let x = 2.0 * std::f64::consts::PI * len;
        let j_scale = j.abs().max(1.0 / x);
        prop_assert!((got.j - j).abs() <= 1e-12 * j_scale.max(1.0), "J {} vs {}", got.j, j);
        prop_assert!((got.gamma - gamma).abs() <= 1e-12 * gamma.abs().max(1.0 / x).max(1e-3),
            "Γ {} vs {}", got.gamma, gamma);
    }

    #[test]
    fn perpendicular_closed_form(len in 1e-3f64..30.0) {
        let got = green_coupling([len, 0.0, 0.0], [0.0, 0.0, 1.0]).unwrap();
        let x = 2.0 * std::f64::consts::PI * len;
        let expect = gamma_perpendicular(x);
        prop_assert!((got.gamma - expect).abs() <= 1e-12 * expect.abs().max(1.0 / x),
            "{} vs {}", got.gamma, expect);
    }
}

#[test]
fn wavelength_separation() {
    let g = green_coupling([1.0, 0.0, 0.0], [0.0, 0.0, 1.0]).unwrap();
    let expect = 3.0 / (8.0 * std::f64::consts::PI.powi(2));
    assert!(close(g.gamma, expect, 1e-12));
    assert!((g.gamma - 0.037995).abs() < 1e-6);
}

#[test]
fn series_branch_limit() {
    for len in [1e-6, 1e-5, 1e-4] {
        let x = 2.0 * std::f64::consts::PI * len;
        let g = green_coupling([0.0, len, 0.0], [0.0, 0.0, 1.0]).unwrap();
        assert!(close(g.gamma, 1.0 - x * x / 5.0, 1e-12), "{len}");
    }
}
