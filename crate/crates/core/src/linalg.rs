//! Dense helpers on top of faer: matrix exponential, inverse, norms.

use faer::linalg::solvers::{DenseSolveCore, Solve};
use faer::{c64, Mat};

/// Largest absolute column sum.
pub fn norm_1(a: &Mat<c64>) -> f64 {
    (0..a.ncols())
        .map(|j| (0..a.nrows()).map(|i| a[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn identity(n: usize) -> Mat<c64> {
    Mat::from_fn(n, n, |i, j| {
        if i == j {
            c64::new(1.0, 0.0)
        } else {
            c64::new(0.0, 0.0)
        }
    })
}

pub fn inverse(a: &Mat<c64>) -> Mat<c64> {
    a.partial_piv_lu().inverse()
}

fn axpy(acc: &mut Mat<c64>, coef: f64, x: &Mat<c64>) {
    for j in 0..acc.ncols() {
        for i in 0..acc.nrows() {
            acc[(i, j)] += x[(i, j)] * coef;
        }
    }
}

/// `exp(A)` by scaling and squaring with a diagonal `[6/6]` Padé approximant.
pub fn expm(a: &Mat<c64>) -> Mat<c64> {
    const Q: usize = 6;
    let n = a.nrows();
    let norm = norm_1(a);
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scale = 0.5f64.powi(squarings);
    let scaled = Mat::from_fn(n, n, |i, j| a[(i, j)] * scale);

    let mut num = identity(n);
    let mut den = identity(n);
    let mut power = identity(n);
    let mut c = 1.0;
    for k in 1..=Q {
        c *= (Q - k + 1) as f64 / (k * (2 * Q - k + 1)) as f64;
        power = &power * &scaled;
        axpy(&mut num, c, &power);
        axpy(&mut den, if k % 2 == 0 { c } else { -c }, &power);
    }
    let mut result = den.partial_piv_lu().solve(&num);
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}
