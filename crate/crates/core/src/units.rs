//! Natural units used throughout the crate.
//!
//! Rates are measured in units of the single-atom decay rate `γ0`, lengths in
//! units of the transition wavelength `λ0`, and times in `1/γ0`. All energies
//! are shifts from the bare transition frequency `ω0` (rotating frame).

use std::f64::consts::PI;

/// Single-atom spontaneous emission rate.
pub const GAMMA0: f64 = 1.0;
/// Transition wavelength.
pub const LAMBDA0: f64 = 1.0;
/// Resonant wavenumber `2π/λ0`.
pub const K0: f64 = 2.0 * PI / LAMBDA0;

/// Minimum allowed separation between two atoms, in `λ0`.
pub const MIN_SEPARATION: f64 = 1e-9;

/// `cos(2π x)` with the argument reduced to `[-1/2, 1/2]` before scaling.
///
/// Integer and half-integer `x` produce exactly `±1`, so mirror resonances
/// cancel to zero instead of leaving `O(eps·x)` residues.
pub fn cos_2pi(x: f64) -> f64 {
    let r = x - x.round();
    if r == 0.0 {
        1.0
    } else if r.abs() == 0.5 {
        -1.0
    } else if r.abs() == 0.25 {
        0.0
    } else {
        (2.0 * PI * r).cos()
    }
}

/// `sin(2π x)`, reduced as in [`cos_2pi`].
pub fn sin_2pi(x: f64) -> f64 {
    let r = x - x.round();
    if r == 0.0 || r.abs() == 0.5 {
        0.0
    } else if r == 0.25 {
        1.0
    } else if r == -0.25 {
        -1.0
    } else {
        (2.0 * PI * r).sin()
    }
}
