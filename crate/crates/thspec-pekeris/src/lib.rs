//! Pekeris replacement of the (pseudo-)centrifugal term `eta / r^2` by a
//! function with the same exponential shape as the Tietz-Hua potential,
//! matched to second order in `x = (r - r_e)/r_e` at the equilibrium radius.

use thspec_core::ThPotential;

/// Dimensionless expansion coefficients of the shaped centrifugal term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PekerisCoefficients {
    pub d0: f64,
    pub d1: f64,
    pub d2: f64,
}

/// The Taylor match underlying the coefficients is only accurate for
/// `|x| = |r - r_e| / r_e` below roughly this bound; callers may surface a
/// diagnostic when evaluating beyond it (never an error).
pub const VALIDITY_X_BOUND: f64 = 0.5;

/// Closed-form coefficients as functions of `alpha = b_h r_e` and `c_h`,
/// chosen so that value, first and second `x`-derivatives of the shaped term
/// match those of `1 / (1 + x)^2` at `x = 0`.
pub fn coefficients_from(alpha: f64, c_h: f64) -> PekerisCoefficients {
    let a = alpha;
    let u = 1.0 - c_h;
    PekerisCoefficients {
        d0: 1.0 - (1.0 / a) * u * (3.0 + c_h) + (3.0 / (a * a)) * u * u,
        d1: (2.0 / a) * u * u * (2.0 + c_h) - (6.0 / (a * a)) * u * u * u,
        d2: -(1.0 / a) * u * u * u * (1.0 + c_h) + (3.0 / (a * a)) * u * u * u * u,
    }
}

/// Coefficients for a concrete potential.
pub fn pekeris_coefficients(pot: &ThPotential) -> PekerisCoefficients {
    coefficients_from(pot.alpha(), pot.c_h())
}

/// The exact centrifugal term `eta / r^2`.
pub fn centrifugal_exact(eta: f64, r: f64) -> f64 {
    eta / (r * r)
}

/// The shaped replacement
/// `(eta / r_e^2) [D0 + D1 u/(1 - c_h u) + D2 u^2/(1 - c_h u)^2]`
/// with `u = e^{-alpha x}`, `x = (r - r_e)/r_e`.
pub fn centrifugal_pekeris(
    eta: f64,
    pot: &ThPotential,
    coeffs: &PekerisCoefficients,
    r: f64,
) -> f64 {
    let u = pot.s_of_r(r);
    let g = u / (1.0 - pot.c_h() * u);
    eta / (pot.r_e() * pot.r_e()) * (coeffs.d0 + coeffs.d1 * g + coeffs.d2 * g * g)
}
