//! Generic parametric Nikiforov-Uvarov (NU) machinery for hypergeometric-type
//! radial equations of the template form
//!
//! ```text
//! psi'' + (c1 - c2 s) / (s (1 - c3 s)) psi'
//!       + (-xi1 s^2 + xi2 s - xi3) / (s (1 - c3 s))^2 psi = 0.
//! ```
//!
//! The engine is energy-agnostic: callers feed it dimensionless coefficients
//! `(c1, c2, c3, xi1, xi2, xi3)` in which any physical energy dependence is
//! already embedded. It produces the derived constants `c4..c13`, the
//! quantization residual, the wavefunction parameters and the intermediate
//! polynomials, plus Jacobi polynomial evaluation.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum NuError {
    /// The template constant `c3` is zero; the caller must use the dedicated
    /// closed forms for that limit instead (the general branch divides by c3).
    #[error("c3 = 0 is outside the general branch")]
    C3Zero,
    /// A radicand required for a real bound-state solution is negative.
    #[error("negative radicand {which} = {value}")]
    NegativeRadicand { which: &'static str, value: f64 },
    /// A boundary exponent came out non-positive, so the candidate solution
    /// cannot satisfy the boundary conditions.
    #[error("invalid exponent {which} = {value}")]
    InvalidExponent { which: &'static str, value: f64 },
}

/// Template constants and numerator coefficients of one NU problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NuProblem {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub xi1: f64,
    pub xi2: f64,
    pub xi3: f64,
}

/// Derived constants `c4..c13` with reported validity flags.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NuConstants {
    pub c4: f64,
    pub c5: f64,
    pub c6: f64,
    pub c7: f64,
    pub c8: f64,
    pub c9: f64,
    pub c10: f64,
    pub c11: f64,
    pub c12: f64,
    pub c13: f64,
    /// `c10 > -1` (reported, not enforced).
    pub c10_valid: bool,
    /// `c11 > -1` (reported, not enforced).
    pub c11_valid: bool,
    /// `c12 > 0` (enforced by [`wavefunction_params`]).
    pub c12_valid: bool,
    /// `c13 > 0` (enforced by [`wavefunction_params`] when `c3 > 0`).
    pub c13_valid: bool,
}

/// Sign/offset choices distinguishing the root branches of the quantization
/// condition. The squared form of the condition does not fix the branch; the
/// physically appropriate one is selected by whoever assembles the problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualForm {
    /// Sign with which `xi2` enters `c7 = 2 c4 c5 + (sign) xi2`; the regular
    /// branch uses `-1`.
    pub c7_xi2_sign: f64,
    /// Sign applied to every `sqrt(c8)` occurrence in the residual; the
    /// regular branch uses `+1`.
    pub sqrt_c8_sign: f64,
    /// Constant offset added to the residual, in units of `c3`; the regular
    /// branch uses `0`.
    pub c3_shift: f64,
}

impl ResidualForm {
    /// The textbook parametric quantization condition.
    pub const REGULAR: Self = Self {
        c7_xi2_sign: -1.0,
        sqrt_c8_sign: 1.0,
        c3_shift: 0.0,
    };
}

/// Tolerance under which a slightly negative radicand (roundoff at a window
/// edge) is clamped to zero.
const RADICAND_CLAMP: f64 = 1e-13;

fn checked_sqrt(value: f64, scale: f64, which: &'static str) -> Result<f64, NuError> {
    if value < -RADICAND_CLAMP * scale.max(1.0) {
        return Err(NuError::NegativeRadicand { which, value });
    }
    Ok(value.max(0.0).sqrt())
}

/// Derived constants for a given residual branch.
pub fn derive_constants_with(p: &NuProblem, form: ResidualForm) -> Result<NuConstants, NuError> {
    if p.c3 == 0.0 {
        return Err(NuError::C3Zero);
    }
    let c4 = 0.5 * (1.0 - p.c1);
    let c5 = 0.5 * (p.c2 - 2.0 * p.c3);
    let c6 = c5 * c5 + p.xi1;
    let c7 = 2.0 * c4 * c5 + form.c7_xi2_sign * p.xi2;
    let c8 = c4 * c4 + p.xi3;
    let c9 = p.c3 * (c7 + p.c3 * c8) + c6;
    let sqrt_c8 = checked_sqrt(c8, p.xi3.abs(), "c8")?;
    let sqrt_c9 = checked_sqrt(c9, c6.abs(), "c9")?;
    let c10 = p.c1 + 2.0 * c4 + 2.0 * sqrt_c8 - 1.0;
    let c11 = 1.0 - p.c1 - 2.0 * c4 + 2.0 / p.c3 * sqrt_c9;
    let c12 = c4 + sqrt_c8;
    let c13 = -c4 + (sqrt_c9 - c5) / p.c3;
    Ok(NuConstants {
        c4,
        c5,
        c6,
        c7,
        c8: c8.max(0.0),
        c9: c9.max(0.0),
        c10,
        c11,
        c12,
        c13,
        c10_valid: c10 > -1.0,
        c11_valid: c11 > -1.0,
        c12_valid: c12 > 0.0,
        c13_valid: c13 > 0.0,
    })
}

/// Derived constants of the regular branch.
pub fn derive_constants(p: &NuProblem) -> Result<NuConstants, NuError> {
    derive_constants_with(p, ResidualForm::REGULAR)
}

/// Left-hand side of the quantization condition for radial quantum number `n`
/// on the chosen branch; a bound state exists where this vanishes.
///
/// On the regular branch this is
/// `c2 n - (2n+1) c5 + (2n+1)(sqrt(c9) + c3 sqrt(c8)) + n(n-1) c3 + c7
///  + 2 c3 c8 + 2 sqrt(c8 c9)`.
pub fn energy_residual_with(p: &NuProblem, n: u32, form: ResidualForm) -> Result<f64, NuError> {
    let k = derive_constants_with(p, form)?;
    let nf = n as f64;
    let s8 = form.sqrt_c8_sign;
    let sqrt_c8 = k.c8.sqrt();
    let sqrt_c9 = k.c9.sqrt();
    Ok(p.c2 * nf - (2.0 * nf + 1.0) * k.c5
        + (2.0 * nf + 1.0) * (sqrt_c9 + s8 * p.c3 * sqrt_c8)
        + nf * (nf - 1.0) * p.c3
        + k.c7
        + 2.0 * p.c3 * k.c8
        + s8 * 2.0 * sqrt_c8 * sqrt_c9
        + form.c3_shift * p.c3)
}

/// Regular-branch residual.
pub fn energy_residual(p: &NuProblem, n: u32) -> Result<f64, NuError> {
    energy_residual_with(p, n, ResidualForm::REGULAR)
}

/// Sum of the absolute values of all residual terms; used to express a root
/// tolerance relative to the natural size of the condition.
pub fn energy_residual_scale(p: &NuProblem, n: u32, form: ResidualForm) -> Result<f64, NuError> {
    let k = derive_constants_with(p, form)?;
    let nf = n as f64;
    let sqrt_c8 = k.c8.sqrt();
    let sqrt_c9 = k.c9.sqrt();
    Ok((p.c2 * nf).abs()
        + ((2.0 * nf + 1.0) * k.c5).abs()
        + ((2.0 * nf + 1.0) * (sqrt_c9 + p.c3.abs() * sqrt_c8)).abs()
        + (nf * (nf - 1.0) * p.c3).abs()
        + k.c7.abs()
        + (2.0 * p.c3 * k.c8).abs()
        + 2.0 * sqrt_c8 * sqrt_c9
        + (form.c3_shift * p.c3).abs())
}

/// The four parameters of the template eigenfunction
/// `psi(s) = N s^{c12} (1 - c3 s)^{c13} P_n^{(c10, c11)}(1 - 2 c3 s)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveParams {
    pub exponent_s: f64,
    pub exponent_1mc3s: f64,
    pub jacobi_a: f64,
    pub jacobi_b: f64,
}

/// Extracts the wavefunction parameters, enforcing the exponent constraints
/// needed for a finite, decaying eigenfunction: `c12 > 0` always (decay of
/// the `s^{c12}` factor), and `c13 > 0` only when `c3 > 0` — for negative
/// `c3` the base `1 - c3 s` stays above one on `s >= 0`, so any exponent is
/// admissible.
pub fn wavefunction_params(k: &NuConstants, c3: f64) -> Result<WaveParams, NuError> {
    if !(k.c12 > 0.0) {
        return Err(NuError::InvalidExponent {
            which: "c12",
            value: k.c12,
        });
    }
    if c3 > 0.0 && !(k.c13 > 0.0) {
        return Err(NuError::InvalidExponent {
            which: "c13",
            value: k.c13,
        });
    }
    Ok(WaveParams {
        exponent_s: k.c12,
        exponent_1mc3s: k.c13,
        jacobi_a: k.c10,
        jacobi_b: k.c11,
    })
}

/// Intermediate polynomial data of the NU reduction (diagnostic only).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NuIntermediates {
    /// `pi(s) = pi0 + pi1 s`.
    pub pi0: f64,
    pub pi1: f64,
    /// Constant `k` selected by the square-completion step.
    pub k: f64,
    /// `tau(s) = tau0 + tau1 s`.
    pub tau0: f64,
    pub tau1: f64,
    /// Slope of tau; must be negative for a bound-state weight function.
    pub tau_prime: f64,
}

/// Computes `pi(s)`, `k`, `tau(s)` and `tau'` for the regular branch.
pub fn nu_intermediates(k: &NuConstants, p: &NuProblem) -> NuIntermediates {
    let sqrt_c8 = k.c8.sqrt();
    let sqrt_c9 = k.c9.sqrt();
    let pi0 = k.c4 + sqrt_c8;
    let pi1 = k.c5 - (sqrt_c9 + p.c3 * sqrt_c8);
    let kk = -(k.c7 + 2.0 * p.c3 * k.c8) - 2.0 * sqrt_c8 * sqrt_c9;
    let tau0 = p.c1 + 2.0 * k.c4 + 2.0 * sqrt_c8;
    let tau1 = -(p.c2 - 2.0 * k.c5) - 2.0 * (sqrt_c9 + p.c3 * sqrt_c8);
    let tau_prime = -2.0 * p.c3 - 2.0 * (sqrt_c9 + p.c3 * sqrt_c8);
    NuIntermediates {
        pi0,
        pi1,
        k: kk,
        tau0,
        tau1,
        tau_prime,
    }
}

/// Jacobi polynomial `P_n^(a,b)(x)` by upward three-term recurrence in n.
pub fn jacobi_eval(n: u32, a: f64, b: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let p1 = 0.5 * (a - b) + (1.0 + 0.5 * (a + b)) * x;
    if n == 1 {
        return p1;
    }
    let mut pm2 = 1.0;
    let mut pm1 = p1;
    for m in 2..=n {
        let m = m as f64;
        let q = 2.0 * m + a + b;
        let a1 = 2.0 * m * (m + a + b) * (q - 2.0);
        let a2 = (q - 1.0) * (a * a - b * b);
        let a3 = (q - 2.0) * (q - 1.0) * q;
        let a4 = 2.0 * (m + a - 1.0) * (m + b - 1.0) * q;
        let p = ((a2 + a3 * x) * pm1 - a4 * pm2) / a1;
        pm2 = pm1;
        pm1 = p;
    }
    pm1
}

/// Jacobi polynomial via the terminating hypergeometric sum
/// `P_n^(a,b)(x) = (a+1)_n / n! * 2F1(-n, n+a+b+1; a+1; (1-x)/2)`;
/// used as an independent cross-check of the recurrence.
pub fn jacobi_eval_hypergeometric(n: u32, a: f64, b: f64, x: f64) -> f64 {
    let z = 0.5 * (1.0 - x);
    let mut sum = 1.0;
    let mut term = 1.0;
    for k in 0..n {
        let kf = k as f64;
        term *= (-(n as f64) + kf) * (n as f64 + a + b + 1.0 + kf) / ((a + 1.0 + kf) * (kf + 1.0))
            * z;
        sum += term;
    }
    let mut prefactor = 1.0;
    for k in 0..n {
        let kf = k as f64;
        prefactor *= (a + 1.0 + kf) / (kf + 1.0);
    }
    prefactor * sum
}

/// Analytic derivative `d/dx P_n^(a,b)(x) = (n+a+b+1)/2 P_{n-1}^(a+1,b+1)(x)`.
pub fn jacobi_derivative(n: u32, a: f64, b: f64, x: f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    0.5 * (n as f64 + a + b + 1.0) * jacobi_eval(n - 1, a + 1.0, b + 1.0, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;

    #[test]
    fn template_row_constants() {
        // c1 = 1, c2 = c3 = shape constant: c4 = 0, c5 = -c/2.
        let p = NuProblem {
            c1: 1.0,
            c2: 0.01,
            c3: 0.01,
            xi1: 0.1,
            xi2: 0.2,
            xi3: 0.3,
        };
        let k = derive_constants(&p).unwrap();
        assert_eq!(k.c4, 0.0);
        assert_eq!(k.c5, -0.005);
    }

    #[test]
    fn all_zero_xi_substitution() {
        let p = NuProblem {
            c1: 1.0,
            c2: 1.0,
            c3: 1.0,
            xi1: 0.0,
            xi2: 0.0,
            xi3: 0.0,
        };
        let k = derive_constants(&p).unwrap();
        assert_eq!(k.c6, 0.25);
        assert_eq!(k.c7, 0.0);
        assert_eq!(k.c8, 0.0);
        // c9 = c3 (c7 + c3 c8) + c6 = 1/4 by direct substitution.
        assert_eq!(k.c9, 0.25);
    }

    #[test]
    fn high_precision_constants_reference() {
        // Frozen from an independent arbitrary-precision recomputation.
        let p = NuProblem {
            c1: 1.0,
            c2: 0.5,
            c3: 0.5,
            xi1: 2.0,
            xi2: 3.0,
            xi3: 1.0,
        };
        let k = derive_constants(&p).unwrap();
        assert_eq!(k.c4, 0.0);
        assert_eq!(k.c5, -0.25);
        assert_eq!(k.c6, 2.0625);
        assert_eq!(k.c7, -3.0);
        assert_eq!(k.c8, 1.0);
        assert_eq!(k.c9, 0.8125);
        assert_relative_eq!(k.c10, 2.0, max_relative = 1e-15);
        assert_relative_eq!(k.c11, 3.60555127546398929, max_relative = 1e-15);
        assert_relative_eq!(k.c12, 1.0, max_relative = 1e-15);
        assert_relative_eq!(k.c13, 2.30277563773199465, max_relative = 1e-15);
        assert_relative_eq!(
            energy_residual(&p, 2).unwrap(),
            10.0597147320619813,
            max_relative = 1e-14
        );
        let inter = nu_intermediates(&k, &p);
        assert_relative_eq!(inter.k, 0.197224362268005353, max_relative = 1e-14);
    }

    #[test]
    fn residual_closed_form_when_radicals_vanish() {
        // xi chosen so c8 = c9 = 0: residual at n = 0 is -c5 + c7.
        let p = NuProblem {
            c1: 1.0,
            c2: 1.0,
            c3: 1.0,
            xi1: 0.5,
            xi2: 0.75,
            xi3: 0.0,
        };
        let k = derive_constants(&p).unwrap();
        assert_eq!(k.c8, 0.0);
        assert_abs_diff_eq!(k.c9, 0.0, epsilon = 1e-15);
        let r = energy_residual(&p, 0).unwrap();
        assert_relative_eq!(r, -k.c5 + k.c7, max_relative = 1e-14);
    }

    #[test]
    fn c3_zero_is_rejected() {
        let p = NuProblem {
            c1: 1.0,
            c2: 0.0,
            c3: 0.0,
            xi1: 1.0,
            xi2: 1.0,
            xi3: 1.0,
        };
        assert_eq!(derive_constants(&p).unwrap_err(), NuError::C3Zero);
    }

    #[test]
    fn negative_radicand_is_reported() {
        let p = NuProblem {
            c1: 1.0,
            c2: 0.5,
            c3: 0.5,
            xi1: 0.0,
            xi2: 0.0,
            xi3: -2.0,
        };
        assert!(matches!(
            derive_constants(&p),
            Err(NuError::NegativeRadicand { which: "c8", .. })
        ));
    }

    #[test]
    fn wave_params_substitution() {
        // c8 = 1, c4 = 0, c1 = 1 gives c12 = 1 and c10 = 2.
        let p = NuProblem {
            c1: 1.0,
            c2: 0.5,
            c3: 0.5,
            xi1: 2.0,
            xi2: 3.0,
            xi3: 1.0,
        };
        let w = wavefunction_params(&derive_constants(&p).unwrap(), p.c3).unwrap();
        assert_eq!(w.exponent_s, 1.0);
        assert_eq!(w.jacobi_a, 2.0);
    }

    #[test]
    fn invalid_exponent_is_rejected() {
        let k = NuConstants {
            c4: 0.0,
            c5: 0.0,
            c6: 0.0,
            c7: 0.0,
            c8: 0.0,
            c9: 0.0,
            c10: 0.0,
            c11: 0.0,
            c12: 0.0,
            c13: 1.0,
            c10_valid: true,
            c11_valid: true,
            c12_valid: false,
            c13_valid: true,
        };
        assert!(matches!(
            wavefunction_params(&k, 1.0),
            Err(NuError::InvalidExponent { which: "c12", .. })
        ));
    }

    #[test]
    fn tau_prime_substitution() {
        // c3 = 1, c8 = c9 = 0 gives tau' = -2.
        let p = NuProblem {
            c1: 1.0,
            c2: 1.0,
            c3: 1.0,
            xi1: 0.5,
            xi2: 0.75,
            xi3: 0.0,
        };
        let k = derive_constants(&p).unwrap();
        let inter = nu_intermediates(&k, &p);
        assert_abs_diff_eq!(inter.tau_prime, -2.0, epsilon = 1e-7);
    }

    #[test]
    fn jacobi_trivial_values() {
        assert_eq!(jacobi_eval(0, 3.2, -0.5, 0.7), 1.0);
        assert_eq!(jacobi_eval(1, 1.0, 1.0, 0.0), 0.0);
    }

    #[test]
    fn jacobi_reference_point() {
        assert_relative_eq!(
            jacobi_eval(5, 0.7, 1.3, 0.4),
            jacobi_eval_hypergeometric(5, 0.7, 1.3, 0.4),
            max_relative = 1e-13
        );
        assert_relative_eq!(jacobi_eval(5, 0.7, 1.3, 0.4), 0.46640475, max_relative = 1e-7);
    }

    #[test]
    fn jacobi_value_at_one_is_binomial() {
        for a in [0.0f64, 1.0, 2.0] {
            for n in 0..=8u32 {
                let mut binom = 1.0;
                for k in 0..n {
                    binom *= (n as f64 + a - k as f64) / (n as f64 - k as f64);
                }
                assert_relative_eq!(jacobi_eval(n, a, 0.7, 1.0), binom, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn jacobi_derivative_matches_finite_difference() {
        let (n, a, b) = (4u32, 1.3, 0.4);
        let h = 1e-6;
        for x in [-0.8, -0.2, 0.3, 0.9] {
            let fd = (jacobi_eval(n, a, b, x + h) - jacobi_eval(n, a, b, x - h)) / (2.0 * h);
            assert_relative_eq!(jacobi_derivative(n, a, b, x), fd, max_relative = 1e-8);
        }
    }

    proptest! {
        /// The c9 composition identity holds to near machine precision for the
        /// stored constants.
        #[test]
        fn c9_identity(
            c2 in -1.0f64..1.0,
            c3 in 0.01f64..1.0,
            xi1 in 0.0f64..10.0,
            xi2 in -10.0f64..10.0,
            xi3 in 0.0f64..10.0,
        ) {
            let p = NuProblem { c1: 1.0, c2, c3, xi1, xi2, xi3 };
            if let Ok(k) = derive_constants(&p) {
                let rhs = p.c3 * (k.c7 + p.c3 * k.c8) + k.c6;
                prop_assert!((k.c9 - rhs).abs() <= 1e-14 * rhs.abs().max(1.0));
            }
        }

        /// Recurrence and hypergeometric-sum evaluation agree.
        #[test]
        fn jacobi_recurrence_vs_sum(
            n in 0u32..=10,
            a in -0.9f64..25.0,
            b in -0.9f64..25.0,
            x in -1.0f64..1.0,
        ) {
            let r = jacobi_eval(n, a, b, x);
            let s = jacobi_eval_hypergeometric(n, a, b, x);
            // The sum is an alternating series whose individual terms can be
            // orders of magnitude larger than the result; scale the roundoff
            // allowance by the largest partial term.
            let mut pref = 1.0f64;
            for k in 0..n {
                pref *= (a + 1.0 + k as f64) / (k as f64 + 1.0);
            }
            let z = 0.5 * (1.0 - x);
            let mut term = pref;
            let mut max_term = pref.abs();
            for k in 0..n {
                let kf = k as f64;
                term *= (kf - n as f64) * (n as f64 + a + b + 1.0 + kf) * z
                    / ((a + 1.0 + kf) * (kf + 1.0));
                max_term = max_term.max(term.abs());
            }
            prop_assert!((r - s).abs() <= 1e-12 * r.abs().max(s.abs()).max(max_term).max(1.0),
                "recurrence {r} vs sum {s}");
        }

        /// The residual is continuous in each xi on the valid region.
        #[test]
        fn residual_continuity_in_xi(
            xi1 in 0.1f64..5.0,
            xi2 in -5.0f64..5.0,
            xi3 in 0.1f64..5.0,
        ) {
            let base = NuProblem { c1: 1.0, c2: 0.3, c3: 0.3, xi1, xi2, xi3 };
            if let Ok(r0) = energy_residual(&base, 1) {
                let eps = 1e-9;
                for bumped in [
                    NuProblem { xi1: xi1 + eps, ..base },
                    NuProblem { xi2: xi2 + eps, ..base },
                    NuProblem { xi3: xi3 + eps, ..base },
                ] {
                    if let Ok(r1) = energy_residual(&bumped, 1) {
                        prop_assert!((r1 - r0).abs() < 1e-4 * r0.abs().max(1.0));
                    }
                }
            }
        }
    }
}
