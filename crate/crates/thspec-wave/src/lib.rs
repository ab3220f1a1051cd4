//! Closed-form two-component radial spinors for converged bound states.
//!
//! The primary component (upper `F` on the spin branch, lower `G` on the
//! pseudospin branch) is `N s^{e_s} (1 - c_h s)^{e_y} P_n^{(a,b)}(1 - 2 c_h s)`
//! with `s = e^{-b_h (r - r_e)}`; the partner component follows from the
//! first-order relation of the exact-symmetry limit. Evaluation keeps the
//! exponential factors in log-magnitude so large Jacobi indices (heavy
//! molecules) do not overflow.

use thspec_core::{QuantumState, SymmetryBranch, SymmetryConfig, ThPotential};
use thspec_nu::{
    derive_constants_with, jacobi_derivative, jacobi_eval, wavefunction_params, NuError,
};
use thspec_spectra::{
    build_nu_input, residual_form, EnergyEquation, EnergyLevel, QuantizationBranch, SpectraError,
};

#[derive(Debug, thiserror::Error)]
pub enum WaveError {
    #[error("partner-component denominator vanishes: {value}")]
    DegenerateDenominator { value: f64 },
    #[error("closed-form spinors require the full-shape energy equation (c_h != 0)")]
    UnsupportedEquation,
    #[error("component density is not integrable: {0}")]
    NotIntegrable(String),
    #[error(transparent)]
    Nu(#[from] NuError),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
}

/// Multiple of `1/b_h` beyond `r_e` where the normalization quadrature stops
/// and the analytic tail bound takes over.
pub const TAIL_START_WIDTHS: f64 = 40.0;

/// Lower end of the normalization domain, as a fraction of `r_e`. The
/// partner component can behave like `1/r` near the origin (see
/// [`SpinorSolution::near_origin_diagnostic`]), so the density is integrated
/// from a small but nonzero radius.
pub const ORIGIN_FRACTION: f64 = 1e-3;

/// A bound-state spinor: converged level plus the closed-form shape
/// parameters of its primary component.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinorSolution {
    pub level: EnergyLevel,
    pub sym: SymmetryConfig,
    pub pot: ThPotential,
    /// Decay exponent of the `s` factor (positive).
    pub exp_s: f64,
    /// Exponent of the `(1 - c_h s)` factor (positive).
    pub exp_y: f64,
    /// Jacobi parameters.
    pub jacobi_a: f64,
    pub jacobi_b: f64,
    /// Polynomial degree (= radial quantum number).
    pub n: u32,
    /// Multiplicative normalization constant applied to both components.
    norm: f64,
    /// Set by [`normalize`] when the partner component grows toward the
    /// origin and the norm therefore depends on the inner cutoff.
    pub near_origin_diagnostic: Option<String>,
}

impl SpinorSolution {
    /// Builds the spinor for a converged level. Only full-shape levels are
    /// supported; the `c_h -> 0` special cases have no `(1 - c_h s)` factor
    /// and are out of scope here.
    pub fn new(
        sym: &SymmetryConfig,
        pot: &ThPotential,
        level: &EnergyLevel,
    ) -> Result<Self, WaveError> {
        let branch = match level.equation {
            EnergyEquation::Th { branch } => branch,
            EnergyEquation::Morse { .. } => return Err(WaveError::UnsupportedEquation),
        };
        if pot.c_h() == 0.0 {
            return Err(WaveError::UnsupportedEquation);
        }
        let p = build_nu_input(sym, pot, &level.state, level.e)?;
        let form = residual_form(branch, sym.branch);
        let k = derive_constants_with(&p, form)?;
        let w = wavefunction_params(&k, p.c3)?;
        Ok(Self {
            level: level.clone(),
            sym: *sym,
            pot: *pot,
            exp_s: w.exponent_s,
            exp_y: w.exponent_1mc3s,
            jacobi_a: w.jacobi_a,
            jacobi_b: w.jacobi_b,
            n: level.state.n,
            norm: 1.0,
            near_origin_diagnostic: None,
        })
    }

    /// The current multiplicative normalization constant.
    pub fn norm(&self) -> f64 {
        self.norm
    }

    /// Overrides the normalization constant (used by tests for scale
    /// invariance; [`normalize`] is the production path).
    pub fn with_norm(&self, norm: f64) -> Self {
        let mut out = self.clone();
        out.norm = norm;
        out
    }

    /// The state this spinor belongs to.
    pub fn state(&self) -> QuantumState {
        self.level.state
    }

    /// Primary component: `F` on the spin branch, `G` on the pseudospin
    /// branch.
    pub fn primary_component(&self, r: f64) -> f64 {
        let (w, x) = self.log_envelope(r);
        self.norm * w.exp() * jacobi_eval(self.n, self.jacobi_a, self.jacobi_b, x)
    }

    /// Analytic radial derivative of the primary component.
    pub fn primary_derivative(&self, r: f64) -> f64 {
        let (w, x) = self.log_envelope(r);
        let b = self.pot.b_h();
        let c = self.pot.c_h();
        let s = self.pot.s_of_r(r);
        let p = jacobi_eval(self.n, self.jacobi_a, self.jacobi_b, x);
        let dp = jacobi_derivative(self.n, self.jacobi_a, self.jacobi_b, x);
        // d ln s/dr = -b; d ln(1 - c s)/dr = b c s / (1 - c s); dx/dr = 2 b c s.
        let log_slope = -b * self.exp_s + b * c * self.exp_y * s / (1.0 - c * s);
        self.norm * w.exp() * (log_slope * p + 2.0 * b * c * s * dp)
    }

    /// Partner component from the first-order exact-symmetry relation:
    /// `(F' + kappa/r F)/(M + E - C_s)` on the spin branch,
    /// `(G' - kappa/r G)/(M - E + C_ps)` on the pseudospin branch.
    pub fn partner_component(&self, r: f64) -> Result<f64, WaveError> {
        let kappa = self.level.state.kappa as f64;
        let e = self.level.e;
        let (num, den) = match self.sym.branch {
            SymmetryBranch::Spin => (
                self.primary_derivative(r) + kappa / r * self.primary_component(r),
                self.sym.m + e - self.sym.c,
            ),
            SymmetryBranch::Pspin => (
                self.primary_derivative(r) - kappa / r * self.primary_component(r),
                self.sym.m - e + self.sym.c,
            ),
        };
        if den == 0.0 {
            return Err(WaveError::DegenerateDenominator { value: den });
        }
        Ok(num / den)
    }

    /// Probability density `F^2 + G^2` at `r`.
    pub fn density(&self, r: f64) -> Result<f64, WaveError> {
        let f = self.primary_component(r);
        let g = self.partner_component(r)?;
        Ok(f * f + g * g)
    }

    /// `(log envelope, Jacobi argument)` at `r`.
    fn log_envelope(&self, r: f64) -> (f64, f64) {
        let b = self.pot.b_h();
        let c = self.pot.c_h();
        let ln_s = -b * (r - self.pot.r_e());
        let s = ln_s.exp();
        let w = self.exp_s * ln_s + self.exp_y * (1.0 - c * s).ln();
        (w, 1.0 - 2.0 * c * s)
    }

    /// The default normalization domain `[ORIGIN_FRACTION r_e, r_e + 40/b_h]`.
    pub fn norm_domain(&self) -> (f64, f64) {
        (
            ORIGIN_FRACTION * self.pot.r_e(),
            self.pot.r_e() + TAIL_START_WIDTHS / self.pot.b_h(),
        )
    }

    /// Rescales the normalization constant so the density integrates to one
    /// over the normalization domain (plus the analytic tail beyond it).
    /// Idempotent. When the partner component grows toward the inner cutoff,
    /// a diagnostic is attached: the norm then depends on the cutoff because
    /// the exact-symmetry partner relation produces a `1/r` factor that is
    /// not square-integrable down to `r = 0`.
    pub fn normalize(&self) -> Result<SpinorSolution, WaveError> {
        let total = self.norm_integral(Quadrature::AdaptiveSimpson)?;
        if !total.is_finite() || total <= 0.0 {
            return Err(WaveError::NotIntegrable(format!(
                "density integral evaluated to {total}"
            )));
        }
        let mut out = self.clone();
        out.norm = self.norm / total.sqrt();
        let (r_lo, _) = self.norm_domain();
        let g1 = self.partner_component(r_lo)?.abs();
        let g2 = self.partner_component(2.0 * r_lo)?.abs();
        out.near_origin_diagnostic = if g1 > 1.5 * g2 && g1 > 0.0 {
            Some(format!(
                "partner component grows toward the origin \
                 (|partner({r_lo:.3e})| = {g1:.3e}); the norm depends on the \
                 inner cutoff at {r_lo:.3e}"
            ))
        } else {
            None
        };
        Ok(out)
    }

    /// Density integral over the normalization domain plus the analytic tail
    /// `(F^2 + G^2)(r_hi) / (2 b_h e_s)` from the `s^{e_s}` decay.
    pub fn norm_integral(&self, method: Quadrature) -> Result<f64, WaveError> {
        let (r_lo, r_hi) = self.norm_domain();
        // Integrate in t = ln r so the near-origin region is well resolved:
        // integrand f(e^t) e^t.
        let g = |t: f64| -> Result<f64, WaveError> {
            let r = t.exp();
            Ok(self.density(r)? * r)
        };
        let (a, b) = (r_lo.ln(), r_hi.ln());
        let main = match method {
            Quadrature::AdaptiveSimpson => adaptive_simpson(&g, a, b, 1e-10, 1e-12)?,
            Quadrature::GaussPanels => gauss_panels(&g, a, b, 400)?,
        };
        let tail = self.density(r_hi)? / (2.0 * self.pot.b_h() * self.exp_s);
        Ok(main + tail)
    }

    /// Number of strict sign changes of the primary component on the
    /// normalization domain, by dense log-spaced sampling with bisection
    /// refinement of each candidate crossing.
    pub fn node_count(&self) -> u32 {
        let (r_lo, r_hi) = self.norm_domain();
        let n_samples = 4000;
        let (a, b) = (r_lo.ln(), r_hi.ln());
        let mut nodes = 0u32;
        let mut prev_r = a.exp();
        let mut prev_v = self.primary_component(prev_r);
        for i in 1..=n_samples {
            let r = (a + (b - a) * i as f64 / n_samples as f64).exp();
            let v = self.primary_component(r);
            if prev_v != 0.0 && v != 0.0 && prev_v.signum() != v.signum() {
                // Refine so adjacent crossings in one sample interval would
                // be noticed as an anomaly (they would leave residual sign
                // structure in later samples anyway for polynomial factors).
                let (mut lo, mut hi, mut f_lo) = (prev_r, r, prev_v);
                while hi - lo > (r_hi - r_lo) * 1e-13 {
                    let mid = 0.5 * (lo + hi);
                    let f_mid = self.primary_component(mid);
                    if f_mid == 0.0 {
                        break;
                    }
                    if f_lo.signum() != f_mid.signum() {
                        hi = mid;
                    } else {
                        lo = mid;
                        f_lo = f_mid;
                    }
                }
                nodes += 1;
            }
            prev_r = r;
            prev_v = v;
        }
        nodes
    }
}

/// Quadrature schemes for the normalization integral; two independent
/// methods are exposed so results can be cross-checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quadrature {
    AdaptiveSimpson,
    GaussPanels,
}

/// Convenience constructor: solve nothing, just wrap an already-converged
/// level together with its context and normalize.
pub fn normalized_spinor(
    sym: &SymmetryConfig,
    pot: &ThPotential,
    level: &EnergyLevel,
) -> Result<SpinorSolution, WaveError> {
    SpinorSolution::new(sym, pot, level)?.normalize()
}

/// The quantization branch recorded in a level, if it is a full-shape level.
pub fn level_branch(level: &EnergyLevel) -> Option<QuantizationBranch> {
    match level.equation {
        EnergyEquation::Th { branch } => Some(branch),
        EnergyEquation::Morse { .. } => None,
    }
}

fn adaptive_simpson(
    f: &dyn Fn(f64) -> Result<f64, WaveError>,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<f64, WaveError> {
    fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
        h / 6.0 * (fa + 4.0 * fm + fb)
    }
    struct Ctx<'a> {
        f: &'a dyn Fn(f64) -> Result<f64, WaveError>,
        rel_tol: f64,
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        ctx: &Ctx,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> Result<f64, WaveError> {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = (ctx.f)(lm)?;
        let frm = (ctx.f)(rm)?;
        let left = simpson(fa, flm, fm, m - a);
        let right = simpson(fm, frm, fb, b - m);
        let delta = left + right - whole;
        let scale_tol = tol.max(ctx.rel_tol * (left + right).abs());
        if depth >= 50 || delta.abs() <= 15.0 * scale_tol {
            return Ok(left + right + delta / 15.0);
        }
        Ok(recurse(ctx, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1)?
            + recurse(ctx, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1)?)
    }
    let ctx = Ctx { f, rel_tol };
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a)?, f(m)?, f(b)?);
    let whole = simpson(fa, fm, fb, b - a);
    recurse(&ctx, a, b, fa, fm, fb, whole, abs_tol, 0)
}

/// Composite 8-point Gauss-Legendre over uniform panels.
fn gauss_panels(
    f: &dyn Fn(f64) -> Result<f64, WaveError>,
    a: f64,
    b: f64,
    panels: usize,
) -> Result<f64, WaveError> {
    // Abscissae/weights for 8-point Gauss-Legendre on [-1, 1].
    const X: [f64; 4] = [
        0.183434642495649805,
        0.525532409916328986,
        0.796666477413626740,
        0.960289856497536232,
    ];
    const W: [f64; 4] = [
        0.362683783378361983,
        0.313706645877887287,
        0.222381034453374471,
        0.101228536290376259,
    ];
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for i in 0..panels {
        let mid = a + (i as f64 + 0.5) * h;
        let half = 0.5 * h;
        for j in 0..4 {
            total += W[j] * half * (f(mid - half * X[j])? + f(mid + half * X[j])?);
        }
    }
    Ok(total)
}
