//! Independent finite-difference eigenvalue oracle for the effective radial
//! equations.
//!
//! The closed-form spectra come from an algebraic quantization condition; this
//! crate validates them numerically. The effective second-order equation reads
//! `-psi'' + [eta W(r) + gamma(E) V(r)] psi = -beta^2(E) psi` with Dirichlet
//! boundaries, where `W` is the exact `1/r^2` centrifugal factor or its
//! shaped replacement. Because the energy enters the operator through
//! `gamma(E)`, the bound state is the root of the self-consistency function
//! `g(E) = mu_n(E) + beta^2(E)`, with `mu_n` the n-th smallest eigenvalue of
//! the trial operator.

use thspec_core::{CoreError, QuantumState, SymmetryConfig, ThPotential};
use thspec_pekeris::{centrifugal_exact, centrifugal_pekeris, pekeris_coefficients};
use thspec_spectra::{bound_window, kinematics, SpectraError};

#[derive(Debug, thiserror::Error)]
pub enum OracleError {
    #[error("no self-consistent root of mu_n(E) + beta^2(E) in ({lo}, {hi}): {detail}")]
    NoRoot { lo: f64, hi: f64, detail: String },
    #[error("grid too coarse: doubling N moves the eigenvalue by {shift:e} (tolerance {tol:e})")]
    GridTooCoarse { shift: f64, tol: f64 },
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
}

/// Uniform radial grid with Dirichlet endpoints; the `n` interior points are
/// `r_min + i h`, `i = 1..=n`, `h = (r_max - r_min)/(n + 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdGrid {
    pub r_min: f64,
    pub r_max: f64,
    pub n: usize,
}

impl FdGrid {
    pub fn new(r_min: f64, r_max: f64, n: usize) -> Self {
        assert!(r_min > 0.0 && r_max > r_min && n >= 2);
        Self { r_min, r_max, n }
    }

    /// Default domain for a given potential: `[1e-3, r_e + 60/b_h]` with 6000
    /// interior points.
    pub fn default_for(pot: &ThPotential) -> Self {
        Self::new(1e-3, pot.r_e() + 60.0 / pot.b_h(), 6000)
    }

    pub fn h(&self) -> f64 {
        (self.r_max - self.r_min) / (self.n + 1) as f64
    }

    pub fn r(&self, i: usize) -> f64 {
        self.r_min + (i + 1) as f64 * self.h()
    }

    /// Same domain, twice the resolution.
    pub fn refined(&self) -> Self {
        Self::new(self.r_min, self.r_max, 2 * self.n + 1)
    }
}

/// Which centrifugal factor enters the operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CentrifugalMode {
    Exact,
    Pekeris,
}

/// A converged self-consistent solve.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub e: f64,
    /// `mu_n(E) + beta^2(E)` at the returned energy.
    pub self_consistency_residual: f64,
    pub centrifugal_mode: CentrifugalMode,
    pub grid: FdGrid,
    /// `mu_n(E)` at the returned energy.
    pub eigenvalue: f64,
}

/// Number of eigenvalues of the symmetric tridiagonal matrix
/// (constant off-diagonal) strictly below `x`, by the Sturm/LDL^T sign count.
fn count_below(diag: &[f64], off: f64, x: f64) -> usize {
    let off2 = off * off;
    let mut count = 0;
    let mut d = f64::INFINITY;
    for &a in diag {
        d = a - x - off2 / d;
        if d == 0.0 {
            d = f64::EPSILON * (a.abs() + off.abs()).max(1.0);
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// The `k`-th smallest eigenvalue (`k = 0` is the ground mode) of the
/// symmetric tridiagonal matrix with diagonal `diag` and constant
/// off-diagonal `off`, by Sturm-count bisection inside Gershgorin bounds.
pub fn tridiag_eigenvalue(diag: &[f64], off: f64, k: usize) -> f64 {
    assert!(k < diag.len());
    let r = 2.0 * off.abs();
    let mut lo = diag.iter().cloned().fold(f64::INFINITY, f64::min) - r;
    let mut hi = diag.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + r;
    let scale = lo.abs().max(hi.abs()).max(1.0);
    let mut iter = 0;
    while hi - lo > 1e-13 * scale && iter < 200 {
        let mid = 0.5 * (lo + hi);
        if !(lo < mid && mid < hi) {
            break;
        }
        if count_below(diag, off, mid) <= k {
            lo = mid;
        } else {
            hi = mid;
        }
        iter += 1;
    }
    0.5 * (lo + hi)
}

/// The `k`-th smallest eigenvalue of `-d^2/dr^2 + U(r)` on the grid, with the
/// 3-point Laplacian and Dirichlet boundaries.
pub fn fd_mode_eigenvalue(grid: &FdGrid, potential: &dyn Fn(f64) -> f64, k: usize) -> f64 {
    let h = grid.h();
    let inv_h2 = 1.0 / (h * h);
    let diag: Vec<f64> = (0..grid.n)
        .map(|i| 2.0 * inv_h2 + potential(grid.r(i)))
        .collect();
    tridiag_eigenvalue(&diag, -inv_h2, k)
}

/// As [`fd_mode_eigenvalue`], but re-solves on the doubled grid and fails if
/// the eigenvalue moves by more than `tol`.
pub fn fd_mode_eigenvalue_checked(
    grid: &FdGrid,
    potential: &dyn Fn(f64) -> f64,
    k: usize,
    tol: f64,
) -> Result<f64, OracleError> {
    let coarse = fd_mode_eigenvalue(grid, potential, k);
    let fine = fd_mode_eigenvalue(&grid.refined(), potential, k);
    let shift = (fine - coarse).abs();
    if shift > tol {
        return Err(OracleError::GridTooCoarse { shift, tol });
    }
    Ok(fine)
}

/// The energy-dependent effective potential `eta W(r) + gamma(E) V(r)` for
/// the chosen branch and centrifugal mode.
pub fn effective_potential(
    sym: &SymmetryConfig,
    pot: &ThPotential,
    state: &QuantumState,
    mode: CentrifugalMode,
    e: f64,
) -> impl Fn(f64) -> f64 + 'static {
    let eta = state.eta(sym.branch);
    let gamma = kinematics(sym, e).gamma;
    let coeffs = pekeris_coefficients(pot);
    let pot = *pot;
    move |r: f64| {
        let w = match mode {
            CentrifugalMode::Exact => centrifugal_exact(eta, r),
            CentrifugalMode::Pekeris => centrifugal_pekeris(eta, &pot, &coeffs, r),
        };
        w + gamma * pot.value(r)
    }
}

/// `mu_n(E)`: the n-th smallest mode of the trial operator at energy `E`.
pub fn mode_eigenvalue(
    sym: &SymmetryConfig,
    pot: &ThPotential,
    state: &QuantumState,
    mode: CentrifugalMode,
    grid: &FdGrid,
    e: f64,
) -> f64 {
    let u = effective_potential(sym, pot, state, mode, e);
    fd_mode_eigenvalue(grid, &u, state.n as usize)
}

/// Self-consistency mismatch `g(E) = mu_n(E) + beta^2(E)`; a bound state of
/// the effective equation is a root of `g`.
pub fn self_consistency_mismatch(
    sym: &SymmetryConfig,
    pot: &ThPotential,
    state: &QuantumState,
    mode: CentrifugalMode,
    grid: &FdGrid,
    e: f64,
) -> f64 {
    mode_eigenvalue(sym, pot, state, mode, grid, e) + kinematics(sym, e).beta_sq
}

/// Number of energy samples in the root scan.
const SCAN_SAMPLES: usize = 160;
/// Fractional margin kept away from the window endpoints (where `beta^2`
/// vanishes and the spectrum degenerates).
const WINDOW_MARGIN: f64 = 1e-4;

/// Root-finds `g(E)` on the physical window by scanning for a sign change
/// and bisecting. Returns `NoRoot` with the scanned range of `g` when the
/// function never changes sign — for some configurations the trial operator
/// is positive definite on the whole window and no self-consistent solution
/// exists.
pub fn solve_self_consistent(
    sym: &SymmetryConfig,
    pot: &ThPotential,
    n: u32,
    kappa: i32,
    mode: CentrifugalMode,
    grid: &FdGrid,
) -> Result<OracleResult, OracleError> {
    let state = QuantumState::new(n, kappa)?;
    let (w_lo, w_hi) = bound_window(sym);
    let width = w_hi - w_lo;
    let lo = w_lo + WINDOW_MARGIN * width;
    let hi = w_hi - WINDOW_MARGIN * width;
    let g = |e: f64| self_consistency_mismatch(sym, pot, &state, mode, grid, e);

    let mut prev_e = lo;
    let mut prev_g = g(lo);
    let mut g_min = prev_g;
    let mut g_max = prev_g;
    let mut bracket = None;
    for i in 1..=SCAN_SAMPLES {
        let e = lo + (hi - lo) * i as f64 / SCAN_SAMPLES as f64;
        let ge = g(e);
        g_min = g_min.min(ge);
        g_max = g_max.max(ge);
        if prev_g == 0.0 || prev_g.signum() != ge.signum() {
            bracket = Some((prev_e, prev_g, e, ge));
            break;
        }
        prev_e = e;
        prev_g = ge;
    }
    let (mut a, mut ga, mut b, _gb) = bracket.ok_or(OracleError::NoRoot {
        lo,
        hi,
        detail: format!("g ranges over [{g_min:e}, {g_max:e}] without a sign change"),
    })?;
    for _ in 0..80 {
        let m = 0.5 * (a + b);
        let gm = g(m);
        if gm == 0.0 {
            a = m;
            b = m;
            break;
        }
        if ga.signum() != gm.signum() {
            b = m;
        } else {
            a = m;
            ga = gm;
        }
        if (b - a).abs() <= 1e-12 * width {
            break;
        }
    }
    let e = 0.5 * (a + b);
    let eigenvalue = mode_eigenvalue(sym, pot, &state, mode, grid, e);
    Ok(OracleResult {
        e,
        self_consistency_residual: eigenvalue + kinematics(sym, e).beta_sq,
        centrifugal_mode: mode,
        grid: *grid,
        eigenvalue,
    })
}

/// Runs the solve on the given grid and its doubled refinement; returns both
/// energies so callers can assess second-order convergence or extrapolate.
pub fn solve_with_refinement(
    sym: &SymmetryConfig,
    pot: &ThPotential,
    n: u32,
    kappa: i32,
    mode: CentrifugalMode,
    grid: &FdGrid,
) -> Result<(OracleResult, OracleResult), OracleError> {
    let coarse = solve_self_consistent(sym, pot, n, kappa, mode, grid)?;
    let fine = solve_self_consistent(sym, pot, n, kappa, mode, &grid.refined())?;
    Ok((coarse, fine))
}

/// Richardson extrapolation of a second-order scheme from the `(h, h/2)`
/// pair: `(4 E_fine - E_coarse) / 3`.
pub fn richardson(coarse: f64, fine: f64) -> f64 {
    (4.0 * fine - coarse) / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use thspec_spectra::presets;

    #[test]
    fn tridiag_eigenvalues_of_small_matrix() {
        // diag = 2, off = -1, size 3: eigenvalues 2 - sqrt(2), 2, 2 + sqrt(2).
        let diag = [2.0, 2.0, 2.0];
        let s = 2.0f64.sqrt();
        assert_relative_eq!(tridiag_eigenvalue(&diag, -1.0, 0), 2.0 - s, max_relative = 1e-10);
        assert_relative_eq!(tridiag_eigenvalue(&diag, -1.0, 1), 2.0, max_relative = 1e-10);
        assert_relative_eq!(tridiag_eigenvalue(&diag, -1.0, 2), 2.0 + s, max_relative = 1e-10);
    }

    #[test]
    fn oscillator_sanity_s_wave() {
        // -psi'' + r^2 psi on [1e-6, 12]: ground value 3 (= 4n + 2l + 3).
        let grid = FdGrid::new(1e-6, 12.0, 4000);
        let mu0 = fd_mode_eigenvalue(&grid, &|r| r * r, 0);
        assert_abs_diff_eq!(mu0, 3.0, epsilon = 1e-4);
        let mu1 = fd_mode_eigenvalue(&grid, &|r| r * r, 1);
        assert_abs_diff_eq!(mu1, 7.0, epsilon = 1e-4);
    }

    #[test]
    fn oscillator_sanity_p_wave() {
        let grid = FdGrid::new(1e-6, 12.0, 4000);
        let mu0 = fd_mode_eigenvalue(&grid, &|r| 2.0 / (r * r) + r * r, 0);
        assert_abs_diff_eq!(mu0, 5.0, epsilon = 1e-4);
    }

    #[test]
    fn eigenvalues_are_ordered() {
        let grid = FdGrid::new(1e-6, 12.0, 2000);
        let mus: Vec<f64> = (0..4).map(|k| fd_mode_eigenvalue(&grid, &|r| r * r, k)).collect();
        for w in mus.windows(2) {
            assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn grid_check_passes_oscillator() {
        let grid = FdGrid::new(1e-6, 12.0, 4000);
        let mu = fd_mode_eigenvalue_checked(&grid, &|r| r * r, 0, 1e-5).unwrap();
        assert_abs_diff_eq!(mu, 3.0, epsilon = 1e-4);
    }

    #[test]
    fn mismatch_is_continuous_in_energy() {
        let sym = presets::pspin();
        let pot = presets::potential(-0.01);
        let state = QuantumState::new(1, -1).unwrap();
        let grid = FdGrid::new(1e-3, pot.r_e() + 60.0 / pot.b_h(), 1500);
        let mut prev = None;
        for i in 0..30 {
            let e = -9.0 + 8.9 * i as f64 / 29.0;
            let g = self_consistency_mismatch(&sym, &pot, &state, CentrifugalMode::Pekeris, &grid, e);
            assert!(g.is_finite());
            if let Some(p) = prev {
                let step: f64 = 8.9 / 29.0;
                // Crude Lipschitz bound: the eigenvalue shift per unit of
                // gamma is bounded by max V on the grid (~400 here), plus
                // the beta^2 slope.
                assert!(
                    (g - p as f64).abs() < 2000.0 * step,
                    "jump {} at E = {e}",
                    (g - p) as f64
                );
            }
            prev = Some(g);
        }
    }

    #[test]
    fn pspin_hole_states_have_self_consistent_roots() {
        // The pseudospin trial operator acquires negative modes for E < 0,
        // so g(E) crosses zero inside the window.
        let sym = presets::pspin();
        let pot = presets::potential(-0.01);
        let grid = FdGrid::new(1e-3, pot.r_e() + 60.0 / pot.b_h(), 3000);
        let res = solve_self_consistent(&sym, &pot, 1, -1, CentrifugalMode::Pekeris, &grid).unwrap();
        assert!(res.e > -10.0 && res.e < 0.0);
        let scale = kinematics(&sym, res.e).beta_sq.abs().max(1.0);
        assert!(res.self_consistency_residual.abs() <= 1e-6 * scale);
    }

    #[test]
    fn spin_trial_operator_is_positive_definite() {
        // With gamma(E) >= 0 on the spin window the operator has no negative
        // modes while beta^2 > 0, so no self-consistent root exists.
        let sym = presets::spin();
        let pot = presets::potential(0.01);
        let grid = FdGrid::new(1e-3, pot.r_e() + 60.0 / pot.b_h(), 1500);
        let err = solve_self_consistent(&sym, &pot, 0, -2, CentrifugalMode::Pekeris, &grid);
        assert!(matches!(err, Err(OracleError::NoRoot { .. })));
    }

    #[test]
    fn refinement_pair_is_second_order_consistent() {
        let sym = presets::pspin();
        let pot = presets::potential(-0.01);
        let grid = FdGrid::new(1e-3, pot.r_e() + 60.0 / pot.b_h(), 1500);
        let (coarse, fine) =
            solve_with_refinement(&sym, &pot, 1, -1, CentrifugalMode::Pekeris, &grid).unwrap();
        assert!((fine.e - coarse.e).abs() < 1e-3 * coarse.e.abs().max(1.0));
        let extrapolated = richardson(coarse.e, fine.e);
        assert!((extrapolated - fine.e).abs() <= (fine.e - coarse.e).abs());
    }
}
