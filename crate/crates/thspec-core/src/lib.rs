//! Shared domain types for the Tietz-Hua (TH) relativistic bound-state solver:
//! the four-parameter potential, symmetry configuration, quantum-number
//! bookkeeping, physical constants with unit conversion, and the diatomic
//! molecule registry.
//!
//! Everything in this crate is immutable after construction and safe to share
//! across threads.

use serde::Deserialize;
use std::path::Path;
use thiserror::Error;

/// Errors produced by type construction and registry loading.
#[derive(Debug, Error)]
pub enum CoreError {
    /// The TH denominator `1 - c_h e^{-b_h (r - r_e)}` would vanish for some r > 0.
    #[error("potential has a pole inside the physical domain r > 0 (c_h = {c_h}, e^-alpha = {exp_neg_alpha})")]
    PoleInDomain { c_h: f64, exp_neg_alpha: f64 },
    /// A parameter violated its invariant.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// The molecule registry could not be read or parsed.
    #[error("registry error: {0}")]
    Registry(String),
}

/// Four-parameter Tietz-Hua molecular potential
/// `V(r) = D [(1 - e^{-b_h (r - r_e)}) / (1 - c_h e^{-b_h (r - r_e)})]^2`.
///
/// All quantities are in natural units (`hbar = c = 1`): `D` and `b_h` carry
/// inverse length, `r_e` length, `c_h` is dimensionless.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThPotential {
    d: f64,
    b_h: f64,
    r_e: f64,
    c_h: f64,
}

impl ThPotential {
    /// Validates invariants: `D > 0`, `b_h > 0`, `r_e > 0`, `c_h < 1`, and
    /// pole-freedom on `r > 0`, which for `c_h > 0` requires
    /// `c_h <= e^{-alpha}` (equality puts the pole exactly at `r = 0`,
    /// outside the open domain; the generalized-Morse mapping sits on that
    /// boundary).
    pub fn new(d: f64, b_h: f64, r_e: f64, c_h: f64) -> Result<Self, CoreError> {
        if !(d > 0.0) || !d.is_finite() {
            return Err(CoreError::InvalidParameter(format!("D must be > 0, got {d}")));
        }
        if !(b_h > 0.0) || !b_h.is_finite() {
            return Err(CoreError::InvalidParameter(format!("b_h must be > 0, got {b_h}")));
        }
        if !(r_e > 0.0) || !r_e.is_finite() {
            return Err(CoreError::InvalidParameter(format!("r_e must be > 0, got {r_e}")));
        }
        if !(c_h < 1.0) {
            return Err(CoreError::InvalidParameter(format!("c_h must be < 1, got {c_h}")));
        }
        let exp_neg_alpha = (-b_h * r_e).exp();
        if c_h > 0.0 && c_h > exp_neg_alpha {
            return Err(CoreError::PoleInDomain { c_h, exp_neg_alpha });
        }
        Ok(Self { d, b_h, r_e, c_h })
    }

    /// Well depth `D` (inverse length).
    pub fn d(&self) -> f64 {
        self.d
    }

    /// Decay parameter `b_h` (inverse length).
    pub fn b_h(&self) -> f64 {
        self.b_h
    }

    /// Equilibrium bond length `r_e`.
    pub fn r_e(&self) -> f64 {
        self.r_e
    }

    /// Dimensionless shape constant `c_h`.
    pub fn c_h(&self) -> f64 {
        self.c_h
    }

    /// `alpha = b_h r_e` (dimensionless).
    pub fn alpha(&self) -> f64 {
        self.b_h * self.r_e
    }

    /// Morse-equivalent range parameter `b_h / (1 - c_h)` (inverse length).
    pub fn morse_beta(&self) -> f64 {
        self.b_h / (1.0 - self.c_h)
    }

    /// Returns a copy with a different `c_h`, re-checking all invariants.
    pub fn with_c_h(&self, c_h: f64) -> Result<Self, CoreError> {
        Self::new(self.d, self.b_h, self.r_e, c_h)
    }

    /// The dimensionless shape variable `s = e^{-b_h (r - r_e)}`.
    pub fn s_of_r(&self, r: f64) -> f64 {
        (-self.b_h * (r - self.r_e)).exp()
    }

    /// Potential value `V(r)` for `r > 0`.
    pub fn value(&self, r: f64) -> f64 {
        let s = self.s_of_r(r);
        let ratio = (1.0 - s) / (1.0 - self.c_h * s);
        self.d * ratio * ratio
    }

    /// The `c_h -> 0` pointwise limit `D (1 - e^{-b_h (r - r_e)})^2`
    /// (Morse shape with asymptote `D`).
    pub fn morse_limit_value(&self, r: f64) -> f64 {
        let s = self.s_of_r(r);
        self.d * (1.0 - s) * (1.0 - s)
    }
}

/// Which exact-symmetry reduction of the coupled radial problem is solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymmetryBranch {
    /// Upper-component equation; centrifugal strength `kappa (kappa + 1)`.
    Spin,
    /// Lower-component equation; centrifugal strength `kappa (kappa - 1)`.
    Pspin,
}

/// Mass and symmetry-constant configuration defining the kinematic factors of
/// the effective radial equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetryConfig {
    pub branch: SymmetryBranch,
    /// Fermion mass `M` (inverse length).
    pub m: f64,
    /// Symmetry constant (inverse length): `C_s` for `Spin`, `C_ps` for `Pspin`.
    pub c: f64,
}

impl SymmetryConfig {
    pub fn new(branch: SymmetryBranch, m: f64, c: f64) -> Result<Self, CoreError> {
        if !(m > 0.0) || !m.is_finite() {
            return Err(CoreError::InvalidParameter(format!("M must be > 0, got {m}")));
        }
        if !c.is_finite() {
            return Err(CoreError::InvalidParameter(format!("C must be finite, got {c}")));
        }
        Ok(Self { branch, m, c })
    }

    /// Centrifugal strength `eta` for the given spin-orbit quantum number:
    /// `kappa (kappa + 1)` on the spin branch, `kappa (kappa - 1)` on pspin.
    pub fn eta(&self, kappa: i32) -> f64 {
        let k = kappa as f64;
        match self.branch {
            SymmetryBranch::Spin => k * (k + 1.0),
            SymmetryBranch::Pspin => k * (k - 1.0),
        }
    }
}

/// Radial quantum number and spin-orbit quantum number of a single level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuantumState {
    pub n: u32,
    pub kappa: i32,
}

const L_LETTERS: [char; 12] = ['s', 'p', 'd', 'f', 'g', 'h', 'i', 'k', 'l', 'm', 'n', 'o'];

impl QuantumState {
    pub fn new(n: u32, kappa: i32) -> Result<Self, CoreError> {
        if kappa == 0 {
            return Err(CoreError::InvalidParameter("kappa must be nonzero".into()));
        }
        Ok(Self { n, kappa })
    }

    /// Orbital angular momentum: `l = -kappa - 1` for `kappa < 0`, `l = kappa`
    /// for `kappa > 0`.
    pub fn l(&self) -> u32 {
        if self.kappa < 0 {
            (-self.kappa - 1) as u32
        } else {
            self.kappa as u32
        }
    }

    /// Pseudo-orbital angular momentum: `l~ = -kappa` for `kappa < 0`,
    /// `l~ = kappa - 1` for `kappa > 0`.
    pub fn l_tilde(&self) -> u32 {
        if self.kappa < 0 {
            (-self.kappa) as u32
        } else {
            (self.kappa - 1) as u32
        }
    }

    /// Twice the total angular momentum, `2j = 2|kappa| - 1`.
    pub fn j_twice(&self) -> u32 {
        2 * self.kappa.unsigned_abs() - 1
    }

    /// Centrifugal strength on the given branch.
    pub fn eta(&self, branch: SymmetryBranch) -> f64 {
        let k = self.kappa as f64;
        match branch {
            SymmetryBranch::Spin => k * (k + 1.0),
            SymmetryBranch::Pspin => k * (k - 1.0),
        }
    }

    /// Spectroscopic label such as `0p_{3/2}`, built from `(n, l, j)`.
    pub fn label(&self) -> String {
        let l = self.l() as usize;
        let letter = L_LETTERS.get(l).copied().unwrap_or('?');
        format!("{}{}_{{{}/2}}", self.n, letter, self.j_twice())
    }
}

/// Convention used to convert a wavenumber (cm^-1) into an energy (eV).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WavenumberConvention {
    /// `E = 2 pi hbar c nu` (photon energy of angular wavenumber).
    TwoPi,
    /// `E = hbar c nu`.
    Plain,
}

/// Physical constants used for molecular (eV / angstrom) runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// `hbar c` in eV * angstrom.
    pub hbar_c_ev_angstrom: f64,
    /// Atomic mass unit in MeV.
    pub amu_mev: f64,
    pub convention: WavenumberConvention,
}

/// One angstrom expressed in centimetres.
const ANGSTROM_PER_CM: f64 = 1.0e8;

impl PhysicalConstants {
    pub const HBAR_C_EV_ANGSTROM: f64 = 1973.29;
    pub const AMU_MEV: f64 = 931.494028;

    pub fn new(convention: WavenumberConvention) -> Self {
        Self {
            hbar_c_ev_angstrom: Self::HBAR_C_EV_ANGSTROM,
            amu_mev: Self::AMU_MEV,
            convention,
        }
    }

    /// Conversion factor from cm^-1 to eV under the configured convention.
    pub fn wavenumber_to_ev(&self) -> f64 {
        let base = self.hbar_c_ev_angstrom / ANGSTROM_PER_CM;
        match self.convention {
            WavenumberConvention::TwoPi => 2.0 * std::f64::consts::PI * base,
            WavenumberConvention::Plain => base,
        }
    }

    /// Reduced mass in natural units (inverse angstrom): `mu * amu / (hbar c)`.
    pub fn mass_to_inv_angstrom(&self, mu_amu: f64) -> f64 {
        mu_amu * self.amu_mev * 1.0e6 / self.hbar_c_ev_angstrom
    }

    /// Energy in eV to natural units (inverse angstrom).
    pub fn ev_to_inv_angstrom(&self, e_ev: f64) -> f64 {
        e_ev / self.hbar_c_ev_angstrom
    }

    /// Natural units (inverse angstrom) back to eV.
    pub fn inv_angstrom_to_ev(&self, e: f64) -> f64 {
        e * self.hbar_c_ev_angstrom
    }
}

/// One row of the molecule registry, in spectroscopic units.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct MoleculeRecord {
    pub name: String,
    pub c_h: f64,
    pub mu_amu: f64,
    pub b_h_inv_angstrom: f64,
    pub r_e_angstrom: f64,
    #[serde(rename = "D_wavenumber")]
    pub d_wavenumber: f64,
}

/// The registry shipped with the crate (CSV, one row per molecule).
pub fn builtin_registry_csv() -> &'static str {
    include_str!("../assets/molecules.csv")
}

/// Parses a registry from CSV text with header
/// `name,c_h,mu_amu,b_h_inv_angstrom,r_e_angstrom,D_wavenumber`.
pub fn load_registry_from_str(text: &str) -> Result<Vec<MoleculeRecord>, CoreError> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let mut out = Vec::new();
    for row in reader.deserialize() {
        let rec: MoleculeRecord = row.map_err(|e| CoreError::Registry(e.to_string()))?;
        out.push(rec);
    }
    if out.is_empty() {
        return Err(CoreError::Registry("registry contains no rows".into()));
    }
    Ok(out)
}

/// Loads a registry from a CSV file on disk.
pub fn load_registry_from_path(path: &Path) -> Result<Vec<MoleculeRecord>, CoreError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CoreError::Registry(format!("{}: {e}", path.display())))?;
    load_registry_from_str(&text)
}

/// Converts a registry row into natural units (everything in inverse
/// angstrom): the potential and the reduced mass `mu * amu / (hbar c)`.
pub fn to_natural_units(
    rec: &MoleculeRecord,
    consts: &PhysicalConstants,
) -> Result<(ThPotential, f64), CoreError> {
    let d_ev = rec.d_wavenumber * consts.wavenumber_to_ev();
    let d = consts.ev_to_inv_angstrom(d_ev);
    let mass = consts.mass_to_inv_angstrom(rec.mu_amu);
    let pot = ThPotential::new(d, rec.b_h_inv_angstrom, rec.r_e_angstrom, rec.c_h)?;
    Ok((pot, mass))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;

    fn table_pot() -> ThPotential {
        ThPotential::new(5.0, 0.988879, 2.40873, 0.01).unwrap()
    }

    #[test]
    fn value_vanishes_at_equilibrium() {
        let pot = table_pot();
        assert_eq!(pot.value(pot.r_e()), 0.0);
    }

    #[test]
    fn value_approaches_well_depth_at_large_r() {
        let pot = ThPotential::new(15.0, 0.8, 0.4, 0.0).unwrap();
        assert_relative_eq!(pot.value(1e4), 15.0, max_relative = 1e-12);
    }

    #[test]
    fn value_matches_high_precision_reference() {
        // Independent arbitrary-precision substitution at r = 3.
        let pot = table_pot();
        assert_relative_eq!(pot.value(3.0), 0.991037145621017, max_relative = 1e-13);
    }

    #[test]
    fn derived_quantities_are_exact() {
        let pot = table_pot();
        assert_eq!(pot.alpha(), 0.988879 * 2.40873);
        assert_eq!(pot.morse_beta() * (1.0 - pot.c_h()), pot.b_h());
    }

    #[test]
    fn pole_check_rejects_large_positive_c_h() {
        let err = ThPotential::new(5.0, 0.988879, 2.40873, 0.5).unwrap_err();
        assert!(matches!(err, CoreError::PoleInDomain { .. }));
    }

    #[test]
    fn pole_check_allows_boundary_and_negative_c_h() {
        let alpha: f64 = 0.988879 * 2.40873;
        // Boundary value used by the generalized-Morse mapping: pole at r = 0.
        assert!(ThPotential::new(5.0, 0.988879, 2.40873, (-alpha).exp()).is_ok());
        assert!(ThPotential::new(5.0, 0.988879, 2.40873, -0.139013).is_ok());
    }

    #[test]
    fn monotone_increase_beyond_equilibrium() {
        for c_h in [0.0, 0.05] {
            let pot = ThPotential::new(5.0, 0.988879, 2.40873, c_h).unwrap();
            let mut prev = pot.value(pot.r_e());
            for i in 1..=1000 {
                let r = pot.r_e() + 20.0 * i as f64 / 1000.0;
                let v = pot.value(r);
                assert!(v > prev, "V not increasing at r = {r}");
                prev = v;
            }
        }
    }

    #[test]
    fn small_c_h_matches_morse_limit() {
        let pot = ThPotential::new(5.0, 0.988879, 2.40873, 1e-9).unwrap();
        for i in 0..50 {
            let r = 0.5 + 0.2 * i as f64;
            let scale = pot.d().max(pot.value(r).abs());
            assert_abs_diff_eq!(
                pot.value(r),
                pot.morse_limit_value(r),
                // c_h = 1e-9 perturbs the value at relative order 2 c_h s,
                // and s reaches ~6.5 at the left end of the sweep.
                epsilon = 1e-7 * scale
            );
        }
    }

    #[test]
    fn eta_per_branch() {
        let spin = SymmetryConfig::new(SymmetryBranch::Spin, 10.0, 10.0).unwrap();
        let pspin = SymmetryConfig::new(SymmetryBranch::Pspin, 10.0, -10.0).unwrap();
        assert_eq!(spin.eta(-2), 2.0);
        assert_eq!(spin.eta(1), 2.0);
        assert_eq!(pspin.eta(-1), 2.0);
        assert_eq!(pspin.eta(2), 2.0);
        assert_eq!(spin.eta(-1), 0.0);
        assert_eq!(pspin.eta(1), 0.0);
    }

    #[test]
    fn labels_follow_spectroscopic_convention() {
        assert_eq!(QuantumState::new(0, -2).unwrap().label(), "0p_{3/2}");
        assert_eq!(QuantumState::new(1, -1).unwrap().label(), "1s_{1/2}");
        assert_eq!(QuantumState::new(2, -4).unwrap().label(), "2f_{7/2}");
        assert_eq!(QuantumState::new(0, 2).unwrap().label(), "0d_{3/2}");
    }

    #[test]
    fn kappa_zero_is_rejected() {
        assert!(QuantumState::new(0, 0).is_err());
    }

    #[test]
    fn wavenumber_conversion_factors() {
        let c2 = PhysicalConstants::new(WavenumberConvention::TwoPi);
        let c1 = PhysicalConstants::new(WavenumberConvention::Plain);
        assert_relative_eq!(c2.wavenumber_to_ev(), 1.2398547e-4, max_relative = 1e-6);
        assert_relative_eq!(c1.wavenumber_to_ev(), 1.97329e-5, max_relative = 1e-12);
    }

    #[test]
    fn registry_ships_two_molecules() {
        let regs = load_registry_from_str(builtin_registry_csv()).unwrap();
        assert_eq!(regs.len(), 2);
        assert_eq!(regs[0].name, "H2");
        assert_eq!(regs[0].c_h, 0.170066);
        assert_eq!(regs[1].name, "I2");
        assert_eq!(regs[1].c_h, -0.139013);
        assert_eq!(regs[1].mu_amu, 10.612);
    }

    #[test]
    fn natural_units_reduced_mass() {
        // mu * amu / (hbar c) for the lighter molecule; hand arithmetic gives
        // 0.50391 * 931.494028e6 / 1973.29 = 2.3787135e5 inverse angstrom.
        let consts = PhysicalConstants::new(WavenumberConvention::TwoPi);
        let regs = load_registry_from_str(builtin_registry_csv()).unwrap();
        let (pot, mass) = to_natural_units(&regs[0], &consts).unwrap();
        assert_relative_eq!(mass, 2.3787135e5, max_relative = 1e-6);
        assert_eq!(pot.c_h(), 0.170066);
        // Well depth: 38318 cm^-1 * (2 pi * 1973.29e-8 eV) / 1973.29 eV*angstrom.
        assert_relative_eq!(pot.d(), 38318.0 * 2.0 * std::f64::consts::PI * 1e-8, max_relative = 1e-12);
    }

    #[test]
    fn natural_units_round_trip() {
        let consts = PhysicalConstants::new(WavenumberConvention::TwoPi);
        let regs = load_registry_from_str(builtin_registry_csv()).unwrap();
        for rec in &regs {
            let (pot, mass) = to_natural_units(rec, &consts).unwrap();
            let d_back = consts.inv_angstrom_to_ev(pot.d()) / consts.wavenumber_to_ev();
            let mu_back = mass * consts.hbar_c_ev_angstrom / (consts.amu_mev * 1.0e6);
            assert_relative_eq!(d_back, rec.d_wavenumber, max_relative = 1e-12);
            assert_relative_eq!(mu_back, rec.mu_amu, max_relative = 1e-12);
            assert_eq!(pot.b_h(), rec.b_h_inv_angstrom);
            assert_eq!(pot.r_e(), rec.r_e_angstrom);
        }
    }

    proptest! {
        #[test]
        fn potential_nonnegative_and_finite(
            d in 0.1f64..50.0,
            b in 0.1f64..3.0,
            re in 0.3f64..5.0,
            c in -0.5f64..0.02,
            r in 1e-3f64..50.0,
        ) {
            let c = c.min(0.9 * (-b * re).exp());
            let pot = ThPotential::new(d, b, re, c).unwrap();
            let v = pot.value(r);
            prop_assert!(v.is_finite());
            prop_assert!(v >= 0.0);
        }

        #[test]
        fn eta_is_nonnegative_for_valid_kappa(kappa in -8i32..8) {
            prop_assume!(kappa != 0);
            let st = QuantumState::new(0, kappa).unwrap();
            prop_assert!(st.eta(SymmetryBranch::Spin) >= 0.0);
            prop_assert!(st.eta(SymmetryBranch::Pspin) >= 0.0);
        }
    }
}
