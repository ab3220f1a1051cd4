//! Command-line surface for the Tietz-Hua bound-state machinery: reference
//! tables, single-level queries, parameter sweeps, wavefunction sampling,
//! oracle verification, and the molecule registry.

pub mod golden;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;

use output::{Format, NumberStyle, Report, Value};
use thspec_core::{
    load_registry_from_path, load_registry_from_str, to_natural_units, MoleculeRecord,
    PhysicalConstants, QuantumState, SymmetryBranch, SymmetryConfig, ThPotential,
    WavenumberConvention,
};
use thspec_oracle::{CentrifugalMode, FdGrid, OracleError};
use thspec_spectra::{
    bound_window, solve_levels_in_window, EnergyEquation, EnergyLevel, MorseVersion,
    QuantizationBranch, DEFAULT_GRID_N,
};
use thspec_wave::SpinorSolution;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NO_STATE: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

/// Errors carrying their process exit code.
#[derive(Debug)]
pub enum CmdError {
    Usage(String),
    NoState(String),
    VerifyFailed(String),
    Other(String),
}

impl CmdError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CmdError::Usage(_) => EXIT_USAGE,
            CmdError::NoState(_) => EXIT_NO_STATE,
            CmdError::VerifyFailed(_) => EXIT_VERIFY,
            CmdError::Other(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CmdError::Usage(m) | CmdError::NoState(m) | CmdError::VerifyFailed(m)
            | CmdError::Other(m) => m,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "thspec", version, about = "Relativistic bound states in the Tietz-Hua potential")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = FormatArg::Text)]
    pub format: FormatArg,
    /// Write output to a file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Resolution knob: wavefunction sample count and oracle grid size.
    #[arg(long = "grid-n", global = true)]
    pub grid_n: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve explicitly requested (n, kappa) levels.
    Spectrum(SpectrumArgs),
    /// Regenerate an embedded reference table with deltas.
    Table(TableArgs),
    /// Sweep one potential parameter and emit (value, E) series.
    Sweep(SweepArgs),
    /// Sample a normalized two-component wavefunction.
    Wavefunction(WaveArgs),
    /// Cross-check analytic levels against the finite-difference oracle.
    Verify(VerifyArgs),
    /// List the molecule registry.
    Molecules(MoleculesArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormatArg {
    Csv,
    Json,
    Text,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
            FormatArg::Text => Format::Text,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    Table2,
    Table3,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnitsArg {
    /// Natural units (fm, fm^-1).
    Fm,
    /// Molecular units (angstrom internally, energies reported in eV).
    #[value(name = "eVA", alias = "eva")]
    EvA,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymArg {
    Spin,
    Pspin,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum CsModeArg {
    /// C = +mu (spin) / -mu (pspin), mu the reduced mass; energies as-is.
    Constant,
    /// C = +M / -M after any --m override; energies as-is.
    EqualMass,
    /// C = 0; report E - M (spin) / E + M (pspin).
    ZeroWithBinding,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConventionArg {
    /// 1 cm^-1 = 2 pi * 1973.29e-8 eV.
    #[value(name = "2pi")]
    TwoPi,
    /// 1 cm^-1 = 1973.29e-8 eV.
    Plain,
}

/// Shared model-selection flags.
#[derive(Args, Debug, Clone)]
pub struct ModelArgs {
    /// Natural-unit parameter preset.
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    /// Molecule name from the registry (implies eVA units).
    #[arg(long)]
    pub molecule: Option<String>,
    #[arg(long, value_enum)]
    pub units: Option<UnitsArg>,
    #[arg(long, value_enum)]
    pub symmetry: Option<SymArg>,
    /// Shape parameter override.
    #[arg(long, allow_hyphen_values = true)]
    pub ch: Option<f64>,
    /// Range parameter override (inverse length).
    #[arg(long)]
    pub bh: Option<f64>,
    /// Equilibrium radius override.
    #[arg(long)]
    pub re: Option<f64>,
    /// Well depth override (inverse length).
    #[arg(long)]
    pub d: Option<f64>,
    /// Mass override (inverse length).
    #[arg(long)]
    pub m: Option<f64>,
    #[arg(long = "cs-mode", value_enum, default_value_t = CsModeArg::Constant)]
    pub cs_mode: CsModeArg,
    #[arg(long = "wavenumber-convention", value_enum, default_value_t = ConventionArg::TwoPi)]
    pub wavenumber_convention: ConventionArg,
    /// Solve the c_h -> 0 closed form instead of the full shape.
    #[arg(long = "morse-version", value_parser = clap::value_parser!(u8).range(1..=2))]
    pub morse_version: Option<u8>,
}

/// A fully resolved computation context.
#[derive(Debug, Clone)]
pub struct Model {
    pub sym: SymmetryConfig,
    pub pot: ThPotential,
    pub units: UnitsArg,
    pub consts: PhysicalConstants,
    /// Subtracted from raw energies before display.
    pub report_offset: f64,
    pub equation: EnergyEquation,
    pub molecule: Option<String>,
}

impl Model {
    pub fn display_energy(&self, e: f64) -> f64 {
        let v = e - self.report_offset;
        match self.units {
            UnitsArg::Fm => v,
            UnitsArg::EvA => self.consts.inv_angstrom_to_ev(v),
        }
    }

    pub fn style(&self) -> NumberStyle {
        match self.units {
            UnitsArg::Fm => NumberStyle::Fixed7,
            UnitsArg::EvA => NumberStyle::Sig9,
        }
    }

    pub fn describe(&self, rep: &mut Report) {
        rep.param("symmetry", json!(branch_name(self.sym.branch)));
        rep.param("units", json!(match self.units {
            UnitsArg::Fm => "fm",
            UnitsArg::EvA => "eVA",
        }));
        if let Some(name) = &self.molecule {
            rep.param("molecule", json!(name));
        }
        rep.param("d", json!(self.pot.d()));
        rep.param("b_h", json!(self.pot.b_h()));
        rep.param("r_e", json!(self.pot.r_e()));
        rep.param("c_h", json!(self.pot.c_h()));
        rep.param("m", json!(self.sym.m));
        rep.param("c_sym", json!(self.sym.c));
        rep.param("equation", json!(equation_name(self.equation)));
    }
}

fn branch_name(b: SymmetryBranch) -> &'static str {
    match b {
        SymmetryBranch::Spin => "spin",
        SymmetryBranch::Pspin => "pspin",
    }
}

fn equation_name(eq: EnergyEquation) -> &'static str {
    match eq {
        EnergyEquation::Th { .. } => "tietz-hua",
        EnergyEquation::Morse { version: MorseVersion::I } => "morse-1",
        EnergyEquation::Morse { version: MorseVersion::II } => "morse-2",
    }
}

/// Natural-unit preset parameters.
mod preset {
    pub const D: f64 = 5.0;
    pub const B_H: f64 = 0.988879;
    pub const R_E: f64 = 2.40873;
    pub const M: f64 = 10.0;
    pub const CH_SPIN: f64 = 0.01;
    pub const CH_PSPIN: f64 = -0.01;
}

/// Loads the molecule registry from `THSPEC_REGISTRY` (if set) or the
/// built-in data.
pub fn registry() -> Result<Vec<MoleculeRecord>, CmdError> {
    registry_from(std::env::var_os("THSPEC_REGISTRY").map(PathBuf::from))
}

/// Loads the registry from an explicit path, or the built-in data when none.
pub fn registry_from(path: Option<PathBuf>) -> Result<Vec<MoleculeRecord>, CmdError> {
    match path {
        Some(p) => load_registry_from_path(&p)
            .map_err(|e| CmdError::Usage(format!("registry {}: {e}", p.display()))),
        None => load_registry_from_str(thspec_core::builtin_registry_csv())
            .map_err(|e| CmdError::Other(format!("built-in registry: {e}"))),
    }
}

pub fn resolve_model(args: &ModelArgs) -> Result<Model, CmdError> {
    let branch = match (args.symmetry, args.preset) {
        (Some(SymArg::Spin), _) => SymmetryBranch::Spin,
        (Some(SymArg::Pspin), _) => SymmetryBranch::Pspin,
        (None, Some(Preset::Table3)) => SymmetryBranch::Pspin,
        _ => SymmetryBranch::Spin,
    };
    let sign = match branch {
        SymmetryBranch::Spin => 1.0,
        SymmetryBranch::Pspin => -1.0,
    };
    let convention = match args.wavenumber_convention {
        ConventionArg::TwoPi => WavenumberConvention::TwoPi,
        ConventionArg::Plain => WavenumberConvention::Plain,
    };
    let consts = PhysicalConstants::new(convention);

    let (mut d, mut b_h, mut r_e, mut c_h, mass, units, molecule) = match &args.molecule {
        Some(name) => {
            let regs = registry()?;
            let rec = regs
                .iter()
                .find(|r| r.name.eq_ignore_ascii_case(name))
                .ok_or_else(|| CmdError::Usage(format!("unknown molecule {name:?}")))?;
            let (pot, mass) = to_natural_units(rec, &consts)
                .map_err(|e| CmdError::Usage(format!("molecule {name:?}: {e}")))?;
            (
                pot.d(),
                pot.b_h(),
                pot.r_e(),
                pot.c_h(),
                mass,
                UnitsArg::EvA,
                Some(rec.name.clone()),
            )
        }
        None => {
            let c_h = match branch {
                SymmetryBranch::Spin => preset::CH_SPIN,
                SymmetryBranch::Pspin => preset::CH_PSPIN,
            };
            (
                preset::D,
                preset::B_H,
                preset::R_E,
                c_h,
                preset::M,
                UnitsArg::Fm,
                None,
            )
        }
    };
    if let Some(u) = args.units {
        if args.molecule.is_some() && u == UnitsArg::Fm {
            return Err(CmdError::Usage(
                "--units fm conflicts with --molecule (molecular runs report eV)".into(),
            ));
        }
        if args.molecule.is_none() && u == UnitsArg::EvA {
            return Err(CmdError::Usage(
                "--units eVA requires --molecule".into(),
            ));
        }
    }
    if let Some(v) = args.d {
        d = v;
    }
    if let Some(v) = args.bh {
        b_h = v;
    }
    if let Some(v) = args.re {
        r_e = v;
    }
    if let Some(v) = args.ch {
        c_h = v;
    }
    let m = args.m.unwrap_or(mass);
    let pot = ThPotential::new(d, b_h, r_e, c_h)
        .map_err(|e| CmdError::Usage(format!("invalid potential parameters: {e}")))?;
    let (c, report_offset) = match args.cs_mode {
        CsModeArg::Constant => (sign * mass, 0.0),
        CsModeArg::EqualMass => (sign * m, 0.0),
        CsModeArg::ZeroWithBinding => (0.0, sign * m),
    };
    let sym = SymmetryConfig::new(branch, m, c)
        .map_err(|e| CmdError::Usage(format!("invalid symmetry configuration: {e}")))?;
    let equation = match args.morse_version {
        None => EnergyEquation::Th {
            branch: QuantizationBranch::Table,
        },
        Some(1) => EnergyEquation::Morse {
            version: MorseVersion::I,
        },
        Some(2) => EnergyEquation::Morse {
            version: MorseVersion::II,
        },
        Some(_) => unreachable!("clap range check"),
    };
    Ok(Model {
        sym,
        pot,
        units,
        consts,
        report_offset,
        equation,
        molecule,
    })
}

/// Solves one state and picks the physical root: the one closest to the
/// reporting origin (window edge where the effective coupling vanishes).
pub fn solve_one(model: &Model, n: u32, kappa: i32) -> Result<Option<EnergyLevel>, CmdError> {
    let levels = solve_levels_in_window(
        &model.sym,
        &model.pot,
        n,
        kappa,
        model.equation,
        bound_window(&model.sym),
        DEFAULT_GRID_N,
    )
    .map_err(|e| CmdError::Usage(format!("state (n={n}, kappa={kappa}): {e}")))?;
    Ok(levels
        .into_iter()
        .min_by(|a, b| {
            let da = (a.e - model.report_offset).abs();
            let db = (b.e - model.report_offset).abs();
            da.total_cmp(&db)
        }))
}

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Radial quantum number(s).
    #[arg(long = "n", required = true)]
    pub n: Vec<u32>,
    /// Spin-orbit quantum number(s), nonzero.
    #[arg(long = "kappa", required = true, allow_hyphen_values = true)]
    pub kappa: Vec<i32>,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    /// Which reference table: 2, 3, 5, or 6.
    #[arg(value_parser = clap::value_parser!(u8))]
    pub which: u8,
    #[command(flatten)]
    pub model: ModelArgs,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepParam {
    Bh,
    Ch,
    Re,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_enum)]
    pub param: SweepParam,
    #[arg(long, allow_hyphen_values = true)]
    pub lo: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub hi: f64,
    #[arg(long)]
    pub steps: usize,
    #[arg(long = "n", required = true)]
    pub n: Vec<u32>,
    #[arg(long = "kappa", required = true, allow_hyphen_values = true)]
    pub kappa: Vec<i32>,
}

#[derive(Args, Debug)]
pub struct WaveArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long = "n")]
    pub n: u32,
    #[arg(long = "kappa", allow_hyphen_values = true)]
    pub kappa: i32,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Scope of the verification run.
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
}

#[derive(Args, Debug)]
pub struct MoleculesArgs {}

/// Entry point used by both the binary and the tests.
pub fn run_from<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            if code == EXIT_OK {
                let _ = write!(out, "{e}");
            } else {
                eprintln!("{e}");
            }
            return code;
        }
    };
    match execute(&cli) {
        Ok(report) => {
            let format = cli.format.into();
            let result = match &cli.out {
                Some(path) => std::fs::File::create(path)
                    .map_err(|e| std::io::Error::other(format!("{}: {e}", path.display())))
                    .and_then(|mut f| report.render(format, &mut f)),
                None => report.render(format, out),
            };
            match result {
                Ok(()) => EXIT_OK,
                Err(e) => {
                    eprintln!("thspec: {e}");
                    1
                }
            }
        }
        Err(err) => {
            // A failed run may still carry a partial report worth printing.
            eprintln!("thspec: {}", err.message());
            err.exit_code()
        }
    }
}

fn execute(cli: &Cli) -> Result<Report, CmdError> {
    match &cli.command {
        Command::Spectrum(a) => cmd_spectrum(a),
        Command::Table(a) => cmd_table(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Wavefunction(a) => cmd_wavefunction(a, cli.grid_n.unwrap_or(1200)),
        Command::Verify(a) => cmd_verify(a, cli.grid_n.unwrap_or(6000)),
        Command::Molecules(a) => cmd_molecules(a),
    }
}

fn level_columns() -> Vec<&'static str> {
    vec![
        "n", "kappa", "label", "e", "residual", "bracket_lo", "bracket_hi", "status",
    ]
}

fn push_level_row(rep: &mut Report, model: &Model, n: u32, kappa: i32, level: &Option<EnergyLevel>) {
    let label = QuantumState::new(n, kappa)
        .map(|s| s.label())
        .unwrap_or_default();
    match level {
        Some(l) => rep.push(vec![
            Value::Int(n as i64),
            Value::Int(kappa as i64),
            Value::Str(label),
            Value::Num(model.display_energy(l.e)),
            Value::Num(l.residual),
            Value::Num(model.display_energy(l.bracket.0)),
            Value::Num(model.display_energy(l.bracket.1)),
            Value::Str("ok".into()),
        ]),
        None => rep.push(vec![
            Value::Int(n as i64),
            Value::Int(kappa as i64),
            Value::Str(label),
            Value::Null,
            Value::Null,
            Value::Null,
            Value::Null,
            Value::Str("no-bound-state".into()),
        ]),
    }
}

fn cmd_spectrum(args: &SpectrumArgs) -> Result<Report, CmdError> {
    let model = resolve_model(&args.model)?;
    let mut states = Vec::new();
    for &n in &args.n {
        for &kappa in &args.kappa {
            if kappa == 0 {
                return Err(CmdError::Usage("kappa must be nonzero".into()));
            }
            states.push((n, kappa));
        }
    }
    let solved: Vec<_> = states
        .par_iter()
        .map(|&(n, kappa)| solve_one(&model, n, kappa).map(|l| (n, kappa, l)))
        .collect::<Result<_, _>>()?;
    let mut rep = Report::new(level_columns(), model.style());
    model.describe(&mut rep);
    let mut missing = Vec::new();
    for (n, kappa, level) in &solved {
        push_level_row(&mut rep, &model, *n, *kappa, level);
        if level.is_none() {
            missing.push(format!("(n={n}, kappa={kappa})"));
        }
    }
    if !missing.is_empty() {
        // Emit what we have, then fail with the no-such-state code.
        let mut buf = Vec::new();
        let _ = rep.render(Format::Text, &mut buf);
        eprint!("{}", String::from_utf8_lossy(&buf));
        return Err(CmdError::NoState(format!(
            "no bound state for {}",
            missing.join(", ")
        )));
    }
    Ok(rep)
}

fn natural_model(branch: SymArg, ch: f64, morse: Option<u8>) -> Result<Model, CmdError> {
    resolve_model(&ModelArgs {
        preset: None,
        molecule: None,
        units: None,
        symmetry: Some(branch),
        ch: Some(ch),
        bh: None,
        re: None,
        d: None,
        m: None,
        cs_mode: CsModeArg::Constant,
        wavenumber_convention: ConventionArg::TwoPi,
        morse_version: morse,
    })
}

fn cmd_table(args: &TableArgs) -> Result<Report, CmdError> {
    match args.which {
        2 | 3 => natural_table(args.which),
        5 | 6 => molecular_table(args.which, &args.model),
        w => Err(CmdError::Usage(format!(
            "no reference table {w}; available: 2, 3, 5, 6"
        ))),
    }
}

fn natural_table(which: u8) -> Result<Report, CmdError> {
    let (branch, ch, rows): (SymArg, f64, &[(u32, i32, i32, f64, f64, f64)]) = if which == 2 {
        (SymArg::Spin, preset::CH_SPIN, &golden::SPIN_TABLE)
    } else {
        (SymArg::Pspin, preset::CH_PSPIN, &golden::PSPIN_TABLE)
    };
    let th = natural_model(branch, ch, None)?;
    let morse2 = natural_model(branch, 0.0, Some(2))?;
    let morse1 = natural_model(branch, 0.0, Some(1))?;

    let solved: Vec<_> = rows
        .par_iter()
        .map(|&(n, kappa, _, g2, g1, gth)| {
            let e2 = solve_one(&morse2, n, kappa)?.map(|l| l.e);
            let e1 = solve_one(&morse1, n, kappa)?.map(|l| l.e);
            let eth = solve_one(&th, n, kappa)?.map(|l| l.e);
            Ok::<_, CmdError>((n, kappa, e2, g2, e1, g1, eth, gth))
        })
        .collect::<Result<_, _>>()?;

    let mut rep = Report::new(
        vec![
            "n", "kappa", "label", "e_morse2", "delta_morse2", "e_morse1", "delta_morse1",
            "e_th", "delta_th",
        ],
        NumberStyle::Fixed7,
    );
    th.describe(&mut rep);
    rep.param("table", json!(which));
    for (n, kappa, e2, g2, e1, g1, eth, gth) in solved {
        let label = QuantumState::new(n, kappa).map(|s| s.label()).unwrap_or_default();
        let cell = |e: Option<f64>| e.map(Value::Num).unwrap_or(Value::Null);
        let delta = |e: Option<f64>, g: f64| e.map(|v| Value::Num(v - g)).unwrap_or(Value::Null);
        rep.push(vec![
            Value::Int(n as i64),
            Value::Int(kappa as i64),
            Value::Str(label),
            cell(e2),
            delta(e2, g2),
            cell(e1),
            delta(e1, g1),
            cell(eth),
            delta(eth, gth),
        ]);
    }
    Ok(rep)
}

fn molecular_table(which: u8, conventions: &ModelArgs) -> Result<Report, CmdError> {
    let (branch, rows): (SymArg, &[(u32, i32, f64, f64)]) = if which == 5 {
        (SymArg::Spin, &golden::MOLECULAR_SPIN_TABLE)
    } else {
        (SymArg::Pspin, &golden::MOLECULAR_PSPIN_TABLE)
    };
    let mut rep = Report::new(
        vec![
            "molecule", "n", "kappa", "label", "e_computed", "e_reference", "delta", "status",
        ],
        NumberStyle::Sig9,
    );
    rep.param("table", json!(which));
    rep.param("cs_mode", json!(format!("{:?}", conventions.cs_mode)));
    rep.param(
        "wavenumber_convention",
        json!(format!("{:?}", conventions.wavenumber_convention)),
    );
    let mut max_delta: f64 = 0.0;
    let mut any_missing = false;
    for (mol_idx, mol) in ["H2", "I2"].iter().enumerate() {
        let model = resolve_model(&ModelArgs {
            preset: None,
            molecule: Some(mol.to_string()),
            units: None,
            symmetry: Some(branch),
            ch: None,
            bh: None,
            re: None,
            d: None,
            m: None,
            cs_mode: conventions.cs_mode,
            wavenumber_convention: conventions.wavenumber_convention,
            morse_version: None,
        })?;
        let solved: Vec<_> = rows
            .par_iter()
            .map(|&(n, kappa, h2, i2)| {
                let reference = if mol_idx == 0 { h2 } else { i2 };
                let e = solve_one(&model, n, kappa)?.map(|l| model.display_energy(l.e));
                Ok::<_, CmdError>((n, kappa, e, reference))
            })
            .collect::<Result<_, _>>()?;
        for (n, kappa, e, reference) in solved {
            let label = QuantumState::new(n, kappa).map(|s| s.label()).unwrap_or_default();
            match e {
                Some(v) => {
                    max_delta = max_delta.max((v - reference).abs());
                    rep.push(vec![
                        Value::Str(mol.to_string()),
                        Value::Int(n as i64),
                        Value::Int(kappa as i64),
                        Value::Str(label),
                        Value::Num(v),
                        Value::Num(reference),
                        Value::Num(v - reference),
                        Value::Str("ok".into()),
                    ]);
                }
                None => {
                    any_missing = true;
                    rep.push(vec![
                        Value::Str(mol.to_string()),
                        Value::Int(n as i64),
                        Value::Int(kappa as i64),
                        Value::Str(label),
                        Value::Null,
                        Value::Num(reference),
                        Value::Null,
                        Value::Str("no-bound-state".into()),
                    ]);
                }
            }
        }
    }
    rep.note(format!(
        "discrepancy report: max |computed - reference| = {max_delta:.6} eV{}",
        if any_missing { "; some states have no bound solution" } else { "" }
    ));
    rep.note(
        "the implemented energy condition does not reproduce these reference \
         values under any documented convention combination; computed values \
         are the self-consistent roots of the stated equation (see README)",
    );
    Ok(rep)
}

fn cmd_sweep(args: &SweepArgs) -> Result<Report, CmdError> {
    if !(args.lo < args.hi) {
        return Err(CmdError::Usage("sweep requires --lo < --hi".into()));
    }
    if args.steps < 2 {
        return Err(CmdError::Usage("sweep requires --steps >= 2".into()));
    }
    let base = resolve_model(&args.model)?;
    let mut states = Vec::new();
    for &n in &args.n {
        for &kappa in &args.kappa {
            if kappa == 0 {
                return Err(CmdError::Usage("kappa must be nonzero".into()));
            }
            states.push((n, kappa));
        }
    }
    let param_name = match args.param {
        SweepParam::Bh => "b_h",
        SweepParam::Ch => "c_h",
        SweepParam::Re => "r_e",
    };
    let values: Vec<f64> = (0..args.steps)
        .map(|i| args.lo + (args.hi - args.lo) * i as f64 / (args.steps - 1) as f64)
        .collect();

    // Parallel solves; assembly stays in (value, state) declaration order.
    let rows: Vec<_> = values
        .par_iter()
        .map(|&v| {
            let pot = match args.param {
                SweepParam::Bh => {
                    ThPotential::new(base.pot.d(), v, base.pot.r_e(), base.pot.c_h())
                }
                SweepParam::Ch => base.pot.with_c_h(v),
                SweepParam::Re => {
                    ThPotential::new(base.pot.d(), base.pot.b_h(), v, base.pot.c_h())
                }
            };
            let mut out = Vec::new();
            for &(n, kappa) in &states {
                match &pot {
                    Ok(p) => {
                        let model = Model {
                            pot: *p,
                            ..base.clone()
                        };
                        match solve_one(&model, n, kappa) {
                            Ok(Some(l)) => {
                                out.push((v, n, kappa, Some(model.display_energy(l.e)), "ok"))
                            }
                            Ok(None) => out.push((v, n, kappa, None, "no-bound-state")),
                            Err(_) => out.push((v, n, kappa, None, "solver-error")),
                        }
                    }
                    Err(_) => out.push((v, n, kappa, None, "invalid-params")),
                }
            }
            out
        })
        .collect();

    let mut rep = Report::new(
        vec!["param", "value", "n", "kappa", "e", "status"],
        base.style(),
    );
    base.describe(&mut rep);
    rep.param("sweep_param", json!(param_name));
    rep.param("lo", json!(args.lo));
    rep.param("hi", json!(args.hi));
    rep.param("steps", json!(args.steps));
    for group in rows {
        for (v, n, kappa, e, status) in group {
            rep.push(vec![
                Value::Str(param_name.into()),
                Value::Num(v),
                Value::Int(n as i64),
                Value::Int(kappa as i64),
                e.map(Value::Num).unwrap_or(Value::Null),
                Value::Str(status.into()),
            ]);
        }
    }
    Ok(rep)
}

fn cmd_wavefunction(args: &WaveArgs, samples: usize) -> Result<Report, CmdError> {
    let model = resolve_model(&args.model)?;
    if matches!(model.equation, EnergyEquation::Morse { .. }) {
        return Err(CmdError::Usage(
            "wavefunction sampling requires the full-shape equation (drop --morse-version)".into(),
        ));
    }
    let level = solve_one(&model, args.n, args.kappa)?.ok_or_else(|| {
        CmdError::NoState(format!(
            "no bound state for (n={}, kappa={})",
            args.n, args.kappa
        ))
    })?;
    let sol = SpinorSolution::new(&model.sym, &model.pot, &level)
        .and_then(|s| s.normalize())
        .map_err(|e| CmdError::Other(format!("wavefunction construction: {e}")))?;
    let (r_lo, r_hi) = sol.norm_domain();
    let (a, b) = (r_lo.ln(), r_hi.ln());
    let mut rep = Report::new(vec!["r", "primary", "partner", "density"], model.style());
    model.describe(&mut rep);
    rep.param("n", json!(args.n));
    rep.param("kappa", json!(args.kappa));
    rep.param("e", json!(model.display_energy(level.e)));
    rep.param("norm_constant", json!(sol.norm()));
    if let Some(diag) = &sol.near_origin_diagnostic {
        rep.note(diag.clone());
    }
    for i in 0..samples {
        let r = (a + (b - a) * i as f64 / (samples - 1) as f64).exp();
        let f = sol.primary_component(r);
        let g = sol
            .partner_component(r)
            .map_err(|e| CmdError::Other(format!("partner component at r = {r}: {e}")))?;
        rep.push(vec![
            Value::Num(r),
            Value::Num(f),
            Value::Num(g),
            Value::Num(f * f + g * g),
        ]);
    }
    Ok(rep)
}

fn cmd_verify(args: &VerifyArgs, oracle_n: usize) -> Result<Report, CmdError> {
    let preset_arg = args.preset.ok_or_else(|| {
        CmdError::Usage("verify requires a scope: --preset table2 or --preset table3".into())
    })?;
    let (branch, ch, rows): (SymArg, f64, &[(u32, i32, i32, f64, f64, f64)]) = match preset_arg {
        Preset::Table2 => (SymArg::Spin, preset::CH_SPIN, &golden::SPIN_TABLE),
        Preset::Table3 => (SymArg::Pspin, preset::CH_PSPIN, &golden::PSPIN_TABLE),
    };
    let model = natural_model(branch, ch, None)?;
    let grid = FdGrid::new(
        1e-3,
        model.pot.r_e() + 60.0 / model.pot.b_h(),
        oracle_n,
    );

    let solved: Vec<_> = rows
        .par_iter()
        .map(|&(n, kappa, _, _, _, _)| {
            let analytic = solve_one(&model, n, kappa)?.map(|l| l.e);
            let pekeris = thspec_oracle::solve_self_consistent(
                &model.sym,
                &model.pot,
                n,
                kappa,
                CentrifugalMode::Pekeris,
                &grid,
            );
            let exact = thspec_oracle::solve_self_consistent(
                &model.sym,
                &model.pot,
                n,
                kappa,
                CentrifugalMode::Exact,
                &grid,
            );
            Ok::<_, CmdError>((n, kappa, analytic, pekeris, exact))
        })
        .collect::<Result<_, _>>()?;

    let mut rep = Report::new(
        vec![
            "n", "kappa", "e_analytic", "e_fd_pekeris", "rel_dev", "e_fd_exact",
            "pekeris_error", "status",
        ],
        NumberStyle::Fixed7,
    );
    model.describe(&mut rep);
    rep.param("oracle_grid_n", json!(oracle_n));
    let mut worst: f64 = 0.0;
    let mut failures = Vec::new();
    for (n, kappa, analytic, pekeris, exact) in solved {
        let num = |v: Option<f64>| v.map(Value::Num).unwrap_or(Value::Null);
        let (e_pek, e_exact) = (
            pekeris.as_ref().ok().map(|r| r.e),
            exact.as_ref().ok().map(|r| r.e),
        );
        let rel_dev = match (analytic, e_pek) {
            (Some(a), Some(p)) => Some((p - a).abs() / a.abs().max(f64::MIN_POSITIVE)),
            _ => None,
        };
        let pek_err = match (e_pek, e_exact) {
            (Some(p), Some(x)) => Some((x - p).abs()),
            _ => None,
        };
        let status = match (&analytic, &pekeris) {
            (None, _) => "no-analytic-root",
            (_, Err(OracleError::NoRoot { .. })) => "no-fd-root",
            (_, Err(_)) => "fd-error",
            (Some(_), Ok(_)) => {
                if rel_dev.unwrap_or(f64::INFINITY) <= 1e-4 {
                    "ok"
                } else {
                    "deviates"
                }
            }
        };
        if status != "ok" {
            failures.push(format!("(n={n}, kappa={kappa}): {status}"));
        }
        if let Some(d) = rel_dev {
            worst = worst.max(d);
        }
        rep.push(vec![
            Value::Int(n as i64),
            Value::Int(kappa as i64),
            num(analytic),
            num(e_pek),
            num(rel_dev),
            num(e_exact),
            num(pek_err),
            Value::Str(status.into()),
        ]);
    }
    rep.note(format!("max relative deviation (Pekeris mode): {worst:.3e}"));
    if !failures.is_empty() {
        let mut buf = Vec::new();
        let _ = rep.render(Format::Text, &mut buf);
        eprint!("{}", String::from_utf8_lossy(&buf));
        return Err(CmdError::VerifyFailed(format!(
            "verification failed for {}",
            failures.join(", ")
        )));
    }
    Ok(rep)
}

fn cmd_molecules(_args: &MoleculesArgs) -> Result<Report, CmdError> {
    let regs = registry()?;
    let mut rep = Report::new(
        vec![
            "name", "c_h", "mu_amu", "b_h_inv_angstrom", "r_e_angstrom", "d_wavenumber",
        ],
        NumberStyle::Sig9,
    );
    rep.param("count", json!(regs.len()));
    for r in regs {
        rep.push(vec![
            Value::Str(r.name),
            Value::Num(r.c_h),
            Value::Num(r.mu_amu),
            Value::Num(r.b_h_inv_angstrom),
            Value::Num(r.r_e_angstrom),
            Value::Num(r.d_wavenumber),
        ]);
    }
    Ok(rep)
}
