//! Command-line front end: `beta`, `terms`, `check`, `amplitude`, `envshift`.
//!
//! Exit codes: 0 success, 2 validation error, 3 resonance singularity,
//! 4 `check` tolerance failure, 64 usage error.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::beta::{self, BetaTensor, DampingConvention};
use crate::diagrams::{enumerate_terms, Term};
use crate::environment::{self, Assembly, SignConvention};
use crate::error::{Error, Result};
use crate::model::units::{EnergyUnit, LengthUnit};
use crate::model::{self, to_fluctuation, Constants, MolecularModel, MoleculeDocument, Representation, UnitsSpec};
use crate::radiation::{self, PhotonMode, Polarization, ShgConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_RESONANCE: i32 = 3;
pub const EXIT_CHECK_FAILED: i32 = 4;
pub const EXIT_USAGE: i32 = 64;

const SCHEMA_VERSION: u32 = 1;
const BETA_UNIT: &str = "a.u. (e^3 a0^3 / Eh^2)";

#[derive(Parser, Debug)]
#[command(name = "sosbeta", version, about = "SHG hyperpolarizability by sum over states")]
struct Cli {
    /// Seed for randomized inputs (`check --random`).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate beta_ijk at one frequency.
    Beta(BetaArgs),
    /// List the state-sequence terms.
    Terms(TermsArgs),
    /// Compare both representations over a frequency grid.
    Check(CheckArgs),
    /// Single-centre SHG transition amplitude.
    Amplitude(AmplitudeArgs),
    /// Static shifts from neighbouring ground-state dipoles.
    Envshift(EnvshiftArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OmegaUnit {
    #[value(name = "hartree")]
    Hartree,
    #[value(name = "eV")]
    Ev,
}

impl OmegaUnit {
    fn to_hartree(self, x: f64) -> f64 {
        match self {
            OmegaUnit::Hartree => x,
            OmegaUnit::Ev => EnergyUnit::ElectronVolt.to_hartree(x),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum RepChoice {
    Standard,
    Fluctuation,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SingleRep {
    Standard,
    Fluctuation,
}

impl From<SingleRep> for Representation {
    fn from(r: SingleRep) -> Self {
        match r {
            SingleRep::Standard => Representation::Standard,
            SingleRep::Fluctuation => Representation::Fluctuation,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Damping {
    None,
    ConstantSign,
    SignAlternating,
}

impl From<Damping> for DampingConvention {
    fn from(d: Damping) -> Self {
        match d {
            Damping::None => DampingConvention::None,
            Damping::ConstantSign => DampingConvention::ConstantSign,
            Damping::SignAlternating => DampingConvention::SignAlternating,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum PolArg {
    #[value(name = "x")]
    X,
    #[value(name = "y")]
    Y,
    #[value(name = "circ+")]
    CircPlus,
    #[value(name = "circ-")]
    CircMinus,
}

impl From<PolArg> for Polarization {
    fn from(p: PolArg) -> Self {
        match p {
            PolArg::X => Polarization::X,
            PolArg::Y => Polarization::Y,
            PolArg::CircPlus => Polarization::CircPlus,
            PolArg::CircMinus => Polarization::CircMinus,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SignArg {
    AsPrinted,
    Classical,
}

impl From<SignArg> for SignConvention {
    fn from(s: SignArg) -> Self {
        match s {
            SignArg::AsPrinted => SignConvention::AsPrinted,
            SignArg::Classical => SignConvention::Classical,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum LengthArg {
    Bohr,
    Angstrom,
    Nm,
}

impl From<LengthArg> for LengthUnit {
    fn from(l: LengthArg) -> Self {
        match l {
            LengthArg::Bohr => LengthUnit::Bohr,
            LengthArg::Angstrom => LengthUnit::Angstrom,
            LengthArg::Nm => LengthUnit::Nanometer,
        }
    }
}

#[derive(Args, Debug)]
struct BetaArgs {
    #[arg(short = 'm', long)]
    molecule: PathBuf,
    #[arg(long)]
    omega: f64,
    #[arg(long, value_enum, default_value = "hartree")]
    omega_unit: OmegaUnit,
    #[arg(long, value_enum, default_value = "standard")]
    rep: RepChoice,
    #[arg(long, value_enum, default_value = "none")]
    damping: Damping,
    #[arg(long)]
    symmetrize: bool,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
}

#[derive(Args, Debug)]
struct TermsArgs {
    #[arg(short = 'm', long)]
    molecule: PathBuf,
    #[arg(long, value_enum, default_value = "standard")]
    rep: SingleRep,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[arg(short = 'm', long, required_unless_present = "random", conflicts_with = "random")]
    molecule: Option<PathBuf>,
    /// Use a seeded random model with this many levels instead of a file.
    #[arg(long)]
    random: Option<usize>,
    #[arg(long)]
    omega_min: f64,
    #[arg(long)]
    omega_max: f64,
    #[arg(long, default_value_t = 8)]
    steps: usize,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, value_enum, default_value = "hartree")]
    omega_unit: OmegaUnit,
    #[arg(long, value_enum, default_value = "none")]
    damping: Damping,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
}

#[derive(Args, Debug)]
struct AmplitudeArgs {
    #[arg(short = 'm', long)]
    molecule: PathBuf,
    #[arg(long)]
    omega: f64,
    #[arg(long, value_enum, default_value = "hartree")]
    omega_unit: OmegaUnit,
    /// Initial photon occupation of the fundamental mode.
    #[arg(long)]
    n: u64,
    /// Quantization volume in bohr^3.
    #[arg(long)]
    volume: f64,
    #[arg(long, value_enum, default_value = "x")]
    pol_in: PolArg,
    #[arg(long, value_enum, default_value = "x")]
    pol_out: PolArg,
    #[arg(long, value_enum, default_value = "fluctuation")]
    rep: SingleRep,
    #[arg(long, value_enum, default_value = "none")]
    damping: Damping,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
}

#[derive(Args, Debug)]
struct EnvshiftArgs {
    /// Assembly file: JSON array of { "position": [x,y,z], "molecule": ... }.
    assembly: PathBuf,
    #[arg(long, value_enum, default_value = "as-printed")]
    sign_convention: SignArg,
    /// Minimum allowed separation between sites.
    #[arg(long, default_value_t = 1.0)]
    cutoff: f64,
    /// Skip pairs farther apart than this.
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long, value_enum, default_value = "bohr")]
    length_unit: LengthArg,
    /// Extension: add the diagonal shifts to each site's level energies and
    /// report the symmetrized fluctuation-form beta at --omega.
    #[arg(long, requires = "omega")]
    apply_shifts: bool,
    #[arg(long)]
    omega: Option<f64>,
    #[arg(long, value_enum, default_value = "hartree")]
    omega_unit: OmegaUnit,
    #[arg(long, value_enum, default_value = "none")]
    damping: Damping,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
}

/// Machine-readable output of one invocation.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub schema: u32,
    pub subcommand: String,
    pub input_digest: String,
    pub parameters: Value,
    pub units: Value,
    pub results: Value,
    pub warnings: Vec<String>,
}

impl RunReport {
    fn new(subcommand: &str, parameters: Value, inputs: &[&MolecularModel], units: Value) -> Self {
        let docs: Vec<MoleculeDocument> = inputs
            .iter()
            .map(|m| MoleculeDocument::from_model(m, UnitsSpec::default()))
            .collect();
        let canonical = json!({
            "subcommand": subcommand,
            "parameters": parameters,
            "inputs": docs,
        });
        let digest = Sha256::digest(canonical.to_string().as_bytes());
        Self {
            schema: SCHEMA_VERSION,
            subcommand: subcommand.to_string(),
            input_digest: hex::encode(digest.as_slice()),
            parameters,
            units,
            results: Value::Null,
            warnings: Vec::new(),
        }
    }
}

/// Subcommand outcome: report, table text, and exit code.
struct Outcome {
    report: RunReport,
    table: String,
    code: i32,
}

/// Runs the tool on `argv` (including the program name), writing the report
/// to `out` and diagnostics to `err`. Returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    let format = match &cli.command {
        Command::Beta(a) => a.format,
        Command::Terms(a) => a.format,
        Command::Check(a) => a.format,
        Command::Amplitude(a) => a.format,
        Command::Envshift(a) => a.format,
    };
    let result = match &cli.command {
        Command::Beta(a) => run_beta(a),
        Command::Terms(a) => run_terms(a),
        Command::Check(a) => run_check(a, cli.seed),
        Command::Amplitude(a) => run_amplitude(a),
        Command::Envshift(a) => run_envshift(a),
    };
    match result {
        Ok(outcome) => {
            let written = match format {
                Format::Json => serde_json::to_string_pretty(&outcome.report)
                    .map_err(std::io::Error::other)
                    .and_then(|s| writeln!(out, "{s}")),
                Format::Table => write!(out, "{}", outcome.table),
            };
            for w in &outcome.report.warnings {
                let _ = writeln!(err, "warning: {w}");
            }
            if let Err(e) = written {
                let _ = writeln!(err, "error: {e}");
                return EXIT_VALIDATION;
            }
            outcome.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Resonance { .. } => EXIT_RESONANCE,
        _ => EXIT_VALIDATION,
    }
}

fn read_model(path: &Path) -> Result<MolecularModel> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    model::load_model(&text)
}

const AXES: [char; 3] = ['x', 'y', 'z'];

fn index_label(ijk: [usize; 3]) -> String {
    ijk.iter().map(|&a| AXES[a]).collect()
}

fn tensor_json(b: &BetaTensor) -> Value {
    let components: Vec<Value> = b
        .iter()
        .map(|(ijk, z)| json!({ "index": index_label(ijk), "re": z.re, "im": z.im }))
        .collect();
    json!({
        "representation": b.representation.to_string(),
        "damping": b.damping.to_string(),
        "symmetrized": b.symmetrized,
        "omega": b.omega,
        "components": components,
    })
}

fn tensor_table(title: &str, b: &BetaTensor) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "# {title}: representation={} damping={} symmetrized={} omega={:.12e} hartree",
        b.representation, b.damping, b.symmetrized, b.omega
    );
    for (ijk, z) in b.iter() {
        let _ = writeln!(
            s,
            "beta_{}  {:>24.15e}  {:>24.15e}i  {BETA_UNIT}",
            index_label(ijk),
            z.re,
            z.im
        );
    }
    s
}

fn header(report: &RunReport) -> String {
    format!(
        "# sosbeta {}  schema={}  digest={}\n",
        report.subcommand, report.schema, report.input_digest
    )
}

fn run_beta(a: &BetaArgs) -> Result<Outcome> {
    let m = read_model(&a.molecule)?;
    let omega = a.omega_unit.to_hartree(a.omega);
    let damping: DampingConvention = a.damping.into();
    let params = json!({
        "molecule": a.molecule.display().to_string(),
        "omega": omega,
        "rep": format!("{:?}", a.rep).to_lowercase(),
        "damping": damping.to_string(),
        "symmetrize": a.symmetrize,
    });
    let units = json!({ "omega": "hartree", "beta": BETA_UNIT, "diff": "relative" });
    let mut report = RunReport::new("beta", params, &[&m], units);
    let finish = |b: BetaTensor| if a.symmetrize { beta::symmetrize(&b) } else { b };
    let mut table = header(&report);
    match a.rep {
        RepChoice::Standard | RepChoice::Fluctuation => {
            let target = if a.rep == RepChoice::Standard {
                m.clone()
            } else {
                to_fluctuation(&m)
            };
            let b = finish(beta::evaluate_beta(&target, omega, damping)?);
            table.push_str(&tensor_table("beta", &b));
            report.results = json!({ "beta": tensor_json(&b) });
        }
        RepChoice::Both => {
            let eq = beta::equivalence_report(&m, omega, damping)?;
            let bs = finish(eq.beta_standard);
            let bf = finish(eq.beta_fluctuation);
            table.push_str(&tensor_table("beta (standard)", &bs));
            table.push_str(&tensor_table("beta (fluctuation)", &bf));
            let _ = writeln!(
                table,
                "max_rel_diff_symmetrized  {:.6e}  relative",
                eq.max_rel_diff_symmetrized
            );
            let _ = writeln!(table, "max_rel_diff_raw          {:.6e}  relative", eq.max_rel_diff_raw);
            report.results = json!({
                "beta_standard": tensor_json(&bs),
                "beta_fluctuation": tensor_json(&bf),
                "max_rel_diff_symmetrized": eq.max_rel_diff_symmetrized,
                "max_rel_diff_raw": eq.max_rel_diff_raw,
            });
            if damping == DampingConvention::SignAlternating {
                report
                    .warnings
                    .push("sign-alternating damping does not preserve representation equivalence".into());
            }
        }
    }
    Ok(Outcome {
        report,
        table,
        code: EXIT_OK,
    })
}

fn denominators_label(t: &Term) -> String {
    let [a, b] = t.denominators;
    format!("(r,{:+})(s,{:+})", a.multiple, b.multiple)
}

fn run_terms(a: &TermsArgs) -> Result<Outcome> {
    let loaded = read_model(&a.molecule)?;
    let m = match a.rep {
        SingleRep::Standard => loaded,
        SingleRep::Fluctuation => to_fluctuation(&loaded),
    };
    let params = json!({
        "molecule": a.molecule.display().to_string(),
        "rep": m.representation().to_string(),
    });
    let units = json!({ "denominators": "multiples of hbar*omega added to -E_level (hartree)" });
    let mut report = RunReport::new("terms", params, &[&m], units);
    let terms = enumerate_terms(&m);
    let mut table = header(&report);
    let _ = writeln!(
        table,
        "# {} terms, {} levels, {} representation",
        terms.len(),
        m.levels(),
        m.representation()
    );
    let _ = writeln!(
        table,
        "{:<9}{:>4}{:>4}  {:<8}denominators",
        "ordering", "r", "s", "pattern"
    );
    let rows: Vec<Value> = terms
        .iter()
        .map(|t| {
            let _ = writeln!(
                table,
                "{:<9}{:>4}{:>4}  {:<8}{}",
                t.ordering,
                t.r,
                t.s,
                t.pattern.to_string(),
                denominators_label(t)
            );
            json!({
                "ordering": t.ordering,
                "r": t.r,
                "s": t.s,
                "pattern": t.pattern.to_string(),
                "denominator_multiples": [t.denominators[0].multiple, t.denominators[1].multiple],
            })
        })
        .collect();
    report.results = json!({ "count": terms.len(), "terms": rows });
    Ok(Outcome {
        report,
        table,
        code: EXIT_OK,
    })
}

fn frequency_grid(min: f64, max: f64, steps: usize) -> Result<Vec<f64>> {
    if steps == 0 {
        return Err(Error::InvalidInput("--steps must be at least 1".into()));
    }
    if !(min > 0.0 && max >= min && max.is_finite()) {
        return Err(Error::InvalidInput(format!("bad frequency range [{min}, {max}]")));
    }
    if steps == 1 {
        return Ok(vec![min]);
    }
    let h = (max - min) / (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| if i + 1 == steps { max } else { min + h * i as f64 })
        .collect())
}

fn run_check(a: &CheckArgs, seed: u64) -> Result<Outcome> {
    let (m, source) = match (&a.molecule, a.random) {
        (Some(path), _) => (read_model(path)?, path.display().to_string()),
        (None, Some(levels)) => {
            if levels == 0 {
                return Err(Error::InvalidInput("--random needs at least one level".into()));
            }
            let mut rng = StdRng::seed_from_u64(seed);
            let m = model::random::random_model(&mut rng, levels, (0.2, 0.6), 2.0);
            (m, format!("random:{levels}:seed={seed}"))
        }
        (None, None) => unreachable!("clap enforces a model source"),
    };
    if !(a.tol >= 0.0) {
        return Err(Error::InvalidInput("--tol must be non-negative".into()));
    }
    let grid = frequency_grid(
        a.omega_unit.to_hartree(a.omega_min),
        a.omega_unit.to_hartree(a.omega_max),
        a.steps,
    )?;
    let damping: DampingConvention = a.damping.into();
    let params = json!({
        "molecule": source,
        "omega_grid": grid,
        "tol": a.tol,
        "damping": damping.to_string(),
    });
    let units = json!({ "omega": "hartree", "diff": "relative" });
    let mut report = RunReport::new("check", params, &[&m], units);
    if damping == DampingConvention::SignAlternating {
        report
            .warnings
            .push("sign-alternating damping does not preserve representation equivalence".into());
    }
    let mut table = header(&report);
    let _ = writeln!(
        table,
        "{:>6}  {:>22}  {:>14}  {:>14}  status",
        "index", "omega/hartree", "sym_diff", "raw_diff"
    );
    let mut points = Vec::with_capacity(grid.len());
    let mut all_pass = true;
    for (idx, &omega) in grid.iter().enumerate() {
        let eq = beta::equivalence_report(&m, omega, damping)?;
        let pass = eq.max_rel_diff_symmetrized <= a.tol;
        all_pass &= pass;
        let _ = writeln!(
            table,
            "{idx:>6}  {omega:>22.15e}  {:>14.6e}  {:>14.6e}  {}",
            eq.max_rel_diff_symmetrized,
            eq.max_rel_diff_raw,
            if pass { "ok" } else { "FAIL" }
        );
        points.push(json!({
            "index": idx,
            "omega": omega,
            "max_rel_diff_symmetrized": eq.max_rel_diff_symmetrized,
            "max_rel_diff_raw": eq.max_rel_diff_raw,
            "pass": pass,
        }));
    }
    let _ = writeln!(table, "# {}", if all_pass { "PASS" } else { "FAIL" });
    report.results = json!({ "pass": all_pass, "points": points });
    let code = if all_pass { EXIT_OK } else { EXIT_CHECK_FAILED };
    Ok(Outcome { report, table, code })
}

fn run_amplitude(a: &AmplitudeArgs) -> Result<Outcome> {
    let loaded = read_model(&a.molecule)?;
    let m = match a.rep {
        SingleRep::Standard => loaded,
        SingleRep::Fluctuation => to_fluctuation(&loaded),
    };
    let constants = Constants::ATOMIC;
    let omega = a.omega_unit.to_hartree(a.omega);
    let damping: DampingConvention = a.damping.into();
    let fundamental = PhotonMode::along_z(&constants, omega, a.pol_in.into(), a.volume)?;
    let harmonic = PhotonMode::new(fundamental.k() * 2.0, Polarization::from(a.pol_out).vector(), a.volume)?;
    let cfg = ShgConfig::new(fundamental, harmonic, a.n)?;
    let b = beta::evaluate_beta(&m, omega, damping)?;
    let prefactor = radiation::shg_prefactor(&constants, &cfg);
    let amplitude = radiation::contract_amplitude(&constants, &cfg, &b)?;
    let params = json!({
        "molecule": a.molecule.display().to_string(),
        "omega": omega,
        "n": a.n,
        "volume": a.volume,
        "pol_in": Polarization::from(a.pol_in).to_string(),
        "pol_out": Polarization::from(a.pol_out).to_string(),
        "rep": m.representation().to_string(),
        "damping": damping.to_string(),
    });
    let units = json!({ "omega": "hartree", "volume": "bohr^3", "amplitude": "hartree (atomic units)" });
    let mut report = RunReport::new("amplitude", params, &[&m], units);
    if a.n < 2 {
        report
            .warnings
            .push(format!("n = {} cannot supply two photons; amplitude is zero", a.n));
    }
    let mut table = header(&report);
    let _ = writeln!(
        table,
        "prefactor     {:>24.15e}  {:>24.15e}i  hartree/(a.u. beta)",
        prefactor.re, prefactor.im
    );
    let _ = writeln!(
        table,
        "S_X           {:>24.15e}  {:>24.15e}i  hartree",
        amplitude.re, amplitude.im
    );
    let _ = writeln!(table, "|S_X|^2       {:>24.15e}  hartree^2", amplitude.norm_sqr());
    report.results = json!({
        "prefactor": { "re": prefactor.re, "im": prefactor.im },
        "amplitude": { "re": amplitude.re, "im": amplitude.im },
        "amplitude_abs2": amplitude.norm_sqr(),
    });
    Ok(Outcome {
        report,
        table,
        code: EXIT_OK,
    })
}

fn run_envshift(a: &EnvshiftArgs) -> Result<Outcome> {
    let text = std::fs::read_to_string(&a.assembly)
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", a.assembly.display())))?;
    let length: LengthUnit = a.length_unit.into();
    let base = a.assembly.parent().unwrap_or(Path::new("."));
    let sites = environment::parse_sites(&text, Some(base), length)?;
    let radius = a.radius.map(|r| length.to_bohr(r));
    let assembly = Assembly::new(sites, length.to_bohr(a.cutoff))?.with_interaction_radius(radius)?;
    let sign: SignConvention = a.sign_convention.into();
    let shift = environment::environment_shift(&assembly, sign)?;

    let positions: Vec<[f64; 3]> = assembly.sites().iter().map(|s| s.position.into()).collect();
    let omega = a.omega.map(|w| a.omega_unit.to_hartree(w));
    let damping: DampingConvention = a.damping.into();
    let params = json!({
        "assembly": a.assembly.display().to_string(),
        "positions_bohr": positions,
        "sign_convention": sign.to_string(),
        "cutoff": assembly.min_separation(),
        "radius": radius,
        "apply_shifts": a.apply_shifts,
        "omega": omega,
        "damping": damping.to_string(),
    });
    let units = json!({ "energy": "hartree", "length": "bohr", "beta": BETA_UNIT });
    let models: Vec<&MolecularModel> = assembly.sites().iter().map(|s| &s.model).collect();
    let mut report = RunReport::new("envshift", params, &models, units);

    let mut table = header(&report);
    let _ = writeln!(table, "# sign convention: {sign}");
    let mut sites_json = Vec::with_capacity(assembly.len());
    for (x, site) in assembly.sites().iter().enumerate() {
        let matrix = &shift.per_molecule_matrix[x];
        let rows: Vec<Vec<f64>> = matrix.row_iter().map(|r| r.iter().copied().collect()).collect();
        let _ = writeln!(
            table,
            "site {x} ({})  scalar  {:>24.15e}  hartree",
            site.model.label(),
            shift.per_molecule_scalar[x]
        );
        for row in &rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:>22.14e}")).collect();
            let _ = writeln!(table, "  {}  hartree", cells.join(" "));
        }
        let mut entry = json!({
            "site": x,
            "label": site.model.label(),
            "scalar": shift.per_molecule_scalar[x],
            "matrix": rows,
        });
        if a.apply_shifts {
            let omega = omega.expect("clap requires --omega with --apply-shifts");
            let shifted = environment::apply_shifts(&site.model, matrix)?;
            let b = beta::symmetrize(&beta::evaluate_beta(&to_fluctuation(&shifted), omega, damping)?);
            let _ = writeln!(table, "  shifted energies  {:?}  hartree", shifted.energies());
            table.push_str(&tensor_table(&format!("site {x} beta (shifted ladder)"), &b));
            entry["shifted_energies"] = json!(shifted.energies());
            entry["beta"] = tensor_json(&b);
        }
        sites_json.push(entry);
    }
    let _ = writeln!(table, "total scalar  {:>24.15e}  hartree", shift.total_scalar);
    if a.apply_shifts {
        report.warnings.push(
            "--apply-shifts is an extension: diagonal environment shifts were added to level energies at first order"
                .into(),
        );
    }
    report.results = json!({ "sites": sites_json, "total_scalar": shift.total_scalar });
    Ok(Outcome {
        report,
        table,
        code: EXIT_OK,
    })
}
