//! `partial-swap` command line.
//!
//! Subcommands: `feasibility`, `scan`, `signal`, `gram`. Documents go to
//! standard output (or `--out`), summaries and diagnostics to standard error.
//!
//! Exit codes: 0 on success (whatever the verdict), 1 on argument or input
//! errors, 2 on numerical failure or when output cannot be written.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bloch::{BlochAngles, QubitBasis, TwoQubitState};
use crate::error::Error;
use crate::feasibility::{
    check_feasibility, feasible_fraction, gram_deviation, scan_feasible_set, BarMode,
    FeasibilityInput, FeasibilityReport, DEFAULT_TOL,
};
use crate::format::{fmt_f64, to_json};
use crate::signalling::{run_experiment, ExperimentOptions, SignallingReport, TermMachine};
use crate::swap::SwapKind;

/// Column order of the `scan` CSV.
pub const SCAN_CSV_HEADER: [&str; 13] = [
    "theta1",
    "phi1",
    "theta2",
    "phi2",
    "bar_theta1",
    "bar_phi1",
    "bar_theta2",
    "bar_phi2",
    "kind",
    "residual",
    "condition_i",
    "condition_ii",
    "feasible",
];

#[derive(Debug, Parser)]
#[command(
    name = "partial-swap",
    version,
    about = "Unitarity and no-signalling checks for partial swapping of Bloch-sphere parameters"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check inner-product preservation for one pair of inputs
    #[command(allow_negative_numbers = true)]
    Feasibility(FeasibilityArgs),
    /// Sample random inputs and report feasibility of each
    #[command(allow_negative_numbers = true)]
    Scan(ScanArgs),
    /// Run the twin-singlet signalling experiment for two bases
    #[command(allow_negative_numbers = true)]
    Signal(SignalArgs),
    /// Test whether a unitary maps the listed input states to the output states
    Gram(GramArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MachineArg {
    /// The machine selected by --kind
    Kind,
    /// No-op baseline
    Identity,
    /// Azimuthal swap whose outputs both keep the first phase
    AzimuthalSharedPhase,
}

#[derive(Debug, Args)]
pub struct FeasibilityArgs {
    #[arg(long)]
    pub theta1: f64,
    #[arg(long)]
    pub phi1: f64,
    #[arg(long)]
    pub theta2: f64,
    #[arg(long)]
    pub phi2: f64,
    #[arg(long)]
    pub bar_theta1: Option<f64>,
    #[arg(long)]
    pub bar_phi1: Option<f64>,
    #[arg(long)]
    pub bar_theta2: Option<f64>,
    #[arg(long)]
    pub bar_phi2: Option<f64>,
    /// phase | azimuthal
    #[arg(long, default_value = "phase")]
    pub kind: SwapKind,
    /// antipodal: missing bars default to complements; independent: all four bars required
    #[arg(long, default_value = "antipodal")]
    pub bar_mode: BarMode,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Read angle arguments in degrees
    #[arg(long)]
    pub degrees: bool,
    #[arg(long, value_enum, default_value = "json")]
    pub format: OutputFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "phase")]
    pub kind: SwapKind,
    #[arg(long, default_value = "antipodal")]
    pub bar_mode: BarMode,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: OutputFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SignalArgs {
    /// First basis as `theta,phi`
    #[arg(long, value_parser = parse_angle_pair)]
    pub basis1: (f64, f64),
    /// Second basis as `theta,phi`
    #[arg(long, value_parser = parse_angle_pair)]
    pub basis2: (f64, f64),
    #[arg(long, default_value = "phase")]
    pub kind: SwapKind,
    #[arg(long, value_enum, default_value = "kind")]
    pub machine: MachineArg,
    #[arg(long, default_value_t = crate::signalling::DEFAULT_THRESHOLD)]
    pub threshold: f64,
    /// Bob's basis in the first arm, when it differs from --basis1
    #[arg(long, value_parser = parse_angle_pair, requires = "bob_basis2")]
    pub bob_basis1: Option<(f64, f64)>,
    /// Bob's basis in the second arm, when it differs from --basis2
    #[arg(long, value_parser = parse_angle_pair, requires = "bob_basis1")]
    pub bob_basis2: Option<(f64, f64)>,
    #[arg(long)]
    pub degrees: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GramArgs {
    /// JSON file `{"inputs": [[[re,im] x4], ...], "outputs": [...]}`
    #[arg(long)]
    pub input: PathBuf,
    /// Gram tolerance; also the normalization tolerance for the listed states
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_angle_pair(s: &str) -> Result<(f64, f64), String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [theta, phi] = parts.as_slice() else {
        return Err(format!("expected `theta,phi`, got `{s}`"));
    };
    let theta: f64 = theta.parse().map_err(|e| format!("bad theta `{theta}`: {e}"))?;
    let phi: f64 = phi.parse().map_err(|e| format!("bad phi `{phi}`: {e}"))?;
    Ok((theta, phi))
}

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or malformed input; exit 1.
    Usage(String),
    /// Non-finite results or unnormalized states; exit 2.
    Numerical(String),
    /// Output could not be written; exit 2.
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Numerical(_) | CliError::Output(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Numerical(m) | CliError::Output(m) => m,
        }
    }
}

fn usage(e: impl ToString) -> CliError {
    CliError::Usage(e.to_string())
}

fn numerical(e: impl ToString) -> CliError {
    CliError::Numerical(e.to_string())
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{text}");
                    0
                }
                _ => {
                    let _ = write!(stderr, "{text}");
                    1
                }
            };
        }
    };
    match execute(&cli.command, stdout, stderr) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message());
            e.exit_code()
        }
    }
}

pub fn execute(
    command: &Command,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    match command {
        Command::Feasibility(args) => cmd_feasibility(args, stdout),
        Command::Scan(args) => cmd_scan(args, stdout, stderr),
        Command::Signal(args) => cmd_signal(args, stdout),
        Command::Gram(args) => cmd_gram(args, stdout),
    }
}

fn check_positive(name: &str, v: f64) -> Result<(), CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(usage(format!("--{name} must be positive and finite, got {v}")))
    }
}

fn emit(out: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Output(format!("cannot write {}: {e}", path.display()))),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Output(format!("cannot write to stdout: {e}"))),
    }
}

fn ensure_finite(values: &[f64]) -> Result<(), CliError> {
    match values.iter().find(|v| !v.is_finite()) {
        Some(v) => Err(numerical(format!("non-finite result {v}"))),
        None => Ok(()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnglesDoc {
    pub theta: f64,
    pub phi: f64,
}

impl From<BlochAngles> for AnglesDoc {
    fn from(a: BlochAngles) -> Self {
        Self {
            theta: a.theta(),
            phi: a.phi(),
        }
    }
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityDoc {
    pub kind: String,
    pub tol: f64,
    pub angles1: AnglesDoc,
    pub angles2: AnglesDoc,
    pub bar1: AnglesDoc,
    pub bar2: AnglesDoc,
    pub lhs: [f64; 2],
    pub rhs: [f64; 2],
    pub residual: f64,
    pub factored_residual: [f64; 2],
    pub condition_i: bool,
    pub condition_ii: bool,
    pub unitary_extendable: bool,
    pub degenerate: bool,
}

impl FeasibilityDoc {
    pub fn from_report(r: &FeasibilityReport) -> Result<Self, CliError> {
        let doc = Self {
            kind: r.input.kind.to_string(),
            tol: r.tol,
            angles1: r.input.angles1.into(),
            angles2: r.input.angles2.into(),
            bar1: r.input.bar1.into(),
            bar2: r.input.bar2.into(),
            lhs: pair(r.lhs),
            rhs: pair(r.rhs),
            residual: r.residual,
            factored_residual: pair(r.factored_residual),
            condition_i: r.condition_i,
            condition_ii: r.condition_ii,
            unitary_extendable: r.unitary_extendable,
            degenerate: r.degenerate,
        };
        ensure_finite(&[
            doc.lhs[0],
            doc.lhs[1],
            doc.rhs[0],
            doc.rhs[1],
            doc.residual,
            doc.factored_residual[0],
            doc.factored_residual[1],
        ])?;
        Ok(doc)
    }
}

fn bool_str(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

fn scan_row(r: &FeasibilityReport) -> [String; 13] {
    let i = &r.input;
    [
        fmt_f64(i.angles1.theta()),
        fmt_f64(i.angles1.phi()),
        fmt_f64(i.angles2.theta()),
        fmt_f64(i.angles2.phi()),
        fmt_f64(i.bar1.theta()),
        fmt_f64(i.bar1.phi()),
        fmt_f64(i.bar2.theta()),
        fmt_f64(i.bar2.phi()),
        i.kind.to_string(),
        fmt_f64(r.residual),
        bool_str(r.condition_i).to_string(),
        bool_str(r.condition_ii).to_string(),
        bool_str(r.unitary_extendable).to_string(),
    ]
}

/// Scan CSV: header plus one row per report, no summary line.
pub fn render_scan_csv(reports: &[FeasibilityReport]) -> Result<String, CliError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(SCAN_CSV_HEADER).map_err(numerical)?;
    for r in reports {
        ensure_finite(&[r.residual])?;
        w.write_record(scan_row(r)).map_err(numerical)?;
    }
    let bytes = w.into_inner().map_err(|e| numerical(e.to_string()))?;
    String::from_utf8(bytes).map_err(numerical)
}

fn to_radians_if(degrees: bool, v: f64) -> f64 {
    if degrees {
        v.to_radians()
    } else {
        v
    }
}

fn angles_arg(degrees: bool, theta: f64, phi: f64) -> Result<BlochAngles, CliError> {
    BlochAngles::new(to_radians_if(degrees, theta), to_radians_if(degrees, phi)).map_err(usage)
}

fn feasibility_input(args: &FeasibilityArgs) -> Result<FeasibilityInput, CliError> {
    let deg = args.degrees;
    let a1 = angles_arg(deg, args.theta1, args.phi1)?;
    let a2 = angles_arg(deg, args.theta2, args.phi2)?;
    let bars = [
        ("bar-theta1", args.bar_theta1),
        ("bar-phi1", args.bar_phi1),
        ("bar-theta2", args.bar_theta2),
        ("bar-phi2", args.bar_phi2),
    ];
    if args.bar_mode == BarMode::Independent {
        if let Some((name, _)) = bars.iter().find(|(_, v)| v.is_none()) {
            return Err(usage(format!(
                "--{name} is required with --bar-mode independent"
            )));
        }
    }
    // missing coordinates fall back to the complement of the unbarred point
    let bar = |a: BlochAngles, theta: Option<f64>, phi: Option<f64>| {
        let c = a.complement();
        let theta = theta.map_or(c.theta(), |t| to_radians_if(deg, t));
        let phi = phi.map_or(c.phi(), |p| to_radians_if(deg, p));
        BlochAngles::new(theta, phi).map_err(usage)
    };
    let b1 = bar(a1, args.bar_theta1, args.bar_phi1)?;
    let b2 = bar(a2, args.bar_theta2, args.bar_phi2)?;
    Ok(FeasibilityInput::with_bars(args.kind, a1, a2, b1, b2))
}

fn cmd_feasibility(args: &FeasibilityArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    check_positive("tol", args.tol)?;
    let input = feasibility_input(args)?;
    let report = check_feasibility(&input, args.tol).map_err(|e| match e {
        Error::Numerical(_) => numerical(e),
        other => usage(other),
    })?;
    let text = match args.format {
        OutputFormat::Json => to_json(&FeasibilityDoc::from_report(&report)?).map_err(numerical)?,
        OutputFormat::Csv => render_scan_csv(std::slice::from_ref(&report))?,
    };
    emit(args.out.as_deref(), &text, stdout)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanDoc {
    pub kind: String,
    pub bar_mode: String,
    pub seed: u64,
    pub tol: f64,
    pub sample_count: usize,
    pub feasible_fraction: f64,
    pub reports: Vec<FeasibilityDoc>,
}

fn cmd_scan(
    args: &ScanArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    check_positive("tol", args.tol)?;
    if args.samples == 0 {
        return Err(usage("--samples must be at least 1"));
    }
    let reports = scan_feasible_set(args.kind, args.samples, args.seed, args.bar_mode, args.tol)
        .map_err(|e| match e {
            Error::Numerical(_) => numerical(e),
            other => usage(other),
        })?;
    let fraction = feasible_fraction(&reports);
    let text = match args.format {
        OutputFormat::Csv => render_scan_csv(&reports)?,
        OutputFormat::Json => {
            let doc = ScanDoc {
                kind: args.kind.to_string(),
                bar_mode: args.bar_mode.as_str().to_string(),
                seed: args.seed,
                tol: args.tol,
                sample_count: reports.len(),
                feasible_fraction: fraction,
                reports: reports
                    .iter()
                    .map(FeasibilityDoc::from_report)
                    .collect::<Result<_, _>>()?,
            };
            to_json(&doc).map_err(numerical)?
        }
    };
    emit(args.out.as_deref(), &text, stdout)?;
    let _ = writeln!(
        stderr,
        "scan: kind={} bar_mode={} seed={} samples={} feasible_fraction={}",
        args.kind,
        args.bar_mode.as_str(),
        args.seed,
        reports.len(),
        fraction
    );
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DegeneracyDoc {
    pub basis1: bool,
    pub basis2: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignalDoc {
    pub machine: String,
    pub basis1: AnglesDoc,
    pub basis2: AnglesDoc,
    pub bob_basis1: AnglesDoc,
    pub bob_basis2: AnglesDoc,
    pub threshold: f64,
    /// Row-major, `[re, im]` per entry.
    pub rho_b1: [[[f64; 2]; 4]; 4],
    pub rho_b2: [[[f64; 2]; 4]; 4],
    pub trace_distance: f64,
    pub signalling: bool,
    pub degenerate: DegeneracyDoc,
    pub pre_normalization_norms: [f64; 2],
}

fn machine_label(m: TermMachine) -> String {
    match m {
        TermMachine::Identity => "identity".into(),
        TermMachine::Swap(kind) => kind.to_string(),
        TermMachine::AzimuthalSharedPhase => "azimuthal-shared-phase".into(),
    }
}

impl SignalDoc {
    pub fn from_report(
        r: &SignallingReport,
        bob: (QubitBasis, QubitBasis),
    ) -> Result<Self, CliError> {
        let doc = Self {
            machine: machine_label(r.machine),
            basis1: r.basis1.up_angles().into(),
            basis2: r.basis2.up_angles().into(),
            bob_basis1: bob.0.up_angles().into(),
            bob_basis2: bob.1.up_angles().into(),
            threshold: r.threshold,
            rho_b1: r.rho_b1.to_rows(),
            rho_b2: r.rho_b2.to_rows(),
            trace_distance: r.trace_distance,
            signalling: r.signalling,
            degenerate: DegeneracyDoc {
                basis1: r.degenerate_flags[0],
                basis2: r.degenerate_flags[1],
            },
            pre_normalization_norms: r.pre_norms,
        };
        let mut values = vec![doc.trace_distance, doc.pre_normalization_norms[0], doc.pre_normalization_norms[1]];
        for rho in [&doc.rho_b1, &doc.rho_b2] {
            values.extend(rho.iter().flatten().flatten());
        }
        ensure_finite(&values)?;
        Ok(doc)
    }
}

fn cmd_signal(args: &SignalArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    check_positive("threshold", args.threshold)?;
    let basis = |(t, p): (f64, f64)| angles_arg(args.degrees, t, p).map(QubitBasis::from_angles);
    let basis1 = basis(args.basis1)?;
    let basis2 = basis(args.basis2)?;
    let bob_bases = match (args.bob_basis1, args.bob_basis2) {
        (Some(b1), Some(b2)) => Some((basis(b1)?, basis(b2)?)),
        _ => None,
    };
    let machine = match args.machine {
        MachineArg::Kind => TermMachine::Swap(args.kind),
        MachineArg::Identity => TermMachine::Identity,
        MachineArg::AzimuthalSharedPhase => TermMachine::AzimuthalSharedPhase,
    };
    let options = ExperimentOptions {
        machine,
        threshold: args.threshold,
        bob_bases,
    };
    let report = run_experiment(&options, &basis1, &basis2).map_err(numerical)?;
    let doc = SignalDoc::from_report(&report, bob_bases.unwrap_or((basis1, basis2)))?;
    emit(args.out.as_deref(), &to_json(&doc).map_err(numerical)?, stdout)
}

/// Input document of `gram`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GramFile {
    pub inputs: Vec<[[f64; 2]; 4]>,
    pub outputs: Vec<[[f64; 2]; 4]>,
}

impl GramFile {
    pub fn from_states(inputs: &[TwoQubitState], outputs: &[TwoQubitState]) -> Self {
        let rows = |states: &[TwoQubitState]| {
            states
                .iter()
                .map(|s| s.amps().map(|z| [z.re, z.im]))
                .collect()
        };
        Self {
            inputs: rows(inputs),
            outputs: rows(outputs),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntryDoc {
    pub i: usize,
    pub j: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GramDoc {
    pub unitary_extendable: bool,
    pub max_deviation: f64,
    /// Entry with the largest deviation; `null` when extendable.
    pub offending_entry: Option<EntryDoc>,
    pub tol: f64,
    pub state_count: usize,
}

fn states_from_rows(rows: &[[[f64; 2]; 4]], label: &str, tol: f64) -> Result<Vec<TwoQubitState>, CliError> {
    rows.iter()
        .enumerate()
        .map(|(k, row)| {
            TwoQubitState::normalized_within(row.map(|[re, im]| Complex64::new(re, im)), tol)
                .map_err(|e| numerical(format!("{label}[{k}]: {e}")))
        })
        .collect()
}

fn cmd_gram(args: &GramArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    check_positive("tol", args.tol)?;
    let text = fs::read_to_string(&args.input)
        .map_err(|e| usage(format!("cannot read {}: {e}", args.input.display())))?;
    let file: GramFile = serde_json::from_str(&text)
        .map_err(|e| usage(format!("malformed {}: {e}", args.input.display())))?;
    if file.inputs.len() != file.outputs.len() || file.inputs.is_empty() {
        return Err(usage(format!(
            "malformed {}: need equal, non-zero numbers of inputs and outputs (got {} and {})",
            args.input.display(),
            file.inputs.len(),
            file.outputs.len()
        )));
    }
    let inputs = states_from_rows(&file.inputs, "inputs", args.tol)?;
    let outputs = states_from_rows(&file.outputs, "outputs", args.tol)?;
    let dev = gram_deviation(&inputs, &outputs).map_err(|e| match e {
        Error::Numerical(_) => numerical(e),
        other => usage(other),
    })?;
    ensure_finite(&[dev.max_deviation])?;
    let extendable = dev.max_deviation < args.tol;
    let doc = GramDoc {
        unitary_extendable: extendable,
        max_deviation: dev.max_deviation,
        offending_entry: (!extendable).then_some(EntryDoc {
            i: dev.worst_entry.0,
            j: dev.worst_entry.1,
        }),
        tol: args.tol,
        state_count: inputs.len(),
    };
    emit(args.out.as_deref(), &to_json(&doc).map_err(numerical)?, stdout)
}
