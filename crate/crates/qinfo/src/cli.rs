//! Command-line surface. Results go to stdout (one value or verdict per
//! line, machine-readable); context and diagnostics go to stderr.
//!
//! Exit codes: 0 success, 1 invalid input (flags, files, parameters),
//! 2 numerical failure or an undecided verdict.

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::capacities::{self, CapQuantity, NoisyKind};
use crate::channels::{self, ClassicalChannel};
use crate::cloning::{self, FidelityKind};
use crate::codes::{self, CodeGraph};
use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::fileio::{self, fmt_g};
use crate::figures;
use crate::gaussian::{self, GaussianCapacity, GaussianChannelParam, GiedkeVerdict};
use crate::measures;
use crate::protocols::{self, TeleportationScheme};
use crate::separability::{self, CriterionVerdict, Verdict};
use crate::states::Family;

#[derive(Parser)]
#[command(name = "qinfo", version, about = "Quantum information toolkit", disable_help_subcommand = true)]
struct Cli {
    /// Seed for sampling-based routines.
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
    /// Tolerance for iterative routines.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Directory that receives generated files.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Separability criteria on a state file, family, or covariance file
    Criteria(CriteriaArgs),
    /// Entanglement measures
    Measure(MeasureArgs),
    /// Channel capacities and capacity bounds
    Capacity(CapacityArgs),
    /// Cloning, purification, and estimation quantities
    Clone(CloneArgs),
    /// Graph codes: build the isometry, test detection or correction
    Code(CodeArgs),
    /// Protocol simulations
    Protocol(ProtocolArgs),
    /// Emit a registered figure as <name>.csv plus <name>.plot
    Figure(FigureArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CriterionKind {
    Ppt,
    Reduction,
    Chsh,
    Fef,
    Family,
    Gaussian,
}

#[derive(Args)]
struct CriteriaArgs {
    /// Which test to run
    #[arg(long, value_enum)]
    test: CriterionKind,
    /// State file (ppt, reduction, chsh, fef)
    #[arg(long)]
    state: Option<PathBuf>,
    /// Leading factors forming the left side of the bipartition
    #[arg(long, default_value_t = 1)]
    split: usize,
    /// Covariance file (gaussian)
    #[arg(long)]
    cov: Option<PathBuf>,
    #[command(flatten)]
    family: FamilyArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyKind {
    Werner,
    Isotropic,
    Oo,
    BellDiag,
}

#[derive(Args)]
struct FamilyArgs {
    /// Symmetric family for family-based commands
    #[arg(long, value_enum)]
    family: Option<FamilyKind>,
    /// Local dimension of the family state
    #[arg(long)]
    d: Option<usize>,
    /// Flip-operator expectation (werner, oo)
    #[arg(long, allow_hyphen_values = true)]
    f: Option<f64>,
    /// Maximally-entangled expectation (isotropic, oo)
    #[arg(long)]
    t: Option<f64>,
    /// Four Bell weights l0,l1,l2,l3 (bell-diag)
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    lambda: Option<Vec<f64>>,
}

impl FamilyArgs {
    fn build(&self) -> Result<Family> {
        let kind = self
            .family
            .ok_or_else(|| Error::BadParam("this command needs --family".into()))?;
        let d = self.d.unwrap_or(2);
        let f = || self.f.ok_or_else(|| Error::BadParam("this family needs --f".into()));
        let t = || self.t.ok_or_else(|| Error::BadParam("this family needs --t".into()));
        match kind {
            FamilyKind::Werner => Ok(Family::Werner { d, f: f()? }),
            FamilyKind::Isotropic => Ok(Family::Isotropic { d, t: t()? }),
            FamilyKind::Oo => Ok(Family::OO { d, f: f()?, t: t()? }),
            FamilyKind::BellDiag => {
                let l = self
                    .lambda
                    .clone()
                    .ok_or_else(|| Error::BadParam("bell-diag needs --lambda l0,l1,l2,l3".into()))?;
                if l.len() != 4 {
                    return Err(Error::BadParam(format!(
                        "--lambda needs four weights, found {}",
                        l.len()
                    )));
                }
                Ok(Family::BellDiagonal { lambda: [l[0], l[1], l[2], l[3]] })
            }
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MeasureKind {
    Eof,
    Er,
    Negativity,
}

#[derive(Args)]
struct MeasureArgs {
    /// Which measure to evaluate
    #[arg(long, value_enum)]
    quantity: MeasureKind,
    /// State file (eof on two qubits, negativity on any bipartition)
    #[arg(long)]
    state: Option<PathBuf>,
    /// Leading factors forming the left side of the bipartition
    #[arg(long, default_value_t = 1)]
    split: usize,
    #[command(flatten)]
    family: FamilyArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ChannelKind {
    Erasure,
    Depolarizing,
    Gaussian,
    Bsc,
}

#[derive(Args)]
struct CapacityArgs {
    /// Channel family
    #[arg(long, value_enum)]
    channel: ChannelKind,
    /// Local dimension (erasure, depolarizing)
    #[arg(long, default_value_t = 2)]
    d: usize,
    /// Noise parameter in [0, 1] (erasure, depolarizing)
    #[arg(long)]
    theta: Option<f64>,
    /// cc | cc1 | ce | cq | ctheta, plus cs for the gaussian coherent info
    #[arg(long)]
    quantity: Option<String>,
    /// Evaluate ctheta from the Choi state instead of the closed form
    #[arg(long)]
    numeric: bool,
    /// Gaussian gain k
    #[arg(long)]
    k: Option<f64>,
    /// Gaussian classical noise
    #[arg(long)]
    nc: Option<f64>,
    /// Gaussian input occupation
    #[arg(long, default_value_t = 1.0)]
    n: f64,
    /// Flip probability (bsc)
    #[arg(long)]
    p: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum CloneTask {
    Fidelities,
    Purifier,
    Phi,
    Unot,
    Bound,
}

#[derive(Clone, Copy, ValueEnum)]
enum WhichFidelity {
    One,
    All,
}

#[derive(Args)]
struct CloneArgs {
    /// Which quantity to compute
    #[arg(long, value_enum)]
    task: CloneTask,
    /// Input copies
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// Output copies
    #[arg(long)]
    m: Option<usize>,
    /// Local dimension
    #[arg(long, default_value_t = 2)]
    d: usize,
    /// Purifier bias theta in [0, 1]
    #[arg(long)]
    theta: Option<f64>,
    /// Asymptotic ratio m/n
    #[arg(long)]
    mu: Option<f64>,
    /// Purifier figure of merit
    #[arg(long, value_enum, default_value_t = WhichFidelity::All)]
    kind: WhichFidelity,
}

#[derive(Args)]
struct CodeArgs {
    /// Graph file path, or a builtin name: five-bit-pentagon | five-bit-wheel
    #[arg(long)]
    graph: String,
    /// Validate and report the encoding isometry
    #[arg(long)]
    build: bool,
    /// Comma-separated output sites of an error configuration ('' for none)
    #[arg(long)]
    detect: Option<String>,
    /// Test correction of every configuration up to this weight
    #[arg(long)]
    correct: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProtocolTask {
    Teleport,
    Dense,
    #[value(alias = "bbpsswd")]
    Bbpssw,
    Filter,
    Hashing,
}

#[derive(Args)]
struct ProtocolArgs {
    /// Which protocol to run
    #[arg(long, value_enum)]
    task: ProtocolTask,
    /// Local dimension (teleport, dense)
    #[arg(long, default_value_t = 2)]
    d: usize,
    /// Input state file
    #[arg(long)]
    state: Option<PathBuf>,
    /// Resource state file on d x d (teleport, dense)
    #[arg(long)]
    resource: Option<PathBuf>,
    /// Input fidelity of the isotropic pair (bbpssw)
    #[arg(long)]
    f: Option<f64>,
    /// Operator file with the filter element (filter)
    #[arg(long)]
    op: Option<PathBuf>,
    /// Factor the filter acts on
    #[arg(long, default_value_t = 0)]
    factor: usize,
}

#[derive(Args)]
struct FigureArgs {
    /// Registered figure name
    name: String,
    /// Grid resolution (lattice figures round up to include exact points)
    #[arg(long, default_value_t = 151)]
    points: usize,
}

/// Entry point used by the binary: argv in, exit code out.
pub fn run() -> i32 {
    run_from(std::env::args())
}

pub fn run_from<I>(args: I) -> i32
where
    I: IntoIterator,
    I::Item: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// 2 for numerical failures and undecidable quantities, 2 for output-write
/// failures, 1 for everything a caller got wrong.
fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NoConvergence { .. }
        | Error::Unavailable(_)
        | Error::RankDeficient { .. }
        | Error::ZeroProbability { .. }
        | Error::SizeGuard(_)
        | Error::Io(_) => 2,
        _ => 1,
    }
}

fn dispatch(cli: &Cli) -> Result<i32> {
    match &cli.cmd {
        Cmd::Criteria(a) => run_criteria(cli, a),
        Cmd::Measure(a) => run_measure(a),
        Cmd::Capacity(a) => run_capacity(cli, a),
        Cmd::Clone(a) => run_clone(a),
        Cmd::Code(a) => run_code(a),
        Cmd::Protocol(a) => run_protocol(a),
        Cmd::Figure(a) => run_figure(cli, a),
    }
}

/// Reads an input file; failures count as invalid input, not as I/O faults.
fn read_input(path: &PathBuf) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::BadParam(format!("cannot read {}: {e}", path.display())))
}

fn load_state(path: &Option<PathBuf>) -> Result<DensityMatrix> {
    let path = path
        .as_ref()
        .ok_or_else(|| Error::BadParam("this command needs --state".into()))?;
    fileio::parse_state_text(&read_input(path)?)
}

/// Reshapes to two equal factors when the factor list does not already
/// provide them; fef and the pair protocols need that form.
fn as_pair(rho: &DensityMatrix) -> Result<DensityMatrix> {
    let dims = rho.dims();
    if dims.len() == 2 && dims[0] == dims[1] {
        return rho.with_dims(dims.to_vec());
    }
    let n = rho.dim();
    let s = (n as f64).sqrt().round() as usize;
    if s * s != n {
        return Err(Error::DimMismatch(format!(
            "dimension {n} is not a square, cannot form equal factors"
        )));
    }
    rho.with_dims(vec![s, s])
}

fn verdict_word(v: &Verdict) -> &'static str {
    match v {
        Verdict::Separable => "separable",
        Verdict::Entangled => "entangled",
        Verdict::Inconclusive => "inconclusive",
    }
}

fn report_verdict(v: &CriterionVerdict) -> i32 {
    println!("{}", verdict_word(&v.verdict));
    let margin = v
        .witness
        .as_ref()
        .map(|w| format!(", margin {}", fmt_g(w.margin)))
        .unwrap_or_default();
    eprintln!(
        "{}: {}{}{}",
        v.criterion,
        v.note,
        margin,
        if v.definitive { "" } else { " (not definitive)" }
    );
    if v.verdict == Verdict::Inconclusive {
        2
    } else {
        0
    }
}

fn run_criteria(_cli: &Cli, a: &CriteriaArgs) -> Result<i32> {
    match a.test {
        CriterionKind::Ppt => {
            let rho = load_state(&a.state)?;
            Ok(report_verdict(&separability::ppt_check(&rho, a.split)?))
        }
        CriterionKind::Reduction => {
            let rho = load_state(&a.state)?;
            Ok(report_verdict(&separability::reduction_check(&rho, a.split)?))
        }
        CriterionKind::Chsh => {
            let rho = as_pair(&load_state(&a.state)?)?;
            let (x, x2, y, y2) = separability::chsh_optimal_settings();
            let value = separability::chsh_value(&rho, &x, &x2, &y, &y2)?;
            println!("{}", fmt_g(value));
            eprintln!(
                "chsh at the standard settings; local bound 2 is {}",
                if value > 2.0 { "violated" } else { "respected" }
            );
            Ok(0)
        }
        CriterionKind::Fef => {
            let rho = as_pair(&load_state(&a.state)?)?;
            let value = separability::fully_entangled_fraction(&rho)?;
            println!("{}", fmt_g(value));
            let d = rho.dims()[0] as f64;
            eprintln!(
                "fully entangled fraction; separable states stay at or below {}",
                fmt_g(1.0 / d)
            );
            Ok(0)
        }
        CriterionKind::Family => {
            let fam = a.family.build()?;
            Ok(report_verdict(&separability::family_separable(&fam)?))
        }
        CriterionKind::Gaussian => {
            let path = a
                .cov
                .as_ref()
                .ok_or_else(|| Error::BadParam("the gaussian test needs --cov".into()))?;
            let (cov, split) = fileio::parse_cov_text(&read_input(path)?)?;
            let ppt = gaussian::gaussian_ppt(&cov, split)?;
            let decision = gaussian::giedke_decide(&cov, split, 500)?;
            let (word, code) = match decision {
                GiedkeVerdict::Separable(k) => {
                    eprintln!("decided separable after {k} rounds");
                    ("separable", 0)
                }
                GiedkeVerdict::Entangled(k) => {
                    eprintln!("decided entangled after {k} rounds");
                    ("entangled", 0)
                }
                GiedkeVerdict::Undecided => ("undecided", 2),
            };
            println!("{word}");
            eprintln!("ppt says: {}", verdict_word(&ppt.verdict));
            Ok(code)
        }
    }
}

fn run_measure(a: &MeasureArgs) -> Result<i32> {
    match a.quantity {
        MeasureKind::Eof => {
            if a.family.family.is_some() {
                let r = measures::eof_closed_form(&a.family.build()?)?;
                println!("{}", fmt_g(r.value));
                eprintln!("closed form, {}", r.context);
            } else {
                let rho = as_pair(&load_state(&a.state)?)?;
                if rho.dims() != [2, 2] {
                    return Err(Error::Unsupported(
                        "eof on explicit states is implemented for two qubits; use --family elsewhere"
                            .into(),
                    ));
                }
                println!("{}", fmt_g(measures::eof_wootters(&rho)?));
                eprintln!("two-qubit concurrence route");
            }
            Ok(0)
        }
        MeasureKind::Er => {
            let r = measures::er_closed_form(&a.family.build()?)?;
            println!("{}", fmt_g(r.value));
            eprintln!("closed form, {}", r.context);
            Ok(0)
        }
        MeasureKind::Negativity => {
            let rho = load_state(&a.state)?;
            println!("{}", fmt_g(measures::log_negativity(&rho, a.split)?));
            Ok(0)
        }
    }
}

fn parse_quantity(s: &str) -> Result<CapQuantity> {
    match s.to_ascii_lowercase().as_str() {
        "cc" => Ok(CapQuantity::Cc),
        "cc1" => Ok(CapQuantity::Cc1),
        "ce" => Ok(CapQuantity::Ce),
        "cq" => Ok(CapQuantity::Cq),
        "ctheta" => Ok(CapQuantity::Ctheta),
        other => Err(Error::BadParam(format!(
            "unknown quantity '{other}'; expected cc, cc1, ce, cq, or ctheta"
        ))),
    }
}

fn parse_gaussian_quantity(s: &str) -> Result<GaussianCapacity> {
    match s.to_ascii_lowercase().as_str() {
        "ce" => Ok(GaussianCapacity::EntanglementAssisted),
        "cc1" => Ok(GaussianCapacity::OneShotClassical),
        "ctheta" => Ok(GaussianCapacity::TranspositionBound),
        "cs" => Ok(GaussianCapacity::CoherentInfo),
        "cq" => Ok(GaussianCapacity::Quantum),
        other => Err(Error::BadParam(format!(
            "unknown gaussian quantity '{other}'; expected ce, cc1, ctheta, cs, or cq"
        ))),
    }
}

fn run_capacity(cli: &Cli, a: &CapacityArgs) -> Result<i32> {
    let need_quantity = || {
        a.quantity
            .as_deref()
            .ok_or_else(|| Error::BadParam("this channel needs --quantity".into()))
    };
    match a.channel {
        ChannelKind::Bsc => {
            let p = a.p.ok_or_else(|| Error::BadParam("bsc needs --p".into()))?;
            let bracket = capacities::shannon_capacity(&ClassicalChannel::bsc(p)?, cli.tol)?;
            println!("{}", fmt_g(0.5 * (bracket.lower + bracket.upper)));
            eprintln!(
                "bracket [{}, {}] after {} iterations",
                fmt_g(bracket.lower),
                fmt_g(bracket.upper),
                bracket.iterations
            );
            Ok(0)
        }
        ChannelKind::Erasure | ChannelKind::Depolarizing => {
            let theta = a
                .theta
                .ok_or_else(|| Error::BadParam("this channel needs --theta".into()))?;
            let q = parse_quantity(need_quantity()?)?;
            let kind = if a.channel == ChannelKind::Erasure {
                NoisyKind::Erasure
            } else {
                NoisyKind::Depolarizing
            };
            let value = if a.numeric && q == CapQuantity::Ctheta {
                let t = match kind {
                    NoisyKind::Erasure => channels::erasure(a.d, theta)?,
                    NoisyKind::Depolarizing => channels::depolarizing(a.d, theta)?,
                };
                let v = capacities::c_theta_choi_bound(&t)?;
                eprintln!("transposition bound from the Choi state");
                v
            } else {
                capacities::closed_form_capacity(kind, a.d, theta, q)?
            };
            println!("{}", fmt_g(value));
            Ok(0)
        }
        ChannelKind::Gaussian => {
            let k = a.k.ok_or_else(|| Error::BadParam("gaussian needs --k".into()))?;
            let nc = a.nc.ok_or_else(|| Error::BadParam("gaussian needs --nc".into()))?;
            let q = parse_gaussian_quantity(need_quantity()?)?;
            let param = GaussianChannelParam::new(k, nc)?;
            let value = gaussian::gaussian_capacity(q, &param, a.n)?;
            println!("{}", fmt_g(value));
            if q.conjectured() {
                eprintln!("conjectured formula");
            }
            Ok(0)
        }
    }
}

fn run_clone(a: &CloneArgs) -> Result<i32> {
    let need = |name: &str, v: Option<f64>| {
        v.ok_or_else(|| Error::BadParam(format!("this task needs --{name}")))
    };
    match a.task {
        CloneTask::Fidelities => {
            let m = a.m.ok_or_else(|| Error::BadParam("fidelities needs --m".into()))?;
            let (f_one, f_all) = cloning::cloner_fidelities(a.n, m, a.d)?;
            println!("f1 {}", fmt_g(f_one));
            println!("fall {}", fmt_g(f_all));
            Ok(0)
        }
        CloneTask::Purifier => {
            let m = a.m.ok_or_else(|| Error::BadParam("purifier needs --m".into()))?;
            let theta = need("theta", a.theta)?;
            let kind = match a.kind {
                WhichFidelity::One => FidelityKind::One,
                WhichFidelity::All => FidelityKind::All,
            };
            println!("{}", fmt_g(cloning::purifier_fidelity(kind, a.n, m, theta)?));
            Ok(0)
        }
        CloneTask::Phi => {
            let mu = need("mu", a.mu)?;
            let theta = need("theta", a.theta)?;
            println!("{}", fmt_g(cloning::phi_asymptotic(mu, theta)?));
            Ok(0)
        }
        CloneTask::Unot => {
            println!("{}", fmt_g(cloning::unot_fidelity(a.n)));
            Ok(0)
        }
        CloneTask::Bound => {
            let b = cloning::estimation_bound(a.n, a.d);
            println!("value {}", fmt_g(b.value));
            println!("shifted {}", fmt_g(b.shifted_by_inverse_d));
            Ok(0)
        }
    }
}

fn load_graph(source: &str) -> Result<CodeGraph> {
    match source {
        "five-bit-pentagon" => Ok(codes::five_bit_code_graphs().0),
        "five-bit-wheel" => Ok(codes::five_bit_code_graphs().1),
        path => codes::parse_graph(&read_input(&PathBuf::from(path))?),
    }
}

fn run_code(a: &CodeArgs) -> Result<i32> {
    let g = load_graph(&a.graph)?;
    let picked = a.build as usize + a.detect.is_some() as usize + a.correct.is_some() as usize;
    if picked != 1 {
        return Err(Error::BadParam(
            "pick exactly one of --build, --detect, --correct".into(),
        ));
    }
    if a.build {
        let v = g.build_isometry()?;
        println!("isometry {} -> {}", v.ncols(), v.nrows());
        return Ok(0);
    }
    if let Some(sites) = &a.detect {
        let z: Vec<usize> = sites
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| {
                s.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::BadParam(format!("bad site index '{s}'")))
            })
            .collect::<Result<_>>()?;
        println!("{}", g.detects_configuration(&z)?);
        return Ok(0);
    }
    let k = a.correct.expect("flag count checked above");
    println!("{}", g.corrects_k_errors(k)?);
    Ok(0)
}

fn scheme_for(d: usize, resource: &Option<PathBuf>) -> Result<TeleportationScheme> {
    let s = if d == 2 {
        TeleportationScheme::standard_qubit()
    } else {
        TeleportationScheme::weyl(d)?
    };
    match resource {
        Some(path) => s.with_resource(&fileio::parse_state_text(&read_input(path)?)?),
        None => Ok(s),
    }
}

fn run_protocol(a: &ProtocolArgs) -> Result<i32> {
    match a.task {
        ProtocolTask::Teleport => {
            let s = scheme_for(a.d, &a.resource)?;
            let rho = match &a.state {
                Some(_) => load_state(&a.state)?,
                None => DensityMatrix::maximally_mixed(vec![a.d]),
            };
            let (_, deviation) = protocols::run_teleportation(&s, &rho)?;
            println!("{}", fmt_g(deviation));
            eprintln!("trace-norm deviation of the corrected output");
            Ok(0)
        }
        ProtocolTask::Dense => {
            let s = scheme_for(a.d, &a.resource)?;
            let m = protocols::run_dense_coding(&s);
            for r in 0..m.nrows() {
                let cells: Vec<String> = (0..m.ncols()).map(|c| fmt_g(m[(r, c)])).collect();
                println!("{}", cells.join(","));
            }
            eprintln!("transition matrix, rows = decoded outcome, columns = sent message");
            Ok(0)
        }
        ProtocolTask::Bbpssw => {
            let rho = match (&a.state, a.f) {
                (Some(_), _) => as_pair(&load_state(&a.state)?)?,
                (None, Some(f)) => protocols::isotropic_with_fidelity(f)?,
                (None, None) => {
                    return Err(Error::BadParam("bbpssw needs --f or --state".into()))
                }
            };
            let step = protocols::bbpssw_step(&rho)?;
            println!("fidelity {}", fmt_g(step.fidelity_out));
            println!("probability {}", fmt_g(step.success_prob));
            eprintln!("input fidelity {}", fmt_g(step.fidelity_in));
            Ok(0)
        }
        ProtocolTask::Filter => {
            let rho = load_state(&a.state)?;
            let path = a
                .op
                .as_ref()
                .ok_or_else(|| Error::BadParam("filter needs --op".into()))?;
            let x = fileio::parse_matrix_text(&read_input(path)?)?;
            let (out, prob) = protocols::filter_step(&rho, &x, a.factor)?;
            println!("probability {}", fmt_g(prob));
            if out.dims().len() == 2 && out.dims()[0] == out.dims()[1] {
                println!("fef {}", fmt_g(separability::fully_entangled_fraction(&out)?));
            }
            Ok(0)
        }
        ProtocolTask::Hashing => {
            let rho = as_pair(&load_state(&a.state)?)?;
            println!("{}", protocols::hashing_threshold(&rho)?);
            Ok(0)
        }
    }
}

fn run_figure(cli: &Cli, a: &FigureArgs) -> Result<i32> {
    let fig = figures::emit_figure(&a.name, a.points, cli.seed)?;
    fs::create_dir_all(&cli.out)?;
    let csv_path = cli.out.join(format!("{}.csv", fig.name));
    let plot_path = cli.out.join(format!("{}.plot", fig.name));
    fs::write(&csv_path, fig.csv.render())?;
    fs::write(&plot_path, &fig.plot)?;
    eprintln!("wrote {}", csv_path.display());
    eprintln!("wrote {}", plot_path.display());
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn help_and_version_exit_clean() {
        assert_eq!(run_from(["qinfo", "--help"]), 0);
        assert_eq!(run_from(["qinfo", "--version"]), 0);
        assert_eq!(run_from(["qinfo", "no-such-command"]), 1);
        assert_eq!(run_from(["qinfo", "figure"]), 1);
    }

    #[test]
    fn quantity_parsers_accept_case_variants() {
        assert_eq!(parse_quantity("Ce").unwrap(), CapQuantity::Ce);
        assert_eq!(parse_quantity("CTHETA").unwrap(), CapQuantity::Ctheta);
        assert!(parse_quantity("bogus").is_err());
        assert!(matches!(
            parse_gaussian_quantity("cc1").unwrap(),
            GaussianCapacity::OneShotClassical
        ));
        assert!(parse_gaussian_quantity("chi").is_err());
    }

    #[test]
    fn family_flags_build_families() {
        let args = FamilyArgs {
            family: Some(FamilyKind::Werner),
            d: Some(3),
            f: Some(-0.5),
            t: None,
            lambda: None,
        };
        assert!(matches!(args.build().unwrap(), Family::Werner { d: 3, .. }));
        let missing = FamilyArgs { family: Some(FamilyKind::Isotropic), d: None, f: None, t: None, lambda: None };
        assert!(missing.build().is_err());
        let short = FamilyArgs {
            family: Some(FamilyKind::BellDiag),
            d: None,
            f: None,
            t: None,
            lambda: Some(vec![1.0, 0.0]),
        };
        assert!(short.build().is_err());
    }

    #[test]
    fn error_classes_map_to_documented_codes() {
        assert_eq!(exit_code(&Error::BadParam("x".into())), 1);
        assert_eq!(exit_code(&Error::Parse { line: 1, message: "x".into() }), 1);
        assert_eq!(exit_code(&Error::Unavailable("open".into())), 2);
        assert_eq!(
            exit_code(&Error::NoConvergence { iterations: 3, residual: 1.0 }),
            2
        );
        assert_eq!(exit_code(&Error::ZeroProbability { prob: 0.0 }), 2);
    }

    #[test]
    fn capacity_example_value() {
        // The documented invocation: erasure, d = 2, theta = 0.25, Ce.
        let cli = Cli::try_parse_from([
            "qinfo", "capacity", "--channel", "erasure", "--d", "2", "--theta", "0.25",
            "--quantity", "Ce",
        ])
        .unwrap();
        assert_eq!(dispatch(&cli).unwrap(), 0);
        let cli = Cli::try_parse_from([
            "qinfo", "capacity", "--channel", "depolarizing", "--theta", "0.3", "--quantity", "cc",
        ])
        .unwrap();
        match dispatch(&cli) {
            Err(Error::Unavailable(_)) => {}
            other => panic!("expected unavailable, got {other:?}"),
        }
    }
}
