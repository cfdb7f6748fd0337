//! Command-line driver: one subcommand per experiment, CSV + summary JSON out.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use compact_psido::groups::CompactGroup;
use compact_psido::verify::{self, Expansion, Multiplier, Report};
use compact_psido::{Backend, Error};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "psido-experiments", version, about = "Numerical experiments for pseudo-differential operators on compact groups")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Name {
    PlancherelCheck,
    InversionCheck,
    CgCheck,
    DiffopEquivalence,
    SeminormScan,
    QuantizeRoundtrip,
    ComposeExpansion,
    AdjointExpansion,
    SobolevNormSweep,
    CommutatorTest,
    MultiplierDecay,
    KernelDecay,
    HeatKernelReport,
    BilinearCheck,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Plancherel identity against quadrature for random band-limited functions
    PlancherelCheck(RunArgs),
    /// Sample, transform and compare coefficients
    InversionCheck(RunArgs),
    /// Clebsch-Gordan unitarity and block-diagonalisation on SU(2) (cutoff = max twice-spin)
    CgCheck(RunArgs),
    /// RT differences against intrinsic differences, and the Leibniz identity
    DiffopEquivalence(RunArgs),
    /// Symbol-class seminorms of a named test symbol
    SeminormScan(RunArgs),
    /// Symbols of differential operators through the operator matrix
    QuantizeRoundtrip(RunArgs),
    /// Remainder order of the composition expansion
    ComposeExpansion(RunArgs),
    /// Remainder order of the adjoint expansion
    AdjointExpansion(RunArgs),
    /// L2 and Sobolev operator norms across cutoffs
    SobolevNormSweep(RunArgs),
    /// Commutator norms for order-zero operators and a random unitary (torus:1)
    CommutatorTest(RunArgs),
    /// Weighted difference suprema of dilated spectral multipliers
    MultiplierDecay(RunArgs),
    /// Shell-weighted kernel suprema near the identity
    KernelDecay(RunArgs),
    /// Gaussian upper bound for the heat kernel on SU(2)
    HeatKernelReport(RunArgs),
    /// Bilinear product estimate for eigenfunctions on SU(2)
    BilinearCheck(RunArgs),
}

impl Cmd {
    fn split(self) -> (Name, RunArgs) {
        match self {
            Cmd::PlancherelCheck(a) => (Name::PlancherelCheck, a),
            Cmd::InversionCheck(a) => (Name::InversionCheck, a),
            Cmd::CgCheck(a) => (Name::CgCheck, a),
            Cmd::DiffopEquivalence(a) => (Name::DiffopEquivalence, a),
            Cmd::SeminormScan(a) => (Name::SeminormScan, a),
            Cmd::QuantizeRoundtrip(a) => (Name::QuantizeRoundtrip, a),
            Cmd::ComposeExpansion(a) => (Name::ComposeExpansion, a),
            Cmd::AdjointExpansion(a) => (Name::AdjointExpansion, a),
            Cmd::SobolevNormSweep(a) => (Name::SobolevNormSweep, a),
            Cmd::CommutatorTest(a) => (Name::CommutatorTest, a),
            Cmd::MultiplierDecay(a) => (Name::MultiplierDecay, a),
            Cmd::KernelDecay(a) => (Name::KernelDecay, a),
            Cmd::HeatKernelReport(a) => (Name::HeatKernelReport, a),
            Cmd::BilinearCheck(a) => (Name::BilinearCheck, a),
        }
    }
}

impl Name {
    fn as_str(self) -> &'static str {
        match self {
            Name::PlancherelCheck => "plancherel-check",
            Name::InversionCheck => "inversion-check",
            Name::CgCheck => "cg-check",
            Name::DiffopEquivalence => "diffop-equivalence",
            Name::SeminormScan => "seminorm-scan",
            Name::QuantizeRoundtrip => "quantize-roundtrip",
            Name::ComposeExpansion => "compose-expansion",
            Name::AdjointExpansion => "adjoint-expansion",
            Name::SobolevNormSweep => "sobolev-norm-sweep",
            Name::CommutatorTest => "commutator-test",
            Name::MultiplierDecay => "multiplier-decay",
            Name::KernelDecay => "kernel-decay",
            Name::HeatKernelReport => "heat-kernel-report",
            Name::BilinearCheck => "bilinear-check",
        }
    }
}

/// Flags shared by every subcommand; each one uses the subset it needs.
#[derive(Args, Debug, Default)]
struct RunArgs {
    /// `torus:n` or `su2`
    #[arg(long)]
    backend: Option<String>,
    /// Degree cutoff: frequency radius on the torus, twice-spin on SU(2)
    #[arg(long)]
    cutoff: Option<usize>,
    /// Comma-separated degree schedule for sweeps
    #[arg(long, value_delimiter = ',')]
    cutoffs: Option<Vec<usize>>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
    /// Exit with status 1 if any check fails
    #[arg(long)]
    check: bool,
    /// JSON config file; flags override its keys
    #[arg(long)]
    config: Option<PathBuf>,
    /// Number of expansion terms
    #[arg(long = "N", alias = "n")]
    n_terms: Option<usize>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    /// Symbol order (comma-separated for kernel-decay)
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    m: Option<Vec<f64>>,
    /// Difference order of a seminorm
    #[arg(long)]
    a: Option<usize>,
    /// Derivative order of a seminorm
    #[arg(long)]
    b: Option<usize>,
    /// Multiplier: heat, bessel or bump
    #[arg(long)]
    f: Option<String>,
    #[arg(long)]
    alpha_max: Option<usize>,
    /// Test symbol for seminorm-scan: order-one, bessel or heat
    #[arg(long)]
    symbol: Option<String>,
    #[arg(long)]
    trials: Option<usize>,
    /// Twice-spin pairs `j1:j2`, comma-separated
    #[arg(long, value_delimiter = ',')]
    pairs: Option<Vec<String>>,
}

/// On-disk config, schema version 1.
#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    version: u32,
    backend: Option<String>,
    cutoff: Option<usize>,
    cutoffs: Option<Vec<usize>>,
    seed: Option<u64>,
    out: Option<PathBuf>,
    check: Option<bool>,
    #[serde(default)]
    params: Params,
}

#[derive(Deserialize, Serialize, Debug, Default, Clone)]
#[serde(deny_unknown_fields)]
struct Params {
    #[serde(rename = "N")]
    n_terms: Option<usize>,
    rho: Option<f64>,
    delta: Option<f64>,
    m: Option<Vec<f64>>,
    a: Option<usize>,
    b: Option<usize>,
    f: Option<String>,
    alpha_max: Option<usize>,
    symbol: Option<String>,
    trials: Option<usize>,
    pairs: Option<Vec<(u32, u32)>>,
}

/// Everything that determines the output; its hash tags every CSV row.
#[derive(Serialize, Debug, Clone)]
struct Resolved {
    version: u32,
    command: &'static str,
    backend: String,
    cutoff: Option<usize>,
    cutoffs: Option<Vec<usize>>,
    seed: u64,
    params: Params,
}

impl Resolved {
    fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("plain data serialises");
        let digest = Sha256::digest(json.as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded(_) => 3,
            Error::Schema(_) | Error::InvalidParameters(_) | Error::InvalidIrrep(_) | Error::BackendMismatch(..) | Error::IndexOutOfRange { .. } => 2,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

fn schema(msg: impl Into<String>) -> Failure {
    Failure { code: 2, message: msg.into() }
}

fn io(e: impl std::fmt::Display) -> Failure {
    Failure { code: 1, message: e.to_string() }
}

fn resolve(name: Name, args: &RunArgs) -> Result<(Resolved, PathBuf, bool), Failure> {
    let file = match &args.config {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| schema(format!("cannot read {}: {e}", p.display())))?;
            let cfg: ConfigFile = serde_json::from_str(&text).map_err(|e| schema(format!("{}: {e}", p.display())))?;
            if cfg.version != SCHEMA_VERSION {
                return Err(schema(format!("unsupported config version {} (expected {SCHEMA_VERSION})", cfg.version)));
            }
            cfg
        }
        None => ConfigFile { version: SCHEMA_VERSION, ..Default::default() },
    };
    let mut params = file.params.clone();
    macro_rules! over {
        ($($field:ident),*) => { $( if args.$field.is_some() { params.$field = args.$field.clone(); } )* };
    }
    over!(n_terms, rho, delta, m, a, b, f, alpha_max, symbol, trials);
    if let Some(p) = &args.pairs {
        params.pairs = Some(p.iter().map(|s| parse_pair(s)).collect::<Result<_, _>>()?);
    }
    let default_backend = match name {
        Name::CgCheck | Name::HeatKernelReport | Name::BilinearCheck => "su2",
        _ => "torus:1",
    };
    let backend = args.backend.clone().or(file.backend).unwrap_or_else(|| default_backend.into());
    Backend::parse(&backend)?;
    let resolved = Resolved {
        version: SCHEMA_VERSION,
        command: name.as_str(),
        backend,
        cutoff: args.cutoff.or(file.cutoff),
        cutoffs: args.cutoffs.clone().or(file.cutoffs),
        seed: args.seed.or(file.seed).unwrap_or(0),
        params,
    };
    let out = args.out.clone().or(file.out).unwrap_or_else(|| PathBuf::from("."));
    Ok((resolved, out, args.check || file.check.unwrap_or(false)))
}

fn parse_pair(s: &str) -> Result<(u32, u32), Failure> {
    let (a, b) = s.split_once(':').ok_or_else(|| schema(format!("pair {s:?} is not j1:j2")))?;
    let p = |x: &str| x.trim().parse::<u32>().map_err(|_| schema(format!("bad twice-spin in {s:?}")));
    Ok((p(a)?, p(b)?))
}

/// `Σ d_π²` up to the degree: the length of a coefficient vector.
fn basis_size(b: Backend, degree: usize) -> usize {
    b.enumerate_dual(b.casimir_for_degree(degree)).iter().map(|p| p.dim * p.dim).sum()
}

fn budget(b: Backend, degree: usize, limit: usize, what: &str) -> Result<(), Failure> {
    let n = basis_size(b, degree);
    if n > limit {
        return Err(Error::BudgetExceeded(format!("{what} at degree {degree} on {} needs {n} coefficients (limit {limit})", b.id())).into());
    }
    Ok(())
}

const FOURIER_LIMIT: usize = 1 << 21;
const MATRIX_LIMIT: usize = 2500;
const SYMBOL_LIMIT: usize = 20_000;

/// The explicit schedule, or the default one rescaled to end at `--cutoff`.
fn schedule(r: &Resolved, default: &[usize]) -> Result<Vec<usize>, Failure> {
    let s = match (&r.cutoffs, r.cutoff) {
        (Some(c), _) => c.clone(),
        (None, Some(k)) => {
            let top = *default.iter().max().expect("nonempty default");
            default.iter().map(|&d| ((d * k) as f64 / top as f64).round().max(1.0) as usize).collect()
        }
        (None, None) => default.to_vec(),
    };
    if s.is_empty() || s.windows(2).any(|w| w[0] >= w[1]) {
        return Err(schema(format!("cutoff schedule {s:?} must be nonempty and increasing")));
    }
    Ok(s)
}

fn torus_only(b: Backend, name: Name) -> Result<(), Failure> {
    if b != Backend::torus(1) {
        return Err(schema(format!("{} runs on torus:1 only", name.as_str())));
    }
    Ok(())
}

fn su2_only(b: Backend, name: Name) -> Result<(), Failure> {
    if b != Backend::su2() {
        return Err(schema(format!("{} runs on su2 only", name.as_str())));
    }
    Ok(())
}

fn execute(name: Name, r: &Resolved) -> Result<Report, Failure> {
    let b = Backend::parse(&r.backend)?;
    let p = &r.params;
    let seed = r.seed;
    let torus = b.is_torus();
    let rep = match name {
        Name::PlancherelCheck | Name::InversionCheck => {
            let deg = r.cutoff.unwrap_or(if torus { 64 } else { 16 });
            budget(b, deg, FOURIER_LIMIT, "transform")?;
            let mut rep = verify::fourier_check(b, deg, p.trials.unwrap_or(3), seed)?;
            let keep = if name == Name::PlancherelCheck { "plancherel" } else { "roundtrip" };
            rep.checks.retain(|c| c.name.contains(keep));
            rep
        }
        Name::CgCheck => {
            su2_only(b, name)?;
            let j = r.cutoff.unwrap_or(8);
            if j > 64 {
                return Err(Error::BudgetExceeded(format!("cg-check up to j = {j} (limit 64)")).into());
            }
            verify::cg_check(j as u32, p.trials.unwrap_or(20), seed)?
        }
        Name::DiffopEquivalence => {
            let deg = r.cutoff.unwrap_or(if torus { 64 } else { 16 });
            budget(b, deg, SYMBOL_LIMIT, "difference operators")?;
            let mut rep = verify::difference_equivalence(b, deg, seed)?;
            let l = verify::leibniz_check(b, p.trials.unwrap_or(100), seed)?;
            rep.checks.extend(l.checks);
            rep
        }
        Name::SeminormScan => {
            let deg = r.cutoff.unwrap_or(if torus { 32 } else { 8 });
            budget(b, deg, SYMBOL_LIMIT, "seminorm")?;
            let m = p.m.as_ref().and_then(|v| v.first().copied()).unwrap_or(0.0);
            if p.rho.unwrap_or(1.0) != 1.0 {
                return Err(schema("seminorm-scan supports rho = 1"));
            }
            let symbol = p.symbol.as_deref().unwrap_or("bessel");
            verify::seminorm_scan(b, symbol, m, p.a.unwrap_or(2), p.b.unwrap_or(0), deg, seed)?
        }
        Name::QuantizeRoundtrip => {
            let deg = r.cutoff.unwrap_or(if torus { 16 } else { 8 });
            budget(b, deg, MATRIX_LIMIT, "operator matrix")?;
            verify::quantization_roundtrip(b, deg, seed)?
        }
        Name::ComposeExpansion | Name::AdjointExpansion => {
            if p.rho.unwrap_or(1.0) != 1.0 || p.delta.unwrap_or(0.0) != 0.0 {
                return Err(schema("expansions are implemented for rho = 1, delta = 0"));
            }
            let degrees = schedule(r, if torus { &[32, 64, 128] } else { &[8, 12, 16] })?;
            budget(b, *degrees.last().unwrap() + 8, SYMBOL_LIMIT, "expansion")?;
            let n = p.n_terms.unwrap_or(2);
            let orders: Vec<usize> = (1..=n).collect();
            let which = if name == Name::ComposeExpansion { Expansion::Compose } else { Expansion::Adjoint };
            verify::expansion_order(b, which, &degrees, &orders, seed)?
        }
        Name::SobolevNormSweep => {
            torus_only(b, name)?;
            let degrees = schedule(r, &[16, 32, 64])?;
            budget(b, *degrees.last().unwrap(), MATRIX_LIMIT, "operator matrix")?;
            verify::sobolev_sweep(&degrees, seed)?
        }
        Name::CommutatorTest => {
            torus_only(b, name)?;
            let degrees = schedule(r, &[32, 64, 128])?;
            budget(b, *degrees.last().unwrap() + 6, MATRIX_LIMIT, "operator matrix")?;
            verify::commutator_test(&degrees, seed)?
        }
        Name::MultiplierDecay => {
            let which = Multiplier::parse(p.f.as_deref().unwrap_or("heat"))?;
            let (_, _, default) = which.setup(b);
            let degrees = schedule(r, &default)?;
            budget(b, *degrees.last().unwrap(), SYMBOL_LIMIT * 4, "multiplier symbol")?;
            verify::multiplier_decay(b, which, p.alpha_max.unwrap_or(2), Some(&degrees))?
        }
        Name::KernelDecay => {
            let degrees = schedule(r, &verify::kernel_degrees(b))?;
            budget(b, *degrees.last().unwrap(), SYMBOL_LIMIT * 4, "kernel")?;
            let orders = p.m.clone().unwrap_or_else(|| verify::kernel_orders(b));
            verify::kernel_decay(b, &orders, &degrees)?
        }
        Name::HeatKernelReport => {
            su2_only(b, name)?;
            verify::heat_kernel_bound()?
        }
        Name::BilinearCheck => {
            su2_only(b, name)?;
            let pairs = p.pairs.clone().unwrap_or_else(|| verify::BILINEAR_PAIRS.to_vec());
            if let Some(&(j1, j2)) = pairs.iter().find(|(a, b)| a.max(b) > &32) {
                return Err(Error::BudgetExceeded(format!("bilinear pair {j1}:{j2} (limit 32)")).into());
            }
            verify::bilinear(&pairs, p.trials.unwrap_or(100), seed)?
        }
    };
    Ok(rep)
}

fn write_csv(path: &Path, r: &Resolved, hash: &str, rep: &Report) -> Result<(), Failure> {
    let mut out = String::new();
    out += &format!("# experiment: {}\n", r.command);
    out += &format!("# title: {}\n", rep.title);
    out += &format!("# config_hash: {hash}\n");
    out += &format!("# config: {}\n", serde_json::to_string(r).map_err(io)?);
    for n in &rep.notes {
        out += &format!("# note: {}\n", n.replace('\n', " "));
    }
    let mut w = csv::WriterBuilder::new().flexible(true).from_writer(vec![]);
    let mut header = vec!["config_hash".to_string()];
    header.extend(rep.columns.iter().cloned());
    w.write_record(&header).map_err(io)?;
    for row in &rep.rows {
        w.write_record(std::iter::once(hash).chain(row.iter().map(String::as_str))).map_err(io)?;
    }
    out += &String::from_utf8(w.into_inner().map_err(io)?).map_err(io)?;
    fs::write(path, out).map_err(io)
}

#[derive(Serialize)]
struct Summary<'a> {
    experiment: &'a str,
    title: &'a str,
    passed: bool,
    config_hash: &'a str,
    config: &'a Resolved,
    checks: &'a [verify::Check],
    notes: &'a [String],
    elapsed_seconds: f64,
}

fn run(cli: Cli) -> Result<bool, Failure> {
    let (name, args) = cli.cmd.split();
    let (resolved, out, check) = resolve(name, &args)?;
    let hash = resolved.hash();
    let start = Instant::now();
    let rep = execute(name, &resolved)?;
    let elapsed = start.elapsed().as_secs_f64();
    fs::create_dir_all(&out).map_err(io)?;
    write_csv(&out.join(format!("{}.csv", name.as_str())), &resolved, &hash, &rep)?;
    let summary = Summary {
        experiment: name.as_str(),
        title: &rep.title,
        passed: rep.passed(),
        config_hash: &hash,
        config: &resolved,
        checks: &rep.checks,
        notes: &rep.notes,
        elapsed_seconds: elapsed,
    };
    let json = serde_json::to_string_pretty(&summary).map_err(io)?;
    fs::write(out.join(format!("{}.summary.json", name.as_str())), json + "\n").map_err(io)?;
    print!("{}", rep.summary());
    Ok(!check || rep.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("check failed");
            ExitCode::from(1)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
