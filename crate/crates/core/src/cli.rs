//! Command-line front end.
//!
//! Every command computes its full result before anything is written, so a
//! rejected input never leaves a partial output file behind.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::discord::{default_discord_config, discord_grid, discord_variational, werner_grid, werner_sweep, DiscordResult, Side};
use crate::extremal::{classify_purity, max_basis_entropy, min_basis_entropy, BasisClass, Purity};
use crate::measure::{
    basis_entropy, product_basis, qubit_basis_from_axis, same_local_basis, von_neumann_entropy, MeasurementAxis,
    ProjectorBasis, UnitaryAxisParam,
};
use crate::optimize::OptimizerConfig;
use crate::parallel::Execution;
use crate::qmat::validate_density;
use crate::states::{decoherence_start, decoherence_start_uncorrected, read_matrix, resolve_state, serialize_matrix};
use crate::tracers::{decohere_sequence, grover_trace, shor_first_register_trace, GroverConfig, ShorConfig};
use crate::{Error, Result};

/// Grid resolution of `discord --oracle-grid`: quarter-degree steps.
pub const ORACLE_GRID: (usize, usize) = (721, 1441);

#[derive(Debug, Parser)]
#[command(name = "basis-entropy", version, about = "Basis entropy, its extrema, and quantum discord")]
struct Cli {
    /// Seed for every optimizer start.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Number of optimizer starts.
    #[arg(long, global = true)]
    starts: Option<usize>,
    /// Simplex diameter at which a start is converged.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Output file (CSV for traces, matrix file for `extremal`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// von Neumann entropy of a state.
    Entropy {
        #[arg(long)]
        input: String,
    },
    /// Basis entropy of a state under one projective measurement.
    BasisEntropy {
        #[arg(long)]
        input: String,
        #[arg(long)]
        basis: String,
    },
    /// Maximum or minimum basis entropy over a basis class.
    Extremal {
        #[arg(long)]
        input: String,
        #[arg(long, value_enum, default_value_t = Mode::Max)]
        mode: Mode,
        #[arg(long, value_enum, default_value_t = ClassArg::General)]
        class: ClassArg,
        /// Factor dimensions for product and samelocal classes, e.g. `2x2`.
        #[arg(long)]
        dims: Option<String>,
    },
    /// Two-qubit quantum discord.
    Discord {
        #[arg(long)]
        input: String,
        /// Measured subsystem.
        #[arg(long, value_enum, default_value_t = SideArg::B)]
        side: SideArg,
        /// Minimize over a dense axis grid instead of the optimizer.
        #[arg(long)]
        oracle_grid: bool,
    },
    /// Luo discord and minimum same-local basis entropy across the Werner family.
    WernerSweep {
        #[arg(long, default_value_t = 100)]
        steps: usize,
    },
    /// Success probability and basis entropy of Grover search.
    Grover {
        #[arg(long)]
        n: u32,
        #[arg(long, conflicts_with = "full_trace")]
        k: Option<usize>,
        /// Rows for k = 0 through ceil(pi sqrt(2^n) / 4).
        #[arg(long)]
        full_trace: bool,
    },
    /// First-register basis entropy through period finding.
    Shor {
        #[arg(long = "N")]
        modulus: u64,
        #[arg(long)]
        x: u64,
        #[arg(long, default_value_t = 8)]
        t: u32,
        /// Second-register qubits; defaults to the smallest that holds N.
        #[arg(long = "L")]
        l: Option<u32>,
    },
    /// Applies a sequence of measurement channels.
    Decohere {
        /// Defaults to the pure state with Bloch vector (sqrt(3)/4, 0, 1/4).
        #[arg(long)]
        input: Option<String>,
        /// Semicolon-separated basis specs.
        #[arg(long)]
        bases: String,
        /// Start from the uncorrected matrix with off-diagonal sqrt(3)/2 (rejected: not positive semidefinite).
        #[arg(long)]
        paper_exact: bool,
    },
    /// Pure, mixed or maximally mixed, by maximum basis entropy.
    Classify {
        #[arg(long)]
        input: String,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    Max,
    Min,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ClassArg {
    General,
    Product,
    Samelocal,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SideArg {
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "B", alias = "b")]
    B,
}

/// Header plus rows of numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn render(&self) -> Result<String> {
        let mut s = self.header.join(",");
        s.push('\n');
        for (i, row) in self.rows.iter().enumerate() {
            if row.len() != self.header.len() {
                return Err(Error::InvalidConfig(format!(
                    "row {i} has {} columns, header has {}",
                    row.len(),
                    self.header.len()
                )));
            }
            let cells: Vec<String> = row.iter().map(|&v| format_sig12(v)).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        Ok(s)
    }
}

/// Shortest decimal form of `v` rounded to 12 significant digits.
pub fn format_sig12(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    let rounded: f64 = format!("{v:.11e}").parse().expect("formatted float parses");
    // Avoid "-0".
    if rounded == 0.0 {
        return "0".into();
    }
    rounded.to_string()
}

pub fn emit_csv(table: &Table, path: &Path) -> Result<()> {
    let text = table.render()?;
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Parses a basis spec for a state of dimension `dim`.
///
/// `comp`, `axis:z1,z2,z3`, `product:<spec>x<spec>`, `samelocal:t,y1,y2,y3`, `frame:<file>`.
pub fn parse_basis(spec: &str, dim: usize) -> Result<ProjectorBasis> {
    let spec = spec.trim();
    let (head, args) = spec.split_once(':').unwrap_or((spec, ""));
    let basis = match head {
        "comp" if args.is_empty() => ProjectorBasis::computational(dim),
        "axis" => {
            let v = floats(args, 3, "axis")?;
            qubit_basis_from_axis(MeasurementAxis::normalized(v[0], v[1], v[2])?)
        }
        "samelocal" => {
            let v = floats(args, 4, "samelocal")?;
            same_local_basis(&ProjectorBasis::from_unitary_param(UnitaryAxisParam::new(v[0], v[1], v[2], v[3])?))
        }
        "frame" if !args.is_empty() => ProjectorBasis::new(read_matrix(Path::new(args))?)?,
        "product" => parse_product(args, dim)?,
        _ => return Err(Error::Parse(format!("invalid basis spec `{spec}`"))),
    };
    if basis.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: basis.dim(),
        });
    }
    Ok(basis)
}

/// Dimension a factor spec fixes on its own, if any.
fn intrinsic_dim(spec: &str) -> Result<Option<usize>> {
    if spec == "comp" {
        return Ok(None);
    }
    // Any dimension works for the probe; `comp` is the only free spec.
    parse_basis_any(spec).map(|b| Some(b.dim()))
}

fn parse_basis_any(spec: &str) -> Result<ProjectorBasis> {
    match parse_basis(spec, 0) {
        Err(Error::DimensionMismatch { found, .. }) => parse_basis(spec, found),
        other => other,
    }
}

fn parse_product(args: &str, dim: usize) -> Result<ProjectorBasis> {
    let mut last_err = Error::Parse(format!("product: expected <spec>x<spec>, got `{args}`"));
    for (i, _) in args.match_indices('x') {
        let (left, right) = (&args[..i], &args[i + 1..]);
        let dims = match (intrinsic_dim(left), intrinsic_dim(right)) {
            (Ok(Some(a)), Ok(Some(b))) => (a, b),
            (Ok(Some(a)), Ok(None)) if a > 0 && dim.is_multiple_of(a) => (a, dim / a),
            (Ok(None), Ok(Some(b))) if b > 0 && dim.is_multiple_of(b) => (dim / b, b),
            (Ok(None), Ok(None)) => match square_root(dim) {
                Some(d) => (d, d),
                None => {
                    last_err = Error::Parse(format!("product: cannot split dimension {dim} into two equal factors"));
                    continue;
                }
            },
            (Err(e), _) | (_, Err(e)) => {
                last_err = e;
                continue;
            }
            _ => continue,
        };
        let a = parse_basis(left, dims.0)?;
        let b = parse_basis(right, dims.1)?;
        return Ok(product_basis(&a, &b));
    }
    Err(last_err)
}

fn square_root(n: usize) -> Option<usize> {
    let r = (n as f64).sqrt().round() as usize;
    (r * r == n).then_some(r)
}

fn floats(args: &str, count: usize, what: &str) -> Result<Vec<f64>> {
    let vals: Vec<f64> = args
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::Parse(format!("{what}: {e} in `{args}`")))?;
    if vals.len() != count {
        return Err(Error::Parse(format!(
            "{what}: expected {count} comma-separated numbers, found {}",
            vals.len()
        )));
    }
    Ok(vals)
}

fn parse_dims(s: &str) -> Result<(usize, usize)> {
    let (a, b) = s
        .split_once('x')
        .ok_or_else(|| Error::Parse(format!("--dims: expected AxB, got `{s}`")))?;
    let p = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|e| Error::Parse(format!("--dims: {e} in `{s}`")))
    };
    Ok((p(a)?, p(b)?))
}

fn purity_label(p: Purity) -> &'static str {
    match p {
        Purity::Pure => "pure",
        Purity::Mixed => "mixed",
        Purity::MaximallyMixed => "maximally-mixed",
    }
}

struct Output {
    stdout: String,
    /// Diagnostics emitted even on success.
    notices: String,
    file: Option<(PathBuf, String)>,
}

fn optimizer(cli: &Cli, base: OptimizerConfig) -> OptimizerConfig {
    let mut cfg = base.with_seed(cli.seed).with_execution(Execution::Parallel);
    if let Some(s) = cli.starts {
        cfg = cfg.with_starts(s);
    }
    if let Some(t) = cli.tol {
        cfg = cfg.with_tol(t);
    }
    cfg
}

fn table_output(cli: &Cli, table: &Table, mut stdout: String) -> Result<Output> {
    let csv = table.render()?;
    let file = match &cli.out {
        Some(path) => Some((path.clone(), csv)),
        None => {
            stdout.push_str(&csv);
            None
        }
    };
    Ok(Output {
        stdout,
        notices: String::new(),
        file,
    })
}

fn print_discord(r: &DiscordResult) -> String {
    let [z1, z2, z3] = r.optimal_axis.as_array();
    let label = match r.side {
        Side::MeasureB => "delta(A:B)",
        Side::MeasureA => "delta(B:A)",
    };
    format!(
        "{label} {:.6}\nmutual_information {:.6}\nclassical_correlation {:.6}\naxis {z1:.6} {z2:.6} {z3:.6}\n",
        r.delta, r.mutual_information, r.measured_mutual
    )
}

fn execute(cli: &Cli) -> Result<Output> {
    let plain = |stdout: String| Output {
        stdout,
        notices: String::new(),
        file: None,
    };
    match &cli.command {
        Command::Entropy { input } => {
            let rho = resolve_state(input)?;
            Ok(plain(format!("{:.6}\n", von_neumann_entropy(&rho))))
        }
        Command::BasisEntropy { input, basis } => {
            let rho = resolve_state(input)?;
            let basis = parse_basis(basis, rho.dim())?;
            Ok(plain(format!("{:.6}\n", basis_entropy(&rho, &basis)?)))
        }
        Command::Extremal { input, mode, class, dims } => {
            let rho = resolve_state(input)?;
            let d = rho.dim();
            let factors = match dims {
                Some(s) => parse_dims(s)?,
                None => {
                    let r = square_root(d).unwrap_or(0);
                    (r, r)
                }
            };
            let class = match class {
                ClassArg::General => BasisClass::GeneralRank1(d),
                ClassArg::Product => BasisClass::ProductLocal(factors.0, factors.1),
                ClassArg::Samelocal if factors.0 == factors.1 => BasisClass::SameLocal(factors.0),
                ClassArg::Samelocal => {
                    return Err(Error::InvalidConfig(format!(
                        "--class samelocal needs equal factors, got {}x{}",
                        factors.0, factors.1
                    )))
                }
            };
            let cfg = optimizer(cli, OptimizerConfig::default());
            let result = match mode {
                Mode::Max => max_basis_entropy(&rho, class, &cfg)?,
                Mode::Min => min_basis_entropy(&rho, class, &cfg)?,
            };
            let mut out = plain(format!("{:.6}\n", result.value));
            if !result.converged {
                out.notices
                    .push_str("warning: best start hit the evaluation budget before converging\n");
            }
            out.file = cli
                .out
                .clone()
                .map(|p| (p, serialize_matrix(result.basis.frame())));
            Ok(out)
        }
        Command::Discord { input, side, oracle_grid } => {
            let rho = resolve_state(input)?;
            let side = match side {
                SideArg::A => Side::MeasureA,
                SideArg::B => Side::MeasureB,
            };
            let r = if *oracle_grid {
                discord_grid(&rho, side, ORACLE_GRID.0, ORACLE_GRID.1, Execution::Parallel)?
            } else {
                discord_variational(&rho, side, &optimizer(cli, default_discord_config()))?
            };
            Ok(plain(print_discord(&r)))
        }
        Command::WernerSweep { steps } => {
            if *steps == 0 {
                return Err(Error::InvalidConfig("--steps must be positive".into()));
            }
            let cfg = optimizer(cli, OptimizerConfig::default());
            let rows = werner_sweep(&werner_grid(*steps), &cfg)?;
            let mut table = Table::new(&["z", "discord", "min_basis_entropy"]);
            table.rows = rows
                .iter()
                .map(|r| vec![r.z, r.discord, r.min_basis_entropy])
                .collect();
            table_output(cli, &table, String::new())
        }
        Command::Grover { n, k, full_trace } => {
            let cfg = GroverConfig::new(*n, 0, 0)?;
            let ks = match (k, full_trace) {
                (Some(k), _) => *k..=*k,
                (None, true) => 0..=cfg.desired_iterations(),
                (None, false) => 0..=cfg.k_max(),
            };
            let mut table = Table::new(&["k", "p_success", "basis_entropy"]);
            table.rows = grover_trace(*n, ks)?
                .iter()
                .map(|r| vec![r.step_index as f64, r.auxiliary, r.basis_entropy])
                .collect();
            table_output(cli, &table, String::new())
        }
        Command::Shor { modulus, x, t, l } => {
            let cfg = match l {
                Some(l) => ShorConfig::new(*modulus, *x, *t, *l)?,
                None => ShorConfig::with_minimal_register(*modulus, *x, *t)?,
            };
            let trace = shor_first_register_trace(cfg);
            let mut table = Table::new(&["step", "basis_entropy"]);
            table.rows = trace
                .records
                .iter()
                .map(|r| vec![r.step_index as f64, r.basis_entropy])
                .collect();
            let mut out = table_output(cli, &table, String::new())?;
            let _ = writeln!(out.stdout, "order {}", trace.order);
            Ok(out)
        }
        Command::Decohere { input, bases, paper_exact } => {
            let mut notices = String::new();
            let rho = if *paper_exact {
                notices.push_str(
                    "notice: --paper-exact uses the uncorrected start matrix [[3/4, sqrt(3)/2], [sqrt(3)/2, 1/4]], \
                     which is not positive semidefinite; the corrected matrix has off-diagonal sqrt(3)/4\n",
                );
                match validate_density(decoherence_start_uncorrected()) {
                    Ok(rho) => rho,
                    Err(e) => {
                        return Err(Error::InvalidConfig(format!("{notices}{e}")));
                    }
                }
            } else {
                match input {
                    Some(spec) => resolve_state(spec)?,
                    None => decoherence_start(),
                }
            };
            let specs: Vec<&str> = bases.split(';').filter(|s| !s.trim().is_empty()).collect();
            if specs.is_empty() {
                return Err(Error::InvalidConfig("--bases: no basis given".into()));
            }
            let bases = specs
                .iter()
                .map(|s| parse_basis(s, rho.dim()))
                .collect::<Result<Vec<_>>>()?;
            let cfg = optimizer(cli, OptimizerConfig::default());
            let trace = decohere_sequence(&rho, &bases, &cfg)?;
            let mut stdout = String::new();
            let mut table = Table::new(&["step", "basis_entropy"]);
            for (_, r) in &trace.steps {
                let _ = writeln!(stdout, "step {} basis_entropy {:.6}", r.step_index, r.basis_entropy);
                table.rows.push(vec![r.step_index as f64, r.basis_entropy]);
            }
            let _ = writeln!(
                stdout,
                "final {} max_basis_entropy {:.6}",
                purity_label(trace.final_class),
                trace.final_max_basis_entropy
            );
            let csv = table.render()?;
            Ok(Output {
                stdout,
                notices,
                file: cli.out.clone().map(|p| (p, csv)),
            })
        }
        Command::Classify { input } => {
            let rho = resolve_state(input)?;
            let (class, max_be) = classify_purity(&rho, &optimizer(cli, OptimizerConfig::default()))?;
            Ok(plain(format!("{} {max_be:.6}\n", purity_label(class))))
        }
    }
}

/// Parses `argv` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    1
                }
            };
        }
    };
    match execute(&cli) {
        Ok(output) => {
            let _ = err.write_all(output.notices.as_bytes());
            if let Some((path, text)) = &output.file {
                if let Err(e) = std::fs::write(path, text) {
                    let _ = writeln!(err, "error: {}: {e}", path.display());
                    return 1;
                }
            }
            let _ = out.write_all(output.stdout.as_bytes());
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("basis-entropy").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn empty_table_is_header_only() {
        assert_eq!(Table::new(&["z", "discord", "min_basis_entropy"]).render().unwrap(), "z,discord,min_basis_entropy\n");
    }

    #[test]
    fn ragged_table_is_rejected() {
        let mut t = Table::new(&["a", "b"]);
        t.rows.push(vec![1.0]);
        assert!(t.render().is_err());
    }

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_sig12(0.125815416799), "0.125815416799");
        assert_eq!(format_sig12(0.1258154167991234), "0.125815416799");
        assert_eq!(format_sig12(805.0), "805");
        assert_eq!(format_sig12(-0.0), "0");
        assert_eq!(format_sig12(1.0e-20), "0.00000000000000000001");
    }

    #[test]
    fn bell_product_basis_prints_one() {
        let (code, out, _) = run_capture(&["basis-entropy", "--input", "bell", "--basis", "product:compxcomp"]);
        assert_eq!(code, 0);
        assert_eq!(out, "1.000000\n");
    }

    #[test]
    fn basis_grammar() {
        assert_eq!(parse_basis("comp", 3).unwrap().dim(), 3);
        assert_eq!(parse_basis("axis:0,0,1", 2).unwrap().dim(), 2);
        assert_eq!(parse_basis("product:axis:1,0,0xcomp", 4).unwrap().dim(), 4);
        assert_eq!(parse_basis("product:compxcomp", 6).unwrap_err(), Error::Parse("product: cannot split dimension 6 into two equal factors".into()));
        assert_eq!(parse_basis("samelocal:1,0,0,0", 4).unwrap().dim(), 4);
        assert!(parse_basis("axis:1,0", 2).is_err());
        assert!(parse_basis("axis:0,0,1", 4).is_err());
        assert!(parse_basis("spiral", 2).is_err());
    }

    #[test]
    fn unknown_command_fails() {
        let (code, _, err) = run_capture(&["frobnicate"]);
        assert_eq!(code, 1);
        assert!(!err.is_empty());
    }

    #[test]
    fn paper_exact_prints_notice_and_fails() {
        let (code, out, err) = run_capture(&["decohere", "--paper-exact", "--bases", "axis:0,0,1"]);
        assert_eq!(code, 1);
        assert!(out.is_empty());
        assert!(err.contains("notice") && err.contains("positive"), "{err}");
    }

    #[test]
    fn shor_prints_trace() {
        let (code, out, _) = run_capture(&["shor", "--N", "15", "--x", "7", "--t", "8"]);
        assert_eq!(code, 0);
        assert_eq!(out, "step,basis_entropy\n2,8\n3,8\n4,2\norder 4\n");
    }
}
