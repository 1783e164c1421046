//! Command-line front end. Output goes to the given writers so it can be
//! captured in tests; exit codes are 0 (success), 1 (verification failure or
//! internal inconsistency) and 2 (usage error).

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::Error;
use crate::flagmatrix::{
    build_expression_table, build_matrix, character_so3, character_so4, eigenvalues_exact, match_characters,
    spectrum_closed, BasisId, SpectrumEntry, SpectrumTarget,
};
use crate::laplacian::lap;
use crate::numeric::{self, VerifyReport};
use crate::partitions::{enumerate_upto, Partition};
use crate::tracepoly::{Mode, Rational, TracePoly};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "tracelap", version, about = "Exact Laplacians of trace polynomials on SO(N)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Generaln,
    So3,
    So4,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Pretty,
    Json,
    Csv,
    Latex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TargetArg {
    So3,
    So4,
    Sphere,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Laplacian,
    Gegenbauer,
    Identities,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Laplacian of a trace monomial or of a JSON trace polynomial.
    Lap {
        #[arg(long, value_enum)]
        mode: ModeArg,
        /// Comma-separated parts, e.g. `2,1`; `0` is the constant.
        #[arg(long, conflicts_with = "poly", required_unless_present = "poly")]
        partition: Option<Partition>,
        /// Trace polynomial in the JSON record format.
        #[arg(long)]
        poly: Option<String>,
        /// Fix N for general mode.
        #[arg(long)]
        n: Option<u32>,
        /// Both forms are printed when omitted.
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Matrix of the Laplacian on V_{≤k}.
    Matrix {
        #[arg(long, value_enum)]
        mode: ModeArg,
        /// bprime | btrace (SO(3)), so4, partition (general N).
        #[arg(long)]
        basis: Option<BasisId>,
        #[arg(long)]
        k: u32,
        #[arg(long, value_enum, default_value = "pretty")]
        format: Format,
    },
    /// Closed-form spectrum, or the exact spectrum of the order-k matrix.
    Spectrum {
        #[arg(long, value_enum)]
        target: TargetArg,
        /// Dimension for the sphere target.
        #[arg(long)]
        n: Option<u32>,
        /// Bound on k (sphere, SO(3)) or on k1 + k2 (SO(4)).
        #[arg(long, conflicts_with = "k", required_unless_present = "k")]
        bound: Option<u32>,
        /// Extract the spectrum of the order-k flag matrix instead.
        #[arg(long)]
        k: Option<u32>,
        #[arg(long, value_enum, default_value = "pretty")]
        format: Format,
    },
    /// Irreducible characters as trace polynomials.
    Characters {
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long, allow_hyphen_values = true)]
        j1: Option<Rational>,
        #[arg(long, allow_hyphen_values = true)]
        j2: Option<Rational>,
        /// Locate every character of degree ≤ k in the order-k eigenspaces.
        #[arg(long = "match")]
        match_all: bool,
        #[arg(long, value_enum, default_value = "pretty")]
        format: Format,
    },
    /// Sampled numerical cross-checks.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long)]
        n: usize,
        /// Degree bound (laplacian, identities) or polynomial degree (gegenbauer).
        #[arg(long)]
        k: Option<u32>,
        /// Check a single partition instead of all of degree ≤ k.
        #[arg(long)]
        partition: Option<Partition>,
        #[arg(long)]
        i: Option<usize>,
        #[arg(long)]
        j: Option<usize>,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        /// Defaults to the TRACELAP_SEED environment variable, then a fixed seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        tol: Option<f64>,
    },
}

/// Failure of a command, mapped onto an exit code.
enum Failure {
    Usage(String),
    Internal(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::IrrationalSpectrum { .. }
            | Error::CharacterMismatch { .. }
            | Error::Coordinates(_)
            | Error::DegenerateSample(_) => Failure::Internal(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type CmdResult = std::result::Result<String, Failure>;

pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
            } else {
                let _ = out.write_all(text.as_bytes());
            }
            return code;
        }
    };
    let (code, text) = match execute(cli.command) {
        Ok(text) => (EXIT_OK, text),
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_USAGE;
        }
        Err(Failure::Internal(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_FAILED;
        }
        Err(Failure::Verification(text)) => {
            let _ = writeln!(err, "verification failed");
            (EXIT_FAILED, text)
        }
    };
    let _ = out.write_all(text.as_bytes());
    code
}

fn mode_of(arg: ModeArg, n: Option<u32>) -> Mode {
    match (arg, n) {
        (ModeArg::Generaln, None) => Mode::Symbolic,
        (ModeArg::Generaln, Some(n)) => Mode::Fixed(n),
        (ModeArg::So3, _) => Mode::SO3,
        (ModeArg::So4, _) => Mode::SO4,
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn unsupported(format: Format, command: &str) -> Failure {
    Failure::Usage(format!("--format {format:?} is not available for `{command}`").to_lowercase())
}

fn execute(command: Command) -> CmdResult {
    match command {
        Command::Lap {
            mode,
            partition,
            poly,
            n,
            format,
        } => cmd_lap(mode, partition, poly, n, format),
        Command::Matrix { mode, basis, k, format } => cmd_matrix(mode, basis, k, format),
        Command::Spectrum {
            target,
            n,
            bound,
            k,
            format,
        } => cmd_spectrum(target, n, bound, k, format),
        Command::Characters {
            mode,
            k,
            j1,
            j2,
            match_all,
            format,
        } => cmd_characters(mode, k, j1, j2, match_all, format),
        Command::Verify {
            suite,
            n,
            k,
            partition,
            i,
            j,
            samples,
            seed,
            tol,
        } => cmd_verify(suite, n, k, partition, i, j, samples, seed, tol),
    }
}

fn cmd_lap(
    mode: ModeArg,
    partition: Option<Partition>,
    poly: Option<String>,
    n: Option<u32>,
    format: Option<Format>,
) -> CmdResult {
    if n.is_some() && mode != ModeArg::Generaln {
        return Err(Failure::Usage("--n applies to --mode generaln only".into()));
    }
    let mode = mode_of(mode, n);
    let input = match (partition, poly) {
        (Some(lambda), _) => TracePoly::p_lambda(lambda, mode),
        (None, Some(text)) => {
            let value: serde_json::Value =
                serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("--poly: {e}")))?;
            TracePoly::from_json(&value, mode)?
        }
        (None, None) => unreachable!("clap requires one input"),
    };
    let result = lap(&input, mode)?;
    let json = serde_json::to_string(&result.to_json()).expect("serializable") + "\n";
    let pretty = result.pretty() + "\n";
    match format {
        None => Ok(pretty + &json),
        Some(Format::Pretty) => Ok(pretty),
        Some(Format::Json) => Ok(json),
        Some(f) => Err(unsupported(f, "lap")),
    }
}

fn cmd_matrix(mode: ModeArg, basis: Option<BasisId>, k: u32, format: Format) -> CmdResult {
    let mode = mode_of(mode, None);
    let basis = basis.unwrap_or_else(|| BasisId::default_for(mode));
    if mode == Mode::Symbolic {
        if basis != BasisId::Partition {
            return Err(Error::UnknownBasis {
                basis: basis.to_string(),
                mode,
            }
            .into());
        }
        let table = build_expression_table(k);
        return match format {
            Format::Pretty => Ok(table.to_pretty()),
            Format::Json => Ok(to_json(&table.to_json())),
            f => Err(unsupported(f, "matrix --mode generaln")),
        };
    }
    let m = build_matrix(mode, basis, k)?;
    Ok(match format {
        Format::Pretty => m.to_pretty(),
        Format::Json => to_json(&m.to_json()),
        Format::Csv => m.to_csv(),
        Format::Latex => m.to_latex(),
    })
}

fn spectrum_pretty(entries: &[SpectrumEntry]) -> String {
    let mut out = String::new();
    let values: Vec<String> = entries.iter().map(|e| e.eigenvalue.to_string()).collect();
    out.push_str(&values.join(", "));
    out.push('\n');
    for e in entries {
        let labels: Vec<String> = e.labels.iter().map(ToString::to_string).collect();
        out.push_str(&format!("{}\t{}", e.eigenvalue, labels.join("; ")));
        if let (Some(a), Some(g)) = (e.algebraic_multiplicity, e.geometric_multiplicity) {
            out.push_str(&format!("\talgebraic={a}\tgeometric={g}"));
        }
        out.push('\n');
    }
    out
}

fn cmd_spectrum(target: TargetArg, n: Option<u32>, bound: Option<u32>, k: Option<u32>, format: Format) -> CmdResult {
    let entries = match (target, k) {
        (TargetArg::Sphere, Some(_)) => {
            return Err(Failure::Usage("--k needs a group target (so3 or so4)".into()))
        }
        (TargetArg::Sphere, None) => {
            let n = n.ok_or_else(|| Failure::Usage("--target sphere requires --n".into()))?;
            if n < 2 {
                return Err(Failure::Usage("--n must be at least 2".into()));
            }
            spectrum_closed(SpectrumTarget::Sphere(n), bound.unwrap_or(0))
        }
        (t, None) => {
            let target = if t == TargetArg::So3 { SpectrumTarget::So3 } else { SpectrumTarget::So4 };
            spectrum_closed(target, bound.unwrap_or(0))
        }
        (t, Some(k)) => {
            let mode = if t == TargetArg::So3 { Mode::SO3 } else { Mode::SO4 };
            eigenvalues_exact(&build_matrix(mode, BasisId::default_for(mode), k)?)?
        }
    };
    match format {
        Format::Pretty => Ok(spectrum_pretty(&entries)),
        Format::Json => Ok(to_json(&entries)),
        f => Err(unsupported(f, "spectrum")),
    }
}

#[derive(Serialize)]
struct CharacterJson {
    name: String,
    eigenvalue: String,
    poly: Vec<crate::tracepoly::TermRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    btrace: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bprime: Option<Vec<String>>,
}

fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn cmd_characters(
    mode: ModeArg,
    k: Option<u32>,
    j1: Option<Rational>,
    j2: Option<Rational>,
    match_all: bool,
    format: Format,
) -> CmdResult {
    if !matches!(format, Format::Pretty | Format::Json) {
        return Err(unsupported(format, "characters"));
    }
    let mode = mode_of(mode, None);
    if match_all {
        let k = k.ok_or_else(|| Failure::Usage("--match requires --k".into()))?;
        if !mode.is_reduced_group() {
            return Err(Failure::Usage("--match needs --mode so3 or so4".into()));
        }
        let m = build_matrix(mode, BasisId::default_for(mode), k)?;
        let report = match_characters(&m)?;
        if format == Format::Json {
            return Ok(to_json(&report));
        }
        let mut out = String::new();
        for e in &report {
            let names: Vec<&str> = e.characters.iter().map(|c| c.name.as_str()).collect();
            out.push_str(&format!(
                "{}\tgeometric={}\t{}{}\n",
                e.eigenvalue,
                e.geometric_multiplicity,
                names.join(", "),
                if e.unexplained { "\tunexplained" } else { "" }
            ));
        }
        return Ok(out);
    }
    let (character, btrace, bprime) = match (mode, k, j1, j2) {
        (Mode::SO3, Some(k), None, None) => {
            let c = character_so3(k)?;
            (c.character, Some(c.btrace), Some(c.bprime))
        }
        (Mode::SO4, None, Some(j1), Some(j2)) => (character_so4(&j1, &j2)?, None, None),
        (Mode::SO3, ..) => return Err(Failure::Usage("--mode so3 takes --k only".into())),
        (Mode::SO4, ..) => return Err(Failure::Usage("--mode so4 takes --j1 and --j2".into())),
        _ => return Err(Failure::Usage("characters need --mode so3 or so4".into())),
    };
    if format == Format::Json {
        return Ok(to_json(&CharacterJson {
            name: character.name(),
            eigenvalue: character.eigenvalue.to_string(),
            poly: character.poly.to_records(),
            btrace: btrace.as_deref().map(strings),
            bprime: bprime.as_deref().map(strings),
        }));
    }
    let mut out = format!("{} = {}\neigenvalue = {}\n", character.name(), character.poly.pretty(), character.eigenvalue);
    if let (Some(t), Some(p)) = (btrace, bprime) {
        out.push_str(&format!("btrace = [{}]\nbprime = [{}]\n", strings(&t).join(", "), strings(&p).join(", ")));
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    suite: Suite,
    n: usize,
    k: Option<u32>,
    partition: Option<Partition>,
    i: Option<usize>,
    j: Option<usize>,
    samples: usize,
    seed: Option<u64>,
    tol: Option<f64>,
) -> CmdResult {
    let seed = seed.unwrap_or_else(numeric::default_seed);
    let tol = tol.unwrap_or(numeric::LAPLACIAN_TOL);
    if !(tol >= 0.0) {
        return Err(Failure::Usage(format!("--tol must be non-negative, got {tol}")));
    }
    let reports: Vec<VerifyReport> = match suite {
        Suite::Laplacian => {
            if n < 2 {
                return Err(Failure::Usage("--n must be at least 2".into()));
            }
            let targets = match (partition, k) {
                (Some(p), _) => vec![p],
                (None, Some(k)) => enumerate_upto(k),
                (None, None) => return Err(Failure::Usage("laplacian suite needs --partition or --k".into())),
            };
            targets
                .iter()
                .map(|p| numeric::verify_partition(n, p, samples, seed, tol))
                .collect::<Result<_, _>>()?
        }
        Suite::Gegenbauer => {
            let k = k.ok_or_else(|| Failure::Usage("gegenbauer suite needs --k".into()))?;
            let positions = match (i, j) {
                (Some(i), Some(j)) => vec![(i, j)],
                (None, None) => vec![(1, 1), (n, 1.max(n / 2))],
                _ => return Err(Failure::Usage("give both --i and --j, or neither".into())),
            };
            positions
                .into_iter()
                .map(|(i, j)| numeric::verify_gegenbauer(n, k, i, j, samples, seed, tol))
                .collect::<Result<_, _>>()?
        }
        Suite::Identities => numeric::verify_identities(n, k.unwrap_or(5), samples, seed)?,
    };
    let text = to_json(&reports);
    if reports.iter().all(|r| r.pass) {
        Ok(text)
    } else {
        Err(Failure::Verification(text))
    }
}
