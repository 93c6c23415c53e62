//! Command-line front end.
//!
//! ```text
//! classify (--family sl-so --p INT --q INT [--mode twisted|plain-w0|plain-w00] [--compare] | --spec PATH)
//!          [--format table|json] [--limit INT]
//! table --family sl-so --max-n INT [--format table|json]
//! selftest [--suite NAME] [--max-n INT]
//! ```
//!
//! Exit codes: 0 on success, 1 on input or validation errors, 2 when a
//! resource limit is hit.

pub mod report;
pub mod selftest;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::abelian::DEFAULT_LIMIT;
use crate::action::{OrbitOptions, TwistedAction};
use crate::error::{Error, Result};
use crate::families::{self, FamilyKind, FamilySpec, Mode, SlSoFamily, MAX_RANK};
use crate::slice::signature;
use report::{ClassificationReport, Counts, EngineInfo, FamilyInfo, OrbitEntry, TableReport, TableRow};

#[derive(Debug, Parser)]
#[command(name = "real-orbits", version, about = "Classify real orbits via twisted conjugation on torus torsion")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Enumerate the orbits of one action.
    Classify(ClassifyArgs),
    /// Tabulate twisted vs. W00 orbit counts for every (p, q) up to a rank.
    Table(TableArgs),
    /// Run the built-in invariant suites.
    Selftest(SelftestArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    SlSo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Twisted,
    PlainW0,
    PlainW00,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Twisted => Mode::Twisted,
            ModeArg::PlainW0 => Mode::PlainW0,
            ModeArg::PlainW00 => Mode::PlainW00,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
enum Format {
    #[default]
    Table,
    Json,
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    #[arg(long, value_enum, conflicts_with = "spec", requires_all = ["p", "q"])]
    family: Option<FamilyArg>,
    #[arg(long = "p")]
    p: Option<usize>,
    #[arg(long = "q")]
    q: Option<usize>,
    #[arg(long, value_enum, default_value = "twisted")]
    mode: ModeArg,
    /// Also report the plain W0 (and, for sl-so, W00) orbit counts.
    #[arg(long)]
    compare: bool,
    /// JSON spec file describing a custom action.
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
    /// Maximum number of states to enumerate.
    #[arg(long)]
    limit: Option<usize>,
}

#[derive(Debug, Args)]
struct TableArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long)]
    max_n: usize,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
}

#[derive(Debug, Args)]
struct SelftestArgs {
    /// Run a single suite.
    #[arg(long)]
    suite: Option<String>,
    #[arg(long, default_value_t = 12)]
    max_n: usize,
    /// Zero the block-crossing twist in the sl-so family (fault injection).
    #[arg(long, hide = true)]
    inject_fault: bool,
}

/// Parses `args` (including the program name) and runs the command, writing
/// results to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let result = match cli.command {
        Command::Classify(args) => classify(&args).map(|text| (text, 0)),
        Command::Table(args) => table(&args).map(|text| (text, 0)),
        Command::Selftest(args) => selftest_cmd(&args),
    };
    match result {
        Ok((text, code)) => {
            let _ = write!(out, "{text}");
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn orbit_count(action: &TwistedAction, opts: &OrbitOptions) -> Result<usize> {
    let opts = OrbitOptions {
        keep_members: false,
        ..opts.clone()
    };
    Ok(action.orbits_with(&opts)?.len())
}

/// Runs `classify` and returns the rendered report.
fn classify(args: &ClassifyArgs) -> Result<String> {
    let mode: Mode = args.mode.into();
    let spec = match (&args.spec, args.family, args.p, args.q) {
        (Some(path), None, _, _) => FamilySpec {
            kind: FamilyKind::Custom(path.clone()),
            mode,
        },
        (None, Some(FamilyArg::SlSo), Some(p), Some(q)) => FamilySpec::sl_so(p, q, mode),
        _ => {
            return Err(Error::InvalidFamily(
                "give either --spec PATH or --family sl-so --p INT --q INT".into(),
            ))
        }
    };
    let report = classify_report(&spec, args.compare, args.limit.unwrap_or(DEFAULT_LIMIT))?;
    Ok(match args.format {
        Format::Table => report.to_table(),
        Format::Json => report.to_json() + "\n",
    })
}

/// Builds the classification report for a family.
pub fn classify_report(spec: &FamilySpec, compare: bool, limit: usize) -> Result<ClassificationReport> {
    let action = spec.build()?;
    let opts = OrbitOptions {
        limit,
        ..OrbitOptions::default()
    };
    let started = Instant::now();
    let orbits = action.orbits_with(&opts)?;
    let runtime_ms = started.elapsed().as_secs_f64() * 1e3;

    let (sl_so, p, q) = match spec.kind {
        FamilyKind::SlSo { p, q } => (Some(SlSoFamily::new(p, q)?), Some(p), Some(q)),
        FamilyKind::Custom(_) => (None, None, None),
    };
    let twisted_sl_so = sl_so.as_ref().filter(|_| spec.mode == Mode::Twisted);

    let mut entries = Vec::with_capacity(orbits.len());
    for orbit in orbits.orbits() {
        let rep = orbit.representative();
        let mut entry = OrbitEntry {
            representative: rep.coords().to_vec(),
            sign_string: sl_so.as_ref().map(|_| SlSoFamily::sign_string(rep)),
            size: orbit.size(),
            canonical_form: None,
            canonical_name: None,
            signature: None,
        };
        if let Some(fam) = twisted_sl_so {
            let hits: Vec<(usize, _)> = fam
                .canonical_forms()
                .iter()
                .enumerate()
                .filter(|(_, c)| orbit.contains(c) == Some(true))
                .collect();
            if let [(index, form)] = hits[..] {
                entry.canonical_form = Some(form.coords().to_vec());
                entry.canonical_name = Some(canonical_name(fam.p(), index));
            } else {
                return Err(Error::Internal(format!(
                    "orbit of {rep} contains {} canonical forms",
                    hits.len()
                )));
            }
            entry.signature = Some(signature(rep, fam.p(), fam.q())?);
        }
        entries.push(entry);
    }

    let mut counts = Counts::default();
    counts.set(spec.mode, orbits.len());
    if compare {
        let modes: &[Mode] = match spec.kind {
            FamilyKind::SlSo { .. } => &[Mode::Twisted, Mode::PlainW0, Mode::PlainW00],
            FamilyKind::Custom(_) => &[Mode::Twisted, Mode::PlainW0],
        };
        for &m in modes {
            if counts.get(m).is_none() {
                let other = FamilySpec {
                    kind: spec.kind.clone(),
                    mode: m,
                };
                counts.set(m, orbit_count(&other.build()?, &opts)?);
            }
        }
    }

    Ok(ClassificationReport {
        schema_version: report::SCHEMA_VERSION.into(),
        family: FamilyInfo {
            description: action.description().to_string(),
            kind: if sl_so.is_some() { "sl-so" } else { "custom" }.into(),
            p,
            q,
            fingerprint: orbits.fingerprint().to_string(),
        },
        mode: spec.mode,
        orbits: entries,
        counts,
        engine: EngineInfo {
            engine: "bfs".into(),
            state_count: orbits.state_count(),
            runtime_ms,
        },
    })
}

/// `s_k` / `s'_k` name of the `index`-th canonical form.
fn canonical_name(p: usize, index: usize) -> String {
    let unprimed = p / 2 + 1;
    if index < unprimed {
        format!("s_{index}")
    } else {
        format!("s'_{}", index - unprimed + 1)
    }
}

/// Counts for every `(p, q)` with `p, q >= 1` and `p + q <= max_n`, ordered
/// by `n` then `p`.
pub fn table_report(max_n: usize) -> Result<TableReport> {
    if max_n > MAX_RANK {
        return Err(Error::RankLimit {
            rank: max_n,
            limit: MAX_RANK,
        });
    }
    let opts = OrbitOptions::default();
    let mut rows = Vec::new();
    for n in 2..=max_n {
        for p in 1..n {
            let q = n - p;
            let twisted = orbit_count(&families::build_sl_so(p, q)?, &opts)?;
            let plain_w0 = orbit_count(&families::build_plain_w0(p, q)?, &opts)?;
            let plain_w00 = orbit_count(&families::build_plain_w00(p, q)?, &opts)?;
            rows.push(TableRow {
                p,
                q,
                n,
                twisted,
                plain_w0,
                plain_w00,
                matches: twisted == plain_w00,
            });
        }
    }
    Ok(TableReport {
        schema_version: report::SCHEMA_VERSION.into(),
        family: "sl-so".into(),
        max_n,
        rows,
    })
}

fn table(args: &TableArgs) -> Result<String> {
    let FamilyArg::SlSo = args.family;
    let report = table_report(args.max_n)?;
    Ok(match args.format {
        Format::Table => report.to_table(),
        Format::Json => report.to_json() + "\n",
    })
}

fn selftest_cmd(args: &SelftestArgs) -> Result<(String, i32)> {
    let config = selftest::SelftestConfig {
        max_n: args.max_n,
        inject_fault: args.inject_fault,
    };
    let names: Vec<&str> = match &args.suite {
        Some(name) => {
            let known = selftest::SUITES.iter().find(|s| **s == name.as_str()).ok_or_else(|| {
                Error::InvalidFamily(format!(
                    "unknown suite {name:?}; available: {}",
                    selftest::SUITES.join(", ")
                ))
            })?;
            vec![*known]
        }
        None => selftest::SUITES.to_vec(),
    };
    let mut out = String::new();
    let mut all_ok = true;
    for name in names {
        let result = selftest::run_suite(name, &config)?;
        all_ok &= result.passed();
        out.push_str(&result.summary());
    }
    out.push_str(if all_ok { "selftest: ok\n" } else { "selftest: FAILED\n" });
    Ok((out, if all_ok { 0 } else { 1 }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("real-orbits").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn canonical_names() {
        assert_eq!(canonical_name(2, 0), "s_0");
        assert_eq!(canonical_name(2, 1), "s_1");
        assert_eq!(canonical_name(2, 2), "s'_1");
        assert_eq!(canonical_name(1, 1), "s'_1");
    }

    #[test]
    fn usage_errors_exit_1() {
        assert_eq!(run_capture(&["classify", "--p", "x"]).0, 1);
        assert_eq!(run_capture(&["classify"]).0, 1);
        assert_eq!(run_capture(&["bogus"]).0, 1);
        assert_eq!(run_capture(&["--help"]).0, 0);
    }

    #[test]
    fn limit_exits_2() {
        let (code, _, err) = run_capture(&["classify", "--family", "sl-so", "--p", "3", "--q", "3", "--limit", "8"]);
        assert_eq!(code, 2, "{err}");
        assert_eq!(run_capture(&["table", "--family", "sl-so", "--max-n", "30"]).0, 2);
    }

    #[test]
    fn unknown_suite_is_an_input_error() {
        assert_eq!(run_capture(&["selftest", "--suite", "nope"]).0, 1);
    }
}
