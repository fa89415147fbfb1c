//! Command-line front end. The binary is a thin wrapper over [`main_with_args`].
//!
//! Exit codes: 0 success, 1 verdict failures or counterexamples, 2 usage or
//! configuration errors, 3 catalog errors.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::{load_catalog, reference_catalog, validate_catalog, Catalog};
use crate::certify::{Domain, OracleReport, RayDomain};
use crate::cylinder::{all_cases, oracle_case, CylinderVerdict};
use crate::diagnostic::Severity;
use crate::report::{catalog_markdown, family_markdown, family_reports, to_json, CatalogReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CATALOG: i32 = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilySelector {
    All,
    List(Vec<u32>),
}

impl FromStr for FamilySelector {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.trim() == "all" {
            return Ok(FamilySelector::All);
        }
        s.split(',')
            .map(|p| p.trim().parse::<u32>().map_err(|e| format!("bad family {p:?}: {e}")))
            .collect::<Result<Vec<_>, _>>()
            .map(FamilySelector::List)
    }
}

/// Inclusive `a..b` (or `a..=b`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleRange {
    pub start: i64,
    pub end: i64,
}

impl FromStr for OracleRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s.split_once("..").ok_or_else(|| format!("expected a..b, got {s:?}"))?;
        let b = b.strip_prefix('=').unwrap_or(b);
        let start = a.trim().parse::<i64>().map_err(|e| e.to_string())?;
        let end = b.trim().parse::<i64>().map_err(|e| e.to_string())?;
        if start > end {
            return Err(format!("empty range {s:?}"));
        }
        Ok(OracleRange { start, end })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    #[value(alias = "markdown")]
    Md,
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Load the catalog and run every consistency check.
    Validate,
    /// Stability and cylinder verdicts for the selected families.
    Family {
        /// `k`, `k,k,...` or `all`; overrides `--family`.
        selector: Option<FamilySelector>,
    },
    /// Every family on its applicable ray.
    Report,
    /// Brute-force sweep of every ledger case.
    Oracle,
}

#[derive(Debug, Parser)]
#[command(name = "delpezzo", version, about = "Exact certificates for weighted del Pezzo families")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Catalog JSON file (default: the embedded reference catalog).
    #[arg(long, global = true, env = "DELPEZZO_CATALOG")]
    pub catalog: Option<PathBuf>,
    /// `all`, a number, or a comma-separated list
    #[arg(long, global = true)]
    pub family: Option<FamilySelector>,
    /// A single concrete n.
    #[arg(long, global = true, conflicts_with = "ray")]
    pub n: Option<i64>,
    /// Certify on the ray n >= RAY.
    #[arg(long, global = true)]
    pub ray: Option<i64>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long = "oracle-range", global = true, default_value = "3..1000")]
    pub oracle_range: OracleRange,
    /// Output path, or `stdout`.
    #[arg(long, global = true)]
    pub out: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Each family's applicable ray.
    Applicable,
    Ray(RayDomain),
    Point(i64),
}

impl Mode {
    fn domain(self) -> Option<Domain> {
        match self {
            Mode::Applicable => None,
            Mode::Ray(r) => Some(Domain::Ray(r)),
            Mode::Point(n) => Some(Domain::Point(n)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub command: Command,
    pub families: FamilySelector,
    pub mode: Mode,
    pub format: Format,
    pub oracle_range: OracleRange,
    pub out: Option<PathBuf>,
    pub catalog: Option<PathBuf>,
}

impl From<Cli> for RunConfig {
    fn from(c: Cli) -> Self {
        let families = match &c.command {
            Command::Family { selector: Some(s) } => s.clone(),
            _ => c.family.clone().unwrap_or(FamilySelector::All),
        };
        let mode = match (c.n, c.ray) {
            (Some(n), _) => Mode::Point(n),
            (None, Some(r)) => Mode::Ray(RayDomain::new(r)),
            (None, None) => Mode::Applicable,
        };
        RunConfig {
            command: c.command,
            families,
            mode,
            format: c.format,
            oracle_range: c.oracle_range,
            out: c.out.filter(|o| o != "stdout" && o != "-").map(PathBuf::from),
            catalog: c.catalog,
        }
    }
}

/// Result of a run: the exit code and the rendered artifact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub output: String,
}

impl Outcome {
    fn new(code: i32, output: String) -> Self {
        Self { code, output }
    }
}

fn load(config: &RunConfig) -> Result<std::borrow::Cow<'static, Catalog>, Outcome> {
    let Some(path) = &config.catalog else {
        return Ok(std::borrow::Cow::Borrowed(reference_catalog()));
    };
    let file = std::fs::File::open(path)
        .map_err(|e| Outcome::new(EXIT_CATALOG, format!("cannot open {}: {e}\n", path.display())))?;
    load_catalog(std::io::BufReader::new(file))
        .map(std::borrow::Cow::Owned)
        .map_err(|e| Outcome::new(EXIT_CATALOG, format!("{}: {e}\n", path.display())))
}

fn selected(catalog: &Catalog, sel: &FamilySelector) -> Result<Vec<u32>, Outcome> {
    match sel {
        FamilySelector::All => Ok(catalog.families.keys().copied().collect()),
        FamilySelector::List(v) => {
            if let Some(bad) = v.iter().find(|k| catalog.family(**k).is_none()) {
                return Err(Outcome::new(EXIT_USAGE, format!("no family {bad} in the catalog\n")));
            }
            let mut v = v.clone();
            v.sort_unstable();
            v.dedup();
            Ok(v)
        }
    }
}

fn check_mode(catalog: &Catalog, families: &[u32], mode: Mode) -> Result<(), Outcome> {
    let n = match mode {
        Mode::Point(n) => n,
        Mode::Ray(r) => r.n0,
        Mode::Applicable => return Ok(()),
    };
    for no in families {
        let f = catalog.family(*no).expect("selected families exist");
        if n < f.ray.n0 {
            return Err(Outcome::new(
                EXIT_USAGE,
                format!("n = {n} is below family {no}'s ray n >= {}\n", f.ray.n0),
            ));
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct OracleRow {
    family: u32,
    case: String,
    #[serde(flatten)]
    report: OracleReport,
}

fn run_validate(catalog: &Catalog, format: Format) -> Outcome {
    let diags = validate_catalog(catalog);
    let failed = diags.iter().any(|d| d.severity == Severity::Error);
    let output = match format {
        Format::Json => to_json(&diags),
        Format::Md => {
            let mut s = format!("# Validation: {} diagnostics\n\n", diags.len());
            for d in &diags {
                let _ = writeln!(s, "- {d}");
            }
            s
        }
    };
    Outcome::new(if failed { EXIT_FAILED } else { EXIT_OK }, output)
}

fn run_reports(catalog: &Catalog, families: &[u32], config: &RunConfig, whole: bool) -> Outcome {
    let report = CatalogReport {
        families: family_reports(catalog, families, config.mode.domain()),
    };
    let failed = report
        .families
        .iter()
        .any(|r| matches!(r.cylinder, CylinderVerdict::NotCertified { .. }));
    let output = match config.format {
        Format::Json => to_json(&report),
        Format::Md if whole => catalog_markdown(&report),
        Format::Md => report.families.iter().map(family_markdown).collect(),
    };
    Outcome::new(if failed { EXIT_FAILED } else { EXIT_OK }, output)
}

fn run_oracle(catalog: &Catalog, families: &[u32], config: &RunConfig) -> Outcome {
    let range = config.oracle_range.start..=config.oracle_range.end;
    let rows: Vec<Result<Vec<OracleRow>, String>> = families
        .par_iter()
        .filter_map(|no| catalog.family(*no))
        .filter(|f| f.ledger.is_some())
        .map(|f| {
            let cases = all_cases(f).map_err(|e| e.to_string())?;
            Ok(cases
                .iter()
                .map(|c| OracleRow {
                    family: f.no,
                    case: c.id.clone(),
                    report: oracle_case(c, range.clone()),
                })
                .collect())
        })
        .collect();
    let mut all = Vec::new();
    let mut errors = Vec::new();
    for r in rows {
        match r {
            Ok(v) => all.extend(v),
            Err(e) => errors.push(e),
        }
    }
    let dirty = all.iter().any(|r| !r.report.counterexamples.is_empty()) || !errors.is_empty();
    let output = match config.format {
        Format::Json => to_json(&serde_json::json!({ "rows": all, "errors": errors })),
        Format::Md => {
            let mut s = format!(
                "# Oracle sweep over [{}, {}]\n\n| No. | case | checked | counterexamples | poles |\n|---|---|---|---|---|\n",
                config.oracle_range.start, config.oracle_range.end
            );
            for r in &all {
                let _ = writeln!(
                    s,
                    "| {} | {} | {} | {:?} | {:?} |",
                    r.family, r.case, r.report.checked, r.report.counterexamples, r.report.poles
                );
            }
            for e in &errors {
                let _ = writeln!(s, "\nerror: {e}");
            }
            s
        }
    };
    Outcome::new(if dirty { EXIT_FAILED } else { EXIT_OK }, output)
}

/// Runs a command without touching stdout or the output path.
pub fn execute(config: &RunConfig) -> Outcome {
    let catalog = match load(config) {
        Ok(c) => c,
        Err(o) => return o,
    };
    if config.command == Command::Validate {
        return run_validate(&catalog, config.format);
    }
    let families = match &config.command {
        Command::Report => catalog.families.keys().copied().collect(),
        _ => match selected(&catalog, &config.families) {
            Ok(v) => v,
            Err(o) => return o,
        },
    };
    if let Err(o) = check_mode(&catalog, &families, config.mode) {
        return o;
    }
    match config.command {
        Command::Family { .. } => run_reports(&catalog, &families, config, false),
        Command::Report => run_reports(&catalog, &families, config, true),
        Command::Oracle => run_oracle(&catalog, &families, config),
        Command::Validate => unreachable!(),
    }
}

/// Runs and writes the artifact to `--out` or stdout; returns the exit code.
pub fn run(config: &RunConfig) -> i32 {
    let outcome = execute(config);
    let text = &outcome.output;
    match &config.out {
        Some(path) if outcome.code != EXIT_CATALOG && outcome.code != EXIT_USAGE => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("cannot write {}: {e}", path.display());
                return EXIT_USAGE;
            }
        }
        _ if outcome.code == EXIT_CATALOG || outcome.code == EXIT_USAGE => eprint!("{text}"),
        _ => print!("{text}"),
    }
    outcome.code
}

pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli.into()),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(args: &[&str]) -> RunConfig {
        let mut v = vec!["delpezzo"];
        v.extend_from_slice(args);
        Cli::try_parse_from(v).unwrap().into()
    }

    #[test]
    fn selectors() {
        assert_eq!("all".parse::<FamilySelector>(), Ok(FamilySelector::All));
        assert_eq!("3,1".parse::<FamilySelector>(), Ok(FamilySelector::List(vec![3, 1])));
        assert!("x".parse::<FamilySelector>().is_err());
        assert_eq!("3..10".parse::<OracleRange>(), Ok(OracleRange { start: 3, end: 10 }));
        assert_eq!("3..=10".parse::<OracleRange>(), Ok(OracleRange { start: 3, end: 10 }));
        assert!("10..3".parse::<OracleRange>().is_err());
    }

    #[test]
    fn n_and_ray_conflict() {
        assert!(Cli::try_parse_from(["delpezzo", "family", "1", "--n", "3", "--ray", "3"]).is_err());
    }

    #[test]
    fn family_positional_wins() {
        let c = config(&["--family", "5", "family", "22", "--ray", "3"]);
        assert_eq!(c.families, FamilySelector::List(vec![22]));
        assert_eq!(c.mode, Mode::Ray(RayDomain::new(3)));
    }

    #[test]
    fn family_22_headline() {
        let o = execute(&config(&["family", "22", "--ray", "3", "--format", "json"]));
        assert_eq!(o.code, EXIT_OK);
        assert!(o.output.contains("\"no_cylinder_certified\""), "{}", &o.output[..400]);
        assert!(o.output.contains("\"k_unstable\""));
    }

    #[test]
    fn family_1_at_two() {
        let o = execute(&config(&["family", "1", "--n", "2"]));
        assert_eq!(o.code, EXIT_FAILED);
        assert!(o.output.contains("not_certified"));
    }

    #[test]
    fn unknown_family_is_usage() {
        assert_eq!(execute(&config(&["family", "36"])).code, EXIT_USAGE);
    }

    #[test]
    fn missing_catalog() {
        let o = execute(&config(&["validate", "--catalog", "/nonexistent/catalog.json"]));
        assert_eq!(o.code, EXIT_CATALOG);
    }
}
