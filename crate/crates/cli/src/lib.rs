//! Batch front-end for the verifiers in `schwarz-core`: named suites over
//! built-in and seeded random corpora, JSON reports, and a fixed exit-code
//! contract (0 pass, 1 input or configuration error, 2 violation).

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::de::DeserializeOwned;
use serde::Serialize;

use schwarz_core::report::{VerificationReport, Verdict};

mod describe;
mod suites;

pub use describe::describe;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("unknown suite `{0}` (run with --list-suites)")]
    UnknownSuite(String),
    #[error("no suite given: use --suite NAME, --list-suites, or the describe command")]
    MissingSuite,
    #[error("unknown tolerance `{key}` for suite {suite}; accepted: {accepted}")]
    UnknownTolerance { suite: Suite, key: String, accepted: String },
    #[error("malformed tolerance `{0}`: expected KEY=VALUE with a finite positive value")]
    MalformedTolerance(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    /// `message` carries serde's "at line L column C" suffix whenever the
    /// failure has a position; validation failures after parsing do not.
    #[error("{path}: {message}")]
    Parse { path: PathBuf, line: usize, column: usize, message: String },
    #[error("{context}: {source}")]
    Core { context: String, source: schwarz_core::Error },
}

impl CliError {
    pub fn core(context: impl Into<String>, source: schwarz_core::Error) -> Self {
        CliError::Core {
            context: context.into(),
            source,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    SchwarzPick,
    Osserman,
    Loewner,
    BurnsKrantz,
    Chelst,
    HerglotzRoundtrip,
    Cartan,
    Ball,
    Contact,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::SchwarzPick,
        Suite::Osserman,
        Suite::Loewner,
        Suite::BurnsKrantz,
        Suite::Chelst,
        Suite::HerglotzRoundtrip,
        Suite::Cartan,
        Suite::Ball,
        Suite::Contact,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::SchwarzPick => "schwarz-pick",
            Suite::Osserman => "osserman",
            Suite::Loewner => "loewner",
            Suite::BurnsKrantz => "burns-krantz",
            Suite::Chelst => "chelst",
            Suite::HerglotzRoundtrip => "herglotz-roundtrip",
            Suite::Cartan => "cartan",
            Suite::Ball => "ball",
            Suite::Contact => "contact",
        }
    }

    pub fn summary(self) -> &'static str {
        match self {
            Suite::SchwarzPick => "pseudohyperbolic contraction over random Blaschke products and Möbius maps",
            Suite::Osserman => "boundary derivative bound and its interior refinement",
            Suite::Loewner => "arc-length expansion of inner maps fixing the origin",
            Suite::BurnsKrantz => "boundary rigidity classification over a 50-map corpus",
            Suite::Chelst => "boundary uniqueness against a Blaschke product, Hopf and collar checks",
            Suite::HerglotzRoundtrip => "measure → Herglotz function → moments roundtrip and Toeplitz positivity",
            Suite::Cartan => "linear coefficient growth of iterates and the Cauchy-estimate contradiction",
            Suite::Ball => "ball automorphisms and slice-wise rigidity in C²",
            Suite::Contact => "contact order of analytic discs with the sphere",
        }
    }

    /// Tolerance keys accepted by `--tolerance`, with their defaults.
    pub fn tolerance_defaults(self) -> BTreeMap<&'static str, f64> {
        let certify = ("certify", schwarz_core::holomap::CERTIFY_TOL);
        let entries: Vec<(&'static str, f64)> = match self {
            Suite::SchwarzPick | Suite::Osserman | Suite::BurnsKrantz | Suite::Chelst => vec![certify],
            Suite::Loewner => vec![("doubling", 1e-8)],
            Suite::HerglotzRoundtrip => vec![("roundtrip", 1e-8), ("psd", 1e-10), ("delta0", 1e-10)],
            Suite::Cartan => vec![("growth", 1e-12)],
            Suite::Ball => vec![("sphere", 1e-12), ("origin", 1e-12), ("group", 1e-9)],
            Suite::Contact => vec![("contact_bound", 2.1)],
        };
        entries.into_iter().collect()
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| CliError::UnknownSuite(s.to_string()))
    }
}

/// Resolved tolerance set for one run; every key is known to the suite.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Tolerances(BTreeMap<String, f64>);

impl Tolerances {
    pub fn defaults(suite: Suite) -> Self {
        Tolerances(
            suite
                .tolerance_defaults()
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
        )
    }

    /// Applies `KEY=VALUE` overrides, rejecting keys the suite does not use.
    pub fn with_overrides(suite: Suite, overrides: &[(String, f64)]) -> Result<Self, CliError> {
        let mut t = Self::defaults(suite);
        for (key, value) in overrides {
            if !t.0.contains_key(key) {
                return Err(CliError::UnknownTolerance {
                    suite,
                    key: key.clone(),
                    accepted: t.0.keys().cloned().collect::<Vec<_>>().join(", "),
                });
            }
            t.0.insert(key.clone(), *value);
        }
        Ok(t)
    }

    pub fn get(&self, key: &str) -> f64 {
        self.0[key]
    }
}

pub fn parse_tolerance(arg: &str) -> Result<(String, f64), CliError> {
    let malformed = || CliError::MalformedTolerance(arg.to_string());
    let (key, value) = arg.split_once('=').ok_or_else(malformed)?;
    let value: f64 = value.trim().parse().map_err(|_| malformed())?;
    if key.trim().is_empty() || !(value.is_finite() && value > 0.0) {
        return Err(malformed());
    }
    Ok((key.trim().to_string(), value))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub suite: Suite,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub input_path: Option<PathBuf>,
    /// `None` writes the report to standard output.
    pub output_path: Option<PathBuf>,
}

impl SuiteConfig {
    pub fn new(suite: Suite, seed: u64) -> Self {
        SuiteConfig {
            suite,
            seed,
            tolerances: Tolerances::defaults(suite),
            input_path: None,
            output_path: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metadata {
    pub version: &'static str,
    pub suite: Suite,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub input: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub metadata: Metadata,
    pub reports: Vec<VerificationReport>,
}

impl SuiteReport {
    /// A report fails when its verdict is `Violated` or when a built-in
    /// case's recorded expectation was not met.
    pub fn failures(&self) -> impl Iterator<Item = &VerificationReport> {
        self.reports.iter().filter(|r| {
            r.verdict == Verdict::Violated
                || r.detail("expectation_met").and_then(|v| v.as_bool()) == Some(false)
        })
    }

    pub fn exit_code(&self) -> ExitCode {
        if self.failures().next().is_some() {
            ExitCode::Violation
        } else {
            ExitCode::Pass
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize to JSON");
        s.push('\n');
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitCode {
    Pass = 0,
    InputError = 1,
    Violation = 2,
}

/// Parses a JSON file into `T`, keeping line and column of any failure.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_json(path, &text)
}

pub(crate) fn parse_json<T: DeserializeOwned>(path: &Path, text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// Input files hold either a single object or an array of them.
pub(crate) fn read_inputs<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let value: serde_json::Value = parse_json(path, &text)?;
    // Deserialize again from text so that schema errors keep their position.
    if value.is_array() {
        parse_json(path, &text)
    } else {
        parse_json(path, &text).map(|one| vec![one])
    }
}

/// Runs a suite and assembles its report; writing the file is left to the
/// caller so the report can be inspected first.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport, CliError> {
    let reports = suites::run(cfg)?;
    Ok(SuiteReport {
        metadata: Metadata {
            version: env!("CARGO_PKG_VERSION"),
            suite: cfg.suite,
            seed: cfg.seed,
            tolerances: cfg.tolerances.clone(),
            input: cfg.input_path.as_ref().map(|p| p.display().to_string()),
        },
        reports,
    })
}

pub fn write_report(report: &SuiteReport, output: Option<&Path>) -> Result<(), CliError> {
    let json = report.to_json();
    match output {
        Some(path) => std::fs::write(path, json).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            print!("{json}");
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!(matches!("nope".parse::<Suite>(), Err(CliError::UnknownSuite(_))));
    }

    #[test]
    fn tolerance_parsing() {
        assert_eq!(parse_tolerance("certify=10").unwrap(), ("certify".to_string(), 10.0));
        assert!(parse_tolerance("certify").is_err());
        assert!(parse_tolerance("certify=-1").is_err());
        assert!(parse_tolerance("=1").is_err());
        let t = Tolerances::with_overrides(Suite::SchwarzPick, &[("certify".into(), 0.5)]).unwrap();
        assert_eq!(t.get("certify"), 0.5);
        assert!(matches!(
            Tolerances::with_overrides(Suite::SchwarzPick, &[("roundtrip".into(), 0.5)]),
            Err(CliError::UnknownTolerance { .. })
        ));
    }

    #[test]
    fn parse_errors_carry_position() {
        let err = parse_json::<serde_json::Value>(Path::new("x.json"), "{\n  \"kind\": }").unwrap_err();
        match err {
            CliError::Parse { line, column, .. } => {
                assert_eq!(line, 2);
                assert!(column > 0);
            }
            other => panic!("{other:?}"),
        }
    }
}
