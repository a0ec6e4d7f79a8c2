//! Command-line front end: argument parsing, dispatch and report
//! serialization. `main.rs` only forwards the process arguments to [`run`].

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use lehmer_core::bernoulli::{bernoulli_number, bernoulli_poly, special_value};
use lehmer_core::fermat::fermat_quotient;
use lehmer_core::sums::{half_harmonic, lehmer_sum, lemma2_sum};
use lehmer_core::verifier::{self, counterexample_search, parse_class, verify_checked};
use lehmer_core::{
    BernoulliCache, CongruenceReport, Error, ExactRational, Filter, IdentityId, Params,
    ScanOptions,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

const IDENTITY_HELP: &str = "\
Identity codes:
  lehmer-half   half harmonic sum mod p^2, p prime >= 3
  cai           half harmonic sum over gcd(r, n) = 1 mod n^2, n odd
  lehmer-p3     sum 1/(p - 3r) mod p^2, p prime >= 5
  lehmer-p4     sum 1/(p - 4r) mod p^2, p prime >= 5
  lehmer-p6     sum 1/(p - 6r) mod p^2, p prime >= 5
  thm3          sum 1/(n - 3r) over gcd(r, n) = 1 mod n^2, gcd(n, 6) = 1
  thm4          sum 1/(n - 4r) over gcd(r, n) = 1 mod n^2, gcd(n, 6) = 1
  thm6          sum 1/(n - 6r) over gcd(r, n) = 1 mod n^2, gcd(n, 6) = 1
  lemma1        phi(p^a) = p^a B_phi(p^2a) mod p^2a, p odd prime (--p, --alpha)
  lemma2        localized sum mod p^2a for p^a || n (--n, --p, --d)
  lemma3        q_{n^2}(a) = q_n(a) - n q_n(a)^2 / 2 mod n^2 (--n, --a)
  lemma4        localization of 2 q_n(a) - n q_n(a)^2 at p (--n, --a, --p)
  moebius       Moebius rearrangement of the step-d sum mod p^2a (--n, --p, --d)

In scans, prime-modulus identities and lemma1 read n as p; lemma2, lemma4
and moebius without --p produce one report per prime divisor of n.

Exit status: 0 when every checked congruence holds or the command is a pure
computation, 1 on a failed congruence, an error, or an exhausted
counterexample search, 2 on a usage error.";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Verify,
    Scan,
    Counterexample,
    Bernoulli,
    Fq,
    Sum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    #[default]
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "lehmer", version, about = "Verify Lehmer-type congruences modulo n^2", after_help = IDENTITY_HELP)]
struct Cli {
    command: Command,
    #[arg(long)]
    identity: Option<String>,
    #[arg(long, conflicts_with_all = ["from", "to"])]
    n: Option<u64>,
    #[arg(long, requires = "to")]
    from: Option<u64>,
    #[arg(long)]
    to: Option<u64>,
    #[arg(long, allow_hyphen_values = true)]
    a: Option<i64>,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    d: Option<u64>,
    #[arg(long)]
    alpha: Option<u32>,
    /// Bernoulli index.
    #[arg(long)]
    m: Option<usize>,
    /// Evaluate the Bernoulli polynomial at this rational, e.g. 1/3.
    #[arg(long, allow_hyphen_values = true)]
    x: Option<String>,
    /// Residue class such as "4/6" (n = 4 mod 6); restricts scans and
    /// counterexample searches.
    #[arg(long)]
    class: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    workers: u64,
    #[arg(long, env = "CONGRUENCE_BERNOULLI_CAP", default_value_t = lehmer_core::bernoulli::DEFAULT_CAP as u64,
          value_parser = clap::value_parser!(u64).range(1..))]
    bernoulli_cap: u64,
    /// Recheck every report through exact rational arithmetic.
    #[arg(long)]
    exact_oracle: bool,
    /// JSON-lines file of expected reports; any mismatch exits with 1.
    #[arg(long)]
    expect: Option<PathBuf>,
}

/// A parsed invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub identity: Option<IdentityId>,
    pub range: (u64, u64),
    pub params: Params,
    pub m: Option<usize>,
    pub x: Option<ExactRational>,
    pub class: Option<Filter>,
    pub output_format: Format,
    pub bernoulli_cap: usize,
    pub workers: usize,
    pub exact_oracle: bool,
    pub expect: Option<PathBuf>,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Run(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Run(e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

impl RunConfig {
    pub fn parse_from<I, T>(argv: I) -> Result<RunConfig, clap::Error>
    where
        I: IntoIterator<Item = T>,
        T: Into<OsString> + Clone,
    {
        let cli = Cli::try_parse_from(argv)?;
        RunConfig::from_cli(cli).map_err(|msg| {
            clap::Error::raw(clap::error::ErrorKind::ValueValidation, format!("{msg}\n"))
        })
    }

    fn from_cli(cli: Cli) -> Result<RunConfig, String> {
        let identity = cli
            .identity
            .as_deref()
            .map(|code| IdentityId::from_code(code, cli.d))
            .transpose()?;
        let range = match (cli.n, cli.from, cli.to) {
            (Some(n), _, _) => (n, n),
            (None, Some(from), Some(to)) => (from, to),
            (None, None, Some(to)) => (1, to),
            _ => (0, 0),
        };
        if range.0 > range.1 {
            return Err(format!("--from {} exceeds --to {}", range.0, range.1));
        }
        let x = cli
            .x
            .as_deref()
            .map(|s| s.trim().parse::<ExactRational>().map_err(|e| format!("--x {s}: {e}")))
            .transpose()?;
        let class = cli
            .class
            .as_deref()
            .map(|s| parse_class(s).ok_or_else(|| format!("--class {s}: expected r/m")))
            .transpose()?;
        Ok(RunConfig {
            command: cli.command,
            identity,
            range,
            params: Params {
                n: cli.n,
                a: cli.a,
                p: cli.p,
                d: cli.d,
                alpha: cli.alpha,
            },
            m: cli.m,
            x,
            class,
            output_format: cli.format,
            bernoulli_cap: usize::try_from(cli.bernoulli_cap).map_err(|e| e.to_string())?,
            workers: usize::try_from(cli.workers).map_err(|e| e.to_string())?,
            exact_oracle: cli.exact_oracle,
            expect: cli.expect,
        })
    }
}

/// Runs one invocation, writing reports to `out` and diagnostics to `err`.
/// Returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(rendered.as_bytes())
            } else {
                err.write_all(rendered.as_bytes())
            };
            return if code == 0 { EXIT_OK } else { EXIT_USAGE };
        }
    };
    match execute(&config, out) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Run(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_FAILED
        }
    }
}

fn execute(config: &RunConfig, out: &mut dyn Write) -> Result<i32, Failure> {
    let cache = BernoulliCache::new(config.bernoulli_cap);
    match config.command {
        Command::Verify => {
            let identity = need_identity(config)?;
            let params = verify_params(identity, &config.params)?;
            let report = verify_checked(identity, &params, &cache, config.exact_oracle)?;
            emit_reports(config, std::slice::from_ref(&report), out)
        }
        Command::Scan => {
            let identity = need_identity(config)?;
            if config.params.n.is_none() && config.range == (0, 0) {
                return Err(usage("scan needs --from and --to (or --n)"));
            }
            needs_a(identity, &config.params)?;
            let base = Params {
                n: None,
                ..config.params.clone()
            };
            let filter = config
                .class
                .unwrap_or_else(|| Filter::default_for(identity, &base));
            let options = ScanOptions {
                workers: config.workers,
                exact_oracle: config.exact_oracle,
            };
            let reports = verifier::scan(
                identity,
                config.range.0,
                config.range.1,
                filter,
                &base,
                &cache,
                options,
            )?;
            emit_reports(config, &reports, out)
        }
        Command::Counterexample => {
            let identity = need_identity(config)?;
            if !matches!(identity, IdentityId::Thm3 | IdentityId::Thm4 | IdentityId::Thm6) {
                return Err(usage("counterexample takes --identity thm3, thm4 or thm6"));
            }
            let class = config.class.unwrap_or(Filter::All);
            let bound = if config.range == (0, 0) { 1000 } else { config.range.1 };
            let found = counterexample_search(identity, class, bound)?;
            emit_reports(config, std::slice::from_ref(&found.report), out)?;
            Ok(EXIT_OK)
        }
        Command::Bernoulli => {
            let m = config.m.ok_or_else(|| usage("bernoulli needs --m"))?;
            let value = match (&config.x, config.params.d) {
                (Some(_), Some(_)) => return Err(usage("--x and --d are exclusive")),
                (Some(x), None) => bernoulli_poly(m, x, &cache)?,
                (None, Some(d)) => special_value(d, m, &cache)?,
                (None, None) => bernoulli_number(m, &cache)?,
            };
            let mut fields = BTreeMap::new();
            fields.insert("m", m.to_string());
            if let Some(x) = &config.x {
                fields.insert("x", x.to_string());
            }
            if let Some(d) = config.params.d {
                fields.insert("d", d.to_string());
            }
            emit_value(config, fields, value.to_string(), out)
        }
        Command::Fq => {
            let n = config.params.n.ok_or_else(|| usage("fq needs --n"))?;
            let a = config.params.a.ok_or_else(|| usage("fq needs --a"))?;
            let q = fermat_quotient(n, a)?;
            let fields = BTreeMap::from([("n", n.to_string()), ("a", a.to_string())]);
            emit_value(config, fields, q.value.to_string(), out)
        }
        Command::Sum => {
            let n = config.params.n.ok_or_else(|| usage("sum needs --n"))?;
            let residue = match (config.params.d, config.params.p) {
                (None, None) => half_harmonic(n)?,
                (None, Some(_)) => return Err(usage("sum with --p needs --d")),
                (Some(d), None) => lehmer_sum(n, d)?,
                (Some(d), Some(p)) => lemma2_sum(n, p, d)?,
            };
            let mut fields = BTreeMap::from([("n", n.to_string())]);
            if let Some(d) = config.params.d {
                fields.insert("d", d.to_string());
            }
            if let Some(p) = config.params.p {
                fields.insert("p", p.to_string());
            }
            fields.insert("modulus", residue.modulus().to_string());
            emit_value(config, fields, residue.rep().to_string(), out)
        }
    }
}

fn need_identity(config: &RunConfig) -> Result<IdentityId, Failure> {
    config.identity.ok_or_else(|| usage("--identity is required"))
}

fn needs_a(identity: IdentityId, params: &Params) -> Result<(), Failure> {
    if matches!(identity, IdentityId::Lemma3 | IdentityId::Lemma4) && params.a.is_none() {
        return Err(usage(format!("{identity} needs --a")));
    }
    Ok(())
}

/// For a single verification, `--n` stands in for `p` where the identity is
/// stated for a prime.
fn verify_params(identity: IdentityId, params: &Params) -> Result<Params, Failure> {
    use IdentityId::*;
    needs_a(identity, params)?;
    let mut params = params.clone();
    if matches!(identity, LehmerHalf | LehmerP3 | LehmerP4 | LehmerP6 | Lemma1) {
        if params.p.is_none() {
            params.p = params.n;
        }
        params.n = None;
        if params.p.is_none() {
            return Err(usage(format!("{identity} needs --p")));
        }
    } else if params.n.is_none() {
        return Err(usage(format!("{identity} needs --n")));
    }
    Ok(params)
}

fn emit_reports(
    config: &RunConfig,
    reports: &[CongruenceReport],
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    if config.output_format == Format::Csv {
        out.write_all(csv_header().as_bytes())?;
    }
    if config.output_format == Format::Text {
        out.write_all(text_table(reports).as_bytes())?;
    } else {
        for r in reports {
            out.write_all(serialize_report(r, config.output_format).as_bytes())?;
        }
    }
    let mut status = if reports.iter().any(CongruenceReport::failed) {
        EXIT_FAILED
    } else {
        EXIT_OK
    };
    if let Some(path) = &config.expect {
        if !matches_expected(path, reports)? {
            status = EXIT_FAILED;
        }
    }
    Ok(status)
}

/// Compares reports against a JSON-lines fixture, one record per line.
fn matches_expected(path: &PathBuf, reports: &[CongruenceReport]) -> Result<bool, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("--expect {}: {e}", path.display())))?;
    let expected: Vec<CongruenceReport> = text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(serde_json::from_str)
        .collect::<Result<_, _>>()
        .map_err(|e| usage(format!("--expect {}: {e}", path.display())))?;
    Ok(expected == reports)
}

fn emit_value(
    config: &RunConfig,
    fields: BTreeMap<&str, String>,
    value: String,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    match config.output_format {
        Format::Text => writeln!(out, "{value}")?,
        Format::Json => {
            let mut obj = serde_json::Map::new();
            for (k, v) in fields {
                obj.insert(k.to_string(), v.into());
            }
            obj.insert("value".into(), value.into());
            writeln!(out, "{}", serde_json::Value::Object(obj))?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let keys: Vec<&str> = fields.keys().copied().chain(["value"]).collect();
            let vals: Vec<&str> = fields.values().map(String::as_str).chain([value.as_str()]).collect();
            w.write_record(&keys).and_then(|_| w.write_record(&vals)).map_err(csv_err)?;
            out.write_all(&w.into_inner().map_err(|e| Failure::Run(e.to_string()))?)?;
        }
    }
    Ok(EXIT_OK)
}

fn csv_err(e: csv::Error) -> Failure {
    Failure::Run(e.to_string())
}

const COLUMNS: [&str; 9] = [
    "identity",
    "params",
    "modulus",
    "lhs",
    "rhs",
    "holds",
    "valuation",
    "required",
    "skipped_reason",
];

pub fn csv_header() -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(COLUMNS).expect("in-memory write");
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

/// The report's fields in [`COLUMNS`] order, as text.
fn columns(report: &CongruenceReport) -> [String; 9] {
    let v = serde_json::to_value(report).expect("reports serialize");
    let field = |k: &str| match v.get(k) {
        None | Some(serde_json::Value::Null) => String::new(),
        Some(serde_json::Value::String(s)) => s.clone(),
        Some(other) => other.to_string(),
    };
    let params = report.params.to_string().replace(' ', ";");
    [
        field("identity"),
        params,
        field("modulus"),
        field("lhs"),
        field("rhs"),
        field("holds"),
        field("valuation"),
        field("required"),
        field("skipped_reason"),
    ]
}

/// One report as a JSON line or a CSV row (without header), newline
/// terminated. Text output is a table; see [`text_table`].
pub fn serialize_report(report: &CongruenceReport, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string(report).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(columns(report)).expect("in-memory write");
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
        }
        Format::Text => text_table(std::slice::from_ref(report)),
    }
}

/// Reports as aligned rows: identity, params, modulus, both sides, verdict.
pub fn text_table(reports: &[CongruenceReport]) -> String {
    let rows: Vec<[String; 6]> = reports
        .iter()
        .map(|r| {
            let verdict = match (&r.skipped_reason, r.holds) {
                (Some(reason), _) => format!("skipped: {reason}"),
                (None, true) => "holds".to_string(),
                (None, false) => "FAILS".to_string(),
            };
            let verdict = match &r.padic {
                Some(v) => format!("{verdict} (v = {}, need {})", v.valuation, v.required),
                None => verdict,
            };
            let side = |s: &Option<lehmer_core::Residue>| {
                s.as_ref().map_or("-".to_string(), |x| x.rep().to_string())
            };
            [
                r.identity.code().to_string(),
                r.params.to_string(),
                format!("mod {}", r.modulus),
                side(&r.lhs),
                side(&r.rhs),
                verdict,
            ]
        })
        .collect();
    let mut widths = [0usize; 5];
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row.iter()) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut s = String::new();
    for row in rows {
        let _ = writeln!(
            s,
            "{:<w0$}  {:<w1$}  {:<w2$}  lhs {:>w3$}  rhs {:>w4$}  {}",
            row[0],
            row[1],
            row[2],
            row[3],
            row[4],
            row[5],
            w0 = widths[0],
            w1 = widths[1],
            w2 = widths[2],
            w3 = widths[3],
            w4 = widths[4],
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("lehmer").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn config_parses() {
        let c = RunConfig::parse_from(["lehmer", "scan", "--identity", "lemma2", "--d", "4", "--from", "5", "--to", "9"])
            .unwrap();
        assert_eq!(c.identity, Some(IdentityId::Lemma2D4));
        assert_eq!(c.range, (5, 9));
        assert_eq!(c.bernoulli_cap, 600);
        assert_eq!(c.output_format, Format::Text);
        assert!(RunConfig::parse_from(["lehmer", "scan", "--from", "9", "--to", "5"]).is_err());
        assert!(RunConfig::parse_from(["lehmer", "scan", "--n", "9", "--to", "5"]).is_err());
        assert!(RunConfig::parse_from(["lehmer", "frobnicate"]).is_err());
        assert!(RunConfig::parse_from(["lehmer", "verify", "--identity", "thm5"]).is_err());
        assert!(RunConfig::parse_from(["lehmer", "verify", "--workers", "0"]).is_err());
    }

    #[test]
    fn negative_a_parses() {
        let c = RunConfig::parse_from(["lehmer", "fq", "--n", "5", "--a", "-2"]).unwrap();
        assert_eq!(c.params.a, Some(-2));
    }

    #[test]
    fn pure_computations() {
        assert_eq!(run_str(&["bernoulli", "--m", "0"]), (0, "1\n".into(), String::new()));
        assert_eq!(run_str(&["bernoulli", "--m", "20"]).1, "-174611/330\n");
        assert_eq!(run_str(&["bernoulli", "--m", "2", "--x", "1/3"]).1, "-1/18\n");
        assert_eq!(run_str(&["fq", "--n", "9", "--a", "2"]).1, "7\n");
        assert_eq!(run_str(&["sum", "--n", "5", "--d", "3"]).1, "13\n");
        assert_eq!(
            run_str(&["fq", "--n", "5", "--a", "2", "--format", "json"]).1,
            "{\"a\":\"2\",\"n\":\"5\",\"value\":\"3\"}\n"
        );
        assert_eq!(run_str(&["fq", "--n", "6", "--a", "2"]).0, EXIT_FAILED);
    }

    #[test]
    fn text_rows_align() {
        let (code, out, _) = run_str(&["scan", "--identity", "thm3", "--from", "5", "--to", "13"]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines.len(), 4);
        let at = |l: &str| l.find("lhs").unwrap();
        assert!(lines.iter().all(|l| at(l) == at(lines[0])));
    }

    #[test]
    fn cap_from_flag() {
        let (code, _, err) = run_str(&["verify", "--identity", "lemma1", "--p", "5", "--bernoulli-cap", "10"]);
        assert_eq!(code, EXIT_FAILED);
        assert!(err.contains("20"), "{err}");
    }
}
