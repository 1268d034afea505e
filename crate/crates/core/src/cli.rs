//! Command-line front end: certification runs, diagonal listings, factor
//! enumeration, and the randomized lemma sweep, with JSON or text output.
//!
//! Exit codes: 0 all checks pass, 1 a verification failed, 2 usage or
//! configuration error. JSON goes to stdout and carries a top-level
//! `"schema": "1"`; diagnostics go to stderr. An optional key=value config
//! file can supply any long flag's value; explicit flags win.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::checker::{certify_hopf_ainf, lemma_random_sweep, CertifyReport, RelationReport};
use crate::error::{Error, Result};
use crate::field::Prime;
use crate::hopf::{em_factors_n3, HopfAinfStructure, StructureParams};
use crate::polytope::{
    chain_map_defect, diagonal_k, diagonal_top, tree_chain_map_defect, OrderedPartition, Tree,
};

#[derive(Parser, Debug)]
#[command(
    name = "egamma",
    version,
    about = "Exact checks for a Hopf A-infinity coalgebra over Z_p and for \
             permutahedron/associahedron diagonals"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Key=value file supplying defaults for long flags
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Worker threads for parallel sweeps (0 or absent: all cores)
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Format> {
        match s {
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            other => Err(Error::Config(format!("unknown format {other:?} (expected json|text)"))),
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run the full certification battery on one structure
    Certify {
        /// Odd prime modulus
        #[arg(long)]
        p: Option<u64>,
        /// Degree parameter: the odd generator sits in degree 2m+1
        #[arg(long)]
        m: Option<u64>,
        /// Largest divided-power index swept over
        #[arg(long = "max-j")]
        max_j: Option<u32>,
    },
    /// Print the diagonal of a polytope top cell
    Diagonal {
        /// Polytope family: perm or assoc
        polytope: Option<String>,
        /// Size parameter, 1..=7
        n: Option<u8>,
    },
    /// List tensor factors of the standard decomposition in one odd prime
    Factors {
        /// Odd prime modulus
        #[arg(long)]
        p: Option<u64>,
        /// Number of factors to list
        #[arg(long)]
        count: Option<usize>,
        /// Also run the certification battery on each factor
        #[arg(long)]
        certify: bool,
        /// Largest divided-power index used when certifying
        #[arg(long = "max-j")]
        max_j: Option<u32>,
    },
    /// Randomized sweep of the binomial splitting identity mod p
    Lemma {
        /// Odd prime modulus
        #[arg(long)]
        p: Option<u64>,
        /// Number of random tuples
        #[arg(long)]
        trials: Option<u64>,
        /// RNG seed
        #[arg(long)]
        seed: Option<u64>,
    },
}

/// Flat key=value settings loaded from --config.
#[derive(Default, Debug)]
struct FileConfig(BTreeMap<String, String>);

impl FileConfig {
    fn load(path: &Path) -> Result<FileConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut map = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("{}:{}: expected key=value", path.display(), lineno + 1))
            })?;
            map.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(FileConfig(map))
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match self.0.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse()
                .map(Some)
                .map_err(|e| Error::Config(format!("config key {key}={raw}: {e}"))),
        }
    }

    fn get_bool(&self, key: &str) -> Result<Option<bool>> {
        match self.0.get(key).map(String::as_str) {
            None => Ok(None),
            Some("true") | Some("1") => Ok(Some(true)),
            Some("false") | Some("0") => Ok(Some(false)),
            Some(other) => {
                Err(Error::Config(format!("config key {key}={other}: expected true|false")))
            }
        }
    }
}

/// Entry point used by the binary; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

/// Runs one parsed invocation; Ok(pass) for completed runs, Err for
/// usage/config problems.
pub fn execute(cli: Cli) -> Result<bool> {
    let cfg = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let format = match cli.format {
        Some(f) => f,
        None => cfg.get::<Format>("format")?.unwrap_or(Format::Text),
    };
    let jobs = match cli.jobs {
        Some(j) => Some(j),
        None => cfg.get::<usize>("jobs")?,
    };
    let command = cli.command;
    let body = move || dispatch(command, &cfg, format);
    match jobs {
        Some(j) if j > 0 => rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?
            .install(body),
        _ => body(),
    }
}

fn dispatch(command: Command, cfg: &FileConfig, format: Format) -> Result<bool> {
    match command {
        Command::Certify { p, m, max_j } => {
            let p = Prime::new(pick(p, cfg.get("p")?, 3))?;
            let m = pick(m, cfg.get("m")?, 1);
            let max_j = require_positive("max-j", pick(max_j, cfg.get("max-j")?, 12))?;
            let s = HopfAinfStructure::new(StructureParams::new(p, m)?);
            let report = certify_hopf_ainf(&s, max_j)?;
            emit_certify(&report, format);
            Ok(report.pass)
        }
        Command::Diagonal { polytope, n } => {
            let polytope = polytope
                .or_else(|| cfg.0.get("polytope").cloned())
                .ok_or_else(|| Error::Config("diagonal needs a polytope (perm|assoc)".into()))?;
            let n = match n {
                Some(n) => n,
                None => cfg
                    .get::<u8>("n")?
                    .ok_or_else(|| Error::Config("diagonal needs a size n".into()))?,
            };
            if !(1..=7).contains(&n) {
                return Err(Error::OutOfRange(format!("diagonal size must be 1..=7, got {n}")));
            }
            match polytope.as_str() {
                "perm" => diagonal_perm_report(n, format),
                "assoc" => diagonal_assoc_report(n, format),
                other => {
                    Err(Error::Config(format!("unknown polytope {other:?} (expected perm|assoc)")))
                }
            }
        }
        Command::Factors { p, count, certify, max_j } => {
            let p = Prime::new(pick(p, cfg.get("p")?, 3))?;
            let count = require_positive("count", pick(count, cfg.get("count")?, 1))?;
            let certify = certify || cfg.get_bool("certify")?.unwrap_or(false);
            let max_j = require_positive("max-j", pick(max_j, cfg.get("max-j")?, 6))?;
            factors_report(p, count, certify, max_j, format)
        }
        Command::Lemma { p, trials, seed } => {
            let p = Prime::new(pick(p, cfg.get("p")?, 3))?;
            let trials = require_positive("trials", pick(trials, cfg.get("trials")?, 1000))?;
            let seed = pick(seed, cfg.get("seed")?, 0);
            let report = lemma_random_sweep(p, trials, seed);
            match format {
                Format::Json => print_json(
                    "lemma",
                    serde_json::to_value(&report).expect("serializable report"),
                ),
                Format::Text => {
                    println!(
                        "lemma p={} n={} trials={} seed={}: {}/{} pass",
                        report.p, report.n, report.trials, report.seed, report.passes, report.trials
                    );
                    for f in report.failures.iter().take(5) {
                        println!("  FAIL z={:?} i={}: {} vs {}", f.z, f.i, f.lhs, f.rhs);
                    }
                }
            }
            Ok(report.pass)
        }
    }
}

fn pick<T>(flag: Option<T>, config: Option<T>, default: T) -> T {
    flag.or(config).unwrap_or(default)
}

fn require_positive<T: PartialOrd + Default + std::fmt::Display>(name: &str, v: T) -> Result<T> {
    if v <= T::default() {
        return Err(Error::Config(format!("{name} must be >= 1, got {v}")));
    }
    Ok(v)
}

/// Adds the schema envelope and prints one compact line to stdout.
fn print_json(command: &str, mut value: Value) {
    let obj = value.as_object_mut().expect("reports serialize to objects");
    obj.insert("schema".into(), json!("1"));
    obj.insert("command".into(), json!(command));
    println!("{value}");
}

fn relation_lines(checks: &[RelationReport]) {
    for c in checks {
        let verdict = if c.pass { "pass" } else { "FAIL" };
        let mut line = format!("  {verdict} {} ({} inputs)", c.relation_id, c.inputs_checked);
        if !c.pass {
            line.push_str(&format!(", {} witnesses", c.witnesses.len()));
            if let Some(w) = c.witnesses.first() {
                line.push_str(&format!("; first input {}", w.input));
            }
        }
        println!("{line}");
    }
}

fn emit_certify(report: &CertifyReport, format: Format) {
    match format {
        Format::Json => {
            print_json("certify", serde_json::to_value(report).expect("serializable report"))
        }
        Format::Text => {
            println!("certify p={} m={} max-j={}", report.p, report.m, report.max_j);
            relation_lines(&report.checks);
            println!("overall: {}", if report.pass { "PASS" } else { "FAIL" });
        }
    }
}

fn diagonal_perm_report(n: u8, format: Format) -> Result<bool> {
    let chain = diagonal_top(n)?;
    let certified = chain_map_defect(&OrderedPartition::top(n))?.is_zero();
    match format {
        Format::Json => {
            let terms: Vec<Value> = chain
                .iter()
                .map(|(a, b)| json!({"left": a.to_json(), "right": b.to_json()}))
                .collect();
            print_json(
                "diagonal",
                json!({
                    "polytope": "perm",
                    "n": n,
                    "count": chain.len(),
                    "chain_map_certified": certified,
                    "terms": terms,
                }),
            );
        }
        Format::Text => {
            println!(
                "diagonal perm n={n}: {} terms, chain map {}",
                chain.len(),
                if certified { "certified" } else { "BROKEN" }
            );
            for (a, b) in chain.iter() {
                println!("  {a} (x) {b}");
            }
        }
    }
    Ok(certified)
}

fn diagonal_assoc_report(n: u8, format: Format) -> Result<bool> {
    let chain = diagonal_k(n)?;
    let corolla = Tree::Node((1..=n + 1).map(Tree::Leaf).collect());
    let certified = tree_chain_map_defect(&corolla, n)?.is_zero();
    match format {
        Format::Json => {
            let terms: Vec<Value> = chain
                .iter()
                .map(|(a, b)| {
                    json!({
                        "left": a.to_json(),
                        "left_word": a.word(),
                        "right": b.to_json(),
                        "right_word": b.word(),
                    })
                })
                .collect();
            print_json(
                "diagonal",
                json!({
                    "polytope": "assoc",
                    "n": n,
                    "count": chain.len(),
                    "chain_map_certified": certified,
                    "terms": terms,
                }),
            );
        }
        Format::Text => {
            println!(
                "diagonal assoc n={n} ({} leaves): {} terms, chain map {}",
                n + 1,
                chain.len(),
                if certified { "certified" } else { "BROKEN" }
            );
            for (a, b) in chain.iter() {
                println!("  {} (x) {}", a.word(), b.word());
            }
        }
    }
    Ok(certified)
}

fn factors_report(p: Prime, count: usize, certify: bool, max_j: u32, format: Format) -> Result<bool> {
    let mut pass = true;
    let mut entries = Vec::new();
    for (index, params) in em_factors_n3(p, count)?.into_iter().enumerate() {
        let mut entry = json!({
            "index": index,
            "m": params.m,
            "v_degree": params.deg_v(),
            "w_degree": params.deg_gamma1(),
        });
        let mut cert: Option<CertifyReport> = None;
        if certify {
            let report = certify_hopf_ainf(&HopfAinfStructure::new(params), max_j)?;
            pass &= report.pass;
            entry
                .as_object_mut()
                .expect("object literal")
                .insert("pass".into(), json!(report.pass));
            cert = Some(report);
        }
        entries.push((entry, cert));
    }
    match format {
        Format::Json => {
            let factors: Vec<Value> = entries.iter().map(|(e, _)| e.clone()).collect();
            print_json(
                "factors",
                json!({
                    "p": p.get(),
                    "count": count,
                    "certified": certify,
                    "pass": pass,
                    "factors": factors,
                }),
            );
        }
        Format::Text => {
            println!("factors p={} count={}", p.get(), count);
            for (e, cert) in &entries {
                let mut line = format!(
                    "  m={} |v|={} |w|={}",
                    e["m"], e["v_degree"], e["w_degree"]
                );
                if let Some(report) = cert {
                    line.push_str(if report.pass { ": PASS" } else { ": FAIL" });
                }
                println!("{line}");
            }
            if certify {
                println!("overall: {}", if pass { "PASS" } else { "FAIL" });
            }
        }
    }
    Ok(pass)
}
