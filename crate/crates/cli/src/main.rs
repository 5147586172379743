//! `delpezzo`: verify cylinder constructions, enumerate lattice classes,
//! classify configurations and decide cylinder existence.
//!
//! Exit codes: 0 success, 1 a check or classification failed, 2 malformed
//! input or arguments.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use delpezzo::blowup::build_model;
use delpezzo::classify::{decide_cylinder, Answer};
use delpezzo::constructions::{
    classify_surface, verify_entry_with, ConstructionEntry, VerificationReport, VerifyOptions,
};
use delpezzo::dynkin::{CombinedPrimeRule, SingularityType};
use delpezzo::entry_file::{parse_classify_config, parse_entry};
use delpezzo::lattice::{enumerate_minus1, enumerate_roots, MAX_ENUMERATION_BLOWUPS};
use delpezzo::negcurves::neg_curve_graph;
use delpezzo::{fixtures, Error};

#[derive(Parser)]
#[command(name = "delpezzo", version, about = "Weak del Pezzo surfaces and anticanonical polar cylinders")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    /// Read `all` fixtures from this directory instead of the built-in set.
    #[arg(long, global = true)]
    fixtures_dir: Option<PathBuf>,
    /// Require a single (-1)-curve meeting both the central vertex and an A1
    /// vertex for the combined primed types; `false` accepts separate curves.
    #[arg(long, global = true, default_value_t = true, action = clap::ArgAction::Set)]
    strict_prime: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Minus1,
    Roots,
}

#[derive(Subcommand)]
enum Command {
    /// Verify entry files, or `all` shipped entries.
    Verify {
        #[arg(required = true)]
        paths: Vec<String>,
    },
    /// List the (-1)-classes or roots of the n-fold blow-up.
    Enumerate {
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=MAX_ENUMERATION_BLOWUPS as i64))]
        n: u8,
        #[arg(long, value_enum)]
        kind: Kind,
    },
    /// Decide whether a surface of this degree and type has a cylinder.
    Decide { degree: u32, r#type: String },
    /// Singularity type of the surface described by a configuration file.
    Classify { path: PathBuf },
    /// Verification and verdict summary for every shipped entry.
    Report,
}

/// Failure carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }

    fn check(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let rule = if cli.strict_prime { CombinedPrimeRule::Strict } else { CombinedPrimeRule::Lenient };
    let result = match &cli.command {
        Command::Verify { paths } => cmd_verify(&cli, paths, rule),
        Command::Enumerate { n, kind } => cmd_enumerate(&cli, *n as usize, *kind),
        Command::Decide { degree, r#type } => cmd_decide(&cli, *degree, r#type),
        Command::Classify { path } => cmd_classify(&cli, path, rule),
        Command::Report => cmd_report(&cli, rule),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("report values serialize"));
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load_entry(path: &Path) -> Result<ConstructionEntry, Failure> {
    parse_entry(&read(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

/// Entries named `all`, or one entry per path.
fn collect_entries(cli: &Cli, paths: &[String]) -> Result<Vec<ConstructionEntry>, Failure> {
    let mut entries = Vec::new();
    for p in paths {
        if p == "all" {
            entries.extend(all_entries(cli)?);
        } else {
            entries.push(resolve(p)?);
        }
    }
    Ok(entries)
}

fn all_entries(cli: &Cli) -> Result<Vec<ConstructionEntry>, Failure> {
    match &cli.fixtures_dir {
        None => fixtures::shipped().map_err(|e| Failure::input(e.to_string())),
        Some(dir) => {
            let listing = fs::read_dir(dir).map_err(|e| Failure::input(format!("{}: {e}", dir.display())))?;
            let mut files: Vec<PathBuf> = listing
                .filter_map(|d| d.ok().map(|d| d.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "toml"))
                .collect();
            files.sort();
            files.iter().map(|f| load_entry(f)).collect()
        }
    }
}

/// A path as given, with `.toml` appended, or the name of a shipped entry.
fn resolve(p: &str) -> Result<ConstructionEntry, Failure> {
    let path = PathBuf::from(p);
    if path.is_file() {
        return load_entry(&path);
    }
    let with_ext = PathBuf::from(format!("{p}.toml"));
    if with_ext.is_file() {
        return load_entry(&with_ext);
    }
    match fixtures::find(p) {
        Some(parsed) => parsed.map_err(|e| Failure::input(e.to_string())),
        None => Err(Failure::input(format!("{p}: no such file or shipped entry"))),
    }
}

fn verify_all(entries: &[ConstructionEntry], rule: CombinedPrimeRule) -> Result<Vec<VerificationReport>, Failure> {
    let options = VerifyOptions { prime_rule: rule };
    entries
        .par_iter()
        .map(|e| verify_entry_with(e, options))
        .collect::<Result<Vec<_>, Error>>()
        .map_err(|e| Failure::input(e.to_string()))
}

fn cmd_verify(cli: &Cli, paths: &[String], rule: CombinedPrimeRule) -> Result<u8, Failure> {
    let entries = collect_entries(cli, paths)?;
    let reports = verify_all(&entries, rule)?;
    let passed = reports.iter().filter(|r| r.passed).count();
    match cli.format {
        Format::Structured => print_json(&reports),
        Format::Text => {
            for r in &reports {
                print!("{r}");
            }
            println!("{} entries, {passed} passed, {} failed", reports.len(), reports.len() - passed);
        }
    }
    Ok(if passed == reports.len() { 0 } else { 1 })
}

#[derive(Serialize)]
struct Enumeration {
    kind: &'static str,
    n: usize,
    count: usize,
    classes: Vec<String>,
}

fn cmd_enumerate(cli: &Cli, n: usize, kind: Kind) -> Result<u8, Failure> {
    let (name, classes) = match kind {
        Kind::Minus1 => ("minus1", enumerate_minus1(n)),
        Kind::Roots => ("roots", enumerate_roots(n)),
    };
    let classes = classes.map_err(|e| Failure::input(e.to_string()))?;
    let lines: Vec<String> = classes.iter().map(|c| c.to_string()).collect();
    match cli.format {
        Format::Structured => print_json(&Enumeration { kind: name, n, count: lines.len(), classes: lines }),
        Format::Text => {
            for l in &lines {
                println!("{l}");
            }
            println!("count: {}", lines.len());
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct Decision {
    degree: u32,
    r#type: String,
    answer: Answer,
    basis: String,
}

fn cmd_decide(cli: &Cli, degree: u32, type_text: &str) -> Result<u8, Failure> {
    let verdict = SingularityType::parse(type_text, degree)
        .and_then(|t| decide_cylinder(degree, &t).map(|v| (t, v)))
        .map_err(|e| Failure::input(e.to_string()))?;
    let (t, v) = verdict;
    match cli.format {
        Format::Structured => print_json(&Decision { degree, r#type: t.to_string(), answer: v.answer, basis: v.basis }),
        Format::Text => println!("{v}"),
    }
    Ok(0)
}

#[derive(Serialize)]
struct Classification {
    r#type: String,
    degree: String,
    minus2: Vec<String>,
    edges: Vec<(String, String)>,
    minus1: Vec<Minus1Summary>,
}

#[derive(Serialize)]
struct Minus1Summary {
    curve: String,
    meets: Vec<String>,
}

fn cmd_classify(cli: &Cli, path: &Path, rule: CombinedPrimeRule) -> Result<u8, Failure> {
    let config = parse_classify_config(&read(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let diagnose = |e: Error| Failure::check(format!("{}: {e}", path.display()));
    let model = build_model(&config.curves, &config.points).map_err(diagnose)?;
    let surface = model.contract(&config.contraction).map_err(diagnose)?;
    let k2 = surface.degree();
    if !k2.is_integer() || !(1..=9).contains(&k2.to_integer()) {
        return Err(Failure::check(format!("{}: K^2 = {k2} is not a del Pezzo degree", path.display())));
    }
    let degree = k2.to_integer() as u32;
    let ty = classify_surface(&surface, degree, rule).map_err(diagnose)?;
    let graph = neg_curve_graph(&surface).map_err(diagnose)?;

    let label = |i: usize| graph.vertices()[i].label.clone();
    let roots: Vec<usize> = graph.minus2().collect();
    let mut edges = Vec::new();
    for (a, &i) in roots.iter().enumerate() {
        for &j in &roots[a + 1..] {
            if graph.weight(i, j) == 1 {
                edges.push((label(i), label(j)));
            }
        }
    }
    let minus1: Vec<Minus1Summary> = graph
        .minus1()
        .map(|u| Minus1Summary {
            curve: label(u),
            meets: roots.iter().filter(|&&r| graph.weight(u, r) > 0).map(|&r| label(r)).collect(),
        })
        .collect();

    let summary = Classification {
        r#type: ty.to_string(),
        degree: degree.to_string(),
        minus2: roots.iter().map(|&i| label(i)).collect(),
        edges,
        minus1,
    };
    match cli.format {
        Format::Structured => print_json(&summary),
        Format::Text => {
            println!("{}", summary.r#type);
            println!("degree: {}", summary.degree);
            println!("(-2)-curves: {}", join_or_none(&summary.minus2));
            let edges: Vec<String> = summary.edges.iter().map(|(a, b)| format!("{a}-{b}")).collect();
            println!("edges: {}", join_or_none(&edges));
            println!("(-1)-curves: {}", summary.minus1.len());
            for m in summary.minus1.iter().filter(|m| !m.meets.is_empty()) {
                println!("  {} meets {}", m.curve, m.meets.join(", "));
            }
        }
    }
    Ok(0)
}

fn join_or_none(items: &[String]) -> String {
    if items.is_empty() {
        "none".into()
    } else {
        items.join(", ")
    }
}

#[derive(Serialize)]
struct ReportRow {
    name: String,
    degree: u32,
    r#type: String,
    verdict: Answer,
    basis: String,
    checks_passed: usize,
    checks_total: usize,
    passed: bool,
}

fn cmd_report(cli: &Cli, rule: CombinedPrimeRule) -> Result<u8, Failure> {
    let entries = all_entries(cli)?;
    let reports = verify_all(&entries, rule)?;
    let mut rows = Vec::new();
    for (e, r) in entries.iter().zip(&reports) {
        let verdict = decide_cylinder(e.degree, &e.expected_type).map_err(|err| Failure::input(err.to_string()))?;
        rows.push(ReportRow {
            name: e.name.clone(),
            degree: e.degree,
            r#type: e.expected_type.to_string(),
            verdict: verdict.answer,
            basis: verdict.basis,
            checks_passed: r.checks.iter().filter(|c| c.passed).count(),
            checks_total: r.checks.len(),
            passed: r.passed,
        });
    }
    let consistent = rows.iter().all(|r| r.verdict == Answer::HasCylinder);
    match cli.format {
        Format::Structured => print_json(&rows),
        Format::Text => {
            println!("{:<10} {:>6}  {:<8} {:<12} {:>6}  result", "entry", "degree", "type", "verdict", "checks");
            for r in &rows {
                println!(
                    "{:<10} {:>6}  {:<8} {:<12} {:>3}/{:<2}  {}",
                    r.name,
                    r.degree,
                    r.r#type,
                    r.verdict.to_string(),
                    r.checks_passed,
                    r.checks_total,
                    if r.passed { "pass" } else { "FAIL" }
                );
            }
            println!("verdicts consistent with the entries: {}", if consistent { "yes" } else { "no" });
        }
    }
    Ok(if rows.iter().all(|r| r.passed) && consistent { 0 } else { 1 })
}
