use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;

use morse_orbits::analysis::{analyze, check_properties, AnalysisError, AnalysisOptions};
use morse_orbits::corpus::random_field;
use morse_orbits::io::{declared_codomain, parse_field_for, parse_mesh, IoError};
use morse_orbits::plmorse::{Codomain, ScalarField};
use morse_orbits::reeb::build_reeb;
use morse_orbits::report::Report;
use morse_orbits::surface::TriSurface;

#[derive(Parser)]
#[command(name = "morse-orbits", version, about = "Reeb graphs and orbit homotopy types of PL Morse maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum CodomainArg {
    Real,
    Circle,
}

#[derive(clap::Args)]
struct Input {
    /// Mesh file (OFF or JSON).
    #[arg(long)]
    mesh: PathBuf,
    /// Field file, one exact value per vertex.
    #[arg(long)]
    field: PathBuf,
    /// Overrides a `# codomain:` line in the field file.
    #[arg(long, value_enum)]
    codomain: Option<CodomainArg>,
}

#[derive(Subcommand)]
enum Command {
    /// Full report for one surface and field.
    Analyze {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Skip the twist-independence computation.
        #[arg(long)]
        no_homology: bool,
    },
    /// The Reeb graph only.
    Reeb {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value = "dot")]
        format: Format,
    },
    /// Property checks over every mesh/field pair in a directory, plus
    /// random fields seeded from MORSE_ORBITS_SEED.
    Check {
        dir: PathBuf,
        /// Random fields per mesh.
        #[arg(long, default_value_t = 8)]
        random: u64,
        #[arg(long)]
        no_homology: bool,
    },
}

fn read(path: &Path) -> Result<String, AnalysisError> {
    std::fs::read_to_string(path)
        .map_err(|e| AnalysisError::Io(IoError::Parse { line: 0, message: format!("{}: {e}", path.display()) }))
}

fn load(input: &Input) -> Result<(TriSurface, ScalarField), AnalysisError> {
    let s = parse_mesh(&read(&input.mesh)?)?;
    let text = read(&input.field)?;
    let codomain = match input.codomain {
        Some(CodomainArg::Real) => Codomain::Real,
        Some(CodomainArg::Circle) => Codomain::Circle,
        None => declared_codomain(&text).unwrap_or(Codomain::Real),
    };
    let f = parse_field_for(&text, codomain, &s)?;
    Ok((s, f))
}

fn error_object(e: &AnalysisError) -> String {
    json!({ "error": { "kind": e.kind(), "code": e.code(), "message": e.to_string() } }).to_string()
}

fn run(cli: Cli) -> Result<String, AnalysisError> {
    match cli.command {
        Command::Analyze { input, format, no_homology } => {
            let (s, f) = load(&input)?;
            let opts = AnalysisOptions { homology: !no_homology, ..Default::default() };
            let a = analyze(&s, &f, opts)?;
            Ok(match format {
                Format::Json => Report::from_analysis(&a).to_json(),
                Format::Text => Report::from_analysis(&a).to_text(),
                Format::Dot => a.graph.to_dot(),
            })
        }
        Command::Reeb { input, format } => {
            let (s, f) = load(&input)?;
            let md = morse_orbits::plmorse::validate_morse(&s, &f)?;
            let g = build_reeb(&s, &f, &md)?;
            Ok(match format {
                Format::Dot => g.to_dot(),
                Format::Json => serde_json::to_string_pretty(&g).expect("graph serializes"),
                Format::Text => {
                    let mut out = String::new();
                    for (i, n) in g.nodes.iter().enumerate() {
                        out.push_str(&format!("node {i} {} level {}\n", n.kind.symbol(), n.level));
                    }
                    for (i, e) in g.edges.iter().enumerate() {
                        let kind = if e.internal { "internal" } else { "external" };
                        out.push_str(&format!("edge {i} {} -> {} {kind}\n", e.lower, e.upper));
                    }
                    out
                }
            })
        }
        Command::Check { dir, random, no_homology } => check(&dir, random, !no_homology),
    }
}

/// Mesh files in `dir` paired with `<stem>*.field` files.
fn corpus_pairs(dir: &Path) -> Result<Vec<(PathBuf, Vec<PathBuf>)>, AnalysisError> {
    let entries = std::fs::read_dir(dir)
        .map_err(|e| AnalysisError::Io(IoError::Parse { line: 0, message: format!("{}: {e}", dir.display()) }))?;
    let mut files: Vec<PathBuf> = entries.filter_map(|e| e.ok().map(|e| e.path())).collect();
    files.sort();
    let mut pairs = Vec::new();
    for mesh in files.iter().filter(|p| p.extension().is_some_and(|x| x == "off")) {
        let stem = mesh.file_stem().unwrap_or_default().to_string_lossy().to_string();
        let fields = files
            .iter()
            .filter(|p| {
                p.extension().is_some_and(|x| x == "field")
                    && p.file_name().unwrap_or_default().to_string_lossy().starts_with(&format!("{stem}."))
            })
            .cloned()
            .collect();
        pairs.push((mesh.clone(), fields));
    }
    Ok(pairs)
}

fn check(dir: &Path, random: u64, homology: bool) -> Result<String, AnalysisError> {
    let seed: u64 = std::env::var("MORSE_ORBITS_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(0);
    let opts = AnalysisOptions { homology, ..Default::default() };
    let pairs = corpus_pairs(dir)?;
    let mut jobs: Vec<(String, TriSurface, ScalarField)> = Vec::new();
    for (mesh, fields) in &pairs {
        let s = parse_mesh(&read(mesh)?)?;
        for field in fields {
            let text = read(field)?;
            let codomain = declared_codomain(&text).unwrap_or(Codomain::Real);
            jobs.push((field.display().to_string(), s.clone(), parse_field_for(&text, codomain, &s)?));
        }
        for k in 0..random {
            let f = random_field(&s, seed.wrapping_add(k));
            jobs.push((format!("{}#seed={}", mesh.display(), seed.wrapping_add(k)), s.clone(), f));
        }
    }
    let results: Vec<serde_json::Value> = jobs
        .par_iter()
        .map(|(name, s, f)| match analyze(s, f, opts) {
            Ok(a) => json!({ "case": name, "status": "checked", "violations": check_properties(&a) }),
            // random fields may be degenerate; those are skipped, not failed
            Err(e) if name.contains("#seed=") => json!({ "case": name, "status": "skipped", "reason": e.to_string() }),
            Err(e) => json!({ "case": name, "status": "error", "violations": [e.to_string()] }),
        })
        .collect();
    let failures: Vec<&serde_json::Value> =
        results.iter().filter(|r| r["violations"].as_array().is_some_and(|v| !v.is_empty())).collect();
    let checked = results.iter().filter(|r| r["status"] == "checked").count();
    let summary = json!({
        "seed": seed,
        "cases": results.len(),
        "checked": checked,
        "failures": failures,
    });
    if failures.is_empty() {
        Ok(serde_json::to_string_pretty(&summary).expect("summary serializes"))
    } else {
        println!("{}", serde_json::to_string_pretty(&summary).expect("summary serializes"));
        std::process::exit(9);
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            if !out.ends_with('\n') {
                println!();
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            println!("{}", error_object(&e));
            ExitCode::from(e.code() as u8)
        }
    }
}
