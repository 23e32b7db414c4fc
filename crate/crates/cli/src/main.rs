//! `twists`: search for and verify twists of genus-0 modular curves.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use twists_core::cohomology::Route;
use twists_core::pipeline::{
    ingest_fixture, records_from_json, search, selftest, verify, CurveFixture, SearchConfig, DEFAULT_PRECISION,
};
use twists_core::solver::{aut_group, level_bound};
use twists_core::{CycloField, Error, SubfieldSpec};

#[derive(Parser)]
#[command(name = "twists", version, about = "Twists of genus-0 modular curves over cyclotomic subfields")]
struct Cli {
    /// Depth of the q-expansion check on fixtures.
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION)]
    precision: i64,
    /// Seed for randomized self-test instances.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum RouteArg {
    Conic,
    Norm,
    Auto,
}

impl From<RouteArg> for Route {
    fn from(r: RouteArg) -> Route {
        match r {
            RouteArg::Conic => Route::Conic,
            RouteArg::Norm => Route::Norm,
            RouteArg::Auto => Route::Auto,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Automorphism group of a fixture's covering map.
    Autgroup {
        fixture: PathBuf,
        /// Conductor of the field of definition (default: the fixture level).
        #[arg(long)]
        ambient: Option<u64>,
    },
    /// Enumerate and trivialize cocycles over the subfields of the level.
    Search {
        fixture: PathBuf,
        /// Generators of the subgroup fixing K, comma separated, mod the sweep level.
        #[arg(long)]
        subfield: Option<String>,
        #[arg(long, value_enum, default_value_t = RouteArg::Auto)]
        route: RouteArg,
        /// Candidate budget for the norm and conic searches.
        #[arg(long, default_value_t = 300)]
        budget: usize,
        /// Write the records here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check twist records against their fixtures.
    Verify {
        records: PathBuf,
        #[arg(long)]
        fixtures: PathBuf,
    },
    /// Run internal consistency checks.
    Selftest {
        #[arg(long, default_value = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures"))]
        fixtures: PathBuf,
    },
}

/// Exit 2: bad input; exit 1: a check or computation failed.
enum Failure {
    Usage(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Schema(_) | Error::Io(_) | Error::NotAUnit { .. } | Error::NotASubfield { .. } => Failure::Usage(e.to_string()),
            other => Failure::Check(other.to_string()),
        }
    }
}

fn load_fixture(path: &Path, precision: i64) -> Result<CurveFixture, Failure> {
    ingest_fixture(path, precision).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_fixture_dir(dir: &Path, precision: i64) -> Result<BTreeMap<String, CurveFixture>, Failure> {
    let rd = std::fs::read_dir(dir).map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))?;
    let mut paths: Vec<PathBuf> = rd
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    paths.sort();
    let mut out = BTreeMap::new();
    for p in paths {
        let f = load_fixture(&p, precision)?;
        out.insert(f.label.clone(), f);
    }
    Ok(out)
}

fn parse_subfield(spec: &str, level: u64) -> Result<SubfieldSpec, Failure> {
    let gens = spec
        .split(',')
        .map(|s| s.trim().parse::<u64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Failure::Usage(format!("bad --subfield {spec:?}: {e}")))?;
    Ok(SubfieldSpec::new(level, &gens)?)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Autgroup { fixture, ambient } => {
            let f = load_fixture(&fixture, cli.precision)?;
            let m = ambient.unwrap_or_else(|| f.level());
            if m % f.level() != 0 {
                return Err(Failure::Usage(format!("ambient {m} is not a multiple of the level {}", f.level())));
            }
            let aut = aut_group(&f.pi_gamma.embed(m)?, &CycloField::get(m))?;
            let b = level_bound(&aut, f.p).b;
            if cli.json {
                let elems: Vec<_> = aut.iter().map(|g| g.to_json()).collect();
                println!("{}", json!({ "fixture": f.label, "ambient": m, "order": aut.len(), "bound": b, "elements": elems }));
            } else {
                println!("{} over K_{m}: |Aut| = {}, b = {b}", f.label, aut.len());
                for g in &aut {
                    println!("  {g:?}");
                }
            }
            Ok(())
        }
        Command::Search { fixture, subfield, route, budget, out } => {
            let f = load_fixture(&fixture, cli.precision)?;
            let level = twists_core::pipeline::sweep_level(&f);
            let subfield = subfield.map(|s| parse_subfield(&s, level)).transpose()?;
            let config = SearchConfig { route: route.into(), budget, subfield };
            let report = search(&f, &config)?;
            let text = serde_json::to_string_pretty(&report.to_json()).expect("serializable") + "\n";
            match out {
                Some(path) => {
                    std::fs::write(&path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
                    if !cli.json {
                        eprintln!("{}: {} records written to {}", f.label, report.records.len(), path.display());
                    }
                }
                None => print!("{text}"),
            }
            Ok(())
        }
        Command::Verify { records, fixtures } => {
            let fixtures = load_fixture_dir(&fixtures, cli.precision)?;
            let text = std::fs::read_to_string(&records).map_err(|e| Failure::Usage(format!("{}: {e}", records.display())))?;
            let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", records.display())))?;
            let rows = records_from_json(&value)?;
            let report = verify(&rows, &fixtures);
            if cli.json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.to_text());
            }
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::Check("verification failed".into()))
            }
        }
        Command::Selftest { fixtures } => {
            let results = selftest(&fixtures, cli.precision, cli.seed);
            if cli.json {
                println!("{}", serde_json::to_value(&results).expect("serializable"));
            } else {
                for r in &results {
                    println!("{} {}: {}", if r.pass { "PASS" } else { "FAIL" }, r.name, r.detail);
                }
            }
            if results.iter().all(|r| r.pass) {
                Ok(())
            } else {
                Err(Failure::Check("self-test failed".into()))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
