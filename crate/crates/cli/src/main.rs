mod report;
mod target;

use std::collections::HashMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use serde_json::Value;
use supermagic::json;
use supermagic::models::{cartan_matrix, el53_target, search_el53_cartan, signed_matrix, GeneratorPair, SearchOutcome};
use supermagic::structconst::SuperAlgebra;
use supermagic::Field;

use report::{builtin_generators, parse_checks, verify, VerificationReport, SEARCH_BUDGET};
use target::{load, Kind, Target};

#[derive(Parser)]
#[command(name = "supermagic", version, about = "GF(p) workbench for modular Lie superalgebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the structure constants of a model as JSON.
    Build {
        name: String,
        #[arg(long, default_value_t = 3)]
        p: u32,
        /// Output file; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run verification checks on a model or a JSON document.
    Verify {
        name: String,
        #[arg(long, default_value_t = 3)]
        p: u32,
        /// Comma-separated subset of axioms,jacobi,form,simple,maximal,derivations,cartan,dims.
        #[arg(long)]
        checks: String,
        /// Also write the report as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Build and check entries of the supermagic square.
    Square {
        #[arg(long, requires = "right", conflicts_with = "all")]
        left: Option<String>,
        #[arg(long, requires = "left")]
        right: Option<String>,
        /// All 21 unordered pairs.
        #[arg(long)]
        all: bool,
        #[arg(long, default_value_t = 3)]
        p: u32,
        #[arg(long, default_value = "dims")]
        checks: String,
    },
    /// Cartan matrix from built-in or supplied generators.
    Cartan {
        name: String,
        #[arg(long, default_value_t = 3)]
        p: u32,
        /// JSON file `{"pairs": [{"e": ..., "f": ...}, ...]}`; each element is
        /// a coordinate array or an object mapping basis labels to integers.
        #[arg(long)]
        generators: Option<PathBuf>,
    },
}

fn write_output(path: Option<&PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, format!("{text}\n")).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            match writeln!(out, "{text}") {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                r => r.context("writing to stdout"),
            }
        }
    }
}

fn cmd_build(name: &str, p: u32, out: Option<&PathBuf>) -> Result<u8> {
    let t = load(name, p)?;
    let text = json::to_string(&json::algebra_document(&t.name, &t.algebra))?;
    write_output(out, &text)?;
    if let Some(path) = out {
        eprintln!("wrote {} ({} basis elements) to {}", t.name, t.algebra.dim(), path.display());
    }
    Ok(0)
}

fn print_report(r: &VerificationReport) {
    println!("{r}");
}

fn cmd_verify(name: &str, p: u32, checks: &str, json_out: Option<&PathBuf>) -> Result<u8> {
    let checks = parse_checks(checks)?;
    let t = load(name, p)?;
    let r = verify(&t, &checks);
    print_report(&r);
    if let Some(path) = json_out {
        let text = serde_json::to_string_pretty(&r.to_json())?;
        std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(r.exit_status())
}

fn cmd_square(left: Option<&str>, right: Option<&str>, all: bool, p: u32, checks: &str) -> Result<u8> {
    let checks = parse_checks(checks)?;
    let names = supermagic::models::SQUARE_NAMES;
    let pairs: Vec<(String, String)> = match (left, right, all) {
        (Some(l), Some(r), false) => vec![(l.to_string(), r.to_string())],
        (None, None, true) => names
            .iter()
            .enumerate()
            .flat_map(|(i, a)| names[i..].iter().map(move |b| (a.to_string(), b.to_string())))
            .collect(),
        _ => bail!("pass either --left and --right, or --all"),
    };
    let mut status = 0;
    for (l, r) in pairs {
        let t = load(&target::square_name(&l, &r), p)?;
        let rep = verify(&t, &checks);
        print_report(&rep);
        status = status.max(rep.exit_status());
    }
    Ok(status)
}

fn element(v: &Value, a: &SuperAlgebra, labels: &HashMap<&str, usize>) -> Result<Vec<u32>> {
    let f = a.field();
    let n = a.dim();
    let coeff = |x: &Value| -> Result<u32> {
        x.as_i64()
            .map(|c| f.from_i64(c))
            .ok_or_else(|| anyhow!("coefficient {x} is not an integer"))
    };
    match v {
        Value::Array(xs) => {
            if xs.len() != n {
                bail!("coordinate array has length {}, expected {n}", xs.len());
            }
            xs.iter().map(coeff).collect()
        }
        Value::Object(m) => {
            let mut out = vec![0; n];
            for (label, c) in m {
                let i = *labels.get(label.as_str()).ok_or_else(|| anyhow!("unknown basis label `{label}`"))?;
                out[i] = f.add(out[i], coeff(c)?);
            }
            Ok(out)
        }
        _ => bail!("generator must be an array or an object"),
    }
}

fn read_generators(path: &PathBuf, a: &SuperAlgebra) -> Result<Vec<GeneratorPair>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let doc: Value = serde_json::from_str(&text).context("parsing generators")?;
    let labels: HashMap<&str, usize> = (0..a.dim()).map(|i| (a.space.label(i), i)).collect();
    let pairs = doc["pairs"].as_array().ok_or_else(|| anyhow!("missing `pairs` array"))?;
    pairs
        .iter()
        .map(|pr| Ok(GeneratorPair::new(element(&pr["e"], a, &labels)?, element(&pr["f"], a, &labels)?)))
        .collect()
}

fn print_matrix(f: Field, m: &[Vec<u32>]) {
    for row in signed_matrix(f, m) {
        println!("  {row:?}");
    }
}

fn cmd_cartan(name: &str, p: u32, generators: Option<&PathBuf>) -> Result<u8> {
    let t: Target = load(name, p)?;
    let f = t.algebra.field();
    let (pairs, expected) = match generators {
        Some(path) => (read_generators(path, &t.algebra)?, None),
        None => match builtin_generators(&t)? {
            Some((g, m)) => (g, Some(m)),
            None => {
                let Kind::El53(e) = &t.kind else {
                    bail!("no built-in generators for {}; pass --generators", t.name);
                };
                match search_el53_cartan(e, SEARCH_BUDGET)? {
                    SearchOutcome::Certified { pairs, .. } => (pairs, None),
                    SearchOutcome::NotCertified { reason } => {
                        println!("{}: not certified ({reason})", t.name);
                        return Ok(1);
                    }
                }
            }
        },
    };
    let data = match cartan_matrix(&t.algebra, &pairs) {
        Ok(d) => d,
        Err(e) => {
            println!("{}: {e}", t.name);
            return Ok(1);
        }
    };
    println!("{} over GF({p}): Cartan matrix (residues mod {p}, shown in (-p/2, p/2])", t.name);
    print_matrix(f, &data.matrix);
    println!("generators span a subalgebra of dimension {}", data.generated_dim);
    if let Kind::El53(_) = t.kind {
        println!("target, up to simultaneous permutation and row scaling:");
        print_matrix(f, &el53_target(f));
    }
    match expected {
        Some(m) if m != data.matrix => {
            println!("expected:");
            print_matrix(f, &m);
            Ok(1)
        }
        _ => Ok(0),
    }
}

fn run(cli: Cli) -> Result<u8> {
    match &cli.command {
        Command::Build { name, p, out } => cmd_build(name, *p, out.as_ref()),
        Command::Verify { name, p, checks, json } => cmd_verify(name, *p, checks, json.as_ref()),
        Command::Square {
            left,
            right,
            all,
            p,
            checks,
        } => cmd_square(left.as_deref(), right.as_deref(), *all, *p, checks),
        Command::Cartan { name, p, generators } => cmd_cartan(name, *p, generators.as_ref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
