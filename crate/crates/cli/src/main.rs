//! `hyperalg`: products, normal forms, Frobenius maps, idempotents and
//! verification of multiplication maps from the command line.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hyperalg::chevalley::StructureConstants;
use hyperalg::grammar::{element_json, parse_element, serialize_element, TorusForm};
use hyperalg::idempotents::mu_lambda;
use hyperalg::isocheck::{enumerate_basis, verify_with, MapSpec, Space, DEFAULT_BLOCK_CAP};
use hyperalg::rootdata::{RootSystem, Weight};
use hyperalg::straighten::{Algebra, PBWElement};
use hyperalg::suite::{run_all, run_criterion};
use hyperalg::{Error, Result};

#[derive(Parser, Debug)]
#[command(name = "hyperalg", version, about = "Exact computations in hyperalgebras over F_p")]
struct Cli {
    /// Cartan type: A1..A8, B2.., C3.., D4.., G2, F4, E6..E8.
    #[arg(long = "type", global = true, default_value = "A1")]
    system: String,

    /// The prime.
    #[arg(long, global = true, default_value_t = 2)]
    p: u64,

    /// Torus level N: torus parts are tables on (Z/p^N)^rank.
    #[arg(long, global = true, default_value_t = 3)]
    level: u32,

    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true, env = "HYPERALG_THREADS")]
    threads: Option<usize>,

    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Print elements as JSON.
    #[arg(long, global = true)]
    json: bool,

    /// Negate the structure constant of the pair `i,j` of root indices.
    #[arg(long, global = true, hide = true, value_parser = parse_pair)]
    sabotage: Option<(usize, usize)>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Product of two elements.
    Mul { left: String, right: String },
    /// Normal form of an element.
    Normalize { element: String },
    /// The Frobenius map.
    Fr { element: String },
    /// The splitting `Fr'^r`, applied to each normal-form term.
    Frsplit {
        element: String,
        #[arg(long, default_value_t = 1)]
        r: u32,
    },
    /// The idempotent `mu_λ^(n)`.
    Mu {
        /// Pairings of λ with the simple coroots, e.g. "1 0".
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value_t = Form::Idempotent)]
        form: Form,
    },
    /// The structure constant table as JSON.
    Structconsts,
    /// The basis of `A_d` for a space.
    Basis {
        #[arg(long, default_value = "plus")]
        space: String,
        #[arg(long, default_value_t = 1)]
        depth: u32,
        #[arg(long, default_value_t = DEFAULT_BLOCK_CAP)]
        cap: usize,
    },
    /// Rank check of a multiplication map, or the full acceptance matrix.
    Verify {
        /// e.g. plus-first, plus-second, torus-truncated, full-first, upper-borel-first.
        #[arg(long, required_unless_present_any = ["all_desk", "criterion"])]
        statement: Option<String>,
        #[arg(long, default_value_t = 1)]
        r: u32,
        #[arg(long, default_value_t = 1)]
        n: u32,
        /// Column cap per weight block.
        #[arg(long, default_value_t = DEFAULT_BLOCK_CAP)]
        cap: usize,
        /// Run every acceptance criterion.
        #[arg(long)]
        all_desk: bool,
        /// Run a single acceptance criterion by number.
        #[arg(long, conflicts_with = "all_desk")]
        criterion: Option<u32>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Form {
    Binomial,
    Idempotent,
}

fn parse_pair(s: &str) -> std::result::Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected i,j")?;
    Ok((a.trim().parse().map_err(|e| format!("{e}"))?, b.trim().parse().map_err(|e| format!("{e}"))?))
}

fn algebra(cli: &Cli, level: u32) -> Result<Algebra> {
    let rs = RootSystem::build(&cli.system)?;
    let mut sc = StructureConstants::new(&rs);
    if let Some((i, j)) = cli.sabotage {
        if rs.sum(i, j).is_none() {
            return Err(Error::NotASum(rs.root(i).0.clone(), rs.root(j).0.clone()));
        }
        sc = sc.with_flipped_pair(i, j);
    }
    Algebra::from_parts(rs, sc, cli.p, level)
}

fn show(cli: &Cli, alg: &Algebra, x: &PBWElement) -> Result<String> {
    if cli.json {
        serde_json::to_string_pretty(&element_json(alg, x)).map_err(|e| Error::Invalid(e.to_string()))
    } else {
        Ok(serialize_element(alg, x, TorusForm::Binomial))
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> Result<String> {
    serde_json::to_string_pretty(v).map_err(|e| Error::Invalid(e.to_string()))
}

/// Runs the command, returning its output and whether every check passed.
fn run(cli: &Cli) -> Result<(String, bool)> {
    match &cli.command {
        Command::Mul { left, right } => {
            let alg = algebra(cli, cli.level)?;
            let x = alg.multiply(&parse_element(&alg, left)?, &parse_element(&alg, right)?)?;
            Ok((show(cli, &alg, &x)?, true))
        }
        Command::Normalize { element } => {
            let alg = algebra(cli, cli.level)?;
            Ok((show(cli, &alg, &parse_element(&alg, element)?)?, true))
        }
        Command::Fr { element } => {
            let alg = algebra(cli, cli.level)?;
            let x = alg.fr(&parse_element(&alg, element)?)?;
            Ok((show(cli, &alg, &x)?, true))
        }
        Command::Frsplit { element, r } => {
            let alg = algebra(cli, cli.level)?;
            let x = alg.fr_prime(&parse_element(&alg, element)?, *r)?;
            Ok((show(cli, &alg, &x)?, true))
        }
        Command::Mu { lambda, n, form } => {
            let alg = algebra(cli, cli.level)?;
            let w = lambda
                .split_whitespace()
                .map(|c| c.parse::<i64>().map_err(|_| Error::Invalid(format!("bad weight `{lambda}`"))))
                .collect::<Result<Vec<_>>>()?;
            let x = mu_lambda(&alg, &Weight(w), *n)?;
            let text = match (cli.json, form) {
                (true, _) => show(cli, &alg, &x)?,
                (false, Form::Binomial) => serialize_element(&alg, &x, TorusForm::Binomial),
                (false, Form::Idempotent) => serialize_element(&alg, &x, TorusForm::Idempotent),
            };
            Ok((text, true))
        }
        Command::Structconsts => {
            let alg = algebra(cli, 1)?;
            Ok((to_json(&alg.constants().table_json(alg.root_system()))?, true))
        }
        Command::Basis { space, depth, cap } => {
            let space: Space = space.parse()?;
            let alg = algebra(cli, (*depth).max(1))?;
            let form = match space {
                Space::Plus | Space::Minus => TorusForm::Binomial,
                _ => TorusForm::Idempotent,
            };
            let lines: Vec<String> = enumerate_basis(&alg, space, *depth, *cap)?
                .iter()
                .map(|b| serialize_element(&alg, &b.element, form))
                .collect();
            Ok((lines.join("\n"), true))
        }
        Command::Verify { all_desk: true, .. } => {
            let reports = run_all();
            let ok = reports.iter().all(|r| r.passed());
            if cli.json || cli.out.is_some() {
                Ok((to_json(&reports)?, ok))
            } else {
                Ok((reports.iter().map(|r| r.line()).collect::<Vec<_>>().join("\n"), ok))
            }
        }
        Command::Verify { criterion: Some(id), .. } => {
            let report = run_criterion(*id);
            let ok = report.passed();
            if cli.json || cli.out.is_some() {
                Ok((to_json(&report)?, ok))
            } else {
                let mut lines = vec![report.line()];
                lines.extend(report.details.iter().chain(&report.samples).map(|d| format!("    {d}")));
                Ok((lines.join("\n"), ok))
            }
        }
        Command::Verify { statement, r, n, cap, .. } => {
            let statement = statement.as_deref().unwrap_or_default();
            let mut spec = MapSpec::new(statement, &cli.system, cli.p as u32, *r, *n)?;
            spec.block_cap = *cap;
            let alg = algebra(cli, spec.level())?;
            let report = verify_with(&alg, &spec)?;
            Ok((to_json(&report)?, report.passed()))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok((text, ok)) => {
            match &cli.out {
                Some(path) => {
                    if let Err(e) = fs::write(path, text + "\n") {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => {
                    // a closed pipe (e.g. `| head`) is not an error
                    let _ = writeln!(std::io::stdout().lock(), "{text}");
                }
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
