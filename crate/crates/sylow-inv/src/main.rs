use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use sylow_inv::error::Result;
use sylow_inv::families::{family_poly, FamilyKind};
use sylow_inv::field::make_field;
use sylow_inv::groups::{self, Family, GroupSpec};
use sylow_inv::verify::{suite_runner, Config, Status, SuiteKind, Target};

/// Exact Sylow p-subgroups of the finite classical groups and machine
/// verification of their invariant-field generators.
#[derive(Parser)]
#[command(name = "sylow-inv", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites and emit a JSON report.
    Verify(VerifyArgs),
    /// Group-level helpers.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Polynomial-family helpers.
    #[command(subcommand)]
    Poly(PolyCmd),
}

#[derive(Args)]
struct VerifyArgs {
    /// Family to verify; omit to run the default grid.
    #[arg(long)]
    family: Option<String>,
    /// Rank parameter.
    #[arg(long)]
    m: Option<usize>,
    /// Base prime power.
    #[arg(long)]
    q: Option<u64>,
    /// Comma-separated suite list
    /// (group,steenrod,psi,degrees,invariance,certificates,examples).
    #[arg(long)]
    suites: Option<String>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
    /// Include wall-clock timings (makes reports non-reproducible).
    #[arg(long)]
    timings: bool,
    /// Run single-threaded.
    #[arg(long)]
    sequential: bool,
}

#[derive(Subcommand)]
enum GroupCmd {
    /// Print the generator list of the Sylow subgroup.
    Dump(GroupDumpArgs),
}

#[derive(Args)]
struct GroupDumpArgs {
    #[arg(long)]
    family: String,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    q: u64,
}

#[derive(Subcommand)]
enum PolyCmd {
    /// Print one family polynomial.
    Show(PolyShowArgs),
}

#[derive(Args)]
struct PolyShowArgs {
    /// omega, gamma or lambda.
    #[arg(long)]
    kind: String,
    /// Level index s.
    #[arg(long)]
    s: u32,
    /// Sign for omega: 1 or -1.
    #[arg(long, allow_hyphen_values = true)]
    j: Option<i8>,
    /// Scalar parameter for gamma/lambda, as a canonical element index.
    #[arg(long)]
    lambda: Option<u64>,
    /// Number of variables.
    #[arg(long)]
    n: usize,
    /// Base prime power; omega/gamma live over GF(q), lambda over GF(q^2).
    #[arg(long)]
    q: u64,
}

fn parse_family(name: &str) -> Result<Family> {
    Family::parse(name).ok_or_else(|| {
        sylow_inv::Error::ConfigInvalid(format!(
            "unknown family {name}; expected gu-even|gu-odd|sp|o-plus|o-minus|o-odd"
        ))
    })
}

fn run_verify(args: &VerifyArgs) -> Result<bool> {
    let suites = match &args.suites {
        None => SuiteKind::all(),
        Some(list) => {
            let mut v = Vec::new();
            for part in list.split(',') {
                let part = part.trim();
                if part.is_empty() {
                    continue;
                }
                v.push(SuiteKind::parse(part).ok_or_else(|| {
                    sylow_inv::Error::ConfigInvalid(format!("unknown suite {part}"))
                })?);
            }
            v
        }
    };
    let targets = match (&args.family, args.m, args.q) {
        (None, None, None) => Vec::new(),
        (Some(f), Some(m), Some(q)) => vec![Target {
            family: parse_family(f)?,
            m,
            q,
        }],
        _ => {
            return Err(sylow_inv::Error::ConfigInvalid(
                "--family, --m and --q must be given together".into(),
            ))
        }
    };
    let config = Config {
        suites,
        targets,
        parallel: !args.sequential,
        timings: args.timings,
    };
    let report = suite_runner(&config)?;
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    match &args.out {
        Some(path) => std::fs::write(path, json.as_bytes()).map_err(|e| {
            sylow_inv::Error::ConfigInvalid(format!("cannot write {}: {e}", path.display()))
        })?,
        None => println!("{json}"),
    }
    for r in &report.results {
        if r.status == Status::Fail {
            eprintln!("FAIL {}", r.id);
        }
    }
    eprintln!(
        "checks: {} passed, {} failed, {} skipped",
        report.summary.passed, report.summary.failed, report.summary.skipped
    );
    Ok(report.all_passed())
}

fn run_group_dump(args: &GroupDumpArgs) -> Result<()> {
    let spec = GroupSpec::new(parse_family(&args.family)?, args.m, args.q)?;
    let gens = groups::generators(&spec)?;
    let out = serde_json::json!({
        "family": spec.family.name(),
        "m": spec.m,
        "q": spec.q,
        "n": spec.n,
        "acting_field": format!("GF({}^{})", spec.p, spec.ctx.s()),
        "order": groups::group_order(&spec).to_string(),
        "classical_order": groups::classical_order(&spec).to_string(),
        "generators": gens.iter().map(|g| g.to_json()).collect::<Vec<_>>(),
    });
    println!("{}", serde_json::to_string_pretty(&out).expect("serializes"));
    Ok(())
}

fn run_poly_show(args: &PolyShowArgs) -> Result<()> {
    let (p, e) = {
        let mut p = 2;
        while p * p <= args.q {
            if args.q.is_multiple_of(p) {
                break;
            }
            p += 1;
        }
        if !args.q.is_multiple_of(p) {
            p = args.q;
        }
        let mut e = 0;
        let mut k = args.q;
        while k > 1 {
            if !k.is_multiple_of(p) {
                return Err(sylow_inv::Error::ConfigInvalid(format!(
                    "q={} is not a prime power",
                    args.q
                )));
            }
            k /= p;
            e += 1;
        }
        (p, e.max(1))
    };
    let kind_name = args.kind.as_str();
    let ctx = if kind_name == "lambda" {
        make_field(p, 2 * e)?
    } else {
        make_field(p, e)?
    };
    let lam = match args.lambda {
        Some(idx) => ctx.elem(idx)?,
        None => sylow_inv::field::Fel::ZERO,
    };
    let kind = match kind_name {
        "omega" => FamilyKind::Omega {
            s: args.s,
            j: args.j.unwrap_or(1),
        },
        "gamma" => FamilyKind::Gamma {
            s: args.s,
            lambda: lam,
        },
        "lambda" => FamilyKind::Lambda {
            s: args.s,
            lambda: lam,
        },
        other => {
            return Err(sylow_inv::Error::ConfigInvalid(format!(
                "unknown kind {other}; expected omega|gamma|lambda"
            )))
        }
    };
    let f = family_poly(kind, args.n, &ctx)?;
    println!("{}", f.display());
    println!(
        "{}",
        serde_json::to_string(&f.to_json()).expect("serializes")
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Verify(args) => match run_verify(args) {
            Ok(true) => Ok(ExitCode::SUCCESS),
            Ok(false) => Ok(ExitCode::from(1)),
            Err(e) => Err(e),
        },
        Command::Group(GroupCmd::Dump(args)) => run_group_dump(args).map(|()| ExitCode::SUCCESS),
        Command::Poly(PolyCmd::Show(args)) => run_poly_show(args).map(|()| ExitCode::SUCCESS),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
