use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use polysimp_core::dsl::{parse, print_domain, print_system};
use polysimp_core::geometry::ThickFaceLattice;
use polysimp_core::ir::{validate, EquationSystem, FuncKind};
use polysimp_core::oracle::{equivalent, fmt_point, Verdict};
use polysimp_core::schedule;
use polysimp_core::simplify::{simplify_system, Options, SimplifyError};

/// Exit statuses. Mismatches are 1, bad input is 2, broken invariants are 3.
const MISMATCH: u8 = 1;
const BAD_INPUT: u8 = 2;
const INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(name = "polysimp", version, about = "Simplify polyhedral reductions and check the result")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rewrite every reduction to the lowest polynomial degree found.
    Simplify(SimplifyArgs),
    /// Compare the outputs of two systems on seeded random inputs.
    Check(CheckArgs),
    /// Print the thick face lattice of a variable's reduction domains.
    Lattice(InspectArgs),
    /// Print the causality cone projected on a variable's schedule coefficients.
    Cone(InspectArgs),
}

#[derive(Args)]
struct SimplifyArgs {
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    report: Option<PathBuf>,
    /// Accept any reuse vector with a nonzero projection.
    #[arg(long)]
    no_schedule_check: bool,
    /// Treat `*` as invertible.
    #[arg(long)]
    assume_nonzero: bool,
    /// Fail when some reduction operator has no inverse.
    #[arg(long)]
    require_inverse: bool,
    /// Unstable test hook: `VAR=(v1,v2,...)`.
    #[arg(long, value_name = "VAR=(..)")]
    force_rho: Vec<String>,
    /// Add the wall time to the report.
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct CheckArgs {
    left: PathBuf,
    right: PathBuf,
    /// Parameter values: `a..b` (inclusive) or a comma list.
    #[arg(long, default_value = "1..12")]
    n: String,
    #[arg(long, default_value_t = 3)]
    trials: u32,
    /// Overridden by POLYSIMP_SEED when set.
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Rebind a function symbol on both sides: `f=inc`.
    #[arg(long)]
    func: Vec<String>,
}

#[derive(Args)]
struct InspectArgs {
    input: PathBuf,
    #[arg(long)]
    var: String,
}

/// A failure with its exit status.
struct Fail(u8, String);

impl Fail {
    fn input(msg: impl Into<String>) -> Fail {
        Fail(BAD_INPUT, msg.into())
    }
}

fn load(path: &Path) -> Result<EquationSystem, Fail> {
    let src = std::fs::read_to_string(path).map_err(|e| Fail::input(format!("{}: {}", path.display(), e)))?;
    let sys = parse(&src)
        .map_err(|e| Fail::input(format!("{}:{}:{}: error: {}", path.display(), e.line, e.col, e.message)))?;
    validate(&sys).map_err(|e| Fail::input(format!("{}: error: {}", path.display(), e)))?;
    Ok(sys)
}

fn write(path: &Path, text: &str) -> Result<(), Fail> {
    std::fs::write(path, text).map_err(|e| Fail::input(format!("{}: {}", path.display(), e)))
}

fn parse_force(spec: &str) -> Result<(String, Vec<BigInt>), Fail> {
    let bad = || Fail::input(format!("--force-rho expects VAR=(v1,...), got `{}`", spec));
    let (var, vec) = spec.split_once('=').ok_or_else(bad)?;
    let vec = vec.trim().trim_start_matches('(').trim_end_matches(')');
    let rho = vec.split(',').map(|v| v.trim().parse::<BigInt>()).collect::<Result<Vec<_>, _>>().map_err(|_| bad())?;
    Ok((var.trim().to_string(), rho))
}

fn parse_ns(spec: &str) -> Result<Vec<i64>, Fail> {
    let bad = || Fail::input(format!("--n expects a..b or a comma list, got `{}`", spec));
    if let Some((a, b)) = spec.split_once("..") {
        let a: i64 = a.trim().parse().map_err(|_| bad())?;
        let b: i64 = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
        return if a <= b { Ok((a..=b).collect()) } else { Err(bad()) };
    }
    spec.split(',').map(|v| v.trim().parse().map_err(|_| bad())).collect()
}

fn run_simplify(args: &SimplifyArgs) -> Result<(), Fail> {
    let start = Instant::now();
    let sys = load(&args.input)?;
    if args.require_inverse {
        for eq in &sys.equations {
            for case in &eq.cases {
                for red in case.expr.reductions() {
                    if !red.op.has_inverse(args.assume_nonzero) {
                        return Err(Fail::input(format!(
                            "{}: error: reduction `{}` in {} has no inverse (--require-inverse)",
                            args.input.display(),
                            red.op.symbol(),
                            eq.target
                        )));
                    }
                }
            }
        }
    }
    let mut opts = Options { no_schedule_check: args.no_schedule_check, assume_nonzero: args.assume_nonzero, ..Default::default() };
    for spec in &args.force_rho {
        let (var, rho) = parse_force(spec)?;
        if sys.equation(&var).is_none() {
            return Err(Fail::input(format!("--force-rho: no equation defines {}", var)));
        }
        opts.forced.insert(var, rho);
    }
    let outcome = simplify_system(&sys, &opts).map_err(|e| match e {
        SimplifyError::Schedule(err) => Fail(INTERNAL, format!("error: {}", err)),
        SimplifyError::Invalid(err) => Fail(INTERNAL, format!("error: transformed system is invalid: {}", err)),
    })?;
    let text = print_system(&outcome.system);
    match &args.out {
        Some(p) => write(p, &text)?,
        None => print!("{}", text),
    }
    if let Some(p) = &args.report {
        let mut value = serde_json::to_value(&outcome.report).map_err(|e| Fail(INTERNAL, e.to_string()))?;
        if args.timing {
            value["wall_time_ms"] = serde_json::json!(start.elapsed().as_secs_f64() * 1e3);
        }
        // serde_json's default map is ordered, so the output is canonical.
        let mut json = serde_json::to_string_pretty(&value).map_err(|e| Fail(INTERNAL, e.to_string()))?;
        json.push('\n');
        write(p, &json)?;
    }
    for r in &outcome.report.equations {
        eprintln!(
            "{}: degree {} -> {} (bound {}{})",
            r.target,
            r.original_degree,
            r.final_degree,
            r.bound,
            if r.bound_met { "" } else { ", unmet" }
        );
    }
    for f in &outcome.report.forced_rho_rejected {
        eprintln!("{}: forced rho {:?} rejected: {}", f.variable, f.rho, f.reason);
    }
    Ok(())
}

fn run_check(args: &CheckArgs) -> Result<(), Fail> {
    let mut a = load(&args.left)?;
    let mut b = load(&args.right)?;
    for spec in &args.func {
        let (name, kind) = spec
            .split_once('=')
            .and_then(|(n, k)| FuncKind::parse(k.trim()).map(|k| (n.trim().to_string(), k)))
            .ok_or_else(|| Fail::input(format!("--func expects NAME=inc|double|sqmod97|id, got `{}`", spec)))?;
        a.funcs.insert(name.clone(), kind);
        b.funcs.insert(name, kind);
    }
    let seed = match std::env::var("POLYSIMP_SEED") {
        Ok(s) => s.trim().parse().map_err(|_| Fail::input(format!("POLYSIMP_SEED is not an integer: `{}`", s)))?,
        Err(_) => args.seed,
    };
    let ns = parse_ns(&args.n)?;
    let verdict = equivalent(&a, &b, &ns, args.trials, seed).map_err(|e| Fail::input(format!("evaluation error: {}", e)))?;
    match verdict {
        Verdict::Equivalent { comparisons } => {
            println!("equivalent: {} comparisons over N in {}, {} trials, seed {}", comparisons, args.n, args.trials, seed);
            Ok(())
        }
        Verdict::Mismatch(m) => {
            let show = |v: &Option<_>| v.as_ref().map_or("undefined".to_string(), |v: &polysimp_core::ir::Value| v.to_string());
            Err(Fail(
                MISMATCH,
                format!(
                    "mismatch: N={} trial {} {}{}: {} vs {}",
                    m.n,
                    m.trial,
                    m.var,
                    fmt_point(&m.point),
                    show(&m.left),
                    show(&m.right)
                ),
            ))
        }
    }
}

fn run_lattice(args: &InspectArgs) -> Result<(), Fail> {
    let sys = load(&args.input)?;
    let decl = sys.var(&args.var).ok_or_else(|| Fail::input(format!("unknown variable {}", args.var)))?;
    let mut shown = 0;
    if let Some(eq) = sys.equation(&args.var) {
        for (k, case) in eq.cases.iter().enumerate() {
            let region = sys.case_region(eq, case);
            for red in case.expr.reductions() {
                let e = sys.effective_domain(red, &region);
                println!("{} case {}: {}", eq.target, k, print_domain(&red.names, &e, &sys.param.name));
                print_lattice(&e, &red.names, &sys.param.name)?;
                shown += 1;
            }
        }
    }
    if shown == 0 {
        let d = sys.with_context(&decl.domain);
        println!("{} domain: {}", decl.name, print_domain(&decl.names, &d, &sys.param.name));
        print_lattice(&d, &decl.names, &sys.param.name)?;
    }
    Ok(())
}

fn print_lattice(p: &polysimp_core::geometry::Polyhedron, names: &[String], param: &str) -> Result<(), Fail> {
    let mut all = names.to_vec();
    all.push(param.to_string());
    if p.is_empty() {
        println!("  (empty)");
        return Ok(());
    }
    let lattice = ThickFaceLattice::build(p).map_err(|e| Fail(INTERNAL, e.to_string()))?;
    for (k, c) in lattice.root_constraints.iter().enumerate() {
        println!("  [{}] {}", k, c.display_with(&all));
    }
    print!("{}", lattice.dump(&all));
    Ok(())
}

fn run_cone(args: &InspectArgs) -> Result<(), Fail> {
    let sys = load(&args.input)?;
    let layout = schedule::Layout::new(&sys);
    let block = layout
        .block(&args.var)
        .ok_or_else(|| Fail::input(format!("{} is not a computed variable of the system", args.var)))?;
    let deps = schedule::context_dependences(&sys, &[]);
    let cone = schedule::causality_cone(&deps, &layout);
    let projected = schedule::project_on_variable(&cone, &layout, &args.var);
    let decl = sys.var(&args.var).expect("layout variable is declared");
    // The projection keeps the linear part only; the N and constant coefficients are free.
    let coords: Vec<String> = decl.names.iter().map(|n| format!("theta_{}", n)).collect();
    debug_assert_eq!(coords.len(), block.dims);
    println!("{}: coordinates ({})", args.var, coords.join(", "));
    for d in &deps {
        println!("  dependence {}", d);
    }
    let gens = projected.generators.clone().unwrap_or_default();
    let show = |v: &[BigInt]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
    for l in &gens.lines {
        println!("  line ({})", show(l));
    }
    for r in &gens.rays {
        println!("  ray ({})", show(r));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Simplify(a) => run_simplify(a),
        Command::Check(a) => run_check(a),
        Command::Lattice(a) => run_lattice(a),
        Command::Cone(a) => run_cone(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail(code, msg)) => {
            eprintln!("{}", msg);
            ExitCode::from(code)
        }
    }
}
