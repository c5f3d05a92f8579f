use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mahler_hahn::epsilon::tau_from_context;
use mahler_hahn::solver::{residual_in, DEFAULT_GREEDY_LIMIT};
use mahler_hahn::{
    build_polygon, compute_r, greedy_extend, naive_height_set, parse_rational, solve_on, EpsilonContext,
    Exec, FiniteHahn, MahlerOperator, Membership, Options, Rational, SeriesTerm, SortedRationalSet, DEFAULT_BUDGET,
};
use mahler_hahn_cli::{parse_exponents, parse_operator, read_operator_file, ParseError};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "mahler-hahn", version, about = "Hahn-series solutions of linear Mahler equations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OperatorArgs {
    /// Base of the Mahler operator `M: f(z) -> f(z^ell)`.
    #[arg(long)]
    ell: Option<u64>,
    /// Operator expression such as "z*M^2 + (z-1)*M - 2".
    #[arg(long, allow_hyphen_values = true, required_unless_present = "op_file", conflicts_with = "op_file")]
    op: Option<String>,
    /// JSON file {"ell": .., "coefficients": [..]}.
    #[arg(long)]
    op_file: Option<PathBuf>,
    /// Emit JSON with rationals as strings.
    #[arg(long)]
    json: bool,
    /// Element cap for receptacle runs.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
    /// Run set iterations on one thread.
    #[arg(long)]
    sequential: bool,
}

#[derive(Args)]
struct ExponentArgs {
    /// Comma-separated exponents, e.g. "-1/2,0,1".
    #[arg(long, allow_hyphen_values = true, conflicts_with = "height")]
    exponents: Option<String>,
    /// All rationals of naive height at most N.
    #[arg(long)]
    height: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Newton polygon, slopes and support points.
    Info {
        #[command(flatten)]
        op: OperatorArgs,
    },
    /// Whether a rational lies in the receptacle V.
    Membership {
        #[command(flatten)]
        op: OperatorArgs,
        #[arg(long, allow_hyphen_values = true)]
        value: String,
    },
    /// Lower bound on the gap of V above a rational.
    Epsilon {
        #[command(flatten)]
        op: OperatorArgs,
        #[arg(long, allow_hyphen_values = true)]
        value: String,
        /// Include the recursion trace.
        #[arg(long)]
        trace: bool,
    },
    /// Lower bound on tau.
    Tau {
        #[command(flatten)]
        op: OperatorArgs,
    },
    /// The finite exponent set R for a truncation set E.
    Rset {
        #[command(flatten)]
        op: OperatorArgs,
        #[command(flatten)]
        exps: ExponentArgs,
    },
    /// Truncations to E of a basis of the solutions.
    Solve {
        #[command(flatten)]
        op: OperatorArgs,
        #[command(flatten)]
        exps: ExponentArgs,
    },
    /// Exponents in psi(R) where L(f) has a nonzero coefficient.
    Verify {
        #[command(flatten)]
        op: OperatorArgs,
        #[command(flatten)]
        exps: ExponentArgs,
        /// Series JSON: [{"exponent": "a/b", "coefficient": "c/d"}, ..].
        #[arg(long)]
        series: PathBuf,
    },
    /// Term-by-term extension of initial data up to a bound.
    Extend {
        #[command(flatten)]
        op: OperatorArgs,
        /// Series JSON holding the initial terms.
        #[arg(long)]
        series: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        bound: String,
        #[arg(long, default_value_t = DEFAULT_GREEDY_LIMIT)]
        limit: usize,
    },
}

enum Failure {
    Usage(String),
    Budget(String),
    Runtime(String),
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        match e {
            ParseError::Operator(inner) => inner.into(),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<mahler_hahn::Error> for Failure {
    fn from(e: mahler_hahn::Error) -> Self {
        use mahler_hahn::Error::*;
        match e {
            BudgetExceeded { .. } => Failure::Budget(e.to_string()),
            InvalidOperator(_) | NotInZdl { .. } | Precondition(_) | BadRational(_) => Failure::Usage(e.to_string()),
            DoesNotExtend(_) | IterationLimit(_) | Invariant(_) => Failure::Runtime(e.to_string()),
        }
    }
}

type Outcome = Result<(Value, String), Failure>;

fn operator(args: &OperatorArgs) -> Result<MahlerOperator, Failure> {
    match (&args.op, &args.op_file) {
        (Some(src), _) => {
            let ell = args.ell.ok_or_else(|| Failure::Usage("--op requires --ell".into()))?;
            Ok(parse_operator(ell, src)?)
        }
        (None, Some(path)) => {
            let l = read_operator_file(path)?;
            match args.ell {
                Some(ell) if ell != l.ell() => {
                    Err(Failure::Usage(format!("--ell {ell} disagrees with ell = {} in the file", l.ell())))
                }
                _ => Ok(l),
            }
        }
        (None, None) => Err(Failure::Usage("one of --op or --op-file is required".into())),
    }
}

fn options(args: &OperatorArgs) -> Options {
    Options { exec: if args.sequential { Exec::Sequential } else { Exec::Parallel }, budget: args.budget }
}

fn exponents(args: &ExponentArgs) -> Result<SortedRationalSet, Failure> {
    match (&args.exponents, args.height) {
        (Some(src), _) => Ok(parse_exponents(src)?),
        (None, Some(n)) => Ok(naive_height_set(n)),
        (None, None) => Err(Failure::Usage("one of --exponents or --height is required".into())),
    }
}

fn rational(src: &str) -> Result<Rational, Failure> {
    Ok(parse_rational(src)?)
}

fn read_series(path: &PathBuf) -> Result<FiniteHahn, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let terms: Vec<SeriesTerm> =
        serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok(FiniteHahn::from_json_terms(&terms)?)
}

fn strings<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> Value {
    Value::from(xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>())
}

fn joined<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> String {
    format!("{{{}}}", xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
}

fn series_json(f: &FiniteHahn) -> Value {
    serde_json::to_value(f.to_json_terms()).expect("plain strings")
}

fn info(args: &OperatorArgs) -> Outcome {
    let l = operator(args)?;
    let nd = build_polygon(&l);
    let points: Vec<Value> = nd.points.iter().map(|p| json!([p.abscissa.to_string(), p.height.to_string()])).collect();
    let vertices: Vec<Value> = nd.vertices().iter().map(|(x, y)| json!([x.to_string(), y.to_string()])).collect();
    let value = json!({
        "operator": l.to_string(),
        "ell": l.ell(),
        "order": l.order(),
        "points": points,
        "vertices": vertices,
        "slopes": strings(&nd.slopes),
        "kappa": nd.kappa(),
        "d": nd.d,
        "neg_slopes": strings(&nd.neg_slopes()),
    });
    let text = format!(
        "operator: {l}\nell: {}\norder: {}\nvertices: {}\nslopes: {}\nkappa: {}\nd: {}\n-S(L): {}",
        l.ell(),
        l.order(),
        nd.vertices().iter().map(|(x, y)| format!("({x}, {y})")).collect::<Vec<_>>().join(" "),
        joined(&nd.slopes),
        nd.kappa(),
        nd.d,
        joined(&nd.neg_slopes()),
    );
    Ok((value, text))
}

fn membership(args: &OperatorArgs, value: &str) -> Outcome {
    let l = operator(args)?;
    let v = rational(value)?;
    let m = Membership::new(build_polygon(&l), options(args));
    let answer = m.query(&v)?;
    let iota = answer.iota.map(Value::from).unwrap_or(Value::Null);
    let value = json!({ "value": v.to_string(), "in_V": answer.in_v, "iota": iota });
    let text = format!(
        "{v} {} V{}",
        if answer.in_v { "is in" } else { "is not in" },
        answer.iota.map(|i| format!(" (decided at depth {i})")).unwrap_or_default()
    );
    Ok((value, text))
}

fn epsilon(args: &OperatorArgs, value: &str, trace: bool) -> Outcome {
    let l = operator(args)?;
    let v = rational(value)?;
    let nd = build_polygon(&l);
    let mut ctx = EpsilonContext::new(&nd);
    if trace {
        ctx = ctx.with_trace();
    }
    ctx.seed_thetas()?;
    let bound = ctx.lb_eps_param(0, &v)?;
    let events: Vec<String> = ctx.trace().iter().map(|e| e.to_string()).collect();
    let mut value = json!({ "value": v.to_string(), "lower_bound": bound.to_string(), "theta": theta_map(&ctx) });
    let mut text = format!("epsilon({v}) >= {bound}");
    if trace {
        value["trace"] = Value::from(events.clone());
        text.push('\n');
        text.push_str(&events.join("\n"));
    }
    Ok((value, text))
}

fn theta_map(ctx: &EpsilonContext<'_>) -> Value {
    Value::Object(ctx.thetas().into_iter().map(|(k, t)| (k.to_string(), Value::from(t.to_string()))).collect())
}

fn tau(args: &OperatorArgs) -> Outcome {
    let l = operator(args)?;
    let nd = build_polygon(&l);
    let mut ctx = EpsilonContext::new(&nd);
    ctx.seed_thetas()?;
    let t = tau_from_context(&ctx);
    let thetas = ctx.thetas();
    let value = json!({ "tau": t.to_string(), "theta": theta_map(&ctx) });
    let text = format!(
        "tau >= {t}\n{}",
        thetas.iter().map(|(k, t)| format!("theta_{k} = {t}")).collect::<Vec<_>>().join("\n")
    );
    Ok((value, text))
}

fn rset(args: &OperatorArgs, exps: &ExponentArgs) -> Outcome {
    let l = operator(args)?;
    let e = exponents(exps)?;
    let nd = build_polygon(&l);
    let run = compute_r(&nd, &e, &options(args))?;
    let value = json!({
        "H": run.h,
        "N": run.n_cap.to_string(),
        "c": run.c,
        "M": run.m,
        "tau": run.tau_lb.to_string(),
        "receptacle_size": run.receptacle.final_level().len(),
        "steps": run.steps,
        "levels": run.levels.iter().map(strings).collect::<Vec<_>>(),
        "R": strings(&run.final_set),
    });
    let text = format!(
        "H = {}, N = {}, c = {}, M = {}, tau >= {}\n|V_M| = {}\nsteps = {}\n|R| = {}\nR = {}",
        run.h,
        run.n_cap,
        run.c,
        run.m,
        run.tau_lb,
        run.receptacle.final_level().len(),
        run.steps,
        run.final_set.len(),
        joined(&run.final_set),
    );
    Ok((value, text))
}

fn solve(args: &OperatorArgs, exps: &ExponentArgs) -> Outcome {
    let l = operator(args)?;
    let e = exponents(exps)?;
    let sol = solve_on(&l, &e, &options(args))?;
    let value = json!({
        "dimension": sol.dimension(),
        "restricted_rank": sol.restricted_rank,
        "R": strings(&sol.rset.final_set),
        "basis": sol.basis.iter().map(|b| series_json(&b.full)).collect::<Vec<_>>(),
        "restricted_basis": sol.basis.iter().map(|b| series_json(&b.restricted)).collect::<Vec<_>>(),
    });
    let mut text = format!("dimension: {}\nrestricted rank: {}", sol.dimension(), sol.restricted_rank);
    for (i, b) in sol.basis.iter().enumerate() {
        text.push_str(&format!("\nf_{i} = {}", b.restricted));
    }
    Ok((value, text))
}

fn verify(args: &OperatorArgs, exps: &ExponentArgs, series: &PathBuf) -> Outcome {
    let l = operator(args)?;
    let e = exponents(exps)?;
    let f = read_series(series)?;
    let nd = build_polygon(&l);
    let run = compute_r(&nd, &e, &options(args))?;
    let residual = residual_in(&nd, &l, &f, &run.final_set);
    let value = json!({
        "R": strings(&run.final_set),
        "residual_in_psi_R": strings(&residual),
        "certified": residual.is_empty(),
    });
    let text = if residual.is_empty() {
        "L(f) vanishes on psi(R)".to_string()
    } else {
        format!("L(f) is nonzero at {}", joined(&residual))
    };
    Ok((value, text))
}

fn extend(args: &OperatorArgs, series: &PathBuf, bound: &str, limit: usize) -> Outcome {
    let l = operator(args)?;
    let f0 = read_series(series)?;
    let f = greedy_extend(&l, &f0, &rational(bound)?, limit)?;
    Ok((json!({ "series": series_json(&f) }), f.to_string()))
}

fn run(cli: &Cli) -> Result<(bool, Value, String), Failure> {
    let (json, (value, text)) = match &cli.command {
        Command::Info { op } => (op.json, info(op)?),
        Command::Membership { op, value } => (op.json, membership(op, value)?),
        Command::Epsilon { op, value, trace } => (op.json, epsilon(op, value, *trace)?),
        Command::Tau { op } => (op.json, tau(op)?),
        Command::Rset { op, exps } => (op.json, rset(op, exps)?),
        Command::Solve { op, exps } => (op.json, solve(op, exps)?),
        Command::Verify { op, exps, series } => (op.json, verify(op, exps, series)?),
        Command::Extend { op, series, bound, limit } => (op.json, extend(op, series, bound, *limit)?),
    };
    Ok((json, value, text))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((true, value, _)) => {
            println!("{}", serde_json::to_string_pretty(&value).expect("serialisable"));
            ExitCode::SUCCESS
        }
        Ok((false, _, text)) => {
            println!("{text}");
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
