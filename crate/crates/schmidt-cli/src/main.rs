//! `schmidt`: command-line access to the Farey, game, tessellation,
//! dimension and Diophantine tools of the `schmidt` library.

mod render;

use std::error::Error;
use std::io::{self, Write};
use std::process::ExitCode;

use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use schmidt::arith::{from_big, int, parse_rational, pow, BallD, Interval, Rational};
use schmidt::dims::{
    aux_inequality_holds, bad_delta_bounds, build_cover_levels, hole_count, intersection_bound, lower_bound_winning,
    upper_bound_ubiq_losing, verify_cover_levels, BoundInputs, HoleVariant, DEFAULT_PRECISION,
};
use schmidt::dioph::{bad_check, dir_witnesses, RealSpec};
use schmidt::farey::{
    farey_half_interval, farey_in_range, farey_sequence, half_farey_partition, minimal_order_farey_element,
    FareyFraction,
};
use schmidt::game::{run_game, AccelSeq, Centered, GameParams, Play, Strategy};
use schmidt::strategies::adversary::Adversary;
use schmidt::strategies::alice::{certify_bad, AliceBad};
use schmidt::strategies::bob::{extract_witnesses, FareyBob};
use schmidt::tess::{
    brute_force_blocks, is_representable, maximal_tessellations, minimal_tessellations, BlockMode, CompleteTess,
    DEFAULT_BRUTE_FORCE_BOUND,
};

type CliResult<T> = Result<T, Box<dyn Error>>;

#[derive(Parser, Debug)]
#[command(name = "schmidt", version, about = "Exact Schmidt-game, Farey and tessellation computations")]
struct Cli {
    /// Output format; CSV is available for `dims` only.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Significant digits for logarithmic values (`dims`).
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION)]
    precision: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Farey sequences, anchors, half Farey partitions and half-intervals.
    Farey(FareyArgs),
    /// Play a seeded (alpha, beta) game and certify the outcome.
    Play(PlayArgs),
    /// Tessellation blocks inside or around a sup-norm ball.
    Tess(TessArgs),
    /// Dimension bounds, hole counts and the cover construction.
    Dims(DimsArgs),
    /// Dirichlet witnesses and badly-approximable checks for one point.
    Check(CheckArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FareyWhat {
    Sequence,
    Anchor,
    Partition,
    HalfInterval,
}

#[derive(clap::Args, Debug)]
struct FareyArgs {
    #[arg(long)]
    order: Option<u64>,
    /// Closed interval "a/b,c/d".
    #[arg(long)]
    interval: Option<String>,
    #[arg(long, value_enum, default_value_t = FareyWhat::Sequence)]
    what: FareyWhat,
}

#[derive(clap::Args, Debug)]
struct PlayArgs {
    #[arg(long)]
    alpha: String,
    #[arg(long)]
    beta: String,
    /// Acceleration terms "s1,s2,..."; missing terms are zero.
    #[arg(long, default_value = "")]
    accel: String,
    #[arg(long, default_value_t = 10)]
    depth: usize,
    #[arg(long)]
    seed: u64,
    /// centered, random, avoid_anchor, target:p/q or farey.
    #[arg(long, default_value = "farey")]
    bob: String,
    /// centered, random, avoid_anchor, target:p/q or bad.
    #[arg(long, default_value = "random")]
    alice: String,
    /// Bob's opening ball "lo,hi".
    #[arg(long, default_value = "0,1")]
    opening: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TessWhat {
    Represent,
    Min,
    Max,
    Oracle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OracleMode {
    Cover,
    Packing,
}

#[derive(clap::Args, Debug)]
struct TessArgs {
    #[arg(long)]
    dim: Option<usize>,
    /// Ball "c1,c2,...;R".
    #[arg(long)]
    ball: String,
    /// Tessellation base point and cell radius "x1,x2,...;R'".
    #[arg(long)]
    base: String,
    #[arg(long, value_enum, default_value_t = TessWhat::Min)]
    what: TessWhat,
    /// Block kind searched by the oracle.
    #[arg(long, value_enum, default_value_t = OracleMode::Cover)]
    mode: OracleMode,
    /// Largest R/R' the oracle accepts.
    #[arg(long, default_value_t = DEFAULT_BRUTE_FORCE_BOUND)]
    bound: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum DimsWhat {
    Bounds,
    Counts,
    Cover,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Variant {
    Integer,
    General,
}

#[derive(clap::Args, Debug)]
struct DimsArgs {
    #[arg(long, value_enum, default_value_t = DimsWhat::Bounds)]
    what: DimsWhat,
    /// "d,s,j,beta"; repeat the flag for a sweep.
    #[arg(long)]
    inputs: Vec<String>,
    /// Bounds for Bad(delta) and intersections of its translates.
    #[arg(long)]
    delta: Option<String>,
    /// Number of translates for the intersection bound.
    #[arg(long, default_value_t = 1)]
    translates: u32,
    /// Winning parameters for the lower bound, with --dim.
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    beta: Option<String>,
    #[arg(long, default_value_t = 1)]
    dim: u32,
    /// Levels of the cover construction.
    #[arg(long, default_value_t = 2)]
    depth: usize,
    #[arg(long, value_enum, default_value_t = Variant::Integer)]
    variant: Variant,
    /// First ball of the cover construction "lo,hi".
    #[arg(long, default_value = "0,1/2")]
    b1: String,
}

#[derive(clap::Args, Debug)]
struct CheckArgs {
    /// Rational point "p/q".
    #[arg(long, conflicts_with = "cf", required_unless_present = "cf")]
    x: Option<String>,
    /// Continued fraction "a0;a1,a2,...".
    #[arg(long)]
    cf: Option<String>,
    #[arg(long)]
    delta: String,
    /// Smallest denominator for the badly-approximable check.
    #[arg(long = "Q")]
    q_min: Option<u64>,
    #[arg(long, default_value_t = 100)]
    qmax: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.format == Format::Csv && !matches!(cli.command, Command::Dims(_)) {
        Cli::command()
            .error(clap::error::ErrorKind::ArgumentConflict, "--format csv is only available for dims")
            .exit();
    }
    let outcome = match &cli.command {
        Command::Farey(args) => farey(args).map(|(i, r)| record("farey", i, r)),
        Command::Play(args) => play(args).map(|(i, r)| record("play", i, r)),
        Command::Tess(args) => tess(args).map(|(i, r)| record("tess", i, r)),
        Command::Check(args) => check(args).map(|(i, r)| record("check", i, r)),
        Command::Dims(args) => match cli.format {
            Format::Json => dims(args, cli.precision).map(|(i, r)| record("dims", i, r)),
            Format::Csv => dims_csv(args, cli.precision).map(|()| Value::Null),
        },
    };
    match outcome {
        Ok(Value::Null) => ExitCode::SUCCESS,
        Ok(value) => {
            let text = serde_json::to_string_pretty(&value).expect("JSON values serialize");
            // A closed pipe (e.g. `| head`) is not an error worth reporting.
            let _ = writeln!(io::stdout().lock(), "{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn record(subcommand: &str, inputs: Value, results: Value) -> Value {
    json!({
        "subcommand": subcommand,
        "inputs": inputs,
        "results": results,
        "version": env!("CARGO_PKG_VERSION"),
    })
}

/// The command-line spelling of a value-enum variant.
fn name<T: ValueEnum>(value: T) -> String {
    value.to_possible_value().expect("no skipped variants").get_name().to_string()
}

fn parse_list(text: &str) -> CliResult<Vec<Rational>> {
    Ok(text.split(',').map(parse_rational).collect::<Result<_, _>>()?)
}

fn parse_interval(text: &str) -> CliResult<Interval> {
    match parse_list(text)?.as_slice() {
        [lo, hi] => Ok(Interval::from_endpoints(lo.clone(), hi.clone())?),
        _ => Err(format!("expected an interval \"lo,hi\", got {text:?}").into()),
    }
}

/// Parses "c1,c2,...;R" into a center and a radius.
fn parse_center_radius(text: &str) -> CliResult<(Vec<Rational>, Rational)> {
    let (center, radius) =
        text.split_once(';').ok_or_else(|| format!("expected \"c1,c2,...;R\", got {text:?}"))?;
    Ok((parse_list(center)?, parse_rational(radius)?))
}

fn farey(args: &FareyArgs) -> CliResult<(Value, Value)> {
    let inputs = json!({ "order": args.order, "interval": args.interval, "what": name(args.what) });
    let interval = args.interval.as_deref().map(parse_interval).transpose()?;
    let need_interval = || interval.clone().ok_or("this query needs --interval");
    let results = match args.what {
        FareyWhat::Sequence => {
            let order = args.order.ok_or("the sequence query needs --order")?;
            let fractions: Vec<FareyFraction> = match &interval {
                None => farey_sequence(order)?,
                Some(i) => farey_in_range(&i.lo(), &i.hi(), &order.into())
                    .iter()
                    .map(FareyFraction::from_rational)
                    .collect(),
            };
            json!({ "count": fractions.len(), "fractions": fractions.iter().map(render::fraction).collect::<Vec<_>>() })
        }
        FareyWhat::Anchor => {
            let (anchor, order) = minimal_order_farey_element(&need_interval()?)?;
            json!({ "anchor": render::fraction(&anchor), "order": render::big(&order) })
        }
        FareyWhat::Partition => render::partition(&half_farey_partition(&need_interval()?)?),
        FareyWhat::HalfInterval => {
            let half = farey_half_interval(&need_interval()?)?;
            json!({
                "anchor": render::fraction(&half.anchor),
                "left_length": render::rational(&half.left_length),
                "right_length": render::rational(&half.right_length),
                "half_interval": render::interval(&half.interval),
            })
        }
    };
    Ok((inputs, results))
}

fn strategy(name: &str, farey_bob: Option<&GameParams>) -> CliResult<Box<dyn Strategy>> {
    Ok(match (name, farey_bob) {
        ("centered", _) => Box::new(Centered),
        ("farey", Some(params)) => Box::new(FareyBob::new(params)?),
        ("bad", None) => Box::new(AliceBad::new()),
        (other, _) => Box::new(Adversary::parse(other)?),
    })
}

fn play(args: &PlayArgs) -> CliResult<(Value, Value)> {
    let inputs = json!({
        "alpha": args.alpha, "beta": args.beta, "accel": args.accel, "depth": args.depth,
        "seed": args.seed, "bob": args.bob, "alice": args.alice, "opening": args.opening,
    });
    let params = GameParams::new(parse_rational(&args.alpha)?, parse_rational(&args.beta)?)?;
    let terms = args
        .accel
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<u64>().map_err(|_| format!("bad acceleration term {s:?}")))
        .collect::<Result<Vec<_>, _>>()?;
    let accel = AccelSeq::new(terms);
    let opening = parse_interval(&args.opening)?;
    let mut bob = strategy(&args.bob, Some(&params))?;
    let mut alice = strategy(&args.alice, None)?;
    let play = run_game(&params, &accel, opening, bob.as_mut(), alice.as_mut(), args.depth, args.seed)?;
    let mut results = json!({ "trace": trace(&play) });
    if args.bob == "farey" {
        let report = extract_witnesses(&play)?;
        results["witnesses"] = report.witnesses.iter().map(render::witness).collect();
        results["stabilized"] = report.stabilized.as_ref().map_or(Value::Null, render::fraction);
    }
    let delta = params.ab() / int(6);
    results["certificate"] = match certify_bad(&play, &delta) {
        Ok(c) => render::certificate(&c, &delta),
        Err(_) => Value::Null,
    };
    Ok((inputs, results))
}

fn trace(play: &Play) -> Value {
    let bob = play.bob_balls();
    let alice = play.alice_balls();
    (0..bob.len())
        .map(|i| {
            json!({
                "move": i + 1,
                "bob": { "center": render::rational(bob[i].center()), "radius": render::rational(bob[i].radius()) },
                "alice": alice.get(i).map_or(Value::Null, |a| {
                    json!({ "center": render::rational(a.center()), "radius": render::rational(a.radius()) })
                }),
                "s_n": play.accel().term(i + 1),
            })
        })
        .collect()
}

fn tess(args: &TessArgs) -> CliResult<(Value, Value)> {
    let inputs = json!({
        "dim": args.dim, "ball": args.ball, "base": args.base,
        "what": name(args.what), "mode": name(args.mode),
    });
    let (center, radius) = parse_center_radius(&args.ball)?;
    let (base, cell_radius) = parse_center_radius(&args.base)?;
    if let Some(d) = args.dim {
        if center.len() != d || base.len() != d {
            return Err(format!("--dim {d} does not match the ball and base coordinates").into());
        }
    }
    let ball = BallD::new(center, radius)?;
    let tessellation = CompleteTess::new(base, cell_radius)?;
    let blocks = match args.what {
        TessWhat::Represent => is_representable(&ball, &tessellation)?.into_iter().collect(),
        TessWhat::Min => minimal_tessellations(&ball, &tessellation)?,
        TessWhat::Max => maximal_tessellations(&ball, &tessellation)?,
        TessWhat::Oracle => {
            let mode = match args.mode {
                OracleMode::Cover => BlockMode::Cover,
                OracleMode::Packing => BlockMode::Packing,
            };
            brute_force_blocks(&ball, &tessellation, mode, args.bound)?
        }
    };
    let mut results = json!({ "blocks": blocks.iter().map(render::block).collect::<Vec<_>>() });
    if args.what == TessWhat::Represent {
        results["representable"] = Value::Bool(!blocks.is_empty());
    }
    Ok((inputs, results))
}

fn parse_inputs(text: &str) -> CliResult<BoundInputs> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let [d, s, j, beta] = parts.as_slice() else {
        return Err(format!("expected \"d,s,j,beta\", got {text:?}").into());
    };
    let int = |v: &str| v.parse::<u32>().map_err(|_| format!("expected a non-negative integer, got {v:?}"));
    Ok(BoundInputs::new(int(d)?, int(s)?, int(j)?, parse_rational(beta)?)?)
}

fn variant(v: Variant) -> HoleVariant {
    match v {
        Variant::Integer => HoleVariant::IntegerBeta,
        Variant::General => HoleVariant::General,
    }
}

fn dims_inputs(args: &DimsArgs) -> Value {
    json!({
        "what": name(args.what), "inputs": args.inputs, "delta": args.delta,
        "translates": args.translates, "alpha": args.alpha, "beta": args.beta, "dim": args.dim,
        "depth": args.depth, "variant": name(args.variant), "b1": args.b1,
    })
}

fn dims(args: &DimsArgs, precision: usize) -> CliResult<(Value, Value)> {
    let inputs = dims_inputs(args);
    let sweep = args.inputs.iter().map(|t| parse_inputs(t)).collect::<CliResult<Vec<_>>>()?;
    let mut results = json!({ "precision": precision });
    match args.what {
        DimsWhat::Bounds => {
            let mut rows = Vec::new();
            for inp in &sweep {
                let bounds = upper_bound_ubiq_losing(inp, precision)?;
                let bound = |b: &schmidt::dims::DimensionBound| {
                    json!({ "value": render::decimal(&b.value), "expression": b.expression() })
                };
                rows.push(json!({
                    "inputs": input_row(inp),
                    "general": bound(&bounds.general),
                    "integer_case": bounds.integer_case.as_ref().map_or(Value::Null, bound),
                    "aux_inequality": aux_inequality_holds(inp)?,
                }));
            }
            results["upper_bounds"] = Value::Array(rows);
            if let Some(delta) = &args.delta {
                let delta = parse_rational(delta)?;
                let b = bad_delta_bounds(&delta, precision)?;
                let opt = |v: &Option<schmidt::dims::Decimal>| v.as_ref().map_or(Value::Null, render::decimal);
                results["bad"] = json!({
                    "delta": render::rational(&delta),
                    "lower": opt(&b.lower),
                    "upper": opt(&b.upper),
                    "upper_integer_case": opt(&b.upper_integer_case),
                    "empty": b.empty,
                    "intersection": intersection_bound(args.translates, &delta, precision)
                        .map_or(Value::Null, |v| render::decimal(&v)),
                });
            }
            if let (Some(alpha), Some(beta)) = (&args.alpha, &args.beta) {
                let value = lower_bound_winning(args.dim, &parse_rational(alpha)?, &parse_rational(beta)?, precision)?;
                results["winning_lower_bound"] = render::decimal(&value);
            }
        }
        DimsWhat::Counts => {
            let mut rows = Vec::new();
            for inp in &sweep {
                let integer = hole_count(inp, HoleVariant::IntegerBeta).ok();
                rows.push(json!({
                    "inputs": input_row(inp),
                    "general": render::big(&hole_count(inp, HoleVariant::General)?),
                    "integer_case": integer.as_ref().map_or(Value::Null, render::big),
                }));
            }
            results["hole_counts"] = Value::Array(rows);
        }
        DimsWhat::Cover => {
            let [inp] = sweep.as_slice() else {
                return Err("the cover construction needs exactly one --inputs".into());
            };
            let b1 = parse_interval(&args.b1)?;
            let hole_variant = variant(args.variant);
            let levels = build_cover_levels(&b1, inp, hole_variant, args.depth)?;
            let check = verify_cover_levels(&b1, &levels);
            let per_hole = hole_count(inp, hole_variant)?;
            results["hole_count"] = render::big(&per_hole);
            results["shifted_contain"] = Value::Bool(check.shifted_contain);
            results["levels"] = levels
                .iter()
                .enumerate()
                .map(|(i, level)| {
                    let expected = pow(&from_big(per_hole.clone() * inp.j), level.t as i64);
                    render::cover_level(level, &render::rational(&expected), check.covered[i], check.holes_disjoint[i])
                })
                .collect();
        }
    }
    Ok((inputs, results))
}

fn input_row(inp: &BoundInputs) -> Value {
    json!({ "d": inp.d, "s": inp.s, "j": inp.j, "beta": render::rational(&inp.beta) })
}

/// CSV flattening of the dims tables, one row per sweep entry or level.
fn dims_csv(args: &DimsArgs, precision: usize) -> CliResult<()> {
    let (_, results) = dims(args, precision)?;
    let mut out = csv::Writer::from_writer(io::stdout());
    let text = |v: &Value| match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    };
    match args.what {
        DimsWhat::Bounds => {
            out.write_record(["d", "s", "j", "beta", "general", "integer_case", "aux_inequality", "precision"])?;
            for row in results["upper_bounds"].as_array().into_iter().flatten() {
                let i = &row["inputs"];
                out.write_record([
                    text(&i["d"]),
                    text(&i["s"]),
                    text(&i["j"]),
                    text(&i["beta"]),
                    text(&row["general"]["value"]),
                    text(&row["integer_case"]["value"]),
                    text(&row["aux_inequality"]),
                    precision.to_string(),
                ])?;
            }
        }
        DimsWhat::Counts => {
            out.write_record(["d", "s", "j", "beta", "general", "integer_case"])?;
            for row in results["hole_counts"].as_array().into_iter().flatten() {
                let i = &row["inputs"];
                out.write_record([
                    text(&i["d"]),
                    text(&i["s"]),
                    text(&i["j"]),
                    text(&i["beta"]),
                    text(&row["general"]),
                    text(&row["integer_case"]),
                ])?;
            }
        }
        DimsWhat::Cover => {
            out.write_record(["t", "cells", "expected_cells", "tight_cells", "holes", "cell_radius", "covered", "holes_disjoint"])?;
            for row in results["levels"].as_array().into_iter().flatten() {
                out.write_record(
                    ["t", "cells", "expected_cells", "tight_cells", "holes", "cell_radius", "covered", "holes_disjoint"]
                        .map(|k| text(&row[k])),
                )?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn check(args: &CheckArgs) -> CliResult<(Value, Value)> {
    let inputs = json!({ "x": args.x, "cf": args.cf, "delta": args.delta, "Q": args.q_min, "qmax": args.qmax });
    let point = match (&args.x, &args.cf) {
        (Some(x), _) => RealSpec::Rational(parse_rational(x)?),
        (None, Some(cf)) => RealSpec::parse_cf(cf)?,
        (None, None) => return Err("need --x or --cf".into()),
    };
    let delta = parse_rational(&args.delta)?;
    let witnesses = dir_witnesses(&point, &delta, args.qmax)?;
    let mut results = json!({
        "value": render::rational(&point.value()),
        "enclosure": render::rational(&point.enclosure()),
        "witnesses": witnesses.iter().map(|w| json!({
            "p": render::big(&w.p), "q": render::big(&w.q), "certain": w.certain,
        })).collect::<Vec<_>>(),
    });
    if let Some(q_min) = args.q_min {
        let verdict = bad_check(&point, &delta, q_min, args.qmax)?;
        results["bad"] = json!({
            "ok": verdict.ok,
            "certain": verdict.certain,
            "violations": verdict.violations.iter().map(render::rational).collect::<Vec<_>>(),
        });
    }
    Ok((inputs, results))
}
