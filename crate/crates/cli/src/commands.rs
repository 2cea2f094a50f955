use std::process::ExitCode;

use cesaro::axioms::{
    builtin_rule, independence_suite, random_corpus, search_counterexample, test_axiom, Axiom,
    AxiomReport, GeneratorConfig, HarnessConfig, PeriodicReading, SearchWitness,
};
use cesaro::evaluators::{
    self, abel_identity_residual, abel_truncation, banach_bounds, cesaro_average, cesaro_estimate,
    delta_grid, discounted_grid_values, discounted_value, partial_mean, sandwich_checks, Interval,
    ABEL_TRUNCATION_TOLERANCE,
};
use cesaro::orderings::{brute_force_compare, oracle_horizon, ComparisonResult, Criterion};
use cesaro::rational::to_f64;
use cesaro::stream::format::stream_to_value;
use cesaro::{EpStream, Stream};
use clap::Args;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::input::{load_streams, parse_grid, require_ep};
use crate::output::{approx, exact, fmt_float, scalar, scalar_text, Report};
use crate::OutputArgs;

/// Residual bound for the Abel identity check.
const ABEL_RESIDUAL_LIMIT: f64 = 1e-9;
/// Default horizon for estimates on bounded streams.
const BOUNDED_HORIZON: u64 = 1 << 20;
/// Default oracle horizon when a pair includes a bounded stream.
const BOUNDED_ORACLE_HORIZON: u64 = 1 << 16;

pub enum Status {
    Ok,
    PropertyFailed,
}

impl From<Status> for ExitCode {
    fn from(s: Status) -> Self {
        match s {
            Status::Ok => ExitCode::SUCCESS,
            Status::PropertyFailed => ExitCode::from(1),
        }
    }
}

type CmdResult = Result<Status, String>;

fn err(e: impl ToString) -> String {
    e.to_string()
}

fn stream_json(s: &Stream) -> Value {
    stream_to_value(s).unwrap_or_else(|| Value::String(s.label()))
}

fn interval_json(i: &Interval) -> Value {
    json!({"lower": approx(i.lower), "upper": approx(i.upper)})
}

fn compact(v: &Value) -> String {
    serde_json::to_string(v).unwrap_or_default()
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    /// Stream spec files or inline JSON.
    #[arg(required = true)]
    inputs: Vec<String>,
    /// Horizons T at which to report the partial mean.
    #[arg(long, value_delimiter = ',', default_value = "10,100,1000")]
    mean_at: Vec<u64>,
    /// Discount grid exponents: delta_j = 1 - 2^-j for j in j0..=j1.
    #[arg(long, default_value = "4..20")]
    delta_grid: String,
    /// Largest step k for the k-step mean bounds W1 and W4.
    #[arg(long, default_value_t = 4)]
    kmax: u64,
    /// Horizon for estimates on bounded streams.
    #[arg(long, default_value_t = BOUNDED_HORIZON)]
    horizon: u64,
    /// Truncation tolerance for discounted sums of bounded streams.
    #[arg(long, default_value_t = evaluators::FLOAT_TOLERANCE)]
    tolerance: f64,
    #[command(flatten)]
    output: OutputArgs,
}

/// The part of a report produced for one stream or pair.
struct Section {
    json: Value,
    rows: Vec<Vec<String>>,
    text: Vec<String>,
    holds: bool,
}

fn eval_one(
    index: usize,
    s: &Stream,
    args: &EvalArgs,
    grid: &[(u32, f64)],
) -> Result<Section, String> {
    let mut rows = Vec::new();
    let mut text = vec![format!("stream {index}: {}", s.label())];
    let mut row = |quantity: &str, parameter: String, value: String, is_approx: bool| {
        rows.push(vec![
            index.to_string(),
            quantity.to_string(),
            parameter,
            value,
            is_approx.to_string(),
        ]);
    };

    let mut means = Vec::new();
    for &t in &args.mean_at {
        let m = partial_mean(s, t).map_err(err)?;
        row(
            "partial_mean",
            format!("T={t}"),
            scalar_text(&m),
            !m.is_exact(),
        );
        text.push(format!("  mu_{t} = {}", scalar_text(&m)));
        means.push(json!({"T": t, "value": scalar(&m)}));
    }

    let (average, estimate) = match s {
        Stream::Ep(ep) => {
            let mu = cesaro_average(ep);
            row(
                "cesaro_average",
                String::new(),
                exact(&mu).as_str().unwrap_or_default().to_string(),
                false,
            );
            text.push(format!(
                "  mu_inf = {}",
                exact(&mu).as_str().unwrap_or_default()
            ));
            (exact(&mu), Value::Null)
        }
        Stream::Bounded(_) => {
            let est = cesaro_estimate(s, 1, args.horizon).map_err(err)?;
            row(
                "cesaro_estimate_lower",
                format!("horizon={}", args.horizon),
                fmt_float(est.lower),
                true,
            );
            row(
                "cesaro_estimate_upper",
                format!("horizon={}", args.horizon),
                fmt_float(est.upper),
                true,
            );
            text.push(format!(
                "  mu_T range over late T = [{}, {}]",
                fmt_float(est.lower),
                fmt_float(est.upper)
            ));
            (Value::Null, interval_json(&est))
        }
    };

    let deltas: Vec<f64> = grid.iter().map(|g| g.1).collect();
    let sigma = match s {
        Stream::Ep(ep) => deltas
            .iter()
            .map(|&d| discounted_value(ep, d))
            .collect::<cesaro::Result<Vec<_>>>(),
        Stream::Bounded(_) => discounted_grid_values(s, &deltas, args.tolerance),
    }
    .map_err(err)?;
    let mut discounted = Vec::new();
    for ((j, delta), value) in grid.iter().zip(&sigma) {
        row(
            "discounted",
            format!("delta=1-2^-{j}"),
            fmt_float(*value),
            true,
        );
        text.push(format!("  sigma(1-2^-{j}) = {}", fmt_float(*value)));
        discounted.push(json!({"j": j, "delta": approx(*delta), "value": approx(*value)}));
    }

    let w = banach_bounds(s, args.kmax, args.horizon, &deltas, args.tolerance).map_err(err)?;
    let mut bounds = serde_json::Map::new();
    for (name, v) in [("w1", &w.w1), ("w2", &w.w2), ("w3", &w.w3), ("w4", &w.w4)] {
        row(name, String::new(), scalar_text(v), !v.is_exact());
        text.push(format!("  {} = {}", name.to_uppercase(), scalar_text(v)));
        bounds.insert(name.to_string(), scalar(v));
    }

    let mut json = json!({
        "index": index,
        "stream": stream_json(s),
        "partial_means": means,
        "cesaro_average": average,
        "discounted": discounted,
        "bounds": bounds,
    });
    if !estimate.is_null() {
        json["cesaro_estimate"] = estimate;
    }
    Ok(Section {
        json,
        rows,
        text,
        holds: true,
    })
}

pub fn eval(args: EvalArgs) -> CmdResult {
    let streams = load_streams(&args.inputs)?;
    let (j0, j1) = parse_grid(&args.delta_grid)?;
    let grid: Vec<(u32, f64)> = (j0..=j1).zip(delta_grid(j0, j1)).collect();
    if args.mean_at.contains(&0) {
        return Err("--mean-at horizons must be >= 1".into());
    }
    let results = streams
        .par_iter()
        .enumerate()
        .map(|(i, s)| eval_one(i, s, &args, &grid))
        .collect::<Result<Vec<_>, _>>()?;
    let report = Report {
        json: json!({
            "command": "eval",
            "streams": results.iter().map(|r| r.json.clone()).collect::<Vec<_>>(),
        }),
        csv_header: vec!["stream", "quantity", "parameter", "value", "approx"],
        csv_rows: results.iter().flat_map(|r| r.rows.clone()).collect(),
        text: results.iter().flat_map(|r| r.text.clone()).collect(),
    };
    report.emit(&args.output)?;
    Ok(Status::Ok)
}

fn parse_criterion(s: &str) -> Result<Criterion, String> {
    s.parse().map_err(err)
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    #[arg(required = true)]
    inputs: Vec<String>,
    /// Rules to apply (repeatable). Defaults to cesaro, catching_up and
    /// fixed_step unless --criterion is given.
    #[arg(long)]
    rule: Vec<String>,
    /// Also run the brute-force oracle for this criterion: c or fixc.
    #[arg(long, value_parser = parse_criterion)]
    criterion: Vec<Criterion>,
    /// Oracle horizon; defaults to H0 + 50 P on eventually-periodic pairs.
    #[arg(long)]
    horizon: Option<u64>,
    /// Largest step tried by the fixed-step oracle.
    #[arg(long, default_value_t = 12)]
    kmax: u64,
    #[command(flatten)]
    output: OutputArgs,
}

fn criterion_name(c: Criterion) -> &'static str {
    match c {
        Criterion::CatchingUp => "C",
        Criterion::FixedStep => "fixC",
    }
}

fn result_json(method: Value, r: &ComparisonResult) -> Value {
    let mut v = method;
    v["verdict"] = json!(r.verdict);
    if let Some(w) = &r.witness {
        v["witness"] = json!(w);
    }
    v
}

pub fn compare(args: CompareArgs) -> CmdResult {
    let streams = load_streams(&args.inputs)?;
    if streams.len() < 2 {
        return Err("compare needs at least two streams".into());
    }
    let rule_ids: Vec<String> = if !args.rule.is_empty() {
        args.rule.clone()
    } else if args.criterion.is_empty() {
        ["cesaro", "catching_up", "fixed_step"]
            .map(String::from)
            .to_vec()
    } else {
        Vec::new()
    };
    let rules = rule_ids
        .iter()
        .map(|id| builtin_rule(id).map_err(err))
        .collect::<Result<Vec<_>, _>>()?;
    for rule in &rules {
        require_ep(&streams, rule.id())?;
    }
    let pairs: Vec<(usize, usize)> = (0..streams.len())
        .flat_map(|i| (i + 1..streams.len()).map(move |j| (i, j)))
        .collect();
    let results = pairs
        .par_iter()
        .map(|&(i, j)| -> Result<Section, String> {
            let (u, v) = (&streams[i], &streams[j]);
            let mut entries = Vec::new();
            let mut rows = Vec::new();
            let mut text = Vec::new();
            let mut record = |method: Value, name: String, r: ComparisonResult| {
                let witness = r.witness.as_ref().map(|w| compact(&json!(w))).unwrap_or_default();
                rows.push(vec![i.to_string(), j.to_string(), name.clone(), r.verdict.to_string(), witness.clone()]);
                text.push(format!("{i} vs {j} {name}: {}{}", r.verdict, if witness.is_empty() { String::new() } else { format!(" {witness}") }));
                entries.push(result_json(method, &r));
            };
            for rule in &rules {
                let (a, b) = (u.as_ep().expect("checked"), v.as_ep().expect("checked"));
                record(json!({"rule": rule.id()}), rule.id().to_string(), rule.compare(a, b));
            }
            for &c in &args.criterion {
                let horizon = match (u.as_ep(), v.as_ep(), args.horizon) {
                    (_, _, Some(h)) => h,
                    (Some(a), Some(b), None) => oracle_horizon(a, b),
                    _ => BOUNDED_ORACLE_HORIZON,
                };
                let r = brute_force_compare(u, v, c, horizon, args.kmax).map_err(err)?;
                let method = json!({"criterion": criterion_name(c), "method": "brute_force", "horizon": horizon, "kmax": args.kmax});
                record(method, format!("{}(oracle)", criterion_name(c)), r);
            }
            let json = json!({"i": i, "j": j, "u": stream_json(u), "v": stream_json(v), "results": entries});
            Ok(Section { json, rows, text, holds: true })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let report = Report {
        json: json!({"command": "compare", "pairs": results.iter().map(|r| r.json.clone()).collect::<Vec<_>>()}),
        csv_header: vec!["i", "j", "method", "verdict", "witness"],
        csv_rows: results.iter().flat_map(|r| r.rows.clone()).collect(),
        text: results.iter().flat_map(|r| r.text.clone()).collect(),
    };
    report.emit(&args.output)?;
    Ok(Status::Ok)
}

#[derive(Args, Debug)]
pub struct AxiomsArgs {
    /// Optional corpus of eventually-periodic streams; a seeded random
    /// corpus is used otherwise.
    inputs: Vec<String>,
    #[arg(long, default_value = "cesaro")]
    rule: String,
    /// theorem1 (every axiom against --rule) or appendix-b (each
    /// independence example against its claims).
    #[arg(long, default_value = "theorem1")]
    suite: String,
    /// Check only these axioms against --rule (repeatable).
    #[arg(long)]
    axiom: Vec<String>,
    #[arg(long, default_value_t = 200)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 500)]
    corpus_size: usize,
    /// Horizons inspected by bounded consistency checks.
    #[arg(long, default_value_t = 64)]
    window: u64,
    /// Approximants inspected by the continuity check.
    #[arg(long, default_value_t = 64)]
    continuity_terms: u64,
    /// pure (empty heads) or eventual.
    #[arg(long, default_value = "pure")]
    periodic_reading: String,
    #[command(flatten)]
    output: OutputArgs,
}

fn report_row(r: &AxiomReport) -> Vec<String> {
    let (trial, witness) = match &r.witness {
        Some(w) => (w.trial.to_string(), compact(&json!(w.instance))),
        None => (String::new(), String::new()),
    };
    vec![
        r.axiom_id.to_string(),
        r.rule_id.clone(),
        r.mode.to_string(),
        r.window.map(|w| w.to_string()).unwrap_or_default(),
        r.trials.to_string(),
        r.failures.to_string(),
        r.vacuous.to_string(),
        r.seed.to_string(),
        trial,
        witness,
    ]
}

fn report_text(r: &AxiomReport) -> Vec<String> {
    let mut out = vec![format!(
        "{} / {} [{}]: {} failures in {} trials ({} vacuous)",
        r.rule_id, r.axiom_id, r.mode, r.failures, r.trials, r.vacuous
    )];
    if let Some(w) = &r.witness {
        out.push(format!(
            "  witness (trial {}): {}",
            w.trial,
            compact(&json!(w.instance))
        ));
        for e in &w.evidence {
            out.push(format!("    {e}"));
        }
    }
    out
}

const REPORT_HEADER: [&str; 10] = [
    "axiom_id",
    "rule_id",
    "mode",
    "window",
    "trials",
    "failures",
    "vacuous",
    "seed",
    "witness_trial",
    "witness",
];

pub fn axioms(args: AxiomsArgs) -> CmdResult {
    let config = HarnessConfig {
        window: args.window,
        continuity_terms: args.continuity_terms,
        periodic_reading: args
            .periodic_reading
            .parse::<PeriodicReading>()
            .map_err(err)?,
    };
    let (corpus, corpus_json) = if args.inputs.is_empty() {
        let corpus =
            random_corpus(args.corpus_size, args.seed, &GeneratorConfig::default()).map_err(err)?;
        let meta = json!({"source": "random", "size": corpus.len(), "seed": args.seed});
        (corpus, meta)
    } else {
        let streams = load_streams(&args.inputs)?;
        let corpus: Vec<EpStream> = require_ep(&streams, &args.rule)?
            .into_iter()
            .cloned()
            .collect();
        let meta = json!({"source": "inputs", "size": corpus.len()});
        (corpus, meta)
    };
    if args.axiom.is_empty() && args.suite == "appendix-b" {
        let reports = independence_suite(&corpus, args.trials, args.seed, &config).map_err(err)?;
        let confirmed = reports.iter().all(|r| r.confirmed());
        let all: Vec<&AxiomReport> = reports
            .iter()
            .flat_map(|r| r.dropped.iter().chain(&r.kept))
            .collect();
        let mut text = Vec::new();
        for r in &reports {
            text.push(format!(
                "{}: {}",
                r.rule_id,
                if r.confirmed() {
                    "confirmed"
                } else {
                    "NOT confirmed"
                }
            ));
            for a in &r.dropped {
                text.push(format!(
                    "  drops {}: {}",
                    a.axiom_id,
                    if a.witness.is_some() {
                        "witness found"
                    } else {
                        "no witness"
                    }
                ));
            }
            for a in &r.kept {
                text.push(format!("  keeps {}: {} failures", a.axiom_id, a.failures));
            }
        }
        let claims: Vec<Value> = reports
            .iter()
            .map(|r| json!({"rule_id": r.rule_id, "confirmed": r.confirmed(), "dropped": r.dropped, "kept": r.kept}))
            .collect();
        let report = Report {
            json: json!({"command": "axioms", "suite": "appendix-b", "corpus": corpus_json, "claims": claims}),
            csv_header: REPORT_HEADER.to_vec(),
            csv_rows: all.iter().map(|r| report_row(r)).collect(),
            text,
        };
        report.emit(&args.output)?;
        return Ok(if confirmed {
            Status::Ok
        } else {
            Status::PropertyFailed
        });
    }
    if args.axiom.is_empty() && args.suite != "theorem1" {
        return Err(format!(
            "unknown suite `{}` (expected theorem1 or appendix-b)",
            args.suite
        ));
    }
    let axioms: Vec<Axiom> = if args.axiom.is_empty() {
        Axiom::ALL.to_vec()
    } else {
        args.axiom
            .iter()
            .map(|a| a.parse().map_err(err))
            .collect::<Result<_, _>>()?
    };
    let rule = builtin_rule(&args.rule).map_err(err)?;
    let reports = axioms
        .iter()
        .map(|&a| test_axiom(&rule, a, &corpus, args.trials, args.seed, &config))
        .collect::<cesaro::Result<Vec<_>>>()
        .map_err(err)?;
    let passed = reports.iter().all(AxiomReport::passed);
    let suite = if args.axiom.is_empty() {
        "theorem1"
    } else {
        "selected"
    };
    let report = Report {
        json: json!({"command": "axioms", "suite": suite, "rule": rule.id(), "corpus": corpus_json, "reports": reports}),
        csv_header: REPORT_HEADER.to_vec(),
        csv_rows: reports.iter().map(report_row).collect(),
        text: reports.iter().flat_map(report_text).collect(),
    };
    report.emit(&args.output)?;
    Ok(if passed {
        Status::Ok
    } else {
        Status::PropertyFailed
    })
}

#[derive(Args, Debug)]
pub struct IdentityArgs {
    #[arg(required = true)]
    inputs: Vec<String>,
    /// Discount factors for the Abel identity.
    #[arg(long, value_delimiter = ',', default_value = "0.5,0.9,0.99")]
    delta: Vec<f64>,
    #[arg(long, default_value = "4..20")]
    delta_grid: String,
    #[arg(long, default_value_t = 4)]
    kmax: u64,
    #[arg(long, default_value_t = BOUNDED_HORIZON)]
    horizon: u64,
    /// Slack of the sandwich inequalities.
    #[arg(long, default_value_t = 0.05)]
    eps: f64,
    #[arg(long, default_value_t = evaluators::FLOAT_TOLERANCE)]
    tolerance: f64,
    #[command(flatten)]
    output: OutputArgs,
}

pub fn identity_check(args: IdentityArgs) -> CmdResult {
    let streams = load_streams(&args.inputs)?;
    let (j0, j1) = parse_grid(&args.delta_grid)?;
    let grid = delta_grid(j0, j1);
    let results = streams
        .par_iter()
        .enumerate()
        .map(|(i, s)| -> Result<Section, String> {
            let mut ok = true;
            let mut rows = Vec::new();
            let mut text = vec![format!("stream {i}: {}", s.label())];
            let mut abel = Vec::new();
            if let Stream::Ep(ep) = s {
                let bound = to_f64(&ep.sup_abs()).max(1.0);
                for &delta in &args.delta {
                    let n = abel_truncation(delta, bound, ABEL_TRUNCATION_TOLERANCE).map_err(err)?;
                    let residual = abel_identity_residual(ep, delta, n).map_err(err)?;
                    let holds = residual < ABEL_RESIDUAL_LIMIT;
                    ok &= holds;
                    rows.push(vec![i.to_string(), "abel".into(), format!("delta={delta}"), fmt_float(residual), holds.to_string()]);
                    text.push(format!("  abel delta={delta} N={n}: residual {} {}", fmt_float(residual), if holds { "ok" } else { "FAIL" }));
                    abel.push(json!({"delta": approx(delta), "n": n, "residual": approx(residual), "holds": holds}));
                }
            }
            let checks = sandwich_checks(s, args.kmax, args.horizon, &grid, args.tolerance, args.eps).map_err(err)?;
            let mut sandwich = Vec::new();
            for c in &checks {
                ok &= c.holds;
                rows.push(vec![
                    i.to_string(),
                    "sandwich".into(),
                    format!("k={}", c.k),
                    format!(
                        "{};{};{};{}",
                        fmt_float(c.kstep.lower),
                        fmt_float(c.discounted.lower),
                        fmt_float(c.discounted.upper),
                        fmt_float(c.kstep.upper)
                    ),
                    c.holds.to_string(),
                ]);
                text.push(format!(
                    "  sandwich k={}: {} - eps <= {} <= {} <= {} + eps {}",
                    c.k,
                    fmt_float(c.kstep.lower),
                    fmt_float(c.discounted.lower),
                    fmt_float(c.discounted.upper),
                    fmt_float(c.kstep.upper),
                    if c.holds { "ok" } else { "FAIL" }
                ));
                sandwich.push(json!({
                    "k": c.k,
                    "kstep_means": interval_json(&c.kstep),
                    "discounted_limits": interval_json(&c.discounted),
                    "eps": approx(c.eps),
                    "holds": c.holds,
                }));
            }
            let json = json!({"index": i, "stream": stream_json(s), "abel": abel, "sandwich": sandwich, "holds": ok});
            Ok(Section { json, rows, text, holds: ok })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let all_ok = results.iter().all(|r| r.holds);
    let report = Report {
        json: json!({"command": "identity-check", "holds": all_ok, "streams": results.iter().map(|r| r.json.clone()).collect::<Vec<_>>()}),
        csv_header: vec!["stream", "check", "parameter", "value", "holds"],
        csv_rows: results.iter().flat_map(|r| r.rows.clone()).collect(),
        text: results.iter().flat_map(|r| r.text.clone()).collect(),
    };
    report.emit(&args.output)?;
    Ok(if all_ok {
        Status::Ok
    } else {
        Status::PropertyFailed
    })
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    /// fixC_strictly_weaker_than_C, C_incomparable_pair,
    /// C_implies_fixC_violation, or axiom:<axiom_id>:<rule_id>.
    #[arg(long)]
    property: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10_000)]
    budget: u64,
    #[arg(long, default_value_t = 4)]
    head_max: usize,
    #[arg(long, default_value_t = 6)]
    cycle_max: usize,
    #[arg(long, default_value_t = -3, allow_hyphen_values = true)]
    lo: i64,
    #[arg(long, default_value_t = 3, allow_hyphen_values = true)]
    hi: i64,
    #[command(flatten)]
    output: OutputArgs,
}

pub fn search(args: SearchArgs) -> CmdResult {
    let generator = GeneratorConfig {
        head_max: args.head_max,
        cycle_max: args.cycle_max,
        lo: args.lo,
        hi: args.hi,
    };
    let outcome =
        search_counterexample(&args.property, &generator, args.seed, args.budget).map_err(err)?;
    let mut text = Vec::new();
    let (found, trial, detail) = match &outcome.witness {
        None => {
            text.push(format!(
                "{}: none within budget {}",
                outcome.property, outcome.budget
            ));
            ("false", String::new(), String::new())
        }
        Some(SearchWitness::Pair {
            trial,
            u,
            v,
            evidence,
        }) => {
            text.push(format!("{}: found at trial {trial}", outcome.property));
            text.push(format!("  u = {u}"));
            text.push(format!("  v = {v}"));
            for e in evidence {
                text.push(format!("  {e}"));
            }
            ("true", trial.to_string(), format!("u={u}; v={v}"))
        }
        Some(SearchWitness::Axiom { witness, .. }) => {
            text.push(format!(
                "{}: found at trial {}",
                outcome.property, witness.trial
            ));
            text.push(format!(
                "  instance = {}",
                compact(&json!(witness.instance))
            ));
            for e in &witness.evidence {
                text.push(format!("  {e}"));
            }
            (
                "true",
                witness.trial.to_string(),
                compact(&json!(witness.instance)),
            )
        }
    };
    let report = Report {
        json: json!({"command": "search", "outcome": outcome}),
        csv_header: vec!["property", "seed", "budget", "found", "trial", "witness"],
        csv_rows: vec![vec![
            outcome.property.clone(),
            outcome.seed.to_string(),
            outcome.budget.to_string(),
            found.to_string(),
            trial,
            detail,
        ]],
        text,
    };
    report.emit(&args.output)?;
    Ok(Status::Ok)
}
