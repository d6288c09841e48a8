//! Command-line front end. Exit codes: 0 for a definitive verdict or a
//! successful run, 2 when some verdict is inconclusive, 1 for usage and
//! input errors.

use std::io::Write;
use std::path::Path;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::approx::orbit_error;
use crate::criteria::{
    default_schedule, greedy_plan, pointwise_gamma_criterion, salas_hypercyclic, salas_supercyclic,
    theorem_b_check, BVariant, CriterionReport, GreedyOutcome, PlanRule, ScheduleItem, Verdict,
};
use crate::error::{Error, Result};
use crate::gamma::GammaSet;
use crate::group::{GroupPoint, Window};
use crate::io::vector_from_json;
use crate::repro::{self, ExperimentParams, Named};
use crate::shifts::ShiftSet;
use crate::synthesis::{build_vector, enumerate_targets, DenseVectorCandidate, TargetConfig};
use crate::weights::Weight;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;

const SPEC_HELP: &str = "\
Weights: a JSON file, inline JSON, or a built-in alias (ex52_v1, ex52_v2, final_z,
twosided_exp, constant_one, r_peaks[:n_max]); `alias.json` falls back to the alias
when no such file exists.
Gamma: all | zero_to_one | one_to_inf | singleton:<m>[,<phase>] | annulus:<r>,<R> |
grid:<m1>,<m2>,... | pow2:<lo>..<hi> | JSON.
Shifts: all | half_line_pos | half_line_neg | gen:<g> | list:<a>,<b>,... |
arith:<start>,<step> | JSON.";

const REPRO_HELP: &str = "\
CSV columns per experiment:
  claim1:  n,s,m_hat,analysis_sup,witness,lower_bound,upper_bound,within_bounds
  claim2:  n,p,segment_integral,closed_form,lower_bound,ratio,probe_norm_pow
  ex52:    weight,criterion,gamma,shifts,verdict,bound
  final_z: check,shifts,verdict,value,note";

#[derive(Parser, Debug)]
#[command(name = "orbitforge", version, about = "Decide, construct and verify (Gamma,S)-dense vectors", after_help = SPEC_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run density criteria on a weight
    Check(CheckArgs),
    /// Build a truncated dense-vector candidate with certificates
    Synth(SynthArgs),
    /// Recompute certificates of a candidate and measure its errors
    Verify(VerifyArgs),
    /// Regenerate an experiment table as CSV
    #[command(after_help = REPRO_HELP)]
    Repro(ReproArgs),
    /// Operator norm M(s) of a translation
    Mnorm(MnormArgs),
    /// Weighted norm of a vector, or local norm of the weight on a window
    Norm(NormArgs),
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// weight file, inline JSON or alias
    #[arg(long)]
    weight: String,
    #[arg(long, default_value_t = 2.0)]
    p: f64,
    #[arg(long, default_value_t = 4096)]
    horizon: i64,
    /// write the report here instead of stdout
    #[arg(long)]
    out: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Criterion {
    Pointwise,
    SalasHypercyclic,
    SalasSupercyclic,
    WindowedSup,
    WindowedNorm,
    All,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value = "all")]
    gamma: String,
    #[arg(long, default_value = "all")]
    shifts: String,
    #[arg(long, value_enum, default_value_t = Criterion::Pointwise)]
    criterion: Criterion,
    /// `m_max=K,eps=pow2` or `m_max=K,eps=<value>`
    #[arg(long, default_value = "m_max=20,eps=pow2")]
    schedule: String,
    /// largest q for the unit-translation criteria
    #[arg(long, default_value_t = 2)]
    q_max: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum RuleArg {
    Exact,
    Majorant,
}

#[derive(Args, Debug)]
struct SynthArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value = "all")]
    gamma: String,
    #[arg(long, default_value = "all")]
    shifts: String,
    /// number of plan steps
    #[arg(long, default_value_t = 20)]
    steps: usize,
    /// number of series terms kept in the candidate
    #[arg(long)]
    trunc: Option<usize>,
    /// components per target tuple
    #[arg(long, default_value_t = 1)]
    width: usize,
    /// coefficients are dyadic with this many binary digits
    #[arg(long, default_value_t = 1)]
    depth: u32,
    #[arg(long, default_value_t = 1)]
    base_radius: i64,
    #[arg(long, value_enum, default_value_t = RuleArg::Exact)]
    rule: RuleArg,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// candidate JSON written by `synth`
    #[arg(long)]
    candidate: String,
    /// relative slack allowed on each certificate
    #[arg(long, default_value_t = 1e-9)]
    slack: f64,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args, Debug)]
struct ReproArgs {
    /// claim1 | claim2 | ex52 | final_z
    id: String,
    /// exponents of p, comma separated
    #[arg(long, value_delimiter = ',')]
    p: Option<Vec<f64>>,
    /// inclusive range `a..b` of the dyadic exponent n
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long)]
    horizon: Option<i64>,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args, Debug)]
struct MnormArgs {
    #[arg(long)]
    weight: String,
    /// translation, as JSON (`3`, `[1,-2]`, `0.25` or `{"anchor":6,"offset":0.5}`)
    #[arg(long, allow_hyphen_values = true)]
    s: String,
    #[arg(long, default_value_t = 4096)]
    horizon: i64,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args, Debug)]
struct NormArgs {
    #[command(flatten)]
    common: Common,
    /// vector file or inline JSON
    #[arg(long, conflicts_with = "window")]
    vector: Option<String>,
    /// window as JSON, e.g. `{"lo":-3,"hi":3}`
    #[arg(long)]
    window: Option<String>,
}

/// Echo of the invocation, embedded in every report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub argv: Vec<String>,
    pub params: Value,
}

fn read_json(src: &str, what: &str) -> Result<Value> {
    let text = if src.trim_start().starts_with(['{', '[']) {
        src.to_string()
    } else {
        std::fs::read_to_string(src)
            .map_err(|e| Error::parse(what, format!("cannot read {src}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Error::parse(what, format!("invalid JSON: {e}")))
}

pub fn load_weight(src: &str) -> Result<Weight> {
    let alias = src.strip_suffix(".json").unwrap_or(src);
    let (name, arg) = alias.split_once(':').unwrap_or((alias, ""));
    if repro::NAMED.contains(&name) && !Path::new(src).exists() {
        let n_max = if arg.is_empty() {
            12
        } else {
            arg.parse().map_err(|_| Error::parse("weight", format!("bad n_max in {src:?}")))?
        };
        return match repro::build(name, n_max)? {
            Named::Weight(w) => Ok(w),
            Named::Vector(_) => Err(Error::parse("weight", format!("{name} is a vector"))),
        };
    }
    Weight::from_json(&read_json(src, "weight")?)
}

pub fn load_vector(src: &str) -> Result<crate::group::SupportedVec> {
    let alias = src.strip_suffix(".json").unwrap_or(src);
    if let Some(rest) = alias.strip_prefix("claim2_vector") {
        if !Path::new(src).exists() {
            let n_max = rest.trim_start_matches(':').parse().unwrap_or(12);
            return repro::claim2_vector(n_max);
        }
    }
    vector_from_json(&read_json(src, "vector")?)
}

fn numbers(s: &str, field: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| Error::parse(field, format!("not a number: {x:?}"))))
        .collect()
}

pub fn load_gamma(src: &str) -> Result<GammaSet> {
    let (head, rest) = src.split_once(':').unwrap_or((src, ""));
    match head {
        "all" => Ok(GammaSet::AllNonzero),
        "zero_to_one" => Ok(GammaSet::ZeroToOne),
        "one_to_inf" => Ok(GammaSet::OneToInf),
        "singleton" => {
            let v = numbers(rest, "gamma")?;
            match v[..] {
                [m] => GammaSet::Singleton { modulus: m, phase: 0.0 }.validated(),
                [m, ph] => GammaSet::Singleton { modulus: m, phase: ph }.validated(),
                _ => Err(Error::parse("gamma", "singleton takes <modulus>[,<phase>]")),
            }
        }
        "annulus" => match numbers(rest, "gamma")?[..] {
            [r, big_r] => GammaSet::annulus(r, big_r),
            _ => Err(Error::parse("gamma", "annulus takes <r>,<R>")),
        },
        "grid" => GammaSet::grid(numbers(rest, "gamma")?),
        "pow2" => {
            let (a, b) = rest
                .split_once("..")
                .ok_or_else(|| Error::parse("gamma", "pow2 takes <lo>..<hi>"))?;
            let parse = |x: &str| x.trim().parse::<i32>().map_err(|_| Error::parse("gamma", format!("not an integer: {x:?}")));
            GammaSet::pow2_grid(parse(a)?, parse(b)?)
        }
        _ => serde_json::from_value::<GammaSet>(read_json(src, "gamma")?)
            .map_err(|e| Error::parse("gamma", e.to_string()))?
            .validated(),
    }
}

fn point(s: &str, field: &str) -> Result<GroupPoint> {
    let v: Value = serde_json::from_str(s.trim()).map_err(|e| Error::parse(field, e.to_string()))?;
    if let Some(x) = v.as_f64().filter(|_| !v.is_i64()) {
        return Ok(GroupPoint::real(x));
    }
    serde_json::from_value(v).map_err(|e| Error::parse(field, e.to_string()))
}

pub fn load_shifts(src: &str) -> Result<ShiftSet> {
    let (head, rest) = src.split_once(':').unwrap_or((src, ""));
    Ok(match head {
        "all" => ShiftSet::All,
        "half_line_pos" => ShiftSet::HalfLinePos,
        "half_line_neg" => ShiftSet::HalfLineNeg,
        "gen" => ShiftSet::SingleGenerator {
            generator: point(rest, "shifts")?,
        },
        "list" => ShiftSet::List {
            points: rest.split(',').map(|x| point(x, "shifts")).collect::<Result<_>>()?,
        },
        "arith" => {
            let (a, b) = rest
                .split_once(',')
                .ok_or_else(|| Error::parse("shifts", "arith takes <start>,<step>"))?;
            ShiftSet::Arithmetic {
                start: point(a, "shifts")?,
                step: point(b, "shifts")?,
            }
        }
        _ => serde_json::from_value(read_json(src, "shifts")?)
            .map_err(|e| Error::parse("shifts", e.to_string()))?,
    })
}

/// Parses `m_max=K,eps=pow2` or `m_max=K,eps=<value>`.
pub fn parse_schedule(src: &str, w: &Weight) -> Result<Vec<ScheduleItem>> {
    let mut m_max = 20u32;
    let mut eps: Option<f64> = None;
    for part in src.split(',') {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::parse("schedule", format!("expected key=value, got {part:?}")))?;
        match k.trim() {
            "m_max" => m_max = v.trim().parse().map_err(|_| Error::parse("schedule.m_max", "expected a positive integer"))?,
            "eps" if v.trim() == "pow2" => eps = None,
            "eps" => eps = Some(v.trim().parse().map_err(|_| Error::parse("schedule.eps", "expected pow2 or a number"))?),
            other => return Err(Error::parse("schedule", format!("unknown key {other:?}"))),
        }
    }
    let mut items = default_schedule(w.space(), m_max)?;
    if let Some(e) = eps {
        for it in &mut items {
            it.eps = e;
        }
    }
    Ok(items)
}

fn emit(out: Option<&str>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::InvalidArgument(format!("cannot write {path}: {e}"))),
        None => {
            let mut so = std::io::stdout().lock();
            let _ = so.write_all(text.as_bytes());
            Ok(())
        }
    }
}

fn report_json(config: &RunConfig, body: Value) -> String {
    let mut v = json!({
        "version": env!("CARGO_PKG_VERSION"),
        "config": config,
    });
    if let (Value::Object(a), Value::Object(b)) = (&mut v, body) {
        a.extend(b);
    }
    let mut s = serde_json::to_string_pretty(&v).expect("reports serialize");
    s.push('\n');
    s
}

fn check(a: &CheckArgs, config: &RunConfig) -> Result<i32> {
    let w = load_weight(&a.common.weight)?;
    let gamma = load_gamma(&a.gamma)?;
    let shifts = load_shifts(&a.shifts)?;
    let h = a.common.horizon;
    let discrete = || match &w {
        Weight::Discrete(d) => Ok(d),
        _ => Err(Error::Unsupported("unit-translation criteria need a weight on Z".into())),
    };
    let mut reports: Vec<CriterionReport> = Vec::new();
    let all = a.criterion == Criterion::All;
    if all || a.criterion == Criterion::Pointwise {
        reports.push(pointwise_gamma_criterion(&w, &shifts, &gamma, h)?);
    }
    if a.criterion == Criterion::SalasHypercyclic || (all && matches!(w, Weight::Discrete(_))) {
        reports.push(salas_hypercyclic(discrete()?, a.q_max, h)?);
    }
    if a.criterion == Criterion::SalasSupercyclic || (all && matches!(w, Weight::Discrete(_))) {
        reports.push(salas_supercyclic(discrete()?, a.q_max, h)?);
    }
    for (c, v) in [(Criterion::WindowedSup, BVariant::Sup), (Criterion::WindowedNorm, BVariant::Norm)] {
        if all || a.criterion == c {
            let schedule = parse_schedule(&a.schedule, &w)?;
            reports.push(theorem_b_check(&w, &shifts, &gamma, a.common.p, &schedule, h, v)?);
        }
    }
    let inconclusive = reports
        .iter()
        .any(|r| matches!(r.verdict, Verdict::Inconclusive { .. }));
    let body = json!({"reports": reports.iter().map(CriterionReport::to_json).collect::<Vec<_>>()});
    emit(a.common.out.as_deref(), &report_json(config, body))?;
    Ok(if inconclusive { EXIT_INCONCLUSIVE } else { EXIT_OK })
}

fn synth(a: &SynthArgs, config: &RunConfig) -> Result<i32> {
    let w = load_weight(&a.common.weight)?;
    let gamma = load_gamma(&a.gamma)?;
    let shifts = load_shifts(&a.shifts)?;
    let p = a.common.p;
    let trunc = a.trunc.unwrap_or(a.steps);
    if trunc > a.steps {
        return Err(Error::InvalidArgument(format!(
            "--trunc {trunc} exceeds --steps {}",
            a.steps
        )));
    }
    let stream = enumerate_targets(TargetConfig {
        space: w.space(),
        width: a.width,
        depth: a.depth,
        base_radius: a.base_radius,
    })?;
    let targets = stream.take(a.steps)?;
    let plan_targets: Vec<_> = targets.iter().map(|t| t.plan_target(p)).collect();
    let rule = match a.rule {
        RuleArg::Exact => PlanRule::Exact,
        RuleArg::Majorant => PlanRule::Majorant,
    };
    match greedy_plan(&w, &shifts, &gamma, p, &plan_targets, a.common.horizon, rule)? {
        GreedyOutcome::Plan(plan) => {
            let c = build_vector(&plan, &w, &targets, trunc)?;
            emit(a.common.out.as_deref(), &report_json(config, json!({"candidate": c.to_json()})))?;
            Ok(EXIT_OK)
        }
        out @ GreedyOutcome::Inconclusive { .. } => {
            emit(a.common.out.as_deref(), &report_json(config, json!({"inconclusive": out})))?;
            Ok(EXIT_INCONCLUSIVE)
        }
    }
}

fn verify(a: &VerifyArgs, config: &RunConfig) -> Result<i32> {
    let v = read_json(&a.candidate, "candidate")?;
    let v = v.get("candidate").unwrap_or(&v);
    let c = DenseVectorCandidate::from_json(v)?;
    let p = c.plan.p;
    let mut rows = Vec::new();
    let mut ok = true;
    for cert in &c.certificates {
        let step = &c.plan.steps[cert.n - 1];
        let lambda = num_complex::Complex64::new(step.lambda, 0.0);
        let mut measured: f64 = 0.0;
        for (f, g) in c.components.iter().zip(&c.targets[cert.n - 1].components) {
            measured = measured.max(orbit_error(f, g, &step.s, lambda, &c.weight, p)?);
        }
        let pass = measured <= cert.bound * (1.0 + a.slack);
        ok &= pass;
        rows.push(json!({"n": cert.n, "bound": cert.bound, "measured": measured, "ok": pass}));
    }
    let norm = c
        .components
        .iter()
        .map(|f| c.weight.weighted_norm(f, p))
        .collect::<Result<Vec<_>>>()?;
    let norm_ok = norm.iter().all(|x| *x <= c.norm_bound * (1.0 + a.slack));
    let body = json!({
        "verified": ok && norm_ok,
        "certificates": rows,
        "norms": norm,
        "norm_bound": c.norm_bound,
    });
    emit(a.out.as_deref(), &report_json(config, body))?;
    if ok && norm_ok {
        Ok(EXIT_OK)
    } else {
        eprintln!("error: a measured error exceeds its certificate");
        Ok(EXIT_ERROR)
    }
}

fn repro_cmd(a: &ReproArgs) -> Result<i32> {
    let mut params = ExperimentParams::defaults(&a.id);
    if let Some(p) = &a.p {
        params.p_values = p.clone();
    }
    if let Some(n) = &a.n {
        let (lo, hi) = n
            .split_once("..")
            .ok_or_else(|| Error::parse("n", "expected a range a..b"))?;
        let parse = |x: &str| x.trim().parse::<usize>().map_err(|_| Error::parse("n", format!("not an integer: {x:?}")));
        params.n_lo = parse(lo)?;
        params.n_hi = parse(hi)?;
        if params.n_lo > params.n_hi {
            return Err(Error::parse("n", "empty range"));
        }
    }
    if let Some(m) = a.n_max {
        params.n_max = m;
    }
    if let Some(h) = a.horizon {
        params.horizon = h;
    }
    let table = repro::run_experiment(&a.id, &params)?;
    emit(a.out.as_deref(), &table.to_csv())?;
    Ok(EXIT_OK)
}

fn mnorm(a: &MnormArgs, config: &RunConfig) -> Result<i32> {
    let w = load_weight(&a.weight)?;
    let s = point(&a.s, "s")?;
    let b = w.m_bound(&s, a.horizon)?;
    emit(a.out.as_deref(), &report_json(config, json!({"s": s, "m": b})))?;
    Ok(EXIT_OK)
}

fn norm(a: &NormArgs, config: &RunConfig) -> Result<i32> {
    let w = load_weight(&a.common.weight)?;
    let p = a.common.p;
    let body = match (&a.vector, &a.window) {
        (Some(v), _) => {
            let f = load_vector(v)?;
            json!({"weighted_norm": w.weighted_norm(&f, p)?, "weighted_norm_pow": w.weighted_norm_pow(&f, p)?})
        }
        (None, Some(k)) => {
            let k: Window = serde_json::from_value(read_json(k, "window")?)
                .map_err(|e| Error::parse("window", e.to_string()))?;
            json!({"local_norm": w.local_norm(&k, p)?, "local_norm_pow": w.local_norm_pow(&k, p)?, "sup": w.sup_on(&k)?})
        }
        (None, None) => return Err(Error::InvalidArgument("norm needs --vector or --window".into())),
    };
    emit(a.common.out.as_deref(), &report_json(config, body))?;
    Ok(EXIT_OK)
}

fn set_threads() {
    if let Some(n) = std::env::var("ORBITFORGE_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|n| *n > 0)
    {
        // a pool may already exist when running inside tests
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

/// Runs the CLI on `argv` (program name first) and returns the exit code.
pub fn run(argv: &[String]) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    set_threads();
    let name = match &cli.command {
        Command::Check(_) => "check",
        Command::Synth(_) => "synth",
        Command::Verify(_) => "verify",
        Command::Repro(_) => "repro",
        Command::Mnorm(_) => "mnorm",
        Command::Norm(_) => "norm",
    };
    let config = RunConfig {
        command: name.into(),
        argv: argv.iter().skip(1).cloned().collect(),
        params: json!({ "threads": std::env::var("ORBITFORGE_THREADS").ok() }),
    };
    let result = match &cli.command {
        Command::Check(a) => check(a, &config),
        Command::Synth(a) => synth(a, &config),
        Command::Verify(a) => verify(a, &config),
        Command::Repro(a) => repro_cmd(a),
        Command::Mnorm(a) => mnorm(a, &config),
        Command::Norm(a) => norm(a, &config),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inline_specs_parse() {
        assert_eq!(load_gamma("singleton:1").unwrap(), GammaSet::Singleton { modulus: 1.0, phase: 0.0 });
        assert_eq!(load_gamma("pow2:0..2").unwrap(), GammaSet::Grid { magnitudes: vec![1.0, 2.0, 4.0] });
        assert_eq!(load_shifts("gen:3").unwrap(), ShiftSet::SingleGenerator { generator: GroupPoint::Int(3) });
        assert_eq!(
            load_shifts("list:1,-2").unwrap(),
            ShiftSet::List { points: vec![GroupPoint::Int(1), GroupPoint::Int(-2)] }
        );
        assert_eq!(load_shifts("gen:0.5").unwrap(), ShiftSet::SingleGenerator { generator: GroupPoint::real(0.5) });
    }

    #[test]
    fn aliases_load_without_files() {
        assert_eq!(load_weight("ex52_v1.json").unwrap(), repro::ex52_v1());
        assert!(matches!(load_weight("r_peaks:5").unwrap(), Weight::Real(_)));
    }

    #[test]
    fn schedule_override() {
        let s = parse_schedule("m_max=3,eps=0.5", &repro::ex52_v1()).unwrap();
        assert_eq!(s.len(), 3);
        assert!(s.iter().all(|i| i.eps == 0.5));
        assert!(matches!(parse_schedule("m=3", &repro::ex52_v1()), Err(Error::Parse { .. })));
    }

    #[test]
    fn negative_weight_value_is_rejected() {
        let src = r#"{"space":"Z","window":{"lo":0,"hi":0,"values":[-1.0]},"left_tail":{"kind":"log2affine","a":0,"b":0},"right_tail":{"kind":"log2affine","a":0,"b":0}}"#;
        assert!(load_weight(src).is_err());
    }
}
