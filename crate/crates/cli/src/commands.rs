use crate::instance::{self, Instance, LoadError};
use crate::report as r;
use clap::{Args, Parser, Subcommand, ValueEnum};
use ghostcalc_core::cochain::{
    cl_differential_component, cohomology_table, component_range, ga_differential_component, ghost_route, to_ghost,
    Cochain, CohomologyError,
};
use ghostcalc_core::derivations::OddDerivation;
use ghostcalc_core::linf::{
    check_cl_infinity, check_ga_infinity, check_ga_representation, check_representation, check_skew, CheckReport,
    SumMode,
};
use ghostcalc_core::rational::Vector;
use ghostcalc_core::Error as CoreError;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_MATH: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "ghostcalc", version, about = "Exact checks for skew and ordered bracket families")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Emit::Text)]
    pub emit: Emit,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the structure equations of an instance.
    Check(CheckArgs),
    /// Apply the differential to a named cochain.
    Differential(DifferentialArgs),
    /// Tabulate cochain dimensions, ranks and cohomology by ghost degree.
    Cohomology(CohomologyArgs),
    /// Compare the tensor and ghost differentials on every basis cochain.
    Correspond(CorrespondArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Sums {
    Unshuffle,
    Full,
}

impl From<Sums> for SumMode {
    fn from(s: Sums) -> Self {
        match s {
            Sums::Unshuffle => SumMode::Unshuffle,
            Sums::Full => SumMode::FullSymmetric,
        }
    }
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// Skew bracket equations.
    #[arg(long)]
    pub cl: bool,
    /// Ordered bracket equations.
    #[arg(long)]
    pub ga: bool,
    /// Representation equations.
    #[arg(long)]
    pub rep: bool,
    /// S² = 0 for the ghost derivation, extended by the representation if present.
    #[arg(long)]
    pub nilpotent: bool,
    /// Every check that applies to the instance (the default).
    #[arg(long)]
    pub all: bool,
    /// How symmetric sums are enumerated.
    #[arg(long, value_enum, default_value_t = Sums::Unshuffle)]
    pub sums: Sums,
    pub instance: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Route {
    Tensor,
    Ghost,
    Both,
}

#[derive(Debug, Args)]
pub struct DifferentialArgs {
    /// Single component S_k; the total differential when omitted.
    #[arg(long)]
    pub k: Option<usize>,
    /// Cochain to differentiate; optional when the instance defines exactly one.
    #[arg(long)]
    pub cochain: Option<String>,
    #[arg(long, value_enum, default_value_t = Route::Tensor)]
    pub route: Route,
    pub instance: PathBuf,
}

#[derive(Debug, Args)]
pub struct CohomologyArgs {
    #[arg(long, default_value_t = 3)]
    pub max_degree: usize,
    pub instance: PathBuf,
}

#[derive(Debug, Args)]
pub struct CorrespondArgs {
    /// Largest component k and largest source arity compared.
    #[arg(long, default_value_t = 3)]
    pub max_arity: usize,
    pub instance: PathBuf,
}

/// Result of one command: an exit code and both renderings.
pub struct Outcome {
    pub code: i32,
    pub text: Vec<String>,
    pub json: Value,
}

impl Outcome {
    fn input_error(messages: Vec<String>) -> Self {
        let text = messages.iter().map(|m| format!("error: {m}")).collect();
        Outcome { code: EXIT_INPUT, text, json: json!({ "format_version": 1, "error": { "kind": "input", "messages": messages } }) }
    }
}

fn load(path: &Path) -> Result<Instance, Outcome> {
    instance::load(path).map_err(|e| match e {
        LoadError::Invalid(errs) => Outcome::input_error(errs.iter().map(ToString::to_string).collect()),
        other => Outcome::input_error(vec![other.to_string()]),
    })
}

/// Core errors reaching the command layer are limits or shape mismatches of the input.
fn core_error(e: CoreError) -> Outcome {
    Outcome::input_error(vec![e.to_string()])
}

fn header(inst: &Instance, command: &str) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("format_version".into(), json!(1));
    m.insert("command".into(), json!(command));
    m.insert("instance".into(), json!(inst.name));
    m
}

fn describe(inst: &Instance) -> String {
    let md = inst.representation.as_ref().map(|r| format!(", module dimension {}", r.module_dim())).unwrap_or_default();
    format!(
        "instance {}: {} generators, {}, convention {}{}",
        inst.name,
        inst.ring.dim(),
        if inst.is_skew() { "skew" } else { "ordered" },
        inst.ring.convention().name(),
        md
    )
}

pub fn dispatch(cli: &Cli) -> Outcome {
    let res = match &cli.command {
        Command::Check(a) => check(a),
        Command::Differential(a) => differential(a),
        Command::Cohomology(a) => cohomology(a),
        Command::Correspond(a) => correspond(a),
    };
    res.unwrap_or_else(|o| o)
}

struct CheckResult {
    name: &'static str,
    passed: bool,
    lines: Vec<String>,
    witnesses: Vec<Value>,
    omitted: usize,
    warnings: Vec<String>,
}

fn from_report(inst: &Instance, name: &'static str, rep: CheckReport) -> CheckResult {
    let (shown, omitted) = r::truncated(&rep.residuals);
    CheckResult {
        name,
        passed: rep.passed(),
        lines: shown.iter().map(|x| r::residual(&inst.ring, x)).collect(),
        witnesses: shown.iter().map(|x| r::residual_json(&inst.ring, x)).collect(),
        omitted,
        warnings: rep.warnings,
    }
}

fn check(a: &CheckArgs) -> Result<Outcome, Outcome> {
    let explicit = a.cl || a.ga || a.rep || a.nilpotent;
    if a.all && explicit {
        return Err(Outcome::input_error(vec!["--all cannot be combined with individual checks".into()]));
    }
    let inst = load(&a.instance)?;
    let skew = inst.is_skew();
    let has_rep = inst.representation.is_some();
    let (cl, ga, rep, nil) = if explicit { (a.cl, a.ga, a.rep, a.nilpotent) } else { (skew, !skew, has_rep, skew) };
    let mut usage = Vec::new();
    if (cl || nil) && !skew {
        usage.push("--cl and --nilpotent need a skew instance".to_string());
    }
    if ga && skew {
        usage.push("--ga needs an ordered (non-skew) instance".to_string());
    }
    if rep && !has_rep {
        usage.push("--rep needs an instance with a representation".to_string());
    }
    if !usage.is_empty() {
        return Err(Outcome::input_error(usage));
    }
    let mode: SumMode = a.sums.into();
    let mut results = Vec::new();
    if cl {
        let skew_report = check_skew(&inst.brackets).map_err(core_error)?;
        let mut res = from_report(&inst, "cl", check_cl_infinity(&inst.brackets, mode).map_err(core_error)?);
        if !skew_report.passed() {
            res.passed = false;
            for v in &skew_report.violations {
                res.lines.push(format!("skewness at {}: {}", r::tuple(&inst.ring, &v.tuple), v.detail));
                res.witnesses.push(json!({ "inputs": r::tuple_json(&inst.ring, &v.tuple), "skewness": v.detail }));
            }
        }
        results.push(res);
    }
    if ga {
        results.push(from_report(&inst, "ga", check_ga_infinity(&inst.brackets).map_err(core_error)?));
    }
    if rep {
        let rf = inst.representation.as_ref().expect("checked above");
        let report = if skew {
            check_representation(rf, &inst.brackets, mode)
        } else {
            check_ga_representation(rf, &inst.brackets)
        };
        results.push(from_report(&inst, "rep", report.map_err(core_error)?));
    }
    if nil {
        let d = OddDerivation::new(&inst.brackets, inst.representation.as_ref(), Default::default()).map_err(core_error)?;
        let ws = d.square_residual().map_err(core_error)?;
        let (shown, omitted) = r::truncated(&ws);
        results.push(CheckResult {
            name: "nilpotent",
            passed: ws.is_empty(),
            lines: shown.iter().map(|w| r::square_witness(&inst.ring, w)).collect(),
            witnesses: shown.iter().map(|w| r::square_witness_json(&inst.ring, w)).collect(),
            omitted,
            warnings: Vec::new(),
        });
    }

    let passed = results.iter().all(|c| c.passed);
    let mut text = vec![describe(&inst)];
    let mut checks = Vec::new();
    for c in &results {
        text.push(format!("{:<10} {}", c.name, if c.passed { "PASS" } else { "FAIL" }));
        text.extend(c.warnings.iter().map(|w| format!("  warning: {w}")));
        text.extend(c.lines.iter().map(|l| format!("  {l}")));
        if c.omitted > 0 {
            text.push(format!("  ... {} more", c.omitted));
        }
        checks.push(json!({
            "name": c.name,
            "passed": c.passed,
            "witnesses": c.witnesses,
            "omitted_witnesses": c.omitted,
            "warnings": c.warnings,
        }));
    }
    let mut j = header(&inst, "check");
    j.insert("passed".into(), json!(passed));
    j.insert("checks".into(), Value::from(checks));
    Ok(Outcome { code: if passed { EXIT_PASS } else { EXIT_MATH }, text, json: Value::Object(j) })
}

fn pick_cochain<'a>(inst: &'a Instance, name: Option<&str>) -> Result<(&'a str, &'a Cochain), Outcome> {
    match name {
        Some(n) => inst
            .cochains
            .iter()
            .find(|(m, _)| m == n)
            .map(|(m, c)| (m.as_str(), c))
            .ok_or_else(|| Outcome::input_error(vec![format!("no cochain named `{n}`")])),
        None => match inst.cochains.as_slice() {
            [(m, c)] => Ok((m.as_str(), c)),
            [] => Err(Outcome::input_error(vec!["the instance defines no cochains".into()])),
            _ => Err(Outcome::input_error(vec!["several cochains defined; choose one with --cochain".into()])),
        },
    }
}

type Parts = BTreeMap<usize, Cochain>;

fn add_part(parts: &mut Parts, c: Cochain) -> Result<(), Outcome> {
    match parts.get_mut(&c.arity()) {
        Some(e) => e.add_scaled(&c, &num_traits::One::one()).map_err(core_error),
        None => {
            parts.insert(c.arity(), c);
            Ok(())
        }
    }
}

fn differential(a: &DifferentialArgs) -> Result<Outcome, Outcome> {
    let inst = load(&a.instance)?;
    let (name, omega) = pick_cochain(&inst, a.cochain.as_deref())?;
    let skew = inst.is_skew();
    if !skew && a.route != Route::Tensor {
        return Err(Outcome::input_error(vec!["the ghost route needs a skew instance".into()]));
    }
    if a.k == Some(0) {
        return Err(Outcome::input_error(vec!["--k must be at least 1".into()]));
    }
    let rep = inst.representation.as_ref();
    let ks: Vec<usize> = match a.k {
        Some(k) => vec![k],
        None => component_range(&inst.brackets, rep).into_iter().collect(),
    };
    let mut tensor = Parts::new();
    let mut ghost = Parts::new();
    let mut warnings = Vec::new();
    for &k in &ks {
        if a.route != Route::Ghost {
            let part = if skew {
                cl_differential_component(k, omega, rep, &inst.brackets, SumMode::Unshuffle).map_err(core_error)?
            } else {
                let (c, w) = ga_differential_component(k, omega, rep, &inst.brackets).map_err(core_error)?;
                warnings.extend(w);
                c
            };
            add_part(&mut tensor, part)?;
        }
        if a.route != Route::Tensor {
            add_part(&mut ghost, ghost_route(k, omega, rep, &inst.brackets).map_err(core_error)?)?;
        }
    }
    tensor.retain(|_, c| !c.is_zero());
    ghost.retain(|_, c| !c.is_zero());
    warnings.dedup();

    let mut agree = None;
    if a.route == Route::Both {
        let same = tensor.len() == ghost.len()
            && tensor.iter().zip(&ghost).all(|((ka, ca), (kb, cb))| {
                ka == kb && matches!((to_ghost(ca), to_ghost(cb)), (Ok(x), Ok(y)) if x == y)
            });
        agree = Some(same);
    }
    let shown = if a.route == Route::Ghost { &ghost } else { &tensor };

    let component = a.k.map_or("total".to_string(), |k| format!("S_{k}"));
    let mut text = vec![describe(&inst), format!("{component} applied to `{name}` (arity {})", omega.arity())];
    text.extend(warnings.iter().map(|w| format!("warning: {w}")));
    if shown.is_empty() {
        text.push("result: 0".into());
    }
    for (n, c) in shown {
        text.push(format!("arity {n}:"));
        text.extend(r::cochain_lines(&inst.ring, c));
    }
    if let Some(same) = agree {
        text.push(format!("tensor and ghost routes {}", if same { "agree" } else { "DISAGREE" }));
        if !same {
            for (n, c) in &ghost {
                text.push(format!("ghost route, arity {n}:"));
                text.extend(r::cochain_lines(&inst.ring, c));
            }
        }
    }

    let mut j = header(&inst, "differential");
    j.insert("cochain".into(), json!(name));
    j.insert("component".into(), a.k.map_or(Value::Null, Value::from));
    j.insert("route".into(), json!(format!("{:?}", a.route).to_lowercase()));
    j.insert("result".into(), Value::from(shown.values().map(|c| r::cochain_json(&inst.ring, c)).collect::<Vec<_>>()));
    j.insert("warnings".into(), json!(warnings));
    if let Some(same) = agree {
        j.insert("routes_agree".into(), json!(same));
        if !same {
            j.insert("ghost_result".into(), Value::from(ghost.values().map(|c| r::cochain_json(&inst.ring, c)).collect::<Vec<_>>()));
        }
    }
    j.insert("passed".into(), json!(agree.unwrap_or(true)));
    let code = if agree == Some(false) { EXIT_MATH } else { EXIT_PASS };
    Ok(Outcome { code, text, json: Value::Object(j) })
}

fn cohomology(a: &CohomologyArgs) -> Result<Outcome, Outcome> {
    let inst = load(&a.instance)?;
    if !inst.is_skew() {
        return Err(Outcome::input_error(vec!["cohomology needs a skew instance".into()]));
    }
    let mut j = header(&inst, "cohomology");
    match cohomology_table(&inst.brackets, inst.representation.as_ref(), a.max_degree) {
        Ok(rows) => {
            let mut text = vec![describe(&inst), format!("{:>3} {:>8} {:>8} {:>8}", "n", "dim C^n", "rank d_n", "dim H^n")];
            text.extend(
                rows.iter().map(|x| format!("{:>3} {:>8} {:>8} {:>8}", x.degree, x.cochain_dim, x.rank, x.cohomology_dim)),
            );
            let table: Vec<Value> = rows
                .iter()
                .map(|x| json!({ "degree": x.degree, "cochain_dim": x.cochain_dim, "rank": x.rank, "cohomology_dim": x.cohomology_dim }))
                .collect();
            j.insert("passed".into(), json!(true));
            j.insert("rows".into(), Value::from(table));
            Ok(Outcome { code: EXIT_PASS, text, json: Value::Object(j) })
        }
        Err(CohomologyError::NotNilpotent(ws)) => {
            let (shown, omitted) = r::truncated(&ws);
            let mut text = vec![describe(&inst), "refused: the differential does not square to zero".into()];
            text.extend(shown.iter().map(|w| format!("  {}", r::square_witness(&inst.ring, w))));
            if omitted > 0 {
                text.push(format!("  ... {omitted} more"));
            }
            j.insert("passed".into(), json!(false));
            j.insert(
                "witnesses".into(),
                Value::from(shown.iter().map(|w| r::square_witness_json(&inst.ring, w)).collect::<Vec<_>>()),
            );
            j.insert("omitted_witnesses".into(), json!(omitted));
            Ok(Outcome { code: EXIT_MATH, text, json: Value::Object(j) })
        }
        Err(CohomologyError::Other(e)) => Err(core_error(e)),
    }
}

fn correspond(a: &CorrespondArgs) -> Result<Outcome, Outcome> {
    let inst = load(&a.instance)?;
    if !inst.is_skew() {
        return Err(Outcome::input_error(vec!["correspond needs a skew instance".into()]));
    }
    if a.max_arity == 0 {
        return Err(Outcome::input_error(vec!["--max-arity must be at least 1".into()]));
    }
    let rep = inst.representation.as_ref();
    let md = inst.module_dim();
    let limit = inst.ring.limits().max_arity;
    let mut compared = 0usize;
    let mut failures = Vec::new();
    let mut failures_json = Vec::new();
    let mut per_k = Vec::new();
    for k in 1..=a.max_arity {
        let mut count = 0usize;
        for n in 0..=a.max_arity {
            if n + k - 1 > limit {
                continue;
            }
            let mut sources: Vec<(String, Cochain)> = Cochain::basis(&inst.ring, n, md, true)
                .map_err(core_error)?
                .into_iter()
                .map(|c| (String::new(), c))
                .collect();
            sources.extend(inst.cochains.iter().filter(|(_, c)| c.arity() == n).cloned());
            for (label, omega) in sources {
                let tensor = cl_differential_component(k, &omega, rep, &inst.brackets, SumMode::Unshuffle).map_err(core_error)?;
                let ghost = ghost_route(k, &omega, rep, &inst.brackets).map_err(core_error)?;
                count += 1;
                if to_ghost(&tensor).map_err(core_error)? != to_ghost(&ghost).map_err(core_error)? {
                    let what = if label.is_empty() {
                        let (t, v) = omega.values().iter().next().map(|(t, v)| (t.clone(), v.clone())).unwrap_or_else(|| (Vec::new(), Vector::zeros(md)));
                        format!("basis cochain {} {}", r::tuple(&inst.ring, &t), r::coords(&v))
                    } else {
                        format!("cochain `{label}`")
                    };
                    failures.push(format!("S_{k} on {what}"));
                    failures_json.push(json!({ "k": k, "source_arity": n, "source": what }));
                }
            }
        }
        compared += count;
        per_k.push(json!({ "k": k, "compared": count }));
    }
    let passed = failures.is_empty();
    let mut text = vec![describe(&inst)];
    text.push(format!(
        "compared {compared} cochains for k <= {}: {}",
        a.max_arity,
        if passed { "PASS" } else { "FAIL" }
    ));
    let (shown, omitted) = r::truncated(&failures);
    text.extend(shown.iter().map(|f| format!("  mismatch: {f}")));
    if omitted > 0 {
        text.push(format!("  ... {omitted} more"));
    }
    let mut j = header(&inst, "correspond");
    j.insert("passed".into(), json!(passed));
    j.insert("max_arity".into(), json!(a.max_arity));
    j.insert("components".into(), Value::from(per_k));
    j.insert("mismatches".into(), Value::from(r::truncated(&failures_json).0.to_vec()));
    Ok(Outcome { code: if passed { EXIT_PASS } else { EXIT_MATH }, text, json: Value::Object(j) })
}
