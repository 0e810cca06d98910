//! Command-line interface.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mopef_core::certify::{
    certify_benson, certify_geoffrion, certify_henig, divergence_study, two_objective_identity, Refinement,
    SampleControl, DEFAULT_TOL,
};
use mopef_core::instance::efficient_set;
use mopef_core::scalarize::{
    check_param_validity, check_subdiff_positive, check_unbounded, gradient_bounds, solve_scalarization,
    GridPlacement, ScalarizationSpec, SubdiffOptions,
};
use mopef_core::sweep::{cover_conic, generated_frontier, AxisValue, ParamGrid};
use mopef_core::transform::{
    apply_transform, apply_transform_analytic, check_jacobian_conditions, compare_proper_sets,
    compare_proper_sets_analytic, zarepisheh_conditions,
};
use mopef_core::{AnalyticInstance, DiscreteInstance};
use serde_json::{json, Map, Value};

use crate::error::{CliError, CliResult};
use crate::io::{self, AnalyticFile, InstanceFile};
use crate::parallel;

#[derive(Debug, Parser)]
#[command(name = "mopef", version, about = "Proper efficiency certificates, scalarizations and objective transformations")]
pub struct Cli {
    /// Report errors as a JSON object on stdout.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check an instance or analytic file and list its efficient points.
    Validate(ValidateArgs),
    /// Certify proper efficiency of one or all points of an instance.
    Certify(CertifyArgs),
    /// Solve a scalarization, check its gradients, or test unboundedness.
    Scalarize(ScalarizeArgs),
    /// Solve a scalarization over a parameter grid and write a CSV table.
    Sweep(SweepArgs),
    /// Run the conic coverage construction on every efficient point.
    Cover(CoverArgs),
    /// Apply, audit or compare an objective transformation.
    Transform(TransformArgs),
    /// Track the Geoffrion constant at anchors under refinement.
    Diverge(DivergeArgs),
}

/// Comma-separated coordinates, e.g. `0.5` or `-1,2`.
#[derive(Debug, Clone, PartialEq)]
pub struct Coords(pub Vec<f64>);

impl FromStr for Coords {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|_| format!("`{t}` is not a number")))
            .collect::<Result<_, _>>()
            .map(Coords)
    }
}

/// A closed interval written `lo:hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval(pub f64, pub f64);

impl FromStr for Interval {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (lo, hi) = s.split_once(':').ok_or_else(|| format!("expected `lo:hi`, got `{s}`"))?;
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("`{t}` is not a number"));
        Ok(Interval(num(lo)?, num(hi)?))
    }
}

#[derive(Debug, Args)]
pub struct Sampling {
    /// Points per axis (defaults to the file's `samples`).
    #[arg(long)]
    pub samples: Option<usize>,
    /// Grid spacing, overriding `--samples` for truncation schedules.
    #[arg(long)]
    pub spacing: Option<f64>,
    /// Radius replacing missing bounds for spacing schedules.
    #[arg(long)]
    pub truncation: Option<f64>,
}

impl Sampling {
    fn control(&self, analytic: &AnalyticInstance) -> SampleControl {
        SampleControl {
            samples: self.samples.unwrap_or(analytic.default_samples()),
            spacing: self.spacing,
            truncation: self.truncation,
        }
    }
}

#[derive(Debug, Args)]
pub struct Schedule {
    /// Strictly decreasing grid spacings.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "truncations")]
    pub spacings: Vec<f64>,
    /// Strictly increasing truncation radii.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub truncations: Vec<f64>,
}

impl Schedule {
    fn refinements(&self) -> CliResult<Vec<Refinement>> {
        match (self.spacings.is_empty(), self.truncations.is_empty()) {
            (false, true) => Ok(self.spacings.iter().map(|&h| Refinement::Spacing(h)).collect()),
            (true, false) => Ok(self.truncations.iter().map(|&t| Refinement::Truncation(t)).collect()),
            _ => Err(CliError::Usage("give a schedule with --spacings or --truncations".into())),
        }
    }
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long, conflicts_with = "analytic", required_unless_present = "analytic")]
    pub instance: Option<PathBuf>,
    #[arg(long)]
    pub analytic: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Geoffrion,
    Benson,
    Henig,
    All,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[arg(long)]
    pub instance: PathBuf,
    /// Point label; all points when omitted.
    #[arg(long)]
    pub point: Option<String>,
    #[arg(long, value_enum, default_value = "all")]
    pub method: Method,
    /// LP feasibility tolerance and tolerance of the two-objective cross-check.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScalarizeArgs {
    /// Scalarization spec JSON.
    #[arg(long)]
    pub spec: PathBuf,
    /// Solve exactly over this instance.
    #[arg(long)]
    pub instance: Option<PathBuf>,
    /// Check unboundedness over this analytic instance.
    #[arg(long, requires = "truncations")]
    pub analytic: Option<PathBuf>,
    /// Truncation radii for the unboundedness check.
    #[arg(long, value_delimiter = ',')]
    pub truncations: Vec<f64>,
    #[command(flatten)]
    pub sampling: Sampling,
    /// Check that finite-difference gradients are at least `--eps` on a grid.
    #[arg(long, requires_all = ["region", "eps"])]
    pub check_subdiff: bool,
    /// Box side `lo:hi`, once per objective.
    #[arg(long, allow_hyphen_values = true)]
    pub region: Vec<Interval>,
    #[arg(long, default_value_t = 21)]
    pub density: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub eps: Option<Coords>,
    /// Jitter grid nodes off kink locations with this seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Gradient comparison tolerance.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub instance: PathBuf,
    /// Parameter grid JSON.
    #[arg(long)]
    pub grid: PathBuf,
    /// CSV destination (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CoverArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    /// Transform spec JSON.
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long, conflicts_with = "analytic")]
    pub instance: Option<PathBuf>,
    #[arg(long)]
    pub analytic: Option<PathBuf>,
    /// Compare efficient sets and Geoffrion constants before and after.
    #[arg(long)]
    pub compare: bool,
    #[command(flatten)]
    pub schedule: Schedule,
    /// Anchor in decision space for analytic comparisons; repeatable.
    #[arg(long = "anchor", allow_hyphen_values = true)]
    pub anchors: Vec<Coords>,
    #[command(flatten)]
    pub sampling: Sampling,
    /// Audit Jacobian sign and kernel conditions on the domain boxes.
    #[arg(long)]
    pub audit: bool,
    #[arg(long, default_value_t = 21)]
    pub density: usize,
    /// Check continuity, derivative positivity and monotonicity per component.
    #[arg(long)]
    pub zarepisheh: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DivergeArgs {
    #[arg(long)]
    pub analytic: PathBuf,
    /// Anchor in decision space; repeatable.
    #[arg(long = "anchor", required = true, allow_hyphen_values = true)]
    pub anchors: Vec<Coords>,
    #[command(flatten)]
    pub schedule: Schedule,
    #[command(flatten)]
    pub sampling: Sampling,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("values serialize")
}

fn emit_json(out: Option<&Path>, v: &Value) -> CliResult<()> {
    io::emit(out, &pretty(v))
}

pub fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Validate(a) => validate(a),
        Command::Certify(a) => certify(a),
        Command::Scalarize(a) => scalarize(a),
        Command::Sweep(a) => sweep(a),
        Command::Cover(a) => cover(a),
        Command::Transform(a) => transform(a),
        Command::Diverge(a) => diverge(a),
    }
}

fn validate(a: &ValidateArgs) -> CliResult<()> {
    let report = if let Some(path) = &a.instance {
        let inst = io::load_instance(path)?;
        json!({ "valid": true, "p": inst.p(), "points": inst.len(), "efficient": efficient_set(&inst) })
    } else {
        let analytic = io::load_analytic(a.analytic.as_deref().expect("clap requires one input"))?;
        json!({
            "valid": true,
            "p": analytic.p(),
            "variables": analytic.variables().len(),
            "unbounded": analytic.has_unbounded_side(),
        })
    };
    emit_json(None, &report)
}

fn certify_point(inst: &DiscreteInstance, label: &str, method: Method, tol: f64) -> CliResult<Value> {
    let mut obj = Map::new();
    obj.insert("label".into(), json!(label));
    let want = |m: Method| method == Method::All || method == m;
    let geoffrion = want(Method::Geoffrion).then(|| certify_geoffrion(inst, label)).transpose()?;
    let henig = want(Method::Henig).then(|| certify_henig(inst, label)).transpose()?;
    if let Some(g) = &geoffrion {
        obj.insert("geoffrion".into(), to_json(g));
    }
    if want(Method::Benson) {
        obj.insert("benson".into(), to_json(&certify_benson(inst, label, tol)?));
    }
    if let Some(h) = &henig {
        obj.insert("henig".into(), to_json(h));
    }
    if let (Some(g), Some(h)) = (&geoffrion, &henig) {
        if let Some(id) = two_objective_identity(g, h, inst.p(), tol.max(1e-6)) {
            obj.insert("tradeoff_identity".into(), to_json(&id));
        }
    }
    Ok(Value::Object(obj))
}

fn certify(a: &CertifyArgs) -> CliResult<()> {
    let inst = io::load_instance(&a.instance)?;
    let report = match &a.point {
        Some(label) => certify_point(&inst, label, a.method, a.tol)?,
        None => {
            let rows = parallel::map_points(&inst, |k| certify_point(&inst, &inst.points()[k].label, a.method, a.tol));
            Value::Array(rows.into_iter().collect::<CliResult<_>>()?)
        }
    };
    emit_json(a.out.as_deref(), &report)
}

fn scalarize(a: &ScalarizeArgs) -> CliResult<()> {
    let spec: ScalarizationSpec = io::read_json(&a.spec)?;
    if a.instance.is_none() && a.analytic.is_none() && !a.check_subdiff {
        return Err(CliError::Usage("give --instance, --analytic or --check-subdiff".into()));
    }
    let mut report = Map::new();
    report.insert("spec".into(), to_json(&spec));
    let instance = a.instance.as_deref().map(io::load_instance).transpose()?;
    if let Some(inst) = &instance {
        report.insert("validity".into(), to_json(&check_param_validity(&spec, inst)));
        report.insert("result".into(), to_json(&solve_scalarization(&spec, inst)?));
    }
    if let Some(path) = &a.analytic {
        let analytic = io::load_analytic(path)?;
        let control = a.sampling.control(&analytic);
        report.insert("unbounded".into(), to_json(&check_unbounded(&analytic, &spec, &a.truncations, &control)?));
    }
    if a.check_subdiff {
        let region: Vec<(f64, f64)> = a.region.iter().map(|i| (i.0, i.1)).collect();
        let eps = &a.eps.as_ref().expect("clap requires eps").0;
        spec.validate(region.len())?;
        let spec = match &instance {
            Some(inst) => spec.resolved(inst),
            None => spec.clone(),
        };
        let placement = a.seed.map_or(GridPlacement::Closed, |seed| GridPlacement::Jittered { seed });
        let options = SubdiffOptions { placement, tol: a.tol };
        let sub = check_subdiff_positive(|y| spec.value(y), &region, a.density, eps, options)?;
        report.insert("subdiff".into(), to_json(&sub));
        if let Some(b) = gradient_bounds(&spec, region.len()) {
            report.insert("predicted_gradient_range".into(), to_json(&b));
        }
    }
    emit_json(a.out.as_deref(), &Value::Object(report))
}

fn axis_cell(v: &AxisValue) -> String {
    match v {
        AxisValue::Scalar(x) => x.to_string(),
        AxisValue::Vector(xs) => serde_json::to_string(xs).expect("numbers serialize"),
    }
}

fn sweep(a: &SweepArgs) -> CliResult<()> {
    let inst = io::load_instance(&a.instance)?;
    let grid: ParamGrid = io::read_json(&a.grid)?;
    let rows = parallel::sweep(&inst, &grid)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = rows
        .first()
        .map(|r| r.params.iter().map(|(n, _)| n.as_str().to_string()).collect())
        .unwrap_or_default();
    header.extend(["minimizers", "value", "feasible_count", "guaranteed_proper"].map(String::from));
    w.write_record(&header)?;
    for row in &rows {
        let mut rec: Vec<String> = row.params.iter().map(|(_, v)| axis_cell(v)).collect();
        rec.push(row.result.minimizers.iter().cloned().collect::<Vec<_>>().join(";"));
        rec.push(row.result.value.to_string());
        rec.push(row.result.feasible_count.to_string());
        rec.push(row.validity.guaranteed_proper.to_string());
        w.write_record(&rec)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?;
    let text = String::from_utf8(bytes).expect("csv output is utf-8");
    match &a.out {
        Some(p) => {
            std::fs::write(p, &text).map_err(|source| CliError::Write { path: p.clone(), source })?;
            let summary = json!({ "rows": rows.len(), "frontier": generated_frontier(&rows), "out": p });
            emit_json(None, &summary)
        }
        None => io::emit(None, &text),
    }
}

fn cover(a: &CoverArgs) -> CliResult<()> {
    let inst = io::load_instance(&a.instance)?;
    emit_json(a.out.as_deref(), &to_json(&cover_conic(&inst)?))
}

fn transform(a: &TransformArgs) -> CliResult<()> {
    let tspec = io::load_transform(&a.spec)?;
    let instance = a.instance.as_deref().map(io::load_instance).transpose()?;
    let analytic = a.analytic.as_deref().map(io::load_analytic).transpose()?;
    let mut report = Map::new();
    let apply_only = !a.compare && !a.audit && !a.zarepisheh;
    if (apply_only || a.compare || a.zarepisheh) && instance.is_none() && analytic.is_none() {
        return Err(CliError::Usage("give --instance or --analytic".into()));
    }
    if apply_only {
        let out = match (&instance, &analytic) {
            (Some(inst), _) => to_json(&InstanceFile::from_instance(&apply_transform(&tspec, inst)?)),
            (None, Some(an)) => to_json(&AnalyticFile::from_analytic(&apply_transform_analytic(&tspec, an)?)),
            _ => unreachable!(),
        };
        return emit_json(a.out.as_deref(), &out);
    }
    if a.compare {
        let cmp = match (&instance, &analytic) {
            (Some(inst), _) => compare_proper_sets(&tspec, inst)?,
            (None, Some(an)) => {
                if a.anchors.is_empty() {
                    return Err(CliError::Usage("analytic comparisons need at least one --anchor".into()));
                }
                let anchors: Vec<Vec<f64>> = a.anchors.iter().map(|c| c.0.clone()).collect();
                let control = a.sampling.control(an);
                compare_proper_sets_analytic(&tspec, an, &a.schedule.refinements()?, &anchors, &control)?
            }
            _ => unreachable!(),
        };
        report.insert("comparison".into(), to_json(&cmp));
    }
    if a.audit {
        let mut audit = Map::new();
        audit.insert("domain".into(), to_json(&check_jacobian_conditions(&tspec, a.density)?));
        if let Some(inv) = tspec.inverse_spec() {
            audit.insert("inverse_domain".into(), to_json(&check_jacobian_conditions(&inv, a.density)?));
        }
        report.insert("audit".into(), Value::Object(audit));
    }
    if a.zarepisheh {
        let inst = match (&instance, &analytic) {
            (Some(inst), _) => inst.clone(),
            (None, Some(an)) => {
                let control = a.sampling.control(an);
                an.sample(control.samples, control.truncation)?.instance
            }
            _ => unreachable!(),
        };
        report.insert("zarepisheh".into(), to_json(&zarepisheh_conditions(&tspec, &inst)?));
    }
    emit_json(a.out.as_deref(), &Value::Object(report))
}

fn diverge(a: &DivergeArgs) -> CliResult<()> {
    let analytic = io::load_analytic(&a.analytic)?;
    let schedule = a.schedule.refinements()?;
    let control = a.sampling.control(&analytic);
    let reports = a
        .anchors
        .iter()
        .map(|c| divergence_study(&analytic, &c.0, &schedule, &control).map(|r| to_json(&r)))
        .collect::<Result<Vec<_>, _>>()?;
    let out = if reports.len() == 1 { reports.into_iter().next().expect("one report") } else { Value::Array(reports) };
    emit_json(a.out.as_deref(), &out)
}
