//! The `orba` command line: scenario runner, bundled fixtures and report output.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails or an
//! operation errors, 2 when input is invalid.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bochner::{bochner_dominate, bochner_integral, pettis_check, simple_dominate};
use crate::cone_analysis::{
    min_dominator, renorm_eps, scan, DominatingConstant, ScanConfig,
};
use crate::convolution::{
    convolve_direct, convolve_via_integral, weight_builder, Chain, FiniteGroup,
    FiniteMeasureOnGroup, Group, GroupFunction, Growth,
};
use crate::covers::{
    koethe_norm, merged_norm, merged_norm_grid, principal_ideal_norm, Cover, CoverManifest,
    FunctionNorm, GridConfig,
};
use crate::error::{OrbaError, Result};
use crate::measure::{l1_norm, FunctionFile, IntegrableFunction, MeasureSpace};
use crate::space::{sum_space, OrderedSpace, SpaceDescriptor, SumEmbedding};
use crate::tol::Tolerances;
use crate::Matrix;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "orba", version, about = "Ordered Banach spaces, cone LPs and Bochner integrals")]
pub struct Cli {
    /// Write the report here (a directory gets one file per scenario).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Export ratio tables as CSV.
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
    #[arg(long, global = true, env = "ORBA_SEED", default_value_t = 42)]
    pub seed: u64,
    /// Worker threads for independent scenarios.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[arg(long, global = true)]
    pub tol_lp: Option<f64>,
    #[arg(long, global = true)]
    pub tol_num: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run scenario files.
    Run { files: Vec<PathBuf> },
    /// Run a bundled fixture.
    Reproduce { id: String },
    /// List bundled fixtures.
    ListExamples,
    /// Print a JSON schema.
    Schema {
        #[arg(value_enum, default_value = "scenario")]
        kind: SchemaKind,
    },
    /// Convolve a measure with a function on a group.
    Convolve {
        /// `z` for the integers or `zN` for the cyclic group of order N.
        #[arg(long, default_value = "z")]
        group: String,
        #[arg(long, default_value_t = 64)]
        window: i64,
        #[arg(long, value_enum, default_value = "linear")]
        chain: ChainArg,
        #[arg(long)]
        mu: PathBuf,
        #[arg(long)]
        f: PathBuf,
        /// Also compute the convolution as a cover integral and compare.
        #[arg(long)]
        check_integral: bool,
    },
    /// Integrate a function through a cover manifest.
    CoverIntegrate {
        #[arg(long)]
        cover: PathBuf,
        #[arg(long)]
        function: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SchemaKind {
    Scenario,
    Report,
    Space,
    Cover,
    Function,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ChainArg {
    Linear,
    Dyadic,
}

impl From<ChainArg> for Chain {
    fn from(c: ChainArg) -> Self {
        match c {
            ChainArg::Linear => Chain::Linear,
            ChainArg::Dyadic => Chain::Dyadic,
        }
    }
}

/// A named operation with the spaces it refers to.
#[derive(Debug, Clone, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<Tolerances>,
    /// Spaces by id; operations refer to them by key.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub spaces: BTreeMap<String, SpaceDescriptor>,
    pub operation: Operation,
}

/// A scenario file holds one scenario or a list.
#[derive(Debug, Clone, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct ScenarioList {
    pub scenarios: Vec<Scenario>,
}

#[derive(Debug, Clone, Serialize, Deserialize, JsonSchema)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
pub enum Operation {
    Norm { space: String, x: Vec<f64> },
    Leq { space: String, x: Vec<f64>, y: Vec<f64> },
    MinDominator { space: String, x: Vec<f64> },
    Scan {
        space: String,
        samples: usize,
        #[serde(default)]
        extra: Vec<Vec<f64>>,
    },
    Renorm { space: String, epsilon: f64, samples: usize },
    /// Alternating vectors in the partial-sum order of each dimension.
    Alternating { dims: Vec<usize> },
    Integrate { function: FunctionFile },
    Dominate {
        function: FunctionFile,
        epsilon: f64,
        #[serde(default = "default_samples")]
        samples: usize,
    },
    CoverIntegrate { cover: CoverManifest, function: FunctionFile },
    KoetheNorm { w: Vec<f64>, nu: Vec<f64>, f: Vec<f64> },
    MergedNorm {
        w1: Vec<f64>,
        w2: Vec<f64>,
        nu: Vec<f64>,
        f: Vec<f64>,
        #[serde(default)]
        grid_step: Option<f64>,
    },
    PrincipalIdealNorm { u: Vec<f64>, f: Vec<f64> },
    Convolve {
        group: Group,
        mu: FiniteMeasureOnGroup,
        f: GroupFunction,
        #[serde(default)]
        check_integral: bool,
    },
    WeightBuilder { group: Group, f: GroupFunction },
}

fn default_samples() -> usize {
    200
}

impl Operation {
    pub fn name(&self) -> &'static str {
        match self {
            Operation::Norm { .. } => "norm",
            Operation::Leq { .. } => "leq",
            Operation::MinDominator { .. } => "min_dominator",
            Operation::Scan { .. } => "scan",
            Operation::Renorm { .. } => "renorm",
            Operation::Alternating { .. } => "alternating",
            Operation::Integrate { .. } => "integrate",
            Operation::Dominate { .. } => "dominate",
            Operation::CoverIntegrate { .. } => "cover_integrate",
            Operation::KoetheNorm { .. } => "koethe_norm",
            Operation::MergedNorm { .. } => "merged_norm",
            Operation::PrincipalIdealNorm { .. } => "principal_ideal_norm",
            Operation::Convolve { .. } => "convolve",
            Operation::WeightBuilder { .. } => "weight_builder",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, JsonSchema)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }

    /// `|actual - expected| <= tol`.
    fn close(name: &str, actual: f64, expected: f64, tol: f64) -> Self {
        let d = (actual - expected).abs();
        Self::new(
            name,
            d <= tol,
            format!("actual {actual}, expected {expected}, |diff| {d:e} (tol {tol:e})"),
        )
    }

    fn at_most(name: &str, actual: f64, bound: f64) -> Self {
        Self::new(name, actual <= bound, format!("{actual} <= {bound}"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, JsonSchema)]
pub struct ErrorReport {
    pub kind: String,
    pub message: String,
    pub input_error: bool,
}

impl From<&OrbaError> for ErrorReport {
    fn from(e: &OrbaError) -> Self {
        Self {
            kind: e.kind().to_owned(),
            message: e.to_string(),
            input_error: e.is_input_error(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, JsonSchema)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, JsonSchema)]
pub struct Report {
    pub schema_version: u32,
    pub name: String,
    pub seed: u64,
    pub operation: String,
    pub input: Value,
    pub output: Value,
    pub checks: Vec<Check>,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<Table>,
    pub wall_time_ms: f64,
}

impl Report {
    /// 0 pass, 1 failed check or operation error, 2 invalid input.
    pub fn exit_code(&self) -> i32 {
        match &self.error {
            Some(e) if e.input_error => 2,
            Some(_) => 1,
            None if self.passed => 0,
            None => 1,
        }
    }
}

/// What an operation produced before it is wrapped in a [`Report`].
#[derive(Debug, Default)]
struct Outcome {
    output: Value,
    checks: Vec<Check>,
    table: Option<Table>,
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

fn report(
    name: &str,
    seed: u64,
    operation: &str,
    input: Value,
    run: impl FnOnce() -> Result<Outcome>,
) -> Report {
    let start = Instant::now();
    let result = run();
    let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    let (outcome, error) = match result {
        Ok(o) => (o, None),
        Err(e) => (Outcome::default(), Some(ErrorReport::from(&e))),
    };
    let passed = error.is_none() && outcome.checks.iter().all(|c| c.passed);
    Report {
        schema_version: SCHEMA_VERSION,
        name: name.to_owned(),
        seed,
        operation: operation.to_owned(),
        input,
        output: outcome.output,
        checks: outcome.checks,
        passed,
        error,
        table: outcome.table,
        wall_time_ms,
    }
}

/// Spaces of a scenario, built with its tolerances.
struct Registry {
    spaces: BTreeMap<String, Arc<OrderedSpace>>,
}

impl Registry {
    fn build(descriptors: &BTreeMap<String, SpaceDescriptor>, tol: Tolerances) -> Result<Self> {
        let spaces = descriptors
            .iter()
            .map(|(k, d)| Ok((k.clone(), Arc::new(d.build_with(k, tol)?))))
            .collect::<Result<_>>()?;
        Ok(Self { spaces })
    }

    fn get(&self, id: &str) -> Result<Arc<OrderedSpace>> {
        self.spaces
            .get(id)
            .or_else(|| self.spaces.values().find(|s| s.id().as_str() == id))
            .cloned()
            .ok_or_else(|| OrbaError::Descriptor(format!("unknown space `{id}`")))
    }

    fn function(&self, file: &FunctionFile) -> Result<IntegrableFunction> {
        file.build(|id| self.get(id).ok())
    }
}

fn tolerances(cli_lp: Option<f64>, cli_num: Option<f64>, scenario: Option<Tolerances>) -> Tolerances {
    let mut t = scenario.unwrap_or_default();
    if let Some(lp) = cli_lp {
        t.lp = lp;
    }
    if let Some(num) = cli_num {
        t.num = num;
    }
    t
}

/// Runs one scenario.
pub fn run_scenario(s: &Scenario, default_seed: u64, tol_lp: Option<f64>, tol_num: Option<f64>) -> Report {
    let seed = s.seed.unwrap_or(default_seed);
    let tol = tolerances(tol_lp, tol_num, s.tolerances);
    let input = to_value(s);
    report(&s.name, seed, s.operation.name(), input, || {
        let reg = Registry::build(&s.spaces, tol)?;
        execute(&s.operation, &reg, seed, tol)
    })
}

fn execute(op: &Operation, reg: &Registry, seed: u64, tol: Tolerances) -> Result<Outcome> {
    match op {
        Operation::Norm { space, x } => {
            let s = reg.get(space)?;
            let v = s.norm(&s.vector(x.clone())?)?;
            Ok(Outcome {
                output: json!({ "norm": v }),
                ..Outcome::default()
            })
        }
        Operation::Leq { space, x, y } => {
            let s = reg.get(space)?;
            let r = s.leq(&s.vector(x.clone())?, &s.vector(y.clone())?)?;
            Ok(Outcome {
                output: json!({ "leq": r }),
                ..Outcome::default()
            })
        }
        Operation::MinDominator { space, x } => {
            let s = reg.get(space)?;
            let xv = s.vector(x.clone())?;
            let d = min_dominator(&s, &xv)?;
            let norm = s.norm(&xv)?;
            Ok(Outcome {
                checks: vec![
                    Check::new("sandwich", s.sandwiched(&xv, &d.a)?, "-a ⪯ x ⪯ a"),
                    Check::at_most("residual", d.residual, tol.lp),
                ],
                output: json!({ "a": d.a.coords(), "value": d.value, "norm": norm, "residual": d.residual }),
                table: None,
            })
        }
        Operation::Scan { space, samples, extra } => {
            let s = reg.get(space)?;
            let extra = extra.iter().map(|e| s.vector(e.clone())).collect::<Result<_>>()?;
            let r = scan(&s, &ScanConfig::new(*samples, seed).with_extra(extra))?;
            let mut checks = vec![Check::new(
                "constant_at_least_one",
                !r.below_one,
                format!("sampled C = {}", r.c_lower),
            )];
            if let Some(c) = r.exact_constant {
                checks.push(Check::at_most("exact_constant", r.c_lower, c + tol.num));
            }
            Ok(Outcome {
                output: to_value(&r),
                checks,
                table: None,
            })
        }
        Operation::Renorm { space, epsilon, samples } => renorm_outcome(reg.get(space)?, &[*epsilon], *samples, seed),
        Operation::Alternating { dims } => alternating_outcome(dims),
        Operation::Integrate { function } => {
            let f = reg.function(function)?;
            let i = bochner_integral(&f)?;
            let norm = l1_norm(&f)?;
            let mut checks = vec![Check::at_most(
                "triangle_inequality",
                f.carrier().norm(&i.value)?,
                norm.upper() * (1.0 + tol.num) + tol.num,
            )];
            match pettis_check(&f, &i.value) {
                Ok(p) => checks.push(Check::new(
                    "functional_integrals",
                    p.matches,
                    format!("max deviation {:e}", p.max_deviation),
                )),
                Err(OrbaError::Capability(_)) => {}
                Err(e) => return Err(e),
            }
            Ok(Outcome {
                output: json!({
                    "integral": i.value.coords(),
                    "error_bound": i.error_bound,
                    "l1_norm": norm,
                }),
                checks,
                table: None,
            })
        }
        Operation::Dominate {
            function,
            epsilon,
            samples,
        } => {
            let f = reg.function(function)?;
            let r = scan(f.carrier(), &ScanConfig::new(*samples, seed))?;
            let c = DominatingConstant::from_scan(&r);
            let pair = if f.is_simple() {
                simple_dominate(&f, *epsilon, c)?
            } else {
                bochner_dominate(&f, *epsilon, c)?
            };
            let sandwich = f
                .values()
                .iter()
                .zip(pair.g.values())
                .map(|(x, a)| f.carrier().sandwiched(x, a))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .all(|b| b);
            Ok(Outcome {
                output: json!({
                    "g": pair.g.values().iter().map(|v| v.coords().to_vec()).collect::<Vec<_>>(),
                    "l1_f": pair.l1_f,
                    "l1_g": pair.l1_g,
                    "bound": pair.bound,
                    "constant": pair.constant,
                    "stages": pair.stages,
                }),
                checks: vec![
                    Check::new("sandwich", sandwich, "-g ⪯ f ⪯ g at every atom"),
                    Check::at_most("l1_bound", pair.l1_g, pair.bound),
                ],
                table: None,
            })
        }
        Operation::CoverIntegrate { cover, function } => cover_outcome(cover, function, tol),
        Operation::KoetheNorm { w, nu, f } => Ok(Outcome {
            output: json!({ "norm": koethe_norm(w, nu, f)? }),
            ..Outcome::default()
        }),
        Operation::MergedNorm {
            w1,
            w2,
            nu,
            f,
            grid_step,
        } => {
            let closed = merged_norm(w1, w2, nu, f)?;
            let cfg = GridConfig {
                step: grid_step.unwrap_or(GridConfig::default().step),
                ..GridConfig::default()
            };
            let r1 = FunctionNorm::WeightedL1Koethe { w: w1.clone(), nu: nu.clone() };
            let r2 = FunctionNorm::WeightedL1Koethe { w: w2.clone(), nu: nu.clone() };
            let grid = merged_norm_grid(&r1, &r2, f, cfg)?;
            Ok(Outcome {
                output: json!({ "merged_norm": closed, "grid_oracle": grid }),
                checks: vec![Check::close("grid_agreement", closed, grid, 1e-6)],
                table: None,
            })
        }
        Operation::PrincipalIdealNorm { u, f } => Ok(Outcome {
            output: json!({ "norm": principal_ideal_norm(u, f)? }),
            ..Outcome::default()
        }),
        Operation::Convolve {
            group,
            mu,
            f,
            check_integral,
        } => convolve_outcome(group, mu, f, *check_integral),
        Operation::WeightBuilder { group, f } => {
            let w = weight_builder(group, f)?;
            let dominated = w.w.iter().zip(&w.v).all(|(a, b)| a >= b);
            Ok(Outcome {
                checks: vec![
                    Check::new("w_dominates_v", dominated, "w >= v on the window"),
                    Check::at_most("translate_bound", w.max_step_ratio, 1.0),
                ],
                output: to_value(&w),
                table: None,
            })
        }
    }
}

fn alternating_outcome(dims: &[usize]) -> Result<Outcome> {
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    for &n in dims {
        let s = OrderedSpace::partial_sum_space(format!("ps-{n}"), n)?;
        let x = s.vector((0..n).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect())?;
        let a = s.basis_vector(0);
        let nx = s.norm(&x)?;
        let na = s.norm(&a)?;
        let d = min_dominator(&s, &x)?;
        let ratio = nx / d.value;
        checks.push(Check::new(format!("sandwich_n{n}"), s.sandwiched(&x, &a)?, "-a ⪯ x_n ⪯ a"));
        checks.push(Check::new(
            format!("norms_n{n}"),
            nx == n as f64 && na == 1.0,
            format!("‖x_n‖ = {nx}, ‖a‖ = {na}"),
        ));
        checks.push(Check::close(&format!("n_norm_n{n}"), d.value, 1.0, 1e-9));
        checks.push(Check::close(&format!("ratio_n{n}"), ratio, n as f64, 1e-8 * n as f64));
        rows.push(vec![n as f64, nx, na, d.value, ratio]);
    }
    Ok(Outcome {
        output: json!({ "rows": rows }),
        checks,
        table: Some(Table {
            headers: ["n", "norm_x", "norm_a", "n_norm_x", "ratio"].map(String::from).to_vec(),
            rows,
        }),
    })
}

fn renorm_outcome(space: Arc<OrderedSpace>, epsilons: &[f64], samples: usize, seed: u64) -> Result<Outcome> {
    let base = scan(&space, &ScanConfig::new(samples, seed))?;
    let c = base.exact_constant.unwrap_or(base.c_lower).max(1.0);
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    for &eps in epsilons {
        let r = renorm_eps(space.clone(), eps)?.dominating_ratio_scan(samples, seed)?;
        let general = c * (1.0 + eps) / (1.0 + eps * c);
        if base.exact_constant.is_some() {
            checks.push(Check::at_most(&format!("square_bound_eps{eps}"), r.ratio, r.bound + 1e-6));
        }
        checks.push(Check::at_most(
            &format!("constant_bound_eps{eps}"),
            r.ratio,
            general * (1.0 + 1e-9) + 1e-9,
        ));
        rows.push(vec![eps, r.ratio, r.bound, general]);
    }
    Ok(Outcome {
        output: json!({ "space": space.id().as_str(), "base_constant": c, "rows": rows }),
        checks,
        table: Some(Table {
            headers: ["epsilon", "rho_ratio", "square_bound", "constant_bound"].map(String::from).to_vec(),
            rows,
        }),
    })
}

fn cover_outcome(manifest: &CoverManifest, function: &FunctionFile, tol: Tolerances) -> Result<Outcome> {
    let cover = Cover::from_manifest(manifest)?;
    let amb = cover.ambient().clone();
    let f = function.build(|id| (id == amb.id().as_str() || id == "ambient").then(|| amb.clone()))?;
    let r = cover.u_integral(&f)?;
    let direct = bochner_integral(&f)?.value;
    let dev = r
        .value
        .iter()
        .zip(amb.to_ambient(&direct)?)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(Outcome {
        checks: vec![
            Check::at_most("member_agreement", r.max_deviation, tol.num),
            Check::at_most("matches_ambient_integral", dev, tol.num * (1.0 + crate::linalg::max_abs(&r.value))),
        ],
        output: json!({
            "integral": r,
            "members": cover.members().iter().map(|m| json!({
                "id": m.id.0,
                "space": m.space.id().as_str(),
                "data": m.data,
                "parents": m.parents.map(|(a, b)| [a.0, b.0]),
            })).collect::<Vec<_>>(),
        }),
        table: None,
    })
}

fn convolve_outcome(
    group: &Group,
    mu: &FiniteMeasureOnGroup,
    f: &GroupFunction,
    check_integral: bool,
) -> Result<Outcome> {
    if !check_integral {
        let d = convolve_direct(group, mu, f)?;
        return Ok(Outcome {
            output: json!({ "direct": d }),
            ..Outcome::default()
        });
    }
    let r = convolve_via_integral(group, mu, f)?;
    let dominated = r.weight.w.iter().zip(&r.weight.v).all(|(a, b)| a >= b);
    Ok(Outcome {
        checks: vec![
            Check::at_most("max_deviation", r.max_deviation, 1e-12 * (1.0 + max_abs_fn(&r.direct))),
            Check::new("w_dominates_v", dominated, "w >= v on the window"),
            Check::at_most("translate_bound", r.weight.max_step_ratio, 1.0),
        ],
        output: json!({
            "direct": r.direct,
            "via_integral": r.result,
            "max_deviation": r.max_deviation,
            "translate_norms": r.translate_norms,
            "chain_product_axiom": r.weight.chain_product_axiom,
        }),
        table: None,
    })
}

fn max_abs_fn(f: &GroupFunction) -> f64 {
    crate::linalg::max_abs(&f.values)
}

/// Bundled fixtures: id and one-line description.
pub const EXAMPLES: &[(&str, &str)] = &[
    ("alternating", "alternating vectors under the partial-sum order: ‖x_n‖ = n while N(x_n) = 1"),
    ("sum-norm", "sum of two ordered lines in the plane carries the ℓ¹ norm"),
    ("koethe-cover", "Köthe weight recipe, merged norm (3,4) -> 7 and cover consistency"),
    ("convolution-z", "convolution on ℤ and ℤ_5 as a cover integral versus the direct sum"),
    ("renorm", "dominating ratio of ε N + ‖·‖ on the partial-sum space"),
];

/// Runs a bundled fixture; `None` for an unknown id.
pub fn reproduce(id: &str, seed: u64) -> Option<Report> {
    let input = json!({ "example": id });
    let r = match id {
        "alternating" => report(id, seed, "reproduce", input, || alternating_outcome(&[2, 4, 8, 16])),
        "sum-norm" => report(id, seed, "reproduce", input, sum_norm_fixture),
        "koethe-cover" => report(id, seed, "reproduce", input, || koethe_fixture(seed)),
        "convolution-z" => report(id, seed, "reproduce", input, || convolution_fixture(seed)),
        "renorm" => report(id, seed, "reproduce", input, || {
            renorm_outcome(Arc::new(OrderedSpace::partial_sum_space("ps-4", 4)?), &[0.1, 0.5, 1.0], 200, seed)
        }),
        _ => return None,
    };
    Some(r)
}

fn sum_norm_fixture() -> Result<Outcome> {
    let line = |id: &str| OrderedSpace::weighted_l1_lattice(id, vec![1.0]).map(Arc::new);
    let col = |v: Vec<f64>| Matrix::from_columns(&[v]);
    let plane = sum_space(
        "plane",
        line("x")?,
        line("y")?,
        &SumEmbedding {
            left_map: col(vec![1.0, 0.0])?,
            right_map: col(vec![0.0, 1.0])?,
        },
    )?;
    let z = plane.vector(vec![2.0, -3.0])?;
    let nz = plane.norm(&z)?;
    let same = sum_space(
        "line",
        line("x")?,
        line("y")?,
        &SumEmbedding {
            left_map: col(vec![1.0])?,
            right_map: col(vec![1.0])?,
        },
    )?;
    let nl = same.norm(&same.vector(vec![-3.0])?)?;
    let r = scan(&plane, &ScanConfig::new(100, 42))?;
    Ok(Outcome {
        checks: vec![
            Check::close("plane_norm", nz, 5.0, 1e-9),
            Check::close("line_norm", nl, 3.0, 1e-9),
            Check::at_most("dominating_ratio", r.c_lower, 1.0 + 1e-8),
        ],
        output: json!({ "plane_norm": nz, "line_norm": nl, "sampled_constant": r.c_lower }),
        table: None,
    })
}

fn koethe_fixture(seed: u64) -> Result<Outcome> {
    let mut checks = Vec::new();
    let merged = merged_norm(&[1.0, 2.0], &[2.0, 1.0], &[1.0, 1.0], &[3.0, 4.0])?;
    let r1 = FunctionNorm::WeightedL1Koethe { w: vec![1.0, 2.0], nu: vec![1.0, 1.0] };
    let r2 = FunctionNorm::WeightedL1Koethe { w: vec![2.0, 1.0], nu: vec![1.0, 1.0] };
    let grid = merged_norm_grid(&r1, &r2, &[3.0, 4.0], GridConfig::default())?;
    checks.push(Check::close("merged_closed_form", merged, 7.0, 1e-12));
    checks.push(Check::close("merged_grid_oracle", grid, 7.0, 1e-6));

    let cover = Cover::koethe_weights(vec![1.0; 3], None)?;
    let measure = Arc::new(MeasureSpace::finite([("x", 1.0)])?);
    let f = IntegrableFunction::from_coords(measure, cover.ambient().clone(), vec![vec![0.0, 3.0, 0.0]])?;
    let id = cover.assign_member(&f)?;
    let w = match &cover.member(id)?.data {
        crate::covers::MemberData::Weight(w) => w.clone(),
        _ => unreachable!(),
    };
    let rho = koethe_norm(&w, &[1.0; 3], &[0.0, 3.0, 0.0])?;
    checks.push(Check::new("recipe_weight", w == [1.0, 0.125, 0.25], format!("w = {w:?}")));
    checks.push(Check::close("recipe_norm", rho, 0.375, 1e-15));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let atoms = rng.gen_range(1..=4usize);
        let m = Arc::new(MeasureSpace::finite((0..atoms).map(|i| (i.to_string(), rng.gen_range(0.1..2.0))))?);
        let coords = (0..atoms)
            .map(|_| (0..3).map(|_| rng.gen_range(-5.0..5.0)).collect())
            .collect();
        let f = IntegrableFunction::from_coords(m, cover.ambient().clone(), coords)?;
        worst = worst.max(cover.u_integral(&f)?.max_deviation);
    }
    checks.push(Check::at_most("cover_consistency", worst, 1e-9));
    Ok(Outcome {
        output: json!({ "merged": merged, "grid": grid, "recipe_weight": w, "recipe_norm": rho, "max_deviation": worst }),
        checks,
        table: None,
    })
}

fn convolution_fixture(seed: u64) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let window = 64i64;
    let group = Group::Integers {
        window,
        chain: Chain::Linear,
    };
    let fns = [
        GroupFunction::from_fn(-2 * window, 2 * window, |n| n as f64).with_growth(Growth { c: 1.0, degree: 1 })?,
        GroupFunction::from_fn(-2 * window, 2 * window, |n| (n * n) as f64)
            .with_growth(Growth { c: 1.0, degree: 2 })?,
    ];
    let mut measures = vec![FiniteMeasureOnGroup {
        support: vec![(0, 0.5), (1, 0.5)],
    }];
    for _ in 0..5 {
        let k = rng.gen_range(1..=4);
        measures.push(FiniteMeasureOnGroup {
            support: (0..k)
                .map(|_| (rng.gen_range(-window..=window), rng.gen_range(0.0..1.0)))
                .collect(),
        });
    }
    let mut worst = 0.0f64;
    let mut step = 0.0f64;
    for f in &fns {
        for mu in &measures {
            let r = convolve_via_integral(&group, mu, f)?;
            worst = worst.max(r.max_deviation);
            step = step.max(r.weight.max_step_ratio);
        }
    }
    let half = convolve_direct(&group, &measures[0], &fns[0])?;
    let shift_ok = (-window..=window).all(|y| half.values[(y + window) as usize] == y as f64 - 0.5);

    let z5 = Group::Finite(FiniteGroup::cyclic(5)?);
    for b in 0..5 {
        let mut values = vec![0.0; 5];
        values[b] = 1.0;
        let f = GroupFunction { lo: 0, values, growth: None };
        for _ in 0..20 {
            let mu = FiniteMeasureOnGroup {
                support: (0..5).map(|x| (x, rng.gen_range(0..=8) as f64 / 8.0)).collect(),
            };
            worst = worst.max(convolve_via_integral(&z5, &mu, &f)?.max_deviation);
        }
    }
    Ok(Outcome {
        checks: vec![
            Check::new("two_point_average", shift_ok, "(½δ₀ + ½δ₁) * id = y - ½"),
            Check::at_most("max_deviation", worst, 1e-12),
            Check::at_most("translate_bound", step, 1.0),
        ],
        output: json!({ "max_deviation": worst, "max_step_ratio": step }),
        table: None,
    })
}

fn parse_json<T: for<'de> Deserialize<'de>>(path: &Path) -> std::result::Result<T, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

/// Reads a scenario file holding either one scenario or `{"scenarios": [...]}`.
pub fn load_scenarios(path: &Path) -> std::result::Result<Vec<Scenario>, String> {
    let value: Value = parse_json(path)?;
    let parsed = if value.get("scenarios").is_some() {
        serde_json::from_value::<ScenarioList>(value).map(|l| l.scenarios)
    } else {
        serde_json::from_value::<Scenario>(value).map(|s| vec![s])
    };
    parsed.map_err(|e| format!("{}: {e}", path.display()))
}

/// Writes `contents` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, contents: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn write_csv(path: &Path, reports: &[Report]) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header_written = false;
    for r in reports {
        let Some(t) = &r.table else { continue };
        if !header_written {
            let mut h = vec!["report".to_owned()];
            h.extend(t.headers.iter().cloned());
            w.write_record(&h)?;
            header_written = true;
        }
        for row in &t.rows {
            let mut rec = vec![r.name.clone()];
            rec.extend(row.iter().map(f64::to_string));
            w.write_record(&rec)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    write_atomic(path, &bytes)
}

fn emit(cli: &Cli, reports: &[Report]) -> std::io::Result<()> {
    let body = if reports.len() == 1 {
        serde_json::to_string_pretty(&reports[0])
    } else {
        serde_json::to_string_pretty(reports)
    }
    .expect("reports serialize");
    match &cli.out {
        Some(dir) if dir.is_dir() => {
            for r in reports {
                let text = serde_json::to_string_pretty(r).expect("reports serialize");
                write_atomic(&dir.join(format!("{}.json", sanitize(&r.name))), text.as_bytes())?;
            }
        }
        Some(path) => write_atomic(path, body.as_bytes())?,
        None => println!("{body}"),
    }
    if let Some(path) = &cli.csv {
        write_csv(path, reports)?;
    }
    Ok(())
}

fn sanitize(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect()
}

fn input_error(message: &str) -> i32 {
    let err = json!({
        "schema_version": SCHEMA_VERSION,
        "error": { "kind": "input", "message": message, "input_error": true }
    });
    println!("{}", serde_json::to_string_pretty(&err).expect("serializable"));
    eprintln!("orba: {message}");
    2
}

fn parse_group(name: &str, window: i64, chain: Chain) -> std::result::Result<Group, String> {
    if name == "z" {
        return Ok(Group::Integers { window, chain });
    }
    name.strip_prefix('z')
        .and_then(|n| n.parse::<usize>().ok())
        .ok_or_else(|| format!("unknown group `{name}` (expected `z` or `zN`)"))
        .and_then(|n| FiniteGroup::cyclic(n).map(Group::Finite).map_err(|e| e.to_string()))
}

fn schema(kind: SchemaKind) -> Value {
    let s = match kind {
        SchemaKind::Scenario => schemars::schema_for!(Scenario),
        SchemaKind::Report => schemars::schema_for!(Report),
        SchemaKind::Space => schemars::schema_for!(SpaceDescriptor),
        SchemaKind::Cover => schemars::schema_for!(CoverManifest),
        SchemaKind::Function => schemars::schema_for!(FunctionFile),
    };
    to_value(&s)
}

/// Parses arguments and runs; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    run_cli(&cli)
}

pub fn run_cli(cli: &Cli) -> i32 {
    let reports = match &cli.command {
        Command::ListExamples => {
            for (id, desc) in EXAMPLES {
                println!("{id:<14} {desc}");
            }
            return 0;
        }
        Command::Schema { kind } => {
            println!("{}", serde_json::to_string_pretty(&schema(*kind)).expect("serializable"));
            return 0;
        }
        Command::Reproduce { id } => match reproduce(id, cli.seed) {
            Some(r) => vec![r],
            None => {
                let known: Vec<&str> = EXAMPLES.iter().map(|e| e.0).collect();
                return input_error(&format!("unknown example `{id}`; known: {}", known.join(", ")));
            }
        },
        Command::Run { files } => {
            let mut scenarios = Vec::new();
            for f in files {
                match load_scenarios(f) {
                    Ok(s) => scenarios.extend(s),
                    Err(e) => return input_error(&e),
                }
            }
            let run = || -> Vec<Report> {
                scenarios
                    .par_iter()
                    .map(|s| run_scenario(s, cli.seed, cli.tol_lp, cli.tol_num))
                    .collect()
            };
            match cli.jobs {
                Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
                    Ok(pool) => pool.install(run),
                    Err(e) => return input_error(&e.to_string()),
                },
                None => run(),
            }
        }
        Command::Convolve {
            group,
            window,
            chain,
            mu,
            f,
            check_integral,
        } => {
            let group = match parse_group(group, *window, (*chain).into()) {
                Ok(g) => g,
                Err(e) => return input_error(&e),
            };
            let mu: FiniteMeasureOnGroup = match parse_json(mu) {
                Ok(m) => m,
                Err(e) => return input_error(&e),
            };
            let f: GroupFunction = match parse_json(f) {
                Ok(v) => v,
                Err(e) => return input_error(&e),
            };
            let input = json!({ "group": group, "mu": mu, "f": f, "check_integral": check_integral });
            vec![report("convolve", cli.seed, "convolve", input, || {
                convolve_outcome(&group, &mu, &f, *check_integral)
            })]
        }
        Command::CoverIntegrate { cover, function } => {
            let manifest: CoverManifest = match parse_json(cover) {
                Ok(m) => m,
                Err(e) => return input_error(&e),
            };
            let func: FunctionFile = match parse_json(function) {
                Ok(v) => v,
                Err(e) => return input_error(&e),
            };
            let tol = tolerances(cli.tol_lp, cli.tol_num, None);
            let input = json!({ "cover": manifest, "function": func });
            vec![report("cover-integrate", cli.seed, "cover_integrate", input, || {
                cover_outcome(&manifest, &func, tol)
            })]
        }
    };
    if let Err(e) = emit(cli, &reports) {
        eprintln!("orba: writing output failed: {e}");
        return 1;
    }
    reports.iter().map(Report::exit_code).max().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scenario_round_trip() {
        let text = r#"{
            "name": "dom",
            "spaces": {"l": {"cone": {"kind": "orthant", "dim": 2},
                              "norm": {"kind": "weighted_l1", "weights": [1, 1]}}},
            "operation": {"op": "min_dominator", "space": "l", "x": [1, -2]}
        }"#;
        let s: Scenario = serde_json::from_str(text).unwrap();
        let r = run_scenario(&s, 42, None, None);
        assert!(r.passed, "{r:?}");
        assert_eq!(r.output["value"], json!(3.0));
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn unknown_space_is_an_input_error() {
        let s = Scenario {
            name: "bad".into(),
            seed: None,
            tolerances: None,
            spaces: BTreeMap::new(),
            operation: Operation::Norm { space: "nope".into(), x: vec![1.0] },
        };
        assert_eq!(run_scenario(&s, 1, None, None).exit_code(), 2);
    }

    #[test]
    fn fixtures_pass() {
        for (id, _) in EXAMPLES {
            let r = reproduce(id, 42).unwrap();
            assert!(r.passed, "{id}: {:#?}", r);
        }
        assert!(reproduce("nope", 1).is_none());
    }

    #[test]
    fn groups_parse() {
        assert!(matches!(parse_group("z", 4, Chain::Linear), Ok(Group::Integers { window: 4, .. })));
        assert!(matches!(parse_group("z5", 4, Chain::Linear), Ok(Group::Finite(_))));
        assert!(parse_group("q", 4, Chain::Linear).is_err());
    }
}
