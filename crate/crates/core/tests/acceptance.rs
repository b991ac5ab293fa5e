//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines always print; exits non-zero if any criterion fails.

use std::sync::Arc;
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use orba::bochner::{bochner_dominate, bochner_integral, pettis_check};
use orba::cone_analysis::{min_dominator, n_norm, renorm_eps, scan, DominatingConstant, ScanConfig};
use orba::convolution::{
    convolve_direct, convolve_via_integral, translate, weight_builder, Chain, FiniteGroup,
    FiniteMeasureOnGroup, Group, GroupFunction, Growth,
};
use orba::covers::{merged_norm, merged_norm_grid, Cover, FunctionNorm, GridConfig};
use orba::lp::{solve, LinearProgram, LpStatus};
use orba::measure::{l1_norm, IntegrableFunction, MeasureSpace};
use orba::{ConeSpec, Matrix, NormSpec, OrderedSpace, Vector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = fn() -> Outcome;
type GroupFn = fn(i64) -> f64;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn alternating(n: usize) -> Vec<f64> {
    (0..n).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut ratios = Vec::new();
    for n in [2usize, 4, 8, 16] {
        let s = OrderedSpace::partial_sum_space(format!("ps-{n}"), n).map_err(e)?;
        let x = s.vector(alternating(n)).map_err(e)?;
        let a = s.basis_vector(0);
        ensure(s.sandwiched(&x, &a).map_err(e)?, || format!("n={n}: -a ⪯ x ⪯ a fails"))?;
        let (nx, na) = (s.norm(&x).map_err(e)?, s.norm(&a).map_err(e)?);
        ensure(nx == n as f64 && na == 1.0, || format!("n={n}: ‖x‖={nx}, ‖a‖={na}"))?;
        let nn = n_norm(&s, &x).map_err(e)?;
        ensure((nn - 1.0).abs() <= 1e-9, || format!("n={n}: N(x)={nn}"))?;
        ratios.push(nx / nn);
    }
    for (r, n) in ratios.iter().zip([2.0, 4.0, 8.0, 16.0]) {
        ensure((r - n).abs() <= 1e-8 * n, || format!("ratio {r} is not linear in n={n}"))?;
    }
    let t = start.elapsed();
    ensure(t.as_secs_f64() < 1.0, || format!("took {t:?}"))?;
    Ok(format!("ratios {ratios:?}, {t:.2?}"))
}

fn criterion_2() -> Outcome {
    let mut r = rng(2);
    let mut worst = 0.0f64;
    for k in 0..200 {
        let dim = r.gen_range(2..=8);
        let w: Vec<f64> = (0..dim).map(|_| r.gen_range(0.1..3.0)).collect();
        let s = OrderedSpace::weighted_l1_lattice("lat", w.clone()).map_err(e)?;
        let x: Vec<f64> = (0..dim).map(|_| r.gen_range(-5.0..5.0)).collect();
        let d = min_dominator(&s, &s.vector(x.clone()).map_err(e)?).map_err(e)?;
        let norm: f64 = x.iter().zip(&w).map(|(xi, wi)| xi.abs() * wi).sum();
        let dev = d.a.coords().iter().zip(&x).map(|(a, xi)| (a - xi.abs()).abs()).fold(0.0, f64::max);
        worst = worst.max(dev).max((d.value - norm).abs());
        ensure((d.value - norm).abs() <= 1e-9, || format!("sample {k}: value {} vs ‖x‖ {norm}", d.value))?;
        ensure(dev <= 1e-9, || format!("sample {k}: a differs from |x| by {dev:e}"))?;
    }
    Ok(format!("200 samples, max deviation {worst:.1e}"))
}

fn criterion_3() -> Outcome {
    let s = Arc::new(OrderedSpace::partial_sum_space("ps-4", 4).map_err(e)?);
    let mut parts = Vec::new();
    let mut failures = Vec::new();
    for eps in [0.1, 0.5, 1.0] {
        let rs = renorm_eps(s.clone(), eps).map_err(e)?.dominating_ratio_scan(200, 3).map_err(e)?;
        parts.push(format!("ε={eps}: {:.4} vs {:.4}", rs.ratio, rs.bound));
        if rs.ratio > rs.bound + 1e-6 {
            failures.push(format!("ε={eps}: ratio {:.6} > (1+ε)² = {:.6} at {:?}", rs.ratio, rs.bound, rs.witness));
        }
    }
    if failures.is_empty() {
        Ok(parts.join("; "))
    } else {
        Err(failures.join("; "))
    }
}

/// Random lower-triangular matrix with positive diagonal.
fn random_simplicial(r: &mut ChaCha8Rng, dim: usize) -> Vec<Vec<f64>> {
    (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| match j.cmp(&i) {
                    std::cmp::Ordering::Less => r.gen_range(-1.0..1.0),
                    std::cmp::Ordering::Equal => r.gen_range(0.5..2.0),
                    std::cmp::Ordering::Greater => 0.0,
                })
                .collect()
        })
        .collect()
}

/// Solves `A x = y` for lower-triangular `A`.
fn forward_solve(a: &[Vec<f64>], y: &[f64]) -> Vec<f64> {
    let mut x = vec![0.0; y.len()];
    for i in 0..y.len() {
        let s: f64 = (0..i).map(|j| a[i][j] * x[j]).sum();
        x[i] = (y[i] - s) / a[i][i];
    }
    x
}

fn criterion_4() -> Outcome {
    let mut r = rng(4);
    let mut min_margin = f64::INFINITY;
    for k in 0..100 {
        let dim = r.gen_range(2..=5);
        let atoms = r.gen_range(1..=8);
        let transformed = k % 2 == 1;
        let a = if transformed { random_simplicial(&mut r, dim) } else { vec![] };
        let cone = if transformed {
            ConeSpec::TransformedOrthant { matrix: Matrix::from_rows(&a).map_err(e)? }
        } else {
            ConeSpec::Orthant { dim }
        };
        let s = Arc::new(OrderedSpace::new("c4", cone, NormSpec::WeightedL1 { weights: vec![1.0; dim] }).map_err(e)?);
        let m = Arc::new(MeasureSpace::finite((0..atoms).map(|i| (format!("a{i}"), r.gen_range(0.01..2.0)))).map_err(e)?);
        let coords: Vec<Vec<f64>> = (0..atoms)
            .map(|_| {
                let y: Vec<f64> = (0..dim).map(|_| r.gen_range(0.0..3.0)).collect();
                if transformed { forward_solve(&a, &y) } else { y }
            })
            .collect();
        let f = IntegrableFunction::from_coords(m, s.clone(), coords).map_err(e)?;
        let i = bochner_integral(&f).map_err(e)?.value;
        for g in s.dual_generators().map_err(e)? {
            let v: f64 = g.iter().zip(i.coords()).map(|(p, q)| p * q).sum();
            min_margin = min_margin.min(v);
            ensure(v >= -1e-9, || format!("function {k}: dual generator value {v:e}"))?;
        }
    }
    Ok(format!("100 functions, min dual value {min_margin:.3e}"))
}

fn criterion_5() -> Outcome {
    let mut r = rng(5);
    let dim = 4;
    let ambient = Arc::new(OrderedSpace::partial_sum_space("amb", dim).map_err(e)?);
    let covers = [
        Cover::ordered_subspaces(ambient).map_err(e)?,
        Cover::principal_ideals(dim).map_err(e)?,
        Cover::koethe_weights(vec![1.0; dim], None).map_err(e)?,
    ];
    let mut worst = 0.0f64;
    for cover in &covers {
        for k in 0..50 {
            let atoms = r.gen_range(1..=4);
            let m = Arc::new(MeasureSpace::finite((0..atoms).map(|i| (format!("a{i}"), r.gen_range(0.1..2.0)))).map_err(e)?);
            // Sparse values so that the subspace cover produces proper members.
            let support = r.gen_range(1..=dim);
            let coords = (0..atoms)
                .map(|_| (0..dim).map(|j| if j < support { r.gen_range(-3.0..3.0) } else { 0.0 }).collect())
                .collect();
            let f = IntegrableFunction::from_coords(m, cover.ambient().clone(), coords).map_err(e)?;
            let ci = cover.u_integral(&f).map_err(|err| format!("{} #{k}: {err}", cover.kind_name()))?;
            ensure(ci.member != ci.alternative, || format!("{} #{k}: members coincide", cover.kind_name()))?;
            worst = worst.max(ci.max_deviation);
            ensure(ci.max_deviation <= 1e-9, || {
                format!("{} #{k}: deviation {:e}", cover.kind_name(), ci.max_deviation)
            })?;
        }
    }
    Ok(format!("3 families x 50 functions, max deviation {worst:.1e}"))
}

fn criterion_6() -> Outcome {
    let r1 = FunctionNorm::WeightedL1Koethe { w: vec![1.0, 2.0], nu: vec![1.0, 1.0] };
    let r2 = FunctionNorm::WeightedL1Koethe { w: vec![2.0, 1.0], nu: vec![1.0, 1.0] };
    let closed = merged_norm(&[1.0, 2.0], &[2.0, 1.0], &[1.0, 1.0], &[3.0, 4.0]).map_err(e)?;
    let grid = merged_norm_grid(&r1, &r2, &[3.0, 4.0], GridConfig::default()).map_err(e)?;
    ensure(closed == 7.0 && (grid - 7.0).abs() <= 1e-6, || format!("(3,4): closed {closed}, grid {grid}"))?;
    let mut r = rng(6);
    let mut worst = 0.0f64;
    for k in 0..20 {
        let n = r.gen_range(2..=4);
        let mut v = |lo: f64, hi: f64| -> Vec<f64> { (0..n).map(|_| r.gen_range(lo..hi)).collect() };
        let (w1, w2, nu, f) = (v(0.1, 3.0), v(0.1, 3.0), v(0.2, 2.0), v(-4.0, 4.0));
        let closed = merged_norm(&w1, &w2, &nu, &f).map_err(e)?;
        let a = FunctionNorm::WeightedL1Koethe { w: w1, nu: nu.clone() };
        let b = FunctionNorm::WeightedL1Koethe { w: w2, nu };
        let grid = merged_norm_grid(&a, &b, &f, GridConfig::default()).map_err(e)?;
        worst = worst.max((closed - grid).abs());
        ensure((closed - grid).abs() <= 1e-6, || format!("instance {k}: closed {closed} vs grid {grid}"))?;
    }
    Ok(format!("(3,4) -> 7 and 20 instances, max gap {worst:.1e}"))
}

fn criterion_7() -> Outcome {
    let lattice = Arc::new(OrderedSpace::weighted_l1_lattice("lat", vec![1.0; 3]).map_err(e)?);
    let partial = Arc::new(OrderedSpace::partial_sum_space("ps-4", 4).map_err(e)?);
    let mut constants = Vec::new();
    for s in [&lattice, &partial] {
        constants.push(DominatingConstant::from_scan(&scan(s, &ScanConfig::new(200, 7)).map_err(e)?));
    }
    let mut r = rng(7);
    for k in 0..50 {
        let (s, c) = if k % 2 == 0 { (&lattice, constants[0]) } else { (&partial, constants[1]) };
        let tail = 2f64.powi(-40);
        let m = Arc::new(MeasureSpace::counting(20, tail).map_err(e)?);
        let coords = (1..=20)
            .map(|n| (0..s.dim()).map(|_| r.gen_range(-1.0..1.0) * 0.6f64.powi(n)).collect())
            .collect();
        let f = IntegrableFunction::from_coords(m, s.clone(), coords).map_err(e)?;
        let eps = r.gen_range(0.01..0.5);
        let pair = bochner_dominate(&f, eps, c).map_err(|err| format!("run {k}: {err}"))?;
        for (i, (x, g)) in f.values().iter().zip(pair.g.values()).enumerate() {
            ensure(s.sandwiched(x, g).map_err(e)?, || format!("run {k}: -g ⪯ f ⪯ g fails at atom {i}"))?;
        }
        let bound = c.value() * (l1_norm(&f).map_err(e)?.upper() + eps);
        let l1g = l1_norm(&pair.g).map_err(e)?.upper();
        ensure(l1g <= bound, || format!("run {k}: ∫‖g‖ = {l1g} > C(∫‖f‖ + ε) = {bound}"))?;
    }
    Ok(format!(
        "50/50 runs; C = {:.4} (lattice), {:.4} (partial sums)",
        constants[0].value(),
        constants[1].value()
    ))
}

fn criterion_8() -> Outcome {
    let mut worst = 0.0f64;
    let z5 = Group::Finite(FiniteGroup::cyclic(5).map_err(e)?);
    let mut r = rng(8);
    for b in 0..5 {
        let f = GroupFunction { lo: 0, values: (0..5).map(|i| f64::from(u8::from(i == b))).collect(), growth: None };
        for _ in 0..20 {
            let mu = FiniteMeasureOnGroup { support: (0..5).map(|x| (x, r.gen_range(0.0..1.0))).collect() };
            let via = convolve_via_integral(&z5, &mu, &f).map_err(e)?;
            let direct = convolve_direct(&z5, &mu, &f).map_err(e)?;
            let dev = via.result.values.iter().zip(&direct.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            worst = worst.max(dev);
            ensure(dev <= 1e-12, || format!("ℤ₅ basis {b}: deviation {dev:e}"))?;
        }
    }

    let window = 64i64;
    let z = Group::Integers { window, chain: Chain::Linear };
    let reach = 8i64;
    let cases: [(GroupFn, u32); 2] = [(|n| n as f64, 1), (|n| (n * n) as f64, 2)];
    for (fun, degree) in cases {
        let f = GroupFunction::from_fn(-window - reach, window + reach, fun)
            .with_growth(Growth { c: 1.0, degree })
            .map_err(e)?;
        for _ in 0..10 {
            let support = (0..r.gen_range(1..=4))
                .map(|_| (r.gen_range(-reach..=reach), r.gen_range(0.0..1.0)))
                .collect();
            let mu = FiniteMeasureOnGroup { support };
            let via = convolve_via_integral(&z, &mu, &f).map_err(e)?;
            let direct = convolve_direct(&z, &mu, &f).map_err(e)?;
            let dev = via.result.values.iter().zip(&direct.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            worst = worst.max(dev);
            ensure(dev <= 1e-12, || format!("ℤ degree {degree}: deviation {dev:e}"))?;
        }
        let wt = weight_builder(&z, &f).map_err(e)?;
        for (p, (w, v)) in wt.points.iter().zip(wt.w.iter().zip(&wt.v)) {
            ensure(w >= v, || format!("degree {degree}: w({p}) = {w} < v({p}) = {v}"))?;
        }
        for x in -reach..=reach {
            let t = translate(&z, &f, x).map_err(e)?;
            let ux = wt.u_at(x).ok_or("u(x) missing")?;
            for (i, &y) in wt.points.iter().enumerate() {
                if let Ok(ty) = t.get(y) {
                    ensure(ty.abs() <= ux * wt.w[i] * (1.0 + 1e-12), || {
                        format!("degree {degree}: |L_{x} f({y})| = {} > u(x) w(y) = {}", ty.abs(), ux * wt.w[i])
                    })?;
                }
            }
        }
    }
    Ok(format!("ℤ₅ (5 x 20) and ℤ window 64 (n, n²), max deviation {worst:.1e}"))
}

fn criterion_9() -> Outcome {
    let mut r = rng(9);
    let mut rejected = 0;
    for k in 0..40 {
        let dim = r.gen_range(2..=5);
        let s = if k % 2 == 0 {
            OrderedSpace::partial_sum_space("ps", dim)
        } else {
            let a = random_simplicial(&mut r, dim);
            OrderedSpace::new(
                "tri",
                ConeSpec::TransformedOrthant { matrix: Matrix::from_rows(&a).map_err(e)? },
                NormSpec::WeightedL1 { weights: vec![1.0; dim] },
            )
        }
        .map_err(e)?;
        let s = Arc::new(s);
        let atoms = r.gen_range(1..=6);
        let m = Arc::new(MeasureSpace::finite((0..atoms).map(|i| (format!("a{i}"), r.gen_range(0.1..2.0)))).map_err(e)?);
        let coords = (0..atoms).map(|_| (0..dim).map(|_| r.gen_range(-2.0..2.0)).collect()).collect();
        let f = IntegrableFunction::from_coords(m, s.clone(), coords).map_err(e)?;
        let i = bochner_integral(&f).map_err(e)?.value;
        let rep = pettis_check(&f, &i).map_err(e)?;
        ensure(rep.matches, || format!("case {k}: integral rejected ({:e})", rep.max_deviation))?;
        let sol = rep.solution.ok_or_else(|| format!("case {k}: no unique solution"))?;
        let gap = sol.iter().zip(i.coords()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        ensure(gap <= 1e-9, || format!("case {k}: solution differs from the integral by {gap:e}"))?;
        for _ in 0..5 {
            let mut d: Vec<f64> = (0..dim).map(|_| r.gen_range(-1.0..1.0)).collect();
            let scale = 1e-3 / d.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            d.iter_mut().for_each(|v| *v *= scale);
            let off = i.add(&Vector::new(&s, d).map_err(e)?).map_err(e)?;
            ensure(!pettis_check(&f, &off).map_err(e)?.matches, || format!("case {k}: perturbation accepted"))?;
            rejected += 1;
        }
    }
    Ok(format!("40 carriers, {rejected} perturbations rejected"))
}

/// Exhaustive vertex enumeration for a bounded program in `n <= 4` variables.
fn vertex_oracle(lp: &LinearProgram) -> Option<f64> {
    let n = lp.num_vars();
    // Every constraint as a row `g·x <= h`; equalities are always active.
    let mut rows: Vec<(Vec<f64>, f64)> = Vec::new();
    for i in 0..lp.ineq_rhs.len() {
        rows.push((lp.ineq_matrix.row(i).to_vec(), lp.ineq_rhs[i]));
    }
    for j in 0..n {
        let mut u = vec![0.0; n];
        u[j] = 1.0;
        rows.push((u.clone(), lp.upper[j]));
        u[j] = -1.0;
        rows.push((u, -lp.lower[j]));
    }
    let eqs: Vec<(Vec<f64>, f64)> = (0..lp.eq_rhs.len()).map(|i| (lp.eq_matrix.row(i).to_vec(), lp.eq_rhs[i])).collect();
    let free = n.checked_sub(eqs.len())?;
    let mut best: Option<f64> = None;
    let mut pick = vec![0usize; free];
    fn combos(k: usize, start: usize, m: usize, pick: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        if k == pick.len() {
            visit(pick);
            return;
        }
        for i in start..m {
            pick[k] = i;
            combos(k + 1, i + 1, m, pick, visit);
        }
    }
    let m = rows.len();
    combos(0, 0, m, &mut pick, &mut |idx| {
        let active: Vec<&(Vec<f64>, f64)> = eqs.iter().chain(idx.iter().map(|&i| &rows[i])).collect();
        let a = DMatrix::from_fn(n, n, |i, j| active[i].0[j]);
        let b = DVector::from_fn(n, |i, _| active[i].1);
        let Some(x) = a.clone().lu().solve(&b) else { return };
        if (&a * &x - &b).amax() > 1e-9 {
            return;
        }
        let x: Vec<f64> = x.iter().copied().collect();
        if lp.residual(&x) > 1e-9 {
            return;
        }
        let v: f64 = lp.objective.iter().zip(&x).map(|(c, xi)| c * xi).sum();
        best = Some(best.map_or(v, |b| b.min(v)));
    });
    best
}

fn criterion_10() -> Outcome {
    let mut r = rng(10);
    let (mut optimal, mut infeasible) = (0, 0);
    for k in 0..100 {
        let n = r.gen_range(1..=4);
        let mut lp = LinearProgram::new((0..n).map(|_| r.gen_range(-3.0..3.0)).collect());
        lp.lower = (0..n).map(|_| r.gen_range(-5.0..0.0)).collect();
        lp.upper = (0..n).map(|_| r.gen_range(0.0..5.0)).collect();
        let m = r.gen_range(0..=4);
        let ineq: Vec<Vec<f64>> = (0..m).map(|_| (0..n).map(|_| r.gen_range(-2.0..2.0)).collect()).collect();
        lp.ineq_matrix = if m == 0 { Matrix::zeros(0, n) } else { Matrix::from_rows(&ineq).map_err(e)? };
        lp.ineq_rhs = (0..m).map(|_| r.gen_range(-2.0..3.0)).collect();
        if n >= 2 && k % 4 == 0 {
            let row: Vec<f64> = (0..n).map(|_| r.gen_range(-1.0..1.0)).collect();
            lp.eq_matrix = Matrix::from_rows(&[row]).map_err(e)?;
            lp.eq_rhs = vec![r.gen_range(-1.0..1.0)];
        }
        let sol = solve(&lp).map_err(|err| format!("program {k}: {err}"))?;
        match (sol.status, vertex_oracle(&lp)) {
            (LpStatus::Optimal, Some(v)) => {
                ensure((sol.objective - v).abs() <= 1e-9 * (1.0 + v.abs()), || {
                    format!("program {k}: simplex {} vs vertices {v}", sol.objective)
                })?;
                optimal += 1;
            }
            (LpStatus::Infeasible, None) => infeasible += 1,
            (status, oracle) => return Err(format!("program {k}: simplex {status:?}, oracle {oracle:?}")),
        }
    }
    Ok(format!("{optimal} optimal and {infeasible} infeasible programs agree"))
}

fn main() {
    let criteria: [(&str, Criterion); 10] = [
        ("1 partial-sum example", criterion_1),
        ("2 lattice 1-absolute domination", criterion_2),
        ("3 renorming bound", criterion_3),
        ("4 order preservation of the integral", criterion_4),
        ("5 cover consistency", criterion_5),
        ("6 merged Köthe norm", criterion_6),
        ("7 constructive domination", criterion_7),
        ("8 convolution equality", criterion_8),
        ("9 Pettis-style uniqueness", criterion_9),
        ("10 LP oracle equivalence", criterion_10),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
