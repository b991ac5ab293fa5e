use std::sync::Arc;

use orba::bochner::bochner_integral;
use orba::cone_analysis::{min_dominator, n_norm, scan, ScanConfig};
use orba::convolution::{
    convolve_direct, convolve_via_integral, translate, FiniteGroup, FiniteMeasureOnGroup, Group,
    GroupFunction, Growth,
};
use orba::covers::{koethe_norm, merged_norm, principal_ideal_norm, Cover, MemberData};
use orba::lp::{solve, LinearProgram};
use orba::measure::{l1_norm, phi_integral, IntegrableFunction, MeasureSpace};
use orba::space::{image_space, line_space, sum_space, SumEmbedding};
use orba::{ConeSpec, Matrix, NormSpec, OrderedSpace, Vector};
use proptest::prelude::*;

const TOL: f64 = 1e-8;

fn coords(dim: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-5.0..5.0f64, dim)
}

fn positive(dim: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.1..3.0f64, dim)
}

/// A fixed registry covering every cone and norm variant.
fn registry() -> Vec<Arc<OrderedSpace>> {
    let l1 = OrderedSpace::weighted_l1_lattice("l1", vec![1.0, 2.0, 0.5]).unwrap();
    let sup = OrderedSpace::new("sup", ConeSpec::Orthant { dim: 3 }, NormSpec::Sup).unwrap();
    let ps = OrderedSpace::partial_sum_space("ps", 3).unwrap();
    let lorentz_like = OrderedSpace::new(
        "poly",
        ConeSpec::Polyhedral {
            matrix: Matrix::from_rows(&[[1.0, 1.0, 0.0], [1.0, -1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 0.0, 1.0]]).unwrap(),
        },
        NormSpec::WeightedL1 { weights: vec![1.0; 3] },
    )
    .unwrap();
    let unit = OrderedSpace::new(
        "unit",
        ConeSpec::Orthant { dim: 3 },
        NormSpec::OrderUnit { unit: vec![1.0, 2.0, 1.0] },
    )
    .unwrap();
    let line = line_space("line", &[1.0, 1.0, 1.0], &[0.5, -1.0, 0.0], &ConeSpec::Orthant { dim: 3 }).unwrap();
    let x = Arc::new(OrderedSpace::weighted_l1_lattice("x", vec![1.0]).unwrap());
    let y = Arc::new(OrderedSpace::new("y", ConeSpec::Orthant { dim: 1 }, NormSpec::Sup).unwrap());
    let emb = SumEmbedding {
        left_map: Matrix::from_rows(&[[1.0], [0.0]]).unwrap(),
        right_map: Matrix::from_rows(&[[1.0], [1.0]]).unwrap(),
    };
    let sum = sum_space("sum", x, y, &emb).unwrap();
    let src = Arc::new(OrderedSpace::weighted_l1_lattice("src", vec![1.0; 3]).unwrap());
    let image = image_space(
        "image",
        src,
        &Matrix::from_rows(&[[1.0, 0.0, 1.0], [0.0, 1.0, 1.0]]).unwrap(),
        &ConeSpec::Orthant { dim: 2 },
    )
    .unwrap()
    .space;
    [l1, sup, ps, lorentz_like, unit, line, sum, image].into_iter().map(Arc::new).collect()
}

fn space_and_vectors() -> impl Strategy<Value = (Arc<OrderedSpace>, Vec<f64>, Vec<f64>)> {
    let spaces = registry();
    (0..spaces.len()).prop_flat_map(move |i| {
        let s = spaces[i].clone();
        let d = s.dim();
        (Just(s), coords(d), coords(d))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn norm_axioms((s, x, y) in space_and_vectors(), alpha in -3.0..3.0f64) {
        let x = s.vector(x).unwrap();
        let y = s.vector(y).unwrap();
        let nx = s.norm(&x).unwrap();
        prop_assert!(nx >= 0.0);
        prop_assert!((s.norm(&x.scale(alpha)).unwrap() - alpha.abs() * nx).abs() <= TOL * (1.0 + nx));
        let sum = s.norm(&x.add(&y).unwrap()).unwrap();
        prop_assert!(sum <= nx + s.norm(&y).unwrap() + TOL * (1.0 + sum));
        prop_assert_eq!(s.norm(&Vector::zeros(&s)).unwrap(), 0.0);
        if !x.is_zero() {
            prop_assert!(nx > 0.0);
        }
    }

    #[test]
    fn order_agrees_with_dual_generators((s, x, y) in space_and_vectors()) {
        prop_assume!(s.dual_generators().is_ok());
        let duals = s.dual_generators().unwrap();
        let xv = s.vector(x.clone()).unwrap();
        let yv = s.vector(y.clone()).unwrap();
        let by_duals = duals.iter().all(|a| {
            let d: f64 = a.iter().zip(x.iter().zip(&y)).map(|(ai, (xi, yi))| ai * (yi - xi)).sum();
            d >= -1e-9
        });
        prop_assert_eq!(s.leq(&xv, &yv).unwrap(), by_duals);
    }

    #[test]
    fn dominator_invariants((s, x, _) in space_and_vectors()) {
        let x = s.vector(x).unwrap();
        let d = min_dominator(&s, &x).unwrap();
        prop_assert!(s.cone_contains(&d.a).unwrap());
        prop_assert!(s.sandwiched(&x, &d.a).unwrap());
        prop_assert!((s.norm(&d.a).unwrap() - d.value).abs() <= TOL * (1.0 + d.value));
        // Any dominator of `a` also dominates `x`, so N(a) = N(x).
        let na = n_norm(&s, &d.a).unwrap();
        prop_assert!((na - d.value).abs() <= TOL * (1.0 + d.value));
        if d.value < 1e-12 {
            prop_assert!(s.norm(&x).unwrap() < 1e-9);
        }
    }

    #[test]
    fn lattice_n_norm_is_the_norm(w in positive(4), x in coords(4)) {
        let s = OrderedSpace::weighted_l1_lattice("lat", w).unwrap();
        let x = s.vector(x).unwrap();
        prop_assert!((n_norm(&s, &x).unwrap() - s.norm(&x).unwrap()).abs() <= 1e-9);
    }

    #[test]
    fn lattice_riesz_inequality(w in positive(4), x in coords(4), y in coords(4), sup in any::<bool>()) {
        let norm = if sup { NormSpec::Sup } else { NormSpec::WeightedL1 { weights: w } };
        let s = OrderedSpace::new("lat", ConeSpec::Orthant { dim: 4 }, norm).unwrap();
        let x = s.vector(x).unwrap();
        let y = s.vector(y).unwrap();
        let lhs = s.norm(&x.abs().sub(&y.abs()).unwrap()).unwrap();
        prop_assert!(lhs <= s.norm(&x.sub(&y).unwrap()).unwrap() + TOL);
    }

    #[test]
    fn order_unit_is_attained(y in coords(2)) {
        let s = &registry()[5];
        let y = s.vector(y).unwrap();
        let n = s.norm(&y).unwrap();
        prop_assert!(s.sandwiched(&y, &s.basis_vector(0).scale(n * (1.0 + 1e-12) + 1e-12)).unwrap());
    }

    #[test]
    fn phi_is_linear_and_contractive(
        weights in positive(4),
        f in prop::collection::vec(coords(3), 4),
        g in prop::collection::vec(coords(3), 4),
        alpha in -2.0..2.0f64,
        beta in -2.0..2.0f64,
    ) {
        let m = Arc::new(MeasureSpace::finite(weights.iter().enumerate().map(|(i, w)| (format!("a{i}"), *w))).unwrap());
        let s = Arc::new(OrderedSpace::partial_sum_space("ps", 3).unwrap());
        let f = IntegrableFunction::from_coords(m.clone(), s.clone(), f).unwrap();
        let g = IntegrableFunction::from_coords(m, s.clone(), g).unwrap();
        let lhs = phi_integral(&f.combine(alpha, &g, beta).unwrap()).unwrap();
        let rhs = phi_integral(&f).unwrap().combine(alpha, &phi_integral(&g).unwrap(), beta).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) <= TOL * 10.0);
        let i = phi_integral(&f).unwrap();
        prop_assert!(s.norm(&i).unwrap() <= l1_norm(&f).unwrap().value + TOL);
        prop_assert_eq!(bochner_integral(&f).unwrap().value, i);
    }

    #[test]
    fn integral_of_positive_function_is_positive(
        weights in positive(3),
        f in prop::collection::vec(prop::collection::vec(0.0..4.0f64, 3), 3),
    ) {
        let m = Arc::new(MeasureSpace::finite(weights.iter().enumerate().map(|(i, w)| (format!("a{i}"), *w))).unwrap());
        let s = Arc::new(OrderedSpace::weighted_l1_lattice("l", vec![1.0; 3]).unwrap());
        let f = IntegrableFunction::from_coords(m, s.clone(), f).unwrap();
        prop_assert!(s.cone_contains(&phi_integral(&f).unwrap()).unwrap());
        let cover = Cover::principal_ideals(3).unwrap();
        let f = IntegrableFunction::from_coords(
            f.measure().clone(),
            cover.ambient().clone(),
            f.values().iter().map(|v| v.coords().to_vec()).collect(),
        ).unwrap();
        let r = cover.u_integral(&f).unwrap();
        prop_assert!(r.value.iter().all(|v| *v >= -1e-9));
    }

    #[test]
    fn function_norm_axioms(
        w1 in positive(3),
        w2 in positive(3),
        nu in positive(3),
        f in coords(3),
        g in coords(3),
        alpha in -3.0..3.0f64,
    ) {
        type Norm = Box<dyn Fn(&[f64]) -> f64>;
        let (a, b, c, d) = (w1.clone(), nu.clone(), w2.clone(), nu.clone());
        let norms: [Norm; 2] = [
            Box::new(move |h| koethe_norm(&a, &b, h).unwrap()),
            Box::new(move |h| merged_norm(&w1, &c, &d, h).unwrap()),
        ];
        for rho in &norms {
            let rf = rho(&f);
            let scaled: Vec<f64> = f.iter().map(|v| alpha * v).collect();
            prop_assert!((rho(&scaled) - alpha.abs() * rf).abs() <= TOL * (1.0 + rf));
            let sum: Vec<f64> = f.iter().zip(&g).map(|(x, y)| x + y).collect();
            prop_assert!(rho(&sum) <= rf + rho(&g) + TOL);
            let abs: Vec<f64> = f.iter().map(|v| v.abs()).collect();
            prop_assert!((rho(&abs) - rf).abs() <= TOL);
            let smaller: Vec<f64> = f.iter().map(|v| v * 0.5).collect();
            prop_assert!(rho(&smaller) <= rf + TOL);
            prop_assert_eq!(rho(&[0.0; 3]), 0.0);
            if f.iter().any(|v| *v != 0.0) {
                prop_assert!(rf > 0.0);
            }
        }
        let merged = norms[1](&f);
        prop_assert!(merged <= norms[0](&f) + TOL);
        prop_assert!(merged <= koethe_norm(&w2, &nu, &f).unwrap() + TOL);
    }

    #[test]
    fn join_norms_are_smaller(u in positive(3), v in positive(3), x in coords(3)) {
        let cover = Cover::principal_ideals(3).unwrap();
        let (a, b) = (cover.register_unit(u.clone()).unwrap(), cover.register_unit(v.clone()).unwrap());
        let MemberData::Unit(j) = cover.member(cover.join(a, b).unwrap()).unwrap().data.clone() else {
            panic!("principal join is not a unit")
        };
        let nj = principal_ideal_norm(&j, &x).unwrap();
        prop_assert!(nj <= principal_ideal_norm(&u, &x).unwrap() + TOL);
        prop_assert!(nj <= principal_ideal_norm(&v, &x).unwrap() + TOL);

        let cover = Cover::koethe_weights(vec![1.0; 3], None).unwrap();
        let (a, b) = (cover.register_weight(u.clone()).unwrap(), cover.register_weight(v.clone()).unwrap());
        let MemberData::Weight(j) = cover.member(cover.join(a, b).unwrap()).unwrap().data.clone() else {
            panic!("Köthe join is not a weight")
        };
        let nu = [1.0; 3];
        let nj = koethe_norm(&j, &nu, &x).unwrap();
        prop_assert!(nj <= koethe_norm(&u, &nu, &x).unwrap() + TOL);
        prop_assert!(nj <= koethe_norm(&v, &nu, &x).unwrap() + TOL);
    }

    #[test]
    fn translations_compose_on_integers(a in -5i64..=5, b in -5i64..=5) {
        let g = Group::Integers { window: 10, chain: Default::default() };
        let f = GroupFunction::from_fn(-40, 40, |n| (n * n - 3 * n) as f64)
            .with_growth(Growth { c: 4.0, degree: 2 })
            .unwrap();
        prop_assert_eq!(translate(&g, &f, 0).unwrap().values.len(), f.values.len());
        let lhs = translate(&g, &f, a + b).unwrap();
        let rhs = translate(&g, &translate(&g, &f, b).unwrap(), a).unwrap();
        for y in -10..=10 {
            prop_assert_eq!(lhs.get(y).unwrap(), rhs.get(y).unwrap());
        }
        let id = translate(&g, &f, 0).unwrap();
        for y in -10..=10 {
            prop_assert_eq!(id.get(y).unwrap(), f.get(y).unwrap());
        }
    }

    #[test]
    fn convolution_paths_agree_on_small_groups(
        which in 0usize..8,
        masses in prop::collection::vec(0.0..1.0f64, 8),
    ) {
        let group = if which == 7 { s3() } else { FiniteGroup::cyclic(which + 1).unwrap() };
        let n = group.order();
        let g = Group::Finite(group);
        let mu = FiniteMeasureOnGroup { support: (0..n as i64).map(|x| (x, masses[x as usize])).collect() };
        for b in 0..n {
            let f = GroupFunction { lo: 0, values: (0..n).map(|i| if i == b { 1.0 } else { 0.0 }).collect(), growth: None };
            let via = convolve_via_integral(&g, &mu, &f).unwrap();
            let direct = convolve_direct(&g, &mu, &f).unwrap();
            prop_assert!(via.max_deviation <= 1e-12);
            for (p, q) in via.result.values.iter().zip(&direct.values) {
                prop_assert!((p - q).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn translations_compose_on_s3(a in 0i64..6, b in 0i64..6, vals in prop::collection::vec(-3.0..3.0f64, 6)) {
        let group = s3();
        let ab = group.mul(a as usize, b as usize) as i64;
        let g = Group::Finite(group);
        let f = GroupFunction { lo: 0, values: vals, growth: None };
        let lhs = translate(&g, &f, ab).unwrap();
        let rhs = translate(&g, &translate(&g, &f, b).unwrap(), a).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(translate(&g, &f, 0).unwrap(), f);
    }

    #[test]
    fn lp_is_deterministic(c in coords(3), rows in prop::collection::vec(coords(3), 0..5), rhs in coords(5)) {
        let mut lp = LinearProgram::new(c);
        lp.lower = vec![-4.0; 3];
        lp.upper = vec![4.0; 3];
        if !rows.is_empty() {
            lp.ineq_matrix = Matrix::from_rows(&rows).unwrap();
            lp.ineq_rhs = rhs[..rows.len()].to_vec();
        }
        let a = solve(&lp).unwrap();
        let b = solve(&lp).unwrap();
        prop_assert_eq!(a.status, b.status);
        prop_assert_eq!(a.objective.to_bits(), b.objective.to_bits());
        prop_assert_eq!(
            a.point.iter().map(|v| v.to_bits()).collect::<Vec<_>>(),
            b.point.iter().map(|v| v.to_bits()).collect::<Vec<_>>()
        );
    }
}

/// The symmetric group on three letters; element 0 is the identity.
fn s3() -> FiniteGroup {
    let perms: [[usize; 3]; 6] = [[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]];
    let index = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
    let table = perms
        .iter()
        .map(|p| perms.iter().map(|q| index([p[q[0]], p[q[1]], p[q[2]]])).collect())
        .collect();
    FiniteGroup::from_table(table).unwrap()
}

#[test]
fn every_registry_space_is_generated_by_its_cone() {
    for s in registry() {
        for j in 0..s.dim() {
            let (p, q) = s.generating_witness(j).unwrap().expect("directed space");
            assert_witness(&s, &p, &q, j);
        }
    }
}

fn assert_witness(s: &OrderedSpace, p: &Vector, q: &Vector, j: usize) {
    assert!(s.cone_contains(p).unwrap() && s.cone_contains(q).unwrap());
    let e = p.sub(q).unwrap();
    assert!(e.max_abs_diff(&s.basis_vector(j)) <= 1e-9, "{}: e_{j} ≠ p - q", s.id().as_str());
}

#[test]
fn scans_never_certify_a_constant_below_one() {
    for s in registry() {
        let r = scan(&s, &ScanConfig::new(64, 11)).unwrap();
        assert!(!r.below_one, "{}: C = {}", s.id().as_str(), r.c_lower);
        assert!(r.c_lower.is_finite());
    }
}
