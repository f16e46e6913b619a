
use proptest::prelude::*;

use resolvent_lab::correspond::Regime;
use resolvent_lab::graph::{invert_graph, rho_shift_graph, rho_unshift_graph};
use resolvent_lab::hypoconvex::{lambert_w0, prox_exp_family};
use resolvent_lab::linear::{optimal_comonotone_modulus_linear, resolvent_linear};
use resolvent_lab::resolvent::certify_conic;
use resolvent_lab::{GraphPoint, LinearOp, OperatorGraph, PointMap, Vector};

fn vector(dim: usize) -> impl Strategy<Value = Vector> {
    prop::collection::vec(-100.0..100.0f64, dim).prop_map(|v| Vector::new(v).unwrap())
}

fn graph() -> impl Strategy<Value = OperatorGraph> {
    (1usize..4).prop_flat_map(|dim| {
        prop::collection::vec((vector(dim), vector(dim)), 1..12).prop_map(move |pairs| {
            let pts = pairs.into_iter().map(|(x, u)| GraphPoint::new(x, u)).collect();
            OperatorGraph::from_pairs(dim, pts).unwrap()
        })
    })
}

fn matrix() -> impl Strategy<Value = LinearOp> {
    (1usize..5).prop_flat_map(|n| {
        prop::collection::vec(-3.0..3.0f64, n * n).prop_map(move |d| LinearOp::from_row_major(n, d).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn graph_json_round_trip(g in graph()) {
        prop_assert_eq!(OperatorGraph::from_json(&g.to_json()).unwrap(), g);
    }

    #[test]
    fn matrix_json_round_trip(a in matrix()) {
        let back = LinearOp::from_json(&a.to_json()).unwrap();
        prop_assert_eq!(back.as_row_major(), a.as_row_major());
    }

    #[test]
    fn inversion_is_an_involution(g in graph()) {
        prop_assert_eq!(invert_graph(&invert_graph(&g)), g);
    }

    #[test]
    fn shift_then_unshift_is_identity(g in graph(), rho in -3.0..3.0f64) {
        let back = rho_unshift_graph(&rho_shift_graph(&g, rho), rho);
        for (p, q) in g.pairs().iter().zip(back.pairs()) {
            let scale = 1.0 + p.x.norm() + (1.0 + rho.abs()) * p.u.norm();
            prop_assert!((&p.x - &q.x).norm() <= 4.0 * f64::EPSILON * scale);
            prop_assert_eq!(&p.u, &q.u);
        }
    }

    #[test]
    fn conic_verdict_is_monotone_in_alpha(
        a in matrix(),
        alpha in 0.05..3.0f64,
        bump in 0.0..2.0f64,
        seed in any::<u64>(),
    ) {
        let n = a.n();
        let pts: Vec<(Vector, Vector)> = {
            let s = resolvent_lab::PairSampler::with_seed(seed).pairs(24);
            s.sample_pairs(n)
        };
        let lo = certify_conic(&a, alpha, &pts, 0.0).unwrap();
        let hi = certify_conic(&a, alpha + bump, &pts, 0.0).unwrap();
        prop_assert!(!lo.passed || hi.passed);
    }

    #[test]
    fn linear_resolvent_inverts_identity_plus_a(a in matrix()) {
        let rho = optimal_comonotone_modulus_linear(&a).value();
        prop_assume!(rho > -0.9);
        let j = resolvent_linear(&a).unwrap();
        let n = a.n();
        for i in 0..n {
            let e = Vector::basis(n, i);
            let z = j.apply(&e);
            let back = &z + &a.apply(&z);
            prop_assert!((&back - &e).norm_inf() <= 1e-9 * (1.0 + z.norm()));
        }
    }

    #[test]
    fn lambert_w_solves_its_equation(z in -0.36787944117144233..1e6f64) {
        let w = lambert_w0(z).unwrap();
        prop_assert!(w >= -1.0);
        prop_assert!((w * w.exp() - z).abs() <= 1e-12 * (1.0 + z.abs()));
    }

    #[test]
    fn exp_prox_satisfies_optimality(lambda in 0.05..5.0f64, ratio in 0.01..0.99f64, x in -20.0..20.0f64) {
        let mu = ratio * lambda;
        let y = prox_exp_family(lambda, mu, x).unwrap().point;
        let res = y + mu * (y.exp() - y / lambda) - x;
        let scale = 1.0 + x.abs() + y.abs() + mu * y.exp();
        prop_assert!(res.abs() <= 1e-12 * scale, "residual {res:e}");
    }

    #[test]
    fn regimes_are_ordered(r1 in -3.0..3.0f64, r2 in -3.0..3.0f64) {
        let rank = |r: Regime| match r {
            Regime::MaybeMultivalued => 0,
            Regime::Conic => 1,
            Regime::Nonexpansive => 2,
            Regime::Averaged => 3,
            Regime::Monotone => 4,
            Regime::Cocoercive => 5,
        };
        if r1 <= r2 {
            prop_assert!(rank(Regime::of(r1)) <= rank(Regime::of(r2)));
        }
    }
}
