use proptest::prelude::*;

use tensorstat::charalg::character::{CharacterEvaluator, CharacterMethod, character_value};
use tensorstat::charalg::freudenthal::weight_multiplicities;
use tensorstat::charalg::klimyk::tensor_power_decompose;
use tensorstat::charalg::naive::naive_decompose;
use tensorstat::linalg::norm;
use tensorstat::logspace::{ln_biguint, log_sum_exp};
use tensorstat::markov::transition_row;
use tensorstat::{Rational, RootSystem, TensorProblem64, Weight};

const SMALL: [&str; 4] = ["A1", "A2", "B2", "G2"];
const ALL: [&str; 9] = ["A1", "A2", "A3", "B2", "B3", "C3", "D4", "G2", "F4"];

fn weight_in(rank: usize, lo: i64, hi: i64) -> impl Strategy<Value = Weight> {
    prop::collection::vec(lo..=hi, rank).prop_map(Weight::new)
}

fn algebra_and_weight(names: &'static [&'static str], lo: i64, hi: i64) -> impl Strategy<Value = (RootSystem, Weight)> {
    prop::sample::select(names)
        .prop_map(|n| RootSystem::from_name(n).unwrap())
        .prop_flat_map(move |rs| {
            let r = rs.rank();
            (Just(rs), weight_in(r, lo, hi))
        })
}

fn small_problem() -> impl Strategy<Value = (RootSystem, Vec<(Weight, u64)>)> {
    prop::sample::select(&SMALL[..])
        .prop_map(|n| RootSystem::from_name(n).unwrap())
        .prop_flat_map(|rs| {
            let r = rs.rank();
            let factor = (weight_in(r, 0, 1), 0u64..=3);
            (Just(rs), prop::collection::vec(factor, 1..=2))
        })
        .prop_filter("at most four factors", |(_, p)| p.iter().map(|(_, n)| n).sum::<u64>() <= 4)
}

fn regular_temperature(rs: &RootSystem, seed: &[f64]) -> Option<Vec<f64>> {
    let t: Vec<f64> = seed.iter().take(rs.rank()).copied().collect();
    rs.is_regular_real(&t).then_some(t)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dominant_reflect_is_idempotent((rs, w) in algebra_and_weight(&ALL, -6, 6)) {
        let r = rs.dominant_reflect(&w);
        prop_assert!(r.dominant.is_dominant());
        let again = rs.dominant_reflect(&r.dominant);
        prop_assert_eq!(&again.dominant, &r.dominant);
        prop_assert_eq!(again.parity, 1);
        prop_assert_eq!(again.singular, r.singular);
        prop_assert_eq!(rs.inner_weights(&w, &w), rs.inner_weights(&r.dominant, &r.dominant));
    }

    #[test]
    fn singular_iff_rho_shift_on_a_wall((rs, w) in algebra_and_weight(&SMALL, -5, 5)) {
        let rho = rs.rho_weight();
        let shifted = Weight::new(w.coords().iter().zip(rho.coords()).map(|(a, b)| a + b).collect::<Vec<_>>());
        let r = rs.dominant_reflect(&shifted);
        prop_assert_eq!(r.singular, r.dominant.coords().iter().any(|&c| c == 0));
    }

    #[test]
    fn weight_systems_are_weyl_invariant((rs, l) in algebra_and_weight(&SMALL, 0, 3)) {
        let ws = weight_multiplicities(&rs, &l).unwrap();
        for (mu, d) in ws.iter() {
            let dom = rs.dominant_reflect(mu).dominant;
            prop_assert_eq!(ws.multiplicity(&dom), d);
        }
        let dim: u128 = ws.iter().map(|(_, d)| d as u128).sum();
        prop_assert_eq!(dim, ws.dim());
    }

    #[test]
    fn klimyk_matches_naive((rs, problem) in small_problem()) {
        let table = tensor_power_decompose(&rs, &problem).unwrap();
        let naive = naive_decompose(&rs, &problem).unwrap();
        prop_assert_eq!(table.entries(), &naive);
        table.check_dimension_rule(&rs).unwrap();
        table.check_root_lattice(&rs).unwrap();
    }

    #[test]
    fn character_sum_rule((rs, problem) in small_problem(), seed in prop::collection::vec(-0.4f64..0.4, 2)) {
        let Some(t) = regular_temperature(&rs, &seed) else { return Ok(()) };
        let table = tensor_power_decompose(&rs, &problem).unwrap();
        let ev = CharacterEvaluator::new(&rs, &t).unwrap();
        let lhs: Vec<f64> = table
            .iter()
            .map(|(l, m)| ln_biguint(m) + ev.ln_character(&rs, l).unwrap())
            .collect();
        let rhs: f64 = problem
            .iter()
            .map(|(nu, n)| *n as f64 * ev.ln_character(&rs, nu).unwrap())
            .sum();
        prop_assert!((log_sum_exp(&lhs) - rhs).abs() < 1e-9);
    }

    #[test]
    fn character_methods_agree((rs, l) in algebra_and_weight(&SMALL, 0, 4), seed in prop::collection::vec(-1.0f64..1.0, 2)) {
        let Some(t) = regular_temperature(&rs, &seed) else { return Ok(()) };
        let a = character_value(&rs, &l, &t, CharacterMethod::WeightSum).unwrap();
        let b = character_value(&rs, &l, &t, CharacterMethod::WeylQuotient).unwrap();
        prop_assert!((a.ln_abs - b.ln_abs).abs() < 1e-9 * (1.0 + a.ln_abs.abs()));
    }

    #[test]
    fn transition_rows_sum_to_one(
        (rs, l) in algebra_and_weight(&SMALL, 0, 6),
        v in 0usize..2,
        seed in prop::collection::vec(-0.5f64..0.5, 2),
    ) {
        let mut nu = Weight::zero(rs.rank());
        nu.0[v.min(rs.rank() - 1)] = 1;
        let t: Vec<f64> = seed.iter().take(rs.rank()).copied().collect();
        let row = transition_row(&rs, &nu, &t, &l).unwrap();
        let total: f64 = row.targets.iter().map(|(_, p)| p).sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        prop_assert!(row.targets.iter().all(|(w, p)| *p > 0.0 && w.is_dominant()));
    }

    #[test]
    fn legendre_involution((rs, nu) in algebra_and_weight(&SMALL, 0, 1), dir in prop::collection::vec(-1.0f64..1.0, 2), frac in 0.05f64..0.85) {
        prop_assume!(!nu.is_zero());
        let p = TensorProblem64::new(&rs, &[(nu, 1.0)], 0.01).unwrap();
        let t: Vec<f64> = dir.iter().take(rs.rank()).map(|d| 3.0 * frac * d).collect();
        let xi = p.forward_dual(&t);
        prop_assume!(p.in_domain(&xi));
        let x = p.legendre_dual(&xi).unwrap();
        let back = p.forward_dual(&x);
        let err: Vec<f64> = back.iter().zip(&xi).map(|(a, b)| a - b).collect();
        prop_assert!(norm(&err) < 1e-9);
    }

    #[test]
    fn rate_function_is_concave_and_peaked(
        (rs, nu) in algebra_and_weight(&SMALL, 0, 1),
        a in prop::collection::vec(-0.2f64..0.2, 2),
        b in prop::collection::vec(-0.2f64..0.2, 2),
    ) {
        prop_assume!(!nu.is_zero());
        let p = TensorProblem64::new(&rs, &[(nu, 1.0)], 0.01).unwrap();
        let r = rs.rank();
        let (a, b) = (&a[..r], &b[..r]);
        prop_assume!(p.in_domain(a) && p.in_domain(b));
        let mid: Vec<f64> = a.iter().zip(b).map(|(x, y)| 0.5 * (x + y)).collect();
        let s = |xi: &[f64]| p.rate_point(xi).unwrap().s;
        prop_assert!(s(&mid) >= 0.5 * (s(a) + s(b)) - 1e-12);
        let top = p.f_at_origin();
        prop_assert!((s(&vec![0.0; r]) - top).abs() < 1e-12);
        prop_assert!(s(a) <= top + 1e-12);
    }
}

#[test]
fn weyl_group_preserves_the_form() {
    for name in ALL {
        let rs = RootSystem::from_name(name).unwrap();
        let b = rs.form();
        let group = rs.enumerate_weyl_group(2_000_000).unwrap();
        assert_eq!(group.len() as u128, rs.weyl_group_order(), "{name}");
        for g in group.iter().step_by(group.len() / 50 + 1) {
            let m = g.action.map(|&v| Rational::from_integer(v));
            assert_eq!(m.transpose().mul(b).mul(&m), *b, "{name} {:?}", g.word);
            assert_eq!(g.parity, if g.word.len() % 2 == 0 { 1 } else { -1 });
        }
    }
}

#[test]
fn rate_function_is_weyl_invariant() {
    let rs = RootSystem::from_name("B2").unwrap();
    let p = TensorProblem64::new(&rs, &[(Weight::new([1, 0]), 1.0)], 0.01).unwrap();
    let xi = [0.21, 0.08];
    let s0 = p.rate_point(&xi).unwrap().s;
    for g in rs.enumerate_weyl_group(100).unwrap() {
        let image = g.apply_root(&xi);
        assert!(p.in_domain(&image));
        assert!((p.rate_point(&image).unwrap().s - s0).abs() < 1e-10);
    }
}
