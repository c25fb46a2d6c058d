use proptest::prelude::*;

use num_traits::{One, Zero};

use kolmo::classical::{Event, FiniteProbabilitySpace};
use kolmo::extension::{build_unified_space, pattern_event_name, SelectionPattern};
use kolmo::hilbert::{gleason_measure, projector_from_span, tensor, CMatrix, DensityOperator, Projector, TAU_OP};
use kolmo::lattice::{
    commutes, complement, construct_violating_state, frequency_inequality_lhs, is_below, join, meet, modular_defect,
};
use kolmo::polytope::{
    all_satisfied, censorship_product, clauser_horne_check, is_member, vertices, PairSet, TAU_LP,
};
use kolmo::random;
use kolmo::rational::{format_rational, parse_rational, ratio, snap, Rational};

fn config() -> ProptestConfig {
    ProptestConfig { cases: 64, ..ProptestConfig::default() }
}

fn close(a: &Projector, b: &Projector) -> bool {
    (a.matrix() - b.matrix()).norm() <= 1e-8
}

fn pair(seed: u64, dim: usize) -> (Projector, Projector) {
    let mut rng = random::rng(seed);
    let r1 = 1 + (seed as usize) % dim;
    let r2 = 1 + (seed as usize / 7) % dim;
    (random::projector(&mut rng, dim, r1), random::projector(&mut rng, dim, r2))
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn meet_and_join_bound_their_arguments(seed in any::<u64>(), dim in 2usize..=6) {
        let (e1, e2) = pair(seed, dim);
        let m = meet(&e1, &e2).unwrap();
        let j = join(&e1, &e2).unwrap();
        prop_assert!(is_below(&m, &e1).unwrap() && is_below(&m, &e2).unwrap());
        prop_assert!(is_below(&e1, &j).unwrap() && is_below(&e2, &j).unwrap());
        prop_assert!(m.rank() + j.rank() == e1.rank() + e2.rank());
    }

    #[test]
    fn de_morgan_and_involution(seed in any::<u64>(), dim in 2usize..=6) {
        let (e1, e2) = pair(seed, dim);
        prop_assert!(close(&complement(&complement(&e1)), &e1));
        let lhs = complement(&join(&e1, &e2).unwrap());
        let rhs = meet(&complement(&e1), &complement(&e2)).unwrap();
        prop_assert!(close(&lhs, &rhs));
        prop_assert!(close(&join(&e1, &e1).unwrap(), &e1));
        prop_assert!(close(&meet(&e1, &e1).unwrap(), &e1));
    }

    #[test]
    fn commuting_pairs_obey_the_frequency_inequality(seed in any::<u64>(), dim in 2usize..=6) {
        let mut rng = random::rng(seed);
        let (e1, e2) = random::commuting_pair(&mut rng, dim);
        prop_assert!(commutes(&e1, &e2).unwrap());
        let w = random::any_state(&mut rng, dim);
        prop_assert!(frequency_inequality_lhs(&w, &e1, &e2).unwrap() <= 1.0 + 1e-9);
        prop_assert!(modular_defect(&w, &e1, &e2).unwrap().abs() <= 1e-9);
        // For commuting projectors the meet is the product.
        let prod = Projector::new(e1.matrix() * e2.matrix()).unwrap();
        prop_assert!(close(&meet(&e1, &e2).unwrap(), &prod));
    }

    #[test]
    fn noncommuting_pairs_have_witnesses(seed in any::<u64>(), dim in 2usize..=6) {
        let mut rng = random::rng(seed);
        let (e1, e2) = random::noncommuting_pair(&mut rng, dim);
        let w = construct_violating_state(&e1, &e2).unwrap();
        prop_assert!((w.p1 - 1.0).abs() <= 1e-9);
        prop_assert!(w.p12.abs() <= 1e-9);
        prop_assert!(w.p2 > 1e-9);
        prop_assert!(w.violates());
    }

    #[test]
    fn spans_give_valid_projectors(seed in any::<u64>(), dim in 1usize..=6, k in 1usize..=4) {
        let mut rng = random::rng(seed);
        let vectors: Vec<_> = (0..k).map(|_| random::state_vector(&mut rng, dim)).collect();
        let p = projector_from_span(&vectors).unwrap();
        let m = p.matrix();
        prop_assert!((m * m - m).norm() <= TAU_OP);
        prop_assert!((m - m.adjoint()).norm() <= TAU_OP);
        prop_assert_eq!(p.rank(), k.min(dim));
        for v in &vectors {
            prop_assert!((v.expectation(&p).unwrap() - 1.0).abs() <= 1e-9);
        }
    }

    #[test]
    fn trace_rule_is_additive_on_orthogonal_families(seed in any::<u64>(), dim in 1usize..=7) {
        let mut rng = random::rng(seed);
        let k = 1 + (seed as usize) % dim;
        let w = random::any_state(&mut rng, dim);
        let family = random::orthogonal_family(&mut rng, dim, k);
        let mut acc = CMatrix::zeros(dim, dim);
        let mut sum = 0.0;
        for e in &family {
            let mu = gleason_measure(&w, e).unwrap();
            prop_assert!((0.0..=1.0).contains(&mu));
            sum += mu;
            acc += e.matrix();
        }
        let total = gleason_measure(&w, &Projector::new(acc).unwrap()).unwrap();
        prop_assert!((total - sum).abs() <= k as f64 * 1e-9);
        prop_assert!((gleason_measure(&w, &Projector::identity(dim).unwrap()).unwrap() - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn tensor_products_of_states_are_states(seed in any::<u64>(), d1 in 1usize..=3, d2 in 1usize..=3) {
        let mut rng = random::rng(seed);
        let (a, b) = (random::density(&mut rng, d1), random::density(&mut rng, d2));
        let ab = tensor(&a, &b);
        prop_assert_eq!(ab.dim(), d1 * d2);
        prop_assert!(DensityOperator::new(ab.matrix().clone()).is_ok());
    }

    #[test]
    fn convex_combinations_of_vertices_are_members(seed in any::<u64>(), n in 2usize..=5) {
        let mut rng = random::rng(seed);
        let layout = PairSet::all_pairs(n).unwrap();
        let p = random::member_vector(&mut rng, &layout);
        let cert = is_member(&p).unwrap();
        prop_assert!(cert.member);
        let recon = cert.reconstruct(&layout);
        for (a, b) in recon.flat().iter().zip(p.flat()) {
            prop_assert!((a - b).abs() <= TAU_LP);
        }
        let total: f64 = cert.weights.values().sum();
        prop_assert!((total - 1.0).abs() <= TAU_LP);
    }

    #[test]
    fn lp_and_clauser_horne_agree_on_members_and_cube_points(seed in any::<u64>(), inside in any::<bool>()) {
        let mut rng = random::rng(seed);
        let layout = PairSet::s4();
        let p = if inside { random::member_vector(&mut rng, &layout) } else { random::unit_cube_vector(&mut rng, &layout) };
        let lp = is_member(&p).unwrap().member;
        let ch = all_satisfied(&clauser_horne_check(&p).unwrap());
        prop_assert_eq!(lp, ch);
        if inside {
            prop_assert!(lp);
        }
    }

    #[test]
    fn censorship_products_stay_in_the_polytope(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let layout = PairSet::s4();
        let q = random::member_vector(&mut rng, &layout);
        let s = random::member_vector(&mut rng, &layout);
        let prod = censorship_product(&q, &s).unwrap();
        prop_assert!(is_member(&prod).unwrap().member);
    }

    #[test]
    fn rationals_round_trip(num in -10_000i64..10_000, den in 1i64..=65_536) {
        let r = ratio(num, den);
        prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r.clone());
        prop_assert_eq!(snap(num as f64 / den as f64).unwrap(), r);
    }

    #[test]
    fn finite_spaces_are_additive(weights in prop::collection::vec(1u32..20, 1..8), mask in any::<u16>()) {
        let total: u32 = weights.iter().sum();
        let points: Vec<(String, Rational)> = weights
            .iter()
            .enumerate()
            .map(|(i, &w)| (format!("w{i}"), ratio(w as i64, total as i64)))
            .collect();
        let space = FiniteProbabilitySpace::new(points.clone(), Default::default()).unwrap();
        let e = Event::new(points.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, p)| p.0.clone()));
        let f = Event::new(points.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 0).map(|(_, p)| p.0.clone()));
        let pe = space.probability(&e).unwrap();
        let pf = space.probability(&f).unwrap();
        prop_assert!(pe.clone() + pf == Rational::one());
        prop_assert!(pe >= Rational::zero());
        let model = space.to_json_model();
        prop_assert_eq!(FiniteProbabilitySpace::from_json_model(&model).unwrap(), space);
    }

    #[test]
    fn unified_spaces_reproduce_the_selection(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let setup = random::setup(&mut rng, random::SetupLimits::default());
        let unified = build_unified_space(&setup).unwrap();
        prop_assert!(unified.space.probability(&unified.space.whole()).unwrap().is_one());
        for (pattern, w) in setup.selection.support() {
            let x = unified.space.event(&pattern_event_name(pattern)).unwrap();
            prop_assert_eq!(&unified.space.probability(x).unwrap(), w);
        }
    }

    #[test]
    fn selection_patterns_round_trip(bits in prop::collection::vec(any::<bool>(), 1..10)) {
        let p = SelectionPattern::new(bits);
        prop_assert_eq!(p.to_string().parse::<SelectionPattern>().unwrap(), p);
    }
}

#[test]
fn vertices_of_the_smallest_polytope() {
    let layout = PairSet::parse(2, "1-2").unwrap();
    let v = vertices(&layout).unwrap();
    assert_eq!(v.len(), 4);
    let flats: Vec<Vec<f64>> = v.iter().map(|(_, x)| x.flat()).collect();
    assert!(flats.contains(&vec![1.0, 1.0, 1.0]));
    assert!(flats.contains(&vec![1.0, 0.0, 0.0]));
}
