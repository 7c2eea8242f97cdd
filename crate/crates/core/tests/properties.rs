use proptest::prelude::*;

use connmod::connections::{pullback, transform};
use connmod::json::{connection_from_json, connection_to_json, tuple_from_json, tuple_to_json};
use connmod::random;
use connmod::reduction::{h_equivalence_witness, is_normal, normalize, pi_r, section_s_r};
use connmod::series::DiffeoJet;
use connmod::tensors::{gl_act, normal_dim_by_rank, symmetrize, dim_formula, DenseTensor, Variance};

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 24,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn series_product_is_associative(seed in any::<u64>(), n in 1usize..=3, order in 0usize..=4) {
        let mut rng = random::seeded(seed);
        let a = random::series(n, order, 0, &mut rng);
        let b = random::series(n, order, 0, &mut rng);
        let c = random::series(n, order, 0, &mut rng);
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
    }

    #[test]
    fn jet_composition_is_associative(seed in any::<u64>(), n in 1usize..=3, order in 1usize..=4) {
        let mut rng = random::seeded(seed);
        let f = random::diffeo(n, order, false, &mut rng);
        let g = random::diffeo(n, order, false, &mut rng);
        let h = random::diffeo(n, order, false, &mut rng);
        let left = f.compose(&g).unwrap().compose(&h).unwrap();
        let right = f.compose(&g.compose(&h).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn jet_inverse_is_two_sided(seed in any::<u64>(), n in 1usize..=3, order in 1usize..=4) {
        let mut rng = random::seeded(seed);
        let f = random::diffeo(n, order, false, &mut rng);
        let g = f.invert().unwrap();
        prop_assert!(f.compose(&g).unwrap().is_identity());
        prop_assert!(g.compose(&f).unwrap().is_identity());
    }

    #[test]
    fn symmetrize_is_idempotent(seed in any::<u64>(), n in 1usize..=3, rank in 2usize..=4) {
        let mut rng = random::seeded(seed);
        let mut sig = vec![Variance::Contra];
        sig.extend(std::iter::repeat(Variance::Cov).take(rank));
        let t = DenseTensor::from_fn(n, sig, |_| random::small_int(&mut rng));
        let slots: Vec<usize> = (1..=rank).collect();
        let once = symmetrize(&t, &slots).unwrap();
        prop_assert!(once.is_symmetric_in(&slots));
        prop_assert_eq!(symmetrize(&once, &slots).unwrap(), once);
    }

    #[test]
    fn gl_action_is_a_homomorphism(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = random::seeded(seed);
        let g = random::gl_element(n, &mut rng);
        let h = random::gl_element(n, &mut rng);
        let sig = vec![Variance::Contra, Variance::Cov, Variance::Cov];
        let t = DenseTensor::from_fn(n, sig, |_| random::small_int(&mut rng));
        let stepwise = gl_act(&g, &gl_act(&h, &t).unwrap()).unwrap();
        prop_assert_eq!(gl_act(&g.mul(&h).unwrap(), &t).unwrap(), stepwise);
    }

    #[test]
    fn transform_is_a_left_action(seed in any::<u64>(), n in 1usize..=3, r in 0usize..=2, symmetric: bool) {
        let mut rng = random::seeded(seed);
        let j = random::connection(n, r, symmetric, &mut rng);
        let a = random::diffeo(n, r + 2, false, &mut rng);
        let b = random::diffeo(n, r + 2, false, &mut rng);
        let both = transform(&a.compose(&b).unwrap(), &j).unwrap();
        prop_assert_eq!(both, transform(&a, &transform(&b, &j).unwrap()).unwrap());
        prop_assert_eq!(transform(&DiffeoJet::identity(n, r + 2), &j).unwrap(), j.clone());
        prop_assert_eq!(pullback(&a.invert().unwrap(), &j).unwrap(), transform(&a, &j).unwrap());
    }

    #[test]
    fn normalize_lands_in_the_orbit(seed in any::<u64>(), n in 1usize..=3, r in 0usize..=2, symmetric: bool) {
        let mut rng = random::seeded(seed);
        let j = random::connection(n, r, symmetric, &mut rng);
        let (tau, normal) = normalize(&j).unwrap();
        prop_assert!(is_normal(&normal));
        prop_assert!(tau.has_identity_linear_part());
        prop_assert_eq!(transform(&tau, &j).unwrap(), normal);
    }

    #[test]
    fn section_then_reduce_is_identity(seed in any::<u64>(), n in 1usize..=3, r in 0usize..=3, symmetric: bool) {
        let mut rng = random::seeded(seed);
        let t = random::normal_tuple(n, r, symmetric, &mut rng).unwrap();
        let j = section_s_r(&t).unwrap();
        prop_assert!(is_normal(&j));
        prop_assert_eq!(pi_r(&j).unwrap(), t);
    }

    #[test]
    fn witness_exists_exactly_on_fibers(seed in any::<u64>(), n in 2usize..=3, r in 0usize..=2, symmetric: bool) {
        let mut rng = random::seeded(seed);
        let j = random::connection(n, r, symmetric, &mut rng);
        let k = random::connection(n, r, symmetric, &mut rng);
        let same = pi_r(&j).unwrap() == pi_r(&k).unwrap();
        prop_assert_eq!(h_equivalence_witness(&j, &k).unwrap().is_some(), same);
    }

    #[test]
    fn json_round_trips(seed in any::<u64>(), n in 1usize..=3, r in 0usize..=2, symmetric: bool) {
        let mut rng = random::seeded(seed);
        let j = random::connection(n, r, symmetric, &mut rng);
        prop_assert_eq!(connection_from_json(&connection_to_json(&j)).unwrap(), j);
        let t = random::normal_tuple(n, r, symmetric, &mut rng).unwrap();
        prop_assert_eq!(tuple_from_json(&tuple_to_json(&t)).unwrap(), t);
    }
}

#[test]
fn dimension_formula_matches_rank_on_a_wider_grid() {
    for n in 1..=5 {
        for m in 0..=2 {
            for symmetric in [false, true] {
                assert_eq!(dim_formula(n, m, symmetric), normal_dim_by_rank(n, m, symmetric), "n={n} m={m}");
            }
        }
    }
}
