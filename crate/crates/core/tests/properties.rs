//! Invariants over random lattices, maps, filtrations and diagrams.

mod common;

use common::*;
use lattice_pd::classical::{check_classical_equivalence, classical_pd_signed};
use lattice_pd::distances::{bottleneck, edit_bounds, interpolate, matching_norm, Matching};
use lattice_pd::{
    bd, check_filtration_morphism, interval_lattice, kan_extend, lift_map, mobius_invert, mobius_sum, pushforward,
    ChainContext, Field, FiltrationMorphism, IntervalFunction,
};
use proptest::prelude::*;
use rand::Rng;

fn config() -> ProptestConfig {
    ProptestConfig { cases: 64, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn kan_extension_is_a_filtration_morphism(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let p = random_lattice(&mut rng, 8);
        let k = random_complex(&mut rng, 5, 14);
        let f = random_filtration(&mut rng, &p, &k);
        let alpha = random_map(&mut rng, &p);
        let g = kan_extend(&f, &alpha).unwrap();
        prop_assert!(check_filtration_morphism(&f, &g, &alpha).unwrap().is_valid());
        prop_assert_eq!(g.stage(g.index().top()).len(), k.len());
    }

    #[test]
    fn kan_morphisms_compose(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let p = random_lattice(&mut rng, 6);
        let k = random_complex(&mut rng, 4, 10);
        let f = random_filtration(&mut rng, &p, &k);
        let first = FiltrationMorphism::kan(f, random_map(&mut rng, &p)).unwrap();
        let beta = random_map(&mut rng, first.target().index());
        let second = FiltrationMorphism::kan(first.target().clone(), beta).unwrap();
        let both = first.then(&second).unwrap();
        prop_assert!(check_filtration_morphism(both.source(), both.target(), both.map()).unwrap().is_valid());
        prop_assert!(both.distortion() <= first.distortion() + second.distortion() + 1e-12);
    }

    #[test]
    fn lifting_keeps_distortion(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let p = random_lattice(&mut rng, 8);
        let alpha = random_map(&mut rng, &p);
        prop_assert_eq!(lift_map(&alpha).distortion(), alpha.distortion());
    }

    #[test]
    fn mobius_inverts_exactly(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let index = interval_lattice(&random_lattice(&mut rng, 8));
        let values = (0..index.len()).map(|_| rng.gen_range(-9..=9)).collect();
        let f = IntervalFunction::new(index, values).unwrap();
        prop_assert_eq!(&mobius_sum(&mobius_invert(&f).unwrap()).unwrap(), &f);
        prop_assert_eq!(&mobius_invert(&mobius_sum(&f).unwrap()).unwrap(), &f);
    }

    #[test]
    fn pushforward_commutes_with_kan(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let p = random_lattice(&mut rng, 7);
        let k = random_complex(&mut rng, 4, 12);
        let f = random_filtration(&mut rng, &p, &k);
        let alpha = random_map(&mut rng, &p);
        let g = kan_extend(&f, &alpha).unwrap();
        for i in 0..=k.dim().unwrap_or(0) {
            let (sf, sg) = (mobius_invert(&bd(&f, i, Field::default()).unwrap()).unwrap(),
                            mobius_invert(&bd(&g, i, Field::default()).unwrap()).unwrap());
            let lifted = lattice_pd::LiftedMap::between(&alpha, sf.index(), sg.index()).unwrap();
            prop_assert_eq!(&pushforward(&sf, &lifted).unwrap(), &sg);
        }
    }

    #[test]
    fn bd_is_bounded_by_cycle_rank(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let p = random_lattice(&mut rng, 6);
        let k = random_complex(&mut rng, 5, 14);
        let f = random_filtration(&mut rng, &p, &k);
        let ctx = ChainContext::new(k.clone(), Field::default());
        for i in 0..=k.dim().unwrap_or(0) {
            let b = bd(&f, i, Field::default()).unwrap();
            for (n, iv) in b.index().intervals().iter().enumerate() {
                let z = ctx.cycle_basis(f.stage(iv.lo), i).unwrap().rank() as i64;
                prop_assert!(0 <= b.value(n) && b.value(n) <= z);
            }
        }
        prop_assert!(bd(&f, k.dim().unwrap_or(0) + 1, Field::default()).unwrap().values().iter().all(|&v| v == 0));
    }

    #[test]
    fn bottleneck_is_a_metric_on_a_shared_chain(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let len = rng.gen_range(2..=5);
        let coords = random_chain_coords(&mut rng, len, false);
        let (a, b, c) = (random_diagram(&mut rng, &coords), random_diagram(&mut rng, &coords),
                         random_diagram(&mut rng, &coords));
        let d = |x, y| bottleneck(x, y).unwrap().0;
        prop_assert_eq!(d(&a, &a), 0.0);
        prop_assert_eq!(d(&a, &b), d(&b, &a));
        prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c) + 1e-9);
    }

    #[test]
    fn optimal_matching_norm_is_the_distance(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let len = rng.gen_range(2..=6);
        let infinite = rng.gen_bool(0.3);
        let coords = random_chain_coords(&mut rng, len, infinite);
        let (a, b) = (random_diagram(&mut rng, &coords), random_diagram(&mut rng, &coords));
        let (d, gamma) = bottleneck(&a, &b).unwrap();
        prop_assert_eq!(matching_norm(&gamma), d);
        let bounds = edit_bounds(&a, &b).unwrap();
        prop_assert!(bounds.lower <= bounds.upper && bounds.upper <= 2.0 * bounds.lower + 1e-9);
    }

    #[test]
    fn interpolation_hits_both_ends(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let len = rng.gen_range(2..=5);
        let coords = random_chain_coords(&mut rng, len, false);
        let (a, b) = (random_diagram(&mut rng, &coords), random_diagram(&mut rng, &coords));
        let (_, gamma) = bottleneck(&a, &b).unwrap();
        let total = |m: &Matching| -> i64 { m.entries().values().sum() };
        let start = interpolate(&gamma, 0.0).unwrap();
        let end = interpolate(&gamma, 1.0).unwrap();
        prop_assert_eq!(start.diagram.function().values().iter().sum::<i64>(), total(&gamma));
        prop_assert_eq!(end.diagram.function().values().iter().sum::<i64>(), total(&gamma));
    }

    #[test]
    fn classical_diagrams_agree_over_small_fields(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let f = random_classical(&mut rng, 20);
        for p in [2, 3, 5] {
            let field = Field::new(p).unwrap();
            for i in 0..=f.complex().dim().unwrap_or(0) {
                prop_assert!(check_classical_equivalence(&f, i, field).unwrap().is_valid());
                // the bars reaching inf telescope to the Betti number of the last finite stage
                let signed = classical_pd_signed(&f, i, field).unwrap();
                let idx = f.index();
                let (top, last) = (idx.top(), idx.len() - 2);
                let reaching: i64 = (0..top).map(|a| signed.get(idx.name(a), "inf").unwrap()).sum();
                let lists: Vec<Vec<u32>> = f.stage(last).ids().iter().map(|&id| f.complex().simplex(id).to_vec()).collect();
                let (z, b) = naive_cycle_boundary_ranks(&lists, i, i64::from(p));
                prop_assert_eq!(reaching, (z - b) as i64);
            }
        }
    }

    #[test]
    fn chain_ranks_match_naive_elimination(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let k = random_complex(&mut rng, 5, 12);
        let sub = random_subcomplex(&mut rng, &k, None);
        let lists: Vec<Vec<u32>> = sub.ids().iter().map(|&id| k.simplex(id).to_vec()).collect();
        for p in [2u32, 3, 7] {
            let ctx = ChainContext::new(k.clone(), Field::new(p).unwrap());
            for i in 0..=k.dim().unwrap_or(0) {
                let got = (ctx.cycle_basis(&sub, i).unwrap().rank(), ctx.boundary_basis(&sub, i).unwrap().rank());
                prop_assert_eq!(got, naive_cycle_boundary_ranks(&lists, i, i64::from(p)));
            }
        }
    }
}
