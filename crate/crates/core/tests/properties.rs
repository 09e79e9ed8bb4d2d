use proptest::prelude::*;

use topoforge::assignment::{classify_assignment, companion_map, is_refinement, puncture_refinement, SetAssignment};
use topoforge::catalog::{canonical_hash, find_homeomorphism};
use topoforge::category::{continuous_maps, pullback, ContinuousMap};
use topoforge::covering::{exclusiveness, extent, is_t1, lindelof_degree, DStatus};
use topoforge::dspace::{characterization_witness, dspace_check, forced_points, greedy_kernel, kernel_search};
use topoforge::space::generate_topology;
use topoforge::{Caps, FiniteSpace, PointSet};

fn space_strategy(max_n: usize) -> impl Strategy<Value = FiniteSpace> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(0..1u64 << n, 0..5).prop_map(move |bits| {
            let subbase: Vec<PointSet> = bits.into_iter().map(|b| PointSet::from_bits(n, b).unwrap()).collect();
            generate_topology(n, &subbase).unwrap()
        })
    })
}

fn with_neighborhood(max_n: usize) -> impl Strategy<Value = (FiniteSpace, SetAssignment)> {
    space_strategy(max_n).prop_flat_map(|space| {
        let choices: Vec<usize> = (0..space.n()).map(|x| space.opens_containing(x).count()).collect();
        let picks = choices.into_iter().map(|c| 0..c).collect::<Vec<_>>();
        (Just(space), picks).prop_map(|(space, picks)| {
            let sets = picks.iter().enumerate().map(|(x, &i)| space.opens_containing(x).nth(i).unwrap()).collect();
            let n = SetAssignment::neighborhood(&space, sets).unwrap();
            (space, n)
        })
    })
}

fn with_assignment(max_n: usize) -> impl Strategy<Value = SetAssignment> {
    (space_strategy(max_n), prop::collection::vec(any::<prop::sample::Index>(), 0..4)).prop_map(|(space, idx)| {
        let sets = idx.iter().map(|i| space.opens()[i.index(space.open_count())]).collect();
        SetAssignment::new(&space, sets).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn companion_preimages_recover_the_assignment(a in with_assignment(4)) {
        let f = companion_map(&a);
        prop_assert!(f.certified());
        for i in 0..a.domain_size() {
            prop_assert_eq!(f.preimage(i), a.set(i));
        }
        prop_assert!(classify_assignment(&a).routes_agree());
    }

    #[test]
    fn extent_bounded_by_lindelof(space in space_strategy(4)) {
        let (e, l) = (extent(&space), lindelof_degree(&space));
        prop_assert!(e <= l);
        if dspace_check(&space, Caps::default().assignments, 0).status == DStatus::Yes {
            prop_assert_eq!(e, l);
        }
    }

    #[test]
    fn exclusiveness_routes_agree(space in space_strategy(4)) {
        let ex = exclusiveness(&space);
        prop_assert!(ex.agree());
        prop_assert_eq!(ex.kappa() >= 1, is_t1(&space));
    }

    #[test]
    fn witness_exists_exactly_with_a_kernel((_space, n) in with_neighborhood(4)) {
        let kernel = kernel_search(&n).unwrap();
        let witness = characterization_witness(&n).unwrap();
        prop_assert_eq!(kernel.is_some(), witness.is_some());
        if let Some(w) = witness {
            prop_assert!(w.holds());
            let star = puncture_refinement(&n, w.d).unwrap();
            prop_assert!(is_refinement(&star, &n).unwrap().direct);
        }
        let forced = forced_points(&n).unwrap();
        prop_assert!(forced.in_every_kernel);
    }

    #[test]
    fn greedy_success_is_a_closed_discrete_kernel((space, n) in with_neighborhood(4), rot in 0usize..4) {
        let size = space.n();
        let order: Vec<usize> = (0..size).map(|i| (i + rot) % size).collect();
        let out = greedy_kernel(&n, &order).unwrap();
        if out.success() {
            prop_assert!(space.is_closed(out.kernel));
            prop_assert!(out.kernel.iter().map(|x| out.refinement[x]).fold(space.empty_set(), |a, s| a.union(s)).is_full());
        }
        if is_t1(&space) {
            prop_assert!(out.success());
        }
    }

    #[test]
    fn pullback_carrier_is_the_fiber_product(a in space_strategy(2), b in space_strategy(2), c in space_strategy(2), i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let fs = continuous_maps(&a, &c);
        let gs = continuous_maps(&b, &c);
        let f: &ContinuousMap = &fs[i.index(fs.len())];
        let g: &ContinuousMap = &gs[j.index(gs.len())];
        let pb = pullback(f, g).unwrap();
        let expected: Vec<(usize, usize)> = (0..a.n())
            .flat_map(|x| (0..b.n()).map(move |y| (x, y)))
            .filter(|&(x, y)| f.apply(x) == g.apply(y))
            .collect();
        prop_assert_eq!(&pb.carrier, &expected);
        prop_assert!(pb.commutes());
        prop_assert!(pb.ump_certificate().holds());
    }

    #[test]
    fn relabeling_preserves_the_canonical_hash(space in space_strategy(4), shift in 0usize..4) {
        let n = space.n();
        let perm: Vec<usize> = (0..n).map(|i| (i + shift) % n).collect();
        let moved = FiniteSpace::from_opens(n, space.opens().iter().map(|u| u.relabel(&perm))).unwrap();
        prop_assert_eq!(canonical_hash(&space).unwrap(), canonical_hash(&moved).unwrap());
        prop_assert!(find_homeomorphism(&space, &moved).is_some());
    }
}
