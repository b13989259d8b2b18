use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use trackclique::formulas::{brute_force_opt, evaluate, validate, Assignment, Formula};
use trackclique::intervals::{build_graph, collapse_twins, Tag, LITERAL_COPIES};
use trackclique::reductions::{
    assignment_to_clique, canonicalize_clique, clique_to_assignment, construct_tracks, gadgetize,
};
use trackclique::solvers::max_clique_bb;
use trackclique::verify::{
    check_gadget, check_observations, gen_csat, gen_sat, prune_clique, random_csat_shape,
};

fn csat_seed() -> impl Strategy<Value = u64> {
    any::<u64>()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn family_shape(seed in csat_seed()) {
        let (n, m) = random_csat_shape(8, 16, seed);
        let c = gen_csat(n, m, seed).unwrap();
        let f = construct_tracks(&c).unwrap();
        prop_assert_eq!(f.len(), 24 * n + m);
        let bound = n as i64 + 1;
        prop_assert!(f.members().iter().all(|mem| mem.interval.endpoints_within(bound)));
        prop_assert!(check_observations(&c, &f).passed());
    }

    #[test]
    fn graph_is_symmetric_and_irreflexive(seed in csat_seed()) {
        let (n, m) = random_csat_shape(4, 6, seed);
        let f = construct_tracks(&gen_csat(n, m, seed).unwrap()).unwrap();
        let g = build_graph(&f);
        for u in 0..g.len() {
            prop_assert!(!g.is_adjacent(u, u));
            for v in 0..g.len() {
                prop_assert_eq!(g.is_adjacent(u, v), g.is_adjacent(v, u));
            }
        }
    }

    #[test]
    fn forward_then_backward(seed in csat_seed(), mask in any::<u64>()) {
        let (n, m) = random_csat_shape(6, 12, seed);
        let c = gen_csat(n, m, seed).unwrap();
        let f = construct_tracks(&c).unwrap();
        let a = Assignment::from_mask(n, mask & ((1 << n) - 1));
        let z = evaluate(&c, &a).unwrap();
        let k = assignment_to_clique(&c, &f, &a).unwrap();
        prop_assert_eq!(k.len(), LITERAL_COPIES * n + z);
        prop_assert!(k.is_clique(&f).unwrap());
        let canonical = canonicalize_clique(&f, &k).unwrap();
        prop_assert_eq!(&canonical, &k);
        let (back, z_back) = clique_to_assignment(&c, &f, &canonical).unwrap();
        prop_assert_eq!(back, a);
        prop_assert!(z_back >= z);
    }

    #[test]
    fn canonicalize_never_shrinks(seed in csat_seed()) {
        let (n, m) = random_csat_shape(6, 12, seed);
        let c = gen_csat(n, m, seed).unwrap();
        let f = construct_tracks(&c).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = Assignment::from_mask(n, seed % (1 << n));
        let k = prune_clique(&assignment_to_clique(&c, &f, &a).unwrap(), &mut rng);
        let out = canonicalize_clique(&f, &k).unwrap();
        prop_assert!(out.len() >= k.len());
        prop_assert!(out.is_clique(&f).unwrap());
        let (_, z) = clique_to_assignment(&c, &f, &out).unwrap();
        prop_assert!(z + LITERAL_COPIES * n >= k.len());
    }

    #[test]
    fn gadget_laws(seed in any::<u64>(), half in 1usize..=3) {
        let s = gen_sat(2 * half, seed).unwrap();
        let report = check_gadget(&s).unwrap();
        prop_assert!(report.block_law_ok(), "{:?}", report.block_violations.first());
        prop_assert_eq!(report.csat_optimum, 2 * report.sat_optimum);
        let (c, map) = gadgetize(&s).unwrap();
        prop_assert!(validate(&c).is_valid());
        prop_assert_eq!(c.num_clauses(), 6 * s.num_clauses());
        prop_assert_eq!(c.num_vars(), s.num_vars() + s.num_clauses());
        prop_assert!(report.profile.is_valid());
        prop_assert_eq!(map.blocks.len(), s.num_clauses());
    }
}

/// Twin collapse is sound: the unit-weight clique number of the full
/// family graph equals the maximum weight clique of the collapsed graph,
/// and both equal 12n + z*.
#[test]
fn collapse_preserves_clique_number() {
    for seed in 0..40 {
        let (n, m) = random_csat_shape(3, 5, seed);
        let c = gen_csat(n, m, seed).unwrap();
        let f = construct_tracks(&c).unwrap();
        let full = max_clique_bb(&build_graph(&f), None);
        let collapsed = max_clique_bb(&collapse_twins(&f).unwrap(), None);
        let z_star = brute_force_opt(&c).unwrap().value;
        assert_eq!(full.weight, collapsed.weight, "seed {seed}");
        assert_eq!(full.weight, (12 * n + z_star) as u64, "seed {seed}");
    }
}

#[test]
fn collapsed_graph_counts() {
    let c = trackclique::formulas::sample_csat();
    let g = collapse_twins(&construct_tracks(&c).unwrap()).unwrap();
    assert_eq!(g.len(), 12);
    assert_eq!(g.weights().iter().filter(|&&w| w == 12).count(), 8);
    assert_eq!(g.weights().iter().filter(|&&w| w == 1).count(), 4);

    let single = trackclique::formulas::CsatInstance::new(
        1,
        vec![trackclique::Clause::new(
            trackclique::Literal::pos(1),
            trackclique::Literal::pos(1),
        )],
    )
    .unwrap();
    let g = collapse_twins(&construct_tracks(&single).unwrap()).unwrap();
    assert_eq!(g.weights(), &[12, 12, 1]);
}

#[test]
fn literal_only_family_is_matching_complement() {
    // Literal members alone: the only non-edges are each x_i / ~x_i pair.
    let c = gen_csat(5, 4, 3).unwrap();
    let f = construct_tracks(&c).unwrap();
    let literal_members: Vec<_> = f
        .members()
        .iter()
        .filter(|m| !m.tag.is_clause())
        .copied()
        .collect();
    let lits = trackclique::intervals::TrackFamily::new(5, 0, literal_members).unwrap();
    let g = collapse_twins(&lits).unwrap();
    assert_eq!(g.len(), 10);
    let total_pairs = 10 * 9 / 2;
    assert_eq!(g.edge_count(), total_pairs - 5);
    for u in 0..10 {
        for v in u + 1..10 {
            let same_var = matches!(
                (g.label(u), g.label(v)),
                (trackclique::VertexClass::Literal(a), trackclique::VertexClass::Literal(b)) if a.var() == b.var()
            );
            assert_eq!(g.is_adjacent(u, v), !same_var);
        }
    }
}

#[test]
fn full_graph_copies_adjacency() {
    let c = trackclique::formulas::sample_csat();
    let f = construct_tracks(&c).unwrap();
    let g = build_graph(&f);
    let idx = |t: Tag| g.labels().iter().position(|&l| l == t).unwrap();
    for a in 1..=12 {
        for b in 1..=12 {
            let p = idx(Tag::Pos { var: 1, copy: a });
            let q = idx(Tag::Neg { var: 1, copy: b });
            assert!(!g.is_adjacent(p, q));
            if a != b {
                assert!(g.is_adjacent(p, idx(Tag::Pos { var: 1, copy: b })));
            }
        }
    }
}
