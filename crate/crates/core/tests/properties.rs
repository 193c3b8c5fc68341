//! Randomized invariants over graphs, routers, constructions, verifiers and
//! the exact oracles.

use proptest::prelude::*;

use matchnet::construct::{build_named, contour_tree_sort, default_sorter, longest_path_sort};
use matchnet::routing::{route_to_path, router_for, two_cycle_decompose};
use matchnet::verify::{exact_rt, exact_st, verify_exhaustive, verify_zero_one, StOptions};
use matchnet::{generate, Comparator, Family, Graph, Permutation, SortingNetwork, Stage, VertexOrder};

fn connected(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n, 0..=max_n, any::<u64>())
        .prop_map(|(n, extra, seed)| generate(&Family::RandomGraph { n, extra, seed }).unwrap())
}

fn tree(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n, any::<u64>()).prop_map(|(n, seed)| generate(&Family::RandomTree { n, seed }).unwrap())
}

fn permutation(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle().prop_map(|v| Permutation::new(v).unwrap())
}

fn graph_and_perm(g: impl Strategy<Value = Graph>) -> impl Strategy<Value = (Graph, Permutation)> {
    g.prop_flat_map(|g| {
        let n = g.n();
        (Just(g), permutation(n))
    })
}

/// A network of greedy random matchings, each edge a comparator of random
/// direction; it usually does not sort.
fn random_network(max_n: usize) -> impl Strategy<Value = SortingNetwork> {
    (connected(max_n), 1..12usize, any::<u64>()).prop_map(|(g, depth, seed)| {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let edges = g.edges();
        let mut stages = Vec::new();
        for _ in 0..depth {
            let mut used = vec![false; g.n()];
            let mut cs = Vec::new();
            for _ in 0..edges.len() {
                let (u, v) = edges[rng.gen_range(0..edges.len())];
                if !used[u] && !used[v] && rng.gen_bool(0.7) {
                    used[u] = true;
                    used[v] = true;
                    cs.push(if rng.gen() { Comparator::compare(u, v) } else { Comparator::compare(v, u) });
                }
            }
            stages.push(Stage::new(cs));
        }
        let n = g.n();
        SortingNetwork::new(g, stages, VertexOrder::identity(n), Default::default()).unwrap()
    })
}

/// Where each pebble ends after a swap-only stage list.
fn destinations(stages: &[Stage], n: usize) -> Vec<usize> {
    let mut at: Vec<usize> = (0..n).collect();
    for s in stages {
        for c in &s.comparators {
            at.swap(c.u, c.v);
        }
    }
    let mut pos = vec![0; n];
    for (v, &p) in at.iter().enumerate() {
        pos[p] = v;
    }
    pos
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn routers_realize_every_permutation((g, perm) in graph_and_perm(connected(16))) {
        let router = router_for(&g).unwrap();
        let plan = router.route(&perm).unwrap();
        plan.check(&g).unwrap();
        prop_assert_eq!(destinations(&plan.stages, g.n()), perm.as_slice().to_vec());
        prop_assert!(plan.depth() <= router.depth_bound());
    }

    #[test]
    fn family_routers_keep_their_bounds(
        (g, perm) in graph_and_perm(prop_oneof![
            (2..10usize).prop_map(|n| generate(&Family::Complete(n)).unwrap()),
            (2..5usize, 1..5usize).prop_map(|(p, s)| generate(&Family::Multipartite { parts: p, size: s }).unwrap()),
            tree(20),
        ])
    ) {
        let plan = router_for(&g).unwrap().route(&perm).unwrap();
        plan.check(&g).unwrap();
        let bound = match g.family() {
            Some(Family::Complete(_)) => 2,
            Some(Family::Multipartite { .. }) => 6,
            _ => 3 * g.n(),
        };
        prop_assert!(plan.depth() <= bound);
    }

    #[test]
    fn involution_factors_compose_back(perm in (1..40usize).prop_flat_map(permutation)) {
        let (a, b) = two_cycle_decompose(&perm);
        prop_assert!(a.is_involution() && b.is_involution());
        prop_assert_eq!(b.after(&a), perm);
    }

    #[test]
    fn gathering_on_the_diameter_path(t in tree(24), pick in any::<u64>()) {
        use rand::{seq::SliceRandom, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(pick);
        let path = matchnet::graph::tree_diameter_path(&t).unwrap();
        let d = path.len() - 1;
        let k = (pick as usize % path.len()).max(1);
        let mut vs: Vec<usize> = (0..t.n()).collect();
        vs.shuffle(&mut rng);
        let sources = &vs[..k];
        let mut targets = path.clone();
        targets.shuffle(&mut rng);
        let targets = &targets[..k];
        let plan = route_to_path(&t, sources, targets).unwrap();
        plan.check(&t).unwrap();
        let fin = destinations(&plan.stages, t.n());
        let mut reached: Vec<usize> = sources.iter().map(|&s| fin[s]).collect();
        reached.sort_unstable();
        let mut want = targets.to_vec();
        want.sort_unstable();
        prop_assert_eq!(reached, want);
        prop_assert!(plan.depth() <= d + 2 * (k - 1));
    }

    #[test]
    fn stages_permute_keys(net in random_network(10), keys in proptest::collection::vec(0u32..5, 10)) {
        let keys = &keys[..net.n()];
        let mut out = net.execute(keys).unwrap();
        let mut a = keys.to_vec();
        a.sort_unstable();
        out.sort_unstable();
        prop_assert_eq!(a, out);
    }

    #[test]
    fn zero_one_agrees_with_all_permutations(net in random_network(7)) {
        let z = verify_zero_one(&net).unwrap();
        let e = verify_exhaustive(&net).unwrap();
        prop_assert_eq!(z.passed(), e.passed());
        if !z.passed() {
            prop_assert_eq!(z.replay(&net), Some(true));
            prop_assert_eq!(e.replay(&net), Some(true));
        }
    }

    #[test]
    fn default_sorters_sort_and_respect_certificates(g in connected(12)) {
        let net = default_sorter(&g).unwrap();
        prop_assert_eq!(&net.graph, &g);
        prop_assert!(verify_zero_one(&net).unwrap().passed());
        if let Some(c) = &net.certificate {
            prop_assert!(net.depth() as u64 <= c.claimed_bound);
        }
    }

    #[test]
    fn tree_sorters_sort(t in tree(12)) {
        for net in [contour_tree_sort(&t).unwrap(), longest_path_sort(&t).unwrap()] {
            prop_assert!(verify_zero_one(&net).unwrap().passed());
        }
    }

    #[test]
    fn network_json_round_trips(g in connected(10), name in prop::sample::select(vec!["auto", "simulate", "longest-path"])) {
        let net = build_named(name, &g).unwrap();
        let back = SortingNetwork::from_json_str(&net.to_json_string()).unwrap();
        prop_assert_eq!(back, net);
    }

    #[test]
    fn graph_json_round_trips(g in connected(12)) {
        let order = VertexOrder::from_ranks((0..g.n()).rev().collect()).unwrap();
        let j = matchnet::graph::graph_to_json(&g, Some(&order));
        let text = serde_json::to_string(&j).unwrap();
        let (back, back_order) = matchnet::graph::graph_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        prop_assert_eq!(back.edges(), g.edges());
        prop_assert_eq!(back_order, Some(order));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn adding_an_edge_never_raises_exact_values(g in connected(4), pick in any::<prop::sample::Index>()) {
        let n = g.n();
        let missing: Vec<(usize, usize)> =
            (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|&(u, v)| !g.has_edge(u, v)).collect();
        prop_assume!(!missing.is_empty());
        let mut edges = g.edges();
        edges.push(missing[pick.index(missing.len())]);
        let h = Graph::new(n, &edges).unwrap();
        let opts = StOptions::default();
        prop_assert!(exact_rt(&h, None).unwrap().value <= exact_rt(&g, None).unwrap().value);
        prop_assert!(exact_st(&h, None, opts).unwrap().value <= exact_st(&g, None, opts).unwrap().value);
    }

    #[test]
    fn constructions_never_beat_the_exact_sorting_number(g in connected(5)) {
        let st = exact_st(&g, None, StOptions::default()).unwrap().value;
        let net = default_sorter(&g).unwrap();
        let identity = net.order == VertexOrder::identity(g.n());
        // the construction may pick its own order; compare against that one
        let st_own = if identity { st } else { exact_st(&g, Some(&net.order), StOptions::default()).unwrap().value };
        prop_assert!(st_own <= net.depth());
        // comparator-only stages can only need as many or more
        let st_cmp = exact_st(&g, None, StOptions { comparator_only: true }).unwrap().value;
        prop_assert!(st <= st_cmp);
    }
}
