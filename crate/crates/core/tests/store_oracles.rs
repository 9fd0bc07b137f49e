//! Independent oracles for the canonical store.
//!
//! The naive bisimulation oracle below never touches the store's refinement
//! code: it computes the greatest fixpoint of the back-and-forth condition
//! over node pairs directly, and is used to cross-check canonical handle
//! equality on exhaustive small-graph sweeps and seeded larger samples.

use paradox_core::hf::{MembershipGraph, SetStore};
use proptest::prelude::{prop_assert_eq, proptest, ProptestConfig};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// Greatest-fixpoint bisimilarity between two rooted graphs, by repeatedly
/// deleting pairs that violate the transfer condition.
fn naive_bisimilar(g1: &MembershipGraph, g2: &MembershipGraph) -> bool {
    let kids = |g: &MembershipGraph| -> Vec<Vec<usize>> {
        let mut k = vec![Vec::new(); g.node_count];
        for &(m, p) in &g.edges {
            if !k[p].contains(&m) {
                k[p].push(m);
            }
        }
        k
    };
    let k1 = kids(g1);
    let k2 = kids(g2);
    let mut rel = vec![vec![true; g2.node_count]; g1.node_count];
    loop {
        let mut changed = false;
        for a in 0..g1.node_count {
            for b in 0..g2.node_count {
                if !rel[a][b] {
                    continue;
                }
                let forth = k1[a].iter().all(|x| k2[b].iter().any(|y| rel[*x][*y]));
                let back = k2[b].iter().all(|y| k1[a].iter().any(|x| rel[*x][*y]));
                if !(forth && back) {
                    rel[a][b] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    rel[g1.root][g2.root]
}

/// Number of bisimilarity classes among nodes reachable from the root,
/// computed with the naive oracle against the graph itself.
fn naive_quotient_size(g: &MembershipGraph) -> usize {
    let mut reach = vec![false; g.node_count];
    let mut kids = vec![Vec::new(); g.node_count];
    for &(m, p) in &g.edges {
        kids[p].push(m);
    }
    let mut stack = vec![g.root];
    reach[g.root] = true;
    while let Some(n) = stack.pop() {
        for &c in &kids[n] {
            if !reach[c] {
                reach[c] = true;
                stack.push(c);
            }
        }
    }
    let reachable: Vec<usize> = (0..g.node_count).filter(|n| reach[*n]).collect();
    let mut classes: Vec<usize> = Vec::new();
    for &n in &reachable {
        let gn = MembershipGraph { root: n, ..g.clone() };
        if !classes.iter().any(|&m| {
            let gm = MembershipGraph { root: m, ..g.clone() };
            naive_bisimilar(&gn, &gm)
        }) {
            classes.push(n);
        }
    }
    classes.len()
}

fn all_rooted_graphs(n: usize) -> Vec<MembershipGraph> {
    let mut out = Vec::new();
    let bits = n * n;
    for mask in 0u32..(1 << bits) {
        let edges: Vec<(usize, usize)> = (0..bits)
            .filter(|b| mask >> b & 1 == 1)
            .map(|b| (b / n, b % n))
            .collect();
        for root in 0..n {
            out.push(MembershipGraph {
                node_count: n,
                edges: edges.clone(),
                root,
            });
        }
    }
    out
}

#[test]
fn canonical_uniqueness_exhaustive_small_graphs() {
    // canonicalize(g1) = canonicalize(g2) ⇔ g1 ~ g2, over every rooted
    // graph pair with at most 2 nodes (34 graphs, 1156 pairs).
    let mut graphs = all_rooted_graphs(1);
    graphs.extend(all_rooted_graphs(2));
    let mut store = SetStore::new();
    let handles: Vec<_> = graphs.iter().map(|g| store.canonicalize_graph(g).unwrap()).collect();
    for (i, gi) in graphs.iter().enumerate() {
        for (j, gj) in graphs.iter().enumerate() {
            assert_eq!(
                handles[i] == handles[j],
                naive_bisimilar(gi, gj),
                "graphs {i} and {j} disagree with the oracle"
            );
        }
    }
}

#[test]
fn canonical_uniqueness_sampled_3_and_4_node_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xb151);
    for n in [3usize, 4] {
        let mut graphs = Vec::new();
        for _ in 0..60 {
            let bits = n * n;
            let mask: u32 = rng.gen_range(0..(1u32 << bits));
            let edges: Vec<(usize, usize)> = (0..bits)
                .filter(|b| mask >> b & 1 == 1)
                .map(|b| (b / n, b % n))
                .collect();
            graphs.push(MembershipGraph {
                node_count: n,
                edges,
                root: rng.gen_range(0..n),
            });
        }
        let mut store = SetStore::new();
        let handles: Vec<_> = graphs.iter().map(|g| store.canonicalize_graph(g).unwrap()).collect();
        for i in 0..graphs.len() {
            for j in 0..graphs.len() {
                assert_eq!(
                    handles[i] == handles[j],
                    naive_bisimilar(&graphs[i], &graphs[j]),
                    "n={n}: sampled graphs {i},{j} disagree with the oracle"
                );
            }
        }
    }
}

#[test]
fn quotient_size_matches_oracle_on_spec_shapes() {
    // Self loop: quotient size 1.
    let loop1 = MembershipGraph {
        node_count: 1,
        edges: vec![(0, 0)],
        root: 0,
    };
    // n1 ∈ n2, n1 ∈ n3, root children {n2, n3}: n2 ~ n3, quotient size 3.
    let collapsing = MembershipGraph {
        node_count: 4,
        edges: vec![(1, 2), (1, 3), (2, 0), (3, 0)],
        root: 0,
    };
    // Childless node: the empty set.
    let empty = MembershipGraph {
        node_count: 1,
        edges: vec![],
        root: 0,
    };
    for (g, expect) in [(&loop1, 1usize), (&collapsing, 3), (&empty, 1)] {
        assert_eq!(naive_quotient_size(g), expect);
        let mut store = SetStore::new();
        let h = store.canonicalize_graph(g).unwrap();
        assert_eq!(store.transitive_closure(h).len(), expect);
    }
}

#[test]
fn transitive_closure_oracle_by_iteration() {
    // Tr(x) is the least membership-closed collection containing x: iterate
    // "add members of everything present" to a fixpoint and compare.
    let mut store = SetStore::new();
    let e = store.empty();
    let se = store.singleton(e);
    let sse = store.singleton(se);
    let om = {
        let g = MembershipGraph {
            node_count: 1,
            edges: vec![(0, 0)],
            root: 0,
        };
        store.canonicalize_graph(&g).unwrap()
    };
    for x in [e, se, sse, om] {
        let mut fix = vec![x];
        loop {
            let mut grew = false;
            for h in fix.clone() {
                for m in store.members(h) {
                    if !fix.contains(m) {
                        fix.push(*m);
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
        let mut expect = fix;
        expect.sort_by(|a, b| store.cmp_code(*a, *b));
        assert_eq!(store.transitive_closure(x), expect);
    }
    assert_eq!(store.transitive_closure(sse).len(), 3);
    assert_eq!(store.transitive_closure(om), vec![om]);
}

#[test]
fn mostowski_rigidity_rank_3() {
    // For grounded sets, isomorphism of closures collapses to equality of
    // closures (exhaustive over all 16 sets of rank ≤ 3).
    let mut store = SetStore::new();
    let universe = store.grounded_universe(3);
    for &x in &universe {
        for &y in &universe {
            let iso = store.is_isomorphic(x, y, 64).unwrap();
            let same_closure = store.transitive_closure(x) == store.transitive_closure(y);
            assert_eq!(iso, same_closure, "rigidity broken for {x:?},{y:?}");
        }
    }
}

#[test]
fn successor_rank_law_to_rank_4() {
    let mut store = SetStore::new();
    let universe = store.grounded_universe(4);
    assert_eq!(universe.len(), 65536);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    // Every rank ≤ 3 set, plus a seeded sample of the rank-4 layer.
    let mut picks: Vec<_> = store.grounded_universe(3);
    picks.extend(universe.choose_multiple(&mut rng, 300).copied());
    for s in picks {
        let r = store.classify(s, 1).rank.unwrap();
        let succ = store.successor(s);
        assert_eq!(store.classify(succ, 1).rank, Some(r + 1));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// choice_set always meets each member in exactly one element.
    #[test]
    fn choice_set_hits_each_member_once(perm in proptest::sample::subsequence((0usize..16).collect::<Vec<_>>(), 1..16), cuts in proptest::collection::vec(1usize..4, 0..5)) {
        let mut store = SetStore::new();
        let universe = store.grounded_universe(3);
        let elems: Vec<_> = perm.iter().map(|i| universe[*i]).collect();
        // Chop the distinct elements into disjoint nonempty groups.
        let mut groups: Vec<Vec<_>> = Vec::new();
        let mut at = 0;
        for c in cuts {
            if at >= elems.len() { break; }
            let end = (at + c).min(elems.len());
            groups.push(elems[at..end].to_vec());
            at = end;
        }
        if at < elems.len() {
            groups.push(elems[at..].to_vec());
        }
        let members: Vec<_> = groups.iter().map(|g| store.intern(g.clone())).collect();
        let family = store.intern(members.clone());
        let choice = store.choice_set(family).unwrap();
        for m in members {
            let hits = store
                .members(m)
                .iter()
                .filter(|e| store.contains(**e, choice))
                .count();
            prop_assert_eq!(hits, 1);
        }
    }

    /// Canonicalization is idempotent and intern-stable for random graphs.
    #[test]
    fn canonicalize_idempotent(mask in 0u32..(1 << 9), root in 0usize..3) {
        let edges: Vec<(usize, usize)> = (0..9).filter(|b| mask >> b & 1 == 1).map(|b| (b / 3, b % 3)).collect();
        let g = MembershipGraph { node_count: 3, edges, root };
        let mut store = SetStore::new();
        let h1 = store.canonicalize_graph(&g).unwrap();
        let h2 = store.canonicalize_graph(&g).unwrap();
        prop_assert_eq!(h1, h2);
    }
}
