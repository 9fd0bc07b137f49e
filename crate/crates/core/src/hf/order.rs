//! Canonical-code order over store handles.
//!
//! Grounded sets are ordered by their Ackermann codes,
//! `code(s) = Σ_{m ∈ s} 2^code(m)`, compared structurally so that codes never
//! have to be materialized. Ungrounded sets come after all grounded sets and
//! are ordered by `(closure size, canonical edge list, root position)` of
//! their quotient graph. This is the tie-breaking order used everywhere a
//! deterministic choice is needed (child lists, choice sets, witnesses).

use super::{SetHandle, SetStore};
use std::cmp::Ordering;
use std::collections::HashMap;

impl SetStore {
    /// Total canonical-code order. `Equal` only for identical handles.
    pub fn cmp_code(&self, a: SetHandle, b: SetHandle) -> Ordering {
        if a == b {
            return Ordering::Equal;
        }
        match (self.is_grounded(a), self.is_grounded(b)) {
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            (true, true) => self.ackermann_cmp(a, b),
            (false, false) => hyper_key(self, a).cmp(&hyper_key(self, b)),
        }
    }

    /// Compares Ackermann codes of two grounded sets without computing them:
    /// the set owning the largest member of the symmetric difference has the
    /// larger code, so descending-lexicographic comparison of the (already
    /// canonically sorted) member lists decides.
    fn ackermann_cmp(&self, a: SetHandle, b: SetHandle) -> Ordering {
        if a == b {
            return Ordering::Equal;
        }
        let key = (a.0.min(b.0), a.0.max(b.0));
        if let Some(ord) = self.cmp_cache.borrow().get(&key) {
            return if a.0 <= b.0 { *ord } else { ord.reverse() };
        }
        let am = self.members(a);
        let bm = self.members(b);
        let mut ord = Ordering::Equal;
        for (x, y) in am.iter().rev().zip(bm.iter().rev()) {
            if x != y {
                ord = self.ackermann_cmp(*x, *y);
                break;
            }
        }
        if ord == Ordering::Equal {
            ord = am.len().cmp(&bm.len());
        }
        debug_assert_ne!(ord, Ordering::Equal, "distinct canonical nodes compare equal");
        let stored = if a.0 <= b.0 { ord } else { ord.reverse() };
        self.cmp_cache.borrow_mut().insert(key, stored);
        ord
    }

    /// The numeric Ackermann code, when it fits in a `u128`. Rank ≤ 4 sets
    /// always fit (codes < 2^16). `None` for ungrounded sets or overflow.
    pub fn ackermann_code(&self, x: SetHandle) -> Option<u128> {
        if !self.is_grounded(x) {
            return None;
        }
        let mut code: u128 = 0;
        for m in self.members(x) {
            let mc = self.ackermann_code(*m)?;
            if mc >= 127 {
                return None;
            }
            code = code.checked_add(1u128 << mc)?;
        }
        Some(code)
    }
}

/// Canonical presentation of an ungrounded set's reachable quotient graph:
/// node count, edge list `(member, parent)` over a deterministic numbering,
/// and the root's position in that numbering. Distinct canonical hypersets
/// always get distinct keys (equal keys would exhibit a bisimulation).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) struct HyperKey {
    pub size: usize,
    pub edges: Vec<(usize, usize)>,
    pub root: usize,
}

pub(crate) fn hyper_key(store: &SetStore, x: SetHandle) -> HyperKey {
    let closure = store.transitive_closure_unordered(x);
    let numbering = canonical_numbering(store, &closure);
    let pos: HashMap<SetHandle, usize> = numbering.iter().copied().enumerate().map(|(i, h)| (h, i)).collect();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for (i, h) in numbering.iter().enumerate() {
        for c in store.members(*h) {
            edges.push((pos[c], i));
        }
    }
    edges.sort_unstable();
    HyperKey {
        size: numbering.len(),
        edges,
        root: pos[&x],
    }
}

/// Orders the nodes of a closure without consulting `cmp_code` on ungrounded
/// handles (which would recurse into `hyper_key`). Grounded nodes come first
/// in Ackermann order; ungrounded nodes are separated by iterated signature
/// refinement, which terminates with a strict total order because all store
/// nodes are pairwise non-bisimilar.
fn canonical_numbering(store: &SetStore, closure: &[SetHandle]) -> Vec<SetHandle> {
    let mut grounded: Vec<SetHandle> = closure.iter().copied().filter(|h| store.is_grounded(*h)).collect();
    grounded.sort_by(|a, b| store.cmp_code(*a, *b));
    let ungrounded: Vec<SetHandle> = closure.iter().copied().filter(|h| !store.is_grounded(*h)).collect();

    // ordinal[h]: current position class; grounded nodes are fixed singleton
    // classes below all ungrounded classes.
    let mut class: HashMap<SetHandle, usize> = HashMap::new();
    for (i, g) in grounded.iter().enumerate() {
        class.insert(*g, i);
    }
    let base = grounded.len();
    for u in &ungrounded {
        class.insert(*u, base);
    }
    loop {
        // Signature = (current class, sorted class list of members); keeping
        // the current class in the key makes each round a pure refinement.
        let mut sigs: Vec<((usize, Vec<usize>), SetHandle)> = ungrounded
            .iter()
            .map(|u| {
                let mut sig: Vec<usize> = store.members(*u).iter().map(|m| class[m]).collect();
                sig.sort_unstable();
                ((class[u], sig), *u)
            })
            .collect();
        sigs.sort_by(|a, b| a.0.cmp(&b.0).then(a.1 .0.cmp(&b.1 .0)));
        let mut changed = false;
        let mut next: HashMap<SetHandle, usize> = class.clone();
        let mut current = base;
        for (i, (sig, h)) in sigs.iter().enumerate() {
            if i > 0 && *sig != sigs[i - 1].0 {
                current = base + i;
            }
            if next[h] != current {
                next.insert(*h, current);
                changed = true;
            }
        }
        class = next;
        if !changed {
            break;
        }
    }
    let mut order: Vec<SetHandle> = closure.to_vec();
    order.sort_by_key(|h| (class[h], h.0));
    // All ungrounded nodes must have separated; duplicate classes among them
    // would mean two bisimilar canonical nodes.
    debug_assert!({
        let mut cs: Vec<usize> = ungrounded.iter().map(|u| class[u]).collect();
        cs.sort_unstable();
        cs.windows(2).all(|w| w[0] != w[1])
    });
    order
}

impl SetStore {
    /// Closure in visit order, no canonical sorting (used by the order
    /// machinery itself to avoid recursion into `cmp_code`).
    pub(crate) fn transitive_closure_unordered(&self, x: SetHandle) -> Vec<SetHandle> {
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![x];
        seen[x.index()] = true;
        let mut out = Vec::new();
        while let Some(h) = stack.pop() {
            out.push(h);
            for &c in self.members(h) {
                if !seen[c.index()] {
                    seen[c.index()] = true;
                    stack.push(c);
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hf::MembershipGraph;

    #[test]
    fn ackermann_enumeration_prefix() {
        // Codes 0,1,2,3 are ∅, {∅}, {{∅}}, {∅,{∅}}.
        let mut s = SetStore::new();
        let e = s.empty();
        let se = s.singleton(e);
        let sse = s.singleton(se);
        let two = s.pair(e, se);
        for (h, code) in [(e, 0u128), (se, 1), (sse, 2), (two, 3)] {
            assert_eq!(s.ackermann_code(h), Some(code));
        }
        let mut all = vec![two, sse, se, e];
        all.sort_by(|a, b| s.cmp_code(*a, *b));
        assert_eq!(all, vec![e, se, sse, two]);
    }

    #[test]
    fn order_matches_numeric_codes_exhaustively_to_rank_3() {
        let mut s = SetStore::new();
        let universe = s.grounded_universe(3);
        let codes: Vec<u128> = universe.iter().map(|h| s.ackermann_code(*h).unwrap()).collect();
        // grounded_universe sorts by cmp_code; numeric codes must agree.
        let mut sorted = codes.clone();
        sorted.sort_unstable();
        assert_eq!(codes, sorted);
        assert_eq!(codes, (0..16).collect::<Vec<u128>>());
    }

    #[test]
    fn grounded_sets_precede_hypersets() {
        let mut s = SetStore::new();
        let g = MembershipGraph {
            node_count: 1,
            edges: vec![(0, 0)],
            root: 0,
        };
        let om = s.canonicalize_graph(&g).unwrap();
        let e = s.empty();
        let deep = s.grounded_universe(3).pop().unwrap();
        assert_eq!(s.cmp_code(e, om), Ordering::Less);
        assert_eq!(s.cmp_code(deep, om), Ordering::Less);
        assert_eq!(s.cmp_code(om, om), Ordering::Equal);
    }

    #[test]
    fn hyper_keys_distinguish_roots_sharing_a_closure() {
        // a = {b}, b = {a, ∅}: Tr(a) = Tr(b) as node sets, but the root
        // position differs.
        let mut s = SetStore::new();
        let g = MembershipGraph {
            node_count: 3,
            edges: vec![(1, 0), (0, 1), (2, 1)],
            root: 0,
        };
        let a = s.canonicalize_graph(&g).unwrap();
        let b = s.members(a)[0];
        assert_ne!(s.cmp_code(a, b), Ordering::Equal);
        let (ka, kb) = (hyper_key(&s, a), hyper_key(&s, b));
        assert_eq!(ka.size, kb.size);
        assert_eq!(ka.edges, kb.edges);
        assert_ne!(ka.root, kb.root);
    }
}
