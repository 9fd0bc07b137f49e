//! Membership graphs and their bisimulation-quotient insertion into a store.
//!
//! A graph presents a (possibly non-well-founded) set: nodes are set
//! occurrences, an edge `(m, p)` says node `m` is a member of node `p`, and
//! the root marks the presented set. Canonicalization returns the handle of
//! the quotient rooted there: grounded parts are interned extensionally
//! bottom-up, cyclic parts are matched against the store's existing
//! ungrounded nodes by partition refinement.

use super::{SetHandle, SetStore, StoreError};
use std::collections::{BTreeSet, HashMap};

/// A rooted membership graph. `edges` entries are `(member, parent)` pairs
/// of 0-based node indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MembershipGraph {
    pub node_count: usize,
    pub edges: Vec<(usize, usize)>,
    pub root: usize,
}

impl MembershipGraph {
    /// Parses the one-decl-per-line text format:
    ///
    /// ```text
    /// # comment
    /// nodes 3
    /// edge 1 0
    /// root 0
    /// ```
    ///
    /// Indices are 0-based decimals; edge order is irrelevant.
    pub fn parse(text: &str) -> Result<MembershipGraph, StoreError> {
        let mut node_count: Option<usize> = None;
        let mut edges = Vec::new();
        let mut root: Option<usize> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: &str| StoreError::MalformedGraph(format!("line {}: {}", lineno + 1, msg));
            let mut it = line.split_whitespace();
            let kw = it.next().unwrap();
            let mut num = |what: &str| -> Result<usize, StoreError> {
                it.next()
                    .ok_or_else(|| bad(&format!("missing {what}")))?
                    .parse::<usize>()
                    .map_err(|_| bad(&format!("bad {what}")))
            };
            match kw {
                "nodes" => node_count = Some(num("node count")?),
                "edge" => {
                    let m = num("member index")?;
                    let p = num("parent index")?;
                    edges.push((m, p));
                }
                "root" => root = Some(num("root index")?),
                other => return Err(bad(&format!("unknown declaration `{other}`"))),
            }
        }
        let node_count = node_count.ok_or_else(|| StoreError::MalformedGraph("missing `nodes` line".into()))?;
        let root = root.ok_or_else(|| StoreError::MalformedGraph("missing `root` line".into()))?;
        let g = MembershipGraph {
            node_count,
            edges,
            root,
        };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<(), StoreError> {
        if self.root >= self.node_count {
            return Err(StoreError::MalformedGraph(format!(
                "root index {} out of range (nodes {})",
                self.root, self.node_count
            )));
        }
        for &(m, p) in &self.edges {
            if m >= self.node_count || p >= self.node_count {
                return Err(StoreError::MalformedGraph(format!(
                    "edge ({m},{p}) out of range (nodes {})",
                    self.node_count
                )));
            }
        }
        Ok(())
    }
}

/// Child symbol used during refinement: either an already-canonical handle
/// (grounded, or a previously matched node) or a participant block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Sym {
    Atom(u32),
    Block(usize),
}

impl SetStore {
    /// Returns the handle of the bisimulation quotient of `g` at its root.
    /// Idempotent: re-canonicalizing any presentation of an already stored
    /// set returns the same handle.
    pub fn canonicalize_graph(&mut self, g: &MembershipGraph) -> Result<SetHandle, StoreError> {
        g.validate()?;

        // Children lists restricted to nodes reachable from the root.
        let mut children: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); g.node_count];
        for &(m, p) in &g.edges {
            children[p].insert(m);
        }
        let mut reach = vec![false; g.node_count];
        let mut stack = vec![g.root];
        reach[g.root] = true;
        while let Some(n) = stack.pop() {
            for &c in &children[n] {
                if !reach[c] {
                    reach[c] = true;
                    stack.push(c);
                }
            }
        }

        // A node is grounded-in-g iff it reaches no cycle. Iteratively mark
        // nodes all of whose children are already marked; the unmarked
        // remainder is exactly the cycle-reaching part.
        let mut grounded = vec![false; g.node_count];
        loop {
            let mut changed = false;
            for n in 0..g.node_count {
                if reach[n] && !grounded[n] && children[n].iter().all(|c| grounded[*c]) {
                    grounded[n] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }

        // Intern the grounded part bottom-up; the extensional intern map
        // collapses bisimilar grounded nodes on its own.
        let mut mapped: HashMap<usize, SetHandle> = HashMap::new();
        loop {
            let mut changed = false;
            for n in 0..g.node_count {
                if reach[n] && grounded[n] && !mapped.contains_key(&n) && children[n].iter().all(|c| mapped.contains_key(c)) {
                    let hs: Vec<SetHandle> = children[n].iter().map(|c| mapped[c]).collect();
                    let h = self.intern(hs);
                    mapped.insert(n, h);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        if grounded[g.root] {
            return Ok(mapped[&g.root]);
        }

        // Participants: the graph's cycle-reaching nodes plus every existing
        // ungrounded store node. Partition refinement from a single block
        // computes bisimilarity; store nodes are pairwise non-bisimilar, so
        // each final block holds at most one of them.
        let input_part: Vec<usize> = (0..g.node_count).filter(|n| reach[*n] && !grounded[*n]).collect();
        let store_part: Vec<SetHandle> = self.ungrounded_handles().to_vec();
        let total = input_part.len() + store_part.len();
        let input_index: HashMap<usize, usize> = input_part.iter().copied().enumerate().map(|(i, n)| (n, i)).collect();
        let store_index: HashMap<SetHandle, usize> = store_part
            .iter()
            .copied()
            .enumerate()
            .map(|(i, h)| (h, input_part.len() + i))
            .collect();

        let child_syms = |block: &[usize]| -> Vec<Vec<Sym>> {
            let mut out = Vec::with_capacity(total);
            for n in &input_part {
                let mut sig: Vec<Sym> = children[*n]
                    .iter()
                    .map(|c| match input_index.get(c) {
                        Some(i) => Sym::Block(block[*i]),
                        None => Sym::Atom(mapped[c].0),
                    })
                    .collect();
                sig.sort_unstable();
                sig.dedup();
                out.push(sig);
            }
            for h in &store_part {
                let mut sig: Vec<Sym> = self
                    .members(*h)
                    .iter()
                    .map(|c| match store_index.get(c) {
                        Some(i) => Sym::Block(block[*i]),
                        None => Sym::Atom(c.0),
                    })
                    .collect();
                sig.sort_unstable();
                sig.dedup();
                out.push(sig);
            }
            out
        };

        let mut block = vec![0usize; total];
        loop {
            let sigs = child_syms(&block);
            let mut keyed: Vec<(usize, &Vec<Sym>, usize)> = (0..total).map(|i| (block[i], &sigs[i], i)).collect();
            keyed.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
            let mut next = vec![0usize; total];
            let mut current = 0usize;
            for (i, entry) in keyed.iter().enumerate() {
                if i > 0 && (entry.0, entry.1) != (keyed[i - 1].0, keyed[i - 1].1) {
                    current = i;
                }
                next[entry.2] = current;
            }
            if next == block {
                break;
            }
            block = next;
        }

        // Allocate handles for blocks not containing a store node.
        let mut block_handle: HashMap<usize, SetHandle> = HashMap::new();
        for (i, h) in store_part.iter().enumerate() {
            let b = block[input_part.len() + i];
            debug_assert!(!block_handle.contains_key(&b), "two store nodes in one block");
            block_handle.insert(b, *h);
        }
        let mut fresh: Vec<usize> = Vec::new();
        for n in &input_part {
            let b = block[input_index[n]];
            if !block_handle.contains_key(&b) {
                block_handle.insert(b, self.alloc_ungrounded());
                fresh.push(b);
            }
        }
        // Fill fresh nodes' children; every member of a block has the same
        // signature at fixpoint, so any representative works. Children are
        // assigned for all fresh nodes first and sealed (canonically sorted,
        // interned) afterwards, so hyper-key comparisons during sealing see
        // only complete graphs.
        for b in &fresh {
            let rep = input_part
                .iter()
                .find(|n| block[input_index[*n]] == *b)
                .expect("fresh block has an input representative");
            let hs: Vec<SetHandle> = children[*rep]
                .iter()
                .map(|c| match input_index.get(c) {
                    Some(i) => block_handle[&block[*i]],
                    None => mapped[c],
                })
                .collect();
            self.set_children_raw(block_handle[b], hs);
        }
        for b in &fresh {
            self.seal_ungrounded(block_handle[b]);
        }
        Ok(block_handle[&block[input_index[&g.root]]])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trips_declarations() {
        let g = MembershipGraph::parse("# self loop\nnodes 1\nedge 0 0\nroot 0\n").unwrap();
        assert_eq!(
            g,
            MembershipGraph {
                node_count: 1,
                edges: vec![(0, 0)],
                root: 0
            }
        );
        assert!(MembershipGraph::parse("nodes 1\nroot 2").is_err());
        assert!(MembershipGraph::parse("nodes 1\nedge 0 3\nroot 0").is_err());
        assert!(MembershipGraph::parse("edge 0 0\nroot 0").is_err());
        assert!(MembershipGraph::parse("nodes 1\nroot 0\nblah").is_err());
    }

    #[test]
    fn self_loop_quotient_is_omega() {
        let mut s = SetStore::new();
        let g = MembershipGraph {
            node_count: 1,
            edges: vec![(0, 0)],
            root: 0,
        };
        let om = s.canonicalize_graph(&g).unwrap();
        assert_eq!(s.members(om), &[om]);
        assert_eq!(s.transitive_closure(om).len(), 1);
        // Idempotence across presentations.
        let om2 = s.canonicalize_graph(&g).unwrap();
        assert_eq!(om, om2);
    }

    #[test]
    fn childless_node_is_empty_set() {
        let mut s = SetStore::new();
        let g = MembershipGraph {
            node_count: 1,
            edges: vec![],
            root: 0,
        };
        let h = s.canonicalize_graph(&g).unwrap();
        assert_eq!(h, s.empty());
    }

    #[test]
    fn bisimilar_grounded_nodes_collapse() {
        // n1 childless; n1 ∈ n2, n1 ∈ n3; root has children n2, n3.
        // n2 and n3 are bisimilar, so the quotient is {{{}}} with 3 nodes.
        let mut s = SetStore::new();
        let g = MembershipGraph {
            node_count: 4,
            edges: vec![(1, 2), (1, 3), (2, 0), (3, 0)],
            root: 0,
        };
        let h = s.canonicalize_graph(&g).unwrap();
        let e = s.empty();
        let se = s.singleton(e);
        let sse = s.singleton(se);
        assert_eq!(h, sse);
        assert_eq!(s.transitive_closure(h).len(), 3);
    }

    #[test]
    fn pure_two_cycle_collapses_to_omega() {
        // a = {b}, b = {a} is bisimilar to the self loop: both nodes have
        // one member lying in the same block, so the quotient is Ω.
        let mut s = SetStore::new();
        let two = MembershipGraph {
            node_count: 2,
            edges: vec![(0, 1), (1, 0)],
            root: 0,
        };
        let h2 = s.canonicalize_graph(&two).unwrap();
        let one = MembershipGraph {
            node_count: 1,
            edges: vec![(0, 0)],
            root: 0,
        };
        let h1 = s.canonicalize_graph(&one).unwrap();
        assert_eq!(h2, h1);
        assert_eq!(s.cardinality(h2), 1);
    }

    #[test]
    fn distinct_hypersets_in_one_cycle_stay_distinct() {
        // a = {b}, b = {a, ∅}.
        let mut s = SetStore::new();
        let g = MembershipGraph {
            node_count: 3,
            edges: vec![(1, 0), (0, 1), (2, 1)],
            root: 0,
        };
        let a = s.canonicalize_graph(&g).unwrap();
        assert_eq!(s.cardinality(a), 1);
        let b = s.members(a)[0];
        assert_ne!(a, b);
        assert_eq!(s.cardinality(b), 2);
        assert!(s.members(b).contains(&a));
        let e = s.empty();
        assert!(s.members(b).contains(&e));

        // Same graph rooted at b.
        let gb = MembershipGraph {
            node_count: 3,
            edges: vec![(1, 0), (0, 1), (2, 1)],
            root: 1,
        };
        let b2 = s.canonicalize_graph(&gb).unwrap();
        assert_eq!(b, b2);
    }

    #[test]
    fn unreachable_nodes_are_ignored() {
        let mut s = SetStore::new();
        let g = MembershipGraph {
            node_count: 3,
            edges: vec![(1, 1), (2, 2)], // two self-loops, root elsewhere
            root: 0,
        };
        let h = s.canonicalize_graph(&g).unwrap();
        assert_eq!(h, s.empty());
    }

    #[test]
    fn mixed_grounded_and_cyclic_parents() {
        // root = {Ω, ∅} where Ω is a nested self-loop.
        let mut s = SetStore::new();
        let g = MembershipGraph {
            node_count: 3,
            edges: vec![(1, 0), (1, 1), (2, 0)],
            root: 0,
        };
        let h = s.canonicalize_graph(&g).unwrap();
        assert!(!s.is_grounded(h));
        assert_eq!(s.cardinality(h), 2);
        let om_graph = MembershipGraph {
            node_count: 1,
            edges: vec![(0, 0)],
            root: 0,
        };
        let om = s.canonicalize_graph(&om_graph).unwrap();
        let e = s.empty();
        assert_eq!(s.members(h), &[e, om]);
    }
}
