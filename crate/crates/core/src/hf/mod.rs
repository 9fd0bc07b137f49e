//! Canonical store of finite sets: well-founded (hereditarily finite) sets
//! and non-well-founded sets presented by membership graphs.
//!
//! Identity is bisimilarity of membership graphs. For grounded sets this
//! coincides with extensional equality, so the store behaves as a classical
//! hereditarily-finite universe with hypersets such as `Ω = {Ω}` grafted in.
//! No two distinct stored nodes are bisimilar; a node is fully determined by
//! its (duplicate-free, canonically sorted) child list.

mod canon;
mod iso;
mod order;

pub use canon::MembershipGraph;

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, VecDeque};
use thiserror::Error;

/// Opaque identifier of a canonical set within one [`SetStore`].
///
/// Handles are only meaningful relative to the store that issued them.
/// Equality of handles is equality (bisimilarity) of the sets they denote.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SetHandle(pub(crate) u32);

impl SetHandle {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StoreError {
    #[error("malformed membership graph: {0}")]
    MalformedGraph(String),
    #[error("budget exceeded: {what} needs {needed}, budget is {budget}")]
    Budget {
        what: &'static str,
        needed: usize,
        budget: usize,
    },
    #[error("choice precondition violated: member {member} is empty")]
    ChoiceEmptyMember { member: String },
    #[error("choice precondition violated: members {a} and {b} are not disjoint")]
    ChoiceOverlap { a: String, b: String },
}

#[derive(Debug, Clone)]
pub(crate) struct Node {
    /// Duplicate-free, sorted ascending by canonical-code order.
    children: Vec<SetHandle>,
    grounded: bool,
    /// Defined only for grounded sets.
    rank: Option<u32>,
}

/// Set constructors accepted by [`SetStore::construct`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstructOp {
    Empty,
    Adjoin,
    Pair,
    Singleton,
    OrderedPair,
    Union,
    Powerset,
    Successor,
}

/// Result of [`SetStore::classify`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub grounded: bool,
    /// `None` for ungrounded sets.
    pub rank: Option<u32>,
    /// `n` is present iff `x ∈ⁿ x`, searched up to the supplied bound.
    pub n_cycles: BTreeSet<u32>,
}

/// Append-only canonical store. Immutable once frozen by the caller
/// (freezing is a usage contract: queries are pure, concurrent appends
/// need external mutual exclusion).
pub struct SetStore {
    pub(crate) nodes: Vec<Node>,
    /// Extensional intern map: canonical child list -> handle.
    intern: HashMap<Vec<SetHandle>, SetHandle>,
    /// Handles of ungrounded nodes, in allocation order.
    ungrounded: Vec<SetHandle>,
    /// Memoized canonical-order comparisons between grounded nodes.
    cmp_cache: std::cell::RefCell<HashMap<(u32, u32), Ordering>>,
    /// Guard on `powerset`: maximum number of subsets it may materialize.
    pub powerset_budget: usize,
}

impl Default for SetStore {
    fn default() -> Self {
        SetStore::new()
    }
}

impl SetStore {
    pub fn new() -> Self {
        SetStore {
            nodes: Vec::new(),
            intern: HashMap::new(),
            ungrounded: Vec::new(),
            cmp_cache: std::cell::RefCell::new(HashMap::new()),
            powerset_budget: 1 << 16,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn handles(&self) -> impl Iterator<Item = SetHandle> + '_ {
        (0..self.nodes.len() as u32).map(SetHandle)
    }

    /// Members of `x`, duplicate-free and sorted by canonical-code order.
    pub fn members(&self, x: SetHandle) -> &[SetHandle] {
        &self.nodes[x.index()].children
    }

    pub fn cardinality(&self, x: SetHandle) -> usize {
        self.members(x).len()
    }

    pub fn is_grounded(&self, x: SetHandle) -> bool {
        self.nodes[x.index()].grounded
    }

    pub fn rank(&self, x: SetHandle) -> Option<u32> {
        self.nodes[x.index()].rank
    }

    pub fn contains(&self, element: SetHandle, of: SetHandle) -> bool {
        self.members(of).binary_search_by(|m| self.cmp_code(*m, element)).is_ok()
    }

    /// Interns the set with exactly the given members. The list may be
    /// unsorted and contain duplicates; handles must belong to this store.
    pub fn intern(&mut self, mut children: Vec<SetHandle>) -> SetHandle {
        children.sort_by(|a, b| self.cmp_code(*a, *b));
        children.dedup();
        self.intern_canonical(children)
    }

    /// Interns a child list that is already canonically sorted and deduped.
    pub(crate) fn intern_canonical(&mut self, children: Vec<SetHandle>) -> SetHandle {
        if let Some(&h) = self.intern.get(&children) {
            return h;
        }
        let grounded = children.iter().all(|c| self.nodes[c.index()].grounded);
        let rank = if grounded {
            Some(
                children
                    .iter()
                    .map(|c| self.nodes[c.index()].rank.expect("grounded child has rank") + 1)
                    .max()
                    .unwrap_or(0),
            )
        } else {
            None
        };
        let h = SetHandle(self.nodes.len() as u32);
        self.nodes.push(Node {
            children: children.clone(),
            grounded,
            rank,
        });
        self.intern.insert(children, h);
        if !grounded {
            self.ungrounded.push(h);
        }
        h
    }

    /// Allocates a placeholder node for the graph canonicalizer; children are
    /// filled in by [`canon`] before the handle escapes.
    pub(crate) fn alloc_ungrounded(&mut self) -> SetHandle {
        let h = SetHandle(self.nodes.len() as u32);
        self.nodes.push(Node {
            children: Vec::new(),
            grounded: false,
            rank: None,
        });
        self.ungrounded.push(h);
        h
    }

    /// Phase one of sealing a refinement-allocated node: assign children
    /// deduplicated but in handle order, so sibling nodes can still be
    /// filled in before any canonical comparison runs.
    pub(crate) fn set_children_raw(&mut self, h: SetHandle, mut children: Vec<SetHandle>) {
        children.sort_unstable_by_key(|c| c.0);
        children.dedup();
        self.nodes[h.index()].children = children;
    }

    /// Phase two: canonically sort the child list and publish the node in
    /// the intern map. Requires every node reachable from `h` to be filled.
    pub(crate) fn seal_ungrounded(&mut self, h: SetHandle) {
        let mut children = self.nodes[h.index()].children.clone();
        children.sort_by(|a, b| self.cmp_code(*a, *b));
        debug_assert!(
            !self.intern.contains_key(&children),
            "refinement produced a node bisimilar to an existing one"
        );
        self.nodes[h.index()].children = children.clone();
        self.intern.insert(children, h);
    }

    pub(crate) fn ungrounded_handles(&self) -> &[SetHandle] {
        &self.ungrounded
    }

    pub fn empty(&mut self) -> SetHandle {
        self.intern_canonical(Vec::new())
    }

    /// `s ∪ {a}`.
    pub fn adjoin(&mut self, s: SetHandle, a: SetHandle) -> SetHandle {
        let mut children = self.members(s).to_vec();
        children.push(a);
        self.intern(children)
    }

    /// `{a, b}`.
    pub fn pair(&mut self, a: SetHandle, b: SetHandle) -> SetHandle {
        self.intern(vec![a, b])
    }

    /// `{a}`.
    pub fn singleton(&mut self, a: SetHandle) -> SetHandle {
        self.intern(vec![a])
    }

    /// Kuratowski pair `{{a}, {a, b}}`.
    pub fn ordered_pair(&mut self, a: SetHandle, b: SetHandle) -> SetHandle {
        let fst = self.singleton(a);
        let snd = self.pair(a, b);
        self.pair(fst, snd)
    }

    /// Big union `⋃ s = {x | ∃m ∈ s, x ∈ m}`.
    pub fn big_union(&mut self, s: SetHandle) -> SetHandle {
        let mut children = Vec::new();
        for m in self.members(s).to_vec() {
            children.extend_from_slice(self.members(m));
        }
        self.intern(children)
    }

    /// `P(s)`: set of all subsets of the member list. Permitted for
    /// ungrounded `s` as well, guarded by `powerset_budget` on the subset
    /// count.
    pub fn powerset(&mut self, s: SetHandle) -> Result<SetHandle, StoreError> {
        let n = self.cardinality(s);
        let count = 1usize.checked_shl(n as u32).filter(|c| *c <= self.powerset_budget);
        let Some(count) = count else {
            return Err(StoreError::Budget {
                what: "powerset subsets",
                needed: usize::MAX.min(1usize.checked_shl(n as u32).unwrap_or(usize::MAX)),
                budget: self.powerset_budget,
            });
        };
        let members = self.members(s).to_vec();
        let mut subsets = Vec::with_capacity(count);
        for mask in 0..count {
            let chosen: Vec<SetHandle> = members
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, h)| *h)
                .collect();
            subsets.push(self.intern_canonical_from_sorted_selection(chosen));
        }
        Ok(self.intern(subsets))
    }

    /// Selections of an already-canonical list stay sorted and deduped.
    fn intern_canonical_from_sorted_selection(&mut self, chosen: Vec<SetHandle>) -> SetHandle {
        self.intern_canonical(chosen)
    }

    /// `s⁺ = s ∪ {s}`.
    pub fn successor(&mut self, s: SetHandle) -> SetHandle {
        self.adjoin(s, s)
    }

    /// Uniform constructor entry point; arity is checked against `op`.
    pub fn construct(&mut self, op: ConstructOp, args: &[SetHandle]) -> Result<SetHandle, StoreError> {
        let arity_err = |want: usize| StoreError::MalformedGraph(format!(
            "constructor {op:?} expects {want} argument(s), got {}",
            args.len()
        ));
        match (op, args) {
            (ConstructOp::Empty, []) => Ok(self.empty()),
            (ConstructOp::Adjoin, [s, a]) => Ok(self.adjoin(*s, *a)),
            (ConstructOp::Pair, [a, b]) => Ok(self.pair(*a, *b)),
            (ConstructOp::Singleton, [a]) => Ok(self.singleton(*a)),
            (ConstructOp::OrderedPair, [a, b]) => Ok(self.ordered_pair(*a, *b)),
            (ConstructOp::Union, [s]) => Ok(self.big_union(*s)),
            (ConstructOp::Powerset, [s]) => self.powerset(*s),
            (ConstructOp::Successor, [s]) => Ok(self.successor(*s)),
            (ConstructOp::Empty, _) => Err(arity_err(0)),
            (ConstructOp::Singleton | ConstructOp::Union | ConstructOp::Powerset | ConstructOp::Successor, _) => {
                Err(arity_err(1))
            }
            _ => Err(arity_err(2)),
        }
    }

    /// Least transitive collection containing `x`; includes `x` itself.
    pub fn transitive_closure(&self, x: SetHandle) -> Vec<SetHandle> {
        let mut seen: Vec<bool> = vec![false; self.nodes.len()];
        let mut queue = VecDeque::from([x]);
        seen[x.index()] = true;
        let mut out = Vec::new();
        while let Some(h) = queue.pop_front() {
            out.push(h);
            for &c in self.members(h) {
                if !seen[c.index()] {
                    seen[c.index()] = true;
                    queue.push_back(c);
                }
            }
        }
        out.sort_by(|a, b| self.cmp_code(*a, *b));
        out
    }

    /// Groundedness, rank, and the set of cycle lengths `n ≤ bound` with
    /// `x ∈ⁿ x`.
    pub fn classify(&self, x: SetHandle, cycle_bound: u32) -> Classification {
        let closure = self.transitive_closure(x);
        let idx: HashMap<SetHandle, usize> = closure.iter().copied().enumerate().map(|(i, h)| (h, i)).collect();
        let k = closure.len();
        // step[i] = indices j with closure[j] ∈ closure[i].
        let step: Vec<Vec<usize>> = closure
            .iter()
            .map(|h| self.members(*h).iter().map(|c| idx[c]).collect())
            .collect();
        let x_at = idx[&x];
        let mut n_cycles = BTreeSet::new();
        // x ∈ⁿ x iff the child-direction graph has a length-n cycle through
        // x, so walk member steps from x and record when x recurs.
        let mut frontier = vec![false; k];
        for &j in &step[x_at] {
            frontier[j] = true;
        }
        for n in 1..=cycle_bound {
            if frontier[x_at] {
                n_cycles.insert(n);
            }
            let mut next = vec![false; k];
            for (i, on) in frontier.iter().enumerate() {
                if *on {
                    for &j in &step[i] {
                        next[j] = true;
                    }
                }
            }
            frontier = next;
        }
        Classification {
            grounded: self.is_grounded(x),
            rank: self.rank(x),
            n_cycles,
        }
    }

    /// Canonical choice set for a family of nonempty, pairwise disjoint
    /// members: picks the canonically least element of each member.
    pub fn choice_set(&mut self, family: SetHandle) -> Result<SetHandle, StoreError> {
        let members = self.members(family).to_vec();
        for (i, m) in members.iter().enumerate() {
            if self.cardinality(*m) == 0 {
                return Err(StoreError::ChoiceEmptyMember {
                    member: self.display(*m),
                });
            }
            for m2 in &members[i + 1..] {
                if self.members(*m).iter().any(|e| self.contains(*e, *m2)) {
                    return Err(StoreError::ChoiceOverlap {
                        a: self.display(*m),
                        b: self.display(*m2),
                    });
                }
            }
        }
        // members() is sorted canonically, so the least element is first.
        let chosen: Vec<SetHandle> = members.iter().map(|m| self.members(*m)[0]).collect();
        Ok(self.intern(chosen))
    }

    /// All grounded sets of rank ≤ `max_rank`, sorted by canonical code.
    /// The count doubles-exponentiates: ranks 0..=4 give 1, 2, 4, 16, 65536.
    pub fn grounded_universe(&mut self, max_rank: u32) -> Vec<SetHandle> {
        let mut level: Vec<SetHandle> = vec![self.empty()];
        for _ in 0..max_rank {
            let prev = level.clone();
            let mut next = Vec::with_capacity(1 << prev.len());
            for mask in 0u64..(1u64 << prev.len()) {
                let chosen: Vec<SetHandle> = prev
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, h)| *h)
                    .collect();
                next.push(self.intern(chosen));
            }
            next.sort_by(|a, b| self.cmp_code(*a, *b));
            next.dedup();
            level = next;
        }
        level
    }

    /// Braces notation for grounded sets; ungrounded sets print as
    /// `@<quotient-size>:<edges>` over their canonical closure numbering.
    pub fn display(&self, x: SetHandle) -> String {
        if self.is_grounded(x) {
            let inner: Vec<String> = self.members(x).iter().map(|m| self.display(*m)).collect();
            format!("{{{}}}", inner.join(","))
        } else {
            let key = order::hyper_key(self, x);
            let edges: Vec<String> = key.edges.iter().map(|(m, p)| format!("{m}<{p}")).collect();
            format!("@{}:{}#{}", key.size, edges.join(","), key.root)
        }
    }
}
