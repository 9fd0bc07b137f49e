//! ∈-isomorphism: a bijection between transitive closures preserving
//! membership in both directions. Backtracking over the closure graphs with
//! color-refinement pruning; closures are small by construction here.

use super::{SetHandle, SetStore, StoreError};
use std::collections::HashMap;

impl SetStore {
    /// True iff there is a bijection `F : Tr(x) → Tr(y)` with
    /// `a ∈ b ⇔ F(a) ∈ F(b)`. Equal handles are trivially isomorphic.
    /// Errors when either closure exceeds `budget` nodes.
    pub fn is_isomorphic(&self, x: SetHandle, y: SetHandle, budget: usize) -> Result<bool, StoreError> {
        if x == y {
            return Ok(true);
        }
        let cx = self.transitive_closure(x);
        let cy = self.transitive_closure(y);
        let need = cx.len().max(cy.len());
        if need > budget {
            return Err(StoreError::Budget {
                what: "isomorphism closure nodes",
                needed: need,
                budget,
            });
        }
        if cx.len() != cy.len() {
            return Ok(false);
        }
        Ok(Matcher::new(self, &cx, &cy).solve())
    }
}

struct Matcher {
    n: usize,
    kids_x: Vec<Vec<usize>>,
    kids_y: Vec<Vec<usize>>,
    color_x: Vec<u64>,
    color_y: Vec<u64>,
}

impl Matcher {
    fn new(store: &SetStore, cx: &[SetHandle], cy: &[SetHandle]) -> Matcher {
        let index = |c: &[SetHandle]| -> HashMap<SetHandle, usize> {
            c.iter().copied().enumerate().map(|(i, h)| (h, i)).collect()
        };
        let ix = index(cx);
        let iy = index(cy);
        // Closures are transitive, so every member of a closure node is a
        // closure node; the restricted relation is the full relation.
        let adj = |c: &[SetHandle], idx: &HashMap<SetHandle, usize>| -> Vec<Vec<usize>> {
            c.iter().map(|h| store.members(*h).iter().map(|m| idx[m]).collect()).collect()
        };
        let kids_x = adj(cx, &ix);
        let kids_y = adj(cy, &iy);
        let colors = |c: &[SetHandle], kids: &Vec<Vec<usize>>| -> Vec<u64> {
            let indeg = {
                let mut d = vec![0u64; c.len()];
                for ks in kids {
                    for k in ks {
                        d[*k] += 1;
                    }
                }
                d
            };
            c.iter()
                .enumerate()
                .map(|(i, h)| {
                    let grounded = store.is_grounded(*h) as u64;
                    let rank = store.rank(*h).map(|r| r as u64 + 1).unwrap_or(0);
                    (grounded << 48) | (rank << 32) | ((kids[i].len() as u64) << 16) | indeg[i]
                })
                .collect()
        };
        let color_x = colors(cx, &kids_x);
        let color_y = colors(cy, &kids_y);
        Matcher {
            n: cx.len(),
            kids_x,
            kids_y,
            color_x,
            color_y,
        }
    }

    fn solve(&self) -> bool {
        // Color multisets must agree before any search.
        let mut mx = self.color_x.clone();
        let mut my = self.color_y.clone();
        mx.sort_unstable();
        my.sort_unstable();
        if mx != my {
            return false;
        }
        let mut map = vec![usize::MAX; self.n];
        let mut used = vec![false; self.n];
        self.backtrack(0, &mut map, &mut used)
    }

    fn backtrack(&self, i: usize, map: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        if i == self.n {
            return true;
        }
        for cand in 0..self.n {
            if used[cand] || self.color_x[i] != self.color_y[cand] {
                continue;
            }
            if !self.consistent(i, cand, map) {
                continue;
            }
            map[i] = cand;
            used[cand] = true;
            if self.backtrack(i + 1, map, used) {
                return true;
            }
            map[i] = usize::MAX;
            used[cand] = false;
        }
        false
    }

    /// Edges between the new pair and all previously mapped nodes must agree
    /// in both directions.
    fn consistent(&self, i: usize, cand: usize, map: &[usize]) -> bool {
        for j in 0..i {
            let fj = map[j];
            let x_ij = self.kids_x[j].contains(&i); // i ∈ j
            let y_ij = self.kids_y[fj].contains(&cand);
            if x_ij != y_ij {
                return false;
            }
            let x_ji = self.kids_x[i].contains(&j);
            let y_ji = self.kids_y[cand].contains(&fj);
            if x_ji != y_ji {
                return false;
            }
        }
        // Self-loop parity.
        self.kids_x[i].contains(&i) == self.kids_y[cand].contains(&cand)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hf::MembershipGraph;

    #[test]
    fn identity_and_size_mismatch() {
        let mut s = SetStore::new();
        let e = s.empty();
        let se = s.singleton(e);
        let sse = s.singleton(se);
        assert!(s.is_isomorphic(se, se, 64).unwrap());
        // |Tr({∅})| = 2 vs |Tr({{∅}})| = 3.
        assert!(!s.is_isomorphic(se, sse, 64).unwrap());
    }

    #[test]
    fn bisimilar_presentations_are_isomorphic() {
        let mut s = SetStore::new();
        let one = MembershipGraph {
            node_count: 1,
            edges: vec![(0, 0)],
            root: 0,
        };
        let two = MembershipGraph {
            node_count: 2,
            edges: vec![(0, 1), (1, 0)],
            root: 0,
        };
        let a = s.canonicalize_graph(&one).unwrap();
        let b = s.canonicalize_graph(&two).unwrap();
        assert_eq!(a, b);
        assert!(s.is_isomorphic(a, b, 64).unwrap());
    }

    #[test]
    fn budget_is_enforced() {
        let mut s = SetStore::new();
        let e = s.empty();
        let se = s.singleton(e);
        let sse = s.singleton(se);
        assert!(matches!(
            s.is_isomorphic(sse, sse, 64).map(|_| ()),
            Ok(())
        ));
        let other = s.pair(e, se);
        assert!(matches!(
            s.is_isomorphic(sse, other, 2),
            Err(StoreError::Budget { .. })
        ));
    }

    #[test]
    fn omega_is_isomorphic_to_its_member() {
        let mut s = SetStore::new();
        let g = MembershipGraph {
            node_count: 1,
            edges: vec![(0, 0)],
            root: 0,
        };
        let om = s.canonicalize_graph(&g).unwrap();
        let member = s.members(om)[0];
        assert!(s.is_isomorphic(om, member, 64).unwrap());
    }
}
