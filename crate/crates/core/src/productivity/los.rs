//! Limitation-of-size checks in three modes.
//!
//! Each mode fixes a family of "small" collections (the sets the
//! conception admits) and verifies the biconditional: a class is outside
//! the family exactly when every small subset of it admits the mode's
//! escape. In cumulative mode the escape is stage-relative — the subset
//! fits inside some stage which the class outgrows; in cardinal and
//! Zermelo modes it is a plain element of the class beyond the subset.

use crate::hf::{MembershipGraph, SetHandle, SetStore};
use crate::report::Report;

/// A finite ground with a designated family of small subsets.
#[derive(Debug, Clone)]
pub struct SetSystem {
    pub ground_labels: Vec<String>,
    pub smallness: Smallness,
}

#[derive(Debug, Clone)]
pub enum Smallness {
    /// Subsets of some stage; `stage_masks[α]` is the bitmap of stage α.
    Stages(Vec<u64>),
    /// Fewer than `k` elements.
    CardinalBelow(usize),
    /// An explicit family.
    Explicit(Vec<u64>),
}

impl SetSystem {
    pub fn ground_size(&self) -> usize {
        self.ground_labels.len()
    }

    pub fn ground_mask(&self) -> u64 {
        if self.ground_labels.is_empty() {
            0
        } else {
            (1u64 << self.ground_labels.len()) - 1
        }
    }

    pub fn is_small(&self, s: u64) -> bool {
        match &self.smallness {
            Smallness::Stages(masks) => masks.iter().any(|v| s & !v == 0),
            Smallness::CardinalBelow(k) => (s.count_ones() as usize) < *k,
            Smallness::Explicit(family) => family.contains(&s),
        }
    }
}

/// Shared verification: for every class `C`, `C` not small ⇔ every small
/// `s ⊆ C` has the mode's escape.
fn verify(sys: &SetSystem, report: &mut Report, witnesses: bool) {
    let ground = sys.ground_mask();
    let mut classes = 0u64;
    let mut counterexamples = 0u64;
    for class in 0..=ground {
        classes += 1;
        let left = !sys.is_small(class);
        let mut right = true;
        for s in 0..=ground {
            if s & !class != 0 || !sys.is_small(s) {
                continue;
            }
            let escape = match &sys.smallness {
                // A stage the subset fits in while the class outgrows it.
                Smallness::Stages(masks) => masks
                    .iter()
                    .find(|v| s & !*v == 0 && class & !*v != 0)
                    .map(|v| (class & !v).trailing_zeros() as usize),
                // A plain member of the class beyond the subset.
                Smallness::CardinalBelow(_) | Smallness::Explicit(_) => {
                    let beyond = class & !s;
                    (beyond != 0).then(|| beyond.trailing_zeros() as usize)
                }
            };
            match escape {
                Some(x) => {
                    if witnesses && left {
                        report.witness(class, format!("{s:b}"), sys.ground_labels[x].clone());
                    }
                }
                None => {
                    right = false;
                    break;
                }
            }
        }
        if left != right {
            counterexamples += 1;
            report.counterexample(class, format!("left={left} right={right}"));
        }
    }
    report.count("classes", classes);
    report.count("counterexamples", counterexamples);
}

/// Cumulative mode: stages `V_0 ⊂ V_1 ⊂ … ⊂ V_d` built by iterated
/// powerset inside a fresh store; small = inside some stage. With
/// `include_omega` the self-membered set joins the ground as the paper's
/// discussion case: `{Ω}` is then classified paradoxical even though no
/// productive choice exists on it among its own subsets — the restriction
/// of sets to stage subsets is what produces the choice.
pub fn los_cumulative(d: usize, include_omega: bool) -> Report {
    let mut report = Report::new();
    let mut store = SetStore::new();
    let mut stages: Vec<Vec<SetHandle>> = vec![Vec::new()];
    for _ in 0..d {
        let prev = stages.last().unwrap().clone();
        let mut next = Vec::new();
        for mask in 0u64..(1 << prev.len()) {
            let chosen: Vec<SetHandle> = prev
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, h)| *h)
                .collect();
            let h = store.intern(chosen);
            if !next.contains(&h) {
                next.push(h);
            }
        }
        next.sort_by(|a, b| store.cmp_code(*a, *b));
        stages.push(next);
    }
    let mut ground: Vec<SetHandle> = stages.last().unwrap().clone();
    if include_omega {
        let omega = MembershipGraph {
            node_count: 1,
            edges: vec![(0, 0)],
            root: 0,
        };
        let om = store.canonicalize_graph(&omega).unwrap();
        ground.push(om);
    }
    let index_of = |h: SetHandle, ground: &[SetHandle]| ground.iter().position(|g| *g == h).unwrap();
    let stage_masks: Vec<u64> = stages
        .iter()
        .map(|stage| stage.iter().map(|h| 1u64 << index_of(*h, &ground)).sum())
        .collect();
    let labels: Vec<String> = ground.iter().map(|h| store.display(*h)).collect();
    report.count("stage_count", stage_masks.len() as u64);
    report.count("ground_size", ground.len() as u64);
    let sys = SetSystem {
        ground_labels: labels,
        smallness: Smallness::Stages(stage_masks.clone()),
    };
    verify(&sys, &mut report, false);
    if include_omega {
        let om_bit = 1u64 << (ground.len() - 1);
        report.check("omega_outside_stages", !sys.is_small(om_bit));
        // {Ω} is proclaimed paradoxical once sets are stage subsets: its
        // only small subset is ∅, which fits in V_0 while Ω escapes it.
        let escape = stage_masks.iter().any(|v| om_bit & !v != 0);
        report.check("omega_paradoxical_in_cumulative", !sys.is_small(om_bit) && escape);
        report.witness(om_bit, "{}", sys.ground_labels[ground.len() - 1].clone());
    }
    report.check("los-cumulative", !report.has_failure());
    report
}

/// Cardinal mode: ground of `g` abstract objects, small = fewer than `k`
/// elements. The finite analog of ordinal enumerability: every small
/// subset of a too-big class extends inside it.
pub fn los_cardinal(k: usize, g: usize) -> Report {
    let mut report = Report::new();
    let sys = SetSystem {
        ground_labels: (0..g).map(|i| format!("o{i}")).collect(),
        smallness: Smallness::CardinalBelow(k),
    };
    report.count("ground_size", g as u64);
    report.count("threshold", k as u64);
    verify(&sys, &mut report, false);
    // The headline equivalence of this mode.
    let ground = sys.ground_mask();
    let matches = (0..=ground).all(|c| !sys.is_small(c) == (c.count_ones() as usize >= k));
    report.check("paradoxical-iff-at-least-k", matches);
    report.check("los-cardinal", !report.has_failure());
    report
}

/// Zermelo mode: the family is arbitrary; the biconditional is a logical
/// truth (take `s = C`).
pub fn los_zermelo(sys: &SetSystem) -> Report {
    let mut report = Report::new();
    report.count("ground_size", sys.ground_size() as u64);
    verify(sys, &mut report, false);
    report.check("los-zermelo", !report.has_failure());
    report
}

/// Zermelo mode over every family of subsets of a ground of size ≤ `g`.
pub fn los_zermelo_exhaustive(g: usize) -> Report {
    let mut report = Report::new();
    let mut families = 0u64;
    let mut counterexamples = 0u64;
    let subsets = 1u64 << g;
    for fam_mask in 0u64..(1 << subsets) {
        families += 1;
        let family: Vec<u64> = (0..subsets).filter(|s| fam_mask >> s & 1 == 1).collect();
        let sys = SetSystem {
            ground_labels: (0..g).map(|i| format!("o{i}")).collect(),
            smallness: Smallness::Explicit(family),
        };
        let ground = sys.ground_mask();
        for class in 0..=ground {
            let left = !sys.is_small(class);
            let right = (0..=ground)
                .filter(|s| s & !class == 0 && sys.is_small(*s))
                .all(|s| class & !s != 0);
            if left != right {
                counterexamples += 1;
                if counterexamples <= 8 {
                    report.counterexample(class, format!("family {fam_mask:b}"));
                }
            }
        }
    }
    report.count("families", families);
    report.count("counterexamples", counterexamples);
    report.check("los-zermelo-exhaustive", counterexamples == 0);
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cumulative_d3_all_classes_agree() {
        let r = los_cumulative(3, false);
        assert_eq!(r.count_of("ground_size"), Some(4));
        assert_eq!(r.count_of("classes"), Some(16));
        assert_eq!(r.count_of("counterexamples"), Some(0));
        assert!(!r.has_failure());
    }

    #[test]
    fn cumulative_with_omega() {
        let r = los_cumulative(2, true);
        assert_eq!(r.count_of("ground_size"), Some(3));
        assert_eq!(r.count_of("counterexamples"), Some(0));
        assert!(!r.has_failure());
        assert_eq!(
            r.check_status("omega_paradoxical_in_cumulative"),
            Some(crate::report::CheckStatus::Pass)
        );
    }

    #[test]
    fn cardinal_k2_g3() {
        let r = los_cardinal(2, 3);
        assert_eq!(r.count_of("classes"), Some(8));
        assert_eq!(r.count_of("counterexamples"), Some(0));
        assert!(!r.has_failure());
    }

    #[test]
    fn zermelo_explicit_family() {
        let sys = SetSystem {
            ground_labels: vec!["a".into(), "b".into()],
            smallness: Smallness::Explicit(vec![0b00, 0b01]),
        };
        let r = los_zermelo(&sys);
        assert!(!r.has_failure());
    }

    #[test]
    fn zermelo_exhaustive_ground_2() {
        let r = los_zermelo_exhaustive(2);
        assert_eq!(r.count_of("families"), Some(16));
        assert_eq!(r.count_of("counterexamples"), Some(0));
    }
}
