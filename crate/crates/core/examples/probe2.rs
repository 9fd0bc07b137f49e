use paradox_core::hf::SetStore;
use paradox_core::rules::AbstractSystem;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

fn main() {
    // Corollary 1 on the 2-object space: every rule relation.
    let labels = vec!["a".to_string(), "b".to_string()];
    let mut qualifying = 0;
    let mut passing = 0;
    for mask in 0u32..256 {
        let rules: Vec<(u64, usize)> = (0..8)
            .filter(|b| mask >> b & 1 == 1)
            .map(|b| ((b / 2) as u64, (b % 2) as usize))
            .collect();
        let sys = AbstractSystem::new(labels.clone(), rules);
        if sys.is_deterministic() && sys.global_on_proper_subsets_of_lfp(64) {
            qualifying += 1;
            if !sys.productivity_on_lfp(64).has_failure() {
                passing += 1;
            }
        }
    }
    println!("2-object: qualifying={qualifying} passing={passing}");

    // 3-object: deterministic-by-construction samples.
    let labels3: Vec<String> = vec!["a".into(), "b".into(), "c".into()];
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut q3 = 0;
    let mut p3 = 0;
    for _ in 0..1000 {
        let mut rules = Vec::new();
        for c in 0..3usize {
            let choice: u32 = rng.gen_range(0..9);
            if choice > 0 {
                rules.push(((choice - 1) as u64, c));
            }
        }
        let sys = AbstractSystem::new(labels3.clone(), rules);
        if sys.is_deterministic() && sys.global_on_proper_subsets_of_lfp(64) {
            q3 += 1;
            if !sys.productivity_on_lfp(64).has_failure() {
                p3 += 1;
            }
        }
    }
    println!("3-object sampled: qualifying={q3} passing={p3}");

    let t = Instant::now();
    let mut store = SetStore::new();
    let u = store.grounded_universe(4);
    println!("V5 count={} in {:?}", u.len(), t.elapsed());
}
