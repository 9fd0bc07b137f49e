use paradox_core::formula::Mutation;
use paradox_core::productivity::*;
use std::time::Instant;

fn main() {
    let t = Instant::now();
    let r = verify_principle_formula_level(3, 2, None).unwrap();
    println!("clean sweep: structures={:?} formulas={:?} checks={:?} cex={:?} in {:?}",
        r.count_of("structures"), r.count_of("formulas"), r.count_of("checks"),
        r.count_of("counterexamples"), t.elapsed());
    for m in Mutation::ALL_IN_SCHEME {
        let t = Instant::now();
        let r = verify_principle_formula_level(3, 2, Some(m)).unwrap();
        println!("mutation {:?}: counterexamples={:?} in {:?}", m, r.count_of("counterexamples"), t.elapsed());
    }
    let t = Instant::now();
    let r = verify_principle_class_level(4).unwrap();
    println!("class level: structures={:?} classes={:?} cex={:?} in {:?}",
        r.count_of("structures"), r.count_of("classes"), r.count_of("counterexamples"), t.elapsed());
}
