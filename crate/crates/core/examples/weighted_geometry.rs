//! Index, well-formedness and singular strata of a family.

use delpezzo::catalog::reference_catalog;
use delpezzo::geometry::{check_well_formed, compute_index, singular_strata, Presence};

fn main() {
    let cat = reference_catalog();
    for no in [1, 9, 22] {
        let f = cat.family(no).unwrap();
        println!("No. {no}: weights {:?}, d = {}", f.weights.0.iter().map(ToString::to_string).collect::<Vec<_>>(), f.degree);
        println!("  index {}", compute_index(&f.weights, &f.degree));
        let wf = check_well_formed(&f.weights, &f.degree, f.ray).unwrap();
        println!("  well-formed on {}: {:?} (witness {:?})", f.ray, wf.verdict, wf.witness);
        for s in singular_strata(f).unwrap() {
            let when = match &s.presence {
                Presence::Always => "always".to_string(),
                Presence::Conditional(c) => c.clone(),
            };
            println!("  {} of order {} ({when})", s.label, s.order);
        }
    }
}
