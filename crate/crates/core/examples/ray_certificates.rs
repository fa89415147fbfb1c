//! Certifying an inequality for every integer on a ray, with the audit trail
//! and the brute-force oracle side by side.

use delpezzo::certify::{brute_oracle, certify_cmp, minimal_threshold, Domain, RayDomain, Relation};
use delpezzo::exactmath::parse_ratfn;

fn main() {
    let lhs = parse_ratfn("3n/((3n-2)(6n-5))").unwrap();
    let rhs = parse_ratfn("2/(3n-2)").unwrap();
    let cert = certify_cmp(&lhs, &rhs, Relation::Le, RayDomain::new(3)).unwrap();
    println!("{}: {:?} by {:?}", cert.claim, cert.verdict, cert.method);
    for step in &cert.audit {
        println!("  {}: {}", step.step, step.detail);
    }
    println!("oracle on [3, 1000]: clean = {}", brute_oracle(&lhs, &rhs, Relation::Le, 3..=1000).clean());

    let three_a0_over_i = parse_ratfn("3/n").unwrap();
    let one = parse_ratfn("1").unwrap();
    println!("3/n < 1 from n = {:?}", minimal_threshold(&three_a0_over_i, &one, Relation::Lt));
    let at_two = certify_cmp(&three_a0_over_i, &one, Relation::Lt, Domain::Point(2)).unwrap();
    println!("at n = 2: {:?}, witness {:?}", at_two.verdict, at_two.witness);
}
