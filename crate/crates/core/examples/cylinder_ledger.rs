//! Every exclusion case for one family, certified and cross-checked.

use delpezzo::catalog::reference_catalog;
use delpezzo::certify::RayDomain;
use delpezzo::cylinder::{all_cases, certify_case_on, dstar, oracle_case};

fn main() {
    let no = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(22);
    let cat = reference_catalog();
    let f = cat.family(no).expect("family 1-35");
    let cases = match all_cases(f) {
        Ok(c) => c,
        Err(e) => {
            println!("No. {no}: {e}");
            return;
        }
    };
    for c in &cases {
        let cert = certify_case_on(c, RayDomain::new(3)).unwrap();
        let clean = oracle_case(c, 3..=1000).clean();
        println!("{:<28} {} <= {}  {:?}, oracle clean: {clean}", c.id, c.lhs, c.rhs, cert.verdict);
    }
    let d = dstar(f).unwrap();
    println!("D* = {} D + {} H_x, valid on {}", d.d_coeff, d.hx_coeff, d.validity_ray);
}
