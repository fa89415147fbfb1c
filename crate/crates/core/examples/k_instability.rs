//! The instability criterion 3a0/I < 1 against the tabulated verdicts.

use delpezzo::catalog::reference_catalog;
use delpezzo::stability::{alpha_upper_bound, instability_threshold, stability_status};

fn main() {
    let cat = reference_catalog();
    for f in cat.families() {
        let t = instability_threshold(f).map(|(t, _)| t);
        let low = stability_status(f, 1);
        println!(
            "No. {:>2}: a0/I = {:<12} unstable by criterion from {:<8} n = 1: {}",
            f.no,
            alpha_upper_bound(f).map_or("-".into(), |r| r.to_string()),
            t.map_or("-".into(), |t| format!("n = {t}")),
            low.status
        );
    }
}
