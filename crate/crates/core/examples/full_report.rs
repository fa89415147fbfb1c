//! The whole-catalog report as markdown.

use delpezzo::catalog::reference_catalog;
use delpezzo::report::{catalog_markdown, catalog_report};

fn main() {
    let report = catalog_report(reference_catalog());
    print!("{}", catalog_markdown(&report));
    println!("headline for No. 1-22: {}", report.headline_holds(1..=22));
}
