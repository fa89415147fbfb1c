//! Loading a catalog from disk and listing its diagnostics.

use delpezzo::catalog::{load_catalog, reference_catalog, validate_catalog};

fn main() {
    let cat = match std::env::args().nth(1) {
        Some(path) => load_catalog(std::fs::File::open(path).unwrap()).unwrap(),
        None => reference_catalog().clone(),
    };
    let diags = validate_catalog(&cat);
    println!("{} families, {} diagnostics", cat.families.len(), diags.len());
    for d in diags {
        println!("  {d}");
    }
    let reconstructed = cat
        .provenance()
        .into_iter()
        .filter(|(_, p)| *p == delpezzo::catalog::Provenance::Reconstructed)
        .count();
    println!("{reconstructed} reconstructed fields");
}
