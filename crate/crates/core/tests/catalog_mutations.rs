mod common;

use common::{baseline, detect, mutate, numeric_leaves, Detection};
use delpezzo::catalog::{parse_catalog, reference_catalog, reference_json, validate_catalog};
use delpezzo::exactmath::{parse_factored, parse_poly};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn codes_after(edit: impl FnOnce(&mut delpezzo::catalog::Catalog)) -> Vec<(Option<u32>, String)> {
    let base = baseline();
    let mut cat = reference_catalog().clone();
    edit(&mut cat);
    validate_catalog(&cat)
        .into_iter()
        .filter(|d| !base.contains(&d.to_string()))
        .map(|d| (d.family, d.code))
        .collect()
}

#[test]
fn degree_of_family_1() {
    let text = reference_json().replacen("\"degree\": \"12n-9\"", "\"degree\": \"12n-8\"", 1);
    let cat = parse_catalog(&text).expect("parser accepts the altered degree");
    let diags = validate_catalog(&cat);
    assert!(diags.iter().any(|d| d.family == Some(1) && d.code == "degree-consistency"), "{diags:#?}");
}

#[test]
fn line_residual_of_family_22() {
    let codes = codes_after(|c| {
        let led = c.family_mut(22).unwrap().ledger.as_mut().unwrap();
        led.decomposition.as_mut().unwrap().l_dot_r = parse_factored("2/(63n+10)").unwrap();
    });
    assert!(codes.contains(&(Some(22), "decomposition".into())), "{codes:?}");
}

#[test]
fn index_of_family_24() {
    let codes = codes_after(|c| c.family_mut(24).unwrap().index = parse_poly("3").unwrap());
    assert!(codes.contains(&(Some(24), "index".into())), "{codes:?}");
}

#[test]
fn random_single_field_mutations() {
    let base = baseline();
    let doc: serde_json::Value = serde_json::from_str(reference_json()).unwrap();
    let leaves = numeric_leaves(&doc);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..40 {
        let mut m = doc.clone();
        let (field, old, new) = mutate(&mut m, &leaves, &mut rng);
        let d = detect(&serde_json::to_string(&m).unwrap(), &base);
        assert_ne!(d, Detection::Silent, "{field}: {old} -> {new} went unnoticed");
    }
}

/// Every ±1 change to every numeral in the catalog; slow, run on demand.
#[test]
#[ignore]
fn exhaustive_mutations() {
    use rayon::prelude::*;
    let base = baseline();
    let doc: serde_json::Value = serde_json::from_str(reference_json()).unwrap();
    let all = common::all_mutations(&doc);
    std::panic::set_hook(Box::new(|_| {}));
    let bad: Vec<String> = all
        .par_iter()
        .filter_map(|(label, m)| {
            let text = serde_json::to_string(m).unwrap();
            match std::panic::catch_unwind(|| detect(&text, &base)) {
                Ok(Detection::Silent) => Some(format!("silent   {label}")),
                Ok(_) => None,
                Err(p) => Some(format!(
                    "panicked {label}: {}",
                    p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default()
                )),
            }
        })
        .collect();
    let _ = std::panic::take_hook();
    println!("{} mutations, {} undetected or panicking", all.len(), bad.len());
    for s in &bad {
        println!("  {s}");
    }
    assert!(bad.is_empty());
}
