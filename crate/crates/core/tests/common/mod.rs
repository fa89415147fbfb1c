//! Hand-typed reference tables used as oracles, and the catalog mutation engine.
#![allow(dead_code)]

use delpezzo::exactmath::{parse_factored, RatFn};
use rand::Rng;
use serde_json::Value;

pub fn rf(s: &str) -> RatFn {
    parse_factored(s).unwrap_or_else(|e| panic!("{s}: {e}")).value()
}

/// Fano index per family.
pub const INDEX_COLUMN: [(u32, &str); 35] = [
    (1, "n"), (2, "n"), (3, "n"), (4, "n"), (5, "n"), (6, "n"), (7, "2n"), (8, "2n"),
    (9, "2n+2"), (10, "3n+3"), (11, "7n-1"), (12, "7n+1"), (13, "7n+2"), (14, "7n+1"),
    (15, "7n+3"), (16, "7n+2"), (17, "7n+4"), (18, "7n+3"), (19, "7n+5"), (20, "7n+4"),
    (21, "7n+6"), (22, "7n+5"), (23, "1"), (24, "2"), (25, "2"), (26, "2"), (27, "2"),
    (28, "2"), (29, "2"), (30, "2"), (31, "4"), (32, "4"), (33, "4"), (34, "6"), (35, "6"),
];

pub type Table5Row = (u32, &'static str, &'static [(&'static str, &'static str)]);

/// Hx rows: `H_x·D` and the per-site thresholds, as printed.
pub const HX_ROWS: &[Table5Row] = &[
    (1, "3n/((3n-2)(6n-5))", &[("smooth", "1"), ("p_y", "2/(3n-2)"), ("p_t", "2/(6n-5)")]),
    (3, "2n/((4n-3)(6n-5))", &[("smooth", "1"), ("p_y", "2/(4n-3)"), ("p_z", "2/(6n-5)")]),
    (4, "n/((5n-4)(6n-5))", &[("smooth", "1"), ("p_y", "2/(6n-5)"), ("p_{5n-4}", "2/(5n-4)")]),
    (5, "n/((3n-2)(10n-7))", &[("smooth", "1"), ("p_z", "2/(10n-7)"), ("p_{3n-2}", "2/(3n-2)")]),
    (6, "n/((2n-1)(15n-8))", &[("smooth", "1"), ("p_t", "2/(15n-8)"), ("p_{2n-1}", "2/(2n-1)")]),
    (8, "2n/((2n-1)(12n-7))", &[("smooth", "1"), ("p_2", "1"), ("p_t", "2/(12n-7)"), ("p_{2n-1}", "2/(2n-1)")]),
    (9, "(2n+2)/((4n+1)(6n+1))", &[("smooth", "1"), ("p_2", "1"), ("p_y", "2/(6n+1)"), ("p_{4n+1}", "2/(4n+1)")]),
    (10, "(3n+3)/((3n+1)(6n+1))", &[("smooth", "1"), ("p_y", "2/(6n+1)"), ("p_3", "2/3"), ("p_{3n+1}", "2/(3n+1)")]),
    (12, "2(7n+1)/((28n-17)(42n-29))", &[("smooth", "1"), ("p_y", "2/(28n-17)"), ("p_z", "2/(42n-29)")]),
    (13, "2(7n+2)/((28n-13)(42n-23))", &[("smooth", "1"), ("p_y", "2/(28n-13)"), ("p_z", "2/(42n-23)")]),
    (15, "2(7n+3)/((28n-9)(42n-17))", &[("smooth", "1"), ("p_y", "2/(28n-9)"), ("p_z", "2/(42n-17)")]),
    (17, "2(7n+4)/((28n-5)(42n-11))", &[("smooth", "1"), ("p_y", "2/(28n-5)"), ("p_z", "2/(42n-11)")]),
    (19, "2(7n+5)/((28n-1)(42n-5))", &[("smooth", "1"), ("p_y", "2/(28n-1)"), ("p_z", "2/(42n-5)")]),
    (21, "2(7n+6)/((28n+3)(42n+1))", &[("smooth", "1"), ("p_y", "2/(28n+3)"), ("p_z", "2/(42n+1)")]),
];

/// Complete-intersection rows: fifth weight, `lhs`, threshold `3/a_w`.
pub const CI_ROWS: [(u32, &str, &str); 7] = [
    (7, "24n-7", "4n/((4n-1)(24n-7))"),
    (11, "84n-61", "(14n-2)/((14n-9)(84n-61))"),
    (14, "84n-37", "(14n+2)/((14n-5)(84n-37))"),
    (16, "84n-25", "(14n+4)/((14n-3)(84n-25))"),
    (18, "84n-13", "(14n+6)/((14n-1)(84n-13))"),
    (20, "84n-1", "(14n+8)/((14n+1)(84n-1))"),
    (22, "84n+11", "(14n+10)/((14n+3)(84n+11))"),
];

/// D* row groups: coefficients of `D` and `H_x` in `D*`.
pub const DSTAR_ROWS: &[(&[u32], &str, &str)] = &[
    (&[1, 2, 3, 4, 5, 6, 8], "n/(n-2)", "2n/(n-2)"),
    (&[7], "n/(n-1)", "2n/(n-1)"),
    (&[9, 10], "(n+1)/(n-1)", "2(n+1)/(n-1)"),
    (&[11], "(7n-1)/(7n-15)", "2(7n-1)/(7n-15)"),
    (&[12, 14], "(7n+1)/(7n-13)", "2(7n+1)/(7n-13)"),
    (&[13, 16], "(7n+2)/(7n-12)", "2(7n+2)/(7n-12)"),
    (&[15, 18], "(7n+3)/(7n-11)", "2(7n+3)/(7n-11)"),
    (&[17, 20], "(7n+4)/(7n-10)", "2(7n+4)/(7n-10)"),
    (&[19, 22], "(7n+5)/(7n-9)", "2(7n+5)/(7n-9)"),
    (&[21], "(7n+6)/(7n-8)", "2(7n+6)/(7n-8)"),
];

/// Family 22's inline blocks.
pub mod family22 {
    pub const DEN: &str = "((28n+6)(63n+10))";
    pub const L_DOT_K: &str = "(7n+5)/((28n+6)(63n+10))";
    pub const R_DOT_K: &str = "(14n+10)/((28n+6)(63n+10))";
    pub const L_DOT_R: &str = "3/(63n+10)";
    /// `L² = 7/(..) − 3/(63n+10)` and `R² = 14/(..) − 3/(63n+10)`.
    pub const L_SQ: (&str, &str) = ("7/((28n+6)(63n+10))", "3/(63n+10)");
    pub const R_SQ: (&str, &str) = ("14/((28n+6)(63n+10))", "3/(63n+10)");
    pub const A1_LHS: &str = "3(7n+5)/((28n+6)(63n+10))";
    pub const A1_SITES: [(&str, &str); 4] =
        [("smooth", "1"), ("p_y", "2/(28n+6)"), ("p_t", "2/(63n+10)"), ("p_{14n+3}", "2/(14n+3)")];
    pub const A2_THRESHOLD: &str = "1/(63n+10)";
    pub const A3_LHS: &str = "(98n+14)/((28n+6)(63n+10))";
    pub const A3_SITES: [(&str, &str); 2] = [("smooth", "1"), ("p_{14n+3}", "1/(14n+3)")];
}

/// Instability thresholds as listed.
pub fn expected_threshold(no: u32) -> Option<i64> {
    match no {
        1..=6 | 8 | 11 => Some(4),
        7 => Some(2),
        9 | 10 | 12..=22 => Some(3),
        _ => None,
    }
}

/// A JSON leaf: path from the root and whether it is a number.
#[derive(Debug, Clone)]
pub struct Leaf {
    pub path: Vec<PathStep>,
}

#[derive(Debug, Clone)]
pub enum PathStep {
    Key(String),
    Index(usize),
}

impl std::fmt::Display for Leaf {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for s in &self.path {
            match s {
                PathStep::Key(k) => write!(f, ".{k}")?,
                PathStep::Index(i) => write!(f, "[{i}]")?,
            }
        }
        Ok(())
    }
}

const PROSE: [&str; 2] = ["source", "citation"];

/// Every leaf holding a numeral, outside prose fields.
pub fn numeric_leaves(v: &Value) -> Vec<Leaf> {
    fn walk(v: &Value, path: &mut Vec<PathStep>, out: &mut Vec<Leaf>) {
        match v {
            Value::Object(m) => {
                for (k, x) in m {
                    if PROSE.contains(&k.as_str()) {
                        continue;
                    }
                    path.push(PathStep::Key(k.clone()));
                    walk(x, path, out);
                    path.pop();
                }
            }
            Value::Array(a) => {
                for (i, x) in a.iter().enumerate() {
                    path.push(PathStep::Index(i));
                    walk(x, path, out);
                    path.pop();
                }
            }
            Value::Number(_) => out.push(Leaf { path: path.clone() }),
            Value::String(s) if s.chars().any(|c| c.is_ascii_digit()) => {
                out.push(Leaf { path: path.clone() })
            }
            _ => {}
        }
    }
    let mut out = Vec::new();
    walk(v, &mut Vec::new(), &mut out);
    out
}

fn leaf_mut<'a>(v: &'a mut Value, leaf: &Leaf) -> &'a mut Value {
    leaf.path.iter().fold(v, |v, s| match s {
        PathStep::Key(k) => &mut v[k.as_str()],
        PathStep::Index(i) => &mut v[*i],
    })
}

/// Moves one run of digits in `s` by `delta`, keeping it non-negative.
fn bump_digits(s: &str, pick: usize, delta: i64) -> String {
    let bytes = s.as_bytes();
    let mut runs = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i].is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            runs.push((start, i));
        } else {
            i += 1;
        }
    }
    let (a, b) = runs[pick % runs.len()];
    let k: i64 = s[a..b].parse().unwrap();
    let k2 = if k + delta < 0 { k + 1 } else { k + delta };
    format!("{}{}{}", &s[..a], k2, &s[b..])
}

/// Every ±1 variant of every digit run of every numeric field.
pub fn all_mutations(doc: &Value) -> Vec<(String, Value)> {
    let mut out = Vec::new();
    for leaf in numeric_leaves(doc) {
        let runs = match leaf_ref(doc, &leaf) {
            Value::String(s) => digit_runs(s),
            _ => 1,
        };
        for pick in 0..runs {
            for delta in [1, -1] {
                let mut m = doc.clone();
                let slot = leaf_mut(&mut m, &leaf);
                let new = bumped(slot, pick, delta);
                if new == *slot {
                    continue;
                }
                let label = format!("{leaf}: {slot} -> {new}");
                *slot = new;
                out.push((label, m));
            }
        }
    }
    out
}

fn leaf_ref<'a>(v: &'a Value, leaf: &Leaf) -> &'a Value {
    leaf.path.iter().fold(v, |v, s| match s {
        PathStep::Key(k) => &v[k.as_str()],
        PathStep::Index(i) => &v[*i],
    })
}

fn digit_runs(s: &str) -> usize {
    s.split(|c: char| !c.is_ascii_digit()).filter(|r| !r.is_empty()).count()
}

fn bumped(v: &Value, pick: usize, delta: i64) -> Value {
    match v {
        Value::Number(n) => {
            let k = n.as_i64().unwrap();
            Value::from(if k + delta < 0 { k + 1 } else { k + delta })
        }
        Value::String(s) => Value::String(bump_digits(s, pick, delta)),
        other => other.clone(),
    }
}

/// Applies one random ±1 change to a numeric field. Returns the field and
/// its old and new text.
pub fn mutate(doc: &mut Value, leaves: &[Leaf], rng: &mut impl Rng) -> (String, String, String) {
    let leaf = &leaves[rng.gen_range(0..leaves.len())];
    let delta = if rng.gen_bool(0.5) { 1 } else { -1 };
    let pick = rng.gen_range(0..8);
    let slot = leaf_mut(doc, leaf);
    let old = slot.to_string();
    *slot = bumped(slot, pick, delta);
    (leaf.to_string(), old, slot.to_string())
}

/// How a mutated catalog was caught.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Detection {
    Load(String),
    Diagnostic(String),
    Certification(String),
    Silent,
}

/// Baseline diagnostics of the reference catalog, compared as display text.
pub fn baseline() -> std::collections::BTreeSet<String> {
    use delpezzo::catalog::{reference_catalog, validate_catalog};
    validate_catalog(reference_catalog()).iter().map(ToString::to_string).collect()
}

pub fn detect(text: &str, base: &std::collections::BTreeSet<String>) -> Detection {
    use delpezzo::catalog::{parse_catalog, validate_catalog};
    use delpezzo::report::catalog_report;
    let cat = match parse_catalog(text) {
        Ok(c) => c,
        Err(e) => return Detection::Load(e.to_string()),
    };
    if let Some(d) = validate_catalog(&cat).iter().map(ToString::to_string).find(|d| !base.contains(d)) {
        return Detection::Diagnostic(d);
    }
    let report = catalog_report(&cat);
    match report.families.iter().find(|r| !r.cylinder.excludes_cylinder()) {
        Some(r) => Detection::Certification(format!("family {}: {}", r.family, r.cylinder.name())),
        None => Detection::Silent,
    }
}
