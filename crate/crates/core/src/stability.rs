//! K-stability: the α upper bound `a₀/I`, the instability criterion
//! `3a₀/I < 1`, and the per-family table of known verdicts.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::certify::{certify_cmp, minimal_threshold, Certificate, Domain, RayDomain, Relation};
use crate::diagnostic::Diagnostic;
use crate::exactmath::{IntPoly, RatFn};
use crate::geometry::{Coord, FamilySpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KStatus {
    KStable,
    KSemistableOnly,
    KUnstable,
    Unknown,
}

impl fmt::Display for KStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KStatus::KStable => "K-stable",
            KStatus::KSemistableOnly => "K-semistable",
            KStatus::KUnstable => "K-unstable",
            KStatus::Unknown => "unknown",
        })
    }
}

/// A known verdict for `from ≤ n ≤ to` (`to = None` means every `n ≥ from`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnownEntry {
    pub from: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub to: Option<i64>,
    pub status: KStatus,
    pub citation: String,
}

impl KnownEntry {
    pub fn covers(&self, n: i64) -> bool {
        n >= self.from && self.to.is_none_or(|t| n <= t)
    }
}

/// Per-family stability data as tabulated: `(a₀, I, a₀/I)`, the first `n`
/// known to be K-unstable, the first `n` of the stated criterion list, and
/// the verdicts known below it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityTable {
    pub a0: IntPoly,
    pub index: IntPoly,
    pub ratio: RatFn,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unstable_from: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub criterion_from: Option<i64>,
    pub known: Vec<KnownEntry>,
    pub source: String,
}

impl StabilityTable {
    pub fn known_at(&self, n: i64) -> Option<&KnownEntry> {
        self.known.iter().find(|e| e.covers(n))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum VerdictSource {
    Criterion { certificate: Box<Certificate> },
    CatalogKnown { citation: String },
    None,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabilityVerdict {
    pub status: KStatus,
    pub source: VerdictSource,
}

/// `α ≤ a₀/I`; `None` when the index is identically zero.
pub fn alpha_upper_bound(f: &FamilySpec) -> Option<RatFn> {
    RatFn::new(f.weight(Coord::X).clone(), f.index.clone()).ok()
}

fn criterion_lhs(f: &FamilySpec) -> Option<RatFn> {
    Some(alpha_upper_bound(f)?.scale(&crate::exactmath::Rational::from_integer(3.into())))
}

/// Certificate for `3a₀/I < 1` on `domain`.
pub fn criterion_certificate(f: &FamilySpec, domain: impl Into<Domain>) -> Option<Certificate> {
    certify_cmp(&criterion_lhs(f)?, &RatFn::one(), Relation::Lt, domain).ok()
}

/// Least `n₀` with `3a₀/I < 1` for every `n ≥ n₀`, with its certificate.
pub fn instability_threshold(f: &FamilySpec) -> Option<(i64, Certificate)> {
    let lhs = criterion_lhs(f)?;
    let t = minimal_threshold(&lhs, &RatFn::one(), Relation::Lt)?.max(f.ray.n0);
    let cert = certify_cmp(&lhs, &RatFn::one(), Relation::Lt, RayDomain::new(t)).ok()?;
    cert.holds().then_some((t, cert))
}

pub fn stability_status(f: &FamilySpec, n: i64) -> StabilityVerdict {
    if let Some(cert) = criterion_certificate(f, Domain::Point(n)).filter(Certificate::holds) {
        return StabilityVerdict {
            status: KStatus::KUnstable,
            source: VerdictSource::Criterion {
                certificate: Box::new(cert),
            },
        };
    }
    match f.stability.known_at(n) {
        Some(e) => StabilityVerdict {
            status: e.status,
            source: VerdictSource::CatalogKnown {
                citation: e.citation.clone(),
            },
        },
        None => StabilityVerdict {
            status: KStatus::Unknown,
            source: VerdictSource::None,
        },
    }
}

/// Verdict for every `n` on `ray` at once: K-unstable by the criterion when
/// it certifies on the whole ray, a known entry covering the ray, or unknown.
pub fn stability_on_ray(f: &FamilySpec, ray: RayDomain) -> StabilityVerdict {
    if let Some(cert) = criterion_certificate(f, ray).filter(Certificate::holds) {
        return StabilityVerdict {
            status: KStatus::KUnstable,
            source: VerdictSource::Criterion {
                certificate: Box::new(cert),
            },
        };
    }
    let covering = f
        .stability
        .known
        .iter()
        .find(|e| e.from <= ray.n0 && e.to.is_none());
    match covering {
        Some(e) => StabilityVerdict {
            status: e.status,
            source: VerdictSource::CatalogKnown {
                citation: e.citation.clone(),
            },
        },
        None => StabilityVerdict {
            status: KStatus::Unknown,
            source: VerdictSource::None,
        },
    }
}

/// Cross-checks the stability table against the recomputed criterion.
/// Divergence from the stated criterion list is a warning; inconsistent
/// entries are errors.
pub fn validate_stability(f: &FamilySpec) -> Vec<Diagnostic> {
    let s = &f.stability;
    let fam = Some(f.no);
    let mut out = Vec::new();
    if &s.a0 != f.weight(Coord::X) {
        out.push(Diagnostic::error(fam, "stability-table", "stability.a0",
            format!("a0 {} differs from weight {}", s.a0, f.weight(Coord::X))));
    }
    if s.index != f.derived_index() {
        out.push(Diagnostic::error(fam, "stability-table", "stability.index",
            format!("index {} differs from {}", s.index, f.derived_index())));
    }
    match alpha_upper_bound(f) {
        Some(r) if r != s.ratio => out.push(Diagnostic::error(fam, "stability-table", "stability.ratio",
            format!("a0/I {} differs from {r}", s.ratio))),
        Some(_) => {}
        None => out.push(Diagnostic::error(fam, "stability-table", "index", "index is zero")),
    }
    let computed = instability_threshold(f).map(|(t, _)| t);
    if computed != s.criterion_from {
        out.push(Diagnostic::warning(fam, "threshold-divergence", "stability.criterion_from",
            format!("stated criterion threshold {:?}, recomputed {:?}", s.criterion_from, computed)));
    }
    if s.unstable_from.is_some_and(|u| u < f.ray.n0) {
        out.push(Diagnostic::error(fam, "stability-table", "stability.unstable_from",
            format!("K-unstable from {:?} lies off the ray {}", s.unstable_from, f.ray)));
    }
    match (s.unstable_from, computed) {
        (Some(u), Some(t)) if u > t => out.push(Diagnostic::error(fam, "stability-table",
            "stability.unstable_from",
            format!("K-unstable from {u} but the criterion already holds from {t}"))),
        (Some(_), None) | (None, Some(_)) => out.push(Diagnostic::error(fam, "stability-table",
            "stability.unstable_from",
            format!("K-unstable column {:?} inconsistent with criterion {:?}", s.unstable_from, computed))),
        _ => {}
    }
    for (i, e) in s.known.iter().enumerate() {
        let field = format!("stability.known[{i}]");
        if e.from < f.ray.n0 || e.to.is_some_and(|t| t < e.from) {
            out.push(Diagnostic::error(fam, "stability-table", &field, "empty or off-ray range"));
        }
        if let Some(t) = computed {
            // the table records verdicts below the criterion ray only
            if e.to.is_none_or(|to| to >= t) {
                out.push(Diagnostic::error(fam, "stability-table", &field,
                    format!("{} entry reaches the criterion ray n >= {t}", e.status)));
            }
        }
        if let Some(u) = s.unstable_from {
            let unstable = e.status == KStatus::KUnstable;
            let consistent = if unstable { e.from >= u } else { e.to.is_some_and(|t| t < u) };
            if !consistent {
                out.push(Diagnostic::error(fam, "stability-table", &field,
                    format!("{} entry disagrees with K-unstable from n = {u}", e.status)));
            }
        }
        for (j, o) in s.known.iter().enumerate().skip(i + 1) {
            let overlap = e.to.is_none_or(|t| t >= o.from) && o.to.is_none_or(|t| t >= e.from);
            if overlap {
                out.push(Diagnostic::error(fam, "stability-table", &field,
                    format!("overlaps stability.known[{j}]")));
            }
        }
    }
    let end = computed.map(|t| t - 1);
    let mut n = f.ray.n0;
    while end.is_none_or(|e| n <= e) {
        match s.known_at(n) {
            Some(e) => match e.to {
                Some(t) => n = t + 1,
                None => break,
            },
            None => {
                out.push(Diagnostic::error(fam, "stability-table", "stability.known",
                    format!("no verdict recorded for n = {n} below the criterion ray")));
                break;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::reference_catalog;
    use crate::exactmath::parse_ratfn;
    use proptest::prelude::*;

    #[test]
    fn alpha_examples() {
        let cat = reference_catalog();
        assert_eq!(alpha_upper_bound(cat.family(1).unwrap()).unwrap(), parse_ratfn("1/n").unwrap());
        assert_eq!(alpha_upper_bound(cat.family(22).unwrap()).unwrap(), parse_ratfn("7/(7n+5)").unwrap());
        assert_eq!(alpha_upper_bound(cat.family(23).unwrap()).unwrap(), parse_ratfn("2").unwrap());
    }

    #[test]
    fn thresholds() {
        let cat = reference_catalog();
        let expected = |no: u32| match no {
            1..=6 | 8 | 11 => Some(4),
            7 => Some(2),
            9 | 10 | 12..=22 => Some(3),
            _ => None,
        };
        for f in cat.families() {
            let t = instability_threshold(f);
            assert_eq!(t.as_ref().map(|x| x.0), expected(f.no), "family {}", f.no);
            if let Some((t, cert)) = t {
                assert!(cert.holds());
                assert!(!criterion_certificate(f, Domain::Point(t - 1)).unwrap().holds());
            }
        }
    }

    #[test]
    fn status_examples() {
        let cat = reference_catalog();
        let s = stability_status(cat.family(6).unwrap(), 1);
        assert_eq!(s.status, KStatus::KStable);
        assert!(matches!(s.source, VerdictSource::CatalogKnown { .. }));
        let s = stability_status(cat.family(7).unwrap(), 5);
        assert_eq!(s.status, KStatus::KUnstable);
        assert!(matches!(s.source, VerdictSource::Criterion { .. }));
        assert_eq!(stability_status(cat.family(12).unwrap(), 2).status, KStatus::Unknown);
        assert_eq!(stability_status(cat.family(31).unwrap(), 40).status, KStatus::KStable);
    }

    #[test]
    fn criterion_never_contradicts_known() {
        let cat = reference_catalog();
        for f in cat.families() {
            for n in 1..=100 {
                let known = f.stability.known_at(n).map(|e| e.status);
                let s = stability_status(f, n);
                if known == Some(KStatus::KStable) {
                    assert_ne!(s.status, KStatus::KUnstable, "family {} n {n}", f.no);
                }
            }
        }
    }

    #[test]
    fn reference_tables_are_consistent() {
        let cat = reference_catalog();
        for f in cat.families() {
            assert!(validate_stability(f).is_empty(), "family {}: {:?}", f.no, validate_stability(f));
        }
    }

    #[test]
    fn entries_stop_below_criterion() {
        let cat = reference_catalog();
        let mut f = cat.family(1).unwrap().clone();
        f.stability.known[1].to = Some(4);
        assert!(validate_stability(&f).iter().any(|d| d.field == "stability.known[1]"));
        let mut f = cat.family(7).unwrap().clone();
        f.stability.unstable_from = Some(0);
        assert!(validate_stability(&f).iter().any(|d| d.field == "stability.unstable_from"));
    }

    proptest! {
        #[test]
        fn criterion_matches_integers(no in 1u32..=35, n in 1i64..500) {
            let cat = reference_catalog();
            let f = cat.family(no).unwrap();
            let a0 = f.weight(Coord::X).eval_i64(n);
            let i = f.index.eval_i64(n);
            let cert = criterion_certificate(f, Domain::Point(n)).unwrap();
            prop_assert_eq!(cert.holds(), a0 * 3 < i);
        }
    }
}
