//! Whole-catalog reports: one [`LedgerReport`] per family on its applicable
//! ray, rendered as JSON or as markdown tables.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::Catalog;
use crate::certify::{Certificate, Domain, RayDomain};
use crate::cylinder::{cylinder_report, CaseKind, CaseRecord, CylinderVerdict, LedgerReport, LEDGER_RAY};
use crate::geometry::FamilySpec;
use crate::stability::{instability_threshold, KStatus, VerdictSource};

/// The ray on which a family's headline claim is made: the ledger ray
/// intersected with the instability ray when there is one.
pub fn applicable_ray(f: &FamilySpec) -> RayDomain {
    if f.known_alpha.is_some() {
        return f.ray;
    }
    let t = instability_threshold(f).map_or(LEDGER_RAY.n0, |(t, _)| t);
    RayDomain::new(t.max(LEDGER_RAY.n0).max(f.ray.n0))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogReport {
    pub families: Vec<LedgerReport>,
}

impl CatalogReport {
    /// Every family is K-unstable by certificate and has a no-cylinder verdict.
    pub fn headline_holds(&self, range: std::ops::RangeInclusive<u32>) -> bool {
        self.families
            .iter()
            .filter(|r| range.contains(&r.family))
            .all(headline)
    }
}

/// `kUnstable` by the criterion and a no-cylinder verdict.
pub fn headline(r: &LedgerReport) -> bool {
    r.stability.status == KStatus::KUnstable
        && matches!(r.stability.source, VerdictSource::Criterion { .. })
        && r.cylinder.excludes_cylinder()
}

/// Reports for `families` (by number), each on `domain` or its applicable ray.
/// Families are certified in parallel and returned in number order.
pub fn family_reports(catalog: &Catalog, families: &[u32], domain: Option<Domain>) -> Vec<LedgerReport> {
    let mut out: Vec<LedgerReport> = families
        .par_iter()
        .filter_map(|no| catalog.family(*no))
        .map(|f| {
            let d = domain.unwrap_or_else(|| applicable_ray(f).into());
            cylinder_report(catalog, f, d)
        })
        .collect();
    out.sort_by_key(|r| r.family);
    out
}

pub fn catalog_report(catalog: &Catalog) -> CatalogReport {
    let all: Vec<u32> = catalog.families.keys().copied().collect();
    CatalogReport {
        families: family_reports(catalog, &all, None),
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn status_cell(r: &LedgerReport) -> String {
    let how = match &r.stability.source {
        VerdictSource::Criterion { .. } => "3a0/I < 1".to_string(),
        VerdictSource::CatalogKnown { citation } => citation.clone(),
        VerdictSource::None => "-".to_string(),
    };
    format!("{} ({how})", r.stability.status)
}

fn verdict_cell(v: &CylinderVerdict) -> String {
    match v {
        CylinderVerdict::NotCertified { reasons } => format!("notCertified: {}", reasons.join("; ")),
        other => other.name().to_string(),
    }
}

fn cert_cell(c: &Option<Certificate>, err: &Option<String>) -> String {
    match (c, err) {
        (Some(c), _) if c.holds() => format!("holds ({})", method_name(c)),
        (Some(c), _) => format!("fails at n = {}", c.witness.map_or("?".into(), |w| w.to_string())),
        (None, Some(e)) => format!("error: {e}"),
        (None, None) => "-".into(),
    }
}

fn method_name(c: &Certificate) -> String {
    serde_json::to_value(c.method)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

fn case_rows(out: &mut String, records: &[CaseRecord]) {
    out.push_str("| case | site | inequality | source | certificate |\n");
    out.push_str("|---|---|---|---|---|\n");
    for r in records {
        let c = &r.case;
        let mut src = c.source.clone();
        if c.reconstructed {
            src.push_str(" (reconstructed)");
        }
        let _ = writeln!(
            out,
            "| {} | {} | {} <= {} | {} | {} |",
            c.id,
            c.site,
            c.lhs,
            c.rhs,
            src,
            cert_cell(&r.certificate, &r.error)
        );
    }
}

/// Markdown for one family.
pub fn family_markdown(r: &LedgerReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "## No. {} ({})\n", r.family, r.domain);
    let _ = writeln!(out, "- stability: {}", status_cell(r));
    let _ = writeln!(out, "- cylinder: {}", verdict_cell(&r.cylinder));
    if let Some(d) = &r.dstar {
        let _ = writeln!(
            out,
            "- D* = {} D + {} H_x: {}",
            d.dstar.d_coeff,
            d.dstar.hx_coeff,
            cert_cell(&d.certificate, &d.error)
        );
    }
    for w in &r.warnings {
        let _ = writeln!(out, "- {w}");
    }
    if !r.cases.is_empty() {
        out.push('\n');
        case_rows(&mut out, &r.cases);
    }
    for x in &r.cross_references {
        let _ = writeln!(out, "\nvia No. {}: {} [{}]\n", x.family, x.reason, x.source);
        case_rows(&mut out, &x.records);
    }
    out.push('\n');
    out
}

fn hx_table(out: &mut String, reports: &[LedgerReport]) {
    out.push_str("## H_x cases\n\n| No. | lhs | site | threshold | certificate |\n|---|---|---|---|---|\n");
    for r in reports {
        for c in r.cases.iter().filter(|c| c.case.kind == CaseKind::Hx) {
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} | {} |",
                r.family,
                c.case.lhs,
                c.case.site,
                c.case.rhs,
                cert_cell(&c.certificate, &c.error)
            );
        }
    }
    out.push('\n');
}

fn ci_table(out: &mut String, reports: &[LedgerReport]) {
    out.push_str("## Complete-intersection cases\n\n| No. | lhs | threshold | certificate |\n|---|---|---|---|\n");
    for r in reports {
        for c in r.cases.iter().filter(|c| c.case.kind == CaseKind::CompleteIntersection) {
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} |",
                r.family,
                c.case.lhs,
                c.case.rhs,
                cert_cell(&c.certificate, &c.error)
            );
        }
    }
    out.push('\n');
}

pub fn catalog_markdown(report: &CatalogReport) -> String {
    let mut out = String::from("# Report\n\n## Summary\n\n| No. | ray | stability | cylinder |\n|---|---|---|---|\n");
    for r in &report.families {
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} |",
            r.family,
            r.domain,
            status_cell(r),
            verdict_cell(&r.cylinder)
        );
    }
    out.push_str("\n## D*\n\n| No. | D coefficient | H_x coefficient | valid |\n|---|---|---|---|\n");
    for r in &report.families {
        if let Some(d) = &r.dstar {
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} |",
                r.family,
                d.dstar.d_coeff,
                d.dstar.hx_coeff,
                cert_cell(&d.certificate, &d.error)
            );
        }
    }
    out.push('\n');
    hx_table(&mut out, &report.families);
    ci_table(&mut out, &report.families);
    for r in &report.families {
        out.push_str(&family_markdown(r));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::reference_catalog;

    #[test]
    fn applicable_rays() {
        let cat = reference_catalog();
        let ray = |no| applicable_ray(cat.family(no).unwrap()).n0;
        assert_eq!(ray(1), 4);
        assert_eq!(ray(7), 3);
        assert_eq!(ray(22), 3);
        assert_eq!(ray(30), 1);
    }

    #[test]
    fn markdown_is_deterministic() {
        let cat = reference_catalog();
        let a = family_reports(cat, &[22, 2], None);
        let b = family_reports(cat, &[2, 22], None);
        assert_eq!(a, b);
        assert_eq!(a[0].family, 2);
        let md = family_markdown(&a[1]);
        assert!(md.contains("noCylinderCertified"), "{md}");
        assert!(md.contains("hx/p_y"), "{md}");
    }
}
