//! Computed intersection numbers and ledger cases against the printed tables.

mod common;

use common::{family22 as f22, rf, INDEX_COLUMN, DSTAR_ROWS, HX_ROWS, CI_ROWS};
use delpezzo::catalog::reference_catalog;
use delpezzo::cylinder::{all_cases, dstar, CaseKind, ExclusionCase};
use delpezzo::exactmath::parse_poly;
use delpezzo::geometry::{compute_index, validated_strata};
use delpezzo::intersection::{hx_decomposition, HxDecomposition};

fn cases(no: u32) -> Vec<ExclusionCase> {
    all_cases(reference_catalog().family(no).unwrap()).unwrap()
}

fn kind_sites(cases: &[ExclusionCase], kind: CaseKind) -> Vec<(String, &ExclusionCase)> {
    cases
        .iter()
        .filter(|c| c.kind == kind)
        .map(|c| (c.site.to_string(), c))
        .collect()
}

#[test]
fn index_column() {
    let cat = reference_catalog();
    for (no, i) in INDEX_COLUMN {
        let f = cat.family(no).unwrap();
        assert_eq!(compute_index(&f.weights, &f.degree), parse_poly(i).unwrap(), "No. {no}");
    }
}

#[test]
fn singular_locus_rows() {
    for f in reference_catalog().families().filter(|f| f.no <= 22) {
        validated_strata(f).unwrap_or_else(|e| panic!("No. {}: {e}", f.no));
    }
}

#[test]
fn h_x_rows() {
    for (no, lhs, sites) in HX_ROWS {
        let cs = cases(*no);
        let hx = kind_sites(&cs, CaseKind::Hx);
        assert_eq!(hx.len(), sites.len(), "No. {no}");
        for (site, threshold) in *sites {
            let (_, c) = hx.iter().find(|(s, _)| s == site).unwrap_or_else(|| panic!("No. {no} {site}"));
            assert_eq!(c.lhs.value(), rf(lhs), "No. {no} {site}");
            assert_eq!(c.rhs.value(), rf(threshold), "No. {no} {site}");
        }
    }
}

#[test]
fn family_22_decomposition() {
    let HxDecomposition::Reducible(d) = hx_decomposition(reference_catalog().family(22).unwrap()).unwrap() else {
        panic!("H_x of No. 22 splits");
    };
    assert_eq!(d.l_dot_k.value(), rf(f22::L_DOT_K));
    assert_eq!(d.r_dot_k.value(), rf(f22::R_DOT_K));
    assert_eq!(d.l_dot_r.value(), rf(f22::L_DOT_R));
    assert_eq!(d.l_sq.value(), &rf(f22::L_SQ.0) - &rf(f22::L_SQ.1));
    assert_eq!(d.r_sq.value(), &rf(f22::R_SQ.0) - &rf(f22::R_SQ.1));
    assert!(f22::DEN.starts_with("((28n+6)"));
}

#[test]
fn family_22_blocks() {
    let cs = cases(22);
    let hx = kind_sites(&cs, CaseKind::Hx);
    assert_eq!(hx.len(), f22::A1_SITES.len());
    for (site, t) in f22::A1_SITES {
        let (_, c) = hx.iter().find(|(s, _)| s == site).unwrap();
        assert_eq!(c.lhs.value(), rf(f22::A1_LHS));
        assert_eq!(c.rhs.value(), rf(t), "{site}");
    }
    let meeting = kind_sites(&cs, CaseKind::Meeting);
    let lhs: Vec<_> = meeting.iter().map(|(_, c)| c.lhs.value()).collect();
    assert_eq!(lhs, vec![rf(f22::L_DOT_K), rf(f22::R_DOT_K)]);
    assert!(meeting.iter().all(|(s, c)| s == "p_t" && c.rhs.value() == rf(f22::A2_THRESHOLD)));
    let residual = kind_sites(&cs, CaseKind::Residual);
    assert_eq!(residual.len(), f22::A3_SITES.len());
    for (site, t) in f22::A3_SITES {
        let (_, c) = residual.iter().find(|(s, _)| s == site).unwrap();
        assert_eq!(c.lhs.value(), rf(f22::A3_LHS));
        assert_eq!(c.rhs.value(), rf(t));
    }
}

#[test]
fn complete_intersection_rows() {
    let cat = reference_catalog();
    for (no, aw, lhs) in CI_ROWS {
        let cs = cases(no);
        let ci = kind_sites(&cs, CaseKind::CompleteIntersection);
        assert_eq!(ci.len(), 1, "No. {no}");
        assert_eq!(ci[0].1.lhs.value(), rf(lhs), "No. {no}");
        assert_eq!(ci[0].1.rhs.value(), rf(&format!("3/({aw})")), "No. {no}");
        let model = &cat.family(no).unwrap().ledger.as_ref().unwrap().complete_intersection.as_ref().unwrap().model;
        assert_eq!(model.weights[4], parse_poly(aw).unwrap());
    }
}

#[test]
fn dstar_rows() {
    let cat = reference_catalog();
    let mut seen = 0;
    for (group, d, h) in DSTAR_ROWS {
        for no in *group {
            let ds = dstar(cat.family(*no).unwrap()).unwrap();
            assert_eq!(ds.d_coeff.value(), rf(d), "No. {no}");
            assert_eq!(ds.hx_coeff.value(), rf(h), "No. {no}");
            seen += 1;
        }
    }
    assert_eq!(seen, 22);
}
