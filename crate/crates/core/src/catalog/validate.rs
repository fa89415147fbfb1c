use std::collections::BTreeSet;

use num_traits::ToPrimitive;

use super::Catalog;
use crate::certify::{certify_cmp, certify_poly_nonneg, RayDomain, Relation};
use crate::cylinder::{
    all_cases, binomial_lct, dstar, dstar_valid_on, CompleteIntersection, LedgerData, Site,
    SiteThreshold, LEDGER_RAY,
};
use crate::diagnostic::Diagnostic;
use crate::exactmath::{Factored, IntPoly, RatFn};
use crate::geometry::{
    check_degree_consistency, check_weights_positive, check_well_formed, singular_strata,
    validated_strata, Coord, FamilySpec, HxShape, Monomial, Presence, SingularStratum, StratumKind,
};
use crate::intersection::{hx_decomposition, local_line_residual, section_product, HxDecomposition};
use crate::stability::validate_stability;

/// Families whose `H_x` is irreducible.
pub const IR: [u32; 14] = [1, 3, 4, 5, 6, 8, 9, 10, 12, 13, 15, 17, 19, 21];
/// Families whose `H_x` splits into two curves.
pub const RE: [u32; 8] = [2, 7, 11, 14, 16, 18, 20, 22];

struct Sink {
    family: Option<u32>,
    out: Vec<Diagnostic>,
}

impl Sink {
    fn err(&mut self, code: &str, field: impl Into<String>, msg: impl Into<String>) {
        self.out.push(Diagnostic::error(self.family, code, field, msg));
    }

    fn eq_fx(&mut self, code: &str, field: &str, stated: &Factored, derived: &Factored) {
        if stated != derived {
            self.err(code, field, format!("stated {stated}, derived {derived}"));
        }
    }
}

/// Every cross-check of the catalog. Empty for a consistent catalog.
pub fn validate_catalog(c: &Catalog) -> Vec<Diagnostic> {
    let mut top = Sink {
        family: None,
        out: Vec::new(),
    };
    let have: BTreeSet<u32> = c.families.keys().copied().collect();
    let want: BTreeSet<u32> = (1..=35).collect();
    if have != want {
        top.err(
            "catalog-shape",
            "families",
            format!(
                "expected families 1-35; missing {:?}, extra {:?}",
                want.difference(&have).collect::<Vec<_>>(),
                have.difference(&want).collect::<Vec<_>>()
            ),
        );
    }
    let alpha: BTreeSet<u32> = c.alpha_one.iter().copied().collect();
    if alpha.len() != c.alpha_one.len() {
        top.err("alpha-one", "alpha_one", "repeated family number");
    }
    for (&key, f) in &c.families {
        if key != f.no {
            top.err("catalog-shape", format!("families[{key}]"), format!("keyed {key} but numbered {}", f.no));
        }
        if alpha.contains(&f.no) != f.known_alpha.is_some() {
            top.err(
                "alpha-one",
                format!("families[{}].known_alpha", f.no),
                "known alpha present exactly for the families listed in alpha_one",
            );
        }
    }
    for no in &alpha {
        if !c.families.contains_key(no) {
            top.err("alpha-one", "alpha_one", format!("family {no} is not in the catalog"));
        }
    }
    let mut out = top.out;
    for f in c.families() {
        out.extend(validate_family(c, f));
    }
    out
}

/// Least `n₀ ≥ 1` from which every weight and the index are positive.
fn natural_ray(f: &FamilySpec) -> Option<i64> {
    (1..=64).find(|&n0| {
        let ray = RayDomain::new(n0);
        check_weights_positive(&f.weights, ray).is_ok()
            && certify_poly_nonneg(&f.derived_index(), ray, true).holds()
    })
}

pub fn validate_family(c: &Catalog, f: &FamilySpec) -> Vec<Diagnostic> {
    let mut s = Sink {
        family: Some(f.no),
        out: Vec::new(),
    };
    if natural_ray(f) != Some(f.ray.n0) {
        s.err(
            "ray",
            "ray",
            format!("ray starts at {}, positivity of weights and index gives {:?}", f.ray.n0, natural_ray(f)),
        );
    }
    if f.index != f.derived_index() {
        s.err(
            "index",
            "index",
            format!("stated I = {}, a0+a1+a2+a3-d = {}", f.index, f.derived_index()),
        );
    }
    for w in f.weights.0.windows(2) {
        if w[0] != w[1] && !certify_poly_nonneg(&(&w[1] - &w[0]), f.ray, false).holds() {
            s.err("weights", "weights", format!("weights not ordered: {} > {}", w[0], w[1]));
        }
    }
    match check_well_formed(&f.weights, &f.degree, f.ray) {
        Ok(wf) if !wf.holds() => {
            for cond in wf.failures() {
                let names: Vec<&str> = cond.coords.iter().map(|c| c.name()).collect();
                s.err(
                    "well-formed",
                    "weights",
                    format!(
                        "not well-formed at n = {} ({}): {}",
                        cond.witness.unwrap_or(f.ray.n0),
                        names.join(","),
                        cond.detail
                    ),
                );
            }
        }
        Ok(_) => {}
        Err(e) => s.err("well-formed", "weights", e.to_string()),
    }
    s.out.extend(check_degree_consistency(f));
    let expected_shape = if RE.contains(&f.no) {
        Some(HxShape::TwoComponents)
    } else if IR.contains(&f.no) {
        Some(HxShape::Irreducible)
    } else {
        None
    };
    if let Some(shape) = expected_shape {
        if shape != f.hx_shape {
            s.err("hx-shape", "hx_shape", format!("expected {shape:?}"));
        }
    }
    s.out.extend(validate_stability(f));
    if let Some(a) = &f.known_alpha {
        if a.value != RatFn::one() {
            s.err("alpha-one", "known_alpha.value", format!("alpha = {} but the family is listed with alpha = 1", a.value));
        }
    }
    if f.no <= 22 {
        ledger_checks(c, f, &mut s);
    } else if f.ledger.is_some() || f.singular_locus.is_some() {
        s.err("ledger", "ledger", "families without a ledger are certified by alpha");
    }
    s.out
}

fn on_hx(st: &SingularStratum) -> bool {
    match st.kind {
        StratumKind::Vertex(c) => c != Coord::X,
        StratumKind::EdgePoint(a, b) => a != Coord::X && b != Coord::X,
    }
}

fn order_of(strata: &[SingularStratum], site: &Site) -> Option<IntPoly> {
    match site {
        Site::Stratum(l) => strata
            .iter()
            .find(|st| &st.label == l && st.presence == Presence::Always)
            .map(|st| st.order.clone()),
        _ => None,
    }
}

fn k_over(k: i64, r: &IntPoly) -> Factored {
    Factored::from_factors(vec![IntPoly::constant(k)], vec![r.clone()]).expect("nonzero order")
}

/// Stated thresholds follow `k/r` at a point of order `r` and `1` at smooth
/// points; an unstated stratum threshold is allowed only in reconstructed
/// blocks.
fn check_sites(
    s: &mut Sink,
    field: &str,
    sites: &[SiteThreshold],
    strata: &[SingularStratum],
    k: i64,
    reconstructed: bool,
) {
    for (i, st) in sites.iter().enumerate() {
        let fld = format!("{field}.sites[{i}]");
        match (&st.site, &st.threshold) {
            (Site::Smooth, Some(t)) if *t != Factored::one() => {
                s.err("threshold", fld, format!("smooth-point threshold must be 1, got {t}"))
            }
            (Site::BaseLocus, _) => s.err("threshold", fld, "base locus is not a multiplicity site"),
            (Site::Stratum(label), t) => match (order_of(strata, &st.site), t) {
                (None, _) => s.err("site", fld, format!("{label} is not a singular stratum")),
                (Some(r), Some(t)) => s.eq_fx("threshold", &fld, t, &k_over(k, &r)),
                (Some(_), None) if !reconstructed => {
                    s.err("threshold", fld, "paper-stated block must state its threshold")
                }
                _ => {}
            },
            _ => {}
        }
    }
}

fn derived_lct(f: &FamilySpec) -> Option<crate::exactmath::Rational> {
    let eq = f.equation.as_ref()?;
    // H_y at x = 1: the monomials free of y, with x dropped
    let mut powers = Vec::new();
    for m in eq.monomials.iter().filter(|m| m.coefficient_nonzero && !m.involves(Coord::Y)) {
        let rest: Vec<(Coord, &IntPoly)> = [Coord::Z, Coord::T]
            .into_iter()
            .filter(|&c| m.involves(c))
            .map(|c| (c, m.exponent(c)))
            .collect();
        match rest.as_slice() {
            [] => {}
            [(c, e)] => powers.push((*c, e.as_constant()?.to_u64()?)),
            _ => return None,
        }
    }
    match powers.as_slice() {
        [(c1, a), (c2, b)] if c1 != c2 => Some(binomial_lct(*a, *b)),
        _ => None,
    }
}

fn sorted(mut v: Vec<Monomial>) -> Vec<Monomial> {
    v.sort();
    v
}

fn ci_checks(s: &mut Sink, field: &str, ci: &CompleteIntersection, target: &FamilySpec) {
    for (k, degs) in ci.degrees().iter().enumerate() {
        if let Some(first) = degs.first() {
            for (j, d) in degs.iter().enumerate() {
                if d != first {
                    s.err(
                        "degree-consistency",
                        format!("{field}.equations[{k}][{j}]"),
                        format!("term {} has degree {d}, expected {first}", ci.equations[k][j]),
                    );
                }
            }
        }
    }
    if ci.index != ci.derived_index() {
        s.err("index", format!("{field}.index"), format!("stated {}, derived {}", ci.index, ci.derived_index()));
    }
    if ci.index != target.index {
        s.err("index", format!("{field}.index"), format!("{} differs from family {} index {}", ci.index, target.no, target.index));
    }
    match ci.remaining_weights() {
        Some(w) if w == target.weights.0 => {}
        _ => s.err("complete-intersection", format!("{field}.weights"), format!("remaining weights differ from family {}", target.no)),
    }
    let want = target.equation.as_ref().map(|e| sorted(e.monomials.clone()));
    match (ci.eliminated_monomials(), want) {
        (Some(got), Some(want)) if got == want => {}
        (got, _) => s.err(
            "complete-intersection",
            format!("{field}.multipliers"),
            format!(
                "eliminating {} gives {:?}, not the equation of family {}",
                ci.eliminated,
                got.map(|g| g.iter().map(ToString::to_string).collect::<Vec<_>>()),
                target.no
            ),
        ),
    }
}

fn ledger_checks(c: &Catalog, f: &FamilySpec, s: &mut Sink) {
    if f.singular_locus.is_none() {
        s.err("strata", "singular_locus", "missing singular-locus row");
        return;
    }
    let strata = match validated_strata(f) {
        Ok(st) => st,
        Err(e) => {
            s.err("strata", "singular_locus.strata", e.to_string());
            singular_strata(f).unwrap_or_default()
        }
    };
    let Some(led) = &f.ledger else {
        s.err("ledger", "ledger", "missing ledger data");
        return;
    };
    ledger_blocks(c, f, led, &strata, s);
    match dstar(f) {
        Ok(ds) => match &led.dstar {
            Some(fx) => {
                s.eq_fx("dstar", "ledger.dstar.d_coeff", &fx.d_coeff, &ds.d_coeff);
                s.eq_fx("dstar", "ledger.dstar.hx_coeff", &fx.hx_coeff, &ds.hx_coeff);
            }
            None => s.err("dstar", "ledger.dstar", "missing D* row"),
        },
        Err(e) => s.err("dstar", "ledger.dstar", e.to_string()),
    }
    if let Err(e) = dstar_valid_on(f, LEDGER_RAY) {
        s.err("dstar", "ledger.dstar", e.to_string());
    }
    if let Err(e) = all_cases(f) {
        s.err("ledger", "ledger", e.to_string());
    }
}

fn ledger_blocks(c: &Catalog, f: &FamilySpec, led: &LedgerData, strata: &[SingularStratum], s: &mut Sink) {
    let a0 = f.weight(Coord::X);
    let hx_dot_d = section_product(f, a0, &f.index);
    match &led.hx {
        None => s.err("ledger", "ledger.hx", "missing H_x block"),
        Some(hx) => {
            if let Some(lhs) = &hx.lhs {
                s.eq_fx("ledger-lhs", "ledger.hx.lhs", lhs, &hx_dot_d);
            } else if !hx.reconstructed {
                s.err("ledger-lhs", "ledger.hx.lhs", "paper-stated block must state its value");
            }
            check_sites(s, "ledger.hx", &hx.sites, strata, 2, hx.reconstructed);
            if !hx.sites.iter().any(|x| x.site == Site::Smooth) {
                s.err("ledger-coverage", "ledger.hx.sites", "no smooth-point case");
            }
            for st in strata.iter().filter(|st| st.presence == Presence::Always && on_hx(st)) {
                if !hx.sites.iter().any(|x| x.site == Site::Stratum(st.label.clone())) {
                    s.err("ledger-coverage", "ledger.hx.sites", format!("no case for {} on H_x", st.label));
                }
            }
        }
    }
    if let Some(hy) = &led.hy {
        check_sites(s, "ledger.hy", &hy.sites, strata, 1, hy.reconstructed);
        match derived_lct(f) {
            Some(l) if l == hy.lct => {}
            Some(l) => s.err("lct", "ledger.hy.lct", format!("stated {}, derived {l}", hy.lct)),
            None => s.err("lct", "ledger.hy.lct", "H_y is not a binomial curve; threshold underivable"),
        }
    }
    let reducible = f.hx_shape == HxShape::TwoComponents;
    if !reducible {
        for (present, name) in [
            (led.decomposition.is_some(), "decomposition"),
            (led.meeting.is_some(), "meeting"),
            (led.residual.is_some(), "residual"),
            (led.complete_intersection.is_some(), "complete_intersection"),
            (led.contraction.is_some(), "contraction"),
        ] {
            if present {
                s.err("hx-shape", format!("ledger.{name}"), "irreducible H_x has no components");
            }
        }
        return;
    }
    let Some(input) = &led.decomposition else {
        s.err("decomposition", "ledger.decomposition", "reducible H_x needs L·R data");
        return;
    };
    match local_line_residual(f, input.line) {
        Ok((pt, lr)) => {
            if pt != input.meeting_point {
                s.err("decomposition", "ledger.decomposition.meeting_point", format!("L meets R at p_{pt}"));
            }
            s.eq_fx("decomposition", "ledger.decomposition.l_dot_r", &input.l_dot_r, &lr);
        }
        Err(e) => s.err("decomposition", "ledger.decomposition.line", e.to_string()),
    }
    let d = match hx_decomposition(f) {
        Ok(HxDecomposition::Reducible(d)) => d,
        Ok(HxDecomposition::Irreducible) => return,
        Err(e) => {
            s.err("decomposition", "ledger.decomposition", e.to_string());
            return;
        }
    };
    if d.l_dot_k.add(&d.r_dot_k) != hx_dot_d {
        s.err("decomposition", "ledger.decomposition", "L·(-K) + R·(-K) != H_x·(-K)");
    }
    if let Some(fx) = &led.decomposition_fixture {
        s.eq_fx("decomposition", "ledger.decomposition_fixture.l_dot_k", &fx.l_dot_k, &d.l_dot_k);
        s.eq_fx("decomposition", "ledger.decomposition_fixture.r_dot_k", &fx.r_dot_k, &d.r_dot_k);
        s.eq_fx("decomposition", "ledger.decomposition_fixture.l_sq", &fx.l_sq, &d.l_sq);
        s.eq_fx("decomposition", "ledger.decomposition_fixture.r_sq", &fx.r_sq, &d.r_sq);
    }
    let with_residual = led.meeting.is_some() || led.residual.is_some() || led.complete_intersection.is_some();
    if with_residual {
        let neg = certify_cmp(&d.r_sq.value(), &RatFn::zero(), Relation::Lt, LEDGER_RAY);
        if !neg.as_ref().is_ok_and(|c| c.holds()) {
            s.err("decomposition", "ledger.decomposition", "R^2 is not negative on the ledger ray");
        }
        match &led.meeting {
            None => s.err("ledger", "ledger.meeting", "missing meeting-point block"),
            Some(m) => {
                if let Some(v) = &m.l_dot_d {
                    s.eq_fx("ledger-lhs", "ledger.meeting.l_dot_d", v, &d.l_dot_k);
                }
                if let Some(v) = &m.r_dot_d {
                    s.eq_fx("ledger-lhs", "ledger.meeting.r_dot_d", v, &d.r_dot_k);
                }
                if let Some(t) = &m.threshold {
                    s.eq_fx("threshold", "ledger.meeting.threshold", t, &k_over(1, f.weight(d.meeting_point)));
                } else if !m.reconstructed {
                    s.err("threshold", "ledger.meeting.threshold", "paper-stated block must state its threshold");
                }
            }
        }
        match &led.residual {
            None => s.err("ledger", "ledger.residual", "missing residual block"),
            Some(r) => {
                if let Some(v) = &r.lhs {
                    s.eq_fx("ledger-lhs", "ledger.residual.lhs", v, &d.r_dot_k.sub(&d.r_sq));
                }
                check_sites(s, "ledger.residual", &r.sites, strata, 1, r.reconstructed);
            }
        }
        match &led.complete_intersection {
            None => s.err("ledger", "ledger.complete_intersection", "missing complete-intersection block"),
            Some(ci) => {
                let field = "ledger.complete_intersection";
                if ci.model.target_family != f.no {
                    s.err("complete-intersection", format!("{field}.model.target_family"), "must be the family itself");
                }
                ci_checks(s, &format!("{field}.model"), &ci.model, f);
                let aw = &ci.model.weights[4];
                let edge = crate::exactmath::poly_gcd(f.weight(Coord::Y), f.weight(Coord::Z));
                let lhs = Factored::from_factors(
                    vec![IntPoly::constant(2), f.index.clone()],
                    vec![edge, aw.clone()],
                )
                .expect("nonzero weights");
                s.eq_fx("ledger-lhs", &format!("{field}.lhs"), &ci.lhs, &lhs);
                s.eq_fx("threshold", &format!("{field}.threshold"), &ci.threshold, &k_over(3, aw));
            }
        }
    } else if led.contraction.is_none() {
        s.err("ledger", "ledger", "reducible H_x needs residual blocks or a contraction");
    }
    if let Some(con) = &led.contraction {
        let field = "ledger.contraction.model";
        match c.family(con.model.target_family) {
            Some(t) if t.no != f.no => ci_checks(s, field, &con.model, t),
            _ => s.err("complete-intersection", format!("{field}.target_family"), "contraction target must be another catalog family"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::reference_catalog;

    #[test]
    fn lct_from_equation() {
        let c = reference_catalog();
        let five_sixths = crate::exactmath::parse_rational("5/6").unwrap();
        for no in 11..=22 {
            assert_eq!(derived_lct(c.family(no).unwrap()), Some(five_sixths.clone()), "family {no}");
        }
    }

    #[test]
    fn ir_re_partition() {
        let mut all: Vec<u32> = IR.iter().chain(RE.iter()).copied().collect();
        all.sort();
        assert_eq!(all, (1..=22).collect::<Vec<_>>());
    }
}
