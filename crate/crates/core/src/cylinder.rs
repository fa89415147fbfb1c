//! The cylinder-absence ledger: exclusion cases, their certificates, the
//! `D*` coefficients, and per-family verdicts.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::Catalog;
use crate::certify::{
    brute_oracle, certify_cmp, minimal_threshold, Certificate, CertifyError, Domain,
    OracleReport, RayDomain, Relation,
};
use crate::diagnostic::Diagnostic;
use crate::exactmath::{Factored, IntPoly, RatFn, Rational};
use crate::geometry::{
    parse_term, term_text, validated_strata, Coord, FamilySpec, GeometryError, Monomial,
    Presence, SingularStratum, StratumKind,
};
use crate::intersection::{hx_decomposition, section_product, HxDecomposition, IntersectionError};
use crate::stability::{stability_on_ray, stability_status, StabilityVerdict};

/// Where a non-log-canonical point is assumed to sit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Site {
    Smooth,
    Stratum(String),
    BaseLocus,
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Site::Smooth => f.write_str("smooth"),
            Site::BaseLocus => f.write_str("base_locus"),
            Site::Stratum(l) => f.write_str(l),
        }
    }
}

impl std::str::FromStr for Site {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "smooth" => Site::Smooth,
            "base_locus" => Site::BaseLocus,
            l if l.starts_with("p_") => Site::Stratum(l.to_string()),
            other => return Err(format!("unknown site {other:?}")),
        })
    }
}

impl Serialize for Site {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Site {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// A site with its multiplicity threshold. A missing threshold on a stratum
/// site means the value is not stated; both `2/r` and `1/r` are then checked.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SiteThreshold {
    pub site: Site,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<Factored>,
}

/// Curve cut by `y = 0` through points off `H_x`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HyData {
    #[serde(with = "crate::exactmath::rational_serde")]
    pub lct: Rational,
    pub sites: Vec<SiteThreshold>,
    pub source: String,
    #[serde(default)]
    pub reconstructed: bool,
}

/// `H_x·D` against the sites of `H_x`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HxCases {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lhs: Option<Factored>,
    pub sites: Vec<SiteThreshold>,
    pub source: String,
    #[serde(default)]
    pub reconstructed: bool,
}

/// Stated values of `L·(−K)`, `R·(−K)`, `L²`, `R²`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionFixture {
    pub l_dot_k: Factored,
    pub r_dot_k: Factored,
    pub l_sq: Factored,
    pub r_sq: Factored,
    pub source: String,
}

/// Components through the meeting point of `L` and `R`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeetingData {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l_dot_d: Option<Factored>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_dot_d: Option<Factored>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<Factored>,
    pub source: String,
    #[serde(default)]
    pub reconstructed: bool,
}

/// `R·(D − λR)` with `λ = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidualData {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lhs: Option<Factored>,
    pub sites: Vec<SiteThreshold>,
    pub source: String,
    #[serde(default)]
    pub reconstructed: bool,
}

/// Signed monomial in `x, y, z, t, w`, written like `-x^{14n+2}y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CiTerm {
    pub coeff: BigInt,
    pub exponents: [IntPoly; 5],
}

pub const XYZTW: [char; 5] = ['x', 'y', 'z', 't', 'w'];

impl fmt::Display for CiTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&term_text(&self.coeff, &self.exponents, &XYZTW))
    }
}

impl std::str::FromStr for CiTerm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (coeff, e) = parse_term(s, &XYZTW)?;
        Ok(CiTerm {
            coeff,
            exponents: e.try_into().expect("five exponents"),
        })
    }
}

impl Serialize for CiTerm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CiTerm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

impl CiTerm {
    pub fn degree(&self, w: &[IntPoly; 5]) -> IntPoly {
        self.exponents
            .iter()
            .zip(w)
            .fold(IntPoly::zero(), |acc, (e, a)| &acc + &(e * a))
    }

    fn times(&self, o: &CiTerm) -> CiTerm {
        CiTerm {
            coeff: &self.coeff * &o.coeff,
            exponents: std::array::from_fn(|i| &self.exponents[i] + &o.exponents[i]),
        }
    }
}

/// Complete intersection of two equations in `P(a₀, …, a₃, a_w)`, and the
/// combination `m₁·E₁ + m₂·E₂` that eliminates one variable and recovers a
/// family's equation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompleteIntersection {
    pub weights: [IntPoly; 5],
    pub equations: [Vec<CiTerm>; 2],
    pub index: IntPoly,
    pub multipliers: [CiTerm; 2],
    pub eliminated: char,
    pub target_family: u32,
}

impl CompleteIntersection {
    pub fn degrees(&self) -> Vec<Vec<IntPoly>> {
        self.equations
            .iter()
            .map(|eq| eq.iter().map(|t| t.degree(&self.weights)).collect())
            .collect()
    }

    pub fn derived_index(&self) -> IntPoly {
        let sum = self.weights.iter().fold(IntPoly::zero(), |a, w| &a + w);
        let degs = self.degrees();
        &(&sum - &degs[0][0]) - &degs[1][0]
    }

    /// Terms of `m₁·E₁ + m₂·E₂` with nonzero coefficient, sorted.
    pub fn combined(&self) -> Vec<CiTerm> {
        let mut acc: BTreeMap<[IntPoly; 5], BigInt> = BTreeMap::new();
        for (m, eq) in self.multipliers.iter().zip(&self.equations) {
            for t in eq {
                let p = m.times(t);
                *acc.entry(p.exponents).or_insert_with(BigInt::zero) += p.coeff;
            }
        }
        acc.into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(exponents, coeff)| CiTerm { coeff, exponents })
            .collect()
    }

    fn eliminated_index(&self) -> Option<usize> {
        XYZTW.iter().position(|&c| c == self.eliminated)
    }

    /// The combined equation as monomials in the four remaining variables.
    pub fn eliminated_monomials(&self) -> Option<Vec<Monomial>> {
        let k = self.eliminated_index()?;
        let mut out = Vec::new();
        for t in self.combined() {
            if !t.exponents[k].is_zero() {
                return None;
            }
            let rest: Vec<IntPoly> = (0..5).filter(|&i| i != k).map(|i| t.exponents[i].clone()).collect();
            out.push(Monomial::new(rest.try_into().expect("four exponents")));
        }
        out.sort();
        Some(out)
    }

    /// Weights of the four remaining variables.
    pub fn remaining_weights(&self) -> Option<[IntPoly; 4]> {
        let k = self.eliminated_index()?;
        let rest: Vec<IntPoly> = (0..5).filter(|&i| i != k).map(|i| self.weights[i].clone()).collect();
        rest.try_into().ok()
    }
}

/// Residual curve on a complete-intersection model after `L` is contracted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CiCase {
    pub model: CompleteIntersection,
    pub lhs: Factored,
    pub threshold: Factored,
    pub source: String,
}

/// A contraction onto another family's surface; the exclusion follows from
/// that family's certificates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractionData {
    pub model: CompleteIntersection,
    pub source: String,
}

/// Stated `D* = c·D − h·H_x`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DStarFixture {
    pub d_coeff: Factored,
    pub hx_coeff: Factored,
    pub source: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct LedgerData {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hy: Option<HyData>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hx: Option<HxCases>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<crate::intersection::DecompositionInput>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decomposition_fixture: Option<DecompositionFixture>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meeting: Option<MeetingData>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<ResidualData>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complete_intersection: Option<CiCase>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contraction: Option<ContractionData>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dstar: Option<DStarFixture>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseKind {
    /// `M·D` for a member of the moving system through the point.
    MovingSystem,
    /// `H_y·D` at a point of `H_y`.
    HyCurve,
    /// `I/a₁` against the log canonical threshold of `H_y`.
    HyLct,
    /// `H_x·D` with `H_x` not in the support.
    Hx,
    /// `L·D` and `R·D` at the meeting point.
    Meeting,
    /// `R·(D − R)` after removing `R` with coefficient one.
    Residual,
    /// `R'·D'` on the complete-intersection model.
    CompleteIntersection,
}

impl CaseKind {
    pub fn stage(self) -> Stage {
        match self {
            CaseKind::MovingSystem | CaseKind::HyCurve | CaseKind::HyLct => Stage::OffHx,
            _ => Stage::Support,
        }
    }
}

/// Off `H_x` the pair is log canonical; then `H_x` lies in the support.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    OffHx,
    Support,
}

/// The multiplicity bound that turns non-log-canonicity into the threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Governing {
    SmoothPointMultiplicity,
    QuotientPointMultiplicity,
    InversionOfAdjunction,
    MovingSystemBound,
    LogCanonicalThreshold,
}

/// Which of the two readings of an unstated stratum threshold a case uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdVariant {
    TwoOverR,
    OneOverR,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExclusionCase {
    pub id: String,
    pub kind: CaseKind,
    pub site: Site,
    /// Symbolic form of the left side, e.g. `H_x·D`.
    pub expr: String,
    pub lhs: Factored,
    pub rhs: Factored,
    pub governing: Governing,
    pub source: String,
    pub ray: RayDomain,
    pub reconstructed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variant: Option<ThresholdVariant>,
}

impl ExclusionCase {
    pub fn stage(&self) -> Stage {
        self.kind.stage()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CylinderError {
    #[error("family {0} has no ledger data")]
    MissingLedger(u32),
    #[error("family {family}: missing {what}")]
    Missing { family: u32, what: &'static str },
    #[error("family {family}: unknown site {site}")]
    UnknownSite { family: u32, site: String },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Intersection(#[from] IntersectionError),
    #[error("D* is undefined or not effective at n = {at}: I - 2a0 <= 0")]
    DStarInvalid { at: i64 },
    #[error(transparent)]
    Certify(#[from] CertifyError),
}

/// The ray on which the ledger is stated.
pub const LEDGER_RAY: RayDomain = RayDomain { n0: 3 };

fn site_order(strata: &[SingularStratum], site: &Site, family: u32) -> Result<Option<IntPoly>, CylinderError> {
    match site {
        Site::Smooth | Site::BaseLocus => Ok(None),
        Site::Stratum(label) => strata
            .iter()
            .find(|s| &s.label == label && s.presence == Presence::Always)
            .map(|s| Some(s.order.clone()))
            .ok_or_else(|| CylinderError::UnknownSite {
                family,
                site: label.clone(),
            }),
    }
}

fn k_over(k: i64, r: &IntPoly) -> Factored {
    Factored::from_factors(vec![IntPoly::constant(k)], vec![r.clone()]).expect("nonzero order")
}

struct Builder<'a> {
    family: u32,
    strata: &'a [SingularStratum],
    out: Vec<ExclusionCase>,
}

impl Builder<'_> {
    #[allow(clippy::too_many_arguments)]
    fn push(
        &mut self,
        kind: CaseKind,
        site: Site,
        expr: &str,
        lhs: &Factored,
        rhs: Factored,
        governing: Governing,
        source: &str,
        reconstructed: bool,
        variant: Option<ThresholdVariant>,
    ) {
        let suffix = match variant {
            Some(ThresholdVariant::TwoOverR) => "/2r",
            Some(ThresholdVariant::OneOverR) => "/1r",
            None => "",
        };
        let id = format!(
            "{}/{}{}",
            serde_json::to_value(kind).unwrap().as_str().unwrap(),
            site,
            suffix
        );
        self.out.push(ExclusionCase {
            id,
            kind,
            site,
            expr: expr.to_string(),
            lhs: lhs.clone(),
            rhs,
            governing,
            source: source.to_string(),
            ray: LEDGER_RAY,
            reconstructed,
            variant,
        });
    }

    /// One case per site; unstated stratum thresholds give both readings.
    fn sites(
        &mut self,
        kind: CaseKind,
        expr: &str,
        lhs: &Factored,
        sites: &[SiteThreshold],
        source: &str,
        reconstructed: bool,
    ) -> Result<(), CylinderError> {
        for st in sites {
            let order = site_order(self.strata, &st.site, self.family)?;
            let governing = match (&order, kind) {
                (_, CaseKind::Residual) => Governing::InversionOfAdjunction,
                (None, _) => Governing::SmoothPointMultiplicity,
                (Some(_), _) => Governing::QuotientPointMultiplicity,
            };
            match (&st.threshold, order) {
                (Some(t), _) => self.push(kind, st.site.clone(), expr, lhs, t.clone(), governing, source, reconstructed, None),
                (None, None) => self.push(kind, st.site.clone(), expr, lhs, Factored::one(), governing, source, reconstructed, None),
                (None, Some(r)) => {
                    for (k, v) in [(2, ThresholdVariant::TwoOverR), (1, ThresholdVariant::OneOverR)] {
                        self.push(kind, st.site.clone(), expr, lhs, k_over(k, &r), governing, source, true, Some(v));
                    }
                }
            }
        }
        Ok(())
    }
}

fn ledger(f: &FamilySpec) -> Result<&LedgerData, CylinderError> {
    f.ledger.as_ref().ok_or(CylinderError::MissingLedger(f.no))
}

/// Cases showing the pair is log canonical away from `H_x`.
pub fn nonlc_cases(f: &FamilySpec) -> Result<Vec<ExclusionCase>, CylinderError> {
    let led = ledger(f)?;
    let sl = f.singular_locus.as_ref().ok_or(GeometryError::MissingSingularLocus(f.no))?;
    let strata = validated_strata(f)?;
    let mut b = Builder {
        family: f.no,
        strata: &strata,
        out: Vec::new(),
    };
    let m = section_product(f, &sl.moving_system.degree, &f.index);
    b.push(
        CaseKind::MovingSystem,
        Site::Smooth,
        "M·D",
        &m,
        Factored::one(),
        Governing::MovingSystemBound,
        &sl.source,
        false,
        None,
    );
    if let Some(hy) = &led.hy {
        let a1 = f.weight(Coord::Y);
        let lhs = section_product(f, a1, &f.index);
        b.sites(CaseKind::HyCurve, "H_y·D", &lhs, &hy.sites, &hy.source, hy.reconstructed)?;
        let coeff = Factored::from_factors(vec![f.index.clone()], vec![a1.clone()]).expect("nonzero weight");
        b.push(
            CaseKind::HyLct,
            Site::Stratum("p_x".into()),
            "I/a_1",
            &coeff,
            Factored::from_rational(hy.lct.clone()),
            Governing::LogCanonicalThreshold,
            &hy.source,
            hy.reconstructed,
            None,
        );
    }
    Ok(b.out)
}

/// Cases showing `H_x` lies in the support of `D`.
pub fn support_cases(f: &FamilySpec) -> Result<Vec<ExclusionCase>, CylinderError> {
    let led = ledger(f)?;
    let strata = validated_strata(f)?;
    let mut b = Builder {
        family: f.no,
        strata: &strata,
        out: Vec::new(),
    };
    let hx = led.hx.as_ref().ok_or(CylinderError::Missing {
        family: f.no,
        what: "H_x cases",
    })?;
    let hx_dot_d = section_product(f, f.weight(Coord::X), &f.index);
    b.sites(CaseKind::Hx, "H_x·D", &hx_dot_d, &hx.sites, &hx.source, hx.reconstructed)?;
    let decomposition = hx_decomposition(f)?;
    if let Some(res) = &led.residual {
        let HxDecomposition::Reducible(d) = &decomposition else {
            return Err(CylinderError::Missing {
                family: f.no,
                what: "reducible H_x decomposition",
            });
        };
        let meet = led.meeting.as_ref().ok_or(CylinderError::Missing {
            family: f.no,
            what: "meeting-point data",
        })?;
        let pt = Site::Stratum(format!("p_{}", d.meeting_point));
        let order = f.weight(d.meeting_point);
        let threshold = meet.threshold.clone().unwrap_or_else(|| k_over(1, order));
        for (part, expr, lhs) in [("l", "L·D", &d.l_dot_k), ("r", "R·D", &d.r_dot_k)] {
            b.push(
                CaseKind::Meeting,
                pt.clone(),
                expr,
                lhs,
                threshold.clone(),
                Governing::QuotientPointMultiplicity,
                &meet.source,
                meet.reconstructed,
                None,
            );
            let last = b.out.last_mut().expect("just pushed");
            last.id = format!("meeting/{part}/{}", last.site);
        }
        // R² < 0 makes R·(D − λR) largest at λ = 1 on [0, 1].
        let sign = certify_cmp(&d.r_sq.value(), &RatFn::zero(), Relation::Lt, LEDGER_RAY)?;
        if !sign.holds() {
            return Err(CylinderError::Missing {
                family: f.no,
                what: "negative R² on the ledger ray",
            });
        }
        let lhs = d.r_dot_k.sub(&d.r_sq);
        let n = b.out.len();
        b.sites(CaseKind::Residual, "R·(D-R)", &lhs, &res.sites, &res.source, res.reconstructed)?;
        for c in &mut b.out[n..] {
            c.governing = Governing::InversionOfAdjunction;
        }
    }
    if let Some(ci) = &led.complete_intersection {
        let site = Site::Stratum("q".into());
        b.out.push(ExclusionCase {
            id: "complete_intersection/q".into(),
            kind: CaseKind::CompleteIntersection,
            site,
            expr: "R'·D'".into(),
            lhs: ci.lhs.clone(),
            rhs: ci.threshold.clone(),
            governing: Governing::QuotientPointMultiplicity,
            source: ci.source.clone(),
            ray: LEDGER_RAY,
            reconstructed: false,
            variant: None,
        });
    }
    Ok(b.out)
}

pub fn all_cases(f: &FamilySpec) -> Result<Vec<ExclusionCase>, CylinderError> {
    let mut cases = nonlc_cases(f)?;
    cases.extend(support_cases(f)?);
    Ok(cases)
}

/// `lhs ≤ rhs` on the case's ray: the strict chain `lhs > rhs` is impossible.
pub fn certify_case(c: &ExclusionCase) -> Result<Certificate, CertifyError> {
    certify_case_on(c, c.ray)
}

pub fn certify_case_on(c: &ExclusionCase, domain: impl Into<Domain>) -> Result<Certificate, CertifyError> {
    certify_cmp(&c.lhs.value(), &c.rhs.value(), Relation::Le, domain)
}

pub fn oracle_case(c: &ExclusionCase, range: std::ops::RangeInclusive<i64>) -> OracleReport {
    brute_oracle(&c.lhs.value(), &c.rhs.value(), Relation::Le, range)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DStar {
    pub d_coeff: Factored,
    pub hx_coeff: Factored,
    /// Least ray on which `I − 2a₀ > 0`.
    pub validity_ray: RayDomain,
}

fn i_minus_2a0(f: &FamilySpec) -> IntPoly {
    &f.index - &f.weight(Coord::X).scale(&BigInt::from(2))
}

pub fn dstar(f: &FamilySpec) -> Result<DStar, CylinderError> {
    let gap = i_minus_2a0(f);
    let d_coeff = Factored::from_factors(vec![f.index.clone()], vec![gap.clone()])
        .map_err(|_| CylinderError::DStarInvalid { at: f.ray.n0 })?;
    let hx_coeff = d_coeff.scale_by(&Rational::from_integer(2.into()));
    let n0 = minimal_threshold(&RatFn::from_poly(gap), &RatFn::zero(), Relation::Gt)
        .ok_or(CylinderError::DStarInvalid { at: f.ray.n0 })?;
    Ok(DStar {
        d_coeff,
        hx_coeff,
        validity_ray: RayDomain::new(n0.max(f.ray.n0)),
    })
}

/// Certificate that `I − 2a₀ > 0` on `domain`.
pub fn dstar_valid_on(f: &FamilySpec, domain: impl Into<Domain>) -> Result<Certificate, CylinderError> {
    let cert = certify_cmp(&RatFn::from_poly(i_minus_2a0(f)), &RatFn::zero(), Relation::Gt, domain)?;
    match cert.witness {
        Some(at) => Err(CylinderError::DStarInvalid { at }),
        None => Ok(cert),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "verdict")]
pub enum CylinderVerdict {
    NoCylinderCertified,
    NoCylinderByAlpha { alpha: RatFn, citation: String },
    NotCertified { reasons: Vec<String> },
}

impl CylinderVerdict {
    pub fn name(&self) -> &'static str {
        match self {
            CylinderVerdict::NoCylinderCertified => "noCylinderCertified",
            CylinderVerdict::NoCylinderByAlpha { .. } => "noCylinderByAlpha",
            CylinderVerdict::NotCertified { .. } => "notCertified",
        }
    }

    pub fn excludes_cylinder(&self) -> bool {
        !matches!(self, CylinderVerdict::NotCertified { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseRecord {
    pub case: ExclusionCase,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl CaseRecord {
    pub fn holds(&self) -> bool {
        self.certificate.as_ref().is_some_and(Certificate::holds)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossReference {
    pub family: u32,
    pub reason: String,
    pub source: String,
    pub records: Vec<CaseRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DStarRecord {
    pub dstar: DStar,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LedgerReport {
    pub family: u32,
    pub domain: Domain,
    pub stability: StabilityVerdict,
    pub cylinder: CylinderVerdict,
    pub cases: Vec<CaseRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dstar: Option<DStarRecord>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub cross_references: Vec<CrossReference>,
    pub warnings: Vec<Diagnostic>,
}

fn certify_all(cases: Vec<ExclusionCase>, domain: Domain) -> Vec<CaseRecord> {
    cases
        .into_iter()
        .map(|case| match certify_case_on(&case, domain) {
            Ok(cert) => CaseRecord {
                case,
                certificate: Some(cert),
                error: None,
            },
            Err(e) => CaseRecord {
                case,
                certificate: None,
                error: Some(e.to_string()),
            },
        })
        .collect()
}

fn stability_for(f: &FamilySpec, domain: Domain) -> StabilityVerdict {
    match domain {
        Domain::Ray(r) => stability_on_ray(f, r),
        Domain::Point(n) => stability_status(f, n),
    }
}

fn strata_warnings(f: &FamilySpec) -> Vec<Diagnostic> {
    let Ok(strata) = crate::geometry::singular_strata(f) else {
        return Vec::new();
    };
    strata
        .iter()
        .filter_map(|s| match &s.presence {
            Presence::Conditional(note) => Some(Diagnostic::warning(
                Some(f.no),
                "conditional-stratum",
                "strata",
                format!("{} on {} ({note})", s.label, kind_text(&s.kind)),
            )),
            Presence::Always => None,
        })
        .collect()
}

fn kind_text(k: &StratumKind) -> String {
    match k {
        StratumKind::Vertex(c) => format!("vertex {c}"),
        StratumKind::EdgePoint(a, b) => format!("edge ({a},{b})"),
    }
}

/// Per-family verdict on `domain`.
pub fn cylinder_report(catalog: &Catalog, f: &FamilySpec, domain: impl Into<Domain>) -> LedgerReport {
    let domain = domain.into();
    let stability = stability_for(f, domain);
    let mut warnings: Vec<Diagnostic> = crate::stability::validate_stability(f)
        .into_iter()
        .filter(|d| d.severity == crate::diagnostic::Severity::Warning)
        .collect();
    warnings.extend(strata_warnings(f));
    let mut report = LedgerReport {
        family: f.no,
        domain,
        stability,
        cylinder: CylinderVerdict::NotCertified { reasons: Vec::new() },
        cases: Vec::new(),
        dstar: None,
        cross_references: Vec::new(),
        warnings,
    };
    if let Some(alpha) = &f.known_alpha {
        let cert = certify_cmp(&alpha.value, &RatFn::one(), Relation::Ge, domain);
        report.cylinder = match cert {
            Ok(c) if c.holds() => CylinderVerdict::NoCylinderByAlpha {
                alpha: alpha.value.clone(),
                citation: alpha.citation.clone(),
            },
            _ => CylinderVerdict::NotCertified {
                reasons: vec![format!("alpha = {} is not >= 1", alpha.value)],
            },
        };
        return report;
    }
    let mut reasons = Vec::new();
    match all_cases(f) {
        Ok(cases) => report.cases = certify_all(cases, domain),
        Err(e) => reasons.push(e.to_string()),
    }
    for r in &report.cases {
        if !r.holds() {
            reasons.push(match (&r.error, &r.certificate) {
                (Some(e), _) => format!("{}: {e}", r.case.id),
                (None, Some(c)) => format!("{}: fails at n = {}", r.case.id, c.witness.unwrap_or_default()),
                _ => r.case.id.clone(),
            });
        }
    }
    match dstar(f) {
        Ok(ds) => {
            let (certificate, error) = match dstar_valid_on(f, domain) {
                Ok(c) => (Some(c), None),
                Err(e) => {
                    reasons.push(format!("D*: {e}"));
                    (None, Some(e.to_string()))
                }
            };
            report.dstar = Some(DStarRecord {
                dstar: ds,
                certificate,
                error,
            });
        }
        Err(e) => reasons.push(format!("D*: {e}")),
    }
    if let Some(con) = f.ledger.as_ref().and_then(|l| l.contraction.as_ref()) {
        let target = con.model.target_family;
        match catalog.family(target).map(support_cases) {
            Some(Ok(cases)) => {
                let records = certify_all(cases, domain);
                if let Some(bad) = records.iter().find(|r| !r.holds()) {
                    reasons.push(format!("family {target} {}: does not hold", bad.case.id));
                }
                report.cross_references.push(CrossReference {
                    family: target,
                    reason: format!("contraction of L onto a surface isomorphic to family {target}"),
                    source: con.source.clone(),
                    records,
                });
            }
            Some(Err(e)) => reasons.push(format!("family {target}: {e}")),
            None => reasons.push(format!("family {target} is not in the catalog")),
        }
    }
    report.cylinder = if reasons.is_empty() {
        CylinderVerdict::NoCylinderCertified
    } else {
        CylinderVerdict::NotCertified { reasons }
    };
    report
}

/// Log canonical threshold of `x^a + y^b` at the origin: `min(1, 1/a + 1/b)`.
pub fn binomial_lct(a: u64, b: u64) -> Rational {
    let s = Rational::new(BigInt::one(), a.into()) + Rational::new(BigInt::one(), b.into());
    s.min(Rational::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::reference_catalog;
    use crate::exactmath::parse_factored;

    fn fx(s: &str) -> Factored {
        parse_factored(s).unwrap()
    }

    #[test]
    fn family_1_nonlc() {
        let cat = reference_catalog();
        let cases = nonlc_cases(cat.family(1).unwrap()).unwrap();
        assert_eq!(cases.len(), 1);
        assert_eq!(cases[0].lhs, fx("n(12n-9)/((3n-2)(6n-5))"));
        assert!(certify_case(&cases[0]).unwrap().holds());
        let early = certify_case_on(&cases[0], RayDomain::new(1)).unwrap();
        assert!(!early.holds());
    }

    #[test]
    fn family_22_cases() {
        let cat = reference_catalog();
        let f = cat.family(22).unwrap();
        let cases = all_cases(f).unwrap();
        let find = |lhs: &str, rhs: &str| {
            cases
                .iter()
                .find(|c| c.lhs == fx(lhs) && c.rhs == fx(rhs))
                .unwrap_or_else(|| panic!("no case {lhs} <= {rhs}"))
        };
        find("(21n+15)/(441n+70)", "1/7");
        find("(21n+15)/(63n+10)", "1");
        find("(7n+5)/(28n+6)", "5/6");
        find("(98n+14)/((28n+6)(63n+10))", "1/(14n+3)");
        find("(14n+10)/((14n+3)(84n+11))", "3/(84n+11)");
        for c in &cases {
            assert!(certify_case(c).unwrap().holds(), "{}", c.id);
            assert!(oracle_case(c, 3..=300).clean(), "{}", c.id);
        }
    }

    #[test]
    fn table_5_site_example() {
        let cat = reference_catalog();
        let cases = support_cases(cat.family(1).unwrap()).unwrap();
        let py = cases.iter().find(|c| c.site == Site::Stratum("p_y".into())).unwrap();
        assert_eq!(py.rhs, fx("2/(3n-2)"));
        assert!(certify_case(py).unwrap().holds());
    }

    #[test]
    fn dstar_examples() {
        let cat = reference_catalog();
        let d1 = dstar(cat.family(1).unwrap()).unwrap();
        assert_eq!(d1.d_coeff, fx("n/(n-2)"));
        assert_eq!(d1.hx_coeff, fx("2n/(n-2)"));
        assert_eq!(d1.validity_ray, RayDomain::new(3));
        let d21 = dstar(cat.family(21).unwrap()).unwrap();
        assert_eq!(d21.d_coeff, fx("(7n+6)/(7n-8)"));
        assert_eq!(d21.hx_coeff, fx("2(7n+6)/(7n-8)"));
        assert_eq!(
            dstar_valid_on(cat.family(1).unwrap(), Domain::Point(2)),
            Err(CylinderError::DStarInvalid { at: 2 })
        );
    }

    #[test]
    fn reports() {
        let cat = reference_catalog();
        let r = cylinder_report(cat, cat.family(22).unwrap(), LEDGER_RAY);
        assert_eq!(r.cylinder, CylinderVerdict::NoCylinderCertified);
        let r = cylinder_report(cat, cat.family(23).unwrap(), RayDomain::new(1));
        assert_eq!(r.cylinder.name(), "noCylinderByAlpha");
        let r = cylinder_report(cat, cat.family(1).unwrap(), Domain::Point(2));
        assert_eq!(r.cylinder.name(), "notCertified");
        let r = cylinder_report(cat, cat.family(2).unwrap(), LEDGER_RAY);
        assert_eq!(r.cylinder, CylinderVerdict::NoCylinderCertified);
        assert_eq!(r.cross_references[0].family, 1);
    }

    #[test]
    fn ci_elimination() {
        let cat = reference_catalog();
        let f = cat.family(22).unwrap();
        let ci = &f.ledger.as_ref().unwrap().complete_intersection.as_ref().unwrap().model;
        let mut expected = f.equation.as_ref().unwrap().monomials.clone();
        expected.sort();
        assert_eq!(ci.eliminated_monomials().unwrap(), expected);
        assert_eq!(ci.derived_index(), f.index);
    }

    #[test]
    fn cusp_lct() {
        assert_eq!(binomial_lct(2, 3), Rational::new(5.into(), 6.into()));
        assert_eq!(binomial_lct(2, 2), Rational::one());
    }

    #[test]
    fn term_round_trip() {
        for t in ["xw", "-z^2", "-y^3", "x^{14n+2}y", "-3w^2", "1"] {
            let parsed: CiTerm = t.parse().unwrap();
            assert_eq!(parsed.to_string(), t);
        }
    }
}
