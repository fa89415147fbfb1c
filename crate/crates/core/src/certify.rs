//! Certificates for polynomial and rational-function inequalities that hold
//! for every integer `n` on a ray `n ≥ n0`.

use std::fmt;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactmath::{IntPoly, RatFn, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RayDomain {
    pub n0: i64,
}

impl RayDomain {
    pub fn new(n0: i64) -> Self {
        Self { n0 }
    }
}

impl fmt::Display for RayDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n >= {}", self.n0)
    }
}

/// Either every integer on a ray or a single integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    Ray(RayDomain),
    Point(i64),
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Ray(r) => write!(f, "{r}"),
            Domain::Point(n) => write!(f, "n = {n}"),
        }
    }
}

impl From<RayDomain> for Domain {
    fn from(r: RayDomain) -> Self {
        Domain::Ray(r)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = ">")]
    Gt,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Lt => "<",
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
            Relation::Gt => ">",
        }
    }

    pub fn test(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Relation::Lt => lhs < rhs,
            Relation::Le => lhs <= rhs,
            Relation::Eq => lhs == rhs,
            Relation::Ge => lhs >= rhs,
            Relation::Gt => lhs > rhs,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// All coefficients of `p(m + n0)` are non-negative.
    ShiftNonnegCoefficients,
    /// Pointwise check below a Cauchy root bound, constant sign above it.
    RootBoundPointwise,
    /// Both sides are the same rational function.
    Identity,
    /// An explicit `n` on the domain violates the claim.
    Counterexample,
    /// Exact evaluation at a single `n`.
    Evaluation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claim {
    pub lhs: RatFn,
    pub relation: Relation,
    pub rhs: RatFn,
    pub domain: Domain,
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} for {}", self.lhs, self.relation, self.rhs, self.domain)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditStep {
    pub step: String,
    pub detail: String,
}

impl AuditStep {
    fn new(step: impl Into<String>, detail: impl fmt::Display) -> Self {
        Self {
            step: step.into(),
            detail: detail.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub claim: Claim,
    pub verdict: Verdict,
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<i64>,
    pub audit: Vec<AuditStep>,
}

impl Certificate {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Lhs,
    Rhs,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Lhs => "lhs",
            Side::Rhs => "rhs",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertifyError {
    #[error("ill-posed claim: {side} has a pole at n = {at} inside the domain")]
    IllPosed { side: Side, at: i64 },
}

fn to_i64(b: &BigInt) -> i64 {
    b.to_i64().unwrap_or(i64::MAX)
}

/// Certifies `p(n) ≥ 0` (or `> 0` when `strict`) for every integer `n ≥ n0`.
pub fn certify_poly_nonneg(p: &IntPoly, ray: RayDomain, strict: bool) -> Certificate {
    let claim = Claim {
        lhs: RatFn::from_poly(p.clone()),
        relation: if strict { Relation::Gt } else { Relation::Ge },
        rhs: RatFn::zero(),
        domain: Domain::Ray(ray),
    };
    let shifted = p.shift(&BigInt::from(ray.n0));
    let mut audit = vec![AuditStep::new(
        format!("shift n = m + {}", ray.n0),
        format!("p(m + {}) = {}", ray.n0, shifted),
    )];
    let coeffs_ok = shifted.coeffs().iter().all(|c| !c.is_negative());
    let const_ok = !strict || shifted.coeff(0).is_positive();
    if !shifted.is_zero() && coeffs_ok && const_ok {
        audit.push(AuditStep::new(
            "coefficients",
            if strict {
                "all non-negative, constant term positive"
            } else {
                "all non-negative"
            },
        ));
        return Certificate {
            claim,
            verdict: Verdict::Holds,
            method: Method::ShiftNonnegCoefficients,
            witness: None,
            audit,
        };
    }
    let bound = shifted.cauchy_bound();
    audit.push(AuditStep::new(
        "root bound",
        format!("every root m of p(m + {}) has |m| < {}", ray.n0, bound),
    ));
    let violates = |v: &BigInt| v.is_negative() || (strict && v.is_zero());
    let last = to_i64(&bound);
    for m in 0..=last {
        let n = ray.n0 + m;
        let v = p.eval_i64(n);
        if violates(&v) {
            audit.push(AuditStep::new("counterexample", format!("p({n}) = {v}")));
            return Certificate {
                claim,
                verdict: Verdict::Fails,
                method: Method::Counterexample,
                witness: Some(n),
                audit,
            };
        }
    }
    // Past the bound the sign is the sign of the leading coefficient, which is
    // positive here: otherwise p(n0 + bound) < 0 was caught above.
    audit.push(AuditStep::new(
        "pointwise",
        format!(
            "p(n) {} 0 for n in [{}, {}]; leading coefficient {} > 0",
            if strict { ">" } else { ">=" },
            ray.n0,
            ray.n0 + last,
            shifted.leading()
        ),
    ));
    Certificate {
        claim,
        verdict: Verdict::Holds,
        method: Method::RootBoundPointwise,
        witness: None,
        audit,
    }
}

/// Smallest integer root of `p` that is `≥ n0`.
fn integer_root_on_ray(p: &IntPoly, n0: i64) -> Option<i64> {
    if p.is_constant() {
        return None;
    }
    let bound = to_i64(&p.cauchy_bound());
    (n0..=bound.max(n0)).find(|&n| p.eval_i64(n).is_zero())
}

/// Sign of a pole-free denominator on the whole ray, if constant.
fn constant_sign(p: &IntPoly, ray: RayDomain) -> Option<i8> {
    if certify_poly_nonneg(p, ray, true).holds() {
        Some(1)
    } else if certify_poly_nonneg(&-p, ray, true).holds() {
        Some(-1)
    } else {
        None
    }
}

/// Certifies `lhs ⋈ rhs` on `domain`.
///
/// On a ray, denominators are first shown to have constant sign (or, failing
/// that, the inequality is multiplied through by their square) and the claim
/// reduces to [`certify_poly_nonneg`]. Equality holds only by identity.
pub fn certify_cmp(
    lhs: &RatFn,
    rhs: &RatFn,
    rel: Relation,
    domain: impl Into<Domain>,
) -> Result<Certificate, CertifyError> {
    let domain = domain.into();
    let claim = Claim {
        lhs: lhs.clone(),
        relation: rel,
        rhs: rhs.clone(),
        domain,
    };
    let ray = match domain {
        Domain::Point(n) => return certify_at_point(claim, n),
        Domain::Ray(r) => r,
    };
    for (side, f) in [(Side::Lhs, lhs), (Side::Rhs, rhs)] {
        if let Some(at) = integer_root_on_ray(f.den(), ray.n0) {
            return Err(CertifyError::IllPosed { side, at });
        }
    }
    let mut audit = Vec::new();
    if lhs == rhs {
        let holds = matches!(rel, Relation::Le | Relation::Eq | Relation::Ge);
        audit.push(AuditStep::new("identity", "lhs and rhs are the same rational function"));
        return Ok(Certificate {
            claim,
            verdict: if holds { Verdict::Holds } else { Verdict::Fails },
            method: if holds { Method::Identity } else { Method::Counterexample },
            witness: (!holds).then_some(ray.n0),
            audit,
        });
    }
    let (ld, rd) = (lhs.den(), rhs.den());
    // (rhs - lhs) · ld · rd
    let cross = &(rhs.num() * ld) - &(lhs.num() * rd);
    let signs = (constant_sign(ld, ray), constant_sign(rd, ray));
    let diff = match signs {
        (Some(a), Some(b)) => {
            audit.push(AuditStep::new(
                "denominator signs",
                format!("sign({ld}) = {a}, sign({rd}) = {b} on {ray}"),
            ));
            if a * b > 0 {
                cross
            } else {
                -cross
            }
        }
        _ => {
            audit.push(AuditStep::new(
                "denominator signs",
                "not constant; multiplied through by the squared denominators",
            ));
            &(&cross * ld) * rd
        }
    };
    // `diff` has the sign of rhs - lhs at every integer of the ray.
    if rel == Relation::Eq {
        let n = (ray.n0..)
            .find(|&n| !diff.eval_i64(n).is_zero())
            .expect("a nonzero polynomial has finitely many roots");
        audit.push(AuditStep::new("counterexample", format!("lhs({n}) != rhs({n})")));
        return Ok(Certificate {
            claim,
            verdict: Verdict::Fails,
            method: Method::Counterexample,
            witness: Some(n),
            audit,
        });
    }
    let (target, strict) = match rel {
        Relation::Le => (diff, false),
        Relation::Lt => (diff, true),
        Relation::Ge => (-diff, false),
        Relation::Gt => (-diff, true),
        Relation::Eq => unreachable!(),
    };
    audit.push(AuditStep::new(
        "reduced",
        format!("{} {} 0", target, if strict { ">" } else { ">=" }),
    ));
    let inner = certify_poly_nonneg(&target, ray, strict);
    audit.extend(inner.audit);
    Ok(Certificate {
        claim,
        verdict: inner.verdict,
        method: inner.method,
        witness: inner.witness,
        audit,
    })
}

fn certify_at_point(claim: Claim, n: i64) -> Result<Certificate, CertifyError> {
    let l = claim
        .lhs
        .eval_i64(n)
        .map_err(|_| CertifyError::IllPosed { side: Side::Lhs, at: n })?;
    let r = claim
        .rhs
        .eval_i64(n)
        .map_err(|_| CertifyError::IllPosed { side: Side::Rhs, at: n })?;
    let holds = claim.relation.test(&l, &r);
    let audit = vec![AuditStep::new(
        "evaluation",
        format!("lhs({n}) = {l}, rhs({n}) = {r}"),
    )];
    Ok(Certificate {
        claim,
        verdict: if holds { Verdict::Holds } else { Verdict::Fails },
        method: Method::Evaluation,
        witness: (!holds).then_some(n),
        audit,
    })
}

/// Least `n0 ≥ 1` such that `lhs ⋈ rhs` holds (and both sides are defined) for
/// every integer `n ≥ n0`, or `None` if the relation fails for arbitrarily
/// large `n`.
pub fn minimal_threshold(lhs: &RatFn, rhs: &RatFn, rel: Relation) -> Option<i64> {
    let (ld, rd) = (lhs.den(), rhs.den());
    let cross = &(&(&(rhs.num() * ld) - &(lhs.num() * rd)) * ld) * rd;
    let far = [ld, rd, &cross]
        .iter()
        .map(|p| to_i64(&p.cauchy_bound()))
        .max()
        .unwrap_or(0)
        .max(1)
        + 1;
    let holds_at = |n: i64| match (lhs.eval_i64(n), rhs.eval_i64(n)) {
        (Ok(a), Ok(b)) => rel.test(&a, &b),
        _ => false,
    };
    if !holds_at(far) {
        return None;
    }
    let mut t = far;
    while t > 1 && holds_at(t - 1) {
        t -= 1;
    }
    Some(t)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub checked: usize,
    pub counterexamples: Vec<i64>,
    pub poles: Vec<i64>,
}

impl OracleReport {
    pub fn clean(&self) -> bool {
        self.counterexamples.is_empty() && self.poles.is_empty()
    }
}

fn horner(coeffs: &[BigInt], n: &BigInt) -> BigInt {
    coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * n + c)
}

/// Exact pointwise evaluation over `range`, independent of the symbolic path.
/// Points where either side is undefined are listed as poles.
pub fn brute_oracle(
    lhs: &RatFn,
    rhs: &RatFn,
    rel: Relation,
    range: RangeInclusive<i64>,
) -> OracleReport {
    let mut report = OracleReport::default();
    for n in range {
        let nb = BigInt::from(n);
        let (ln, ld) = (horner(lhs.num().coeffs(), &nb), horner(lhs.den().coeffs(), &nb));
        let (rn, rd) = (horner(rhs.num().coeffs(), &nb), horner(rhs.den().coeffs(), &nb));
        report.checked += 1;
        if ld.is_zero() || rd.is_zero() {
            report.poles.push(n);
            continue;
        }
        if !rel.test(&Rational::new(ln, ld), &Rational::new(rn, rd)) {
            report.counterexamples.push(n);
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{parse_poly, parse_ratfn};
    use proptest::prelude::*;

    fn rf(s: &str) -> RatFn {
        parse_ratfn(s).unwrap()
    }

    #[test]
    fn shift_method_on_linear() {
        let c = certify_poly_nonneg(&parse_poly("3n-2").unwrap(), RayDomain::new(1), true);
        assert!(c.holds());
        assert_eq!(c.method, Method::ShiftNonnegCoefficients);
    }

    #[test]
    fn quadratic_fails_at_one() {
        let p = parse_poly("18n^2-30n+10").unwrap();
        let c = certify_poly_nonneg(&p, RayDomain::new(1), false);
        assert_eq!(c.verdict, Verdict::Fails);
        assert_eq!(c.witness, Some(1));
        let c2 = certify_poly_nonneg(&p, RayDomain::new(2), false);
        assert!(c2.holds());
    }

    #[test]
    fn root_bound_path() {
        // (n-3)^2 + 0 >= 0 but shifted coefficients at n0 = 1 are mixed
        let p = parse_poly("(n-3)^2").unwrap();
        let c = certify_poly_nonneg(&p, RayDomain::new(1), false);
        assert!(c.holds());
        assert_eq!(c.method, Method::RootBoundPointwise);
        let s = certify_poly_nonneg(&p, RayDomain::new(1), true);
        assert_eq!(s.witness, Some(3));
    }

    #[test]
    fn spec_ratio_example() {
        let lhs = rf("(3n)/((3n-2)(6n-5))");
        let one = RatFn::one();
        let c = certify_cmp(&lhs, &one, Relation::Le, RayDomain::new(1)).unwrap();
        assert_eq!(c.verdict, Verdict::Fails);
        assert_eq!(c.witness, Some(1));
        let c = certify_cmp(&lhs, &one, Relation::Le, RayDomain::new(2)).unwrap();
        assert!(c.holds());
        assert_eq!(minimal_threshold(&lhs, &one, Relation::Le), Some(2));
        let oracle = brute_oracle(&lhs, &one, Relation::Le, 1..=100);
        assert_eq!(oracle.counterexamples, vec![1]);
        assert!(oracle.poles.is_empty());
    }

    #[test]
    fn pole_on_ray_is_ill_posed() {
        let err = certify_cmp(&rf("1/(n-2)"), &RatFn::one(), Relation::Le, RayDomain::new(1));
        assert_eq!(err, Err(CertifyError::IllPosed { side: Side::Lhs, at: 2 }));
        assert!(certify_cmp(&rf("1/(n-2)"), &RatFn::one(), Relation::Le, RayDomain::new(3)).is_ok());
    }

    #[test]
    fn equality_only_by_identity() {
        let a = rf("(2n)/(4n)");
        let c = certify_cmp(&a, &rf("1/2"), Relation::Eq, RayDomain::new(1)).unwrap();
        assert_eq!(c.method, Method::Identity);
        let c = certify_cmp(&rf("n"), &rf("n^2"), Relation::Eq, RayDomain::new(1)).unwrap();
        assert_eq!(c.witness, Some(2));
    }

    #[test]
    fn point_domain() {
        let c = certify_cmp(&rf("3/n"), &RatFn::one(), Relation::Lt, Domain::Point(3)).unwrap();
        assert_eq!(c.verdict, Verdict::Fails);
        assert_eq!(c.method, Method::Evaluation);
        let c = certify_cmp(&rf("3/n"), &RatFn::one(), Relation::Lt, Domain::Point(4)).unwrap();
        assert!(c.holds());
    }

    #[test]
    fn negative_denominator_is_handled() {
        // 1/(1-n) < 0 for n >= 2
        let c = certify_cmp(&rf("1/(1-n)"), &RatFn::zero(), Relation::Lt, RayDomain::new(2)).unwrap();
        assert!(c.holds());
    }

    #[test]
    fn threshold_none_when_eventually_false() {
        assert_eq!(minimal_threshold(&rf("n"), &rf("10"), Relation::Le), None);
        assert_eq!(minimal_threshold(&rf("n"), &rf("10"), Relation::Gt), Some(11));
    }

    fn small_poly() -> impl Strategy<Value = IntPoly> {
        prop::collection::vec(-40i64..40, 1..4).prop_map(|c| IntPoly::from_i64s(&c))
    }

    fn small_ratfn() -> impl Strategy<Value = RatFn> {
        (small_poly(), small_poly()).prop_filter_map("nonzero denominator", |(a, b)| {
            RatFn::new(a, b).ok()
        })
    }

    fn relation() -> impl Strategy<Value = Relation> {
        prop::sample::select(vec![Relation::Lt, Relation::Le, Relation::Ge, Relation::Gt])
    }

    proptest! {
        #[test]
        fn poly_certificate_agrees_with_evaluation(p in small_poly(), n0 in 1i64..6, strict: bool) {
            let c = certify_poly_nonneg(&p, RayDomain::new(n0), strict);
            match c.verdict {
                Verdict::Holds => {
                    for n in n0..n0 + 200 {
                        let v = p.eval_i64(n);
                        let ok = if strict { v > BigInt::zero() } else { v >= BigInt::zero() };
                        prop_assert!(ok);
                    }
                }
                Verdict::Fails => {
                    let w = c.witness.unwrap();
                    prop_assert!(w >= n0);
                    let v = p.eval_i64(w);
                    let bad = if strict { v <= BigInt::zero() } else { v < BigInt::zero() };
                    prop_assert!(bad);
                }
            }
        }

        #[test]
        fn cmp_certificate_agrees_with_oracle(l in small_ratfn(), r in small_ratfn(), rel in relation(), n0 in 1i64..5) {
            match certify_cmp(&l, &r, rel, RayDomain::new(n0)) {
                Ok(c) if c.holds() => {
                    let o = brute_oracle(&l, &r, rel, n0..=n0 + 150);
                    prop_assert!(o.clean(), "{:?} {:?}", c, o);
                }
                Ok(c) => {
                    let w = c.witness.unwrap();
                    let o = brute_oracle(&l, &r, rel, w..=w);
                    prop_assert_eq!(o.counterexamples, vec![w]);
                }
                Err(CertifyError::IllPosed { side, at }) => {
                    let f = if side == Side::Lhs { &l } else { &r };
                    prop_assert!(f.eval_i64(at).is_err());
                }
            }
        }

        #[test]
        fn threshold_is_minimal(l in small_ratfn(), r in small_ratfn(), rel in relation()) {
            if let Some(t) = minimal_threshold(&l, &r, rel) {
                prop_assert!(t >= 1);
                prop_assert!(brute_oracle(&l, &r, rel, t..=t + 120).clean());
                if t > 1 {
                    prop_assert!(!brute_oracle(&l, &r, rel, t - 1..=t - 1).clean());
                }
                let c = certify_cmp(&l, &r, rel, RayDomain::new(t)).unwrap();
                prop_assert!(c.holds());
            }
        }
    }
}
