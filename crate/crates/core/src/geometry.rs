//! Weighted projective 3-spaces and the hypersurface families: well-formedness,
//! index, degree consistency, vertex membership and singular strata.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::certify::{certify_poly_nonneg, RayDomain, Verdict};
use crate::cylinder::LedgerData;
use crate::diagnostic::Diagnostic;
use crate::exactmath::{poly_gcd, resultant, IntPoly, RatFn};
use crate::stability::StabilityTable;

/// Homogeneous coordinates `x, y, z, t` of weights `a₀ ≤ a₁ ≤ a₂ ≤ a₃`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coord {
    X,
    Y,
    Z,
    T,
}

impl Coord {
    pub const ALL: [Coord; 4] = [Coord::X, Coord::Y, Coord::Z, Coord::T];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        ["x", "y", "z", "t"][self.index()]
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weights(pub [IntPoly; 4]);

impl Weights {
    pub fn get(&self, c: Coord) -> &IntPoly {
        &self.0[c.index()]
    }

    pub fn sum(&self) -> IntPoly {
        self.0.iter().fold(IntPoly::zero(), |acc, w| &acc + w)
    }

    pub fn product(&self) -> IntPoly {
        self.0.iter().fold(IntPoly::one(), |acc, w| &acc * w)
    }

    pub fn at(&self, n: i64) -> [BigInt; 4] {
        self.0.clone().map(|w| w.eval_i64(n))
    }
}

/// A monomial `x^e₀ y^e₁ z^e₂ t^e₃` with possibly `n`-dependent exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub exponents: [IntPoly; 4],
    /// Generic-member assumption: the coefficient is nonzero.
    pub coefficient_nonzero: bool,
}

impl Monomial {
    pub fn new(exponents: [IntPoly; 4]) -> Self {
        Self {
            exponents,
            coefficient_nonzero: true,
        }
    }

    pub fn from_i64s(e: [i64; 4]) -> Self {
        Self::new(e.map(IntPoly::constant))
    }

    pub fn exponent(&self, c: Coord) -> &IntPoly {
        &self.exponents[c.index()]
    }

    pub fn weighted_degree(&self, w: &Weights) -> IntPoly {
        self.exponents
            .iter()
            .zip(&w.0)
            .fold(IntPoly::zero(), |acc, (e, a)| &acc + &(e * a))
    }

    /// `true` if the exponent of `c` is the only nonzero one.
    pub fn is_pure_power_of(&self, c: Coord) -> bool {
        Coord::ALL
            .iter()
            .all(|&o| (o == c) != self.exponent(o).is_zero())
    }

    /// `true` if the monomial vanishes identically on `{c = 0}`, i.e. its
    /// exponent of `c` is a nonzero polynomial.
    pub fn involves(&self, c: Coord) -> bool {
        !self.exponent(c).is_zero()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut any = false;
        for c in Coord::ALL {
            let e = self.exponent(c);
            if e.is_zero() {
                continue;
            }
            any = true;
            f.write_str(c.name())?;
            match e.as_constant() {
                Some(k) if k.is_one() => {}
                Some(k) => write!(f, "^{k}")?,
                None => write!(f, "^{{{e}}}")?,
            }
        }
        if !any {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// Parses `-2x^{14n+2}y`, `wx`, `z^3` or `1` over the given variable names.
/// Returns the integer coefficient and one exponent per variable.
pub fn parse_term(text: &str, vars: &[char]) -> Result<(BigInt, Vec<IntPoly>), String> {
    let s: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut i = 0;
    let mut coeff = BigInt::one();
    match s.first() {
        Some('-') | Some('\u{2212}') => {
            coeff = -coeff;
            i += 1;
        }
        Some('+') => i += 1,
        _ => {}
    }
    let digits: String = s[i..].iter().take_while(|c| c.is_ascii_digit()).collect();
    if !digits.is_empty() {
        i += digits.len();
        coeff *= digits.parse::<BigInt>().map_err(|e| e.to_string())?;
        if s.get(i) == Some(&'*') {
            i += 1;
        }
    }
    let mut exps = vec![IntPoly::zero(); vars.len()];
    while i < s.len() {
        let v = vars
            .iter()
            .position(|&v| v == s[i])
            .ok_or_else(|| format!("unexpected {:?} in {text:?}", s[i]))?;
        i += 1;
        let e = if s.get(i) == Some(&'^') {
            i += 1;
            if s.get(i) == Some(&'{') {
                let close = s[i..]
                    .iter()
                    .position(|&c| c == '}')
                    .ok_or_else(|| format!("unclosed exponent in {text:?}"))?;
                let inner: String = s[i + 1..i + close].iter().collect();
                i += close + 1;
                crate::exactmath::parse_poly(&inner).map_err(|e| e.to_string())?
            } else {
                let d: String = s[i..].iter().take_while(|c| c.is_ascii_digit()).collect();
                if d.is_empty() {
                    return Err(format!("missing exponent in {text:?}"));
                }
                i += d.len();
                IntPoly::constant(d.parse::<BigInt>().map_err(|e| e.to_string())?)
            }
        } else {
            IntPoly::one()
        };
        exps[v] = &exps[v] + &e;
    }
    if digits.is_empty() && exps.iter().all(IntPoly::is_zero) {
        return Err(format!("empty term {text:?}"));
    }
    Ok((coeff, exps))
}

/// Renders a term in the syntax accepted by [`parse_term`].
pub fn term_text(coeff: &BigInt, exps: &[IntPoly], vars: &[char]) -> String {
    let mut out = String::new();
    let body: String = vars
        .iter()
        .zip(exps)
        .filter(|(_, e)| !e.is_zero())
        .map(|(v, e)| match e.as_constant() {
            Some(k) if k.is_one() => v.to_string(),
            Some(k) => format!("{v}^{k}"),
            None => format!("{v}^{{{e}}}"),
        })
        .collect();
    if coeff.is_negative() {
        out.push('-');
    }
    let mag = coeff.abs();
    if !mag.is_one() || body.is_empty() {
        out.push_str(&mag.to_string());
    }
    out + &body
}

const XYZT: [char; 4] = ['x', 'y', 'z', 't'];

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum MonomialRepr {
    Text(String),
    Full {
        monomial: String,
        coefficient_nonzero: bool,
    },
}

impl std::str::FromStr for Monomial {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (c, e) = parse_term(s, &XYZT)?;
        if !c.is_one() {
            return Err(format!("monomial {s:?} carries a coefficient"));
        }
        Ok(Monomial::new(e.try_into().expect("four exponents")))
    }
}

impl Serialize for Monomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.coefficient_nonzero {
            MonomialRepr::Text(self.to_string()).serialize(s)
        } else {
            MonomialRepr::Full {
                monomial: self.to_string(),
                coefficient_nonzero: false,
            }
            .serialize(s)
        }
    }
}

impl<'de> Deserialize<'de> for Monomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        Ok(match MonomialRepr::deserialize(d)? {
            MonomialRepr::Text(t) => t.parse().map_err(D::Error::custom)?,
            MonomialRepr::Full {
                monomial,
                coefficient_nonzero,
            } => Monomial {
                coefficient_nonzero,
                ..monomial.parse().map_err(D::Error::custom)?
            },
        })
    }
}

/// Whether an explicit equation lists the general member's monomials or a
/// normal form after a coordinate change.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoordinateConvention {
    General,
    Adapted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Equation {
    pub monomials: Vec<Monomial>,
    pub coordinates: CoordinateConvention,
    pub source: String,
    #[serde(default)]
    pub reconstructed: bool,
}

impl Equation {
    pub fn pure_power_present(&self, c: Coord) -> bool {
        self.monomials
            .iter()
            .any(|m| m.coefficient_nonzero && m.is_pure_power_of(c))
    }

    /// `true` if the coordinate line `{c₁ = c₂ = 0}` lies on the surface.
    pub fn contains_line(&self, c1: Coord, c2: Coord) -> bool {
        self.monomials
            .iter()
            .all(|m| !m.coefficient_nonzero || m.involves(c1) || m.involves(c2))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HxShape {
    Irreducible,
    TwoComponents,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumFixture {
    pub coords: Vec<Coord>,
    pub order: IntPoly,
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<IntPoly>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MovingSystem {
    pub monomials: Vec<Monomial>,
    pub degree: IntPoly,
}

/// One row of the singular-locus table, with the moving linear system used
/// away from `H_x`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularLocus {
    pub strata: Vec<StratumFixture>,
    pub moving_system: MovingSystem,
    pub source: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnownAlpha {
    pub value: RatFn,
    pub citation: String,
}

/// One infinite series of hypersurfaces `S_d ⊂ P(a₀, a₁, a₂, a₃)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub no: u32,
    pub weights: Weights,
    pub degree: IntPoly,
    /// Index as stated; validated against `Σaᵢ − d`.
    pub index: IntPoly,
    pub ray: RayDomain,
    pub source: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equation: Option<Equation>,
    pub hx_shape: HxShape,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub singular_locus: Option<SingularLocus>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ledger: Option<LedgerData>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub known_alpha: Option<KnownAlpha>,
    pub stability: StabilityTable,
}

impl FamilySpec {
    pub fn weight(&self, c: Coord) -> &IntPoly {
        self.weights.get(c)
    }

    pub fn derived_index(&self) -> IntPoly {
        compute_index(&self.weights, &self.degree)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("weight {coord} = {weight} is not positive at n = {at}")]
    NonpositiveWeight { coord: Coord, weight: IntPoly, at: i64 },
    #[error("gcd of {polys} has no usable resultant modulus")]
    GcdProfileUnavailable { polys: String },
    #[error("catalog defect: {0}")]
    CatalogDefect(String),
    #[error("singular strata mismatch: missing {missing:?}, unexpected {unexpected:?}")]
    StrataMismatch {
        missing: Vec<String>,
        unexpected: Vec<String>,
    },
    #[error("no singular-locus data for family {0}")]
    MissingSingularLocus(u32),
}

/// `I = a₀ + a₁ + a₂ + a₃ − d`.
pub fn compute_index(w: &Weights, d: &IntPoly) -> IntPoly {
    &w.sum() - d
}

pub fn check_weights_positive(w: &Weights, ray: RayDomain) -> Result<(), GeometryError> {
    for c in Coord::ALL {
        let cert = certify_poly_nonneg(w.get(c), ray, true);
        if let Some(at) = cert.witness {
            return Err(GeometryError::NonpositiveWeight {
                coord: c,
                weight: w.get(c).clone(),
                at,
            });
        }
    }
    Ok(())
}

const MAX_MODULUS: u64 = 10_000_000;

/// Pointwise gcd of several integer polynomials.
///
/// For every integer `n`, `gcd(p₁(n), …, p_k(n)) = |g(n)| · h(n mod R)` where
/// `g` is the gcd in Z[n] and `R` divides every resultant of the reduced
/// polynomials `pᵢ/g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GcdProfile {
    pub symbolic: IntPoly,
    pub modulus: u64,
    residue_factor: Vec<u64>,
}

impl GcdProfile {
    pub fn residue_factor(&self, n: i64) -> u64 {
        self.residue_factor[n.rem_euclid(self.modulus as i64) as usize]
    }

    pub fn at(&self, n: i64) -> BigInt {
        self.symbolic.eval_i64(n).abs() * BigInt::from(self.residue_factor(n))
    }

    /// Residues `r mod R` with `h(r) > 1`.
    pub fn exceptional_residues(&self) -> Vec<(u64, u64)> {
        self.residue_factor
            .iter()
            .enumerate()
            .filter(|(_, &h)| h > 1)
            .map(|(r, &h)| (r as u64, h))
            .collect()
    }
}

pub fn gcd_profile(polys: &[&IntPoly]) -> Result<GcdProfile, GeometryError> {
    let g = polys
        .iter()
        .fold(IntPoly::zero(), |acc, p| poly_gcd(&acc, p));
    let reduced: Vec<IntPoly> = polys
        .iter()
        .filter(|p| !p.is_zero())
        .map(|p| p.div_exact(&g).expect("gcd divides"))
        .collect();
    let describe = || {
        polys
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(", ")
    };
    if reduced.len() < 2 {
        return Ok(GcdProfile {
            symbolic: g,
            modulus: 1,
            residue_factor: vec![1],
        });
    }
    let mut modulus = BigInt::zero();
    for i in 0..reduced.len() {
        for j in i + 1..reduced.len() {
            let (p, q) = (&reduced[i], &reduced[j]);
            // two constants: the resultant convention (1) loses their common factor
            let r = match (p.as_constant(), q.as_constant()) {
                (Some(a), Some(b)) => a.gcd(&b),
                _ => resultant(p, q),
            };
            modulus = modulus.gcd(&r);
        }
    }
    let modulus = modulus
        .to_u64()
        .filter(|&m| m > 0 && m <= MAX_MODULUS)
        .ok_or_else(|| GeometryError::GcdProfileUnavailable { polys: describe() })?;
    let big_mod = BigInt::from(modulus);
    let residue_factor = (0..modulus)
        .map(|r| {
            let rb = BigInt::from(r);
            reduced
                .iter()
                .fold(big_mod.clone(), |acc, p| acc.gcd(&p.eval(&rb)))
                .to_u64()
                .expect("divides the modulus")
        })
        .collect();
    let residue_factor: Vec<u64> = residue_factor;
    let period = (1..=modulus)
        .filter(|p| modulus % p == 0)
        .find(|&p| (0..modulus).all(|r| residue_factor[r as usize] == residue_factor[(r % p) as usize]))
        .unwrap_or(modulus);
    Ok(GcdProfile {
        symbolic: g,
        modulus: period,
        residue_factor: residue_factor[..period as usize].to_vec(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GcdConditionKind {
    /// `gcd(aᵢ, aⱼ, aₖ) = 1`
    Triple,
    /// `gcd(aᵢ, aⱼ) | d`
    Pair,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GcdCondition {
    pub kind: GcdConditionKind,
    pub coords: Vec<Coord>,
    pub symbolic_gcd: IntPoly,
    pub modulus: u64,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<i64>,
    pub detail: String,
    #[serde(skip)]
    profile: GcdProfile,
}

impl GcdCondition {
    /// Per-`n` verdict read off the symbolic profile.
    pub fn holds_at(&self, n: i64, d: &IntPoly) -> bool {
        let g = self.profile.at(n);
        match self.kind {
            GcdConditionKind::Triple => g.is_one(),
            GcdConditionKind::Pair => {
                let dn = d.eval_i64(n);
                if g.is_zero() {
                    dn.is_zero()
                } else {
                    (dn % g).is_zero()
                }
            }
        }
    }
}

/// Well-formedness certificate: every triple of weights is coprime and every
/// pairwise gcd divides the degree, for all integers on the ray.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WellFormedness {
    pub ray: RayDomain,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<i64>,
    pub conditions: Vec<GcdCondition>,
    #[serde(skip)]
    degree: IntPoly,
}

impl WellFormedness {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }

    /// Symbolic verdict at a single `n`.
    pub fn holds_at(&self, n: i64) -> bool {
        self.conditions.iter().all(|c| c.holds_at(n, &self.degree))
    }

    pub fn failures(&self) -> impl Iterator<Item = &GcdCondition> {
        self.conditions.iter().filter(|c| c.verdict == Verdict::Fails)
    }
}

pub fn check_well_formed(
    w: &Weights,
    d: &IntPoly,
    ray: RayDomain,
) -> Result<WellFormedness, GeometryError> {
    check_weights_positive(w, ray)?;
    let mut conditions = Vec::new();
    for (i, j, k) in [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)] {
        let coords = vec![Coord::ALL[i], Coord::ALL[j], Coord::ALL[k]];
        let profile = gcd_profile(&[&w.0[i], &w.0[j], &w.0[k]])?;
        conditions.push(triple_condition(coords, profile, ray));
    }
    for i in 0..4 {
        for j in i + 1..4 {
            let coords = vec![Coord::ALL[i], Coord::ALL[j]];
            let profile = gcd_profile(&[&w.0[i], &w.0[j]])?;
            conditions.push(pair_condition(coords, profile, d, ray));
        }
    }
    let witness = conditions.iter().filter_map(|c| c.witness).min();
    Ok(WellFormedness {
        ray,
        verdict: if witness.is_some() {
            Verdict::Fails
        } else {
            Verdict::Holds
        },
        witness,
        conditions,
        degree: d.clone(),
    })
}

fn first_in_class(n0: i64, modulus: u64, residue: u64) -> i64 {
    let m = modulus as i64;
    n0 + (residue as i64 - n0).rem_euclid(m)
}

fn triple_condition(coords: Vec<Coord>, profile: GcdProfile, ray: RayDomain) -> GcdCondition {
    let g = &profile.symbolic;
    let (witness, detail) = match g.as_constant() {
        None => {
            let n = (ray.n0..)
                .find(|&n| !profile.at(n).is_one())
                .expect("a nonconstant gcd grows without bound");
            (Some(n), format!("symbolic gcd {g} is not constant"))
        }
        Some(c) if !c.abs().is_one() => (Some(ray.n0), format!("constant gcd {c}")),
        Some(_) => {
            let bad = profile.exceptional_residues();
            let witness = bad
                .iter()
                .map(|&(r, _)| first_in_class(ray.n0, profile.modulus, r))
                .min();
            let detail = if bad.is_empty() {
                format!("coprime for every residue mod {}", profile.modulus)
            } else {
                format!(
                    "common factor for n mod {} in {:?}",
                    profile.modulus,
                    bad.iter().map(|b| b.0).collect::<Vec<_>>()
                )
            };
            (witness, detail)
        }
    };
    GcdCondition {
        kind: GcdConditionKind::Triple,
        coords,
        symbolic_gcd: g.clone(),
        modulus: profile.modulus,
        verdict: if witness.is_some() {
            Verdict::Fails
        } else {
            Verdict::Holds
        },
        witness,
        detail,
        profile,
    }
}

fn pair_condition(
    coords: Vec<Coord>,
    profile: GcdProfile,
    d: &IntPoly,
    ray: RayDomain,
) -> GcdCondition {
    let g = profile.symbolic.clone();
    let pointwise = |n: i64| {
        let gv = profile.at(n);
        let dn = d.eval_i64(n);
        if gv.is_zero() {
            dn.is_zero()
        } else {
            (dn % gv).is_zero()
        }
    };
    let (witness, detail) = match d.div_over_q(&g) {
        None => {
            let n = (ray.n0..)
                .find(|&n| !pointwise(n))
                .expect("a non-divisor eventually fails pointwise");
            (Some(n), format!("{g} does not divide {d}"))
        }
        Some((_, k)) => {
            // d = (q/k)·g, so the condition depends only on n mod k·R away
            // from the finitely many roots of g.
            let period = (k * BigInt::from(profile.modulus))
                .to_i64()
                .expect("small period");
            let mut witness = None;
            for n in ray.n0..ray.n0 + period {
                let mut rep = n;
                while g.eval_i64(rep).is_zero() {
                    if !pointwise(rep) {
                        witness = witness.or(Some(rep));
                    }
                    rep += period;
                }
                if !pointwise(rep) {
                    witness = Some(witness.map_or(n, |w: i64| w.min(n)));
                    break;
                }
            }
            let detail = match witness {
                None => format!("gcd divides {d} for every residue mod {period}"),
                Some(n) => format!("gcd {} does not divide {} at n = {n}", profile.at(n), d.eval_i64(n)),
            };
            (witness, detail)
        }
    };
    GcdCondition {
        kind: GcdConditionKind::Pair,
        coords,
        symbolic_gcd: g,
        modulus: profile.modulus,
        verdict: if witness.is_some() {
            Verdict::Fails
        } else {
            Verdict::Holds
        },
        witness,
        detail,
        profile,
    }
}

/// Direct integer check of well-formedness at a single `n`.
pub fn well_formed_at(w: &Weights, d: &IntPoly, n: i64) -> bool {
    let a = w.at(n);
    let dn = d.eval_i64(n);
    let triples_ok = [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]
        .iter()
        .all(|&(i, j, k)| a[i].gcd(&a[j]).gcd(&a[k]).is_one());
    let pairs_ok = (0..4).all(|i| {
        (i + 1..4).all(|j| {
            let g = a[i].gcd(&a[j]);
            if g.is_zero() {
                dn.is_zero()
            } else {
                (&dn % g).is_zero()
            }
        })
    });
    triples_ok && pairs_ok
}

pub fn check_degree_consistency(f: &FamilySpec) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    if let Some(eq) = &f.equation {
        for (i, m) in eq.monomials.iter().enumerate() {
            let deg = m.weighted_degree(&f.weights);
            if deg != f.degree {
                out.push(Diagnostic::error(
                    Some(f.no),
                    "degree-consistency",
                    format!("equation.monomials[{i}]"),
                    format!("monomial {m} has degree {deg} != {}", f.degree),
                ));
            }
        }
    }
    if let Some(sl) = &f.singular_locus {
        for (i, m) in sl.moving_system.monomials.iter().enumerate() {
            let deg = m.weighted_degree(&f.weights);
            if deg != sl.moving_system.degree {
                out.push(Diagnostic::error(
                    Some(f.no),
                    "degree-consistency",
                    format!("singular_locus.moving_system.monomials[{i}]"),
                    format!(
                        "monomial {m} has degree {deg} != deg(M) = {}",
                        sl.moving_system.degree
                    ),
                ));
            }
        }
    }
    out
}

/// Whether the coordinate vertex lies on the general member, possibly
/// depending on `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    OnSurface,
    OffSurface,
    PerN(PerNCondition),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PerNCondition {
    /// Off the surface exactly when `n mod modulus` is in `residues`.
    OffForResidues { modulus: u64, residues: Vec<u64> },
    /// Off the surface exactly at the listed `n` of the ray.
    OffAt(Vec<i64>),
}

/// The vertex `p_c` is off the general member iff the pure power `c^{d/a}`
/// has integral exponent, i.e. `a | d`.
pub fn vertex_membership(f: &FamilySpec, c: Coord) -> Result<Membership, GeometryError> {
    let a = f.weight(c);
    let d = &f.degree;
    let ray = f.ray;
    let membership = if d.div_exact(a).is_some() {
        Membership::OffSurface
    } else if let Some(k) = a.as_constant() {
        let k = k.abs().to_u64().ok_or_else(|| {
            GeometryError::CatalogDefect(format!("weight {a} is too large"))
        })?;
        let residues: Vec<u64> = (0..k)
            .filter(|&r| (d.eval_i64(r as i64) % BigInt::from(k)).is_zero())
            .collect();
        classify_residues(k, residues)
    } else if let Some((q, k)) = d.div_over_q(a) {
        // d = (q/k)·a: a(n) | d(n) iff k | q(n) where a(n) != 0
        let k64 = k.to_u64().expect("small denominator");
        let residues: Vec<u64> = (0..k64)
            .filter(|&r| (q.eval_i64(r as i64) % &k).is_zero())
            .collect();
        classify_residues(k64, residues)
    } else {
        let (_, rem, _) = d.pseudo_divmod(a);
        // a(n) | d(n) forces a(n) | rem(n); past these bounds |a(n)| > |rem(n)| > 0.
        let bound = [&(a - &rem), &(a + &rem), &rem]
            .iter()
            .map(|p| p.cauchy_bound().to_i64().unwrap_or(i64::MAX))
            .max()
            .unwrap_or(0);
        let off: Vec<i64> = (ray.n0..=bound.max(ray.n0))
            .filter(|&n| {
                // weight one is not a singular vertex
                let av = a.eval_i64(n);
                av.abs() > BigInt::one() && (d.eval_i64(n) % av).is_zero()
            })
            .collect();
        if off.is_empty() {
            Membership::OnSurface
        } else {
            Membership::PerN(PerNCondition::OffAt(off))
        }
    };
    if let Some(eq) = &f.equation {
        let present = eq.pure_power_present(c);
        if present && membership != Membership::OffSurface {
            return Err(GeometryError::CatalogDefect(format!(
                "family {}: pure power of {c} listed but {a} does not divide {d}",
                f.no
            )));
        }
        if eq.coordinates == CoordinateConvention::General
            && membership == Membership::OffSurface
            && !present
        {
            return Err(GeometryError::CatalogDefect(format!(
                "family {}: {a} divides {d} but no pure power of {c} is listed",
                f.no
            )));
        }
    }
    Ok(membership)
}

fn classify_residues(modulus: u64, residues: Vec<u64>) -> Membership {
    if residues.is_empty() {
        Membership::OnSurface
    } else if residues.len() as u64 == modulus {
        Membership::OffSurface
    } else {
        Membership::PerN(PerNCondition::OffForResidues { modulus, residues })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StratumKind {
    Vertex(Coord),
    EdgePoint(Coord, Coord),
}

impl StratumKind {
    pub fn coords(&self) -> Vec<Coord> {
        match *self {
            StratumKind::Vertex(c) => vec![c],
            StratumKind::EdgePoint(a, b) => vec![a, b],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Presence {
    Always,
    /// Present only for some `n`; the note says which.
    Conditional(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SingularStratum {
    pub kind: StratumKind,
    pub order: IntPoly,
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<IntPoly>,
    pub presence: Presence,
}

/// `p_y` for vertices, `p_{14n+3}` or `p_2` for points of order `r` on an edge.
pub fn stratum_label(kind: &StratumKind, order: &IntPoly) -> String {
    match kind {
        StratumKind::Vertex(c) => format!("p_{c}"),
        StratumKind::EdgePoint(..) => match order.as_constant() {
            Some(k) => format!("p_{k}"),
            None => format!("p_{{{order}}}"),
        },
    }
}

/// Vertices on the surface with weight > 1 and edge points whose pairwise
/// weight gcd is > 1, in coordinate order.
pub fn singular_strata(f: &FamilySpec) -> Result<Vec<SingularStratum>, GeometryError> {
    let mut out = Vec::new();
    for c in Coord::ALL {
        let a = f.weight(c);
        if a.as_constant().is_some_and(|k| k.is_one()) {
            continue;
        }
        let presence = match vertex_membership(f, c)? {
            Membership::OnSurface => Presence::Always,
            Membership::OffSurface => continue,
            Membership::PerN(cond) => Presence::Conditional(match cond {
                PerNCondition::OffForResidues { modulus, residues } => {
                    format!("on the surface unless n mod {modulus} in {residues:?}")
                }
                PerNCondition::OffAt(ns) => format!("on the surface except n in {ns:?}"),
            }),
        };
        let kind = StratumKind::Vertex(c);
        out.push(SingularStratum {
            label: stratum_label(&kind, a),
            kind,
            order: a.clone(),
            count: None,
            presence,
        });
    }
    for i in 0..4 {
        for j in i + 1..4 {
            let (ci, cj) = (Coord::ALL[i], Coord::ALL[j]);
            let profile = gcd_profile(&[f.weight(ci), f.weight(cj)])?;
            let kind = StratumKind::EdgePoint(ci, cj);
            let g = &profile.symbolic;
            if g.as_constant().is_none_or(|k| k.abs() > BigInt::one()) {
                let count = fixture_count(f, &kind);
                out.push(SingularStratum {
                    label: stratum_label(&kind, g),
                    kind,
                    order: g.clone(),
                    count,
                    presence: Presence::Always,
                });
            } else {
                for (r, h) in profile.exceptional_residues() {
                    let order = IntPoly::constant(h);
                    out.push(SingularStratum {
                        label: stratum_label(&kind, &order),
                        kind: kind.clone(),
                        order,
                        count: None,
                        presence: Presence::Conditional(format!(
                            "only for n = {r} mod {}",
                            profile.modulus
                        )),
                    });
                }
            }
        }
    }
    Ok(out)
}

fn fixture_count(f: &FamilySpec, kind: &StratumKind) -> Option<IntPoly> {
    let coords = kind.coords();
    f.singular_locus
        .as_ref()?
        .strata
        .iter()
        .find(|s| s.coords == coords)
        .and_then(|s| s.count.clone())
}

/// Compares the unconditional strata with the catalog's singular-locus row
/// (set equality on coordinates, order and label).
pub fn compare_strata(
    f: &FamilySpec,
    computed: &[SingularStratum],
) -> Result<(), GeometryError> {
    let sl = f.singular_locus.as_ref().ok_or(GeometryError::MissingSingularLocus(f.no))?;
    let key = |coords: &[Coord], order: &IntPoly, label: &str| {
        let names: Vec<&str> = coords.iter().map(|c| c.name()).collect();
        format!("{label} [{}] order {order}", names.join(","))
    };
    let mut got: Vec<String> = computed
        .iter()
        .filter(|s| s.presence == Presence::Always)
        .map(|s| key(&s.kind.coords(), &s.order, &s.label))
        .collect();
    let mut want: Vec<String> = sl
        .strata
        .iter()
        .map(|s| key(&s.coords, &s.order, &s.label))
        .collect();
    got.sort();
    want.sort();
    let missing: Vec<String> = want.iter().filter(|w| !got.contains(w)).cloned().collect();
    let unexpected: Vec<String> = got.iter().filter(|g| !want.contains(g)).cloned().collect();
    if missing.is_empty() && unexpected.is_empty() && got.len() == want.len() {
        Ok(())
    } else {
        Err(GeometryError::StrataMismatch {
            missing,
            unexpected,
        })
    }
}

/// Singular strata validated against the catalog row.
pub fn validated_strata(f: &FamilySpec) -> Result<Vec<SingularStratum>, GeometryError> {
    let strata = singular_strata(f)?;
    compare_strata(f, &strata)?;
    Ok(strata)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::parse_poly;
    use proptest::prelude::*;

    fn w(a: [&str; 4]) -> Weights {
        Weights(a.map(|s| parse_poly(s).unwrap()))
    }

    fn p(s: &str) -> IntPoly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn well_formed_examples() {
        let r = RayDomain::new(1);
        let f1 = check_well_formed(&w(["1", "3n-2", "4n-3", "6n-5"]), &p("12n-9"), r).unwrap();
        assert!(f1.holds());
        let f8 = check_well_formed(&w(["2", "6n-3", "8n-4", "12n-7"]), &p("24n-12"), r).unwrap();
        assert!(f8.holds());
        let bad = check_well_formed(&w(["2", "2", "3", "5"]), &p("11"), r).unwrap();
        assert_eq!(bad.verdict, Verdict::Fails);
        assert_eq!(bad.witness, Some(1));
    }

    #[test]
    fn residue_dependent_failure() {
        // gcd(28n+6, 63n+10) = 2 exactly for even n, and 126n+27 is odd
        let r = RayDomain::new(1);
        let wf = check_well_formed(&w(["7", "28n+6", "42n+9", "63n+10"]), &p("126n+27"), r).unwrap();
        assert_eq!(wf.verdict, Verdict::Fails);
        assert_eq!(wf.witness, Some(2));
        assert!(wf.holds_at(1) && !wf.holds_at(2) && wf.holds_at(3));
        let failing: Vec<_> = wf.failures().map(|c| c.coords.clone()).collect();
        assert_eq!(failing, vec![vec![Coord::Y, Coord::T]]);
    }

    #[test]
    fn index_examples() {
        assert_eq!(compute_index(&w(["1", "3n-2", "4n-3", "6n-5"]), &p("12n-9")), p("n"));
        assert_eq!(compute_index(&w(["7", "28n+6", "42n+9", "63n+10"]), &p("126n+27")), p("7n+5"));
        assert_eq!(compute_index(&w(["1", "1", "1", "1"]), &p("4")), IntPoly::zero());
    }

    #[test]
    fn gcd_profile_matches_integers() {
        let a = p("28n+6");
        let b = p("63n+10");
        let prof = gcd_profile(&[&a, &b]).unwrap();
        // the resultant is 98, but 7 never divides 28n+6
        assert_eq!(prof.modulus, 2);
        for n in 1..200 {
            assert_eq!(prof.at(n), a.eval_i64(n).gcd(&b.eval_i64(n)));
        }
    }

    #[test]
    fn nonpositive_weight_rejected() {
        let err = check_well_formed(&w(["1", "n-2", "n", "n"]), &p("3n"), RayDomain::new(1));
        assert!(matches!(err, Err(GeometryError::NonpositiveWeight { coord: Coord::Y, at: 1, .. })));
    }

    fn linear() -> impl Strategy<Value = IntPoly> {
        (0i64..9, 1i64..20).prop_map(|(a, b)| IntPoly::from_i64s(&[b, a]))
    }

    proptest! {
        #[test]
        fn symbolic_agrees_with_direct(
            ws in prop::array::uniform4(linear()),
            dc in (0i64..40, 1i64..60),
        ) {
            let weights = Weights(ws);
            let d = IntPoly::from_i64s(&[dc.1, dc.0]);
            let ray = RayDomain::new(1);
            let wf = check_well_formed(&weights, &d, ray).unwrap();
            let mut all = true;
            for n in 1..=60 {
                let direct = well_formed_at(&weights, &d, n);
                prop_assert_eq!(wf.holds_at(n), direct, "n = {}", n);
                all &= direct;
            }
            if wf.holds() {
                prop_assert!(all);
            } else {
                let wit = wf.witness.unwrap();
                prop_assert!(!well_formed_at(&weights, &d, wit));
            }
        }

        #[test]
        fn pairwise_profile_is_exact(a in linear(), b in linear(), c in linear()) {
            let prof = gcd_profile(&[&a, &b, &c]).unwrap();
            for n in 0..80 {
                let direct = a.eval_i64(n).gcd(&b.eval_i64(n)).gcd(&c.eval_i64(n));
                prop_assert_eq!(prof.at(n), direct);
            }
        }
    }
}
