//! Intersection numbers on the surfaces as rational functions of `n`.

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactmath::{Factored, IntPoly};
use crate::geometry::{Coord, FamilySpec, HxShape};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntersectionError {
    #[error("line {{{0} = {1} = 0}} is not on the surface")]
    LineNotOnSurface(Coord, Coord),
    #[error("family {0} has no explicit equation")]
    NoEquation(u32),
    #[error("family {0} has reducible H_x but no decomposition data")]
    MissingDecomposition(u32),
    #[error("line {{{0} = {1} = 0}} is not a component of H_x")]
    NotInHx(Coord, Coord),
}

/// `O(e)·O(g) = e·g·d / (a₀a₁a₂a₃)`.
pub fn section_product(f: &FamilySpec, e: &IntPoly, g: &IntPoly) -> Factored {
    if e.is_zero() || g.is_zero() {
        return Factored::zero();
    }
    Factored::from_factors(
        vec![e.clone(), g.clone(), f.degree.clone()],
        f.weights.0.to_vec(),
    )
    .expect("weights are nonzero")
}

/// The two coordinates spanning the line `{i = j = 0}`.
pub fn line_span(i: Coord, j: Coord) -> [Coord; 2] {
    let mut span = Coord::ALL.iter().copied().filter(|&c| c != i && c != j);
    [span.next().unwrap(), span.next().unwrap()]
}

/// `L·O(m) = m / (aᵤ·aᵥ)` for the line `L = {i = j = 0}` spanned by `u, v`.
pub fn line_product(
    f: &FamilySpec,
    i: Coord,
    j: Coord,
    m: &IntPoly,
) -> Result<Factored, IntersectionError> {
    let eq = f.equation.as_ref().ok_or(IntersectionError::NoEquation(f.no))?;
    if !eq.contains_line(i, j) {
        return Err(IntersectionError::LineNotOnSurface(i, j));
    }
    if m.is_zero() {
        return Ok(Factored::zero());
    }
    let [u, v] = line_span(i, j);
    Ok(
        Factored::from_factors(vec![m.clone()], vec![f.weight(u).clone(), f.weight(v).clone()])
            .expect("weights are nonzero"),
    )
}

/// `(−K)² = I²·d / (a₀a₁a₂a₃)`.
pub fn anticanonical_square(f: &FamilySpec) -> Factored {
    section_product(f, &f.index, &f.index)
}

/// Catalog data for `H_x = L + R` with `L` a coordinate line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionInput {
    /// `L = {x = c = 0}`, given as the pair `[x, c]`.
    pub line: [Coord; 2],
    pub l_dot_r: Factored,
    /// The vertex where `L` and `R` meet.
    pub meeting_point: Coord,
    pub source: String,
    #[serde(default)]
    pub reconstructed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecompositionData {
    pub line: [Coord; 2],
    pub l_dot_k: Factored,
    pub r_dot_k: Factored,
    pub l_dot_r: Factored,
    pub l_dot_hx: Factored,
    pub r_dot_hx: Factored,
    pub l_sq: Factored,
    pub r_sq: Factored,
    pub meeting_point: Coord,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "shape")]
#[allow(clippy::large_enum_variant)]
pub enum HxDecomposition {
    Irreducible,
    Reducible(DecompositionData),
}

pub fn hx_decomposition(f: &FamilySpec) -> Result<HxDecomposition, IntersectionError> {
    if f.hx_shape == HxShape::Irreducible {
        return Ok(HxDecomposition::Irreducible);
    }
    let input = f
        .ledger
        .as_ref()
        .and_then(|l| l.decomposition.as_ref())
        .ok_or(IntersectionError::MissingDecomposition(f.no))?;
    let [i, j] = input.line;
    let a0 = f.weight(Coord::X);
    let l_dot_k = line_product(f, i, j, &f.index)?;
    let r_dot_k = section_product(f, a0, &f.index).sub(&l_dot_k);
    let l_dot_hx = line_product(f, i, j, a0)?;
    let r_dot_hx = section_product(f, a0, a0).sub(&l_dot_hx);
    let l_sq = l_dot_hx.sub(&input.l_dot_r);
    let r_sq = r_dot_hx.sub(&input.l_dot_r);
    Ok(HxDecomposition::Reducible(DecompositionData {
        line: input.line,
        l_dot_k,
        r_dot_k,
        l_dot_r: input.l_dot_r.clone(),
        l_dot_hx,
        r_dot_hx,
        l_sq,
        r_sq,
        meeting_point: input.meeting_point,
    }))
}

/// Local computation of `L·R` for `L = {x = c = 0}` inside `H_x`.
///
/// Writing `F|_{x=0} = c·Q`, the residual curve `R = {x = Q = 0}` meets `L`
/// where `Q|_L = u^m`, i.e. at the vertex `p_v` of the other spanning
/// coordinate, and `L·R = m·aᵤ / (aᵤ·aᵥ) = m / aᵥ`. Returns `(p_v, L·R)`.
pub fn local_line_residual(
    f: &FamilySpec,
    line: [Coord; 2],
) -> Result<(Coord, Factored), IntersectionError> {
    let eq = f.equation.as_ref().ok_or(IntersectionError::NoEquation(f.no))?;
    let [x, c] = line;
    if !eq.contains_line(x, c) {
        return Err(IntersectionError::LineNotOnSurface(x, c));
    }
    let on_hx: Vec<_> = eq
        .monomials
        .iter()
        .filter(|m| m.coefficient_nonzero && !m.involves(x))
        .collect();
    let one = IntPoly::one();
    let restricted: Vec<_> = on_hx
        .iter()
        .filter(|m| m.exponent(c) == &one)
        .collect();
    let [u, v] = line_span(x, c);
    let not_in_hx = || IntersectionError::NotInHx(x, c);
    let [m] = restricted.as_slice() else {
        return Err(not_in_hx());
    };
    if m.involves(v) || !m.involves(u) {
        return Err(not_in_hx());
    }
    let mult = m.exponent(u).as_constant().and_then(|k| k.to_u64()).ok_or_else(not_in_hx)?;
    let value = Factored::from_factors(vec![IntPoly::constant(mult)], vec![f.weight(v).clone()])
        .expect("weights are nonzero");
    Ok((v, value))
}
