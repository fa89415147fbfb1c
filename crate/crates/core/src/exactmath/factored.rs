use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::poly::IntPoly;
use super::ratfn::RatFn;
use super::{ExactError, Rational};

/// Display-oriented rational function that keeps factors as written, e.g.
/// `(3n)/((3n-2)(6n-5))`.
///
/// The value is `scale · ∏ num / ∏ den`. Every factor is nonconstant with a
/// positive leading coefficient and is primitive; the denominator constant is
/// folded into the first factor when rendered. A
/// denominator factor that divides the numerator over Q is cancelled.
/// Comparisons always go through [`Factored::value`].
#[derive(Clone)]
pub struct Factored {
    scale: Rational,
    num: Vec<IntPoly>,
    den: Vec<IntPoly>,
}

impl Factored {
    pub fn zero() -> Self {
        Self {
            scale: Rational::zero(),
            num: Vec::new(),
            den: Vec::new(),
        }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(c: impl Into<BigInt>) -> Self {
        Self::from_rational(Rational::from_integer(c.into()))
    }

    pub fn from_rational(q: Rational) -> Self {
        Self::build(q, Vec::new(), Vec::new())
    }

    pub fn from_poly(p: IntPoly) -> Self {
        Self::build(Rational::one(), vec![p], Vec::new())
    }

    /// `num / ∏ den` with the given factors kept as written.
    pub fn from_parts(num: IntPoly, den: Vec<IntPoly>) -> Result<Self, ExactError> {
        if den.iter().any(IntPoly::is_zero) {
            return Err(ExactError::DivisionByZero);
        }
        Ok(Self::build(Rational::one(), vec![num], den))
    }

    /// `∏ num / ∏ den`, cancelling shared factors.
    pub fn from_factors(num: Vec<IntPoly>, den: Vec<IntPoly>) -> Result<Self, ExactError> {
        if den.iter().any(IntPoly::is_zero) {
            return Err(ExactError::DivisionByZero);
        }
        Ok(Self::build(Rational::one(), num, den))
    }

    pub fn from_ratfn(f: &RatFn) -> Self {
        Self::build(Rational::one(), vec![f.num().clone()], vec![f.den().clone()])
    }

    fn build(mut scale: Rational, num: Vec<IntPoly>, den: Vec<IntPoly>) -> Self {
        if scale.is_zero() || num.iter().any(IntPoly::is_zero) {
            return Self::zero();
        }
        let mut nums = Vec::with_capacity(num.len());
        for f in num {
            if let Some(c) = f.as_constant() {
                scale *= Rational::from_integer(c);
            } else {
                let pp = f.primitive_part();
                scale *= Rational::new(f.leading(), pp.leading());
                nums.push(pp);
            }
        }
        let mut dens = Vec::with_capacity(den.len());
        for f in den {
            if let Some(c) = f.as_constant() {
                scale /= Rational::from_integer(c);
            } else {
                let pp = f.primitive_part();
                scale /= Rational::new(f.leading(), pp.leading());
                dens.push(pp);
            }
        }
        let mut out = Self {
            scale,
            num: nums,
            den: dens,
        };
        out.cancel();
        out
    }

    fn cancel(&mut self) {
        let mut i = 0;
        while i < self.den.len() {
            let f = &self.den[i];
            let pf = f.primitive_part();
            if let Some(j) = self.num.iter().position(|g| *g == pf) {
                self.scale /= Rational::from_integer(f.content());
                self.num.remove(j);
                self.den.remove(i);
                continue;
            }
            let product = self.num_product();
            if !product.is_constant() {
                if let Some((q, k)) = product.div_over_q(f) {
                    self.scale /= Rational::from_integer(k);
                    self.num.clear();
                    if let Some(c) = q.as_constant() {
                        self.scale *= Rational::from_integer(c);
                    } else {
                        let pp = q.primitive_part();
                        self.scale *= Rational::new(q.leading(), pp.leading());
                        self.num.push(pp);
                    }
                    self.den.remove(i);
                    continue;
                }
            }
            i += 1;
        }
    }

    fn num_product(&self) -> IntPoly {
        self.num.iter().fold(IntPoly::one(), |acc, f| &acc * f)
    }

    pub fn is_zero(&self) -> bool {
        self.scale.is_zero()
    }

    pub fn denominator_factors(&self) -> &[IntPoly] {
        &self.den
    }

    /// Integer numerator polynomial as rendered.
    pub fn numerator(&self) -> IntPoly {
        self.num_product().scale(self.scale.numer())
    }

    /// Integer constant in front of the denominator factors as rendered.
    pub fn denominator_constant(&self) -> BigInt {
        self.scale.denom().clone()
    }

    pub fn value(&self) -> RatFn {
        let den = self
            .den
            .iter()
            .fold(IntPoly::constant(self.scale.denom().clone()), |acc, f| &acc * f);
        RatFn::new(self.numerator(), den).expect("factors are nonzero")
    }

    pub fn eval_i64(&self, n: i64) -> Result<Rational, ExactError> {
        self.value().eval_i64(n)
    }

    pub fn neg(&self) -> Self {
        Self {
            scale: -self.scale.clone(),
            num: self.num.clone(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut num = self.num.clone();
        num.extend(rhs.num.iter().cloned());
        let mut den = self.den.clone();
        den.extend(rhs.den.iter().cloned());
        Self::build(&self.scale * &rhs.scale, num, den)
    }

    pub fn scale_by(&self, k: &Rational) -> Self {
        Self::build(&self.scale * k, self.num.clone(), self.den.clone())
    }

    pub fn recip(&self) -> Result<Self, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(Self::build(self.scale.recip(), self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, rhs: &Self) -> Result<Self, ExactError> {
        Ok(self.mul(&rhs.recip()?))
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Sum over the union of denominator factors; factors that agree up to a
    /// constant are matched rather than repeated.
    pub fn add(&self, rhs: &Self) -> Self {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let mut used = vec![false; self.den.len()];
        let mut rhs_scale = rhs.scale.clone();
        let mut only_rhs = Vec::new();
        for f in &rhs.den {
            let pf = f.primitive_part();
            let hit = (0..self.den.len()).find(|&j| !used[j] && self.den[j].primitive_part() == pf);
            match hit {
                Some(j) => {
                    used[j] = true;
                    // f = (cont f / cont a_j) · a_j
                    rhs_scale *= Rational::new(self.den[j].content(), f.content());
                }
                None => only_rhs.push(f.clone()),
            }
        }
        let only_lhs: Vec<&IntPoly> = self
            .den
            .iter()
            .zip(&used)
            .filter(|(_, u)| !**u)
            .map(|(f, _)| f)
            .collect();
        let l = self.scale.denom().lcm(rhs_scale.denom());
        let lhs_k = (&self.scale * Rational::from_integer(l.clone())).to_integer();
        let rhs_k = (&rhs_scale * Rational::from_integer(l.clone())).to_integer();
        let lhs_num = only_rhs
            .iter()
            .fold(self.num_product().scale(&lhs_k), |acc, f| &acc * f);
        let rhs_num = only_lhs
            .iter()
            .fold(rhs.num_product().scale(&rhs_k), |acc, f| &acc * *f);
        let mut den = self.den.clone();
        den.extend(only_rhs);
        Self::build(Rational::new(BigInt::one(), l), vec![&lhs_num + &rhs_num], den)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }
}

impl PartialEq for Factored {
    fn eq(&self, other: &Self) -> bool {
        self.value() == other.value()
    }
}

impl Eq for Factored {}

impl fmt::Display for Factored {
    /// `12n-9`, `1/2`, `(3n)/((3n-2)(6n-5))`, `(2)/(63n+10)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let numer = self.numerator();
        let dconst = self.scale.denom();
        if self.den.is_empty() {
            if dconst.is_one() {
                return write!(f, "{numer}");
            }
            if numer.is_constant() {
                return write!(f, "{}", self.scale);
            }
            return write!(f, "({numer})/({dconst})");
        }
        let mut pieces: Vec<String> = self.den.iter().map(ToString::to_string).collect();
        if !dconst.is_one() {
            pieces[0] = self.den[0].scale(dconst).to_string();
        }
        if pieces.len() == 1 {
            write!(f, "({numer})/({})", pieces[0])
        } else {
            let joined: String = pieces.iter().map(|p| format!("({p})")).collect();
            write!(f, "({numer})/({joined})")
        }
    }
}

impl fmt::Debug for Factored {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Factored({self})")
    }
}

impl From<IntPoly> for Factored {
    fn from(p: IntPoly) -> Self {
        Self::from_poly(p)
    }
}
