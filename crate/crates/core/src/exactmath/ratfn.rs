use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::poly::{poly_gcd, IntPoly};
use super::{ExactError, Rational};

/// Rational function `num/den` in Z(n).
///
/// Always normalized: `gcd(num, den) = 1` in Z[n] and `den` has a positive
/// leading coefficient. Normal forms are unique, so structural equality is
/// equality of rational functions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFn {
    num: IntPoly,
    den: IntPoly,
}

impl RatFn {
    pub fn new(num: IntPoly, den: IntPoly) -> Result<Self, ExactError> {
        if den.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = poly_gcd(&num, &den);
        let (mut num, mut den) = (
            num.div_exact(&g).expect("gcd divides numerator"),
            den.div_exact(&g).expect("gcd divides denominator"),
        );
        if den.leading().is_negative() {
            num = -num;
            den = -den;
        }
        Ok(Self { num, den })
    }

    pub fn zero() -> Self {
        Self {
            num: IntPoly::zero(),
            den: IntPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_poly(IntPoly::one())
    }

    pub fn from_poly(p: IntPoly) -> Self {
        Self {
            num: p,
            den: IntPoly::one(),
        }
    }

    pub fn from_int(c: impl Into<BigInt>) -> Self {
        Self::from_poly(IntPoly::constant(c))
    }

    pub fn from_rational(q: &Rational) -> Self {
        Self::new(
            IntPoly::constant(q.numer().clone()),
            IntPoly::constant(q.denom().clone()),
        )
        .expect("rational has nonzero denominator")
    }

    pub fn num(&self) -> &IntPoly {
        &self.num
    }

    pub fn den(&self) -> &IntPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The constant value, if this function does not depend on `n`.
    pub fn as_constant(&self) -> Option<Rational> {
        match (self.num.as_constant(), self.den.as_constant()) {
            (Some(a), Some(b)) => Some(Rational::new(a, b)),
            _ => None,
        }
    }

    pub fn as_poly(&self) -> Option<&IntPoly> {
        self.den.as_constant().filter(One::is_one).map(|_| &self.num)
    }

    pub fn checked_div(&self, rhs: &RatFn) -> Result<RatFn, ExactError> {
        if rhs.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        RatFn::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    pub fn recip(&self) -> Result<RatFn, ExactError> {
        RatFn::one().checked_div(self)
    }

    pub fn eval(&self, n: &BigInt) -> Result<Rational, ExactError> {
        let d = self.den.eval(n);
        if d.is_zero() {
            return Err(ExactError::Pole { at: n.clone() });
        }
        Ok(Rational::new(self.num.eval(n), d))
    }

    pub fn eval_i64(&self, n: i64) -> Result<Rational, ExactError> {
        self.eval(&BigInt::from(n))
    }

    pub fn scale(&self, k: &Rational) -> RatFn {
        self * &RatFn::from_rational(k)
    }
}

/// Evaluates `f` at the integer `n`; a zero denominator is reported as a pole
/// naming `n`.
pub fn ratfn_eval(f: &RatFn, n: &BigInt) -> Result<Rational, ExactError> {
    f.eval(n)
}

impl fmt::Display for RatFn {
    /// `3n-2` for polynomials, `(3n)/(18n^2-27n+10)` otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.as_constant().is_some_and(|c| c.is_one()) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFn({self})")
    }
}

impl Add for &RatFn {
    type Output = RatFn;
    fn add(self, rhs: &RatFn) -> RatFn {
        RatFn::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
        .expect("product of nonzero denominators")
    }
}

impl Sub for &RatFn {
    type Output = RatFn;
    fn sub(self, rhs: &RatFn) -> RatFn {
        self + &(-rhs)
    }
}

impl Mul for &RatFn {
    type Output = RatFn;
    fn mul(self, rhs: &RatFn) -> RatFn {
        RatFn::new(&self.num * &rhs.num, &self.den * &rhs.den)
            .expect("product of nonzero denominators")
    }
}

impl Neg for &RatFn {
    type Output = RatFn;
    fn neg(self) -> RatFn {
        RatFn {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RatFn {
    type Output = RatFn;
    fn neg(self) -> RatFn {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RatFn {
            type Output = RatFn;
            fn $m(self, rhs: RatFn) -> RatFn {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&RatFn> for RatFn {
            type Output = RatFn;
            fn $m(self, rhs: &RatFn) -> RatFn {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl From<IntPoly> for RatFn {
    fn from(p: IntPoly) -> Self {
        RatFn::from_poly(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    fn r(num: &[i64], den: &[i64]) -> RatFn {
        RatFn::new(p(num), p(den)).unwrap()
    }

    #[test]
    fn eval_example() {
        // 3n / ((3n-2)(6n-5)) at n = 3 is 9/91
        let f = r(&[0, 3], &[10, -27, 18]);
        assert_eq!(f.eval_i64(3).unwrap(), Rational::new(9.into(), 91.into()));
    }

    #[test]
    fn pole_names_root() {
        let f = r(&[1], &[-2, 1]);
        match f.eval_i64(2) {
            Err(ExactError::Pole { at }) => assert_eq!(at, BigInt::from(2)),
            other => panic!("expected pole, got {other:?}"),
        }
    }

    #[test]
    fn normalization_cancels_common_factor() {
        let f = r(&[-4, 6], &[-2, 3]);
        assert_eq!(f, RatFn::from_int(2));
        let g = r(&[1], &[2, -1]);
        assert_eq!(g.den(), &p(&[-2, 1]));
        assert_eq!(g.num(), &p(&[-1]));
    }

    #[test]
    fn subtraction_example() {
        // 14/((28n+6)(63n+10)) - 3/(63n+10) = -(84n+4)/((28n+6)(63n+10))
        let a = r(&[14], &[60, 658, 1764]);
        let b = r(&[3], &[10, 63]);
        let expect = r(&[-4, -84], &[60, 658, 1764]);
        assert_eq!(&a - &b, expect);
    }

    #[test]
    fn division_by_zero_function() {
        assert!(matches!(
            RatFn::one().checked_div(&RatFn::zero()),
            Err(ExactError::DivisionByZero)
        ));
        assert!(matches!(
            RatFn::new(IntPoly::one(), IntPoly::zero()),
            Err(ExactError::DivisionByZero)
        ));
    }

    #[test]
    fn display() {
        assert_eq!(r(&[0, 3], &[10, -27, 18]).to_string(), "(3n)/(18n^2-27n+10)");
        assert_eq!(RatFn::from_poly(p(&[-2, 3])).to_string(), "3n-2");
        assert_eq!(RatFn::zero().to_string(), "0");
    }
}
