use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Univariate polynomial in the family parameter `n` with arbitrary-precision
/// integer coefficients.
///
/// `coeffs[i]` is the coefficient of `n^i`. Trailing zeros are always trimmed,
/// so the zero polynomial is the empty vector and a nonzero polynomial has a
/// nonzero leading coefficient.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    /// The polynomial `n`.
    pub fn var() -> Self {
        Self::from_coeffs(vec![BigInt::zero(), BigInt::one()])
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::from_coeffs(vec![c.into()])
    }

    /// `a·n + b`.
    pub fn linear(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        Self::from_coeffs(vec![b.into(), a.into()])
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    /// Builds from small coefficients, lowest power first.
    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, power: usize) -> BigInt {
        self.coeffs.get(power).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn as_constant(&self) -> Option<BigInt> {
        match self.coeffs.len() {
            0 => Some(BigInt::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn eval(&self, n: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * n + c;
        }
        acc
    }

    pub fn eval_i64(&self, n: i64) -> BigInt {
        self.eval(&BigInt::from(n))
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Substitution `n ← m + k`: the returned `q` satisfies `q(m) = p(m + k)`.
    pub fn shift(&self, k: &BigInt) -> Self {
        // Horner in the shifted variable: q = (...(c_d)(m+k) + c_{d-1})(m+k) + ...
        let step = Self::from_coeffs(vec![k.clone(), BigInt::one()]);
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &step) + &Self::constant(c.clone());
        }
        acc
    }

    /// Non-negative gcd of all coefficients (zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// `self / content`, sign chosen so the leading coefficient is positive.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.content();
        if self.leading().is_negative() {
            c = -c;
        }
        Self::from_coeffs(self.coeffs.iter().map(|x| x / &c).collect())
    }

    /// Flips the sign if needed so the leading coefficient is positive.
    pub fn with_positive_leading(self) -> Self {
        if self.leading().is_negative() {
            -self
        } else {
            self
        }
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// Pseudo-division: returns `(q, r, e)` with `lc(d)^e · self = q·d + r`
    /// and `deg r < deg d`.
    ///
    /// Panics if `d` is zero.
    pub fn pseudo_divmod(&self, d: &Self) -> (Self, Self, u32) {
        assert!(!d.is_zero(), "pseudo-division by the zero polynomial");
        let dd = d.degree().unwrap_or(0);
        let lc = d.leading();
        let mut r = self.clone();
        let mut q = Self::zero();
        let mut e = 0u32;
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let shift = rd - dd;
            let mut mono = vec![BigInt::zero(); shift + 1];
            mono[shift] = r.leading();
            let term = Self::from_coeffs(mono);
            q = &q.scale(&lc) + &term;
            r = &r.scale(&lc) - &(&term * d);
            e += 1;
        }
        (q, r, e)
    }

    /// Exact quotient in Z[n], if `d` divides `self` there.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (q, r, e) = self.pseudo_divmod(d);
        if !r.is_zero() {
            return None;
        }
        let f = d.leading().pow(e);
        let mut out = Vec::with_capacity(q.coeffs.len());
        for c in &q.coeffs {
            let (quo, rem) = c.div_rem(&f);
            if !rem.is_zero() {
                return None;
            }
            out.push(quo);
        }
        Some(Self::from_coeffs(out))
    }

    /// Division over Q: if `self = (q / k) · d` for some integer polynomial `q`
    /// and positive integer `k`, returns `(q, k)` in lowest terms.
    pub fn div_over_q(&self, d: &Self) -> Option<(Self, BigInt)> {
        if d.is_zero() {
            return None;
        }
        let (q, r, e) = self.pseudo_divmod(d);
        if !r.is_zero() {
            return None;
        }
        let mut k = d.leading().pow(e);
        let g = q.content().gcd(&k);
        let mut q = if g.is_zero() || g.is_one() {
            q
        } else {
            k /= &g;
            Self::from_coeffs(q.coeffs.iter().map(|c| c / &g).collect())
        };
        if k.is_negative() {
            k = -k;
            q = -q;
        }
        Some((q, k))
    }

    /// Cauchy bound: every complex root `z` satisfies `|z| < bound`.
    /// Returns zero for constants.
    pub fn cauchy_bound(&self) -> BigInt {
        if self.is_constant() {
            return BigInt::zero();
        }
        let lc = self.leading().abs();
        let max = self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_default();
        // 1 + ceil(max / lc)
        BigInt::one() + max.div_ceil(&lc)
    }

    /// Sign of `p(n)` for all sufficiently large `n`.
    pub fn eventual_sign(&self) -> Ordering {
        self.leading().cmp(&BigInt::zero())
    }
}

/// Greatest common divisor in Z[n]: content gcd times the primitive gcd,
/// normalized to a positive leading coefficient. `gcd(0, 0) = 0`.
pub fn poly_gcd(p: &IntPoly, q: &IntPoly) -> IntPoly {
    if p.is_zero() {
        return q.clone().with_positive_leading();
    }
    if q.is_zero() {
        return p.clone().with_positive_leading();
    }
    let content = p.content().gcd(&q.content());
    let (mut a, mut b) = (p.primitive_part(), q.primitive_part());
    if a.degree() < b.degree() {
        std::mem::swap(&mut a, &mut b);
    }
    // primitive remainder sequence
    while !b.is_zero() {
        let (_, r, _) = a.pseudo_divmod(&b);
        a = b;
        b = r.primitive_part();
    }
    let prim = if a.is_constant() {
        IntPoly::one()
    } else {
        a.primitive_part()
    };
    prim.scale(&content)
}

/// Resultant of two polynomials via a fraction-free determinant of the
/// Sylvester matrix. `Res(c, q) = c^deg(q)` for a constant `c`.
pub fn resultant(p: &IntPoly, q: &IntPoly) -> BigInt {
    if p.is_zero() || q.is_zero() {
        return BigInt::zero();
    }
    let (m, k) = (p.degree().unwrap(), q.degree().unwrap());
    if m == 0 {
        return p.leading().pow(k as u32);
    }
    if k == 0 {
        return q.leading().pow(m as u32);
    }
    let size = m + k;
    let mut mat = vec![vec![BigInt::zero(); size]; size];
    for row in 0..k {
        for (j, c) in p.coeffs.iter().rev().enumerate() {
            mat[row][row + j] = c.clone();
        }
    }
    for row in 0..m {
        for (j, c) in q.coeffs.iter().rev().enumerate() {
            mat[k + row][row + j] = c.clone();
        }
    }
    bareiss_det(mat)
}

fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

impl fmt::Display for IntPoly {
    /// Canonical text: `3n-2`, `12n^2-9n`, `-n`, `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (power, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { "-" } else { "+" })?;
            }
            first = false;
            if power == 0 || !mag.is_one() {
                write!(f, "{mag}")?;
            }
            match power {
                0 => {}
                1 => f.write_str("n")?,
                _ => write!(f, "n^{power}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

impl Neg for IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::from_coeffs(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        -self.clone()
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::from_coeffs((0..len).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::from_coeffs((0..len).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::from_coeffs(out)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for IntPoly {
            type Output = IntPoly;
            fn $m(self, rhs: IntPoly) -> IntPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&IntPoly> for IntPoly {
            type Output = IntPoly;
            fn $m(self, rhs: &IntPoly) -> IntPoly {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn eval_examples() {
        assert_eq!(p(&[-2, 3]).eval_i64(3), BigInt::from(7));
        assert_eq!(p(&[-9, 12]).eval_i64(0), BigInt::from(-9));
        assert_eq!(p(&[-5, 6]).eval_i64(1), BigInt::from(1));
    }

    #[test]
    fn zero_is_unique_and_trimmed() {
        assert_eq!(p(&[0, 0, 0]), IntPoly::zero());
        assert!(p(&[1, 2, 0]).leading() == BigInt::from(2));
        assert_eq!(&p(&[1, 2]) - &p(&[1, 2]), IntPoly::zero());
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(poly_gcd(&p(&[-2, 3]), &p(&[-4, 6])), p(&[-2, 3]));
        assert_eq!(poly_gcd(&p(&[-2, 3]), &p(&[-5, 6])), IntPoly::one());
        assert_eq!(poly_gcd(&IntPoly::zero(), &p(&[-3, 4])), p(&[-3, 4]));
        assert_eq!(poly_gcd(&p(&[6, 28]), &p(&[9, 42])), p(&[3, 14]));
        assert_eq!(poly_gcd(&p(&[2]), &p(&[-4, 8])), p(&[2]));
        assert_eq!(poly_gcd(&p(&[3, -1]), &IntPoly::zero()), p(&[-3, 1]));
    }

    #[test]
    fn shift_examples() {
        let one = BigInt::one();
        assert_eq!(p(&[0, 0, 1]).shift(&one), p(&[1, 2, 1]));
        assert_eq!(p(&[-2, 3]).shift(&BigInt::from(3)), p(&[7, 3]));
        assert_eq!(p(&[5]).shift(&BigInt::from(100)), p(&[5]));
    }

    #[test]
    fn display_forms() {
        assert_eq!(p(&[-2, 3]).to_string(), "3n-2");
        assert_eq!(p(&[0, -9, 12]).to_string(), "12n^2-9n");
        assert_eq!(p(&[0, -1]).to_string(), "-n");
        assert_eq!(IntPoly::zero().to_string(), "0");
        assert_eq!(p(&[1, 0, 1]).to_string(), "n^2+1");
    }

    #[test]
    fn exact_division() {
        assert_eq!(p(&[-9, 12]).div_exact(&p(&[-3, 4])), Some(p(&[3])));
        assert_eq!(p(&[-8, 12]).div_exact(&p(&[-3, 4])), None);
        assert_eq!(p(&[1, 1]).div_over_q(&p(&[2, 2])), Some((p(&[1]), BigInt::from(2))));
    }

    #[test]
    fn resultant_of_linears() {
        // Res(an+b, cn+d) = ad - bc
        assert_eq!(resultant(&p(&[-2, 3]), &p(&[-5, 6])), BigInt::from(-3));
        assert_eq!(resultant(&p(&[2]), &p(&[1, 3])), BigInt::from(2));
        assert_eq!(resultant(&p(&[-1, 0, 1]), &p(&[-1, 1])), BigInt::zero());
    }

    #[test]
    fn cauchy_bound_contains_roots() {
        // (n-3)(n+5) = n^2 + 2n - 15, bound 1 + 15 = 16
        let q = p(&[-15, 2, 1]);
        assert_eq!(q.cauchy_bound(), BigInt::from(16));
        assert!(q.eval_i64(3).is_zero());
    }
}
