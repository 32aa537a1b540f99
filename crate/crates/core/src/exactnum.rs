//! Exact scalars and dense univariate polynomials over the rationals.
//!
//! Integers are [`num_bigint::BigInt`] and rationals are
//! [`num_rational::BigRational`], which is always stored reduced with a
//! positive denominator. [`Poly`] is a dense coefficient vector whose zero
//! polynomial is the empty vector.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type BigIntValue = BigInt;
pub type RationalValue = BigRational;

/// Builds `num/den` in lowest terms with a positive denominator.
pub fn rat_make(num: BigInt, den: BigInt) -> Result<BigRational> {
    if den.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    Ok(BigRational::new(num, den))
}

pub fn rat_int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Parses `"-4"`, `"7/3"`, `"-2/3"`. A Unicode minus sign is accepted.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim().replace('\u{2212}', "-");
    let bad = || Error::Parse {
        pos: 0,
        msg: format!("invalid rational '{s}'"),
    };
    match s.split_once('/') {
        None => Ok(BigRational::from_integer(parse_bigint(&s)?)),
        Some((n, d)) => {
            let n = n.trim().parse::<BigInt>().map_err(|_| bad())?;
            let d = d.trim().parse::<BigInt>().map_err(|_| bad())?;
            rat_make(n, d)
        }
    }
}

pub fn parse_bigint(s: &str) -> Result<BigInt> {
    let s = s.trim().replace('\u{2212}', "-");
    let digits = s.strip_prefix(['-', '+']).unwrap_or(&s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse {
            pos: 0,
            msg: format!("invalid integer '{s}'"),
        });
    }
    s.parse::<BigInt>().map_err(|e| Error::Parse {
        pos: 0,
        msg: format!("invalid integer '{s}': {e}"),
    })
}

/// Least common multiple of the denominators of `values` (1 for an empty slice).
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a BigRational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Dense polynomial `c[0] + c[1] x + ... + c[d] x^d` with rational coefficients.
///
/// The leading stored coefficient is never zero; the zero polynomial has no
/// coefficients and degree `None`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    /// The identity polynomial `x`.
    pub fn var() -> Self {
        Self::new(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rat_int(c)).collect())
    }

    /// `c * x^k`.
    pub fn monomial(c: BigRational, k: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// Falling factorial `x (x-1) ... (x-len+1)`; `1` for `len == 0`.
    pub fn falling_factorial(len: usize) -> Self {
        (0..len).fold(Poly::one(), |acc, i| {
            acc * Poly::from_ints(&[-(i as i64), 1])
        })
    }

    /// `(x + s)^e`.
    pub fn linear_power(s: i64, e: u32) -> Self {
        (0..e).fold(Poly::one(), |acc, _| acc * Poly::from_ints(&[s, 1]))
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficient of `x^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    /// `None` stands for the degree of the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_int(&self, x: i64) -> BigRational {
        self.eval(&rat_int(x))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Substitutes `x -> x + s`.
    pub fn shift(&self, s: i64) -> Self {
        let lin = Poly::from_ints(&[s, 1]);
        self.coeffs
            .iter()
            .rev()
            .fold(Poly::zero(), |acc, c| acc * lin.clone() + Poly::constant(c.clone()))
    }

    /// Returns `(c, s, e)` with `self == c * (x - s)^e` when such an integer
    /// `s` exists and `e >= 1`.
    pub fn as_linear_power(&self) -> Option<(BigRational, BigInt, u32)> {
        let d = self.degree()?;
        if d == 0 {
            return None;
        }
        let lead = self.leading()?.clone();
        // (x - s)^d has x^(d-1) coefficient -d*s
        let s = -(self.coeff(d - 1) / &lead) / rat_int(d as i64);
        if !s.is_integer() {
            return None;
        }
        let s = s.to_integer();
        let s_i64: i64 = (&s).try_into().ok()?;
        let candidate = Poly::linear_power(-s_i64, d as u32).scale(&lead);
        (candidate == *self).then_some((lead, s, d as u32))
    }

    /// Renders the polynomial in the given variable name, ascending powers.
    pub fn to_string_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(if c.is_negative() { " - " } else { " + " });
            }
            let pow = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            if k == 0 {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&pow);
            } else {
                out.push_str(&format!("{mag}*{pow}"));
            }
        }
        out
    }

    /// Multiplies by the lcm of the denominators and divides by the gcd of
    /// the resulting integers. Returns the factor applied.
    pub fn integer_content_factor(polys: &[Poly]) -> BigRational {
        let den = common_denominator(polys.iter().flat_map(|p| p.coeffs.iter()));
        let g = polys
            .iter()
            .flat_map(|p| p.coeffs.iter())
            .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
            .fold(BigInt::zero(), |acc, v| acc.gcd(&v));
        if g.is_zero() {
            return BigRational::one();
        }
        BigRational::new(den, g)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_in("x"))
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

/// Binary polynomial arithmetic; scaling is [`Poly::scale`].
pub fn poly_arith(p: &Poly, q: &Poly, op: PolyOp) -> Poly {
    match op {
        PolyOp::Add => p + q,
        PolyOp::Sub => p - q,
        PolyOp::Mul => p * q,
    }
}
