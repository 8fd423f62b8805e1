//! Univariate polynomials with exact rational coefficients, plus exact
//! binomial utilities.  This is the coefficient arithmetic behind Hilbert
//! polynomials and Euler-characteristic bookkeeping; nothing here ever
//! rounds.

use num::{BigInt, BigRational, One, Zero};
use std::fmt;

pub fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Generalized binomial coefficient binom(n, k) = n(n-1)...(n-k+1)/k!,
/// defined for negative n as well (the polynomial extension).  The division
/// is exact: a product of k consecutive integers is divisible by k!.
pub fn binom_int(n: i64, k: usize) -> BigInt {
    let mut num = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(n - i as i64);
    }
    let mut den = BigInt::one();
    for i in 1..=k {
        den *= BigInt::from(i as i64);
    }
    num / den
}

/// Univariate polynomial over Q; coefficients ascending, trailing zeros
/// trimmed, so equality of coefficient vectors is equality of polynomials.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct QPoly {
    coeffs: Vec<BigRational>,
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        let mut q = QPoly { coeffs };
        q.trim();
        q
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        QPoly::from_coeffs(coeffs.iter().map(|&c| big(c)).collect())
    }

    pub fn constant(c: BigRational) -> Self {
        QPoly::from_coeffs(vec![c])
    }

    pub fn x() -> Self {
        QPoly::from_coeffs(vec![BigRational::zero(), BigRational::one()])
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn add(&self, other: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        QPoly::from_coeffs((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        QPoly::from_coeffs((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn neg(&self) -> QPoly {
        QPoly::from_coeffs(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn mul(&self, other: &QPoly) -> QPoly {
        if self.is_zero() || other.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::from_coeffs(out)
    }

    pub fn scale(&self, c: &BigRational) -> QPoly {
        QPoly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_i(&self, n: i64) -> BigRational {
        self.eval(&big(n))
    }

    /// The polynomial m |-> binom(m + c, k).
    pub fn binomial_shifted(c: i64, k: usize) -> QPoly {
        let mut acc = QPoly::constant(BigRational::one());
        for i in 0..k {
            let lin = QPoly::from_coeffs(vec![big(c - i as i64), BigRational::one()]);
            acc = acc.mul(&lin);
        }
        let mut fact = BigInt::one();
        for i in 1..=k {
            fact *= BigInt::from(i as i64);
        }
        acc.scale(&BigRational::new(BigInt::one(), fact))
    }

    /// Coefficients as strings, ascending; stable serialization for reports.
    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }

    /// Some(value) when the polynomial is a constant (including zero).
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.coeffs.len() {
            0 => Some(BigRational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if i == 0 {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "m^{i}")?;
            } else {
                write!(f, "({c})*m^{i}")?;
            }
        }
        Ok(())
    }
}
