use std::fmt;

use super::field::{Elem, Field};
use crate::error::{Error, Result};

/// A polynomial over F_q, coefficient `j` of `x^j`, with no trailing zeros.
///
/// The zero polynomial has an empty coefficient list and degree -1.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    coeffs: Vec<Elem>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Elem>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![1] }
    }

    pub fn constant(c: Elem) -> Self {
        Poly::new(vec![c])
    }

    /// `c * x^d`
    pub fn monomial(c: Elem, d: usize) -> Self {
        let mut coeffs = vec![0; d + 1];
        coeffs[d] = c;
        Poly::new(coeffs)
    }

    /// `x^m`, the modulus used for sequence prefixes.
    pub fn x_pow(m: usize) -> Self {
        Poly::monomial(1, m)
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> Elem {
        self.coeffs.get(j).copied().unwrap_or(0)
    }

    /// Degree, with deg(0) = -1.
    pub fn deg(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Elem {
        self.coeffs.last().copied().unwrap_or(0)
    }

    /// Coefficients 0..len, zero padded. Fails if the degree does not fit.
    pub fn padded(&self, len: usize) -> Result<Vec<Elem>> {
        if self.coeffs.len() > len {
            return Err(Error::Shape(format!("{self} does not fit into {len} coefficients")));
        }
        let mut v = self.coeffs.clone();
        v.resize(len, 0);
        Ok(v)
    }

    /// True iff the constant term is nonzero, i.e. gcd(self, x) = 1.
    pub fn is_unit_at_zero(&self) -> bool {
        self.coeff(0) != 0
    }

    /// Reduction modulo `x^m`.
    pub fn truncate(&self, m: usize) -> Poly {
        Poly::new(self.coeffs.iter().copied().take(m).collect())
    }

    pub fn add(&self, other: &Poly, fq: &Field) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|j| fq.add(self.coeff(j), other.coeff(j))).collect())
    }

    pub fn sub(&self, other: &Poly, fq: &Field) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|j| fq.sub(self.coeff(j), other.coeff(j))).collect())
    }

    pub fn neg(&self, fq: &Field) -> Poly {
        Poly::new(self.coeffs.iter().map(|&c| fq.neg(c)).collect())
    }

    pub fn scale(&self, c: Elem, fq: &Field) -> Poly {
        Poly::new(self.coeffs.iter().map(|&a| fq.mul(a, c)).collect())
    }

    /// `self * x^k`
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![0; k];
        coeffs.extend_from_slice(&self.coeffs);
        Poly { coeffs }
    }

    /// Schoolbook product.
    pub fn mul(&self, other: &Poly, fq: &Field) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = fq.add(out[i + j], fq.mul(a, b));
            }
        }
        Poly::new(out)
    }

    pub fn div_rem(&self, divisor: &Poly, fq: &Field) -> Result<(Poly, Poly)> {
        if divisor.is_zero() {
            return Err(Error::Domain("division by the zero polynomial".into()));
        }
        let dd = divisor.coeffs.len() - 1;
        let lead_inv = fq.inv(divisor.leading())?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quot = vec![0; rem.len() - dd];
        for top in (dd..rem.len()).rev() {
            let c = fq.mul(rem[top], lead_inv);
            if c == 0 {
                continue;
            }
            quot[top - dd] = c;
            for (k, &dk) in divisor.coeffs.iter().enumerate() {
                let idx = top - dd + k;
                rem[idx] = fq.sub(rem[idx], fq.mul(c, dk));
            }
        }
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    pub fn rem(&self, modulus: &Poly, fq: &Field) -> Result<Poly> {
        Ok(self.div_rem(modulus, fq)?.1)
    }

    /// `(self * other) mod f`, computed by Horner accumulation over the
    /// coefficients of `other` so that no intermediate exceeds degree deg(f).
    pub fn mul_mod(&self, other: &Poly, f: &Poly, fq: &Field) -> Result<Poly> {
        if f.deg() < 1 {
            return Err(Error::Domain(format!("modulus {f} must have degree >= 1")));
        }
        let a = self.rem(f, fq)?;
        let mut acc = Poly::zero();
        for &c in other.coeffs.iter().rev() {
            acc = acc.shift(1).rem(f, fq)?;
            acc = acc.add(&a.scale(c, fq), fq);
        }
        Ok(acc)
    }

    /// Monic greatest common divisor by the Euclidean algorithm.
    pub fn gcd(&self, other: &Poly, fq: &Field) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b, fq).expect("nonzero divisor");
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let inv = fq.inv(a.leading()).expect("nonzero leading coefficient");
        a.scale(inv, fq)
    }

    /// Parse comma separated little-endian digits: "1,0,1" is 1 + x^2.
    pub fn parse(s: &str, fq: &Field) -> Result<Poly> {
        Ok(Poly::new(parse_digits(s, fq)?))
    }

    /// Inverse of [`Poly::parse`]; the zero polynomial renders as "0".
    pub fn to_digits(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        join_digits(&self.coeffs)
    }
}

pub(crate) fn parse_digits(s: &str, fq: &Field) -> Result<Vec<Elem>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|d| fq.parse_elem(d)).collect()
}

pub(crate) fn join_digits(d: &[Elem]) -> String {
    d.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match (j, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "x")?,
                (1, c) => write!(f, "{c}x")?,
                (j, 1) => write!(f, "x^{j}")?,
                (j, c) => write!(f, "{c}x^{j}")?,
            }
        }
        Ok(())
    }
}
