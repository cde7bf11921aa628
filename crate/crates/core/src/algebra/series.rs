use super::field::{Elem, Field};
use super::poly::{join_digits, parse_digits, Poly};
use crate::error::{Error, Result};

/// A formal power series known modulo `x^M`.
///
/// Coefficients past the precision are unknown, not zero: every accessor
/// that would need them fails with [`Error::PrecisionExceeded`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SeriesPrefix {
    coeffs: Vec<Elem>,
}

impl SeriesPrefix {
    pub fn new(coeffs: Vec<Elem>) -> Self {
        SeriesPrefix { coeffs }
    }

    /// The prefix of a polynomial, padded with zeros up to `precision`.
    pub fn from_poly(p: &Poly, precision: usize) -> Result<Self> {
        Ok(SeriesPrefix { coeffs: p.padded(precision)? })
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> Result<Elem> {
        self.coeffs.get(j).copied().ok_or(Error::PrecisionExceeded {
            needed: j + 1,
            available: self.coeffs.len(),
        })
    }

    /// `alpha mod x^m`.
    pub fn truncate(&self, m: usize) -> Result<Poly> {
        if m > self.coeffs.len() {
            return Err(Error::PrecisionExceeded { needed: m, available: self.coeffs.len() });
        }
        Ok(Poly::new(self.coeffs[..m].to_vec()))
    }

    /// Membership in Y: every reduction mod x^m is a unit mod x^m, which
    /// happens exactly when the constant coefficient is nonzero.
    pub fn in_y(&self) -> bool {
        self.coeffs.first().is_some_and(|&c| c != 0)
    }

    /// Membership in Y decided by computing gcd(alpha mod x^m, x^m) for
    /// every m up to the precision.
    pub fn in_y_by_gcd(&self, fq: &Field) -> bool {
        (1..=self.precision()).all(|m| {
            let a = self.truncate(m).expect("m within precision");
            a.gcd(&Poly::x_pow(m), fq) == Poly::one()
        }) && self.precision() > 0
    }

    pub fn parse(s: &str, fq: &Field) -> Result<Self> {
        Ok(SeriesPrefix { coeffs: parse_digits(s, fq)? })
    }

    pub fn to_digits(&self) -> String {
        join_digits(&self.coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefix_examples() {
        let f2 = Field::binary();
        let a = SeriesPrefix::parse("1,1,1", &f2).unwrap();
        assert_eq!(a.truncate(2).unwrap(), Poly::parse("1,1", &f2).unwrap());
        assert_eq!(a.truncate(3).unwrap().deg(), 2);
        assert!(matches!(a.truncate(4), Err(Error::PrecisionExceeded { needed: 4, available: 3 })));
        assert!(!SeriesPrefix::parse("0,1,1", &f2).unwrap().in_y());
    }

    #[test]
    fn one_plus_x_is_in_y_at_every_m() {
        let f2 = Field::binary();
        let a = SeriesPrefix::from_poly(&Poly::parse("1,1", &f2).unwrap(), 8).unwrap();
        for m in 1..=8 {
            let t = a.truncate(m).unwrap();
            assert_eq!(t.gcd(&Poly::x_pow(m), &f2), Poly::one(), "m = {m}");
        }
        assert!(a.in_y());
        assert!(a.in_y_by_gcd(&f2));
    }

    /// Constant-term shortcut and the per-m gcd definition agree on every
    /// prefix for q <= 4, M <= 8 (q = 4 capped at M = 6 to stay fast).
    #[test]
    fn y_membership_shortcut_matches_gcd_oracle() {
        for (q, max_m) in [(2u32, 8usize), (3, 8), (4, 6)] {
            let fq = Field::new(q).unwrap();
            for m in 1..=max_m {
                let total = (q as usize).pow(m as u32);
                for n in 0..total {
                    let coeffs = (0..m)
                        .map(|k| ((n / (q as usize).pow(k as u32)) % q as usize) as Elem)
                        .collect();
                    let s = SeriesPrefix::new(coeffs);
                    assert_eq!(s.in_y(), s.in_y_by_gcd(&fq), "q={q} {s:?}");
                }
            }
        }
    }
}
