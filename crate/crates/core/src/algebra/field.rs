//! Finite fields F_q for q prime (q < 256) or q in {4, 8, 9, 16}.
//!
//! Elements are carried as their digit labels in `0..q`. The label-to-element
//! bijection is the identity for prime q; for q = p^e a label with base-p
//! digits (c_0, ..., c_{e-1}) is the element c_0 + c_1 z + ... + c_{e-1} z^{e-1}
//! of F_p[z]/(modulus). Label 0 is zero and label 1 is one in both cases.
//!
//! All arithmetic goes through tables built once at construction.

use std::fmt;

use crate::error::{Error, Result};

/// A field element, identified with its digit label in `0..q`.
pub type Elem = u8;

/// Built-in irreducible moduli, coefficients little-endian over F_p, monic.
const MODULI: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1, 1]),    // z^2 + z + 1
    (2, 3, &[1, 1, 0, 1]), // z^3 + z + 1
    (3, 2, &[1, 0, 1]),    // z^2 + 1
    (2, 4, &[1, 1, 0, 0, 1]), // z^4 + z + 1
];

fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut rest = q;
    let mut e = 0;
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

#[derive(Clone, PartialEq, Eq)]
pub struct Field {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    add: Vec<Elem>,
    mul: Vec<Elem>,
    neg: Vec<Elem>,
    inv: Vec<Elem>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.q)
    }
}

impl Field {
    pub fn new(q: u32) -> Result<Self> {
        let (p, e) = prime_power(q)
            .ok_or_else(|| Error::Domain(format!("field order {q} is not a prime power")))?;
        if q > 255 {
            return Err(Error::Domain(format!("field order {q} exceeds 255")));
        }
        let modulus = if e == 1 {
            vec![0, 1]
        } else {
            MODULI
                .iter()
                .find(|(mp, me, _)| *mp == p && *me == e)
                .map(|(_, _, m)| m.to_vec())
                .ok_or_else(|| {
                    Error::Domain(format!("no built-in modulus for q = {q}; supported prime powers are 4, 8, 9, 16"))
                })?
        };
        let mut field = Field {
            p,
            e,
            q,
            modulus,
            add: Vec::new(),
            mul: Vec::new(),
            neg: Vec::new(),
            inv: Vec::new(),
        };
        field.build_tables();
        Ok(field)
    }

    /// The binary field, used all over the tests.
    pub fn binary() -> Self {
        Self::new(2).expect("GF(2)")
    }

    fn build_tables(&mut self) {
        let q = self.q as usize;
        self.add = vec![0; q * q];
        self.mul = vec![0; q * q];
        self.neg = vec![0; q];
        self.inv = vec![0; q];
        for a in 0..q {
            let pa = self.phi(a as Elem);
            for b in 0..q {
                let pb = self.phi(b as Elem);
                let sum: Vec<u32> = pa.iter().zip(&pb).map(|(x, y)| (x + y) % self.p).collect();
                self.add[a * q + b] = self.phi_inv(&sum);
                self.mul[a * q + b] = self.phi_inv(&self.mul_reduce(&pa, &pb));
            }
        }
        for a in 0..q {
            self.neg[a] = (0..q).find(|&b| self.add[a * q + b] == 0).unwrap() as Elem;
            if a != 0 {
                self.inv[a] = (0..q).find(|&b| self.mul[a * q + b] == 1).unwrap() as Elem;
            }
        }
    }

    /// Product of two F_p[z] residues of degree < e, reduced by the modulus.
    fn mul_reduce(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let e = self.e as usize;
        let p = self.p;
        let mut prod = vec![0u32; 2 * e];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        // modulus is monic of degree e
        for d in (e..2 * e).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            for (k, mk) in self.modulus.iter().enumerate().take(e) {
                let idx = d - e + k;
                prod[idx] = (prod[idx] + (p - c) * mk % p) % p;
            }
            prod[d] = 0;
        }
        prod.truncate(e);
        prod
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    /// The defining polynomial over F_p (little-endian, monic). For prime
    /// fields this is `z` and plays no role.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The element behind a label: its coefficient vector over F_p.
    pub fn phi(&self, label: Elem) -> Vec<u32> {
        let mut n = label as u32;
        (0..self.e)
            .map(|_| {
                let d = n % self.p;
                n /= self.p;
                d
            })
            .collect()
    }

    /// Inverse of [`Field::phi`].
    pub fn phi_inv(&self, coeffs: &[u32]) -> Elem {
        coeffs.iter().rev().fold(0u32, |acc, &c| acc * self.p + c % self.p) as Elem
    }

    pub fn elem(&self, n: u32) -> Result<Elem> {
        if n < self.q {
            Ok(n as Elem)
        } else {
            Err(Error::Domain(format!("digit {n} is not below q = {}", self.q)))
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.q).map(|x| x as Elem)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.add[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.neg[a as usize]
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a == 0 {
            Err(Error::Domain("inverse of zero".into()))
        } else {
            Ok(self.inv[a as usize])
        }
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Parse a single digit label.
    pub fn parse_elem(&self, s: &str) -> Result<Elem> {
        let n: u32 = s
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad digit '{s}'")))?;
        self.elem(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ORDERS: &[u32] = &[2, 3, 4, 5, 7, 8, 9, 11, 13, 16];

    #[test]
    fn small_examples() {
        let f2 = Field::new(2).unwrap();
        assert_eq!(f2.add(1, 1), 0);
        let f3 = Field::new(3).unwrap();
        assert_eq!(f3.inv(2).unwrap(), 2);
        // z * z = z + 1 in F_2[z]/(z^2+z+1); label 2 is z, label 3 is z+1
        let f4 = Field::new(4).unwrap();
        assert_eq!(f4.phi(2), vec![0, 1]);
        assert_eq!(f4.mul(2, 2), 3);
    }

    #[test]
    fn inverse_of_zero_is_a_domain_error() {
        let f = Field::new(5).unwrap();
        assert!(matches!(f.inv(0), Err(Error::Domain(_))));
    }

    #[test]
    fn rejects_unsupported_orders() {
        for q in [0, 1, 6, 12, 25, 27, 32, 256] {
            assert!(Field::new(q).is_err(), "q = {q}");
        }
    }

    #[test]
    fn phi_is_a_bijection_fixing_zero() {
        for &q in ORDERS {
            let f = Field::new(q).unwrap();
            assert_eq!(f.phi(0), vec![0; f.degree() as usize]);
            for a in f.elements() {
                assert_eq!(f.phi_inv(&f.phi(a)), a);
            }
        }
    }

    /// Trial division over F_p: no monic factor of degree 1..=e/2 divides.
    fn irreducible_by_trial_division(p: u32, modulus: &[u32]) -> bool {
        let e = modulus.len() - 1;
        for d in 1..=e / 2 {
            // every monic polynomial of degree d
            for n in 0..p.pow(d as u32) {
                let mut g: Vec<u32> = (0..d).map(|k| (n / p.pow(k as u32)) % p).collect();
                g.push(1);
                let mut r = modulus.to_vec();
                while r.len() > d {
                    let c = *r.last().unwrap();
                    let shift = r.len() - 1 - d;
                    for (k, gk) in g.iter().enumerate() {
                        r[shift + k] = (r[shift + k] + (p - c) * gk % p) % p;
                    }
                    r.pop();
                }
                if r.iter().all(|&c| c == 0) {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn builtin_moduli_are_irreducible() {
        for (p, e, m) in MODULI {
            assert_eq!(m.len() as u32, e + 1);
            assert!(irreducible_by_trial_division(*p, m), "p={p} e={e}");
        }
        // sanity of the oracle itself: z^2 + 1 = (z+1)^2 over F_2
        assert!(!irreducible_by_trial_division(2, &[1, 0, 1]));
    }

    #[test]
    fn field_axioms_exhaustive() {
        for &q in ORDERS {
            let f = Field::new(q).unwrap();
            for a in f.elements() {
                assert_eq!(f.add(a, 0), a);
                assert_eq!(f.mul(a, 1), a);
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
                for b in f.elements() {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in f.elements() {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }
}
