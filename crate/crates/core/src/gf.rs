//! Arithmetic in GF(p^m).
//!
//! Elements are integers in `[0, p^m)` whose base-`p` digits are polynomial
//! coefficients, constant term least significant. The modulus is the
//! lexicographically smallest monic irreducible polynomial of degree `m`,
//! comparing coefficients from the constant term upward, so two fields built
//! from the same `(p, m)` are identical.
//!
//! ```
//! use kuniform::gf::FiniteField;
//!
//! let gf4 = FiniteField::new(2, 2)?;
//! assert_eq!(gf4.modulus(), &[1, 1, 1]); // x^2 + x + 1
//! assert_eq!(gf4.mul(2, 2), 3);         // x * x = x + 1
//! assert_eq!(gf4.mul(3, gf4.inv(3)?), 1);
//! # Ok::<(), kuniform::Error>(())
//! ```

use std::fmt;
use std::sync::Arc;

use crate::{Caps, Error, Result};

/// Field element encoding.
pub type Elem = u16;

/// Shared handle used by codes and arrays.
pub type Field = Arc<FiniteField>;

#[derive(Clone)]
pub struct FiniteField {
    p: u32,
    m: u32,
    order: u32,
    modulus: Vec<u32>,
    exp: Vec<Elem>,
    log: Vec<u32>,
}

impl FiniteField {
    pub fn new(p: u32, m: u32) -> Result<Self> {
        Self::with_cap(p, m, Caps::global().field_order)
    }

    pub fn with_cap(p: u32, m: u32, cap: u64) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p));
        }
        if m < 1 {
            return Err(Error::InvalidDegree);
        }
        let order = (p as u64)
            .checked_pow(m)
            .filter(|&q| q <= cap.min(1 << 16))
            .ok_or(Error::FieldTooLarge { p, m, cap: cap.min(1 << 16) })? as u32;
        let modulus = canonical_modulus(p, m);
        let mut field = FiniteField { p, m, order, modulus, exp: Vec::new(), log: Vec::new() };
        field.build_tables();
        Ok(field)
    }

    /// Field of order `q`, which must be a prime power.
    pub fn of_order(q: u32) -> Result<Self> {
        let (p, m) = prime_power(q as u64)
            .ok_or_else(|| Error::InvalidArgument(format!("{q} is not a prime power")))?;
        Self::new(p as u32, m)
    }

    pub fn into_shared(self) -> Field {
        Arc::new(self)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Modulus coefficients, constant term first; monic of length `m + 1`.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.order).map(|e| e as Elem)
    }

    pub fn element(&self, value: u64) -> Result<Elem> {
        if value < self.order as u64 {
            Ok(value as Elem)
        } else {
            Err(Error::ElementOutOfRange { value, order: self.order })
        }
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.m == 1 {
            ((a as u32 + b as u32) % self.p) as Elem
        } else if self.p == 2 {
            a ^ b
        } else {
            self.digitwise(a, b, |x, y| (x + y) % self.p)
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        if self.p == 2 {
            a
        } else if self.m == 1 {
            ((self.p - a as u32) % self.p) as Elem
        } else {
            self.digitwise(a, 0, |x, _| (self.p - x) % self.p)
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        let idx = self.log[a as usize] + self.log[b as usize];
        self.exp[idx as usize]
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a == 0 {
            return Err(Error::ZeroInverse);
        }
        let n = self.order - 1;
        Ok(self.exp[((n - self.log[a as usize]) % n) as usize])
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = (self.order - 1) as u64;
        self.exp[((self.log[a as usize] as u64 * (e % n)) % n) as usize]
    }

    /// Generator of the multiplicative group used for the log tables.
    pub fn primitive_element(&self) -> Elem {
        self.exp[1.min(self.exp.len() - 1)]
    }

    fn digitwise(&self, a: Elem, b: Elem, op: impl Fn(u32, u32) -> u32) -> Elem {
        let (mut a, mut b) = (a as u32, b as u32);
        let mut out = 0;
        let mut scale = 1;
        for _ in 0..self.m {
            out += op(a % self.p, b % self.p) * scale;
            a /= self.p;
            b /= self.p;
            scale *= self.p;
        }
        out as Elem
    }

    fn build_tables(&mut self) {
        let n = (self.order - 1) as usize;
        let generator = (1..self.order)
            .map(|g| g as Elem)
            .find(|&g| self.slow_order(g) == n)
            .expect("multiplicative group of a finite field is cyclic");
        let mut exp = vec![0 as Elem; 2 * n.max(1)];
        let mut log = vec![0u32; self.order as usize];
        let mut x: Elem = 1;
        for i in 0..n {
            exp[i] = x;
            log[x as usize] = i as u32;
            x = self.slow_mul(x, generator);
        }
        for i in n..2 * n {
            exp[i] = exp[i - n];
        }
        if n == 0 {
            exp[0] = 1;
        }
        self.exp = exp;
        self.log = log;
    }

    fn slow_order(&self, g: Elem) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != 1 {
            x = self.slow_mul(x, g);
            k += 1;
        }
        k
    }

    /// Schoolbook product reduced by the modulus; used only to seed the tables.
    fn slow_mul(&self, a: Elem, b: Elem) -> Elem {
        let p = self.p as u64;
        let m = self.m as usize;
        let da = digits(a as u64, self.p, m);
        let db = digits(b as u64, self.p, m);
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        for top in (m..prod.len()).rev() {
            let c = prod[top];
            if c != 0 {
                for (k, &mk) in self.modulus[..m].iter().enumerate() {
                    let idx = top - m + k;
                    prod[idx] = (prod[idx] + (p - c) * mk as u64) % p;
                }
                prod[top] = 0;
            }
        }
        prod[..m].iter().rev().fold(0u64, |acc, &c| acc * p + c) as Elem
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m
    }
}

impl Eq for FiniteField {}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.p, self.m)
    }
}

impl fmt::Display for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.order)
    }
}

fn digits(mut v: u64, p: u32, m: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(m);
    for _ in 0..m {
        out.push((v % p as u64) as u32);
        v /= p as u64;
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut i = 2;
    while i * i <= n {
        if n % i == 0 {
            return false;
        }
        i += 1;
    }
    true
}

/// `Some((p, m))` when `q = p^m` with `p` prime and `m >= 1`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut rest = q;
    let mut m = 0;
    while rest % p == 0 {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p, m))
}

/// Lexicographically smallest monic irreducible of degree `m` over Z_p,
/// coefficients compared constant term first.
fn canonical_modulus(p: u32, m: u32) -> Vec<u32> {
    let m = m as usize;
    let total = (p as u64).pow(m as u32);
    for n in 0..total {
        // Constant term is the most significant digit of `n`, so increasing
        // `n` walks the constant-first lexicographic order.
        let mut coeffs = vec![0u32; m + 1];
        let mut rest = n;
        for slot in (0..m).rev() {
            coeffs[slot] = (rest % p as u64) as u32;
            rest /= p as u64;
        }
        coeffs[m] = 1;
        if is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Trial division by every monic polynomial of degree `1..=m/2`.
fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let m = poly.len() - 1;
    if m == 1 {
        return true;
    }
    for deg in 1..=m / 2 {
        let count = (p as u64).pow(deg as u32);
        for n in 0..count {
            let mut divisor: Vec<u32> = digits(n, p, deg);
            divisor.push(1);
            if poly_rem_is_zero(poly, &divisor, p) {
                return false;
            }
        }
    }
    true
}

fn poly_rem_is_zero(num: &[u32], monic: &[u32], p: u32) -> bool {
    let mut r: Vec<u64> = num.iter().map(|&c| c as u64).collect();
    let dd = monic.len() - 1;
    let p = p as u64;
    for top in (dd..r.len()).rev() {
        let c = r[top] % p;
        if c != 0 {
            for (k, &mk) in monic.iter().enumerate() {
                let idx = top - dd + k;
                r[idx] = (r[idx] + (p - c) * mk as u64) % p;
            }
        }
    }
    r[..dd].iter().all(|&c| c % p == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent polynomial-product oracle on coefficient vectors.
    fn oracle_mul(f: &FiniteField, a: Elem, b: Elem) -> Elem {
        let p = f.characteristic();
        let m = f.degree() as usize;
        let (da, db) = (digits(a as u64, p, m), digits(b as u64, p, m));
        let mut prod = vec![0u32; 2 * m];
        for i in 0..m {
            for j in 0..m {
                prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
            }
        }
        // long division by the monic modulus
        for top in (m..2 * m).rev() {
            let c = prod[top];
            for k in 0..=m {
                let idx = top - m + k;
                prod[idx] = (prod[idx] + (p - c) * f.modulus()[k]) % p;
            }
        }
        prod[..m].iter().rev().fold(0u32, |acc, &c| acc * p + c) as Elem
    }

    #[test]
    fn prime_fields() {
        let f = FiniteField::new(2, 1).unwrap();
        assert_eq!(f.modulus(), &[0, 1]);
        let f3 = FiniteField::new(3, 1).unwrap();
        assert_eq!(f3.mul(2, 2), 1);
        assert_eq!(f3.add(2, 2), 1);
        assert_eq!(f3.neg(1), 2);
    }

    #[test]
    fn gf4_modulus_and_product() {
        let f = FiniteField::new(2, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        assert_eq!(f.mul(2, 2), 3);
        assert_eq!(oracle_mul(&f, 2, 2), 3);
    }

    #[test]
    fn canonical_order_is_constant_first() {
        // x^3 + x^2 + 1 beats x^3 + x + 1 because (1,0,1) < (1,1,0).
        assert_eq!(FiniteField::new(2, 3).unwrap().modulus(), &[1, 0, 1, 1]);
        // x^2 + 1 is irreducible over Z_3 and has the smallest tail (1, 0).
        assert_eq!(FiniteField::new(3, 2).unwrap().modulus(), &[1, 0, 1]);
    }

    #[test]
    fn table_product_matches_polynomial_oracle() {
        for (p, m) in [(2, 3), (2, 4), (3, 2), (5, 2), (2, 6), (7, 1)] {
            let f = FiniteField::new(p, m).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(f.mul(a, b), oracle_mul(&f, a, b), "GF({p}^{m}) {a}*{b}");
                }
            }
        }
    }

    #[test]
    fn inverses_exhaustive_up_to_64() {
        for q in [2u32, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27, 32, 49, 64] {
            let f = FiniteField::of_order(q).unwrap();
            for a in f.elements().skip(1) {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1, "GF({q}) inv({a})");
            }
            assert!(matches!(f.inv(0), Err(Error::ZeroInverse)));
        }
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(FiniteField::new(4, 1), Err(Error::NotPrime(4))));
        assert!(matches!(FiniteField::new(2, 0), Err(Error::InvalidDegree)));
        assert!(matches!(FiniteField::new(2, 17), Err(Error::FieldTooLarge { .. })));
        assert!(matches!(FiniteField::with_cap(3, 3, 20), Err(Error::FieldTooLarge { .. })));
        let f = FiniteField::new(2, 2).unwrap();
        assert!(matches!(f.element(4), Err(Error::ElementOutOfRange { .. })));
    }

    #[test]
    fn deterministic_tables() {
        let a = FiniteField::new(3, 3).unwrap();
        let b = FiniteField::new(3, 3).unwrap();
        for x in a.elements() {
            for y in a.elements() {
                assert_eq!(a.mul(x, y), b.mul(x, y));
            }
        }
    }

    #[test]
    fn largest_binary_field_builds() {
        let f = FiniteField::new(2, 16).unwrap();
        assert_eq!(f.order(), 65536);
        let a = 0x1234;
        assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
    }

    #[test]
    fn prime_power_detection() {
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
        assert_eq!(prime_power(13), Some((13, 1)));
    }
}
