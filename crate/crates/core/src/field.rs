//! Exact arithmetic in F_q for q = p^e.
//!
//! Elements are canonical indices: the index `idx` encodes the polynomial
//! `Σ cᵢ xⁱ` whose coefficients are the base-p digits of `idx`. Addition,
//! multiplication, negation and inversion are precomputed into dense tables
//! when the field is built, so every later module does arithmetic by table
//! lookup.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Default upper bound on q.
pub const DEFAULT_FIELD_CAP: u32 = 25;

/// Scalars are stored in a byte, so no cap may go beyond this.
pub const MAX_FIELD_ORDER: u32 = 256;

/// An element of F_q, as its canonical index.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Scalar(pub u8);

impl Scalar {
    pub const ZERO: Scalar = Scalar(0);
    pub const ONE: Scalar = Scalar(1);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Description of F_q together with its arithmetic tables.
pub struct FieldSpec {
    p: u32,
    e: u32,
    q: u32,
    /// Ascending coefficients `c₀..c_e` of the monic modulus; empty when e = 1.
    modulus: Vec<u32>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

/// Shared handle; matrices keep one of these.
pub type Field = Arc<FieldSpec>;

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits a prime power `q` into `(p, e)`.
pub fn prime_power(q: u32) -> Result<(u32, u32)> {
    if q < 2 {
        return Err(Error::domain(format!("{q} is not a prime power")));
    }
    let p = (2..=q).find(|d| q % d == 0).unwrap();
    let mut rest = q;
    let mut e = 0;
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    if rest != 1 {
        return Err(Error::domain(format!("{q} is not a prime power")));
    }
    Ok((p, e))
}

// Polynomials over F_p as ascending coefficient vectors, trimmed of high zeros.

fn poly_trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = poly_trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = pow_mod(m[dm] as u64, p as u64 - 2, p as u64) as u32;
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let coef = r[r.len() - 1] * lead_inv % p;
        for (i, &mc) in m.iter().enumerate() {
            let slot = &mut r[shift + i];
            *slot = (*slot + p * p - coef * mc % p) % p;
        }
        r = poly_trim(r);
    }
    r
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    poly_trim(out)
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

/// Monic polynomial of degree `deg` whose lower coefficients are the base-p
/// digits of `code` (c₀ least significant).
fn monic_from_code(code: u32, deg: u32, p: u32) -> Vec<u32> {
    let mut c = Vec::with_capacity(deg as usize + 1);
    let mut rest = code;
    for _ in 0..deg {
        c.push(rest % p);
        rest /= p;
    }
    c.push(1);
    c
}

/// Trial division by every monic polynomial of degree 1..=deg/2.
fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = (f.len() - 1) as u32;
    for d in 1..=deg / 2 {
        for code in 0..p.pow(d) {
            let g = monic_from_code(code, d, p);
            if poly_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Least monic irreducible of degree `e`, ordering candidates by their
/// written form (highest non-leading coefficient compared first).
fn least_irreducible(p: u32, e: u32) -> Option<Vec<u32>> {
    (0..p.pow(e))
        .map(|code| monic_from_code(code, e, p))
        .find(|f| is_irreducible(f, p))
}

fn digits(idx: u32, p: u32, e: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(e as usize);
    let mut rest = idx;
    for _ in 0..e {
        out.push(rest % p);
        rest /= p;
    }
    out
}

fn undigits(c: &[u32], p: u32) -> u32 {
    c.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// Builds F_{p^e} with the default size cap.
pub fn build_field(p: u32, e: u32) -> Result<Field> {
    build_field_capped(p, e, DEFAULT_FIELD_CAP)
}

/// Builds F_q for a prime power q.
pub fn field_of_order(q: u32, cap: u32) -> Result<Field> {
    let (p, e) = prime_power(q)?;
    build_field_capped(p, e, cap)
}

pub fn build_field_capped(p: u32, e: u32, cap: u32) -> Result<Field> {
    if !is_prime(p as u64) {
        return Err(Error::domain(format!("{p} is not prime")));
    }
    if e == 0 {
        return Err(Error::domain("extension degree must be at least 1"));
    }
    let cap = cap.min(MAX_FIELD_ORDER);
    let q = (p as u64).checked_pow(e).unwrap_or(u64::MAX);
    if q > cap as u64 {
        return Err(Error::Capacity {
            what: "field order q",
            value: q,
            cap: cap as u64,
        });
    }
    let q = q as u32;
    let modulus = if e == 1 {
        Vec::new()
    } else {
        least_irreducible(p, e)
            .ok_or_else(|| Error::internal(format!("no irreducible of degree {e} over F_{p}")))?
    };

    let qs = q as usize;
    let mut add = vec![0u8; qs * qs];
    let mut mul = vec![0u8; qs * qs];
    let mut neg = vec![0u8; qs];
    for a in 0..q {
        let da = digits(a, p, e);
        let na: Vec<u32> = da.iter().map(|&c| (p - c) % p).collect();
        neg[a as usize] = undigits(&na, p) as u8;
        for b in 0..q {
            let db = digits(b, p, e);
            let sum: Vec<u32> = da.iter().zip(&db).map(|(&x, &y)| (x + y) % p).collect();
            add[a as usize * qs + b as usize] = undigits(&sum, p) as u8;
            let prod = if e == 1 {
                vec![a * b % p]
            } else {
                let mut r = poly_rem(&poly_mul(&da, &db, p), &modulus, p);
                r.resize(e as usize, 0);
                r
            };
            mul[a as usize * qs + b as usize] = undigits(&prod, p) as u8;
        }
    }
    let mut inv = vec![0u8; qs];
    for a in 1..qs {
        let b = (1..qs)
            .find(|&b| mul[a * qs + b] == 1)
            .ok_or_else(|| Error::internal(format!("element {a} has no inverse")))?;
        inv[a] = b as u8;
    }
    Ok(Arc::new(FieldSpec {
        p,
        e,
        q,
        modulus,
        add,
        mul,
        neg,
        inv,
    }))
}

impl FieldSpec {
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn is_valid(&self, a: Scalar) -> bool {
        (a.0 as u32) < self.q
    }

    pub fn scalar(&self, idx: u32) -> Result<Scalar> {
        if idx < self.q {
            Ok(Scalar(idx as u8))
        } else {
            Err(Error::domain(format!("{idx} is not an element of F_{}", self.q)))
        }
    }

    /// Image of an integer under Z → F_p ⊂ F_q.
    pub fn from_int(&self, n: i64) -> Scalar {
        Scalar(n.rem_euclid(self.p as i64) as u8)
    }

    pub fn elements(&self) -> impl Iterator<Item = Scalar> {
        (0..self.q).map(|i| Scalar(i as u8))
    }

    #[inline]
    pub fn add(&self, a: Scalar, b: Scalar) -> Scalar {
        Scalar(self.add[a.index() * self.q as usize + b.index()])
    }

    #[inline]
    pub fn mul(&self, a: Scalar, b: Scalar) -> Scalar {
        Scalar(self.mul[a.index() * self.q as usize + b.index()])
    }

    #[inline]
    pub fn neg(&self, a: Scalar) -> Scalar {
        Scalar(self.neg[a.index()])
    }

    #[inline]
    pub fn sub(&self, a: Scalar, b: Scalar) -> Scalar {
        self.add(a, self.neg(b))
    }

    pub fn inv(&self, a: Scalar) -> Result<Scalar> {
        if a.is_zero() {
            return Err(Error::domain("zero has no multiplicative inverse"));
        }
        Ok(Scalar(self.inv[a.index()]))
    }

    pub fn div(&self, a: Scalar, b: Scalar) -> Result<Scalar> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Scalar, mut exp: u64) -> Scalar {
        let mut base = a;
        let mut acc = Scalar::ONE;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative order of a nonzero element.
    pub fn order_of(&self, a: Scalar) -> Option<u32> {
        if a.is_zero() {
            return None;
        }
        let mut x = a;
        let mut k = 1;
        while x != Scalar::ONE {
            x = self.mul(x, a);
            k += 1;
        }
        Some(k)
    }

    /// Smallest-index generator of the multiplicative group.
    pub fn generator(&self) -> Scalar {
        self.elements()
            .skip(1)
            .find(|&a| self.order_of(a) == Some(self.q - 1))
            .expect("multiplicative group of a finite field is cyclic")
    }

    pub fn same_as(self: &Arc<Self>, other: &Arc<Self>) -> bool {
        Arc::ptr_eq(self, other) || **self == **other
    }

    /// Human-readable modulus, e.g. `x^2 + x + 1`.
    pub fn modulus_string(&self) -> String {
        if self.modulus.is_empty() {
            return "x".to_string();
        }
        let terms: Vec<String> = self
            .modulus
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| {
                let coef = if c == 1 && i > 0 { String::new() } else { c.to_string() };
                match i {
                    0 => coef,
                    1 => format!("{coef}x"),
                    _ => format!("{coef}x^{i}"),
                }
            })
            .collect();
        terms.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_has_empty_modulus() {
        let f = build_field(3, 1).unwrap();
        assert_eq!(f.q(), 3);
        assert!(f.modulus().is_empty());
    }

    #[test]
    fn f4_modulus_is_the_only_irreducible_quadratic() {
        // Oracle: a monic quadratic over F_2 is irreducible iff it has no root.
        let irreducible: Vec<[u32; 3]> = (0..4u32)
            .map(|code| [code & 1, code >> 1, 1])
            .filter(|c| (0..2).all(|x| (c[0] + c[1] * x + c[2] * x * x) % 2 != 0))
            .collect();
        assert_eq!(irreducible, vec![[1, 1, 1]]);
        let f = build_field(2, 2).unwrap();
        assert_eq!(f.modulus(), &irreducible[0]);
    }

    #[test]
    fn rejects_non_prime_and_oversized() {
        assert!(matches!(build_field(4, 1), Err(Error::Domain(_))));
        assert!(matches!(build_field(3, 3), Err(Error::Capacity { .. })));
        assert!(build_field_capped(3, 3, 27).is_ok());
        assert!(matches!(prime_power(12), Err(Error::Domain(_))));
        assert_eq!(prime_power(25).unwrap(), (5, 2));
    }

    #[test]
    fn small_arithmetic() {
        let f3 = build_field(3, 1).unwrap();
        assert_eq!(f3.add(Scalar(2), Scalar(2)), Scalar(1));
        let f5 = build_field(5, 1).unwrap();
        assert_eq!(f5.mul(Scalar(2), Scalar(3)), Scalar(1));
        assert_eq!(f5.inv(Scalar(2)).unwrap(), Scalar(3));
        let f2 = build_field(2, 1).unwrap();
        assert_eq!(f2.inv(Scalar(1)).unwrap(), Scalar(1));
        // x = idx 2, x + 1 = idx 3 under x² + x + 1
        let f4 = build_field(2, 2).unwrap();
        assert_eq!(f4.mul(Scalar(2), Scalar(2)), Scalar(3));
        assert_eq!(f4.inv(Scalar(2)).unwrap(), Scalar(3));
        assert!(matches!(f4.inv(Scalar(0)), Err(Error::Domain(_))));
    }

    #[test]
    fn field_axioms_exhaustive_up_to_25() {
        for q in [2u32, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25] {
            let f = field_of_order(q, 25).unwrap();
            let els: Vec<Scalar> = f.elements().collect();
            for &a in &els {
                assert_eq!(f.add(a, Scalar::ZERO), a);
                assert_eq!(f.mul(a, Scalar::ONE), a);
                assert_eq!(f.add(a, f.neg(a)), Scalar::ZERO);
                if !a.is_zero() {
                    let ai = f.inv(a).unwrap();
                    assert_eq!(f.mul(a, ai), Scalar::ONE);
                    assert_eq!(f.inv(ai).unwrap(), a);
                }
                for &b in &els {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for &c in &els {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
            let g = f.generator();
            assert_eq!(f.order_of(g), Some(q - 1), "q = {q}");
        }
    }

    #[test]
    fn modulus_printing() {
        assert_eq!(build_field(2, 2).unwrap().modulus_string(), "x^2 + x + 1");
        assert_eq!(build_field(5, 2).unwrap().modulus_string(), "x^2 + 2");
    }
}
