//! Finite fields `F_q` for `q = p^e`.
//!
//! An element is stored as its packed polynomial index: the coefficients
//! `c_0, ..., c_{e-1}` of its residue modulo the defining polynomial are the
//! base-`p` digits of the index, least significant first. Elements are always
//! canonically reduced, so equality is equality of the index.
//!
//! Prime fields use direct modular arithmetic. Extension fields with
//! `q <= 256` precompute full addition and multiplication tables; larger
//! extensions fall back to polynomial arithmetic on every call. Both paths
//! agree exactly.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field order {0} is too large (must be below 2^31)")]
    TooLarge(u64),
    #[error("modulus {0:?} is reducible over F_p")]
    ReducibleModulus(Vec<u32>),
    #[error("no built-in modulus for q = {0}; supply one")]
    NoBuiltinModulus(u64),
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("division by zero")]
    DivisionByZero,
}

/// Built-in defining polynomials (Conway polynomials), little-endian.
const BUILTIN_MODULI: &[(u32, &[u32])] = &[
    (4, &[1, 1, 1]),
    (8, &[1, 1, 0, 1]),
    (9, &[2, 2, 1]),
    (16, &[1, 1, 0, 0, 1]),
    (25, &[2, 4, 1]),
    (27, &[1, 2, 0, 1]),
];

const TABLE_LIMIT: u32 = 256;

/// An element of some `F_q`. Only meaningful together with its [`FieldSpec`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// Packed index in `0..q`.
    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct Tables {
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

struct Inner {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    tables: Option<Tables>,
}

/// The field `F_q`. Cheap to clone; immutable after construction.
#[derive(Clone)]
pub struct FieldSpec(Arc<Inner>);

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.e == other.0.e && self.0.modulus == other.0.modulus)
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.0.p)
            .field("e", &self.0.e)
            .field("modulus", &self.0.modulus)
            .finish()
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.0.q)
    }
}

/// Splits `q` as `p^e`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q {
        if q.is_multiple_of(p) {
            break;
        }
        p += 1;
    }
    if p * p > q {
        return Some((q, 1));
    }
    let mut rest = q;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

impl FieldSpec {
    /// Builds `F_q`. For `q = p^e` with `e > 1`, `modulus` gives the monic
    /// defining polynomial `c_0 + c_1 t + ... + t^e` as `[c_0, ..., c_{e-1}, 1]`;
    /// when omitted a built-in polynomial is used for `q` in {4, 8, 9, 16, 25, 27}.
    pub fn new(q: u64, modulus: Option<&[u32]>) -> Result<FieldSpec, FieldError> {
        let (p, e) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        if q >= 1 << 31 {
            return Err(FieldError::TooLarge(q));
        }
        let (p, q) = (p as u32, q as u32);
        let modulus: Vec<u32> = match modulus {
            Some(m) => m.to_vec(),
            None if e == 1 => vec![0, 1],
            None => BUILTIN_MODULI
                .iter()
                .find(|(bq, _)| *bq == q)
                .map(|(_, m)| m.to_vec())
                .ok_or(FieldError::NoBuiltinModulus(q as u64))?,
        };
        if modulus.len() != e as usize + 1 {
            return Err(FieldError::InvalidModulus(format!(
                "expected {} coefficients for degree {}, got {}",
                e + 1,
                e,
                modulus.len()
            )));
        }
        if let Some(c) = modulus.iter().find(|&&c| c >= p) {
            return Err(FieldError::InvalidModulus(format!(
                "coefficient {c} is not below p = {p}"
            )));
        }
        if modulus[e as usize] != 1 {
            return Err(FieldError::InvalidModulus("modulus must be monic".into()));
        }
        if !poly::is_irreducible(&modulus, p) {
            return Err(FieldError::ReducibleModulus(modulus));
        }
        let mut inner = Inner {
            p,
            e,
            q,
            modulus,
            tables: None,
        };
        if e > 1 && q <= TABLE_LIMIT {
            inner.tables = Some(Tables::build(&inner));
        }
        Ok(FieldSpec(Arc::new(inner)))
    }

    /// The prime field or built-in extension of order `q`.
    pub fn of_order(q: u64) -> Result<FieldSpec, FieldError> {
        Self::new(q, None)
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.0.p
    }

    #[inline]
    pub fn e(&self) -> u32 {
        self.0.e
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.0.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn is_prime(&self) -> bool {
        self.0.e == 1
    }

    #[inline]
    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    #[inline]
    pub fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    /// Element with packed index `index`; `None` if `index >= q`.
    pub fn element(&self, index: u32) -> Option<FieldElement> {
        (index < self.0.q).then_some(FieldElement(index))
    }

    /// Image of an integer under `Z -> F_p -> F_q`.
    pub fn from_int(&self, v: i64) -> FieldElement {
        FieldElement(v.rem_euclid(self.0.p as i64) as u32)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Option<FieldElement> {
        if coeffs.len() != self.0.e as usize || coeffs.iter().any(|&c| c >= self.0.p) {
            return None;
        }
        Some(FieldElement(
            coeffs.iter().rev().fold(0, |acc, &c| acc * self.0.p + c),
        ))
    }

    /// Little-endian coefficients of `a` as a polynomial in the generator.
    pub fn coeffs(&self, a: FieldElement) -> Vec<u32> {
        unpack(a.0, self.0.p, self.0.e)
    }

    /// All `q` elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.0.q).map(FieldElement)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let f = &*self.0;
        if f.e == 1 {
            if f.p == 2 {
                return FieldElement(a.0 ^ b.0);
            }
            let s = a.0 as u64 + b.0 as u64;
            return FieldElement((s % f.p as u64) as u32);
        }
        match &f.tables {
            Some(t) => FieldElement(t.add[(a.0 * f.q + b.0) as usize]),
            None => FieldElement(poly_add(f, a.0, b.0)),
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        let f = &*self.0;
        if f.e == 1 {
            return FieldElement(if a.0 == 0 { 0 } else { f.p - a.0 });
        }
        match &f.tables {
            Some(t) => FieldElement(t.neg[a.0 as usize]),
            None => {
                let c: Vec<u32> = unpack(a.0, f.p, f.e)
                    .into_iter()
                    .map(|c| (f.p - c) % f.p)
                    .collect();
                FieldElement(pack(&c, f.p))
            }
        }
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let f = &*self.0;
        if f.e == 1 {
            return FieldElement(((a.0 as u64 * b.0 as u64) % f.p as u64) as u32);
        }
        match &f.tables {
            Some(t) => FieldElement(t.mul[(a.0 * f.q + b.0) as usize]),
            None => FieldElement(poly_mul(f, a.0, b.0)),
        }
    }

    /// `a * b + c`.
    #[inline]
    pub fn mul_add(&self, a: FieldElement, b: FieldElement, c: FieldElement) -> FieldElement {
        self.add(self.mul(a, b), c)
    }

    pub fn pow(&self, a: FieldElement, mut exp: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let f = &*self.0;
        if f.e == 1 {
            return Ok(FieldElement(mod_inverse(a.0, f.p)));
        }
        Ok(match &f.tables {
            Some(t) => FieldElement(t.inv[a.0 as usize]),
            // a^(q-2) = a^-1 in the multiplicative group of order q-1
            None => self.pow(a, f.q as u64 - 2),
        })
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }
}

fn mod_inverse(a: u32, p: u32) -> u32 {
    let (mut r0, mut r1) = (p as i64, a as i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let k = r0 / r1;
        (r0, r1) = (r1, r0 - k * r1);
        (t0, t1) = (t1, t0 - k * t1);
    }
    debug_assert_eq!(r0, 1);
    t0.rem_euclid(p as i64) as u32
}

fn unpack(mut idx: u32, p: u32, e: u32) -> Vec<u32> {
    (0..e)
        .map(|_| {
            let c = idx % p;
            idx /= p;
            c
        })
        .collect()
}

fn pack(coeffs: &[u32], p: u32) -> u32 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn poly_add(f: &Inner, a: u32, b: u32) -> u32 {
    let (ca, cb) = (unpack(a, f.p, f.e), unpack(b, f.p, f.e));
    let c: Vec<u32> = ca.iter().zip(&cb).map(|(x, y)| (x + y) % f.p).collect();
    pack(&c, f.p)
}

fn poly_mul(f: &Inner, a: u32, b: u32) -> u32 {
    let (ca, cb) = (unpack(a, f.p, f.e), unpack(b, f.p, f.e));
    let prod = poly::mul(&ca, &cb, f.p);
    let r = poly::rem(&prod, &f.modulus, f.p);
    let mut c = vec![0; f.e as usize];
    c[..r.len().min(f.e as usize)].copy_from_slice(&r[..r.len().min(f.e as usize)]);
    pack(&c, f.p)
}

impl Tables {
    fn build(f: &Inner) -> Tables {
        let q = f.q;
        let mut add = vec![0; (q * q) as usize];
        let mut mul = vec![0; (q * q) as usize];
        for a in 0..q {
            for b in 0..q {
                add[(a * q + b) as usize] = poly_add(f, a, b);
                mul[(a * q + b) as usize] = poly_mul(f, a, b);
            }
        }
        let mut neg = vec![0; q as usize];
        let mut inv = vec![0; q as usize];
        for a in 0..q {
            for b in 0..q {
                if add[(a * q + b) as usize] == 0 {
                    neg[a as usize] = b;
                }
                if mul[(a * q + b) as usize] == 1 {
                    inv[a as usize] = b;
                }
            }
        }
        Tables { add, mul, neg, inv }
    }
}

/// Dense polynomials over `F_p`, little-endian, used only to set up extensions.
mod poly {
    pub(super) fn trim(mut a: Vec<u32>) -> Vec<u32> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub(super) fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        trim(out.into_iter().map(|c| c as u32).collect())
    }

    /// Remainder of `a` modulo the monic polynomial `m`.
    pub(super) fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut r = trim(a.to_vec());
        let dm = m.len() - 1;
        debug_assert_eq!(m[dm], 1);
        while r.len() > dm {
            let lead = *r.last().unwrap() as u64;
            let shift = r.len() - 1 - dm;
            for (k, &c) in m.iter().enumerate() {
                let sub = lead * c as u64 % p as u64;
                r[shift + k] = ((r[shift + k] as u64 + p as u64 - sub) % p as u64) as u32;
            }
            r = trim(r);
        }
        r
    }

    /// Trial division by every monic polynomial of degree `1..=deg/2`.
    pub(super) fn is_irreducible(m: &[u32], p: u32) -> bool {
        let deg = m.len() - 1;
        for d in 1..=deg / 2 {
            let count = (p as u64).pow(d as u32);
            for idx in 0..count {
                let mut div = Vec::with_capacity(d + 1);
                let mut rest = idx;
                for _ in 0..d {
                    div.push((rest % p as u64) as u32);
                    rest /= p as u64;
                }
                div.push(1);
                if rem(m, &div, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ORDERS: &[u64] = &[2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27];

    #[test]
    fn builds_prime_field() {
        let f = FieldSpec::of_order(2).unwrap();
        assert_eq!((f.p(), f.e(), f.q()), (2, 1, 2));
    }

    #[test]
    fn rejects_non_prime_powers() {
        assert_eq!(
            FieldSpec::of_order(6).unwrap_err(),
            FieldError::NotPrimePower(6)
        );
        assert_eq!(
            FieldSpec::of_order(1).unwrap_err(),
            FieldError::NotPrimePower(1)
        );
        assert_eq!(
            FieldSpec::of_order(0).unwrap_err(),
            FieldError::NotPrimePower(0)
        );
        assert_eq!(
            FieldSpec::of_order(12).unwrap_err(),
            FieldError::NotPrimePower(12)
        );
    }

    #[test]
    fn missing_builtin_modulus() {
        assert_eq!(
            FieldSpec::of_order(32).unwrap_err(),
            FieldError::NoBuiltinModulus(32)
        );
        // t^5 + t^2 + 1 is irreducible over F_2
        let f = FieldSpec::new(32, Some(&[1, 0, 1, 0, 0, 1])).unwrap();
        assert_eq!(f.q(), 32);
    }

    #[test]
    fn reducible_modulus_rejected() {
        // t^2 + 1 = (t + 1)^2 over F_2
        assert!(matches!(
            FieldSpec::new(4, Some(&[1, 0, 1])),
            Err(FieldError::ReducibleModulus(_))
        ));
        // t^2 + 1 = (t + 1)(t + 2) over F_5
        assert!(matches!(
            FieldSpec::new(25, Some(&[1, 0, 1])),
            Err(FieldError::ReducibleModulus(_))
        ));
        assert!(matches!(
            FieldSpec::new(4, Some(&[1, 1, 2])),
            Err(FieldError::InvalidModulus(_))
        ));
        assert!(matches!(
            FieldSpec::new(4, Some(&[1, 1])),
            Err(FieldError::InvalidModulus(_))
        ));
    }

    #[test]
    fn f4_generator_squares_to_t_plus_one() {
        let f = FieldSpec::new(4, Some(&[1, 1, 1])).unwrap();
        let t = f.from_coeffs(&[0, 1]).unwrap();
        let t_plus_1 = f.from_coeffs(&[1, 1]).unwrap();
        assert_eq!(f.mul(t, t), t_plus_1);
    }

    #[test]
    fn inverses_small() {
        let f3 = FieldSpec::of_order(3).unwrap();
        let f7 = FieldSpec::of_order(7).unwrap();
        for q in ORDERS {
            let f = FieldSpec::of_order(*q).unwrap();
            assert_eq!(f.inv(f.one()).unwrap(), f.one());
            assert_eq!(f.inv(f.zero()), Err(FieldError::DivisionByZero));
        }
        assert_eq!(f3.inv(f3.from_int(2)).unwrap(), f3.from_int(2));
        assert_eq!(f7.inv(f7.from_int(3)).unwrap(), f7.from_int(5));
    }

    #[test]
    fn field_axioms_exhaustive() {
        for &q in ORDERS {
            let f = FieldSpec::of_order(q).unwrap();
            let els: Vec<_> = f.elements().collect();
            for &a in &els {
                assert_eq!(f.add(a, f.neg(a)), f.zero());
                for &b in &els {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for &c in &els {
                        assert_eq!(
                            f.mul(a, f.add(b, c)),
                            f.add(f.mul(a, b), f.mul(a, c)),
                            "q={q}"
                        );
                    }
                }
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
                    assert_eq!(f.pow(a, q - 1), f.one());
                }
            }
        }
    }

    #[test]
    fn multiplicative_group_is_cyclic_of_order_q_minus_one() {
        for &q in ORDERS {
            let f = FieldSpec::of_order(q).unwrap();
            let has_generator = f
                .elements()
                .skip(1)
                .any(|g| (1..q - 1).all(|k| f.pow(g, k) != f.one()));
            assert!(has_generator, "q={q}");
        }
    }

    #[test]
    fn table_and_polynomial_paths_agree() {
        // F_{3^6} = 729 > TABLE_LIMIT uses the polynomial path; compare with
        // a table built on the fly.
        let m = [2, 1, 0, 0, 0, 0, 1]; // t^6 + t + 2
        let big = FieldSpec::new(729, Some(&m)).unwrap();
        assert!(big.0.tables.is_none());
        let tables = Tables::build(&big.0);
        for a in (0..729).step_by(7) {
            for b in (0..729).step_by(11) {
                let (x, y) = (FieldElement(a), FieldElement(b));
                assert_eq!(big.mul(x, y).0, tables.mul[(a * 729 + b) as usize]);
                assert_eq!(big.add(x, y).0, tables.add[(a * 729 + b) as usize]);
            }
        }
        let x = FieldElement(500);
        assert_eq!(big.mul(x, big.inv(x).unwrap()), big.one());
    }

    #[test]
    fn coeff_packing_round_trips() {
        let f = FieldSpec::of_order(27).unwrap();
        for a in f.elements() {
            assert_eq!(f.from_coeffs(&f.coeffs(a)), Some(a));
        }
        assert_eq!(f.from_coeffs(&[3, 0, 0]), None);
    }

    #[test]
    fn prime_power_split() {
        assert_eq!(prime_power(2), Some((2, 1)));
        assert_eq!(prime_power(27), Some((3, 3)));
        assert_eq!(prime_power(49), Some((7, 2)));
        assert_eq!(prime_power(97), Some((97, 1)));
        assert_eq!(prime_power(100), None);
    }
}
