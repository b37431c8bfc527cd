//! Arithmetic in GF(q) for any prime power q.
//!
//! Elements are encoded by their index in `[0, q)`: the base-p digits of the
//! index are the coefficients of the element as a polynomial over GF(p),
//! least significant digit first. The field modulus is the lexicographically
//! smallest monic irreducible polynomial of degree m, with coefficients
//! compared from the constant term upward.
//!
//! Fields with at most 256 elements use full addition and multiplication
//! tables, fields with at most 2^16 elements use log/antilog tables, and
//! larger fields fall back to polynomial arithmetic.

use serde::Serialize;
use std::fmt;

use crate::error::{Error, Result};

const FULL_TABLE_LIMIT: u32 = 1 << 8;
const LOG_TABLE_LIMIT: u32 = 1 << 16;

/// An element of GF(q), identified by its index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize)]
#[serde(transparent)]
#[repr(transparent)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Callers guarantee `x < q` for the field in use.
    #[inline]
    pub(crate) fn from_raw(x: u32) -> FieldElement {
        FieldElement(x)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Debug)]
enum Tables {
    Full {
        add: Vec<u32>,
        mul: Vec<u32>,
        neg: Vec<u32>,
        inv: Vec<u32>,
    },
    Log {
        exp: Vec<u32>,
        log: Vec<u32>,
        neg: Vec<u32>,
    },
    None,
}

/// A finite field GF(p^m) with a fixed modulus.
#[derive(Clone, Debug)]
pub struct FieldSpec {
    p: u32,
    m: u32,
    q: u32,
    modulus: Vec<u32>,
    tables: Tables,
}

/// Serializable description of a field, attached to reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FieldInfo {
    pub name: String,
    pub q: u32,
    pub p: u32,
    pub m: u32,
    /// Modulus coefficients, constant term first.
    pub modulus: Vec<u32>,
    pub modulus_text: String,
}

/// Builds GF(q). Fails with [`Error::NotPrimePower`] unless q = p^m.
pub fn build_field(q: u64) -> Result<FieldSpec> {
    if q < 2 {
        return Err(Error::NotPrimePower { q });
    }
    if q > u64::from(u32::MAX) {
        return Err(Error::FieldOrderOutOfRange { q });
    }
    let (p, m) = prime_power(q).ok_or(Error::NotPrimePower { q })?;
    let (p, q) = (p as u32, q as u32);
    let modulus = smallest_irreducible(p, m);
    let mut field = FieldSpec {
        p,
        m,
        q,
        modulus,
        tables: Tables::None,
    };
    field.tables = field.build_tables();
    Ok(field)
}

/// Returns `(p, m)` with `q = p^m` when q is a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = smallest_prime_factor(q);
    let mut rest = q;
    let mut m = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p, m))
}

fn smallest_prime_factor(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return d;
        }
        d += 2;
    }
    n
}

fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// Polynomials over GF(p) are coefficient vectors, constant term first.

fn poly_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

/// Remainder of `a` modulo the monic polynomial `b`.
fn poly_rem_monic(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let db = b.len() - 1;
    while r.len() > db {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        if lead != 0 {
            for (i, &c) in b.iter().enumerate() {
                let t = (u64::from(lead) * u64::from(c) % u64::from(p)) as u32;
                r[shift + i] = ((u64::from(r[shift + i]) + u64::from(p - t)) % u64::from(p)) as u32;
            }
        }
        r.pop();
        poly_trim(&mut r);
    }
    r
}

/// Monic polynomial of degree `deg` whose lower coefficients are the digits of
/// `t`, with the constant term as the most significant digit.
fn monic_from_lex_index(mut t: u64, deg: u32, p: u32) -> Vec<u32> {
    let mut coeffs = vec![0u32; deg as usize + 1];
    coeffs[deg as usize] = 1;
    for i in (0..deg as usize).rev() {
        coeffs[i] = (t % u64::from(p)) as u32;
        t /= u64::from(p);
    }
    coeffs
}

fn mod_inv(a: u32, p: u32) -> u32 {
    let (mut acc, mut base, mut e) = (1u64, u64::from(a), u64::from(p) - 2);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % u64::from(p);
        }
        base = base * base % u64::from(p);
        e >>= 1;
    }
    acc as u32
}

/// Remainder of `a` modulo a nonzero `b` with any leading coefficient.
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let inv = u64::from(mod_inv(*b.last().unwrap(), p));
    let monic: Vec<u32> = b.iter().map(|&c| (u64::from(c) * inv % u64::from(p)) as u32).collect();
    poly_rem_monic(a, &monic, p)
}

fn poly_gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    poly_trim(&mut a);
    poly_trim(&mut b);
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = std::mem::replace(&mut b, r);
    }
    a
}

fn poly_mulmod(a: &[u32], b: &[u32], f: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let pp = u64::from(p);
    let mut prod = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = ((u64::from(prod[i + j]) + u64::from(x) * u64::from(y) % pp) % pp) as u32;
        }
    }
    poly_rem_monic(&prod, f, p)
}

fn poly_powmod(a: &[u32], mut e: u64, f: &[u32], p: u32) -> Vec<u32> {
    let mut acc = vec![1u32];
    let mut base = poly_rem_monic(a, f, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &base, f, p);
        }
        base = poly_mulmod(&base, &base, f, p);
        e >>= 1;
    }
    acc
}

/// `g - x`, for a reduced `g`.
fn minus_x(g: &[u32], p: u32) -> Vec<u32> {
    let mut r = g.to_vec();
    r.resize(r.len().max(2), 0);
    r[1] = (r[1] + p - 1) % p;
    poly_trim(&mut r);
    r
}

/// Ben-Or's test: the monic `f` of degree m is irreducible iff
/// x^(p^i) - x is coprime to f for every i <= m/2. Small factors are found
/// early, which matters because most candidates have one.
pub(crate) fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = (f.len() - 1) as u32;
    if deg <= 1 {
        return deg == 1;
    }
    let mut frob = poly_rem_monic(&[0, 1], f, p);
    for _ in 0..deg / 2 {
        frob = poly_powmod(&frob, u64::from(p), f, p);
        if poly_gcd(f, &minus_x(&frob, p), p).len() != 1 {
            return false;
        }
    }
    true
}

fn smallest_irreducible(p: u32, m: u32) -> Vec<u32> {
    let count = u64::from(p).pow(m);
    // the constant term is the leading digit, and for m >= 2 a zero
    // constant term means x divides the candidate
    let start = if m >= 2 { count / u64::from(p) } else { 0 };
    (start..count)
        .map(|t| monic_from_lex_index(t, m, p))
        .find(|f| is_irreducible(f, p))
        .expect("an irreducible polynomial exists for every degree")
}

impl FieldSpec {
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Modulus coefficients, constant term first; the leading 1 is included.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn name(&self) -> String {
        format!("GF({})", self.q)
    }

    pub fn info(&self) -> FieldInfo {
        FieldInfo {
            name: self.name(),
            q: self.q,
            p: self.p,
            m: self.m,
            modulus: self.modulus.clone(),
            modulus_text: format_poly(&self.modulus),
        }
    }

    pub fn element(&self, index: u64) -> Result<FieldElement> {
        if index < u64::from(self.q) {
            Ok(FieldElement(index as u32))
        } else {
            Err(Error::InvalidElement { index, q: self.q })
        }
    }

    /// All q elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q).map(FieldElement)
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.add_raw(a.0, b.0))
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.add_raw(a.0, self.neg_raw(b.0)))
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.neg_raw(a.0))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.mul_raw(a.0, b.0))
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(FieldElement(self.inv_raw(a.0)))
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        FieldElement(self.pow_raw(a.0, e))
    }

    #[inline]
    pub(crate) fn add_raw(&self, a: u32, b: u32) -> u32 {
        match &self.tables {
            Tables::Full { add, .. } => add[(a * self.q + b) as usize],
            _ if self.p == 2 => a ^ b,
            _ => self.add_direct(a, b),
        }
    }

    #[inline]
    pub(crate) fn neg_raw(&self, a: u32) -> u32 {
        match &self.tables {
            Tables::Full { neg, .. } | Tables::Log { neg, .. } => neg[a as usize],
            Tables::None => self.neg_direct(a),
        }
    }

    #[inline]
    pub(crate) fn mul_raw(&self, a: u32, b: u32) -> u32 {
        match &self.tables {
            Tables::Full { mul, .. } => mul[(a * self.q + b) as usize],
            Tables::Log { exp, log, .. } => {
                if a == 0 || b == 0 {
                    0
                } else {
                    exp[(log[a as usize] + log[b as usize]) as usize]
                }
            }
            Tables::None => self.mul_direct(a, b),
        }
    }

    /// Inverse of a nonzero element; 0 maps to 0.
    pub(crate) fn inv_raw(&self, a: u32) -> u32 {
        match &self.tables {
            Tables::Full { inv, .. } => inv[a as usize],
            Tables::Log { exp, log, .. } => {
                if a == 0 {
                    0
                } else {
                    let l = log[a as usize];
                    exp[((self.q - 1 - l) % (self.q - 1)) as usize]
                }
            }
            Tables::None => {
                if a == 0 {
                    0
                } else {
                    self.pow_raw(a, u64::from(self.q) - 2)
                }
            }
        }
    }

    fn pow_raw(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.mul_raw(base, base);
            e >>= 1;
        }
        acc
    }

    fn digits(&self, mut a: u32) -> Vec<u32> {
        let mut out = vec![0; self.m as usize];
        for d in out.iter_mut() {
            *d = a % self.p;
            a /= self.p;
        }
        out
    }

    fn pack_digits(&self, digits: &[u32]) -> u32 {
        digits.iter().rev().fold(0u32, |acc, &d| acc * self.p + d)
    }

    fn add_direct(&self, a: u32, b: u32) -> u32 {
        let (da, db) = (self.digits(a), self.digits(b));
        let p = u64::from(self.p);
        let sum: Vec<u32> = da
            .iter()
            .zip(&db)
            .map(|(&x, &y)| ((u64::from(x) + u64::from(y)) % p) as u32)
            .collect();
        self.pack_digits(&sum)
    }

    fn neg_direct(&self, a: u32) -> u32 {
        let d: Vec<u32> = self
            .digits(a)
            .iter()
            .map(|&x| (self.p - x) % self.p)
            .collect();
        self.pack_digits(&d)
    }

    fn mul_direct(&self, a: u32, b: u32) -> u32 {
        let p = u64::from(self.p);
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u32; da.len() + db.len()];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                let t = (u64::from(prod[i + j]) + u64::from(x) * u64::from(y)) % p;
                prod[i + j] = t as u32;
            }
        }
        let mut r = poly_rem_monic(&prod, &self.modulus, self.p);
        r.resize(self.m as usize, 0);
        self.pack_digits(&r)
    }

    fn primitive_element(&self) -> u32 {
        let order = u64::from(self.q) - 1;
        if order == 1 {
            return 1;
        }
        let factors = distinct_prime_factors(order);
        (2..self.q)
            .find(|&g| {
                factors
                    .iter()
                    .all(|r| self.pow_direct(g, order / r) != 1)
            })
            .expect("the multiplicative group is cyclic")
    }

    fn pow_direct(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_direct(acc, base);
            }
            base = self.mul_direct(base, base);
            e >>= 1;
        }
        acc
    }

    fn build_tables(&self) -> Tables {
        let q = self.q;
        if q > LOG_TABLE_LIMIT {
            return Tables::None;
        }
        let g = self.primitive_element();
        let mut exp = vec![0u32; 2 * (q as usize - 1)];
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for i in 0..(q - 1) {
            exp[i as usize] = x;
            exp[(i + q - 1) as usize] = x;
            log[x as usize] = i;
            x = self.mul_direct(x, g);
        }
        let neg: Vec<u32> = (0..q).map(|a| self.neg_direct(a)).collect();
        if q > FULL_TABLE_LIMIT {
            return Tables::Log { exp, log, neg };
        }
        let logmul = |a: u32, b: u32| {
            if a == 0 || b == 0 {
                0
            } else {
                exp[(log[a as usize] + log[b as usize]) as usize]
            }
        };
        let mut add = vec![0u32; (q * q) as usize];
        let mut mul = vec![0u32; (q * q) as usize];
        for a in 0..q {
            for b in 0..q {
                add[(a * q + b) as usize] = self.add_direct(a, b);
                mul[(a * q + b) as usize] = logmul(a, b);
            }
        }
        let inv = (0..q)
            .map(|a| {
                if a == 0 {
                    0
                } else {
                    exp[((q - 1 - log[a as usize]) % (q - 1)) as usize]
                }
            })
            .collect();
        Tables::Full { add, mul, neg, inv }
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

/// Renders a polynomial such as `x^2 + x + 1`.
pub fn format_poly(coeffs: &[u32]) -> String {
    let mut terms = Vec::new();
    for (i, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let coef = if c == 1 && i > 0 {
            String::new()
        } else {
            c.to_string()
        };
        let term = match i {
            0 => coef,
            1 => format!("{coef}x"),
            _ => format!("{coef}x^{i}"),
        };
        terms.push(term);
    }
    if terms.is_empty() {
        "0".to_owned()
    } else {
        terms.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(f: &FieldSpec, i: u64) -> FieldElement {
        f.element(i).unwrap()
    }

    #[test]
    fn prime_fields() {
        let f = build_field(2).unwrap();
        assert_eq!((f.characteristic(), f.degree(), f.order()), (2, 1, 2));
        assert_eq!(f.add(el(&f, 1), el(&f, 1)), FieldElement::ZERO);

        let f3 = build_field(3).unwrap();
        assert_eq!(f3.inv(el(&f3, 2)).unwrap(), el(&f3, 2));
    }

    #[test]
    fn gf4_modulus_and_product() {
        // The four monic quadratics over GF(2): only x^2 + x + 1 has no root.
        let roots = |c0: u32, c1: u32| (0..2).any(|x| (x * x + c1 * x + c0).is_multiple_of(2));
        let irreducible: Vec<_> = [(0, 0), (0, 1), (1, 0), (1, 1)]
            .into_iter()
            .filter(|&(c0, c1)| !roots(c0, c1))
            .collect();
        assert_eq!(irreducible, vec![(1, 1)]);

        let f = build_field(4).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        assert_eq!(f.info().modulus_text, "x^2 + x + 1");
        assert_eq!(f.mul(el(&f, 2), el(&f, 2)), el(&f, 3));
    }

    #[test]
    fn rejects_non_prime_powers() {
        assert_eq!(build_field(6).unwrap_err(), Error::NotPrimePower { q: 6 });
        assert!(build_field(1).is_err());
        assert!(build_field(12).is_err());
        assert!(build_field(100).is_err());
    }

    #[test]
    fn element_listing() {
        for q in [2u64, 3, 4] {
            let f = build_field(q).unwrap();
            let idx: Vec<u32> = f.elements().map(FieldElement::index).collect();
            assert_eq!(idx, (0..q as u32).collect::<Vec<_>>());
        }
    }

    #[test]
    fn inverse_of_zero() {
        let f = build_field(9).unwrap();
        assert_eq!(f.inv(FieldElement::ZERO), Err(Error::DivisionByZero));
        assert!(f.element(9).is_err());
    }

    fn has_factor_by_trial_division(f: &[u32], p: u32) -> bool {
        let deg = (f.len() - 1) as u32;
        (1..=deg / 2).any(|d| {
            (0..u64::from(p).pow(d)).any(|t| poly_rem_monic(f, &monic_from_lex_index(t, d, p), p).is_empty())
        })
    }

    #[test]
    fn irreducibility_matches_trial_division() {
        for (p, max_deg) in [(2u32, 8u32), (3, 5), (5, 4), (7, 3)] {
            for deg in 1..=max_deg {
                for t in 0..u64::from(p).pow(deg) {
                    let f = monic_from_lex_index(t, deg, p);
                    assert_eq!(is_irreducible(&f, p), !has_factor_by_trial_division(&f, p), "{f:?} over GF({p})");
                }
            }
        }
    }

    #[test]
    fn gf8_takes_lexicographically_first_modulus() {
        // Candidates by (c0, c1, c2): x^3+1 and x^3+x^2+... ordering puts
        // x^3 + x^2 + 1 (c0=1, c1=0, c2=1) before x^3 + x + 1 (c0=1, c1=1).
        let f = build_field(8).unwrap();
        assert_eq!(f.modulus(), &[1, 0, 1, 1]);
    }

    fn check_axioms(f: &FieldSpec) {
        let q = u64::from(f.order());
        let els: Vec<_> = f.elements().collect();
        for &a in &els {
            assert_eq!(f.add(a, f.neg(a)), FieldElement::ZERO);
            if !a.is_zero() {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElement::ONE);
                assert_eq!(f.pow(a, q - 1), FieldElement::ONE);
            }
            for &b in &els {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for &c in &els {
                    assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive() {
        for q in [2, 3, 4, 5, 7, 8, 9, 16, 25, 27, 32, 49, 64] {
            check_axioms(&build_field(q).unwrap());
        }
    }

    #[test]
    fn table_paths_agree_with_direct_arithmetic() {
        for q in [243u64, 256, 343, 1024, 4096] {
            let f = build_field(q).unwrap();
            for a in (0..f.order()).step_by(7) {
                for b in (0..f.order()).step_by(11) {
                    assert_eq!(f.mul_raw(a, b), f.mul_direct(a, b));
                    assert_eq!(f.add_raw(a, b), f.add_direct(a, b));
                }
            }
        }
    }

    #[test]
    fn large_field_without_tables() {
        let f = build_field(1 << 17).unwrap();
        assert!(matches!(f.tables, Tables::None));
        assert!(is_irreducible(f.modulus(), 2));
        let a = el(&f, 12345);
        assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElement::ONE);
        let f = build_field(65537).unwrap();
        assert!(matches!(f.tables, Tables::None));
        assert_eq!(f.mul(el(&f, 65536), el(&f, 65536)), FieldElement::ONE);
    }
}
