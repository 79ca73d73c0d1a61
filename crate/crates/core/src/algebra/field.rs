//! Small finite fields GF(p^k) with q <= 81, backed by full operation tables.
//!
//! Elements are encoded as integers `0..q` whose base-`p` digits are the
//! coefficients of a polynomial in the generator `t` (lowest degree first).
//! The defining modulus is the least monic irreducible polynomial of degree
//! `k` under the ordering of that same base-`p` code.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub const MAX_FIELD_ORDER: u32 = 81;
const MAX_DEGREE: u32 = 4;

#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    q: u16,
    value: u16,
}

impl FieldElement {
    /// Order of the field this element belongs to; doubles as the field id.
    pub fn field_order(self) -> u32 {
        u32::from(self.q)
    }

    /// Integer code of the element (base-`p` digits are the coefficients).
    pub fn code(self) -> u16 {
        self.value
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn is_one(self) -> bool {
        self.value == 1
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@GF({})", self.value, self.q)
    }
}

struct Tables {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
    frob: Vec<u16>,
    primitive: u16,
}

/// Handle to a finite field. Cloning is cheap; the tables are shared.
#[derive(Clone)]
pub struct Field(Arc<Tables>);

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}) mod {:?}", self.0.q, self.0.modulus)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.0.q == other.0.q
    }
}

impl Eq for Field {}

impl std::hash::Hash for Field {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.q.hash(state);
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
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

/// Splits `q` as `p^k` with `p` prime, if possible.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q && q % p != 0 {
        p += 1;
    }
    if q % p != 0 {
        p = q;
    }
    let mut rest = q;
    let mut k = 0;
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

fn digits(mut code: u32, p: u32, k: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(k as usize);
    for _ in 0..k {
        out.push(code % p);
        code /= p;
    }
    out
}

fn undigits(coeffs: &[u32], p: u32) -> u32 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Remainder of `a` modulo the monic polynomial `m` over GF(p).
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for (i, &c) in m.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - (lead * c) % p) % p;
            }
        }
        r.pop();
    }
    r
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
fn is_irreducible(m: &[u32], p: u32) -> bool {
    let deg = m.len() - 1;
    for d in 1..=deg / 2 {
        for code in 0..p.pow(d as u32) {
            let mut f = digits(code, p, d as u32);
            f.push(1);
            if poly_rem(m, &f, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Least monic irreducible polynomial of degree `k` over GF(p), coefficients
/// lowest degree first (length `k + 1`).
pub fn least_irreducible(p: u32, k: u32) -> Vec<u32> {
    for code in 0..p.pow(k) {
        let mut m = digits(code, p, k);
        m.push(1);
        if k == 1 || is_irreducible(&m, p) {
            return m;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl Field {
    pub fn new(q: u32) -> Result<Self> {
        let (p, k) = prime_power(u64::from(q))
            .ok_or_else(|| Error::InvalidField(format!("{q} is not a prime power")))?;
        if q > MAX_FIELD_ORDER || k > MAX_DEGREE {
            return Err(Error::InvalidField(format!(
                "GF({q}) exceeds the supported size GF({MAX_FIELD_ORDER})"
            )));
        }
        let p = p as u32;
        let modulus = least_irreducible(p, k);
        Ok(Self::with_modulus(p, k, modulus))
    }

    fn with_modulus(p: u32, k: u32, modulus: Vec<u32>) -> Self {
        let q = p.pow(k);
        let n = q as usize;
        let mut add = vec![0u16; n * n];
        let mut mul = vec![0u16; n * n];
        for a in 0..q {
            let da = digits(a, p, k);
            for b in 0..q {
                let db = digits(b, p, k);
                let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = undigits(&sum, p) as u16;
                let mut prod = vec![0u32; (2 * k - 1) as usize];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                let mut rem = poly_rem(&prod, &modulus, p);
                rem.resize(k as usize, 0);
                mul[(a * q + b) as usize] = undigits(&rem, p) as u16;
            }
        }
        let neg = (0..q)
            .map(|a| (0..q).find(|&b| add[(a * q + b) as usize] == 0).unwrap() as u16)
            .collect();
        let inv = (0..q)
            .map(|a| {
                if a == 0 {
                    0
                } else {
                    (1..q).find(|&b| mul[(a * q + b) as usize] == 1).unwrap() as u16
                }
            })
            .collect();
        let pow = |mut base: u16, mut e: u32| {
            let mut acc = 1u16;
            while e > 0 {
                if e & 1 == 1 {
                    acc = mul[(u32::from(acc) * q + u32::from(base)) as usize];
                }
                base = mul[(u32::from(base) * q + u32::from(base)) as usize];
                e >>= 1;
            }
            acc
        };
        let frob = (0..q).map(|a| pow(a as u16, p)).collect();
        let primitive = (1..q)
            .find(|&a| {
                let mut x = a as u16;
                let mut ord = 1;
                while x != 1 {
                    x = mul[(u32::from(x) * q + a) as usize];
                    ord += 1;
                }
                ord == q - 1
            })
            .unwrap() as u16;
        Field(Arc::new(Tables {
            p,
            k,
            q,
            modulus,
            add,
            mul,
            neg,
            inv,
            frob,
            primitive,
        }))
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.k
    }

    pub fn order(&self) -> u32 {
        self.0.q
    }

    /// Modulus coefficients, lowest degree first.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn zero(&self) -> FieldElement {
        self.elem(0)
    }

    pub fn one(&self) -> FieldElement {
        self.elem(1)
    }

    /// Generator of the multiplicative group.
    pub fn primitive_element(&self) -> FieldElement {
        self.elem(self.0.primitive)
    }

    /// Element with the given integer code; panics if out of range.
    pub fn elem(&self, code: u16) -> FieldElement {
        assert!(u32::from(code) < self.0.q, "code {code} outside GF({})", self.0.q);
        FieldElement {
            q: self.0.q as u16,
            value: code,
        }
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElement {
        let p = i64::from(self.0.p);
        self.elem(n.rem_euclid(p) as u16)
    }

    pub fn from_coefficients(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() != self.0.k as usize {
            return Err(Error::InvalidField(format!(
                "expected {} coefficients, got {}",
                self.0.k,
                coeffs.len()
            )));
        }
        let reduced: Vec<u32> = coeffs.iter().map(|c| c % self.0.p).collect();
        Ok(self.elem(undigits(&reduced, self.0.p) as u16))
    }

    pub fn coefficients(&self, a: FieldElement) -> Vec<u32> {
        digits(u32::from(a.value), self.0.p, self.0.k)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.0.q).map(move |c| self.elem(c as u16))
    }

    fn check(&self, a: FieldElement) -> Result<u32> {
        if u32::from(a.q) != self.0.q {
            return Err(Error::FieldMismatch {
                left: self.0.q,
                right: u32::from(a.q),
            });
        }
        Ok(u32::from(a.value))
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        let (x, y) = (self.check(a)?, self.check(b)?);
        Ok(self.elem(self.0.add[(x * self.0.q + y) as usize]))
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        let nb = self.neg(b)?;
        self.add(a, nb)
    }

    pub fn neg(&self, a: FieldElement) -> Result<FieldElement> {
        let x = self.check(a)?;
        Ok(self.elem(self.0.neg[x as usize]))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        let (x, y) = (self.check(a)?, self.check(b)?);
        Ok(self.elem(self.0.mul[(x * self.0.q + y) as usize]))
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        let x = self.check(a)?;
        if x == 0 {
            return Err(Error::InvalidScalar);
        }
        Ok(self.elem(self.0.inv[x as usize]))
    }

    /// The Frobenius map `x -> x^p`.
    pub fn frobenius(&self, a: FieldElement) -> Result<FieldElement> {
        let x = self.check(a)?;
        Ok(self.elem(self.0.frob[x as usize]))
    }

    /// The involutory automorphism `x -> x^r` of GF(r^2); this is the
    /// conjugation used by hermitian forms.
    pub fn conjugate(&self, a: FieldElement) -> Result<FieldElement> {
        if self.0.k % 2 != 0 {
            return Err(Error::InvalidField(format!(
                "GF({}) has no involutory automorphism",
                self.0.q
            )));
        }
        let mut x = a;
        for _ in 0..self.0.k / 2 {
            x = self.frobenius(x)?;
        }
        Ok(x)
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> Result<FieldElement> {
        let x = self.check(a)?;
        Ok(self.elem(self.pow_raw(x as u16, e)))
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, a: FieldElement) -> Result<u32> {
        let x = self.check(a)?;
        if x == 0 {
            return Err(Error::InvalidScalar);
        }
        let mut y = x as u16;
        let mut ord = 1;
        while y != 1 {
            y = self.mul_raw(y, x as u16);
            ord += 1;
        }
        Ok(ord)
    }

    // Raw-code arithmetic for the matrix kernels; codes are trusted.
    #[inline]
    pub(crate) fn add_raw(&self, a: u16, b: u16) -> u16 {
        self.0.add[(u32::from(a) * self.0.q + u32::from(b)) as usize]
    }

    #[inline]
    pub(crate) fn mul_raw(&self, a: u16, b: u16) -> u16 {
        self.0.mul[(u32::from(a) * self.0.q + u32::from(b)) as usize]
    }

    #[inline]
    pub(crate) fn neg_raw(&self, a: u16) -> u16 {
        self.0.neg[a as usize]
    }

    #[inline]
    pub(crate) fn inv_raw(&self, a: u16) -> u16 {
        self.0.inv[a as usize]
    }

    pub(crate) fn conj_raw(&self, a: u16) -> u16 {
        let mut x = a;
        for _ in 0..self.0.k / 2 {
            x = self.0.frob[x as usize];
        }
        x
    }

    pub(crate) fn pow_raw(&self, mut base: u16, mut e: u64) -> u16 {
        let mut acc = 1u16;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.mul_raw(base, base);
            e >>= 1;
        }
        acc
    }
}
