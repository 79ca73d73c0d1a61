//! Exact arithmetic over GF(p^k), dense matrices, and classical forms.

pub mod field;
pub mod form;
pub mod matrix;

pub use field::{prime_power, Field, FieldElement};
pub use form::{form_preserved, ClassicalForm, FormKind};
pub use matrix::Matrix;

use crate::error::{Error, Result};

/// Least `e >= 1` with `q^e = 1 (mod p)`: the degree of the smallest field
/// extension of GF(q) containing a primitive `p`-th root of unity.
pub fn minimal_e(p: u64, q: u64) -> Result<u64> {
    if p < 3 || !field::is_prime(p) {
        return Err(Error::PreconditionViolated(format!("{p} is not an odd prime")));
    }
    if prime_power(q).is_none() {
        return Err(Error::PreconditionViolated(format!("{q} is not a prime power")));
    }
    if q % p == 0 {
        return Err(Error::NotSemisimple { p, q });
    }
    let base = q % p;
    let mut acc = base;
    let mut e = 1;
    while acc != 1 {
        acc = acc * base % p;
        e += 1;
    }
    Ok(e)
}
