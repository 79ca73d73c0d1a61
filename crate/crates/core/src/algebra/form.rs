//! Bilinear, sesquilinear and quadratic forms, and the isometry test that
//! serves as the membership criterion for Sp, SU and Omega.

use serde::{Deserialize, Serialize};

use super::field::{Field, FieldElement};
use super::matrix::Matrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormKind {
    None,
    Symplectic,
    Hermitian,
    Quadratic,
}

/// A classical form `kappa(u, v) = u^T G v^sigma`, with `sigma` the
/// involutory automorphism for hermitian forms and the identity otherwise.
/// Quadratic forms additionally carry `Q(e_i)`; the polar form of `Q` is the
/// Gram matrix, so `G_ii = 2 Q(e_i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalForm {
    kind: FormKind,
    gram: Matrix,
    quad_diag: Option<Vec<FieldElement>>,
}

impl ClassicalForm {
    pub fn new(kind: FormKind, gram: Matrix, quad_diag: Option<Vec<FieldElement>>) -> Result<Self> {
        let f = gram.field().clone();
        let n = gram.dim();
        let bad = |msg: &str| Err(Error::PreconditionViolated(msg.to_string()));
        match kind {
            FormKind::None => {}
            FormKind::Symplectic => {
                if gram.det().is_zero() {
                    return bad("symplectic Gram matrix is degenerate");
                }
                for i in 0..n {
                    if !gram.get(i, i).is_zero() {
                        return bad("symplectic Gram matrix is not alternating");
                    }
                    for j in 0..n {
                        if gram.get(i, j) != f.neg(gram.get(j, i))? {
                            return bad("symplectic Gram matrix is not alternating");
                        }
                    }
                }
            }
            FormKind::Hermitian => {
                if gram.transpose().conjugate()? != gram {
                    return bad("hermitian Gram matrix is not conjugate-symmetric");
                }
                if gram.det().is_zero() {
                    return bad("hermitian Gram matrix is degenerate");
                }
            }
            FormKind::Quadratic => {
                let Some(diag) = quad_diag.as_ref() else {
                    return bad("quadratic form needs its diagonal values");
                };
                if diag.len() != n {
                    return Err(Error::DimensionMismatch("quadratic diagonal length".into()));
                }
                if gram.transpose() != gram {
                    return bad("polar form of a quadratic form must be symmetric");
                }
                for (i, &d) in diag.iter().enumerate() {
                    if gram.get(i, i) != f.add(d, d)? {
                        return bad("polar form does not match the quadratic diagonal");
                    }
                }
            }
        }
        if kind != FormKind::Quadratic && quad_diag.is_some() {
            return bad("diagonal values only apply to quadratic forms");
        }
        Ok(ClassicalForm { kind, gram, quad_diag })
    }

    pub fn none(field: &Field, n: usize) -> Result<Self> {
        Self::new(FormKind::None, Matrix::identity(field, n)?, None)
    }

    /// Antidiagonal form with `+1` above the antidiagonal midpoint and `-1`
    /// below it, so `kappa(e_i, e_{n-1-i}) = 1` for `i < n/2`.
    pub fn standard_symplectic(field: &Field, n: usize) -> Result<Self> {
        if n % 2 != 0 {
            return Err(Error::PreconditionViolated("symplectic dimension must be even".into()));
        }
        let mut g = Matrix::from_codes(field, n, &vec![0; n * n])?;
        for i in 0..n {
            let v = if i < n / 2 { field.one() } else { field.neg(field.one())? };
            g.set(i, n - 1 - i, v)?;
        }
        Self::new(FormKind::Symplectic, g, None)
    }

    /// Identity Gram matrix over GF(r^2).
    pub fn standard_hermitian(field: &Field, n: usize) -> Result<Self> {
        Self::new(FormKind::Hermitian, Matrix::identity(field, n)?, None)
    }

    /// Split form on `e_1..e_m, f_1..f_m` (indices `0..m` then `m..2m`):
    /// `Q(v) = sum v_i v_{m+i}`.
    pub fn hyperbolic_quadratic(field: &Field, m: usize) -> Result<Self> {
        let n = 2 * m;
        let mut g = Matrix::from_codes(field, n, &vec![0; n * n])?;
        for i in 0..m {
            g.set(i, m + i, field.one())?;
            g.set(m + i, i, field.one())?;
        }
        Self::new(FormKind::Quadratic, g, Some(vec![field.zero(); n]))
    }

    /// Non-split form in dimension `2m`: `m - 1` hyperbolic pairs
    /// (`e_i` at `0..m-1`, `f_i` at `m-1..2m-2`) plus an anisotropic plane
    /// `x^2 - nu y^2` on the last two coordinates, `nu` the least non-square.
    /// Odd characteristic only.
    pub fn elliptic_quadratic(field: &Field, m: usize) -> Result<Self> {
        if field.characteristic() == 2 {
            return Err(Error::PreconditionViolated(
                "elliptic normal form implemented for odd characteristic".into(),
            ));
        }
        let n = 2 * m;
        let h = m - 1;
        let nu = field
            .elements()
            .find(|&a| !a.is_zero() && field.elements().all(|b| field.mul(b, b).unwrap() != a))
            .expect("odd-order fields have non-squares");
        let mut g = Matrix::from_codes(field, n, &vec![0; n * n])?;
        let mut diag = vec![field.zero(); n];
        for i in 0..h {
            g.set(i, h + i, field.one())?;
            g.set(h + i, i, field.one())?;
        }
        let minus_nu = field.neg(nu)?;
        diag[n - 2] = field.one();
        diag[n - 1] = minus_nu;
        g.set(n - 2, n - 2, field.add(field.one(), field.one())?)?;
        g.set(n - 1, n - 1, field.add(minus_nu, minus_nu)?)?;
        Self::new(FormKind::Quadratic, g, Some(diag))
    }

    pub fn kind(&self) -> FormKind {
        self.kind
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn field(&self) -> &Field {
        self.gram.field()
    }

    pub fn dim(&self) -> usize {
        self.gram.dim()
    }

    fn sigma(&self, a: u16) -> u16 {
        if self.kind == FormKind::Hermitian {
            self.field().conj_raw(a)
        } else {
            a
        }
    }

    /// `kappa(u, v)` on vectors of element codes.
    pub fn bilinear(&self, u: &[u16], v: &[u16]) -> u16 {
        let f = self.field();
        let n = self.dim();
        let g = self.gram.codes();
        let mut acc = 0u16;
        for i in 0..n {
            if u[i] == 0 {
                continue;
            }
            for j in 0..n {
                let t = f.mul_raw(g[i * n + j], self.sigma(v[j]));
                acc = f.add_raw(acc, f.mul_raw(u[i], t));
            }
        }
        acc
    }

    /// `Q(v)` for quadratic forms; `kappa(v, v)` otherwise.
    pub fn quad(&self, v: &[u16]) -> u16 {
        let Some(diag) = &self.quad_diag else {
            return self.bilinear(v, v);
        };
        let f = self.field();
        let n = self.dim();
        let g = self.gram.codes();
        let mut acc = 0u16;
        for i in 0..n {
            acc = f.add_raw(acc, f.mul_raw(diag[i].code(), f.mul_raw(v[i], v[i])));
            for j in i + 1..n {
                acc = f.add_raw(acc, f.mul_raw(g[i * n + j], f.mul_raw(v[i], v[j])));
            }
        }
        acc
    }
}

/// True iff `A^T G A^sigma = G` and, for quadratic forms, `Q` is preserved
/// on basis vectors and their pairwise sums.
pub fn form_preserved(a: &Matrix, form: &ClassicalForm) -> Result<bool> {
    if a.field() != form.field() {
        return Err(Error::FieldMismatch {
            left: a.field().order(),
            right: form.field().order(),
        });
    }
    if a.dim() != form.dim() {
        return Err(Error::DimensionMismatch(format!("{} vs {}", a.dim(), form.dim())));
    }
    if form.kind() == FormKind::None {
        return Ok(true);
    }
    let a_sigma = if form.kind() == FormKind::Hermitian { a.conjugate()? } else { a.clone() };
    let lhs = a.transpose().mul(form.gram())?.mul(&a_sigma)?;
    if &lhs != form.gram() {
        return Ok(false);
    }
    if form.kind() == FormKind::Quadratic {
        let n = a.dim();
        let f = a.field();
        let col = |v: &[u16]| a.apply(v);
        let basis = |i: usize| -> Vec<u16> { (0..n).map(|k| u16::from(k == i)).collect() };
        for i in 0..n {
            let e = basis(i);
            if form.quad(&col(&e)) != form.quad(&e) {
                return Ok(false);
            }
            for j in i + 1..n {
                let s: Vec<u16> = e.iter().zip(basis(j)).map(|(&x, y)| f.add_raw(x, y)).collect();
                if form.quad(&col(&s)) != form.quad(&s) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::matrix::DEFAULT_ORDER_CAP;

    #[test]
    fn identity_preserves_every_form() {
        let f3 = Field::new(3).unwrap();
        let f4 = Field::new(4).unwrap();
        let forms = [
            ClassicalForm::standard_symplectic(&f3, 4).unwrap(),
            ClassicalForm::hyperbolic_quadratic(&f3, 3).unwrap(),
            ClassicalForm::elliptic_quadratic(&f3, 3).unwrap(),
            ClassicalForm::none(&f3, 2).unwrap(),
        ];
        for form in &forms {
            let id = Matrix::identity(&f3, form.dim()).unwrap();
            assert!(form_preserved(&id, form).unwrap());
        }
        let h = ClassicalForm::standard_hermitian(&f4, 3).unwrap();
        assert!(form_preserved(&Matrix::identity(&f4, 3).unwrap(), &h).unwrap());
    }

    #[test]
    fn sl2_equals_sp2() {
        let f = Field::new(3).unwrap();
        let j = ClassicalForm::standard_symplectic(&f, 2).unwrap();
        let e12 = Matrix::elementary(&f, 2, 0, 1, f.one()).unwrap();
        assert!(form_preserved(&e12, &j).unwrap());
        let not_det1 = Matrix::diagonal(&f, &[f.from_int(2), f.one()]).unwrap();
        assert!(!form_preserved(&not_det1, &j).unwrap());
    }

    #[test]
    fn gf4_order_three_reflection_is_unitary() {
        let f = Field::new(4).unwrap();
        let h = ClassicalForm::standard_hermitian(&f, 3).unwrap();
        // omega = t has order 3 in GF(4)*
        let omega = f.elem(2);
        assert_eq!(f.element_order(omega).unwrap(), 3);
        let r = Matrix::diagonal(&f, &[omega, f.one(), f.one()]).unwrap();
        assert!(form_preserved(&r, &h).unwrap());
        assert_eq!(r.order(DEFAULT_ORDER_CAP).unwrap(), 3);
    }

    #[test]
    fn invalid_grams_rejected() {
        let f = Field::new(3).unwrap();
        let sym = Matrix::identity(&f, 2).unwrap();
        assert!(ClassicalForm::new(FormKind::Symplectic, sym.clone(), None).is_err());
        assert!(ClassicalForm::new(FormKind::Quadratic, sym.clone(), Some(vec![f.one(), f.one()])).is_err());
        assert!(ClassicalForm::new(FormKind::Hermitian, sym, None).is_err());
    }

    #[test]
    fn elliptic_plane_is_anisotropic_over_gf3() {
        let f = Field::new(3).unwrap();
        let q = ClassicalForm::elliptic_quadratic(&f, 1).unwrap();
        for x in 0..3u16 {
            for y in 0..3u16 {
                if (x, y) != (0, 0) {
                    assert_ne!(q.quad(&[x, y]), 0);
                }
            }
        }
    }
}
