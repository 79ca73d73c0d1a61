//! Distinguished elements of classical groups and their structural detection.

use serde::{Deserialize, Serialize};

use super::action::PointSet;
use crate::algebra::{form_preserved, ClassicalForm, Field, FieldElement, FormKind, Matrix};
use crate::error::{Error, Result};
use crate::perm::Permutation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ElementKind {
    Transvection,
    Reflection,
    LongRoot,
    Other,
}

impl ElementKind {
    pub fn name(self) -> &'static str {
        match self {
            ElementKind::Transvection => "transvection",
            ElementKind::Reflection => "reflection",
            ElementKind::LongRoot => "long_root",
            ElementKind::Other => "other",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "transvection" => Some(ElementKind::Transvection),
            "reflection" => Some(ElementKind::Reflection),
            "long_root" | "root" | "siegel" => Some(ElementKind::LongRoot),
            "other" => Some(ElementKind::Other),
            _ => None,
        }
    }
}

fn codes(v: &[FieldElement]) -> Vec<u16> {
    v.iter().map(|x| x.code()).collect()
}

/// `I + d phi^T`, i.e. `v -> v + phi(v) d`.
fn rank_one_update(field: &Field, d: &[u16], phi: &[u16]) -> Result<Matrix> {
    let n = d.len();
    let mut m = Matrix::identity(field, n)?;
    for r in 0..n {
        for c in 0..n {
            let add = field.mul_raw(d[r], phi[c]);
            if add != 0 {
                let cur = m.get(r, c).code();
                m.set(r, c, field.elem(field.add_raw(cur, add)))?;
            }
        }
    }
    Ok(m)
}

fn check_vectors(field: &Field, vs: &[&[FieldElement]], n: usize) -> Result<()> {
    for v in vs {
        if v.len() != n {
            return Err(Error::DimensionMismatch(format!("vector of length {} in dimension {n}", v.len())));
        }
        for x in v.iter() {
            if x.field_order() != field.order() {
                return Err(Error::FieldMismatch {
                    left: field.order(),
                    right: x.field_order(),
                });
            }
        }
    }
    Ok(())
}

/// The transvection `v -> v + phi(v) d`.
pub fn transvection(field: &Field, direction: &[FieldElement], functional: &[FieldElement]) -> Result<Matrix> {
    let n = direction.len();
    check_vectors(field, &[direction, functional], n)?;
    if direction.iter().all(|x| x.is_zero()) || functional.iter().all(|x| x.is_zero()) {
        return Err(Error::PreconditionViolated("direction and functional must be nonzero".into()));
    }
    let d = codes(direction);
    let phi = codes(functional);
    let pairing = d.iter().zip(&phi).fold(0u16, |acc, (&a, &b)| field.add_raw(acc, field.mul_raw(a, b)));
    if pairing != 0 {
        return Err(Error::NotIsotropicPair);
    }
    rank_one_update(field, &d, &phi)
}

/// `u -> u + lambda kappa(u, a) a`, the symplectic or unitary transvection
/// with centre `a`.
pub fn form_transvection(form: &ClassicalForm, a: &[FieldElement], lambda: FieldElement) -> Result<Matrix> {
    let field = form.field();
    let n = form.dim();
    check_vectors(field, &[a], n)?;
    check_vectors(field, &[&[lambda]], 1)?;
    let a = codes(a);
    let phi: Vec<u16> = (0..n)
        .map(|c| {
            let e: Vec<u16> = (0..n).map(|k| u16::from(k == c)).collect();
            field.mul_raw(lambda.code(), form.bilinear(&e, &a))
        })
        .collect();
    let m = rank_one_update(field, &a, &phi)?;
    if !form_preserved(&m, form)? {
        return Err(Error::PreconditionViolated(
            "centre must be isotropic and lambda must make the map an isometry".into(),
        ));
    }
    Ok(m)
}

/// Fixes `axis^perp` pointwise and scales `axis` by `eigenvalue`.
pub fn unitary_reflection(form: &ClassicalForm, axis: &[FieldElement], eigenvalue: FieldElement) -> Result<Matrix> {
    if form.kind() != FormKind::Hermitian {
        return Err(Error::PreconditionViolated("unitary reflections need a hermitian form".into()));
    }
    let field = form.field();
    let n = form.dim();
    check_vectors(field, &[axis], n)?;
    if eigenvalue.field_order() != field.order() {
        return Err(Error::FieldMismatch {
            left: field.order(),
            right: eigenvalue.field_order(),
        });
    }
    if eigenvalue.is_one() || !field.pow(eigenvalue, 3)?.is_one() {
        return Err(Error::PreconditionViolated("eigenvalue must be a nontrivial cube root of unity".into()));
    }
    let a = codes(axis);
    let norm = form.bilinear(&a, &a);
    if norm == 0 {
        return Err(Error::IsotropicAxis);
    }
    let coeff = field.mul_raw(field.add_raw(eigenvalue.code(), field.neg_raw(1)), field.inv_raw(norm));
    let phi: Vec<u16> = (0..n)
        .map(|c| {
            let e: Vec<u16> = (0..n).map(|k| u16::from(k == c)).collect();
            field.mul_raw(coeff, form.bilinear(&e, &a))
        })
        .collect();
    let m = rank_one_update(field, &a, &phi)?;
    if !form_preserved(&m, form)? {
        return Err(Error::PreconditionViolated("eigenvalue is not of norm one".into()));
    }
    Ok(m)
}

/// `u -> u + lambda kappa(u, a) b - lambda kappa(u, b) a` for `a, b`
/// spanning a totally singular 2-space.
pub fn siegel_element(form: &ClassicalForm, a: &[FieldElement], b: &[FieldElement], lambda: FieldElement) -> Result<Matrix> {
    if form.kind() != FormKind::Quadratic {
        return Err(Error::PreconditionViolated("Siegel elements need a quadratic form".into()));
    }
    let field = form.field();
    let n = form.dim();
    check_vectors(field, &[a, b], n)?;
    let (a, b) = (codes(a), codes(b));
    let mut failed = Vec::new();
    if form.quad(&a) != 0 {
        failed.push("Q(a) != 0");
    }
    if form.quad(&b) != 0 {
        failed.push("Q(b) != 0");
    }
    if form.bilinear(&a, &b) != 0 {
        failed.push("kappa(a,b) != 0");
    }
    if !failed.is_empty() {
        return Err(Error::PreconditionViolated(failed.join(", ")));
    }
    let l = lambda.code();
    let mut m = Matrix::identity(field, n)?;
    for c in 0..n {
        let e: Vec<u16> = (0..n).map(|k| u16::from(k == c)).collect();
        let ka = field.mul_raw(l, form.bilinear(&e, &a));
        let kb = field.neg_raw(field.mul_raw(l, form.bilinear(&e, &b)));
        for r in 0..n {
            let add = field.add_raw(field.mul_raw(ka, b[r]), field.mul_raw(kb, a[r]));
            if add != 0 {
                let cur = m.get(r, c).code();
                m.set(r, c, field.elem(field.add_raw(cur, add)))?;
            }
        }
    }
    Ok(m)
}

/// Recovers the matrix inducing `perm` on `points` (up to a scalar when the
/// points are projective). Needs the basis points, and for projective sets
/// also the all-ones point.
pub fn recover_matrix(points: &PointSet, perm: &Permutation) -> Option<Matrix> {
    let field = points.field();
    let n = points.dim();
    let basis = |i: usize| -> Vec<u16> { (0..n).map(|k| u16::from(k == i)).collect() };
    let image_of = |v: &[u16]| -> Option<Vec<u16>> {
        let idx = points.index_of(v)?;
        Some(points.point(perm.image(idx)).to_vec())
    };
    let cols: Vec<Vec<u16>> = (0..n).map(|i| image_of(&basis(i))).collect::<Option<_>>()?;
    let mut data = vec![0u16; n * n];
    for (c, col) in cols.iter().enumerate() {
        for r in 0..n {
            data[r * n + c] = col[r];
        }
    }
    let v = Matrix::from_codes(field, n, &data).ok()?;
    if !points.is_projective() {
        return Some(v);
    }
    let w = image_of(&vec![1u16; n])?;
    let alpha = v.inv().ok()?.apply(&w);
    if alpha.contains(&0) {
        return None;
    }
    for r in 0..n {
        for c in 0..n {
            data[r * n + c] = field.mul_raw(data[r * n + c], alpha[c]);
        }
    }
    Matrix::from_codes(field, n, &data).ok()
}

fn is_zero(m: &Matrix) -> bool {
    m.codes().iter().all(|&c| c == 0)
}

/// Classifies `m` up to scalars: a transvection has `cA - I` of rank one
/// and square zero, a reflection has rank one and is semisimple, a long
/// root element has `cA - I` of rank two, square zero and totally singular
/// image under a quadratic form.
pub fn detect_kind(m: &Matrix, form: &ClassicalForm) -> ElementKind {
    detect_kind_scaled(m, form, true)
}

/// As [`detect_kind`], but only tries `c = 1` unless `up_to_scalars`.
pub fn detect_kind_scaled(m: &Matrix, form: &ClassicalForm, up_to_scalars: bool) -> ElementKind {
    let field = m.field();
    let n = m.dim();
    let scalars: Vec<FieldElement> = if up_to_scalars {
        field.elements().filter(|c| !c.is_zero()).collect()
    } else {
        vec![field.one()]
    };
    for c in scalars {
        let Ok(scaled) = m.scale(c) else { continue };
        let b = scaled.minus_identity();
        let rank = b.rank();
        let square_zero = b.mul(&b).map(|s| is_zero(&s)).unwrap_or(false);
        match rank {
            1 if square_zero => return ElementKind::Transvection,
            1 if form.kind() == FormKind::Hermitian => return ElementKind::Reflection,
            2 if square_zero && form.kind() == FormKind::Quadratic => {
                let cols: Vec<Vec<u16>> = (0..n).map(|j| (0..n).map(|i| b.get(i, j).code()).collect()).collect();
                let singular = cols.iter().all(|u| form.quad(u) == 0)
                    && cols.iter().all(|u| cols.iter().all(|v| form.bilinear(u, v) == 0));
                if singular {
                    return ElementKind::LongRoot;
                }
            }
            _ => {}
        }
    }
    ElementKind::Other
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::matrix::DEFAULT_ORDER_CAP;

    fn vecf(f: &Field, ints: &[i64]) -> Vec<FieldElement> {
        ints.iter().map(|&i| f.from_int(i)).collect()
    }

    #[test]
    fn elementary_transvection() {
        let f = Field::new(3).unwrap();
        let t = transvection(&f, &vecf(&f, &[1, 0, 0]), &vecf(&f, &[0, 1, 0])).unwrap();
        assert_eq!(t, Matrix::elementary(&f, 3, 0, 1, f.one()).unwrap());
        assert_eq!(t.order(DEFAULT_ORDER_CAP).unwrap(), 3);
        assert_eq!(t.minus_identity().rank(), 1);
        // fixes span(e1, e3) pointwise
        assert_eq!(t.apply(&[1, 0, 0]), vec![1, 0, 0]);
        assert_eq!(t.apply(&[0, 0, 1]), vec![0, 0, 1]);
        assert!(matches!(
            transvection(&f, &vecf(&f, &[1, 0, 0]), &vecf(&f, &[1, 0, 0])),
            Err(Error::NotIsotropicPair)
        ));
        let form = ClassicalForm::none(&f, 3).unwrap();
        assert_eq!(detect_kind(&t, &form), ElementKind::Transvection);
    }

    #[test]
    fn symplectic_transvection_in_sp43() {
        let f = Field::new(3).unwrap();
        let form = ClassicalForm::standard_symplectic(&f, 4).unwrap();
        let t = form_transvection(&form, &vecf(&f, &[1, 0, 1, 0]), f.one()).unwrap();
        assert!(form_preserved(&t, &form).unwrap());
        assert_eq!(t.order(DEFAULT_ORDER_CAP).unwrap(), 3);
        assert_eq!(detect_kind(&t, &form), ElementKind::Transvection);
    }

    #[test]
    fn gf4_reflection() {
        let f = Field::new(4).unwrap();
        let form = ClassicalForm::standard_hermitian(&f, 4).unwrap();
        let omega = f.elem(2);
        let r = unitary_reflection(&form, &vecf(&f, &[1, 0, 0, 0]), omega).unwrap();
        assert_eq!(r, Matrix::diagonal(&f, &[omega, f.one(), f.one(), f.one()]).unwrap());
        assert_eq!(r.order(DEFAULT_ORDER_CAP).unwrap(), 3);
        assert!(form_preserved(&r, &form).unwrap());
        assert_eq!(detect_kind(&r, &form), ElementKind::Reflection);
        // e1 + e2 has norm 1 + 1 = 0
        assert!(matches!(
            unitary_reflection(&form, &vecf(&f, &[1, 1, 0, 0]), omega),
            Err(Error::IsotropicAxis)
        ));
    }

    #[test]
    fn siegel_in_omega_plus_6_3() {
        let f = Field::new(3).unwrap();
        let form = ClassicalForm::hyperbolic_quadratic(&f, 3).unwrap();
        let e1 = vecf(&f, &[1, 0, 0, 0, 0, 0]);
        let e2 = vecf(&f, &[0, 1, 0, 0, 0, 0]);
        let f1 = vecf(&f, &[0, 0, 0, 1, 0, 0]);
        let x = siegel_element(&form, &e1, &e2, f.one()).unwrap();
        assert_eq!(x.order(DEFAULT_ORDER_CAP).unwrap(), 3);
        assert!(form_preserved(&x, &form).unwrap());
        assert_eq!(x.minus_identity().rank(), 2);
        assert_eq!(detect_kind(&x, &form), ElementKind::LongRoot);
        assert!(siegel_element(&form, &e1, &e2, f.zero()).unwrap().is_identity());
        match siegel_element(&form, &e1, &f1, f.one()) {
            Err(Error::PreconditionViolated(msg)) => assert!(msg.contains("kappa(a,b)")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn recovers_matrices_up_to_scalars() {
        let f = Field::new(3).unwrap();
        let m = Matrix::from_ints(&f, 3, &[1, 1, 0, 0, 1, 2, 1, 0, 2]).unwrap();
        assert!(!m.det().is_zero());
        let ps = PointSet::projective(&f, 3).unwrap();
        let perm = ps.permutation_of(&m).unwrap();
        let back = recover_matrix(&ps, &perm).unwrap();
        assert!(back == m || back == m.scale(f.from_int(2)).unwrap());
    }
}
