//! Matrix groups acting on vectors and on projective points.

use std::collections::HashMap;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::algebra::{ClassicalForm, Field, FieldElement, FormKind, Matrix};
use crate::error::{Error, Result};
use crate::perm::{Permutation, PermutationGroup, MAX_DEGREE};

/// Vectors are only ever enumerated up to this many candidates.
const ENUMERATION_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActionKind {
    ProjectivePoints,
    Vectors,
}

/// An indexed set of vectors (or normalized projective representatives).
#[derive(Debug, Clone)]
pub struct PointSet {
    field: Field,
    n: usize,
    projective: bool,
    points: Vec<Vec<u16>>,
    index: HashMap<u64, u32>,
}

fn key(v: &[u16], q: u64) -> u64 {
    v.iter().rev().fold(0u64, |acc, &c| acc * q + c as u64)
}

/// Scales `v` so its first nonzero coordinate is 1.
pub(crate) fn normalize(field: &Field, v: &[u16]) -> Vec<u16> {
    match v.iter().find(|&&c| c != 0) {
        None => v.to_vec(),
        Some(&lead) => {
            let inv = field.inv_raw(lead);
            v.iter().map(|&c| field.mul_raw(c, inv)).collect()
        }
    }
}

fn check_size(points: u64) -> Result<()> {
    if points > MAX_DEGREE as u64 {
        return Err(Error::ActionTooLarge {
            points,
            cap: MAX_DEGREE as u64,
        });
    }
    Ok(())
}

fn all_vectors(field: &Field, n: usize) -> Result<impl Iterator<Item = Vec<u16>>> {
    let q = field.order() as u64;
    let total = q.checked_pow(n as u32).unwrap_or(u64::MAX);
    if total > ENUMERATION_CAP {
        return Err(Error::ActionTooLarge {
            points: total,
            cap: ENUMERATION_CAP,
        });
    }
    Ok((1..total).map(move |mut k| {
        let mut v = vec![0u16; n];
        for c in v.iter_mut() {
            *c = (k % q) as u16;
            k /= q;
        }
        v
    }))
}

impl PointSet {
    fn from_points(field: &Field, n: usize, projective: bool, points: Vec<Vec<u16>>) -> Result<Self> {
        check_size(points.len() as u64)?;
        let q = field.order() as u64;
        let index = points.iter().enumerate().map(|(i, v)| (key(v, q), i as u32)).collect();
        Ok(PointSet {
            field: field.clone(),
            n,
            projective,
            points,
            index,
        })
    }

    /// All 1-spaces of `GF(q)^n`, each as its normalized representative.
    pub fn projective(field: &Field, n: usize) -> Result<Self> {
        let q = field.order() as u64;
        let count = (q.checked_pow(n as u32).unwrap_or(u64::MAX) - 1) / (q - 1);
        check_size(count)?;
        let mut points: Vec<Vec<u16>> = all_vectors(field, n)?
            .filter(|v| v.iter().find(|&&c| c != 0) == Some(&1))
            .collect();
        // basis points first so that recovering matrices can find them cheaply
        points.sort_by_key(|v| {
            let weight = v.iter().filter(|&&c| c != 0).count();
            let lead = v.iter().position(|&c| c != 0).unwrap_or(0);
            (weight, lead, key(v, q))
        });
        Self::from_points(field, n, true, points)
    }

    /// Nonzero vectors whose form value lies in the set of values taken on
    /// the standard basis. The set is invariant under the isometry group and
    /// spans the space, so the action on it is faithful.
    pub fn invariant_vectors(form: &ClassicalForm) -> Result<Self> {
        let field = form.field();
        let n = form.dim();
        let basis: Vec<Vec<u16>> = (0..n).map(|i| (0..n).map(|k| u16::from(k == i)).collect()).collect();
        let value = |v: &[u16]| match form.kind() {
            FormKind::None | FormKind::Symplectic => 0,
            FormKind::Hermitian | FormKind::Quadratic => form.quad(v),
        };
        let allowed: Vec<u16> = basis.iter().map(|v| value(v)).collect();
        let mut points: Vec<Vec<u16>> = Vec::new();
        for v in all_vectors(field, n)? {
            if allowed.contains(&value(&v)) {
                points.push(v);
                check_size(points.len() as u64)?;
            }
        }
        points.sort_by_key(|v| {
            let weight = v.iter().filter(|&&c| c != 0).count();
            (weight, key(v, field.order() as u64))
        });
        Self::from_points(field, n, false, points)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_projective(&self) -> bool {
        self.projective
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn point(&self, i: u32) -> &[u16] {
        &self.points[i as usize]
    }

    pub fn points(&self) -> &[Vec<u16>] {
        &self.points
    }

    pub fn index_of(&self, v: &[u16]) -> Option<u32> {
        let v = if self.projective { normalize(&self.field, v) } else { v.to_vec() };
        self.index.get(&key(&v, self.field.order() as u64)).copied()
    }

    /// The permutation induced by `m`, or `None` if `m` does not preserve
    /// the set.
    pub fn permutation_of(&self, m: &Matrix) -> Option<Permutation> {
        if m.field() != &self.field || m.dim() != self.n {
            return None;
        }
        let mut img = Vec::with_capacity(self.points.len());
        for v in &self.points {
            img.push(self.index_of(&m.apply(v))?);
        }
        Permutation::from_images(img).ok()
    }
}

/// A matrix group together with a permutation image on a point set.
#[derive(Debug, Clone)]
pub struct MatrixAction {
    pub points: PointSet,
    pub group: PermutationGroup,
}

impl MatrixAction {
    pub fn new(gens: &[Matrix], points: PointSet) -> Result<Self> {
        let perms = gens
            .iter()
            .map(|m| {
                points.permutation_of(m).ok_or_else(|| {
                    Error::GeneratorValidationFailed("generator does not preserve the point set".into())
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let group = PermutationGroup::new(points.len(), perms)?;
        Ok(MatrixAction { points, group })
    }

    pub fn perm_of(&self, m: &Matrix) -> Option<Permutation> {
        self.points.permutation_of(m)
    }
}

/// Permutation image of a matrix group, with the kernel of the action.
#[derive(Debug, Clone)]
pub struct PermutationImage {
    pub kind: ActionKind,
    pub action: MatrixAction,
    pub matrix_order: BigUint,
    /// Scalars `c` with `cI` in the matrix group.
    pub kernel: Vec<FieldElement>,
}

impl PermutationImage {
    pub fn kernel_order(&self) -> usize {
        match self.kind {
            ActionKind::Vectors => 1,
            ActionKind::ProjectivePoints => self.kernel.len(),
        }
    }

    pub fn image_order(&self) -> BigUint {
        self.action.group.order()
    }
}

/// Scalars `c` with `cI` in the group acting faithfully on `faithful`.
pub fn scalar_kernel(faithful: &MatrixAction) -> Vec<FieldElement> {
    let field = faithful.points.field().clone();
    let n = faithful.points.dim();
    field
        .elements()
        .filter(|c| !c.is_zero())
        .filter(|&c| {
            let s = Matrix::scalar(&field, n, c).expect("valid dimension");
            faithful.perm_of(&s).is_some_and(|p| faithful.group.contains(&p))
        })
        .collect()
}

/// Realizes the group generated by `gens` (which preserve `form`) as a
/// permutation group. The vector action is on the invariant vectors of
/// `form` and is faithful; the projective action reports its kernel, found
/// by testing every scalar matrix for membership.
pub fn to_permutation(gens: &[Matrix], form: &ClassicalForm, kind: ActionKind) -> Result<PermutationImage> {
    let faithful = MatrixAction::new(gens, PointSet::invariant_vectors(form)?)?;
    let matrix_order = faithful.group.order();
    match kind {
        ActionKind::Vectors => Ok(PermutationImage {
            kind,
            action: faithful,
            matrix_order,
            kernel: vec![form.field().one()],
        }),
        ActionKind::ProjectivePoints => {
            let kernel = scalar_kernel(&faithful);
            let action = MatrixAction::new(gens, PointSet::projective(form.field(), form.dim())?)?;
            if action.group.order() * BigUint::from(kernel.len()) != matrix_order {
                return Err(Error::GeneratorValidationFailed(
                    "projective image order times kernel order differs from the matrix group order".into(),
                ));
            }
            Ok(PermutationImage {
                kind,
                action,
                matrix_order,
                kernel,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl23_on_projective_line() {
        let f = Field::new(3).unwrap();
        let gens = vec![
            Matrix::elementary(&f, 2, 0, 1, f.one()).unwrap(),
            Matrix::elementary(&f, 2, 1, 0, f.one()).unwrap(),
        ];
        let form = ClassicalForm::none(&f, 2).unwrap();
        let img = to_permutation(&gens, &form, ActionKind::ProjectivePoints).unwrap();
        assert_eq!(img.action.points.len(), 4);
        assert_eq!(img.matrix_order, BigUint::from(24u32));
        assert_eq!(img.image_order(), BigUint::from(12u32));
        assert_eq!(img.kernel_order(), 2);
        let v = to_permutation(&gens, &form, ActionKind::Vectors).unwrap();
        assert_eq!(v.image_order(), BigUint::from(24u32));
    }

    #[test]
    fn projective_points_are_normalized_and_counted() {
        let f = Field::new(4).unwrap();
        let ps = PointSet::projective(&f, 4).unwrap();
        assert_eq!(ps.len(), 85);
        for (i, v) in ps.points().iter().enumerate() {
            assert_eq!(ps.index_of(v), Some(i as u32));
            let scaled: Vec<u16> = v.iter().map(|&c| f.mul_raw(c, 2)).collect();
            assert_eq!(ps.index_of(&scaled), Some(i as u32));
        }
        // basis points come first
        assert_eq!(ps.point(0), &[1, 0, 0, 0]);
    }

    #[test]
    fn oversized_actions_are_refused() {
        let f = Field::new(9).unwrap();
        assert!(matches!(PointSet::projective(&f, 5), Err(Error::ActionTooLarge { .. })));
        let f = Field::new(8).unwrap();
        let form = ClassicalForm::none(&f, 4).unwrap();
        assert!(matches!(PointSet::invariant_vectors(&form), Err(Error::ActionTooLarge { .. })));
    }

    #[test]
    fn unitary_invariant_vectors_have_norm_one() {
        let f = Field::new(9).unwrap();
        let form = ClassicalForm::standard_hermitian(&f, 3).unwrap();
        let ps = PointSet::invariant_vectors(&form).unwrap();
        // r^(n-1) (r^n - (-1)^n) with r = 3, n = 3
        assert_eq!(ps.len(), 9 * 28);
    }
}
