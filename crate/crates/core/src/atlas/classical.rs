//! Classical matrix groups over small fields: order formulas, generating
//! sets, and permutation realizations.

use num_bigint::BigUint;
use num_integer::Integer;

use super::action::{scalar_kernel, ActionKind, MatrixAction, PointSet};
use super::elements::{form_transvection, siegel_element, unitary_reflection, ElementKind};
use super::spec::Family;
use crate::algebra::{form_preserved, prime_power, ClassicalForm, Field, FieldElement, FormKind, Matrix};
use crate::error::{Error, Result};
use crate::perm::{Permutation, PermutationGroup, StabChain};

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

fn pow(q: u64, e: u32) -> BigUint {
    big(q).pow(e)
}

fn gl_order(n: u32, q: u64) -> BigUint {
    (1..=n).fold(pow(q, n * (n - 1) / 2), |acc, i| acc * (pow(q, i) - 1u32))
}

fn sp_order(n: u32, q: u64) -> BigUint {
    let m = n / 2;
    (1..=m).fold(pow(q, m * m), |acc, i| acc * (pow(q, 2 * i) - 1u32))
}

fn gu_order(n: u32, q: u64) -> BigUint {
    (1..=n).fold(pow(q, n * (n - 1) / 2), |acc, i| {
        if i % 2 == 0 {
            acc * (pow(q, i) - 1u32)
        } else {
            acc * (pow(q, i) + 1u32)
        }
    })
}

fn omega_order(n: u32, q: u64, plus: bool) -> BigUint {
    let m = n / 2;
    let qm = pow(q, m);
    let head = if plus { qm - 1u32 } else { qm + 1u32 };
    let body = (1..m).fold(pow(q, m * (m - 1)) * head, |acc, i| acc * (pow(q, 2 * i) - 1u32));
    body / big(2u64.gcd(&(q - 1)))
}

/// Number of scalar matrices in `Omega^eps(n, q)`, `q` odd: `-I` lies in
/// the group exactly when the discriminant is a square.
fn omega_centre(n: u32, q: u64, plus: bool) -> u64 {
    let qm = q.pow(n / 2);
    let shifted = if plus { qm - 1 } else { qm + 1 };
    4u64.gcd(&shifted) / 2
}

/// Exact order of the named group from the closed-form formula.
pub fn order_formula(family: Family, n: usize, q: u32) -> Result<BigUint> {
    validate(family, n, q)?;
    let (n32, q64) = (n as u32, u64::from(q));
    let r = match family {
        Family::GL => gl_order(n32, q64),
        Family::SL | Family::PGL => gl_order(n32, q64) / big(q64 - 1),
        Family::PSL => gl_order(n32, q64) / big(q64 - 1) / big((n as u64).gcd(&(q64 - 1))),
        Family::Sp => sp_order(n32, q64),
        Family::PSp => sp_order(n32, q64) / big(2u64.gcd(&(q64 - 1))),
        Family::GU => gu_order(n32, q64),
        Family::SU | Family::PGU => gu_order(n32, q64) / big(q64 + 1),
        Family::PSU => gu_order(n32, q64) / big(q64 + 1) / big((n as u64).gcd(&(q64 + 1))),
        Family::OmegaPlus => omega_order(n32, q64, true),
        Family::OmegaMinus => omega_order(n32, q64, false),
    };
    Ok(r)
}

/// Order of the image on projective points.
pub fn projective_order_formula(family: Family, n: usize, q: u32) -> Result<BigUint> {
    let lin = family.linear();
    let order = order_formula(lin, n, q)?;
    let q64 = u64::from(q);
    let centre = match lin {
        Family::SL => (n as u64).gcd(&(q64 - 1)),
        Family::GL => q64 - 1,
        Family::Sp => 2u64.gcd(&(q64 - 1)),
        Family::SU => (n as u64).gcd(&(q64 + 1)),
        Family::GU => q64 + 1,
        Family::OmegaPlus => omega_centre(n as u32, q64, true),
        Family::OmegaMinus => omega_centre(n as u32, q64, false),
        _ => unreachable!("linear family"),
    };
    Ok(order / big(centre))
}

fn validate(family: Family, n: usize, q: u32) -> Result<()> {
    let bad = |why: &str| Err(Error::UnsupportedSpec(format!("{}({n},{q}): {why}", family.name())));
    if prime_power(u64::from(q)).is_none() {
        return bad("field size is not a prime power");
    }
    match family.linear() {
        Family::SL | Family::GL => {
            if !(2..=4).contains(&n) {
                return bad("dimension must be 2, 3 or 4");
            }
        }
        Family::Sp => {
            if !matches!(n, 2 | 4 | 6) {
                return bad("dimension must be 2, 4 or 6");
            }
        }
        Family::SU | Family::GU => {
            if !(2..=4).contains(&n) {
                return bad("dimension must be 2, 3 or 4");
            }
            if q * q > crate::algebra::field::MAX_FIELD_ORDER {
                return bad("unitary groups need GF(q^2) within the field cap");
            }
        }
        Family::OmegaPlus | Family::OmegaMinus => {
            if !matches!(n, 4 | 6 | 8) {
                return bad("dimension must be 4, 6 or 8");
            }
            if q % 2 == 0 {
                return bad("orthogonal groups are supported in odd characteristic");
            }
        }
        _ => unreachable!(),
    }
    Ok(())
}

/// Field, form and determinant requirement for a linear family.
fn setting(family: Family, n: usize, q: u32) -> Result<(Field, ClassicalForm)> {
    let lin = family.linear();
    let field = if lin == Family::SU || lin == Family::GU {
        Field::new(q * q)?
    } else {
        Field::new(q)?
    };
    let form = match lin {
        Family::SL | Family::GL => ClassicalForm::none(&field, n)?,
        Family::Sp => ClassicalForm::standard_symplectic(&field, n)?,
        Family::SU | Family::GU => ClassicalForm::standard_hermitian(&field, n)?,
        Family::OmegaPlus => ClassicalForm::hyperbolic_quadratic(&field, n / 2)?,
        Family::OmegaMinus => ClassicalForm::elliptic_quadratic(&field, n / 2)?,
        _ => unreachable!(),
    };
    Ok((field, form))
}

fn additive_basis(field: &Field) -> Vec<FieldElement> {
    let p = field.characteristic() as u16;
    (0..field.degree()).map(|j| field.elem(p.pow(j))).collect()
}

fn unit(field: &Field, n: usize, i: usize) -> Vec<FieldElement> {
    (0..n).map(|k| if k == i { field.one() } else { field.zero() }).collect()
}

fn combo(field: &Field, n: usize, terms: &[(usize, FieldElement)]) -> Vec<FieldElement> {
    let mut v = vec![field.zero(); n];
    for &(i, c) in terms {
        v[i] = field.add(v[i], c).expect("same field");
    }
    v
}

/// Deterministic candidate generators, in the order they are tried.
fn candidate_pool(family: Family, field: &Field, form: &ClassicalForm) -> Result<Vec<Matrix>> {
    let n = form.dim();
    let basis = additive_basis(field);
    let mut pool = Vec::new();
    match family.linear() {
        lin @ (Family::SL | Family::GL) => {
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        for &b in &basis {
                            pool.push(Matrix::elementary(field, n, i, j, b)?);
                        }
                    }
                }
            }
            if lin == Family::GL {
                let mut d = vec![field.one(); n];
                d[0] = field.primitive_element();
                pool.insert(0, Matrix::diagonal(field, &d)?);
            }
        }
        Family::Sp => {
            let mut centres = Vec::new();
            for i in 0..n {
                centres.push(unit(field, n, i));
            }
            for i in 0..n {
                for j in i + 1..n {
                    for &b in &basis {
                        centres.push(combo(field, n, &[(i, field.one()), (j, b)]));
                    }
                }
            }
            for a in &centres {
                for &l in &basis {
                    pool.push(form_transvection(form, a, l)?);
                }
            }
        }
        lin @ (Family::SU | Family::GU) => {
            let r = (field.order() as f64).sqrt().round() as u64;
            let minus_one = field.neg(field.one())?;
            let trace_zero: Vec<FieldElement> = field
                .elements()
                .filter(|&l| !l.is_zero() && field.add(l, field.conjugate(l).unwrap()).unwrap().is_zero())
                .collect();
            let zeta = field.pow(field.primitive_element(), r - 1)?;
            if lin == Family::GU {
                let mut d = vec![field.one(); n];
                d[0] = zeta;
                pool.push(Matrix::diagonal(field, &d)?);
            }
            // every isotropic centre up to scalars, lightest first
            let mut centres: Vec<Vec<u16>> = PointSet::projective(field, n)?
                .points()
                .iter()
                .filter(|v| form.bilinear(v, v) == 0)
                .cloned()
                .collect();
            centres.sort_by_key(|v| v.iter().filter(|&&c| c != 0).count());
            for c in &centres {
                let centre: Vec<FieldElement> = c.iter().map(|&x| field.elem(x)).collect();
                for &l in &trace_zero {
                    pool.push(form_transvection(form, &centre, l)?);
                }
            }
            for i in 0..n - 1 {
                let mut d = vec![field.one(); n];
                d[i] = zeta;
                d[i + 1] = field.inv(zeta)?;
                pool.push(Matrix::diagonal(field, &d)?);
                let mut m = Matrix::identity(field, n)?;
                m.set(i, i, field.zero())?;
                m.set(i + 1, i + 1, field.zero())?;
                m.set(i, i + 1, field.one())?;
                m.set(i + 1, i, minus_one)?;
                pool.push(m);
            }
        }
        Family::OmegaPlus | Family::OmegaMinus => {
            let m = n / 2;
            let hyper = if family.linear() == Family::OmegaPlus { m } else { m - 1 };
            let mut singular: Vec<Vec<FieldElement>> = Vec::new();
            for i in 0..2 * hyper {
                singular.push(unit(field, n, i));
            }
            if hyper < m {
                // e_i - Q(w) f_i + w for w in the anisotropic plane
                for i in 0..hyper {
                    for x in field.elements() {
                        for y in field.elements() {
                            if x.is_zero() && y.is_zero() {
                                continue;
                            }
                            let mut w = vec![0u16; n];
                            w[n - 2] = x.code();
                            w[n - 1] = y.code();
                            let qw = field.elem(form.quad(&w));
                            singular.push(combo(
                                field,
                                n,
                                &[(i, field.one()), (hyper + i, field.neg(qw)?), (n - 2, x), (n - 1, y)],
                            ));
                        }
                    }
                }
            }
            let codes = |v: &[FieldElement]| v.iter().map(|x| x.code()).collect::<Vec<_>>();
            for (ai, a) in singular.iter().enumerate() {
                for b in &singular[ai + 1..] {
                    if form.bilinear(&codes(a), &codes(b)) != 0 {
                        continue;
                    }
                    for &l in &basis {
                        let x = siegel_element(form, a, b, l)?;
                        if !x.is_identity() {
                            pool.push(x);
                        }
                    }
                }
            }
            if hyper == 1 {
                // no two orthogonal independent singular vectors: use
                // Eichler elements through the anisotropic plane
                for a in [0, 1] {
                    for w in [n - 2, n - 1] {
                        for &l in &basis {
                            pool.push(eichler(form, a, &combo(field, n, &[(w, l)]))?);
                        }
                    }
                }
            }
        }
        _ => unreachable!(),
    }
    Ok(pool)
}

/// `x -> x + B(x,a)w - B(x,w)a - Q(w)B(x,a)a` for the basis vector `a`,
/// singular and orthogonal to `w`.
fn eichler(form: &ClassicalForm, a: usize, w: &[FieldElement]) -> Result<Matrix> {
    let field = form.field();
    let n = form.dim();
    let w: Vec<u16> = w.iter().map(|x| x.code()).collect();
    let av: Vec<u16> = (0..n).map(|k| u16::from(k == a)).collect();
    let qw = form.quad(&w);
    let mut m = Matrix::identity(field, n)?;
    for c in 0..n {
        let e: Vec<u16> = (0..n).map(|k| u16::from(k == c)).collect();
        let s = form.bilinear(&e, &av);
        let t = form.bilinear(&e, &w);
        let ca = field.neg_raw(field.add_raw(t, field.mul_raw(qw, s)));
        for r in 0..n {
            let add = field.add_raw(field.mul_raw(s, w[r]), field.mul_raw(ca, av[r]));
            if add != 0 {
                let cur = m.get(r, c).code();
                m.set(r, c, field.elem(field.add_raw(cur, add)))?;
            }
        }
    }
    Ok(m)
}

const FRAME_CAP: usize = 100_000;

/// Isometries of the identity hermitian form, as matrices whose columns are
/// orthonormal, enumerated depth-first from the invariant vectors.
fn unitary_frames(form: &ClassicalForm, points: &PointSet, cap: usize) -> Vec<Matrix> {
    let n = form.dim();
    let field = form.field();
    let unit_vectors: Vec<&Vec<u16>> = points.points().iter().filter(|v| form.bilinear(v, v) == 1).collect();
    let mut out = Vec::new();
    let mut cols: Vec<&Vec<u16>> = Vec::new();
    fn dfs<'a>(
        n: usize,
        form: &ClassicalForm,
        field: &Field,
        unit_vectors: &[&'a Vec<u16>],
        cols: &mut Vec<&'a Vec<u16>>,
        out: &mut Vec<Matrix>,
        cap: usize,
    ) {
        if out.len() >= cap {
            return;
        }
        if cols.len() == n {
            let mut data = vec![0u16; n * n];
            for (c, col) in cols.iter().enumerate() {
                for r in 0..n {
                    data[r * n + c] = col[r];
                }
            }
            out.push(Matrix::from_codes(field, n, &data).expect("valid codes"));
            return;
        }
        for &v in unit_vectors {
            if cols.iter().all(|u| form.bilinear(u, v) == 0) {
                cols.push(v);
                dfs(n, form, field, unit_vectors, cols, out, cap);
                cols.pop();
            }
        }
    }
    dfs(n, form, field, &unit_vectors, &mut cols, &mut out, cap);
    out
}

fn in_family(family: Family, m: &Matrix, form: &ClassicalForm) -> Result<bool> {
    if !form_preserved(m, form)? {
        return Ok(false);
    }
    Ok(match family.linear() {
        Family::GL | Family::GU => !m.det().is_zero(),
        _ => m.det().is_one(),
    })
}

/// A classical group with its matrix generators, faithful vector action
/// and projective image.
#[derive(Debug, Clone)]
pub struct LinearGroup {
    pub family: Family,
    pub n: usize,
    pub q: u32,
    pub field: Field,
    pub form: ClassicalForm,
    pub generators: Vec<Matrix>,
    pub matrix_order: BigUint,
    pub vectors: MatrixAction,
    pub projective: MatrixAction,
    pub kernel: Vec<FieldElement>,
}

impl LinearGroup {
    /// Builds the matrix group of `family.linear()` by adding pool elements
    /// that are not yet members until the order formula is met.
    pub fn new(family: Family, n: usize, q: u32) -> Result<Self> {
        let target = order_formula(family.linear(), n, q)?;
        let (field, form) = setting(family, n, q)?;
        let points = PointSet::invariant_vectors(&form)?;
        let mut chain = StabChain::new(points.len());
        let mut generators = Vec::new();
        let mut perms = Vec::new();
        let pool = candidate_pool(family, &field, &form)?;
        // SU(3,2) is not generated by the structured pool; frames are only
        // enumerated once the pool runs out
        let mut frames: Option<std::vec::IntoIter<Matrix>> = None;
        let mut candidates = pool.into_iter();
        loop {
            if chain.order() == target {
                break;
            }
            let m = match candidates.next() {
                Some(m) => {
                    if !in_family(family, &m, &form)? {
                        return Err(Error::GeneratorValidationFailed(format!(
                            "candidate generator for {}({n},{q}) is not in the group",
                            family.linear().name()
                        )));
                    }
                    m
                }
                None if form.kind() == FormKind::Hermitian => {
                    let frames = frames.get_or_insert_with(|| unitary_frames(&form, &points, FRAME_CAP).into_iter());
                    match frames.find(|m| in_family(family, m, &form).unwrap_or(false)) {
                        Some(m) => m,
                        None => break,
                    }
                }
                None => break,
            };
            let p = points
                .permutation_of(&m)
                .ok_or_else(|| Error::GeneratorValidationFailed("generator moves the invariant vectors".into()))?;
            if chain.extend(&p) {
                generators.push(m);
                perms.push(p);
            }
        }
        let matrix_order = chain.order();
        if matrix_order != target {
            return Err(Error::GeneratorValidationFailed(format!(
                "generated order {matrix_order} differs from |{}({n},{q})| = {target}",
                family.linear().name()
            )));
        }
        let vectors = MatrixAction {
            group: PermutationGroup::new(points.len(), perms)?,
            points,
        };
        let _ = vectors.group.chain();
        let kernel = scalar_kernel(&vectors);
        let projective = MatrixAction::new(&generators, PointSet::projective(&field, n)?)?;
        let proj_order = projective.group.order();
        if proj_order.clone() * big(kernel.len() as u64) != matrix_order {
            return Err(Error::GeneratorValidationFailed("kernel and image orders are inconsistent".into()));
        }
        let expected = projective_order_formula(family, n, q)?;
        if proj_order != expected {
            return Err(Error::GeneratorValidationFailed(format!(
                "projective image order {proj_order} differs from the formula {expected}"
            )));
        }
        Ok(LinearGroup {
            family,
            n,
            q,
            field,
            form,
            generators,
            matrix_order,
            vectors,
            projective,
            kernel,
        })
    }

    /// The action realizing the named family.
    pub fn realization_kind(&self) -> ActionKind {
        if self.family.is_projective() {
            ActionKind::ProjectivePoints
        } else {
            ActionKind::Vectors
        }
    }

    pub fn realization(&self) -> &MatrixAction {
        match self.realization_kind() {
            ActionKind::ProjectivePoints => &self.projective,
            ActionKind::Vectors => &self.vectors,
        }
    }

    pub fn kernel_order(&self) -> usize {
        self.kernel.len()
    }

    /// Matrix of a realized permutation (up to scalars when projective).
    pub fn matrix_of(&self, perm: &Permutation) -> Option<Matrix> {
        super::elements::recover_matrix(&self.realization().points, perm)
    }

    pub fn perm_of(&self, m: &Matrix) -> Option<Permutation> {
        self.realization().perm_of(m)
    }

    pub fn detect_kind(&self, perm: &Permutation) -> ElementKind {
        match self.matrix_of(perm) {
            Some(m) => super::elements::detect_kind_scaled(&m, &self.form, self.realization().points.is_projective()),
            None => ElementKind::Other,
        }
    }

    /// A standard representative of the given kind, as a matrix and as a
    /// permutation of the realization.
    pub fn distinguished(&self, kind: ElementKind) -> Result<(Matrix, Permutation)> {
        let f = &self.field;
        let n = self.n;
        let na = || Error::NotApplicable(format!("no {} in {}({n},{})", kind.name(), self.family.name(), self.q));
        let m = match (kind, self.form.kind()) {
            (ElementKind::Transvection, FormKind::None) => Matrix::elementary(f, n, 0, 1, f.one())?,
            (ElementKind::Transvection, FormKind::Symplectic) => form_transvection(&self.form, &unit(f, n, 0), f.one())?,
            (ElementKind::Transvection, FormKind::Hermitian) => {
                let r = u64::from(self.q);
                let minus_one = f.neg(f.one())?;
                let a = f.elements().find(|&a| f.pow(a, r + 1).unwrap() == minus_one).ok_or_else(na)?;
                let l = f
                    .elements()
                    .find(|&l| !l.is_zero() && f.add(l, f.conjugate(l).unwrap()).unwrap().is_zero())
                    .ok_or_else(na)?;
                form_transvection(&self.form, &combo(f, n, &[(0, f.one()), (1, a)]), l)?
            }
            (ElementKind::Reflection, FormKind::Hermitian) => {
                let omega = f
                    .elements()
                    .find(|&w| !w.is_one() && !w.is_zero() && f.pow(w, 3).unwrap().is_one())
                    .ok_or_else(na)?;
                unitary_reflection(&self.form, &unit(f, n, 0), omega)?
            }
            (ElementKind::LongRoot, FormKind::Quadratic) => {
                siegel_element(&self.form, &unit(f, n, 0), &unit(f, n, 1), f.one())?
            }
            _ => return Err(na()),
        };
        if !in_family(self.family, &m, &self.form)? {
            return Err(na());
        }
        let p = self.perm_of(&m).ok_or_else(na)?;
        if !self.realization().group.contains(&p) {
            return Err(na());
        }
        Ok((m, p))
    }
}

