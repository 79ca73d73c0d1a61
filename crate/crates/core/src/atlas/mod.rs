//! Named groups: alternating and symmetric groups, classical groups over
//! small fields, wreath and direct products.

pub mod action;
pub mod classical;
pub mod elements;
pub mod spec;
pub mod wreath;

pub use action::{to_permutation, ActionKind, MatrixAction, PermutationImage, PointSet};
pub use classical::{order_formula, projective_order_formula, LinearGroup};
pub use elements::{
    detect_kind, detect_kind_scaled, form_transvection, recover_matrix, siegel_element, transvection, unitary_reflection, ElementKind,
};
pub use spec::{parse_group_spec, Family, GroupSpec};
pub use wreath::{WreathElement, WreathProduct};

use crate::error::{Error, Result};
use crate::perm::{Permutation, PermutationGroup, MAX_DEGREE};

/// Bumped whenever a construction changes the permutations it produces.
pub const ATLAS_REVISION: u32 = 1;

/// A built group with whatever structure its construction provides.
#[derive(Debug, Clone)]
pub struct BuiltGroup {
    pub spec: GroupSpec,
    pub group: PermutationGroup,
    pub linear: Option<LinearGroup>,
    pub wreath: Option<WreathProduct>,
}

impl BuiltGroup {
    /// Structural kind of an element, when the group carries matrices.
    pub fn detect_kind(&self, x: &Permutation) -> ElementKind {
        self.linear.as_ref().map_or(ElementKind::Other, |l| l.detect_kind(x))
    }
}

/// Direct product acting on the disjoint union of the factors' points.
pub fn direct_product(factors: &[PermutationGroup]) -> Result<PermutationGroup> {
    let degree: usize = factors.iter().map(|g| g.degree()).sum();
    if degree > MAX_DEGREE {
        return Err(Error::ActionTooLarge {
            points: degree as u64,
            cap: MAX_DEGREE as u64,
        });
    }
    let mut gens = Vec::new();
    let mut offset = 0;
    for g in factors {
        for s in g.generators() {
            gens.push(s.shifted(offset, degree));
        }
        offset += g.degree();
    }
    PermutationGroup::new(degree, gens)
}

pub fn build(spec: &GroupSpec) -> Result<BuiltGroup> {
    let plain = |group| BuiltGroup {
        spec: spec.clone(),
        group,
        linear: None,
        wreath: None,
    };
    let check_degree = |n: usize, max: usize| {
        if n == 0 || n > max {
            Err(Error::UnsupportedSpec(format!("{spec}: degree must be in 1..={max}")))
        } else {
            Ok(())
        }
    };
    match spec {
        GroupSpec::Alt { n } => {
            check_degree(*n, 12)?;
            Ok(plain(PermutationGroup::alternating(*n)?))
        }
        GroupSpec::Sym { n } => {
            check_degree(*n, 12)?;
            Ok(plain(PermutationGroup::symmetric(*n)?))
        }
        GroupSpec::Cyclic { n } => {
            check_degree(*n, 1000)?;
            Ok(plain(PermutationGroup::cyclic(*n)?))
        }
        GroupSpec::Classical { family, n, q } => {
            let lin = LinearGroup::new(*family, *n, *q)?;
            let group = lin.realization().group.clone();
            Ok(BuiltGroup {
                spec: spec.clone(),
                group,
                linear: Some(lin),
                wreath: None,
            })
        }
        GroupSpec::Wreath { inner, t } => {
            let l = build(inner)?;
            let w = WreathProduct::new(&l.group, *t)?;
            Ok(BuiltGroup {
                spec: spec.clone(),
                group: w.group().clone(),
                linear: None,
                wreath: Some(w),
            })
        }
        GroupSpec::Direct { factors } => {
            if factors.is_empty() {
                return Err(Error::UnsupportedSpec("direct product of no factors".into()));
            }
            let groups = factors.iter().map(|f| build(f).map(|b| b.group)).collect::<Result<Vec<_>>>()?;
            Ok(plain(direct_product(&groups)?))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    fn order(s: &str) -> BigUint {
        build(&parse_group_spec(s).unwrap()).unwrap().group.order()
    }

    #[test]
    fn spec_orders() {
        assert_eq!(order("Alt(5)"), BigUint::from(60u32));
        assert_eq!(order("Sym(4)"), BigUint::from(24u32));
        assert_eq!(order("SU(3,3)"), BigUint::from(6048u32));
        assert_eq!(order("PSL(2,7)"), BigUint::from(168u32));
        assert_eq!(order("Direct(Alt(5),Cyclic(3))"), BigUint::from(180u32));
        assert_eq!(order("Wreath(Alt(5),2)"), BigUint::from(7200u32));
    }

    #[test]
    fn psl27_degree_and_closure_oracle() {
        let g = build(&parse_group_spec("PSL(2,7)").unwrap()).unwrap().group;
        assert_eq!(g.degree(), 8);
        assert_eq!(crate::perm::closure_order(8, g.generators(), 1000), Some(168));
    }
}
