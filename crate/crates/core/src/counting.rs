//! Exact counting criteria: the class-size inequality that forces a
//! generating pair, its union-bound step, commutator order counts, and the
//! field-automorphism bound audits.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::field::prime_power;
use crate::conjugacy::{class_intersection, conjugacy_class, ConjugacyClass, FixedConjugateCount, ENUMERATION_CAP};
use crate::error::{Error, Result};
use crate::perm::{Permutation, PermutationGroup};

fn rat(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

fn big(n: &BigUint) -> BigRational {
    rat(BigInt::from(n.clone()))
}

/// One subgroup class `X_i`: `|x^G ∩ X_i|` and `[G:X_i]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupTerm {
    pub label: String,
    #[serde(with = "crate::json::big_number")]
    pub intersection: BigUint,
    #[serde(with = "crate::json::big_number")]
    pub index: BigUint,
}

/// Class and subgroup data for the counting criterion; the JSON instance
/// file format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountingInstance {
    #[serde(with = "crate::json::big_number")]
    pub group_order: BigUint,
    #[serde(with = "crate::json::big_number")]
    pub class_size: BigUint,
    pub subgroups: Vec<SubgroupTerm>,
}

impl CountingInstance {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidInstance(m));
        if self.group_order.is_zero() || self.class_size.is_zero() {
            return bad("group order and class size must be positive".into());
        }
        if !(&self.group_order % &self.class_size).is_zero() {
            return bad(format!("class size {} does not divide |G| = {}", self.class_size, self.group_order));
        }
        for s in &self.subgroups {
            if s.index.is_zero() || !(&self.group_order % &s.index).is_zero() {
                return bad(format!("{}: index {} does not divide |G|", s.label, s.index));
            }
            let order = &self.group_order / &s.index;
            if s.intersection > self.class_size || s.intersection > order {
                return bad(format!(
                    "{}: intersection {} exceeds min(|x^G|, |X|) = min({}, {order})",
                    s.label, s.intersection, self.class_size
                ));
            }
        }
        Ok(())
    }

    /// `n_i = |x^G ∩ X_i| [G:X_i] / |x^G|` for each subgroup.
    pub fn n_values(&self) -> Vec<FixedConjugateCount> {
        self.subgroups
            .iter()
            .map(|s| crate::conjugacy::fixed_conjugate_count(&self.class_size, &s.intersection, &s.index))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountingForm {
    /// `|x^G|^2 > Σ |x^G ∩ X_i|^2 [G:X_i]`
    Full,
    /// `|G| / |C_G(x)|^2 > Σ |x^G ∩ X_i|`
    Remark,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountingVerdict {
    pub form: CountingForm,
    #[serde(with = "crate::json::rational")]
    pub lhs: BigRational,
    #[serde(with = "crate::json::rational")]
    pub rhs: BigRational,
    #[serde(with = "crate::json::rational")]
    pub margin: BigRational,
    pub criterion_holds: bool,
    pub n_values: Vec<FixedConjugateCount>,
}

pub fn counting_check(inst: &CountingInstance, form: CountingForm) -> Result<CountingVerdict> {
    inst.validate()?;
    let s = big(&inst.class_size);
    let (lhs, rhs) = match form {
        CountingForm::Full => (
            &s * &s,
            inst.subgroups
                .iter()
                .map(|t| big(&t.intersection) * big(&t.intersection) * big(&t.index))
                .fold(BigRational::zero(), |a, b| a + b),
        ),
        CountingForm::Remark => {
            // |C_G(x)| = |G| / |x^G|
            let c = big(&inst.group_order) / &s;
            (
                big(&inst.group_order) / (&c * &c),
                inst.subgroups.iter().map(|t| big(&t.intersection)).fold(BigRational::zero(), |a, b| a + b),
            )
        }
    };
    Ok(CountingVerdict {
        form,
        margin: &lhs - &rhs,
        criterion_holds: lhs > rhs,
        lhs,
        rhs,
        n_values: inst.n_values(),
    })
}

/// Builds an instance from a class and explicit subgroups of `g`.
pub fn instance_from_groups(
    g: &PermutationGroup,
    class: &ConjugacyClass,
    subgroups: &[(String, PermutationGroup)],
) -> CountingInstance {
    let order = g.order();
    CountingInstance {
        group_order: order.clone(),
        class_size: class.size().clone(),
        subgroups: subgroups
            .iter()
            .map(|(label, x)| SubgroupTerm {
                label: label.clone(),
                intersection: BigUint::from(class_intersection(class, x)),
                index: &order / x.order(),
            })
            .collect(),
    }
}

/// Cap on the number of conjugates of one subgroup.
pub const SUBGROUP_ORBIT_CAP: usize = 200;

/// All conjugates of `x` under `g`, by BFS over generator conjugation.
pub fn subgroup_conjugates(g: &PermutationGroup, x: &PermutationGroup, cap: usize) -> Result<Vec<PermutationGroup>> {
    let mut orbit = vec![x.clone()];
    let mut i = 0;
    while i < orbit.len() {
        for s in g.generators() {
            let c = orbit[i].conjugate(s);
            if !orbit.iter().any(|o| o.same_group(&c)) {
                if orbit.len() >= cap {
                    return Err(Error::SubgroupOrbitTooLarge { cap });
                }
                orbit.push(c);
            }
        }
        i += 1;
    }
    Ok(orbit)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnionTerm {
    pub label: String,
    pub conjugates: usize,
    /// Conjugates containing the representative, counted.
    pub containing: usize,
    pub intersection: usize,
    pub n: FixedConjugateCount,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnionBoundReport {
    pub terms: Vec<UnionTerm>,
    /// `|x^G ∩ ∪ X_ij|` over the conjugates containing `x`.
    pub union_containing: usize,
    /// `Σ n_i |x^G ∩ X_i|`
    pub bound: usize,
    /// `|x^G ∩ ∪ X_ij|` over all conjugates.
    pub union_all: usize,
    /// `Σ_i [G:N(X_i)] |x^G ∩ X_i|`, summed over all conjugates.
    pub sum_all: usize,
    /// Counted `n_i` agree with the ratio formula and are integral.
    pub n_consistent: bool,
    pub holds: bool,
    pub strict: bool,
}

/// Measures the union of class members inside conjugates of the given
/// subgroups and compares it with the counting bound.
pub fn union_bound_check(
    g: &PermutationGroup,
    class: &ConjugacyClass,
    subgroups: &[(String, PermutationGroup)],
) -> Result<UnionBoundReport> {
    let x = class.representative();
    let members = class.members();
    let mut in_containing = vec![false; members.len()];
    let mut in_any = vec![false; members.len()];
    let mut terms = Vec::new();
    let mut n_consistent = true;
    let (mut bound, mut sum_all) = (0usize, 0usize);
    for (label, sub) in subgroups {
        if !sub.is_subgroup_of(g) {
            return Err(Error::PreconditionViolated(format!("{label} is not a subgroup")));
        }
        let conjugates = subgroup_conjugates(g, sub, SUBGROUP_ORBIT_CAP)?;
        let intersection = class_intersection(class, sub);
        let mut containing = 0;
        for c in &conjugates {
            let has_x = c.contains(x);
            containing += usize::from(has_x);
            for (i, y) in members.iter().enumerate() {
                if c.contains(y) {
                    in_any[i] = true;
                    if has_x {
                        in_containing[i] = true;
                    }
                }
            }
        }
        let index = g.order() / sub.order();
        let n = crate::conjugacy::fixed_conjugate_count(class.size(), &BigUint::from(intersection), &index);
        // conjugates are counted with multiplicity |N(X)|/|X|
        let multiplicity = &index / BigUint::from(conjugates.len());
        let counted = BigUint::from(containing) * &multiplicity;
        n_consistent &= n.integral && n.value == big(&counted);
        bound += containing * intersection;
        sum_all += conjugates.len() * intersection;
        terms.push(UnionTerm {
            label: label.clone(),
            conjugates: conjugates.len(),
            containing,
            intersection,
            n,
        });
    }
    let union_containing = in_containing.iter().filter(|&&b| b).count();
    let union_all = in_any.iter().filter(|&&b| b).count();
    Ok(UnionBoundReport {
        holds: union_containing <= bound && union_all <= sum_all,
        strict: union_containing < bound,
        terms,
        union_containing,
        bound,
        union_all,
        sum_all,
        n_consistent,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommutatorCount {
    pub target_order: u64,
    #[serde(with = "crate::json::big_number")]
    pub count: BigUint,
    pub exists: bool,
    pub method: String,
    /// Number of `g` with `[x,g]` of each order; sums to `|G|`.
    pub distribution: BTreeMap<u64, u64>,
}

/// Counts `g ∈ G` with `[x, g] = x^-1 x^g` of the target order. Sweeps the
/// whole group when `|G| <= 10^6`, otherwise the class of `x`, weighting
/// each member by `|C_G(x)|`.
pub fn commutator_class_count(g: &PermutationGroup, x: &Permutation, target_order: u64) -> Result<CommutatorCount> {
    if !g.contains(x) {
        return Err(Error::PreconditionViolated("element is not in the group".into()));
    }
    if g.order() <= BigUint::from(ENUMERATION_CAP) {
        let mut distribution = BTreeMap::new();
        g.for_each_element(|h| {
            *distribution.entry(Permutation::commutator(x, h).order()).or_insert(0u64) += 1;
            true
        });
        Ok(finish_count(target_order, distribution, "group"))
    } else {
        commutator_count_by_class(g, x, target_order)
    }
}

pub fn commutator_count_by_class(g: &PermutationGroup, x: &Permutation, target_order: u64) -> Result<CommutatorCount> {
    let class = conjugacy_class(g, x).map_err(|e| Error::Infeasible(e.to_string()))?;
    let weight = class
        .centralizer_order()
        .to_u64()
        .ok_or_else(|| Error::Infeasible("centralizer too large".into()))?;
    let xi = x.inverse();
    let mut distribution = BTreeMap::new();
    for y in class.members() {
        *distribution.entry(xi.then(y).order()).or_insert(0u64) += weight;
    }
    Ok(finish_count(target_order, distribution, "class"))
}

fn finish_count(target_order: u64, distribution: BTreeMap<u64, u64>, method: &str) -> CommutatorCount {
    let count = BigUint::from(distribution.get(&target_order).copied().unwrap_or(0));
    CommutatorCount {
        target_order,
        exists: !count.is_zero(),
        count,
        method: method.to_string(),
        distribution,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AuditFamily {
    Psl2,
    Sz,
    Ree,
}

impl AuditFamily {
    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "psl2" | "l2" => Some(AuditFamily::Psl2),
            "sz" | "szb2" | "2b2" | "suzuki" => Some(AuditFamily::Sz),
            "ree" | "reeg2" | "2g2" => Some(AuditFamily::Ree),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditTerm {
    pub label: String,
    #[serde(with = "crate::json::rational")]
    pub value: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldAutoAudit {
    pub family: AuditFamily,
    pub q0: u64,
    pub p: u64,
    /// `q = q0^p`, as a decimal string.
    pub q: String,
    /// The quantity that must exceed the bound: `|x^{G_0}|` for `PSL2`,
    /// `|G_0| / |C_{G_0}(x)|^2` otherwise.
    #[serde(with = "crate::json::rational")]
    pub lhs: BigRational,
    pub terms: Vec<AuditTerm>,
    #[serde(with = "crate::json::rational")]
    pub bound: BigRational,
    #[serde(with = "crate::json::rational")]
    pub margin: BigRational,
    pub verdict: bool,
}

fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

fn odd_power_of(q0: u64, base: u64) -> bool {
    matches!(prime_power(q0), Some((b, e)) if b == base && e % 2 == 1)
}

/// Evaluates the crude field-automorphism bounds exactly.
pub fn field_auto_bound_audit(family: AuditFamily, q0: u64, p: u64) -> Result<FieldAutoAudit> {
    let invalid = |m: &str| Err(Error::InvalidFamilyParams(format!("{family:?} q0={q0} p={p}: {m}")));
    if p < 3 || !crate::verifier::witness::is_prime(p) {
        return invalid("p must be an odd prime");
    }
    let valid_q0 = match family {
        AuditFamily::Psl2 => prime_power(q0).is_some(),
        AuditFamily::Sz => odd_power_of(q0, 2),
        AuditFamily::Ree => odd_power_of(q0, 3),
    };
    if !valid_q0 {
        return invalid(match family {
            AuditFamily::Psl2 => "q0 must be a prime power",
            AuditFamily::Sz => "q0 must be an odd power of 2",
            AuditFamily::Ree => "q0 must be an odd power of 3",
        });
    }
    let b0 = BigInt::from(q0);
    let bq = num_traits::pow(b0.clone(), p as usize);
    let (r0, r) = (rat(b0.clone()), rat(bq.clone()));
    let one = BigRational::one();
    let sq = |v: &BigRational| v * v;
    let term = |label: &str, value: BigRational| AuditTerm {
        label: label.to_string(),
        value,
    };
    let (lhs, terms) = match family {
        AuditFamily::Psl2 => {
            let lhs = &r * (sq(&r) - &one) / (&r0 * (sq(&r0) - &one));
            let terms = vec![
                term("q0(q0^2-1)", &r0 * (sq(&r0) - &one)),
                term("q(q-1)(q0+1)/(q0(q0-1))", &r * (&r - &one) * (&r0 + &one) / (&r0 * (&r0 - &one))),
                term("(q+1)q0(q0-1)/(q0+1)", (&r + &one) * &r0 * (&r0 - &one) / (&r0 + &one)),
            ];
            (lhs, terms)
        }
        AuditFamily::Sz => {
            let s = rat(exact_sqrt(&(BigInt::from(2) * &bq)).expect("odd power of 2"));
            let s0 = rat(exact_sqrt(&(BigInt::from(2) * &b0)).expect("odd power of 2"));
            let order = sq(&r) * (sq(&r) + &one) * (&r - &one);
            let cent = sq(&sq(&r0)) * sq(&(sq(&r0) + &one)) * sq(&(&r0 - &one));
            let four = rat(4);
            let terms = vec![
                term("1", one.clone()),
                term("q^2(q-1)/(q0^4(q0-1)^2)", sq(&r) * (&r - &one) / (sq(&sq(&r0)) * sq(&(&r0 - &one)))),
                term("2(q-1)/(q0-1)^2", rat(2) * (&r - &one) / sq(&(&r0 - &one))),
                term(
                    "4(q+sqrt(2q)+1)/(q0+sqrt(2q0)+1)^2",
                    &four * (&r + &s + &one) / sq(&(&r0 + &s0 + &one)),
                ),
                term(
                    "4(q-sqrt(2q)+1)/(q0-sqrt(2q0)+1)^2",
                    &four * (&r - &s + &one) / sq(&(&r0 - &s0 + &one)),
                ),
            ];
            (order / cent, terms)
        }
        AuditFamily::Ree => {
            let s = rat(exact_sqrt(&(BigInt::from(3) * &bq)).expect("odd power of 3"));
            let s0 = rat(exact_sqrt(&(BigInt::from(3) * &b0)).expect("odd power of 3"));
            let cube = |v: &BigRational| v * v * v;
            let order = cube(&r) * (cube(&r) + &one) * (&r - &one);
            let cent = sq(&cube(&r0)) * sq(&(cube(&r0) + &one)) * sq(&(&r0 - &one));
            let six = rat(6);
            let terms = vec![
                term("1", one.clone()),
                term("q^3(q-1)/(q0^6(q0-1)^2)", cube(&r) * (&r - &one) / (sq(&cube(&r0)) * sq(&(&r0 - &one)))),
                term("6(q+1)/(q0+1)^2", &six * (&r + &one) / sq(&(&r0 + &one))),
                term(
                    "6(q+sqrt(3q)+1)/(q0+sqrt(3q0)+1)^2",
                    &six * (&r + &s + &one) / sq(&(&r0 + &s0 + &one)),
                ),
                term(
                    "6(q-sqrt(3q)+1)/(q0-sqrt(3q0)+1)^2",
                    &six * (&r - &s + &one) / sq(&(&r0 - &s0 + &one)),
                ),
                term(
                    "2q(q^2-1)/(q0^2(q0^2-1)^2)",
                    rat(2) * &r * (sq(&r) - &one) / (sq(&r0) * sq(&(sq(&r0) - &one))),
                ),
            ];
            (order / cent, terms)
        }
    };
    let bound = terms.iter().fold(BigRational::zero(), |a, t| a + &t.value);
    Ok(FieldAutoAudit {
        family,
        q0,
        p,
        q: bq.to_string(),
        margin: &lhs - &bound,
        verdict: lhs > bound,
        lhs,
        terms,
        bound,
    })
}
