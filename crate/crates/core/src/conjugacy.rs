//! Conjugacy classes by conjugation-orbit BFS, class surveys, intersection
//! counts with subgroups and the solvable radical.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{Permutation, PermutationGroup};

/// Default cap on the number of class members held in memory.
pub const CLASS_CAP: usize = 100_000;
/// Groups up to this order may be enumerated element by element.
pub const ENUMERATION_CAP: u64 = 1_000_000;

/// A conjugacy class `x^G` with its members, each reachable from the
/// representative through a recorded chain of generator conjugations.
#[derive(Debug, Clone)]
pub struct ConjugacyClass {
    representative: Permutation,
    size: BigUint,
    centralizer_order: BigUint,
    element_order: u64,
    members: Vec<Permutation>,
    index: HashMap<Vec<u8>, u32>,
    // (parent member, generator) so that member = parent^generator
    parent: Vec<(u32, u32)>,
    gens: Vec<Permutation>,
}

/// JSON form of a class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassSummary {
    pub rep_cycles: String,
    #[serde(with = "crate::json::big_number")]
    pub size: BigUint,
    #[serde(with = "crate::json::big_number")]
    pub centralizer_order: BigUint,
    pub element_order: u64,
}

/// Conjugacy class of `x` in `g`, refusing classes with more than
/// [`CLASS_CAP`] members.
pub fn conjugacy_class(g: &PermutationGroup, x: &Permutation) -> Result<ConjugacyClass> {
    conjugacy_class_with_cap(g, x, CLASS_CAP)
}

pub fn conjugacy_class_with_cap(g: &PermutationGroup, x: &Permutation, cap: usize) -> Result<ConjugacyClass> {
    if x.degree() != g.degree() {
        return Err(Error::DegreeMismatch {
            left: g.degree(),
            right: x.degree(),
        });
    }
    if !g.contains(x) {
        return Err(Error::PreconditionViolated("class representative is not in the group".into()));
    }
    let gens = g.generators().to_vec();
    let mut members = vec![x.clone()];
    let mut index = HashMap::new();
    index.insert(x.encode(), 0u32);
    let mut parent = vec![(0u32, u32::MAX)];
    let mut i = 0;
    while i < members.len() {
        for (k, s) in gens.iter().enumerate() {
            let y = members[i].conjugate_by(s);
            let key = y.encode();
            if !index.contains_key(&key) {
                if members.len() >= cap {
                    return Err(Error::ClassTooLarge { cap });
                }
                index.insert(key, members.len() as u32);
                members.push(y);
                parent.push((i as u32, k as u32));
            }
        }
        i += 1;
    }
    let size = BigUint::from(members.len());
    let order = g.order();
    let (centralizer_order, rem) = order.div_rem(&size);
    debug_assert!(rem.is_zero());
    Ok(ConjugacyClass {
        representative: x.clone(),
        element_order: x.order(),
        size,
        centralizer_order,
        members,
        index,
        parent,
        gens,
    })
}

impl ConjugacyClass {
    pub fn representative(&self) -> &Permutation {
        &self.representative
    }

    pub fn size(&self) -> &BigUint {
        &self.size
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn centralizer_order(&self) -> &BigUint {
        &self.centralizer_order
    }

    pub fn element_order(&self) -> u64 {
        self.element_order
    }

    /// Members in BFS order; the representative comes first.
    pub fn members(&self) -> &[Permutation] {
        &self.members
    }

    pub fn contains(&self, y: &Permutation) -> bool {
        self.index.contains_key(&y.encode())
    }

    pub fn position(&self, y: &Permutation) -> Option<usize> {
        self.index.get(&y.encode()).map(|&i| i as usize)
    }

    /// Some `c` with `rep^c` equal to member `i`.
    pub fn conjugator(&self, i: usize) -> Permutation {
        let mut word = Vec::new();
        let mut j = i;
        while j != 0 {
            let (p, k) = self.parent[j];
            word.push(k as usize);
            j = p as usize;
        }
        let mut c = Permutation::identity(self.representative.degree());
        for &k in word.iter().rev() {
            c = c.then(&self.gens[k]);
        }
        c
    }

    pub fn summary(&self) -> ClassSummary {
        ClassSummary {
            rep_cycles: self.representative.to_cycle_string(),
            size: self.size.clone(),
            centralizer_order: self.centralizer_order.clone(),
            element_order: self.element_order,
        }
    }
}

/// Number of class members lying in `x`.
pub fn class_intersection(class: &ConjugacyClass, x: &PermutationGroup) -> usize {
    class.members.iter().filter(|y| x.contains(y)).count()
}

/// `n = |x^G ∩ X| [G:X] / |x^G|`, the number of conjugates of `X` that
/// contain a fixed class member, when the conjugates of `X` are counted
/// with multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedConjugateCount {
    #[serde(with = "crate::json::rational")]
    pub value: BigRational,
    pub integral: bool,
}

pub fn fixed_conjugate_count(class_size: &BigUint, intersection: &BigUint, index: &BigUint) -> FixedConjugateCount {
    let value = BigRational::new(
        (intersection * index).into(),
        class_size.clone().into(),
    );
    FixedConjugateCount {
        integral: value.is_integer(),
        value,
    }
}

/// Fixed-conjugate count for `x`'s class and subgroup `sub` of `g`.
pub fn fixed_conjugate_count_in(
    g: &PermutationGroup,
    class: &ConjugacyClass,
    sub: &PermutationGroup,
) -> FixedConjugateCount {
    let index = g.order() / sub.order();
    let meet = BigUint::from(class_intersection(class, sub));
    fixed_conjugate_count(class.size(), &meet, &index)
}

/// All conjugacy classes of a group, found by seeded sampling and checked
/// complete by summing class sizes.
#[derive(Debug, Clone)]
pub struct ClassSurvey {
    pub classes: Vec<ConjugacyClass>,
    /// True when sampling alone did not reach `|G|` and every element was
    /// visited instead.
    pub enumerated: bool,
}

impl ClassSurvey {
    /// Index of the class containing `y`.
    pub fn class_of(&self, y: &Permutation) -> Option<usize> {
        self.classes.iter().position(|c| c.contains(y))
    }

    pub fn summaries(&self) -> Vec<ClassSummary> {
        self.classes.iter().map(|c| c.summary()).collect()
    }
}

/// Consecutive fruitless samples tolerated before enumerating.
const MISS_LIMIT: usize = 2_000;

pub fn class_survey(g: &PermutationGroup, seed: u64) -> Result<ClassSurvey> {
    let order = g.order();
    let cap = order.to_usize().unwrap_or(usize::MAX).min(ENUMERATION_CAP as usize);
    let mut classes: Vec<ConjugacyClass> = Vec::new();
    let mut total = BigUint::zero();
    let add = |classes: &mut Vec<ConjugacyClass>, total: &mut BigUint, x: &Permutation| -> Result<bool> {
        if classes.iter().any(|c| c.contains(x)) {
            return Ok(false);
        }
        let c = conjugacy_class_with_cap(g, x, cap)?;
        *total += c.size();
        classes.push(c);
        Ok(true)
    };
    add(&mut classes, &mut total, &g.identity())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut misses = 0;
    while total < order && misses < MISS_LIMIT {
        let x = g.random_element(&mut rng);
        if add(&mut classes, &mut total, &x)? {
            misses = 0;
            let n = x.order() as i64;
            for k in 2..n {
                if total == order {
                    break;
                }
                add(&mut classes, &mut total, &x.pow(k))?;
            }
        } else {
            misses += 1;
        }
    }
    let mut enumerated = false;
    if total < order {
        if order > BigUint::from(ENUMERATION_CAP) {
            return Err(Error::Infeasible(format!(
                "class survey incomplete after sampling and |G| = {order} is too large to enumerate"
            )));
        }
        enumerated = true;
        let mut err = None;
        g.for_each_element(|x| match add(&mut classes, &mut total, x) {
            Ok(_) => total < order,
            Err(e) => {
                err = Some(e);
                false
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
    }
    if total != order {
        return Err(Error::Infeasible(format!("class sizes sum to {total}, not |G| = {order}")));
    }
    classes.sort_by(|a, b| {
        (a.element_order, a.size.clone(), a.representative.to_cycle_string()).cmp(&(
            b.element_order,
            b.size.clone(),
            b.representative.to_cycle_string(),
        ))
    });
    Ok(ClassSurvey { classes, enumerated })
}

/// The solvable radical: generated by the class representatives whose
/// normal closure is solvable.
#[derive(Debug, Clone)]
pub struct RadicalResult {
    pub group: PermutationGroup,
    pub solvable_reps: Vec<Permutation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RadicalSummary {
    #[serde(with = "crate::json::big_number")]
    pub order: BigUint,
    pub generators: Vec<String>,
    pub solvable_reps: Vec<String>,
}

impl RadicalResult {
    pub fn order(&self) -> BigUint {
        self.group.order()
    }

    pub fn contains(&self, x: &Permutation) -> bool {
        self.group.contains(x)
    }

    pub fn summary(&self) -> RadicalSummary {
        RadicalSummary {
            order: self.order(),
            generators: self.group.generators().iter().map(|p| p.to_cycle_string()).collect(),
            solvable_reps: self.solvable_reps.iter().map(|p| p.to_cycle_string()).collect(),
        }
    }
}

pub fn solvable_radical(g: &PermutationGroup) -> Result<RadicalResult> {
    let survey = class_survey(g, 0).map_err(|e| Error::RadicalInfeasible(e.to_string()))?;
    solvable_radical_from(g, &survey)
}

pub fn solvable_radical_from(g: &PermutationGroup, survey: &ClassSurvey) -> Result<RadicalResult> {
    if g.is_solvable() {
        return Ok(RadicalResult {
            group: g.clone(),
            solvable_reps: survey.classes.iter().map(|c| c.representative.clone()).collect(),
        });
    }
    let solvable_reps: Vec<Permutation> = survey
        .classes
        .iter()
        .map(|c| &c.representative)
        .filter(|x| !x.is_identity() && g.normal_closure(std::slice::from_ref(*x)).is_solvable())
        .cloned()
        .collect();
    let group = g.normal_closure(&solvable_reps);
    if !group.is_normalized_by(g.generators()) || !group.is_solvable() {
        return Err(Error::RadicalInfeasible("candidate radical is not a normal solvable subgroup".into()));
    }
    let mut reps = vec![g.identity()];
    reps.extend(solvable_reps);
    Ok(RadicalResult {
        group,
        solvable_reps: reps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atlas::{build, parse_group_spec};

    fn perm(n: usize, cycles: &[&[u32]]) -> Permutation {
        Permutation::from_cycles(n, cycles).unwrap()
    }

    fn group(s: &str) -> PermutationGroup {
        build(&parse_group_spec(s).unwrap()).unwrap().group
    }

    #[test]
    fn class_sizes() {
        let a5 = PermutationGroup::alternating(5).unwrap();
        let c = conjugacy_class(&a5, &a5.identity()).unwrap();
        assert_eq!(c.size(), &BigUint::from(1u32));
        let five = perm(5, &[&[0, 1, 2, 3, 4]]);
        let c = conjugacy_class(&a5, &five).unwrap();
        assert_eq!(c.size(), &BigUint::from(12u32));
        assert_eq!(c.centralizer_order(), &BigUint::from(5u32));
        assert_eq!(c.element_order(), 5);
        for i in 0..c.len() {
            assert_eq!(&five.conjugate_by(&c.conjugator(i)), &c.members()[i]);
        }
        assert!(matches!(
            conjugacy_class_with_cap(&a5, &five, 5),
            Err(Error::ClassTooLarge { cap: 5 })
        ));
    }

    #[test]
    fn transvections_of_psl33() {
        let b = build(&parse_group_spec("PSL(3,3)").unwrap()).unwrap();
        let lin = b.linear.as_ref().unwrap();
        let (_, x) = lin.distinguished(crate::atlas::ElementKind::Transvection).unwrap();
        let c = conjugacy_class(&b.group, &x).unwrap();
        // 13 centres, 4 hyperplanes through each, 2 nonzero scalars
        assert_eq!(c.size(), &BigUint::from(13u32 * 4 * 2));
    }

    #[test]
    fn intersections_with_point_stabilizer() {
        let a5 = PermutationGroup::alternating(5).unwrap();
        let a4 = a5.subgroup(vec![perm(5, &[&[0, 1, 2]]), perm(5, &[&[1, 2, 3]])]).unwrap();
        assert_eq!(a4.order(), BigUint::from(12u32));
        let id = conjugacy_class(&a5, &a5.identity()).unwrap();
        assert_eq!(class_intersection(&id, &a4), 1);
        let fives = conjugacy_class(&a5, &perm(5, &[&[0, 1, 2, 3, 4]])).unwrap();
        assert_eq!(class_intersection(&fives, &a4), 0);
        let threes = conjugacy_class(&a5, &perm(5, &[&[0, 1, 2]])).unwrap();
        assert_eq!(threes.len(), 20);
        assert_eq!(class_intersection(&threes, &a4), 8);
        let n = fixed_conjugate_count_in(&a5, &threes, &a4);
        assert_eq!(n.value, BigRational::from_integer(2.into()));
        assert!(n.integral);
        assert!(fixed_conjugate_count_in(&a5, &fives, &a4).value.is_zero());
        assert_eq!(
            fixed_conjugate_count_in(&a5, &threes, &a5).value,
            BigRational::from_integer(1.into())
        );
        let odd = fixed_conjugate_count(&BigUint::from(3u32), &BigUint::from(1u32), &BigUint::from(2u32));
        assert!(!odd.integral);
    }

    #[test]
    fn surveys_sum_to_group_order() {
        for (s, count) in [("Alt(5)", 5), ("Sym(4)", 5), ("PSL(2,7)", 6), ("Alt(6)", 7), ("Cyclic(6)", 6)] {
            let g = group(s);
            let survey = class_survey(&g, 1).unwrap();
            assert_eq!(survey.classes.len(), count, "{s}");
            let total: BigUint = survey.classes.iter().map(|c| c.size().clone()).sum();
            assert_eq!(total, g.order());
            for c in &survey.classes {
                assert_eq!(c.size() * c.centralizer_order(), g.order());
            }
        }
    }

    #[test]
    fn radicals() {
        assert_eq!(solvable_radical(&group("Sym(4)")).unwrap().order(), BigUint::from(24u32));
        assert_eq!(solvable_radical(&group("Alt(5)")).unwrap().order(), BigUint::from(1u32));
        let r = solvable_radical(&group("Direct(Alt(5),Cyclic(3))")).unwrap();
        assert_eq!(r.order(), BigUint::from(3u32));
        assert_eq!(solvable_radical(&group("SL(2,5)")).unwrap().order(), BigUint::from(2u32));
    }

    #[test]
    fn summary_json() {
        let a5 = PermutationGroup::alternating(5).unwrap();
        let c = conjugacy_class(&a5, &perm(5, &[&[0, 1, 2]])).unwrap();
        let j = serde_json::to_value(c.summary()).unwrap();
        assert_eq!(
            j,
            serde_json::json!({"rep_cycles": "(1,2,3)", "size": 20, "centralizer_order": 3, "element_order": 3})
        );
    }
}
