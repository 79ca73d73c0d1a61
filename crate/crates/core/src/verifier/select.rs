//! Picking a class representative from an order / kind / cycles selector.

use serde::{Deserialize, Serialize};

use crate::atlas::{BuiltGroup, ElementKind};
use crate::conjugacy::{ClassSurvey, ConjugacyClass};
use crate::error::{Error, Result};
use crate::perm::Permutation;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassSelector {
    pub order: Option<u64>,
    pub kind: Option<ElementKind>,
    /// An explicit element, 1-based cycle notation.
    pub cycles: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    pub rep: String,
    pub order: u64,
    pub size: String,
    pub kind: ElementKind,
}

/// Classes matching the selector, merged when their representatives
/// generate conjugate cyclic subgroups (every witness question has the same
/// answer for `x` and its generating powers). Returns the first class of
/// the single surviving family.
pub fn select_class<'a>(built: &BuiltGroup, survey: &'a ClassSurvey, sel: &ClassSelector) -> Result<&'a ConjugacyClass> {
    if let Some(c) = &sel.cycles {
        let x = Permutation::parse_cycles(c, built.group.degree())?;
        if !built.group.contains(&x) {
            return Err(Error::Selector(format!("{c} is not in {}", built.spec)));
        }
        let i = survey
            .class_of(&x)
            .ok_or_else(|| Error::Selector(format!("{c} is in no surveyed class")))?;
        return Ok(&survey.classes[i]);
    }
    if sel.order.is_none() && sel.kind.is_none() {
        return Err(Error::Selector("give an element order, a kind or explicit cycles".into()));
    }
    let matching: Vec<usize> = survey
        .classes
        .iter()
        .enumerate()
        .filter(|(_, c)| sel.order.is_none_or(|o| c.element_order() == o))
        .filter(|(_, c)| sel.kind.is_none_or(|k| built.detect_kind(c.representative()) == k))
        .map(|(i, _)| i)
        .collect();
    let mut families: Vec<usize> = Vec::new();
    for &i in &matching {
        let x = survey.classes[i].representative();
        let n = x.order() as i64;
        let root = (1..n.max(2))
            .filter(|&e| num_integer::gcd(e, n) == 1)
            .filter_map(|e| survey.class_of(&x.pow(e)))
            .min()
            .unwrap_or(i);
        if !families.contains(&root) {
            families.push(root);
        }
    }
    match families.as_slice() {
        [] => Err(Error::Selector(format!("no class of {} matches", built.spec))),
        [_] => Ok(&survey.classes[matching[0]]),
        _ => {
            let list: Vec<String> = candidates(built, survey, &matching)
                .iter()
                .map(|c| format!("{} (order {}, size {}, {})", c.rep, c.order, c.size, c.kind.name()))
                .collect();
            Err(Error::Selector(format!("ambiguous selector; candidates: {}", list.join("; "))))
        }
    }
}

pub fn candidates(built: &BuiltGroup, survey: &ClassSurvey, idx: &[usize]) -> Vec<Candidate> {
    idx.iter()
        .map(|&i| {
            let c = &survey.classes[i];
            Candidate {
                rep: c.representative().to_cycle_string(),
                order: c.element_order(),
                size: c.size().to_string(),
                kind: built.detect_kind(c.representative()),
            }
        })
        .collect()
}
