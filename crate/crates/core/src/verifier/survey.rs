//! Per-class verdicts for every class of odd prime order.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::table1::{match_exception, ExceptionMatch};
use super::witness::{find_witness, is_prime, SearchMode, WitnessQuery, WitnessReport, WitnessStatus};
use crate::atlas::{BuiltGroup, ElementKind};
use crate::conjugacy::{class_survey, solvable_radical_from, ClassSummary};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    /// `x` lies in the solvable radical.
    InRadical,
    PairWitness,
    /// No pair works, `p = 3` and the class matches an exception row.
    Table1Exception,
    /// No pair works, `p = 3`, and no exception row matches. Only possible
    /// outside almost simple groups.
    UnlistedException,
    /// No pair works for `p >= 5` outside the radical.
    Violation,
    /// Only sampling was possible and it found nothing.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassVerdict {
    pub class: ClassSummary,
    pub prime: u64,
    pub kind: ElementKind,
    pub in_radical: bool,
    pub verdict: Verdict,
    pub pair: Option<WitnessReport>,
    /// Reports for `k = 3, 4, ..` when no pair works.
    pub escalation: Vec<WitnessReport>,
    pub exception: Option<ExceptionMatch>,
    /// Smallest tuple size for which a witness was found.
    pub witness_k: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyReport {
    pub group: String,
    #[serde(with = "crate::json::big_number")]
    pub order: BigUint,
    #[serde(with = "crate::json::big_number")]
    pub radical_order: BigUint,
    pub classes: Vec<ClassVerdict>,
}

impl SurveyReport {
    pub fn violations(&self) -> usize {
        self.classes.iter().filter(|c| c.verdict == Verdict::Violation).count()
    }

    pub fn count(&self, v: Verdict) -> usize {
        self.classes.iter().filter(|c| c.verdict == v).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SurveyOptions {
    pub seed: u64,
    /// Largest tuple size tried for exception classes.
    pub max_k: usize,
    pub workers: usize,
}

impl Default for SurveyOptions {
    fn default() -> Self {
        SurveyOptions {
            seed: 0,
            max_k: 4,
            workers: 1,
        }
    }
}

pub fn theorem_a_survey(built: &BuiltGroup, opts: &SurveyOptions) -> Result<SurveyReport> {
    let g = &built.group;
    let survey = class_survey(g, opts.seed)?;
    let radical = solvable_radical_from(g, &survey)?;
    let mut classes = Vec::new();
    for class in &survey.classes {
        let p = class.element_order();
        if p % 2 == 0 || !is_prime(p) {
            continue;
        }
        let x = class.representative();
        let kind = built.detect_kind(x);
        let mut cv = ClassVerdict {
            class: class.summary(),
            prime: p,
            kind,
            in_radical: radical.contains(x),
            verdict: Verdict::InRadical,
            pair: None,
            escalation: Vec::new(),
            exception: None,
            witness_k: None,
        };
        if cv.in_radical {
            classes.push(cv);
            continue;
        }
        let query = |k| WitnessQuery::new(k, SearchMode::Exhaustive).workers(opts.workers);
        let pair = find_witness(g, x, Some(class), &query(2))?;
        let exhaustive = pair.note.is_none();
        cv.verdict = match pair.status {
            WitnessStatus::WitnessFound => {
                cv.witness_k = Some(2);
                Verdict::PairWitness
            }
            _ if !exhaustive => Verdict::Inconclusive,
            _ if p >= 5 => Verdict::Violation,
            _ => {
                cv.exception = match_exception(&built.spec, kind);
                for k in 3..=opts.max_k {
                    let r = find_witness(g, x, Some(class), &query(k))?;
                    let found = r.status == WitnessStatus::WitnessFound;
                    cv.escalation.push(r);
                    if found {
                        cv.witness_k = Some(k);
                        break;
                    }
                }
                if cv.exception.is_some() {
                    Verdict::Table1Exception
                } else {
                    Verdict::UnlistedException
                }
            }
        };
        cv.pair = Some(pair);
        classes.push(cv);
    }
    Ok(SurveyReport {
        group: built.spec.to_string(),
        order: g.order(),
        radical_order: radical.order(),
        classes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atlas::{build, parse_group_spec};

    fn survey(s: &str) -> SurveyReport {
        theorem_a_survey(&build(&parse_group_spec(s).unwrap()).unwrap(), &SurveyOptions::default()).unwrap()
    }

    #[test]
    fn a5_and_psl27() {
        let r = survey("Alt(5)");
        assert_eq!(r.classes.len(), 3);
        assert!(r.classes.iter().all(|c| c.verdict == Verdict::PairWitness));
        let primes: Vec<u64> = r.classes.iter().map(|c| c.prime).collect();
        assert_eq!(primes, vec![3, 5, 5]);
        let r = survey("PSL(2,7)");
        assert!(r.classes.iter().all(|c| c.verdict == Verdict::PairWitness));
        assert_eq!(r.classes.iter().filter(|c| c.prime == 7).count(), 2);
    }

    #[test]
    fn solvable_groups_are_all_radical() {
        let r = survey("Sym(4)");
        assert_eq!(r.radical_order, BigUint::from(24u32));
        assert!(r.classes.iter().all(|c| c.verdict == Verdict::InRadical));
    }

    #[test]
    fn psl33_transvections_are_exceptions() {
        let r = survey("PSL(3,3)");
        let t: Vec<&ClassVerdict> = r.classes.iter().filter(|c| c.kind == ElementKind::Transvection).collect();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].verdict, Verdict::Table1Exception);
        assert_eq!(t[0].witness_k, Some(3));
        assert_eq!(r.violations(), 0);
        assert!(r
            .classes
            .iter()
            .filter(|c| c.kind != ElementKind::Transvection)
            .all(|c| c.verdict == Verdict::PairWitness));
    }
}
