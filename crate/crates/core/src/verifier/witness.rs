//! Searches for conjugates `x^{g_1}, .., x^{g_{k-1}}` that together with `x`
//! generate a non-solvable subgroup (or the whole group).

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;

use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::conjugacy::{conjugacy_class, ConjugacyClass};
use crate::error::{Error, Result};
use crate::perm::{Permutation, PermutationGroup};

/// Default number of tuples drawn in random mode.
pub const DEFAULT_BUDGET: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum SearchMode {
    Exhaustive,
    Random { budget: u64, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    Nonsolvable,
    FullGroup,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WitnessQuery {
    pub k: usize,
    pub mode: SearchMode,
    pub target: Target,
    pub workers: usize,
}

impl WitnessQuery {
    pub fn new(k: usize, mode: SearchMode) -> Self {
        WitnessQuery {
            k,
            mode,
            target: Target::Nonsolvable,
            workers: 1,
        }
    }

    pub fn target(mut self, target: Target) -> Self {
        self.target = target;
        self
    }

    pub fn workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum WitnessStatus {
    WitnessFound,
    NoneExhaustive,
    NoneBudget,
    ExceptionMatched,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub k: usize,
    pub mode: String,
    pub seed: Option<u64>,
    pub target: Target,
    pub status: WitnessStatus,
    /// Conjugators `g_1, .., g_{k-1}` in cycle notation.
    pub witness: Vec<String>,
    /// The conjugates `x^{g_i}`.
    pub conjugates: Vec<String>,
    #[serde(with = "opt_big")]
    pub subgroup_order: Option<BigUint>,
    pub solvable: Option<bool>,
    pub tuples_tested: u64,
    /// Set when an exhaustive request had to fall back to sampling.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

mod opt_big {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Wrap(#[serde(with = "crate::json::big_number")] BigUint);

    pub fn serialize<S: Serializer>(v: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
        v.as_ref().map(|b| Wrap(b.clone())).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigUint>, D::Error> {
        Ok(Option::<Wrap>::deserialize(d)?.map(|w| w.0))
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// The subgroup generated by `x` and `ys`, and whether it meets the target.
pub fn test_tuple(
    g: &PermutationGroup,
    x: &Permutation,
    ys: &[Permutation],
    target: Target,
) -> (bool, PermutationGroup) {
    let mut gens = Vec::with_capacity(ys.len() + 1);
    gens.push(x.clone());
    gens.extend(ys.iter().cloned());
    let h = g.subgroup(gens).expect("conjugates share the group degree");
    let hit = match target {
        Target::Nonsolvable => !h.is_solvable(),
        Target::FullGroup => h.order() == g.order(),
    };
    (hit, h)
}

/// Successive strictly increasing `r`-subsets of `1..m`.
struct Combinations {
    m: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Combinations {
    fn new(m: usize, r: usize) -> Self {
        Combinations {
            m,
            idx: (1..=r).collect(),
            done: r == 0 || r >= m,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        let r = self.idx.len();
        let mut i = r;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < self.m - (r - i) {
                self.idx[i] += 1;
                for j in i + 1..r {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

struct Found {
    conjugators: Vec<Permutation>,
    conjugates: Vec<Permutation>,
    rank: u64,
}

fn validate_query(g: &PermutationGroup, x: &Permutation, q: &WitnessQuery) -> Result<()> {
    if q.k < 2 {
        return Err(Error::PreconditionViolated(format!("tuple size {} must be at least 2", q.k)));
    }
    if let SearchMode::Random { budget: 0, .. } = q.mode {
        return Err(Error::PreconditionViolated("budget must be at least 1".into()));
    }
    let p = x.order();
    if p % 2 == 0 || !is_prime(p) {
        return Err(Error::PreconditionViolated(format!("element order {p} is not an odd prime")));
    }
    if !g.contains(x) {
        return Err(Error::PreconditionViolated("element is not in the group".into()));
    }
    Ok(())
}

/// Runs a witness query. `class` may carry the precomputed class of `x`.
pub fn find_witness(
    g: &PermutationGroup,
    x: &Permutation,
    class: Option<&ConjugacyClass>,
    q: &WitnessQuery,
) -> Result<WitnessReport> {
    validate_query(g, x, q)?;
    match q.mode {
        SearchMode::Exhaustive => {
            let owned;
            let class = match class {
                Some(c) if c.representative() == x => c,
                _ => match conjugacy_class(g, x) {
                    Ok(c) => {
                        owned = c;
                        &owned
                    }
                    Err(Error::ClassTooLarge { cap }) => {
                        log::warn!("class exceeds {cap} members; falling back to random search");
                        let fallback = WitnessQuery {
                            mode: SearchMode::Random {
                                budget: DEFAULT_BUDGET,
                                seed: 0,
                            },
                            ..*q
                        };
                        let mut r = random_search(g, x, &fallback)?;
                        r.note = Some(format!("class exceeds {cap} members; sampled instead"));
                        return Ok(r);
                    }
                    Err(e) => return Err(e),
                },
            };
            exhaustive_search(g, x, class, q)
        }
        SearchMode::Random { .. } => random_search(g, x, q),
    }
}

pub fn pair_witness(g: &PermutationGroup, x: &Permutation, mode: SearchMode) -> Result<WitnessReport> {
    find_witness(g, x, None, &WitnessQuery::new(2, mode))
}

pub fn tuple_witness(g: &PermutationGroup, x: &Permutation, k: usize, mode: SearchMode) -> Result<WitnessReport> {
    find_witness(g, x, None, &WitnessQuery::new(k, mode))
}

fn exhaustive_search(
    g: &PermutationGroup,
    x: &Permutation,
    class: &ConjugacyClass,
    q: &WitnessQuery,
) -> Result<WitnessReport> {
    let members = class.members();
    let stop = AtomicBool::new(false);
    let tested = AtomicU64::new(0);
    let best: Mutex<Option<Found>> = Mutex::new(None);
    let workers = q.workers.max(1) as u64;
    std::thread::scope(|s| {
        for w in 0..workers {
            let (stop, tested, best) = (&stop, &tested, &best);
            s.spawn(move || {
                for (rank, combo) in Combinations::new(members.len(), q.k - 1).enumerate() {
                    let rank = rank as u64;
                    if rank % workers != w {
                        continue;
                    }
                    if stop.load(Ordering::Relaxed) {
                        break;
                    }
                    let ys: Vec<Permutation> = combo.iter().map(|&i| members[i].clone()).collect();
                    tested.fetch_add(1, Ordering::Relaxed);
                    if test_tuple(g, x, &ys, q.target).0 {
                        let mut b = best.lock().unwrap();
                        if b.as_ref().is_none_or(|f| rank < f.rank) {
                            *b = Some(Found {
                                conjugators: combo.iter().map(|&i| class.conjugator(i)).collect(),
                                conjugates: ys,
                                rank,
                            });
                        }
                        stop.store(true, Ordering::Relaxed);
                        break;
                    }
                }
            });
        }
    });
    finish(g, x, q, best.into_inner().unwrap(), tested.into_inner(), WitnessStatus::NoneExhaustive)
}

fn random_search(g: &PermutationGroup, x: &Permutation, q: &WitnessQuery) -> Result<WitnessReport> {
    let SearchMode::Random { budget, seed } = q.mode else {
        unreachable!("random search needs a budget")
    };
    let stop = AtomicBool::new(false);
    let tested = AtomicU64::new(0);
    let best: Mutex<Option<Found>> = Mutex::new(None);
    let workers = q.workers.max(1) as u64;
    std::thread::scope(|s| {
        for w in 0..workers {
            let (stop, tested, best) = (&stop, &tested, &best);
            s.spawn(move || {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(w);
                let share = budget / workers + u64::from(w < budget % workers);
                for i in 0..share {
                    if stop.load(Ordering::Relaxed) {
                        break;
                    }
                    let conjugators: Vec<Permutation> = (1..q.k).map(|_| g.random_element(&mut rng)).collect();
                    let ys: Vec<Permutation> = conjugators.iter().map(|c| x.conjugate_by(c)).collect();
                    tested.fetch_add(1, Ordering::Relaxed);
                    if test_tuple(g, x, &ys, q.target).0 {
                        let rank = i * workers + w;
                        let mut b = best.lock().unwrap();
                        if b.as_ref().is_none_or(|f| rank < f.rank) {
                            *b = Some(Found {
                                conjugators,
                                conjugates: ys,
                                rank,
                            });
                        }
                        stop.store(true, Ordering::Relaxed);
                        break;
                    }
                }
            });
        }
    });
    finish(g, x, q, best.into_inner().unwrap(), tested.into_inner(), WitnessStatus::NoneBudget)
}

fn finish(
    g: &PermutationGroup,
    x: &Permutation,
    q: &WitnessQuery,
    found: Option<Found>,
    tested: u64,
    negative: WitnessStatus,
) -> Result<WitnessReport> {
    let (mode, seed) = match q.mode {
        SearchMode::Exhaustive => ("exhaustive".to_string(), None),
        SearchMode::Random { seed, .. } => ("random".to_string(), Some(seed)),
    };
    let mut report = WitnessReport {
        k: q.k,
        mode,
        seed,
        target: q.target,
        status: negative,
        witness: Vec::new(),
        conjugates: Vec::new(),
        subgroup_order: None,
        solvable: None,
        tuples_tested: tested,
        note: None,
    };
    if let Some(f) = found {
        // rebuild from the conjugators alone before reporting
        let ys: Vec<Permutation> = f.conjugators.iter().map(|c| x.conjugate_by(c)).collect();
        if ys != f.conjugates || !f.conjugators.iter().all(|c| g.contains(c)) {
            return Err(Error::WitnessNotVerified("conjugators do not reproduce the witness".into()));
        }
        let fresh = PermutationGroup::new(g.degree(), std::iter::once(x.clone()).chain(ys).collect())?;
        let solvable = fresh.is_solvable();
        let meets = match q.target {
            Target::Nonsolvable => !solvable,
            Target::FullGroup => fresh.order() == g.order(),
        };
        if !meets {
            return Err(Error::WitnessNotVerified("generated subgroup misses the target".into()));
        }
        report.status = WitnessStatus::WitnessFound;
        report.witness = f.conjugators.iter().map(|c| c.to_cycle_string()).collect();
        report.conjugates = f.conjugates.iter().map(|c| c.to_cycle_string()).collect();
        report.subgroup_order = Some(fresh.order());
        report.solvable = Some(solvable);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atlas::{build, parse_group_spec};

    fn perm(n: usize, cycles: &[&[u32]]) -> Permutation {
        Permutation::from_cycles(n, cycles).unwrap()
    }

    #[test]
    fn combinations_are_strict_and_complete() {
        let all: Vec<Vec<usize>> = Combinations::new(6, 2).collect();
        assert_eq!(all.len(), 10);
        assert!(all.iter().all(|c| c[0] >= 1 && c[0] < c[1] && c[1] < 6));
        assert_eq!(Combinations::new(6, 3).count(), 10);
        assert_eq!(Combinations::new(2, 1).count(), 1);
        assert_eq!(Combinations::new(1, 1).count(), 0);
    }

    #[test]
    fn a5_pair() {
        let a5 = PermutationGroup::alternating(5).unwrap();
        let x = perm(5, &[&[0, 1, 2]]);
        let r = pair_witness(&a5, &x, SearchMode::Exhaustive).unwrap();
        assert_eq!(r.status, WitnessStatus::WitnessFound);
        assert_eq!(r.subgroup_order, Some(BigUint::from(60u32)));
        assert_eq!(r.solvable, Some(false));
        let r = pair_witness(&a5, &x, SearchMode::Random { budget: 100, seed: 3 }).unwrap();
        assert_eq!(r.status, WitnessStatus::WitnessFound);
        assert_eq!(r.seed, Some(3));
    }

    #[test]
    fn s4_has_none() {
        let s4 = PermutationGroup::symmetric(4).unwrap();
        let x = perm(4, &[&[0, 1, 2]]);
        let r = pair_witness(&s4, &x, SearchMode::Exhaustive).unwrap();
        assert_eq!(r.status, WitnessStatus::NoneExhaustive);
        assert_eq!(r.tuples_tested, 7);
        let r = pair_witness(&s4, &x, SearchMode::Random { budget: 50, seed: 1 }).unwrap();
        assert_eq!(r.status, WitnessStatus::NoneBudget);
        assert_eq!(r.tuples_tested, 50);
    }

    #[test]
    fn bad_queries() {
        let a5 = PermutationGroup::alternating(5).unwrap();
        let inv = perm(5, &[&[0, 1], &[2, 3]]);
        assert!(pair_witness(&a5, &inv, SearchMode::Exhaustive).is_err());
        let x = perm(5, &[&[0, 1, 2]]);
        assert!(tuple_witness(&a5, &x, 1, SearchMode::Exhaustive).is_err());
        assert!(pair_witness(&a5, &x, SearchMode::Random { budget: 0, seed: 1 }).is_err());
    }

    #[test]
    fn workers_agree_on_status() {
        let g = build(&parse_group_spec("PSL(2,7)").unwrap()).unwrap().group;
        let x = g
            .elements(200)
            .unwrap()
            .into_iter()
            .find(|e| e.order() == 7)
            .unwrap();
        for w in [1, 3] {
            let q = WitnessQuery::new(2, SearchMode::Exhaustive).workers(w).target(Target::FullGroup);
            let r = find_witness(&g, &x, None, &q).unwrap();
            assert_eq!(r.status, WitnessStatus::WitnessFound);
            assert_eq!(r.subgroup_order, Some(BigUint::from(168u32)));
        }
    }

    #[test]
    fn pair_search_over_class_matches_search_over_group() {
        for s in ["Alt(5)", "PSL(2,7)"] {
            let g = build(&parse_group_spec(s).unwrap()).unwrap().group;
            let elements = g.elements(200).unwrap();
            for p in [3, 5, 7] {
                let Some(x) = elements.iter().find(|e| e.order() == p) else {
                    continue;
                };
                let by_class = pair_witness(&g, x, SearchMode::Exhaustive).unwrap().status == WitnessStatus::WitnessFound;
                let by_group = elements.iter().any(|c| test_tuple(&g, x, &[x.conjugate_by(c)], Target::Nonsolvable).0);
                assert_eq!(by_class, by_group, "{s} order {p}");
            }
        }
    }
}
