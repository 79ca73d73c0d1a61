use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::Rng;

use super::chain::StabChain;
use super::permutation::Permutation;
use crate::error::{Error, Result};

/// Largest permutation degree any group may act on.
pub const MAX_DEGREE: usize = 4000;

/// A permutation group given by generators; the stabilizer chain is built on
/// first use and frozen afterwards.
#[derive(Clone)]
pub struct PermutationGroup {
    degree: usize,
    gens: Vec<Permutation>,
    chain: OnceLock<StabChain>,
}

impl fmt::Debug for PermutationGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PermutationGroup")
            .field("degree", &self.degree)
            .field("gens", &self.gens)
            .finish()
    }
}

impl PermutationGroup {
    pub fn new(degree: usize, gens: Vec<Permutation>) -> Result<Self> {
        if degree > MAX_DEGREE {
            return Err(Error::ActionTooLarge {
                points: degree as u64,
                cap: MAX_DEGREE as u64,
            });
        }
        for g in &gens {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch {
                    left: degree,
                    right: g.degree(),
                });
            }
        }
        let gens = gens.into_iter().filter(|g| !g.is_identity()).collect();
        Ok(PermutationGroup {
            degree,
            gens,
            chain: OnceLock::new(),
        })
    }

    fn from_chain(degree: usize, gens: Vec<Permutation>, chain: StabChain) -> Self {
        let group = PermutationGroup {
            degree,
            gens,
            chain: OnceLock::new(),
        };
        let _ = group.chain.set(chain);
        group
    }

    pub fn trivial(degree: usize) -> Self {
        Self::from_chain(degree, Vec::new(), StabChain::new(degree))
    }

    pub fn symmetric(n: usize) -> Result<Self> {
        if n < 2 {
            return Ok(Self::trivial(n));
        }
        let cycle: Vec<u32> = (0..n as u32).collect();
        Self::new(n, vec![Permutation::from_cycles(n, &[&[0, 1]])?, Permutation::from_cycles(n, &[&cycle])?])
    }

    /// `A_n` generated by the 3-cycles `(0 1 k)`.
    pub fn alternating(n: usize) -> Result<Self> {
        if n < 3 {
            return Ok(Self::trivial(n));
        }
        let gens = (2..n as u32)
            .map(|k| Permutation::from_cycles(n, &[&[0, 1, k]]))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, gens)
    }

    /// The cyclic group generated by an `n`-cycle on `n` points.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n < 2 {
            return Ok(Self::trivial(n.max(1)));
        }
        let cycle: Vec<u32> = (0..n as u32).collect();
        Self::new(n, vec![Permutation::from_cycles(n, &[&cycle])?])
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.gens
    }

    pub fn chain(&self) -> &StabChain {
        self.chain
            .get_or_init(|| StabChain::from_generators(self.degree, &self.gens))
    }

    pub fn order(&self) -> BigUint {
        self.chain().order()
    }

    /// The order as `u64`, when it fits.
    pub fn order_u64(&self) -> Option<u64> {
        self.order().to_u64()
    }

    pub fn is_trivial(&self) -> bool {
        self.chain().is_trivial()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        self.chain().contains(g)
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Permutation {
        self.chain().random_element(rng)
    }

    pub fn identity(&self) -> Permutation {
        Permutation::identity(self.degree)
    }

    /// The subgroup generated by `gens`, acting on the same points.
    pub fn subgroup(&self, gens: Vec<Permutation>) -> Result<Self> {
        Self::new(self.degree, gens)
    }

    pub fn is_subgroup_of(&self, other: &PermutationGroup) -> bool {
        self.gens.iter().all(|g| other.contains(g))
    }

    pub fn same_group(&self, other: &PermutationGroup) -> bool {
        self.order() == other.order() && self.is_subgroup_of(other)
    }

    pub fn is_abelian(&self) -> bool {
        self.gens
            .iter()
            .enumerate()
            .all(|(i, a)| self.gens[i + 1..].iter().all(|b| a.commutes_with(b)))
    }

    /// `H^g = g^-1 H g`.
    pub fn conjugate(&self, g: &Permutation) -> Self {
        let gens = self.gens.iter().map(|h| h.conjugate_by(g)).collect();
        Self::new(self.degree, gens).expect("conjugation preserves degree")
    }

    pub fn is_normalized_by(&self, gens: &[Permutation]) -> bool {
        self.gens
            .iter()
            .all(|h| gens.iter().all(|g| self.contains(&h.conjugate_by(g))))
    }

    /// Smallest subgroup containing `seeds` that is normalized by this
    /// group's generators.
    pub fn normal_closure(&self, seeds: &[Permutation]) -> Self {
        let mut chain = StabChain::new(self.degree);
        let mut gens: Vec<Permutation> = Vec::new();
        for s in seeds {
            if chain.extend(s) {
                gens.push(s.clone());
            }
        }
        let mut i = 0;
        while i < gens.len() {
            for g in &self.gens {
                let c = gens[i].conjugate_by(g);
                if chain.extend(&c) {
                    gens.push(c);
                }
            }
            i += 1;
        }
        Self::from_chain(self.degree, gens, chain)
    }

    /// `[H, K]` for `K` normalized by this group, taken as the normal closure
    /// of generator commutators.
    fn commutator_with(&self, other: &PermutationGroup) -> Self {
        let mut seeds = Vec::new();
        for a in other.generators() {
            for b in &self.gens {
                let c = Permutation::commutator(a, b);
                if !c.is_identity() {
                    seeds.push(c);
                }
            }
        }
        self.normal_closure(&seeds)
    }

    pub fn derived_subgroup(&self) -> Self {
        let mut seeds = Vec::new();
        for (i, a) in self.gens.iter().enumerate() {
            for b in &self.gens[i + 1..] {
                let c = Permutation::commutator(a, b);
                if !c.is_identity() {
                    seeds.push(c);
                }
            }
        }
        self.normal_closure(&seeds)
    }

    /// `G = G^(0) > G^(1) > ...` until the series stabilizes.
    pub fn derived_series(&self) -> Vec<PermutationGroup> {
        let mut series = vec![self.clone()];
        loop {
            let last = series.last().unwrap();
            let next = last.derived_subgroup();
            if next.order() == last.order() {
                return series;
            }
            let done = next.is_trivial();
            series.push(next);
            if done {
                return series;
            }
        }
    }

    /// `G = g_1 > g_2 = [g_1, G] > ...` until the series stabilizes.
    pub fn lower_central_series(&self) -> Vec<PermutationGroup> {
        let mut series = vec![self.clone()];
        loop {
            let last = series.last().unwrap();
            let next = self.commutator_with(last);
            if next.order() == last.order() {
                return series;
            }
            let done = next.is_trivial();
            series.push(next);
            if done {
                return series;
            }
        }
    }

    pub fn is_solvable(&self) -> bool {
        self.derived_series().last().unwrap().is_trivial()
    }

    pub fn is_nilpotent(&self) -> bool {
        self.lower_central_series().last().unwrap().is_trivial()
    }

    pub fn orbit(&self, point: u32) -> Vec<u32> {
        let mut seen = vec![false; self.degree];
        seen[point as usize] = true;
        let mut orbit = vec![point];
        let mut i = 0;
        while i < orbit.len() {
            let p = orbit[i];
            for g in &self.gens {
                let q = g.image(p);
                if !seen[q as usize] {
                    seen[q as usize] = true;
                    orbit.push(q);
                }
            }
            i += 1;
        }
        orbit
    }

    /// Visits every element once; the callback returns false to stop early.
    pub fn for_each_element<F: FnMut(&Permutation) -> bool>(&self, f: F) {
        self.chain().for_each_element(f)
    }

    /// All elements, refusing groups larger than `cap`.
    pub fn elements(&self, cap: u64) -> Result<Vec<Permutation>> {
        let order = self.order();
        if order > BigUint::from(cap) {
            return Err(Error::Infeasible(format!("group order {order} exceeds element cap {cap}")));
        }
        let mut out = Vec::with_capacity(order.to_usize().unwrap_or(0));
        self.for_each_element(|g| {
            out.push(g.clone());
            true
        });
        Ok(out)
    }
}

/// Breadth-first closure of the generators under multiplication. Used as an
/// independent order oracle in tests.
pub fn closure_order(degree: usize, gens: &[Permutation], cap: usize) -> Option<usize> {
    let id = Permutation::identity(degree);
    let mut seen: HashSet<Permutation> = HashSet::new();
    seen.insert(id.clone());
    let mut queue = VecDeque::from([id]);
    while let Some(h) = queue.pop_front() {
        for g in gens {
            let k = h.then(g);
            if seen.insert(k.clone()) {
                if seen.len() > cap {
                    return None;
                }
                queue.push_back(k);
            }
        }
    }
    Some(seen.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(n: usize, s: &str) -> Permutation {
        Permutation::parse_cycles(s, n).unwrap()
    }

    fn a5() -> PermutationGroup {
        PermutationGroup::new(5, vec![p(5, "(1,2,3)"), p(5, "(1,2,3,4,5)")]).unwrap()
    }

    fn a4() -> PermutationGroup {
        PermutationGroup::alternating(4).unwrap()
    }

    /// Derived series by brute force on element sets.
    fn solvable_by_enumeration(g: &PermutationGroup) -> bool {
        let mut current: HashSet<Permutation> = g.elements(5000).unwrap().into_iter().collect();
        loop {
            if current.len() == 1 {
                return true;
            }
            let elems: Vec<_> = current.iter().cloned().collect();
            let comms: Vec<Permutation> = elems
                .iter()
                .flat_map(|a| elems.iter().map(move |b| Permutation::commutator(a, b)))
                .collect::<HashSet<_>>()
                .into_iter()
                .collect();
            let size = closure_order(g.degree(), &comms, 10_000).unwrap();
            if size == current.len() {
                return false;
            }
            let sub = PermutationGroup::new(g.degree(), comms).unwrap();
            current = sub.elements(5000).unwrap().into_iter().collect();
        }
    }

    #[test]
    fn basic_orders() {
        assert_eq!(a5().order(), BigUint::from(60u32));
        assert_eq!(PermutationGroup::trivial(3).order(), BigUint::from(1u32));
        assert_eq!(PermutationGroup::symmetric(6).unwrap().order(), BigUint::from(720u32));
        assert_eq!(PermutationGroup::alternating(7).unwrap().order(), BigUint::from(2520u32));
        assert_eq!(PermutationGroup::cyclic(6).unwrap().order(), BigUint::from(6u32));
    }

    #[test]
    fn membership_examples() {
        assert!(a4().contains(&p(4, "(1,2)(3,4)")));
        assert!(!a4().contains(&p(4, "(1,2)")));
        let x = p(5, "(1,2,3)");
        let g = p(5, "(1,4,2,5,3)");
        let prod = x.then(&x.conjugate_by(&g));
        assert_eq!(prod, p(5, "(1,2,3,4,5)"));
        assert!(a5().contains(&prod));
    }

    #[test]
    fn normal_closures() {
        let g = a4();
        assert_eq!(g.normal_closure(&[p(4, "(1,2,3)")]).order(), BigUint::from(12u32));
        let v4 = g.normal_closure(&[p(4, "(1,2)(3,4)")]);
        assert_eq!(v4.order(), BigUint::from(4u32));
        assert!(v4.is_normalized_by(g.generators()));
        let c6 = PermutationGroup::cyclic(6).unwrap();
        let x = c6.generators()[0].pow(2);
        assert_eq!(c6.normal_closure(&[x]).order(), BigUint::from(3u32));
    }

    #[test]
    fn solvability_and_nilpotency() {
        let s4 = PermutationGroup::symmetric(4).unwrap();
        assert!(s4.is_solvable());
        assert!(!s4.is_nilpotent());
        assert!(!a5().is_solvable());
        for n in 3..12 {
            let d = PermutationGroup::new(n, vec![
                Permutation::from_cycles(n, &[&(0..n as u32).collect::<Vec<_>>()]).unwrap(),
                Permutation::from_images((0..n as u32).map(|i| (n as u32 - i) % n as u32).collect()).unwrap(),
            ])
            .unwrap();
            assert_eq!(d.order(), BigUint::from(2 * n));
            assert!(d.is_solvable(), "D_{n}");
            assert_eq!(d.is_nilpotent(), n.is_power_of_two(), "D_{n}");
        }
        assert!(PermutationGroup::cyclic(6).unwrap().is_nilpotent());
        assert!(!PermutationGroup::symmetric(3).unwrap().is_nilpotent());
        // 3-group of order 27: <(1,2,3), (4,5,6), (7,8,9)>
        let e = PermutationGroup::new(9, vec![p(9, "(1,2,3)"), p(9, "(4,5,6)"), p(9, "(7,8,9)")]).unwrap();
        assert!(e.is_nilpotent());
        // Sylow 3 of S9, order 81
        let w = PermutationGroup::new(9, vec![p(9, "(1,2,3)"), p(9, "(1,4,7)(2,5,8)(3,6,9)")]).unwrap();
        assert_eq!(w.order(), BigUint::from(81u32));
        assert!(w.is_nilpotent());
    }

    #[test]
    fn solvability_matches_enumeration() {
        let groups = vec![
            PermutationGroup::symmetric(4).unwrap(),
            PermutationGroup::symmetric(5).unwrap(),
            a5(),
            PermutationGroup::new(6, vec![p(6, "(1,2,3)"), p(6, "(4,5,6)"), p(6, "(1,4)(2,5)(3,6)")]).unwrap(),
            PermutationGroup::new(7, vec![p(7, "(1,2,3,4,5,6,7)"), p(7, "(2,3,5)(4,7,6)")]).unwrap(),
            PermutationGroup::new(7, vec![p(7, "(1,2,3,4,5,6,7)"), p(7, "(2,3)(4,7)")]).unwrap(),
        ];
        for g in &groups {
            assert_eq!(g.is_solvable(), solvable_by_enumeration(g), "{g:?}");
            if g.is_nilpotent() {
                assert!(g.is_solvable());
            }
        }
    }

    #[test]
    fn random_elements_are_members_and_deterministic() {
        let g = a5();
        let mut r1 = ChaCha8Rng::seed_from_u64(3);
        let mut r2 = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let a = g.random_element(&mut r1);
            assert_eq!(a, g.random_element(&mut r2));
            assert!(g.contains(&a));
        }
        let t = PermutationGroup::trivial(4);
        assert!(t.random_element(&mut r1).is_identity());
    }

    #[test]
    fn random_elements_hit_class_proportions() {
        let g = a5();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let draws = 10_000usize;
        let mut counts = [0usize; 4];
        for _ in 0..draws {
            let x = g.random_element(&mut rng);
            let slot = match x.order() {
                1 => 0,
                2 => 1,
                3 => 2,
                5 => 3,
                o => panic!("unexpected order {o}"),
            };
            counts[slot] += 1;
        }
        for (c, size) in counts.iter().zip([1.0, 15.0, 20.0, 24.0]) {
            let p = size / 60.0;
            let mean = p * draws as f64;
            let sd = (draws as f64 * p * (1.0 - p)).sqrt();
            assert!((*c as f64 - mean).abs() <= 3.0 * sd + 1.0, "{counts:?}");
        }
        let c2 = PermutationGroup::cyclic(2).unwrap();
        let hits = (0..1000).filter(|_| c2.random_element(&mut rng).is_identity()).count();
        assert!((400..=600).contains(&hits));
    }

    #[test]
    fn chain_order_matches_closure() {
        let groups = vec![
            a5(),
            PermutationGroup::symmetric(6).unwrap(),
            PermutationGroup::new(8, vec![p(8, "(1,2,3,4,5,6,7)"), p(8, "(1,8)(2,7)(3,5)(4,6)")]).unwrap(),
            PermutationGroup::new(9, vec![p(9, "(1,2,3)"), p(9, "(1,4,7)(2,5,8)(3,6,9)")]).unwrap(),
        ];
        for g in &groups {
            let oracle = closure_order(g.degree(), g.generators(), 100_000).unwrap();
            assert_eq!(g.order(), BigUint::from(oracle));
        }
    }

    #[test]
    fn elements_are_distinct() {
        let g = PermutationGroup::symmetric(5).unwrap();
        let elems = g.elements(1000).unwrap();
        let set: HashSet<_> = elems.iter().collect();
        assert_eq!(set.len(), 120);
        assert!(g.elements(10).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(32))]

            #[test]
            fn products_sift(seed in any::<u64>()) {
                let g = PermutationGroup::alternating(7).unwrap();
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let a = g.random_element(&mut rng);
                let b = g.random_element(&mut rng);
                prop_assert!(g.contains(&a.then(&b)));
                let odd = a.then(&Permutation::from_cycles(7, &[&[0, 1]]).unwrap());
                prop_assert!(!g.contains(&odd));
            }
        }
    }
}
