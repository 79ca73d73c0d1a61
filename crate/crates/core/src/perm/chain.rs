//! Deterministic Schreier-Sims stabilizer chains.
//!
//! Base points are chosen as the smallest point moved by the element that
//! forces a new level, so chains depend only on the generator sequence.

use num_bigint::BigUint;
use rand::Rng;

use super::permutation::Permutation;

const NOT_IN_ORBIT: u32 = u32::MAX;

#[derive(Clone, Debug)]
struct Level {
    base: u32,
    gens: Vec<Permutation>,
    orbit: Vec<u32>,
    slot: Vec<u32>,
    reps: Vec<Permutation>,
    inv_reps: Vec<Permutation>,
    // Schreier generators (orbit index < .0, gen index < .1) already verified
    checked: (usize, usize),
}

impl Level {
    fn new(base: u32, degree: usize) -> Self {
        let mut slot = vec![NOT_IN_ORBIT; degree];
        slot[base as usize] = 0;
        let id = Permutation::identity(degree);
        Level {
            base,
            gens: Vec::new(),
            orbit: vec![base],
            slot,
            reps: vec![id.clone()],
            inv_reps: vec![id],
            checked: (0, 0),
        }
    }

    fn push_point(&mut self, point: u32, rep: Permutation) {
        self.slot[point as usize] = self.orbit.len() as u32;
        self.orbit.push(point);
        self.inv_reps.push(rep.inverse());
        self.reps.push(rep);
    }

    fn add_gen(&mut self, g: Permutation) {
        let mut frontier = Vec::new();
        for idx in 0..self.orbit.len() {
            let img = g.image(self.orbit[idx]);
            if self.slot[img as usize] == NOT_IN_ORBIT {
                let rep = self.reps[idx].then(&g);
                self.push_point(img, rep);
                frontier.push(self.orbit.len() - 1);
            }
        }
        self.gens.push(g);
        let mut head = 0;
        while head < frontier.len() {
            let idx = frontier[head];
            head += 1;
            for gi in 0..self.gens.len() {
                let img = self.gens[gi].image(self.orbit[idx]);
                if self.slot[img as usize] == NOT_IN_ORBIT {
                    let rep = self.reps[idx].then(&self.gens[gi]);
                    self.push_point(img, rep);
                    frontier.push(self.orbit.len() - 1);
                }
            }
        }
    }
}

/// A base and strong generating set with explicit transversals.
#[derive(Clone, Debug)]
pub struct StabChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabChain {
    pub fn new(degree: usize) -> Self {
        StabChain {
            degree,
            levels: Vec::new(),
        }
    }

    pub fn from_generators(degree: usize, gens: &[Permutation]) -> Self {
        let mut chain = Self::new(degree);
        for g in gens {
            chain.extend(g);
        }
        chain
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn strong_generators(&self) -> &[Permutation] {
        self.levels.first().map_or(&[], |l| l.gens.as_slice())
    }

    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::from(1u32), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    pub fn is_trivial(&self) -> bool {
        self.levels.is_empty()
    }

    /// Sifts `g` starting at level `from`; returns the residue and the level
    /// where sifting stopped (`levels.len()` if it passed every level).
    fn sift_from(&self, g: &Permutation, from: usize) -> (Permutation, usize) {
        let mut h = g.clone();
        for (i, level) in self.levels.iter().enumerate().skip(from) {
            let img = h.image(level.base);
            let s = level.slot[img as usize];
            if s == NOT_IN_ORBIT {
                return (h, i);
            }
            if s != 0 {
                h = h.then(&level.inv_reps[s as usize]);
            }
        }
        (h, self.levels.len())
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        g.degree() == self.degree && self.sift_from(g, 0).0.is_identity()
    }

    /// Adds `g` to the group; returns false when it was already a member.
    pub fn extend(&mut self, g: &Permutation) -> bool {
        debug_assert_eq!(g.degree(), self.degree);
        let (h, j) = self.sift_from(g, 0);
        if h.is_identity() {
            return false;
        }
        self.insert_strong(h, 0, j);
        self.complete(j);
        true
    }

    fn insert_strong(&mut self, h: Permutation, from: usize, to: usize) {
        if to == self.levels.len() {
            let base = h.smallest_moved_point().expect("non-identity residue");
            self.levels.push(Level::new(base, self.degree));
        }
        for level in &mut self.levels[from..=to] {
            level.add_gen(h.clone());
        }
    }

    /// Restores the strong generating property for levels `0..=start`,
    /// assuming the levels below `start` are already complete.
    fn complete(&mut self, start: usize) {
        let mut i = start as isize;
        while i >= 0 {
            let li = i as usize;
            match self.find_bad_schreier(li) {
                Some((h, j)) => {
                    self.insert_strong(h, li + 1, j);
                    i = j as isize;
                }
                None => {
                    let level = &mut self.levels[li];
                    level.checked = (level.orbit.len(), level.gens.len());
                    i -= 1;
                }
            }
        }
    }

    fn find_bad_schreier(&self, li: usize) -> Option<(Permutation, usize)> {
        let level = &self.levels[li];
        let (co, cg) = level.checked;
        for idx in 0..level.orbit.len() {
            let gamma = level.orbit[idx];
            for (gi, s) in level.gens.iter().enumerate() {
                if idx < co && gi < cg {
                    continue;
                }
                let delta = s.image(gamma);
                let target = level.slot[delta as usize] as usize;
                // u_gamma * s * u_delta^-1 fixes the base point; skip trivial ones cheaply
                let sg = level.reps[idx].then(s).then(&level.inv_reps[target]);
                if sg.is_identity() {
                    continue;
                }
                let (h, j) = self.sift_from(&sg, li + 1);
                if !h.is_identity() {
                    return Some((h, j));
                }
            }
        }
        None
    }

    /// Uniform random element: a product of uniformly chosen coset
    /// representatives, one per level.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Permutation {
        let mut g = Permutation::identity(self.degree);
        for level in self.levels.iter().rev() {
            let idx = rng.gen_range(0..level.reps.len());
            g = g.then(&level.reps[idx]);
        }
        g
    }

    /// Visits every element exactly once (as `u_k ... u_1` products).
    pub fn for_each_element<F: FnMut(&Permutation) -> bool>(&self, mut f: F) {
        let k = self.levels.len();
        let mut partial: Vec<Permutation> = vec![Permutation::identity(self.degree); k + 1];
        let mut idx = vec![0usize; k];
        // partial[i] = u^{(k-1)}_{idx} ... u^{(i)}_{idx}, built from the deepest level up
        for i in (0..k).rev() {
            partial[i] = partial[i + 1].then(&self.levels[i].reps[0]);
        }
        loop {
            if !f(&partial[0]) {
                return;
            }
            let mut i = 0;
            loop {
                if i == k {
                    return;
                }
                idx[i] += 1;
                if idx[i] < self.levels[i].reps.len() {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
            for j in (0..=i).rev() {
                partial[j] = partial[j + 1].then(&self.levels[j].reps[idx[j]]);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(n: usize, cycles: &[&[u32]]) -> Permutation {
        Permutation::from_cycles(n, cycles).unwrap()
    }

    #[test]
    fn symmetric_group_orders() {
        for n in 2..=8usize {
            let gens = vec![perm(n, &[&[0, 1]]), perm(n, &[&(0..n as u32).collect::<Vec<_>>()])];
            let chain = StabChain::from_generators(n, &gens);
            let fact: u64 = (1..=n as u64).product();
            assert_eq!(chain.order(), BigUint::from(fact));
        }
    }

    #[test]
    fn trivial_chain() {
        let chain = StabChain::from_generators(4, &[Permutation::identity(4)]);
        assert!(chain.is_trivial());
        assert_eq!(chain.order(), BigUint::from(1u32));
        let mut count = 0;
        chain.for_each_element(|g| {
            assert!(g.is_identity());
            count += 1;
            true
        });
        assert_eq!(count, 1);
    }

    #[test]
    fn enumeration_visits_each_element_once() {
        let gens = vec![perm(5, &[&[0, 1, 2]]), perm(5, &[&[0, 1, 2, 3, 4]])];
        let chain = StabChain::from_generators(5, &gens);
        let mut seen = std::collections::HashSet::new();
        chain.for_each_element(|g| {
            assert!(seen.insert(g.clone()));
            assert!(g.is_even());
            true
        });
        assert_eq!(seen.len(), 60);
    }

    #[test]
    fn membership() {
        let gens = vec![perm(4, &[&[0, 1, 2]]), perm(4, &[&[1, 2, 3]])];
        let chain = StabChain::from_generators(4, &gens);
        assert_eq!(chain.order(), BigUint::from(12u32));
        assert!(chain.contains(&perm(4, &[&[0, 1], &[2, 3]])));
        assert!(!chain.contains(&perm(4, &[&[0, 1]])));
    }
}
