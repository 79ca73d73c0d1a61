//! `L wr S_t` in its imprimitive action on `t` blocks of `d` points.
//!
//! Point `(b, i)` (block `b`, point `i` of `L`'s action) has index `b*d + i`.
//! `encode((s_0, .., s_{t-1}), tau)` sends `(b, i)` to `(tau(b), s_b(i))`, so
//! with left-to-right products `encode(s, tau) = base(s) * top(tau)`.

use crate::error::{Error, Result};
use crate::perm::{Permutation, PermutationGroup, MAX_DEGREE};

#[derive(Debug, Clone)]
pub struct WreathProduct {
    inner: PermutationGroup,
    t: usize,
    group: PermutationGroup,
}

/// Block components and top permutation of a wreath element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WreathElement {
    pub components: Vec<Permutation>,
    pub top: Permutation,
}

impl WreathProduct {
    pub fn new(inner: &PermutationGroup, t: usize) -> Result<Self> {
        if !(2..=4).contains(&t) {
            return Err(Error::UnsupportedSpec(format!("wreath top degree {t} not in 2..=4")));
        }
        let d = inner.degree();
        if t * d > MAX_DEGREE {
            return Err(Error::ActionTooLarge {
                points: (t * d) as u64,
                cap: MAX_DEGREE as u64,
            });
        }
        let mut w = WreathProduct {
            inner: inner.clone(),
            t,
            group: PermutationGroup::trivial(t * d),
        };
        let id = Permutation::identity(d);
        let mut gens = Vec::new();
        for g in inner.generators() {
            let mut comps = vec![id.clone(); t];
            comps[0] = g.clone();
            gens.push(w.encode(&comps, &Permutation::identity(t))?);
        }
        let swap = Permutation::from_cycles(t, &[&[0, 1]])?;
        gens.push(w.encode(&vec![id.clone(); t], &swap)?);
        if t > 2 {
            let cycle: Vec<u32> = (0..t as u32).collect();
            gens.push(w.encode(&vec![id; t], &Permutation::from_cycles(t, &[&cycle])?)?);
        }
        w.group = PermutationGroup::new(t * d, gens)?;
        Ok(w)
    }

    pub fn group(&self) -> &PermutationGroup {
        &self.group
    }

    pub fn inner(&self) -> &PermutationGroup {
        &self.inner
    }

    pub fn top_degree(&self) -> usize {
        self.t
    }

    pub fn block_size(&self) -> usize {
        self.inner.degree()
    }

    pub fn encode(&self, components: &[Permutation], top: &Permutation) -> Result<Permutation> {
        let (t, d) = (self.t, self.inner.degree());
        if components.len() != t || top.degree() != t {
            return Err(Error::DimensionMismatch(format!(
                "wreath element needs {t} components and a top permutation of degree {t}"
            )));
        }
        let mut img = vec![0u32; t * d];
        for (b, s) in components.iter().enumerate() {
            if s.degree() != d {
                return Err(Error::DegreeMismatch { left: d, right: s.degree() });
            }
            let tb = top.image(b as u32) as usize;
            for i in 0..d {
                img[b * d + i] = (tb * d) as u32 + s.image(i as u32);
            }
        }
        Permutation::from_images(img)
    }

    pub fn encode_element(&self, x: &WreathElement) -> Result<Permutation> {
        self.encode(&x.components, &x.top)
    }

    /// Inverse of `encode`; `None` if `g` does not preserve the blocks.
    pub fn decode(&self, g: &Permutation) -> Option<WreathElement> {
        let (t, d) = (self.t, self.inner.degree());
        if g.degree() != t * d {
            return None;
        }
        let mut top = Vec::with_capacity(t);
        let mut components = Vec::with_capacity(t);
        for b in 0..t {
            let tb = g.image((b * d) as u32) as usize / d;
            let mut comp = Vec::with_capacity(d);
            for i in 0..d {
                let y = g.image((b * d + i) as u32) as usize;
                if y / d != tb {
                    return None;
                }
                comp.push((y % d) as u32);
            }
            top.push(tb as u32);
            components.push(Permutation::from_images(comp).ok()?);
        }
        Some(WreathElement {
            components,
            top: Permutation::from_images(top).ok()?,
        })
    }

    /// The base-group element with the given components.
    pub fn base(&self, components: &[Permutation]) -> Result<Permutation> {
        self.encode(components, &Permutation::identity(self.t))
    }

    /// Projection of a base-group element onto block `b`.
    pub fn component(&self, g: &Permutation, b: usize) -> Option<Permutation> {
        self.decode(g).map(|w| w.components[b].clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn a5_wr_2() {
        let a5 = PermutationGroup::alternating(5).unwrap();
        let w = WreathProduct::new(&a5, 2).unwrap();
        assert_eq!(w.group().order(), BigUint::from(7200u32));
        let id = Permutation::identity(5);
        let tau = Permutation::from_cycles(2, &[&[0, 1]]).unwrap();
        let x = w.encode(&[id.clone(), id.clone()], &tau).unwrap();
        assert_eq!(x.order(), 2);
        let y = Permutation::from_cycles(5, &[&[0, 1, 2, 3, 4]]).unwrap();
        let x = w.encode(&[y.clone(), id], &tau).unwrap();
        assert_eq!(x.then(&x), w.base(&[y.clone(), y]).unwrap());
    }

    #[test]
    fn encode_decode_and_homomorphism() {
        let a5 = PermutationGroup::alternating(5).unwrap();
        let w = WreathProduct::new(&a5, 3).unwrap();
        assert_eq!(w.group().order(), BigUint::from(60u64.pow(3) * 6));
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let g = w.group().random_element(&mut rng);
            let h = w.group().random_element(&mut rng);
            let dg = w.decode(&g).unwrap();
            assert_eq!(w.encode_element(&dg).unwrap(), g);
            let dh = w.decode(&h).unwrap();
            // (s, tau)(s', tau') = (s_b s'_{tau(b)}, tau tau')
            let comps: Vec<Permutation> = (0..3)
                .map(|b| dg.components[b].then(&dh.components[dg.top.image(b as u32) as usize]))
                .collect();
            let prod = w.encode(&comps, &dg.top.then(&dh.top)).unwrap();
            assert_eq!(prod, g.then(&h));
        }
        let not_blocky = Permutation::from_cycles(15, &[&[0, 5, 1]]).unwrap();
        assert!(w.decode(&not_blocky).is_none());
    }
}
