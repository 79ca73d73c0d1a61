use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, ParseError, Result};

/// A permutation of `{0, .., n-1}` stored as its image array.
///
/// Products compose left to right: `a * b` applies `a` first, then `b`, so
/// conjugation is `x^g = g^-1 * x * g`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    img: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            img: (0..degree as u32).collect(),
        }
    }

    pub fn from_images(img: Vec<u32>) -> Result<Self> {
        let n = img.len();
        let mut seen = vec![false; n];
        for &i in &img {
            let i = i as usize;
            if i >= n || seen[i] {
                return Err(Error::InvalidPermutation(format!("{img:?} is not a bijection")));
            }
            seen[i] = true;
        }
        Ok(Permutation { img })
    }

    /// Builds a permutation from disjoint 0-based cycles.
    pub fn from_cycles(degree: usize, cycles: &[&[u32]]) -> Result<Self> {
        let mut img: Vec<u32> = (0..degree as u32).collect();
        let mut touched = vec![false; degree];
        for cyc in cycles {
            for (k, &a) in cyc.iter().enumerate() {
                let a_us = a as usize;
                if a_us >= degree || touched[a_us] {
                    return Err(Error::InvalidPermutation(format!(
                        "cycle {cyc:?} repeats or exceeds degree {degree}"
                    )));
                }
                touched[a_us] = true;
                img[a_us] = cyc[(k + 1) % cyc.len()];
            }
        }
        Ok(Permutation { img })
    }

    /// Parses 1-based cycle notation such as `(1,2,3)(4,5)`; commas and
    /// whitespace both separate points, and `()` is the identity.
    pub fn parse_cycles(s: &str, degree: usize) -> Result<Self> {
        let bytes = s.as_bytes();
        let mut pos = 0;
        let mut cycles: Vec<Vec<u32>> = Vec::new();
        let err = |pos: usize, expected: &str| -> Error {
            let found = s[pos.min(s.len())..].chars().next().map_or("end of input".to_string(), |c| format!("'{c}'"));
            ParseError {
                position: pos,
                expected: expected.to_string(),
                found,
            }
            .into()
        };
        let skip_ws = |pos: &mut usize| {
            while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
                *pos += 1;
            }
        };
        skip_ws(&mut pos);
        while pos < bytes.len() {
            if bytes[pos] != b'(' {
                return Err(err(pos, "'('"));
            }
            pos += 1;
            let mut cyc = Vec::new();
            loop {
                skip_ws(&mut pos);
                if pos < bytes.len() && bytes[pos] == b')' {
                    pos += 1;
                    break;
                }
                let start = pos;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                if start == pos {
                    return Err(err(pos, "a point number or ')'"));
                }
                let point: usize = s[start..pos].parse().map_err(|_| err(start, "a point number"))?;
                if point == 0 || point > degree {
                    return Err(err(start, &format!("a point in 1..={degree}")));
                }
                cyc.push(point as u32 - 1);
                skip_ws(&mut pos);
                if pos < bytes.len() && bytes[pos] == b',' {
                    pos += 1;
                }
            }
            if !cyc.is_empty() {
                cycles.push(cyc);
            }
            skip_ws(&mut pos);
        }
        let refs: Vec<&[u32]> = cycles.iter().map(|c| c.as_slice()).collect();
        Self::from_cycles(degree, &refs)
    }

    pub fn degree(&self) -> usize {
        self.img.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.img
    }

    #[inline]
    pub fn image(&self, point: u32) -> u32 {
        self.img[point as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.img.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u32; self.img.len()];
        for (i, &x) in self.img.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Permutation { img: inv }
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Permutation) -> Self {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            img: self.img.iter().map(|&x| other.img[x as usize]).collect(),
        }
    }

    pub fn pow(&self, e: i64) -> Self {
        let mut base = if e < 0 { self.inverse() } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::identity(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.then(&base);
            }
            base = base.then(&base);
            e >>= 1;
        }
        acc
    }

    /// `g^-1 * self * g`.
    pub fn conjugate_by(&self, g: &Permutation) -> Self {
        let mut img = vec![0u32; self.img.len()];
        for (i, &x) in self.img.iter().enumerate() {
            img[g.img[i] as usize] = g.img[x as usize];
        }
        Permutation { img }
    }

    /// `[a, b] = a^-1 b^-1 a b`.
    pub fn commutator(a: &Permutation, b: &Permutation) -> Self {
        a.inverse().then(&b.inverse()).then(a).then(b)
    }

    pub fn commutes_with(&self, other: &Permutation) -> bool {
        self.img
            .iter()
            .zip(&other.img)
            .all(|(&a, &b)| other.img[a as usize] == self.img[b as usize])
    }

    /// Nontrivial cycles, each starting at its least point, ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let n = self.img.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.img[start] as usize == start {
                continue;
            }
            let mut cyc = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cyc.push(x as u32);
                x = self.img[x] as usize;
            }
            out.push(cyc);
        }
        out
    }

    /// Sorted lengths of the nontrivial cycles.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        t.sort_unstable();
        t
    }

    pub fn order(&self) -> u64 {
        self.cycles()
            .iter()
            .fold(1u64, |acc, c| num_integer::lcm(acc, c.len() as u64))
    }

    pub fn is_even(&self) -> bool {
        self.cycles().iter().map(|c| c.len() - 1).sum::<usize>() % 2 == 0
    }

    pub fn smallest_moved_point(&self) -> Option<u32> {
        self.img.iter().enumerate().find(|(i, &x)| *i as u32 != x).map(|(i, _)| i as u32)
    }

    pub fn support(&self) -> Vec<u32> {
        self.img
            .iter()
            .enumerate()
            .filter(|(i, &x)| *i as u32 != x)
            .map(|(i, _)| i as u32)
            .collect()
    }

    /// 1-based cycle string, `()` for the identity.
    pub fn to_cycle_string(&self) -> String {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return "()".to_string();
        }
        cycles
            .iter()
            .map(|c| {
                let pts: Vec<String> = c.iter().map(|x| (x + 1).to_string()).collect();
                format!("({})", pts.join(","))
            })
            .collect()
    }

    /// Canonical byte encoding used for hashing class members: one byte per
    /// image when the degree is at most 256, otherwise two little-endian
    /// bytes (four beyond 65536).
    pub fn encode(&self) -> Vec<u8> {
        let n = self.img.len();
        if n <= 256 {
            self.img.iter().map(|&x| x as u8).collect()
        } else if n <= 65536 {
            self.img.iter().flat_map(|&x| (x as u16).to_le_bytes()).collect()
        } else {
            self.img.iter().flat_map(|&x| x.to_le_bytes()).collect()
        }
    }

    /// Extends to a larger degree by fixing the new points.
    pub fn extend_to(&self, degree: usize) -> Self {
        let mut img = self.img.clone();
        img.extend(self.img.len() as u32..degree as u32);
        Permutation { img }
    }

    /// Shifts the permutation to act on `offset..offset+n` inside `degree` points.
    pub fn shifted(&self, offset: usize, degree: usize) -> Self {
        let mut img: Vec<u32> = (0..degree as u32).collect();
        for (i, &x) in self.img.iter().enumerate() {
            img[offset + i] = offset as u32 + x;
        }
        Permutation { img }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_cycle_string())
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_cycle_string())
    }
}

impl Mul for &Permutation {
    type Output = Permutation;

    fn mul(self, rhs: &Permutation) -> Permutation {
        self.then(rhs)
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.img.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let img = Vec::<u32>::deserialize(d)?;
        Permutation::from_images(img).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn alternating_example() {
        // x = (1 2 3), g = (1 4 2 5 3): x^g = (4 5 1), x x^g = (1 2 3 4 5)
        let x = Permutation::parse_cycles("(1,2,3)", 5).unwrap();
        let g = Permutation::parse_cycles("(1 4 2 5 3)", 5).unwrap();
        let xg = x.conjugate_by(&g);
        assert_eq!(xg, Permutation::parse_cycles("(4,5,1)", 5).unwrap());
        assert_eq!((&x * &xg).to_cycle_string(), "(1,2,3,4,5)");
    }

    #[test]
    fn commutator_of_p_cycle_and_three_cycle() {
        // x g x^-1 g^-1 = (2 p 3) for x = (1..p), g = (1 2 3)
        for p in [5usize, 7, 11] {
            let cyc: Vec<u32> = (0..p as u32).collect();
            let x = Permutation::from_cycles(p, &[&cyc]).unwrap();
            let g = Permutation::from_cycles(p, &[&[0, 1, 2]]).unwrap();
            let c = x.then(&g).then(&x.inverse()).then(&g.inverse());
            let expect = Permutation::from_cycles(p, &[&[1, p as u32 - 1, 2]]).unwrap();
            assert_eq!(c, expect);
        }
    }

    #[test]
    fn parse_errors_carry_positions() {
        let e = Permutation::parse_cycles("(1,2", 5).unwrap_err();
        assert!(matches!(e, Error::Parse(ParseError { position: 4, .. })));
        let e = Permutation::parse_cycles("(1,9)", 5).unwrap_err();
        assert!(matches!(e, Error::Parse(ParseError { position: 3, .. })));
        assert!(Permutation::parse_cycles("(1,2)(2,3)", 5).is_err());
        assert!(Permutation::parse_cycles("x", 5).is_err());
        assert!(Permutation::parse_cycles("()", 5).unwrap().is_identity());
        assert!(Permutation::parse_cycles("", 5).unwrap().is_identity());
    }

    #[test]
    fn order_parity_and_type() {
        let p = Permutation::parse_cycles("(1,2,3)(4,5)", 6).unwrap();
        assert_eq!(p.order(), 6);
        assert!(!p.is_even());
        assert_eq!(p.cycle_type(), vec![2, 3]);
        assert_eq!(p.to_cycle_string(), "(1,2,3)(4,5)");
        assert!(Permutation::from_images(vec![0, 0, 1]).is_err());
    }

    #[test]
    fn encoding_widths() {
        assert_eq!(Permutation::identity(10).encode().len(), 10);
        assert_eq!(Permutation::identity(300).encode().len(), 600);
    }

    fn arb_perm(n: usize) -> impl Strategy<Value = Permutation> {
        Just((0..n as u32).collect::<Vec<_>>())
            .prop_shuffle()
            .prop_map(|v| Permutation::from_images(v).unwrap())
    }

    proptest! {
        #[test]
        fn cycle_string_round_trips(p in arb_perm(12)) {
            let s = p.to_cycle_string();
            prop_assert_eq!(Permutation::parse_cycles(&s, 12).unwrap(), p);
        }

        #[test]
        fn group_laws(a in arb_perm(9), b in arb_perm(9), c in arb_perm(9)) {
            prop_assert_eq!(a.then(&b).then(&c), a.then(&b.then(&c)));
            prop_assert!(a.then(&a.inverse()).is_identity());
            prop_assert_eq!(a.conjugate_by(&b), b.inverse().then(&a).then(&b));
            prop_assert_eq!(a.pow(a.order() as i64), Permutation::identity(9));
            prop_assert_eq!(a.commutes_with(&b), a.then(&b) == b.then(&a));
        }
    }
}
