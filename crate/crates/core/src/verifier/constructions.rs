//! Explicit witnesses: alternating groups, conjugators in wreath products
//! and commuting of unipotent elements in a Borel subgroup of `PSL(2,q)`.

use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::witness::{is_prime, pair_witness, SearchMode, WitnessStatus};
use crate::algebra::Matrix;
use crate::atlas::{Family, LinearGroup, WreathProduct};
use crate::error::{Error, Result};
use crate::perm::{Permutation, PermutationGroup};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AltWitness {
    pub x: String,
    pub g: String,
    /// `x g x^-1 g^-1`, a 3-cycle when `p >= 5`.
    pub commutator: String,
    /// `x x^g`, a 5-cycle for a single 3-cycle.
    pub product: String,
    #[serde(with = "crate::json::big_number")]
    pub subgroup_order: BigUint,
    pub solvable: bool,
}

/// A conjugator `g` with `<x, x^g>` non-solvable, for `x` of odd prime order
/// in `A_n`.
pub fn alt_witness(n: usize, x: &Permutation) -> Result<AltWitness> {
    if n < 5 {
        return Err(Error::NotApplicable(format!("A_{n} is solvable")));
    }
    if x.degree() != n {
        return Err(Error::DegreeMismatch { left: n, right: x.degree() });
    }
    let p = x.order();
    if p % 2 == 0 || !is_prime(p) {
        return Err(Error::PreconditionViolated(format!("element order {p} is not an odd prime")));
    }
    let cycles = x.cycles();
    let first = &cycles[0];
    let candidates: Vec<Permutation> = if p >= 5 {
        vec![Permutation::from_cycles(n, &[&first[..3]])?]
    } else {
        // (a d b e c) with x = (a b c)..; d, e fixed points first
        let (a, b, c) = (first[0], first[1], first[2]);
        let support = x.support();
        let mut others: Vec<u32> = (0..n as u32).filter(|i| !support.contains(i)).collect();
        others.extend(support.iter().copied().filter(|i| ![a, b, c].contains(i)));
        let mut v = Vec::new();
        for &d in &others {
            for &e in &others {
                if d != e {
                    v.push(Permutation::from_cycles(n, &[&[a, d, b, e, c]])?);
                }
            }
        }
        v
    };
    for g in candidates {
        let h = PermutationGroup::new(n, vec![x.clone(), x.conjugate_by(&g)])?;
        if !h.is_solvable() {
            return Ok(AltWitness {
                x: x.to_cycle_string(),
                g: g.to_cycle_string(),
                commutator: x.then(&g).then(&x.inverse()).then(&g.inverse()).to_cycle_string(),
                product: x.then(&x.conjugate_by(&g)).to_cycle_string(),
                subgroup_order: h.order(),
                solvable: false,
            });
        }
    }
    // several 3-cycles: search the class of x in A_n
    let an = PermutationGroup::alternating(n)?;
    let r = pair_witness(&an, x, SearchMode::Exhaustive)?;
    match r.witness.first() {
        Some(g) if r.status == WitnessStatus::WitnessFound => {
            let g = Permutation::parse_cycles(g, n)?;
            let xg = x.conjugate_by(&g);
            Ok(AltWitness {
                x: x.to_cycle_string(),
                g: g.to_cycle_string(),
                commutator: x.then(&g).then(&x.inverse()).then(&g.inverse()).to_cycle_string(),
                product: x.then(&xg).to_cycle_string(),
                subgroup_order: r.subgroup_order.unwrap_or_default(),
                solvable: false,
            })
        }
        _ => Err(Error::WitnessNotVerified(format!("no conjugator found for {}", x.to_cycle_string()))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WreathCase {
    /// `t >= 3`, `x = (y,1,..,1) tau` with `tau` a `t`-cycle.
    AT3,
    /// `t = 2`, `x = (y,1) tau`, `y != 1`.
    AT2,
    /// `t = 2`, `x = tau`.
    B,
}

impl WreathCase {
    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a_t3" | "at3" => Some(WreathCase::AT3),
            "a_t2" | "at2" => Some(WreathCase::AT2),
            "b" => Some(WreathCase::B),
            _ => None,
        }
    }
}

/// A base-group element of the generated subgroup, by components.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockElement {
    pub name: String,
    pub components: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WreathConjugatorRecord {
    pub case: WreathCase,
    pub t: usize,
    pub x: String,
    pub l1: String,
    pub l2: Option<String>,
    pub conjugators: Vec<String>,
    pub products: Vec<BlockElement>,
    /// Block whose projection is checked.
    pub block: usize,
    #[serde(with = "crate::json::big_number")]
    pub projection_order: BigUint,
    #[serde(with = "crate::json::big_number")]
    pub inner_order: BigUint,
    #[serde(with = "crate::json::big_number")]
    pub generated_order: BigUint,
    pub solvable: bool,
    /// `x^2 = (y, y)` in case `a_t2`.
    pub square_identity: Option<bool>,
    /// `<x, x^{g_1}>` alone, in case `b` (dihedral).
    pub pair_solvable: Option<bool>,
}

const PAIR_ATTEMPTS: usize = 1_000;

/// `(l1, l2)` generating `L`, by seeded random search.
fn generating_pair(l: &PermutationGroup, rng: &mut ChaCha8Rng) -> Result<(Permutation, Permutation)> {
    let order = l.order();
    for _ in 0..PAIR_ATTEMPTS {
        let a = l.random_element(rng);
        let b = l.random_element(rng);
        if l.subgroup(vec![a.clone(), b.clone()])?.order() == order {
            return Ok((a, b));
        }
    }
    Err(Error::GeneratingPairNotFound {
        attempts: PAIR_ATTEMPTS,
    })
}

/// `l` with `<fixed.., l> = L`, by seeded random search.
fn generating_partner(l: &PermutationGroup, fixed: &[Permutation], rng: &mut ChaCha8Rng) -> Result<Permutation> {
    let order = l.order();
    for _ in 0..PAIR_ATTEMPTS {
        let c = l.random_element(rng);
        let mut gens = fixed.to_vec();
        gens.push(c.clone());
        if l.subgroup(gens)?.order() == order {
            return Ok(c);
        }
    }
    Err(Error::GeneratingPairNotFound {
        attempts: PAIR_ATTEMPTS,
    })
}

fn block_element(w: &WreathProduct, name: &str, e: &Permutation) -> Result<(BlockElement, Vec<Permutation>)> {
    let d = w
        .decode(e)
        .filter(|d| d.top.is_identity())
        .ok_or_else(|| Error::WitnessNotVerified(format!("{name} is not in the base group")))?;
    Ok((
        BlockElement {
            name: name.to_string(),
            components: d.components.iter().map(|c| c.to_cycle_string()).collect(),
        },
        d.components,
    ))
}

fn expect_component(actual: &Permutation, expected: &Permutation, what: &str) -> Result<()> {
    if actual != expected {
        return Err(Error::WitnessNotVerified(format!(
            "{what}: got {}, expected {}",
            actual.to_cycle_string(),
            expected.to_cycle_string()
        )));
    }
    Ok(())
}

/// Builds `x`, the generating elements of `L` and the conjugators for the
/// given case, and checks the advertised block components and that the
/// generated subgroup is not solvable.
pub fn wreath_lemma_check(
    l: &PermutationGroup,
    t: usize,
    y: &Permutation,
    case: WreathCase,
    seed: u64,
) -> Result<WreathConjugatorRecord> {
    if l.is_solvable() {
        return Err(Error::PreconditionViolated("L must be non-abelian simple".into()));
    }
    match case {
        WreathCase::AT3 if t < 3 => return Err(Error::PreconditionViolated("case a_t3 needs t >= 3".into())),
        WreathCase::AT2 | WreathCase::B if t != 2 => {
            return Err(Error::PreconditionViolated("cases a_t2 and b need t = 2".into()))
        }
        WreathCase::AT2 if y.is_identity() => {
            return Err(Error::PreconditionViolated("case a_t2 needs y != 1".into()))
        }
        _ => {}
    }
    if !l.contains(y) {
        return Err(Error::PreconditionViolated("y is not in L".into()));
    }
    let w = WreathProduct::new(l, t)?;
    let id = l.identity();
    let cycle: Vec<u32> = (0..t as u32).collect();
    let tau = Permutation::from_cycles(t, &[&cycle])?;
    let base = |c: Vec<Permutation>| w.base(&c);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut products = Vec::new();
    let mut projection = Vec::new();
    let block;
    let (x, conjugators, l1, l2, square_identity, pair_solvable);
    match case {
        WreathCase::AT3 => {
            let (a, b) = generating_pair(l, &mut rng)?;
            let mut xs = vec![id.clone(); t];
            xs[0] = y.clone();
            x = w.encode(&xs, &tau)?;
            let mut ws = vec![id.clone(); t];
            ws[1] = y.inverse().then(&a).then(y);
            ws[t - 1] = b.inverse();
            let g = base(ws)?;
            let xg = x.conjugate_by(&g);
            let (e, ec) = block_element(&w, "x^g x^-1", &xg.then(&x.inverse()))?;
            let (f, fc) = block_element(&w, "x^-1 x^g", &x.inverse().then(&xg))?;
            expect_component(&ec[0], &a, "first block of x^g x^-1")?;
            expect_component(&fc[0], &b, "first block of x^-1 x^g")?;
            block = 0;
            projection.extend([ec[0].clone(), fc[0].clone()]);
            products.extend([e, f]);
            conjugators = vec![g];
            l1 = a;
            l2 = Some(b);
            square_identity = None;
            pair_solvable = None;
        }
        WreathCase::AT2 => {
            let z = generating_partner(l, std::slice::from_ref(y), &mut rng)?;
            x = w.encode(&[y.clone(), id.clone()], &tau)?;
            square_identity = Some(x.then(&x) == base(vec![y.clone(), y.clone()])?);
            let g = base(vec![id.clone(), z.clone()])?;
            // with k = 1: x^{2k-1} x^g = (y l^-1, y l)
            let (e, ec) = block_element(&w, "x x^g", &x.then(&x.conjugate_by(&g)))?;
            expect_component(&ec[0], &y.then(&z.inverse()), "first block of x x^g")?;
            expect_component(&ec[1], &y.then(&z), "second block of x x^g")?;
            block = 1;
            projection.extend([y.clone(), ec[1].clone()]);
            let (sq, _) = block_element(&w, "x^2", &x.then(&x))?;
            products.extend([sq, e]);
            conjugators = vec![g];
            l1 = z;
            l2 = None;
            pair_solvable = None;
        }
        WreathCase::B => {
            let (a, b) = generating_pair(l, &mut rng)?;
            x = w.encode(&[id.clone(), id.clone()], &tau)?;
            let g1 = base(vec![id.clone(), a.clone()])?;
            let g2 = base(vec![id.clone(), b.clone()])?;
            let (e, ec) = block_element(&w, "x^-1 x^g1", &x.inverse().then(&x.conjugate_by(&g1)))?;
            let (f, fc) = block_element(&w, "x^-1 x^g2", &x.inverse().then(&x.conjugate_by(&g2)))?;
            expect_component(&ec[0], &a.inverse(), "first block of x^-1 x^g1")?;
            expect_component(&ec[1], &a, "second block of x^-1 x^g1")?;
            expect_component(&fc[1], &b, "second block of x^-1 x^g2")?;
            block = 1;
            projection.extend([ec[1].clone(), fc[1].clone()]);
            products.extend([e, f]);
            pair_solvable = Some(w.group().subgroup(vec![x.clone(), x.conjugate_by(&g1)])?.is_solvable());
            conjugators = vec![g1, g2];
            l1 = a;
            l2 = Some(b);
            square_identity = None;
        }
    }
    let proj = l.subgroup(projection)?;
    let mut gens = vec![x.clone()];
    gens.extend(conjugators.iter().map(|g| x.conjugate_by(g)));
    let h = PermutationGroup::new(w.group().degree(), gens)?;
    let solvable = h.is_solvable();
    if solvable {
        return Err(Error::WitnessNotVerified("generated subgroup is solvable".into()));
    }
    Ok(WreathConjugatorRecord {
        case,
        t,
        x: x.to_cycle_string(),
        l1: l1.to_cycle_string(),
        l2: l2.map(|p| p.to_cycle_string()),
        conjugators: conjugators.iter().map(|g| g.to_cycle_string()).collect(),
        products,
        block,
        projection_order: proj.order(),
        inner_order: l.order(),
        generated_order: h.order(),
        solvable,
        square_identity,
        pair_solvable,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BorelReport {
    pub q: u32,
    pub element_order: u64,
    #[serde(with = "crate::json::big_number")]
    pub borel_order: BigUint,
    pub elements: usize,
    pub pairs_checked: u64,
    pub all_commute: bool,
    /// A non-commuting pair, when one exists.
    pub counterexample: Option<(String, String)>,
}

/// Whether all elements of the given order in the upper-triangular Borel
/// subgroup of `PSL(2,q)` commute pairwise (exhaustive).
pub fn borel_commute_check(q: u32, element_order: u64) -> Result<BorelReport> {
    if !is_prime(u64::from(q)) {
        return Err(Error::PreconditionViolated(format!("q = {q} must be prime")));
    }
    let lin = LinearGroup::new(Family::PSL, 2, q)?;
    let f = &lin.field;
    let prim = f.primitive_element();
    let torus = Matrix::diagonal(f, &[prim, f.inv(prim)?])?;
    let unipotent = Matrix::elementary(f, 2, 0, 1, f.one())?;
    let gens = [torus, unipotent]
        .iter()
        .map(|m| lin.perm_of(m).ok_or_else(|| Error::GeneratorValidationFailed("Borel generator".into())))
        .collect::<Result<Vec<_>>>()?;
    let borel = lin.realization().group.subgroup(gens)?;
    let elements: Vec<Permutation> = borel
        .elements(1_000_000)?
        .into_iter()
        .filter(|e| e.order() == element_order)
        .collect();
    let mut pairs = 0;
    let mut counterexample = None;
    'outer: for (i, a) in elements.iter().enumerate() {
        for b in &elements[i + 1..] {
            pairs += 1;
            if !a.commutes_with(b) {
                counterexample = Some((a.to_cycle_string(), b.to_cycle_string()));
                break 'outer;
            }
        }
    }
    Ok(BorelReport {
        q,
        element_order,
        borel_order: borel.order(),
        elements: elements.len(),
        pairs_checked: pairs,
        all_commute: counterexample.is_none(),
        counterexample,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(n: usize, cycles: &[&[u32]]) -> Permutation {
        Permutation::from_cycles(n, cycles).unwrap()
    }

    #[test]
    fn alternating_witnesses() {
        let w = alt_witness(5, &perm(5, &[&[0, 1, 2, 3, 4]])).unwrap();
        assert_eq!(w.g, "(1,2,3)");
        assert_eq!(w.commutator, "(2,5,3)");
        assert!(!w.solvable);
        let w = alt_witness(5, &perm(5, &[&[0, 1, 2]])).unwrap();
        assert_eq!(w.g, "(1,4,2,5,3)");
        assert_eq!(w.product, "(1,2,3,4,5)");
        assert_eq!(w.subgroup_order, BigUint::from(60u32));
        let w = alt_witness(9, &perm(9, &[&[0, 1, 2, 3, 4, 5, 6]])).unwrap();
        assert!(!w.solvable);
        let w = alt_witness(6, &perm(6, &[&[0, 1, 2], &[3, 4, 5]])).unwrap();
        assert!(!w.solvable);
        assert!(matches!(alt_witness(4, &perm(4, &[&[0, 1, 2]])), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn wreath_cases() {
        let a5 = PermutationGroup::alternating(5).unwrap();
        let id = a5.identity();
        let y = perm(5, &[&[0, 1, 2, 3, 4]]);
        let r = wreath_lemma_check(&a5, 3, &id, WreathCase::AT3, 1).unwrap();
        assert_eq!(r.projection_order, BigUint::from(60u32));
        assert!(!r.solvable);
        let r = wreath_lemma_check(&a5, 3, &y, WreathCase::AT3, 2).unwrap();
        assert_eq!(r.products[0].components[0], r.l1);
        let r = wreath_lemma_check(&a5, 2, &y, WreathCase::AT2, 1).unwrap();
        assert_eq!(r.square_identity, Some(true));
        assert_eq!(r.projection_order, BigUint::from(60u32));
        let r = wreath_lemma_check(&a5, 2, &id, WreathCase::B, 1).unwrap();
        assert_eq!(r.pair_solvable, Some(true));
        assert!(!r.solvable);
        assert!(wreath_lemma_check(&a5, 2, &id, WreathCase::AT2, 1).is_err());
        assert!(wreath_lemma_check(&a5, 2, &id, WreathCase::AT3, 1).is_err());
    }

    #[test]
    fn borel() {
        for q in [5, 7] {
            let r = borel_commute_check(q, u64::from(q)).unwrap();
            assert!(r.all_commute);
            assert_eq!(r.elements, q as usize - 1);
            assert_eq!(r.borel_order, BigUint::from(q * (q - 1) / 2));
        }
        let r = borel_commute_check(7, 3).unwrap();
        assert!(!r.all_commute);
        assert!(r.counterexample.is_some());
    }
}
