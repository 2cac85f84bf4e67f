//! Taylor complexes, generalized Taylor complexes `F * G`, truncations, the
//! star product and the intersection complex `F ** G`.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::complex::{
    is_minimal, minimize, poset, stratum_homology, verify, ComplexBuilder, Label,
    MultigradedComplex, Slot,
};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::monomial::{lcm_closure, MonomialIdeal, Multidegree};

/// Taylor resolution of `R/I` over the rationals.
pub fn taylor(i: &MonomialIdeal) -> Result<MultigradedComplex> {
    taylor_over(i, Field::Rational)
}

pub fn taylor_over(i: &MonomialIdeal, field: Field) -> Result<MultigradedComplex> {
    if i.is_unit() {
        return Err(Error::UnitIdeal);
    }
    taylor_on_generators_over(i.nvars(), i.gens(), field)
}

/// Taylor complex on an arbitrary list of monomials (not minimalized).
pub fn taylor_on_generators(n: usize, gens: &[Multidegree]) -> Result<MultigradedComplex> {
    taylor_on_generators_over(n, gens, Field::Rational)
}

pub fn taylor_on_generators_over(
    n: usize,
    gens: &[Multidegree],
    field: Field,
) -> Result<MultigradedComplex> {
    if let Some(g) = gens.iter().find(|g| g.nvars() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: g.nvars(),
        });
    }
    if gens.iter().any(Multidegree::is_one) {
        return Err(Error::UnitIdeal);
    }
    let r = gens.len();
    assert!(r < usize::BITS as usize, "too many generators for a Taylor complex");
    let mut b = ComplexBuilder::new(n, field);
    let mut slot_of: HashMap<usize, Slot> = HashMap::new();
    let mut masks: Vec<usize> = (0..1usize << r).collect();
    masks.sort_by_key(|m| m.count_ones());
    for mask in masks {
        let sigma: Vec<usize> = (0..r).filter(|j| mask >> j & 1 == 1).collect();
        let mdeg = sigma
            .iter()
            .fold(Multidegree::zero(n), |acc, &j| acc.lcm(&gens[j]));
        let label = if sigma.is_empty() {
            Label::Unit
        } else {
            Label::Subset(sigma.clone())
        };
        let s = b.add(sigma.len(), mdeg, label);
        slot_of.insert(mask, s);
        for (j, &g) in sigma.iter().enumerate() {
            let face = slot_of[&(mask & !(1 << g))];
            b.entry(face, s, field.sign(j));
        }
    }
    b.build()
}

/// Product basis `f * g` of a generalized Taylor or intersection complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairIndex {
    pairs: Vec<Vec<(Slot, Slot)>>,
    lookup: HashMap<(Slot, Slot), Slot>,
}

impl PairIndex {
    fn from_insertion(inserted: Vec<Vec<(Slot, Slot)>>, perm: &[Vec<usize>]) -> Self {
        let mut pairs: Vec<Vec<(Slot, Slot)>> = inserted
            .iter()
            .map(|d| vec![(Slot::new(0, 0), Slot::new(0, 0)); d.len()])
            .collect();
        let mut lookup = HashMap::new();
        for (h, d) in inserted.into_iter().enumerate() {
            for (old, p) in d.into_iter().enumerate() {
                let new = perm[h][old];
                pairs[h][new] = p;
                lookup.insert(p, Slot::new(h, new));
            }
        }
        PairIndex { pairs, lookup }
    }

    /// Factors `(f, g)` of a product basis element.
    pub fn factors(&self, s: Slot) -> (Slot, Slot) {
        self.pairs[s.hdeg][s.pos]
    }

    pub fn slot(&self, f: Slot, g: Slot) -> Option<Slot> {
        self.lookup.get(&(f, g)).copied()
    }
}

fn check_factor(c: &MultigradedComplex, n: usize, field: Field) -> Result<()> {
    if c.nvars() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: c.nvars(),
        });
    }
    if c.field() != field {
        return Err(Error::FieldMismatch(field.to_string(), c.field().to_string()));
    }
    if !c.is_augmented() {
        return Err(Error::NotAugmented);
    }
    let report = verify(c);
    if !report.is_valid() {
        return Err(Error::Unverified(report.to_string()));
    }
    Ok(())
}

fn check_pair(f: &MultigradedComplex, g: &MultigradedComplex) -> Result<()> {
    check_factor(f, f.nvars(), f.field())?;
    check_factor(g, f.nvars(), f.field())
}

/// Generalized Taylor complex `F * G`.
pub fn gen_taylor(f: &MultigradedComplex, g: &MultigradedComplex) -> Result<MultigradedComplex> {
    gen_taylor_with_index(f, g).map(|(c, _)| c)
}

pub fn gen_taylor_with_index(
    f: &MultigradedComplex,
    g: &MultigradedComplex,
) -> Result<(MultigradedComplex, PairIndex)> {
    check_pair(f, g)?;
    let field = f.field();
    let mut b = ComplexBuilder::new(f.nvars(), field);
    let mut inserted: Vec<Vec<(Slot, Slot)>> = Vec::new();
    let mut at: HashMap<(Slot, Slot), Slot> = HashMap::new();
    let top = f.len() + g.len() - 2;
    for h in 0..=top {
        inserted.push(Vec::new());
        for i in 0..=h.min(f.len() - 1) {
            let j = h - i;
            for (fp, fe) in f.basis(i).iter().enumerate() {
                for (gp, ge) in g.basis(j).iter().enumerate() {
                    let s = b.add(h, fe.mdeg.lcm(&ge.mdeg), Label::star(&fe.label, &ge.label));
                    let key = (Slot::new(i, fp), Slot::new(j, gp));
                    inserted[h].push(key);
                    at.insert(key, s);
                }
            }
        }
    }
    for (&(fs, gs), &s) in &at {
        for (a, alpha) in f.d_frame(fs) {
            b.entry(at[&(Slot::new(fs.hdeg - 1, *a), gs)], s, alpha.clone());
        }
        let sign = field.sign(fs.hdeg);
        for (bb, beta) in g.d_frame(gs) {
            b.entry(at[&(fs, Slot::new(gs.hdeg - 1, *bb))], s, &sign * beta);
        }
    }
    let (c, perm) = b.build_with_map()?;
    Ok((c, PairIndex::from_insertion(inserted, &perm)))
}

/// Left fold of [`gen_taylor`]; labels flatten to `Star([f1, ..., fr])`.
pub fn gen_taylor_fold(factors: &[MultigradedComplex]) -> Result<MultigradedComplex> {
    let (first, rest) = factors
        .split_first()
        .ok_or_else(|| Error::InvalidComplex("empty family".into()))?;
    rest.iter().try_fold(first.clone(), |acc, x| gen_taylor(&acc, x))
}

/// Outcome of a resolution self-check by strata.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolutionCheck {
    pub resolves: bool,
    /// A failing stratum and its homology dimensions.
    pub witness: Option<(Multidegree, Vec<usize>)>,
}

/// Checks that `c` resolves `R/ideal`: every stratum is acyclic in positive
/// degrees and its degree-0 homology detects membership in `ideal`.
///
/// A stratum depends only on which basis elements and generators lie below
/// `m`, so testing the lcm-closure of those multidegrees is exhaustive.
pub fn resolves(c: &MultigradedComplex, ideal: &MonomialIdeal) -> ResolutionCheck {
    let seed = c
        .slots()
        .map(|s| c.mdeg(s).clone())
        .chain(ideal.gens().iter().cloned());
    let mut candidates = lcm_closure(seed);
    candidates.push(Multidegree::zero(c.nvars()));
    candidates.sort();
    candidates.dedup();
    let witness = candidates.par_iter().find_map_first(|m| {
        let h = stratum_homology(c, m);
        let h0 = h.first().copied().unwrap_or(0);
        let ok = h0 == usize::from(!ideal.contains(m)) && h.iter().skip(1).all(|&x| x == 0);
        (!ok).then(|| (m.clone(), h))
    });
    ResolutionCheck {
        resolves: witness.is_none(),
        witness,
    }
}

/// Whether `F * G` resolves `R/(I + J)`, checked stratum by stratum.
pub fn gen_taylor_resolves(
    f: &MultigradedComplex,
    g: &MultigradedComplex,
    i: &MonomialIdeal,
    j: &MonomialIdeal,
) -> Result<ResolutionCheck> {
    let c = gen_taylor(f, g)?;
    Ok(resolves(&c, &i.sum(j)?))
}

/// `C_{>= n}`: modules below `n` and differentials up to `d_n` are zeroed.
pub fn truncate(c: &MultigradedComplex, n: usize) -> MultigradedComplex {
    c.restrict(|e| e.hdeg >= n)
}

fn shifted_pairs(
    f: &MultigradedComplex,
    g: &MultigradedComplex,
    mdeg: impl Fn(&Multidegree, &Multidegree) -> Multidegree,
) -> Result<(MultigradedComplex, PairIndex)> {
    check_pair(f, g)?;
    let field = f.field();
    let n = f.nvars();
    let mut b = ComplexBuilder::new(n, field);
    let unit = b.add(0, Multidegree::zero(n), Label::Unit);
    let mut inserted: Vec<Vec<(Slot, Slot)>> = vec![Vec::new()];
    let mut at: HashMap<(Slot, Slot), Slot> = HashMap::new();
    let top = (f.len() + g.len()).saturating_sub(3);
    for k in 1..=top {
        inserted.push(Vec::new());
        for i in 1..=k.min(f.len() - 1) {
            let j = k + 1 - i;
            for (fp, fe) in f.basis(i).iter().enumerate() {
                for (gp, ge) in g.basis(j).iter().enumerate() {
                    let s = b.add(k, mdeg(&fe.mdeg, &ge.mdeg), Label::star(&fe.label, &ge.label));
                    let key = (Slot::new(i, fp), Slot::new(j, gp));
                    inserted[k].push(key);
                    at.insert(key, s);
                }
            }
        }
    }
    for (&(fs, gs), &s) in &at {
        if s.hdeg == 1 {
            let scale = match (f.d_frame(fs), g.d_frame(gs)) {
                ([(_, a)], [(_, c)]) => a * c,
                _ => field.zero(),
            };
            b.entry(unit, s, scale);
            continue;
        }
        if fs.hdeg > 1 {
            for (a, alpha) in f.d_frame(fs) {
                b.entry(at[&(Slot::new(fs.hdeg - 1, *a), gs)], s, alpha.clone());
            }
        }
        if gs.hdeg > 1 {
            let sign = field.sign(fs.hdeg);
            for (bb, beta) in g.d_frame(gs) {
                b.entry(at[&(fs, Slot::new(gs.hdeg - 1, *bb))], s, &sign * beta);
            }
        }
    }
    let (c, perm) = b.build_with_map()?;
    Ok((c, PairIndex::from_insertion(inserted, &perm)))
}

/// `Star(F, G)`: `F_{>=1} ⊗ G_{>=1}` shifted down by one and augmented by
/// `f1 ⊗ g1 ↦ m_{f1} m_{g1}`.
pub fn star_product_complex(
    f: &MultigradedComplex,
    g: &MultigradedComplex,
) -> Result<MultigradedComplex> {
    shifted_pairs(f, g, Multidegree::mul).map(|(c, _)| c)
}

/// `F ** G`: `F_{>=1} * G_{>=1}` shifted down by one and augmented by
/// `f1 * g1 ↦ m_{f1 * g1}`; resolves `R/(I ∩ J)`.
pub fn double_star(f: &MultigradedComplex, g: &MultigradedComplex) -> Result<MultigradedComplex> {
    double_star_with_index(f, g).map(|(c, _)| c)
}

pub fn double_star_with_index(
    f: &MultigradedComplex,
    g: &MultigradedComplex,
) -> Result<(MultigradedComplex, PairIndex)> {
    shifted_pairs(f, g, Multidegree::lcm)
}

pub fn double_star_fold(factors: &[MultigradedComplex]) -> Result<MultigradedComplex> {
    let (first, rest) = factors
        .split_first()
        .ok_or_else(|| Error::InvalidComplex("empty family".into()))?;
    rest.iter().try_fold(first.clone(), |acc, x| double_star(&acc, x))
}

/// Canonical minimal resolution `minimize(taylor(I))`.
pub fn minimal_resolution(i: &MonomialIdeal, field: Field) -> Result<MultigradedComplex> {
    Ok(minimize(&taylor_over(i, field)?).0)
}

/// Verdict of the quasitransverse test, computed two ways.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasitransverseVerdict {
    pub quasitransverse: bool,
    /// `F1 * ... * Fr` of the minimal resolutions is minimal.
    pub minimal_route: bool,
    /// Every cover of the product poset strictly raises total degree.
    pub poset_route: bool,
    /// A cover `lower ⋖ upper` with equal total lcm-degree.
    pub witness: Option<CoverWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverWitness {
    pub lower: Vec<Label>,
    pub upper: Vec<Label>,
    pub degree: u32,
}

struct PosetFactor<'a> {
    c: &'a MultigradedComplex,
    /// `upper slot -> lower slots`.
    below: HashMap<Slot, Vec<Slot>>,
}

pub fn quasitransverse(ideals: &[MonomialIdeal]) -> Result<QuasitransverseVerdict> {
    quasitransverse_over(ideals, Field::Rational)
}

pub fn quasitransverse_over(ideals: &[MonomialIdeal], field: Field) -> Result<QuasitransverseVerdict> {
    if ideals.is_empty() {
        return Err(Error::HypothesesUnmet("empty family".into()));
    }
    if let Some(i) = ideals.iter().find(|i| i.is_zero() || i.is_unit()) {
        return Err(Error::HypothesesUnmet(format!(
            "ideal {i} must be proper and nonzero"
        )));
    }
    let resolutions: Vec<MultigradedComplex> = ideals
        .iter()
        .map(|i| minimal_resolution(i, field))
        .collect::<Result<_>>()?;
    let minimal_route = is_minimal(&gen_taylor_fold(&resolutions)?);

    let factors: Vec<PosetFactor> = resolutions
        .iter()
        .map(|c| {
            let p = poset(c);
            let mut below: HashMap<Slot, Vec<Slot>> = HashMap::new();
            for &(lo, hi) in &p.covers {
                let (lo, hi) = (c.slot_of(lo).unwrap(), c.slot_of(hi).unwrap());
                below.entry(hi).or_default().push(lo);
            }
            PosetFactor { c, below }
        })
        .collect();
    let witness = product_poset_witness(&factors);
    let poset_route = witness.is_none();
    Ok(QuasitransverseVerdict {
        quasitransverse: minimal_route,
        minimal_route,
        poset_route,
        witness,
    })
}

fn product_poset_witness(factors: &[PosetFactor]) -> Option<CoverWitness> {
    let n = factors[0].c.nvars();
    let mut tuple: Vec<Slot> = Vec::with_capacity(factors.len());
    // odometer over all tuples of slots
    let all: Vec<Vec<Slot>> = factors.iter().map(|f| f.c.slots().collect()).collect();
    let mut idx = vec![0usize; factors.len()];
    loop {
        tuple.clear();
        tuple.extend(idx.iter().zip(&all).map(|(&i, a)| a[i]));
        let lcm = |t: &[Slot]| {
            t.iter()
                .zip(factors)
                .fold(Multidegree::zero(n), |acc, (s, f)| acc.lcm(f.c.mdeg(*s)))
        };
        let upper = lcm(&tuple);
        for k in 0..factors.len() {
            for &lo in factors[k].below.get(&tuple[k]).map_or(&[][..], Vec::as_slice) {
                let mut lower = tuple.clone();
                lower[k] = lo;
                let lower_m = lcm(&lower);
                if lower_m.total_degree() >= upper.total_degree() {
                    let labels = |t: &[Slot]| {
                        t.iter()
                            .zip(factors)
                            .map(|(s, f)| f.c.element(*s).label.clone())
                            .collect()
                    };
                    return Some(CoverWitness {
                        lower: labels(&lower),
                        upper: labels(&tuple),
                        degree: upper.total_degree(),
                    });
                }
            }
        }
        let mut k = 0;
        loop {
            if k == idx.len() {
                return None;
            }
            idx[k] += 1;
            if idx[k] < all[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// The complex `F` viewed inside `F * G` along `f ↦ f * 1`.
pub fn unit_embedding(index: &PairIndex, f: &MultigradedComplex, unit_g: Slot) -> Vec<Vec<Slot>> {
    f.modules()
        .iter()
        .enumerate()
        .map(|(h, b)| {
            (0..b.len())
                .map(|p| index.slot(Slot::new(h, p), unit_g).expect("f * 1 is a basis element"))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{poset, BettiTable};

    fn ideal(n: usize, rows: &[&[u32]]) -> MonomialIdeal {
        MonomialIdeal::from_exponents(n, rows).unwrap()
    }

    fn betti(c: &MultigradedComplex) -> BettiTable {
        minimize(c).1
    }

    #[test]
    fn taylor_ranks_are_binomial() {
        let i = ideal(4, &[&[1, 1, 0, 0], &[0, 1, 1, 0], &[0, 0, 1, 1], &[1, 0, 0, 1]]);
        let t = taylor(&i).unwrap();
        assert_eq!(t.ranks(), vec![1, 4, 6, 4, 1]);
        assert!(verify(&t).is_valid());
        assert!(matches!(taylor(&MonomialIdeal::unit(2)), Err(Error::UnitIdeal)));
    }

    #[test]
    fn taylor_signs() {
        let t = taylor(&ideal(2, &[&[1, 0], &[0, 1]])).unwrap();
        let top = Slot::new(2, 0);
        let e1 = t.find_label(&Label::Subset(vec![0])).unwrap();
        let e2 = t.find_label(&Label::Subset(vec![1])).unwrap();
        assert_eq!(t.coeff(e2, top), Some(&Field::Rational.one()));
        assert_eq!(t.coeff(e1, top), Some(&Field::Rational.from_i64(-1)));
    }

    #[test]
    fn trivial_complex_is_unit_of_star() {
        let f = taylor(&ideal(3, &[&[1, 1, 0], &[0, 1, 1]])).unwrap();
        let r = taylor(&MonomialIdeal::zero(3)).unwrap();
        let p = gen_taylor(&f, &r).unwrap();
        assert_eq!(p.ranks(), f.ranks());
        assert_eq!(betti(&p), betti(&f));
        assert_eq!(p.frames(), f.frames());
    }

    #[test]
    fn coprime_generalized_taylor_is_koszul() {
        let f = taylor(&ideal(2, &[&[1, 0]])).unwrap();
        let g = taylor(&ideal(2, &[&[0, 1]])).unwrap();
        let p = gen_taylor(&f, &g).unwrap();
        let t = taylor(&ideal(2, &[&[1, 0], &[0, 1]])).unwrap();
        assert_eq!(p.ranks(), t.ranks());
        assert_eq!(betti(&p), betti(&t));
        assert!(is_minimal(&p));
    }

    #[test]
    fn poset_of_product_is_product_poset() {
        let f = minimal_resolution(&ideal(3, &[&[1, 1, 0], &[0, 1, 1]]), Field::Rational).unwrap();
        let g = minimal_resolution(&ideal(3, &[&[1, 0, 1], &[0, 0, 2]]), Field::Rational).unwrap();
        let (p, index) = gen_taylor_with_index(&f, &g).unwrap();
        let pp = poset(&p);
        let (pf, pg) = (poset(&f), poset(&g));
        let mut expected = std::collections::BTreeSet::new();
        for s in p.slots() {
            let (fs, gs) = index.factors(s);
            let id = |x: Slot| p.element(x).id;
            for &(lo, hi) in &pf.covers {
                if hi == f.element(fs).id {
                    let lo = f.slot_of(lo).unwrap();
                    expected.insert((id(index.slot(lo, gs).unwrap()), id(s)));
                }
            }
            for &(lo, hi) in &pg.covers {
                if hi == g.element(gs).id {
                    let lo = g.slot_of(lo).unwrap();
                    expected.insert((id(index.slot(fs, lo).unwrap()), id(s)));
                }
            }
        }
        assert_eq!(pp.covers, expected);
    }

    #[test]
    fn resolution_checks() {
        let i = ideal(3, &[&[1, 1, 0]]);
        let j = ideal(3, &[&[0, 1, 1]]);
        let (f, g) = (taylor(&i).unwrap(), taylor(&j).unwrap());
        assert!(gen_taylor_resolves(&f, &g, &i, &j).unwrap().resolves);
        // corrupt G: claim it resolves a different ideal
        let check = resolves(&gen_taylor(&f, &g).unwrap(), &i);
        assert!(!check.resolves);
        assert!(check.witness.is_some());
        let k = ideal(3, &[&[1, 0, 1]]);
        let folded = gen_taylor_fold(&[f.clone(), g.clone(), taylor(&k).unwrap()]).unwrap();
        assert!(resolves(&folded, &i.sum(&j).unwrap().sum(&k).unwrap()).resolves);
    }

    #[test]
    fn truncation() {
        let t = taylor(&ideal(2, &[&[1, 0], &[0, 1]])).unwrap();
        assert_eq!(truncate(&t, 0), t);
        assert!(truncate(&t, 5).is_empty());
        let t1 = truncate(&t, 1);
        assert_eq!(t1.ranks(), vec![0, 2, 1]);
        assert!(t1.frame(1).unwrap().entries().next().is_none());
        assert_eq!(t1.frame(2).unwrap().entries().count(), 2);
    }

    #[test]
    fn star_and_double_star_on_principal_ideals() {
        let f = taylor(&ideal(3, &[&[1, 0, 0]])).unwrap();
        let g = taylor(&ideal(3, &[&[0, 1, 0]])).unwrap();
        let s = star_product_complex(&f, &g).unwrap();
        assert_eq!(s.ranks(), vec![1, 1]);
        assert!(resolves(&s, &ideal(3, &[&[1, 1, 0]])).resolves);
        let f = taylor(&ideal(3, &[&[1, 1, 0]])).unwrap();
        let g = taylor(&ideal(3, &[&[0, 1, 1]])).unwrap();
        let d = double_star(&f, &g).unwrap();
        assert_eq!(d.ranks(), vec![1, 1]);
        assert!(resolves(&d, &ideal(3, &[&[1, 1, 1]])).resolves);
    }

    #[test]
    fn double_star_resolves_intersection() {
        let i = ideal(4, &[&[1, 1, 0, 0], &[0, 1, 1, 0]]);
        let j = ideal(4, &[&[0, 0, 1, 1], &[1, 0, 0, 1]]);
        let (f, g) = (taylor(&i).unwrap(), taylor(&j).unwrap());
        let d = double_star(&f, &g).unwrap();
        assert!(verify(&d).is_valid());
        let cap = i.intersection(&j).unwrap();
        assert!(resolves(&d, &cap).resolves);
        assert_eq!(betti(&d), betti(&taylor(&cap).unwrap()));
        let s = star_product_complex(&f, &g).unwrap();
        assert_eq!(s.ranks(), d.ranks());
    }

    #[test]
    fn quasitransverse_examples() {
        let v = quasitransverse(&[ideal(3, &[&[1, 1, 0]]), ideal(3, &[&[0, 1, 1]])]).unwrap();
        assert!(v.quasitransverse && v.poset_route);
        let v = quasitransverse(&[ideal(2, &[&[1, 0]]), ideal(2, &[&[1, 1]])]).unwrap();
        assert!(!v.quasitransverse && !v.poset_route);
        assert!(v.witness.is_some());
        let v = quasitransverse(&[ideal(2, &[&[1, 0]]), ideal(2, &[&[0, 1]])]).unwrap();
        assert!(v.quasitransverse);
    }
}
