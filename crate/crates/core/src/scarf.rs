//! Standard and generalized Scarf complexes.

use std::collections::{BTreeSet, HashMap};

use crate::complex::{minimize, BasisElement, BettiTable, MultigradedComplex, Slot};
use crate::constructions::{gen_taylor_fold, minimal_resolution, taylor_over};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::monomial::{MonomialIdeal, Multidegree};

fn mdeg_counts(c: &MultigradedComplex) -> HashMap<&Multidegree, usize> {
    let mut counts = HashMap::new();
    for s in c.slots() {
        *counts.entry(c.mdeg(s)).or_insert(0) += 1;
    }
    counts
}

/// Subcomplex of the Taylor complex on the subsets with unique lcm.
pub fn scarf(i: &MonomialIdeal) -> Result<MultigradedComplex> {
    scarf_over(i, Field::Rational)
}

pub fn scarf_over(i: &MonomialIdeal, field: Field) -> Result<MultigradedComplex> {
    let t = taylor_over(i, field)?;
    let counts = mdeg_counts(&t);
    Ok(t.restrict(|e| counts[&e.mdeg] == 1))
}

#[derive(Clone, Debug)]
pub struct ScarfReport {
    pub complex: MultigradedComplex,
    /// Basis elements of `F1 * ... * Fr` whose multidegree occurs once in
    /// the whole complex.
    pub unique_mdeg_count: usize,
    /// Same count with uniqueness required only within each degree.
    pub unique_within_degree_count: usize,
    /// Basis size of the standard Scarf complex of the sum.
    pub standard_scarf_count: usize,
    /// Unique-multidegree elements excluded because their boundary leaves
    /// the previously selected part.
    pub dropped: Vec<BasisElement>,
    /// Multidegrees present here but not in the standard Scarf complex.
    pub extra_mdegs: Vec<Multidegree>,
    /// Standard Scarf multidegrees missing here.
    pub missing_standard_mdegs: Vec<Multidegree>,
}

impl ScarfReport {
    pub fn ranks(&self) -> Vec<usize> {
        self.complex.ranks()
    }

    pub fn contains_standard(&self) -> bool {
        self.missing_standard_mdegs.is_empty()
    }
}

fn check_disjoint(ideals: &[MonomialIdeal]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for i in ideals {
        for g in i.gens() {
            if !seen.insert(g) {
                return Err(Error::SharedGenerator { generator: g.clone() });
            }
        }
    }
    Ok(())
}

fn sum_all(ideals: &[MonomialIdeal]) -> Result<MonomialIdeal> {
    let (first, rest) = ideals
        .split_first()
        .ok_or_else(|| Error::HypothesesUnmet("empty family".into()))?;
    rest.iter().try_fold(first.clone(), |acc, i| acc.sum(i))
}

pub fn gen_scarf(ideals: &[MonomialIdeal]) -> Result<ScarfReport> {
    gen_scarf_over(ideals, Field::Rational)
}

pub fn gen_scarf_over(ideals: &[MonomialIdeal], field: Field) -> Result<ScarfReport> {
    check_disjoint(ideals)?;
    let total = sum_all(ideals)?;
    let resolutions: Vec<MultigradedComplex> = ideals
        .iter()
        .map(|i| minimal_resolution(i, field))
        .collect::<Result<_>>()?;
    let f = gen_taylor_fold(&resolutions)?;
    let counts = mdeg_counts(&f);
    let unique = |s: Slot| counts[f.mdeg(s)] == 1;
    let unique_mdeg_count = f.slots().filter(|&s| unique(s)).count();
    let unique_within_degree_count = (0..f.len())
        .map(|h| {
            let mut per: HashMap<&Multidegree, usize> = HashMap::new();
            for e in f.basis(h) {
                *per.entry(&e.mdeg).or_insert(0) += 1;
            }
            per.values().filter(|&&v| v == 1).count()
        })
        .sum();

    let mut selected: Vec<Vec<bool>> = f.modules().iter().map(|b| vec![false; b.len()]).collect();
    let mut dropped = Vec::new();
    for h in 0..f.len() {
        for p in 0..f.rank(h) {
            let s = Slot::new(h, p);
            let keep = h <= 1
                || (unique(s) && f.d_frame(s).iter().all(|(r, _)| selected[h - 1][*r]));
            selected[h][p] = keep;
            if !keep && unique(s) {
                dropped.push(f.element(s).clone());
            }
        }
    }
    let complex = f.restrict(|e| selected[e.hdeg][f.slot_of(e.id).unwrap().pos]);

    let standard = scarf_over(&total, field)?;
    let std_mdegs: BTreeSet<&Multidegree> = standard.slots().map(|s| standard.mdeg(s)).collect();
    let ours: BTreeSet<&Multidegree> = complex.slots().map(|s| complex.mdeg(s)).collect();
    Ok(ScarfReport {
        unique_mdeg_count,
        unique_within_degree_count,
        standard_scarf_count: standard.total_rank(),
        dropped,
        extra_mdegs: ours.difference(&std_mdegs).map(|m| (*m).clone()).collect(),
        missing_standard_mdegs: std_mdegs.difference(&ours).map(|m| (*m).clone()).collect(),
        complex,
    })
}

/// Whether the generalized Scarf complex has the Betti table of the sum.
pub fn is_quasiscarf(ideals: &[MonomialIdeal]) -> Result<bool> {
    is_quasiscarf_over(ideals, Field::Rational)
}

pub fn is_quasiscarf_over(ideals: &[MonomialIdeal], field: Field) -> Result<bool> {
    let report = gen_scarf_over(ideals, field)?;
    let total = sum_all(ideals)?;
    let expected = minimize(&taylor_over(&total, field)?).1;
    Ok(BettiTable::from_complex(&report.complex) == expected)
}
