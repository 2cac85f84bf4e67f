//! Koszul complex on the variables tensored with `R/I`, computed one
//! multidegree at a time.
//!
//! In multidegree `m` the complex `(K ⊗ R/I)_m` has basis `u e_σ` with
//! `σ ⊆ supp(m)`, `u = m - 1_σ`, `u ∉ I`; it is a complex of vector spaces.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rayon::prelude::*;

use crate::constructions::quasitransverse_over;
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::linalg::{kernel, Echelon, Matrix};
use crate::monomial::{MonomialIdeal, Multidegree};

fn indicator(n: usize, sigma: &[usize]) -> Multidegree {
    let mut e = vec![0; n];
    for &j in sigma {
        e[j] = 1;
    }
    Multidegree::new(e)
}

fn shuffle_sign(a: &[usize], b: &[usize]) -> usize {
    a.iter().map(|x| b.iter().filter(|y| *y < x).count()).sum()
}

fn union(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut u: Vec<usize> = a.iter().chain(b).copied().collect();
    u.sort_unstable();
    u
}

/// `Σ c · u · e_σ` in `K ⊗ R/I`; terms with `u ∈ I` are dropped on entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KoszulElement {
    ring: MonomialIdeal,
    terms: BTreeMap<(Vec<usize>, Multidegree), Scalar>,
}

impl KoszulElement {
    pub fn zero(ring: &MonomialIdeal) -> Self {
        KoszulElement {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    /// `c · u · e_σ` with `σ` a list of 0-based variable indices.
    pub fn monomial(ring: &MonomialIdeal, coeff: Scalar, u: Multidegree, sigma: &[usize]) -> Self {
        let mut z = KoszulElement::zero(ring);
        let mut s = sigma.to_vec();
        s.sort_unstable();
        let dup = s.windows(2).any(|w| w[0] == w[1]);
        let sign = coeff.field().sign(shuffle_sign_of(sigma));
        if !dup {
            z.add_term(s, u, &sign * &coeff);
        }
        z
    }

    pub fn from_terms(ring: &MonomialIdeal, terms: impl IntoIterator<Item = (Scalar, Multidegree, Vec<usize>)>) -> Self {
        let mut z = KoszulElement::zero(ring);
        for (c, u, s) in terms {
            z = z.add(&KoszulElement::monomial(ring, c, u, &s));
        }
        z
    }

    /// Field of the coefficients; the rationals for the zero element.
    pub fn field(&self) -> Field {
        self.terms.values().next().map_or(Field::Rational, Scalar::field)
    }

    fn add_term(&mut self, sigma: Vec<usize>, u: Multidegree, c: Scalar) {
        if c.is_zero() || self.ring.contains(&u) {
            return;
        }
        let key = (sigma, u);
        match self.terms.get_mut(&key) {
            Some(v) => {
                *v += &c;
                if v.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn ring(&self) -> &MonomialIdeal {
        &self.ring
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    /// `(coefficient, monomial u, σ)` in a fixed order.
    pub fn terms(&self) -> impl Iterator<Item = (&Scalar, &Multidegree, &[usize])> {
        self.terms.iter().map(|((s, u), c)| (c, u, s.as_slice()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Common `|σ|` of the terms; `None` for zero or mixed degrees.
    pub fn hdeg(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|(s, _)| s.len());
        let first = it.next()?;
        it.all(|h| h == first).then_some(first)
    }

    /// Common multidegree `u + 1_σ`; `None` for zero or inhomogeneous.
    pub fn mdeg(&self) -> Option<Multidegree> {
        let n = self.nvars();
        let mut it = self.terms.keys().map(|(s, u)| u.mul(&indicator(n, s)));
        let first = it.next()?;
        it.all(|m| m == first).then_some(first)
    }

    pub fn add(&self, other: &KoszulElement) -> KoszulElement {
        let mut z = self.clone();
        for ((s, u), c) in &other.terms {
            z.add_term(s.clone(), u.clone(), c.clone());
        }
        z
    }

    pub fn scale(&self, c: &Scalar) -> KoszulElement {
        let mut z = KoszulElement::zero(&self.ring);
        for ((s, u), v) in &self.terms {
            z.add_term(s.clone(), u.clone(), c * v);
        }
        z
    }

    /// Same terms read in `K ⊗ R/ring`.
    pub fn in_ring(&self, ring: &MonomialIdeal) -> KoszulElement {
        let mut z = KoszulElement::zero(ring);
        for ((s, u), c) in &self.terms {
            z.add_term(s.clone(), u.clone(), c.clone());
        }
        z
    }

    /// Koszul differential `e_σ ↦ Σ_j (-1)^j x_{σ_j} e_{σ∖σ_j}` (0-based j).
    pub fn d(&self) -> KoszulElement {
        let n = self.nvars();
        let mut z = KoszulElement::zero(&self.ring);
        for ((s, u), c) in &self.terms {
            for (j, &v) in s.iter().enumerate() {
                let mut face = s.clone();
                face.remove(j);
                let sign = c.field().sign(j);
                z.add_term(face, u.mul(&Multidegree::var(n, v)), &sign * c);
            }
        }
        z
    }

    /// Exterior product, read in `K ⊗ R/ring`.
    pub fn wedge(&self, other: &KoszulElement, ring: &MonomialIdeal) -> KoszulElement {
        self.pairwise(other, ring, |a, b| a.mul(b))
    }

    /// `Σ_{σ∩τ=∅} lcm(r_σ, r_τ) e_σ ∧ e_τ`, the termwise-lcm product.
    pub fn lcm_wedge(&self, other: &KoszulElement, ring: &MonomialIdeal) -> KoszulElement {
        self.pairwise(other, ring, |a, b| a.lcm(b))
    }

    /// `(z ∧ z') / gcd(m_z, m_z')`; `None` if some term is not divisible or
    /// either factor is not homogeneous.
    pub fn gcd_wedge(&self, other: &KoszulElement, ring: &MonomialIdeal) -> Option<KoszulElement> {
        let g = self.mdeg()?.gcd(&other.mdeg()?);
        let exact = self.pairwise(other, &MonomialIdeal::zero(self.nvars()), |a, b| a.mul(b));
        let mut z = KoszulElement::zero(ring);
        for ((s, u), c) in &exact.terms {
            z.add_term(s.clone(), u.checked_div(&g)?, c.clone());
        }
        Some(z)
    }

    fn pairwise(
        &self,
        other: &KoszulElement,
        ring: &MonomialIdeal,
        coeff: impl Fn(&Multidegree, &Multidegree) -> Multidegree,
    ) -> KoszulElement {
        let mut z = KoszulElement::zero(ring);
        for ((s, u), c) in &self.terms {
            for ((t, w), e) in &other.terms {
                if s.iter().any(|x| t.contains(x)) {
                    continue;
                }
                let sign = c.field().sign(shuffle_sign(s, t));
                z.add_term(union(s, t), coeff(u, w), &(&sign * c) * e);
            }
        }
        z
    }
}

fn shuffle_sign_of(sigma: &[usize]) -> usize {
    (0..sigma.len())
        .map(|i| (i + 1..sigma.len()).filter(|&j| sigma[j] < sigma[i]).count())
        .sum()
}

impl fmt::Display for KoszulElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, ((s, u), c)) in self.terms.iter().enumerate() {
            let neg = c.signum() < 0;
            let mag = if neg { -c } else { c.clone() };
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut parts = Vec::new();
            if !mag.is_one() {
                parts.push(mag.to_string());
            }
            if !u.is_one() {
                parts.push(u.to_string());
            }
            if !s.is_empty() {
                let idx: Vec<String> = s.iter().map(|j| (j + 1).to_string()).collect();
                parts.push(format!("e{{{}}}", idx.join(",")));
            }
            if parts.is_empty() {
                parts.push("1".into());
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

/// `(K ⊗ R/I)_m` as a complex of vector spaces.
#[derive(Clone, Debug)]
pub struct Stratum {
    ring: MonomialIdeal,
    field: Field,
    mdeg: Multidegree,
    basis: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
    /// `d[i]`: rows index `basis[i-1]`, columns `basis[i]`; `d[0]` is empty.
    d: Vec<Matrix>,
}

fn subsets_of_size(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    fn go(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            go(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(items, k, 0, &mut Vec::new(), &mut out);
    out
}

impl Stratum {
    pub fn new(ring: &MonomialIdeal, m: &Multidegree, field: Field) -> Self {
        let n = ring.nvars();
        let supp = m.support();
        let mut basis = Vec::new();
        for k in 0..=supp.len() {
            basis.push(
                subsets_of_size(&supp, k)
                    .into_iter()
                    .filter(|s| {
                        let u = m.checked_div(&indicator(n, s)).expect("σ lies in the support");
                        !ring.contains(&u)
                    })
                    .collect::<Vec<_>>(),
            );
        }
        let index: Vec<HashMap<Vec<usize>, usize>> = basis
            .iter()
            .map(|b| b.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
            .collect();
        let mut d = vec![Vec::new()];
        for i in 1..basis.len() {
            let mut mat = vec![vec![field.zero(); basis[i].len()]; basis[i - 1].len()];
            for (col, s) in basis[i].iter().enumerate() {
                for j in 0..s.len() {
                    let mut face = s.clone();
                    face.remove(j);
                    if let Some(&row) = index[i - 1].get(&face) {
                        mat[row][col] = field.sign(j);
                    }
                }
            }
            d.push(mat);
        }
        Stratum {
            ring: ring.clone(),
            field,
            mdeg: m.clone(),
            basis,
            index,
            d,
        }
    }

    pub fn mdeg(&self) -> &Multidegree {
        &self.mdeg
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn rank(&self, i: usize) -> usize {
        self.basis.get(i).map_or(0, Vec::len)
    }

    pub fn basis(&self, i: usize) -> &[Vec<usize>] {
        self.basis.get(i).map_or(&[], Vec::as_slice)
    }

    /// Coordinates of a homogeneous element of this multidegree in degree `i`.
    pub fn vector(&self, i: usize, z: &KoszulElement) -> Option<Vec<Scalar>> {
        let mut v = vec![self.field.zero(); self.rank(i)];
        for (c, u, s) in z.terms() {
            if s.len() != i || u.mul(&indicator(self.ring.nvars(), s)) != self.mdeg {
                return None;
            }
            let pos = *self.index.get(i)?.get(s)?;
            v[pos] = &v[pos] + c;
        }
        Some(v)
    }

    pub fn element(&self, i: usize, v: &[Scalar]) -> KoszulElement {
        let n = self.ring.nvars();
        let mut z = KoszulElement::zero(&self.ring);
        for (s, c) in self.basis(i).iter().zip(v) {
            let u = self.mdeg.checked_div(&indicator(n, s)).unwrap();
            z.add_term(s.clone(), u, c.clone());
        }
        z
    }

    fn apply_d(&self, i: usize, v: &[Scalar]) -> Vec<Scalar> {
        if i == 0 {
            return Vec::new();
        }
        self.d[i]
            .iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .fold(self.field.zero(), |acc, (a, b)| if a.is_zero() || b.is_zero() { acc } else { &acc + &(a * b) })
            })
            .collect()
    }

    pub fn is_cycle(&self, i: usize, v: &[Scalar]) -> bool {
        self.apply_d(i, v).iter().all(Scalar::is_zero)
    }

    fn is_cycle_all(&self, i: usize, vs: &[Vec<Scalar>]) -> bool {
        vs.iter().all(|v| self.is_cycle(i, v))
    }

    /// Echelon basis of the image of `d_{i+1}`.
    pub fn boundaries(&self, i: usize) -> Echelon {
        let mut e = Echelon::new(self.field, self.rank(i));
        if i + 1 < self.len() {
            for col in 0..self.rank(i + 1) {
                let v: Vec<Scalar> = self.d[i + 1].iter().map(|row| row[col].clone()).collect();
                e.insert(&v);
            }
        }
        e
    }

    pub fn is_boundary(&self, i: usize, v: &[Scalar]) -> bool {
        self.boundaries(i).contains(v)
    }

    /// Cycles supported on the columns allowed by `keep`.
    fn cycles_on(&self, i: usize, keep: &dyn Fn(&[usize]) -> bool) -> Vec<Vec<Scalar>> {
        let cols: Vec<usize> = (0..self.rank(i)).filter(|&c| keep(&self.basis[i][c])).collect();
        let sub: Matrix = if i == 0 {
            Vec::new()
        } else {
            self.d[i]
                .iter()
                .map(|row| cols.iter().map(|&c| row[c].clone()).collect())
                .collect()
        };
        kernel(self.field, &sub, cols.len())
            .into_iter()
            .map(|k| {
                let mut v = vec![self.field.zero(); self.rank(i)];
                for (x, &c) in k.into_iter().zip(&cols) {
                    v[c] = x;
                }
                v
            })
            .collect()
    }

    pub fn homology_dim(&self, i: usize) -> usize {
        let z = self.cycles_on(i, &|_| true).len();
        z - self.boundaries(i).rank()
    }

    /// Cycles whose classes form a basis of `H_i`, chosen greedily from the
    /// kernel basis of the allowed columns; `None` if they do not span.
    pub fn homology_basis_on(&self, i: usize, keep: &dyn Fn(&[usize]) -> bool) -> Option<Vec<Vec<Scalar>>> {
        let dim = self.homology_dim(i);
        let mut span = self.boundaries(i);
        let mut out = Vec::new();
        for z in self.cycles_on(i, keep) {
            if out.len() == dim {
                break;
            }
            if span.insert(&z) {
                out.push(z);
            }
        }
        (out.len() == dim).then_some(out)
    }

    pub fn homology_basis(&self, i: usize) -> Vec<Vec<Scalar>> {
        self.homology_basis_on(i, &|_| true).expect("unrestricted cycles span")
    }

    /// Single-term cycles `u e_σ` with `u x_{σ_j} ∈ I` for every `j`.
    pub fn expected(&self, i: usize) -> Vec<Vec<Scalar>> {
        (0..self.rank(i))
            .filter(|&c| i == 0 || self.d[i].iter().all(|row| row[c].is_zero()))
            .map(|c| {
                let mut v = vec![self.field.zero(); self.rank(i)];
                v[c] = self.field.one();
                v
            })
            .collect()
    }

    /// Rank of the classes of `vs` in `H_i`.
    pub fn class_rank(&self, i: usize, vs: &[Vec<Scalar>]) -> usize {
        let mut span = self.boundaries(i);
        let base = span.rank();
        for v in vs {
            span.insert(v);
        }
        span.rank() - base
    }
}

/// Homology representatives per `(hdeg, multidegree)`.
#[derive(Clone, Debug)]
pub struct CycleBasis {
    ring: MonomialIdeal,
    field: Field,
    strata: BTreeMap<(usize, Multidegree), Vec<KoszulElement>>,
}

impl CycleBasis {
    pub fn ring(&self) -> &MonomialIdeal {
        &self.ring
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self, i: usize, m: &Multidegree) -> usize {
        self.strata.get(&(i, m.clone())).map_or(0, Vec::len)
    }

    pub fn reps(&self, i: usize, m: &Multidegree) -> &[KoszulElement] {
        self.strata.get(&(i, m.clone())).map_or(&[], Vec::as_slice)
    }

    /// Nonzero strata in order.
    pub fn strata(&self) -> impl Iterator<Item = (&(usize, Multidegree), &Vec<KoszulElement>)> {
        self.strata.iter()
    }

    pub fn betti(&self) -> crate::complex::BettiTable {
        crate::complex::BettiTable::from_entries(self.strata.iter().map(|(k, v)| (k.clone(), v.len())))
    }

    pub fn totals(&self) -> Vec<usize> {
        self.betti().totals()
    }
}

pub fn koszul_homology(i: &MonomialIdeal) -> Result<CycleBasis> {
    koszul_homology_over(i, Field::Rational)
}

/// Homology at every element of the lcm lattice, where all of `Tor(R/I, k)`
/// lives since the Taylor complex surjects onto it.
pub fn koszul_homology_over(i: &MonomialIdeal, field: Field) -> Result<CycleBasis> {
    if i.is_unit() {
        return Err(Error::UnitIdeal);
    }
    let found: Vec<Vec<((usize, Multidegree), Vec<KoszulElement>)>> = i
        .lcm_lattice()
        .par_iter()
        .map(|m| {
            let s = Stratum::new(i, m, field);
            (0..s.len())
                .filter_map(|h| {
                    let reps: Vec<KoszulElement> =
                        s.homology_basis(h).iter().map(|v| s.element(h, v)).collect();
                    (!reps.is_empty()).then(|| ((h, m.clone()), reps))
                })
                .collect()
        })
        .collect();
    Ok(CycleBasis {
        ring: i.clone(),
        field,
        strata: found.into_iter().flatten().collect(),
    })
}

#[derive(Clone, Debug)]
pub struct ExpectedFormReport {
    pub holds: bool,
    /// Stored representatives whose class is outside the expected span.
    pub witnesses: Vec<(usize, Multidegree, KoszulElement)>,
}

/// Whether `H(R/I)` is spanned by the classes of `ū e_σ` with
/// `u ∈ I : (x_{σ_1}, ..., x_{σ_l})`, `u ∉ I`.
pub fn expected_form(i: &MonomialIdeal) -> Result<ExpectedFormReport> {
    expected_form_over(i, Field::Rational)
}

pub fn expected_form_over(i: &MonomialIdeal, field: Field) -> Result<ExpectedFormReport> {
    let h = koszul_homology_over(i, field)?;
    let mut witnesses = Vec::new();
    for ((deg, m), reps) in h.strata() {
        let s = Stratum::new(i, m, h.field);
        let mut span = s.boundaries(*deg);
        for v in s.expected(*deg) {
            span.insert(&v);
        }
        for z in reps {
            let v = s.vector(*deg, z).expect("representative lies in its stratum");
            if !span.contains(&v) {
                witnesses.push((*deg, m.clone(), z.clone()));
            }
        }
    }
    Ok(ExpectedFormReport {
        holds: witnesses.is_empty(),
        witnesses,
    })
}

/// Whether the homogeneous cycle `z` of `K ⊗ R/I` has its class in the span
/// of the expected generators; `None` if `z` is not a homogeneous cycle.
pub fn in_expected_span(z: &KoszulElement) -> Option<bool> {
    let (deg, m) = (z.hdeg()?, z.mdeg()?);
    let s = Stratum::new(z.ring(), &m, z.field());
    let v = s.vector(deg, z)?;
    if !s.is_cycle(deg, &v) {
        return None;
    }
    let mut span = s.boundaries(deg);
    for e in s.expected(deg) {
        span.insert(&e);
    }
    Some(span.contains(&v))
}

/// Whether `z` is a homogeneous cycle of `K ⊗ R/ring`; zero counts.
pub fn is_cycle(z: &KoszulElement) -> bool {
    z.d().is_zero()
}

/// Whether a homogeneous cycle is a boundary.
pub fn is_boundary(z: &KoszulElement, field: Field) -> bool {
    let (Some(deg), Some(m)) = (z.hdeg(), z.mdeg()) else {
        return z.is_zero();
    };
    let s = Stratum::new(z.ring(), &m, field);
    s.vector(deg, z).is_some_and(|v| s.is_boundary(deg, &v))
}

fn check_squarefree_quasitransverse(i: &MonomialIdeal, j: &MonomialIdeal, field: Field) -> Result<()> {
    if !i.is_squarefree() || !j.is_squarefree() {
        return Err(Error::HypothesesUnmet("ideals must be squarefree".into()));
    }
    if !quasitransverse_over(&[i.clone(), j.clone()], field)?.quasitransverse {
        return Err(Error::HypothesesUnmet("ideals are not quasitransverse".into()));
    }
    Ok(())
}

/// Representatives of a basis of `H_d(R/I)_m` supported on `σ` disjoint
/// from `avoid`, so that products with a partner supported on
/// `supp(m')∖supp(m)` need no rescaling beyond the gcd.
pub fn adapted_reps(ring: &MonomialIdeal, field: Field, d: usize, m: &Multidegree, avoid: &[usize]) -> Option<Vec<KoszulElement>> {
    let s = Stratum::new(ring, m, field);
    let basis = s.homology_basis_on(d, &|sigma| sigma.iter().all(|x| !avoid.contains(x)))?;
    Some(basis.iter().map(|v| s.element(d, v)).collect())
}

/// Image of one pair of basis representatives.
#[derive(Clone, Debug)]
pub struct PairImage {
    pub left: (usize, Multidegree),
    pub right: (usize, Multidegree),
    pub z: KoszulElement,
    pub z2: KoszulElement,
    pub image: KoszulElement,
    pub is_cycle: bool,
}

#[derive(Clone, Debug)]
pub struct MapReport {
    pub images: Vec<PairImage>,
    /// Adapted representatives existed for every pair of strata.
    pub adapted: bool,
    pub all_cycles: bool,
    /// The induced map is bijective onto the target homology, stratum by stratum.
    pub full_rank: bool,
    /// Target dimensions per degree agree with the products of source dimensions.
    pub dimension_identity: bool,
    pub failures: Vec<String>,
}

impl MapReport {
    pub fn is_isomorphism(&self) -> bool {
        self.adapted && self.all_cycles && self.full_rank
    }
}

/// Both candidate formulas for the rescaled product on stored representatives.
#[derive(Clone, Debug)]
pub struct FormComparison {
    pub left: (usize, Multidegree),
    pub right: (usize, Multidegree),
    pub z: KoszulElement,
    pub z2: KoszulElement,
    /// `Σ lcm(r_σ, r_τ) e_σ ∧ e_τ`.
    pub termwise: KoszulElement,
    pub termwise_is_cycle: bool,
    /// `(z ∧ z') / gcd(m_z, m_z')`; `None` when not divisible.
    pub gcd_form: Option<KoszulElement>,
    pub gcd_is_cycle: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct KunnethReport {
    pub map: MapReport,
    pub stored_forms: Vec<FormComparison>,
}

struct Pairing<'a> {
    hi: &'a CycleBasis,
    hj: &'a CycleBasis,
    field: Field,
}

type PairReps = ((usize, Multidegree), (usize, Multidegree), Vec<(KoszulElement, KoszulElement)>);

impl Pairing<'_> {
    /// Pair-adapted representatives for every pair of strata with the given
    /// degree filter; strata lacking adapted representatives are reported.
    fn adapted_pairs(&self, min_deg: usize) -> (Vec<PairReps>, Vec<String>) {
        let mut out = Vec::new();
        let mut failures = Vec::new();
        for ((a, m), _) in self.hi.strata().filter(|((a, _), _)| *a >= min_deg) {
            for ((b, m2), _) in self.hj.strata().filter(|((b, _), _)| *b >= min_deg) {
                let zs = adapted_reps(self.hi.ring(), self.field, *a, m, &m2.support());
                let ws = adapted_reps(self.hj.ring(), self.field, *b, m2, &m.support());
                match (zs, ws) {
                    (Some(zs), Some(ws)) => {
                        let pairs = zs
                            .iter()
                            .flat_map(|z| ws.iter().map(move |w| (z.clone(), w.clone())))
                            .collect();
                        out.push(((*a, m.clone()), (*b, m2.clone()), pairs));
                    }
                    _ => failures.push(format!("no adapted representatives for H_{a} at {m} against H_{b} at {m2}")),
                }
            }
        }
        (out, failures)
    }
}

fn rank_check(target: &CycleBasis, images: &[PairImage], failures: &mut Vec<String>) -> bool {
    let mut by_stratum: BTreeMap<(usize, Multidegree), Vec<&KoszulElement>> = BTreeMap::new();
    for p in images {
        if p.image.is_zero() {
            failures.push(format!("image of {} ⊗ {} is zero", p.z, p.z2));
            continue;
        }
        match (p.image.hdeg(), p.image.mdeg()) {
            (Some(h), Some(m)) => by_stratum.entry((h, m)).or_default().push(&p.image),
            _ => failures.push(format!("image {} is not homogeneous", p.image)),
        }
    }
    let mut ok = true;
    for ((h, m), reps) in target.strata() {
        let got = by_stratum.remove(&(*h, m.clone())).unwrap_or_default();
        if got.len() != reps.len() {
            failures.push(format!("H_{h} at {m}: {} images for dimension {}", got.len(), reps.len()));
            ok = false;
            continue;
        }
        let s = Stratum::new(target.ring(), m, target.field());
        let vs: Vec<Vec<Scalar>> = got.iter().filter_map(|z| s.vector(*h, z)).collect();
        if vs.len() != got.len() || s.class_rank(*h, &vs) != reps.len() {
            failures.push(format!("H_{h} at {m}: images are dependent"));
            ok = false;
        }
    }
    for ((h, m), got) in by_stratum {
        failures.push(format!("{} images land in H_{h} at {m}, which vanishes", got.len()));
        ok = false;
    }
    ok
}

fn convolution(a: &[usize], b: &[usize], shift: usize, min_deg: usize) -> Vec<usize> {
    let mut out = Vec::new();
    for (i, x) in a.iter().enumerate().filter(|(i, _)| *i >= min_deg) {
        for (j, y) in b.iter().enumerate().filter(|(j, _)| *j >= min_deg) {
            let r = i + j - shift;
            if out.len() <= r {
                out.resize(r + 1, 0);
            }
            out[r] += x * y;
        }
    }
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}

/// The rescaled Künneth map `H(R/I) ⊗ H(R/J) → H(R/(I+J))` through the
/// termwise-lcm product of pair-adapted representatives.
pub fn kunneth_rescaled(i: &MonomialIdeal, j: &MonomialIdeal) -> Result<KunnethReport> {
    kunneth_rescaled_over(i, j, Field::Rational)
}

pub fn kunneth_rescaled_over(i: &MonomialIdeal, j: &MonomialIdeal, field: Field) -> Result<KunnethReport> {
    check_squarefree_quasitransverse(i, j, field)?;
    let sum = i.sum(j)?;
    let (hi, hj, hs) = (
        koszul_homology_over(i, field)?,
        koszul_homology_over(j, field)?,
        koszul_homology_over(&sum, field)?,
    );
    let pairing = Pairing { hi: &hi, hj: &hj, field };
    let (pairs, mut failures) = pairing.adapted_pairs(0);
    let adapted = failures.is_empty();
    let images: Vec<PairImage> = pairs
        .into_iter()
        .flat_map(|(l, r, reps)| {
            let sum = &sum;
            reps.into_iter().map(move |(z, w)| {
                let image = z.lcm_wedge(&w, sum);
                PairImage {
                    left: l.clone(),
                    right: r.clone(),
                    is_cycle: is_cycle(&image),
                    z,
                    z2: w,
                    image,
                }
            })
        })
        .collect();
    let all_cycles = images.iter().all(|p| p.is_cycle);
    let full_rank = rank_check(&hs, &images, &mut failures);
    let dimension_identity = hs.totals() == convolution(&hi.totals(), &hj.totals(), 0, 0);

    let mut stored_forms = Vec::new();
    for ((a, m), zs) in hi.strata() {
        for ((b, m2), ws) in hj.strata() {
            for z in zs {
                for w in ws {
                    let termwise = z.lcm_wedge(w, &sum);
                    let gcd_form = z.gcd_wedge(w, &sum);
                    stored_forms.push(FormComparison {
                        left: (*a, m.clone()),
                        right: (*b, m2.clone()),
                        z: z.clone(),
                        z2: w.clone(),
                        termwise_is_cycle: is_cycle(&termwise),
                        termwise,
                        gcd_is_cycle: gcd_form.as_ref().map(is_cycle),
                        gcd_form,
                    });
                }
            }
        }
    }
    Ok(KunnethReport {
        map: MapReport {
            images,
            adapted,
            all_cycles,
            full_rank,
            dimension_identity,
            failures,
        },
        stored_forms,
    })
}

/// `(d z ∧ z')` rescaled termwise, with `d z` computed over `R`.
fn intersection_image(z: &KoszulElement, w: &KoszulElement, ring: &MonomialIdeal) -> KoszulElement {
    let free = MonomialIdeal::zero(z.nvars());
    z.in_ring(&free).d().lcm_wedge(&w.in_ring(&free), ring)
}

/// The map `H_a(R/I) ⊗ H_b(R/J) → H_{a+b-1}(R/(I∩J))`, `a, b ≥ 1`.
pub fn intersection_homology_map(i: &MonomialIdeal, j: &MonomialIdeal) -> Result<MapReport> {
    intersection_homology_map_over(i, j, Field::Rational)
}

pub fn intersection_homology_map_over(i: &MonomialIdeal, j: &MonomialIdeal, field: Field) -> Result<MapReport> {
    check_squarefree_quasitransverse(i, j, field)?;
    let cap = i.intersection(j)?;
    let (hi, hj, hc) = (
        koszul_homology_over(i, field)?,
        koszul_homology_over(j, field)?,
        koszul_homology_over(&cap, field)?,
    );
    let pairing = Pairing { hi: &hi, hj: &hj, field };
    let (pairs, mut failures) = pairing.adapted_pairs(1);
    let adapted = failures.is_empty();
    let images: Vec<PairImage> = pairs
        .into_iter()
        .flat_map(|(l, r, reps)| {
            let cap = &cap;
            reps.into_iter().map(move |(z, w)| {
                let image = intersection_image(&z, &w, cap);
                PairImage {
                    left: l.clone(),
                    right: r.clone(),
                    is_cycle: is_cycle(&image),
                    z,
                    z2: w,
                    image,
                }
            })
        })
        .collect();
    let all_cycles = images.iter().all(|p| p.is_cycle);
    // degree 0 of the target is the unit, outside the image
    let mut target = hc.clone();
    target.strata.retain(|(h, _), _| *h >= 1);
    let full_rank = rank_check(&target, &images, &mut failures);
    let mut expected = convolution(&hi.totals(), &hj.totals(), 1, 1);
    if !expected.is_empty() {
        expected[0] = 1;
    }
    let dimension_identity = hc.totals() == expected;
    Ok(MapReport {
        images,
        adapted,
        all_cycles,
        full_rank,
        dimension_identity,
        failures,
    })
}

/// `d((d z ∧ z')^sq) = (-1)^{a-1} (d z ∧ d z')^sq` over `R` for every
/// adapted pair; returns the first failing pair.
pub fn intersection_leibniz_check(i: &MonomialIdeal, j: &MonomialIdeal) -> Result<Option<(KoszulElement, KoszulElement)>> {
    let map = intersection_homology_map(i, j)?;
    let free = MonomialIdeal::zero(i.nvars());
    for p in &map.images {
        let (z, w) = (p.z.in_ring(&free), p.z2.in_ring(&free));
        let lhs = z.d().lcm_wedge(&w, &free).d();
        let sign = Field::Rational.sign(p.left.0 - 1);
        let rhs = z.d().lcm_wedge(&w.d(), &free).scale(&sign);
        if lhs != rhs {
            return Ok(Some((p.z.clone(), p.z2.clone())));
        }
    }
    Ok(None)
}

/// Injectivity of `H_{≥1}(R/I) ⊕ H_{≥1}(R/J) → H(R/(I+J))` per multidegree.
pub fn golod_injectivity(i: &MonomialIdeal, j: &MonomialIdeal) -> Result<bool> {
    golod_injectivity_over(i, j, Field::Rational)
}

pub fn golod_injectivity_over(i: &MonomialIdeal, j: &MonomialIdeal, field: Field) -> Result<bool> {
    let sum = i.sum(j)?;
    let (hi, hj) = (koszul_homology_over(i, field)?, koszul_homology_over(j, field)?);
    let mut by_stratum: BTreeMap<(usize, Multidegree), Vec<KoszulElement>> = BTreeMap::new();
    for h in [&hi, &hj] {
        for ((d, m), reps) in h.strata().filter(|((d, _), _)| *d >= 1) {
            by_stratum
                .entry((*d, m.clone()))
                .or_default()
                .extend(reps.iter().map(|z| z.in_ring(&sum)));
        }
    }
    Ok(by_stratum.into_par_iter().all(|((d, m), imgs)| {
        let s = Stratum::new(&sum, &m, field);
        let vs: Vec<Vec<Scalar>> = imgs.iter().filter_map(|z| s.vector(d, z).or_else(|| z.is_zero().then(|| vec![field.zero(); s.rank(d)]))).collect();
        vs.len() == imgs.len() && s.is_cycle_all(d, &vs) && s.class_rank(d, &vs) == imgs.len()
    }))
}

#[derive(Clone, Debug)]
pub struct ProductVanishing {
    pub vanishes: bool,
    pub witness: Option<(KoszulElement, KoszulElement)>,
}

/// Whether every product of two positive-degree representatives is a boundary.
pub fn h1_product_vanishing(i: &MonomialIdeal) -> Result<ProductVanishing> {
    h1_product_vanishing_over(i, Field::Rational)
}

pub fn h1_product_vanishing_over(i: &MonomialIdeal, field: Field) -> Result<ProductVanishing> {
    let h = koszul_homology_over(i, field)?;
    let reps: Vec<&KoszulElement> = h
        .strata()
        .filter(|((d, _), _)| *d >= 1)
        .flat_map(|(_, r)| r.iter())
        .collect();
    let pairs: Vec<(usize, usize)> = (0..reps.len()).flat_map(|a| (a..reps.len()).map(move |b| (a, b))).collect();
    let witness = pairs.par_iter().find_map_first(|&(a, b)| {
        let p = reps[a].wedge(reps[b], i);
        (!is_boundary(&p, h.field)).then(|| (reps[a].clone(), reps[b].clone()))
    });
    Ok(ProductVanishing {
        vanishes: witness.is_none(),
        witness,
    })
}

/// Basis element `(d z ∧ z')^sq` of `H_{≥1}(R/(I∩J))` with its pair.
#[derive(Clone, Debug)]
pub struct MasseyBasisElement {
    pub z: KoszulElement,
    pub z2: KoszulElement,
    pub class: KoszulElement,
}

#[derive(Clone, Debug)]
pub struct MasseyReport {
    pub holds: bool,
    pub basis: Vec<MasseyBasisElement>,
    /// Indices `(a, b)` into `basis` of the first failing ordered pair.
    pub witness: Option<(usize, usize)>,
}

/// `ν((d z ∧ z')^sq) := (z ∧ z')^sq`, read in `K ⊗ R/(I∩J)`.
pub fn standard_nu(e: &MasseyBasisElement) -> KoszulElement {
    e.z.lcm_wedge(&e.z2, e.class.ring())
}

/// Condition `z_a ∧ z_b = z_a ∧ d(ν(z_b))` at chain level in `K ⊗ R/(I∩J)`
/// for all ordered pairs of the basis from [`intersection_homology_map`].
pub fn massey_condition(i: &MonomialIdeal, j: &MonomialIdeal) -> Result<MasseyReport> {
    massey_condition_over(i, j, Field::Rational)
}

pub fn massey_condition_over(i: &MonomialIdeal, j: &MonomialIdeal, field: Field) -> Result<MasseyReport> {
    massey_condition_with_over(i, j, field, standard_nu)
}

pub fn massey_condition_with(
    i: &MonomialIdeal,
    j: &MonomialIdeal,
    nu: impl Fn(&MasseyBasisElement) -> KoszulElement + Sync,
) -> Result<MasseyReport> {
    massey_condition_with_over(i, j, Field::Rational, nu)
}

pub fn massey_condition_with_over(
    i: &MonomialIdeal,
    j: &MonomialIdeal,
    field: Field,
    nu: impl Fn(&MasseyBasisElement) -> KoszulElement + Sync,
) -> Result<MasseyReport> {
    let map = intersection_homology_map_over(i, j, field)?;
    if !map.is_isomorphism() {
        return Err(Error::HypothesesUnmet(format!(
            "no basis from the intersection map: {}",
            map.failures.join("; ")
        )));
    }
    let basis: Vec<MasseyBasisElement> = map
        .images
        .into_iter()
        .map(|p| MasseyBasisElement {
            z: p.z,
            z2: p.z2,
            class: p.image,
        })
        .collect();
    let cap = i.intersection(j)?;
    let dnu: Vec<KoszulElement> = basis.iter().map(|e| nu(e).in_ring(&cap).d()).collect();
    let pairs: Vec<(usize, usize)> = (0..basis.len()).flat_map(|a| (0..basis.len()).map(move |b| (a, b))).collect();
    let witness = pairs.par_iter().find_map_first(|&(a, b)| {
        let lhs = basis[a].class.wedge(&basis[b].class, &cap);
        let rhs = basis[a].class.wedge(&dnu[b], &cap);
        (lhs != rhs).then_some((a, b))
    });
    Ok(MasseyReport {
        holds: witness.is_none(),
        basis,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ideal(n: usize, rows: &[&[u32]]) -> MonomialIdeal {
        MonomialIdeal::from_exponents(n, rows).unwrap()
    }

    fn md(e: &[u32]) -> Multidegree {
        Multidegree::new(e.to_vec())
    }

    #[test]
    fn principal_ideals() {
        let h = koszul_homology(&ideal(2, &[&[1, 0]])).unwrap();
        assert_eq!(h.totals(), vec![1, 1]);
        assert_eq!(h.reps(1, &md(&[1, 0]))[0].to_string(), "e{1}");
        let h = koszul_homology(&ideal(2, &[&[1, 1]])).unwrap();
        assert_eq!(h.totals(), vec![1, 1]);
        assert_eq!(h.reps(1, &md(&[1, 1]))[0].to_string(), "x2*e{1}");
    }

    #[test]
    fn differential_squares_to_zero() {
        let r = MonomialIdeal::zero(3);
        let q = Field::Rational;
        let z = KoszulElement::monomial(&r, q.one(), md(&[0, 1, 0]), &[0, 1, 2]);
        assert!(z.d().d().is_zero());
        assert_eq!(z.d().to_string(), "x2*x3*e{1,2} - x2^2*e{1,3} + x1*x2*e{2,3}");
    }

    #[test]
    fn complete_intersection_products_survive() {
        let v = h1_product_vanishing(&ideal(2, &[&[1, 0], &[0, 1]])).unwrap();
        assert!(!v.vanishes);
        assert!(h1_product_vanishing(&ideal(2, &[&[1, 1]])).unwrap().vanishes);
    }

    #[test]
    fn expected_form_examples() {
        assert!(expected_form(&ideal(2, &[&[2, 0], &[1, 1], &[0, 2]])).unwrap().holds);
        assert!(expected_form(&ideal(3, &[&[1, 2, 1]])).unwrap().holds);
    }

    #[test]
    fn kunneth_on_path_pair() {
        let (i, j) = (ideal(3, &[&[1, 1, 0]]), ideal(3, &[&[0, 1, 1]]));
        let r = kunneth_rescaled(&i, &j).unwrap();
        assert!(r.map.is_isomorphism(), "{:?}", r.map.failures);
        assert!(r.map.dimension_identity);
        let top = r.map.images.iter().find(|p| p.left.0 == 1 && p.right.0 == 1).unwrap();
        assert_eq!(top.image.to_string(), "x2*e{1,3}");
    }

    #[test]
    fn non_quasitransverse_pair_is_rejected() {
        let (i, j) = (ideal(2, &[&[1, 0]]), ideal(2, &[&[1, 1]]));
        assert!(matches!(kunneth_rescaled(&i, &j), Err(Error::HypothesesUnmet(_))));
    }
}
