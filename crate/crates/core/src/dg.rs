//! DG-algebra products stored as scalar structure constants.
//!
//! The product of basis elements `u` and `v` is `Σ c_a x^(m_u + m_v - m_a) a`;
//! only the scalars `c_a` are stored, exactly as for differentials.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rayon::prelude::*;

use crate::complex::{Minimization, MultigradedComplex, Slot, Term};
use crate::constructions::{double_star_with_index, gen_taylor_with_index, taylor_over, PairIndex};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::monomial::{MonomialIdeal, Multidegree};

/// Scalar product terms `(position in degree |u|+|v|, coefficient)`.
pub type Product = Vec<(usize, Scalar)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductTable {
    complex: MultigradedComplex,
    entries: BTreeMap<(Slot, Slot), Product>,
}

fn normalize(mut terms: Vec<(usize, Scalar)>, field: Field) -> Product {
    terms.sort_by_key(|(p, _)| *p);
    let mut out: Product = Vec::with_capacity(terms.len());
    for (p, c) in terms {
        match out.last_mut() {
            Some((q, acc)) if *q == p => *acc += &c,
            _ => out.push((p, c)),
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    let _ = field;
    out
}

impl ProductTable {
    /// Empty table; only products explicitly set are nonzero.
    pub fn new(complex: MultigradedComplex) -> Self {
        ProductTable {
            complex,
            entries: BTreeMap::new(),
        }
    }

    /// Table with `1 · v = v · 1 = v` for the degree-0 generator.
    pub fn with_unit(complex: MultigradedComplex) -> Result<Self> {
        if !complex.is_augmented() {
            return Err(Error::NotAugmented);
        }
        let mut t = ProductTable::new(complex);
        let one = t.complex.field().one();
        let unit = Slot::new(0, 0);
        let slots: Vec<Slot> = t.complex.slots().collect();
        for s in slots {
            t.entries.insert((unit, s), vec![(s.pos, one.clone())]);
            t.entries.insert((s, unit), vec![(s.pos, one.clone())]);
        }
        Ok(t)
    }

    pub fn complex(&self) -> &MultigradedComplex {
        &self.complex
    }

    pub fn field(&self) -> Field {
        self.complex.field()
    }

    /// Sets the product `u · v`, merging repeated positions and dropping zeros.
    pub fn set(&mut self, u: Slot, v: Slot, terms: Vec<(usize, Scalar)>) {
        let terms = normalize(terms, self.field());
        if terms.is_empty() {
            self.entries.remove(&(u, v));
        } else {
            self.entries.insert((u, v), terms);
        }
    }

    pub fn get(&self, u: Slot, v: Slot) -> &[(usize, Scalar)] {
        self.entries.get(&(u, v)).map_or(&[], Vec::as_slice)
    }

    /// Nonzero products in deterministic order.
    pub fn entries(&self) -> impl Iterator<Item = (&(Slot, Slot), &Product)> {
        self.entries.iter()
    }

    /// `u · v` with the monomial parts made explicit.
    pub fn product_terms(&self, u: Slot, v: Slot) -> Vec<Term> {
        let c = &self.complex;
        let m = c.mdeg(u).mul(c.mdeg(v));
        let h = u.hdeg + v.hdeg;
        self.get(u, v)
            .iter()
            .map(|(p, s)| {
                let a = Slot::new(h, *p);
                Term {
                    slot: a,
                    monomial: m.checked_div(c.mdeg(a)).unwrap_or_else(|| Multidegree::zero(c.nvars())),
                    coeff: s.clone(),
                }
            })
            .collect()
    }

    /// New table on an equal complex with every scalar of `u · v` negated.
    pub fn with_negated(&self, u: Slot, v: Slot) -> ProductTable {
        let mut t = self.clone();
        let terms: Product = self.get(u, v).iter().map(|(p, c)| (*p, -c)).collect();
        t.set(u, v, terms);
        t
    }
}

/// Result of one axiom check with the first failure found.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AxiomCheck {
    pub ok: bool,
    pub witness: Option<String>,
}

impl AxiomCheck {
    fn from_witness(witness: Option<String>) -> Self {
        AxiomCheck {
            ok: witness.is_none(),
            witness,
        }
    }
}

impl fmt::Display for AxiomCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            None => write!(f, "ok"),
            Some(w) => write!(f, "FAILED ({w})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DGReport {
    pub multigraded: AxiomCheck,
    pub leibniz: AxiomCheck,
    pub associativity: AxiomCheck,
    pub commutativity: AxiomCheck,
    pub odd_squares: AxiomCheck,
    pub unit: AxiomCheck,
}

impl DGReport {
    pub fn is_dg(&self) -> bool {
        self.checks().iter().all(|(_, c)| c.ok)
    }

    pub fn checks(&self) -> [(&'static str, &AxiomCheck); 6] {
        [
            ("multigraded", &self.multigraded),
            ("leibniz", &self.leibniz),
            ("associativity", &self.associativity),
            ("commutativity", &self.commutativity),
            ("odd squares", &self.odd_squares),
            ("unit", &self.unit),
        ]
    }
}

impl fmt::Display for DGReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (name, c)) in self.checks().iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{name}: {c}")?;
        }
        Ok(())
    }
}

type Acc = BTreeMap<usize, Scalar>;

fn add_to(acc: &mut Acc, key: usize, value: Scalar) {
    if value.is_zero() {
        return;
    }
    let e = acc.entry(key).or_insert_with(|| value.field().zero());
    *e += &value;
    if e.is_zero() {
        acc.remove(&key);
    }
}

fn name(c: &MultigradedComplex, s: Slot) -> String {
    format!("{}[{}]", c.element(s).label, s.hdeg)
}

/// `Σ_a coeffs[a] · (a · w)` in degree `h_a + |w|`.
fn left_apply(t: &ProductTable, h_a: usize, coeffs: &[(usize, Scalar)], w: Slot, acc: &mut Acc, scale: &Scalar) {
    for (a, c) in coeffs {
        let k = scale * c;
        for (p, x) in t.get(Slot::new(h_a, *a), w) {
            add_to(acc, *p, &k * x);
        }
    }
}

fn right_apply(t: &ProductTable, u: Slot, h_c: usize, coeffs: &[(usize, Scalar)], acc: &mut Acc, scale: &Scalar) {
    for (cpos, c) in coeffs {
        let k = scale * c;
        for (p, x) in t.get(u, Slot::new(h_c, *cpos)) {
            add_to(acc, *p, &k * x);
        }
    }
}

/// Checks Leibniz, associativity, graded commutativity, odd squares, the unit
/// and multigrading, each on scalars per target basis element.
pub fn verify_dg(t: &ProductTable) -> DGReport {
    let c = &t.complex;
    let field = c.field();
    let slots: Vec<Slot> = c.slots().collect();
    let top = c.len() - 1;
    let one = field.one();

    let multigraded = t.entries.iter().find_map(|(&(u, v), terms)| {
        let h = u.hdeg + v.hdeg;
        let bound = c.mdeg(u).mul(c.mdeg(v));
        terms.iter().find_map(|(p, _)| {
            let bad = h > top || *p >= c.rank(h) || !c.mdeg(Slot::new(h, *p)).divides(&bound);
            bad.then(|| format!("{} · {} has a term outside degree {h} or above {bound}", name(c, u), name(c, v)))
        })
    });

    let unit = if !c.is_augmented() {
        Some("no degree-0 unit".to_string())
    } else {
        let e = Slot::new(0, 0);
        slots.iter().find_map(|&s| {
            let want = vec![(s.pos, one.clone())];
            (t.get(e, s) != want.as_slice() || t.get(s, e) != want.as_slice())
                .then(|| format!("1 · {} != {}", name(c, s), name(c, s)))
        })
    };

    let pairs: Vec<(Slot, Slot)> = slots
        .iter()
        .flat_map(|&u| slots.iter().map(move |&v| (u, v)))
        .filter(|(u, v)| u.hdeg + v.hdeg <= top)
        .collect();

    let leibniz = pairs.par_iter().find_map_first(|&(u, v)| {
        let h = u.hdeg + v.hdeg;
        if h == 0 {
            return None;
        }
        let mut acc = Acc::new();
        for (a, x) in t.get(u, v) {
            for (tp, d) in c.d_frame(Slot::new(h, *a)) {
                add_to(&mut acc, *tp, x * d);
            }
        }
        let minus = -&one;
        if u.hdeg > 0 {
            left_apply(t, u.hdeg - 1, c.d_frame(u), v, &mut acc, &minus);
        }
        if v.hdeg > 0 {
            let s = -&field.sign(u.hdeg);
            right_apply(t, u, v.hdeg - 1, c.d_frame(v), &mut acc, &s);
        }
        (!acc.is_empty()).then(|| format!("d({} · {}) differs from the Leibniz expansion", name(c, u), name(c, v)))
    });

    let commutativity = pairs.par_iter().find_map_first(|&(u, v)| {
        let s = field.sign(u.hdeg * v.hdeg);
        let mut acc = Acc::new();
        for (p, x) in t.get(u, v) {
            add_to(&mut acc, *p, x.clone());
        }
        for (p, x) in t.get(v, u) {
            add_to(&mut acc, *p, -&(&s * x));
        }
        (!acc.is_empty()).then(|| format!("{} · {} is not graded commutative", name(c, u), name(c, v)))
    });

    let odd_squares = slots.iter().find_map(|&u| {
        (u.hdeg % 2 == 1 && !t.get(u, u).is_empty()).then(|| format!("{} squared is nonzero", name(c, u)))
    });

    let associativity = associativity_witness(t, &slots, top);

    DGReport {
        multigraded: AxiomCheck::from_witness(multigraded),
        leibniz: AxiomCheck::from_witness(leibniz),
        associativity: AxiomCheck::from_witness(associativity),
        commutativity: AxiomCheck::from_witness(commutativity),
        odd_squares: AxiomCheck::from_witness(odd_squares),
        unit: AxiomCheck::from_witness(unit),
    }
}

fn associativity_witness(t: &ProductTable, slots: &[Slot], top: usize) -> Option<String> {
    let c = &t.complex;
    let one = c.field().one();
    let check = |u: Slot, v: Slot, w: Slot| -> Option<String> {
        let mut acc = Acc::new();
        left_apply(t, u.hdeg + v.hdeg, t.get(u, v), w, &mut acc, &one);
        right_apply(t, u, v.hdeg + w.hdeg, t.get(v, w), &mut acc, &-&one);
        (!acc.is_empty()).then(|| format!("({} · {}) · {} != {} · ({} · {})", name(c, u), name(c, v), name(c, w), name(c, u), name(c, v), name(c, w)))
    };
    let nonunit: Vec<Slot> = slots.iter().copied().filter(|s| s.hdeg > 0).collect();
    let nonzero: Vec<(Slot, Slot)> = t
        .entries
        .keys()
        .copied()
        .filter(|(u, v)| u.hdeg > 0 && v.hdeg > 0)
        .collect();
    let left = nonzero.par_iter().find_map_first(|&(u, v)| {
        nonunit
            .iter()
            .filter(|w| u.hdeg + v.hdeg + w.hdeg <= top)
            .find_map(|&w| check(u, v, w))
    });
    if left.is_some() {
        return left;
    }
    nonzero.par_iter().find_map_first(|&(v, w)| {
        nonunit
            .iter()
            .filter(|u| u.hdeg + v.hdeg + w.hdeg <= top && t.get(**u, v).is_empty())
            .find_map(|&u| check(u, v, w))
    })
}

/// Squarefree part of a homogeneous combination of squarefree basis
/// elements: the unique `v'` of multidegree `rad(m)` with `v = r v'`.
pub fn squarefree_part(c: &MultigradedComplex, terms: &[Term]) -> Result<Vec<Term>> {
    let mut total: Option<Multidegree> = None;
    for t in terms {
        let m_b = c.mdeg(t.slot);
        if !m_b.is_squarefree() {
            return Err(Error::NotSquarefree(m_b.clone()));
        }
        let m = t.monomial.mul(m_b);
        match &total {
            None => total = Some(m),
            Some(prev) if *prev != m => {
                return Err(Error::InvalidProduct(format!(
                    "element is not homogeneous: {prev} vs {m}"
                )))
            }
            _ => {}
        }
    }
    let Some(m) = total else {
        return Ok(Vec::new());
    };
    let rad = m.radical();
    Ok(terms
        .iter()
        .map(|t| Term {
            slot: t.slot,
            monomial: rad.checked_div(c.mdeg(t.slot)).expect("basis degree divides the radical"),
            coeff: t.coeff.clone(),
        })
        .collect())
}

fn vertices(c: &MultigradedComplex, s: Slot) -> Option<Vec<usize>> {
    match &c.element(s).label {
        crate::complex::Label::Unit => Some(Vec::new()),
        crate::complex::Label::Subset(v) => Some(v.clone()),
        _ => None,
    }
}

fn shuffle_sign(a: &[usize], b: &[usize]) -> usize {
    a.iter().map(|x| b.iter().filter(|y| *y < x).count()).sum()
}

/// Standard exterior product on `taylor(I)`: `e_σ · e_τ = ±e_{σ∪τ}` for
/// disjoint `σ, τ` with the shuffle sign, and 0 otherwise.
pub fn taylor_product(i: &MonomialIdeal) -> Result<ProductTable> {
    taylor_product_over(i, Field::Rational)
}

pub fn taylor_product_over(i: &MonomialIdeal, field: Field) -> Result<ProductTable> {
    taylor_product_on(taylor_over(i, field)?)
}

/// Taylor product on a complex whose basis is labelled by subsets.
pub fn taylor_product_on(c: MultigradedComplex) -> Result<ProductTable> {
    let mut by_set: HashMap<Vec<usize>, Slot> = HashMap::new();
    for s in c.slots() {
        let v = vertices(&c, s)
            .ok_or_else(|| Error::NotSimplicial(format!("label {} is not a subset", c.element(s).label)))?;
        by_set.insert(v, s);
    }
    let field = c.field();
    let slots: Vec<Slot> = c.slots().collect();
    let mut t = ProductTable::with_unit(c)?;
    for &u in &slots {
        let a = vertices(&t.complex, u).unwrap();
        if a.is_empty() {
            continue;
        }
        for &v in &slots {
            let b = vertices(&t.complex, v).unwrap();
            if b.is_empty() || a.iter().any(|x| b.contains(x)) {
                continue;
            }
            let mut union: Vec<usize> = a.iter().chain(&b).copied().collect();
            union.sort_unstable();
            if let Some(&target) = by_set.get(&union) {
                t.set(u, v, vec![(target.pos, field.sign(shuffle_sign(&a, &b)))]);
            }
        }
    }
    Ok(t)
}

/// Homotopy transfer of a product to a minimal model: `x · y := p(g(x) g(y))`.
pub fn transfer_product(t: &ProductTable, m: &Minimization) -> ProductTable {
    let c = &m.complex;
    let slots: Vec<Slot> = c.slots().collect();
    let mut out = ProductTable::new(c.clone());
    let top = c.len() - 1;
    for &u in &slots {
        for &v in &slots {
            let h = u.hdeg + v.hdeg;
            if h > top {
                continue;
            }
            let mut big = Acc::new();
            for (x, a) in m.inclusion.image(u) {
                for (y, b) in m.inclusion.image(v) {
                    let ab = a * b;
                    for (p, s) in t.get(Slot::new(u.hdeg, *x), Slot::new(v.hdeg, *y)) {
                        add_to(&mut big, *p, &ab * s);
                    }
                }
            }
            let mut small = Acc::new();
            for (p, s) in big {
                for (q, r) in m.projection.image(Slot::new(h, p)) {
                    add_to(&mut small, *q, &s * r);
                }
            }
            out.set(u, v, small.into_iter().collect());
        }
    }
    out
}

/// Product on `minimize(taylor(I))` transferred from the Taylor algebra.
pub fn minimal_taylor_product(i: &MonomialIdeal, field: Field) -> Result<ProductTable> {
    let t = taylor_product_over(i, field)?;
    let m = crate::complex::minimize_with_maps(t.complex());
    Ok(transfer_product(&t, &m))
}

/// Products of pairs `(x * y) · (x' * y') = (-1)^{|y||x'|} (x x') * (y y')`.
/// With `koszul` unset the sign is dropped.
struct PairAlgebra<'a> {
    f: &'a ProductTable,
    g: &'a ProductTable,
    koszul: bool,
}

impl PairAlgebra<'_> {
    fn mu(&self, (x, y): (Slot, Slot), (x2, y2): (Slot, Slot)) -> Vec<((Slot, Slot), Scalar)> {
        let sign = self.f.field().sign(if self.koszul { y.hdeg * x2.hdeg } else { 0 });
        let mut out = Vec::new();
        for (a, alpha) in self.f.get(x, x2) {
            let sa = &sign * alpha;
            for (b, beta) in self.g.get(y, y2) {
                out.push((
                    (Slot::new(x.hdeg + x2.hdeg, *a), Slot::new(y.hdeg + y2.hdeg, *b)),
                    &sa * beta,
                ));
            }
        }
        out
    }
}

fn require_dg(t: &ProductTable, what: &str) -> Result<()> {
    let r = verify_dg(t);
    if r.is_dg() {
        Ok(())
    } else {
        Err(Error::InvalidProduct(format!("{what}: {r}")))
    }
}

/// Product on `F * G` from DG products on `F` and `G`.
pub fn gen_taylor_product_pair(f: &ProductTable, g: &ProductTable) -> Result<(ProductTable, PairIndex)> {
    require_dg(f, "left factor")?;
    require_dg(g, "right factor")?;
    gen_taylor_product_unchecked(f, g)
}

fn gen_taylor_product_unchecked(f: &ProductTable, g: &ProductTable) -> Result<(ProductTable, PairIndex)> {
    let (c, index) = gen_taylor_with_index(f.complex(), g.complex())?;
    let alg = PairAlgebra { f, g, koszul: true };
    let slots: Vec<Slot> = c.slots().collect();
    let top = c.len() - 1;
    let mut t = ProductTable::new(c);
    for &u in &slots {
        for &v in &slots {
            if u.hdeg + v.hdeg > top {
                continue;
            }
            let terms = alg
                .mu(index.factors(u), index.factors(v))
                .into_iter()
                .map(|((a, b), s)| (index.slot(a, b).expect("product pair is a basis element").pos, s))
                .collect();
            t.set(u, v, terms);
        }
    }
    Ok((t, index))
}

/// Left fold of the generalized Taylor product over `F1 * ... * Fr`.
pub fn gen_taylor_product(tables: &[ProductTable]) -> Result<ProductTable> {
    let (first, rest) = tables
        .split_first()
        .ok_or_else(|| Error::InvalidProduct("empty family".into()))?;
    for (k, t) in tables.iter().enumerate() {
        require_dg(t, &format!("factor {}", k + 1))?;
    }
    rest.iter().try_fold(first.clone(), |acc, t| {
        gen_taylor_product_unchecked(&acc, t).map(|(p, _)| p)
    })
}

/// Checks that `g` is a simplicial complex with simplicial multiplication.
fn check_simplicial(g: &ProductTable) -> Result<()> {
    let c = g.complex();
    let mut by_set: HashMap<Vec<usize>, Slot> = HashMap::new();
    for s in c.slots() {
        let v = vertices(c, s)
            .ok_or_else(|| Error::NotSimplicial(format!("label {} is not a face", c.element(s).label)))?;
        if v.len() != s.hdeg {
            return Err(Error::NotSimplicial(format!("face {v:?} sits in degree {}", s.hdeg)));
        }
        by_set.insert(v, s);
    }
    for s in c.slots() {
        let omega = vertices(c, s).unwrap();
        let faces: Vec<usize> = c.d_frame(s).iter().map(|(p, _)| *p).collect();
        let mut expected: Vec<usize> = (0..omega.len())
            .map(|j| {
                let mut f = omega.clone();
                f.remove(j);
                by_set.get(&f).map(|x| x.pos)
            })
            .collect::<Option<_>>()
            .ok_or_else(|| Error::NotSimplicial(format!("face of {omega:?} missing")))?;
        expected.sort_unstable();
        if faces != expected {
            return Err(Error::NotSimplicial(format!("boundary of {omega:?} is not simplicial")));
        }
    }
    for (&(u, v), terms) in g.entries() {
        let mut union: Vec<usize> = vertices(c, u).unwrap();
        union.extend(vertices(c, v).unwrap());
        union.sort_unstable();
        union.dedup();
        let target = by_set.get(&union).map(|s| s.pos);
        if terms.len() != 1 || Some(terms[0].0) != target {
            return Err(Error::NotSimplicial(format!(
                "product {} · {} is not a multiple of the union face",
                c.element(u).label,
                c.element(v).label
            )));
        }
    }
    Ok(())
}

/// Product on `F ** G` for a simplicial right factor.
#[derive(Clone, Debug)]
pub struct DoubleStarProduct {
    pub table: ProductTable,
    /// Sign used for the third term of the product formula.
    pub third_term_sign: i8,
    pub report: DGReport,
    /// Reports of every sign tried, in order `+1, -1`.
    pub tried: Vec<(i8, DGReport)>,
}

/// Which of the four terms of the `**` product fire for `(f * g_Ω) · (f' * g_Γ)`,
/// given the vertex lists `Ω, Γ` and the degrees `|f|, |f'|`.
pub fn branches(omega: &[usize], gamma: &[usize], df: usize, df2: usize) -> [bool; 4] {
    let at = |v: &[usize], k: usize| v.get(k).copied().unwrap_or(usize::MAX);
    let (w1, w2, g1, g2) = (at(omega, 0), at(omega, 1), at(gamma, 0), at(gamma, 1));
    [
        w1 <= g1 && g1 < w2,
        w1 < g1 && df2 == 1,
        g1 < w1 && w1 < g2,
        g1 < w1 && df == 1,
    ]
}

struct DoubleStarData<'a> {
    f: &'a ProductTable,
    g: &'a ProductTable,
    index: PairIndex,
    complex: MultigradedComplex,
}

impl DoubleStarData<'_> {
    fn table(&self, third: i8) -> Result<ProductTable> {
        let field = self.f.field();
        let alg = PairAlgebra { f: self.f, g: self.g, koszul: false };
        let (fc, gc) = (self.f.complex(), self.g.complex());
        let c = &self.complex;
        let slots: Vec<Slot> = c.slots().filter(|s| s.hdeg > 0).collect();
        let top = c.len() - 1;
        let mut t = ProductTable::with_unit(c.clone())?;
        let third = field.from_i64(i64::from(third));
        // d_1 scalar of an element of F_1 or G_1
        let aug = |x: &MultigradedComplex, s: Slot| -> Scalar {
            x.d_frame(s).first().map_or_else(|| field.zero(), |(_, v)| v.clone())
        };
        // first-face projection: (face slot, incidence scalar)
        let p1 = |s: Slot| -> Option<(Slot, Scalar)> {
            let omega = vertices(gc, s)?;
            let first = *omega.first()?;
            gc.d_frame(s).iter().find_map(|(p, e)| {
                let face = Slot::new(s.hdeg - 1, *p);
                let fv = vertices(gc, face)?;
                (!fv.contains(&first)).then(|| (face, e.clone()))
            })
        };
        for &u in &slots {
            let (f, gw) = self.index.factors(u);
            let omega = vertices(gc, gw).expect("simplicial right factor");
            for &v in &slots {
                if u.hdeg + v.hdeg > top {
                    continue;
                }
                let (f2, gg) = self.index.factors(v);
                let gamma = vertices(gc, gg).expect("simplicial right factor");
                let (df, df2) = (f.hdeg, f2.hdeg);
                let dw = gw.hdeg;
                let fire = branches(&omega, &gamma, df, df2);
                let mut acc: Vec<((Slot, Slot), Scalar)> = Vec::new();
                let mut push = |scale: Scalar, x: (Slot, Slot), y: (Slot, Slot)| {
                    if scale.is_zero() {
                        return;
                    }
                    for (ab, s) in alg.mu(x, y) {
                        acc.push((ab, &scale * &s));
                    }
                };
                if fire[0] {
                    if let Some((face, eps)) = p1(gw) {
                        let s = &field.sign((dw - 1) * (df2 - 1)) * &eps;
                        push(s, (f, face), (f2, gg));
                    }
                }
                if fire[1] {
                    let s = -&aug(fc, f2);
                    push(s, (f, gw), (Slot::new(0, 0), gg));
                }
                if fire[2] {
                    if let Some((face, eps)) = p1(gg) {
                        let s = &(&third * &field.sign((dw - 1) * df2)) * &eps;
                        push(s, (f, gw), (f2, face));
                    }
                }
                if fire[3] {
                    let s = -&(&field.sign(dw * (df2 - 1)) * &aug(fc, f));
                    push(s, (Slot::new(0, 0), gw), (f2, gg));
                }
                let terms = acc
                    .into_iter()
                    .map(|((a, b), s)| {
                        self.index
                            .slot(a, b)
                            .map(|x| (x.pos, s))
                            .ok_or_else(|| Error::InvalidProduct("product leaves F ** G".into()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                t.set(u, v, terms);
            }
        }
        Ok(t)
    }
}

/// Product on `F ** G` with `G` a simplicial resolution (e.g. a Taylor
/// complex) carrying a simplicial multiplication.
///
/// Products of pairs inside the formula are the sign-free `(f f') * (g g')`.
/// The sign of the third term is not fixed by the formula as displayed;
/// both signs are tried and the first one passing the DG axioms is kept.
pub fn double_star_product(f: &ProductTable, g: &ProductTable) -> Result<DoubleStarProduct> {
    check_simplicial(g)?;
    require_dg(f, "left factor")?;
    let (complex, index) = double_star_with_index(f.complex(), g.complex())?;
    let data = DoubleStarData { f, g, index, complex };
    let mut tried = Vec::new();
    for sign in [1i8, -1] {
        let table = data.table(sign)?;
        let report = verify_dg(&table);
        let ok = report.is_dg();
        tried.push((sign, report.clone()));
        if ok {
            return Ok(DoubleStarProduct {
                table,
                third_term_sign: sign,
                report,
                tried,
            });
        }
    }
    let table = data.table(1)?;
    let report = tried[0].1.clone();
    Ok(DoubleStarProduct {
        table,
        third_term_sign: 1,
        report,
        tried,
    })
}

/// Axioms of a degree-one action `S_1 ⊗ S_j → S_{j+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeOneReport {
    /// `d(x · y) = d_1(x) y - x · d(y)`.
    pub leibniz: AxiomCheck,
    /// `x · (x · y) = 0` for basis elements `x` of degree 1.
    pub square_zero: AxiomCheck,
    /// `x · (x' · y) + x' · (x · y) = 0` for distinct basis elements; needed
    /// for (b) on arbitrary elements of degree 1, not only basis elements.
    pub square_zero_polarized: AxiomCheck,
}

impl DegreeOneReport {
    pub fn is_ok(&self) -> bool {
        self.leibniz.ok && self.square_zero.ok
    }
}

impl fmt::Display for DegreeOneReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "leibniz: {}\nsquare zero: {}\nsquare zero, polarized: {}",
            self.leibniz, self.square_zero, self.square_zero_polarized
        )
    }
}

/// Checks the degree-one action axioms using only the entries `x · y` with
/// `|x| = 1`.
pub fn verify_degree_one(t: &ProductTable) -> DegreeOneReport {
    let c = t.complex();
    let field = c.field();
    let top = c.len() - 1;
    let ones: Vec<Slot> = c.basis(1).iter().enumerate().map(|(p, _)| Slot::new(1, p)).collect();
    let targets: Vec<Slot> = c.slots().filter(|s| s.hdeg < top).collect();
    let leibniz = ones.par_iter().find_map_first(|&x| {
        let aug = c.d_frame(x).first().map_or_else(|| field.zero(), |(_, v)| v.clone());
        targets.iter().find_map(|&y| {
            let h = y.hdeg + 1;
            let mut acc = Acc::new();
            for (a, s) in t.get(x, y) {
                for (tp, d) in c.d_frame(Slot::new(h, *a)) {
                    add_to(&mut acc, *tp, s * d);
                }
            }
            add_to(&mut acc, y.pos, -&aug);
            if y.hdeg > 0 {
                right_apply(t, x, y.hdeg - 1, c.d_frame(y), &mut acc, &field.one());
            }
            (!acc.is_empty()).then(|| format!("d({} · {}) != d({}) {} - {} · d({})", name(c, x), name(c, y), name(c, x), name(c, y), name(c, x), name(c, y)))
        })
    });
    let square = |polarized: bool| {
        ones.par_iter().find_map_first(|&x| {
            let partners: Vec<Slot> = if polarized {
                ones.iter().copied().filter(|y| *y > x).collect()
            } else {
                vec![x]
            };
            partners.into_iter().find_map(|y| {
                targets.iter().filter(|z| z.hdeg + 2 <= top).find_map(|&z| {
                    let mut acc = Acc::new();
                    right_apply(t, x, z.hdeg + 1, t.get(y, z), &mut acc, &field.one());
                    if y != x {
                        right_apply(t, y, z.hdeg + 1, t.get(x, z), &mut acc, &field.one());
                    }
                    (!acc.is_empty()).then(|| {
                        if x == y {
                            format!("{} · ({} · {}) != 0", name(c, x), name(c, x), name(c, z))
                        } else {
                            format!(
                                "{} · ({} · {}) + {} · ({} · {}) != 0",
                                name(c, x), name(c, y), name(c, z), name(c, y), name(c, x), name(c, z)
                            )
                        }
                    })
                })
            })
        })
    };
    DegreeOneReport {
        leibniz: AxiomCheck::from_witness(leibniz),
        square_zero: AxiomCheck::from_witness(square(false)),
        square_zero_polarized: AxiomCheck::from_witness(square(true)),
    }
}

/// Degree-one action on `F ** G` built from degree-one actions on `F`, `G`,
/// with sign-free products of pairs as in [`double_star_product`].
#[derive(Clone, Debug)]
pub struct DegreeOneAction {
    /// Only entries `x · y` with `|x| = 1` are populated.
    pub table: ProductTable,
    pub report: DegreeOneReport,
}

pub fn degree_one_action(f: &ProductTable, g: &ProductTable) -> Result<DegreeOneAction> {
    for (what, t) in [("left factor", f), ("right factor", g)] {
        let r = verify_degree_one(t);
        if !r.is_ok() {
            return Err(Error::HypothesesUnmet(format!("{what}: {r}")));
        }
    }
    let (c, index) = double_star_with_index(f.complex(), g.complex())?;
    let field = c.field();
    let alg = PairAlgebra { f, g, koszul: false };
    let top = c.len() - 1;
    let unit = Slot::new(0, 0);
    let mut t = ProductTable::new(c.clone());
    let aug = |x: &MultigradedComplex, s: Slot| -> Scalar {
        x.d_frame(s).first().map_or_else(|| field.zero(), |(_, v)| v.clone())
    };
    for x in (0..c.rank(1)).map(|p| Slot::new(1, p)) {
        let (f1, g1) = index.factors(x);
        t.set(x, unit, vec![(x.pos, field.one())]);
        for y in c.slots().filter(|s| s.hdeg > 0 && s.hdeg < top) {
            let (fa, gb) = index.factors(y);
            let mut acc: Vec<((Slot, Slot), Scalar)> = Vec::new();
            let s1 = &field.sign(fa.hdeg) * &aug(f.complex(), f1);
            for (ab, s) in alg.mu((unit, g1), (fa, gb)) {
                acc.push((ab, &s1 * &s));
            }
            if gb.hdeg == 1 {
                let s2 = aug(g.complex(), gb);
                for (ab, s) in alg.mu((f1, g1), (fa, unit)) {
                    acc.push((ab, &s2 * &s));
                }
            }
            let terms = acc
                .into_iter()
                .map(|((a, b), s)| {
                    index
                        .slot(a, b)
                        .map(|z| (z.pos, s))
                        .ok_or_else(|| Error::InvalidProduct("action leaves F ** G".into()))
                })
                .collect::<Result<Vec<_>>>()?;
            t.set(x, y, terms);
        }
    }
    let report = verify_degree_one(&t);
    Ok(DegreeOneAction { table: t, report })
}
