//! Multigraded free complexes stored by their scalar frames.
//!
//! A differential entry from basis element `s` to basis element `t` is the
//! scalar `c(t, s)` times the monomial `x^(mdeg s - mdeg t)`; only the scalar
//! is stored. Homogeneity (`c(t, s) != 0` implies `mdeg t <= mdeg s`) makes
//! every identity between such maps a statement about scalars alone.

mod betti;
mod minimize;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::linalg;
use crate::monomial::Multidegree;

pub use betti::BettiTable;
pub use minimize::{is_minimal, minimize, minimize_with_maps, ChainMap, Minimization};

/// Structured tag carried by a basis element.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Unit,
    Gen(usize),
    /// Sorted 0-based generator indices (Taylor-type basis elements).
    Subset(Vec<usize>),
    /// Generalized Taylor product `a * b * ...`, flattened.
    Star(Vec<Label>),
    Free(String),
}

impl Label {
    /// `a * b` with flattening, so that folding left or right agrees.
    pub fn star(a: &Label, b: &Label) -> Label {
        let mut parts = Vec::new();
        for l in [a, b] {
            match l {
                Label::Star(xs) => parts.extend(xs.iter().cloned()),
                other => parts.push(other.clone()),
            }
        }
        Label::Star(parts)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Unit => write!(f, "1"),
            Label::Gen(i) => write!(f, "g{}", i + 1),
            Label::Subset(s) if s.is_empty() => write!(f, "1"),
            Label::Subset(s) => {
                let idx: Vec<String> = s.iter().map(|i| (i + 1).to_string()).collect();
                write!(f, "e{{{}}}", idx.join(","))
            }
            Label::Star(parts) => {
                let p: Vec<String> = parts.iter().map(|l| l.to_string()).collect();
                write!(f, "{}", p.join("*"))
            }
            Label::Free(t) => write!(f, "{t}"),
        }
    }
}

/// Position of a basis element: homological degree and index within it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Slot {
    pub hdeg: usize,
    pub pos: usize,
}

impl Slot {
    pub fn new(hdeg: usize, pos: usize) -> Self {
        Slot { hdeg, pos }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElement {
    pub id: usize,
    pub hdeg: usize,
    pub mdeg: Multidegree,
    pub label: Label,
}

/// Sparse scalar matrix of one differential, stored by source column with
/// rows sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    rows: usize,
    cols: Vec<Vec<(usize, Scalar)>>,
}

impl Frame {
    pub fn new(rows: usize, cols: usize) -> Self {
        Frame {
            rows,
            cols: vec![Vec::new(); cols],
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, col: usize) -> &[(usize, Scalar)] {
        &self.cols[col]
    }

    pub fn get(&self, row: usize, col: usize) -> Option<&Scalar> {
        let c = &self.cols[col];
        c.binary_search_by_key(&row, |(r, _)| *r)
            .ok()
            .map(|i| &c[i].1)
    }

    /// Sets an entry; a zero value removes it.
    pub fn set(&mut self, row: usize, col: usize, value: Scalar) {
        assert!(row < self.rows, "frame row out of range");
        let c = &mut self.cols[col];
        match c.binary_search_by_key(&row, |(r, _)| *r) {
            Ok(i) if value.is_zero() => {
                c.remove(i);
            }
            Ok(i) => c[i].1 = value,
            Err(_) if value.is_zero() => {}
            Err(i) => c.insert(i, (row, value)),
        }
    }

    /// `(row, col, value)` for every stored entry, column-major.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        self.cols
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r, c, v)))
    }

    pub fn to_dense(&self, field: Field) -> linalg::Matrix {
        let mut m = linalg::zeros(field, self.rows, self.cols.len());
        for (r, c, v) in self.entries() {
            m[r][c] = v.clone();
        }
        m
    }
}

/// A term `scalar * x^monomial * basis` of an element of a free module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub slot: Slot,
    pub monomial: Multidegree,
    pub coeff: Scalar,
}

/// Basis elements carrying a nonzero coefficient in the combination.
pub fn support(terms: &[Term]) -> BTreeSet<Slot> {
    let mut acc: BTreeMap<(Slot, &Multidegree), Scalar> = BTreeMap::new();
    for t in terms {
        let e = acc
            .entry((t.slot, &t.monomial))
            .or_insert_with(|| t.coeff.field().zero());
        *e += &t.coeff;
    }
    acc.into_iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|((s, _), _)| s)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultigradedComplex {
    n: usize,
    field: Field,
    modules: Vec<Vec<BasisElement>>,
    /// `diffs[h]` maps degree `h` to degree `h - 1`; `diffs[0]` has no rows.
    diffs: Vec<Frame>,
    index: HashMap<usize, Slot>,
}

impl MultigradedComplex {
    /// Assembles a complex, checking shapes, ids and field membership.
    /// Homogeneity and `d^2 = 0` are checked by [`verify`].
    pub fn from_parts(
        n: usize,
        field: Field,
        mut modules: Vec<Vec<BasisElement>>,
        diffs: Vec<Frame>,
    ) -> Result<Self> {
        if modules.is_empty() {
            modules.push(Vec::new());
        }
        let mut diffs = diffs;
        if diffs.is_empty() {
            diffs.push(Frame::new(0, modules[0].len()));
        }
        if diffs.len() != modules.len() {
            return Err(Error::InvalidComplex(format!(
                "{} modules but {} differentials",
                modules.len(),
                diffs.len()
            )));
        }
        let mut index = HashMap::new();
        for (h, basis) in modules.iter().enumerate() {
            for (pos, e) in basis.iter().enumerate() {
                if e.hdeg != h {
                    return Err(Error::InvalidComplex(format!(
                        "element {} stored in degree {h} claims degree {}",
                        e.id, e.hdeg
                    )));
                }
                if e.mdeg.nvars() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        found: e.mdeg.nvars(),
                    });
                }
                if index.insert(e.id, Slot::new(h, pos)).is_some() {
                    return Err(Error::InvalidComplex(format!("duplicate id {}", e.id)));
                }
            }
            let expected_rows = if h == 0 { 0 } else { modules[h - 1].len() };
            let frame = &diffs[h];
            if frame.nrows() != expected_rows || frame.ncols() != basis.len() {
                return Err(Error::InvalidComplex(format!(
                    "differential in degree {h} has shape {}x{}, expected {expected_rows}x{}",
                    frame.nrows(),
                    frame.ncols(),
                    basis.len()
                )));
            }
            if let Some((_, _, v)) = frame.entries().find(|(_, _, v)| !field.contains(v)) {
                return Err(Error::InvalidComplex(format!(
                    "coefficient {v} is not in field {field}"
                )));
            }
        }
        Ok(MultigradedComplex {
            n,
            field,
            modules,
            diffs,
            index,
        })
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Number of stored homological degrees (top degree + 1).
    pub fn len(&self) -> usize {
        self.modules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modules.iter().all(Vec::is_empty)
    }

    pub fn rank(&self, hdeg: usize) -> usize {
        self.modules.get(hdeg).map_or(0, Vec::len)
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.modules.iter().map(Vec::len).collect()
    }

    pub fn total_rank(&self) -> usize {
        self.modules.iter().map(Vec::len).sum()
    }

    pub fn basis(&self, hdeg: usize) -> &[BasisElement] {
        self.modules.get(hdeg).map_or(&[], Vec::as_slice)
    }

    pub fn modules(&self) -> &[Vec<BasisElement>] {
        &self.modules
    }

    pub fn element(&self, slot: Slot) -> &BasisElement {
        &self.modules[slot.hdeg][slot.pos]
    }

    pub fn mdeg(&self, slot: Slot) -> &Multidegree {
        &self.modules[slot.hdeg][slot.pos].mdeg
    }

    pub fn slot_of(&self, id: usize) -> Option<Slot> {
        self.index.get(&id).copied()
    }

    /// First slot with the given label, if any.
    pub fn find_label(&self, label: &Label) -> Option<Slot> {
        self.slots().find(|s| &self.element(*s).label == label)
    }

    pub fn slots(&self) -> impl Iterator<Item = Slot> + '_ {
        self.modules
            .iter()
            .enumerate()
            .flat_map(|(h, b)| (0..b.len()).map(move |p| Slot::new(h, p)))
    }

    /// Scalar frame of `d_hdeg`, for `hdeg >= 1`.
    pub fn frame(&self, hdeg: usize) -> Option<&Frame> {
        if hdeg == 0 {
            return None;
        }
        self.diffs.get(hdeg)
    }

    pub fn frames(&self) -> &[Frame] {
        &self.diffs
    }

    /// Scalar coefficient of `target` in `d(source)`.
    pub fn coeff(&self, target: Slot, source: Slot) -> Option<&Scalar> {
        if source.hdeg == 0 || target.hdeg + 1 != source.hdeg {
            return None;
        }
        self.diffs[source.hdeg].get(target.pos, source.pos)
    }

    /// Scalar frame column of `d(slot)`: `(target position, coefficient)`.
    pub fn d_frame(&self, slot: Slot) -> &[(usize, Scalar)] {
        if slot.hdeg == 0 {
            return &[];
        }
        self.diffs[slot.hdeg].column(slot.pos)
    }

    /// `d(slot)` with its monomial parts made explicit.
    pub fn d(&self, slot: Slot) -> Vec<Term> {
        let m = self.mdeg(slot);
        self.d_frame(slot)
            .iter()
            .map(|(r, c)| {
                let t = Slot::new(slot.hdeg - 1, *r);
                Term {
                    slot: t,
                    monomial: m
                        .checked_div(self.mdeg(t))
                        .unwrap_or_else(|| Multidegree::zero(self.n)),
                    coeff: c.clone(),
                }
            })
            .collect()
    }

    /// Whether degree 0 is a single element of multidegree 0.
    pub fn is_augmented(&self) -> bool {
        self.rank(0) == 1 && self.modules[0][0].mdeg.is_one()
    }

    /// The sub- or quotient frame on the elements satisfying `keep`; ids,
    /// labels and multidegrees are preserved.
    pub fn restrict(&self, keep: impl Fn(&BasisElement) -> bool) -> MultigradedComplex {
        let mut new_pos: Vec<Vec<Option<usize>>> = Vec::with_capacity(self.len());
        let mut modules = Vec::with_capacity(self.len());
        for basis in &self.modules {
            let mut map = Vec::with_capacity(basis.len());
            let mut kept = Vec::new();
            for e in basis {
                if keep(e) {
                    map.push(Some(kept.len()));
                    kept.push(e.clone());
                } else {
                    map.push(None);
                }
            }
            new_pos.push(map);
            modules.push(kept);
        }
        let mut diffs = Vec::with_capacity(self.len());
        for h in 0..self.len() {
            let rows = if h == 0 { 0 } else { modules[h - 1].len() };
            let mut f = Frame::new(rows, modules[h].len());
            if h > 0 {
                for (r, c, v) in self.diffs[h].entries() {
                    if let (Some(nr), Some(nc)) = (new_pos[h - 1][r], new_pos[h][c]) {
                        f.set(nr, nc, v.clone());
                    }
                }
            }
            diffs.push(f);
        }
        trim_trailing(&mut modules, &mut diffs);
        MultigradedComplex::from_parts(self.n, self.field, modules, diffs)
            .expect("restriction of a valid complex is valid")
    }

    /// Same complex with every coefficient reinterpreted in another field
    /// (only integer frames convert).
    pub fn with_field(&self, field: Field) -> Result<MultigradedComplex> {
        let mut diffs = Vec::with_capacity(self.diffs.len());
        for f in &self.diffs {
            let mut g = Frame::new(f.nrows(), f.ncols());
            for (r, c, v) in f.entries() {
                g.set(r, c, field.parse_scalar(&v.to_string()).map_err(|e| {
                    Error::InvalidComplex(format!("cannot convert coefficient: {e}"))
                })?);
            }
            diffs.push(g);
        }
        MultigradedComplex::from_parts(self.n, field, self.modules.clone(), diffs)
    }
}

pub(crate) fn trim_trailing(modules: &mut Vec<Vec<BasisElement>>, diffs: &mut Vec<Frame>) {
    while modules.len() > 1 && modules.last().is_some_and(Vec::is_empty) {
        modules.pop();
        diffs.pop();
    }
}

/// Accumulates basis elements and frame entries, then sorts each degree by
/// label and assigns sequential ids.
#[derive(Debug)]
pub struct ComplexBuilder {
    n: usize,
    field: Field,
    elems: Vec<Vec<(Multidegree, Label)>>,
    entries: Vec<(Slot, Slot, Scalar)>,
    sort: bool,
}

impl ComplexBuilder {
    pub fn new(n: usize, field: Field) -> Self {
        ComplexBuilder {
            n,
            field,
            elems: Vec::new(),
            entries: Vec::new(),
            sort: true,
        }
    }

    /// Keep insertion order instead of sorting by label.
    pub fn keep_order(mut self) -> Self {
        self.sort = false;
        self
    }

    pub fn add(&mut self, hdeg: usize, mdeg: Multidegree, label: Label) -> Slot {
        while self.elems.len() <= hdeg {
            self.elems.push(Vec::new());
        }
        self.elems[hdeg].push((mdeg, label));
        Slot::new(hdeg, self.elems[hdeg].len() - 1)
    }

    /// Adds `coeff` to the frame entry `c(target, source)`.
    pub fn entry(&mut self, target: Slot, source: Slot, coeff: Scalar) {
        assert_eq!(target.hdeg + 1, source.hdeg, "frame entry degrees");
        if !coeff.is_zero() {
            self.entries.push((target, source, coeff));
        }
    }

    pub fn build(self) -> Result<MultigradedComplex> {
        self.build_with_map().map(|(c, _)| c)
    }

    /// Also returns, per degree, the final position of each inserted element.
    pub fn build_with_map(self) -> Result<(MultigradedComplex, Vec<Vec<usize>>)> {
        let mut elems = self.elems;
        if elems.is_empty() {
            elems.push(Vec::new());
        }
        let mut perm: Vec<Vec<usize>> = Vec::with_capacity(elems.len());
        let mut modules = Vec::with_capacity(elems.len());
        let mut next_id = 0;
        for (h, list) in elems.iter().enumerate() {
            let mut order: Vec<usize> = (0..list.len()).collect();
            if self.sort {
                order.sort_by(|&a, &b| list[a].1.cmp(&list[b].1));
            }
            let mut inv = vec![0; list.len()];
            let mut basis = Vec::with_capacity(list.len());
            for (new, &old) in order.iter().enumerate() {
                inv[old] = new;
                basis.push(BasisElement {
                    id: next_id,
                    hdeg: h,
                    mdeg: list[old].0.clone(),
                    label: list[old].1.clone(),
                });
                next_id += 1;
            }
            perm.push(inv);
            modules.push(basis);
        }
        let mut diffs: Vec<Frame> = (0..modules.len())
            .map(|h| Frame::new(if h == 0 { 0 } else { modules[h - 1].len() }, modules[h].len()))
            .collect();
        for (t, s, c) in self.entries {
            let (r, col) = (perm[t.hdeg][t.pos], perm[s.hdeg][s.pos]);
            let cur = diffs[s.hdeg]
                .get(r, col)
                .cloned()
                .unwrap_or_else(|| self.field.zero());
            diffs[s.hdeg].set(r, col, cur + c);
        }
        let complex = MultigradedComplex::from_parts(self.n, self.field, modules, diffs)?;
        Ok((complex, perm))
    }
}

/// A violated complex invariant, identified by basis element ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// Nonzero entry whose source multidegree does not dominate the target's.
    Inhomogeneous { hdeg: usize, source: usize, target: usize },
    /// Nonzero scalar in `d_{hdeg-1} d_hdeg` from `source` to `target`.
    SquareNonzero {
        hdeg: usize,
        source: usize,
        target: usize,
        value: Scalar,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Inhomogeneous { hdeg, source, target } => write!(
                f,
                "inhomogeneous entry in d_{hdeg}: source #{source} -> target #{target}"
            ),
            Violation::SquareNonzero {
                hdeg,
                source,
                target,
                value,
            } => write!(
                f,
                "d^2 != 0 from degree {hdeg}: source #{source} -> target #{target} has coefficient {value}"
            ),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub violations: Vec<Violation>,
}

impl VerifyReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks homogeneity of every frame entry and `d^2 = 0` on scalars.
pub fn verify(c: &MultigradedComplex) -> VerifyReport {
    let mut violations = Vec::new();
    for h in 1..c.len() {
        for (r, col, _) in c.diffs[h].entries() {
            let s = Slot::new(h, col);
            let t = Slot::new(h - 1, r);
            if !c.mdeg(t).divides(c.mdeg(s)) {
                violations.push(Violation::Inhomogeneous {
                    hdeg: h,
                    source: c.element(s).id,
                    target: c.element(t).id,
                });
            }
        }
    }
    for h in 2..c.len() {
        for col in 0..c.rank(h) {
            let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
            for (mid, a) in c.diffs[h].column(col) {
                for (low, b) in c.diffs[h - 1].column(*mid) {
                    let e = acc.entry(*low).or_insert_with(|| c.field.zero());
                    *e += &(a * b);
                }
            }
            for (low, v) in acc {
                if !v.is_zero() {
                    violations.push(Violation::SquareNonzero {
                        hdeg: h,
                        source: c.modules[h][col].id,
                        target: c.modules[h - 2][low].id,
                        value: v,
                    });
                }
            }
        }
    }
    VerifyReport { violations }
}

/// Covering relations `f < e` whenever `f` is in the support of `d(e)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolutionPoset {
    pub nodes: Vec<usize>,
    /// `(lower id, upper id)`.
    pub covers: BTreeSet<(usize, usize)>,
}

impl ResolutionPoset {
    pub fn is_cover(&self, lower: usize, upper: usize) -> bool {
        self.covers.contains(&(lower, upper))
    }

    /// Reflexive-transitive closure of the covers.
    pub fn leq(&self, a: usize, b: usize) -> bool {
        if a == b {
            return true;
        }
        let mut below: HashMap<usize, Vec<usize>> = HashMap::new();
        for &(lo, hi) in &self.covers {
            below.entry(hi).or_default().push(lo);
        }
        let mut stack = vec![b];
        let mut seen = BTreeSet::new();
        while let Some(x) = stack.pop() {
            for &y in below.get(&x).map_or(&[][..], Vec::as_slice) {
                if y == a {
                    return true;
                }
                if seen.insert(y) {
                    stack.push(y);
                }
            }
        }
        false
    }
}

pub fn poset(c: &MultigradedComplex) -> ResolutionPoset {
    let nodes = c.slots().map(|s| c.element(s).id).collect();
    let mut covers = BTreeSet::new();
    for h in 1..c.len() {
        for (r, col, _) in c.diffs[h].entries() {
            covers.insert((c.modules[h - 1][r].id, c.modules[h][col].id));
        }
    }
    ResolutionPoset { nodes, covers }
}

/// Dimensions of the homology of the multidegree-`m` stratum, per degree.
///
/// The stratum in degree `i` has basis `x^(m - mdeg e) e` over the elements
/// with `mdeg e <= m`, and its differential is the restricted scalar frame.
pub fn stratum_homology(c: &MultigradedComplex, m: &Multidegree) -> Vec<usize> {
    let inside: Vec<Vec<usize>> = c
        .modules
        .iter()
        .map(|b| (0..b.len()).filter(|&p| b[p].mdeg.divides(m)).collect())
        .collect();
    let ranks: Vec<usize> = (0..c.len())
        .map(|h| {
            if h == 0 || inside[h].is_empty() || inside[h - 1].is_empty() {
                return 0;
            }
            let row_of: HashMap<usize, usize> =
                inside[h - 1].iter().enumerate().map(|(i, &p)| (p, i)).collect();
            let mut m = linalg::zeros(c.field, inside[h - 1].len(), inside[h].len());
            for (j, &col) in inside[h].iter().enumerate() {
                for (r, v) in c.diffs[h].column(col) {
                    if let Some(&i) = row_of.get(r) {
                        m[i][j] = v.clone();
                    }
                }
            }
            linalg::rank(&m, inside[h].len())
        })
        .collect();
    (0..c.len())
        .map(|h| {
            let next = ranks.get(h + 1).copied().unwrap_or(0);
            inside[h].len() - ranks[h] - next
        })
        .collect()
}
