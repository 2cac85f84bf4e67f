use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::MultigradedComplex;
use crate::monomial::Multidegree;

/// Ranks of a complex by homological degree and multidegree.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BettiTable {
    entries: BTreeMap<(usize, Multidegree), usize>,
}

impl BettiTable {
    pub fn from_complex(c: &MultigradedComplex) -> Self {
        let mut entries = BTreeMap::new();
        for (h, basis) in c.modules().iter().enumerate() {
            for e in basis {
                *entries.entry((h, e.mdeg.clone())).or_insert(0) += 1;
            }
        }
        BettiTable { entries }
    }

    pub fn from_entries(entries: impl IntoIterator<Item = ((usize, Multidegree), usize)>) -> Self {
        BettiTable {
            entries: entries.into_iter().filter(|(_, v)| *v > 0).collect(),
        }
    }

    pub fn get(&self, hdeg: usize, m: &Multidegree) -> usize {
        self.entries.get(&(hdeg, m.clone())).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> &BTreeMap<(usize, Multidegree), usize> {
        &self.entries
    }

    /// Total ranks per homological degree, trailing zeros dropped.
    pub fn totals(&self) -> Vec<usize> {
        let top = self.entries.keys().map(|(h, _)| *h).max();
        let mut out = vec![0; top.map_or(0, |t| t + 1)];
        for ((h, _), v) in &self.entries {
            out[*h] += v;
        }
        out
    }

    /// `(hdeg, total degree) -> rank`.
    pub fn graded(&self) -> BTreeMap<(usize, u32), usize> {
        let mut out = BTreeMap::new();
        for ((h, m), v) in &self.entries {
            *out.entry((*h, m.total_degree())).or_insert(0) += v;
        }
        out
    }

    /// Staircase layout: column `i` is the homological degree, row `j` holds
    /// the ranks in total degree `i + j`.
    pub fn render(&self) -> String {
        let totals = self.totals();
        let graded = self.graded();
        let cols = totals.len().max(1);
        let rows: Vec<u32> = {
            let mut r: Vec<u32> = graded
                .keys()
                .map(|(h, d)| d.saturating_sub(*h as u32))
                .collect();
            r.sort_unstable();
            r.dedup();
            if r.is_empty() {
                r.push(0);
            }
            (r[0]..=*r.last().unwrap()).collect()
        };
        let cell = |h: usize, row: u32| -> String {
            graded
                .get(&(h, row + h as u32))
                .map_or_else(|| ".".to_string(), usize::to_string)
        };
        let mut width = vec![1usize; cols];
        for (h, w) in width.iter_mut().enumerate() {
            *w = (*w)
                .max(h.to_string().len())
                .max(totals.get(h).map_or(1, |t| t.to_string().len()));
            for &r in &rows {
                *w = (*w).max(cell(h, r).len());
            }
        }
        let head = rows
            .iter()
            .map(|r| r.to_string().len() + 1)
            .max()
            .unwrap_or(2)
            .max("total:".len());
        let mut out = String::new();
        let line = |out: &mut String, lead: &str, cells: Vec<String>| {
            let _ = write!(out, "{lead:>head$}");
            for (c, w) in cells.iter().zip(&width) {
                let _ = write!(out, " {c:>w$}");
            }
            out.push('\n');
        };
        line(&mut out, "", (0..cols).map(|h| h.to_string()).collect());
        line(
            &mut out,
            "total:",
            (0..cols)
                .map(|h| totals.get(h).copied().unwrap_or(0).to_string())
                .collect(),
        );
        for &r in &rows {
            line(
                &mut out,
                &format!("{r}:"),
                (0..cols).map(|h| cell(h, r)).collect(),
            );
        }
        out
    }

    /// One line per nonzero entry, sorted by degree then multidegree.
    pub fn render_multigraded(&self) -> String {
        let mut out = String::new();
        for ((h, m), v) in &self.entries {
            let exps: Vec<String> = m.exps().iter().map(u32::to_string).collect();
            let _ = writeln!(out, "{h} ({}) {m}: {v}", exps.join(","));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn staircase_of_koszul_on_two() {
        let t = BettiTable::from_entries([
            ((0, Multidegree::zero(2)), 1),
            ((1, Multidegree::var(2, 0)), 1),
            ((1, Multidegree::var(2, 1)), 1),
            ((2, Multidegree::new(vec![1, 1])), 1),
        ]);
        assert_eq!(t.totals(), vec![1, 2, 1]);
        assert_eq!(t.render(), "       0 1 2\ntotal: 1 2 1\n    0: 1 2 1\n");
    }
}
