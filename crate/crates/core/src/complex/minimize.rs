//! Gaussian cancellation of unit frame entries.

use std::collections::BTreeMap;

use super::{trim_trailing, BasisElement, BettiTable, Frame, MultigradedComplex, Slot};
use crate::field::{Field, Scalar};

/// Degree-preserving map between two complexes given by its scalar frame:
/// `images[h][pos]` lists `(target position, coefficient)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    pub images: Vec<Vec<Vec<(usize, Scalar)>>>,
}

impl ChainMap {
    pub fn image(&self, slot: Slot) -> &[(usize, Scalar)] {
        self.images
            .get(slot.hdeg)
            .and_then(|d| d.get(slot.pos))
            .map_or(&[], Vec::as_slice)
    }
}

/// A minimal complex together with the comparison maps to the input.
#[derive(Clone, Debug)]
pub struct Minimization {
    pub complex: MultigradedComplex,
    /// Input to minimal; annihilates the cancelled pairs.
    pub projection: ChainMap,
    /// Minimal to input; `projection ∘ inclusion` is the identity.
    pub inclusion: ChainMap,
}

/// True iff no nonzero frame entry joins two elements of equal multidegree.
pub fn is_minimal(c: &MultigradedComplex) -> bool {
    (1..c.len()).all(|h| {
        c.frames()[h]
            .entries()
            .all(|(r, col, _)| c.basis(h - 1)[r].mdeg != c.basis(h)[col].mdeg)
    })
}

pub fn minimize(c: &MultigradedComplex) -> (MultigradedComplex, BettiTable) {
    let m = Work::new(c, false).run();
    let betti = BettiTable::from_complex(&m.complex);
    (m.complex, betti)
}

pub fn minimize_with_maps(c: &MultigradedComplex) -> Minimization {
    Work::new(c, true).run()
}

type Combination = BTreeMap<usize, Scalar>;

struct Work<'a> {
    c: &'a MultigradedComplex,
    field: Field,
    alive: Vec<Vec<bool>>,
    /// Dense frames, `d[h][target][source]`.
    d: Vec<Vec<Vec<Scalar>>>,
    /// `proj[h][x]`: image of input element `x` in terms of surviving ones.
    proj: Option<Vec<Vec<Combination>>>,
    /// `incl[h][y]`: image of surviving element `y` in terms of input ones.
    incl: Option<Vec<Vec<Combination>>>,
}

fn identity(c: &MultigradedComplex, field: Field) -> Vec<Vec<Combination>> {
    c.modules()
        .iter()
        .map(|b| {
            (0..b.len())
                .map(|i| BTreeMap::from([(i, field.one())]))
                .collect()
        })
        .collect()
}

fn add_scaled(target: &mut Combination, key: usize, value: Scalar) {
    if value.is_zero() {
        return;
    }
    match target.get_mut(&key) {
        Some(v) => {
            *v += &value;
            if v.is_zero() {
                target.remove(&key);
            }
        }
        None => {
            target.insert(key, value);
        }
    }
}

impl<'a> Work<'a> {
    fn new(c: &'a MultigradedComplex, maps: bool) -> Self {
        let field = c.field();
        let d = (0..c.len())
            .map(|h| {
                if h == 0 {
                    Vec::new()
                } else {
                    c.frames()[h].to_dense(field)
                }
            })
            .collect();
        Work {
            c,
            field,
            alive: c.modules().iter().map(|b| vec![true; b.len()]).collect(),
            d,
            proj: maps.then(|| identity(c, field)),
            incl: maps.then(|| identity(c, field)),
        }
    }

    fn run(mut self) -> Minimization {
        for h in 1..self.c.len() {
            let src = self.c.basis(h);
            let tgt = self.c.basis(h - 1);
            let mut candidates = Vec::new();
            for (t, te) in tgt.iter().enumerate() {
                for (s, se) in src.iter().enumerate() {
                    if te.mdeg == se.mdeg {
                        candidates.push((t, s));
                    }
                }
            }
            // fill-in can revive earlier entries, so rescan after each pivot
            loop {
                candidates.retain(|&(t, s)| self.alive[h - 1][t] && self.alive[h][s]);
                let Some(&(t, s)) = candidates.iter().find(|&&(t, s)| !self.d[h][t][s].is_zero())
                else {
                    break;
                };
                self.cancel(h, t, s);
            }
        }
        self.finish()
    }

    fn cancel(&mut self, h: usize, t: usize, s: usize) {
        let inv = self.d[h][t][s].inv().expect("pivot is nonzero");
        let col_s: Vec<(usize, Scalar)> = (0..self.d[h].len())
            .filter(|&r| r != t && self.alive[h - 1][r] && !self.d[h][r][s].is_zero())
            .map(|r| (r, self.d[h][r][s].clone()))
            .collect();
        let row_t: Vec<(usize, Scalar)> = (0..self.d[h][t].len())
            .filter(|&k| k != s && self.alive[h][k] && !self.d[h][t][k].is_zero())
            .map(|k| (k, &self.d[h][t][k] * &inv))
            .collect();
        for (r, gamma) in &col_s {
            for (k, beta) in &row_t {
                let delta = gamma * beta;
                self.d[h][*r][*k] -= &delta;
            }
        }

        if let Some(proj) = self.proj.as_mut() {
            for comb in proj[h].iter_mut() {
                comb.remove(&s);
            }
            for comb in proj[h - 1].iter_mut() {
                if let Some(c) = comb.remove(&t) {
                    let scale = -&(&c * &inv);
                    for (r, gamma) in &col_s {
                        add_scaled(comb, *r, &scale * gamma);
                    }
                }
            }
        }
        if let Some(incl) = self.incl.as_mut() {
            let base = std::mem::take(&mut incl[h][s]);
            for (k, beta) in &row_t {
                for (x, v) in &base {
                    add_scaled(&mut incl[h][*k], *x, -&(beta * v));
                }
            }
            incl[h - 1][t].clear();
        }

        self.alive[h][s] = false;
        self.alive[h - 1][t] = false;
        for row in self.d[h].iter_mut() {
            row[s] = self.field.zero();
        }
        for x in self.d[h][t].iter_mut() {
            *x = self.field.zero();
        }
    }

    fn finish(self) -> Minimization {
        let c = self.c;
        let new_pos: Vec<Vec<Option<usize>>> = self
            .alive
            .iter()
            .map(|a| {
                let mut next = 0;
                a.iter()
                    .map(|&keep| {
                        keep.then(|| {
                            next += 1;
                            next - 1
                        })
                    })
                    .collect()
            })
            .collect();
        let mut modules: Vec<Vec<BasisElement>> = c
            .modules()
            .iter()
            .zip(&self.alive)
            .map(|(b, a)| {
                b.iter()
                    .zip(a)
                    .filter(|(_, &k)| k)
                    .map(|(e, _)| e.clone())
                    .collect()
            })
            .collect();
        let mut diffs = Vec::with_capacity(c.len());
        for h in 0..c.len() {
            let rows = if h == 0 { 0 } else { modules[h - 1].len() };
            let mut f = Frame::new(rows, modules[h].len());
            if h > 0 {
                for (t, row) in self.d[h].iter().enumerate() {
                    let Some(nt) = new_pos[h - 1][t] else { continue };
                    for (s, v) in row.iter().enumerate() {
                        if let Some(ns) = new_pos[h][s] {
                            if !v.is_zero() {
                                f.set(nt, ns, v.clone());
                            }
                        }
                    }
                }
            }
            diffs.push(f);
        }
        let remap = |comb: &Combination, hdeg: usize, into_new: bool| -> Vec<(usize, Scalar)> {
            comb.iter()
                .map(|(k, v)| {
                    let k = if into_new {
                        new_pos[hdeg][*k].expect("projection lands on survivors")
                    } else {
                        *k
                    };
                    (k, v.clone())
                })
                .collect()
        };
        let projection = ChainMap {
            images: self.proj.as_ref().map_or_else(Vec::new, |p| {
                p.iter()
                    .enumerate()
                    .map(|(h, d)| d.iter().map(|comb| remap(comb, h, true)).collect())
                    .collect()
            }),
        };
        let inclusion = ChainMap {
            images: self.incl.as_ref().map_or_else(Vec::new, |inc| {
                inc.iter()
                    .enumerate()
                    .map(|(h, d)| {
                        d.iter()
                            .zip(&self.alive[h])
                            .filter(|(_, &k)| k)
                            .map(|(comb, _)| remap(comb, h, false))
                            .collect()
                    })
                    .collect()
            }),
        };
        trim_trailing(&mut modules, &mut diffs);
        let complex = MultigradedComplex::from_parts(c.nvars(), c.field(), modules, diffs)
            .expect("cancellation preserves shape");
        Minimization {
            complex,
            projection,
            inclusion,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::verify;
    use crate::constructions::{taylor, taylor_on_generators};
    use crate::monomial::{MonomialIdeal, Multidegree};

    fn ideal(n: usize, rows: &[&[u32]]) -> MonomialIdeal {
        MonomialIdeal::from_exponents(n, rows).unwrap()
    }

    #[test]
    fn minimality_examples() {
        assert!(is_minimal(&taylor(&ideal(3, &[&[1, 1, 0], &[0, 1, 1]])).unwrap()));
        let gens = [Multidegree::new(vec![1, 0]), Multidegree::new(vec![1, 1])];
        assert!(!is_minimal(&taylor_on_generators(2, &gens).unwrap()));
    }

    #[test]
    fn koszul_is_already_minimal() {
        let t = taylor(&ideal(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])).unwrap();
        let (m, betti) = minimize(&t);
        assert_eq!(m, t);
        assert_eq!(betti.totals(), vec![1, 3, 3, 1]);
    }

    #[test]
    fn cancellation_on_path_ideal() {
        let i = ideal(4, &[&[1, 1, 0, 0], &[0, 1, 1, 0], &[0, 0, 1, 1]]);
        let t = taylor(&i).unwrap();
        assert!(!is_minimal(&t));
        let m = minimize_with_maps(&t);
        assert!(verify(&m.complex).is_valid());
        assert!(is_minimal(&m.complex));
        assert_eq!(m.complex.ranks(), vec![1, 3, 2]);
        // projection after inclusion is the identity
        for s in m.complex.slots() {
            let mut acc: Combination = BTreeMap::new();
            for (x, a) in m.inclusion.image(s) {
                for (y, b) in m.projection.image(Slot::new(s.hdeg, *x)) {
                    add_scaled(&mut acc, *y, a * b);
                }
            }
            assert_eq!(acc, BTreeMap::from([(s.pos, t.field().one())]));
        }
        let again = minimize(&m.complex).0;
        assert_eq!(again, m.complex);
    }
}
