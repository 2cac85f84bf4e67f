//! Exponent-vector monomials and monomial ideals.
//!
//! A [`Multidegree`] is an exponent vector in N^n. It doubles as the monic
//! monomial with those exponents; no coefficient lives at this level.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// Exponent vector; lexicographic `Ord` gives the canonical storage order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Multidegree(Vec<u32>);

impl Multidegree {
    pub fn new(exps: Vec<u32>) -> Self {
        Multidegree(exps)
    }

    pub fn zero(n: usize) -> Self {
        Multidegree(vec![0; n])
    }

    /// The variable `x_i` (0-based index).
    pub fn var(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        Multidegree(v)
    }

    /// Squarefree multidegree with ones at the given 0-based positions.
    pub fn squarefree(n: usize, support: &[usize]) -> Self {
        let mut v = vec![0; n];
        for &i in support {
            v[i] = 1;
        }
        Multidegree(v)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn is_squarefree(&self) -> bool {
        self.0.iter().all(|&e| e <= 1)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// 0-based indices of variables with positive exponent.
    pub fn support(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| self.0[i] > 0).collect()
    }

    /// Componentwise `self <= other`, i.e. `self` divides `other`.
    pub fn divides(&self, other: &Multidegree) -> bool {
        debug_assert_eq!(self.0.len(), other.0.len());
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn lcm(&self, other: &Multidegree) -> Multidegree {
        Multidegree(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn gcd(&self, other: &Multidegree) -> Multidegree {
        Multidegree(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    /// Product of monomials (sum of exponent vectors).
    pub fn mul(&self, other: &Multidegree) -> Multidegree {
        Multidegree(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Quotient `self / other`, if `other` divides `self`.
    pub fn checked_div(&self, other: &Multidegree) -> Option<Multidegree> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Multidegree)
    }

    /// Componentwise `min(e, 1)`.
    pub fn radical(&self) -> Multidegree {
        Multidegree(self.0.iter().map(|&e| e.min(1)).collect())
    }
}

impl fmt::Display for Multidegree {
    /// Monomial notation, e.g. `x1*x2^2`; the zero vector prints as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{}", i + 1)?;
            } else {
                write!(f, "x{}^{}", i + 1, e)?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

fn check_len(a: &Multidegree, b: &Multidegree) -> Result<()> {
    if a.nvars() != b.nvars() {
        return Err(Error::DimensionMismatch {
            expected: a.nvars(),
            found: b.nvars(),
        });
    }
    Ok(())
}

/// Componentwise `(max, min)` of two multidegrees.
pub fn lcm_gcd(a: &Multidegree, b: &Multidegree) -> Result<(Multidegree, Multidegree)> {
    check_len(a, b)?;
    Ok((a.lcm(b), a.gcd(b)))
}

/// Monomial ideal stored by its minimal generating set `G(I)`, sorted in
/// decreasing lex order. The zero ideal has no generators; the unit ideal has
/// the single generator `1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialIdeal {
    n: usize,
    gens: Vec<Multidegree>,
}

impl MonomialIdeal {
    /// Builds the ideal generated by `gens`, keeping only minimal elements.
    pub fn new(n: usize, gens: impl IntoIterator<Item = Multidegree>) -> Result<Self> {
        let gens: Vec<Multidegree> = gens.into_iter().collect();
        for g in &gens {
            if g.nvars() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: g.nvars(),
                });
            }
        }
        Ok(minimalize(n, gens))
    }

    /// Convenience constructor from raw exponent rows.
    pub fn from_exponents(n: usize, rows: &[&[u32]]) -> Result<Self> {
        Self::new(n, rows.iter().map(|r| Multidegree::new(r.to_vec())))
    }

    pub fn zero(n: usize) -> Self {
        MonomialIdeal { n, gens: Vec::new() }
    }

    pub fn unit(n: usize) -> Self {
        MonomialIdeal {
            n,
            gens: vec![Multidegree::zero(n)],
        }
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn gens(&self) -> &[Multidegree] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.gens.iter().any(Multidegree::is_one)
    }

    pub fn is_squarefree(&self) -> bool {
        self.gens.iter().all(Multidegree::is_squarefree)
    }

    /// Whether some generator divides `m`.
    pub fn contains(&self, m: &Multidegree) -> bool {
        self.gens.iter().any(|g| g.divides(m))
    }

    pub fn sum(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        self.check_compatible(other)?;
        Ok(minimalize(
            self.n,
            self.gens.iter().chain(&other.gens).cloned().collect(),
        ))
    }

    pub fn intersection(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        self.check_compatible(other)?;
        let lcms = self
            .gens
            .iter()
            .flat_map(|u| other.gens.iter().map(move |v| u.lcm(v)))
            .collect();
        Ok(minimalize(self.n, lcms))
    }

    /// lcm of all generators (`1` for the zero ideal).
    pub fn lcm_all(&self) -> Multidegree {
        self.gens
            .iter()
            .fold(Multidegree::zero(self.n), |acc, g| acc.lcm(g))
    }

    /// All lcms of subsets of `G(I)`, including the empty subset (`1`),
    /// sorted lexicographically.
    pub fn lcm_lattice(&self) -> Vec<Multidegree> {
        lcm_closure(
            std::iter::once(Multidegree::zero(self.n)).chain(self.gens.iter().cloned()),
        )
    }

    fn check_compatible(&self, other: &MonomialIdeal) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, g) in self.gens.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ")")
    }
}

/// Keeps exactly the divisibility-minimal elements, deduplicated and sorted
/// in decreasing lex order (`x1 > x2 > ...`), so `x1x2` precedes `x2x3`.
pub fn minimalize(n: usize, gens: Vec<Multidegree>) -> MonomialIdeal {
    let unique: BTreeSet<Multidegree> = gens.into_iter().collect();
    let unique: Vec<Multidegree> = unique.into_iter().rev().collect();
    let gens = unique
        .iter()
        .filter(|g| !unique.iter().any(|h| h != *g && h.divides(g)))
        .cloned()
        .collect();
    MonomialIdeal { n, gens }
}

/// Closure of a set of multidegrees under pairwise lcm, sorted.
pub fn lcm_closure(seed: impl IntoIterator<Item = Multidegree>) -> Vec<Multidegree> {
    let mut all: BTreeSet<Multidegree> = seed.into_iter().collect();
    let mut frontier: Vec<Multidegree> = all.iter().cloned().collect();
    while !frontier.is_empty() {
        let base: Vec<Multidegree> = all.iter().cloned().collect();
        let mut next = Vec::new();
        for a in &frontier {
            for b in &base {
                let l = a.lcm(b);
                if !all.contains(&l) {
                    all.insert(l.clone());
                    next.push(l);
                }
            }
        }
        frontier = next;
    }
    all.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn md(v: &[u32]) -> Multidegree {
        Multidegree::new(v.to_vec())
    }

    #[test]
    fn lcm_gcd_examples() {
        let (l, g) = lcm_gcd(&md(&[1, 1, 0]), &md(&[0, 1, 1])).unwrap();
        assert_eq!((l, g), (md(&[1, 1, 1]), md(&[0, 1, 0])));
        let m = md(&[2, 0, 1]);
        assert_eq!(lcm_gcd(&m, &m).unwrap(), (m.clone(), m));
        let (l, g) = lcm_gcd(&md(&[1, 1, 0, 0]), &md(&[0, 0, 1, 1])).unwrap();
        assert_eq!((l, g), (md(&[1, 1, 1, 1]), md(&[0, 0, 0, 0])));
        assert!(lcm_gcd(&md(&[1]), &md(&[1, 0])).is_err());
    }

    #[test]
    fn minimalize_examples() {
        let i = minimalize(2, vec![md(&[1, 0]), md(&[1, 1])]);
        assert_eq!(i.gens(), &[md(&[1, 0])]);
        assert!(minimalize(3, vec![]).is_zero());
        let i = minimalize(3, vec![md(&[1, 1, 0]), md(&[0, 1, 1]), md(&[1, 1, 1])]);
        assert_eq!(i.gens(), &[md(&[1, 1, 0]), md(&[0, 1, 1])]);
        let again = minimalize(3, i.gens().to_vec());
        assert_eq!(again, i);
    }

    #[test]
    fn sum_and_intersection() {
        let i = MonomialIdeal::from_exponents(3, &[&[1, 1, 0]]).unwrap();
        let j = MonomialIdeal::from_exponents(3, &[&[0, 1, 1]]).unwrap();
        assert_eq!(i.intersection(&j).unwrap().gens(), &[md(&[1, 1, 1])]);
        let a = MonomialIdeal::from_exponents(2, &[&[1, 0]]).unwrap();
        let b = MonomialIdeal::from_exponents(2, &[&[0, 1]]).unwrap();
        assert_eq!(a.sum(&b).unwrap().len(), 2);
        assert_eq!(a.intersection(&b).unwrap().gens(), &[md(&[1, 1])]);
        assert!(a.sum(&i).is_err());
    }

    #[test]
    fn contains_and_special_ideals() {
        let i = MonomialIdeal::from_exponents(3, &[&[1, 1, 0]]).unwrap();
        assert!(i.contains(&md(&[1, 1, 1])));
        assert!(!i.contains(&md(&[1, 0, 1])));
        assert!(!MonomialIdeal::zero(3).contains(&md(&[5, 5, 5])));
        let u = MonomialIdeal::unit(3);
        assert!(u.is_unit() && u.contains(&md(&[0, 0, 0])));
    }

    #[test]
    fn display_uses_monomial_notation() {
        assert_eq!(md(&[1, 2, 0]).to_string(), "x1*x2^2");
        assert_eq!(md(&[0, 0]).to_string(), "1");
    }

    #[test]
    fn lcm_lattice_of_two_generators() {
        let i = MonomialIdeal::from_exponents(3, &[&[1, 1, 0], &[0, 1, 1]]).unwrap();
        assert_eq!(
            i.lcm_lattice(),
            vec![md(&[0, 0, 0]), md(&[0, 1, 1]), md(&[1, 1, 0]), md(&[1, 1, 1])]
        );
    }
}
