//! Dense exact linear algebra: row reduction, rank, kernels, solving, and an
//! incremental echelon basis for span and independence queries.

use crate::field::{Field, Scalar};

/// Row-major dense matrix.
pub type Matrix = Vec<Vec<Scalar>>;

pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
    vec![vec![field.zero(); cols]; rows]
}

/// Reduced row echelon form. Returns the nonzero rows and their pivot columns.
pub fn rref(mut rows: Matrix, ncols: usize) -> (Matrix, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv().expect("pivot is nonzero");
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !y.is_zero() {
                    *x -= &(&factor * y);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

pub fn rank(rows: &Matrix, ncols: usize) -> usize {
    rref(rows.clone(), ncols).1.len()
}

/// Basis of `{x : A x = 0}` for `A` with `ncols` columns, one vector per free
/// column in increasing order.
pub fn kernel(field: Field, rows: &Matrix, ncols: usize) -> Vec<Vec<Scalar>> {
    let (red, pivots) = rref(rows.clone(), ncols);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..ncols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut x = vec![field.zero(); ncols];
            x[f] = field.one();
            for (row, &p) in red.iter().zip(&pivots) {
                if !row[f].is_zero() {
                    x[p] = -&row[f];
                }
            }
            x
        })
        .collect()
}

/// Some solution of `A x = b`, if one exists.
pub fn solve(field: Field, rows: &Matrix, ncols: usize, b: &[Scalar]) -> Option<Vec<Scalar>> {
    assert_eq!(rows.len(), b.len(), "right-hand side length");
    let aug: Matrix = rows
        .iter()
        .zip(b)
        .map(|(row, x)| {
            let mut r = row.clone();
            r.push(x.clone());
            r
        })
        .collect();
    let (red, pivots) = rref(aug, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![field.zero(); ncols];
    for (row, &p) in red.iter().zip(&pivots) {
        x[p] = row[ncols].clone();
    }
    Some(x)
}

/// `A x` for a row-major `A`.
pub fn apply(field: Field, rows: &Matrix, x: &[Scalar]) -> Vec<Scalar> {
    rows.iter()
        .map(|row| {
            let mut acc = field.zero();
            for (a, b) in row.iter().zip(x) {
                if !a.is_zero() && !b.is_zero() {
                    acc += &(a * b);
                }
            }
            acc
        })
        .collect()
}

/// Incrementally maintained reduced echelon basis of a subspace of `k^dim`.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Field,
    dim: usize,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(field: Field, dim: usize) -> Self {
        Echelon {
            field,
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Residual of `v` after eliminating every pivot of the basis.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.dim, "vector length");
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let factor = v[p].clone();
            for (x, y) in v.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &(&factor * y);
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(Scalar::is_zero)
    }

    /// Adds `v`; returns whether the rank grew.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[p].inv().expect("pivot is nonzero");
        for x in r.iter_mut() {
            *x *= &inv;
        }
        for row in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let factor = row[p].clone();
            for (x, y) in row.iter_mut().zip(&r) {
                if !y.is_zero() {
                    *x -= &(&factor * y);
                }
            }
        }
        self.rows.push(r);
        self.pivots.push(p);
        true
    }

    pub fn field(&self) -> Field {
        self.field
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(field: Field, rows: &[&[i64]]) -> Matrix {
        rows.iter()
            .map(|r| r.iter().map(|&x| field.from_i64(x)).collect())
            .collect()
    }

    #[test]
    fn rank_and_kernel() {
        let q = Field::Rational;
        let a = m(q, &[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&a, 3), 2);
        let ker = kernel(q, &a, 3);
        assert_eq!(ker.len(), 1);
        assert!(apply(q, &a, &ker[0]).iter().all(Scalar::is_zero));
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let q = Field::Rational;
        let a = m(q, &[&[1, 1], &[1, -1]]);
        let b: Vec<Scalar> = [3, 1].iter().map(|&x| q.from_i64(x)).collect();
        let x = solve(q, &a, 2, &b).unwrap();
        assert_eq!(x, vec![q.from_i64(2), q.from_i64(1)]);
        let a = m(q, &[&[1, 1], &[2, 2]]);
        assert!(solve(q, &a, 2, &b).is_none());
    }

    #[test]
    fn echelon_tracks_span() {
        let f = Field::Prime(5);
        let mut e = Echelon::new(f, 3);
        assert!(e.insert(&[f.from_i64(1), f.from_i64(2), f.from_i64(0)]));
        assert!(e.insert(&[f.from_i64(0), f.from_i64(1), f.from_i64(1)]));
        assert!(!e.insert(&[f.from_i64(1), f.from_i64(3), f.from_i64(1)]));
        assert!(e.contains(&[f.from_i64(2), f.from_i64(4), f.from_i64(0)]));
        assert!(!e.contains(&[f.from_i64(0), f.from_i64(0), f.from_i64(1)]));
        assert_eq!(e.rank(), 2);
    }
}
