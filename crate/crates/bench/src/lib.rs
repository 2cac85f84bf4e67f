//! Fixture ideals shared by the benchmarks.

use monres::{MonomialIdeal, Multidegree};

/// Path ideal `(x1x2, x2x3, ..., x_{n-1}x_n)`.
pub fn path_ideal(n: usize) -> MonomialIdeal {
    let gens = (0..n - 1).map(|i| Multidegree::squarefree(n, &[i, i + 1]));
    MonomialIdeal::new(n, gens).expect("path ideal")
}

/// Cycle ideal `(x1x2, ..., x_{n-1}x_n, x_n x1)`.
pub fn cycle_ideal(n: usize) -> MonomialIdeal {
    let gens = (0..n).map(|i| Multidegree::squarefree(n, &[i, (i + 1) % n]));
    MonomialIdeal::new(n, gens).expect("cycle ideal")
}
