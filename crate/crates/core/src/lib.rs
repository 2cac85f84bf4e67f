//! Multigraded free complexes attached to families of monomial ideals.

pub mod complex;
pub mod constructions;
pub mod dg;
pub mod error;
pub mod field;
pub mod koszul;
pub mod linalg;
pub mod monomial;
pub mod scarf;

pub use complex::{
    is_minimal, minimize, minimize_with_maps, poset, stratum_homology, support, verify,
    BasisElement, BettiTable, ComplexBuilder, Frame, Label, MultigradedComplex, Slot, Term,
};
pub use error::{Error, Result};
pub use field::{Field, Scalar};
pub use monomial::{lcm_gcd, minimalize, MonomialIdeal, Multidegree};
pub use dg::{
    degree_one_action, double_star_product, gen_taylor_product, squarefree_part, taylor_product,
    verify_dg, DGReport, ProductTable,
};
pub use koszul::{koszul_homology, CycleBasis, KoszulElement};
