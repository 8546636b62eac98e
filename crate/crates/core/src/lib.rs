//! Complete non-ambiguous trees (CNATs) and their matrices.
//!
//! * [`matrix`], [`cnm`]: the 0/1 grid and the four CNAT axioms.
//! * [`permutation`], [`lsubset`], [`determinant`]: leaf matrices, the
//!   uniqueness criterion and the determinant.
//! * [`enumerate`]: exhaustive generation, `T(n)`, determinant parity,
//!   `b(n,k)` and the leaf-matrix extension.
//! * [`bijections`]: fully-tiered trees, the permutation code of
//!   upper-diagonal trees and the tree-like tableau correspondence.
//! * [`sequences`]: `f(n,k)` by recurrence, simplified recurrence, closed form
//!   and direct count; `a(n)`; binomial transforms.
//! * [`reduce`]: row/column swap reduction to upper-diagonal form.
//! * [`verify`]: golden fixtures and the check suites behind `cnat verify`.

pub mod bijections;
pub mod cnm;
pub mod determinant;
pub mod enumerate;
pub mod lsubset;
pub mod matrix;
pub mod permutation;
pub mod reduce;
pub mod sequences;
pub mod verify;

pub use cnm::{validate_cnm, Axiom, Cnm, ValidationError, VertexKind, Violation};
pub use determinant::determinant_sign;
pub use enumerate::{
    brute_force_cnms, count_all_cnats, det_parity_counts, enumerate_cnats_with_leaf_matrix,
    extend_leaf_matrix, CountTable, SurveyOptions,
};
pub use lsubset::{is_unique_leaf_matrix, l_subset, LSubset};
pub use matrix::{parse_matrix, BinaryMatrix, Cell, ParseMatrixError};
pub use permutation::Permutation;
pub use reduce::{reduce_to_upper_diagonal, Swap, SwapKind, SwapTrace};
