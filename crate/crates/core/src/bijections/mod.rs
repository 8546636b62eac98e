//! Bijections around upper-diagonal CNMs (those whose leaf matrix is the
//! anti-diagonal): fully-tiered trees and their permutation code, and
//! tree-like tableaux.

pub mod ftt;
pub mod tableau;

pub use ftt::{
    all_ftts, all_ud_ftts, ftt_weight, is_ud_ftt, labelled_trees, permutation_to_udftt,
    removal_code, udftt_to_permutation, FttError, FullyTieredTree, RemovalCode, UdFtt,
};
pub use tableau::{
    enumerate_tlts, occupied_corners, second_diagonal_vertices, tlt_to_udcnm, udcnm_to_tlt,
    udcnm_to_tlt_embedding, TableauEmbedding, TableauError, TreeLikeTableau, TLT_ENUMERATION_MAX,
};

use crate::cnm::Cnm;
use crate::enumerate::enumerate_cnats_with_leaf_matrix;
use crate::permutation::Permutation;

/// All upper-diagonal CNMs of size `n`, sorted.
pub fn ud_cnms(n: usize) -> Vec<Cnm> {
    enumerate_cnats_with_leaf_matrix(&Permutation::reversal(n))
}
