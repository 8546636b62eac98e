use cnat_core::bijections::{
    permutation_to_udftt, removal_code, tlt_to_udcnm, ud_cnms, udcnm_to_tlt, udftt_to_permutation,
    RemovalCode,
};
use cnat_core::enumerate::count_with_leaf_matrix;
use cnat_core::reduce::replay;
use cnat_core::sequences::{f_closed, f_rec, f_simple};
use cnat_core::{
    determinant_sign, enumerate_cnats_with_leaf_matrix, reduce_to_upper_diagonal, validate_cnm,
    BinaryMatrix, Permutation, SwapTrace,
};
use proptest::prelude::*;

fn permutation(max: usize) -> impl Strategy<Value = Permutation> {
    (1..=max)
        .prop_flat_map(|n| Just((0..n).collect::<Vec<_>>()).prop_shuffle())
        .prop_map(|map| Permutation::from_map(map).expect("shuffle of 0..n"))
}

/// An irreducible permutation together with one of its CNMs.
fn cnm(max: usize) -> impl Strategy<Value = cnat_core::Cnm> {
    permutation(max)
        .prop_filter("irreducible", Permutation::is_irreducible)
        .prop_flat_map(|p| {
            let all = enumerate_cnats_with_leaf_matrix(&p);
            (0..all.len()).prop_map(move |i| all[i].clone())
        })
}

fn ud_cnm(max: usize) -> impl Strategy<Value = cnat_core::Cnm> {
    (2..=max).prop_flat_map(|n| {
        let all = ud_cnms(n);
        (0..all.len()).prop_map(move |i| all[i].clone())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn leaf_matrix_fibres_are_consistent(p in permutation(7)) {
        let all = enumerate_cnats_with_leaf_matrix(&p);
        prop_assert_eq!(all.len() as u64, count_with_leaf_matrix(&p));
        prop_assert_eq!(all.is_empty(), !p.is_irreducible());
        for c in &all {
            prop_assert_eq!(c.associated_permutation(), p.clone());
            prop_assert!(validate_cnm(c.matrix().clone()).is_ok());
            prop_assert_eq!(determinant_sign(c).abs(), 1);
        }
    }

    #[test]
    fn matrix_text_round_trips(c in cnm(7)) {
        let text = c.matrix().to_text();
        let back: BinaryMatrix = text.parse().unwrap();
        prop_assert_eq!(&back, c.matrix());
    }

    #[test]
    fn reduction_trace_replays(c in cnm(7)) {
        let (trace, out) = reduce_to_upper_diagonal(&c).unwrap();
        prop_assert!(out.is_upper_diagonal());
        let parsed: SwapTrace = trace.to_string().parse().unwrap();
        prop_assert_eq!(&parsed, &trace);
        prop_assert_eq!(replay(c.matrix(), &parsed).unwrap(), out);
    }

    #[test]
    fn udftt_code_round_trips(p in permutation(9)) {
        let t = permutation_to_udftt(&p);
        prop_assert_eq!(t.size(), p.len() + 1);
        prop_assert_eq!(udftt_to_permutation(&t).unwrap(), p.clone());
        let code = removal_code(&t).unwrap();
        let parsed: RemovalCode = code.to_string().parse().unwrap();
        prop_assert_eq!(parsed, code);
    }

    #[test]
    fn tableau_round_trips(c in ud_cnm(8)) {
        let t = udcnm_to_tlt(&c).unwrap();
        prop_assert_eq!(t.size() + 1, c.size());
        prop_assert_eq!(tlt_to_udcnm(&t).unwrap(), c);
    }

    #[test]
    fn f_recurrences_agree(n in 2usize..30, k in -1i64..30) {
        prop_assume!(k < n as i64);
        let r = f_rec(n, k).unwrap();
        prop_assert_eq!(&r, &f_simple(n, k).unwrap());
        prop_assert_eq!(&r, &f_closed(n, k).unwrap());
    }
}
