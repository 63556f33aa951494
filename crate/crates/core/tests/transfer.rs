mod common;

use ainfty::complexes::homology_contraction;
use ainfty::dgalg::stasheff_defect;
use ainfty::transfer::{transfer_full, TransferOptions};
use proptest::prelude::*;
use rand::Rng;

use common::*;

fn opts(max_arity: usize) -> TransferOptions {
    TransferOptions {
        max_arity,
        gap_search: false,
        domain: None,
        verify: false,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn transferred_structures_satisfy_stasheff(seed in any::<u64>()) {
        let mut r = rng(seed);
        let field = fields()[r.gen_range(0..3)];
        let a = if r.gen_bool(0.5) {
            random_cochain_dga(&mut r, field)
        } else {
            random_endo_dga(&mut r, field)
        };
        // verification off: the defect is recomputed here after the fact
        let res = transfer_full(&a, &opts(5)).unwrap();
        let s = res.structure();
        prop_assert_eq!(s.certified_arity, 5);
        for n in 1..=6 {
            let d = stasheff_defect(s, n).unwrap();
            prop_assert!(d.is_zero(), "St_{} fails on {:?}", n, d.witness(&s.carrier));
        }
        for n in 1..=5 {
            prop_assert!(res.state.verify_morphism(n).is_ok());
        }
        // the carrier is the homology of A
        let con = homology_contraction(a.complex()).unwrap();
        prop_assert_eq!(s.carrier.betti_numbers(), con.small.betti_numbers());
    }

    #[test]
    fn gap_declarations_are_sound(seed in any::<u64>()) {
        let mut r = rng(seed);
        let field = fields()[r.gen_range(0..3)];
        let a = random_cochain_dga(&mut r, field);
        let res = transfer_full(&a, &TransferOptions { max_arity: 6, ..TransferOptions::default() }).unwrap();
        if let Some(q) = res.gap {
            let mut st = res.state.clone();
            let top = st.structure.certified_arity;
            for _ in 0..2 {
                st.extend_step().unwrap();
            }
            for k in q..=top + 2 {
                prop_assert!(st.structure.m(k).is_none_or(|m| m.is_zero()), "m_{} ≠ 0", k);
                prop_assert!(st.morphism.f(k).is_none_or(|f| f.is_zero()), "f_{} ≠ 0", k);
            }
        }
    }
}
