mod common;

use common::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn weyl_words_stay_in_the_group(
        ct in 0usize..CARTAN_TYPES.len(),
        word in prop::collection::vec(0usize..8, 0..24),
        other in 0usize..10_000,
    ) {
        check_weyl_word(ct, &word, other)?;
    }

    #[test]
    fn theta_commutes_with_w(p in 0usize..PROPERTY_PRESETS.len(), e in 0usize..10_000) {
        check_theta_commutes(p, e)?;
    }

    #[test]
    fn upsilon_is_w_invariant(p in 0usize..PROPERTY_PRESETS.len(), e in 0usize..10_000) {
        check_upsilon_invariant(p, e)?;
    }

    #[test]
    fn fixed_subgroups_are_conjugation_equivariant(
        p in 0usize..PROPERTY_PRESETS.len(),
        e in 0usize..10_000,
        ops in prop::collection::vec((0usize..6, 0usize..6, -3i64..=3), 0..12),
    ) {
        check_fixed_equivariance(p, e, &ops)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn smith_normal_form_identities(m in small_matrix()) {
        check_snf(&m)?;
    }
}

#[test]
fn class_orbits_fill_w() {
    for s in PROPERTY_PRESETS {
        let an = analysis(s);
        let w = an.rf.weyl().order();
        for c in &an.classes {
            assert_eq!(
                c.orbit_size() * c.zwb.order(),
                w,
                "{s} {:?}",
                c.representative.labels(an.rf.datum())
            );
        }
        let total: usize = an.classes.iter().map(|c| c.orbit_size()).sum();
        assert_eq!(total, an.upsilon.len(), "{s}");
    }
}

#[test]
fn library_weyl_orders_match_search() {
    for ct in CARTAN_TYPES {
        let d = datum(ct);
        let searched = weyl_order_by_search(d.cartan_matrix());
        assert_eq!(searched as u128, d.cartan_type().weyl_order(), "{ct}");
        assert_eq!(searched, d.weyl_group(1 << 20).unwrap().order(), "{ct}");
    }
}
