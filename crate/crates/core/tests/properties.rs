mod common;

use common::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn abramov_identity(f in ratfunc()) {
        check_abramov(&f)?;
    }

    #[test]
    fn summable_iff_no_residues(f in linear_pole_ratfunc()) {
        check_summability(&f)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn reduction_identity(h in binomial_product()) {
        check_reduction(&h)?;
    }

    #[test]
    fn lclm_is_a_common_left_multiple(a in operator(2), b in operator(2)) {
        check_lclm(&a, &b)?;
    }

    #[test]
    fn exponent_parts_sum_to_input(r in operator(6), l in 1usize..5) {
        check_separation(&r, l)?;
    }
}

#[test]
fn prescoper_divides_telescoper_on_corpus() {
    let terms = corpus_terms();
    assert!(!terms.is_empty());
    for t in terms {
        check_prescoper_divides(&t).unwrap();
    }
}
