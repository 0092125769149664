mod common;

use common::{arb_cnf, checks, oracle_sigma};
use graphsat::cnf::{
    assign, cnf_and_cnf, cnf_or_cnf, negate, sigma, tautologically_reduce,
};
use graphsat::{Assignment, Clause, Cnf, Literal};
use proptest::prelude::*;

fn arb_literal() -> impl Strategy<Value = Literal> {
    prop_oneof![
        Just(Literal::Top),
        Just(Literal::Bottom),
        (1u32..50).prop_map(Literal::Pos),
        (1u32..50).prop_map(Literal::Neg),
    ]
}

#[test]
fn sigma_matches_truth_table() {
    let n = checks::sigma_matches_truth_table().unwrap_or_else(|e| panic!("{e}"));
    assert_eq!(n, checks::SIGMA_CASES as usize);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1_000))]

    #[test]
    fn negate_is_an_involution(l in arb_literal()) {
        prop_assert_eq!(negate(negate(l)), l);
    }

    #[test]
    fn assignment_matches_conjunction(x in arb_cnf(4, 6, 4), v in 1u32..=4, pos in any::<bool>()) {
        let lit = Literal::var(v, pos);
        let assigned = assign(&x, &Assignment::new([lit]).unwrap());
        let unit = Cnf::new([Clause::new([lit]).unwrap()]).unwrap();
        prop_assert_eq!(sigma(&assigned), sigma(&cnf_and_cnf(&x, &unit)));
    }

    #[test]
    fn connectives_commute(x in arb_cnf(4, 4, 3), y in arb_cnf(4, 4, 3)) {
        prop_assert_eq!(cnf_and_cnf(&x, &y), cnf_and_cnf(&y, &x));
        prop_assert_eq!(cnf_or_cnf(&x, &y), cnf_or_cnf(&y, &x));
    }

    #[test]
    fn connectives_associate(x in arb_cnf(4, 3, 3), y in arb_cnf(4, 3, 3), z in arb_cnf(4, 3, 3)) {
        prop_assert_eq!(
            cnf_and_cnf(&cnf_and_cnf(&x, &y), &z),
            cnf_and_cnf(&x, &cnf_and_cnf(&y, &z))
        );
        prop_assert_eq!(
            cnf_or_cnf(&cnf_or_cnf(&x, &y), &z),
            cnf_or_cnf(&x, &cnf_or_cnf(&y, &z))
        );
    }

    #[test]
    fn disjunction_is_semantically_or(x in arb_cnf(4, 4, 3), y in arb_cnf(4, 4, 3)) {
        // x ∨ y is satisfiable exactly when one side is
        prop_assert_eq!(oracle_sigma(&cnf_or_cnf(&x, &y)), oracle_sigma(&x) || oracle_sigma(&y));
    }

    #[test]
    fn reduction_is_idempotent(x in arb_cnf(4, 6, 4)) {
        prop_assert_eq!(tautologically_reduce(x.clauses()), x.clone());
    }
}
