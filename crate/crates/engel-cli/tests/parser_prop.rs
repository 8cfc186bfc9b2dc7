//! Property tests for the expression parser: printing a canonical
//! polynomial and reparsing it is the identity.

use engel::poly::MultiPoly;
use engel::scalar::rat;
use engel_cli::expr::{parse_expression, print_expression};
use proptest::prelude::*;

fn arb_poly() -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec(((0u8..4, 0u8..4), (-20i64..=20, 1i64..=12)), 0..8).prop_map(|terms| {
        let mut p = MultiPoly::zero();
        for ((e1, e2), (num, den)) in terms {
            p = &p + &MultiPoly::monomial([e1, e2, 0, 0], rat(num, den));
        }
        p
    })
}

proptest! {
    #[test]
    fn print_parse_round_trip(p in arb_poly()) {
        let printed = print_expression(&p);
        let reparsed = parse_expression(&printed).unwrap();
        prop_assert_eq!(p, reparsed);
    }

    #[test]
    fn parser_rejects_or_accepts_deterministically(text in "[u12+*()^ .-]{0,12}") {
        // no panics on arbitrary input from the grammar alphabet
        let first = parse_expression(&text);
        let second = parse_expression(&text);
        prop_assert_eq!(first.is_ok(), second.is_ok());
    }
}
