use proptest::prelude::*;

use hyperoct::group_order::{is_full_symmetric, SymmetricClass};
use hyperoct::lifting::{check_conditions, GroupWord, Letter, WitnessBudget};
use hyperoct::perm::{format_cycles, parse_cycles, Permutation};
use hyperoct::signed::{SignBlock, SignedElement};

fn perm(n: usize) -> impl Strategy<Value = Permutation> {
    Just((1..=n).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|images| Permutation::from_images(&images).unwrap())
}

fn signed(n: usize) -> impl Strategy<Value = SignedElement> {
    (perm(n), proptest::collection::vec(any::<bool>(), n))
        .prop_map(|(p, bits)| SignedElement::new(p, SignBlock::from_bits(bits)).unwrap())
}

fn perm_triple() -> impl Strategy<Value = (Permutation, Permutation, Permutation)> {
    (1usize..=12).prop_flat_map(|n| (perm(n), perm(n), perm(n)))
}

fn signed_triple() -> impl Strategy<Value = (SignedElement, SignedElement, SignedElement)> {
    (1usize..=12).prop_flat_map(|n| (signed(n), signed(n), signed(n)))
}

fn word() -> impl Strategy<Value = GroupWord> {
    proptest::collection::vec((any::<bool>(), 1u32..=3), 1..8).prop_map(|items| {
        GroupWord::new(
            items
                .into_iter()
                .map(|(s, e)| if s { (Letter::S, e) } else { (Letter::T, e) })
                .collect(),
        )
        .unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn permutation_group_laws((a, b, c) in perm_triple()) {
        prop_assert_eq!(a.then(&b).then(&c), a.then(&b.then(&c)));
        prop_assert!(a.then(&a.inverse()).is_identity());
        prop_assert_eq!(a.then(&b).parity(), a.parity() + b.parity());
        prop_assert_eq!(a.pow(a.order()), Permutation::identity(a.degree()));
    }

    #[test]
    fn cycle_text_round_trip((a, _, _) in perm_triple()) {
        let text = format_cycles(&a);
        prop_assert_eq!(parse_cycles(&text, a.degree()).unwrap(), a);
    }

    #[test]
    fn signed_group_laws((a, b, c) in signed_triple()) {
        prop_assert_eq!(a.then(&b).then(&c), a.then(&b.then(&c)));
        prop_assert!(a.then(&a.inverse()).is_identity());
        prop_assert_eq!(a.then(&b).embed(), a.embed().then(&b.embed()));
        prop_assert_eq!(a.then(&b).project(), a.project().then(&b.project()));
        prop_assert_eq!(a.element_order(), a.embed().order());
        prop_assert!(a.power(a.element_order()).is_identity());
    }

    #[test]
    fn signed_text_round_trip((a, _, _) in signed_triple()) {
        prop_assert_eq!(SignedElement::parse(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn index_two_subgroups_are_closed((a, b, _) in signed_triple()) {
        let ab = a.then(&b);
        if a.in_even_sign_subgroup() && b.in_even_sign_subgroup() {
            prop_assert!(ab.in_even_sign_subgroup());
        }
        if a.in_parity_matched_subgroup() && b.in_parity_matched_subgroup() {
            prop_assert!(ab.in_parity_matched_subgroup());
        }
        prop_assert_eq!(a.inverse().in_parity_matched_subgroup(), a.in_parity_matched_subgroup());
    }

    #[test]
    fn words_respect_concatenation(
        (s, t) in (4usize..=10).prop_flat_map(|n| (perm(n), perm(n))),
        w1 in word(),
        w2 in word(),
    ) {
        let joined = w1.concat(&w2).evaluate(&s, &t);
        prop_assert_eq!(joined, w1.evaluate(&s, &t).then(&w2.evaluate(&s, &t)));
        prop_assert_eq!(GroupWord::parse(&w1.to_string()).unwrap().evaluate(&s, &t), w1.evaluate(&s, &t));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// A verified witness on a transitive pair with odd product certifies `Σ_n`.
    #[test]
    fn jordan_certificates_agree_with_chain((s, t) in (6usize..=15).prop_flat_map(|n| (perm(n), perm(n)))) {
        let budget = WitnessBudget { max_words: 2_000, ..Default::default() };
        let report = check_conditions(&s, &t, budget);
        if report.transitive && report.product_odd && report.witness.is_some() {
            prop_assert_eq!(is_full_symmetric(s.degree(), &[s.clone(), t.clone()]), SymmetricClass::FullSymmetric);
        }
    }
}
