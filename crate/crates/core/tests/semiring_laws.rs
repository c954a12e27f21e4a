mod common;

use nestweight::{Semiring, Weight};
use proptest::prelude::*;

fn triple() -> impl Strategy<Value = (Semiring, Weight, Weight, Weight)> {
    (common::any_semiring(), any::<u64>()).prop_map(|(k, seed)| {
        let mut rng = common::rng(seed);
        let w = |rng: &mut _| k.parse(&common::token(rng, k)).unwrap();
        (k, w(&mut rng), w(&mut rng), w(&mut rng))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn laws((k, a, b, c) in triple()) {
        prop_assert_eq!(k.plus(&k.plus(&a, &b), &c), k.plus(&a, &k.plus(&b, &c)));
        prop_assert_eq!(k.times(&k.times(&a, &b), &c), k.times(&a, &k.times(&b, &c)));
        prop_assert_eq!(k.plus(&a, &b), k.plus(&b, &a));
        prop_assert_eq!(k.times(&a, &b), k.times(&b, &a));
        prop_assert_eq!(k.times(&a, &k.plus(&b, &c)), k.plus(&k.times(&a, &b), &k.times(&a, &c)));
        prop_assert_eq!(k.times(&a, &k.zero()), k.zero());
        prop_assert_eq!(k.plus(&a, &k.zero()), a.clone());
        prop_assert_eq!(k.times(&a, &k.one()), a.clone());
        if k.is_idempotent() {
            prop_assert_eq!(k.plus(&a, &a), a.clone());
        }
    }

    #[test]
    fn tokens_round_trip((k, a, _b, _c) in triple()) {
        prop_assert_eq!(k.parse(&nestweight::semiring::token(&a)).unwrap(), a);
    }
}

#[test]
fn zero_one_and_idempotence() {
    for k in Semiring::ALL {
        assert_eq!(k.plus(&k.zero(), &k.one()), k.one());
        let two = k.plus(&k.one(), &k.one());
        let idempotent =
            matches!(k, Semiring::Boolean | Semiring::Tropical | Semiring::Arctic | Semiring::Viterbi | Semiring::Fuzzy);
        assert_eq!(two == k.one(), idempotent, "{}", k.name());
        assert_eq!(k.is_idempotent(), idempotent, "{}", k.name());
    }
}
