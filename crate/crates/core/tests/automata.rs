mod common;

use std::collections::BTreeSet;

use nestweight::bridge::{phi_circ, wnwa_to_wpa, wpa_to_wnwa};
use nestweight::nested_word::{enumerate_nested_words, PositionKind};
use nestweight::text::enumerate_tdo;
use nestweight::{Guards, NestedWord, Semiring, Text, Wnwa};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

fn ab() -> Vec<String> {
    common::letters(&["a", "b"])
}

/// The automaton with states listed in reverse.
fn reversed(a: &Wnwa) -> Wnwa {
    let n = a.num_states();
    let r = |q: usize| n - 1 - q;
    let names: Vec<String> = a.states().iter().rev().cloned().collect();
    let mut b = Wnwa::new(a.semiring(), names).unwrap();
    for q in 0..n {
        b.add_iota(r(q), a.iota(q).clone()).unwrap();
        b.add_kappa(r(q), a.kappa(q).clone()).unwrap();
    }
    for ((p, l, q), w) in a.internal() {
        b.add_internal(r(*p), l, r(*q), w.clone()).unwrap();
    }
    for ((p, l, q), w) in a.calls() {
        b.add_call(r(*p), l, r(*q), w.clone()).unwrap();
    }
    for ((p, c, l, q), w) in a.returns() {
        b.add_return(r(*p), r(*c), l, r(*q), w.clone()).unwrap();
    }
    b
}

/// Acceptance by simulating configurations (state, stack of states before pending calls).
fn accepts(a: &Wnwa, nw: &NestedWord) -> bool {
    let k = a.semiring();
    let mut configs: BTreeSet<(usize, Vec<usize>)> =
        (0..a.num_states()).filter(|&q| !k.is_zero(a.iota(q))).map(|q| (q, Vec::new())).collect();
    for i in 1..=nw.len() {
        let l = nw.letter(i).to_string();
        let mut next = BTreeSet::new();
        for (q, stack) in &configs {
            for q2 in 0..a.num_states() {
                match nw.kind(i) {
                    PositionKind::Internal => {
                        if a.internal().contains_key(&(*q, l.clone(), q2)) {
                            next.insert((q2, stack.clone()));
                        }
                    }
                    PositionKind::Call => {
                        if a.calls().contains_key(&(*q, l.clone(), q2)) {
                            let mut s = stack.clone();
                            s.push(*q);
                            next.insert((q2, s));
                        }
                    }
                    PositionKind::Return => {
                        let mut s = stack.clone();
                        let p = s.pop().unwrap();
                        if a.returns().contains_key(&(*q, p, l.clone(), q2)) {
                            next.insert((q2, s));
                        }
                    }
                }
            }
        }
        configs = next;
    }
    configs.iter().any(|(q, _)| !k.is_zero(a.kappa(*q)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn behavior_matches_run_enumeration(k in common::any_semiring(), seed in any::<u64>()) {
        let g = Guards::default();
        let a = common::wnwa(seed, k, 3, &ab());
        for s in 0..4u64 {
            let nw = common::nested_word(seed ^ s, &ab(), 6);
            prop_assert_eq!(a.behavior(&nw), a.behavior_bruteforce(&nw, &g).unwrap(), "{}", nw);
        }
    }

    #[test]
    fn boolean_behavior_is_acceptance(seed in any::<u64>()) {
        let g = Guards::default();
        let a = common::wnwa(seed, Semiring::Boolean, 3, &ab());
        for n in 1..=4 {
            for nw in enumerate_nested_words(&ab(), n, &g).unwrap() {
                let w = a.behavior(&nw);
                prop_assert!(w == Semiring::Boolean.zero() || w == Semiring::Boolean.one());
                prop_assert_eq!(w == Semiring::Boolean.one(), accepts(&a, &nw), "{}", nw);
            }
        }
    }

    #[test]
    fn hadamard_and_renaming(k in common::any_semiring(), seed in any::<u64>()) {
        let g = Guards::default();
        let a = common::wnwa(seed, k, 2, &ab());
        let b = common::wnwa(seed.wrapping_add(1), k, 2, &ab());
        let h = a.hadamard(&b).unwrap();
        let r = reversed(&a);
        for n in 1..=4 {
            for nw in enumerate_nested_words(&ab(), n, &g).unwrap() {
                prop_assert_eq!(h.behavior(&nw), k.times(&a.behavior(&nw), &b.behavior(&nw)));
                prop_assert_eq!(r.behavior(&nw), a.behavior(&nw));
            }
        }
    }

    #[test]
    fn wpa_behavior_matches_runs(k in common::any_semiring(), seed in any::<u64>()) {
        let g = Guards::default();
        let pa = common::wpa(seed, k, &ab());
        let mut rng = common::rng(seed);
        for _ in 0..4 {
            let n = rng.gen_range(1..=5);
            let order = enumerate_tdo(n, &g).unwrap().choose(&mut rng).unwrap().clone();
            let labels: Vec<String> = (0..n).map(|_| ab().choose(&mut rng).unwrap().clone()).collect();
            let t = Text::new(labels, order).unwrap();
            prop_assert_eq!(pa.behavior(&t), pa.behavior_by_runs(&t, &g).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn bridge_round_trip(seed in any::<u64>()) {
        let g = Guards::default();
        let k = [Semiring::Natural, Semiring::Rational][(seed % 2) as usize];
        let a = common::wnwa(seed, k, 2, &ab());
        let pa = wnwa_to_wpa(&a).unwrap();
        let back = wpa_to_wnwa(&pa).unwrap();
        for n in 1..=4 {
            for nw in enumerate_nested_words(&ab(), n, &g).unwrap() {
                prop_assert_eq!(pa.behavior(&phi_circ(&nw)), a.behavior(&nw));
                prop_assert_eq!(back.behavior(&nw), a.behavior(&nw));
            }
        }
    }
}
