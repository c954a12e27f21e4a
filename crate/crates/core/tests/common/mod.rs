#![allow(dead_code)]

use nestweight::algebraic::AlgebraicSystem;
use nestweight::nested_word::enumerate_nestings;
use nestweight::{Guards, NestedWord, Semiring, Weight, Wnwa, Wpa};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn letters(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

pub fn token(rng: &mut ChaCha8Rng, k: Semiring) -> String {
    match k {
        Semiring::Boolean => ["0", "1"].choose(rng).unwrap().to_string(),
        Semiring::Natural => rng.gen_range(0..=4).to_string(),
        Semiring::Rational => format!("{}/{}", rng.gen_range(-4..=4), rng.gen_range(1..=4)),
        Semiring::Tropical => match rng.gen_range(0..6) {
            0 => "inf".into(),
            _ => rng.gen_range(-3..=3).to_string(),
        },
        Semiring::Arctic => match rng.gen_range(0..6) {
            0 => "-inf".into(),
            _ => rng.gen_range(-3..=3).to_string(),
        },
        Semiring::Viterbi | Semiring::Fuzzy => {
            let q = rng.gen_range(1..=4);
            format!("{}/{q}", rng.gen_range(0..=q))
        }
    }
}

pub fn weight(rng: &mut ChaCha8Rng, k: Semiring, p_zero: f64) -> Weight {
    if rng.gen_bool(p_zero) {
        return k.zero();
    }
    k.parse(&token(rng, k)).unwrap()
}

pub fn any_semiring() -> impl Strategy<Value = Semiring> {
    prop::sample::select(Semiring::ALL.to_vec())
}

pub fn wnwa(seed: u64, k: Semiring, max_states: usize, alphabet: &[String]) -> Wnwa {
    let mut rng = rng(seed);
    let n = rng.gen_range(1..=max_states);
    let mut a = Wnwa::new(k, (0..n).map(|i| format!("q{i}")).collect()).unwrap();
    for q in 0..n {
        a.add_iota(q, weight(&mut rng, k, 0.4)).unwrap();
        a.add_kappa(q, weight(&mut rng, k, 0.4)).unwrap();
        for r in 0..n {
            for l in alphabet {
                a.add_internal(q, l, r, weight(&mut rng, k, 0.4)).unwrap();
                a.add_call(q, l, r, weight(&mut rng, k, 0.4)).unwrap();
                for p in 0..n {
                    a.add_return(q, p, l, r, weight(&mut rng, k, 0.4)).unwrap();
                }
            }
        }
    }
    a
}

pub fn wpa(seed: u64, k: Semiring, alphabet: &[String]) -> Wpa {
    let mut rng = rng(seed);
    let (nh, nv, nb) = (rng.gen_range(1..=2), rng.gen_range(1..=2), rng.gen_range(1..=2));
    let mut a = Wpa::new(
        k,
        (0..nh).map(|i| format!("h{i}")).collect(),
        (0..nv).map(|i| format!("v{i}")).collect(),
        (0..nb).map(|i| format!("s{i}")).collect(),
    )
    .unwrap();
    let n = nh + nv;
    for q in 0..n {
        a.add_lambda(q, weight(&mut rng, k, 0.4)).unwrap();
        a.add_gamma(q, weight(&mut rng, k, 0.4)).unwrap();
        for r in 0..n {
            if (q < nh) == (r < nh) {
                for l in alphabet {
                    a.add_mu(q, l, r, weight(&mut rng, k, 0.4)).unwrap();
                }
            } else {
                for s in 0..nb {
                    a.add_open(q, s, r, weight(&mut rng, k, 0.4)).unwrap();
                    a.add_close(q, s, r, weight(&mut rng, k, 0.4)).unwrap();
                }
            }
        }
    }
    a
}

/// A nested word of length `1..=max_len` over `alphabet`, picked from `seed`.
pub fn nested_word(seed: u64, alphabet: &[String], max_len: usize) -> NestedWord {
    let mut rng = rng(seed);
    let n = rng.gen_range(1..=max_len);
    let nestings = enumerate_nestings(n, &Guards::default()).unwrap();
    let arcs = nestings.choose(&mut rng).unwrap().clone();
    let word: Vec<String> = (0..n).map(|_| alphabet.choose(&mut rng).unwrap().clone()).collect();
    NestedWord::new(word, arcs).unwrap()
}

/// A proper system over `{a, b}` whose supports mix letters and variables; with `strict`, every support word starts with a letter.
pub fn proper_system(seed: u64, k: Semiring, strict: bool) -> (AlgebraicSystem, String) {
    let mut rng = rng(seed);
    let ab = letters(&["a", "b"]);
    let vars = letters(&["X", "Y"]);
    let mut sys = AlgebraicSystem::new(k, ab.clone(), vars.clone()).unwrap();
    let symbols: Vec<String> = ab.iter().chain(&vars).cloned().collect();
    for x in &vars {
        sys.add_term(x, vec![ab.choose(&mut rng).unwrap().clone()], weight(&mut rng, k, 0.0)).unwrap();
        for _ in 0..rng.gen_range(1..=4) {
            let len = rng.gen_range(1..=3);
            let mut word: Vec<String> = (0..len).map(|_| symbols.choose(&mut rng).unwrap().clone()).collect();
            if strict && sys.is_variable(&word[0]) {
                word.insert(0, "b".into());
            } else if word.len() == 1 && sys.is_variable(&word[0]) {
                word.push("a".into());
            }
            sys.add_term(x, word, weight(&mut rng, k, 0.2)).unwrap();
        }
    }
    (sys, "X".into())
}
