//! Seeded random instances for the self-check suites.

use nestweight::algebraic::AlgebraicSystem;
use nestweight::logic::{and, edge, eq, exists1, exists2, forall1, forall2, lab, leq, member, or, Formula};
use nestweight::nested_word::enumerate_nestings;
use nestweight::{Guards, NestedWord, Semiring, Weight, Wnwa, Wpa};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// A small weight, zero with probability `p_zero`.
pub fn weight(rng: &mut SeededRng, k: Semiring, p_zero: f64) -> Weight {
    if rng.gen_bool(p_zero) {
        return k.zero();
    }
    let tok = match k {
        Semiring::Boolean => "1".to_string(),
        Semiring::Natural => rng.gen_range(1..=3).to_string(),
        Semiring::Rational => {
            let p: i32 = rng.gen_range(-3..=3);
            let q: i32 = rng.gen_range(1..=3);
            if p == 0 {
                "1".to_string()
            } else {
                format!("{p}/{q}")
            }
        }
        Semiring::Tropical | Semiring::Arctic => rng.gen_range(-2..=3).to_string(),
        Semiring::Viterbi | Semiring::Fuzzy => {
            let q: u32 = rng.gen_range(1..=4);
            format!("{}/{q}", rng.gen_range(1..=q))
        }
    };
    k.parse(&tok).expect("generated tokens are valid")
}

pub fn letters(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// A random automaton with `1..=max_states` states over `alphabet`.
pub fn wnwa(rng: &mut SeededRng, k: Semiring, max_states: usize, alphabet: &[String], p_zero: f64) -> Wnwa {
    let n = rng.gen_range(1..=max_states.max(1));
    let names: Vec<String> = (0..n).map(|i| format!("q{i}")).collect();
    let mut a = Wnwa::new(k, names).expect("distinct states");
    for q in 0..n {
        a.add_iota(q, weight(rng, k, p_zero)).expect("valid");
        a.add_kappa(q, weight(rng, k, p_zero)).expect("valid");
        for r in 0..n {
            for l in alphabet {
                a.add_internal(q, l, r, weight(rng, k, p_zero)).expect("valid");
                a.add_call(q, l, r, weight(rng, k, p_zero)).expect("valid");
                for p in 0..n {
                    a.add_return(q, p, l, r, weight(rng, k, p_zero)).expect("valid");
                }
            }
        }
    }
    a
}

/// A random parenthesizing automaton with `1..=h` horizontal, `1..=v` vertical states and `1..=b` brackets.
pub fn wpa(rng: &mut SeededRng, k: Semiring, h: usize, v: usize, b: usize, alphabet: &[String], p_zero: f64) -> Wpa {
    let nh = rng.gen_range(1..=h.max(1));
    let nv = rng.gen_range(1..=v.max(1));
    let nb = rng.gen_range(1..=b.max(1));
    let hs: Vec<String> = (0..nh).map(|i| format!("h{i}")).collect();
    let vs: Vec<String> = (0..nv).map(|i| format!("v{i}")).collect();
    let ps: Vec<String> = (0..nb).map(|i| format!("s{i}")).collect();
    let mut a = Wpa::new(k, hs, vs, ps).expect("distinct names");
    let n = nh + nv;
    let horizontal = |q: usize| q < nh;
    for q in 0..n {
        a.add_lambda(q, weight(rng, k, p_zero)).expect("valid");
        a.add_gamma(q, weight(rng, k, p_zero)).expect("valid");
        for r in 0..n {
            if horizontal(q) == horizontal(r) {
                for l in alphabet {
                    a.add_mu(q, l, r, weight(rng, k, p_zero)).expect("valid");
                }
            } else {
                for s in 0..nb {
                    a.add_open(q, s, r, weight(rng, k, p_zero)).expect("valid");
                    a.add_close(q, s, r, weight(rng, k, p_zero)).expect("valid");
                }
            }
        }
    }
    a
}

/// A uniformly chosen nesting of a random word of length `n`.
pub fn nested_word(rng: &mut SeededRng, alphabet: &[String], n: usize, guards: &Guards) -> NestedWord {
    let nestings = enumerate_nestings(n, guards).expect("small width");
    let arcs = nestings.choose(rng).expect("at least one nesting").clone();
    let word: Vec<String> = (0..n).map(|_| alphabet.choose(rng).expect("non-empty").clone()).collect();
    NestedWord::new(word, arcs).expect("valid nesting")
}

/// A random constant-free sentence of quantifier depth at most `depth`.
pub fn sentence(rng: &mut SeededRng, depth: usize, alphabet: &[String]) -> Formula {
    let mut fo = Vec::new();
    let mut so = Vec::new();
    formula(rng, depth, alphabet, &mut fo, &mut so, 0)
}

fn formula(
    rng: &mut SeededRng,
    depth: usize,
    alphabet: &[String],
    fo: &mut Vec<String>,
    so: &mut Vec<String>,
    size: usize,
) -> Formula {
    let must_bind = fo.is_empty();
    let choice = if must_bind { 0 } else { rng.gen_range(0..10) };
    if depth > 0 && (must_bind || choice < 3) {
        let second = rng.gen_bool(0.2);
        if second && !fo.is_empty() {
            let v = format!("X{}", so.len() + 1);
            so.push(v.clone());
            let body = formula(rng, depth - 1, alphabet, fo, so, size + 1);
            so.pop();
            return if rng.gen_bool(0.5) { exists2(&v, body) } else { forall2(&v, body) };
        }
        let v = format!("x{}", fo.len() + 1);
        fo.push(v.clone());
        let body = formula(rng, depth - 1, alphabet, fo, so, size + 1);
        fo.pop();
        return if rng.gen_bool(0.5) { exists1(&v, body) } else { forall1(&v, body) };
    }
    if must_bind {
        return forall1("x1", eq("x1", "x1"));
    }
    if choice < 6 && size < 4 {
        let a = formula(rng, depth, alphabet, fo, so, size + 1);
        let b = formula(rng, depth, alphabet, fo, so, size + 1);
        return if rng.gen_bool(0.5) { and(a, b) } else { or(a, b) };
    }
    let x = fo.choose(rng).expect("bound").clone();
    let y = fo.choose(rng).expect("bound").clone();
    let atom = match rng.gen_range(0..5) {
        0 => eq(&x, &y),
        1 => lab(alphabet.choose(rng).expect("non-empty"), &x),
        2 => leq(&x, &y),
        3 => edge(&x, &y),
        _ => match so.choose(rng) {
            Some(s) => member(&x, s),
            None => edge(&x, &y),
        },
    };
    if rng.gen_bool(0.3) {
        match atom {
            Formula::Atom(a) => Formula::NegAtom(a),
            other => other,
        }
    } else {
        atom
    }
}

/// A random system in Greibach normal form over `alphabet` with `1..=max_vars` variables.
pub fn gnf_system(rng: &mut SeededRng, k: Semiring, max_vars: usize, alphabet: &[String]) -> AlgebraicSystem {
    let n = rng.gen_range(1..=max_vars.max(1));
    let vars: Vec<String> = (0..n).map(|i| format!("X{i}")).collect();
    let mut sys = AlgebraicSystem::new(k, alphabet.to_vec(), vars.clone()).expect("disjoint");
    for x in &vars {
        for a in alphabet {
            sys.add_term(x, vec![a.clone()], weight(rng, k, 0.3)).expect("valid");
            for y in &vars {
                sys.add_term(x, vec![a.clone(), y.clone()], weight(rng, k, 0.6)).expect("valid");
                for z in &vars {
                    sys.add_term(x, vec![a.clone(), y.clone(), z.clone()], weight(rng, k, 0.75)).expect("valid");
                }
            }
        }
    }
    sys
}
