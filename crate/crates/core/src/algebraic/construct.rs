//! Translations between automata and algebraic systems.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::{AlgebraicSystem, Polynomial};
use crate::error::{Error, Result};
use crate::guard::Guards;
use crate::nested_word::{enumerate_nestings, NestedWord};
use crate::semiring::Weight;
use crate::text::{enumerate_texts, Sort};
use crate::wnwa::Wnwa;
use crate::wpa::Wpa;

/// `Σ_ν ‖A‖(w, ν)` over all nestings of `w`; zero on the empty word.
pub fn project_nw_series(a: &Wnwa, w: &[String], guards: &Guards) -> Result<Weight> {
    let k = a.semiring();
    let ev = a.evaluator();
    let mut acc = k.zero();
    if w.is_empty() {
        return Ok(acc);
    }
    for arcs in enumerate_nestings(w.len(), guards)? {
        let nw = NestedWord::new(w.to_vec(), arcs)?;
        k.add_assign(&mut acc, &ev.eval(&nw));
    }
    Ok(acc)
}

/// `Σ_t ‖A‖(t)` over all alternating texts labelled `w`.
pub fn project_text_series(a: &Wpa, w: &[String], guards: &Guards) -> Result<Weight> {
    let k = a.semiring();
    let mut acc = k.zero();
    if w.is_empty() {
        return Ok(acc);
    }
    for t in enumerate_texts(w, guards)? {
        k.add_assign(&mut acc, &a.behavior(&t));
    }
    Ok(acc)
}

fn sym(s: &str) -> Vec<String> {
    vec![s.to_string()]
}

/// A system whose designated variable projects the behavior of `a` onto words.
///
/// Variables are the state pairs `(q1,q2)` plus the returned designated one.
pub fn wnwa_to_system(a: &Wnwa) -> Result<(AlgebraicSystem, String)> {
    let k = a.semiring();
    let n = a.num_states();
    let names: Vec<String> = a.states().to_vec();
    let pair = |p: usize, q: usize| format!("({},{})", names[p], names[q]);
    let alphabet = a.alphabet();
    let mut variables: Vec<String> = Vec::new();
    for p in 0..n {
        for q in 0..n {
            variables.push(pair(p, q));
        }
    }
    let probe = AlgebraicSystem::new(k, alphabet.clone(), variables.clone())?;
    let designated = probe.fresh_name("X");
    variables.push(designated.clone());
    let mut sys = AlgebraicSystem::new(k, alphabet, variables)?;

    let mut ints_from: Vec<Vec<(&str, usize, &Weight)>> = vec![Vec::new(); n];
    let mut ints_to: Vec<Vec<(usize, &str, &Weight)>> = vec![Vec::new(); n];
    for ((p, l, q), w) in a.internal() {
        ints_from[*p].push((l, *q, w));
        ints_to[*q].push((*p, l, w));
    }
    let mut calls_from: Vec<Vec<(&str, usize, &Weight)>> = vec![Vec::new(); n];
    for ((p, l, q), w) in a.calls() {
        calls_from[*p].push((l, *q, w));
    }
    // rets_by[lookback] = (current, letter, target, weight)
    let mut rets_by: Vec<Vec<(usize, &str, usize, &Weight)>> = vec![Vec::new(); n];
    for ((q, p, l, q2), w) in a.returns() {
        rets_by[*p].push((*q, l, *q2, w));
    }

    for q1 in 0..n {
        for q2 in 0..n {
            let x = pair(q1, q2);
            let mut poly = Polynomial::new();
            if q1 == q2 {
                poly.add(k, Vec::new(), k.one());
            }
            for &(l, t, w) in &ints_from[q1] {
                if t == q2 {
                    poly.add(k, sym(l), w.clone());
                }
            }
            // a (q3,q4) b, both internal
            for &(l1, q3, w1) in &ints_from[q1] {
                for &(q4, l2, w2) in &ints_to[q2] {
                    poly.add(k, vec![l1.into(), pair(q3, q4), l2.into()], k.times(w1, w2));
                }
            }
            for &(l1, q3, w1) in &calls_from[q1] {
                for &(q4, l2, q5, w2) in &rets_by[q1] {
                    let w12 = k.times(w1, w2);
                    // a (q3,q4) b with a matched to b
                    if q5 == q2 {
                        poly.add(k, vec![l1.into(), pair(q3, q4), l2.into()], w12.clone());
                    }
                    // a (q3,q4) b (q5,q6) c with c internal
                    for &(q6, l3, w3) in &ints_to[q2] {
                        poly.add(
                            k,
                            vec![l1.into(), pair(q3, q4), l2.into(), pair(q5, q6), l3.into()],
                            k.times(&w12, w3),
                        );
                    }
                    // a (q3,q4) b (q5,q6) c (q7,q8) d with two matched blocks
                    for (q6, calls) in calls_from.iter().enumerate() {
                        for &(l3, q7, w3) in calls {
                            for &(q8, l4, t, w4) in &rets_by[q6] {
                                if t != q2 {
                                    continue;
                                }
                                poly.add(
                                    k,
                                    vec![
                                        l1.into(),
                                        pair(q3, q4),
                                        l2.into(),
                                        pair(q5, q6),
                                        l3.into(),
                                        pair(q7, q8),
                                        l4.into(),
                                    ],
                                    k.product([&w12, w3, w4]),
                                );
                            }
                        }
                    }
                }
            }
            // a (q3,q4) b (q5,q6) c with a internal and b matched to c
            for &(l1, q3, w1) in &ints_from[q1] {
                for (q4, calls) in calls_from.iter().enumerate() {
                    for &(l2, q5, w2) in calls {
                        for &(q6, l3, t, w3) in &rets_by[q4] {
                            if t == q2 {
                                poly.add(
                                    k,
                                    vec![l1.into(), pair(q3, q4), l2.into(), pair(q5, q6), l3.into()],
                                    k.product([w1, w2, w3]),
                                );
                            }
                        }
                    }
                }
            }
            sys.set_poly(&x, poly);
        }
    }
    let mut top = Polynomial::new();
    for q1 in 0..n {
        for q2 in 0..n {
            let c = k.times(a.iota(q1), a.kappa(q2));
            if k.is_zero(&c) {
                continue;
            }
            for (word, w) in sys.poly(&pair(q1, q2))?.terms() {
                top.add(k, word.clone(), k.times(&c, w));
            }
        }
    }
    sys.set_poly(&designated, top);
    Ok((sys, designated))
}

const BOTTOM: &str = "⊥";

/// A WNWA whose projection is the solution component `S_y` of a system in Greibach normal form.
pub fn gnf_to_wnwa(sys: &AlgebraicSystem, y: &str) -> Result<Wnwa> {
    if !sys.check_class().gnf {
        return Err(Error::SystemClass("the system is not in Greibach normal form".into()));
    }
    sys.poly(y)?;
    let k = sys.semiring();
    let vars = sys.variables();
    let m = vars.len();
    let comps: Vec<&str> = vars.iter().map(String::as_str).chain([BOTTOM]).collect();
    let bot = m;
    let mut names = Vec::new();
    for a in &comps {
        for b in &comps {
            names.push(format!("({a},{b})"));
        }
    }
    let st = |i: usize, j: usize| i * (m + 1) + j;
    let mut a = Wnwa::new(k, names)?;
    let vidx: BTreeMap<&str, usize> = vars.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
    let yi = vidx[y];
    for z in 0..=m {
        a.add_iota(st(yi, z), k.one())?;
    }
    a.add_kappa(st(bot, bot), k.one())?;
    for (x1, v) in vars.iter().enumerate() {
        for (word, w) in sys.poly(v)?.terms() {
            let l = word[0].as_str();
            match word.len() {
                1 => {
                    a.add_internal(st(x1, bot), l, st(bot, bot), w.clone())?;
                    for x2 in 0..=m {
                        for x3 in 0..m {
                            for x4 in 0..m {
                                a.add_return(st(x1, x2), st(x3, x4), l, st(x4, x2), w.clone())?;
                            }
                        }
                    }
                }
                2 => {
                    let x3 = vidx[word[1].as_str()];
                    for x2 in 0..=m {
                        a.add_internal(st(x1, x2), l, st(x3, x2), w.clone())?;
                    }
                }
                _ => {
                    let x3 = vidx[word[1].as_str()];
                    let x4 = vidx[word[2].as_str()];
                    for x2 in 0..=m {
                        a.add_call(st(x1, x4), l, st(x3, x2), w.clone())?;
                    }
                }
            }
        }
    }
    Ok(a)
}

/// A system whose designated variable projects the behavior of `a` onto words.
///
/// Variables are `(q1,q2,1)` for runs on singletons and wrapped products and `(q1,q2,0)` for bare products.
pub fn wpa_to_system(a: &Wpa) -> Result<(AlgebraicSystem, String)> {
    let k = a.semiring();
    let n = a.num_states();
    let name = |q: usize| a.state_name(q).to_string();
    let var = |p: usize, q: usize, b: u8| format!("({},{},{})", name(p), name(q), b);
    let sorts = [Sort::Horizontal, Sort::Vertical];
    let same_sort = |p: usize, q: usize| a.is_horizontal(p) == a.is_horizontal(q);
    let mut variables = Vec::new();
    for sort in sorts {
        for p in a.states_of(sort) {
            for q in a.states_of(sort) {
                variables.push(var(p, q, 1));
                variables.push(var(p, q, 0));
            }
        }
    }
    let alphabet = a.alphabet();
    let probe = AlgebraicSystem::new(k, alphabet.clone(), variables.clone())?;
    let designated = probe.fresh_name("S");
    variables.push(designated.clone());
    let mut sys = AlgebraicSystem::new(k, alphabet, variables)?;

    let mut zero_polys: BTreeMap<(usize, usize), Polynomial> = BTreeMap::new();
    for sort in sorts {
        for p in a.states_of(sort) {
            for q in a.states_of(sort) {
                let mut poly = Polynomial::new();
                for m in a.states_of(sort) {
                    poly.add(k, vec![var(p, m, 1), var(m, q, 1)], k.one());
                    poly.add(k, vec![var(p, m, 1), var(m, q, 0)], k.one());
                }
                zero_polys.insert((p, q), poly);
            }
        }
    }
    for p in 0..n {
        for q in 0..n {
            if !same_sort(p, q) {
                continue;
            }
            let mut poly = Polynomial::new();
            for ((p2, l, q2), w) in a.mu() {
                if *p2 == p && *q2 == q {
                    poly.add(k, sym(l), w.clone());
                }
            }
            for ((p2, s, r), wo) in a.mu_open() {
                if *p2 != p {
                    continue;
                }
                for ((r2, s2, q2), wc) in a.mu_close() {
                    if *s2 != *s || *q2 != q {
                        continue;
                    }
                    let c = k.times(wo, wc);
                    for (word, w) in zero_polys[&(*r, *r2)].terms() {
                        poly.add(k, word.clone(), k.times(&c, w));
                    }
                }
            }
            sys.set_poly(&var(p, q, 1), poly);
            sys.set_poly(&var(p, q, 0), zero_polys[&(p, q)].clone());
        }
    }
    let mut top = Polynomial::new();
    for p in 0..n {
        for q in 0..n {
            let c = k.times(a.lambda(p), a.gamma(q));
            if !same_sort(p, q) || k.is_zero(&c) {
                continue;
            }
            for b in [1, 0] {
                for (word, w) in sys.poly(&var(p, q, b))?.terms() {
                    top.add(k, word.clone(), k.times(&c, w));
                }
            }
        }
    }
    sys.set_poly(&designated, top);
    Ok((sys, designated))
}

/// A sandwich-normal system for `S_y` restricted to nonempty words, built from a GNF system.
pub fn sandwich_normal_form(sys: &AlgebraicSystem, y: &str, guards: &Guards) -> Result<(AlgebraicSystem, String)> {
    let a = gnf_to_wnwa(sys, y)?.trim();
    let (s, x) = wnwa_to_system(&a)?;
    let stripped = s.strip_short_words(0, guards)?;
    let keep: BTreeSet<String> = stripped.reachable(&x);
    let vars: Vec<String> = stripped.variables().iter().filter(|v| keep.contains(*v)).cloned().collect();
    let mut out = AlgebraicSystem::new(stripped.semiring(), stripped.alphabet().to_vec(), vars.clone())?;
    for v in &vars {
        out.set_poly(v, stripped.poly(v)?.clone());
    }
    Ok((out, x))
}

#[cfg(test)]
mod tests {
    use super::super::tests::{motzkin, w};
    use super::*;
    use crate::algebraic::all_words;
    use crate::semiring::Semiring;

    fn bar_procedure() -> Wnwa {
        let k = Semiring::Viterbi;
        let mut a = Wnwa::new(k, vec!["q1", "q2", "q3", "q4"]).unwrap();
        let h = k.parse("1/2").unwrap();
        a.add_iota(0, k.one()).unwrap();
        a.add_kappa(3, k.one()).unwrap();
        a.add_internal(0, "r", 1, k.one()).unwrap();
        a.add_internal(1, "b", 2, h.clone()).unwrap();
        a.add_internal(2, "w", 2, h.clone()).unwrap();
        a.add_internal(2, "ret", 3, h.clone()).unwrap();
        a.add_call(1, "call", 0, h.clone()).unwrap();
        a.add_return(2, 1, "ret", 2, h).unwrap();
        a
    }

    #[test]
    fn bar_procedure_system() {
        let a = bar_procedure();
        let (sys, x) = wnwa_to_system(&a).unwrap();
        let u = w("r call r b ret w w ret");
        let k = Semiring::Viterbi;
        assert_eq!(sys.coefficient(&x, &u).unwrap(), k.parse("1/64").unwrap());
        assert_eq!(project_nw_series(&a, &u, &Guards::default()).unwrap(), k.parse("1/64").unwrap());
    }

    #[test]
    fn motzkin_through_automaton() {
        let g = Guards::default();
        let sys = motzkin();
        let a = gnf_to_wnwa(&sys, "X").unwrap();
        let k = Semiring::Natural;
        for n in 1..=6 {
            let u = vec!["a".to_string(); n];
            assert_eq!(project_nw_series(&a, &u, &g).unwrap(), sys.coefficient("X", &u).unwrap(), "{n}");
        }
        assert_eq!(project_nw_series(&a, &w("a a a a"), &g).unwrap(), k.count(4));
    }

    #[test]
    fn automaton_round_trip() {
        let g = Guards::default();
        let a = gnf_to_wnwa(&motzkin(), "X").unwrap().trim();
        let (sys, x) = wnwa_to_system(&a).unwrap();
        for u in all_words(sys.alphabet(), 6, &g).unwrap().into_iter().skip(1) {
            assert_eq!(sys.coefficient(&x, &u).unwrap(), project_nw_series(&a, &u, &g).unwrap());
        }
        let (sn, x) = sandwich_normal_form(&motzkin(), "X", &g).unwrap();
        assert!(sn.check_class().sandwich_normal);
        for n in 1..=7 {
            let u = vec!["a".to_string(); n];
            assert_eq!(sn.coefficient(&x, &u).unwrap(), motzkin().coefficient("X", &u).unwrap());
        }
    }

    #[test]
    fn parenthesizing_automaton() {
        let g = Guards::default();
        let k = Semiring::Natural;
        let mut a = Wpa::new(k, vec!["h"], vec!["v"], vec!["s"]).unwrap();
        a.add_mu(0, "a", 0, k.one()).unwrap();
        a.add_mu(1, "a", 1, k.count(2)).unwrap();
        a.add_open(0, 0, 1, k.one()).unwrap();
        a.add_close(1, 0, 0, k.count(3)).unwrap();
        a.add_lambda(0, k.one()).unwrap();
        a.add_gamma(0, k.one()).unwrap();
        let (sys, s) = wpa_to_system(&a).unwrap();
        assert!(sys.check_class().proper);
        for n in 1..=5 {
            let u = vec!["a".to_string(); n];
            assert_eq!(sys.coefficient(&s, &u).unwrap(), project_text_series(&a, &u, &g).unwrap(), "{n}");
        }
    }
}
