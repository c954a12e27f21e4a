//! Invariant suites shared by `selfcheck` and the acceptance tests.
//!
//! Each suite returns the number of individual comparisons made, or a description of the first mismatch.

use std::collections::BTreeSet;

use nestweight::algebraic::{
    gnf_to_wnwa, project_nw_series, project_text_series, system_to_srfo, wnwa_to_system, wpa_to_system,
    AlgebraicSystem,
};
use nestweight::bridge::{phi_bullet, phi_circ, phi_inverse, phi_order_oracle, wnwa_to_wpa, wpa_to_wnwa, Embedding};
use nestweight::logic::macros::open;
use nestweight::logic::{
    classify, deftrans_apply, exists1, exists_nu, forall1, konst, minus, phi_circ_parameters, phi_circ_scheme, plus,
    Assignment, Evaluator, Structure, Transduced,
};
use nestweight::nested_word::{enumerate_nested_words, enumerate_nestings};
use nestweight::text::enumerate_tdo;
use nestweight::{Guards, NestedWord, Semiring, Text, Weight, Wnwa, Wpa};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::json::{parse_document, parse_nested_word, parse_system, parse_wnwa};
use crate::random::{self, SeededRng};

pub const BAR_PROCEDURE: &str = include_str!("../data/bar_procedure.wnwa.json");
pub const BAR_PROCEDURE_WORD: &str = include_str!("../data/bar_procedure.nw.json");
pub const MOTZKIN: &str = include_str!("../data/motzkin.system.json");
pub const MOTZKIN_SANDWICH: &str = include_str!("../data/motzkin_sandwich.system.json");

pub type Outcome = Result<usize, String>;

fn fail<T>(msg: impl Into<String>) -> Result<T, String> {
    Err(msg.into())
}

fn core<T>(r: nestweight::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn expect_eq(what: &str, left: &Weight, right: &Weight) -> Result<(), String> {
    if left == right {
        Ok(())
    } else {
        fail(format!("{what}: {left} != {right}"))
    }
}

pub fn bar_procedure() -> (Wnwa, NestedWord) {
    let a = parse_wnwa(&parse_document(BAR_PROCEDURE, "automaton").expect("shipped")).expect("shipped");
    let nw = parse_nested_word(&parse_document(BAR_PROCEDURE_WORD, "word").expect("shipped")).expect("shipped");
    (a, nw)
}

pub fn motzkin() -> (AlgebraicSystem, String) {
    let (s, y) = parse_system(&parse_document(MOTZKIN, "system").expect("shipped")).expect("shipped");
    (s, y.expect("designated"))
}

pub fn motzkin_sandwich() -> (AlgebraicSystem, String) {
    let (s, y) = parse_system(&parse_document(MOTZKIN_SANDWICH, "system").expect("shipped")).expect("shipped");
    (s, y.expect("designated"))
}

fn a_power(n: usize) -> Vec<String> {
    vec!["a".to_string(); n]
}

fn all_nested_words(alphabet: &[String], max_len: usize, g: &Guards) -> Result<Vec<NestedWord>, String> {
    let mut out = Vec::new();
    for n in 1..=max_len {
        out.extend(core(enumerate_nested_words(alphabet, n, g))?);
    }
    Ok(out)
}

fn words(alphabet: &[String], max_len: usize, g: &Guards) -> Result<Vec<Vec<String>>, String> {
    Ok(core(nestweight::algebraic::all_words(alphabet, max_len, g))?.into_iter().skip(1).collect())
}

/// `⟦∃x.1⟧ = n` and `⟦∀y.∃x.1⟧ = nⁿ` over ℕ.
pub fn counting(max_len: usize, g: &Guards) -> Outcome {
    let k = Semiring::Natural;
    let one = konst(k.one());
    let f = exists1("x", one.clone());
    let h = forall1("y", exists1("x", one));
    let ef = core(Evaluator::new(&f, k))?;
    let eh = core(Evaluator::new(&h, k))?;
    let mut count = 0;
    for nw in all_nested_words(&random::letters(&["a"]), max_len, g)? {
        let n = nw.len() as u64;
        let asg = Assignment::new();
        expect_eq(&format!("exists on {nw}"), &core(ef.eval(Structure::Nested(&nw), &asg, g))?, &k.count(n))?;
        expect_eq(&format!("forall-exists on {nw}"), &core(eh.eval(Structure::Nested(&nw), &asg, g))?, &k.count(n.pow(n as u32)))?;
        count += 2;
    }
    Ok(count)
}

/// `⟦∃x.open(x)⟧` over the arctic semiring is the nesting depth.
pub fn depth(max_len: usize, g: &Guards) -> Outcome {
    let k = Semiring::Arctic;
    let f = exists1("x", core(open("x", core(k.parse("1"))?, core(k.parse("-1"))?))?);
    let ev = core(Evaluator::new(&f, k))?;
    let mut count = 0;
    for nw in all_nested_words(&random::letters(&["a"]), max_len, g)? {
        let got = core(ev.eval(Structure::Nested(&nw), &Assignment::new(), g))?;
        expect_eq(&format!("depth of {nw}"), &got, &core(k.parse(&nw.nesting_depth().to_string()))?)?;
        count += 1;
    }
    Ok(count)
}

/// Motzkin numbers by the three-term recurrence.
pub fn motzkin_numbers(n: usize) -> Vec<u128> {
    let mut m = vec![1u128, 1];
    for i in 2..=n {
        let i = i as u128;
        let next = ((2 * i + 1) * m[i as usize - 1] + (3 * i - 3) * m[i as usize - 2]) / (i + 2);
        m.push(next);
    }
    m.truncate(n + 1);
    m
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n);
            out.push(q);
        }
    }
    out
}

/// Whether `p` avoids the patterns 2413 and 3142.
pub fn is_separable(p: &[usize]) -> bool {
    let n = p.len();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    let (w, x, y, z) = (p[a], p[b], p[c], p[d]);
                    if (y < w && w < z && z < x) || (x < z && z < w && w < y) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Nesting counts against the Motzkin recurrence, and second orders against separable permutations.
pub fn enumeration(max_nest: usize, max_tdo: usize, g: &Guards) -> Outcome {
    let expected = motzkin_numbers(max_nest);
    let mut count = 0;
    for (n, &m) in expected.iter().enumerate() {
        let got = core(enumerate_nestings(n, g))?.len() as u128;
        if got != m {
            return fail(format!("nestings of {n}: {got} != {m}"));
        }
        count += 1;
    }
    for n in 1..=max_tdo {
        let got: BTreeSet<Vec<usize>> = core(enumerate_tdo(n, g))?.into_iter().collect();
        let want: BTreeSet<Vec<usize>> = permutations(n).into_iter().filter(|p| is_separable(p)).collect();
        if got != want {
            return fail(format!("second orders of {n}: {} found, {} separable", got.len(), want.len()));
        }
        count += 1;
    }
    Ok(count)
}

fn side_conditioned_prime_clans(t: &Text) -> Vec<(usize, usize)> {
    let n = t.len();
    let mut arcs: Vec<(usize, usize)> = t
        .prime_clans()
        .into_iter()
        .filter(|&(i, j)| i < j && (i != 1 || j != n || t.rank(1) > t.rank(n)))
        .collect();
    arcs.sort();
    arcs
}

fn phi_checks(nw: &NestedWord, g: &Guards) -> Result<usize, String> {
    let circ = phi_circ(nw);
    let bullet = phi_bullet(nw);
    if phi_inverse(&circ, Embedding::Circ).as_ref() != Some(nw) {
        return fail(format!("circ inverse fails on {nw}"));
    }
    if phi_inverse(&bullet, Embedding::Bullet).as_ref() != Some(nw) {
        return fail(format!("bullet inverse fails on {nw}"));
    }
    let mut count = 2;
    for i in 1..=nw.len() {
        for j in i + 1..=nw.len() {
            let swapped = core(phi_order_oracle(nw, i, j))?;
            if swapped != (circ.rank(j) < circ.rank(i)) || swapped == (bullet.rank(j) < bullet.rank(i)) {
                return fail(format!("order oracle disagrees on {nw} at ({i},{j})"));
            }
            count += 1;
        }
    }
    let mut arcs = nw.arcs().to_vec();
    arcs.sort();
    if side_conditioned_prime_clans(&circ) != arcs {
        return fail(format!("prime clans differ from the arcs of {nw}"));
    }
    let alphabet: Vec<String> = nw.letters().iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let scheme = core(phi_circ_scheme(&alphabet))?;
    let out = core(deftrans_apply(&scheme, &Transduced::Nested(nw.clone()), &phi_circ_parameters(nw), g))?;
    if out != Some(Transduced::Text(circ)) {
        return fail(format!("definition scheme output differs on {nw}"));
    }
    Ok(count + 2)
}

/// Coherence of the embeddings, their inverse, the order oracle, prime clans and the definition scheme.
pub fn phi_coherence(rng: &mut SeededRng, max_len: usize, random_count: usize, g: &Guards) -> Outcome {
    let mut count = 0;
    for nw in all_nested_words(&random::letters(&["a"]), max_len, g)? {
        count += phi_checks(&nw, g)?;
    }
    let abc = random::letters(&["a", "b", "c"]);
    for _ in 0..random_count {
        let n = rng.gen_range(1..=max_len);
        count += phi_checks(&random::nested_word(rng, &abc, n, g), g)?;
    }
    Ok(count)
}

fn semiring_pair(rng: &mut SeededRng) -> Semiring {
    *[Semiring::Natural, Semiring::Rational].choose(rng).expect("non-empty")
}

/// `‖wnwa_to_wpa(A)‖ ∘ Φ∘ = ‖A‖`.
pub fn wnwa_to_wpa_suite(rng: &mut SeededRng, instances: usize, max_states: usize, max_len: usize, g: &Guards) -> Outcome {
    let mut count = 0;
    let (bar, _) = bar_procedure();
    let mut automata = vec![(bar.clone(), bar.alphabet(), max_len)];
    let ab = random::letters(&["a", "b"]);
    for _ in 0..instances {
        let k = semiring_pair(rng);
        automata.push((random::wnwa(rng, k, max_states, &ab, 0.5), ab.clone(), max_len));
    }
    for (a, alphabet, len) in automata {
        let pa = core(wnwa_to_wpa(&a))?;
        let ev = a.evaluator();
        for nw in all_nested_words(&alphabet, len, g)? {
            let want = ev.eval(&nw);
            expect_eq(&format!("wnwa_to_wpa on {nw}"), &pa.behavior(&phi_circ(&nw)), &want)?;
            count += 1;
        }
    }
    Ok(count)
}

/// `‖wpa_to_wnwa(PA)‖ = ‖PA‖ ∘ Φ∘`.
pub fn wpa_to_wnwa_suite(rng: &mut SeededRng, instances: usize, max_len: usize, g: &Guards) -> Outcome {
    let mut count = 0;
    let ab = random::letters(&["a", "b"]);
    for _ in 0..instances {
        let k = semiring_pair(rng);
        let pa = random::wpa(rng, k, 2, 2, 2, &ab, 0.5);
        let a = core(wpa_to_wnwa(&pa))?;
        let ev = a.evaluator();
        for nw in all_nested_words(&ab, max_len, g)? {
            expect_eq(&format!("wpa_to_wnwa on {nw}"), &ev.eval(&nw), &pa.behavior(&phi_circ(&nw)))?;
            count += 1;
        }
    }
    Ok(count)
}

/// Dynamic programs against run enumeration, on random structures.
pub fn dp_vs_oracle(rng: &mut SeededRng, instances: usize, samples: usize, max_len: usize, g: &Guards) -> Outcome {
    let mut count = 0;
    let ab = random::letters(&["a", "b"]);
    for _ in 0..instances {
        let k = *Semiring::ALL.choose(rng).expect("non-empty");
        let a = random::wnwa(rng, k, 3, &ab, 0.4);
        for _ in 0..samples {
            let n = rng.gen_range(1..=max_len);
            let nw = random::nested_word(rng, &ab, n, g);
            expect_eq(&format!("wnwa on {nw}"), &a.behavior(&nw), &core(a.behavior_bruteforce(&nw, g))?)?;
            count += 1;
        }
    }
    for _ in 0..instances {
        let k = *Semiring::ALL.choose(rng).expect("non-empty");
        let pa = random::wpa(rng, k, 2, 2, 2, &ab, 0.4);
        for _ in 0..samples {
            let n = rng.gen_range(1..=max_len);
            let orders = core(enumerate_tdo(n, g))?;
            let order = orders.choose(rng).expect("non-empty").clone();
            let labels: Vec<String> = (0..n).map(|_| ab.choose(rng).expect("non-empty").clone()).collect();
            let t = core(Text::new(labels, order))?;
            expect_eq(&format!("wpa on {}", t.word_string()), &pa.behavior(&t), &core(pa.behavior_by_runs(&t, g))?)?;
            count += 1;
        }
    }
    Ok(count)
}

/// `⟦φ⁺⟧` is the characteristic function of `φ` and `⟦φ⁺⟧ + ⟦φ⁻⟧ = 1`, in every semiring.
pub fn disambiguation(rng: &mut SeededRng, formulas: usize, max_len: usize, g: &Guards) -> Outcome {
    let mut count = 0;
    let ab = random::letters(&["a", "b"]);
    let structures = all_nested_words(&ab, max_len, g)?;
    for _ in 0..formulas {
        let f = random::sentence(rng, 3, &ab);
        let p = core(plus(&f))?;
        let m = core(minus(&f))?;
        let classical = core(Evaluator::new(&f, Semiring::Boolean))?;
        let truth: Vec<bool> = structures
            .iter()
            .map(|nw| core(classical.holds(Structure::Nested(nw), &Assignment::new(), g)))
            .collect::<Result<_, _>>()?;
        for k in Semiring::ALL {
            let ep = core(Evaluator::new(&p, k))?;
            let em = core(Evaluator::new(&m, k))?;
            for (nw, &t) in structures.iter().zip(&truth) {
                let asg = Assignment::new();
                let wp = core(ep.eval(Structure::Nested(nw), &asg, g))?;
                let wm = core(em.eval(Structure::Nested(nw), &asg, g))?;
                let want = if t { k.one() } else { k.zero() };
                expect_eq(&format!("{f} plus on {nw} in {k}"), &wp, &want)?;
                expect_eq(&format!("{f} plus+minus on {nw} in {k}"), &k.plus(&wp, &wm), &k.one())?;
                count += 1;
            }
        }
    }
    Ok(count)
}

fn tree_sum(sys: &AlgebraicSystem, x: &str, u: &[String], g: &Guards) -> Result<Weight, String> {
    let k = sys.semiring();
    let mut acc = k.zero();
    for t in core(sys.derivation_trees(x, u, g))? {
        k.add_assign(&mut acc, &core(sys.tree_weight(&t))?);
    }
    Ok(acc)
}

fn gnf_agreement(sys: &AlgebraicSystem, x: &str, u: &[String], g: &Guards) -> Result<Weight, String> {
    let a = core(gnf_to_wnwa(sys, x))?.trim();
    let projected = core(project_nw_series(&a, u, g))?;
    let solved = core(sys.coefficient(x, u))?;
    let trees = tree_sum(sys, x, u, g)?;
    expect_eq(&format!("projection vs coefficient on {}", u.join(" ")), &projected, &solved)?;
    expect_eq(&format!("trees vs coefficient on {}", u.join(" ")), &trees, &solved)?;
    Ok(solved)
}

/// GNF systems: automaton projection, coefficient solver and derivation trees agree.
pub fn gnf_suite(rng: &mut SeededRng, instances: usize, max_len: usize, g: &Guards) -> Outcome {
    let (m, x) = motzkin();
    let mut count = 0;
    for (n, want) in [1u64, 1, 2, 4, 9, 21].into_iter().enumerate() {
        let got = gnf_agreement(&m, &x, &a_power(n + 1), g)?;
        expect_eq(&format!("Motzkin coefficient of length {}", n + 1), &got, &m.semiring().count(want))?;
        count += 1;
    }
    let ab = random::letters(&["a", "b"]);
    for _ in 0..instances {
        let k = *[Semiring::Natural, Semiring::Rational, Semiring::Tropical].choose(rng).expect("non-empty");
        let sys = random::gnf_system(rng, k, 2, &ab);
        let x = sys.variables()[0].clone();
        let a = core(gnf_to_wnwa(&sys, &x))?.trim();
        let ev = a.evaluator();
        for u in words(&ab, max_len, g)? {
            let mut projected = k.zero();
            for arcs in core(enumerate_nestings(u.len(), g))? {
                k.add_assign(&mut projected, &ev.eval(&core(NestedWord::new(u.clone(), arcs))?));
            }
            let solved = core(sys.coefficient(&x, &u))?;
            expect_eq(&format!("projection on {}", u.join(" ")), &projected, &solved)?;
            expect_eq(&format!("trees on {}", u.join(" ")), &tree_sum(&sys, &x, &u, g)?, &solved)?;
            count += 1;
        }
    }
    Ok(count)
}

/// `wnwa_to_system` solutions against the projected behavior.
pub fn wnwa_system_suite(rng: &mut SeededRng, instances: usize, max_states: usize, max_len: usize, g: &Guards) -> Outcome {
    let (bar, nw) = bar_procedure();
    let (sys, x) = core(wnwa_to_system(&bar))?;
    let want = core(bar.semiring().parse("1/64"))?;
    expect_eq("bar procedure through the system", &core(sys.coefficient(&x, nw.letters()))?, &want)?;
    let mut count = 1;
    let ab = random::letters(&["a", "b"]);
    for _ in 0..instances {
        let k = semiring_pair(rng);
        let a = random::wnwa(rng, k, max_states, &ab, 0.5);
        let (sys, x) = core(wnwa_to_system(&a))?;
        for u in words(&ab, max_len, g)? {
            let got = core(sys.coefficient(&x, &u))?;
            expect_eq(&format!("wnwa_to_system on {}", u.join(" ")), &got, &core(project_nw_series(&a, &u, g))?)?;
            count += 1;
        }
    }
    Ok(count)
}

/// `wpa_to_system` solutions against the projected behavior.
pub fn wpa_system_suite(rng: &mut SeededRng, instances: usize, max_len: usize, g: &Guards) -> Outcome {
    let mut count = 0;
    let ab = random::letters(&["a", "b"]);
    for _ in 0..instances {
        let k = semiring_pair(rng);
        let pa: Wpa = random::wpa(rng, k, 2, 2, 2, &ab, 0.5);
        let (sys, s) = core(wpa_to_system(&pa))?;
        for u in words(&ab, max_len, g)? {
            let got = core(sys.coefficient(&s, &u))?;
            expect_eq(&format!("wpa_to_system on {}", u.join(" ")), &got, &core(project_text_series(&pa, &u, g))?)?;
            count += 1;
        }
    }
    Ok(count)
}

/// The sentence built from the sandwich Motzkin system is in sRFO and counts like the Motzkin system.
pub fn srfo_suite(max_len: usize, g: &Guards) -> Outcome {
    let (m, x) = motzkin();
    let (s, y) = motzkin_sandwich();
    let f = core(system_to_srfo(&s, &y, g))?;
    if !classify(&f).s_rfo {
        return fail("the sentence is not in sRFO");
    }
    let mut count = 1;
    for n in 1..=max_len {
        let u = a_power(n);
        let got = core(exists_nu(&f, s.semiring(), &u, g))?;
        expect_eq(&format!("sentence on a^{n}"), &got, &core(m.coefficient(&x, &u))?)?;
        count += 1;
    }
    Ok(count)
}
