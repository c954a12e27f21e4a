//! The embeddings `Φ∘`, `Φ•` of nested words into alternating texts, and the
//! translations between nested-word automata and parenthesizing automata.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::Result;
use crate::nested_word::NestedWord;
use crate::semiring::Weight;
use crate::text::Text;
use crate::wnwa::Wnwa;
use crate::wpa::Wpa;

/// Which embedding to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Embedding {
    /// `Φ∘`
    Circ,
    /// `Φ•`
    Bullet,
}

fn first_call(nw: &NestedWord, lo: usize, hi: usize) -> Option<(usize, usize)> {
    (lo..=hi).find_map(|i| match nw.partner(i) {
        Some(j) if j > i => Some((i, j)),
        _ => None,
    })
}

/// Second-order position list of `Φ∘` / `Φ•` restricted to the well-nested segment `lo..=hi`.
fn order(nw: &NestedWord, lo: usize, hi: usize, e: Embedding, out: &mut Vec<usize>) {
    if lo > hi {
        return;
    }
    match (first_call(nw, lo, hi), e) {
        (None, Embedding::Circ) => out.extend(lo..=hi),
        (None, Embedding::Bullet) => out.extend((lo..=hi).rev()),
        (Some((i, j)), Embedding::Circ) => {
            out.extend(lo..i);
            out.push(j);
            order(nw, i + 1, j - 1, Embedding::Bullet, out);
            out.push(i);
            order(nw, j + 1, hi, Embedding::Circ, out);
        }
        (Some((i, j)), Embedding::Bullet) => {
            order(nw, j + 1, hi, Embedding::Bullet, out);
            out.push(i);
            order(nw, i + 1, j - 1, Embedding::Circ, out);
            out.push(j);
            out.extend((lo..i).rev());
        }
    }
}

/// `Φ∘(nw)` or `Φ•(nw)`.
pub fn phi(nw: &NestedWord, e: Embedding) -> Text {
    let mut o = Vec::with_capacity(nw.len());
    order(nw, 1, nw.len(), e, &mut o);
    Text::new(nw.letters().to_vec(), o).expect("images of nested words are alternating")
}

pub fn phi_circ(nw: &NestedWord) -> Text {
    phi(nw, Embedding::Circ)
}

pub fn phi_bullet(nw: &NestedWord) -> Text {
    phi(nw, Embedding::Bullet)
}

/// Whether `j` precedes `i` in the second order of `Φ∘(nw)`, for `i < j`, read off the arcs.
pub fn phi_order_oracle(nw: &NestedWord, i: usize, j: usize) -> Result<bool> {
    if i >= j {
        return Err(crate::error::Error::IndexOrder(i, j));
    }
    nw.position_kind(j)?;
    let tightest = nw.arcs().iter().filter(|&&(k, l)| k <= i && j <= l).max_by_key(|&&(k, _)| k);
    match tightest {
        None => Ok(false),
        Some(&(k, _)) => Ok(nw.nesting_depth_at(k)? % 2 == 1),
    }
}

/// The nested word `nw` with `Φ(nw) = t`, if any.
pub fn phi_inverse(t: &Text, e: Embedding) -> Option<NestedWord> {
    let n = t.len();
    let arcs: Vec<(usize, usize)> = t
        .prime_clans()
        .into_iter()
        .filter(|&(i, j)| {
            i < j
                && (i != 1
                    || j != n
                    || match e {
                        Embedding::Circ => t.rank(1) > t.rank(n),
                        Embedding::Bullet => t.rank(1) < t.rank(n),
                    })
        })
        .collect();
    let nw = NestedWord::new(t.labels().to_vec(), arcs).ok()?;
    if phi(&nw, e) == *t {
        Some(nw)
    } else {
        None
    }
}

fn fresh(base: &str, taken: &BTreeSet<String>) -> String {
    let mut name = base.to_string();
    while taken.contains(&name) {
        name.push('\'');
    }
    name
}

const BOTTOM: usize = 0;
const UNKNOWN: usize = 1;
const SINGLE: usize = 2;
const CIRC: usize = 3;
const BULLET: usize = 4;
const CLASS_NAMES: [&str; 5] = ["⊥", "?", "s", "∘", "•"];

fn class_call(c: usize) -> Option<usize> {
    match c {
        BOTTOM | UNKNOWN => Some(UNKNOWN),
        SINGLE | BULLET | CIRC => Some(CIRC),
        _ => None,
    }
}

fn class_int(c: usize) -> Option<usize> {
    match c {
        BOTTOM => Some(SINGLE),
        UNKNOWN => Some(UNKNOWN),
        SINGLE | BULLET | CIRC => Some(CIRC),
        _ => None,
    }
}

fn class_ret(c: usize, look: usize) -> Option<usize> {
    match (c, look) {
        (UNKNOWN, BOTTOM) => Some(BULLET),
        (UNKNOWN, _) => Some(UNKNOWN),
        (CIRC, BOTTOM) => None,
        (CIRC, _) => Some(CIRC),
        _ => None,
    }
}

/// A nested-word automaton `A` with `‖A‖(nw) = ‖PA‖(Φ∘(nw))`.
pub fn wpa_to_wnwa(pa: &Wpa) -> Result<Wnwa> {
    let k = pa.semiring();
    let h = pa.hstates().len();
    let base = pa.num_states();
    // extended state space: the original states, then a source-only and a sink-only horizontal state
    let h_in = base;
    let h_out = base + 1;
    let nq = base + 2;
    let horizontal = |q: usize| q < h || q == h_in || q == h_out;
    let np = pa.parens().len();
    let s_star = np;
    let nw_ = np + 2; // second components: 0 is `i`, 1 + s a bracket
    let mut taken: BTreeSet<String> = pa.hstates().iter().chain(pa.vstates()).cloned().collect();
    let name_in = fresh("⊤in", &taken);
    taken.insert(name_in.clone());
    let name_out = fresh("⊤out", &taken);
    let mut paren_taken: BTreeSet<String> = pa.parens().iter().cloned().collect();
    paren_taken.insert("i".into());
    let star = fresh("*", &paren_taken);
    let qname = |q: usize| -> String {
        if q == h_in {
            name_in.clone()
        } else if q == h_out {
            name_out.clone()
        } else {
            pa.state_name(q).to_string()
        }
    };
    let oname = |o: usize| -> String {
        if o == 0 {
            "i".to_string()
        } else if o - 1 == s_star {
            star.clone()
        } else {
            format!("({}", pa.parens()[o - 1])
        }
    };
    let core = |q: usize, o: usize| q * nw_ + o;
    let ncore = nq * nw_;
    let idx = |c: usize, cl: usize| c * 5 + cl;

    // μ on the extended automaton
    let mut mu: Vec<(usize, String, usize, Weight)> =
        pa.mu().iter().map(|((p, a, q), w)| (*p, a.clone(), *q, w.clone())).collect();
    mu.sort();
    let mut opens: Vec<(usize, usize, usize, Weight)> =
        pa.mu_open().iter().map(|((p, s, q), w)| (*p, *s, *q, w.clone())).collect();
    let mut closes: Vec<(usize, usize, usize, Weight)> =
        pa.mu_close().iter().map(|((p, s, q), w)| (*p, *s, *q, w.clone())).collect();
    for v in pa.states_of(crate::text::Sort::Vertical) {
        if !k.is_zero(pa.lambda(v)) {
            opens.push((h_in, s_star, v, pa.lambda(v).clone()));
        }
        if !k.is_zero(pa.gamma(v)) {
            closes.push((v, s_star, h_out, pa.gamma(v).clone()));
        }
    }

    let variants = [CIRC, BULLET, SINGLE];
    let mut result: Option<Wnwa> = None;
    for &variant in &variants {
        let names: Vec<String> = (0..ncore * 5)
            .map(|x| {
                let (c, cl) = (x / 5, x % 5);
                format!("({},{},{})", qname(c / nw_), oname(c % nw_), CLASS_NAMES[cl])
            })
            .collect();
        let mut a = Wnwa::new(k, names)?;
        for (p, l, q, w) in &mu {
            for o in 0..nw_ {
                for cl in 0..5 {
                    if let Some(cl2) = class_int(cl) {
                        a.add_internal(idx(core(*p, o), cl), l, idx(core(*q, o), cl2), w.clone())?;
                    }
                }
            }
        }
        for (p, s, x, wo) in &opens {
            for (x2, l, q, w) in &mu {
                if x2 != x {
                    continue;
                }
                let wt = k.times(wo, w);
                for o in 0..nw_ {
                    for cl in 0..5 {
                        if let Some(cl2) = class_call(cl) {
                            a.add_call(idx(core(*p, o), cl), l, idx(core(*q, s + 1), cl2), wt.clone())?;
                        }
                    }
                }
            }
        }
        for (q1, l, x, w) in &mu {
            for (x2, s, q2, wc) in &closes {
                if x2 != x {
                    continue;
                }
                let wt = k.times(w, wc);
                for look in (0..nq).filter(|&p| horizontal(p) == horizontal(*q2)) {
                    for o in 0..nw_ {
                        for cl in 0..5 {
                            for lcl in 0..5 {
                                if let Some(cl2) = class_ret(cl, lcl) {
                                    a.add_return(
                                        idx(core(*q1, s + 1), cl),
                                        idx(core(look, o), lcl),
                                        l,
                                        idx(core(*q2, o), cl2),
                                        wt.clone(),
                                    )?;
                                }
                            }
                        }
                    }
                }
            }
        }
        match variant {
            CIRC => {
                for hq in 0..h {
                    a.add_iota(idx(core(hq, 0), BOTTOM), pa.lambda(hq).clone())?;
                    a.add_kappa(idx(core(hq, 0), CIRC), pa.gamma(hq).clone())?;
                }
                for (v, s, hq, w) in pa.mu_open().iter().map(|((p, s, q), w)| (*p, *s, *q, w)) {
                    if !horizontal(v) {
                        a.add_iota(idx(core(hq, s + 1), BOTTOM), k.times(pa.lambda(v), w))?;
                    }
                }
                for (hq, s, v, w) in pa.mu_close().iter().map(|((p, s, q), w)| (*p, *s, *q, w)) {
                    if horizontal(hq) {
                        a.add_kappa(idx(core(hq, s + 1), CIRC), k.times(w, pa.gamma(v)))?;
                    }
                }
            }
            BULLET => {
                for hq in 0..h {
                    a.add_iota(idx(core(hq, 0), BOTTOM), pa.lambda(hq).clone())?;
                    a.add_kappa(idx(core(hq, 0), BULLET), pa.gamma(hq).clone())?;
                }
                a.add_iota(idx(core(h_in, 0), BOTTOM), k.one())?;
                a.add_kappa(idx(core(h_out, 0), BULLET), k.one())?;
            }
            _ => {
                for q in 0..base {
                    a.add_iota(idx(core(q, 0), BOTTOM), pa.lambda(q).clone())?;
                    a.add_kappa(idx(core(q, 0), SINGLE), pa.gamma(q).clone())?;
                }
            }
        }
        let a = a.trim();
        result = Some(match result {
            None => a,
            Some(prev) => prev.disjoint_sum(&a)?,
        });
    }
    Ok(result.expect("three variants"))
}

/// A parenthesizing automaton `PA` with `‖PA‖(Φ∘(nw)) = ‖A‖(nw)`.
pub fn wnwa_to_wpa(a: &Wnwa) -> Result<Wpa> {
    let k = a.semiring();
    let sigma = a.alphabet();
    let nq = a.num_states();
    let tags = 2 + sigma.len();
    let tag_name = |t: usize| -> String {
        match t {
            0 => "c".to_string(),
            1 => "i".to_string(),
            _ => format!("={}", sigma[t - 2]),
        }
    };
    let hnames: Vec<String> = (0..nq * tags)
        .map(|x| format!("H.{}.{}", a.states()[x / tags], tag_name(x % tags)))
        .collect();
    let vnames: Vec<String> = (0..nq * tags)
        .map(|x| format!("V.{}.{}", a.states()[x / tags], tag_name(x % tags)))
        .collect();
    let mut pa = Wpa::new(k, hnames, vnames, a.states().to_vec())?;
    let off = nq * tags;
    let st = |sort: usize, q: usize, t: usize| sort * off + q * tags + t;
    let (c, i) = (0usize, 1usize);
    for sort in 0..2 {
        let other = 1 - sort;
        for ((q1, l, q2), w) in a.internal() {
            pa.add_mu(st(sort, *q1, i), l, st(sort, *q2, i), w.clone())?;
        }
        for ((q1, l, q2), w) in a.calls() {
            pa.add_mu(st(sort, *q1, c), l, st(sort, *q2, i), w.clone())?;
        }
        for q in 0..nq {
            for (li, l) in sigma.iter().enumerate() {
                pa.add_mu(st(sort, q, i), l, st(sort, q, 2 + li), k.one())?;
            }
            pa.add_open(st(sort, q, i), q, st(other, q, c), k.one())?;
        }
        for ((q1, q2, l, q3), w) in a.returns() {
            let li = sigma.iter().position(|x| x == l).expect("letters of A");
            pa.add_close(st(sort, *q1, 2 + li), *q2, st(other, *q3, i), w.clone())?;
        }
    }
    for q in 0..nq {
        pa.add_lambda(st(0, q, i), a.iota(q).clone())?;
        pa.add_gamma(st(0, q, i), a.kappa(q).clone())?;
    }
    Ok(pa)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::guard::Guards;
    use crate::nested_word::enumerate_nested_words;

    fn sample() -> NestedWord {
        NestedWord::from_chars("aacacabb", [(1, 2), (3, 8), (5, 7)]).unwrap()
    }

    #[test]
    fn sample_text() {
        let t = phi_circ(&sample());
        assert_eq!(t.order2(), &[2, 1, 8, 5, 6, 7, 4, 3]);
        assert_eq!(phi_inverse(&t, Embedding::Circ), Some(sample()));
        let flat = NestedWord::from_chars("abc", []).unwrap();
        assert_eq!(phi_circ(&flat).order2(), &[1, 2, 3]);
        assert_eq!(phi_bullet(&flat).order2(), &[3, 2, 1]);
        assert_eq!(phi_inverse(&phi_circ(&flat), Embedding::Circ), Some(flat));
    }

    #[test]
    fn oracle() {
        let nw = sample();
        assert!(phi_order_oracle(&nw, 1, 2).unwrap());
        assert!(!phi_order_oracle(&nw, 5, 7).unwrap());
        assert!(phi_order_oracle(&nw, 3, 8).unwrap());
        assert!(phi_order_oracle(&nw, 2, 1).is_err());
    }

    #[test]
    fn not_in_image() {
        // (a∘b)•(c∘d)
        let t = Text::from_chars("abcd", vec![3, 4, 1, 2]).unwrap();
        assert_eq!(phi_inverse(&t, Embedding::Circ), None);
        let g = Guards::default();
        let alphabet = ["a".to_string()];
        let images: BTreeSet<Vec<usize>> = enumerate_nested_words(&alphabet, 4, &g)
            .unwrap()
            .iter()
            .map(|nw| phi_circ(nw).order2().to_vec())
            .collect();
        for o in crate::text::enumerate_tdo(4, &g).unwrap() {
            let t = Text::from_chars("aaaa", o.clone()).unwrap();
            assert_eq!(phi_inverse(&t, Embedding::Circ).is_some(), images.contains(&o));
        }
    }
}

#[cfg(test)]
mod translation_tests {
    use super::*;
    use crate::guard::Guards;
    use crate::nested_word::enumerate_nested_words;
    use crate::semiring::Semiring;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn small(rng: &mut ChaCha8Rng, k: Semiring) -> Weight {
        if rng.gen_bool(0.4) {
            k.zero()
        } else {
            k.count(rng.gen_range(1..3))
        }
    }

    fn random_wpa(rng: &mut ChaCha8Rng, k: Semiring) -> Wpa {
        let mut pa = Wpa::new(k, vec!["h0", "h1"], vec!["v0", "v1"], vec!["s", "t"]).unwrap();
        for q in 0..4 {
            pa.add_lambda(q, small(rng, k)).unwrap();
            pa.add_gamma(q, small(rng, k)).unwrap();
        }
        for (p, q) in [(0, 0), (0, 1), (1, 0), (1, 1), (2, 2), (2, 3), (3, 2), (3, 3)] {
            for l in ["a", "b"] {
                pa.add_mu(p, l, q, small(rng, k)).unwrap();
            }
        }
        for s in 0..2 {
            for p in 0..4 {
                for q in 0..4 {
                    if (p < 2) != (q < 2) {
                        pa.add_open(p, s, q, small(rng, k)).unwrap();
                        pa.add_close(p, s, q, small(rng, k)).unwrap();
                    }
                }
            }
        }
        pa
    }

    fn random_wnwa(rng: &mut ChaCha8Rng, k: Semiring) -> Wnwa {
        let mut a = Wnwa::new(k, vec!["p", "q"]).unwrap();
        for q in 0..2 {
            a.add_iota(q, small(rng, k)).unwrap();
            a.add_kappa(q, small(rng, k)).unwrap();
            for r in 0..2 {
                for l in ["a", "b"] {
                    a.add_internal(q, l, r, small(rng, k)).unwrap();
                    a.add_call(q, l, r, small(rng, k)).unwrap();
                    for p in 0..2 {
                        a.add_return(q, p, l, r, small(rng, k)).unwrap();
                    }
                }
            }
        }
        a
    }

    #[test]
    fn wpa_to_wnwa_agrees() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let g = Guards::default();
        let alphabet = vec!["a".to_string(), "b".to_string()];
        for _ in 0..4 {
            let pa = random_wpa(&mut rng, Semiring::Natural);
            let a = wpa_to_wnwa(&pa).unwrap();
            for n in 1..=4 {
                for nw in enumerate_nested_words(&alphabet, n, &g).unwrap() {
                    let t = phi_circ(&nw);
                    assert_eq!(a.behavior(&nw), pa.behavior(&t), "{nw}");
                    assert_eq!(pa.behavior(&t), pa.behavior_by_runs(&t, &g).unwrap(), "{nw}");
                }
            }
        }
    }

    #[test]
    fn wnwa_to_wpa_agrees() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let g = Guards::default();
        let alphabet = vec!["a".to_string(), "b".to_string()];
        for _ in 0..4 {
            let a = random_wnwa(&mut rng, Semiring::Natural);
            let pa = wnwa_to_wpa(&a).unwrap();
            for n in 1..=4 {
                for nw in enumerate_nested_words(&alphabet, n, &g).unwrap() {
                    assert_eq!(pa.behavior(&phi_circ(&nw)), a.behavior(&nw), "{nw}");
                    assert_eq!(a.behavior(&nw), a.behavior_bruteforce(&nw, &g).unwrap(), "{nw}");
                }
            }
        }
    }
}
