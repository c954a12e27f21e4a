//! Sentences of the restricted first-order fragment defining the projections of sandwich systems.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::AlgebraicSystem;
use crate::error::{Error, Result};
use crate::guard::Guards;
use crate::logic::macros::{call, max, min, succ};
use crate::logic::{and, and_all, arrow, edge, eq, exists1, forall1, implies, konst, lab, less, neg, or, or_all};
use crate::logic::{plus, Formula, Fresh};
use crate::semiring::Weight;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Tok {
    Letter(String),
    Hole,
}

fn pattern(sys: &AlgebraicSystem, w: &[String]) -> Vec<Tok> {
    w.iter().map(|s| if sys.is_variable(s) { Tok::Hole } else { Tok::Letter(s.clone()) }).collect()
}

#[derive(Debug, Default)]
struct Trie {
    letters: BTreeMap<String, Trie>,
    hole: Option<Box<Trie>>,
    ends: BTreeSet<String>,
}

impl Trie {
    /// Inserts a pattern `a t1 … tm b`.
    fn insert(&mut self, p: &[Tok]) {
        let Tok::Letter(a) = &p[0] else { unreachable!("patterns start with a letter") };
        let mut node = self.letters.entry(a.clone()).or_default();
        for t in &p[1..p.len() - 1] {
            node = match t {
                Tok::Letter(c) => node.letters.entry(c.clone()).or_default(),
                Tok::Hole => node.hole.get_or_insert_with(Default::default),
            };
        }
        let Tok::Letter(b) = &p[p.len() - 1] else { unreachable!("patterns end with a letter") };
        node.ends.insert(b.clone());
    }
}

fn falsum(x: &str) -> Formula {
    less(x, x)
}

fn pattern_sets(sys: &AlgebraicSystem, vars: &BTreeSet<String>) -> Result<BTreeMap<String, BTreeSet<Vec<Tok>>>> {
    let mut out = BTreeMap::new();
    for v in vars {
        out.insert(v.clone(), sys.poly(v)?.support().map(|w| pattern(sys, w)).collect());
    }
    Ok(out)
}

/// The first clash between pattern sets of distinct reachable variables, as `(earlier, later, pattern)`.
fn clash(sys: &AlgebraicSystem, y: &str) -> Result<Option<(String, String, Vec<Tok>)>> {
    let reach = sys.reachable(y);
    let sets = pattern_sets(sys, &reach)?;
    let order: Vec<&String> = sys.variables().iter().filter(|v| reach.contains(*v)).collect();
    for (i, x) in order.iter().enumerate() {
        for z in &order[i + 1..] {
            if let Some(p) = sets[*x].intersection(&sets[*z]).next() {
                return Ok(Some(((*x).clone(), (*z).clone(), p.clone())));
            }
        }
    }
    Ok(None)
}

/// Substitutes leading variable occurrences until the pattern sets of reachable variables are disjoint.
fn separate(mut sys: AlgebraicSystem, y: &str, guards: &Guards) -> Result<AlgebraicSystem> {
    let mut steps = 0usize;
    while let Some((x, z, p)) = clash(&sys, y)? {
        steps += 1;
        if steps > guards.unfold_steps {
            return Err(Error::NormalFormUnreachable(format!("patterns of {x} and {z} stay overlapping")));
        }
        let pick = |v: &str| -> Result<Option<Vec<String>>> {
            Ok(sys
                .poly(v)?
                .support()
                .find(|w| pattern(&sys, w) == p && w.iter().any(|s| sys.is_variable(s)))
                .cloned())
        };
        let target = match pick(&z)? {
            Some(w) => (z.clone(), w),
            None => match pick(&x)? {
                Some(w) => (x.clone(), w),
                None => {
                    return Err(Error::NormalFormUnreachable(format!(
                        "{x} and {z} share a terminal word"
                    )))
                }
            },
        };
        sys = sys.substitute(&target.0, &target.1, 0)?;
    }
    Ok(sys)
}

struct Builder<'a> {
    sys: &'a AlgebraicSystem,
    tries: BTreeMap<String, Trie>,
    fresh: Fresh,
}

impl Builder<'_> {
    fn var(&mut self, base: &str) -> String {
        self.fresh.like(base)
    }

    fn lab_any(&self, letters: impl Iterator<Item = String>, x: &str) -> Formula {
        or_all(letters.map(|a| lab(&a, x)).collect()).unwrap_or_else(|| falsum(x))
    }

    /// `Pat_X(x, y)`: the arc `(x, y)` has the pattern of some word of `P_X`.
    fn pat(&mut self, v: &str, x: &str, y: &str) -> Result<Formula> {
        let trie = self.tries.remove(v).expect("trie for every reachable variable");
        let out = self.pat_root(&trie, x, y);
        self.tries.insert(v.to_string(), trie);
        out
    }

    fn pat_root(&mut self, trie: &Trie, x: &str, y: &str) -> Result<Formula> {
        if trie.letters.is_empty() {
            return Ok(falsum(x));
        }
        let mut parts = alloc::vec![self.lab_any(trie.letters.keys().cloned(), x)];
        for (a, child) in &trie.letters {
            parts.push(arrow(&lab(a, x), self.node(child, x, y)?)?);
        }
        Ok(and_all(parts).expect("non-empty"))
    }

    fn node(&mut self, trie: &Trie, e: &str, y: &str) -> Result<Formula> {
        let u = self.var("u");
        let at_end = eq(&u, y);
        let c1 = if trie.ends.is_empty() {
            neg(&at_end)?
        } else {
            arrow(&at_end, self.lab_any(trie.ends.iter().cloned(), y))?
        };
        let plain = and(less(&u, y), neg(&call(&u))?);
        let c2 = if trie.letters.is_empty() {
            neg(&plain)?
        } else {
            let mut parts = alloc::vec![self.lab_any(trie.letters.keys().cloned(), &u)];
            for (c, child) in &trie.letters {
                parts.push(arrow(&lab(c, &u), self.node(child, &u, y)?)?);
            }
            arrow(&plain, and_all(parts).expect("non-empty"))?
        };
        let opened = and(less(&u, y), call(&u));
        let c3 = match &trie.hole {
            None => neg(&opened)?,
            Some(child) => {
                let r = self.var("r");
                let rest = self.node(child, &r, y)?;
                arrow(&opened, forall1(&r, arrow(&edge(&u, &r), rest)?))?
            }
        };
        Ok(forall1(&u, arrow(&succ(e, &u), and(c1, and(c2, c3)))?))
    }

    /// The positions after `e` and before `y` spell `toks`, with holes as arcs.
    fn chain(&mut self, e: &str, toks: &[String], y: &str) -> Result<Formula> {
        let u = self.var("u");
        let body = match toks.split_first() {
            None => eq(&u, y),
            Some((t, rest)) if self.sys.is_variable(t) => {
                let r = self.var("r");
                let inner = and(self.pat(t, &u, &r)?, self.chain(&r, rest, y)?);
                and_all(alloc::vec![less(&u, y), call(&u), forall1(&r, arrow(&edge(&u, &r), inner)?)])
                    .expect("non-empty")
            }
            Some((c, rest)) => and_all(alloc::vec![
                less(&u, y),
                lab(c, &u),
                neg(&call(&u))?,
                self.chain(&u, rest, y)?,
            ])
            .expect("non-empty"),
        };
        Ok(forall1(&u, arrow(&succ(e, &u), body)?))
    }

    /// `M_w(x)`: `x` is a call whose arc carries the word `w` with children of the right variables.
    fn matches(&mut self, w: &[String], x: &str) -> Result<Formula> {
        let y = self.var("y");
        let body = and_all(alloc::vec![
            lab(&w[0], x),
            lab(&w[w.len() - 1], &y),
            self.chain(x, &w[1..w.len() - 1], &y)?,
        ])
        .expect("non-empty");
        Ok(and(call(x), forall1(&y, arrow(&edge(x, &y), body)?)))
    }
}

/// A sentence `φ` over nested words with `Σ_ν ⟦φ⟧(w, ν) = (S_y, w)` for every word `w`.
///
/// The system must be in sandwich normal form.
pub fn system_to_srfo(sys: &AlgebraicSystem, y: &str, guards: &Guards) -> Result<Formula> {
    if !sys.check_class().sandwich_normal {
        return Err(Error::SystemClass("the system is not in sandwich normal form".into()));
    }
    let k = sys.semiring();
    let singles: Vec<(String, Weight)> = sys
        .alphabet()
        .iter()
        .filter_map(|a| sys.poly(y).ok()?.coeff(core::slice::from_ref(a)).map(|w| (a.clone(), w.clone())))
        .collect();
    let stripped = separate(sys.strip_short_words(1, guards)?, y, guards)?;
    let reach = stripped.reachable(y);

    let mut tries = BTreeMap::new();
    for v in &reach {
        let mut t = Trie::default();
        for w in stripped.poly(v)?.support() {
            t.insert(&pattern(&stripped, w));
        }
        tries.insert(v.clone(), t);
    }
    let mut b = Builder { sys: &stripped, tries, fresh: Fresh::default() };

    let x = b.var("x");
    let mut parts = Vec::new();
    if !singles.is_empty() {
        let one = plus(&and(min(&x), max(&x)))?;
        let lab_w = or_all(singles.iter().map(|(a, w)| and(lab(a, &x), konst(w.clone()))).collect())
            .expect("non-empty");
        parts.push(exists1(&x, and(one, lab_w)));
    }

    let (x1, y1) = (b.var("x"), b.var("y"));
    let root = and(edge(&x1, &y1), b.pat(y, &x1, &y1)?);
    let whole = forall1(&x1, forall1(&y1, arrow(&and(min(&x1), max(&y1)), root)?));
    let nonempty = exists1(&x1, eq(&x1, &x1));
    let psi = plus(&and(nonempty, whole))?;

    let xc = b.var("x");
    let mut weighted = Vec::new();
    for v in &reach {
        for (w, c) in stripped.poly(v)?.terms() {
            let m = plus(&b.matches(w, &xc)?)?;
            weighted.push(and(m, konst(c.clone())));
        }
    }
    let node_weight = or_all(weighted).unwrap_or_else(|| konst(k.zero()));
    let tree = and(psi, forall1(&xc, implies(&call(&xc), node_weight)?));
    parts.push(tree);
    let mut it = parts.into_iter().rev();
    let last = it.next().expect("tree part");
    Ok(it.fold(last, |acc, p| or(p, acc)))
}

#[cfg(test)]
mod tests {
    use super::super::tests::{motzkin, w};
    use super::*;
    use crate::algebraic::sandwich_normal_form;
    use crate::algebraic::all_words;
    use crate::logic::{classify, exists_nu};
    use crate::semiring::Semiring;

    fn sandwich_motzkin() -> AlgebraicSystem {
        let k = Semiring::Natural;
        let mut sys = AlgebraicSystem::new(k, vec!["a"], vec!["Y"]).unwrap();
        sys.add_term("Y", w("a"), k.one()).unwrap();
        sys.add_term("Y", w("a a"), k.one()).unwrap();
        sys.add_term("Y", w("a Y a"), k.count(2)).unwrap();
        sys.add_term("Y", w("a Y Y a"), k.count(2)).unwrap();
        sys.add_term("Y", w("a Y Y Y a"), k.one()).unwrap();
        sys
    }

    #[test]
    fn sandwich_variant_shifts_motzkin() {
        let m = motzkin();
        let s = sandwich_motzkin();
        assert!(s.check_class().sandwich_normal);
        for n in 1..=8 {
            let u = vec!["a".to_string(); n];
            assert_eq!(s.coefficient("Y", &u).unwrap(), m.coefficient("X", &u).unwrap(), "{n}");
        }
    }

    #[test]
    fn sentence_for_motzkin_variant() {
        let g = Guards::default();
        let s = sandwich_motzkin();
        let f = system_to_srfo(&s, "Y", &g).unwrap();
        assert!(classify(&f).s_rfo);
        for n in 1..=5 {
            let u = vec!["a".to_string(); n];
            assert_eq!(exists_nu(&f, Semiring::Natural, &u, &g).unwrap(), s.coefficient("Y", &u).unwrap(), "{n}");
        }
    }

    #[test]
    fn sentence_for_two_letters() {
        let g = Guards::default();
        let k = Semiring::Natural;
        let mut s = AlgebraicSystem::new(k, vec!["a", "b"], vec!["Y", "Z"]).unwrap();
        s.add_term("Y", w("a"), k.count(3)).unwrap();
        s.add_term("Y", w("a Z b"), k.count(2)).unwrap();
        s.add_term("Y", w("a b"), k.one()).unwrap();
        s.add_term("Z", w("b Z a"), k.one()).unwrap();
        s.add_term("Z", w("b a"), k.count(5)).unwrap();
        s.add_term("Z", w("b"), k.one()).unwrap();
        let f = system_to_srfo(&s, "Y", &g).unwrap();
        assert!(classify(&f).s_rfo);
        for u in all_words(&w("a b"), 5, &g).unwrap().into_iter().skip(1) {
            assert_eq!(exists_nu(&f, k, &u, &g).unwrap(), s.coefficient("Y", &u).unwrap(), "{u:?}");
        }
    }

    #[test]
    fn sentence_from_gnf() {
        let g = Guards::default();
        let (s, x) = sandwich_normal_form(&motzkin(), "X", &g).unwrap();
        let r = system_to_srfo(&s, &x, &g);
        if let Ok(f) = r {
            for n in 1..=4 {
                let u = vec!["a".to_string(); n];
                assert_eq!(exists_nu(&f, Semiring::Natural, &u, &g).unwrap(), s.coefficient(&x, &u).unwrap());
            }
        } else {
            assert!(matches!(r, Err(Error::NormalFormUnreachable(_))));
        }
    }

    #[test]
    fn rejects_other_shapes() {
        assert!(matches!(system_to_srfo(&motzkin(), "X", &Guards::default()), Err(Error::SystemClass(_))));
    }
}
