//! Derived formulas over nested words.

use alloc::string::String;
use alloc::vec::Vec;

use super::{and, arrow, edge, exists1, forall1, implies, leq, less, member, neg, or, Atom, Formula, Fresh};
use crate::error::Result;
use crate::semiring::Weight;

fn fresh_for(args: &[&str]) -> Fresh {
    let mut fresh = Fresh::default();
    for a in args {
        fresh.reserve(a);
    }
    fresh
}

fn pick(fresh: &mut Fresh, base: &str) -> String {
    fresh.like(base)
}

/// `call(x) = ∃y.ν(x, y)`
pub fn call(x: &str) -> Formula {
    let y = pick(&mut fresh_for(&[x]), "y");
    exists1(&y, edge(x, &y))
}

/// `return(x) = ∃y.ν(y, x)`
pub fn ret(x: &str) -> Formula {
    let y = pick(&mut fresh_for(&[x]), "y");
    exists1(&y, edge(&y, x))
}

/// `min(x) = ∀y.x ≤ y`
pub fn min(x: &str) -> Formula {
    let y = pick(&mut fresh_for(&[x]), "y");
    forall1(&y, leq(x, &y))
}

/// `max(x) = ∀y.y ≤ x`
pub fn max(x: &str) -> Formula {
    let y = pick(&mut fresh_for(&[x]), "y");
    forall1(&y, leq(&y, x))
}

/// `succ(x, y) = x < y ∧ ∀z.(z ≤ x ∨ y ≤ z)`
pub fn succ(x: &str, y: &str) -> Formula {
    let z = pick(&mut fresh_for(&[x, y]), "z");
    and(less(x, y), forall1(&z, or(leq(&z, x), leq(y, &z))))
}

/// `X ∩ Y = ∅`
pub fn disjoint(x: &str, y: &str) -> Formula {
    let z = pick(&mut fresh_for(&[x, y]), "z");
    forall1(&z, or(Formula::NegAtom(Atom::In(z.clone(), x.into())), Formula::NegAtom(Atom::In(z.clone(), y.into()))))
}

/// Weighted count of the arcs open after `x`: each call up to `x` contributes `up`,
/// each return up to `x` contributes `down`.
pub fn open(x: &str, up: Weight, down: Weight) -> Result<Formula> {
    let mut fresh = fresh_for(&[x]);
    let y = pick(&mut fresh, "y");
    let calls = implies(&and(leq(&y, x), call(&y)), Formula::Const(up))?;
    let rets = implies(&and(leq(&y, x), ret(&y)), Formula::Const(down))?;
    Ok(forall1(&y, and(calls, rets)))
}

/// `first_ν(x) = call(x) ∧ ∀y.(call(y) → x ≤ y)`
pub fn first_nu(x: &str) -> Result<Formula> {
    let y = pick(&mut fresh_for(&[x]), "y");
    Ok(and(call(x), forall1(&y, arrow(&call(&y), leq(x, &y))?)))
}

/// `next_ν(x, y)`: `y` is the first call or return after `x`.
pub fn next_nu(x: &str, y: &str) -> Result<Formula> {
    let z = pick(&mut fresh_for(&[x, y]), "z");
    let quiet = and(neg(&call(&z))?, neg(&ret(&z))?);
    Ok(and(
        less(x, y),
        and(or(call(y), ret(y)), forall1(&z, arrow(&and(less(x, &z), less(&z, y)), quiet)?)),
    ))
}

/// `φ∘(x, y, X)`: `x < y` and the innermost arc enclosing both starts in `X`.
pub fn circ_order(x: &str, y: &str, set: &str) -> Result<Formula> {
    let mut fresh = fresh_for(&[x, y, set]);
    let [z1, z2, w1, w2]: [String; 4] = ["z", "z", "w", "w"].map(|b| pick(&mut fresh, b));
    let inner = and(
        less(&z1, &w1),
        and(leq(&w1, x), and(leq(x, y), and(leq(y, &w2), less(&w2, &z2)))),
    );
    let innermost = forall1(&w1, forall1(&w2, arrow(&inner, Formula::NegAtom(Atom::Edge(w1.clone(), w2.clone())))?));
    let body: Vec<Formula> = alloc::vec![
        leq(&z1, x),
        leq(x, y),
        leq(y, &z2),
        edge(&z1, &z2),
        member(&z1, set),
        innermost,
    ];
    Ok(and(less(x, y), exists1(&z1, exists1(&z2, super::and_all(body).expect("non-empty")))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::guard::Guards;
    use crate::logic::{eval_boolean, eval_weighted, Assignment, Structure, Value};
    use crate::nested_word::enumerate_nested_words;
    use crate::semiring::Semiring;
    use crate::NestedWord;

    #[test]
    fn depth_by_open() {
        let k = Semiring::Arctic;
        let g = Guards::default();
        let f = exists1("x", open("x", k.parse("1").unwrap(), k.parse("-1").unwrap()).unwrap());
        let alphabet = ["a".into()];
        for n in 1..=5 {
            for nw in enumerate_nested_words(&alphabet, n, &g).unwrap() {
                let v = eval_weighted(&f, k, Structure::Nested(&nw), &Assignment::new(), &g).unwrap();
                assert_eq!(v, k.parse(&alloc::format!("{}", nw.nesting_depth())).unwrap(), "{nw}");
            }
        }
    }

    #[test]
    fn positions() {
        let g = Guards::default();
        let nw = NestedWord::from_chars("abcab", [(1, 3), (4, 5)]).unwrap();
        let s = Structure::Nested(&nw);
        let at = |pairs: &[(&str, usize)]| -> Assignment {
            pairs.iter().map(|(v, p)| (String::from(*v), Value::Position(*p))).collect()
        };
        assert!(eval_boolean(&first_nu("x").unwrap(), s, &at(&[("x", 1)]), &g).unwrap());
        assert!(!eval_boolean(&first_nu("x").unwrap(), s, &at(&[("x", 4)]), &g).unwrap());
        assert!(eval_boolean(&next_nu("x", "y").unwrap(), s, &at(&[("x", 1), ("y", 3)]), &g).unwrap());
        assert!(!eval_boolean(&next_nu("x", "y").unwrap(), s, &at(&[("x", 1), ("y", 4)]), &g).unwrap());
        assert!(eval_boolean(&succ("x", "y"), s, &at(&[("x", 2), ("y", 3)]), &g).unwrap());
        assert!(eval_boolean(&min("x"), s, &at(&[("x", 1)]), &g).unwrap());
        assert!(eval_boolean(&max("x"), s, &at(&[("x", 5)]), &g).unwrap());
        assert!(eval_boolean(&ret("x"), s, &at(&[("x", 5)]), &g).unwrap());
    }
}
