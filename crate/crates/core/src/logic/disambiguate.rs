//! Syntactic disambiguation and fragment membership.

use alloc::vec::Vec;

use super::{and, exists1, forall1, forall2, less, member, neg, or, Atom, Formula, Fresh};
use crate::error::{Error, Result};

/// `φ⁺`: a classical formula whose weighted semantics is the characteristic function of `φ`.
pub fn plus(f: &Formula) -> Result<Formula> {
    let mut fresh = Fresh::avoiding([f]);
    plus_with(f, &mut fresh)
}

/// `φ⁻`, characteristic function of `¬φ`.
pub fn minus(f: &Formula) -> Result<Formula> {
    let mut fresh = Fresh::avoiding([f]);
    minus_with(f, &mut fresh)
}

/// `φ ⇒ ψ`, i.e. `φ⁻ ∨ (φ⁺ ∧ ψ)`.
pub fn implies(f: &Formula, g: Formula) -> Result<Formula> {
    let mut fresh = Fresh::avoiding([f, &g]);
    implies_with(f, g, &mut fresh)
}

pub(crate) fn implies_with(f: &Formula, g: Formula, fresh: &mut Fresh) -> Result<Formula> {
    Ok(or(minus_with(f, fresh)?, and(plus_with(f, fresh)?, g)))
}

/// `X < Y`: the least position where the sets differ belongs to `Y`.
pub fn set_less(x: &str, y: &str) -> Formula {
    let mut fresh = Fresh::default();
    fresh.reserve(x);
    fresh.reserve(y);
    set_less_with(x, y, &mut fresh)
}

fn set_less_with(x: &str, y: &str, fresh: &mut Fresh) -> Formula {
    let p = fresh.like("y");
    let z = fresh.like("z");
    let agree = or(
        and(member(&z, x), member(&z, y)),
        and(Formula::NegAtom(Atom::In(z.clone(), x.into())), Formula::NegAtom(Atom::In(z.clone(), y.into()))),
    );
    exists1(
        &p,
        and(
            member(&p, y),
            and(
                Formula::NegAtom(Atom::In(p.clone(), x.into())),
                forall1(&z, or(super::leq(&p, &z), agree)),
            ),
        ),
    )
}

pub(crate) fn plus_with(f: &Formula, fresh: &mut Fresh) -> Result<Formula> {
    Ok(match f {
        Formula::Const(_) => return Err(Error::ConstantInClassical),
        Formula::Atom(_) | Formula::NegAtom(_) => f.clone(),
        Formula::Or(a, b) => or(plus_with(a, fresh)?, and(minus_with(a, fresh)?, plus_with(b, fresh)?)),
        Formula::And(a, b) => and(plus_with(a, fresh)?, plus_with(b, fresh)?),
        Formula::Exists1(x, body) => {
            let guard = first_guard(x, body, fresh)?;
            exists1(x, and(plus_with(body, fresh)?, guard))
        }
        Formula::Exists2(x, body) => {
            let guard = first_guard_set(x, body, fresh)?;
            Formula::Exists2(x.clone(), alloc::boxed::Box::new(and(plus_with(body, fresh)?, guard)))
        }
        Formula::Forall1(x, body) => forall1(x, plus_with(body, fresh)?),
        Formula::Forall2(x, body) => forall2(x, plus_with(body, fresh)?),
    })
}

pub(crate) fn minus_with(f: &Formula, fresh: &mut Fresh) -> Result<Formula> {
    Ok(match f {
        Formula::Const(_) => return Err(Error::ConstantInClassical),
        Formula::Atom(a) => Formula::NegAtom(a.clone()),
        Formula::NegAtom(a) => Formula::Atom(a.clone()),
        Formula::Or(a, b) => and(minus_with(a, fresh)?, minus_with(b, fresh)?),
        Formula::And(a, b) => or(minus_with(a, fresh)?, and(plus_with(a, fresh)?, minus_with(b, fresh)?)),
        Formula::Exists1(x, body) => forall1(x, minus_with(body, fresh)?),
        Formula::Exists2(x, body) => forall2(x, minus_with(body, fresh)?),
        Formula::Forall1(x, body) => {
            let guard = first_guard(x, &neg(body)?, fresh)?;
            exists1(x, and(minus_with(body, fresh)?, guard))
        }
        Formula::Forall2(x, body) => {
            let guard = first_guard_set(x, &neg(body)?, fresh)?;
            Formula::Exists2(x.clone(), alloc::boxed::Box::new(and(minus_with(body, fresh)?, guard)))
        }
    })
}

/// `∀y.(y < x ∧ ψ(y))⁻`
fn first_guard(x: &str, body: &Formula, fresh: &mut Fresh) -> Result<Formula> {
    let y = fresh.like("y");
    let shifted = body.subst(x, &y, fresh);
    Ok(forall1(&y, minus_with(&and(less(&y, x), shifted), fresh)?))
}

/// `∀Y.(Y < X ∧ ψ(Y))⁻`
fn first_guard_set(x: &str, body: &Formula, fresh: &mut Fresh) -> Result<Formula> {
    let y = fresh.like("Y");
    let shifted = body.subst(x, &y, fresh);
    let order = set_less_with(&y, x, fresh);
    Ok(forall2(&y, minus_with(&and(order, shifted), fresh)?))
}

/// Reads back a candidate `ψ` with `ψ⁺ = f`, following the shapes produced by [`plus`].
fn decode(f: &Formula) -> Option<Formula> {
    Some(match f {
        Formula::Const(_) => return None,
        Formula::Atom(_) | Formula::NegAtom(_) => f.clone(),
        Formula::Or(a, rest) => match rest.as_ref() {
            Formula::And(_, c) => or(decode(a)?, decode(c)?),
            _ => return None,
        },
        Formula::And(a, b) => and(decode(a)?, decode(b)?),
        Formula::Exists1(x, body) => match body.as_ref() {
            Formula::And(p, g) if matches!(g.as_ref(), Formula::Forall1(..)) => exists1(x, decode(p)?),
            _ => return None,
        },
        Formula::Exists2(x, body) => match body.as_ref() {
            Formula::And(p, g) if matches!(g.as_ref(), Formula::Forall2(..)) => {
                Formula::Exists2(x.clone(), alloc::boxed::Box::new(decode(p)?))
            }
            _ => return None,
        },
        Formula::Forall1(x, body) => forall1(x, decode(body)?),
        Formula::Forall2(x, body) => forall2(x, decode(body)?),
    })
}

/// Whether `f` is syntactically unambiguous, i.e. `f = ψ⁺` up to renaming of bound variables.
pub fn is_synt_unambiguous(f: &Formula) -> bool {
    match decode(f) {
        Some(candidate) => plus(&candidate).is_ok_and(|p| p.alpha_eq(f)),
        None => false,
    }
}

/// Membership of a formula in the fragments of the logic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Fragments {
    pub synt_unambiguous: bool,
    pub a_umso: bool,
    pub w_umso: bool,
    pub s_rmso: bool,
    pub sw_rmso: bool,
    pub fo: bool,
    pub s_rfo: bool,
    pub s_remso: bool,
}

impl Fragments {
    /// `(name, member)` pairs in a fixed order, ending with `general`.
    pub fn flags(&self) -> Vec<(&'static str, bool)> {
        alloc::vec![
            ("synt_unambiguous", self.synt_unambiguous),
            ("aUMSO", self.a_umso),
            ("wUMSO", self.w_umso),
            ("sRMSO", self.s_rmso),
            ("swRMSO", self.sw_rmso),
            ("FO", self.fo),
            ("sRFO", self.s_rfo),
            ("sREMSO", self.s_remso),
            ("general", true),
        ]
    }
}

fn a_umso(f: &Formula) -> bool {
    match f {
        Formula::Const(_) => true,
        _ if is_synt_unambiguous(f) => true,
        Formula::And(a, b) | Formula::Or(a, b) => a_umso(a) && a_umso(b),
        _ => false,
    }
}

fn w_umso(f: &Formula) -> bool {
    match f {
        Formula::Const(_) => true,
        _ if is_synt_unambiguous(f) => true,
        Formula::And(a, b) | Formula::Or(a, b) => w_umso(a) && w_umso(b),
        Formula::Exists1(_, b) | Formula::Exists2(_, b) => w_umso(b),
        _ => false,
    }
}

fn restricted(f: &Formula, first_order_body: &dyn Fn(&Formula) -> bool) -> bool {
    let mut ok = true;
    f.visit(&mut |g| match g {
        Formula::Forall1(_, b) => ok = ok && first_order_body(b),
        Formula::Forall2(_, b) => ok = ok && is_synt_unambiguous(b),
        _ => {}
    });
    ok
}

/// Classifies `f` into the fragments.
pub fn classify(f: &Formula) -> Fragments {
    let s_rmso = restricted(f, &a_umso);
    let sw_rmso = s_rmso || restricted(f, &w_umso);
    let fo = !f.has_set_quantifiers();
    let mut prefix = f;
    while let Formula::Exists2(_, b) = prefix {
        prefix = b;
    }
    let s_remso = !prefix.has_set_quantifiers() && restricted(prefix, &a_umso);
    Fragments {
        synt_unambiguous: is_synt_unambiguous(f),
        a_umso: a_umso(f),
        w_umso: w_umso(f),
        s_rmso,
        sw_rmso,
        fo,
        s_rfo: s_rmso && fo,
        s_remso,
    }
}

#[cfg(test)]
mod tests {
    use super::super::eval::{eval_boolean, eval_weighted, exists_nu, Assignment, Structure};
    use super::super::*;
    use super::*;
    use crate::guard::Guards;
    use crate::nested_word::NestedWord;
    use crate::semiring::Semiring;
    use crate::text::enumerate_tdo;
    use crate::Text;

    fn check_char(f: &Formula) {
        let g = Guards::default();
        let p = plus(f).unwrap();
        let m = minus(f).unwrap();
        assert!(is_synt_unambiguous(&p), "{p}");
        assert!(is_synt_unambiguous(&m), "{m}");
        for word in ["ab", "aab", "abba"] {
            let letters: Vec<String> = word.chars().map(|c| c.into()).collect();
            for order in enumerate_tdo(letters.len(), &g).unwrap() {
                let t = Text::new(letters.clone(), order).unwrap();
                let s = Structure::Text(&t);
                let a = Assignment::new();
                let truth = eval_boolean(f, s, &a, &g).unwrap();
                for k in [Semiring::Natural, Semiring::Tropical] {
                    let expect = if truth { k.one() } else { k.zero() };
                    assert_eq!(eval_weighted(&p, k, s, &a, &g).unwrap(), expect, "{f} on {t}");
                    let other = if truth { k.zero() } else { k.one() };
                    assert_eq!(eval_weighted(&m, k, s, &a, &g).unwrap(), other, "{f} on {t}");
                }
            }
        }
    }

    #[test]
    fn characteristic_functions() {
        check_char(&exists1("x", lab("a", "x")));
        check_char(&forall1("x", or(lab("a", "x"), exists1("y", and(edge("x", "y"), lab("b", "y"))))));
        check_char(&exists2("X", exists1("x", and(member("x", "X"), lab("b", "x")))));
        check_char(&forall2("X", or(exists1("x", member("x", "X")), forall1("y", lab("a", "y")))));
    }

    #[test]
    fn nestings_with_an_arc() {
        let f = plus(&exists1("x", exists1("y", edge("x", "y")))).unwrap();
        let k = Semiring::Natural;
        let w: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        assert_eq!(exists_nu(&f, k, &w, &Guards::default()).unwrap(), k.count(3));
        let nw = NestedWord::from_chars("ab", [(1, 2)]).unwrap();
        let raw = exists1("x", exists1("y", leq("x", "y")));
        let a = Assignment::new();
        let g = Guards::default();
        assert_eq!(eval_weighted(&raw, k, Structure::Nested(&nw), &a, &g).unwrap(), k.count(3));
    }

    #[test]
    fn fragments() {
        let k = Semiring::Natural;
        let one = konst(k.one());
        assert!(!is_synt_unambiguous(&exists1("x", lab("a", "x"))));
        assert!(is_synt_unambiguous(&lab("a", "x")));
        let c = classify(&forall1("x", exists1("y", one.clone())));
        assert!(c.sw_rmso && !c.s_rmso && c.fo);
        let c = classify(&forall1("x", or(one.clone(), plus(&lab("a", "x")).unwrap())));
        assert!(c.s_rmso && c.s_rfo && c.s_remso);
        let c = classify(&exists2("X", forall1("x", member("x", "X"))));
        assert!(c.s_remso && !c.fo && c.s_rmso);
        let c = classify(&forall2("X", one));
        assert!(!c.s_rmso && !c.sw_rmso);
    }

    #[test]
    fn implication() {
        let k = Semiring::Natural;
        let g = Guards::default();
        let f = forall1("x", implies(&lab("a", "x"), konst(k.count(2))).unwrap());
        let nw = NestedWord::from_chars("aba", []).unwrap();
        assert_eq!(eval_weighted(&f, k, Structure::Nested(&nw), &Assignment::new(), &g).unwrap(), k.count(4));
    }
}
