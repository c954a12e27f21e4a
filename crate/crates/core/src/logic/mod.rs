//! Weighted monadic second-order logic over nested words and texts.
//!
//! First-order variables start with a lowercase letter, second-order ones with an uppercase letter.
//! Negation is only allowed on atoms; [`neg`] pushes a classical negation down to them.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::semiring::Weight;

mod disambiguate;
mod eval;
pub mod macros;
mod scheme;

pub use disambiguate::{classify, implies, is_synt_unambiguous, minus, plus, set_less, Fragments};
pub use eval::{eval_boolean, eval_weighted, exists_nu, exists_tdo, Assignment, Evaluator, Structure, Value};
pub use scheme::{
    check_unambiguous, deftrans_apply, phi_circ_parameters, phi_circ_scheme, translate_formula,
    DefinitionScheme, Signature, Transduced,
};

/// An atomic formula.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    /// `x = y`
    Eq(String, String),
    /// `Lab_a(x)`, letter first.
    Lab(String, String),
    /// `x ≤ y` in the first (linear) order.
    Leq(String, String),
    /// `ν(x, y)` on nested words, `x ≤₂ y` on texts.
    Edge(String, String),
    /// `x ∈ X`
    In(String, String),
}

/// A weighted formula.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Const(Weight),
    Atom(Atom),
    NegAtom(Atom),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Exists1(String, Box<Formula>),
    Exists2(String, Box<Formula>),
    Forall1(String, Box<Formula>),
    Forall2(String, Box<Formula>),
}

pub fn is_first_order_name(v: &str) -> bool {
    v.chars().next().is_some_and(|c| c.is_lowercase())
}

pub fn is_second_order_name(v: &str) -> bool {
    v.chars().next().is_some_and(|c| c.is_uppercase())
}

fn s(v: &str) -> String {
    v.to_string()
}

/// `x = y`
pub fn eq(x: &str, y: &str) -> Formula {
    Formula::Atom(Atom::Eq(s(x), s(y)))
}

/// `Lab_a(x)`
pub fn lab(a: &str, x: &str) -> Formula {
    Formula::Atom(Atom::Lab(s(a), s(x)))
}

/// `x ≤ y`
pub fn leq(x: &str, y: &str) -> Formula {
    Formula::Atom(Atom::Leq(s(x), s(y)))
}

/// `x < y`, i.e. `¬(y ≤ x)`.
pub fn less(x: &str, y: &str) -> Formula {
    Formula::NegAtom(Atom::Leq(s(y), s(x)))
}

/// `ν(x, y)` or `x ≤₂ y`.
pub fn edge(x: &str, y: &str) -> Formula {
    Formula::Atom(Atom::Edge(s(x), s(y)))
}

/// `x ∈ X`
pub fn member(x: &str, set: &str) -> Formula {
    Formula::Atom(Atom::In(s(x), s(set)))
}

pub fn konst(w: Weight) -> Formula {
    Formula::Const(w)
}

pub fn and(a: Formula, b: Formula) -> Formula {
    Formula::And(Box::new(a), Box::new(b))
}

pub fn or(a: Formula, b: Formula) -> Formula {
    Formula::Or(Box::new(a), Box::new(b))
}

/// Right-nested conjunction; `None` for an empty list.
pub fn and_all(items: Vec<Formula>) -> Option<Formula> {
    items.into_iter().rev().reduce(|acc, f| and(f, acc))
}

/// Right-nested disjunction; `None` for an empty list.
pub fn or_all(items: Vec<Formula>) -> Option<Formula> {
    items.into_iter().rev().reduce(|acc, f| or(f, acc))
}

pub fn exists1(x: &str, f: Formula) -> Formula {
    Formula::Exists1(s(x), Box::new(f))
}

pub fn exists2(x: &str, f: Formula) -> Formula {
    Formula::Exists2(s(x), Box::new(f))
}

pub fn forall1(x: &str, f: Formula) -> Formula {
    Formula::Forall1(s(x), Box::new(f))
}

pub fn forall2(x: &str, f: Formula) -> Formula {
    Formula::Forall2(s(x), Box::new(f))
}

/// Classical negation in negation normal form.
pub fn neg(f: &Formula) -> Result<Formula> {
    Ok(match f {
        Formula::Const(_) => return Err(Error::ConstantInClassical),
        Formula::Atom(a) => Formula::NegAtom(a.clone()),
        Formula::NegAtom(a) => Formula::Atom(a.clone()),
        Formula::And(a, b) => or(neg(a)?, neg(b)?),
        Formula::Or(a, b) => and(neg(a)?, neg(b)?),
        Formula::Exists1(x, b) => forall1(x, neg(b)?),
        Formula::Exists2(x, b) => forall2(x, neg(b)?),
        Formula::Forall1(x, b) => exists1(x, neg(b)?),
        Formula::Forall2(x, b) => exists2(x, neg(b)?),
    })
}

/// Classical implication `a → b` as `¬a ∨ b`.
pub fn arrow(a: &Formula, b: Formula) -> Result<Formula> {
    Ok(or(neg(a)?, b))
}

/// A classical tautology with no free variables.
pub fn truth() -> Formula {
    forall1("t", eq("t", "t"))
}

impl Atom {
    pub fn vars(&self) -> [&str; 2] {
        match self {
            Atom::Eq(x, y) | Atom::Leq(x, y) | Atom::Edge(x, y) | Atom::In(x, y) => [x, y],
            Atom::Lab(_, x) => [x, x],
        }
    }

    fn map_vars(&self, f: &impl Fn(&str) -> String) -> Atom {
        match self {
            Atom::Eq(x, y) => Atom::Eq(f(x), f(y)),
            Atom::Lab(a, x) => Atom::Lab(a.clone(), f(x)),
            Atom::Leq(x, y) => Atom::Leq(f(x), f(y)),
            Atom::Edge(x, y) => Atom::Edge(f(x), f(y)),
            Atom::In(x, y) => Atom::In(f(x), f(y)),
        }
    }
}

impl Formula {
    /// `Free(φ)`.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
        match self {
            Formula::Const(_) => {}
            Formula::Atom(a) | Formula::NegAtom(a) => {
                for v in a.vars() {
                    if !bound.contains(&v) {
                        out.insert(v.to_string());
                    }
                }
            }
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Exists1(x, b) | Formula::Exists2(x, b) | Formula::Forall1(x, b) | Formula::Forall2(x, b) => {
                bound.push(x);
                b.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Every variable name occurring in the formula, free or bound.
    pub fn all_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Atom(a) | Formula::NegAtom(a) => {
                for v in a.vars() {
                    out.insert(v.to_string());
                }
            }
            Formula::Exists1(x, _) | Formula::Exists2(x, _) | Formula::Forall1(x, _) | Formula::Forall2(x, _) => {
                out.insert(x.clone());
            }
            _ => {}
        });
        out
    }

    /// Letters used in `Lab` atoms.
    pub fn letters(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Atom(Atom::Lab(a, _)) | Formula::NegAtom(Atom::Lab(a, _)) = f {
                out.insert(a.clone());
            }
        });
        out
    }

    /// Pre-order traversal.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Formula)) {
        f(self);
        match self {
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Formula::Exists1(_, b) | Formula::Exists2(_, b) | Formula::Forall1(_, b) | Formula::Forall2(_, b) => {
                b.visit(f)
            }
            _ => {}
        }
    }

    pub fn has_constants(&self) -> bool {
        let mut found = false;
        self.visit(&mut |f| found |= matches!(f, Formula::Const(_)));
        found
    }

    pub fn has_set_quantifiers(&self) -> bool {
        let mut found = false;
        self.visit(&mut |f| found |= matches!(f, Formula::Exists2(..) | Formula::Forall2(..)));
        found
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }

    /// Checks that variables are used with their sort.
    pub fn check_sorts(&self) -> Result<()> {
        let mut err = None;
        self.visit(&mut |f| {
            if err.is_some() {
                return;
            }
            let bad = match f {
                Formula::Atom(a) | Formula::NegAtom(a) => match a {
                    Atom::In(x, y) => (!is_first_order_name(x)).then(|| x.clone()).or_else(|| {
                        (!is_second_order_name(y)).then(|| y.clone())
                    }),
                    _ => a.vars().iter().find(|v| !is_first_order_name(v)).map(|v| v.to_string()),
                },
                Formula::Exists1(x, _) | Formula::Forall1(x, _) => (!is_first_order_name(x)).then(|| x.clone()),
                Formula::Exists2(x, _) | Formula::Forall2(x, _) => (!is_second_order_name(x)).then(|| x.clone()),
                _ => None,
            };
            if let Some(v) = bad {
                err = Some(Error::SortMisuse(format!("variable {v} in {}", head(f))));
            }
        });
        match err {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }

    /// Capture-avoiding renaming of free variables.
    pub fn rename_free(&self, map: &BTreeMap<String, String>, fresh: &mut Fresh) -> Formula {
        match self {
            Formula::Const(_) => self.clone(),
            Formula::Atom(a) => Formula::Atom(a.map_vars(&|v| map.get(v).cloned().unwrap_or_else(|| v.to_string()))),
            Formula::NegAtom(a) => {
                Formula::NegAtom(a.map_vars(&|v| map.get(v).cloned().unwrap_or_else(|| v.to_string())))
            }
            Formula::And(a, b) => and(a.rename_free(map, fresh), b.rename_free(map, fresh)),
            Formula::Or(a, b) => or(a.rename_free(map, fresh), b.rename_free(map, fresh)),
            Formula::Exists1(x, b) | Formula::Exists2(x, b) | Formula::Forall1(x, b) | Formula::Forall2(x, b) => {
                let mut inner = map.clone();
                inner.remove(x);
                let capture = inner.values().any(|v| v == x);
                let (binder, body) = if capture {
                    let y = fresh.like(x);
                    inner.insert(x.clone(), y.clone());
                    (y, b.rename_free(&inner, fresh))
                } else {
                    (x.clone(), b.rename_free(&inner, fresh))
                };
                let body = Box::new(body);
                match self {
                    Formula::Exists1(..) => Formula::Exists1(binder, body),
                    Formula::Exists2(..) => Formula::Exists2(binder, body),
                    Formula::Forall1(..) => Formula::Forall1(binder, body),
                    _ => Formula::Forall2(binder, body),
                }
            }
        }
    }

    /// `φ[x ↦ y]`, capture-avoiding.
    pub fn subst(&self, x: &str, y: &str, fresh: &mut Fresh) -> Formula {
        let mut map = BTreeMap::new();
        map.insert(x.to_string(), y.to_string());
        self.rename_free(&map, fresh)
    }

    /// Equality up to renaming of bound variables.
    pub fn alpha_eq(&self, other: &Formula) -> bool {
        alpha(self, other, &mut Vec::new())
    }
}

fn alpha<'a>(a: &'a Formula, b: &'a Formula, env: &mut Vec<(&'a str, &'a str)>) -> bool {
    let var_eq = |x: &str, y: &str, env: &Vec<(&str, &str)>| {
        for &(l, r) in env.iter().rev() {
            if l == x || r == y {
                return l == x && r == y;
            }
        }
        x == y
    };
    let atom_eq = |p: &Atom, q: &Atom, env: &Vec<(&str, &str)>| match (p, q) {
        (Atom::Lab(a1, x), Atom::Lab(a2, y)) => a1 == a2 && var_eq(x, y, env),
        (Atom::Eq(x1, y1), Atom::Eq(x2, y2))
        | (Atom::Leq(x1, y1), Atom::Leq(x2, y2))
        | (Atom::Edge(x1, y1), Atom::Edge(x2, y2))
        | (Atom::In(x1, y1), Atom::In(x2, y2)) => var_eq(x1, x2, env) && var_eq(y1, y2, env),
        _ => false,
    };
    match (a, b) {
        (Formula::Const(x), Formula::Const(y)) => x == y,
        (Formula::Atom(p), Formula::Atom(q)) | (Formula::NegAtom(p), Formula::NegAtom(q)) => atom_eq(p, q, env),
        (Formula::And(a1, b1), Formula::And(a2, b2)) | (Formula::Or(a1, b1), Formula::Or(a2, b2)) => {
            alpha(a1, a2, env) && alpha(b1, b2, env)
        }
        (Formula::Exists1(x, f), Formula::Exists1(y, g))
        | (Formula::Exists2(x, f), Formula::Exists2(y, g))
        | (Formula::Forall1(x, f), Formula::Forall1(y, g))
        | (Formula::Forall2(x, f), Formula::Forall2(y, g)) => {
            env.push((x, y));
            let r = alpha(f, g, env);
            env.pop();
            r
        }
        _ => false,
    }
}

fn head(f: &Formula) -> &'static str {
    match f {
        Formula::Const(_) => "k",
        Formula::Atom(Atom::Eq(..)) | Formula::NegAtom(Atom::Eq(..)) => "=",
        Formula::Atom(Atom::Lab(..)) | Formula::NegAtom(Atom::Lab(..)) => "lab",
        Formula::Atom(Atom::Leq(..)) | Formula::NegAtom(Atom::Leq(..)) => "<=",
        Formula::Atom(Atom::Edge(..)) | Formula::NegAtom(Atom::Edge(..)) => "edge",
        Formula::Atom(Atom::In(..)) | Formula::NegAtom(Atom::In(..)) => "in",
        Formula::And(..) => "and",
        Formula::Or(..) => "or",
        Formula::Exists1(..) => "E1",
        Formula::Exists2(..) => "E2",
        Formula::Forall1(..) => "A1",
        Formula::Forall2(..) => "A2",
    }
}

/// Generator of variable names not occurring in a given set.
#[derive(Debug, Clone, Default)]
pub struct Fresh {
    taken: BTreeSet<String>,
}

impl Fresh {
    pub fn new(taken: BTreeSet<String>) -> Self {
        Fresh { taken }
    }

    /// Avoids every variable of the given formulas.
    pub fn avoiding<'a>(formulas: impl IntoIterator<Item = &'a Formula>) -> Self {
        let mut taken = BTreeSet::new();
        for f in formulas {
            taken.extend(f.all_vars());
        }
        Fresh { taken }
    }

    pub fn reserve(&mut self, v: &str) {
        self.taken.insert(v.to_string());
    }

    pub fn reserve_all(&mut self, f: &Formula) {
        self.taken.extend(f.all_vars());
    }

    /// A new name built from `base`, keeping its sort.
    pub fn like(&mut self, base: &str) -> String {
        let stem: String = base.chars().take_while(|c| c.is_alphabetic()).collect();
        let stem = if stem.is_empty() { "v".to_string() } else { stem };
        for n in 1.. {
            let cand = format!("{stem}{n}");
            if !self.taken.contains(&cand) {
                self.taken.insert(cand.clone());
                return cand;
            }
        }
        unreachable!()
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Eq(x, y) => write!(f, "(= {x} {y})"),
            Atom::Lab(a, x) => write!(f, "(lab {} {x})", symbol(a)),
            Atom::Leq(x, y) => write!(f, "(<= {x} {y})"),
            Atom::Edge(x, y) => write!(f, "(edge {x} {y})"),
            Atom::In(x, y) => write!(f, "(in {x} {y})"),
        }
    }
}

fn symbol(a: &str) -> String {
    if !a.is_empty() && a.chars().all(|c| !c.is_whitespace() && c != '(' && c != ')' && c != '"') {
        a.to_string()
    } else {
        format!("{a:?}")
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Const(w) => write!(f, "(k \"{w}\")"),
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::NegAtom(a) => write!(f, "(not {a})"),
            Formula::And(a, b) => write!(f, "(and {a} {b})"),
            Formula::Or(a, b) => write!(f, "(or {a} {b})"),
            Formula::Exists1(x, b) => write!(f, "(E1 {x} {b})"),
            Formula::Exists2(x, b) => write!(f, "(E2 {x} {b})"),
            Formula::Forall1(x, b) => write!(f, "(A1 {x} {b})"),
            Formula::Forall2(x, b) => write!(f, "(A2 {x} {b})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_variables() {
        assert!(exists1("x", lab("a", "x")).free_vars().is_empty());
        let fv = member("x", "X").free_vars();
        assert_eq!(fv.into_iter().collect::<Vec<_>>(), vec!["X".to_string(), "x".to_string()]);
    }

    #[test]
    fn substitution_avoids_capture() {
        let f = exists1("y", and(edge("x", "y"), lab("a", "y")));
        let mut fresh = Fresh::avoiding([&f]);
        let g = f.subst("x", "y", &mut fresh);
        assert_eq!(g.free_vars().into_iter().collect::<Vec<_>>(), vec!["y".to_string()]);
        assert!(!g.alpha_eq(&f));
        let h = exists1("z", and(edge("x", "z"), lab("a", "z")));
        assert!(h.alpha_eq(&f));
    }

    #[test]
    fn sorts() {
        assert!(member("x", "X").check_sorts().is_ok());
        assert!(member("X", "x").check_sorts().is_err());
        assert!(exists1("X", eq("X", "X")).check_sorts().is_err());
    }

    #[test]
    fn printing() {
        let f = forall1("x", or(Formula::NegAtom(Atom::Lab("a".into(), "x".into())), leq("x", "y")));
        assert_eq!(f.to_string(), "(A1 x (or (not (lab a x)) (<= x y)))");
    }
}
