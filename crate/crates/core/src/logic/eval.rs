//! Weighted and classical evaluation.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::{is_first_order_name, is_synt_unambiguous, Atom, Formula};
use crate::error::{Error, Result};
use crate::guard::Guards;
use crate::nested_word::{enumerate_nestings, NestedWord};
use crate::semiring::{Semiring, Weight};
use crate::text::{enumerate_tdo, Text};

/// A structure a formula is evaluated on.
#[derive(Debug, Clone, Copy)]
pub enum Structure<'a> {
    Nested(&'a NestedWord),
    Text(&'a Text),
}

impl Structure<'_> {
    pub fn len(&self) -> usize {
        match self {
            Structure::Nested(nw) => nw.len(),
            Structure::Text(t) => t.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn label(&self, i: usize) -> &str {
        match self {
            Structure::Nested(nw) => nw.letter(i),
            Structure::Text(t) => t.label(i),
        }
    }

    fn edge(&self, i: usize, j: usize) -> bool {
        match self {
            Structure::Nested(nw) => nw.has_arc(i, j),
            Structure::Text(t) => t.leq2(i, j),
        }
    }
}

/// Value of a free variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Position(usize),
    Set(Vec<usize>),
}

/// Interpretation of free variables.
pub type Assignment = BTreeMap<String, Value>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum AtomKind {
    Eq,
    Lab,
    Leq,
    Edge,
    In,
}

#[derive(Debug, Clone)]
enum Node {
    Const(Weight),
    Atom { positive: bool, kind: AtomKind, a: usize, b: usize, letter: String },
    And(usize, usize),
    Or(usize, usize),
    Exists1(usize, usize),
    Exists2(usize, usize),
    Forall1(usize, usize),
    Forall2(usize, usize),
    Classical(usize),
}

/// A formula compiled for repeated evaluation.
#[derive(Debug, Clone)]
pub struct Evaluator {
    semiring: Semiring,
    nodes: Vec<Node>,
    root: usize,
    slots: usize,
    free: Vec<(String, usize, bool)>,
    has_sets: bool,
}

struct Compiler {
    nodes: Vec<Node>,
    slots: usize,
    free: Vec<(String, usize, bool)>,
}

impl Compiler {
    fn slot(&mut self, v: &str, scope: &[(String, usize)]) -> usize {
        if let Some((_, s)) = scope.iter().rev().find(|(n, _)| n == v) {
            return *s;
        }
        if let Some((_, s, _)) = self.free.iter().find(|(n, _, _)| n == v) {
            return *s;
        }
        let s = self.slots;
        self.slots += 1;
        self.free.push((v.to_string(), s, is_first_order_name(v)));
        s
    }

    fn compile(&mut self, f: &Formula, scope: &mut Vec<(String, usize)>, probe: bool) -> usize {
        if probe
            && !matches!(f, Formula::Const(_) | Formula::Atom(_) | Formula::NegAtom(_))
            && is_synt_unambiguous(f)
        {
            let inner = self.compile(f, scope, false);
            self.nodes.push(Node::Classical(inner));
            return self.nodes.len() - 1;
        }
        let node = match f {
            Formula::Const(w) => Node::Const(w.clone()),
            Formula::Atom(a) | Formula::NegAtom(a) => {
                let positive = matches!(f, Formula::Atom(_));
                let (kind, x, y, letter) = match a {
                    Atom::Eq(x, y) => (AtomKind::Eq, x, y, String::new()),
                    Atom::Lab(l, x) => (AtomKind::Lab, x, x, l.clone()),
                    Atom::Leq(x, y) => (AtomKind::Leq, x, y, String::new()),
                    Atom::Edge(x, y) => (AtomKind::Edge, x, y, String::new()),
                    Atom::In(x, y) => (AtomKind::In, x, y, String::new()),
                };
                let a = self.slot(x, scope);
                let b = self.slot(y, scope);
                Node::Atom { positive, kind, a, b, letter }
            }
            Formula::And(l, r) | Formula::Or(l, r) => {
                let l = self.compile(l, scope, probe);
                let r = self.compile(r, scope, probe);
                if matches!(f, Formula::And(..)) {
                    Node::And(l, r)
                } else {
                    Node::Or(l, r)
                }
            }
            Formula::Exists1(x, b) | Formula::Exists2(x, b) | Formula::Forall1(x, b) | Formula::Forall2(x, b) => {
                let s = self.slots;
                self.slots += 1;
                scope.push((x.clone(), s));
                let body = self.compile(b, scope, probe);
                scope.pop();
                match f {
                    Formula::Exists1(..) => Node::Exists1(s, body),
                    Formula::Exists2(..) => Node::Exists2(s, body),
                    Formula::Forall1(..) => Node::Forall1(s, body),
                    _ => Node::Forall2(s, body),
                }
            }
        };
        self.nodes.push(node);
        self.nodes.len() - 1
    }
}

struct Run<'a, 'b> {
    ev: &'a Evaluator,
    s: Structure<'b>,
    env: Vec<u64>,
}

impl Run<'_, '_> {
    fn atom(&self, kind: AtomKind, a: usize, b: usize, letter: &str) -> bool {
        let (x, y) = (self.env[a] as usize, self.env[b] as usize);
        match kind {
            AtomKind::Eq => x == y,
            AtomKind::Lab => self.s.label(x) == letter,
            AtomKind::Leq => x <= y,
            AtomKind::Edge => self.s.edge(x, y),
            AtomKind::In => self.env[b] >> (x - 1) & 1 == 1,
        }
    }

    fn boolean(&mut self, i: usize) -> bool {
        let n = self.s.len();
        match &self.ev.nodes[i] {
            Node::Const(_) => unreachable!("constants are rejected before classical evaluation"),
            Node::Atom { positive, kind, a, b, letter } => self.atom(*kind, *a, *b, letter) == *positive,
            Node::And(l, r) => self.boolean(*l) && self.boolean(*r),
            Node::Or(l, r) => self.boolean(*l) || self.boolean(*r),
            Node::Exists1(v, b) => (1..=n).any(|p| {
                self.env[*v] = p as u64;
                self.boolean(*b)
            }),
            Node::Forall1(v, b) => (1..=n).all(|p| {
                self.env[*v] = p as u64;
                self.boolean(*b)
            }),
            Node::Exists2(v, b) => (0..1u64 << n).any(|m| {
                self.env[*v] = m;
                self.boolean(*b)
            }),
            Node::Forall2(v, b) => (0..1u64 << n).all(|m| {
                self.env[*v] = m;
                self.boolean(*b)
            }),
            Node::Classical(c) => self.boolean(*c),
        }
    }

    fn weighted(&mut self, i: usize) -> Weight {
        let k = self.ev.semiring;
        let n = self.s.len();
        match &self.ev.nodes[i] {
            Node::Const(w) => w.clone(),
            Node::Classical(c) => {
                if self.boolean(*c) {
                    k.one()
                } else {
                    k.zero()
                }
            }
            Node::Atom { positive, kind, a, b, letter } => {
                if self.atom(*kind, *a, *b, letter) == *positive {
                    k.one()
                } else {
                    k.zero()
                }
            }
            Node::And(l, r) => {
                let x = self.weighted(*l);
                if k.is_zero(&x) {
                    return x;
                }
                let y = self.weighted(*r);
                k.times(&x, &y)
            }
            Node::Or(l, r) => {
                let x = self.weighted(*l);
                let y = self.weighted(*r);
                k.plus(&x, &y)
            }
            Node::Exists1(v, b) => {
                let mut acc = k.zero();
                for p in 1..=n {
                    self.env[*v] = p as u64;
                    let w = self.weighted(*b);
                    k.add_assign(&mut acc, &w);
                }
                acc
            }
            Node::Exists2(v, b) => {
                let mut acc = k.zero();
                for m in 0..1u64 << n {
                    self.env[*v] = m;
                    let w = self.weighted(*b);
                    k.add_assign(&mut acc, &w);
                }
                acc
            }
            Node::Forall1(v, b) => {
                let mut acc = k.one();
                for p in 1..=n {
                    self.env[*v] = p as u64;
                    let w = self.weighted(*b);
                    if k.is_zero(&w) {
                        return w;
                    }
                    acc = k.times(&acc, &w);
                }
                acc
            }
            Node::Forall2(v, b) => {
                let mut acc = k.one();
                for m in 0..1u64 << n {
                    self.env[*v] = m;
                    let w = self.weighted(*b);
                    if k.is_zero(&w) {
                        return w;
                    }
                    acc = k.times(&acc, &w);
                }
                acc
            }
        }
    }
}

impl Evaluator {
    /// Compiles `f`, checking sorts and that every constant belongs to `semiring`.
    pub fn new(f: &Formula, semiring: Semiring) -> Result<Evaluator> {
        f.check_sorts()?;
        let mut bad = None;
        f.visit(&mut |g| {
            if let Formula::Const(w) = g {
                if bad.is_none() && !semiring.admits(w) {
                    bad = Some(w.clone());
                }
            }
        });
        if let Some(w) = bad {
            return Err(Error::KindMismatch { semiring: semiring.name(), weight: w.to_string() });
        }
        let mut c = Compiler { nodes: Vec::new(), slots: 0, free: Vec::new() };
        let root = c.compile(f, &mut Vec::new(), semiring != Semiring::Boolean);
        Ok(Evaluator {
            semiring,
            nodes: c.nodes,
            root,
            slots: c.slots,
            free: c.free,
            has_sets: f.has_set_quantifiers(),
        })
    }

    pub fn semiring(&self) -> Semiring {
        self.semiring
    }

    fn prepare<'b>(&self, s: Structure<'b>, asg: &Assignment, guards: &Guards) -> Result<Run<'_, 'b>> {
        let n = s.len();
        if n == 0 {
            return Err(Error::EmptyWord);
        }
        if self.has_sets {
            Guards::check("set quantifier domain", guards.subset_width.min(63) as u128, n as u128)?;
        }
        let mut env = vec![0u64; self.slots];
        for (name, slot, first_order) in &self.free {
            let value = asg.get(name).ok_or_else(|| Error::UnboundVariable(name.clone()))?;
            env[*slot] = match (value, first_order) {
                (Value::Position(p), true) => {
                    if *p == 0 || *p > n {
                        return Err(Error::IndexOutOfRange { index: *p, len: n });
                    }
                    *p as u64
                }
                (Value::Set(ps), false) => {
                    let mut m = 0u64;
                    for &p in ps {
                        if p == 0 || p > n || p > 64 {
                            return Err(Error::IndexOutOfRange { index: p, len: n });
                        }
                        m |= 1 << (p - 1);
                    }
                    m
                }
                _ => return Err(Error::SortMisuse(alloc::format!("value of {name}"))),
            };
        }
        Ok(Run { ev: self, s, env })
    }

    /// `⟦φ⟧(s, asg)`.
    pub fn eval(&self, s: Structure<'_>, asg: &Assignment, guards: &Guards) -> Result<Weight> {
        let mut run = self.prepare(s, asg, guards)?;
        Ok(run.weighted(self.root))
    }

    /// Classical satisfaction; the formula must be constant-free.
    pub fn holds(&self, s: Structure<'_>, asg: &Assignment, guards: &Guards) -> Result<bool> {
        if self.nodes.iter().any(|n| matches!(n, Node::Const(_))) {
            return Err(Error::ConstantInClassical);
        }
        let mut run = self.prepare(s, asg, guards)?;
        Ok(run.boolean(self.root))
    }
}

/// `⟦φ⟧(s, asg)` in `semiring`.
pub fn eval_weighted(
    f: &Formula,
    semiring: Semiring,
    s: Structure<'_>,
    asg: &Assignment,
    guards: &Guards,
) -> Result<Weight> {
    Evaluator::new(f, semiring)?.eval(s, asg, guards)
}

/// `(s, asg) ⊨ φ` for a constant-free formula.
pub fn eval_boolean(f: &Formula, s: Structure<'_>, asg: &Assignment, guards: &Guards) -> Result<bool> {
    if f.has_constants() {
        return Err(Error::ConstantInClassical);
    }
    Evaluator::new(f, Semiring::Boolean)?.holds(s, asg, guards)
}

/// `⟦∃ν.φ⟧(w)`: the sum of `φ` over every nesting of `word`.
pub fn exists_nu(f: &Formula, semiring: Semiring, word: &[String], guards: &Guards) -> Result<Weight> {
    if word.is_empty() {
        return Err(Error::EmptyWord);
    }
    let ev = Evaluator::new(f, semiring)?;
    let empty = Assignment::new();
    let mut acc = semiring.zero();
    for arcs in enumerate_nestings(word.len(), guards)? {
        let nw = NestedWord::new(word.to_vec(), arcs)?;
        let w = ev.eval(Structure::Nested(&nw), &empty, guards)?;
        semiring.add_assign(&mut acc, &w);
    }
    Ok(acc)
}

/// `⟦∃tdo.φ⟧(w)`: the sum of `φ` over every text with labels `word`.
pub fn exists_tdo(f: &Formula, semiring: Semiring, word: &[String], guards: &Guards) -> Result<Weight> {
    let ev = Evaluator::new(f, semiring)?;
    let empty = Assignment::new();
    let mut acc = semiring.zero();
    for order in enumerate_tdo(word.len(), guards)? {
        let t = Text::new(word.to_vec(), order)?;
        let w = ev.eval(Structure::Text(&t), &empty, guards)?;
        semiring.add_assign(&mut acc, &w);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::super::*;
    use super::*;

    fn word(s: &str) -> Vec<String> {
        s.chars().map(|c| c.to_string()).collect()
    }

    #[test]
    fn counting() {
        let g = Guards::default();
        let k = Semiring::Natural;
        let one = konst(k.one());
        for n in 1..=5 {
            let nw = NestedWord::new(word(&"a".repeat(n)), []).unwrap();
            let s = Structure::Nested(&nw);
            let a = Assignment::new();
            assert_eq!(eval_weighted(&exists1("x", one.clone()), k, s, &a, &g).unwrap(), k.count(n as u64));
            let f = forall1("y", exists1("x", one.clone()));
            assert_eq!(eval_weighted(&f, k, s, &a, &g).unwrap(), k.count((n as u64).pow(n as u32)));
        }
    }

    #[test]
    fn quantifying_over_nestings_and_orders() {
        let g = Guards::default();
        let k = Semiring::Natural;
        let one = konst(k.one());
        assert_eq!(exists_nu(&one, k, &word("abcd"), &g).unwrap(), k.count(9));
        assert_eq!(exists_tdo(&one, k, &word("abc"), &g).unwrap(), k.count(6));
    }

    #[test]
    fn classical() {
        let g = Guards::default();
        let nw = NestedWord::from_chars("ab", [(1, 2)]).unwrap();
        let s = Structure::Nested(&nw);
        let f = exists1("x", exists1("y", and(edge("x", "y"), lab("b", "y"))));
        assert!(eval_boolean(&f, s, &Assignment::new(), &g).unwrap());
        assert_eq!(eval_boolean(&konst(Semiring::Natural.one()), s, &Assignment::new(), &g), Err(Error::ConstantInClassical));
        assert!(matches!(eval_boolean(&lab("a", "x"), s, &Assignment::new(), &g), Err(Error::UnboundVariable(_))));
        let mut asg = Assignment::new();
        asg.insert("X".into(), Value::Set(vec![2]));
        assert!(eval_boolean(&exists1("x", and(member("x", "X"), lab("b", "x"))), s, &asg, &g).unwrap());
        assert_eq!(
            eval_weighted(&exists2("X", konst(Semiring::Natural.one())), Semiring::Natural, s, &Assignment::new(), &g)
                .unwrap(),
            Semiring::Natural.count(4)
        );
    }
}
