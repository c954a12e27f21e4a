//! One-copying definition schemes between nested words and texts.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::disambiguate::{implies_with, is_synt_unambiguous, minus_with, plus_with};
use super::eval::{Assignment, Evaluator, Structure, Value};
use super::macros::{call, circ_order, disjoint, first_nu, next_nu, ret};
use super::{and, and_all, arrow, eq, exists1, forall1, lab, leq, less, member, neg, or, truth, Atom, Formula, Fresh};
use crate::error::{Error, Result};
use crate::guard::Guards;
use crate::nested_word::NestedWord;
use crate::semiring::Semiring;
use crate::text::Text;

/// Kind of relational structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Signature {
    /// Nested words: `Lab`, `≤`, `ν`.
    Nested,
    /// Texts: `Lab`, `≤₁`, `≤₂`.
    Text,
}

/// A one-copying definition scheme with second-order parameters.
///
/// Interpreting formulas use the free variables `x` and `y` plus the parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefinitionScheme {
    pub source: Signature,
    pub target: Signature,
    pub params: Vec<String>,
    pub theta: Formula,
    pub domain: Formula,
    pub labels: BTreeMap<String, Formula>,
    pub order: Formula,
    pub edge: Formula,
}

/// Output of a definition scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Transduced {
    Nested(NestedWord),
    Text(Text),
}

impl fmt::Display for Transduced {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Transduced::Nested(nw) => write!(f, "{nw}"),
            Transduced::Text(t) => write!(f, "{t}"),
        }
    }
}

impl DefinitionScheme {
    fn formulas(&self) -> Vec<&Formula> {
        let mut out = vec![&self.theta, &self.domain, &self.order, &self.edge];
        out.extend(self.labels.values());
        out
    }

    /// Checks sorts, constants and free variables of every component.
    pub fn validate(&self) -> Result<()> {
        for p in &self.params {
            if !super::is_second_order_name(p) {
                return Err(Error::SortMisuse(alloc::format!("parameter {p}")));
            }
        }
        let allowed = |extra: &[&str], f: &Formula| -> Result<()> {
            f.check_sorts()?;
            if f.has_constants() {
                return Err(Error::ConstantInClassical);
            }
            for v in f.free_vars() {
                if !extra.contains(&v.as_str()) && !self.params.contains(&v) {
                    return Err(Error::UnboundVariable(v));
                }
            }
            Ok(())
        };
        allowed(&[], &self.theta)?;
        allowed(&["x"], &self.domain)?;
        for f in self.labels.values() {
            allowed(&["x"], f)?;
        }
        allowed(&["x", "y"], &self.order)?;
        allowed(&["x", "y"], &self.edge)
    }
}

/// The scheme defining the circ embedding of nested words into texts.
pub fn phi_circ_scheme(alphabet: &[String]) -> Result<DefinitionScheme> {
    let sets = ["X1", "X2", "Y1", "Y2"];
    let in_either = |a: &str, b: &str| or(member("z", a), member("z", b));
    let mut theta = vec![
        disjoint("X1", "X2"),
        forall1("z", arrow(&in_either("X1", "X2"), call("z"))?),
        disjoint("Y1", "Y2"),
        forall1("z", arrow(&in_either("Y1", "Y2"), ret("z"))?),
        forall1("z", arrow(&first_nu("z")?, member("z", "X1"))?),
    ];
    let rules = [
        ("X1", false, "Y1"),
        ("X1", true, "X2"),
        ("X2", false, "Y2"),
        ("X2", true, "X1"),
        ("Y1", false, "Y2"),
        ("Y1", true, "X1"),
        ("Y2", false, "Y1"),
        ("Y2", true, "X2"),
    ];
    for (from, to_call, to) in rules {
        let kind = if to_call { call("z2") } else { ret("z2") };
        let premise = and(member("z1", from), and(next_nu("z1", "z2")?, kind));
        theta.push(forall1("z1", forall1("z2", arrow(&premise, member("z2", to))?)));
    }
    let circ_xy = circ_order("x", "y", "X1")?;
    let circ_yx = circ_order("y", "x", "X1")?;
    let order = or(eq("x", "y"), or(and(less("y", "x"), circ_yx), and(less("x", "y"), neg(&circ_xy)?)));
    Ok(DefinitionScheme {
        source: Signature::Nested,
        target: Signature::Text,
        params: sets.iter().map(|s| s.to_string()).collect(),
        theta: and_all(theta).expect("non-empty"),
        domain: truth(),
        labels: alphabet.iter().map(|a| (a.clone(), lab(a, "x"))).collect(),
        order: leq("x", "y"),
        edge: order,
    })
}

/// The parameter sets under which the circ scheme's precondition holds:
/// calls of odd and even depth, then returns closing arcs of odd and even depth.
pub fn phi_circ_parameters(nw: &NestedWord) -> [Vec<usize>; 4] {
    let mut out: [Vec<usize>; 4] = Default::default();
    for &(c, r) in nw.arcs() {
        let depth = nw.arcs().iter().filter(|&&(k, l)| k <= c && r <= l).count();
        let odd = depth % 2 == 1;
        out[if odd { 0 } else { 1 }].push(c);
        out[if odd { 2 } else { 3 }].push(r);
    }
    for v in &mut out {
        v.sort_unstable();
    }
    out
}

fn structure_of(sig: Signature, s: &Transduced) -> Option<Structure<'_>> {
    match (sig, s) {
        (Signature::Nested, Transduced::Nested(nw)) => Some(Structure::Nested(nw)),
        (Signature::Text, Transduced::Text(t)) => Some(Structure::Text(t)),
        _ => None,
    }
}

/// Sorts `items` by a relation given as a matrix; `None` unless it is a total order.
fn linearize(m: usize, le: &dyn Fn(usize, usize) -> bool) -> Option<Vec<usize>> {
    let mut below = vec![0usize; m];
    for i in 0..m {
        if !le(i, i) {
            return None;
        }
        for j in 0..m {
            if i != j {
                let (a, b) = (le(i, j), le(j, i));
                if a == b {
                    return None;
                }
                if b {
                    below[i] += 1;
                }
            }
        }
    }
    let mut order = vec![usize::MAX; m];
    for (i, &r) in below.iter().enumerate() {
        if order[r] != usize::MAX {
            return None;
        }
        order[r] = i;
    }
    for w in order.windows(2) {
        if !le(w[0], w[1]) {
            return None;
        }
    }
    let rank: Vec<usize> = below;
    for i in 0..m {
        for j in 0..m {
            if le(i, j) != (rank[i] <= rank[j]) {
                return None;
            }
        }
    }
    Some(order)
}

/// Applies `scheme` to `s` with the given parameter sets. `None` when the precondition fails
/// or the interpretation is not a structure of the target signature.
pub fn deftrans_apply(
    scheme: &DefinitionScheme,
    s: &Transduced,
    params: &[Vec<usize>],
    guards: &Guards,
) -> Result<Option<Transduced>> {
    if params.len() != scheme.params.len() {
        return Err(Error::Arity { expected: scheme.params.len(), actual: params.len() });
    }
    let st = structure_of(scheme.source, s).ok_or_else(|| Error::Signature("source structure".into()))?;
    scheme.validate()?;
    let n = st.len();
    let mut asg: Assignment = scheme
        .params
        .iter()
        .zip(params)
        .map(|(p, v)| (p.clone(), Value::Set(v.clone())))
        .collect();
    let b = Semiring::Boolean;
    if !Evaluator::new(&scheme.theta, b)?.holds(st, &asg, guards)? {
        return Ok(None);
    }
    let unary = |f: &Formula, asg: &mut Assignment| -> Result<Vec<bool>> {
        let ev = Evaluator::new(f, b)?;
        (1..=n)
            .map(|p| {
                asg.insert("x".into(), Value::Position(p));
                ev.holds(st, asg, guards)
            })
            .collect()
    };
    let domain: Vec<usize> = unary(&scheme.domain, &mut asg)?
        .into_iter()
        .enumerate()
        .filter_map(|(i, keep)| keep.then_some(i + 1))
        .collect();
    if domain.is_empty() {
        return Ok(None);
    }
    let m = domain.len();
    let binary = |f: &Formula, asg: &mut Assignment| -> Result<Vec<Vec<bool>>> {
        let ev = Evaluator::new(f, b)?;
        let mut out = vec![vec![false; m]; m];
        for (i, &p) in domain.iter().enumerate() {
            for (j, &q) in domain.iter().enumerate() {
                asg.insert("x".into(), Value::Position(p));
                asg.insert("y".into(), Value::Position(q));
                out[i][j] = ev.holds(st, asg, guards)?;
            }
        }
        Ok(out)
    };
    let first = binary(&scheme.order, &mut asg)?;
    let Some(order1) = linearize(m, &|i, j| first[i][j]) else {
        return Ok(None);
    };
    let mut label_of: Vec<Option<String>> = vec![None; m];
    for (a, f) in &scheme.labels {
        let holds = unary(f, &mut asg)?;
        for (i, &p) in domain.iter().enumerate() {
            if holds[p - 1] {
                if label_of[i].is_some() {
                    return Ok(None);
                }
                label_of[i] = Some(a.clone());
            }
        }
    }
    let mut labels = Vec::with_capacity(m);
    for &i in &order1 {
        match &label_of[i] {
            Some(a) => labels.push(a.clone()),
            None => return Ok(None),
        }
    }
    let mut pos = vec![0usize; m];
    for (r, &i) in order1.iter().enumerate() {
        pos[i] = r + 1;
    }
    let second = binary(&scheme.edge, &mut asg)?;
    Ok(match scheme.target {
        Signature::Nested => {
            let mut arcs = Vec::new();
            for i in 0..m {
                for j in 0..m {
                    if second[i][j] {
                        arcs.push((pos[i], pos[j]));
                    }
                }
            }
            NestedWord::new(labels, arcs).ok().map(Transduced::Nested)
        }
        Signature::Text => {
            let Some(order2) = linearize(m, &|i, j| second[i][j]) else {
                return Ok(None);
            };
            Text::new(labels, order2.iter().map(|&i| pos[i]).collect()).ok().map(Transduced::Text)
        }
    })
}

/// Number of parameter assignments satisfying the precondition on `s`,
/// and the distinct outputs they produce.
pub fn check_unambiguous(scheme: &DefinitionScheme, s: &Transduced, guards: &Guards) -> Result<(usize, Vec<Transduced>)> {
    let st = structure_of(scheme.source, s).ok_or_else(|| Error::Signature("source structure".into()))?;
    let n = st.len();
    let k = scheme.params.len();
    Guards::check("parameter bits", guards.subset_width as u128, (n * k) as u128)?;
    let mut count = 0;
    let mut outputs: Vec<Transduced> = Vec::new();
    for mask in 0u64..1 << (n * k) {
        let params: Vec<Vec<usize>> =
            (0..k).map(|j| (1..=n).filter(|p| mask >> (j * n + p - 1) & 1 == 1).collect()).collect();
        let mut asg = Assignment::new();
        for (name, v) in scheme.params.iter().zip(&params) {
            asg.insert(name.clone(), Value::Set(v.clone()));
        }
        if Evaluator::new(&scheme.theta, Semiring::Boolean)?.holds(st, &asg, guards)? {
            count += 1;
            if let Some(out) = deftrans_apply(scheme, s, &params, guards)? {
                if !outputs.contains(&out) {
                    outputs.push(out);
                }
            }
        }
    }
    Ok((count, outputs))
}

struct Translator<'a> {
    scheme: &'a DefinitionScheme,
    fresh: Fresh,
}

impl Translator<'_> {
    fn at(&mut self, f: &Formula, x: &str, y: Option<&str>) -> Formula {
        let mut map = BTreeMap::new();
        map.insert("x".to_string(), x.to_string());
        if let Some(y) = y {
            map.insert("y".to_string(), y.to_string());
        }
        f.rename_free(&map, &mut self.fresh)
    }

    fn atom(&mut self, a: &Atom) -> Result<Option<Formula>> {
        Ok(Some(match a {
            Atom::Eq(..) | Atom::In(..) => return Ok(None),
            Atom::Lab(l, x) => match self.scheme.labels.get(l) {
                Some(f) => self.at(f, x, None),
                None => Formula::NegAtom(Atom::Eq(x.clone(), x.clone())),
            },
            Atom::Leq(x, y) => self.at(&self.scheme.order.clone(), x, Some(y)),
            Atom::Edge(x, y) => self.at(&self.scheme.edge.clone(), x, Some(y)),
        }))
    }

    fn domain_of_set(&mut self, set: &str) -> Result<Formula> {
        let v = self.fresh.like("x");
        let d = self.at(&self.scheme.domain.clone(), &v, None);
        Ok(forall1(&v, arrow(&member(&v, set), d)?))
    }

    fn hat(&mut self, f: &Formula) -> Result<Formula> {
        Ok(match f {
            Formula::Const(_) => f.clone(),
            Formula::Atom(a) => match self.atom(a)? {
                None => f.clone(),
                Some(g) => plus_with(&g, &mut self.fresh)?,
            },
            Formula::NegAtom(a) => match self.atom(a)? {
                None => f.clone(),
                Some(g) => minus_with(&g, &mut self.fresh)?,
            },
            Formula::And(a, b) => and(self.hat(a)?, self.hat(b)?),
            Formula::Or(a, b) => {
                let g = or(self.hat(a)?, self.hat(b)?);
                if is_synt_unambiguous(f) {
                    plus_with(&g, &mut self.fresh)?
                } else {
                    g
                }
            }
            Formula::Exists1(x, b) => {
                let d = self.at(&self.scheme.domain.clone(), x, None);
                let body = self.hat(b)?;
                if is_synt_unambiguous(f) {
                    plus_with(&exists1(x, and(d, body)), &mut self.fresh)?
                } else {
                    exists1(x, and(plus_with(&d, &mut self.fresh)?, body))
                }
            }
            Formula::Exists2(x, b) => {
                let d = self.domain_of_set(x)?;
                let body = self.hat(b)?;
                if is_synt_unambiguous(f) {
                    plus_with(&super::exists2(x, and(d, body)), &mut self.fresh)?
                } else {
                    super::exists2(x, and(plus_with(&d, &mut self.fresh)?, body))
                }
            }
            Formula::Forall1(x, b) => {
                let d = self.at(&self.scheme.domain.clone(), x, None);
                let body = self.hat(b)?;
                forall1(x, implies_with(&d, body, &mut self.fresh)?)
            }
            Formula::Forall2(x, b) => {
                let d = self.domain_of_set(x)?;
                let body = self.hat(b)?;
                super::forall2(x, implies_with(&d, body, &mut self.fresh)?)
            }
        })
    }
}

/// A formula over the source signature whose value on `s` is the sum, over all parameter
/// assignments accepted by the scheme, of `φ` on the transduced structure.
pub fn translate_formula(scheme: &DefinitionScheme, f: &Formula) -> Result<Formula> {
    scheme.validate()?;
    f.check_sorts()?;
    let mut fresh = Fresh::avoiding(scheme.formulas().into_iter().chain([f]));
    fresh.reserve("x");
    fresh.reserve("y");
    let renamed: BTreeMap<String, String> = scheme.params.iter().map(|p| (p.clone(), fresh.like(p))).collect();
    let rename = |g: &Formula, fresh: &mut Fresh| g.rename_free(&renamed, fresh);
    let local = DefinitionScheme {
        source: scheme.source,
        target: scheme.target,
        params: scheme.params.iter().map(|p| renamed[p].clone()).collect(),
        theta: rename(&scheme.theta, &mut fresh),
        domain: rename(&scheme.domain, &mut fresh),
        labels: scheme.labels.iter().map(|(a, g)| (a.clone(), rename(g, &mut fresh))).collect(),
        order: rename(&scheme.order, &mut fresh),
        edge: rename(&scheme.edge, &mut fresh),
    };
    let mut t = Translator { scheme: &local, fresh };
    let body = t.hat(f)?;
    let theta = plus_with(&local.theta, &mut t.fresh)?;
    let mut out = and(theta, body);
    for p in local.params.iter().rev() {
        out = super::exists2(p, out);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bridge::phi_circ;
    use crate::logic::{edge, eval_weighted, konst};
    use crate::nested_word::enumerate_nested_words;

    fn ab() -> Vec<String> {
        vec!["a".into(), "b".into()]
    }

    #[test]
    fn circ_scheme_matches_embedding() {
        let g = Guards::default();
        let scheme = phi_circ_scheme(&ab()).unwrap();
        for n in 1..=5 {
            for nw in enumerate_nested_words(&ab()[..1], n, &g).unwrap() {
                let params = phi_circ_parameters(&nw);
                let out = deftrans_apply(&scheme, &Transduced::Nested(nw.clone()), &params, &g).unwrap();
                assert_eq!(out, Some(Transduced::Text(phi_circ(&nw))), "{nw}");
            }
        }
        let nw = NestedWord::from_chars("abab", [(1, 4), (2, 3)]).unwrap();
        let [x1, x2, y1, y2] = phi_circ_parameters(&nw);
        let wrong = [x2, x1, y1, y2];
        assert_eq!(deftrans_apply(&scheme, &Transduced::Nested(nw), &wrong, &g).unwrap(), None);
    }

    #[test]
    fn circ_scheme_is_unambiguous() {
        let g = Guards::default();
        let scheme = phi_circ_scheme(&ab()).unwrap();
        for nw in enumerate_nested_words(&ab()[..1], 3, &g).unwrap() {
            let (count, outs) = check_unambiguous(&scheme, &Transduced::Nested(nw.clone()), &g).unwrap();
            assert_eq!(count, 1, "{nw}");
            assert_eq!(outs, vec![Transduced::Text(phi_circ(&nw))]);
        }
    }

    #[test]
    fn translated_formula_counts() {
        let g = Guards::default();
        let k = Semiring::Natural;
        let scheme = phi_circ_scheme(&ab()).unwrap();
        let f = exists1("x", exists1("y", and(edge("x", "y"), konst(k.count(2)))));
        let tf = translate_formula(&scheme, &f).unwrap();
        for n in 1..=3 {
            for nw in enumerate_nested_words(&ab(), n, &g).unwrap() {
                let t = phi_circ(&nw);
                let expect = eval_weighted(&f, k, Structure::Text(&t), &Assignment::new(), &g).unwrap();
                let got = eval_weighted(&tf, k, Structure::Nested(&nw), &Assignment::new(), &g).unwrap();
                assert_eq!(got, expect, "{nw}");
            }
        }
    }
}
