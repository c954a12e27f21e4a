//! Algebraic systems of polynomials and their solutions.
//!
//! Words over `Δ ∪ 𝒳` are symbol vectors; a symbol is a variable iff the system declares it so.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::guard::Guards;
use crate::semiring::{Semiring, Weight};

mod construct;
mod srfo;

pub use construct::{
    gnf_to_wnwa, project_nw_series, project_text_series, sandwich_normal_form, wnwa_to_system, wpa_to_system,
};
pub use srfo::system_to_srfo;

/// A polynomial over `Δ ∪ 𝒳`: finitely many words with nonzero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Polynomial {
    terms: BTreeMap<Vec<String>, Weight>,
}

impl Polynomial {
    pub fn new() -> Self {
        Self::default()
    }

    /// `(P, w)`, or `None` for words outside the support.
    pub fn coeff(&self, w: &[String]) -> Option<&Weight> {
        self.terms.get(w)
    }

    pub fn terms(&self) -> &BTreeMap<Vec<String>, Weight> {
        &self.terms
    }

    pub fn support(&self) -> impl Iterator<Item = &Vec<String>> {
        self.terms.keys()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `P += w.word`, dropping zero coefficients.
    pub fn add(&mut self, k: Semiring, word: Vec<String>, w: Weight) {
        if k.is_zero(&w) {
            return;
        }
        match self.terms.get_mut(&word) {
            Some(acc) => {
                *acc = k.plus(acc, &w);
                if k.is_zero(acc) {
                    self.terms.remove(&word);
                }
            }
            None => {
                self.terms.insert(word, w);
            }
        }
    }

    fn remove(&mut self, word: &[String]) -> Option<Weight> {
        self.terms.remove(word)
    }
}

/// Shape classes of a system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SystemClass {
    /// No `ε` and no single variable in any support.
    pub proper: bool,
    /// Every support word is `ε` or starts with a letter.
    pub weakly_strict: bool,
    /// Supports within `Δ ∪ Δ𝒳 ∪ Δ𝒳𝒳`.
    pub gnf: bool,
    /// Supports within `Δ ∪ Δ(Δ ∪ 𝒳)*Δ`.
    pub sandwich_normal: bool,
}

/// An algebraic system `(P_X)` over a semiring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraicSystem {
    semiring: Semiring,
    alphabet: Vec<String>,
    variables: Vec<String>,
    polys: BTreeMap<String, Polynomial>,
}

/// A child of a derivation-tree node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeChild {
    Leaf(String),
    Node(Box<DerivationTree>),
}

/// A derivation tree of the underlying grammar; inner nodes carry `(X, w)` with `w ∈ supp(P_X)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationTree {
    pub variable: String,
    pub word: Vec<String>,
    pub children: Vec<TreeChild>,
}

impl DerivationTree {
    /// The leaves from left to right.
    pub fn yield_word(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<String>) {
        for c in &self.children {
            match c {
                TreeChild::Leaf(a) => out.push(a.clone()),
                TreeChild::Node(t) => t.collect_leaves(out),
            }
        }
    }

    /// Number of inner nodes.
    pub fn inner_nodes(&self) -> usize {
        1 + self
            .children
            .iter()
            .map(|c| match c {
                TreeChild::Leaf(_) => 0,
                TreeChild::Node(t) => t.inner_nodes(),
            })
            .sum::<usize>()
    }
}

impl AlgebraicSystem {
    /// An empty system; alphabet and variables must be disjoint.
    pub fn new<S: Into<String>, T: Into<String>>(
        semiring: Semiring,
        alphabet: Vec<S>,
        variables: Vec<T>,
    ) -> Result<Self> {
        let alphabet: Vec<String> = alphabet.into_iter().map(Into::into).collect();
        let variables: Vec<String> = variables.into_iter().map(Into::into).collect();
        let letters: BTreeSet<&String> = alphabet.iter().collect();
        let mut seen = BTreeSet::new();
        for v in &variables {
            if letters.contains(v) {
                return Err(Error::InvalidSystem(format!("{v} is both a letter and a variable")));
            }
            if !seen.insert(v) {
                return Err(Error::InvalidSystem(format!("variable {v} declared twice")));
            }
        }
        if letters.len() != alphabet.len() {
            return Err(Error::InvalidSystem("letter declared twice".into()));
        }
        let polys = variables.iter().map(|v| (v.clone(), Polynomial::new())).collect();
        Ok(AlgebraicSystem { semiring, alphabet, variables, polys })
    }

    pub fn semiring(&self) -> Semiring {
        self.semiring
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn is_variable(&self, s: &str) -> bool {
        self.polys.contains_key(s)
    }

    pub fn is_letter(&self, s: &str) -> bool {
        self.alphabet.iter().any(|a| a == s)
    }

    pub fn poly(&self, x: &str) -> Result<&Polynomial> {
        self.polys.get(x).ok_or_else(|| Error::InvalidSystem(format!("unknown variable {x}")))
    }

    /// `P_X += w.word`.
    pub fn add_term(&mut self, x: &str, word: Vec<String>, w: Weight) -> Result<()> {
        if !self.semiring.admits(&w) {
            return Err(Error::KindMismatch { semiring: self.semiring.name(), weight: w.to_string() });
        }
        for s in &word {
            if !self.is_variable(s) && !self.is_letter(s) {
                return Err(Error::InvalidSystem(format!("symbol {s} is neither a letter nor a variable")));
            }
        }
        let k = self.semiring;
        self.polys
            .get_mut(x)
            .ok_or_else(|| Error::InvalidSystem(format!("unknown variable {x}")))?
            .add(k, word, w);
        Ok(())
    }

    fn letters_in(&self, w: &[String]) -> usize {
        w.iter().filter(|s| !self.is_variable(s)).count()
    }

    fn is_terminal(&self, w: &[String]) -> bool {
        w.iter().all(|s| !self.is_variable(s))
    }

    /// Support-shape classes.
    pub fn check_class(&self) -> SystemClass {
        let mut c = SystemClass { proper: true, weakly_strict: true, gnf: true, sandwich_normal: true };
        for p in self.polys.values() {
            for w in p.support() {
                let first_letter = w.first().is_some_and(|s| !self.is_variable(s));
                let last_letter = w.last().is_some_and(|s| !self.is_variable(s));
                if w.is_empty() || (w.len() == 1 && self.is_variable(&w[0])) {
                    c.proper = false;
                }
                if !w.is_empty() && !first_letter {
                    c.weakly_strict = false;
                }
                if !(first_letter && w.len() <= 3 && w[1..].iter().all(|s| self.is_variable(s))) {
                    c.gnf = false;
                }
                if !(first_letter && (w.len() == 1 || (w.len() >= 2 && last_letter))) {
                    c.sandwich_normal = false;
                }
            }
        }
        c
    }

    /// Replaces occurrence `index` (0-based, among variable occurrences) in `word ∈ supp(P_X)` by `P_Y`.
    pub fn substitute(&self, x: &str, word: &[String], index: usize) -> Result<AlgebraicSystem> {
        let k = self.semiring;
        let coeff = self
            .poly(x)?
            .coeff(word)
            .cloned()
            .ok_or_else(|| Error::MissingOccurrence(format!("{} is not in the support of P_{x}", word.join(" "))))?;
        let pos = word
            .iter()
            .enumerate()
            .filter(|(_, s)| self.is_variable(s))
            .nth(index)
            .map(|(i, _)| i)
            .ok_or_else(|| Error::MissingOccurrence(format!("variable occurrence {index} in {}", word.join(" "))))?;
        let y = &word[pos];
        let py = self.poly(y)?.clone();
        let mut out = self.clone();
        let px = out.polys.get_mut(x).expect("checked above");
        px.remove(word);
        for (v, w) in py.terms() {
            let mut new_word = word[..pos].to_vec();
            new_word.extend(v.iter().cloned());
            new_word.extend(word[pos + 1..].iter().cloned());
            px.add(k, new_word, k.times(&coeff, w));
        }
        Ok(out)
    }

    /// An equivalent system in which every non-terminal support word has at least `min_letters` letters.
    pub fn unfold(&self, min_letters: usize, guards: &Guards) -> Result<AlgebraicSystem> {
        if !self.check_class().weakly_strict {
            return Err(Error::SystemClass("unfolding needs a weakly strict system".into()));
        }
        let mut sys = self.clone();
        let mut steps = 0usize;
        loop {
            let target = sys.variables.iter().find_map(|x| {
                sys.polys[x]
                    .support()
                    .find(|w| !sys.is_terminal(w) && sys.letters_in(w) < min_letters)
                    .map(|w| (x.clone(), w.clone()))
            });
            let Some((x, w)) = target else {
                return Ok(sys);
            };
            steps += 1;
            Guards::check("unfold steps", guards.unfold_steps as u128, steps as u128)?;
            sys = sys.substitute(&x, &w, 0)?;
        }
    }

    /// Removes the terminal word `w` from `P_X`, substituting it for every choice of occurrences of `X`.
    fn strip_word(&self, x: &str, w: &[String]) -> Result<AlgebraicSystem> {
        let k = self.semiring;
        let c = self.poly(x)?.coeff(w).cloned().ok_or_else(|| Error::MissingOccurrence(w.join(" ")))?;
        let mut out = self.clone();
        for y in &self.variables {
            let mut np = Polynomial::new();
            for (v, coeff) in self.polys[y].terms() {
                let occ: Vec<usize> = v.iter().enumerate().filter(|(_, s)| *s == x).map(|(i, _)| i).collect();
                if occ.len() > 20 {
                    return Err(Error::Guard { what: "occurrences per word", limit: 20, actual: occ.len() as u128 });
                }
                for mask in 0u32..1 << occ.len() {
                    let mut word = Vec::new();
                    let mut weight = coeff.clone();
                    let mut next = 0;
                    for (i, s) in v.iter().enumerate() {
                        if next < occ.len() && occ[next] == i {
                            if mask >> next & 1 == 1 {
                                word.extend(w.iter().cloned());
                                weight = k.times(&weight, &c);
                            } else {
                                word.push(s.clone());
                            }
                            next += 1;
                        } else {
                            word.push(s.clone());
                        }
                    }
                    np.add(k, word, weight);
                }
            }
            if y == x {
                np.remove(w);
            }
            out.polys.insert(y.clone(), np);
        }
        Ok(out)
    }

    /// An equivalent-up-to-filtering system whose solution is `char{w : |w| > k'} ⊙ S_X` for every `X`.
    pub fn strip_short_words(&self, max_short: usize, guards: &Guards) -> Result<AlgebraicSystem> {
        let mut sys = self.unfold(max_short + 1, guards)?;
        for x in self.variables.clone() {
            let short: Vec<Vec<String>> =
                sys.polys[&x].support().filter(|w| sys.is_terminal(w) && w.len() <= max_short).cloned().collect();
            for w in short {
                sys = sys.strip_word(&x, &w)?;
            }
        }
        Ok(sys)
    }

    fn check_solvable(&self) -> Result<SystemClass> {
        let c = self.check_class();
        if !c.proper && !c.weakly_strict {
            return Err(Error::SystemClass("the system is neither proper nor weakly strict".into()));
        }
        Ok(c)
    }

    /// `(S_X, u)` for every variable `X` and every factor `u[i..j]`, as `table[x][i][j]`.
    fn factor_table(&self, u: &[String]) -> Result<Vec<Vec<Vec<Weight>>>> {
        let c = self.check_solvable()?;
        let k = self.semiring;
        let n = u.len();
        let vars = &self.variables;
        let idx: BTreeMap<&str, usize> = vars.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        let mut t = vec![vec![vec![k.zero(); n + 1]; n + 1]; vars.len()];
        if !c.proper {
            for (xi, x) in vars.iter().enumerate() {
                if let Some(w) = self.polys[x].coeff(&[]) {
                    for i in 0..=n {
                        t[xi][i][i] = w.clone();
                    }
                }
            }
        }
        for len in 1..=n {
            for i in 0..=n - len {
                let j = i + len;
                for (xi, x) in vars.iter().enumerate() {
                    let mut total = k.zero();
                    for (v, coeff) in self.polys[x].terms() {
                        if v.is_empty() {
                            continue;
                        }
                        let mut row: BTreeMap<usize, Weight> = BTreeMap::new();
                        row.insert(i, k.one());
                        for s in v {
                            let mut next: BTreeMap<usize, Weight> = BTreeMap::new();
                            for (&p, w) in &row {
                                if let Some(&yi) = idx.get(s.as_str()) {
                                    for q in p..=j {
                                        if q - p == len {
                                            continue;
                                        }
                                        let f = &t[yi][p][q];
                                        if !k.is_zero(f) {
                                            let e = next.entry(q).or_insert_with(|| k.zero());
                                            *e = k.plus(e, &k.times(w, f));
                                        }
                                    }
                                } else if p < j && u[p] == *s {
                                    let e = next.entry(p + 1).or_insert_with(|| k.zero());
                                    *e = k.plus(e, w);
                                }
                            }
                            next.retain(|_, w| !k.is_zero(w));
                            row = next;
                            if row.is_empty() {
                                break;
                            }
                        }
                        if let Some(w) = row.get(&j) {
                            total = k.plus(&total, &k.times(coeff, w));
                        }
                    }
                    t[xi][i][j] = total;
                }
            }
        }
        Ok(t)
    }

    /// `(S_X, u)` for the unique (quasiregular, for proper systems) solution.
    pub fn coefficient(&self, x: &str, u: &[String]) -> Result<Weight> {
        let xi = self
            .variables
            .iter()
            .position(|v| v == x)
            .ok_or_else(|| Error::InvalidSystem(format!("unknown variable {x}")))?;
        Ok(self.factor_table(u)?[xi][0][u.len()].clone())
    }

    /// Nonzero coefficients of every `S_X` on words of length at most `max_len`, keyed by variable.
    pub fn solve_coefficients(
        &self,
        max_len: usize,
        guards: &Guards,
    ) -> Result<BTreeMap<String, BTreeMap<Vec<String>, Weight>>> {
        self.check_solvable()?;
        let k = self.semiring;
        let words = all_words(&self.alphabet, max_len, guards)?;
        let mut out: BTreeMap<String, BTreeMap<Vec<String>, Weight>> =
            self.variables.iter().map(|x| (x.clone(), BTreeMap::new())).collect();
        for u in words {
            let t = self.factor_table(&u)?;
            for (xi, x) in self.variables.iter().enumerate() {
                let w = &t[xi][0][u.len()];
                if !k.is_zero(w) {
                    out.get_mut(x).expect("declared").insert(u.clone(), w.clone());
                }
            }
        }
        Ok(out)
    }

    /// Every derivation tree of `u` under the underlying grammar `G_X`; the system must be proper.
    pub fn derivation_trees(&self, x: &str, u: &[String], guards: &Guards) -> Result<Vec<DerivationTree>> {
        if !self.check_class().proper {
            return Err(Error::SystemClass("derivation trees need a proper system".into()));
        }
        self.poly(x)?;
        Guards::check("derivation word length", guards.derivation_width as u128, u.len() as u128)?;
        let mut memo = BTreeMap::new();
        let mut count = 0u128;
        self.trees(x, u, 0, u.len(), &mut memo, &mut count, guards)
    }

    #[allow(clippy::too_many_arguments)]
    fn trees(
        &self,
        x: &str,
        u: &[String],
        i: usize,
        j: usize,
        memo: &mut BTreeMap<(String, usize, usize), Vec<DerivationTree>>,
        count: &mut u128,
        guards: &Guards,
    ) -> Result<Vec<DerivationTree>> {
        if let Some(v) = memo.get(&(x.to_string(), i, j)) {
            return Ok(v.clone());
        }
        let mut out = Vec::new();
        if i < j {
            for v in self.polys[x].support() {
                let mut partial: Vec<(usize, Vec<TreeChild>)> = vec![(i, Vec::new())];
                for s in v {
                    let mut next = Vec::new();
                    for (p, kids) in partial {
                        if self.is_variable(s) {
                            for q in p + 1..=j {
                                if q - p == j - i {
                                    continue;
                                }
                                for t in self.trees(s, u, p, q, memo, count, guards)? {
                                    let mut k2 = kids.clone();
                                    k2.push(TreeChild::Node(Box::new(t)));
                                    next.push((q, k2));
                                }
                            }
                        } else if p < j && u[p] == *s {
                            let mut k2 = kids;
                            k2.push(TreeChild::Leaf(s.clone()));
                            next.push((p + 1, k2));
                        }
                    }
                    partial = next;
                    *count += partial.len() as u128;
                    Guards::check("derivation trees", guards.enumerated, *count)?;
                }
                for (p, children) in partial {
                    if p == j {
                        out.push(DerivationTree { variable: x.to_string(), word: v.clone(), children });
                    }
                }
            }
        }
        memo.insert((x.to_string(), i, j), out.clone());
        Ok(out)
    }

    /// `weight(t)`: the product of `(P_Y, w)` over the inner nodes `(Y, w)`.
    pub fn tree_weight(&self, t: &DerivationTree) -> Result<Weight> {
        let k = self.semiring;
        let mut w = self
            .poly(&t.variable)?
            .coeff(&t.word)
            .cloned()
            .ok_or_else(|| Error::MissingOccurrence(t.word.join(" ")))?;
        for c in &t.children {
            if let TreeChild::Node(child) = c {
                w = k.times(&w, &self.tree_weight(child)?);
            }
        }
        Ok(w)
    }

    /// Variables reachable from `x` through support words, including `x`.
    pub fn reachable(&self, x: &str) -> BTreeSet<String> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![x.to_string()];
        while let Some(v) = stack.pop() {
            if !seen.insert(v.clone()) {
                continue;
            }
            if let Some(p) = self.polys.get(&v) {
                for w in p.support() {
                    for s in w {
                        if self.is_variable(s) && !seen.contains(s) {
                            stack.push(s.clone());
                        }
                    }
                }
            }
        }
        seen
    }

    /// A variable name built from `base` that is neither a letter nor a variable.
    pub(crate) fn fresh_name(&self, base: &str) -> String {
        let mut name = base.to_string();
        while self.is_variable(&name) || self.is_letter(&name) {
            name.push('\'');
        }
        name
    }

    /// Adds a variable with an empty polynomial.
    pub fn add_variable(&mut self, x: &str) -> Result<()> {
        if self.is_variable(x) || self.is_letter(x) {
            return Err(Error::InvalidSystem(format!("{x} is already a symbol")));
        }
        self.variables.push(x.to_string());
        self.polys.insert(x.to_string(), Polynomial::new());
        Ok(())
    }

    pub(crate) fn set_poly(&mut self, x: &str, p: Polynomial) {
        self.polys.insert(x.to_string(), p);
    }
}

/// Every word over `alphabet` of length `0..=max_len`, shortest first, then lexicographic.
pub fn all_words(alphabet: &[String], max_len: usize, guards: &Guards) -> Result<Vec<Vec<String>>> {
    let mut total: u128 = 0;
    let mut layer: u128 = 1;
    for _ in 0..=max_len {
        total = total.saturating_add(layer);
        layer = layer.saturating_mul(alphabet.len() as u128);
    }
    Guards::check("enumerated words", guards.enumerated, total)?;
    let mut out = vec![Vec::new()];
    let mut frontier: Vec<Vec<String>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for a in alphabet {
                let mut v = w.clone();
                v.push(a.clone());
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn w(s: &str) -> Vec<String> {
        s.split_whitespace().map(|t| t.to_string()).collect()
    }

    pub(crate) fn motzkin() -> AlgebraicSystem {
        let k = Semiring::Natural;
        let mut sys = AlgebraicSystem::new(k, vec!["a"], vec!["X"]).unwrap();
        for word in ["a", "a X", "a X X"] {
            sys.add_term("X", w(word), k.one()).unwrap();
        }
        sys
    }

    #[test]
    fn classes() {
        let c = motzkin().check_class();
        assert!(c.proper && c.weakly_strict && c.gnf && !c.sandwich_normal);
        let k = Semiring::Natural;
        let mut s = AlgebraicSystem::new(k, vec!["a", "b"], vec!["X", "Y"]).unwrap();
        s.add_term("X", w("Y"), k.one()).unwrap();
        assert!(!s.check_class().proper);
        let mut s = AlgebraicSystem::new(k, vec!["a", "b"], vec!["X"]).unwrap();
        s.add_term("X", w("a X b"), k.one()).unwrap();
        let c = s.check_class();
        assert!(c.proper && c.weakly_strict && c.sandwich_normal && !c.gnf);
    }

    #[test]
    fn motzkin_coefficients_and_trees() {
        let sys = motzkin();
        let g = Guards::default();
        let k = Semiring::Natural;
        let expect = [1u64, 1, 2, 4, 9, 21];
        for (n, &m) in expect.iter().enumerate() {
            let u = vec!["a".to_string(); n + 1];
            assert_eq!(sys.coefficient("X", &u).unwrap(), k.count(m));
            let trees = sys.derivation_trees("X", &u, &g).unwrap();
            assert_eq!(trees.len() as u64, m);
            for t in &trees {
                assert_eq!(t.yield_word(), u);
                assert_eq!(sys.tree_weight(t).unwrap(), k.one());
            }
        }
        assert_eq!(sys.coefficient("X", &[]).unwrap(), k.zero());
    }

    #[test]
    fn weighted_tree() {
        let k = Semiring::Natural;
        let mut sys = AlgebraicSystem::new(k, vec!["a", "b"], vec!["X", "Y"]).unwrap();
        sys.add_term("X", w("a Y Y"), k.count(2)).unwrap();
        sys.add_term("Y", w("b"), k.count(2)).unwrap();
        let trees = sys.derivation_trees("X", &w("a b b"), &Guards::default()).unwrap();
        assert_eq!(trees.len(), 1);
        assert_eq!(sys.tree_weight(&trees[0]).unwrap(), k.count(8));
        assert!(sys.derivation_trees("X", &w("a b"), &Guards::default()).unwrap().is_empty());
    }

    #[test]
    fn substitution() {
        let k = Semiring::Natural;
        let mut sys = AlgebraicSystem::new(k, vec!["a", "b"], vec!["X", "Y"]).unwrap();
        sys.add_term("X", w("a Y"), k.count(2)).unwrap();
        sys.add_term("Y", w("b"), k.count(3)).unwrap();
        let s2 = sys.substitute("X", &w("a Y"), 0).unwrap();
        assert_eq!(s2.poly("X").unwrap().coeff(&w("a b")), Some(&k.count(6)));
        assert_eq!(s2.poly("X").unwrap().len(), 1);
        assert!(matches!(sys.substitute("X", &w("a Y"), 1), Err(Error::MissingOccurrence(_))));
    }

    #[test]
    fn unfold_and_strip() {
        let k = Semiring::Natural;
        let g = Guards::default();
        let mut sys = AlgebraicSystem::new(k, vec!["a"], vec!["X"]).unwrap();
        sys.add_term("X", w("a"), k.one()).unwrap();
        sys.add_term("X", w("a X"), k.one()).unwrap();
        let u = sys.unfold(3, &g).unwrap();
        for word in u.poly("X").unwrap().support() {
            assert!(u.is_terminal(word) || u.letters_in(word) >= 3);
        }
        assert_eq!(u.poly("X").unwrap().coeff(&w("a a")), Some(&k.one()));
        let m = motzkin();
        let s = m.strip_short_words(1, &g).unwrap();
        assert!(s.check_class().proper);
        assert_eq!(s.coefficient("X", &w("a")).unwrap(), k.zero());
        for n in 2..=7 {
            let u = vec!["a".to_string(); n];
            assert_eq!(s.coefficient("X", &u).unwrap(), m.coefficient("X", &u).unwrap());
        }
    }

    #[test]
    fn refuses_unsolvable() {
        let k = Semiring::Natural;
        let mut sys = AlgebraicSystem::new(k, vec!["a"], vec!["X"]).unwrap();
        sys.add_term("X", w("X"), k.one()).unwrap();
        sys.add_term("X", w(""), k.one()).unwrap();
        assert!(matches!(sys.coefficient("X", &w("a")), Err(Error::SystemClass(_))));
    }
}
