//! Weighted parenthesizing automata over alternating texts.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::guard::Guards;
use crate::semiring::{Semiring, Weight};
use crate::sparse::{accumulate, SparseVec};
use crate::text::{cuts, split, Sort, Text};

/// A weighted parenthesizing automaton.
///
/// States are indexed jointly: horizontal states first, then vertical ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Wpa {
    semiring: Semiring,
    hstates: Vec<String>,
    vstates: Vec<String>,
    parens: Vec<String>,
    index: BTreeMap<String, usize>,
    mu: BTreeMap<(usize, String, usize), Weight>,
    mu_open: BTreeMap<(usize, usize, usize), Weight>,
    mu_close: BTreeMap<(usize, usize, usize), Weight>,
    lambda: Vec<Weight>,
    gamma: Vec<Weight>,
}

/// One symbol of a run word.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RunToken {
    State(usize),
    /// A letter, by text position.
    Letter(usize),
    Open(usize),
    Close(usize),
}

/// A run of a [`Wpa`] on a text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WpaRun {
    pub word: Vec<RunToken>,
    pub weight: Weight,
    pub initial: usize,
    pub final_state: usize,
}

/// Rows of a sparse state-by-state matrix.
type Matrix = Vec<SparseVec>;

/// Transitions grouped for evaluation.
struct Tables<'a> {
    by_letter: BTreeMap<&'a str, Vec<(usize, usize, &'a Weight)>>,
    /// `(f, s) ↦ [(q2, μ_cl(f, )ₛ, q2))]`
    close: BTreeMap<(usize, usize), Vec<(usize, &'a Weight)>>,
}

impl Wpa {
    pub fn new<S: Into<String>>(
        semiring: Semiring,
        hstates: Vec<S>,
        vstates: Vec<S>,
        parens: Vec<S>,
    ) -> Result<Self> {
        let hstates: Vec<String> = hstates.into_iter().map(Into::into).collect();
        let vstates: Vec<String> = vstates.into_iter().map(Into::into).collect();
        let parens: Vec<String> = parens.into_iter().map(Into::into).collect();
        let mut index = BTreeMap::new();
        for (i, q) in hstates.iter().chain(vstates.iter()).enumerate() {
            if index.insert(q.clone(), i).is_some() {
                return Err(Error::InvalidAutomaton(format!("duplicate state {q:?}")));
            }
        }
        let mut seen = BTreeMap::new();
        for (i, s) in parens.iter().enumerate() {
            if seen.insert(s.clone(), i).is_some() {
                return Err(Error::InvalidAutomaton(format!("duplicate parenthesis {s:?}")));
            }
        }
        let n = hstates.len() + vstates.len();
        Ok(Wpa {
            semiring,
            hstates,
            vstates,
            parens,
            index,
            mu: BTreeMap::new(),
            mu_open: BTreeMap::new(),
            mu_close: BTreeMap::new(),
            lambda: vec![semiring.zero(); n],
            gamma: vec![semiring.zero(); n],
        })
    }

    pub fn semiring(&self) -> Semiring {
        self.semiring
    }

    pub fn hstates(&self) -> &[String] {
        &self.hstates
    }

    pub fn vstates(&self) -> &[String] {
        &self.vstates
    }

    pub fn parens(&self) -> &[String] {
        &self.parens
    }

    pub fn num_states(&self) -> usize {
        self.hstates.len() + self.vstates.len()
    }

    /// Name of the state with joint index `q`.
    pub fn state_name(&self, q: usize) -> &str {
        if q < self.hstates.len() {
            &self.hstates[q]
        } else {
            &self.vstates[q - self.hstates.len()]
        }
    }

    pub fn state_index(&self, q: &str) -> Result<usize> {
        self.index.get(q).copied().ok_or_else(|| Error::UnknownState(q.to_string()))
    }

    pub fn paren_index(&self, s: &str) -> Result<usize> {
        self.parens
            .iter()
            .position(|p| p == s)
            .ok_or_else(|| Error::InvalidAutomaton(format!("unknown parenthesis {s:?}")))
    }

    pub fn is_horizontal(&self, q: usize) -> bool {
        q < self.hstates.len()
    }

    /// Joint indices of the states of one sort.
    pub fn states_of(&self, sort: Sort) -> core::ops::Range<usize> {
        let h = self.hstates.len();
        match sort {
            Sort::Horizontal => 0..h,
            Sort::Vertical => h..h + self.vstates.len(),
        }
    }

    pub fn lambda(&self, q: usize) -> &Weight {
        &self.lambda[q]
    }

    pub fn gamma(&self, q: usize) -> &Weight {
        &self.gamma[q]
    }

    pub fn mu(&self) -> &BTreeMap<(usize, String, usize), Weight> {
        &self.mu
    }

    /// Nonzero `μ_op(q, (ₛ, q')` as `(q, s, q') -> w`.
    pub fn mu_open(&self) -> &BTreeMap<(usize, usize, usize), Weight> {
        &self.mu_open
    }

    /// Nonzero `μ_cl(q, )ₛ, q')` as `(q, s, q') -> w`.
    pub fn mu_close(&self) -> &BTreeMap<(usize, usize, usize), Weight> {
        &self.mu_close
    }

    fn check_weight(&self, w: &Weight) -> Result<()> {
        if self.semiring.admits(w) {
            Ok(())
        } else {
            Err(Error::KindMismatch { semiring: self.semiring.name(), weight: w.to_string() })
        }
    }

    fn check_state(&self, q: usize) -> Result<()> {
        if q < self.num_states() {
            Ok(())
        } else {
            Err(Error::UnknownState(format!("#{q}")))
        }
    }

    pub fn add_lambda(&mut self, q: usize, w: Weight) -> Result<()> {
        self.check_state(q)?;
        self.check_weight(&w)?;
        self.semiring.add_assign(&mut self.lambda[q], &w);
        Ok(())
    }

    pub fn add_gamma(&mut self, q: usize, w: Weight) -> Result<()> {
        self.check_state(q)?;
        self.check_weight(&w)?;
        self.semiring.add_assign(&mut self.gamma[q], &w);
        Ok(())
    }

    pub fn add_mu(&mut self, q: usize, a: &str, q2: usize, w: Weight) -> Result<()> {
        self.check_state(q)?;
        self.check_state(q2)?;
        self.check_weight(&w)?;
        if self.is_horizontal(q) != self.is_horizontal(q2) {
            return Err(Error::InvalidAutomaton(format!(
                "transition {} -{a}-> {} changes sort",
                self.state_name(q),
                self.state_name(q2)
            )));
        }
        add_entry(self.semiring, &mut self.mu, (q, a.to_string(), q2), w);
        Ok(())
    }

    fn check_bracket(&self, q: usize, s: usize, q2: usize) -> Result<()> {
        self.check_state(q)?;
        self.check_state(q2)?;
        if s >= self.parens.len() {
            return Err(Error::InvalidAutomaton(format!("unknown parenthesis #{s}")));
        }
        if self.is_horizontal(q) == self.is_horizontal(q2) {
            return Err(Error::InvalidAutomaton(format!(
                "parenthesis between {} and {} keeps the sort",
                self.state_name(q),
                self.state_name(q2)
            )));
        }
        Ok(())
    }

    pub fn add_open(&mut self, q: usize, s: usize, q2: usize, w: Weight) -> Result<()> {
        self.check_bracket(q, s, q2)?;
        self.check_weight(&w)?;
        add_entry(self.semiring, &mut self.mu_open, (q, s, q2), w);
        Ok(())
    }

    pub fn add_close(&mut self, q: usize, s: usize, q2: usize, w: Weight) -> Result<()> {
        self.check_bracket(q, s, q2)?;
        self.check_weight(&w)?;
        add_entry(self.semiring, &mut self.mu_close, (q, s, q2), w);
        Ok(())
    }

    /// Letters occurring in some nonzero transition, sorted.
    pub fn alphabet(&self) -> Vec<String> {
        let set: alloc::collections::BTreeSet<String> = self.mu.keys().map(|k| k.1.clone()).collect();
        set.into_iter().collect()
    }

    /// Every run with label `t` of nonzero weight.
    pub fn runs(&self, t: &Text, guards: &Guards) -> Result<Vec<WpaRun>> {
        Guards::check("text width for run enumeration", guards.wpa_run_width as u128, t.len() as u128)?;
        let mut memo = BTreeMap::new();
        let found = self.runs_on(t, 1, t.len(), &mut memo);
        Ok(found
            .into_iter()
            .map(|(word, (weight, initial, final_state, _))| WpaRun { word, weight, initial, final_state })
            .collect())
    }

    /// Behavior as the weighted sum over [`runs`](Self::runs).
    pub fn behavior_by_runs(&self, t: &Text, guards: &Guards) -> Result<Weight> {
        let k = self.semiring;
        let mut acc = k.zero();
        for r in self.runs(t, guards)? {
            let w = k.product([&self.lambda[r.initial], &r.weight, &self.gamma[r.final_state]]);
            k.add_assign(&mut acc, &w);
        }
        Ok(acc)
    }

    #[allow(clippy::type_complexity)]
    fn runs_on(
        &self,
        t: &Text,
        lo: usize,
        hi: usize,
        memo: &mut BTreeMap<(usize, usize), BTreeMap<Vec<RunToken>, (Weight, usize, usize, bool)>>,
    ) -> BTreeMap<Vec<RunToken>, (Weight, usize, usize, bool)> {
        if let Some(r) = memo.get(&(lo, hi)) {
            return r.clone();
        }
        let k = self.semiring;
        let mut out = BTreeMap::new();
        if lo == hi {
            for ((p, a, q), w) in &self.mu {
                if a == t.label(lo) {
                    out.insert(
                        vec![RunToken::State(*p), RunToken::Letter(lo), RunToken::State(*q)],
                        (w.clone(), *p, *q, false),
                    );
                }
            }
        } else {
            let rank = t.ranks();
            let sort = if cuts(rank, lo, hi, Sort::Horizontal).is_empty() {
                Sort::Vertical
            } else {
                Sort::Horizontal
            };
            let mut rule2 = BTreeMap::new();
            for c in cuts(rank, lo, hi, sort) {
                let left = self.runs_on(t, lo, c, memo);
                let right = self.runs_on(t, c + 1, hi, memo);
                for (lw, (lweight, li, lf, _)) in &left {
                    if (sort == Sort::Horizontal) != self.is_horizontal(*lf) {
                        continue;
                    }
                    for (rw, (rweight, ri, rf, _)) in &right {
                        if ri != lf {
                            continue;
                        }
                        let w = k.times(lweight, rweight);
                        if k.is_zero(&w) {
                            continue;
                        }
                        let mut word = lw.clone();
                        word.extend(rw.iter().cloned());
                        rule2.insert(word, (w, *li, *rf, true));
                    }
                }
            }
            for (word, (w, i, f, _)) in &rule2 {
                for ((q1, s, i2), wo) in &self.mu_open {
                    if i2 != i {
                        continue;
                    }
                    for ((f2, s2, q2), wc) in &self.mu_close {
                        if f2 != f || s2 != s {
                            continue;
                        }
                        let total = k.product([wo, w, wc]);
                        if k.is_zero(&total) {
                            continue;
                        }
                        let mut wrapped = vec![RunToken::State(*q1), RunToken::Open(*s), RunToken::State(*i)];
                        wrapped.extend(word.iter().cloned());
                        wrapped.extend([RunToken::State(*f), RunToken::Close(*s), RunToken::State(*q2)]);
                        out.insert(wrapped, (total, *q1, *q2, false));
                    }
                }
            }
            out.extend(rule2);
        }
        memo.insert((lo, hi), out.clone());
        out
    }

    /// `‖A‖(t)` by structural recursion on the maximal decomposition.
    pub fn behavior(&self, t: &Text) -> Weight {
        let k = self.semiring;
        let mut tables = Tables { by_letter: BTreeMap::new(), close: BTreeMap::new() };
        for ((p, a, q), w) in &self.mu {
            tables.by_letter.entry(a.as_str()).or_default().push((*p, *q, w));
        }
        for ((f, s, q2), w) in &self.mu_close {
            tables.close.entry((*f, *s)).or_default().push((*q2, w));
        }
        let (m2, m3) = self.matrices(&tables, t, 1, t.len());
        let mut acc = k.zero();
        for m in [&m2, &m3] {
            for (p, row) in m.iter().enumerate() {
                if k.is_zero(&self.lambda[p]) {
                    continue;
                }
                for (q, w) in row {
                    if !k.is_zero(&self.gamma[*q]) {
                        k.add_assign(&mut acc, &k.product([&self.lambda[p], w, &self.gamma[*q]]));
                    }
                }
            }
        }
        acc
    }

    /// Sums of runs on the clan `lo..=hi`: those not made by rule (3), and those made by rule (3).
    fn matrices(&self, tables: &Tables, t: &Text, lo: usize, hi: usize) -> (Matrix, Matrix) {
        let k = self.semiring;
        let n = self.num_states();
        let mut plain: Matrix = vec![SparseVec::new(); n];
        let wrapped;
        match split(t.ranks(), lo, hi).expect("texts are alternating") {
            None => {
                for (p, q, w) in tables.by_letter.get(t.label(lo)).into_iter().flatten() {
                    accumulate(k, &mut plain[*p], *q, (*w).clone());
                }
                wrapped = vec![SparseVec::new(); n];
            }
            Some((_, spans)) => {
                let mut first = true;
                for (a, b) in spans {
                    let (p2, p3) = self.matrices(tables, t, a, b);
                    let f = add_matrices(k, p2, &p3);
                    if first {
                        plain = f;
                        first = false;
                    } else {
                        plain = mul_matrices(k, &plain, &f);
                    }
                }
                let horizontal = self.sorted_product(t, lo, hi);
                for (p, row) in plain.iter_mut().enumerate() {
                    if self.is_horizontal(p) != horizontal {
                        row.clear();
                    } else {
                        row.retain(|q, _| self.is_horizontal(*q) == horizontal);
                    }
                }
                wrapped = self.wrap(tables, &plain);
            }
        }
        (plain, wrapped)
    }

    fn sorted_product(&self, t: &Text, lo: usize, hi: usize) -> bool {
        !cuts(t.ranks(), lo, hi, Sort::Horizontal).is_empty()
    }

    /// `Σ_s μ_op(q1, (ₛ, i) · M[i][f] · μ_cl(f, )ₛ, q2)`.
    fn wrap(&self, tables: &Tables, m: &Matrix) -> Matrix {
        let k = self.semiring;
        let mut out: Matrix = vec![SparseVec::new(); self.num_states()];
        for ((q1, s, i), wo) in &self.mu_open {
            for (f, x) in &m[*i] {
                let left = k.times(wo, x);
                for (q2, wc) in tables.close.get(&(*f, *s)).into_iter().flatten() {
                    accumulate(k, &mut out[*q1], *q2, k.times(&left, wc));
                }
            }
        }
        out
    }
}

fn add_entry<K: Ord>(k: Semiring, map: &mut BTreeMap<K, Weight>, key: K, w: Weight) {
    if k.is_zero(&w) {
        return;
    }
    match map.get_mut(&key) {
        Some(acc) => {
            *acc = k.plus(acc, &w);
            if k.is_zero(acc) {
                map.remove(&key);
            }
        }
        None => {
            map.insert(key, w);
        }
    }
}

fn add_matrices(k: Semiring, mut a: Matrix, b: &Matrix) -> Matrix {
    for (ra, rb) in a.iter_mut().zip(b) {
        for (j, w) in rb {
            accumulate(k, ra, *j, w.clone());
        }
    }
    a
}

fn mul_matrices(k: Semiring, a: &Matrix, b: &Matrix) -> Matrix {
    a.iter()
        .map(|row| {
            let mut out = SparseVec::new();
            for (m, x) in row {
                for (j, y) in &b[*m] {
                    accumulate(k, &mut out, *j, k.times(x, y));
                }
            }
            out
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_one() -> Wpa {
        let k = Semiring::Boolean;
        let mut a = Wpa::new(k, vec!["h"], vec!["v"], vec!["s"]).unwrap();
        for q in 0..2 {
            a.add_lambda(q, k.one()).unwrap();
            a.add_gamma(q, k.one()).unwrap();
            for l in ["a", "b", "c"] {
                a.add_mu(q, l, q, k.one()).unwrap();
            }
        }
        a.add_open(0, 0, 1, k.one()).unwrap();
        a.add_open(1, 0, 0, k.one()).unwrap();
        a.add_close(0, 0, 1, k.one()).unwrap();
        a.add_close(1, 0, 0, k.one()).unwrap();
        a
    }

    #[test]
    fn all_one_accepts_everything() {
        let a = all_one();
        let g = Guards::default();
        for order in crate::text::enumerate_tdo(4, &g).unwrap() {
            let t = Text::from_chars("abca", order).unwrap();
            assert_eq!(a.behavior(&t), Semiring::Boolean.one());
            assert_eq!(a.behavior_by_runs(&t, &g).unwrap(), Semiring::Boolean.one());
        }
    }

    #[test]
    fn singleton_runs_use_mu_only() {
        let a = all_one();
        let runs = a.runs(&Text::singleton("a"), &Guards::default()).unwrap();
        assert_eq!(runs.len(), 2);
        assert!(runs.iter().all(|r| r.word.len() == 3));
    }

    #[test]
    fn no_doubled_parentheses() {
        let a = all_one();
        let t = Text::from_chars("ab", vec![1, 2]).unwrap();
        let runs = a.runs(&t, &Guards::default()).unwrap();
        // (h a h)(h b h) plain, and one wrapping between v states
        assert_eq!(runs.len(), 2);
        let opens: usize =
            runs.iter().map(|r| r.word.iter().filter(|t| matches!(t, RunToken::Open(_))).count()).sum();
        assert_eq!(opens, 1);
    }

    #[test]
    fn typing() {
        let k = Semiring::Natural;
        let mut a = Wpa::new(k, vec!["h"], vec!["v"], vec!["s"]).unwrap();
        assert!(a.add_mu(0, "a", 1, k.one()).is_err());
        assert!(a.add_open(0, 0, 0, k.one()).is_err());
        assert!(Wpa::new(k, vec!["x"], vec!["x"], vec![]).is_err());
    }
}
