//! Weighted nested-word automata.

use alloc::collections::BTreeMap;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::guard::Guards;
use crate::nested_word::{for_each_nested_word, NestedWord, PositionKind};
use crate::semiring::{Semiring, Weight};
use crate::sparse::{accumulate, SparseVec};

/// A weighted nested-word automaton. Absent table entries are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Wnwa {
    semiring: Semiring,
    states: Vec<String>,
    index: BTreeMap<String, usize>,
    iota: Vec<Weight>,
    kappa: Vec<Weight>,
    internal: BTreeMap<(usize, String, usize), Weight>,
    call: BTreeMap<(usize, String, usize), Weight>,
    ret: BTreeMap<(usize, usize, String, usize), Weight>,
}

/// A nested word on which two behaviors differ, with both values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub nested_word: NestedWord,
    pub left: Weight,
    pub right: Weight,
}

impl Wnwa {
    /// An automaton with the given states and all weights zero.
    pub fn new<S: Into<String>>(semiring: Semiring, states: Vec<S>) -> Result<Self> {
        let states: Vec<String> = states.into_iter().map(Into::into).collect();
        let mut index = BTreeMap::new();
        for (i, q) in states.iter().enumerate() {
            if index.insert(q.clone(), i).is_some() {
                return Err(Error::InvalidAutomaton(format!("duplicate state {q:?}")));
            }
        }
        let n = states.len();
        Ok(Wnwa {
            semiring,
            states,
            index,
            iota: vec![semiring.zero(); n],
            kappa: vec![semiring.zero(); n],
            internal: BTreeMap::new(),
            call: BTreeMap::new(),
            ret: BTreeMap::new(),
        })
    }

    pub fn semiring(&self) -> Semiring {
        self.semiring
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn state_index(&self, q: &str) -> Result<usize> {
        self.index.get(q).copied().ok_or_else(|| Error::UnknownState(q.to_string()))
    }

    pub fn iota(&self, q: usize) -> &Weight {
        &self.iota[q]
    }

    pub fn kappa(&self, q: usize) -> &Weight {
        &self.kappa[q]
    }

    /// Nonzero internal transitions `(q, a, q') -> w`.
    pub fn internal(&self) -> &BTreeMap<(usize, String, usize), Weight> {
        &self.internal
    }

    /// Nonzero call transitions `(q, a, q') -> w`.
    pub fn calls(&self) -> &BTreeMap<(usize, String, usize), Weight> {
        &self.call
    }

    /// Nonzero return transitions `(q, p, a, q') -> w`, `p` the look-back state.
    pub fn returns(&self) -> &BTreeMap<(usize, usize, String, usize), Weight> {
        &self.ret
    }

    /// Letters occurring in some nonzero transition, sorted.
    pub fn alphabet(&self) -> Vec<String> {
        let mut set = BTreeSet::new();
        set.extend(self.internal.keys().map(|k| k.1.clone()));
        set.extend(self.call.keys().map(|k| k.1.clone()));
        set.extend(self.ret.keys().map(|k| k.2.clone()));
        set.into_iter().collect()
    }

    fn check_weight(&self, w: &Weight) -> Result<()> {
        if self.semiring.admits(w) {
            Ok(())
        } else {
            Err(Error::KindMismatch { semiring: self.semiring.name(), weight: w.to_string() })
        }
    }

    fn check_state(&self, q: usize) -> Result<()> {
        if q < self.states.len() {
            Ok(())
        } else {
            Err(Error::UnknownState(format!("#{q}")))
        }
    }

    pub fn add_iota(&mut self, q: usize, w: Weight) -> Result<()> {
        self.check_state(q)?;
        self.check_weight(&w)?;
        self.semiring.add_assign(&mut self.iota[q], &w);
        Ok(())
    }

    pub fn add_kappa(&mut self, q: usize, w: Weight) -> Result<()> {
        self.check_state(q)?;
        self.check_weight(&w)?;
        self.semiring.add_assign(&mut self.kappa[q], &w);
        Ok(())
    }

    pub fn add_internal(&mut self, q: usize, a: &str, q2: usize, w: Weight) -> Result<()> {
        self.check_state(q)?;
        self.check_state(q2)?;
        self.check_weight(&w)?;
        add_entry(self.semiring, &mut self.internal, (q, a.to_string(), q2), w);
        Ok(())
    }

    pub fn add_call(&mut self, q: usize, a: &str, q2: usize, w: Weight) -> Result<()> {
        self.check_state(q)?;
        self.check_state(q2)?;
        self.check_weight(&w)?;
        add_entry(self.semiring, &mut self.call, (q, a.to_string(), q2), w);
        Ok(())
    }

    /// Adds to `δ_ret(q, p, a, q2)` where `p` is the state before the matching call.
    pub fn add_return(&mut self, q: usize, p: usize, a: &str, q2: usize, w: Weight) -> Result<()> {
        self.check_state(q)?;
        self.check_state(p)?;
        self.check_state(q2)?;
        self.check_weight(&w)?;
        add_entry(self.semiring, &mut self.ret, (q, p, a.to_string(), q2), w);
        Ok(())
    }

    fn zero(&self) -> Weight {
        self.semiring.zero()
    }

    /// Weight of the run `run` (states `q_0 .. q_n`) on `nw`, without ι and κ.
    pub fn run_weight(&self, nw: &NestedWord, run: &[usize]) -> Result<Weight> {
        if run.len() != nw.len() + 1 {
            return Err(Error::LengthMismatch { expected: nw.len() + 1, actual: run.len() });
        }
        for &q in run {
            self.check_state(q)?;
        }
        Ok(self.run_weight_unchecked(nw, run))
    }

    /// [`run_weight`](Self::run_weight) with state names.
    pub fn run_weight_named(&self, nw: &NestedWord, run: &[&str]) -> Result<Weight> {
        let idx = run.iter().map(|q| self.state_index(q)).collect::<Result<Vec<_>>>()?;
        self.run_weight(nw, &idx)
    }

    fn run_weight_unchecked(&self, nw: &NestedWord, run: &[usize]) -> Weight {
        let k = self.semiring;
        let mut acc = k.one();
        for i in 1..=nw.len() {
            let a = nw.letter(i).to_string();
            let w = match nw.kind(i) {
                PositionKind::Internal => self.internal.get(&(run[i - 1], a, run[i])),
                PositionKind::Call => self.call.get(&(run[i - 1], a, run[i])),
                PositionKind::Return => {
                    let c = nw.partner(i).unwrap();
                    self.ret.get(&(run[i - 1], run[c - 1], a, run[i]))
                }
            };
            match w {
                Some(w) => acc = k.times(&acc, w),
                None => return self.zero(),
            }
        }
        acc
    }

    /// Behavior by enumerating all `|Q|^(n+1)` state sequences.
    pub fn behavior_bruteforce(&self, nw: &NestedWord, guards: &Guards) -> Result<Weight> {
        let k = self.semiring;
        let q = self.states.len();
        let n = nw.len();
        let runs = (q as u128).saturating_pow((n + 1) as u32);
        Guards::check("brute-force runs", guards.bruteforce_runs, runs)?;
        let mut total = k.zero();
        if q == 0 {
            return Ok(total);
        }
        let mut run = vec![0usize; n + 1];
        loop {
            let ends = k.times(&self.iota[run[0]], &self.kappa[run[n]]);
            if !k.is_zero(&ends) {
                let w = self.run_weight_unchecked(nw, &run);
                if !k.is_zero(&w) {
                    k.add_assign(&mut total, &k.times(&ends, &w));
                }
            }
            let mut p = n + 1;
            loop {
                if p == 0 {
                    return Ok(total);
                }
                p -= 1;
                run[p] += 1;
                if run[p] < q {
                    break;
                }
                run[p] = 0;
            }
        }
    }

    /// Behavior by a dynamic program over the arc structure.
    pub fn behavior(&self, nw: &NestedWord) -> Weight {
        self.evaluator().eval(nw)
    }

    /// A reusable evaluator with transitions indexed by letter.
    pub fn evaluator(&self) -> Evaluator<'_> {
        Evaluator::new(self)
    }

    /// Pointwise product of behaviors.
    pub fn hadamard(&self, other: &Wnwa) -> Result<Wnwa> {
        self.same_semiring(other)?;
        let k = self.semiring;
        let nb = other.states.len();
        let names: Vec<String> = self
            .states
            .iter()
            .flat_map(|a| other.states.iter().map(move |b| format!("({a},{b})")))
            .collect();
        let mut out = Wnwa::new(k, names)?;
        let pair = |a: usize, b: usize| a * nb + b;
        for a in 0..self.states.len() {
            for b in 0..nb {
                out.iota[pair(a, b)] = k.times(&self.iota[a], &other.iota[b]);
                out.kappa[pair(a, b)] = k.times(&self.kappa[a], &other.kappa[b]);
            }
        }
        for ((p, a, q), w) in &self.internal {
            for ((p2, a2, q2), w2) in &other.internal {
                if a == a2 {
                    add_entry(k, &mut out.internal, (pair(*p, *p2), a.clone(), pair(*q, *q2)), k.times(w, w2));
                }
            }
        }
        for ((p, a, q), w) in &self.call {
            for ((p2, a2, q2), w2) in &other.call {
                if a == a2 {
                    add_entry(k, &mut out.call, (pair(*p, *p2), a.clone(), pair(*q, *q2)), k.times(w, w2));
                }
            }
        }
        for ((p, l, a, q), w) in &self.ret {
            for ((p2, l2, a2, q2), w2) in &other.ret {
                if a == a2 {
                    add_entry(
                        k,
                        &mut out.ret,
                        (pair(*p, *p2), pair(*l, *l2), a.clone(), pair(*q, *q2)),
                        k.times(w, w2),
                    );
                }
            }
        }
        Ok(out)
    }

    /// Sum of behaviors, on the disjoint union of the state sets.
    pub fn disjoint_sum(&self, other: &Wnwa) -> Result<Wnwa> {
        self.same_semiring(other)?;
        let k = self.semiring;
        let na = self.states.len();
        let names: Vec<String> = self
            .states
            .iter()
            .map(|q| format!("L.{q}"))
            .chain(other.states.iter().map(|q| format!("R.{q}")))
            .collect();
        let mut out = Wnwa::new(k, names)?;
        for (src, off) in [(self, 0usize), (other, na)] {
            for q in 0..src.states.len() {
                out.iota[q + off] = src.iota[q].clone();
                out.kappa[q + off] = src.kappa[q].clone();
            }
            for ((p, a, q), w) in &src.internal {
                out.internal.insert((p + off, a.clone(), q + off), w.clone());
            }
            for ((p, a, q), w) in &src.call {
                out.call.insert((p + off, a.clone(), q + off), w.clone());
            }
            for ((p, l, a, q), w) in &src.ret {
                out.ret.insert((p + off, l + off, a.clone(), q + off), w.clone());
            }
        }
        Ok(out)
    }

    /// `k . ‖A‖`, folding `k` into ι.
    pub fn scale(&self, k: &Weight) -> Result<Wnwa> {
        self.check_weight(k)?;
        let mut out = self.clone();
        for w in out.iota.iter_mut() {
            *w = self.semiring.times(k, w);
        }
        Ok(out)
    }

    /// Removes states that lie on no run from the support of ι to the support of κ.
    pub fn trim(&self) -> Wnwa {
        let k = self.semiring;
        let n = self.states.len();
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (p, _, q) in self.internal.keys().chain(self.call.keys()) {
            succ[*p].push(*q);
        }
        for (p, _, _, q) in self.ret.keys() {
            succ[*p].push(*q);
        }
        let mut pred: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (p, qs) in succ.iter().enumerate() {
            for &q in qs {
                pred[q].push(p);
            }
        }
        let reach = |seeds: Vec<usize>, adj: &Vec<Vec<usize>>| {
            let mut seen = vec![false; n];
            let mut stack = seeds;
            while let Some(q) = stack.pop() {
                if !seen[q] {
                    seen[q] = true;
                    stack.extend(adj[q].iter().copied());
                }
            }
            seen
        };
        let fwd = reach((0..n).filter(|&q| !k.is_zero(&self.iota[q])).collect(), &succ);
        let bwd = reach((0..n).filter(|&q| !k.is_zero(&self.kappa[q])).collect(), &pred);
        let keep: Vec<usize> = (0..n).filter(|&q| fwd[q] && bwd[q]).collect();
        let mut map = vec![usize::MAX; n];
        for (new, &old) in keep.iter().enumerate() {
            map[old] = new;
        }
        let mut out = Wnwa::new(k, keep.iter().map(|&q| self.states[q].clone()).collect())
            .expect("state names stay distinct");
        for (new, &old) in keep.iter().enumerate() {
            out.iota[new] = self.iota[old].clone();
            out.kappa[new] = self.kappa[old].clone();
        }
        let live = |q: usize| map[q] != usize::MAX;
        for ((p, a, q), w) in &self.internal {
            if live(*p) && live(*q) {
                out.internal.insert((map[*p], a.clone(), map[*q]), w.clone());
            }
        }
        for ((p, a, q), w) in &self.call {
            if live(*p) && live(*q) {
                out.call.insert((map[*p], a.clone(), map[*q]), w.clone());
            }
        }
        for ((p, l, a, q), w) in &self.ret {
            if live(*p) && live(*l) && live(*q) {
                out.ret.insert((map[*p], map[*l], a.clone(), map[*q]), w.clone());
            }
        }
        out
    }

    fn same_semiring(&self, other: &Wnwa) -> Result<()> {
        if self.semiring != other.semiring {
            return Err(Error::SemiringMismatch {
                left: self.semiring.name(),
                right: other.semiring.name(),
            });
        }
        Ok(())
    }

    /// First nested word of length at most `n` (in witness order) where the behaviors differ.
    pub fn bounded_equiv(&self, other: &Wnwa, n: usize, guards: &Guards) -> Result<Option<Witness>> {
        self.same_semiring(other)?;
        let mut alphabet: BTreeSet<String> = self.alphabet().into_iter().collect();
        alphabet.extend(other.alphabet());
        let alphabet: Vec<String> = alphabet.into_iter().collect();
        let (ea, eb) = (self.evaluator(), other.evaluator());
        for_each_nested_word(&alphabet, n, guards, |nw| {
            let (l, r) = (ea.eval(nw), eb.eval(nw));
            if l != r {
                ControlFlow::Break(Witness { nested_word: nw.clone(), left: l, right: r })
            } else {
                ControlFlow::Continue(())
            }
        })
    }

    /// First nested word of length at most `n` with nonzero behavior, and its weight.
    pub fn bounded_zero_test(&self, n: usize, guards: &Guards) -> Result<Option<(NestedWord, Weight)>> {
        let alphabet = self.alphabet();
        let ev = self.evaluator();
        let k = self.semiring;
        for_each_nested_word(&alphabet, n, guards, |nw| {
            let w = ev.eval(nw);
            if k.is_zero(&w) {
                ControlFlow::Continue(())
            } else {
                ControlFlow::Break((nw.clone(), w))
            }
        })
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

type Adj = Vec<Vec<(usize, Weight)>>;
/// `(state, state before the call) ↦ [(target, weight)]`
type RetAdj = BTreeMap<(usize, usize), Vec<(usize, Weight)>>;

/// Transition tables of a [`Wnwa`] indexed by letter, for repeated evaluation.
pub struct Evaluator<'a> {
    automaton: &'a Wnwa,
    letters: BTreeMap<&'a str, usize>,
    internal: Vec<Adj>,
    call: Vec<Adj>,
    ret: Vec<RetAdj>,
}

impl<'a> Evaluator<'a> {
    fn new(a: &'a Wnwa) -> Self {
        let mut letters = BTreeMap::new();
        for (_, l, _) in a.internal.keys().chain(a.call.keys()) {
            let n = letters.len();
            letters.entry(l.as_str()).or_insert(n);
        }
        for (_, _, l, _) in a.ret.keys() {
            let n = letters.len();
            letters.entry(l.as_str()).or_insert(n);
        }
        let q = a.states.len();
        let mut internal = vec![vec![Vec::new(); q]; letters.len()];
        let mut call = vec![vec![Vec::new(); q]; letters.len()];
        let mut ret = vec![BTreeMap::new(); letters.len()];
        for ((p, l, r), w) in &a.internal {
            internal[letters[l.as_str()]][*p].push((*r, w.clone()));
        }
        for ((p, l, r), w) in &a.call {
            call[letters[l.as_str()]][*p].push((*r, w.clone()));
        }
        for ((p, b, l, r), w) in &a.ret {
            ret[letters[l.as_str()]].entry((*p, *b)).or_insert_with(Vec::new).push((*r, w.clone()));
        }
        Evaluator { automaton: a, letters, internal, call, ret }
    }

    /// `‖A‖(nw)`.
    pub fn eval(&self, nw: &NestedWord) -> Weight {
        let k = self.automaton.semiring;
        let mut ids = Vec::with_capacity(nw.len() + 1);
        ids.push(usize::MAX);
        for l in nw.letters() {
            match self.letters.get(l.as_str()) {
                Some(&i) => ids.push(i),
                None => return k.zero(),
            }
        }
        let mut start = SparseVec::new();
        for (q, w) in self.automaton.iota.iter().enumerate() {
            accumulate(k, &mut start, q, w.clone());
        }
        let mut memo = BTreeMap::new();
        let end = self.segment(nw, &ids, start, 1, nw.len(), &mut memo);
        let mut acc = k.zero();
        for (q, w) in end {
            let kq = &self.automaton.kappa[q];
            if !k.is_zero(kq) {
                k.add_assign(&mut acc, &k.times(&w, kq));
            }
        }
        acc
    }

    /// Propagates `v` through the well-nested segment `lo..=hi`.
    fn segment(
        &self,
        nw: &NestedWord,
        ids: &[usize],
        mut v: SparseVec,
        lo: usize,
        hi: usize,
        memo: &mut BTreeMap<(usize, usize), SparseVec>,
    ) -> SparseVec {
        let k = self.automaton.semiring;
        let mut i = lo;
        while i <= hi && !v.is_empty() {
            let a = ids[i];
            match nw.partner(i) {
                None => {
                    let mut next = SparseVec::new();
                    for (p, w) in &v {
                        for (q, t) in &self.internal[a][*p] {
                            accumulate(k, &mut next, *q, k.times(w, t));
                        }
                    }
                    v = next;
                    i += 1;
                }
                Some(j) => {
                    let mut next = SparseVec::new();
                    for (p, w) in &v {
                        if !memo.contains_key(&(i, *p)) {
                            let row = self.arch_row(nw, ids, *p, i, j, memo);
                            memo.insert((i, *p), row);
                        }
                        for (q, t) in &memo[&(i, *p)] {
                            accumulate(k, &mut next, *q, k.times(w, t));
                        }
                    }
                    v = next;
                    i = j + 1;
                }
            }
        }
        v
    }

    /// Weights from state `p` before call `i` to each state after its return `j`.
    fn arch_row(
        &self,
        nw: &NestedWord,
        ids: &[usize],
        p: usize,
        i: usize,
        j: usize,
        memo: &mut BTreeMap<(usize, usize), SparseVec>,
    ) -> SparseVec {
        let k = self.automaton.semiring;
        let mut u = SparseVec::new();
        for (q, t) in &self.call[ids[i]][p] {
            accumulate(k, &mut u, *q, t.clone());
        }
        let inner = self.segment(nw, ids, u, i + 1, j - 1, memo);
        let mut row = SparseVec::new();
        let table = &self.ret[ids[j]];
        for (q, w) in &inner {
            if let Some(list) = table.get(&(*q, p)) {
                for (r, t) in list {
                    accumulate(k, &mut row, *r, k.times(w, t));
                }
            }
        }
        row
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bar() -> Wnwa {
        let k = Semiring::Viterbi;
        let w = |s: &str| k.parse(s).unwrap();
        let mut a = Wnwa::new(k, vec!["q1", "q2", "q3", "q4"]).unwrap();
        a.add_iota(0, w("1")).unwrap();
        a.add_kappa(3, w("1")).unwrap();
        a.add_internal(0, "r", 1, w("1")).unwrap();
        a.add_internal(1, "b", 2, w("1/2")).unwrap();
        a.add_internal(2, "w", 2, w("1/2")).unwrap();
        a.add_internal(2, "ret", 3, w("1/2")).unwrap();
        a.add_call(1, "call", 0, w("1/2")).unwrap();
        a.add_return(2, 1, "ret", 2, w("1/2")).unwrap();
        a
    }

    fn bar_word() -> NestedWord {
        NestedWord::new(vec!["r", "call", "r", "b", "ret", "w", "w", "ret"], [(2, 5)]).unwrap()
    }

    #[test]
    fn bar_procedure() {
        let a = bar();
        let nw = bar_word();
        let expected = Semiring::Viterbi.parse("1/64").unwrap();
        let run = ["q1", "q2", "q1", "q2", "q3", "q3", "q3", "q3", "q4"];
        assert_eq!(a.run_weight_named(&nw, &run).unwrap(), expected);
        assert_eq!(a.behavior_bruteforce(&nw, &Guards::default()).unwrap(), expected);
        assert_eq!(a.behavior(&nw), expected);
    }

    #[test]
    fn run_errors() {
        let a = bar();
        let nw = bar_word();
        assert!(matches!(a.run_weight(&nw, &[0, 1]), Err(Error::LengthMismatch { .. })));
        assert!(matches!(a.run_weight(&nw, &[9; 9]), Err(Error::UnknownState(_))));
        let single = NestedWord::new(vec!["r"], []).unwrap();
        assert_eq!(a.run_weight(&single, &[0, 1]).unwrap(), Semiring::Viterbi.one());
        assert!(Semiring::Viterbi.is_zero(&a.run_weight(&single, &[0, 2]).unwrap()));
    }

    #[test]
    fn zero_test_witness() {
        let a = bar();
        let (nw, w) = a.bounded_zero_test(8, &Guards::default()).unwrap().unwrap();
        assert_eq!(nw.word_string(), "r b ret");
        assert!(nw.arcs().is_empty());
        assert_eq!(w, Semiring::Viterbi.parse("1/4").unwrap());
        assert!(a.bounded_equiv(&a, 5, &Guards::default()).unwrap().is_none());
        let one = a.scale(&Semiring::Viterbi.one()).unwrap();
        assert!(a.bounded_equiv(&one, 5, &Guards::default()).unwrap().is_none());
    }

    #[test]
    fn rejects_foreign_weights() {
        let mut a = Wnwa::new(Semiring::Viterbi, vec!["q"]).unwrap();
        assert!(a.add_iota(0, Semiring::Natural.parse("3").unwrap()).is_err());
        assert!(Wnwa::new(Semiring::Natural, vec!["q", "q"]).is_err());
        let b = Wnwa::new(Semiring::Natural, vec!["q"]).unwrap();
        assert!(matches!(a.hadamard(&b), Err(Error::SemiringMismatch { .. })));
    }
}
