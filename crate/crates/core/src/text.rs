//! Alternating texts: words with a second linear order built from `∘` and `•`.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::guard::Guards;

/// The two products of the free bisemigroup.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sort {
    /// `∘`: both orders agree across the factors.
    Horizontal,
    /// `•`: the second order reverses the factors.
    Vertical,
}

impl Sort {
    pub fn other(self) -> Sort {
        match self {
            Sort::Horizontal => Sort::Vertical,
            Sort::Vertical => Sort::Horizontal,
        }
    }
}

/// An alternating text on positions `1..=n`.
///
/// `order2` lists the positions in ascending second order; `rank[i]` is the index of `i` in it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Text {
    labels: Vec<String>,
    order2: Vec<usize>,
    rank: Vec<usize>,
}

/// Top-level structure of a text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decomposition {
    Singleton(String),
    Product(Sort, Vec<Text>),
}

fn ranks(n: usize, order2: &[usize]) -> Result<Vec<usize>> {
    if order2.len() != n {
        return Err(Error::NotPermutation(n));
    }
    let mut rank = vec![usize::MAX; n + 1];
    for (r, &p) in order2.iter().enumerate() {
        if p == 0 || p > n || rank[p] != usize::MAX {
            return Err(Error::NotPermutation(n));
        }
        rank[p] = r;
    }
    Ok(rank)
}

/// Cut points `k` in `lo..hi` splitting `lo..=hi` into `lo..=k` and `k+1..=hi` with the given sort.
pub(crate) fn cuts(rank: &[usize], lo: usize, hi: usize, sort: Sort) -> Vec<usize> {
    let mut out = Vec::new();
    if lo >= hi {
        return out;
    }
    // suffix minima and maxima of ranks
    let len = hi - lo + 1;
    let mut suf_min = vec![usize::MAX; len + 1];
    let mut suf_max = vec![0usize; len + 1];
    for off in (0..len).rev() {
        let r = rank[lo + off];
        suf_min[off] = suf_min[off + 1].min(r);
        suf_max[off] = suf_max[off + 1].max(r);
    }
    let (mut pmin, mut pmax) = (usize::MAX, 0usize);
    for off in 0..len - 1 {
        let r = rank[lo + off];
        pmin = pmin.min(r);
        pmax = pmax.max(r);
        let ok = match sort {
            Sort::Horizontal => pmax < suf_min[off + 1],
            Sort::Vertical => pmin > suf_max[off + 1],
        };
        if ok {
            out.push(lo + off);
        }
    }
    out
}

/// A product sort and the spans of its factors.
pub(crate) type Split = (Sort, Vec<(usize, usize)>);

/// Sort and maximal factor spans of the clan `lo..=hi`, or `None` for a singleton.
pub(crate) fn split(rank: &[usize], lo: usize, hi: usize) -> Result<Option<Split>> {
    if lo == hi {
        return Ok(None);
    }
    for sort in [Sort::Horizontal, Sort::Vertical] {
        let cs = cuts(rank, lo, hi, sort);
        if !cs.is_empty() {
            let mut spans = Vec::with_capacity(cs.len() + 1);
            let mut start = lo;
            for c in cs {
                spans.push((start, c));
                start = c + 1;
            }
            spans.push((start, hi));
            return Ok(Some((sort, spans)));
        }
    }
    Err(Error::NotAlternating)
}

fn alternating(rank: &[usize], lo: usize, hi: usize) -> bool {
    match split(rank, lo, hi) {
        Err(_) => false,
        Ok(None) => true,
        Ok(Some((_, spans))) => spans.iter().all(|&(a, b)| alternating(rank, a, b)),
    }
}

/// True iff `order2` is a permutation of `1..=n` describing an alternating text.
pub fn is_alternating(n: usize, order2: &[usize]) -> Result<bool> {
    let rank = ranks(n, order2)?;
    if n == 0 {
        return Ok(false);
    }
    Ok(alternating(&rank, 1, n))
}

impl Text {
    pub fn new<S: Into<String>>(labels: Vec<S>, order2: Vec<usize>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::EmptyWord);
        }
        let rank = ranks(labels.len(), &order2)?;
        if !alternating(&rank, 1, labels.len()) {
            return Err(Error::NotAlternating);
        }
        Ok(Text { labels, order2, rank })
    }

    /// One label per character of `word`.
    pub fn from_chars(word: &str, order2: Vec<usize>) -> Result<Self> {
        Self::new(word.chars().map(|c| c.to_string()).collect(), order2)
    }

    pub fn singleton(label: impl Into<String>) -> Self {
        Text { labels: vec![label.into()], order2: vec![1], rank: vec![usize::MAX, 0] }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    /// Always false; texts are non-empty.
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i - 1]
    }

    pub fn order2(&self) -> &[usize] {
        &self.order2
    }

    /// Index of position `i` in the second order (0-based).
    pub fn rank(&self, i: usize) -> usize {
        self.rank[i]
    }

    pub(crate) fn ranks(&self) -> &[usize] {
        &self.rank
    }

    /// `i ≤₂ j`.
    pub fn leq2(&self, i: usize, j: usize) -> bool {
        self.rank[i] <= self.rank[j]
    }

    /// The labels joined into one string, separated by spaces unless all are single characters.
    pub fn word_string(&self) -> String {
        if self.labels.iter().all(|l| l.chars().count() == 1) {
            self.labels.concat()
        } else {
            self.labels.join(" ")
        }
    }

    /// The subtext on the clan `lo..=hi`.
    pub fn sub(&self, lo: usize, hi: usize) -> Text {
        let labels = self.labels[lo - 1..hi].to_vec();
        let order2: Vec<usize> =
            self.order2.iter().filter(|&&p| lo <= p && p <= hi).map(|&p| p + 1 - lo).collect();
        let rank = ranks(labels.len(), &order2).expect("positions of a window form a permutation");
        Text { labels, order2, rank }
    }

    /// `t₁ ∘ t₂ ∘ …` or `t₁ • t₂ • …`.
    pub fn compose(sort: Sort, factors: &[Text]) -> Result<Text> {
        if factors.len() < 2 {
            return Err(Error::TooFewFactors);
        }
        let mut labels = Vec::new();
        let mut offsets = Vec::with_capacity(factors.len());
        for f in factors {
            offsets.push(labels.len());
            labels.extend(f.labels.iter().cloned());
        }
        let mut order2 = Vec::with_capacity(labels.len());
        let mut push = |idx: usize| {
            order2.extend(factors[idx].order2.iter().map(|p| p + offsets[idx]));
        };
        match sort {
            Sort::Horizontal => (0..factors.len()).for_each(&mut push),
            Sort::Vertical => (0..factors.len()).rev().for_each(&mut push),
        }
        let rank = ranks(labels.len(), &order2)?;
        Ok(Text { labels, order2, rank })
    }

    /// The unique maximal decomposition.
    pub fn decompose(&self) -> Decomposition {
        match split(&self.rank, 1, self.len()).expect("texts are alternating") {
            None => Decomposition::Singleton(self.labels[0].clone()),
            Some((sort, spans)) => {
                Decomposition::Product(sort, spans.iter().map(|&(a, b)| self.sub(a, b)).collect())
            }
        }
    }

    /// Intervals of the first order that are also intervals of the second order.
    pub fn clans(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 1..=n {
            let (mut lo, mut hi) = (usize::MAX, 0usize);
            for j in i..=n {
                lo = lo.min(self.rank[j]);
                hi = hi.max(self.rank[j]);
                if hi - lo == j - i {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Clans overlapping no other clan.
    pub fn prime_clans(&self) -> Vec<(usize, usize)> {
        let clans = self.clans();
        let overlap = |(a, b): (usize, usize), (c, d): (usize, usize)| {
            let meet = a.max(c) <= b.min(d);
            let nested = (a <= c && d <= b) || (c <= a && b <= d);
            meet && !nested
        };
        clans.iter().copied().filter(|&x| clans.iter().all(|&y| !overlap(x, y))).collect()
    }
}

impl core::fmt::Display for Text {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "({}, [", self.word_string())?;
        for (i, p) in self.order2.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("])")
    }
}

fn compositions(n: usize, out: &mut Vec<Vec<usize>>, cur: &mut Vec<usize>) {
    if n == 0 {
        if cur.len() >= 2 {
            out.push(cur.clone());
        }
        return;
    }
    for first in 1..=n {
        cur.push(first);
        compositions(n - first, out, cur);
        cur.pop();
    }
}

fn tdo_rec(
    n: usize,
    parent: Option<Sort>,
    memo: &mut BTreeMap<(usize, Option<Sort>), Vec<Vec<usize>>>,
) -> Vec<Vec<usize>> {
    if n == 1 {
        return vec![vec![1]];
    }
    if let Some(v) = memo.get(&(n, parent)) {
        return v.clone();
    }
    let mut comps = Vec::new();
    compositions(n, &mut comps, &mut Vec::new());
    let mut out = Vec::new();
    for sort in [Sort::Horizontal, Sort::Vertical] {
        if Some(sort) == parent {
            continue;
        }
        for comp in &comps {
            let children: Vec<Vec<Vec<usize>>> =
                comp.iter().map(|&m| tdo_rec(m, Some(sort), memo)).collect();
            let mut offsets = Vec::with_capacity(comp.len());
            let mut acc = 0;
            for &m in comp {
                offsets.push(acc);
                acc += m;
            }
            let mut choice = vec![0usize; comp.len()];
            loop {
                let mut order = Vec::with_capacity(n);
                let idx: Vec<usize> = match sort {
                    Sort::Horizontal => (0..comp.len()).collect(),
                    Sort::Vertical => (0..comp.len()).rev().collect(),
                };
                for b in idx {
                    order.extend(children[b][choice[b]].iter().map(|p| p + offsets[b]));
                }
                out.push(order);
                let mut p = comp.len();
                loop {
                    if p == 0 {
                        break;
                    }
                    p -= 1;
                    choice[p] += 1;
                    if choice[p] < children[p].len() {
                        break;
                    }
                    choice[p] = 0;
                }
                if choice.iter().all(|&c| c == 0) {
                    break;
                }
            }
        }
    }
    memo.insert((n, parent), out.clone());
    out
}

/// All tree-definable second orders on `1..=n`, as sorted `order2` lists.
pub fn enumerate_tdo(n: usize, guards: &Guards) -> Result<Vec<Vec<usize>>> {
    if n == 0 {
        return Err(Error::EmptyWord);
    }
    Guards::check("text width", guards.tdo_width as u128, n as u128)?;
    let mut out = tdo_rec(n, None, &mut BTreeMap::new());
    out.sort();
    Ok(out)
}

/// All alternating texts with the given labels.
pub fn enumerate_texts(labels: &[String], guards: &Guards) -> Result<Vec<Text>> {
    let orders = enumerate_tdo(labels.len(), guards)?;
    Ok(orders
        .into_iter()
        .map(|o| {
            let rank = ranks(labels.len(), &o).expect("enumerated orders are permutations");
            Text { labels: labels.to_vec(), order2: o, rank }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Text {
        Text::from_chars("aacacabb", vec![2, 1, 8, 5, 6, 7, 4, 3]).unwrap()
    }

    fn t(s: &str) -> Text {
        Text::singleton(s)
    }

    #[test]
    fn products() {
        let h = Text::compose(Sort::Horizontal, &[t("a"), t("b")]).unwrap();
        assert_eq!(h.order2(), &[1, 2]);
        let v = Text::compose(Sort::Vertical, &[t("a"), t("b")]).unwrap();
        assert_eq!(v.order2(), &[2, 1]);
        let aa = Text::compose(Sort::Vertical, &[t("a"), t("a")]).unwrap();
        let cab = Text::compose(Sort::Horizontal, &[t("c"), t("a"), t("b")]).unwrap();
        let right = Text::compose(Sort::Vertical, &[t("c"), t("a"), cab, t("b")]).unwrap();
        let whole = Text::compose(Sort::Horizontal, &[aa, right]).unwrap();
        assert_eq!(whole, sample());
        assert_eq!(Text::compose(Sort::Horizontal, &[t("a")]), Err(Error::TooFewFactors));
    }

    #[test]
    fn decomposition() {
        let text = sample();
        match text.decompose() {
            Decomposition::Product(Sort::Horizontal, fs) => {
                assert_eq!(fs.len(), 2);
                assert_eq!(fs[0], text.sub(1, 2));
                match fs[1].decompose() {
                    Decomposition::Product(Sort::Vertical, gs) => {
                        let lens: Vec<usize> = gs.iter().map(Text::len).collect();
                        assert_eq!(lens, vec![1, 1, 3, 1]);
                    }
                    d => panic!("unexpected {d:?}"),
                }
            }
            d => panic!("unexpected {d:?}"),
        }
        assert_eq!(t("a").decompose(), Decomposition::Singleton("a".into()));
    }

    #[test]
    fn alternation() {
        assert!(is_alternating(8, &[2, 1, 8, 5, 6, 7, 4, 3]).unwrap());
        assert!(!is_alternating(4, &[2, 4, 1, 3]).unwrap());
        assert!(!is_alternating(4, &[3, 1, 4, 2]).unwrap());
        assert!(is_alternating(1, &[1]).unwrap());
        assert!(is_alternating(3, &[1, 1, 2]).is_err());
        assert_eq!(Text::from_chars("abcd", vec![2, 4, 1, 3]), Err(Error::NotAlternating));
    }

    #[test]
    fn clans() {
        let p = sample().prime_clans();
        for c in [(1, 2), (3, 8), (5, 7), (1, 8), (4, 4)] {
            assert!(p.contains(&c), "{c:?}");
        }
        let abc = Text::from_chars("abc", vec![1, 2, 3]).unwrap();
        assert_eq!(abc.clans().len(), 6);
        assert_eq!(abc.prime_clans(), vec![(1, 1), (1, 3), (2, 2), (3, 3)]);
    }

    #[test]
    fn tdo_counts() {
        let g = Guards::default();
        let counts: Vec<usize> = (1..=6).map(|n| enumerate_tdo(n, &g).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 2, 6, 22, 90, 394]);
        assert!(enumerate_tdo(10, &g).unwrap_err().is_guard());
    }
}
