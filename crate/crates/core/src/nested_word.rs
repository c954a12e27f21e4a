//! Nested words: a word together with a non-crossing matching of call and return positions.
//!
//! Positions are 1-indexed throughout.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::ops::ControlFlow;

use crate::error::{Error, NestingCondition, Result};
use crate::guard::Guards;

/// Role of a position in a nested word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PositionKind {
    Call,
    Return,
    Internal,
}

/// A validated nested word. Arcs are kept sorted by left endpoint.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NestedWord {
    letters: Vec<String>,
    arcs: Vec<(usize, usize)>,
    partner: Vec<usize>,
}

/// Validates `letters` and `arcs` into a [`NestedWord`].
pub fn validate<S, I>(letters: Vec<S>, arcs: I) -> Result<NestedWord>
where
    S: Into<String>,
    I: IntoIterator<Item = (usize, usize)>,
{
    NestedWord::new(letters, arcs)
}

impl NestedWord {
    pub fn new<S, I>(letters: Vec<S>, arcs: I) -> Result<Self>
    where
        S: Into<String>,
        I: IntoIterator<Item = (usize, usize)>,
    {
        let letters: Vec<String> = letters.into_iter().map(Into::into).collect();
        if letters.is_empty() {
            return Err(Error::EmptyWord);
        }
        let n = letters.len();
        let arcs: BTreeSet<(usize, usize)> = arcs.into_iter().collect();
        let arcs: Vec<(usize, usize)> = arcs.into_iter().collect();
        let nesting = |condition, i: usize, j: usize| Error::Nesting {
            condition,
            detail: format!("({}, {})", i, j),
        };
        for &(i, j) in &arcs {
            if i == 0 || j == 0 || i > n || j > n {
                return Err(nesting(NestingCondition::Range, i, j));
            }
            if i >= j {
                return Err(nesting(NestingCondition::Forward, i, j));
            }
        }
        let mut partner = vec![0usize; n + 1];
        let mut left = BTreeSet::new();
        let mut right = BTreeSet::new();
        for &(i, j) in &arcs {
            if !left.insert(i) || !right.insert(j) {
                return Err(nesting(NestingCondition::Injective, i, j));
            }
        }
        for (a, &(i, j)) in arcs.iter().enumerate() {
            for &(i2, j2) in &arcs[a + 1..] {
                // i < i2 since arcs are sorted and left endpoints are distinct
                if !(j < i2 || j2 < j) {
                    return Err(Error::Nesting {
                        condition: NestingCondition::NonCrossing,
                        detail: format!("({}, {}) and ({}, {})", i, j, i2, j2),
                    });
                }
            }
        }
        for &(i, j) in &arcs {
            partner[i] = j;
            partner[j] = i;
        }
        Ok(NestedWord { letters, arcs, partner })
    }

    /// One letter per character of `word`.
    pub fn from_chars<I>(word: &str, arcs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Self::new(word.chars().map(|c| c.to_string()).collect(), arcs)
    }

    /// Length of the word.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    /// Always false; nested words are non-empty.
    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[String] {
        &self.letters
    }

    /// Letter at position `i` (1-indexed).
    pub fn letter(&self, i: usize) -> &str {
        &self.letters[i - 1]
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    /// The other endpoint of the arc at `i`, if any.
    pub fn partner(&self, i: usize) -> Option<usize> {
        match self.partner.get(i) {
            Some(&p) if p != 0 => Some(p),
            _ => None,
        }
    }

    pub fn has_arc(&self, i: usize, j: usize) -> bool {
        i < j && self.partner(i) == Some(j)
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.len() {
            Err(Error::IndexOutOfRange { index: i, len: self.len() })
        } else {
            Ok(())
        }
    }

    pub fn position_kind(&self, i: usize) -> Result<PositionKind> {
        self.check_index(i)?;
        Ok(match self.partner(i) {
            Some(j) if j > i => PositionKind::Call,
            Some(_) => PositionKind::Return,
            None => PositionKind::Internal,
        })
    }

    /// Unchecked variant of [`position_kind`](Self::position_kind).
    pub fn kind(&self, i: usize) -> PositionKind {
        match self.partner(i) {
            Some(j) if j > i => PositionKind::Call,
            Some(_) => PositionKind::Return,
            None => PositionKind::Internal,
        }
    }

    /// The factor `nw[i, j]`: letters `i..=j` and the arcs inside the window, shifted.
    pub fn factor(&self, i: usize, j: usize) -> Result<NestedWord> {
        self.check_index(i)?;
        self.check_index(j)?;
        if i > j {
            return Err(Error::IndexOrder(i, j));
        }
        let letters = self.letters[i - 1..j].to_vec();
        let arcs: Vec<(usize, usize)> = self
            .arcs
            .iter()
            .filter(|&&(k, l)| i <= k && l <= j)
            .map(|&(k, l)| (k + 1 - i, l + 1 - i))
            .collect();
        let mut partner = vec![0usize; letters.len() + 1];
        for &(k, l) in &arcs {
            partner[k] = l;
            partner[l] = k;
        }
        Ok(NestedWord { letters, arcs, partner })
    }

    /// Number of arcs `(k, l)` with `k <= i <= l`.
    pub fn nesting_depth_at(&self, i: usize) -> Result<usize> {
        self.check_index(i)?;
        Ok(self.arcs.iter().filter(|&&(k, l)| k <= i && i <= l).count())
    }

    /// Maximal nesting depth over all positions.
    pub fn nesting_depth(&self) -> usize {
        let mut depth = 0usize;
        let mut best = 0usize;
        for i in 1..=self.len() {
            match self.kind(i) {
                PositionKind::Call => {
                    depth += 1;
                    best = best.max(depth);
                }
                PositionKind::Return => depth -= 1,
                PositionKind::Internal => {}
            }
        }
        best
    }

    /// Arcs not strictly nested inside another arc, left to right.
    pub fn surface_arches(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &(k, l) in &self.arcs {
            match out.last() {
                Some(&(_, l0)) if l < l0 => {}
                _ => out.push((k, l)),
            }
        }
        out
    }

    /// The letters joined into one string, separated by spaces unless all are single characters.
    pub fn word_string(&self) -> String {
        if self.letters.iter().all(|l| l.chars().count() == 1) {
            self.letters.concat()
        } else {
            self.letters.join(" ")
        }
    }
}

impl core::fmt::Display for NestedWord {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "({}, {{", self.word_string())?;
        for (idx, (i, j)) in self.arcs.iter().enumerate() {
            if idx > 0 {
                f.write_str(", ")?;
            }
            write!(f, "({}, {})", i, j)?;
        }
        f.write_str("})")
    }
}

fn nestings_between(lo: usize, hi: usize, out: &mut Vec<Vec<(usize, usize)>>) {
    // all nestings on positions lo..=hi (empty range when lo > hi)
    if lo > hi {
        out.push(Vec::new());
        return;
    }
    let mut rest = Vec::new();
    nestings_between(lo + 1, hi, &mut rest);
    out.extend(rest);
    for j in lo + 1..=hi {
        let mut inner = Vec::new();
        nestings_between(lo + 1, j - 1, &mut inner);
        let mut tail = Vec::new();
        nestings_between(j + 1, hi, &mut tail);
        for a in &inner {
            for b in &tail {
                let mut v = Vec::with_capacity(a.len() + b.len() + 1);
                v.push((lo, j));
                v.extend_from_slice(a);
                v.extend_from_slice(b);
                out.push(v);
            }
        }
    }
}

/// All nesting relations of width `n`, each sorted, in lexicographic order.
pub fn enumerate_nestings(n: usize, guards: &Guards) -> Result<Vec<Vec<(usize, usize)>>> {
    Guards::check("nesting width", guards.nesting_width as u128, n as u128)?;
    let mut out = Vec::new();
    nestings_between(1, n, &mut out);
    out.sort();
    Ok(out)
}

/// All nested words of length `n` over `alphabet`, in witness order.
pub fn enumerate_nested_words(
    alphabet: &[String],
    n: usize,
    guards: &Guards,
) -> Result<Vec<NestedWord>> {
    if n == 0 {
        return Err(Error::EmptyWord);
    }
    let nestings = enumerate_nestings(n, guards)?;
    let words = (alphabet.len() as u128).saturating_pow(n as u32);
    Guards::check(
        "nested words enumerated",
        guards.enumerated,
        words.saturating_mul(nestings.len() as u128),
    )?;
    let mut out = Vec::new();
    for_each_of_length(alphabet, n, &nestings, &mut |nw: &NestedWord| {
        out.push(nw.clone());
        ControlFlow::<()>::Continue(())
    });
    Ok(out)
}

fn for_each_of_length<B>(
    alphabet: &[String],
    n: usize,
    nestings: &[Vec<(usize, usize)>],
    f: &mut dyn FnMut(&NestedWord) -> ControlFlow<B>,
) -> Option<B> {
    if alphabet.is_empty() {
        return None;
    }
    let mut idx = vec![0usize; n];
    loop {
        let letters: Vec<String> = idx.iter().map(|&a| alphabet[a].clone()).collect();
        for arcs in nestings {
            let mut partner = vec![0usize; n + 1];
            for &(k, l) in arcs {
                partner[k] = l;
                partner[l] = k;
            }
            let nw = NestedWord { letters: letters.clone(), arcs: arcs.clone(), partner };
            if let ControlFlow::Break(b) = f(&nw) {
                return Some(b);
            }
        }
        // odometer, last position fastest
        let mut p = n;
        loop {
            if p == 0 {
                return None;
            }
            p -= 1;
            idx[p] += 1;
            if idx[p] < alphabet.len() {
                break;
            }
            idx[p] = 0;
        }
    }
}

/// Visits nested words of lengths `1..=max_len` in witness order (length, letters, arcs),
/// stopping at the first `Break`. Guards are checked per length, lazily.
pub fn for_each_nested_word<B>(
    alphabet: &[String],
    max_len: usize,
    guards: &Guards,
    mut f: impl FnMut(&NestedWord) -> ControlFlow<B>,
) -> Result<Option<B>> {
    let mut visited: u128 = 0;
    for n in 1..=max_len {
        let nestings = enumerate_nestings(n, guards)?;
        let words = (alphabet.len() as u128).saturating_pow(n as u32);
        visited = visited.saturating_add(words.saturating_mul(nestings.len() as u128));
        Guards::check("nested words enumerated", guards.enumerated, visited)?;
        if let Some(b) = for_each_of_length(alphabet, n, &nestings, &mut f) {
            return Ok(Some(b));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> NestedWord {
        NestedWord::from_chars("aacacabb", [(1, 2), (3, 8), (5, 7)]).unwrap()
    }

    fn motzkin(n: usize) -> u64 {
        let mut m = vec![1u64, 1];
        for k in 2..=n {
            let mut v = m[k - 1];
            for j in 0..=k - 2 {
                v += m[j] * m[k - 2 - j];
            }
            m.push(v);
        }
        m[n]
    }

    #[test]
    fn validates_and_rejects() {
        sample();
        let nw = NestedWord::from_chars("ab", [(1, 2), (1, 2)]).unwrap();
        assert_eq!(nw.arcs(), &[(1, 2)]);
        let e = NestedWord::from_chars("abc", [(1, 2), (1, 3)]).unwrap_err();
        assert!(matches!(e, Error::Nesting { condition: NestingCondition::Injective, .. }));
        let e = NestedWord::from_chars("abcd", [(1, 3), (2, 4)]).unwrap_err();
        assert!(matches!(e, Error::Nesting { condition: NestingCondition::NonCrossing, .. }));
        let e = NestedWord::from_chars("ab", [(2, 1)]).unwrap_err();
        assert!(matches!(e, Error::Nesting { condition: NestingCondition::Forward, .. }));
        let e = NestedWord::from_chars("ab", [(1, 3)]).unwrap_err();
        assert!(matches!(e, Error::Nesting { condition: NestingCondition::Range, .. }));
        let e = NestedWord::from_chars("abc", [(1, 2), (2, 3)]).unwrap_err();
        assert!(matches!(e, Error::Nesting { .. }));
        assert_eq!(NestedWord::from_chars("", []).unwrap_err(), Error::EmptyWord);
    }

    #[test]
    fn factors() {
        let nw = sample();
        let f = nw.factor(4, 7).unwrap();
        assert_eq!(f.word_string(), "acab");
        assert_eq!(f.arcs(), &[(2, 4)]);
        assert_eq!(f.surface_arches(), vec![(2, 4)]);
        assert_eq!(nw.factor(1, 8).unwrap(), nw);
        let s = nw.factor(3, 3).unwrap();
        assert_eq!(s.len(), 1);
        assert!(s.arcs().is_empty());
        assert!(nw.factor(0, 3).is_err());
        assert!(nw.factor(5, 3).is_err());
    }

    #[test]
    fn kinds_and_depth() {
        let nw = sample();
        assert_eq!(nw.position_kind(3).unwrap(), PositionKind::Call);
        assert_eq!(nw.position_kind(4).unwrap(), PositionKind::Internal);
        assert_eq!(nw.position_kind(8).unwrap(), PositionKind::Return);
        assert_eq!(nw.nesting_depth_at(5).unwrap(), 2);
        assert_eq!(nw.nesting_depth(), 2);
        assert_eq!(nw.surface_arches(), vec![(1, 2), (3, 8)]);
        let flat = NestedWord::from_chars("abc", []).unwrap();
        assert_eq!(flat.nesting_depth(), 0);
        assert_eq!(flat.nesting_depth_at(2).unwrap(), 0);
        assert!(flat.surface_arches().is_empty());
    }

    #[test]
    fn nesting_counts() {
        let g = Guards::default();
        for n in 0..=10 {
            assert_eq!(enumerate_nestings(n, &g).unwrap().len() as u64, motzkin(n), "n = {}", n);
        }
        assert_eq!(
            enumerate_nestings(3, &g).unwrap(),
            vec![vec![], vec![(1, 2)], vec![(1, 3)], vec![(2, 3)]]
        );
        assert!(enumerate_nestings(15, &g).unwrap_err().is_guard());
    }

    #[test]
    fn witness_order() {
        let alphabet: Vec<String> = vec!["a".into(), "b".into()];
        let g = Guards::default();
        let mut seen = Vec::new();
        for_each_nested_word(&alphabet, 2, &g, |nw| {
            seen.push(nw.to_string());
            ControlFlow::<()>::Continue(())
        })
        .unwrap();
        assert_eq!(seen[0], "(a, {})");
        assert_eq!(seen[2], "(aa, {})");
        assert_eq!(seen[3], "(aa, {(1, 2)})");
        assert_eq!(seen.len(), 2 + 8);
        let hit = for_each_nested_word(&alphabet, 30, &g, |nw| {
            if nw.len() == 2 && nw.letter(1) == "b" {
                ControlFlow::Break(nw.clone())
            } else {
                ControlFlow::Continue(())
            }
        })
        .unwrap()
        .unwrap();
        assert_eq!(hit.to_string(), "(ba, {})");
    }
}
