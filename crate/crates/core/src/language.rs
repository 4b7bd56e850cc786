//! Labelled words, relative ranges and the period kernel.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{LabelledGraph, Symbol, VertexId, VertexSet};
use crate::par;

/// A nonempty finite sequence of symbols. Ordered shortlex: by length, then
/// lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<Symbol>);

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Word {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn repeat(&self, times: usize) -> Word {
        Word(self.0.repeat(times))
    }

    /// Parses either a compact string (when every symbol of the alphabet is a
    /// single character) or a whitespace/comma separated list of symbols.
    pub fn parse(g: &LabelledGraph, text: &str) -> Result<Word> {
        let compact = g.alphabet().iter().all(|s| s.chars().count() == 1);
        let text = text.trim();
        let symbols: Vec<Symbol> = if compact && !text.contains([' ', ',']) {
            text.chars().map(|c| g.symbol(&c.to_string())).collect::<Result<_>>()?
        } else {
            text.split([' ', ','])
                .filter(|s| !s.is_empty())
                .map(|s| g.symbol(s))
                .collect::<Result<_>>()?
        };
        if symbols.is_empty() {
            return Err(Error::EmptyWord);
        }
        Ok(Word(symbols))
    }

    pub fn from_names(g: &LabelledGraph, names: &[&str]) -> Result<Word> {
        if names.is_empty() {
            return Err(Error::EmptyWord);
        }
        Ok(Word(names.iter().map(|s| g.symbol(s)).collect::<Result<_>>()?))
    }

    pub fn names(&self, g: &LabelledGraph) -> Vec<String> {
        self.0.iter().map(|&s| g.symbol_name(s).to_string()).collect()
    }

    /// Compact rendering when all symbols are single characters, otherwise
    /// space separated.
    pub fn display(&self, g: &LabelledGraph) -> String {
        let names = self.names(g);
        if names.iter().all(|s| s.chars().count() == 1) {
            names.concat()
        } else {
            names.join(" ")
        }
    }
}

/// r(A, α): endpoints of paths labelled α that start in A.
pub fn relative_range(g: &LabelledGraph, a: &VertexSet, word: &[Symbol]) -> VertexSet {
    let mut cur = a.clone();
    for &s in word {
        if cur.is_empty() {
            break;
        }
        cur = step(g, &cur, s);
    }
    cur
}

/// One-symbol forward image of a vertex set.
pub fn step(g: &LabelledGraph, a: &VertexSet, s: Symbol) -> VertexSet {
    a.iter()
        .flat_map(|v| g.out_edges(v).filter(move |e| e.label == s).map(|e| e.dst))
        .collect()
}

/// One-symbol backward image: vertices with an `s`-edge into `a`.
pub fn back_step(g: &LabelledGraph, a: &VertexSet, s: Symbol) -> VertexSet {
    a.iter()
        .flat_map(|v| g.in_edges(v).filter(move |e| e.label == s).map(|e| e.src))
        .collect()
}

pub fn range_set(g: &LabelledGraph, word: &[Symbol]) -> VertexSet {
    relative_range(g, &g.all_vertices(), word)
}

pub fn source_set(g: &LabelledGraph, word: &[Symbol]) -> VertexSet {
    let mut cur = g.all_vertices();
    for &s in word.iter().rev() {
        if cur.is_empty() {
            break;
        }
        cur = back_step(g, &cur, s);
    }
    cur
}

/// Words of length exactly `n` emitted from `a`, each with its end set, in
/// lexicographic order.
pub fn words_from(g: &LabelledGraph, a: &VertexSet, n: usize) -> Vec<(Word, VertexSet)> {
    if n == 0 || a.is_empty() {
        return Vec::new();
    }
    let mut level = vec![(Vec::<Symbol>::new(), a.clone())];
    for _ in 0..n {
        let next: Vec<Vec<(Vec<Symbol>, VertexSet)>> = par::map(&level, |(w, ends)| extend(g, w, ends));
        level = next.into_iter().flatten().collect();
    }
    level.into_iter().map(|(w, e)| (Word(w), e)).collect()
}

fn extend(g: &LabelledGraph, w: &[Symbol], ends: &VertexSet) -> Vec<(Vec<Symbol>, VertexSet)> {
    let mut by_label: BTreeMap<Symbol, Vec<VertexId>> = BTreeMap::new();
    for v in ends.iter() {
        for e in g.out_edges(v) {
            by_label.entry(e.label).or_default().push(e.dst);
        }
    }
    by_label
        .into_iter()
        .map(|(s, dsts)| {
            let mut word = w.to_vec();
            word.push(s);
            (word, dsts.into_iter().collect())
        })
        .collect()
}

/// L(E^n): the labels of all paths of length `n`, sorted.
pub fn enumerate_words(g: &LabelledGraph, n: usize) -> Result<Vec<Word>> {
    if n == 0 {
        return Err(Error::InvalidParameter("word length must be at least 1".into()));
    }
    Ok(words_from(g, &g.all_vertices(), n).into_iter().map(|(w, _)| w).collect())
}

/// L(E^{≤ℓ}): every word of length 1..=ℓ carried by some path, shortlex sorted.
pub fn words_up_to(g: &LabelledGraph, ell: usize) -> Result<Vec<Word>> {
    let mut out = Vec::new();
    for n in 1..=ell {
        out.extend(enumerate_words(g, n)?);
    }
    Ok(out)
}

/// L^n_A: labels of paths of length `n` starting in `a`.
pub fn labels_from(g: &LabelledGraph, a: &VertexSet, n: usize) -> Result<Vec<Word>> {
    if n == 0 {
        return Err(Error::InvalidParameter("word length must be at least 1".into()));
    }
    Ok(words_from(g, a, n).into_iter().map(|(w, _)| w).collect())
}

/// L(E^{≤ℓ} A): words of length 1..=ℓ carried by a path ending in `a`, shortlex sorted.
pub fn paths_into(g: &LabelledGraph, a: &VertexSet, ell: usize) -> Result<Vec<Word>> {
    if ell == 0 {
        return Err(Error::InvalidParameter("length bound must be at least 1".into()));
    }
    let mut out = Vec::new();
    // Backward determinization: each word (built right to left) with the set
    // of vertices it can start from.
    let mut level: Vec<(Vec<Symbol>, VertexSet)> = vec![(Vec::new(), a.clone())];
    for _ in 0..ell {
        let mut next = Vec::new();
        for (suffix, starts) in &level {
            let mut by_label: BTreeMap<Symbol, Vec<VertexId>> = BTreeMap::new();
            for v in starts.iter() {
                for e in g.in_edges(v) {
                    by_label.entry(e.label).or_default().push(e.src);
                }
            }
            for (s, srcs) in by_label {
                let mut w = Vec::with_capacity(suffix.len() + 1);
                w.push(s);
                w.extend_from_slice(suffix);
                next.push((w, srcs.into_iter().collect::<VertexSet>()));
            }
        }
        out.extend(next.iter().map(|(w, _)| Word(w.clone())));
        level = next;
    }
    out.sort();
    Ok(out)
}

pub fn is_in_language(g: &LabelledGraph, word: &[Symbol]) -> bool {
    !word.is_empty() && !range_set(g, word).is_empty()
}

/// Least p ≥ 1 with w[i] = w[i+p] for all valid i (|w| when there is no proper border).
pub fn smallest_period<T: PartialEq>(w: &[T]) -> usize {
    let n = w.len();
    if n == 0 {
        return 0;
    }
    let mut fail = vec![0usize; n];
    let mut k = 0;
    for i in 1..n {
        while k > 0 && w[i] != w[k] {
            k = fail[k - 1];
        }
        if w[i] == w[k] {
            k += 1;
        }
        fail[i] = k;
    }
    n - fail[n - 1]
}
