//! Disagreeable words and classes.
//!
//! A word is agreeable for ℓ when it has a period p ≤ ℓ. Extending a word on
//! the right never lowers its smallest period, so on an essential graph a
//! class is disagreeable at level ℓ exactly when it emits one word whose
//! smallest period exceeds ℓ. That is decided by a breadth-first search over
//! states (vertex, periods still consistent with the word read so far, phase),
//! run once per length-ℓ prefix the class emits.

use std::collections::hash_map::Entry;
use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::dynamics::{require_essential, Bounds};
use crate::error::{Error, Result};
use crate::generalized::Hierarchy;
use crate::graph::{LabelledGraph, Symbol, VertexId, VertexSet};
use crate::language::{relative_range, smallest_period, words_from, Word};
use crate::par;
use crate::verdict::{Scope, Status, Verdict};
use crate::window::Window;

const STATE_CAP: usize = 2_000_000;

/// True when `word` has a period at most `ell`.
pub fn is_agreeable_word(word: &[Symbol], ell: usize) -> Result<bool> {
    if word.len() <= 1 {
        return Err(Error::InvalidParameter("agreeability needs a word of length at least 2".into()));
    }
    Ok(smallest_period(word) <= ell)
}

/// The words prefix · pump^n · suffix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordFamily {
    pub prefix: Vec<Symbol>,
    pub pump: Vec<Symbol>,
    pub suffix: Vec<Symbol>,
}

impl WordFamily {
    pub fn member(&self, n: usize) -> Word {
        let mut w = self.prefix.clone();
        for _ in 0..n {
            w.extend_from_slice(&self.pump);
        }
        w.extend_from_slice(&self.suffix);
        Word(w)
    }
}

/// Checks that every member n in `ns` is emitted from `sources` and has
/// smallest period greater than `ell`.
pub fn verify_family(g: &LabelledGraph, sources: &VertexSet, ell: usize, family: &WordFamily, ns: impl IntoIterator<Item = usize>) -> bool {
    ns.into_iter().all(|n| validate_witness(g, sources, ell, &family.member(n).0))
}

/// A disagreeable witness is a word of length ≥ 2 emitted from `sources`
/// with smallest period greater than `ell`.
pub fn validate_witness(g: &LabelledGraph, sources: &VertexSet, ell: usize, word: &[Symbol]) -> bool {
    word.len() > 1 && smallest_period(word) > ell && !relative_range(g, sources, word).is_empty()
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyEntry {
    pub n: usize,
    pub word: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassWitness {
    pub class: String,
    pub level: usize,
    /// A word with smallest period above the level, when one exists.
    pub base: Option<Vec<String>>,
    /// For each n, an emitted word of length ≥ n with period above the level.
    pub family: Vec<FamilyEntry>,
    /// When refuted: the words of length level+1 the class emits, all of which
    /// have a period at most the level, as do all their extensions.
    pub emitted_sample: Vec<(Vec<String>, usize)>,
}

enum BaseSearch {
    Found(Vec<Symbol>),
    Absent { truncated: bool },
    Budget,
}

fn lcm(a: u64, b: u64) -> u64 {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

fn mask_lcm(mask: u32) -> u64 {
    (0..32).filter(|b| mask >> b & 1 == 1).fold(1, |acc, b| lcm(acc, b as u64 + 1))
}

/// Shortest word emitted from `members` with smallest period > `ell`.
fn base_search(win: &Window, members: &VertexSet, ell: usize) -> BaseSearch {
    let g = win.graph();
    if ell >= 32 {
        return BaseSearch::Budget;
    }
    let mut truncated = members.iter().any(|v| !win.exact_out(v, ell));
    let mut states = 0usize;
    for (prefix, ends) in words_from(g, members, ell) {
        let p = &prefix.0;
        let mut mask0 = 0u32;
        for q in 1..=ell {
            if (0..ell - q).all(|i| p[i] == p[i + q]) {
                mask0 |= 1 << (q - 1);
            }
        }
        type State = (VertexId, u32, u64);
        let mut parent: HashMap<State, Option<(State, Symbol)>> = HashMap::new();
        let mut queue: VecDeque<State> = VecDeque::new();
        for v in ends.iter() {
            let s = (v, mask0, ell as u64 % mask_lcm(mask0));
            if parent.insert(s, None).is_none() {
                queue.push_back(s);
            }
        }
        while let Some(state) = queue.pop_front() {
            let (v, mask, phase) = state;
            if win.is_out_incomplete(v) {
                truncated = true;
            }
            for e in g.out_edges(v) {
                let mut next_mask = 0u32;
                for q in 1..=ell {
                    if mask >> (q - 1) & 1 == 1 && p[(phase % q as u64) as usize] == e.label {
                        next_mask |= 1 << (q - 1);
                    }
                }
                if next_mask == 0 {
                    let mut word = vec![e.label];
                    let mut cur = state;
                    while let Some(Some((prev, sym))) = parent.get(&cur) {
                        word.push(*sym);
                        cur = *prev;
                    }
                    word.reverse();
                    let mut full = p.clone();
                    full.extend(word);
                    return BaseSearch::Found(full);
                }
                let next = (e.dst, next_mask, (phase + 1) % mask_lcm(next_mask));
                if let Entry::Vacant(slot) = parent.entry(next) {
                    slot.insert(Some((state, e.label)));
                    queue.push_back(next);
                    states += 1;
                    if states > STATE_CAP {
                        return BaseSearch::Budget;
                    }
                }
            }
        }
    }
    BaseSearch::Absent { truncated }
}

/// For each n ≤ n_max a witness of length ≥ max(n, ell+1): first a pumped
/// word c^k d, otherwise the base word extended along any path.
fn witness_family(g: &LabelledGraph, members: &VertexSet, ell: usize, base: &[Symbol], bounds: &Bounds) -> Vec<FamilyEntry> {
    let k_sym = g.alphabet().len() as Symbol;
    let mut out = Vec::new();
    for n in 1..=bounds.n_max {
        let target = n.max(ell + 1);
        let mut found = None;
        'len: for k in target - 1..bounds.len_max.max(target) {
            for c in 0..k_sym {
                for d in 0..k_sym {
                    if c == d {
                        continue;
                    }
                    let mut w = vec![c; k];
                    w.push(d);
                    if !relative_range(g, members, &w).is_empty() {
                        found = Some(w);
                        break 'len;
                    }
                }
            }
        }
        let word = found.or_else(|| extend_to(g, members, base, target));
        match word {
            Some(w) => out.push(FamilyEntry { n, word: w.iter().map(|&s| g.symbol_name(s).to_string()).collect() }),
            None => break,
        }
    }
    out
}

fn extend_to(g: &LabelledGraph, members: &VertexSet, base: &[Symbol], target: usize) -> Option<Vec<Symbol>> {
    let mut w = base.to_vec();
    let mut ends = relative_range(g, members, &w);
    while w.len() < target {
        let e = ends.iter().flat_map(|v| g.out_edges(v)).min_by_key(|e| e.label)?;
        w.push(e.label);
        ends = relative_range(g, &ends, &[e.label]);
    }
    Some(w)
}

/// Disagreeability of class `class` at level `level` of `h`.
pub fn class_disagreeable(h: &Hierarchy, level: usize, class: usize, bounds: &Bounds) -> Verdict<ClassWitness> {
    let win = h.window();
    let g = win.graph();
    let c = &h.partition(level).classes[class];
    let base_verdict = |status, scope| {
        Verdict::new("class_disagreeable", status, scope)
            .with_bound("level", level)
            .with_bound("n_max", bounds.n_max)
            .with_bound("len_max", bounds.len_max)
            .with_bounds(win.describe())
    };
    let mut witness = ClassWitness { class: c.name.clone(), level, base: None, family: Vec::new(), emitted_sample: Vec::new() };
    match base_search(win, &c.members, level) {
        BaseSearch::Found(word) => {
            witness.family = witness_family(g, &c.members, level, &word, bounds);
            witness.base = Some(word.iter().map(|&s| g.symbol_name(s).to_string()).collect());
            base_verdict(Status::Certified, Scope::Exact)
                .with_note("witness extends indefinitely without lowering its period")
                .with_witness(witness)
        }
        BaseSearch::Absent { truncated: false } => {
            witness.emitted_sample = words_from(g, &c.members, level + 1)
                .into_iter()
                .map(|(w, _)| (w.names(g), smallest_period(&w.0)))
                .collect();
            base_verdict(Status::Refuted, Scope::Exact)
                .with_note("exhaustive search: every emitted word has a period at most the level")
                .with_witness(witness)
        }
        BaseSearch::Absent { truncated: true } => base_verdict(Status::Inconclusive, Scope::UpToBounds)
            .with_note("search reached the window boundary without a witness"),
        BaseSearch::Budget => base_verdict(Status::Inconclusive, Scope::UpToBounds).with_note("state budget exhausted"),
    }
}

pub fn is_class_disagreeable(win: &Window, vertex: VertexId, level: usize, bounds: &Bounds) -> Result<Verdict<ClassWitness>> {
    require_essential(win)?;
    let h = Hierarchy::build(win, level)?;
    let class = h
        .class_index(level, vertex)
        .filter(|_| win.is_core(vertex))
        .ok_or_else(|| Error::InvalidParameter(format!("`{}` is not a core vertex", win.graph().vertex_name(vertex))))?;
    Ok(class_disagreeable(&h, level, class, bounds))
}

#[derive(Clone, Debug, Serialize)]
pub struct SpaceWitness {
    /// Per core vertex, the least L such that its class is certified at every
    /// level in (L, ell_max]; absent when no such L was found.
    pub thresholds: Vec<(String, Option<usize>)>,
    /// Certified witnesses at the top level.
    pub classes: Vec<ClassWitness>,
    /// The refuted class, if any.
    pub refuted: Option<ClassWitness>,
}

pub fn space_disagreeable(h: &Hierarchy, bounds: &Bounds) -> Verdict<SpaceWitness> {
    let win = h.window();
    let g = win.graph();
    let ell_max = bounds.ell_max.min(h.max_level());
    let per_level: Vec<Vec<Verdict<ClassWitness>>> = (1..=ell_max)
        .map(|l| par::map_range(h.partition(l).len(), |c| class_disagreeable(h, l, c, bounds)))
        .collect();
    let base = |status, scope| {
        Verdict::new("disagreeable", status, scope)
            .with_bounds(bounds.entries())
            .with_bound("ell_max", ell_max)
            .with_bounds(win.describe())
    };
    let mut thresholds = Vec::new();
    let mut all_certified = true;
    for v in win.core().iter() {
        let mut last_bad = 0;
        for l in 1..=ell_max {
            let c = h.class_index(l, v).expect("core vertex has a class");
            if !per_level[l - 1][c].is_certified() {
                last_bad = l;
            }
        }
        let threshold = (last_bad < ell_max).then_some(last_bad.max(1));
        all_certified &= threshold.is_some();
        thresholds.push((g.vertex_name(v).to_string(), threshold));
    }
    let refuted = per_level.iter().flatten().find(|v| v.is_refuted()).cloned();
    let classes = per_level[ell_max - 1].iter().filter_map(|v| v.witness.clone()).collect();
    let mut witness = SpaceWitness { thresholds, classes, refuted: None };
    if let Some(r) = refuted {
        let level = r.bounds["level"];
        witness.refuted = r.witness;
        witness.classes = Vec::new();
        return base(Status::Refuted, Scope::Exact)
            .with_note(format!("a class at level {level} emits only words of period at most {level}; so do all finer classes of its vertices"))
            .with_witness(witness);
    }
    if all_certified {
        base(Status::Certified, Scope::UpToBounds).with_witness(witness)
    } else {
        base(Status::Inconclusive, Scope::UpToBounds).with_witness(witness)
    }
}

pub fn is_space_disagreeable(win: &Window, bounds: &Bounds) -> Result<Verdict<SpaceWitness>> {
    bounds.validate()?;
    require_essential(win)?;
    let levels = match win.back_depth() {
        Some(d) => bounds.ell_max.min(d),
        None => bounds.ell_max,
    };
    if levels == 0 {
        return Err(Error::DepthInsufficient { what: "disagreeability".into(), needed: 1, available: 0 });
    }
    let h = Hierarchy::build(win, levels)?;
    Ok(space_disagreeable(&h, &Bounds { ell_max: levels, ..*bounds }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::cayley::{gen_cayley, GroupTable};
    use crate::presentations::even::{gen_even_e1, gen_even_e2};

    fn sym(g: &LabelledGraph, s: &str) -> Vec<Symbol> {
        Word::parse(g, s).unwrap().0
    }

    #[test]
    fn agreeable_words() {
        let g = LabelledGraph::new(
            vec!["x".into()],
            None,
            vec![("x".into(), "x".into(), "a".into()), ("x".into(), "x".into(), "b".into())],
        )
        .unwrap();
        assert!(is_agreeable_word(&sym(&g, "abab"), 2).unwrap());
        assert!(!is_agreeable_word(&sym(&g, "abab"), 1).unwrap());
        assert!(is_agreeable_word(&sym(&g, "aaaa"), 1).unwrap());
        assert!(!is_agreeable_word(&sym(&g, "bbba"), 3).unwrap());
        assert!(is_agreeable_word(&sym(&g, "a"), 1).is_err());
    }

    #[test]
    fn e1_classes_certified() {
        let w = Window::whole(gen_even_e1());
        let g = w.graph();
        for l in 1..=4 {
            for v in ["u", "v"] {
                let r = is_class_disagreeable(&w, g.vertex(v).unwrap(), l, &Bounds::default()).unwrap();
                assert!(r.is_certified(), "{v} at {l}");
                let wit = r.witness.unwrap();
                assert_eq!(wit.family.len(), Bounds::default().n_max);
                for entry in &wit.family {
                    let word = Word::from_names(g, &entry.word.iter().map(|s| s.as_str()).collect::<Vec<_>>()).unwrap();
                    assert!(word.len() >= entry.n);
                    assert!(validate_witness(g, &g.vertex_set(&[v]).unwrap(), l, &word.0));
                }
            }
        }
    }

    #[test]
    fn e2_w_refuted_from_level_two() {
        let w = Window::whole(gen_even_e2());
        let g = w.graph();
        let wv = g.vertex("w").unwrap();
        assert!(is_class_disagreeable(&w, wv, 1, &Bounds::default()).unwrap().is_certified());
        for l in 2..=4 {
            let r = is_class_disagreeable(&w, wv, l, &Bounds::default()).unwrap();
            assert!(r.is_refuted());
            let sample = r.witness.unwrap().emitted_sample;
            assert!(sample.iter().all(|(_, p)| *p == 1));
        }
        let space = is_space_disagreeable(&w, &Bounds::default()).unwrap();
        assert!(space.is_refuted());
        let refuted = space.witness.unwrap().refuted.unwrap();
        assert_eq!((refuted.class.as_str(), refuted.level), ("w", 2));
    }

    #[test]
    fn e1_space_thresholds() {
        let w = Window::whole(gen_even_e1());
        let r = is_space_disagreeable(&w, &Bounds::default()).unwrap();
        assert!(r.is_certified());
        assert_eq!(r.witness.unwrap().thresholds, vec![("u".into(), Some(1)), ("v".into(), Some(1))]);
    }

    #[test]
    fn cayley_generators() {
        let two = Window::whole(gen_cayley(&GroupTable::cyclic(3), &["1", "2"]).unwrap());
        assert!(is_space_disagreeable(&two, &Bounds::default()).unwrap().is_certified());
        let one = Window::whole(gen_cayley(&GroupTable::cyclic(2), &["1"]).unwrap());
        assert!(is_space_disagreeable(&one, &Bounds::default()).unwrap().is_refuted());
    }

    #[test]
    fn witness_families_on_e1() {
        let g = gen_even_e1();
        let u = g.vertex_set(&["u"]).unwrap();
        let v = g.vertex_set(&["v"]).unwrap();
        let one = g.symbol("1").unwrap();
        let zero = g.symbol("0").unwrap();
        let from_u = WordFamily { prefix: vec![one], pump: vec![one], suffix: vec![zero] };
        let from_v = WordFamily { prefix: vec![zero], pump: vec![zero, zero], suffix: vec![one] };
        for n in 1..=8 {
            for l in 1..n + 2 {
                assert!(verify_family(&g, &u, l, &from_u, [n]));
            }
            for l in 1..2 * n + 2 {
                assert!(verify_family(&g, &v, l, &from_v, [n]));
            }
        }
    }
}
