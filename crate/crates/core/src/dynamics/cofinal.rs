//! Cofinality of the class partitions.
//!
//! The exact route needs a strongly connected, row-finite graph in which every
//! vertex is, at some level, the smallest lattice set containing it. Otherwise
//! each class [v]_ℓ is tested directly: either a few ranges r([v]_ℓ, λ) cover
//! every vertex, or each target r([w]_R, y_1…y_N) built from a finite prefix y
//! of a path out of w is covered separately.

use std::collections::{HashMap, HashSet};

use petgraph::algo::kosaraju_scc;
use petgraph::graph::DiGraph;
use serde::Serialize;

use crate::dynamics::{require_essential, Bounds};
use crate::error::{Error, Result};
use crate::generalized::Hierarchy;
use crate::graph::{LabelledGraph, Symbol, VertexId, VertexSet};
use crate::language::{back_step, paths_into, relative_range, words_from, Word};
use crate::par;
use crate::verdict::{conjunction, Scope, Status, Verdict};
use crate::window::Window;

const RANGE_CAP: usize = 1 << 14;

/// A stand-in for an infinite path: `prefix` followed by `period` repeated,
/// starting at `start`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbePath {
    pub start: String,
    pub prefix: Vec<String>,
    pub period: Vec<String>,
}

impl ProbePath {
    pub fn new(start: &str, prefix: &[&str], period: &[&str]) -> Self {
        Self {
            start: start.into(),
            prefix: prefix.iter().map(|s| s.to_string()).collect(),
            period: period.iter().map(|s| s.to_string()).collect(),
        }
    }

    /// The first `len` symbols, checked to be emitted from the start vertex.
    fn word(&self, g: &LabelledGraph, len: usize) -> Result<(VertexId, Vec<Symbol>)> {
        if self.period.is_empty() {
            return Err(Error::InvalidParameter("probe path needs a nonempty period".into()));
        }
        let start = g.vertex(&self.start)?;
        let prefix = self.prefix.iter().map(|s| g.symbol(s)).collect::<Result<Vec<_>>>()?;
        let period = self.period.iter().map(|s| g.symbol(s)).collect::<Result<Vec<_>>>()?;
        let word: Vec<Symbol> = prefix.iter().chain(period.iter().cycle()).take(len).copied().collect();
        if relative_range(g, &VertexSet::singleton(start), &word).is_empty() {
            return Err(Error::InvalidParameter(format!("probe path is not emitted from `{}`", self.start)));
        }
        Ok((start, word))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SufficientWitness {
    pub row_finite: bool,
    pub strongly_connected: bool,
    /// Per core vertex, a level at which it is the smallest lattice set containing it.
    pub singleton_levels: Vec<(String, Option<usize>)>,
}

fn strongly_connected(g: &LabelledGraph) -> bool {
    let mut dg = DiGraph::<(), ()>::with_capacity(g.vertex_count(), g.edge_count());
    let nodes: Vec<_> = (0..g.vertex_count()).map(|_| dg.add_node(())).collect();
    for e in g.edges() {
        dg.add_edge(nodes[e.src as usize], nodes[e.dst as usize], ());
    }
    kosaraju_scc(&dg).len() == 1
}

/// Vertices whose level-ℓ in-neighbourhood is complete.
fn exact_region(win: &Window, level: usize) -> VertexSet {
    (0..win.graph().vertex_count() as VertexId).filter(|&v| win.exact_in(v, level)).collect()
}

/// True when `v` is the smallest lattice set containing it, judged over the
/// exact region. `counts` holds the class sizes over that region. Words of
/// length exactly ℓ suffice, since each shorter received word is a suffix of
/// a longer one and has the larger range.
fn is_lattice_singleton(h: &Hierarchy, v: VertexId, level: usize, region: &VertexSet, counts: &HashMap<u32, usize>) -> bool {
    if counts[&h.raw_id(level, v)] > 1 {
        return false;
    }
    let g = h.window().graph();
    let receives = |p: VertexId, w: &[Symbol]| !w.iter().rev().fold(VertexSet::singleton(p), |acc, &s| back_step(g, &acc, s)).is_empty();
    let mut acc: Vec<VertexId> = region.iter().collect();
    for w in paths_into(g, &VertexSet::singleton(v), level).expect("level is positive") {
        if w.len() < level {
            continue;
        }
        acc.retain(|&p| receives(p, &w.0));
        if acc.len() == 1 {
            return true;
        }
    }
    acc.len() == 1
}

pub fn check_cofinal_sufficient(win: &Window, bounds: &Bounds) -> Result<Verdict<SufficientWitness>> {
    bounds.validate()?;
    require_essential(win)?;
    let g = win.graph();
    // On a window the exact region at the full depth is the core alone, too
    // small to separate vertices, so the top level is left out.
    let top = win.back_depth().map_or(bounds.r_max, |d| d.saturating_sub(1).min(bounds.r_max));
    let scope = if win.is_finite() { Scope::Exact } else { Scope::UpToBounds };
    let base = |s| {
        Verdict::new("cofinal_sufficient", s, scope)
            .with_bound("r_max", bounds.r_max)
            .with_bounds(win.describe())
    };
    let sc = strongly_connected(g);
    let mut witness = SufficientWitness { row_finite: true, strongly_connected: sc, singleton_levels: Vec::new() };
    if !sc || top == 0 {
        return Ok(base(Status::Inconclusive).with_note("not strongly connected; the exact test does not apply").with_witness(witness));
    }
    let h = Hierarchy::build(win, top)?;
    let regions: Vec<(VertexSet, HashMap<u32, usize>)> = (1..=top)
        .map(|l| {
            let region = exact_region(win, l);
            let mut counts = HashMap::new();
            for v in region.iter() {
                *counts.entry(h.raw_id(l, v)).or_insert(0) += 1;
            }
            (region, counts)
        })
        .collect();
    let core: Vec<VertexId> = win.core().iter().collect();
    let levels = par::map(&core, |&v| {
        (1..=top).find(|&l| is_lattice_singleton(&h, v, l, &regions[l - 1].0, &regions[l - 1].1))
    });
    witness.singleton_levels = core.iter().zip(&levels).map(|(&v, &l)| (g.vertex_name(v).to_string(), l)).collect();
    if levels.iter().all(Option::is_some) {
        Ok(base(Status::Certified).with_note("cofinal at every level: strongly connected, row-finite, every vertex a lattice singleton").with_witness(witness))
    } else {
        Ok(base(Status::Inconclusive).with_note("some vertex is not a lattice singleton up to r_max").with_witness(witness))
    }
}

/// Distinct nonempty ranges r(start, λ) for 1 ≤ |λ| ≤ max_len, each with its
/// shortlex-least word. The flag is false when the cap cut the search short.
fn distinct_ranges(g: &LabelledGraph, start: &VertexSet, max_len: usize, cap: usize) -> (Vec<(Word, VertexSet)>, bool) {
    let mut seen: HashSet<VertexSet> = HashSet::new();
    let mut out: Vec<(Word, VertexSet)> = Vec::new();
    let mut frontier = vec![(Word(Vec::new()), start.clone())];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for (w, set) in &frontier {
            for (a, ends) in words_from(g, set, 1) {
                if seen.insert(ends.clone()) {
                    let word = w.concat(&a);
                    out.push((word.clone(), ends.clone()));
                    next.push((word, ends));
                    if out.len() >= cap {
                        return (out, false);
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    (out, true)
}

/// Greedy cover of `target` by at most `m_max` of `ranges`.
fn greedy_cover<'a>(ranges: &'a [(Word, VertexSet)], target: &VertexSet, m_max: usize) -> Option<Vec<&'a Word>> {
    let mut uncovered = target.clone();
    let mut chosen = Vec::new();
    while !uncovered.is_empty() {
        if chosen.len() == m_max {
            return None;
        }
        let (best, gain) = ranges
            .iter()
            .enumerate()
            .map(|(i, (_, r))| (i, r.intersection(&uncovered).len()))
            .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))?;
        if gain == 0 {
            return None;
        }
        uncovered = uncovered.difference(&ranges[best].1);
        chosen.push(&ranges[best].0);
    }
    Some(chosen)
}

/// Vertices at the end of some path of length 1..=len from `start`.
fn reach_within(g: &LabelledGraph, start: &VertexSet, len: usize) -> VertexSet {
    let mut acc = VertexSet::new();
    let mut cur = start.clone();
    for _ in 0..len {
        cur = cur.iter().flat_map(|v| g.out_edges(v).map(|e| e.dst)).collect();
        acc = acc.union(&cur);
    }
    acc
}

/// All window vertices whose exact level-ℓ class equals `class`.
fn class_sources(h: &Hierarchy, level: usize, class: usize) -> VertexSet {
    let win = h.window();
    let raw = h.partition(level).classes[class].raw();
    (0..win.graph().vertex_count() as VertexId)
        .filter(|&v| win.exact_in(v, level) && h.raw_id(level, v) == raw)
        .collect()
}

/// Vertices at which covers of words up to `word_len` are decided exactly.
fn cover_probes(win: &Window, level: usize, word_len: usize) -> VertexSet {
    if win.is_finite() {
        return win.graph().all_vertices();
    }
    win.core().iter().filter(|&v| win.exact_in(v, level + word_len)).collect()
}

/// True when the ranges r([v]_ℓ, μ) over `words` together contain every probe vertex.
pub fn validate_cover(h: &Hierarchy, level: usize, class: usize, words: &[Word]) -> bool {
    let g = h.window().graph();
    let sources = class_sources(h, level, class);
    let longest = words.iter().map(Word::len).max().unwrap_or(0);
    let covered = words.iter().fold(VertexSet::new(), |acc, w| acc.union(&relative_range(g, &sources, &w.0)));
    let probes = cover_probes(h.window(), level, longest);
    !probes.is_empty() && probes.is_subset(&covered)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CofinalRefutation {
    pub class: String,
    pub level: usize,
    pub target: String,
    /// Level R at which the target class is taken.
    pub r: usize,
    pub prefix: Vec<String>,
    /// For each N, a vertex of r([target]_R, prefix[..N]) unreachable from the class.
    pub missing: Vec<(usize, String)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassCover {
    pub class: String,
    /// Words covering every probe vertex; empty when targets were covered one by one.
    pub words: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelWitness {
    pub level: usize,
    pub covers: Vec<ClassCover>,
    pub refutation: Option<CofinalRefutation>,
    pub unresolved: Vec<String>,
}

enum Outcome {
    Covered(ClassCover),
    Refuted(CofinalRefutation),
    Unresolved,
}

/// Least r ≤ r_max with [w]_r = {w}, else r_max.
fn resolving_level(h: &Hierarchy, w: VertexId, r_max: usize) -> usize {
    (1..=r_max)
        .find(|&r| h.class_index(r, w).is_some_and(|c| h.partition(r).classes[c].members.len() == 1))
        .unwrap_or(r_max)
}

fn target_members(h: &Hierarchy, r: usize, w: VertexId) -> VertexSet {
    match h.class_index(r, w) {
        Some(c) => h.partition(r).classes[c].members.clone(),
        None => VertexSet::singleton(w),
    }
}

fn class_outcome(h: &Hierarchy, level: usize, class: usize, bounds: &Bounds, targets: &[(VertexId, Vec<Symbol>)]) -> Outcome {
    let win = h.window();
    let g = win.graph();
    let name = h.partition(level).classes[class].name.clone();
    let sources = class_sources(h, level, class);
    let word_len = if win.is_finite() { bounds.len_max } else { level };
    let (ranges, _) = distinct_ranges(g, &sources, word_len, RANGE_CAP);
    let probes = cover_probes(win, level, word_len);
    if !probes.is_empty() {
        if let Some(words) = greedy_cover(&ranges, &probes, bounds.m_max) {
            return Outcome::Covered(ClassCover { class: name, words: words.iter().map(|w| w.names(g)).collect() });
        }
    }
    if !win.is_finite() {
        return Outcome::Unresolved;
    }
    let reach = reach_within(g, &sources, bounds.len_max);
    let r_max = bounds.r_max.min(h.max_level());
    let mut unresolved = false;
    for (w, y) in targets {
        let r = resolving_level(h, *w, r_max);
        let members = target_members(h, r, *w);
        let mut missing = Vec::new();
        let mut covered = false;
        for n in 1..=bounds.n_max.min(y.len()) {
            let t = relative_range(g, &members, &y[..n]);
            if let Some(&m) = t.difference(&reach).as_slice().first() {
                missing.push((n, g.vertex_name(m).to_string()));
            } else if greedy_cover(&ranges, &t, bounds.m_max).is_some() {
                covered = true;
                break;
            } else {
                unresolved = true;
            }
        }
        if !covered && missing.len() == bounds.n_max.min(y.len()) {
            return Outcome::Refuted(CofinalRefutation {
                class: name,
                level,
                target: g.vertex_name(*w).to_string(),
                r,
                prefix: y.iter().map(|&s| g.symbol_name(s).to_string()).collect(),
                missing,
            });
        }
        if !covered {
            unresolved = true;
        }
    }
    if unresolved {
        Outcome::Unresolved
    } else {
        Outcome::Covered(ClassCover { class: name, words: Vec::new() })
    }
}

fn targets_for(g: &LabelledGraph, bounds: &Bounds, probes: &[ProbePath]) -> Result<Vec<(VertexId, Vec<Symbol>)>> {
    if !probes.is_empty() {
        let len = bounds.n_max.max(bounds.prefix_len);
        return probes.iter().map(|p| p.word(g, len)).collect();
    }
    let mut out = Vec::new();
    for w in 0..g.vertex_count() as VertexId {
        for (y, _) in words_from(g, &VertexSet::singleton(w), bounds.prefix_len) {
            out.push((w, y.0));
        }
    }
    Ok(out)
}

/// Bounded test at a single level, given a hierarchy reaching at least
/// max(level, r_max) on finite graphs.
pub fn cofinal_bounded_in(h: &Hierarchy, level: usize, bounds: &Bounds, probes: &[ProbePath]) -> Result<Verdict<LevelWitness>> {
    let win = h.window();
    if level == 0 || level > h.max_level() {
        return Err(Error::DepthInsufficient { what: "cofinality level".into(), needed: level, available: h.max_level() });
    }
    let targets = if win.is_finite() { targets_for(win.graph(), bounds, probes)? } else { Vec::new() };
    let outcomes = par::map_range(h.partition(level).len(), |c| class_outcome(h, level, c, bounds, &targets));
    let mut witness = LevelWitness { level, covers: Vec::new(), refutation: None, unresolved: Vec::new() };
    for (c, o) in outcomes.into_iter().enumerate() {
        match o {
            Outcome::Covered(cover) => witness.covers.push(cover),
            Outcome::Refuted(r) => {
                if witness.refutation.is_none() {
                    witness.refutation = Some(r);
                }
            }
            Outcome::Unresolved => witness.unresolved.push(h.partition(level).classes[c].name.clone()),
        }
    }
    let status = if witness.refutation.is_some() {
        Status::Refuted
    } else if witness.unresolved.is_empty() {
        Status::Certified
    } else {
        Status::Inconclusive
    };
    Ok(Verdict::new("cofinal_bounded", status, Scope::UpToBounds)
        .with_bound("level", level)
        .with_bounds(bounds.entries())
        .with_bounds(win.describe())
        .with_witness(witness))
}

fn hierarchy_depth(win: &Window, bounds: &Bounds, level: usize) -> Result<usize> {
    match win.back_depth() {
        None => Ok(level.max(bounds.r_max)),
        Some(d) if d >= level => Ok(level.max(bounds.r_max.min(d))),
        Some(d) => Err(Error::DepthInsufficient { what: "cofinality level".into(), needed: level, available: d }),
    }
}

pub fn check_cofinal_bounded(win: &Window, level: usize, bounds: &Bounds, probes: &[ProbePath]) -> Result<Verdict<LevelWitness>> {
    bounds.validate()?;
    require_essential(win)?;
    let h = Hierarchy::build(win, hierarchy_depth(win, bounds, level)?)?;
    cofinal_bounded_in(&h, level, bounds, probes)
}

/// Re-derives a refutation: for every N the target set must contain a vertex
/// that no path of length 1..=len_max from the class reaches.
pub fn revalidate_refutation(win: &Window, refutation: &CofinalRefutation, bounds: &Bounds) -> Result<bool> {
    let g = win.graph();
    let h = Hierarchy::build(win, refutation.level.max(refutation.r))?;
    let class = h
        .partition(refutation.level)
        .find(&refutation.class)
        .ok_or_else(|| Error::InvalidParameter(format!("no class `{}`", refutation.class)))?;
    let reach = reach_within(g, &class_sources(&h, refutation.level, class), bounds.len_max);
    let w = g.vertex(&refutation.target)?;
    let members = target_members(&h, refutation.r, w);
    let y = refutation.prefix.iter().map(|s| g.symbol(s)).collect::<Result<Vec<_>>>()?;
    Ok((1..=bounds.n_max.min(y.len())).all(|n| !relative_range(g, &members, &y[..n]).is_subset(&reach)))
}

#[derive(Clone, Debug, Serialize)]
pub struct CofinalReport {
    pub sufficient: Verdict<SufficientWitness>,
    pub levels: Vec<Verdict<LevelWitness>>,
}

/// The exact sufficient test, falling back to the bounded test at every
/// level up to ell_max.
pub fn check_cofinal(win: &Window, bounds: &Bounds, probes: &[ProbePath]) -> Result<Verdict<CofinalReport>> {
    let sufficient = check_cofinal_sufficient(win, bounds)?;
    let base = |s, scope| Verdict::new("cofinal", s, scope).with_bounds(bounds.entries()).with_bounds(win.describe());
    if sufficient.is_certified() {
        let scope = sufficient.scope;
        return Ok(base(Status::Certified, scope).with_witness(CofinalReport { sufficient, levels: Vec::new() }));
    }
    let top = win.back_depth().map_or(bounds.ell_max, |d| d.min(bounds.ell_max));
    if top == 0 {
        return Err(Error::DepthInsufficient { what: "cofinality".into(), needed: 1, available: 0 });
    }
    let h = Hierarchy::build(win, hierarchy_depth(win, bounds, top)?)?;
    let levels = (1..=top).map(|l| cofinal_bounded_in(&h, l, bounds, probes)).collect::<Result<Vec<_>>>()?;
    let status = levels.iter().fold(Status::Certified, |acc, v| conjunction(acc, v.status));
    Ok(base(status, Scope::UpToBounds).with_witness(CofinalReport { sufficient, levels }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::cayley::{gen_cayley, GroupTable};
    use crate::presentations::even::{gen_even_e1, gen_even_e2};
    use crate::presentations::strip::gen_strip_x;

    #[test]
    fn e1_sufficient() {
        let w = Window::whole(gen_even_e1());
        let r = check_cofinal_sufficient(&w, &Bounds::default()).unwrap();
        assert!(r.is_certified());
        assert_eq!(r.scope, Scope::Exact);
        for l in 1..=4 {
            assert!(!check_cofinal_bounded(&w, l, &Bounds::default(), &[]).unwrap().is_refuted());
        }
    }

    #[test]
    fn strip_sufficient() {
        let w = gen_strip_x(8).unwrap();
        let r = check_cofinal_sufficient(&w, &Bounds::default()).unwrap();
        assert!(r.is_certified(), "{:?}", r.witness);
    }

    #[test]
    fn e2_refuted_along_period_100() {
        let w = Window::whole(gen_even_e2());
        let b = Bounds::default();
        assert!(!check_cofinal_sufficient(&w, &b).unwrap().is_certified());
        let probe = ProbePath::new("u", &[], &["1", "0", "0"]);
        let r = check_cofinal_bounded(&w, 2, &b, &[probe]).unwrap();
        assert!(r.is_refuted());
        let refutation = r.witness.unwrap().refutation.unwrap();
        assert_eq!(refutation.class, "w");
        assert_eq!(refutation.prefix.concat(), "100100");
        assert!(revalidate_refutation(&w, &refutation, &b).unwrap());
        assert!(check_cofinal(&w, &b, &[]).unwrap().is_refuted());
    }

    #[test]
    fn cayley_single_word() {
        let w = Window::whole(gen_cayley(&GroupTable::cyclic(3), &["1", "2"]).unwrap());
        let r = check_cofinal_bounded(&w, 2, &Bounds::default(), &[]).unwrap();
        assert!(r.is_certified());
        assert!(r.witness.unwrap().covers.iter().all(|c| c.words.len() == 1));
    }
}
