//! Generalized vertices: the classes [v]_ℓ, the partitions Ω_ℓ and the lattice
//! generated by range sets.
//!
//! Partitions come from signature refinement. The level-k id of a vertex set S
//! interns the list of pairs (a, id_{k-1}(P_a(S))) over the labels a that
//! reach S, where P_a(S) is the set of a-predecessors of S. Two vertices get
//! the same level-k id exactly when they receive the same labelled words of
//! length ≤ k. For left-resolving graphs every P_a(S) is a singleton; in
//! general predecessor sets are interned alongside vertices.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{LabelledGraph, Symbol, VertexId, VertexSet};
use crate::language::{paths_into, range_set, relative_range, words_up_to, Word};
use crate::par;
use crate::verdict::{Scope, Status, Verdict};
use crate::window::Window;

pub const DEFAULT_LATTICE_CAP: usize = 1 << 16;

#[derive(Clone, Debug)]
pub struct Class {
    pub name: String,
    pub members: VertexSet,
    raw: u32,
}

impl Class {
    pub fn representative(&self) -> VertexId {
        self.members.as_slice()[0]
    }

    /// The signature id shared by all members.
    pub fn raw(&self) -> u32 {
        self.raw
    }
}

/// Ω_ℓ restricted to the core, classes ordered by their least member.
#[derive(Clone, Debug)]
pub struct ClassPartition {
    pub level: usize,
    pub classes: Vec<Class>,
    by_raw: HashMap<u32, usize>,
}

impl ClassPartition {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn find(&self, name: &str) -> Option<usize> {
        self.classes.iter().position(|c| c.name == name)
    }

    pub fn member_names(&self, g: &LabelledGraph) -> Vec<Vec<String>> {
        self.classes.iter().map(|c| g.names(&c.members)).collect()
    }
}

/// Refinement Ω_ℓ → Ω_{ℓ+1}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Refinement {
    pub level: usize,
    /// For each ℓ-class, the (ℓ+1)-classes it splits into.
    pub children: Vec<Vec<usize>>,
    /// For each (ℓ+1)-class, the ℓ-class containing it.
    pub parent: Vec<usize>,
}

impl Refinement {
    pub fn is_bijection(&self) -> bool {
        self.children.iter().all(|c| c.len() == 1)
    }
}

/// Signature ids for levels 1..=max_level and the corresponding partitions.
pub struct Hierarchy<'w> {
    win: &'w Window,
    ids: Vec<Vec<u32>>,
    partitions: Vec<ClassPartition>,
}

impl<'w> Hierarchy<'w> {
    pub fn build(win: &'w Window, max_level: usize) -> Result<Self> {
        if max_level == 0 {
            return Err(Error::InvalidParameter("level must be at least 1".into()));
        }
        win.require_back(max_level, "class partition")?;
        let ids = signature_ids(win.graph(), max_level);
        let partitions = (1..=max_level)
            .map(|level| {
                let row = &ids[level - 1];
                let mut by_raw: HashMap<u32, usize> = HashMap::new();
                let mut members: Vec<Vec<VertexId>> = Vec::new();
                let mut raws = Vec::new();
                for v in win.core().iter() {
                    let idx = *by_raw.entry(row[v as usize]).or_insert_with(|| {
                        members.push(Vec::new());
                        raws.push(row[v as usize]);
                        members.len() - 1
                    });
                    members[idx].push(v);
                }
                let classes = members
                    .into_iter()
                    .zip(raws)
                    .map(|(m, raw)| Class {
                        name: win.graph().vertex_name(m[0]).to_string(),
                        members: VertexSet::from_sorted(m),
                        raw,
                    })
                    .collect();
                ClassPartition { level, classes, by_raw }
            })
            .collect();
        Ok(Self { win, ids, partitions })
    }

    pub fn window(&self) -> &'w Window {
        self.win
    }

    pub fn max_level(&self) -> usize {
        self.ids.len()
    }

    pub fn partition(&self, level: usize) -> &ClassPartition {
        &self.partitions[level - 1]
    }

    /// Raw level-ℓ id; meaningful only where the window is exact to depth ℓ.
    pub fn raw_id(&self, level: usize, v: VertexId) -> u32 {
        self.ids[level - 1][v as usize]
    }

    pub fn same_class(&self, level: usize, v: VertexId, w: VertexId) -> bool {
        self.raw_id(level, v) == self.raw_id(level, w)
    }

    /// Index of the ℓ-class of any vertex whose depth-ℓ neighbourhood is
    /// complete, provided that class has a core member.
    pub fn class_index(&self, level: usize, v: VertexId) -> Option<usize> {
        if !self.win.exact_in(v, level) {
            return None;
        }
        self.partition(level).by_raw.get(&self.raw_id(level, v)).copied()
    }

    pub fn refine(&self, level: usize) -> Result<Refinement> {
        if level + 1 > self.max_level() {
            return Err(Error::DepthInsufficient {
                what: "refinement".into(),
                needed: level + 1,
                available: self.max_level(),
            });
        }
        let coarse = self.partition(level);
        let fine = self.partition(level + 1);
        let mut children = vec![Vec::new(); coarse.len()];
        let mut parent = Vec::with_capacity(fine.len());
        for (j, c) in fine.classes.iter().enumerate() {
            let i = coarse.by_raw[&self.raw_id(level, c.representative())];
            children[i].push(j);
            parent.push(i);
        }
        Ok(Refinement { level, children, parent })
    }

    /// Λ_ℓ of a class representative, shortlex sorted.
    pub fn signature(&self, level: usize, class: usize) -> Vec<Word> {
        let rep = self.partition(level).classes[class].representative();
        paths_into(self.win.graph(), &VertexSet::singleton(rep), level).expect("level is positive")
    }

    pub fn signatures(&self, level: usize) -> Vec<Vec<Word>> {
        par::map_range(self.partition(level).len(), |i| self.signature(level, i))
    }

    /// Union of the member sets of the given classes.
    pub fn union_of(&self, level: usize, classes: &[usize]) -> VertexSet {
        let p = self.partition(level);
        classes
            .iter()
            .fold(VertexSet::new(), |acc, &i| acc.union(&p.classes[i].members))
    }

    pub fn to_document(&self, level: usize) -> PartitionDocument {
        let g = self.win.graph();
        let sigs = self.signatures(level);
        PartitionDocument {
            level,
            classes: self
                .partition(level)
                .classes
                .iter()
                .zip(sigs)
                .map(|(c, s)| ClassDocument {
                    name: c.name.clone(),
                    members: g.names(&c.members),
                    signature: s.iter().map(|w| w.names(g)).collect(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionDocument {
    pub level: usize,
    pub classes: Vec<ClassDocument>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassDocument {
    pub name: String,
    pub members: Vec<String>,
    pub signature: Vec<Vec<String>>,
}

type PredGroups = Vec<(Symbol, VertexSet)>;

fn pred_groups(g: &LabelledGraph, set: &VertexSet) -> PredGroups {
    let mut by_label: BTreeMap<Symbol, Vec<VertexId>> = BTreeMap::new();
    for v in set.iter() {
        for e in g.in_edges(v) {
            by_label.entry(e.label).or_default().push(e.src);
        }
    }
    by_label.into_iter().map(|(a, s)| (a, s.into_iter().collect())).collect()
}

/// Per-level signature ids for every vertex of `g`, levels 1..=max_level.
pub fn signature_ids(g: &LabelledGraph, max_level: usize) -> Vec<Vec<u32>> {
    let n = g.vertex_count();
    let preds: Vec<PredGroups> = par::map_range(n, |v| pred_groups(g, &VertexSet::singleton(v as VertexId)));

    // Non-singleton predecessor sets whose ids are needed at each level.
    let base: BTreeSet<VertexSet> = preds
        .iter()
        .flatten()
        .filter(|(_, p)| p.len() > 1)
        .map(|(_, p)| p.clone())
        .collect();
    let mut needed: Vec<BTreeSet<VertexSet>> = vec![BTreeSet::new(); max_level + 1];
    let mut set_preds: HashMap<VertexSet, PredGroups> = HashMap::new();
    if max_level >= 2 && !base.is_empty() {
        needed[max_level - 1] = base.clone();
        for k in (2..max_level).rev() {
            let mut next = base.clone();
            for s in &needed[k] {
                let groups = set_preds.entry(s.clone()).or_insert_with(|| pred_groups(g, s));
                next.extend(groups.iter().filter(|(_, p)| p.len() > 1).map(|(_, p)| p.clone()));
            }
            needed[k - 1] = next;
        }
        for s in needed.iter().flatten() {
            set_preds.entry(s.clone()).or_insert_with(|| pred_groups(g, s));
        }
    }

    let mut out = Vec::with_capacity(max_level);
    let mut prev_v = vec![0u32; n];
    let mut prev_s: HashMap<VertexSet, u32> = HashMap::new();
    for k in 1..=max_level {
        let lookup = |p: &VertexSet| -> u32 {
            if k == 1 {
                0
            } else if p.len() == 1 {
                prev_v[p.as_slice()[0] as usize]
            } else {
                prev_s[p]
            }
        };
        let key = |groups: &PredGroups| -> Vec<(u32, u32)> { groups.iter().map(|(a, p)| (*a, lookup(p))).collect() };
        let vkeys: Vec<Vec<(u32, u32)>> = par::map(&preds, key);
        let sets: Vec<&VertexSet> = needed[k].iter().collect();
        let skeys: Vec<Vec<(u32, u32)>> = par::map(&sets, |s| key(&set_preds[*s]));

        let mut intern: HashMap<Vec<(u32, u32)>, u32> = HashMap::new();
        let mut ids_v = Vec::with_capacity(n);
        for k in vkeys {
            let next = intern.len() as u32;
            ids_v.push(*intern.entry(k).or_insert(next));
        }
        let mut ids_s = HashMap::with_capacity(sets.len());
        for (s, k) in sets.into_iter().zip(skeys) {
            let next = intern.len() as u32;
            ids_s.insert(s.clone(), *intern.entry(k).or_insert(next));
        }
        out.push(ids_v.clone());
        prev_v = ids_v;
        prev_s = ids_s;
    }
    out
}

pub fn omega(win: &Window, level: usize) -> Result<ClassPartition> {
    Ok(Hierarchy::build(win, level)?.partition(level).clone())
}

pub fn refine(win: &Window, level: usize) -> Result<Refinement> {
    Hierarchy::build(win, level + 1)?.refine(level)
}

fn require_exact(win: &Window, v: VertexId, level: usize) -> Result<()> {
    if level == 0 {
        return Err(Error::InvalidParameter("level must be at least 1".into()));
    }
    if !win.exact_in(v, level) {
        return Err(Error::DepthInsufficient {
            what: format!("in-paths of `{}`", win.graph().vertex_name(v)),
            needed: level,
            available: win.in_radius(v) as usize,
        });
    }
    Ok(())
}

/// Λ_ℓ(v): the labelled words of length ≤ ℓ that `v` receives.
pub fn lambda_set(win: &Window, v: VertexId, level: usize) -> Result<Vec<Word>> {
    require_exact(win, v, level)?;
    paths_into(win.graph(), &VertexSet::singleton(v), level)
}

fn core_range(win: &Window, word: &Word) -> VertexSet {
    range_set(win.graph(), word.symbols()).intersection(win.core())
}

/// X_ℓ(v) = ∩ r(λ) over λ ∈ Λ_ℓ(v), restricted to the core.
pub fn x_set(win: &Window, v: VertexId, level: usize) -> Result<VertexSet> {
    win.require_back(level, "X set")?;
    let lambda = lambda_set(win, v, level)?;
    let mut acc = win.core().clone();
    for w in &lambda {
        acc = acc.intersection(&core_range(win, w));
    }
    Ok(acc)
}

/// Y_ℓ(v) = ∪_{w ∈ X_ℓ(v)} Λ_ℓ(w) \ Λ_ℓ(v).
pub fn y_set(win: &Window, v: VertexId, level: usize) -> Result<Vec<Word>> {
    let x = x_set(win, v, level)?;
    let own: HashSet<Word> = lambda_set(win, v, level)?.into_iter().collect();
    let mut out = BTreeSet::new();
    for w in x.iter() {
        for word in lambda_set(win, w, level)? {
            if !own.contains(&word) {
                out.insert(word);
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// [v]_ℓ = X_ℓ(v) \ r(Y_ℓ(v)), restricted to the core.
pub fn class_of(win: &Window, v: VertexId, level: usize) -> Result<VertexSet> {
    let x = x_set(win, v, level)?;
    let y = y_set(win, v, level)?;
    let mut out = x;
    for word in &y {
        out = out.difference(&core_range(win, word));
    }
    Ok(out)
}

/// Smallest member of the level-ℓ lattice containing `v`, namely X_ℓ(v).
pub fn minimal_containing(win: &Window, v: VertexId, level: usize) -> Result<VertexSet> {
    x_set(win, v, level)
}

/// A union of ℓ-classes, flagged once membership in the lattice is checked.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneralizedSet {
    pub level: usize,
    pub member_classes: Vec<usize>,
    pub verified: bool,
}

/// Range-set generators of the level-ℓ lattice as bitsets over Ω_ℓ classes,
/// together with, for each class c, the smallest generator intersection
/// containing it.
pub struct Generators {
    pub level: usize,
    pub words: Vec<Word>,
    pub sets: Vec<FixedBitSet>,
    pub minimal: Vec<FixedBitSet>,
}

pub fn generators(h: &Hierarchy, level: usize) -> Generators {
    let n = h.partition(level).len();
    let sigs = h.signatures(level);
    let mut by_word: BTreeMap<Word, FixedBitSet> = BTreeMap::new();
    for (c, sig) in sigs.iter().enumerate() {
        for w in sig {
            by_word.entry(w.clone()).or_insert_with(|| FixedBitSet::with_capacity(n)).insert(c);
        }
    }
    let minimal = sigs
        .iter()
        .map(|sig| {
            let mut acc = FixedBitSet::with_capacity(n);
            if sig.is_empty() {
                return acc;
            }
            acc.insert_range(..);
            for w in sig {
                acc.intersect_with(&by_word[w]);
            }
            acc
        })
        .collect();
    let (words, sets) = by_word.into_iter().unzip();
    Generators { level, words, sets, minimal }
}

/// Splits `a` into ℓ-classes; `None` if `a` is not a union of core classes.
fn as_classes(h: &Hierarchy, a: &VertexSet, level: usize) -> Option<Vec<usize>> {
    let p = h.partition(level);
    let mut classes = BTreeSet::new();
    for v in a.iter() {
        if !h.window().is_core(v) {
            return None;
        }
        classes.insert(p.by_raw[&h.raw_id(level, v)]);
    }
    let classes: Vec<usize> = classes.into_iter().collect();
    if h.union_of(level, &classes) == *a {
        Some(classes)
    } else {
        None
    }
}

/// Membership in the level-ℓ lattice: `a` must equal the union of the minimal
/// members X_ℓ(v) over its vertices.
pub fn membership_in(h: &Hierarchy, gens: &Generators, a: &VertexSet, level: usize) -> Option<Vec<usize>> {
    let classes = as_classes(h, a, level)?;
    let n = h.partition(level).len();
    let mut own = FixedBitSet::with_capacity(n);
    classes.iter().for_each(|&c| own.insert(c));
    for &c in &classes {
        let m = &gens.minimal[c];
        if m.count_ones(..) == 0 || !m.is_subset(&own) {
            return None;
        }
    }
    Some(classes)
}

pub fn e0minus_membership(win: &Window, a: &VertexSet, level: usize) -> Result<bool> {
    let h = Hierarchy::build(win, level)?;
    let gens = generators(&h, level);
    Ok(membership_in(&h, &gens, a, level).is_some())
}

pub fn decompose_set(win: &Window, a: &VertexSet, level: usize) -> Result<GeneralizedSet> {
    let h = Hierarchy::build(win, level)?;
    let gens = generators(&h, level);
    match membership_in(&h, &gens, a, level) {
        Some(member_classes) => Ok(GeneralizedSet { level, member_classes, verified: true }),
        None => Err(Error::NotAMember { level }),
    }
}

/// The lattice generated by the range sets under union and intersection, as
/// bitsets over Ω_ℓ classes in sorted order.
pub fn lattice_closure(gens: &Generators, classes: usize, cap: usize) -> Result<Vec<FixedBitSet>> {
    let mut seen: HashSet<FixedBitSet> = HashSet::new();
    let mut all: Vec<FixedBitSet> = Vec::new();
    let mut frontier: Vec<FixedBitSet> = Vec::new();
    let empty = FixedBitSet::with_capacity(classes);
    for s in std::iter::once(&empty).chain(gens.sets.iter()) {
        if seen.insert(s.clone()) {
            all.push(s.clone());
            frontier.push(s.clone());
        }
    }
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for a in &frontier {
            for b in &all {
                for c in [a.union(b).collect::<FixedBitSet>(), a.intersection(b).collect::<FixedBitSet>()] {
                    let mut c = c;
                    c.grow(classes);
                    if !seen.contains(&c) {
                        seen.insert(c.clone());
                        next.push(c);
                        if seen.len() > cap {
                            return Err(Error::ClosureBudget { cap, partial: seen.len() });
                        }
                    }
                }
            }
        }
        all.extend(next.iter().cloned());
        frontier = next;
    }
    let mut out: Vec<FixedBitSet> = seen.into_iter().collect();
    out.sort_by_key(|b| b.ones().collect::<Vec<_>>());
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct WeakResolvingWitness {
    pub level: usize,
    pub a: Vec<String>,
    pub b: Vec<String>,
    pub word: Vec<String>,
    pub intersection_of_ranges: Vec<String>,
    pub range_of_intersection: Vec<String>,
}

/// r(A,α) ∩ r(B,α) = r(A∩B,α) over lattice members A, B and words α.
pub fn check_weakly_left_resolving(
    win: &Window,
    ell_max: usize,
    word_len_max: usize,
    cap: usize,
) -> Result<Verdict<WeakResolvingWitness>> {
    let g = win.graph();
    let base = |status, scope| {
        Verdict::new("weakly_left_resolving", status, scope)
            .with_bound("ell_max", ell_max)
            .with_bound("word_len_max", word_len_max)
            .with_bound("lattice_cap", cap)
            .with_bounds(win.describe())
    };
    if g.is_left_resolving() {
        return Ok(base(Status::Certified, Scope::Exact).with_note("left-resolving graphs satisfy the identity for every family"));
    }
    let words = words_up_to(g, word_len_max)?;
    let h = Hierarchy::build(win, ell_max)?;
    for level in 1..=ell_max {
        let gens = generators(&h, level);
        let n = h.partition(level).len();
        let members = match lattice_closure(&gens, n, cap) {
            Ok(m) => m,
            Err(Error::ClosureBudget { partial, .. }) => {
                return Ok(base(Status::Inconclusive, Scope::UpToBounds)
                    .with_note(format!("lattice closure at level {level} exceeded the cap ({partial} elements)")));
            }
            Err(e) => return Err(e),
        };
        let sets: Vec<VertexSet> = members
            .iter()
            .map(|b| h.union_of(level, &b.ones().collect::<Vec<_>>()))
            .collect();
        for (i, a) in sets.iter().enumerate() {
            for b in &sets[i + 1..] {
                let ab = a.intersection(b);
                for w in &words {
                    let lhs = relative_range(g, a, w.symbols()).intersection(&relative_range(g, b, w.symbols()));
                    let rhs = relative_range(g, &ab, w.symbols());
                    if lhs != rhs {
                        return Ok(base(Status::Refuted, Scope::Exact).with_witness(WeakResolvingWitness {
                            level,
                            a: g.names(a),
                            b: g.names(b),
                            word: w.names(g),
                            intersection_of_ranges: g.names(&lhs),
                            range_of_intersection: g.names(&rhs),
                        }));
                    }
                }
            }
        }
    }
    Ok(base(Status::Certified, Scope::UpToBounds))
}

#[derive(Clone, Debug, Serialize)]
pub struct FinitenessWitness {
    /// Per level, the largest number of words observed for any class.
    pub max_per_level: Vec<usize>,
}

fn finiteness(win: &Window, ell_max: usize, property: &str, count: impl Fn(&Hierarchy, usize, usize) -> usize) -> Result<Verdict<FinitenessWitness>> {
    let h = Hierarchy::build(win, ell_max)?;
    let max_per_level = (1..=ell_max)
        .map(|level| (0..h.partition(level).len()).map(|c| count(&h, level, c)).max().unwrap_or(0))
        .collect();
    let scope = if win.is_finite() { Scope::Exact } else { Scope::UpToBounds };
    Ok(Verdict::new(property, Status::Certified, scope)
        .with_bound("ell_max", ell_max)
        .with_bounds(win.describe())
        .with_witness(FinitenessWitness { max_per_level }))
}

/// Counts L^1 of each class (the one-step emission sets are finite).
pub fn check_set_finite(win: &Window, ell_max: usize) -> Result<Verdict<FinitenessWitness>> {
    let g = win.graph();
    finiteness(win, ell_max, "set_finite", |h, level, c| {
        let members = &h.partition(level).classes[c].members;
        members.iter().flat_map(|v| g.out_edges(v).map(|e| e.label)).collect::<BTreeSet<_>>().len()
    })
}

/// Counts L(E^{≤ℓ}[v]_ℓ) of each class.
pub fn check_receiver_set_finite(win: &Window, ell_max: usize) -> Result<Verdict<FinitenessWitness>> {
    finiteness(win, ell_max, "receiver_set_finite", |h, level, c| h.signature(level, c).len())
}
