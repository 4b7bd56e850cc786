#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use labelspace::{LabelledGraph, VertexId, Window};

/// Labelled words of length 1..=ell carried by paths ending at `v`, by direct
/// depth-first search over in-edges.
pub fn received_words(g: &LabelledGraph, v: VertexId, ell: usize) -> BTreeSet<Vec<u32>> {
    fn go(g: &LabelledGraph, v: VertexId, left: usize, suffix: &mut Vec<u32>, out: &mut BTreeSet<Vec<u32>>) {
        if left == 0 {
            return;
        }
        for e in g.in_edges(v) {
            suffix.push(e.label);
            out.insert(suffix.iter().rev().copied().collect());
            go(g, e.src, left - 1, suffix, out);
            suffix.pop();
        }
    }
    let mut out = BTreeSet::new();
    go(g, v, ell, &mut Vec::new(), &mut out);
    out
}

/// Core vertices grouped by equal received-word sets, each class sorted and
/// the classes ordered by least member.
pub fn brute_classes(win: &Window, ell: usize) -> Vec<Vec<VertexId>> {
    let mut groups: BTreeMap<BTreeSet<Vec<u32>>, Vec<VertexId>> = BTreeMap::new();
    for v in win.core().iter() {
        groups.entry(received_words(win.graph(), v, ell)).or_default().push(v);
    }
    let mut classes: Vec<Vec<VertexId>> = groups.into_values().collect();
    classes.sort();
    classes
}

/// Number of paths of length k ending at each vertex, from powers of the adjacency matrix.
pub fn paths_into_counts(g: &LabelledGraph, k: usize) -> Vec<u64> {
    let n = g.vertex_count();
    let mut adj = vec![vec![0u64; n]; n];
    for e in g.edges() {
        adj[e.src as usize][e.dst as usize] += 1;
    }
    let mut row = vec![1u64; n];
    for _ in 0..k {
        let mut next = vec![0u64; n];
        for (i, &r) in row.iter().enumerate() {
            for j in 0..n {
                next[j] += r * adj[i][j];
            }
        }
        row = next;
    }
    row
}

pub fn names(g: &LabelledGraph, set: &[VertexId]) -> Vec<String> {
    set.iter().map(|&v| g.vertex_name(v).to_string()).collect()
}

pub fn sym(g: &LabelledGraph, names: &[&str]) -> Vec<u32> {
    names.iter().map(|s| g.symbol(s).unwrap()).collect()
}
