//! Finite windows onto possibly infinite presentations.
//!
//! A window stores the induced subgraph on a generated region together with,
//! for every vertex, how far its backward and forward neighbourhoods are known
//! to be complete. A vertex is in the core when both radii reach the requested
//! depths, so every length-bounded quantity read at a core vertex equals its
//! value in the full presentation.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{Edge, LabelledGraph, VertexId, VertexSet};

pub const DEFAULT_VERTEX_CAP: usize = 1 << 20;

/// Radius value for vertices whose neighbourhood is complete at every depth.
pub const UNBOUNDED: u32 = u32::MAX;

/// A presentation that can be explored one vertex at a time.
pub trait Family {
    fn tag(&self) -> String;
    fn alphabet(&self) -> Vec<String>;
    /// The vertices of the region to materialize, or `None` once more than
    /// `cap` would be produced.
    fn region(&self, cap: usize) -> Option<Vec<String>>;
    /// All `(source, label)` pairs of edges into `v` in the full presentation.
    fn in_edges(&self, v: &str) -> Vec<(String, String)>;
    /// All `(target, label)` pairs of edges out of `v` in the full presentation.
    fn out_edges(&self, v: &str) -> Vec<(String, String)>;
    /// Largest word length for which paths inside the region realize every
    /// word of the full language.
    fn language_depth(&self) -> Option<usize> {
        None
    }
}

#[derive(Clone, Debug)]
pub struct Window {
    graph: LabelledGraph,
    core: VertexSet,
    is_core: Vec<bool>,
    in_radius: Vec<u32>,
    out_radius: Vec<u32>,
    back_depth: Option<usize>,
    fwd_depth: Option<usize>,
    language_depth: Option<usize>,
    family_tag: Option<String>,
}

impl Window {
    /// The whole of a finite graph: every vertex is core at every depth.
    pub fn whole(graph: LabelledGraph) -> Self {
        let n = graph.vertex_count();
        Self {
            core: graph.all_vertices(),
            is_core: vec![true; n],
            in_radius: vec![UNBOUNDED; n],
            out_radius: vec![UNBOUNDED; n],
            back_depth: None,
            fwd_depth: None,
            language_depth: None,
            family_tag: None,
            graph,
        }
    }

    pub fn graph(&self) -> &LabelledGraph {
        &self.graph
    }

    pub fn core(&self) -> &VertexSet {
        &self.core
    }

    pub fn is_core(&self, v: VertexId) -> bool {
        self.is_core[v as usize]
    }

    pub fn is_finite(&self) -> bool {
        self.back_depth.is_none()
    }

    pub fn back_depth(&self) -> Option<usize> {
        self.back_depth
    }

    pub fn fwd_depth(&self) -> Option<usize> {
        self.fwd_depth
    }

    pub fn language_depth(&self) -> Option<usize> {
        if self.is_finite() {
            None
        } else {
            Some(self.language_depth.unwrap_or(0))
        }
    }

    pub fn family_tag(&self) -> Option<&str> {
        self.family_tag.as_deref()
    }

    pub fn in_radius(&self, v: VertexId) -> u32 {
        self.in_radius[v as usize]
    }

    pub fn out_radius(&self, v: VertexId) -> u32 {
        self.out_radius[v as usize]
    }

    /// True when every in-path of length ≤ `k` at `v` is present.
    pub fn exact_in(&self, v: VertexId, k: usize) -> bool {
        self.in_radius[v as usize] as u64 >= k as u64
    }

    /// True when every out-path of length ≤ `k` at `v` is present.
    pub fn exact_out(&self, v: VertexId, k: usize) -> bool {
        self.out_radius[v as usize] as u64 >= k as u64
    }

    /// True when the window has a vertex whose out-neighbourhood is cut off.
    pub fn is_out_incomplete(&self, v: VertexId) -> bool {
        self.out_radius[v as usize] == 0
    }

    pub fn require_back(&self, needed: usize, what: &str) -> Result<()> {
        match self.back_depth {
            Some(d) if d < needed => Err(Error::DepthInsufficient { what: what.into(), needed, available: d }),
            _ => Ok(()),
        }
    }

    pub fn require_fwd(&self, needed: usize, what: &str) -> Result<()> {
        match self.fwd_depth {
            Some(d) if d < needed => Err(Error::DepthInsufficient { what: what.into(), needed, available: d }),
            _ => Ok(()),
        }
    }

    /// Depth parameters in the form used by report headers.
    pub fn describe(&self) -> Vec<(String, usize)> {
        let mut out = Vec::new();
        if let Some(d) = self.back_depth {
            out.push(("back_depth".to_string(), d));
        }
        if let Some(d) = self.fwd_depth {
            out.push(("fwd_depth".to_string(), d));
        }
        out.push(("window_vertices".to_string(), self.graph.vertex_count()));
        out.push(("core_vertices".to_string(), self.core.len()));
        out
    }
}

impl From<LabelledGraph> for Window {
    fn from(g: LabelledGraph) -> Self {
        Window::whole(g)
    }
}

/// Materializes the region of `family` and marks the core for the given depths.
pub fn build_window(family: &dyn Family, back_depth: usize, fwd_depth: usize, cap: usize) -> Result<Window> {
    let mut names = family.region(cap).ok_or(Error::VertexCap { cap })?;
    if names.len() > cap {
        return Err(Error::VertexCap { cap });
    }
    names.sort();
    names.dedup();
    if names.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let index: HashMap<&str, VertexId> = names.iter().enumerate().map(|(i, n)| (n.as_str(), i as VertexId)).collect();
    let mut alphabet = family.alphabet();
    alphabet.sort();
    alphabet.dedup();
    let sym: HashMap<&str, u32> = alphabet.iter().enumerate().map(|(i, s)| (s.as_str(), i as u32)).collect();

    let n = names.len();
    let mut edges = Vec::new();
    let mut in_complete = vec![true; n];
    let mut out_complete = vec![true; n];
    for (i, name) in names.iter().enumerate() {
        for (dst, label) in family.out_edges(name) {
            match index.get(dst.as_str()) {
                Some(&d) => edges.push(Edge { src: i as VertexId, dst: d, label: sym[label.as_str()] }),
                None => out_complete[i] = false,
            }
        }
        if family.in_edges(name).iter().any(|(src, _)| !index.contains_key(src.as_str())) {
            in_complete[i] = false;
        }
    }
    let graph = LabelledGraph::from_parts(names.clone(), alphabet, edges);

    // in_radius: distance along edges from the nearest in-incomplete vertex.
    let in_radius = radii(&graph, &in_complete, true);
    // out_radius: distance along reversed edges from the nearest out-incomplete vertex.
    let out_radius = radii(&graph, &out_complete, false);

    let is_core: Vec<bool> = (0..n)
        .map(|v| in_radius[v] as u64 >= back_depth as u64 && out_radius[v] as u64 >= fwd_depth as u64)
        .collect();
    let core = VertexSet::from_sorted((0..n as VertexId).filter(|&v| is_core[v as usize]).collect());
    Ok(Window {
        graph,
        core,
        is_core,
        in_radius,
        out_radius,
        back_depth: Some(back_depth),
        fwd_depth: Some(fwd_depth),
        language_depth: family.language_depth(),
        family_tag: Some(family.tag()),
    })
}

fn radii(g: &LabelledGraph, complete: &[bool], forward: bool) -> Vec<u32> {
    let n = complete.len();
    let mut dist = vec![UNBOUNDED; n];
    let mut queue = VecDeque::new();
    for v in 0..n {
        if !complete[v] {
            dist[v] = 0;
            queue.push_back(v as VertexId);
        }
    }
    while let Some(v) = queue.pop_front() {
        let d = dist[v as usize] + 1;
        let next: Vec<VertexId> = if forward {
            g.out_edges(v).map(|e| e.dst).collect()
        } else {
            g.in_edges(v).map(|e| e.src).collect()
        };
        for w in next {
            if dist[w as usize] == UNBOUNDED {
                dist[w as usize] = d;
                queue.push_back(w);
            }
        }
    }
    dist
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The integer line with a `+` edge to the right and a `-` edge to the left,
    /// generated on `-w..=w`.
    struct Line(i64);

    impl Family for Line {
        fn tag(&self) -> String {
            "line".into()
        }
        fn alphabet(&self) -> Vec<String> {
            vec!["+".into(), "-".into()]
        }
        fn region(&self, _cap: usize) -> Option<Vec<String>> {
            Some((-self.0..=self.0).map(|i| i.to_string()).collect())
        }
        fn in_edges(&self, v: &str) -> Vec<(String, String)> {
            let i: i64 = v.parse().unwrap();
            vec![((i - 1).to_string(), "+".into()), ((i + 1).to_string(), "-".into())]
        }
        fn out_edges(&self, v: &str) -> Vec<(String, String)> {
            let i: i64 = v.parse().unwrap();
            vec![((i + 1).to_string(), "+".into()), ((i - 1).to_string(), "-".into())]
        }
    }

    #[test]
    fn line_core_and_radii() {
        let w = build_window(&Line(5), 2, 1, 100).unwrap();
        let g = w.graph();
        assert_eq!(g.vertex_count(), 11);
        assert_eq!(g.edge_count(), 20);
        assert_eq!(w.in_radius(g.vertex("0").unwrap()), 5);
        assert_eq!(w.in_radius(g.vertex("5").unwrap()), 0);
        let core = g.names(w.core());
        assert_eq!(core.len(), 7);
        assert!(core.contains(&"3".to_string()) && !core.contains(&"4".to_string()));
    }

    #[test]
    fn zero_depth_core_is_everything() {
        let w = build_window(&Line(3), 0, 0, 100).unwrap();
        assert_eq!(w.core().len(), 7);
    }

    #[test]
    fn cap_enforced() {
        assert!(matches!(build_window(&Line(5), 1, 1, 4), Err(Error::VertexCap { cap: 4 })));
    }
}
