//! Labelled graphs: storage, loading, validation and export.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type VertexId = u32;
pub type Symbol = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub src: VertexId,
    pub dst: VertexId,
    pub label: Symbol,
}

/// Sorted, duplicate-free set of vertex ids.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexSet(Vec<VertexId>);

impl VertexSet {
    pub fn new() -> Self {
        Self(Vec::new())
    }

    pub fn from_sorted(v: Vec<VertexId>) -> Self {
        debug_assert!(v.windows(2).all(|w| w[0] < w[1]));
        Self(v)
    }

    pub fn singleton(v: VertexId) -> Self {
        Self(vec![v])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[VertexId] {
        &self.0
    }

    pub fn union(&self, other: &Self) -> Self {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Self(out)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        Self(self.0.iter().copied().filter(|v| other.contains(*v)).collect())
    }

    pub fn difference(&self, other: &Self) -> Self {
        Self(self.0.iter().copied().filter(|v| !other.contains(*v)).collect())
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.0.iter().all(|v| other.contains(*v))
    }
}

impl FromIterator<VertexId> for VertexSet {
    fn from_iter<I: IntoIterator<Item = VertexId>>(iter: I) -> Self {
        let mut v: Vec<VertexId> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Self(v)
    }
}

/// JSON form of a graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDocument {
    #[serde(default)]
    pub alphabet: Option<Vec<String>>,
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeDocument>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeDocument {
    pub src: String,
    pub dst: String,
    pub label: String,
}

/// A finite directed multigraph with labelled edges.
///
/// Vertices and symbols are kept in lexicographic order and referred to by
/// their index; edges are sorted by `(src, dst, label)`.
#[derive(Clone, Debug)]
pub struct LabelledGraph {
    vertices: Vec<String>,
    alphabet: Vec<String>,
    edges: Vec<Edge>,
    out_adj: Vec<Vec<u32>>,
    in_adj: Vec<Vec<u32>>,
    vertex_index: HashMap<String, VertexId>,
    symbol_index: HashMap<String, Symbol>,
}

impl PartialEq for LabelledGraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.alphabet == other.alphabet && self.edges == other.edges
    }
}

impl Eq for LabelledGraph {}

impl LabelledGraph {
    /// Builds a graph from named parts. When `alphabet` is `None` it is the
    /// set of labels used by the edges.
    pub fn new(
        vertices: Vec<String>,
        alphabet: Option<Vec<String>>,
        edges: Vec<(String, String, String)>,
    ) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let mut sorted = vertices;
        sorted.sort();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateVertex(w[0].clone()));
            }
        }
        let vertex_index: HashMap<String, VertexId> = sorted
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i as VertexId))
            .collect();

        let alphabet: Vec<String> = match alphabet {
            Some(a) => {
                let set: BTreeSet<String> = a.into_iter().collect();
                for (index, (_, _, l)) in edges.iter().enumerate() {
                    if !set.contains(l) {
                        return Err(Error::UnknownLabel { index, label: l.clone() });
                    }
                }
                set.into_iter().collect()
            }
            None => edges
                .iter()
                .map(|e| e.2.clone())
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect(),
        };
        let symbol_index: HashMap<String, Symbol> = alphabet
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i as Symbol))
            .collect();

        let mut es = Vec::with_capacity(edges.len());
        for (index, (s, d, l)) in edges.iter().enumerate() {
            let src = *vertex_index
                .get(s)
                .ok_or_else(|| Error::DanglingEndpoint { index, vertex: s.clone() })?;
            let dst = *vertex_index
                .get(d)
                .ok_or_else(|| Error::DanglingEndpoint { index, vertex: d.clone() })?;
            es.push(Edge { src, dst, label: symbol_index[l] });
        }
        Ok(Self::from_parts(sorted, alphabet, es))
    }

    /// Assembles a graph from already-canonical parts: sorted unique vertex
    /// names, sorted unique symbols, and edges indexing into both.
    pub(crate) fn from_parts(vertices: Vec<String>, alphabet: Vec<String>, mut edges: Vec<Edge>) -> Self {
        edges.sort_unstable();
        let n = vertices.len();
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            out_adj[e.src as usize].push(i as u32);
            in_adj[e.dst as usize].push(i as u32);
        }
        let vertex_index = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i as VertexId))
            .collect();
        let symbol_index = alphabet
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i as Symbol))
            .collect();
        Self { vertices, alphabet, edges, out_adj, in_adj, vertex_index, symbol_index }
    }

    pub fn from_document(doc: &GraphDocument) -> Result<Self> {
        Self::new(
            doc.vertices.clone(),
            doc.alphabet.clone(),
            doc.edges
                .iter()
                .map(|e| (e.src.clone(), e.dst.clone(), e.label.clone()))
                .collect(),
        )
    }

    pub fn to_document(&self) -> GraphDocument {
        GraphDocument {
            alphabet: Some(self.alphabet.clone()),
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeDocument {
                    src: self.vertices[e.src as usize].clone(),
                    dst: self.vertices[e.dst as usize].clone(),
                    label: self.alphabet[e.label as usize].clone(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("graph document serializes")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, i: u32) -> Edge {
        self.edges[i as usize]
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v as usize]
    }

    pub fn symbol_name(&self, s: Symbol) -> &str {
        &self.alphabet[s as usize]
    }

    pub fn vertex(&self, name: &str) -> Result<VertexId> {
        self.vertex_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn symbol(&self, name: &str) -> Result<Symbol> {
        self.symbol_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::ForeignSymbol(name.to_string()))
    }

    pub fn vertex_set(&self, names: &[&str]) -> Result<VertexSet> {
        names.iter().map(|n| self.vertex(n)).collect()
    }

    pub fn all_vertices(&self) -> VertexSet {
        VertexSet::from_sorted((0..self.vertices.len() as VertexId).collect())
    }

    pub fn names(&self, set: &VertexSet) -> Vec<String> {
        set.iter().map(|v| self.vertex_name(v).to_string()).collect()
    }

    pub fn out_edges(&self, v: VertexId) -> impl Iterator<Item = Edge> + '_ {
        self.out_adj[v as usize].iter().map(move |&i| self.edges[i as usize])
    }

    pub fn in_edges(&self, v: VertexId) -> impl Iterator<Item = Edge> + '_ {
        self.in_adj[v as usize].iter().map(move |&i| self.edges[i as usize])
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        self.out_adj[v as usize].len()
    }

    pub fn in_degree(&self, v: VertexId) -> usize {
        self.in_adj[v as usize].len()
    }

    pub fn is_left_resolving(&self) -> bool {
        self.left_resolving_witness().is_none()
    }

    fn left_resolving_witness(&self) -> Option<LeftResolvingWitness> {
        for v in 0..self.vertices.len() as VertexId {
            let mut seen: HashMap<Symbol, Edge> = HashMap::new();
            for e in self.in_edges(v) {
                if let Some(first) = seen.insert(e.label, e) {
                    return Some(LeftResolvingWitness {
                        vertex: self.vertex_name(v).to_string(),
                        label: self.symbol_name(e.label).to_string(),
                        sources: [
                            self.vertex_name(first.src).to_string(),
                            self.vertex_name(e.src).to_string(),
                        ],
                    });
                }
            }
        }
        None
    }

    pub fn validate(&self) -> ValidationReport {
        let offending: Vec<String> = (0..self.vertices.len() as VertexId)
            .filter(|&v| self.in_degree(v) == 0 || self.out_degree(v) == 0)
            .map(|v| self.vertex_name(v).to_string())
            .collect();
        let used: BTreeSet<Symbol> = self.edges.iter().map(|e| e.label).collect();
        let unused: Vec<String> = (0..self.alphabet.len() as Symbol)
            .filter(|s| !used.contains(s))
            .map(|s| self.symbol_name(s).to_string())
            .collect();
        let lr = self.left_resolving_witness();
        ValidationReport {
            essential: Check { pass: offending.is_empty(), witness: offending },
            left_resolving: LeftResolvingCheck { pass: lr.is_none(), witness: lr },
            onto: Check { pass: unused.is_empty(), witness: unused },
        }
    }

    /// The underlying unlabelled graph.
    pub fn underlying(&self) -> DirectedGraph {
        DirectedGraph {
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| (self.vertices[e.src as usize].clone(), self.vertices[e.dst as usize].clone()))
                .collect(),
        }
    }

    /// DOT rendering with edge labels.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph labelled {\n");
        for v in &self.vertices {
            let _ = writeln!(s, "  {v:?};");
        }
        for e in &self.edges {
            let _ = writeln!(
                s,
                "  {:?} -> {:?} [label={:?}];",
                self.vertices[e.src as usize], self.vertices[e.dst as usize], self.alphabet[e.label as usize]
            );
        }
        s.push_str("}\n");
        s
    }
}

pub fn load_graph(document: &str) -> Result<LabelledGraph> {
    let doc: GraphDocument = serde_json::from_str(document).map_err(|e| Error::Malformed(e.to_string()))?;
    LabelledGraph::from_document(&doc)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub pass: bool,
    pub witness: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LeftResolvingWitness {
    pub vertex: String,
    pub label: String,
    pub sources: [String; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LeftResolvingCheck {
    pub pass: bool,
    pub witness: Option<LeftResolvingWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub essential: Check,
    pub left_resolving: LeftResolvingCheck,
    pub onto: Check,
}

/// An unlabelled directed multigraph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectedGraph {
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String)>,
}

impl DirectedGraph {
    pub fn new(vertices: &[&str], edges: &[(&str, &str)]) -> Self {
        Self {
            vertices: vertices.iter().map(|s| s.to_string()).collect(),
            edges: edges.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
        }
    }
}

/// Labels every edge with its own symbol `e0`, `e1`, ... (zero padded so the
/// lexicographic and numeric orders agree).
pub fn trivial_labelling(g: &DirectedGraph) -> Result<LabelledGraph> {
    let width = g.edges.len().saturating_sub(1).to_string().len();
    LabelledGraph::new(
        g.vertices.clone(),
        None,
        g.edges
            .iter()
            .enumerate()
            .map(|(i, (s, d))| (s.clone(), d.clone(), format!("e{i:0width$}")))
            .collect(),
    )
}
