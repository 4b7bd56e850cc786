//! The unrooted N-ary tree presenting the Dyck shift.
//!
//! Nodes are addressed relative to a basepoint: `p{k}` is the k-th ancestor of
//! the basepoint `p0` along its chain of first children, and `p{k}/i/j/...`
//! descends from it. The canonical address never starts a descent from `p{k}`
//! (k > 0) with child 1, since that node is `p{k-1}`. A parent reaches child i
//! by `ai`; child i returns to its parent by `bi`.

use crate::error::{Error, Result};
use crate::window::{build_window, Family, Window, DEFAULT_VERTEX_CAP};

#[derive(Clone, Debug, PartialEq, Eq)]
struct Node {
    k: usize,
    path: Vec<usize>,
}

impl Node {
    fn canonical(mut k: usize, mut path: Vec<usize>) -> Node {
        while k > 0 && path.first() == Some(&1) {
            k -= 1;
            path.remove(0);
        }
        Node { k, path }
    }

    fn parse(name: &str) -> Node {
        let mut parts = name.split('/');
        let k = parts.next().expect("node name")[1..].parse().expect("ancestor index");
        Node { k, path: parts.map(|p| p.parse().expect("child index")).collect() }
    }

    fn name(&self) -> String {
        let mut s = format!("p{}", self.k);
        for i in &self.path {
            s.push('/');
            s.push_str(&i.to_string());
        }
        s
    }

    fn radius(&self) -> usize {
        self.k + self.path.len()
    }

    fn child(&self, i: usize) -> Node {
        let mut p = self.path.clone();
        p.push(i);
        Node::canonical(self.k, p)
    }

    /// Parent and the index of this node among the parent's children.
    fn parent(&self) -> (Node, usize) {
        match self.path.split_last() {
            Some((&i, rest)) => (Node { k: self.k, path: rest.to_vec() }, i),
            None => (Node { k: self.k + 1, path: Vec::new() }, 1),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct DyckFamily {
    pub n: usize,
    /// Tree radius of the generated ball around the basepoint.
    pub radius: usize,
}

impl DyckFamily {
    fn open(&self, i: usize) -> String {
        format!("a{i}")
    }

    fn close(&self, i: usize) -> String {
        format!("b{i}")
    }
}

impl Family for DyckFamily {
    fn tag(&self) -> String {
        format!("dyck(N={}, radius={})", self.n, self.radius)
    }

    fn alphabet(&self) -> Vec<String> {
        (1..=self.n).map(|i| self.open(i)).chain((1..=self.n).map(|i| self.close(i))).collect()
    }

    fn region(&self, cap: usize) -> Option<Vec<String>> {
        let mut out = Vec::new();
        for k in 0..=self.radius {
            let mut stack = vec![Vec::<usize>::new()];
            while let Some(path) = stack.pop() {
                out.push(Node { k, path: path.clone() }.name());
                if out.len() > cap {
                    return None;
                }
                if k + path.len() < self.radius {
                    for i in 1..=self.n {
                        if k > 0 && path.is_empty() && i == 1 {
                            continue;
                        }
                        let mut p = path.clone();
                        p.push(i);
                        stack.push(p);
                    }
                }
            }
        }
        Some(out)
    }

    fn in_edges(&self, v: &str) -> Vec<(String, String)> {
        let node = Node::parse(v);
        let (parent, i) = node.parent();
        let mut out = vec![(parent.name(), self.open(i))];
        out.extend((1..=self.n).map(|j| (node.child(j).name(), self.close(j))));
        out
    }

    fn out_edges(&self, v: &str) -> Vec<(String, String)> {
        let node = Node::parse(v);
        let (parent, i) = node.parent();
        let mut out: Vec<(String, String)> = (1..=self.n).map(|j| (node.child(j).name(), self.open(j))).collect();
        out.push((parent.name(), self.close(i)));
        out
    }

    fn language_depth(&self) -> Option<usize> {
        Some(self.radius)
    }
}

/// Tree distance from the basepoint of a node name produced by this family.
pub fn node_radius(name: &str) -> usize {
    Node::parse(name).radius()
}

/// Window on the ball of radius `2 * depth` with back and forward depth
/// `depth`, so the core is the ball of radius `depth`.
pub fn gen_dyck(n: usize, depth: usize) -> Result<Window> {
    gen_dyck_with(n, depth, DEFAULT_VERTEX_CAP)
}

pub fn gen_dyck_with(n: usize, depth: usize, cap: usize) -> Result<Window> {
    if n == 0 {
        return Err(Error::InvalidParameter("N must be at least 1".into()));
    }
    if depth == 0 {
        return Err(Error::InvalidParameter("depth must be at least 1".into()));
    }
    build_window(&DyckFamily { n, radius: 2 * depth }, depth, depth, cap)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_addresses() {
        let p0 = Node::parse("p0");
        assert_eq!(p0.parent().0.name(), "p1");
        assert_eq!(Node::parse("p1").child(1).name(), "p0");
        assert_eq!(Node::parse("p1").child(2).name(), "p1/2");
        assert_eq!(Node::parse("p1/2").parent(), (Node::parse("p1"), 2));
        assert_eq!(node_radius("p2/3/1"), 4);
    }

    #[test]
    fn ball_sizes() {
        // Tree of degree N+1: the ball of radius r has 1 + (N+1)((N^r - 1)/(N-1)) nodes.
        let f = DyckFamily { n: 2, radius: 3 };
        assert_eq!(f.region(1000).unwrap().len(), 1 + 3 + 6 + 12);
        let f = DyckFamily { n: 1, radius: 3 };
        assert_eq!(f.region(1000).unwrap().len(), 7);
    }

    #[test]
    fn core_degrees() {
        let w = gen_dyck(2, 2).unwrap();
        let g = w.graph();
        assert!(g.is_left_resolving());
        assert!(!w.core().is_empty());
        for v in w.core().iter() {
            let opens_in = g.in_edges(v).filter(|e| g.symbol_name(e.label).starts_with('a')).count();
            let closes_in = g.in_edges(v).filter(|e| g.symbol_name(e.label).starts_with('b')).count();
            let opens_out = g.out_edges(v).filter(|e| g.symbol_name(e.label).starts_with('a')).count();
            let closes_out = g.out_edges(v).filter(|e| g.symbol_name(e.label).starts_with('b')).count();
            assert_eq!((opens_in, closes_in, opens_out, closes_out), (1, 2, 2, 1));
            assert!(node_radius(g.vertex_name(v)) <= 2);
        }
    }

    #[test]
    fn cap_and_params() {
        assert!(gen_dyck(0, 2).is_err());
        assert!(gen_dyck(2, 0).is_err());
        assert!(matches!(gen_dyck_with(3, 5, 1000), Err(Error::VertexCap { .. })));
    }
}
