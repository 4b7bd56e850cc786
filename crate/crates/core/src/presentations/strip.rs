//! The strip presentation: vertices on a line, `b` steps right, `c` steps
//! left, and a single `a` loop at the origin.

use crate::error::{Error, Result};
use crate::window::{build_window, Family, Window, DEFAULT_VERTEX_CAP};

#[derive(Clone, Copy, Debug)]
pub struct StripFamily {
    pub width: i64,
}

pub fn vertex_name(n: i64) -> String {
    format!("v{n}")
}

fn index(v: &str) -> i64 {
    v[1..].parse().expect("strip vertex name")
}

impl Family for StripFamily {
    fn tag(&self) -> String {
        format!("strip_x(W={})", self.width)
    }

    fn alphabet(&self) -> Vec<String> {
        vec!["a".into(), "b".into(), "c".into()]
    }

    fn region(&self, cap: usize) -> Option<Vec<String>> {
        let count = 2 * self.width as usize + 1;
        (count <= cap).then(|| (-self.width..=self.width).map(vertex_name).collect())
    }

    fn in_edges(&self, v: &str) -> Vec<(String, String)> {
        let n = index(v);
        let mut out = vec![(vertex_name(n - 1), "b".to_string()), (vertex_name(n + 1), "c".to_string())];
        if n == 0 {
            out.push((vertex_name(0), "a".to_string()));
        }
        out
    }

    fn out_edges(&self, v: &str) -> Vec<(String, String)> {
        let n = index(v);
        let mut out = vec![(vertex_name(n + 1), "b".to_string()), (vertex_name(n - 1), "c".to_string())];
        if n == 0 {
            out.push((vertex_name(0), "a".to_string()));
        }
        out
    }

    fn language_depth(&self) -> Option<usize> {
        Some(self.width as usize)
    }
}

/// Default depth for width `w`: large enough that every core vertex is
/// separated from the rest at some level the window can resolve.
pub fn default_depth(width: usize) -> usize {
    (width + 2) / 2
}

pub fn gen_strip_x(width: usize) -> Result<Window> {
    gen_strip_x_with(width, default_depth(width), DEFAULT_VERTEX_CAP)
}

pub fn gen_strip_x_with(width: usize, depth: usize, cap: usize) -> Result<Window> {
    if width < 2 {
        return Err(Error::InvalidParameter("strip width must be at least 2".into()));
    }
    build_window(&StripFamily { width: width as i64 }, depth, depth, cap)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn width_six() {
        let w = build_window(&StripFamily { width: 6 }, 2, 2, 100).unwrap();
        assert_eq!(w.graph().vertex_count(), 13);
        assert_eq!(w.graph().edge_count(), 25);
        let mut core: Vec<i64> = w.core().iter().map(|v| index(w.graph().vertex_name(v))).collect();
        core.sort();
        assert_eq!(core, (-4..=4).collect::<Vec<_>>());
        assert!(w.graph().is_left_resolving());
        assert!(gen_strip_x(1).is_err());
    }
}
