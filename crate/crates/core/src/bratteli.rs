//! Bratteli data of the AF core.
//!
//! The vertex for (k, ℓ, [v]_ℓ) carries n(k, [v]_ℓ), the number of distinct
//! words of length exactly k received by the class. Horizontal edges follow
//! the refinement Ω_ℓ → Ω_{ℓ+1} with multiplicity 1. The diagonal edge from
//! (k, ℓ, [v]) to (k+1, ℓ+1, [w]) has multiplicity equal to the number of
//! labels a with [w]_{ℓ+1} ⊆ r([v]_ℓ, a).

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::generalized::Hierarchy;
use crate::par;
use crate::window::Window;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BratteliLevel {
    pub k: usize,
    pub level: usize,
    pub classes: Vec<String>,
    pub sizes: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Inclusion {
    pub from: (usize, usize),
    pub to: (usize, usize),
    /// (source class, target class, multiplicity), zero multiplicities omitted.
    pub edges: Vec<(String, String, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BratteliDiagram {
    pub k_max: usize,
    pub ell_max: usize,
    pub levels: Vec<BratteliLevel>,
    pub horizontal: Vec<Inclusion>,
    pub diagonal: Vec<Inclusion>,
}

/// n(k, class) for every class at level ℓ.
fn sizes(h: &Hierarchy, k: usize, level: usize) -> Vec<usize> {
    h.signatures(level)
        .iter()
        .map(|sig| sig.iter().filter(|w| w.len() == k).count())
        .collect()
}

pub fn af_summand_dim(win: &Window, k: usize, class: usize, level: usize) -> Result<usize> {
    if k == 0 || k > level {
        return Err(Error::InvalidParameter(format!("need 1 <= k <= level, got k={k}, level={level}")));
    }
    let h = Hierarchy::build(win, level)?;
    if class >= h.partition(level).len() {
        return Err(Error::InvalidParameter(format!("no class {class} at level {level}")));
    }
    Ok(h.signature(level, class).iter().filter(|w| w.len() == k).count())
}

/// Diagonal multiplicities from level ℓ classes (rows) to level ℓ+1 classes (cols).
pub fn diagonal_multiplicities(h: &Hierarchy, level: usize) -> Result<Vec<Vec<usize>>> {
    let g = h.window().graph();
    let rows = h.partition(level).len();
    let cols = &h.partition(level + 1).classes;
    let per_col: Vec<Result<Vec<usize>>> = par::map(cols, |class| {
        // For each member, the set of (row class, label) pairs it receives.
        let mut common: Option<BTreeSet<(usize, u32)>> = None;
        for w in class.members.iter() {
            let mut here = BTreeSet::new();
            for e in g.in_edges(w) {
                let r = h.class_index(level, e.src).ok_or_else(|| Error::DepthInsufficient {
                    what: format!("predecessor class of `{}`", g.vertex_name(w)),
                    needed: level + 2,
                    available: h.window().back_depth().unwrap_or(0),
                })?;
                here.insert((r, e.label));
            }
            common = Some(match common {
                None => here,
                Some(c) => c.intersection(&here).copied().collect(),
            });
        }
        let mut col = vec![0usize; rows];
        for (r, _) in common.unwrap_or_default() {
            col[r] += 1;
        }
        Ok(col)
    });
    let per_col: Vec<Vec<usize>> = per_col.into_iter().collect::<Result<_>>()?;
    Ok((0..rows).map(|r| per_col.iter().map(|c| c[r]).collect()).collect())
}

pub fn bratteli_in(h: &Hierarchy, k_max: usize, ell_max: usize) -> Result<BratteliDiagram> {
    if k_max == 0 || k_max > ell_max {
        return Err(Error::InvalidParameter(format!("need 1 <= k_max <= ell_max, got {k_max} and {ell_max}")));
    }
    if ell_max > h.max_level() {
        return Err(Error::DepthInsufficient { what: "Bratteli diagram".into(), needed: ell_max, available: h.max_level() });
    }
    let names = |l: usize| -> Vec<String> { h.partition(l).classes.iter().map(|c| c.name.clone()).collect() };
    let mut levels = Vec::new();
    for l in 1..=ell_max {
        for k in 1..=k_max.min(l) {
            levels.push(BratteliLevel { k, level: l, classes: names(l), sizes: sizes(h, k, l) });
        }
    }
    let mut horizontal = Vec::new();
    let mut diagonal = Vec::new();
    for l in 1..ell_max {
        let refinement = h.refine(l)?;
        let (from, to) = (names(l), names(l + 1));
        let edges: Vec<(String, String, usize)> = refinement
            .parent
            .iter()
            .enumerate()
            .map(|(j, &i)| (from[i].clone(), to[j].clone(), 1))
            .collect();
        let mut sorted = edges.clone();
        sorted.sort();
        for k in 1..=k_max.min(l) {
            horizontal.push(Inclusion { from: (k, l), to: (k, l + 1), edges: sorted.clone() });
        }
        let mult = diagonal_multiplicities(h, l)?;
        let mut dedges = Vec::new();
        for (i, row) in mult.iter().enumerate() {
            for (j, &m) in row.iter().enumerate() {
                if m > 0 {
                    dedges.push((from[i].clone(), to[j].clone(), m));
                }
            }
        }
        for k in 1..=k_max.min(l) {
            if k < k_max {
                diagonal.push(Inclusion { from: (k, l), to: (k + 1, l + 1), edges: dedges.clone() });
            }
        }
    }
    Ok(BratteliDiagram { k_max, ell_max, levels, horizontal, diagonal })
}

pub fn bratteli_diagram(win: &Window, k_max: usize, ell_max: usize) -> Result<BratteliDiagram> {
    bratteli_in(&Hierarchy::build(win, ell_max.max(1))?, k_max, ell_max)
}

impl BratteliDiagram {
    pub fn level(&self, k: usize, level: usize) -> Option<&BratteliLevel> {
        self.levels.iter().find(|l| l.k == k && l.level == level)
    }

    pub fn to_dot(&self) -> String {
        let node = |k: usize, l: usize, c: &str| format!("\"{k},{l}:{c}\"");
        let mut s = String::from("digraph bratteli {\n  rankdir=TB;\n");
        for lv in &self.levels {
            let _ = write!(s, "  {{ rank=same;");
            for (c, n) in lv.classes.iter().zip(&lv.sizes) {
                let _ = write!(s, " {} [label=\"{}\\n{}\"];", node(lv.k, lv.level, c), c, n);
            }
            s.push_str(" }\n");
        }
        for inc in self.horizontal.iter().chain(&self.diagonal) {
            for (a, b, m) in &inc.edges {
                let _ = writeln!(
                    s,
                    "  {} -> {} [label=\"{}\"];",
                    node(inc.from.0, inc.from.1, a),
                    node(inc.to.0, inc.to.1, b),
                    m
                );
            }
        }
        s.push_str("}\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::LabelledGraph;
    use crate::presentations::even::gen_even_e1;

    #[test]
    fn e1_values() {
        let w = Window::whole(gen_even_e1());
        assert_eq!(af_summand_dim(&w, 1, 0, 1).unwrap(), 2);
        assert_eq!(af_summand_dim(&w, 1, 1, 1).unwrap(), 1);
        assert_eq!(af_summand_dim(&w, 2, 0, 2).unwrap(), 3);
        assert_eq!(af_summand_dim(&w, 2, 1, 2).unwrap(), 2);
        assert!(af_summand_dim(&w, 3, 0, 2).is_err());
        let d = bratteli_diagram(&w, 2, 2).unwrap();
        assert_eq!(d.diagonal.len(), 1);
        assert_eq!(
            d.diagonal[0].edges,
            vec![("u".into(), "u".into(), 1), ("u".into(), "v".into(), 1), ("v".into(), "u".into(), 1)]
        );
    }

    #[test]
    fn single_loop_constant() {
        let g = LabelledGraph::new(vec!["x".into()], None, vec![("x".into(), "x".into(), "a".into())]).unwrap();
        let d = bratteli_diagram(&Window::whole(g), 3, 3).unwrap();
        assert!(d.levels.iter().all(|l| l.sizes == vec![1]));
        assert!(d.horizontal.iter().chain(&d.diagonal).all(|i| i.edges.iter().all(|e| e.2 == 1)));
        assert!(d.to_dot().contains("->"));
    }
}
