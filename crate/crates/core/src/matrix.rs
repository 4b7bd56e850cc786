//! Symbolic matrix systems over the class partitions.
//!
//! Rows are Ω_ℓ classes and columns are Ω_{ℓ+1} classes. `I(i, j) = 1` when
//! column class j refines row class i. `M(i, j)` is the multiset of labels a
//! for which a member of column class j has an a-predecessor in row class i;
//! on a left-resolving graph this does not depend on the member chosen, which
//! is checked on every core member.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::generalized::Hierarchy;
use crate::graph::{LabelledGraph, Symbol};
use crate::verdict::{Scope, Status, Verdict};
use crate::window::Window;

pub type FormalSum = Vec<Symbol>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicMatrixPair {
    pub level: usize,
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub i: Vec<Vec<u8>>,
    pub m: Vec<Vec<FormalSum>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MatrixDocument {
    pub level: usize,
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    #[serde(rename = "I")]
    pub i: Vec<Vec<u8>>,
    #[serde(rename = "M")]
    pub m: Vec<Vec<Vec<String>>>,
}

impl SymbolicMatrixPair {
    pub fn to_document(&self, g: &LabelledGraph) -> MatrixDocument {
        MatrixDocument {
            level: self.level,
            rows: self.rows.clone(),
            cols: self.cols.clone(),
            i: self.i.clone(),
            m: self
                .m
                .iter()
                .map(|row| row.iter().map(|e| e.iter().map(|&s| g.symbol_name(s).to_string()).collect()).collect())
                .collect(),
        }
    }

    /// A(i, a, j) = 1 exactly when a occurs in M(i, j); listed as sorted triples.
    pub fn transitions(&self) -> Vec<(usize, Symbol, usize)> {
        let mut out = Vec::new();
        for (r, row) in self.m.iter().enumerate() {
            for (c, entry) in row.iter().enumerate() {
                let mut labels = entry.clone();
                labels.dedup();
                out.extend(labels.into_iter().map(|a| (r, a, c)));
            }
        }
        out.sort();
        out
    }
}

pub fn require_left_resolving(g: &LabelledGraph) -> Result<()> {
    match g.validate().left_resolving.witness {
        Some(w) => Err(Error::NotLeftResolving { vertex: w.vertex, label: w.label }),
        None => Ok(()),
    }
}

/// The pair at level ℓ; the hierarchy must reach ℓ + 1.
pub fn matrix_pair(h: &Hierarchy, level: usize) -> Result<SymbolicMatrixPair> {
    let g = h.window().graph();
    require_left_resolving(g)?;
    if level == 0 || level + 1 > h.max_level() {
        return Err(Error::DepthInsufficient { what: "matrix pair".into(), needed: level + 1, available: h.max_level() });
    }
    let rows = h.partition(level);
    let cols = h.partition(level + 1);
    let refinement = h.refine(level)?;
    let mut i = vec![vec![0u8; cols.len()]; rows.len()];
    for (j, &p) in refinement.parent.iter().enumerate() {
        i[p][j] = 1;
    }
    let mut m = vec![vec![Vec::new(); cols.len()]; rows.len()];
    for (j, class) in cols.classes.iter().enumerate() {
        let mut reference: Option<Vec<(usize, Symbol)>> = None;
        for w in class.members.iter() {
            let mut entries = Vec::new();
            for e in g.in_edges(w) {
                let r = h.class_index(level, e.src).ok_or_else(|| Error::DepthInsufficient {
                    what: format!("predecessor class of `{}`", g.vertex_name(w)),
                    needed: level + 2,
                    available: h.window().back_depth().unwrap_or(0),
                })?;
                entries.push((r, e.label));
            }
            entries.sort();
            match &reference {
                None => reference = Some(entries),
                Some(r) if *r != entries => return Err(Error::IllDefined { class: class.name.clone() }),
                _ => {}
            }
        }
        for (r, a) in reference.unwrap_or_default() {
            m[r][j].push(a);
        }
    }
    Ok(SymbolicMatrixPair {
        level,
        rows: rows.classes.iter().map(|c| c.name.clone()).collect(),
        cols: cols.classes.iter().map(|c| c.name.clone()).collect(),
        i,
        m,
    })
}

pub fn matrix_system(win: &Window, level: usize) -> Result<SymbolicMatrixPair> {
    matrix_pair(&Hierarchy::build(win, level + 1)?, level)
}

pub fn i_matrix(win: &Window, level: usize) -> Result<Vec<Vec<u8>>> {
    Ok(matrix_system(win, level)?.i)
}

pub fn m_matrix(win: &Window, level: usize) -> Result<Vec<Vec<FormalSum>>> {
    Ok(matrix_system(win, level)?.m)
}

pub fn lambda_transitions(win: &Window, level: usize) -> Result<Vec<(usize, Symbol, usize)>> {
    Ok(matrix_system(win, level)?.transitions())
}

/// Product of a formal-sum matrix with a 0/1 matrix.
fn sum_times_01(m: &[Vec<FormalSum>], i: &[Vec<u8>]) -> Vec<Vec<FormalSum>> {
    let cols = i.first().map_or(0, |r| r.len());
    m.iter()
        .map(|row| {
            (0..cols)
                .map(|k| {
                    let mut acc: FormalSum = row
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| i[*j][k] == 1)
                        .flat_map(|(_, e)| e.iter().copied())
                        .collect();
                    acc.sort_unstable();
                    acc
                })
                .collect()
        })
        .collect()
}

/// Product of a 0/1 matrix with a formal-sum matrix.
fn o1_times_sum(i: &[Vec<u8>], m: &[Vec<FormalSum>]) -> Vec<Vec<FormalSum>> {
    let cols = m.first().map_or(0, |r| r.len());
    i.iter()
        .map(|row| {
            (0..cols)
                .map(|k| {
                    let mut acc: FormalSum = row
                        .iter()
                        .enumerate()
                        .filter(|(_, &x)| x == 1)
                        .flat_map(|(j, _)| m[j][k].iter().copied())
                        .collect();
                    acc.sort_unstable();
                    acc
                })
                .collect()
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct CommutationWitness {
    pub row: String,
    pub col: String,
    pub lhs: Vec<String>,
    pub rhs: Vec<String>,
}

/// Checks M_{ℓ,ℓ+1} I_{ℓ+1,ℓ+2} = I_{ℓ,ℓ+1} M_{ℓ+1,ℓ+2} entrywise.
pub fn commutation_in(h: &Hierarchy, level: usize) -> Result<Verdict<CommutationWitness>> {
    let g = h.window().graph();
    let lower = matrix_pair(h, level)?;
    let upper = matrix_pair(h, level + 1)?;
    let lhs = sum_times_01(&lower.m, &upper.i);
    let rhs = o1_times_sum(&lower.i, &upper.m);
    let scope = if h.window().is_finite() { Scope::Exact } else { Scope::UpToBounds };
    let base = |s| {
        Verdict::new("commutation", s, scope)
            .with_bound("level", level)
            .with_bounds(h.window().describe())
    };
    for (r, (lrow, rrow)) in lhs.iter().zip(&rhs).enumerate() {
        for (c, (a, b)) in lrow.iter().zip(rrow).enumerate() {
            if a != b {
                let names = |x: &FormalSum| x.iter().map(|&s| g.symbol_name(s).to_string()).collect();
                return Ok(base(Status::Refuted).with_witness(CommutationWitness {
                    row: lower.rows[r].clone(),
                    col: upper.cols[c].clone(),
                    lhs: names(a),
                    rhs: names(b),
                }));
            }
        }
    }
    Ok(base(Status::Certified))
}

pub fn verify_commutation(win: &Window, level: usize) -> Result<Verdict<CommutationWitness>> {
    commutation_in(&Hierarchy::build(win, level + 2)?, level)
}

/// Per-row multiset of all labels in the row, used for consistency checks.
pub fn row_labels(pair: &SymbolicMatrixPair) -> Vec<BTreeMap<Symbol, usize>> {
    pair.m
        .iter()
        .map(|row| {
            let mut counts = BTreeMap::new();
            for a in row.iter().flatten() {
                *counts.entry(*a).or_insert(0) += 1;
            }
            counts
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::dyck::gen_dyck;
    use crate::presentations::even::{gen_even_e1, gen_even_e2};

    fn names(g: &LabelledGraph, e: &FormalSum) -> Vec<String> {
        e.iter().map(|&s| g.symbol_name(s).to_string()).collect()
    }

    #[test]
    fn single_loop() {
        let g = LabelledGraph::new(vec!["x".into()], None, vec![("x".into(), "x".into(), "a".into())]).unwrap();
        let w = Window::whole(g);
        for l in 1..=3 {
            let p = matrix_system(&w, l).unwrap();
            assert_eq!(p.i, vec![vec![1]]);
            assert_eq!(names(w.graph(), &p.m[0][0]), ["a"]);
            assert_eq!(p.transitions(), vec![(0, 0, 0)]);
            assert!(verify_commutation(&w, l).unwrap().is_certified());
        }
    }

    #[test]
    fn e2_level_one() {
        let w = Window::whole(gen_even_e2());
        let p = matrix_system(&w, 1).unwrap();
        assert_eq!(p.rows, ["u", "v"]);
        assert_eq!(p.cols, ["u", "v", "w"]);
        assert_eq!(p.i, vec![vec![1, 0, 1], vec![0, 1, 0]]);
    }

    #[test]
    fn e1_transitions() {
        let w = Window::whole(gen_even_e1());
        let g = w.graph();
        let t = lambda_transitions(&w, 1).unwrap();
        let zero = g.symbol("0").unwrap();
        let one = g.symbol("1").unwrap();
        assert_eq!(t, vec![(0, zero, 1), (0, one, 0), (1, zero, 0)]);
        for l in 1..=3 {
            assert!(verify_commutation(&w, l).unwrap().is_certified());
        }
    }

    #[test]
    fn dyck_two_level_one() {
        let w = gen_dyck(2, 3).unwrap();
        let g = w.graph();
        let p = matrix_system(&w, 1).unwrap();
        assert_eq!((p.rows.len(), p.cols.len()), (2, 4));
        for (r, counts) in row_labels(&p).iter().enumerate() {
            let labels: Vec<&str> = counts.keys().map(|&s| g.symbol_name(s)).collect();
            let close = format!("b{}", r + 1);
            assert_eq!(labels, ["a1", "a2", close.as_str()]);
        }
        let t = p.transitions();
        for (r, row) in p.m.iter().enumerate() {
            for (c, e) in row.iter().enumerate() {
                for a in 0..g.alphabet().len() as Symbol {
                    assert_eq!(t.contains(&(r, a, c)), e.contains(&a));
                }
            }
        }
    }

    #[test]
    fn rejects_non_left_resolving() {
        let g = LabelledGraph::new(
            vec!["x".into(), "y".into()],
            None,
            vec![("x".into(), "y".into(), "a".into()), ("y".into(), "y".into(), "a".into()), ("y".into(), "x".into(), "b".into())],
        )
        .unwrap();
        assert!(matches!(matrix_system(&Window::whole(g), 1), Err(Error::NotLeftResolving { .. })));
    }
}
