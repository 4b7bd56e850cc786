//! Condition (L): every cycle has an exit.

use serde::Serialize;

use crate::dynamics::disagreeable::is_space_disagreeable;
use crate::dynamics::Bounds;
use crate::error::Result;
use crate::graph::{trivial_labelling, DirectedGraph};
use crate::verdict::{Scope, Status, Verdict};
use crate::window::Window;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExitlessCycle {
    pub cycle: Vec<String>,
}

/// Refuted exactly when some cycle runs through vertices of out-degree 1 only.
pub fn check_condition_l(g: &DirectedGraph) -> Verdict<ExitlessCycle> {
    let n = g.vertices.len();
    let index = |name: &str| g.vertices.iter().position(|v| v == name).expect("edge endpoint is a vertex");
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (s, d) in &g.edges {
        succ[index(s)].push(index(d));
    }
    // Vertices of out-degree 1 form a functional graph; look for a cycle in it.
    let next = |v: usize| (succ[v].len() == 1).then(|| succ[v][0]);
    let mut state = vec![0u8; n];
    for start in 0..n {
        let mut path: Vec<usize> = Vec::new();
        let mut v = start;
        loop {
            if state[v] == 2 {
                break;
            }
            if state[v] == 1 {
                let from = path.iter().position(|&x| x == v).expect("on current path");
                let cycle = path[from..].iter().map(|&i| g.vertices[i].clone()).collect();
                return Verdict::new("condition_l", Status::Refuted, Scope::Exact)
                    .with_witness(ExitlessCycle { cycle });
            }
            state[v] = 1;
            path.push(v);
            match next(v) {
                Some(w) => v = w,
                None => break,
            }
        }
        for &p in &path {
            state[p] = 2;
        }
    }
    Verdict::new("condition_l", Status::Certified, Scope::Exact)
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceReport {
    pub condition_l: Status,
    pub disagreeable: Status,
}

/// Compares condition (L) with disagreeability of the trivially labelled
/// graph. Levels up to the vertex count are examined, which covers the
/// period of any exitless cycle.
pub fn condition_l_equivalence_test(g: &DirectedGraph, bounds: &Bounds) -> Result<Verdict<EquivalenceReport>> {
    let lhs = check_condition_l(g);
    let labelled = trivial_labelling(g)?;
    let ell_max = bounds.ell_max.max(g.vertices.len());
    let rhs = is_space_disagreeable(&Window::whole(labelled), &Bounds { ell_max, ..*bounds })?;
    let agree = rhs.status != Status::Inconclusive && lhs.status == rhs.status;
    let status = if agree { Status::Certified } else { Status::Refuted };
    Ok(Verdict::new("condition_l_equivalence", status, Scope::Exact)
        .with_bound("ell_max", ell_max)
        .with_witness(EquivalenceReport { condition_l: lhs.status, disagreeable: rhs.status }))
}
