//! Cayley graphs of finite groups given by multiplication tables.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::LabelledGraph;

/// `table[i][j]` is the product `elements[i] · elements[j]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupTable {
    pub elements: Vec<String>,
    pub table: Vec<Vec<String>>,
}

impl GroupTable {
    pub fn cyclic(n: usize) -> Self {
        let elements: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let table = (0..n)
            .map(|i| (0..n).map(|j| ((i + j) % n).to_string()).collect())
            .collect();
        Self { elements, table }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))
    }

    /// Index form of the table after checking the group axioms.
    fn checked(&self) -> Result<Vec<Vec<usize>>> {
        let n = self.elements.len();
        if n == 0 {
            return Err(Error::NotAGroup("no elements".into()));
        }
        let index: HashMap<&str, usize> = self.elements.iter().enumerate().map(|(i, e)| (e.as_str(), i)).collect();
        if index.len() != n {
            return Err(Error::NotAGroup("repeated element".into()));
        }
        if self.table.len() != n || self.table.iter().any(|r| r.len() != n) {
            return Err(Error::NotAGroup("table is not square over the elements".into()));
        }
        let mul: Vec<Vec<usize>> = self
            .table
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| index.get(x.as_str()).copied().ok_or_else(|| Error::NotAGroup(format!("`{x}` is not an element"))))
                    .collect::<Result<_>>()
            })
            .collect::<Result<_>>()?;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                        return Err(Error::NotAGroup(format!(
                            "associativity fails at ({}, {}, {})",
                            self.elements[a], self.elements[b], self.elements[c]
                        )));
                    }
                }
            }
        }
        let e = (0..n)
            .find(|&e| (0..n).all(|x| mul[e][x] == x && mul[x][e] == x))
            .ok_or_else(|| Error::NotAGroup("no identity".into()))?;
        for x in 0..n {
            if !(0..n).any(|y| mul[x][y] == e && mul[y][x] == e) {
                return Err(Error::NotAGroup(format!("`{}` has no inverse", self.elements[x])));
            }
        }
        Ok(mul)
    }
}

/// Vertices are group elements; `(h, g)` is an edge from h to h·g labelled g.
pub fn gen_cayley(group: &GroupTable, gens: &[&str]) -> Result<LabelledGraph> {
    let mul = group.checked()?;
    if gens.is_empty() {
        return Err(Error::InvalidParameter("generator set is empty".into()));
    }
    if gens.iter().collect::<BTreeSet<_>>().len() != gens.len() {
        return Err(Error::InvalidParameter("generators must be distinct".into()));
    }
    let index: HashMap<&str, usize> = group.elements.iter().enumerate().map(|(i, e)| (e.as_str(), i)).collect();
    let mut edges = Vec::new();
    for g in gens {
        let gi = *index
            .get(g)
            .ok_or_else(|| Error::InvalidParameter(format!("generator `{g}` is not a group element")))?;
        for (h, name) in group.elements.iter().enumerate() {
            edges.push((name.clone(), group.elements[mul[h][gi]].clone(), g.to_string()));
        }
    }
    LabelledGraph::new(group.elements.clone(), None, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z3() {
        let g = gen_cayley(&GroupTable::cyclic(3), &["1", "2"]).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 6);
        assert!(g.validate().left_resolving.pass);
    }

    #[test]
    fn rejects_non_groups() {
        let mut t = GroupTable::cyclic(3);
        t.table[1][1] = "0".into();
        assert!(matches!(gen_cayley(&t, &["1"]), Err(Error::NotAGroup(_))));
        assert!(gen_cayley(&GroupTable::cyclic(3), &[]).is_err());
        assert!(gen_cayley(&GroupTable::cyclic(3), &["1", "1"]).is_err());
        assert!(gen_cayley(&GroupTable::cyclic(3), &["7"]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let t = GroupTable::cyclic(4);
        let text = serde_json::to_string(&t).unwrap();
        assert_eq!(GroupTable::from_json(&text).unwrap(), t);
    }
}
