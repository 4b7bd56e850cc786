//! Two left-resolving presentations of the even shift.

use crate::graph::LabelledGraph;

fn build(vertices: &[&str], edges: &[(&str, &str, &str)]) -> LabelledGraph {
    LabelledGraph::new(
        vertices.iter().map(|s| s.to_string()).collect(),
        None,
        edges
            .iter()
            .map(|(a, b, l)| (a.to_string(), b.to_string(), l.to_string()))
            .collect(),
    )
    .expect("built-in graph is well formed")
}

/// u→u:1, u→v:0, v→u:0.
pub fn gen_even_e1() -> LabelledGraph {
    build(&["u", "v"], &[("u", "u", "1"), ("u", "v", "0"), ("v", "u", "0")])
}

/// The first presentation plus a vertex w with u→w:1 and w→w:0.
pub fn gen_even_e2() -> LabelledGraph {
    build(
        &["u", "v", "w"],
        &[("u", "u", "1"), ("u", "v", "0"), ("v", "u", "0"), ("u", "w", "1"), ("w", "w", "0")],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes() {
        for (g, edges) in [(gen_even_e1(), 3), (gen_even_e2(), 5)] {
            assert_eq!(g.edge_count(), edges);
            let r = g.validate();
            assert!(r.essential.pass && r.left_resolving.pass && r.onto.pass);
        }
    }
}
