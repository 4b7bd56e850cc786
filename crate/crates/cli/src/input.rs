//! Building the window a command runs on.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};

use labelspace::graph::{trivial_labelling, DirectedGraph};
use labelspace::presentations::cayley::{gen_cayley, GroupTable};
use labelspace::presentations::dyck::gen_dyck_with;
use labelspace::presentations::even::{gen_even_e1, gen_even_e2};
use labelspace::presentations::oracles::Oracle;
use labelspace::presentations::random::{random_essential_digraph, rng};
use labelspace::presentations::strip::{default_depth, gen_strip_x_with};
use labelspace::window::DEFAULT_VERTEX_CAP;
use labelspace::{load_graph, Window};

pub const VERTEX_CAP_VAR: &str = "LABELSPACE_VERTEX_CAP";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Family {
    Even1,
    Even2,
    Dyck,
    Cayley,
    StripX,
    Trivial,
}

#[derive(Clone, Debug, Args)]
pub struct InputArgs {
    /// Labelled graph JSON file.
    #[arg(long, global = true, conflicts_with = "family")]
    pub graph: Option<PathBuf>,
    /// Built-in presentation.
    #[arg(long, global = true)]
    pub family: Option<Family>,
    /// Dyck: number of bracket pairs. Cayley without --table: order of the cyclic group.
    #[arg(long = "N", global = true)]
    pub n: Option<usize>,
    /// Window depth for dyck and strip_x.
    #[arg(long, global = true)]
    pub depth: Option<usize>,
    /// strip_x width.
    #[arg(long = "W", global = true)]
    pub width: Option<usize>,
    /// Group table JSON for cayley.
    #[arg(long, global = true)]
    pub table: Option<PathBuf>,
    /// Comma separated generators for cayley.
    #[arg(long, global = true, value_delimiter = ',')]
    pub gens: Vec<String>,
    /// Directed graph JSON for the trivial family; without it a random
    /// essential graph is drawn from --seed.
    #[arg(long, global = true)]
    pub digraph: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Vertex bound for random graphs.
    #[arg(long, global = true, default_value_t = 6)]
    pub max_vertices: usize,
}

pub struct Loaded {
    pub window: Window,
    /// How the input was obtained, for the report header.
    pub source: BTreeMap<String, String>,
    /// Oracle matching the family, when there is one.
    pub oracle: Option<Oracle>,
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).map_err(|e| anyhow::anyhow!("cannot read {}: {e}", path.display()))
}

fn vertex_cap() -> anyhow::Result<usize> {
    match std::env::var(VERTEX_CAP_VAR) {
        Ok(v) => v
            .parse()
            .map_err(|_| anyhow::anyhow!("{VERTEX_CAP_VAR} must be a positive integer, got `{v}`")),
        Err(_) => Ok(DEFAULT_VERTEX_CAP),
    }
}

impl InputArgs {
    /// Depth for windowed families when none is given: one more than the
    /// deepest level the command looks at.
    pub fn load(&self, levels: usize) -> anyhow::Result<Loaded> {
        let mut source = BTreeMap::new();
        if let Some(path) = &self.graph {
            source.insert("graph".into(), path.display().to_string());
            let g = load_graph(&read(path)?)?;
            return Ok(Loaded { window: Window::whole(g), source, oracle: None });
        }
        let family = self.family.ok_or_else(|| anyhow::anyhow!("no input: pass --graph FILE or --family NAME"))?;
        let name = family.to_possible_value().expect("no skipped variants").get_name().to_string();
        source.insert("family".into(), name);
        let (window, oracle) = match family {
            Family::Even1 => (Window::whole(gen_even_e1()), Some(Oracle::Even)),
            Family::Even2 => (Window::whole(gen_even_e2()), Some(Oracle::Even)),
            Family::Dyck => {
                let n = self.n.unwrap_or(2);
                let depth = self.depth.unwrap_or(levels + 1);
                source.insert("N".into(), n.to_string());
                source.insert("depth".into(), depth.to_string());
                (gen_dyck_with(n, depth, vertex_cap()?)?, Some(Oracle::Dyck(n)))
            }
            Family::StripX => {
                let w = self.width.unwrap_or(8);
                let depth = self.depth.unwrap_or_else(|| default_depth(w).max(levels + 1));
                source.insert("W".into(), w.to_string());
                source.insert("depth".into(), depth.to_string());
                (gen_strip_x_with(w, depth, vertex_cap()?)?, Some(Oracle::X))
            }
            Family::Cayley => {
                let group = match (&self.table, self.n) {
                    (Some(path), _) => {
                        source.insert("table".into(), path.display().to_string());
                        GroupTable::from_json(&read(path)?)?
                    }
                    (None, Some(n)) => {
                        source.insert("N".into(), n.to_string());
                        GroupTable::cyclic(n)
                    }
                    (None, None) => anyhow::bail!("cayley needs --table FILE or --N ORDER"),
                };
                if self.gens.is_empty() {
                    anyhow::bail!("cayley needs --gens, e.g. --gens 1,2");
                }
                source.insert("gens".into(), self.gens.join(","));
                let gens: Vec<&str> = self.gens.iter().map(String::as_str).collect();
                (Window::whole(gen_cayley(&group, &gens)?), None)
            }
            Family::Trivial => {
                let dg: DirectedGraph = match &self.digraph {
                    Some(path) => {
                        source.insert("digraph".into(), path.display().to_string());
                        serde_json::from_str(&read(path)?)?
                    }
                    None => {
                        source.insert("seed".into(), self.seed.to_string());
                        source.insert("max_vertices".into(), self.max_vertices.to_string());
                        random_essential_digraph(&mut rng(self.seed), self.max_vertices)
                    }
                };
                (Window::whole(trivial_labelling(&dg)?), None)
            }
        };
        Ok(Loaded { window, source, oracle })
    }
}
