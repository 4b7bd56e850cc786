use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed document: {0}")]
    Malformed(String),
    #[error("empty graph")]
    EmptyGraph,
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("edge {index} has dangling endpoint `{vertex}`")]
    DanglingEndpoint { index: usize, vertex: String },
    #[error("edge {index} uses label `{label}` missing from the declared alphabet")]
    UnknownLabel { index: usize, label: String },
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("symbol `{0}` is not in the alphabet")]
    ForeignSymbol(String),
    #[error("empty word")]
    EmptyWord,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("{what} needs depth {needed} but the window only has {available}; rebuild with depth >= {needed}")]
    DepthInsufficient {
        what: String,
        needed: usize,
        available: usize,
    },
    #[error("window expansion reached the vertex cap of {cap}; raise the cap or lower the depth")]
    VertexCap { cap: usize },
    #[error("graph is not left-resolving: vertex `{vertex}` receives two edges labelled `{label}`")]
    NotLeftResolving { vertex: String, label: String },
    #[error("lattice closure exceeded {cap} elements (partial size {partial})")]
    ClosureBudget { cap: usize, partial: usize },
    #[error("vertex set is not a member of the level-{level} lattice")]
    NotAMember { level: usize },
    #[error("matrix entry depends on the class representative at column `{class}`")]
    IllDefined { class: String },
    #[error("table is not a group: {0}")]
    NotAGroup(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
