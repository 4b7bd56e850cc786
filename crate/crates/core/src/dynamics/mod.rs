//! Bounded verifiers for disagreeability, cofinality, repeatable paths,
//! condition (L) and sofic stabilization.

pub mod cofinal;
pub mod condition_l;
pub mod disagreeable;
pub mod flags;
pub mod repeatable;
pub mod sofic;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::window::Window;

/// Search limits shared by the verifiers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Bounds {
    /// Highest class level examined.
    pub ell_max: usize,
    /// Number of witness lengths required, and the largest prefix length N
    /// tried against a probe path.
    pub n_max: usize,
    /// Longest word enumerated when searching for covers or witnesses.
    pub len_max: usize,
    /// Length of the finite prefixes standing in for infinite paths.
    pub prefix_len: usize,
    /// Highest level R at which a target class is resolved.
    pub r_max: usize,
    /// Largest number of covering words.
    pub m_max: usize,
    /// Longest δα in a repeatable-path search.
    pub word_len_max: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Self { ell_max: 4, n_max: 6, len_max: 12, prefix_len: 6, r_max: 6, m_max: 8, word_len_max: 6 }
    }
}

impl Bounds {
    pub fn entries(&self) -> Vec<(String, usize)> {
        vec![
            ("ell_max".into(), self.ell_max),
            ("n_max".into(), self.n_max),
            ("len_max".into(), self.len_max),
            ("prefix_len".into(), self.prefix_len),
            ("r_max".into(), self.r_max),
            ("m_max".into(), self.m_max),
            ("word_len_max".into(), self.word_len_max),
        ]
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in self.entries() {
            if v == 0 {
                return Err(Error::InvalidParameter(format!("{name} must be positive")));
            }
        }
        Ok(())
    }
}

/// Dynamical checks assume no sinks or sources on finite graphs.
pub fn require_essential(win: &Window) -> Result<()> {
    if win.is_finite() {
        let report = win.graph().validate();
        if !report.essential.pass {
            return Err(Error::InvalidParameter(format!(
                "graph is not essential; offending vertices: {}",
                report.essential.witness.join(", ")
            )));
        }
    }
    Ok(())
}
