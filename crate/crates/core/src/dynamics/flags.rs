//! Hypothesis checklists for the simplicity and pure infiniteness theorems.

use serde::Serialize;

use crate::dynamics::cofinal::{check_cofinal, ProbePath};
use crate::dynamics::disagreeable::is_space_disagreeable;
use crate::dynamics::repeatable::check_repeatable;
use crate::dynamics::Bounds;
use crate::error::Result;
use crate::verdict::{conjunction, weaker, Scope, Status, Verdict};
use crate::window::Window;

#[derive(Clone, Debug, Serialize)]
pub struct Flag {
    pub hypotheses: Vec<String>,
    pub status: Status,
    pub scope: Scope,
    /// The conclusion that follows once every hypothesis holds; never computed.
    pub implies: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct FlagsReport {
    pub bounds: Bounds,
    pub disagreeable: Verdict<serde_json::Value>,
    pub cofinal: Verdict<serde_json::Value>,
    pub repeatable: Verdict<serde_json::Value>,
    pub simple: Flag,
    pub purely_infinite: Flag,
}

impl FlagsReport {
    /// 0 when both flags are certified, 1 when either is refuted, else 2.
    pub fn exit_code(&self) -> i32 {
        match conjunction(self.simple.status, self.purely_infinite.status) {
            Status::Certified => 0,
            Status::Refuted => 1,
            Status::Inconclusive => 2,
        }
    }
}

fn flag(parts: &[&Verdict<serde_json::Value>], implies: &str) -> Flag {
    Flag {
        hypotheses: parts.iter().map(|v| v.property.clone()).collect(),
        status: parts.iter().fold(Status::Certified, |acc, v| conjunction(acc, v.status)),
        scope: parts.iter().fold(Scope::Exact, |acc, v| weaker(acc, v.scope)),
        implies: implies.into(),
    }
}

pub fn theorem_flags(win: &Window, bounds: &Bounds, probes: &[ProbePath]) -> Result<FlagsReport> {
    let disagreeable = is_space_disagreeable(win, bounds)?.erase();
    let cofinal = check_cofinal(win, bounds, probes)?.erase();
    let repeatable = check_repeatable(win, bounds)?.erase();
    let simple = flag(&[&cofinal, &disagreeable], "C*(E, L, E^{0,-}) is simple");
    let purely_infinite = flag(&[&cofinal, &disagreeable, &repeatable], "C*(E, L, E^{0,-}) is simple and purely infinite");
    Ok(FlagsReport { bounds: *bounds, disagreeable, cofinal, repeatable, simple, purely_infinite })
}
