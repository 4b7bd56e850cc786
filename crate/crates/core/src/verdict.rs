//! Outcomes of property checks.

use std::collections::BTreeMap;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Certified,
    Refuted,
    Inconclusive,
}

/// Whether a verdict holds outright or only within the searched bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    Exact,
    UpToBounds,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict<W> {
    pub property: String,
    pub status: Status,
    pub scope: Scope,
    pub bounds: BTreeMap<String, usize>,
    pub witness: Option<W>,
    pub notes: Vec<String>,
}

impl<W> Verdict<W> {
    pub fn new(property: &str, status: Status, scope: Scope) -> Self {
        Self {
            property: property.to_string(),
            status,
            scope,
            bounds: BTreeMap::new(),
            witness: None,
            notes: Vec::new(),
        }
    }

    pub fn with_witness(mut self, w: W) -> Self {
        self.witness = Some(w);
        self
    }

    pub fn with_bound(mut self, name: &str, value: usize) -> Self {
        self.bounds.insert(name.to_string(), value);
        self
    }

    pub fn with_bounds<I: IntoIterator<Item = (String, usize)>>(mut self, bounds: I) -> Self {
        self.bounds.extend(bounds);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn is_certified(&self) -> bool {
        self.status == Status::Certified
    }

    pub fn is_refuted(&self) -> bool {
        self.status == Status::Refuted
    }

    /// Process exit code: 0 certified, 1 refuted, 2 inconclusive.
    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Certified => 0,
            Status::Refuted => 1,
            Status::Inconclusive => 2,
        }
    }

    pub fn map_witness<V>(self, f: impl FnOnce(W) -> V) -> Verdict<V> {
        Verdict {
            property: self.property,
            status: self.status,
            scope: self.scope,
            bounds: self.bounds,
            witness: self.witness.map(f),
            notes: self.notes,
        }
    }
}

impl<W: Serialize> Verdict<W> {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("verdict serializes")
    }

    pub fn erase(self) -> Verdict<serde_json::Value> {
        self.map_witness(|w| serde_json::to_value(w).expect("witness serializes"))
    }
}

/// Combines two statuses conjunctively: any refutation wins, then any
/// inconclusive, otherwise certified.
pub fn conjunction(a: Status, b: Status) -> Status {
    match (a, b) {
        (Status::Refuted, _) | (_, Status::Refuted) => Status::Refuted,
        (Status::Inconclusive, _) | (_, Status::Inconclusive) => Status::Inconclusive,
        _ => Status::Certified,
    }
}

pub fn weaker(a: Scope, b: Scope) -> Scope {
    if a == Scope::Exact && b == Scope::Exact {
        Scope::Exact
    } else {
        Scope::UpToBounds
    }
}
