//! Connections from classes to repeatable words.
//!
//! α is repeatable at w from level L on when [w]_ℓ ⊆ r([w]_ℓ, α) for every
//! ℓ ≥ L. The search tries α in shortlex order, keeps the classes at the top
//! level for which the inclusion holds, then looks for the shortest δ taking
//! the starting class into one of them.

use std::ops::RangeInclusive;

use serde::Serialize;

use crate::dynamics::{require_essential, Bounds};
use crate::error::{Error, Result};
use crate::generalized::Hierarchy;
use crate::graph::{Symbol, VertexId, VertexSet};
use crate::language::{back_step, is_in_language, relative_range, words_from, Word};
use crate::par;
use crate::verdict::{Scope, Status, Verdict};
use crate::window::Window;

const ALPHA_CAP: usize = 1 << 12;
const POWERS: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepeatableCertificate {
    pub class: String,
    pub level: usize,
    pub delta: Vec<String>,
    pub alpha: Vec<String>,
    pub w: String,
    /// Lowest level of the run of levels, ending at the top, where the inclusion holds.
    pub from_level: usize,
    pub to_level: usize,
    /// Whether α^i, then δα^i, is in the language for i = 1..=4.
    pub alpha_powers: Vec<bool>,
    pub delta_alpha_powers: Vec<bool>,
}

/// [w]_ℓ ⊆ r([w]_ℓ, α), tested at every member whose in-paths of length
/// ℓ + |α| are complete. `raw` is the class id at level ℓ.
fn inclusion_holds(h: &Hierarchy, level: usize, raw: u32, alpha: &[Symbol]) -> bool {
    let win = h.window();
    let g = win.graph();
    let mut probed = false;
    for p in 0..g.vertex_count() as VertexId {
        if !win.exact_in(p, level + alpha.len()) || h.raw_id(level, p) != raw {
            continue;
        }
        probed = true;
        let sources = alpha.iter().rev().fold(VertexSet::singleton(p), |acc, &s| back_step(g, &acc, s));
        if !sources.iter().any(|s| win.exact_in(s, level) && h.raw_id(level, s) == raw) {
            return false;
        }
    }
    probed
}

/// Checks the inclusion for the class of `w` at each level in `levels`.
pub fn validate_repeatable(h: &Hierarchy, w: VertexId, alpha: &[Symbol], levels: RangeInclusive<usize>) -> bool {
    !alpha.is_empty() && levels.into_iter().all(|l| inclusion_holds(h, l, h.raw_id(l, w), alpha))
}

/// Re-derives a certificate: w ∈ r([v]_m, δα) and the inclusion on its level range.
pub fn validate_certificate(h: &Hierarchy, cert: &RepeatableCertificate) -> Result<bool> {
    let g = h.window().graph();
    let class = h
        .partition(cert.level)
        .find(&cert.class)
        .ok_or_else(|| Error::InvalidParameter(format!("no class `{}`", cert.class)))?;
    let names = |v: &[String]| v.iter().map(|s| g.symbol(s)).collect::<Result<Vec<_>>>();
    let (delta, alpha) = (names(&cert.delta)?, names(&cert.alpha)?);
    let w = g.vertex(&cert.w)?;
    let members = &h.partition(cert.level).classes[class].members;
    let path: Vec<Symbol> = delta.iter().chain(&alpha).copied().collect();
    Ok(relative_range(g, members, &path).contains(w) && validate_repeatable(h, w, &alpha, cert.from_level..=cert.to_level))
}

struct Candidate {
    alpha: Vec<Symbol>,
    /// Core vertices whose top-level class satisfies the inclusion.
    good: VertexSet,
}

fn candidate(h: &Hierarchy, top: usize, alpha: Vec<Symbol>) -> Candidate {
    let p = h.partition(top);
    let ok = par::map(&p.classes, |c| inclusion_holds(h, top, c.raw(), &alpha));
    let good = p
        .classes
        .iter()
        .zip(ok)
        .filter(|(_, ok)| *ok)
        .fold(VertexSet::new(), |acc, (c, _)| acc.union(&c.members));
    Candidate { alpha, good }
}

fn lowest_level(h: &Hierarchy, top: usize, w: VertexId, alpha: &[Symbol]) -> usize {
    let mut l = top;
    while l > 1 && inclusion_holds(h, l - 1, h.raw_id(l - 1, w), alpha) {
        l -= 1;
    }
    l
}

fn connect(h: &Hierarchy, level: usize, class: usize, cand: &Candidate, top: usize, word_len_max: usize) -> Option<RepeatableCertificate> {
    let g = h.window().graph();
    let c = &h.partition(level).classes[class];
    for k in 0..=word_len_max - cand.alpha.len() {
        let starts = if k == 0 { vec![(Word(Vec::new()), c.members.clone())] } else { words_from(g, &c.members, k) };
        for (delta, ends) in starts {
            let hit = relative_range(g, &ends, &cand.alpha).intersection(&cand.good);
            if let Some(&w) = hit.as_slice().first() {
                let alpha = Word(cand.alpha.clone());
                let powers = |prefix: &Word| (1..=POWERS).map(|i| is_in_language(g, &prefix.concat(&alpha.repeat(i)).0)).collect();
                return Some(RepeatableCertificate {
                    class: c.name.clone(),
                    level,
                    delta: delta.names(g),
                    alpha: alpha.names(g),
                    w: g.vertex_name(w).to_string(),
                    from_level: lowest_level(h, top, w, &cand.alpha),
                    to_level: top,
                    alpha_powers: powers(&Word(Vec::new())),
                    delta_alpha_powers: powers(&delta),
                });
            }
        }
    }
    None
}

fn alphas(h: &Hierarchy, word_len_max: usize) -> Vec<Vec<Symbol>> {
    let g = h.window().graph();
    let mut out = Vec::new();
    for len in 1..=word_len_max {
        for (w, _) in words_from(g, h.window().core(), len) {
            out.push(w.0);
            if out.len() == ALPHA_CAP {
                return out;
            }
        }
    }
    out
}

/// Certificates for the given (level, class) pairs, searched jointly.
fn search(h: &Hierarchy, targets: &[(usize, usize)], top: usize, word_len_max: usize) -> Vec<Option<RepeatableCertificate>> {
    let mut found: Vec<Option<RepeatableCertificate>> = vec![None; targets.len()];
    for alpha in alphas(h, word_len_max) {
        let cand = candidate(h, top, alpha);
        if cand.good.is_empty() {
            continue;
        }
        let open: Vec<usize> = (0..targets.len()).filter(|&i| found[i].is_none()).collect();
        let certs = par::map(&open, |&i| connect(h, targets[i].0, targets[i].1, &cand, top, word_len_max));
        for (i, cert) in open.into_iter().zip(certs) {
            found[i] = cert;
        }
        if found.iter().all(Option::is_some) {
            break;
        }
    }
    found
}

fn top_level(win: &Window, bounds: &Bounds) -> Result<usize> {
    let top = win.back_depth().map_or(bounds.ell_max, |d| d.min(bounds.ell_max));
    if top == 0 {
        return Err(Error::DepthInsufficient { what: "repeatable paths".into(), needed: 1, available: 0 });
    }
    Ok(top)
}

pub fn find_repeatable_connection(win: &Window, vertex: VertexId, level: usize, bounds: &Bounds) -> Result<Verdict<RepeatableCertificate>> {
    bounds.validate()?;
    require_essential(win)?;
    let top = top_level(win, bounds)?.max(level);
    let h = Hierarchy::build(win, top)?;
    let class = h
        .class_index(level, vertex)
        .filter(|_| win.is_core(vertex))
        .ok_or_else(|| Error::InvalidParameter(format!("`{}` is not a core vertex", win.graph().vertex_name(vertex))))?;
    let cert = search(&h, &[(level, class)], top, bounds.word_len_max).pop().flatten();
    let v = Verdict::new("repeatable_connection", Status::Inconclusive, Scope::UpToBounds)
        .with_bound("level", level)
        .with_bound("ell_max", top)
        .with_bound("word_len_max", bounds.word_len_max)
        .with_bounds(win.describe());
    Ok(match cert {
        Some(c) => Verdict { status: Status::Certified, ..v }.with_witness(c),
        None => v.with_note("no repeatable connection within the word length bound"),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct RepeatableReport {
    pub certificates: Vec<RepeatableCertificate>,
    /// (level, class) pairs with no certificate.
    pub missing: Vec<(usize, String)>,
}

/// Every class at every level up to ell_max connects to a repeatable word.
pub fn check_repeatable(win: &Window, bounds: &Bounds) -> Result<Verdict<RepeatableReport>> {
    bounds.validate()?;
    require_essential(win)?;
    let top = top_level(win, bounds)?;
    let h = Hierarchy::build(win, top)?;
    let targets: Vec<(usize, usize)> = (1..=top).flat_map(|l| (0..h.partition(l).len()).map(move |c| (l, c))).collect();
    let found = search(&h, &targets, top, bounds.word_len_max);
    let mut report = RepeatableReport { certificates: Vec::new(), missing: Vec::new() };
    for (&(l, c), cert) in targets.iter().zip(found) {
        match cert {
            Some(cert) => report.certificates.push(cert),
            None => report.missing.push((l, h.partition(l).classes[c].name.clone())),
        }
    }
    let status = if report.missing.is_empty() { Status::Certified } else { Status::Inconclusive };
    Ok(Verdict::new("repeatable", status, Scope::UpToBounds)
        .with_bounds(bounds.entries())
        .with_bound("ell_max", top)
        .with_bounds(win.describe())
        .with_witness(report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::even::{gen_even_e1, gen_even_e2};
    use crate::presentations::strip::gen_strip_x;

    #[test]
    fn e1_connects_to_one() {
        let w = Window::whole(gen_even_e1());
        let r = check_repeatable(&w, &Bounds::default()).unwrap();
        assert!(r.is_certified());
        let h = Hierarchy::build(&w, 4).unwrap();
        for cert in r.witness.unwrap().certificates {
            assert_eq!(cert.alpha, ["1"]);
            assert_eq!(cert.w, "u");
            assert!(cert.alpha_powers.iter().all(|&b| b));
            assert!(validate_certificate(&h, &cert).unwrap());
        }
        // 0 alone is not repeatable at either vertex.
        let zero = w.graph().symbol("0").unwrap();
        for v in 0..2 {
            assert!(!validate_repeatable(&h, v, &[zero], 4..=4));
        }
        assert!(validate_repeatable(&h, 0, &[zero, zero], 1..=4));
    }

    #[test]
    fn e2_loop_at_w() {
        let w = Window::whole(gen_even_e2());
        let r = check_repeatable(&w, &Bounds::default()).unwrap();
        assert!(r.is_certified());
    }

    #[test]
    fn strip_reaches_the_loop() {
        let w = gen_strip_x(8).unwrap();
        let r = check_repeatable(&w, &Bounds::default()).unwrap();
        assert!(r.is_certified(), "{:?}", r.witness.map(|w| w.missing));
        let h = Hierarchy::build(&w, 4).unwrap();
        let g = w.graph();
        let v0 = g.vertex("v0").unwrap();
        let bc = Word::parse(g, "bc").unwrap();
        assert!(validate_repeatable(&h, v0, &bc.0, 1..=4));
    }
}
