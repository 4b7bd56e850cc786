//! Comparison of a presentation's words against a language oracle.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::language::enumerate_words;
use crate::par;
use crate::presentations::oracles::Oracle;
use crate::verdict::{Scope, Status, Verdict};
use crate::window::Window;

#[derive(Clone, Debug, Serialize)]
pub struct Discrepancy {
    pub length: usize,
    pub word: Vec<String>,
    /// True when the presentation generates the word but the oracle rejects it.
    pub generated: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossReport {
    pub oracle: String,
    /// Number of words of each length 1..=n_max (equal on both sides when passing).
    pub counts: Vec<usize>,
    pub discrepancy: Option<Discrepancy>,
}

/// Words of length `n` over `alphabet` accepted by `oracle`, lexicographic.
pub fn oracle_words(oracle: Oracle, alphabet: &[String], n: usize) -> Result<Vec<Vec<u32>>> {
    let k = alphabet.len() as u64;
    let total = k.checked_pow(n as u32).filter(|&t| t <= 1 << 26).ok_or_else(|| {
        Error::InvalidParameter(format!("{}^{} candidate words is too many to enumerate", k, n))
    })? as usize;
    let decoded: Vec<Result<Option<Vec<u32>>>> = par::map_range(total, |mut i| {
        let mut w = vec![0u32; n];
        for slot in w.iter_mut().rev() {
            *slot = (i as u64 % k) as u32;
            i = (i as u64 / k) as usize;
        }
        let names: Vec<&str> = w.iter().map(|&s| alphabet[s as usize].as_str()).collect();
        Ok(oracle.accepts(&names)?.then_some(w))
    });
    decoded.into_iter().filter_map(|r| r.transpose()).collect()
}

pub fn cross_validate(win: &Window, oracle: Oracle, n_max: usize) -> Result<Verdict<CrossReport>> {
    if let Some(d) = win.language_depth() {
        if d < n_max {
            return Err(Error::DepthInsufficient { what: "language enumeration".into(), needed: n_max, available: d });
        }
    }
    let g = win.graph();
    let mut counts = Vec::new();
    let mut discrepancy = None;
    for n in 1..=n_max {
        let graph_words: Vec<Vec<u32>> = enumerate_words(g, n)?.into_iter().map(|w| w.0).collect();
        let oracle_side = oracle_words(oracle, g.alphabet(), n)?;
        if graph_words != oracle_side {
            let (word, generated) = first_difference(&graph_words, &oracle_side);
            discrepancy = Some(Discrepancy {
                length: n,
                word: word.iter().map(|&s| g.symbol_name(s).to_string()).collect(),
                generated,
            });
            break;
        }
        counts.push(graph_words.len());
    }
    let status = if discrepancy.is_some() { Status::Refuted } else { Status::Certified };
    Ok(Verdict::new("cross_validate", status, Scope::UpToBounds)
        .with_bound("n_max", n_max)
        .with_bounds(win.describe())
        .with_witness(CrossReport { oracle: oracle.name(), counts, discrepancy }))
}

fn first_difference(a: &[Vec<u32>], b: &[Vec<u32>]) -> (Vec<u32>, bool) {
    let (mut i, mut j) = (0, 0);
    loop {
        match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) if x == y => {
                i += 1;
                j += 1;
            }
            (Some(x), Some(y)) => return if x < y { (x.clone(), true) } else { (y.clone(), false) },
            (Some(x), None) => return (x.clone(), true),
            (None, Some(y)) => return (y.clone(), false),
            (None, None) => unreachable!("sequences differ"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::even::{gen_even_e1, gen_even_e2};

    #[test]
    fn even_presentations() {
        for g in [gen_even_e1(), gen_even_e2()] {
            let v = cross_validate(&Window::whole(g), Oracle::Even, 8).unwrap();
            assert!(v.is_certified(), "{:?}", v.witness);
        }
    }

    #[test]
    fn wrong_oracle_reports_word() {
        let g = crate::graph::LabelledGraph::new(
            vec!["x".into()],
            None,
            vec![("x".into(), "x".into(), "0".into()), ("x".into(), "x".into(), "1".into())],
        )
        .unwrap();
        let v = cross_validate(&Window::whole(g), Oracle::Even, 4).unwrap();
        assert!(v.is_refuted());
        let d = v.witness.unwrap().discrepancy.unwrap();
        assert_eq!(d.word, ["1", "0", "1"]);
        assert!(d.generated);
    }
}
