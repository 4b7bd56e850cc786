//! Direct membership tests for the factor languages of the built-in shifts.
//! None of these look at a graph.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Oracle {
    Even,
    Dyck(usize),
    X,
}

impl Oracle {
    pub fn accepts<S: AsRef<str>>(&self, word: &[S]) -> Result<bool> {
        match *self {
            Oracle::Even => oracle_even(word),
            Oracle::Dyck(n) => oracle_dyck(word, n),
            Oracle::X => oracle_x(word),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Oracle::Even => "even".into(),
            Oracle::Dyck(n) => format!("dyck(N={n})"),
            Oracle::X => "x".into(),
        }
    }
}

/// Rejects exactly the words containing a factor 1 0^{2k+1} 1.
pub fn oracle_even<S: AsRef<str>>(word: &[S]) -> Result<bool> {
    let mut zeros_since_one: Option<usize> = None;
    for s in word {
        match s.as_ref() {
            "0" => {
                if let Some(z) = zeros_since_one.as_mut() {
                    *z += 1;
                }
            }
            "1" => {
                if matches!(zeros_since_one, Some(z) if z % 2 == 1) {
                    return Ok(false);
                }
                zeros_since_one = Some(0);
            }
            other => return Err(Error::ForeignSymbol(other.to_string())),
        }
    }
    Ok(true)
}

fn bracket(s: &str, n: usize) -> Result<(bool, usize)> {
    let bad = || Error::ForeignSymbol(s.to_string());
    let open = match s.chars().next() {
        Some('a') => true,
        Some('b') => false,
        _ => return Err(bad()),
    };
    let i: usize = s[1..].parse().map_err(|_| bad())?;
    if i == 0 || i > n {
        return Err(bad());
    }
    Ok((open, i))
}

/// Stack simulation. A close on an empty stack is fine (its partner lies to
/// the left); a close that meets a different open rejects.
pub fn oracle_dyck<S: AsRef<str>>(word: &[S], n: usize) -> Result<bool> {
    let mut stack = Vec::new();
    let mut ok = true;
    for s in word {
        let (open, i) = bracket(s.as_ref(), n)?;
        if open {
            stack.push(i);
        } else {
            match stack.pop() {
                Some(j) if j != i => ok = false,
                _ => {}
            }
        }
    }
    Ok(ok)
}

/// Between consecutive `a`s the numbers of `b`s and `c`s agree; the blocks
/// before the first and after the last `a` are unrestricted.
pub fn oracle_x<S: AsRef<str>>(word: &[S]) -> Result<bool> {
    let mut balance: Option<i64> = None;
    for s in word {
        match s.as_ref() {
            "a" => {
                if matches!(balance, Some(b) if b != 0) {
                    return Ok(false);
                }
                balance = Some(0);
            }
            "b" => {
                if let Some(b) = balance.as_mut() {
                    *b += 1;
                }
            }
            "c" => {
                if let Some(b) = balance.as_mut() {
                    *b -= 1;
                }
            }
            other => return Err(Error::ForeignSymbol(other.to_string())),
        }
    }
    Ok(true)
}
