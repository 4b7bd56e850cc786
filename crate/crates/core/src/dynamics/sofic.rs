//! Whether the class partitions stop refining.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::generalized::Hierarchy;
use crate::window::Window;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum SoficVerdict {
    /// Refinement is a bijection from `level` through the top level.
    Stabilized { level: usize },
    /// No such level below the top; `strictly` when every step splits a class.
    Growing { strictly: bool },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SoficReport {
    pub ell_max: usize,
    pub sizes: Vec<usize>,
    pub verdict: SoficVerdict,
}

pub fn sofic_in(h: &Hierarchy, ell_max: usize) -> Result<SoficReport> {
    if ell_max == 0 || ell_max > h.max_level() {
        return Err(Error::DepthInsufficient { what: "sofic stabilization".into(), needed: ell_max.max(1), available: h.max_level() });
    }
    let sizes: Vec<usize> = (1..=ell_max).map(|l| h.partition(l).len()).collect();
    let bijective: Vec<bool> = (1..ell_max).map(|l| h.refine(l).map(|r| r.is_bijection())).collect::<Result<_>>()?;
    let mut level = ell_max;
    while level > 1 && bijective[level - 2] {
        level -= 1;
    }
    let verdict = if level < ell_max {
        SoficVerdict::Stabilized { level }
    } else {
        SoficVerdict::Growing { strictly: sizes.windows(2).all(|w| w[1] > w[0]) }
    };
    Ok(SoficReport { ell_max, sizes, verdict })
}

pub fn sofic_stabilization(win: &Window, ell_max: usize) -> Result<SoficReport> {
    sofic_in(&Hierarchy::build(win, ell_max)?, ell_max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::dyck::gen_dyck;
    use crate::presentations::even::{gen_even_e1, gen_even_e2};
    use crate::presentations::strip::gen_strip_x;

    #[test]
    fn even_presentations_stabilize() {
        let r = sofic_stabilization(&Window::whole(gen_even_e1()), 4).unwrap();
        assert_eq!(r.sizes, [2, 2, 2, 2]);
        assert_eq!(r.verdict, SoficVerdict::Stabilized { level: 1 });
        let r = sofic_stabilization(&Window::whole(gen_even_e2()), 4).unwrap();
        assert_eq!(r.sizes, [2, 3, 3, 3]);
        assert_eq!(r.verdict, SoficVerdict::Stabilized { level: 2 });
    }

    #[test]
    fn dyck_and_strip_grow() {
        let r = sofic_stabilization(&gen_dyck(2, 4).unwrap(), 4).unwrap();
        assert_eq!(r.sizes, [2, 4, 8, 16]);
        assert_eq!(r.verdict, SoficVerdict::Growing { strictly: true });
        let r = sofic_stabilization(&gen_strip_x(8).unwrap(), 4).unwrap();
        assert_eq!(r.verdict, SoficVerdict::Growing { strictly: true });
    }
}
