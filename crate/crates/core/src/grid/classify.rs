use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::params::GridParams;

/// Named restrictions of the grid problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemClass {
    SoD,
    SoPL,
    EoPL,
    InjPhp,
    BijPhp,
    PathInjPhp,
    PathBijPhp,
    PigeonCircuit,
    SoDNoMerge,
    GenericGrid,
}

impl fmt::Display for ProblemClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ProblemClass::SoD => "sod",
            ProblemClass::SoPL => "sopl",
            ProblemClass::EoPL => "eopl",
            ProblemClass::InjPhp => "inj-php",
            ProblemClass::BijPhp => "bij-php",
            ProblemClass::PathInjPhp => "path-inj-php",
            ProblemClass::PathBijPhp => "path-bij-php",
            ProblemClass::PigeonCircuit => "pigeon-circuit",
            ProblemClass::SoDNoMerge => "sod-no-merge",
            ProblemClass::GenericGrid => "generic-grid",
        };
        f.write_str(s)
    }
}

/// A surplus function for the path pigeonhole classes: a named map with
/// `f(t) > t` for every tested point.
#[derive(Clone, Copy)]
pub struct SurplusFn {
    pub name: &'static str,
    pub f: fn(usize) -> usize,
}

impl SurplusFn {
    pub fn apply(&self, t: usize) -> usize {
        (self.f)(t)
    }
}

pub const SURPLUS_SQUARE: SurplusFn = SurplusFn { name: "t^2", f: |t| t * t };
pub const SURPLUS_SUCC: SurplusFn = SurplusFn { name: "t+1", f: |t| t + 1 };
pub const SURPLUS_DOUBLE: SurplusFn = SurplusFn { name: "2t", f: |t| 2 * t };

/// Returns every restriction the parameter tuple satisfies. The path classes
/// are tested only when a surplus function is supplied.
pub fn classify_params(p: &GridParams, f: Option<&SurplusFn>) -> BTreeSet<ProblemClass> {
    let mut set = BTreeSet::new();
    set.insert(ProblemClass::GenericGrid);
    let (r, bij, c) = (p.reversible, p.bijective, p.collision);
    if !r && !bij && !c && p.a == 1 && p.b == 0 {
        set.insert(ProblemClass::SoD);
    }
    if r && !bij && p.a == 1 && p.b == 0 {
        set.insert(ProblemClass::SoPL);
    }
    if r && bij && p.a == 1 && p.b == 0 {
        set.insert(ProblemClass::EoPL);
    }
    if r && !bij && p.m == 2 && p.n == p.a && p.a == p.b + 1 {
        set.insert(ProblemClass::InjPhp);
    }
    if r && bij && p.m == 2 && p.n == p.a && p.a == p.b + 1 {
        set.insert(ProblemClass::BijPhp);
    }
    if !r && c && p.m == 2 && p.n == p.a && p.a == p.b + 1 {
        set.insert(ProblemClass::PigeonCircuit);
    }
    if !r && c && p.a == 1 && p.b == 0 {
        set.insert(ProblemClass::SoDNoMerge);
    }
    if let Some(f) = f {
        if f.apply(p.b) > p.b && p.a == f.apply(p.b) {
            if r && !bij {
                set.insert(ProblemClass::PathInjPhp);
            }
            if r && bij {
                set.insert(ProblemClass::PathBijPhp);
            }
        }
    }
    set
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: usize, m: usize, a: usize, b: usize, r: bool, bij: bool, c: bool) -> GridParams {
        GridParams { n, m, a, b, reversible: r, bijective: bij, collision: c }
    }

    #[test]
    fn eopl_shape() {
        let got = classify_params(&params(3, 4, 1, 0, true, true, false), None);
        assert!(got.contains(&ProblemClass::EoPL));
        assert!(got.contains(&ProblemClass::GenericGrid));
        assert_eq!(got.len(), 2);
    }

    #[test]
    fn inj_php_is_also_path_inj_php_under_succ_surplus() {
        let got = classify_params(&params(4, 2, 4, 3, true, false, false), Some(&SURPLUS_SUCC));
        assert!(got.contains(&ProblemClass::InjPhp));
        assert!(got.contains(&ProblemClass::PathInjPhp));
        assert!(!got.contains(&ProblemClass::BijPhp));
    }

    #[test]
    fn sod_no_merge_excludes_plain_sod() {
        let got = classify_params(&params(2, 3, 1, 0, false, false, true), None);
        assert!(got.contains(&ProblemClass::SoDNoMerge));
        assert!(!got.contains(&ProblemClass::SoD));
        assert!(got.contains(&ProblemClass::GenericGrid));
    }
}
