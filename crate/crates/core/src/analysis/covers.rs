use crate::syntax::{Signature, SymDecl};
use std::collections::{BTreeMap, BTreeSet};

/// Term-argument indices (0-based) per symbol.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CoverAssignment(pub BTreeMap<String, BTreeSet<usize>>);

impl CoverAssignment {
    pub fn get(&self, sym: &str) -> Option<&BTreeSet<usize>> {
        self.0.get(sym)
    }

    pub fn contains(&self, sym: &str, j: usize) -> bool {
        self.0.get(sym).is_some_and(|c| c.contains(&j))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CoverPolicy {
    #[default]
    MinimalEarliest,
    Maximal,
}

/// Does `set` let every inferable type argument be read off some argument type?
pub fn is_cover(decl: &SymDecl, set: &BTreeSet<usize>) -> bool {
    decl.tyvars.iter().all(|a| {
        let inferable = decl.args.iter().any(|t| t.occurs(a));
        !inferable || set.iter().any(|&i| decl.args.get(i).is_some_and(|t| t.occurs(a)))
    })
}

pub fn is_minimal_cover(decl: &SymDecl, set: &BTreeSet<usize>) -> bool {
    is_cover(decl, set)
        && set.iter().all(|&i| {
            let mut smaller = set.clone();
            smaller.remove(&i);
            !is_cover(decl, &smaller)
        })
}

const BRUTE_FORCE_LIMIT: usize = 16;

/// Lexicographically smallest minimal cover (comparing sorted index lists).
pub fn minimal_earliest(decl: &SymDecl) -> BTreeSet<usize> {
    let n = decl.arity();
    if n <= BRUTE_FORCE_LIMIT {
        let mut best: Option<Vec<usize>> = None;
        for mask in 0u32..(1u32 << n) {
            let set: BTreeSet<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            if !is_minimal_cover(decl, &set) {
                continue;
            }
            let v: Vec<usize> = set.into_iter().collect();
            if best.as_ref().is_none_or(|b| v < *b) {
                best = Some(v);
            }
        }
        return best.unwrap_or_default().into_iter().collect();
    }
    // Wide symbols: take arguments left to right while they add a variable,
    // then drop any that became redundant.
    let mut set = BTreeSet::new();
    let mut seen: BTreeSet<String> = BTreeSet::new();
    for (i, t) in decl.args.iter().enumerate() {
        let vs: Vec<String> = t.vars().into_iter().filter(|v| decl.tyvars.contains(v)).collect();
        if vs.iter().any(|v| !seen.contains(v)) {
            set.insert(i);
            seen.extend(vs);
        }
    }
    for i in set.clone().into_iter().rev() {
        let mut smaller = set.clone();
        smaller.remove(&i);
        if is_cover(decl, &smaller) {
            set = smaller;
        }
    }
    set
}

pub fn choose_covers(sig: &Signature, policy: CoverPolicy) -> CoverAssignment {
    let covers = sig.symbols().map(|(name, decl)| {
        let c = match policy {
            CoverPolicy::MinimalEarliest => minimal_earliest(decl),
            CoverPolicy::Maximal => (0..decl.arity()).collect(),
        };
        (name.clone(), c)
    });
    CoverAssignment(covers.collect())
}
