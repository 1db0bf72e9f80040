use crate::syntax::{Signature, SymDecl};
use std::collections::{BTreeMap, BTreeSet};

/// Type-argument indices of one symbol, split by how they can be recovered.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SymClass {
    pub phantom: BTreeSet<usize>,
    pub inferable: BTreeSet<usize>,
    pub noninferable: BTreeSet<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ArgClassification(pub BTreeMap<String, SymClass>);

impl ArgClassification {
    pub fn get(&self, sym: &str) -> Option<&SymClass> {
        self.0.get(sym)
    }
}

pub fn classify_symbol(decl: &SymDecl) -> SymClass {
    let mut c = SymClass::default();
    for (i, a) in decl.tyvars.iter().enumerate() {
        let in_args = decl.args.iter().any(|t| t.occurs(a));
        let in_result = decl.result.as_ref().is_some_and(|t| t.occurs(a));
        if in_args {
            c.inferable.insert(i);
        } else {
            c.noninferable.insert(i);
            if !in_result {
                c.phantom.insert(i);
            }
        }
    }
    c
}

pub fn classify_args(sig: &Signature) -> ArgClassification {
    ArgClassification(sig.symbols().map(|(n, d)| (n.clone(), classify_symbol(d))).collect())
}
