//! Naked and undercover variables, and the term encoding of types.

use crate::analysis::CoverAssignment;
use crate::syntax::{Formula, Signature, Term, Type, Var, VarKind, TYVAR_TERM_PREFIX, TY_TYPE};
use std::collections::{BTreeMap, BTreeSet};

/// Variables occurring as a whole side of a positive equation, minus those
/// bound existentially above the occurrence.
pub fn naked_vars(phi: &Formula) -> BTreeSet<Var> {
    match phi {
        Formula::Pred { .. } => BTreeSet::new(),
        Formula::Eq { pos: false, .. } => BTreeSet::new(),
        Formula::Eq { pos: true, lhs, rhs } => [lhs, rhs].iter().filter_map(|t| t.as_var().cloned()).collect(),
        Formula::And(ps) | Formula::Or(ps) => ps.iter().flat_map(naked_vars).collect(),
        Formula::Forall(_, b) | Formula::ForallType(_, b) => naked_vars(b),
        Formula::Exists(v, b) => {
            let mut s = naked_vars(b);
            s.retain(|x| x.name != v.name);
            s
        }
    }
}

pub fn naked_vars_of<'a>(formulas: impl IntoIterator<Item = &'a Formula>) -> BTreeSet<Var> {
    formulas.into_iter().flat_map(naked_vars).collect()
}

fn cover_vars(sym: &str, args: &[Term], covers: &CoverAssignment) -> BTreeSet<Var> {
    let cover = covers.get(sym);
    args.iter()
        .enumerate()
        .filter(|(j, _)| cover.is_some_and(|c| c.contains(j)))
        .filter_map(|(_, t)| t.as_var().cloned())
        .collect()
}

fn uv_terms(ts: &[Term], covers: &CoverAssignment) -> BTreeSet<Var> {
    ts.iter().flat_map(|t| uv_term(t, covers)).collect()
}

fn uv_term(t: &Term, covers: &CoverAssignment) -> BTreeSet<Var> {
    match t {
        Term::Var(_) => BTreeSet::new(),
        Term::App { sym, args, .. } => {
            let mut s = cover_vars(sym, args, covers);
            s.extend(uv_terms(args, covers));
            s
        }
    }
}

/// Variables occurring at a cover position of their enclosing symbol, or
/// naked in a positive equation.
pub fn undercover_vars(phi: &Formula, covers: &CoverAssignment) -> BTreeSet<Var> {
    match phi {
        Formula::Pred { sym, args, .. } => {
            let mut s = cover_vars(sym, args, covers);
            s.extend(uv_terms(args, covers));
            s
        }
        Formula::Eq { pos, lhs, rhs } => {
            let mut s = uv_terms(&[lhs.clone(), rhs.clone()], covers);
            if *pos {
                s.extend([lhs, rhs].iter().filter_map(|t| t.as_var().cloned()));
            }
            s
        }
        Formula::And(ps) | Formula::Or(ps) => ps.iter().flat_map(|p| undercover_vars(p, covers)).collect(),
        Formula::Forall(_, b) | Formula::ForallType(_, b) => undercover_vars(b, covers),
        Formula::Exists(v, b) => {
            let mut s = undercover_vars(b, covers);
            s.retain(|x| x.name != v.name);
            s
        }
    }
}

pub fn contains_named(set: &BTreeSet<Var>, name: &str) -> bool {
    set.iter().any(|v| v.name == name)
}

/// The type `ϑ` of encoded types.
pub fn ty_type() -> Type {
    Type::atom(TY_TYPE)
}

/// The universal term variable `𝒱(α)` standing for type variable `α`.
pub fn tyvar_term(a: &str) -> Var {
    Var::new(format!("{TYVAR_TERM_PREFIX}{a}"), ty_type(), VarKind::Universal)
}

/// Function symbols `k̂ : ϑⁿ → ϑ` standing for the signature's type constructors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeTerms {
    pub hats: BTreeMap<String, String>,
}

impl TypeTerms {
    /// Chooses a fresh function name per type constructor: the constructor's
    /// own name where that is free, otherwise a suffixed variant.
    pub fn for_signature(sig: &Signature) -> TypeTerms {
        let mut taken: BTreeSet<String> = sig.funs.keys().chain(sig.preds.keys()).cloned().collect();
        let mut hats = BTreeMap::new();
        for k in sig.type_ctors.keys() {
            let base = match k.trim_start_matches('$') {
                "i" if k.starts_with('$') => "iota".to_string(),
                "" => "ty".to_string(),
                s => s.to_string(),
            };
            let mut name = base.clone();
            let mut i = 0;
            while taken.contains(&name) {
                i += 1;
                name = if i == 1 { format!("{base}_ty") } else { format!("{base}_ty{i}") };
            }
            taken.insert(name.clone());
            hats.insert(k.clone(), name);
        }
        TypeTerms { hats }
    }

    /// `⌊σ⌋`.
    pub fn encode(&self, sigma: &Type) -> Term {
        match sigma {
            Type::Var(a) => Term::Var(tyvar_term(a)),
            Type::App(k, args) => {
                let f = self.hats.get(k).cloned().unwrap_or_else(|| k.clone());
                Term::app(f, vec![], args.iter().map(|a| self.encode(a)).collect())
            }
        }
    }

    /// Adds the `k̂` declarations and `ϑ` to a signature.
    pub fn extend(&self, sig: &mut Signature, source: &Signature) {
        sig.type_ctors.entry(TY_TYPE.to_string()).or_insert(0);
        for (k, &n) in &source.type_ctors {
            let f = &self.hats[k];
            sig.add_fun(f.clone(), crate::syntax::SymDecl::fun(vec![], vec![ty_type(); n], ty_type()));
        }
    }
}

/// Convenience wrapper over [`TypeTerms::encode`].
pub fn type_to_term(sigma: &Type, tt: &TypeTerms) -> Term {
    tt.encode(sigma)
}
