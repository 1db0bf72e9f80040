//! Type substitutions, unification, matching and most general instances.

use crate::syntax::{Formula, Term, Type, Var};
use std::collections::BTreeMap;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeSubst(pub BTreeMap<String, Type>);

impl TypeSubst {
    pub fn new() -> TypeSubst {
        TypeSubst::default()
    }

    /// Maps `vars[i] ↦ tys[i]`; extra entries on either side are ignored.
    pub fn from_pairs(vars: &[String], tys: &[Type]) -> TypeSubst {
        TypeSubst(vars.iter().cloned().zip(tys.iter().cloned()).collect())
    }

    pub fn single(v: impl Into<String>, t: Type) -> TypeSubst {
        let mut m = BTreeMap::new();
        m.insert(v.into(), t);
        TypeSubst(m)
    }

    pub fn get(&self, v: &str) -> Option<&Type> {
        self.0.get(v)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_ground(&self) -> bool {
        self.0.values().all(Type::is_ground)
    }

    pub fn apply(&self, t: &Type) -> Type {
        match t {
            Type::Var(v) => self.0.get(v).cloned().unwrap_or_else(|| t.clone()),
            Type::App(k, args) => Type::App(k.clone(), args.iter().map(|a| self.apply(a)).collect()),
        }
    }

    pub fn apply_var(&self, v: &Var) -> Var {
        Var { name: v.name.clone(), ty: self.apply(&v.ty), kind: v.kind }
    }

    pub fn apply_term(&self, t: &Term) -> Term {
        match t {
            Term::Var(v) => Term::Var(self.apply_var(v)),
            Term::App { sym, ty_args, args } => Term::App {
                sym: sym.clone(),
                ty_args: ty_args.iter().map(|a| self.apply(a)).collect(),
                args: args.iter().map(|a| self.apply_term(a)).collect(),
            },
        }
    }

    /// Applies to free type variables; a type binder shadows its variable.
    pub fn apply_formula(&self, f: &Formula) -> Formula {
        match f {
            Formula::Pred { pos, sym, ty_args, args } => Formula::Pred {
                pos: *pos,
                sym: sym.clone(),
                ty_args: ty_args.iter().map(|a| self.apply(a)).collect(),
                args: args.iter().map(|a| self.apply_term(a)).collect(),
            },
            Formula::Eq { pos, lhs, rhs } => {
                Formula::Eq { pos: *pos, lhs: self.apply_term(lhs), rhs: self.apply_term(rhs) }
            }
            Formula::And(ps) => Formula::And(ps.iter().map(|p| self.apply_formula(p)).collect()),
            Formula::Or(ps) => Formula::Or(ps.iter().map(|p| self.apply_formula(p)).collect()),
            Formula::Forall(v, b) => Formula::Forall(self.apply_var(v), Box::new(self.apply_formula(b))),
            Formula::Exists(v, b) => Formula::Exists(self.apply_var(v), Box::new(self.apply_formula(b))),
            Formula::ForallType(a, b) => {
                if self.0.contains_key(a) {
                    let mut inner = self.clone();
                    inner.0.remove(a);
                    Formula::ForallType(a.clone(), Box::new(inner.apply_formula(b)))
                } else {
                    Formula::ForallType(a.clone(), Box::new(self.apply_formula(b)))
                }
            }
        }
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(&self, first: &TypeSubst) -> TypeSubst {
        let mut m: BTreeMap<String, Type> = first.0.iter().map(|(k, v)| (k.clone(), self.apply(v))).collect();
        for (k, v) in &self.0 {
            m.entry(k.clone()).or_insert_with(|| v.clone());
        }
        m.retain(|k, v| !matches!(v, Type::Var(w) if w == k));
        TypeSubst(m)
    }
}

/// Strips the leading `∀ᾱ` of a formula and applies `rho` to the body.
/// Binders whose variable `rho` does not map are kept.
pub fn instantiate(f: &Formula, rho: &TypeSubst) -> Formula {
    let (tyvars, body) = f.split_type_binders();
    let body = rho.apply_formula(body);
    let kept: Vec<String> = tyvars.into_iter().filter(|a| !rho.0.contains_key(a)).collect();
    Formula::forall_types(kept, body)
}

fn walk(t: &Type, s: &BTreeMap<String, Type>) -> Type {
    match t {
        Type::Var(v) => match s.get(v) {
            Some(u) => walk(u, s),
            None => t.clone(),
        },
        Type::App(k, args) => Type::App(k.clone(), args.iter().map(|a| walk(a, s)).collect()),
    }
}

fn unify_into(a: &Type, b: &Type, s: &mut BTreeMap<String, Type>) -> bool {
    let a = walk(a, s);
    let b = walk(b, s);
    match (&a, &b) {
        (Type::Var(x), Type::Var(y)) if x == y => true,
        (Type::Var(x), t) | (t, Type::Var(x)) => {
            if t.occurs(x) {
                return false;
            }
            s.insert(x.clone(), t.clone());
            true
        }
        (Type::App(k, xs), Type::App(l, ys)) => {
            k == l && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| unify_into(x, y, s))
        }
    }
}

/// Most general unifier of a list of equations, both sides flexible.
pub fn unify_all(pairs: &[(Type, Type)]) -> Option<TypeSubst> {
    let mut s = BTreeMap::new();
    for (a, b) in pairs {
        if !unify_into(a, b, &mut s) {
            return None;
        }
    }
    let keys: Vec<String> = s.keys().cloned().collect();
    let resolved = keys.into_iter().map(|k| {
        let v = walk(&Type::Var(k.clone()), &s);
        (k, v)
    });
    Some(TypeSubst(resolved.collect()))
}

pub fn unify(a: &Type, b: &Type) -> Option<TypeSubst> {
    unify_all(&[(a.clone(), b.clone())])
}

/// Renames every variable of `t` by appending `suffix`.
pub fn rename(t: &Type, suffix: &str) -> Type {
    match t {
        Type::Var(v) => Type::Var(format!("{v}{suffix}")),
        Type::App(k, args) => Type::App(k.clone(), args.iter().map(|a| rename(a, suffix)).collect()),
    }
}

/// Renames variables in order of first occurrence to `A, B, ..., Z, A1, ...`.
pub fn canonical(t: &Type) -> Type {
    let vars = t.vars();
    let names: Vec<Type> = (0..vars.len()).map(|i| Type::Var(tyvar_name(i))).collect();
    TypeSubst::from_pairs(&vars, &names).apply(t)
}

pub fn tyvar_name(i: usize) -> String {
    let letter = (b'A' + (i % 26) as u8) as char;
    if i < 26 {
        letter.to_string()
    } else {
        format!("{letter}{}", i / 26)
    }
}

/// Most general common instance, treating the variables of the two types
/// as distinct.
pub fn mgi(sigma: &Type, tau: &Type) -> Option<Type> {
    let tau = rename(tau, "'");
    let s = unify(sigma, &tau)?;
    Some(s.apply(sigma))
}

pub fn unifiable(sigma: &Type, tau: &Type) -> bool {
    unify(sigma, &rename(tau, "'")).is_some()
}

/// One-sided matching: `pattern·ρ = target`, the target's variables rigid.
pub fn match_type(pattern: &Type, target: &Type) -> Option<TypeSubst> {
    let mut s = BTreeMap::new();
    if match_into(pattern, target, &mut s) {
        Some(TypeSubst(s))
    } else {
        None
    }
}

/// Extends `s` so that `pattern·s = target`.
pub fn match_into(pattern: &Type, target: &Type, s: &mut BTreeMap<String, Type>) -> bool {
    match (pattern, target) {
        (Type::Var(v), t) => match s.get(v) {
            Some(bound) => bound == t,
            None => {
                s.insert(v.clone(), t.clone());
                true
            }
        },
        (Type::App(k, xs), Type::App(l, ys)) => {
            k == l && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| match_into(x, y, s))
        }
        _ => false,
    }
}

/// `tau ≤ sigma`: `tau` is an instance of `sigma`.
pub fn is_instance(tau: &Type, sigma: &Type) -> bool {
    match_type(sigma, tau).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn list(t: Type) -> Type {
        Type::con("list", vec![t])
    }
    fn v(n: &str) -> Type {
        Type::var(n)
    }
    fn w() -> Type {
        Type::atom("w")
    }

    #[test]
    fn apply_examples() {
        assert_eq!(TypeSubst::single("A", w()).apply(&list(v("A"))), list(w()));
        assert_eq!(TypeSubst::single("B", w()).apply(&v("A")), v("A"));
    }

    #[test]
    fn mgi_examples() {
        assert_eq!(mgi(&v("A"), &list(v("B"))).map(|t| canonical(&t)), Some(list(v("A"))));
        let m = mgi(&list(v("A")), &list(list(v("B")))).unwrap();
        assert!(is_instance(&m, &list(v("A"))));
        assert!(is_instance(&m, &list(list(v("B")))));
        assert_eq!(canonical(&m), list(list(v("A"))));
        assert_eq!(mgi(&w(), &Type::atom("b")), None);
    }

    #[test]
    fn mgi_renames_apart() {
        // pair(A, list(A)) and pair(list(A), A) share names but not variables
        let p = |a, b| Type::con("pair", vec![a, b]);
        assert_eq!(mgi(&p(v("A"), w()), &p(w(), v("A"))), Some(p(w(), w())));
        assert_eq!(mgi(&v("A"), &list(v("A"))).map(|t| canonical(&t)), Some(list(v("A"))));
    }

    #[test]
    fn match_examples() {
        assert_eq!(match_type(&list(v("A")), &list(w())), Some(TypeSubst::single("A", w())));
        assert_eq!(match_type(&list(v("A")), &w()), None);
        let s = match_type(&list(v("A")), &list(list(v("B")))).unwrap();
        assert_eq!(s.apply(&list(v("A"))), list(list(v("B"))));
        // non-linear pattern
        let p = Type::con("pair", vec![v("A"), v("A")]);
        assert!(match_type(&p, &Type::con("pair", vec![w(), w()])).is_some());
        assert!(match_type(&p, &Type::con("pair", vec![w(), v("A")])).is_none());
    }

    #[test]
    fn composition() {
        let r1 = TypeSubst::single("A", list(v("B")));
        let r2 = TypeSubst::single("B", w());
        let t = Type::con("pair", vec![v("A"), v("B")]);
        assert_eq!(r2.apply(&r1.apply(&t)), r2.after(&r1).apply(&t));
    }

    #[test]
    fn occurs_check() {
        assert!(unify(&v("A"), &list(v("A"))).is_none());
    }
}
