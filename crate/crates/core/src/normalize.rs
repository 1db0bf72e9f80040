//! Conversion of full first-order syntax into negation normal form with
//! type quantifiers hoisted to the top.

use crate::syntax::{Formula, Term, Type, Var, VarKind};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

/// Formulas with the full set of connectives, as produced by the parser.
/// Variables inside terms carry a placeholder kind; normalisation assigns
/// the kind of the binder that ends up quantifying them.
#[derive(Clone, Debug, PartialEq)]
pub enum Fm {
    True,
    False,
    Pred(String, Vec<Type>, Vec<Term>),
    Eq(Term, Term),
    Not(Box<Fm>),
    And(Vec<Fm>),
    Or(Vec<Fm>),
    Imp(Box<Fm>, Box<Fm>),
    Iff(Box<Fm>, Box<Fm>),
    Forall(Vec<(String, Type)>, Box<Fm>),
    Exists(Vec<(String, Type)>, Box<Fm>),
    ForallType(Vec<String>, Box<Fm>),
    ExistsType(Vec<String>, Box<Fm>),
}

impl Fm {
    pub fn not(f: Fm) -> Fm {
        Fm::Not(Box::new(f))
    }

    pub fn imp(a: Fm, b: Fm) -> Fm {
        Fm::Imp(Box::new(a), Box::new(b))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NormalizeError {
    #[error("existential type quantification is not supported")]
    ExistentialType,
    #[error("type quantifier under an existential term quantifier is not supported")]
    TypeQuantifierUnderExists,
}

/// Normalises `f` into NNF; bound variables are renamed apart so that no
/// variable is bound twice.
pub fn normalize(f: &Fm) -> Result<Formula, NormalizeError> {
    let mut cx = Cx::default();
    let body = cx.nnf(f, true, false)?;
    Ok(Formula::forall_types(cx.hoisted, body))
}

#[derive(Default)]
struct Cx {
    used: BTreeSet<String>,
    used_ty: BTreeSet<String>,
    term_env: Vec<(String, Var)>,
    ty_env: Vec<(String, String)>,
    hoisted: Vec<String>,
}

impl Cx {
    fn fresh(used: &mut BTreeSet<String>, base: &str) -> String {
        if used.insert(base.to_string()) {
            return base.to_string();
        }
        let mut i = 1;
        loop {
            let cand = format!("{base}_{i}");
            if used.insert(cand.clone()) {
                return cand;
            }
            i += 1;
        }
    }

    fn ty(&self, t: &Type) -> Type {
        match t {
            Type::Var(a) => match self.ty_env.iter().rev().find(|(n, _)| n == a) {
                Some((_, b)) => Type::Var(b.clone()),
                None => t.clone(),
            },
            Type::App(k, args) => Type::App(k.clone(), args.iter().map(|a| self.ty(a)).collect()),
        }
    }

    fn term(&self, t: &Term) -> Term {
        match t {
            Term::Var(v) => match self.term_env.iter().rev().find(|(n, _)| *n == v.name) {
                Some((_, b)) => Term::Var(b.clone()),
                None => Term::Var(Var { name: v.name.clone(), ty: self.ty(&v.ty), kind: v.kind }),
            },
            Term::App { sym, ty_args, args } => Term::App {
                sym: sym.clone(),
                ty_args: ty_args.iter().map(|a| self.ty(a)).collect(),
                args: args.iter().map(|a| self.term(a)).collect(),
            },
        }
    }

    fn nnf(&mut self, f: &Fm, pos: bool, under_exists: bool) -> Result<Formula, NormalizeError> {
        Ok(match f {
            Fm::True => if pos { Formula::truth() } else { Formula::falsity() },
            Fm::False => if pos { Formula::falsity() } else { Formula::truth() },
            Fm::Pred(s, tys, args) => Formula::Pred {
                pos,
                sym: s.clone(),
                ty_args: tys.iter().map(|t| self.ty(t)).collect(),
                args: args.iter().map(|a| self.term(a)).collect(),
            },
            Fm::Eq(l, r) => Formula::Eq { pos, lhs: self.term(l), rhs: self.term(r) },
            Fm::Not(g) => self.nnf(g, !pos, under_exists)?,
            Fm::And(gs) | Fm::Or(gs) => {
                let parts = gs.iter().map(|g| self.nnf(g, pos, under_exists)).collect::<Result<Vec<_>, _>>()?;
                if matches!(f, Fm::And(_)) == pos {
                    Formula::and(parts)
                } else {
                    Formula::or(parts)
                }
            }
            Fm::Imp(a, b) => {
                let a = self.nnf(a, !pos, under_exists)?;
                let b = self.nnf(b, pos, under_exists)?;
                if pos {
                    Formula::or(vec![a, b])
                } else {
                    Formula::and(vec![a, b])
                }
            }
            Fm::Iff(a, b) => {
                // (a → b) ∧ (b → a), negated: (a ∧ ¬b) ∨ (¬a ∧ b)
                let (a, b) = (a.as_ref().clone(), b.as_ref().clone());
                let expanded = if pos {
                    Fm::And(vec![Fm::imp(a.clone(), b.clone()), Fm::imp(b, a)])
                } else {
                    Fm::Or(vec![Fm::And(vec![a.clone(), Fm::not(b.clone())]), Fm::And(vec![Fm::not(a), b])])
                };
                self.nnf(&expanded, true, under_exists)?
            }
            Fm::Forall(vars, body) | Fm::Exists(vars, body) => {
                let universal = matches!(f, Fm::Forall(..)) == pos;
                let kind = if universal { VarKind::Universal } else { VarKind::Existential };
                let mut bound = Vec::new();
                for (name, ty) in vars {
                    let fresh = Self::fresh(&mut self.used, name);
                    let v = Var::new(fresh, self.ty(ty), kind);
                    self.term_env.push((name.clone(), v.clone()));
                    bound.push(v);
                }
                let inner = self.nnf(body, pos, under_exists || !universal)?;
                self.term_env.truncate(self.term_env.len() - vars.len());
                if universal {
                    Formula::forall_all(bound, inner)
                } else {
                    Formula::exists_all(bound, inner)
                }
            }
            Fm::ForallType(tvs, body) | Fm::ExistsType(tvs, body) => {
                let universal = matches!(f, Fm::ForallType(..)) == pos;
                if !universal {
                    return Err(NormalizeError::ExistentialType);
                }
                if under_exists {
                    return Err(NormalizeError::TypeQuantifierUnderExists);
                }
                for a in tvs {
                    let fresh = Self::fresh(&mut self.used_ty, a);
                    self.ty_env.push((a.clone(), fresh.clone()));
                    self.hoisted.push(fresh);
                }
                let inner = self.nnf(body, pos, under_exists)?;
                self.ty_env.truncate(self.ty_env.len() - tvs.len());
                inner
            }
        })
    }
}

/// Renames bound variables apart (per formula) without changing the shape.
pub fn rename_apart(f: &Formula) -> Formula {
    fn go(f: &Formula, used: &mut BTreeSet<String>, env: &mut BTreeMap<String, String>) -> Formula {
        let sub_term = |t: &Term, env: &BTreeMap<String, String>| rename_term(t, env);
        match f {
            Formula::Pred { pos, sym, ty_args, args } => Formula::Pred {
                pos: *pos,
                sym: sym.clone(),
                ty_args: ty_args.clone(),
                args: args.iter().map(|a| sub_term(a, env)).collect(),
            },
            Formula::Eq { pos, lhs, rhs } => Formula::Eq { pos: *pos, lhs: sub_term(lhs, env), rhs: sub_term(rhs, env) },
            Formula::And(ps) => Formula::And(ps.iter().map(|p| go(p, used, env)).collect()),
            Formula::Or(ps) => Formula::Or(ps.iter().map(|p| go(p, used, env)).collect()),
            Formula::Forall(v, b) | Formula::Exists(v, b) => {
                let fresh = Cx::fresh(used, &v.name);
                let old = env.insert(v.name.clone(), fresh.clone());
                let nv = Var { name: fresh, ty: v.ty.clone(), kind: v.kind };
                let body = go(b, used, env);
                match old {
                    Some(o) => env.insert(v.name.clone(), o),
                    None => env.remove(&v.name),
                };
                if matches!(f, Formula::Forall(..)) {
                    Formula::Forall(nv, Box::new(body))
                } else {
                    Formula::Exists(nv, Box::new(body))
                }
            }
            Formula::ForallType(a, b) => Formula::ForallType(a.clone(), Box::new(go(b, used, env))),
        }
    }
    go(f, &mut BTreeSet::new(), &mut BTreeMap::new())
}

fn rename_term(t: &Term, env: &BTreeMap<String, String>) -> Term {
    match t {
        Term::Var(v) => Term::Var(Var {
            name: env.get(&v.name).cloned().unwrap_or_else(|| v.name.clone()),
            ty: v.ty.clone(),
            kind: v.kind,
        }),
        Term::App { sym, ty_args, args } => Term::App {
            sym: sym.clone(),
            ty_args: ty_args.clone(),
            args: args.iter().map(|a| rename_term(a, env)).collect(),
        },
    }
}
