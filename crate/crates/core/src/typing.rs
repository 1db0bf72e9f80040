//! Well-typedness of signatures and problems.

use crate::syntax::{Formula, Level, Problem, Signature, Term, Type, Var, VarKind};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TypeErrorKind {
    UnknownSymbol(String),
    UnknownTypeCtor(String),
    NotAFunction(String),
    NotAPredicate(String),
    ArityMismatch { sym: String, expected: usize, found: usize },
    TypeArgCount { sym: String, expected: usize, found: usize },
    ArgType { sym: String, index: usize, expected: Type, found: Type },
    EqualitySidesDiffer { lhs: Type, rhs: Type },
    UnboundTypeVar(String),
    FreeVariable(String),
    VariableType { var: String, bound: Type, found: Type },
    WrongKind(String),
    Rebound(String),
    NestedTypeQuantifier(String),
    Level(String),
    BadSignature(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeError {
    /// Name of the offending formula; empty for signature errors.
    pub formula: String,
    pub kind: TypeErrorKind,
}

impl fmt::Display for TypeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use TypeErrorKind::*;
        if !self.formula.is_empty() {
            write!(f, "{}: ", self.formula)?;
        }
        match &self.kind {
            UnknownSymbol(s) => write!(f, "unknown symbol `{s}`"),
            UnknownTypeCtor(s) => write!(f, "unknown type constructor `{s}`"),
            NotAFunction(s) => write!(f, "`{s}` is a predicate used as a term"),
            NotAPredicate(s) => write!(f, "`{s}` is a function used as a formula"),
            ArityMismatch { sym, expected, found } => {
                write!(f, "arity mismatch: `{sym}` takes {expected} arguments, got {found}")
            }
            TypeArgCount { sym, expected, found } => {
                write!(f, "type-argument-count mismatch: `{sym}` takes {expected}, got {found}")
            }
            ArgType { sym, index, expected, found } => {
                write!(f, "argument {index} of `{sym}` has type {found}, expected {expected}")
            }
            EqualitySidesDiffer { lhs, rhs } => write!(f, "equality sides differ: {lhs} vs {rhs}"),
            UnboundTypeVar(a) => write!(f, "unbound type variable {a}"),
            FreeVariable(x) => write!(f, "free variable {x}"),
            VariableType { var, bound, found } => {
                write!(f, "variable {var} bound at type {bound} but used at {found}")
            }
            WrongKind(x) => write!(f, "variable {x} has the wrong kind for its binder"),
            Rebound(x) => write!(f, "variable {x} is bound more than once"),
            NestedTypeQuantifier(a) => write!(f, "type quantifier over {a} below the top"),
            Level(m) => write!(f, "{m}"),
            BadSignature(m) => write!(f, "{m}"),
        }
    }
}

/// Checks the signature's own invariants.
pub fn check_signature(sig: &Signature) -> Vec<TypeError> {
    let mut errs = Vec::new();
    let mut bad = |m: String| errs.push(TypeError { formula: String::new(), kind: TypeErrorKind::BadSignature(m) });
    for name in sig.funs.keys() {
        if sig.preds.contains_key(name) {
            bad(format!("`{name}` is both a function and a predicate"));
        }
    }
    if !sig.type_ctors.values().any(|&n| n == 0) {
        bad("no nullary type constructor".into());
    }
    for (name, d) in sig.symbols() {
        let declared: BTreeSet<&String> = d.tyvars.iter().collect();
        for t in d.args.iter().chain(d.result.iter()) {
            for v in t.vars() {
                if !declared.contains(&v) {
                    bad(format!("type variable {v} of `{name}` is not bound by its declaration"));
                }
            }
            if let Err(m) = check_type_shape(sig, t) {
                bad(format!("in `{name}`: {m}"));
            }
        }
        match sig.level {
            Level::Mono if !d.tyvars.is_empty() => bad(format!("`{name}` is polymorphic in a monomorphic signature")),
            Level::Untyped if d.args.iter().chain(d.result.iter()).any(|t| *t != Type::iota()) => {
                bad(format!("`{name}` mentions a type in an untyped signature"))
            }
            _ => {}
        }
    }
    if sig.level != Level::Poly && sig.type_ctors.values().any(|&n| n > 0) {
        bad("type constructor with arguments in a non-polymorphic signature".into());
    }
    errs
}

fn check_type_shape(sig: &Signature, t: &Type) -> Result<(), String> {
    match t {
        Type::Var(_) => Ok(()),
        Type::App(k, args) => {
            match sig.type_ctors.get(k) {
                None => return Err(format!("unknown type constructor `{k}`")),
                Some(&n) if n != args.len() => {
                    return Err(format!("type constructor `{k}` takes {n} arguments, got {}", args.len()))
                }
                _ => {}
            }
            args.iter().try_for_each(|a| check_type_shape(sig, a))
        }
    }
}

/// Lists every type error in the problem; empty means well typed.
pub fn check_well_typed(problem: &Problem) -> Vec<TypeError> {
    let mut errs = check_signature(&problem.sig);
    for named in &problem.formulas {
        let mut cx = Checker {
            sig: &problem.sig,
            name: &named.name,
            tyvars: BTreeSet::new(),
            vars: BTreeMap::new(),
            seen: BTreeSet::new(),
            errs: Vec::new(),
        };
        cx.formula(&named.formula, true);
        errs.extend(cx.errs);
    }
    errs
}

struct Checker<'a> {
    sig: &'a Signature,
    name: &'a str,
    tyvars: BTreeSet<String>,
    vars: BTreeMap<String, Var>,
    seen: BTreeSet<String>,
    errs: Vec<TypeError>,
}

impl Checker<'_> {
    fn err(&mut self, kind: TypeErrorKind) {
        self.errs.push(TypeError { formula: self.name.to_string(), kind });
    }

    fn ty(&mut self, t: &Type) {
        match t {
            Type::Var(a) => {
                if self.sig.level != Level::Poly {
                    self.err(TypeErrorKind::Level(format!("type variable {a} at {} level", self.sig.level)));
                } else if !self.tyvars.contains(a) {
                    self.err(TypeErrorKind::UnboundTypeVar(a.clone()));
                }
            }
            Type::App(k, args) => {
                match self.sig.type_ctors.get(k) {
                    None => self.err(TypeErrorKind::UnknownTypeCtor(k.clone())),
                    Some(&n) if n != args.len() => self.err(TypeErrorKind::ArityMismatch {
                        sym: k.clone(),
                        expected: n,
                        found: args.len(),
                    }),
                    _ => {}
                }
                args.iter().for_each(|a| self.ty(a));
            }
        }
    }

    /// Returns the term's type when it can be determined.
    fn term(&mut self, t: &Term) -> Option<Type> {
        match t {
            Term::Var(v) => {
                self.ty(&v.ty);
                match self.vars.get(&v.name) {
                    None => {
                        self.err(TypeErrorKind::FreeVariable(v.name.clone()));
                        None
                    }
                    Some(b) => {
                        let b = b.clone();
                        if b.ty != v.ty {
                            self.err(TypeErrorKind::VariableType {
                                var: v.name.clone(),
                                bound: b.ty.clone(),
                                found: v.ty.clone(),
                            });
                        }
                        if b.kind != v.kind {
                            self.err(TypeErrorKind::WrongKind(v.name.clone()));
                        }
                        Some(v.ty.clone())
                    }
                }
            }
            Term::App { sym, ty_args, args } => {
                if self.sig.preds.contains_key(sym) {
                    self.err(TypeErrorKind::NotAFunction(sym.clone()));
                    return None;
                }
                let Some(decl) = self.sig.funs.get(sym) else {
                    self.err(TypeErrorKind::UnknownSymbol(sym.clone()));
                    args.iter().for_each(|a| {
                        self.term(a);
                    });
                    return None;
                };
                self.app(sym, ty_args, args);
                if decl.tyvars.len() != ty_args.len() {
                    return None;
                }
                self.sig.result_type(sym, ty_args)
            }
        }
    }

    fn app(&mut self, sym: &str, ty_args: &[Type], args: &[Term]) {
        let decl = self.sig.sym(sym).expect("declared").clone();
        ty_args.iter().for_each(|t| self.ty(t));
        if decl.tyvars.len() != ty_args.len() {
            self.err(TypeErrorKind::TypeArgCount {
                sym: sym.to_string(),
                expected: decl.tyvars.len(),
                found: ty_args.len(),
            });
        }
        if decl.args.len() != args.len() {
            self.err(TypeErrorKind::ArityMismatch {
                sym: sym.to_string(),
                expected: decl.args.len(),
                found: args.len(),
            });
        }
        let expected = if decl.tyvars.len() == ty_args.len() { self.sig.arg_types(sym, ty_args) } else { None };
        for (i, a) in args.iter().enumerate() {
            let found = self.term(a);
            if let (Some(exp), Some(found)) = (expected.as_ref().and_then(|e| e.get(i)), found) {
                if *exp != found {
                    self.err(TypeErrorKind::ArgType {
                        sym: sym.to_string(),
                        index: i + 1,
                        expected: exp.clone(),
                        found,
                    });
                }
            }
        }
    }

    fn bind(&mut self, v: &Var, kind: VarKind) {
        self.ty(&v.ty);
        if v.kind != kind {
            self.err(TypeErrorKind::WrongKind(v.name.clone()));
        }
        if !self.seen.insert(v.name.clone()) {
            self.err(TypeErrorKind::Rebound(v.name.clone()));
        }
        self.vars.insert(v.name.clone(), v.clone());
    }

    fn formula(&mut self, f: &Formula, top: bool) {
        match f {
            Formula::Pred { sym, ty_args, args, .. } => {
                if self.sig.funs.contains_key(sym) {
                    self.err(TypeErrorKind::NotAPredicate(sym.clone()));
                } else if !self.sig.preds.contains_key(sym) {
                    self.err(TypeErrorKind::UnknownSymbol(sym.clone()));
                } else {
                    self.app(sym, ty_args, args);
                }
            }
            Formula::Eq { lhs, rhs, .. } => {
                let (l, r) = (self.term(lhs), self.term(rhs));
                if let (Some(l), Some(r)) = (l, r) {
                    if l != r {
                        self.err(TypeErrorKind::EqualitySidesDiffer { lhs: l, rhs: r });
                    }
                }
            }
            Formula::And(ps) | Formula::Or(ps) => ps.iter().for_each(|p| self.formula(p, false)),
            Formula::Forall(v, b) => {
                self.bind(v, VarKind::Universal);
                self.formula(b, false);
                self.vars.remove(&v.name);
            }
            Formula::Exists(v, b) => {
                self.bind(v, VarKind::Existential);
                self.formula(b, false);
                self.vars.remove(&v.name);
            }
            Formula::ForallType(a, b) => {
                if !top {
                    self.err(TypeErrorKind::NestedTypeQuantifier(a.clone()));
                }
                if self.sig.level != Level::Poly {
                    self.err(TypeErrorKind::Level(format!("type quantifier at {} level", self.sig.level)));
                }
                if !self.tyvars.insert(a.clone()) {
                    self.err(TypeErrorKind::Rebound(a.clone()));
                }
                self.formula(b, top);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::*;

    fn list_sig() -> Signature {
        let mut sig = Signature::new(Level::Poly);
        sig.type_ctors.insert("list".into(), 1);
        sig.type_ctors.insert("w".into(), 0);
        let a = Type::var("A");
        let la = Type::con("list", vec![a.clone()]);
        sig.add_fun("nil", SymDecl::fun(vec!["A".into()], vec![], la.clone()));
        sig.add_fun("cons", SymDecl::fun(vec!["A".into()], vec![a.clone(), la.clone()], la));
        sig
    }

    fn problem_with(f: Formula) -> Problem {
        let mut p = Problem::new(list_sig());
        p.push("f", f);
        p
    }

    #[test]
    fn cons_at_w_is_well_typed() {
        let w = Type::atom("w");
        let x = Var::univ("X", w.clone());
        let xs = Var::univ("Xs", Type::con("list", vec![w.clone()]));
        let t = Term::app("cons", vec![w.clone()], vec![Term::var(&x), Term::var(&xs)]);
        let f = Formula::forall_all(vec![x, xs.clone()], Formula::eq(t.clone(), Term::var(&xs)));
        assert!(check_well_typed(&problem_with(f)).is_empty());
        assert_eq!(t.ty(&list_sig()), Some(Type::con("list", vec![w])));
    }

    #[test]
    fn equality_sides_must_agree() {
        let w = Type::atom("w");
        let x = Var::univ("X", w.clone());
        let xs = Var::univ("Xs", Type::con("list", vec![w]));
        let f = Formula::forall_all(vec![x.clone(), xs.clone()], Formula::eq(Term::var(&x), Term::var(&xs)));
        let errs = check_well_typed(&problem_with(f));
        assert!(matches!(errs[0].kind, TypeErrorKind::EqualitySidesDiffer { .. }));
        assert!(errs[0].to_string().contains("equality sides differ"));
    }

    #[test]
    fn nil_takes_no_term_arguments() {
        let w = Type::atom("w");
        let y = Var::univ("Y", w.clone());
        let bad = Term::app("nil", vec![w.clone()], vec![Term::var(&y)]);
        let f = Formula::forall(y, Formula::eq(bad.clone(), bad));
        let errs = check_well_typed(&problem_with(f));
        assert!(errs.iter().any(|e| matches!(e.kind, TypeErrorKind::ArityMismatch { .. })));
        assert!(errs[0].to_string().contains("arity mismatch"));
    }

    #[test]
    fn unknown_symbol_and_free_variable() {
        let w = Type::atom("w");
        let x = Var::univ("X", w);
        let f = Formula::eq(Term::cnst("zzz"), Term::var(&x));
        let errs = check_well_typed(&problem_with(f));
        assert!(errs.iter().any(|e| e.kind == TypeErrorKind::UnknownSymbol("zzz".into())));
        assert!(errs.iter().any(|e| e.kind == TypeErrorKind::FreeVariable("X".into())));
    }

    #[test]
    fn type_quantifier_must_be_on_top() {
        let a = Type::var("A");
        let x = Var::univ("X", a.clone());
        let inner = Formula::forall_type("A", Formula::forall(x.clone(), Formula::eq(Term::var(&x), Term::var(&x))));
        let f = Formula::and(vec![inner.clone(), inner]);
        let errs = check_well_typed(&problem_with(f));
        assert!(errs.iter().any(|e| matches!(e.kind, TypeErrorKind::NestedTypeQuantifier(_))));
    }
}
