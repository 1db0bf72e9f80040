//! Types, terms, formulas, signatures and problems.
//!
//! Formulas are kept in negation normal form. `And`/`Or` are n-ary and the
//! smart constructors flatten nested connectives of the same kind, so every
//! formula built through them has one canonical shape.

use indexmap::IndexMap;
use std::collections::BTreeSet;
use std::fmt;

/// Result type of encoded types (the type of type terms).
pub const TY_TYPE: &str = "$$ty";
/// Polymorphic tag function `$$tag : !>[A]: A > A`.
pub const TAG: &str = "$$tag";
/// Polymorphic guard predicate `$$guard : !>[A]: A > $o`.
pub const GUARD: &str = "$$guard";
/// Distinguished nullary type constructor, also the single sort of untyped logic.
pub const IOTA: &str = "$i";
/// Prefix of the term variable standing for a type variable.
pub const TYVAR_TERM_PREFIX: &str = "A\u{b7}";
/// Prefix of Skolem symbols introduced by clausification.
pub const SKOLEM_PREFIX: &str = "$$sk";

/// True for identifiers in the reserved `$$` namespace.
pub fn is_reserved(name: &str) -> bool {
    name.starts_with("$$") || name.contains('\u{b7}')
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Type {
    Var(String),
    App(String, Vec<Type>),
}

impl Type {
    pub fn var(name: impl Into<String>) -> Type {
        Type::Var(name.into())
    }

    pub fn con(name: impl Into<String>, args: Vec<Type>) -> Type {
        Type::App(name.into(), args)
    }

    pub fn atom(name: impl Into<String>) -> Type {
        Type::App(name.into(), Vec::new())
    }

    pub fn iota() -> Type {
        Type::atom(IOTA)
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Type::Var(_) => false,
            Type::App(_, args) => args.iter().all(Type::is_ground),
        }
    }

    pub fn occurs(&self, v: &str) -> bool {
        match self {
            Type::Var(w) => w == v,
            Type::App(_, args) => args.iter().any(|a| a.occurs(v)),
        }
    }

    /// Type variables in order of first occurrence.
    pub fn vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Type::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Type::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Type::Var(_) => 1,
            Type::App(_, args) => 1 + args.iter().map(Type::size).sum::<usize>(),
        }
    }

    pub fn head(&self) -> Option<&str> {
        match self {
            Type::Var(_) => None,
            Type::App(k, _) => Some(k),
        }
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Var(v) => write!(f, "{v}"),
            Type::App(k, args) if args.is_empty() => write!(f, "{k}"),
            Type::App(k, args) => {
                write!(f, "{k}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Level {
    Poly,
    Mono,
    Untyped,
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::Poly => "polymorphic",
            Level::Mono => "monomorphic",
            Level::Untyped => "untyped",
        })
    }
}

/// Declared arity `!>[tyvars]: args > result` of a function (`result` set)
/// or a predicate (`result` empty).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymDecl {
    pub tyvars: Vec<String>,
    pub args: Vec<Type>,
    pub result: Option<Type>,
}

impl SymDecl {
    pub fn fun(tyvars: Vec<String>, args: Vec<Type>, result: Type) -> SymDecl {
        SymDecl { tyvars, args, result: Some(result) }
    }

    pub fn pred(tyvars: Vec<String>, args: Vec<Type>) -> SymDecl {
        SymDecl { tyvars, args, result: None }
    }

    pub fn is_fun(&self) -> bool {
        self.result.is_some()
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    pub level: Level,
    pub type_ctors: IndexMap<String, usize>,
    pub funs: IndexMap<String, SymDecl>,
    pub preds: IndexMap<String, SymDecl>,
}

impl Signature {
    pub fn new(level: Level) -> Signature {
        let mut sig = Signature {
            level,
            type_ctors: IndexMap::new(),
            funs: IndexMap::new(),
            preds: IndexMap::new(),
        };
        if level == Level::Untyped {
            sig.type_ctors.insert(IOTA.to_string(), 0);
        }
        sig
    }

    /// Adds `$i` when no nullary constructor exists; returns whether it did.
    pub fn ensure_iota(&mut self) -> bool {
        if self.type_ctors.values().any(|&n| n == 0) {
            return false;
        }
        self.type_ctors.insert(IOTA.to_string(), 0);
        true
    }

    pub fn sym(&self, name: &str) -> Option<&SymDecl> {
        self.funs.get(name).or_else(|| self.preds.get(name))
    }

    pub fn add_fun(&mut self, name: impl Into<String>, decl: SymDecl) {
        self.funs.insert(name.into(), decl);
    }

    pub fn add_pred(&mut self, name: impl Into<String>, decl: SymDecl) {
        self.preds.insert(name.into(), decl);
    }

    /// Untyped function of arity `n` over `$i`.
    pub fn add_untyped_fun(&mut self, name: impl Into<String>, n: usize) {
        self.add_fun(name, SymDecl::fun(vec![], vec![Type::iota(); n], Type::iota()));
    }

    pub fn add_untyped_pred(&mut self, name: impl Into<String>, n: usize) {
        self.add_pred(name, SymDecl::pred(vec![], vec![Type::iota(); n]));
    }

    /// All symbols, functions first, in declaration order.
    pub fn symbols(&self) -> impl Iterator<Item = (&String, &SymDecl)> {
        self.funs.iter().chain(self.preds.iter())
    }

    /// Result type of `sym⟨ty_args⟩(...)`.
    pub fn result_type(&self, sym: &str, ty_args: &[Type]) -> Option<Type> {
        let decl = self.funs.get(sym)?;
        let rho = crate::subst::TypeSubst::from_pairs(&decl.tyvars, ty_args);
        Some(rho.apply(decl.result.as_ref()?))
    }

    /// Argument types of `sym⟨ty_args⟩(...)`.
    pub fn arg_types(&self, sym: &str, ty_args: &[Type]) -> Option<Vec<Type>> {
        let decl = self.sym(sym)?;
        let rho = crate::subst::TypeSubst::from_pairs(&decl.tyvars, ty_args);
        Some(decl.args.iter().map(|t| rho.apply(t)).collect())
    }

    pub fn is_monomorphic(&self) -> bool {
        self.type_ctors.values().all(|&n| n == 0) && self.symbols().all(|(_, d)| d.tyvars.is_empty())
    }

    /// Does any user-visible name live in the reserved namespace?
    pub fn reserved_names(&self) -> Vec<String> {
        self.type_ctors
            .keys()
            .chain(self.funs.keys())
            .chain(self.preds.keys())
            .filter(|n| is_reserved(n))
            .cloned()
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarKind {
    Universal,
    Existential,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub name: String,
    pub ty: Type,
    pub kind: VarKind,
}

impl Var {
    pub fn new(name: impl Into<String>, ty: Type, kind: VarKind) -> Var {
        Var { name: name.into(), ty, kind }
    }

    pub fn univ(name: impl Into<String>, ty: Type) -> Var {
        Var::new(name, ty, VarKind::Universal)
    }

    pub fn exist(name: impl Into<String>, ty: Type) -> Var {
        Var::new(name, ty, VarKind::Existential)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Var),
    App { sym: String, ty_args: Vec<Type>, args: Vec<Term> },
}

impl Term {
    pub fn app(sym: impl Into<String>, ty_args: Vec<Type>, args: Vec<Term>) -> Term {
        Term::App { sym: sym.into(), ty_args, args }
    }

    pub fn cnst(sym: impl Into<String>) -> Term {
        Term::app(sym, vec![], vec![])
    }

    pub fn var(v: &Var) -> Term {
        Term::Var(v.clone())
    }

    pub fn as_var(&self) -> Option<&Var> {
        match self {
            Term::Var(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_universal_var(&self) -> bool {
        matches!(self, Term::Var(v) if v.kind == VarKind::Universal)
    }

    /// Type of the term; `None` if a symbol is undeclared.
    pub fn ty(&self, sig: &Signature) -> Option<Type> {
        match self {
            Term::Var(v) => Some(v.ty.clone()),
            Term::App { sym, ty_args, .. } => sig.result_type(sym, ty_args),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App { args, .. } => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Term)) {
        f(self);
        if let Term::App { args, .. } = self {
            for a in args {
                a.visit(f);
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Pred { pos: bool, sym: String, ty_args: Vec<Type>, args: Vec<Term> },
    Eq { pos: bool, lhs: Term, rhs: Term },
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Forall(Var, Box<Formula>),
    Exists(Var, Box<Formula>),
    ForallType(String, Box<Formula>),
}

impl Formula {
    pub fn truth() -> Formula {
        Formula::And(Vec::new())
    }

    pub fn falsity() -> Formula {
        Formula::Or(Vec::new())
    }

    pub fn pred(sym: impl Into<String>, ty_args: Vec<Type>, args: Vec<Term>) -> Formula {
        Formula::Pred { pos: true, sym: sym.into(), ty_args, args }
    }

    pub fn eq(lhs: Term, rhs: Term) -> Formula {
        Formula::Eq { pos: true, lhs, rhs }
    }

    pub fn neq(lhs: Term, rhs: Term) -> Formula {
        Formula::Eq { pos: false, lhs, rhs }
    }

    pub fn and(parts: Vec<Formula>) -> Formula {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Formula::And(inner) => out.extend(inner),
                p => out.push(p),
            }
        }
        if out.len() == 1 {
            out.pop().unwrap()
        } else {
            Formula::And(out)
        }
    }

    pub fn or(parts: Vec<Formula>) -> Formula {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Formula::Or(inner) => out.extend(inner),
                p => out.push(p),
            }
        }
        if out.len() == 1 {
            out.pop().unwrap()
        } else {
            Formula::Or(out)
        }
    }

    /// `premises → conclusion`, as `¬p1 ∨ ... ∨ ¬pn ∨ conclusion`.
    pub fn implies(premises: Vec<Formula>, conclusion: Formula) -> Formula {
        if premises.is_empty() {
            return conclusion;
        }
        let mut parts: Vec<Formula> = premises.into_iter().map(Formula::negate).collect();
        parts.push(conclusion);
        Formula::or(parts)
    }

    pub fn forall(v: Var, body: Formula) -> Formula {
        Formula::Forall(v, Box::new(body))
    }

    pub fn exists(v: Var, body: Formula) -> Formula {
        Formula::Exists(v, Box::new(body))
    }

    pub fn forall_type(a: impl Into<String>, body: Formula) -> Formula {
        Formula::ForallType(a.into(), Box::new(body))
    }

    pub fn forall_all(vars: Vec<Var>, body: Formula) -> Formula {
        vars.into_iter().rev().fold(body, |b, v| Formula::forall(v, b))
    }

    pub fn exists_all(vars: Vec<Var>, body: Formula) -> Formula {
        vars.into_iter().rev().fold(body, |b, v| Formula::exists(v, b))
    }

    pub fn forall_types(tyvars: Vec<String>, body: Formula) -> Formula {
        tyvars.into_iter().rev().fold(body, |b, a| Formula::forall_type(a, b))
    }

    /// NNF negation. Quantified variables flip kind.
    ///
    /// Type quantifiers have no dual in this logic; negating one keeps the
    /// binder and negates the body, which callers must never rely on.
    pub fn negate(self) -> Formula {
        match self {
            Formula::Pred { pos, sym, ty_args, args } => Formula::Pred { pos: !pos, sym, ty_args, args },
            Formula::Eq { pos, lhs, rhs } => Formula::Eq { pos: !pos, lhs, rhs },
            Formula::And(ps) => Formula::or(ps.into_iter().map(Formula::negate).collect()),
            Formula::Or(ps) => Formula::and(ps.into_iter().map(Formula::negate).collect()),
            Formula::Forall(v, b) => {
                let nv = Var::exist(v.name.clone(), v.ty.clone());
                Formula::exists(nv.clone(), b.negate().rekind(&v.name, VarKind::Existential))
            }
            Formula::Exists(v, b) => {
                let nv = Var::univ(v.name.clone(), v.ty.clone());
                Formula::forall(nv.clone(), b.negate().rekind(&v.name, VarKind::Universal))
            }
            Formula::ForallType(a, b) => Formula::ForallType(a, Box::new(b.negate())),
        }
    }

    fn rekind(self, name: &str, kind: VarKind) -> Formula {
        self.map_terms(&mut |t| rekind_term(t, name, kind))
    }

    /// Rebuilds the formula with every maximal term passed through `f`.
    pub fn map_terms(self, f: &mut impl FnMut(Term) -> Term) -> Formula {
        match self {
            Formula::Pred { pos, sym, ty_args, args } => {
                Formula::Pred { pos, sym, ty_args, args: args.into_iter().map(&mut *f).collect() }
            }
            Formula::Eq { pos, lhs, rhs } => Formula::Eq { pos, lhs: f(lhs), rhs: f(rhs) },
            Formula::And(ps) => Formula::And(ps.into_iter().map(|p| p.map_terms(f)).collect()),
            Formula::Or(ps) => Formula::Or(ps.into_iter().map(|p| p.map_terms(f)).collect()),
            Formula::Forall(v, b) => Formula::Forall(v, Box::new(b.map_terms(f))),
            Formula::Exists(v, b) => Formula::Exists(v, Box::new(b.map_terms(f))),
            Formula::ForallType(a, b) => Formula::ForallType(a, Box::new(b.map_terms(f))),
        }
    }

    /// Strips leading type quantifiers.
    pub fn split_type_binders(&self) -> (Vec<String>, &Formula) {
        let mut vars = Vec::new();
        let mut cur = self;
        while let Formula::ForallType(a, b) = cur {
            vars.push(a.clone());
            cur = b;
        }
        (vars, cur)
    }

    pub fn visit_terms<'a>(&'a self, f: &mut impl FnMut(&'a Term)) {
        match self {
            Formula::Pred { args, .. } => args.iter().for_each(|a| a.visit(f)),
            Formula::Eq { lhs, rhs, .. } => {
                lhs.visit(f);
                rhs.visit(f);
            }
            Formula::And(ps) | Formula::Or(ps) => ps.iter().for_each(|p| p.visit_terms(f)),
            Formula::Forall(_, b) | Formula::Exists(_, b) | Formula::ForallType(_, b) => b.visit_terms(f),
        }
    }

    /// Visits every atom (predicate or equality literal).
    pub fn visit_atoms<'a>(&'a self, f: &mut impl FnMut(&'a Formula)) {
        match self {
            Formula::Pred { .. } | Formula::Eq { .. } => f(self),
            Formula::And(ps) | Formula::Or(ps) => ps.iter().for_each(|p| p.visit_atoms(f)),
            Formula::Forall(_, b) | Formula::Exists(_, b) | Formula::ForallType(_, b) => b.visit_atoms(f),
        }
    }

    pub fn visit_binders<'a>(&'a self, f: &mut impl FnMut(&'a Var)) {
        match self {
            Formula::Pred { .. } | Formula::Eq { .. } => {}
            Formula::And(ps) | Formula::Or(ps) => ps.iter().for_each(|p| p.visit_binders(f)),
            Formula::Forall(v, b) | Formula::Exists(v, b) => {
                f(v);
                b.visit_binders(f)
            }
            Formula::ForallType(_, b) => b.visit_binders(f),
        }
    }

    /// Number of connective, quantifier and literal nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::Pred { args, .. } => 1 + args.iter().map(Term::size).sum::<usize>(),
            Formula::Eq { lhs, rhs, .. } => 1 + lhs.size() + rhs.size(),
            Formula::And(ps) | Formula::Or(ps) => 1 + ps.iter().map(Formula::size).sum::<usize>(),
            Formula::Forall(_, b) | Formula::Exists(_, b) | Formula::ForallType(_, b) => 1 + b.size(),
        }
    }

    /// Does any type (in binders, type arguments or variables) mention a type variable?
    pub fn is_type_ground(&self) -> bool {
        let mut ground = true;
        self.visit_types(&mut |t| ground &= t.is_ground());
        ground && !matches!(self, Formula::ForallType(..))
    }

    /// Visits every type annotation: binder types, variable types, type arguments.
    pub fn visit_types(&self, f: &mut impl FnMut(&Type)) {
        fn term(t: &Term, f: &mut impl FnMut(&Type)) {
            match t {
                Term::Var(v) => f(&v.ty),
                Term::App { ty_args, args, .. } => {
                    ty_args.iter().for_each(&mut *f);
                    args.iter().for_each(|a| term(a, f));
                }
            }
        }
        match self {
            Formula::Pred { ty_args, args, .. } => {
                ty_args.iter().for_each(&mut *f);
                args.iter().for_each(|a| term(a, f));
            }
            Formula::Eq { lhs, rhs, .. } => {
                term(lhs, f);
                term(rhs, f);
            }
            Formula::And(ps) | Formula::Or(ps) => ps.iter().for_each(|p| p.visit_types(f)),
            Formula::Forall(v, b) | Formula::Exists(v, b) => {
                f(&v.ty);
                b.visit_types(f)
            }
            Formula::ForallType(_, b) => b.visit_types(f),
        }
    }
}

fn rekind_term(t: Term, name: &str, kind: VarKind) -> Term {
    match t {
        Term::Var(mut v) => {
            if v.name == name {
                v.kind = kind;
            }
            Term::Var(v)
        }
        Term::App { sym, ty_args, args } => Term::App {
            sym,
            ty_args,
            args: args.into_iter().map(|a| rekind_term(a, name, kind)).collect(),
        },
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    Axiom,
    Hypothesis,
    NegatedConjecture,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Axiom => "axiom",
            Role::Hypothesis => "hypothesis",
            Role::NegatedConjecture => "negated_conjecture",
        }
    }
}

/// Where an output formula came from.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Origin {
    Input,
    /// Translation of the named source formula.
    Translated(String),
    /// Axiom added by an encoding, from `schema` instantiated at `symbol`.
    Axiom { schema: String, symbol: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Named {
    pub name: String,
    pub role: Role,
    pub formula: Formula,
    pub origin: Origin,
}

impl Named {
    pub fn axiom(name: impl Into<String>, formula: Formula) -> Named {
        Named { name: name.into(), role: Role::Axiom, formula, origin: Origin::Input }
    }

    pub fn is_added_axiom(&self) -> bool {
        matches!(self.origin, Origin::Axiom { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Problem {
    pub sig: Signature,
    pub formulas: Vec<Named>,
}

impl Problem {
    pub fn new(sig: Signature) -> Problem {
        Problem { sig, formulas: Vec::new() }
    }

    pub fn level(&self) -> Level {
        self.sig.level
    }

    pub fn push(&mut self, name: impl Into<String>, formula: Formula) {
        self.formulas.push(Named::axiom(name, formula));
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.formulas.iter().map(|n| &n.formula)
    }

    /// The problem seen as polymorphic (a monomorphic problem is a special case).
    pub fn lifted_to_poly(&self) -> Problem {
        let mut p = self.clone();
        if p.sig.level == Level::Mono {
            p.sig.level = Level::Poly;
        }
        p
    }

    /// True when no formula mentions a type variable.
    pub fn is_type_ground(&self) -> bool {
        self.formulas().all(Formula::is_type_ground)
    }

    /// Ground types occurring in the problem (of terms, binders and type arguments).
    pub fn ground_types(&self) -> BTreeSet<Type> {
        let mut out = BTreeSet::new();
        for f in self.formulas() {
            f.visit_types(&mut |t| {
                if t.is_ground() {
                    add_subtypes(t, &mut out);
                }
            });
            f.visit_terms(&mut |t| {
                if let Some(ty) = t.ty(&self.sig) {
                    if ty.is_ground() {
                        out.insert(ty);
                    }
                }
            });
        }
        out
    }
}

fn add_subtypes(t: &Type, out: &mut BTreeSet<Type>) {
    if let Type::App(_, args) = t {
        out.insert(t.clone());
        for a in args {
            add_subtypes(a, out);
        }
    }
}
