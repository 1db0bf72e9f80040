//! First-order clauses over interned symbols, and conversion from problems.

use super::OracleError;
use crate::encode::sanitize;
use crate::syntax::{Formula, Level, Problem, Signature, SymDecl, Term, Type, Var, SKOLEM_PREFIX};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub type Sym = u32;
pub type Sort = u32;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum T {
    Var(u32),
    App(Sym, Vec<T>),
}

impl T {
    pub fn size(&self) -> usize {
        match self {
            T::Var(_) => 1,
            T::App(_, args) => 1 + args.iter().map(T::size).sum::<usize>(),
        }
    }

    pub fn vars(&self, out: &mut Vec<u32>) {
        match self {
            T::Var(v) => out.push(*v),
            T::App(_, args) => args.iter().for_each(|a| a.vars(out)),
        }
    }

    pub fn occurs(&self, v: u32) -> bool {
        match self {
            T::Var(w) => *w == v,
            T::App(_, args) => args.iter().any(|a| a.occurs(v)),
        }
    }

    pub fn map_vars(&self, f: &mut impl FnMut(u32) -> T) -> T {
        match self {
            T::Var(v) => f(*v),
            T::App(s, args) => T::App(*s, args.iter().map(|a| a.map_vars(f)).collect()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    Pred(Sym, Vec<T>),
    Eq(T, T),
}

impl Atom {
    pub fn size(&self) -> usize {
        match self {
            Atom::Pred(_, args) => 1 + args.iter().map(T::size).sum::<usize>(),
            Atom::Eq(l, r) => 1 + l.size() + r.size(),
        }
    }

    pub fn args(&self) -> Vec<&T> {
        match self {
            Atom::Pred(_, args) => args.iter().collect(),
            Atom::Eq(l, r) => vec![l, r],
        }
    }

    pub fn map_terms(&self, f: &mut impl FnMut(&T) -> T) -> Atom {
        match self {
            Atom::Pred(p, args) => Atom::Pred(*p, args.iter().map(&mut *f).collect()),
            Atom::Eq(l, r) => Atom::Eq(f(l), f(r)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit {
    pub pos: bool,
    pub atom: Atom,
}

/// A disjunction of literals; variable `i` has sort `sorts[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Clause {
    pub lits: Vec<Lit>,
    pub sorts: Vec<Sort>,
}

impl Clause {
    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.lits.iter().map(|l| l.atom.size()).sum()
    }

    /// Renames variables by first occurrence, drops duplicate literals and
    /// trivially false `s != s`; `None` for tautologies.
    pub fn normalize(lits: Vec<Lit>, sorts: &[Sort]) -> Option<Clause> {
        let mut kept: Vec<Lit> = Vec::new();
        for l in lits {
            if let Atom::Eq(a, b) = &l.atom {
                if a == b {
                    if l.pos {
                        return None;
                    }
                    continue;
                }
            }
            let flipped = match &l.atom {
                Atom::Eq(a, b) => Some(Lit { pos: l.pos, atom: Atom::Eq(b.clone(), a.clone()) }),
                _ => None,
            };
            let same = |k: &Lit| *k == l || Some(k) == flipped.as_ref();
            let opposite = |k: &Lit| {
                k.pos != l.pos && (k.atom == l.atom || flipped.as_ref().is_some_and(|f| f.atom == k.atom))
            };
            if kept.iter().any(opposite) {
                return None;
            }
            if !kept.iter().any(same) {
                kept.push(l);
            }
        }
        let mut map: BTreeMap<u32, u32> = BTreeMap::new();
        let mut new_sorts = Vec::new();
        let mut rename = |v: u32| {
            let n = map.len() as u32;
            let id = *map.entry(v).or_insert_with(|| {
                new_sorts.push(sorts[v as usize]);
                n
            });
            T::Var(id)
        };
        let lits = kept.iter().map(|l| Lit { pos: l.pos, atom: l.atom.map_terms(&mut |t| t.map_vars(&mut rename)) }).collect();
        Some(Clause { lits, sorts: new_sorts })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymInfo {
    pub name: String,
    pub args: Vec<Sort>,
    /// Result sort; `None` for predicates.
    pub result: Option<Sort>,
}

#[derive(Clone, Debug, Default)]
pub struct ClauseSet {
    pub syms: Vec<SymInfo>,
    pub sorts: Vec<Type>,
    pub clauses: Vec<Clause>,
}

impl ClauseSet {
    pub fn sort_of(&self, t: &T, var_sorts: &[Sort]) -> Sort {
        match t {
            T::Var(v) => var_sorts[*v as usize],
            T::App(f, _) => self.syms[*f as usize].result.unwrap_or(0),
        }
    }

    fn sort_id(&mut self, t: &Type) -> Sort {
        match self.sorts.iter().position(|s| s == t) {
            Some(i) => i as Sort,
            None => {
                self.sorts.push(t.clone());
                (self.sorts.len() - 1) as Sort
            }
        }
    }

    pub fn add_sym(&mut self, name: String, args: Vec<Sort>, result: Option<Sort>) -> Sym {
        self.syms.push(SymInfo { name, args, result });
        (self.syms.len() - 1) as Sym
    }

    pub fn literal_count(&self) -> usize {
        self.clauses.iter().map(|c| c.lits.len()).sum()
    }

    /// The clauses as a problem of universally closed disjunctions, for
    /// evaluation and model search. Sorts become nullary types.
    pub fn to_problem(&self) -> Problem {
        let untyped = self.sorts.iter().all(|t| *t == Type::iota());
        let level = if untyped { Level::Untyped } else { Level::Mono };
        let sort_ty: Vec<Type> = self
            .sorts
            .iter()
            .map(|t| if *t == Type::iota() { t.clone() } else { Type::atom(format!("s_{}", sanitize(&t.to_string()))) })
            .collect();
        let mut sig = Signature::new(level);
        for t in &sort_ty {
            if let Type::App(k, _) = t {
                sig.type_ctors.insert(k.clone(), 0);
            }
        }
        let names: Vec<String> = self.syms.iter().enumerate().map(|(i, s)| format!("{}_{i}", sanitize(&s.name))).collect();
        for (s, name) in self.syms.iter().zip(&names) {
            let args = s.args.iter().map(|&a| sort_ty[a as usize].clone()).collect();
            match s.result {
                Some(r) => sig.add_fun(name.clone(), SymDecl::fun(vec![], args, sort_ty[r as usize].clone())),
                None => sig.add_pred(name.clone(), SymDecl::pred(vec![], args)),
            }
        }
        sig.ensure_iota();
        let term = |t: &T, c: &Clause| -> Term {
            fn go(t: &T, c: &Clause, names: &[String], sort_ty: &[Type]) -> Term {
                match t {
                    T::Var(v) => Term::Var(Var::univ(format!("X{v}"), sort_ty[c.sorts[*v as usize] as usize].clone())),
                    T::App(f, args) => Term::app(names[*f as usize].clone(), vec![], args.iter().map(|a| go(a, c, names, sort_ty)).collect()),
                }
            }
            go(t, c, &names, &sort_ty)
        };
        let mut problem = Problem::new(sig);
        for (i, c) in self.clauses.iter().enumerate() {
            let lits = c
                .lits
                .iter()
                .map(|l| match &l.atom {
                    Atom::Pred(p, args) => Formula::Pred {
                        pos: l.pos,
                        sym: names[*p as usize].clone(),
                        ty_args: vec![],
                        args: args.iter().map(|a| term(a, c)).collect(),
                    },
                    Atom::Eq(a, b) => Formula::Eq { pos: l.pos, lhs: term(a, c), rhs: term(b, c) },
                })
                .collect();
            let vars = (0..c.sorts.len()).map(|v| Var::univ(format!("X{v}"), sort_ty[c.sorts[v] as usize].clone())).collect();
            problem.push(format!("c_{i}"), Formula::forall_all(vars, Formula::or(lits)));
        }
        problem
    }

    pub fn display<'a>(&'a self, c: &'a Clause) -> impl fmt::Display + 'a {
        ShowClause { set: self, clause: c }
    }

    fn term(&self, t: &T, out: &mut String) {
        match t {
            T::Var(v) => out.push_str(&format!("X{v}")),
            T::App(f, args) => {
                out.push_str(&self.syms[*f as usize].name);
                if !args.is_empty() {
                    out.push('(');
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            out.push_str(", ");
                        }
                        self.term(a, out);
                    }
                    out.push(')');
                }
            }
        }
    }
}

struct ShowClause<'a> {
    set: &'a ClauseSet,
    clause: &'a Clause,
}

impl fmt::Display for ShowClause<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.clause.lits.is_empty() {
            return write!(f, "$false");
        }
        let parts: Vec<String> = self
            .clause
            .lits
            .iter()
            .map(|l| {
                let mut s = String::new();
                match &l.atom {
                    Atom::Pred(p, args) => {
                        if !l.pos {
                            s.push('~');
                        }
                        self.set.term(&T::App(*p, args.clone()), &mut s);
                    }
                    Atom::Eq(a, b) => {
                        self.set.term(a, &mut s);
                        s.push_str(if l.pos { " = " } else { " != " });
                        self.set.term(b, &mut s);
                    }
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join(" | "))
    }
}

/// Disjunctions whose clause product would exceed this get a definition.
const DISTRIBUTION_LIMIT: usize = 32;

struct Clausifier<'a> {
    problem: &'a Problem,
    set: ClauseSet,
    ids: BTreeMap<(String, Vec<Type>), Sym>,
    /// Sort of every variable introduced so far.
    var_sorts: Vec<Sort>,
    skolems: usize,
    defs: usize,
}

type Cnf = Vec<Vec<Lit>>;

fn free_names(f: &Formula) -> BTreeSet<String> {
    fn term(t: &Term, bound: &[String], out: &mut BTreeSet<String>) {
        match t {
            Term::Var(v) if !bound.contains(&v.name) => {
                out.insert(v.name.clone());
            }
            Term::Var(_) => {}
            Term::App { args, .. } => args.iter().for_each(|a| term(a, bound, out)),
        }
    }
    fn go(f: &Formula, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match f {
            Formula::Pred { args, .. } => args.iter().for_each(|a| term(a, bound, out)),
            Formula::Eq { lhs, rhs, .. } => {
                term(lhs, bound, out);
                term(rhs, bound, out);
            }
            Formula::And(ps) | Formula::Or(ps) => ps.iter().for_each(|p| go(p, bound, out)),
            Formula::Forall(v, b) | Formula::Exists(v, b) => {
                bound.push(v.name.clone());
                go(b, bound, out);
                bound.pop();
            }
            Formula::ForallType(_, b) => go(b, bound, out),
        }
    }
    let mut out = BTreeSet::new();
    go(f, &mut Vec::new(), &mut out);
    out
}

impl Clausifier<'_> {
    fn sym(&mut self, sym: &str, ty_args: &[Type]) -> Sym {
        let key = (sym.to_string(), ty_args.to_vec());
        if let Some(&id) = self.ids.get(&key) {
            return id;
        }
        let sig = &self.problem.sig;
        let args: Vec<Type> = sig.arg_types(sym, ty_args).unwrap_or_default();
        let result = sig.result_type(sym, ty_args);
        let args = args.iter().map(|t| self.set.sort_id(t)).collect();
        let result = result.map(|t| self.set.sort_id(&t));
        let name = if ty_args.is_empty() {
            sym.to_string()
        } else {
            let tys: Vec<String> = ty_args.iter().map(ToString::to_string).collect();
            format!("{sym}<{}>", tys.join(","))
        };
        let id = self.set.add_sym(name, args, result);
        self.ids.insert(key, id);
        id
    }

    fn fresh_var(&mut self, ty: &Type) -> u32 {
        let s = self.set.sort_id(ty);
        self.var_sorts.push(s);
        (self.var_sorts.len() - 1) as u32
    }

    fn term(&mut self, t: &Term, env: &BTreeMap<String, T>) -> T {
        match t {
            Term::Var(v) => env[&v.name].clone(),
            Term::App { sym, ty_args, args } => {
                let f = self.sym(sym, ty_args);
                T::App(f, args.iter().map(|a| self.term(a, env)).collect())
            }
        }
    }

    /// Skolemizes and converts to clauses (as literal lists over global variables).
    fn cnf(&mut self, f: &Formula, env: &mut BTreeMap<String, T>, universals: &[(String, u32)]) -> Cnf {
        match f {
            Formula::Pred { pos, sym, ty_args, args } => {
                let p = self.sym(sym, ty_args);
                let args = args.iter().map(|a| self.term(a, env)).collect();
                vec![vec![Lit { pos: *pos, atom: Atom::Pred(p, args) }]]
            }
            Formula::Eq { pos, lhs, rhs } => {
                let atom = Atom::Eq(self.term(lhs, env), self.term(rhs, env));
                vec![vec![Lit { pos: *pos, atom }]]
            }
            Formula::And(ps) => ps.iter().flat_map(|p| self.cnf(p, env, universals)).collect(),
            Formula::Or(ps) => {
                let mut parts: Vec<Cnf> = ps.iter().map(|p| self.cnf(p, env, universals)).collect();
                while parts.iter().map(Vec::len).product::<usize>() > DISTRIBUTION_LIMIT {
                    let (i, _) = parts.iter().enumerate().max_by_key(|(_, c)| c.len()).expect("nonempty");
                    let part = std::mem::take(&mut parts[i]);
                    parts[i] = self.define(part);
                }
                let mut acc: Cnf = vec![Vec::new()];
                for part in parts {
                    let mut next = Vec::new();
                    for a in &acc {
                        for c in &part {
                            let mut joined = a.clone();
                            joined.extend(c.iter().cloned());
                            next.push(joined);
                        }
                    }
                    acc = next;
                }
                acc
            }
            Formula::Forall(v, b) => {
                let x = self.fresh_var(&v.ty);
                let saved = env.insert(v.name.clone(), T::Var(x));
                let mut us = universals.to_vec();
                us.push((v.name.clone(), x));
                let out = self.cnf(b, env, &us);
                restore(env, &v.name, saved);
                out
            }
            Formula::Exists(v, b) => {
                let sk = self.skolem(v, f, universals);
                let saved = env.insert(v.name.clone(), sk);
                let out = self.cnf(b, env, universals);
                restore(env, &v.name, saved);
                out
            }
            Formula::ForallType(..) => unreachable!("checked ground-typed"),
        }
    }

    fn skolem(&mut self, v: &Var, scope: &Formula, universals: &[(String, u32)]) -> T {
        let free = free_names(scope);
        let deps: Vec<u32> = universals.iter().filter(|(n, _)| free.contains(n)).map(|(_, x)| *x).collect();
        let args = deps.iter().map(|&x| self.var_sorts[x as usize]).collect();
        let result = self.set.sort_id(&v.ty);
        self.skolems += 1;
        let f = self.set.add_sym(format!("{SKOLEM_PREFIX}{}", self.skolems), args, Some(result));
        T::App(f, deps.into_iter().map(T::Var).collect())
    }

    /// Replaces a conjunction of clauses by a fresh atom implying each of them.
    fn define(&mut self, part: Cnf) -> Cnf {
        let mut vars = Vec::new();
        for c in &part {
            for l in c {
                for t in l.atom.args() {
                    t.vars(&mut vars);
                }
            }
        }
        vars.sort_unstable();
        vars.dedup();
        let args = vars.iter().map(|&x| self.var_sorts[x as usize]).collect();
        self.defs += 1;
        let d = self.set.add_sym(format!("$$def{}", self.defs), args, None);
        let atom = Atom::Pred(d, vars.into_iter().map(T::Var).collect());
        for c in part {
            let mut lits = vec![Lit { pos: false, atom: atom.clone() }];
            lits.extend(c);
            self.push(lits);
        }
        vec![vec![Lit { pos: true, atom }]]
    }

    fn push(&mut self, lits: Vec<Lit>) {
        if let Some(c) = Clause::normalize(lits, &self.var_sorts) {
            self.set.clauses.push(c);
        }
    }
}

fn restore(env: &mut BTreeMap<String, T>, name: &str, saved: Option<T>) {
    match saved {
        Some(t) => env.insert(name.to_string(), t),
        None => env.remove(name),
    };
}

/// Skolemizes and distributes, naming large disjuncts. Skolem symbols use the reserved prefix.
pub fn clausify(problem: &Problem) -> Result<ClauseSet, OracleError> {
    if !problem.is_type_ground() {
        return Err(OracleError::Polymorphic("clausification needs a ground-typed problem".into()));
    }
    let mut c = Clausifier {
        problem,
        set: ClauseSet::default(),
        ids: BTreeMap::new(),
        var_sorts: Vec::new(),
        skolems: 0,
        defs: 0,
    };
    for f in problem.formulas() {
        for lits in c.cnf(f, &mut BTreeMap::new(), &[]) {
            c.push(lits);
        }
    }
    Ok(c.set)
}
