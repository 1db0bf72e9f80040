//! Heuristic monomorphisation: bounded instantiation of type variables,
//! followed by mangling every ground symbol instance into its own symbol.

use crate::analysis::{AnalysisConfig, InfRegistry};
use crate::encode::sanitize;
use crate::subst::{is_instance, match_into, TypeSubst};
use crate::syntax::{Formula, Level, Named, Origin, Problem, Signature, SymDecl, Term, Type, Var};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MonoConfig {
    /// Maximal number of refinement rounds (K).
    pub iterations: usize,
    /// Maximal number of formulas added beyond the monomorphic ones (Delta).
    pub budget: usize,
}

impl Default for MonoConfig {
    fn default() -> MonoConfig {
        MonoConfig { iterations: 3, budget: 200 }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MonoError {
    #[error("monomorphisation needs a typed problem, got an untyped one")]
    Untyped,
    #[error("type variable left in `{0}` after instantiation")]
    ResidualTypeVariable(String),
}

/// A symbol applied at ground type arguments.
pub type MonoSymbol = (String, Vec<Type>);

/// One kept instance of a polymorphic formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub name: String,
    pub source: String,
    pub subst: TypeSubst,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MonoStats {
    /// Refinement rounds actually run.
    pub rounds: usize,
    pub mono_formulas: usize,
    pub new_formulas: usize,
    /// Instances found but not admitted because of the budget.
    pub over_budget: usize,
    /// Polymorphic formulas without any kept instance.
    pub dropped: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct Monomorphised {
    pub problem: Problem,
    pub instances: Vec<Instance>,
    pub stats: MonoStats,
    pub symbols: BTreeMap<MonoSymbol, String>,
    pub types: BTreeMap<Type, String>,
}

impl Monomorphised {
    /// The mangled names of the ground types for which `pred` holds.
    pub fn mangled_types(&self, pred: impl Fn(&Type) -> bool) -> Vec<Type> {
        self.types.iter().filter(|(t, _)| pred(t)).map(|(_, n)| Type::atom(n.clone())).collect()
    }

    /// Carries an analysis configuration over to the mangled problem: a mangled
    /// type is infinite (or protected) when its source type is.
    pub fn translate_config(&self, cfg: &AnalysisConfig) -> AnalysisConfig {
        let protect = |t: &Type| cfg.protect_extra.iter().any(|p| is_instance(t, p));
        AnalysisConfig {
            inf: InfRegistry::new(self.mangled_types(|t| cfg.inf.is_infinite(t))),
            policy: cfg.policy,
            protect_extra: self.mangled_types(protect),
        }
    }
}

/// Symbols applied at ground type arguments in `f`.
pub fn symbol_instances(f: &Formula) -> BTreeSet<MonoSymbol> {
    let mut out = BTreeSet::new();
    mono_symbols(f, &mut out);
    out
}

fn mono_symbols(f: &Formula, out: &mut BTreeSet<MonoSymbol>) {
    f.visit_terms(&mut |t| {
        if let Term::App { sym, ty_args, .. } = t {
            if ty_args.iter().all(Type::is_ground) {
                out.insert((sym.clone(), ty_args.clone()));
            }
        }
    });
    f.visit_atoms(&mut |a| {
        if let Formula::Pred { sym, ty_args, .. } = a {
            if ty_args.iter().all(Type::is_ground) {
                out.insert((sym.clone(), ty_args.clone()));
            }
        }
    });
}

/// Symbol occurrences whose type arguments mention type variables, deduplicated in order.
fn poly_occurrences(f: &Formula) -> Vec<MonoSymbol> {
    let mut out: Vec<MonoSymbol> = Vec::new();
    let mut push = |sym: &String, ty_args: &Vec<Type>| {
        if !ty_args.iter().all(Type::is_ground) && !out.iter().any(|(s, a)| s == sym && a == ty_args) {
            out.push((sym.clone(), ty_args.clone()));
        }
    };
    f.visit_terms(&mut |t| {
        if let Term::App { sym, ty_args, .. } = t {
            push(sym, ty_args);
        }
    });
    f.visit_atoms(&mut |a| {
        if let Formula::Pred { sym, ty_args, .. } = a {
            push(sym, ty_args);
        }
    });
    out
}

/// Ground types a pool makes available for otherwise unconstrained variables.
fn pool_types(sig: &Signature, pool: &BTreeSet<MonoSymbol>) -> BTreeSet<Type> {
    let mut out = BTreeSet::new();
    for (sym, tys) in pool {
        out.extend(tys.iter().cloned());
        if let Some(args) = sig.arg_types(sym, tys) {
            out.extend(args.into_iter().filter(Type::is_ground));
        }
        if let Some(r) = sig.result_type(sym, tys) {
            if r.is_ground() {
                out.insert(r);
            }
        }
    }
    if out.is_empty() {
        out.extend(sig.type_ctors.iter().filter(|(_, &n)| n == 0).map(|(k, _)| Type::atom(k.clone())));
    }
    out
}

struct Axiom<'a> {
    named: &'a Named,
    tyvars: Vec<String>,
    occurrences: Vec<MonoSymbol>,
    subs: Vec<BTreeMap<String, Type>>,
    complete: Vec<BTreeMap<String, Type>>,
}

/// Upper bound on partial substitutions kept per formula, to curb blow-up.
fn subst_cap(cfg: &MonoConfig) -> usize {
    4 * cfg.budget + 64
}

impl Axiom<'_> {
    /// Refines the substitution set against the pool; returns newly completed substitutions.
    fn refine(&mut self, pool: &BTreeSet<MonoSymbol>, types: &BTreeSet<Type>, cap: usize) -> Vec<BTreeMap<String, Type>> {
        for (sym, pattern) in &self.occurrences {
            let mut added = Vec::new();
            for s in &self.subs {
                for (psym, ground) in pool.range((sym.clone(), Vec::new())..) {
                    if psym != sym {
                        break;
                    }
                    if ground.len() != pattern.len() {
                        continue;
                    }
                    let mut s2 = s.clone();
                    if pattern.iter().zip(ground).all(|(p, g)| match_into(p, g, &mut s2)) && s2 != *s {
                        added.push(s2);
                    }
                }
            }
            for s in added {
                if self.subs.len() >= cap {
                    break;
                }
                if !self.subs.contains(&s) {
                    self.subs.push(s);
                }
            }
        }
        // Maximal substitutions get their unbound variables filled from the
        // pool's types; this covers phantom type arguments.
        let mut fresh = Vec::new();
        for s in &self.subs {
            let extended = self.subs.iter().any(|t| t.len() > s.len() && s.iter().all(|(k, v)| t.get(k) == Some(v)));
            if extended {
                continue;
            }
            let free: Vec<String> = self.tyvars.iter().filter(|a| !s.contains_key(*a)).cloned().collect();
            for c in complete_free(s, &free, types) {
                if !self.complete.contains(&c) && self.complete.len() < cap {
                    self.complete.push(c.clone());
                    fresh.push(c);
                }
            }
        }
        fresh
    }
}

/// Extends `s` by every assignment of pool types to the unconstrained variables.
fn complete_free(s: &BTreeMap<String, Type>, free: &[String], types: &BTreeSet<Type>) -> Vec<BTreeMap<String, Type>> {
    let mut out = vec![s.clone()];
    for a in free {
        out = out
            .into_iter()
            .flat_map(|m| {
                types.iter().map(move |t| {
                    let mut m = m.clone();
                    m.insert(a.clone(), t.clone());
                    m
                })
            })
            .collect();
    }
    out
}

pub fn monomorphise(problem: &Problem, cfg: &MonoConfig) -> Result<Monomorphised, MonoError> {
    if problem.level() == Level::Untyped {
        return Err(MonoError::Untyped);
    }
    let sig = &problem.sig;

    // Stage 1: monomorphic formulas seed the pool.
    let mut pool = BTreeSet::new();
    let mut axioms = Vec::new();
    let mut mono = Vec::new();
    for nf in &problem.formulas {
        if nf.formula.is_type_ground() {
            mono_symbols(&nf.formula, &mut pool);
            mono.push(nf);
        } else {
            let (tyvars, body) = nf.formula.split_type_binders();
            let occurrences = poly_occurrences(body);
            axioms.push(Axiom { named: nf, tyvars, occurrences, subs: vec![BTreeMap::new()], complete: Vec::new() });
        }
    }

    // Stage 2: refine substitutions while new mono-symbols emerge.
    let cap = subst_cap(cfg);
    let mut rounds = 0;
    while rounds < cfg.iterations && !axioms.is_empty() {
        rounds += 1;
        let types = pool_types(sig, &pool);
        let mut emerged = BTreeSet::new();
        for ax in &mut axioms {
            for s in ax.refine(&pool, &types, cap) {
                let inst = TypeSubst(s).apply_formula(ax.named.formula.split_type_binders().1);
                mono_symbols(&inst, &mut emerged);
            }
        }
        let before = pool.len();
        pool.extend(emerged);
        if pool.len() == before {
            break;
        }
    }

    // Stage 3: admit instances round-robin across source formulas, within budget.
    let mut queues: Vec<std::collections::VecDeque<&BTreeMap<String, Type>>> =
        axioms.iter().map(|a| a.complete.iter().collect()).collect();
    let mut admitted: Vec<Vec<&BTreeMap<String, Type>>> = vec![Vec::new(); axioms.len()];
    let mut total = 0;
    'outer: loop {
        let mut progress = false;
        for (i, q) in queues.iter_mut().enumerate() {
            if total >= cfg.budget {
                break 'outer;
            }
            if let Some(s) = q.pop_front() {
                admitted[i].push(s);
                total += 1;
                progress = true;
            }
        }
        if !progress {
            break;
        }
    }
    let over_budget = queues.iter().map(|q| q.len()).sum();

    let mut ground: Vec<Named> = mono.iter().map(|n| (*n).clone()).collect();
    let mut instances = Vec::new();
    let mut dropped = Vec::new();
    // Keep source order: instances follow the polymorphic formula's position.
    let mut order: Vec<(usize, Named)> = Vec::new();
    for (i, ax) in axioms.iter().enumerate() {
        let mut kept = 0;
        for s in &admitted[i] {
            let rho = TypeSubst((*s).clone());
            let f = rho.apply_formula(ax.named.formula.split_type_binders().1);
            if !f.is_type_ground() {
                continue;
            }
            kept += 1;
            let suffix: Vec<String> = ax.tyvars.iter().filter_map(|a| s.get(a)).map(|t| sanitize(&t.to_string())).collect();
            let name = format!("{}_{}", ax.named.name, suffix.join("_"));
            instances.push(Instance { name: name.clone(), source: ax.named.name.clone(), subst: rho });
            let pos = problem.formulas.iter().position(|n| std::ptr::eq(n, ax.named)).unwrap_or(0);
            order.push((
                pos,
                Named { name, role: ax.named.role, formula: f, origin: Origin::Translated(ax.named.name.clone()) },
            ));
        }
        if kept == 0 {
            dropped.push(ax.named.name.clone());
        }
    }
    let mut positioned: Vec<(usize, Named)> = problem
        .formulas
        .iter()
        .enumerate()
        .filter(|(_, n)| n.formula.is_type_ground())
        .map(|(i, n)| (i, n.clone()))
        .collect();
    positioned.extend(order);
    positioned.sort_by_key(|(i, _)| *i);
    ground.clear();
    ground.extend(positioned.into_iter().map(|(_, n)| n));
    dedup_names(&mut ground);

    let instantiated = Problem { sig: sig.clone(), formulas: ground };
    let (problem_out, symbols, types) = mangle(&instantiated)?;
    let stats = MonoStats { rounds, mono_formulas: mono.len(), new_formulas: total, over_budget, dropped };
    Ok(Monomorphised { problem: problem_out, instances, stats, symbols, types })
}

fn dedup_names(fs: &mut [Named]) {
    let mut seen = BTreeSet::new();
    for n in fs.iter_mut() {
        let mut name = n.name.clone();
        let mut k = 2;
        while !seen.insert(name.clone()) {
            name = format!("{}_{k}", n.name);
            k += 1;
        }
        n.name = name;
    }
}

/// Fresh names from a deterministic base, with numeric suffixes on collision.
struct Namer {
    used: BTreeSet<String>,
}

impl Namer {
    fn fresh(&mut self, base: String) -> String {
        let mut name = base.clone();
        let mut k = 2;
        while !self.used.insert(name.clone()) {
            name = format!("{base}_{k}");
            k += 1;
        }
        name
    }
}

/// Built-in names such as `$i` lose their `$` inside a mangled word.
fn word(name: &str) -> &str {
    name.trim_start_matches('$')
}

fn type_base(t: &Type) -> String {
    match t {
        Type::Var(a) => a.clone(),
        Type::App(k, args) if args.is_empty() => k.clone(),
        Type::App(k, args) => {
            let mut s = k.clone();
            for a in args {
                s.push('_');
                s.push_str(word(&type_base(a)));
            }
            s
        }
    }
}

/// Maps every ground symbol instance to a fresh monomorphic symbol and every
/// ground type to a nullary constructor. Fails on a leftover type variable.
pub fn mangle(problem: &Problem) -> Result<(Problem, BTreeMap<MonoSymbol, String>, BTreeMap<Type, String>), MonoError> {
    for n in &problem.formulas {
        if !n.formula.is_type_ground() {
            return Err(MonoError::ResidualTypeVariable(n.name.clone()));
        }
    }
    let sig = &problem.sig;
    let mut syms = BTreeSet::new();
    for f in problem.formulas() {
        mono_symbols(f, &mut syms);
    }
    let mut all_types: BTreeSet<Type> = problem.ground_types();
    for (s, tys) in &syms {
        all_types.extend(sig.arg_types(s, tys).unwrap_or_default());
        all_types.extend(sig.result_type(s, tys));
    }
    // Nullary constructors keep their names when nothing clashes.
    let mut namer = Namer { used: BTreeSet::new() };
    let mut types = BTreeMap::new();
    let (atoms, compound): (Vec<Type>, Vec<Type>) =
        all_types.into_iter().partition(|t| matches!(t, Type::App(_, a) if a.is_empty()));
    for t in atoms.into_iter().chain(compound) {
        let name = namer.fresh(type_base(&t));
        types.insert(t, name);
    }

    let mut symbols = BTreeMap::new();
    let mut out_sig = Signature::new(Level::Mono);
    for name in types.values() {
        out_sig.type_ctors.insert(name.clone(), 0);
    }
    let mut sym_namer = Namer { used: BTreeSet::new() };
    // Monomorphic source symbols keep their names.
    let ordered: Vec<&MonoSymbol> =
        syms.iter().filter(|(_, t)| t.is_empty()).chain(syms.iter().filter(|(_, t)| !t.is_empty())).collect();
    for key @ (s, tys) in ordered {
        let base = if tys.is_empty() {
            s.clone()
        } else {
            let parts: Vec<String> = tys.iter().map(|t| word(&types[t]).to_string()).collect();
            format!("{s}_{}", parts.join("_"))
        };
        let name = sym_namer.fresh(base);
        let Some(decl) = sig.sym(s) else { continue };
        let rho = TypeSubst::from_pairs(&decl.tyvars, tys);
        let args = decl.args.iter().map(|t| types[&rho.apply(t)].clone()).map(Type::atom).collect();
        match &decl.result {
            Some(r) => out_sig.add_fun(name.clone(), SymDecl::fun(vec![], args, Type::atom(types[&rho.apply(r)].clone()))),
            None => out_sig.add_pred(name.clone(), SymDecl::pred(vec![], args)),
        }
        symbols.insert(key.clone(), name);
    }
    out_sig.ensure_iota();

    let m = Mangler { symbols: &symbols, types: &types };
    let formulas = problem
        .formulas
        .iter()
        .map(|n| Named { formula: m.formula(&n.formula), ..n.clone() })
        .collect();
    Ok((Problem { sig: out_sig, formulas }, symbols, types))
}

struct Mangler<'a> {
    symbols: &'a BTreeMap<MonoSymbol, String>,
    types: &'a BTreeMap<Type, String>,
}

impl Mangler<'_> {
    fn ty(&self, t: &Type) -> Type {
        Type::atom(self.types.get(t).cloned().unwrap_or_else(|| type_base(t)))
    }

    fn sym(&self, s: &str, tys: &[Type]) -> String {
        self.symbols.get(&(s.to_string(), tys.to_vec())).cloned().unwrap_or_else(|| s.to_string())
    }

    fn var(&self, v: &Var) -> Var {
        Var::new(v.name.clone(), self.ty(&v.ty), v.kind)
    }

    fn term(&self, t: &Term) -> Term {
        match t {
            Term::Var(v) => Term::Var(self.var(v)),
            Term::App { sym, ty_args, args } => {
                Term::app(self.sym(sym, ty_args), vec![], args.iter().map(|a| self.term(a)).collect())
            }
        }
    }

    fn formula(&self, f: &Formula) -> Formula {
        match f {
            Formula::Pred { pos, sym, ty_args, args } => Formula::Pred {
                pos: *pos,
                sym: self.sym(sym, ty_args),
                ty_args: vec![],
                args: args.iter().map(|a| self.term(a)).collect(),
            },
            Formula::Eq { pos, lhs, rhs } => Formula::Eq { pos: *pos, lhs: self.term(lhs), rhs: self.term(rhs) },
            Formula::And(ps) => Formula::And(ps.iter().map(|p| self.formula(p)).collect()),
            Formula::Or(ps) => Formula::Or(ps.iter().map(|p| self.formula(p)).collect()),
            Formula::Forall(v, b) => Formula::Forall(self.var(v), Box::new(self.formula(b))),
            Formula::Exists(v, b) => Formula::Exists(self.var(v), Box::new(self.formula(b))),
            Formula::ForallType(a, b) => Formula::ForallType(a.clone(), Box::new(self.formula(b))),
        }
    }
}
