//! Seeded random problems for property tests, round-trip checks and benchmarks.
//!
//! Every generated problem is well typed at its level. Terms are built type
//! first: a wanted type is met by a variable in scope, by a function whose
//! result type matches it, or by a fresh universally quantified variable.

use crate::subst::{match_type, TypeSubst};
use crate::syntax::{Formula, Level, Problem, Signature, SymDecl, Term, Type, Var};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

#[derive(Clone, Debug)]
pub struct GenConfig {
    pub level: Level,
    pub formulas: usize,
    pub funs: usize,
    pub preds: usize,
    pub max_arity: usize,
    pub term_depth: usize,
    pub formula_depth: usize,
    /// Chance that a formula of a polymorphic problem quantifies over types.
    pub poly_ratio: f64,
}

impl GenConfig {
    pub fn small(level: Level) -> GenConfig {
        GenConfig {
            level,
            formulas: 3,
            funs: 4,
            preds: 2,
            max_arity: 2,
            term_depth: 2,
            formula_depth: 2,
            poly_ratio: 0.7,
        }
    }

    /// A large polymorphic problem in the shape of a fact-selection corpus.
    pub fn corpus(formulas: usize) -> GenConfig {
        GenConfig {
            level: Level::Poly,
            formulas,
            funs: 40,
            preds: 25,
            max_arity: 3,
            term_depth: 2,
            formula_depth: 2,
            poly_ratio: 0.4,
        }
    }
}

pub fn problem_from_seed(seed: u64, cfg: &GenConfig) -> Problem {
    problem(&mut StdRng::seed_from_u64(seed), cfg)
}

pub fn problem(rng: &mut impl Rng, cfg: &GenConfig) -> Problem {
    let sig = signature(rng, cfg);
    let mut p = Problem::new(sig);
    for i in 0..cfg.formulas {
        let poly = cfg.level == Level::Poly && rng.gen_bool(cfg.poly_ratio);
        let f = formula(rng, &p.sig, cfg, poly);
        p.push(format!("ax{i}"), f);
    }
    p
}

const TYVARS: [&str; 2] = ["A", "B"];

fn base_types(level: Level) -> Vec<Type> {
    match level {
        Level::Untyped => vec![Type::iota()],
        _ => vec![Type::atom("a"), Type::atom("b")],
    }
}

/// A random type over `vars` and the level's constructors.
fn random_type(rng: &mut impl Rng, level: Level, vars: &[String], depth: usize) -> Type {
    if level == Level::Poly && depth > 0 && rng.gen_bool(0.3) {
        return Type::con("list", vec![random_type(rng, level, vars, depth - 1)]);
    }
    let mut leaves = base_types(level);
    leaves.extend(vars.iter().map(Type::var));
    leaves.choose(rng).unwrap().clone()
}

pub fn signature(rng: &mut impl Rng, cfg: &GenConfig) -> Signature {
    let mut sig = Signature::new(cfg.level);
    if cfg.level != Level::Untyped {
        sig.type_ctors.insert("a".into(), 0);
        sig.type_ctors.insert("b".into(), 0);
    }
    if cfg.level == Level::Poly {
        sig.type_ctors.insert("list".into(), 1);
    }
    let decl_vars = |rng: &mut dyn rand::RngCore| -> Vec<String> {
        if cfg.level != Level::Poly {
            return Vec::new();
        }
        let n = rng.gen_range(0..=TYVARS.len());
        TYVARS[..n].iter().map(|s| s.to_string()).collect()
    };
    for i in 0..cfg.funs {
        let tyvars = decl_vars(rng);
        // The first two functions are constants so terms can always bottom out.
        let arity = if i < 2 { 0 } else { rng.gen_range(1..=cfg.max_arity.max(1)) };
        let args = (0..arity).map(|_| random_type(rng, cfg.level, &tyvars, 1)).collect();
        let result = random_type(rng, cfg.level, &tyvars, 1);
        sig.add_fun(format!("f{i}"), SymDecl::fun(tyvars, args, result));
    }
    for i in 0..cfg.preds {
        let tyvars = decl_vars(rng);
        let arity = rng.gen_range(0..=cfg.max_arity);
        let args = (0..arity).map(|_| random_type(rng, cfg.level, &tyvars, 1)).collect();
        sig.add_pred(format!("p{i}"), SymDecl::pred(tyvars, args));
    }
    sig
}

struct FormulaGen<'a, R> {
    rng: &'a mut R,
    sig: &'a Signature,
    cfg: &'a GenConfig,
    tyvars: Vec<String>,
    bound: Vec<Var>,
    free: Vec<Var>,
    next: usize,
}

/// One closed formula; `poly` allows type variables.
pub fn formula(rng: &mut impl Rng, sig: &Signature, cfg: &GenConfig, poly: bool) -> Formula {
    let tyvars = if poly { TYVARS[..rng.gen_range(1..=TYVARS.len())].iter().map(|s| s.to_string()).collect() } else { Vec::new() };
    let mut g = FormulaGen { rng, sig, cfg, tyvars, bound: Vec::new(), free: Vec::new(), next: 0 };
    let body = g.formula(cfg.formula_depth);
    let f = Formula::forall_all(std::mem::take(&mut g.free), body);
    let mut used = Vec::new();
    f.visit_types(&mut |t| t.collect_vars(&mut used));
    let binders = g.tyvars.iter().filter(|a| used.contains(a)).cloned().collect();
    Formula::forall_types(binders, f)
}

impl<R: Rng> FormulaGen<'_, R> {
    fn fresh(&mut self, ty: Type, universal: bool) -> Var {
        let name = format!("X{}", self.next);
        self.next += 1;
        if universal {
            Var::univ(name, ty)
        } else {
            Var::exist(name, ty)
        }
    }

    fn ty(&mut self) -> Type {
        random_type(self.rng, self.cfg.level, &self.tyvars, 1)
    }

    fn formula(&mut self, depth: usize) -> Formula {
        if depth == 0 || self.rng.gen_bool(0.35) {
            return self.atom();
        }
        match self.rng.gen_range(0..4) {
            0 | 1 => {
                let n = self.rng.gen_range(2..=3);
                let parts = (0..n).map(|_| self.formula(depth - 1)).collect();
                if self.rng.gen_bool(0.5) {
                    Formula::and(parts)
                } else {
                    Formula::or(parts)
                }
            }
            k => {
                let ty = self.ty();
                let v = self.fresh(ty, k == 2);
                self.bound.push(v.clone());
                let body = self.formula(depth - 1);
                self.bound.pop();
                if k == 2 {
                    Formula::forall(v, body)
                } else {
                    Formula::exists(v, body)
                }
            }
        }
    }

    fn atom(&mut self) -> Formula {
        let pos = self.rng.gen_bool(0.6);
        let preds: Vec<(&String, &SymDecl)> = self.sig.preds.iter().collect();
        if preds.is_empty() || self.rng.gen_bool(0.3) {
            let ty = self.ty();
            let (l, r) = (self.term(&ty, self.cfg.term_depth), self.term(&ty, self.cfg.term_depth));
            return Formula::Eq { pos, lhs: l, rhs: r };
        }
        let (name, decl) = *preds.choose(self.rng).unwrap();
        let ty_args: Vec<Type> = decl.tyvars.iter().map(|_| self.ty()).collect();
        let rho = TypeSubst::from_pairs(&decl.tyvars, &ty_args);
        let args = decl.args.iter().map(|t| self.term(&rho.apply(t), self.cfg.term_depth)).collect();
        Formula::Pred { pos, sym: name.clone(), ty_args, args }
    }

    fn term(&mut self, ty: &Type, depth: usize) -> Term {
        let vars: Vec<Var> = self.bound.iter().chain(&self.free).filter(|v| &v.ty == ty).cloned().collect();
        let funs: Vec<(String, SymDecl, TypeSubst)> = self
            .sig
            .funs
            .iter()
            .filter(|(_, d)| depth > 0 || d.args.is_empty())
            .filter_map(|(n, d)| match_type(d.result.as_ref()?, ty).map(|s| (n.clone(), d.clone(), s)))
            .collect();
        if !vars.is_empty() && (funs.is_empty() || self.rng.gen_bool(0.4)) {
            return Term::Var(vars.choose(self.rng).unwrap().clone());
        }
        if let Some((name, decl, mut rho)) = funs.choose(self.rng).cloned() {
            for a in &decl.tyvars {
                if !rho.0.contains_key(a) {
                    let t = self.ty();
                    rho.0.insert(a.clone(), t);
                }
            }
            let ty_args = decl.tyvars.iter().map(|a| rho.0[a].clone()).collect();
            let args = decl.args.iter().map(|t| self.term(&rho.apply(t), depth.saturating_sub(1))).collect();
            return Term::App { sym: name, ty_args, args };
        }
        let v = self.fresh(ty.clone(), true);
        self.free.push(v.clone());
        Term::Var(v)
    }
}
