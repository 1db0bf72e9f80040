//! The tag and guard stages. All eight protector encodings share one
//! translator, parameterized by what is added (tags or guards) and how
//! eagerly (traditional, cover-based, lightweight, featherweight).

use crate::analysis::{types_of, CoverAssignment, MonoVerdicts};
use crate::subst::is_instance;
use crate::syntax::{
    Formula, Level, Named, Origin, Problem, Role, Signature, SymDecl, Term, Type, Var, VarKind, GUARD, TAG,
};
use crate::vars::{naked_vars, undercover_vars};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Protection {
    Tags,
    Guards,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flavor {
    Traditional,
    Cover,
    Light,
    Feather,
}

/// Name of the per-type tag or guard symbol of a monomorphic encoding.
pub fn family_symbol(kind: Protection, ty: &Type) -> String {
    let base = match kind {
        Protection::Tags => TAG,
        Protection::Guards => GUARD,
    };
    format!("{base}_{}", sanitize(&ty.to_string()))
}

/// Keeps `[A-Za-z0-9_]`, maps everything else to `_`, drops leading `$`.
pub fn sanitize(s: &str) -> String {
    let s = s.trim_start_matches('$');
    let mut out = String::new();
    for c in s.chars() {
        match c {
            c if c.is_ascii_alphanumeric() || c == '_' => out.push(c),
            ' ' => {}
            ')' => {}
            _ => out.push('_'),
        }
    }
    out.trim_end_matches('_').to_string()
}

struct Protector<'a> {
    sig: &'a Signature,
    kind: Protection,
    flavor: Flavor,
    verdicts: Option<&'a MonoVerdicts>,
    covers: Option<&'a CoverAssignment>,
    /// Per-type symbol names at the monomorphic level.
    family: Option<BTreeMap<Type, String>>,
}

impl<'a> Protector<'a> {
    fn new(
        problem: &'a Problem,
        kind: Protection,
        flavor: Flavor,
        verdicts: Option<&'a MonoVerdicts>,
        covers: Option<&'a CoverAssignment>,
    ) -> Protector<'a> {
        let family = (problem.level() == Level::Mono).then(|| {
            let mut taken: BTreeSet<String> = BTreeSet::new();
            let mut map = BTreeMap::new();
            for k in problem.sig.type_ctors.keys() {
                let ty = Type::atom(k.clone());
                let base = family_symbol(kind, &ty);
                let mut name = base.clone();
                let mut i = 1;
                while taken.contains(&name) {
                    i += 1;
                    name = format!("{base}_{i}");
                }
                taken.insert(name.clone());
                map.insert(ty, name);
            }
            map
        });
        Protector { sig: &problem.sig, kind, flavor, verdicts, covers, family }
    }

    fn nonmono(&self, ty: &Type) -> bool {
        match self.flavor {
            Flavor::Traditional | Flavor::Cover => true,
            Flavor::Light | Flavor::Feather => !self.verdicts.expect("verdicts").verdict(ty),
        }
    }

    fn ty(&self, t: &Term) -> Type {
        t.ty(self.sig).expect("well-typed input")
    }

    fn tag(&self, ty: &Type, t: Term) -> Term {
        match &self.family {
            Some(f) => Term::app(f[ty].clone(), vec![], vec![t]),
            None => Term::app(TAG, vec![ty.clone()], vec![t]),
        }
    }

    fn guard(&self, ty: &Type, t: Term) -> Formula {
        match &self.family {
            Some(f) => Formula::pred(f[ty].clone(), vec![], vec![t]),
            None => Formula::pred(GUARD, vec![ty.clone()], vec![t]),
        }
    }

    /// `t⟨σ⟩(X) ≈ X` or `g⟨σ⟩(X)`.
    fn witness(&self, v: &Var) -> Formula {
        match self.kind {
            Protection::Tags => Formula::eq(self.tag(&v.ty, Term::var(v)), Term::var(v)),
            Protection::Guards => self.guard(&v.ty, Term::var(v)),
        }
    }

    fn extend_signature(&self, sig: &mut Signature) {
        match (&self.family, self.kind) {
            (Some(f), Protection::Tags) => {
                for (ty, name) in f {
                    sig.add_fun(name.clone(), SymDecl::fun(vec![], vec![ty.clone()], ty.clone()));
                }
            }
            (Some(f), Protection::Guards) => {
                for (ty, name) in f {
                    sig.add_pred(name.clone(), SymDecl::pred(vec![], vec![ty.clone()]));
                }
            }
            (None, Protection::Tags) => {
                sig.add_fun(TAG, SymDecl::fun(vec!["A".into()], vec![Type::var("A")], Type::var("A")))
            }
            (None, Protection::Guards) => sig.add_pred(GUARD, SymDecl::pred(vec!["A".into()], vec![Type::var("A")])),
        }
    }

    // Term and formula translation.

    fn term(&self, t: &Term) -> Term {
        if self.kind == Protection::Guards {
            return t.clone();
        }
        match self.flavor {
            Flavor::Traditional | Flavor::Light => {
                let inner = match t {
                    Term::Var(_) => t.clone(),
                    Term::App { sym, ty_args, args } => {
                        Term::app(sym.clone(), ty_args.clone(), args.iter().map(|a| self.term(a)).collect())
                    }
                };
                let ty = self.ty(t);
                if self.nonmono(&ty) {
                    self.tag(&ty, inner)
                } else {
                    inner
                }
            }
            Flavor::Cover => match t {
                Term::Var(_) => t.clone(),
                Term::App { sym, ty_args, args } => Term::app(sym.clone(), ty_args.clone(), self.cover_args(sym, args)),
            },
            Flavor::Feather => match t {
                Term::Var(_) => t.clone(),
                Term::App { sym, ty_args, args } => {
                    Term::app(sym.clone(), ty_args.clone(), args.iter().map(|a| self.term(a)).collect())
                }
            },
        }
    }

    /// `ct_s`: tags universal variables at cover positions.
    fn cover_args(&self, sym: &str, args: &[Term]) -> Vec<Term> {
        let covers = self.covers.expect("covers");
        args.iter()
            .enumerate()
            .map(|(j, a)| {
                let t = self.term(a);
                if covers.contains(sym, j) && a.is_universal_var() {
                    self.tag(&self.ty(a), t)
                } else {
                    t
                }
            })
            .collect()
    }

    /// A side of a positive equation.
    fn eq_side(&self, t: &Term) -> Term {
        let tagged = match self.flavor {
            Flavor::Cover => t.is_universal_var(),
            Flavor::Feather => t.is_universal_var() && self.nonmono(&self.ty(t)),
            _ => false,
        };
        if tagged {
            self.tag(&self.ty(t), t.clone())
        } else {
            self.term(t)
        }
    }

    fn formula(&self, f: &Formula) -> Formula {
        match f {
            Formula::Pred { pos, sym, ty_args, args } => {
                let args = if self.kind == Protection::Tags && self.flavor == Flavor::Cover {
                    self.cover_args(sym, args)
                } else {
                    args.iter().map(|a| self.term(a)).collect()
                };
                Formula::Pred { pos: *pos, sym: sym.clone(), ty_args: ty_args.clone(), args }
            }
            Formula::Eq { pos: true, lhs, rhs } if self.kind == Protection::Tags => {
                Formula::eq(self.eq_side(lhs), self.eq_side(rhs))
            }
            Formula::Eq { pos, lhs, rhs } => Formula::Eq { pos: *pos, lhs: self.term(lhs), rhs: self.term(rhs) },
            Formula::And(ps) => Formula::and(ps.iter().map(|p| self.formula(p)).collect()),
            Formula::Or(ps) => Formula::or(ps.iter().map(|p| self.formula(p)).collect()),
            Formula::ForallType(a, b) => Formula::forall_type(a.clone(), self.formula(b)),
            Formula::Forall(..) => {
                let (vars, body) = block(f, VarKind::Universal);
                let guards = self.forall_guards(&vars, body);
                Formula::forall_all(vars, Formula::implies(guards, self.formula(body)))
            }
            Formula::Exists(..) => {
                let (vars, body) = block(f, VarKind::Existential);
                let mut parts: Vec<Formula> =
                    vars.iter().filter(|v| self.protects_exists(v)).map(|v| self.witness(v)).collect();
                parts.push(self.formula(body));
                Formula::exists_all(vars, Formula::and(parts))
            }
        }
    }

    fn forall_guards(&self, vars: &[Var], body: &Formula) -> Vec<Formula> {
        if self.kind == Protection::Tags {
            return Vec::new();
        }
        let wanted: Box<dyn Fn(&Var) -> bool> = match self.flavor {
            Flavor::Traditional => Box::new(|_| true),
            Flavor::Cover => {
                let uv = undercover_vars(body, self.covers.expect("covers"));
                Box::new(move |v| uv.contains(v))
            }
            Flavor::Light => Box::new(|v| self.nonmono(&v.ty)),
            Flavor::Feather => {
                let nv = naked_vars(body);
                Box::new(move |v| self.nonmono(&v.ty) && nv.contains(v))
            }
        };
        vars.iter().filter(|v| wanted(v)).map(|v| self.guard(&v.ty, Term::var(v))).collect()
    }

    fn protects_exists(&self, v: &Var) -> bool {
        match (self.kind, self.flavor) {
            (Protection::Tags, Flavor::Traditional | Flavor::Light) => false,
            (Protection::Tags, Flavor::Cover) => true,
            (Protection::Tags, Flavor::Feather) => self.nonmono(&v.ty),
            (Protection::Guards, Flavor::Traditional | Flavor::Cover) => true,
            (Protection::Guards, Flavor::Light | Flavor::Feather) => self.nonmono(&v.ty),
        }
    }

    // Axioms.

    fn axioms(&self, problem: &Problem, v_set: &[Type]) -> Vec<Named> {
        use Flavor::*;
        use Protection::*;
        // (function axioms for every symbol, for nonmonotonic results only, inhabitation)
        let (all_funs, nonmono_funs, inhabit) = match (self.kind, self.flavor) {
            (Tags, Traditional) | (Tags, Light) => (false, false, false),
            (Guards, Traditional) | (_, Cover) => (true, false, true),
            (_, Light) | (_, Feather) => (false, true, true),
        };
        let mut out = Vec::new();
        for (name, decl) in &self.sig.funs {
            let result = decl.result.as_ref().expect("function");
            if all_funs || (nonmono_funs && self.nonmono(result)) {
                out.push(axiom("typing", name, self.function_axiom(name, decl)));
            }
        }
        if matches!(self.flavor, Light | Feather) && self.family.is_none() {
            for sigma in v_set {
                let x = Var::univ("X", sigma.clone());
                let f = Formula::forall_types(sigma.vars(), Formula::forall(x.clone(), self.witness(&x)));
                out.push(axiom("monotype", &sigma.to_string(), f));
            }
        }
        if !inhabit {
            return out;
        }
        let types = if let (Traditional | Cover, Some(f)) = (self.flavor, &self.family) {
            f.keys().cloned().collect()
        } else if matches!(self.flavor, Traditional | Cover) {
            vec![Type::var("A")]
        } else {
            self.inhabitation_types(problem)
        };
        for sigma in types {
            let x = Var::exist("X", sigma.clone());
            let f = Formula::forall_types(sigma.vars(), Formula::exists(x.clone(), self.witness(&x)));
            out.push(axiom("inhabit", &sigma.to_string(), f));
        }
        out
    }

    fn function_axiom(&self, name: &str, decl: &SymDecl) -> Formula {
        let n = decl.args.len();
        let xs: Vec<Var> = decl
            .args
            .iter()
            .enumerate()
            .map(|(j, t)| Var::univ(if n == 1 { "X".to_string() } else { format!("X{}", j + 1) }, t.clone()))
            .collect();
        let ty_args: Vec<Type> = decl.tyvars.iter().map(Type::var).collect();
        let result = decl.result.clone().expect("function");
        let terms: Vec<Term> = xs.iter().map(Term::var).collect();
        let body = match self.kind {
            Protection::Tags => {
                let args = if self.flavor == Flavor::Cover { self.cover_args(name, &terms) } else { terms };
                let app = Term::app(name, ty_args, args);
                Formula::eq(self.tag(&result, app.clone()), app)
            }
            Protection::Guards => {
                let premises = match self.flavor {
                    Flavor::Traditional => xs.iter().map(|x| self.guard(&x.ty, Term::var(x))).collect(),
                    Flavor::Cover => {
                        let covers = self.covers.expect("covers");
                        xs.iter()
                            .enumerate()
                            .filter(|(j, _)| covers.contains(name, *j))
                            .map(|(_, x)| self.guard(&x.ty, Term::var(x)))
                            .collect()
                    }
                    _ => Vec::new(),
                };
                Formula::implies(premises, self.guard(&result, Term::app(name, ty_args, terms)))
            }
        };
        Formula::forall_types(decl.tyvars.clone(), Formula::forall_all(xs, body))
    }

    /// Nonmonotonic types not already witnessed by some function's result type.
    fn inhabitation_types(&self, problem: &Problem) -> Vec<Type> {
        let candidates: Vec<Type> = if self.family.is_some() {
            problem.sig.type_ctors.keys().map(|k| Type::atom(k.clone())).collect()
        } else {
            types_of(problem)
        };
        candidates
            .into_iter()
            .filter(|s| self.nonmono(s))
            .filter(|s| !self.sig.funs.values().any(|d| d.result.as_ref().is_some_and(|r| is_instance(s, r))))
            .collect()
    }
}

fn axiom(schema: &str, symbol: &str, formula: Formula) -> Named {
    Named {
        name: format!("ax_{schema}_{}", sanitize(symbol)),
        role: Role::Axiom,
        formula,
        origin: Origin::Axiom { schema: schema.to_string(), symbol: symbol.to_string() },
    }
}

/// Consecutive binders of one kind and the formula below them.
fn block(f: &Formula, kind: VarKind) -> (Vec<Var>, &Formula) {
    let mut vars = Vec::new();
    let mut cur = f;
    loop {
        match (cur, kind) {
            (Formula::Forall(v, b), VarKind::Universal) | (Formula::Exists(v, b), VarKind::Existential) => {
                vars.push(v.clone());
                cur = b;
            }
            _ => return (vars, cur),
        }
    }
}

fn run(
    problem: &Problem,
    kind: Protection,
    flavor: Flavor,
    verdicts: Option<&MonoVerdicts>,
    covers: Option<&CoverAssignment>,
    v_set: &[Type],
) -> Problem {
    let p = Protector::new(problem, kind, flavor, verdicts, covers);
    let mut sig = problem.sig.clone();
    p.extend_signature(&mut sig);
    let mut formulas = p.axioms(problem, v_set);
    formulas.extend(problem.formulas.iter().map(|n| Named { formula: p.formula(&n.formula), ..n.clone() }));
    Problem { sig, formulas }
}

/// `t`: every term tagged with its type.
pub fn tags_traditional(problem: &Problem) -> Problem {
    run(problem, Protection::Tags, Flavor::Traditional, None, None, &[])
}

/// `g`: every quantified variable guarded, plus typing and inhabitation axioms.
pub fn guards_traditional(problem: &Problem) -> Problem {
    run(problem, Protection::Guards, Flavor::Traditional, None, None, &[])
}

/// `t@`: tags only undercover variable occurrences.
pub fn tags_cover(problem: &Problem, covers: &CoverAssignment) -> Problem {
    run(problem, Protection::Tags, Flavor::Cover, None, Some(covers), &[])
}

/// `g@`: guards only undercover universal variables.
pub fn guards_cover(problem: &Problem, covers: &CoverAssignment) -> Problem {
    run(problem, Protection::Guards, Flavor::Cover, None, Some(covers), &[])
}

/// `t?` (polymorphic) or `t̃?` (monomorphic), chosen by the problem's level.
pub fn tags_light(problem: &Problem, verdicts: &MonoVerdicts, v: &[Type]) -> Problem {
    run(problem, Protection::Tags, Flavor::Light, Some(verdicts), None, v)
}

/// `t??` or `t̃??`.
pub fn tags_feather(problem: &Problem, verdicts: &MonoVerdicts, v: &[Type]) -> Problem {
    run(problem, Protection::Tags, Flavor::Feather, Some(verdicts), None, v)
}

/// `g?` or `g̃?`.
pub fn guards_light(problem: &Problem, verdicts: &MonoVerdicts, v: &[Type]) -> Problem {
    run(problem, Protection::Guards, Flavor::Light, Some(verdicts), None, v)
}

/// `g??` or `g̃??`.
pub fn guards_feather(problem: &Problem, verdicts: &MonoVerdicts, v: &[Type]) -> Problem {
    run(problem, Protection::Guards, Flavor::Feather, Some(verdicts), None, v)
}
