use crate::syntax::{Formula, Problem, Term, Type, Var};

/// Renames bound variables to `V0, V1, ...` and type variables to
/// `T0, T1, ...` in binding order.
pub fn alpha_canonical(f: &Formula) -> Formula {
    Canon::default().formula(f)
}

pub fn alpha_eq(a: &Formula, b: &Formula) -> bool {
    alpha_canonical(a) == alpha_canonical(b)
}

/// Same formulas (in order, modulo renaming) and, if `with_sig`, the same signature.
pub fn problems_alpha_eq(a: &Problem, b: &Problem, with_sig: bool) -> bool {
    if with_sig && a.sig != b.sig {
        return false;
    }
    a.formulas.len() == b.formulas.len()
        && a.formulas.iter().zip(&b.formulas).all(|(x, y)| x.role == y.role && alpha_eq(&x.formula, &y.formula))
}

#[derive(Default)]
struct Canon {
    vars: Vec<(String, String)>,
    tyvars: Vec<(String, String)>,
    next_var: usize,
    next_ty: usize,
}

impl Canon {
    fn ty(&self, t: &Type) -> Type {
        match t {
            Type::Var(a) => Type::Var(lookup(&self.tyvars, a)),
            Type::App(k, args) => Type::App(k.clone(), args.iter().map(|x| self.ty(x)).collect()),
        }
    }

    fn term(&self, t: &Term) -> Term {
        match t {
            Term::Var(v) => Term::Var(Var::new(lookup(&self.vars, &v.name), self.ty(&v.ty), v.kind)),
            Term::App { sym, ty_args, args } => Term::app(
                sym.clone(),
                ty_args.iter().map(|x| self.ty(x)).collect(),
                args.iter().map(|x| self.term(x)).collect(),
            ),
        }
    }

    fn formula(&mut self, f: &Formula) -> Formula {
        match f {
            Formula::Pred { pos, sym, ty_args, args } => Formula::Pred {
                pos: *pos,
                sym: sym.clone(),
                ty_args: ty_args.iter().map(|x| self.ty(x)).collect(),
                args: args.iter().map(|x| self.term(x)).collect(),
            },
            Formula::Eq { pos, lhs, rhs } => Formula::Eq { pos: *pos, lhs: self.term(lhs), rhs: self.term(rhs) },
            Formula::And(ps) => Formula::And(ps.iter().map(|p| self.formula(p)).collect()),
            Formula::Or(ps) => Formula::Or(ps.iter().map(|p| self.formula(p)).collect()),
            Formula::Forall(v, b) | Formula::Exists(v, b) => {
                let name = format!("V{}", self.next_var);
                self.next_var += 1;
                let nv = Var::new(name.clone(), self.ty(&v.ty), v.kind);
                self.vars.push((v.name.clone(), name));
                let body = self.formula(b);
                self.vars.pop();
                if matches!(f, Formula::Forall(..)) {
                    Formula::forall(nv, body)
                } else {
                    Formula::exists(nv, body)
                }
            }
            Formula::ForallType(a, b) => {
                let name = format!("T{}", self.next_ty);
                self.next_ty += 1;
                self.tyvars.push((a.clone(), name.clone()));
                let body = self.formula(b);
                self.tyvars.pop();
                Formula::forall_type(name, body)
            }
        }
    }
}

fn lookup(env: &[(String, String)], name: &str) -> String {
    env.iter().rev().find(|(n, _)| n == name).map_or_else(|| name.to_string(), |(_, m)| m.clone())
}

