use crate::syntax::{Formula, Level, Named, Problem, Signature, Term, Type, Var};

/// Full type erasure `e`: drops type arguments, type quantifiers and
/// variable types. Term arities are kept.
pub fn erase(problem: &Problem) -> Problem {
    let mut sig = Signature::new(Level::Untyped);
    for (name, d) in &problem.sig.funs {
        sig.add_untyped_fun(name.clone(), d.arity());
    }
    for (name, d) in &problem.sig.preds {
        sig.add_untyped_pred(name.clone(), d.arity());
    }
    let formulas = problem
        .formulas
        .iter()
        .map(|n| Named { formula: erase_formula(&n.formula), ..n.clone() })
        .collect();
    Problem { sig, formulas }
}

fn erase_var(v: &Var) -> Var {
    Var::new(v.name.clone(), Type::iota(), v.kind)
}

pub fn erase_term(t: &Term) -> Term {
    match t {
        Term::Var(v) => Term::Var(erase_var(v)),
        Term::App { sym, args, .. } => Term::app(sym.clone(), vec![], args.iter().map(erase_term).collect()),
    }
}

pub fn erase_formula(f: &Formula) -> Formula {
    match f {
        Formula::Pred { pos, sym, args, .. } => {
            Formula::Pred { pos: *pos, sym: sym.clone(), ty_args: vec![], args: args.iter().map(erase_term).collect() }
        }
        Formula::Eq { pos, lhs, rhs } => Formula::Eq { pos: *pos, lhs: erase_term(lhs), rhs: erase_term(rhs) },
        Formula::And(ps) => Formula::And(ps.iter().map(erase_formula).collect()),
        Formula::Or(ps) => Formula::Or(ps.iter().map(erase_formula).collect()),
        Formula::Forall(v, b) => Formula::forall(erase_var(v), erase_formula(b)),
        Formula::Exists(v, b) => Formula::exists(erase_var(v), erase_formula(b)),
        Formula::ForallType(_, b) => erase_formula(b),
    }
}
