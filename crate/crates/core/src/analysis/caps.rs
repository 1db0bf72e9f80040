use super::mono::{InfRegistry, MonoVerdicts};
use crate::subst::{canonical, is_instance, mgi, unifiable, TypeSubst};
use crate::syntax::{Problem, Signature, Type};

/// Types of all subterms occurring in the problem, up to variable renaming.
pub fn types_of(problem: &Problem) -> Vec<Type> {
    let mut out: Vec<Type> = Vec::new();
    for f in problem.formulas() {
        f.visit_terms(&mut |t| {
            if let Some(ty) = t.ty(&problem.sig) {
                let c = canonical(&ty);
                if !out.contains(&c) {
                    out.push(c);
                }
            }
        });
    }
    out
}

/// Keeps the most general types: every input is an instance of some output
/// and no output is an instance of another.
pub fn cap_minimize(types: &[Type]) -> Vec<Type> {
    let mut out: Vec<Type> = Vec::new();
    for t in types {
        if out.iter().any(|u| is_instance(t, u)) {
            continue;
        }
        out.retain(|u| !is_instance(u, t));
        out.push(t.clone());
    }
    out
}

fn in_u_prime(candidate: &Type, naked: &[Type], inf: &InfRegistry) -> bool {
    inf.is_infinite(candidate) || naked.iter().all(|n| !unifiable(candidate, n))
}

/// Candidate instances of `sigma`: itself, its common instances with the
/// declared infinite types, and each variable replaced by a constructor
/// applied to fresh variables.
fn candidates(sigma: &Type, sig: &Signature, inf: &InfRegistry) -> Vec<Type> {
    let mut out = vec![sigma.clone()];
    for iota in &inf.declared {
        if let Some(m) = mgi(sigma, iota) {
            out.push(m);
        }
    }
    for v in sigma.vars() {
        for (k, &n) in &sig.type_ctors {
            if k.starts_with("$$") {
                continue;
            }
            let fresh = (0..n).map(|i| Type::Var(format!("{v}\u{b7}{i}"))).collect();
            out.push(TypeSubst::single(v.clone(), Type::App(k.clone(), fresh)).apply(sigma));
        }
    }
    out
}

/// `U_σ`: a minimal cap of the monotonic instances of `sigma` that are
/// infinite or clash with no naked variable.
pub fn u_sigma(sigma: &Type, problem: &Problem, verdicts: &MonoVerdicts) -> Vec<Type> {
    let naked = verdicts.naked_types();
    let kept: Vec<Type> = candidates(sigma, &problem.sig, &verdicts.inf)
        .into_iter()
        .filter(|c| in_u_prime(c, &naked, &verdicts.inf) && verdicts.verdict(c))
        .map(|c| canonical(&c))
        .collect();
    cap_minimize(&kept)
}

/// `U_Φ`, used as `V_Φ`: a cap of `U_σ` over the nonmonotonic types of the problem.
pub fn compute_u(problem: &Problem, verdicts: &MonoVerdicts) -> Vec<Type> {
    let mut all = Vec::new();
    for sigma in types_of(problem) {
        if !verdicts.verdict(&sigma) {
            all.extend(u_sigma(&sigma, problem, verdicts));
        }
    }
    cap_minimize(&all)
}
