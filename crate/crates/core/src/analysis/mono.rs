use crate::subst::{is_instance, mgi, unifiable};
use crate::syntax::{Level, Problem, Type, Var};
use crate::vars::naked_vars;
use std::fmt;

/// Types declared infinite; instances of a declared type are infinite too.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InfRegistry {
    pub declared: Vec<Type>,
}

impl InfRegistry {
    pub fn new(declared: Vec<Type>) -> InfRegistry {
        InfRegistry { declared }
    }

    pub fn is_infinite(&self, tau: &Type) -> bool {
        self.declared.iter().any(|s| is_instance(tau, s))
    }
}

/// A naked variable and the formula it is naked in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NakedOccurrence {
    pub var: Var,
    pub formula: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reason {
    /// Every clash with a naked variable's type lies in an infinite type.
    Infinite,
    /// No naked variable's type shares an instance with the type.
    NoNaked,
    /// Shares a non-infinite instance with this naked variable.
    Naked(NakedOccurrence),
    /// Forced by the protect-extra override.
    Protected(Type),
}

impl Reason {
    pub fn is_monotonic(&self) -> bool {
        matches!(self, Reason::Infinite | Reason::NoNaked)
    }
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reason::Infinite => write!(f, "monotonic (infinite)"),
            Reason::NoNaked => write!(f, "monotonic (no naked)"),
            Reason::Naked(o) => write!(f, "nonmonotonic (naked {} in {})", o.var.name, o.formula),
            Reason::Protected(t) => write!(f, "nonmonotonic (protected {t})"),
        }
    }
}

/// Outcome of monotonicity inference over a whole problem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoVerdicts {
    pub level: Level,
    pub naked: Vec<NakedOccurrence>,
    pub inf: InfRegistry,
    /// Types protected regardless of the calculus.
    pub protect: Vec<Type>,
    /// Surely infinite naked types, simplified.
    pub j: Vec<Type>,
    /// Possibly nonmonotonic naked types (and protected types), simplified.
    pub n: Vec<Type>,
}

fn insert_simplified(set: &mut Vec<Type>, sigma: &Type) {
    if set.iter().any(|t| is_instance(sigma, t)) {
        return;
    }
    set.retain(|t| !is_instance(t, sigma));
    set.push(sigma.clone());
}

impl MonoVerdicts {
    fn build(problem: &Problem, inf: &InfRegistry, protect: &[Type]) -> MonoVerdicts {
        let mut naked = Vec::new();
        for nf in &problem.formulas {
            for v in naked_vars(&nf.formula) {
                naked.push(NakedOccurrence { var: v, formula: nf.name.clone() });
            }
        }
        let (mut j, mut n) = (Vec::new(), Vec::new());
        for o in &naked {
            if inf.is_infinite(&o.var.ty) {
                insert_simplified(&mut j, &o.var.ty);
            } else {
                insert_simplified(&mut n, &o.var.ty);
            }
        }
        for t in protect {
            insert_simplified(&mut n, t);
        }
        MonoVerdicts { level: problem.level(), naked, inf: inf.clone(), protect: protect.to_vec(), j, n }
    }

    /// Why `sigma` is or is not inferred monotonic.
    pub fn reason(&self, sigma: &Type) -> Reason {
        let mut clashed = false;
        for o in &self.naked {
            if let Some(m) = mgi(sigma, &o.var.ty) {
                clashed = true;
                if !self.inf.is_infinite(&m) {
                    return Reason::Naked(o.clone());
                }
            }
        }
        if let Some(t) = self.protect.iter().find(|t| unifiable(sigma, t)) {
            return Reason::Protected(t.clone());
        }
        if clashed {
            Reason::Infinite
        } else {
            Reason::NoNaked
        }
    }

    /// The calculus judgement `⊳σ`.
    pub fn verdict(&self, sigma: &Type) -> bool {
        self.reason(sigma).is_monotonic()
    }

    /// The cheaper check over the simplified `J`/`N` sets. Implies [`verdict`](Self::verdict).
    pub fn jn_verdict(&self, sigma: &Type) -> bool {
        self.j.iter().any(|t| is_instance(sigma, t)) || self.n.iter().all(|t| !unifiable(sigma, t))
    }

    pub fn naked_types(&self) -> Vec<Type> {
        let mut out: Vec<Type> = Vec::new();
        for o in &self.naked {
            if !out.contains(&o.var.ty) {
                out.push(o.var.ty.clone());
            }
        }
        out
    }
}

/// Monomorphic calculus: a type is monotonic if declared infinite or never naked.
/// On ground types the polymorphic rule reduces to exactly this, so the two
/// entry points share one implementation.
pub fn infer_mono_monomorphic(problem: &Problem, inf: &InfRegistry) -> MonoVerdicts {
    MonoVerdicts::build(problem, inf, &[])
}

/// Polymorphic calculus: every common instance with a naked variable's type
/// must be an instance of a declared infinite type.
pub fn infer_mono_polymorphic(problem: &Problem, inf: &InfRegistry) -> MonoVerdicts {
    MonoVerdicts::build(problem, inf, &[])
}

/// Either calculus, with the given types always protected.
pub fn infer_mono_with(problem: &Problem, inf: &InfRegistry, protect: &[Type]) -> MonoVerdicts {
    MonoVerdicts::build(problem, inf, protect)
}
