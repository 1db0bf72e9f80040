use crate::analysis::classify_symbol;
use crate::syntax::{Formula, Named, Problem, SymDecl, Term, Type, GUARD, TAG};
use crate::vars::{ty_type, tyvar_term, TypeTerms};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

/// Which type arguments `a^x` turns into term arguments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ArgFilter {
    Full,
    Phantom,
    NonInferable,
    None,
}

impl ArgFilter {
    pub const ALL: [ArgFilter; 4] = [ArgFilter::Full, ArgFilter::Phantom, ArgFilter::NonInferable, ArgFilter::None];

    pub fn name(self) -> &'static str {
        match self {
            ArgFilter::Full => "full",
            ArgFilter::Phantom => "phan",
            ArgFilter::NonInferable => "ninf",
            ArgFilter::None => "none",
        }
    }

    /// Indices kept for a symbol. Tags and guards always keep their one type argument.
    pub fn select(self, name: &str, decl: &SymDecl) -> Vec<usize> {
        if name == TAG || name == GUARD {
            return (0..decl.tyvars.len()).collect();
        }
        let class = classify_symbol(decl);
        let keep = |i: &usize| match self {
            ArgFilter::Full => true,
            ArgFilter::Phantom => class.phantom.contains(i),
            ArgFilter::NonInferable => class.noninferable.contains(i),
            ArgFilter::None => false,
        };
        (0..decl.tyvars.len()).filter(keep).collect()
    }
}

impl fmt::Display for ArgFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ArgFilter {
    type Err = String;

    fn from_str(s: &str) -> Result<ArgFilter, String> {
        ArgFilter::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| format!("unknown filter `{s}`"))
    }
}

/// `a^x` before erasure: encodes the selected type arguments as leading
/// term arguments and binds a term variable of type `ϑ` for each type variable.
pub fn add_type_args(problem: &Problem, filter: ArgFilter) -> Problem {
    let tt = TypeTerms::for_signature(&problem.sig);
    let keep: BTreeMap<String, Vec<usize>> =
        problem.sig.symbols().map(|(n, d)| (n.clone(), filter.select(n, d))).collect();

    let mut sig = problem.sig.clone();
    for (name, d) in sig.funs.iter_mut().chain(sig.preds.iter_mut()) {
        let extra = keep[name].len();
        d.args.splice(0..0, std::iter::repeat_n(ty_type(), extra));
    }
    tt.extend(&mut sig, &problem.sig);

    let enc = Encoder { tt: &tt, keep: &keep };
    let formulas = problem
        .formulas
        .iter()
        .map(|n| Named { formula: enc.formula(&n.formula), ..n.clone() })
        .collect();
    Problem { sig, formulas }
}

struct Encoder<'a> {
    tt: &'a TypeTerms,
    keep: &'a BTreeMap<String, Vec<usize>>,
}

impl Encoder<'_> {
    fn extra(&self, sym: &str, ty_args: &[Type]) -> Vec<Term> {
        let idx = self.keep.get(sym).map(Vec::as_slice).unwrap_or(&[]);
        idx.iter().filter_map(|&i| ty_args.get(i)).map(|t| self.tt.encode(t)).collect()
    }

    fn term(&self, t: &Term) -> Term {
        match t {
            Term::Var(_) => t.clone(),
            Term::App { sym, ty_args, args } => {
                let mut new_args = self.extra(sym, ty_args);
                new_args.extend(args.iter().map(|a| self.term(a)));
                Term::app(sym.clone(), ty_args.clone(), new_args)
            }
        }
    }

    fn formula(&self, f: &Formula) -> Formula {
        let (tyvars, body) = f.split_type_binders();
        let body = self.body(body);
        let vars = tyvars.iter().map(|a| tyvar_term(a)).collect();
        Formula::forall_types(tyvars, Formula::forall_all(vars, body))
    }

    fn body(&self, f: &Formula) -> Formula {
        match f {
            Formula::Pred { pos, sym, ty_args, args } => {
                let mut new_args = self.extra(sym, ty_args);
                new_args.extend(args.iter().map(|a| self.term(a)));
                Formula::Pred { pos: *pos, sym: sym.clone(), ty_args: ty_args.clone(), args: new_args }
            }
            Formula::Eq { pos, lhs, rhs } => Formula::Eq { pos: *pos, lhs: self.term(lhs), rhs: self.term(rhs) },
            Formula::And(ps) => Formula::And(ps.iter().map(|p| self.body(p)).collect()),
            Formula::Or(ps) => Formula::Or(ps.iter().map(|p| self.body(p)).collect()),
            Formula::Forall(v, b) => Formula::forall(v.clone(), self.body(b)),
            Formula::Exists(v, b) => Formula::exists(v.clone(), self.body(b)),
            // Type binders are only at the top; a nested one is kept as is.
            Formula::ForallType(a, b) => Formula::forall_type(a.clone(), self.formula(b)),
        }
    }
}
