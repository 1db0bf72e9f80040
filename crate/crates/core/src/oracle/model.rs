use super::OracleError;
use crate::monomorph::MonoSymbol;
use crate::subst::TypeSubst;
use crate::syntax::{Formula, Problem, Term, Type};
use std::collections::BTreeMap;
use std::fmt;

/// A total table over elements `0..n` of each argument domain, in row-major order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    pub arg_sizes: Vec<usize>,
    pub values: Vec<usize>,
}

impl Table {
    pub fn constant(arg_sizes: Vec<usize>, value: usize) -> Table {
        let n = arg_sizes.iter().product();
        Table { arg_sizes, values: vec![value; n] }
    }

    pub fn index(&self, args: &[usize]) -> Option<usize> {
        if args.len() != self.arg_sizes.len() {
            return None;
        }
        let mut i = 0;
        for (&a, &n) in args.iter().zip(&self.arg_sizes) {
            if a >= n {
                return None;
            }
            i = i * n + a;
        }
        Some(i)
    }

    pub fn get(&self, args: &[usize]) -> Option<usize> {
        self.index(args).map(|i| self.values[i])
    }

    pub fn set(&mut self, args: &[usize], v: usize) {
        let i = self.index(args).expect("argument tuple outside the table");
        self.values[i] = v;
    }

    /// All argument tuples in table order.
    pub fn tuples(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        tuples(&self.arg_sizes)
    }
}

pub(crate) fn tuples(sizes: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    let total: usize = sizes.iter().product();
    (0..total).map(move |mut k| {
        let mut t = vec![0; sizes.len()];
        for (slot, &n) in t.iter_mut().zip(sizes).rev() {
            *slot = k % n;
            k /= n;
        }
        t
    })
}

/// A structure over finitely many ground types. Elements of a type are `0..size`.
/// Symbols are interpreted per ground instance; predicate tables hold 0 or 1.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FiniteModel {
    pub domains: BTreeMap<Type, usize>,
    pub funs: BTreeMap<MonoSymbol, Table>,
    pub preds: BTreeMap<MonoSymbol, Table>,
}

pub type Valuation = BTreeMap<String, usize>;

impl FiniteModel {
    pub fn size(&self, ty: &Type) -> Option<usize> {
        self.domains.get(ty).copied()
    }

    pub fn total_size(&self) -> usize {
        self.domains.values().sum()
    }

    /// Nonempty domains and range-correct tables.
    pub fn check(&self) -> Result<(), OracleError> {
        if let Some((t, _)) = self.domains.iter().find(|(_, &n)| n == 0) {
            return Err(OracleError::Internal(format!("empty domain for {t}")));
        }
        for ((s, _), t) in &self.funs {
            if t.values.len() != t.arg_sizes.iter().product::<usize>() {
                return Err(OracleError::Internal(format!("table for {s} is not total")));
            }
        }
        Ok(())
    }

    pub fn satisfies(&self, problem: &Problem) -> Result<bool, OracleError> {
        for f in problem.formulas() {
            if !evaluate(self, f, &TypeSubst::new(), &Valuation::new())? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Display for FiniteModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn head(f: &mut fmt::Formatter<'_>, (s, tys): &MonoSymbol) -> fmt::Result {
            write!(f, "{s}")?;
            if !tys.is_empty() {
                let tys: Vec<String> = tys.iter().map(ToString::to_string).collect();
                write!(f, "<{}>", tys.join(", "))?;
            }
            Ok(())
        }
        fn args(t: &[usize]) -> String {
            if t.is_empty() {
                String::new()
            } else {
                let parts: Vec<String> = t.iter().map(ToString::to_string).collect();
                format!("({})", parts.join(", "))
            }
        }
        for (t, n) in &self.domains {
            writeln!(f, "|{t}| = {n}")?;
        }
        for (k, table) in &self.funs {
            for (tuple, v) in table.tuples().zip(&table.values) {
                head(f, k)?;
                writeln!(f, "{} = {v}", args(&tuple))?;
            }
        }
        for (k, table) in &self.preds {
            let holds: Vec<String> = table.tuples().zip(&table.values).filter(|(_, &v)| v == 1).map(|(t, _)| args(&t)).collect();
            head(f, k)?;
            writeln!(f, " = {{{}}}", holds.join(" "))?;
        }
        Ok(())
    }
}

struct Eval<'a> {
    model: &'a FiniteModel,
    theta: &'a TypeSubst,
}

impl Eval<'_> {
    fn ty(&self, t: &Type) -> Result<(Type, usize), OracleError> {
        let g = self.theta.apply(t);
        match self.model.size(&g) {
            Some(n) => Ok((g, n)),
            None => Err(OracleError::Internal(format!("no domain for type {g}"))),
        }
    }

    fn key(&self, sym: &str, ty_args: &[Type]) -> MonoSymbol {
        (sym.to_string(), ty_args.iter().map(|t| self.theta.apply(t)).collect())
    }

    fn term(&self, t: &Term, xi: &Valuation) -> Result<usize, OracleError> {
        match t {
            Term::Var(v) => xi.get(&v.name).copied().ok_or_else(|| OracleError::Internal(format!("unbound variable {}", v.name))),
            Term::App { sym, ty_args, args } => {
                let vals = args.iter().map(|a| self.term(a, xi)).collect::<Result<Vec<_>, _>>()?;
                let key = self.key(sym, ty_args);
                self.model
                    .funs
                    .get(&key)
                    .and_then(|t| t.get(&vals))
                    .ok_or_else(|| OracleError::Internal(format!("missing table entry for {sym}")))
            }
        }
    }

    fn formula(&self, f: &Formula, xi: &mut Valuation) -> Result<bool, OracleError> {
        Ok(match f {
            Formula::Pred { pos, sym, ty_args, args } => {
                let vals = args.iter().map(|a| self.term(a, xi)).collect::<Result<Vec<_>, _>>()?;
                let key = self.key(sym, ty_args);
                let v = self
                    .model
                    .preds
                    .get(&key)
                    .and_then(|t| t.get(&vals))
                    .ok_or_else(|| OracleError::Internal(format!("missing table entry for {sym}")))?;
                (v == 1) == *pos
            }
            Formula::Eq { pos, lhs, rhs } => (self.term(lhs, xi)? == self.term(rhs, xi)?) == *pos,
            Formula::And(ps) => {
                for p in ps {
                    if !self.formula(p, xi)? {
                        return Ok(false);
                    }
                }
                true
            }
            Formula::Or(ps) => {
                for p in ps {
                    if self.formula(p, xi)? {
                        return Ok(true);
                    }
                }
                false
            }
            Formula::Forall(v, b) | Formula::Exists(v, b) => {
                let universal = matches!(f, Formula::Forall(..));
                let (_, n) = self.ty(&v.ty)?;
                let saved = xi.get(&v.name).copied();
                let mut result = universal;
                for a in 0..n {
                    xi.insert(v.name.clone(), a);
                    if self.formula(b, xi)? != universal {
                        result = !universal;
                        break;
                    }
                }
                match saved {
                    Some(s) => xi.insert(v.name.clone(), s),
                    None => xi.remove(&v.name),
                };
                result
            }
            Formula::ForallType(a, _) => return Err(OracleError::Polymorphic(format!("type quantifier over {a}"))),
        })
    }
}

/// Truth value of `phi` in `model` under type valuation `theta` and term valuation `xi`.
pub fn evaluate(model: &FiniteModel, phi: &Formula, theta: &TypeSubst, xi: &Valuation) -> Result<bool, OracleError> {
    let mut xi = xi.clone();
    Eval { model, theta }.formula(phi, &mut xi)
}
