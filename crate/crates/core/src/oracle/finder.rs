//! Bounded finite-model search: ground the problem over fixed domain sizes,
//! hand the propositional encoding to a SAT solver, read the model back.

use super::model::{tuples, FiniteModel, Table};
use super::OracleError;
use crate::monomorph::{symbol_instances, MonoSymbol};
use crate::syntax::{Formula, Problem, Term, Type};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use varisat::{ExtendFormula, Lit, Solver};

/// Types that need a domain: those of variables, terms and symbol arguments.
pub fn domain_types(problem: &Problem) -> Result<Vec<Type>, OracleError> {
    if !problem.is_type_ground() {
        return Err(OracleError::Polymorphic("model search needs a ground-typed problem".into()));
    }
    let sig = &problem.sig;
    let mut out = BTreeSet::new();
    for f in problem.formulas() {
        f.visit_binders(&mut |v| {
            out.insert(v.ty.clone());
        });
    }
    for (s, tys) in instances(problem) {
        out.extend(sig.arg_types(&s, &tys).unwrap_or_default());
        out.extend(sig.result_type(&s, &tys));
    }
    Ok(out.into_iter().collect())
}

fn instances(problem: &Problem) -> BTreeSet<MonoSymbol> {
    let mut out = BTreeSet::new();
    for f in problem.formulas() {
        out.extend(symbol_instances(f));
    }
    out
}

/// Domain-size vectors with every entry at least 1, by increasing total then lexicographically.
pub fn size_vectors(k: usize, max_total: usize) -> Vec<Vec<usize>> {
    fn go(k: usize, total: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 0 {
            if total == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        for n in 1..=total.saturating_sub(k - 1) {
            prefix.push(n);
            go(k - 1, total - n, prefix, out);
            prefix.pop();
        }
    }
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for total in k..=max_total {
        go(k, total, &mut Vec::new(), &mut out);
    }
    out
}

/// Searches every domain-size vector whose sum is at most `max_total_size`.
/// A returned model has been re-verified by evaluation.
pub fn find_model(problem: &Problem, max_total_size: usize) -> Result<Option<FiniteModel>, OracleError> {
    let types = domain_types(problem)?;
    for sizes in size_vectors(types.len(), max_total_size) {
        let sizes: BTreeMap<Type, usize> = types.iter().cloned().zip(sizes).collect();
        if let Some(m) = find_model_with_sizes(problem, &sizes)? {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum GTerm {
    El(usize),
    App(usize, Vec<GTerm>),
}

struct Inst {
    key: MonoSymbol,
    args: Vec<usize>,
    /// Result domain size; `None` for predicates.
    result: Option<usize>,
}

struct Grounder {
    solver: Solver<'static>,
    top: Lit,
    insts: Vec<Inst>,
    ids: BTreeMap<MonoSymbol, usize>,
    sizes: BTreeMap<Type, usize>,
    cells: HashMap<(usize, Vec<usize>), Vec<Lit>>,
    memo: HashMap<(GTerm, usize), Lit>,
}

impl Grounder {
    fn and(&mut self, lits: Vec<Lit>) -> Lit {
        let mut ls: Vec<Lit> = Vec::new();
        for l in lits {
            if l == !self.top || ls.contains(&!l) {
                return !self.top;
            }
            if l != self.top && !ls.contains(&l) {
                ls.push(l);
            }
        }
        match ls.len() {
            0 => self.top,
            1 => ls[0],
            _ => {
                let g = self.solver.new_lit();
                for &l in &ls {
                    self.solver.add_clause(&[!g, l]);
                }
                let mut back: Vec<Lit> = ls.iter().map(|&l| !l).collect();
                back.push(g);
                self.solver.add_clause(&back);
                g
            }
        }
    }

    fn or(&mut self, lits: Vec<Lit>) -> Lit {
        let g = self.and(lits.into_iter().map(|l| !l).collect());
        !g
    }

    /// One-hot cell literals of a function, or the single literal of a predicate.
    fn cell(&mut self, inst: usize, tuple: &[usize]) -> Vec<Lit> {
        if let Some(c) = self.cells.get(&(inst, tuple.to_vec())) {
            return c.clone();
        }
        let n = self.insts[inst].result.unwrap_or(1);
        let lits: Vec<Lit> = (0..n).map(|_| self.solver.new_lit()).collect();
        if self.insts[inst].result.is_some() {
            self.solver.add_clause(&lits);
            for i in 0..n {
                for j in i + 1..n {
                    self.solver.add_clause(&[!lits[i], !lits[j]]);
                }
            }
        }
        self.cells.insert((inst, tuple.to_vec()), lits.clone());
        lits
    }

    /// Candidate values of each argument, with the literal "argument has that value".
    fn arg_choices(&mut self, args: &[GTerm], inst: usize) -> Vec<Vec<(usize, Lit)>> {
        let sizes = self.insts[inst].args.clone();
        args.iter()
            .zip(sizes)
            .map(|(a, n)| match a {
                GTerm::El(d) => vec![(*d, self.top)],
                _ => (0..n).map(|d| (d, self.term_is(a, d))).collect(),
            })
            .collect()
    }

    /// OR over argument tuples of (arguments take the tuple) AND (cell literal).
    fn application(&mut self, inst: usize, args: &[GTerm], value: usize) -> Lit {
        let choices = self.arg_choices(args, inst);
        let dims: Vec<usize> = choices.iter().map(Vec::len).collect();
        let mut disj = Vec::new();
        for pick in tuples(&dims).collect::<Vec<_>>() {
            let tuple: Vec<usize> = pick.iter().zip(&choices).map(|(&i, c)| c[i].0).collect();
            let mut conj: Vec<Lit> = pick.iter().zip(&choices).map(|(&i, c)| c[i].1).collect();
            conj.push(self.cell(inst, &tuple)[value]);
            disj.push(self.and(conj));
        }
        self.or(disj)
    }

    fn term_is(&mut self, t: &GTerm, value: usize) -> Lit {
        match t {
            GTerm::El(d) => {
                if *d == value {
                    self.top
                } else {
                    !self.top
                }
            }
            GTerm::App(f, args) => {
                if let Some(&l) = self.memo.get(&(t.clone(), value)) {
                    return l;
                }
                let l = self.application(*f, args, value);
                self.memo.insert((t.clone(), value), l);
                l
            }
        }
    }

    fn ground(&self, t: &Term, env: &BTreeMap<String, usize>) -> GTerm {
        match t {
            Term::Var(v) => GTerm::El(env[&v.name]),
            Term::App { sym, ty_args, args } => {
                GTerm::App(self.ids[&(sym.clone(), ty_args.clone())], args.iter().map(|a| self.ground(a, env)).collect())
            }
        }
    }

    fn result_size(&self, t: &Term, problem: &Problem) -> usize {
        match t {
            Term::Var(v) => self.sizes[&v.ty],
            Term::App { sym, ty_args, .. } => self.insts[self.ids[&(sym.clone(), ty_args.clone())]].result.unwrap_or_else(|| {
                problem.sig.result_type(sym, ty_args).map_or(1, |r| self.sizes[&r])
            }),
        }
    }

    fn formula(&mut self, f: &Formula, env: &mut BTreeMap<String, usize>, problem: &Problem) -> Lit {
        match f {
            Formula::Pred { pos, sym, ty_args, args } => {
                let inst = self.ids[&(sym.clone(), ty_args.clone())];
                let gs: Vec<GTerm> = args.iter().map(|a| self.ground(a, env)).collect();
                let l = self.application(inst, &gs, 0);
                if *pos {
                    l
                } else {
                    !l
                }
            }
            Formula::Eq { pos, lhs, rhs } => {
                let n = self.result_size(lhs, problem);
                let (l, r) = (self.ground(lhs, env), self.ground(rhs, env));
                let mut disj = Vec::new();
                for d in 0..n {
                    let a = self.term_is(&l, d);
                    let b = self.term_is(&r, d);
                    disj.push(self.and(vec![a, b]));
                }
                let e = self.or(disj);
                if *pos {
                    e
                } else {
                    !e
                }
            }
            Formula::And(ps) => {
                let ls = ps.iter().map(|p| self.formula(p, env, problem)).collect();
                self.and(ls)
            }
            Formula::Or(ps) => {
                let ls = ps.iter().map(|p| self.formula(p, env, problem)).collect();
                self.or(ls)
            }
            Formula::Forall(v, b) | Formula::Exists(v, b) => {
                let n = self.sizes[&v.ty];
                let saved = env.get(&v.name).copied();
                let mut ls = Vec::new();
                for d in 0..n {
                    env.insert(v.name.clone(), d);
                    ls.push(self.formula(b, env, problem));
                }
                match saved {
                    Some(s) => env.insert(v.name.clone(), s),
                    None => env.remove(&v.name),
                };
                if matches!(f, Formula::Forall(..)) {
                    self.and(ls)
                } else {
                    self.or(ls)
                }
            }
            Formula::ForallType(..) => unreachable!("checked ground-typed"),
        }
    }
}

/// Model search at one fixed size per domain type.
pub fn find_model_with_sizes(problem: &Problem, sizes: &BTreeMap<Type, usize>) -> Result<Option<FiniteModel>, OracleError> {
    let types = domain_types(problem)?;
    if let Some(t) = types.iter().find(|t| sizes.get(*t).is_none_or(|&n| n == 0)) {
        return Err(OracleError::Internal(format!("no domain size for {t}")));
    }
    let sig = &problem.sig;
    let mut insts = Vec::new();
    let mut ids = BTreeMap::new();
    for key in instances(problem) {
        let (s, tys) = &key;
        let args = sig.arg_types(s, tys).unwrap_or_default().iter().map(|t| sizes[t]).collect();
        let result = sig.result_type(s, tys).map(|r| sizes[&r]);
        ids.insert(key.clone(), insts.len());
        insts.push(Inst { key, args, result });
    }
    let mut solver = Solver::new();
    let top = solver.new_lit();
    solver.add_clause(&[top]);
    let mut g = Grounder { solver, top, insts, ids, sizes: sizes.clone(), cells: HashMap::new(), memo: HashMap::new() };
    for f in problem.formulas() {
        let l = g.formula(f, &mut BTreeMap::new(), problem);
        g.solver.add_clause(&[l]);
    }
    let sat = g.solver.solve().map_err(|e| OracleError::Internal(format!("SAT solver: {e}")))?;
    if !sat {
        return Ok(None);
    }
    let truth: BTreeSet<Lit> = g.solver.model().unwrap_or_default().into_iter().filter(|l| l.is_positive()).collect();
    let mut model = FiniteModel { domains: sizes.iter().filter(|(t, _)| types.contains(t)).map(|(t, &n)| (t.clone(), n)).collect(), ..Default::default() };
    for (i, inst) in g.insts.iter().enumerate() {
        let mut table = Table::constant(inst.args.clone(), 0);
        for tuple in tuples(&inst.args).collect::<Vec<_>>() {
            if let Some(cell) = g.cells.get(&(i, tuple.clone())) {
                let v = cell.iter().position(|l| truth.contains(l)).unwrap_or(0);
                let v = if inst.result.is_some() { v } else { usize::from(truth.contains(&cell[0])) };
                table.set(&tuple, v);
            }
        }
        if inst.result.is_some() {
            model.funs.insert(inst.key.clone(), table);
        } else {
            model.preds.insert(inst.key.clone(), table);
        }
    }
    model.check()?;
    if !model.satisfies(problem)? {
        return Err(OracleError::Internal("SAT model fails evaluation".into()));
    }
    Ok(Some(model))
}
