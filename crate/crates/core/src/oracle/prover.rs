//! Given-clause saturation: binary resolution, factoring, equality resolution,
//! and either paramodulation or explicit congruence axioms for equality.
//! Demodulation by oriented unit equations and forward subsumption keep the
//! search small.

use super::clause::{Atom, Clause, ClauseSet, Lit, Sort, Sym, T};
use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashSet, VecDeque};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EqualityMode {
    /// Paramodulation whenever the clauses mention equality.
    #[default]
    Auto,
    /// Reflexivity, transitivity and substitutivity axioms, no paramodulation.
    Congruence,
    Paramodulation,
}

/// One selection in this many is by age rather than weight.
pub const AGE_RATIO: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RefuteConfig {
    /// Given-clause selections before giving up.
    pub steps: usize,
    pub equality: EqualityMode,
    /// Generated clauses heavier than this are discarded.
    pub max_weight: usize,
    /// The search gives up once this many clauses have been kept.
    pub max_clauses: usize,
}

impl Default for RefuteConfig {
    fn default() -> RefuteConfig {
        RefuteConfig { steps: 50_000, equality: EqualityMode::Auto, max_weight: 80, max_clauses: 200_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// The empty clause was derived. `proof` lists the derivation, premises first.
    Refuted { steps: usize, proof: Vec<String> },
    /// No refutation within the budget. `saturated` means the search ran out of
    /// clauses without discarding any.
    GaveUp { steps: usize, saturated: bool },
}

impl Outcome {
    pub fn is_refuted(&self) -> bool {
        matches!(self, Outcome::Refuted { .. })
    }

    pub fn steps(&self) -> usize {
        match self {
            Outcome::Refuted { steps, .. } | Outcome::GaveUp { steps, .. } => *steps,
        }
    }
}

/// Variable bindings over the concatenated variables of one or two clauses.
struct Subst {
    map: Vec<Option<T>>,
    sorts: Vec<Sort>,
}

impl Subst {
    fn new(sorts: Vec<Sort>) -> Subst {
        Subst { map: vec![None; sorts.len()], sorts }
    }

    fn deref<'a>(&'a self, t: &'a T) -> &'a T {
        let mut t = t;
        while let T::Var(v) = t {
            match &self.map[*v as usize] {
                Some(b) => t = b,
                None => break,
            }
        }
        t
    }

    fn apply(&self, t: &T) -> T {
        match self.deref(t) {
            T::Var(v) => T::Var(*v),
            T::App(f, args) => T::App(*f, args.iter().map(|a| self.apply(a)).collect()),
        }
    }

    fn occurs(&self, v: u32, t: &T) -> bool {
        match self.deref(t) {
            T::Var(w) => *w == v,
            T::App(_, args) => args.iter().any(|a| self.occurs(v, a)),
        }
    }

    fn sort(&self, t: &T, set: &ClauseSet) -> Sort {
        match self.deref(t) {
            T::Var(v) => self.sorts[*v as usize],
            T::App(f, _) => set.syms[*f as usize].result.unwrap_or(0),
        }
    }

    fn bind(&mut self, v: u32, t: &T, set: &ClauseSet) -> bool {
        if self.sorts[v as usize] != self.sort(t, set) || self.occurs(v, t) {
            return false;
        }
        self.map[v as usize] = Some(t.clone());
        true
    }

    fn unify(&mut self, a: &T, b: &T, set: &ClauseSet) -> bool {
        let (a, b) = (self.deref(a).clone(), self.deref(b).clone());
        match (&a, &b) {
            (T::Var(x), T::Var(y)) if x == y => true,
            (T::Var(x), _) => self.bind(*x, &b, set),
            (_, T::Var(y)) => self.bind(*y, &a, set),
            (T::App(f, xs), T::App(g, ys)) => f == g && xs.iter().zip(ys).all(|(x, y)| self.unify(x, y, set)),
        }
    }

    fn unify_all(&mut self, xs: &[&T], ys: &[&T], set: &ClauseSet) -> bool {
        xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| self.unify(x, y, set))
    }
}

/// One-way matching: binds variables of `pattern` only, target variables are rigid.
fn match_term(pattern: &T, target: &T, binds: &mut Vec<Option<T>>, psorts: &[Sort], tsorts: &[Sort], set: &ClauseSet) -> bool {
    match pattern {
        T::Var(v) => match &binds[*v as usize] {
            Some(b) => b == target,
            None => {
                let ts = match target {
                    T::Var(w) => tsorts[*w as usize],
                    T::App(f, _) => set.syms[*f as usize].result.unwrap_or(0),
                };
                if ts != psorts[*v as usize] {
                    return false;
                }
                binds[*v as usize] = Some(target.clone());
                true
            }
        },
        T::App(f, xs) => match target {
            T::App(g, ys) if f == g => xs.iter().zip(ys).all(|(x, y)| match_term(x, y, binds, psorts, tsorts, set)),
            _ => false,
        },
    }
}

fn substitute(t: &T, binds: &[Option<T>]) -> T {
    t.map_vars(&mut |v| binds[v as usize].clone().unwrap_or(T::Var(v)))
}

fn shift(t: &T, by: u32) -> T {
    t.map_vars(&mut |v| T::Var(v + by))
}

fn shift_lit(l: &Lit, by: u32) -> Lit {
    Lit { pos: l.pos, atom: l.atom.map_terms(&mut |t| shift(t, by)) }
}

/// Knuth-Bendix ordering with unit weights, precedence by (arity, id).
fn kbo_gt(s: &T, t: &T, set: &ClauseSet) -> bool {
    if s == t {
        return false;
    }
    let (mut vs, mut vt) = (Vec::new(), Vec::new());
    s.vars(&mut vs);
    t.vars(&mut vt);
    for x in &vt {
        if vt.iter().filter(|y| *y == x).count() > vs.iter().filter(|y| *y == x).count() {
            return false;
        }
    }
    match s.size().cmp(&t.size()) {
        Ordering::Greater => return true,
        Ordering::Less => return false,
        Ordering::Equal => {}
    }
    match (s, t) {
        (T::Var(_), _) => false,
        (T::App(..), T::Var(x)) => s.occurs(*x),
        (T::App(f, xs), T::App(g, ys)) => {
            let pf = (set.syms[*f as usize].args.len(), *f);
            let pg = (set.syms[*g as usize].args.len(), *g);
            match pf.cmp(&pg) {
                Ordering::Greater => true,
                Ordering::Less => false,
                Ordering::Equal => match xs.iter().zip(ys).find(|(x, y)| x != y) {
                    Some((x, y)) => kbo_gt(x, y, set),
                    None => false,
                },
            }
        }
    }
}

struct Stored {
    clause: Clause,
    parents: Vec<usize>,
    rule: &'static str,
}

struct Prover<'a> {
    set: &'a ClauseSet,
    cfg: RefuteConfig,
    paramodulation: bool,
    store: Vec<Stored>,
    active: Vec<usize>,
    passive: BinaryHeap<Reverse<(usize, usize)>>,
    /// The same clauses oldest first, for the age picks.
    queue: VecDeque<usize>,
    picked: Vec<bool>,
    seen: HashSet<Clause>,
    /// Oriented unit equations (clause id, lhs, rhs) used for rewriting.
    demodulators: Vec<(usize, T, T)>,
    discarded: bool,
}

/// Positions of non-variable subterms, as paths of argument indices.
fn positions(t: &T, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if let T::App(_, args) = t {
        out.push(path.clone());
        for (i, a) in args.iter().enumerate() {
            path.push(i);
            positions(a, path, out);
            path.pop();
        }
    }
}

fn at<'t>(t: &'t T, path: &[usize]) -> &'t T {
    path.iter().fold(t, |t, &i| match t {
        T::App(_, args) => &args[i],
        T::Var(_) => unreachable!("positions only descend through applications"),
    })
}

fn replace(t: &T, path: &[usize], by: &T) -> T {
    match path.split_first() {
        None => by.clone(),
        Some((&i, rest)) => match t {
            T::App(f, args) => {
                let mut args = args.clone();
                args[i] = replace(&args[i], rest, by);
                T::App(*f, args)
            }
            T::Var(_) => unreachable!("positions only descend through applications"),
        },
    }
}

fn canonical(c: Clause) -> Clause {
    // Literal order is irrelevant; sort then rename so variants compare equal.
    let mut lits = c.lits;
    lits.sort();
    Clause::normalize(lits, &c.sorts).expect("normal clauses stay nontautological")
}

impl Prover<'_> {
    fn add(&mut self, clause: Clause, parents: Vec<usize>, rule: &'static str) -> Option<usize> {
        let clause = self.simplify(clause)?;
        let clause = canonical(clause);
        if clause.weight() > self.cfg.max_weight {
            self.discarded = true;
            return None;
        }
        if !self.seen.insert(clause.clone()) {
            return None;
        }
        let id = self.store.len();
        let w = clause.weight();
        self.store.push(Stored { clause, parents, rule });
        self.passive.push(Reverse((w, id)));
        self.queue.push_back(id);
        self.picked.push(false);
        Some(id)
    }

    /// Rewrites with the demodulators to normal form; `None` if the result is a tautology.
    fn simplify(&self, c: Clause) -> Option<Clause> {
        let mut lits = c.lits;
        if !self.demodulators.is_empty() {
            for l in &mut lits {
                l.atom = l.atom.map_terms(&mut |t| self.rewrite(t, &c.sorts));
            }
        }
        Clause::normalize(lits, &c.sorts)
    }

    fn rewrite(&self, t: &T, tsorts: &[Sort]) -> T {
        let mut t = match t {
            T::Var(_) => return t.clone(),
            T::App(f, args) => T::App(*f, args.iter().map(|a| self.rewrite(a, tsorts)).collect()),
        };
        'outer: loop {
            for (id, l, r) in &self.demodulators {
                let psorts = &self.store[*id].clause.sorts;
                let mut binds = vec![None; psorts.len()];
                if match_term(l, &t, &mut binds, psorts, tsorts, self.set) {
                    t = self.rewrite(&substitute(r, &binds), tsorts);
                    continue 'outer;
                }
            }
            return t;
        }
    }

    fn subsumed(&self, c: &Clause) -> bool {
        self.active.iter().any(|&a| subsumes(&self.store[a].clause, c, self.set))
    }

    fn run(&mut self) -> Outcome {
        let mut steps = 0;
        while let Some(id) = self.select(steps) {
            if steps >= self.cfg.steps || self.store.len() >= self.cfg.max_clauses {
                return Outcome::GaveUp { steps, saturated: false };
            }
            steps += 1;
            let Some(given) = self.simplify(self.store[id].clause.clone()) else { continue };
            let id = if given != self.store[id].clause {
                self.store.push(Stored { clause: given.clone(), parents: vec![id], rule: "demodulation" });
                self.picked.push(true);
                self.store.len() - 1
            } else {
                id
            };
            if given.is_empty() {
                return Outcome::Refuted { steps, proof: self.proof(id) };
            }
            if self.subsumed(&given) {
                continue;
            }
            self.active.push(id);
            if let [Lit { pos: true, atom: Atom::Eq(a, b) }] = given.lits.as_slice() {
                if kbo_gt(a, b, self.set) {
                    self.demodulators.push((id, a.clone(), b.clone()));
                } else if kbo_gt(b, a, self.set) {
                    self.demodulators.push((id, b.clone(), a.clone()));
                }
            }
            for (c, parents, rule) in self.infer(id) {
                if let Some(new) = self.add(c, parents, rule) {
                    if self.store[new].clause.is_empty() {
                        return Outcome::Refuted { steps, proof: self.proof(new) };
                    }
                }
            }
        }
        Outcome::GaveUp { steps, saturated: !self.discarded }
    }

    /// Lightest clause first, except every `AGE_RATIO`-th pick takes the oldest.
    fn select(&mut self, steps: usize) -> Option<usize> {
        let by_age = steps % AGE_RATIO == AGE_RATIO - 1;
        loop {
            let id = if by_age {
                self.queue.pop_front().or_else(|| self.passive.pop().map(|Reverse((_, id))| id))?
            } else {
                self.passive.pop().map(|Reverse((_, id))| id).or_else(|| self.queue.pop_front())?
            };
            if !self.picked[id] {
                self.picked[id] = true;
                return Some(id);
            }
        }
    }

    fn infer(&self, g: usize) -> Vec<(Clause, Vec<usize>, &'static str)> {
        let mut out = Vec::new();
        self.factor(g, &mut out);
        self.equality_resolution(g, &mut out);
        for &a in &self.active {
            self.resolve(g, a, &mut out);
            if self.paramodulation {
                self.paramodulate(g, a, &mut out);
                if a != g {
                    self.paramodulate(a, g, &mut out);
                }
            }
        }
        out
    }

    fn finish(&self, lits: Vec<Lit>, s: &Subst) -> Option<Clause> {
        let lits = lits.into_iter().map(|l| Lit { pos: l.pos, atom: l.atom.map_terms(&mut |t| s.apply(t)) }).collect();
        Clause::normalize(lits, &s.sorts)
    }

    fn atoms_unify(&self, s: &mut Subst, a: &Atom, b: &Atom) -> bool {
        match (a, b) {
            (Atom::Pred(p, xs), Atom::Pred(q, ys)) => p == q && s.unify_all(&xs.iter().collect::<Vec<_>>(), &ys.iter().collect::<Vec<_>>(), self.set),
            _ => false,
        }
    }

    /// Unifiers of two atoms; equations unify in both orientations.
    fn atom_unifiers(&self, sorts: &[Sort], a: &Atom, b: &Atom) -> Vec<Subst> {
        let mut out = Vec::new();
        match (a, b) {
            (Atom::Eq(l1, r1), Atom::Eq(l2, r2)) => {
                for (x, y) in [(l2, r2), (r2, l2)] {
                    let mut s = Subst::new(sorts.to_vec());
                    if s.unify_all(&[l1, r1], &[x, y], self.set) {
                        out.push(s);
                    }
                }
            }
            _ => {
                let mut s = Subst::new(sorts.to_vec());
                if self.atoms_unify(&mut s, a, b) {
                    out.push(s);
                }
            }
        }
        out
    }

    fn resolve(&self, g: usize, a: usize, out: &mut Vec<(Clause, Vec<usize>, &'static str)>) {
        let c1 = &self.store[g].clause;
        let c2 = &self.store[a].clause;
        let n = c1.sorts.len() as u32;
        let lits2: Vec<Lit> = c2.lits.iter().map(|l| shift_lit(l, n)).collect();
        let mut sorts = c1.sorts.clone();
        sorts.extend(&c2.sorts);
        for (i, l1) in c1.lits.iter().enumerate() {
            for (j, l2) in lits2.iter().enumerate() {
                if l1.pos == l2.pos || std::mem::discriminant(&l1.atom) != std::mem::discriminant(&l2.atom) {
                    continue;
                }
                for s in self.atom_unifiers(&sorts, &l1.atom, &l2.atom) {
                    let mut lits: Vec<Lit> = c1.lits.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, l)| l.clone()).collect();
                    lits.extend(lits2.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, l)| l.clone()));
                    if let Some(c) = self.finish(lits, &s) {
                        out.push((c, vec![g, a], "resolution"));
                    }
                }
            }
        }
    }

    fn factor(&self, g: usize, out: &mut Vec<(Clause, Vec<usize>, &'static str)>) {
        let c = &self.store[g].clause;
        for i in 0..c.lits.len() {
            for j in i + 1..c.lits.len() {
                let (a, b) = (&c.lits[i], &c.lits[j]);
                if a.pos != b.pos {
                    continue;
                }
                for s in self.atom_unifiers(&c.sorts, &a.atom, &b.atom) {
                    let lits = c.lits.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, l)| l.clone()).collect();
                    if let Some(f) = self.finish(lits, &s) {
                        out.push((f, vec![g], "factoring"));
                    }
                }
            }
        }
    }

    fn equality_resolution(&self, g: usize, out: &mut Vec<(Clause, Vec<usize>, &'static str)>) {
        let c = &self.store[g].clause;
        for (i, l) in c.lits.iter().enumerate() {
            if let Lit { pos: false, atom: Atom::Eq(a, b) } = l {
                let mut s = Subst::new(c.sorts.clone());
                if s.unify(a, b, self.set) {
                    let lits = c.lits.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, l)| l.clone()).collect();
                    if let Some(r) = self.finish(lits, &s) {
                        out.push((r, vec![g], "equality resolution"));
                    }
                }
            }
        }
    }

    /// Rewrites a subterm of `into` with a positive equation of `from`.
    fn paramodulate(&self, from: usize, into: usize, out: &mut Vec<(Clause, Vec<usize>, &'static str)>) {
        let c1 = &self.store[from].clause;
        let c2 = &self.store[into].clause;
        let n = c1.sorts.len() as u32;
        let lits2: Vec<Lit> = c2.lits.iter().map(|l| shift_lit(l, n)).collect();
        let mut sorts = c1.sorts.clone();
        sorts.extend(&c2.sorts);
        for (i, eq) in c1.lits.iter().enumerate() {
            let Lit { pos: true, atom: Atom::Eq(a, b) } = eq else { continue };
            for (l, r) in [(a, b), (b, a)] {
                if matches!(l, T::Var(_)) || kbo_gt(r, l, self.set) {
                    continue;
                }
                for (j, target) in lits2.iter().enumerate() {
                    let args = target.atom.args();
                    for (k, arg) in args.iter().enumerate() {
                        let mut ps = Vec::new();
                        positions(arg, &mut Vec::new(), &mut ps);
                        for p in ps {
                            let sub = at(arg, &p);
                            let mut s = Subst::new(sorts.clone());
                            if !s.unify(l, sub, self.set) {
                                continue;
                            }
                            let (ls, rs) = (s.apply(l), s.apply(r));
                            if kbo_gt(&rs, &ls, self.set) {
                                continue;
                            }
                            let new_arg = replace(arg, &p, r);
                            let atom = match &target.atom {
                                Atom::Pred(q, xs) => {
                                    let mut xs = xs.clone();
                                    xs[k] = new_arg;
                                    Atom::Pred(*q, xs)
                                }
                                Atom::Eq(x, y) => {
                                    if k == 0 {
                                        Atom::Eq(new_arg, y.clone())
                                    } else {
                                        Atom::Eq(x.clone(), new_arg)
                                    }
                                }
                            };
                            let mut lits: Vec<Lit> =
                                c1.lits.iter().enumerate().filter(|(x, _)| *x != i).map(|(_, l)| l.clone()).collect();
                            for (x, l) in lits2.iter().enumerate() {
                                lits.push(if x == j { Lit { pos: target.pos, atom: atom.clone() } } else { l.clone() });
                            }
                            if let Some(c) = self.finish(lits, &s) {
                                out.push((c, vec![from, into], "paramodulation"));
                            }
                        }
                    }
                }
            }
        }
    }

    fn proof(&self, last: usize) -> Vec<String> {
        let mut needed = vec![last];
        let mut seen = HashSet::new();
        let mut order = Vec::new();
        while let Some(id) = needed.pop() {
            if !seen.insert(id) {
                continue;
            }
            order.push(id);
            needed.extend(&self.store[id].parents);
        }
        order.sort_unstable();
        order
            .into_iter()
            .map(|id| {
                let s = &self.store[id];
                let from = if s.parents.is_empty() {
                    String::new()
                } else {
                    let ps: Vec<String> = s.parents.iter().map(|p| p.to_string()).collect();
                    format!(" [{}]", ps.join(","))
                };
                format!("{id}. {} ({}{from})", self.set.display(&s.clause), s.rule)
            })
            .collect()
    }
}

/// Does `c` subsume `d`: some substitution maps every literal of `c` into `d`?
pub fn subsumes(c: &Clause, d: &Clause, set: &ClauseSet) -> bool {
    fn lit_match(a: &Lit, b: &Lit, binds: &mut Vec<Option<T>>, cs: &[Sort], ds: &[Sort], set: &ClauseSet) -> bool {
        if a.pos != b.pos {
            return false;
        }
        match (&a.atom, &b.atom) {
            (Atom::Pred(p, xs), Atom::Pred(q, ys)) => {
                p == q && xs.iter().zip(ys).all(|(x, y)| match_term(x, y, binds, cs, ds, set))
            }
            (Atom::Eq(l1, r1), Atom::Eq(l2, r2)) => {
                let saved = binds.clone();
                if match_term(l1, l2, binds, cs, ds, set) && match_term(r1, r2, binds, cs, ds, set) {
                    return true;
                }
                *binds = saved;
                match_term(l1, r2, binds, cs, ds, set) && match_term(r1, l2, binds, cs, ds, set)
            }
            _ => false,
        }
    }
    fn go(i: usize, c: &Clause, d: &Clause, binds: &mut Vec<Option<T>>, set: &ClauseSet) -> bool {
        if i == c.lits.len() {
            return true;
        }
        for b in &d.lits {
            let saved = binds.clone();
            if lit_match(&c.lits[i], b, binds, &c.sorts, &d.sorts, set) && go(i + 1, c, d, binds, set) {
                return true;
            }
            *binds = saved;
        }
        false
    }
    c.lits.len() <= d.lits.len() && go(0, c, d, &mut vec![None; c.sorts.len()], set)
}

/// Equality axioms: reflexivity, transitivity and substitutivity for every symbol argument.
/// Symmetry is built into the unification of equations.
pub fn congruence_axioms(set: &ClauseSet) -> Vec<Clause> {
    let mut sorts: Vec<Sort> = (0..set.sorts.len() as Sort).collect();
    if sorts.is_empty() {
        sorts.push(0);
    }
    let eq = |a: T, b: T, pos: bool| Lit { pos, atom: Atom::Eq(a, b) };
    let mut out = Vec::new();
    for &s in &sorts {
        out.push(Clause { lits: vec![eq(T::Var(0), T::Var(0), true)], sorts: vec![s] });
        out.push(Clause {
            lits: vec![eq(T::Var(0), T::Var(1), false), eq(T::Var(1), T::Var(2), false), eq(T::Var(0), T::Var(2), true)],
            sorts: vec![s; 3],
        });
    }
    for (f, info) in set.syms.iter().enumerate() {
        let n = info.args.len();
        for k in 0..n {
            // Variables 0..n are the arguments, n is the replacement at position k.
            let xs: Vec<T> = (0..n as u32).map(T::Var).collect();
            let mut ys = xs.clone();
            ys[k] = T::Var(n as u32);
            let mut sorts = info.args.clone();
            sorts.push(info.args[k]);
            let premise = eq(T::Var(k as u32), T::Var(n as u32), false);
            let lits = match info.result {
                Some(_) => vec![premise, eq(T::App(f as Sym, xs), T::App(f as Sym, ys), true)],
                None => vec![
                    premise,
                    Lit { pos: false, atom: Atom::Pred(f as Sym, xs) },
                    Lit { pos: true, atom: Atom::Pred(f as Sym, ys) },
                ],
            };
            out.push(Clause { lits, sorts });
        }
    }
    out
}

/// Searches for a refutation of `set`. A refutation proves unsatisfiability.
pub fn refute(set: &ClauseSet, cfg: &RefuteConfig) -> Outcome {
    let paramodulation = match cfg.equality {
        EqualityMode::Auto | EqualityMode::Paramodulation => true,
        EqualityMode::Congruence => false,
    };
    let mut p = Prover {
        set,
        cfg: *cfg,
        paramodulation,
        store: Vec::new(),
        active: Vec::new(),
        passive: BinaryHeap::new(),
        queue: VecDeque::new(),
        picked: Vec::new(),
        seen: HashSet::new(),
        demodulators: Vec::new(),
        discarded: false,
    };
    let uses_equality = set.clauses.iter().any(|c| c.lits.iter().any(|l| matches!(l.atom, Atom::Eq(..))));
    let axioms = if !paramodulation && uses_equality { congruence_axioms(set) } else { Vec::new() };
    for c in set.clauses.iter().cloned() {
        if c.is_empty() {
            p.store.push(Stored { clause: c, parents: vec![], rule: "input" });
            return Outcome::Refuted { steps: 0, proof: p.proof(0) };
        }
        p.add(c, vec![], "input");
    }
    for c in axioms {
        p.add(c, vec![], "congruence");
    }
    p.run()
}
