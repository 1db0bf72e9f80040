//! Size metrics of (clausified) problems: clauses, literals per clause,
//! symbols per atom and total symbols.

use crate::oracle::{clausify, ClauseSet, OracleError};
use crate::syntax::{Formula, Problem, Term, Type};
use std::fmt;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SizeStats {
    pub clauses: usize,
    pub literals: usize,
    /// Symbol occurrences in atoms, variables included.
    pub symbols: usize,
}

impl SizeStats {
    pub fn literals_per_clause(&self) -> f64 {
        ratio(self.literals, self.clauses)
    }

    pub fn symbols_per_atom(&self) -> f64 {
        ratio(self.symbols, self.literals)
    }

    pub fn of_clauses(set: &ClauseSet) -> SizeStats {
        let mut s = SizeStats { clauses: set.clauses.len(), ..SizeStats::default() };
        for c in &set.clauses {
            s.literals += c.lits.len();
            s.symbols += c.lits.iter().map(|l| l.atom.size()).sum::<usize>();
        }
        s
    }

    /// Counts each formula as one clause and each atom as a literal, without clausifying.
    /// Type arguments count by their size.
    pub fn of_formulas(problem: &Problem) -> SizeStats {
        let mut s = SizeStats { clauses: problem.formulas.len(), ..SizeStats::default() };
        for f in problem.formulas() {
            f.visit_atoms(&mut |a| {
                s.literals += 1;
                s.symbols += match a {
                    Formula::Pred { ty_args, args, .. } => 1 + ty_size(ty_args) + args.iter().map(term_size).sum::<usize>(),
                    Formula::Eq { lhs, rhs, .. } => 1 + term_size(lhs) + term_size(rhs),
                    _ => 0,
                };
            });
        }
        s
    }

    /// Clausified metrics; the problem must be ground-typed.
    pub fn of_problem(problem: &Problem) -> Result<SizeStats, OracleError> {
        clausify(problem).map(|c| SizeStats::of_clauses(&c))
    }
}

fn ratio(a: usize, b: usize) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

fn ty_size(tys: &[Type]) -> usize {
    tys.iter().map(Type::size).sum()
}

fn term_size(t: &Term) -> usize {
    match t {
        Term::Var(_) => 1,
        Term::App { ty_args, args, .. } => 1 + ty_size(ty_args) + args.iter().map(term_size).sum::<usize>(),
    }
}

impl fmt::Display for SizeStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "clauses: {}", self.clauses)?;
        writeln!(f, "literals per clause: {:.1}", self.literals_per_clause())?;
        writeln!(f, "symbols per atom: {:.1}", self.symbols_per_atom())?;
        writeln!(f, "symbols: {}", self.symbols)
    }
}
