use super::Dialect;
use crate::encode::sanitize;
use crate::syntax::{Formula, Level, Problem, Signature, SymDecl, Term, Type, IOTA, TYVAR_TERM_PREFIX};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PrintError {
    #[error("cannot print a {level} problem as {dialect}")]
    LevelMismatch { level: Level, dialect: Dialect },
}

/// Prints `problem` in the dialect its level calls for.
pub fn print(problem: &Problem) -> String {
    let lang = if problem.level() == Level::Untyped { "fof" } else { "tff" };
    let mut out = String::new();
    if lang == "tff" {
        print_sig(&problem.sig, &mut out);
    }
    for nf in &problem.formulas {
        let body = FormulaPrinter::new(&nf.formula, lang == "tff").print(&nf.formula);
        let _ = writeln!(out, "{lang}({}, {}, {body}).", quote_name(&nf.name), nf.role.as_str());
    }
    out
}

/// Prints in an explicitly requested dialect, rejecting a mismatched level.
pub fn print_as(problem: &Problem, dialect: Dialect) -> Result<String, PrintError> {
    let ok = match dialect {
        Dialect::Auto => true,
        Dialect::Tff1 => problem.level() != Level::Untyped,
        Dialect::Tff0 => problem.level() == Level::Mono,
        Dialect::Fof => problem.level() == Level::Untyped,
    };
    if !ok {
        return Err(PrintError::LevelMismatch { level: problem.level(), dialect });
    }
    Ok(print(problem))
}

fn is_lower_word(s: &str) -> bool {
    let mut cs = s.chars();
    cs.next().is_some_and(|c| c.is_ascii_lowercase()) && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn quote_name(s: &str) -> String {
    if is_lower_word(s) || (s.starts_with('\'') && s.ends_with('\'') && s.len() > 1) {
        s.to_string()
    } else if !s.is_empty() && s.chars().all(|c| c.is_ascii_digit()) {
        s.to_string()
    } else {
        format!("'{}'", s.replace('\\', "\\\\").replace('\'', "\\'"))
    }
}

fn print_sig(sig: &Signature, out: &mut String) {
    for (k, &n) in &sig.type_ctors {
        if k == IOTA {
            continue;
        }
        let ty = match n {
            0 => "$tType".to_string(),
            1 => "$tType > $tType".to_string(),
            n => format!("({}) > $tType", vec!["$tType"; n].join(" * ")),
        };
        let _ = writeln!(out, "tff({}, type, {k}: {ty}).", quote_name(&format!("type_{}", sanitize(k))));
    }
    for (f, d) in sig.symbols() {
        let _ = writeln!(out, "tff({}, type, {f}: {}).", quote_name(&format!("decl_{}", sanitize(f))), decl_text(d));
    }
}

fn decl_text(d: &SymDecl) -> String {
    let names = VarNames::for_tyvars(&d.tyvars);
    let ty = |t: &Type| names.ty(t);
    let result = d.result.as_ref().map_or("$o".to_string(), ty);
    let body = match d.args.len() {
        0 => result,
        1 => format!("{} > {result}", ty(&d.args[0])),
        _ => format!("({}) > {result}", d.args.iter().map(ty).collect::<Vec<_>>().join(" * ")),
    };
    if d.tyvars.is_empty() {
        body
    } else {
        let vs: Vec<String> = d.tyvars.iter().map(|a| format!("{}: $tType", names.tyvar(a))).collect();
        format!("!>[{}]: {body}", vs.join(", "))
    }
}

/// Printed names of type and term variables, sharing one namespace.
#[derive(Default)]
struct VarNames {
    tyvars: BTreeMap<String, String>,
    vars: BTreeMap<String, String>,
    used: BTreeSet<String>,
}

fn upper_word(name: &str) -> String {
    let mut s: String = name.chars().map(|c| if c.is_ascii_alphanumeric() || c == '_' { c } else { '_' }).collect();
    while s.contains("__") {
        s = s.replace("__", "_");
    }
    let s = s.trim_end_matches('_').to_string();
    match s.chars().next() {
        Some(c) if c.is_ascii_uppercase() => s,
        Some(c) if c.is_ascii_lowercase() => c.to_ascii_uppercase().to_string() + &s[1..],
        _ => format!("X{s}"),
    }
}

impl VarNames {
    fn for_tyvars(tyvars: &[String]) -> VarNames {
        let mut n = VarNames::default();
        for a in tyvars {
            n.add_tyvar(a);
        }
        n
    }

    fn fresh(&mut self, name: &str) -> String {
        let base = upper_word(name.strip_prefix(TYVAR_TERM_PREFIX).unwrap_or(name));
        let mut cand = base.clone();
        let mut i = 1;
        while self.used.contains(&cand) {
            cand = format!("{base}_{i}");
            i += 1;
        }
        self.used.insert(cand.clone());
        cand
    }

    fn add_tyvar(&mut self, a: &str) {
        if !self.tyvars.contains_key(a) {
            let p = self.fresh(a);
            self.tyvars.insert(a.to_string(), p);
        }
    }

    fn add_var(&mut self, x: &str) {
        if !self.vars.contains_key(x) {
            let p = self.fresh(x);
            self.vars.insert(x.to_string(), p);
        }
    }

    fn tyvar(&self, a: &str) -> String {
        self.tyvars.get(a).cloned().unwrap_or_else(|| upper_word(a))
    }

    fn ty(&self, t: &Type) -> String {
        match t {
            Type::Var(a) => self.tyvar(a),
            Type::App(k, args) if args.is_empty() => k.clone(),
            Type::App(k, args) => {
                format!("{k}({})", args.iter().map(|a| self.ty(a)).collect::<Vec<_>>().join(", "))
            }
        }
    }
}

struct FormulaPrinter {
    names: VarNames,
    typed: bool,
}

impl FormulaPrinter {
    fn new(f: &Formula, typed: bool) -> FormulaPrinter {
        let mut names = VarNames::default();
        collect_names(f, &mut names);
        FormulaPrinter { names, typed }
    }

    fn term(&self, t: &Term) -> String {
        match t {
            Term::Var(v) => self.names.vars.get(&v.name).cloned().unwrap_or_else(|| upper_word(&v.name)),
            Term::App { sym, ty_args, args } => {
                let mut parts: Vec<String> = ty_args.iter().map(|a| self.names.ty(a)).collect();
                parts.extend(args.iter().map(|a| self.term(a)));
                if parts.is_empty() {
                    sym.clone()
                } else {
                    format!("{sym}({})", parts.join(", "))
                }
            }
        }
    }

    fn print(&self, f: &Formula) -> String {
        match f {
            Formula::Pred { pos, sym, ty_args, args } => {
                let atom = self.term(&Term::app(sym.clone(), ty_args.clone(), args.clone()));
                if *pos {
                    atom
                } else {
                    format!("~{atom}")
                }
            }
            Formula::Eq { pos, lhs, rhs } => {
                format!("{} {} {}", self.term(lhs), if *pos { "=" } else { "!=" }, self.term(rhs))
            }
            Formula::And(ps) if ps.is_empty() => "$true".into(),
            Formula::Or(ps) if ps.is_empty() => "$false".into(),
            Formula::And(ps) | Formula::Or(ps) => {
                let op = if matches!(f, Formula::And(_)) { " & " } else { " | " };
                let parts: Vec<String> = ps
                    .iter()
                    .map(|p| {
                        let s = self.print(p);
                        if is_literal(p) || is_constant(p) {
                            s
                        } else {
                            format!("({s})")
                        }
                    })
                    .collect();
                parts.join(op)
            }
            Formula::Forall(..) | Formula::Exists(..) | Formula::ForallType(..) => {
                let forall = !matches!(f, Formula::Exists(..));
                let mut binders = Vec::new();
                let mut cur = f;
                loop {
                    match cur {
                        Formula::ForallType(a, b) if forall => {
                            binders.push(format!("{}: $tType", self.names.tyvar(a)));
                            cur = b;
                        }
                        Formula::Forall(v, b) if forall => {
                            binders.push(self.binder(&v.name, &v.ty));
                            cur = b;
                        }
                        Formula::Exists(v, b) if !forall => {
                            binders.push(self.binder(&v.name, &v.ty));
                            cur = b;
                        }
                        _ => break,
                    }
                }
                let body = self.print(cur);
                let body = if is_literal(cur) && !matches!(cur, Formula::Eq { .. }) || is_constant(cur) {
                    body
                } else if matches!(cur, Formula::Forall(..) | Formula::Exists(..) | Formula::ForallType(..)) {
                    body
                } else {
                    format!("({body})")
                };
                format!("{}[{}]: {body}", if forall { "!" } else { "?" }, binders.join(", "))
            }
        }
    }

    fn binder(&self, name: &str, ty: &Type) -> String {
        let n = self.names.vars.get(name).cloned().unwrap_or_else(|| upper_word(name));
        if self.typed {
            format!("{n}: {}", self.names.ty(ty))
        } else {
            n
        }
    }
}

fn is_literal(f: &Formula) -> bool {
    matches!(f, Formula::Pred { .. } | Formula::Eq { .. })
}

fn is_constant(f: &Formula) -> bool {
    matches!(f, Formula::And(ps) | Formula::Or(ps) if ps.is_empty())
}

fn collect_names(f: &Formula, names: &mut VarNames) {
    match f {
        Formula::ForallType(a, b) => {
            names.add_tyvar(a);
            collect_names(b, names);
        }
        Formula::Forall(v, b) | Formula::Exists(v, b) => {
            names.add_var(&v.name);
            collect_names(b, names);
        }
        Formula::And(ps) | Formula::Or(ps) => ps.iter().for_each(|p| collect_names(p, names)),
        _ => {}
    }
}
