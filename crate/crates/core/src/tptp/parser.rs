use super::lexer::{lex, Tok, Token};
use super::{AnnotatedFormula, Dialect, ParseError, ParseOptions, Parsed};
use crate::normalize::{normalize, Fm};
use crate::syntax::{
    is_reserved, Formula, Level, Named, Origin, Problem, Role, Signature, SymDecl, Term, Type, Var, VarKind, IOTA,
};
use crate::typing::{check_signature, check_well_typed};

#[derive(Clone, Debug)]
enum Raw {
    Var(String, usize, usize),
    App(String, Vec<Raw>, usize, usize),
}

#[derive(Clone, Debug)]
enum RawFm {
    True,
    False,
    Atom(Raw),
    Eq(bool, Raw, Raw),
    Not(Box<RawFm>),
    And(Vec<RawFm>),
    Or(Vec<RawFm>),
    Bin(Tok, Box<RawFm>, Box<RawFm>),
    Quant(bool, Vec<(String, Option<TyExpr>, usize, usize)>, Box<RawFm>),
}

#[derive(Clone, Debug)]
enum TyExpr {
    Atom(Raw),
    Product(Vec<TyExpr>),
    Arrow(Vec<TyExpr>, Box<TyExpr>),
    Pi(Vec<(String, Option<TyExpr>)>, Box<TyExpr>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Lang {
    Tff,
    Fof,
}

enum Stmt {
    Type { name: String, decl: TyExpr, line: usize, col: usize },
    Formula { name: String, role: String, fm: RawFm, lang: Lang, line: usize, col: usize },
    Include(String, usize, usize),
}

struct P {
    toks: Vec<Token>,
    pos: usize,
}

type R<T> = Result<T, ParseError>;

impl P {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn at(&self) -> (usize, usize) {
        let t = &self.toks[self.pos];
        (t.line, t.col)
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> R<T> {
        let (l, c) = self.at();
        Err(ParseError::syntax(l, c, msg))
    }

    fn expect(&mut self, t: Tok, what: &str) -> R<()> {
        if *self.peek() == t {
            self.next();
            Ok(())
        } else {
            self.err(format!("expected {what}, found {}", describe(self.peek())))
        }
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.next();
            true
        } else {
            false
        }
    }

    fn name(&mut self) -> R<String> {
        match self.next().tok {
            Tok::Lower(s) | Tok::Quoted(s) | Tok::Number(s) => Ok(s),
            t => {
                self.pos -= 1;
                self.err(format!("expected a name, found {}", describe(&t)))
            }
        }
    }

    fn statements(&mut self) -> R<Vec<Stmt>> {
        let mut out = Vec::new();
        while *self.peek() != Tok::Eof {
            let (line, col) = self.at();
            let kw = match self.next().tok {
                Tok::Lower(s) => s,
                t => {
                    self.pos -= 1;
                    return self.err(format!("expected `tff`, `fof` or `include`, found {}", describe(&t)));
                }
            };
            match kw.as_str() {
                "include" => {
                    self.expect(Tok::LParen, "`(`")?;
                    let file = match self.next().tok {
                        Tok::Quoted(s) => s[1..s.len() - 1].to_string(),
                        _ => return Err(ParseError::syntax(line, col, "expected a quoted file name")),
                    };
                    if self.eat(&Tok::Comma) {
                        self.skip_balanced()?;
                    }
                    self.expect(Tok::RParen, "`)`")?;
                    self.expect(Tok::Dot, "`.`")?;
                    out.push(Stmt::Include(file, line, col));
                }
                "tff" | "fof" => {
                    let lang = if kw == "tff" { Lang::Tff } else { Lang::Fof };
                    self.expect(Tok::LParen, "`(`")?;
                    let name = self.name()?;
                    self.expect(Tok::Comma, "`,`")?;
                    let role = match self.next().tok {
                        Tok::Lower(s) => s,
                        _ => return Err(ParseError::syntax(line, col, "expected a role")),
                    };
                    self.expect(Tok::Comma, "`,`")?;
                    if role == "type" {
                        if lang == Lang::Fof {
                            return Err(ParseError::syntax(line, col, "type declarations need `tff`"));
                        }
                        let (name_t, decl) = self.type_decl()?;
                        out.push(Stmt::Type { name: name_t, decl, line, col });
                    } else {
                        let fm = self.formula()?;
                        out.push(Stmt::Formula { name, role, fm, lang, line, col });
                    }
                    if self.eat(&Tok::Comma) {
                        self.skip_balanced()?;
                    }
                    self.expect(Tok::RParen, "`)`")?;
                    self.expect(Tok::Dot, "`.`")?;
                }
                "thf" | "tcf" | "cnf" | "tpi" => {
                    return Err(ParseError::unsupported(line, col, format!("`{kw}` statements")));
                }
                other => return Err(ParseError::syntax(line, col, format!("unknown statement kind `{other}`"))),
            }
        }
        Ok(out)
    }

    /// Skips annotations up to (not including) the closing parenthesis.
    fn skip_balanced(&mut self) -> R<()> {
        let mut depth = 0usize;
        loop {
            match self.peek() {
                Tok::Eof => return self.err("unexpected end of input"),
                Tok::LParen | Tok::LBrack => depth += 1,
                Tok::RParen | Tok::RBrack if depth == 0 => return Ok(()),
                Tok::RParen | Tok::RBrack => depth -= 1,
                _ => {}
            }
            self.next();
        }
    }

    fn type_decl(&mut self) -> R<(String, TyExpr)> {
        if self.eat(&Tok::LParen) {
            let r = self.type_decl()?;
            self.expect(Tok::RParen, "`)`")?;
            return Ok(r);
        }
        let name = match self.next().tok {
            Tok::Lower(s) | Tok::Quoted(s) => s,
            Tok::Dollar(s) if s.starts_with("$$") => s,
            t => {
                self.pos -= 1;
                return self.err(format!("expected a symbol name, found {}", describe(&t)));
            }
        };
        self.expect(Tok::Colon, "`:`")?;
        Ok((name, self.ty_expr()?))
    }

    fn ty_unit(&mut self) -> R<TyExpr> {
        if self.eat(&Tok::LParen) {
            let e = self.ty_expr()?;
            self.expect(Tok::RParen, "`)`")?;
            return Ok(e);
        }
        if self.eat(&Tok::BangGt) {
            self.expect(Tok::LBrack, "`[`")?;
            let vars = self.var_list()?;
            self.expect(Tok::Colon, "`:`")?;
            let body = self.ty_expr()?;
            return Ok(TyExpr::Pi(vars.into_iter().map(|(n, t, _, _)| (n, t)).collect(), Box::new(body)));
        }
        Ok(TyExpr::Atom(self.term()?))
    }

    fn ty_expr(&mut self) -> R<TyExpr> {
        let first = self.ty_unit()?;
        let mut parts = vec![first];
        while self.eat(&Tok::Star) {
            parts.push(self.ty_unit()?);
        }
        let lhs = if parts.len() == 1 { parts.pop().unwrap() } else { TyExpr::Product(parts) };
        if self.eat(&Tok::Gt) {
            let args = match lhs {
                TyExpr::Product(ps) => ps,
                e => vec![e],
            };
            let res = self.ty_unit()?;
            return Ok(TyExpr::Arrow(args, Box::new(res)));
        }
        Ok(lhs)
    }

    fn var_list(&mut self) -> R<Vec<(String, Option<TyExpr>, usize, usize)>> {
        let mut out = Vec::new();
        loop {
            let (l, c) = self.at();
            let name = match self.next().tok {
                Tok::Upper(s) => s,
                t => {
                    self.pos -= 1;
                    return self.err(format!("expected a variable, found {}", describe(&t)));
                }
            };
            let ty = if self.eat(&Tok::Colon) { Some(self.ty_unit()?) } else { None };
            out.push((name, ty, l, c));
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        self.expect(Tok::RBrack, "`]`")?;
        Ok(out)
    }

    fn formula(&mut self) -> R<RawFm> {
        let first = self.unit()?;
        match self.peek().clone() {
            Tok::And | Tok::Or => {
                let op = self.peek().clone();
                let mut parts = vec![first];
                while self.eat(&op) {
                    parts.push(self.unit()?);
                }
                if matches!(self.peek(), Tok::And | Tok::Or | Tok::Imp | Tok::RevImp | Tok::Iff | Tok::Xor | Tok::Nor | Tok::Nand) {
                    return self.err("mixed binary connectives need parentheses");
                }
                Ok(if op == Tok::And { RawFm::And(parts) } else { RawFm::Or(parts) })
            }
            op @ (Tok::Imp | Tok::RevImp | Tok::Iff | Tok::Xor | Tok::Nor | Tok::Nand) => {
                self.next();
                let rhs = self.unit()?;
                Ok(RawFm::Bin(op, Box::new(first), Box::new(rhs)))
            }
            _ => Ok(first),
        }
    }

    fn unit(&mut self) -> R<RawFm> {
        match self.peek().clone() {
            Tok::Tilde => {
                self.next();
                Ok(RawFm::Not(Box::new(self.unit()?)))
            }
            Tok::Bang | Tok::Question => {
                let forall = self.next().tok == Tok::Bang;
                self.expect(Tok::LBrack, "`[`")?;
                let vars = self.var_list()?;
                self.expect(Tok::Colon, "`:`")?;
                Ok(RawFm::Quant(forall, vars, Box::new(self.unit()?)))
            }
            Tok::LParen => {
                self.next();
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::Dollar(s) if s == "$true" => {
                self.next();
                Ok(RawFm::True)
            }
            Tok::Dollar(s) if s == "$false" => {
                self.next();
                Ok(RawFm::False)
            }
            Tok::Other(s) => {
                let (l, c) = self.at();
                Err(ParseError::unsupported(l, c, format!("higher-order or non-classical syntax `{s}`")))
            }
            _ => {
                let lhs = self.term()?;
                match self.peek() {
                    Tok::Eq | Tok::Neq => {
                        let pos = self.next().tok == Tok::Eq;
                        let rhs = self.term()?;
                        Ok(RawFm::Eq(pos, lhs, rhs))
                    }
                    _ => Ok(RawFm::Atom(lhs)),
                }
            }
        }
    }

    fn term(&mut self) -> R<Raw> {
        let t = self.next();
        match t.tok {
            Tok::Upper(s) => Ok(Raw::Var(s, t.line, t.col)),
            Tok::Lower(s) | Tok::Quoted(s) | Tok::Dollar(s) => {
                let mut args = Vec::new();
                if self.eat(&Tok::LParen) {
                    loop {
                        args.push(self.term()?);
                        if !self.eat(&Tok::Comma) {
                            break;
                        }
                    }
                    self.expect(Tok::RParen, "`)`")?;
                }
                Ok(Raw::App(s, args, t.line, t.col))
            }
            Tok::Number(s) => Err(ParseError::unsupported(t.line, t.col, format!("arithmetic (numeral `{s}`)"))),
            Tok::Distinct(s) => Err(ParseError::unsupported(t.line, t.col, format!("distinct object {s}"))),
            Tok::LBrack => Err(ParseError::unsupported(t.line, t.col, "tuples")),
            other => Err(ParseError::syntax(t.line, t.col, format!("expected a term, found {}", describe(&other)))),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Eof => "end of input".into(),
        Tok::Lower(s) | Tok::Upper(s) | Tok::Dollar(s) | Tok::Quoted(s) | Tok::Number(s) | Tok::Other(s) => {
            format!("`{s}`")
        }
        Tok::Distinct(s) => s.clone(),
        t => format!("{t:?}"),
    }
}

// Resolution of raw statements against the signature.

#[derive(Clone)]
enum Bind {
    TyVar(String),
    Term(Type),
}

struct Resolver<'o> {
    sig: Signature,
    typed: bool,
    opts: &'o ParseOptions,
}

const TTYPE: &str = "$tType";
const BOOL: &str = "$o";

fn is_ttype(e: &TyExpr) -> bool {
    matches!(e, TyExpr::Atom(Raw::App(s, a, _, _)) if s == TTYPE && a.is_empty())
}

fn is_bool(e: &TyExpr) -> bool {
    matches!(e, TyExpr::Atom(Raw::App(s, a, _, _)) if s == BOOL && a.is_empty())
}

impl Resolver<'_> {
    fn check_name(&self, name: &str, l: usize, c: usize) -> R<()> {
        if is_reserved(name) && !self.opts.allow_reserved {
            return Err(ParseError::syntax(l, c, format!("`{name}` is in the reserved namespace")));
        }
        if name.starts_with('$') && !name.starts_with("$$") && !matches!(name, "$i" | "$o" | "$tType" | "$true" | "$false") {
            return Err(ParseError::unsupported(l, c, format!("interpreted symbol `{name}`")));
        }
        Ok(())
    }

    fn declare_type_ctor(&mut self, name: &str, decl: &TyExpr, l: usize, c: usize) -> R<bool> {
        let arity = match decl {
            e if is_ttype(e) => 0,
            TyExpr::Arrow(args, res) if is_ttype(res) && args.iter().all(is_ttype) => args.len(),
            _ => return Ok(false),
        };
        self.check_name(name, l, c)?;
        self.sig.type_ctors.insert(name.to_string(), arity);
        Ok(true)
    }

    fn declare_symbol(&mut self, name: &str, decl: &TyExpr, l: usize, c: usize) -> R<()> {
        self.check_name(name, l, c)?;
        if self.sig.sym(name).is_some() {
            return Err(ParseError::syntax(l, c, format!("`{name}` declared twice")));
        }
        let (tyvars, body) = match decl {
            TyExpr::Pi(vars, body) => {
                let mut tvs = Vec::new();
                for (v, t) in vars {
                    if !t.as_ref().is_some_and(is_ttype) {
                        return Err(ParseError::syntax(l, c, format!("type variable `{v}` must have type $tType")));
                    }
                    tvs.push(v.clone());
                }
                (tvs, body.as_ref())
            }
            e => (Vec::new(), e),
        };
        let env: Vec<(String, Bind)> = tyvars.iter().map(|v| (v.clone(), Bind::TyVar(v.clone()))).collect();
        let (args, res) = match body {
            TyExpr::Arrow(args, res) => (args.clone(), res.as_ref().clone()),
            e => (Vec::new(), e.clone()),
        };
        let arg_tys = args.iter().map(|a| self.ty_expr(a, &env)).collect::<R<Vec<_>>>()?;
        let decl = if is_bool(&res) {
            SymDecl::pred(tyvars, arg_tys)
        } else {
            SymDecl::fun(tyvars, arg_tys, self.ty_expr(&res, &env)?)
        };
        if decl.is_fun() {
            self.sig.add_fun(name, decl);
        } else {
            self.sig.add_pred(name, decl);
        }
        Ok(())
    }

    fn ty_expr(&mut self, e: &TyExpr, env: &[(String, Bind)]) -> R<Type> {
        match e {
            TyExpr::Atom(r) => self.ty(r, env),
            _ => Err(ParseError::unsupported(0, 0, "higher-order types")),
        }
    }

    fn ty(&mut self, r: &Raw, env: &[(String, Bind)]) -> R<Type> {
        match r {
            Raw::Var(v, l, c) => match lookup(env, v) {
                Some(Bind::TyVar(n)) => Ok(Type::Var(n.clone())),
                Some(Bind::Term(_)) => Err(ParseError::syntax(*l, *c, format!("`{v}` is a term variable, not a type"))),
                None => Err(ParseError::syntax(*l, *c, format!("unbound type variable `{v}`"))),
            },
            Raw::App(k, args, l, c) => {
                if k == IOTA {
                    self.sig.type_ctors.entry(IOTA.to_string()).or_insert(0);
                }
                if k == BOOL || k == TTYPE {
                    return Err(ParseError::syntax(*l, *c, format!("`{k}` is not allowed here")));
                }
                match self.sig.type_ctors.get(k) {
                    None => Err(ParseError::syntax(*l, *c, format!("unknown type constructor `{k}`"))),
                    Some(&n) if n != args.len() => Err(ParseError::syntax(
                        *l,
                        *c,
                        format!("type constructor `{k}` takes {n} arguments, found {}", args.len()),
                    )),
                    Some(_) => {
                        let args = args.iter().map(|a| self.ty(a, env)).collect::<R<Vec<_>>>()?;
                        Ok(Type::App(k.clone(), args))
                    }
                }
            }
        }
    }

    /// Looks up `name`, declaring it implicitly over `$i` when missing.
    fn symbol(&mut self, name: &str, nargs: usize, pred: bool, l: usize, c: usize) -> R<SymDecl> {
        self.check_name(name, l, c)?;
        if let Some(d) = self.sig.sym(name) {
            if d.is_fun() == pred {
                let what = if pred { "function" } else { "predicate" };
                return Err(ParseError::syntax(l, c, format!("`{name}` is a {what}, used the other way")));
            }
            if !self.typed && d.arity() != nargs {
                return Err(ParseError::syntax(
                    l,
                    c,
                    format!("arity mismatch: `{name}` used with {nargs} arguments and with {}", d.arity()),
                ));
            }
            return Ok(d.clone());
        }
        if self.typed {
            self.sig.type_ctors.entry(IOTA.to_string()).or_insert(0);
        }
        if pred {
            self.sig.add_untyped_pred(name, nargs);
        } else {
            self.sig.add_untyped_fun(name, nargs);
        }
        Ok(self.sig.sym(name).unwrap().clone())
    }

    fn split_args(&mut self, name: &str, decl: &SymDecl, args: &[Raw], l: usize, c: usize, env: &[(String, Bind)]) -> R<(Vec<Type>, Vec<Term>)> {
        let m = decl.tyvars.len();
        if args.len() != m + decl.arity() {
            return Err(ParseError::syntax(
                l,
                c,
                format!(
                    "arity mismatch: `{name}` takes {m} type and {} term arguments, found {}",
                    decl.arity(),
                    args.len()
                ),
            ));
        }
        let tys = args[..m].iter().map(|a| self.ty(a, env)).collect::<R<Vec<_>>>()?;
        let terms = args[m..].iter().map(|a| self.term(a, env)).collect::<R<Vec<_>>>()?;
        Ok((tys, terms))
    }

    fn term(&mut self, r: &Raw, env: &[(String, Bind)]) -> R<Term> {
        match r {
            Raw::Var(v, l, c) => match lookup(env, v) {
                Some(Bind::Term(ty)) => Ok(Term::Var(Var::new(v.clone(), ty.clone(), VarKind::Universal))),
                Some(Bind::TyVar(_)) => Err(ParseError::syntax(*l, *c, format!("type variable `{v}` used as a term"))),
                None => Err(ParseError::syntax(*l, *c, format!("free variable `{v}`"))),
            },
            Raw::App(f, args, l, c) => {
                let decl = self.symbol(f, args.len(), false, *l, *c)?;
                let (tys, terms) = self.split_args(f, &decl, args, *l, *c, env)?;
                Ok(Term::app(f.clone(), tys, terms))
            }
        }
    }

    fn fm(&mut self, f: &RawFm, env: &mut Vec<(String, Bind)>) -> R<Fm> {
        Ok(match f {
            RawFm::True => Fm::True,
            RawFm::False => Fm::False,
            RawFm::Atom(Raw::Var(v, l, c)) => {
                return Err(ParseError::unsupported(*l, *c, format!("variable `{v}` used as a formula")))
            }
            RawFm::Atom(Raw::App(p, args, l, c)) => {
                let decl = self.symbol(p, args.len(), true, *l, *c)?;
                let (tys, terms) = self.split_args(p, &decl, args, *l, *c, env)?;
                Fm::Pred(p.clone(), tys, terms)
            }
            RawFm::Eq(pos, a, b) => {
                let e = Fm::Eq(self.term(a, env)?, self.term(b, env)?);
                if *pos {
                    e
                } else {
                    Fm::not(e)
                }
            }
            RawFm::Not(g) => Fm::not(self.fm(g, env)?),
            RawFm::And(gs) => Fm::And(gs.iter().map(|g| self.fm(g, env)).collect::<R<_>>()?),
            RawFm::Or(gs) => Fm::Or(gs.iter().map(|g| self.fm(g, env)).collect::<R<_>>()?),
            RawFm::Bin(op, a, b) => {
                let (a, b) = (self.fm(a, env)?, self.fm(b, env)?);
                match op {
                    Tok::Imp => Fm::imp(a, b),
                    Tok::RevImp => Fm::imp(b, a),
                    Tok::Iff => Fm::Iff(Box::new(a), Box::new(b)),
                    Tok::Xor => Fm::not(Fm::Iff(Box::new(a), Box::new(b))),
                    Tok::Nor => Fm::not(Fm::Or(vec![a, b])),
                    Tok::Nand => Fm::not(Fm::And(vec![a, b])),
                    _ => unreachable!("binary connective"),
                }
            }
            RawFm::Quant(forall, vars, body) => {
                // Consecutive type binders and term binders become separate groups.
                let mark = env.len();
                let mut groups: Vec<(bool, Vec<(String, Type)>)> = Vec::new();
                for (name, ty, l, c) in vars {
                    let is_type = ty.as_ref().is_some_and(is_ttype);
                    let bound_ty = if is_type {
                        if !self.typed {
                            return Err(ParseError::syntax(*l, *c, "type quantifier in untyped input"));
                        }
                        None
                    } else {
                        Some(match ty {
                            None => Type::iota(),
                            Some(_) if !self.typed => {
                                return Err(ParseError::syntax(*l, *c, "typed variable in untyped input"))
                            }
                            Some(e) => self.ty_expr(e, env).map_err(|e| e.at(*l, *c))?,
                        })
                    };
                    if bound_ty.as_ref() == Some(&Type::iota()) && self.typed {
                        self.sig.type_ctors.entry(IOTA.to_string()).or_insert(0);
                    }
                    match &bound_ty {
                        None => env.push((name.clone(), Bind::TyVar(name.clone()))),
                        Some(t) => env.push((name.clone(), Bind::Term(t.clone()))),
                    }
                    let entry = (name.clone(), bound_ty.clone().unwrap_or(Type::iota()));
                    match groups.last_mut() {
                        Some((t, g)) if *t == is_type => g.push(entry),
                        _ => groups.push((is_type, vec![entry])),
                    }
                }
                let mut inner = self.fm(body, env)?;
                env.truncate(mark);
                for (is_type, g) in groups.into_iter().rev() {
                    inner = match (is_type, forall) {
                        (true, true) => Fm::ForallType(g.into_iter().map(|(n, _)| n).collect(), Box::new(inner)),
                        (true, false) => Fm::ExistsType(g.into_iter().map(|(n, _)| n).collect(), Box::new(inner)),
                        (false, true) => Fm::Forall(g, Box::new(inner)),
                        (false, false) => Fm::Exists(g, Box::new(inner)),
                    };
                }
                inner
            }
        })
    }
}

fn lookup<'a>(env: &'a [(String, Bind)], name: &str) -> Option<&'a Bind> {
    env.iter().rev().find(|(n, _)| n == name).map(|(_, b)| b)
}

fn role_of(role: &str, l: usize, c: usize) -> R<Option<Role>> {
    Ok(Some(match role {
        "axiom" | "definition" | "assumption" | "lemma" | "theorem" | "corollary" | "plain" => Role::Axiom,
        "hypothesis" => Role::Hypothesis,
        "negated_conjecture" => Role::NegatedConjecture,
        "conjecture" => return Ok(None),
        other => return Err(ParseError::unsupported(l, c, format!("role `{other}`"))),
    }))
}

fn collect(text: &str, opts: &ParseOptions, depth: usize, out: &mut Vec<Stmt>) -> R<()> {
    let mut p = P { toks: lex(text)?, pos: 0 };
    for st in p.statements()? {
        match st {
            Stmt::Include(file, l, c) => {
                let Some(dir) = &opts.include_dir else {
                    return Err(ParseError::unsupported(l, c, "include directives without an include path"));
                };
                if depth > 8 {
                    return Err(ParseError::syntax(l, c, "includes nested too deeply"));
                }
                let path = dir.join(&file);
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| ParseError::syntax(l, c, format!("cannot read `{}`: {e}", path.display())))?;
                collect(&text, opts, depth + 1, out)?;
            }
            st => out.push(st),
        }
    }
    Ok(())
}

pub fn parse_with(text: &str, opts: &ParseOptions) -> R<Parsed> {
    let mut stmts = Vec::new();
    collect(text, opts, 0, &mut stmts)?;
    let any_tff = stmts.iter().any(|s| matches!(s, Stmt::Type { .. } | Stmt::Formula { lang: Lang::Tff, .. }));
    let any_fof = stmts.iter().any(|s| matches!(s, Stmt::Formula { lang: Lang::Fof, .. }));
    let typed = match opts.dialect {
        Dialect::Fof => false,
        Dialect::Tff0 | Dialect::Tff1 => true,
        Dialect::Auto => any_tff || !any_fof,
    };
    if typed && any_fof && any_tff {
        return Err(ParseError::syntax(1, 1, "mixing `fof` and `tff` statements is not supported"));
    }
    if !typed && any_tff {
        return Err(ParseError::syntax(1, 1, "typed statements in FOF input"));
    }
    let mut rs = Resolver { sig: Signature::new(if typed { Level::Poly } else { Level::Untyped }), typed, opts };

    // Type constructors first, so symbol declarations may refer to later ones.
    let mut symbol_decls = Vec::new();
    for s in &stmts {
        if let Stmt::Type { name, decl, line, col } = s {
            if !rs.declare_type_ctor(name, decl, *line, *col)? {
                symbol_decls.push((name, decl, *line, *col));
            }
        }
    }
    for (name, decl, l, c) in symbol_decls {
        rs.declare_symbol(name, decl, l, c).map_err(|e| e.at(l, c))?;
    }

    let mut formulas: Vec<Named> = Vec::new();
    let mut annotated = Vec::new();
    let mut conjectures: Vec<(String, Fm, usize)> = Vec::new();
    for s in &stmts {
        let Stmt::Formula { name, role, fm, line, col, .. } = s else { continue };
        let f = rs.fm(fm, &mut Vec::new())?;
        annotated.push(AnnotatedFormula { name: name.clone(), role: role.clone(), line: *line });
        match role_of(role, *line, *col)? {
            Some(r) => {
                let nf = normalize(&f).map_err(|e| ParseError::unsupported(*line, *col, e.to_string()))?;
                formulas.push(Named { name: name.clone(), role: r, formula: nf, origin: Origin::Input });
            }
            None => conjectures.push((name.clone(), f, formulas.len())),
        }
    }
    if let Some((name, _, at)) = conjectures.first().cloned() {
        let goal = if conjectures.len() == 1 {
            conjectures.pop().unwrap().1
        } else {
            Fm::And(conjectures.into_iter().map(|(_, f, _)| f).collect())
        };
        let nf = normalize(&Fm::not(goal)).map_err(|e| ParseError::unsupported(1, 1, e.to_string()))?;
        formulas.insert(at, Named { name, role: Role::NegatedConjecture, formula: nf, origin: Origin::Input });
    }

    let mut sig = rs.sig;
    if typed {
        sig.ensure_iota();
        let poly = sig.type_ctors.values().any(|&n| n > 0)
            || sig.symbols().any(|(_, d)| !d.tyvars.is_empty())
            || formulas.iter().any(|n| matches!(n.formula, Formula::ForallType(..)));
        if poly && opts.dialect == Dialect::Tff0 {
            return Err(ParseError::syntax(1, 1, "polymorphic declarations in TFF0 input"));
        }
        sig.level = if poly { Level::Poly } else { Level::Mono };
    }
    let problem = Problem { sig, formulas };
    let mut errors: Vec<String> = check_signature(&problem.sig).into_iter().map(|e| e.to_string()).collect();
    errors.extend(check_well_typed(&problem).into_iter().map(|e| e.to_string()));
    if !errors.is_empty() {
        return Err(ParseError::type_error(errors.join("; ")));
    }
    Ok(Parsed { problem, annotated })
}

/// Parses a type in TPTP syntax, such as `list(A)`; capitalized names are type variables.
pub fn parse_type(text: &str) -> R<Type> {
    let mut p = P { toks: lex(text)?, pos: 0 };
    let raw = p.term()?;
    if *p.peek() != Tok::Eof {
        return p.err("trailing input after type");
    }
    fn conv(r: &Raw) -> Type {
        match r {
            Raw::Var(v, _, _) => Type::Var(v.clone()),
            Raw::App(k, args, _, _) => Type::App(k.clone(), args.iter().map(conv).collect()),
        }
    }
    Ok(conv(&raw))
}
