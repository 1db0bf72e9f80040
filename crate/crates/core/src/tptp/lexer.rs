use super::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Colon,
    Dot,
    Star,
    Gt,
    Bang,
    Question,
    BangGt,
    Tilde,
    And,
    Or,
    Imp,
    RevImp,
    Iff,
    Xor,
    Nor,
    Nand,
    Eq,
    Neq,
    Lower(String),
    Upper(String),
    Dollar(String),
    Quoted(String),
    Distinct(String),
    Number(String),
    /// Anything else recognized only to be rejected with a clear message.
    Other(String),
    Eof,
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

pub fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let bump = |i: &mut usize, line: &mut usize, col: &mut usize, c: char| {
        *i += 1;
        if c == '\n' {
            *line += 1;
            *col = 1;
        } else {
            *col += 1;
        }
    };
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            bump(&mut i, &mut line, &mut col, c);
            continue;
        }
        if c == '%' {
            while i < chars.len() && chars[i] != '\n' {
                let ch = chars[i];
                bump(&mut i, &mut line, &mut col, ch);
            }
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'*') {
            let (l0, c0) = (line, col);
            bump(&mut i, &mut line, &mut col, '/');
            bump(&mut i, &mut line, &mut col, '*');
            loop {
                if i >= chars.len() {
                    return Err(ParseError::syntax(l0, c0, "unterminated comment"));
                }
                if chars[i] == '*' && chars.get(i + 1) == Some(&'/') {
                    bump(&mut i, &mut line, &mut col, '*');
                    bump(&mut i, &mut line, &mut col, '/');
                    break;
                }
                let ch = chars[i];
                bump(&mut i, &mut line, &mut col, ch);
            }
            continue;
        }
        let (l0, c0) = (line, col);
        let rest: String = chars[i..chars.len().min(i + 3)].iter().collect();
        let sym = [
            ("<=>", Tok::Iff),
            ("<~>", Tok::Xor),
            ("=>", Tok::Imp),
            ("<=", Tok::RevImp),
            ("~|", Tok::Nor),
            ("~&", Tok::Nand),
            ("!=", Tok::Neq),
            ("!>", Tok::BangGt),
            ("?*", Tok::Other("?*".into())),
            ("!!", Tok::Other("!!".into())),
            ("??", Tok::Other("??".into())),
            ("-->", Tok::Other("-->".into())),
            ("(", Tok::LParen),
            (")", Tok::RParen),
            ("[", Tok::LBrack),
            ("]", Tok::RBrack),
            (",", Tok::Comma),
            (":", Tok::Colon),
            (".", Tok::Dot),
            ("*", Tok::Star),
            (">", Tok::Gt),
            ("!", Tok::Bang),
            ("?", Tok::Question),
            ("~", Tok::Tilde),
            ("&", Tok::And),
            ("|", Tok::Or),
            ("=", Tok::Eq),
            ("@", Tok::Other("@".into())),
            ("^", Tok::Other("^".into())),
            ("+", Tok::Other("+".into())),
        ]
        .into_iter()
        .find(|(s, _)| rest.starts_with(s));
        if let Some((s, tok)) = sym {
            for ch in s.chars() {
                bump(&mut i, &mut line, &mut col, ch);
            }
            out.push(Token { tok, line: l0, col: c0 });
            continue;
        }
        let word = |i: &mut usize, line: &mut usize, col: &mut usize| {
            let mut s = String::new();
            while *i < chars.len() && (chars[*i].is_ascii_alphanumeric() || chars[*i] == '_') {
                s.push(chars[*i]);
                bump(i, line, col, chars[*i]);
            }
            s
        };
        let tok = if c.is_ascii_lowercase() {
            Tok::Lower(word(&mut i, &mut line, &mut col))
        } else if c.is_ascii_uppercase() {
            Tok::Upper(word(&mut i, &mut line, &mut col))
        } else if c.is_ascii_digit() || (c == '-' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let mut s = String::new();
            s.push(c);
            bump(&mut i, &mut line, &mut col, c);
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || matches!(chars[i], '.' | '/' | '_')) {
                // A trailing `.` ends the statement rather than continuing a real.
                if chars[i] == '.' && !chars.get(i + 1).is_some_and(|d| d.is_ascii_digit()) {
                    break;
                }
                s.push(chars[i]);
                let ch = chars[i];
                bump(&mut i, &mut line, &mut col, ch);
            }
            Tok::Number(s)
        } else if c == '$' {
            let mut s = String::from("$");
            bump(&mut i, &mut line, &mut col, c);
            if chars.get(i) == Some(&'$') {
                s.push('$');
                bump(&mut i, &mut line, &mut col, '$');
            }
            let w = word(&mut i, &mut line, &mut col);
            if w.is_empty() {
                return Err(ParseError::syntax(l0, c0, "expected a word after `$`"));
            }
            s.push_str(&w);
            Tok::Dollar(s)
        } else if c == '\'' || c == '"' {
            let mut s = String::new();
            s.push(c);
            bump(&mut i, &mut line, &mut col, c);
            loop {
                let Some(&d) = chars.get(i) else {
                    return Err(ParseError::syntax(l0, c0, "unterminated quoted string"));
                };
                s.push(d);
                bump(&mut i, &mut line, &mut col, d);
                if d == '\\' {
                    if let Some(&e) = chars.get(i) {
                        s.push(e);
                        bump(&mut i, &mut line, &mut col, e);
                    }
                } else if d == c {
                    break;
                }
            }
            if c == '\'' {
                Tok::Quoted(s)
            } else {
                Tok::Distinct(s)
            }
        } else {
            return Err(ParseError::syntax(l0, c0, format!("unexpected character `{c}`")));
        };
        out.push(Token { tok, line: l0, col: c0 });
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}
