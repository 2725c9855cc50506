use szm_core::Pos;

use crate::parser::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(u64),
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBrack,
    RBrack,
    Comma,
    Semi,
    Colon,
    Dot,
    Eq,
    Bar,
    Arrow,
    Plus,
    Times,
    Underscore,
    Lambda,
    BigLambda,
    Forall,
    Exists,
    Mu,
    Nu,
    Infinity,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{}`", s),
            Tok::Int(n) => format!("`{}`", n),
            Tok::Eof => "end of input".into(),
            t => format!("`{}`", symbol(t)),
        }
    }
}

fn symbol(t: &Tok) -> &'static str {
    match t {
        Tok::LParen => "(",
        Tok::RParen => ")",
        Tok::LBrace => "{",
        Tok::RBrace => "}",
        Tok::LBrack => "[",
        Tok::RBrack => "]",
        Tok::Comma => ",",
        Tok::Semi => ";",
        Tok::Colon => ":",
        Tok::Dot => ".",
        Tok::Eq => "=",
        Tok::Bar => "|",
        Tok::Arrow => "→",
        Tok::Plus => "+",
        Tok::Times => "×",
        Tok::Underscore => "_",
        Tok::Lambda => "λ",
        Tok::BigLambda => "Λ",
        Tok::Forall => "∀",
        Tok::Exists => "∃",
        Tok::Mu => "μ",
        Tok::Nu => "ν",
        Tok::Infinity => "∞",
        _ => "?",
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\'' || c == '#'
}

/// Splits the source into tokens. Keywords stay identifiers except for the
/// binders that have a Unicode spelling.
pub fn lex(file: &str, src: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let file: szm_core::Name = file.into();
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1u32, 1u32);
    let pos = |line, col| Pos {
        file: file.clone(),
        line,
        col,
    };
    while i < chars.len() {
        let c = chars[i];
        let here = pos(line, col);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let push = |t: Tok, n: usize, out: &mut Vec<(Tok, Pos)>| {
            out.push((t, here.clone()));
            n
        };
        let sized = c == '_' && matches!(out.last(), Some((Tok::Mu | Tok::Nu, _)));
        if is_ident_start(c)
            && !sized
            && !(c == '_' && !chars.get(i + 1).is_some_and(|&d| is_ident_char(d)))
        {
            let start = i;
            while i < chars.len() && is_ident_char(chars[i]) {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            let n = word.chars().count() as u32;
            // `mu_a` and `nu_a` carry their size in the same word.
            let split = ["mu_", "nu_"]
                .iter()
                .find(|p| word.starts_with(**p) && word.len() > 3);
            match (word.as_str(), split) {
                (_, Some(p)) => {
                    out.push((
                        if p.starts_with('m') { Tok::Mu } else { Tok::Nu },
                        here.clone(),
                    ));
                    out.push((Tok::Underscore, pos(line, col + 2)));
                    out.push((Tok::Ident(word[3..].to_string()), pos(line, col + 3)));
                }
                ("mu", _) => out.push((Tok::Mu, here)),
                ("nu", _) => out.push((Tok::Nu, here)),
                ("forall", _) => out.push((Tok::Forall, here)),
                ("exists", _) => out.push((Tok::Exists, here)),
                ("fun", _) => out.push((Tok::Lambda, here)),
                ("inf", _) => out.push((Tok::Infinity, here)),
                _ => out.push((Tok::Ident(word), here)),
            }
            col += n;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            let n = s
                .parse()
                .map_err(|_| ParseError::syntax(here.clone(), "integer literal too large"))?;
            out.push((Tok::Int(n), here));
            col += (i - start) as u32;
            continue;
        }
        let next = chars.get(i + 1).copied();
        let len = match c {
            '(' => push(Tok::LParen, 1, &mut out),
            ')' => push(Tok::RParen, 1, &mut out),
            '{' => push(Tok::LBrace, 1, &mut out),
            '}' => push(Tok::RBrace, 1, &mut out),
            '[' => push(Tok::LBrack, 1, &mut out),
            ']' => push(Tok::RBrack, 1, &mut out),
            ',' => push(Tok::Comma, 1, &mut out),
            ';' => push(Tok::Semi, 1, &mut out),
            ':' => push(Tok::Colon, 1, &mut out),
            '.' => push(Tok::Dot, 1, &mut out),
            '=' => push(Tok::Eq, 1, &mut out),
            '|' => push(Tok::Bar, 1, &mut out),
            '+' => push(Tok::Plus, 1, &mut out),
            '*' | '×' => push(Tok::Times, 1, &mut out),
            '_' => push(Tok::Underscore, 1, &mut out),
            '-' if next == Some('>') => push(Tok::Arrow, 2, &mut out),
            '/' if next == Some('\\') => push(Tok::BigLambda, 2, &mut out),
            '\\' => push(Tok::Lambda, 1, &mut out),
            '→' => push(Tok::Arrow, 1, &mut out),
            'λ' => push(Tok::Lambda, 1, &mut out),
            'Λ' => push(Tok::BigLambda, 1, &mut out),
            '∀' => push(Tok::Forall, 1, &mut out),
            '∃' => push(Tok::Exists, 1, &mut out),
            'μ' => push(Tok::Mu, 1, &mut out),
            'ν' => push(Tok::Nu, 1, &mut out),
            '∞' => push(Tok::Infinity, 1, &mut out),
            _ => {
                return Err(ParseError::syntax(
                    here,
                    format!("unexpected character `{}`", c),
                ))
            }
        };
        i += len;
        col += len as u32;
    }
    out.push((Tok::Eof, pos(line, col)));
    Ok(out)
}
