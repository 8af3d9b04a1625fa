use super::ParseError;

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    /// Magnitude of an integer literal; the sign is applied by the parser.
    Int(u64),
    Float(f64),
    Str(String),
    Ident(String),
    Kw(Kw),
    Sym(&'static str),
    Eof,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kw {
    Let,
    Rec,
    In,
    Fby,
    If,
    Then,
    Else,
    Models,
    RobotGet,
    RobotStr,
    Always,
    Next,
    And,
    Or,
    Not,
    True,
    False,
    Int,
    Float,
    Bool,
    Main,
    Delay,
    Nil,
}

const KEYWORDS: &[(&str, Kw)] = &[
    ("let", Kw::Let),
    ("rec", Kw::Rec),
    ("in", Kw::In),
    ("fby", Kw::Fby),
    ("if", Kw::If),
    ("then", Kw::Then),
    ("else", Kw::Else),
    ("models", Kw::Models),
    ("robot_get", Kw::RobotGet),
    ("robot_str", Kw::RobotStr),
    ("always", Kw::Always),
    ("next", Kw::Next),
    ("and", Kw::And),
    ("or", Kw::Or),
    ("not", Kw::Not),
    ("true", Kw::True),
    ("false", Kw::False),
    ("int", Kw::Int),
    ("float", Kw::Float),
    ("bool", Kw::Bool),
    ("main", Kw::Main),
    ("delay", Kw::Delay),
    ("nil", Kw::Nil),
];

pub fn keyword_text(kw: Kw) -> &'static str {
    KEYWORDS.iter().find(|(_, k)| *k == kw).map(|(s, _)| *s).unwrap_or("?")
}

pub fn is_keyword(s: &str) -> bool {
    KEYWORDS.iter().any(|(k, _)| *k == s)
}

// Longest first so that `<=` wins over `<`.
const SYMBOLS: &[&str] = &[
    ";;", "+.", "-.", "*.", "/.", "<>", "<=", ">=", "=>", "(", ")", "{", "}", ",", ":", "|", "=", "<",
    ">", "+", "-", "*", "/",
];

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
    /// True when whitespace or a comment precedes the token.
    pub spaced: bool,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Int(i) => i.to_string(),
            Tok::Float(f) => format!("{f:?}"),
            Tok::Str(s) => format!("{s:?}"),
            Tok::Ident(s) => s.clone(),
            Tok::Kw(k) => keyword_text(*k).to_string(),
            Tok::Sym(s) => s.to_string(),
            Tok::Eof => "end of input".to_string(),
        }
    }
}

pub fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut toks = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let mut spaced = true;

    let advance = |i: &mut usize, line: &mut usize, col: &mut usize, n: usize| {
        for _ in 0..n {
            if chars[*i] == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
            *i += 1;
        }
    };

    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col, 1);
            spaced = true;
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'-') {
            while i < chars.len() && chars[i] != '\n' {
                advance(&mut i, &mut line, &mut col, 1);
            }
            spaced = true;
            continue;
        }
        if c == '(' && chars.get(i + 1) == Some(&'*') {
            let (sl, sc) = (line, col);
            let mut depth = 0usize;
            loop {
                if i >= chars.len() {
                    return Err(ParseError::new(sl, sc, "(*", "unterminated comment"));
                }
                if chars[i] == '(' && chars.get(i + 1) == Some(&'*') {
                    depth += 1;
                    advance(&mut i, &mut line, &mut col, 2);
                } else if chars[i] == '*' && chars.get(i + 1) == Some(&')') {
                    depth -= 1;
                    advance(&mut i, &mut line, &mut col, 2);
                    if depth == 0 {
                        break;
                    }
                } else {
                    advance(&mut i, &mut line, &mut col, 1);
                }
            }
            spaced = true;
            continue;
        }

        let (tl, tc) = (line, col);
        let tok = if c.is_ascii_digit() {
            let start = i;
            let mut j = i;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            let mut is_float = false;
            // `1.` is a float, but `1..` is not valid anyway; `.` followed by
            // an operator letter (as in `+.`) never follows a digit.
            if j < chars.len() && chars[j] == '.' {
                is_float = true;
                j += 1;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
            }
            if j < chars.len() && (chars[j] == 'e' || chars[j] == 'E') {
                let mut k = j + 1;
                if k < chars.len() && (chars[k] == '+' || chars[k] == '-') {
                    k += 1;
                }
                if k < chars.len() && chars[k].is_ascii_digit() {
                    while k < chars.len() && chars[k].is_ascii_digit() {
                        k += 1;
                    }
                    is_float = true;
                    j = k;
                }
            }
            let text: String = chars[start..j].iter().collect();
            advance(&mut i, &mut line, &mut col, j - start);
            if is_float {
                let f: f64 = text
                    .parse()
                    .map_err(|_| ParseError::new(tl, tc, &text, "malformed float literal"))?;
                if !f.is_finite() {
                    return Err(ParseError::new(tl, tc, &text, "float literal out of range"));
                }
                Tok::Float(f)
            } else {
                let n: u64 = text
                    .parse()
                    .map_err(|_| ParseError::new(tl, tc, &text, "integer literal out of range"))?;
                Tok::Int(n)
            }
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            let mut j = i;
            while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                j += 1;
            }
            let text: String = chars[start..j].iter().collect();
            advance(&mut i, &mut line, &mut col, j - start);
            match KEYWORDS.iter().find(|(k, _)| *k == text) {
                Some((_, kw)) => Tok::Kw(*kw),
                None => Tok::Ident(text),
            }
        } else if c == '"' {
            advance(&mut i, &mut line, &mut col, 1);
            let mut s = String::new();
            loop {
                match chars.get(i) {
                    None | Some('\n') => {
                        return Err(ParseError::new(tl, tc, "\"", "unterminated string literal"))
                    }
                    Some('"') => {
                        advance(&mut i, &mut line, &mut col, 1);
                        break;
                    }
                    Some('\\') => {
                        let esc = match chars.get(i + 1) {
                            Some('"') => '"',
                            Some('\\') => '\\',
                            Some('n') => '\n',
                            Some('t') => '\t',
                            other => {
                                let found = other.map(|c| format!("\\{c}")).unwrap_or_default();
                                return Err(ParseError::new(line, col, &found, "unknown escape"));
                            }
                        };
                        s.push(esc);
                        advance(&mut i, &mut line, &mut col, 2);
                    }
                    Some(&ch) => {
                        s.push(ch);
                        advance(&mut i, &mut line, &mut col, 1);
                    }
                }
            }
            Tok::Str(s)
        } else {
            let rest: String = chars[i..(i + 2).min(chars.len())].iter().collect();
            match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
                Some(s) => {
                    advance(&mut i, &mut line, &mut col, s.len());
                    Tok::Sym(s)
                }
                None => {
                    return Err(ParseError::new(tl, tc, &c.to_string(), "unexpected character"))
                }
            }
        };
        toks.push(Token { tok, line: tl, col: tc, spaced });
        spaced = false;
    }
    toks.push(Token { tok: Tok::Eof, line, col, spaced: true });
    Ok(toks)
}
