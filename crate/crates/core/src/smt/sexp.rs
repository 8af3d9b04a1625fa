//! S-expressions as printed by SMT-LIB solvers.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sexp {
    /// Symbol, keyword or numeral; `|quoted|` symbols are stored unquoted.
    Atom(String),
    Str(String),
    List(Vec<Sexp>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("s-expression error at byte {offset}: {message}")]
pub struct SexpError {
    pub offset: usize,
    pub message: String,
}

impl Sexp {
    pub fn atom(&self) -> Option<&str> {
        match self {
            Sexp::Atom(a) => Some(a),
            _ => None,
        }
    }

    pub fn list(&self) -> Option<&[Sexp]> {
        match self {
            Sexp::List(xs) => Some(xs),
            _ => None,
        }
    }

    /// True for a list whose head is the atom `head`.
    pub fn is_app(&self, head: &str) -> bool {
        matches!(self.list(), Some([Sexp::Atom(h), ..]) if h == head)
    }
}

impl fmt::Display for Sexp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sexp::Atom(a) if needs_quotes(a) => write!(f, "|{a}|"),
            Sexp::Atom(a) => write!(f, "{a}"),
            Sexp::Str(s) => write!(f, "\"{}\"", s.replace('"', "\"\"")),
            Sexp::List(xs) => {
                write!(f, "(")?;
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
        }
    }
}

fn needs_quotes(a: &str) -> bool {
    a.is_empty() || a.chars().any(|c| c.is_whitespace() || "()|;\"".contains(c))
}

/// Parses every s-expression in `src`.
pub fn parse_all(src: &str) -> Result<Vec<Sexp>, SexpError> {
    let mut p = Parser { src: src.as_bytes(), pos: 0 };
    let mut out = Vec::new();
    loop {
        p.skip_ws();
        if p.pos >= p.src.len() {
            return Ok(out);
        }
        out.push(p.sexp(0)?);
    }
}

/// Parses exactly one s-expression.
pub fn parse(src: &str) -> Result<Sexp, SexpError> {
    let mut all = parse_all(src)?;
    match all.len() {
        1 => Ok(all.pop().unwrap()),
        n => Err(SexpError { offset: 0, message: format!("expected one s-expression, found {n}") }),
    }
}

/// Nesting bound; deeper input is rejected rather than risking the stack.
const MAX_DEPTH: usize = 512;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, SexpError> {
        Err(SexpError { offset: self.pos, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() {
            match self.src[self.pos] {
                b';' => {
                    while self.pos < self.src.len() && self.src[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                c if c.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    fn text(&self, from: usize) -> Result<String, SexpError> {
        std::str::from_utf8(&self.src[from..self.pos])
            .map(str::to_string)
            .map_err(|_| SexpError { offset: from, message: "invalid UTF-8".into() })
    }

    fn sexp(&mut self, depth: usize) -> Result<Sexp, SexpError> {
        if depth > MAX_DEPTH {
            return self.err("nesting too deep");
        }
        self.skip_ws();
        let Some(&c) = self.src.get(self.pos) else { return self.err("unexpected end of input") };
        match c {
            b'(' => {
                self.pos += 1;
                let mut xs = Vec::new();
                loop {
                    self.skip_ws();
                    match self.src.get(self.pos) {
                        None => return self.err("unclosed `(`"),
                        Some(b')') => {
                            self.pos += 1;
                            return Ok(Sexp::List(xs));
                        }
                        Some(_) => xs.push(self.sexp(depth + 1)?),
                    }
                }
            }
            b')' => self.err("unexpected `)`"),
            b'|' => {
                self.pos += 1;
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos] != b'|' {
                    self.pos += 1;
                }
                if self.pos >= self.src.len() {
                    return self.err("unclosed `|`");
                }
                let s = self.text(start)?;
                self.pos += 1;
                Ok(Sexp::Atom(s))
            }
            b'"' => {
                self.pos += 1;
                let mut bytes = Vec::new();
                loop {
                    match self.src.get(self.pos) {
                        None => return self.err("unclosed string"),
                        Some(b'"') if self.src.get(self.pos + 1) == Some(&b'"') => {
                            bytes.push(b'"');
                            self.pos += 2;
                        }
                        Some(b'"') => {
                            self.pos += 1;
                            break;
                        }
                        Some(&b) => {
                            bytes.push(b);
                            self.pos += 1;
                        }
                    }
                }
                String::from_utf8(bytes).map(Sexp::Str).or_else(|_| self.err("invalid UTF-8 in string"))
            }
            _ => {
                let start = self.pos;
                while self.pos < self.src.len() {
                    let c = self.src[self.pos];
                    if c.is_ascii_whitespace() || b"()|\";".contains(&c) {
                        break;
                    }
                    self.pos += 1;
                }
                Ok(Sexp::Atom(self.text(start)?))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_models() {
        let src = "sat\n(\n  (define-fun |x.0| () Real\n    (/ 1.0 3.0))\n  ; comment\n  (define-fun b () Bool true)\n)";
        let all = parse_all(src).unwrap();
        assert_eq!(all.len(), 2);
        assert_eq!(all[0], Sexp::Atom("sat".into()));
        let defs = all[1].list().unwrap();
        assert!(defs[0].is_app("define-fun"));
        assert_eq!(defs[0].list().unwrap()[1], Sexp::Atom("x.0".into()));
    }

    #[test]
    fn strings_and_errors() {
        assert_eq!(parse(r#"(error "line 3: ""x"" unknown")"#).unwrap().list().unwrap()[1], Sexp::Str("line 3: \"x\" unknown".into()));
        assert!(parse("(a b").is_err());
        assert!(parse(")").is_err());
        assert!(parse("|abc").is_err());
        assert!(parse("a b").is_err());
    }

    #[test]
    fn display_round_trips() {
        let s = parse("(f |a b| \"q\"\"\" (x 1.5))").unwrap();
        assert_eq!(parse(&s.to_string()).unwrap(), s);
    }

    #[test]
    fn depth_is_bounded() {
        let deep = "(".repeat(10_000);
        assert!(parse(&deep).is_err());
    }
}
