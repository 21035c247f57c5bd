use crate::span::{Diagnostic, SourceSpan};

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Ident(String),
    Real(f64),
    Int(u64),
    Str(String),
    Sym(&'static str),
    Eof,
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

const SYMBOLS: &[&str] = &[
    "->", "==", "!=", "<=", ">=", "&&", "||", "=>", "(", ")", "[", "]", "{", "}", ";", ",", "+", "-", "*", "/", "^",
    "<", ">", "=", ".", "!",
];

/// Tokenizer shared by the QASM parser and the rule-script parser. `//` line
/// comments and whitespace are skipped.
pub fn tokenize(src: &str, file: &str) -> Result<Vec<Token>, Diagnostic> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut k, mut line, mut col) = (0usize, 1usize, 1usize);
    let span = |line, col| SourceSpan::new(file, line, col);
    while k < chars.len() {
        let c = chars[k];
        if c == '\n' {
            k += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            k += 1;
            col += 1;
            continue;
        }
        if c == '/' && chars.get(k + 1) == Some(&'/') {
            while k < chars.len() && chars[k] != '\n' {
                k += 1;
            }
            continue;
        }
        let start = (line, col);
        if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while k < chars.len() && (chars[k].is_ascii_alphanumeric() || chars[k] == '_') {
                s.push(chars[k]);
                k += 1;
                col += 1;
            }
            out.push(Token {
                tok: Tok::Ident(s),
                span: span(start.0, start.1),
            });
            continue;
        }
        if c.is_ascii_digit() || (c == '.' && chars.get(k + 1).is_some_and(|d| d.is_ascii_digit())) {
            let mut s = String::new();
            let mut real = false;
            while k < chars.len() && (chars[k].is_ascii_digit() || chars[k] == '.') {
                real |= chars[k] == '.';
                s.push(chars[k]);
                k += 1;
                col += 1;
            }
            if k < chars.len() && (chars[k] == 'e' || chars[k] == 'E') {
                let mut j = k + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    real = true;
                    while k < j {
                        s.push(chars[k]);
                        k += 1;
                        col += 1;
                    }
                    while k < chars.len() && chars[k].is_ascii_digit() {
                        s.push(chars[k]);
                        k += 1;
                        col += 1;
                    }
                }
            }
            let sp = span(start.0, start.1);
            let tok = if real {
                Tok::Real(
                    s.parse()
                        .map_err(|_| Diagnostic::new(sp.clone(), format!("malformed number '{s}'")))?,
                )
            } else {
                Tok::Int(
                    s.parse()
                        .map_err(|_| Diagnostic::new(sp.clone(), format!("integer '{s}' too large")))?,
                )
            };
            out.push(Token { tok, span: sp });
            continue;
        }
        if c == '"' {
            let mut s = String::new();
            k += 1;
            col += 1;
            loop {
                match chars.get(k) {
                    None | Some('\n') => {
                        return Err(Diagnostic::new(span(start.0, start.1), "unterminated string literal"))
                    }
                    Some('"') => {
                        k += 1;
                        col += 1;
                        break;
                    }
                    Some(ch) => {
                        s.push(*ch);
                        k += 1;
                        col += 1;
                    }
                }
            }
            out.push(Token {
                tok: Tok::Str(s),
                span: span(start.0, start.1),
            });
            continue;
        }
        let rest: String = chars[k..chars.len().min(k + 2)].iter().collect();
        match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
            Some(sym) => {
                k += sym.len();
                col += sym.len();
                out.push(Token {
                    tok: Tok::Sym(sym),
                    span: span(start.0, start.1),
                });
            }
            None => return Err(Diagnostic::new(span(line, col), format!("unexpected character '{c}'"))),
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        span: span(line, col),
    });
    Ok(out)
}

/// Cursor over a token stream with the usual expect/peek helpers.
pub struct Cursor {
    toks: Vec<Token>,
    pos: usize,
}

impl Cursor {
    pub fn new(toks: Vec<Token>) -> Self {
        Self { toks, pos: 0 }
    }

    pub fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    pub fn peek_at(&self, ahead: usize) -> &Tok {
        &self.toks[(self.pos + ahead).min(self.toks.len() - 1)].tok
    }

    pub fn span(&self) -> SourceSpan {
        self.toks[self.pos].span.clone()
    }

    pub fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub fn at_eof(&self) -> bool {
        matches!(self.peek(), Tok::Eof)
    }

    pub fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(x) if *x == s)
    }

    pub fn is_ident(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Ident(x) if x == s)
    }

    pub fn eat_sym(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn error(&self, msg: impl Into<String>) -> Diagnostic {
        Diagnostic::new(self.span(), msg)
    }

    fn describe(tok: &Tok) -> String {
        match tok {
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Real(x) => format!("'{x}'"),
            Tok::Int(x) => format!("'{x}'"),
            Tok::Str(s) => format!("\"{s}\""),
            Tok::Sym(s) => format!("'{s}'"),
            Tok::Eof => "end of input".into(),
        }
    }

    pub fn unexpected(&self, wanted: &str) -> Diagnostic {
        self.error(format!("expected {wanted}, found {}", Self::describe(self.peek())))
    }

    pub fn expect_sym(&mut self, s: &str) -> Result<SourceSpan, Diagnostic> {
        if self.is_sym(s) {
            Ok(self.bump().span)
        } else {
            Err(self.unexpected(&format!("'{s}'")))
        }
    }

    pub fn expect_ident(&mut self) -> Result<(String, SourceSpan), Diagnostic> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                let t = self.bump();
                Ok((s, t.span))
            }
            _ => Err(self.unexpected("identifier")),
        }
    }

    pub fn expect_int(&mut self) -> Result<(u64, SourceSpan), Diagnostic> {
        match self.peek().clone() {
            Tok::Int(v) => {
                let t = self.bump();
                Ok((v, t.span))
            }
            _ => Err(self.unexpected("integer")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positions_and_kinds() {
        let toks = tokenize("qreg q[2];\n  h q[0]; // c\nx 1.5e-3", "t.qasm").unwrap();
        assert_eq!(toks[0].tok, Tok::Ident("qreg".into()));
        assert_eq!(toks[3].tok, Tok::Int(2));
        let h = toks.iter().find(|t| t.tok == Tok::Ident("h".into())).unwrap();
        assert_eq!((h.span.line, h.span.column), (2, 3));
        assert!(toks.iter().any(|t| t.tok == Tok::Real(1.5e-3)));
        assert!(matches!(toks.last().unwrap().tok, Tok::Eof));
    }

    #[test]
    fn two_char_symbols() {
        let toks = tokenize("a -> b == c => d", "t").unwrap();
        let syms: Vec<_> = toks
            .iter()
            .filter_map(|t| if let Tok::Sym(s) = t.tok { Some(s) } else { None })
            .collect();
        assert_eq!(syms, vec!["->", "==", "=>"]);
    }

    #[test]
    fn stray_character() {
        let err = tokenize("h q[0];\n  $", "f.qasm").unwrap_err();
        assert_eq!(err.to_string(), "f.qasm:2:3: unexpected character '$'");
    }
}
