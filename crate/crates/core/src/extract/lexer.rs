use super::ast::{Pos, Span};
use super::ParseError;

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Ident(String),
    Int,
    Float,
    Str,
    Char,
    /// Punctuation or operator. `>` is always emitted alone so nested generic
    /// closers lex cleanly; the expression parser re-joins shift operators.
    Op(&'static str),
    Eof,
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

impl Token {
    pub fn is_op(&self, op: &str) -> bool {
        matches!(&self.tok, Tok::Op(o) if *o == op)
    }

    pub fn is_ident(&self, s: &str) -> bool {
        matches!(&self.tok, Tok::Ident(i) if i == s)
    }

    pub fn ident(&self) -> Option<&str> {
        match &self.tok {
            Tok::Ident(i) => Some(i),
            _ => None,
        }
    }
}

// longest first
const OPS: &[&str] = &[
    "<<=", "...", "->", "::", "++", "--", "&&", "||", "==", "!=", "<=", "+=", "-=", "*=", "/=",
    "&=", "|=", "^=", "%=", "<<", "(", ")", "{", "}", "[", "]", ";", ",", ".", "@", "=", "<", ">",
    "!", "~", "?", ":", "+", "-", "*", "/", "&", "|", "^", "%",
];

struct Cursor<'a> {
    chars: Vec<char>,
    i: usize,
    line: u32,
    col: u32,
    _src: &'a str,
}

impl Cursor<'_> {
    fn peek(&self, k: usize) -> Option<char> {
        self.chars.get(self.i + k).copied()
    }

    fn pos(&self) -> Pos {
        Pos {
            line: self.line,
            col: self.col,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.get(self.i).copied()?;
        self.i += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 0;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn starts_with(&self, s: &str) -> bool {
        s.chars().enumerate().all(|(k, c)| self.peek(k) == Some(c))
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_' || c == '$'
}

fn is_ident_part(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '$'
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut cur = Cursor {
        chars: src.chars().collect(),
        i: 0,
        line: 0,
        col: 0,
        _src: src,
    };
    // byte-order mark
    if cur.peek(0) == Some('\u{feff}') {
        cur.i += 1;
    }
    let mut out = Vec::new();
    while let Some(c) = cur.peek(0) {
        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        let start = cur.pos();
        if cur.starts_with("//") {
            while cur.peek(0).is_some_and(|c| c != '\n') {
                cur.bump();
            }
            continue;
        }
        if cur.starts_with("/*") {
            cur.bump();
            cur.bump();
            loop {
                if cur.starts_with("*/") {
                    cur.bump();
                    cur.bump();
                    break;
                }
                if cur.bump().is_none() {
                    return Err(ParseError::new(start, "unterminated block comment"));
                }
            }
            continue;
        }

        let tok = if is_ident_start(c) {
            let mut s = String::new();
            while let Some(c) = cur.peek(0).filter(|&c| is_ident_part(c)) {
                s.push(c);
                cur.bump();
            }
            Tok::Ident(s)
        } else if c.is_ascii_digit()
            || (c == '.' && cur.peek(1).is_some_and(|d| d.is_ascii_digit()))
        {
            lex_number(&mut cur)
        } else if cur.starts_with("\"\"\"") {
            for _ in 0..3 {
                cur.bump();
            }
            loop {
                if cur.starts_with("\\") {
                    cur.bump();
                    cur.bump();
                    continue;
                }
                if cur.starts_with("\"\"\"") {
                    for _ in 0..3 {
                        cur.bump();
                    }
                    break;
                }
                if cur.bump().is_none() {
                    return Err(ParseError::new(start, "unterminated text block"));
                }
            }
            Tok::Str
        } else if c == '"' || c == '\'' {
            cur.bump();
            loop {
                match cur.bump() {
                    Some('\\') => {
                        cur.bump();
                    }
                    Some(q) if q == c => break,
                    Some('\n') | None => {
                        return Err(ParseError::new(start, "unterminated literal"));
                    }
                    Some(_) => {}
                }
            }
            if c == '"' {
                Tok::Str
            } else {
                Tok::Char
            }
        } else if let Some(op) = OPS.iter().find(|op| cur.starts_with(op)) {
            for _ in 0..op.chars().count() {
                cur.bump();
            }
            Tok::Op(op)
        } else {
            return Err(ParseError::new(
                start,
                format!("unexpected character {c:?}"),
            ));
        };
        out.push(Token {
            tok,
            span: Span {
                start,
                end: cur.pos(),
            },
        });
    }
    let end = cur.pos();
    out.push(Token {
        tok: Tok::Eof,
        span: Span { start: end, end },
    });
    Ok(out)
}

fn lex_number(cur: &mut Cursor<'_>) -> Tok {
    let hex = cur.starts_with("0x") || cur.starts_with("0X");
    let mut float = false;
    let mut prev = '\0';
    while let Some(c) = cur.peek(0) {
        let exp_sign = (c == '+' || c == '-') && !hex && (prev == 'e' || prev == 'E');
        if c == '.' {
            if !cur.peek(1).is_some_and(|d| d.is_ascii_digit()) && float {
                break;
            }
            // `1.foo()` is not valid Java, so a dot after digits is a fraction
            float = true;
        } else if !(c.is_ascii_alphanumeric() || c == '_' || exp_sign) {
            break;
        }
        if !hex && matches!(c, 'e' | 'E' | 'f' | 'F' | 'd' | 'D') {
            float = true;
        }
        prev = c;
        cur.bump();
    }
    if float {
        Tok::Float
    } else {
        Tok::Int
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(src: &str) -> Vec<Tok> {
        tokenize(src).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn idents_ops_and_positions() {
        let t = tokenize("class A {\n  int x;\n}").unwrap();
        assert_eq!(t[0].tok, Tok::Ident("class".into()));
        assert_eq!(t[3].tok, Tok::Ident("int".into()));
        assert_eq!(t[3].span.start, Pos { line: 1, col: 2 });
        assert_eq!(t[4].span.end, Pos { line: 1, col: 7 });
    }

    #[test]
    fn closing_angles_lex_separately() {
        let t = toks("Map<String, List<A>> m;");
        let closers = t.iter().filter(|t| **t == Tok::Op(">")).count();
        assert_eq!(closers, 2);
    }

    #[test]
    fn comments_and_literals() {
        let t = toks("/* c */ a = \"s\\\"x\" + 'c' + 1.5e-3f + 0xFFL; // tail");
        assert_eq!(
            t,
            vec![
                Tok::Ident("a".into()),
                Tok::Op("="),
                Tok::Str,
                Tok::Op("+"),
                Tok::Char,
                Tok::Op("+"),
                Tok::Float,
                Tok::Op("+"),
                Tok::Int,
                Tok::Op(";"),
                Tok::Eof
            ]
        );
    }

    #[test]
    fn text_block() {
        assert_eq!(toks("\"\"\"\n a \"q\" \n\"\"\""), vec![Tok::Str, Tok::Eof]);
    }

    #[test]
    fn unterminated_comment_fails() {
        let err = tokenize("class A { /* ").unwrap_err();
        assert_eq!((err.line, err.column), (0, 10));
    }
}
