//! Hand-written lexer. `//` comments run to end of line.

use super::token::{Token, TokenKind};
use crate::diagnostic::{Code, Diagnostic};
use crate::span::{Pos, Span};

struct Cursor<'a> {
    src: &'a str,
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    pos: Pos,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor {
            src,
            chars: src.char_indices().peekable(),
            pos: Pos::START,
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().map(|&(_, c)| c)
    }

    fn peek2(&self) -> Option<char> {
        let mut it = self.src[self.pos.offset..].chars();
        it.next();
        it.next()
    }

    fn bump(&mut self) -> Option<char> {
        let (i, c) = self.chars.next()?;
        self.pos.offset = i + c.len_utf8();
        if c == '\n' {
            self.pos.line += 1;
            self.pos.col = 1;
        } else {
            self.pos.col += 1;
        }
        Some(c)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }
}

/// Splits `src` into tokens. Lexing continues past errors so that every
/// lexical problem in the file is reported at once.
pub fn tokenize(src: &str) -> Result<Vec<Token>, Vec<Diagnostic>> {
    let mut cur = Cursor::new(src);
    let mut tokens = Vec::new();
    let mut errors = Vec::new();

    while let Some(c) = cur.peek() {
        let start = cur.pos;
        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        if c == '/' && cur.peek2() == Some('/') {
            while let Some(c) = cur.peek() {
                if c == '\n' {
                    break;
                }
                cur.bump();
            }
            continue;
        }

        let kind = if c.is_ascii_alphabetic() || c == '_' {
            let mut word = String::new();
            while let Some(c) = cur.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    word.push(c);
                    cur.bump();
                } else {
                    break;
                }
            }
            TokenKind::keyword(&word).unwrap_or(TokenKind::Ident(word))
        } else if c.is_ascii_digit() {
            let mut digits = String::new();
            while let Some(c) = cur.peek() {
                if c.is_ascii_digit() {
                    digits.push(c);
                    cur.bump();
                } else {
                    break;
                }
            }
            match digits.parse::<i64>() {
                Ok(n) => TokenKind::Int(n),
                Err(_) => {
                    errors.push(Diagnostic::new(
                        Code::Lex,
                        Span::new(start, cur.pos),
                        "integer literal out of range",
                    ));
                    continue;
                }
            }
        } else if c == '"' {
            cur.bump();
            match lex_string(&mut cur) {
                Ok(s) => TokenKind::Str(s),
                Err(msg) => {
                    errors.push(Diagnostic::new(Code::Lex, Span::new(start, cur.pos), msg));
                    continue;
                }
            }
        } else {
            cur.bump();
            use TokenKind::*;
            match c {
                '{' => LBrace,
                '}' => RBrace,
                '(' => LParen,
                ')' => RParen,
                ',' => Comma,
                ';' => Semi,
                '.' => Dot,
                '#' => Hash,
                '+' => Plus,
                '*' => Star,
                '/' => Slash,
                '=' => Eq,
                ':' if cur.eat('=') => Assign,
                ':' => Colon,
                '-' if cur.eat('>') => Arrow,
                '-' => Minus,
                '<' if cur.eat('=') => Le,
                '<' => Lt,
                '>' if cur.eat('=') => Ge,
                '>' => Gt,
                '!' if cur.eat('=') => Ne,
                '!' => Bang,
                '&' if cur.eat('&') => AndAnd,
                '|' if cur.eat('|') => OrOr,
                other => {
                    errors.push(Diagnostic::new(
                        Code::Lex,
                        Span::new(start, cur.pos),
                        format!("illegal character {other:?}"),
                    ));
                    continue;
                }
            }
        };
        tokens.push(Token {
            kind,
            span: Span::new(start, cur.pos),
        });
    }

    if errors.is_empty() {
        Ok(tokens)
    } else {
        Err(errors)
    }
}

fn lex_string(cur: &mut Cursor<'_>) -> Result<String, &'static str> {
    let mut out = String::new();
    loop {
        match cur.bump() {
            None | Some('\n') => return Err("unterminated string"),
            Some('"') => return Ok(out),
            Some('\\') => match cur.bump() {
                Some('"') => out.push('"'),
                Some('\\') => out.push('\\'),
                Some('n') => out.push('\n'),
                Some('t') => out.push('\t'),
                None | Some('\n') => return Err("unterminated string"),
                Some(_) => return Err("unknown escape sequence"),
            },
            Some(c) => out.push(c),
        }
    }
}

/// Renders `s` as a string literal that `tokenize` reads back to `s`.
pub fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}
