//! Tokenizer for the model language. Tracks line/column (1-based) for every
//! token so later passes can point at the exact spot.

use super::{Loc, ParseError};
use crate::model::DiagCode;

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Ident(String),
    /// Raw number text, already known to parse as f64.
    Number(String),
    Str(String),
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Semi,
    Colon,
    Comma,
    Arrow,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier '{s}'"),
            Tok::Number(s) => format!("number '{s}'"),
            Tok::Str(s) => format!("string \"{s}\""),
            Tok::LBrace => "'{'".into(),
            Tok::RBrace => "'}'".into(),
            Tok::LBracket => "'['".into(),
            Tok::RBracket => "']'".into(),
            Tok::Semi => "';'".into(),
            Tok::Colon => "':'".into(),
            Tok::Comma => "','".into(),
            Tok::Arrow => "'->'".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub tok: Tok,
    pub loc: Loc,
}

pub struct LexOutput {
    pub tokens: Vec<Token>,
    pub errors: Vec<ParseError>,
    /// Position just past the last character, for end-of-input errors.
    pub end: Loc,
}

pub fn lex(text: &str) -> LexOutput {
    let mut tokens = Vec::new();
    let mut errors = Vec::new();
    let mut line: u32 = 1;
    let mut col: u32 = 1;
    let mut chars = text.chars().peekable();

    macro_rules! bump {
        () => {{
            let c = chars.next();
            if let Some(c) = c {
                if c == '\n' {
                    line += 1;
                    col = 1;
                } else {
                    col += 1;
                }
            }
            c
        }};
    }

    while let Some(&c) = chars.peek() {
        let loc = Loc { line, col };
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                bump!();
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    bump!();
                }
            }
            '{' => {
                bump!();
                tokens.push(Token { tok: Tok::LBrace, loc });
            }
            '}' => {
                bump!();
                tokens.push(Token { tok: Tok::RBrace, loc });
            }
            '[' => {
                bump!();
                tokens.push(Token { tok: Tok::LBracket, loc });
            }
            ']' => {
                bump!();
                tokens.push(Token { tok: Tok::RBracket, loc });
            }
            ';' => {
                bump!();
                tokens.push(Token { tok: Tok::Semi, loc });
            }
            ':' => {
                bump!();
                tokens.push(Token { tok: Tok::Colon, loc });
            }
            ',' => {
                bump!();
                tokens.push(Token { tok: Tok::Comma, loc });
            }
            '"' => {
                bump!();
                let mut s = String::new();
                let mut closed = false;
                while let Some(&c) = chars.peek() {
                    if c == '"' {
                        bump!();
                        closed = true;
                        break;
                    }
                    if c == '\n' {
                        break;
                    }
                    s.push(c);
                    bump!();
                }
                if closed {
                    tokens.push(Token { tok: Tok::Str(s), loc });
                } else {
                    errors.push(ParseError::new(
                        loc,
                        DiagCode::SyntaxError,
                        "unterminated string literal",
                    ));
                }
            }
            '-' => {
                bump!();
                match chars.peek() {
                    Some('>') => {
                        bump!();
                        tokens.push(Token { tok: Tok::Arrow, loc });
                    }
                    Some(c2) if c2.is_ascii_digit() || *c2 == '.' => {
                        let mut s = String::from("-");
                        lex_number_tail(&mut s, &mut chars, &mut line, &mut col);
                        push_number(s, loc, &mut tokens, &mut errors);
                    }
                    _ => errors.push(ParseError::new(
                        loc,
                        DiagCode::SyntaxError,
                        "stray '-' (expected '->' or a number)",
                    )),
                }
            }
            c if c.is_ascii_digit() || c == '.' => {
                let mut s = String::new();
                lex_number_tail(&mut s, &mut chars, &mut line, &mut col);
                push_number(s, loc, &mut tokens, &mut errors);
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_alphanumeric() || c == '_' {
                        s.push(c);
                        bump!();
                    } else {
                        break;
                    }
                }
                tokens.push(Token { tok: Tok::Ident(s), loc });
            }
            other => {
                errors.push(ParseError::new(
                    loc,
                    DiagCode::SyntaxError,
                    format!("unexpected character '{other}'"),
                ));
                bump!();
            }
        }
    }

    LexOutput {
        tokens,
        errors,
        end: Loc { line, col },
    }
}

fn lex_number_tail(
    s: &mut String,
    chars: &mut std::iter::Peekable<std::str::Chars<'_>>,
    line: &mut u32,
    col: &mut u32,
) {
    let mut seen_exp = false;
    while let Some(&c) = chars.peek() {
        let take = c.is_ascii_digit()
            || c == '.'
            || c == 'e'
            || c == 'E'
            || ((c == '+' || c == '-') && matches!(s.chars().last(), Some('e') | Some('E')));
        if !take {
            break;
        }
        if c == 'e' || c == 'E' {
            if seen_exp {
                break;
            }
            seen_exp = true;
        }
        s.push(c);
        chars.next();
        if c == '\n' {
            *line += 1;
            *col = 1;
        } else {
            *col += 1;
        }
    }
}

fn push_number(s: String, loc: Loc, tokens: &mut Vec<Token>, errors: &mut Vec<ParseError>) {
    if s.parse::<f64>().is_ok() {
        tokens.push(Token {
            tok: Tok::Number(s),
            loc,
        });
    } else {
        errors.push(ParseError::new(
            loc,
            DiagCode::SyntaxError,
            format!("malformed number '{s}'"),
        ));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokenizes_a_declaration() {
        let out = lex("cbrane ci on X { init const 5.0; } # comment");
        assert!(out.errors.is_empty());
        let kinds: Vec<&Tok> = out.tokens.iter().map(|t| &t.tok).collect();
        assert_eq!(kinds.len(), 10);
        assert_eq!(*kinds[0], Tok::Ident("cbrane".into()));
        assert_eq!(*kinds[7], Tok::Number("5.0".into()));
    }

    #[test]
    fn arrow_vs_negative_number() {
        let out = lex("a -> -2.5e-3");
        assert!(out.errors.is_empty());
        assert_eq!(out.tokens[1].tok, Tok::Arrow);
        assert_eq!(out.tokens[2].tok, Tok::Number("-2.5e-3".into()));
    }

    #[test]
    fn positions_are_tracked() {
        let out = lex("a\n  b");
        assert_eq!(out.tokens[0].loc, Loc { line: 1, col: 1 });
        assert_eq!(out.tokens[1].loc, Loc { line: 2, col: 3 });
    }

    #[test]
    fn bad_input_yields_errors_not_panics() {
        let out = lex("space @ { \"unterminated");
        assert_eq!(out.errors.len(), 2);
    }
}
