//! Recursive-descent parser over the token stream. Collects every error it
//! can find rather than stopping at the first one: a bad statement skips to
//! the next ';' or '}', a bad declaration skips to the next top-level
//! keyword.

use super::ast::*;
use super::lexer::{Tok, Token};
use super::{Loc, ParseError};
use crate::model::{DiagCode, HKind};

const TOP_KEYWORDS: [&str; 5] = ["space", "cbrane", "tbrane", "hcarrier", "wcarrier"];

pub fn parse_ast(tokens: &[Token], end: Loc, errors: &mut Vec<ParseError>) -> ModelAst {
    let mut p = Parser {
        tokens,
        pos: 0,
        end,
        errors,
    };
    let mut ast = ModelAst::default();
    while let Some(tok) = p.peek() {
        let keyword = match &tok.tok {
            Tok::Ident(s) => s.clone(),
            _ => {
                p.error_here(format!(
                    "expected a declaration keyword, found {}",
                    tok.tok.describe()
                ));
                p.recover_toplevel();
                continue;
            }
        };
        match keyword.as_str() {
            "space" => {
                if let Some(d) = p.parse_space() {
                    ast.spaces.push(d);
                }
            }
            "cbrane" => {
                if let Some(d) = p.parse_cbrane() {
                    ast.cbranes.push(d);
                }
            }
            "tbrane" => {
                if let Some(d) = p.parse_tbrane() {
                    ast.tbranes.push(d);
                }
            }
            "hcarrier" => {
                if let Some(d) = p.parse_hcarrier() {
                    ast.hcarriers.push(d);
                }
            }
            "wcarrier" => {
                if let Some(d) = p.parse_wcarrier() {
                    ast.wcarriers.push(d);
                }
            }
            other => {
                p.error_here(format!("unknown declaration keyword '{other}'"));
                p.pos += 1;
                p.recover_toplevel();
            }
        }
    }
    ast
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    end: Loc,
    errors: &'a mut Vec<ParseError>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn loc(&self) -> Loc {
        self.peek().map(|t| t.loc).unwrap_or(self.end)
    }

    fn error(&mut self, loc: Loc, message: impl Into<String>) {
        self.errors
            .push(ParseError::new(loc, DiagCode::SyntaxError, message));
    }

    fn error_here(&mut self, message: impl Into<String>) {
        let loc = self.loc();
        self.error(loc, message);
    }

    /// Skips to the next plausible declaration start: a known top-level
    /// keyword, or any identifier right after a '}' or ';' at depth 0 (so
    /// misspelled keywords still get reported instead of being swallowed).
    fn recover_toplevel(&mut self) {
        let mut depth = 0i32;
        let mut at_boundary = false;
        while let Some(tok) = self.peek() {
            match &tok.tok {
                Tok::Ident(s)
                    if depth <= 0 && (TOP_KEYWORDS.contains(&s.as_str()) || at_boundary) =>
                {
                    return;
                }
                Tok::LBrace => depth += 1,
                Tok::RBrace => depth -= 1,
                _ => {}
            }
            at_boundary = depth <= 0 && matches!(tok.tok, Tok::RBrace | Tok::Semi);
            self.pos += 1;
        }
    }

    /// Skips past the current statement: consumes up to and including the
    /// next ';' at depth 0, or stops before the enclosing '}'.
    fn recover_statement(&mut self) {
        let mut depth = 0i32;
        while let Some(tok) = self.peek() {
            match &tok.tok {
                Tok::LBrace | Tok::LBracket => depth += 1,
                Tok::RBracket => depth -= 1,
                Tok::RBrace => {
                    if depth == 0 {
                        return;
                    }
                    depth -= 1;
                }
                Tok::Semi if depth == 0 => {
                    self.pos += 1;
                    return;
                }
                _ => {}
            }
            self.pos += 1;
        }
    }

    fn expect_ident(&mut self, what: &str) -> Option<Name> {
        match self.peek() {
            Some(Token {
                tok: Tok::Ident(s),
                loc,
            }) => {
                let name = Name {
                    text: s.clone(),
                    loc: *loc,
                };
                self.pos += 1;
                Some(name)
            }
            Some(tok) => {
                let msg = format!("expected {what}, found {}", tok.tok.describe());
                self.error(tok.loc, msg);
                None
            }
            None => {
                self.error(self.end, format!("expected {what}, found end of input"));
                None
            }
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> bool {
        match self.peek() {
            Some(Token {
                tok: Tok::Ident(s), ..
            }) if s == kw => {
                self.pos += 1;
                true
            }
            Some(tok) => {
                let msg = format!("expected '{kw}', found {}", tok.tok.describe());
                self.error(tok.loc, msg);
                false
            }
            None => {
                self.error(self.end, format!("expected '{kw}', found end of input"));
                false
            }
        }
    }

    fn expect_tok(&mut self, tok: Tok, what: &str) -> bool {
        match self.peek() {
            Some(t) if t.tok == tok => {
                self.pos += 1;
                true
            }
            Some(t) => {
                let msg = format!("expected {what}, found {}", t.tok.describe());
                self.error(t.loc, msg);
                false
            }
            None => {
                self.error(self.end, format!("expected {what}, found end of input"));
                false
            }
        }
    }

    fn expect_number(&mut self) -> Option<f64> {
        match self.peek() {
            Some(Token {
                tok: Tok::Number(s),
                ..
            }) => {
                let v = s.parse::<f64>().expect("lexer validated");
                self.pos += 1;
                Some(v)
            }
            Some(tok) => {
                let msg = format!("expected a number, found {}", tok.tok.describe());
                self.error(tok.loc, msg);
                None
            }
            None => {
                self.error(self.end, "expected a number, found end of input");
                None
            }
        }
    }

    fn expect_uint(&mut self, what: &str) -> Option<u64> {
        match self.peek() {
            Some(Token {
                tok: Tok::Number(s),
                loc,
            }) => match s.parse::<u64>() {
                Ok(v) => {
                    self.pos += 1;
                    Some(v)
                }
                Err(_) => {
                    let loc = *loc;
                    let msg = format!("expected {what} (a nonnegative integer), found '{s}'");
                    self.error(loc, msg);
                    self.pos += 1;
                    None
                }
            },
            Some(tok) => {
                let msg = format!("expected {what}, found {}", tok.tok.describe());
                self.error(tok.loc, msg);
                None
            }
            None => {
                self.error(self.end, format!("expected {what}, found end of input"));
                None
            }
        }
    }

    fn expect_string(&mut self, what: &str) -> Option<Name> {
        match self.peek() {
            Some(Token {
                tok: Tok::Str(s),
                loc,
            }) => {
                let name = Name {
                    text: s.clone(),
                    loc: *loc,
                };
                self.pos += 1;
                Some(name)
            }
            Some(tok) => {
                let msg = format!("expected {what}, found {}", tok.tok.describe());
                self.error(tok.loc, msg);
                None
            }
            None => {
                self.error(self.end, format!("expected {what}, found end of input"));
                None
            }
        }
    }

    fn at_block_end(&self) -> bool {
        matches!(
            self.peek(),
            None | Some(Token {
                tok: Tok::RBrace,
                ..
            })
        )
    }

    /// Consumes '{', runs `body` for each statement keyword, consumes '}'.
    fn parse_block(&mut self, owner: &str, mut body: impl FnMut(&mut Self, Name)) {
        if !self.expect_tok(Tok::LBrace, "'{'") {
            self.recover_toplevel();
            return;
        }
        loop {
            if self.at_block_end() {
                break;
            }
            match self.expect_ident("a statement keyword") {
                Some(kw) => body(self, kw),
                None => self.recover_statement(),
            }
        }
        if !self.expect_tok(Tok::RBrace, "'}'") {
            self.error_here(format!("unterminated '{owner}' block"));
            self.recover_toplevel();
        }
    }

    fn end_statement(&mut self) {
        if !self.expect_tok(Tok::Semi, "';'") {
            self.recover_statement();
        }
    }

    fn parse_space(&mut self) -> Option<SpaceDecl> {
        self.pos += 1; // keyword
        let id = self.expect_ident("a space id")?;
        let mut axes = Vec::new();
        self.parse_block("space", |p, kw| {
            if kw.text != "axis" {
                p.error(kw.loc, format!("unknown space statement '{}'", kw.text));
                p.recover_statement();
                return;
            }
            let parsed = (|| {
                let name = p.expect_ident("an axis name")?;
                if !p.expect_keyword("min") {
                    return None;
                }
                let min = p.expect_number()?;
                if !p.expect_keyword("max") {
                    return None;
                }
                let max = p.expect_number()?;
                if !p.expect_keyword("cells") {
                    return None;
                }
                let cells = p.expect_uint("a cell count")?;
                Some(AxisDecl {
                    name,
                    min,
                    max,
                    cells,
                })
            })();
            match parsed {
                Some(axis) => {
                    axes.push(axis);
                    p.end_statement();
                }
                None => p.recover_statement(),
            }
        });
        Some(SpaceDecl { id, axes })
    }

    fn parse_brane_header(&mut self) -> Option<(Name, Name)> {
        let id = self.expect_ident("a brane id")?;
        if !self.expect_keyword("on") {
            self.recover_toplevel();
            return None;
        }
        let space = self.expect_ident("a space id")?;
        Some((id, space))
    }

    fn parse_cbrane(&mut self) -> Option<CBraneDecl> {
        self.pos += 1;
        let (id, space) = self.parse_brane_header()?;
        let mut init: Option<(Loc, FieldLit)> = None;
        self.parse_block("cbrane", |p, kw| {
            if kw.text != "init" {
                p.error(kw.loc, format!("unknown cbrane statement '{}'", kw.text));
                p.recover_statement();
                return;
            }
            if init.is_some() {
                p.error(kw.loc, "duplicate 'init' statement");
                p.recover_statement();
                return;
            }
            match p.parse_field_lit() {
                Some(field) => {
                    init = Some((kw.loc, field));
                    p.end_statement();
                }
                None => p.recover_statement(),
            }
        });
        if init.is_none() {
            self.error(id.loc, format!("cbrane '{}' is missing 'init'", id.text));
        }
        Some(CBraneDecl { id, space, init })
    }

    fn parse_tbrane(&mut self) -> Option<TBraneDecl> {
        self.pos += 1;
        let (id, space) = self.parse_brane_header()?;
        let mut rate: Option<(Loc, FieldLit)> = None;
        self.parse_block("tbrane", |p, kw| {
            if kw.text != "rate" {
                p.error(kw.loc, format!("unknown tbrane statement '{}'", kw.text));
                p.recover_statement();
                return;
            }
            if rate.is_some() {
                p.error(kw.loc, "duplicate 'rate' statement");
                p.recover_statement();
                return;
            }
            match p.parse_field_lit() {
                Some(field) => {
                    rate = Some((kw.loc, field));
                    p.end_statement();
                }
                None => p.recover_statement(),
            }
        });
        if rate.is_none() {
            self.error(id.loc, format!("tbrane '{}' is missing 'rate'", id.text));
        }
        Some(TBraneDecl { id, space, rate })
    }

    fn parse_carrier_header(&mut self, what: &str) -> Option<(Name, Name, Name)> {
        let id = self.expect_ident(&format!("a {what} id"))?;
        let source = self.expect_ident("a source brane id")?;
        if !self.expect_tok(Tok::Arrow, "'->'") {
            self.recover_toplevel();
            return None;
        }
        let target = self.expect_ident("a target brane id")?;
        Some((id, source, target))
    }

    fn parse_hcarrier(&mut self) -> Option<HCarrierDecl> {
        self.pos += 1;
        let (id, source, target) = self.parse_carrier_header("hcarrier")?;
        let mut kind: Option<(Loc, HKind)> = None;
        let mut threshold: Option<(Loc, FieldLit)> = None;
        self.parse_block("hcarrier", |p, kw| match kw.text.as_str() {
            "kind" => {
                if kind.is_some() {
                    p.error(kw.loc, "duplicate 'kind' statement");
                    p.recover_statement();
                    return;
                }
                let Some(name) = p.expect_ident("a carrier kind") else {
                    p.recover_statement();
                    return;
                };
                let parsed = match name.text.as_str() {
                    "normal" => Some(HKind::Normal),
                    "blocking" => Some(HKind::Blocking),
                    "associative" => Some(HKind::Associative),
                    other => {
                        p.error(
                            name.loc,
                            format!(
                                "unknown carrier kind '{other}' (expected normal, blocking or associative)"
                            ),
                        );
                        None
                    }
                };
                match parsed {
                    Some(k) => {
                        kind = Some((kw.loc, k));
                        p.end_statement();
                    }
                    None => p.recover_statement(),
                }
            }
            "threshold" => {
                if threshold.is_some() {
                    p.error(kw.loc, "duplicate 'threshold' statement");
                    p.recover_statement();
                    return;
                }
                match p.parse_field_lit() {
                    Some(field) => {
                        threshold = Some((kw.loc, field));
                        p.end_statement();
                    }
                    None => p.recover_statement(),
                }
            }
            other => {
                p.error(kw.loc, format!("unknown hcarrier statement '{other}'"));
                p.recover_statement();
            }
        });
        if threshold.is_none() {
            self.error(
                id.loc,
                format!("hcarrier '{}' is missing 'threshold'", id.text),
            );
        }
        Some(HCarrierDecl {
            id,
            source,
            target,
            kind,
            threshold,
        })
    }

    fn parse_wcarrier(&mut self) -> Option<WCarrierDecl> {
        self.pos += 1;
        let (id, source, target) = self.parse_carrier_header("wcarrier")?;
        let mut mode: Option<(Loc, WMode)> = None;
        let mut gain: Option<(Loc, FieldLit)> = None;
        let mut kernel: Option<(Loc, KernelLit)> = None;
        self.parse_block("wcarrier", |p, kw| match kw.text.as_str() {
            "mode" => {
                if mode.is_some() {
                    p.error(kw.loc, "duplicate 'mode' statement");
                    p.recover_statement();
                    return;
                }
                let Some(name) = p.expect_ident("a mode") else {
                    p.recover_statement();
                    return;
                };
                let parsed = match name.text.as_str() {
                    "pointwise" => Some(WMode::Pointwise),
                    "kernel" => Some(WMode::Kernel),
                    other => {
                        p.error(
                            name.loc,
                            format!("unknown mode '{other}' (expected pointwise or kernel)"),
                        );
                        None
                    }
                };
                match parsed {
                    Some(m) => {
                        mode = Some((kw.loc, m));
                        p.end_statement();
                    }
                    None => p.recover_statement(),
                }
            }
            "gain" => {
                if gain.is_some() {
                    p.error(kw.loc, "duplicate 'gain' statement");
                    p.recover_statement();
                    return;
                }
                match p.parse_field_lit() {
                    Some(field) => {
                        gain = Some((kw.loc, field));
                        p.end_statement();
                    }
                    None => p.recover_statement(),
                }
            }
            "kernel" => {
                if kernel.is_some() {
                    p.error(kw.loc, "duplicate 'kernel' statement");
                    p.recover_statement();
                    return;
                }
                match p.parse_kernel_lit() {
                    Some(k) => {
                        kernel = Some((kw.loc, k));
                        p.end_statement();
                    }
                    None => p.recover_statement(),
                }
            }
            other => {
                p.error(kw.loc, format!("unknown wcarrier statement '{other}'"));
                p.recover_statement();
            }
        });
        Some(WCarrierDecl {
            id,
            source,
            target,
            mode,
            gain,
            kernel,
        })
    }

    fn parse_number_list(&mut self) -> Option<Vec<f64>> {
        if !self.expect_tok(Tok::LBracket, "'['") {
            return None;
        }
        let mut values = Vec::new();
        if matches!(
            self.peek(),
            Some(Token {
                tok: Tok::RBracket,
                ..
            })
        ) {
            self.pos += 1;
            return Some(values);
        }
        loop {
            values.push(self.expect_number()?);
            match self.peek() {
                Some(Token {
                    tok: Tok::Comma, ..
                }) => {
                    self.pos += 1;
                }
                Some(Token {
                    tok: Tok::RBracket,
                    ..
                }) => {
                    self.pos += 1;
                    return Some(values);
                }
                Some(tok) => {
                    let msg = format!("expected ',' or ']', found {}", tok.tok.describe());
                    self.error(tok.loc, msg);
                    return None;
                }
                None => {
                    self.error(self.end, "expected ',' or ']', found end of input");
                    return None;
                }
            }
        }
    }

    fn parse_field_lit(&mut self) -> Option<FieldLit> {
        let head = self.expect_ident("a field literal")?;
        match head.text.as_str() {
            "const" => Some(FieldLit::Const(self.expect_number()?)),
            "box" => {
                if !self.expect_tok(Tok::LBracket, "'['") {
                    return None;
                }
                let lo = self.expect_number()?;
                if !self.expect_tok(Tok::Comma, "','") {
                    return None;
                }
                let hi = self.expect_number()?;
                if !self.expect_tok(Tok::RBracket, "']'") {
                    return None;
                }
                if !self.expect_keyword("axis") {
                    return None;
                }
                let axis = self.expect_ident("an axis name")?;
                if !self.expect_keyword("inside") {
                    return None;
                }
                let inside = self.expect_number()?;
                if !self.expect_keyword("outside") {
                    return None;
                }
                let outside = self.expect_number()?;
                Some(FieldLit::Box {
                    lo,
                    hi,
                    axis,
                    inside,
                    outside,
                })
            }
            "csv" => Some(FieldLit::Csv(self.expect_string("a csv path")?)),
            "values" => Some(FieldLit::Values(self.parse_number_list()?)),
            "schedule" => {
                if !self.expect_tok(Tok::LBrace, "'{'") {
                    return None;
                }
                let mut entries = Vec::new();
                loop {
                    let loc = self.loc();
                    let start = self.expect_uint("a start step")?;
                    if !self.expect_tok(Tok::Colon, "':'") {
                        return None;
                    }
                    let field = self.parse_field_lit()?;
                    entries.push((start, loc, field));
                    match self.peek() {
                        Some(Token {
                            tok: Tok::Comma, ..
                        }) => {
                            self.pos += 1;
                        }
                        Some(Token {
                            tok: Tok::RBrace, ..
                        }) => {
                            self.pos += 1;
                            return Some(FieldLit::Schedule(entries));
                        }
                        Some(tok) => {
                            let msg = format!("expected ',' or '}}', found {}", tok.tok.describe());
                            self.error(tok.loc, msg);
                            return None;
                        }
                        None => {
                            self.error(self.end, "expected ',' or '}', found end of input");
                            return None;
                        }
                    }
                }
            }
            other => {
                self.error(
                    head.loc,
                    format!(
                        "unknown field literal '{other}' (expected const, box, csv, values or schedule)"
                    ),
                );
                None
            }
        }
    }

    fn parse_kernel_lit(&mut self) -> Option<KernelLit> {
        let head = self.expect_ident("a kernel literal")?;
        match head.text.as_str() {
            "uniform" => Some(KernelLit::Uniform(self.expect_number()?)),
            "csv" => Some(KernelLit::Csv(self.expect_string("a csv path")?)),
            "values" => Some(KernelLit::Values(self.parse_number_list()?)),
            "schedule" => {
                if !self.expect_tok(Tok::LBrace, "'{'") {
                    return None;
                }
                let mut entries = Vec::new();
                loop {
                    let loc = self.loc();
                    let start = self.expect_uint("a start step")?;
                    if !self.expect_tok(Tok::Colon, "':'") {
                        return None;
                    }
                    let kernel = self.parse_kernel_lit()?;
                    entries.push((start, loc, kernel));
                    match self.peek() {
                        Some(Token {
                            tok: Tok::Comma, ..
                        }) => {
                            self.pos += 1;
                        }
                        Some(Token {
                            tok: Tok::RBrace, ..
                        }) => {
                            self.pos += 1;
                            return Some(KernelLit::Schedule(entries));
                        }
                        Some(tok) => {
                            let msg = format!("expected ',' or '}}', found {}", tok.tok.describe());
                            self.error(tok.loc, msg);
                            return None;
                        }
                        None => {
                            self.error(self.end, "expected ',' or '}', found end of input");
                            return None;
                        }
                    }
                }
            }
            other => {
                self.error(
                    head.loc,
                    format!(
                        "unknown kernel literal '{other}' (expected uniform, csv, values or schedule)"
                    ),
                );
                None
            }
        }
    }
}
