//! Recursive-descent parser. [`parse_program`] drives statement parsing
//! with panic-mode recovery: when a statement fails, one diagnostic is
//! recorded and the cursor skips to the next `;` (consumed) or enclosing
//! `}` (left for the block parser) before continuing, so a single malformed
//! statement never hides the rest of the file.

mod expr;
mod stmt;
mod types;


use crate::ast::Program;
use crate::diag::{codes, Diagnostic};
use crate::span::SourceSpan;
use crate::token::{Token, TokenKind};

/// Result of parsing one source file. `success` means no error-severity
/// diagnostics; warnings alone do not clear it.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseOutcome {
    pub program: Program,
    pub diagnostics: Vec<Diagnostic>,
    pub success: bool,
}

/// Marker for "a diagnostic was already recorded, unwind to the nearest
/// recovery point". Carries no payload on purpose.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Abort;

pub(crate) type PResult<T> = Result<T, Abort>;

/// Parse a full token stream (as produced by [`crate::lexer::tokenize`])
/// into a Program. Never panics on malformed input; every failure becomes a
/// diagnostic in the outcome.
pub fn parse_program(source: &str, tokens: Vec<Token>) -> ParseOutcome {
    debug_assert!(matches!(tokens.last(), Some(t) if t.kind == TokenKind::Eof));
    let mut p = Parser::new(source, tokens);

    let mut version = None;
    let mut statements = Vec::new();

    if p.at(TokenKind::OpenQasm) {
        if let Ok((v, stmt)) = stmt::parse_version_statement(&mut p) {
            version = Some(v);
            statements.push(stmt);
        } else {
            p.synchronize();
        }
    } else {
        p.diagnostics.push(Diagnostic::warning(
            codes::W_VERSION,
            "no OPENQASM version statement; assuming 3.0",
            SourceSpan::point(0, 1, 1),
        ));
    }

    loop {
        match p.kind() {
            TokenKind::Eof => break,
            TokenKind::RBrace => {
                let span = p.peek().span;
                p.error_at(span, "unmatched '}'");
                p.advance();
            }
            _ => match stmt::parse_statement(&mut p) {
                Ok(Some(s)) => statements.push(s),
                Ok(None) => {}
                Err(Abort) => p.synchronize(),
            },
        }
    }

    let eof_span = p.peek().span;
    let span = SourceSpan::new(0, source.len(), 1, 1, eof_span.end_line, eof_span.end_col);
    let program = Program {
        version,
        statements,
        span,
    };
    let success = !crate::diag::has_errors(&p.diagnostics);
    ParseOutcome {
        program,
        diagnostics: p.diagnostics,
        success,
    }
}

/// Parse a source string as a single standalone expression. The whole
/// input must be consumed; anything else (lex errors, parse errors,
/// trailing tokens) comes back as diagnostics.
pub fn parse_expression(source: &str) -> Result<crate::ast::Expr, Vec<Diagnostic>> {
    let (tokens, lex_diags) = crate::lexer::tokenize(source);
    if crate::diag::has_errors(&lex_diags) {
        return Err(lex_diags);
    }
    let mut p = Parser::new(source, tokens);
    match expr::parse_expression(&mut p, 0) {
        Ok(e) if p.at(TokenKind::Eof) && !crate::diag::has_errors(&p.diagnostics) => Ok(e),
        Ok(_) => {
            if !crate::diag::has_errors(&p.diagnostics) {
                let span = p.peek().span;
                p.error_at(span, "expected end of input");
            }
            Err(p.diagnostics)
        }
        Err(Abort) => Err(p.diagnostics),
    }
}

pub(crate) struct Parser<'s> {
    source: &'s str,
    tokens: Vec<Token>,
    pos: usize,
    prev_span: SourceSpan,
    pub(crate) diagnostics: Vec<Diagnostic>,
}

impl<'s> Parser<'s> {
    fn new(source: &'s str, tokens: Vec<Token>) -> Self {
        Parser {
            source,
            tokens,
            pos: 0,
            prev_span: SourceSpan::point(0, 1, 1),
            diagnostics: Vec::new(),
        }
    }

    pub(crate) fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    pub(crate) fn kind(&self) -> TokenKind {
        self.tokens[self.pos].kind
    }

    pub(crate) fn nth_kind(&self, n: usize) -> TokenKind {
        self.tokens
            .get(self.pos + n)
            .map(|t| t.kind)
            .unwrap_or(TokenKind::Eof)
    }

    pub(crate) fn at(&self, kind: TokenKind) -> bool {
        self.kind() == kind
    }

    /// Span of the most recently consumed token; statement spans end here.
    pub(crate) fn prev_span(&self) -> SourceSpan {
        self.prev_span
    }

    /// Consume and return the current token. Never moves past Eof.
    pub(crate) fn advance(&mut self) -> Token {
        let tok = self.tokens[self.pos].clone();
        if tok.kind != TokenKind::Eof {
            self.pos += 1;
        }
        self.prev_span = tok.span;
        tok
    }

    pub(crate) fn eat(&mut self, kind: TokenKind) -> Option<Token> {
        if self.at(kind) {
            Some(self.advance())
        } else {
            None
        }
    }

    /// Consume `kind` or record "expected {what}, found ..." at the current
    /// token and abort the enclosing statement.
    pub(crate) fn expect(&mut self, kind: TokenKind, what: &str) -> PResult<Token> {
        if self.at(kind) {
            return Ok(self.advance());
        }
        let found = self.kind().describe();
        let span = self.peek().span;
        self.error_at(span, format!("expected {what}, found {found}"));
        Err(Abort)
    }

    pub(crate) fn error_at(&mut self, span: SourceSpan, message: impl Into<String>) {
        self.diagnostics
            .push(Diagnostic::error(codes::E_PARSE, message, span));
    }

    pub(crate) fn warn_at(&mut self, code: &'static str, span: SourceSpan, message: impl Into<String>) {
        self.diagnostics
            .push(Diagnostic::warning(code, message, span));
    }

    pub(crate) fn error_code_at(
        &mut self,
        code: &'static str,
        span: SourceSpan,
        message: impl Into<String>,
    ) {
        self.diagnostics
            .push(Diagnostic::error(code, message, span));
    }

    pub(crate) fn lexeme(&self, token: &Token) -> &'s str {
        token.span.slice(self.source)
    }

    pub(crate) fn slice(&self, start: usize, end: usize) -> &'s str {
        &self.source[start..end]
    }

    /// Panic-mode recovery: skip to the next `;` at brace depth zero
    /// (consumed) or to the `}` closing the current block (not consumed, the
    /// block parser needs it).
    pub(crate) fn synchronize(&mut self) {
        let mut depth: u32 = 0;
        loop {
            match self.kind() {
                TokenKind::Eof => return,
                TokenKind::Semicolon if depth == 0 => {
                    self.advance();
                    return;
                }
                TokenKind::RBrace if depth == 0 => return,
                TokenKind::LBrace => {
                    depth += 1;
                    self.advance();
                }
                TokenKind::RBrace => {
                    depth -= 1;
                    self.advance();
                }
                _ => {
                    self.advance();
                }
            }
        }
    }
}
