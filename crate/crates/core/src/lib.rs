//! OpenQASM 3.0 frontend: lexer, parser, semantic analysis, and a canonical
//! JSON serialization of the AST.

pub mod ast;
pub mod bench;
pub mod diag;
pub mod lexer;
pub mod parser;
pub mod semantics;
pub mod serializer;
pub mod span;
pub mod token;

pub use diag::{Diagnostic, Severity};
pub use parser::ParseOutcome;
pub use span::SourceSpan;
pub use token::{Token, TokenKind, TokenValue};

/// Tokenize and parse in one step. Lexer diagnostics come first, then
/// parser diagnostics, the whole list ordered by source position.
pub fn parse(source: &str) -> ParseOutcome {
    let (tokens, lex_diags) = lexer::tokenize(source);
    let mut outcome = parser::parse_program(source, tokens);
    if !lex_diags.is_empty() {
        outcome.success = outcome.success && !lex_diags.iter().any(|d| d.is_error());
        outcome.diagnostics.extend(lex_diags);
        outcome
            .diagnostics
            .sort_by_key(|d| (d.span.start_offset, d.span.end_offset));
    }
    outcome
}
