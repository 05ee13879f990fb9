//! Token definitions: the lexer→parser contract.

use crate::span::SourceSpan;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Unit suffix of a timing literal. `µs` is normalized to [`TimeUnit::Us`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TimeUnit {
    #[serde(rename = "dt")]
    Dt,
    #[serde(rename = "ns")]
    Ns,
    #[serde(rename = "us")]
    Us,
    #[serde(rename = "ms")]
    Ms,
    #[serde(rename = "s")]
    S,
}

impl fmt::Display for TimeUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TimeUnit::Dt => "dt",
            TimeUnit::Ns => "ns",
            TimeUnit::Us => "us",
            TimeUnit::Ms => "ms",
            TimeUnit::S => "s",
        };
        write!(f, "{s}")
    }
}

/// Parsed payload attached to literal tokens.
#[derive(Clone, Debug, PartialEq)]
pub enum TokenValue {
    Integer(u64),
    Float(f64),
    Imaginary(f64),
    Timing { value: f64, unit: TimeUnit },
    Bitstring { width: u32, bits: String },
    Str(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TokenKind {
    // Keywords.
    OpenQasm,
    Include,
    Qubit,
    Qreg,
    Bit,
    Creg,
    Int,
    Uint,
    Float,
    Angle,
    Bool,
    Complex,
    Duration,
    Stretch,
    Array,
    Const,
    Let,
    Input,
    Output,
    Gate,
    Def,
    Extern,
    Return,
    If,
    Else,
    For,
    While,
    In,
    Break,
    Continue,
    End,
    Measure,
    Reset,
    Barrier,
    Delay,
    Box,
    DurationOf,
    SizeOf,
    Ctrl,
    NegCtrl,
    Inv,
    Pow,
    True,
    False,
    DefCal,
    Cal,
    DefCalGrammar,
    Pragma,

    // Names.
    Identifier,
    HardwareQubit,

    // Literals.
    IntegerLiteral,
    FloatLiteral,
    ImaginaryLiteral,
    BitstringLiteral,
    TimingLiteral,
    StringLiteral,

    // Operators.
    Plus,
    Minus,
    Star,
    Slash,
    Percent,
    StarStar,
    EqEq,
    BangEq,
    Lt,
    LtEq,
    Gt,
    GtEq,
    Shl,
    Shr,
    Amp,
    Pipe,
    Caret,
    Tilde,
    Bang,
    AmpAmp,
    PipePipe,
    Eq,
    PlusEq,
    MinusEq,
    StarEq,
    SlashEq,
    AmpEq,
    PipeEq,
    CaretEq,
    ShlEq,
    ShrEq,
    PercentEq,
    StarStarEq,
    PlusPlus,
    Arrow,
    At,

    // Punctuation.
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Comma,
    Semicolon,
    Colon,
    Dot,

    /// `@name` introducing an annotation; the rest of the line follows as one
    /// [`TokenKind::RemainingLineContent`] token when non-empty.
    AnnotationMarker,
    /// Raw line payload after `pragma` or an annotation marker.
    RemainingLineContent,

    /// Malformed input that still produced a token (e.g. `0x` with no digits).
    Error,
    Eof,
}

impl TokenKind {
    pub fn is_literal(&self) -> bool {
        matches!(
            self,
            TokenKind::IntegerLiteral
                | TokenKind::FloatLiteral
                | TokenKind::ImaginaryLiteral
                | TokenKind::BitstringLiteral
                | TokenKind::TimingLiteral
                | TokenKind::StringLiteral
        )
    }

    /// Keywords that begin a classical type specifier.
    pub fn is_type_keyword(&self) -> bool {
        matches!(
            self,
            TokenKind::Bit
                | TokenKind::Int
                | TokenKind::Uint
                | TokenKind::Float
                | TokenKind::Angle
                | TokenKind::Bool
                | TokenKind::Complex
                | TokenKind::Duration
                | TokenKind::Stretch
                | TokenKind::Array
        )
    }

    pub fn is_gate_modifier(&self) -> bool {
        matches!(
            self,
            TokenKind::Ctrl | TokenKind::NegCtrl | TokenKind::Inv | TokenKind::Pow
        )
    }

    /// Human-readable name used in diagnostics.
    pub fn describe(&self) -> &'static str {
        match self {
            TokenKind::Identifier => "identifier",
            TokenKind::IntegerLiteral => "integer literal",
            TokenKind::FloatLiteral => "float literal",
            TokenKind::StringLiteral => "string literal",
            TokenKind::BitstringLiteral => "bitstring literal",
            TokenKind::Semicolon => "';'",
            TokenKind::Comma => "','",
            TokenKind::LParen => "'('",
            TokenKind::RParen => "')'",
            TokenKind::LBracket => "'['",
            TokenKind::RBracket => "']'",
            TokenKind::LBrace => "'{'",
            TokenKind::RBrace => "'}'",
            TokenKind::Colon => "':'",
            TokenKind::Eq => "'='",
            TokenKind::Arrow => "'->'",
            TokenKind::At => "'@'",
            TokenKind::Eof => "end of file",
            _ => "token",
        }
    }
}

/// Exact-match keyword lookup, consulted after maximal-munch identifier
/// scanning. `U` and `gphase` are intentionally absent: they lex as
/// identifiers and are recognized as built-in gates downstream.
pub fn keyword_kind(text: &str) -> Option<TokenKind> {
    let kind = match text {
        "OPENQASM" => TokenKind::OpenQasm,
        "include" => TokenKind::Include,
        "qubit" => TokenKind::Qubit,
        "qreg" => TokenKind::Qreg,
        "bit" => TokenKind::Bit,
        "creg" => TokenKind::Creg,
        "int" => TokenKind::Int,
        "uint" => TokenKind::Uint,
        "float" => TokenKind::Float,
        "angle" => TokenKind::Angle,
        "bool" => TokenKind::Bool,
        "complex" => TokenKind::Complex,
        "duration" => TokenKind::Duration,
        "stretch" => TokenKind::Stretch,
        "array" => TokenKind::Array,
        "const" => TokenKind::Const,
        "let" => TokenKind::Let,
        "input" => TokenKind::Input,
        "output" => TokenKind::Output,
        "gate" => TokenKind::Gate,
        "def" => TokenKind::Def,
        "extern" => TokenKind::Extern,
        "return" => TokenKind::Return,
        "if" => TokenKind::If,
        "else" => TokenKind::Else,
        "for" => TokenKind::For,
        "while" => TokenKind::While,
        "in" => TokenKind::In,
        "break" => TokenKind::Break,
        "continue" => TokenKind::Continue,
        "end" => TokenKind::End,
        "measure" => TokenKind::Measure,
        "reset" => TokenKind::Reset,
        "barrier" => TokenKind::Barrier,
        "delay" => TokenKind::Delay,
        "box" => TokenKind::Box,
        "durationof" => TokenKind::DurationOf,
        "sizeof" => TokenKind::SizeOf,
        "ctrl" => TokenKind::Ctrl,
        "negctrl" => TokenKind::NegCtrl,
        "inv" => TokenKind::Inv,
        "pow" => TokenKind::Pow,
        "true" => TokenKind::True,
        "false" => TokenKind::False,
        "defcal" => TokenKind::DefCal,
        "cal" => TokenKind::Cal,
        "defcalgrammar" => TokenKind::DefCalGrammar,
        "pragma" => TokenKind::Pragma,
        _ => return None,
    };
    Some(kind)
}

/// A classified, span-annotated lexeme. The covered text is recovered with
/// [`Token::lexeme`]; literal kinds additionally carry a parsed payload.
#[derive(Clone, Debug, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub span: SourceSpan,
    pub value: Option<TokenValue>,
}

impl Token {
    pub fn lexeme<'s>(&self, source: &'s str) -> &'s str {
        self.span.slice(source)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keyword_table_misses_builtin_gates() {
        assert_eq!(keyword_kind("U"), None);
        assert_eq!(keyword_kind("gphase"), None);
        assert_eq!(keyword_kind("barrier"), Some(TokenKind::Barrier));
    }

    #[test]
    fn literal_kind_classification() {
        assert!(TokenKind::TimingLiteral.is_literal());
        assert!(!TokenKind::Identifier.is_literal());
    }
}
