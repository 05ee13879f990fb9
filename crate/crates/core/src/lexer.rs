//! Hand-written maximal-munch lexer for OpenQASM 3.0 source text.
//!
//! Produces classified, span-annotated tokens and never aborts: malformed
//! input yields diagnostics (and an [`TokenKind::Error`] token where a
//! partial lexeme was consumed) and scanning continues. Handled forms:
//!
//! - keywords and identifiers (maximal munch, keyword table second)
//! - integer literals in decimal, hex (`0x`), octal (`0o`), binary (`0b`),
//!   with `_` digit separators
//! - float literals with optional exponent, imaginary literals (`im`
//!   suffix), timing literals (`dt`/`ns`/`us`/`µs`/`ms`/`s` suffix)
//! - bitstring literals (`"0101"`) and plain string literals
//! - hardware qubits (`$0`), annotation markers (`@name`), and
//!   `pragma`/`#pragma` with raw line capture
//! - line (`//`) and block (`/* */`) comments, skipped
//!
//! Every source byte outside comments and whitespace is covered by exactly
//! one token, so concatenating lexemes plus skipped regions reconstructs the
//! input byte-for-byte.

use crate::diag::{codes, Diagnostic};
use crate::span::SourceSpan;
use crate::token::{keyword_kind, TimeUnit, Token, TokenKind, TokenValue};

/// Tokenize `source`, returning all tokens in source order (terminated by
/// exactly one EOF token) plus any lexical diagnostics.
pub fn tokenize(source: &str) -> (Vec<Token>, Vec<Diagnostic>) {
    let mut scanner = Scanner::new(source);
    scanner.run();
    (scanner.tokens, scanner.diagnostics)
}

/// Rebuild the source from token lexemes plus the gaps between them.
/// Equality with the original input is the lossless-coverage invariant.
pub fn lossless_reconstruct(source: &str, tokens: &[Token]) -> String {
    let mut out = String::with_capacity(source.len());
    let mut prev_end = 0;
    for tok in tokens {
        out.push_str(&source[prev_end..tok.span.start_offset]);
        out.push_str(tok.lexeme(source));
        prev_end = tok.span.end_offset;
    }
    out.push_str(&source[prev_end..]);
    out
}

#[derive(Clone, Copy)]
struct Mark {
    offset: usize,
    line: u32,
    col: u32,
}

struct Scanner<'s> {
    source: &'s str,
    pos: usize,
    line: u32,
    col: u32,
    tokens: Vec<Token>,
    diagnostics: Vec<Diagnostic>,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

impl<'s> Scanner<'s> {
    fn new(source: &'s str) -> Self {
        Self {
            source,
            pos: 0,
            line: 1,
            col: 1,
            tokens: Vec::new(),
            diagnostics: Vec::new(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.source[self.pos..].chars().next()
    }

    fn peek_at(&self, n: usize) -> Option<char> {
        self.source[self.pos..].chars().nth(n)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn mark(&self) -> Mark {
        Mark {
            offset: self.pos,
            line: self.line,
            col: self.col,
        }
    }

    fn span_from(&self, m: Mark) -> SourceSpan {
        SourceSpan::new(m.offset, self.pos, m.line, m.col, self.line, self.col)
    }

    fn lexeme_from(&self, m: Mark) -> &'s str {
        &self.source[m.offset..self.pos]
    }

    fn push(&mut self, kind: TokenKind, m: Mark, value: Option<TokenValue>) {
        let span = self.span_from(m);
        self.tokens.push(Token { kind, span, value });
    }

    fn error(&mut self, message: impl Into<String>, span: SourceSpan) {
        self.diagnostics.push(Diagnostic::error(codes::E_LEX, message, span));
    }

    fn run(&mut self) {
        loop {
            self.skip_trivia();
            let m = self.mark();
            let Some(c) = self.peek() else {
                self.push(TokenKind::Eof, m, None);
                break;
            };
            match c {
                '0'..='9' => self.scan_numeric_literal(m),
                '.' if self.peek_at(1).is_some_and(|d| d.is_ascii_digit()) => {
                    self.scan_numeric_literal(m)
                }
                c if is_ident_start(c) => self.scan_identifier_or_keyword(m),
                '"' => self.scan_quoted_literal(m),
                '$' => self.scan_hardware_qubit(m),
                '#' => self.scan_hash_pragma(m),
                _ => self.scan_operator_or_punct(m, c),
            }
        }
    }

    fn skip_trivia(&mut self) {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('/') if self.peek_at(1) == Some('/') => {
                    while let Some(c) = self.peek() {
                        if c == '\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                Some('/') if self.peek_at(1) == Some('*') => {
                    let m = self.mark();
                    self.bump();
                    self.bump();
                    let mut closed = false;
                    while let Some(c) = self.bump() {
                        if c == '*' && self.peek() == Some('/') {
                            self.bump();
                            closed = true;
                            break;
                        }
                    }
                    if !closed {
                        let span = self.span_from(m);
                        self.error("unterminated block comment", span);
                    }
                }
                _ => break,
            }
        }
    }

    fn scan_identifier_or_keyword(&mut self, m: Mark) {
        while self.peek().is_some_and(is_ident_continue) {
            self.bump();
        }
        let text = self.lexeme_from(m);
        match keyword_kind(text) {
            Some(kind) => {
                self.push(kind, m, None);
                if kind == TokenKind::Pragma {
                    self.capture_rest_of_line();
                }
            }
            None => self.push(TokenKind::Identifier, m, None),
        }
    }

    fn scan_hardware_qubit(&mut self, m: Mark) {
        self.bump(); // '$'
        if !self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let span = self.span_from(m);
            self.error("'$' must be followed by a physical qubit index", span);
            return;
        }
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
        }
        self.push(TokenKind::HardwareQubit, m, None);
    }

    fn scan_hash_pragma(&mut self, m: Mark) {
        if self.source[self.pos..].starts_with("#pragma") {
            for _ in 0.."#pragma".len() {
                self.bump();
            }
            self.push(TokenKind::Pragma, m, None);
            self.capture_rest_of_line();
        } else {
            self.bump();
            let span = self.span_from(m);
            self.error("unrecognized character '#'", span);
        }
    }

    /// After `pragma` or `@annotation`, the remainder of the line is one raw
    /// content token (empty remainders produce no token).
    fn capture_rest_of_line(&mut self) {
        while self.peek().is_some_and(|c| c == ' ' || c == '\t') {
            self.bump();
        }
        let m = self.mark();
        let mut end = self.mark();
        while let Some(c) = self.peek() {
            if c == '\n' {
                break;
            }
            self.bump();
            if c != ' ' && c != '\t' && c != '\r' {
                end = self.mark();
            }
        }
        if end.offset > m.offset {
            let span =
                SourceSpan::new(m.offset, end.offset, m.line, m.col, end.line, end.col);
            self.tokens.push(Token {
                kind: TokenKind::RemainingLineContent,
                span,
                value: None,
            });
        }
    }

    fn scan_quoted_literal(&mut self, m: Mark) {
        self.bump(); // opening '"'
        let content_start = self.pos;
        loop {
            match self.peek() {
                None | Some('\n') => {
                    let span = self.span_from(m);
                    self.error("unterminated string literal", span);
                    self.push(TokenKind::Error, m, None);
                    return;
                }
                Some('"') => break,
                Some(_) => {
                    self.bump();
                }
            }
        }
        let content = self.source[content_start..self.pos].to_string();
        self.bump(); // closing '"'

        let is_bitstring =
            !content.is_empty() && content.chars().all(|c| matches!(c, '0' | '1' | '_'));
        if is_bitstring && content.chars().any(|c| c == '0' || c == '1') {
            let bits: String = content.chars().filter(|c| *c == '0' || *c == '1').collect();
            let width = bits.len() as u32;
            self.push(
                TokenKind::BitstringLiteral,
                m,
                Some(TokenValue::Bitstring { width, bits }),
            );
        } else {
            self.push(TokenKind::StringLiteral, m, Some(TokenValue::Str(content)));
        }
    }

    fn scan_numeric_literal(&mut self, m: Mark) {
        let first = self.peek().unwrap();
        if first == '0' && matches!(self.peek_at(1), Some('x' | 'X' | 'b' | 'B' | 'o')) {
            self.scan_radix_integer(m);
            return;
        }

        let mut is_float = false;
        if first == '.' {
            self.bump();
            is_float = true;
            self.eat_digits();
        } else {
            self.eat_digits();
            if self.peek() == Some('.') {
                self.bump();
                is_float = true;
                self.eat_digits();
            }
        }
        // Exponent only when 'e' is actually followed by digits.
        if matches!(self.peek(), Some('e' | 'E')) {
            let after = self.peek_at(1);
            let exp_ok = match after {
                Some(d) if d.is_ascii_digit() => true,
                Some('+' | '-') => self.peek_at(2).is_some_and(|d| d.is_ascii_digit()),
                _ => false,
            };
            if exp_ok {
                self.bump();
                if matches!(self.peek(), Some('+' | '-')) {
                    self.bump();
                }
                self.eat_digits();
                is_float = true;
            }
        }

        let digits: String = self.lexeme_from(m).chars().filter(|c| *c != '_').collect();

        if let Some(unit) = self.try_suffix(is_float, &digits, m) {
            match unit {
                Suffix::Imaginary => {
                    let value: f64 = digits.parse().unwrap_or(0.0);
                    self.push(
                        TokenKind::ImaginaryLiteral,
                        m,
                        Some(TokenValue::Imaginary(value)),
                    );
                }
                Suffix::Timing(unit) => {
                    let value: f64 = digits.parse().unwrap_or(0.0);
                    self.push(
                        TokenKind::TimingLiteral,
                        m,
                        Some(TokenValue::Timing { value, unit }),
                    );
                }
            }
            return;
        }

        if is_float {
            let value: f64 = digits.parse().unwrap_or(0.0);
            self.push(TokenKind::FloatLiteral, m, Some(TokenValue::Float(value)));
        } else {
            match digits.parse::<u64>() {
                Ok(value) => {
                    self.push(TokenKind::IntegerLiteral, m, Some(TokenValue::Integer(value)))
                }
                Err(_) => {
                    let span = self.span_from(m);
                    self.error("integer literal too large", span);
                    self.push(TokenKind::Error, m, None);
                }
            }
        }
    }

    fn eat_digits(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_digit() || c == '_') {
            self.bump();
        }
    }

    /// Recognize an `im` or timing-unit suffix directly after a decimal
    /// numeric literal. The suffix must end at a word boundary; otherwise the
    /// letters belong to a following identifier token.
    fn try_suffix(&mut self, _is_float: bool, _digits: &str, _m: Mark) -> Option<Suffix> {
        let boundary_after = |s: &Self, n: usize| !s.peek_at(n).is_some_and(is_ident_continue);
        match (self.peek(), self.peek_at(1)) {
            (Some('i'), Some('m')) if boundary_after(self, 2) => {
                self.bump();
                self.bump();
                Some(Suffix::Imaginary)
            }
            (Some('d'), Some('t')) if boundary_after(self, 2) => {
                self.bump();
                self.bump();
                Some(Suffix::Timing(TimeUnit::Dt))
            }
            (Some('n'), Some('s')) if boundary_after(self, 2) => {
                self.bump();
                self.bump();
                Some(Suffix::Timing(TimeUnit::Ns))
            }
            (Some('u'), Some('s')) if boundary_after(self, 2) => {
                self.bump();
                self.bump();
                Some(Suffix::Timing(TimeUnit::Us))
            }
            // MICRO SIGN µ: only ever valid as part of the `µs` suffix.
            (Some('\u{00B5}'), Some('s')) if boundary_after(self, 2) => {
                self.bump();
                self.bump();
                Some(Suffix::Timing(TimeUnit::Us))
            }
            (Some('m'), Some('s')) if boundary_after(self, 2) => {
                self.bump();
                self.bump();
                Some(Suffix::Timing(TimeUnit::Ms))
            }
            (Some('s'), _) if boundary_after(self, 1) => {
                self.bump();
                Some(Suffix::Timing(TimeUnit::S))
            }
            _ => None,
        }
    }

    fn scan_radix_integer(&mut self, m: Mark) {
        self.bump(); // '0'
        let radix_char = self.bump().unwrap();
        let radix: u32 = match radix_char {
            'x' | 'X' => 16,
            'o' => 8,
            _ => 2,
        };
        // Take the full alphanumeric run so a bad digit poisons one token
        // instead of splitting into surprise tokens.
        let run_start = self.pos;
        while self.peek().is_some_and(is_ident_continue) {
            self.bump();
        }
        let run = &self.source[run_start..self.pos];
        let digits: String = run.chars().filter(|c| *c != '_').collect();
        let valid = !digits.is_empty() && digits.chars().all(|c| c.is_digit(radix));
        if !valid {
            let span = self.span_from(m);
            let msg = if digits.is_empty() {
                format!("missing digits after '0{radix_char}'")
            } else {
                format!("invalid digit for base-{radix} literal")
            };
            self.error(msg, span);
            self.push(TokenKind::Error, m, None);
            return;
        }
        match u64::from_str_radix(&digits, radix) {
            Ok(value) => self.push(TokenKind::IntegerLiteral, m, Some(TokenValue::Integer(value))),
            Err(_) => {
                let span = self.span_from(m);
                self.error("integer literal too large", span);
                self.push(TokenKind::Error, m, None);
            }
        }
    }

    fn scan_operator_or_punct(&mut self, m: Mark, c: char) {
        use TokenKind::*;
        let one = |s: &mut Self, kind: TokenKind| {
            s.bump();
            s.push(kind, m, None);
        };
        let two = |s: &mut Self, kind: TokenKind| {
            s.bump();
            s.bump();
            s.push(kind, m, None);
        };
        let three = |s: &mut Self, kind: TokenKind| {
            s.bump();
            s.bump();
            s.bump();
            s.push(kind, m, None);
        };
        let n1 = self.peek_at(1);
        let n2 = self.peek_at(2);
        match c {
            '+' => match n1 {
                Some('=') => two(self, PlusEq),
                Some('+') => two(self, PlusPlus),
                _ => one(self, Plus),
            },
            '-' => match n1 {
                Some('>') => two(self, Arrow),
                Some('=') => two(self, MinusEq),
                _ => one(self, Minus),
            },
            '*' => match (n1, n2) {
                (Some('*'), Some('=')) => three(self, StarStarEq),
                (Some('*'), _) => two(self, StarStar),
                (Some('='), _) => two(self, StarEq),
                _ => one(self, Star),
            },
            '/' => match n1 {
                Some('=') => two(self, SlashEq),
                _ => one(self, Slash),
            },
            '%' => match n1 {
                Some('=') => two(self, PercentEq),
                _ => one(self, Percent),
            },
            '=' => match n1 {
                Some('=') => two(self, EqEq),
                _ => one(self, Eq),
            },
            '!' => match n1 {
                Some('=') => two(self, BangEq),
                _ => one(self, Bang),
            },
            '<' => match (n1, n2) {
                (Some('<'), Some('=')) => three(self, ShlEq),
                (Some('<'), _) => two(self, Shl),
                (Some('='), _) => two(self, LtEq),
                _ => one(self, Lt),
            },
            '>' => match (n1, n2) {
                (Some('>'), Some('=')) => three(self, ShrEq),
                (Some('>'), _) => two(self, Shr),
                (Some('='), _) => two(self, GtEq),
                _ => one(self, Gt),
            },
            '&' => match n1 {
                Some('&') => two(self, AmpAmp),
                Some('=') => two(self, AmpEq),
                _ => one(self, Amp),
            },
            '|' => match n1 {
                Some('|') => two(self, PipePipe),
                Some('=') => two(self, PipeEq),
                _ => one(self, Pipe),
            },
            '^' => match n1 {
                Some('=') => two(self, CaretEq),
                _ => one(self, Caret),
            },
            '~' => one(self, Tilde),
            '@' => {
                if n1.is_some_and(is_ident_start) {
                    self.scan_annotation_marker(m);
                } else {
                    one(self, At);
                }
            }
            '(' => one(self, LParen),
            ')' => one(self, RParen),
            '[' => one(self, LBracket),
            ']' => one(self, RBracket),
            '{' => one(self, LBrace),
            '}' => one(self, RBrace),
            ',' => one(self, Comma),
            ';' => one(self, Semicolon),
            ':' => one(self, Colon),
            '.' => one(self, Dot),
            _ => {
                self.bump();
                let span = self.span_from(m);
                self.error(format!("unrecognized character '{c}'"), span);
            }
        }
    }

    /// `@name` (dotted names allowed) glued to the `@`, e.g. `@openqasm.sim`.
    /// A spaced `@` is the gate-modifier operator instead.
    fn scan_annotation_marker(&mut self, m: Mark) {
        self.bump(); // '@'
        loop {
            while self.peek().is_some_and(is_ident_continue) {
                self.bump();
            }
            if self.peek() == Some('.') && self.peek_at(1).is_some_and(is_ident_start) {
                self.bump();
            } else {
                break;
            }
        }
        self.push(TokenKind::AnnotationMarker, m, None);
        self.capture_rest_of_line();
    }
}

enum Suffix {
    Imaginary,
    Timing(TimeUnit),
}
