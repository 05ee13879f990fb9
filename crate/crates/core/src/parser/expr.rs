//! Expression parsing by precedence climbing.
//!
//! Binding powers double the level numbers of the surface precedence table
//! so that left-associative operators get `(2n, 2n+1)` and the sole
//! right-associative operator `**` gets `(24, 23)`. Unary operators bind at
//! 22, between `**` and `*`, which is what makes `-2 ** 2` parse as
//! `-(2 ** 2)` while `-a * b` stays `(-a) * b`.

use crate::ast::{BinaryOp, Expr, ExprKind, UnaryOp};
use crate::span::SourceSpan;
use crate::token::{TokenKind, TokenValue};

use super::{stmt, types, Abort, PResult, Parser};

/// Right binding power of prefix `-`, `~`, `!`.
const UNARY_RBP: u8 = 22;

/// `(operator, left bp, right bp)` for binary operator tokens.
fn binary_binding(kind: TokenKind) -> Option<(BinaryOp, u8, u8)> {
    use BinaryOp::*;
    use TokenKind as T;
    Some(match kind {
        T::PipePipe => (Or, 2, 3),
        T::AmpAmp => (And, 4, 5),
        T::Pipe => (BitOr, 6, 7),
        T::Caret => (BitXor, 8, 9),
        T::Amp => (BitAnd, 10, 11),
        T::EqEq => (Eq, 12, 13),
        T::BangEq => (NotEq, 12, 13),
        T::Lt => (Lt, 14, 15),
        T::LtEq => (LtEq, 14, 15),
        T::Gt => (Gt, 14, 15),
        T::GtEq => (GtEq, 14, 15),
        T::Shl => (Shl, 16, 17),
        T::Shr => (Shr, 16, 17),
        T::Plus => (Add, 18, 19),
        T::Minus => (Sub, 18, 19),
        T::Star => (Mul, 20, 21),
        T::Slash => (Div, 20, 21),
        T::Percent => (Mod, 20, 21),
        T::StarStar => (Pow, 24, 23),
        _ => return None,
    })
}

/// Parse a full expression whose binary operators all bind at least as
/// tightly as `min_bp`. Entry point is `min_bp = 0`.
pub(crate) fn parse_expression(p: &mut Parser, min_bp: u8) -> PResult<Expr> {
    let lhs = parse_unary_or_primary(p)?;
    let lhs = parse_postfix(p, lhs)?;
    continue_binary(p, lhs, min_bp)
}

/// Precedence-climbing loop, resumable from an already-parsed left operand.
pub(crate) fn continue_binary(p: &mut Parser, mut lhs: Expr, min_bp: u8) -> PResult<Expr> {
    while let Some((op, lbp, rbp)) = binary_binding(p.kind()) {
        if lbp < min_bp {
            break;
        }
        p.advance();
        let rhs = parse_expression(p, rbp)?;
        let span = lhs.span.join(&rhs.span);
        lhs = Expr::new(
            ExprKind::Binary {
                op,
                left: Box::new(lhs),
                right: Box::new(rhs),
            },
            span,
        );
    }
    Ok(lhs)
}

/// A gate/measure operand: primary plus postfix, no binary operators.
pub(crate) fn parse_operand_expr(p: &mut Parser) -> PResult<Expr> {
    let e = parse_unary_or_primary(p)?;
    parse_postfix(p, e)
}

pub(crate) fn parse_unary_or_primary(p: &mut Parser) -> PResult<Expr> {
    let tok_span = p.peek().span;
    match p.kind() {
        TokenKind::Minus | TokenKind::Tilde | TokenKind::Bang => {
            let op = match p.kind() {
                TokenKind::Minus => UnaryOp::Neg,
                TokenKind::Tilde => UnaryOp::BitNot,
                _ => UnaryOp::Not,
            };
            p.advance();
            let operand = parse_expression(p, UNARY_RBP)?;
            let span = tok_span.join(&operand.span);
            Ok(Expr::new(
                ExprKind::Unary {
                    op,
                    operand: Box::new(operand),
                },
                span,
            ))
        }
        TokenKind::IntegerLiteral => {
            let tok = p.advance();
            let value = match tok.value {
                Some(TokenValue::Integer(v)) => v,
                _ => 0,
            };
            Ok(Expr::new(ExprKind::IntegerLit { value }, tok.span))
        }
        TokenKind::FloatLiteral => {
            let tok = p.advance();
            let value = match tok.value {
                Some(TokenValue::Float(v)) => v,
                _ => 0.0,
            };
            Ok(Expr::new(ExprKind::FloatLit { value }, tok.span))
        }
        TokenKind::ImaginaryLiteral => {
            let tok = p.advance();
            let value = match tok.value {
                Some(TokenValue::Imaginary(v)) => v,
                _ => 0.0,
            };
            Ok(Expr::new(ExprKind::ImaginaryLit { value }, tok.span))
        }
        TokenKind::TimingLiteral => {
            let tok = p.advance();
            let (value, unit) = match tok.value {
                Some(TokenValue::Timing { value, unit }) => (value, unit),
                _ => unreachable!("timing token always carries a value"),
            };
            Ok(Expr::new(ExprKind::TimingLit { value, unit }, tok.span))
        }
        TokenKind::BitstringLiteral => {
            let tok = p.advance();
            let (width, bits) = match tok.value {
                Some(TokenValue::Bitstring { width, bits }) => (width, bits),
                _ => unreachable!("bitstring token always carries a value"),
            };
            Ok(Expr::new(ExprKind::BitstringLit { width, bits }, tok.span))
        }
        TokenKind::True | TokenKind::False => {
            let value = p.at(TokenKind::True);
            let tok = p.advance();
            Ok(Expr::new(ExprKind::BooleanLit { value }, tok.span))
        }
        TokenKind::Identifier => {
            let tok = p.advance();
            let name = p.lexeme(&tok).to_string();
            Ok(Expr::new(ExprKind::Identifier { name }, tok.span))
        }
        TokenKind::HardwareQubit => {
            let tok = p.advance();
            let digits = &p.lexeme(&tok)[1..];
            let index = match digits.parse::<u32>() {
                Ok(i) => i,
                Err(_) => {
                    p.error_at(tok.span, "hardware qubit index out of range");
                    0
                }
            };
            Ok(Expr::new(ExprKind::HardwareQubit { index }, tok.span))
        }
        TokenKind::LParen => {
            let opener = p.advance();
            let mut inner = parse_expression(p, 0)?;
            match p.eat(TokenKind::RParen) {
                Some(closer) => {
                    // No paren node; the grouped expression absorbs the
                    // parenthesized extent.
                    inner.span = opener.span.join(&closer.span);
                    Ok(inner)
                }
                None => {
                    p.error_at(opener.span, "unclosed '(' in expression");
                    Err(Abort)
                }
            }
        }
        TokenKind::LBrace => {
            let opener = p.advance();
            let mut elements = Vec::new();
            if !p.at(TokenKind::RBrace) {
                loop {
                    elements.push(parse_expression(p, 0)?);
                    if p.eat(TokenKind::Comma).is_none() {
                        break;
                    }
                    if p.at(TokenKind::RBrace) {
                        let span = p.prev_span();
                        p.error_at(span, "trailing comma in array literal");
                        break;
                    }
                }
            }
            let closer = p.expect(TokenKind::RBrace, "'}' closing array literal")?;
            Ok(Expr::new(
                ExprKind::ArrayLiteral { elements },
                opener.span.join(&closer.span),
            ))
        }
        TokenKind::DurationOf => {
            p.advance();
            p.expect(TokenKind::LParen, "'(' after durationof")?;
            let body = stmt::parse_block(p)?;
            let closer = p.expect(TokenKind::RParen, "')' closing durationof")?;
            Ok(Expr::new(
                ExprKind::DurationOf { body },
                tok_span.join(&closer.span),
            ))
        }
        TokenKind::SizeOf => {
            p.advance();
            let opener = p.expect(TokenKind::LParen, "'(' after sizeof")?;
            let args = parse_argument_list(p, opener.span)?;
            Ok(Expr::new(
                ExprKind::SizeOf { args },
                tok_span.join(&p.prev_span()),
            ))
        }
        TokenKind::Measure => {
            p.advance();
            let target = parse_operand_expr(p)?;
            let span = tok_span.join(&target.span);
            Ok(Expr::new(
                ExprKind::MeasureExpr {
                    target: Box::new(target),
                },
                span,
            ))
        }
        // `pow` is a keyword for the gate modifier, but the standard library
        // also has classical pow(a, b); accept it as a call when '(' follows.
        TokenKind::Pow if p.nth_kind(1) == TokenKind::LParen => {
            p.advance();
            let opener = p.advance();
            let args = parse_argument_list(p, opener.span)?;
            Ok(Expr::new(
                ExprKind::Call {
                    callee: "pow".to_string(),
                    args,
                },
                tok_span.join(&p.prev_span()),
            ))
        }
        kind if kind.is_type_keyword() => {
            let target = types::parse_type_specifier(p)?;
            if !p.at(TokenKind::LParen) {
                let span = p.peek().span;
                p.error_at(span, "expected '(' after type in cast expression");
                return Err(Abort);
            }
            p.advance();
            let operand = parse_expression(p, 0)?;
            let closer = p.expect(TokenKind::RParen, "')' closing cast")?;
            let span = target.span.join(&closer.span);
            Ok(Expr::new(
                ExprKind::Cast {
                    target,
                    operand: Box::new(operand),
                },
                span,
            ))
        }
        other => {
            p.error_at(tok_span, format!("expected expression, found {}", other.describe()));
            Err(Abort)
        }
    }
}

/// Apply postfix index and call operators, tightest-binding of all.
pub(crate) fn parse_postfix(p: &mut Parser, mut base: Expr) -> PResult<Expr> {
    loop {
        match p.kind() {
            TokenKind::LBracket => {
                let opener = p.advance();
                if p.at(TokenKind::RBracket) {
                    let span = opener.span.join(&p.peek().span);
                    p.error_at(span, "empty index");
                    return Err(Abort);
                }
                let mut indices = Vec::new();
                loop {
                    indices.push(parse_index_entry(p)?);
                    if p.eat(TokenKind::Comma).is_none() {
                        break;
                    }
                    if p.at(TokenKind::RBracket) {
                        let span = p.prev_span();
                        p.error_at(span, "trailing comma in index");
                        break;
                    }
                }
                let closer = match p.eat(TokenKind::RBracket) {
                    Some(t) => t,
                    None => {
                        p.error_at(opener.span, "unclosed '[' in index");
                        return Err(Abort);
                    }
                };
                let span = base.span.join(&closer.span);
                base = Expr::new(
                    ExprKind::Index {
                        base: Box::new(base),
                        indices,
                    },
                    span,
                );
            }
            TokenKind::LParen => {
                let callee = match &base.kind {
                    ExprKind::Identifier { name } => name.clone(),
                    _ => {
                        p.error_at(base.span, "call target must be an identifier");
                        return Err(Abort);
                    }
                };
                let opener = p.advance();
                let args = parse_argument_list(p, opener.span)?;
                let span = base.span.join(&p.prev_span());
                base = Expr::new(ExprKind::Call { callee, args }, span);
            }
            _ => return Ok(base),
        }
    }
}

/// Comma-separated expressions up to `)`. The `(` is already consumed;
/// `opener` anchors the missing-parenthesis diagnostic.
pub(crate) fn parse_argument_list(p: &mut Parser, opener: SourceSpan) -> PResult<Vec<Expr>> {
    let mut args = Vec::new();
    if p.eat(TokenKind::RParen).is_some() {
        return Ok(args);
    }
    loop {
        args.push(parse_expression(p, 0)?);
        if p.eat(TokenKind::Comma).is_none() {
            break;
        }
        if p.at(TokenKind::RParen) {
            let span = p.prev_span();
            p.error_at(span, "trailing comma in argument list");
            break;
        }
    }
    if p.eat(TokenKind::RParen).is_none() {
        p.error_at(opener, "unclosed '(' in argument list");
        return Err(Abort);
    }
    Ok(args)
}

/// One entry of an index operator: a plain expression, or a range
/// `start : end` / `start : step : end` with every part optional.
pub(crate) fn parse_index_entry(p: &mut Parser) -> PResult<Expr> {
    let start_span = p.peek().span;
    let start = if p.at(TokenKind::Colon) {
        None
    } else {
        Some(parse_expression(p, 0)?)
    };
    if !p.at(TokenKind::Colon) {
        // Plain expression entry; `start` is present by construction.
        return Ok(start.expect("non-range entry has an expression"));
    }
    p.advance();
    let ends_part = |k: TokenKind| {
        matches!(
            k,
            TokenKind::Colon | TokenKind::RBracket | TokenKind::Comma | TokenKind::Eof
        )
    };
    let second = if ends_part(p.kind()) {
        None
    } else {
        Some(parse_expression(p, 0)?)
    };
    let (step, end) = if p.eat(TokenKind::Colon).is_some() {
        let third = if ends_part(p.kind()) {
            None
        } else {
            Some(parse_expression(p, 0)?)
        };
        (second, third)
    } else {
        (None, second)
    };
    let span = start_span.join(&p.prev_span());
    Ok(Expr::new(
        ExprKind::Range {
            start: start.map(Box::new),
            step: step.map(Box::new),
            end: end.map(Box::new),
        },
        span,
    ))
}
