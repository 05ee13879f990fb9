//! Type specifier parsing, shared by declarations, casts, subroutine
//! signatures, and `for` loop variables.

use crate::ast::{TypeKind, TypeSpec};
use crate::token::TokenKind;

use super::{expr, Abort, PResult, Parser};

pub(crate) fn parse_type_specifier(p: &mut Parser) -> PResult<TypeSpec> {
    let start = p.peek().span;
    let kind = match p.kind() {
        TokenKind::Bit => {
            p.advance();
            TypeKind::Bit {
                width: parse_designator(p)?.map(Box::new),
            }
        }
        TokenKind::Int => {
            p.advance();
            TypeKind::Int {
                width: parse_designator(p)?.map(Box::new),
            }
        }
        TokenKind::Uint => {
            p.advance();
            TypeKind::Uint {
                width: parse_designator(p)?.map(Box::new),
            }
        }
        TokenKind::Float => {
            p.advance();
            TypeKind::Float {
                width: parse_designator(p)?.map(Box::new),
            }
        }
        TokenKind::Angle => {
            p.advance();
            TypeKind::Angle {
                width: parse_designator(p)?.map(Box::new),
            }
        }
        TokenKind::Bool => {
            p.advance();
            TypeKind::Bool
        }
        TokenKind::Duration => {
            p.advance();
            TypeKind::Duration
        }
        TokenKind::Stretch => {
            p.advance();
            TypeKind::Stretch
        }
        TokenKind::Complex => {
            p.advance();
            let base = if p.eat(TokenKind::LBracket).is_some() {
                let base = parse_type_specifier(p)?;
                if !matches!(base.kind, TypeKind::Float { .. }) {
                    p.error_at(base.span, "complex base type must be float");
                }
                p.expect(TokenKind::RBracket, "']' closing complex base type")?;
                Some(Box::new(base))
            } else {
                None
            };
            TypeKind::Complex { base }
        }
        TokenKind::Qubit => {
            p.advance();
            TypeKind::Qubit {
                size: parse_designator(p)?.map(Box::new),
            }
        }
        TokenKind::Array => {
            p.advance();
            p.expect(TokenKind::LBracket, "'[' after array")?;
            let element = parse_type_specifier(p)?;
            if matches!(element.kind, TypeKind::Qubit { .. } | TypeKind::Array { .. }) {
                p.error_at(element.span, "array element must be a scalar classical type");
            }
            p.expect(TokenKind::Comma, "',' and dimensions in array type")?;
            let mut dimensions = Vec::new();
            loop {
                dimensions.push(expr::parse_expression(p, 0)?);
                if p.eat(TokenKind::Comma).is_none() {
                    break;
                }
            }
            p.expect(TokenKind::RBracket, "']' closing array type")?;
            TypeKind::Array {
                element: Box::new(element),
                dimensions,
            }
        }
        other => {
            let span = p.peek().span;
            p.error_at(span, format!("expected type, found {}", other.describe()));
            return Err(Abort);
        }
    };
    let span = start.join(&p.prev_span());
    Ok(TypeSpec::new(kind, span))
}

/// The optional `[width]` designator after a sized type keyword.
fn parse_designator(p: &mut Parser) -> PResult<Option<crate::ast::Expr>> {
    if p.eat(TokenKind::LBracket).is_none() {
        return Ok(None);
    }
    let width = expr::parse_expression(p, 0)?;
    p.expect(TokenKind::RBracket, "']' closing type width")?;
    Ok(Some(width))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::ExprKind;
    use crate::lexer::tokenize;

    fn parse_type(source: &str) -> (TypeSpec, Vec<crate::diag::Diagnostic>) {
        let (tokens, lex) = tokenize(source);
        assert!(lex.is_empty());
        let mut p = Parser::new(source, tokens);
        let ty = parse_type_specifier(&mut p).expect("type should parse");
        (ty, p.diagnostics)
    }

    #[test]
    fn widths_are_optional() {
        let (ty, d) = parse_type("int[32]");
        assert!(d.is_empty());
        match ty.kind {
            TypeKind::Int { width: Some(w) } => {
                assert!(matches!(w.kind, ExprKind::IntegerLit { value: 32 }))
            }
            other => panic!("{other:?}"),
        }
        let (ty, _) = parse_type("bit");
        assert!(matches!(ty.kind, TypeKind::Bit { width: None }));
    }

    #[test]
    fn complex_base() {
        let (ty, d) = parse_type("complex[float[64]]");
        assert!(d.is_empty());
        match ty.kind {
            TypeKind::Complex { base: Some(b) } => {
                assert!(matches!(b.kind, TypeKind::Float { width: Some(_) }))
            }
            other => panic!("{other:?}"),
        }
        let (_, d) = parse_type("complex[int[8]]");
        assert!(d[0].message.contains("must be float"));
    }

    #[test]
    fn array_type() {
        let (ty, d) = parse_type("array[int[8], 3, 4]");
        assert!(d.is_empty());
        match ty.kind {
            TypeKind::Array { element, dimensions } => {
                assert!(matches!(element.kind, TypeKind::Int { .. }));
                assert_eq!(dimensions.len(), 2);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn array_of_qubits_rejected() {
        let (_, d) = parse_type("array[qubit, 2]");
        assert!(d[0].message.contains("scalar classical"));
    }

    #[test]
    fn type_span_covers_designator() {
        let src = "float[64]";
        let (ty, _) = parse_type(src);
        assert_eq!(ty.span.slice(src), "float[64]");
    }
}
