//! Statement-level parsing. Dispatch is one token of lookahead, plus a
//! second token to split gate calls from assignments and expression
//! statements when a statement begins with an identifier.

use crate::ast::{
    AssignOp, DefParam, Expr, ExprKind, GateModifier, GateModifierKind, IoModifier, Stmt,
    StmtKind, TypeKind, Version,
};
use crate::diag::codes;
use crate::span::SourceSpan;
use crate::token::{Token, TokenKind, TokenValue};

use super::{expr, types, Abort, PResult, Parser};

pub(crate) fn parse_statement(p: &mut Parser) -> PResult<Option<Stmt>> {
    match p.kind() {
        TokenKind::Semicolon => {
            let span = p.peek().span;
            p.error_at(span, "empty statement");
            p.advance();
            Ok(None)
        }
        TokenKind::OpenQasm => {
            let span = p.peek().span;
            p.error_at(span, "OPENQASM version statement must come first");
            Err(Abort)
        }
        TokenKind::Include => parse_include(p).map(Some),
        TokenKind::Qubit => parse_qubit_decl(p).map(Some),
        TokenKind::Qreg => parse_qreg_decl(p).map(Some),
        TokenKind::Creg => parse_creg_decl(p).map(Some),
        TokenKind::Const => parse_const_decl(p).map(Some),
        TokenKind::Input | TokenKind::Output => parse_io_decl(p).map(Some),
        k if k.is_type_keyword() => parse_type_statement(p).map(Some),
        TokenKind::Gate => parse_gate_definition(p).map(Some),
        TokenKind::Measure => parse_measure_statement(p).map(Some),
        TokenKind::Reset => parse_reset(p).map(Some),
        TokenKind::Barrier => parse_barrier(p).map(Some),
        TokenKind::Delay => parse_delay(p).map(Some),
        TokenKind::Box => parse_box(p).map(Some),
        TokenKind::Def => parse_subroutine_definition(p).map(Some),
        TokenKind::Extern => parse_extern(p).map(Some),
        TokenKind::Return => parse_return(p).map(Some),
        TokenKind::If => parse_if(p).map(Some),
        TokenKind::For => parse_for(p).map(Some),
        TokenKind::While => parse_while(p).map(Some),
        TokenKind::Break => parse_bare_keyword(p, StmtKind::Break, "break").map(Some),
        TokenKind::Continue => parse_bare_keyword(p, StmtKind::Continue, "continue").map(Some),
        TokenKind::End => parse_bare_keyword(p, StmtKind::End, "end").map(Some),
        TokenKind::Let => parse_alias(p).map(Some),
        TokenKind::Pragma => parse_pragma(p).map(Some),
        TokenKind::AnnotationMarker => parse_annotation(p).map(Some),
        TokenKind::Cal => parse_cal(p).map(Some),
        TokenKind::DefCal => parse_defcal(p).map(Some),
        TokenKind::DefCalGrammar => parse_defcalgrammar(p).map(Some),
        TokenKind::Ctrl | TokenKind::NegCtrl | TokenKind::Inv | TokenKind::Pow
            if !(p.at(TokenKind::Pow) && p.nth_kind(1) == TokenKind::LParen
                && !pow_is_modifier(p)) =>
        {
            parse_modified_gate_call(p).map(Some)
        }
        _ => parse_expression_like_statement(p),
    }
}

/// `pow(` at statement level is almost always the gate modifier, but
/// `pow(2) @ x q;` and a bare classical call both start the same way. Scan
/// past the balanced parenthesis group: `@` next means modifier.
fn pow_is_modifier(p: &Parser) -> bool {
    let mut n = 2; // past `pow (`
    let mut depth = 1u32;
    loop {
        match p.nth_kind(n) {
            TokenKind::LParen => depth += 1,
            TokenKind::RParen => {
                depth -= 1;
                if depth == 0 {
                    return p.nth_kind(n + 1) == TokenKind::At;
                }
            }
            TokenKind::Eof | TokenKind::Semicolon => return false,
            _ => {}
        }
        n += 1;
    }
}

pub(crate) fn parse_version_statement(p: &mut Parser) -> PResult<(Version, Stmt)> {
    let start = p.peek().span;
    p.advance(); // OPENQASM
    let version = match p.kind() {
        TokenKind::FloatLiteral => {
            let tok = p.advance();
            let lex = p.lexeme(&tok);
            match parse_version_number(lex) {
                Some(v) => v,
                None => {
                    p.error_code_at(
                        codes::E_VERSION,
                        tok.span,
                        format!("invalid version number `{lex}`"),
                    );
                    return Err(Abort);
                }
            }
        }
        TokenKind::IntegerLiteral => {
            let tok = p.advance();
            match tok.value {
                Some(TokenValue::Integer(v)) if u32::try_from(v).is_ok() => Version {
                    major: v as u32,
                    minor: 0,
                },
                _ => {
                    p.error_code_at(codes::E_VERSION, tok.span, "invalid version number");
                    return Err(Abort);
                }
            }
        }
        _ => {
            let span = p.peek().span;
            p.error_at(span, "expected version number after OPENQASM");
            return Err(Abort);
        }
    };
    if version.major != 3 {
        let span = p.prev_span();
        p.error_code_at(
            codes::E_VERSION,
            span,
            format!("unsupported OpenQASM version {version}; this parser supports 3.x"),
        );
    }
    let semi = p.expect(TokenKind::Semicolon, "';' after version statement")?;
    let span = start.join(&semi.span);
    Ok((version, Stmt::new(StmtKind::VersionStmt { version }, span)))
}

fn parse_version_number(lexeme: &str) -> Option<Version> {
    let (major, minor) = lexeme.split_once('.')?;
    Some(Version {
        major: major.parse().ok()?,
        minor: minor.parse().ok()?,
    })
}

/// Brace-delimited statement list for subroutine bodies, control flow, and
/// `durationof` scopes.
pub(crate) fn parse_block(p: &mut Parser) -> PResult<Vec<Stmt>> {
    let opener = p.expect(TokenKind::LBrace, "'{'")?;
    let mut out = Vec::new();
    loop {
        match p.kind() {
            TokenKind::RBrace => {
                p.advance();
                return Ok(out);
            }
            TokenKind::Eof => {
                p.error_at(opener.span, "unclosed '{'");
                return Err(Abort);
            }
            _ => match parse_statement(p) {
                Ok(Some(s)) => out.push(s),
                Ok(None) => {}
                Err(Abort) => p.synchronize(),
            },
        }
    }
}

/// Gate and box bodies are purely quantum: gate calls (including gphase),
/// barrier, delay, and nested boxes. Anything else is reported and skipped.
fn parse_quantum_body(p: &mut Parser, ctx: &str) -> PResult<Vec<Stmt>> {
    let opener = p.expect(TokenKind::LBrace, &format!("'{{' opening {ctx} body"))?;
    let mut out = Vec::new();
    loop {
        match p.kind() {
            TokenKind::RBrace => {
                p.advance();
                return Ok(out);
            }
            TokenKind::Eof => {
                p.error_at(opener.span, format!("unclosed {ctx} body"));
                return Err(Abort);
            }
            TokenKind::Semicolon => {
                let span = p.peek().span;
                p.error_at(span, "empty statement");
                p.advance();
            }
            TokenKind::Barrier => match parse_barrier(p) {
                Ok(s) => out.push(s),
                Err(Abort) => p.synchronize(),
            },
            TokenKind::Delay => match parse_delay(p) {
                Ok(s) => out.push(s),
                Err(Abort) => p.synchronize(),
            },
            TokenKind::Box => match parse_box(p) {
                Ok(s) => out.push(s),
                Err(Abort) => p.synchronize(),
            },
            TokenKind::Ctrl | TokenKind::NegCtrl | TokenKind::Inv | TokenKind::Pow => {
                match parse_modified_gate_call(p) {
                    Ok(s) => out.push(s),
                    Err(Abort) => p.synchronize(),
                }
            }
            TokenKind::Identifier => match parse_expression_like_statement(p) {
                Ok(Some(s)) if matches!(s.kind, StmtKind::GateCall { .. }) => out.push(s),
                Ok(Some(s)) => {
                    p.error_at(
                        s.span,
                        format!("only quantum statements are allowed in a {ctx} body"),
                    );
                }
                Ok(None) => {}
                Err(Abort) => p.synchronize(),
            },
            _ => {
                let span = p.peek().span;
                p.error_at(
                    span,
                    format!("only quantum statements are allowed in a {ctx} body"),
                );
                p.synchronize();
            }
        }
    }
}

/// Statements that open with an identifier or a literal: gate calls,
/// assignments, and expression statements. Parses one postfix expression,
/// then decides from the next token.
fn parse_expression_like_statement(p: &mut Parser) -> PResult<Option<Stmt>> {
    let start = p.peek().span;

    if p.at(TokenKind::Identifier) && p.lexeme(p.peek()) == "switch" {
        p.error_code_at(
            codes::E_UNSUPPORTED,
            start,
            "switch statements are not supported (OpenQASM 3.1 feature)",
        );
        return Err(Abort);
    }

    // `name q ...` can only be a gate call; skip the expression machinery.
    if p.at(TokenKind::Identifier)
        && matches!(
            p.nth_kind(1),
            TokenKind::Identifier | TokenKind::HardwareQubit
        )
    {
        return parse_gate_call_tail(p, Vec::new(), start).map(Some);
    }

    let lhs = expr::parse_unary_or_primary(p)?;
    let lhs = expr::parse_postfix(p, lhs)?;

    match p.kind() {
        // A gate operand follows: the expression was really a gate-call
        // head like `rx(pi)` or `x[50ns]`.
        TokenKind::Identifier | TokenKind::HardwareQubit => {
            let Some((name, args, duration)) = decompose_gate_head(lhs.clone()) else {
                p.error_at(lhs.span, "expected ';' after expression");
                return Err(Abort);
            };
            let qubits = parse_operand_list(p)?;
            let semi = p.expect(TokenKind::Semicolon, "';' after gate call")?;
            Ok(Some(Stmt::new(
                StmtKind::GateCall {
                    modifiers: Vec::new(),
                    name,
                    args,
                    qubits,
                    duration,
                },
                start.join(&semi.span),
            )))
        }
        k if assign_op_of(k).is_some() => {
            if !matches!(lhs.kind, ExprKind::Identifier { .. } | ExprKind::Index { .. }) {
                p.error_at(lhs.span, "invalid assignment target");
            }
            let op = assign_op_of(k).expect("guard checked the operator");
            p.advance();
            let rvalue = expr::parse_expression(p, 0)?;
            let semi = p.expect(TokenKind::Semicolon, "';' after assignment")?;
            Ok(Some(Stmt::new(
                StmtKind::Assignment {
                    lvalue: lhs,
                    op,
                    rvalue,
                },
                start.join(&semi.span),
            )))
        }
        _ => {
            let full = expr::continue_binary(p, lhs, 0)?;
            let semi = p.expect(TokenKind::Semicolon, "';' after expression statement")?;
            let span = start.join(&semi.span);
            // `gphase(pi);` is a gate call with zero operands, not a
            // function call.
            let kind = match full.kind {
                ExprKind::Call { callee, args } if callee == "gphase" => StmtKind::GateCall {
                    modifiers: Vec::new(),
                    name: callee,
                    args,
                    qubits: Vec::new(),
                    duration: None,
                },
                other => StmtKind::ExpressionStmt {
                    expr: Expr::new(other, full.span),
                },
            };
            Ok(Some(Stmt::new(kind, span)))
        }
    }
}

fn assign_op_of(kind: TokenKind) -> Option<AssignOp> {
    Some(match kind {
        TokenKind::Eq => AssignOp::Assign,
        TokenKind::PlusEq => AssignOp::AddAssign,
        TokenKind::MinusEq => AssignOp::SubAssign,
        TokenKind::StarEq => AssignOp::MulAssign,
        TokenKind::SlashEq => AssignOp::DivAssign,
        TokenKind::PercentEq => AssignOp::ModAssign,
        TokenKind::StarStarEq => AssignOp::PowAssign,
        TokenKind::AmpEq => AssignOp::AndAssign,
        TokenKind::PipeEq => AssignOp::OrAssign,
        TokenKind::CaretEq => AssignOp::XorAssign,
        TokenKind::ShlEq => AssignOp::ShlAssign,
        TokenKind::ShrEq => AssignOp::ShrAssign,
        _ => return None,
    })
}

/// Recover `(name, args, duration)` from an expression that turned out to
/// head a gate call: `x`, `rx(pi)`, `x[50ns]`, or `rx(pi)[50ns]`.
fn decompose_gate_head(e: Expr) -> Option<(String, Vec<Expr>, Option<Expr>)> {
    match e.kind {
        ExprKind::Identifier { name } => Some((name, Vec::new(), None)),
        ExprKind::Call { callee, args } => Some((callee, args, None)),
        ExprKind::Index { base, mut indices }
            if indices.len() == 1 && !matches!(indices[0].kind, ExprKind::Range { .. }) =>
        {
            let duration = indices.pop().expect("length checked");
            match base.kind {
                ExprKind::Identifier { name } => Some((name, Vec::new(), Some(duration))),
                ExprKind::Call { callee, args } => Some((callee, args, Some(duration))),
                _ => None,
            }
        }
        _ => None,
    }
}

/// `ctrl @ ...`, `pow(2) @ ...` and friends, down to the terminating `;`.
fn parse_modified_gate_call(p: &mut Parser) -> PResult<Stmt> {
    let start = p.peek().span;
    let mut modifiers = Vec::new();
    while p.kind().is_gate_modifier() {
        let mstart = p.peek().span;
        let kind = match p.kind() {
            TokenKind::Ctrl | TokenKind::NegCtrl => {
                let neg = p.at(TokenKind::NegCtrl);
                p.advance();
                let count = if p.eat(TokenKind::LParen).is_some() {
                    let c = expr::parse_expression(p, 0)?;
                    p.expect(TokenKind::RParen, "')' closing control count")?;
                    Some(c)
                } else {
                    None
                };
                if neg {
                    GateModifierKind::NegCtrl { count }
                } else {
                    GateModifierKind::Ctrl { count }
                }
            }
            TokenKind::Inv => {
                p.advance();
                GateModifierKind::Inv
            }
            _ => {
                p.advance(); // pow
                if !p.at(TokenKind::LParen) {
                    let span = p.peek().span;
                    p.error_at(span, "pow modifier requires '(exponent)'");
                    return Err(Abort);
                }
                p.advance();
                let exponent = expr::parse_expression(p, 0)?;
                p.expect(TokenKind::RParen, "')' closing pow exponent")?;
                GateModifierKind::Pow { exponent }
            }
        };
        let mspan = mstart.join(&p.prev_span());
        modifiers.push(GateModifier { kind, span: mspan });
        p.expect(TokenKind::At, "'@' after gate modifier")?;
    }
    if !p.at(TokenKind::Identifier) {
        let span = p.peek().span;
        p.error_at(span, "modifier chain without gate name");
        return Err(Abort);
    }
    parse_gate_call_tail(p, modifiers, start)
}

/// From the gate name onward: `name (args)? [duration]? operands ;`.
fn parse_gate_call_tail(
    p: &mut Parser,
    modifiers: Vec<GateModifier>,
    start: SourceSpan,
) -> PResult<Stmt> {
    let name_tok = p.expect(TokenKind::Identifier, "gate name")?;
    let name = p.lexeme(&name_tok).to_string();
    let args = if p.at(TokenKind::LParen) {
        let opener = p.advance();
        expr::parse_argument_list(p, opener.span)?
    } else {
        Vec::new()
    };
    let duration = if p.eat(TokenKind::LBracket).is_some() {
        let d = expr::parse_expression(p, 0)?;
        p.expect(TokenKind::RBracket, "']' closing duration designator")?;
        Some(d)
    } else {
        None
    };
    let qubits = parse_operand_list(p)?;
    let semi = p.expect(TokenKind::Semicolon, "';' after gate call")?;
    Ok(Stmt::new(
        StmtKind::GateCall {
            modifiers,
            name,
            args,
            qubits,
            duration,
        },
        start.join(&semi.span),
    ))
}

fn is_gate_operand(e: &Expr) -> bool {
    matches!(
        e.kind,
        ExprKind::Identifier { .. } | ExprKind::Index { .. } | ExprKind::HardwareQubit { .. }
    )
}

/// Comma-separated qubit operands, possibly empty (global barrier etc.).
fn parse_operand_list(p: &mut Parser) -> PResult<Vec<Expr>> {
    let mut out = Vec::new();
    if p.at(TokenKind::Semicolon) {
        return Ok(out);
    }
    loop {
        let e = expr::parse_operand_expr(p)?;
        if !is_gate_operand(&e) {
            p.error_at(e.span, "invalid gate operand");
        }
        out.push(e);
        if p.eat(TokenKind::Comma).is_none() {
            break;
        }
        if p.at(TokenKind::Semicolon) {
            let span = p.prev_span();
            p.error_at(span, "trailing comma in operand list");
            break;
        }
    }
    Ok(out)
}

fn parse_include(p: &mut Parser) -> PResult<Stmt> {
    let start = p.peek().span;
    p.advance();
    let path = match p.kind() {
        TokenKind::StringLiteral | TokenKind::BitstringLiteral => {
            let tok = p.advance();
            p.lexeme(&tok).trim_matches('"').to_string()
        }
        _ => {
            let span = p.peek().span;
            p.error_at(span, "include path must be a string literal");
            return Err(Abort);
        }
    };
    let semi = p.expect(TokenKind::Semicolon, "';' after include")?;
    let span = start.join(&semi.span);
    if path != "stdgates.inc" {
        p.warn_at(
            codes::W_INCLUDE,
            span,
            format!("unresolved include \"{path}\"; only \"stdgates.inc\" is built in"),
        );
    }
    Ok(Stmt::new(StmtKind::IncludeStmt { path }, span))
}

fn parse_qubit_decl(p: &mut Parser) -> PResult<Stmt> {
    let start = p.peek().span;
    p.advance();
    let size = if p.eat(TokenKind::LBracket).is_some() {
        let e = expr::parse_expression(p, 0)?;
        p.expect(TokenKind::RBracket, "']' closing qubit size")?;
        Some(e)
    } else {
        None
    };
    let name_tok = p.expect(TokenKind::Identifier, "identifier in qubit declaration")?;
    let name = p.lexeme(&name_tok).to_string();
    if p.at(TokenKind::Eq) {
        let span = p.peek().span;
        p.error_at(span, "qubit declarations cannot have an initializer");
        return Err(Abort);
    }
    let semi = p.expect(TokenKind::Semicolon, "';' after qubit declaration")?;
    Ok(Stmt::new(
        StmtKind::QuantumDecl {
            name,
            size,
            legacy: false,
        },
        start.join(&semi.span),
    ))
}

fn parse_qreg_decl(p: &mut Parser) -> PResult<Stmt> {
    let start = p.peek().span;
    p.advance();
    let name_tok = p.expect(TokenKind::Identifier, "identifier in qreg declaration")?;
    let name = p.lexeme(&name_tok).to_string();
    let size = if p.eat(TokenKind::LBracket).is_some() {
        let e = expr::parse_expression(p, 0)?;
        p.expect(TokenKind::RBracket, "']' closing qreg size")?;
        Some(e)
    } else {
        None
    };
    let semi = p.expect(TokenKind::Semicolon, "';' after qreg declaration")?;
    Ok(Stmt::new(
        StmtKind::QuantumDecl {
            name,
            size,
            legacy: true,
        },
        start.join(&semi.span),
    ))
}

fn parse_creg_decl(p: &mut Parser) -> PResult<Stmt> {
    let start = p.peek().span;
    let kw = p.advance();
    let name_tok = p.expect(TokenKind::Identifier, "identifier in creg declaration")?;
    let name = p.lexeme(&name_tok).to_string();
    let width = if p.eat(TokenKind::LBracket).is_some() {
        let e = expr::parse_expression(p, 0)?;
        p.expect(TokenKind::RBracket, "']' closing creg size")?;
        Some(e)
    } else {
        None
    };
    let semi = p.expect(TokenKind::Semicolon, "';' after creg declaration")?;
    let ty = crate::ast::TypeSpec::new(
        TypeKind::Bit {
            width: width.map(Box::new),
        },
        kw.span,
    );
    Ok(Stmt::new(
        StmtKind::ClassicalDecl {
            ty,
            name,
            init: None,
            const_flag: false,
            io_modifier: None,
            legacy: true,
        },
        start.join(&semi.span),
    ))
}

fn parse_const_decl(p: &mut Parser) -> PResult<Stmt> {
    let start = p.peek().span;
    p.advance();
    finish_classical_decl(p, start, true, None)
}

fn parse_io_decl(p: &mut Parser) -> PResult<Stmt> {
    let start = p.peek().span;
    let io = if p.at(TokenKind::Input) {
        IoModifier::Input
    } else {
        IoModifier::Output
    };
    p.advance();
    finish_classical_decl(p, start, false, Some(io))
}

/// Statement beginning with a classical type keyword: a declaration when an
/// identifier follows the type, otherwise a cast expression statement.
fn parse_type_statement(p: &mut Parser) -> PResult<Stmt> {
    let start = p.peek().span;
    let ty = types::parse_type_specifier(p)?;
    if p.at(TokenKind::Identifier) {
        return finish_classical_decl_with_type(p, start, ty, false, None);
    }
    if !p.at(TokenKind::LParen) {
        let span = p.peek().span;
        p.error_at(span, "expected identifier or '(' after type");
        return Err(Abort);
    }
    p.advance();
    let operand = expr::parse_expression(p, 0)?;
    let closer = p.expect(TokenKind::RParen, "')' closing cast")?;
    let cast_span = ty.span.join(&closer.span);
    let cast = Expr::new(
        ExprKind::Cast {
            target: ty,
            operand: Box::new(operand),
        },
        cast_span,
    );
    let full = expr::parse_postfix(p, cast)?;
    let full = expr::continue_binary(p, full, 0)?;
    let semi = p.expect(TokenKind::Semicolon, "';' after expression statement")?;
    Ok(Stmt::new(
        StmtKind::ExpressionStmt { expr: full },
        start.join(&semi.span),
    ))
}

fn finish_classical_decl(
    p: &mut Parser,
    start: SourceSpan,
    const_flag: bool,
    io: Option<IoModifier>,
) -> PResult<Stmt> {
    let ty = types::parse_type_specifier(p)?;
    finish_classical_decl_with_type(p, start, ty, const_flag, io)
}

fn finish_classical_decl_with_type(
    p: &mut Parser,
    start: SourceSpan,
    ty: crate::ast::TypeSpec,
    const_flag: bool,
    io: Option<IoModifier>,
) -> PResult<Stmt> {
    if matches!(ty.kind, TypeKind::Qubit { .. }) {
        p.error_at(ty.span, "qubit declarations cannot be const, input, or output");
    }
    let name_tok = p.expect(TokenKind::Identifier, "identifier in declaration")?;
    let name = p.lexeme(&name_tok).to_string();
    let init = if p.eat(TokenKind::Eq).is_some() {
        Some(expr::parse_expression(p, 0)?)
    } else {
        None
    };
    let semi = p.expect(TokenKind::Semicolon, "';' after declaration")?;
    let span = start.join(&semi.span);
    if const_flag && init.is_none() {
        p.error_at(span, "const declaration requires an initializer");
    }
    if let Some(io) = io {
        if init.is_some() {
            p.error_at(
                span,
                format!("{} declaration cannot have an initializer", io.keyword()),
            );
        }
    }
    Ok(Stmt::new(
        StmtKind::ClassicalDecl {
            ty,
            name,
            init,
            const_flag,
            io_modifier: io,
            legacy: false,
        },
        span,
    ))
}

fn parse_gate_definition(p: &mut Parser) -> PResult<Stmt> {
    let start = p.peek().span;
    p.advance();
    let name_tok = p.expect(TokenKind::Identifier, "gate name")?;
    let name = p.lexeme(&name_tok).to_string();

    let mut named: Vec<(String, SourceSpan)> = Vec::new();
    let mut params = Vec::new();
    if p.eat(TokenKind::LParen).is_some() {
        if !p.at(TokenKind::RParen) {
            loop {
                let t = p.expect(TokenKind::Identifier, "gate parameter name")?;
                params.push(p.lexeme(&t).to_string());
                named.push((p.lexeme(&t).to_string(), t.span));
                if p.eat(TokenKind::Comma).is_none() {
                    break;
                }
                if p.at(TokenKind::RParen) {
                    let span = p.prev_span();
                    p.error_at(span, "trailing comma in gate parameters");
                    break;
                }
            }
        }
        p.expect(TokenKind::RParen, "')' closing gate parameters")?;
    }

    let mut qubits = Vec::new();
    if p.at(TokenKind::LBrace) {
        let span = p.peek().span;
        p.error_at(span, "gate definition requires at least one qubit");
    } else {
        loop {
            let t = p.expect(TokenKind::Identifier, "gate qubit name")?;
            qubits.push(p.lexeme(&t).to_string());
            named.push((p.lexeme(&t).to_string(), t.span));
            if p.eat(TokenKind::Comma).is_none() {
                break;
            }
        }
    }

    let mut seen: std::collections::HashMap<&str, SourceSpan> = std::collections::HashMap::new();
    for (n, span) in &named {
        if seen.insert(n.as_str(), *span).is_some() {
            p.error_at(*span, format!("duplicate name `{n}` in gate definition"));
        }
    }

    let body = parse_quantum_body(p, "gate")?;
    let span = start.join(&p.prev_span());
    Ok(Stmt::new(
        StmtKind::GateDef {
            name,
            params,
            qubits,
            body,
        },
        span,
    ))
}

fn parse_measure_statement(p: &mut Parser) -> PResult<Stmt> {
    let start = p.peek().span;
    p.advance();
    let target = expr::parse_operand_expr(p)?;
    if !is_gate_operand(&target) {
        p.error_at(target.span, "invalid measure target");
    }
    let destination = if p.eat(TokenKind::Arrow).is_some() {
        let d = expr::parse_operand_expr(p)?;
        if !matches!(d.kind, ExprKind::Identifier { .. } | ExprKind::Index { .. }) {
            p.error_at(d.span, "measure destination must be an lvalue");
        }
        Some(d)
    } else {
        None
    };
    let semi = p.expect(TokenKind::Semicolon, "';' after measure")?;
    Ok(Stmt::new(
        StmtKind::Measure {
            target,
            destination,
        },
        start.join(&semi.span),
    ))
}

fn parse_reset(p: &mut Parser) -> PResult<Stmt> {
    let start = p.peek().span;
    p.advance();
    let target = expr::parse_operand_expr(p)?;
    if !is_gate_operand(&target) {
        p.error_at(target.span, "invalid reset target");
    }
    let semi = p.expect(TokenKind::Semicolon, "';' after reset")?;
    Ok(Stmt::new(
        StmtKind::Reset { target },
        start.join(&semi.span),
    ))
}

fn parse_barrier(p: &mut Parser) -> PResult<Stmt> {
    let start = p.peek().span;
    p.advance();
    let operands = parse_operand_list(p)?;
    let semi = p.expect(TokenKind::Semicolon, "';' after barrier")?;
    Ok(Stmt::new(
        StmtKind::Barrier { operands },
        start.join(&semi.span),
    ))
}

fn parse_delay(p: &mut Parser) -> PResult<Stmt> {
    let start = p.peek().span;
    p.advance();
    if !p.at(TokenKind::LBracket) {
        let span = p.peek().span;
        p.error_at(span, "delay requires a '[duration]' designator");
        return Err(Abort);
    }
    p.advance();
    let duration = expr::parse_expression(p, 0)?;
    p.expect(TokenKind::RBracket, "']' closing delay duration")?;
    let operands = parse_operand_list(p)?;
    let semi = p.expect(TokenKind::Semicolon, "';' after delay")?;
    Ok(Stmt::new(
        StmtKind::Delay { duration, operands },
        start.join(&semi.span),
    ))
}

fn parse_box(p: &mut Parser) -> PResult<Stmt> {
    let start = p.peek().span;
    p.advance();
    let duration = if p.eat(TokenKind::LBracket).is_some() {
        let d = expr::parse_expression(p, 0)?;
        p.expect(TokenKind::RBracket, "']' closing box duration")?;
        Some(d)
    } else {
        None
    };
    let body = parse_quantum_body(p, "box")?;
    let span = start.join(&p.prev_span());
    Ok(Stmt::new(StmtKind::Box { duration, body }, span))
}

fn parse_subroutine_definition(p: &mut Parser) -> PResult<Stmt> {
    let start = p.peek().span;
    p.advance();
    let name_tok = p.expect(TokenKind::Identifier, "subroutine name")?;
    let name = p.lexeme(&name_tok).to_string();
    p.expect(TokenKind::LParen, "'(' after subroutine name")?;
    let mut params = Vec::new();
    if !p.at(TokenKind::RParen) {
        loop {
            let pstart = p.peek().span;
            if !(p.kind().is_type_keyword() || p.at(TokenKind::Qubit)) {
                p.error_at(pstart, "parameter requires a type");
                return Err(Abort);
            }
            let ty = types::parse_type_specifier(p)?;
            let nt = p.expect(TokenKind::Identifier, "parameter name")?;
            params.push(DefParam {
                ty,
                name: p.lexeme(&nt).to_string(),
                span: pstart.join(&nt.span),
            });
            if p.eat(TokenKind::Comma).is_none() {
                break;
            }
            if p.at(TokenKind::RParen) {
                let span = p.prev_span();
                p.error_at(span, "trailing comma in parameter list");
                break;
            }
        }
    }
    p.expect(TokenKind::RParen, "')' closing parameter list")?;
    let return_type = if p.eat(TokenKind::Arrow).is_some() {
        let ty = types::parse_type_specifier(p)?;
        if matches!(ty.kind, TypeKind::Qubit { .. }) {
            p.error_at(ty.span, "return type must be classical");
        }
        Some(ty)
    } else {
        None
    };
    let body = parse_block(p)?;
    let span = start.join(&p.prev_span());
    Ok(Stmt::new(
        StmtKind::SubroutineDef {
            name,
            params,
            return_type,
            body,
        },
        span,
    ))
}

fn parse_extern(p: &mut Parser) -> PResult<Stmt> {
    let start = p.peek().span;
    p.advance();
    let name_tok = p.expect(TokenKind::Identifier, "extern name")?;
    let name = p.lexeme(&name_tok).to_string();
    p.expect(TokenKind::LParen, "'(' after extern name")?;
    let mut param_types = Vec::new();
    if !p.at(TokenKind::RParen) {
        loop {
            let ty = types::parse_type_specifier(p)?;
            if matches!(ty.kind, TypeKind::Qubit { .. }) {
                p.error_at(ty.span, "extern parameters must be classical");
            }
            param_types.push(ty);
            if p.eat(TokenKind::Comma).is_none() {
                break;
            }
        }
    }
    p.expect(TokenKind::RParen, "')' closing extern parameters")?;
    let return_type = if p.eat(TokenKind::Arrow).is_some() {
        Some(types::parse_type_specifier(p)?)
    } else {
        None
    };
    let semi = p.expect(TokenKind::Semicolon, "';' after extern declaration")?;
    Ok(Stmt::new(
        StmtKind::ExternDecl {
            name,
            param_types,
            return_type,
        },
        start.join(&semi.span),
    ))
}

fn parse_return(p: &mut Parser) -> PResult<Stmt> {
    let start = p.peek().span;
    p.advance();
    let value = if p.at(TokenKind::Semicolon) {
        None
    } else {
        Some(expr::parse_expression(p, 0)?)
    };
    let semi = p.expect(TokenKind::Semicolon, "';' after return")?;
    Ok(Stmt::new(
        StmtKind::Return { value },
        start.join(&semi.span),
    ))
}

fn parse_if(p: &mut Parser) -> PResult<Stmt> {
    let start = p.peek().span;
    p.advance();
    p.expect(TokenKind::LParen, "'(' after if")?;
    let condition = expr::parse_expression(p, 0)?;
    p.expect(TokenKind::RParen, "')' closing if condition")?;
    let then_body = parse_body_or_single(p)?;
    let else_body = if p.eat(TokenKind::Else).is_some() {
        Some(parse_body_or_single(p)?)
    } else {
        None
    };
    let span = start.join(&p.prev_span());
    Ok(Stmt::new(
        StmtKind::If {
            condition,
            then_body,
            else_body,
        },
        span,
    ))
}

fn parse_while(p: &mut Parser) -> PResult<Stmt> {
    let start = p.peek().span;
    p.advance();
    p.expect(TokenKind::LParen, "'(' after while")?;
    let condition = expr::parse_expression(p, 0)?;
    p.expect(TokenKind::RParen, "')' closing while condition")?;
    let body = parse_body_or_single(p)?;
    let span = start.join(&p.prev_span());
    Ok(Stmt::new(StmtKind::While { condition, body }, span))
}

fn parse_for(p: &mut Parser) -> PResult<Stmt> {
    let start = p.peek().span;
    p.advance();
    if p.at(TokenKind::Identifier) {
        let span = p.peek().span;
        p.error_at(span, "for loop variable requires a type");
        return Err(Abort);
    }
    let loop_var_type = types::parse_type_specifier(p)?;
    let var_tok = p.expect(TokenKind::Identifier, "loop variable name")?;
    let loop_var = p.lexeme(&var_tok).to_string();
    p.expect(TokenKind::In, "'in' after loop variable")?;
    let iterable = match p.kind() {
        TokenKind::LBracket => {
            let opener = p.advance();
            let entry = expr::parse_index_entry(p)?;
            let closer = p.expect(TokenKind::RBracket, "']' closing range")?;
            if matches!(entry.kind, ExprKind::Range { .. }) {
                Expr::new(entry.kind, opener.span.join(&closer.span))
            } else {
                p.error_at(entry.span, "for range needs ':' (e.g. [0:9])");
                entry
            }
        }
        TokenKind::LBrace => {
            let opener = p.advance();
            let mut elements = Vec::new();
            if !p.at(TokenKind::RBrace) {
                loop {
                    elements.push(expr::parse_expression(p, 0)?);
                    if p.eat(TokenKind::Comma).is_none() {
                        break;
                    }
                }
            }
            let closer = p.expect(TokenKind::RBrace, "'}' closing set")?;
            Expr::new(
                ExprKind::SetLiteral { elements },
                opener.span.join(&closer.span),
            )
        }
        _ => {
            let e = expr::parse_expression(p, 0)?;
            if !matches!(e.kind, ExprKind::Identifier { .. }) {
                p.error_at(e.span, "for iterable must be a range, set, or identifier");
            }
            e
        }
    };
    let body = parse_body_or_single(p)?;
    let span = start.join(&p.prev_span());
    Ok(Stmt::new(
        StmtKind::For {
            loop_var_type,
            loop_var,
            iterable,
            body,
        },
        span,
    ))
}

fn parse_body_or_single(p: &mut Parser) -> PResult<Vec<Stmt>> {
    if p.at(TokenKind::LBrace) {
        parse_block(p)
    } else {
        match parse_statement(p)? {
            Some(s) => Ok(vec![s]),
            None => Ok(Vec::new()),
        }
    }
}

fn parse_bare_keyword(p: &mut Parser, kind: StmtKind, name: &str) -> PResult<Stmt> {
    let start = p.peek().span;
    p.advance();
    let semi = p.expect(TokenKind::Semicolon, &format!("';' after {name}"))?;
    Ok(Stmt::new(kind, start.join(&semi.span)))
}

fn parse_alias(p: &mut Parser) -> PResult<Stmt> {
    let start = p.peek().span;
    p.advance();
    let name_tok = p.expect(TokenKind::Identifier, "identifier after let")?;
    let name = p.lexeme(&name_tok).to_string();
    p.expect(TokenKind::Eq, "'=' in let statement")?;
    let mut parts = vec![expr::parse_expression(p, 0)?];
    while p.eat(TokenKind::PlusPlus).is_some() {
        parts.push(expr::parse_expression(p, 0)?);
    }
    let semi = p.expect(TokenKind::Semicolon, "';' after let statement")?;
    Ok(Stmt::new(
        StmtKind::AliasDecl { name, parts },
        start.join(&semi.span),
    ))
}

fn parse_pragma(p: &mut Parser) -> PResult<Stmt> {
    let start = p.peek().span;
    p.advance();
    let text = if p.at(TokenKind::RemainingLineContent) {
        let tok = p.advance();
        p.lexeme(&tok).to_string()
    } else {
        String::new()
    };
    let span = start.join(&p.prev_span());
    Ok(Stmt::new(StmtKind::Pragma { text }, span))
}

fn parse_annotation(p: &mut Parser) -> PResult<Stmt> {
    let marker = p.advance();
    let name = p.lexeme(&marker)[1..].to_string();
    let text = if p.at(TokenKind::RemainingLineContent) {
        let tok = p.advance();
        p.lexeme(&tok).to_string()
    } else {
        String::new()
    };
    if matches!(p.kind(), TokenKind::Eof | TokenKind::RBrace) {
        p.error_at(marker.span, "annotation must precede a statement");
        return Err(Abort);
    }
    let Some(statement) = parse_statement(p)? else {
        p.error_at(marker.span, "annotation must precede a statement");
        return Err(Abort);
    };
    let span = marker.span.join(&statement.span);
    Ok(Stmt::new(
        StmtKind::Annotation {
            name,
            text,
            statement: Box::new(statement),
        },
        span,
    ))
}

fn parse_defcalgrammar(p: &mut Parser) -> PResult<Stmt> {
    let start = p.peek().span;
    p.advance();
    let name = match p.kind() {
        TokenKind::StringLiteral | TokenKind::BitstringLiteral => {
            let tok = p.advance();
            p.lexeme(&tok).trim_matches('"').to_string()
        }
        _ => {
            let span = p.peek().span;
            p.error_at(span, "defcalgrammar requires a string literal");
            return Err(Abort);
        }
    };
    let semi = p.expect(TokenKind::Semicolon, "';' after defcalgrammar")?;
    Ok(Stmt::new(
        StmtKind::CalGrammar { name },
        start.join(&semi.span),
    ))
}

fn parse_cal(p: &mut Parser) -> PResult<Stmt> {
    let start = p.peek().span;
    p.advance();
    let opener = p.expect(TokenKind::LBrace, "'{' after cal")?;
    let raw = capture_balanced(p, &opener, "cal")?;
    let span = start.join(&p.prev_span());
    Ok(Stmt::new(StmtKind::CalBlock { raw }, span))
}

fn parse_defcal(p: &mut Parser) -> PResult<Stmt> {
    let start = p.peek().span;
    p.advance();
    let sig_start = p.peek().span.start_offset;
    while !matches!(
        p.kind(),
        TokenKind::LBrace | TokenKind::Eof | TokenKind::Semicolon
    ) {
        p.advance();
    }
    if !p.at(TokenKind::LBrace) {
        p.error_at(start, "expected '{' in defcal definition");
        return Err(Abort);
    }
    let sig_end = p.peek().span.start_offset;
    let signature = p.slice(sig_start, sig_end).trim().to_string();
    let opener = p.advance();
    let raw = capture_balanced(p, &opener, "defcal")?;
    let span = start.join(&p.prev_span());
    Ok(Stmt::new(
        StmtKind::DefcalBlock { signature, raw },
        span,
    ))
}

/// Consume tokens through the `}` matching `opener` and return the raw
/// source text between the braces, uninterpreted.
fn capture_balanced(p: &mut Parser, opener: &Token, ctx: &str) -> PResult<String> {
    let content_start = opener.span.end_offset;
    let mut depth = 1u32;
    loop {
        match p.kind() {
            TokenKind::Eof => {
                p.error_at(opener.span, format!("unbalanced braces in {ctx} block"));
                return Err(Abort);
            }
            TokenKind::LBrace => {
                depth += 1;
                p.advance();
            }
            TokenKind::RBrace => {
                depth -= 1;
                let t = p.advance();
                if depth == 0 {
                    return Ok(p.slice(content_start, t.span.start_offset).trim().to_string());
                }
            }
            _ => {
                p.advance();
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexer::tokenize;
    use crate::parser::{parse_program, ParseOutcome};

    fn parse(source: &str) -> ParseOutcome {
        let (tokens, lex) = tokenize(source);
        assert!(lex.is_empty(), "lex diagnostics: {lex:?}");
        parse_program(source, tokens)
    }

    fn parse_ok(source: &str) -> Vec<Stmt> {
        let out = parse(source);
        let errors: Vec<_> = out.diagnostics.iter().filter(|d| d.is_error()).collect();
        assert!(errors.is_empty(), "{source}: {errors:?}");
        out.program.statements
    }

    fn first_error(source: &str) -> crate::diag::Diagnostic {
        let out = parse(source);
        out.diagnostics
            .into_iter()
            .find(|d| d.is_error())
            .unwrap_or_else(|| panic!("expected an error for {source}"))
    }

    #[test]
    fn quantum_declarations() {
        let stmts = parse_ok("qubit q; qubit[2] r;");
        match &stmts[0].kind {
            StmtKind::QuantumDecl { name, size, legacy } => {
                assert_eq!(name, "q");
                assert!(size.is_none());
                assert!(!legacy);
            }
            other => panic!("{other:?}"),
        }
        match &stmts[1].kind {
            StmtKind::QuantumDecl { size: Some(e), .. } => {
                assert!(matches!(e.kind, ExprKind::IntegerLit { value: 2 }))
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn legacy_qreg_creg_normalize() {
        let stmts = parse_ok("qreg q[5]; creg c[5];");
        assert!(matches!(
            &stmts[0].kind,
            StmtKind::QuantumDecl { legacy: true, size: Some(_), .. }
        ));
        match &stmts[1].kind {
            StmtKind::ClassicalDecl { ty, legacy, .. } => {
                assert!(legacy);
                assert!(matches!(ty.kind, TypeKind::Bit { width: Some(_) }));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn qubit_initializer_rejected() {
        let d = first_error("qubit q = 0;");
        assert!(d.message.contains("initializer"));
    }

    #[test]
    fn classical_declarations() {
        let stmts = parse_ok("int[32] i = 5; const float f = 2.5; input bit b;");
        match &stmts[0].kind {
            StmtKind::ClassicalDecl { ty, name, init, .. } => {
                assert!(matches!(ty.kind, TypeKind::Int { width: Some(_) }));
                assert_eq!(name, "i");
                assert!(init.is_some());
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            &stmts[1].kind,
            StmtKind::ClassicalDecl { const_flag: true, .. }
        ));
        assert!(matches!(
            &stmts[2].kind,
            StmtKind::ClassicalDecl { io_modifier: Some(IoModifier::Input), .. }
        ));
    }

    #[test]
    fn const_requires_initializer() {
        let d = first_error("const int k;");
        assert!(d.message.contains("initializer"));
    }

    #[test]
    fn input_with_initializer_rejected() {
        let d = first_error("input bit b = 1;");
        assert!(d.message.contains("cannot have an initializer"));
    }

    #[test]
    fn cast_expression_statement() {
        let stmts = parse_ok("bit c; int[8](c);");
        match &stmts[1].kind {
            StmtKind::ExpressionStmt { expr } => {
                assert!(matches!(expr.kind, ExprKind::Cast { .. }))
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn gate_definition_forms() {
        let stmts = parse_ok("gate h2 a, b { h a; h b; }\ngate rz2(t) a { rz(t) a; }");
        match &stmts[0].kind {
            StmtKind::GateDef { name, params, qubits, body } => {
                assert_eq!(name, "h2");
                assert!(params.is_empty());
                assert_eq!(qubits, &["a", "b"]);
                assert_eq!(body.len(), 2);
            }
            other => panic!("{other:?}"),
        }
        match &stmts[1].kind {
            StmtKind::GateDef { params, body, .. } => {
                assert_eq!(params, &["t"]);
                assert!(matches!(&body[0].kind, StmtKind::GateCall { args, .. } if args.len() == 1));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn classical_statement_in_gate_body_rejected() {
        let out = parse("gate bad a { int i; }");
        assert!(!out.success);
        let d = out.diagnostics.iter().find(|d| d.is_error()).unwrap();
        assert!(d.message.contains("only quantum statements"), "{d:?}");
        // The definition itself survives with an empty body.
        assert!(matches!(
            &out.program.statements[0].kind,
            StmtKind::GateDef { body, .. } if body.is_empty()
        ));
    }

    #[test]
    fn duplicate_gate_names_rejected() {
        let d = first_error("gate g(a) a { rz(a) a; }");
        assert!(d.message.contains("duplicate name"));
    }

    #[test]
    fn gphase_allowed_in_gate_body() {
        let stmts = parse_ok("gate p2(t) a { gphase(t / 2); x a; }");
        match &stmts[0].kind {
            StmtKind::GateDef { body, .. } => {
                assert!(matches!(
                    &body[0].kind,
                    StmtKind::GateCall { name, qubits, .. } if name == "gphase" && qubits.is_empty()
                ));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn gate_calls() {
        let stmts = parse_ok("h q; cx q[0], q[1]; rx(pi / 2) q[1]; x $0;");
        match &stmts[0].kind {
            StmtKind::GateCall { name, qubits, args, .. } => {
                assert_eq!(name, "h");
                assert_eq!(qubits.len(), 1);
                assert!(args.is_empty());
            }
            other => panic!("{other:?}"),
        }
        match &stmts[2].kind {
            StmtKind::GateCall { name, args, .. } => {
                assert_eq!(name, "rx");
                assert_eq!(args.len(), 1);
            }
            other => panic!("{other:?}"),
        }
        match &stmts[3].kind {
            StmtKind::GateCall { qubits, .. } => {
                assert!(matches!(qubits[0].kind, ExprKind::HardwareQubit { index: 0 }))
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn modifier_chain_in_source_order() {
        let stmts = parse_ok("inv @ pow(2) @ s q;");
        match &stmts[0].kind {
            StmtKind::GateCall { modifiers, name, .. } => {
                assert_eq!(name, "s");
                assert_eq!(modifiers.len(), 2);
                assert!(matches!(modifiers[0].kind, GateModifierKind::Inv));
                assert!(matches!(modifiers[1].kind, GateModifierKind::Pow { .. }));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn parameterized_ctrl() {
        let stmts = parse_ok("ctrl(2) @ x a, b, c;");
        match &stmts[0].kind {
            StmtKind::GateCall { modifiers, qubits, .. } => {
                assert!(matches!(
                    &modifiers[0].kind,
                    GateModifierKind::Ctrl { count: Some(c) }
                        if matches!(c.kind, ExprKind::IntegerLit { value: 2 })
                ));
                assert_eq!(qubits.len(), 3);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn pow_without_parenthesis_rejected() {
        let d = first_error("pow @ s q;");
        assert!(d.message.contains("pow modifier"));
    }

    #[test]
    fn modifier_without_gate_name_rejected() {
        let d = first_error("ctrl @ 2 q;");
        assert!(d.message.contains("modifier chain without gate name"));
    }

    #[test]
    fn gphase_statement_has_zero_operands() {
        let stmts = parse_ok("gphase(pi / 4);");
        assert!(matches!(
            &stmts[0].kind,
            StmtKind::GateCall { name, qubits, args, .. }
                if name == "gphase" && qubits.is_empty() && args.len() == 1
        ));
    }

    #[test]
    fn controlled_gphase_takes_operands() {
        let stmts = parse_ok("ctrl @ gphase(pi) q;");
        assert!(matches!(
            &stmts[0].kind,
            StmtKind::GateCall { name, qubits, .. } if name == "gphase" && qubits.len() == 1
        ));
    }

    #[test]
    fn gate_call_duration_designator() {
        let stmts = parse_ok("x[50ns] q;");
        match &stmts[0].kind {
            StmtKind::GateCall { name, duration: Some(d), .. } => {
                assert_eq!(name, "x");
                assert!(matches!(d.kind, ExprKind::TimingLit { .. }));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn classical_pow_call_statement() {
        let stmts = parse_ok("int x = 2; x = pow(2, 3);");
        assert!(matches!(
            &stmts[1].kind,
            StmtKind::Assignment { rvalue, .. }
                if matches!(&rvalue.kind, ExprKind::Call { callee, .. } if callee == "pow")
        ));
    }

    #[test]
    fn measure_forms() {
        let stmts = parse_ok("measure q -> c; measure q; c[0] = measure q[0];");
        assert!(matches!(
            &stmts[0].kind,
            StmtKind::Measure { destination: Some(_), .. }
        ));
        assert!(matches!(
            &stmts[1].kind,
            StmtKind::Measure { destination: None, .. }
        ));
        match &stmts[2].kind {
            StmtKind::Assignment { lvalue, op, rvalue } => {
                assert!(matches!(lvalue.kind, ExprKind::Index { .. }));
                assert_eq!(*op, AssignOp::Assign);
                assert!(matches!(rvalue.kind, ExprKind::MeasureExpr { .. }));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn measure_destination_must_be_lvalue() {
        let d = first_error("measure q -> 5;");
        assert!(d.message.contains("lvalue"));
    }

    #[test]
    fn timing_statements() {
        let stmts = parse_ok("barrier; barrier q, r; delay[100ns] q[0]; reset q;");
        assert!(matches!(&stmts[0].kind, StmtKind::Barrier { operands } if operands.is_empty()));
        assert!(matches!(&stmts[1].kind, StmtKind::Barrier { operands } if operands.len() == 2));
        match &stmts[2].kind {
            StmtKind::Delay { duration, operands } => {
                assert!(matches!(duration.kind, ExprKind::TimingLit { .. }));
                assert_eq!(operands.len(), 1);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(&stmts[3].kind, StmtKind::Reset { .. }));
    }

    #[test]
    fn delay_requires_designator() {
        let d = first_error("delay q;");
        assert!(d.message.contains("designator"));
    }

    #[test]
    fn box_forms() {
        let stmts = parse_ok("box { x q; }\nbox [250ns] { delay[100ns] q; }");
        assert!(matches!(
            &stmts[0].kind,
            StmtKind::Box { duration: None, body } if body.len() == 1
        ));
        assert!(matches!(
            &stmts[1].kind,
            StmtKind::Box { duration: Some(_), .. }
        ));
    }

    #[test]
    fn box_body_is_quantum_only() {
        let out = parse("box { int i = 1; }");
        assert!(!out.success);
        assert!(out
            .diagnostics
            .iter()
            .any(|d| d.message.contains("box body")));
    }

    #[test]
    fn subroutine_definitions() {
        let stmts =
            parse_ok("def f() { }\ndef g(qubit q) -> bit { return measure q; }\ndef h(int[8] a, qubit q) { x q; }");
        assert!(matches!(
            &stmts[0].kind,
            StmtKind::SubroutineDef { params, return_type: None, body, .. }
                if params.is_empty() && body.is_empty()
        ));
        match &stmts[1].kind {
            StmtKind::SubroutineDef { params, return_type, body, .. } => {
                assert_eq!(params.len(), 1);
                assert!(matches!(params[0].ty.kind, TypeKind::Qubit { .. }));
                assert!(matches!(
                    return_type.as_ref().unwrap().kind,
                    TypeKind::Bit { .. }
                ));
                assert!(matches!(
                    &body[0].kind,
                    StmtKind::Return { value: Some(v) }
                        if matches!(v.kind, ExprKind::MeasureExpr { .. })
                ));
            }
            other => panic!("{other:?}"),
        }
        match &stmts[2].kind {
            StmtKind::SubroutineDef { params, .. } => assert_eq!(params.len(), 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn untyped_parameter_rejected() {
        let d = first_error("def h(a) {}");
        assert!(d.message.contains("parameter requires a type"));
    }

    #[test]
    fn extern_declaration() {
        let stmts = parse_ok("extern noise(int[32], float) -> bit;");
        match &stmts[0].kind {
            StmtKind::ExternDecl { name, param_types, return_type } => {
                assert_eq!(name, "noise");
                assert_eq!(param_types.len(), 2);
                assert!(return_type.is_some());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn control_flow() {
        let stmts = parse_ok(
            "bit c; if (c == 1) x q; while (c) {} if (c) { x q; } else { y q; } break; continue; end;",
        );
        match &stmts[1].kind {
            StmtKind::If { condition, then_body, else_body } => {
                assert!(matches!(
                    condition.kind,
                    ExprKind::Binary { op: crate::ast::BinaryOp::Eq, .. }
                ));
                assert_eq!(then_body.len(), 1);
                assert!(else_body.is_none());
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            &stmts[2].kind,
            StmtKind::While { body, .. } if body.is_empty()
        ));
        assert!(matches!(
            &stmts[3].kind,
            StmtKind::If { else_body: Some(e), .. } if e.len() == 1
        ));
        assert!(matches!(&stmts[4].kind, StmtKind::Break));
        assert!(matches!(&stmts[5].kind, StmtKind::Continue));
        assert!(matches!(&stmts[6].kind, StmtKind::End));
    }

    #[test]
    fn else_if_chains_nest() {
        let stmts = parse_ok("bit c; if (c == 0) x q; else if (c == 1) y q; else z q;");
        match &stmts[1].kind {
            StmtKind::If { else_body: Some(e), .. } => match &e[0].kind {
                StmtKind::If { else_body: Some(inner), .. } => assert_eq!(inner.len(), 1),
                other => panic!("{other:?}"),
            },
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn for_iterable_forms() {
        let stmts =
            parse_ok("for int i in [0:9] { x q; }\nfor uint k in {1, 2, 3} x q;\nbit[4] m;\nfor int j in m x q;");
        match &stmts[0].kind {
            StmtKind::For { loop_var_type, loop_var, iterable, body } => {
                assert!(matches!(loop_var_type.kind, TypeKind::Int { .. }));
                assert_eq!(loop_var, "i");
                match &iterable.kind {
                    ExprKind::Range { start, step, end } => {
                        assert!(start.is_some() && step.is_none() && end.is_some());
                    }
                    other => panic!("{other:?}"),
                }
                assert_eq!(body.len(), 1);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            &stmts[1].kind,
            StmtKind::For { iterable, .. }
                if matches!(&iterable.kind, ExprKind::SetLiteral { elements } if elements.len() == 3)
        ));
        assert!(matches!(
            &stmts[3].kind,
            StmtKind::For { iterable, .. }
                if matches!(iterable.kind, ExprKind::Identifier { .. })
        ));
    }

    #[test]
    fn for_with_stride() {
        let stmts = parse_ok("for int i in [0:2:8] x q;");
        match &stmts[0].kind {
            StmtKind::For { iterable, .. } => match &iterable.kind {
                ExprKind::Range { start, step, end } => {
                    assert!(start.is_some() && step.is_some() && end.is_some())
                }
                other => panic!("{other:?}"),
            },
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn for_requires_loop_variable_type() {
        let d = first_error("for i in [0:9] x q;");
        assert!(d.message.contains("requires a type"));
    }

    #[test]
    fn alias_declarations() {
        let stmts = parse_ok("let a = q; let b = q[0:1] ++ r[2:3];");
        assert!(matches!(
            &stmts[0].kind,
            StmtKind::AliasDecl { parts, .. } if parts.len() == 1
        ));
        match &stmts[1].kind {
            StmtKind::AliasDecl { name, parts } => {
                assert_eq!(name, "b");
                assert_eq!(parts.len(), 2);
                assert!(matches!(parts[0].kind, ExprKind::Index { .. }));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn alias_requires_identifier() {
        let d = first_error("let = q;");
        assert!(d.message.contains("identifier after let"));
    }

    #[test]
    fn include_statements() {
        let out = parse("include \"stdgates.inc\";");
        assert!(out.success);
        assert!(!out.diagnostics.iter().any(|d| d.code == codes::W_INCLUDE));
        assert!(matches!(
            &out.program.statements[0].kind,
            StmtKind::IncludeStmt { path } if path == "stdgates.inc"
        ));

        let out = parse("include \"other.qasm\";");
        assert!(out.success);
        assert!(out.diagnostics.iter().any(|d| d.code == codes::W_INCLUDE));

        let d = first_error("include stdgates;");
        assert!(d.message.contains("string literal"));
    }

    #[test]
    fn assignments() {
        let stmts = parse_ok("int i; i = 1; i += 2; i **= 3; i <<= 1;");
        let ops: Vec<_> = stmts[1..]
            .iter()
            .map(|s| match &s.kind {
                StmtKind::Assignment { op, .. } => *op,
                other => panic!("{other:?}"),
            })
            .collect();
        assert_eq!(
            ops,
            vec![
                AssignOp::Assign,
                AssignOp::AddAssign,
                AssignOp::PowAssign,
                AssignOp::ShlAssign
            ]
        );
    }

    #[test]
    fn invalid_assignment_target() {
        let d = first_error("f(x) = 1;");
        assert!(d.message.contains("assignment target"));
    }

    #[test]
    fn pragma_statement() {
        let stmts = parse_ok("pragma qiskit.simulator noise model \"qpu1.noise\"");
        assert!(matches!(
            &stmts[0].kind,
            StmtKind::Pragma { text } if text == "qiskit.simulator noise model \"qpu1.noise\""
        ));
    }

    #[test]
    fn annotation_wraps_following_statement() {
        let stmts = parse_ok("@reversible\ngate f a { x a; }");
        match &stmts[0].kind {
            StmtKind::Annotation { name, text, statement } => {
                assert_eq!(name, "reversible");
                assert!(text.is_empty());
                assert!(matches!(statement.kind, StmtKind::GateDef { .. }));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn annotation_with_payload_and_dotted_name() {
        let stmts = parse_ok("@openqasm.sim.noise depolarizing 0.01\nx q;");
        match &stmts[0].kind {
            StmtKind::Annotation { name, text, .. } => {
                assert_eq!(name, "openqasm.sim.noise");
                assert_eq!(text, "depolarizing 0.01");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn dangling_annotation_rejected() {
        let d = first_error("@anno");
        assert!(d.message.contains("annotation must precede"));
    }

    #[test]
    fn cal_blocks_capture_raw_text() {
        let stmts = parse_ok("cal { }\ncal { shift_phase(drive, 0.1); }");
        assert!(matches!(
            &stmts[0].kind,
            StmtKind::CalBlock { raw } if raw.is_empty()
        ));
        assert!(matches!(
            &stmts[1].kind,
            StmtKind::CalBlock { raw } if raw == "shift_phase(drive, 0.1);"
        ));
    }

    #[test]
    fn defcal_captures_signature_and_body() {
        let stmts = parse_ok("defcal x $0 { play(drive, gaussian(1.0, 16ns, 4ns)); }");
        match &stmts[0].kind {
            StmtKind::DefcalBlock { signature, raw } => {
                assert_eq!(signature, "x $0");
                assert!(raw.starts_with("play("));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn defcal_nested_braces_balance() {
        let stmts = parse_ok("defcal y $1 { if (x) { nested(); } tail(); }");
        match &stmts[0].kind {
            StmtKind::DefcalBlock { raw, .. } => {
                assert_eq!(raw, "if (x) { nested(); } tail();")
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unclosed_cal_block_rejected() {
        let d = first_error("cal {");
        assert!(d.message.contains("unbalanced braces"));
    }

    #[test]
    fn defcalgrammar_statement() {
        let stmts = parse_ok("defcalgrammar \"openpulse\";");
        assert!(matches!(
            &stmts[0].kind,
            StmtKind::CalGrammar { name } if name == "openpulse"
        ));
    }

    #[test]
    fn switch_reports_unsupported() {
        let out = parse("switch (c) { case 1: x q; break; }");
        assert!(out
            .diagnostics
            .iter()
            .any(|d| d.code == codes::E_UNSUPPORTED));
    }

    #[test]
    fn durationof_expression_statement() {
        let stmts = parse_ok("duration d = durationof({ x q; });");
        match &stmts[0].kind {
            StmtKind::ClassicalDecl { init: Some(e), .. } => match &e.kind {
                ExprKind::DurationOf { body } => assert_eq!(body.len(), 1),
                other => panic!("{other:?}"),
            },
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn empty_statement_is_an_error() {
        let out = parse(";");
        assert!(!out.success);
        assert!(out.program.statements.is_empty());
    }
}
