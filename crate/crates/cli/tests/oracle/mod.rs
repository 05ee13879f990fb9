//! Reference implementation used by the acceptance test to cross-check
//! expression parsing. Where the production parser drives precedence
//! climbing from a binding-power table, this one spells the ladder out as a
//! cascade of grammar levels, one function per operator tier, so the two
//! cannot share a bug in how precedence or associativity is encoded.
//!
//! The generator in the same module produces random expression source
//! strings (not trees): both parsers read the identical string and their
//! trees are compared structurally, which is exactly the property the
//! precedence table is supposed to guarantee.

use qasm3::ast::{BinaryOp, Expr, ExprKind, UnaryOp};
use qasm3::span::SourceSpan;
use qasm3::token::{Token, TokenKind, TokenValue};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const NAMES: [&str; 6] = ["a", "b", "c", "x", "y", "theta"];
const FUNCS: [&str; 4] = ["f", "mix", "cosh", "blend"];
const FLOATS: [&str; 4] = ["0.5", "1.25", "2.0", "0.125"];
const BINARY_OPS: [&str; 19] = [
    "**", "*", "/", "%", "+", "-", "<<", ">>", "<", "<=", ">", ">=", "==", "!=", "&", "^", "|",
    "&&", "||",
];

pub struct Generator {
    rng: ChaCha8Rng,
}

impl Generator {
    pub fn new(seed: u64) -> Self {
        Generator {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// One random expression with nesting depth at most `depth`.
    pub fn expression(&mut self, depth: u32) -> String {
        let mut out = String::new();
        self.emit(depth, &mut out);
        out
    }

    fn emit(&mut self, depth: u32, out: &mut String) {
        if depth == 0 {
            return self.emit_leaf(out);
        }
        match self.rng.gen_range(0..10u32) {
            0 | 1 => self.emit_leaf(out),
            2..=5 => {
                self.emit(depth - 1, out);
                out.push(' ');
                out.push_str(BINARY_OPS[self.rng.gen_range(0..BINARY_OPS.len())]);
                out.push(' ');
                self.emit(depth - 1, out);
            }
            6 => {
                out.push_str(["-", "!", "~"][self.rng.gen_range(0..3)]);
                out.push(' ');
                self.emit(depth - 1, out);
            }
            7 => {
                out.push('(');
                self.emit(depth - 1, out);
                out.push(')');
            }
            8 => {
                out.push_str(FUNCS[self.rng.gen_range(0..FUNCS.len())]);
                out.push('(');
                let args = self.rng.gen_range(0..=2);
                for i in 0..args {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    self.emit(depth - 1, out);
                }
                out.push(')');
            }
            _ => {
                out.push_str(NAMES[self.rng.gen_range(0..NAMES.len())]);
                out.push('[');
                self.emit(depth - 1, out);
                out.push(']');
            }
        }
    }

    fn emit_leaf(&mut self, out: &mut String) {
        match self.rng.gen_range(0..3u32) {
            0 => out.push_str(&self.rng.gen_range(0..100u32).to_string()),
            1 => out.push_str(FLOATS[self.rng.gen_range(0..FLOATS.len())]),
            _ => out.push_str(NAMES[self.rng.gen_range(0..NAMES.len())]),
        }
    }
}

/// Parse a standalone expression with the reference grammar. Shares only the
/// lexer with the production parser.
pub fn parse(source: &str) -> Result<Expr, String> {
    let (tokens, diags) = qasm3::lexer::tokenize(source);
    if !diags.is_empty() {
        return Err(format!("lexer diagnostics: {diags:?}"));
    }
    let mut p = Ref {
        source,
        tokens,
        pos: 0,
    };
    let expr = p.or_expr()?;
    if p.kind() != TokenKind::Eof {
        return Err(format!("trailing tokens at {:?}", p.kind()));
    }
    Ok(expr)
}

fn mk(kind: ExprKind) -> Expr {
    Expr {
        kind,
        span: SourceSpan::point(0, 1, 1),
    }
}

struct Ref<'s> {
    source: &'s str,
    tokens: Vec<Token>,
    pos: usize,
}

impl<'s> Ref<'s> {
    fn kind(&self) -> TokenKind {
        self.tokens[self.pos].kind
    }

    fn bump(&mut self) -> Token {
        let tok = self.tokens[self.pos].clone();
        if tok.kind != TokenKind::Eof {
            self.pos += 1;
        }
        tok
    }

    fn eat(&mut self, kind: TokenKind) -> bool {
        if self.kind() == kind {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, kind: TokenKind) -> Result<Token, String> {
        if self.kind() == kind {
            Ok(self.bump())
        } else {
            Err(format!("expected {kind:?}, found {:?}", self.kind()))
        }
    }

    /// Left-associative binary tier: `next (op next)*`.
    fn tier(
        &mut self,
        ops: &[(TokenKind, BinaryOp)],
        next: fn(&mut Ref<'s>) -> Result<Expr, String>,
    ) -> Result<Expr, String> {
        let mut lhs = next(self)?;
        loop {
            let Some(&(_, op)) = ops.iter().find(|(k, _)| *k == self.kind()) else {
                return Ok(lhs);
            };
            self.bump();
            let rhs = next(self)?;
            lhs = mk(ExprKind::Binary {
                op,
                left: Box::new(lhs),
                right: Box::new(rhs),
            });
        }
    }

    fn or_expr(&mut self) -> Result<Expr, String> {
        self.tier(&[(TokenKind::PipePipe, BinaryOp::Or)], Self::and_expr)
    }

    fn and_expr(&mut self) -> Result<Expr, String> {
        self.tier(&[(TokenKind::AmpAmp, BinaryOp::And)], Self::bitor_expr)
    }

    fn bitor_expr(&mut self) -> Result<Expr, String> {
        self.tier(&[(TokenKind::Pipe, BinaryOp::BitOr)], Self::bitxor_expr)
    }

    fn bitxor_expr(&mut self) -> Result<Expr, String> {
        self.tier(&[(TokenKind::Caret, BinaryOp::BitXor)], Self::bitand_expr)
    }

    fn bitand_expr(&mut self) -> Result<Expr, String> {
        self.tier(&[(TokenKind::Amp, BinaryOp::BitAnd)], Self::equality_expr)
    }

    fn equality_expr(&mut self) -> Result<Expr, String> {
        self.tier(
            &[
                (TokenKind::EqEq, BinaryOp::Eq),
                (TokenKind::BangEq, BinaryOp::NotEq),
            ],
            Self::relational_expr,
        )
    }

    fn relational_expr(&mut self) -> Result<Expr, String> {
        self.tier(
            &[
                (TokenKind::Lt, BinaryOp::Lt),
                (TokenKind::LtEq, BinaryOp::LtEq),
                (TokenKind::Gt, BinaryOp::Gt),
                (TokenKind::GtEq, BinaryOp::GtEq),
            ],
            Self::shift_expr,
        )
    }

    fn shift_expr(&mut self) -> Result<Expr, String> {
        self.tier(
            &[
                (TokenKind::Shl, BinaryOp::Shl),
                (TokenKind::Shr, BinaryOp::Shr),
            ],
            Self::additive_expr,
        )
    }

    fn additive_expr(&mut self) -> Result<Expr, String> {
        self.tier(
            &[
                (TokenKind::Plus, BinaryOp::Add),
                (TokenKind::Minus, BinaryOp::Sub),
            ],
            Self::multiplicative_expr,
        )
    }

    fn multiplicative_expr(&mut self) -> Result<Expr, String> {
        self.tier(
            &[
                (TokenKind::Star, BinaryOp::Mul),
                (TokenKind::Slash, BinaryOp::Div),
                (TokenKind::Percent, BinaryOp::Mod),
            ],
            Self::unary_expr,
        )
    }

    fn unary_expr(&mut self) -> Result<Expr, String> {
        let op = match self.kind() {
            TokenKind::Minus => Some(UnaryOp::Neg),
            TokenKind::Bang => Some(UnaryOp::Not),
            TokenKind::Tilde => Some(UnaryOp::BitNot),
            _ => None,
        };
        match op {
            Some(op) => {
                self.bump();
                let operand = self.unary_expr()?;
                Ok(mk(ExprKind::Unary {
                    op,
                    operand: Box::new(operand),
                }))
            }
            None => self.power_expr(),
        }
    }

    /// `**` binds tighter than unary on the left and right-associates, so
    /// its right operand re-enters the unary level.
    fn power_expr(&mut self) -> Result<Expr, String> {
        let base = self.postfix_expr()?;
        if self.eat(TokenKind::StarStar) {
            let rhs = self.unary_expr()?;
            return Ok(mk(ExprKind::Binary {
                op: BinaryOp::Pow,
                left: Box::new(base),
                right: Box::new(rhs),
            }));
        }
        Ok(base)
    }

    fn postfix_expr(&mut self) -> Result<Expr, String> {
        let mut expr = self.primary()?;
        while self.eat(TokenKind::LBracket) {
            let index = self.or_expr()?;
            self.expect(TokenKind::RBracket)?;
            expr = mk(ExprKind::Index {
                base: Box::new(expr),
                indices: vec![index],
            });
        }
        Ok(expr)
    }

    fn primary(&mut self) -> Result<Expr, String> {
        match self.kind() {
            TokenKind::IntegerLiteral => {
                let tok = self.bump();
                let Some(TokenValue::Integer(value)) = tok.value else {
                    return Err("integer token without value".into());
                };
                Ok(mk(ExprKind::IntegerLit { value }))
            }
            TokenKind::FloatLiteral => {
                let tok = self.bump();
                let Some(TokenValue::Float(value)) = tok.value else {
                    return Err("float token without value".into());
                };
                Ok(mk(ExprKind::FloatLit { value }))
            }
            TokenKind::Identifier => {
                let tok = self.bump();
                let name = tok.lexeme(self.source).to_string();
                if self.eat(TokenKind::LParen) {
                    let mut args = Vec::new();
                    if self.kind() != TokenKind::RParen {
                        loop {
                            args.push(self.or_expr()?);
                            if !self.eat(TokenKind::Comma) {
                                break;
                            }
                        }
                    }
                    self.expect(TokenKind::RParen)?;
                    return Ok(mk(ExprKind::Call { callee: name, args }));
                }
                Ok(mk(ExprKind::Identifier { name }))
            }
            TokenKind::LParen => {
                self.bump();
                let inner = self.or_expr()?;
                self.expect(TokenKind::RParen)?;
                Ok(inner)
            }
            other => Err(format!("unexpected token {other:?}")),
        }
    }
}
