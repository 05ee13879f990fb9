//! The abstract syntax tree.
//!
//! Every node pairs a variant payload (`*Kind`) with a mandatory
//! [`SourceSpan`]. The serde derives define the JSON interchange schema: the
//! variant name becomes a `"kind"` tag flattened into the node object, and
//! spans serialize as 6-element arrays (see the schema doc in `docs/`).
//!
//! Trees are immutable after construction; [`walk`] gives pre-order
//! traversal and [`structural_equal`] compares trees ignoring spans.

use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize};

use crate::span::SourceSpan;
use crate::token::TimeUnit;

/// Language version from the `OPENQASM M.m;` header. `OPENQASM 3;` is
/// recorded as 3.0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Version {
    pub major: u32,
    pub minor: u32,
}

impl std::fmt::Display for Version {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}.{}", self.major, self.minor)
    }
}

/// A whole source file. When a version header is present it is recorded
/// both here and as a `VersionStmt` at `statements[0]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Program {
    pub version: Option<Version>,
    pub statements: Vec<Stmt>,
    pub span: SourceSpan,
}

// Program serializes like every other node, with a leading "kind" tag. The
// tag is not a struct field (there is exactly one program variant), so the
// impl is written out by hand.
impl Serialize for Program {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Program", 4)?;
        s.serialize_field("kind", "Program")?;
        s.serialize_field("version", &self.version)?;
        s.serialize_field("statements", &self.statements)?;
        s.serialize_field("span", &self.span)?;
        s.end()
    }
}

impl<'de> Deserialize<'de> for Program {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Fields {
            kind: String,
            version: Option<Version>,
            statements: Vec<Stmt>,
            span: SourceSpan,
        }
        let fields = Fields::deserialize(deserializer)?;
        if fields.kind != "Program" {
            return Err(serde::de::Error::custom(format!(
                "unknown node kind `{}`, expected `Program`",
                fields.kind
            )));
        }
        Ok(Program {
            version: fields.version,
            statements: fields.statements,
            span: fields.span,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stmt {
    #[serde(flatten)]
    pub kind: StmtKind,
    pub span: SourceSpan,
}

impl Stmt {
    pub fn new(kind: StmtKind, span: SourceSpan) -> Self {
        Stmt { kind, span }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Expr {
    #[serde(flatten)]
    pub kind: ExprKind,
    pub span: SourceSpan,
}

impl Expr {
    pub fn new(kind: ExprKind, span: SourceSpan) -> Self {
        Expr { kind, span }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TypeSpec {
    #[serde(flatten)]
    pub kind: TypeKind,
    pub span: SourceSpan,
}

impl TypeSpec {
    pub fn new(kind: TypeKind, span: SourceSpan) -> Self {
        TypeSpec { kind, span }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateModifier {
    #[serde(flatten)]
    pub kind: GateModifierKind,
    pub span: SourceSpan,
}

/// One typed parameter of a `def` subroutine, e.g. `int[8] a` or `qubit q`.
#[derive(Debug, Clone, PartialEq)]
pub struct DefParam {
    pub ty: TypeSpec,
    pub name: String,
    pub span: SourceSpan,
}

impl Serialize for DefParam {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("DefParam", 4)?;
        s.serialize_field("kind", "DefParam")?;
        s.serialize_field("ty", &self.ty)?;
        s.serialize_field("name", &self.name)?;
        s.serialize_field("span", &self.span)?;
        s.end()
    }
}

impl<'de> Deserialize<'de> for DefParam {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Fields {
            kind: String,
            ty: TypeSpec,
            name: String,
            span: SourceSpan,
        }
        let fields = Fields::deserialize(deserializer)?;
        if fields.kind != "DefParam" {
            return Err(serde::de::Error::custom(format!(
                "unknown node kind `{}`, expected `DefParam`",
                fields.kind
            )));
        }
        Ok(DefParam {
            ty: fields.ty,
            name: fields.name,
            span: fields.span,
        })
    }
}

/// `input` / `output` qualifier on a classical declaration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IoModifier {
    Input,
    Output,
}

impl IoModifier {
    pub fn keyword(self) -> &'static str {
        match self {
            IoModifier::Input => "input",
            IoModifier::Output => "output",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum StmtKind {
    /// The `OPENQASM M.m;` header, kept in statement position so the
    /// statement list mirrors source order.
    VersionStmt { version: Version },
    IncludeStmt { path: String },
    /// `qubit q;`, `qubit[n] q;`, or legacy `qreg q[n];` (flagged).
    QuantumDecl {
        name: String,
        size: Option<Expr>,
        legacy: bool,
    },
    ClassicalDecl {
        ty: TypeSpec,
        name: String,
        init: Option<Expr>,
        const_flag: bool,
        io_modifier: Option<IoModifier>,
        legacy: bool,
    },
    /// `let name = part (++ part)*;`
    AliasDecl { name: String, parts: Vec<Expr> },
    GateDef {
        name: String,
        params: Vec<String>,
        qubits: Vec<String>,
        body: Vec<Stmt>,
    },
    GateCall {
        modifiers: Vec<GateModifier>,
        name: String,
        args: Vec<Expr>,
        qubits: Vec<Expr>,
        duration: Option<Expr>,
    },
    Measure {
        target: Expr,
        destination: Option<Expr>,
    },
    Reset { target: Expr },
    Barrier { operands: Vec<Expr> },
    Delay { duration: Expr, operands: Vec<Expr> },
    Box {
        duration: Option<Expr>,
        body: Vec<Stmt>,
    },
    SubroutineDef {
        name: String,
        params: Vec<DefParam>,
        return_type: Option<TypeSpec>,
        body: Vec<Stmt>,
    },
    ExternDecl {
        name: String,
        param_types: Vec<TypeSpec>,
        return_type: Option<TypeSpec>,
    },
    Return { value: Option<Expr> },
    If {
        condition: Expr,
        then_body: Vec<Stmt>,
        else_body: Option<Vec<Stmt>>,
    },
    For {
        loop_var_type: TypeSpec,
        loop_var: String,
        iterable: Expr,
        body: Vec<Stmt>,
    },
    While { condition: Expr, body: Vec<Stmt> },
    Break,
    Continue,
    End,
    ExpressionStmt { expr: Expr },
    Assignment {
        lvalue: Expr,
        op: AssignOp,
        rvalue: Expr,
    },
    /// Raw pragma payload, everything after the `pragma` keyword.
    Pragma { text: String },
    /// `@name payload` wrapping the statement that follows it.
    Annotation {
        name: String,
        text: String,
        statement: std::boxed::Box<Stmt>,
    },
    /// `defcalgrammar "name";`
    CalGrammar { name: String },
    /// `cal { ... }` with the body kept as raw text.
    CalBlock { raw: String },
    /// `defcal signature { ... }`, signature and body kept as raw text.
    DefcalBlock { signature: String, raw: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum ExprKind {
    IntegerLit { value: u64 },
    FloatLit { value: f64 },
    ImaginaryLit { value: f64 },
    BooleanLit { value: bool },
    BitstringLit { width: u32, bits: String },
    TimingLit { value: f64, unit: TimeUnit },
    Identifier { name: String },
    HardwareQubit { index: u32 },
    Unary {
        op: UnaryOp,
        operand: Box<Expr>,
    },
    Binary {
        op: BinaryOp,
        left: Box<Expr>,
        right: Box<Expr>,
    },
    Index {
        base: Box<Expr>,
        indices: Vec<Expr>,
    },
    /// `start : end` or `start : step : end`; only valid inside an index
    /// operator or as a bracketed `for` iterable.
    Range {
        start: Option<Box<Expr>>,
        step: Option<Box<Expr>>,
        end: Option<Box<Expr>>,
    },
    Call { callee: String, args: Vec<Expr> },
    Cast {
        target: TypeSpec,
        operand: Box<Expr>,
    },
    /// `durationof({ ... })`
    DurationOf { body: Vec<Stmt> },
    SizeOf { args: Vec<Expr> },
    SetLiteral { elements: Vec<Expr> },
    ArrayLiteral { elements: Vec<Expr> },
    /// `measure q` in expression position (assignment rhs).
    MeasureExpr { target: Box<Expr> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum TypeKind {
    Bit { width: Option<Box<Expr>> },
    Int { width: Option<Box<Expr>> },
    Uint { width: Option<Box<Expr>> },
    Float { width: Option<Box<Expr>> },
    Angle { width: Option<Box<Expr>> },
    Bool,
    /// `complex` or `complex[float[n]]`.
    Complex { base: Option<Box<TypeSpec>> },
    Duration,
    Stretch,
    Qubit { size: Option<Box<Expr>> },
    Array {
        element: Box<TypeSpec>,
        dimensions: Vec<Expr>,
    },
}

impl TypeKind {
    /// Keyword that introduces this type in source text.
    pub fn keyword(&self) -> &'static str {
        match self {
            TypeKind::Bit { .. } => "bit",
            TypeKind::Int { .. } => "int",
            TypeKind::Uint { .. } => "uint",
            TypeKind::Float { .. } => "float",
            TypeKind::Angle { .. } => "angle",
            TypeKind::Bool => "bool",
            TypeKind::Complex { .. } => "complex",
            TypeKind::Duration => "duration",
            TypeKind::Stretch => "stretch",
            TypeKind::Qubit { .. } => "qubit",
            TypeKind::Array { .. } => "array",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum GateModifierKind {
    Ctrl { count: Option<Expr> },
    NegCtrl { count: Option<Expr> },
    Inv,
    Pow { exponent: Expr },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum UnaryOp {
    #[serde(rename = "-")]
    Neg,
    #[serde(rename = "~")]
    BitNot,
    #[serde(rename = "!")]
    Not,
}

impl UnaryOp {
    pub fn symbol(self) -> &'static str {
        match self {
            UnaryOp::Neg => "-",
            UnaryOp::BitNot => "~",
            UnaryOp::Not => "!",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BinaryOp {
    #[serde(rename = "||")]
    Or,
    #[serde(rename = "&&")]
    And,
    #[serde(rename = "|")]
    BitOr,
    #[serde(rename = "^")]
    BitXor,
    #[serde(rename = "&")]
    BitAnd,
    #[serde(rename = "==")]
    Eq,
    #[serde(rename = "!=")]
    NotEq,
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "<=")]
    LtEq,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = ">=")]
    GtEq,
    #[serde(rename = "<<")]
    Shl,
    #[serde(rename = ">>")]
    Shr,
    #[serde(rename = "+")]
    Add,
    #[serde(rename = "-")]
    Sub,
    #[serde(rename = "*")]
    Mul,
    #[serde(rename = "/")]
    Div,
    #[serde(rename = "%")]
    Mod,
    #[serde(rename = "**")]
    Pow,
}

impl BinaryOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinaryOp::Or => "||",
            BinaryOp::And => "&&",
            BinaryOp::BitOr => "|",
            BinaryOp::BitXor => "^",
            BinaryOp::BitAnd => "&",
            BinaryOp::Eq => "==",
            BinaryOp::NotEq => "!=",
            BinaryOp::Lt => "<",
            BinaryOp::LtEq => "<=",
            BinaryOp::Gt => ">",
            BinaryOp::GtEq => ">=",
            BinaryOp::Shl => "<<",
            BinaryOp::Shr => ">>",
            BinaryOp::Add => "+",
            BinaryOp::Sub => "-",
            BinaryOp::Mul => "*",
            BinaryOp::Div => "/",
            BinaryOp::Mod => "%",
            BinaryOp::Pow => "**",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AssignOp {
    #[serde(rename = "=")]
    Assign,
    #[serde(rename = "+=")]
    AddAssign,
    #[serde(rename = "-=")]
    SubAssign,
    #[serde(rename = "*=")]
    MulAssign,
    #[serde(rename = "/=")]
    DivAssign,
    #[serde(rename = "%=")]
    ModAssign,
    #[serde(rename = "**=")]
    PowAssign,
    #[serde(rename = "&=")]
    AndAssign,
    #[serde(rename = "|=")]
    OrAssign,
    #[serde(rename = "^=")]
    XorAssign,
    #[serde(rename = "<<=")]
    ShlAssign,
    #[serde(rename = ">>=")]
    ShrAssign,
}

impl AssignOp {
    pub fn symbol(self) -> &'static str {
        match self {
            AssignOp::Assign => "=",
            AssignOp::AddAssign => "+=",
            AssignOp::SubAssign => "-=",
            AssignOp::MulAssign => "*=",
            AssignOp::DivAssign => "/=",
            AssignOp::ModAssign => "%=",
            AssignOp::PowAssign => "**=",
            AssignOp::AndAssign => "&=",
            AssignOp::OrAssign => "|=",
            AssignOp::XorAssign => "^=",
            AssignOp::ShlAssign => "<<=",
            AssignOp::ShrAssign => ">>=",
        }
    }
}

/// Callbacks for [`walk`]. Every method has a no-op default so visitors
/// implement only what they care about.
pub trait Visitor {
    fn visit_program(&mut self, _program: &Program) {}
    fn visit_stmt(&mut self, _stmt: &Stmt) {}
    fn visit_expr(&mut self, _expr: &Expr) {}
    fn visit_type(&mut self, _ty: &TypeSpec) {}
    fn visit_modifier(&mut self, _modifier: &GateModifier) {}
    fn visit_def_param(&mut self, _param: &DefParam) {}
}

/// Depth-first pre-order traversal: each node is visited before its
/// children, children in source order.
pub fn walk(program: &Program, v: &mut dyn Visitor) {
    v.visit_program(program);
    for stmt in &program.statements {
        walk_stmt(stmt, v);
    }
}

pub fn walk_stmt(stmt: &Stmt, v: &mut dyn Visitor) {
    v.visit_stmt(stmt);
    match &stmt.kind {
        StmtKind::VersionStmt { .. }
        | StmtKind::IncludeStmt { .. }
        | StmtKind::Break
        | StmtKind::Continue
        | StmtKind::End
        | StmtKind::Pragma { .. }
        | StmtKind::CalGrammar { .. }
        | StmtKind::CalBlock { .. }
        | StmtKind::DefcalBlock { .. } => {}
        StmtKind::QuantumDecl { size, .. } => {
            if let Some(size) = size {
                walk_expr(size, v);
            }
        }
        StmtKind::ClassicalDecl { ty, init, .. } => {
            walk_type(ty, v);
            if let Some(init) = init {
                walk_expr(init, v);
            }
        }
        StmtKind::AliasDecl { parts, .. } => {
            for part in parts {
                walk_expr(part, v);
            }
        }
        StmtKind::GateDef { body, .. } => {
            for stmt in body {
                walk_stmt(stmt, v);
            }
        }
        StmtKind::GateCall {
            modifiers,
            args,
            qubits,
            duration,
            ..
        } => {
            for m in modifiers {
                walk_modifier(m, v);
            }
            for arg in args {
                walk_expr(arg, v);
            }
            for qubit in qubits {
                walk_expr(qubit, v);
            }
            if let Some(duration) = duration {
                walk_expr(duration, v);
            }
        }
        StmtKind::Measure {
            target,
            destination,
        } => {
            walk_expr(target, v);
            if let Some(destination) = destination {
                walk_expr(destination, v);
            }
        }
        StmtKind::Reset { target } => walk_expr(target, v),
        StmtKind::Barrier { operands } => {
            for op in operands {
                walk_expr(op, v);
            }
        }
        StmtKind::Delay { duration, operands } => {
            walk_expr(duration, v);
            for op in operands {
                walk_expr(op, v);
            }
        }
        StmtKind::Box { duration, body } => {
            if let Some(duration) = duration {
                walk_expr(duration, v);
            }
            for stmt in body {
                walk_stmt(stmt, v);
            }
        }
        StmtKind::SubroutineDef {
            params,
            return_type,
            body,
            ..
        } => {
            for param in params {
                v.visit_def_param(param);
                walk_type(&param.ty, v);
            }
            if let Some(rt) = return_type {
                walk_type(rt, v);
            }
            for stmt in body {
                walk_stmt(stmt, v);
            }
        }
        StmtKind::ExternDecl {
            param_types,
            return_type,
            ..
        } => {
            for ty in param_types {
                walk_type(ty, v);
            }
            if let Some(rt) = return_type {
                walk_type(rt, v);
            }
        }
        StmtKind::Return { value } => {
            if let Some(value) = value {
                walk_expr(value, v);
            }
        }
        StmtKind::If {
            condition,
            then_body,
            else_body,
        } => {
            walk_expr(condition, v);
            for stmt in then_body {
                walk_stmt(stmt, v);
            }
            if let Some(else_body) = else_body {
                for stmt in else_body {
                    walk_stmt(stmt, v);
                }
            }
        }
        StmtKind::For {
            loop_var_type,
            iterable,
            body,
            ..
        } => {
            walk_type(loop_var_type, v);
            walk_expr(iterable, v);
            for stmt in body {
                walk_stmt(stmt, v);
            }
        }
        StmtKind::While { condition, body } => {
            walk_expr(condition, v);
            for stmt in body {
                walk_stmt(stmt, v);
            }
        }
        StmtKind::ExpressionStmt { expr } => walk_expr(expr, v),
        StmtKind::Assignment { lvalue, rvalue, .. } => {
            walk_expr(lvalue, v);
            walk_expr(rvalue, v);
        }
        StmtKind::Annotation { statement, .. } => walk_stmt(statement, v),
    }
}

pub fn walk_expr(expr: &Expr, v: &mut dyn Visitor) {
    v.visit_expr(expr);
    match &expr.kind {
        ExprKind::IntegerLit { .. }
        | ExprKind::FloatLit { .. }
        | ExprKind::ImaginaryLit { .. }
        | ExprKind::BooleanLit { .. }
        | ExprKind::BitstringLit { .. }
        | ExprKind::TimingLit { .. }
        | ExprKind::Identifier { .. }
        | ExprKind::HardwareQubit { .. } => {}
        ExprKind::Unary { operand, .. } => walk_expr(operand, v),
        ExprKind::Binary { left, right, .. } => {
            walk_expr(left, v);
            walk_expr(right, v);
        }
        ExprKind::Index { base, indices } => {
            walk_expr(base, v);
            for idx in indices {
                walk_expr(idx, v);
            }
        }
        ExprKind::Range { start, step, end } => {
            for part in [start, step, end].into_iter().flatten() {
                walk_expr(part, v);
            }
        }
        ExprKind::Call { args, .. } | ExprKind::SizeOf { args } => {
            for arg in args {
                walk_expr(arg, v);
            }
        }
        ExprKind::Cast { target, operand } => {
            walk_type(target, v);
            walk_expr(operand, v);
        }
        ExprKind::DurationOf { body } => {
            for stmt in body {
                walk_stmt(stmt, v);
            }
        }
        ExprKind::SetLiteral { elements } | ExprKind::ArrayLiteral { elements } => {
            for element in elements {
                walk_expr(element, v);
            }
        }
        ExprKind::MeasureExpr { target } => walk_expr(target, v),
    }
}

pub fn walk_type(ty: &TypeSpec, v: &mut dyn Visitor) {
    v.visit_type(ty);
    match &ty.kind {
        TypeKind::Bit { width }
        | TypeKind::Int { width }
        | TypeKind::Uint { width }
        | TypeKind::Float { width }
        | TypeKind::Angle { width } => {
            if let Some(width) = width {
                walk_expr(width, v);
            }
        }
        TypeKind::Bool | TypeKind::Duration | TypeKind::Stretch => {}
        TypeKind::Complex { base } => {
            if let Some(base) = base {
                walk_type(base, v);
            }
        }
        TypeKind::Qubit { size } => {
            if let Some(size) = size {
                walk_expr(size, v);
            }
        }
        TypeKind::Array {
            element,
            dimensions,
        } => {
            walk_type(element, v);
            for dim in dimensions {
                walk_expr(dim, v);
            }
        }
    }
}

pub fn walk_modifier(modifier: &GateModifier, v: &mut dyn Visitor) {
    v.visit_modifier(modifier);
    match &modifier.kind {
        GateModifierKind::Ctrl { count } | GateModifierKind::NegCtrl { count } => {
            if let Some(count) = count {
                walk_expr(count, v);
            }
        }
        GateModifierKind::Inv => {}
        GateModifierKind::Pow { exponent } => walk_expr(exponent, v),
    }
}

/// True iff the two programs are identical trees once every span is
/// ignored. Whitespace and comment differences never affect the result.
pub fn structural_equal(a: &Program, b: &Program) -> bool {
    let mut a = a.clone();
    let mut b = b.clone();
    strip_spans(&mut a);
    strip_spans(&mut b);
    a == b
}

/// Span-insensitive comparison of two expressions.
pub fn exprs_structurally_equal(a: &Expr, b: &Expr) -> bool {
    let mut a = a.clone();
    let mut b = b.clone();
    strip_expr(&mut a);
    strip_expr(&mut b);
    a == b
}

/// Reset every span in the tree to the default placeholder, in place.
pub fn strip_spans(program: &mut Program) {
    program.span = SourceSpan::default();
    for stmt in &mut program.statements {
        strip_stmt(stmt);
    }
}

fn strip_stmt(stmt: &mut Stmt) {
    stmt.span = SourceSpan::default();
    match &mut stmt.kind {
        StmtKind::VersionStmt { .. }
        | StmtKind::IncludeStmt { .. }
        | StmtKind::Break
        | StmtKind::Continue
        | StmtKind::End
        | StmtKind::Pragma { .. }
        | StmtKind::CalGrammar { .. }
        | StmtKind::CalBlock { .. }
        | StmtKind::DefcalBlock { .. } => {}
        StmtKind::QuantumDecl { size, .. } => {
            if let Some(size) = size {
                strip_expr(size);
            }
        }
        StmtKind::ClassicalDecl { ty, init, .. } => {
            strip_type(ty);
            if let Some(init) = init {
                strip_expr(init);
            }
        }
        StmtKind::AliasDecl { parts, .. } => parts.iter_mut().for_each(strip_expr),
        StmtKind::GateDef { body, .. } => body.iter_mut().for_each(strip_stmt),
        StmtKind::GateCall {
            modifiers,
            args,
            qubits,
            duration,
            ..
        } => {
            modifiers.iter_mut().for_each(strip_modifier);
            args.iter_mut().for_each(strip_expr);
            qubits.iter_mut().for_each(strip_expr);
            if let Some(duration) = duration {
                strip_expr(duration);
            }
        }
        StmtKind::Measure {
            target,
            destination,
        } => {
            strip_expr(target);
            if let Some(destination) = destination {
                strip_expr(destination);
            }
        }
        StmtKind::Reset { target } => strip_expr(target),
        StmtKind::Barrier { operands } => operands.iter_mut().for_each(strip_expr),
        StmtKind::Delay { duration, operands } => {
            strip_expr(duration);
            operands.iter_mut().for_each(strip_expr);
        }
        StmtKind::Box { duration, body } => {
            if let Some(duration) = duration {
                strip_expr(duration);
            }
            body.iter_mut().for_each(strip_stmt);
        }
        StmtKind::SubroutineDef {
            params,
            return_type,
            body,
            ..
        } => {
            for param in params {
                param.span = SourceSpan::default();
                strip_type(&mut param.ty);
            }
            if let Some(rt) = return_type {
                strip_type(rt);
            }
            body.iter_mut().for_each(strip_stmt);
        }
        StmtKind::ExternDecl {
            param_types,
            return_type,
            ..
        } => {
            param_types.iter_mut().for_each(strip_type);
            if let Some(rt) = return_type {
                strip_type(rt);
            }
        }
        StmtKind::Return { value } => {
            if let Some(value) = value {
                strip_expr(value);
            }
        }
        StmtKind::If {
            condition,
            then_body,
            else_body,
        } => {
            strip_expr(condition);
            then_body.iter_mut().for_each(strip_stmt);
            if let Some(else_body) = else_body {
                else_body.iter_mut().for_each(strip_stmt);
            }
        }
        StmtKind::For {
            loop_var_type,
            iterable,
            body,
            ..
        } => {
            strip_type(loop_var_type);
            strip_expr(iterable);
            body.iter_mut().for_each(strip_stmt);
        }
        StmtKind::While { condition, body } => {
            strip_expr(condition);
            body.iter_mut().for_each(strip_stmt);
        }
        StmtKind::ExpressionStmt { expr } => strip_expr(expr),
        StmtKind::Assignment { lvalue, rvalue, .. } => {
            strip_expr(lvalue);
            strip_expr(rvalue);
        }
        StmtKind::Annotation { statement, .. } => strip_stmt(statement),
    }
}

fn strip_expr(expr: &mut Expr) {
    expr.span = SourceSpan::default();
    match &mut expr.kind {
        ExprKind::IntegerLit { .. }
        | ExprKind::FloatLit { .. }
        | ExprKind::ImaginaryLit { .. }
        | ExprKind::BooleanLit { .. }
        | ExprKind::BitstringLit { .. }
        | ExprKind::TimingLit { .. }
        | ExprKind::Identifier { .. }
        | ExprKind::HardwareQubit { .. } => {}
        ExprKind::Unary { operand, .. } => strip_expr(operand),
        ExprKind::Binary { left, right, .. } => {
            strip_expr(left);
            strip_expr(right);
        }
        ExprKind::Index { base, indices } => {
            strip_expr(base);
            indices.iter_mut().for_each(strip_expr);
        }
        ExprKind::Range { start, step, end } => {
            for part in [start, step, end].into_iter().flatten() {
                strip_expr(part);
            }
        }
        ExprKind::Call { args, .. } | ExprKind::SizeOf { args } => {
            args.iter_mut().for_each(strip_expr)
        }
        ExprKind::Cast { target, operand } => {
            strip_type(target);
            strip_expr(operand);
        }
        ExprKind::DurationOf { body } => body.iter_mut().for_each(strip_stmt),
        ExprKind::SetLiteral { elements } | ExprKind::ArrayLiteral { elements } => {
            elements.iter_mut().for_each(strip_expr)
        }
        ExprKind::MeasureExpr { target } => strip_expr(target),
    }
}

fn strip_type(ty: &mut TypeSpec) {
    ty.span = SourceSpan::default();
    match &mut ty.kind {
        TypeKind::Bit { width }
        | TypeKind::Int { width }
        | TypeKind::Uint { width }
        | TypeKind::Float { width }
        | TypeKind::Angle { width } => {
            if let Some(width) = width {
                strip_expr(width);
            }
        }
        TypeKind::Bool | TypeKind::Duration | TypeKind::Stretch => {}
        TypeKind::Complex { base } => {
            if let Some(base) = base {
                strip_type(base);
            }
        }
        TypeKind::Qubit { size } => {
            if let Some(size) = size {
                strip_expr(size);
            }
        }
        TypeKind::Array {
            element,
            dimensions,
        } => {
            strip_type(element);
            dimensions.iter_mut().for_each(strip_expr);
        }
    }
}

fn strip_modifier(modifier: &mut GateModifier) {
    modifier.span = SourceSpan::default();
    match &mut modifier.kind {
        GateModifierKind::Ctrl { count } | GateModifierKind::NegCtrl { count } => {
            if let Some(count) = count {
                strip_expr(count);
            }
        }
        GateModifierKind::Inv => {}
        GateModifierKind::Pow { exponent } => strip_expr(exponent),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(a: usize, b: usize) -> SourceSpan {
        SourceSpan::new(a, b, 1, a as u32 + 1, 1, b as u32 + 1)
    }

    fn ident(name: &str, a: usize, b: usize) -> Expr {
        Expr::new(
            ExprKind::Identifier {
                name: name.to_string(),
            },
            sp(a, b),
        )
    }

    /// `x q[0];` hand-built.
    fn gate_call_program() -> Program {
        let q = ident("q", 2, 3);
        let zero = Expr::new(ExprKind::IntegerLit { value: 0 }, sp(4, 5));
        let index = Expr::new(
            ExprKind::Index {
                base: Box::new(q),
                indices: vec![zero],
            },
            sp(2, 6),
        );
        let call = Stmt::new(
            StmtKind::GateCall {
                modifiers: vec![],
                name: "x".into(),
                args: vec![],
                qubits: vec![index],
                duration: None,
            },
            sp(0, 7),
        );
        Program {
            version: None,
            statements: vec![call],
            span: sp(0, 7),
        }
    }

    struct Trace(Vec<String>);

    impl Visitor for Trace {
        fn visit_program(&mut self, _: &Program) {
            self.0.push("Program".into());
        }
        fn visit_stmt(&mut self, stmt: &Stmt) {
            let label = match &stmt.kind {
                StmtKind::GateCall { name, .. } => format!("GateCall({name})"),
                other => format!("{other:?}"),
            };
            self.0.push(label);
        }
        fn visit_expr(&mut self, expr: &Expr) {
            let label = match &expr.kind {
                ExprKind::Identifier { name } => format!("Identifier({name})"),
                ExprKind::IntegerLit { value } => format!("IntegerLit({value})"),
                ExprKind::Index { .. } => "Index".into(),
                other => format!("{other:?}"),
            };
            self.0.push(label);
        }
    }

    #[test]
    fn walk_preorder_matches_forced_example() {
        let program = gate_call_program();
        let mut trace = Trace(Vec::new());
        walk(&program, &mut trace);
        assert_eq!(
            trace.0,
            vec![
                "Program",
                "GateCall(x)",
                "Index",
                "Identifier(q)",
                "IntegerLit(0)"
            ]
        );
    }

    #[test]
    fn walk_empty_program_visits_only_root() {
        let program = Program {
            version: None,
            statements: vec![],
            span: SourceSpan::default(),
        };
        let mut trace = Trace(Vec::new());
        walk(&program, &mut trace);
        assert_eq!(trace.0, vec!["Program"]);
    }

    #[test]
    fn structural_equal_ignores_spans() {
        let a = gate_call_program();
        let mut b = gate_call_program();
        // Perturb every span in b.
        b.span = sp(10, 20);
        b.statements[0].span = sp(11, 19);
        assert!(structural_equal(&a, &b));
        assert!(structural_equal(&a, &a));
    }

    #[test]
    fn structural_equal_detects_shape_difference() {
        let a = gate_call_program();
        let mut b = gate_call_program();
        if let StmtKind::GateCall { name, .. } = &mut b.statements[0].kind {
            *name = "y".into();
        }
        assert!(!structural_equal(&a, &b));
    }

    #[test]
    fn node_json_has_kind_and_span() {
        let expr = ident("q", 0, 1);
        let json = serde_json::to_string(&expr).unwrap();
        assert_eq!(json, r#"{"kind":"Identifier","name":"q","span":[0,1,1,1,1,2]}"#);
        let back: Expr = serde_json::from_str(&json).unwrap();
        assert_eq!(back, expr);
    }

    #[test]
    fn program_json_shape() {
        let program = Program {
            version: Some(Version { major: 3, minor: 0 }),
            statements: vec![],
            span: SourceSpan::default(),
        };
        let json = serde_json::to_string(&program).unwrap();
        assert_eq!(
            json,
            r#"{"kind":"Program","version":{"major":3,"minor":0},"statements":[],"span":[0,0,0,0,0,0]}"#
        );
        let back: Program = serde_json::from_str(&json).unwrap();
        assert_eq!(back, program);
    }

    #[test]
    fn operator_symbols_round_trip_through_json() {
        for op in [
            BinaryOp::Or,
            BinaryOp::Pow,
            BinaryOp::Shl,
            BinaryOp::NotEq,
            BinaryOp::Mod,
        ] {
            let json = serde_json::to_string(&op).unwrap();
            assert_eq!(json, format!("\"{}\"", op.symbol()));
            let back: BinaryOp = serde_json::from_str(&json).unwrap();
            assert_eq!(back, op);
        }
        assert_eq!(serde_json::to_string(&AssignOp::PowAssign).unwrap(), "\"**=\"");
        assert_eq!(serde_json::to_string(&UnaryOp::BitNot).unwrap(), "\"~\"");
    }
}
