//! Post-parse validation: a gate registry tracking standard and custom
//! gates, scoped symbol tables for classical and quantum resources, gate
//! call checking, and shallow declaration type checks.
//!
//! The pass is linear over statements in source order, never aborts early,
//! and aggregates every diagnostic it finds. Type checking is intentionally
//! shallow: literals and declared symbols, not inference through arbitrary
//! operator trees.

use std::collections::{BTreeSet, HashMap};

use crate::ast::{
    exprs_structurally_equal, Expr, ExprKind, GateModifierKind, Program, Stmt, StmtKind,
    TypeKind, TypeSpec, UnaryOp,
};
use crate::diag::{codes, Diagnostic};
use crate::span::SourceSpan;

/// Parameter and qubit counts for one gate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GateSignature {
    pub params: usize,
    pub qubits: usize,
}

/// The standard-gate roster from stdgates.inc, with each gate's
/// (parameter count, qubit count).
const STDGATES: &[(&str, usize, usize)] = &[
    ("p", 1, 1),
    ("x", 0, 1),
    ("y", 0, 1),
    ("z", 0, 1),
    ("h", 0, 1),
    ("s", 0, 1),
    ("sdg", 0, 1),
    ("t", 0, 1),
    ("tdg", 0, 1),
    ("sx", 0, 1),
    ("rx", 1, 1),
    ("ry", 1, 1),
    ("rz", 1, 1),
    ("cx", 0, 2),
    ("cy", 0, 2),
    ("cz", 0, 2),
    ("cp", 1, 2),
    ("crx", 1, 2),
    ("cry", 1, 2),
    ("crz", 1, 2),
    ("ch", 0, 2),
    ("swap", 0, 2),
    ("ccx", 0, 3),
    ("cswap", 0, 3),
    ("cu", 4, 2),
    // OpenQASM 2 back-compat names.
    ("CX", 0, 2),
    ("phase", 1, 1),
    ("cphase", 1, 2),
    ("id", 0, 1),
    ("u1", 1, 1),
    ("u2", 2, 1),
    ("u3", 3, 1),
];

/// Built-in classical constants, always in scope.
const BUILTIN_CONSTANTS: &[&str] = &["pi", "tau", "euler"];

/// Built-in classical functions, always in scope.
const BUILTIN_FUNCTIONS: &[&str] = &[
    "arccos", "arcsin", "arctan", "ceiling", "cos", "exp", "floor", "log", "mod", "popcount",
    "pow", "rotl", "rotr", "sin", "sqrt", "tan",
];

/// Tracks which gates exist: the built-ins `U` and `gphase`, the standard
/// library (once registered), and user definitions.
#[derive(Clone, Debug, Default)]
pub struct GateRegistry {
    standard: BTreeSet<String>,
    custom: BTreeSet<String>,
    signatures: HashMap<String, GateSignature>,
}

impl GateRegistry {
    pub fn new() -> Self {
        let mut r = Self::default();
        r.signatures
            .insert("U".to_string(), GateSignature { params: 3, qubits: 1 });
        r.signatures
            .insert("gphase".to_string(), GateSignature { params: 1, qubits: 0 });
        r
    }

    /// Load the stdgates.inc roster. Idempotent.
    pub fn register_standard_gates(&mut self) {
        for &(name, params, qubits) in STDGATES {
            self.standard.insert(name.to_string());
            self.signatures
                .insert(name.to_string(), GateSignature { params, qubits });
        }
    }

    pub fn contains(&self, name: &str) -> bool {
        self.signatures.contains_key(name)
    }

    pub fn is_standard(&self, name: &str) -> bool {
        self.standard.contains(name)
    }

    pub fn is_custom(&self, name: &str) -> bool {
        self.custom.contains(name)
    }

    pub fn signature(&self, name: &str) -> Option<GateSignature> {
        self.signatures.get(name).copied()
    }

    /// Union view: standard gates, custom gates, and the built-ins.
    pub fn gates(&self) -> BTreeSet<&str> {
        self.signatures.keys().map(String::as_str).collect()
    }

    pub fn standard_gates(&self) -> &BTreeSet<String> {
        &self.standard
    }

    pub fn custom_gates(&self) -> &BTreeSet<String> {
        &self.custom
    }

    fn insert_custom(&mut self, name: &str, sig: GateSignature) {
        self.custom.insert(name.to_string());
        self.signatures.insert(name.to_string(), sig);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymbolKind {
    QubitRegister,
    ClassicalVariable,
    Alias { quantum: bool },
    Subroutine,
    LoopVariable,
    GateParameter,
    GateQubit,
}

#[derive(Clone, Debug)]
pub struct SymbolInfo {
    pub kind: SymbolKind,
    pub ty: Option<TypeSpec>,
    pub const_flag: bool,
    pub span: SourceSpan,
}

/// Scope stack. Inner scopes shadow outer ones; duplicates within one scope
/// are rejected by the analyzer.
#[derive(Debug, Default)]
pub struct SymbolTable {
    scopes: Vec<HashMap<String, SymbolInfo>>,
}

impl SymbolTable {
    fn new() -> Self {
        Self {
            scopes: vec![HashMap::new()],
        }
    }

    fn push(&mut self) {
        self.scopes.push(HashMap::new());
    }

    fn pop(&mut self) {
        self.scopes.pop();
    }

    /// Insert into the current scope. On a duplicate, returns the prior
    /// declaration's span and leaves the original binding in place.
    fn declare(&mut self, name: &str, info: SymbolInfo) -> Option<SourceSpan> {
        let scope = self.scopes.last_mut().expect("at least one scope");
        if let Some(prior) = scope.get(name) {
            return Some(prior.span);
        }
        scope.insert(name.to_string(), info);
        None
    }

    fn lookup(&self, name: &str) -> Option<&SymbolInfo> {
        self.scopes.iter().rev().find_map(|s| s.get(name))
    }
}

/// Shallow literal types, the domain of [`infer_literal_type`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InferredType {
    Int,
    Float,
    Bool,
    Bit(u32),
    Duration,
    Complex,
}

/// Type of a literal expression, or `None` for anything that is not a
/// literal. A sign applied to a numeric literal is looked through.
pub fn infer_literal_type(expr: &Expr) -> Option<InferredType> {
    match &expr.kind {
        ExprKind::IntegerLit { .. } => Some(InferredType::Int),
        ExprKind::FloatLit { .. } => Some(InferredType::Float),
        ExprKind::BooleanLit { .. } => Some(InferredType::Bool),
        ExprKind::BitstringLit { width, .. } => Some(InferredType::Bit(*width)),
        ExprKind::TimingLit { .. } => Some(InferredType::Duration),
        ExprKind::ImaginaryLit { .. } => Some(InferredType::Complex),
        ExprKind::Unary { op: UnaryOp::Neg, operand } => match infer_literal_type(operand) {
            t @ Some(InferredType::Int | InferredType::Float | InferredType::Complex) => t,
            _ => None,
        },
        _ => None,
    }
}

/// Result of [`analyze`]: every diagnostic found plus the final gate
/// registry (useful for tooling and tests).
#[derive(Debug)]
pub struct Analysis {
    pub diagnostics: Vec<Diagnostic>,
    pub registry: GateRegistry,
}

/// Validate a parsed program. Builds fresh state per invocation; the
/// program is not modified, and running twice yields identical results.
pub fn analyze(program: &Program) -> Analysis {
    let mut a = Analyzer::new();
    for stmt in &program.statements {
        a.check_stmt(stmt);
    }
    Analysis {
        diagnostics: a.diags,
        registry: a.registry,
    }
}

struct Analyzer {
    registry: GateRegistry,
    table: SymbolTable,
    diags: Vec<Diagnostic>,
    /// Nonzero while inside a gate body, where qubit operands may reference
    /// only the definition's own qubits.
    gate_depth: u32,
    /// Declared return types of enclosing subroutines (None = no `->`).
    return_types: Vec<Option<TypeSpec>>,
}

impl Analyzer {
    fn new() -> Self {
        let mut table = SymbolTable::new();
        for &name in BUILTIN_CONSTANTS {
            table.declare(
                name,
                SymbolInfo {
                    kind: SymbolKind::ClassicalVariable,
                    ty: Some(TypeSpec::new(
                        TypeKind::Float { width: None },
                        SourceSpan::default(),
                    )),
                    const_flag: true,
                    span: SourceSpan::default(),
                },
            );
        }
        for &name in BUILTIN_FUNCTIONS {
            table.declare(
                name,
                SymbolInfo {
                    kind: SymbolKind::Subroutine,
                    ty: None,
                    const_flag: false,
                    span: SourceSpan::default(),
                },
            );
        }
        table.push(); // file scope
        Self {
            registry: GateRegistry::new(),
            table,
            diags: Vec::new(),
            gate_depth: 0,
            return_types: Vec::new(),
        }
    }

    fn error(&mut self, code: &'static str, span: SourceSpan, message: impl Into<String>) {
        self.diags.push(Diagnostic::error(code, message, span));
    }

    fn declare(&mut self, name: &str, info: SymbolInfo) {
        let span = info.span;
        if let Some(prior) = self.table.declare(name, info) {
            self.error(
                codes::E_REDECLARE,
                span,
                format!(
                    "`{name}` is already declared in this scope (first declared at {}:{})",
                    prior.start_line, prior.start_col
                ),
            );
        }
    }

    fn check_stmt(&mut self, stmt: &Stmt) {
        match &stmt.kind {
            StmtKind::VersionStmt { .. }
            | StmtKind::Break
            | StmtKind::Continue
            | StmtKind::End
            | StmtKind::Pragma { .. }
            | StmtKind::CalBlock { .. }
            | StmtKind::DefcalBlock { .. }
            | StmtKind::CalGrammar { .. } => {}

            StmtKind::IncludeStmt { path } => {
                if path == "stdgates.inc" {
                    self.registry.register_standard_gates();
                }
            }

            StmtKind::QuantumDecl { name, size, .. } => {
                if let Some(size) = size {
                    self.check_expr(size);
                }
                let ty = TypeSpec::new(
                    TypeKind::Qubit {
                        size: size.clone().map(Box::new),
                    },
                    stmt.span,
                );
                self.declare(
                    name,
                    SymbolInfo {
                        kind: SymbolKind::QubitRegister,
                        ty: Some(ty),
                        const_flag: false,
                        span: stmt.span,
                    },
                );
            }

            StmtKind::ClassicalDecl {
                ty,
                name,
                init,
                const_flag,
                ..
            } => {
                self.check_type_widths(ty);
                if let Some(init) = init {
                    self.check_expr(init);
                    self.check_declaration_init(ty, init);
                }
                self.declare(
                    name,
                    SymbolInfo {
                        kind: SymbolKind::ClassicalVariable,
                        ty: Some(ty.clone()),
                        const_flag: *const_flag,
                        span: stmt.span,
                    },
                );
            }

            StmtKind::AliasDecl { name, parts } => {
                for part in parts {
                    self.check_expr(part);
                }
                let quantum = parts.first().is_some_and(|p| self.roots_in_quantum(p));
                self.declare(
                    name,
                    SymbolInfo {
                        kind: SymbolKind::Alias { quantum },
                        ty: None,
                        const_flag: false,
                        span: stmt.span,
                    },
                );
            }

            StmtKind::GateDef {
                name,
                params,
                qubits,
                body,
            } => {
                if self.registry.contains(name) {
                    let what = if self.registry.is_custom(name) {
                        "custom gate"
                    } else if self.registry.is_standard(name) {
                        "standard gate"
                    } else {
                        "built-in gate"
                    };
                    self.error(
                        codes::E_GATE_REDEF,
                        stmt.span,
                        format!("gate `{name}` is already defined as a {what}"),
                    );
                } else {
                    if self.table.lookup(name).is_some() {
                        self.error(
                            codes::E_NAME_CLASH,
                            stmt.span,
                            format!("gate `{name}` collides with a declared symbol"),
                        );
                    }
                    self.registry.insert_custom(
                        name,
                        GateSignature {
                            params: params.len(),
                            qubits: qubits.len(),
                        },
                    );
                }
                self.table.push();
                for p in params {
                    self.declare(
                        p,
                        SymbolInfo {
                            kind: SymbolKind::GateParameter,
                            ty: None,
                            const_flag: false,
                            span: stmt.span,
                        },
                    );
                }
                for q in qubits {
                    self.declare(
                        q,
                        SymbolInfo {
                            kind: SymbolKind::GateQubit,
                            ty: None,
                            const_flag: false,
                            span: stmt.span,
                        },
                    );
                }
                self.gate_depth += 1;
                for s in body {
                    self.check_stmt(s);
                }
                self.gate_depth -= 1;
                self.table.pop();
            }

            StmtKind::GateCall {
                modifiers,
                name,
                args,
                qubits,
                duration,
            } => {
                for m in modifiers {
                    match &m.kind {
                        GateModifierKind::Ctrl { count: Some(c) }
                        | GateModifierKind::NegCtrl { count: Some(c) } => self.check_expr(c),
                        GateModifierKind::Pow { exponent } => self.check_expr(exponent),
                        _ => {}
                    }
                }
                for arg in args {
                    self.check_expr(arg);
                }
                if let Some(d) = duration {
                    self.check_expr(d);
                }
                for q in qubits {
                    self.check_qubit_operand(q);
                }

                match self.registry.signature(name) {
                    None => {
                        let hint = if STDGATES.iter().any(|&(g, _, _)| g == name) {
                            "; did you forget `include \"stdgates.inc\";`?"
                        } else {
                            ""
                        };
                        self.error(
                            codes::E_UNDEF_GATE,
                            stmt.span,
                            format!("gate `{name}` is not defined{hint}"),
                        );
                    }
                    Some(sig) => {
                        if args.len() != sig.params {
                            self.error(
                                codes::E_PARAM_ARITY,
                                stmt.span,
                                format!(
                                    "gate `{name}` expects {} parameter{}, got {}",
                                    sig.params,
                                    plural(sig.params),
                                    args.len()
                                ),
                            );
                        }
                        if let Some(controls) = added_controls(modifiers) {
                            let expected = sig.qubits + controls;
                            if qubits.len() != expected {
                                self.error(
                                    codes::E_QUBIT_ARITY,
                                    stmt.span,
                                    format!(
                                        "gate `{name}` expects {expected} qubit operand{}, got {}",
                                        plural(expected),
                                        qubits.len()
                                    ),
                                );
                            }
                        }
                    }
                }

                for (i, a) in qubits.iter().enumerate() {
                    for b in &qubits[i + 1..] {
                        if exprs_structurally_equal(a, b) {
                            self.error(
                                codes::E_DUP_QUBIT,
                                b.span,
                                "qubit operand repeated in one gate call",
                            );
                        }
                    }
                }
            }

            StmtKind::Measure {
                target,
                destination,
            } => {
                self.check_qubit_operand(target);
                if let Some(dest) = destination {
                    self.check_expr(dest);
                    self.check_measure_widths(target, dest);
                }
            }

            StmtKind::Reset { target } => self.check_qubit_operand(target),

            StmtKind::Barrier { operands } => {
                for op in operands {
                    self.check_qubit_operand(op);
                }
            }

            StmtKind::Delay { duration, operands } => {
                self.check_expr(duration);
                for op in operands {
                    self.check_qubit_operand(op);
                }
            }

            StmtKind::Box { duration, body } => {
                if let Some(d) = duration {
                    self.check_expr(d);
                }
                self.table.push();
                for s in body {
                    self.check_stmt(s);
                }
                self.table.pop();
            }

            StmtKind::SubroutineDef {
                name,
                params,
                return_type,
                body,
            } => {
                self.declare(
                    name,
                    SymbolInfo {
                        kind: SymbolKind::Subroutine,
                        ty: return_type.clone(),
                        const_flag: false,
                        span: stmt.span,
                    },
                );
                self.table.push();
                for p in params {
                    let kind = if matches!(p.ty.kind, TypeKind::Qubit { .. }) {
                        SymbolKind::QubitRegister
                    } else {
                        SymbolKind::ClassicalVariable
                    };
                    self.check_type_widths(&p.ty);
                    self.declare(
                        &p.name,
                        SymbolInfo {
                            kind,
                            ty: Some(p.ty.clone()),
                            const_flag: false,
                            span: p.span,
                        },
                    );
                }
                self.return_types.push(return_type.clone());
                for s in body {
                    self.check_stmt(s);
                }
                self.return_types.pop();
                self.table.pop();
            }

            StmtKind::ExternDecl {
                name, param_types, ..
            } => {
                for ty in param_types {
                    self.check_type_widths(ty);
                }
                self.declare(
                    name,
                    SymbolInfo {
                        kind: SymbolKind::Subroutine,
                        ty: None,
                        const_flag: false,
                        span: stmt.span,
                    },
                );
            }

            StmtKind::Return { value } => {
                if let Some(v) = value {
                    self.check_expr(v);
                    if matches!(self.return_types.last(), Some(None)) {
                        self.error(
                            codes::E_TYPE_MISMATCH,
                            stmt.span,
                            "return with a value in a subroutine without a return type",
                        );
                    }
                }
            }

            StmtKind::If {
                condition,
                then_body,
                else_body,
            } => {
                self.check_expr(condition);
                self.check_scoped_body(then_body);
                if let Some(e) = else_body {
                    self.check_scoped_body(e);
                }
            }

            StmtKind::While { condition, body } => {
                self.check_expr(condition);
                self.check_scoped_body(body);
            }

            StmtKind::For {
                loop_var_type,
                loop_var,
                iterable,
                body,
            } => {
                self.check_type_widths(loop_var_type);
                self.check_expr(iterable);
                self.table.push();
                self.declare(
                    loop_var,
                    SymbolInfo {
                        kind: SymbolKind::LoopVariable,
                        ty: Some(loop_var_type.clone()),
                        const_flag: false,
                        span: stmt.span,
                    },
                );
                for s in body {
                    self.check_stmt(s);
                }
                self.table.pop();
            }

            StmtKind::ExpressionStmt { expr } => self.check_expr(expr),

            StmtKind::Assignment { lvalue, rvalue, .. } => {
                if let Some((name, span)) = root_identifier(lvalue) {
                    match self.table.lookup(name) {
                        None => {
                            self.error(
                                codes::E_UNDEF_SYMBOL,
                                span,
                                format!("`{name}` is not declared"),
                            );
                        }
                        Some(info) if info.const_flag => {
                            self.error(
                                codes::E_CONST_WRITE,
                                span,
                                format!("cannot assign to const `{name}`"),
                            );
                        }
                        Some(_) => {}
                    }
                }
                // Index expressions on the left side are ordinary reads.
                if let ExprKind::Index { indices, .. } = &lvalue.kind {
                    for i in indices {
                        self.check_expr(i);
                    }
                }
                self.check_expr(rvalue);
            }

            StmtKind::Annotation { statement, .. } => self.check_stmt(statement),
        }
    }

    fn check_scoped_body(&mut self, body: &[Stmt]) {
        self.table.push();
        for s in body {
            self.check_stmt(s);
        }
        self.table.pop();
    }

    /// Walk an expression tree checking that every identifier resolves.
    fn check_expr(&mut self, expr: &Expr) {
        match &expr.kind {
            ExprKind::IntegerLit { .. }
            | ExprKind::FloatLit { .. }
            | ExprKind::ImaginaryLit { .. }
            | ExprKind::BooleanLit { .. }
            | ExprKind::BitstringLit { .. }
            | ExprKind::TimingLit { .. }
            | ExprKind::HardwareQubit { .. } => {}
            ExprKind::Identifier { name } => {
                if self.table.lookup(name).is_none() {
                    self.error(
                        codes::E_UNDEF_SYMBOL,
                        expr.span,
                        format!("`{name}` is not declared"),
                    );
                }
            }
            ExprKind::Unary { operand, .. } => self.check_expr(operand),
            ExprKind::Binary { left, right, .. } => {
                self.check_expr(left);
                self.check_expr(right);
            }
            ExprKind::Index { base, indices } => {
                self.check_expr(base);
                for i in indices {
                    self.check_expr(i);
                }
            }
            ExprKind::Range { start, step, end } => {
                for part in [start, step, end].into_iter().flatten() {
                    self.check_expr(part);
                }
            }
            ExprKind::Call { callee, args } => {
                if self.table.lookup(callee).is_none() && !self.registry.contains(callee) {
                    self.error(
                        codes::E_UNDEF_SYMBOL,
                        expr.span,
                        format!("`{callee}` is not declared"),
                    );
                }
                for a in args {
                    self.check_expr(a);
                }
            }
            ExprKind::Cast { target, operand } => {
                self.check_type_widths(target);
                self.check_expr(operand);
            }
            ExprKind::DurationOf { body } => self.check_scoped_body(body),
            ExprKind::SizeOf { args } => {
                for a in args {
                    self.check_expr(a);
                }
            }
            ExprKind::SetLiteral { elements } | ExprKind::ArrayLiteral { elements } => {
                for e in elements {
                    self.check_expr(e);
                }
            }
            ExprKind::MeasureExpr { target } => self.check_qubit_operand(target),
        }
    }

    /// Width and size expressions inside type specifiers are classical
    /// expressions and get the same resolution checks.
    fn check_type_widths(&mut self, ty: &TypeSpec) {
        match &ty.kind {
            TypeKind::Bit { width }
            | TypeKind::Int { width }
            | TypeKind::Uint { width }
            | TypeKind::Float { width }
            | TypeKind::Angle { width } => {
                if let Some(w) = width {
                    self.check_expr(w);
                }
            }
            TypeKind::Qubit { size } => {
                if let Some(s) = size {
                    self.check_expr(s);
                }
            }
            TypeKind::Complex { base } => {
                if let Some(b) = base {
                    self.check_type_widths(b);
                }
            }
            TypeKind::Array {
                element,
                dimensions,
            } => {
                self.check_type_widths(element);
                for d in dimensions {
                    self.check_expr(d);
                }
            }
            TypeKind::Bool | TypeKind::Duration | TypeKind::Stretch => {}
        }
    }

    /// A gate-call operand must name a qubit: inside a gate body only the
    /// definition's own qubits are visible; elsewhere a qubit register, a
    /// quantum alias, or a hardware qubit.
    fn check_qubit_operand(&mut self, expr: &Expr) {
        match &expr.kind {
            ExprKind::HardwareQubit { .. } => {}
            ExprKind::Index { base, indices } => {
                for i in indices {
                    self.check_expr(i);
                }
                self.check_qubit_operand(base);
            }
            ExprKind::Identifier { name } => {
                let Some(info) = self.table.lookup(name) else {
                    self.error(
                        codes::E_UNDEF_QUBIT,
                        expr.span,
                        format!("`{name}` is not a declared qubit"),
                    );
                    return;
                };
                let ok = if self.gate_depth > 0 {
                    info.kind == SymbolKind::GateQubit
                } else {
                    matches!(
                        info.kind,
                        SymbolKind::QubitRegister | SymbolKind::Alias { quantum: true }
                    )
                };
                if !ok {
                    let msg = if self.gate_depth > 0 {
                        format!("`{name}` is not one of the gate's declared qubits")
                    } else {
                        format!("`{name}` is not a qubit register")
                    };
                    self.error(codes::E_UNDEF_QUBIT, expr.span, msg);
                }
            }
            // The parser already reported invalid operand shapes.
            _ => {}
        }
    }

    /// Does the expression's root identifier name a quantum resource?
    fn roots_in_quantum(&self, expr: &Expr) -> bool {
        match root_identifier(expr) {
            Some((name, _)) => matches!(
                self.table.lookup(name).map(|i| i.kind),
                Some(SymbolKind::QubitRegister)
                    | Some(SymbolKind::GateQubit)
                    | Some(SymbolKind::Alias { quantum: true })
            ),
            None => matches!(expr.kind, ExprKind::HardwareQubit { .. }),
        }
    }

    /// Declaration initializer check per the literal compatibility table.
    fn check_declaration_init(&mut self, ty: &TypeSpec, init: &Expr) {
        let Some(lit) = infer_literal_type(init) else {
            return;
        };
        match lit {
            InferredType::Int => {
                let ok = matches!(
                    ty.kind,
                    TypeKind::Int { .. }
                        | TypeKind::Uint { .. }
                        | TypeKind::Float { .. }
                        | TypeKind::Angle { .. }
                        | TypeKind::Complex { .. }
                );
                if !ok {
                    self.mismatch(ty, init, "an integer literal");
                }
            }
            InferredType::Float => {
                let ok = matches!(
                    ty.kind,
                    TypeKind::Float { .. } | TypeKind::Angle { .. } | TypeKind::Complex { .. }
                );
                if !ok {
                    self.mismatch(ty, init, "a float literal");
                }
            }
            InferredType::Bool => {
                let ok = match &ty.kind {
                    TypeKind::Bool => true,
                    TypeKind::Bit { width } => {
                        declared_width(width.as_deref()).is_none_or(|w| w == 1)
                    }
                    _ => false,
                };
                if !ok {
                    self.mismatch(ty, init, "a boolean literal");
                }
            }
            InferredType::Bit(w) => match &ty.kind {
                TypeKind::Bit { width } => {
                    let declared = declared_width(width.as_deref()).or(Some(1));
                    self.check_bit_width(declared, w, init.span);
                }
                TypeKind::Int { width } | TypeKind::Uint { width } => {
                    self.check_bit_width(declared_width(width.as_deref()), w, init.span);
                }
                _ => self.mismatch(ty, init, "a bitstring literal"),
            },
            InferredType::Duration => {
                if !matches!(ty.kind, TypeKind::Duration | TypeKind::Stretch) {
                    self.mismatch(ty, init, "a duration literal");
                }
            }
            InferredType::Complex => {
                if !matches!(ty.kind, TypeKind::Complex { .. }) {
                    self.mismatch(ty, init, "an imaginary literal");
                }
            }
        }
    }

    fn check_bit_width(&mut self, declared: Option<u64>, actual: u32, span: SourceSpan) {
        if let Some(declared) = declared {
            if declared != u64::from(actual) {
                self.error(
                    codes::E_WIDTH_MISMATCH,
                    span,
                    format!("bitstring has width {actual}, declared width is {declared}"),
                );
            }
        }
    }

    fn mismatch(&mut self, ty: &TypeSpec, init: &Expr, what: &str) {
        self.error(
            codes::E_TYPE_MISMATCH,
            init.span,
            format!("cannot initialize `{}` with {what}", type_name(&ty.kind)),
        );
    }

    /// `measure q -> c;` with both sides plain identifiers and both widths
    /// literal: widths must agree.
    fn check_measure_widths(&mut self, target: &Expr, dest: &Expr) {
        let (ExprKind::Identifier { name: tname }, ExprKind::Identifier { name: dname }) =
            (&target.kind, &dest.kind)
        else {
            return;
        };
        let target_size = match self.table.lookup(tname) {
            Some(SymbolInfo {
                ty: Some(ty),
                kind: SymbolKind::QubitRegister,
                ..
            }) => match &ty.kind {
                TypeKind::Qubit { size } => match size {
                    None => Some(1),
                    Some(s) => literal_value(s),
                },
                _ => None,
            },
            _ => None,
        };
        let dest_size = match self.table.lookup(dname) {
            Some(SymbolInfo { ty: Some(ty), .. }) => match &ty.kind {
                TypeKind::Bit { width } => match width {
                    None => Some(1),
                    Some(w) => literal_value(w),
                },
                _ => None,
            },
            _ => None,
        };
        if let (Some(t), Some(d)) = (target_size, dest_size) {
            if t != d {
                self.error(
                    codes::E_WIDTH_MISMATCH,
                    dest.span,
                    format!(
                        "measuring {t} qubit{} into {d} bit{}",
                        plural_u64(t),
                        plural_u64(d)
                    ),
                );
            }
        }
    }
}

/// Total added controls across the modifier list, or `None` when any count
/// is a non-literal expression (symbolic counts are accepted unchecked).
fn added_controls(modifiers: &[crate::ast::GateModifier]) -> Option<usize> {
    let mut total = 0usize;
    for m in modifiers {
        match &m.kind {
            GateModifierKind::Ctrl { count } | GateModifierKind::NegCtrl { count } => {
                match count {
                    None => total += 1,
                    Some(c) => total += literal_value(c)? as usize,
                }
            }
            GateModifierKind::Inv | GateModifierKind::Pow { .. } => {}
        }
    }
    Some(total)
}

fn literal_value(e: &Expr) -> Option<u64> {
    match e.kind {
        ExprKind::IntegerLit { value } => Some(value),
        _ => None,
    }
}

fn declared_width(width: Option<&Expr>) -> Option<u64> {
    width.and_then(literal_value)
}

fn root_identifier(e: &Expr) -> Option<(&str, SourceSpan)> {
    match &e.kind {
        ExprKind::Identifier { name } => Some((name, e.span)),
        ExprKind::Index { base, .. } => root_identifier(base),
        _ => None,
    }
}

fn type_name(kind: &TypeKind) -> &'static str {
    match kind {
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

fn plural(n: usize) -> &'static str {
    if n == 1 {
        ""
    } else {
        "s"
    }
}

fn plural_u64(n: u64) -> &'static str {
    if n == 1 {
        ""
    } else {
        "s"
    }
}
