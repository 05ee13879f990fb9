//! AST interchange: canonical JSON in both directions plus a canonical
//! OpenQASM text renderer used as the round-trip oracle.
//!
//! The JSON document wraps the program in `{"format_version": 1,
//! "program": ...}`. Every node object carries a `"kind"` discriminant and
//! a `"span"` six-tuple; output is deterministic (fixed key order, no map
//! types anywhere on the serialization path).

use std::fmt::Write as _;

use serde::Serialize;

use crate::ast::{
    Expr, ExprKind, GateModifier, GateModifierKind, Program, Stmt, StmtKind, TypeKind,
    TypeSpec, Version,
};

pub const FORMAT_VERSION: u64 = 1;

#[derive(Debug, thiserror::Error)]
pub enum DeserializeError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("document has no integer format_version field")]
    MissingFormatVersion,
    #[error("format_version {found} is newer than the supported version {supported}")]
    FutureFormat { found: u64, supported: u64 },
    #[error("document has no program field")]
    MissingProgram,
    #[error("unknown node kind `{0}`")]
    UnknownKind(String),
    #[error("malformed document: {0}")]
    Malformed(String),
}

#[derive(Serialize)]
struct DocumentRef<'a> {
    format_version: u64,
    program: &'a Program,
}

/// Compact deterministic JSON for the whole program.
pub fn serialize_program(program: &Program) -> String {
    serde_json::to_string(&DocumentRef {
        format_version: FORMAT_VERSION,
        program,
    })
    .expect("AST serialization is infallible")
}

/// Same document, 2-space indented.
pub fn serialize_program_pretty(program: &Program) -> String {
    serde_json::to_string_pretty(&DocumentRef {
        format_version: FORMAT_VERSION,
        program,
    })
    .expect("AST serialization is infallible")
}

/// Every "kind" discriminant that can appear in a serialized tree.
const KNOWN_KINDS: &[&str] = &[
    "Program",
    "DefParam",
    // Statements.
    "VersionStmt",
    "IncludeStmt",
    "QuantumDecl",
    "ClassicalDecl",
    "AliasDecl",
    "GateDef",
    "GateCall",
    "Measure",
    "Reset",
    "Barrier",
    "Delay",
    "Box",
    "SubroutineDef",
    "ExternDecl",
    "Return",
    "If",
    "For",
    "While",
    "Break",
    "Continue",
    "End",
    "ExpressionStmt",
    "Assignment",
    "Pragma",
    "Annotation",
    "CalGrammar",
    "CalBlock",
    "DefcalBlock",
    // Expressions.
    "IntegerLit",
    "FloatLit",
    "ImaginaryLit",
    "BooleanLit",
    "BitstringLit",
    "TimingLit",
    "Identifier",
    "HardwareQubit",
    "Unary",
    "Binary",
    "Index",
    "Range",
    "Call",
    "Cast",
    "DurationOf",
    "SizeOf",
    "SetLiteral",
    "ArrayLiteral",
    "MeasureExpr",
    // Types.
    "Bit",
    "Int",
    "Uint",
    "Float",
    "Angle",
    "Bool",
    "Complex",
    "Duration",
    "Stretch",
    "Qubit",
    "Array",
    // Gate modifiers.
    "Ctrl",
    "NegCtrl",
    "Inv",
    "Pow",
];

/// Parse a document produced by [`serialize_program`] (or compatible).
/// Checks the format version and rejects unknown node kinds by name before
/// decoding into the typed tree.
pub fn deserialize_program(text: &str) -> Result<Program, DeserializeError> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let found = value
        .get("format_version")
        .and_then(serde_json::Value::as_u64)
        .ok_or(DeserializeError::MissingFormatVersion)?;
    if found > FORMAT_VERSION {
        return Err(DeserializeError::FutureFormat {
            found,
            supported: FORMAT_VERSION,
        });
    }
    let program = value
        .get("program")
        .ok_or(DeserializeError::MissingProgram)?;
    check_kinds(program)?;
    serde_json::from_value(program.clone())
        .map_err(|e| DeserializeError::Malformed(e.to_string()))
}

fn check_kinds(value: &serde_json::Value) -> Result<(), DeserializeError> {
    match value {
        serde_json::Value::Object(map) => {
            if let Some(serde_json::Value::String(kind)) = map.get("kind") {
                if !KNOWN_KINDS.contains(&kind.as_str()) {
                    return Err(DeserializeError::UnknownKind(kind.clone()));
                }
            }
            map.values().try_for_each(check_kinds)
        }
        serde_json::Value::Array(items) => items.iter().try_for_each(check_kinds),
        _ => Ok(()),
    }
}

/// Render a program back to OpenQASM text: version line always present, one
/// statement per line, fully parenthesized expressions, 2-space indents.
/// Re-parsing the output reconstructs a structurally equal tree.
pub fn render_canonical(program: &Program) -> String {
    let mut out = String::new();
    let version = program.version.unwrap_or(Version { major: 3, minor: 0 });
    let _ = writeln!(out, "OPENQASM {version};");
    for stmt in &program.statements {
        if matches!(stmt.kind, StmtKind::VersionStmt { .. }) {
            continue; // already emitted
        }
        render_stmt(&mut out, stmt, 0);
    }
    out
}

fn indent_of(level: usize) -> String {
    "  ".repeat(level)
}

fn render_stmt(out: &mut String, stmt: &Stmt, indent: usize) {
    out.push_str(&indent_of(indent));
    out.push_str(&stmt_text(stmt, indent));
    out.push('\n');
}

/// One statement, without leading indent or trailing newline. Block
/// statements include their inner lines (already indented) and closing
/// brace.
fn stmt_text(stmt: &Stmt, indent: usize) -> String {
    match &stmt.kind {
        StmtKind::VersionStmt { version } => format!("OPENQASM {version};"),
        StmtKind::IncludeStmt { path } => format!("include \"{path}\";"),
        StmtKind::QuantumDecl { name, size, legacy } => match (legacy, size) {
            (true, Some(s)) => format!("qreg {name}[{}];", expr_text(s)),
            (true, None) => format!("qreg {name};"),
            (false, Some(s)) => format!("qubit[{}] {name};", expr_text(s)),
            (false, None) => format!("qubit {name};"),
        },
        StmtKind::ClassicalDecl {
            ty,
            name,
            init,
            const_flag,
            io_modifier,
            legacy,
        } => {
            if *legacy {
                let width = match &ty.kind {
                    TypeKind::Bit { width: Some(w) } => format!("[{}]", expr_text(w)),
                    _ => String::new(),
                };
                return format!("creg {name}{width};");
            }
            let mut s = String::new();
            if *const_flag {
                s.push_str("const ");
            }
            if let Some(io) = io_modifier {
                s.push_str(io.keyword());
                s.push(' ');
            }
            let _ = write!(s, "{} {name}", type_text(ty));
            if let Some(init) = init {
                let _ = write!(s, " = {}", expr_text(init));
            }
            s.push(';');
            s
        }
        StmtKind::AliasDecl { name, parts } => {
            let joined = parts.iter().map(expr_text).collect::<Vec<_>>().join(" ++ ");
            format!("let {name} = {joined};")
        }
        StmtKind::GateDef {
            name,
            params,
            qubits,
            body,
        } => {
            let params = if params.is_empty() {
                String::new()
            } else {
                format!("({})", params.join(", "))
            };
            format!(
                "gate {name}{params} {} {}",
                qubits.join(", "),
                block_text(body, indent)
            )
        }
        StmtKind::GateCall {
            modifiers,
            name,
            args,
            qubits,
            duration,
        } => {
            let mut s = String::new();
            for m in modifiers {
                s.push_str(&modifier_text(m));
                s.push_str(" @ ");
            }
            s.push_str(name);
            if !args.is_empty() {
                let _ = write!(s, "({})", exprs_text(args));
            }
            if let Some(d) = duration {
                let _ = write!(s, "[{}]", expr_text(d));
            }
            if !qubits.is_empty() {
                let _ = write!(s, " {}", exprs_text(qubits));
            }
            s.push(';');
            s
        }
        StmtKind::Measure {
            target,
            destination,
        } => match destination {
            Some(d) => format!("measure {} -> {};", expr_text(target), expr_text(d)),
            None => format!("measure {};", expr_text(target)),
        },
        StmtKind::Reset { target } => format!("reset {};", expr_text(target)),
        StmtKind::Barrier { operands } => {
            if operands.is_empty() {
                "barrier;".to_string()
            } else {
                format!("barrier {};", exprs_text(operands))
            }
        }
        StmtKind::Delay { duration, operands } => {
            let mut s = format!("delay[{}]", expr_text(duration));
            if !operands.is_empty() {
                let _ = write!(s, " {}", exprs_text(operands));
            }
            s.push(';');
            s
        }
        StmtKind::Box { duration, body } => match duration {
            Some(d) => format!("box[{}] {}", expr_text(d), block_text(body, indent)),
            None => format!("box {}", block_text(body, indent)),
        },
        StmtKind::SubroutineDef {
            name,
            params,
            return_type,
            body,
        } => {
            let params = params
                .iter()
                .map(|p| format!("{} {}", type_text(&p.ty), p.name))
                .collect::<Vec<_>>()
                .join(", ");
            let ret = match return_type {
                Some(ty) => format!(" -> {}", type_text(ty)),
                None => String::new(),
            };
            format!("def {name}({params}){ret} {}", block_text(body, indent))
        }
        StmtKind::ExternDecl {
            name,
            param_types,
            return_type,
        } => {
            let params = param_types
                .iter()
                .map(type_text)
                .collect::<Vec<_>>()
                .join(", ");
            let ret = match return_type {
                Some(ty) => format!(" -> {}", type_text(ty)),
                None => String::new(),
            };
            format!("extern {name}({params}){ret};")
        }
        StmtKind::Return { value } => match value {
            Some(v) => format!("return {};", expr_text(v)),
            None => "return;".to_string(),
        },
        StmtKind::If {
            condition,
            then_body,
            else_body,
        } => {
            let mut s = format!(
                "if ({}) {}",
                expr_text(condition),
                block_text(then_body, indent)
            );
            if let Some(e) = else_body {
                let _ = write!(s, " else {}", block_text(e, indent));
            }
            s
        }
        StmtKind::For {
            loop_var_type,
            loop_var,
            iterable,
            body,
        } => {
            let iter = match &iterable.kind {
                ExprKind::Range { .. } => format!("[{}]", expr_text(iterable)),
                _ => expr_text(iterable),
            };
            format!(
                "for {} {loop_var} in {iter} {}",
                type_text(loop_var_type),
                block_text(body, indent)
            )
        }
        StmtKind::While { condition, body } => format!(
            "while ({}) {}",
            expr_text(condition),
            block_text(body, indent)
        ),
        StmtKind::Break => "break;".to_string(),
        StmtKind::Continue => "continue;".to_string(),
        StmtKind::End => "end;".to_string(),
        StmtKind::ExpressionStmt { expr } => format!("{};", expr_text(expr)),
        StmtKind::Assignment { lvalue, op, rvalue } => format!(
            "{} {} {};",
            expr_text(lvalue),
            op.symbol(),
            expr_text(rvalue)
        ),
        StmtKind::Pragma { text } => {
            if text.is_empty() {
                "pragma".to_string()
            } else {
                format!("pragma {text}")
            }
        }
        StmtKind::Annotation {
            name,
            text,
            statement,
        } => {
            let header = if text.is_empty() {
                format!("@{name}")
            } else {
                format!("@{name} {text}")
            };
            format!("{header}\n{}{}", indent_of(indent), stmt_text(statement, indent))
        }
        StmtKind::CalGrammar { name } => format!("defcalgrammar \"{name}\";"),
        StmtKind::CalBlock { raw } => {
            if raw.is_empty() {
                "cal { }".to_string()
            } else {
                format!("cal {{ {raw} }}")
            }
        }
        StmtKind::DefcalBlock { signature, raw } => {
            if raw.is_empty() {
                format!("defcal {signature} {{ }}")
            } else {
                format!("defcal {signature} {{ {raw} }}")
            }
        }
    }
}

fn block_text(body: &[Stmt], indent: usize) -> String {
    if body.is_empty() {
        return "{\n".to_string() + &indent_of(indent) + "}";
    }
    let mut s = String::from("{\n");
    for stmt in body {
        render_stmt(&mut s, stmt, indent + 1);
    }
    s.push_str(&indent_of(indent));
    s.push('}');
    s
}

fn modifier_text(m: &GateModifier) -> String {
    match &m.kind {
        GateModifierKind::Ctrl { count: None } => "ctrl".to_string(),
        GateModifierKind::Ctrl { count: Some(c) } => format!("ctrl({})", expr_text(c)),
        GateModifierKind::NegCtrl { count: None } => "negctrl".to_string(),
        GateModifierKind::NegCtrl { count: Some(c) } => format!("negctrl({})", expr_text(c)),
        GateModifierKind::Inv => "inv".to_string(),
        GateModifierKind::Pow { exponent } => format!("pow({})", expr_text(exponent)),
    }
}

fn exprs_text(exprs: &[Expr]) -> String {
    exprs.iter().map(expr_text).collect::<Vec<_>>().join(", ")
}

fn expr_text(e: &Expr) -> String {
    match &e.kind {
        ExprKind::IntegerLit { value } => value.to_string(),
        ExprKind::FloatLit { value } => format!("{value:?}"),
        ExprKind::ImaginaryLit { value } => format!("{value:?}im"),
        ExprKind::BooleanLit { value } => value.to_string(),
        ExprKind::BitstringLit { bits, .. } => format!("\"{bits}\""),
        ExprKind::TimingLit { value, unit } => format!("{value:?}{unit}"),
        ExprKind::Identifier { name } => name.clone(),
        ExprKind::HardwareQubit { index } => format!("${index}"),
        ExprKind::Unary { op, operand } => format!("({}{})", op.symbol(), expr_text(operand)),
        ExprKind::Binary { op, left, right } => format!(
            "({} {} {})",
            expr_text(left),
            op.symbol(),
            expr_text(right)
        ),
        ExprKind::Index { base, indices } => {
            format!("{}[{}]", expr_text(base), exprs_text(indices))
        }
        ExprKind::Range { start, step, end } => {
            let part = |p: &Option<Box<Expr>>| p.as_deref().map(expr_text).unwrap_or_default();
            match step {
                Some(_) => format!("{}:{}:{}", part(start), part(step), part(end)),
                None => format!("{}:{}", part(start), part(end)),
            }
        }
        ExprKind::Call { callee, args } => format!("{callee}({})", exprs_text(args)),
        ExprKind::Cast { target, operand } => {
            format!("{}({})", type_text(target), expr_text(operand))
        }
        ExprKind::DurationOf { body } => {
            let stmts = body
                .iter()
                .map(|s| stmt_text(s, 0))
                .collect::<Vec<_>>()
                .join(" ");
            if stmts.is_empty() {
                "durationof({ })".to_string()
            } else {
                format!("durationof({{ {stmts} }})")
            }
        }
        ExprKind::SizeOf { args } => format!("sizeof({})", exprs_text(args)),
        ExprKind::SetLiteral { elements } | ExprKind::ArrayLiteral { elements } => {
            format!("{{{}}}", exprs_text(elements))
        }
        ExprKind::MeasureExpr { target } => format!("measure {}", expr_text(target)),
    }
}

fn type_text(ty: &TypeSpec) -> String {
    let kw = ty.kind.keyword();
    match &ty.kind {
        TypeKind::Bit { width }
        | TypeKind::Int { width }
        | TypeKind::Uint { width }
        | TypeKind::Float { width }
        | TypeKind::Angle { width } => match width {
            Some(w) => format!("{kw}[{}]", expr_text(w)),
            None => kw.to_string(),
        },
        TypeKind::Qubit { size } => match size {
            Some(s) => format!("{kw}[{}]", expr_text(s)),
            None => kw.to_string(),
        },
        TypeKind::Complex { base } => match base {
            Some(b) => format!("{kw}[{}]", type_text(b)),
            None => kw.to_string(),
        },
        TypeKind::Array {
            element,
            dimensions,
        } => format!("{kw}[{}, {}]", type_text(element), exprs_text(dimensions)),
        TypeKind::Bool | TypeKind::Duration | TypeKind::Stretch => kw.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::structural_equal;
    use crate::span::SourceSpan;

    fn parse_clean(source: &str) -> Program {
        let out = crate::parse(source);
        assert!(
            !out.diagnostics.iter().any(|d| d.is_error()),
            "{source}: {:?}",
            out.diagnostics
        );
        out.program
    }

    #[test]
    fn golden_empty_program() {
        let program = Program {
            version: None,
            statements: Vec::new(),
            span: SourceSpan::new(0, 0, 1, 1, 1, 1),
        };
        assert_eq!(
            serialize_program(&program),
            r#"{"format_version":1,"program":{"kind":"Program","version":null,"statements":[],"span":[0,0,1,1,1,1]}}"#
        );
    }

    #[test]
    fn serialize_deserialize_round_trip() {
        let program = parse_clean(
            "OPENQASM 3.0;\ninclude \"stdgates.inc\";\nqubit[2] q;\nbit[2] c;\nh q[0];\nctrl @ x q[0], q[1];\nc[0] = measure q[0];\nif (c[0] == 1) {\n  x q[1];\n}",
        );
        let text = serialize_program(&program);
        let back = deserialize_program(&text).unwrap();
        assert!(structural_equal(&program, &back));
        // Spans survive exactly, so the trees are fully equal too.
        assert_eq!(program, back);
        // serialize(deserialize(t)) = t.
        assert_eq!(serialize_program(&back), text);
    }

    #[test]
    fn pretty_variant_parses_back() {
        let program = parse_clean("qubit q;");
        let pretty = serialize_program_pretty(&program);
        assert!(pretty.contains('\n'));
        let back = deserialize_program(&pretty).unwrap();
        assert_eq!(program, back);
    }

    #[test]
    fn serialization_is_deterministic() {
        let program = parse_clean("OPENQASM 3.0; qubit[2] q; U(pi, 0, pi) q[0];");
        assert_eq!(serialize_program(&program), serialize_program(&program));
    }

    #[test]
    fn unknown_kind_is_named_in_error() {
        let text = r#"{"format_version":1,"program":{"kind":"Program","version":null,"statements":[{"kind":"Bogus","span":[0,0,1,1,1,1]}],"span":[0,0,1,1,1,1]}}"#;
        match deserialize_program(text) {
            Err(DeserializeError::UnknownKind(k)) => assert_eq!(k, "Bogus"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn future_format_version_rejected() {
        let text = r#"{"format_version":2,"program":{"kind":"Program","version":null,"statements":[],"span":[0,0,1,1,1,1]}}"#;
        assert!(matches!(
            deserialize_program(text),
            Err(DeserializeError::FutureFormat { found: 2, .. })
        ));
    }

    #[test]
    fn truncated_document_is_an_error_not_a_crash() {
        let program = parse_clean("qubit q;");
        let text = serialize_program(&program);
        let truncated = &text[..text.len() / 2];
        assert!(deserialize_program(truncated).is_err());
    }

    #[test]
    fn missing_fields_are_errors() {
        assert!(matches!(
            deserialize_program(r#"{"program":{}}"#),
            Err(DeserializeError::MissingFormatVersion)
        ));
        assert!(matches!(
            deserialize_program(r#"{"format_version":1}"#),
            Err(DeserializeError::MissingProgram)
        ));
    }

    #[test]
    fn render_materializes_version_line() {
        let program = parse_clean("qubit q;");
        assert_eq!(render_canonical(&program), "OPENQASM 3.0;\nqubit q;\n");
    }

    #[test]
    fn render_keeps_explicit_version() {
        let program = parse_clean("OPENQASM 3.1; qubit q;");
        assert!(render_canonical(&program).starts_with("OPENQASM 3.1;\n"));
    }

    #[test]
    fn render_fully_parenthesizes() {
        let program = parse_clean("x = a + b * c;");
        let text = render_canonical(&program);
        assert!(text.contains("x = (a + (b * c));"), "{text}");
    }

    #[test]
    fn render_reparse_round_trip_per_statement_kind() {
        // One source per statement kind, each carrying a version line so
        // the round trip is strict.
        let sources = [
            "OPENQASM 3.0; include \"stdgates.inc\";",
            "OPENQASM 3.0; qubit q; qubit[2] r;",
            "OPENQASM 3.0; qreg q[5]; creg c[5];",
            "OPENQASM 3.0; const int[32] k = 5; input float theta; output bit result;",
            "OPENQASM 3.0; complex[float[64]] z = 2.5im;",
            "OPENQASM 3.0; array[int[8], 2, 3] grid;",
            "OPENQASM 3.0; qubit[4] q; let a = q[0:1] ++ q[2:3];",
            "OPENQASM 3.0; gate h2 a, b { h a; h b; }",
            "OPENQASM 3.0; gate p2(t) a { gphase(t / 2); }",
            "OPENQASM 3.0; qubit[3] q; ctrl(2) @ inv @ pow(2) @ s q[0], q[1], q[2];",
            "OPENQASM 3.0; qubit q; rx(pi / 2) q;",
            "OPENQASM 3.0; qubit q; x[50ns] q;",
            "OPENQASM 3.0; qubit q; bit c; measure q -> c; c = measure q;",
            "OPENQASM 3.0; qubit q; reset q; barrier; barrier q;",
            "OPENQASM 3.0; qubit q; delay[100ns] q; delay[2 * 100ns];",
            "OPENQASM 3.0; qubit q; box[250ns] { delay[100ns] q; } box { x q; }",
            "OPENQASM 3.0; def f(int[8] a, qubit q) -> bit { return measure q; }",
            "OPENQASM 3.0; def g() { return; }",
            "OPENQASM 3.0; extern rand(int[32], float) -> float;",
            "OPENQASM 3.0; bit c; if (c == 1) { x q; } else { y q; }",
            "OPENQASM 3.0; for uint i in [0:2:8] { x q; } for int j in {1, 2} y q;",
            "OPENQASM 3.0; bit c; while (c) { c = measure q; break; continue; } end;",
            "OPENQASM 3.0; int i = 0; i **= 2; i <<= 1; i %= 3;",
            "OPENQASM 3.0; x = -2 ** 2 + ~y | !z;",
            "OPENQASM 3.0; x = arr[0:2:8]; y = arr[:, 1];",
            "OPENQASM 3.0; duration d = durationof({ x q; y q; });",
            "OPENQASM 3.0; int n = sizeof(a, 0);",
            "OPENQASM 3.0; float f = float[32](1) + int[8](x);",
            "OPENQASM 3.0; x $0; cx $0, $1;",
            "OPENQASM 3.0; pragma qiskit.shots 1024",
            "OPENQASM 3.0; @reversible\ngate f a { x a; }",
            "OPENQASM 3.0; @cal.pulse amplitude 0.5\nx q;",
            "OPENQASM 3.0; defcalgrammar \"openpulse\";",
            "OPENQASM 3.0; cal { shift_phase(drive0, 0.5); }",
            "OPENQASM 3.0; defcal x $0 { play(drive0, gauss(1.0)); }",
            "OPENQASM 3.0; gphase(pi / 4);",
        ];
        for src in sources {
            let first = parse_clean(src);
            let rendered = render_canonical(&first);
            let second = crate::parse(&rendered);
            assert!(
                !second.diagnostics.iter().any(|d| d.is_error()),
                "{src}\nrendered:\n{rendered}\n{:?}",
                second.diagnostics
            );
            assert!(
                structural_equal(&first, &second.program),
                "not structurally equal after round trip:\n{src}\nrendered:\n{rendered}"
            );
        }
    }

    #[test]
    fn versionless_render_reaches_fixpoint_on_second_pass() {
        let first = parse_clean("qubit q; h q;");
        let r1 = render_canonical(&first);
        let second = parse_clean(&r1);
        let r2 = render_canonical(&second);
        let third = parse_clean(&r2);
        assert!(structural_equal(&second, &third));
        assert_eq!(r2, render_canonical(&third));
    }

    #[test]
    fn nested_blocks_indent_two_spaces() {
        let program = parse_clean("OPENQASM 3.0; if (c) { if (d) { x q; } }");
        let text = render_canonical(&program);
        assert!(text.contains("\n  if ((d)) {") || text.contains("\n  if (d) {"), "{text}");
        assert!(text.contains("\n    x q;"), "{text}");
    }

    #[test]
    fn float_rendering_is_reparseable() {
        let program = parse_clean("OPENQASM 3.0; f = 0.1 + 2.0 + 1e300 + 2.5e-3;");
        let rendered = render_canonical(&program);
        let back = parse_clean(&rendered);
        assert!(structural_equal(&program, &back), "{rendered}");
    }
}
