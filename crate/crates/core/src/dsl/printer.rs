use std::fmt::Write;

use crate::geometry::Polyhedron;
use crate::ir::{AffineMap, BinOp, Equation, EquationSystem, Expr};

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Binary { op: BinOp::Add | BinOp::Sub, .. } => 1,
        Expr::Binary { op: BinOp::Mul | BinOp::Div, .. } => 2,
        _ => 3,
    }
}

fn scope(names: &[String], param: &str) -> Vec<String> {
    let mut s = names.to_vec();
    s.push(param.to_string());
    s
}

fn print_access(map: &AffineMap, names: &[String], param: &str) -> String {
    map.display_outputs(names, &[param.to_string()]).join(", ")
}

/// `{ i, j : c1, c2 }`
pub fn print_domain(names: &[String], poly: &Polyhedron, param: &str) -> String {
    let cons: Vec<String> = poly.constraints.iter().map(|c| c.display_with(&scope(names, param))).collect();
    if cons.is_empty() {
        format!("{{ {} : }}", names.join(", "))
    } else {
        format!("{{ {} : {} }}", names.join(", "), cons.join(", "))
    }
}

/// Prints an expression over the index names `names`; the output re-parses to the same tree.
pub fn print_expr(e: &Expr, names: &[String], param: &str) -> String {
    match e {
        Expr::Const(v) => v.to_string(),
        Expr::Read { var, access } => format!("{}[{}]", var, print_access(access, names, param)),
        Expr::Call { func, arg } => format!("{}({})", func, print_expr(arg, names, param)),
        Expr::Binary { op, lhs, rhs } if !op.is_infix() => format!(
            "{}({}, {})",
            op.symbol(),
            print_expr(lhs, names, param),
            print_expr(rhs, names, param)
        ),
        Expr::Binary { op, lhs, rhs } => {
            let p = prec(e);
            let l = print_expr(lhs, names, param);
            let r = print_expr(rhs, names, param);
            let l = if prec(lhs) < p { format!("({})", l) } else { l };
            let r = if prec(rhs) <= p { format!("({})", r) } else { r };
            format!("{} {} {}", l, op.symbol(), r)
        }
        Expr::Reduce(red) => format!(
            "reduce({}, ({} -> {}), {}, {})",
            red.op.symbol(),
            red.names.join(", "),
            print_access(&red.projection, &red.names, param),
            print_domain(&red.names, &red.domain, param),
            print_expr(&red.body, &red.names, param)
        ),
    }
}

pub fn print_equation(eq: &Equation, param: &str) -> String {
    let head = format!("{}[{}] = ", eq.target, eq.names.join(", "));
    if eq.cases.len() == 1 && eq.cases[0].guard.constraints.is_empty() {
        return format!("{}{};\n", head, print_expr(&eq.cases[0].expr, &eq.names, param));
    }
    let mut out = format!("{}case {{\n", head);
    for c in &eq.cases {
        let _ = writeln!(
            out,
            "    {} : {};",
            print_domain(&eq.names, &c.guard, param),
            print_expr(&c.expr, &eq.names, param)
        );
    }
    out.push_str("};\n");
    out
}

/// Canonical text of a whole system.
pub fn print_system(sys: &EquationSystem) -> String {
    let p = &sys.param.name;
    let mut out = format!("param {} >= {};\n", p, sys.param.min);
    for (name, kind) in &sys.funcs {
        let _ = writeln!(out, "func {} = {};", name, kind.name());
    }
    out.push('\n');
    for v in &sys.vars {
        let _ = writeln!(out, "{} {} : {};", v.role.keyword(), v.name, print_domain(&v.names, &v.domain, p));
    }
    for eq in &sys.equations {
        out.push('\n');
        out.push_str(&print_equation(eq, p));
    }
    out
}
