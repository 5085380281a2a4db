use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::lexer::{lex, Tok, Token};
use super::ParseError;
use crate::geometry::constraint::{Constraint, ConstraintKind};
use crate::geometry::Polyhedron;
use crate::ir::{
    AffineMap, BinOp, Case, Equation, EquationSystem, Expr, FuncKind, Param, ReduceOp, Reduction, Role, Value,
    VarDecl,
};

/// Affine form over a scope of names (indices then the parameter).
#[derive(Debug, Clone)]
struct Lin {
    coeffs: Vec<BigInt>,
    constant: BigInt,
}

impl Lin {
    fn constant(n: usize, v: BigInt) -> Lin {
        Lin { coeffs: vec![BigInt::zero(); n], constant: v }
    }

    fn is_constant(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn scale(mut self, k: &BigInt) -> Lin {
        for c in self.coeffs.iter_mut() {
            *c *= k;
        }
        self.constant *= k;
        self
    }

    fn add(mut self, o: &Lin, sign: i64) -> Lin {
        let s = BigInt::from(sign);
        for (a, b) in self.coeffs.iter_mut().zip(&o.coeffs) {
            *a += &s * b;
        }
        self.constant += &s * &o.constant;
        self
    }
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    param: Option<Param>,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn err<T>(&self, msg: impl Into<String>) -> PResult<T> {
        let t = &self.toks[self.pos];
        Err(ParseError { line: t.line, col: t.col, message: msg.into() })
    }

    fn is_punct(&self, p: &str) -> bool {
        matches!(self.peek(), Tok::Punct(q) if *q == p)
    }

    fn is_kw(&self, k: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == k)
    }

    fn eat_punct(&mut self, p: &str) -> bool {
        if self.is_punct(p) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, p: &str) -> PResult<()> {
        if self.eat_punct(p) {
            Ok(())
        } else {
            self.err(format!("expected `{}`, found {}", p, describe(self.peek())))
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.pos += 1;
                Ok(s)
            }
            t => self.err(format!("expected identifier, found {}", describe(&t))),
        }
    }

    fn int(&mut self) -> PResult<BigInt> {
        let neg = self.eat_punct("-");
        match self.peek().clone() {
            Tok::Int(v) => {
                self.pos += 1;
                Ok(if neg { -v } else { v })
            }
            t => self.err(format!("expected integer, found {}", describe(&t))),
        }
    }

    fn param_name(&self) -> String {
        self.param.as_ref().map(|p| p.name.clone()).unwrap_or_default()
    }

    fn scope(&self, names: &[String]) -> Vec<String> {
        let mut s = names.to_vec();
        s.push(self.param_name());
        s
    }

    // ---- affine expressions ----

    fn affine(&mut self, scope: &[String]) -> PResult<Lin> {
        let mut acc = if self.eat_punct("-") {
            self.aff_term(scope)?.scale(&BigInt::from(-1))
        } else {
            self.aff_term(scope)?
        };
        loop {
            if self.eat_punct("+") {
                let t = self.aff_term(scope)?;
                acc = acc.add(&t, 1);
            } else if self.eat_punct("-") {
                let t = self.aff_term(scope)?;
                acc = acc.add(&t, -1);
            } else {
                return Ok(acc);
            }
        }
    }

    fn aff_term(&mut self, scope: &[String]) -> PResult<Lin> {
        let mut acc = self.aff_factor(scope)?;
        while self.eat_punct("*") {
            let f = self.aff_factor(scope)?;
            acc = if acc.is_constant() {
                f.scale(&acc.constant)
            } else if f.is_constant() {
                acc.scale(&f.constant)
            } else {
                return self.err("non-affine product");
            };
        }
        Ok(acc)
    }

    fn aff_factor(&mut self, scope: &[String]) -> PResult<Lin> {
        let n = scope.len();
        match self.peek().clone() {
            Tok::Int(v) => {
                self.pos += 1;
                Ok(Lin::constant(n, v))
            }
            Tok::Ident(s) => {
                let Some(k) = scope.iter().position(|x| *x == s) else {
                    return self.err(format!("unknown index or parameter `{}`", s));
                };
                self.pos += 1;
                let mut l = Lin::constant(n, BigInt::zero());
                l.coeffs[k] = BigInt::from(1);
                Ok(l)
            }
            Tok::Punct("(") => {
                self.pos += 1;
                let l = self.affine(scope)?;
                self.expect(")")?;
                Ok(l)
            }
            Tok::Punct("-") => {
                self.pos += 1;
                Ok(self.aff_factor(scope)?.scale(&BigInt::from(-1)))
            }
            t => self.err(format!("expected affine term, found {}", describe(&t))),
        }
    }

    fn affine_map(&mut self, names: &[String], close: &str) -> PResult<AffineMap> {
        let scope = self.scope(names);
        let mut rows = Vec::new();
        if !self.is_punct(close) {
            loop {
                rows.push(self.affine(&scope)?);
                if !self.eat_punct(",") {
                    break;
                }
            }
        }
        self.expect(close)?;
        let n = names.len();
        let mut m = AffineMap { matrix: Vec::new(), param_matrix: Vec::new(), constant: Vec::new() };
        for r in rows {
            m.matrix.push(r.coeffs[..n].to_vec());
            m.param_matrix.push(r.coeffs[n..].to_vec());
            m.constant.push(r.constant);
        }
        Ok(m)
    }

    // ---- domains ----

    fn index_list(&mut self, close: &str) -> PResult<Vec<String>> {
        let mut names = Vec::new();
        if !self.is_punct(close) {
            loop {
                let n = self.ident()?;
                if names.contains(&n) || n == self.param_name() {
                    return self.err(format!("duplicate index `{}`", n));
                }
                names.push(n);
                if !self.eat_punct(",") {
                    break;
                }
            }
        }
        Ok(names)
    }

    /// `{ i, j : c1, c2 }` → (index names, polyhedron).
    fn domain(&mut self) -> PResult<(Vec<String>, Polyhedron)> {
        self.expect("{")?;
        let names = self.index_list(":")?;
        self.expect(":")?;
        let scope = self.scope(&names);
        let mut cons = Vec::new();
        if !self.is_punct("}") {
            loop {
                self.chain(&scope, &mut cons)?;
                if !self.eat_punct(",") {
                    break;
                }
            }
        }
        self.expect("}")?;
        let poly = Polyhedron::canonicalize(&cons, names.len(), 1).map_err(|e| ParseError {
            line: self.toks[self.pos].line,
            col: self.toks[self.pos].col,
            message: e.to_string(),
        })?;
        Ok((names, poly))
    }

    fn relop(&mut self) -> Option<&'static str> {
        for op in ["<=", ">=", "==", "<", ">"] {
            if self.eat_punct(op) {
                return Some(op);
            }
        }
        None
    }

    fn chain(&mut self, scope: &[String], out: &mut Vec<Constraint>) -> PResult<()> {
        let mut lhs = self.affine(scope)?;
        let Some(mut op) = self.relop() else {
            return self.err("expected comparison operator");
        };
        loop {
            let rhs = self.affine(scope)?;
            let diff = |a: &Lin, b: &Lin| a.clone().add(b, -1);
            let (form, kind) = match op {
                ">=" => (diff(&lhs, &rhs), ConstraintKind::Inequality),
                "<=" => (diff(&rhs, &lhs), ConstraintKind::Inequality),
                ">" => (diff(&lhs, &rhs).add(&Lin::constant(scope.len(), BigInt::from(1)), -1), ConstraintKind::Inequality),
                "<" => (diff(&rhs, &lhs).add(&Lin::constant(scope.len(), BigInt::from(1)), -1), ConstraintKind::Inequality),
                _ => (diff(&lhs, &rhs), ConstraintKind::Equality),
            };
            out.push(Constraint::new(form.coeffs, form.constant, kind));
            lhs = rhs;
            match self.relop() {
                Some(o) => op = o,
                None => return Ok(()),
            }
        }
    }

    // ---- value expressions ----

    fn expr(&mut self, names: &[String]) -> PResult<Expr> {
        let mut acc = self.mul_expr(names)?;
        loop {
            let op = if self.eat_punct("+") {
                BinOp::Add
            } else if self.eat_punct("-") {
                BinOp::Sub
            } else {
                return Ok(acc);
            };
            let rhs = self.mul_expr(names)?;
            acc = Expr::binary(op, acc, rhs);
        }
    }

    fn mul_expr(&mut self, names: &[String]) -> PResult<Expr> {
        let mut acc = self.unary(names)?;
        loop {
            let op = if self.eat_punct("*") {
                BinOp::Mul
            } else if self.eat_punct("/") {
                BinOp::Div
            } else {
                return Ok(acc);
            };
            let rhs = self.unary(names)?;
            acc = Expr::binary(op, acc, rhs);
        }
    }

    fn unary(&mut self, names: &[String]) -> PResult<Expr> {
        if self.eat_punct("-") {
            return Ok(match self.unary(names)? {
                Expr::Const(Value::Fin(v)) => Expr::Const(Value::Fin(-v)),
                Expr::Const(Value::PosInf) => Expr::Const(Value::NegInf),
                e => Expr::binary(BinOp::Sub, Expr::Const(Value::int(0)), e),
            });
        }
        self.primary(names)
    }

    fn primary(&mut self, names: &[String]) -> PResult<Expr> {
        match self.peek().clone() {
            Tok::Int(v) => {
                self.pos += 1;
                Ok(Expr::Const(Value::Fin(v)))
            }
            Tok::Punct("(") => {
                self.pos += 1;
                let e = self.expr(names)?;
                self.expect(")")?;
                Ok(e)
            }
            Tok::Ident(s) if s == "inf" => {
                self.pos += 1;
                Ok(Expr::Const(Value::PosInf))
            }
            Tok::Ident(s) if (s == "min" || s == "max") && matches!(self.peek_at(1), Tok::Punct("(")) => {
                self.pos += 2;
                let a = self.expr(names)?;
                self.expect(",")?;
                let b = self.expr(names)?;
                self.expect(")")?;
                Ok(Expr::binary(if s == "min" { BinOp::Min } else { BinOp::Max }, a, b))
            }
            Tok::Ident(s) if s == "reduce" => {
                self.pos += 1;
                self.reduce(names)
            }
            Tok::Ident(s) => {
                self.pos += 1;
                if self.eat_punct("[") {
                    let access = self.affine_map(names, "]")?;
                    Ok(Expr::Read { var: s, access })
                } else if self.eat_punct("(") {
                    let arg = self.expr(names)?;
                    self.expect(")")?;
                    Ok(Expr::Call { func: s, arg: Box::new(arg) })
                } else {
                    self.pos -= 1;
                    self.err(format!("expected `[` or `(` after `{}`", s))
                }
            }
            t => self.err(format!("expected expression, found {}", describe(&t))),
        }
    }

    fn reduce(&mut self, outer: &[String]) -> PResult<Expr> {
        self.expect("(")?;
        let op = if self.eat_punct("+") {
            ReduceOp::Plus
        } else if self.eat_punct("*") {
            ReduceOp::Times
        } else if self.is_kw("min") {
            self.pos += 1;
            ReduceOp::Min
        } else if self.is_kw("max") {
            self.pos += 1;
            ReduceOp::Max
        } else {
            return self.err("expected reduction operator (+, *, min, max)");
        };
        self.expect(",")?;
        self.expect("(")?;
        let names = self.index_list("->")?;
        self.expect("->")?;
        let projection = self.affine_map(&names, ")")?;
        if projection.out_dim() != outer.len() {
            return self.err(format!("projection has {} outputs, expected {}", projection.out_dim(), outer.len()));
        }
        self.expect(",")?;
        let (dnames, domain) = self.domain()?;
        if dnames != names {
            return self.err("reduction domain indices must match the projection's inputs");
        }
        self.expect(",")?;
        let body = self.expr(&names)?;
        if !body.reductions().is_empty() {
            return self.err("nested reductions are not supported");
        }
        self.expect(")")?;
        Ok(Expr::Reduce(Box::new(Reduction { op, names, projection, domain, body })))
    }

    // ---- items ----

    fn equation(&mut self, target: String) -> PResult<Equation> {
        self.expect("[")?;
        let names = self.index_list("]")?;
        self.expect("]")?;
        self.expect("=")?;
        let mut cases = Vec::new();
        if self.is_kw("case") && matches!(self.peek_at(1), Tok::Punct("{")) {
            self.pos += 2;
            while !self.eat_punct("}") {
                let (gnames, guard) = self.domain()?;
                if gnames != names {
                    return self.err("guard indices must match the equation's indices");
                }
                self.expect(":")?;
                let expr = self.expr(&names)?;
                self.expect(";")?;
                cases.push(Case { guard, expr });
            }
            if cases.is_empty() {
                return self.err("empty case list");
            }
        } else {
            let expr = self.expr(&names)?;
            cases.push(Case { guard: Polyhedron::universe(names.len(), 1), expr });
        }
        self.expect(";")?;
        Ok(Equation { target, names, cases })
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{}`", s),
        Tok::Int(v) => format!("`{}`", v),
        Tok::Punct(p) => format!("`{}`", p),
        Tok::Eof => "end of input".to_string(),
    }
}

/// Parses `.eqs` source text into an (unvalidated) equation system.
pub fn parse(src: &str) -> Result<EquationSystem, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, param: None };
    let mut funcs = BTreeMap::new();
    let mut vars = Vec::new();
    let mut equations = Vec::new();
    while *p.peek() != Tok::Eof {
        let kw = match p.peek() {
            Tok::Ident(s) => s.clone(),
            t => return p.err(format!("expected declaration or equation, found {}", describe(t))),
        };
        if kw == "param" {
            if p.param.is_some() {
                return p.err("only a single size parameter is supported");
            }
            p.pos += 1;
            let name = p.ident()?;
            p.expect(">=")?;
            let min = p.int()?;
            p.expect(";")?;
            let min = min.to_i64().ok_or_else(|| ParseError { line: 1, col: 1, message: "parameter bound too large".into() })?;
            p.param = Some(Param { name, min });
            continue;
        }
        if p.param.is_none() {
            return Err(ParseError { line: 1, col: 1, message: "missing `param` declaration before first item".into() });
        }
        match kw.as_str() {
            "input" | "output" | "var" => {
                p.pos += 1;
                let role = match kw.as_str() {
                    "input" => Role::Input,
                    "output" => Role::Output,
                    _ => Role::Local,
                };
                let name = p.ident()?;
                p.expect(":")?;
                let (names, domain) = p.domain()?;
                p.expect(";")?;
                vars.push(VarDecl { name, role, names, domain });
            }
            "func" => {
                p.pos += 1;
                let name = p.ident()?;
                p.expect("=")?;
                let kind = p.ident()?;
                let Some(k) = FuncKind::parse(&kind) else {
                    p.pos -= 1;
                    return p.err(format!("unknown function kind `{}` (inc, double, sqmod97, id)", kind));
                };
                p.expect(";")?;
                funcs.insert(name, k);
            }
            _ => {
                p.pos += 1;
                equations.push(p.equation(kw)?);
            }
        }
    }
    let Some(param) = p.param else {
        return Err(ParseError { line: 1, col: 1, message: "missing `param` declaration".into() });
    };
    Ok(EquationSystem { param, funcs, vars, equations })
}
