//! Symbolic differentiation over a shared expression graph, evaluated with
//! plain complex arithmetic. Serves as an oracle for jet derivatives.

use std::collections::HashMap;
use std::rc::Rc;

use kappa_core::expr::{BinOp, Constant, Expr, Func};
use kappa_core::Complex64;

#[derive(Debug)]
pub enum Node {
    Const(Complex64),
    Var,
    Add(Sym, Sym),
    Sub(Sym, Sym),
    Mul(Sym, Sym),
    Div(Sym, Sym),
    Neg(Sym),
    Exp(Sym),
    Sin(Sym),
    Cos(Sym),
    Sqrt(Sym),
    Powi(Sym, i32),
}

pub type Sym = Rc<Node>;

fn constant(v: Complex64) -> Sym {
    Rc::new(Node::Const(v))
}

fn is_const(s: &Sym, v: f64) -> bool {
    matches!(**s, Node::Const(c) if c == Complex64::new(v, 0.0))
}

fn add(a: Sym, b: Sym) -> Sym {
    if is_const(&a, 0.0) {
        b
    } else if is_const(&b, 0.0) {
        a
    } else {
        Rc::new(Node::Add(a, b))
    }
}

fn sub(a: Sym, b: Sym) -> Sym {
    if is_const(&b, 0.0) {
        a
    } else if is_const(&a, 0.0) {
        Rc::new(Node::Neg(b))
    } else {
        Rc::new(Node::Sub(a, b))
    }
}

fn mul(a: Sym, b: Sym) -> Sym {
    if is_const(&a, 0.0) || is_const(&b, 0.0) {
        constant(Complex64::new(0.0, 0.0))
    } else if is_const(&a, 1.0) {
        b
    } else if is_const(&b, 1.0) {
        a
    } else {
        Rc::new(Node::Mul(a, b))
    }
}

fn div(a: Sym, b: Sym) -> Sym {
    if is_const(&a, 0.0) {
        a
    } else {
        Rc::new(Node::Div(a, b))
    }
}

fn neg(a: Sym) -> Sym {
    if is_const(&a, 0.0) {
        a
    } else {
        Rc::new(Node::Neg(a))
    }
}

pub fn from_expr(e: &Expr) -> Sym {
    match e {
        Expr::Num(v) => constant(*v),
        Expr::Const(Constant::Pi) => constant(std::f64::consts::PI.into()),
        Expr::Const(Constant::E) => constant(std::f64::consts::E.into()),
        Expr::Var => Rc::new(Node::Var),
        Expr::Neg(a) => Rc::new(Node::Neg(from_expr(a))),
        Expr::Binary(op, l, r) => {
            let (l, r) = (from_expr(l), from_expr(r));
            Rc::new(match op {
                BinOp::Add => Node::Add(l, r),
                BinOp::Sub => Node::Sub(l, r),
                BinOp::Mul => Node::Mul(l, r),
                BinOp::Div => Node::Div(l, r),
            })
        }
        Expr::Pow(b, k) => Rc::new(Node::Powi(from_expr(b), *k)),
        Expr::Call(f, a) => {
            let a = from_expr(a);
            Rc::new(match f {
                Func::Exp => Node::Exp(a),
                Func::Sin => Node::Sin(a),
                Func::Cos => Node::Cos(a),
                Func::Sqrt => Node::Sqrt(a),
            })
        }
    }
}

/// d/dz of `s`, sharing every subgraph of `s`.
pub fn diff(s: &Sym, memo: &mut HashMap<*const Node, Sym>) -> Sym {
    if let Some(d) = memo.get(&Rc::as_ptr(s)) {
        return d.clone();
    }
    let d = match &**s {
        Node::Const(_) => constant(Complex64::new(0.0, 0.0)),
        Node::Var => constant(Complex64::new(1.0, 0.0)),
        Node::Add(a, b) => add(diff(a, memo), diff(b, memo)),
        Node::Sub(a, b) => sub(diff(a, memo), diff(b, memo)),
        Node::Mul(a, b) => add(mul(diff(a, memo), b.clone()), mul(a.clone(), diff(b, memo))),
        Node::Div(a, b) => div(
            sub(mul(diff(a, memo), b.clone()), mul(a.clone(), diff(b, memo))),
            mul(b.clone(), b.clone()),
        ),
        Node::Neg(a) => neg(diff(a, memo)),
        Node::Exp(a) => mul(s.clone(), diff(a, memo)),
        Node::Sin(a) => mul(Rc::new(Node::Cos(a.clone())), diff(a, memo)),
        Node::Cos(a) => neg(mul(Rc::new(Node::Sin(a.clone())), diff(a, memo))),
        Node::Sqrt(a) => div(diff(a, memo), mul(constant(2.0.into()), s.clone())),
        Node::Powi(_, 0) => constant(Complex64::new(0.0, 0.0)),
        Node::Powi(a, k) => mul(
            mul(
                constant((*k as f64).into()),
                Rc::new(Node::Powi(a.clone(), k - 1)),
            ),
            diff(a, memo),
        ),
    };
    memo.insert(Rc::as_ptr(s), d.clone());
    d
}

pub fn eval(s: &Sym, z: Complex64, memo: &mut HashMap<*const Node, Complex64>) -> Complex64 {
    if let Some(v) = memo.get(&Rc::as_ptr(s)) {
        return *v;
    }
    let v = match &**s {
        Node::Const(c) => *c,
        Node::Var => z,
        Node::Add(a, b) => eval(a, z, memo) + eval(b, z, memo),
        Node::Sub(a, b) => eval(a, z, memo) - eval(b, z, memo),
        Node::Mul(a, b) => eval(a, z, memo) * eval(b, z, memo),
        Node::Div(a, b) => eval(a, z, memo) / eval(b, z, memo),
        Node::Neg(a) => -eval(a, z, memo),
        Node::Exp(a) => eval(a, z, memo).exp(),
        Node::Sin(a) => eval(a, z, memo).sin(),
        Node::Cos(a) => eval(a, z, memo).cos(),
        Node::Sqrt(a) => eval(a, z, memo).sqrt(),
        Node::Powi(a, k) => eval(a, z, memo).powi(*k),
    };
    memo.insert(Rc::as_ptr(s), v);
    v
}

/// `[f(z), f'(z), ..., f^(order)(z)]` by repeated symbolic differentiation.
pub fn derivatives(e: &Expr, z: Complex64, order: usize) -> Vec<Complex64> {
    let mut chain = vec![from_expr(e)];
    let mut dmemo = HashMap::new();
    for _ in 0..order {
        let next = diff(chain.last().unwrap(), &mut dmemo);
        chain.push(next);
    }
    let mut vmemo = HashMap::new();
    chain.iter().map(|s| eval(s, z, &mut vmemo)).collect()
}
