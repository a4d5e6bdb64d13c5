//! Scalar reverse-mode tape.
//!
//! Used for ad-hoc losses over a parameter vector; the energy objective has
//! its own batched adjoint and is cross-checked against this tape in tests.

use super::{check_finite, GradVector, ParamVector};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Var(usize);

#[derive(Debug, Clone, Copy)]
enum Node {
    Leaf,
    Unary { a: usize, da: f64 },
    Binary { a: usize, da: f64, b: usize, db: f64 },
}

/// Wengert list of real scalar operations.
#[derive(Debug, Default)]
pub struct Tape {
    nodes: Vec<Node>,
    vals: Vec<f64>,
}

impl Tape {
    pub fn new() -> Self {
        Self::default()
    }

    fn push(&mut self, node: Node, val: f64) -> Var {
        self.nodes.push(node);
        self.vals.push(val);
        Var(self.nodes.len() - 1)
    }

    pub fn var(&mut self, v: f64) -> Var {
        self.push(Node::Leaf, v)
    }

    pub fn constant(&mut self, v: f64) -> Var {
        self.push(Node::Leaf, v)
    }

    pub fn value(&self, v: Var) -> f64 {
        self.vals[v.0]
    }

    pub fn add(&mut self, a: Var, b: Var) -> Var {
        let v = self.vals[a.0] + self.vals[b.0];
        self.push(Node::Binary { a: a.0, da: 1.0, b: b.0, db: 1.0 }, v)
    }

    pub fn sub(&mut self, a: Var, b: Var) -> Var {
        let v = self.vals[a.0] - self.vals[b.0];
        self.push(Node::Binary { a: a.0, da: 1.0, b: b.0, db: -1.0 }, v)
    }

    pub fn mul(&mut self, a: Var, b: Var) -> Var {
        let (x, y) = (self.vals[a.0], self.vals[b.0]);
        self.push(Node::Binary { a: a.0, da: y, b: b.0, db: x }, x * y)
    }

    pub fn div(&mut self, a: Var, b: Var) -> Var {
        let (x, y) = (self.vals[a.0], self.vals[b.0]);
        self.push(Node::Binary { a: a.0, da: 1.0 / y, b: b.0, db: -x / (y * y) }, x / y)
    }

    pub fn scale(&mut self, a: Var, c: f64) -> Var {
        let v = self.vals[a.0] * c;
        self.push(Node::Unary { a: a.0, da: c }, v)
    }

    pub fn neg(&mut self, a: Var) -> Var {
        self.scale(a, -1.0)
    }

    pub fn exp(&mut self, a: Var) -> Var {
        let e = self.vals[a.0].exp();
        self.push(Node::Unary { a: a.0, da: e }, e)
    }

    pub fn sin(&mut self, a: Var) -> Var {
        let x = self.vals[a.0];
        self.push(Node::Unary { a: a.0, da: x.cos() }, x.sin())
    }

    pub fn cos(&mut self, a: Var) -> Var {
        let x = self.vals[a.0];
        self.push(Node::Unary { a: a.0, da: -x.sin() }, x.cos())
    }

    pub fn sqrt(&mut self, a: Var) -> Var {
        let s = self.vals[a.0].sqrt();
        self.push(Node::Unary { a: a.0, da: 0.5 / s }, s)
    }

    pub fn square(&mut self, a: Var) -> Var {
        self.mul(a, a)
    }

    pub fn sum(&mut self, xs: &[Var]) -> Var {
        let mut acc = self.constant(0.0);
        for &x in xs {
            acc = self.add(acc, x);
        }
        acc
    }

    /// Adjoints of every node with respect to `out`.
    pub fn backward(&self, out: Var) -> Vec<f64> {
        let mut adj = vec![0.0; self.nodes.len()];
        adj[out.0] = 1.0;
        for i in (0..=out.0).rev() {
            let g = adj[i];
            if g == 0.0 {
                continue;
            }
            match self.nodes[i] {
                Node::Leaf => {}
                Node::Unary { a, da } => adj[a] += g * da,
                Node::Binary { a, da, b, db } => {
                    adj[a] += g * da;
                    adj[b] += g * db;
                }
            }
        }
        adj
    }

    pub fn grad_of(&self, out: Var, wrt: &[Var]) -> Vec<f64> {
        let adj = self.backward(out);
        wrt.iter().map(|v| adj[v.0]).collect()
    }
}

/// Complex value on the tape as a real pair.
#[derive(Debug, Clone, Copy)]
pub struct CVar {
    pub re: Var,
    pub im: Var,
}

impl CVar {
    pub fn new(t: &mut Tape, re: f64, im: f64) -> Self {
        Self { re: t.constant(re), im: t.constant(im) }
    }

    pub fn add(self, t: &mut Tape, o: CVar) -> CVar {
        CVar { re: t.add(self.re, o.re), im: t.add(self.im, o.im) }
    }

    pub fn sub(self, t: &mut Tape, o: CVar) -> CVar {
        CVar { re: t.sub(self.re, o.re), im: t.sub(self.im, o.im) }
    }

    pub fn mul(self, t: &mut Tape, o: CVar) -> CVar {
        let rr = t.mul(self.re, o.re);
        let ii = t.mul(self.im, o.im);
        let ri = t.mul(self.re, o.im);
        let ir = t.mul(self.im, o.re);
        CVar { re: t.sub(rr, ii), im: t.add(ri, ir) }
    }

    pub fn conj(self, t: &mut Tape) -> CVar {
        CVar { re: self.re, im: t.neg(self.im) }
    }

    pub fn scale(self, t: &mut Tape, c: f64) -> CVar {
        CVar { re: t.scale(self.re, c), im: t.scale(self.im, c) }
    }

    pub fn exp(self, t: &mut Tape) -> CVar {
        let m = t.exp(self.re);
        let c = t.cos(self.im);
        let s = t.sin(self.im);
        CVar { re: t.mul(m, c), im: t.mul(m, s) }
    }

    pub fn norm_sqr(self, t: &mut Tape) -> Var {
        let a = t.square(self.re);
        let b = t.square(self.im);
        t.add(a, b)
    }
}

/// Value and gradient of a loss built on a tape from the parameter entries.
pub fn loss_gradient<F>(params: &ParamVector, loss: F) -> Result<(f64, GradVector)>
where
    F: FnOnce(&mut Tape, &[Var]) -> Var,
{
    let mut tape = Tape::new();
    let vars: Vec<Var> = params.0.iter().map(|&p| tape.var(p)).collect();
    let out = loss(&mut tape, &vars);
    let value = check_finite(tape.value(out))?;
    let grad = tape.grad_of(out, &vars);
    let grad = GradVector(grad);
    if !grad.is_finite() {
        return Err(crate::error::Error::NonFiniteLoss(f64::NAN));
    }
    Ok((value, grad))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::grad::central_difference;

    #[test]
    fn modulus_squared_of_one_weight() {
        let p = ParamVector(vec![3.0, 4.0]);
        let (v, g) = loss_gradient(&p, |t, w| CVar { re: w[0], im: w[1] }.norm_sqr(t)).unwrap();
        assert_eq!(v, 25.0);
        assert_eq!(g.0, vec![6.0, 8.0]);
    }

    #[test]
    fn real_part_of_one_weight() {
        let p = ParamVector(vec![3.0, 4.0]);
        let (_, g) = loss_gradient(&p, |_, w| w[0]).unwrap();
        assert_eq!(g.0, vec![1.0, 0.0]);
    }

    #[test]
    fn non_finite_loss_is_reported() {
        let p = ParamVector(vec![0.0]);
        let err = loss_gradient(&p, |t, w| {
            let z = t.constant(0.0);
            t.div(w[0], z)
        });
        assert!(matches!(err, Err(Error::NonFiniteLoss(_))));
    }

    #[test]
    fn complex_exp_chain_matches_differences() {
        // L = Re(exp(w0 * w1)) + |w1|^2 over two complex weights
        let f = |t: &mut Tape, w: &[Var]| {
            let a = CVar { re: w[0], im: w[1] };
            let b = CVar { re: w[2], im: w[3] };
            let e = a.mul(t, b).exp(t);
            let n = b.norm_sqr(t);
            t.add(e.re, n)
        };
        let p = ParamVector(vec![0.3, -0.2, 0.5, 0.9]);
        let (_, g) = loss_gradient(&p, f).unwrap();
        let fd = central_difference(
            |q| {
                let mut t = Tape::new();
                let vars: Vec<Var> = q.0.iter().map(|&x| t.var(x)).collect();
                let out = f(&mut t, &vars);
                Ok(t.value(out))
            },
            &p,
            &[0, 1, 2, 3],
            1e-6,
        )
        .unwrap();
        for (a, b) in g.0.iter().zip(&fd) {
            assert!((a - b).abs() < 1e-8 * (1.0 + b.abs()), "{a} vs {b}");
        }
    }
}
