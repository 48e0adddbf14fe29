//! Normal forms in `LP` and `LP½∞` through their faithful free-algebra models.
//!
//! Straight-output trees evaluate to Lie polynomials in the straight leaves. Wavy-output
//! trees evaluate to graded Lie polynomials in wavy leaves and in the images of the `P`
//! corollas: `P1` of a straight polynomial in `LP`, and symmetrized atoms
//! `P(p)(x_1, ..., x_p)` in `LP½∞`.

use crate::error::{CoreError, Result};
use crate::liecore::free::NcPoly;
use crate::scalars::{permutation_sign, sign_scalar, Scalar};

use super::tree::{Colour, Gen, Node, TreeSum};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quotient {
    /// The operad `LP`: only `G2`, `H2`, `P1`, with Jacobi and `P1` a morphism.
    Lp,
    /// The quotient `LP½∞`: `G2`, `H2` with Jacobi, free `P(p)`.
    LpHalf,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum WLetter {
    Wavy(u8),
    Phi(u8),
    /// `P(p)` applied to monomials in the straight leaves, arguments sorted by least letter.
    Atom(Vec<Vec<u8>>),
}

impl WLetter {
    pub fn degree(&self) -> i32 {
        match self {
            WLetter::Atom(args) => 1 - args.len() as i32,
            _ => 0,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NormalForm {
    pub straight: NcPoly<u8>,
    pub wavy: NcPoly<WLetter>,
}

impl NormalForm {
    pub fn is_zero(&self) -> bool {
        self.straight.is_zero() && self.wavy.is_zero()
    }
}

fn eval_straight(node: &Node) -> Result<NcPoly<u8>> {
    match node {
        Node::Leaf(Colour::Straight, l) => Ok(NcPoly::letter(*l)),
        Node::Vertex(Gen::G(2), cs) => {
            let a = eval_straight(&cs[0])?;
            let b = eval_straight(&cs[1])?;
            Ok(a.commutator(&b, &|_| 0))
        }
        Node::Vertex(Gen::G(_), _) => Ok(NcPoly::zero()),
        other => Err(CoreError::Unsupported(format!(
            "{other} has no straight output"
        ))),
    }
}

fn atom(children: &[Node]) -> Result<NcPoly<WLetter>> {
    let polys = children
        .iter()
        .map(eval_straight)
        .collect::<Result<Vec<_>>>()?;
    let mut partial: Vec<(Vec<Vec<u8>>, Scalar)> =
        vec![(Vec::new(), Scalar::from_integer(1.into()))];
    for p in &polys {
        let mut next = Vec::new();
        for (args, c) in &partial {
            for (w, x) in p.terms() {
                let mut a = args.clone();
                a.push(w.clone());
                next.push((a, c * x));
            }
        }
        partial = next;
    }
    let mut out = NcPoly::zero();
    for (args, c) in partial {
        let mut idx: Vec<usize> = (0..args.len()).collect();
        idx.sort_by_key(|&i| args[i].iter().min().copied());
        let sign = permutation_sign(&idx);
        let sorted = idx.iter().map(|&i| args[i].clone()).collect();
        out.add_term(vec![WLetter::Atom(sorted)], c * sign_scalar(sign));
    }
    Ok(out)
}

fn eval_wavy(node: &Node, q: Quotient) -> Result<NcPoly<WLetter>> {
    match node {
        Node::Leaf(Colour::Wavy, l) => Ok(NcPoly::letter(WLetter::Wavy(*l))),
        Node::Vertex(Gen::H(2), cs) => {
            let a = eval_wavy(&cs[0], q)?;
            let b = eval_wavy(&cs[1], q)?;
            Ok(a.commutator(&b, &|l: &WLetter| l.degree()))
        }
        Node::Vertex(Gen::H(_), _) => Ok(NcPoly::zero()),
        Node::Vertex(Gen::P(1), cs) if q == Quotient::Lp => {
            Ok(eval_straight(&cs[0])?.substitute(&|l: &u8| NcPoly::letter(WLetter::Phi(*l))))
        }
        Node::Vertex(Gen::P(_), _) if q == Quotient::Lp => Ok(NcPoly::zero()),
        Node::Vertex(Gen::P(_), cs) => atom(cs),
        other => Err(CoreError::Unsupported(format!(
            "{other} is not a tree of the target operad"
        ))),
    }
}

pub fn normal_form(sum: &TreeSum, q: Quotient) -> Result<NormalForm> {
    let mut out = NormalForm::default();
    for (n, c) in sum.iter() {
        match n.output() {
            Colour::Straight => out.straight.add_scaled(&eval_straight(n)?, c),
            Colour::Wavy => out.wavy.add_scaled(&eval_wavy(n, q)?, c),
        }
    }
    Ok(out)
}
