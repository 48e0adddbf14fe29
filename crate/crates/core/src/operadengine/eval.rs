//! Evaluation of trees in endomorphism operads of a pair of graded spaces.

use crate::error::{CoreError, Result};
use crate::liecore::{sort_skew, AlgebraSpec, MorphismSpec};
use crate::scalars::{koszul_sign_unchecked, parity_sign, sign_scalar};
use crate::vector::Vector;

use super::tree::{Colour, Gen, Node, TreeSum};

/// Multilinear tables for the generators acting on two graded spaces.
pub trait Representation {
    fn degree(&self, colour: Colour, i: usize) -> i32;
    /// The generator on basis inputs listed in leg order.
    fn generator(&self, g: Gen, inputs: &[usize]) -> Result<Vector>;
}

/// Straight colour `g`, wavy colour `h`, `G`/`H` the brackets (and higher brackets) of
/// `g` and `h`, `P(p)` the components of `φ`.
pub struct PairRep<'a> {
    pub g: &'a AlgebraSpec,
    pub h: &'a AlgebraSpec,
    pub phi: &'a MorphismSpec,
}

fn higher(spec: &AlgebraSpec, inputs: &[usize]) -> Vector {
    let Some(table) = spec.higher_tables().get(&inputs.len()) else {
        return Vector::zero();
    };
    let mut key = inputs.to_vec();
    match sort_skew(&mut key, &spec.degrees()) {
        0 => Vector::zero(),
        s => table
            .get(&key)
            .map(|v| v.scaled(&sign_scalar(s)))
            .unwrap_or_default(),
    }
}

impl Representation for PairRep<'_> {
    fn degree(&self, colour: Colour, i: usize) -> i32 {
        match colour {
            Colour::Straight => self.g.degree(i),
            Colour::Wavy => self.h.degree(i),
        }
    }

    fn generator(&self, g: Gen, inputs: &[usize]) -> Result<Vector> {
        match g {
            Gen::G(2) => Ok(self.g.bracket_basis(inputs[0], inputs[1])),
            Gen::G(_) => Ok(higher(self.g, inputs)),
            Gen::H(2) => Ok(self.h.bracket_basis(inputs[0], inputs[1])),
            Gen::H(_) => Ok(higher(self.h, inputs)),
            Gen::P(_) => Ok(self.phi.eval_basis(inputs, &self.g.degrees())),
            Gen::F(..) => Err(CoreError::Unsupported(format!(
                "{g} has no table in a pair representation"
            ))),
        }
    }
}

/// Evaluates `node` on basis inputs, `inputs[l - 1]` feeding the leaf labelled `l`.
pub fn evaluate_tree(
    node: &Node,
    rep: &dyn Representation,
    inputs: &[(Colour, usize)],
) -> Result<Vector> {
    let leaves = node.leaves();
    for &(c, l) in &leaves {
        match inputs.get(l as usize - 1) {
            Some(&(ic, _)) if ic == c => {}
            Some(_) => {
                return Err(CoreError::Degree(format!(
                    "leaf {l} has colour {c:?} but its input does not"
                )))
            }
            None => return Err(CoreError::Degree(format!("no input for leaf {l}"))),
        }
    }
    let degrees: Vec<i32> = inputs.iter().map(|&(c, i)| rep.degree(c, i)).collect();
    let mut sorted: Vec<u8> = leaves.iter().map(|&(_, l)| l).collect();
    sorted.sort_unstable();
    let perm: Vec<usize> = leaves
        .iter()
        .map(|&(_, l)| sorted.binary_search(&l).unwrap_or_default())
        .collect();
    let local_degrees: Vec<i32> = sorted.iter().map(|&l| degrees[l as usize - 1]).collect();
    let sign = koszul_sign_unchecked(&perm, &local_degrees);
    let v = eval(node, rep, inputs, &degrees)?;
    Ok(v.scaled(&sign_scalar(sign)))
}

fn eval(
    node: &Node,
    rep: &dyn Representation,
    inputs: &[(Colour, usize)],
    degrees: &[i32],
) -> Result<Vector> {
    match node {
        Node::Leaf(_, l) => Ok(Vector::basis(inputs[*l as usize - 1].1)),
        Node::Vertex(g, children) => {
            let mut values = Vec::with_capacity(children.len());
            let mut sign_exp = 0i64;
            let mut before = 0i64;
            for child in children {
                let input_degree: i64 = child
                    .leaves()
                    .iter()
                    .map(|&(_, l)| degrees[l as usize - 1] as i64)
                    .sum();
                sign_exp += child.degree() as i64 * before;
                before += input_degree;
                let v = eval(child, rep, inputs, degrees)?;
                if v.is_zero() {
                    return Ok(Vector::zero());
                }
                values.push(v);
            }
            let mut out = Vector::zero();
            let mut partial: Vec<(Vec<usize>, crate::scalars::Scalar)> =
                vec![(Vec::new(), sign_scalar(parity_sign(sign_exp)))];
            for v in &values {
                let mut next = Vec::new();
                for (idx, c) in &partial {
                    for (i, x) in v.iter() {
                        let mut k = idx.clone();
                        k.push(i);
                        next.push((k, c * x));
                    }
                }
                partial = next;
            }
            for (idx, c) in partial {
                out.add_scaled(&rep.generator(*g, &idx)?, &c);
            }
            Ok(out)
        }
    }
}

pub fn evaluate_sum(
    sum: &TreeSum,
    rep: &dyn Representation,
    inputs: &[(Colour, usize)],
) -> Result<Vector> {
    let mut out = Vector::zero();
    for (n, c) in sum.iter() {
        out.add_scaled(&evaluate_tree(n, rep, inputs)?, c);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn bracket_corolla_on_sl2() {
        let pair = corpus::pair_sl2_identity();
        let rep = PairRep {
            g: &pair.g,
            h: &pair.h,
            phi: &pair.phi,
        };
        let e = pair.g.index_of("e").unwrap();
        let f = pair.g.index_of("f").unwrap();
        let h = pair.g.index_of("h").unwrap();
        let t: Node = "G2(s1,s2)".parse().unwrap();
        let v = evaluate_tree(&t, &rep, &[(Colour::Straight, e), (Colour::Straight, f)]).unwrap();
        assert_eq!(v, Vector::basis(h));
        let swapped: Node = "G2(s2,s1)".parse().unwrap();
        let w = evaluate_tree(
            &swapped,
            &rep,
            &[(Colour::Straight, e), (Colour::Straight, f)],
        )
        .unwrap();
        assert_eq!(w, v.neg());
        assert!(evaluate_tree(&t, &rep, &[(Colour::Wavy, e), (Colour::Straight, f)]).is_err());
    }
}
