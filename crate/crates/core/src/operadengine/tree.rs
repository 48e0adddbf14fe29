//! Generators, canonical trees, formal sums of trees and their text notation.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::{CoreError, Result};
use crate::scalars::{koszul_sign_unchecked, parse_scalar, permutation_sign, sign_scalar, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Colour {
    Straight,
    Wavy,
}

impl Colour {
    fn prefix(self) -> char {
        match self {
            Colour::Straight => 's',
            Colour::Wavy => 'w',
        }
    }
}

/// Generating corollas of the three free operads.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Gen {
    /// `m` skew straight inputs, straight output, degree `2 - m`.
    G(u8),
    /// `m` skew straight and `n` symmetric wavy inputs, wavy output, degree `1 - m`.
    F(u8, u8),
    /// `n` skew wavy inputs, wavy output, degree `2 - n`.
    H(u8),
    /// `p` skew straight inputs, wavy output, degree `1 - p`.
    P(u8),
}

/// A run of legs `start..end` that may be permuted among themselves.
#[derive(Clone, Copy, Debug)]
pub struct LegClass {
    pub start: usize,
    pub end: usize,
    pub skew: bool,
}

impl Gen {
    pub fn degree(self) -> i32 {
        match self {
            Gen::G(m) => 2 - m as i32,
            Gen::F(m, _) => 1 - m as i32,
            Gen::H(n) => 2 - n as i32,
            Gen::P(p) => 1 - p as i32,
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Gen::G(m) | Gen::H(m) | Gen::P(m) => m as usize,
            Gen::F(m, n) => (m + n) as usize,
        }
    }

    pub fn output(self) -> Colour {
        match self {
            Gen::G(_) => Colour::Straight,
            _ => Colour::Wavy,
        }
    }

    pub fn input(self, leg: usize) -> Colour {
        match self {
            Gen::G(_) | Gen::P(_) => Colour::Straight,
            Gen::H(_) => Colour::Wavy,
            Gen::F(m, _) => {
                if leg < m as usize {
                    Colour::Straight
                } else {
                    Colour::Wavy
                }
            }
        }
    }

    pub fn straight_inputs(self) -> usize {
        (0..self.arity())
            .filter(|&l| self.input(l) == Colour::Straight)
            .count()
    }

    pub fn classes(self) -> Vec<LegClass> {
        match self {
            Gen::F(m, n) => vec![
                LegClass {
                    start: 0,
                    end: m as usize,
                    skew: true,
                },
                LegClass {
                    start: m as usize,
                    end: (m + n) as usize,
                    skew: false,
                },
            ],
            g => vec![LegClass {
                start: 0,
                end: g.arity(),
                skew: true,
            }],
        }
    }

    /// Weight of the dilation action: `n - 1` on `F(m, n)`, zero elsewhere.
    pub fn dilation_weight(self) -> i32 {
        match self {
            Gen::F(_, n) => n as i32 - 1,
            _ => 0,
        }
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gen::G(m) => write!(f, "G{m}"),
            Gen::F(m, n) => write!(f, "F{m},{n}"),
            Gen::H(n) => write!(f, "H{n}"),
            Gen::P(p) => write!(f, "P{p}"),
        }
    }
}

/// A tree in canonical form: children of each vertex sorted by least leaf within each leg
/// class, vertices oriented in depth-first preorder.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Node {
    Leaf(Colour, u8),
    Vertex(Gen, Vec<Node>),
}

impl Node {
    pub fn leaf(colour: Colour, label: u8) -> Node {
        Node::Leaf(colour, label)
    }

    /// The corolla of `g` with legs labelled `1..=arity`.
    pub fn corolla(g: Gen) -> Node {
        let children = (0..g.arity())
            .map(|l| Node::Leaf(g.input(l), l as u8 + 1))
            .collect();
        Node::Vertex(g, children)
    }

    pub fn min_leaf(&self) -> u8 {
        match self {
            Node::Leaf(_, l) => *l,
            Node::Vertex(_, cs) => cs.iter().map(Node::min_leaf).min().unwrap_or(u8::MAX),
        }
    }

    pub fn output(&self) -> Colour {
        match self {
            Node::Leaf(c, _) => *c,
            Node::Vertex(g, _) => g.output(),
        }
    }

    pub fn leaves(&self) -> Vec<(Colour, u8)> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<(Colour, u8)>) {
        match self {
            Node::Leaf(c, l) => out.push((*c, *l)),
            Node::Vertex(_, cs) => cs.iter().for_each(|c| c.collect_leaves(out)),
        }
    }

    /// Generators in depth-first preorder.
    pub fn vertices(&self) -> Vec<Gen> {
        let mut out = Vec::new();
        self.collect_vertices(&mut out);
        out
    }

    fn collect_vertices(&self, out: &mut Vec<Gen>) {
        if let Node::Vertex(g, cs) = self {
            out.push(*g);
            cs.iter().for_each(|c| c.collect_vertices(out));
        }
    }

    pub fn degree(&self) -> i32 {
        self.vertices().iter().map(|g| g.degree()).sum()
    }

    pub fn contains(&self, pred: &dyn Fn(Gen) -> bool) -> bool {
        self.vertices().into_iter().any(pred)
    }

    /// Replaces leaf labels through `f`.
    pub fn relabel(&self, f: &dyn Fn(u8) -> u8) -> Node {
        match self {
            Node::Leaf(c, l) => Node::Leaf(*c, f(*l)),
            Node::Vertex(g, cs) => Node::Vertex(*g, cs.iter().map(|c| c.relabel(f)).collect()),
        }
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Leaf(c, l) => write!(f, "{}{l}", c.prefix()),
            Node::Vertex(g, cs) => {
                write!(f, "{g}(")?;
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// A tree with an explicit vertex orientation: the arena order of `vertices`.
#[derive(Clone, Debug, Default)]
pub struct OTree {
    pub vertices: Vec<OVertex>,
    pub root: Option<OChild>,
}

#[derive(Clone, Debug)]
pub struct OVertex {
    pub gen: Gen,
    pub children: Vec<OChild>,
}

#[derive(Clone, Copy, Debug)]
pub enum OChild {
    Leaf(Colour, u8),
    V(usize),
}

impl OTree {
    /// Arena copy of a canonical tree; the orientation is the preorder.
    pub fn from_node(node: &Node) -> OTree {
        let mut t = OTree::default();
        let root = t.push_node(node);
        t.root = Some(root);
        t
    }

    /// Appends the vertices of `node` in preorder and returns the handle of its root.
    pub fn push_node(&mut self, node: &Node) -> OChild {
        match node {
            Node::Leaf(c, l) => OChild::Leaf(*c, *l),
            Node::Vertex(g, cs) => {
                let id = self.vertices.len();
                self.vertices.push(OVertex {
                    gen: *g,
                    children: Vec::new(),
                });
                let children = cs.iter().map(|c| self.push_node(c)).collect();
                self.vertices[id].children = children;
                OChild::V(id)
            }
        }
    }

    /// Canonical form and the sign relating it to this oriented tree.
    pub fn canonicalize(&self) -> (Node, i32) {
        let Some(root) = self.root else {
            panic!("empty tree");
        };
        let mut order = Vec::with_capacity(self.vertices.len());
        let (node, mut sign) = self.canon(root, &mut order);
        let degrees: Vec<i32> = self.vertices.iter().map(|v| v.gen.degree()).collect();
        sign *= koszul_sign_unchecked(&order, &degrees);
        (node, sign)
    }

    fn canon(&self, c: OChild, order: &mut Vec<usize>) -> (Node, i32) {
        match c {
            OChild::Leaf(col, l) => (Node::Leaf(col, l), 1),
            OChild::V(id) => {
                let v = &self.vertices[id];
                let mut sign = 1;
                let mut kids: Vec<(Node, i32, Vec<usize>)> = v
                    .children
                    .iter()
                    .map(|&ch| {
                        let mut sub = Vec::new();
                        let (n, s) = self.canon(ch, &mut sub);
                        (n, s, sub)
                    })
                    .collect();
                for class in v.gen.classes() {
                    let slice = &mut kids[class.start..class.end];
                    let mut idx: Vec<usize> = (0..slice.len()).collect();
                    idx.sort_by_key(|&i| slice[i].0.min_leaf());
                    if class.skew {
                        sign *= permutation_sign(&idx);
                    }
                    let sorted: Vec<_> = idx.iter().map(|&i| slice[i].clone()).collect();
                    slice.clone_from_slice(&sorted);
                }
                order.push(id);
                let mut children = Vec::with_capacity(kids.len());
                for (n, s, sub) in kids {
                    sign *= s;
                    order.extend(sub);
                    children.push(n);
                }
                (Node::Vertex(v.gen, children), sign)
            }
        }
    }
}

/// Formal linear combination of canonical trees.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TreeSum(pub BTreeMap<Node, Scalar>);

impl TreeSum {
    pub fn zero() -> Self {
        TreeSum(BTreeMap::new())
    }

    pub fn single(node: Node) -> Self {
        let mut s = TreeSum::zero();
        s.add_term(node, Scalar::one());
        s
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Node, &Scalar)> {
        self.0.iter()
    }

    pub fn coefficient(&self, node: &Node) -> Scalar {
        self.0.get(node).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, node: Node, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let e = self.0.entry(node.clone()).or_insert_with(Scalar::zero);
        *e += c;
        if e.is_zero() {
            self.0.remove(&node);
        }
    }

    /// Adds `c` times an oriented tree, canonicalizing it first.
    pub fn add_oriented(&mut self, t: &OTree, c: Scalar) {
        let (node, sign) = t.canonicalize();
        self.add_term(node, c * sign_scalar(sign));
    }

    pub fn add_scaled(&mut self, other: &TreeSum, c: &Scalar) {
        for (n, x) in other.iter() {
            self.add_term(n.clone(), x * c);
        }
    }

    pub fn add(&mut self, other: &TreeSum) {
        self.add_scaled(other, &Scalar::one());
    }

    pub fn scaled(&self, c: &Scalar) -> TreeSum {
        let mut out = TreeSum::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn sub(&self, other: &TreeSum) -> TreeSum {
        let mut out = self.clone();
        out.add_scaled(other, &-Scalar::one());
        out
    }

    pub fn filter(&self, keep: impl Fn(&Node) -> bool) -> TreeSum {
        TreeSum(
            self.0
                .iter()
                .filter(|(n, _)| keep(n))
                .map(|(n, c)| (n.clone(), c.clone()))
                .collect(),
        )
    }
}

impl fmt::Display for TreeSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        for (i, (n, c)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            if c < &Scalar::zero() {
                write!(f, "{c} {n}")?;
            } else {
                write!(f, "+{c} {n}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for Node {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Node> {
        let mut p = Parser {
            s: s.as_bytes(),
            pos: 0,
        };
        let node = p.node()?;
        p.skip_ws();
        if p.pos != p.s.len() {
            return Err(p.error("trailing input"));
        }
        Ok(node)
    }
}

impl FromStr for TreeSum {
    type Err = CoreError;

    /// Parses `+c tree -c tree ...`; a bare `0` is the empty sum.
    fn from_str(s: &str) -> Result<TreeSum> {
        let mut out = TreeSum::zero();
        let trimmed = s.trim();
        if trimmed == "0" || trimmed.is_empty() {
            return Ok(out);
        }
        let mut p = Parser {
            s: trimmed.as_bytes(),
            pos: 0,
        };
        while {
            p.skip_ws();
            p.pos < p.s.len()
        } {
            let start = p.pos;
            while p.pos < p.s.len() && !p.s[p.pos].is_ascii_whitespace() {
                p.pos += 1;
            }
            let coef = std::str::from_utf8(&p.s[start..p.pos])
                .map_err(|e| CoreError::Parse(e.to_string()))?;
            let c = parse_scalar(coef.strip_prefix('+').unwrap_or(coef))?;
            p.skip_ws();
            let n = p.node()?;
            out.add_term(n, c);
        }
        Ok(out)
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, what: &str) -> CoreError {
        CoreError::Parse(format!("{what} at byte {} of tree notation", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn number(&mut self) -> Result<u8> {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .ok()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| self.error("expected a number"))
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        if self.s.get(self.pos) == Some(&b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", b as char)))
        }
    }

    fn node(&mut self) -> Result<Node> {
        self.skip_ws();
        let head = *self
            .s
            .get(self.pos)
            .ok_or_else(|| self.error("unexpected end"))?;
        self.pos += 1;
        match head {
            b's' => Ok(Node::Leaf(Colour::Straight, self.number()?)),
            b'w' => Ok(Node::Leaf(Colour::Wavy, self.number()?)),
            b'G' | b'H' | b'P' | b'F' => {
                let a = self.number()?;
                let g = match head {
                    b'G' => Gen::G(a),
                    b'H' => Gen::H(a),
                    b'P' => Gen::P(a),
                    _ => {
                        self.expect(b',')?;
                        Gen::F(a, self.number()?)
                    }
                };
                self.expect(b'(')?;
                let mut children = Vec::new();
                loop {
                    children.push(self.node()?);
                    self.skip_ws();
                    if self.s.get(self.pos) == Some(&b',') {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                self.expect(b')')?;
                if children.len() != g.arity() {
                    return Err(CoreError::InvalidGenerator(format!(
                        "{g} expects {} inputs, found {}",
                        g.arity(),
                        children.len()
                    )));
                }
                Ok(Node::Vertex(g, children))
            }
            _ => Err(self.error("expected a leaf or a generator")),
        }
    }
}

/// Canonical form of a parsed tree whose children may be listed in any order, with the
/// orientation taken as written (preorder).
pub fn canonical(node: &Node) -> (Node, i32) {
    OTree::from_node(node).canonicalize()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn notation_round_trip() {
        let s: TreeSum = "+1/12 H2(H2(P1(s1),w2),w3) -1/2 F1,1(s1,w2)"
            .parse()
            .unwrap();
        assert_eq!(s.len(), 2);
        let again: TreeSum = s.to_string().parse().unwrap();
        assert_eq!(s, again);
    }

    #[test]
    fn skew_legs_flip_sign() {
        let t: Node = "G2(s2,s1)".parse().unwrap();
        let (c, sign) = canonical(&t);
        assert_eq!(c.to_string(), "G2(s1,s2)");
        assert_eq!(sign, -1);
        let t: Node = "F1,2(s1,w3,w2)".parse().unwrap();
        assert_eq!(canonical(&t).1, 1);
    }

    #[test]
    fn odd_vertices_reorder_with_sign() {
        // two odd vertices G3 swapped under an even root
        let t: Node = "G2(G3(s4,s5,s6),G3(s1,s2,s3))".parse().unwrap();
        let (c, sign) = canonical(&t);
        assert_eq!(c.to_string(), "G2(G3(s1,s2,s3),G3(s4,s5,s6))");
        // one leg swap (-1) and one swap of odd vertices (-1)
        assert_eq!(sign, 1);
        let (c2, s2) = canonical(&c);
        assert_eq!((c2, s2), (c, 1));
    }
}
