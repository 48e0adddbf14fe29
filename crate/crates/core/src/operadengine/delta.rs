//! Differentials of the free operads on their generators, extended as derivations.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_traits::One;

use crate::error::{CoreError, Result};
use crate::scalars::{
    parity_sign, permutation_sign, set_partitions, sign_scalar, splittings, PartSize, Scalar,
};

use super::tree::{Colour, Gen, Node, OChild, OTree, OVertex, TreeSum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Operad {
    HsInf,
    LpInf,
    LpHalf,
}

impl fmt::Display for Operad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Operad::HsInf => "hs_inf",
            Operad::LpInf => "lp_inf",
            Operad::LpHalf => "lp_half",
        })
    }
}

impl FromStr for Operad {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Operad> {
        match s {
            "hs_inf" | "hs" => Ok(Operad::HsInf),
            "lp_inf" | "lp" => Ok(Operad::LpInf),
            "lp_half" => Ok(Operad::LpHalf),
            _ => Err(CoreError::Parse(format!("unknown operad '{s}'"))),
        }
    }
}

/// Sign conventions for the generator differentials. The defaults satisfy `δ² = 0`; the
/// other settings exist as negative controls.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Conventions {
    /// Sign of the insertion terms `F(.., F)` relative to the `F(G, ..)` terms of `δF`.
    pub insertion_sign: i32,
    /// Constant unit in the exponent of the `P(G, ..)` and `F(G, ..)` terms.
    pub composition_unit: bool,
    /// Admit the unary generator `F(1, 0)`.
    pub include_f10: bool,
}

impl Default for Conventions {
    fn default() -> Self {
        Conventions {
            insertion_sign: 1,
            composition_unit: true,
            include_f10: true,
        }
    }
}

impl Operad {
    pub fn admits(self, g: Gen, conv: &Conventions) -> bool {
        match (self, g) {
            (Operad::HsInf, Gen::G(m)) | (Operad::LpInf, Gen::G(m)) => m >= 2,
            (Operad::HsInf, Gen::F(m, n)) => m >= 1 && (m + n >= 2 || conv.include_f10),
            (Operad::LpInf, Gen::H(n)) => n >= 2,
            (Operad::LpInf, Gen::P(p)) | (Operad::LpHalf, Gen::P(p)) => p >= 1,
            (Operad::LpHalf, Gen::G(m)) | (Operad::LpHalf, Gen::H(m)) => m == 2,
            _ => false,
        }
    }

    /// Generators of total arity at most `max_arity`, sorted by arity then degree.
    pub fn generators(self, max_arity: usize, conv: &Conventions) -> Vec<Gen> {
        let mut out = Vec::new();
        for a in 1..=max_arity as u8 {
            out.push(Gen::G(a));
            out.push(Gen::H(a));
            out.push(Gen::P(a));
            for m in 1..=a {
                out.push(Gen::F(m, a - m));
            }
        }
        out.retain(|&g| self.admits(g, conv));
        out.sort_by_key(|g| (g.arity(), -g.degree(), *g));
        out
    }
}

fn straight(l: usize) -> OChild {
    OChild::Leaf(Colour::Straight, l as u8)
}

fn wavy(l: usize) -> OChild {
    OChild::Leaf(Colour::Wavy, l as u8)
}

/// A tree with one upper vertex over several lower corollas, oriented upper vertex first.
/// `upper_children` uses `OChild::V(k)` for the `k`-th lower vertex.
fn two_level(upper: Gen, upper_children: Vec<OChild>, lowers: Vec<(Gen, Vec<OChild>)>) -> OTree {
    let mut vertices = Vec::with_capacity(lowers.len() + 1);
    vertices.push(OVertex {
        gen: upper,
        children: upper_children
            .into_iter()
            .map(|c| match c {
                OChild::V(j) => OChild::V(j + 1),
                leaf => leaf,
            })
            .collect(),
    });
    for (g, cs) in lowers {
        vertices.push(OVertex {
            gen: g,
            children: cs,
        });
    }
    OTree {
        vertices,
        root: Some(OChild::V(0)),
    }
}

fn binom2(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

fn signed(e: usize, sigma: i32) -> Scalar {
    sign_scalar(parity_sign(e as i64) * sigma)
}

/// Exponent of the sign of `H(t)(P(k_1), ..., P(k_t))` for blocks of sizes `k`. Swapping
/// adjacent blocks of sizes `a`, `b` changes it by `a + b`, as the tree relations require.
fn morphism_exponent(k: &[usize]) -> usize {
    let mut u = 0;
    for i in 0..k.len() {
        for j in i + 1..k.len() {
            u += k[i] * (k[j] + 1);
        }
    }
    u
}

/// `δ` of one generator, leaves labelled by the legs `1..=arity`.
pub fn gen_delta(op: Operad, g: Gen, conv: &Conventions) -> Result<TreeSum> {
    if !op.admits(g, conv) {
        return Err(CoreError::InvalidGenerator(format!(
            "{g} is not a generator of {op}"
        )));
    }
    let mut out = TreeSum::zero();
    match g {
        Gen::G(m) | Gen::H(m) => {
            let make = |k: usize| {
                if let Gen::G(_) = g {
                    Gen::G(k as u8)
                } else {
                    Gen::H(k as u8)
                }
            };
            let leaf = |l: usize| {
                if let Gen::G(_) = g {
                    straight(l)
                } else {
                    wavy(l)
                }
            };
            for s in splittings(m as usize, &[PartSize::at_least(2), PartSize::at_least(1)]) {
                let (j1, j2) = (&s.parts[0], &s.parts[1]);
                let upper = make(j2.len() + 1);
                let lower = make(j1.len());
                if !op.admits(upper, conv) || !op.admits(lower, conv) {
                    continue;
                }
                let mut uc = vec![OChild::V(0)];
                uc.extend(j2.iter().map(|&l| leaf(l)));
                let t = two_level(
                    upper,
                    uc,
                    vec![(lower, j1.iter().map(|&l| leaf(l)).collect())],
                );
                out.add_oriented(&t, signed(j1.len() * j2.len(), s.sign));
            }
        }
        Gen::F(m, n) => {
            let (m, n) = (m as usize, n as usize);
            let wavy_legs: Vec<usize> = (m + 1..=m + n).collect();
            for s in splittings(m, &[PartSize::at_least(2), PartSize::at_least(0)]) {
                let (j1, j2) = (&s.parts[0], &s.parts[1]);
                let upper = Gen::F(j2.len() as u8 + 1, n as u8);
                if !op.admits(upper, conv) {
                    continue;
                }
                let mut uc = vec![OChild::V(0)];
                uc.extend(j2.iter().map(|&l| straight(l)));
                uc.extend(wavy_legs.iter().map(|&l| wavy(l)));
                let t = two_level(
                    upper,
                    uc,
                    vec![(
                        Gen::G(j1.len() as u8),
                        j1.iter().map(|&l| straight(l)).collect(),
                    )],
                );
                out.add_oriented(
                    &t,
                    signed(
                        j2.len() + binom2(j1.len()) + usize::from(conv.composition_unit),
                        s.sign,
                    ),
                );
            }
            let items: Vec<usize> = (1..=m).collect();
            for blocks in set_partitions(&items, 2) {
                let (a, b) = (&blocks[0], &blocks[1]);
                let perm: Vec<usize> = blocks.iter().flatten().map(|&i| i - 1).collect();
                let c = sign_scalar(conv.insertion_sign)
                    * signed(
                        morphism_exponent(&[a.len(), b.len()]),
                        permutation_sign(&perm),
                    );
                let swap = -sign_scalar(parity_sign(
                    ((1 - a.len() as i64) * (1 - b.len() as i64)).abs(),
                ));
                for w in splittings(n, &[PartSize::at_least(0), PartSize::at_least(0)]) {
                    let (ia, ib) = (&w.parts[0], &w.parts[1]);
                    for (outer, oi, inner, ii, coef) in
                        [(a, ia, b, ib, c.clone()), (b, ib, a, ia, &c * &swap)]
                    {
                        let upper = Gen::F(outer.len() as u8, oi.len() as u8 + 1);
                        let lower = Gen::F(inner.len() as u8, ii.len() as u8);
                        if !op.admits(lower, conv) {
                            continue;
                        }
                        let mut uc: Vec<OChild> = outer.iter().map(|&l| straight(l)).collect();
                        uc.push(OChild::V(0));
                        uc.extend(oi.iter().map(|&l| wavy(m + l)));
                        let mut lc: Vec<OChild> = inner.iter().map(|&l| straight(l)).collect();
                        lc.extend(ii.iter().map(|&l| wavy(m + l)));
                        let t = two_level(upper, uc, vec![(lower, lc)]);
                        out.add_oriented(&t, coef);
                    }
                }
            }
        }
        Gen::P(p) => {
            let p = p as usize;
            for s in splittings(p, &[PartSize::at_least(2), PartSize::at_least(0)]) {
                let (i1, i2) = (&s.parts[0], &s.parts[1]);
                let upper = Gen::P(i2.len() as u8 + 1);
                let lower = Gen::G(i1.len() as u8);
                if !op.admits(lower, conv) {
                    continue;
                }
                let mut uc = vec![OChild::V(0)];
                uc.extend(i2.iter().map(|&l| straight(l)));
                let t = two_level(
                    upper,
                    uc,
                    vec![(lower, i1.iter().map(|&l| straight(l)).collect())],
                );
                out.add_oriented(
                    &t,
                    signed(
                        i2.len() + binom2(i1.len()) + usize::from(conv.composition_unit),
                        s.sign,
                    ),
                );
            }
            let items: Vec<usize> = (1..=p).collect();
            for t in 2..=p {
                if !op.admits(Gen::H(t as u8), conv) {
                    continue;
                }
                for blocks in set_partitions(&items, t) {
                    let perm: Vec<usize> = blocks.iter().flatten().map(|&i| i - 1).collect();
                    let sizes: Vec<usize> = blocks.iter().map(Vec::len).collect();
                    let c = signed(
                        binom2(t) + morphism_exponent(&sizes),
                        permutation_sign(&perm),
                    );
                    let lowers = blocks
                        .iter()
                        .map(|b| {
                            (
                                Gen::P(b.len() as u8),
                                b.iter().map(|&l| straight(l)).collect(),
                            )
                        })
                        .collect();
                    let uc = (0..t).map(OChild::V).collect();
                    let tree = two_level(Gen::H(t as u8), uc, lowers);
                    out.add_oriented(&tree, c);
                }
            }
        }
    }
    if op == Operad::LpHalf {
        out = out.filter(|n| n.vertices().iter().all(|&v| op.admits(v, conv)));
    }
    Ok(out)
}

/// Replaces vertex `i` of `tree` by the tree `s`, whose leaf `j` is grafted onto the
/// `j`-th leg of the replaced vertex. The vertices of `s` take the place of `i` in the
/// orientation, in preorder.
pub fn graft_vertex(tree: &OTree, i: usize, s: &Node) -> OTree {
    let mut piece = OTree::default();
    let piece_root = piece.push_node(s);
    let shift = piece.vertices.len();
    let remap = |c: OChild| match c {
        OChild::V(j) if j > i => OChild::V(j + shift - 1),
        other => other,
    };
    let legs: Vec<OChild> = tree.vertices[i]
        .children
        .iter()
        .map(|&c| remap(c))
        .collect();
    let mut vertices = Vec::with_capacity(tree.vertices.len() + shift - 1);
    for v in &tree.vertices[..i] {
        vertices.push(OVertex {
            gen: v.gen,
            children: v.children.iter().map(|&c| remap(c)).collect(),
        });
    }
    for v in piece.vertices {
        vertices.push(OVertex {
            gen: v.gen,
            children: v
                .children
                .into_iter()
                .map(|c| match c {
                    OChild::Leaf(_, l) => legs[l as usize - 1],
                    OChild::V(j) => OChild::V(j + i),
                })
                .collect(),
        });
    }
    for v in &tree.vertices[i + 1..] {
        vertices.push(OVertex {
            gen: v.gen,
            children: v.children.iter().map(|&c| remap(c)).collect(),
        });
    }
    let root = match (tree.root, piece_root) {
        (Some(OChild::V(r)), _) if r == i => match piece_root {
            OChild::V(_) => OChild::V(i),
            OChild::Leaf(_, l) => legs[l as usize - 1],
        },
        (Some(r), _) => remap(r),
        (None, _) => panic!("empty tree"),
    };
    OTree {
        vertices,
        root: Some(root),
    }
}

/// The differential of an operad, caching generator differentials.
pub struct Differential {
    pub op: Operad,
    pub conv: Conventions,
    cache: HashMap<Gen, TreeSum>,
}

impl Differential {
    pub fn new(op: Operad, conv: Conventions) -> Self {
        Differential {
            op,
            conv,
            cache: HashMap::new(),
        }
    }

    pub fn on_generator(&mut self, g: Gen) -> Result<TreeSum> {
        if let Some(d) = self.cache.get(&g) {
            return Ok(d.clone());
        }
        let d = gen_delta(self.op, g, &self.conv)?;
        self.cache.insert(g, d.clone());
        Ok(d)
    }

    /// Overrides the differential of one generator.
    pub fn set_generator(&mut self, g: Gen, d: TreeSum) {
        self.cache.insert(g, d);
    }

    pub fn on_tree(&mut self, node: &Node) -> Result<TreeSum> {
        let tree = OTree::from_node(node);
        let mut out = TreeSum::zero();
        let mut before = 0i64;
        for i in 0..tree.vertices.len() {
            let g = tree.vertices[i].gen;
            let d = self.on_generator(g)?;
            let sign = sign_scalar(parity_sign(before));
            for (s, c) in d.iter() {
                out.add_oriented(&graft_vertex(&tree, i, s), c * &sign);
            }
            before += g.degree() as i64;
        }
        Ok(out)
    }

    pub fn on_sum(&mut self, sum: &TreeSum) -> Result<TreeSum> {
        let mut out = TreeSum::zero();
        for (n, c) in sum.iter() {
            out.add_scaled(&self.on_tree(n)?, c);
        }
        Ok(out)
    }
}

/// Applies the operad morphism determined by `f` on generators to every vertex of `node`.
/// `f` must preserve degrees.
pub fn apply_morphism(node: &Node, f: &mut dyn FnMut(Gen) -> Result<TreeSum>) -> Result<TreeSum> {
    let tree = OTree::from_node(node);
    let mut partial = vec![(tree.clone(), Scalar::one())];
    for i in (0..tree.vertices.len()).rev() {
        let image = f(tree.vertices[i].gen)?;
        let mut next = Vec::new();
        for (t, c) in &partial {
            for (s, x) in image.iter() {
                next.push((graft_vertex(t, i, s), c * x));
            }
        }
        partial = next;
        if partial.is_empty() {
            break;
        }
    }
    let mut out = TreeSum::zero();
    for (t, c) in partial {
        out.add_oriented(&t, c);
    }
    Ok(out)
}

pub fn apply_morphism_sum(
    sum: &TreeSum,
    f: &mut dyn FnMut(Gen) -> Result<TreeSum>,
) -> Result<TreeSum> {
    let mut out = TreeSum::zero();
    for (n, c) in sum.iter() {
        out.add_scaled(&apply_morphism(n, f)?, c);
    }
    Ok(out)
}
