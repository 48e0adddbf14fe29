use std::sync::OnceLock;

use jb_core::corpus;
use jb_core::error::Result;
use jb_core::formalfields::{sort_symmetric, sym_tuples};
use jb_core::liecore::linf::skew_tuples;
use jb_core::liecore::sort_skew;
use jb_core::operadengine::*;
use jb_core::scalars::{int, sign_scalar};
use jb_core::vector::Vector;
use proptest::prelude::*;

const SHIFT: i32 = 8;

/// Generic graded tables: basis `k` has degree `k - 8` in both colours and each generator
/// sends a sorted tuple to a multiple of the unique basis vector of the right degree.
struct Generic;

impl Representation for Generic {
    fn degree(&self, _: Colour, i: usize) -> i32 {
        i as i32 - SHIFT
    }

    fn generator(&self, g: Gen, inputs: &[usize]) -> Result<Vector> {
        let degrees: Vec<i32> = (0..=2 * SHIFT as usize).map(|i| i as i32 - SHIFT).collect();
        let mut key = inputs.to_vec();
        let mut sign = 1;
        for class in g.classes() {
            let slice = &mut key[class.start..class.end];
            sign *= if class.skew {
                sort_skew(slice, &degrees)
            } else {
                sort_symmetric(slice, &degrees)
            };
        }
        let out: i32 = key.iter().map(|&i| degrees[i]).sum::<i32>() + g.degree();
        if sign == 0 || out.abs() > SHIFT {
            return Ok(Vector::zero());
        }
        let mut h: u64 = g.to_string().bytes().map(u64::from).sum();
        for (p, &k) in key.iter().enumerate() {
            h = h
                .wrapping_mul(31)
                .wrapping_add((k as u64 + 1) * (p as u64 + 7));
        }
        let c = int((h % 5) as i64 + 1) * sign_scalar(sign);
        Ok(Vector::term((out + SHIFT) as usize, c))
    }
}

fn pool() -> &'static Vec<Node> {
    static POOL: OnceLock<Vec<Node>> = OnceLock::new();
    POOL.get_or_init(|| {
        let mut trees = enumerate_lp_trees(&[1, 2], &[3], Colour::Wavy);
        trees.extend(enumerate_lp_trees(&[1, 2, 3, 4], &[], Colour::Wavy));
        trees.extend(enumerate_lp_trees(&[1, 2], &[3, 4], Colour::Wavy));
        trees.extend(enumerate_lp_trees(&[1, 2, 3, 4], &[], Colour::Straight));
        let conv = Conventions::default();
        for g in Operad::HsInf.generators(4, &conv) {
            for (t, _) in gen_delta(Operad::HsInf, g, &conv).unwrap().iter() {
                trees.push(t.clone());
            }
        }
        trees
    })
}

/// Reorders the children inside every leg class according to `seeds`.
fn scramble(node: &Node, seeds: &mut impl Iterator<Item = u32>) -> Node {
    match node {
        Node::Leaf(..) => node.clone(),
        Node::Vertex(g, cs) => {
            let mut kids: Vec<Node> = cs.iter().map(|c| scramble(c, seeds)).collect();
            for class in g.classes() {
                let slice = &mut kids[class.start..class.end];
                for i in (1..slice.len()).rev() {
                    let j = seeds.next().unwrap_or(0) as usize % (i + 1);
                    slice.swap(i, j);
                }
            }
            Node::Vertex(*g, kids)
        }
    }
}

proptest! {
    #[test]
    fn canonical_sign_agrees_with_evaluation(
        pick in 0usize..10_000,
        seeds in prop::collection::vec(any::<u32>(), 24),
        degrees in prop::collection::vec(-2i32..=2, 6),
    ) {
        let tree = &pool()[pick % pool().len()];
        let scrambled = scramble(tree, &mut seeds.into_iter());
        let (c, sign) = canonical(&scrambled);
        prop_assert_eq!(&c, tree);
        let colours: Vec<Colour> = {
            let mut v = vec![Colour::Straight; 6];
            for (col, l) in tree.leaves() {
                v[l as usize - 1] = col;
            }
            v
        };
        let inputs: Vec<(Colour, usize)> = colours
            .iter()
            .zip(&degrees)
            .map(|(&col, &d)| (col, (d + SHIFT) as usize))
            .collect();
        let lhs = evaluate_tree(&scrambled, &Generic, &inputs).unwrap();
        let rhs = evaluate_tree(&c, &Generic, &inputs).unwrap().scaled(&sign_scalar(sign));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn canonicalization_is_idempotent(pick in 0usize..10_000, seeds in prop::collection::vec(any::<u32>(), 24)) {
        let tree = &pool()[pick % pool().len()];
        let (c, _) = canonical(&scramble(tree, &mut seeds.into_iter()));
        prop_assert_eq!(canonical(&c), (c.clone(), 1));
    }
}

#[test]
fn jb_kills_boundaries_on_the_graded_sl2_pair() {
    let pair = corpus::pair_dg_sl2();
    let rep = PairRep {
        g: &pair.g,
        h: &pair.h,
        phi: &pair.phi,
    };
    let conv = Conventions::default();
    let degrees = pair.g.degrees();
    for g in Operad::HsInf.generators(4, &conv) {
        let image = jb_image(&gen_delta(Operad::HsInf, g, &conv).unwrap()).unwrap();
        let m = g.straight_inputs();
        let n = g.arity() - m;
        for gs in skew_tuples(pair.g.dim(), m, &degrees) {
            for bs in sym_tuples(pair.h.dim(), n, &degrees) {
                let inputs: Vec<(Colour, usize)> = gs
                    .iter()
                    .map(|&a| (Colour::Straight, a))
                    .chain(bs.iter().map(|&b| (Colour::Wavy, b)))
                    .collect();
                let v = evaluate_sum(&image, &rep, &inputs).unwrap();
                assert!(v.is_zero(), "JB(δ{g}) on {gs:?};{bs:?} = {v:?}");
            }
        }
    }
}

#[test]
fn lp_boundaries_vanish_on_sl2_with_identity() {
    let pair = corpus::pair_sl2_identity();
    let rep = PairRep {
        g: &pair.g,
        h: &pair.h,
        phi: &pair.phi,
    };
    let conv = Conventions::default();
    let mut d = Differential::new(Operad::LpInf, conv);
    for t in enumerate_lp_trees(&[1, 2, 3], &[], Colour::Wavy) {
        let boundary = d.on_tree(&t).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    let inputs = [
                        (Colour::Straight, a),
                        (Colour::Straight, b),
                        (Colour::Straight, c),
                    ];
                    let v = evaluate_sum(&boundary, &rep, &inputs).unwrap();
                    assert!(v.is_zero(), "δ({t}) on ({a},{b},{c})");
                }
            }
        }
    }
}

#[test]
fn canonical_sign_agrees_with_evaluation_on_the_whole_pool() {
    let degree_choices = [
        [0, 1, -1, 0, 1, 0],
        [1, 1, -1, 2, 0, -1],
        [-1, 0, 1, 1, -2, 1],
    ];
    for (k, tree) in pool().iter().enumerate() {
        for (r, degrees) in degree_choices.iter().enumerate() {
            let seeds =
                (0..24u32).map(|i| i.wrapping_mul(2654435761).wrapping_add((k * 3 + r) as u32));
            let scrambled = scramble(tree, &mut seeds.into_iter());
            let (c, sign) = canonical(&scrambled);
            assert_eq!(&c, tree);
            let mut inputs = vec![(Colour::Straight, 0); 6];
            for (i, d) in degrees.iter().enumerate() {
                inputs[i] = (Colour::Straight, (d + SHIFT) as usize);
            }
            for (col, l) in tree.leaves() {
                inputs[l as usize - 1].0 = col;
            }
            let lhs = evaluate_tree(&scrambled, &Generic, &inputs).unwrap();
            let rhs = evaluate_tree(&c, &Generic, &inputs)
                .unwrap()
                .scaled(&sign_scalar(sign));
            assert_eq!(lhs, rhs, "{scrambled}");
        }
    }
}
