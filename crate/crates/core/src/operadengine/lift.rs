//! Lifting `JB` to `JB∞: HS∞ → LP∞` degree by degree through exact linear solves.

use std::collections::BTreeMap;

use crate::error::{CoreError, Result};
use crate::report::ValidationReport;
use crate::scalars::{set_partitions, Scalar};

use super::delta::{apply_morphism_sum, Conventions, Differential, Operad};
use super::jb::jb_on_generator;
use super::linalg::solve;
use super::tree::{Colour, Gen, Node, TreeSum};

/// All canonical trees of `LP∞` on the given leaves with the given output colour.
pub fn enumerate_lp_trees(straight: &[u8], wavy: &[u8], out: Colour) -> Vec<Node> {
    let mut result = Vec::new();
    let total = straight.len() + wavy.len();
    if total == 0 {
        return result;
    }
    if total == 1 {
        let (c, l) = match straight.first() {
            Some(&l) => (Colour::Straight, l),
            None => (Colour::Wavy, wavy[0]),
        };
        if c == out {
            result.push(Node::Leaf(c, l));
        }
    }
    if out == Colour::Straight && !wavy.is_empty() {
        return result;
    }
    if out == Colour::Wavy && wavy.is_empty() {
        for t in enumerate_lp_trees(straight, &[], Colour::Straight) {
            result.push(Node::Vertex(Gen::P(1), vec![t]));
        }
    }
    let colour_of = |l: usize| {
        if straight.contains(&(l as u8)) {
            Colour::Straight
        } else {
            Colour::Wavy
        }
    };
    let labels: Vec<usize> = straight.iter().chain(wavy).map(|&l| l as usize).collect();
    for k in 2..=total {
        for blocks in set_partitions(&labels, k) {
            let split = |b: &Vec<usize>| -> (Vec<u8>, Vec<u8>) {
                let s = b
                    .iter()
                    .filter(|&&l| colour_of(l) == Colour::Straight)
                    .map(|&l| l as u8)
                    .collect();
                let w = b
                    .iter()
                    .filter(|&&l| colour_of(l) == Colour::Wavy)
                    .map(|&l| l as u8)
                    .collect();
                (s, w)
            };
            let mut shapes: Vec<(Gen, Colour)> = Vec::new();
            match out {
                Colour::Straight => shapes.push((Gen::G(k as u8), Colour::Straight)),
                Colour::Wavy => {
                    shapes.push((Gen::H(k as u8), Colour::Wavy));
                    if wavy.is_empty() {
                        shapes.push((Gen::P(k as u8), Colour::Straight));
                    }
                }
            }
            for (g, child_colour) in shapes {
                let choices: Vec<Vec<Node>> = blocks
                    .iter()
                    .map(|b| {
                        let (s, w) = split(b);
                        enumerate_lp_trees(&s, &w, child_colour)
                    })
                    .collect();
                if choices.iter().any(Vec::is_empty) {
                    continue;
                }
                let mut partial: Vec<Vec<Node>> = vec![Vec::new()];
                for options in &choices {
                    let mut next = Vec::with_capacity(partial.len() * options.len());
                    for p in &partial {
                        for o in options {
                            let mut q = p.clone();
                            q.push(o.clone());
                            next.push(q);
                        }
                    }
                    partial = next;
                }
                result.extend(partial.into_iter().map(|cs| Node::Vertex(g, cs)));
            }
        }
    }
    result
}

/// The image of `JB∞` on generators together with the verification record.
#[derive(Clone, Debug)]
pub struct Lift {
    pub table: BTreeMap<Gen, TreeSum>,
    pub report: ValidationReport,
    /// Number of linear systems solved.
    pub systems: usize,
}

/// Builds `JB∞` on every generator of `HS∞` of arity at most `max_arity` and degree at
/// least `-max_codegree`. Degree-zero generators take the `LP∞` trees of their `JB` images;
/// each lower generator `C` gets a solution `e` of `δe = JB∞(δC)`.
pub fn lift_jb_infinity(max_arity: usize, max_codegree: usize, conv: &Conventions) -> Result<Lift> {
    let mut gens: Vec<Gen> = Operad::HsInf
        .generators(max_arity, conv)
        .into_iter()
        .filter(|g| g.degree() >= -(max_codegree as i32))
        .collect();
    gens.sort_by_key(|g| (-g.degree(), g.arity(), *g));
    let mut dhs = Differential::new(Operad::HsInf, *conv);
    let mut dlp = Differential::new(Operad::LpInf, *conv);
    let mut table: BTreeMap<Gen, TreeSum> = BTreeMap::new();
    let mut report = ValidationReport::new("lift");
    let mut systems = 0;
    for g in gens {
        let boundary = dhs.on_generator(g)?;
        let rhs = apply_morphism_sum(&boundary, &mut |x| {
            table
                .get(&x)
                .cloned()
                .ok_or_else(|| CoreError::Inconsistent(format!("{x} is not lifted yet")))
        })?;
        let image = if g.degree() == 0 {
            let image = jb_on_generator(g)?;
            report.tick();
            let d = dlp.on_sum(&image)?;
            if d != rhs {
                report.fail(
                    "chain",
                    vec![g.to_string()],
                    format!("δ JB∞({g}) = {d} but JB∞(δ{g}) = {rhs}"),
                );
            }
            image
        } else {
            report.tick();
            if !dlp.on_sum(&rhs)?.is_zero() {
                report.fail(
                    "not_a_cycle",
                    vec![g.to_string()],
                    format!("JB∞(δ{g}) = {rhs} is not a cycle"),
                );
                continue;
            }
            let m = g.straight_inputs() as u8;
            let straight: Vec<u8> = (1..=m).collect();
            let wavy: Vec<u8> = (m + 1..=g.arity() as u8).collect();
            let candidates: Vec<Node> = enumerate_lp_trees(&straight, &wavy, g.output())
                .into_iter()
                .filter(|t| t.degree() == g.degree())
                .collect();
            let mut rows: BTreeMap<Node, usize> = BTreeMap::new();
            let mut index = |n: &Node| {
                let next = rows.len();
                *rows.entry(n.clone()).or_insert(next)
            };
            let mut columns = Vec::with_capacity(candidates.len());
            for t in &candidates {
                let d = dlp.on_tree(t)?;
                columns.push(
                    d.iter()
                        .map(|(n, c)| (index(n), c.clone()))
                        .collect::<BTreeMap<_, _>>(),
                );
            }
            let target: BTreeMap<usize, Scalar> =
                rhs.iter().map(|(n, c)| (index(n), c.clone())).collect();
            systems += 1;
            let Some(x) = solve(&columns, &target) else {
                report.fail(
                    "inconsistent",
                    vec![g.to_string()],
                    format!(
                        "δe = {rhs} has no solution among {} trees",
                        candidates.len()
                    ),
                );
                continue;
            };
            let mut e = TreeSum::zero();
            for (t, c) in candidates.into_iter().zip(x) {
                e.add_term(t, c);
            }
            let d = dlp.on_sum(&e)?;
            if d != rhs {
                report.fail(
                    "chain",
                    vec![g.to_string()],
                    format!("δ({e}) = {d} differs from {rhs}"),
                );
            }
            e
        };
        table.insert(g, image);
    }
    Ok(Lift {
        table,
        report,
        systems,
    })
}

/// Re-verifies `δ JB∞(C) = JB∞(δC)` for every generator in the table.
pub fn verify_lift(lift: &Lift, conv: &Conventions) -> Result<ValidationReport> {
    let mut dhs = Differential::new(Operad::HsInf, *conv);
    let mut dlp = Differential::new(Operad::LpInf, *conv);
    let mut report = ValidationReport::new("lift_chain");
    for (g, image) in &lift.table {
        let rhs = apply_morphism_sum(&dhs.on_generator(*g)?, &mut |x| {
            lift.table
                .get(&x)
                .cloned()
                .ok_or_else(|| CoreError::Inconsistent(format!("{x} missing from the table")))
        })?;
        report.tick();
        if dlp.on_sum(image)? != rhs {
            report.fail(
                "chain",
                vec![g.to_string()],
                format!("δ JB∞({g}) ≠ JB∞(δ{g})"),
            );
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_in_low_arity() {
        let t = enumerate_lp_trees(&[1, 2], &[], Colour::Wavy);
        let names: Vec<String> = t.iter().map(|n| n.to_string()).collect();
        assert_eq!(names, ["P1(G2(s1,s2))", "H2(P1(s1),P1(s2))", "P2(s1,s2)"]);
        assert_eq!(enumerate_lp_trees(&[1], &[2], Colour::Straight).len(), 0);
    }

    #[test]
    fn lift_in_arity_three() {
        let conv = Conventions::default();
        let lift = lift_jb_infinity(3, 1, &conv).unwrap();
        assert!(lift.report.is_valid(), "{:?}", lift.report);
        assert!(verify_lift(&lift, &conv).unwrap().is_valid());
        assert_eq!(lift.table[&Gen::F(2, 0)], "+1 P2(s1,s2)".parse().unwrap());
    }
}
