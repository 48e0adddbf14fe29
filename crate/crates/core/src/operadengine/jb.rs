//! The Jacobi–Bernoulli morphisms out of `HS∞` and their chain-map checks.

use itertools::Itertools;

use crate::error::{CoreError, Result};
use crate::report::ValidationReport;
use crate::scalars::{bernoulli_over_factorial, Scalar};

use super::delta::{apply_morphism_sum, Conventions, Differential, Operad};
use super::normal::{normal_form, Quotient};
use super::tree::{Colour, Gen, Node, TreeSum};

/// `(B_n / n!) Σ_σ H2(...H2(base, w_σ(1)), ..., w_σ(n))` with wavy legs `m+1..=m+n`.
fn bernoulli_ladders(base: Node, m: usize, n: usize, coef: Scalar) -> TreeSum {
    let mut out = TreeSum::zero();
    if n == 0 {
        out.add_term(base, coef);
        return out;
    }
    for perm in (1..=n).permutations(n) {
        let mut t = base.clone();
        for &j in &perm {
            t = Node::Vertex(Gen::H(2), vec![t, Node::Leaf(Colour::Wavy, (m + j) as u8)]);
        }
        let (node, sign) = super::tree::canonical(&t);
        out.add_term(node, &coef * crate::scalars::sign_scalar(sign));
    }
    out
}

fn straight_leaves(m: usize) -> Vec<Node> {
    (1..=m)
        .map(|l| Node::Leaf(Colour::Straight, l as u8))
        .collect()
}
/// Ladder coefficients: `coeff(n)` multiplies the ladders with `n` wavy legs.
pub type LadderCoefficients<'a> = &'a dyn Fn(usize) -> Scalar;

/// The morphism `HS∞ → LP`.
pub fn jb_on_generator(g: Gen) -> Result<TreeSum> {
    jb_on_generator_with(g, &bernoulli_over_factorial)
}

pub fn jb_on_generator_with(g: Gen, coeff: LadderCoefficients) -> Result<TreeSum> {
    match g {
        Gen::G(2) => Ok(TreeSum::single(Node::corolla(g))),
        Gen::G(_) => Ok(TreeSum::zero()),
        Gen::F(1, n) => Ok(bernoulli_ladders(
            Node::Vertex(Gen::P(1), straight_leaves(1)),
            1,
            n as usize,
            coeff(n as usize),
        )),
        Gen::F(_, _) => Ok(TreeSum::zero()),
        other => Err(CoreError::InvalidGenerator(format!(
            "{other} is not a generator of hs_inf"
        ))),
    }
}

/// The morphism `HS∞ → LP½∞`.
pub fn jb_half_on_generator(g: Gen) -> Result<TreeSum> {
    jb_half_on_generator_with(g, &bernoulli_over_factorial)
}

pub fn jb_half_on_generator_with(g: Gen, coeff: LadderCoefficients) -> Result<TreeSum> {
    match g {
        Gen::G(2) => Ok(TreeSum::single(Node::corolla(g))),
        Gen::G(_) => Ok(TreeSum::zero()),
        Gen::F(m, n) => Ok(bernoulli_ladders(
            Node::Vertex(Gen::P(m), straight_leaves(m as usize)),
            m as usize,
            n as usize,
            coeff(n as usize),
        )),
        other => Err(CoreError::InvalidGenerator(format!(
            "{other} is not a generator of hs_inf"
        ))),
    }
}

pub fn jb_image(sum: &TreeSum) -> Result<TreeSum> {
    apply_morphism_sum(sum, &mut jb_on_generator)
}

pub fn jb_half_image(sum: &TreeSum) -> Result<TreeSum> {
    apply_morphism_sum(sum, &mut jb_half_on_generator)
}

/// Checks `JB(δC) = 0` in `LP` for the given generators `C` of `HS∞`.
pub fn check_jb_chain_map(
    name: &str,
    gens: &[Gen],
    conv: &Conventions,
) -> Result<ValidationReport> {
    check_jb_chain_map_with(name, gens, conv, &bernoulli_over_factorial)
}

pub fn check_jb_chain_map_with(
    name: &str,
    gens: &[Gen],
    conv: &Conventions,
    coeff: LadderCoefficients,
) -> Result<ValidationReport> {
    let mut report = ValidationReport::new(name);
    let mut d = Differential::new(Operad::HsInf, *conv);
    for &g in gens {
        let image =
            apply_morphism_sum(&d.on_generator(g)?, &mut |x| jb_on_generator_with(x, coeff))?;
        report.tick();
        if !normal_form(&image, Quotient::Lp)?.is_zero() {
            report.fail(
                "jb",
                vec![g.to_string()],
                format!("JB(δ{g}) = {image} is nonzero in LP"),
            );
        }
    }
    Ok(report)
}

/// Checks `δ JB½(C) = JB½(δC)` in `LP½∞` for the given generators `C` of `HS∞`.
pub fn check_jb_half_chain_map(
    name: &str,
    gens: &[Gen],
    conv: &Conventions,
) -> Result<ValidationReport> {
    check_jb_half_chain_map_with(name, gens, conv, &bernoulli_over_factorial)
}

pub fn check_jb_half_chain_map_with(
    name: &str,
    gens: &[Gen],
    conv: &Conventions,
    coeff: LadderCoefficients,
) -> Result<ValidationReport> {
    let mut report = ValidationReport::new(name);
    let mut dhs = Differential::new(Operad::HsInf, *conv);
    let mut dlp = Differential::new(Operad::LpHalf, *conv);
    let mut image = |x: Gen| jb_half_on_generator_with(x, coeff);
    for &g in gens {
        let left = dlp.on_sum(&image(g)?)?;
        let right = apply_morphism_sum(&dhs.on_generator(g)?, &mut image)?;
        report.tick();
        let diff = left.sub(&right);
        if !normal_form(&diff, Quotient::LpHalf)?.is_zero() {
            report.fail(
                "jb_half",
                vec![g.to_string()],
                format!("δJB½({g}) - JB½(δ{g}) = {diff} is nonzero in LP½∞"),
            );
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::frac;

    #[test]
    fn images_on_small_generators() {
        assert_eq!(jb_on_generator(Gen::G(3)).unwrap(), TreeSum::zero());
        let f11: TreeSum = "-1/2 H2(P1(s1),w2)".parse().unwrap();
        assert_eq!(jb_on_generator(Gen::F(1, 1)).unwrap(), f11);
        let f12: TreeSum = "+1/12 H2(H2(P1(s1),w2),w3) +1/12 H2(H2(P1(s1),w3),w2)"
            .parse()
            .unwrap();
        assert_eq!(jb_on_generator(Gen::F(1, 2)).unwrap(), f12);
        let f20: TreeSum = "+1 P2(s1,s2)".parse().unwrap();
        assert_eq!(jb_half_on_generator(Gen::F(2, 0)).unwrap(), f20);
    }

    #[test]
    fn wrong_ladder_coefficient_breaks_the_chain_map() {
        let conv = Conventions::default();
        let gens: Vec<Gen> = (0..=3).map(|n| Gen::F(2, n)).collect();
        assert!(check_jb_chain_map("jb", &gens, &conv).unwrap().is_valid());
        let bad = |n: usize| {
            if n == 2 {
                frac(1, 8)
            } else {
                bernoulli_over_factorial(n)
            }
        };
        let report = check_jb_chain_map_with("jb", &gens, &conv, &bad).unwrap();
        assert_eq!(report.first().unwrap().witness, vec!["F2,1".to_string()]);
    }
}
