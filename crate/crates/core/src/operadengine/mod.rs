//! Trees in the two-coloured operads `HS∞`, `LP∞`, `LP½∞`, their differentials and the
//! Jacobi–Bernoulli morphisms between them.

pub mod coherence;
pub mod delta;
pub mod eval;
pub mod jb;
pub mod lift;
pub mod linalg;
pub mod normal;
pub mod tree;

pub use coherence::{check_jb_against_action, check_jb_half_against_general, image_table};
pub use delta::{apply_morphism, apply_morphism_sum, gen_delta, Conventions, Differential, Operad};
pub use eval::{evaluate_sum, evaluate_tree, PairRep, Representation};
pub use jb::{
    check_jb_chain_map, check_jb_chain_map_with, check_jb_half_chain_map,
    check_jb_half_chain_map_with, jb_half_image, jb_half_on_generator, jb_half_on_generator_with,
    jb_image, jb_on_generator, jb_on_generator_with,
};
pub use lift::{enumerate_lp_trees, lift_jb_infinity, verify_lift, Lift};
pub use normal::{normal_form, NormalForm, Quotient};
pub use tree::{canonical, Colour, Gen, Node, TreeSum};

use crate::error::Result;
use crate::report::ValidationReport;

/// Checks `δ² = 0` on every generator of arity at most `max_arity`. In `LP½∞` the result
/// is compared in normal form.
pub fn check_delta_squared(
    op: Operad,
    max_arity: usize,
    conv: &Conventions,
) -> Result<ValidationReport> {
    let mut report = ValidationReport::new(format!("delta_squared_{op}"));
    let mut d = Differential::new(op, *conv);
    for g in op.generators(max_arity, conv) {
        let once = d.on_generator(g)?;
        let twice = d.on_sum(&once)?;
        report.tick();
        let zero = match op {
            Operad::LpHalf => normal_form(&twice, Quotient::LpHalf)?.is_zero(),
            _ => twice.is_zero(),
        };
        if !zero {
            report.fail(
                "delta_squared",
                vec![g.to_string()],
                format!("δ²{g} = {twice}"),
            );
        }
    }
    Ok(report)
}

/// Total weight of a tree under the dilation grading: `n - 1` for `F(m, n)`, zero otherwise.
pub fn dilation_weight(node: &Node) -> i32 {
    node.vertices().iter().map(|g| g.dilation_weight()).sum()
}

/// Checks that `δ` preserves the dilation grading on every generator of `HS∞` of arity at
/// most `max_arity`.
pub fn check_dilation_grading(max_arity: usize, conv: &Conventions) -> Result<ValidationReport> {
    check_dilation_grading_with(max_arity, conv, &|_| TreeSum::zero())
}

/// As [`check_dilation_grading`], with `extra(g)` added to each `δg` before grading.
pub fn check_dilation_grading_with(
    max_arity: usize,
    conv: &Conventions,
    extra: &dyn Fn(Gen) -> TreeSum,
) -> Result<ValidationReport> {
    let mut report = ValidationReport::new("dilation_grading");
    let mut d = Differential::new(Operad::HsInf, *conv);
    for g in Operad::HsInf.generators(max_arity, conv) {
        let mut image = d.on_generator(g)?;
        image.add(&extra(g));
        report.tick();
        let w = g.dilation_weight();
        let bad = image
            .iter()
            .find(|(t, _)| dilation_weight(t) != w)
            .map(|(t, _)| t.clone());
        if let Some(t) = bad {
            report.fail(
                "dilation",
                vec![g.to_string(), t.to_string()],
                format!(
                    "{t} in δ{g} has weight {} instead of {w}",
                    dilation_weight(&t)
                ),
            );
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dilation_holds_and_detects_a_fake_term() {
        let conv = Conventions::default();
        assert!(check_dilation_grading(4, &conv).unwrap().is_valid());
        let fake = |g: Gen| match g {
            Gen::F(1, 2) => "+1 F1,1(s1,w2)".parse().unwrap(),
            _ => TreeSum::zero(),
        };
        let report = check_dilation_grading_with(4, &conv, &fake).unwrap();
        assert_eq!(report.first().unwrap().witness[0], "F1,2");
    }
}
