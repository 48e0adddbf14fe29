//! Agreement of evaluated `JB` and `JB½∞` images with the twisted actions.

use crate::error::Result;
use crate::formalfields::sym_tuples;
use crate::jbtwist::{
    action_as_table, twisted_action, twisted_action_general, LiePair, TwistTable,
};
use crate::liecore::linf::skew_tuples;
use crate::report::ValidationReport;

use super::eval::{evaluate_sum, PairRep};
use super::jb::{jb_half_on_generator, jb_on_generator};
use super::tree::{Colour, Gen, TreeSum};

/// Evaluates an image of `F(m, n)` on all sorted input tuples of the pair.
pub fn image_table(pair: &LiePair, image: &TreeSum, m: usize, n: usize) -> Result<TwistTable> {
    let rep = PairRep {
        g: &pair.g,
        h: &pair.h,
        phi: &pair.phi,
    };
    let gdeg = pair.g.degrees();
    let hdeg = pair.h.degrees();
    let mut out = TwistTable::new();
    for gs in skew_tuples(pair.g.dim(), m, &gdeg) {
        for bs in sym_tuples(pair.h.dim(), n, &hdeg) {
            let inputs: Vec<(Colour, usize)> = gs
                .iter()
                .map(|&a| (Colour::Straight, a))
                .chain(bs.iter().map(|&b| (Colour::Wavy, b)))
                .collect();
            let v = evaluate_sum(image, &rep, &inputs)?;
            if !v.is_zero() {
                out.insert((gs.clone(), bs), v);
            }
        }
    }
    Ok(out)
}

fn compare(
    report: &mut ValidationReport,
    kind: &str,
    g: Gen,
    ours: &TwistTable,
    theirs: &TwistTable,
) {
    report.tick();
    let keys = ours.keys().chain(theirs.keys());
    for key in keys {
        if ours.get(key) != theirs.get(key) {
            report.fail(
                kind,
                vec![g.to_string(), format!("{key:?}")],
                format!(
                    "{g} on {key:?}: trees give {:?}, the action gives {:?}",
                    ours.get(key),
                    theirs.get(key)
                ),
            );
            return;
        }
    }
}

/// Compares `JB(F(m, n))` evaluated on a strict pair with the twisted action, for
/// `m + n ≤ max_total`. For `m = 1` both the field form and the general table are used.
pub fn check_jb_against_action(pair: &LiePair, max_total: usize) -> Result<ValidationReport> {
    let mut report = ValidationReport::new("jb_vs_action");
    for m in 1..=max_total {
        for n in 0..=max_total - m {
            let g = Gen::F(m as u8, n as u8);
            let ours = image_table(pair, &jb_on_generator(g)?, m, n)?;
            let general = twisted_action_general(&pair.g, &pair.h, &pair.phi, m, n)?;
            compare(&mut report, "jb_vs_general", g, &ours, &general);
            if m == 1 {
                let fields = action_as_table(&twisted_action(pair, n)?, n);
                compare(&mut report, "jb_vs_action", g, &ours, &fields);
            }
        }
    }
    Ok(report)
}

/// Compares `JB½∞(F(m, n))` with `twisted_action_general` for `m + n ≤ max_total`.
pub fn check_jb_half_against_general(pair: &LiePair, max_total: usize) -> Result<ValidationReport> {
    let mut report = ValidationReport::new("jb_half_vs_general");
    for m in 1..=max_total {
        for n in 0..=max_total - m {
            let g = Gen::F(m as u8, n as u8);
            let ours = image_table(pair, &jb_half_on_generator(g)?, m, n)?;
            let theirs = twisted_action_general(&pair.g, &pair.h, &pair.phi, m, n)?;
            compare(&mut report, "jb_half_vs_general", g, &ours, &theirs);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::liecore::validate_lie;

    #[test]
    fn jb_images_match_the_action_on_sl2() {
        let report = check_jb_against_action(&corpus::pair_sl2_identity(), 4).unwrap();
        assert!(report.is_valid(), "{report}");
        let report = check_jb_against_action(&corpus::pair_dg_sl2(), 3).unwrap();
        assert!(report.is_valid(), "{report}");
    }

    #[test]
    fn a_wrong_ladder_coefficient_is_seen_by_evaluation() {
        let pair = corpus::pair_sl2_identity();
        let bad = |n: usize| {
            if n == 2 {
                crate::scalars::frac(1, 8)
            } else {
                crate::scalars::bernoulli_over_factorial(n)
            }
        };
        let g = Gen::F(1, 2);
        let image = super::super::jb::jb_on_generator_with(g, &bad).unwrap();
        let ours = image_table(&pair, &image, 1, 2).unwrap();
        let theirs = twisted_action_general(&pair.g, &pair.h, &pair.phi, 1, 2).unwrap();
        assert_ne!(ours, theirs);
    }

    #[test]
    fn jb_half_images_match_with_higher_components() {
        let pair = corpus::pair_formal_higher();
        assert!(validate_lie(&pair.h).unwrap().is_valid());
        let report = check_jb_half_against_general(&pair, 4).unwrap();
        assert!(report.is_valid(), "{report}");
        let t = twisted_action_general(&pair.g, &pair.h, &pair.phi, 3, 1).unwrap();
        assert!(!t.is_empty());
    }
}
