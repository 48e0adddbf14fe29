//! Small named algebras and pairs used throughout the tests and the CLI fixtures.

use std::collections::BTreeMap;

use crate::jbtwist::{AtomData, LiePair};
use crate::liecore::{AlgebraSpec, BasisElem, MorphismSpec};
use crate::scalars::int;
use crate::vector::Vector;

/// `sl_2` with basis `e, f, h`: `[e,f] = h`, `[h,e] = 2e`, `[h,f] = -2f`.
pub fn sl2() -> AlgebraSpec {
    let mut s = AlgebraSpec::degree_zero("sl2", &["e", "f", "h"]);
    s.set_bracket(0, 1, Vector::basis(2)).unwrap();
    s.set_bracket(2, 0, Vector::term(0, int(2))).unwrap();
    s.set_bracket(2, 1, Vector::term(1, int(-2))).unwrap();
    s
}

/// `gl_2` with basis `E11, E12, E21, E22` and the commutator bracket.
pub fn gl2() -> AlgebraSpec {
    let names = ["E11", "E12", "E21", "E22"];
    let mut s = AlgebraSpec::degree_zero("gl2", &names);
    let idx = |i: usize, j: usize| 2 * i + j;
    for (i, j) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
        for (k, l) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            if idx(i, j) >= idx(k, l) {
                continue;
            }
            // [E_ij, E_kl] = δ_jk E_il - δ_li E_kj
            let mut v = Vector::zero();
            if j == k {
                v.add_term(idx(i, l), int(1));
            }
            if l == i {
                v.add_term(idx(k, j), int(-1));
            }
            s.set_bracket(idx(i, j), idx(k, l), v).unwrap();
        }
    }
    s
}

pub fn nonabelian2() -> AlgebraSpec {
    let mut s = AlgebraSpec::degree_zero("aff1", &["x", "y"]);
    s.set_bracket(0, 1, Vector::basis(1)).unwrap();
    s
}

pub fn heisenberg() -> AlgebraSpec {
    let mut s = AlgebraSpec::degree_zero("heis3", &["x", "y", "z"]);
    s.set_bracket(0, 1, Vector::basis(2)).unwrap();
    s
}

pub fn abelian(name: &str, names: &[&str]) -> AlgebraSpec {
    AlgebraSpec::degree_zero(name, names)
}

pub fn pair_sl2_identity() -> LiePair {
    LiePair::new(sl2(), sl2(), MorphismSpec::identity(3))
}

/// `e ↦ E12`, `f ↦ E21`, `h ↦ E11 - E22`.
pub fn pair_sl2_gl2() -> LiePair {
    let phi = MorphismSpec::strict([
        (0, Vector::basis(1)),
        (1, Vector::basis(2)),
        (2, Vector::from_terms([(0, int(1)), (3, int(-1))])),
    ]);
    LiePair::new(sl2(), gl2(), phi)
}

pub fn pair_nonabelian2_identity() -> LiePair {
    LiePair::new(nonabelian2(), nonabelian2(), MorphismSpec::identity(2))
}

/// Heisenberg algebra onto its abelianization `span{u, v}`.
pub fn pair_heisenberg_abelianization() -> LiePair {
    let phi = MorphismSpec::strict([(0, Vector::basis(0)), (1, Vector::basis(1))]);
    LiePair::new(heisenberg(), abelian("ab2", &["u", "v"]), phi)
}

/// `sl_2 ⊗ K[ε]/ε²` with `|ε| = -1`, `dε = 1`: basis `e, f, h, eε, fε, hε`.
pub fn sl2_eps() -> AlgebraSpec {
    let base = sl2();
    let mut basis: Vec<BasisElem> = base.basis.clone();
    for b in &base.basis {
        basis.push(BasisElem::new(format!("{}_eps", b.name), -1));
    }
    let mut s = AlgebraSpec::new("sl2_eps", basis);
    for x in 0..3 {
        for y in 0..3 {
            let v = base.bracket_basis(x, y);
            if x < y {
                s.set_bracket(x, y, v.clone()).unwrap();
            }
            // [x, yε] = [x, y]ε
            s.set_bracket(x, y + 3, v.map_indices(|i| i + 3)).unwrap();
        }
    }
    for x in 0..3 {
        s.set_differential(x + 3, Vector::basis(x)).unwrap();
        s.set_differential(x, Vector::zero()).unwrap();
    }
    s
}

/// Identity pair on the acyclic dg Lie algebra `sl_2 ⊗ K[ε]`.
pub fn pair_dg_sl2() -> LiePair {
    LiePair::new(sl2_eps(), sl2_eps(), MorphismSpec::identity(6))
}

/// `sl_2 → sl_2 ⊗ K[ε]` with `φ_1 = 1 + A`, `A(e) = f`, and
/// `φ_2(x, y) = sign·([φ_1 x, φ_1 y] - φ_1 [x, y]) ε`. The L∞ morphism is `sign = -1`.
pub fn linf_morphism_with_sign(sign: i64) -> LiePair {
    let g = sl2();
    let h = sl2_eps();
    let gdeg = g.degrees();
    let phi1 = |i: usize| -> Vector {
        let mut v = Vector::basis(i);
        if i == 0 {
            v.add_term(1, int(1));
        }
        v
    };
    let mut phi = MorphismSpec::strict((0..3).map(|i| (i, phi1(i))));
    for x in 0..3 {
        for y in x + 1..3 {
            let mut defect = g.bracket(&phi1(x), &phi1(y));
            let image: Vector = {
                let mut acc = Vector::zero();
                for (i, c) in g.bracket_basis(x, y).iter() {
                    acc.add_scaled(&phi1(i), c);
                }
                acc
            };
            defect = defect.sub(&image);
            for (i, c) in defect.iter() {
                phi.add_entry(&[x, y], &gdeg, i + 3, c * int(sign));
            }
        }
    }
    LiePair::new(g, h, phi)
}

pub fn pair_linf_sl2() -> LiePair {
    linf_morphism_with_sign(-1)
}

/// The strict degree-zero pairs of the fixture corpus.
pub fn strict_pairs() -> Vec<(&'static str, LiePair)> {
    vec![
        ("sl2_gl2", pair_sl2_gl2()),
        ("sl2_identity", pair_sl2_identity()),
        (
            "heisenberg_abelianization",
            pair_heisenberg_abelianization(),
        ),
        ("nonabelian2_identity", pair_nonabelian2_identity()),
    ]
}

/// Gauge data on `L = sl_2 ⊗ A`, `A = span{t, t², dt, t dt}` (weights ≥ 3 vanish):
/// `g = L⁰`, `h = L¹`, `⟨a, m⟩ = [a, m]`, `φ = -d`.
pub fn gauge_affine() -> AtomData {
    let base = sl2();
    let names = base.names();
    let g_basis: Vec<BasisElem> = ["t", "t2"]
        .iter()
        .flat_map(|p| {
            names
                .iter()
                .map(move |n| BasisElem::new(format!("{n}_{p}"), 0))
        })
        .collect();
    let h_basis: Vec<BasisElem> = ["dt", "tdt"]
        .iter()
        .flat_map(|p| {
            names
                .iter()
                .map(move |n| BasisElem::new(format!("{n}_{p}"), 0))
        })
        .collect();
    let mut g = AlgebraSpec::new("sl2_t", g_basis);
    // [x t, y t] = [x,y] t²
    for x in 0..3 {
        for y in x + 1..3 {
            g.set_bracket(x, y, base.bracket_basis(x, y).map_indices(|i| i + 3))
                .unwrap();
        }
    }
    let mut action = BTreeMap::new();
    for x in 0..3 {
        for y in 0..3 {
            // [x t, y dt] = [x,y] t dt
            let v = base.bracket_basis(x, y).map_indices(|i| i + 3);
            if !v.is_zero() {
                action.insert((x, y), v);
            }
        }
    }
    let mut phi = BTreeMap::new();
    for x in 0..3 {
        phi.insert(x, Vector::term(x, int(-1)));
        phi.insert(x + 3, Vector::term(x + 3, int(-2)));
    }
    AtomData {
        g,
        h_space: h_basis,
        action,
        phi,
    }
}

/// `sl_2 ⊗ Λ(ε₁, ε₂)` with `|ε₁| = |ε₂| = -1`: basis `x`, `x_e1`, `x_e2`, `x_e12` for
/// `x` in `e, f, h`.
pub fn sl2_exterior() -> AlgebraSpec {
    let base = sl2();
    let parts: [(&str, i32); 4] = [("", 0), ("_e1", -1), ("_e2", -1), ("_e12", -2)];
    let mut basis = Vec::new();
    for (suffix, d) in parts {
        for b in &base.basis {
            basis.push(BasisElem::new(format!("{}{suffix}", b.name), d));
        }
    }
    // monomial product on {1, ε₁, ε₂, ε₁ε₂}
    let product = |a: usize, b: usize| -> Option<(usize, i64)> {
        match (a, b) {
            (0, k) | (k, 0) => Some((k, 1)),
            (1, 2) => Some((3, 1)),
            (2, 1) => Some((3, -1)),
            _ => None,
        }
    };
    let mut s = AlgebraSpec::new("sl2_exterior", basis);
    for i in 0..12 {
        for j in i..12 {
            let (a, x) = (i / 3, i % 3);
            let (b, y) = (j / 3, j % 3);
            let Some((k, sign)) = product(a, b) else {
                continue;
            };
            let v = base
                .bracket_basis(x, y)
                .map_indices(|z| z + 3 * k)
                .scaled(&int(sign));
            s.set_bracket(i, j, v).unwrap();
        }
    }
    s
}

/// `sl_2 → sl_2 ⊗ Λ(ε₁, ε₂)` with free components `φ_1(x) = x`,
/// `φ_2(x, y) = ([x, y] + x) ε₁` and `φ_3(e, f, h) = (e + 2h) ε₁ε₂`.
/// Not a morphism; it only feeds formal identities.
pub fn pair_formal_higher() -> LiePair {
    let g = sl2();
    let h = sl2_exterior();
    let gdeg = g.degrees();
    let mut phi = MorphismSpec::strict((0..3).map(|i| (i, Vector::basis(i))));
    for x in 0..3 {
        for y in x + 1..3 {
            let mut v = g.bracket_basis(x, y);
            v.add_term(x, int(1));
            for (i, c) in v.iter() {
                phi.add_entry(&[x, y], &gdeg, i + 3, c.clone());
            }
        }
    }
    phi.add_entry(&[0, 1, 2], &gdeg, 9, int(1));
    phi.add_entry(&[0, 1, 2], &gdeg, 11, int(2));
    LiePair::new(g, h, phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liecore::{validate_lie, validate_strict_morphism};

    #[test]
    fn fixtures_are_valid() {
        for a in [sl2(), gl2(), nonabelian2(), heisenberg(), sl2_eps()] {
            let r = validate_lie(&a).unwrap();
            assert!(r.is_valid(), "{r}");
        }
        for (_, p) in strict_pairs() {
            let r = validate_strict_morphism(&p.phi, &p.g, &p.h).unwrap();
            assert!(r.is_valid(), "{r}");
        }
        let p = pair_dg_sl2();
        assert!(validate_strict_morphism(&p.phi, &p.g, &p.h)
            .unwrap()
            .is_valid());
    }
}
