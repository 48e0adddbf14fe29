//! Bernoulli-twisted actions of Lie pairs, the recursion for their coefficients, and
//! validators for Lie atoms and affine homogeneous spaces.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{CoreError, Result};
use crate::formalfields::{sym_tuples, verify_field_morphism, TaylorVectorField};
use crate::liecore::linf::skew_tuples;
use crate::liecore::{
    validate_lie, validate_strict_morphism, AlgebraSpec, BasisElem, FreeLie, MorphismSpec,
};
use crate::report::ValidationReport;
use crate::scalars::{bernoulli_over_factorial, parity_sign, sign_scalar, Scalar};
use crate::vector::Vector;

/// Two Lie algebras and a (possibly higher) morphism between them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiePair {
    pub g: AlgebraSpec,
    pub h: AlgebraSpec,
    pub phi: MorphismSpec,
}

impl LiePair {
    pub fn new(g: AlgebraSpec, h: AlgebraSpec, phi: MorphismSpec) -> Self {
        LiePair { g, h, phi }
    }

    /// Validates both algebras and, for a strict `phi`, the morphism property.
    pub fn validate(&self) -> Result<ValidationReport> {
        let mut report = ValidationReport::new("pair");
        report.absorb(validate_lie(&self.g)?);
        report.absorb(validate_lie(&self.h)?);
        if self.phi.is_strict() {
            report.absorb(validate_strict_morphism(&self.phi, &self.g, &self.h)?);
        }
        Ok(report)
    }
}

/// Table of a map `∧^m g ⊗ ⊙^n h → h`, keyed by (sorted g inputs, sorted h inputs).
pub type TwistTable = BTreeMap<(Vec<usize>, Vec<usize>), Vector>;

/// `Σ_σ ε(σ) x@b_σ(1)@…@b_σ(n)` with `x@b = [x, b]`, summed over orderings of `bs`
/// with Koszul signs. Computed over subsets rather than permutations.
pub fn symmetrized_ladder(h: &AlgebraSpec, x: &Vector, bs: &[usize]) -> Vector {
    let n = bs.len();
    let full = (1usize << n) - 1;
    let deg: Vec<i64> = bs.iter().map(|&b| h.degree(b) as i64).collect();
    let mut table: Vec<Vector> = vec![Vector::zero(); 1 << n];
    table[0] = x.clone();
    for mask in 1..=full {
        let mut acc = Vector::zero();
        for j in 0..n {
            if mask >> j & 1 == 0 {
                continue;
            }
            let prev = &table[mask & !(1 << j)];
            if prev.is_zero() {
                continue;
            }
            let later: i64 = (j + 1..n)
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| deg[i])
                .sum();
            let s = parity_sign(deg[j] * later);
            acc.add_scaled(&h.bracket(prev, &Vector::basis(bs[j])), &sign_scalar(s));
        }
        table[mask] = acc;
    }
    table[full].clone()
}

/// Twisted action with arbitrary ladder coefficients `coeff(n)` in place of `B_n/n!`.
pub fn twisted_action_with(
    pair: &LiePair,
    order: usize,
    coeff: &dyn Fn(usize) -> Scalar,
) -> Result<Vec<TaylorVectorField>> {
    if !pair.phi.is_strict() {
        return Err(CoreError::Unsupported(
            "twisted_action needs a strict morphism; use twisted_action_general".into(),
        ));
    }
    let hdeg = pair.h.degrees();
    let mut out = Vec::with_capacity(pair.g.dim());
    for a in 0..pair.g.dim() {
        let phi_a = pair.phi.apply1(&Vector::basis(a));
        let mut field = TaylorVectorField::new(hdeg.clone(), pair.g.degree(a), order);
        if !phi_a.is_zero() {
            for n in 0..=order {
                let c = coeff(n);
                if c.is_zero() {
                    continue;
                }
                for b in sym_tuples(pair.h.dim(), n, &hdeg) {
                    let v = symmetrized_ladder(&pair.h, &phi_a, &b);
                    if !v.is_zero() {
                        field.insert(&b, &v.scaled(&c))?;
                    }
                }
            }
        }
        out.push(field);
    }
    Ok(out)
}

/// `F_φ(a)_n(b_1..b_n) = (B_n/n!) Σ_σ φ(a)@b_σ(1)@…@b_σ(n)` for every basis element `a`.
pub fn twisted_action(pair: &LiePair, order: usize) -> Result<Vec<TaylorVectorField>> {
    twisted_action_with(pair, order, &bernoulli_over_factorial)
}

/// `(B_n/n!) Σ_σ ε(σ) φ_m(g_1..g_m)@h_σ(1)@…@h_σ(n)` on all sorted input tuples.
pub fn twisted_action_general(
    g: &AlgebraSpec,
    h: &AlgebraSpec,
    phi: &MorphismSpec,
    m: usize,
    n: usize,
) -> Result<TwistTable> {
    if m == 0 {
        return Err(CoreError::Unsupported("m must be at least 1".into()));
    }
    let gdeg = g.degrees();
    let hdeg = h.degrees();
    let c = bernoulli_over_factorial(n);
    let mut out = TwistTable::new();
    for gs in skew_tuples(g.dim(), m, &gdeg) {
        let x = phi.eval_basis(&gs, &gdeg);
        if x.is_zero() {
            continue;
        }
        for bs in sym_tuples(h.dim(), n, &hdeg) {
            let v = symmetrized_ladder(h, &x, &bs).scaled(&c);
            if !v.is_zero() {
                out.insert((gs.clone(), bs), v);
            }
        }
    }
    Ok(out)
}

/// Converts a twisted action into the `m = 1` table format of `twisted_action_general`.
pub fn action_as_table(fields: &[TaylorVectorField], n: usize) -> TwistTable {
    let mut out = TwistTable::new();
    for (a, f) in fields.iter().enumerate() {
        for (k, v) in f.entries(n) {
            out.insert((vec![a], k.clone()), v.clone());
        }
    }
    out
}

/// Solves the recursion for the ladder coefficients `c_0, ..., c_max_n` with `c_0 = 1`,
/// imposing each equation coordinate-wise in a free nilpotent Lie algebra on three
/// generators `u1 = φ(a1)`, `u2 = φ(a2)`, `w = b` of weight `max_n + 2`.
pub fn solve_cn(max_n: usize) -> Result<Vec<Scalar>> {
    solve_cn_in(max_n, max_n + 2)
}

/// As [`solve_cn`], in the free nilpotent algebra of the given weight (at least `max_n + 2`).
pub fn solve_cn_in(max_n: usize, weight: usize) -> Result<Vec<Scalar>> {
    if weight < max_n + 2 {
        return Err(CoreError::OrderTooHigh {
            requested: max_n + 2,
            available: weight,
        });
    }
    let lie = FreeLie::new(&["u1", "u2", "w"], weight);
    let (u1, u2, w) = (lie.generator(0), lie.generator(1), lie.generator(2));
    let ladder = |x: &Vector, k: usize| -> Vector {
        let mut acc = x.clone();
        for _ in 0..k {
            acc = lie.bracket(&acc, &w);
        }
        acc
    };
    // pre[k] = u_i@w^k
    let p1: Vec<Vector> = (0..=max_n).map(|k| ladder(&u1, k)).collect();
    let p2: Vec<Vector> = (0..=max_n).map(|k| ladder(&u2, k)).collect();
    let base = lie.bracket(&u1, &u2);
    // T(k, l) = ([u1@w^l, u2@w^k] - [u2@w^l, u1@w^k])@w^{n-k-l}
    let term = |k: usize, l: usize, rest: usize| -> Vector {
        let mut t = lie.bracket(&p1[l], &p2[k]);
        t.add_scaled(&lie.bracket(&p2[l], &p1[k]), &-Scalar::one());
        ladder(&t, rest)
    };

    let mut c: Vec<Scalar> = vec![Scalar::one()];
    for n in 0..=max_n {
        // c_n [u1,u2]@w^n + Σ_{k+l ≤ n} c_k c_{n+1-k} T(k,l) = 0, linear in c_{n+1} (k = 0)
        let mut known = ladder(&base, n).scaled(&c[n]);
        let mut linear = Vector::zero();
        for k in 0..=n {
            for l in 0..=(n - k) {
                let t = term(k, l, n - k - l);
                if k == 0 {
                    linear.add_scaled(&t, &c[0]);
                } else {
                    known.add_scaled(&t, &(&c[k] * &c[n + 1 - k]));
                }
            }
        }
        let Some((pivot, a)) = linear.iter().next().map(|(i, a)| (i, a.clone())) else {
            return Err(CoreError::Inconsistent(format!(
                "equation {n} does not involve c_{}",
                n + 1
            )));
        };
        let next = -known.get(pivot) / a;
        let mut residual = known.clone();
        residual.add_scaled(&linear, &next);
        if !residual.is_zero() {
            return Err(CoreError::Inconsistent(format!(
                "equation {n} has no solution: residual {residual}"
            )));
        }
        c.push(next);
    }
    c.truncate(max_n + 1);
    Ok(c)
}

/// A `g`-module `h` with a linear map `φ: g → h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomData {
    pub g: AlgebraSpec,
    pub h_space: Vec<BasisElem>,
    /// `⟨a, m⟩` on basis pairs.
    pub action: BTreeMap<(usize, usize), Vector>,
    pub phi: BTreeMap<usize, Vector>,
}

impl AtomData {
    pub fn h_degrees(&self) -> Vec<i32> {
        self.h_space.iter().map(|b| b.degree).collect()
    }

    pub fn h_names(&self) -> Vec<String> {
        self.h_space.iter().map(|b| b.name.clone()).collect()
    }

    pub fn act(&self, a: &Vector, m: &Vector) -> Vector {
        let mut out = Vector::zero();
        for (i, x) in a.iter() {
            for (j, y) in m.iter() {
                if let Some(v) = self.action.get(&(i, j)) {
                    out.add_scaled(v, &(x * y));
                }
            }
        }
        out
    }

    pub fn phi(&self, a: &Vector) -> Vector {
        let mut out = Vector::zero();
        for (i, x) in a.iter() {
            if let Some(v) = self.phi.get(&i) {
                out.add_scaled(v, x);
            }
        }
        out
    }

    /// Atom data `⟨a, m⟩ = [φ(a), m]` induced by a strict Lie pair.
    pub fn from_pair(pair: &LiePair) -> Self {
        let mut action = BTreeMap::new();
        for a in 0..pair.g.dim() {
            let pa = pair.phi.apply1(&Vector::basis(a));
            for m in 0..pair.h.dim() {
                let v = pair.h.bracket(&pa, &Vector::basis(m));
                if !v.is_zero() {
                    action.insert((a, m), v);
                }
            }
        }
        let phi = (0..pair.g.dim())
            .map(|a| (a, pair.phi.apply1(&Vector::basis(a))))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        AtomData {
            g: pair.g.clone(),
            h_space: pair.h.basis.clone(),
            action,
            phi,
        }
    }
}

fn check_module_axioms(data: &AtomData, report: &mut ValidationReport) -> Result<()> {
    report.absorb(validate_lie(&data.g)?);
    let gn = data.g.names();
    let hn = data.h_names();
    let hdeg = data.h_degrees();
    for (&(a, m), v) in &data.action {
        if a >= data.g.dim() || m >= data.h_space.len() {
            return Err(CoreError::IndexOutOfRange {
                index: a.max(m),
                size: data.h_space.len().max(data.g.dim()),
            });
        }
        for (z, _) in v.iter() {
            if hdeg[z] != data.g.degree(a) + hdeg[m] {
                report.fail(
                    "degree",
                    vec![gn[a].clone(), hn[m].clone()],
                    "action has the wrong degree",
                );
            }
        }
    }
    for (&a, v) in &data.phi {
        for (z, _) in v.iter() {
            if hdeg[z] != data.g.degree(a) {
                report.fail("degree", vec![gn[a].clone()], "phi must have degree 0");
            }
        }
    }
    for a in 0..data.g.dim() {
        for b in 0..data.g.dim() {
            for m in 0..data.h_space.len() {
                report.tick();
                let (ea, eb, em) = (Vector::basis(a), Vector::basis(b), Vector::basis(m));
                let lhs = data.act(&data.g.bracket(&ea, &eb), &em);
                let mut rhs = data.act(&ea, &data.act(&eb, &em));
                let s = parity_sign(data.g.degree(a) as i64 * data.g.degree(b) as i64);
                rhs.add_scaled(&data.act(&eb, &data.act(&ea, &em)), &sign_scalar(-s));
                if lhs != rhs {
                    report.fail(
                        "module",
                        vec![gn[a].clone(), gn[b].clone(), hn[m].clone()],
                        format!("<[a,b],m> = {}, rhs = {}", lhs.render(&hn), rhs.render(&hn)),
                    );
                }
            }
        }
    }
    Ok(())
}

/// Affine homogeneous space axioms: `g` Lie, `h` a `g`-module and
/// `φ[a,b] = ⟨a,φb⟩ - (-1)^{ab}⟨b,φa⟩`; then `(F_0, F_1) = (φ, -⟨,⟩)` is confirmed to be a
/// morphism into formal vector fields. The affine fields have no components above order 1,
/// so the check runs through Taylor order 2, covering both `φ` and the module axiom.
pub fn validate_affine(data: &AtomData) -> Result<ValidationReport> {
    let mut report = ValidationReport::new("affine");
    check_module_axioms(data, &mut report)?;
    let gn = data.g.names();
    let hn = data.h_names();
    for a in 0..data.g.dim() {
        for b in a..data.g.dim() {
            report.tick();
            let (ea, eb) = (Vector::basis(a), Vector::basis(b));
            let lhs = data.phi(&data.g.bracket(&ea, &eb));
            let mut rhs = data.act(&ea, &data.phi(&eb));
            let s = parity_sign(data.g.degree(a) as i64 * data.g.degree(b) as i64);
            rhs.add_scaled(&data.act(&eb, &data.phi(&ea)), &sign_scalar(-s));
            if lhs != rhs {
                report.fail(
                    "affine_iii",
                    vec![gn[a].clone(), gn[b].clone()],
                    format!(
                        "phi[a,b] = {}, <a,phi b> - ±<b,phi a> = {}",
                        lhs.render(&hn),
                        rhs.render(&hn)
                    ),
                );
            }
        }
    }
    let fields = affine_fields(data)?;
    let morphism = verify_field_morphism(&fields, &data.g, 2)?;
    if !morphism.is_valid() {
        report.absorb(morphism);
    } else {
        report.checked += morphism.checked;
        report.note("(phi, -<,>) is a morphism into affine vector fields");
    }
    Ok(report)
}

/// The affine vector fields `F(a) = φ(a) - ⟨a, ·⟩`; components above order 1 are zero.
pub fn affine_fields(data: &AtomData) -> Result<Vec<TaylorVectorField>> {
    let hdeg = data.h_degrees();
    let mut out = Vec::new();
    for a in 0..data.g.dim() {
        let mut f = TaylorVectorField::new(hdeg.clone(), data.g.degree(a), 2);
        f.insert(&[], &data.phi(&Vector::basis(a)))?;
        for m in 0..hdeg.len() {
            let v = data.act(&Vector::basis(a), &Vector::basis(m));
            f.insert(&[m], &v.neg())?;
        }
        out.push(f);
    }
    Ok(out)
}

/// Lie atom axioms: `g` Lie, `h` a `g`-module and the double equality
/// `φ([a,b]) = ⟨a,φ(b)⟩ = -(-1)^{ab}⟨b,φ(a)⟩`.
pub fn validate_atom(data: &AtomData) -> Result<ValidationReport> {
    let mut report = ValidationReport::new("atom");
    check_module_axioms(data, &mut report)?;
    let gn = data.g.names();
    let hn = data.h_names();
    for a in 0..data.g.dim() {
        for b in 0..data.g.dim() {
            report.tick();
            let (ea, eb) = (Vector::basis(a), Vector::basis(b));
            let lhs = data.phi(&data.g.bracket(&ea, &eb));
            let mid = data.act(&ea, &data.phi(&eb));
            let s = parity_sign(data.g.degree(a) as i64 * data.g.degree(b) as i64);
            let right = data.act(&eb, &data.phi(&ea)).scaled(&sign_scalar(-s));
            if lhs != mid || mid != right {
                report.fail(
                    "atom_iii",
                    vec![gn[a].clone(), gn[b].clone()],
                    format!(
                        "phi[a,b] = {}, <a,phi b> = {}, -±<b,phi a> = {}",
                        lhs.render(&hn),
                        mid.render(&hn),
                        right.render(&hn)
                    ),
                );
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{bernoulli, factorial, frac, int};

    #[test]
    fn recursion_base_cases() {
        let c = solve_cn(3).unwrap();
        assert_eq!(c, vec![int(1), frac(-1, 2), frac(1, 12), int(0)]);
        // 2 c_1 = -c_0 and 3 c_2 = -c_1 - c_1^2
        assert_eq!(int(2) * &c[1], -c[0].clone());
        assert_eq!(int(3) * &c[2], -c[1].clone() - &c[1] * &c[1]);
    }

    #[test]
    fn recursion_matches_bernoulli() {
        let c = solve_cn(6).unwrap();
        for (n, cn) in c.iter().enumerate() {
            assert_eq!(*cn, bernoulli(n) / Scalar::from_integer(factorial(n)));
        }
    }
}
