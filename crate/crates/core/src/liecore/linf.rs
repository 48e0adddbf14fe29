//! L∞ structures given by brackets `l_n` on a finite graded basis.

use std::collections::BTreeMap;

use num_traits::One;

use super::{sort_skew, AlgebraSpec, BasisElem, SkewTable};
use crate::error::{CoreError, Result};
use crate::report::ValidationReport;
use crate::scalars::{koszul_sign_unchecked, parity_sign, permutation_sign, sign_scalar, Scalar};
use crate::vector::Vector;

/// Graded-antisymmetric brackets `l_n: ∧^n V → V` of degree `2 - n`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LInfinityStructure {
    pub basis: Vec<BasisElem>,
    pub brackets: BTreeMap<usize, SkewTable>,
}

impl LInfinityStructure {
    pub fn new(basis: Vec<BasisElem>) -> Self {
        LInfinityStructure {
            basis,
            brackets: BTreeMap::new(),
        }
    }

    /// `l_1 = d`, `l_2 = [,]`, higher brackets copied.
    pub fn from_algebra(spec: &AlgebraSpec) -> Self {
        let mut l = LInfinityStructure::new(spec.basis.clone());
        for (x, v) in spec.differential_entries() {
            l.add(&[*x], v, &Scalar::one());
        }
        for (&(x, y), v) in spec.bracket_entries() {
            if x <= y {
                l.add(&[x, y], v, &Scalar::one());
            }
        }
        for table in spec.higher_tables().values() {
            for (k, v) in table {
                l.add(k, v, &Scalar::one());
            }
        }
        l
    }

    pub fn degrees(&self) -> Vec<i32> {
        self.basis.iter().map(|b| b.degree).collect()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Adds `c·v` to `l_n(inputs)`; inputs may be in any order.
    pub fn add(&mut self, inputs: &[usize], v: &Vector, c: &Scalar) {
        let mut key = inputs.to_vec();
        let sign = sort_skew(&mut key, &self.degrees());
        if sign == 0 {
            return;
        }
        let table = self.brackets.entry(inputs.len()).or_default();
        let entry = table.entry(key.clone()).or_default();
        entry.add_scaled(v, &(c * sign_scalar(sign)));
        if entry.is_zero() {
            table.remove(&key);
        }
    }

    pub fn eval_basis(&self, inputs: &[usize]) -> Vector {
        let Some(table) = self.brackets.get(&inputs.len()) else {
            return Vector::zero();
        };
        let mut key = inputs.to_vec();
        let sign = sort_skew(&mut key, &self.degrees());
        if sign == 0 {
            return Vector::zero();
        }
        match table.get(&key) {
            Some(v) => v.scaled(&sign_scalar(sign)),
            None => Vector::zero(),
        }
    }

    /// `l_n(v, x_2, ..., x_n)` with a vector in the first slot and basis elements after it.
    fn eval_first_vector(&self, v: &Vector, rest: &[usize]) -> Vector {
        let mut out = Vector::zero();
        let mut inputs = Vec::with_capacity(rest.len() + 1);
        for (i, c) in v.iter() {
            inputs.clear();
            inputs.push(i);
            inputs.extend_from_slice(rest);
            out.add_scaled(&self.eval_basis(&inputs), c);
        }
        out
    }

    pub fn max_arity(&self) -> usize {
        self.brackets
            .iter()
            .filter(|(_, t)| !t.is_empty())
            .map(|(&n, _)| n)
            .max()
            .unwrap_or(0)
    }
}

/// Nondecreasing index tuples of length `n` over `0..dim` that survive antisymmetry.
pub fn skew_tuples(dim: usize, n: usize, degrees: &[i32]) -> Vec<Vec<usize>> {
    fn go(
        start: usize,
        dim: usize,
        n: usize,
        degrees: &[i32],
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in start..dim {
            if cur.last() == Some(&i) && degrees[i].rem_euclid(2) == 0 {
                continue;
            }
            cur.push(i);
            go(i, dim, n, degrees, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, dim, n, degrees, &mut Vec::new(), &mut out);
    out
}

/// Verifies the generalized Jacobi identities
/// `Σ_{i+j=n+1} Σ_σ χ(σ) (-1)^{i(j-1)} l_j(l_i(x_σ(1..i)), x_σ(i+1..n)) = 0`
/// for every arity `n ≤ arity_cap` on every basis tuple.
pub fn check_linfinity(l: &LInfinityStructure, arity_cap: usize) -> Result<ValidationReport> {
    let mut report = ValidationReport::new("linfinity");
    let degrees = l.degrees();
    for (&n, table) in &l.brackets {
        for (inputs, v) in table {
            let total: i32 = inputs.iter().map(|&i| degrees[i]).sum();
            for (z, _) in v.iter() {
                if z >= l.dim() {
                    return Err(CoreError::IndexOutOfRange {
                        index: z,
                        size: l.dim(),
                    });
                }
                if degrees[z] != total + 2 - n as i32 {
                    return Err(CoreError::Degree(format!(
                        "l_{n} on {:?} hits {} of degree {}",
                        inputs, l.basis[z].name, degrees[z]
                    )));
                }
            }
        }
    }
    let names: Vec<String> = l.basis.iter().map(|b| b.name.clone()).collect();
    for n in 1..=arity_cap {
        for tuple in skew_tuples(l.dim(), n, &degrees) {
            report.tick();
            let total = jacobiator(l, &tuple, &degrees);
            if !total.is_zero() {
                report.fail(
                    &format!("jacobi_{n}"),
                    tuple.iter().map(|&i| names[i].clone()).collect(),
                    total.render(&names),
                );
            }
        }
    }
    Ok(report)
}

fn jacobiator(l: &LInfinityStructure, x: &[usize], degrees: &[i32]) -> Vector {
    let n = x.len();
    let tuple_degrees: Vec<i32> = x.iter().map(|&i| degrees[i]).collect();
    let mut total = Vector::zero();
    for i in 1..=n {
        let j = n + 1 - i;
        if !l.brackets.contains_key(&i) || !l.brackets.contains_key(&j) {
            continue;
        }
        // unshuffles: choose which positions go into the inner bracket
        for mask in 0u64..(1u64 << n) {
            if mask.count_ones() as usize != i {
                continue;
            }
            let inner: Vec<usize> = (0..n).filter(|p| mask >> p & 1 == 1).collect();
            let outer: Vec<usize> = (0..n).filter(|p| mask >> p & 1 == 0).collect();
            let perm: Vec<usize> = inner.iter().chain(outer.iter()).copied().collect();
            let chi = permutation_sign(&perm) * koszul_sign_unchecked(&perm, &tuple_degrees);
            let sign = chi * parity_sign((i * (j - 1)) as i64);
            let inner_inputs: Vec<usize> = inner.iter().map(|&p| x[p]).collect();
            let inner_val = l.eval_basis(&inner_inputs);
            if inner_val.is_zero() {
                continue;
            }
            let outer_inputs: Vec<usize> = outer.iter().map(|&p| x[p]).collect();
            let val = l.eval_first_vector(&inner_val, &outer_inputs);
            total.add_scaled(&val, &sign_scalar(sign));
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::int;

    fn sl2() -> AlgebraSpec {
        let mut s = AlgebraSpec::degree_zero("sl2", &["e", "f", "h"]);
        s.set_bracket(2, 0, Vector::term(0, int(2))).unwrap();
        s.set_bracket(2, 1, Vector::term(1, int(-2))).unwrap();
        s.set_bracket(0, 1, Vector::basis(2)).unwrap();
        s
    }

    #[test]
    fn lie_algebra_is_linfinity() {
        let l = LInfinityStructure::from_algebra(&sl2());
        assert!(check_linfinity(&l, 4).unwrap().is_valid());
    }

    #[test]
    fn broken_jacobi_detected() {
        let mut s = sl2();
        s.set_bracket(0, 1, Vector::from_terms([(2, int(1)), (0, int(1))]))
            .unwrap();
        let l = LInfinityStructure::from_algebra(&s);
        let r = check_linfinity(&l, 3).unwrap();
        assert!(r.has_kind("jacobi_3"));
    }
}
