//! Formal vector fields on a graded space `h`, stored by their Taylor components.

use std::collections::BTreeMap;

use crate::error::{CoreError, Result};
use crate::liecore::AlgebraSpec;
use crate::report::ValidationReport;
use crate::scalars::{
    koszul_sign_unchecked, parity_sign, sign_scalar, sort_signed, symmetric_swap, Scalar,
};
use crate::vector::Vector;

/// Sparse table of a graded-symmetric multilinear map, keyed by sorted index tuples.
pub type SymTable = BTreeMap<Vec<usize>, Vector>;

/// Sorts `inputs` with the graded-symmetric sign; `0` if the tuple is forced to vanish.
pub fn sort_symmetric(inputs: &mut [usize], degrees: &[i32]) -> i32 {
    let sign = sort_signed(
        inputs,
        |&i| i,
        |&a, &b| symmetric_swap(degrees[a], degrees[b]),
    );
    if inputs
        .windows(2)
        .any(|p| p[0] == p[1] && degrees[p[0]].rem_euclid(2) == 1)
    {
        return 0;
    }
    sign
}

/// Nondecreasing tuples of length `n` over `0..dim` that survive graded symmetry.
pub fn sym_tuples(dim: usize, n: usize, degrees: &[i32]) -> Vec<Vec<usize>> {
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
            if cur.last() == Some(&i) && degrees[i].rem_euclid(2) == 1 {
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

/// Formal vector field `Σ_n F_n`, `F_n: ⊙^n h → h`, known up to `truncation_order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaylorVectorField {
    pub degrees: Vec<i32>,
    pub field_degree: i32,
    pub truncation_order: usize,
    components: BTreeMap<usize, SymTable>,
}

impl TaylorVectorField {
    pub fn new(degrees: Vec<i32>, field_degree: i32, truncation_order: usize) -> Self {
        TaylorVectorField {
            degrees,
            field_degree,
            truncation_order,
            components: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    /// Adds `v` to `F_n(inputs)`, inputs in any order.
    pub fn insert(&mut self, inputs: &[usize], v: &Vector) -> Result<()> {
        let n = inputs.len();
        if n > self.truncation_order {
            return Err(CoreError::OrderTooHigh {
                requested: n,
                available: self.truncation_order,
            });
        }
        let mut key = inputs.to_vec();
        let sign = sort_symmetric(&mut key, &self.degrees);
        if sign == 0 {
            return Ok(());
        }
        let table = self.components.entry(n).or_default();
        let entry = table.entry(key.clone()).or_default();
        entry.add_scaled(v, &sign_scalar(sign));
        if entry.is_zero() {
            table.remove(&key);
        }
        Ok(())
    }

    pub fn component(&self, n: usize) -> Option<&SymTable> {
        self.components.get(&n)
    }

    /// Nonzero entries of `F_n`, empty if none.
    pub fn entries(&self, n: usize) -> impl Iterator<Item = (&Vec<usize>, &Vector)> {
        self.components.get(&n).into_iter().flatten()
    }

    pub fn eval_basis(&self, inputs: &[usize]) -> Result<Vector> {
        let n = inputs.len();
        if n > self.truncation_order {
            return Err(CoreError::OrderTooHigh {
                requested: n,
                available: self.truncation_order,
            });
        }
        let Some(table) = self.components.get(&n) else {
            return Ok(Vector::zero());
        };
        let mut key = inputs.to_vec();
        let sign = sort_symmetric(&mut key, &self.degrees);
        if sign == 0 {
            return Ok(Vector::zero());
        }
        Ok(match table.get(&key) {
            Some(v) => v.scaled(&sign_scalar(sign)),
            None => Vector::zero(),
        })
    }

    /// `F_{n+1}(v, rest)` with a vector in the first slot.
    fn eval_first_vector(&self, v: &Vector, rest: &[usize]) -> Result<Vector> {
        let mut out = Vector::zero();
        let mut inputs = Vec::with_capacity(rest.len() + 1);
        for (i, c) in v.iter() {
            inputs.clear();
            inputs.push(i);
            inputs.extend_from_slice(rest);
            out.add_scaled(&self.eval_basis(&inputs)?, c);
        }
        Ok(out)
    }

    pub fn restrict(&self, order: usize) -> TaylorVectorField {
        let mut out = self.clone();
        out.truncation_order = order.min(self.truncation_order);
        out.components.retain(|&n, t| n <= order && !t.is_empty());
        out
    }

    pub fn scaled(&self, c: &Scalar) -> TaylorVectorField {
        let mut out = TaylorVectorField::new(
            self.degrees.clone(),
            self.field_degree,
            self.truncation_order,
        );
        for (&n, t) in &self.components {
            let table: SymTable = t
                .iter()
                .map(|(k, v)| (k.clone(), v.scaled(c)))
                .filter(|(_, v)| !v.is_zero())
                .collect();
            if !table.is_empty() {
                out.components.insert(n, table);
            }
        }
        out
    }

    pub fn add_scaled(&mut self, other: &TaylorVectorField, c: &Scalar) {
        self.truncation_order = self.truncation_order.min(other.truncation_order);
        for (&n, t) in &other.components {
            if n > self.truncation_order {
                continue;
            }
            for (k, v) in t {
                let table = self.components.entry(n).or_default();
                let entry = table.entry(k.clone()).or_default();
                entry.add_scaled(v, c);
                if entry.is_zero() {
                    table.remove(k);
                }
            }
        }
        let trunc = self.truncation_order;
        self.components.retain(|&n, t| n <= trunc && !t.is_empty());
    }

    /// Equality of all components of order `≤ order`.
    pub fn agrees_with(&self, other: &TaylorVectorField, order: usize) -> bool {
        self.restrict(order).components == other.restrict(order).components
    }

    pub fn is_zero_to(&self, order: usize) -> bool {
        self.components
            .iter()
            .all(|(&n, t)| n > order || t.is_empty())
    }
}

/// `[X, Y]` with components of order `≤ order`:
/// `[X,Y]_n(b) = Σ_S ε(S) Y(X(b_S), b_{S^c}) - (-1)^{|X||Y|} Σ_S ε(S) X(Y(b_S), b_{S^c})`.
/// On degree-zero `h` this is the classical `X∂Y - Y∂X`. Needs components up to `order + 1`.
pub fn vf_bracket(
    x: &TaylorVectorField,
    y: &TaylorVectorField,
    order: usize,
) -> Result<TaylorVectorField> {
    let available = x.truncation_order.min(y.truncation_order);
    if order + 1 > available {
        return Err(CoreError::OrderTooHigh {
            requested: order + 1,
            available,
        });
    }
    if x.degrees != y.degrees {
        return Err(CoreError::LengthMismatch {
            expected: x.dim(),
            found: y.dim(),
        });
    }
    let degrees = &x.degrees;
    let mut out = TaylorVectorField::new(degrees.clone(), x.field_degree + y.field_degree, order);
    let swap = sign_scalar(-parity_sign(x.field_degree as i64 * y.field_degree as i64));
    for n in 0..=order {
        for b in sym_tuples(x.dim(), n, degrees) {
            let mut val = compose(x, y, &b)?;
            val.add_scaled(&compose(y, x, &b)?, &swap);
            if !val.is_zero() {
                out.insert(&b, &val)?;
            }
        }
    }
    Ok(out)
}

/// `Σ_S ε(S) outer(inner(b_S), b_{S^c})`.
fn compose(inner: &TaylorVectorField, outer: &TaylorVectorField, b: &[usize]) -> Result<Vector> {
    let n = b.len();
    let bdeg: Vec<i32> = b.iter().map(|&i| inner.degrees[i]).collect();
    let mut total = Vector::zero();
    for mask in 0u64..(1u64 << n) {
        let s: Vec<usize> = (0..n).filter(|p| mask >> p & 1 == 1).collect();
        let sc: Vec<usize> = (0..n).filter(|p| mask >> p & 1 == 0).collect();
        let inner_val = inner.eval_basis(&s.iter().map(|&p| b[p]).collect::<Vec<_>>())?;
        if inner_val.is_zero() {
            continue;
        }
        let perm: Vec<usize> = s.iter().chain(sc.iter()).copied().collect();
        let eps = koszul_sign_unchecked(&perm, &bdeg);
        let rest: Vec<usize> = sc.iter().map(|&p| b[p]).collect();
        let val = outer.eval_first_vector(&inner_val, &rest)?;
        total.add_scaled(&val, &sign_scalar(eps));
    }
    Ok(total)
}

/// Checks `[F(a), F(b)] = F([a,b])` for all basis pairs, on every bracket component that
/// only involves Taylor components of order `≤ order` (bracket orders `< order`).
/// Violations are labelled by the highest Taylor order involved.
pub fn verify_field_morphism(
    fields: &[TaylorVectorField],
    g: &AlgebraSpec,
    order: usize,
) -> Result<ValidationReport> {
    let mut report = ValidationReport::new(format!("field_morphism({})", g.name));
    if fields.len() != g.dim() {
        return Err(CoreError::LengthMismatch {
            expected: g.dim(),
            found: fields.len(),
        });
    }
    if let Some(f) = fields.iter().find(|f| f.truncation_order < order) {
        return Err(CoreError::OrderTooHigh {
            requested: order,
            available: f.truncation_order,
        });
    }
    if order == 0 {
        report.note("order 0 involves no bracket component");
        return Ok(report);
    }
    let top = order - 1;
    let names = g.names();
    for a in 0..g.dim() {
        for b in a..g.dim() {
            if a == b && g.degree(a).rem_euclid(2) == 0 {
                continue;
            }
            let lhs = vf_bracket(&fields[a], &fields[b], top)?;
            let mut rhs = TaylorVectorField::new(fields[a].degrees.clone(), lhs.field_degree, top);
            for (c, coeff) in g.bracket_basis(a, b).iter() {
                rhs.add_scaled(&fields[c].restrict(top), coeff);
            }
            for n in 0..=top {
                report.tick();
                let l = lhs.component(n).cloned().unwrap_or_default();
                let r = rhs.component(n).cloned().unwrap_or_default();
                if l == r {
                    continue;
                }
                let keys: std::collections::BTreeSet<&Vec<usize>> =
                    l.keys().chain(r.keys()).collect();
                let witness_key = keys
                    .into_iter()
                    .find(|k| l.get(*k) != r.get(*k))
                    .cloned()
                    .unwrap_or_default();
                let lv = l.get(&witness_key).cloned().unwrap_or_default();
                let rv = r.get(&witness_key).cloned().unwrap_or_default();
                report.fail(
                    &format!("order_{}", n + 1),
                    vec![
                        names[a].clone(),
                        names[b].clone(),
                        format!("n={n}"),
                        format!("{witness_key:?}"),
                    ],
                    format!("[F(a),F(b)]_{n} = {lv}, F([a,b])_{n} = {rv}"),
                );
            }
        }
    }
    Ok(report)
}

/// Lowest Taylor order reported by a failed `verify_field_morphism`.
pub fn first_failing_order(report: &ValidationReport) -> Option<usize> {
    report
        .violations
        .iter()
        .filter_map(|v| v.kind.strip_prefix("order_").and_then(|s| s.parse().ok()))
        .min()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::int;

    fn constant(c: &[(usize, i64)]) -> TaylorVectorField {
        let mut f = TaylorVectorField::new(vec![0, 0], 0, 3);
        f.insert(
            &[],
            &Vector::from_terms(c.iter().map(|&(i, x)| (i, int(x)))),
        )
        .unwrap();
        f
    }

    fn linear(m: [[i64; 2]; 2]) -> TaylorVectorField {
        let mut f = TaylorVectorField::new(vec![0, 0], 0, 3);
        for j in 0..2usize {
            let col = Vector::from_terms(m.iter().enumerate().map(|(i, row)| (i, int(row[j]))));
            f.insert(&[j], &col).unwrap();
        }
        f
    }

    #[test]
    fn constants_commute() {
        let br = vf_bracket(&constant(&[(0, 1)]), &constant(&[(1, 3)]), 2).unwrap();
        assert!(br.is_zero_to(2));
    }

    #[test]
    fn linear_and_constant() {
        // X = A x, Y = c: X∂Y - Y∂X = -A c
        let a = [[1, 2], [3, 4]];
        let br = vf_bracket(&linear(a), &constant(&[(0, 5), (1, 7)]), 1).unwrap();
        let expect = Vector::from_terms([(0, int(-(5 + 14))), (1, int(-(15 + 28)))]);
        assert_eq!(br.eval_basis(&[]).unwrap(), expect);
        assert!(br.component(1).is_none());
    }

    #[test]
    fn linear_fields_give_reversed_commutator() {
        // X = A x, Y = B x: X∂Y - Y∂X = (BA - AB) x
        let a = [[0, 1], [0, 0]];
        let b = [[0, 0], [1, 0]];
        let br = vf_bracket(&linear(a), &linear(b), 1).unwrap();
        // BA - AB = diag(-1, 1)
        assert_eq!(br.eval_basis(&[0]).unwrap(), Vector::term(0, int(-1)));
        assert_eq!(br.eval_basis(&[1]).unwrap(), Vector::term(1, int(1)));
    }

    #[test]
    fn order_guard() {
        let x = constant(&[(0, 1)]);
        assert!(vf_bracket(&x, &x, 3).is_err());
    }
}
