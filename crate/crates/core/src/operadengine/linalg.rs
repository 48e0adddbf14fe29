//! Exact Gaussian elimination over the rationals on sparse column data.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::scalars::Scalar;

/// Reduced row echelon form of a sparse matrix given by columns.
pub struct Echelon {
    /// Pivot rows: `(pivot column, row)`, each row normalized to 1 at its pivot.
    rows: Vec<(usize, BTreeMap<usize, Scalar>)>,
    ncols: usize,
}

impl Echelon {
    /// `columns[j]` maps row indices to entries of column `j`.
    pub fn new(columns: &[BTreeMap<usize, Scalar>]) -> Self {
        let mut rows_of: BTreeMap<usize, BTreeMap<usize, Scalar>> = BTreeMap::new();
        for (j, col) in columns.iter().enumerate() {
            for (&i, x) in col {
                if !x.is_zero() {
                    rows_of.entry(i).or_default().insert(j, x.clone());
                }
            }
        }
        let mut pivots: Vec<(usize, BTreeMap<usize, Scalar>)> = Vec::new();
        for (_, mut row) in rows_of {
            for (pc, prow) in &pivots {
                if let Some(f) = row.get(pc).cloned() {
                    for (c, x) in prow {
                        let e = row.entry(*c).or_insert_with(Scalar::zero);
                        *e -= &f * x;
                        if e.is_zero() {
                            row.remove(c);
                        }
                    }
                }
            }
            let Some((&pc, lead)) = row.iter().next() else {
                continue;
            };
            let inv = Scalar::one() / lead;
            for x in row.values_mut() {
                *x *= &inv;
            }
            for (_, prow) in pivots.iter_mut() {
                if let Some(f) = prow.get(&pc).cloned() {
                    for (c, x) in &row {
                        let e = prow.entry(*c).or_insert_with(Scalar::zero);
                        *e -= &f * x;
                        if e.is_zero() {
                            prow.remove(c);
                        }
                    }
                }
            }
            pivots.push((pc, row));
        }
        Echelon {
            rows: pivots,
            ncols: columns.len(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// A basis of the solutions of `Mx = 0`.
    pub fn null_space(&self) -> Vec<Vec<Scalar>> {
        let pivot_cols: BTreeMap<usize, usize> = self
            .rows
            .iter()
            .enumerate()
            .map(|(r, (c, _))| (*c, r))
            .collect();
        let mut out = Vec::new();
        for free in (0..self.ncols).filter(|c| !pivot_cols.contains_key(c)) {
            let mut v = vec![Scalar::zero(); self.ncols];
            v[free] = Scalar::one();
            for (pc, row) in &self.rows {
                if let Some(x) = row.get(&free) {
                    v[*pc] = -x.clone();
                }
            }
            out.push(v);
        }
        out
    }
}

/// Solves `Mx = b` for `M` given by columns, returning one solution if consistent.
pub fn solve(
    columns: &[BTreeMap<usize, Scalar>],
    rhs: &BTreeMap<usize, Scalar>,
) -> Option<Vec<Scalar>> {
    let n = columns.len();
    let mut augmented = columns.to_vec();
    augmented.push(rhs.clone());
    let ech = Echelon::new(&augmented);
    let mut x = vec![Scalar::zero(); n];
    for (pc, row) in &ech.rows {
        if *pc == n {
            return None;
        }
        x[*pc] = row.get(&n).cloned().unwrap_or_else(Scalar::zero);
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::int;

    fn col(entries: &[(usize, i64)]) -> BTreeMap<usize, Scalar> {
        entries.iter().map(|&(i, x)| (i, int(x))).collect()
    }

    #[test]
    fn solves_small_system() {
        let cols = vec![col(&[(0, 1), (1, 1)]), col(&[(0, 1), (1, -1)])];
        let x = solve(&cols, &col(&[(0, 3), (1, 1)])).unwrap();
        assert_eq!(x, vec![int(2), int(1)]);
        assert!(solve(&[col(&[(0, 1)]), col(&[(0, 2)])], &col(&[(1, 1)])).is_none());
    }

    #[test]
    fn null_space_of_rank_one() {
        let cols = vec![col(&[(0, 1)]), col(&[(0, 2)]), col(&[])];
        let ech = Echelon::new(&cols);
        assert_eq!(ech.rank(), 1);
        assert_eq!(ech.null_space().len(), 2);
    }
}
