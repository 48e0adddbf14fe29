use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::scalars::Scalar;

/// Sparse vector over a finite indexed basis. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vector(BTreeMap<usize, Scalar>);

impl Vector {
    pub fn zero() -> Self {
        Vector(BTreeMap::new())
    }

    pub fn basis(i: usize) -> Self {
        Vector::term(i, Scalar::one())
    }

    pub fn term(i: usize, c: Scalar) -> Self {
        let mut v = Vector::zero();
        v.add_term(i, c);
        v
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (usize, Scalar)>) -> Self {
        let mut v = Vector::zero();
        for (i, c) in terms {
            v.add_term(i, c);
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> Scalar {
        self.0.get(&i).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.0.iter().map(|(&i, c)| (i, c))
    }

    pub fn max_index(&self) -> Option<usize> {
        self.0.keys().next_back().copied()
    }

    pub fn add_term(&mut self, i: usize, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.0.entry(i).or_insert_with(Scalar::zero);
        *entry += c;
        if entry.is_zero() {
            self.0.remove(&i);
        }
    }

    pub fn add_scaled(&mut self, other: &Vector, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (i, x) in other.iter() {
            self.add_term(i, x * c);
        }
    }

    pub fn add(&mut self, other: &Vector) {
        for (i, x) in other.iter() {
            self.add_term(i, x.clone());
        }
    }

    pub fn scaled(&self, c: &Scalar) -> Vector {
        if c.is_zero() {
            return Vector::zero();
        }
        Vector(self.0.iter().map(|(&i, x)| (i, x * c)).collect())
    }

    pub fn neg(&self) -> Vector {
        Vector(self.0.iter().map(|(&i, x)| (i, -x)).collect())
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        let mut out = self.clone();
        out.add_scaled(other, &-Scalar::one());
        out
    }

    /// Reindexes every basis element through `f`.
    pub fn map_indices(&self, f: impl Fn(usize) -> usize) -> Vector {
        Vector::from_terms(self.iter().map(|(i, c)| (f(i), c.clone())))
    }

    /// Renders as `c*name + ...` using the supplied basis names.
    pub fn render(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (i, c)) in self.iter().enumerate() {
            let name = names.get(i).cloned().unwrap_or_else(|| format!("#{i}"));
            if k > 0 {
                out.push_str(" + ");
            }
            if c.is_one() {
                out.push_str(&name);
            } else {
                out.push_str(&format!("({c})*{name}"));
            }
        }
        out
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (i, c)) in self.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})e{i}")?;
        }
        Ok(())
    }
}

impl FromIterator<(usize, Scalar)> for Vector {
    fn from_iter<T: IntoIterator<Item = (usize, Scalar)>>(iter: T) -> Self {
        Vector::from_terms(iter)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::int;

    #[test]
    fn zero_entries_are_pruned() {
        let mut v = Vector::term(3, int(2));
        v.add_term(3, int(-2));
        assert!(v.is_zero());
        v.add_term(1, int(0));
        assert!(v.is_zero());
    }
}
