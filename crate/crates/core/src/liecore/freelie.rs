//! Free nilpotent Lie algebras in the Lyndon basis, with brackets computed on demand.

use std::collections::HashMap;
use std::sync::Mutex;

use super::free::{lyndon_words, standard_split, LyndonExpander, NcPoly};
use super::{AlgebraSpec, BasisElem};
use crate::error::{CoreError, Result};
use crate::vector::Vector;

/// Free Lie algebra on degree-zero generators, truncated above `max_weight`.
pub struct FreeLie {
    names: Vec<String>,
    max_weight: usize,
    words: Vec<Vec<u8>>,
    index: HashMap<Vec<u8>, usize>,
    expander: Mutex<LyndonExpander<u8>>,
    cache: Mutex<HashMap<(usize, usize), Vector>>,
}

impl FreeLie {
    pub fn new(generator_names: &[&str], max_weight: usize) -> Self {
        assert!(generator_names.len() < 256, "at most 255 generators");
        let mut words = lyndon_words(generator_names.len() as u8, max_weight);
        words.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let index = words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        FreeLie {
            names: generator_names.iter().map(|s| s.to_string()).collect(),
            max_weight,
            words,
            index,
            expander: Mutex::new(LyndonExpander::new()),
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn dim(&self) -> usize {
        self.words.len()
    }

    pub fn max_weight(&self) -> usize {
        self.max_weight
    }

    pub fn weight(&self, i: usize) -> usize {
        self.words[i].len()
    }

    pub fn word(&self, i: usize) -> &[u8] {
        &self.words[i]
    }

    pub fn index_of_word(&self, w: &[u8]) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn generator(&self, k: usize) -> Vector {
        Vector::basis(self.index[&vec![k as u8]])
    }

    /// Standard bracketing of the `i`-th Lyndon word, e.g. `[[x1,x2],x2]`.
    pub fn element_name(&self, i: usize) -> String {
        fn go(names: &[String], w: &[u8]) -> String {
            if w.len() == 1 {
                return names[w[0] as usize].clone();
            }
            let s = standard_split(w);
            format!("[{},{}]", go(names, &w[..s]), go(names, &w[s..]))
        }
        go(&self.names, &self.words[i])
    }

    fn expand_index(&self, i: usize) -> NcPoly<u8> {
        self.expander
            .lock()
            .unwrap_or_else(|e| e.into_inner())
            .expand(&self.words[i])
    }

    pub fn to_poly(&self, v: &Vector) -> NcPoly<u8> {
        let mut out = NcPoly::zero();
        for (i, c) in v.iter() {
            out.add_scaled(&self.expand_index(i), c);
        }
        out
    }

    /// Lyndon coordinates of a Lie polynomial; words longer than the truncation are dropped.
    pub fn from_poly(&self, p: &NcPoly<u8>) -> Result<Vector> {
        let mut p = p.clone();
        p.truncate(self.max_weight);
        let coords = self
            .expander
            .lock()
            .unwrap_or_else(|e| e.into_inner())
            .decompose(&p)
            .map_err(|w| CoreError::Unsupported(format!("not a Lie element (word {w:?})")))?;
        Ok(coords
            .into_iter()
            .map(|(w, c)| (self.index[&w], c))
            .collect())
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> Vector {
        if i == j || self.weight(i) + self.weight(j) > self.max_weight {
            return Vector::zero();
        }
        if i > j {
            return self.bracket_basis(j, i).neg();
        }
        if let Some(v) = self
            .cache
            .lock()
            .unwrap_or_else(|e| e.into_inner())
            .get(&(i, j))
        {
            return v.clone();
        }
        let p = self
            .expand_index(i)
            .commutator(&self.expand_index(j), &|_| 0);
        let v = self
            .from_poly(&p)
            .expect("commutators of Lie elements are Lie elements");
        self.cache
            .lock()
            .unwrap_or_else(|e| e.into_inner())
            .insert((i, j), v.clone());
        v
    }

    pub fn bracket(&self, x: &Vector, y: &Vector) -> Vector {
        let mut out = Vector::zero();
        for (i, a) in x.iter() {
            for (j, b) in y.iter() {
                if self.weight(i) + self.weight(j) <= self.max_weight {
                    out.add_scaled(&self.bracket_basis(i, j), &(a * b));
                }
            }
        }
        out
    }

    /// Materializes the full structure-constant table.
    pub fn to_spec(&self, name: &str) -> AlgebraSpec {
        let basis = (0..self.dim())
            .map(|i| BasisElem::new(self.element_name(i), 0))
            .collect();
        let mut spec = AlgebraSpec::new(name, basis);
        for i in 0..self.dim() {
            for j in i + 1..self.dim() {
                if self.weight(i) + self.weight(j) > self.max_weight {
                    // words are sorted by weight, so later j only get heavier
                    break;
                }
                let v = self.bracket_basis(i, j);
                if !v.is_zero() {
                    spec.set_bracket(i, j, v).expect("indices in range");
                }
            }
        }
        spec
    }
}

/// Free Lie algebra on the given degree-zero generators modulo brackets of weight
/// above `max_weight`, in the Lyndon basis.
pub fn free_nilpotent(generator_names: &[&str], max_weight: usize) -> AlgebraSpec {
    FreeLie::new(generator_names, max_weight).to_spec(&format!(
        "free_nilpotent({};{max_weight})",
        generator_names.join(",")
    ))
}

/// Lyndon coordinates are stable: expanding and re-decomposing returns the same vector.
pub fn round_trip(lie: &FreeLie, v: &Vector) -> Result<Vector> {
    lie.from_poly(&lie.to_poly(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liecore::free::witt_dimension;
    use crate::scalars::int;

    #[test]
    fn small_dimensions() {
        assert_eq!(free_nilpotent(&["x1", "x2"], 2).dim(), 3);
        let s = free_nilpotent(&["x1", "x2"], 3);
        assert_eq!(s.dim(), 5);
        let names = s.names();
        assert_eq!(names[2], "[x1,x2]");
        assert!(names.contains(&"[x1,[x1,x2]]".to_string()));
        let s = free_nilpotent(&["a", "b", "c"], 1);
        assert_eq!(s.dim(), 3);
        assert!(s.is_abelian());
    }

    #[test]
    fn weight_components_match_witt() {
        let lie = FreeLie::new(&["a", "b", "c"], 6);
        for w in 1..=6 {
            let n = (0..lie.dim()).filter(|&i| lie.weight(i) == w).count() as u64;
            assert_eq!(n, witt_dimension(3, w as u64));
        }
    }

    #[test]
    fn bracket_of_generators() {
        let lie = FreeLie::new(&["x", "y"], 3);
        let (x, y) = (lie.generator(0), lie.generator(1));
        let xy = lie.bracket(&x, &y);
        assert_eq!(lie.element_name(xy.iter().next().unwrap().0), "[x,y]");
        let yxy = lie.bracket(&y, &xy);
        // [y,[x,y]] = -[[x,y],y]
        let (idx, c) = yxy.iter().next().unwrap();
        assert_eq!(lie.element_name(idx), "[[x,y],y]");
        assert_eq!(c, &int(-1));
        assert!(lie.bracket(&xy, &xy).is_zero());
    }
}
