//! Noncommutative polynomials and Lyndon-basis decomposition of Lie elements.

use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;

use num_traits::{One, Zero};

use crate::scalars::{parity_sign, Scalar};

/// Element of a free associative algebra: a sparse sum of words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NcPoly<L: Ord>(BTreeMap<Vec<L>, Scalar>);

impl<L: Ord + Clone> Default for NcPoly<L> {
    fn default() -> Self {
        NcPoly(BTreeMap::new())
    }
}

impl<L: Ord + Clone> NcPoly<L> {
    pub fn zero() -> Self {
        NcPoly(BTreeMap::new())
    }

    pub fn one() -> Self {
        Self::word(Vec::new(), Scalar::one())
    }

    pub fn letter(l: L) -> Self {
        Self::word(vec![l], Scalar::one())
    }

    pub fn word(w: Vec<L>, c: Scalar) -> Self {
        let mut p = Self::zero();
        p.add_term(w, c);
        p
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

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<L>, &Scalar)> {
        self.0.iter()
    }

    pub fn coefficient(&self, w: &[L]) -> Scalar {
        self.0.get(w).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn leading(&self) -> Option<(&Vec<L>, &Scalar)> {
        self.0.iter().next()
    }

    pub fn add_term(&mut self, w: Vec<L>, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.0.get_mut(&w) {
            Some(e) => {
                *e += c;
                if e.is_zero() {
                    self.0.remove(&w);
                }
            }
            None => {
                self.0.insert(w, c);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (w, x) in other.terms() {
            self.add_term(w.clone(), x * c);
        }
    }

    pub fn add(&mut self, other: &Self) {
        self.add_scaled(other, &Scalar::one());
    }

    pub fn scaled(&self, c: &Scalar) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (u, a) in self.terms() {
            for (v, b) in other.terms() {
                let mut w = u.clone();
                w.extend(v.iter().cloned());
                out.add_term(w, a * b);
            }
        }
        out
    }

    /// Graded commutator `xy - (-1)^{|x||y|} yx`, degrees taken letterwise.
    pub fn commutator(&self, other: &Self, deg: &dyn Fn(&L) -> i32) -> Self {
        let word_deg = |w: &Vec<L>| -> i64 { w.iter().map(|l| deg(l) as i64).sum() };
        let mut out = Self::zero();
        for (u, a) in self.terms() {
            let du = word_deg(u);
            for (v, b) in other.terms() {
                let dv = word_deg(v);
                let c = a * b;
                let mut uv = u.clone();
                uv.extend(v.iter().cloned());
                let mut vu = v.clone();
                vu.extend(u.iter().cloned());
                out.add_term(uv, c.clone());
                if parity_sign(du * dv) > 0 {
                    out.add_term(vu, -c);
                } else {
                    out.add_term(vu, c);
                }
            }
        }
        out
    }

    /// Algebra homomorphism determined by the images of letters.
    pub fn substitute<M: Ord + Clone>(&self, f: &dyn Fn(&L) -> NcPoly<M>) -> NcPoly<M> {
        let mut out = NcPoly::zero();
        for (w, c) in self.terms() {
            let mut acc = NcPoly::word(Vec::new(), c.clone());
            for l in w {
                acc = acc.mul(&f(l));
                if acc.is_zero() {
                    break;
                }
            }
            out.add(&acc);
        }
        out
    }

    /// Drops every word longer than `n`.
    pub fn truncate(&mut self, n: usize) {
        self.0.retain(|w, _| w.len() <= n);
    }
}

pub fn is_lyndon<L: Ord>(w: &[L]) -> bool {
    if w.is_empty() {
        return false;
    }
    (1..w.len()).all(|i| w[i..] > *w)
}

/// Split point of the standard factorization `w = uv`, `v` the longest proper Lyndon suffix.
pub fn standard_split<L: Ord>(w: &[L]) -> usize {
    (1..w.len())
        .find(|&i| is_lyndon(&w[i..]))
        .expect("words of length >= 2 have a proper Lyndon suffix")
}

/// All Lyndon words of length `1..=n` over the alphabet `0..k`, in lexicographic order.
pub fn lyndon_words(k: u8, n: usize) -> Vec<Vec<u8>> {
    // Duval's generation algorithm
    let mut out = Vec::new();
    if k == 0 || n == 0 {
        return out;
    }
    let mut w: Vec<u8> = vec![0];
    loop {
        out.push(w.clone());
        let m = w.len();
        while w.len() < n {
            let c = w[w.len() - m];
            w.push(c);
        }
        while let Some(&last) = w.last() {
            if last == k - 1 {
                w.pop();
            } else {
                break;
            }
        }
        match w.last_mut() {
            Some(last) => *last += 1,
            None => break,
        }
    }
    out
}

/// Expands Lyndon words into their standard bracketings and decomposes Lie elements back
/// into Lyndon coordinates. Letters are treated as degree zero.
pub struct LyndonExpander<L: Ord + Hash + Clone> {
    cache: HashMap<Vec<L>, NcPoly<L>>,
}

impl<L: Ord + Hash + Clone> Default for LyndonExpander<L> {
    fn default() -> Self {
        LyndonExpander {
            cache: HashMap::new(),
        }
    }
}

impl<L: Ord + Hash + Clone> LyndonExpander<L> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Tensor expansion of the standard bracketing of a Lyndon word.
    pub fn expand(&mut self, w: &[L]) -> NcPoly<L> {
        if let Some(p) = self.cache.get(w) {
            return p.clone();
        }
        let p = if w.len() == 1 {
            NcPoly::letter(w[0].clone())
        } else {
            let s = standard_split(w);
            let u = self.expand(&w[..s]);
            let v = self.expand(&w[s..]);
            u.commutator(&v, &|_| 0)
        };
        self.cache.insert(w.to_vec(), p.clone());
        p
    }

    /// Coordinates of a Lie element in the Lyndon basis. Fails with the offending word
    /// when the input is not a Lie element.
    pub fn decompose(&mut self, p: &NcPoly<L>) -> Result<Vec<(Vec<L>, Scalar)>, Vec<L>> {
        let mut rest = p.clone();
        let mut out = Vec::new();
        while let Some((w, c)) = rest.leading() {
            let (w, c) = (w.clone(), c.clone());
            if !is_lyndon(&w) {
                return Err(w);
            }
            let e = self.expand(&w);
            rest.add_scaled(&e, &-c.clone());
            out.push((w, c));
        }
        Ok(out)
    }
}

/// Number of Lyndon words of length `w` over `k` letters, by the necklace formula.
pub fn witt_dimension(k: u64, w: u64) -> u64 {
    fn mobius(mut n: u64) -> i64 {
        let mut result = 1i64;
        let mut p = 2;
        while p * p <= n {
            if n.is_multiple_of(p) {
                n /= p;
                if n.is_multiple_of(p) {
                    return 0;
                }
                result = -result;
            }
            p += 1;
        }
        if n > 1 {
            result = -result;
        }
        result
    }
    let mut total: i128 = 0;
    for d in 1..=w {
        if w.is_multiple_of(d) {
            total += mobius(d) as i128 * (k as i128).pow((w / d) as u32);
        }
    }
    (total / w as i128) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lyndon_counts_match_necklace_formula() {
        for k in 1..=3u8 {
            let words = lyndon_words(k, 7);
            for len in 1..=7 {
                let count = words.iter().filter(|w| w.len() == len).count() as u64;
                assert_eq!(
                    count,
                    witt_dimension(k as u64, len as u64),
                    "k={k} len={len}"
                );
            }
            assert!(words.windows(2).all(|p| p[0] < p[1]));
            assert!(words.iter().all(|w| is_lyndon(w)));
        }
    }

    #[test]
    fn standard_bracketing_is_triangular() {
        let mut ex = LyndonExpander::new();
        for w in lyndon_words(3, 5) {
            let p = ex.expand(&w);
            let (lead, c) = p.leading().unwrap();
            assert_eq!(lead, &w);
            assert!(c.is_one());
        }
    }

    #[test]
    fn decompose_rejects_non_lie() {
        let mut ex = LyndonExpander::<u8>::new();
        let p = NcPoly::word(vec![1, 0], Scalar::one());
        assert_eq!(ex.decompose(&p), Err(vec![1, 0]));
    }
}
