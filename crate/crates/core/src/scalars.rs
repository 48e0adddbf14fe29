//! Exact rationals, Bernoulli numbers and signed index combinatorics.

use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::CoreError;

/// Arbitrary precision rational, always in lowest terms with positive denominator.
pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn frac(p: i64, q: i64) -> Scalar {
    Scalar::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `"p"` or `"p/q"`.
pub fn parse_scalar(s: &str) -> Result<Scalar, CoreError> {
    let s = s.trim();
    let bad = || CoreError::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        None => s
            .parse::<BigInt>()
            .map(Scalar::from_integer)
            .map_err(|_| bad()),
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Scalar::new(p, q))
        }
    }
}

pub fn sign_scalar(sign: i32) -> Scalar {
    if sign >= 0 {
        Scalar::one()
    } else {
        -Scalar::one()
    }
}

/// `(-1)^e` as `±1`.
pub fn parity_sign(e: i64) -> i32 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

fn bernoulli_table() -> &'static Mutex<Vec<Scalar>> {
    static TABLE: OnceLock<Mutex<Vec<Scalar>>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(vec![Scalar::one()]))
}

/// Bernoulli number `B_n` with `B_1 = -1/2`.
pub fn bernoulli(n: usize) -> Scalar {
    let mut table = bernoulli_table().lock().unwrap_or_else(|e| e.into_inner());
    while table.len() <= n {
        let m = table.len();
        let mut acc = Scalar::zero();
        for (j, b) in table.iter().enumerate() {
            acc += Scalar::from_integer(binomial(m + 1, j)) * b;
        }
        let next = -acc / Scalar::from_integer(BigInt::from(m + 1));
        table.push(next);
    }
    table[n].clone()
}

/// `B_n / n!`, the ladder coefficient.
pub fn bernoulli_over_factorial(n: usize) -> Scalar {
    bernoulli(n) / Scalar::from_integer(factorial(n))
}

/// `B_n` by the Akiyama–Tanigawa transform, independent of the recurrence in [`bernoulli`].
pub fn bernoulli_akiyama_tanigawa(n: usize) -> Scalar {
    let mut a: Vec<Scalar> = (0..=n).map(|m| frac(1, m as i64 + 1)).collect();
    for m in 1..=n {
        for j in (m..=n).rev() {
            a[j] = Scalar::from_integer(BigInt::from(j - m + 1)) * (&a[j - 1] - &a[j]);
        }
    }
    // the transform yields B_1 = +1/2
    if n == 1 {
        -a[1].clone()
    } else {
        a[n].clone()
    }
}

/// `Σ_{k<m+1} C(m+1, k) B_k = 0` for `1 ≤ m ≤ n`.
pub fn bernoulli_recurrence_holds(n: usize) -> bool {
    (1..=n).all(|m| {
        (0..=m)
            .map(|k| Scalar::from_integer(binomial(m + 1, k)) * bernoulli(k))
            .sum::<Scalar>()
            .is_zero()
    })
}

/// Sign of the permutation `perm` (a bijection of `0..n`).
pub fn permutation_sign(perm: &[usize]) -> i32 {
    let mut inversions = 0usize;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    if inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Koszul sign of the reordering `(x_{perm[0]}, x_{perm[1]}, ...)` of elements with the
/// given degrees: every inverted pair of degrees `p`, `q` contributes `(-1)^{pq}`.
pub fn koszul_sign(perm: &[usize], degrees: &[i32]) -> Result<i32, CoreError> {
    if perm.len() != degrees.len() {
        return Err(CoreError::LengthMismatch {
            expected: degrees.len(),
            found: perm.len(),
        });
    }
    let mut seen = vec![false; perm.len()];
    for &p in perm {
        if p >= perm.len() || seen[p] {
            return Err(CoreError::NotAPermutation(perm.to_vec()));
        }
        seen[p] = true;
    }
    Ok(koszul_sign_unchecked(perm, degrees))
}

pub(crate) fn koszul_sign_unchecked(perm: &[usize], degrees: &[i32]) -> i32 {
    let mut odd = 0i64;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                odd += (degrees[perm[i]] as i64) * (degrees[perm[j]] as i64);
            }
        }
    }
    parity_sign(odd)
}

/// Sorts `items` by `key` with adjacent transpositions, multiplying the returned sign by
/// `swap(a, b)` for every transposition of neighbours `a`, `b`.
pub(crate) fn sort_signed<T, K: Ord>(
    items: &mut [T],
    key: impl Fn(&T) -> K,
    swap: impl Fn(&T, &T) -> i32,
) -> i32 {
    let mut sign = 1;
    for i in 1..items.len() {
        let mut j = i;
        while j > 0 && key(&items[j - 1]) > key(&items[j]) {
            sign *= swap(&items[j - 1], &items[j]);
            items.swap(j - 1, j);
            j -= 1;
        }
    }
    sign
}

/// Sign for transposing neighbours of degrees `p`, `q` in a graded-symmetric product.
pub fn symmetric_swap(p: i32, q: i32) -> i32 {
    parity_sign(p as i64 * q as i64)
}

/// Sign for transposing neighbours of degrees `p`, `q` in a graded-antisymmetric product.
pub fn skew_swap(p: i32, q: i32) -> i32 {
    -parity_sign(p as i64 * q as i64)
}

/// Size constraint on one part of a splitting.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PartSize {
    pub min: usize,
    pub max: Option<usize>,
}

impl PartSize {
    pub fn at_least(min: usize) -> Self {
        PartSize { min, max: None }
    }

    pub fn exactly(n: usize) -> Self {
        PartSize {
            min: n,
            max: Some(n),
        }
    }

    fn admits(&self, n: usize) -> bool {
        n >= self.min && self.max.is_none_or(|m| n <= m)
    }
}

/// An ordered decomposition of `{1, ..., n}` with the parity of its straightening permutation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedSplitting {
    pub parts: Vec<Vec<usize>>,
    pub sign: i32,
}

/// Iterator over splittings of `[n]`, ordered lexicographically by the part assigned
/// to `1`, then to `2`, and so on.
pub struct Splittings {
    n: usize,
    sizes: Vec<PartSize>,
    assignment: Vec<usize>,
    done: bool,
}

pub fn splittings(n: usize, part_sizes: &[PartSize]) -> Splittings {
    let k = part_sizes.len();
    Splittings {
        n,
        sizes: part_sizes.to_vec(),
        assignment: vec![0; n],
        done: k == 0 && n > 0,
    }
}

impl Splittings {
    fn advance(&mut self) -> bool {
        let k = self.sizes.len();
        for pos in (0..self.n).rev() {
            if self.assignment[pos] + 1 < k {
                self.assignment[pos] += 1;
                for later in &mut self.assignment[pos + 1..] {
                    *later = 0;
                }
                return true;
            }
        }
        false
    }

    fn current(&self) -> Option<SignedSplitting> {
        let mut parts = vec![Vec::new(); self.sizes.len()];
        for (i, &p) in self.assignment.iter().enumerate() {
            parts[p].push(i + 1);
        }
        if parts
            .iter()
            .zip(&self.sizes)
            .any(|(part, size)| !size.admits(part.len()))
        {
            return None;
        }
        let perm: Vec<usize> = parts.iter().flatten().map(|&i| i - 1).collect();
        Some(SignedSplitting {
            sign: permutation_sign(&perm),
            parts,
        })
    }
}

impl Iterator for Splittings {
    type Item = SignedSplitting;

    fn next(&mut self) -> Option<SignedSplitting> {
        while !self.done {
            let out = self.current();
            if !self.advance() {
                self.done = true;
            }
            if out.is_some() {
                return out;
            }
        }
        None
    }
}

/// Unordered set partitions of `items` into exactly `k` nonempty blocks, each block
/// sorted, blocks ordered by their least element.
pub fn set_partitions(items: &[usize], k: usize) -> Vec<Vec<Vec<usize>>> {
    fn go(
        items: &[usize],
        k: usize,
        current: &mut Vec<Vec<usize>>,
        out: &mut Vec<Vec<Vec<usize>>>,
    ) {
        let Some((&first, rest)) = items.split_first() else {
            if current.len() == k {
                out.push(current.clone());
            }
            return;
        };
        if current.len() + items.len() < k {
            return;
        }
        for b in 0..current.len() {
            current[b].push(first);
            go(rest, k, current, out);
            current[b].pop();
        }
        if current.len() < k {
            current.push(vec![first]);
            go(rest, k, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    go(items, k, &mut Vec::new(), &mut out);
    out
}

pub fn is_zero(x: &Scalar) -> bool {
    x.is_zero()
}

pub fn is_negative(x: &Scalar) -> bool {
    x.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_small_values() {
        assert_eq!(bernoulli(0), int(1));
        assert_eq!(bernoulli(1), frac(-1, 2));
        assert_eq!(bernoulli(2), frac(1, 6));
        assert_eq!(bernoulli(3), int(0));
        assert_eq!(bernoulli(4), frac(-1, 30));
        assert_eq!(bernoulli(12), frac(-691, 2730));
    }

    #[test]
    fn bernoulli_agrees_with_akiyama_tanigawa() {
        for n in 0..=20 {
            assert_eq!(bernoulli(n), bernoulli_akiyama_tanigawa(n), "n = {n}");
        }
        assert!(bernoulli_recurrence_holds(20));
    }

    #[test]
    fn koszul_examples() {
        assert_eq!(koszul_sign(&[1, 0], &[1, 1]).unwrap(), -1);
        assert_eq!(koszul_sign(&[0, 1, 2], &[1, 3, 5]).unwrap(), 1);
        assert_eq!(koszul_sign(&[1, 0], &[0, 1]).unwrap(), 1);
        assert!(koszul_sign(&[0], &[1, 1]).is_err());
        assert!(koszul_sign(&[0, 0], &[1, 1]).is_err());
    }

    #[test]
    fn splitting_examples() {
        let got: Vec<_> = splittings(3, &[PartSize::at_least(2), PartSize::at_least(1)]).collect();
        let parts: Vec<_> = got.iter().map(|s| s.parts.clone()).collect();
        assert_eq!(
            parts,
            vec![
                vec![vec![1, 2], vec![3]],
                vec![vec![1, 3], vec![2]],
                vec![vec![2, 3], vec![1]]
            ]
        );
        let signs: Vec<_> = got.iter().map(|s| s.sign).collect();
        assert_eq!(signs, vec![1, -1, 1]);
        assert_eq!(
            splittings(2, &[PartSize::at_least(2), PartSize::at_least(1)]).count(),
            0
        );
        let empty: Vec<_> =
            splittings(0, &[PartSize::at_least(0), PartSize::at_least(0)]).collect();
        assert_eq!(empty.len(), 1);
        assert_eq!(empty[0].sign, 1);
    }

    #[test]
    fn parse_round_trip() {
        assert_eq!(parse_scalar("-3/6").unwrap(), frac(-1, 2));
        assert_eq!(parse_scalar("7").unwrap(), int(7));
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("x").is_err());
        assert_eq!(frac(2, -4).to_string(), "-1/2");
    }

    #[test]
    fn partitions_count_is_stirling() {
        let items = [1, 2, 3, 4, 5];
        let counts: Vec<usize> = (1..=5).map(|k| set_partitions(&items, k).len()).collect();
        assert_eq!(counts, vec![1, 15, 25, 10, 1]);
    }
}
