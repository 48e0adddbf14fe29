//! The Jacobi–Bernoulli codifferential on `⊙^{≥1}(g[1] ⊕ h)` and the induced L∞ brackets
//! on `g ⊕ h[-1]`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::Zero;

use crate::error::{CoreError, Result};
use crate::formalfields::sym_tuples;
use crate::jbtwist::{twisted_action_general, LiePair, TwistTable};
use crate::liecore::linf::skew_tuples;
use crate::liecore::{sort_skew, BasisElem, LInfinityStructure, SkewTable};
use crate::report::ValidationReport;
use crate::scalars::{
    koszul_sign_unchecked, parity_sign, sign_scalar, sort_signed, symmetric_swap, Scalar,
};
use crate::vector::Vector;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConeMode {
    /// Degree-zero style pair without differentials, `φ` strict.
    Strict,
    /// dg Lie algebras and a strict `φ` commuting with the differentials.
    Dg,
    /// dg Lie algebras and an L∞ morphism `φ = (φ_1, φ_2, ...)`.
    LinfMorphism,
}

impl fmt::Display for ConeMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConeMode::Strict => "strict",
            ConeMode::Dg => "dg",
            ConeMode::LinfMorphism => "linf_morphism",
        })
    }
}

impl std::str::FromStr for ConeMode {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strict" => Ok(ConeMode::Strict),
            "dg" => Ok(ConeMode::Dg),
            "linf_morphism" | "linf-morphism" | "linf" => Ok(ConeMode::LinfMorphism),
            other => Err(CoreError::Parse(format!("unknown cone mode {other:?}"))),
        }
    }
}

/// Basis element of `W = g[1] ⊕ h`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Factor {
    G(usize),
    H(usize),
}

/// Canonical monomial in `⊙(g[1] ⊕ h)`: factors sorted, `g[1]` factors first.
pub type Word = Vec<Factor>;

/// Formal sum of canonical words.
pub type WordSum = BTreeMap<Word, Scalar>;

fn add_to(sum: &mut WordSum, w: Word, c: Scalar) {
    if c.is_zero() {
        return;
    }
    let e = sum.entry(w.clone()).or_insert_with(Scalar::zero);
    *e += c;
    if e.is_zero() {
        sum.remove(&w);
    }
}

/// Row signs of the coderivation relative to the stored tables (fixed by `D² = 0`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConeSigns {
    pub g_rows: i32,
    pub h_rows: i32,
    pub unary_h: i32,
}

impl Default for ConeSigns {
    fn default() -> Self {
        ConeSigns {
            g_rows: 1,
            h_rows: 1,
            unary_h: -1,
        }
    }
}

/// Component tables of the coderivation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodifferentialComponents {
    pub mode: ConeMode,
    pub g_basis: Vec<BasisElem>,
    pub h_basis: Vec<BasisElem>,
    /// `D'_p: ∧^p g → g` for `p = 1` (differential) and `p = 2` (bracket).
    pub d_prime: BTreeMap<usize, SkewTable>,
    /// `D''_{p,q}: ∧^p g ⊗ ⊙^q h → h`, `p ≥ 1`.
    pub d_second: BTreeMap<(usize, usize), TwistTable>,
    /// `d_h`, folded into the total coderivation in dg modes.
    pub unary_h: Option<BTreeMap<usize, Vector>>,
    /// Largest `p + q` for which rows were built.
    pub max_weight: usize,
    pub signs: ConeSigns,
}

impl CodifferentialComponents {
    fn g_degree(&self, i: usize) -> i32 {
        self.g_basis[i].degree
    }

    fn h_degree(&self, j: usize) -> i32 {
        self.h_basis[j].degree
    }

    /// Degree of a factor in `W`: `g[1]` factors are shifted down by one.
    pub fn shifted_degree(&self, f: Factor) -> i32 {
        match f {
            Factor::G(i) => self.g_degree(i) - 1,
            Factor::H(j) => self.h_degree(j),
        }
    }

    pub fn g_degrees(&self) -> Vec<i32> {
        self.g_basis.iter().map(|b| b.degree).collect()
    }

    pub fn h_degrees(&self) -> Vec<i32> {
        self.h_basis.iter().map(|b| b.degree).collect()
    }

    /// Sorts a word with the Koszul sign of the shifted degrees; `None` if it vanishes.
    pub fn canonicalize(&self, mut w: Word) -> Option<(Word, i32)> {
        let sign = sort_signed(
            &mut w,
            |f| *f,
            |a, b| symmetric_swap(self.shifted_degree(*a), self.shifted_degree(*b)),
        );
        if w.windows(2)
            .any(|p| p[0] == p[1] && self.shifted_degree(p[0]).rem_euclid(2) == 1)
        {
            return None;
        }
        Some((w, sign))
    }

    /// The component `Q_k` on a canonical word of weight `k`, as a sum of weight-one words.
    pub fn component(&self, w: &[Factor]) -> WordSum {
        let mut out = WordSum::new();
        let gs: Vec<usize> = w
            .iter()
            .filter_map(|f| if let Factor::G(i) = f { Some(*i) } else { None })
            .collect();
        let hs: Vec<usize> = w
            .iter()
            .filter_map(|f| if let Factor::H(j) = f { Some(*j) } else { None })
            .collect();
        let (p, q) = (gs.len(), hs.len());
        // passing s^{-1} over the shifted g factors
        let mut dec = 0i64;
        for (i, &x) in gs.iter().enumerate() {
            dec += ((p - 1 - i) as i64) * (self.g_degree(x) - 1) as i64;
        }
        let dec = parity_sign(dec);
        if q == 0 {
            if let Some(v) = self.d_prime.get(&p).and_then(|t| t.get(&gs)) {
                let c = sign_scalar(dec * self.signs.g_rows);
                for (i, x) in v.iter() {
                    add_to(&mut out, vec![Factor::G(i)], x * &c);
                }
            }
        }
        if p == 0 {
            if q == 1 {
                if let Some(v) = self.unary_h.as_ref().and_then(|d| d.get(&hs[0])) {
                    let c = sign_scalar(self.signs.unary_h);
                    for (j, x) in v.iter() {
                        add_to(&mut out, vec![Factor::H(j)], x * &c);
                    }
                }
            }
            return out;
        }
        if let Some(v) = self.d_second.get(&(p, q)).and_then(|t| t.get(&(gs, hs))) {
            let c = sign_scalar(dec * self.signs.h_rows);
            for (j, x) in v.iter() {
                add_to(&mut out, vec![Factor::H(j)], x * &c);
            }
        }
        out
    }

    /// Applies the coderivation to a canonical word.
    pub fn apply(&self, w: &[Factor]) -> WordSum {
        self.apply_cached(w, &mut HashMap::new())
    }

    fn apply_cached(&self, w: &[Factor], cache: &mut HashMap<Word, WordSum>) -> WordSum {
        let k = w.len();
        let degs: Vec<i32> = w.iter().map(|f| self.shifted_degree(*f)).collect();
        let mut out = WordSum::new();
        for mask in 1u64..(1u64 << k) {
            let s: Vec<usize> = (0..k).filter(|p| mask >> p & 1 == 1).collect();
            let sc: Vec<usize> = (0..k).filter(|p| mask >> p & 1 == 0).collect();
            let sub: Word = s.iter().map(|&p| w[p]).collect();
            let image = match cache.get(&sub) {
                Some(v) => v.clone(),
                None => {
                    let v = self.component(&sub);
                    cache.insert(sub.clone(), v.clone());
                    v
                }
            };
            if image.is_empty() {
                continue;
            }
            let perm: Vec<usize> = s.iter().chain(sc.iter()).copied().collect();
            let eps = koszul_sign_unchecked(&perm, &degs);
            for (head, c) in image {
                let mut word = head;
                word.extend(sc.iter().map(|&p| w[p]));
                if let Some((canon, sign)) = self.canonicalize(word) {
                    add_to(&mut out, canon, c * sign_scalar(eps * sign));
                }
            }
        }
        out
    }

    /// All canonical basis words of weight `1..=max_weight`.
    pub fn basis_words(&self, max_weight: usize) -> Vec<Word> {
        let factors: Vec<Factor> = (0..self.g_basis.len())
            .map(Factor::G)
            .chain((0..self.h_basis.len()).map(Factor::H))
            .collect();
        let degs: Vec<i32> = factors.iter().map(|f| self.shifted_degree(*f)).collect();
        let mut out = Vec::new();
        for k in 1..=max_weight {
            for t in sym_tuples(factors.len(), k, &degs) {
                out.push(t.iter().map(|&i| factors[i]).collect());
            }
        }
        out
    }

    pub fn render_word(&self, w: &[Factor]) -> String {
        w.iter()
            .map(|f| match f {
                Factor::G(i) => format!("s{}", self.g_basis[*i].name),
                Factor::H(j) => self.h_basis[*j].name.clone(),
            })
            .collect::<Vec<_>>()
            .join("⊙")
    }
}

/// Assembles `D'` and `D''` for the pair, with rows up to total arity `max_weight`.
pub fn build_codifferential(
    pair: &LiePair,
    mode: ConeMode,
    max_weight: usize,
) -> Result<CodifferentialComponents> {
    build_codifferential_with(pair, mode, max_weight, ConeSigns::default())
}

pub fn build_codifferential_with(
    pair: &LiePair,
    mode: ConeMode,
    max_weight: usize,
    signs: ConeSigns,
) -> Result<CodifferentialComponents> {
    let has_d = pair.g.has_differential() || pair.h.has_differential();
    match mode {
        ConeMode::Strict if has_d => {
            return Err(CoreError::Unsupported(
                "strict mode needs algebras without differentials; use dg".into(),
            ))
        }
        ConeMode::Strict | ConeMode::Dg if !pair.phi.is_strict() => {
            return Err(CoreError::Unsupported(
                "phi has higher components; use linf_morphism mode".into(),
            ))
        }
        _ => {}
    }
    if pair.g.has_higher() || pair.h.has_higher() {
        return Err(CoreError::Unsupported(
            "the cone construction needs dg Lie algebras, not L∞ algebras".into(),
        ));
    }
    let mut d_prime = BTreeMap::new();
    let mut bracket = SkewTable::new();
    for (&(x, y), v) in pair.g.bracket_entries() {
        if x <= y {
            bracket.insert(vec![x, y], v.clone());
        }
    }
    d_prime.insert(2, bracket);
    if pair.g.has_differential() {
        let table: SkewTable = pair
            .g
            .differential_entries()
            .map(|(x, v)| (vec![*x], v.clone()))
            .collect();
        d_prime.insert(1, table);
    }
    let unary_h = if mode != ConeMode::Strict && pair.h.has_differential() {
        Some(
            pair.h
                .differential_entries()
                .map(|(x, v)| (*x, v.clone()))
                .collect(),
        )
    } else {
        None
    };
    let max_p = if mode == ConeMode::LinfMorphism {
        pair.phi.max_arity().max(1)
    } else {
        1
    };
    let mut d_second = BTreeMap::new();
    for p in 1..=max_p.min(max_weight) {
        for q in 0..=(max_weight - p) {
            let table = twisted_action_general(&pair.g, &pair.h, &pair.phi, p, q)?;
            if !table.is_empty() {
                d_second.insert((p, q), table);
            }
        }
    }
    Ok(CodifferentialComponents {
        mode,
        g_basis: pair.g.basis.clone(),
        h_basis: pair.h.basis.clone(),
        d_prime,
        d_second,
        unary_h,
        max_weight,
        signs,
    })
}

/// Single-factor applications of `D` on basis words, used by `apply_D`.
pub fn apply_d(components: &CodifferentialComponents, word: &[Factor]) -> Result<WordSum> {
    let Some((canon, sign)) = components.canonicalize(word.to_vec()) else {
        return Ok(WordSum::new());
    };
    if canon.len() > components.max_weight {
        return Err(CoreError::OrderTooHigh {
            requested: canon.len(),
            available: components.max_weight,
        });
    }
    let mut out = components.apply(&canon);
    if sign < 0 {
        for c in out.values_mut() {
            *c = -c.clone();
        }
    }
    Ok(out)
}

/// Applies `D` twice to every canonical word of weight `≤ max_weight`.
pub fn check_d_squared(
    components: &CodifferentialComponents,
    max_weight: usize,
) -> Result<ValidationReport> {
    if max_weight > components.max_weight {
        return Err(CoreError::OrderTooHigh {
            requested: max_weight,
            available: components.max_weight,
        });
    }
    let mut report = ValidationReport::new("D_squared");
    let mut cache = HashMap::new();
    for w in components.basis_words(max_weight) {
        report.tick();
        let once = components.apply_cached(&w, &mut cache);
        let mut twice = WordSum::new();
        for (u, c) in once {
            for (v, d) in components.apply_cached(&u, &mut cache) {
                add_to(&mut twice, v, &c * d);
            }
        }
        if let Some((v, c)) = twice.iter().next() {
            report.fail(
                &format!("weight_{}", w.len()),
                vec![components.render_word(&w)],
                format!(
                    "D²(w) has coefficient {c} on {} ({} surviving terms)",
                    components.render_word(v),
                    twice.len()
                ),
            );
        }
    }
    Ok(report)
}

/// Translates the coderivation into brackets `l_n` on `V = g ⊕ h[-1]`
/// (`g` basis first, then `h[-1]` with degrees raised by one), `n ≤ arity_cap`.
pub fn export_cone_brackets(
    components: &CodifferentialComponents,
    arity_cap: usize,
) -> Result<LInfinityStructure> {
    export_cone_brackets_with(components, arity_cap, bracket_sign)
}

pub fn export_cone_brackets_with(
    components: &CodifferentialComponents,
    arity_cap: usize,
    global_sign: impl Fn(usize) -> i32,
) -> Result<LInfinityStructure> {
    if arity_cap > components.max_weight {
        return Err(CoreError::OrderTooHigh {
            requested: arity_cap,
            available: components.max_weight,
        });
    }
    let ng = components.g_basis.len();
    let mut basis = components.g_basis.clone();
    for b in &components.h_basis {
        basis.push(BasisElem::new(format!("s{}", b.name), b.degree + 1));
    }
    let vdeg: Vec<i32> = basis.iter().map(|b| b.degree).collect();
    let mut l = LInfinityStructure::new(basis);
    let to_factor = |i: usize| {
        if i < ng {
            Factor::G(i)
        } else {
            Factor::H(i - ng)
        }
    };
    for n in 1..=arity_cap {
        let global = global_sign(n);
        for tuple in skew_tuples(vdeg.len(), n, &vdeg) {
            let mut susp = 0i64;
            for (i, &v) in tuple.iter().enumerate() {
                susp += ((n - 1 - i) as i64) * vdeg[v] as i64;
            }
            let word: Word = tuple.iter().map(|&i| to_factor(i)).collect();
            let image = components.component(&word);
            let mut value = Vector::zero();
            for (out, c) in image {
                let idx = match out[0] {
                    Factor::G(i) => i,
                    Factor::H(j) => ng + j,
                };
                value.add_term(idx, c);
            }
            if value.is_zero() {
                continue;
            }
            let sign = parity_sign(susp) * global;
            l.add(&tuple, &value, &sign_scalar(sign));
        }
    }
    Ok(l)
}

/// Global sign of `l_n` relative to `s^{-1} ∘ Q_n ∘ s^{⊗n}`, chosen so that `l_2` restricted
/// to `g` is the bracket of `g`.
pub fn bracket_sign(n: usize) -> i32 {
    parity_sign(n as i64 - 1)
}

/// Structural zeros on `V = g ⊕ h[-1]`: no `g` output once an `h[-1]` input is present, and
/// no `h[-1]` output on pure `h[-1]` inputs. In dg modes the unary `d_h` row is exempt.
pub fn check_structural_zeros(
    l: &LInfinityStructure,
    g_dim: usize,
    allow_unary_h: bool,
) -> ValidationReport {
    let mut report = ValidationReport::new("structural_zeros");
    let names: Vec<String> = l.basis.iter().map(|b| b.name.clone()).collect();
    for (&n, table) in &l.brackets {
        for (inputs, v) in table {
            report.tick();
            let has_h = inputs.iter().any(|&i| i >= g_dim);
            let pure_h = inputs.iter().all(|&i| i >= g_dim);
            let g_out = v.iter().any(|(i, _)| i < g_dim);
            let h_out = v.iter().any(|(i, _)| i >= g_dim);
            let witness: Vec<String> = inputs.iter().map(|&i| names[i].clone()).collect();
            if has_h && g_out {
                report.fail(
                    "g_projection",
                    witness.clone(),
                    format!("l_{n} has a g component"),
                );
            }
            if pure_h && h_out && !(allow_unary_h && n == 1) {
                report.fail("h_projection", witness, format!("l_{n} has an h component"));
            }
        }
    }
    report
}

/// Degree-one identity check of the exported table against `Q`: `l_n` is graded antisymmetric.
pub fn exported_is_antisymmetric(l: &LInfinityStructure) -> bool {
    let degrees = l.degrees();
    l.brackets.values().all(|t| {
        t.keys().all(|k| {
            let mut kk = k.clone();
            sort_skew(&mut kk, &degrees) == 1 && kk == *k
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::liecore::linf::check_linfinity;

    #[test]
    fn strict_pairs_square_to_zero() {
        for (name, p) in corpus::strict_pairs() {
            let c = build_codifferential(&p, ConeMode::Strict, 4).unwrap();
            let r = check_d_squared(&c, 4).unwrap();
            assert!(r.is_valid(), "{name}: {r}");
        }
    }

    #[test]
    fn exported_brackets_normalized() {
        let c = build_codifferential(&corpus::pair_sl2_identity(), ConeMode::Strict, 3).unwrap();
        let l = export_cone_brackets(&c, 3).unwrap();
        assert_eq!(l.eval_basis(&[0, 1]), Vector::basis(2));
        assert!(check_linfinity(&l, 3).unwrap().is_valid());
        assert!(check_structural_zeros(&l, 3, false).is_valid());
        assert!(exported_is_antisymmetric(&l));
    }

    #[test]
    fn dg_and_linf_modes() {
        let c = build_codifferential(&corpus::pair_dg_sl2(), ConeMode::Dg, 3).unwrap();
        assert!(check_d_squared(&c, 3).unwrap().is_valid());
        let l = export_cone_brackets(&c, 3).unwrap();
        assert!(check_structural_zeros(&l, 6, true).is_valid());
        assert!(!check_structural_zeros(&l, 6, false).is_valid());
        let good =
            build_codifferential(&corpus::pair_linf_sl2(), ConeMode::LinfMorphism, 3).unwrap();
        assert!(check_d_squared(&good, 3).unwrap().is_valid());
        let bad = corpus::linf_morphism_with_sign(1);
        let bad = build_codifferential(&bad, ConeMode::LinfMorphism, 3).unwrap();
        assert!(!check_d_squared(&bad, 3).unwrap().is_valid());
    }

    #[test]
    fn mode_mismatch_rejected() {
        assert!(build_codifferential(&corpus::pair_dg_sl2(), ConeMode::Strict, 3).is_err());
        assert!(build_codifferential(&corpus::pair_linf_sl2(), ConeMode::Dg, 3).is_err());
        let c = build_codifferential(&corpus::pair_sl2_identity(), ConeMode::Strict, 2).unwrap();
        assert!(check_d_squared(&c, 3).is_err());
    }
}
