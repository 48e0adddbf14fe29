//! Graded Lie, dg Lie and L∞ algebras on a finite basis.

pub mod free;
pub mod freelie;
pub mod linf;

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{CoreError, Result};
use crate::report::ValidationReport;
use crate::scalars::{parity_sign, sign_scalar, skew_swap, sort_signed, Scalar};
use crate::vector::Vector;

pub use freelie::{free_nilpotent, FreeLie};
pub use linf::{check_linfinity, LInfinityStructure};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElem {
    pub name: String,
    pub degree: i32,
}

impl BasisElem {
    pub fn new(name: impl Into<String>, degree: i32) -> Self {
        BasisElem {
            name: name.into(),
            degree,
        }
    }
}

/// Sparse table of a graded-antisymmetric multilinear map, keyed by sorted index tuples.
pub type SkewTable = BTreeMap<Vec<usize>, Vector>;

/// Sorts `inputs` in place and returns the sign of the graded-antisymmetric reordering,
/// or `0` if the sorted tuple is forced to vanish.
pub fn sort_skew(inputs: &mut [usize], degrees: &[i32]) -> i32 {
    let sign = sort_signed(inputs, |&i| i, |&a, &b| skew_swap(degrees[a], degrees[b]));
    if inputs
        .windows(2)
        .any(|p| p[0] == p[1] && degrees[p[0]].rem_euclid(2) == 0)
    {
        return 0;
    }
    sign
}

/// Finite-dimensional graded algebra with sparse structure constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraSpec {
    pub name: String,
    pub basis: Vec<BasisElem>,
    brackets: BTreeMap<(usize, usize), Vector>,
    differential: Option<BTreeMap<usize, Vector>>,
    higher: BTreeMap<usize, SkewTable>,
}

impl AlgebraSpec {
    pub fn new(name: impl Into<String>, basis: Vec<BasisElem>) -> Self {
        AlgebraSpec {
            name: name.into(),
            basis,
            brackets: BTreeMap::new(),
            differential: None,
            higher: BTreeMap::new(),
        }
    }

    /// Algebra with basis `names` all in degree zero.
    pub fn degree_zero(name: &str, names: &[&str]) -> Self {
        Self::new(name, names.iter().map(|n| BasisElem::new(*n, 0)).collect())
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.basis[i].degree
    }

    pub fn degrees(&self) -> Vec<i32> {
        self.basis.iter().map(|b| b.degree).collect()
    }

    pub fn names(&self) -> Vec<String> {
        self.basis.iter().map(|b| b.name.clone()).collect()
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.basis
            .iter()
            .position(|b| b.name == name)
            .ok_or_else(|| CoreError::UnknownBasis(name.to_string()))
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i < self.dim() {
            Ok(())
        } else {
            Err(CoreError::IndexOutOfRange {
                index: i,
                size: self.dim(),
            })
        }
    }

    fn check_vector(&self, v: &Vector) -> Result<()> {
        match v.max_index() {
            Some(i) => self.check_index(i),
            None => Ok(()),
        }
    }

    /// Sets `[x, y] = v` and `[y, x]` by graded antisymmetry, replacing earlier values.
    pub fn set_bracket(&mut self, x: usize, y: usize, v: Vector) -> Result<()> {
        self.check_index(x)?;
        self.check_index(y)?;
        self.check_vector(&v)?;
        let mirrored = self.mirror(x, y, &v);
        if x == y && mirrored != v {
            if v.is_zero() {
                return Ok(());
            }
            return Err(CoreError::InconsistentTable(format!(
                "[{0},{0}] must vanish for an element of even degree",
                self.basis[x].name
            )));
        }
        self.put_bracket(x, y, v);
        self.put_bracket(y, x, mirrored);
        Ok(())
    }

    fn mirror(&self, x: usize, y: usize, v: &Vector) -> Vector {
        if skew_swap(self.degree(x), self.degree(y)) > 0 {
            v.clone()
        } else {
            v.neg()
        }
    }

    /// Builds the bracket table from rows `[x, y] ∋ c·z`, summing repeated rows and
    /// completing by antisymmetry. Rows given for both `[x, y]` and `[y, x]` must agree.
    pub fn set_brackets_from_rows(&mut self, rows: &[(usize, usize, usize, Scalar)]) -> Result<()> {
        let mut given: BTreeMap<(usize, usize), Vector> = BTreeMap::new();
        for (x, y, z, c) in rows {
            self.check_index(*x)?;
            self.check_index(*y)?;
            self.check_index(*z)?;
            given.entry((*x, *y)).or_default().add_term(*z, c.clone());
        }
        for (&(x, y), v) in &given {
            if x < y {
                if let Some(w) = given.get(&(y, x)) {
                    if *w != self.mirror(x, y, v) {
                        return Err(CoreError::InconsistentTable(format!(
                            "[{},{}] and [{},{}] are not graded antisymmetric",
                            self.basis[x].name,
                            self.basis[y].name,
                            self.basis[y].name,
                            self.basis[x].name
                        )));
                    }
                }
            }
        }
        for ((x, y), v) in given {
            self.set_bracket(x, y, v)?;
        }
        Ok(())
    }

    /// Overwrites a single ordered entry without touching its mirror. Used to build
    /// deliberately broken tables.
    pub fn set_raw_bracket(&mut self, x: usize, y: usize, v: Vector) {
        self.put_bracket(x, y, v);
    }

    fn put_bracket(&mut self, x: usize, y: usize, v: Vector) {
        if v.is_zero() {
            self.brackets.remove(&(x, y));
        } else {
            self.brackets.insert((x, y), v);
        }
    }

    pub fn set_differential(&mut self, x: usize, v: Vector) -> Result<()> {
        self.check_index(x)?;
        self.check_vector(&v)?;
        let d = self.differential.get_or_insert_with(BTreeMap::new);
        if v.is_zero() {
            d.remove(&x);
        } else {
            d.insert(x, v);
        }
        Ok(())
    }

    pub fn has_differential(&self) -> bool {
        self.differential.is_some()
    }

    pub fn has_higher(&self) -> bool {
        !self.higher.is_empty()
    }

    /// Adds `c·z` to `μ_n(inputs)`, reordering the inputs with the graded-antisymmetric sign.
    pub fn add_higher(&mut self, inputs: &[usize], z: usize, c: Scalar) -> Result<()> {
        for &i in inputs {
            self.check_index(i)?;
        }
        self.check_index(z)?;
        if inputs.len() < 3 {
            return Err(CoreError::Unsupported(
                "higher brackets have arity at least 3".into(),
            ));
        }
        let mut key = inputs.to_vec();
        let sign = sort_skew(&mut key, &self.degrees());
        if sign == 0 {
            return Ok(());
        }
        let c = if sign > 0 { c } else { -c };
        let table = self.higher.entry(inputs.len()).or_default();
        let entry = table.entry(key.clone()).or_default();
        entry.add_term(z, c);
        if entry.is_zero() {
            table.remove(&key);
        }
        Ok(())
    }

    pub fn bracket_basis(&self, x: usize, y: usize) -> Vector {
        self.brackets.get(&(x, y)).cloned().unwrap_or_default()
    }

    pub fn bracket_entries(&self) -> impl Iterator<Item = (&(usize, usize), &Vector)> {
        self.brackets.iter()
    }

    pub fn differential_basis(&self, x: usize) -> Vector {
        self.differential
            .as_ref()
            .and_then(|d| d.get(&x).cloned())
            .unwrap_or_default()
    }

    pub fn differential_entries(&self) -> impl Iterator<Item = (&usize, &Vector)> {
        self.differential.iter().flat_map(|d| d.iter())
    }

    pub fn higher_tables(&self) -> &BTreeMap<usize, SkewTable> {
        &self.higher
    }

    pub fn bracket(&self, x: &Vector, y: &Vector) -> Vector {
        let mut out = Vector::zero();
        for (i, a) in x.iter() {
            for (j, b) in y.iter() {
                if let Some(v) = self.brackets.get(&(i, j)) {
                    out.add_scaled(v, &(a * b));
                }
            }
        }
        out
    }

    pub fn differential(&self, x: &Vector) -> Vector {
        let mut out = Vector::zero();
        if let Some(d) = &self.differential {
            for (i, a) in x.iter() {
                if let Some(v) = d.get(&i) {
                    out.add_scaled(v, a);
                }
            }
        }
        out
    }

    /// Copy with every bracket multiplied by `mu`.
    pub fn with_scaled_bracket(&self, mu: &Scalar) -> AlgebraSpec {
        let mut out = self.clone();
        out.brackets = self
            .brackets
            .iter()
            .map(|(k, v)| (*k, v.scaled(mu)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        out
    }

    pub fn is_abelian(&self) -> bool {
        self.brackets.is_empty()
    }
}

fn witness(spec: &AlgebraSpec, idx: &[usize]) -> Vec<String> {
    idx.iter().map(|&i| spec.basis[i].name.clone()).collect()
}

/// Checks antisymmetry, degree compatibility, graded Jacobi and, if a differential is
/// present, `d² = 0`, the degree of `d` and the Leibniz rule.
pub fn validate_lie(spec: &AlgebraSpec) -> Result<ValidationReport> {
    let mut report = ValidationReport::new(format!("lie({})", spec.name));
    let names = spec.names();
    for ((x, y), v) in spec.bracket_entries() {
        spec.check_index(*x)?;
        spec.check_index(*y)?;
        spec.check_vector(v)?;
    }
    for (x, v) in spec.differential_entries() {
        spec.check_index(*x)?;
        spec.check_vector(v)?;
    }

    for (&(x, y), v) in spec.bracket_entries() {
        report.tick();
        let expect = v.scaled(&sign_scalar(skew_swap(spec.degree(x), spec.degree(y))));
        if spec.bracket_basis(y, x) != expect {
            report.fail(
                "antisymmetry",
                witness(spec, &[x, y]),
                format!(
                    "[x,y] = {}, [y,x] = {}",
                    v.render(&names),
                    spec.bracket_basis(y, x).render(&names)
                ),
            );
        }
        for (z, _) in v.iter() {
            if spec.degree(z) != spec.degree(x) + spec.degree(y) {
                report.fail(
                    "degree",
                    witness(spec, &[x, y, z]),
                    "bracket output has the wrong degree",
                );
            }
        }
    }

    // only triples touching a nonzero double bracket can violate Jacobi
    let mut partners: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for (&(x, y), _) in spec.bracket_entries() {
        partners.entry(x).or_default().insert(y);
    }
    let mut triples: BTreeSet<[usize; 3]> = BTreeSet::new();
    for (&(y, z), v) in spec.bracket_entries() {
        for (w, _) in v.iter() {
            if let Some(xs) = partners.get(&w) {
                for &x in xs {
                    let mut t = [x, y, z];
                    t.sort_unstable();
                    triples.insert(t);
                }
            }
        }
    }
    let deg = |i: usize| spec.degree(i) as i64;
    for [x, y, z] in triples {
        report.tick();
        let (ex, ey, ez) = (Vector::basis(x), Vector::basis(y), Vector::basis(z));
        let mut j = Vector::zero();
        let s1 = sign_scalar(parity_sign(deg(x) * deg(z)));
        let s2 = sign_scalar(parity_sign(deg(y) * deg(x)));
        let s3 = sign_scalar(parity_sign(deg(z) * deg(y)));
        j.add_scaled(&spec.bracket(&ex, &spec.bracket(&ey, &ez)), &s1);
        j.add_scaled(&spec.bracket(&ey, &spec.bracket(&ez, &ex)), &s2);
        j.add_scaled(&spec.bracket(&ez, &spec.bracket(&ex, &ey)), &s3);
        if !j.is_zero() {
            report.fail(
                "jacobi",
                witness(spec, &[x, y, z]),
                format!("jacobiator = {}", j.render(&names)),
            );
        }
    }

    if spec.has_differential() {
        for x in 0..spec.dim() {
            report.tick();
            let dx = spec.differential_basis(x);
            for (z, _) in dx.iter() {
                if spec.degree(z) != spec.degree(x) + 1 {
                    report.fail("degree", witness(spec, &[x, z]), "d must have degree +1");
                }
            }
            let ddx = spec.differential(&dx);
            if !ddx.is_zero() {
                report.fail(
                    "d_squared",
                    witness(spec, &[x]),
                    format!("d(d(x)) = {}", ddx.render(&names)),
                );
            }
        }
        for x in 0..spec.dim() {
            for y in x..spec.dim() {
                report.tick();
                let (ex, ey) = (Vector::basis(x), Vector::basis(y));
                let lhs = spec.differential(&spec.bracket(&ex, &ey));
                let mut rhs = spec.bracket(&spec.differential(&ex), &ey);
                let s = sign_scalar(parity_sign(deg(x)));
                rhs.add_scaled(&spec.bracket(&ex, &spec.differential(&ey)), &s);
                if lhs != rhs {
                    report.fail(
                        "leibniz",
                        witness(spec, &[x, y]),
                        format!(
                            "d[x,y] = {}, [dx,y] ± [x,dy] = {}",
                            lhs.render(&names),
                            rhs.render(&names)
                        ),
                    );
                }
            }
        }
    }

    for (&n, table) in spec.higher_tables() {
        for (inputs, v) in table {
            let total: i32 = inputs.iter().map(|&i| spec.degree(i)).sum();
            for (z, _) in v.iter() {
                if spec.degree(z) != total + 2 - n as i32 {
                    report.fail(
                        "degree",
                        witness(spec, inputs),
                        format!("arity {n} bracket output has the wrong degree"),
                    );
                }
            }
        }
    }
    Ok(report)
}

/// Components `φ_m: ∧^m g → h` of a (possibly higher) morphism, keyed by sorted inputs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MorphismSpec {
    pub components: BTreeMap<usize, SkewTable>,
}

impl MorphismSpec {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn strict(images: impl IntoIterator<Item = (usize, Vector)>) -> Self {
        let mut m = Self::zero();
        let table = m.components.entry(1).or_default();
        for (a, v) in images {
            if !v.is_zero() {
                table.insert(vec![a], v);
            }
        }
        m
    }

    pub fn identity(dim: usize) -> Self {
        Self::strict((0..dim).map(|i| (i, Vector::basis(i))))
    }

    pub fn is_strict(&self) -> bool {
        self.components.iter().all(|(&m, t)| m == 1 || t.is_empty())
    }

    pub fn max_arity(&self) -> usize {
        self.components
            .iter()
            .filter(|(_, t)| !t.is_empty())
            .map(|(&m, _)| m)
            .max()
            .unwrap_or(0)
    }

    /// Adds `c·z` to `φ_m(inputs)`, sorting the inputs with the graded-antisymmetric sign.
    pub fn add_entry(&mut self, inputs: &[usize], g_degrees: &[i32], z: usize, c: Scalar) {
        let mut key = inputs.to_vec();
        let sign = sort_skew(&mut key, g_degrees);
        if sign == 0 {
            return;
        }
        let c = if sign > 0 { c } else { -c };
        let table = self.components.entry(inputs.len()).or_default();
        let entry = table.entry(key.clone()).or_default();
        entry.add_term(z, c);
        if entry.is_zero() {
            table.remove(&key);
        }
    }

    /// `φ_m` on basis inputs in any order.
    pub fn eval_basis(&self, inputs: &[usize], g_degrees: &[i32]) -> Vector {
        let Some(table) = self.components.get(&inputs.len()) else {
            return Vector::zero();
        };
        let mut key = inputs.to_vec();
        let sign = sort_skew(&mut key, g_degrees);
        if sign == 0 {
            return Vector::zero();
        }
        match table.get(&key) {
            Some(v) if sign > 0 => v.clone(),
            Some(v) => v.neg(),
            None => Vector::zero(),
        }
    }

    /// `φ_1` applied to a vector.
    pub fn apply1(&self, x: &Vector) -> Vector {
        let mut out = Vector::zero();
        if let Some(t) = self.components.get(&1) {
            for (i, c) in x.iter() {
                if let Some(v) = t.get(&vec![i]) {
                    out.add_scaled(v, c);
                }
            }
        }
        out
    }

    pub fn scaled(&self, c: &Scalar) -> MorphismSpec {
        let mut out = MorphismSpec::zero();
        for (&m, t) in &self.components {
            let table: SkewTable = t
                .iter()
                .map(|(k, v)| (k.clone(), v.scaled(c)))
                .filter(|(_, v)| !v.is_zero())
                .collect();
            out.components.insert(m, table);
        }
        out
    }
}

/// Checks that `φ_1` has degree zero, preserves brackets and commutes with differentials.
pub fn validate_strict_morphism(
    phi: &MorphismSpec,
    g: &AlgebraSpec,
    h: &AlgebraSpec,
) -> Result<ValidationReport> {
    let mut report = ValidationReport::new(format!("morphism({} -> {})", g.name, h.name));
    if !phi.is_strict() {
        return Err(CoreError::Unsupported(
            "strict morphism check needs phi_1 only".into(),
        ));
    }
    for (inputs, v) in phi.components.get(&1).into_iter().flatten() {
        g.check_index(inputs[0])?;
        h.check_vector(v)?;
        for (z, _) in v.iter() {
            if h.degree(z) != g.degree(inputs[0]) {
                report.fail(
                    "degree",
                    vec![g.basis[inputs[0]].name.clone(), h.basis[z].name.clone()],
                    "phi must have degree 0",
                );
            }
        }
    }
    let hn = h.names();
    for a in 0..g.dim() {
        for b in a..g.dim() {
            report.tick();
            let (ea, eb) = (Vector::basis(a), Vector::basis(b));
            let lhs = phi.apply1(&g.bracket(&ea, &eb));
            let rhs = h.bracket(&phi.apply1(&ea), &phi.apply1(&eb));
            if lhs != rhs {
                report.fail(
                    "bracket",
                    vec![g.basis[a].name.clone(), g.basis[b].name.clone()],
                    format!(
                        "phi[a,b] = {}, [phi a, phi b] = {}",
                        lhs.render(&hn),
                        rhs.render(&hn)
                    ),
                );
            }
        }
    }
    if g.has_differential() || h.has_differential() {
        for a in 0..g.dim() {
            report.tick();
            let ea = Vector::basis(a);
            let lhs = phi.apply1(&g.differential(&ea));
            let rhs = h.differential(&phi.apply1(&ea));
            if lhs != rhs {
                report.fail(
                    "differential",
                    vec![g.basis[a].name.clone()],
                    format!(
                        "phi(da) = {}, d(phi a) = {}",
                        lhs.render(&hn),
                        rhs.render(&hn)
                    ),
                );
            }
        }
    }
    Ok(report)
}
