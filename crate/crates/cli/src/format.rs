//! JSON files for algebras, pairs and atom data.
//!
//! Coefficients are quoted rationals (`"p/q"` or `"p"`); basis elements are referred to by
//! name. Only one of `[x, y]` and `[y, x]` needs to be listed.

use std::collections::BTreeMap;
use std::path::Path;

use jb_core::jbtwist::{AtomData, LiePair};
use jb_core::liecore::{AlgebraSpec, BasisElem, MorphismSpec};
use jb_core::scalars::{parse_scalar, Scalar};
use jb_core::vector::Vector;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct BasisFile {
    pub name: String,
    #[serde(default)]
    pub degree: i32,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct AlgebraFile {
    pub name: String,
    pub basis: Vec<BasisFile>,
    #[serde(default)]
    pub brackets: Vec<Vec<Value>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub differential: Option<Vec<Vec<Value>>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub higher_brackets: BTreeMap<String, Vec<Vec<Value>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PairFile {
    pub g: AlgebraFile,
    pub h: AlgebraFile,
    pub phi: Vec<Vec<Value>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub phi_higher: BTreeMap<String, Vec<Vec<Value>>>,
}

/// A `g`-module `h` with `φ: g → h`; `action` rows `[a, m, z, c]` mean `⟨a, m⟩ ∋ c·z`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct AtomFile {
    pub g: AlgebraFile,
    pub h: Vec<BasisFile>,
    pub action: Vec<Vec<Value>>,
    pub phi: Vec<Vec<Value>>,
}

fn parse_err(msg: impl Into<String>) -> CliError {
    CliError::Parse(msg.into())
}

struct Names {
    what: String,
    names: Vec<String>,
}

impl Names {
    fn index(&self, v: &Value) -> Result<usize, CliError> {
        let s = v
            .as_str()
            .ok_or_else(|| parse_err(format!("{}: expected a basis name, found {v}", self.what)))?;
        self.names
            .iter()
            .position(|n| n == s)
            .ok_or_else(|| parse_err(format!("{}: unknown basis element {s:?}", self.what)))
    }
}

fn coefficient(v: &Value) -> Result<Scalar, CliError> {
    match v {
        Value::String(s) => parse_scalar(s).map_err(|e| parse_err(e.to_string())),
        other => Err(parse_err(format!(
            "coefficients must be quoted rationals, found {other}"
        ))),
    }
}

/// Splits a row into `arity` basis names followed by an output name and a coefficient.
fn row(
    r: &[Value],
    arity: usize,
    inputs: &Names,
    output: &Names,
) -> Result<(Vec<usize>, usize, Scalar), CliError> {
    if r.len() != arity + 2 {
        return Err(parse_err(format!(
            "{}: rows need {} entries, found {}",
            inputs.what,
            arity + 2,
            r.len()
        )));
    }
    let xs = r[..arity]
        .iter()
        .map(|v| inputs.index(v))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((xs, output.index(&r[arity])?, coefficient(&r[arity + 1])?))
}

fn arity_key(k: &str) -> Result<usize, CliError> {
    k.parse()
        .map_err(|_| parse_err(format!("arity keys must be integers, found {k:?}")))
}

fn basis_elems(basis: &[BasisFile]) -> Vec<BasisElem> {
    basis
        .iter()
        .map(|b| BasisElem::new(b.name.clone(), b.degree))
        .collect()
}

fn names_of(what: &str, basis: &[BasisElem]) -> Result<Names, CliError> {
    let names: Vec<String> = basis.iter().map(|b| b.name.clone()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(parse_err(format!("{what}: repeated basis name")));
    }
    Ok(Names {
        what: what.to_string(),
        names,
    })
}

impl AlgebraFile {
    pub fn to_spec(&self) -> Result<AlgebraSpec, CliError> {
        let basis = basis_elems(&self.basis);
        let names = names_of(&self.name, &basis)?;
        let mut spec = AlgebraSpec::new(self.name.clone(), basis);
        let mut rows = Vec::with_capacity(self.brackets.len());
        for r in &self.brackets {
            let (xs, z, c) = row(r, 2, &names, &names)?;
            rows.push((xs[0], xs[1], z, c));
        }
        spec.set_brackets_from_rows(&rows)?;
        if let Some(d) = &self.differential {
            let mut images: BTreeMap<usize, Vector> = BTreeMap::new();
            for r in d {
                let (xs, z, c) = row(r, 1, &names, &names)?;
                images.entry(xs[0]).or_default().add_term(z, c);
            }
            for x in 0..spec.dim() {
                spec.set_differential(x, images.remove(&x).unwrap_or_default())?;
            }
        }
        for (k, rs) in &self.higher_brackets {
            let n = arity_key(k)?;
            for r in rs {
                let (xs, z, c) = row(r, n, &names, &names)?;
                spec.add_higher(&xs, z, c)?;
            }
        }
        Ok(spec)
    }

    pub fn from_spec(spec: &AlgebraSpec) -> Self {
        let names = spec.names();
        let name = |i: usize| Value::String(names[i].clone());
        let mut brackets = Vec::new();
        for (&(x, y), v) in spec.bracket_entries() {
            if x <= y {
                for (z, c) in v.iter() {
                    brackets.push(vec![name(x), name(y), name(z), scalar_value(c)]);
                }
            }
        }
        let differential = spec.has_differential().then(|| {
            spec.differential_entries()
                .flat_map(|(&x, v)| {
                    v.iter()
                        .map(|(z, c)| vec![name(x), name(z), scalar_value(c)])
                        .collect::<Vec<_>>()
                })
                .collect()
        });
        let mut higher_brackets = BTreeMap::new();
        for (&n, table) in spec.higher_tables() {
            let mut rows = Vec::new();
            for (inputs, v) in table {
                for (z, c) in v.iter() {
                    let mut r: Vec<Value> = inputs.iter().map(|&i| name(i)).collect();
                    r.push(name(z));
                    r.push(scalar_value(c));
                    rows.push(r);
                }
            }
            if !rows.is_empty() {
                higher_brackets.insert(n.to_string(), rows);
            }
        }
        AlgebraFile {
            name: spec.name.clone(),
            basis: spec
                .basis
                .iter()
                .map(|b| BasisFile {
                    name: b.name.clone(),
                    degree: b.degree,
                })
                .collect(),
            brackets,
            differential,
            higher_brackets,
        }
    }
}

pub fn scalar_value(c: &Scalar) -> Value {
    Value::String(c.to_string())
}

impl PairFile {
    pub fn to_pair(&self) -> Result<LiePair, CliError> {
        let g = self.g.to_spec()?;
        let h = self.h.to_spec()?;
        let gn = names_of("phi (source)", &g.basis)?;
        let hn = names_of("phi (target)", &h.basis)?;
        let gdeg = g.degrees();
        let mut phi = MorphismSpec::zero();
        phi.components.insert(1, BTreeMap::new());
        for r in &self.phi {
            let (xs, z, c) = row(r, 1, &gn, &hn)?;
            phi.add_entry(&xs, &gdeg, z, c);
        }
        for (k, rs) in &self.phi_higher {
            let n = arity_key(k)?;
            if n < 2 {
                return Err(parse_err("phi_higher keys start at 2"));
            }
            for r in rs {
                let (xs, z, c) = row(r, n, &gn, &hn)?;
                phi.add_entry(&xs, &gdeg, z, c);
            }
        }
        phi.components.retain(|&m, t| m == 1 || !t.is_empty());
        Ok(LiePair::new(g, h, phi))
    }

    pub fn from_pair(pair: &LiePair) -> Self {
        let gn = pair.g.names();
        let hn = pair.h.names();
        let mut phi = Vec::new();
        let mut phi_higher = BTreeMap::new();
        for (&m, table) in &pair.phi.components {
            let mut rows = Vec::new();
            for (inputs, v) in table {
                for (z, c) in v.iter() {
                    let mut r: Vec<Value> = inputs
                        .iter()
                        .map(|&i| Value::String(gn[i].clone()))
                        .collect();
                    r.push(Value::String(hn[z].clone()));
                    r.push(scalar_value(c));
                    rows.push(r);
                }
            }
            if m == 1 {
                phi = rows;
            } else if !rows.is_empty() {
                phi_higher.insert(m.to_string(), rows);
            }
        }
        PairFile {
            g: AlgebraFile::from_spec(&pair.g),
            h: AlgebraFile::from_spec(&pair.h),
            phi,
            phi_higher,
        }
    }
}

impl AtomFile {
    pub fn to_atom(&self) -> Result<AtomData, CliError> {
        let g = self.g.to_spec()?;
        let h_space = basis_elems(&self.h);
        let gn = names_of(&self.g.name, &g.basis)?;
        let hn = names_of("h", &h_space)?;
        let mut action: BTreeMap<(usize, usize), Vector> = BTreeMap::new();
        for r in &self.action {
            if r.len() != 4 {
                return Err(parse_err("action rows need 4 entries"));
            }
            let a = gn.index(&r[0])?;
            let m = hn.index(&r[1])?;
            action
                .entry((a, m))
                .or_default()
                .add_term(hn.index(&r[2])?, coefficient(&r[3])?);
        }
        action.retain(|_, v| !v.is_zero());
        let mut phi: BTreeMap<usize, Vector> = BTreeMap::new();
        for r in &self.phi {
            let (xs, z, c) = row(r, 1, &gn, &hn)?;
            phi.entry(xs[0]).or_default().add_term(z, c);
        }
        phi.retain(|_, v| !v.is_zero());
        Ok(AtomData {
            g,
            h_space,
            action,
            phi,
        })
    }

    pub fn from_atom(data: &AtomData) -> Self {
        let gn = data.g.names();
        let hn = data.h_names();
        let s = |v: &str| Value::String(v.to_string());
        let mut action = Vec::new();
        for (&(a, m), v) in &data.action {
            for (z, c) in v.iter() {
                action.push(vec![s(&gn[a]), s(&hn[m]), s(&hn[z]), scalar_value(c)]);
            }
        }
        let mut phi = Vec::new();
        for (&a, v) in &data.phi {
            for (z, c) in v.iter() {
                phi.push(vec![s(&gn[a]), s(&hn[z]), scalar_value(c)]);
            }
        }
        AtomFile {
            g: AlgebraFile::from_spec(&data.g),
            h: data
                .h_space
                .iter()
                .map(|b| BasisFile {
                    name: b.name.clone(),
                    degree: b.degree,
                })
                .collect(),
            action,
            phi,
        }
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| parse_err(format!("{}: {e}", path.display())))
}

pub fn load_algebra(path: &Path) -> Result<AlgebraSpec, CliError> {
    read_json::<AlgebraFile>(path)?.to_spec()
}

pub fn load_pair(path: &Path) -> Result<LiePair, CliError> {
    read_json::<PairFile>(path)?.to_pair()
}

pub fn load_atom(path: &Path) -> Result<AtomData, CliError> {
    read_json::<AtomFile>(path)?.to_atom()
}

/// Indented JSON with arrays of scalars kept on one line.
pub fn to_pretty_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).unwrap_or(Value::Null);
    let mut out = String::new();
    write_value(&v, 0, &mut out);
    out.push('\n');
    out
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(xs) => xs.iter().all(|x| !x.is_array() && !x.is_object()),
        Value::Object(m) => m.values().all(|x| !x.is_array() && !x.is_object()),
        _ => true,
    }
}

fn write_value(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent + 1);
    match v {
        Value::Array(xs) if !xs.is_empty() && !is_flat(v) => {
            out.push_str("[\n");
            for (i, x) in xs.iter().enumerate() {
                out.push_str(&pad);
                write_value(x, indent + 1, out);
                out.push_str(if i + 1 < xs.len() { ",\n" } else { "\n" });
            }
            out.push_str(&"  ".repeat(indent));
            out.push(']');
        }
        Value::Object(m) if !m.is_empty() && !is_flat(v) => {
            out.push_str("{\n");
            for (i, (k, x)) in m.iter().enumerate() {
                out.push_str(&pad);
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(x, indent + 1, out);
                out.push_str(if i + 1 < m.len() { ",\n" } else { "\n" });
            }
            out.push_str(&"  ".repeat(indent));
            out.push('}');
        }
        Value::Array(xs) => {
            let items: Vec<String> = xs.iter().map(Value::to_string).collect();
            out.push_str(&format!("[{}]", items.join(", ")));
        }
        Value::Object(m) => {
            let items: Vec<String> = m
                .iter()
                .map(|(k, x)| format!("{}: {x}", Value::String(k.clone())))
                .collect();
            out.push_str(&format!("{{{}}}", items.join(", ")));
        }
        _ => out.push_str(&v.to_string()),
    }
}
