//! Versioned JSON (`"v1"`) for structure constants and triple systems.
//! Entries are sorted lexicographically so output is byte-stable.

use crate::error::{Error, Result};
use crate::ff::Field;
use crate::structconst::SuperAlgebra;
use crate::superlinear::SuperSpace;
use crate::triples::{Flavor, TripleSystem};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub const SCHEMA_VERSION: &str = "v1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisEntry {
    pub label: String,
    pub parity: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub version: String,
    pub name: String,
    pub p: u32,
    pub basis: Vec<BasisEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub products: Vec<[u64; 4]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub form: Vec<[u64; 3]>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub gradings: BTreeMap<String, Vec<[u8; 2]>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub triples: Vec<[u64; 5]>,
}

fn basis_of(space: &SuperSpace) -> Vec<BasisEntry> {
    (0..space.dim())
        .map(|i| BasisEntry {
            label: space.label(i).to_string(),
            parity: space.parity(i),
        })
        .collect()
}

fn form_entries(n: usize, gram: &[u32]) -> Vec<[u64; 3]> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let c = gram[i * n + j];
            if c != 0 {
                out.push([i as u64, j as u64, c as u64]);
            }
        }
    }
    out
}

/// Document for a Lie superalgebra, with its form and `Z₂×Z₂` grading if set.
pub fn algebra_document(name: &str, a: &SuperAlgebra) -> Document {
    let n = a.dim();
    let mut products = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for &(k, c) in a.product(i, j) {
                products.push([i as u64, j as u64, k as u64, c as u64]);
            }
        }
    }
    products.sort_unstable();
    let form = a.form.as_ref().map(|g| form_entries(n, g)).unwrap_or_default();
    let mut gradings = BTreeMap::new();
    if let Some(g) = &a.grading {
        gradings.insert("z2z2".to_string(), g.iter().map(|&d| [d & 1, d >> 1]).collect());
    }
    Document {
        version: SCHEMA_VERSION.into(),
        name: name.into(),
        p: a.field().p(),
        basis: basis_of(&a.space),
        products,
        form,
        gradings,
        triples: Vec::new(),
    }
}

/// Document for a triple system; `products` is empty and `triples` holds
/// `[i,j,k,l,c]`: `[eᵢeⱼe_k]` has coefficient `c` on `e_l`.
pub fn triple_document(name: &str, t: &TripleSystem) -> Document {
    let n = t.dim();
    let mut triples = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for &(l, c) in t.triple(i, j, k) {
                    triples.push([i as u64, j as u64, k as u64, l as u64, c as u64]);
                }
            }
        }
    }
    triples.sort_unstable();
    Document {
        version: SCHEMA_VERSION.into(),
        name: name.into(),
        p: t.field().p(),
        basis: basis_of(&t.space),
        products: Vec::new(),
        form: form_entries(n, &t.form),
        gradings: BTreeMap::new(),
        triples,
    }
}

fn check_version(d: &Document) -> Result<()> {
    if d.version != SCHEMA_VERSION {
        return Err(Error::Parse(format!("unsupported schema version {:?}", d.version)));
    }
    Ok(())
}

fn space_of(d: &Document) -> Result<SuperSpace> {
    let field = Field::new(d.p)?;
    SuperSpace::new(field, d.basis.iter().map(|b| (b.label.clone(), b.parity)).collect())
}

fn index(v: u64, n: usize) -> Result<usize> {
    usize::try_from(v)
        .ok()
        .filter(|&i| i < n)
        .ok_or_else(|| Error::Parse(format!("index {v} out of range")))
}

fn residue(v: u64, p: u32) -> Result<u32> {
    u32::try_from(v)
        .ok()
        .filter(|&c| c < p)
        .ok_or_else(|| Error::Parse(format!("coefficient {v} is not a residue mod {p}")))
}

fn gram_of(d: &Document, n: usize) -> Result<Vec<u32>> {
    let mut gram = vec![0; n * n];
    for &[i, j, c] in &d.form {
        gram[index(i, n)? * n + index(j, n)?] = residue(c, d.p)?;
    }
    Ok(gram)
}

pub fn algebra_from_document(d: &Document) -> Result<SuperAlgebra> {
    check_version(d)?;
    let space = space_of(d)?;
    let n = space.dim();
    let mut table = vec![Vec::new(); n * n];
    for &[i, j, k, c] in &d.products {
        let (i, j, k) = (index(i, n)?, index(j, n)?, index(k, n)?);
        table[i * n + j].push((k, residue(c, d.p)?));
    }
    let mut a = SuperAlgebra::new(space, table)?;
    if !d.form.is_empty() {
        a = a.with_form(gram_of(d, n)?)?;
    }
    if let Some(g) = d.gradings.get("z2z2") {
        if g.iter().any(|&[a, b]| a > 1 || b > 1) {
            return Err(Error::Parse("z2z2 degrees must be 0 or 1".into()));
        }
        a = a.with_grading(g.iter().map(|&[a, b]| a + 2 * b).collect())?;
    }
    Ok(a)
}

pub fn triple_from_document(d: &Document) -> Result<TripleSystem> {
    check_version(d)?;
    let space = space_of(d)?;
    let n = space.dim();
    let mut table = vec![Vec::new(); n * n * n];
    for &[i, j, k, l, c] in &d.triples {
        let (i, j, k, l) = (index(i, n)?, index(j, n)?, index(k, n)?, index(l, n)?);
        table[(i * n + j) * n + k].push((l, residue(c, d.p)?));
    }
    let flavor = if d.basis.iter().any(|b| b.parity == 1) {
        Flavor::Orthosymplectic
    } else {
        Flavor::Orthogonal
    };
    let form = gram_of(d, n)?;
    TripleSystem::new(space, table, form, flavor)
}

pub fn to_string(d: &Document) -> Result<String> {
    serde_json::to_string_pretty(d).map_err(|e| Error::Parse(e.to_string()))
}

pub fn from_str(s: &str) -> Result<Document> {
    serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
}
