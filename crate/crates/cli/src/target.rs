use std::path::Path;

use anyhow::{bail, Context, Result};
use supermagic::composition::symmetric_by_name;
use supermagic::json;
use supermagic::magicsquare::{form_b, magic, MagicSuperalgebra};
use supermagic::models::{br23, br25, el53, f4_tilde, parse_square_name, Br23, Br25, El53, MODEL_NAMES};
use supermagic::structconst::SuperAlgebra;
use supermagic::superlinear::SuperDim;
use supermagic::triples::{inder, lie_superalgebra_of, TripleSystem};
use supermagic::Field;

/// What a target was built from; decides which checks apply.
pub enum Kind {
    El53(Box<El53>),
    Br23(Box<Br23>),
    Br25(Box<Br25>),
    F4,
    Square { left: String, right: String, form_note: Option<String> },
    File,
}

pub struct Target {
    pub name: String,
    pub algebra: SuperAlgebra,
    pub triple: Option<TripleSystem>,
    pub kind: Kind,
}

/// Superdimensions of `tri(S)` and `S` for each symmetric composition
/// superalgebra in characteristic 3.
const SQUARE_DATA: [(&str, (usize, usize), (usize, usize)); 6] = [
    ("S1", (0, 0), (1, 0)),
    ("S2", (2, 0), (2, 0)),
    ("S4", (9, 0), (4, 0)),
    ("S8", (28, 0), (8, 0)),
    ("S1.2", (3, 2), (1, 2)),
    ("S4.2", (9, 8), (4, 2)),
];

fn square_data(name: &str) -> Option<(SuperDim, SuperDim)> {
    SQUARE_DATA
        .iter()
        .find(|d| d.0 == name)
        .map(|&(_, t, s)| (SuperDim::new(t.0, t.1), SuperDim::new(s.0, s.1)))
}

fn tensor(a: SuperDim, b: SuperDim) -> SuperDim {
    SuperDim::new(a.even * b.even + a.odd * b.odd, a.even * b.odd + a.odd * b.even)
}

/// `tri(S) ⊕ tri(S′) ⊕ 3·(S⊗S′)` from the table above.
pub fn square_superdim(left: &str, right: &str) -> Option<SuperDim> {
    let (tl, sl) = square_data(left)?;
    let (tr, sr) = square_data(right)?;
    let t = tensor(sl, sr);
    Some(SuperDim::new(tl.even + tr.even + 3 * t.even, tl.odd + tr.odd + 3 * t.odd))
}

impl Target {
    pub fn expected_superdim(&self) -> Option<SuperDim> {
        match &self.kind {
            Kind::El53(_) => Some(SuperDim::new(39, 32)),
            Kind::Br23(_) => Some(SuperDim::new(10, 8)),
            Kind::Br25(_) => Some(SuperDim::new(10, 12)),
            Kind::F4 => Some(SuperDim::new(52, 0)),
            Kind::Square { left, right, .. } if self.algebra.field().p() == 3 => square_superdim(left, right),
            _ => None,
        }
    }
}

pub fn square_name(left: &str, right: &str) -> String {
    format!("g({left},{right})")
}

pub fn square_target(g: MagicSuperalgebra, left: &str, right: &str) -> Target {
    let (algebra, form_note) = match form_b(&g) {
        Ok(gram) => match g.algebra.clone().with_form(gram) {
            Ok(a) => (a, None),
            Err(e) => (g.algebra.clone(), Some(e.to_string())),
        },
        Err(e) => (g.algebra.clone(), Some(e.to_string())),
    };
    Target {
        name: square_name(left, right),
        algebra,
        triple: None,
        kind: Kind::Square {
            left: left.into(),
            right: right.into(),
            form_note,
        },
    }
}

fn el53_target(e: El53) -> Result<Target> {
    let idx = &e.split.plus_index;
    let n = e.g.algebra.dim();
    let m = idx.len();
    let mut gram = vec![0; m * m];
    for (a, &i) in idx.iter().enumerate() {
        for (b, &j) in idx.iter().enumerate() {
            gram[a * m + b] = e.form[i * n + j];
        }
    }
    let algebra = e.split.plus.clone().with_form(gram)?;
    Ok(Target {
        name: "el53".into(),
        algebra,
        triple: None,
        kind: Kind::El53(Box::new(e)),
    })
}

fn file_target(path: &Path) -> Result<Target> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let doc = json::from_str(&text)?;
    if doc.triples.is_empty() {
        let algebra = json::algebra_from_document(&doc)?;
        Ok(Target {
            name: doc.name,
            algebra,
            triple: None,
            kind: Kind::File,
        })
    } else {
        let t = json::triple_from_document(&doc)?;
        let lie = lie_superalgebra_of(&t, &inder(&t)?)?;
        Ok(Target {
            name: doc.name,
            algebra: lie.algebra,
            triple: Some(t),
            kind: Kind::File,
        })
    }
}

/// Resolves a registry name, `g(Sx,Sy)`, or a path to a `.json` document.
pub fn load(name: &str, p: u32) -> Result<Target> {
    if name.ends_with(".json") {
        return file_target(Path::new(name));
    }
    let field = Field::new(p)?;
    Ok(match name {
        "el53" => el53_target(el53(field)?)?,
        "br23" => {
            let b = br23(field)?;
            Target {
                name: name.into(),
                algebra: b.lie.algebra.clone(),
                triple: Some(b.c0.osts.clone()),
                kind: Kind::Br23(Box::new(b)),
            }
        }
        "br25" => {
            let b = br25(field)?;
            Target {
                name: name.into(),
                algebra: b.algebra.clone(),
                triple: None,
                kind: Kind::Br25(Box::new(b)),
            }
        }
        "f4-tilde-T2S8" => {
            let (t, g) = f4_tilde(field)?;
            Target {
                name: name.into(),
                algebra: g,
                triple: Some(t),
                kind: Kind::F4,
            }
        }
        other => {
            let Some((left, right)) = parse_square_name(other) else {
                bail!(
                    "unknown model `{other}`; expected one of {}, g(Sx,Sy) or a .json file",
                    MODEL_NAMES.join(", ")
                );
            };
            let g = magic(&symmetric_by_name(&left, field)?, &symmetric_by_name(&right, field)?)?;
            square_target(g, &left, &right)
        }
    })
}
