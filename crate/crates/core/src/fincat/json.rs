//! JSON interchange for finite categories.
//!
//! ```json
//! {"objects": 1, "morphisms": [{"id": 0, "dom": 0, "cod": 0}],
//!  "identities": [0], "composition": [[0, 0, 0]]}
//! ```
//!
//! A document may instead name a builder, e.g. `{"builder": "dihedral", "n": 3}`,
//! or combine parts with `{"builder": "coproduct", "parts": [...]}` and
//! `{"builder": "product", "parts": [a, b]}`.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use super::builders::{by_name, disjoint_union};
use super::{product, CategoryError, FinCategory, MorphismId};

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("unknown builder {0:?} or missing parameter")]
    UnknownBuilder(String),
    #[error("identities list has {found} entries for {objects} objects")]
    IdentityCount { objects: usize, found: usize },
    #[error(transparent)]
    Category(#[from] CategoryError),
}

#[derive(Debug, Serialize, Deserialize)]
struct MorphismJson {
    id: usize,
    dom: usize,
    cod: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct CategoryJson {
    objects: usize,
    morphisms: Vec<MorphismJson>,
    identities: Vec<usize>,
    composition: Vec<[usize; 3]>,
}

/// Serializes in canonical form. The output is a pure function of the table.
pub fn to_json(c: &FinCategory) -> String {
    let doc = CategoryJson {
        objects: c.object_count(),
        morphisms: c
            .morphisms()
            .map(|f| MorphismJson {
                id: f,
                dom: c.dom(f),
                cod: c.cod(f),
            })
            .collect(),
        identities: c.objects().map(|x| c.identity(x)).collect(),
        composition: c.triples().into_iter().map(|(g, f, gf)| [g, f, gf]).collect(),
    };
    serde_json::to_string(&doc).expect("plain data serializes")
}

/// Parses a category, renumbering morphisms so identities come first.
///
/// Returns the category and the map from input morphism ids to canonical ids.
pub fn from_json(text: &str) -> Result<(FinCategory, Vec<MorphismId>), JsonError> {
    let value: Value = serde_json::from_str(text)?;
    from_value(value)
}

fn from_value(value: Value) -> Result<(FinCategory, Vec<MorphismId>), JsonError> {
    if let Some(name) = value.get("builder").and_then(Value::as_str) {
        let name = name.to_string();
        let c = match name.as_str() {
            "coproduct" | "product" => {
                let parts = value
                    .get("parts")
                    .and_then(Value::as_array)
                    .ok_or_else(|| JsonError::UnknownBuilder(name.clone()))?;
                let parts = parts
                    .iter()
                    .map(|p| from_value(p.clone()).map(|r| r.0))
                    .collect::<Result<Vec<_>, _>>()?;
                if name == "coproduct" {
                    disjoint_union(&parts)
                } else {
                    match parts.as_slice() {
                        [a, b] => product(a, b),
                        _ => return Err(JsonError::UnknownBuilder(name)),
                    }
                }
            }
            _ => {
                let n = value.get("n").and_then(Value::as_u64).map(|n| n as usize);
                by_name(&name, n).ok_or(JsonError::UnknownBuilder(name))?
            }
        };
        let ids = c.morphisms().collect();
        return Ok((c, ids));
    }
    let doc: CategoryJson = serde_json::from_value(value)?;
    canonicalize(doc)
}

fn canonicalize(doc: CategoryJson) -> Result<(FinCategory, Vec<MorphismId>), JsonError> {
    let m = doc.morphisms.len();
    let mut by_id: Vec<Option<&MorphismJson>> = vec![None; m];
    for mj in &doc.morphisms {
        if mj.id >= m || by_id[mj.id].is_some() {
            return Err(CategoryError::SparseIds {
                expected: m,
                found: mj.id,
            }
            .into());
        }
        by_id[mj.id] = Some(mj);
    }
    if doc.identities.len() != doc.objects {
        return Err(JsonError::IdentityCount {
            objects: doc.objects,
            found: doc.identities.len(),
        });
    }
    let mut renumber = vec![usize::MAX; m];
    for (x, &i) in doc.identities.iter().enumerate() {
        if i >= m {
            return Err(CategoryError::MorphismOutOfRange(i).into());
        }
        let mj = by_id[i].expect("dense ids");
        if mj.dom != x || mj.cod != x || renumber[i] != usize::MAX {
            return Err(CategoryError::BadIdentity(x, i).into());
        }
        renumber[i] = x;
    }
    let mut next = doc.objects;
    for slot in renumber.iter_mut() {
        if *slot == usize::MAX {
            *slot = next;
            next += 1;
        }
    }
    let mut dom = vec![0; m];
    let mut cod = vec![0; m];
    for mj in &doc.morphisms {
        dom[renumber[mj.id]] = mj.dom;
        cod[renumber[mj.id]] = mj.cod;
    }
    let mut triples = Vec::with_capacity(doc.composition.len());
    for &[g, f, gf] in &doc.composition {
        for id in [g, f, gf] {
            if id >= m {
                return Err(CategoryError::MorphismOutOfRange(id).into());
            }
        }
        triples.push((renumber[g], renumber[f], renumber[gf]));
    }
    let c = FinCategory::from_triples(doc.objects, dom, cod, &triples)?;
    Ok((c, renumber))
}
