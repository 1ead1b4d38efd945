//! Canonical text files for theories, graded theories, morphisms and finite categories.
//!
//! Every file is a JSON object with sorted keys and a `format` tag. Tables are arrays of
//! entries, one entry per line, in the order of their keys, so equal values print to
//! identical bytes. Only strings and non-negative integers occur.
//!
//! | tag | content |
//! |-----|---------|
//! | `htk-theory/1` | header fields, `strata`, `composition`; `categories` and `arrow_composition` under finite-category enrichment; graded files add `base` |
//! | `htk-morphism/1` | `source` and `target` headers, `cells` |
//! | `htk-category/1` | `objects`, `arrows`, `identities`, `composition` |
//!
//! Entry shapes:
//!
//! - stratum: `[arity, type, labels]`, or `[arity, degrees, type, [[degree, labels], ...]]` when graded
//! - composition: `[arity, fill, output]`, or `[arity, degrees, fill, output]` when graded
//! - category of a top cell: `[arity, type, category]`
//! - morphism cell: `[dim, arity, type, label, image]`
//!
//! An arity is its canonical key string; a type or fill is a list of component lists.

use std::collections::BTreeMap;
use std::sync::Arc;

use htk_core::arity::intern_key;
use htk_core::graded::{GradedKey, GradedTheoryPresentation};
use htk_core::ordcomb::Variance;
use htk_core::theory::{CellKey, CellRef, Enrichment, FinCategory, Header, Label, TheoryMorphism, TheoryPresentation, Value};
use serde_json::{json, Map, Value as Json};
use thiserror::Error;

pub const THEORY_TAG: &str = "htk-theory/1";
pub const MORPHISM_TAG: &str = "htk-morphism/1";
pub const CATEGORY_TAG: &str = "htk-category/1";

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown format tag {0:?}")]
    Tag(String),
    #[error("field {field}: {reason}")]
    Field { field: String, reason: String },
    #[error("expected a {expected} file, found {found}")]
    Kind { expected: &'static str, found: &'static str },
}

fn field(name: &str, reason: impl Into<String>) -> FormatError {
    FormatError::Field { field: name.to_string(), reason: reason.into() }
}

/// A parsed file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Document {
    Theory(TheoryPresentation),
    Graded(GradedTheoryPresentation),
    Morphism(TheoryMorphism),
    Category(FinCategory),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Theory(_) => "theory",
            Document::Graded(_) => "graded theory",
            Document::Morphism(_) => "morphism",
            Document::Category(_) => "category",
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            Document::Theory(t) => write_theory(t),
            Document::Graded(x) => write_graded(x),
            Document::Morphism(f) => write_morphism(f),
            Document::Category(c) => write_category(c),
        }
    }

    pub fn into_theory(self) -> Result<TheoryPresentation, FormatError> {
        match self {
            Document::Theory(t) => Ok(t),
            d => Err(FormatError::Kind { expected: "theory", found: d.kind() }),
        }
    }

    pub fn into_graded(self) -> Result<GradedTheoryPresentation, FormatError> {
        match self {
            Document::Graded(x) => Ok(x),
            d => Err(FormatError::Kind { expected: "graded theory", found: d.kind() }),
        }
    }

    pub fn into_morphism(self) -> Result<TheoryMorphism, FormatError> {
        match self {
            Document::Morphism(f) => Ok(f),
            d => Err(FormatError::Kind { expected: "morphism", found: d.kind() }),
        }
    }

    pub fn into_category(self) -> Result<FinCategory, FormatError> {
        match self {
            Document::Category(c) => Ok(c),
            d => Err(FormatError::Kind { expected: "category", found: d.kind() }),
        }
    }
}

// ---- writing ----

fn render(out: &mut String, v: &Json, indent: usize) {
    let pad = "  ".repeat(indent + 1);
    match v {
        Json::Object(m) if !m.is_empty() => {
            out.push_str("{\n");
            for (i, (k, x)) in m.iter().enumerate() {
                out.push_str(&pad);
                out.push_str(&Json::String(k.clone()).to_string());
                out.push_str(": ");
                render(out, x, indent + 1);
                out.push_str(if i + 1 < m.len() { ",\n" } else { "\n" });
            }
            out.push_str(&"  ".repeat(indent));
            out.push('}');
        }
        Json::Array(items) if !items.is_empty() && items.iter().all(|x| x.is_array() || x.is_object()) => {
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                out.push_str(&pad);
                out.push_str(&x.to_string());
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&"  ".repeat(indent));
            out.push(']');
        }
        x => out.push_str(&x.to_string()),
    }
}

fn to_text(v: &Json) -> String {
    let mut out = String::new();
    render(&mut out, v, 0);
    out.push('\n');
    out
}

fn values_json(values: &[Value]) -> Json {
    Json::Array(values.iter().map(|v| Json::Array(v.iter().map(|l| Json::String(l.to_string())).collect())).collect())
}

fn labels_json(labels: &[Label]) -> Json {
    Json::Array(labels.iter().map(|l| Json::String(l.to_string())).collect())
}

fn header_fields(m: &mut Map<String, Json>, h: &Header) {
    m.insert("dimension".into(), json!(h.dim));
    m.insert("variance".into(), json!(h.variance.as_str()));
    m.insert("colour_depth".into(), json!(h.colour_depth));
    m.insert("arity_bound".into(), json!(h.bound));
    m.insert("enrichment".into(), json!(h.enrichment.as_str()));
}

fn category_json(c: &FinCategory) -> Json {
    let arrows: Vec<Json> = c.arrows.iter().map(|(f, (s, t))| json!([&**f, &**s, &**t])).collect();
    let ids: Vec<Json> = c.identities.iter().map(|(x, i)| json!([&**x, &**i])).collect();
    let comp: Vec<Json> = c.composition.iter().map(|((f, g), h)| json!([&**f, &**g, &**h])).collect();
    json!({ "objects": labels_json(&c.objects), "arrows": arrows, "identities": ids, "composition": comp })
}

fn theory_json(t: &TheoryPresentation) -> Json {
    let mut m = Map::new();
    m.insert("format".into(), json!(THEORY_TAG));
    header_fields(&mut m, &t.header);
    let strata: Vec<Json> = t
        .strata
        .iter()
        .flat_map(|s| s.iter())
        .map(|(k, ls)| json!([k.arity, values_json(&k.values), labels_json(ls)]))
        .collect();
    m.insert("strata".into(), Json::Array(strata));
    let comp: Vec<Json> = t.composition.iter().map(|(k, o)| json!([k.arity, values_json(&k.values), &**o])).collect();
    m.insert("composition".into(), Json::Array(comp));
    if t.header.enrichment == Enrichment::FiniteCategories {
        let cats: Vec<Json> =
            t.categories.iter().map(|(k, c)| json!([k.arity, values_json(&k.values), category_json(c)])).collect();
        m.insert("categories".into(), Json::Array(cats));
        let ac: Vec<Json> =
            t.arrow_composition.iter().map(|(k, o)| json!([k.arity, values_json(&k.values), &**o])).collect();
        m.insert("arrow_composition".into(), Json::Array(ac));
    }
    Json::Object(m)
}

pub fn write_theory(t: &TheoryPresentation) -> String {
    to_text(&theory_json(t))
}

pub fn write_graded(x: &GradedTheoryPresentation) -> String {
    let mut m = Map::new();
    m.insert("format".into(), json!(THEORY_TAG));
    header_fields(&mut m, &x.header());
    m.insert("base".into(), theory_json(&x.base));
    let strata: Vec<Json> = x
        .strata
        .iter()
        .flat_map(|s| s.iter())
        .map(|(k, by)| {
            let cells: Vec<Json> = by.iter().map(|(d, ls)| json!([&**d, labels_json(ls)])).collect();
            json!([k.arity, values_json(&k.degrees), values_json(&k.values), cells])
        })
        .collect();
    m.insert("strata".into(), Json::Array(strata));
    let comp: Vec<Json> = x
        .composition
        .iter()
        .map(|(k, o)| json!([k.arity, values_json(&k.degrees), values_json(&k.values), &**o]))
        .collect();
    m.insert("composition".into(), Json::Array(comp));
    to_text(&Json::Object(m))
}

fn header_json(h: &Header) -> Json {
    let mut m = Map::new();
    header_fields(&mut m, h);
    Json::Object(m)
}

pub fn write_morphism(f: &TheoryMorphism) -> String {
    let cells: Vec<Json> = f
        .cells
        .iter()
        .map(|(c, img)| json!([c.dim, c.key.arity, values_json(&c.key.values), &*c.label, &**img]))
        .collect();
    to_text(&json!({
        "format": MORPHISM_TAG,
        "source": header_json(&f.source),
        "target": header_json(&f.target),
        "cells": cells,
    }))
}

pub fn write_category(c: &FinCategory) -> String {
    let mut v = category_json(c);
    v.as_object_mut().expect("object").insert("format".into(), json!(CATEGORY_TAG));
    to_text(&v)
}

// ---- reading ----

fn get<'a>(m: &'a Map<String, Json>, name: &str) -> Result<&'a Json, FormatError> {
    m.get(name).ok_or_else(|| field(name, "missing"))
}

fn as_usize(v: &Json, name: &str) -> Result<usize, FormatError> {
    v.as_u64().map(|n| n as usize).ok_or_else(|| field(name, "expected a non-negative integer"))
}

fn as_str<'a>(v: &'a Json, name: &str) -> Result<&'a str, FormatError> {
    v.as_str().ok_or_else(|| field(name, "expected a string"))
}

fn as_array<'a>(v: &'a Json, name: &str) -> Result<&'a Vec<Json>, FormatError> {
    v.as_array().ok_or_else(|| field(name, "expected an array"))
}

fn as_label(v: &Json, name: &str) -> Result<Label, FormatError> {
    Ok(Arc::from(as_str(v, name)?))
}

fn as_labels(v: &Json, name: &str) -> Result<Vec<Label>, FormatError> {
    as_array(v, name)?.iter().map(|x| as_label(x, name)).collect()
}

fn as_values(v: &Json, name: &str) -> Result<Vec<Value>, FormatError> {
    as_array(v, name)?.iter().map(|x| as_labels(x, name)).collect()
}

fn entry<'a>(v: &'a Json, name: &str, len: usize) -> Result<&'a [Json], FormatError> {
    let a = as_array(v, name)?;
    if a.len() != len {
        return Err(field(name, format!("entry of length {} instead of {len}", a.len())));
    }
    Ok(a)
}

fn read_header(m: &Map<String, Json>) -> Result<Header, FormatError> {
    let variance = as_str(get(m, "variance")?, "variance")?;
    let enrichment = as_str(get(m, "enrichment")?, "enrichment")?;
    Ok(Header {
        dim: as_usize(get(m, "dimension")?, "dimension")?,
        variance: Variance::parse(variance).ok_or_else(|| field("variance", format!("unknown value {variance:?}")))?,
        colour_depth: as_usize(get(m, "colour_depth")?, "colour_depth")?,
        bound: as_usize(get(m, "arity_bound")?, "arity_bound")?,
        enrichment: Enrichment::parse(enrichment)
            .ok_or_else(|| field("enrichment", format!("unknown value {enrichment:?}")))?,
    })
}

/// The dimension of an arity key; composites live one dimension above the cells.
fn arity_dim(key: &str, h: &Header, name: &str, max: usize) -> Result<usize, FormatError> {
    let a = intern_key(key, h.variance).map_err(|e| field(name, format!("arity {key:?}: {e}")))?;
    if a.dim() > max {
        return Err(field(name, format!("arity {key:?} above dimension {max}")));
    }
    Ok(a.dim())
}

fn read_category(v: &Json) -> Result<FinCategory, FormatError> {
    let m = v.as_object().ok_or_else(|| field("category", "expected an object"))?;
    let mut c = FinCategory { objects: as_labels(get(m, "objects")?, "objects")?, ..Default::default() };
    for e in as_array(get(m, "arrows")?, "arrows")? {
        let e = entry(e, "arrows", 3)?;
        c.arrows.insert(as_label(&e[0], "arrows")?, (as_label(&e[1], "arrows")?, as_label(&e[2], "arrows")?));
    }
    for e in as_array(get(m, "identities")?, "identities")? {
        let e = entry(e, "identities", 2)?;
        c.identities.insert(as_label(&e[0], "identities")?, as_label(&e[1], "identities")?);
    }
    for e in as_array(get(m, "composition")?, "composition")? {
        let e = entry(e, "composition", 3)?;
        let key = (as_label(&e[0], "composition")?, as_label(&e[1], "composition")?);
        c.composition.insert(key, as_label(&e[2], "composition")?);
    }
    Ok(c)
}

fn read_theory(m: &Map<String, Json>) -> Result<TheoryPresentation, FormatError> {
    let h = read_header(m)?;
    let mut t = TheoryPresentation::empty(h);
    for e in as_array(get(m, "strata")?, "strata")? {
        let e = entry(e, "strata", 3)?;
        let arity = as_str(&e[0], "strata")?.to_string();
        let d = arity_dim(&arity, &h, "strata", h.dim)?;
        let key = CellKey { arity, values: as_values(&e[1], "strata")? };
        if t.strata[d].insert(key, as_labels(&e[2], "strata")?).is_some() {
            return Err(field("strata", "duplicate key"));
        }
    }
    for e in as_array(get(m, "composition")?, "composition")? {
        let e = entry(e, "composition", 3)?;
        let arity = as_str(&e[0], "composition")?.to_string();
        arity_dim(&arity, &h, "composition", h.dim + 1)?;
        let key = CellKey { arity, values: as_values(&e[1], "composition")? };
        t.composition.insert(key, as_label(&e[2], "composition")?);
    }
    if h.enrichment == Enrichment::FiniteCategories {
        for e in as_array(get(m, "categories")?, "categories")? {
            let e = entry(e, "categories", 3)?;
            let arity = as_str(&e[0], "categories")?.to_string();
            arity_dim(&arity, &h, "categories", h.dim)?;
            let key = CellKey { arity, values: as_values(&e[1], "categories")? };
            t.categories.insert(key, Arc::new(read_category(&e[2])?));
        }
        for e in as_array(get(m, "arrow_composition")?, "arrow_composition")? {
            let e = entry(e, "arrow_composition", 3)?;
            let arity = as_str(&e[0], "arrow_composition")?.to_string();
            arity_dim(&arity, &h, "arrow_composition", h.dim + 1)?;
            let key = CellKey { arity, values: as_values(&e[1], "arrow_composition")? };
            t.arrow_composition.insert(key, as_label(&e[2], "arrow_composition")?);
        }
    }
    Ok(t)
}

fn read_graded(m: &Map<String, Json>, base: &Json) -> Result<GradedTheoryPresentation, FormatError> {
    let bm = base.as_object().ok_or_else(|| field("base", "expected an object"))?;
    if bm.get("format").and_then(Json::as_str) != Some(THEORY_TAG) || bm.contains_key("base") {
        return Err(field("base", "expected an ungraded theory"));
    }
    let mut x = GradedTheoryPresentation::empty(read_theory(bm)?);
    let h = read_header(m)?;
    if h != x.header() {
        return Err(field("base", "header does not match the base"));
    }
    for e in as_array(get(m, "strata")?, "strata")? {
        let e = entry(e, "strata", 4)?;
        let arity = as_str(&e[0], "strata")?.to_string();
        let d = arity_dim(&arity, &h, "strata", h.dim)?;
        let key = GradedKey { arity, degrees: as_values(&e[1], "strata")?, values: as_values(&e[2], "strata")? };
        let mut by = BTreeMap::new();
        for c in as_array(&e[3], "strata")? {
            let c = entry(c, "strata", 2)?;
            by.insert(as_label(&c[0], "strata")?, as_labels(&c[1], "strata")?);
        }
        if x.strata[d].insert(key, by).is_some() {
            return Err(field("strata", "duplicate key"));
        }
    }
    for e in as_array(get(m, "composition")?, "composition")? {
        let e = entry(e, "composition", 4)?;
        let arity = as_str(&e[0], "composition")?.to_string();
        arity_dim(&arity, &h, "composition", h.dim + 1)?;
        let key =
            GradedKey { arity, degrees: as_values(&e[1], "composition")?, values: as_values(&e[2], "composition")? };
        x.composition.insert(key, as_label(&e[3], "composition")?);
    }
    Ok(x)
}

fn read_morphism(m: &Map<String, Json>) -> Result<TheoryMorphism, FormatError> {
    let header = |name: &str| -> Result<Header, FormatError> {
        read_header(get(m, name)?.as_object().ok_or_else(|| field(name, "expected an object"))?)
    };
    let (source, target) = (header("source")?, header("target")?);
    let mut cells = BTreeMap::new();
    for e in as_array(get(m, "cells")?, "cells")? {
        let e = entry(e, "cells", 5)?;
        let dim = as_usize(&e[0], "cells")?;
        let key = CellKey { arity: as_str(&e[1], "cells")?.to_string(), values: as_values(&e[2], "cells")? };
        if arity_dim(&key.arity, &source, "cells", source.dim)? != dim {
            return Err(field("cells", format!("arity {:?} is not of dimension {dim}", key.arity)));
        }
        cells.insert(CellRef { dim, key, label: as_label(&e[3], "cells")? }, as_label(&e[4], "cells")?);
    }
    Ok(TheoryMorphism { source, target, cells })
}

pub fn parse(text: &str) -> Result<Document, FormatError> {
    let v: Json = serde_json::from_str(text)?;
    let m = v.as_object().ok_or_else(|| field("format", "top level is not an object"))?;
    let tag = as_str(get(m, "format")?, "format")?;
    match tag {
        THEORY_TAG => match m.get("base") {
            Some(base) => Ok(Document::Graded(read_graded(m, base)?)),
            None => Ok(Document::Theory(read_theory(m)?)),
        },
        MORPHISM_TAG => Ok(Document::Morphism(read_morphism(m)?)),
        CATEGORY_TAG => Ok(Document::Category(read_category(&v)?)),
        other => Err(FormatError::Tag(other.to_string())),
    }
}
