//! Theories graded over a base theory.
//!
//! A graded presentation stores, for every elemental arity, the cells of each degree
//! over a type that carries both the degrees of its components and their labels. The
//! pair form used by [`to_projection`] labels a cell of degree `d` and label `l` as
//! `d|l`, and plain `d` when `l` is the point; [`from_projection`] reads any
//! presentation with a morphism to the base back into degree-indexed tables.

mod algebra;
mod change;
mod right;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::arity::{gather, intern_key, ArityRef, EntryPlan};
use crate::theory::{
    enumerate_morphisms_with, label, validate_morphism, validate_theory, CellKey, CellRef, Enrichment, Header, Label,
    MorphismOptions, Theory, TheoryError, TheoryMorphism, TheoryPresentation, ValidationReport, Value, POINT,
};

pub use algebra::{
    colour_systems, detheorize, enumerate_algebras, enumerate_algebras_for, enumerate_thin_graded, AlgebraPresentation,
    ColourSystem,
};
pub use change::{pullback, push_left, underlying};
pub use right::{convolve, push_right, theta_graded, theta_map};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GradedError {
    #[error("degree {degree} is not a base cell over {key}")]
    InvalidDegree { key: String, degree: String },
    #[error("projection fails validation: {0}")]
    Projection(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Theory(#[from] TheoryError),
}

/// A table key of a graded presentation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GradedKey {
    pub arity: String,
    /// Degrees of the type components, a type of the base.
    pub degrees: Vec<Value>,
    /// Labels of the type components.
    pub values: Vec<Value>,
}

/// Cells of one key, listed per degree.
pub type ByDegree = BTreeMap<Label, Vec<Label>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedTheoryPresentation {
    pub base: TheoryPresentation,
    pub strata: Vec<BTreeMap<GradedKey, ByDegree>>,
    /// Keyed by the degrees and labels of a fill; the output degree is the base composite.
    pub composition: BTreeMap<GradedKey, Label>,
}

impl GradedTheoryPresentation {
    pub fn empty(base: TheoryPresentation) -> Self {
        let strata = vec![BTreeMap::new(); base.header.dim + 1];
        GradedTheoryPresentation { base, strata, composition: BTreeMap::new() }
    }

    pub fn header(&self) -> Header {
        Header { enrichment: Enrichment::Sets, ..self.base.header }
    }

    pub fn add_cells(&mut self, dim: usize, key: GradedKey, degree: Label, labels: impl IntoIterator<Item = Label>) {
        let list = self.strata[dim].entry(key).or_default().entry(degree).or_default();
        list.extend(labels);
        list.sort();
        list.dedup();
    }

    pub fn cell_count(&self) -> usize {
        self.strata.iter().flat_map(|s| s.values()).flat_map(|d| d.values()).map(Vec::len).sum()
    }

    /// Cells of `degree` over the given degrees and labels.
    pub fn cells(&self, a: &ArityRef, degrees: &[Value], values: &[Value], degree: &Label) -> &[Label] {
        let key = GradedKey { arity: a.key.clone(), degrees: degrees.to_vec(), values: values.to_vec() };
        self.strata[a.dim()].get(&key).and_then(|d| d.get(degree)).map_or(&[], Vec::as_slice)
    }
}

pub fn pair(degree: &Label, l: &Label) -> Label {
    if &**l == POINT {
        degree.clone()
    } else {
        label(&format!("{degree}|{l}"))
    }
}

pub fn pair_values(degrees: &[Value], values: &[Value]) -> Vec<Value> {
    degrees.iter().zip(values).map(|(d, v)| d.iter().zip(v).map(|(d, l)| pair(d, l)).collect()).collect()
}

pub(crate) fn arity_of(key: &str, h: Header) -> Result<ArityRef, GradedError> {
    intern_key(key, h.variance).map_err(|e| GradedError::Theory(TheoryError::Arity(e)))
}

/// The graded theory with a single point cell in every degree.
pub fn terminal_graded(base: &TheoryPresentation) -> Result<GradedTheoryPresentation, GradedError> {
    let h = base.header;
    let mut out = GradedTheoryPresentation::empty(base.clone());
    let stars = |v: &[Value]| -> Vec<Value> { v.iter().map(|c| vec![label(POINT); c.len()]).collect() };
    for (d, stratum) in base.strata.iter().enumerate() {
        for (k, labels) in stratum {
            let key = GradedKey { arity: k.arity.clone(), degrees: k.values.clone(), values: stars(&k.values) };
            for l in labels {
                out.add_cells(d, key.clone(), l.clone(), [label(POINT)]);
            }
        }
    }
    for k in base.composition.keys() {
        arity_of(&k.arity, h)?;
        let key = GradedKey { arity: k.arity.clone(), degrees: k.values.clone(), values: stars(&k.values) };
        out.composition.insert(key, label(POINT));
    }
    Ok(out)
}

/// The total presentation in pair form and its projection to the base.
pub fn to_projection(x: &GradedTheoryPresentation) -> Result<(TheoryPresentation, TheoryMorphism), GradedError> {
    let h = x.header();
    let mut y = TheoryPresentation::empty(h);
    let mut cells = BTreeMap::new();
    for (d, stratum) in x.strata.iter().enumerate() {
        for (k, by_degree) in stratum {
            let a = arity_of(&k.arity, h)?;
            let allowed = x.base.cells(&a, &k.degrees)?;
            let ty = pair_values(&k.degrees, &k.values);
            let ckey = CellKey::new(&a, &ty);
            let mut labels = Vec::new();
            for (deg, ls) in by_degree {
                if !allowed.contains(deg) {
                    return Err(GradedError::InvalidDegree { key: k.arity.clone(), degree: deg.to_string() });
                }
                for l in ls {
                    let yl = pair(deg, l);
                    if !h.is_trivial(d) {
                        cells.insert(CellRef { dim: d, key: ckey.clone(), label: yl.clone() }, deg.clone());
                    }
                    labels.push(yl);
                }
            }
            y.set_cells(&a, ty, labels);
        }
    }
    for (k, out) in &x.composition {
        let a = arity_of(&k.arity, h)?;
        let deg = x.base.compose(&a, &k.degrees)?;
        y.set_composite(&a, pair_values(&k.degrees, &k.values), pair(&deg, out));
    }
    let p = TheoryMorphism { source: h, target: x.base.header, cells };
    Ok((y, p))
}

/// Reads `y` with a projection `p` to `base` as a graded theory; labels are kept.
pub fn from_projection(
    y: &TheoryPresentation,
    p: &TheoryMorphism,
    base: &TheoryPresentation,
) -> Result<GradedTheoryPresentation, GradedError> {
    let bound = y.header.bound.min(base.header.bound);
    let report = validate_morphism(y, base, p, bound);
    if !report.passed() {
        return Err(GradedError::Projection(report.lines().join("; ")));
    }
    let h = y.header;
    let mut x = GradedTheoryPresentation::empty(base.clone());
    let unmapped = |what: &str| GradedError::Projection(format!("no image for {what}"));
    for (d, stratum) in y.strata.iter().enumerate() {
        for (key, labels) in stratum {
            let a = arity_of(&key.arity, h)?;
            let degrees = p.map_values(&a, &key.values).ok_or_else(|| unmapped(&key.arity))?;
            let gk = GradedKey { arity: key.arity.clone(), degrees, values: key.values.clone() };
            for l in labels {
                let deg = p.image(d, key, l).ok_or_else(|| unmapped(l))?;
                x.add_cells(d, gk.clone(), deg, [l.clone()]);
            }
        }
    }
    for (key, out) in &y.composition {
        let a = arity_of(&key.arity, h)?;
        let degrees = p.map_values(&a, &key.values).ok_or_else(|| unmapped(&key.arity))?;
        x.composition.insert(GradedKey { arity: key.arity.clone(), degrees, values: key.values.clone() }, out.clone());
    }
    Ok(x)
}

/// Degree checks, then the laws of the total theory and of its projection.
pub fn validate_graded(x: &GradedTheoryPresentation) -> ValidationReport {
    let mut r = ValidationReport::default();
    match to_projection(x) {
        Err(e) => r.violation("", "degree", String::new(), String::new(), e.to_string()),
        Ok((y, p)) => {
            r.merge(validate_theory(&y));
            r.merge(validate_morphism(&y, &x.base, &p, x.base.header.bound));
        }
    }
    r.finish()
}

/// Renames the cells of each key and degree to `c0, c1, ...` in list order, rewriting
/// every type accordingly, so that presentations equal up to relabeling become equal.
pub fn canonical(x: &GradedTheoryPresentation) -> Result<GradedTheoryPresentation, GradedError> {
    let h = x.header();
    let mut names: BTreeMap<(usize, GradedKey, Label, Label), Label> = BTreeMap::new();
    let mut out = GradedTheoryPresentation::empty(x.base.clone());
    let rename = |a: &ArityRef, degrees: &[Value], values: &[Value], names: &BTreeMap<_, Label>| {
        rename_values(a, degrees, values, &|d, k, deg, l| names.get(&(d, k.clone(), deg.clone(), l.clone())).cloned())
            .ok_or_else(|| GradedError::Projection(format!("dangling label over {}", a.key)))
    };
    for (d, stratum) in x.strata.iter().enumerate() {
        for (k, by_degree) in stratum {
            let a = arity_of(&k.arity, h)?;
            let values = rename(&a, &k.degrees, &k.values, &names)?;
            let nk = GradedKey { arity: k.arity.clone(), degrees: k.degrees.clone(), values };
            for (deg, ls) in by_degree {
                let fresh: Vec<Label> = (0..ls.len()).map(|i| label(&format!("c{i}"))).collect();
                for (l, f) in ls.iter().zip(&fresh) {
                    names.insert((d, k.clone(), deg.clone(), l.clone()), f.clone());
                }
                out.add_cells(d, nk.clone(), deg.clone(), fresh);
            }
        }
    }
    let n = h.dim;
    for (k, l) in &x.composition {
        let a = arity_of(&k.arity, h)?;
        let values = rename(&a, &k.degrees, &k.values, &names)?;
        let deg = x.base.compose(&a, &k.degrees)?;
        let (oa, odeg) = crate::theory::output_cell(&a, &with_last(&k.degrees, &deg));
        let (_, oval) = crate::theory::output_cell(&a, &with_last(&k.values, l));
        let okey = GradedKey { arity: oa.key.clone(), degrees: odeg, values: oval };
        let name = names
            .get(&(n, okey, deg.clone(), l.clone()))
            .cloned()
            .ok_or_else(|| GradedError::Projection(format!("composite {l} over {} is not a cell", k.arity)))?;
        out.composition.insert(GradedKey { arity: k.arity.clone(), degrees: k.degrees.clone(), values }, name);
    }
    Ok(out)
}

fn with_last(values: &[Value], last: &Label) -> Vec<Value> {
    let mut v = values.to_vec();
    v.push(vec![last.clone()]);
    v
}

/// Like the morphism value map, for a graded type: `lookup` sees the dimension, the key
/// of the component's cell, its degree and its label.
pub(crate) fn rename_values(
    a: &ArityRef,
    degrees: &[Value],
    values: &[Value],
    lookup: &dyn Fn(usize, &GradedKey, &Label, &Label) -> Option<Label>,
) -> Option<Vec<Value>> {
    let entries = a.entries();
    let point_key = || {
        let pt = crate::arity::intern(&crate::arity::Arity::point(a.variance()));
        GradedKey { arity: pt.key.clone(), degrees: vec![], values: vec![] }
    };
    let mut out = Vec::with_capacity(values.len());
    for (p, v) in values.iter().enumerate() {
        match &entries[p] {
            EntryPlan::Colour => out.push(vec![lookup(0, &point_key(), &degrees[p][0], &v[0])?]),
            EntryPlan::Cell(pieces) => {
                let mut mv = Vec::with_capacity(v.len());
                for (c, (pc, l)) in pieces.iter().zip(v).enumerate() {
                    let key = GradedKey {
                        arity: pc.arity.key.clone(),
                        degrees: gather(degrees, &pc.gather),
                        values: gather(values, &pc.gather),
                    };
                    mv.push(lookup(pc.arity.dim(), &key, &degrees[p][c], l)?);
                }
                out.push(mv);
            }
        }
    }
    Some(out)
}

/// Degree-preserving morphisms `x → z` of graded theories over the same base.
pub fn graded_morphisms(
    x: &GradedTheoryPresentation,
    z: &GradedTheoryPresentation,
    opts: MorphismOptions,
) -> Result<Vec<TheoryMorphism>, GradedError> {
    if x.base != z.base {
        return Err(GradedError::Unsupported("graded morphisms need a common base".into()));
    }
    let (yx, px) = to_projection(x)?;
    let (yz, pz) = to_projection(z)?;
    let allow = |c: &CellRef, key: &CellKey, l: &Label| px.image(c.dim, &c.key, &c.label) == pz.image(c.dim, key, l);
    Ok(enumerate_morphisms_with(&yx, &yz, opts, &allow)?)
}
