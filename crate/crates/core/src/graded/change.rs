use std::collections::{BTreeMap, HashMap};

use super::{arity_of, pair, pair_values, GradedError, GradedKey, GradedTheoryPresentation};
use crate::theory::{CellKey, Label, Theory, TheoryMorphism, TheoryPresentation, Value};

type Index<'a, T> = HashMap<(&'a str, &'a [Value]), Vec<(&'a GradedKey, &'a T)>>;

fn index_by_degrees<T>(entries: &BTreeMap<GradedKey, T>) -> Index<'_, T> {
    let mut idx: Index<'_, T> = HashMap::new();
    for (k, v) in entries {
        idx.entry((k.arity.as_str(), k.degrees.as_slice())).or_default().push((k, v));
    }
    idx
}

fn unmapped(what: &str) -> GradedError {
    GradedError::Projection(format!("no image for {what}"))
}

/// Reindexes the degrees of `x` along `f: refined → x.base`.
pub fn pullback(
    f: &TheoryMorphism,
    refined: &TheoryPresentation,
    x: &GradedTheoryPresentation,
) -> Result<GradedTheoryPresentation, GradedError> {
    let h = refined.header;
    let mut out = GradedTheoryPresentation::empty(refined.clone());
    for (d, stratum) in refined.strata.iter().enumerate() {
        let idx = index_by_degrees(&x.strata[d]);
        for (vkey, vlabels) in stratum {
            let a = arity_of(&vkey.arity, h)?;
            let udeg = f.map_values(&a, &vkey.values).ok_or_else(|| unmapped(&vkey.arity))?;
            let Some(entries) = idx.get(&(vkey.arity.as_str(), udeg.as_slice())) else { continue };
            for (xk, by_degree) in entries {
                let key = GradedKey { arity: vkey.arity.clone(), degrees: vkey.values.clone(), values: xk.values.clone() };
                for v in vlabels {
                    let u = f.image(d, vkey, v).ok_or_else(|| unmapped(v))?;
                    if let Some(ls) = by_degree.get(&u) {
                        out.add_cells(d, key.clone(), v.clone(), ls.iter().cloned());
                    }
                }
            }
        }
    }
    let idx = index_by_degrees(&x.composition);
    for vkey in refined.composition.keys() {
        let a = arity_of(&vkey.arity, h)?;
        let udeg = f.map_values(&a, &vkey.values).ok_or_else(|| unmapped(&vkey.arity))?;
        let Some(entries) = idx.get(&(vkey.arity.as_str(), udeg.as_slice())) else { continue };
        for (xk, l) in entries {
            let key = GradedKey { arity: vkey.arity.clone(), degrees: vkey.values.clone(), values: xk.values.clone() };
            out.composition.insert(key, (*l).clone());
        }
    }
    Ok(out)
}

/// Pushes `y`, graded over the source of `p: V → U`, forward to a theory graded over
/// `coarse = U`. Cells of degree `u` are the pairs `(w, y)` with `p(w) = u`, which at
/// set enrichment is the colimit over the discrete fibre of `p`.
pub fn push_left(
    p: &TheoryMorphism,
    coarse: &TheoryPresentation,
    y: &GradedTheoryPresentation,
) -> Result<GradedTheoryPresentation, GradedError> {
    let h = y.header();
    let mut out = GradedTheoryPresentation::empty(coarse.clone());
    for (d, stratum) in y.strata.iter().enumerate() {
        for (k, by_degree) in stratum {
            let a = arity_of(&k.arity, h)?;
            let degrees = p.map_values(&a, &k.degrees).ok_or_else(|| unmapped(&k.arity))?;
            let key = GradedKey { arity: k.arity.clone(), degrees, values: pair_values(&k.degrees, &k.values) };
            let ckey = CellKey::new(&a, &k.degrees);
            for (w, ls) in by_degree {
                let u = p.image(d, &ckey, w).ok_or_else(|| unmapped(w))?;
                out.add_cells(d, key.clone(), u, ls.iter().map(|l| pair(w, l)));
            }
        }
    }
    for (k, l) in &y.composition {
        let a = arity_of(&k.arity, h)?;
        let degrees = p.map_values(&a, &k.degrees).ok_or_else(|| unmapped(&k.arity))?;
        let w = y.base.compose(&a, &k.degrees)?;
        let key = GradedKey { arity: k.arity.clone(), degrees, values: pair_values(&k.degrees, &k.values) };
        out.composition.insert(key, pair(&w, l));
    }
    Ok(out)
}

/// Forgets the degrees. Labels must already tell the degrees apart.
pub fn underlying(x: &GradedTheoryPresentation) -> Result<TheoryPresentation, GradedError> {
    let h = x.header();
    let mut out = TheoryPresentation::empty(h);
    let mut cells: Vec<BTreeMap<CellKey, Vec<Label>>> = vec![BTreeMap::new(); h.dim + 1];
    for (d, stratum) in x.strata.iter().enumerate() {
        for (k, by_degree) in stratum {
            let key = CellKey { arity: k.arity.clone(), values: k.values.clone() };
            let list = cells[d].entry(key).or_default();
            let before = list.len() + by_degree.values().map(Vec::len).sum::<usize>();
            list.extend(by_degree.values().flatten().cloned());
            list.sort();
            list.dedup();
            if list.len() != before {
                return Err(GradedError::Unsupported(format!("labels over {} repeat across degrees", k.arity)));
            }
        }
    }
    for stratum in cells {
        for (key, labels) in stratum {
            let a = arity_of(&key.arity, h)?;
            out.set_cells(&a, key.values, labels);
        }
    }
    for (k, l) in &x.composition {
        let key = CellKey { arity: k.arity.clone(), values: k.values.clone() };
        if out.composition.insert(key, l.clone()).is_some_and(|prev| &prev != l) {
            return Err(GradedError::Unsupported(format!("composites over {} repeat across degrees", k.arity)));
        }
    }
    Ok(out)
}
