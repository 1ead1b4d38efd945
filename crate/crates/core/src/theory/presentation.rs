use std::collections::BTreeMap;
use std::sync::Arc;

use itertools::Itertools;
use rayon::prelude::*;

use super::engine::{cells_at, elemental_arities, for_each_fill};
use super::{show_values, Enrichment, FinCategory, Header, Label, Theory, TheoryError, Value};
use crate::arity::{gather, ArityRef, EntryPlan};

/// A table key: an elemental arity and the values at (some prefix of) its positions.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellKey {
    pub arity: String,
    pub values: Vec<Value>,
}

impl CellKey {
    pub fn new(a: &ArityRef, values: &[Value]) -> Self {
        CellKey { arity: a.key.clone(), values: values.to_vec() }
    }
}

/// A theory given by finite tables up to an arity bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoryPresentation {
    pub header: Header,
    /// Per dimension `0..=n`; trivial dimensions stay empty.
    pub strata: Vec<BTreeMap<CellKey, Vec<Label>>>,
    pub composition: BTreeMap<CellKey, Label>,
    /// Hom categories over top cells, for finite-category enrichment.
    pub categories: BTreeMap<CellKey, Arc<FinCategory>>,
    /// Composition functors on arrows, keyed like `composition` with arrows as inputs.
    pub arrow_composition: BTreeMap<CellKey, Label>,
}

impl TheoryPresentation {
    pub fn empty(header: Header) -> Self {
        TheoryPresentation {
            header,
            strata: vec![BTreeMap::new(); header.dim + 1],
            composition: BTreeMap::new(),
            categories: BTreeMap::new(),
            arrow_composition: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.header.dim
    }

    /// The colours, or the point when dimension 0 is trivial.
    pub fn colours(&self) -> Vec<Label> {
        let pt = crate::arity::intern(&crate::arity::Arity::point(self.header.variance));
        cells_at(self, &pt, &[]).unwrap_or_default()
    }

    /// Stores the cells over `ty`, sorted; an empty list removes the entry.
    pub fn set_cells(&mut self, a: &ArityRef, ty: Vec<Value>, mut labels: Vec<Label>) {
        labels.sort();
        labels.dedup();
        let key = CellKey { arity: a.key.clone(), values: ty };
        if labels.is_empty() {
            self.strata[a.dim()].remove(&key);
        } else {
            self.strata[a.dim()].insert(key, labels);
        }
    }

    pub fn set_composite(&mut self, a: &ArityRef, fill: Vec<Value>, out: Label) {
        self.composition.insert(CellKey { arity: a.key.clone(), values: fill }, out);
    }

    /// Number of stored cells across all dimensions.
    pub fn cell_count(&self) -> usize {
        self.strata.iter().flat_map(|s| s.values()).map(Vec::len).sum()
    }
}

impl Theory for TheoryPresentation {
    fn header(&self) -> Header {
        self.header
    }

    fn cells(&self, a: &ArityRef, ty: &[Value]) -> Result<Vec<Label>, TheoryError> {
        self.header.check_bound(a)?;
        let key = CellKey::new(a, ty);
        Ok(self.strata[a.dim()].get(&key).cloned().unwrap_or_default())
    }

    fn compose(&self, a: &ArityRef, fill: &[Value]) -> Result<Label, TheoryError> {
        self.header.check_bound(a)?;
        let key = CellKey::new(a, fill);
        self.composition.get(&key).cloned().ok_or_else(|| {
            if has_no_inputs(a) {
                TheoryError::MissingUnit { key: a.key.clone() }
            } else {
                TheoryError::MissingComposition { key: a.key.clone(), witness: show_values(fill) }
            }
        })
    }

    fn category(&self, a: &ArityRef, ty: &[Value]) -> Result<Option<Arc<FinCategory>>, TheoryError> {
        if self.header.enrichment == Enrichment::Sets {
            return Ok(None);
        }
        self.header.check_bound(a)?;
        Ok(self.categories.get(&CellKey::new(a, ty)).cloned())
    }

    fn compose_arrows(&self, a: &ArityRef, fill: &[Value]) -> Result<Label, TheoryError> {
        if self.header.enrichment == Enrichment::Sets {
            return Ok(super::label(super::ID));
        }
        self.header.check_bound(a)?;
        let key = CellKey::new(a, fill);
        self.arrow_composition.get(&key).cloned().ok_or_else(|| TheoryError::MissingComposition {
            key: a.key.clone(),
            witness: show_values(fill),
        })
    }
}

pub(crate) fn has_no_inputs(a: &ArityRef) -> bool {
    let n = a.dim() - 1;
    a.arity.levels()[n].objects[0].is_empty()
}

/// Tabulates a theory up to `bound`. Composites along arities without inputs that the
/// theory does not define are left out.
pub fn materialize(t: &dyn Theory, bound: usize) -> Result<TheoryPresentation, TheoryError> {
    let mut header = t.header();
    header.bound = bound;
    let n = header.dim;
    let mut out = TheoryPresentation::empty(header);
    for d in 0..=n {
        if header.is_trivial(d) {
            continue;
        }
        let arities = elemental_arities(d, bound, header.variance);
        let view = &out;
        let rows: Vec<Vec<(CellKey, Vec<Label>)>> = arities
            .par_iter()
            .map(|a| {
                let mut rows = Vec::new();
                for_each_fill(view, a, a.npos, &mut |ty| {
                    let mut labels = t.cells(a, ty)?;
                    labels.sort();
                    labels.dedup();
                    if !labels.is_empty() {
                        rows.push((CellKey::new(a, ty), labels));
                    }
                    Ok(())
                })?;
                Ok(rows)
            })
            .collect::<Result<_, TheoryError>>()?;
        out.strata[d] = rows.into_iter().flatten().collect();
    }
    let arities = elemental_arities(n + 1, bound, header.variance);
    let view = &out;
    let rows: Vec<Vec<(CellKey, Label)>> = arities
        .par_iter()
        .map(|a| {
            let mut rows = Vec::new();
            for_each_fill(view, a, a.npos - 1, &mut |fill| {
                match t.compose(a, fill) {
                    Ok(l) => rows.push((CellKey::new(a, fill), l)),
                    Err(TheoryError::MissingUnit { .. }) => {}
                    Err(TheoryError::MissingComposition { .. }) if has_no_inputs(a) => {}
                    Err(e) => return Err(e),
                }
                Ok(())
            })?;
            Ok(rows)
        })
        .collect::<Result<_, TheoryError>>()?;
    out.composition = rows.into_iter().flatten().collect();
    if header.enrichment == Enrichment::FiniteCategories {
        materialize_categories(t, &mut out, bound)?;
    }
    Ok(out)
}

fn materialize_categories(t: &dyn Theory, out: &mut TheoryPresentation, bound: usize) -> Result<(), TheoryError> {
    let header = out.header;
    let n = header.dim;
    let mut cats = BTreeMap::new();
    for a in elemental_arities(n, bound, header.variance).iter() {
        for_each_fill(&*out, a, a.npos, &mut |ty| {
            if let Some(c) = t.category(a, ty)? {
                cats.insert(CellKey::new(a, ty), c);
            }
            Ok(())
        })?;
    }
    out.categories = cats;
    let mut arrows = BTreeMap::new();
    for a in elemental_arities(n + 1, bound, header.variance).iter() {
        let inputs = a.offsets[n][0]..a.offsets[n][1];
        for_each_fill(&*out, a, inputs.start, &mut |ty| {
            let mut choices: Vec<Vec<Value>> = Vec::new();
            for p in inputs.clone() {
                let keys: Vec<CellKey> = match &a.entries()[p] {
                    EntryPlan::Colour => vec![CellKey { arity: "pt".into(), values: vec![] }],
                    EntryPlan::Cell(pieces) => {
                        pieces.iter().map(|pc| CellKey::new(&pc.arity, &gather(ty, &pc.gather))).collect()
                    }
                };
                let factors: Vec<Vec<Label>> = keys
                    .iter()
                    .map(|k| out.categories.get(k).map(|c| c.arrows.keys().cloned().collect()).unwrap_or_default())
                    .collect();
                choices.push(factors.into_iter().multi_cartesian_product().collect());
            }
            for combo in choices.into_iter().multi_cartesian_product() {
                let mut fill = ty.to_vec();
                fill.extend(combo);
                let l = t.compose_arrows(a, &fill)?;
                arrows.insert(CellKey::new(a, &fill), l);
            }
            Ok(())
        })?;
    }
    out.arrow_composition = arrows;
    Ok(())
}
