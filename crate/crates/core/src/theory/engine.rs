use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use itertools::Itertools;

use super::{point, Label, Theory, TheoryError, Value};
use crate::arity::{enumerate_arities, gather, intern, ArityRef, EntryPlan, Piece};
use crate::ordcomb::Variance;

/// Labels over an elemental arity, answering trivial strata with the point.
pub fn cells_at(t: &dyn Theory, a: &ArityRef, ty: &[Value]) -> Result<Vec<Label>, TheoryError> {
    let h = t.header();
    if h.is_trivial(a.dim()) {
        h.check_bound(a)?;
        return Ok(vec![point()]);
    }
    t.cells(a, ty)
}

/// The factors whose product is the set of general cells over `a` and `ty`.
pub fn mul(t: &dyn Theory, a: &ArityRef, ty: &[Value]) -> Result<Vec<Vec<Label>>, TheoryError> {
    a.pieces()
        .iter()
        .map(|p| cells_at(t, &p.arity, &gather(ty, &p.gather)))
        .collect()
}

/// All general cells over `a` and `ty`.
pub fn mul_values(t: &dyn Theory, a: &ArityRef, ty: &[Value]) -> Result<Vec<Value>, TheoryError> {
    Ok(mul(t, a, ty)?.into_iter().multi_cartesian_product().collect())
}

fn candidates(t: &dyn Theory, a: &ArityRef, p: usize, values: &[Value]) -> Result<Vec<Value>, TheoryError> {
    match &a.entries()[p] {
        EntryPlan::Colour => {
            let pt = intern(&crate::arity::Arity::point(a.variance()));
            Ok(cells_at(t, &pt, &[])?.into_iter().map(|l| vec![l]).collect())
        }
        EntryPlan::Cell(pieces) => {
            let factors = pieces
                .iter()
                .map(|pc| cells_at(t, &pc.arity, &gather(values, &pc.gather)))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(factors.into_iter().multi_cartesian_product().collect())
        }
    }
}

/// Describes the first position of `values` whose value is not a cell of the right
/// shape, or `None` when all positions are well typed.
pub fn check_type(t: &dyn Theory, a: &ArityRef, values: &[Value]) -> Result<Option<String>, TheoryError> {
    for p in 0..values.len() {
        let ok = match &a.entries()[p] {
            EntryPlan::Colour => {
                let pt = intern(&crate::arity::Arity::point(a.variance()));
                values[p].len() == 1 && cells_at(t, &pt, &[])?.contains(&values[p][0])
            }
            EntryPlan::Cell(pieces) => {
                values[p].len() == pieces.len()
                    && pieces.iter().zip(&values[p]).try_fold(true, |acc, (pc, l)| {
                        Ok::<_, TheoryError>(acc && cells_at(t, &pc.arity, &gather(values, &pc.gather))?.contains(l))
                    })?
            }
        };
        if !ok {
            return Ok(Some(format!("position {p} holds {:?}", values[p])));
        }
    }
    Ok(None)
}

/// Calls `f` on every well-typed assignment of the first `upto` positions of `a`.
pub fn for_each_fill(
    t: &dyn Theory,
    a: &ArityRef,
    upto: usize,
    f: &mut dyn FnMut(&[Value]) -> Result<(), TheoryError>,
) -> Result<(), TheoryError> {
    let mut values = Vec::with_capacity(upto);
    let mut bounds = Vec::new();
    for nu in 0..a.dim() {
        let r = a.level_range(nu);
        if r.start >= upto {
            break;
        }
        bounds.push(r.start..r.end.min(upto));
    }
    fill_levels(t, a, &bounds, 0, &mut values, f)
}

fn fill_levels(
    t: &dyn Theory,
    a: &ArityRef,
    bounds: &[std::ops::Range<usize>],
    depth: usize,
    values: &mut Vec<Value>,
    f: &mut dyn FnMut(&[Value]) -> Result<(), TheoryError>,
) -> Result<(), TheoryError> {
    if depth == bounds.len() {
        return f(values);
    }
    let range = bounds[depth].clone();
    let cands = range
        .clone()
        .map(|p| candidates(t, a, p, values))
        .collect::<Result<Vec<_>, _>>()?;
    if cands.iter().any(Vec::is_empty) {
        return Ok(());
    }
    let base = values.len();
    let mut idx = vec![0usize; cands.len()];
    loop {
        values.truncate(base);
        values.extend(idx.iter().zip(&cands).map(|(&i, c)| c[i].clone()));
        fill_levels(t, a, bounds, depth + 1, values, f)?;
        let mut pos = idx.len();
        loop {
            if pos == 0 {
                values.truncate(base);
                return Ok(());
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < cands[pos].len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// Runs the elemental composites of `pieces` on `values`, then writes each output
/// component into the position its slot names.
pub fn compose_into(
    t: &dyn Theory,
    parent: &ArityRef,
    pieces: &[Piece],
    values: &mut Vec<Value>,
) -> Result<(), TheoryError> {
    values.resize(parent.npos, Vec::new());
    let mut writes = Vec::with_capacity(pieces.len());
    for pc in pieces {
        let last = pc.arity.npos - 1;
        let inputs = gather(values, &pc.gather[..last]);
        writes.push((&pc.gather[last], t.compose(&pc.arity, &inputs)?));
    }
    for (slot, out) in writes {
        let src = slot.src as usize;
        let width = parent.width(src);
        let target = &mut values[src];
        if target.len() != width {
            *target = vec![point(); width];
        }
        match &slot.pick {
            None => target[0] = out,
            Some(pick) => target[pick[0] as usize] = out,
        }
    }
    Ok(())
}

/// The composite along a general `(n+1)`-arity; returns the output values.
pub fn compose_general(t: &dyn Theory, a: &ArityRef, fill: &[Value]) -> Result<Vec<Value>, TheoryError> {
    let mut values = fill.to_vec();
    compose_into(t, a, a.pieces(), &mut values)?;
    let n = a.dim() - 1;
    let start = a.offsets[n][1];
    Ok(values[start..a.npos].to_vec())
}

type ArityTable = RwLock<HashMap<(usize, usize, Variance), Arc<Vec<ArityRef>>>>;

/// Interned elemental arities of dimension `dim` within `bound`, in key order.
pub fn elemental_arities(dim: usize, bound: usize, variance: Variance) -> Arc<Vec<ArityRef>> {
    static CACHE: OnceLock<ArityTable> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.read().unwrap().get(&(dim, bound, variance)) {
        return v.clone();
    }
    let v: Arc<Vec<ArityRef>> = Arc::new(enumerate_arities(dim, bound, variance).iter().map(intern).collect());
    cache.write().unwrap().insert((dim, bound, variance), v.clone());
    v
}

/// The elemental arity and type of the output cell of an `(n+1)`-arity, read from
/// values at its other positions.
pub fn output_cell(a: &ArityRef, values: &[Value]) -> (ArityRef, Vec<Value>) {
    match &a.entries()[a.npos - 1] {
        EntryPlan::Colour => (intern(&crate::arity::Arity::point(a.variance())), vec![]),
        EntryPlan::Cell(pieces) => (pieces[0].arity.clone(), gather(values, &pieces[0].gather)),
    }
}
