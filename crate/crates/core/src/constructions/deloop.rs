use std::sync::Arc;

use crate::arity::{intern, Arity, ArityRef, EntryPlan};
use crate::ordcomb::bracket_map;
use crate::theory::{cells_at, materialize, FinCategory, Header, Label, Theory, TheoryError, TheoryPresentation, Value};

/// An arity one dimension down obtained by flattening the two lowest levels, with the
/// source of each of its bottom positions.
#[derive(Clone, Debug)]
pub struct Flattening {
    pub arity: ArityRef,
    /// For every bottom position, the position and component it is read from.
    pub bottom: Vec<(usize, usize)>,
    /// First position above the two flattened levels.
    pub upper_start: usize,
}

impl Flattening {
    /// Values at the positions of the flattened arity; `values` may be a prefix.
    pub fn translate(&self, values: &[Value]) -> Vec<Value> {
        let mut out: Vec<Value> = self
            .bottom
            .iter()
            .filter(|(p, _)| *p < values.len())
            .map(|&(p, c)| vec![values[p][c].clone()])
            .collect();
        if self.upper_start < values.len() {
            out.extend_from_slice(&values[self.upper_start..]);
        }
        out
    }
}

/// Flattens an arity of dimension at least 2: bottom objects become coproducts of the
/// level-0 sets over each element of level 1, connected by composites.
pub fn flatten(a: &ArityRef) -> Result<Flattening, TheoryError> {
    let k = a.dim();
    if k < 2 {
        return Err(TheoryError::Unsupported("flattening needs dimension at least 2".into()));
    }
    let levels = a.arity.levels();
    let l1 = &levels[1];
    let objects = l1.objects.len();
    let bracket: Vec<_> = (0..objects).map(|i| bracket_map(&a.arity.maekara(1, i))).collect();
    // Level-0 object under element j of level-1 object i.
    let block = |i: usize, j: usize| bracket[i].apply(j + 1);
    let mut offsets = Vec::with_capacity(objects);
    let mut bottom = Vec::new();
    for i in 0..objects {
        let mut offs = Vec::new();
        let mut next = 0;
        for j in 0..l1.objects[i].len() {
            offs.push(next);
            let obj = block(i, j);
            let size = levels[0].objects[obj].len();
            next += size;
            let p = a.position(1, i, j);
            let EntryPlan::Cell(pieces) = &a.entries()[p] else { unreachable!() };
            let base = a.offsets[0][obj];
            let mut by_element = vec![usize::MAX; size];
            for (c, pc) in pieces.iter().enumerate() {
                let out = pc.gather.last().expect("piece output");
                by_element[out.src as usize - base] = c;
            }
            bottom.extend(by_element.into_iter().map(|c| (p, c)));
        }
        offs.push(next);
        offsets.push(offs);
    }
    let mut tables = Vec::with_capacity(k - 1);
    let sizes: Vec<usize> = offsets.iter().map(|o| *o.last().unwrap()).collect();
    let mut arrows = Vec::with_capacity(objects - 1);
    for i in 1..objects {
        let phi = &l1.arrows[i - 1];
        let mut images = Vec::with_capacity(sizes[i - 1]);
        for kk in 0..l1.objects[i - 1].len() {
            let j = phi.apply(kk);
            let (from, to) = (block(i - 1, kk), block(i, j));
            let m = a.arity.composite(0, from, to);
            for e in 0..levels[0].objects[from].len() {
                images.push(offsets[i][j] + m.apply(e));
            }
        }
        arrows.push(images);
    }
    tables.push((sizes, arrows));
    for lv in &levels[2..] {
        tables.push((lv.sizes(), lv.arrows.iter().map(|f| f.images().to_vec()).collect()));
    }
    let arity = intern(&Arity::from_tables(a.variance(), tables)?);
    let upper_start = if k > 2 { a.offsets[2][0] } else { a.npos };
    Ok(Flattening { arity, bottom, upper_start })
}

/// The one-object theory one dimension up whose cells over an arity are the cells of the
/// base over its flattening.
#[derive(Clone, Debug)]
pub struct Deloop<T> {
    pub base: T,
    pub bound: usize,
}

impl<T: Theory> Deloop<T> {
    fn lower(&self, a: &ArityRef, values: &[Value]) -> Result<(ArityRef, Vec<Value>), TheoryError> {
        self.header().check_bound(a)?;
        if a.dim() == 1 {
            return Ok((intern(&Arity::point(a.variance())), vec![]));
        }
        let f = flatten(a)?;
        let bound = self.base.header().bound;
        if f.arity.arity.max_index() > bound {
            return Err(TheoryError::BoundExceeded { key: f.arity.key.clone(), bound });
        }
        let v = f.translate(values);
        Ok((f.arity, v))
    }
}

impl<T: Theory> Theory for Deloop<T> {
    fn header(&self) -> Header {
        let h = self.base.header();
        Header { dim: h.dim + 1, variance: h.variance, colour_depth: h.colour_depth, bound: self.bound, enrichment: h.enrichment }
    }

    fn cells(&self, a: &ArityRef, ty: &[Value]) -> Result<Vec<Label>, TheoryError> {
        let (b, v) = self.lower(a, ty)?;
        cells_at(&self.base, &b, &v)
    }

    fn compose(&self, a: &ArityRef, fill: &[Value]) -> Result<Label, TheoryError> {
        let (b, v) = self.lower(a, fill)?;
        self.base.compose(&b, &v)
    }

    fn category(&self, a: &ArityRef, ty: &[Value]) -> Result<Option<Arc<FinCategory>>, TheoryError> {
        let (b, v) = self.lower(a, ty)?;
        self.base.category(&b, &v)
    }

    fn compose_arrows(&self, a: &ArityRef, fill: &[Value]) -> Result<Label, TheoryError> {
        let (b, v) = self.lower(a, fill)?;
        self.base.compose_arrows(&b, &v)
    }
}

/// Tabulates the deloop of `v` at `bound`; `v` must answer on all flattenings.
pub fn deloop(v: &dyn Theory, bound: usize) -> Result<TheoryPresentation, TheoryError> {
    materialize(&Deloop { base: v, bound }, bound)
}
