use std::sync::Arc;

use super::engine::cells_at;
use super::presentation::materialize;
use super::{FinCategory, Header, Label, Theory, TheoryError, TheoryPresentation, Value};
use crate::arity::{intern, Arity, ArityRef};
use crate::ordcomb::Variance;

/// The arity one dimension up whose bottom level is the constant singleton nerve.
pub(crate) fn lift_constant(a: &ArityRef, variance: Variance) -> ArityRef {
    let levels = a.arity.levels();
    let nerve_len = levels.first().map_or(1, |lv| lv.objects[0].len());
    let mut tables = vec![(vec![1; nerve_len + 1], vec![vec![0]; nerve_len])];
    for lv in levels {
        tables.push((lv.sizes(), lv.arrows.iter().map(|f| f.images().to_vec()).collect()));
    }
    intern(&Arity::from_tables(variance, tables).expect("lifted arity"))
}

/// Endomorphisms of a colour, read as a planar theory one dimension down.
struct Endo<T> {
    base: T,
    colour: Label,
}

impl<T: Theory> Endo<T> {
    fn lift(&self, a: &ArityRef, values: &[Value]) -> (ArityRef, Vec<Value>) {
        let b = lift_constant(a, self.base.header().variance);
        let prefix = b.level_range(0).end;
        let mut v = vec![vec![self.colour.clone()]; prefix];
        v.extend_from_slice(values);
        (b, v)
    }
}

impl<T: Theory> Theory for Endo<T> {
    fn header(&self) -> Header {
        let h = self.base.header();
        let dim = h.dim - 1;
        Header { dim, variance: Variance::Planar, colour_depth: h.colour_depth.min(dim), bound: h.bound, enrichment: h.enrichment }
    }

    fn cells(&self, a: &ArityRef, ty: &[Value]) -> Result<Vec<Label>, TheoryError> {
        let (b, v) = self.lift(a, ty);
        cells_at(&self.base, &b, &v)
    }

    fn compose(&self, a: &ArityRef, fill: &[Value]) -> Result<Label, TheoryError> {
        let (b, v) = self.lift(a, fill);
        self.base.compose(&b, &v)
    }

    fn category(&self, a: &ArityRef, ty: &[Value]) -> Result<Option<Arc<FinCategory>>, TheoryError> {
        let (b, v) = self.lift(a, ty);
        self.base.category(&b, &v)
    }

    fn compose_arrows(&self, a: &ArityRef, fill: &[Value]) -> Result<Label, TheoryError> {
        let (b, v) = self.lift(a, fill);
        self.base.compose_arrows(&b, &v)
    }
}

/// The planar `(n-1)`-theory of endomorphisms of the colour `x`, tabulated at the
/// bound of `t`.
pub fn endo_planar(t: &TheoryPresentation, x: &str) -> Result<TheoryPresentation, TheoryError> {
    if t.header.dim == 0 {
        return Err(TheoryError::Unsupported("endomorphisms need dimension at least 1".into()));
    }
    let colour: Label = x.into();
    if !t.colours().contains(&colour) {
        return Err(TheoryError::IllTyped(format!("{x} is not a colour")));
    }
    materialize(&Endo { base: t, colour }, t.header.bound)
}
