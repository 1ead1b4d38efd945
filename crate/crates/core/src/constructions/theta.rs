use std::sync::Arc;

use crate::arity::{gather, ArityRef, EntryPlan};
use crate::theory::{
    label, materialize, output_cell, Enrichment, FinCategory, Header, Label, Theory, TheoryError,
    TheoryPresentation, Value, ID,
};

/// The theory one dimension up whose top cells are the hom sets `Hom(m(π)(x₀), x₁)` of a
/// categorified theory. Set-enriched inputs count as discretely categorified.
#[derive(Clone, Debug)]
pub struct Theta<T> {
    pub base: T,
}

fn composite_or_none<T: Theory>(t: &T, a: &ArityRef, fill: &[Value]) -> Result<Option<Label>, TheoryError> {
    match t.compose(a, fill) {
        Ok(l) => Ok(Some(l)),
        Err(TheoryError::MissingUnit { .. }) => Ok(None),
        Err(TheoryError::MissingComposition { .. }) if a.arity.levels()[a.dim() - 1].objects[0].is_empty() => {
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

impl<T: Theory> Theta<T> {
    fn category_of(&self, a: &ArityRef, ty: &[Value]) -> Result<Option<Arc<FinCategory>>, TheoryError> {
        if self.base.header().enrichment == Enrichment::Sets {
            return Ok(None);
        }
        self.base.category(a, ty)
    }

    fn identity(&self, cat: &Option<Arc<FinCategory>>, x: &Label) -> Result<Label, TheoryError> {
        match cat {
            None => Ok(label(ID)),
            Some(c) => c.identity(x).cloned().ok_or_else(|| TheoryError::IllTyped(format!("no identity on {x}"))),
        }
    }

    /// Category of component `c` of the value at position `p` of `b`.
    fn component_category(
        &self,
        b: &ArityRef,
        p: usize,
        c: usize,
        vals: &[Value],
    ) -> Result<Option<Arc<FinCategory>>, TheoryError> {
        match &b.entries()[p] {
            EntryPlan::Colour => {
                let pt = crate::arity::intern(&crate::arity::Arity::point(b.variance()));
                self.category_of(&pt, &[])
            }
            EntryPlan::Cell(pieces) => self.category_of(&pieces[c].arity, &gather(vals, &pieces[c].gather)),
        }
    }
}

impl<T: Theory> Theory for Theta<T> {
    fn header(&self) -> Header {
        let h = self.base.header();
        Header {
            dim: h.dim + 1,
            variance: h.variance,
            colour_depth: h.colour_depth + 1,
            bound: h.bound,
            enrichment: Enrichment::Sets,
        }
    }

    fn cells(&self, a: &ArityRef, ty: &[Value]) -> Result<Vec<Label>, TheoryError> {
        let n = self.base.header().dim;
        if a.dim() <= n {
            return crate::theory::cells_at(&self.base, a, ty);
        }
        self.header().check_bound(a)?;
        let last = a.npos - 1;
        let Some(x0) = composite_or_none(&self.base, a, &ty[..last])? else { return Ok(vec![]) };
        let x1 = &ty[last][0];
        let (oa, oty) = output_cell(a, ty);
        Ok(match self.category_of(&oa, &oty)? {
            None if &x0 == x1 => vec![label(ID)],
            None => vec![],
            Some(c) => c.hom(&x0, x1),
        })
    }

    fn compose(&self, b: &ArityRef, fill: &[Value]) -> Result<Label, TheoryError> {
        self.header().check_bound(b)?;
        let n = self.base.header().dim;
        let steps = b.arity.levels()[n + 1].objects[0].len();
        let mut arrows: Vec<Option<Value>> = vec![None; b.npos];
        for p in b.offsets[n][0]..b.offsets[n][0] + b.arity.levels()[n].objects[0].len() {
            let mut ids = Vec::with_capacity(fill[p].len());
            for (c, x) in fill[p].iter().enumerate() {
                ids.push(self.identity(&self.component_category(b, p, c, fill)?, x)?);
            }
            arrows[p] = Some(ids);
        }
        for s in 0..steps {
            let e = b.position(n + 1, 0, s);
            let EntryPlan::Cell(pieces) = &b.entries()[e] else { unreachable!() };
            let mut mixed = fill.to_vec();
            for (p, a) in arrows.iter().enumerate() {
                if let Some(a) = a {
                    mixed[p] = a.clone();
                }
            }
            for (c, pc) in pieces.iter().enumerate() {
                let (out, ins) = pc.gather.split_last().expect("piece output");
                let g = self.base.compose_arrows(&pc.arity, &gather(&mixed, ins))?;
                let f = &fill[e][c];
                let (oa, oty) = output_cell(&pc.arity, &gather(fill, &pc.gather));
                let h = match self.category_of(&oa, &oty)? {
                    None => label(ID),
                    Some(cat) => cat
                        .compose(&g, f)
                        .cloned()
                        .ok_or_else(|| TheoryError::IllTyped(format!("{f}∘{g} undefined")))?,
                };
                let q = out.src as usize;
                let slot = arrows[q].get_or_insert_with(|| vec![label(ID); b.width(q)]);
                slot[out.pick.as_ref().map_or(0, |p| p[0] as usize)] = h;
            }
        }
        let target = b.offsets[n][steps];
        Ok(arrows[target].as_ref().expect("composite reached the output")[0].clone())
    }
}

pub fn theta(c: &dyn Theory, bound: usize) -> Result<TheoryPresentation, TheoryError> {
    materialize(&Theta { base: c }, bound)
}

/// [`theta`] on a presentation that must first pass the validator.
pub fn theta_checked(c: &TheoryPresentation, bound: usize) -> Result<TheoryPresentation, TheoryError> {
    let report = crate::theory::validate_theory(c);
    if let Some(v) = report.violations.first() {
        return Err(TheoryError::Invalid(v.to_string()));
    }
    theta(c, bound)
}

/// `ℓ`-fold iteration of [`theta`]; `ℓ = 0` tabulates `c` itself.
pub fn theta_iter(c: &dyn Theory, steps: usize, bound: usize) -> Result<TheoryPresentation, TheoryError> {
    let mut out = materialize(c, bound)?;
    for _ in 0..steps {
        out = theta(&out, bound)?;
    }
    Ok(out)
}
