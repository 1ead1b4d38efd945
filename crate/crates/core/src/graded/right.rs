use std::collections::{BTreeMap, HashMap};

use itertools::Itertools;

use super::change::pullback;
use super::{from_projection, pair, to_projection, GradedError, GradedKey, GradedTheoryPresentation};
use crate::arity::{intern, Arity, ArityRef};
use crate::constructions::theta;
use crate::theory::{
    label, materialize, CellKey, CellRef, Enrichment, Header, Label, Theory, TheoryError, TheoryMorphism,
    TheoryPresentation, Value, ID,
};

/// The action of the theorization on a morphism of set-enriched theories: lower cells
/// as in `f`, top cells to the identity of the discrete hom set.
pub fn theta_map(
    f: &TheoryMorphism,
    source: &TheoryPresentation,
    target: &TheoryPresentation,
) -> Result<TheoryMorphism, GradedError> {
    let n = f.source.dim;
    let mut cells = BTreeMap::new();
    for (d, stratum) in source.strata.iter().enumerate() {
        if target.header.is_trivial(d) {
            continue;
        }
        for (key, labels) in stratum {
            for l in labels {
                let img = if d <= n {
                    f.image(d, key, l)
                } else {
                    let a = super::arity_of(&key.arity, source.header)?;
                    let ty = f.map_values(&a, &key.values);
                    let ok = ty.is_some_and(|ty| target.cells(&a, &ty).is_ok_and(|c| c.iter().any(|c| &**c == ID)));
                    (ok && &**l == ID).then(|| label(ID))
                };
                let img = img.ok_or_else(|| GradedError::Projection(format!("no image for {l} over {}", key.arity)))?;
                cells.insert(CellRef { dim: d, key: key.clone(), label: l.clone() }, img);
            }
        }
    }
    Ok(TheoryMorphism { source: source.header, target: target.header, cells })
}

/// The theorization of a graded set-enriched theory, graded over the theorized base.
pub fn theta_graded(x: &GradedTheoryPresentation, bound: usize) -> Result<GradedTheoryPresentation, GradedError> {
    let (y, p) = to_projection(x)?;
    let ty = theta(&y, bound)?;
    let tb = theta(&x.base, bound)?;
    let tp = theta_map(&p, &ty, &tb)?;
    from_projection(&ty, &tp, &tb)
}

fn point_arity(h: Header) -> ArityRef {
    intern(&Arity::point(h.variance))
}

/// Colours of degree `u` are the sections `σ` over the fibre `{v : p(v) = u}` with
/// `σ(v)` a colour of `x` of degree `v`; a multimap `σ₁ … σₖ → τ` exists, uniquely,
/// when the base degrees compose and for every choice of `vᵢ` in the fibres the
/// product in `x` of the `σᵢ(vᵢ)` is `τ` at the product of the `vᵢ`.
struct RightPush<'a> {
    header: Header,
    coarse: &'a TheoryPresentation,
    x: &'a GradedTheoryPresentation,
    fibres: BTreeMap<Label, Vec<Label>>,
    sections: Vec<(Label, Label, BTreeMap<Label, Label>)>,
    by_label: HashMap<Label, usize>,
}

impl<'a> RightPush<'a> {
    fn new(p: &TheoryMorphism, coarse: &'a TheoryPresentation, x: &'a GradedTheoryPresentation, bound: usize) -> Result<Self, GradedError> {
        let h = coarse.header;
        if h.dim != 0 || x.base.header.dim != 0 {
            return Err(GradedError::Unsupported("right push is implemented for 0-theories".into()));
        }
        let pt = point_arity(h);
        let pkey = CellKey::new(&pt, &[]);
        let gkey = GradedKey { arity: pt.key.clone(), degrees: vec![], values: vec![] };
        let colours_x = x.strata[0].get(&gkey).cloned().unwrap_or_default();
        let mut fibres: BTreeMap<Label, Vec<Label>> = coarse.colours().into_iter().map(|u| (u, vec![])).collect();
        for v in x.base.colours() {
            let u = p.image(0, &pkey, &v).ok_or_else(|| GradedError::Projection(format!("no image for {v}")))?;
            fibres.entry(u).or_default().push(v);
        }
        let mut sections = Vec::new();
        for (u, fib) in &fibres {
            let choices: Vec<Vec<Label>> = fib.iter().map(|v| colours_x.get(v).cloned().unwrap_or_default()).collect();
            for pick in choices.into_iter().multi_cartesian_product() {
                let parts: Vec<Label> = fib.iter().zip(&pick).map(|(v, xv)| pair(v, xv)).collect();
                let inner = if parts.len() == 1 { parts[0].to_string() } else { format!("[{}]", parts.join(",")) };
                let sigma = fib.iter().cloned().zip(pick).collect();
                sections.push((pair(u, &label(&inner)), u.clone(), sigma));
            }
        }
        let by_label = sections.iter().enumerate().map(|(i, s)| (s.0.clone(), i)).collect();
        let header = Header { dim: 1, variance: h.variance, colour_depth: 1, bound, enrichment: Enrichment::Sets };
        Ok(RightPush { header, coarse, x, fibres, sections, by_label })
    }

    fn multimap_exists(&self, a: &ArityRef, ty: &[Value]) -> Result<bool, TheoryError> {
        let Some(secs) = ty.iter().map(|v| self.by_label.get(&v[0]).map(|&i| &self.sections[i])).collect::<Option<Vec<_>>>() else {
            return Ok(false);
        };
        let (out, ins) = secs.split_last().expect("output colour");
        let degrees: Vec<Value> = ins.iter().map(|s| vec![s.1.clone()]).collect();
        if self.coarse.compose(a, &degrees).ok().as_ref() != Some(&out.1) {
            return Ok(false);
        }
        let fibres: Vec<&Vec<Label>> = ins.iter().map(|s| &self.fibres[&s.1]).collect();
        for vs in fibres.into_iter().map(|f| f.iter()).multi_cartesian_product() {
            let vdeg: Vec<Value> = vs.iter().map(|v| vec![(*v).clone()]).collect();
            let Ok(w) = self.x.base.compose(a, &vdeg) else { return Ok(false) };
            let values: Vec<Value> = ins.iter().zip(&vs).map(|(s, v)| vec![s.2[*v].clone()]).collect();
            let key = GradedKey { arity: a.key.clone(), degrees: vdeg, values };
            match (self.x.composition.get(&key), out.2.get(&w)) {
                (Some(prod), Some(target)) if prod == target => {}
                _ => return Ok(false),
            }
        }
        Ok(true)
    }
}

impl Theory for RightPush<'_> {
    fn header(&self) -> Header {
        self.header
    }

    fn cells(&self, a: &ArityRef, ty: &[Value]) -> Result<Vec<Label>, TheoryError> {
        self.header.check_bound(a)?;
        if a.dim() == 0 {
            return Ok(self.sections.iter().map(|s| s.0.clone()).collect());
        }
        Ok(if self.multimap_exists(a, ty)? { vec![label(ID)] } else { vec![] })
    }

    fn compose(&self, a: &ArityRef, _fill: &[Value]) -> Result<Label, TheoryError> {
        self.header.check_bound(a)?;
        Ok(label(ID))
    }
}

/// The right push-forward of a graded 0-theory `x` along `p: x.base → coarse`, as a
/// 1-theory graded over the theorization of `coarse`.
pub fn push_right(
    p: &TheoryMorphism,
    coarse: &TheoryPresentation,
    x: &GradedTheoryPresentation,
    bound: usize,
) -> Result<GradedTheoryPresentation, GradedError> {
    let rp = RightPush::new(p, coarse, x, bound)?;
    let total = materialize(&rp, bound)?;
    let base = theta(coarse, bound)?;
    let mut cells = BTreeMap::new();
    for (d, stratum) in total.strata.iter().enumerate() {
        for (key, labels) in stratum {
            for l in labels {
                let img = if d == 0 { rp.sections[rp.by_label[l]].1.clone() } else { label(ID) };
                cells.insert(CellRef { dim: d, key: key.clone(), label: l.clone() }, img);
            }
        }
    }
    let q = TheoryMorphism { source: total.header, target: base.header, cells };
    from_projection(&total, &q, &base)
}

/// Convolution of two graded 0-theories over the same base: the right push along the
/// projection of `x` of `y` pulled back to the total theory of `x`.
pub fn convolve(
    x: &GradedTheoryPresentation,
    y: &GradedTheoryPresentation,
    bound: usize,
) -> Result<GradedTheoryPresentation, GradedError> {
    if x.base != y.base {
        return Err(GradedError::Unsupported("convolution needs a common base".into()));
    }
    let (total, p) = to_projection(x)?;
    let pulled = pullback(&p, &total, y)?;
    push_right(&p, &x.base, &pulled, bound)
}
