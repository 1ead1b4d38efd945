use std::sync::Arc;

use crate::arity::{gather, ArityRef, EntryPlan};
use crate::ordcomb::Variance;
use crate::theory::{
    label, materialize, Enrichment, Header, Label, Theory, TheoryError, TheoryPresentation, ValidationReport, Value,
};
use crate::zoo::{MonoidalCategory, MonoidalTheory};

use super::{Deloop, Theta};

/// The one-object theory built straight from a monoidal category: 1-cells are objects
/// and, when `categorified`, 2-cells are arrows out of the tensor of the inputs.
#[derive(Clone, Debug)]
struct OneObject {
    monoidal: Arc<MonoidalCategory>,
    categorified: bool,
    bound: usize,
}

impl OneObject {
    fn tensor_inputs(&self, a: &ArityRef, values: &[Value], level: usize, object: usize) -> Result<Label, TheoryError> {
        let start = a.offsets[level][object];
        let end = start + a.arity.levels()[level].objects[object].len();
        self.monoidal
            .tensor_all(values[start..end].iter().flatten())
            .ok_or_else(|| TheoryError::IllTyped("tensor undefined".into()))
    }
}

impl Theory for OneObject {
    fn header(&self) -> Header {
        let dim = if self.categorified { 2 } else { 1 };
        Header { dim, variance: Variance::Symmetric, colour_depth: dim - 1, bound: self.bound, enrichment: Enrichment::Sets }
    }

    fn cells(&self, a: &ArityRef, ty: &[Value]) -> Result<Vec<Label>, TheoryError> {
        self.header().check_bound(a)?;
        if a.dim() == 1 {
            return Ok(self.monoidal.objects().to_vec());
        }
        let source = self.tensor_inputs(a, ty, 1, 0)?;
        Ok(self.monoidal.category.hom(&source, &ty[a.npos - 1][0]))
    }

    fn compose(&self, a: &ArityRef, fill: &[Value]) -> Result<Label, TheoryError> {
        self.header().check_bound(a)?;
        if !self.categorified {
            return self.tensor_inputs(a, fill, 1, 0);
        }
        let cat = &self.monoidal.category;
        let steps = a.arity.levels()[2].objects[0].len();
        let mut arrows: Vec<Option<Value>> = vec![None; a.npos];
        for p in a.offsets[1][0]..a.offsets[1][0] + a.arity.levels()[1].objects[0].len() {
            arrows[p] = Some(fill[p].iter().map(|x| cat.identity(x).cloned().unwrap_or_else(|| label("?"))).collect());
        }
        for s in 0..steps {
            let e = a.position(2, 0, s);
            let EntryPlan::Cell(pieces) = &a.entries()[e] else { unreachable!() };
            let mut current = fill.to_vec();
            for (p, v) in arrows.iter().enumerate() {
                if let Some(v) = v {
                    current[p] = v.clone();
                }
            }
            for (c, pc) in pieces.iter().enumerate() {
                let (out, ins) = pc.gather.split_last().expect("piece output");
                let inputs = gather(&current, ins);
                let first = &pc.arity.offsets[1];
                let span = first[0]..first[0] + pc.arity.arity.levels()[1].objects[0].len();
                let g = self
                    .monoidal
                    .tensor_all_arrows(inputs[span].iter().flatten())
                    .ok_or_else(|| TheoryError::IllTyped("tensor of arrows undefined".into()))?;
                let h = cat
                    .compose(&g, &fill[e][c])
                    .cloned()
                    .ok_or_else(|| TheoryError::IllTyped(format!("{}∘{g} undefined", fill[e][c])))?;
                let q = out.src as usize;
                let slot = arrows[q].get_or_insert_with(|| vec![label("?"); a.width(q)]);
                slot[out.pick.as_ref().map_or(0, |p| p[0] as usize)] = h;
            }
        }
        Ok(arrows[a.offsets[1][steps]].as_ref().expect("output reached")[0].clone())
    }
}

/// Compares the deloop of the `m`-fold theorization of `monoidal` with the one-object
/// theory built directly from it, at `bound`. Supports `m ∈ {0, 1}`.
pub fn deloop_compare(monoidal: &MonoidalCategory, m: usize, bound: usize) -> ValidationReport {
    let mut report = ValidationReport::default();
    let mut fail = |what: &str, e: String| report.violation("", "deloop-comparison", what.into(), String::new(), e);
    if m > 1 {
        fail("m", format!("unsupported categorification level {m}"));
        return report;
    }
    let shared = Arc::new(monoidal.clone());
    let wide = bound * bound;
    let base = MonoidalTheory { monoidal: shared.clone(), enriched: m == 1, bound: wide };
    let lhs = if m == 0 {
        materialize(&Deloop { base, bound }, bound)
    } else {
        materialize(&Deloop { base: Theta { base }, bound }, bound)
    };
    let rhs = materialize(&OneObject { monoidal: shared, categorified: m == 1, bound }, bound);
    match (lhs, rhs) {
        (Ok(l), Ok(r)) => compare_presentations(&l, &r, &mut report),
        (Err(e), _) | (_, Err(e)) => fail("construction", e.to_string()),
    }
    report.finish()
}

/// Records every table entry where `l` and `r` differ.
pub fn compare_presentations(l: &TheoryPresentation, r: &TheoryPresentation, report: &mut ValidationReport) {
    if l.header != r.header {
        report.violation("", "header", String::new(), format!("{:?}", l.header), format!("{:?}", r.header));
    }
    for (d, (ls, rs)) in l.strata.iter().zip(&r.strata).enumerate() {
        for key in ls.keys().chain(rs.keys()) {
            report.instances += 1;
            let (a, b) = (ls.get(key), rs.get(key));
            if a != b {
                report.violation(
                    &key.arity,
                    &format!("cells-{d}"),
                    crate::theory::show_values(&key.values),
                    a.map(|v| v.join(",")).unwrap_or_default(),
                    b.map(|v| v.join(",")).unwrap_or_default(),
                );
            }
        }
    }
    for key in l.composition.keys().chain(r.composition.keys()) {
        report.instances += 1;
        let (a, b) = (l.composition.get(key), r.composition.get(key));
        if a != b {
            report.violation(
                &key.arity,
                "composition",
                crate::theory::show_values(&key.values),
                a.map(ToString::to_string).unwrap_or_default(),
                b.map(ToString::to_string).unwrap_or_default(),
            );
        }
    }
}
