use std::sync::Arc;

use itertools::Itertools;

use crate::arity::{ArityRef, EntryPlan};
use crate::ordcomb::Variance;
use crate::theory::{
    label, materialize, point, Enrichment, FinCategory, Header, Label, Theory, TheoryError, TheoryPresentation, Value, ID,
};

/// The theory whose every stratum above the trivial ones is a single point.
#[derive(Clone, Copy, Debug)]
pub struct Terminal(pub Header);

impl Theory for Terminal {
    fn header(&self) -> Header {
        self.0
    }

    fn cells(&self, a: &ArityRef, _ty: &[Value]) -> Result<Vec<Label>, TheoryError> {
        self.0.check_bound(a)?;
        Ok(vec![point()])
    }

    fn compose(&self, a: &ArityRef, _fill: &[Value]) -> Result<Label, TheoryError> {
        self.0.check_bound(a)?;
        Ok(point())
    }
}

pub fn terminal_theory(dim: usize, colour_depth: usize, variance: Variance, bound: usize) -> TheoryPresentation {
    let h = Header { dim, variance, colour_depth: colour_depth.min(dim), bound, enrichment: Enrichment::Sets };
    materialize(&Terminal(h), bound).expect("terminal theory")
}

/// For a position holding a multimap of a 1-theory (or an object of a 0-theory
/// composite), the input element indices and the output element index of each piece,
/// relative to the level-0 objects the piece connects.
pub(crate) fn fibres(a: &ArityRef, p: usize, from: usize) -> Vec<(Vec<usize>, usize)> {
    let EntryPlan::Cell(pieces) = &a.entries()[p] else { return vec![] };
    let base_in = a.offsets[0][from];
    let base_out = a.offsets[0][from + 1];
    pieces
        .iter()
        .map(|pc| {
            let (out, ins) = pc.gather.split_last().expect("piece output");
            (ins.iter().map(|s| s.src as usize - base_in).collect(), out.src as usize - base_out)
        })
        .collect()
}

/// Linear orders are written as the 1-based sequence of their elements.
pub fn order_label(order: &[usize]) -> Label {
    label(&format!("<{}>", order.iter().map(|i| (i + 1).to_string()).join(",")))
}

pub fn parse_order(l: &str) -> Option<Vec<usize>> {
    let inner = l.strip_prefix('<')?.strip_suffix('>')?;
    if inner.is_empty() {
        return Some(vec![]);
    }
    inner.split(',').map(|s| s.parse::<usize>().ok()?.checked_sub(1)).collect()
}

/// The associative operad with one colour: multimaps are linear orders of the inputs.
#[derive(Clone, Copy, Debug)]
pub struct Assoc {
    pub bound: usize,
}

impl Assoc {
    pub const COLOUR: &'static str = "*";
}

impl Theory for Assoc {
    fn header(&self) -> Header {
        Header { dim: 1, variance: Variance::Symmetric, colour_depth: 1, bound: self.bound, enrichment: Enrichment::Sets }
    }

    fn cells(&self, a: &ArityRef, _ty: &[Value]) -> Result<Vec<Label>, TheoryError> {
        self.header().check_bound(a)?;
        if a.dim() == 0 {
            return Ok(vec![label(Self::COLOUR)]);
        }
        let s = a.arity.levels()[0].objects[0].len();
        Ok((0..s).permutations(s).map(|p| order_label(&p)).collect())
    }

    fn compose(&self, a: &ArityRef, fill: &[Value]) -> Result<Label, TheoryError> {
        self.header().check_bound(a)?;
        let k = a.arity.levels()[1].objects[0].len();
        let mut order = vec![0usize];
        for t in (0..k).rev() {
            let p = a.position(1, 0, t);
            let fib = fibres(a, p, t);
            let mut next = Vec::new();
            for j in &order {
                let c = fib.iter().position(|(_, o)| o == j).expect("fibre for element");
                let local = parse_order(&fill[p][c]).ok_or_else(|| TheoryError::IllTyped(fill[p][c].to_string()))?;
                next.extend(local.iter().map(|&i| fib[c].0[i]));
            }
            order = next;
        }
        Ok(order_label(&order))
    }
}

pub fn assoc_operad(bound: usize) -> TheoryPresentation {
    materialize(&Assoc { bound }, bound).expect("associative operad")
}

/// A 1-theory with the given colours and only unary identities.
#[derive(Clone, Debug)]
pub struct Discrete {
    pub colours: Vec<Label>,
    pub bound: usize,
}

impl Theory for Discrete {
    fn header(&self) -> Header {
        Header { dim: 1, variance: Variance::Symmetric, colour_depth: 1, bound: self.bound, enrichment: Enrichment::Sets }
    }

    fn cells(&self, a: &ArityRef, ty: &[Value]) -> Result<Vec<Label>, TheoryError> {
        self.header().check_bound(a)?;
        if a.dim() == 0 {
            return Ok(self.colours.clone());
        }
        let unary = a.arity.levels()[0].objects[0].len() == 1;
        Ok(if unary && ty[0] == ty[1] { vec![label(ID)] } else { vec![] })
    }

    fn compose(&self, a: &ArityRef, _fill: &[Value]) -> Result<Label, TheoryError> {
        self.header().check_bound(a)?;
        Ok(label(ID))
    }
}

/// Colours are named `x1, x2, ...`.
pub fn discrete_category(k: usize, bound: usize) -> TheoryPresentation {
    let colours = (1..=k).map(|i| label(&format!("x{i}"))).collect();
    materialize(&Discrete { colours, bound }, bound).expect("discrete category")
}

pub fn init_operad(bound: usize) -> TheoryPresentation {
    materialize(&Discrete { colours: vec![label(Assoc::COLOUR)], bound }, bound).expect("initial operad")
}

/// The commutative operad, without its nullary operation when `unital` is false.
#[derive(Clone, Copy, Debug)]
pub struct Commutative {
    pub unital: bool,
    pub bound: usize,
}

impl Theory for Commutative {
    fn header(&self) -> Header {
        Header { dim: 1, variance: Variance::Symmetric, colour_depth: 1, bound: self.bound, enrichment: Enrichment::Sets }
    }

    fn cells(&self, a: &ArityRef, _ty: &[Value]) -> Result<Vec<Label>, TheoryError> {
        self.header().check_bound(a)?;
        let nullary = a.dim() == 1 && a.arity.levels()[0].objects[0].is_empty();
        Ok(if nullary && !self.unital { vec![] } else { vec![point()] })
    }

    fn compose(&self, a: &ArityRef, _fill: &[Value]) -> Result<Label, TheoryError> {
        self.header().check_bound(a)?;
        Ok(point())
    }
}

pub fn commutative_operad(unital: bool, bound: usize) -> TheoryPresentation {
    materialize(&Commutative { unital, bound }, bound).expect("commutative operad")
}

/// A finite category as a 1-theory with only unary multimaps.
#[derive(Clone, Debug)]
pub struct CategoryTheory {
    pub category: FinCategory,
    pub bound: usize,
}

impl Theory for CategoryTheory {
    fn header(&self) -> Header {
        Header { dim: 1, variance: Variance::Symmetric, colour_depth: 1, bound: self.bound, enrichment: Enrichment::Sets }
    }

    fn cells(&self, a: &ArityRef, ty: &[Value]) -> Result<Vec<Label>, TheoryError> {
        self.header().check_bound(a)?;
        if a.dim() == 0 {
            return Ok(self.category.objects.clone());
        }
        let unary = a.arity.levels()[0].objects[0].len() == 1;
        Ok(if unary { self.category.hom(&ty[0][0], &ty[1][0]) } else { vec![] })
    }

    fn compose(&self, a: &ArityRef, fill: &[Value]) -> Result<Label, TheoryError> {
        self.header().check_bound(a)?;
        let steps = a.arity.levels()[1].objects[0].len();
        if a.arity.levels()[0].objects[0].len() != 1 {
            return Err(TheoryError::MissingUnit { key: a.key.clone() });
        }
        let mut acc = self
            .category
            .identity(&fill[0][0])
            .cloned()
            .ok_or_else(|| TheoryError::IllTyped(format!("{} is not an object", fill[0][0])))?;
        for t in 0..steps {
            let f = &fill[a.position(1, 0, t)][0];
            acc = self
                .category
                .compose(&acc, f)
                .cloned()
                .ok_or_else(|| TheoryError::IllTyped(format!("{f}∘{acc} undefined")))?;
        }
        Ok(acc)
    }
}

pub fn category_theory(category: &FinCategory, bound: usize) -> TheoryPresentation {
    materialize(&CategoryTheory { category: category.clone(), bound }, bound).expect("category as a 1-theory")
}

/// The category with objects `0, 1` and one arrow `f: 0 → 1` besides identities.
pub fn walking_arrow() -> FinCategory {
    let (o0, o1) = (label("0"), label("1"));
    let (i0, i1, f) = (label("id_0"), label("id_1"), label("f"));
    let mut c = FinCategory { objects: vec![o0.clone(), o1.clone()], ..Default::default() };
    for (a, s, t) in [(&i0, &o0, &o0), (&i1, &o1, &o1), (&f, &o0, &o1)] {
        c.arrows.insert(a.clone(), (s.clone(), t.clone()));
    }
    c.identities.insert(o0, i0.clone());
    c.identities.insert(o1, i1.clone());
    for (x, y, z) in [(&i0, &i0, &i0), (&i1, &i1, &i1), (&i0, &f, &f), (&f, &i1, &f)] {
        c.composition.insert((x.clone(), y.clone()), z.clone());
    }
    c
}

/// The truth values `0 ≤ 1` as a one-colour 1-theory in finite categories: every
/// multimap category is the poset `0 → 1` and composition is the minimum.
#[derive(Clone, Copy, Debug)]
pub struct Truth {
    pub bound: usize,
}

impl Truth {
    pub fn poset() -> FinCategory {
        let (f, t) = (label("0"), label("1"));
        let (ff, ft, tt) = (label("0<=0"), label("0<=1"), label("1<=1"));
        let mut c = FinCategory { objects: vec![f.clone(), t.clone()], ..Default::default() };
        c.arrows.insert(ff.clone(), (f.clone(), f.clone()));
        c.arrows.insert(ft.clone(), (f.clone(), t.clone()));
        c.arrows.insert(tt.clone(), (t.clone(), t.clone()));
        c.identities.insert(f, ff.clone());
        c.identities.insert(t, tt.clone());
        for (x, y, z) in [(&ff, &ff, &ff), (&ff, &ft, &ft), (&ft, &tt, &ft), (&tt, &tt, &tt)] {
            c.composition.insert((x.clone(), y.clone()), z.clone());
        }
        c
    }

    fn inputs(a: &ArityRef) -> std::ops::Range<usize> {
        a.offsets[1][0]..a.offsets[1][1]
    }
}

impl Theory for Truth {
    fn header(&self) -> Header {
        Header {
            dim: 1,
            variance: Variance::Symmetric,
            colour_depth: 1,
            bound: self.bound,
            enrichment: Enrichment::FiniteCategories,
        }
    }

    fn cells(&self, a: &ArityRef, _ty: &[Value]) -> Result<Vec<Label>, TheoryError> {
        self.header().check_bound(a)?;
        Ok(if a.dim() == 0 { vec![point()] } else { vec![label("0"), label("1")] })
    }

    fn compose(&self, a: &ArityRef, fill: &[Value]) -> Result<Label, TheoryError> {
        self.header().check_bound(a)?;
        let all = Self::inputs(a).flat_map(|p| &fill[p]).all(|l| &**l == "1");
        Ok(label(if all { "1" } else { "0" }))
    }

    fn category(&self, a: &ArityRef, _ty: &[Value]) -> Result<Option<Arc<FinCategory>>, TheoryError> {
        self.header().check_bound(a)?;
        Ok((a.dim() == 1).then(|| Arc::new(Self::poset())))
    }

    fn compose_arrows(&self, a: &ArityRef, fill: &[Value]) -> Result<Label, TheoryError> {
        let (mut src, mut tgt) = (true, true);
        for arrow in Self::inputs(a).flat_map(|p| &fill[p]) {
            let (s, t) = arrow.split_once("<=").ok_or_else(|| TheoryError::IllTyped(arrow.to_string()))?;
            src &= s == "1";
            tgt &= t == "1";
        }
        let bit = |b: bool| if b { "1" } else { "0" };
        Ok(label(&format!("{}<={}", bit(src), bit(tgt))))
    }
}
