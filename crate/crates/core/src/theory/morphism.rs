use std::collections::{BTreeMap, HashMap};

use super::engine::{cells_at, elemental_arities, for_each_fill, output_cell};
use super::presentation::has_no_inputs;
use super::validate::ValidationReport;
use super::{point, show_values, CellKey, Header, Label, Theory, TheoryError, Value};
use crate::arity::{gather, intern, Arity, ArityRef, EntryPlan};

/// A source cell: its dimension, arity and type, and label.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellRef {
    pub dim: usize,
    pub key: CellKey,
    pub label: Label,
}

/// A strict functor given by its action on the bounded cells of the source. Cells in
/// dimensions where the target is trivial are not stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoryMorphism {
    pub source: Header,
    pub target: Header,
    pub cells: BTreeMap<CellRef, Label>,
}

impl TheoryMorphism {
    pub fn image(&self, dim: usize, key: &CellKey, l: &Label) -> Option<Label> {
        if self.target.is_trivial(dim) {
            return Some(point());
        }
        self.cells.get(&CellRef { dim, key: key.clone(), label: l.clone() }).cloned()
    }

    /// Images of the values at the positions of `a`.
    pub fn map_values(&self, a: &ArityRef, values: &[Value]) -> Option<Vec<Value>> {
        map_values_with(a, values, &|d, k, l| self.image(d, k, l))
    }

    /// The identity of `t` on its cells within `bound`.
    pub fn identity(t: &dyn Theory, bound: usize) -> Result<Self, TheoryError> {
        let h = t.header();
        let mut cells = BTreeMap::new();
        for_each_source_cell(t, h, bound, &mut |c, _| {
            cells.insert(c.clone(), c.label.clone());
            Ok(())
        })?;
        Ok(TheoryMorphism { source: h, target: h, cells })
    }

    /// `self` followed by `g`.
    pub fn then(&self, g: &TheoryMorphism) -> Option<TheoryMorphism> {
        let mut cells = BTreeMap::new();
        for (c, l) in &self.cells {
            if g.target.is_trivial(c.dim) {
                continue;
            }
            let a = intern_ref(&c.key.arity, self.source)?;
            let ty = self.map_values(&a, &c.key.values)?;
            let out = g.image(c.dim, &CellKey::new(&a, &ty), l)?;
            cells.insert(c.clone(), out);
        }
        Some(TheoryMorphism { source: self.source, target: g.target, cells })
    }
}

fn intern_ref(key: &str, h: Header) -> Option<ArityRef> {
    crate::arity::intern_key(key, h.variance).ok()
}

pub(crate) fn point_key(a: &ArityRef) -> CellKey {
    CellKey { arity: intern(&Arity::point(a.variance())).key.clone(), values: vec![] }
}

pub(crate) fn map_values_with(
    a: &ArityRef,
    values: &[Value],
    lookup: &dyn Fn(usize, &CellKey, &Label) -> Option<Label>,
) -> Option<Vec<Value>> {
    let entries = a.entries();
    let mut out = Vec::with_capacity(values.len());
    for (p, v) in values.iter().enumerate() {
        match &entries[p] {
            EntryPlan::Colour => out.push(vec![lookup(0, &point_key(a), &v[0])?]),
            EntryPlan::Cell(pieces) => {
                let mut mv = Vec::with_capacity(v.len());
                for (pc, l) in pieces.iter().zip(v) {
                    let key = CellKey::new(&pc.arity, &gather(values, &pc.gather));
                    mv.push(lookup(pc.arity.dim(), &key, l)?);
                }
                out.push(mv);
            }
        }
    }
    Some(out)
}

/// Visits every cell of `t` within `bound` as a [`CellRef`] together with its arity,
/// dimension by dimension. Trivial dimensions yield their point cells.
fn for_each_source_cell(
    t: &dyn Theory,
    h: Header,
    bound: usize,
    f: &mut dyn FnMut(&CellRef, &ArityRef) -> Result<(), TheoryError>,
) -> Result<(), TheoryError> {
    for d in 0..=h.dim {
        for a in elemental_arities(d, bound, h.variance).iter() {
            for_each_fill(t, a, a.npos, &mut |ty| {
                for l in cells_at(t, a, ty)? {
                    f(&CellRef { dim: d, key: CellKey::new(a, ty), label: l }, a)?;
                }
                Ok(())
            })?;
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug)]
pub struct MorphismOptions {
    pub bound: usize,
    /// Maximum number of search nodes.
    pub budget: usize,
    /// Stop after this many solutions.
    pub limit: Option<usize>,
}

impl MorphismOptions {
    pub fn new(bound: usize) -> Self {
        MorphismOptions { bound, budget: 5_000_000, limit: None }
    }
}

struct Var {
    cell: CellRef,
    arity: ArityRef,
}

struct Square {
    arity: ArityRef,
    fill: Vec<Value>,
    output: Option<Label>,
}

struct Problem<'a> {
    target: &'a dyn Theory,
    vars: Vec<Var>,
    index: HashMap<CellRef, usize>,
    /// Squares to check once the variable at the index is assigned.
    squares: Vec<Vec<Square>>,
    /// Squares with no variables at all.
    ground: Vec<Square>,
}

impl<'a> Problem<'a> {
    fn new(s: &dyn Theory, t: &'a dyn Theory, bound: usize) -> Result<Self, TheoryError> {
        let sh = s.header();
        let th = t.header();
        if sh.dim != th.dim || sh.variance != th.variance {
            return Err(TheoryError::Unsupported("morphisms need equal dimension and variance".into()));
        }
        let mut vars = Vec::new();
        for_each_source_cell(s, sh, bound, &mut |c, a| {
            if !th.is_trivial(c.dim) {
                vars.push(Var { cell: c.clone(), arity: a.clone() });
            }
            Ok(())
        })?;
        let index: HashMap<CellRef, usize> = vars.iter().enumerate().map(|(i, v)| (v.cell.clone(), i)).collect();
        let mut squares: Vec<Vec<Square>> = (0..vars.len()).map(|_| Vec::new()).collect();
        let mut ground = Vec::new();
        let n = sh.dim;
        for a in elemental_arities(n + 1, bound, sh.variance).iter() {
            let last = a.npos - 1;
            for_each_fill(s, a, last, &mut |fill| {
                let output = match s.compose(a, fill) {
                    Ok(l) => Some(l),
                    Err(TheoryError::MissingUnit { .. }) => None,
                    Err(TheoryError::MissingComposition { .. }) if has_no_inputs(a) => None,
                    Err(e) => return Err(e),
                };
                let deps = std::cell::RefCell::new(Vec::new());
                let record = |d: usize, k: &CellKey, l: &Label| -> Option<Label> {
                    if let Some(&i) = index.get(&CellRef { dim: d, key: k.clone(), label: l.clone() }) {
                        deps.borrow_mut().push(i);
                    }
                    Some(l.clone())
                };
                map_values_with(a, fill, &record);
                let mut deps = deps.into_inner();
                if let Some(l) = &output {
                    let (oa, oty) = output_cell(a, fill);
                    let key = CellKey::new(&oa, &oty);
                    if let Some(&i) = index.get(&CellRef { dim: n, key, label: l.clone() }) {
                        deps.push(i);
                    }
                }
                let sq = Square { arity: a.clone(), fill: fill.to_vec(), output };
                match deps.iter().max() {
                    Some(&m) => squares[m].push(sq),
                    None => ground.push(sq),
                }
                Ok(())
            })?;
        }
        Ok(Problem { target: t, vars, index, squares, ground })
    }

    fn lookup<'b>(&'b self, assignment: &'b [Option<Label>]) -> impl Fn(usize, &CellKey, &Label) -> Option<Label> + 'b {
        let th = self.target.header();
        move |d, k, l| {
            if th.is_trivial(d) {
                return Some(point());
            }
            let i = *self.index.get(&CellRef { dim: d, key: k.clone(), label: l.clone() })?;
            assignment[i].clone()
        }
    }

    fn domain(&self, v: usize, assignment: &[Option<Label>]) -> Result<(CellKey, Vec<Label>), TheoryError> {
        let var = &self.vars[v];
        let lookup = self.lookup(assignment);
        let Some(ty) = map_values_with(&var.arity, &var.cell.key.values, &lookup) else {
            return Ok((CellKey::new(&var.arity, &[]), vec![]));
        };
        let cells = cells_at(self.target, &var.arity, &ty)?;
        Ok((CellKey::new(&var.arity, &ty), cells))
    }

    /// `None` when the square commutes, otherwise the expected and actual images.
    fn square_fails(&self, sq: &Square, assignment: &[Option<Label>]) -> Result<Option<(String, String)>, TheoryError> {
        let lookup = self.lookup(assignment);
        let Some(mapped) = map_values_with(&sq.arity, &sq.fill, &lookup) else {
            return Ok(Some(("an image".into(), "unmapped cell".into())));
        };
        let n = sq.arity.dim() - 1;
        let got = match self.target.compose(&sq.arity, &mapped) {
            Ok(l) => Some(l),
            Err(TheoryError::MissingUnit { .. }) => None,
            Err(TheoryError::MissingComposition { .. }) if has_no_inputs(&sq.arity) => None,
            Err(e) => return Err(e),
        };
        let want = match &sq.output {
            None => None,
            Some(l) => {
                let (oa, oty) = output_cell(&sq.arity, &sq.fill);
                lookup(n, &CellKey::new(&oa, &oty), l)
            }
        };
        let ok = match (&sq.output, &want, &got) {
            (None, _, _) => true,
            (Some(_), Some(w), Some(g)) => w == g,
            _ => false,
        };
        let show = |l: &Option<Label>| l.as_deref().unwrap_or("none").to_string();
        Ok((!ok).then(|| (show(&want), show(&got))))
    }
}

/// All strict morphisms `s → t` on cells within the bound, in search order.
pub fn enumerate_morphisms(
    s: &dyn Theory,
    t: &dyn Theory,
    opts: MorphismOptions,
) -> Result<Vec<TheoryMorphism>, TheoryError> {
    enumerate_morphisms_with(s, t, opts, &|_, _, _| true)
}

/// Like [`enumerate_morphisms`], keeping only images accepted by `allow`, which sees the
/// source cell, the target key and the candidate image.
pub fn enumerate_morphisms_with(
    s: &dyn Theory,
    t: &dyn Theory,
    opts: MorphismOptions,
    allow: &dyn Fn(&CellRef, &CellKey, &Label) -> bool,
) -> Result<Vec<TheoryMorphism>, TheoryError> {
    let problem = Problem::new(s, t, opts.bound)?;
    let mut assignment = vec![None; problem.vars.len()];
    for sq in &problem.ground {
        if problem.square_fails(sq, &assignment)?.is_some() {
            return Ok(vec![]);
        }
    }
    let mut out = Vec::new();
    let mut nodes = 0usize;
    search(&problem, 0, &mut assignment, &mut nodes, opts, allow, &mut |asg| {
        let cells = problem
            .vars
            .iter()
            .zip(asg)
            .map(|(v, l)| (v.cell.clone(), l.clone().expect("assigned")))
            .collect();
        out.push(TheoryMorphism { source: s.header(), target: t.header(), cells });
        out.len()
    })?;
    Ok(out)
}

/// Depth-first search; returns `true` once the solution limit is reached.
fn search(
    p: &Problem,
    v: usize,
    assignment: &mut Vec<Option<Label>>,
    nodes: &mut usize,
    opts: MorphismOptions,
    allow: &dyn Fn(&CellRef, &CellKey, &Label) -> bool,
    emit: &mut dyn FnMut(&[Option<Label>]) -> usize,
) -> Result<bool, TheoryError> {
    if v == p.vars.len() {
        let found = emit(assignment);
        return Ok(opts.limit.is_some_and(|m| found >= m));
    }
    let (key, dom) = p.domain(v, assignment)?;
    for l in dom {
        if !allow(&p.vars[v].cell, &key, &l) {
            continue;
        }
        *nodes += 1;
        if *nodes > opts.budget {
            return Err(TheoryError::BudgetExceeded(opts.budget));
        }
        assignment[v] = Some(l);
        let mut ok = true;
        for sq in &p.squares[v] {
            if p.square_fails(sq, assignment)?.is_some() {
                ok = false;
                break;
            }
        }
        let stop = ok && search(p, v + 1, assignment, nodes, opts, allow, emit)?;
        assignment[v] = None;
        if stop {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Checks totality, typing and the composition squares of `f: s → t` within `bound`.
pub fn validate_morphism(s: &dyn Theory, t: &dyn Theory, f: &TheoryMorphism, bound: usize) -> ValidationReport {
    let mut r = ValidationReport::default();
    let problem = match Problem::new(s, t, bound) {
        Ok(p) => p,
        Err(e) => {
            r.violation("", "error", String::new(), String::new(), e.to_string());
            return r;
        }
    };
    let assignment: Vec<Option<Label>> = problem.vars.iter().map(|v| f.cells.get(&v.cell).cloned()).collect();
    for (i, v) in problem.vars.iter().enumerate() {
        r.instances += 1;
        let Some(img) = &assignment[i] else {
            r.violation(&v.cell.key.arity, "totality", show_values(&v.cell.key.values), "an image".into(), format!("nothing for {}", v.cell.label));
            continue;
        };
        match problem.domain(i, &assignment) {
            Ok((_, dom)) if dom.contains(img) => {}
            Ok((_, dom)) => r.violation(&v.cell.key.arity, "typing", format!("{} over {}", v.cell.label, show_values(&v.cell.key.values)), dom.join("|"), img.to_string()),
            Err(e) => r.violation(&v.cell.key.arity, "error", String::new(), String::new(), e.to_string()),
        }
    }
    for sq in problem.ground.iter().chain(problem.squares.iter().flatten()) {
        r.instances += 1;
        match problem.square_fails(sq, &assignment) {
            Ok(None) => {}
            Ok(Some((want, got))) => r.violation(&sq.arity.key, "composition-square", show_values(&sq.fill), want, got),
            Err(e) => r.violation(&sq.arity.key, "error", show_values(&sq.fill), String::new(), e.to_string()),
        }
    }
    r.finish()
}
