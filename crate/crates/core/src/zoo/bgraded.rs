use std::collections::{BTreeMap, HashMap};

use itertools::Itertools;
use thiserror::Error;

use super::base::{BaseMorphism, BasePresentation, End};
use crate::theory::{point, Label, ValidationReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BGradedError {
    #[error("{0} is not a morphism of the base")]
    NotInBase(String),
    #[error("ill-typed composite over {0}")]
    IllTyped(String),
    #[error("missing composite over {0}")]
    MissingComposite(String),
    #[error("invalid category: {0}")]
    InvalidCategory(String),
    #[error("arity {arity} exceeds the base bound {bound}")]
    BoundExceeded { arity: String, bound: usize },
    #[error("unsupported: {0}")]
    Unsupported(String),
}

/// The type of a multimap: an indecomposable degree and the colours on its points.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Typed {
    pub degree: BaseMorphism,
    pub inputs: Vec<Label>,
    pub outputs: Vec<Label>,
}

/// A general multimap: a degree, colours on its points and one label per block.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Labelled {
    pub degree: BaseMorphism,
    pub inputs: Vec<Label>,
    pub outputs: Vec<Label>,
    pub labels: Vec<Label>,
}

impl Labelled {
    pub fn restrict(&self, blocks: &[usize]) -> Labelled {
        let r = self.degree.restrict(blocks);
        let mut chosen = blocks.to_vec();
        chosen.sort_unstable();
        Labelled {
            inputs: r.sources.iter().map(|&i| self.inputs[i].clone()).collect(),
            outputs: r.targets.iter().map(|&j| self.outputs[j].clone()).collect(),
            labels: chosen.iter().map(|&b| self.labels[b].clone()).collect(),
            degree: r.morphism,
        }
    }

    pub fn block(&self, b: usize) -> (Typed, Label) {
        let r = self.restrict(&[b]);
        (Typed { degree: r.degree, inputs: r.inputs, outputs: r.outputs }, r.labels[0].clone())
    }

    /// Sorts blocks that carry no endpoints by label, the only freedom left in the form.
    fn normalize(mut self) -> Self {
        let pairs: Vec<(Vec<End>, Label)> =
            self.degree.blocks.drain(..).zip(self.labels.drain(..)).sorted().collect();
        (self.degree.blocks, self.labels) = pairs.into_iter().unzip();
        self
    }
}

/// A connected two-level composite: `upper` on top of `lower`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CompositeKey {
    pub lower: Labelled,
    pub upper: Labelled,
}

/// A 1-theory graded by a base with free decomposition: colours per indecomposable
/// object, multimaps per indecomposable degree, units and connected composites.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BGradedOneTheory {
    pub colours: BTreeMap<Label, Vec<Label>>,
    pub multimaps: BTreeMap<Typed, Vec<Label>>,
    pub units: BTreeMap<(Label, Label), Label>,
    pub composition: BTreeMap<CompositeKey, Label>,
}

/// The data of a graded 1-theory as rules, tabulated by [`materialize_bgraded`].
pub trait BGradedSource {
    fn colours(&self, generator: &Label) -> Vec<Label>;
    fn multimaps(&self, key: &Typed) -> Vec<Label>;
    fn unit(&self, generator: &Label, colour: &Label) -> Label;
    fn compose(&self, key: &CompositeKey) -> Result<Label, BGradedError>;
}

type ByDegree<'a> = HashMap<&'a BaseMorphism, Vec<(&'a Typed, &'a Label)>>;

fn by_degree(multimaps: &BTreeMap<Typed, Vec<Label>>) -> ByDegree<'_> {
    let mut out: ByDegree<'_> = HashMap::new();
    for (k, ls) in multimaps {
        out.entry(&k.degree).or_default().extend(ls.iter().map(|l| (k, l)));
    }
    out
}

/// Every labelling of `m` by the multimaps in `idx`, with the given input colours.
fn labellings(idx: &ByDegree<'_>, m: &BaseMorphism, inputs: Option<&[Label]>) -> Vec<Labelled> {
    let shapes: Vec<_> = (0..m.blocks.len()).map(|b| m.restrict(&[b])).collect();
    let choices: Vec<Vec<(&Typed, &Label)>> = shapes
        .iter()
        .map(|r| {
            idx.get(&r.morphism)
                .map(|v| {
                    v.iter()
                        .filter(|(t, _)| {
                            inputs.is_none_or(|ins| r.sources.iter().zip(&t.inputs).all(|(&i, c)| &ins[i] == c))
                        })
                        .copied()
                        .collect()
                })
                .unwrap_or_default()
        })
        .collect();
    let mut out = Vec::new();
    for pick in choices.into_iter().multi_cartesian_product() {
        let mut ins = vec![None; m.source.len()];
        let mut outs = vec![None; m.target.len()];
        for (r, (t, _)) in shapes.iter().zip(&pick) {
            for (&i, c) in r.sources.iter().zip(&t.inputs) {
                ins[i] = Some(c.clone());
            }
            for (&j, c) in r.targets.iter().zip(&t.outputs) {
                outs[j] = Some(c.clone());
            }
        }
        out.push(Labelled {
            degree: m.clone(),
            inputs: ins.into_iter().map(|c| c.expect("points lie in blocks")).collect(),
            outputs: outs.into_iter().map(|c| c.expect("points lie in blocks")).collect(),
            labels: pick.iter().map(|(_, l)| (*l).clone()).collect(),
        });
    }
    out
}

fn colourings(base: &BasePresentation, colours: &BTreeMap<Label, Vec<Label>>, word: &[usize]) -> Vec<Vec<Label>> {
    word.iter()
        .map(|&g| colours.get(&base.generators[g]).cloned().unwrap_or_default())
        .multi_cartesian_product()
        .collect()
}

/// Every connected two-level composite of multimaps of `x` over the skeleton.
fn composites(base: &BasePresentation, x: &BGradedOneTheory) -> Vec<CompositeKey> {
    let idx = by_degree(&x.multimaps);
    let mut out = Vec::new();
    for (f, g) in base.connected_pairs() {
        for lower in labellings(&idx, &base.morphisms[f], None) {
            for upper in labellings(&idx, &base.morphisms[g], Some(&lower.outputs)) {
                out.push(CompositeKey { lower: lower.clone(), upper });
            }
        }
    }
    out
}

/// Tabulates a rule-given theory over every indecomposable degree and connected
/// composite of the skeleton.
pub fn materialize_bgraded(base: &BasePresentation, src: &dyn BGradedSource) -> Result<BGradedOneTheory, BGradedError> {
    let mut x = BGradedOneTheory::default();
    for g in &base.generators {
        x.colours.insert(g.clone(), src.colours(g));
    }
    for d in base.indecomposables() {
        let m = &base.morphisms[d];
        for inputs in colourings(base, &x.colours, &m.source) {
            for outputs in colourings(base, &x.colours, &m.target) {
                let key = Typed { degree: m.clone(), inputs: inputs.clone(), outputs };
                let mut ls = src.multimaps(&key);
                ls.sort();
                ls.dedup();
                if !ls.is_empty() {
                    x.multimaps.insert(key, ls);
                }
            }
        }
    }
    for (g, cs) in &x.colours {
        for c in cs {
            x.units.insert((g.clone(), c.clone()), src.unit(g, c));
        }
    }
    for key in composites(base, &x) {
        let l = src.compose(&key)?;
        x.composition.insert(key, l);
    }
    Ok(x)
}

/// `upper ∘ lower` for general multimaps, block by block through the connected composites.
pub fn compose_labelled(x: &BGradedOneTheory, lower: &Labelled, upper: &Labelled) -> Result<Labelled, BGradedError> {
    let what = || format!("{:?} then {:?}", lower.degree, upper.degree);
    if lower.outputs != upper.inputs {
        return Err(BGradedError::IllTyped(what()));
    }
    let glued = lower.degree.glue(&upper.degree).ok_or_else(|| BGradedError::IllTyped(what()))?;
    let mut labels = Vec::with_capacity(glued.components.len());
    for (fs, gs) in &glued.components {
        let key = CompositeKey { lower: lower.restrict(fs), upper: upper.restrict(gs) };
        labels.push(x.composition.get(&key).cloned().ok_or_else(|| BGradedError::MissingComposite(what()))?);
    }
    Ok(Labelled { degree: glued.composite, inputs: lower.inputs.clone(), outputs: upper.outputs.clone(), labels }
        .normalize())
}

/// The identity multimap on a coloured word.
pub fn identity_labelled(base: &BasePresentation, x: &BGradedOneTheory, word: &[usize], colours: &[Label]) -> Option<Labelled> {
    let degree = BaseMorphism::identity(word);
    let labels = (0..word.len())
        .map(|i| x.units.get(&(base.generators[word[i]].clone(), colours[i].clone())).cloned())
        .collect::<Option<Vec<_>>>()?;
    Some(Labelled { degree, inputs: colours.to_vec(), outputs: colours.to_vec(), labels })
}

struct Terminal;

impl BGradedSource for Terminal {
    fn colours(&self, _: &Label) -> Vec<Label> {
        vec![point()]
    }
    fn multimaps(&self, _: &Typed) -> Vec<Label> {
        vec![point()]
    }
    fn unit(&self, _: &Label, _: &Label) -> Label {
        point()
    }
    fn compose(&self, _: &CompositeKey) -> Result<Label, BGradedError> {
        Ok(point())
    }
}

pub fn terminal_bgraded(base: &BasePresentation) -> BGradedOneTheory {
    materialize_bgraded(base, &Terminal).expect("terminal composites exist")
}

fn typed_ok(base: &BasePresentation, x: &BGradedOneTheory, t: &Typed) -> Result<(), String> {
    if !t.degree.is_indecomposable() || base.position(&t.degree).is_none() {
        return Err("degree is not an indecomposable of the base".into());
    }
    let ok = |word: &[usize], cs: &[Label]| {
        word.len() == cs.len()
            && word.iter().zip(cs).all(|(&g, c)| x.colours.get(&base.generators[g]).is_some_and(|v| v.contains(c)))
    };
    if !ok(&t.degree.source, &t.inputs) || !ok(&t.degree.target, &t.outputs) {
        return Err("colours do not match the degree".into());
    }
    Ok(())
}

fn labelled_ok(base: &BasePresentation, x: &BGradedOneTheory, l: &Labelled) -> Result<(), String> {
    if l.labels.len() != l.degree.blocks.len() || base.position(&l.degree).is_none() {
        return Err("degree is not a morphism of the base".into());
    }
    for b in 0..l.labels.len() {
        let (t, label) = l.block(b);
        typed_ok(base, x, &t)?;
        if !x.multimaps.get(&t).is_some_and(|v| v.contains(&label)) {
            return Err(format!("{label} is not a multimap of its type"));
        }
    }
    Ok(())
}

/// Checks keys against the base, units, completeness of the connected composites, the
/// unit laws and associativity of the composition extended along free decompositions.
pub fn bgraded_validate(base: &BasePresentation, x: &BGradedOneTheory) -> ValidationReport {
    let mut r = ValidationReport::default();
    let show = |m: &BaseMorphism| base.show(m);
    for g in &base.generators {
        if !x.colours.contains_key(g) {
            r.violation(g, "colours", String::new(), "colours".into(), "none".into());
        }
    }
    for g in x.colours.keys() {
        if !base.generators.contains(g) {
            r.violation(g, "colours", String::new(), "a generator".into(), g.to_string());
        }
    }
    for t in x.multimaps.keys() {
        r.instances += 1;
        if let Err(e) = typed_ok(base, x, t) {
            r.violation(&show(&t.degree), "multimap-key", format!("{:?} -> {:?}", t.inputs, t.outputs), "well typed".into(), e);
        }
    }
    for (g, cs) in &x.colours {
        let Some(gi) = base.generator_index(g) else { continue };
        for c in cs {
            r.instances += 1;
            let t = Typed { degree: BaseMorphism::identity(&[gi]), inputs: vec![c.clone()], outputs: vec![c.clone()] };
            match x.units.get(&(g.clone(), c.clone())) {
                Some(u) if x.multimaps.get(&t).is_some_and(|v| v.contains(u)) => {}
                other => r.violation(&show(&t.degree), "unit", c.to_string(), "a unit multimap".into(), format!("{other:?}")),
            }
        }
    }
    for (key, out) in &x.composition {
        r.instances += 1;
        let witness = || format!("{:?} / {:?}", key.lower.labels, key.upper.labels);
        let arity = show(&key.lower.degree);
        if let Err(e) = labelled_ok(base, x, &key.lower).and_then(|_| labelled_ok(base, x, &key.upper)) {
            r.violation(&arity, "composite-key", witness(), "well typed".into(), e);
            continue;
        }
        let glued = key.lower.degree.glue(&key.upper.degree);
        let Some(glued) = glued.filter(|g| g.composite.is_indecomposable() && key.lower.outputs == key.upper.inputs) else {
            r.violation(&arity, "composite-key", witness(), "connected composable pair".into(), "not".into());
            continue;
        };
        let t = Typed { degree: glued.composite, inputs: key.lower.inputs.clone(), outputs: key.upper.outputs.clone() };
        if !x.multimaps.get(&t).is_some_and(|v| v.contains(out)) {
            r.violation(&show(&t.degree), "composite-type", witness(), "a multimap of the composite type".into(), out.to_string());
        }
    }
    if !r.passed() {
        return r.finish();
    }
    for key in composites(base, x) {
        r.instances += 1;
        if !x.composition.contains_key(&key) {
            r.violation(
                &show(&key.lower.degree),
                "composite-missing",
                format!("{:?} / {:?} over {}", key.lower.labels, key.upper.labels, show(&key.upper.degree)),
                "an entry".into(),
                "none".into(),
            );
        }
    }
    if !r.passed() {
        return r.finish();
    }
    check_unit_laws(base, x, &mut r);
    check_associativity(base, x, &mut r);
    r.finish()
}

fn check_unit_laws(base: &BasePresentation, x: &BGradedOneTheory, r: &mut ValidationReport) {
    for (t, ls) in &x.multimaps {
        for l in ls {
            r.instances += 1;
            let m = Labelled { degree: t.degree.clone(), inputs: t.inputs.clone(), outputs: t.outputs.clone(), labels: vec![l.clone()] };
            let below = identity_labelled(base, x, &t.degree.source, &t.inputs);
            let above = identity_labelled(base, x, &t.degree.target, &t.outputs);
            let (Some(below), Some(above)) = (below, above) else { continue };
            for (law, got) in [("left-unit", compose_labelled(x, &below, &m)), ("right-unit", compose_labelled(x, &m, &above))] {
                match got {
                    Ok(v) if v == m => {}
                    other => r.violation(&base.show(&t.degree), law, l.to_string(), l.to_string(), format!("{other:?}")),
                }
            }
        }
    }
}

fn check_associativity(base: &BasePresentation, x: &BGradedOneTheory, r: &mut ValidationReport) {
    let idx = by_degree(&x.multimaps);
    for (f, mf) in base.morphisms.iter().enumerate() {
        for w in &base.objects {
            for &g in base.hom(&mf.target, w) {
                let Some(gf) = base.compose(f, g) else { continue };
                for v in &base.objects {
                    for &h in base.hom(w, v) {
                        let Some(all) = base.compose(gf, h) else { continue };
                        if base.compose(g, h).is_none() || !base.morphisms[all].is_indecomposable() {
                            continue;
                        }
                        for a in labellings(&idx, mf, None) {
                            for b in labellings(&idx, &base.morphisms[g], Some(&a.outputs)) {
                                for c in labellings(&idx, &base.morphisms[h], Some(&b.outputs)) {
                                    r.instances += 1;
                                    let left = compose_labelled(x, &a, &b).and_then(|ab| compose_labelled(x, &ab, &c));
                                    let right = compose_labelled(x, &b, &c).and_then(|bc| compose_labelled(x, &a, &bc));
                                    if left != right {
                                        r.violation(
                                            &base.show(&base.morphisms[all]),
                                            "associativity",
                                            format!("{:?} / {:?} / {:?}", a.labels, b.labels, c.labels),
                                            format!("{left:?}"),
                                            format!("{right:?}"),
                                        );
                                        return;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}

/// A field theory: a degree-preserving morphism from the terminal graded theory, given
/// by a colour per generator and a multimap per indecomposable degree.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct FieldTheory {
    pub colours: BTreeMap<Label, Label>,
    pub multimaps: BTreeMap<BaseMorphism, Label>,
}

struct Constraint {
    lower: Vec<usize>,
    upper: Vec<usize>,
    result: usize,
    f: usize,
    g: usize,
}

/// Every field theory in `x`, found by backtracking over the indecomposable degrees with
/// the composites checked as soon as their degrees are assigned.
pub fn field_theories(base: &BasePresentation, x: &BGradedOneTheory) -> Result<Vec<FieldTheory>, BGradedError> {
    let degrees = base.indecomposables();
    let slot: HashMap<usize, usize> = degrees.iter().enumerate().map(|(s, &d)| (d, s)).collect();
    let slot_of = |m: &BaseMorphism| {
        base.position(m).and_then(|i| slot.get(&i).copied()).ok_or_else(|| BGradedError::NotInBase(base.show(m)))
    };
    let mut by_last: Vec<Vec<Constraint>> = (0..degrees.len()).map(|_| Vec::new()).collect();
    for (f, g) in base.connected_pairs() {
        let (mf, mg) = (&base.morphisms[f], &base.morphisms[g]);
        let glued = mf.glue(mg).expect("composable");
        let lower = (0..mf.blocks.len()).map(|b| slot_of(&mf.restrict(&[b]).morphism)).collect::<Result<Vec<_>, _>>()?;
        let upper = (0..mg.blocks.len()).map(|b| slot_of(&mg.restrict(&[b]).morphism)).collect::<Result<Vec<_>, _>>()?;
        let result = slot_of(&glued.composite)?;
        let last = lower.iter().chain(&upper).chain([&result]).copied().max().expect("nonempty");
        by_last[last].push(Constraint { lower, upper, result, f, g });
    }
    let gens = &base.generators;
    let choices: Vec<Vec<Label>> = gens.iter().map(|g| x.colours.get(g).cloned().unwrap_or_default()).collect();
    let mut out = Vec::new();
    for pick in choices.into_iter().multi_cartesian_product() {
        let colour = |w: &[usize]| w.iter().map(|&g| pick[g].clone()).collect::<Vec<_>>();
        let candidates: Vec<Vec<Label>> = degrees
            .iter()
            .map(|&d| {
                let m = &base.morphisms[d];
                let t = Typed { degree: m.clone(), inputs: colour(&m.source), outputs: colour(&m.target) };
                let all = x.multimaps.get(&t).cloned().unwrap_or_default();
                if m.source.len() == 1 && *m == BaseMorphism::identity(&m.source) {
                    let u = x.units.get(&(gens[m.source[0]].clone(), pick[m.source[0]].clone()));
                    all.into_iter().filter(|l| Some(l) == u).collect()
                } else {
                    all
                }
            })
            .collect();
        let labelled = |m: &BaseMorphism, assigned: &[Label], slots: &[usize]| Labelled {
            degree: m.clone(),
            inputs: colour(&m.source),
            outputs: colour(&m.target),
            labels: slots.iter().map(|&s| assigned[s].clone()).collect(),
        };
        let holds = |c: &Constraint, assigned: &[Label]| -> Result<bool, BGradedError> {
            let key = CompositeKey {
                lower: labelled(&base.morphisms[c.f], assigned, &c.lower),
                upper: labelled(&base.morphisms[c.g], assigned, &c.upper),
            };
            let got = x.composition.get(&key).ok_or_else(|| BGradedError::MissingComposite(base.show(&key.lower.degree)))?;
            Ok(got == &assigned[c.result])
        };
        if degrees.is_empty() {
            out.push(FieldTheory { colours: gens.iter().cloned().zip(pick.iter().cloned()).collect(), multimaps: BTreeMap::new() });
            continue;
        }
        let mut assigned: Vec<Label> = Vec::with_capacity(degrees.len());
        let mut cursor = vec![0usize; degrees.len()];
        let mut depth = 0;
        loop {
            if depth == degrees.len() {
                out.push(FieldTheory {
                    colours: gens.iter().cloned().zip(pick.iter().cloned()).collect(),
                    multimaps: degrees.iter().map(|&d| base.morphisms[d].clone()).zip(assigned.iter().cloned()).collect(),
                });
                depth -= 1;
                assigned.pop();
                cursor[depth] += 1;
                continue;
            }
            if cursor[depth] >= candidates[depth].len() {
                cursor[depth] = 0;
                if depth == 0 {
                    break;
                }
                depth -= 1;
                assigned.pop();
                cursor[depth] += 1;
                continue;
            }
            assigned.push(candidates[depth][cursor[depth]].clone());
            let mut ok = true;
            for c in &by_last[depth] {
                if !holds(c, &assigned)? {
                    ok = false;
                    break;
                }
            }
            if ok {
                depth += 1;
            } else {
                assigned.pop();
                cursor[depth] += 1;
            }
        }
    }
    Ok(out)
}
