use std::collections::BTreeMap;

use super::base::{BaseMorphism, BasePresentation, End};
use super::basic::{order_label, parse_order};
use super::bgraded::{BGradedError, BGradedOneTheory, BGradedSource, CompositeKey, Labelled, Typed};
use crate::theory::{label, Label};

/// The generator of the cospan base.
const POINT_GENERATOR: &str = "o";

/// A connected two-level graph of operations. `sources[k]` is the lower vertex reading
/// the `k`-th input, `wires[j]` the lower and upper vertex joined by the `j`-th inner
/// edge and `targets[k]` the upper vertex writing the `k`-th output. A vertex reads its
/// inputs and writes its outputs in the order of these lists; vertices are listed in
/// the order of their endpoint sets.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProperadGraph {
    pub inputs: Vec<Label>,
    pub edges: Vec<Label>,
    pub outputs: Vec<Label>,
    pub sources: Vec<usize>,
    pub wires: Vec<(usize, usize)>,
    pub targets: Vec<usize>,
    pub lower: Vec<Label>,
    pub upper: Vec<Label>,
}

/// A coloured properad as finite tables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ColouredProperad {
    pub colours: Vec<Label>,
    /// `(input colours, output colours) ↦ operations`.
    pub operations: BTreeMap<(Vec<Label>, Vec<Label>), Vec<Label>>,
    pub units: BTreeMap<Label, Label>,
    pub composition: BTreeMap<ProperadGraph, Label>,
}

fn connected_cospan(n: usize, m: usize) -> BaseMorphism {
    BaseMorphism::new(vec![0; n], vec![0; m], vec![(0..n).map(End::In).chain((0..m).map(End::Out)).collect()])
}

fn vertex_blocks(count: usize, ins: &[usize], outs: &[usize]) -> Vec<Vec<End>> {
    let mut blocks = vec![Vec::new(); count];
    for (i, &v) in ins.iter().enumerate() {
        blocks[v].push(End::In(i));
    }
    for (j, &v) in outs.iter().enumerate() {
        blocks[v].push(End::Out(j));
    }
    blocks
}

fn level(
    count: usize,
    ins: &[usize],
    outs: &[usize],
    inputs: &[Label],
    outputs: &[Label],
    labels: &[Label],
) -> Result<Labelled, BGradedError> {
    let blocks = vertex_blocks(count, ins, outs);
    let degree = BaseMorphism::new(vec![0; ins.len()], vec![0; outs.len()], blocks.clone());
    if degree.blocks != blocks || labels.len() != count || ins.iter().chain(outs).any(|&v| v >= count) {
        return Err(BGradedError::Unsupported("graph vertices are not listed in the order of their endpoints".into()));
    }
    Ok(Labelled { degree, inputs: inputs.to_vec(), outputs: outputs.to_vec(), labels: labels.to_vec() })
}

/// Reads a properad as a graded 1-theory over the cospan base: an operation with inputs
/// `S` and outputs `T` has the connected cospan `S → {•} ← T` as its degree.
pub fn properad_adapter(p: &ColouredProperad, base: &BasePresentation) -> Result<BGradedOneTheory, BGradedError> {
    let exceeds = |n: usize| BGradedError::BoundExceeded { arity: format!("{n} points"), bound: base.max_points };
    let mut x = BGradedOneTheory::default();
    let g = label(POINT_GENERATOR);
    x.colours.insert(g.clone(), p.colours.clone());
    for ((ins, outs), ops) in &p.operations {
        let n = ins.len().max(outs.len());
        if n > base.max_points {
            return Err(exceeds(n));
        }
        let key = Typed { degree: connected_cospan(ins.len(), outs.len()), inputs: ins.clone(), outputs: outs.clone() };
        x.multimaps.insert(key, ops.clone());
    }
    for (c, u) in &p.units {
        x.units.insert((g.clone(), c.clone()), u.clone());
    }
    for (graph, out) in &p.composition {
        let mid_lower: Vec<usize> = graph.wires.iter().map(|w| w.0).collect();
        let mid_upper: Vec<usize> = graph.wires.iter().map(|w| w.1).collect();
        let lower = level(graph.lower.len(), &graph.sources, &mid_lower, &graph.inputs, &graph.edges, &graph.lower)?;
        let upper = level(graph.upper.len(), &mid_upper, &graph.targets, &graph.edges, &graph.outputs, &graph.upper)?;
        x.composition.insert(CompositeKey { lower, upper }, out.clone());
    }
    Ok(x)
}

fn vertex_of(blocks: &[Vec<End>], e: End) -> Option<usize> {
    blocks.iter().position(|b| b.contains(&e))
}

/// The inverse reading of [`properad_adapter`].
pub fn properad_from_graded(x: &BGradedOneTheory) -> Result<ColouredProperad, BGradedError> {
    let colours = x.colours.get(POINT_GENERATOR).cloned().ok_or_else(|| BGradedError::Unsupported("not over the cospan base".into()))?;
    let mut p = ColouredProperad { colours, ..Default::default() };
    for (t, ops) in &x.multimaps {
        p.operations.insert((t.inputs.clone(), t.outputs.clone()), ops.clone());
    }
    for ((_, c), u) in &x.units {
        p.units.insert(c.clone(), u.clone());
    }
    for (key, out) in &x.composition {
        let (lb, ub) = (&key.lower.degree.blocks, &key.upper.degree.blocks);
        let missing = || BGradedError::IllTyped("a point outside every block".into());
        let sources = (0..key.lower.inputs.len()).map(|i| vertex_of(lb, End::In(i)).ok_or_else(missing)).collect::<Result<_, _>>()?;
        let wires = (0..key.lower.outputs.len())
            .map(|j| Ok((vertex_of(lb, End::Out(j)).ok_or_else(missing)?, vertex_of(ub, End::In(j)).ok_or_else(missing)?)))
            .collect::<Result<_, BGradedError>>()?;
        let targets = (0..key.upper.outputs.len()).map(|k| vertex_of(ub, End::Out(k)).ok_or_else(missing)).collect::<Result<_, _>>()?;
        let graph = ProperadGraph {
            inputs: key.lower.inputs.clone(),
            edges: key.lower.outputs.clone(),
            outputs: key.upper.outputs.clone(),
            sources,
            wires,
            targets,
            lower: key.lower.labels.clone(),
            upper: key.upper.labels.clone(),
        };
        p.composition.insert(graph, out.clone());
    }
    Ok(p)
}

/// The one-coloured properad of associative operations: operations with `n ≥ 1` inputs
/// and one output are the orders of the inputs, composed by substitution.
pub struct AssocProperad;

impl BGradedSource for AssocProperad {
    fn colours(&self, _: &Label) -> Vec<Label> {
        vec![crate::theory::point()]
    }

    fn multimaps(&self, key: &Typed) -> Vec<Label> {
        let n = key.inputs.len();
        if key.outputs.len() != 1 || n == 0 {
            return vec![];
        }
        let mut out = Vec::new();
        let mut order: Vec<usize> = (0..n).collect();
        permutations(&mut order, 0, &mut out);
        out
    }

    fn unit(&self, _: &Label, _: &Label) -> Label {
        order_label(&[0])
    }

    fn compose(&self, key: &CompositeKey) -> Result<Label, BGradedError> {
        let bad = || BGradedError::IllTyped(format!("{:?} / {:?}", key.lower.labels, key.upper.labels));
        let [upper] = key.upper.degree.blocks.as_slice() else { return Err(bad()) };
        let top = parse_order(&key.upper.labels[0]).ok_or_else(bad)?;
        let middle: Vec<usize> = upper.iter().filter_map(|e| if let End::In(j) = e { Some(*j) } else { None }).collect();
        let mut result = Vec::new();
        for &slot in &top {
            let j = *middle.get(slot).ok_or_else(bad)?;
            let b = vertex_of(&key.lower.degree.blocks, End::Out(j)).ok_or_else(bad)?;
            let block = &key.lower.degree.blocks[b];
            let ins: Vec<usize> = block.iter().filter_map(|e| if let End::In(i) = e { Some(*i) } else { None }).collect();
            for s in parse_order(&key.lower.labels[b]).ok_or_else(bad)? {
                result.push(*ins.get(s).ok_or_else(bad)?);
            }
        }
        Ok(order_label(&result))
    }
}

fn permutations(v: &mut Vec<usize>, k: usize, out: &mut Vec<Label>) {
    if k == v.len() {
        out.push(order_label(v));
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permutations(v, k + 1, out);
        v.swap(k, i);
    }
}
