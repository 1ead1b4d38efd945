use std::collections::{BTreeMap, HashMap};

use super::base::{is_tail, BasePresentation, End};
use super::bgraded::{materialize_bgraded, BGradedError, BGradedOneTheory, BGradedSource, CompositeKey, Labelled, Typed};
use crate::theory::{point, FinCategory, Label};

/// The set attached to a circle.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CircleValue {
    #[default]
    Point,
    /// Endomorphisms modulo `g ∘ f ~ f ∘ g`.
    Hochschild,
}

/// The class of each endomorphism under `g ∘ f ~ f ∘ g`, named by its least member.
pub fn hochschild_classes(c: &FinCategory) -> BTreeMap<Label, Label> {
    let endos: Vec<Label> = c.arrows.iter().filter(|(_, (s, t))| s == t).map(|(f, _)| f.clone()).collect();
    let pos: HashMap<&Label, usize> = endos.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let mut parent: Vec<usize> = (0..endos.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for (f, (x, y)) in &c.arrows {
        for g in c.hom(y, x) {
            let (Some(gf), Some(fg)) = (c.compose(f, &g), c.compose(&g, f)) else { continue };
            let (a, b) = (find(&mut parent, pos[gf]), find(&mut parent, pos[fg]));
            let (lo, hi) = if endos[a] <= endos[b] { (a, b) } else { (b, a) };
            parent[hi] = lo;
        }
    }
    (0..endos.len()).map(|i| (endos[i].clone(), endos[find(&mut parent, i)].clone())).collect()
}

struct Zc<'a> {
    category: &'a FinCategory,
    circle: CircleValue,
    classes: BTreeMap<Label, Label>,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Point {
    Below(usize),
    Middle(usize),
    Above(usize),
}

impl Zc<'_> {
    fn circle_labels(&self) -> Vec<Label> {
        match self.circle {
            CircleValue::Point => vec![point()],
            CircleValue::Hochschild => {
                let mut v: Vec<Label> = self.classes.values().cloned().collect();
                v.sort();
                v.dedup();
                v
            }
        }
    }

    fn loop_label(&self, endo: &Label) -> Label {
        match self.circle {
            CircleValue::Point => point(),
            CircleValue::Hochschild => self.classes[endo].clone(),
        }
    }

    /// Oriented edges `tail → head` with their arrows, one per interval block.
    fn edges(
        &self,
        m: &Labelled,
        outer: fn(usize) -> Point,
        inner: fn(usize) -> Point,
        lower: bool,
        out: &mut HashMap<Point, (Point, Label)>,
    ) {
        for (b, block) in m.degree.blocks.iter().enumerate() {
            if block.len() != 2 {
                continue;
            }
            let place = |e: End| match e {
                End::In(i) if lower => (outer(i), m.degree.source[i]),
                End::In(i) => (inner(i), m.degree.source[i]),
                End::Out(j) if lower => (inner(j), m.degree.target[j]),
                End::Out(j) => (outer(j), m.degree.target[j]),
            };
            let (p, q) = (place(block[0]), place(block[1]));
            let (tail, head) = if is_tail(block[0], p.1) { (p.0, q.0) } else { (q.0, p.0) };
            out.insert(tail, (head, m.labels[b].clone()));
        }
    }
}

impl BGradedSource for Zc<'_> {
    fn colours(&self, _: &Label) -> Vec<Label> {
        self.category.objects.clone()
    }

    fn multimaps(&self, key: &Typed) -> Vec<Label> {
        let Some(block) = key.degree.blocks.first() else { return vec![] };
        if block.is_empty() {
            return self.circle_labels();
        }
        let colour = |e: End| match e {
            End::In(i) => (&key.inputs[i], key.degree.source[i]),
            End::Out(j) => (&key.outputs[j], key.degree.target[j]),
        };
        let (p, q) = (colour(block[0]), colour(block[1]));
        let (x, y) = if is_tail(block[0], p.1) { (p.0, q.0) } else { (q.0, p.0) };
        self.category.hom(x, y)
    }

    fn unit(&self, _: &Label, colour: &Label) -> Label {
        self.category.identity(colour).cloned().expect("checked category")
    }

    fn compose(&self, key: &CompositeKey) -> Result<Label, BGradedError> {
        let bad = || BGradedError::IllTyped(format!("{:?} / {:?}", key.lower.labels, key.upper.labels));
        let closed = key.lower.degree.blocks.iter().zip(&key.lower.labels).chain(key.upper.degree.blocks.iter().zip(&key.upper.labels));
        if let Some((_, l)) = closed.clone().find(|(b, _)| b.is_empty()) {
            return Ok(l.clone());
        }
        let mut next = HashMap::new();
        self.edges(&key.lower, Point::Below, Point::Middle, true, &mut next);
        self.edges(&key.upper, Point::Above, Point::Middle, false, &mut next);
        let heads: Vec<Point> = next.values().map(|(h, _)| *h).collect();
        let start = next.keys().copied().find(|p| !matches!(p, Point::Middle(_)) && !heads.contains(p));
        let (mut at, closed_loop) = match start {
            Some(p) => (p, false),
            None => (*next.keys().next().ok_or_else(bad)?, true),
        };
        let first = at;
        let mut acc: Option<Label> = None;
        for _ in 0..=next.len() {
            let Some((head, f)) = next.get(&at) else { break };
            acc = Some(match acc {
                None => f.clone(),
                Some(a) => self.category.compose(&a, f).cloned().ok_or_else(bad)?,
            });
            at = *head;
            if closed_loop && at == first {
                break;
            }
        }
        let acc = acc.ok_or_else(bad)?;
        Ok(if closed_loop { self.loop_label(&acc) } else { acc })
    }
}

/// The Bord₁-graded 1-theory of a finite category: objects on points, hom sets on
/// intervals from tail to head, the chosen value on circles, composition along paths.
pub fn zc_build(c: &FinCategory, bord: &BasePresentation, circle: CircleValue) -> Result<BGradedOneTheory, BGradedError> {
    c.check().map_err(BGradedError::InvalidCategory)?;
    if bord.generators.iter().map(|g| &**g).ne(["+", "-"]) {
        return Err(BGradedError::Unsupported(format!("{} is not an oriented bordism base", bord.name)));
    }
    let zc = Zc { category: c, circle, classes: hochschild_classes(c) };
    materialize_bgraded(bord, &zc)
}
