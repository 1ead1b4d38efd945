use std::collections::HashMap;
use std::fmt::Write as _;

use itertools::Itertools;
use thiserror::Error;

use crate::theory::{label, Label};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BaseError {
    #[error("decomposition of {morphism} fails: {reason}")]
    Decomposition { morphism: String, reason: String },
    #[error("object {object} fails: {reason}")]
    Object { object: String, reason: String },
    #[error("category law fails: {0}")]
    CategoryLaw(String),
}

/// An endpoint of a base morphism: a point of the source or of the target word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum End {
    In(usize),
    Out(usize),
}

/// A morphism of a base with free decomposition: source and target words of generator
/// indices and the partition of their points into connected components. Components
/// without endpoints are closed pieces (circles, empty fibres).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BaseMorphism {
    pub source: Vec<usize>,
    pub target: Vec<usize>,
    pub blocks: Vec<Vec<End>>,
}

/// The restriction of a morphism to some of its blocks, with the original positions of
/// the points it keeps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Restriction {
    pub morphism: BaseMorphism,
    pub sources: Vec<usize>,
    pub targets: Vec<usize>,
}

/// A composite `upper ∘ lower` with, for each of its blocks, the lower and upper blocks
/// glued into it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Glued {
    pub composite: BaseMorphism,
    pub components: Vec<(Vec<usize>, Vec<usize>)>,
}

impl BaseMorphism {
    pub fn new(source: Vec<usize>, target: Vec<usize>, mut blocks: Vec<Vec<End>>) -> Self {
        for b in &mut blocks {
            b.sort();
        }
        blocks.sort();
        BaseMorphism { source, target, blocks }
    }

    pub fn identity(word: &[usize]) -> Self {
        BaseMorphism::new(word.to_vec(), word.to_vec(), (0..word.len()).map(|i| vec![End::In(i), End::Out(i)]).collect())
    }

    pub fn is_indecomposable(&self) -> bool {
        self.blocks.len() == 1
    }

    pub fn tensor(&self, other: &BaseMorphism) -> BaseMorphism {
        let (s, t) = (self.source.len(), self.target.len());
        let shift = |e: &End| match *e {
            End::In(i) => End::In(i + s),
            End::Out(j) => End::Out(j + t),
        };
        let blocks = self.blocks.iter().cloned().chain(other.blocks.iter().map(|b| b.iter().map(shift).collect())).collect();
        BaseMorphism::new(
            self.source.iter().chain(&other.source).copied().collect(),
            self.target.iter().chain(&other.target).copied().collect(),
            blocks,
        )
    }

    /// The sub-morphism on the given blocks, points renumbered in their original order.
    /// Its blocks come in the order of `blocks` sorted ascending.
    pub fn restrict(&self, blocks: &[usize]) -> Restriction {
        let mut chosen = blocks.to_vec();
        chosen.sort_unstable();
        let mut sources = Vec::new();
        let mut targets = Vec::new();
        for &b in &chosen {
            for e in &self.blocks[b] {
                match *e {
                    End::In(i) => sources.push(i),
                    End::Out(j) => targets.push(j),
                }
            }
        }
        sources.sort_unstable();
        targets.sort_unstable();
        let renumber = |e: &End| match *e {
            End::In(i) => End::In(sources.binary_search(&i).expect("kept point")),
            End::Out(j) => End::Out(targets.binary_search(&j).expect("kept point")),
        };
        let morphism = BaseMorphism {
            source: sources.iter().map(|&i| self.source[i]).collect(),
            target: targets.iter().map(|&j| self.target[j]).collect(),
            blocks: chosen.iter().map(|&b| self.blocks[b].iter().map(renumber).collect()).collect(),
        };
        Restriction { morphism, sources, targets }
    }

    /// Glues `upper` on top of `self` along the middle word, merging blocks that share a
    /// middle point. Closed loops become blocks without endpoints.
    pub fn glue(&self, upper: &BaseMorphism) -> Option<Glued> {
        if self.target != upper.source {
            return None;
        }
        let nl = self.blocks.len();
        let mut parent: Vec<usize> = (0..nl + upper.blocks.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        let mut lower_at = vec![0; self.target.len()];
        for (b, block) in self.blocks.iter().enumerate() {
            for e in block {
                if let End::Out(j) = *e {
                    lower_at[j] = b;
                }
            }
        }
        for (b, block) in upper.blocks.iter().enumerate() {
            for e in block {
                if let End::In(j) = *e {
                    let (x, y) = (find(&mut parent, lower_at[j]), find(&mut parent, nl + b));
                    parent[x] = y;
                }
            }
        }
        let mut comps: Vec<(Vec<End>, Vec<usize>, Vec<usize>)> = Vec::new();
        let mut root_at: HashMap<usize, usize> = HashMap::new();
        for v in 0..parent.len() {
            let r = find(&mut parent, v);
            let c = *root_at.entry(r).or_insert_with(|| {
                comps.push((vec![], vec![], vec![]));
                comps.len() - 1
            });
            if v < nl {
                comps[c].1.push(v);
                comps[c].0.extend(self.blocks[v].iter().filter(|e| matches!(e, End::In(_))));
            } else {
                comps[c].2.push(v - nl);
                comps[c].0.extend(upper.blocks[v - nl].iter().filter(|e| matches!(e, End::Out(_))));
            }
        }
        for c in &mut comps {
            c.0.sort();
        }
        comps.sort();
        let composite = BaseMorphism {
            source: self.source.clone(),
            target: upper.target.clone(),
            blocks: comps.iter().map(|c| c.0.clone()).collect(),
        };
        Some(Glued { composite, components: comps.into_iter().map(|c| (c.1, c.2)).collect() })
    }
}

/// One factor of a free decomposition: an indecomposable morphism of the base and the
/// positions its source and target points occupy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub shape: usize,
    pub sources: Vec<usize>,
    pub targets: Vec<usize>,
}

/// A finite skeleton of a symmetric monoidal category that is free as a commutative
/// monoid on its indecomposable objects and morphisms, with decomposition witnesses.
#[derive(Clone, Debug)]
pub struct BasePresentation {
    pub name: String,
    pub generators: Vec<Label>,
    pub max_points: usize,
    pub objects: Vec<Vec<usize>>,
    pub morphisms: Vec<BaseMorphism>,
    pub decompositions: Vec<Vec<Component>>,
    index: HashMap<BaseMorphism, usize>,
    hom: HashMap<(Vec<usize>, Vec<usize>), Vec<usize>>,
}

impl BasePresentation {
    fn build(name: &str, generators: &[&str], max_points: usize, mut morphisms: Vec<BaseMorphism>) -> Self {
        morphisms.sort();
        morphisms.dedup();
        let objects = (0..=max_points)
            .flat_map(|n| (0..n).map(|_| 0..generators.len()).multi_cartesian_product())
            .collect();
        let index: HashMap<BaseMorphism, usize> = morphisms.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let mut hom: HashMap<(Vec<usize>, Vec<usize>), Vec<usize>> = HashMap::new();
        for (i, m) in morphisms.iter().enumerate() {
            hom.entry((m.source.clone(), m.target.clone())).or_default().push(i);
        }
        let decompositions = morphisms
            .iter()
            .map(|m| {
                (0..m.blocks.len())
                    .map(|b| {
                        let r = m.restrict(&[b]);
                        let shape = index.get(&r.morphism).copied().unwrap_or(usize::MAX);
                        Component { shape, sources: r.sources, targets: r.targets }
                    })
                    .collect()
            })
            .collect();
        BasePresentation {
            name: name.to_string(),
            generators: generators.iter().map(|g| label(g)).collect(),
            max_points,
            objects,
            morphisms,
            decompositions,
            index,
            hom,
        }
    }

    pub fn position(&self, m: &BaseMorphism) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn hom(&self, source: &[usize], target: &[usize]) -> &[usize] {
        self.hom.get(&(source.to_vec(), target.to_vec())).map_or(&[], Vec::as_slice)
    }

    /// `upper ∘ lower`, when it lies in the skeleton.
    pub fn compose(&self, lower: usize, upper: usize) -> Option<usize> {
        let g = self.morphisms[lower].glue(&self.morphisms[upper])?;
        self.position(&g.composite)
    }

    pub fn indecomposables(&self) -> Vec<usize> {
        (0..self.morphisms.len()).filter(|&i| self.morphisms[i].is_indecomposable()).collect()
    }

    pub fn generator_index(&self, g: &str) -> Option<usize> {
        self.generators.iter().position(|x| &**x == g)
    }

    /// Composable pairs whose composite lies in the skeleton and is indecomposable.
    pub fn connected_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (f, m) in self.morphisms.iter().enumerate() {
            for w in &self.objects {
                for &g in self.hom(&m.target, w) {
                    if let Some(glued) = m.glue(&self.morphisms[g]) {
                        if glued.composite.is_indecomposable() && self.position(&glued.composite).is_some() {
                            out.push((f, g));
                        }
                    }
                }
            }
        }
        out
    }

    pub fn word(&self, w: &[usize]) -> String {
        w.iter().map(|&g| &*self.generators[g]).collect()
    }

    pub fn show(&self, m: &BaseMorphism) -> String {
        let mut s = format!("{}>{}:", self.word(&m.source), self.word(&m.target));
        for b in &m.blocks {
            let ends = b.iter().map(|e| match e {
                End::In(i) => format!("i{i}"),
                End::Out(j) => format!("o{j}"),
            });
            let _ = write!(s, "{{{}}}", ends.format(","));
        }
        s
    }

    fn recompose(&self, parts: &[Component], source: &[usize], target: &[usize]) -> Option<BaseMorphism> {
        let mut blocks = Vec::new();
        for c in parts {
            let shape = self.morphisms.get(c.shape)?;
            let block = shape
                .blocks
                .first()?
                .iter()
                .map(|e| match *e {
                    End::In(i) => c.sources.get(i).map(|&p| End::In(p)),
                    End::Out(j) => c.targets.get(j).map(|&p| End::Out(p)),
                })
                .collect::<Option<Vec<_>>>()?;
            blocks.push(block);
        }
        Some(BaseMorphism::new(source.to_vec(), target.to_vec(), blocks))
    }

    fn shapes(&self, i: usize) -> Vec<usize> {
        self.decompositions[i].iter().map(|c| c.shape).sorted().collect()
    }

    /// Exhaustive check of the free decompositions of objects and morphisms and of the
    /// category laws within the skeleton.
    pub fn check_free(&self) -> Result<(), BaseError> {
        for w in &self.objects {
            let fail = |reason: &str| BaseError::Object { object: self.word(w), reason: reason.to_string() };
            if w.iter().any(|&g| g >= self.generators.len()) {
                return Err(fail("unknown generator"));
            }
            for k in 1..w.len() {
                let (x, y) = w.split_at(k);
                let mut letters: Vec<usize> = x.iter().chain(y).copied().collect();
                letters.sort_unstable();
                if letters != w.iter().copied().sorted().collect::<Vec<_>>() {
                    return Err(fail("tensor factors do not add up"));
                }
            }
            if self.position(&BaseMorphism::identity(w)).is_none() {
                return Err(fail("no identity"));
            }
        }
        for (i, m) in self.morphisms.iter().enumerate() {
            let fail = |reason: &str| BaseError::Decomposition { morphism: self.show(m), reason: reason.to_string() };
            let parts = &self.decompositions[i];
            for c in parts {
                if !self.morphisms.get(c.shape).is_some_and(BaseMorphism::is_indecomposable) {
                    return Err(fail("a factor is not an indecomposable of the skeleton"));
                }
            }
            if self.recompose(parts, &m.source, &m.target).as_ref() != Some(m) {
                return Err(fail("factors do not recompose to the morphism"));
            }
            if m.is_indecomposable() != (parts.len() == 1 && parts[0].shape == i) {
                return Err(fail("indecomposable morphisms must be their own only factor"));
            }
        }
        for (i, x) in self.morphisms.iter().enumerate() {
            for (j, y) in self.morphisms.iter().enumerate() {
                if x.source.len() + y.source.len() > self.max_points || x.target.len() + y.target.len() > self.max_points {
                    continue;
                }
                let Some(k) = self.position(&x.tensor(y)) else { continue };
                let mut sum = self.shapes(i);
                sum.extend(self.shapes(j));
                sum.sort_unstable();
                if sum != self.shapes(k) {
                    return Err(BaseError::Decomposition {
                        morphism: self.show(&self.morphisms[k]),
                        reason: format!("factors differ from those of {} and {}", self.show(x), self.show(y)),
                    });
                }
            }
        }
        self.check_category()
    }

    fn check_category(&self) -> Result<(), BaseError> {
        for (f, m) in self.morphisms.iter().enumerate() {
            let ids = self.position(&BaseMorphism::identity(&m.source));
            let idt = self.position(&BaseMorphism::identity(&m.target));
            let (Some(ids), Some(idt)) = (ids, idt) else {
                return Err(BaseError::CategoryLaw(format!("missing identity at {}", self.show(m))));
            };
            if self.compose(ids, f) != Some(f) || self.compose(f, idt) != Some(f) {
                return Err(BaseError::CategoryLaw(format!("unit law at {}", self.show(m))));
            }
        }
        for (f, mf) in self.morphisms.iter().enumerate() {
            for w in &self.objects {
                for &g in self.hom(&mf.target, w) {
                    let gf = self.compose(f, g);
                    for v in &self.objects {
                        for &h in self.hom(w, v) {
                            let (Some(gf), Some(hg)) = (gf, self.compose(g, h)) else { continue };
                            let left = self.compose(gf, h);
                            let right = self.compose(f, hg);
                            if left != right {
                                return Err(BaseError::CategoryLaw(format!(
                                    "associativity at {}, {}, {}",
                                    self.show(mf),
                                    self.show(&self.morphisms[g]),
                                    self.show(&self.morphisms[h])
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Tail and head of an oriented interval: a `+` point is a tail in the source and a head
/// in the target, a `-` point the other way round.
pub fn is_tail(end: End, letter: usize) -> bool {
    matches!((end, letter), (End::In(_), 0) | (End::Out(_), 1))
}

/// Oriented compact 0-manifolds as words in `+` and `-`, and 1-bordisms between them up to
/// diffeomorphism: matchings of tails with heads plus up to `max_circles` circles.
pub fn bord1_skeleton(max_points: usize, max_circles: usize) -> BasePresentation {
    let words: Vec<Vec<usize>> =
        (0..=max_points).flat_map(|n| (0..n).map(|_| 0..2usize).multi_cartesian_product()).collect();
    let mut morphisms = Vec::new();
    for a in &words {
        for b in &words {
            let ends = (0..a.len()).map(|i| (End::In(i), a[i])).chain((0..b.len()).map(|j| (End::Out(j), b[j])));
            let (tails, heads): (Vec<_>, Vec<_>) = ends.partition(|&(e, l)| is_tail(e, l));
            if tails.len() != heads.len() {
                continue;
            }
            for perm in (0..heads.len()).permutations(heads.len()) {
                let intervals: Vec<Vec<End>> = tails.iter().zip(&perm).map(|(t, &h)| vec![t.0, heads[h].0]).collect();
                for c in 0..=max_circles {
                    let mut blocks = intervals.clone();
                    blocks.extend((0..c).map(|_| vec![]));
                    morphisms.push(BaseMorphism::new(a.clone(), b.clone(), blocks));
                }
            }
        }
    }
    BasePresentation::build("bord1", &["+", "-"], max_points, morphisms)
}

fn set_partitions(items: &[End]) -> Vec<Vec<Vec<End>>> {
    let Some((&first, rest)) = items.split_first() else { return vec![vec![]] };
    let mut out = Vec::new();
    for p in set_partitions(rest) {
        for k in 0..p.len() {
            let mut q = p.clone();
            q[k].insert(0, first);
            out.push(q);
        }
        let mut q = p;
        q.push(vec![first]);
        out.push(q);
    }
    out
}

/// Finite sets of at most `bound` points and isomorphism classes of cospans `S → M ← T`
/// with `|M| ≤ bound`; the blocks are the fibres over the points of `M`.
pub fn cocorr_fin_skeleton(bound: usize) -> BasePresentation {
    let mut morphisms = Vec::new();
    for n in 0..=bound {
        for m in 0..=bound {
            let ends: Vec<End> = (0..n).map(End::In).chain((0..m).map(End::Out)).collect();
            for p in set_partitions(&ends) {
                for empty in 0..=bound.saturating_sub(p.len()) {
                    if p.len() + empty > bound {
                        continue;
                    }
                    let mut blocks = p.clone();
                    blocks.extend((0..empty).map(|_| vec![]));
                    morphisms.push(BaseMorphism::new(vec![0; n], vec![0; m], blocks));
                }
            }
        }
    }
    BasePresentation::build("cocorr", &["o"], bound, morphisms)
}
