//! Arities of multimaps as towers of nerves of finite index sets.
//!
//! Level `ν` of a `k`-arity is a nerve of index sets over the object `0` of level
//! `ν + 1`; the top level `k − 1` is a single map `ψ` from the inputs to the outputs.
//! Every index element carries an id that survives restriction, push-forward and
//! sub-cell extraction, which lets decomposition track which component of a higher cell
//! lies over which lower element.
//!
//! A *fill* assigns a slot to every position `(level, object, entry)` of an arity. The
//! same operations that reshape an arity reshape a fill, so running them on the identity
//! fill yields gather plans that move type data between an arity and its pieces.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::{Arc, OnceLock, RwLock};

use thiserror::Error;

use crate::ordcomb::{bracket_map, FinMap, OrdError, Variance};

pub type Eid = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArityError {
    #[error("malformed arity: {0}")]
    Malformed(String),
    #[error("element {index} out of range for index set of size {size}")]
    OutOfRange { index: usize, size: usize },
    #[error("cannot parse arity key {0:?}")]
    BadKey(String),
    #[error(transparent)]
    Ord(#[from] OrdError),
}

/// One level of an arity: objects over a bracket and the maps between consecutive ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Level {
    pub objects: Vec<Vec<Eid>>,
    pub arrows: Vec<FinMap>,
}

impl Level {
    pub fn sizes(&self) -> Vec<usize> {
        self.objects.iter().map(Vec::len).collect()
    }

    pub fn top(&self) -> usize {
        self.objects.len() - 1
    }

    /// Composite of arrows `a..b`, a map from object `a` to object `b`.
    pub fn composite(&self, a: usize, b: usize, variance: Variance) -> FinMap {
        let mut acc = FinMap::identity(self.objects[a].len(), variance);
        for t in a..b {
            acc = acc.then(&self.arrows[t]).expect("level arrows compose");
        }
        acc
    }

    fn slice(&self, a: usize, b: usize) -> Level {
        Level {
            objects: self.objects[a..=b].to_vec(),
            arrows: self.arrows[a..b].to_vec(),
        }
    }

    fn pushforward(&self, m: &FinMap, variance: Variance) -> Level {
        let br = bracket_map(m);
        Level {
            objects: br.values().iter().map(|&p| self.objects[p].clone()).collect(),
            arrows: (0..m.target())
                .map(|j| self.composite(br.apply(j), br.apply(j + 1), variance))
                .collect(),
        }
    }
}

/// A reference from a piece position back to a root position. `pick` selects components
/// of the root value; `None` takes the whole value.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Slot {
    pub src: u32,
    pub pick: Option<Arc<[u32]>>,
}

/// Slots indexed by `[level][object][entry]`; either empty or covering every level.
pub type Fill = Vec<Vec<Vec<Slot>>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arity {
    variance: Variance,
    levels: Vec<Level>,
}

/// An elemental component of a general arity, with the ids of its top elements per level.
#[derive(Clone, Debug)]
pub struct Component {
    pub arity: Arity,
    pub fill: Fill,
    pub roots: Vec<Eid>,
}

impl Arity {
    /// The arity of colours.
    pub fn point(variance: Variance) -> Self {
        Arity { variance, levels: vec![] }
    }

    /// The 1-arity with `size` inputs and one output.
    pub fn corolla(size: usize, variance: Variance) -> Self {
        Arity::from_tables(variance, vec![(vec![size, 1], vec![vec![0; size]])]).expect("corolla")
    }

    pub fn new(variance: Variance, levels: Vec<Level>) -> Result<Self, ArityError> {
        let a = Arity { variance, levels };
        a.check()?;
        Ok(a)
    }

    /// Builds an arity from object sizes and arrow tables per level, bottom-up, assigning
    /// fresh ids.
    pub fn from_tables(
        variance: Variance,
        tables: Vec<(Vec<usize>, Vec<Vec<usize>>)>,
    ) -> Result<Self, ArityError> {
        let mut levels = Vec::with_capacity(tables.len());
        for (nu, (sizes, arrows)) in tables.into_iter().enumerate() {
            let v = if nu == 0 { variance } else { Variance::Planar };
            let mut next: Eid = 0;
            let objects = sizes
                .iter()
                .map(|&s| {
                    let ids = (next..next + s as Eid).collect();
                    next += s as Eid;
                    ids
                })
                .collect();
            if arrows.len() + 1 != sizes.len() {
                return Err(ArityError::Malformed(format!(
                    "level {nu} has {} objects and {} arrows",
                    sizes.len(),
                    arrows.len()
                )));
            }
            let arrows = arrows
                .into_iter()
                .enumerate()
                .map(|(t, images)| FinMap::new(images, sizes[t + 1], v))
                .collect::<Result<Vec<_>, _>>()?;
            levels.push(Level { objects, arrows });
        }
        Arity::new(variance, levels)
    }

    fn check(&self) -> Result<(), ArityError> {
        let k = self.levels.len();
        for (nu, lv) in self.levels.iter().enumerate() {
            let bad = |m: String| Err(ArityError::Malformed(format!("level {nu}: {m}")));
            if lv.objects.len() != lv.arrows.len() + 1 {
                return bad("objects and arrows do not form a nerve".into());
            }
            let expected = if nu + 1 == k { 1 } else { self.levels[nu + 1].objects[0].len() };
            if lv.arrows.len() != expected {
                return bad(format!("nerve length {} but index has {expected}", lv.arrows.len()));
            }
            for (t, f) in lv.arrows.iter().enumerate() {
                if f.source() != lv.objects[t].len() || f.target() != lv.objects[t + 1].len() {
                    return bad(format!("arrow {t} does not connect its objects"));
                }
                if (nu > 0 || self.variance == Variance::Planar) && !f.is_monotone() {
                    return bad(format!("arrow {t} is not order-preserving"));
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.levels.len()
    }

    pub fn variance(&self) -> Variance {
        self.variance
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn level_variance(&self, nu: usize) -> Variance {
        if nu == 0 {
            self.variance
        } else {
            Variance::Planar
        }
    }

    /// The top map `ψ`.
    pub fn top_map(&self) -> &FinMap {
        &self.levels[self.dim() - 1].arrows[0]
    }

    pub fn is_elemental(&self) -> bool {
        self.levels.iter().all(|lv| lv.objects.last().map(Vec::len) == Some(1))
    }

    /// Largest index set anywhere in the arity.
    pub fn max_index(&self) -> usize {
        self.levels
            .iter()
            .flat_map(|lv| lv.objects.iter().map(Vec::len))
            .max()
            .unwrap_or(0)
    }

    pub fn composite(&self, nu: usize, a: usize, b: usize) -> FinMap {
        self.levels[nu].composite(a, b, self.level_variance(nu))
    }

    /// The one-sided composite from object `0` to object `j` of level `nu`.
    pub fn maekara(&self, nu: usize, j: usize) -> FinMap {
        self.composite(nu, 0, j)
    }

    /// Number of positions `(level, object, entry)` and the offset of each object.
    pub fn offsets(&self) -> (Vec<Vec<usize>>, usize) {
        let mut next = 0;
        let offs = self
            .levels
            .iter()
            .map(|lv| {
                lv.objects
                    .iter()
                    .map(|o| {
                        let at = next;
                        next += o.len();
                        at
                    })
                    .collect()
            })
            .collect();
        (offs, next)
    }

    pub fn identity_fill(&self) -> Fill {
        let mut next = 0u32;
        self.levels
            .iter()
            .map(|lv| {
                lv.objects
                    .iter()
                    .map(|o| {
                        (0..o.len())
                            .map(|_| {
                                next += 1;
                                Slot { src: next - 1, pick: None }
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect()
    }

    /// Reassigns ids to `0..` per level in reading order.
    pub fn canonical(&self) -> Arity {
        let levels = self
            .levels
            .iter()
            .map(|lv| {
                let mut next: Eid = 0;
                Level {
                    objects: lv
                        .objects
                        .iter()
                        .map(|o| {
                            let ids = (next..next + o.len() as Eid).collect();
                            next += o.len() as Eid;
                            ids
                        })
                        .collect(),
                    arrows: lv.arrows.clone(),
                }
            })
            .collect();
        Arity { variance: self.variance, levels }
    }

    /// Levels bottom-up separated by `/`; each level lists object sizes, then `:`, then
    /// the arrow tables (1-based images joined by `.`, `-` when empty) separated by `;`.
    /// The arity of colours has key `pt`.
    pub fn canonical_key(&self) -> String {
        if self.levels.is_empty() {
            return "pt".to_string();
        }
        let mut s = String::new();
        for (nu, lv) in self.levels.iter().enumerate() {
            if nu > 0 {
                s.push('/');
            }
            for (j, o) in lv.objects.iter().enumerate() {
                if j > 0 {
                    s.push(',');
                }
                let _ = write!(s, "{}", o.len());
            }
            s.push(':');
            for (t, f) in lv.arrows.iter().enumerate() {
                if t > 0 {
                    s.push(';');
                }
                if f.source() == 0 {
                    s.push('-');
                }
                for (e, image) in f.images().iter().enumerate() {
                    if e > 0 {
                        s.push('.');
                    }
                    let _ = write!(s, "{}", image + 1);
                }
            }
        }
        s
    }

    pub fn parse_key(key: &str, variance: Variance) -> Result<Arity, ArityError> {
        if key == "pt" {
            return Ok(Arity::point(variance));
        }
        let bad = || ArityError::BadKey(key.to_string());
        let mut tables = Vec::new();
        for level in key.split('/') {
            let (sizes, arrows) = level.split_once(':').ok_or_else(bad)?;
            let sizes = sizes
                .split(',')
                .map(|x| x.parse::<usize>().map_err(|_| bad()))
                .collect::<Result<Vec<_>, _>>()?;
            let arrows = if sizes.len() == 1 {
                if !arrows.is_empty() {
                    return Err(bad());
                }
                vec![]
            } else {
                arrows
                    .split(';')
                    .map(|a| {
                        if a == "-" {
                            return Ok(vec![]);
                        }
                        a.split('.')
                            .map(|x| match x.parse::<usize>() {
                                Ok(v) if v >= 1 => Ok(v - 1),
                                _ => Err(bad()),
                            })
                            .collect::<Result<Vec<_>, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()?
            };
            tables.push((sizes, arrows));
        }
        let a = Arity::from_tables(variance, tables)?;
        if a.canonical_key() != key {
            return Err(bad());
        }
        Ok(a)
    }

    /// The arity of the `kappa`-cell between objects `a` and `b` of level `kappa − 1`.
    pub fn sub_cell(&self, kappa: usize, a: usize, b: usize) -> Arity {
        self.sub_cell_fill(&Vec::new(), kappa, a, b).0
    }

    pub fn sub_cell_fill(&self, fill: &Fill, kappa: usize, a: usize, b: usize) -> (Arity, Fill) {
        assert!(kappa >= 1 && kappa <= self.dim() && a <= b);
        let mut levels: Vec<Level> = self.levels[..kappa].to_vec();
        let top = &self.levels[kappa - 1];
        levels[kappa - 1] = Level {
            objects: vec![top.objects[a].clone(), top.objects[b].clone()],
            arrows: vec![self.composite(kappa - 1, a, b)],
        };
        let mut out_fill: Fill = Vec::new();
        if !fill.is_empty() {
            out_fill = fill[..kappa].to_vec();
            let f = &fill[kappa - 1];
            out_fill[kappa - 1] = [a, b].iter().filter_map(|&x| f.get(x).cloned()).collect();
        }
        if kappa >= 2 {
            let m = self.maekara(kappa - 1, a);
            levels[kappa - 2] = self.levels[kappa - 2].pushforward(&m, self.level_variance(kappa - 2));
            if !fill.is_empty() {
                out_fill[kappa - 2] = push_fill(&fill[kappa - 2], &m);
            }
        }
        (Arity { variance: self.variance, levels }, out_fill)
    }

    /// Restriction to the fiber of the top map over output `i`.
    pub fn split_top(&self, i: usize) -> Arity {
        self.split_top_fill(&Vec::new(), i).0
    }

    pub fn split_top_fill(&self, fill: &Fill, i: usize) -> (Arity, Fill) {
        let k = self.dim();
        let psi = self.top_map();
        assert!(i < psi.target());
        let fiber = psi.fiber(i);
        let top = &self.levels[k - 1];
        let mut levels = self.levels.clone();
        levels[k - 1] = Level {
            objects: vec![fiber.iter().map(|&p| top.objects[0][p]).collect(), vec![top.objects[1][i]]],
            arrows: vec![FinMap::to_point(fiber.len(), self.level_variance(k - 1))],
        };
        let mut out_fill = fill.clone();
        if !fill.is_empty() {
            let f = &fill[k - 1];
            let mut objs = vec![fiber.iter().map(|&p| f[0][p].clone()).collect::<Vec<_>>()];
            if f.len() > 1 {
                objs.push(vec![f[1][i].clone()]);
            }
            out_fill[k - 1] = objs;
        }
        if k >= 2 {
            let br = bracket_map(psi);
            let (alpha, beta) = (br.apply(i), br.apply(i + 1));
            self.restrict_below(&mut levels, fill, &mut out_fill, k - 1, alpha, beta);
        }
        (Arity { variance: self.variance, levels }, out_fill)
    }

    /// Slices level `nu − 1` to objects `alpha..=beta` and pushes level `nu − 2` along the
    /// one-sided composite at `alpha`.
    fn restrict_below(
        &self,
        levels: &mut [Level],
        fill: &Fill,
        out_fill: &mut Fill,
        nu: usize,
        alpha: usize,
        beta: usize,
    ) {
        levels[nu - 1] = self.levels[nu - 1].slice(alpha, beta);
        if !fill.is_empty() {
            out_fill[nu - 1] = fill[nu - 1][alpha..=beta].to_vec();
        }
        if nu >= 2 {
            let m = self.maekara(nu - 1, alpha);
            levels[nu - 2] = self.levels[nu - 2].pushforward(&m, self.level_variance(nu - 2));
            if !fill.is_empty() {
                out_fill[nu - 2] = push_fill(&fill[nu - 2], &m);
            }
        }
    }

    /// Restriction of level `l < k − 1` to the preimage of element `i` of its top object.
    pub fn restrict_level(&self, l: usize, i: usize) -> Arity {
        self.restrict_level_fill(&Vec::new(), l, i).0
    }

    pub fn restrict_level_fill(&self, fill: &Fill, l: usize, i: usize) -> (Arity, Fill) {
        let k = self.dim();
        assert!(l + 1 < k);
        let lv = &self.levels[l];
        let top = lv.top();
        assert!(i < lv.objects[top].len());
        let to_top: Vec<FinMap> = (0..=top).map(|x| self.composite(l, x, top)).collect();
        let pre: Vec<Vec<usize>> = to_top.iter().map(|s| s.fiber(i)).collect();
        let mut out_fill = fill.clone();
        if !fill.is_empty() {
            self.filter_above(&mut out_fill, l, &to_top, i);
            out_fill[l] = pre
                .iter()
                .enumerate()
                .map(|(x, ps)| ps.iter().map(|&p| fill[l][x][p].clone()).collect())
                .collect();
        }
        let v = self.level_variance(l);
        let arrows = (0..top)
            .map(|x| {
                let images = pre[x]
                    .iter()
                    .map(|&e| {
                        let image = lv.arrows[x].apply(e);
                        pre[x + 1].binary_search(&image).expect("preimages are compatible")
                    })
                    .collect();
                FinMap::new(images, pre[x + 1].len(), v).expect("restricted arrow")
            })
            .collect();
        let objects = pre
            .iter()
            .enumerate()
            .map(|(x, ps)| ps.iter().map(|&p| lv.objects[x][p]).collect())
            .collect();
        let mut levels = self.levels.clone();
        levels[l] = Level { objects, arrows };
        if l >= 1 {
            let br = bracket_map(&to_top[0]);
            let (alpha, beta) = (br.apply(i), br.apply(i + 1));
            self.restrict_below(&mut levels, fill, &mut out_fill, l, alpha, beta);
        }
        (Arity { variance: self.variance, levels }, out_fill)
    }

    /// Narrows the slots above level `l` to the components lying over element `i`.
    fn filter_above(&self, fill: &mut Fill, l: usize, to_top: &[FinMap], i: usize) {
        let lv = &self.levels[l];
        let mut image: HashMap<Eid, usize> = HashMap::new();
        for (x, o) in lv.objects.iter().enumerate() {
            for (p, &id) in o.iter().enumerate() {
                image.insert(id, to_top[x].apply(p));
            }
        }
        for kappa in (l + 1)..fill.len() {
            for j in 0..fill[kappa].len() {
                let br = bracket_map(&self.maekara(kappa, j));
                for t in 0..fill[kappa][j].len() {
                    let sub = self.sub_cell(kappa, br.apply(t), br.apply(t + 1));
                    let roots = sub.decompose_roots();
                    let keep: Vec<u32> = roots
                        .iter()
                        .enumerate()
                        .filter(|(_, r)| image[&r[l]] == i)
                        .map(|(c, _)| c as u32)
                        .collect();
                    let slot = &mut fill[kappa][j][t];
                    let pick: Vec<u32> = match &slot.pick {
                        None => keep,
                        Some(old) => {
                            assert_eq!(old.len(), roots.len(), "slot components drifted from arity");
                            keep.iter().map(|&c| old[c as usize]).collect()
                        }
                    };
                    slot.pick = Some(pick.into());
                }
            }
        }
    }

    /// Elemental components, in decomposition order, with the fill carried along.
    pub fn decompose_fill(&self, fill: Fill) -> Vec<Component> {
        let mut out = Vec::new();
        self.decompose_into(fill, &mut out);
        out
    }

    fn decompose_into(&self, fill: Fill, out: &mut Vec<Component>) {
        let k = self.dim();
        if k == 0 {
            out.push(Component { arity: self.clone(), fill, roots: vec![] });
            return;
        }
        let psi = self.top_map();
        if psi.target() != 1 {
            for i in 0..psi.target() {
                let (a, f) = self.split_top_fill(&fill, i);
                a.decompose_into(f, out);
            }
            return;
        }
        for l in (0..k - 1).rev() {
            let lv = &self.levels[l];
            let n = lv.objects[lv.top()].len();
            if n != 1 {
                for i in 0..n {
                    let (a, f) = self.restrict_level_fill(&fill, l, i);
                    a.decompose_into(f, out);
                }
                return;
            }
        }
        let roots = self.levels.iter().map(|lv| lv.objects[lv.top()][0]).collect();
        out.push(Component { arity: self.clone(), fill, roots });
    }

    pub fn decompose_roots(&self) -> Vec<Vec<Eid>> {
        self.decompose_fill(Vec::new()).into_iter().map(|c| c.roots).collect()
    }

    /// The family of elemental arities whose product describes cells of this arity.
    pub fn decompose_general(&self) -> Vec<Arity> {
        self.decompose_fill(Vec::new()).into_iter().map(|c| c.arity.canonical()).collect()
    }

    /// Replaces the top by `φ: I^{k−1}_0 → J` followed by `J → *`, pushing the level below
    /// along `φ`.
    pub fn pushforward_arity(&self, phi: &FinMap) -> Result<Arity, ArityError> {
        let k = self.dim();
        if k == 0 {
            return Err(ArityError::Malformed("the point has no top map".into()));
        }
        let top = &self.levels[k - 1];
        if phi.source() != top.objects[0].len() {
            return Err(ArityError::Malformed(format!(
                "push-forward source {} does not match {} inputs",
                phi.source(),
                top.objects[0].len()
            )));
        }
        let v = self.level_variance(k - 1);
        let phi = phi.with_variance(v)?;
        let mut levels = self.levels.clone();
        let fresh: Eid = top.objects.iter().flatten().copied().max().map_or(0, |m| m + 1);
        levels[k - 1] = Level {
            objects: vec![(fresh..fresh + phi.target() as Eid).collect(), top.objects[1].clone()],
            arrows: vec![FinMap::to_point(phi.target(), v)],
        };
        if k >= 2 {
            levels[k - 2] = self.levels[k - 2].pushforward(&phi, self.level_variance(k - 2));
        }
        Arity::new(self.variance, levels)
    }
}

fn push_fill(objs: &[Vec<Slot>], m: &FinMap) -> Vec<Vec<Slot>> {
    bracket_map(m).values().iter().map(|&p| objs[p].clone()).collect()
}

/// All elemental `k`-arities whose index sets have at most `bound` elements, sorted by key.
pub fn enumerate_arities(k: usize, bound: usize, variance: Variance) -> Vec<Arity> {
    if k == 0 {
        return vec![Arity::point(variance)];
    }
    let mut partial: Vec<Vec<(Vec<usize>, Vec<Vec<usize>>)>> = (0..=bound)
        .map(|a| vec![(vec![a, 1], vec![vec![0; a]])])
        .collect();
    for nu in (0..k - 1).rev() {
        let v = if nu == 0 { variance } else { Variance::Planar };
        let mut next = Vec::new();
        for tables in partial {
            let len = tables.last().unwrap().0[0];
            for nerve in enumerate_nerves(len, bound, v) {
                let mut t = tables.clone();
                t.push(nerve);
                next.push(t);
            }
        }
        partial = next;
    }
    let mut out: Vec<Arity> = partial
        .into_iter()
        .map(|mut t| {
            t.reverse();
            Arity::from_tables(variance, t).expect("enumerated arity is well formed")
        })
        .collect();
    out.sort_by_cached_key(Arity::canonical_key);
    out
}

/// Nerves of length `len` whose objects have at most `bound` elements and whose last
/// object is a singleton.
fn enumerate_nerves(len: usize, bound: usize, v: Variance) -> Vec<(Vec<usize>, Vec<Vec<usize>>)> {
    let mut out = vec![(vec![], vec![])];
    for pos in 0..=len {
        let choices: Vec<usize> = if pos == len { vec![1] } else { (0..=bound).collect() };
        let mut next = Vec::new();
        for (sizes, arrows) in &out {
            for &s in &choices {
                let mut sizes2: Vec<usize> = sizes.clone();
                sizes2.push(s);
                if pos == 0 {
                    next.push((sizes2, arrows.clone()));
                    continue;
                }
                let prev = sizes[pos - 1];
                for f in crate::ordcomb::enumerate_maps(prev, s, v) {
                    let mut arrows2: Vec<Vec<usize>> = arrows.clone();
                    arrows2.push(f.images().to_vec());
                    next.push((sizes2.clone(), arrows2));
                }
            }
        }
        out = next;
    }
    out
}

/// A piece of a decomposition: an elemental arity and where each of its positions reads
/// from in the parent.
#[derive(Clone, Debug)]
pub struct Piece {
    pub arity: ArityRef,
    pub gather: Vec<Slot>,
}

/// What a position of an arity holds: a colour, or a general cell given by its pieces.
#[derive(Clone, Debug)]
pub enum EntryPlan {
    Colour,
    Cell(Vec<Piece>),
}

/// An interned canonical arity with lazily computed plans.
#[derive(Debug)]
pub struct ArityInfo {
    pub arity: Arity,
    pub key: String,
    pub offsets: Vec<Vec<usize>>,
    pub npos: usize,
    pieces: OnceLock<Vec<Piece>>,
    entries: OnceLock<Vec<EntryPlan>>,
}

pub type ArityRef = Arc<ArityInfo>;

type Interner = RwLock<HashMap<(Variance, String), ArityRef>>;

fn interner() -> &'static Interner {
    static CACHE: OnceLock<Interner> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// The shared canonical record for an arity; ids are reassigned canonically.
pub fn intern(a: &Arity) -> ArityRef {
    let key = a.canonical_key();
    let id = (a.variance(), key);
    if let Some(r) = interner().read().unwrap().get(&id) {
        return r.clone();
    }
    let arity = a.canonical();
    let (offsets, npos) = arity.offsets();
    let info = Arc::new(ArityInfo {
        arity,
        key: id.1.clone(),
        offsets,
        npos,
        pieces: OnceLock::new(),
        entries: OnceLock::new(),
    });
    interner().write().unwrap().entry(id).or_insert(info).clone()
}

pub fn intern_key(key: &str, variance: Variance) -> Result<ArityRef, ArityError> {
    if let Some(r) = interner().read().unwrap().get(&(variance, key.to_string())) {
        return Ok(r.clone());
    }
    Ok(intern(&Arity::parse_key(key, variance)?))
}

fn flatten_fill(fill: &Fill) -> Vec<Slot> {
    fill.iter().flatten().flatten().cloned().collect()
}

fn pieces_of(a: &Arity, fill: Fill) -> Vec<Piece> {
    a.decompose_fill(fill)
        .into_iter()
        .map(|c| {
            let arity = intern(&c.arity);
            let gather = flatten_fill(&c.fill);
            debug_assert_eq!(gather.len(), arity.npos);
            Piece { arity, gather }
        })
        .collect()
}

impl ArityInfo {
    pub fn dim(&self) -> usize {
        self.arity.dim()
    }

    pub fn variance(&self) -> Variance {
        self.arity.variance()
    }

    pub fn is_elemental(&self) -> bool {
        self.arity.is_elemental()
    }

    pub fn position(&self, nu: usize, j: usize, t: usize) -> usize {
        self.offsets[nu][j] + t
    }

    /// Positions of levels below `nu`, followed by those of level `nu`.
    pub fn level_range(&self, nu: usize) -> std::ops::Range<usize> {
        let start = self.offsets[nu][0];
        let end = if nu + 1 < self.offsets.len() { self.offsets[nu + 1][0] } else { self.npos };
        start..end
    }

    /// Elemental pieces of a general cell of this arity; gathers read this arity's
    /// positions.
    pub fn pieces(&self) -> &[Piece] {
        self.pieces.get_or_init(|| pieces_of(&self.arity, self.arity.identity_fill()))
    }

    /// For every position, the colour or the pieces of the cell it holds.
    pub fn entries(&self) -> &[EntryPlan] {
        self.entries.get_or_init(|| {
            let fill = self.arity.identity_fill();
            let mut out = Vec::with_capacity(self.npos);
            for (nu, lv) in self.arity.levels().iter().enumerate() {
                for (j, o) in lv.objects.iter().enumerate() {
                    let br = bracket_map(&self.arity.maekara(nu, j));
                    for t in 0..o.len() {
                        if nu == 0 {
                            out.push(EntryPlan::Colour);
                        } else {
                            let (b, f) = self.arity.sub_cell_fill(&fill, nu, br.apply(t), br.apply(t + 1));
                            out.push(EntryPlan::Cell(pieces_of(&b, f)));
                        }
                    }
                }
            }
            out
        })
    }

    /// Number of components the value at position `p` has.
    pub fn width(&self, p: usize) -> usize {
        match &self.entries()[p] {
            EntryPlan::Colour => 1,
            EntryPlan::Cell(ps) => ps.len(),
        }
    }
}

/// Reads a piece's values out of parent values.
pub fn gather<T: Clone>(values: &[Vec<T>], slots: &[Slot]) -> Vec<Vec<T>> {
    slots
        .iter()
        .map(|s| {
            let v = &values[s.src as usize];
            match &s.pick {
                None => v.clone(),
                Some(p) => p.iter().map(|&c| v[c as usize].clone()).collect(),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nullary_key() {
        assert_eq!(Arity::corolla(0, Variance::Symmetric).canonical_key(), "0,1:-");
        assert_eq!(Arity::corolla(2, Variance::Symmetric).canonical_key(), "2,1:1.1");
    }

    #[test]
    fn key_roundtrip() {
        for k in 1..=3 {
            for a in enumerate_arities(k, 2, Variance::Symmetric) {
                let key = a.canonical_key();
                assert_eq!(Arity::parse_key(&key, Variance::Symmetric).unwrap().canonical_key(), key);
            }
        }
    }

    #[test]
    fn identity_top_splits_into_unaries() {
        let a = Arity::from_tables(Variance::Symmetric, vec![(vec![2, 2], vec![vec![0, 1]])]).unwrap();
        let parts = a.decompose_general();
        assert_eq!(parts.len(), 2);
        assert!(parts.iter().all(|p| p.canonical_key() == "1,1:1"));
    }

    #[test]
    fn binary_plus_unary() {
        let a = Arity::from_tables(Variance::Symmetric, vec![(vec![3, 2], vec![vec![0, 0, 1]])]).unwrap();
        let keys: Vec<String> = a.decompose_general().iter().map(Arity::canonical_key).collect();
        assert_eq!(keys, vec!["2,1:1.1", "1,1:1"]);
    }

    #[test]
    fn elemental_decomposes_to_itself() {
        for a in enumerate_arities(3, 1, Variance::Symmetric) {
            let parts = a.decompose_general();
            assert_eq!(parts.len(), 1);
            assert_eq!(parts[0].canonical_key(), a.canonical_key());
        }
    }
}
