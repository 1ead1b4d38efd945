//! Finite ordinals and finite sets, maps between them, the bracket functor into the
//! simplex category, and families and nerves over brackets together with their
//! push-forwards along maps.
//!
//! Elements of an ordinal of size `n` are addressed by position `0..n` and printed as
//! `1..=n`. Elements of its bracket are `0..=n`.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrdError {
    #[error("image {image} out of range for target of size {target}")]
    OutOfRange { image: usize, target: usize },
    #[error("planar map is not order-preserving at position {0}")]
    NotMonotone(usize),
    #[error("index mismatch: expected {expected} entries, found {found}")]
    IndexMismatch { expected: usize, found: usize },
    #[error("arrows {0} and {1} are not composable")]
    NotComposable(usize, usize),
    #[error("variance mismatch between composed maps")]
    VarianceMismatch,
}

/// Whether index sets are plain finite sets (any map) or ordinals (monotone maps).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variance {
    Symmetric,
    Planar,
}

impl Variance {
    pub fn as_str(self) -> &'static str {
        match self {
            Variance::Symmetric => "symmetric",
            Variance::Planar => "planar",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "symmetric" => Some(Variance::Symmetric),
            "planar" => Some(Variance::Planar),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinOrd {
    pub size: usize,
}

impl FinOrd {
    pub fn new(size: usize) -> Self {
        FinOrd { size }
    }

    pub fn elements(self) -> std::ops::Range<usize> {
        0..self.size
    }
}

/// The bracket `[I]`: `|I| + 1` points `0..=|I|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BracketOrd {
    pub base: FinOrd,
}

impl BracketOrd {
    pub fn len(self) -> usize {
        self.base.size + 1
    }

    pub fn is_empty(self) -> bool {
        false
    }

    pub fn top(self) -> usize {
        self.base.size
    }

    pub fn elements(self) -> std::ops::RangeInclusive<usize> {
        0..=self.base.size
    }
}

pub fn bracket(i: FinOrd) -> BracketOrd {
    BracketOrd { base: i }
}

/// A total map between canonical index sets.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinMap {
    images: Vec<usize>,
    target: usize,
    variance: Variance,
}

impl FinMap {
    pub fn new(images: Vec<usize>, target: usize, variance: Variance) -> Result<Self, OrdError> {
        for (i, &image) in images.iter().enumerate() {
            if image >= target {
                return Err(OrdError::OutOfRange { image, target });
            }
            if variance == Variance::Planar && i > 0 && images[i - 1] > image {
                return Err(OrdError::NotMonotone(i));
            }
        }
        Ok(FinMap { images, target, variance })
    }

    pub fn identity(size: usize, variance: Variance) -> Self {
        FinMap { images: (0..size).collect(), target: size, variance }
    }

    /// The unique map to a point.
    pub fn to_point(size: usize, variance: Variance) -> Self {
        FinMap { images: vec![0; size], target: 1, variance }
    }

    pub fn source(&self) -> usize {
        self.images.len()
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn variance(&self) -> Variance {
        self.variance
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &FinMap) -> Result<FinMap, OrdError> {
        if self.target != g.source() {
            return Err(OrdError::IndexMismatch { expected: g.source(), found: self.target });
        }
        if self.variance != g.variance {
            return Err(OrdError::VarianceMismatch);
        }
        Ok(FinMap {
            images: self.images.iter().map(|&i| g.images[i]).collect(),
            target: g.target,
            variance: self.variance,
        })
    }

    /// Positions mapping to `j`, in increasing order.
    pub fn fiber(&self, j: usize) -> Vec<usize> {
        (0..self.images.len()).filter(|&i| self.images[i] == j).collect()
    }

    pub fn is_monotone(&self) -> bool {
        self.images.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn is_bijective(&self) -> bool {
        if self.source() != self.target {
            return false;
        }
        let mut seen = vec![false; self.target];
        for &i in &self.images {
            if seen[i] {
                return false;
            }
            seen[i] = true;
        }
        true
    }

    /// The same table read with another variance.
    pub fn with_variance(&self, variance: Variance) -> Result<FinMap, OrdError> {
        FinMap::new(self.images.clone(), self.target, variance)
    }
}

impl fmt::Display for FinMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, image) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", image + 1)?;
        }
        write!(f, "]->{}", self.target)
    }
}

/// A monotone map `[J] → [I]` in the simplex category, stored by its values on `0..=|J|`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DeltaMap {
    values: Vec<usize>,
    target_top: usize,
}

impl DeltaMap {
    pub fn identity(size: usize) -> Self {
        DeltaMap { values: (0..=size).collect(), target_top: size }
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn source_top(&self) -> usize {
        self.values.len() - 1
    }

    pub fn target_top(&self) -> usize {
        self.target_top
    }

    pub fn apply(&self, p: usize) -> usize {
        self.values[p]
    }

    /// `g ∘ self` where `g` is applied after `self`.
    pub fn then(&self, g: &DeltaMap) -> Result<DeltaMap, OrdError> {
        if self.target_top != g.source_top() {
            return Err(OrdError::IndexMismatch {
                expected: g.source_top() + 1,
                found: self.target_top + 1,
            });
        }
        Ok(DeltaMap {
            values: self.values.iter().map(|&p| g.values[p]).collect(),
            target_top: g.target_top,
        })
    }

    pub fn is_monotone(&self) -> bool {
        self.values.windows(2).all(|w| w[0] <= w[1])
    }
}

/// `[φ](j) = #{i : φ(i) < j}` for `j ∈ [J]`.
pub fn bracket_map(phi: &FinMap) -> DeltaMap {
    let mut below = vec![0usize; phi.target() + 1];
    for &image in phi.images() {
        below[image + 1] += 1;
    }
    for j in 1..below.len() {
        below[j] += below[j - 1];
    }
    DeltaMap { values: below, target_top: phi.source() }
}

/// `(φ_! x)_j = x_{[φ](j)}`.
pub fn pushforward_family<T: Clone>(phi: &FinMap, x: &[T]) -> Result<Vec<T>, OrdError> {
    if x.len() != phi.source() + 1 {
        return Err(OrdError::IndexMismatch { expected: phi.source() + 1, found: x.len() });
    }
    let b = bracket_map(phi);
    Ok(b.values().iter().map(|&p| x[p].clone()).collect())
}

/// The composition structure a nerve lives in.
pub trait Category {
    type Object: Clone + PartialEq + fmt::Debug;
    type Arrow: Clone + fmt::Debug;

    fn source(&self, f: &Self::Arrow) -> Self::Object;
    fn target(&self, f: &Self::Arrow) -> Self::Object;
    fn identity(&self, x: &Self::Object) -> Self::Arrow;
    /// `second ∘ first`, or `None` if they do not meet.
    fn compose(&self, first: &Self::Arrow, second: &Self::Arrow) -> Option<Self::Arrow>;
}

/// Objects over `[I]` and arrows over `I`; arrow `i` runs from object `i` to object `i + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Nerve<O, A> {
    pub objects: Vec<O>,
    pub arrows: Vec<A>,
}

impl<O, A> Nerve<O, A> {
    pub fn length(&self) -> usize {
        self.arrows.len()
    }
}

pub fn check_nerve<C: Category>(cat: &C, f: &Nerve<C::Object, C::Arrow>) -> Result<(), OrdError> {
    if f.objects.len() != f.arrows.len() + 1 {
        return Err(OrdError::IndexMismatch { expected: f.arrows.len() + 1, found: f.objects.len() });
    }
    for (i, a) in f.arrows.iter().enumerate() {
        if cat.source(a) != f.objects[i] || cat.target(a) != f.objects[i + 1] {
            return Err(OrdError::NotComposable(i, i + 1));
        }
    }
    Ok(())
}

/// Composite of the arrows `a..b` of a nerve; the identity at object `a` when `a == b`.
pub fn nerve_composite<C: Category>(
    cat: &C,
    f: &Nerve<C::Object, C::Arrow>,
    a: usize,
    b: usize,
) -> Result<C::Arrow, OrdError> {
    let mut acc = cat.identity(&f.objects[a]);
    for i in a..b {
        acc = cat.compose(&acc, &f.arrows[i]).ok_or(OrdError::NotComposable(a, i))?;
    }
    Ok(acc)
}

/// `(φ_! f)_j` is the composite of the arrows strictly between `[φ](j−1)` and `[φ](j)`.
pub fn pushforward_nerve<C: Category>(
    cat: &C,
    phi: &FinMap,
    f: &Nerve<C::Object, C::Arrow>,
) -> Result<Nerve<C::Object, C::Arrow>, OrdError> {
    check_nerve(cat, f)?;
    if f.arrows.len() != phi.source() {
        return Err(OrdError::IndexMismatch { expected: phi.source(), found: f.arrows.len() });
    }
    let b = bracket_map(phi);
    let objects = b.values().iter().map(|&p| f.objects[p].clone()).collect();
    let arrows = (0..phi.target())
        .map(|j| nerve_composite(cat, f, b.apply(j), b.apply(j + 1)))
        .collect::<Result<_, _>>()?;
    Ok(Nerve { objects, arrows })
}

/// True iff the entry at the top of the bracket is a singleton.
pub fn is_elemental(sizes: &[usize]) -> bool {
    sizes.last() == Some(&1)
}

/// Finite sets (or ordinals) and maps between them, with objects given by size.
#[derive(Clone, Copy, Debug)]
pub struct FinSets(pub Variance);

impl Category for FinSets {
    type Object = usize;
    type Arrow = FinMap;

    fn source(&self, f: &FinMap) -> usize {
        f.source()
    }

    fn target(&self, f: &FinMap) -> usize {
        f.target()
    }

    fn identity(&self, x: &usize) -> FinMap {
        FinMap::identity(*x, self.0)
    }

    fn compose(&self, first: &FinMap, second: &FinMap) -> Option<FinMap> {
        first.then(second).ok()
    }
}

/// All maps `source → target` (monotone ones when planar) in lexicographic order of tables.
pub fn enumerate_maps(source: usize, target: usize, variance: Variance) -> Vec<FinMap> {
    let mut out = Vec::new();
    if source == 0 {
        out.push(FinMap { images: vec![], target, variance });
        return out;
    }
    if target == 0 {
        return out;
    }
    let mut images = vec![0usize; source];
    loop {
        if variance == Variance::Symmetric || images.windows(2).all(|w| w[0] <= w[1]) {
            out.push(FinMap { images: images.clone(), target, variance });
        }
        let mut pos = source;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            images[pos] += 1;
            if images[pos] < target {
                break;
            }
            images[pos] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bracket_of_empty_is_a_point() {
        let b = bracket(FinOrd::new(0));
        assert_eq!(b.elements().collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn bracket_map_of_fold() {
        let phi = FinMap::to_point(2, Variance::Planar);
        assert_eq!(bracket_map(&phi).values(), &[0, 2]);
        let phi = FinMap::to_point(0, Variance::Planar);
        assert_eq!(bracket_map(&phi).values(), &[0, 0]);
    }

    #[test]
    fn planar_rejects_decreasing_tables() {
        assert_eq!(
            FinMap::new(vec![1, 0], 2, Variance::Planar),
            Err(OrdError::NotMonotone(1))
        );
        assert!(FinMap::new(vec![1, 0], 2, Variance::Symmetric).is_ok());
    }

    #[test]
    fn display_is_one_based() {
        let phi = FinMap::new(vec![0, 0, 1], 2, Variance::Planar).unwrap();
        assert_eq!(phi.to_string(), "[1,1,2]->2");
    }
}
