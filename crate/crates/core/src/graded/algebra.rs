use std::collections::{BTreeMap, HashMap, HashSet};

use itertools::Itertools;
use rayon::prelude::*;

use super::{from_projection, pair, GradedError, GradedTheoryPresentation};
use crate::arity::ArityRef;
use crate::theory::{
    elemental_arities, enumerate_morphisms, for_each_fill, label, materialize, validate_theory, CellKey, CellRef,
    Enrichment, Header, Label, MorphismOptions, Theory, TheoryError, TheoryMorphism, TheoryPresentation, Value,
};

pub use crate::constructions::{detheorize, ColourSystem};

/// An algebra: the colours over each base colour and the action, a morphism from the
/// detheorized theory of those colours into the target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraPresentation {
    pub colours: ColourSystem,
    pub action: TheoryMorphism,
}

/// Every colour system with at most `budget` colours in total, colours over a base
/// colour named `x1, x2, ...`.
pub fn colour_systems(base_colours: &[Label], budget: usize) -> Vec<ColourSystem> {
    let mut out = Vec::new();
    let counts = base_colours.iter().map(|_| 0..=budget).multi_cartesian_product();
    for c in counts {
        if c.iter().sum::<usize>() > budget {
            continue;
        }
        let sys = base_colours
            .iter()
            .zip(&c)
            .filter(|(_, &k)| k > 0)
            .map(|(u, &k)| (u.clone(), (1..=k).map(|i| label(&format!("x{i}"))).collect()))
            .collect();
        out.push(sys);
    }
    if base_colours.is_empty() {
        out.push(ColourSystem::new());
    }
    out
}

/// The algebras of `u` in `v` over a fixed colour system.
pub fn enumerate_algebras_for(
    u: &TheoryPresentation,
    v: &dyn Theory,
    colours: &ColourSystem,
    opts: MorphismOptions,
) -> Result<Vec<AlgebraPresentation>, GradedError> {
    let t = detheorize(u, 1, colours)?;
    Ok(enumerate_morphisms(&t, v, opts)?
        .into_iter()
        .map(|action| AlgebraPresentation { colours: colours.clone(), action })
        .collect())
}

/// All algebras of `u` in `v` with at most `budget` colours.
pub fn enumerate_algebras(
    u: &TheoryPresentation,
    v: &(dyn Theory + Sync),
    budget: usize,
    opts: MorphismOptions,
) -> Result<Vec<AlgebraPresentation>, GradedError> {
    let systems = colour_systems(&u.colours(), budget);
    let parts: Vec<Vec<AlgebraPresentation>> = systems
        .par_iter()
        .map(|sys| enumerate_algebras_for(u, v, sys, opts))
        .collect::<Result<_, _>>()?;
    Ok(parts.into_iter().flatten().collect())
}

/// A candidate graded 1-theory in pair form: the chosen cells, each alone in its degree.
struct Thin<'a> {
    base: &'a TheoryPresentation,
    colours: Vec<Label>,
    degree: HashMap<Label, Label>,
    chosen: HashSet<(CellKey, Label)>,
}

impl Thin<'_> {
    fn degrees(&self, a: &ArityRef, values: &[Value]) -> Option<Vec<Value>> {
        crate::theory::map_values_with(a, values, &|d: usize, _: &CellKey, l: &Label| {
            if d == 0 {
                self.degree.get(l).cloned()
            } else {
                Some(l.clone())
            }
        })
    }
}

impl Theory for Thin<'_> {
    fn header(&self) -> Header {
        Header { enrichment: Enrichment::Sets, ..self.base.header }
    }

    fn cells(&self, a: &ArityRef, ty: &[Value]) -> Result<Vec<Label>, TheoryError> {
        if a.dim() == 0 {
            return Ok(self.colours.clone());
        }
        let Some(deg) = self.degrees(a, ty) else { return Ok(vec![]) };
        let key = CellKey::new(a, ty);
        Ok(self.base.cells(a, &deg)?.into_iter().filter(|f| self.chosen.contains(&(key.clone(), f.clone()))).collect())
    }

    fn compose(&self, a: &ArityRef, fill: &[Value]) -> Result<Label, TheoryError> {
        let deg = self.degrees(a, fill).ok_or_else(|| TheoryError::IllTyped(a.key.clone()))?;
        self.base.compose(a, &deg)
    }
}

/// Every graded 1-theory over `u` with the given colours and at most one multimap in
/// each degree over each type, as validated presentations.
pub fn enumerate_thin_graded(
    u: &TheoryPresentation,
    colours: &ColourSystem,
    bound: usize,
) -> Result<Vec<GradedTheoryPresentation>, GradedError> {
    if u.header.dim != 1 || u.header.is_trivial(0) {
        return Err(GradedError::Unsupported("thin gradings need a coloured 1-theory base".into()));
    }
    let mut list = Vec::new();
    let mut degree = HashMap::new();
    for (c, xs) in colours {
        for x in xs {
            let l = pair(c, x);
            degree.insert(l.clone(), c.clone());
            list.push(l);
        }
    }
    let colour_view = Thin { base: u, colours: list.clone(), degree: degree.clone(), chosen: HashSet::new() };
    let mut candidates = Vec::new();
    for a in elemental_arities(1, bound, u.header.variance).iter() {
        for_each_fill(&colour_view, a, a.npos, &mut |ty| {
            let deg = colour_view.degrees(a, ty).expect("colour degrees");
            for f in u.cells(a, &deg)? {
                candidates.push((CellKey::new(a, ty), f));
            }
            Ok(())
        })?;
    }
    if candidates.len() > 16 {
        return Err(GradedError::Unsupported(format!("{} candidate multimaps exceed the search limit", candidates.len())));
    }
    let masks: Vec<u32> = (0..1u32 << candidates.len()).collect();
    let found: Vec<Option<GradedTheoryPresentation>> = masks
        .par_iter()
        .map(|&mask| {
            let chosen =
                candidates.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, c)| c.clone()).collect();
            let thin = Thin { base: u, colours: list.clone(), degree: degree.clone(), chosen };
            let y = materialize(&thin, bound)?;
            let report = validate_theory(&y);
            if !report.passed() || !report.warnings.is_empty() {
                return Ok(None);
            }
            let mut cells = BTreeMap::new();
            for (d, stratum) in y.strata.iter().enumerate() {
                for (key, labels) in stratum {
                    for l in labels {
                        let img = if d == 0 { degree[l].clone() } else { l.clone() };
                        cells.insert(CellRef { dim: d, key: key.clone(), label: l.clone() }, img);
                    }
                }
            }
            let p = TheoryMorphism { source: y.header, target: u.header, cells };
            from_projection(&y, &p, u).map(Some)
        })
        .collect::<Result<_, GradedError>>()?;
    Ok(found.into_iter().flatten().collect())
}
