use std::collections::{BTreeMap, HashMap};

use crate::arity::ArityRef;
use crate::theory::{
    materialize, CellKey, Enrichment, Header, Label, Theory, TheoryError, TheoryPresentation, Value,
};

/// Colours of a graded theory below the first base dimension, listed per base colour.
pub type ColourSystem = BTreeMap<Label, Vec<Label>>;

/// Pair colours `u|x` over the base colours, and the base's own cells over their
/// degrees in every higher dimension.
struct Detheorized<'a> {
    base: &'a TheoryPresentation,
    colours: Vec<Label>,
    degree: HashMap<Label, Label>,
}

impl Detheorized<'_> {
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

impl Theory for Detheorized<'_> {
    fn header(&self) -> Header {
        Header { enrichment: Enrichment::Sets, ..self.base.header }
    }

    fn cells(&self, a: &ArityRef, ty: &[Value]) -> Result<Vec<Label>, TheoryError> {
        if a.dim() == 0 {
            return Ok(self.colours.clone());
        }
        match self.degrees(a, ty) {
            Some(deg) => self.base.cells(a, &deg),
            None => Ok(vec![]),
        }
    }

    fn compose(&self, a: &ArityRef, fill: &[Value]) -> Result<Label, TheoryError> {
        let deg = self
            .degrees(a, fill)
            .ok_or_else(|| TheoryError::IllTyped(format!("fill over {} is not typed by colours", a.key)))?;
        self.base.compose(a, &deg)
    }
}

/// The detheorized theory of `u` with `colours` in dimensions below `depth`. Depth 0
/// returns `u`; depth 1 replaces the colours of `u` by the given colours, each over its
/// base colour.
pub fn detheorize(u: &TheoryPresentation, depth: usize, colours: &ColourSystem) -> Result<TheoryPresentation, TheoryError> {
    match depth {
        0 if colours.is_empty() => Ok(u.clone()),
        0 => Err(TheoryError::IllTyped("colours given at depth 0".into())),
        1 => {
            if u.header.is_trivial(0) {
                return Err(TheoryError::IllTyped("the base has no colours".into()));
            }
            let base_colours = u.colours();
            let mut list = Vec::new();
            let mut degree = HashMap::new();
            for (c, xs) in colours {
                if !base_colours.contains(c) {
                    return Err(TheoryError::IllTyped(format!("{c} is not a colour of the base")));
                }
                for x in xs {
                    let l = crate::graded::pair(c, x);
                    degree.insert(l.clone(), c.clone());
                    list.push(l);
                }
            }
            materialize(&Detheorized { base: u, colours: list, degree }, u.header.bound)
        }
        _ => Err(TheoryError::Unsupported(format!("colour systems of depth {depth}"))),
    }
}
