use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::arity::ArityRef;
use crate::ordcomb::Variance;
use crate::theory::{
    label, materialize, Enrichment, FinCategory, Header, Label, Theory, TheoryError, TheoryPresentation, Value,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MonoidalError {
    #[error("tensor of {0} and {1} is undefined")]
    Undefined(String, String),
    #[error("category laws fail: {0}")]
    Category(String),
    #[error("monoidal law fails: {0}")]
    Law(String),
}

/// A finite strict monoidal category.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoidalCategory {
    pub category: FinCategory,
    pub unit: Label,
    pub tensor_objects: BTreeMap<(Label, Label), Label>,
    pub tensor_arrows: BTreeMap<(Label, Label), Label>,
}

impl MonoidalCategory {
    pub fn tensor(&self, x: &Label, y: &Label) -> Option<&Label> {
        self.tensor_objects.get(&(x.clone(), y.clone()))
    }

    pub fn tensor_arrow(&self, f: &Label, g: &Label) -> Option<&Label> {
        self.tensor_arrows.get(&(f.clone(), g.clone()))
    }

    pub fn objects(&self) -> &[Label] {
        &self.category.objects
    }

    /// True when every arrow is an identity.
    pub fn is_discrete(&self) -> bool {
        self.category.arrows.len() == self.category.objects.len()
    }

    /// Tensor of a list of objects, left to right; the unit for the empty list.
    pub fn tensor_all<'a>(&self, xs: impl IntoIterator<Item = &'a Label>) -> Option<Label> {
        let mut acc = self.unit.clone();
        for x in xs {
            acc = self.tensor(&acc, x)?.clone();
        }
        Some(acc)
    }

    pub fn tensor_all_arrows<'a>(&self, fs: impl IntoIterator<Item = &'a Label>) -> Option<Label> {
        let mut acc = self.category.identity(&self.unit)?.clone();
        for f in fs {
            acc = self.tensor_arrow(&acc, f)?.clone();
        }
        Some(acc)
    }

    /// Checks category laws, strict associativity and unitality, functoriality of the
    /// tensor, and commutativity on objects and arrows when `symmetric`.
    pub fn check(&self, symmetric: bool) -> Result<(), MonoidalError> {
        self.category.check().map_err(MonoidalError::Category)?;
        let c = &self.category;
        let obs = &c.objects;
        let undefined = |x: &Label, y: &Label| MonoidalError::Undefined(x.to_string(), y.to_string());
        for x in obs {
            for y in obs {
                let xy = self.tensor(x, y).ok_or_else(|| undefined(x, y))?;
                if symmetric && Some(xy) != self.tensor(y, x) {
                    return Err(MonoidalError::Law(format!("{x}⊗{y} is not commutative")));
                }
                for z in obs {
                    let l = self.tensor(xy, z).ok_or_else(|| undefined(xy, z))?;
                    let yz = self.tensor(y, z).ok_or_else(|| undefined(y, z))?;
                    if Some(l) != self.tensor(x, yz) {
                        return Err(MonoidalError::Law(format!("associativity at {x},{y},{z}")));
                    }
                }
            }
            if self.tensor(&self.unit, x) != Some(x) || self.tensor(x, &self.unit) != Some(x) {
                return Err(MonoidalError::Law(format!("unit law at {x}")));
            }
        }
        for (f, (fs, ft)) in &c.arrows {
            for (g, (gs, gt)) in &c.arrows {
                let fg = self.tensor_arrow(f, g).ok_or_else(|| undefined(f, g))?;
                let ends = (self.tensor(fs, gs).cloned(), self.tensor(ft, gt).cloned());
                if c.ends(fg).map(|(s, t)| (Some(s.clone()), Some(t.clone()))) != Some(ends) {
                    return Err(MonoidalError::Law(format!("{f}⊗{g} has wrong ends")));
                }
                if symmetric && Some(fg) != self.tensor_arrow(g, f) {
                    return Err(MonoidalError::Law(format!("{f}⊗{g} is not commutative")));
                }
            }
        }
        for x in obs {
            for y in obs {
                let ids = (c.identity(x).unwrap(), c.identity(y).unwrap());
                if self.tensor_arrow(ids.0, ids.1) != c.identity(self.tensor(x, y).unwrap()) {
                    return Err(MonoidalError::Law(format!("tensor of identities at {x},{y}")));
                }
            }
        }
        for (f, (_, fy)) in &c.arrows {
            for (f2, (fy2, _)) in &c.arrows {
                if fy != fy2 {
                    continue;
                }
                for (g, (_, gy)) in &c.arrows {
                    for (g2, (gy2, _)) in &c.arrows {
                        if gy != gy2 {
                            continue;
                        }
                        let lhs = c.compose(self.tensor_arrow(f, g).unwrap(), self.tensor_arrow(f2, g2).unwrap());
                        let rhs = self.tensor_arrow(c.compose(f, f2).unwrap(), c.compose(g, g2).unwrap());
                        if lhs != rhs {
                            return Err(MonoidalError::Law(format!("interchange at {f},{f2},{g},{g2}")));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// The discrete monoidal category of `Z/n`, objects `0..n`, identities `id_k`.
pub fn cyclic_group(n: usize) -> MonoidalCategory {
    let objects: Vec<Label> = (0..n).map(|k| label(&k.to_string())).collect();
    let ids: Vec<Label> = (0..n).map(|k| label(&format!("id_{k}"))).collect();
    let mut category = FinCategory { objects: objects.clone(), ..Default::default() };
    let mut tensor_objects = BTreeMap::new();
    let mut tensor_arrows = BTreeMap::new();
    for a in 0..n {
        category.arrows.insert(ids[a].clone(), (objects[a].clone(), objects[a].clone()));
        category.identities.insert(objects[a].clone(), ids[a].clone());
        category.composition.insert((ids[a].clone(), ids[a].clone()), ids[a].clone());
        for b in 0..n {
            tensor_objects.insert((objects[a].clone(), objects[b].clone()), objects[(a + b) % n].clone());
            tensor_arrows.insert((ids[a].clone(), ids[b].clone()), ids[(a + b) % n].clone());
        }
    }
    MonoidalCategory { category, unit: objects[0].clone(), tensor_objects, tensor_arrows }
}

/// A commutative monoidal category read as a 0-theory: in finite categories, or in sets
/// through its objects when `enriched` is false.
#[derive(Clone, Debug)]
pub struct MonoidalTheory {
    pub monoidal: Arc<MonoidalCategory>,
    pub enriched: bool,
    pub bound: usize,
}

impl Theory for MonoidalTheory {
    fn header(&self) -> Header {
        let enrichment = if self.enriched { Enrichment::FiniteCategories } else { Enrichment::Sets };
        Header { dim: 0, variance: Variance::Symmetric, colour_depth: 0, bound: self.bound, enrichment }
    }

    fn cells(&self, a: &ArityRef, _ty: &[Value]) -> Result<Vec<Label>, TheoryError> {
        self.header().check_bound(a)?;
        Ok(self.monoidal.objects().to_vec())
    }

    fn compose(&self, a: &ArityRef, fill: &[Value]) -> Result<Label, TheoryError> {
        self.header().check_bound(a)?;
        self.monoidal
            .tensor_all(fill.iter().map(|v| &v[0]))
            .ok_or_else(|| TheoryError::IllTyped(format!("tensor along {}", a.key)))
    }

    fn category(&self, a: &ArityRef, _ty: &[Value]) -> Result<Option<Arc<FinCategory>>, TheoryError> {
        self.header().check_bound(a)?;
        Ok(self.enriched.then(|| Arc::new(self.monoidal.category.clone())))
    }

    fn compose_arrows(&self, a: &ArityRef, fill: &[Value]) -> Result<Label, TheoryError> {
        if !self.enriched {
            return Ok(label(crate::theory::ID));
        }
        self.monoidal
            .tensor_all_arrows(fill.iter().map(|v| &v[0]))
            .ok_or_else(|| TheoryError::IllTyped(format!("tensor of arrows along {}", a.key)))
    }
}

pub fn monoidal_theory(m: &MonoidalCategory, enriched: bool, bound: usize) -> TheoryPresentation {
    let t = MonoidalTheory { monoidal: Arc::new(m.clone()), enriched, bound };
    materialize(&t, bound).expect("monoidal theory")
}
