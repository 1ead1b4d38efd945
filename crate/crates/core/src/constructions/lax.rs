use std::collections::BTreeMap;

use itertools::Itertools;

use crate::theory::Label;
use crate::zoo::MonoidalCategory;

/// A lax monoidal functor between strict monoidal categories.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaxFunctor {
    pub objects: BTreeMap<Label, Label>,
    pub arrows: BTreeMap<Label, Label>,
    /// `F(x) ⊗ F(y) → F(x ⊗ y)`.
    pub multiplication: BTreeMap<(Label, Label), Label>,
    /// `I → F(I)`.
    pub unit: Label,
}

/// All lax monoidal functors `a → b` compatible with the (identity) symmetries, by brute
/// force over object maps, arrow maps and structure arrows.
pub fn enumerate_lax_functors(a: &MonoidalCategory, b: &MonoidalCategory) -> Vec<LaxFunctor> {
    let ca = &a.category;
    let cb = &b.category;
    let mut out = Vec::new();
    let objs = a.objects();
    for images in std::iter::repeat_n(b.objects().iter().cloned(), objs.len()).multi_cartesian_product() {
        let fo: BTreeMap<Label, Label> = objs.iter().cloned().zip(images).collect();
        let arrow_choices: Vec<Vec<Label>> = ca.arrows.values().map(|(s, t)| cb.hom(&fo[s], &fo[t])).collect();
        for arrow_images in arrow_choices.into_iter().multi_cartesian_product() {
            let fa: BTreeMap<Label, Label> = ca.arrows.keys().cloned().zip(arrow_images).collect();
            if !is_functor(a, b, &fo, &fa) {
                continue;
            }
            let pairs: Vec<(Label, Label)> = objs.iter().cartesian_product(objs).map(|(x, y)| (x.clone(), y.clone())).collect();
            let mu_choices: Vec<Vec<Label>> = pairs
                .iter()
                .map(|(x, y)| {
                    let src = b.tensor(&fo[x], &fo[y]).expect("tensor");
                    cb.hom(src, &fo[a.tensor(x, y).expect("tensor")])
                })
                .collect();
            let unit_choices = cb.hom(&b.unit, &fo[&a.unit]);
            for mus in mu_choices.into_iter().multi_cartesian_product() {
                let mu: BTreeMap<(Label, Label), Label> = pairs.iter().cloned().zip(mus).collect();
                for eps in &unit_choices {
                    let f = LaxFunctor { objects: fo.clone(), arrows: fa.clone(), multiplication: mu.clone(), unit: eps.clone() };
                    if is_lax(a, b, &f) {
                        out.push(f);
                    }
                }
            }
        }
    }
    out
}

fn is_functor(a: &MonoidalCategory, b: &MonoidalCategory, fo: &BTreeMap<Label, Label>, fa: &BTreeMap<Label, Label>) -> bool {
    let (ca, cb) = (&a.category, &b.category);
    ca.identities.iter().all(|(x, id)| cb.identity(&fo[x]) == Some(&fa[id]))
        && ca.composition.iter().all(|((f, g), gf)| cb.compose(&fa[f], &fa[g]) == Some(&fa[gf]))
}

fn is_lax(a: &MonoidalCategory, b: &MonoidalCategory, f: &LaxFunctor) -> bool {
    let (ca, cb) = (&a.category, &b.category);
    let mu = |x: &Label, y: &Label| &f.multiplication[&(x.clone(), y.clone())];
    let id = |x: &Label| cb.identity(x).expect("identity").clone();
    let comp = |g: &Label, h: &Label| cb.compose(g, h).cloned();
    let tens = |g: &Label, h: &Label| b.tensor_arrow(g, h).cloned();
    for (s, (x, x2)) in &ca.arrows {
        for (t, (y, y2)) in &ca.arrows {
            let st = a.tensor_arrow(s, t).expect("tensor of arrows");
            let lhs = tens(&f.arrows[s], &f.arrows[t]).and_then(|ft| comp(&ft, mu(x2, y2)));
            let rhs = comp(mu(x, y), &f.arrows[st]);
            if lhs.is_none() || lhs != rhs {
                return false;
            }
        }
    }
    for x in a.objects() {
        for y in a.objects() {
            if mu(x, y) != mu(y, x) {
                return false;
            }
            for z in a.objects() {
                let xy = a.tensor(x, y).unwrap();
                let yz = a.tensor(y, z).unwrap();
                let lhs = tens(mu(x, y), &id(&f.objects[z])).and_then(|g| comp(&g, mu(xy, z)));
                let rhs = tens(&id(&f.objects[x]), mu(y, z)).and_then(|g| comp(&g, mu(x, yz)));
                if lhs.is_none() || lhs != rhs {
                    return false;
                }
            }
        }
        let fx = &f.objects[x];
        let left = tens(&f.unit, &id(fx)).and_then(|g| comp(&g, mu(&a.unit, x)));
        let right = tens(&id(fx), &f.unit).and_then(|g| comp(&g, mu(x, &a.unit)));
        if left.as_ref() != Some(&id(fx)) || right.as_ref() != Some(&id(fx)) {
            return false;
        }
    }
    true
}
