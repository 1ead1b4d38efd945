use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use rayon::prelude::*;

use super::engine::{cells_at, check_type, compose_into, elemental_arities, for_each_fill, mul_values, output_cell};
use super::{show_values, Enrichment, Label, Theory, TheoryError, TheoryPresentation, Value};
use crate::arity::{gather, intern, intern_key, Arity, ArityRef, EntryPlan};
use crate::ordcomb::{enumerate_maps, Variance};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Violation {
    pub arity: String,
    pub law: String,
    pub witness: String,
    pub expected: String,
    pub actual: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} arity={} witness=[{}] expected=[{}] actual=[{}]",
            self.law, self.arity, self.witness, self.expected, self.actual
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub warnings: Vec<String>,
    /// Number of law instances checked.
    pub instances: usize,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn merge(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
        self.warnings.extend(other.warnings);
        self.instances += other.instances;
    }

    pub fn violation(&mut self, arity: &str, law: &str, witness: String, expected: String, actual: String) {
        self.violations.push(Violation { arity: arity.to_string(), law: law.to_string(), witness, expected, actual });
    }

    fn error(&mut self, arity: &str, e: &TheoryError) {
        self.violation(arity, "error", String::new(), String::new(), e.to_string());
    }

    /// Sorts violations by arity key and removes duplicate warnings.
    pub fn finish(mut self) -> Self {
        self.violations.sort();
        self.violations.dedup();
        let w: BTreeSet<String> = self.warnings.drain(..).collect();
        self.warnings = w.into_iter().collect();
        self
    }

    /// One line per violation, then one per warning.
    pub fn lines(&self) -> Vec<String> {
        let mut out: Vec<String> = self.violations.iter().map(ToString::to_string).collect();
        out.extend(self.warnings.iter().map(|w| format!("warning: {w}")));
        out
    }
}

/// Checks a presentation: table keys are well typed, composition is complete, closed
/// and associative (unit and identity laws included), relabelings act bijectively on
/// 1-theories, and hom categories and composition functors are lawful.
pub fn validate_theory(p: &TheoryPresentation) -> ValidationReport {
    let mut r = check_tables(p);
    r.merge(validate_laws(p, p.header.bound));
    r.finish()
}

fn check_tables(p: &TheoryPresentation) -> ValidationReport {
    let mut r = ValidationReport::default();
    let h = p.header;
    let resolve = |key: &str, r: &mut ValidationReport| match intern_key(key, h.variance) {
        Ok(a) if a.arity.max_index() <= h.bound && a.is_elemental() => Some(a),
        Ok(_) => {
            r.violation(key, "key-shape", String::new(), "elemental arity within bound".into(), key.into());
            None
        }
        Err(e) => {
            r.violation(key, "key-shape", String::new(), "arity key".into(), e.to_string());
            None
        }
    };
    for (d, stratum) in p.strata.iter().enumerate() {
        if h.is_trivial(d) && !stratum.is_empty() {
            r.violation("", "trivial-stratum", format!("dimension {d}"), "no entries".into(), "entries".into());
        }
        for (key, labels) in stratum {
            let Some(a) = resolve(&key.arity, &mut r) else { continue };
            let bad_len = a.dim() != d || key.values.len() != a.npos;
            let typed = if bad_len { Ok(Some("wrong number of positions".into())) } else { check_type(p, &a, &key.values) };
            match typed {
                Ok(None) => {}
                Ok(Some(msg)) => r.violation(&key.arity, "ill-typed-key", show_values(&key.values), "well-typed type".into(), msg),
                Err(e) => r.error(&key.arity, &e),
            }
            let distinct: BTreeSet<&Label> = labels.iter().collect();
            if distinct.len() != labels.len() {
                r.violation(&key.arity, "duplicate-label", show_values(&key.values), "distinct labels".into(), labels.join(","));
            }
        }
    }
    for key in p.composition.keys() {
        let Some(a) = resolve(&key.arity, &mut r) else { continue };
        if a.dim() != h.dim + 1 || key.values.len() + 1 != a.npos {
            r.violation(&key.arity, "ill-typed-key", show_values(&key.values), "composition frame".into(), "wrong shape".into());
            continue;
        }
        match check_type(p, &a, &key.values) {
            Ok(None) => {}
            Ok(Some(msg)) => r.violation(&key.arity, "ill-typed-key", show_values(&key.values), "well-typed inputs".into(), msg),
            Err(e) => r.error(&key.arity, &e),
        }
    }
    r
}

/// The law checks shared by presentations and lazily computed theories.
pub fn validate_laws(t: &dyn Theory, bound: usize) -> ValidationReport {
    let h = t.header();
    let n = h.dim;
    let mut r = ValidationReport::default();
    let comps: Vec<ValidationReport> = elemental_arities(n + 1, bound, h.variance)
        .par_iter()
        .map(|a| check_composites(t, a))
        .collect();
    comps.into_iter().for_each(|c| r.merge(c));
    let assoc: Vec<ValidationReport> = elemental_arities(n + 2, bound, h.variance)
        .par_iter()
        .map(|a| check_associativity(t, a))
        .collect();
    assoc.into_iter().for_each(|c| r.merge(c));
    if n == 1 && h.variance == Variance::Symmetric {
        r.merge(check_relabelings(t, bound));
    }
    if h.enrichment == Enrichment::FiniteCategories {
        r.merge(check_functoriality(t, bound));
    }
    r
}

fn check_composites(t: &dyn Theory, a: &ArityRef) -> ValidationReport {
    let mut r = ValidationReport::default();
    let last = a.npos - 1;
    let res = for_each_fill(t, a, last, &mut |fill| {
        r.instances += 1;
        match t.compose(a, fill) {
            Ok(l) => {
                let (oa, oty) = output_cell(a, fill);
                let allowed = cells_at(t, &oa, &oty)?;
                if !allowed.contains(&l) {
                    r.violation(&a.key, "closure", show_values(fill), allowed.join("|"), l.to_string());
                }
            }
            Err(TheoryError::MissingUnit { key }) => r.warnings.push(format!("no unit declared for arity {key}")),
            Err(TheoryError::MissingComposition { witness, .. }) => {
                r.violation(&a.key, "missing-composition", witness, "an entry".into(), "none".into())
            }
            Err(e) => return Err(e),
        }
        Ok(())
    });
    if let Err(e) = res {
        r.error(&a.key, &e);
    }
    r
}

/// Composes stepwise and all at once along an elemental `(n+2)`-arity; returns the two
/// results when they differ.
pub(crate) fn associativity_instance(
    t: &dyn Theory,
    a: &ArityRef,
    given: &[Value],
) -> Result<Option<(Vec<Value>, Vec<Value>)>, TheoryError> {
    let n = a.dim() - 2;
    let steps = a.arity.levels()[n + 1].objects[0].len();
    let outputs = a.offsets[n][steps]..a.offsets[n][steps] + a.arity.levels()[n].objects[steps].len();
    let mut lhs = given.to_vec();
    for s in 0..steps {
        let EntryPlan::Cell(pieces) = &a.entries()[a.position(n + 1, 0, s)] else { unreachable!() };
        compose_into(t, a, pieces, &mut lhs)?;
    }
    let mut rhs = given.to_vec();
    let EntryPlan::Cell(pieces) = &a.entries()[a.position(n + 1, 1, 0)] else { unreachable!() };
    compose_into(t, a, pieces, &mut rhs)?;
    let (l, r) = (lhs[outputs.clone()].to_vec(), rhs[outputs].to_vec());
    Ok(if l == r { None } else { Some((l, r)) })
}

fn check_associativity(t: &dyn Theory, a: &ArityRef) -> ValidationReport {
    let mut r = ValidationReport::default();
    let n = a.dim() - 2;
    let Some(&upto) = a.offsets[n].get(1) else { return r };
    let res = for_each_fill(t, a, upto, &mut |given| {
        r.instances += 1;
        match associativity_instance(t, a, given) {
            Ok(None) => {}
            Ok(Some((l, rr))) => r.violation(&a.key, "associativity", show_values(given), show_values(&l), show_values(&rr)),
            Err(TheoryError::MissingUnit { key }) => r.warnings.push(format!("no unit declared for arity {key}")),
            Err(TheoryError::MissingComposition { key, witness }) => {
                r.violation(&key, "missing-composition", witness, "an entry".into(), "none".into())
            }
            Err(e) => return Err(e),
        }
        Ok(())
    });
    if let Err(e) = res {
        r.error(&a.key, &e);
    }
    r
}

/// The composite that relabels a cell over `S → *` along a bijection `σ` using units.
fn relabel_arity(sigma: &[usize]) -> ArityRef {
    let s = sigma.len();
    intern(
        &Arity::from_tables(
            Variance::Symmetric,
            vec![(vec![s, s, 1], vec![sigma.to_vec(), vec![0; s]]), (vec![2, 1], vec![vec![0, 0]])],
        )
        .expect("relabeling arity"),
    )
}

fn check_relabelings(t: &dyn Theory, bound: usize) -> ValidationReport {
    let mut r = ValidationReport::default();
    let colours = match cells_at(t, &intern(&Arity::point(Variance::Symmetric)), &[]) {
        Ok(c) => c,
        Err(e) => {
            r.error("pt", &e);
            return r;
        }
    };
    let unit_arity = intern(&Arity::from_tables(Variance::Symmetric, vec![(vec![1], vec![]), (vec![0, 1], vec![vec![]])]).unwrap());
    for s in 1..=bound {
        for sigma in enumerate_maps(s, s, Variance::Symmetric).into_iter().filter(|m| m.is_bijective()) {
            let a = relabel_arity(sigma.images());
            if a.arity.max_index() > bound {
                continue;
            }
            let corolla = intern(&Arity::corolla(s, Variance::Symmetric));
            for family in std::iter::repeat_n(colours.clone(), s).multi_cartesian_product() {
                for y in &colours {
                    let res = (|| -> Result<Option<String>, TheoryError> {
                        let mut moved = vec![y.clone(); s];
                        for (i, c) in family.iter().enumerate() {
                            moved[sigma.apply(i)] = c.clone();
                        }
                        let src_ty: Vec<Value> = family.iter().map(|c| vec![c.clone()]).chain([vec![y.clone()]]).collect();
                        let tgt_ty: Vec<Value> = moved.iter().map(|c| vec![c.clone()]).chain([vec![y.clone()]]).collect();
                        let units = moved
                            .iter()
                            .map(|c| t.compose(&unit_arity, &[vec![c.clone()]]))
                            .collect::<Result<Vec<_>, _>>()?;
                        let before = mul_values(t, &corolla, &tgt_ty)?;
                        let after = mul_values(t, &corolla, &src_ty)?;
                        let mut images = BTreeSet::new();
                        for g in &before {
                            let mut fill: Vec<Value> = family.iter().map(|c| vec![c.clone()]).collect();
                            fill.extend(moved.iter().map(|c| vec![c.clone()]));
                            fill.push(vec![y.clone()]);
                            fill.push(units.clone());
                            fill.push(g.clone());
                            images.insert(t.compose(&a, &fill)?);
                        }
                        let expected: BTreeSet<Label> = after.into_iter().map(|v| v[0].clone()).collect();
                        Ok((images.len() != before.len() || images != expected).then(|| {
                            format!("{} cells map onto {} of {}", before.len(), images.len(), expected.len())
                        }))
                    })();
                    match res {
                        Ok(None) => r.instances += 1,
                        Ok(Some(msg)) => r.violation(&a.key, "relabeling-bijection", format!("{sigma} colours {}", family.join(",")), "a bijection".into(), msg),
                        Err(TheoryError::MissingUnit { key }) => r.warnings.push(format!("no unit declared for arity {key}")),
                        Err(e) => r.error(&a.key, &e),
                    }
                }
            }
        }
    }
    r
}

fn check_functoriality(t: &dyn Theory, bound: usize) -> ValidationReport {
    let mut r = ValidationReport::default();
    let h = t.header();
    let n = h.dim;
    let category_at = |a: &ArityRef, ty: &[Value]| t.category(a, ty);
    for a in elemental_arities(n, bound, h.variance).iter() {
        let res = for_each_fill(t, a, a.npos, &mut |ty| {
            match category_at(a, ty)? {
                None => r.violation(&a.key, "category", show_values(ty), "a hom category".into(), "none".into()),
                Some(c) => {
                    if let Err(msg) = c.check() {
                        r.violation(&a.key, "category", show_values(ty), "category laws".into(), msg);
                    }
                    let cells = cells_at(t, a, ty)?;
                    if cells != c.objects {
                        r.violation(&a.key, "category-objects", show_values(ty), cells.join(","), c.objects.join(","));
                    }
                }
            }
            r.instances += 1;
            Ok(())
        });
        if let Err(e) = res {
            r.error(&a.key, &e);
        }
    }
    for a in elemental_arities(n + 1, bound, h.variance).iter() {
        let inputs = a.offsets[n][0]..a.offsets[n][1];
        let res = for_each_fill(t, a, inputs.start, &mut |ty| {
            let mut cats = Vec::new();
            for p in inputs.clone() {
                let keys: Vec<(ArityRef, Vec<Value>)> = match &a.entries()[p] {
                    EntryPlan::Colour => vec![(intern(&Arity::point(h.variance)), vec![])],
                    EntryPlan::Cell(pieces) => pieces.iter().map(|pc| (pc.arity.clone(), gather(ty, &pc.gather))).collect(),
                };
                let mut per = Vec::new();
                for (pa, pty) in keys {
                    match category_at(&pa, &pty)? {
                        Some(c) => per.push(c),
                        None => return Ok(()),
                    }
                }
                cats.push(per);
            }
            let (oa, oty) = output_cell(a, ty);
            let Some(out_cat) = category_at(&oa, &oty)? else { return Ok(()) };
            let arrow_lists: Vec<Vec<Label>> = cats.iter().flatten().map(|c| c.arrows.keys().cloned().collect()).collect();
            let shape: Vec<usize> = cats.iter().map(Vec::len).collect();
            let regroup = |flat: &[Label]| -> Vec<Value> {
                let mut out = Vec::new();
                let mut i = 0;
                for &w in &shape {
                    out.push(flat[i..i + w].to_vec());
                    i += w;
                }
                out
            };
            let flat_cats: Vec<_> = cats.iter().flatten().cloned().collect();
            for combo in arrow_lists.iter().cloned().multi_cartesian_product() {
                r.instances += 1;
                let mut fill = ty.to_vec();
                fill.extend(regroup(&combo));
                let image = t.compose_arrows(a, &fill)?;
                let srcs: Vec<Label> = combo.iter().zip(&flat_cats).map(|(f, c)| c.ends(f).unwrap().0.clone()).collect();
                let tgts: Vec<Label> = combo.iter().zip(&flat_cats).map(|(f, c)| c.ends(f).unwrap().1.clone()).collect();
                let mut sfill = ty.to_vec();
                sfill.extend(regroup(&srcs));
                let mut tfill = ty.to_vec();
                tfill.extend(regroup(&tgts));
                let expect_ends = (t.compose(a, &sfill)?, t.compose(a, &tfill)?);
                match out_cat.ends(&image) {
                    Some(e) if *e == expect_ends => {}
                    _ => r.violation(&a.key, "functor-ends", show_values(&fill), format!("{} -> {}", expect_ends.0, expect_ends.1), image.to_string()),
                }
                let all_ids = combo.iter().zip(&flat_cats).all(|(f, c)| {
                    let (s, _) = c.ends(f).unwrap();
                    c.identity(s) == Some(f)
                });
                if all_ids && out_cat.identity(&expect_ends.0) != Some(&image) {
                    r.violation(&a.key, "functor-identity", show_values(&fill), "identity".into(), image.to_string());
                }
                for combo2 in arrow_lists.iter().cloned().multi_cartesian_product() {
                    let composable = combo.iter().zip(&combo2).zip(&flat_cats).all(|((f, g), c)| c.ends(f).unwrap().1 == c.ends(g).unwrap().0);
                    if !composable {
                        continue;
                    }
                    let gf: Vec<Label> = combo.iter().zip(&combo2).zip(&flat_cats).map(|((f, g), c)| c.compose(f, g).unwrap().clone()).collect();
                    let mut gfill = ty.to_vec();
                    gfill.extend(regroup(&combo2));
                    let mut cfill = ty.to_vec();
                    cfill.extend(regroup(&gf));
                    let lhs = t.compose_arrows(a, &cfill)?;
                    let rhs = out_cat.compose(&image, &t.compose_arrows(a, &gfill)?).cloned();
                    if Some(&lhs) != rhs.as_ref() {
                        r.violation(&a.key, "functor-composition", show_values(&cfill), format!("{rhs:?}"), lhs.to_string());
                    }
                }
            }
            Ok(())
        });
        if let Err(e) = res {
            r.error(&a.key, &e);
        }
    }
    r
}
