use std::collections::{BTreeMap, BTreeSet};

use htk_core::theory::{enumerate_categories, label, FinCategory, Label};
use htk_core::zoo::{
    bgraded_validate, bord1_skeleton, cocorr_fin_skeleton, field_theories, hochschild_classes, materialize_bgraded,
    properad_adapter, properad_from_graded, walking_arrow, zc_build, AssocProperad, BaseMorphism, CircleValue, End,
};
use itertools::Itertools;

/// The one-object category of a monoid on `0..n` with unit 0.
fn monoid(n: usize, mul: impl Fn(usize, usize) -> usize) -> FinCategory {
    let x = label("x");
    let a = |i: usize| label(&format!("m{i}"));
    let mut c = FinCategory { objects: vec![x.clone()], ..Default::default() };
    c.identities.insert(x.clone(), a(0));
    for i in 0..n {
        c.arrows.insert(a(i), (x.clone(), x.clone()));
        for j in 0..n {
            // `(f, g)` composes to `g ∘ f`, which is `mul(g, f)`.
            c.composition.insert((a(i), a(j)), a(mul(j, i)));
        }
    }
    c
}

fn discrete(k: usize) -> FinCategory {
    let mut c = FinCategory::default();
    for i in 0..k {
        let (x, id) = (label(&format!("x{i}")), label(&format!("id{i}")));
        c.objects.push(x.clone());
        c.arrows.insert(id.clone(), (x.clone(), x.clone()));
        c.identities.insert(x, id.clone());
        c.composition.insert((id.clone(), id.clone()), id);
    }
    c
}

fn permutations3() -> Vec<Vec<usize>> {
    (0..3).permutations(3).collect()
}

fn symmetric_group() -> FinCategory {
    let perms = permutations3();
    let index = |p: &Vec<usize>| perms.iter().position(|q| q == p).unwrap();
    monoid(6, |g, f| index(&(0..3).map(|x| perms[g][perms[f][x]]).collect()))
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

fn stirling2(n: usize, k: usize) -> usize {
    match (n, k) {
        (0, 0) => 1,
        (0, _) | (_, 0) => 0,
        _ => k * stirling2(n - 1, k) + stirling2(n - 1, k - 1),
    }
}

#[test]
fn bordism_hom_sets_are_matchings_and_circles() {
    let (points, circles) = (3, 1);
    let bord = bord1_skeleton(points, circles);
    for a in &bord.objects {
        for b in &bord.objects {
            let plus = |w: &[usize]| w.iter().filter(|&&l| l == 0).count();
            let tails = plus(a) + (b.len() - plus(b));
            let heads = (a.len() - plus(a)) + plus(b);
            let expected = if tails == heads { factorial(tails) * (circles + 1) } else { 0 };
            assert_eq!(bord.hom(a, b).len(), expected, "{} -> {}", bord.word(a), bord.word(b));
        }
    }
    assert_eq!(bord.hom(&[], &[]).len(), 2);
}

#[test]
fn cup_then_cap_is_a_circle() {
    let bord = bord1_skeleton(2, 1);
    let cup = BaseMorphism::new(vec![], vec![0, 1], vec![vec![End::Out(0), End::Out(1)]]);
    let cap = BaseMorphism::new(vec![0, 1], vec![], vec![vec![End::In(0), End::In(1)]]);
    let circle = BaseMorphism::new(vec![], vec![], vec![vec![]]);
    let (cup, cap) = (bord.position(&cup).unwrap(), bord.position(&cap).unwrap());
    assert_eq!(bord.compose(cup, cap), bord.position(&circle));
}

#[test]
fn cospan_hom_sets_count_partitions() {
    for bound in 1..=2 {
        let cocorr = cocorr_fin_skeleton(bound);
        for n in 0..=bound {
            for m in 0..=bound {
                let expected: usize = (0..=bound).map(|b| stirling2(n + m, b) * (bound - b + 1)).sum();
                assert_eq!(cocorr.hom(&vec![0; n], &vec![0; m]).len(), expected, "bound {bound}, {n} -> {m}");
            }
        }
    }
}

#[test]
fn skeletons_are_free() {
    bord1_skeleton(2, 1).check_free().unwrap();
    cocorr_fin_skeleton(2).check_free().unwrap();
}

#[test]
fn properad_roundtrip() {
    let cocorr = cocorr_fin_skeleton(2);
    let x = materialize_bgraded(&cocorr, &AssocProperad).unwrap();
    assert!(bgraded_validate(&cocorr, &x).passed());
    let p = properad_from_graded(&x).unwrap();
    assert_eq!(properad_adapter(&p, &cocorr).unwrap(), x);
}

fn partition(classes: &BTreeMap<Label, Label>) -> BTreeSet<BTreeSet<Label>> {
    let mut by: BTreeMap<&Label, BTreeSet<Label>> = BTreeMap::new();
    for (f, c) in classes {
        by.entry(c).or_default().insert(f.clone());
    }
    by.into_values().collect()
}

#[test]
fn hochschild_classes_of_groups_are_conjugacy_classes() {
    let perms = permutations3();
    let index = |p: &Vec<usize>| perms.iter().position(|q| q == p).unwrap();
    let inverse = |p: &Vec<usize>| {
        let mut q = vec![0; 3];
        for (i, &x) in p.iter().enumerate() {
            q[x] = i;
        }
        q
    };
    let conj: BTreeSet<BTreeSet<Label>> = perms
        .iter()
        .map(|f| {
            perms
                .iter()
                .map(|h| {
                    let hi = inverse(h);
                    let c: Vec<usize> = (0..3).map(|x| h[f[hi[x]]]).collect();
                    label(&format!("m{}", index(&c)))
                })
                .collect()
        })
        .collect();
    let classes = partition(&hochschild_classes(&symmetric_group()));
    assert_eq!(classes, conj);
    assert_eq!(classes.len(), 3);

    assert_eq!(partition(&hochschild_classes(&monoid(3, |a, b| (a + b) % 3))).len(), 3);
    assert_eq!(partition(&hochschild_classes(&walking_arrow())).len(), 2);
}

fn field_theory_count(c: &FinCategory) -> usize {
    let bord = bord1_skeleton(3, 1);
    field_theories(&bord, &zc_build(c, &bord, CircleValue::Point).unwrap()).unwrap().len()
}

#[test]
fn field_theories_of_small_categories() {
    assert_eq!(field_theory_count(&discrete(1)), 1);
    assert_eq!(field_theory_count(&discrete(2)), 2);
    assert_eq!(field_theory_count(&walking_arrow()), 2);
    assert_eq!(field_theory_count(&monoid(2, |a, b| (a + b) % 2)), 2);
    assert_eq!(field_theory_count(&monoid(2, |a, b| a.max(b))), 1);
}

#[test]
fn field_theories_count_isomorphisms() {
    for c in enumerate_categories(2, 3) {
        let isos = c
            .arrows
            .keys()
            .filter(|f| {
                c.arrows.keys().any(|g| {
                    let (x, y) = &c.arrows[*f];
                    c.compose(f, g) == c.identity(x) && c.compose(g, f) == c.identity(y)
                })
            })
            .count();
        assert_eq!(field_theory_count(&c), isos, "{c:?}");
    }
}
