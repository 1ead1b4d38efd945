use std::sync::Arc;

use htk_core::constructions::{deloop, enumerate_lax_functors, theta, Deloop, Theta};
use htk_core::ordcomb::Variance;
use htk_core::theory::{
    enumerate_morphisms, label, validate_morphism, validate_theory, MorphismOptions, TheoryMorphism, TheoryPresentation,
};
use htk_core::zoo::{
    assoc_operad, commutative_operad, cyclic_group, discrete_category, init_operad, monoidal_theory, parse_order,
    terminal_theory, Assoc, MonoidalTheory,
};

fn operations(t: &TheoryPresentation, inputs: usize) -> usize {
    let prefix = format!("{inputs},");
    t.strata[1].iter().filter(|(k, _)| k.arity.starts_with(&prefix)).map(|(_, ls)| ls.len()).sum()
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

#[test]
fn zoo_presentations_validate() {
    let z3 = monoidal_theory(&cyclic_group(3), false, 2);
    for (name, t) in [
        ("terminal 0", terminal_theory(0, 0, Variance::Symmetric, 2)),
        ("terminal 1", terminal_theory(1, 1, Variance::Symmetric, 2)),
        ("terminal 2 planar", terminal_theory(2, 1, Variance::Planar, 2)),
        ("init", init_operad(2)),
        ("e1", assoc_operad(2)),
        ("com", commutative_operad(true, 2)),
        ("disc3", discrete_category(3, 2)),
        ("Z/3", z3),
    ] {
        let r = validate_theory(&t);
        assert!(r.passed(), "{name}: {:?}", r.lines());
        assert!(r.instances > 0, "{name} checked nothing");
    }
}

#[test]
fn associative_operations_are_orders() {
    let e1 = assoc_operad(3);
    for n in 0..=3 {
        assert_eq!(operations(&e1, n), factorial(n), "arity {n}");
    }
    let com = commutative_operad(true, 3);
    for n in 0..=3 {
        assert_eq!(operations(&com, n), 1, "arity {n}");
    }
    assert_eq!(operations(&commutative_operad(false, 3), 0), 0);
}

#[test]
fn swapped_binary_composite_is_caught() {
    let mut e1 = assoc_operad(2);
    let (key, out) = e1
        .composition
        .iter()
        .find(|(_, l)| parse_order(l).is_some_and(|o| o == [0, 1]))
        .map(|(k, l)| (k.clone(), l.clone()))
        .expect("a composite <1,2>");
    assert_eq!(&*out, "<1,2>");
    e1.composition.insert(key, label("<2,1>"));
    let r = validate_theory(&e1);
    assert!(!r.passed());
    assert!(r.violations.iter().any(|v| !v.witness.is_empty()));
}

#[test]
fn missing_composite_is_caught() {
    let mut com = commutative_operad(true, 2);
    let key = com.composition.keys().next().cloned().expect("a composite");
    com.composition.remove(&key);
    assert!(!validate_theory(&com).passed());
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[test]
fn lax_functors_between_cyclic_groups() {
    for n in 1..=3 {
        for m in 1..=3 {
            let lax = enumerate_lax_functors(&cyclic_group(n), &cyclic_group(m)).len();
            assert_eq!(lax, gcd(n, m), "Z/{n} to Z/{m}");
        }
    }
}

#[test]
fn theta_morphisms_match_group_homomorphisms() {
    let th = |n| theta(&MonoidalTheory { monoidal: Arc::new(cyclic_group(n)), enriched: true, bound: 2 }, 2).unwrap();
    let (t2, t4) = (th(2), th(4));
    assert_eq!(enumerate_morphisms(&t4, &t2, MorphismOptions::new(2)).unwrap().len(), 2);
    assert_eq!(enumerate_morphisms(&t2, &t4, MorphismOptions::new(2)).unwrap().len(), 2);
}

#[test]
fn theta_is_deterministic() {
    let z2 = MonoidalTheory { monoidal: Arc::new(cyclic_group(2)), enriched: false, bound: 2 };
    assert_eq!(theta(&z2, 2).unwrap(), theta(&z2, 2).unwrap());
}

#[test]
fn deloop_commutes_with_theta() {
    let e1 = Assoc { bound: 4 };
    let lhs = deloop(&Theta { base: e1 }, 2).unwrap();
    let rhs = theta(&Deloop { base: e1, bound: 2 }, 2).unwrap();
    assert_eq!(lhs, rhs);
    assert!(validate_theory(&lhs).passed());
}

#[test]
fn deloop_of_com_is_terminal() {
    let d = deloop(&commutative_operad(true, 3), 2).unwrap();
    assert_eq!(d, terminal_theory(2, 1, Variance::Symmetric, 2));
}

#[test]
fn identity_morphisms_validate() {
    let e1 = Assoc { bound: 2 };
    let id = TheoryMorphism::identity(&e1, 2).unwrap();
    assert!(validate_morphism(&e1, &e1, &id, 2).passed());
    let found = enumerate_morphisms(&assoc_operad(2), &assoc_operad(2), MorphismOptions::new(2)).unwrap();
    assert!(found.contains(&id));
}

#[test]
fn init_maps_uniquely_to_anything_with_one_colour() {
    let init = init_operad(2);
    for t in [assoc_operad(2), commutative_operad(true, 2), terminal_theory(1, 1, Variance::Symmetric, 2)] {
        assert_eq!(enumerate_morphisms(&init, &t, MorphismOptions::new(2)).unwrap().len(), 1);
    }
}
