use std::collections::BTreeSet;

use htk_core::constructions::theta;
use htk_core::graded::{
    canonical, colour_systems, enumerate_thin_graded, from_projection, graded_morphisms, pullback, push_left,
    terminal_graded, theta_graded, to_projection, underlying, validate_graded, ColourSystem,
    GradedTheoryPresentation,
};
use htk_core::theory::{enumerate_morphisms, label, MorphismOptions, TheoryMorphism, TheoryPresentation};
use htk_core::zoo::{
    assoc_operad, category_theory, cyclic_group, discrete_category, init_operad, monoidal_theory, walking_arrow,
};

fn opts() -> MorphismOptions {
    MorphismOptions::new(2)
}

fn projection(v: &TheoryPresentation, u: &TheoryPresentation) -> TheoryMorphism {
    let bound = v.header.bound;
    enumerate_morphisms(v, u, MorphismOptions::new(bound)).unwrap().into_iter().next().expect("a projection")
}

/// A morphism that does not send every colour to the same colour.
fn surjection(v: &TheoryPresentation, u: &TheoryPresentation) -> TheoryMorphism {
    enumerate_morphisms(v, u, opts())
        .unwrap()
        .into_iter()
        .find(|f| f.cells.iter().filter(|(c, _)| c.dim == 0).map(|(_, l)| l).collect::<BTreeSet<_>>().len() > 1)
        .expect("a non-constant morphism")
}

fn morphisms(x: &GradedTheoryPresentation, z: &GradedTheoryPresentation) -> usize {
    graded_morphisms(x, z, opts()).unwrap().len()
}

fn same(x: &GradedTheoryPresentation, y: &GradedTheoryPresentation) -> bool {
    canonical(x).unwrap() == canonical(y).unwrap()
}

fn z4_over_z2() -> GradedTheoryPresentation {
    let z2 = monoidal_theory(&cyclic_group(2), false, 2);
    let z4 = monoidal_theory(&cyclic_group(4), false, 2);
    from_projection(&z4, &surjection(&z4, &z2), &z2).unwrap()
}

#[test]
fn colour_systems_count_compositions() {
    // Tuples of k naturals with sum at most b number C(b + k, k).
    let binom = |a: usize, b: usize| (0..b).fold(1usize, |acc, i| acc * (a - i) / (i + 1));
    for k in 1..4 {
        let colours: Vec<_> = (0..k).map(|i| label(&format!("c{i}"))).collect();
        for b in 0..4 {
            assert_eq!(colour_systems(&colours, b).len(), binom(b + k, k), "{k} colours, budget {b}");
        }
    }
}

#[test]
fn terminal_grading_is_terminal() {
    let e1 = assoc_operad(2);
    let one = terminal_graded(&e1).unwrap();
    assert!(validate_graded(&one).passed());
    assert_eq!(morphisms(&one, &one), 1);
    let sys: ColourSystem = [(label("*"), vec![label("x1")])].into_iter().collect();
    for x in enumerate_thin_graded(&e1, &sys, 2).unwrap() {
        assert_eq!(morphisms(&x, &one), 1);
    }
    assert_eq!(to_projection(&one).unwrap().0.cell_count(), e1.cell_count());
}

#[test]
fn projection_roundtrip() {
    let x = z4_over_z2();
    assert!(validate_graded(&x).passed());
    let (total, p) = to_projection(&x).unwrap();
    assert_eq!(total.cell_count(), monoidal_theory(&cyclic_group(4), false, 2).cell_count());
    assert!(same(&from_projection(&total, &p, &x.base).unwrap(), &x));
}

#[test]
fn automorphisms_over_the_base() {
    // Endomorphisms f of Z/4 with q f = q send the generator to an odd element.
    let x = z4_over_z2();
    assert_eq!(morphisms(&x, &x), 2);
}

#[test]
fn identity_change_of_base_is_trivial() {
    let x = z4_over_z2();
    let z2 = x.base.clone();
    let id = TheoryMorphism::identity(&z2, 2).unwrap();
    assert!(same(&pullback(&id, &z2, &x).unwrap(), &x));
    assert!(same(&push_left(&id, &z2, &x).unwrap(), &x));
}

#[test]
fn left_push_of_terminal_is_the_source() {
    let init = init_operad(2);
    let arrow = category_theory(&walking_arrow(), 2);
    for v in [discrete_category(2, 2), arrow] {
        let p = projection(&v, &init);
        let pushed = push_left(&p, &init, &terminal_graded(&v).unwrap()).unwrap();
        assert!(same(&pushed, &from_projection(&v, &p, &init).unwrap()));
    }
}

#[test]
fn pullback_of_terminal_is_terminal() {
    let init = init_operad(2);
    let d2 = discrete_category(2, 2);
    let p = projection(&d2, &init);
    assert!(same(&pullback(&p, &d2, &terminal_graded(&init).unwrap()).unwrap(), &terminal_graded(&d2).unwrap()));
}

#[test]
fn left_push_is_adjoint_to_pullback() {
    let (v, u) = (discrete_category(2, 1), init_operad(1));
    let p = projection(&v, &u);
    let thin = |t: &TheoryPresentation| -> Vec<GradedTheoryPresentation> {
        colour_systems(&t.colours(), 2)
            .iter()
            .flat_map(|c| enumerate_thin_graded(t, c, 1).unwrap())
            .collect()
    };
    for y in thin(&v) {
        for z in thin(&u) {
            let lhs = graded_morphisms(&push_left(&p, &u, &y).unwrap(), &z, MorphismOptions::new(1)).unwrap().len();
            let rhs = graded_morphisms(&y, &pullback(&p, &v, &z).unwrap(), MorphismOptions::new(1)).unwrap().len();
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn theta_of_terminal_grading() {
    let z2 = monoidal_theory(&cyclic_group(2), false, 2);
    let t = theta_graded(&terminal_graded(&z2).unwrap(), 2).unwrap();
    assert!(validate_graded(&t).passed());
    assert_eq!(t.base, theta(&z2, 2).unwrap());
    assert_eq!(underlying(&t).unwrap().cell_count(), t.base.cell_count());
}
