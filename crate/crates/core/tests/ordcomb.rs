use htk_core::ordcomb::{
    bracket, bracket_map, enumerate_maps, pushforward_family, pushforward_nerve, DeltaMap, FinMap, FinOrd, FinSets,
    Nerve, Variance,
};
use proptest::prelude::*;

fn planar_map(source: usize, target: usize) -> impl Strategy<Value = FinMap> {
    proptest::collection::vec(0..target.max(1), source).prop_map(move |mut images| {
        images.sort_unstable();
        FinMap::new(images, target, Variance::Planar).expect("sorted images are monotone")
    })
}

/// Two composable order maps `I → J → K` with `J, K` non-empty.
fn composable() -> impl Strategy<Value = (FinMap, FinMap)> {
    (0usize..7, 1usize..7, 1usize..7).prop_flat_map(|(i, j, k)| (planar_map(i, j), planar_map(j, k)))
}

proptest! {
    #[test]
    fn bracket_reverses_composition((phi, psi) in composable()) {
        let whole = bracket_map(&phi.then(&psi).unwrap());
        let parts = bracket_map(&psi).then(&bracket_map(&phi)).unwrap();
        prop_assert_eq!(whole, parts);
    }

    #[test]
    fn bracket_maps_are_monotone_and_fix_ends(phi in (0usize..8, 1usize..8).prop_flat_map(|(s, t)| planar_map(s, t))) {
        let b = bracket_map(&phi);
        prop_assert!(b.is_monotone());
        prop_assert_eq!(b.apply(0), 0);
        prop_assert_eq!(b.apply(phi.target()), phi.source());
    }

    #[test]
    fn family_pushforward_is_functorial((phi, psi) in composable()) {
        let x: Vec<usize> = (0..=phi.source()).map(|i| 100 + i).collect();
        let whole = pushforward_family(&phi.then(&psi).unwrap(), &x).unwrap();
        let parts = pushforward_family(&psi, &pushforward_family(&phi, &x).unwrap()).unwrap();
        prop_assert_eq!(whole, parts);
    }

    #[test]
    fn nerve_pushforward_is_functorial((phi, psi) in composable(), seed in any::<u64>()) {
        let maps = enumerate_maps(2, 2, Variance::Symmetric);
        let arrows: Vec<FinMap> = (0..phi.source()).map(|i| maps[(seed >> (2 * i)) as usize % maps.len()].clone()).collect();
        let f = Nerve { objects: vec![2; phi.source() + 1], arrows };
        let cat = FinSets(Variance::Symmetric);
        let whole = pushforward_nerve(&cat, &phi.then(&psi).unwrap(), &f).unwrap();
        let parts = pushforward_nerve(&cat, &psi, &pushforward_nerve(&cat, &phi, &f).unwrap()).unwrap();
        prop_assert_eq!(whole, parts);
    }

    #[test]
    fn bracket_has_one_more_element(n in 0usize..64) {
        prop_assert_eq!(bracket(FinOrd::new(n)).len(), n + 1);
    }
}

#[test]
fn bracket_of_identity_is_identity() {
    for n in 0..6 {
        assert_eq!(bracket_map(&FinMap::identity(n, Variance::Planar)), DeltaMap::identity(n));
    }
}

#[test]
fn map_counts_match_binomials() {
    // Monotone maps n → m number C(n+m-1, n); all maps m^n.
    let binom = |a: usize, b: usize| (0..b).fold(1usize, |acc, i| acc * (a - i) / (i + 1));
    for n in 0..5 {
        for m in 1..5 {
            assert_eq!(enumerate_maps(n, m, Variance::Planar).len(), binom(n + m - 1, n), "{n} -> {m}");
            assert_eq!(enumerate_maps(n, m, Variance::Symmetric).len(), m.pow(n as u32));
        }
    }
}

#[test]
fn pushforward_along_fold_composes_the_nerve() {
    let swap = FinMap::new(vec![1, 0], 2, Variance::Symmetric).unwrap();
    let f = Nerve { objects: vec![2, 2, 2], arrows: vec![swap.clone(), swap] };
    let fold = FinMap::to_point(2, Variance::Planar);
    let g = pushforward_nerve(&FinSets(Variance::Symmetric), &fold, &f).unwrap();
    assert_eq!(g.arrows, vec![FinMap::identity(2, Variance::Symmetric)]);
    assert_eq!(g.objects, vec![2, 2]);
}
