use htk_core::theory::enumerate_categories;
use itertools::Itertools;

/// Associative multiplication tables on `0..n` with two-sided unit 0.
fn monoid_tables(n: usize) -> usize {
    let free: Vec<(usize, usize)> = (1..n).cartesian_product(1..n).collect();
    let mut count = 0;
    for choice in free.iter().map(|_| 0..n).multi_cartesian_product() {
        let mul = |a: usize, b: usize| match (a, b) {
            (0, x) | (x, 0) => x,
            _ => choice[free.iter().position(|&p| p == (a, b)).unwrap()],
        };
        let assoc = (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| mul(mul(a, b), c) == mul(a, mul(b, c)))));
        count += usize::from(assoc);
    }
    count
}

#[test]
fn enumerated_categories_satisfy_the_laws() {
    for c in enumerate_categories(3, 5) {
        c.check().unwrap();
        assert!(c.arrows.len() <= 5 && c.objects.len() <= 3);
    }
}

#[test]
fn one_object_categories_are_monoid_tables() {
    for arrows in 1..=4 {
        let found = enumerate_categories(1, arrows).iter().filter(|c| c.objects.len() == 1).count();
        let expected: usize = (1..=arrows).map(monoid_tables).sum();
        assert_eq!(found, expected, "<= {arrows} arrows");
    }
}

#[test]
fn discrete_categories_are_included() {
    for k in 0..=3 {
        let n = enumerate_categories(3, 3).iter().filter(|c| c.objects.len() == k && c.arrows.len() == k).count();
        assert_eq!(n, 1, "{k} objects");
    }
}
