//! The acceptance suites run by `htk check`. Each suite is a list of named claims, each
//! passing or failing with the counts it compared.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use htk_core::arity::intern_key;
use htk_core::constructions::{
    deloop, deloop_compare, enumerate_lax_functors, theta, ColourSystem, Deloop, Theta,
};
use htk_core::graded::{
    canonical, colour_systems, convolve, enumerate_algebras_for, enumerate_thin_graded, from_projection,
    graded_morphisms, pullback, push_left, push_right, terminal_graded, theta_graded, theta_map, to_projection,
    GradedTheoryPresentation,
};
use htk_core::ordcomb::{
    bracket, bracket_map, enumerate_maps, pushforward_family, pushforward_nerve, DeltaMap, FinMap, FinOrd, FinSets,
    Nerve, Variance,
};
use htk_core::theory::{
    check_type, enumerate_categories, enumerate_morphisms, label, validate_theory, CellKey, FinCategory, Label,
    MorphismOptions, TheoryMorphism, TheoryPresentation,
};
use htk_core::zoo::{
    assoc_operad, bgraded_validate, bord1_skeleton, category_theory, cocorr_fin_skeleton, commutative_operad,
    cyclic_group, discrete_category, field_theories, init_operad, materialize_bgraded, monoidal_theory,
    properad_adapter, properad_from_graded, terminal_theory, walking_arrow, zc_build, Assoc, AssocProperad,
    CircleValue, MonoidalTheory, Truth,
};

use crate::format::{write_graded, write_theory};

#[derive(Clone, Debug)]
pub struct Claim {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}: {}", if self.passed { "PASS" } else { "FAIL" }, self.name, self.detail)
    }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub claims: Vec<Claim>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.claims.iter().all(|c| c.passed)
    }

    pub fn summary(&self) -> String {
        let ok = self.claims.iter().filter(|c| c.passed).count();
        format!("{} {}: {ok}/{} claims", if self.passed() { "PASS" } else { "FAIL" }, self.suite, self.claims.len())
    }
}

type Outcome = Result<(bool, String), String>;

struct Builder {
    claims: Vec<Claim>,
}

impl Builder {
    fn new() -> Self {
        Builder { claims: Vec::new() }
    }

    fn claim(&mut self, name: impl Into<String>, f: impl FnOnce() -> Outcome) {
        let (passed, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
        self.claims.push(Claim { name: name.into(), passed, detail });
    }

    fn finish(self, suite: &'static str) -> SuiteReport {
        SuiteReport { suite, claims: self.claims }
    }
}

fn err(e: impl fmt::Display) -> String {
    e.to_string()
}

/// Names of the suites in the order `check all` runs them.
pub const SUITES: [&str; 10] = [
    "bracket-functor",
    "validator-soundness",
    "deloop-commutation",
    "deloop-comparison",
    "theta-lax-equivalence",
    "roundtrip-grading",
    "graded-algebra",
    "adjunction-counts",
    "operad-slice",
    "bgraded-bases",
];

pub fn run_suite(name: &str) -> Option<SuiteReport> {
    Some(match name {
        "bracket-functor" => bracket_functor(),
        "validator-soundness" => validator_soundness(),
        "deloop-commutation" => deloop_commutation(),
        "deloop-comparison" => deloop_comparison(),
        "theta-lax-equivalence" => theta_lax(),
        "roundtrip-grading" => roundtrip_grading(),
        "graded-algebra" => graded_algebra(),
        "adjunction-counts" => adjunction_counts(),
        "operad-slice" => operad_slice(),
        "bgraded-bases" => bgraded_bases(),
        _ => return None,
    })
}

// ---- bracket-functor ----

fn ord_maps(max: usize) -> Vec<FinMap> {
    (0..=max).flat_map(|s| (0..=max).flat_map(move |t| enumerate_maps(s, t, Variance::Planar))).collect()
}

/// Nerves of length `n` in finite sets with every object of size 2 and arrows drawn from
/// the swap and the constant map.
fn test_nerves(n: usize) -> Vec<Nerve<usize, FinMap>> {
    let swap = FinMap::new(vec![1, 0], 2, Variance::Symmetric).expect("swap");
    let constant = FinMap::new(vec![0, 0], 2, Variance::Symmetric).expect("constant");
    (0..1usize << n)
        .map(|mask| Nerve {
            objects: vec![2; n + 1],
            arrows: (0..n).map(|i| if mask >> i & 1 == 1 { swap.clone() } else { constant.clone() }).collect(),
        })
        .collect()
}

fn bracket_functor() -> SuiteReport {
    let mut b = Builder::new();
    let maps = ord_maps(4);
    b.claim("bracket preserves composition", || {
        let (mut pairs, mut bad) = (0, 0);
        for phi in &maps {
            for psi in maps.iter().filter(|psi| psi.source() == phi.target()) {
                pairs += 1;
                let whole = bracket_map(&phi.then(psi).map_err(err)?);
                let parts = bracket_map(psi).then(&bracket_map(phi)).map_err(err)?;
                bad += usize::from(whole != parts);
            }
        }
        Ok((bad == 0, format!("{pairs} composable pairs of order maps of size <= 4, {bad} mismatches")))
    });
    b.claim("bracket preserves identities", || {
        let bad = (0..=4).filter(|&n| bracket_map(&FinMap::identity(n, Variance::Planar)) != DeltaMap::identity(n)).count();
        Ok((bad == 0, format!("5 identities, {bad} mismatches")))
    });
    b.claim("push-forward of families is functorial", || {
        let (mut cases, mut bad) = (0, 0);
        for phi in &maps {
            let x: Vec<usize> = (0..=phi.source()).map(|i| 10 + i).collect();
            for psi in maps.iter().filter(|psi| psi.source() == phi.target()) {
                cases += 1;
                let whole = pushforward_family(&phi.then(psi).map_err(err)?, &x).map_err(err)?;
                let parts = pushforward_family(psi, &pushforward_family(phi, &x).map_err(err)?).map_err(err)?;
                bad += usize::from(whole != parts);
            }
        }
        Ok((bad == 0, format!("{cases} cases, {bad} mismatches")))
    });
    b.claim("push-forward of nerves is functorial", || {
        let cat = FinSets(Variance::Symmetric);
        let (mut cases, mut bad) = (0, 0);
        for phi in &maps {
            let nerves = test_nerves(phi.source());
            for psi in maps.iter().filter(|psi| psi.source() == phi.target()) {
                let composite = phi.then(psi).map_err(err)?;
                for f in &nerves {
                    cases += 1;
                    let whole = pushforward_nerve(&cat, &composite, f).map_err(err)?;
                    let parts = pushforward_nerve(&cat, psi, &pushforward_nerve(&cat, phi, f).map_err(err)?).map_err(err)?;
                    bad += usize::from(whole != parts);
                }
            }
        }
        Ok((bad == 0, format!("{cases} cases, {bad} mismatches")))
    });
    b.claim("bracket adds one element", || {
        let bad = (0..=8).filter(|&n| bracket(FinOrd::new(n)).len() != n + 1).count();
        Ok((bad == 0, format!("sizes 0..=8, {bad} mismatches")))
    });
    b.claim("bracket of the empty ordinal is the point", || {
        let e: Vec<usize> = bracket(FinOrd::new(0)).elements().collect();
        Ok((e == [0], format!("elements {e:?}")))
    });
    b.finish("bracket-functor")
}

// ---- validator-soundness ----

fn zoo_for_validation() -> Result<Vec<(String, TheoryPresentation)>, String> {
    let z2 = Arc::new(cyclic_group(2));
    let disc = |bound| MonoidalTheory { monoidal: z2.clone(), enriched: false, bound };
    let mut out = Vec::new();
    for n in 0..=3 {
        out.push((format!("terminal dim {n}"), terminal_theory(n, n.min(1), Variance::Symmetric, 2)));
    }
    out.push(("init".into(), init_operad(2)));
    out.push(("e1".into(), assoc_operad(2)));
    out.push(("discrete category on 2 objects".into(), discrete_category(2, 2)));
    out.push(("disc(Z/2)".into(), monoidal_theory(&z2, false, 2)));
    out.push(("theta disc(Z/2)".into(), theta(&disc(2), 2).map_err(err)?));
    out.push(("deloop disc(Z/2)".into(), deloop(&disc(4), 2).map_err(err)?));
    out.push(("deloop theta disc(Z/2)".into(), deloop(&Theta { base: disc(4) }, 2).map_err(err)?));
    Ok(out)
}

/// Replaces one composite by a different label, another composite where possible.
fn inject_fault(t: &TheoryPresentation) -> Option<(TheoryPresentation, CellKey)> {
    let (key, old) = t.composition.iter().nth(t.composition.len() / 2)?;
    let outputs: BTreeSet<&Label> = t.composition.values().collect();
    let new = outputs.into_iter().find(|l| *l != old).cloned().unwrap_or_else(|| label("fault"));
    let mut bad = t.clone();
    bad.composition.insert(key.clone(), new);
    Some((bad, key.clone()))
}

fn validator_soundness() -> SuiteReport {
    let mut b = Builder::new();
    let zoo = match zoo_for_validation() {
        Ok(z) => z,
        Err(e) => {
            b.claim("zoo construction", || Err(e));
            return b.finish("validator-soundness");
        }
    };
    for (name, t) in &zoo {
        b.claim(format!("{name} passes"), || {
            let r = validate_theory(t);
            Ok((r.passed(), format!("{} instances, {} violations", r.instances, r.violations.len())))
        });
    }
    for (name, t) in &zoo {
        b.claim(format!("{name} with a fault fails"), || {
            let (bad, key) = inject_fault(t).ok_or("no composition entry to corrupt")?;
            let r = validate_theory(&bad);
            let located = r.violations.iter().filter(|v| !v.witness.is_empty());
            let at_fault = located.clone().find(|v| v.arity == key.arity);
            match at_fault.or(located.clone().next()) {
                Some(v) => Ok((true, format!("fault at {}, {} violations, e.g. {v}", key.arity, r.violations.len()))),
                None => Ok((false, format!("fault at {}, {} violations, none with a witness", key.arity, r.violations.len()))),
            }
        });
    }
    b.finish("validator-soundness")
}

// ---- deloop-commutation and deloop-comparison ----

fn deloop_commutation() -> SuiteReport {
    let mut b = Builder::new();
    let z2 = MonoidalTheory { monoidal: Arc::new(cyclic_group(2)), enriched: false, bound: 4 };
    b.claim("disc(Z/2): deloop of theta equals theta of deloop", || {
        let lhs = write_theory(&deloop(&Theta { base: z2.clone() }, 2).map_err(err)?);
        let rhs = write_theory(&theta(&Deloop { base: z2.clone(), bound: 2 }, 2).map_err(err)?);
        Ok((lhs == rhs, format!("{} and {} bytes", lhs.len(), rhs.len())))
    });
    b.claim("e1: deloop of theta equals theta of deloop", || {
        let e1 = Assoc { bound: 4 };
        let lhs = write_theory(&deloop(&Theta { base: e1 }, 2).map_err(err)?);
        let rhs = write_theory(&theta(&Deloop { base: e1, bound: 2 }, 2).map_err(err)?);
        Ok((lhs == rhs, format!("{} and {} bytes", lhs.len(), rhs.len())))
    });
    b.finish("deloop-commutation")
}

fn deloop_comparison() -> SuiteReport {
    let mut b = Builder::new();
    let z2 = cyclic_group(2);
    for (m, bound) in [(0, 3), (1, 2)] {
        b.claim(format!("disc(Z/2), m = {m}, bound {bound}"), || {
            let r = deloop_compare(&z2, m, bound);
            let first = r.violations.first().map(|v| format!(", first: {v}")).unwrap_or_default();
            Ok((r.passed(), format!("{} instances, {} violations{first}", r.instances, r.violations.len())))
        });
    }
    b.finish("deloop-comparison")
}

// ---- theta-lax-equivalence ----

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn theta_lax() -> SuiteReport {
    let mut b = Builder::new();
    for (n, m) in [(2, 2), (2, 3)] {
        b.claim(format!("Z/{n} to Z/{m}"), || {
            let (a, c) = (cyclic_group(n), cyclic_group(m));
            let lax = enumerate_lax_functors(&a, &c).len();
            let ta = theta(&MonoidalTheory { monoidal: Arc::new(a), enriched: true, bound: 2 }, 2).map_err(err)?;
            let tc = theta(&MonoidalTheory { monoidal: Arc::new(c), enriched: true, bound: 2 }, 2).map_err(err)?;
            let morphisms = enumerate_morphisms(&ta, &tc, MorphismOptions::new(2)).map_err(err)?.len();
            let homs = gcd(n, m);
            Ok((
                lax == morphisms && lax == homs,
                format!("lax functors {lax}, multicategory morphisms {morphisms}, group homomorphisms {homs}"),
            ))
        });
    }
    b.finish("theta-lax-equivalence")
}

// ---- roundtrip-grading ----

fn graded_zoo() -> Result<Vec<(String, GradedTheoryPresentation)>, String> {
    let mut out = Vec::new();
    let e1 = assoc_operad(2);
    let init = init_operad(2);
    out.push(("terminal over e1".into(), terminal_graded(&e1).map_err(err)?));
    out.push(("terminal over init".into(), terminal_graded(&init).map_err(err)?));
    let d2 = discrete_category(2, 2);
    let p = enumerate_morphisms(&d2, &init, MorphismOptions::new(2)).map_err(err)?;
    let p = p.first().ok_or("no morphism from the discrete category to init")?;
    out.push(("discrete category over init".into(), from_projection(&d2, p, &init).map_err(err)?));
    let sys: ColourSystem = [(label("*"), vec![label("x1")])].into_iter().collect();
    for (i, x) in enumerate_thin_graded(&e1, &sys, 2).map_err(err)?.into_iter().enumerate() {
        out.push((format!("thin over e1 #{i}"), x));
    }
    let arrow = category_theory(&walking_arrow(), 2);
    let sys: ColourSystem = arrow.colours().into_iter().map(|c| (c, vec![label("x1")])).collect();
    for (i, x) in enumerate_thin_graded(&arrow, &sys, 2).map_err(err)?.into_iter().enumerate() {
        out.push((format!("thin over the walking arrow #{i}"), x));
    }
    let z2 = monoidal_theory(&cyclic_group(2), false, 2);
    let z4 = monoidal_theory(&cyclic_group(4), false, 2);
    let q = enumerate_morphisms(&z4, &z2, MorphismOptions::new(2)).map_err(err)?;
    let x = from_projection(&z4, q.first().ok_or("no morphism Z/4 to Z/2")?, &z2).map_err(err)?;
    out.push(("theta of Z/4 over Z/2".into(), theta_graded(&x, 2).map_err(err)?));
    out.push(("Z/4 over Z/2".into(), x));
    Ok(out)
}

fn roundtrip_grading() -> SuiteReport {
    let mut b = Builder::new();
    match graded_zoo() {
        Ok(zoo) => {
            b.claim("instances", || Ok((zoo.len() >= 5, format!("{} graded instances", zoo.len()))));
            for (name, x) in &zoo {
                b.claim(format!("{name} roundtrips"), || {
                    let (y, p) = to_projection(x).map_err(err)?;
                    let back = from_projection(&y, &p, &x.base).map_err(err)?;
                    let same = canonical(&back).map_err(err)? == canonical(x).map_err(err)?;
                    let again = to_projection(&back).map_err(err)?;
                    let total_same = again.0.cell_count() == y.cell_count() && again.1.cells.len() == p.cells.len();
                    Ok((same && total_same, format!("{} cells over {} base cells", x.cell_count(), x.base.cell_count())))
                });
            }
        }
        Err(e) => b.claim("instances", || Err(e)),
    }
    b.claim("left push of the terminal grading is the source", || {
        let init = init_operad(2);
        let d2 = discrete_category(2, 2);
        let ps = enumerate_morphisms(&d2, &init, MorphismOptions::new(2)).map_err(err)?;
        let mut same = 0;
        for p in &ps {
            let pushed = push_left(p, &init, &terminal_graded(&d2).map_err(err)?).map_err(err)?;
            let v = from_projection(&d2, p, &init).map_err(err)?;
            same += usize::from(
                write_graded(&canonical(&pushed).map_err(err)?) == write_graded(&canonical(&v).map_err(err)?),
            );
        }
        Ok((same == ps.len() && !ps.is_empty(), format!("{same} of {} projections byte-equal", ps.len())))
    });
    b.finish("roundtrip-grading")
}

// ---- graded-algebra ----

fn graded_algebra() -> SuiteReport {
    let mut b = Builder::new();
    let omega = match theta(&Truth { bound: 2 }, 2) {
        Ok(o) => o,
        Err(e) => {
            b.claim("truth theory", || Err(err(e)));
            return b.finish("graded-algebra");
        }
    };
    let cases = [
        ("init on 2 objects", discrete_category(2, 2), 2),
        ("e1", assoc_operad(2), 1),
        ("walking arrow", category_theory(&walking_arrow(), 2), 2),
    ];
    for (name, u, budget) in &cases {
        b.claim(format!("{name}: graded theories match algebras"), || {
            let tu = theta(u, 2).map_err(err)?;
            let (mut graded, mut algebras, mut systems, mut bad) = (0, 0, 0, 0);
            for sys in colour_systems(&u.colours(), *budget) {
                let l = enumerate_thin_graded(u, &sys, 2).map_err(err)?.len();
                let r = enumerate_algebras_for(&tu, &omega, &sys, MorphismOptions::new(2)).map_err(err)?.len();
                systems += 1;
                graded += l;
                algebras += r;
                bad += usize::from(l != r);
            }
            Ok((
                bad == 0,
                format!("{systems} colour systems, {graded} graded theories, {algebras} algebras, {bad} mismatches"),
            ))
        });
    }
    b.finish("graded-algebra")
}

// ---- adjunction-counts ----

fn count(x: &GradedTheoryPresentation, z: &GradedTheoryPresentation) -> Result<usize, String> {
    Ok(graded_morphisms(x, z, MorphismOptions::new(x.base.header.bound)).map_err(err)?.len())
}

/// Thin graded theories over `u` for every colour system with at most `budget` colours
/// and at most `per_colour` colours over each base colour.
fn thin_all(u: &TheoryPresentation, budget: usize, per_colour: usize, bound: usize) -> Vec<GradedTheoryPresentation> {
    colour_systems(&u.colours(), budget)
        .iter()
        .filter(|c| c.values().all(|xs| xs.len() <= per_colour))
        .filter_map(|c| enumerate_thin_graded(u, c, bound).ok())
        .flatten()
        .collect()
}

fn adjunction_counts() -> SuiteReport {
    let mut b = Builder::new();
    let bound = 1;
    let left = [
        ("discrete category to init", discrete_category(2, bound), init_operad(bound)),
        ("walking arrow to init", category_theory(&walking_arrow(), bound), init_operad(bound)),
        ("e1 to com", assoc_operad(bound), commutative_operad(true, bound)),
    ];
    for (name, v, u) in &left {
        b.claim(format!("left push, {name}"), || {
            let ps = enumerate_morphisms(v, u, MorphismOptions::new(bound)).map_err(err)?;
            let p = ps.first().ok_or("no projection")?;
            let (ys, zs) = (thin_all(v, 2, 2, bound), thin_all(u, 2, 2, bound));
            let (mut l, mut r, mut bad) = (0, 0, 0);
            for y in &ys {
                for z in &zs {
                    let a = count(&push_left(p, u, y).map_err(err)?, z)?;
                    let c = count(y, &pullback(p, v, z).map_err(err)?)?;
                    l += a;
                    r += c;
                    bad += usize::from(a != c);
                }
            }
            Ok((bad == 0, format!("{} x {} pairs, totals {l} and {r}, {bad} mismatches", ys.len(), zs.len())))
        });
    }
    let bound = 2;
    let z1 = monoidal_theory(&cyclic_group(1), false, bound);
    let z2 = monoidal_theory(&cyclic_group(2), false, bound);
    let z4 = monoidal_theory(&cyclic_group(4), false, bound);
    let right = [("Z/2 to Z/1", &z2, &z1), ("Z/2 to Z/2", &z2, &z2), ("Z/1 to Z/2", &z1, &z2)];
    for (name, v, u) in right {
        b.claim(format!("right push, {name}"), || {
            let ps = enumerate_morphisms(v, u, MorphismOptions::new(bound)).map_err(err)?;
            let p = ps.first().ok_or("no projection")?;
            let mut xs = vec![terminal_graded(v).map_err(err)?];
            for f in enumerate_morphisms(&z4, v, MorphismOptions::new(bound)).map_err(err)?.iter().take(2) {
                xs.push(from_projection(&z4, f, v).map_err(err)?);
            }
            let (tu, tv) = (theta(u, bound).map_err(err)?, theta(v, bound).map_err(err)?);
            let tp = theta_map(p, &tv, &tu).map_err(err)?;
            let zs = thin_all(&tu, 2, 1, bound);
            let (mut l, mut r, mut bad) = (0, 0, 0);
            for x in &xs {
                let px = push_right(p, u, x, bound).map_err(err)?;
                let tx = theta_graded(x, bound).map_err(err)?;
                for z in &zs {
                    let a = count(z, &px)?;
                    let c = count(&pullback(&tp, &tv, z).map_err(err)?, &tx)?;
                    l += a;
                    r += c;
                    bad += usize::from(a != c);
                }
            }
            Ok((bad == 0, format!("{} x {} pairs, totals {l} and {r}, {bad} mismatches", xs.len(), zs.len())))
        });
    }
    b.claim("convolution with the terminal grading is theta", || {
        let f = enumerate_morphisms(&z4, &z2, MorphismOptions::new(bound)).map_err(err)?;
        let x = from_projection(&z4, f.first().ok_or("no projection")?, &z2).map_err(err)?;
        let cv = convolve(&terminal_graded(&z2).map_err(err)?, &x, bound).map_err(err)?;
        let tx = theta_graded(&x, bound).map_err(err)?;
        let id = TheoryMorphism::identity(&z2, bound).map_err(err)?;
        let px = push_right(&id, &z2, &x, bound).map_err(err)?;
        let (cv, tx, px) = (canonical(&cv).map_err(err)?, canonical(&tx).map_err(err)?, canonical(&px).map_err(err)?);
        Ok((cv == tx && px == tx, format!("{} cells", tx.cell_count())))
    });
    b.finish("adjunction-counts")
}

// ---- operad-slice ----

/// Sub-operads of `o`: subsets of its operations closed under composition, counted by
/// brute force over subsets.
fn suboperads(o: &TheoryPresentation) -> Result<usize, String> {
    let cands: Vec<(CellKey, Label)> =
        o.strata[1].iter().flat_map(|(k, ls)| ls.iter().map(move |l| (k.clone(), l.clone()))).collect();
    if cands.len() > 16 {
        return Err(format!("{} operations exceed the brute-force limit", cands.len()));
    }
    let mut n = 0;
    for mask in 0..1u32 << cands.len() {
        let mut p = o.clone();
        for (i, (k, l)) in cands.iter().enumerate() {
            if mask >> i & 1 == 0 {
                if let Some(e) = p.strata[1].get_mut(k) {
                    e.retain(|x| x != l);
                }
            }
        }
        p.strata[1].retain(|_, v| !v.is_empty());
        let q = p.clone();
        let mut failed = None;
        p.composition.retain(|k, _| match intern_key(&k.arity, q.header.variance) {
            Ok(a) => matches!(check_type(&q, &a, &k.values), Ok(None)),
            Err(e) => {
                failed = Some(e.to_string());
                false
            }
        });
        if let Some(e) = failed {
            return Err(e);
        }
        let r = validate_theory(&p);
        n += usize::from(r.passed() && r.warnings.is_empty());
    }
    Ok(n)
}

fn operad_slice() -> SuiteReport {
    let mut b = Builder::new();
    let omega = match theta(&Truth { bound: 2 }, 2) {
        Ok(o) => o,
        Err(e) => {
            b.claim("truth theory", || Err(err(e)));
            return b.finish("operad-slice");
        }
    };
    let sys: ColourSystem = [(label("*"), vec![label("x1")])].into_iter().collect();
    let cases = [
        ("non-unital com", commutative_operad(false, 2)),
        ("com", commutative_operad(true, 2)),
        ("e1", assoc_operad(2)),
    ];
    for (name, o) in &cases {
        b.claim(format!("{name}: algebras match operads over it"), || {
            let to = theta(o, 2).map_err(err)?;
            let alg = enumerate_algebras_for(&to, &omega, &sys, MorphismOptions::new(2)).map_err(err)?.len();
            let over = suboperads(o)?;
            let thin = enumerate_thin_graded(o, &sys, 2).map_err(err)?.len();
            Ok((
                alg == over && over == thin,
                format!("{} operations, {alg} algebras, {over} operads over it, {thin} graded", o.cell_count()),
            ))
        });
    }
    b.finish("operad-slice")
}

// ---- bgraded-bases ----

/// `Σ_{x,y} |Iso(x, y)|`.
pub fn iso_count(c: &FinCategory) -> usize {
    c.arrows
        .iter()
        .filter(|(f, (x, y))| {
            c.hom(y, x).iter().any(|g| c.compose(f, g) == c.identity(x) && c.compose(g, f) == c.identity(y))
        })
        .count()
}

fn show_category(c: &FinCategory) -> String {
    let arrows: Vec<String> = c.arrows.iter().map(|(f, (s, t))| format!("{f}:{s}->{t}")).collect();
    let comp: Vec<String> =
        c.composition.iter().filter(|((f, g), _)| !f.starts_with('1') && !g.starts_with('1')).map(|((f, g), h)| format!("{g}.{f}={h}")).collect();
    format!("[{}; {}]", arrows.join(" "), comp.join(" "))
}

pub const FIELD_THEORY_MAX_OBJECTS: usize = 3;
pub const FIELD_THEORY_MAX_ARROWS: usize = 4;

fn bgraded_bases() -> SuiteReport {
    let mut b = Builder::new();
    let bord = bord1_skeleton(3, 1);
    b.claim("oriented bordism skeleton is free (3 points, 1 circle)", || {
        bord.check_free().map_err(err)?;
        Ok((true, format!("{} morphisms, {} indecomposable", bord.morphisms.len(), bord.indecomposables().len())))
    });
    let cocorr = cocorr_fin_skeleton(2);
    b.claim("cospan skeleton is free (2 points)", || {
        cocorr.check_free().map_err(err)?;
        Ok((true, format!("{} morphisms, {} indecomposable", cocorr.morphisms.len(), cocorr.indecomposables().len())))
    });
    b.claim("properad adapter roundtrips", || {
        let x = materialize_bgraded(&cocorr, &AssocProperad).map_err(err)?;
        let valid = bgraded_validate(&cocorr, &x);
        let p = properad_from_graded(&x).map_err(err)?;
        let back = properad_adapter(&p, &cocorr).map_err(err)?;
        let again = properad_from_graded(&back).map_err(err)?;
        Ok((
            valid.passed() && back == x && again == p,
            format!("{} operation sets, {} composites, valid {}", p.operations.len(), p.composition.len(), valid.passed()),
        ))
    });
    let cats = enumerate_categories(FIELD_THEORY_MAX_OBJECTS, FIELD_THEORY_MAX_ARROWS);
    let counts: Result<Vec<usize>, String> = cats
        .iter()
        .map(|c| {
            let z = zc_build(c, &bord, CircleValue::Point).map_err(err)?;
            Ok(field_theories(&bord, &z).map_err(err)?.len())
        })
        .collect();
    let scope = format!(
        "{} categories with <= {FIELD_THEORY_MAX_OBJECTS} objects and <= {FIELD_THEORY_MAX_ARROWS} arrows",
        cats.len()
    );
    match counts {
        Ok(counts) => {
            b.claim("field theories are the objects", || {
                let bad: Vec<usize> = (0..cats.len()).filter(|&i| counts[i] != cats[i].objects.len()).collect();
                let first = bad.first().map(|&i| {
                    format!(", first {} with {} objects and {} field theories", show_category(&cats[i]), cats[i].objects.len(), counts[i])
                });
                Ok((bad.is_empty(), format!("{scope}, {} mismatches{}", bad.len(), first.unwrap_or_default())))
            });
            b.claim("field theories are the isomorphisms", || {
                let bad = (0..cats.len()).filter(|&i| counts[i] != iso_count(&cats[i])).count();
                Ok((bad == 0, format!("{scope}, {bad} mismatches")))
            });
        }
        Err(e) => b.claim("field theories", || Err(e)),
    }
    b.finish("bgraded-bases")
}

