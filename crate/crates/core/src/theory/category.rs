use std::collections::BTreeMap;

use super::Label;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CategoryArrow {
    pub label: Label,
    pub src: Label,
    pub tgt: Label,
}

/// A finite category with labelled objects and arrows.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FinCategory {
    pub objects: Vec<Label>,
    pub arrows: BTreeMap<Label, (Label, Label)>,
    pub identities: BTreeMap<Label, Label>,
    /// `(f, g) ↦ g ∘ f` for `f: x → y`, `g: y → z`.
    pub composition: BTreeMap<(Label, Label), Label>,
}

impl FinCategory {
    pub fn ends(&self, f: &Label) -> Option<&(Label, Label)> {
        self.arrows.get(f)
    }

    pub fn hom(&self, x: &Label, y: &Label) -> Vec<Label> {
        self.arrows
            .iter()
            .filter(|(_, (s, t))| s == x && t == y)
            .map(|(f, _)| f.clone())
            .collect()
    }

    pub fn identity(&self, x: &Label) -> Option<&Label> {
        self.identities.get(x)
    }

    pub fn compose(&self, f: &Label, g: &Label) -> Option<&Label> {
        self.composition.get(&(f.clone(), g.clone()))
    }

    /// Identity, closure, unit and associativity laws; the first failure is described.
    pub fn check(&self) -> Result<(), String> {
        for x in &self.objects {
            let id = self.identity(x).ok_or_else(|| format!("object {x} has no identity"))?;
            match self.ends(id) {
                Some((s, t)) if s == x && t == x => {}
                _ => return Err(format!("identity {id} of {x} has wrong ends")),
            }
        }
        for (f, (s, t)) in &self.arrows {
            if !self.objects.contains(s) || !self.objects.contains(t) {
                return Err(format!("arrow {f} has an unknown end"));
            }
            let ids = self.identity(s).unwrap();
            let idt = self.identity(t).unwrap();
            if self.compose(ids, f) != Some(f) || self.compose(f, idt) != Some(f) {
                return Err(format!("unit law fails at {f}"));
            }
        }
        for (f, (_, y)) in &self.arrows {
            for (g, (y2, z)) in &self.arrows {
                if y != y2 {
                    continue;
                }
                let gf = self.compose(f, g).ok_or_else(|| format!("{g}∘{f} undefined"))?;
                match self.ends(gf) {
                    Some((s, t)) if s == &self.arrows[f].0 && t == z => {}
                    _ => return Err(format!("{g}∘{f} has wrong ends")),
                }
                for (h, (z2, _)) in &self.arrows {
                    if z != z2 {
                        continue;
                    }
                    let left = self.compose(gf, h);
                    let hg = self.compose(g, h).ok_or_else(|| format!("{h}∘{g} undefined"))?;
                    if left != self.compose(f, hg) {
                        return Err(format!("associativity fails at {f}, {g}, {h}"));
                    }
                }
            }
        }
        Ok(())
    }
}

struct Shape {
    src: Vec<usize>,
    tgt: Vec<usize>,
    objects: usize,
    table: Vec<Vec<Option<usize>>>,
}

impl Shape {
    fn get(&self, f: usize, g: usize) -> Option<usize> {
        if f < self.objects {
            Some(g)
        } else if g < self.objects {
            Some(f)
        } else {
            self.table[f][g]
        }
    }

    fn associative(&self) -> bool {
        let n = self.src.len();
        for a in self.objects..n {
            for b in (self.objects..n).filter(|&b| self.src[b] == self.tgt[a]) {
                let Some(ab) = self.get(a, b) else { continue };
                for c in (self.objects..n).filter(|&c| self.src[c] == self.tgt[b]) {
                    let (Some(bc), Some(l)) = (self.get(b, c), self.get(ab, c)) else { continue };
                    if let Some(r) = self.get(a, bc) {
                        if l != r {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    fn fill(&mut self, pairs: &[(usize, usize)], k: usize, out: &mut Vec<FinCategory>) {
        if k == pairs.len() {
            out.push(self.category());
            return;
        }
        let (f, g) = pairs[k];
        for h in 0..self.src.len() {
            if self.src[h] != self.src[f] || self.tgt[h] != self.tgt[g] {
                continue;
            }
            self.table[f][g] = Some(h);
            if self.associative() {
                self.fill(pairs, k + 1, out);
            }
        }
        self.table[f][g] = None;
    }

    fn category(&self) -> FinCategory {
        let obj = |i: usize| -> Label { format!("x{i}").into() };
        let arrow = |f: usize| -> Label {
            if f < self.objects {
                format!("1{}", obj(f)).into()
            } else {
                format!("a{}", f - self.objects).into()
            }
        };
        let mut c = FinCategory { objects: (0..self.objects).map(obj).collect(), ..Default::default() };
        for f in 0..self.src.len() {
            c.arrows.insert(arrow(f), (obj(self.src[f]), obj(self.tgt[f])));
            if f < self.objects {
                c.identities.insert(obj(f), arrow(f));
            }
            for g in (0..self.src.len()).filter(|&g| self.src[g] == self.tgt[f]) {
                c.composition.insert((arrow(f), arrow(g)), arrow(self.get(f, g).expect("complete table")));
            }
        }
        c
    }
}

/// Every category on objects `x0, x1, ...` with at most `max_objects` objects and at most
/// `max_arrows` arrows including identities, as labelled tables (isomorphic copies are
/// listed separately). Non-identity arrows are `a0, a1, ...`, ordered by hom set.
pub fn enumerate_categories(max_objects: usize, max_arrows: usize) -> Vec<FinCategory> {
    let mut out = Vec::new();
    for k in 0..=max_objects.min(max_arrows) {
        let homs = k * k;
        let spare = max_arrows - k;
        let mut counts = vec![0usize; homs];
        loop {
            let mut src: Vec<usize> = (0..k).collect();
            let mut tgt = src.clone();
            for (h, &c) in counts.iter().enumerate() {
                src.extend(std::iter::repeat_n(h / k.max(1), c));
                tgt.extend(std::iter::repeat_n(h % k.max(1), c));
            }
            let n = src.len();
            let pairs: Vec<(usize, usize)> =
                (k..n).flat_map(|f| (k..n).map(move |g| (f, g))).filter(|&(f, g)| tgt[f] == src[g]).collect();
            let mut shape = Shape { src, tgt, objects: k, table: vec![vec![None; n]; n] };
            shape.fill(&pairs, 0, &mut out);
            let mut i = 0;
            loop {
                if i == homs {
                    break;
                }
                counts[i] += 1;
                if counts.iter().sum::<usize>() <= spare {
                    break;
                }
                counts[i] = 0;
                i += 1;
            }
            if i == homs {
                break;
            }
        }
    }
    out
}
