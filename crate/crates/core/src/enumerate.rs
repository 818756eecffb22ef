//! Backtracking enumeration of cocontinuous maps and bimorphisms.
//!
//! Candidates are built object by object. Preservation of the least object,
//! tensors and binary joins is used as propagation: once the images of the
//! inputs of a colimit are known, the image of the colimit is forced. The hom
//! inequality prunes every new assignment against the ones already made.

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Arc;

use crate::caps;
use crate::cocomplete::CocompleteWitness;
use crate::dist::{map_hom, VFunctor};
use crate::error::{Error, Result};
use crate::par;
use crate::quantale::Elem;
use crate::vcat::{tensor_vcat, VCategory};

const UNSET: usize = usize::MAX;

/// `f(dst) = op(f(srcs))` for an operation in the codomain.
#[derive(Clone, Copy, Debug)]
enum Rule {
    /// `f(dst) = c`
    Const { dst: usize, c: usize },
    /// `f(dst) = v ⊗ f(src)`
    Tensor { src: usize, v: Elem, dst: usize },
    /// `f(dst) = f(a) ∨ f(b)`
    Join { a: usize, b: usize, dst: usize },
}

struct Problem<'a> {
    dom: &'a VCategory,
    cod: &'a CocompleteWitness,
    consts: Vec<(usize, usize)>,
    /// rules indexed by each of their sources
    by_src: Vec<Vec<Rule>>,
    cap: usize,
    nodes: &'a AtomicUsize,
    overflow: &'a AtomicBool,
}

impl Problem<'_> {
    fn fire(&self, r: Rule, img: &[usize]) -> Option<(usize, usize)> {
        match r {
            Rule::Const { dst, c } => Some((dst, c)),
            Rule::Tensor { src, v, dst } => (img[src] != UNSET).then(|| (dst, self.cod.tensor(v, img[src]))),
            Rule::Join { a, b, dst } => {
                (img[a] != UNSET && img[b] != UNSET).then(|| (dst, self.cod.join(img[a], img[b])))
            }
        }
    }

    /// Set `f(x) = y` and everything it forces. Returns false on conflict;
    /// `trail` records what was set so the caller can undo it.
    fn assign(&self, x: usize, y: usize, img: &mut [usize], trail: &mut Vec<usize>) -> bool {
        let q = self.dom.quantale();
        let cod = self.cod.base();
        let mut queue = vec![(x, y)];
        while let Some((x, y)) = queue.pop() {
            if img[x] != UNSET {
                if img[x] != y {
                    return false;
                }
                continue;
            }
            for &u in trail.iter() {
                if !q.leq(self.dom.hom(x, u), cod.hom(y, img[u])) || !q.leq(self.dom.hom(u, x), cod.hom(img[u], y)) {
                    return false;
                }
            }
            if !q.leq(self.dom.hom(x, x), cod.hom(y, y)) {
                return false;
            }
            img[x] = y;
            trail.push(x);
            for &r in &self.by_src[x] {
                if let Some(p) = self.fire(r, img) {
                    queue.push(p);
                }
            }
        }
        true
    }

    fn undo(img: &mut [usize], trail: &mut Vec<usize>, mark: usize) {
        for &x in &trail[mark..] {
            img[x] = UNSET;
        }
        trail.truncate(mark);
    }

    fn run(&self, img: &mut Vec<usize>, trail: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if self.overflow.load(Ordering::Relaxed) {
            return;
        }
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.cap {
            self.overflow.store(true, Ordering::Relaxed);
            return;
        }
        let Some(x) = img.iter().position(|&y| y == UNSET) else {
            out.push(img.clone());
            return;
        };
        for y in 0..self.cod.base().len() {
            let mark = trail.len();
            if self.assign(x, y, img, trail) {
                self.run(img, trail, out);
            }
            Self::undo(img, trail, mark);
        }
    }

    fn solve(&self) -> Result<Vec<Vec<usize>>> {
        let n = self.dom.len();
        let mut img = vec![UNSET; n];
        let mut trail = Vec::new();
        for &(x, y) in &self.consts {
            if !self.assign(x, y, &mut img, &mut trail) {
                return Ok(Vec::new());
            }
        }
        let Some(x0) = img.iter().position(|&y| y == UNSET) else {
            return Ok(vec![img]);
        };
        let parts = par::map_range(self.cod.base().len(), |y| {
            let mut img = img.clone();
            let mut trail = trail.clone();
            let mut out = Vec::new();
            if self.assign(x0, y, &mut img, &mut trail) {
                self.run(&mut img, &mut trail, &mut out);
            }
            out
        });
        if self.overflow.load(Ordering::Relaxed) {
            return Err(Error::SizeExceeded {
                what: format!("search nodes for maps {} -> {}", self.dom.name(), self.cod.base().name()),
                needed: self.cap + 1,
                cap: self.cap,
            });
        }
        let mut all: Vec<Vec<usize>> = parts.into_iter().flatten().collect();
        all.sort_unstable();
        Ok(all)
    }
}

fn index_rules(n: usize, rules: &[Rule]) -> (Vec<(usize, usize)>, Vec<Vec<Rule>>) {
    let mut consts = Vec::new();
    let mut by_src = vec![Vec::new(); n];
    for &r in rules {
        match r {
            Rule::Const { dst, c } => consts.push((dst, c)),
            Rule::Tensor { src, .. } => by_src[src].push(r),
            Rule::Join { a, b, .. } => {
                by_src[a].push(r);
                if b != a {
                    by_src[b].push(r);
                }
            }
        }
    }
    (consts, by_src)
}

fn solve(dom: &VCategory, cod: &CocompleteWitness, rules: Vec<Rule>) -> Result<Vec<Vec<usize>>> {
    let nodes = AtomicUsize::new(0);
    let overflow = AtomicBool::new(false);
    let (consts, by_src) = index_rules(dom.len(), &rules);
    let p = Problem {
        dom,
        cod,
        consts,
        by_src,
        cap: caps::current().max_functor_nodes,
        nodes: &nodes,
        overflow: &overflow,
    };
    p.solve()
}

fn cocontinuity_rules(a: &CocompleteWitness, cod: &CocompleteWitness, embed: impl Fn(usize) -> usize) -> Vec<Rule> {
    let base = a.base();
    let q = base.quantale();
    let m = base.len();
    let mut rules = vec![Rule::Const { dst: embed(a.bottom()), c: cod.bottom() }];
    for x in 0..m {
        for v in q.elements() {
            rules.push(Rule::Tensor { src: embed(x), v, dst: embed(a.tensor(v, x)) });
        }
        for y in x..m {
            rules.push(Rule::Join { a: embed(x), b: embed(y), dst: embed(a.join(x, y)) });
        }
    }
    rules
}

/// All cocontinuous maps `A → B`, sorted lexicographically.
pub fn cocontinuous_maps(wa: &CocompleteWitness, wb: &CocompleteWitness) -> Result<Vec<Vec<usize>>> {
    crate::vcat::same_quantale(wa.base().quantale(), wb.base().quantale())
        .then_some(())
        .ok_or(Error::QuantaleMismatch)?;
    solve(wa.base(), wb, cocontinuity_rules(wa, wb, |x| x))
}

/// All bimorphisms `A ⊗ B → C` (maps on pair indices `a * |B| + b`), sorted.
pub fn bimorphisms(wa: &CocompleteWitness, wb: &CocompleteWitness, wc: &CocompleteWitness) -> Result<Vec<Vec<usize>>> {
    let (a, b) = (wa.base(), wb.base());
    let ab = tensor_vcat(a, b)?;
    let nb = b.len();
    let mut rules = Vec::new();
    for y in 0..nb {
        rules.extend(cocontinuity_rules(wa, wc, |x| x * nb + y));
    }
    for x in 0..a.len() {
        rules.extend(cocontinuity_rules(wb, wc, |y| x * nb + y));
    }
    solve(&ab, wc, rules)
}

/// `V-Sup(A, B)`: cocontinuous maps as objects, hom `⋀_a B(f a, g a)`.
pub fn sup_hom_category(wa: &CocompleteWitness, wb: &CocompleteWitness) -> Result<(Arc<VCategory>, Vec<Vec<usize>>)> {
    let maps = cocontinuous_maps(wa, wb)?;
    let b = wb.base();
    let cat = maps_category(b, &maps, &format!("Sup({},{})", wa.base().name(), b.name()));
    Ok((Arc::new(cat), maps))
}

/// A V-category whose objects are maps into `cod`, compared pointwise.
pub fn maps_category(cod: &VCategory, maps: &[Vec<usize>], name: &str) -> VCategory {
    let n = maps.len();
    let rows = par::map_range(n, |i| (0..n).map(|j| map_hom(cod, &maps[i], &maps[j])).collect::<Vec<_>>());
    let names = maps
        .iter()
        .map(|f| format!("<{}>", f.iter().map(|&y| cod.object_name(y)).collect::<Vec<_>>().join(",")))
        .collect();
    VCategory::from_parts(cod.quantale().clone(), name.to_string(), names, rows.concat())
}

/// The functor with the given map.
pub fn functor(dom: &Arc<VCategory>, cod: &Arc<VCategory>, map: Vec<usize>) -> VFunctor {
    VFunctor::from_parts(dom.clone(), cod.clone(), map)
}

/// All V-functors `X → Y` by brute force; a reference for the pruned search.
pub fn all_functors_naive(x: &VCategory, y: &VCategory) -> Vec<Vec<usize>> {
    let (m, n) = (x.len(), y.len());
    let total = n.checked_pow(m as u32).unwrap_or(usize::MAX);
    assert!(total <= 10_000_000, "naive functor enumeration too large");
    let mut out = Vec::new();
    for mut k in 0..total {
        let mut f = vec![0; m];
        for i in (0..m).rev() {
            f[i] = k % n;
            k /= n;
        }
        if crate::dist::functor_defect(x, y, &f).is_none() {
            out.push(f);
        }
    }
    out
}
