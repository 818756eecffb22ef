//! Presheaves and the free cocompletion `D`.
//!
//! A presheaf on `X` is a value vector `φ` with `X(x, x') ⊗ φ(x') ≤ φ(x)`.
//! [`PresheafSpace`] holds all of them in lexicographic order; its hom
//! `D X(φ, φ') = ⋀_x [φ(x), φ'(x)]` is computed on demand, and the full matrix
//! is only materialized on request (and within [`crate::caps`]).

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::{Arc, OnceLock};

use crate::caps;
use crate::dist::{Distributor, VFunctor};
use crate::error::{Error, Result};
use crate::par;
use crate::quantale::{Elem, Quantale};
use crate::vcat::{full_subcategory, tensor_vcat, unit_vcat, VCategory};

pub struct PresheafSpace {
    base: Arc<VCategory>,
    width: usize,
    data: Vec<Elem>,
    count: usize,
    materialized: OnceLock<Arc<VCategory>>,
}

impl std::fmt::Debug for PresheafSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PresheafSpace({} over {}, {} presheaves)", self.base.name(), self.base.quantale().name(), self.count)
    }
}

/// `X(x, x') ⊗ φ(x') ≤ φ(x)` for all `x, x'`.
pub fn is_presheaf(x: &VCategory, phi: &[Elem]) -> bool {
    let q = x.quantale();
    let m = x.len();
    phi.len() == m && (0..m).all(|a| (0..m).all(|b| q.leq(q.mul(x.hom(a, b), phi[b]), phi[a])))
}

/// `X(x, x') ⊗ ψ(x) ≤ ψ(x')`.
pub fn is_covariant_presheaf(x: &VCategory, psi: &[Elem]) -> bool {
    let q = x.quantale();
    let m = x.len();
    psi.len() == m && (0..m).all(|a| (0..m).all(|b| q.leq(q.mul(x.hom(a, b), psi[a]), psi[b])))
}

/// `⋀_x [φ(x), ψ(x)]`.
#[inline]
pub fn presheaf_hom(q: &Quantale, phi: &[Elem], psi: &[Elem]) -> Elem {
    let mut acc = q.top();
    for (&a, &b) in phi.iter().zip(psi) {
        acc = q.meet(acc, q.residuate(a, b));
    }
    acc
}

pub fn pointwise_le(q: &Quantale, phi: &[Elem], psi: &[Elem]) -> bool {
    phi.iter().zip(psi).all(|(&a, &b)| q.leq(a, b))
}

pub fn pointwise_meet(q: &Quantale, phi: &[Elem], psi: &[Elem]) -> Vec<Elem> {
    phi.iter().zip(psi).map(|(&a, &b)| q.meet(a, b)).collect()
}

struct Search<'a> {
    x: &'a VCategory,
    q: &'a Quantale,
    order: Vec<usize>,
    cap: usize,
    found: &'a AtomicUsize,
    overflow: &'a AtomicBool,
}

#[derive(Clone)]
struct State {
    val: Vec<Elem>,
    lb: Vec<Elem>,
    ub: Vec<Elem>,
    depth: usize,
}

impl Search<'_> {
    fn initial(&self) -> State {
        let m = self.x.len();
        State { val: vec![0; m], lb: vec![self.q.bottom(); m], ub: vec![self.q.top(); m], depth: 0 }
    }

    fn candidates(&self, s: &State) -> Vec<Elem> {
        let x = self.order[s.depth];
        let (lo, hi) = (s.lb[x], s.ub[x]);
        let d = self.x.hom(x, x);
        self.q
            .elements()
            .filter(|&v| self.q.leq(lo, v) && self.q.leq(v, hi) && self.q.leq(self.q.mul(d, v), v))
            .collect()
    }

    /// Assign `v` to the next variable and propagate bounds; `None` on a dead end.
    fn assign(&self, s: &State, v: Elem) -> Option<State> {
        let q = self.q;
        let xv = self.order[s.depth];
        let mut t = s.clone();
        t.val[xv] = v;
        t.depth += 1;
        for &u in &self.order[t.depth..] {
            // X(u, xv) ⊗ φ(xv) ≤ φ(u)  and  X(xv, u) ⊗ φ(u) ≤ φ(xv)
            t.lb[u] = q.join(t.lb[u], q.mul(self.x.hom(u, xv), v));
            t.ub[u] = q.meet(t.ub[u], q.residuate(self.x.hom(xv, u), v));
            if !q.leq(t.lb[u], t.ub[u]) {
                return None;
            }
        }
        Some(t)
    }

    fn run(&self, s: State, out: &mut Vec<Vec<Elem>>) {
        if self.overflow.load(Ordering::Relaxed) {
            return;
        }
        if s.depth == self.order.len() {
            if self.found.fetch_add(1, Ordering::Relaxed) >= self.cap {
                self.overflow.store(true, Ordering::Relaxed);
                return;
            }
            out.push(s.val);
            return;
        }
        for v in self.candidates(&s) {
            if let Some(t) = self.assign(&s, v) {
                self.run(t, out);
            }
        }
    }
}

/// All presheaves on `x`, sorted lexicographically, by bound-propagating backtracking.
pub fn enumerate_presheaf_vectors(x: &VCategory) -> Result<Vec<Vec<Elem>>> {
    enumerate_presheaf_vectors_capped(x, caps::current().max_presheaves)
}

/// As [`enumerate_presheaf_vectors`] with an explicit bound on the count.
pub fn enumerate_presheaf_vectors_capped(x: &VCategory, cap: usize) -> Result<Vec<Vec<Elem>>> {
    let m = x.len();
    let mut order: Vec<usize> = (0..m).collect();
    let outdeg = |a: usize| (0..m).filter(|&b| b != a && x.le(a, b)).count();
    order.sort_by_key(|&a| std::cmp::Reverse(outdeg(a)));
    let found = AtomicUsize::new(0);
    let overflow = AtomicBool::new(false);
    let search = Search { x, q: x.quantale(), order, cap, found: &found, overflow: &overflow };

    // Expand a frontier of partial assignments, then fan out.
    let mut frontier = vec![search.initial()];
    while frontier.len() < 64 && frontier.iter().any(|s| s.depth < m) {
        let mut next = Vec::new();
        for s in frontier {
            if s.depth == m {
                next.push(s);
                continue;
            }
            for v in search.candidates(&s) {
                if let Some(t) = search.assign(&s, v) {
                    next.push(t);
                }
            }
        }
        frontier = next;
    }
    let parts = par::map(&frontier, |s| {
        let mut out = Vec::new();
        search.run(s.clone(), &mut out);
        out
    });
    if overflow.load(Ordering::Relaxed) {
        return Err(Error::SizeExceeded { what: format!("presheaves on {}", x.name()), needed: cap + 1, cap });
    }
    let mut all: Vec<Vec<Elem>> = parts.into_iter().flatten().collect();
    all.sort_unstable();
    debug_assert!(all.iter().all(|p| is_presheaf(x, p)));
    Ok(all)
}

/// Reference enumeration by filtering all `|V|^m` vectors; for tests and small inputs.
pub fn naive_presheaf_vectors(x: &VCategory) -> Vec<Vec<Elem>> {
    let n = x.quantale().len();
    let m = x.len();
    let total = n.pow(m as u32);
    let mut out = Vec::new();
    for mut k in 0..total {
        let mut v = vec![0 as Elem; m];
        for i in (0..m).rev() {
            v[i] = (k % n) as Elem;
            k /= n;
        }
        if is_presheaf(x, &v) {
            out.push(v);
        }
    }
    out
}

impl PresheafSpace {
    pub fn enumerate(base: Arc<VCategory>) -> Result<Self> {
        let vecs = enumerate_presheaf_vectors(&base)?;
        Ok(Self::from_sorted(base, vecs))
    }

    pub fn enumerate_capped(base: Arc<VCategory>, cap: usize) -> Result<Self> {
        let vecs = enumerate_presheaf_vectors_capped(&base, cap.min(caps::current().max_presheaves))?;
        Ok(Self::from_sorted(base, vecs))
    }

    /// `vecs` must be sorted and each a presheaf.
    pub(crate) fn from_sorted(base: Arc<VCategory>, vecs: Vec<Vec<Elem>>) -> Self {
        let width = base.len();
        let count = vecs.len();
        PresheafSpace { base, width, data: vecs.concat(), count, materialized: OnceLock::new() }
    }

    pub fn base(&self) -> &Arc<VCategory> {
        &self.base
    }

    pub fn quantale(&self) -> &Arc<Quantale> {
        self.base.quantale()
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn get(&self, i: usize) -> &[Elem] {
        &self.data[i * self.width..(i + 1) * self.width]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[Elem]> {
        (0..self.count).map(move |i| self.get(i))
    }

    pub fn index_of(&self, phi: &[Elem]) -> Option<usize> {
        let (mut lo, mut hi) = (0, self.count);
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.get(mid).cmp(phi) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    pub(crate) fn must_index(&self, phi: &[Elem]) -> usize {
        self.index_of(phi).expect("vector is not an enumerated presheaf")
    }

    pub fn hom(&self, i: usize, j: usize) -> Elem {
        presheaf_hom(self.quantale(), self.get(i), self.get(j))
    }

    pub fn name_of(&self, phi: &[Elem]) -> String {
        let q = self.quantale();
        let parts: Vec<&str> = phi.iter().map(|&v| q.element_name(v)).collect();
        format!("[{}]", parts.join(","))
    }

    /// `D X` as a V-category; guarded by `max_materialize`.
    pub fn materialize(&self) -> Result<Arc<VCategory>> {
        if let Some(c) = self.materialized.get() {
            return Ok(c.clone());
        }
        let cap = caps::current().max_materialize;
        caps::guard(&format!("materialized D({})", self.base.name()), self.count, cap)?;
        let n = self.count;
        let rows = par::map_range(n, |i| (0..n).map(|j| self.hom(i, j)).collect::<Vec<_>>());
        let mut names: Vec<String> = (0..n).map(|i| self.name_of(self.get(i))).collect();
        let mut seen = std::collections::HashSet::new();
        if !names.iter().all(|s| seen.insert(s.clone())) {
            names = (0..n).map(|i| format!("p{i}")).collect();
        }
        let cat = Arc::new(VCategory::from_parts(
            self.base.quantale().clone(),
            format!("D({})", self.base.name()),
            names,
            rows.concat(),
        ));
        Ok(self.materialized.get_or_init(|| cat).clone())
    }
}

pub fn enumerate_presheaves(x: &Arc<VCategory>) -> Result<PresheafSpace> {
    PresheafSpace::enumerate(x.clone())
}

/// Representable presheaf indices `x ↦ X(-, x)`.
pub fn yoneda_map(space: &PresheafSpace) -> Vec<usize> {
    let x = space.base();
    (0..x.len()).map(|a| space.must_index(&x.column(a))).collect()
}

/// `y_X: X → D X`.
pub fn yoneda(space: &PresheafSpace) -> Result<VFunctor> {
    let d = space.materialize()?;
    Ok(VFunctor::from_parts(space.base().clone(), d, yoneda_map(space)))
}

/// Distributor `φ: Y ⇸ X` to its classifying functor `Y → D X`, `y ↦ φ(-, y)`.
pub fn dist_to_functor(phi: &Distributor, space: &PresheafSpace) -> Result<VFunctor> {
    let x = phi.cod();
    if !crate::dist::same_cat(x, space.base()) {
        return Err(Error::BoundaryMismatch("presheaf space is not over the distributor's codomain".into()));
    }
    let d = space.materialize()?;
    let map = (0..phi.dom().len())
        .map(|y| {
            let col: Vec<Elem> = (0..x.len()).map(|a| phi.at(a, y)).collect();
            space.must_index(&col)
        })
        .collect();
    Ok(VFunctor::from_parts(phi.dom().clone(), d, map))
}

/// Inverse of [`dist_to_functor`].
pub fn functor_to_dist(f: &VFunctor, space: &PresheafSpace) -> Result<Distributor> {
    let x = space.base();
    if f.cod().len() != space.len() {
        return Err(Error::BoundaryMismatch("functor does not land in the presheaf space".into()));
    }
    let my = f.dom().len();
    let mx = x.len();
    let mat = (0..mx * my).map(|k| space.get(f.apply(k % my))[k / my]).collect();
    Ok(Distributor::from_parts(f.dom().clone(), x.clone(), mat))
}

/// `D f(φ)(y) = ⋁_x Y(y, f x) ⊗ φ(x)`.
pub fn push_forward(f: &VFunctor, phi: &[Elem]) -> Vec<Elem> {
    let y = f.cod();
    let q = y.quantale();
    (0..y.len()).map(|b| q.join_all(phi.iter().enumerate().map(|(a, &v)| q.mul(y.hom(b, f.apply(a)), v)))).collect()
}

/// `D₋₁ f(ψ)(x) = ⋁_y Y(f x, y) ⊗ ψ(y)`, which is `ψ(f x)`.
pub fn pull_back(f: &VFunctor, psi: &[Elem]) -> Vec<Elem> {
    let y = f.cod();
    let q = y.quantale();
    (0..f.dom().len())
        .map(|a| q.join_all(psi.iter().enumerate().map(|(b, &v)| q.mul(y.hom(f.apply(a), b), v))))
        .collect()
}

/// `D∀ f(φ)(y) = ⋀_x [Y(f x, y), φ(x)]`.
pub fn push_forward_all(f: &VFunctor, phi: &[Elem]) -> Vec<Elem> {
    let y = f.cod();
    let q = y.quantale();
    (0..y.len())
        .map(|b| q.meet_all(phi.iter().enumerate().map(|(a, &v)| q.residuate(y.hom(f.apply(a), b), v))))
        .collect()
}

fn lift(from: &PresheafSpace, to: &PresheafSpace, op: impl Fn(&[Elem]) -> Vec<Elem> + Sync + Send) -> Result<VFunctor> {
    let dom = from.materialize()?;
    let cod = to.materialize()?;
    let map = par::map_range(from.len(), |i| to.must_index(&op(from.get(i))));
    Ok(VFunctor::from_parts(dom, cod, map))
}

/// `D f: D X → D Y`.
pub fn d_on_functor(f: &VFunctor, dx: &PresheafSpace, dy: &PresheafSpace) -> Result<VFunctor> {
    lift(dx, dy, |p| push_forward(f, p))
}

/// `D₋₁ f: D Y → D X`.
pub fn d_inv(f: &VFunctor, dx: &PresheafSpace, dy: &PresheafSpace) -> Result<VFunctor> {
    lift(dy, dx, |p| pull_back(f, p))
}

/// `D∀ f: D X → D Y`.
pub fn d_all(f: &VFunctor, dx: &PresheafSpace, dy: &PresheafSpace) -> Result<VFunctor> {
    lift(dx, dy, |p| push_forward_all(f, p))
}

/// The second-level space `D D X` over the materialized `D X`.
pub fn double_space(dx: &PresheafSpace) -> Result<PresheafSpace> {
    PresheafSpace::enumerate(dx.materialize()?)
}

/// `μ_X: D D X → D X`, `μ(Φ)(x) = Φ(y_X x)`.
pub fn mu(dx: &PresheafSpace, ddx: &PresheafSpace) -> Result<VFunctor> {
    let y = yoneda(dx)?;
    d_inv(&y, dx, ddx)
}

/// `d₂(φ, ψ)(x, y) = φ(x) ⊗ ψ(y)` on raw vectors.
pub fn d2_vec(q: &Quantale, phi: &[Elem], psi: &[Elem]) -> Vec<Elem> {
    let mut out = Vec::with_capacity(phi.len() * psi.len());
    for &a in phi {
        for &b in psi {
            out.push(q.mul(a, b));
        }
    }
    out
}

/// `d₂: D X ⊗ D Y → D(X ⊗ Y)`.
pub fn d2(dx: &PresheafSpace, dy: &PresheafSpace, dxy: &PresheafSpace) -> Result<VFunctor> {
    let q = dx.quantale();
    let a = dx.materialize()?;
    let b = dy.materialize()?;
    let dom = Arc::new(tensor_vcat(&a, &b)?);
    let cod = dxy.materialize()?;
    let map = par::map_range(dom.len(), |k| {
        let (i, j) = (k / dy.len(), k % dy.len());
        dxy.must_index(&d2_vec(q, dx.get(i), dy.get(j)))
    });
    Ok(VFunctor::from_parts(dom, cod, map))
}

/// `d₀: 𝟙 → D 𝟙`, picking the presheaf with value `e`.
pub fn d0(d_one: &PresheafSpace) -> Result<VFunctor> {
    let q = d_one.quantale();
    let one = Arc::new(unit_vcat(q));
    let cod = d_one.materialize()?;
    let idx = d_one
        .index_of(&[q.unit()])
        .ok_or_else(|| Error::BoundaryMismatch("expected presheaves on the unit category".into()))?;
    Ok(VFunctor::from_parts(one, cod, vec![idx]))
}

/// Full subcategory on `{x : e ≤ Y(g x, f x)}` for a 2-cell `f ≤ g`.
pub fn inverter(f: &VFunctor, g: &VFunctor) -> Result<(VCategory, Vec<usize>)> {
    let h = crate::dist::functor_hom(f, g)?;
    let q = f.dom().quantale();
    if !q.leq(q.unit(), h) {
        let x = (0..f.dom().len()).find(|&x| !f.cod().le(f.apply(x), g.apply(x))).unwrap_or(0);
        return Err(Error::NotA2Cell(x));
    }
    let y = f.cod();
    let objs: Vec<usize> = (0..f.dom().len()).filter(|&x| y.le(g.apply(x), f.apply(x))).collect();
    let name = format!("inv({})", f.dom().name());
    Ok((full_subcategory(f.dom(), &objs, &name), objs))
}

/// Cauchy completion as the full subcategory of `D X` on the presheaves where
/// `D∀ y(φ) ≤ D y(φ)`.
///
/// Both sides are evaluated at every `ψ ∈ D X` without building `D D X`:
/// `D∀ y(φ)(ψ) = D X(ψ, φ)` and `D y(φ)(ψ) = ⋁_x D X(ψ, y x) ⊗ φ(x)`.
pub fn cauchy_completion(space: &PresheafSpace) -> Result<(VCategory, Vec<usize>)> {
    let q = space.quantale();
    let x = space.base();
    let reps: Vec<Vec<Elem>> = (0..x.len()).map(|a| x.column(a)).collect();
    let n = space.len();
    // D X(ψ, y x) for every ψ, x
    let to_rep: Vec<Vec<Elem>> =
        par::map_range(n, |j| reps.iter().map(|r| presheaf_hom(q, space.get(j), r)).collect());
    let objs = par::filter_range(n, |i| {
        let phi = space.get(i);
        (0..n).all(|j| {
            let lhs = presheaf_hom(q, space.get(j), phi);
            let rhs = q.join_all(to_rep[j].iter().zip(phi).map(|(&h, &v)| q.mul(h, v)));
            q.leq(lhs, rhs)
        })
    });
    let names: Vec<String> = objs.iter().map(|&i| space.name_of(space.get(i))).collect();
    let mut hom = Vec::with_capacity(objs.len() * objs.len());
    for &i in &objs {
        for &j in &objs {
            hom.push(space.hom(i, j));
        }
    }
    let cat = VCategory::from_parts(q.clone(), format!("cauchy({})", x.name()), names, hom);
    Ok((cat, objs))
}
