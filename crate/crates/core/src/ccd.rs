//! Complete distributivity and nuclearity.
//!
//! A cocomplete `A` is completely distributive when `sup: D A → A` has a left
//! adjoint `t`. If it exists, `t(a)` is forced to be
//! `x ↦ ⋀_ψ [A(a, sup ψ), ψ(x)]`, so we compute that and check the adjunction.
//!
//! Nuclearity is decided by building `A ⊗ A*` with `A* = V-Sup(A, V)` and
//! testing whether the canonical map into `V-Sup(A, A)` is an isomorphism.

use std::sync::Arc;

use crate::cocomplete::{check_cocomplete, cocomplete_witness, CocompleteWitness};
use crate::enumerate::{cocontinuous_maps, maps_category, sup_hom_category};
use crate::error::{Error, Result};
use crate::par;
use crate::presheaf::{is_presheaf, presheaf_hom, PresheafSpace};
use crate::quantale::Elem;
use crate::tensorprod::{build_tensor_product_with, extend_bimorphism, is_bimorphism, TensorProduct};
use crate::vcat::{quantale_vcat, VCategory};

/// The left adjoint `t` of `sup`, as presheaf indices.
#[derive(Debug, Clone)]
pub struct TotallyBelowWitness {
    space: Arc<PresheafSpace>,
    t: Vec<usize>,
}

impl TotallyBelowWitness {
    pub fn t_index(&self, a: usize) -> usize {
        self.t[a]
    }

    pub fn t_map(&self) -> &[usize] {
        &self.t
    }

    /// `t(a)` as a presheaf; `t(a)(x)` is how much `x` is totally below `a`.
    pub fn t(&self, a: usize) -> &[Elem] {
        self.space.get(self.t[a])
    }

    pub fn space(&self) -> &Arc<PresheafSpace> {
        &self.space
    }
}

fn space_of(w: &CocompleteWitness) -> Result<&Arc<PresheafSpace>> {
    w.space().ok_or_else(|| Error::Invariant(format!("no enumerated presheaves on {}", w.base().name())))
}

/// `t(a)(x) = ⋀_ψ [A(a, sup ψ), ψ(x)]`.
fn t_candidate(w: &CocompleteWitness, space: &PresheafSpace, a: usize) -> Vec<Elem> {
    let x = w.base();
    let q = x.quantale();
    let mut acc = vec![q.top(); x.len()];
    for (i, psi) in space.iter().enumerate() {
        let h = x.hom(a, w.sup_index(i));
        for (c, &p) in acc.iter_mut().zip(psi) {
            *c = q.meet(*c, q.residuate(h, p));
        }
    }
    acc
}

/// `D A(t a, ψ) = A(a, sup ψ)` for every `ψ`.
fn represents(w: &CocompleteWitness, space: &PresheafSpace, a: usize, phi: &[Elem]) -> bool {
    let q = w.base().quantale();
    (0..space.len()).all(|i| presheaf_hom(q, phi, space.get(i)) == w.base().hom(a, w.sup_index(i)))
}

/// The left adjoint of `sup`, or `NotCcd(a)` for the first object without one.
pub fn totally_below(w: &CocompleteWitness) -> Result<TotallyBelowWitness> {
    let space = space_of(w)?;
    let a = w.base();
    let found = par::map_range(a.len(), |x| {
        let cand = t_candidate(w, space, x);
        represents(w, space, x, &cand).then(|| space.index_of(&cand)).flatten()
    });
    if let Some(x) = found.iter().position(|f| f.is_none()) {
        return Err(Error::NotCcd(x));
    }
    let t: Vec<usize> = found.into_iter().map(|f| f.unwrap()).collect();
    // t is a V-functor
    let q = a.quantale();
    for x in 0..a.len() {
        for y in 0..a.len() {
            if !q.leq(a.hom(x, y), space.hom(t[x], t[y])) {
                return Err(Error::Invariant(format!("left adjoint of sup is not a functor at ({x},{y})")));
            }
        }
    }
    Ok(TotallyBelowWitness { space: space.clone(), t })
}

/// Reference search: every presheaf tried as `t(a)`.
pub fn totally_below_by_search(w: &CocompleteWitness) -> Result<Option<Vec<usize>>> {
    let space = space_of(w)?;
    let mut t = Vec::new();
    for a in 0..w.base().len() {
        let hits: Vec<usize> = (0..space.len()).filter(|&i| represents(w, space, a, space.get(i))).collect();
        match hits.as_slice() {
            [i] => t.push(*i),
            [] => return Ok(None),
            _ => return Err(Error::Invariant("two representers on a separated presheaf space".into())),
        }
    }
    Ok(Some(t))
}

pub fn is_ccd(w: &CocompleteWitness) -> Result<bool> {
    match totally_below(w) {
        Ok(_) => Ok(true),
        Err(Error::NotCcd(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

/// `q(ξ)(a, b) = ⋀_{(x,y)} [t_A(a)(x) ⊗ t_B(b)(y), ξ(x, y)]`.
pub fn ccd_reflector(ta: &TotallyBelowWitness, tb: &TotallyBelowWitness, xi: &[Elem]) -> Vec<Elem> {
    let q = ta.space.quantale();
    let (na, nb) = (ta.t.len(), tb.t.len());
    let mut out = Vec::with_capacity(na * nb);
    for a in 0..na {
        for b in 0..nb {
            let (ra, rb) = (ta.t(a), tb.t(b));
            let mut acc = q.top();
            for (x, &u) in ra.iter().enumerate() {
                for (y, &v) in rb.iter().enumerate() {
                    acc = q.meet(acc, q.residuate(q.mul(u, v), xi[x * nb + y]));
                }
            }
            out.push(acc);
        }
    }
    out
}

/// `A* = V-Sup(A, V)`.
pub struct DualObject {
    pub category: Arc<VCategory>,
    pub maps: Vec<Vec<usize>>,
    pub witness: Arc<CocompleteWitness>,
}

pub fn dual_object(w: &CocompleteWitness) -> Result<DualObject> {
    let q = w.base().quantale();
    let v = Arc::new(quantale_vcat(q));
    let wv = check_cocomplete(&v)?;
    let maps = cocontinuous_maps(w, &wv)?;
    let category = Arc::new(maps_category(&v, &maps, &format!("{}^*", w.base().name())));
    let witness = Arc::new(cocomplete_witness(&category)?);
    Ok(DualObject { category, maps, witness })
}

#[derive(Debug, Clone)]
pub struct NuclearReport {
    pub nuclear: bool,
    pub dual_size: usize,
    pub tensor_size: usize,
    pub endo_size: usize,
    /// Why the canonical map is not an isomorphism.
    pub reason: Option<String>,
}

/// Whether `A ⊗ A* → V-Sup(A, A)` is an isomorphism of V-categories.
pub fn is_nuclear(w: &Arc<CocompleteWitness>) -> Result<NuclearReport> {
    let a = w.base();
    let dual = dual_object(w)?;
    let tp = build_tensor_product_with(w, &dual.witness)?;
    let (h, hmaps) = sup_hom_category(w, w)?;
    let wh = cocomplete_witness(&h)?;

    // g(a, f) = (x ↦ f(x) ⊗ a)
    let nd = dual.maps.len();
    let mut g = Vec::with_capacity(a.len() * nd);
    for x in 0..a.len() {
        for f in &dual.maps {
            let m: Vec<usize> = (0..a.len()).map(|y| w.tensor(f[y] as Elem, x)).collect();
            let k = hmaps
                .binary_search(&m)
                .map_err(|_| Error::Invariant("canonical pairing is not cocontinuous".into()))?;
            g.push(k);
        }
    }
    if !is_bimorphism(&g, w, &dual.witness, &wh)? {
        return Err(Error::Invariant("canonical pairing is not a bimorphism".into()));
    }
    let canon = extend_bimorphism(&tp, &g, &wh);
    let reason = iso_defect(tp.carrier(), &h, &canon);
    Ok(NuclearReport {
        nuclear: reason.is_none(),
        dual_size: nd,
        tensor_size: tp.len(),
        endo_size: h.len(),
        reason,
    })
}

/// Why `map: X → Y` is not a hom-preserving bijection, if it is not.
pub fn iso_defect(x: &VCategory, y: &VCategory, map: &[usize]) -> Option<String> {
    if x.len() != y.len() {
        return Some(format!("{} objects map to {} objects", x.len(), y.len()));
    }
    let mut seen = vec![false; y.len()];
    for (s, &t) in map.iter().enumerate() {
        if std::mem::replace(&mut seen[t], true) {
            return Some(format!("not injective: object {s} collides"));
        }
    }
    for s in 0..x.len() {
        for t in 0..x.len() {
            if x.hom(s, t) != y.hom(map[s], map[t]) {
                return Some(format!("hom differs between objects {s} and {t}"));
            }
        }
    }
    None
}

#[derive(Debug, Clone)]
pub struct TheoremReport {
    pub ccd: bool,
    /// First object with no totally-below presheaf.
    pub not_ccd_at: Option<usize>,
    pub nuclear: NuclearReport,
}

impl TheoremReport {
    pub fn consistent(&self) -> bool {
        self.ccd == self.nuclear.nuclear
    }
}

/// Decide complete distributivity and nuclearity independently.
pub fn check_main_theorem(w: &Arc<CocompleteWitness>) -> Result<TheoremReport> {
    let (ccd, not_ccd_at) = match totally_below(w) {
        Ok(_) => (true, None),
        Err(Error::NotCcd(a)) => (false, Some(a)),
        Err(e) => return Err(e),
    };
    let nuclear = is_nuclear(w)?;
    Ok(TheoremReport { ccd, not_ccd_at, nuclear })
}

#[derive(Debug, Clone)]
pub struct ClosureReport {
    pub tensor_size: usize,
    pub tensor_ccd: bool,
    /// The left adjoint of the reflector exists and `q ∘ ι = id`.
    pub retract: bool,
}

impl ClosureReport {
    pub fn holds(&self) -> bool {
        self.tensor_ccd && self.retract
    }
}

/// For ccd `A`, `B`: the tensor is ccd, and the reflector `q` has a left adjoint `ι`.
pub fn ccd_closure_check(wa: &Arc<CocompleteWitness>, wb: &Arc<CocompleteWitness>) -> Result<ClosureReport> {
    totally_below(wa)?;
    totally_below(wb)?;
    let tp = build_tensor_product_with(wa, wb)?;
    let wt = check_cocomplete(tp.carrier())?;
    let tensor_ccd = is_ccd(&wt)?;
    Ok(ClosureReport { tensor_size: tp.len(), tensor_ccd, retract: reflector_left_adjoint(&tp).is_some() })
}

/// `ι(ξ)(k) = ⋀_θ [T(ξ, q θ), θ(k)]`, checked to satisfy `D(ι ξ, θ) = T(ξ, q θ)`
/// and `q ∘ ι = id`. Returns `ι` as presheaf indices.
pub fn reflector_left_adjoint(tp: &TensorProduct) -> Option<Vec<usize>> {
    let space = tp.presheaves();
    let carrier = tp.carrier();
    let q = carrier.quantale();
    let width = tp.pairs().len();
    let iota = par::map_range(tp.len(), |k| {
        let mut acc = vec![q.top(); width];
        for (t, theta) in space.iter().enumerate() {
            let h = carrier.hom(k, tp.reflect_index(t));
            for (c, &p) in acc.iter_mut().zip(theta) {
                *c = q.meet(*c, q.residuate(h, p));
            }
        }
        if !is_presheaf(tp.pairs(), &acc) {
            return None;
        }
        let ok = (0..space.len())
            .all(|t| presheaf_hom(q, &acc, space.get(t)) == carrier.hom(k, tp.reflect_index(t)));
        ok.then(|| space.index_of(&acc)).flatten()
    });
    let iota: Option<Vec<usize>> = iota.into_iter().collect();
    let iota = iota?;
    iota.iter().enumerate().all(|(k, &i)| tp.reflect_index(i) == k).then_some(iota)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presheaf::{enumerate_presheaves, push_forward, yoneda_map};
    use crate::quantale::{builtin, Quantale};
    use crate::vcat::from_order;

    fn q(name: &str) -> Arc<Quantale> {
        Arc::new(builtin(name).unwrap())
    }

    fn m3(q: &Arc<Quantale>) -> Arc<VCategory> {
        let le = |x: usize, y: usize| x == y || x == 0 || y == 4;
        Arc::new(from_order(q, "M3", &["0", "a", "b", "c", "1"], le).unwrap())
    }

    #[test]
    fn quantales_are_ccd() {
        for name in crate::quantale::BUILTIN_NAMES {
            let v = Arc::new(quantale_vcat(&q(name)));
            let w = check_cocomplete(&v).unwrap();
            let t = totally_below(&w).unwrap();
            assert_eq!(Some(t.t_map().to_vec()), totally_below_by_search(&w).unwrap(), "{name}");
        }
    }

    #[test]
    fn diamond_is_not_ccd() {
        let qq = q("two");
        let w = check_cocomplete(&m3(&qq)).unwrap();
        assert!(matches!(totally_below(&w), Err(Error::NotCcd(_))));
        assert_eq!(totally_below_by_search(&w).unwrap(), None);
    }

    #[test]
    fn free_category_t_is_d_of_yoneda() {
        let qq = q("two");
        let x = Arc::new(from_order(&qq, "c2", &["0", "1"], |a, b| a <= b).unwrap());
        let dx = enumerate_presheaves(&x).unwrap();
        let d = dx.materialize().unwrap();
        let w = check_cocomplete(&d).unwrap();
        let t = totally_below(&w).unwrap();
        let y = crate::dist::VFunctor::from_parts(x.clone(), d.clone(), yoneda_map(&dx));
        for a in 0..d.len() {
            assert_eq!(t.t(a), push_forward(&y, dx.get(a)).as_slice());
        }
    }
}
