//! Suprema, tensors, joins and weighted colimits in separated V-categories.
//!
//! The supremum of a presheaf `φ` on `X` is the object `s` whose row is
//! `X(s, x) = ⋀_{x'} [φ(x'), X(x', x)]`. On a separated category rows
//! determine objects, so every colimit below reduces to "compute the target
//! row, look it up".

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use crate::dist::{is_adjoint_maps, right_lifting, Distributor, VFunctor};
use crate::error::{Error, Result};
use crate::par;
use crate::presheaf::{push_forward, PresheafSpace};
use crate::quantale::Elem;
use crate::vcat::{require_separated, VCategory};

/// `x ↦ ⋀_{x'} [φ(x'), X(x', x)]`, the row a supremum of `φ` must have.
pub fn sup_row(x: &VCategory, phi: &[Elem]) -> Vec<Elem> {
    let q = x.quantale();
    (0..x.len())
        .map(|b| q.meet_all(phi.iter().enumerate().map(|(a, &v)| q.residuate(v, x.hom(a, b)))))
        .collect()
}

/// For each object, the number of positions where its row differs from `target`.
fn defects(x: &VCategory, target: &[Elem]) -> Vec<usize> {
    (0..x.len()).map(|z| x.row(z).iter().zip(target).filter(|(a, b)| a != b).count()).collect()
}

fn row_index(x: &VCategory) -> HashMap<Vec<Elem>, usize> {
    let mut rows = HashMap::with_capacity(x.len());
    for z in 0..x.len() {
        rows.entry(x.row(z).to_vec()).or_insert(z);
    }
    rows
}

/// Proof that a separated V-category is cocomplete, with the data to compute suprema.
pub struct CocompleteWitness {
    base: Arc<VCategory>,
    rows: HashMap<Vec<Elem>, usize>,
    bottom: usize,
    space: Option<Arc<PresheafSpace>>,
    sup_table: Vec<usize>,
    tensor_table: OnceLock<Vec<usize>>,
    join_table: OnceLock<Vec<usize>>,
}

impl std::fmt::Debug for CocompleteWitness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CocompleteWitness").field("base", &self.base.name()).field("sup_table", &self.sup_table).finish()
    }
}

/// Decide cocompleteness by finding a supremum for every presheaf.
///
/// On failure returns `NoSuchColimit` carrying the first presheaf (in the
/// canonical order) without a supremum and each object's row defect count.
pub fn check_cocomplete(x: &Arc<VCategory>) -> Result<CocompleteWitness> {
    require_separated(x)?;
    let space = Arc::new(PresheafSpace::enumerate(x.clone())?);
    check_cocomplete_with(x, space)
}

/// As [`check_cocomplete`], with presheaves already enumerated.
pub fn check_cocomplete_with(x: &Arc<VCategory>, space: Arc<PresheafSpace>) -> Result<CocompleteWitness> {
    require_separated(x)?;
    let rows = row_index(x);
    let sups = par::map_range(space.len(), |i| rows.get(&sup_row(x, space.get(i))).copied());
    if let Some(i) = sups.iter().position(|s| s.is_none()) {
        let phi = space.get(i).to_vec();
        let target = sup_row(x, &phi);
        return Err(Error::NoSuchColimit { weight: phi, defects: defects(x, &target) });
    }
    let sup_table: Vec<usize> = sups.into_iter().map(|s| s.unwrap()).collect();
    let bottom = sup_table[space.must_index(&vec![x.quantale().bottom(); x.len()])];
    Ok(CocompleteWitness {
        base: x.clone(),
        rows,
        bottom,
        space: Some(space),
        sup_table,
        tensor_table: OnceLock::new(),
        join_table: OnceLock::new(),
    })
}

/// Decide cocompleteness from tensors, binary joins and a least object.
///
/// Every presheaf is the join of tensored representables, so these three
/// suffice; this avoids enumerating presheaves on large categories.
pub fn check_cocomplete_structural(x: &Arc<VCategory>) -> Result<CocompleteWitness> {
    require_separated(x)?;
    let q = x.quantale();
    let m = x.len();
    let rows = row_index(x);
    let bottom_row = vec![q.top(); m];
    let bottom = *rows.get(&bottom_row).ok_or_else(|| Error::NoSuchColimit {
        weight: vec![q.bottom(); m],
        defects: defects(x, &bottom_row),
    })?;
    let w = CocompleteWitness {
        base: x.clone(),
        rows,
        bottom,
        space: None,
        sup_table: Vec::new(),
        tensor_table: OnceLock::new(),
        join_table: OnceLock::new(),
    };
    let tensors = par::map_range(q.len() * m, |k| tensor_obj(x, (k / m) as Elem, k % m));
    if let Some(e) = tensors.iter().find_map(|r| r.as_ref().err()) {
        return Err(e.clone());
    }
    let joins = par::map_range(m * m, |k| join_obj(x, &[k / m, k % m]));
    if let Some(e) = joins.iter().find_map(|r| r.as_ref().err()) {
        return Err(e.clone());
    }
    w.tensor_table.set(tensors.into_iter().map(|r| r.unwrap()).collect()).unwrap();
    w.join_table.set(joins.into_iter().map(|r| r.unwrap()).collect()).unwrap();
    Ok(w)
}

/// Presheaf count above which [`cocomplete_witness`] switches to the structural check.
pub const ENUMERATIVE_LIMIT: usize = 200_000;

/// Enumerative witness when the presheaves fit under [`ENUMERATIVE_LIMIT`],
/// structural otherwise.
pub fn cocomplete_witness(x: &Arc<VCategory>) -> Result<CocompleteWitness> {
    require_separated(x)?;
    match PresheafSpace::enumerate_capped(x.clone(), ENUMERATIVE_LIMIT) {
        Ok(space) => check_cocomplete_with(x, Arc::new(space)),
        Err(Error::SizeExceeded { .. }) => check_cocomplete_structural(x),
        Err(e) => Err(e),
    }
}

impl CocompleteWitness {
    pub fn base(&self) -> &Arc<VCategory> {
        &self.base
    }

    /// Presheaves on the base, when the witness was built by enumeration.
    pub fn space(&self) -> Option<&Arc<PresheafSpace>> {
        self.space.as_ref()
    }

    /// `sup` on presheaf indices (enumerated witnesses only).
    pub fn sup_table(&self) -> &[usize] {
        &self.sup_table
    }

    pub fn sup_index(&self, i: usize) -> usize {
        self.sup_table[i]
    }

    /// The supremum of an arbitrary presheaf vector.
    pub fn sup(&self, phi: &[Elem]) -> usize {
        let row = sup_row(&self.base, phi);
        *self.rows.get(&row).expect("cocomplete category has every supremum")
    }

    /// The object whose row is `row`, if any.
    pub fn object_with_row(&self, row: &[Elem]) -> Option<usize> {
        self.rows.get(row).copied()
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    /// `v ⊗ z`.
    pub fn tensor(&self, v: Elem, z: usize) -> usize {
        let m = self.base.len();
        self.tensor_table.get_or_init(|| {
            let q = self.base.quantale();
            // sequential: a nested pool job could re-enter this initializer
            (0..q.len() * m)
                .map(|k| {
                    let (v, z) = ((k / m) as Elem, k % m);
                    let row: Vec<Elem> = (0..m).map(|x| q.residuate(v, self.base.hom(z, x))).collect();
                    self.rows[&row]
                })
                .collect()
        })[v as usize * m + z]
    }

    /// `z₁ ∨ z₂` as a colimit.
    pub fn join(&self, a: usize, b: usize) -> usize {
        let m = self.base.len();
        self.join_table.get_or_init(|| {
            let q = self.base.quantale();
            (0..m * m)
                .map(|k| {
                    let (a, b) = (k / m, k % m);
                    let row: Vec<Elem> = (0..m).map(|x| q.meet(self.base.hom(a, x), self.base.hom(b, x))).collect();
                    self.rows[&row]
                })
                .collect()
        })[a * m + b]
    }

    /// `⋁_x φ(x) ⊗ x`, via tensors and joins.
    pub fn sup_by_joins(&self, phi: &[Elem]) -> usize {
        phi.iter().enumerate().fold(self.bottom, |acc, (x, &v)| self.join(acc, self.tensor(v, x)))
    }

    /// `sup: D X → X` as a functor (needs the enumerated space, materialized).
    pub fn sup_functor(&self) -> Result<VFunctor> {
        let space = self.space.as_ref().ok_or_else(|| Error::Invariant("witness has no presheaf space".into()))?;
        let d = space.materialize()?;
        Ok(VFunctor::from_parts(d, self.base.clone(), self.sup_table.clone()))
    }
}

/// `v ⊗ z`: the object with row `[v, X(z, -)]`.
pub fn tensor_obj(x: &VCategory, v: Elem, z: usize) -> Result<usize> {
    let q = x.quantale();
    let target: Vec<Elem> = (0..x.len()).map(|b| q.residuate(v, x.hom(z, b))).collect();
    find_row(x, &target, || (0..x.len()).map(|w| q.mul(v, x.hom(w, z))).collect())
}

/// `⋁_k z_k` as a colimit: the object with row `⋀_k X(z_k, -)`.
pub fn join_obj(x: &VCategory, objs: &[usize]) -> Result<usize> {
    let q = x.quantale();
    let target: Vec<Elem> = (0..x.len()).map(|b| q.meet_all(objs.iter().map(|&z| x.hom(z, b)))).collect();
    find_row(x, &target, || (0..x.len()).map(|w| q.join_all(objs.iter().map(|&z| x.hom(w, z)))).collect())
}

/// Least upper bound in the underlying order, if any.
pub fn order_lub(x: &VCategory, objs: &[usize]) -> Option<usize> {
    let ubs: Vec<usize> = (0..x.len()).filter(|&u| objs.iter().all(|&z| x.le(z, u))).collect();
    ubs.iter().copied().find(|&u| ubs.iter().all(|&w| x.le(u, w)))
}

fn find_row(x: &VCategory, target: &[Elem], weight: impl FnOnce() -> Vec<Elem>) -> Result<usize> {
    let hits: Vec<usize> = (0..x.len()).filter(|&z| x.row(z) == target).collect();
    match hits.as_slice() {
        [z] => Ok(*z),
        [] => Err(Error::NoSuchColimit { weight: weight(), defects: defects(x, target) }),
        [a, b, ..] => Err(Error::NotSeparated(*a, *b)),
    }
}

/// Weighted colimit of `f: Y → Z` by `φ: X ⇸ Y`:
/// `x ↦ sup(z ↦ ⋁_y φ(y, x) ⊗ Z(z, f y))`.
pub fn weighted_colimit(phi: &Distributor, f: &VFunctor, w: &CocompleteWitness) -> Result<VFunctor> {
    if !crate::dist::same_cat(phi.cod(), f.dom()) {
        return Err(Error::BoundaryMismatch("weight codomain must be the diagram domain".into()));
    }
    let z = f.cod();
    if !crate::dist::same_cat(z, w.base()) {
        return Err(Error::BoundaryMismatch("witness is for a different category".into()));
    }
    let q = z.quantale();
    let (mx, my) = (phi.dom().len(), phi.cod().len());
    let map = par::map_range(mx, |x| {
        let weight: Vec<Elem> = (0..z.len())
            .map(|c| q.join_all((0..my).map(|y| q.mul(phi.at(y, x), z.hom(c, f.apply(y))))))
            .collect();
        w.sup(&weight)
    });
    Ok(VFunctor::from_parts(phi.dom().clone(), z.clone(), map))
}

/// Check `colim^* = φ ↘ f^*` for a computed colimit.
pub fn satisfies_colimit_equation(phi: &Distributor, f: &VFunctor, colim: &VFunctor) -> Result<bool> {
    let (_, f_up) = crate::dist::graph(f);
    let (_, c_up) = crate::dist::graph(colim);
    Ok(right_lifting(phi, &f_up)? == c_up)
}

/// `Lan_j f (x) = sup(z ↦ ⋁_y X(j y, x) ⊗ Z(z, f y))`.
pub fn left_kan(j: &VFunctor, f: &VFunctor, w: &CocompleteWitness) -> Result<VFunctor> {
    if !crate::dist::same_cat(j.dom(), f.dom()) {
        return Err(Error::BoundaryMismatch("Kan extension needs a common domain".into()));
    }
    let (_, j_up) = crate::dist::graph(j);
    weighted_colimit(&j_up, f, w)
}

/// `f(sup φ) = sup(D f φ)` for every presheaf on the domain.
pub fn is_cocontinuous_enumerative(f: &VFunctor, wa: &CocompleteWitness, wb: &CocompleteWitness) -> Result<bool> {
    let space = wa.space().ok_or_else(|| Error::Invariant("domain witness has no presheaf space".into()))?;
    Ok(par::all_range(space.len(), |i| f.apply(wa.sup_index(i)) == wb.sup(&push_forward(f, space.get(i)))))
}

/// Preservation of tensors, binary joins and the least object.
pub fn is_cocontinuous_structural(f: &VFunctor, wa: &CocompleteWitness, wb: &CocompleteWitness) -> bool {
    cocontinuity_defect(f.map(), wa, wb).is_none()
}

/// First failure of tensor, join or bottom preservation for a raw map.
pub fn cocontinuity_defect(map: &[usize], wa: &CocompleteWitness, wb: &CocompleteWitness) -> Option<String> {
    let a = wa.base();
    let q = a.quantale();
    let m = a.len();
    if map[wa.bottom()] != wb.bottom() {
        return Some("least object not preserved".into());
    }
    for v in q.elements() {
        for x in 0..m {
            if map[wa.tensor(v, x)] != wb.tensor(v, map[x]) {
                return Some(format!("tensor by {} at {} not preserved", q.element_name(v), a.object_name(x)));
            }
        }
    }
    for x in 0..m {
        for y in (x + 1)..m {
            if map[wa.join(x, y)] != wb.join(map[x], map[y]) {
                return Some(format!("join of {} and {} not preserved", a.object_name(x), a.object_name(y)));
            }
        }
    }
    None
}

/// Cocontinuity, by enumeration of presheaves when the domain witness has
/// them and structurally otherwise.
pub fn is_cocontinuous(f: &VFunctor, wa: &CocompleteWitness, wb: &CocompleteWitness) -> Result<bool> {
    if wa.space().is_some() {
        is_cocontinuous_enumerative(f, wa, wb)
    } else {
        Ok(is_cocontinuous_structural(f, wa, wb))
    }
}

/// Right adjoint `g(b) = sup(a ↦ B(f a, b))` of a cocontinuous `f: A → B`.
pub fn right_adjoint(f: &VFunctor, wa: &CocompleteWitness) -> Result<VFunctor> {
    let (a, b) = (f.dom(), f.cod());
    let map: Vec<usize> = (0..b.len())
        .map(|y| {
            let weight: Vec<Elem> = (0..a.len()).map(|x| b.hom(f.apply(x), y)).collect();
            wa.sup(&weight)
        })
        .collect();
    if !is_adjoint_maps(a, b, f.map(), &map) {
        return Err(Error::NotCocontinuous(f.map().iter().map(|&i| i as Elem).collect()));
    }
    Ok(VFunctor::from_parts(b.clone(), a.clone(), map))
}
