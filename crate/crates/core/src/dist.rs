//! V-functors and distributors.
//!
//! A distributor `φ: X ⇸ Y` is stored codomain-major: `mat[y * |X| + x] = φ(y, x)`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::par;
use crate::quantale::{Elem, Quantale};
use crate::vcat::{same_quantale, VCategory};

#[derive(Clone, Debug)]
pub struct VFunctor {
    dom: Arc<VCategory>,
    cod: Arc<VCategory>,
    map: Vec<usize>,
}

impl PartialEq for VFunctor {
    fn eq(&self, other: &Self) -> bool {
        self.map == other.map && same_cat(&self.dom, &other.dom) && same_cat(&self.cod, &other.cod)
    }
}

impl Eq for VFunctor {}

pub(crate) fn same_cat(a: &Arc<VCategory>, b: &Arc<VCategory>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Check `X(x, x') ≤ Y(f x, f x')` for all pairs.
pub fn validate_functor(dom: &Arc<VCategory>, cod: &Arc<VCategory>, map: Vec<usize>) -> Result<VFunctor> {
    if !same_quantale(dom.quantale(), cod.quantale()) {
        return Err(Error::QuantaleMismatch);
    }
    if map.len() != dom.len() {
        return Err(Error::BadShape { expected: dom.len(), got: map.len() });
    }
    if let Some(x) = map.iter().position(|&y| y >= cod.len()) {
        return Err(Error::BadElement(x));
    }
    if let Some((x, x2)) = functor_defect(dom, cod, &map) {
        return Err(Error::NotAFunctor(x, x2));
    }
    Ok(VFunctor { dom: dom.clone(), cod: cod.clone(), map })
}

/// First pair violating the functor inequality.
pub fn functor_defect(dom: &VCategory, cod: &VCategory, map: &[usize]) -> Option<(usize, usize)> {
    let q = dom.quantale();
    let m = dom.len();
    for x in 0..m {
        for x2 in 0..m {
            if !q.leq(dom.hom(x, x2), cod.hom(map[x], map[x2])) {
                return Some((x, x2));
            }
        }
    }
    None
}

impl VFunctor {
    pub(crate) fn from_parts(dom: Arc<VCategory>, cod: Arc<VCategory>, map: Vec<usize>) -> Self {
        debug_assert_eq!(map.len(), dom.len());
        debug_assert!(dom.len() > 200 || functor_defect(&dom, &cod, &map).is_none());
        VFunctor { dom, cod, map }
    }

    pub fn identity(x: &Arc<VCategory>) -> Self {
        VFunctor { dom: x.clone(), cod: x.clone(), map: (0..x.len()).collect() }
    }

    pub fn dom(&self) -> &Arc<VCategory> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<VCategory> {
        &self.cod
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// `self ∘ f`.
    pub fn after(&self, f: &VFunctor) -> Result<VFunctor> {
        if !same_cat(f.cod(), &self.dom) {
            return Err(Error::BoundaryMismatch("codomain of the first functor is not the domain of the second".into()));
        }
        Ok(VFunctor { dom: f.dom.clone(), cod: self.cod.clone(), map: f.map.iter().map(|&x| self.map[x]).collect() })
    }

    pub fn is_identity(&self) -> bool {
        same_cat(&self.dom, &self.cod) && self.map.iter().enumerate().all(|(i, &j)| i == j)
    }
}

/// `[X, Y](f, g) = ⋀_x Y(f x, g x)`.
pub fn functor_hom(f: &VFunctor, g: &VFunctor) -> Result<Elem> {
    if !same_cat(&f.dom, &g.dom) || !same_cat(&f.cod, &g.cod) {
        return Err(Error::BoundaryMismatch("functors must be parallel".into()));
    }
    Ok(map_hom(&f.cod, &f.map, &g.map))
}

/// `⋀_x Y(f x, g x)` for raw object maps into `Y`.
pub fn map_hom(cod: &VCategory, f: &[usize], g: &[usize]) -> Elem {
    let q = cod.quantale();
    q.meet_all(f.iter().zip(g).map(|(&a, &b)| cod.hom(a, b)))
}

/// `Y(f x, y) = X(x, g y)` for all `x, y`.
pub fn is_adjoint_functors(f: &VFunctor, g: &VFunctor) -> bool {
    same_cat(&f.dom, &g.cod)
        && same_cat(&f.cod, &g.dom)
        && is_adjoint_maps(&f.dom, &f.cod, &f.map, &g.map)
}

/// Raw form of [`is_adjoint_functors`] for `f: X → Y`, `g: Y → X`.
pub fn is_adjoint_maps(x: &VCategory, y: &VCategory, f: &[usize], g: &[usize]) -> bool {
    par::all_range(x.len(), |a| (0..y.len()).all(|b| y.hom(f[a], b) == x.hom(a, g[b])))
}

#[derive(Clone, Debug)]
pub struct Distributor {
    dom: Arc<VCategory>,
    cod: Arc<VCategory>,
    mat: Vec<Elem>,
}

impl PartialEq for Distributor {
    fn eq(&self, other: &Self) -> bool {
        self.mat == other.mat && same_cat(&self.dom, &other.dom) && same_cat(&self.cod, &other.cod)
    }
}

impl Eq for Distributor {}

/// Check `Y(y', y) ⊗ φ(y, x) ⊗ X(x, x') ≤ φ(y', x')`.
pub fn validate_distributor(dom: &Arc<VCategory>, cod: &Arc<VCategory>, mat: Vec<Elem>) -> Result<Distributor> {
    if !same_quantale(dom.quantale(), cod.quantale()) {
        return Err(Error::QuantaleMismatch);
    }
    let (mx, my) = (dom.len(), cod.len());
    if mat.len() != mx * my {
        return Err(Error::BadShape { expected: mx * my, got: mat.len() });
    }
    let q = dom.quantale();
    if let Some(k) = mat.iter().position(|&v| v as usize >= q.len()) {
        return Err(Error::BadElement(k));
    }
    // Split into the two one-sided conditions; together with reflexivity they
    // are equivalent to the two-sided one.
    for y in 0..my {
        for x in 0..mx {
            let v = mat[y * mx + x];
            for y2 in 0..my {
                if !q.leq(q.mul(cod.hom(y2, y), v), mat[y2 * mx + x]) {
                    return Err(Error::NotADistributor(y2, y, x, x));
                }
            }
            for x2 in 0..mx {
                if !q.leq(q.mul(v, dom.hom(x, x2)), mat[y * mx + x2]) {
                    return Err(Error::NotADistributor(y, y, x, x2));
                }
            }
        }
    }
    Ok(Distributor { dom: dom.clone(), cod: cod.clone(), mat })
}

impl Distributor {
    pub(crate) fn from_parts(dom: Arc<VCategory>, cod: Arc<VCategory>, mat: Vec<Elem>) -> Self {
        debug_assert_eq!(mat.len(), dom.len() * cod.len());
        Distributor { dom, cod, mat }
    }

    /// The identity distributor `X(-, -): X ⇸ X`.
    pub fn identity(x: &Arc<VCategory>) -> Self {
        Distributor { dom: x.clone(), cod: x.clone(), mat: x.hom_matrix().to_vec() }
    }

    /// The constant-`⊥` distributor.
    pub fn bottom(dom: &Arc<VCategory>, cod: &Arc<VCategory>) -> Self {
        let b = dom.quantale().bottom();
        Distributor { dom: dom.clone(), cod: cod.clone(), mat: vec![b; dom.len() * cod.len()] }
    }

    pub fn dom(&self) -> &Arc<VCategory> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<VCategory> {
        &self.cod
    }

    pub fn matrix(&self) -> &[Elem] {
        &self.mat
    }

    pub fn quantale(&self) -> &Arc<Quantale> {
        self.dom.quantale()
    }

    /// `φ(y, x)`.
    #[inline]
    pub fn at(&self, y: usize, x: usize) -> Elem {
        self.mat[y * self.dom.len() + x]
    }

    /// Pointwise order.
    pub fn le(&self, other: &Distributor) -> bool {
        let q = self.quantale();
        self.mat.len() == other.mat.len() && self.mat.iter().zip(&other.mat).all(|(&a, &b)| q.leq(a, b))
    }
}

/// Every distributor `X ⇸ Y`, in lexicographic order of matrices.
pub fn all_distributors(dom: &Arc<VCategory>, cod: &Arc<VCategory>) -> Result<Vec<Distributor>> {
    let q = dom.quantale();
    let len = dom.len() * cod.len();
    let total = q.len().checked_pow(len as u32).unwrap_or(usize::MAX);
    crate::caps::guard("candidate distributor matrices", total, crate::caps::current().max_presheaves)?;
    let mut out = Vec::new();
    crate::vcat::for_each_vector(q.len(), len, |m| {
        if let Ok(d) = validate_distributor(dom, cod, m.to_vec()) {
            out.push(d);
        }
    });
    Ok(out)
}

fn check_compatible(a: &Arc<VCategory>, b: &Arc<VCategory>, what: &str) -> Result<()> {
    if !same_quantale(a.quantale(), b.quantale()) {
        return Err(Error::QuantaleMismatch);
    }
    if !same_cat(a, b) {
        return Err(Error::BoundaryMismatch(what.to_string()));
    }
    Ok(())
}

/// `(ψ ⊗ φ)(z, x) = ⋁_y ψ(z, y) ⊗ φ(y, x)` for `φ: X ⇸ Y`, `ψ: Y ⇸ Z`.
pub fn compose_dist(psi: &Distributor, phi: &Distributor) -> Result<Distributor> {
    check_compatible(&phi.cod, &psi.dom, "composite needs cod(φ) = dom(ψ)")?;
    let q = phi.quantale();
    let (mx, my, mz) = (phi.dom.len(), phi.cod.len(), psi.cod.len());
    let rows = par::map_range(mz, |z| {
        (0..mx)
            .map(|x| q.join_all((0..my).map(|y| q.mul(psi.at(z, y), phi.at(y, x)))))
            .collect::<Vec<_>>()
    });
    Ok(Distributor::from_parts(phi.dom.clone(), psi.cod.clone(), rows.concat()))
}

/// `(ξ ↙ φ)(z, y) = ⋀_x [φ(y, x), ξ(z, x)]` for `ξ: X ⇸ Z`, `φ: X ⇸ Y`; a distributor `Y ⇸ Z`.
pub fn right_extension(xi: &Distributor, phi: &Distributor) -> Result<Distributor> {
    check_compatible(&xi.dom, &phi.dom, "extension needs a common domain")?;
    let q = phi.quantale();
    let (mx, my, mz) = (phi.dom.len(), phi.cod.len(), xi.cod.len());
    let rows = par::map_range(mz, |z| {
        (0..my)
            .map(|y| q.meet_all((0..mx).map(|x| q.residuate(phi.at(y, x), xi.at(z, x)))))
            .collect::<Vec<_>>()
    });
    Ok(Distributor::from_parts(phi.cod.clone(), xi.cod.clone(), rows.concat()))
}

/// `(ψ ↘ ξ)(y, x) = ⋀_z [ψ(z, y), ξ(z, x)]` for `ψ: Y ⇸ Z`, `ξ: X ⇸ Z`; a distributor `X ⇸ Y`.
pub fn right_lifting(psi: &Distributor, xi: &Distributor) -> Result<Distributor> {
    check_compatible(&psi.cod, &xi.cod, "lifting needs a common codomain")?;
    let q = psi.quantale();
    let (mx, my, mz) = (xi.dom.len(), psi.dom.len(), psi.cod.len());
    let rows = par::map_range(my, |y| {
        (0..mx)
            .map(|x| q.meet_all((0..mz).map(|z| q.residuate(psi.at(z, y), xi.at(z, x)))))
            .collect::<Vec<_>>()
    });
    Ok(Distributor::from_parts(xi.dom.clone(), psi.dom.clone(), rows.concat()))
}

/// `(f_*, f^*)` with `f_*(y, x) = Y(y, f x)` and `f^*(x, y) = Y(f x, y)`.
pub fn graph(f: &VFunctor) -> (Distributor, Distributor) {
    let (x, y) = (f.dom(), f.cod());
    let (mx, my) = (x.len(), y.len());
    let lower = (0..my * mx).map(|k| y.hom(k / mx, f.apply(k % mx))).collect();
    let upper = (0..mx * my).map(|k| y.hom(f.apply(k / my), k % my)).collect();
    (
        Distributor::from_parts(x.clone(), y.clone(), lower),
        Distributor::from_parts(y.clone(), x.clone(), upper),
    )
}

/// `X ≤ ψ ⊗ φ` and `φ ⊗ ψ ≤ Y` for `φ: X ⇸ Y`, `ψ: Y ⇸ X`.
pub fn is_adjoint_pair(phi: &Distributor, psi: &Distributor) -> Result<bool> {
    let unit = compose_dist(psi, phi)?;
    let counit = compose_dist(phi, psi)?;
    Ok(Distributor::identity(phi.dom()).le(&unit) && counit.le(&Distributor::identity(phi.cod())))
}
