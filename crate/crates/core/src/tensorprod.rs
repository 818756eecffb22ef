//! Tensor product of cocomplete V-categories as G-ideals.
//!
//! For cocomplete `A`, `B` the tensor `A ⊗ B` (in the cocomplete sense) is the
//! full subcategory of `D(A ⊗ B)` on the presheaves `ξ` satisfying
//!
//! ```text
//! ⋀_{(a,b)} [φ(a) ⊗ ψ(b), ξ(a,b)] = ξ(sup φ, sup ψ)   for all φ ∈ D A, ψ ∈ D B.
//! ```
//!
//! These are closed under pointwise meets, so the reflector `q` sends a
//! presheaf to the meet of the G-ideals above it.

use std::sync::Arc;

use crate::cocomplete::{check_cocomplete, cocomplete_witness, CocompleteWitness};
use crate::dist::map_hom;
use crate::enumerate::{bimorphisms, cocontinuous_maps, maps_category};
use crate::error::{Error, Result};
use crate::par;
use crate::presheaf::{d2_vec, pointwise_le, presheaf_hom, PresheafSpace};
use crate::quantale::{Elem, Quantale};
use crate::vcat::{opposite, pair_index, quantale_vcat, tensor_vcat, VCategory};

/// The pairs `(φ, ψ)` of presheaves on `A` and `B` with their suprema,
/// ordered so that small supports (cheap failures) come first.
pub struct GIdealTest {
    q: Arc<Quantale>,
    nb: usize,
    pairs: Vec<(usize, usize)>,
    wa: Arc<CocompleteWitness>,
    wb: Arc<CocompleteWitness>,
}

impl GIdealTest {
    pub fn new(wa: &Arc<CocompleteWitness>, wb: &Arc<CocompleteWitness>) -> Result<Self> {
        let (sa, sb) = match (wa.space(), wb.space()) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::Invariant("G-ideal test needs enumerated presheaves on both factors".into())),
        };
        let q = wa.base().quantale().clone();
        let support = |p: &[Elem]| p.iter().filter(|&&v| v != q.bottom()).count();
        let mut pairs: Vec<(usize, usize)> =
            (0..sa.len()).flat_map(|i| (0..sb.len()).map(move |j| (i, j))).collect();
        pairs.sort_by_key(|&(i, j)| (support(sa.get(i)) + support(sb.get(j)), i, j));
        Ok(GIdealTest { q, nb: wb.base().len(), pairs, wa: wa.clone(), wb: wb.clone() })
    }

    /// First pair `(φ, ψ)` (as presheaf indices) where `ξ` fails the condition.
    pub fn defect(&self, xi: &[Elem]) -> Option<(usize, usize)> {
        let q = &self.q;
        let sa = self.wa.space().unwrap();
        let sb = self.wb.space().unwrap();
        self.pairs.iter().copied().find(|&(i, j)| {
            let (phi, psi) = (sa.get(i), sb.get(j));
            let mut lhs = q.top();
            for (a, &u) in phi.iter().enumerate() {
                for (b, &v) in psi.iter().enumerate() {
                    lhs = q.meet(lhs, q.residuate(q.mul(u, v), xi[a * self.nb + b]));
                }
            }
            let rhs = xi[pair_index(self.nb, self.wa.sup_index(i), self.wb.sup_index(j))];
            lhs != rhs
        })
    }

    pub fn is_g_ideal(&self, xi: &[Elem]) -> bool {
        self.defect(xi).is_none()
    }
}

/// Whether `ξ` is a G-ideal; on failure the first offending `(φ, ψ)` indices.
pub fn is_g_ideal(
    wa: &Arc<CocompleteWitness>,
    wb: &Arc<CocompleteWitness>,
    xi: &[Elem],
) -> Result<std::result::Result<(), (usize, usize)>> {
    let t = GIdealTest::new(wa, wb)?;
    Ok(match t.defect(xi) {
        None => Ok(()),
        Some(p) => Err(p),
    })
}

pub struct TensorProduct {
    wa: Arc<CocompleteWitness>,
    wb: Arc<CocompleteWitness>,
    ab: Arc<VCategory>,
    space: Arc<PresheafSpace>,
    ideals: Vec<usize>,
    carrier: Arc<VCategory>,
    carrier_witness: Arc<CocompleteWitness>,
    q_map: Vec<usize>,
    i_map: Vec<usize>,
}

impl std::fmt::Debug for TensorProduct {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "TensorProduct({}, {} G-ideals)", self.carrier.name(), self.ideals.len())
    }
}

fn input_witness(x: &Arc<VCategory>) -> Result<Arc<CocompleteWitness>> {
    match check_cocomplete(x) {
        Ok(w) => Ok(Arc::new(w)),
        Err(Error::NoSuchColimit { weight, .. }) => Err(Error::NotCocompleteInput(weight)),
        Err(e) => Err(e),
    }
}

/// `A ⊗ B` for separated cocomplete `A`, `B`.
pub fn build_tensor_product(a: &Arc<VCategory>, b: &Arc<VCategory>) -> Result<TensorProduct> {
    build_tensor_product_with(&input_witness(a)?, &input_witness(b)?)
}

/// As [`build_tensor_product`] from enumerated witnesses.
pub fn build_tensor_product_with(wa: &Arc<CocompleteWitness>, wb: &Arc<CocompleteWitness>) -> Result<TensorProduct> {
    let test = GIdealTest::new(wa, wb)?;
    let (a, b) = (wa.base(), wb.base());
    let ab = Arc::new(tensor_vcat(a, b)?);
    let space = Arc::new(PresheafSpace::enumerate(ab.clone())?);
    let q = ab.quantale().clone();

    let ideals = par::filter_range(space.len(), |k| test.is_g_ideal(space.get(k)));
    let names: Vec<String> = ideals.iter().map(|&k| space.name_of(space.get(k))).collect();
    let n = ideals.len();
    let rows = par::map_range(n, |i| (0..n).map(|j| space.hom(ideals[i], ideals[j])).collect::<Vec<_>>());
    let carrier = Arc::new(VCategory::from_parts(q.clone(), format!("{}(x){}", a.name(), b.name()), names, rows.concat()));

    let reflect = |theta: &[Elem]| -> usize {
        let mut acc = vec![q.top(); theta.len()];
        for &k in &ideals {
            let xi = space.get(k);
            if pointwise_le(&q, theta, xi) {
                acc.iter_mut().zip(xi).for_each(|(a, &v)| *a = q.meet(*a, v));
            }
        }
        ideals
            .binary_search_by(|&k| space.get(k).cmp(&acc[..]))
            .expect("meet of G-ideals is a G-ideal")
    };
    let q_map = par::map_range(space.len(), |k| reflect(space.get(k)));
    let i_map = (0..ab.len()).map(|k| reflect(&ab.column(k))).collect();

    let carrier_witness = Arc::new(cocomplete_witness(&carrier)?);
    let tp = TensorProduct {
        wa: wa.clone(),
        wb: wb.clone(),
        ab,
        space,
        ideals,
        carrier,
        carrier_witness,
        q_map,
        i_map,
    };
    tp.verify()?;
    Ok(tp)
}

impl TensorProduct {
    pub fn left(&self) -> &Arc<CocompleteWitness> {
        &self.wa
    }

    pub fn right(&self) -> &Arc<CocompleteWitness> {
        &self.wb
    }

    /// The V-category `A ⊗ B` whose presheaves contain the G-ideals.
    pub fn pairs(&self) -> &Arc<VCategory> {
        &self.ab
    }

    pub fn presheaves(&self) -> &Arc<PresheafSpace> {
        &self.space
    }

    pub fn carrier(&self) -> &Arc<VCategory> {
        &self.carrier
    }

    pub fn carrier_witness(&self) -> &Arc<CocompleteWitness> {
        &self.carrier_witness
    }

    pub fn len(&self) -> usize {
        self.ideals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ideals.is_empty()
    }

    /// The G-ideal at carrier index `k`.
    pub fn ideal(&self, k: usize) -> &[Elem] {
        self.space.get(self.ideals[k])
    }

    /// Carrier index of a G-ideal vector.
    pub fn index_of(&self, xi: &[Elem]) -> Option<usize> {
        self.ideals.binary_search_by(|&k| self.space.get(k).cmp(xi)).ok()
    }

    /// Presheaf index (in [`Self::presheaves`]) of carrier object `k`; this is `j`.
    pub fn inclusion(&self, k: usize) -> usize {
        self.ideals[k]
    }

    /// `q` on presheaf indices.
    pub fn reflect_index(&self, k: usize) -> usize {
        self.q_map[k]
    }

    /// `q` on an arbitrary presheaf vector on `A ⊗ B`.
    pub fn reflect(&self, theta: &[Elem]) -> usize {
        self.q_map[self.space.must_index(theta)]
    }

    /// `i(a, b) = q(y(a, b))`, indexed by pair index.
    pub fn i_map(&self) -> &[usize] {
        &self.i_map
    }

    pub fn i(&self, a: usize, b: usize) -> usize {
        self.i_map[pair_index(self.wb.base().len(), a, b)]
    }

    fn verify(&self) -> Result<()> {
        let q = self.carrier.quantale();
        // q ∘ j = id
        if let Some(k) = (0..self.len()).find(|&k| self.q_map[self.ideals[k]] != k) {
            return Err(Error::Invariant(format!("reflector moves G-ideal {k}")));
        }
        // q ⊣ j: carrier(q θ, ξ) = D(θ, j ξ)
        let bad = par::find_first_range(self.space.len(), |t| {
            let qt = self.q_map[t];
            (0..self.len())
                .find(|&k| self.carrier.hom(qt, k) != presheaf_hom(q, self.space.get(t), self.ideal(k)))
                .map(|k| (t, k))
        });
        if let Some((_, (t, k))) = bad {
            return Err(Error::Invariant(format!("reflector is not left adjoint at presheaf {t}, ideal {k}")));
        }
        Ok(())
    }

    /// `i(sup φ, sup ψ) = q(d₂(φ, ψ))` for every pair of presheaves.
    pub fn check_bimorphism_square(&self) -> bool {
        let (sa, sb) = (self.wa.space().unwrap(), self.wb.space().unwrap());
        let q = self.carrier.quantale();
        par::all_range(sa.len(), |i| {
            (0..sb.len()).all(|j| {
                let lhs = self.i(self.wa.sup_index(i), self.wb.sup_index(j));
                lhs == self.reflect(&d2_vec(q, sa.get(i), sb.get(j)))
            })
        })
    }
}

/// The least G-ideal above `theta`.
pub fn reflector_q(tp: &TensorProduct, theta: &[Elem]) -> Vec<Elem> {
    tp.ideal(tp.reflect(theta)).to_vec()
}

/// Whether `g` (on pair indices) is cocontinuous in each variable separately.
pub fn is_bimorphism(g: &[usize], wa: &CocompleteWitness, wb: &CocompleteWitness, wc: &CocompleteWitness) -> Result<bool> {
    let (a, b) = (wa.base(), wb.base());
    let ab = tensor_vcat(a, b)?;
    if g.len() != ab.len() || crate::dist::functor_defect(&ab, wc.base(), g).is_some() {
        return Ok(false);
    }
    let nb = b.len();
    for y in 0..nb {
        let col: Vec<usize> = (0..a.len()).map(|x| g[x * nb + y]).collect();
        if crate::cocomplete::cocontinuity_defect(&col, wa, wc).is_some() {
            return Ok(false);
        }
    }
    for x in 0..a.len() {
        if crate::cocomplete::cocontinuity_defect(&g[x * nb..(x + 1) * nb], wb, wc).is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The cocontinuous `f` on the carrier with `f ∘ i = g`:
/// `f(ξ) = sup(c ↦ ⋁_{(a,b)} C(c, g(a,b)) ⊗ ξ(a,b))`.
pub fn extend_bimorphism(tp: &TensorProduct, g: &[usize], wc: &CocompleteWitness) -> Vec<usize> {
    let c = wc.base();
    let q = c.quantale();
    par::map_range(tp.len(), |k| {
        let xi = tp.ideal(k);
        let weight: Vec<Elem> = (0..c.len())
            .map(|z| q.join_all(xi.iter().zip(g).map(|(&v, &gy)| q.mul(c.hom(z, gy), v))))
            .collect();
        wc.sup(&weight)
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniversalReport {
    pub cocontinuous_maps: usize,
    pub bimorphisms: usize,
    pub failure: Option<String>,
}

impl UniversalReport {
    pub fn holds(&self) -> bool {
        self.failure.is_none()
    }
}

/// Restriction along `i` and [`extend_bimorphism`] are inverse bijections
/// between cocontinuous maps on the carrier and bimorphisms, preserving homs.
pub fn check_universal_property(tp: &TensorProduct, wc: &CocompleteWitness) -> Result<UniversalReport> {
    let sups = cocontinuous_maps(tp.carrier_witness(), wc)?;
    let bis = bimorphisms(tp.left(), tp.right(), wc)?;
    let c = wc.base();
    let restrict = |f: &Vec<usize>| -> Vec<usize> { tp.i_map().iter().map(|&k| f[k]).collect() };
    let mut failure = None;
    if sups.len() != bis.len() {
        failure = Some(format!("{} cocontinuous maps but {} bimorphisms", sups.len(), bis.len()));
    }
    let restricted: Vec<Vec<usize>> = sups.iter().map(restrict).collect();
    if failure.is_none() {
        for (f, r) in sups.iter().zip(&restricted) {
            if bis.binary_search(r).is_err() {
                failure = Some(format!("restriction of {f:?} is not a bimorphism"));
                break;
            }
            if extend_bimorphism(tp, r, wc) != *f {
                failure = Some(format!("extension of the restriction of {f:?} differs"));
                break;
            }
        }
    }
    if failure.is_none() {
        for g in &bis {
            let f = extend_bimorphism(tp, g, wc);
            if sups.binary_search(&f).is_err() || restrict(&f) != *g {
                failure = Some(format!("bimorphism {g:?} does not round-trip"));
                break;
            }
        }
    }
    if failure.is_none() {
        let n = sups.len();
        let bad = par::find_first_range(n * n, |k| {
            let (s, t) = (k / n, k % n);
            (map_hom(c, &sups[s], &sups[t]) != map_hom(c, &restricted[s], &restricted[t])).then_some(())
        });
        if let Some((k, ())) = bad {
            failure = Some(format!("hom not preserved between maps {} and {}", k / n, k % n));
        }
    }
    Ok(UniversalReport { cocontinuous_maps: sups.len(), bimorphisms: bis.len(), failure })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaloisReport {
    pub maps: usize,
    pub ideals: usize,
    pub failure: Option<String>,
}

impl GaloisReport {
    pub fn holds(&self) -> bool {
        self.failure.is_none()
    }
}

/// Cocontinuous maps `A → B^op` correspond to G-ideals via `ξ(a, b) = B(b, f a)`
/// and `f(a) = sup(ξ(a, -))`, with `carrier(ξ_f, ξ_g) = ⋀_a B(f a, g a)`.
pub fn galois_iso(tp: &TensorProduct) -> Result<GaloisReport> {
    let (a, b) = (tp.left().base(), tp.right().base());
    let bop = Arc::new(opposite(b));
    let wop = cocomplete_witness(&bop)?;
    let maps = cocontinuous_maps(tp.left(), &wop)?;
    let (na, nb) = (a.len(), b.len());
    let to_ideal = |f: &[usize]| -> Vec<Elem> { (0..na * nb).map(|k| b.hom(k % nb, f[k / nb])).collect() };
    let to_map = |xi: &[Elem]| -> Vec<usize> { (0..na).map(|x| tp.right().sup(&xi[x * nb..(x + 1) * nb])).collect() };

    let mut failure = None;
    if maps.len() != tp.len() {
        failure = Some(format!("{} maps into the opposite but {} G-ideals", maps.len(), tp.len()));
    }
    let images: Vec<Option<usize>> = maps.iter().map(|f| tp.index_of(&to_ideal(f))).collect();
    if failure.is_none() {
        if let Some(i) = images.iter().position(|k| k.is_none()) {
            failure = Some(format!("map {:?} does not give a G-ideal", maps[i]));
        }
    }
    if failure.is_none() {
        for (f, k) in maps.iter().zip(&images) {
            if to_map(tp.ideal(k.unwrap())) != *f {
                failure = Some(format!("map {f:?} does not round-trip"));
                break;
            }
        }
    }
    if failure.is_none() {
        for k in 0..tp.len() {
            let f = to_map(tp.ideal(k));
            if maps.binary_search(&f).is_err() || to_ideal(&f) != tp.ideal(k) {
                failure = Some(format!("G-ideal {k} does not round-trip"));
                break;
            }
        }
    }
    if failure.is_none() {
        'outer: for (s, f) in maps.iter().enumerate() {
            for (t, g) in maps.iter().enumerate() {
                let via_maps = map_hom(b, f, g);
                if via_maps != tp.carrier().hom(images[s].unwrap(), images[t].unwrap()) {
                    failure = Some(format!("hom not preserved between maps {s} and {t}"));
                    break 'outer;
                }
            }
        }
    }
    Ok(GaloisReport { maps: maps.len(), ideals: tp.len(), failure })
}

/// `A^⊥ = V-Sup(A, V^op)` with its witness.
pub fn perp(wa: &CocompleteWitness) -> Result<(Arc<VCategory>, Vec<Vec<usize>>, CocompleteWitness)> {
    let q = wa.base().quantale();
    let vop = Arc::new(opposite(&quantale_vcat(q)));
    let wv = cocomplete_witness(&vop)?;
    let maps = cocontinuous_maps(wa, &wv)?;
    let cat = Arc::new(maps_category(&vop, &maps, &format!("{}^perp", wa.base().name())));
    let w = cocomplete_witness(&cat)?;
    Ok((cat, maps, w))
}

/// The evaluation `a ↦ (g ↦ g(a))` is an isomorphism `A → A^⊥⊥`.
pub fn star_autonomy_check(wa: &CocompleteWitness) -> Result<bool> {
    let a = wa.base();
    let (_, maps1, w1) = perp(wa)?;
    let (p2, maps2, _) = perp(&w1)?;
    if maps2.len() != a.len() {
        return Ok(false);
    }
    let ev: Vec<Option<usize>> = (0..a.len())
        .map(|x| {
            let e: Vec<usize> = maps1.iter().map(|g| g[x]).collect();
            maps2.binary_search(&e).ok()
        })
        .collect();
    if ev.iter().any(|e| e.is_none()) {
        return Ok(false);
    }
    let ev: Vec<usize> = ev.into_iter().map(|e| e.unwrap()).collect();
    Ok((0..a.len()).all(|x| (0..a.len()).all(|y| a.hom(x, y) == p2.hom(ev[x], ev[y]))))
}
