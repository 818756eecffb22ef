use std::sync::Arc;

use vq_core::ccd::{ccd_reflector, dual_object, totally_below, totally_below_by_search};
use vq_core::cocomplete::{check_cocomplete, CocompleteWitness};
use vq_core::enumerate::cocontinuous_maps;
use vq_core::quantale::builtin;
use vq_core::tensorprod::{
    build_tensor_product, build_tensor_product_with, check_universal_property, galois_iso, reflector_q,
    star_autonomy_check, TensorProduct,
};
use vq_core::vcat::{discrete, find_isomorphism, from_order, opposite, quantale_vcat, tensor_vcat, terminal_vcat};
use vq_core::{Elem, Error, Quantale, VCategory};

fn q(name: &str) -> Arc<Quantale> {
    Arc::new(builtin(name).unwrap())
}

fn chain(qq: &Arc<Quantale>, n: usize) -> Arc<VCategory> {
    let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    Arc::new(from_order(qq, &format!("chain{n}"), &refs, |a, b| a <= b).unwrap())
}

fn v(qq: &Arc<Quantale>) -> Arc<VCategory> {
    Arc::new(quantale_vcat(qq))
}

fn w(x: &Arc<VCategory>) -> Arc<CocompleteWitness> {
    Arc::new(check_cocomplete(x).unwrap())
}

fn free(x: &Arc<VCategory>) -> Arc<VCategory> {
    vq_core::presheaf::enumerate_presheaves(x).unwrap().materialize().unwrap()
}

/// The object whose hom row is `⋀_x [φ(x), X(x, -)]`, found by search.
fn sup_by_search(x: &VCategory, phi: &[Elem]) -> usize {
    let qq = x.quantale();
    let row: Vec<Elem> =
        (0..x.len()).map(|b| qq.meet_all(phi.iter().enumerate().map(|(a, &v)| qq.residuate(v, x.hom(a, b))))).collect();
    (0..x.len()).find(|&c| x.row(c) == row).expect("cocomplete")
}

fn naive_presheaves(x: &VCategory) -> Vec<Vec<Elem>> {
    let qq = x.quantale();
    let n = x.len();
    let total = qq.len().pow(n as u32);
    (0..total)
        .map(|mut k| {
            let mut p = vec![0 as Elem; n];
            for i in (0..n).rev() {
                p[i] = (k % qq.len()) as Elem;
                k /= qq.len();
            }
            p
        })
        .filter(|p| (0..n).all(|a| (0..n).all(|b| qq.leq(qq.mul(x.hom(a, b), p[b]), p[a]))))
        .collect()
}

/// G-ideals straight from the definition over all vectors.
fn naive_g_ideals(a: &VCategory, b: &VCategory) -> Vec<Vec<Elem>> {
    let qq = a.quantale();
    let ab = tensor_vcat(a, b).unwrap();
    let (pa, pb) = (naive_presheaves(a), naive_presheaves(b));
    naive_presheaves(&ab)
        .into_iter()
        .filter(|xi| {
            pa.iter().all(|phi| {
                pb.iter().all(|psi| {
                    let mut lhs = qq.top();
                    for (x, &u) in phi.iter().enumerate() {
                        for (y, &v) in psi.iter().enumerate() {
                            lhs = qq.meet(lhs, qq.residuate(qq.mul(u, v), xi[x * b.len() + y]));
                        }
                    }
                    lhs == xi[sup_by_search(a, phi) * b.len() + sup_by_search(b, psi)]
                })
            })
        })
        .collect()
}

fn ideals(tp: &TensorProduct) -> Vec<Vec<Elem>> {
    (0..tp.len()).map(|k| tp.ideal(k).to_vec()).collect()
}

#[test]
fn g_ideals_match_the_definition() {
    let two = q("two");
    let c2 = chain(&two, 2);
    let tp = build_tensor_product(&c2, &c2).unwrap();
    let naive = naive_g_ideals(&c2, &c2);
    assert_eq!(naive.len(), 2);
    assert_eq!(ideals(&tp), naive);
    assert!(find_isomorphism(tp.carrier(), &c2).is_some());

    for (a, b) in [(chain(&two, 3), chain(&two, 2)), (v(&q("lukasiewicz3")), v(&q("lukasiewicz3")))] {
        let tp = build_tensor_product(&a, &b).unwrap();
        assert_eq!(ideals(&tp), naive_g_ideals(&a, &b));
    }
}

fn iso(x: &VCategory, y: &VCategory) -> bool {
    find_isomorphism(x, y).is_some()
}

#[test]
fn tensor_is_symmetric_unital_and_associative() {
    let two = q("two");
    let luk = q("lukasiewicz3");
    let pq = free(&Arc::new(discrete(&two, &["p", "q"])));
    let over_two = [chain(&two, 2), chain(&two, 3), v(&two), pq];
    for a in &over_two {
        let unit = build_tensor_product(&v(&two), a).unwrap();
        assert!(iso(unit.carrier(), a), "V (x) {}", a.name());
        for b in &over_two {
            let ab = build_tensor_product(a, b).unwrap();
            let ba = build_tensor_product(b, a).unwrap();
            assert!(iso(ab.carrier(), ba.carrier()), "{} (x) {}", a.name(), b.name());
        }
    }
    let d1 = free(&Arc::new(vq_core::vcat::unit_vcat(&luk)));
    assert!(iso(build_tensor_product(&v(&luk), &d1).unwrap().carrier(), &d1));

    let c2 = chain(&two, 2);
    let c3 = chain(&two, 3);
    let wc2 = w(&c2);
    let left = build_tensor_product_with(build_tensor_product_with(&wc2, &wc2).unwrap().carrier_witness(), &w(&c3)).unwrap();
    let inner = build_tensor_product_with(&wc2, &w(&c3)).unwrap();
    let right = build_tensor_product_with(&wc2, inner.carrier_witness()).unwrap();
    assert!(iso(left.carrier(), right.carrier()));
}

/// Every G-ideal is the join of `ξ(a, b) ⊗ q(y(a, b))` computed in the carrier.
#[test]
fn ideals_are_colimits_of_reflected_representables() {
    let two = q("two");
    let luk = q("lukasiewicz3");
    for (a, b) in [(chain(&two, 2), chain(&two, 3)), (v(&luk), v(&luk)), (v(&two), chain(&two, 2))] {
        let tp = build_tensor_product(&a, &b).unwrap();
        let wt = tp.carrier_witness();
        for k in 0..tp.len() {
            let xi = tp.ideal(k);
            let mut acc = wt.bottom();
            for x in 0..a.len() {
                for y in 0..b.len() {
                    acc = wt.join(acc, wt.tensor(xi[x * b.len() + y], tp.i(x, y)));
                }
            }
            assert_eq!(acc, k);
        }
    }
}

#[test]
fn universal_property_and_galois_correspondence() {
    let two = q("two");
    let small = [chain(&two, 2), chain(&two, 3), v(&two), Arc::new(terminal_vcat(&two))];
    for a in &small[..3] {
        for b in &small[..3] {
            let tp = build_tensor_product(a, b).unwrap();
            let g = galois_iso(&tp).unwrap();
            assert!(g.holds(), "{:?}", g.failure);
            assert_eq!(g.maps, tp.len());
            for c in &small {
                let r = check_universal_property(&tp, &w(c)).unwrap();
                assert!(r.holds(), "{:?}", r.failure);
            }
        }
    }
}

#[test]
fn non_cocomplete_input_is_rejected() {
    let sug = q("sugihara3");
    let vv = Arc::new(tensor_vcat(&v(&sug), &v(&sug)).unwrap());
    assert!(matches!(build_tensor_product(&vv, &v(&sug)), Err(Error::NotCocompleteInput(_))));
}

#[test]
fn star_autonomy_on_small_instances() {
    let two = q("two");
    for x in [chain(&two, 2), chain(&two, 3), v(&two), Arc::new(terminal_vcat(&two))] {
        assert!(star_autonomy_check(&w(&x)).unwrap(), "{}", x.name());
    }
    for name in ["lukasiewicz3", "heyting3", "sugihara3"] {
        assert!(star_autonomy_check(&w(&v(&q(name)))).unwrap(), "{name}");
    }
}

#[test]
fn dual_objects() {
    // V* = V-Sup(V, V) ≅ V, and over 𝟚 a finite lattice's dual is its opposite
    for name in ["two", "lukasiewicz3", "r422"] {
        let vv = v(&q(name));
        let d = dual_object(&w(&vv)).unwrap();
        assert!(iso(&d.category, &vv), "{name}");
    }
    let two = q("two");
    let m3 = Arc::new(
        from_order(&two, "m3", &["0", "a", "b", "c", "1"], |x, y| x == y || x == 0 || y == 4).unwrap(),
    );
    for x in [chain(&two, 3), m3] {
        let d = dual_object(&w(&x)).unwrap();
        assert!(iso(&d.category, &opposite(&x)), "{}", x.name());
        assert_eq!(d.maps, cocontinuous_maps(&w(&x), &w(&v(&two))).unwrap());
    }
}

#[test]
fn reflector_formulas_agree() {
    let two = q("two");
    let luk = q("lukasiewicz3");
    for (a, b) in [(chain(&two, 2), chain(&two, 2)), (v(&luk), v(&luk)), (chain(&two, 3), v(&two))] {
        let (wa, wb) = (w(&a), w(&b));
        let tp = build_tensor_product_with(&wa, &wb).unwrap();
        let (ta, tb) = (totally_below(&wa).unwrap(), totally_below(&wb).unwrap());
        for theta in tp.presheaves().iter() {
            assert_eq!(ccd_reflector(&ta, &tb, theta), reflector_q(&tp, theta));
        }
    }
}

#[test]
fn totally_below_matches_search() {
    let two = q("two");
    let m3 = Arc::new(
        from_order(&two, "m3", &["0", "a", "b", "c", "1"], |x, y| x == y || x == 0 || y == 4).unwrap(),
    );
    for x in [chain(&two, 3), v(&q("lukasiewicz3")), v(&q("r422")), m3] {
        let wx = w(&x);
        let by_formula = totally_below(&wx).ok().map(|t| t.t_map().to_vec());
        assert_eq!(by_formula, totally_below_by_search(&wx).unwrap(), "{}", x.name());
    }
}
