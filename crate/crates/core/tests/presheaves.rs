use std::sync::Arc;

use vq_core::cocomplete::{check_cocomplete, left_kan};
use vq_core::dist::{is_adjoint_functors, validate_functor, VFunctor};
use vq_core::enumerate::all_functors_naive;
use vq_core::presheaf::{
    cauchy_completion, d0, d2_vec, d_all, d_inv, d_on_functor, double_space, enumerate_presheaves, is_presheaf,
    mu, naive_presheaf_vectors, push_forward, yoneda, yoneda_map, PresheafSpace,
};
use vq_core::quantale::builtin;
use vq_core::vcat::{all_vcategories, discrete, from_order, pair_index, tensor_vcat, unit_vcat};
use vq_core::{Quantale, VCategory};

fn q(name: &str) -> Arc<Quantale> {
    Arc::new(builtin(name).unwrap())
}

fn cats(qq: &Arc<Quantale>, max: usize) -> Vec<Arc<VCategory>> {
    (1..=max).flat_map(|n| all_vcategories(qq, n).unwrap()).map(Arc::new).collect()
}

const SMALL: [&str; 4] = ["two", "heyting3", "lukasiewicz3", "sugihara3"];

#[test]
fn yoneda_lemma_on_every_presheaf() {
    for name in SMALL {
        for x in cats(&q(name), 2) {
            let s = enumerate_presheaves(&x).unwrap();
            let ys = yoneda_map(&s);
            for i in 0..s.len() {
                for (a, &ya) in ys.iter().enumerate() {
                    assert_eq!(s.hom(ya, i), s.get(i)[a]);
                }
            }
        }
    }
}

#[test]
fn enumeration_matches_the_definition() {
    for name in SMALL {
        for x in cats(&q(name), 2) {
            let s = enumerate_presheaves(&x).unwrap();
            let all: Vec<Vec<u8>> = s.iter().map(|p| p.to_vec()).collect();
            assert_eq!(all, naive_presheaf_vectors(&x));
            assert!(all.iter().all(|p| is_presheaf(&x, p)));
        }
    }
}

/// `μ ∘ D y = id`, `μ ∘ y_D = id` and `D y ⊣ μ ⊣ y_D`.
fn check_kz(x: &Arc<VCategory>) {
    let dx = enumerate_presheaves(x).unwrap();
    let ddx = double_space(&dx).unwrap();
    let y = yoneda(&dx).unwrap();
    let dy = d_on_functor(&y, &dx, &ddx).unwrap();
    let yd = yoneda(&ddx).unwrap();
    let m = mu(&dx, &ddx).unwrap();
    assert!(m.after(&dy).unwrap().is_identity(), "{}", x.name());
    assert!(m.after(&yd).unwrap().is_identity(), "{}", x.name());
    assert!(is_adjoint_functors(&dy, &m), "{}", x.name());
    assert!(is_adjoint_functors(&m, &yd), "{}", x.name());
}

#[test]
fn multiplication_splits_both_units() {
    for name in SMALL {
        for x in cats(&q(name), 2) {
            check_kz(&x);
        }
    }
}

fn triple(f: &VFunctor, dx: &PresheafSpace, dy: &PresheafSpace) {
    let df = d_on_functor(f, dx, dy).unwrap();
    let dinv = d_inv(f, dx, dy).unwrap();
    let dall = d_all(f, dx, dy).unwrap();
    assert!(is_adjoint_functors(&df, &dinv), "{:?}", f.map());
    assert!(is_adjoint_functors(&dinv, &dall), "{:?}", f.map());
}

#[test]
fn push_forward_pull_back_and_right_push_are_adjoint() {
    for name in SMALL {
        let cs = cats(&q(name), 2);
        let spaces: Vec<PresheafSpace> = cs.iter().map(|x| enumerate_presheaves(x).unwrap()).collect();
        for (x, dx) in cs.iter().zip(&spaces) {
            for (y, dy) in cs.iter().zip(&spaces) {
                for m in all_functors_naive(x, y) {
                    triple(&validate_functor(x, y, m).unwrap(), dx, dy);
                }
            }
        }
    }
}

#[test]
fn d2_is_natural() {
    for name in ["two", "lukasiewicz3"] {
        let qq = q(name);
        let cs = cats(&qq, 2);
        for x in cs.iter().take(4) {
            for x2 in cs.iter().take(4) {
                for m in all_functors_naive(x, x2) {
                    let f = validate_functor(x, x2, m).unwrap();
                    for y in cs.iter().take(3) {
                        let g = VFunctor::identity(y);
                        let (xy, xy2) = (Arc::new(tensor_vcat(x, y).unwrap()), Arc::new(tensor_vcat(x2, y).unwrap()));
                        let fg: Vec<usize> = (0..xy.len())
                            .map(|k| pair_index(y.len(), f.apply(k / y.len()), g.apply(k % y.len())))
                            .collect();
                        let fg = validate_functor(&xy, &xy2, fg).unwrap();
                        let (dx, dy) = (enumerate_presheaves(x).unwrap(), enumerate_presheaves(y).unwrap());
                        for phi in dx.iter() {
                            for psi in dy.iter() {
                                let lhs = push_forward(&fg, &d2_vec(&qq, phi, psi));
                                let rhs = d2_vec(&qq, &push_forward(&f, phi), &push_forward(&g, psi));
                                assert_eq!(lhs, rhs);
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn d0_picks_the_unit_presheaf() {
    for name in SMALL {
        let qq = q(name);
        let one = Arc::new(unit_vcat(&qq));
        let d1 = enumerate_presheaves(&one).unwrap();
        let f = d0(&d1).unwrap();
        assert_eq!(d1.get(f.apply(0)), &[qq.unit()]);
        // on 𝟙 the unit of the monad is d₀
        assert_eq!(yoneda(&d1).unwrap().map(), f.map());
    }
}

#[test]
fn kan_extension_of_yoneda_along_itself_is_identity() {
    let two = q("two");
    let c2 = Arc::new(from_order(&two, "chain2", &["0", "1"], |a, b| a <= b).unwrap());
    let d = enumerate_presheaves(&c2).unwrap();
    let y = yoneda(&d).unwrap();
    let w = check_cocomplete(y.cod()).unwrap();
    assert!(left_kan(&y, &y, &w).unwrap().is_identity());
}

#[test]
fn cauchy_completion_examples() {
    let two = q("two");
    // over 𝟚 the Cauchy completion of a poset is itself
    let c3 = Arc::new(from_order(&two, "chain3", &["0", "1", "2"], |a, b| a <= b).unwrap());
    let s = enumerate_presheaves(&c3).unwrap();
    let (c, objs) = cauchy_completion(&s).unwrap();
    assert_eq!(c.len(), 3);
    assert_eq!(objs, yoneda_map(&s));
    // the completion contains the representables and is idempotent
    for name in ["lukasiewicz3", "heyting3"] {
        for x in cats(&q(name), 2) {
            let s = enumerate_presheaves(&x).unwrap();
            let (c, objs) = cauchy_completion(&s).unwrap();
            assert!(yoneda_map(&s).iter().all(|r| objs.contains(r)));
            let c = Arc::new(c);
            let s2 = enumerate_presheaves(&c).unwrap();
            assert_eq!(cauchy_completion(&s2).unwrap().0.len(), c.len());
        }
    }
    let pq = Arc::new(discrete(&two, &["p", "q"]));
    let s = enumerate_presheaves(&pq).unwrap();
    assert_eq!(cauchy_completion(&s).unwrap().0.len(), 2);
}
