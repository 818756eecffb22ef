//! The acceptance suite: one PASS/FAIL line per criterion, each under its time limit.

use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use vq_core::ccd::{ccd_closure_check, ccd_reflector, check_main_theorem, is_ccd, totally_below};
use vq_core::classical::lattices_up_to;
use vq_core::cocomplete::{check_cocomplete, satisfies_colimit_equation, tensor_obj, weighted_colimit, CocompleteWitness};
use vq_core::corpus::{chain, cocomplete_instances, free, m3, quantale, v};
use vq_core::dist::{is_adjoint_functors, validate_distributor, validate_functor, Distributor};
use vq_core::enumerate::all_functors_naive;
use vq_core::presheaf::{d_all, d_inv, d_on_functor, double_space, enumerate_presheaves, mu, yoneda, yoneda_map};
use vq_core::quantale::{builtin, BUILTIN_NAMES};
use vq_core::tensorprod::{build_tensor_product_with, check_universal_property, galois_iso, reflector_q};
use vq_core::vcat::{
    all_vcategories, find_isomorphism, from_order, is_separated, pair_index, separation_witnesses, tensor_vcat,
    terminal_vcat,
};
use vq_core::{Elem, Error, Quantale, VCategory};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: Error) -> String {
    e.to_string()
}

fn witness(x: &Arc<VCategory>) -> Result<Arc<CocompleteWitness>, String> {
    check_cocomplete(x).map(Arc::new).map_err(err)
}

fn quantale_suite() -> Outcome {
    for name in BUILTIN_NAMES {
        let q = builtin(name).map_err(err)?;
        ensure(q.len() <= 16, || format!("{name} has {} elements", q.len()))?;
        for u in q.elements() {
            for v in q.elements() {
                for w in q.elements() {
                    ensure(q.leq(q.mul(u, v), w) == q.leq(u, q.residuate(v, w)), || {
                        format!("{name}: adjunction fails at ({u}, {v}, {w})")
                    })?;
                }
            }
        }
    }
    Ok(format!("{} builtins", BUILTIN_NAMES.len()))
}

fn non_separation() -> Outcome {
    let q = quantale("r422");
    let vv = tensor_vcat(&v(&q), &v(&q)).map_err(err)?;
    let (e, a) = (q.index_of("e").unwrap() as usize, q.index_of("a").unwrap() as usize);
    let (ae, ea) = (pair_index(4, a, e), pair_index(4, e, a));
    ensure(!is_separated(&vv), || "V (x) V over r422 is separated".into())?;
    ensure(separation_witnesses(&vv).contains(&(ae.min(ea), ae.max(ea))), || "(a,e) and (e,a) are not isomorphic".into())?;
    ensure(vv.object_name(ae) == "(a,e)" && vv.object_name(ea) == "(e,a)", || "unexpected object names".into())?;
    Ok(format!("{} ~ {}", vv.object_name(ae), vv.object_name(ea)))
}

fn missing_tensor() -> Outcome {
    let q = quantale("sugihara3");
    let vv = Arc::new(tensor_vcat(&v(&q), &v(&q)).map_err(err)?);
    ensure(matches!(check_cocomplete(&vv), Err(Error::NoSuchColimit { .. })), || "V (x) V over sugihara3 is cocomplete".into())?;
    let top = q.top();
    let lacking: Vec<&str> = (0..vv.len())
        .filter(|&z| matches!(tensor_obj(&vv, top, z), Err(Error::NoSuchColimit { .. })))
        .map(|z| vv.object_name(z))
        .collect();
    ensure(!lacking.is_empty(), || "every object has a tensor by the top element".into())?;
    Ok(format!("no 1 (x) z for z in {{{}}}", lacking.join(", ")))
}

fn small_categories(q: &Arc<Quantale>, max: usize) -> Vec<Arc<VCategory>> {
    (1..=max).flat_map(|n| all_vcategories(q, n).unwrap()).map(Arc::new).collect()
}

fn yoneda_kz() -> Outcome {
    let mut checked = 0;
    for name in BUILTIN_NAMES.iter().filter(|n| builtin(n).unwrap().len() <= 3) {
        let cats = small_categories(&quantale(name), 2);
        let spaces: Vec<_> = cats.iter().map(|x| enumerate_presheaves(x).map_err(err)).collect::<Result<_, _>>()?;
        for (x, dx) in cats.iter().zip(&spaces) {
            let ys = yoneda_map(dx);
            for i in 0..dx.len() {
                for (a, &ya) in ys.iter().enumerate() {
                    ensure(dx.hom(ya, i) == dx.get(i)[a], || format!("Yoneda fails on {x:?}"))?;
                }
            }
            let ddx = double_space(dx).map_err(err)?;
            let y = yoneda(dx).map_err(err)?;
            let m = mu(dx, &ddx).map_err(err)?;
            let dy = d_on_functor(&y, dx, &ddx).map_err(err)?;
            let yd = yoneda(&ddx).map_err(err)?;
            ensure(m.after(&dy).map_err(err)?.is_identity(), || format!("mu . Dy != id on {x:?}"))?;
            ensure(m.after(&yd).map_err(err)?.is_identity(), || format!("mu . y_D != id on {x:?}"))?;
            for (z, dz) in cats.iter().zip(&spaces) {
                for map in all_functors_naive(x, z) {
                    let f = validate_functor(x, z, map).map_err(err)?;
                    let (df, dinv, dall) = (
                        d_on_functor(&f, dx, dz).map_err(err)?,
                        d_inv(&f, dx, dz).map_err(err)?,
                        d_all(&f, dx, dz).map_err(err)?,
                    );
                    ensure(is_adjoint_functors(&df, &dinv) && is_adjoint_functors(&dinv, &dall), || {
                        format!("triple adjunction fails for {:?}", f.map())
                    })?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} functors"))
}

/// `Y ⊗ M ⊗ X` for a random matrix `M`.
fn random_distributor(rng: &mut StdRng, x: &Arc<VCategory>, y: &Arc<VCategory>) -> Result<Distributor, String> {
    let q = x.quantale();
    let (mx, my) = (x.len(), y.len());
    let m: Vec<Elem> = (0..mx * my).map(|_| rng.random_range(0..q.len()) as Elem).collect();
    let mat = (0..my * mx)
        .map(|k| {
            let (b, a) = (k / mx, k % mx);
            let mut acc = q.bottom();
            for b2 in 0..my {
                for a2 in 0..mx {
                    acc = q.join(acc, q.mul(q.mul(y.hom(b, b2), m[b2 * mx + a2]), x.hom(a2, a)));
                }
            }
            acc
        })
        .collect();
    validate_distributor(x, y, mat).map_err(err)
}

fn colimit_cross_validation() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut instances = 0;
    for name in ["two", "lukasiewicz3"] {
        let q = quantale(name);
        let cats = small_categories(&q, 3);
        let targets: Vec<Arc<VCategory>> = if name == "two" {
            vec![v(&q), chain(&q, 3), Arc::new(terminal_vcat(&q))]
        } else {
            vec![v(&q), Arc::new(terminal_vcat(&q))]
        };
        let ws: Vec<_> = targets.iter().map(witness).collect::<Result<_, _>>()?;
        for _ in 0..60 {
            let x = &cats[rng.random_range(0..cats.len())];
            let y = &cats[rng.random_range(0..cats.len())];
            let k = rng.random_range(0..targets.len());
            let (z, w) = (&targets[k], &ws[k]);
            let phi = random_distributor(&mut rng, x, y)?;
            let maps = all_functors_naive(y, z);
            let f = validate_functor(y, z, maps[rng.random_range(0..maps.len())].clone()).map_err(err)?;
            let colim = weighted_colimit(&phi, &f, w).map_err(err)?;
            ensure(satisfies_colimit_equation(&phi, &f, &colim).map_err(err)?, || {
                format!("colimit equation fails: phi {:?}, f {:?}", phi.matrix(), f.map())
            })?;
            instances += 1;
        }
    }
    ensure(instances >= 100, || format!("only {instances} instances"))?;
    Ok(format!("{instances} instances, 0 failures"))
}

fn naive_presheaves(x: &VCategory) -> Vec<Vec<Elem>> {
    let q = x.quantale();
    let n = x.len();
    (0..q.len().pow(n as u32))
        .map(|mut k| {
            let mut p = vec![0 as Elem; n];
            for i in (0..n).rev() {
                p[i] = (k % q.len()) as Elem;
                k /= q.len();
            }
            p
        })
        .filter(|p| (0..n).all(|a| (0..n).all(|b| q.leq(q.mul(x.hom(a, b), p[b]), p[a]))))
        .collect()
}

fn sup_by_search(x: &VCategory, phi: &[Elem]) -> usize {
    let q = x.quantale();
    let row: Vec<Elem> =
        (0..x.len()).map(|b| q.meet_all(phi.iter().enumerate().map(|(a, &u)| q.residuate(u, x.hom(a, b))))).collect();
    (0..x.len()).find(|&c| x.row(c) == row).expect("cocomplete")
}

fn g_ideal_oracle() -> Outcome {
    let two = quantale("two");
    let c2 = chain(&two, 2);
    let wc = witness(&c2)?;
    let tp = build_tensor_product_with(&wc, &wc).map_err(err)?;
    let ab = tensor_vcat(&c2, &c2).map_err(err)?;
    let pa = naive_presheaves(&c2);
    let naive: Vec<Vec<Elem>> = naive_presheaves(&ab)
        .into_iter()
        .filter(|xi| {
            pa.iter().all(|phi| {
                pa.iter().all(|psi| {
                    let mut lhs = two.top();
                    for (x, &u) in phi.iter().enumerate() {
                        for (y, &w) in psi.iter().enumerate() {
                            lhs = two.meet(lhs, two.residuate(two.mul(u, w), xi[x * 2 + y]));
                        }
                    }
                    lhs == xi[sup_by_search(&c2, phi) * 2 + sup_by_search(&c2, psi)]
                })
            })
        })
        .collect();
    let found: Vec<Vec<Elem>> = (0..tp.len()).map(|k| tp.ideal(k).to_vec()).collect();
    ensure(found == naive, || format!("enumerated {found:?}, naive {naive:?}"))?;
    ensure(naive.len() == 2, || format!("{} G-ideals", naive.len()))?;
    ensure(find_isomorphism(tp.carrier(), &c2).is_some(), || "carrier is not the 2-chain".into())?;
    Ok("2 G-ideals, carrier is the 2-chain".into())
}

fn universal_corpus() -> Vec<(Arc<VCategory>, Arc<VCategory>, Arc<VCategory>)> {
    let two = quantale("two");
    let small = [chain(&two, 2), v(&two), Arc::new(terminal_vcat(&two).with_name("one_top"))];
    let mut out = Vec::new();
    for a in &small {
        for b in &small {
            for c in &small {
                out.push((a.clone(), b.clone(), c.clone()));
            }
        }
    }
    let vl = v(&quantale("lukasiewicz3"));
    out.push((vl.clone(), vl.clone(), vl));
    out
}

fn universal_property() -> Outcome {
    let corpus = universal_corpus();
    for (a, b, c) in &corpus {
        let tp = build_tensor_product_with(&witness(a)?, &witness(b)?).map_err(err)?;
        let r = check_universal_property(&tp, &*witness(c)?).map_err(err)?;
        ensure(r.holds(), || format!("{} (x) {} -> {}: {:?}", a.name(), b.name(), c.name(), r.failure))?;
        ensure(r.cocontinuous_maps == r.bimorphisms, || "counts differ".into())?;
    }
    Ok(format!("{} triples", corpus.len()))
}

fn galois() -> Outcome {
    let mut pairs: Vec<(Arc<VCategory>, Arc<VCategory>)> = universal_corpus().into_iter().map(|(a, b, _)| (a, b)).collect();
    pairs.dedup_by(|x, y| x.0.name() == y.0.name() && x.1.name() == y.1.name());
    for (a, b) in &pairs {
        let tp = build_tensor_product_with(&witness(a)?, &witness(b)?).map_err(err)?;
        let r = galois_iso(&tp).map_err(err)?;
        ensure(r.holds() && r.maps == tp.len(), || format!("{} (x) {}: {r:?}", a.name(), b.name()))?;
    }
    Ok(format!("{} pairs", pairs.len()))
}

fn main_theorem() -> Outcome {
    let two = quantale("two");
    let mut verdicts = Vec::new();
    for x in cocomplete_instances() {
        let r = check_main_theorem(&witness(&x)?).map_err(err)?;
        ensure(r.consistent(), || format!("{}: ccd {} but nuclear {}", x.name(), r.ccd, r.nuclear.nuclear))?;
        verdicts.push((x.name().to_string(), r.ccd));
    }
    let verdict = |n: &str| verdicts.iter().find(|(m, _)| m == n).map(|(_, v)| *v);
    for name in BUILTIN_NAMES {
        ensure(verdict(&format!("V_{name}")) == Some(true), || format!("V over {name} is not ccd and nuclear"))?;
    }
    let d2 = free(&chain(&two, 2));
    ensure(verdict(d2.name()) == Some(true), || "D(2-chain) is not ccd and nuclear".into())?;
    ensure(verdict(m3(&two).name()) == Some(false), || "M3 is ccd or nuclear".into())?;
    Ok(format!("{} instances consistent", verdicts.len()))
}

fn ccd_pairs() -> Vec<Arc<VCategory>> {
    vec![chain(&quantale("two"), 2), v(&quantale("lukasiewicz3"))]
}

fn reflectors_agree() -> Outcome {
    let mut n = 0;
    for a in ccd_pairs() {
        let wa = witness(&a)?;
        let tp = build_tensor_product_with(&wa, &wa).map_err(err)?;
        let ta = totally_below(&wa).map_err(err)?;
        for theta in tp.presheaves().iter() {
            ensure(ccd_reflector(&ta, &ta, theta) == reflector_q(&tp, theta), || format!("differ at {theta:?}"))?;
            n += 1;
        }
    }
    Ok(format!("{n} presheaves"))
}

fn ccd_closure() -> Outcome {
    for a in ccd_pairs() {
        let wa = witness(&a)?;
        let r = ccd_closure_check(&wa, &wa).map_err(err)?;
        ensure(r.holds(), || format!("{}: {r:?}", a.name()))?;
    }
    Ok("tensor squares are ccd retracts".into())
}

fn classical_oracle() -> Outcome {
    let two = quantale("two");
    let lattices = lattices_up_to(6);
    for l in &lattices {
        let names: Vec<String> = (0..l.n).map(|i| i.to_string()).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let x = Arc::new(from_order(&two, "l", &refs, |a, b| l.le(a, b)).map_err(err)?);
        let enriched = is_ccd(&*witness(&x)?).map_err(err)?;
        ensure(enriched == l.is_completely_distributive(), || format!("disagree on {l:?}"))?;
    }
    Ok(format!("{} lattices", lattices.len()))
}

fn run_corpus(threads: Option<&str>) -> Result<Vec<u8>, String> {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_vq"));
    cmd.args(["corpus", "--machine"]);
    match threads {
        Some(t) => cmd.env("VQ_THREADS", t),
        None => cmd.env_remove("VQ_THREADS"),
    };
    let out = cmd.output().map_err(|e| e.to_string())?;
    ensure(out.status.success(), || format!("exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr)))?;
    Ok(out.stdout)
}

fn determinism() -> Outcome {
    let first = run_corpus(None)?;
    for threads in [None, None, Some("1"), Some("4")] {
        let again = run_corpus(threads)?;
        ensure(again == first, || format!("output differs with VQ_THREADS={threads:?}"))?;
    }
    Ok(format!("{} bytes identical over 5 runs", first.len()))
}

type Criterion = (&'static str, Duration, fn() -> Outcome);

#[test]
fn acceptance() {
    let criteria: [Criterion; 13] = [
        ("quantale suite", Duration::from_secs(1), quantale_suite),
        ("non-separation of V (x) V over r422", Duration::from_secs(1), non_separation),
        ("missing tensor over sugihara3", Duration::from_secs(5), missing_tensor),
        ("Yoneda and KZ suite", Duration::from_secs(60), yoneda_kz),
        ("colimit cross-validation", Duration::from_secs(30), colimit_cross_validation),
        ("G-ideal oracle", Duration::from_secs(1), g_ideal_oracle),
        ("universal property", Duration::from_secs(60), universal_property),
        ("Galois isomorphism", Duration::from_secs(60), galois),
        ("ccd iff nuclear", Duration::from_secs(120), main_theorem),
        ("reflector formulas agree", Duration::from_secs(60), reflectors_agree),
        ("ccd closed under tensor", Duration::from_secs(60), ccd_closure),
        ("classical lattice oracle", Duration::from_secs(120), classical_oracle),
        ("deterministic corpus output", Duration::from_secs(600), determinism),
    ];
    let mut failed = Vec::new();
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let verdict = match &outcome {
            Ok(_) if took > *limit => Err(format!("took {took:.2?}, limit {limit:?}")),
            other => other.clone(),
        };
        match &verdict {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({took:.2?})", i + 1),
            Err(why) => {
                println!("FAIL {:>2} {name}: {why} ({took:.2?})", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
