//! Named example instances and the suite of checks run over them.

use std::sync::Arc;

use crate::ccd::{ccd_closure_check, ccd_reflector, check_main_theorem, totally_below};
use crate::cocomplete::{check_cocomplete, tensor_obj, CocompleteWitness};
use crate::error::{Error, Result};
use crate::presheaf::enumerate_presheaves;
use crate::quantale::{builtin, Quantale, BUILTIN_NAMES};
use crate::tensorprod::{build_tensor_product_with, check_universal_property, galois_iso, reflector_q};
use crate::vcat::{
    discrete, find_isomorphism, from_order, is_separated, pair_index, quantale_vcat, separation_witnesses, tensor_vcat,
    terminal_vcat, VCategory,
};

pub fn quantale(name: &str) -> Arc<Quantale> {
    Arc::new(builtin(name).expect("builtin quantale"))
}

/// The `n`-element chain `0 < 1 < … < n-1`.
pub fn chain(q: &Arc<Quantale>, n: usize) -> Arc<VCategory> {
    let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    Arc::new(from_order(q, &format!("chain{n}"), &refs, |a, b| a <= b).expect("chain"))
}

/// The diamond `0 < a, b, c < 1`.
pub fn m3(q: &Arc<Quantale>) -> Arc<VCategory> {
    let le = |x: usize, y: usize| x == y || x == 0 || y == 4;
    Arc::new(from_order(q, "m3", &["0", "a", "b", "c", "1"], le).expect("m3"))
}

/// The pentagon `0 < a < b < 1`, `0 < c < 1`.
pub fn n5(q: &Arc<Quantale>) -> Arc<VCategory> {
    let up = [vec![0, 1, 2, 3, 4], vec![1, 2, 4], vec![2, 4], vec![3, 4], vec![4]];
    Arc::new(from_order(q, "n5", &["0", "a", "b", "c", "1"], |x, y| up[x].contains(&y)).expect("n5"))
}

pub fn v(q: &Arc<Quantale>) -> Arc<VCategory> {
    Arc::new(quantale_vcat(q).with_name(&format!("V_{}", q.name())))
}

/// `D(X)` as a V-category.
pub fn free(x: &Arc<VCategory>) -> Arc<VCategory> {
    let d = enumerate_presheaves(x).and_then(|s| s.materialize()).expect("small presheaf space");
    Arc::new((*d).clone().with_name(&format!("D_{}", x.name())))
}

/// Cocomplete instances for the complete-distributivity and nuclearity checks.
pub fn cocomplete_instances() -> Vec<Arc<VCategory>> {
    let two = quantale("two");
    let luk = quantale("lukasiewicz3");
    let mut out: Vec<Arc<VCategory>> = BUILTIN_NAMES.iter().map(|n| v(&quantale(n))).collect();
    out.push(free(&Arc::new(crate::vcat::unit_vcat(&luk))));
    out.push(chain(&two, 3));
    out.push(free(&chain(&two, 2)));
    out.push(free(&Arc::new(discrete(&two, &["p", "q"]))));
    out.push(Arc::new(terminal_vcat(&two)));
    out.push(m3(&two));
    out.push(n5(&two));
    out
}

/// One output line: ordered `key=value` fields.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Record {
    pub fields: Vec<(String, String)>,
}

impl Record {
    pub fn new(kind: &str, name: impl ToString) -> Self {
        Record { fields: vec![(kind.to_string(), name.to_string())] }
    }

    pub fn with(mut self, k: &str, v: impl ToString) -> Self {
        self.fields.push((k.to_string(), v.to_string()));
        self
    }

    pub fn get(&self, k: &str) -> Option<&str> {
        self.fields.iter().find(|(a, _)| a == k).map(|(_, b)| b.as_str())
    }

    pub fn passed(&self) -> bool {
        self.get("status") != Some("fail")
    }

    pub fn machine(&self) -> String {
        self.fields.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ")
    }

    pub fn human(&self) -> String {
        let (k, v) = &self.fields[0];
        let rest: Vec<String> = self.fields[1..].iter().map(|(a, b)| format!("{a}: {b}")).collect();
        if rest.is_empty() {
            return format!("{k} {v}");
        }
        format!("{k} {v}: {}", rest.join(", "))
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn status(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}

fn witness(x: &Arc<VCategory>) -> Result<Arc<CocompleteWitness>> {
    check_cocomplete(x).map(Arc::new)
}

/// Run every check; records come out in a fixed order.
pub fn run_suite() -> Result<Vec<Record>> {
    let mut out = Vec::new();

    for name in BUILTIN_NAMES {
        let q = quantale(name);
        out.push(
            Record::new("quantale", name)
                .with("elements", q.len())
                .with("integral", yes(q.is_integral()))
                .with("status", "pass"),
        );
    }

    // non-separation of V ⊗ V over r422
    {
        let q = quantale("r422");
        let vv = tensor_vcat(&v(&q), &v(&q))?;
        let (e, a) = (q.index_of("e").unwrap() as usize, q.index_of("a").unwrap() as usize);
        let (ea, ae) = (pair_index(4, e, a), pair_index(4, a, e));
        let ok = separation_witnesses(&vv).contains(&(ea.min(ae), ea.max(ae)));
        out.push(
            Record::new("check", "r422_square_not_separated")
                .with("pair", format!("{}~{}", vv.object_name(ae), vv.object_name(ea)))
                .with("status", status(ok && !is_separated(&vv))),
        );
    }

    // missing tensor by the top element over sugihara3
    {
        let q = quantale("sugihara3");
        let vv = Arc::new(tensor_vcat(&v(&q), &v(&q))?);
        let not_cocomplete = matches!(check_cocomplete(&vv), Err(Error::NoSuchColimit { .. }));
        let lacking: Vec<&str> = (0..vv.len())
            .filter(|&z| matches!(tensor_obj(&vv, q.top(), z), Err(Error::NoSuchColimit { .. })))
            .map(|z| vv.object_name(z))
            .collect();
        out.push(
            Record::new("check", "sugihara_square_lacks_top_tensor")
                .with("lacking", lacking.join(","))
                .with("status", status(not_cocomplete && !lacking.is_empty())),
        );
    }

    for x in cocomplete_instances() {
        let w = witness(&x)?;
        let r = check_main_theorem(&w)?;
        out.push(
            Record::new("instance", x.name())
                .with("over", x.quantale().name())
                .with("objects", x.len())
                .with("presheaves", w.space().map_or(0, |s| s.len()))
                .with("ccd", yes(r.ccd))
                .with("dual", r.nuclear.dual_size)
                .with("tensor_with_dual", r.nuclear.tensor_size)
                .with("endomaps", r.nuclear.endo_size)
                .with("nuclear", yes(r.nuclear.nuclear))
                .with("theorem", if r.consistent() { "consistent" } else { "inconsistent" })
                .with("status", status(r.consistent())),
        );
    }

    let two = quantale("two");
    let luk = quantale("lukasiewicz3");
    let c2 = chain(&two, 2);
    let pairs: Vec<(Arc<VCategory>, Arc<VCategory>)> = vec![(c2.clone(), c2.clone()), (v(&luk), v(&luk))];
    for (a, b) in &pairs {
        let (wa, wb) = (witness(a)?, witness(b)?);
        let tp = build_tensor_product_with(&wa, &wb)?;
        let gal = galois_iso(&tp)?;
        let iso = find_isomorphism(tp.carrier(), a).is_some() || find_isomorphism(tp.carrier(), b).is_some();
        out.push(
            Record::new("tensor", format!("{}*{}", a.name(), b.name()))
                .with("presheaves", tp.presheaves().len())
                .with("g_ideals", tp.len())
                .with("galois_maps", gal.maps)
                .with("status", status(gal.holds() && iso && tp.check_bimorphism_square())),
        );
        let (ta, tb) = (totally_below(&wa)?, totally_below(&wb)?);
        let agree = (0..tp.presheaves().len()).all(|k| {
            let theta = tp.presheaves().get(k);
            ccd_reflector(&ta, &tb, theta) == reflector_q(&tp, theta)
        });
        out.push(Record::new("reflector", format!("{}*{}", a.name(), b.name())).with("status", status(agree)));
        let closure = ccd_closure_check(&wa, &wb)?;
        out.push(
            Record::new("closure", format!("{}*{}", a.name(), b.name()))
                .with("tensor_ccd", yes(closure.tensor_ccd))
                .with("retract", yes(closure.retract))
                .with("status", status(closure.holds())),
        );
    }

    let one_top = Arc::new(terminal_vcat(&two));
    let small = [c2.clone(), v(&two), one_top];
    for a in &small {
        for b in &small {
            let tp = build_tensor_product_with(&witness(a)?, &witness(b)?)?;
            for c in &small {
                let r = check_universal_property(&tp, &*witness(c)?)?;
                out.push(
                    Record::new("universal", format!("{}*{}->{}", a.name(), b.name(), c.name()))
                        .with("maps", r.cocontinuous_maps)
                        .with("bimorphisms", r.bimorphisms)
                        .with("status", status(r.holds())),
                );
            }
        }
    }
    let vl = v(&luk);
    let tp = build_tensor_product_with(&witness(&vl)?, &witness(&vl)?)?;
    let r = check_universal_property(&tp, &*witness(&vl)?)?;
    out.push(
        Record::new("universal", format!("{}*{}->{}", vl.name(), vl.name(), vl.name()))
            .with("maps", r.cocontinuous_maps)
            .with("bimorphisms", r.bimorphisms)
            .with("status", status(r.holds())),
    );

    Ok(out)
}
