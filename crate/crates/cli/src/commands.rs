use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use vq_core::ccd::{check_main_theorem, is_nuclear, totally_below};
use vq_core::cocomplete::{check_cocomplete, cocomplete_witness, CocompleteWitness};
use vq_core::corpus::{run_suite, Record};
use vq_core::dist::{compose_dist, right_extension, right_lifting, Distributor};
use vq_core::presheaf::{cauchy_completion, enumerate_presheaves, yoneda_map};
use vq_core::quantale::{builtin, Elem, Quantale};
use vq_core::tensorprod::{build_tensor_product_with, check_universal_property, galois_iso};
use vq_core::text::{print_distributor, print_quantale, print_vcategory, Workspace};
use vq_core::vcat::{is_separated, opposite, separation_witnesses, tensor_vcat, underlying_order, VCategory};
use vq_core::Error;

use crate::shipped;

/// Collected output; printed once the command has finished.
pub struct Out {
    pub machine: bool,
    pub list: bool,
    pub text: String,
}

impl Out {
    pub fn new(machine: bool, list: bool) -> Self {
        Out { machine, list, text: String::new() }
    }

    pub fn rec(&mut self, r: &Record) {
        let line = if self.machine {
            r.fields
                .iter()
                .map(|(k, v)| format!("{k}={}", v.replace(char::is_whitespace, "_")))
                .collect::<Vec<_>>()
                .join(" ")
        } else {
            r.human()
        };
        self.line(&line);
    }

    pub fn line(&mut self, s: &str) {
        self.text.push_str(s);
        self.text.push('\n');
    }

    pub fn block(&mut self, s: &str) {
        self.text.push_str(s);
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn load(arg: &str) -> Result<Workspace> {
    let src = shipped::read(arg)?;
    let mut ws = Workspace::default();
    ws.load_str(&src).with_context(|| format!("loading {arg}"))?;
    Ok(ws)
}

/// The last vcategory in a file.
fn load_vcat(arg: &str) -> Result<Arc<VCategory>> {
    load(arg)?.vcategories.last().cloned().ok_or_else(|| anyhow!("{arg}: no vcategory block"))
}

fn vector(q: &Quantale, v: &[Elem]) -> String {
    let parts: Vec<&str> = v.iter().map(|&e| q.element_name(e)).collect();
    format!("[{}]", parts.join(","))
}

pub fn quantale_validate(out: &mut Out, file: &str) -> Result<bool> {
    let ws = load(file)?;
    if ws.quantales.is_empty() {
        bail!("{file}: no quantale block");
    }
    for q in &ws.quantales {
        out.rec(
            &Record::new("quantale", q.name())
                .with("elements", q.len())
                .with("integral", yes(q.is_integral()))
                .with("status", "valid"),
        );
    }
    Ok(true)
}

pub fn quantale_show(out: &mut Out, arg: &str) -> Result<bool> {
    let q = match builtin(arg) {
        Ok(q) => Arc::new(q),
        Err(Error::UnknownBuiltin(_)) => load(arg)?.quantales.last().cloned().ok_or_else(|| anyhow!("{arg}: no quantale block"))?,
        Err(e) => return Err(e.into()),
    };
    out.block(&print_quantale(&q));
    Ok(true)
}

pub fn vcat_validate(out: &mut Out, file: &str) -> Result<bool> {
    let ws = load(file)?;
    if ws.vcategories.is_empty() {
        bail!("{file}: no vcategory block");
    }
    for x in &ws.vcategories {
        out.rec(
            &Record::new("vcategory", x.name())
                .with("over", x.quantale().name())
                .with("objects", x.len())
                .with("separated", yes(is_separated(x)))
                .with("status", "valid"),
        );
    }
    Ok(true)
}

pub fn vcat_order(out: &mut Out, file: &str) -> Result<bool> {
    let x = load_vcat(file)?;
    let le = underlying_order(&x);
    let n = x.len();
    for a in 0..n {
        let above: Vec<&str> = (0..n).filter(|&b| le[a * n + b]).map(|b| x.object_name(b)).collect();
        out.rec(&Record::new("object", x.object_name(a)).with("up", above.join(",")));
    }
    Ok(true)
}

pub fn vcat_separated(out: &mut Out, file: &str) -> Result<bool> {
    let x = load_vcat(file)?;
    let pairs = separation_witnesses(&x);
    out.rec(&Record::new("vcategory", x.name()).with("separated", yes(pairs.is_empty())));
    for (a, b) in &pairs {
        out.rec(&Record::new("isomorphic", format!("{}~{}", x.object_name(*a), x.object_name(*b))));
    }
    Ok(pairs.is_empty())
}

pub fn vcat_op(out: &mut Out, file: &str) -> Result<bool> {
    let x = load_vcat(file)?;
    out.block(&print_vcategory(&opposite(&x).with_name(&format!("{}^op", x.name()))));
    Ok(true)
}

pub fn vcat_tensor(out: &mut Out, a: &str, b: &str) -> Result<bool> {
    let (x, y) = (load_vcat(a)?, load_vcat(b)?);
    let t = tensor_vcat(&x, &y)?;
    out.block(&print_vcategory(&t.with_name(&format!("{}*{}", x.name(), y.name()))));
    Ok(true)
}

pub fn presheaves(out: &mut Out, file: &str) -> Result<bool> {
    let x = load_vcat(file)?;
    let space = enumerate_presheaves(&x)?;
    out.rec(&Record::new("vcategory", x.name()).with("presheaves", space.len()));
    if out.list {
        for (i, phi) in space.iter().enumerate() {
            out.rec(&Record::new("presheaf", i).with("value", space.name_of(phi)));
        }
    }
    Ok(true)
}

pub fn cauchy(out: &mut Out, file: &str) -> Result<bool> {
    let x = load_vcat(file)?;
    let space = enumerate_presheaves(&x)?;
    let (c, objs) = cauchy_completion(&space)?;
    let reps = yoneda_map(&space);
    let complete = objs.iter().all(|i| reps.contains(i));
    out.rec(
        &Record::new("vcategory", x.name())
            .with("cauchy_objects", c.len())
            .with("cauchy_complete", yes(complete)),
    );
    out.block(&print_vcategory(&c));
    Ok(true)
}

/// Dump a failed weight: the weight itself and, per candidate object, the
/// first object where its hom row disagrees.
fn dump_no_colimit(out: &mut Out, x: &VCategory, weight: &[Elem], defects: &[usize]) {
    out.rec(&Record::new("no_supremum", vector(x.quantale(), weight)));
    if out.list || !out.machine {
        for (c, &d) in defects.iter().enumerate() {
            out.rec(&Record::new("candidate", x.object_name(c)).with("fails_at", x.object_name(d)));
        }
    }
}

/// Cocomplete witness, or `None` after dumping the failing weight.
fn witness_or_dump(out: &mut Out, x: &Arc<VCategory>) -> Result<Option<Arc<CocompleteWitness>>> {
    match cocomplete_witness(x) {
        Ok(w) => Ok(Some(Arc::new(w))),
        Err(Error::NoSuchColimit { weight, defects }) => {
            out.rec(&Record::new("vcategory", x.name()).with("cocomplete", "no"));
            dump_no_colimit(out, x, &weight, &defects);
            Ok(None)
        }
        Err(e) => Err(e.into()),
    }
}

pub fn check_cocomplete_cmd(out: &mut Out, file: &str) -> Result<bool> {
    let x = load_vcat(file)?;
    match check_cocomplete(&x) {
        Ok(w) => {
            out.rec(
                &Record::new("vcategory", x.name())
                    .with("cocomplete", "yes")
                    .with("presheaves", w.space().map_or(0, |s| s.len())),
            );
            Ok(true)
        }
        Err(Error::NoSuchColimit { weight, defects }) => {
            out.rec(&Record::new("vcategory", x.name()).with("cocomplete", "no"));
            dump_no_colimit(out, &x, &weight, &defects);
            Ok(false)
        }
        Err(e) => Err(e.into()),
    }
}

pub fn check_ccd(out: &mut Out, file: &str) -> Result<bool> {
    let x = load_vcat(file)?;
    let Some(w) = witness_or_dump(out, &x)? else { return Ok(false) };
    match totally_below(&w) {
        Ok(t) => {
            out.rec(&Record::new("vcategory", x.name()).with("ccd", "yes"));
            for a in 0..x.len() {
                out.rec(&Record::new("object", x.object_name(a)).with("totally_below", vector(x.quantale(), t.t(a))));
            }
            Ok(true)
        }
        Err(Error::NotCcd(a)) => {
            out.rec(&Record::new("vcategory", x.name()).with("ccd", "no").with("fails_at", x.object_name(a)));
            Ok(false)
        }
        Err(e) => Err(e.into()),
    }
}

pub fn check_nuclear(out: &mut Out, file: &str) -> Result<bool> {
    let x = load_vcat(file)?;
    let Some(w) = witness_or_dump(out, &x)? else { return Ok(false) };
    let r = is_nuclear(&w)?;
    let mut rec = Record::new("vcategory", x.name())
        .with("nuclear", yes(r.nuclear))
        .with("dual", r.dual_size)
        .with("tensor_with_dual", r.tensor_size)
        .with("endomaps", r.endo_size);
    if let Some(reason) = &r.reason {
        rec = rec.with("reason", reason);
    }
    out.rec(&rec);
    Ok(r.nuclear)
}

pub fn check_theorem(out: &mut Out, file: &str) -> Result<bool> {
    let x = load_vcat(file)?;
    let Some(w) = witness_or_dump(out, &x)? else { return Ok(false) };
    let r = check_main_theorem(&w)?;
    let verdict = if r.consistent() { "consistent" } else { "inconsistent" };
    if out.machine {
        let mut rec = Record::new("vcategory", x.name())
            .with("ccd", yes(r.ccd))
            .with("nuclear", yes(r.nuclear.nuclear))
            .with("theorem", verdict);
        if let Some(a) = r.not_ccd_at {
            rec = rec.with("not_ccd_at", x.object_name(a));
        }
        out.rec(&rec);
    } else {
        out.line(&format!("vcategory {} over {}, {} objects", x.name(), x.quantale().name(), x.len()));
        if let Some(a) = r.not_ccd_at {
            out.line(&format!("no totally-below presheaf at object {}", x.object_name(a)));
        }
        if let Some(reason) = &r.nuclear.reason {
            out.line(&format!("canonical map to endomaps: {reason}"));
        }
        out.line(&format!("ccd: {}, nuclear: {}, theorem: {verdict}", yes(r.ccd), yes(r.nuclear.nuclear)));
    }
    Ok(r.consistent())
}

pub fn tensor(out: &mut Out, a: &str, b: &str, universal: Option<&str>, galois: bool) -> Result<bool> {
    let (x, y) = (load_vcat(a)?, load_vcat(b)?);
    let Some(wa) = witness_or_dump(out, &x)? else { return Ok(false) };
    let Some(wb) = witness_or_dump(out, &y)? else { return Ok(false) };
    let tp = build_tensor_product_with(&wa, &wb)?;
    let square = tp.check_bimorphism_square();
    let mut ok = square;
    out.rec(
        &Record::new("tensor", format!("{}*{}", x.name(), y.name()))
            .with("presheaves", tp.presheaves().len())
            .with("g_ideals", tp.len())
            .with("bimorphism_square", if square { "pass" } else { "fail" }),
    );
    if out.list {
        let q = x.quantale();
        for k in 0..tp.len() {
            out.rec(&Record::new("g_ideal", k).with("value", vector(q, tp.ideal(k))));
        }
    }
    if let Some(c) = universal {
        let z = load_vcat(c)?;
        let Some(wc) = witness_or_dump(out, &z)? else { return Ok(false) };
        let r = check_universal_property(&tp, &wc)?;
        let mut rec = Record::new("universal", z.name())
            .with("maps", r.cocontinuous_maps)
            .with("bimorphisms", r.bimorphisms)
            .with("status", if r.holds() { "pass" } else { "fail" });
        if let Some(f) = &r.failure {
            rec = rec.with("failure", f);
        }
        out.rec(&rec);
        ok &= r.holds();
    }
    if galois {
        let r = galois_iso(&tp)?;
        let mut rec = Record::new("galois", format!("{}->{}^op", x.name(), y.name()))
            .with("maps", r.maps)
            .with("g_ideals", r.ideals)
            .with("status", if r.holds() { "pass" } else { "fail" });
        if let Some(f) = &r.failure {
            rec = rec.with("failure", f);
        }
        out.rec(&rec);
        ok &= r.holds();
    }
    Ok(ok)
}

#[derive(Clone, Copy)]
pub enum DistOp {
    Compose,
    Extend,
    Lift,
}

pub fn dist(out: &mut Out, op: DistOp, file: &str, first: &str, second: &str) -> Result<bool> {
    let ws = load(file)?;
    let get = |n: &str| -> Result<&Distributor> { ws.distributor(n).ok_or_else(|| anyhow!("{file}: no distributor '{n}'")) };
    let (l, r) = (get(first)?, get(second)?);
    let (d, name) = match op {
        DistOp::Compose => (compose_dist(l, r)?, format!("compose({first},{second})")),
        DistOp::Extend => (right_extension(l, r)?, format!("ext({first},{second})")),
        DistOp::Lift => (right_lifting(l, r)?, format!("lift({first},{second})")),
    };
    out.block(&print_distributor(&name, &d));
    Ok(true)
}

pub fn corpus(out: &mut Out) -> Result<bool> {
    let mut ok = true;
    for (name, src) in shipped::FILES {
        let mut ws = Workspace::default();
        let loaded = ws.load_str(src);
        ok &= loaded.is_ok();
        out.rec(
            &Record::new("file", name)
                .with("quantales", ws.quantales.len())
                .with("vcategories", ws.vcategories.len())
                .with("distributors", ws.distributors.len())
                .with("status", if loaded.is_ok() { "pass" } else { "fail" }),
        );
    }
    for r in run_suite()? {
        ok &= r.passed();
        out.rec(&r);
    }
    Ok(ok)
}
