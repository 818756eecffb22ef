//! Line-oriented text format for quantales, V-categories and distributors.
//!
//! ```text
//! # comments start with '#'
//! quantale luk
//! elements 0 a 1
//! order 0<a a<1
//! unit 1
//! mult a*a=0
//!
//! vcategory chain over two
//! objects bot top
//! hom bot top = 1
//!
//! distributor phi from chain to chain
//! at bot top = 1
//! ```
//!
//! Missing `mult` entries are an error (commutativity fills the mirror
//! entry); missing `hom` and `at` entries default to bottom.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::caps;
use crate::dist::{validate_distributor, Distributor};
use crate::error::{Error, Result};
use crate::quantale::{builtin, validate_quantale, Elem, Quantale, RawQuantale};
use crate::vcat::{validate_vcategory, VCategory};

/// Everything loaded from a set of files.
#[derive(Debug, Default)]
pub struct Workspace {
    pub quantales: Vec<Arc<Quantale>>,
    pub vcategories: Vec<Arc<VCategory>>,
    pub distributors: Vec<(String, Distributor)>,
}

impl Workspace {
    /// A loaded quantale, falling back to builtins.
    pub fn quantale(&self, name: &str) -> Result<Arc<Quantale>> {
        if let Some(q) = self.quantales.iter().find(|q| q.name() == name) {
            return Ok(q.clone());
        }
        Ok(Arc::new(builtin(name)?))
    }

    pub fn vcategory(&self, name: &str) -> Option<&Arc<VCategory>> {
        self.vcategories.iter().find(|x| x.name() == name)
    }

    pub fn distributor(&self, name: &str) -> Option<&Distributor> {
        self.distributors.iter().find(|(n, _)| n == name).map(|(_, d)| d)
    }

    /// Parse one file's contents into this workspace.
    pub fn load_str(&mut self, src: &str) -> Result<()> {
        let lines: Vec<(usize, Vec<&str>)> = src
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").split_whitespace().collect::<Vec<_>>()))
            .filter(|(_, t)| !t.is_empty())
            .collect();
        let mut k = 0;
        while k < lines.len() {
            let start = k;
            k += 1;
            while k < lines.len() && !is_header(lines[k].1[0]) {
                k += 1;
            }
            let block = &lines[start..k];
            match block[0].1[0] {
                "quantale" => {
                    let q = parse_quantale(block)?;
                    if self.quantales.iter().any(|p| p.name() == q.name()) {
                        return Err(Error::DuplicateName(q.name().to_string()));
                    }
                    self.quantales.push(Arc::new(q));
                }
                "vcategory" => {
                    let x = parse_vcategory(self, block)?;
                    if self.vcategory(x.name()).is_some() {
                        return Err(Error::DuplicateName(x.name().to_string()));
                    }
                    self.vcategories.push(Arc::new(x));
                }
                "distributor" => {
                    let (name, d) = parse_distributor(self, block)?;
                    if self.distributor(&name).is_some() {
                        return Err(Error::DuplicateName(name));
                    }
                    self.distributors.push((name, d));
                }
                other => return Err(parse_err(block[0].0, &format!("expected a block header, found '{other}'"))),
            }
        }
        Ok(())
    }
}

fn is_header(tok: &str) -> bool {
    matches!(tok, "quantale" | "vcategory" | "distributor")
}

fn parse_err(line: usize, msg: &str) -> Error {
    Error::Parse { line, msg: msg.to_string() }
}

fn header_name(line: usize, toks: &[&str], arity: usize, shape: &str) -> Result<String> {
    if toks.len() != arity {
        return Err(parse_err(line, &format!("expected '{shape}'")));
    }
    Ok(toks[1].to_string())
}

fn parse_quantale(block: &[(usize, Vec<&str>)]) -> Result<Quantale> {
    let (l0, h) = &block[0];
    let name = header_name(*l0, h, 2, "quantale <name>")?;
    let mut elements: Option<Vec<String>> = None;
    let mut order = Vec::new();
    let mut unit = None;
    let mut mult: Vec<Option<usize>> = Vec::new();
    for (line, toks) in &block[1..] {
        let line = *line;
        let idx = |els: &Option<Vec<String>>, s: &str| -> Result<usize> {
            let els = els.as_ref().ok_or_else(|| parse_err(line, "'elements' must come first"))?;
            els.iter().position(|e| e == s).ok_or_else(|| parse_err(line, &format!("unknown element '{s}'")))
        };
        match toks[0] {
            "elements" => {
                if elements.is_some() {
                    return Err(parse_err(line, "duplicate 'elements' line"));
                }
                let els: Vec<String> = toks[1..].iter().map(|s| s.to_string()).collect();
                caps::guard("quantale elements", els.len(), caps::current().max_quantale)?;
                mult = vec![None; els.len() * els.len()];
                elements = Some(els);
            }
            "order" => {
                for pair in &toks[1..] {
                    let (a, b) = pair.split_once('<').ok_or_else(|| parse_err(line, "expected 'x<y'"))?;
                    order.push((idx(&elements, a)?, idx(&elements, b)?));
                }
            }
            "unit" if toks.len() == 2 => unit = Some(idx(&elements, toks[1])?),
            "mult" => {
                for entry in &toks[1..] {
                    let (lhs, z) = entry.split_once('=').ok_or_else(|| parse_err(line, "expected 'x*y=z'"))?;
                    let (x, y) = lhs.split_once('*').ok_or_else(|| parse_err(line, "expected 'x*y=z'"))?;
                    let (x, y, z) = (idx(&elements, x)?, idx(&elements, y)?, idx(&elements, z)?);
                    let n = elements.as_ref().unwrap().len();
                    for k in [x * n + y, y * n + x] {
                        match mult[k] {
                            Some(old) if old != z => return Err(parse_err(line, "conflicting product")),
                            _ => mult[k] = Some(z),
                        }
                    }
                }
            }
            other => return Err(parse_err(line, &format!("unexpected '{other}' in quantale block"))),
        }
    }
    let elements = elements.ok_or_else(|| parse_err(*l0, "missing 'elements'"))?;
    let unit = unit.ok_or_else(|| parse_err(*l0, "missing 'unit'"))?;
    validate_quantale(&RawQuantale { name, elements, order, unit, mult })
}

fn parse_vcategory(ws: &Workspace, block: &[(usize, Vec<&str>)]) -> Result<VCategory> {
    let (l0, h) = &block[0];
    if h.len() != 4 || h[2] != "over" {
        return Err(parse_err(*l0, "expected 'vcategory <name> over <quantale>'"));
    }
    let q = ws.quantale(h[3])?;
    let mut objects: Option<Vec<String>> = None;
    let mut hom: Vec<Elem> = Vec::new();
    for (line, toks) in &block[1..] {
        let line = *line;
        match toks[0] {
            "objects" => {
                let objs: Vec<String> = toks[1..].iter().map(|s| s.to_string()).collect();
                caps::guard("objects", objs.len(), caps::current().max_objects)?;
                hom = vec![q.bottom(); objs.len() * objs.len()];
                objects = Some(objs);
            }
            "hom" => {
                let objs = objects.as_ref().ok_or_else(|| parse_err(line, "'objects' must come first"))?;
                if toks.len() != 5 || toks[3] != "=" {
                    return Err(parse_err(line, "expected 'hom <x> <y> = <v>'"));
                }
                let ob = |s: &str| objs.iter().position(|o| o == s).ok_or_else(|| parse_err(line, &format!("unknown object '{s}'")));
                let (x, y) = (ob(toks[1])?, ob(toks[2])?);
                let v = q.index_of(toks[4]).ok_or_else(|| parse_err(line, &format!("unknown element '{}'", toks[4])))?;
                hom[x * objs.len() + y] = v;
            }
            other => return Err(parse_err(line, &format!("unexpected '{other}' in vcategory block"))),
        }
    }
    let objects = objects.ok_or_else(|| parse_err(*l0, "missing 'objects'"))?;
    validate_vcategory(q, h[1], objects, hom)
}

fn parse_distributor(ws: &Workspace, block: &[(usize, Vec<&str>)]) -> Result<(String, Distributor)> {
    let (l0, h) = &block[0];
    if h.len() != 6 || h[2] != "from" || h[4] != "to" {
        return Err(parse_err(*l0, "expected 'distributor <name> from <X> to <Y>'"));
    }
    let find = |n: &str| ws.vcategory(n).cloned().ok_or_else(|| parse_err(*l0, &format!("unknown vcategory '{n}'")));
    let (x, y) = (find(h[3])?, find(h[5])?);
    let q = x.quantale().clone();
    let mut mat = vec![q.bottom(); x.len() * y.len()];
    for (line, toks) in &block[1..] {
        let line = *line;
        if toks[0] != "at" || toks.len() != 5 || toks[3] != "=" {
            return Err(parse_err(line, "expected 'at <y> <x> = <v>'"));
        }
        let yi = y.object_index(toks[1]).ok_or_else(|| parse_err(line, &format!("unknown object '{}'", toks[1])))?;
        let xi = x.object_index(toks[2]).ok_or_else(|| parse_err(line, &format!("unknown object '{}'", toks[2])))?;
        let v = q.index_of(toks[4]).ok_or_else(|| parse_err(line, &format!("unknown element '{}'", toks[4])))?;
        mat[yi * x.len() + xi] = v;
    }
    Ok((h[1].to_string(), validate_distributor(&x, &y, mat)?))
}

/// A quantale block that re-parses to an equal quantale, followed by its
/// residuation table as comments.
pub fn print_quantale(q: &Quantale) -> String {
    let mut s = String::new();
    let name = |v: usize| q.element_name(v as Elem);
    writeln!(s, "quantale {}", q.name()).unwrap();
    writeln!(s, "elements {}", q.element_names().join(" ")).unwrap();
    let covers: Vec<String> = q.covers().iter().map(|&(a, b)| format!("{}<{}", name(a as usize), name(b as usize))).collect();
    if !covers.is_empty() {
        writeln!(s, "order {}", covers.join(" ")).unwrap();
    }
    writeln!(s, "unit {}", q.element_name(q.unit())).unwrap();
    for a in q.elements() {
        let row: Vec<String> = q
            .elements()
            .filter(|&b| b >= a)
            .map(|b| format!("{}*{}={}", name(a as usize), name(b as usize), q.element_name(q.mul(a, b))))
            .collect();
        writeln!(s, "mult {}", row.join(" ")).unwrap();
    }
    writeln!(s, "# residuation [v,w], rows v, columns w").unwrap();
    for v in q.elements() {
        let row: Vec<&str> = q.elements().map(|w| q.element_name(q.residuate(v, w))).collect();
        writeln!(s, "#   {}: {}", q.element_name(v), row.join(" ")).unwrap();
    }
    s
}

/// A vcategory block listing every non-bottom hom entry.
pub fn print_vcategory(x: &VCategory) -> String {
    let q = x.quantale();
    let mut s = String::new();
    writeln!(s, "vcategory {} over {}", x.name(), q.name()).unwrap();
    writeln!(s, "objects {}", x.objects().join(" ")).unwrap();
    for a in 0..x.len() {
        for b in 0..x.len() {
            let v = x.hom(a, b);
            if v != q.bottom() {
                writeln!(s, "hom {} {} = {}", x.object_name(a), x.object_name(b), q.element_name(v)).unwrap();
            }
        }
    }
    s
}

/// Like [`print_vcategory`], preceded by the quantale block when it is not a builtin.
pub fn print_vcategory_standalone(x: &VCategory) -> String {
    let q = x.quantale();
    let is_builtin = builtin(q.name()).is_ok_and(|b| b == **q);
    if is_builtin {
        print_vcategory(x)
    } else {
        format!("{}\n{}", print_quantale(q), print_vcategory(x))
    }
}

pub fn print_distributor(name: &str, d: &Distributor) -> String {
    let q = d.quantale();
    let mut s = String::new();
    writeln!(s, "distributor {} from {} to {}", name, d.dom().name(), d.cod().name()).unwrap();
    for y in 0..d.cod().len() {
        for x in 0..d.dom().len() {
            let v = d.at(y, x);
            if v != q.bottom() {
                writeln!(s, "at {} {} = {}", d.cod().object_name(y), d.dom().object_name(x), q.element_name(v)).unwrap();
            }
        }
    }
    s
}

/// The hom matrix as an aligned table.
pub fn hom_table(x: &VCategory) -> String {
    let q = x.quantale();
    let w = x.objects().iter().map(|o| o.len()).chain(q.element_names().iter().map(|e| e.len())).max().unwrap_or(1);
    let mut s = String::new();
    write!(s, "{:w$}", "").unwrap();
    for o in x.objects() {
        write!(s, " {o:>w$}").unwrap();
    }
    s.push('\n');
    for a in 0..x.len() {
        write!(s, "{:>w$}", x.object_name(a)).unwrap();
        for b in 0..x.len() {
            write!(s, " {:>w$}", q.element_name(x.hom(a, b))).unwrap();
        }
        s.push('\n');
    }
    s
}
