//! Finite commutative quantales.
//!
//! A quantale is stored by canonical element index (`Elem`); names exist only
//! for I/O. Validation derives and caches the join/meet tables and the
//! residuation `[v, w]`, the right adjoint of `v ⊗ -`.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Canonical index of a quantale element.
pub type Elem = u8;

/// Unvalidated quantale data, as read from a file or assembled in code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawQuantale {
    pub name: String,
    pub elements: Vec<String>,
    /// Generating pairs `x ≤ y`; the reflexive-transitive closure is taken.
    pub order: Vec<(usize, usize)>,
    pub unit: usize,
    /// Row-major `n × n` multiplication table; `None` marks a missing entry.
    pub mult: Vec<Option<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quantale {
    name: String,
    elements: Vec<String>,
    n: usize,
    leq: Vec<bool>,
    join: Vec<Elem>,
    meet: Vec<Elem>,
    mult: Vec<Elem>,
    res: Vec<Elem>,
    bottom: Elem,
    top: Elem,
    unit: Elem,
}

impl Quantale {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.n as Elem
    }

    pub fn element_names(&self) -> &[String] {
        &self.elements
    }

    pub fn element_name(&self, v: Elem) -> &str {
        &self.elements[v as usize]
    }

    pub fn index_of(&self, name: &str) -> Option<Elem> {
        self.elements.iter().position(|e| e == name).map(|i| i as Elem)
    }

    #[inline]
    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.leq[a as usize * self.n + b as usize]
    }

    #[inline]
    pub fn join(&self, a: Elem, b: Elem) -> Elem {
        self.join[a as usize * self.n + b as usize]
    }

    #[inline]
    pub fn meet(&self, a: Elem, b: Elem) -> Elem {
        self.meet[a as usize * self.n + b as usize]
    }

    /// The quantale multiplication `a ⊗ b`.
    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mult[a as usize * self.n + b as usize]
    }

    /// Internal hom `[v, w] = ⋁{u : u ⊗ v ≤ w}`.
    #[inline]
    pub fn residuate(&self, v: Elem, w: Elem) -> Elem {
        self.res[v as usize * self.n + w as usize]
    }

    pub fn bottom(&self) -> Elem {
        self.bottom
    }

    pub fn top(&self) -> Elem {
        self.top
    }

    pub fn unit(&self) -> Elem {
        self.unit
    }

    /// `e = ⊤`.
    pub fn is_integral(&self) -> bool {
        self.unit == self.top
    }

    /// Join of an arbitrary family, folded from bottom.
    pub fn join_all<I: IntoIterator<Item = Elem>>(&self, it: I) -> Elem {
        it.into_iter().fold(self.bottom, |acc, v| self.join(acc, v))
    }

    /// Meet of an arbitrary family, folded from top.
    pub fn meet_all<I: IntoIterator<Item = Elem>>(&self, it: I) -> Elem {
        it.into_iter().fold(self.top, |acc, v| self.meet(acc, v))
    }

    /// Covering pairs of the order, in index order.
    pub fn covers(&self) -> Vec<(Elem, Elem)> {
        let mut out = Vec::new();
        for a in self.elements() {
            for b in self.elements() {
                if a == b || !self.leq(a, b) {
                    continue;
                }
                let between = self
                    .elements()
                    .any(|c| c != a && c != b && self.leq(a, c) && self.leq(c, b));
                if !between {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Back to raw form (covers only, full multiplication table).
    pub fn to_raw(&self) -> RawQuantale {
        RawQuantale {
            name: self.name.clone(),
            elements: self.elements.clone(),
            order: self.covers().into_iter().map(|(a, b)| (a as usize, b as usize)).collect(),
            unit: self.unit as usize,
            mult: self.mult.iter().map(|&v| Some(v as usize)).collect(),
        }
    }

    pub fn renamed(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }
}

/// Validate raw data and derive all tables, reporting the first violated axiom.
pub fn validate_quantale(raw: &RawQuantale) -> Result<Quantale> {
    let n = raw.elements.len();
    if n == 0 {
        return Err(Error::EmptyCarrier);
    }
    if n > Elem::MAX as usize {
        return Err(Error::SizeExceeded { what: "quantale carrier".into(), needed: n, cap: Elem::MAX as usize });
    }
    for (i, a) in raw.elements.iter().enumerate() {
        if raw.elements[..i].contains(a) {
            return Err(Error::DuplicateName(a.clone()));
        }
    }
    if raw.unit >= n {
        return Err(Error::BadElement(raw.unit));
    }
    if raw.mult.len() != n * n {
        return Err(Error::BadShape { expected: n * n, got: raw.mult.len() });
    }

    let mut leq = vec![false; n * n];
    for i in 0..n {
        leq[i * n + i] = true;
    }
    for &(a, b) in &raw.order {
        if a >= n || b >= n {
            return Err(Error::BadElement(a.max(b)));
        }
        leq[a * n + b] = true;
    }
    // Warshall closure
    for k in 0..n {
        for i in 0..n {
            if leq[i * n + k] {
                for j in 0..n {
                    if leq[k * n + j] {
                        leq[i * n + j] = true;
                    }
                }
            }
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if leq[i * n + j] && leq[j * n + i] {
                return Err(Error::NotAPartialOrder(i, j));
            }
        }
    }

    let mut join = vec![0 as Elem; n * n];
    let mut meet = vec![0 as Elem; n * n];
    for a in 0..n {
        for b in 0..n {
            let ub: Vec<usize> = (0..n).filter(|&c| leq[a * n + c] && leq[b * n + c]).collect();
            let lub = ub.iter().copied().find(|&c| ub.iter().all(|&d| leq[c * n + d]));
            let lb: Vec<usize> = (0..n).filter(|&c| leq[c * n + a] && leq[c * n + b]).collect();
            let glb = lb.iter().copied().find(|&c| lb.iter().all(|&d| leq[d * n + c]));
            match (lub, glb) {
                (Some(j), Some(m)) => {
                    join[a * n + b] = j as Elem;
                    meet[a * n + b] = m as Elem;
                }
                _ => return Err(Error::NotALattice(a, b)),
            }
        }
    }
    let bottom = (0..n).find(|&c| (0..n).all(|d| leq[c * n + d])).expect("finite lattice has a bottom");
    let top = (0..n).find(|&c| (0..n).all(|d| leq[d * n + c])).expect("finite lattice has a top");

    let mut mult = vec![0 as Elem; n * n];
    for a in 0..n {
        for b in 0..n {
            match raw.mult[a * n + b] {
                Some(v) if v < n => mult[a * n + b] = v as Elem,
                Some(v) => return Err(Error::BadElement(v)),
                None => return Err(Error::MultIncomplete(a, b)),
            }
        }
    }
    let m = |a: usize, b: usize| mult[a * n + b] as usize;
    for a in 0..n {
        for b in (a + 1)..n {
            if m(a, b) != m(b, a) {
                return Err(Error::NotCommutative(a, b));
            }
        }
    }
    let e = raw.unit;
    for v in 0..n {
        if m(e, v) != v {
            return Err(Error::WrongUnit(v));
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if m(m(a, b), c) != m(a, m(b, c)) {
                    return Err(Error::NotAssociative(a, b, c));
                }
            }
        }
    }
    for v in 0..n {
        if m(v, bottom) != bottom {
            return Err(Error::NotJoinPreserving { v, pair: None });
        }
        for a in 0..n {
            for b in (a + 1)..n {
                let lhs = m(v, join[a * n + b] as usize);
                let rhs = join[m(v, a) * n + m(v, b)] as usize;
                if lhs != rhs {
                    return Err(Error::NotJoinPreserving { v, pair: Some((a, b)) });
                }
            }
        }
    }

    let mut res = vec![0 as Elem; n * n];
    for v in 0..n {
        for w in 0..n {
            let mut r = bottom;
            for u in 0..n {
                if leq[m(u, v) * n + w] {
                    r = join[r * n + u] as usize;
                }
            }
            res[v * n + w] = r as Elem;
        }
    }
    let q = Quantale {
        name: raw.name.clone(),
        elements: raw.elements.clone(),
        n,
        leq,
        join,
        meet,
        mult,
        res,
        bottom: bottom as Elem,
        top: top as Elem,
        unit: e as Elem,
    };
    // adjunction holds whenever ⊗ preserves joins; keep the check as a guard
    for u in q.elements() {
        for v in q.elements() {
            for w in q.elements() {
                if q.leq(q.mul(u, v), w) != q.leq(u, q.residuate(v, w)) {
                    return Err(Error::Invariant(format!("residuation fails at ({u},{v},{w})")));
                }
            }
        }
    }
    Ok(q)
}

/// `residuate` as a free function, mirroring the operation name.
pub fn residuate(q: &Quantale, v: Elem, w: Elem) -> Elem {
    q.residuate(v, w)
}

fn chain_raw(name: &str, names: &[&str], unit: usize, mult: &[usize]) -> RawQuantale {
    RawQuantale {
        name: name.to_string(),
        elements: names.iter().map(|s| s.to_string()).collect(),
        order: (1..names.len()).map(|i| (i - 1, i)).collect(),
        unit,
        mult: mult.iter().map(|&v| Some(v)).collect(),
    }
}

/// Every multiplication table on the given ordered carrier that passes
/// `keep` and validates as a quantale with the given unit.
pub fn search_quantale_tables(
    name: &str,
    elements: &[&str],
    order: &[(usize, usize)],
    unit: usize,
    keep: impl Fn(&[usize]) -> bool,
) -> Vec<Quantale> {
    let n = elements.len();
    let cells = n * n;
    let total = n.pow(cells as u32);
    let mut out = Vec::new();
    let mut table = vec![0usize; cells];
    for code in 0..total {
        let mut c = code;
        for cell in table.iter_mut() {
            *cell = c % n;
            c /= n;
        }
        if !keep(&table) {
            continue;
        }
        let raw = RawQuantale {
            name: name.to_string(),
            elements: elements.iter().map(|s| s.to_string()).collect(),
            order: order.to_vec(),
            unit,
            mult: table.iter().map(|&v| Some(v)).collect(),
        };
        if let Ok(q) = validate_quantale(&raw) {
            out.push(q);
        }
    }
    out
}

fn sugihara3() -> Result<Quantale> {
    static CACHE: OnceLock<std::result::Result<Quantale, Error>> = OnceLock::new();
    CACHE
        .get_or_init(|| {
            let found = search_quantale_tables("sugihara3", &["0", "a", "1"], &[(0, 1), (1, 2)], 1, |t| {
                (0..3).all(|v| t[v * 3 + v] == v)
            });
            match found.len() {
                1 => Ok(found.into_iter().next().unwrap()),
                k => Err(Error::Invariant(format!("expected exactly one idempotent quantale with unit a on 3, found {k}"))),
            }
        })
        .clone()
}

/// A finite commutative monoid given by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monoid {
    pub label: String,
    pub elements: Vec<String>,
    pub table: Vec<usize>,
    pub unit: usize,
}

impl Monoid {
    /// `Z<n>`: integers mod n under addition; `T<n>`: {0..n-1} under addition capped at n-1.
    pub fn parse(desc: &str) -> Result<Monoid> {
        let bad = || Error::MonoidSpecInvalid(desc.to_string());
        let (kind, rest) = desc.split_at(desc.chars().next().map(|c| c.len_utf8()).ok_or_else(bad)?);
        let n: usize = rest.parse().map_err(|_| bad())?;
        if n == 0 || n > 4 {
            return Err(Error::MonoidSpecInvalid(format!("{desc}: order must be in 1..=4")));
        }
        let op: fn(usize, usize, usize) -> usize = match kind {
            "Z" => |a, b, n| (a + b) % n,
            "T" => |a, b, n| (a + b).min(n - 1),
            _ => return Err(bad()),
        };
        let table = (0..n * n).map(|k| op(k / n, k % n, n)).collect();
        let m = Monoid { label: desc.to_string(), elements: (0..n).map(|i| i.to_string()).collect(), table, unit: 0 };
        m.check()?;
        Ok(m)
    }

    pub fn check(&self) -> Result<()> {
        let n = self.elements.len();
        let bad = |m: &str| Err(Error::MonoidSpecInvalid(format!("{}: {m}", self.label)));
        if n == 0 || self.table.len() != n * n || self.unit >= n || self.table.iter().any(|&v| v >= n) {
            return bad("malformed table");
        }
        let t = |a: usize, b: usize| self.table[a * n + b];
        for a in 0..n {
            if t(self.unit, a) != a {
                return bad("unit law fails");
            }
            for b in 0..n {
                if t(a, b) != t(b, a) {
                    return bad("not commutative");
                }
                for c in 0..n {
                    if t(t(a, b), c) != t(a, t(b, c)) {
                        return bad("not associative");
                    }
                }
            }
        }
        Ok(())
    }
}

/// The powerset quantale of a finite commutative monoid: subsets ordered by
/// inclusion, `S ⊗ T = {s·t}`, unit `{1}`.
pub fn powerset_monoid(m: &Monoid) -> Result<Quantale> {
    m.check()?;
    let k = m.elements.len();
    if k > 4 {
        return Err(Error::MonoidSpecInvalid(format!("{}: carrier too large for a powerset quantale", m.label)));
    }
    let n = 1usize << k;
    let name_of = |s: usize| {
        let inner: Vec<&str> = (0..k).filter(|i| s >> i & 1 == 1).map(|i| m.elements[i].as_str()).collect();
        format!("{{{}}}", inner.join(","))
    };
    let mut order = Vec::new();
    for s in 0..n {
        for t in 0..n {
            if s != t && s & t == s {
                order.push((s, t));
            }
        }
    }
    let mut mult = Vec::with_capacity(n * n);
    for s in 0..n {
        for t in 0..n {
            let mut r = 0usize;
            for a in (0..k).filter(|i| s >> i & 1 == 1) {
                for b in (0..k).filter(|i| t >> i & 1 == 1) {
                    r |= 1 << m.table[a * k + b];
                }
            }
            mult.push(Some(r));
        }
    }
    validate_quantale(&RawQuantale {
        name: format!("powerset_monoid({})", m.label),
        elements: (0..n).map(name_of).collect(),
        order,
        unit: 1 << m.unit,
        mult,
    })
}

pub const BUILTIN_NAMES: [&str; 6] = ["two", "heyting3", "sugihara3", "lukasiewicz3", "r422", "powerset_monoid(Z2)"];

/// Builtin quantales by name.
pub fn builtin(name: &str) -> Result<Quantale> {
    match name {
        "two" => validate_quantale(&chain_raw("two", &["0", "1"], 1, &[0, 0, 0, 1])),
        "heyting3" => validate_quantale(&chain_raw("heyting3", &["0", "a", "1"], 2, &[0, 0, 0, 0, 1, 1, 0, 1, 2])),
        "lukasiewicz3" => {
            // reading 0, a, 1 as 0, 1/2, 1: v ⊗ w = max(0, v + w - 1)
            let t: Vec<usize> = (0..9usize).map(|k| (k / 3 + k % 3).saturating_sub(2)).collect();
            validate_quantale(&chain_raw("lukasiewicz3", &["0", "a", "1"], 2, &t))
        }
        "sugihara3" => sugihara3(),
        "r422" => {
            // ⊥ < e, a < ⊤; a⊗a = e, a⊗⊤ = ⊤; ⊥, e, ⊤ idempotent
            let (b, e, a, t) = (0, 1, 2, 3);
            let mut mult = vec![None; 16];
            for x in 0..4 {
                for y in 0..4 {
                    let v = if x == b || y == b {
                        b
                    } else if x == e {
                        y
                    } else if y == e {
                        x
                    } else if x == a && y == a {
                        e
                    } else {
                        t
                    };
                    mult[x * 4 + y] = Some(v);
                }
            }
            validate_quantale(&RawQuantale {
                name: "r422".into(),
                elements: ["bot", "e", "a", "top"].iter().map(|s| s.to_string()).collect(),
                order: vec![(b, e), (b, a), (e, t), (a, t)],
                unit: e,
                mult,
            })
        }
        _ => {
            if let Some(desc) = name.strip_prefix("powerset_monoid(").and_then(|r| r.strip_suffix(')')) {
                return powerset_monoid(&Monoid::parse(desc)?);
            }
            Err(Error::UnknownBuiltin(name.to_string()))
        }
    }
}
