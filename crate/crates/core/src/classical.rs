//! Plain finite lattices: exhaustive generation and a classical complete
//! distributivity test, independent of the enriched machinery.

use std::collections::BTreeSet;

/// A finite lattice as a reflexive order matrix; element 0 is bottom, `n-1` top.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lattice {
    pub n: usize,
    pub leq: Vec<bool>,
}

impl Lattice {
    pub fn le(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.n + b]
    }

    fn lub(&self, a: usize, b: usize) -> Option<usize> {
        let ubs: Vec<usize> = (0..self.n).filter(|&u| self.le(a, u) && self.le(b, u)).collect();
        ubs.iter().copied().find(|&u| ubs.iter().all(|&w| self.le(u, w)))
    }

    fn glb(&self, a: usize, b: usize) -> Option<usize> {
        let lbs: Vec<usize> = (0..self.n).filter(|&l| self.le(l, a) && self.le(l, b)).collect();
        lbs.iter().copied().find(|&l| lbs.iter().all(|&w| self.le(w, l)))
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.lub(a, b).expect("lattice")
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.glb(a, b).expect("lattice")
    }

    /// Join of a subset given as a bitmask; the empty join is bottom.
    pub fn join_set(&self, mask: u32) -> usize {
        (0..self.n).filter(|&i| mask >> i & 1 == 1).fold(0, |acc, i| self.join(acc, i))
    }

    /// `x ⋘ y`: whenever `y ≤ ⋁S`, some `s ∈ S` has `x ≤ s`.
    pub fn totally_below(&self, x: usize, y: usize) -> bool {
        (0u32..1 << self.n).all(|s| !self.le(y, self.join_set(s)) || (0..self.n).any(|i| s >> i & 1 == 1 && self.le(x, i)))
    }

    /// Every element is the join of the elements totally below it.
    pub fn is_completely_distributive(&self) -> bool {
        (0..self.n).all(|y| {
            let below = (0..self.n).filter(|&x| self.totally_below(x, y)).fold(0u32, |m, x| m | 1 << x);
            self.join_set(below) == y
        })
    }

    pub fn is_distributive(&self) -> bool {
        let n = self.n;
        (0..n).all(|x| {
            (0..n).all(|y| (0..n).all(|z| self.meet(x, self.join(y, z)) == self.join(self.meet(x, y), self.meet(x, z))))
        })
    }

    /// Canonical form: least order matrix over relabellings of the inner elements.
    fn canonical(&self) -> Vec<bool> {
        let inner: Vec<usize> = (1..self.n.saturating_sub(1)).collect();
        let mut best: Option<Vec<bool>> = None;
        permutations(&inner, &mut |p| {
            let mut relabel: Vec<usize> = (0..self.n).collect();
            for (k, &i) in inner.iter().enumerate() {
                relabel[p[k]] = i;
            }
            let m: Vec<bool> = (0..self.n * self.n).map(|k| self.le(relabel[k / self.n], relabel[k % self.n])).collect();
            if best.as_ref().is_none_or(|b| m < *b) {
                best = Some(m);
            }
        });
        best.unwrap_or_else(|| self.leq.clone())
    }
}

fn permutations(items: &[usize], f: &mut impl FnMut(&[usize])) {
    fn go(v: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
        if k == v.len() {
            f(v);
            return;
        }
        for i in k..v.len() {
            v.swap(k, i);
            go(v, k + 1, f);
            v.swap(k, i);
        }
    }
    let mut v = items.to_vec();
    go(&mut v, 0, f);
}

/// All lattices with exactly `n` elements, one per isomorphism class.
pub fn lattices_of_size(n: usize) -> Vec<Lattice> {
    assert!((1..=7).contains(&n), "lattice generation supports 1..=7 elements");
    if n == 1 {
        return vec![Lattice { n: 1, leq: vec![true] }];
    }
    let k = n - 2;
    // strict relations among inner elements: one bit per ordered pair i != j
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (0..k).filter(move |&j| j != i).map(move |j| (i, j))).collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u64..1 << pairs.len() {
        let rel = |i: usize, j: usize| i == j || pairs.iter().position(|&p| p == (i, j)).is_some_and(|b| mask >> b & 1 == 1);
        // partial order: antisymmetric and transitive as given
        let ok = (0..k).all(|i| {
            (0..k).all(|j| (i == j || !(rel(i, j) && rel(j, i))) && (0..k).all(|l| !(rel(i, j) && rel(j, l)) || rel(i, l)))
        });
        if !ok {
            continue;
        }
        let mut leq = vec![false; n * n];
        for a in 0..n {
            for b in 0..n {
                leq[a * n + b] = a == 0 || b == n - 1 || (a > 0 && b > 0 && a < n - 1 && b < n - 1 && rel(a - 1, b - 1));
            }
        }
        let l = Lattice { n, leq };
        if (0..n).all(|a| (0..n).all(|b| l.lub(a, b).is_some() && l.glb(a, b).is_some())) && seen.insert(l.canonical()) {
            out.push(l);
        }
    }
    out
}

/// All lattices with at most `n` elements.
pub fn lattices_up_to(n: usize) -> Vec<Lattice> {
    (1..=n).flat_map(lattices_of_size).collect()
}
