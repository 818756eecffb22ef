//! Finite V-categories: a set of objects with a hom matrix valued in a quantale.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quantale::{Elem, Quantale};

#[derive(Clone)]
pub struct VCategory {
    quantale: Arc<Quantale>,
    name: String,
    objects: Vec<String>,
    hom: Vec<Elem>,
}

impl fmt::Debug for VCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VCategory")
            .field("name", &self.name)
            .field("over", &self.quantale.name())
            .field("objects", &self.objects)
            .field("hom", &self.hom)
            .finish()
    }
}

/// Structural equality: same quantale, same size, same hom matrix. Names are ignored.
impl PartialEq for VCategory {
    fn eq(&self, other: &Self) -> bool {
        same_quantale(&self.quantale, &other.quantale) && self.hom == other.hom && self.len() == other.len()
    }
}

impl Eq for VCategory {}

pub fn same_quantale(a: &Arc<Quantale>, b: &Arc<Quantale>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Validate a hom matrix (row-major, `hom[x * m + x']`) as a V-category.
pub fn validate_vcategory(
    quantale: Arc<Quantale>,
    name: &str,
    objects: Vec<String>,
    hom: Vec<Elem>,
) -> Result<VCategory> {
    let m = objects.len();
    if hom.len() != m * m {
        return Err(Error::BadShape { expected: m * m, got: hom.len() });
    }
    for (i, o) in objects.iter().enumerate() {
        if objects[..i].contains(o) {
            return Err(Error::DuplicateName(o.clone()));
        }
    }
    if let Some(k) = hom.iter().position(|&v| v as usize >= quantale.len()) {
        return Err(Error::BadElement(k));
    }
    let q = &quantale;
    for x in 0..m {
        if !q.leq(q.unit(), hom[x * m + x]) {
            return Err(Error::ReflexivityFail(x));
        }
    }
    for x in 0..m {
        for y in 0..m {
            let a = hom[x * m + y];
            for z in 0..m {
                if !q.leq(q.mul(a, hom[y * m + z]), hom[x * m + z]) {
                    return Err(Error::TransitivityFail(x, y, z));
                }
            }
        }
    }
    Ok(VCategory { quantale, name: name.to_string(), objects, hom })
}

impl VCategory {
    /// For constructions that are valid by construction (presheaf categories,
    /// tensors, subcategories). Debug builds still run the axiom check on small inputs.
    pub(crate) fn from_parts(quantale: Arc<Quantale>, name: String, objects: Vec<String>, hom: Vec<Elem>) -> Self {
        debug_assert_eq!(hom.len(), objects.len() * objects.len());
        let c = VCategory { quantale, name, objects, hom };
        #[cfg(debug_assertions)]
        if c.len() <= 40 {
            let checked = validate_vcategory(c.quantale.clone(), &c.name, c.objects.clone(), c.hom.clone());
            debug_assert!(checked.is_ok(), "{}: {:?}", c.name, checked.err());
        }
        c
    }

    pub fn quantale(&self) -> &Arc<Quantale> {
        &self.quantale
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn object_name(&self, x: usize) -> &str {
        &self.objects[x]
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    #[inline]
    pub fn hom(&self, x: usize, y: usize) -> Elem {
        self.hom[x * self.objects.len() + y]
    }

    pub fn hom_matrix(&self) -> &[Elem] {
        &self.hom
    }

    /// `X(x, -)`.
    pub fn row(&self, x: usize) -> &[Elem] {
        let m = self.len();
        &self.hom[x * m..(x + 1) * m]
    }

    /// `X(-, x)`, the representable presheaf at `x`.
    pub fn column(&self, x: usize) -> Vec<Elem> {
        (0..self.len()).map(|y| self.hom(y, x)).collect()
    }

    /// `x ≤ x'` iff `e ≤ X(x, x')`.
    pub fn le(&self, x: usize, y: usize) -> bool {
        self.quantale.leq(self.quantale.unit(), self.hom(x, y))
    }

    pub fn is_iso(&self, x: usize, y: usize) -> bool {
        self.le(x, y) && self.le(y, x)
    }

    /// Object with `X(b, -) = ⊤`-style least position in the underlying order, if unique.
    pub fn least_object(&self) -> Option<usize> {
        (0..self.len()).find(|&b| (0..self.len()).all(|x| self.le(b, x)))
    }

    pub fn greatest_object(&self) -> Option<usize> {
        (0..self.len()).find(|&t| (0..self.len()).all(|x| self.le(x, t)))
    }
}

/// The underlying preorder as a row-major boolean matrix.
pub fn underlying_order(x: &VCategory) -> Vec<bool> {
    let m = x.len();
    (0..m * m).map(|k| x.le(k / m, k % m)).collect()
}

/// All pairs `i < j` of distinct but isomorphic objects.
pub fn separation_witnesses(x: &VCategory) -> Vec<(usize, usize)> {
    let m = x.len();
    let mut out = Vec::new();
    for i in 0..m {
        for j in (i + 1)..m {
            if x.is_iso(i, j) {
                out.push((i, j));
            }
        }
    }
    out
}

pub fn is_separated(x: &VCategory) -> bool {
    let m = x.len();
    (0..m).all(|i| ((i + 1)..m).all(|j| !x.is_iso(i, j)))
}

/// `Err(NotSeparated)` with the first witness pair.
pub fn require_separated(x: &VCategory) -> Result<()> {
    match separation_witnesses(x).first() {
        Some(&(i, j)) => Err(Error::NotSeparated(i, j)),
        None => Ok(()),
    }
}

pub fn opposite(x: &VCategory) -> VCategory {
    let m = x.len();
    let hom = (0..m * m).map(|k| x.hom(k % m, k / m)).collect();
    VCategory {
        quantale: x.quantale.clone(),
        name: format!("{}^op", x.name),
        objects: x.objects.clone(),
        hom,
    }
}

/// Index of the pair `(a, b)` in `tensor_vcat(X, Y)`.
#[inline]
pub fn pair_index(ny: usize, a: usize, b: usize) -> usize {
    a * ny + b
}

/// `(X ⊗ Y)((x,y),(x',y')) = X(x,x') ⊗ Y(y,y')`; objects in lexicographic order.
pub fn tensor_vcat(x: &VCategory, y: &VCategory) -> Result<VCategory> {
    if !same_quantale(&x.quantale, &y.quantale) {
        return Err(Error::QuantaleMismatch);
    }
    let q = &x.quantale;
    let (mx, my) = (x.len(), y.len());
    let n = mx * my;
    let mut objects = Vec::with_capacity(n);
    for a in 0..mx {
        for b in 0..my {
            objects.push(format!("({},{})", x.objects[a], y.objects[b]));
        }
    }
    let mut hom = Vec::with_capacity(n * n);
    for a in 0..mx {
        for b in 0..my {
            for a2 in 0..mx {
                for b2 in 0..my {
                    hom.push(q.mul(x.hom(a, a2), y.hom(b, b2)));
                }
            }
        }
    }
    Ok(VCategory { quantale: q.clone(), name: format!("{}*{}", x.name, y.name), objects, hom })
}

/// `e` on the diagonal, `⊥` elsewhere.
pub fn discrete(q: &Arc<Quantale>, names: &[&str]) -> VCategory {
    let m = names.len();
    let hom = (0..m * m).map(|k| if k / m == k % m { q.unit() } else { q.bottom() }).collect();
    VCategory::from_parts(q.clone(), "discrete".into(), names.iter().map(|s| s.to_string()).collect(), hom)
}

/// The unit V-category `𝟙` (one object, hom `e`).
pub fn unit_vcat(q: &Arc<Quantale>) -> VCategory {
    VCategory::from_parts(q.clone(), "one".into(), vec!["0".into()], vec![q.unit()])
}

/// The terminal V-category `𝟙_⊤` (one object, hom `⊤`).
pub fn terminal_vcat(q: &Arc<Quantale>) -> VCategory {
    VCategory::from_parts(q.clone(), "one_top".into(), vec!["0".into()], vec![q.top()])
}

/// The quantale as a V-category over itself, `V(v, w) = [v, w]`.
pub fn quantale_vcat(q: &Arc<Quantale>) -> VCategory {
    let n = q.len();
    let hom = (0..n * n).map(|k| q.residuate(k as Elem / n as Elem, (k % n) as Elem)).collect();
    VCategory::from_parts(q.clone(), "V".into(), q.element_names().to_vec(), hom)
}

/// A preorder viewed as a V-category: `e` where `x ≤ y`, `⊥` elsewhere.
pub fn from_order(q: &Arc<Quantale>, name: &str, names: &[&str], leq: impl Fn(usize, usize) -> bool) -> Result<VCategory> {
    let m = names.len();
    let hom = (0..m * m).map(|k| if leq(k / m, k % m) { q.unit() } else { q.bottom() }).collect();
    validate_vcategory(q.clone(), name, names.iter().map(|s| s.to_string()).collect(), hom)
}

/// The full subcategory on `objs` (in the given order).
pub fn full_subcategory(x: &VCategory, objs: &[usize], name: &str) -> VCategory {
    let mut hom = Vec::with_capacity(objs.len() * objs.len());
    for &a in objs {
        for &b in objs {
            hom.push(x.hom(a, b));
        }
    }
    VCategory {
        quantale: x.quantale.clone(),
        name: name.to_string(),
        objects: objs.iter().map(|&a| x.objects[a].clone()).collect(),
        hom,
    }
}

/// Quotient by mutual `e`-reachability, keeping the least-index representative
/// of each class. Returns the quotient and the class map `object -> class`.
pub fn separated_reflection(x: &VCategory) -> Result<(VCategory, Vec<usize>)> {
    let m = x.len();
    let mut class = vec![usize::MAX; m];
    let mut reps = Vec::new();
    for i in 0..m {
        if class[i] != usize::MAX {
            continue;
        }
        let c = reps.len();
        reps.push(i);
        for (j, cl) in class.iter_mut().enumerate().skip(i) {
            if *cl == usize::MAX && x.is_iso(i, j) {
                *cl = c;
            }
        }
    }
    // hom must be constant on classes
    for a in 0..m {
        for b in 0..m {
            if x.hom(a, b) != x.hom(reps[class[a]], reps[class[b]]) {
                return Err(Error::Invariant(format!("hom not constant on classes at ({a},{b})")));
            }
        }
    }
    let q = full_subcategory(x, &reps, &format!("{}/~", x.name));
    Ok((q, class))
}

/// Every V-category on the objects `0..n`, in lexicographic order of hom matrices.
pub fn all_vcategories(q: &Arc<Quantale>, n: usize) -> Result<Vec<VCategory>> {
    let total = q.len().checked_pow((n * n) as u32).unwrap_or(usize::MAX);
    crate::caps::guard("candidate hom matrices", total, crate::caps::current().max_presheaves)?;
    let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let mut out = Vec::new();
    for_each_vector(q.len(), n * n, |hom| {
        if let Ok(x) = validate_vcategory(q.clone(), &format!("x{}", out.len()), names.clone(), hom.to_vec()) {
            out.push(x);
        }
    });
    Ok(out)
}

/// Call `f` on every vector in `0..base` of length `len`, lexicographically.
pub(crate) fn for_each_vector(base: usize, len: usize, mut f: impl FnMut(&[Elem])) {
    let mut v = vec![0 as Elem; len];
    loop {
        f(&v);
        let mut i = len;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if (v[i] as usize) + 1 < base {
                v[i] += 1;
                break;
            }
            v[i] = 0;
        }
    }
}

/// A bijection `f` with `X(a, b) = Y(f a, f b)` for all `a, b`, if one exists.
pub fn find_isomorphism(x: &VCategory, y: &VCategory) -> Option<Vec<usize>> {
    if x.len() != y.len() || !same_quantale(&x.quantale, &y.quantale) {
        return None;
    }
    let m = x.len();
    let sig = |c: &VCategory, a: usize| {
        let mut row: Vec<Elem> = c.row(a).to_vec();
        let mut col = c.column(a);
        row.sort_unstable();
        col.sort_unstable();
        (c.hom(a, a), row, col)
    };
    let sx: Vec<_> = (0..m).map(|a| sig(x, a)).collect();
    let sy: Vec<_> = (0..m).map(|a| sig(y, a)).collect();
    let cands: Vec<Vec<usize>> = (0..m).map(|a| (0..m).filter(|&b| sx[a] == sy[b]).collect()).collect();
    if cands.iter().any(|c| c.is_empty()) {
        return None;
    }
    // most constrained first
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by_key(|&a| cands[a].len());
    let mut img = vec![usize::MAX; m];
    let mut used = vec![false; m];

    fn go(
        k: usize,
        order: &[usize],
        cands: &[Vec<usize>],
        x: &VCategory,
        y: &VCategory,
        img: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if k == order.len() {
            return true;
        }
        let a = order[k];
        for &b in &cands[a] {
            if used[b] {
                continue;
            }
            let ok = order[..k].iter().all(|&a2| {
                x.hom(a, a2) == y.hom(b, img[a2]) && x.hom(a2, a) == y.hom(img[a2], b)
            });
            if !ok {
                continue;
            }
            img[a] = b;
            used[b] = true;
            if go(k + 1, order, cands, x, y, img, used) {
                return true;
            }
            used[b] = false;
            img[a] = usize::MAX;
        }
        false
    }

    go(0, &order, &cands, x, y, &mut img, &mut used).then_some(img)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantale::builtin;

    fn q(name: &str) -> Arc<Quantale> {
        Arc::new(builtin(name).unwrap())
    }

    #[test]
    fn quantale_over_itself_is_valid_and_separated() {
        for name in crate::quantale::BUILTIN_NAMES {
            let v = quantale_vcat(&q(name));
            validate_vcategory(v.quantale().clone(), "V", v.objects().to_vec(), v.hom_matrix().to_vec()).unwrap();
            assert!(is_separated(&v));
        }
    }

    #[test]
    fn lukasiewicz_order_is_chain_order() {
        let v = quantale_vcat(&q("lukasiewicz3"));
        let ord = underlying_order(&v);
        for a in 0..3 {
            for b in 0..3 {
                assert_eq!(ord[a * 3 + b], a <= b);
            }
        }
    }

    #[test]
    fn discrete_and_indiscrete() {
        let two = q("two");
        let d = discrete(&two, &["p", "q"]);
        assert_eq!(underlying_order(&d), vec![true, false, false, true]);
        assert!(is_separated(&d));
        assert!(discrete(&two, &[]).is_empty());
        assert_eq!(discrete(&two, &["x"]), unit_vcat(&two));

        let ind = validate_vcategory(two.clone(), "ind", vec!["p".into(), "q".into()], vec![1; 4]).unwrap();
        assert!(!is_separated(&ind));
        let (r, cls) = separated_reflection(&ind).unwrap();
        assert_eq!(r, unit_vcat(&two));
        assert_eq!(cls, vec![0, 0]);
    }

    #[test]
    fn reflexivity_failure() {
        let two = q("two");
        assert_eq!(
            validate_vcategory(two, "x", vec!["p".into()], vec![0]).unwrap_err(),
            Error::ReflexivityFail(0)
        );
    }

    #[test]
    fn transitivity_failure() {
        let two = q("two");
        // p ≤ q ≤ r but not p ≤ r
        let hom = vec![1, 1, 0, 0, 1, 1, 0, 0, 1];
        let err = validate_vcategory(two, "x", vec!["p".into(), "q".into(), "r".into()], hom).unwrap_err();
        assert_eq!(err, Error::TransitivityFail(0, 1, 2));
    }

    #[test]
    fn r422_tensor_is_not_separated() {
        let r = q("r422");
        let v = quantale_vcat(&r);
        let vv = tensor_vcat(&v, &v).unwrap();
        assert_eq!(vv.len(), 16);
        let (e, a) = (r.index_of("e").unwrap() as usize, r.index_of("a").unwrap() as usize);
        let ae = pair_index(4, a, e);
        let ea = pair_index(4, e, a);
        assert_eq!(vv.hom(ae, ea), r.unit());
        assert_eq!(vv.hom(ea, ae), r.unit());
        assert!(separation_witnesses(&vv).contains(&(ea.min(ae), ea.max(ae))));
        let (refl, cls) = separated_reflection(&vv).unwrap();
        assert!(is_separated(&refl));
        assert_eq!(cls[ae], cls[ea]);
        let (again, _) = separated_reflection(&refl).unwrap();
        assert_eq!(again, refl);
    }

    #[test]
    fn opposite_involutive_and_transposes_order() {
        let v = quantale_vcat(&q("heyting3"));
        assert_eq!(opposite(&opposite(&v)), v);
        let o = underlying_order(&v);
        let oo = underlying_order(&opposite(&v));
        for a in 0..3 {
            for b in 0..3 {
                assert_eq!(o[a * 3 + b], oo[b * 3 + a]);
            }
        }
        for name in crate::quantale::BUILTIN_NAMES {
            let v = quantale_vcat(&q(name));
            assert_eq!(is_separated(&v), is_separated(&opposite(&v)));
        }
    }

    #[test]
    fn tensor_with_unit_is_identity_up_to_renaming() {
        let v = quantale_vcat(&q("lukasiewicz3"));
        let one = unit_vcat(v.quantale());
        let t = tensor_vcat(&one, &v).unwrap();
        assert_eq!(t, v);
        assert_eq!(tensor_vcat(&v, &v).unwrap().len(), 9);
    }

    #[test]
    fn isomorphism_search() {
        let two = q("two");
        let chain = from_order(&two, "c", &["a", "b", "c"], |x, y| x <= y).unwrap();
        let rev = from_order(&two, "r", &["a", "b", "c"], |x, y| x >= y).unwrap();
        assert_eq!(find_isomorphism(&chain, &rev), Some(vec![2, 1, 0]));
        let disc = discrete(&two, &["a", "b", "c"]);
        assert_eq!(find_isomorphism(&chain, &disc), None);
    }
}
