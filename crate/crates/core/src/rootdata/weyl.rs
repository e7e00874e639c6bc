//! Finite groups acting on root coordinates.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use num_traits::Zero;

use super::RootDatum;
use crate::error::{Error, Result};
use crate::linalg::{q, QMatrix, Q};

/// Small square integer matrix (used for group elements and involutions).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMat {
    n: usize,
    data: Vec<i64>,
}

impl IntMat {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![0; n * n];
        for i in 0..n {
            data[i * n + i] = 1;
        }
        IntMat { n, data }
    }

    pub fn from_flat(n: usize, data: Vec<i64>) -> Self {
        assert_eq!(data.len(), n * n);
        IntMat { n, data }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            assert_eq!(r.len(), n, "matrix must be square");
            data.extend_from_slice(r);
        }
        IntMat { n, data }
    }

    pub fn from_q(m: &QMatrix) -> Option<Self> {
        if !m.is_square() {
            return None;
        }
        Some(IntMat {
            n: m.rows(),
            data: m.to_i64()?,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.data
            .chunks(self.n.max(1))
            .map(|c| c.to_vec())
            .take(self.n)
            .collect()
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| {
                let row = &self.data[i * self.n..(i + 1) * self.n];
                row.iter().zip(v).fold(0i64, |acc, (a, b)| {
                    acc.checked_add(a.checked_mul(*b).expect("overflow"))
                        .expect("overflow")
                })
            })
            .collect()
    }

    pub fn apply_q(&self, v: &[Q]) -> Vec<Q> {
        self.to_q().mul_vec(v)
    }

    pub fn mul(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut data = vec![0i64; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let t = a.checked_mul(other.data[k * n + j]).expect("overflow");
                    data[i * n + j] = data[i * n + j].checked_add(t).expect("overflow");
                }
            }
        }
        IntMat { n, data }
    }

    pub fn neg(&self) -> IntMat {
        IntMat {
            n: self.n,
            data: self.data.iter().map(|x| -x).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == IntMat::identity(self.n)
    }

    pub fn to_q(&self) -> QMatrix {
        QMatrix::from_i64_square(self.n, &self.data)
    }

    /// Multiplicative order, if it is at most `limit`.
    pub fn order(&self, limit: usize) -> Option<usize> {
        let mut p = self.clone();
        for k in 1..=limit {
            if p.is_identity() {
                return Some(k);
            }
            p = p.mul(self);
        }
        None
    }
}

/// Reflection in root `i`, `v -> v - <v, alpha^vee> alpha`, on root coordinates.
pub fn reflection_matrix(d: &RootDatum, i: usize) -> IntMat {
    let r = d.rank();
    let alpha = d.root_q(i);
    let coroot = d.coroot(i);
    // <e_j, alpha^vee> for each basis vector e_j
    let pair = d.form().mul_vec(&coroot);
    let mut m = IntMat::identity(r);
    for row in 0..r {
        for col in 0..r {
            let v = q(m.get(row, col)) - &alpha[row] * &pair[col];
            assert!(v.is_integer(), "reflection is not integral");
            m.set(row, col, v.to_integer().try_into().expect("entry fits"));
        }
    }
    m
}

/// A root-permuting linear map, stored by the images of the simple roots.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylElement {
    images: Box<[u16]>,
}

impl WeylElement {
    pub fn identity(d: &RootDatum) -> Self {
        let images = (0..d.rank())
            .map(|j| {
                let mut e = vec![0i64; d.rank()];
                e[j] = 1;
                d.index_of(&e).expect("simple root") as u16
            })
            .collect();
        WeylElement { images }
    }

    pub fn from_matrix(d: &RootDatum, m: &IntMat) -> Option<Self> {
        if m.dim() != d.rank() {
            return None;
        }
        let images = (0..d.rank())
            .map(|j| {
                let mut e = vec![0i64; d.rank()];
                e[j] = 1;
                d.index_of(&m.apply(&e)).map(|x| x as u16)
            })
            .collect::<Option<Box<[u16]>>>()?;
        Some(WeylElement { images })
    }

    /// Indices of the images of the simple roots; this is the hashing fingerprint.
    pub fn fingerprint(&self) -> &[u16] {
        &self.images
    }

    pub fn matrix(&self, d: &RootDatum) -> IntMat {
        let r = d.rank();
        let mut m = IntMat::identity(r);
        for (j, &img) in self.images.iter().enumerate() {
            for (i, &x) in d.root(img as usize).iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    }

    pub fn apply_vec(&self, d: &RootDatum, v: &[i64]) -> Vec<i64> {
        let mut out = vec![0i64; d.rank()];
        for (j, &c) in v.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (o, &x) in out.iter_mut().zip(d.root(self.images[j] as usize)) {
                *o += c * x;
            }
        }
        out
    }

    pub fn apply_q(&self, d: &RootDatum, v: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::zero(); d.rank()];
        for (j, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, &x) in out.iter_mut().zip(d.root(self.images[j] as usize)) {
                if x != 0 {
                    *o += c * q(x);
                }
            }
        }
        out
    }

    /// Index of the image of root `i`.
    pub fn apply_root(&self, d: &RootDatum, i: usize) -> usize {
        d.index_of(&self.apply_vec(d, d.root(i)))
            .expect("group elements permute roots")
    }

    /// `self * other`, i.e. apply `other` first.
    pub fn compose(&self, d: &RootDatum, other: &WeylElement) -> WeylElement {
        let images = other
            .images
            .iter()
            .map(|&i| self.apply_root(d, i as usize) as u16)
            .collect();
        WeylElement { images }
    }

    pub fn root_permutation(&self, d: &RootDatum) -> Vec<usize> {
        (0..d.num_roots()).map(|i| self.apply_root(d, i)).collect()
    }

    pub fn is_identity(&self, d: &RootDatum) -> bool {
        *self == WeylElement::identity(d)
    }
}

/// A finite group of root-permuting integer matrices, exhaustively enumerated.
#[derive(Clone, Debug)]
pub struct WeylGroup {
    datum: Arc<RootDatum>,
    generators: Vec<WeylElement>,
    elements: Vec<WeylElement>,
    lookup: HashMap<WeylElement, usize>,
}

/// Breadth-first closure of `gens`, failing once more than `cap` elements are found.
pub fn generate_group(d: &RootDatum, gens: Vec<IntMat>, cap: usize) -> Result<WeylGroup> {
    let datum = Arc::new(d.clone());
    let mut els = Vec::with_capacity(gens.len());
    for (k, g) in gens.iter().enumerate() {
        if !d.permutes_roots(g) {
            return Err(Error::invalid(format!(
                "generator {k} does not permute the roots"
            )));
        }
        els.push(WeylElement::from_matrix(d, g).expect("checked above"));
    }
    WeylGroup::generate(datum, els, cap)
}

impl WeylGroup {
    pub fn generate(
        datum: Arc<RootDatum>,
        generators: Vec<WeylElement>,
        cap: usize,
    ) -> Result<WeylGroup> {
        let cap = cap.max(1);
        let d = &*datum;
        let id = WeylElement::identity(d);
        let mut elements = vec![id.clone()];
        let mut lookup = HashMap::new();
        lookup.insert(id, 0usize);
        let mut head = 0;
        while head < elements.len() {
            let e = elements[head].clone();
            head += 1;
            for g in &generators {
                let p = e.compose(d, g);
                if !lookup.contains_key(&p) {
                    if elements.len() >= cap {
                        return Err(Error::CapExceeded {
                            what: "group".into(),
                            cap,
                            partial: elements.len(),
                        });
                    }
                    lookup.insert(p.clone(), elements.len());
                    elements.push(p);
                }
            }
        }
        Ok(WeylGroup {
            datum,
            generators,
            elements,
            lookup,
        })
    }

    /// Subgroup given by an element list already known to be closed.
    fn from_closed(datum: Arc<RootDatum>, elements: Vec<WeylElement>) -> WeylGroup {
        let d = &*datum;
        let lookup: HashMap<WeylElement, usize> = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        // greedy generating set
        let mut generators: Vec<WeylElement> = Vec::new();
        let id = WeylElement::identity(d);
        let mut span: HashSet<WeylElement> = HashSet::from([id.clone()]);
        let mut span_list = vec![id];
        for e in &elements {
            if span.contains(e) {
                continue;
            }
            generators.push(e.clone());
            let mut head = 0;
            // re-close: multiply every element by every generator
            while head < span_list.len() {
                let x = span_list[head].clone();
                head += 1;
                for g in &generators {
                    let p = x.compose(d, g);
                    if span.insert(p.clone()) {
                        span_list.push(p);
                    }
                }
            }
            // elements found earlier must also be multiplied by the new generator
            let mut i = 0;
            while i < span_list.len() {
                let p = span_list[i].compose(d, e);
                if span.insert(p.clone()) {
                    span_list.push(p);
                    let mut head = span_list.len() - 1;
                    while head < span_list.len() {
                        let x = span_list[head].clone();
                        head += 1;
                        for g in &generators {
                            let p = x.compose(d, g);
                            if span.insert(p.clone()) {
                                span_list.push(p);
                            }
                        }
                    }
                }
                i += 1;
            }
        }
        WeylGroup {
            datum,
            generators,
            elements,
            lookup,
        }
    }

    pub fn datum(&self) -> &RootDatum {
        &self.datum
    }

    pub fn datum_arc(&self) -> &Arc<RootDatum> {
        &self.datum
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[WeylElement] {
        &self.generators
    }

    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }

    pub fn element(&self, k: usize) -> &WeylElement {
        &self.elements[k]
    }

    pub fn matrix(&self, k: usize) -> IntMat {
        self.elements[k].matrix(&self.datum)
    }

    pub fn generator_matrices(&self) -> Vec<IntMat> {
        self.generators
            .iter()
            .map(|g| g.matrix(&self.datum))
            .collect()
    }

    pub fn contains(&self, e: &WeylElement) -> bool {
        self.lookup.contains_key(e)
    }

    pub fn index_of(&self, e: &WeylElement) -> Option<usize> {
        self.lookup.get(e).copied()
    }

    pub fn contains_matrix(&self, m: &IntMat) -> bool {
        WeylElement::from_matrix(&self.datum, m).is_some_and(|e| self.contains(&e))
    }

    pub fn root_permutation(&self, k: usize) -> Vec<usize> {
        self.elements[k].root_permutation(&self.datum)
    }

    pub fn compose(&self, a: usize, b: usize) -> WeylElement {
        self.elements[a].compose(&self.datum, &self.elements[b])
    }

    /// Subgroup of elements satisfying `keep`; the predicate must define a subgroup.
    pub fn filter(&self, mut keep: impl FnMut(&WeylElement) -> bool) -> WeylGroup {
        let elements: Vec<WeylElement> =
            self.elements.iter().filter(|e| keep(e)).cloned().collect();
        WeylGroup::from_closed(self.datum.clone(), elements)
    }

    /// Elements mapping the root set `s` onto itself.
    pub fn setwise_stabilizer(&self, s: &[usize]) -> Result<WeylGroup> {
        let d = &*self.datum;
        if let Some(&bad) = s.iter().find(|&&i| i >= d.num_roots()) {
            return Err(Error::invalid(format!("{bad} is not a root index")));
        }
        let set: HashSet<usize> = s.iter().copied().collect();
        Ok(self.filter(|e| set.iter().all(|&i| set.contains(&e.apply_root(d, i)))))
    }

    /// Elements fixing the rational vector `v` (simple-root coordinates).
    pub fn pointwise_stabilizer(&self, v: &[Q]) -> Result<WeylGroup> {
        let d = &*self.datum;
        if v.len() != d.rank() {
            return Err(Error::invalid(format!(
                "vector of length {} in rank {}",
                v.len(),
                d.rank()
            )));
        }
        Ok(self.filter(|e| e.apply_q(d, v) == v))
    }

    pub fn intersect(&self, other: &WeylGroup) -> WeylGroup {
        self.filter(|e| other.contains(e))
    }

    /// Product closure and identity membership; exhaustive, for tests and audits.
    pub fn is_closed(&self) -> bool {
        let d = &*self.datum;
        self.elements.iter().all(|a| {
            self.elements
                .iter()
                .all(|b| self.contains(&a.compose(d, b)))
        })
    }
}

/// A finite group of rational matrices acting on some coordinate space.
#[derive(Clone, Debug)]
pub struct MatrixGroup {
    dim: usize,
    generators: Vec<QMatrix>,
    elements: Vec<QMatrix>,
    lookup: HashSet<QMatrix>,
}

impl MatrixGroup {
    pub fn generate(dim: usize, generators: Vec<QMatrix>, cap: usize) -> Result<MatrixGroup> {
        for g in &generators {
            if g.rows() != dim || g.cols() != dim {
                return Err(Error::invalid("generator has the wrong size"));
            }
        }
        let id = QMatrix::identity(dim);
        let mut elements = vec![id.clone()];
        let mut lookup = HashSet::from([id]);
        let mut head = 0;
        while head < elements.len() {
            let e = elements[head].clone();
            head += 1;
            for g in &generators {
                let p = e.mul(g);
                if !lookup.contains(&p) {
                    if elements.len() >= cap {
                        return Err(Error::CapExceeded {
                            what: "matrix group".into(),
                            cap,
                            partial: elements.len(),
                        });
                    }
                    lookup.insert(p.clone());
                    elements.push(p);
                }
            }
        }
        Ok(MatrixGroup {
            dim,
            generators,
            elements,
            lookup,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[QMatrix] {
        &self.generators
    }

    pub fn elements(&self) -> &[QMatrix] {
        &self.elements
    }

    pub fn contains(&self, m: &QMatrix) -> bool {
        self.lookup.contains(m)
    }

    pub fn is_subgroup_of(&self, other: &MatrixGroup) -> bool {
        self.dim == other.dim && self.elements.iter().all(|e| other.contains(e))
    }

    /// Equality as sets of matrices.
    pub fn same_elements(&self, other: &MatrixGroup) -> bool {
        self.order() == other.order() && self.is_subgroup_of(other)
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::{CartanType, DEFAULT_GROUP_CAP};

    fn datum(s: &str) -> RootDatum {
        RootDatum::build(&s.parse::<CartanType>().unwrap()).unwrap()
    }

    #[test]
    fn small_orders() {
        assert_eq!(
            datum("A1").weyl_group(DEFAULT_GROUP_CAP).unwrap().order(),
            2
        );
        // signed permutations of 2 letters
        assert_eq!(
            datum("C2").weyl_group(DEFAULT_GROUP_CAP).unwrap().order(),
            8
        );
        // S4
        assert_eq!(
            datum("A3").weyl_group(DEFAULT_GROUP_CAP).unwrap().order(),
            24
        );
    }

    #[test]
    fn classical_orders() {
        for s in ["B3", "C3", "D4", "G2", "F4", "A2xA1"] {
            let d = datum(s);
            let w = d.weyl_group(DEFAULT_GROUP_CAP).unwrap();
            assert_eq!(w.order() as u128, d.cartan_type().weyl_order(), "{s}");
        }
    }

    #[test]
    fn cap_is_enforced() {
        let err = datum("A3").weyl_group(10).unwrap_err();
        match err {
            Error::CapExceeded { cap, partial, .. } => {
                assert_eq!(cap, 10);
                assert_eq!(partial, 10);
            }
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn non_permuting_generator_rejected() {
        let d = datum("A2");
        let m = IntMat::from_rows(&[vec![2, 0], vec![0, 1]]);
        assert!(generate_group(&d, vec![m], 100).is_err());
    }

    #[test]
    fn stabilizers_in_c2() {
        let d = datum("C2");
        let w = d.weyl_group(DEFAULT_GROUP_CAP).unwrap();
        assert_eq!(w.setwise_stabilizer(&[]).unwrap().order(), 8);
        let all: Vec<usize> = (0..d.num_roots()).collect();
        assert_eq!(w.setwise_stabilizer(&all).unwrap().order(), 8);
        // 2 e1 = 2 a1 + a2; only e2 -> -e2 fixes e1, and e1 -> -e1 is added for the pair
        let long = d.index_of(&[2, 1]).unwrap();
        let st = w.setwise_stabilizer(&[long]).unwrap();
        assert_eq!(st.order(), 2);
        let pair = w.setwise_stabilizer(&[long, d.negate(long)]).unwrap();
        assert_eq!(pair.order(), 4);
        assert!(pair.is_closed());
        assert!(w.setwise_stabilizer(&[99]).is_err());
    }

    #[test]
    fn pointwise_stabilizers() {
        let d = datum("A1");
        let w = d.weyl_group(DEFAULT_GROUP_CAP).unwrap();
        assert_eq!(w.pointwise_stabilizer(&[q(0)]).unwrap().order(), 2);
        assert_eq!(w.pointwise_stabilizer(&[q(1)]).unwrap().order(), 1);
        assert!(w.pointwise_stabilizer(&[q(1), q(2)]).is_err());
    }

    #[test]
    fn regeneration_is_idempotent() {
        let d = datum("B3");
        let w = d.weyl_group(DEFAULT_GROUP_CAP).unwrap();
        let again = generate_group(
            &d,
            (0..w.order()).map(|k| w.matrix(k)).collect(),
            DEFAULT_GROUP_CAP,
        )
        .unwrap();
        assert_eq!(again.order(), w.order());
        let sub = w.filter(|_| true);
        let regen = WeylGroup::generate(
            w.datum_arc().clone(),
            sub.generators().to_vec(),
            DEFAULT_GROUP_CAP,
        )
        .unwrap();
        assert_eq!(regen.order(), w.order());
    }

    #[test]
    fn matrix_group_signed_permutations() {
        let flip = QMatrix::from_i64_rows(&[vec![-1, 0], vec![0, 1]]);
        let swap = QMatrix::from_i64_rows(&[vec![0, 1], vec![1, 0]]);
        let g = MatrixGroup::generate(2, vec![flip.clone(), swap], 100).unwrap();
        assert_eq!(g.order(), 8);
        let h = MatrixGroup::generate(2, vec![flip], 100).unwrap();
        assert!(h.is_subgroup_of(&g));
        assert!(!g.same_elements(&h));
        assert!(MatrixGroup::generate(2, g.elements().to_vec(), 5).is_err());
    }
}
