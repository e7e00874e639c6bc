//! Root systems, Weyl groups and integer lattices.

mod lattice;
mod snf;
mod weyl;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dot, q, QMatrix, Q};

pub use lattice::IntLattice;
pub use snf::{hermite_columns, integer_kernel, smith_normal_form, Snf, ZMatrix};
pub use weyl::{generate_group, reflection_matrix, IntMat, MatrixGroup, WeylElement, WeylGroup};

pub const DEFAULT_GROUP_CAP: usize = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }

    fn from_letter(c: char) -> Option<Family> {
        Some(match c.to_ascii_uppercase() {
            'A' => Family::A,
            'B' => Family::B,
            'C' => Family::C,
            'D' => Family::D,
            'E' => Family::E,
            'F' => Family::F,
            'G' => Family::G,
            _ => return None,
        })
    }
}

/// A product of simple Cartan types, e.g. `A1xA1` or `C2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CartanType {
    components: Vec<(Family, usize)>,
}

impl CartanType {
    pub fn new(components: Vec<(Family, usize)>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::invalid("empty Cartan type"));
        }
        for &(f, n) in &components {
            let ok = match f {
                Family::A => n >= 1,
                Family::B | Family::C => n >= 2,
                Family::D => n >= 3,
                Family::E => (6..=8).contains(&n),
                Family::F => n == 4,
                Family::G => n == 2,
            };
            if !ok {
                return Err(Error::invalid(format!(
                    "no simple type {}{}",
                    f.letter(),
                    n
                )));
            }
        }
        Ok(CartanType { components })
    }

    pub fn simple(f: Family, n: usize) -> Result<Self> {
        Self::new(vec![(f, n)])
    }

    pub fn components(&self) -> &[(Family, usize)] {
        &self.components
    }

    pub fn rank(&self) -> usize {
        self.components.iter().map(|c| c.1).sum()
    }

    /// `self x other`.
    pub fn product(&self, other: &CartanType) -> CartanType {
        let mut components = self.components.clone();
        components.extend(other.components.iter().copied());
        CartanType { components }
    }

    /// Number of roots from the classical formulas.
    pub fn root_count(&self) -> usize {
        self.components
            .iter()
            .map(|&(f, n)| match f {
                Family::A => n * (n + 1),
                Family::B | Family::C => 2 * n * n,
                Family::D => 2 * n * (n - 1),
                Family::E => [72, 126, 240][n - 6],
                Family::F => 48,
                Family::G => 12,
            })
            .sum()
    }

    /// Weyl group order from the classical formulas.
    pub fn weyl_order(&self) -> u128 {
        fn fact(n: usize) -> u128 {
            (1..=n as u128).product()
        }
        self.components
            .iter()
            .map(|&(f, n)| match f {
                Family::A => fact(n + 1),
                Family::B | Family::C => (1u128 << n) * fact(n),
                Family::D => (1u128 << (n - 1)) * fact(n),
                Family::E => [51_840u128, 2_903_040, 696_729_600][n - 6],
                Family::F => 1152,
                Family::G => 12,
            })
            .product()
    }

    /// Symmetrized Cartan matrix; the shortest roots of each component have squared length 2.
    fn form(&self) -> QMatrix {
        let r = self.rank();
        let mut m = QMatrix::zeros(r, r);
        let mut off = 0;
        for &(f, n) in &self.components {
            let block = simple_form(f, n);
            for i in 0..n {
                for j in 0..n {
                    m.set(off + i, off + j, q(block[i][j]));
                }
            }
            off += n;
        }
        m
    }
}

fn simple_form(f: Family, n: usize) -> Vec<Vec<i64>> {
    let mut m = vec![vec![0i64; n]; n];
    let chain = |m: &mut Vec<Vec<i64>>| {
        for i in 0..n {
            m[i][i] = 2;
            if i + 1 < n {
                m[i][i + 1] = -1;
                m[i + 1][i] = -1;
            }
        }
    };
    match f {
        Family::A => chain(&mut m),
        Family::B => {
            // long e_i - e_{i+1}, short e_n
            for i in 0..n {
                m[i][i] = 4;
                if i + 1 < n {
                    m[i][i + 1] = -2;
                    m[i + 1][i] = -2;
                }
            }
            m[n - 1][n - 1] = 2;
        }
        Family::C => {
            // short e_i - e_{i+1}, long 2 e_n
            chain(&mut m);
            m[n - 1][n - 1] = 4;
            m[n - 2][n - 1] = -2;
            m[n - 1][n - 2] = -2;
        }
        Family::D => {
            chain(&mut m);
            // the last node hangs off node n-3
            m[n - 2][n - 1] = 0;
            m[n - 1][n - 2] = 0;
            m[n - 3][n - 1] = -1;
            m[n - 1][n - 3] = -1;
        }
        Family::E => {
            // Bourbaki labels: 1-3-4-5-6(-7-8), 2 attached to 4
            let edges: &[(usize, usize)] =
                &[(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4)];
            for i in 0..n {
                m[i][i] = 2;
            }
            for &(a, b) in edges {
                if a <= n && b <= n {
                    m[a - 1][b - 1] = -1;
                    m[b - 1][a - 1] = -1;
                }
            }
        }
        Family::F => {
            m = vec![
                vec![4, -2, 0, 0],
                vec![-2, 4, -2, 0],
                vec![0, -2, 2, -1],
                vec![0, 0, -1, 2],
            ];
        }
        Family::G => {
            m = vec![vec![2, -3], vec![-3, 6]];
        }
    }
    m
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .components
            .iter()
            .map(|(fam, n)| format!("{}{}", fam.letter(), n))
            .collect();
        write!(f, "{}", parts.join("x"))
    }
}

impl FromStr for CartanType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut components = Vec::new();
        for part in s.split(['x', 'X', '*', '×']) {
            let part = part.trim();
            let mut chars = part.chars();
            let fam = chars
                .next()
                .and_then(Family::from_letter)
                .ok_or_else(|| Error::invalid(format!("bad Cartan type component '{part}'")))?;
            let n: usize = chars.as_str().parse().map_err(|_| {
                Error::invalid(format!("bad rank in Cartan type component '{part}'"))
            })?;
            components.push((fam, n));
        }
        CartanType::new(components)
    }
}

/// A root system in the basis of simple roots.
#[derive(Clone, Debug)]
pub struct RootDatum {
    cartan_type: CartanType,
    rank: usize,
    cartan_matrix: Vec<Vec<i64>>,
    form: QMatrix,
    /// Positive roots sorted by height then lexicographically, followed by their negatives.
    roots: Vec<Vec<i64>>,
    index: HashMap<Vec<i64>, usize>,
    norms: Vec<Q>,
    simple_reflections: Vec<IntMat>,
}

impl RootDatum {
    pub fn build(ct: &CartanType) -> Result<RootDatum> {
        let ct = CartanType::new(ct.components.clone())?;
        let r = ct.rank();
        let form = ct.form();
        let cartan_matrix: Vec<Vec<i64>> = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| {
                        let v = q(2) * form.get(i, j) / form.get(i, i);
                        assert!(v.is_integer());
                        v.to_integer().try_into().unwrap()
                    })
                    .collect()
            })
            .collect();

        // s_i(v) = v - (sum_j A_ij v_j) e_i
        let simple_reflections: Vec<IntMat> = (0..r)
            .map(|i| {
                let mut m = IntMat::identity(r);
                for j in 0..r {
                    let x = m.get(i, j) - cartan_matrix[i][j];
                    m.set(i, j, x);
                }
                m
            })
            .collect();

        let mut seen: HashMap<Vec<i64>, ()> = HashMap::new();
        let mut queue: Vec<Vec<i64>> = Vec::new();
        for i in 0..r {
            let mut e = vec![0i64; r];
            e[i] = 1;
            seen.insert(e.clone(), ());
            queue.push(e);
        }
        let mut head = 0;
        while head < queue.len() {
            let v = queue[head].clone();
            head += 1;
            for s in &simple_reflections {
                let w = s.apply(&v);
                if !seen.contains_key(&w) {
                    seen.insert(w.clone(), ());
                    queue.push(w);
                }
            }
        }
        let mut positive: Vec<Vec<i64>> = queue
            .into_iter()
            .filter(|v| v.iter().all(|&x| x >= 0))
            .collect();
        positive.sort_by(|a, b| {
            let ha: i64 = a.iter().sum();
            let hb: i64 = b.iter().sum();
            ha.cmp(&hb).then_with(|| b.cmp(a))
        });
        let negatives: Vec<Vec<i64>> = positive
            .iter()
            .map(|v| v.iter().map(|x| -x).collect())
            .collect();
        let roots: Vec<Vec<i64>> = positive.into_iter().chain(negatives).collect();
        if seen.len() != roots.len() {
            return Err(Error::invariant(
                "root closure produced a root that is neither positive nor negative",
            ));
        }
        let index = roots
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();
        let mut d = RootDatum {
            cartan_type: ct,
            rank: r,
            cartan_matrix,
            form,
            roots,
            index,
            norms: Vec::new(),
            simple_reflections,
        };
        d.norms = (0..d.roots.len())
            .map(|i| d.inner(&d.root_q(i), &d.root_q(i)))
            .collect();
        if d.roots.len() != d.cartan_type.root_count() {
            return Err(Error::invariant(format!(
                "{} has {} roots, expected {}",
                d.cartan_type,
                d.roots.len(),
                d.cartan_type.root_count()
            )));
        }
        Ok(d)
    }

    pub fn cartan_type(&self) -> &CartanType {
        &self.cartan_type
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cartan_matrix(&self) -> &[Vec<i64>] {
        &self.cartan_matrix
    }

    pub fn form(&self) -> &QMatrix {
        &self.form
    }

    pub fn roots(&self) -> &[Vec<i64>] {
        &self.roots
    }

    pub fn root(&self, i: usize) -> &[i64] {
        &self.roots[i]
    }

    pub fn root_q(&self, i: usize) -> Vec<Q> {
        self.roots[i].iter().map(|&x| q(x)).collect()
    }

    pub fn num_roots(&self) -> usize {
        self.roots.len()
    }

    pub fn num_positive(&self) -> usize {
        self.roots.len() / 2
    }

    pub fn positive_roots(&self) -> std::ops::Range<usize> {
        0..self.num_positive()
    }

    pub fn is_positive(&self, i: usize) -> bool {
        i < self.num_positive()
    }

    pub fn negate(&self, i: usize) -> usize {
        let p = self.num_positive();
        if i < p {
            i + p
        } else {
            i - p
        }
    }

    /// Index of the positive root among `{i, -i}`.
    pub fn positive_of(&self, i: usize) -> usize {
        if self.is_positive(i) {
            i
        } else {
            self.negate(i)
        }
    }

    pub fn index_of(&self, v: &[i64]) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn is_root(&self, v: &[i64]) -> bool {
        self.index.contains_key(v)
    }

    pub fn height(&self, i: usize) -> i64 {
        self.roots[i].iter().sum()
    }

    pub fn inner(&self, u: &[Q], v: &[Q]) -> Q {
        dot(u, &self.form.mul_vec(v))
    }

    /// Squared length of root `i`.
    pub fn norm(&self, i: usize) -> &Q {
        &self.norms[i]
    }

    /// `2 alpha / <alpha, alpha>` in simple-root coordinates.
    pub fn coroot(&self, i: usize) -> Vec<Q> {
        let f = q(2) / &self.norms[i];
        self.roots[i].iter().map(|&x| q(x) * &f).collect()
    }

    /// `2 <a, b> / <b, b>`.
    pub fn cartan_integer(&self, a: usize, b: usize) -> Q {
        q(2) * self.inner(&self.root_q(a), &self.root_q(b)) / &self.norms[b]
    }

    /// Simple-root coordinates are the default ordering for roots in outputs.
    pub fn simple_reflections(&self) -> &[IntMat] {
        &self.simple_reflections
    }

    /// Reflection in root `i` acting on root coordinates.
    pub fn reflection(&self, i: usize) -> IntMat {
        reflection_matrix(self, i)
    }

    /// Dual basis of the simple coroots with respect to the root pairing.
    pub fn fundamental_weights(&self) -> QMatrix {
        // columns w_i with <alpha_j^vee, w_i> = delta_ij, i.e. A w_i = e_i
        QMatrix::from_i64_rows(&self.cartan_matrix)
            .inverse()
            .expect("Cartan matrix is invertible")
    }

    /// Apply an integer matrix to root `i` and return the index of the image.
    pub fn image(&self, m: &IntMat, i: usize) -> Option<usize> {
        self.index_of(&m.apply(&self.roots[i]))
    }

    /// Whether `m` maps the root set onto itself.
    pub fn permutes_roots(&self, m: &IntMat) -> bool {
        m.dim() == self.rank && (0..self.num_roots()).all(|i| self.image(m, i).is_some())
    }

    /// Whether `m` preserves the form.
    pub fn is_isometry(&self, m: &IntMat) -> bool {
        let mq = m.to_q();
        mq.transpose().mul(&self.form).mul(&mq) == self.form
    }

    pub fn root_label(&self, i: usize) -> String {
        let parts: Vec<String> = self.roots[i].iter().map(|x| x.to_string()).collect();
        format!("({})", parts.join(","))
    }

    pub fn weyl_group(&self, cap: usize) -> Result<WeylGroup> {
        generate_group(self, self.simple_reflections.clone(), cap)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{Signed, ToPrimitive};

    fn datum(s: &str) -> RootDatum {
        RootDatum::build(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn rejects_bad_types() {
        for s in ["B1", "C1", "D2", "E5", "F3", "G3", "A0", "Q2", ""] {
            assert!(s.parse::<CartanType>().is_err(), "{s}");
        }
    }

    #[test]
    fn a1_has_two_roots() {
        let d = datum("A1");
        assert_eq!(d.roots(), &[vec![1], vec![-1]]);
    }

    #[test]
    fn c2_roots_match_coordinate_enumeration() {
        // independent enumeration: +-e_i +- e_j, +-2e_i in e-coordinates, converted with
        // alpha_1 = e1 - e2, alpha_2 = 2 e2  =>  e1 = a1 + a2/2, e2 = a2/2
        let mut expected: Vec<Vec<i64>> = Vec::new();
        for (x, y) in [
            (1, 1),
            (1, -1),
            (-1, 1),
            (-1, -1),
            (2, 0),
            (-2, 0),
            (0, 2),
            (0, -2),
        ] {
            // x e1 + y e2 = x a1 + (x + y)/2 a2
            expected.push(vec![x, (x + y) / 2]);
        }
        let d = datum("C2");
        let mut got = d.roots().to_vec();
        got.sort();
        expected.sort();
        assert_eq!(got, expected);
    }

    #[test]
    fn product_type() {
        let d = datum("A1xA1");
        assert_eq!(d.num_roots(), 4);
        assert_eq!(d.cartan_matrix(), &[vec![2, 0], vec![0, 2]]);
    }

    #[test]
    fn root_counts_and_invariants() {
        for s in [
            "A1", "A4", "B3", "C3", "D4", "D5", "G2", "F4", "E6", "E7", "E8", "A2xB2",
        ] {
            let d = datum(s);
            assert_eq!(d.num_roots(), d.cartan_type().root_count(), "{s}");
            for i in 0..d.rank() {
                assert_eq!(d.cartan_matrix()[i][i], 2);
            }
            for s_i in d.simple_reflections() {
                assert!(d.permutes_roots(s_i));
            }
            for a in 0..d.num_roots() {
                assert_eq!(d.inner(&d.root_q(a), &d.coroot(a)), q(2));
            }
        }
    }

    #[test]
    fn cartan_integers_bounded() {
        for s in ["G2", "F4", "B3", "C3"] {
            let d = datum(s);
            for a in 0..d.num_roots() {
                for b in 0..d.num_roots() {
                    let c = d.cartan_integer(a, b);
                    assert!(c.is_integer());
                    assert!(c.abs().to_integer().to_i64().unwrap() <= 3);
                }
            }
        }
    }

    #[test]
    fn display_round_trip() {
        let ct: CartanType = "A1xC2".parse().unwrap();
        assert_eq!(ct.to_string(), "A1xC2");
    }
}
