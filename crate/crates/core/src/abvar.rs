//! Abelian varieties `X (x) L` for a lattice `L`, with finite integral group actions.
//!
//! The d-torsion of the elliptic curve is modeled as `(Z/d)^2`; no period lattice is used.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{QMatrix, Q};
use crate::rootdata::{smith_normal_form, IntLattice, ZMatrix};

/// A subgroup of `X (x) Z^n`: identity component plus a finite component group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusSubgroup {
    pub ambient_rank: usize,
    pub identity_dim: usize,
    /// in ambient coordinates
    pub identity_lattice: IntLattice,
    /// elementary divisors `d > 1`; each contributes `(Z/d)^2`
    pub divisors: Vec<BigInt>,
    /// `snf.v`, kept for the action on components
    v: ZMatrix,
    rank: usize,
}

impl TorusSubgroup {
    pub fn whole(n: usize) -> Self {
        TorusSubgroup {
            ambient_rank: n,
            identity_dim: n,
            identity_lattice: IntLattice::standard(n),
            divisors: Vec::new(),
            v: ZMatrix::identity(n),
            rank: 0,
        }
    }

    pub fn component_count(&self) -> BigInt {
        self.divisors
            .iter()
            .fold(BigInt::one(), |acc, d| acc * d * d)
    }

    pub fn is_connected(&self) -> bool {
        self.divisors.is_empty()
    }

    /// Number of orbits of `group` (matrices on the ambient lattice) on the components.
    ///
    /// Components are enumerated explicitly, so this fails above `cap` components.
    pub fn component_orbits(&self, group: &[ZMatrix], cap: usize) -> Result<usize> {
        let count = self
            .component_count()
            .to_usize()
            .filter(|&c| c <= cap)
            .ok_or_else(|| Error::CapExceeded {
                what: "component group".into(),
                cap,
                partial: 0,
            })?;
        if count == 1 {
            return Ok(1);
        }
        let r = self.rank;
        // elementary divisors of the full diagonal, including 1s
        let n_div = r;
        let full_divs: Vec<BigInt> = {
            let mut d = vec![BigInt::one(); n_div - self.divisors.len()];
            d.extend(self.divisors.iter().cloned());
            d
        };
        let v_inv = to_q(&self.v).inverse().expect("unimodular");
        let actions: Vec<QMatrix> = group
            .iter()
            .map(|g| v_inv.mul(&to_q(g)).mul(&to_q(&self.v)))
            .collect();
        let moduli: Vec<i64> = full_divs
            .iter()
            .map(|d| d.to_i64().expect("small divisor"))
            .collect();
        let act = |a: &QMatrix, y: &[i64]| -> Vec<i64> {
            (0..r)
                .map(|i| {
                    let mut s = Q::zero();
                    for j in 0..r {
                        s += a.get(i, j) * Q::new(y[j].into(), moduli[j].into());
                    }
                    let x = s * Q::from_integer(moduli[i].into());
                    assert!(x.is_integer(), "component action is not well defined");
                    x.to_integer()
                        .mod_floor(&BigInt::from(moduli[i]))
                        .to_i64()
                        .unwrap()
                })
                .collect()
        };
        // a component is a pair of torsion vectors (the two real directions of X)
        let mut all = Vec::with_capacity(count);
        let mut cur = vec![0i64; 2 * r];
        loop {
            all.push(cur.clone());
            let mut k = 0;
            loop {
                if k == 2 * r {
                    break;
                }
                cur[k] += 1;
                if cur[k] < moduli[k % r] {
                    break;
                }
                cur[k] = 0;
                k += 1;
            }
            if k == 2 * r {
                break;
            }
        }
        debug_assert_eq!(all.len(), count);
        let mut seen: HashSet<Vec<i64>> = HashSet::new();
        let mut orbits = 0;
        for start in all {
            if seen.contains(&start) {
                continue;
            }
            orbits += 1;
            let mut stack = vec![start.clone()];
            seen.insert(start);
            while let Some(p) = stack.pop() {
                for a in &actions {
                    let mut img = act(a, &p[..r]);
                    img.extend(act(a, &p[r..]));
                    if seen.insert(img.clone()) {
                        stack.push(img);
                    }
                }
            }
        }
        Ok(orbits)
    }
}

fn to_q(m: &ZMatrix) -> QMatrix {
    QMatrix::from_rows(
        m.to_rows()
            .into_iter()
            .map(|r| r.into_iter().map(Q::from_integer).collect())
            .collect(),
    )
}

/// Kernel of the homomorphism `X (x) Z^n -> X^k` induced by the integer matrix `m` (`k x n`).
pub fn kernel_of_matrix(m: &ZMatrix) -> TorusSubgroup {
    let n = m.cols();
    let snf = smith_normal_form(m);
    let rank = snf.rank();
    let divisors: Vec<BigInt> = snf
        .elementary_divisors()
        .into_iter()
        .filter(|d| !d.is_one())
        .collect();
    let kernel: Vec<Vec<BigInt>> = (rank..n).map(|j| snf.v.column(j)).collect();
    TorusSubgroup {
        ambient_rank: n,
        identity_dim: n - rank,
        identity_lattice: IntLattice::span(n, &kernel),
        divisors,
        v: snf.v.clone(),
        rank,
    }
}

/// The eta map of a set of roots on a cocharacter lattice: entry `(b, j)` is `beta_b(lambda_j)`.
pub fn eta_matrix(pairings: &[Vec<Q>]) -> Result<ZMatrix> {
    let k = pairings.len();
    let n = pairings.first().map_or(0, |r| r.len());
    let mut m = ZMatrix::zeros(k, n);
    for (i, row) in pairings.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            if !x.is_integer() {
                return Err(Error::invariant(format!(
                    "root pairing {x} with a cocharacter is not integral"
                )));
            }
            m.set(i, j, x.to_integer());
        }
    }
    Ok(m)
}

/// `(X (x) L)|_B`, given the pairings of the roots of `B` with a basis of `L`.
pub fn kernel_of_eta(n: usize, pairings: &[Vec<Q>]) -> Result<TorusSubgroup> {
    if pairings.is_empty() {
        return Ok(TorusSubgroup::whole(n));
    }
    Ok(kernel_of_matrix(&eta_matrix(pairings)?))
}

/// Fixed points of an integral automorphism `g` of `X (x) Z^n`.
pub fn fixed_subgroup(g: &ZMatrix) -> TorusSubgroup {
    kernel_of_matrix(&g.sub(&ZMatrix::identity(g.rows())))
}

/// A finite group acting on `X (x) Z^n`, given by all of its elements.
#[derive(Clone, Debug)]
pub struct FiniteAction {
    pub rank: usize,
    pub elements: Vec<ZMatrix>,
}

impl FiniteAction {
    /// Closes `generators` under multiplication.
    pub fn generate(rank: usize, generators: &[ZMatrix], cap: usize) -> Result<FiniteAction> {
        let id = ZMatrix::identity(rank);
        let mut elements = vec![id.clone()];
        let mut seen: HashSet<Vec<Vec<BigInt>>> = HashSet::from([id.to_rows()]);
        let mut head = 0;
        while head < elements.len() {
            let e = elements[head].clone();
            head += 1;
            for g in generators {
                if g.rows() != rank || g.cols() != rank {
                    return Err(Error::invalid("generator has the wrong size"));
                }
                let p = e.mul(g);
                if seen.insert(p.to_rows()) {
                    if elements.len() >= cap {
                        return Err(Error::CapExceeded {
                            what: "lattice action".into(),
                            cap,
                            partial: elements.len(),
                        });
                    }
                    elements.push(p);
                }
            }
        }
        Ok(FiniteAction { rank, elements })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedStratum {
    pub element: usize,
    pub identity_dim: usize,
    pub components: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum QuotientFactor {
    AbelianVariety {
        dim: usize,
    },
    /// `X / {+-1}`, genus 0 by Riemann-Hurwitz with 4 branch points
    ProjectiveLine,
    Orbifold {
        dim: usize,
        group_order: usize,
        fixed_strata: Vec<FixedStratum>,
    },
}

impl QuotientFactor {
    pub fn dim(&self) -> usize {
        match self {
            QuotientFactor::AbelianVariety { dim } | QuotientFactor::Orbifold { dim, .. } => *dim,
            QuotientFactor::ProjectiveLine => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientDescription {
    pub factors: Vec<QuotientFactor>,
    pub product_structure: bool,
}

impl QuotientDescription {
    pub fn dim(&self) -> usize {
        self.factors.iter().map(QuotientFactor::dim).sum()
    }

    pub fn is_point(&self) -> bool {
        self.factors.is_empty()
    }

    /// Short human-readable form such as `P1 x P1`.
    pub fn summary(&self) -> String {
        if self.factors.is_empty() {
            return "point".into();
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|f| match f {
                QuotientFactor::AbelianVariety { dim } => format!("X^{dim}"),
                QuotientFactor::ProjectiveLine => "P1".into(),
                QuotientFactor::Orbifold {
                    dim, group_order, ..
                } => format!("(X^{dim})/G{group_order}"),
            })
            .collect();
        parts.join(" x ")
    }
}

/// Best-effort identification of `(X (x) Z^n) / G`.
pub fn identify_quotient(action: &FiniteAction) -> QuotientDescription {
    let n = action.rank;
    if n == 0 {
        return QuotientDescription {
            factors: Vec::new(),
            product_structure: true,
        };
    }
    if let Some(d) = split_by_support(action) {
        return d;
    }
    if let Some(basis) = eigenlattice_basis(action) {
        let inv = to_q(&basis).inverse().expect("unimodular");
        let conj: Vec<ZMatrix> = action
            .elements
            .iter()
            .map(|g| to_z(&inv.mul(&to_q(g)).mul(&to_q(&basis))).expect("basis is invariant"))
            .collect();
        if let Some(d) = split_by_support(&FiniteAction {
            rank: n,
            elements: conj,
        }) {
            return d;
        }
    }
    QuotientDescription {
        factors: vec![orbifold(action)],
        product_structure: false,
    }
}

fn to_z(m: &QMatrix) -> Option<ZMatrix> {
    Some(ZMatrix::from_rows(m.to_bigint_rows()?))
}

fn orbifold(action: &FiniteAction) -> QuotientFactor {
    let fixed_strata = action
        .elements
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, g)| {
            let f = fixed_subgroup(g);
            FixedStratum {
                element: k,
                identity_dim: f.identity_dim,
                components: f.component_count().to_string(),
            }
        })
        .collect();
    QuotientFactor::Orbifold {
        dim: action.rank,
        group_order: action.order(),
        fixed_strata,
    }
}

/// Splits the basis into blocks no group element mixes; needs the group to be the product of its block images.
fn split_by_support(action: &FiniteAction) -> Option<QuotientDescription> {
    let n = action.rank;
    // union-find over coordinates
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for g in &action.elements {
        for i in 0..n {
            for j in 0..n {
                if i != j && !g.get(i, j).is_zero() {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    parent[a] = b;
                }
            }
        }
    }
    let mut blocks: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        blocks.entry(r).or_default().push(i);
    }
    let blocks: Vec<Vec<usize>> = blocks.into_values().collect();
    if blocks.len() == 1 && !action.elements.iter().all(|g| g.is_diagonal()) {
        // a single mixed block: only the trivial-action shortcut applies
        if action.order() == 1 {
            return Some(QuotientDescription {
                factors: vec![QuotientFactor::AbelianVariety { dim: n }],
                product_structure: true,
            });
        }
        return None;
    }
    let mut product: usize = 1;
    let mut images = Vec::new();
    for blk in &blocks {
        let mut img: Vec<ZMatrix> = Vec::new();
        let mut seen = HashSet::new();
        for g in &action.elements {
            let mut m = ZMatrix::zeros(blk.len(), blk.len());
            for (a, &i) in blk.iter().enumerate() {
                for (b, &j) in blk.iter().enumerate() {
                    m.set(a, b, g.get(i, j).clone());
                }
            }
            if seen.insert(m.to_rows()) {
                img.push(m);
            }
        }
        product = product.saturating_mul(img.len());
        images.push(img);
    }
    if product != action.order() {
        return None;
    }
    let mut trivial_dim = 0;
    let mut factors = Vec::new();
    for (blk, img) in blocks.iter().zip(images) {
        let k = blk.len();
        if img.len() == 1 {
            trivial_dim += k;
        } else if k == 1 && img.len() == 2 && img.iter().any(|m| m.get(0, 0).is_negative()) {
            factors.push(QuotientFactor::ProjectiveLine);
        } else {
            factors.push(orbifold(&FiniteAction {
                rank: k,
                elements: img,
            }));
        }
    }
    if trivial_dim > 0 {
        factors.insert(0, QuotientFactor::AbelianVariety { dim: trivial_dim });
    }
    Some(QuotientDescription {
        factors,
        product_structure: true,
    })
}

/// For an elementary abelian 2-group: a basis of joint eigenlattices, if they span the lattice.
fn eigenlattice_basis(action: &FiniteAction) -> Option<ZMatrix> {
    let n = action.rank;
    let id = ZMatrix::identity(n);
    if action.elements.iter().any(|g| g.mul(g) != id) {
        return None;
    }
    let gens: Vec<&ZMatrix> = action.elements.iter().skip(1).collect();
    let mut cols: Vec<Vec<BigInt>> = Vec::new();
    // each character is a sign pattern on the elements
    let mut patterns: Vec<Vec<i64>> = vec![vec![]];
    for _ in &gens {
        patterns = patterns
            .into_iter()
            .flat_map(|p| [1i64, -1].map(|s| [p.clone(), vec![s]].concat()))
            .collect();
    }
    if patterns.len() > 4096 {
        return None;
    }
    for chi in patterns {
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        for (g, &s) in gens.iter().zip(&chi) {
            for i in 0..n {
                rows.push(
                    (0..n)
                        .map(|j| g.get(i, j) - BigInt::from(s * i64::from(i == j)))
                        .collect(),
                );
            }
        }
        if rows.is_empty() {
            return None;
        }
        cols.extend(crate::rootdata::integer_kernel(&ZMatrix::from_rows(rows)));
    }
    if cols.len() != n {
        return None;
    }
    let mut b = ZMatrix::zeros(n, n);
    for (j, c) in cols.iter().enumerate() {
        for (i, x) in c.iter().enumerate() {
            b.set(i, j, x.clone());
        }
    }
    b.determinant().abs().is_one().then_some(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    fn z(rows: &[Vec<i64>]) -> ZMatrix {
        ZMatrix::from_i64_rows(rows)
    }

    #[test]
    fn eta_examples() {
        let all = kernel_of_eta(3, &[]).unwrap();
        assert_eq!(
            (all.identity_dim, all.component_count()),
            (3, BigInt::one())
        );
        let su11 = kernel_of_eta(1, &[vec![q(2)]]).unwrap();
        assert_eq!(su11.identity_dim, 0);
        assert_eq!(su11.component_count(), BigInt::from(4));
        let row = kernel_of_eta(2, &[vec![q(1), q(3)]]).unwrap();
        assert_eq!(
            (row.identity_dim, row.component_count()),
            (1, BigInt::one())
        );
        assert!(kernel_of_eta(1, &[vec![crate::linalg::qf(1, 2)]]).is_err());
    }

    #[test]
    fn fixed_examples() {
        assert_eq!(
            fixed_subgroup(&z(&[vec![1, 0], vec![0, 1]])).identity_dim,
            2
        );
        let neg = fixed_subgroup(&z(&[vec![-1]]));
        assert_eq!(
            (neg.identity_dim, neg.component_count()),
            (0, BigInt::from(4))
        );
        let swap = fixed_subgroup(&z(&[vec![0, 1], vec![1, 0]]));
        assert_eq!(
            (swap.identity_dim, swap.component_count()),
            (1, BigInt::one())
        );
    }

    #[test]
    fn quotients() {
        let triv = FiniteAction::generate(3, &[], 10).unwrap();
        assert_eq!(
            identify_quotient(&triv).factors,
            vec![QuotientFactor::AbelianVariety { dim: 3 }]
        );
        let pm = FiniteAction::generate(1, &[z(&[vec![-1]])], 10).unwrap();
        assert_eq!(
            identify_quotient(&pm).factors,
            vec![QuotientFactor::ProjectiveLine]
        );
        // two sign flips in a skew basis still split
        let a = z(&[vec![-1, 0], vec![2, 1]]);
        let b = z(&[vec![1, 0], vec![-2, -1]]);
        let g = FiniteAction::generate(2, &[a, b], 10).unwrap();
        assert_eq!(g.order(), 4);
        let d = identify_quotient(&g);
        assert_eq!(d.summary(), "P1 x P1");
        // the swap does not split
        let s = FiniteAction::generate(2, &[z(&[vec![0, 1], vec![1, 0]])], 10).unwrap();
        let d = identify_quotient(&s);
        assert!(!d.product_structure);
        assert!(matches!(
            d.factors[0],
            QuotientFactor::Orbifold {
                dim: 2,
                group_order: 2,
                ..
            }
        ));
    }

    #[test]
    fn component_orbits() {
        let su11 = kernel_of_eta(1, &[vec![q(2)]]).unwrap();
        assert_eq!(su11.component_orbits(&[], 100).unwrap(), 4);
        // -1 fixes every 2-torsion point
        assert_eq!(su11.component_orbits(&[z(&[vec![-1]])], 100).unwrap(), 4);
        let k = kernel_of_matrix(&z(&[vec![2, 0], vec![0, 2]]));
        assert_eq!(k.component_count(), BigInt::from(16));
        // swapping the factors of X[2] x X[2]: 4 diagonal points + 6 swapped pairs
        assert_eq!(
            k.component_orbits(&[z(&[vec![0, 1], vec![1, 0]])], 100)
                .unwrap(),
            10
        );
        let t = kernel_of_matrix(&z(&[vec![3]]));
        // -1 on X[3]: 0 fixed, the other 8 points pair up
        assert_eq!(t.component_orbits(&[z(&[vec![-1]])], 100).unwrap(), 5);
    }
}
