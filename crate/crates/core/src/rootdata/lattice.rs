use num_bigint::BigInt;
use num_traits::Zero;

use super::snf::{hermite_columns, ZMatrix};
use crate::linalg::{QMatrix, Q};

/// A lattice given by integer basis columns inside a fixed `Z^ambient_dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntLattice {
    ambient_dim: usize,
    basis: Vec<Vec<BigInt>>,
}

impl IntLattice {
    /// The lattice generated by `vectors`, reduced to Hermite form.
    pub fn span(ambient_dim: usize, vectors: &[Vec<BigInt>]) -> Self {
        let basis = hermite_columns(vectors);
        IntLattice { ambient_dim, basis }
    }

    /// The whole `Z^n`.
    pub fn standard(n: usize) -> Self {
        let basis = (0..n)
            .map(|i| (0..n).map(|j| BigInt::from((i == j) as i64)).collect())
            .collect();
        IntLattice {
            ambient_dim: n,
            basis,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    pub fn basis_q(&self) -> Vec<Vec<Q>> {
        self.basis
            .iter()
            .map(|v| v.iter().map(|x| Q::from_integer(x.clone())).collect())
            .collect()
    }

    /// `ambient_dim x rank` matrix with the basis as columns.
    pub fn basis_matrix(&self) -> ZMatrix {
        let mut m = ZMatrix::zeros(self.ambient_dim, self.rank());
        for (j, v) in self.basis.iter().enumerate() {
            for (i, x) in v.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    /// Integer coordinates of `v` in the basis, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &[Q]) -> Option<Vec<BigInt>> {
        if self.basis.is_empty() {
            return v.iter().all(|x| x.is_zero()).then(Vec::new);
        }
        let b = QMatrix::from_columns(self.ambient_dim, &self.basis_q());
        let c = b.solve(v)?;
        if b.mul_vec(&c) != v {
            return None;
        }
        c.into_iter()
            .map(|x| x.is_integer().then(|| x.to_integer()))
            .collect()
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        self.coordinates(v).is_some()
    }

    /// Whether the integer matrix `m` (on the ambient space) maps the lattice into itself.
    pub fn is_preserved_by(&self, m: &QMatrix) -> bool {
        self.basis_q().iter().all(|v| self.contains(&m.mul_vec(v)))
    }

    /// Matrix of `m` restricted to the lattice, in basis coordinates.
    pub fn restrict(&self, m: &QMatrix) -> Option<ZMatrix> {
        let k = self.rank();
        let mut out = ZMatrix::zeros(k, k);
        for (j, v) in self.basis_q().iter().enumerate() {
            let c = self.coordinates(&m.mul_vec(v))?;
            for (i, x) in c.into_iter().enumerate() {
                out.set(i, j, x);
            }
        }
        Some(out)
    }
}
