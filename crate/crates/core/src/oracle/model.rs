//! Classical matrix realizations of the presets, with their Cartan involutions.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{q, QMatrix, Q};
use crate::realform::{Preset, SoMiddle};
use crate::rootdata::{CartanType, Family};

use super::cmat::{combine, flatten, CMat};

/// Largest matrix size the oracle builds.
pub const MAX_MATRIX_SIZE: usize = 10;
/// Largest rank the oracle is asked to cover.
pub const MAX_RANK: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    /// traceless n x n
    Sl(usize),
    /// skew for the antidiagonal symmetric form, size n
    So(usize),
    /// skew for `[[0, I], [-I, 0]]`, size 2n
    Sp(usize),
}

impl Kind {
    fn size(self) -> usize {
        match self {
            Kind::Sl(n) | Kind::So(n) => n,
            Kind::Sp(n) => 2 * n,
        }
    }

    /// Number of diagonal coordinates read off as e-coordinates.
    fn coords(self) -> usize {
        match self {
            Kind::Sl(n) => n,
            Kind::So(n) => n / 2,
            Kind::Sp(n) => n,
        }
    }

    fn of(f: Family, n: usize) -> Option<Kind> {
        Some(match f {
            Family::A => Kind::Sl(n + 1),
            Family::B => Kind::So(2 * n + 1),
            Family::C => Kind::Sp(n),
            Family::D => Kind::So(2 * n),
            _ => return None,
        })
    }
}

/// Complex-linear involution of `gl_n` given on real matrices.
#[derive(Clone, Debug)]
pub enum Theta {
    /// `X -> D X D^-1`
    Ad { d: QMatrix, dinv: QMatrix },
    /// `X -> -K X^T K^-1`
    NegTransposeAd { k: QMatrix, kinv: QMatrix },
}

impl Theta {
    fn ad(d: QMatrix) -> Self {
        let dinv = d.inverse().expect("invertible");
        Theta::Ad { d, dinv }
    }

    fn neg_transpose(k: QMatrix) -> Self {
        let kinv = k.inverse().expect("invertible");
        Theta::NegTransposeAd { k, kinv }
    }

    pub fn apply(&self, x: &QMatrix) -> QMatrix {
        match self {
            Theta::Ad { d, dinv } => d.mul(x).mul(dinv),
            Theta::NegTransposeAd { k, kinv } => k.mul(&x.transpose()).mul(kinv).scale(&q(-1)),
        }
    }

    pub fn apply_c(&self, x: &CMat) -> CMat {
        CMat {
            re: self.apply(&x.re),
            im: self.apply(&x.im),
        }
    }
}

/// Basis of a subspace of `n x n` matrices with a fast coordinate map.
#[derive(Clone, Debug)]
pub struct Frame {
    n: usize,
    basis: Vec<QMatrix>,
    pivots: Vec<usize>,
    inv: QMatrix,
}

impl Frame {
    fn new(n: usize, basis: Vec<QMatrix>) -> Self {
        let flat: Vec<Vec<Q>> = basis.iter().map(flatten).collect();
        let (_, pivots) = QMatrix::from_rows(flat.clone()).rref();
        assert_eq!(pivots.len(), basis.len(), "frame basis is dependent");
        let sub = QMatrix::from_rows(
            pivots
                .iter()
                .map(|&p| flat.iter().map(|v| v[p].clone()).collect())
                .collect(),
        );
        let inv = sub.inverse().expect("pivot block is invertible");
        Frame {
            n,
            basis,
            pivots,
            inv,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[QMatrix] {
        &self.basis
    }

    pub fn combine(&self, c: &[Q]) -> QMatrix {
        if self.basis.is_empty() {
            return QMatrix::zeros(self.n, self.n);
        }
        combine(&self.basis, c)
    }

    /// Coordinates of `x`, or None if `x` is outside the span.
    pub fn coords(&self, x: &QMatrix) -> Option<Vec<Q>> {
        let sel: Vec<Q> = self
            .pivots
            .iter()
            .map(|&p| x.get(p / self.n, p % self.n).clone())
            .collect();
        let c = self.inv.mul_vec(&sel);
        (self.combine(&c) == *x).then_some(c)
    }
}

/// A preset realized inside `gl_n(C)`: basis of the complexified algebra, diagonal
/// Cartan subalgebra, e-coordinate positions on the diagonal, and theta.
#[derive(Clone, Debug)]
pub struct MatrixModel {
    pub n: usize,
    pub algebra: Frame,
    pub cartan: Vec<QMatrix>,
    pub positions: Vec<usize>,
    pub theta: Theta,
}

impl MatrixModel {
    /// Compact real structure `X -> -X^*`, on real matrices.
    pub fn tau(x: &QMatrix) -> QMatrix {
        x.transpose().scale(&q(-1))
    }

    pub fn sigma(&self, x: &QMatrix) -> QMatrix {
        self.theta.apply(&Self::tau(x))
    }

    /// sigma is antilinear: `-(re - i im)^T`, then theta.
    pub fn sigma_c(&self, x: &CMat) -> CMat {
        let t = CMat {
            re: Self::tau(&x.re),
            im: x.im.transpose(),
        };
        self.theta.apply_c(&t)
    }

    /// Value of the e-coordinate functional `e` on a diagonal matrix.
    pub fn functional(&self, e: &[Q], h: &QMatrix) -> Q {
        self.positions
            .iter()
            .zip(e)
            .fold(Q::zero(), |acc, (&p, x)| acc + x * h.get(p, p))
    }
}

fn antidiagonal(n: usize, sign: impl Fn(usize) -> i64) -> QMatrix {
    let mut m = QMatrix::zeros(n, n);
    for i in 0..n {
        m.set(i, n - 1 - i, q(sign(i)));
    }
    m
}

fn symplectic(n: usize) -> QMatrix {
    let mut j = QMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        j.set(i, n + i, Q::one());
        j.set(n + i, i, -Q::one());
    }
    j
}

fn unit(n: usize, i: usize, j: usize) -> QMatrix {
    let mut m = QMatrix::zeros(n, n);
    m.set(i, j, Q::one());
    m
}

/// Basis of the simple block as the kernel of its defining linear conditions.
fn block_basis(k: Kind) -> Vec<QMatrix> {
    let n = k.size();
    let cond = |x: &QMatrix| -> Vec<Q> {
        match k {
            Kind::Sl(_) => vec![(0..n).fold(Q::zero(), |a, i| a + x.get(i, i))],
            Kind::So(_) => {
                let f = antidiagonal(n, |_| 1);
                flatten(&x.transpose().mul(&f).add(&f.mul(x)))
            }
            Kind::Sp(m) => {
                let f = symplectic(m);
                flatten(&x.transpose().mul(&f).add(&f.mul(x)))
            }
        }
    };
    let cols: Vec<Vec<Q>> = (0..n * n).map(|p| cond(&unit(n, p / n, p % n))).collect();
    let rows = cols[0].len();
    QMatrix::from_columns(rows, &cols)
        .nullspace()
        .into_iter()
        .map(|v| QMatrix::from_rows(v.chunks(n).map(|c| c.to_vec()).collect()))
        .collect()
}

fn embed(big: usize, off: usize, m: &QMatrix) -> QMatrix {
    let mut out = QMatrix::zeros(big, big);
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            out.set(off + i, off + j, m.get(i, j).clone());
        }
    }
    out
}

fn blocks_of(ct: &CartanType) -> Option<Vec<Kind>> {
    ct.components()
        .iter()
        .map(|&(f, n)| Kind::of(f, n))
        .collect()
}

fn diag_signs(signs: &[i64]) -> QMatrix {
    QMatrix::diagonal(&signs.iter().map(|&s| q(s)).collect::<Vec<_>>())
}

/// Involution matrix for so(p,q) on the antidiagonal form.
fn so_involution(p: usize, qq: usize) -> QMatrix {
    let n = p + qq;
    let m = n / 2;
    let s = Preset::so_signs(p, qq);
    let mut d = QMatrix::zeros(n, n);
    for (i, &e) in s.eps.iter().enumerate() {
        d.set(i, i, q(e));
        d.set(n - 1 - i, n - 1 - i, q(e));
    }
    match s.middle {
        SoMiddle::None => {}
        SoMiddle::Odd(e) => d.set(m, m, q(e)),
        SoMiddle::Swap => {
            d.set(m - 1, m, Q::one());
            d.set(m, m - 1, Q::one());
        }
    }
    d
}

/// Rank of the preset's complex algebra.
fn preset_rank(p: &Preset) -> usize {
    match p {
        Preset::Su { p, q } => p + q - 1,
        Preset::SlR { n } => n - 1,
        Preset::SuStar { n } => 2 * n - 1,
        Preset::SpR { n } => *n,
        Preset::So { p, q } => (p + q) / 2,
        Preset::Compact(ct) => ct.rank(),
        Preset::Complex(ct) => 2 * ct.rank(),
    }
}

fn layout(p: &Preset) -> Option<(Vec<Kind>, Theta)> {
    Some(match p {
        Preset::Su { p, q: qq } => {
            let signs: Vec<i64> = (0..p + qq).map(|i| if i < *p { 1 } else { -1 }).collect();
            (vec![Kind::Sl(p + qq)], Theta::ad(diag_signs(&signs)))
        }
        Preset::SlR { n } => (
            vec![Kind::Sl(*n)],
            Theta::neg_transpose(antidiagonal(*n, |_| 1)),
        ),
        Preset::SuStar { n } => {
            let m = 2 * n;
            (
                vec![Kind::Sl(m)],
                Theta::neg_transpose(antidiagonal(m, |i| if i < *n { 1 } else { -1 })),
            )
        }
        Preset::SpR { n } => {
            let signs: Vec<i64> = (0..2 * n).map(|i| if i < *n { 1 } else { -1 }).collect();
            (vec![Kind::Sp(*n)], Theta::ad(diag_signs(&signs)))
        }
        Preset::So { p, q: qq } => (vec![Kind::So(p + qq)], Theta::ad(so_involution(*p, *qq))),
        Preset::Compact(ct) => {
            let b = blocks_of(ct)?;
            let n = b.iter().map(|k| k.size()).sum();
            (b, Theta::ad(QMatrix::identity(n)))
        }
        Preset::Complex(ct) => {
            let b = blocks_of(ct)?;
            let h: usize = b.iter().map(|k| k.size()).sum();
            let mut swap = QMatrix::zeros(2 * h, 2 * h);
            for i in 0..h {
                swap.set(i, h + i, Q::one());
                swap.set(h + i, i, Q::one());
            }
            let mut both = b.clone();
            both.extend(b);
            (both, Theta::neg_transpose(swap))
        }
    })
}

/// Whether the oracle covers this preset: classical, rank at most 4, size at most 10.
pub fn supports(p: &Preset) -> bool {
    preset_rank(p) <= MAX_RANK
        && layout(p)
            .is_some_and(|(b, _)| b.iter().map(|k| k.size()).sum::<usize>() <= MAX_MATRIX_SIZE)
}

pub fn model_for(p: &Preset) -> Result<MatrixModel> {
    if !supports(p) {
        return Err(Error::invalid(format!(
            "no matrix oracle for {p}: needs a classical form of rank <= {MAX_RANK} in size <= {MAX_MATRIX_SIZE}"
        )));
    }
    let (blocks, theta) = layout(p).expect("supported");
    let n: usize = blocks.iter().map(|k| k.size()).sum();
    let mut basis = Vec::new();
    let mut positions = Vec::new();
    let mut off = 0;
    for &k in &blocks {
        basis.extend(block_basis(k).iter().map(|m| embed(n, off, m)));
        positions.extend((0..k.coords()).map(|i| off + i));
        off += k.size();
    }
    let algebra = Frame::new(n, basis);
    // diagonal elements: kill every off-diagonal entry
    let off_diag: Vec<Vec<Q>> = algebra
        .basis()
        .iter()
        .map(|b| {
            (0..n * n)
                .filter(|p| p / n != p % n)
                .map(|p| b.get(p / n, p % n).clone())
                .collect()
        })
        .collect();
    let cartan = QMatrix::from_columns(n * n - n, &off_diag)
        .nullspace()
        .into_iter()
        .map(|c| algebra.combine(&c))
        .collect();
    Ok(MatrixModel {
        n,
        algebra,
        cartan,
        positions,
        theta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions() {
        for (s, dim, rank) in [
            ("su(2,1)", 8, 2),
            ("sp(4,R)", 10, 2),
            ("so(3,2)", 10, 2),
            ("complex(A1)", 6, 2),
            ("so(2,2)", 6, 2),
        ] {
            let m = model_for(&s.parse().unwrap()).unwrap();
            assert_eq!((m.algebra.dim(), m.cartan.len()), (dim, rank), "{s}");
        }
    }

    #[test]
    fn theta_is_involutive() {
        for s in ["sustar(4)", "sl(3,R)", "so(3,3)", "complex(B2)"] {
            let m = model_for(&s.parse().unwrap()).unwrap();
            for b in m.algebra.basis() {
                assert_eq!(m.theta.apply(&m.theta.apply(b)), *b, "{s}");
                assert!(m.algebra.coords(&m.sigma(b)).is_some(), "{s}");
            }
        }
    }

    #[test]
    fn coverage() {
        assert!(supports(&"complex(B2)".parse().unwrap()));
        assert!(!supports(&"complex(A3)".parse().unwrap()));
        assert!(!supports(&"compact(G2)".parse().unwrap()));
        assert!(!supports(&"sustar(6)".parse().unwrap()));
    }
}
