//! Matrix helpers for the oracle: rational, Gaussian-rational and floating point.

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use crate::linalg::{QMatrix, Q};

pub fn commutator(a: &QMatrix, b: &QMatrix) -> QMatrix {
    a.mul(b).sub(&b.mul(a))
}

pub fn flatten(m: &QMatrix) -> Vec<Q> {
    m.to_rows().into_iter().flatten().collect()
}

pub fn combine(basis: &[QMatrix], c: &[Q]) -> QMatrix {
    let n = basis[0].rows();
    let mut m = QMatrix::zeros(n, n);
    for (b, x) in basis.iter().zip(c) {
        if !x.is_zero() {
            m = m.add(&b.scale(x));
        }
    }
    m
}

pub fn trace(m: &QMatrix) -> Q {
    (0..m.rows()).fold(Q::zero(), |acc, i| acc + m.get(i, i))
}

/// Gaussian-rational matrix `re + i im`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CMat {
    pub re: QMatrix,
    pub im: QMatrix,
}

impl CMat {
    pub fn real(m: QMatrix) -> Self {
        let n = m.rows();
        CMat {
            re: m,
            im: QMatrix::zeros(n, n),
        }
    }

    pub fn mul(&self, o: &CMat) -> CMat {
        CMat {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    pub fn add(&self, o: &CMat) -> CMat {
        CMat {
            re: self.re.add(&o.re),
            im: self.im.add(&o.im),
        }
    }

    pub fn sub(&self, o: &CMat) -> CMat {
        CMat {
            re: self.re.sub(&o.re),
            im: self.im.sub(&o.im),
        }
    }

    /// Multiplication by `a + i b`.
    pub fn scale(&self, a: &Q, b: &Q) -> CMat {
        CMat {
            re: self.re.scale(a).sub(&self.im.scale(b)),
            im: self.re.scale(b).add(&self.im.scale(a)),
        }
    }

    pub fn bracket(&self, o: &CMat) -> CMat {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// Real and imaginary parts, flattened.
    pub fn flatten(&self) -> Vec<Q> {
        let mut v = flatten(&self.re);
        v.extend(flatten(&self.im));
        v
    }
}

/// Dense complex floating-point matrix.
#[derive(Clone, Debug)]
pub struct FMat {
    pub n: usize,
    pub data: Vec<Complex64>,
}

impl FMat {
    pub fn zeros(n: usize) -> Self {
        FMat {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_q(m: &QMatrix) -> Self {
        let n = m.rows();
        let data = m
            .to_rows()
            .into_iter()
            .flatten()
            .map(|x| Complex64::new(x.to_f64().unwrap(), 0.0))
            .collect();
        FMat { n, data }
    }

    pub fn mul(&self, o: &FMat) -> FMat {
        let n = self.n;
        let mut out = FMat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * o.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn add(&self, o: &FMat) -> FMat {
        FMat {
            n: self.n,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &FMat) -> FMat {
        FMat {
            n: self.n,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: f64) -> FMat {
        FMat {
            n: self.n,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    /// Matrix exponential by scaling and squaring around a Taylor series.
    pub fn exp(&self, tol: f64) -> FMat {
        let norm = self.max_abs() * self.n as f64;
        let mut s = 0;
        while norm / f64::from(1u32 << s.min(30)) > 0.5 {
            s += 1;
        }
        let a = self.scale(1.0 / f64::from(1u32 << s));
        let mut sum = FMat::identity(self.n);
        let mut term = FMat::identity(self.n);
        for k in 1..200 {
            term = term.mul(&a).scale(1.0 / k as f64);
            sum = sum.add(&term);
            if term.max_abs() < tol {
                break;
            }
        }
        for _ in 0..s {
            sum = sum.mul(&sum);
        }
        sum
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    #[test]
    fn exp_of_rotation_generator() {
        let z = FMat::from_q(&QMatrix::from_rows(vec![
            vec![q(0), q(-1)],
            vec![q(1), q(0)],
        ]));
        let r = z.scale(std::f64::consts::FRAC_PI_2).exp(1e-14);
        // rotation by 90 degrees
        assert!((r.data[1].re + 1.0).abs() < 1e-12 && (r.data[2].re - 1.0).abs() < 1e-12);
        assert!(r.data[0].norm() < 1e-12);
    }

    #[test]
    fn gaussian_products() {
        let i = CMat {
            re: QMatrix::zeros(1, 1),
            im: QMatrix::identity(1),
        };
        assert_eq!(i.mul(&i), CMat::real(QMatrix::identity(1).scale(&q(-1))));
        assert_eq!(CMat::real(QMatrix::identity(1)).scale(&q(0), &q(1)), i);
    }
}
