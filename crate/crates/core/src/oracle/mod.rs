//! Independent check of the combinatorial data against explicit matrix algebras.
//!
//! Everything except the Cayley transform itself is exact over the Gaussian rationals.
//! The transform `exp(pi/4 (xbar - x))` is evaluated in floating point.

mod cmat;
mod model;

use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::cayley::maximal_class;
use crate::error::{Error, Result};
use crate::linalg::{q, qf, QMatrix, Subspace, Q};
use crate::moduli::Analysis;
use crate::realform::{Preset, RootKind};

pub use cmat::{CMat, FMat};
pub use model::{model_for, supports, MatrixModel, Theta, MAX_MATRIX_SIZE, MAX_RANK};

use cmat::{commutator, trace};

/// Truncation threshold for the exponential series.
pub const EXP_SERIES_TOLERANCE: f64 = 1e-10;
/// Largest entrywise deviation accepted in the floating-point Cayley checks.
pub const CAYLEY_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Debug, Serialize)]
pub struct CayleyCheck {
    pub root: String,
    /// `alpha([x, xbar])` before normalization; positive for noncompact roots
    #[serde(serialize_with = "crate::serial::q")]
    pub pairing: Q,
    /// `|Ad(u) H_alpha - (x + xbar)|`
    pub transport_residual: f64,
    /// `|Ad(u) h - h|` over `ker alpha`
    pub kernel_residual: f64,
    /// `x + xbar` lies in `m`, is real, and commutes with `ker alpha`
    pub exact_ok: bool,
    /// a non-real phase breaks commutation, a real one keeps it
    pub phase_ok: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub preset: String,
    pub matrix_size: usize,
    pub dim_complex_algebra: usize,
    pub cartan_dim: usize,
    /// every root of the datum has a one-dimensional root space and they fill out the algebra
    pub root_spaces_ok: bool,
    pub classification_mismatches: Vec<String>,
    pub dim_k_oracle: usize,
    pub dim_k_combinatorial: usize,
    pub a0_dim_oracle: usize,
    pub a0_dim_combinatorial: usize,
    /// diagonal entries of the oracle's basis of `a0`
    #[serde(serialize_with = "crate::serial::q_vecs")]
    pub a0_diagonals: Vec<Vec<Q>>,
    pub real_rank_oracle: usize,
    pub real_rank_combinatorial: usize,
    /// the centralizer of the final abelian subspace in `m` is itself
    pub real_rank_maximal: bool,
    /// theta and sigma are commuting involutive automorphisms, `k` and `m` are trace-orthogonal
    pub structure_ok: bool,
    pub cayley: Vec<CayleyCheck>,
    pub agrees: bool,
}

impl OracleReport {
    pub fn summary(&self) -> String {
        let mut bad = Vec::new();
        if !self.root_spaces_ok {
            bad.push("root spaces".to_string());
        }
        bad.extend(self.classification_mismatches.iter().cloned());
        if self.dim_k_oracle != self.dim_k_combinatorial {
            bad.push(format!(
                "dim k {} vs {}",
                self.dim_k_oracle, self.dim_k_combinatorial
            ));
        }
        if self.a0_dim_oracle != self.a0_dim_combinatorial {
            bad.push(format!(
                "dim a0 {} vs {}",
                self.a0_dim_oracle, self.a0_dim_combinatorial
            ));
        }
        if self.real_rank_oracle != self.real_rank_combinatorial || !self.real_rank_maximal {
            bad.push(format!(
                "real rank {} vs {}",
                self.real_rank_oracle, self.real_rank_combinatorial
            ));
        }
        if !self.structure_ok {
            bad.push("structure".to_string());
        }
        bad.extend(
            self.cayley
                .iter()
                .filter(|c| !c.pass)
                .map(|c| format!("cayley {}", c.root)),
        );
        if bad.is_empty() {
            format!("{}: oracle agrees", self.preset)
        } else {
            format!("{}: {}", self.preset, bad.join("; "))
        }
    }
}

struct Oracle<'a> {
    an: &'a Analysis,
    m: MatrixModel,
    /// coordinates of a root vector for every root of the datum
    root_vectors: Vec<Vec<Q>>,
    /// e-coordinates of every root
    functionals: Vec<Vec<Q>>,
}

impl Oracle<'_> {
    fn dim(&self) -> usize {
        self.m.algebra.dim()
    }

    fn mat(&self, c: &[Q]) -> QMatrix {
        self.m.algebra.combine(c)
    }

    fn coords(&self, x: &QMatrix) -> Result<Vec<Q>> {
        self.m
            .algebra
            .coords(x)
            .ok_or_else(|| Error::OracleMismatch("matrix left the algebra".into()))
    }

    fn linear_map(&self, f: impl Fn(&QMatrix) -> QMatrix) -> Result<QMatrix> {
        let cols: Vec<Vec<Q>> = self
            .m
            .algebra
            .basis()
            .iter()
            .map(|b| self.coords(&f(b)))
            .collect::<Result<_>>()?;
        Ok(QMatrix::from_columns(self.dim(), &cols))
    }

    fn value(&self, root: usize, h: &QMatrix) -> Q {
        self.m.functional(&self.functionals[root], h)
    }

    /// Root `j` and scalar `l` with `v = l x_j`, if `v` is a root vector.
    fn identify(&self, v: &[Q]) -> Option<(usize, Q)> {
        self.root_vectors.iter().enumerate().find_map(|(j, x)| {
            let p = x.iter().position(|c| !c.is_zero())?;
            let l = &v[p] / &x[p];
            x.iter().zip(v).all(|(a, b)| a * &l == *b).then_some((j, l))
        })
    }

    /// Cartan elements killed by `root`.
    fn kernel(&self, root: usize) -> Vec<QMatrix> {
        let row: Vec<Q> = self.m.cartan.iter().map(|h| self.value(root, h)).collect();
        QMatrix::from_rows(vec![row])
            .nullspace()
            .into_iter()
            .map(|c| cmat::combine(&self.m.cartan, &c))
            .collect()
    }
}

fn root_spaces(m: &MatrixModel, functionals: &[Vec<Q>]) -> Result<Option<Vec<Vec<Q>>>> {
    let n = m.algebra.dim();
    let ads: Vec<QMatrix> = m
        .cartan
        .iter()
        .map(|h| {
            let cols: Vec<Vec<Q>> = m
                .algebra
                .basis()
                .iter()
                .map(|b| m.algebra.coords(&commutator(h, b)).expect("ideal"))
                .collect();
            QMatrix::from_columns(n, &cols)
        })
        .collect();
    let mut out = Vec::new();
    for e in functionals {
        let mut rows = Vec::new();
        for (h, ad) in m.cartan.iter().zip(&ads) {
            let shifted = ad.sub(&QMatrix::identity(n).scale(&m.functional(e, h)));
            rows.extend(shifted.to_rows());
        }
        let ns = QMatrix::from_rows(rows).nullspace();
        if ns.len() != 1 {
            return Ok(None);
        }
        out.push(ns.into_iter().next().unwrap());
    }
    Ok(Some(out))
}

/// Real coordinates `(u, v)` for `X = B(u) + i B(v)`, as a Gaussian matrix.
fn real_to_c(o: &Oracle, w: &[Q]) -> CMat {
    let n = o.dim();
    CMat {
        re: o.mat(&w[..n]),
        im: o.mat(&w[n..]),
    }
}

struct RealRank {
    /// diagonals of a basis of `a0`
    a0: Vec<Vec<Q>>,
    rank: usize,
    maximal: bool,
}

/// Greedy maximal abelian subspace of `m` containing `a0`.
fn real_rank(o: &Oracle, s: &QMatrix, t: &QMatrix) -> RealRank {
    let n = o.dim();
    let id = QMatrix::identity(n);
    // g = {S u = u, S v = -v}; m additionally has T u = -u, T v = -v
    let blocks = [
        (s.sub(&id), 0),
        (s.add(&id), n),
        (t.add(&id), 0),
        (t.add(&id), n),
    ];
    let mut rows = Vec::new();
    for (b, off) in blocks {
        for r in b.to_rows() {
            let mut row = vec![Q::zero(); 2 * n];
            for (j, x) in r.into_iter().enumerate() {
                row[off + j] = x;
            }
            rows.push(row);
        }
    }
    let m_basis: Vec<CMat> = QMatrix::from_rows(rows)
        .nullspace()
        .iter()
        .map(|w| real_to_c(o, w))
        .collect();
    let k = m_basis.len();
    let size = o.m.n;
    let off_diag = |x: &CMat| -> Vec<Q> {
        let f = x.flatten();
        (0..2 * size * size)
            .filter(|p| (p % (size * size)) / size != p % size)
            .map(|p| f[p].clone())
            .collect()
    };
    let cols: Vec<Vec<Q>> = m_basis.iter().map(off_diag).collect();
    let a0 = if k == 0 {
        Vec::new()
    } else {
        QMatrix::from_columns(cols[0].len(), &cols).nullspace()
    };
    let as_mat = |c: &[Q]| {
        m_basis
            .iter()
            .zip(c)
            .fold(CMat::real(QMatrix::zeros(size, size)), |acc, (b, x)| {
                acc.add(&b.scale(x, &Q::zero()))
            })
    };
    let a0_diagonals = a0
        .iter()
        .map(|c| {
            let x = as_mat(c);
            (0..size).map(|i| x.re.get(i, i).clone()).collect()
        })
        .collect();
    let mut a = Subspace::span(k, &a0);
    loop {
        let elems: Vec<CMat> = a.basis().iter().map(|c| as_mat(c)).collect();
        let centralizer = if k == 0 {
            Vec::new()
        } else if elems.is_empty() {
            (0..k)
                .map(|i| {
                    (0..k)
                        .map(|j| if i == j { q(1) } else { Q::zero() })
                        .collect()
                })
                .collect()
        } else {
            let cols: Vec<Vec<Q>> = m_basis
                .iter()
                .map(|b| elems.iter().flat_map(|e| e.bracket(b).flatten()).collect())
                .collect();
            QMatrix::from_columns(cols[0].len(), &cols).nullspace()
        };
        match centralizer.iter().find(|c| !a.contains(c)) {
            Some(c) => {
                a.push(c);
            }
            None => {
                return RealRank {
                    a0: a0_diagonals,
                    rank: a.dim(),
                    maximal: centralizer.len() == a.dim(),
                }
            }
        }
    }
}

fn cayley_check(o: &Oracle, root: usize) -> Result<CayleyCheck> {
    let d = o.an.rf.datum();
    let label = d.root_label(root);
    let x = o.mat(&o.root_vectors[root]);
    let xb = o.m.sigma(&x);
    let fail = |pairing: Q| CayleyCheck {
        root: label.clone(),
        pairing,
        transport_residual: f64::INFINITY,
        kernel_residual: f64::INFINITY,
        exact_ok: false,
        phase_ok: false,
        pass: false,
    };
    match o.identify(&o.coords(&xb)?) {
        Some((j, _)) if j == d.negate(root) => {}
        _ => return Ok(fail(Q::zero())),
    }
    let h = commutator(&x, &xb);
    let lambda = o.value(root, &h);
    if !lambda.is_positive() {
        return Ok(fail(lambda));
    }
    let h_alpha = h.scale(&(q(2) / &lambda));
    let s = 1.0 / (lambda.to_f64().unwrap() / 2.0).sqrt();
    let xf = FMat::from_q(&x).scale(s);
    let xbf = FMat::from_q(&xb).scale(s);
    let z = xbf.sub(&xf).scale(std::f64::consts::FRAC_PI_4);
    let u = z.exp(EXP_SERIES_TOLERANCE);
    let uinv = z.scale(-1.0).exp(EXP_SERIES_TOLERANCE);
    let ad = |y: &FMat| u.mul(y).mul(&uinv);
    let transport = ad(&FMat::from_q(&h_alpha)).sub(&xf.add(&xbf)).max_abs();
    let kernel = o.kernel(root);
    let kernel_res = kernel
        .iter()
        .map(|k| {
            let kf = FMat::from_q(k);
            ad(&kf).sub(&kf).max_abs()
        })
        .fold(0.0, f64::max);
    let e = x.add(&xb);
    let exact_ok = o.m.theta.apply(&e) == e.scale(&q(-1))
        && o.m.sigma(&e) == e
        && kernel.iter().all(|k| commutator(&e, k).is_zero());
    let ec = CMat::real(e.clone());
    let phased = |a: Q, b: Q| {
        let y = CMat::real(x.clone()).scale(&a, &b);
        ec.bracket(&y.add(&o.m.sigma_c(&y)))
    };
    let phase_ok = !phased(qf(3, 5), qf(4, 5)).is_zero() && phased(q(-1), Q::zero()).is_zero();
    let pass =
        transport < CAYLEY_TOLERANCE && kernel_res < CAYLEY_TOLERANCE && exact_ok && phase_ok;
    Ok(CayleyCheck {
        root: label,
        pairing: lambda,
        transport_residual: transport,
        kernel_residual: kernel_res,
        exact_ok,
        phase_ok,
        pass,
    })
}

fn structure_ok(o: &Oracle, s: &QMatrix, t: &QMatrix) -> bool {
    let n = o.dim();
    let id = QMatrix::identity(n);
    if t.mul(t) != id || s.mul(s) != id || s.mul(t) != t.mul(s) {
        return false;
    }
    let basis = o.m.algebra.basis();
    let th: Vec<QMatrix> = basis.iter().map(|b| o.m.theta.apply(b)).collect();
    for i in 0..n {
        for j in i + 1..n {
            if o.m.theta.apply(&commutator(&basis[i], &basis[j])) != commutator(&th[i], &th[j]) {
                return false;
            }
        }
    }
    let plus = t.sub(&id).nullspace();
    let minus = t.add(&id).nullspace();
    plus.iter().all(|a| {
        minus
            .iter()
            .all(|b| trace(&o.mat(a).mul(&o.mat(b))).is_zero())
    })
}

/// Runs every oracle comparison for a preset-backed analysis.
pub fn run(an: &Analysis) -> Result<OracleReport> {
    let preset = an
        .rf
        .preset()
        .ok_or_else(|| Error::invalid("the oracle needs a preset real form"))?;
    compare(an, preset)
}

/// Compares `an` against the matrix model of `preset`, which need not be its own.
pub fn compare(an: &Analysis, preset: &Preset) -> Result<OracleReport> {
    let rf = &an.rf;
    let ecoords = rf
        .ecoords()
        .ok_or_else(|| Error::invalid(format!("no e-coordinates for {preset}")))?;
    let m = model_for(preset)?;
    let d = rf.datum();
    let functionals: Vec<Vec<Q>> = d.roots().iter().map(|r| ecoords.of(r)).collect();
    let spaces = root_spaces(&m, &functionals)?;
    let root_spaces_ok = spaces.is_some()
        && m.cartan.len() == d.rank()
        && m.algebra.dim() == d.rank() + d.num_roots();
    let Some(root_vectors) = spaces.filter(|_| root_spaces_ok) else {
        return Ok(failed_report(an, preset, &m));
    };
    let o = Oracle {
        an,
        m,
        root_vectors,
        functionals,
    };
    let t = o.linear_map(|x| o.m.theta.apply(x))?;
    let s = o.linear_map(|x| o.m.sigma(x))?;

    let cls = rf.classification();
    let mut mismatches = Vec::new();
    for i in 0..d.num_roots() {
        let img: Vec<Q> = t.mul_vec(&o.root_vectors[i]);
        let (kind, image) = match o.identify(&img) {
            Some((j, l)) if j == i && l == q(1) => (RootKind::ImaginaryCompact, i),
            Some((j, l)) if j == i && l == q(-1) => (RootKind::ImaginaryNoncompact, i),
            Some((j, _)) if j != i => (RootKind::Complex, j),
            _ => {
                mismatches.push(format!(
                    "theta does not map root space {} to a root space",
                    d.root_label(i)
                ));
                continue;
            }
        };
        if kind != cls.kind(i) || image != cls.theta_image(i) {
            mismatches.push(format!(
                "root {}: oracle {:?} -> {}, combinatorial {:?} -> {}",
                d.root_label(i),
                kind,
                d.root_label(image),
                cls.kind(i),
                d.root_label(cls.theta_image(i))
            ));
        }
    }
    let n = o.dim();
    let dim_k_oracle = n - t.sub(&QMatrix::identity(n)).rank();
    let dim_k_combinatorial =
        rf.t_basis().len() + cls.imaginary_compact().len() + cls.complex().len() / 2;
    let rr = real_rank(&o, &s, &t);
    let (a0_dim_oracle, real_rank_oracle, real_rank_maximal) = (rr.a0.len(), rr.rank, rr.maximal);
    let real_rank_combinatorial = maximal_class(&an.classes).a_basis.len();
    let structure_ok = structure_ok(&o, &s, &t);
    let cayley = d
        .positive_roots()
        .filter(|&i| cls.kind(i) == RootKind::ImaginaryNoncompact)
        .map(|i| cayley_check(&o, i))
        .collect::<Result<Vec<_>>>()?;

    let agrees = mismatches.is_empty()
        && dim_k_oracle == dim_k_combinatorial
        && a0_dim_oracle == rf.a0_basis().len()
        && real_rank_oracle == real_rank_combinatorial
        && real_rank_maximal
        && structure_ok
        && cayley.iter().all(|c| c.pass);
    Ok(OracleReport {
        preset: preset.to_string(),
        matrix_size: o.m.n,
        dim_complex_algebra: n,
        cartan_dim: o.m.cartan.len(),
        root_spaces_ok,
        classification_mismatches: mismatches,
        dim_k_oracle,
        dim_k_combinatorial,
        a0_dim_oracle,
        a0_dim_combinatorial: rf.a0_basis().len(),
        a0_diagonals: rr.a0,
        real_rank_oracle,
        real_rank_combinatorial,
        real_rank_maximal,
        structure_ok,
        cayley,
        agrees,
    })
}

fn failed_report(an: &Analysis, preset: &Preset, m: &MatrixModel) -> OracleReport {
    OracleReport {
        preset: preset.to_string(),
        matrix_size: m.n,
        dim_complex_algebra: m.algebra.dim(),
        cartan_dim: m.cartan.len(),
        root_spaces_ok: false,
        classification_mismatches: Vec::new(),
        dim_k_oracle: 0,
        dim_k_combinatorial: 0,
        a0_dim_oracle: 0,
        a0_dim_combinatorial: an.rf.a0_basis().len(),
        a0_diagonals: Vec::new(),
        real_rank_oracle: 0,
        real_rank_combinatorial: maximal_class(&an.classes).a_basis.len(),
        real_rank_maximal: false,
        structure_ok: false,
        cayley: Vec::new(),
        agrees: false,
    }
}

/// Like [`run`], but a disagreement is an error.
pub fn check(an: &Analysis) -> Result<OracleReport> {
    let r = run(an)?;
    if r.agrees {
        Ok(r)
    } else {
        Err(Error::OracleMismatch(r.summary()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realform::{resolve_preset, LatticeChoice, Limits};

    fn analysis(s: &str) -> Analysis {
        let rf = resolve_preset(
            &s.parse().unwrap(),
            LatticeChoice::SimplyConnected,
            Limits::default(),
        )
        .unwrap();
        Analysis::new(rf, Limits::default()).unwrap()
    }

    #[test]
    fn su11_agrees() {
        let r = run(&analysis("su(1,1)")).unwrap();
        assert!(r.agrees, "{}", r.summary());
        assert_eq!(r.real_rank_oracle, 1);
        assert_eq!(r.cayley.len(), 1);
        assert!(r.cayley[0].pairing.is_positive());
    }

    #[test]
    fn small_forms_agree() {
        for s in [
            "su(2,1)",
            "sl(3,R)",
            "sustar(4)",
            "sp(4,R)",
            "so(3,2)",
            "so(2,2)",
            "complex(A1)",
            "compact(B2)",
        ] {
            let r = run(&analysis(s)).unwrap();
            assert!(r.agrees, "{}", r.summary());
        }
    }

    #[test]
    fn sustar4_split_part() {
        let r = run(&analysis("sustar(4)")).unwrap();
        assert!(r.agrees);
        assert_eq!(r.real_rank_oracle, 1);
        assert_eq!(r.a0_diagonals.len(), 1);
        let v = &r.a0_diagonals[0];
        let pattern = [1, -1, -1, 1];
        assert!(v.iter().zip(pattern).all(|(x, p)| *x == &v[0] * q(p)));
    }

    #[test]
    fn detects_a_wrong_grading() {
        let r = compare(&analysis("su(2,1)"), &"su(3,0)".parse().unwrap()).unwrap();
        assert!(!r.agrees);
        assert_eq!(r.classification_mismatches.len(), 4);
        assert!(matches!(check(&analysis("su(2,1)")), Ok(_)));
    }

    #[test]
    fn unsupported_is_invalid() {
        assert!(matches!(
            run(&analysis("compact(G2)")),
            Err(Error::InvalidInput(_))
        ));
    }
}
