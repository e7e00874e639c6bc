//! Vogan data for the classical real forms.
//!
//! Every classical preset also fixes "e-coordinates": the simple roots written in the
//! standard diagonal coordinates of its matrix realization, together with theta in
//! those coordinates. The oracle uses the same coordinates to match root spaces.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{q, QMatrix, Q};
use crate::rootdata::{CartanType, Family, IntMat};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Preset {
    Su {
        p: usize,
        q: usize,
    },
    SlR {
        n: usize,
    },
    /// su*(2n), stored by `n`.
    SuStar {
        n: usize,
    },
    /// sp(2n, R), stored by `n`.
    SpR {
        n: usize,
    },
    So {
        p: usize,
        q: usize,
    },
    Compact(CartanType),
    Complex(CartanType),
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Preset::Su { p, q } => write!(f, "su({p},{q})"),
            Preset::SlR { n } => write!(f, "sl({n},R)"),
            Preset::SuStar { n } => write!(f, "sustar({})", 2 * n),
            Preset::SpR { n } => write!(f, "sp({},R)", 2 * n),
            Preset::So { p, q } => write!(f, "so({p},{q})"),
            Preset::Compact(ct) => write!(f, "compact({ct})"),
            Preset::Complex(ct) => write!(f, "complex({ct})"),
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Preset> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let open = t.find('(').ok_or_else(|| unknown(s))?;
        if !t.ends_with(')') {
            return Err(unknown(s));
        }
        let name = t[..open].to_ascii_lowercase();
        let args: Vec<&str> = t[open + 1..t.len() - 1].split(',').collect();
        let num = |a: &str| {
            a.parse::<usize>()
                .map_err(|_| Error::invalid(format!("bad parameter '{a}' in {s}")))
        };
        let real_suffix = |args: &[&str]| args.len() == 2 && args[1].eq_ignore_ascii_case("r");
        let p = match name.as_str() {
            "su" if args.len() == 2 => Preset::Su {
                p: num(args[0])?,
                q: num(args[1])?,
            },
            "so" if args.len() == 2 => Preset::So {
                p: num(args[0])?,
                q: num(args[1])?,
            },
            "sl" if real_suffix(&args) => Preset::SlR { n: num(args[0])? },
            "sp" if real_suffix(&args) => {
                let m = num(args[0])?;
                if m % 2 != 0 {
                    return Err(Error::invalid(format!("sp(m,R) needs even m, got {m}")));
                }
                Preset::SpR { n: m / 2 }
            }
            "sustar" | "su*" if args.len() == 1 => {
                let m = num(args[0])?;
                if m % 2 != 0 {
                    return Err(Error::invalid(format!("su*(m) needs even m, got {m}")));
                }
                Preset::SuStar { n: m / 2 }
            }
            "compact" if args.len() == 1 => Preset::Compact(args[0].parse()?),
            "complex" if args.len() == 1 => Preset::Complex(args[0].parse()?),
            _ => return Err(unknown(s)),
        };
        p.validate()?;
        Ok(p)
    }
}

fn unknown(s: &str) -> Error {
    Error::invalid(format!("unknown preset '{s}'"))
}

impl Preset {
    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::invalid(m));
        match *self {
            Preset::Su { p, q } if p + q < 2 => bad(format!("su({p},{q}) is not semisimple")),
            Preset::SlR { n } if n < 2 => bad(format!("sl({n},R) is not semisimple")),
            Preset::SuStar { n } if n < 1 => bad("su*(0) is empty".into()),
            Preset::SpR { n } if n < 1 => bad("sp(0,R) is empty".into()),
            Preset::So { p, q } if p + q < 3 => bad(format!("so({p},{q}) is abelian or zero")),
            _ => Ok(()),
        }
    }

    /// Signs of the coordinate pairs for so(p,q) and how the middle is handled.
    pub fn so_signs(p: usize, q: usize) -> SoSigns {
        let n = p + q;
        let m = n / 2;
        if n % 2 == 1 {
            let plus = p / 2;
            SoSigns {
                eps: (0..m).map(|i| if i < plus { 1 } else { -1 }).collect(),
                middle: SoMiddle::Odd(if p % 2 == 1 { 1 } else { -1 }),
            }
        } else if p % 2 == 0 {
            let plus = p / 2;
            SoSigns {
                eps: (0..m).map(|i| if i < plus { 1 } else { -1 }).collect(),
                middle: SoMiddle::None,
            }
        } else {
            let plus = (p - 1) / 2;
            SoSigns {
                eps: (0..m - 1).map(|i| if i < plus { 1 } else { -1 }).collect(),
                middle: SoMiddle::Swap,
            }
        }
    }
}

/// Diagonal sign pattern of the Cartan involution for so(p,q) on the antidiagonal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SoSigns {
    /// One sign per coordinate pair; in the `Swap` case the last coordinate has no sign.
    pub eps: Vec<i64>,
    pub middle: SoMiddle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SoMiddle {
    /// even dimension, equal rank
    None,
    /// odd dimension; sign of the middle basis vector
    Odd(i64),
    /// even dimension with p, q odd: the middle pair is swapped
    Swap,
}

/// Simple roots and theta in the diagonal coordinates of a matrix realization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ECoordinates {
    /// `e_dim x rank`; column `j` is simple root `j`.
    pub simple_roots: QMatrix,
    /// `e_dim x e_dim`.
    pub theta: QMatrix,
}

impl ECoordinates {
    pub fn dim(&self) -> usize {
        self.simple_roots.rows()
    }

    pub fn of(&self, root: &[i64]) -> Vec<Q> {
        let v: Vec<Q> = root.iter().map(|&x| q(x)).collect();
        self.simple_roots.mul_vec(&v)
    }

    /// theta in root coordinates, when the e-coordinate theta preserves the root span.
    pub fn theta_on_roots(&self) -> Result<IntMat> {
        let s = &self.simple_roots;
        let st = s.transpose();
        let gram_inv = st
            .mul(s)
            .inverse()
            .ok_or_else(|| Error::invariant("simple roots are dependent"))?;
        let t = gram_inv.mul(&st).mul(&self.theta).mul(s);
        if s.mul(&t) != self.theta.mul(s) {
            return Err(Error::invariant("theta does not preserve the root span"));
        }
        IntMat::from_q(&t).ok_or_else(|| Error::invariant("theta is not integral on roots"))
    }
}

fn e(dim: usize, entries: &[(usize, i64)]) -> Vec<Q> {
    let mut v = vec![Q::zero(); dim];
    for &(i, x) in entries {
        v[i] += q(x);
    }
    v
}

fn chain(dim: usize, len: usize, off: usize) -> Vec<Vec<Q>> {
    (0..len)
        .map(|i| e(dim, &[(off + i, 1), (off + i + 1, -1)]))
        .collect()
}

/// Simple roots of a classical simple type in standard coordinates, as columns.
fn classical_simple(f: Family, n: usize) -> Option<Vec<Vec<Q>>> {
    Some(match f {
        Family::A => chain(n + 1, n, 0),
        Family::B => {
            let mut s = chain(n, n - 1, 0);
            s.push(e(n, &[(n - 1, 1)]));
            s
        }
        Family::C => {
            let mut s = chain(n, n - 1, 0);
            s.push(e(n, &[(n - 1, 2)]));
            s
        }
        Family::D => {
            let mut s = chain(n, n - 1, 0);
            s.push(e(n, &[(n - 2, 1), (n - 1, 1)]));
            s
        }
        _ => return None,
    })
}

fn classical_dim(f: Family, n: usize) -> usize {
    if f == Family::A {
        n + 1
    } else {
        n
    }
}

/// Block-diagonal e-coordinates for a product of classical types.
fn product_simple(ct: &CartanType) -> Option<QMatrix> {
    let dims: Vec<usize> = ct
        .components()
        .iter()
        .map(|&(f, n)| classical_dim(f, n))
        .collect();
    let total: usize = dims.iter().sum();
    let mut cols = Vec::new();
    let mut off = 0;
    for (&(f, n), &dim) in ct.components().iter().zip(&dims) {
        for c in classical_simple(f, n)? {
            let mut v = vec![Q::zero(); total];
            for (i, x) in c.into_iter().enumerate() {
                v[off + i] = x;
            }
            cols.push(v);
        }
        off += dim;
    }
    Some(QMatrix::from_columns(total, &cols))
}

fn flip(n: usize) -> QMatrix {
    let mut t = QMatrix::zeros(n, n);
    for k in 0..n {
        t.set(n - 1 - k, k, q(-1));
    }
    t
}

/// Nonzero coordinates of an e-vector.
fn support(v: &[Q]) -> Vec<usize> {
    (0..v.len()).filter(|&i| !v[i].is_zero()).collect()
}

pub(crate) type NoncompactRule = Box<dyn Fn(&[Q]) -> bool>;

pub(crate) struct PresetData {
    pub cartan_type: CartanType,
    pub ecoords: Option<ECoordinates>,
    /// theta on root coordinates; for classical presets it is derived from `ecoords`.
    pub theta: Option<IntMat>,
    /// decides imaginary roots given in e-coordinates (or in root coordinates if `ecoords` is None)
    pub noncompact: NoncompactRule,
}

pub(crate) fn preset_data(p: &Preset) -> Result<PresetData> {
    p.validate()?;
    let a = |n: usize| CartanType::simple(Family::A, n);
    Ok(match p.clone() {
        Preset::Su { p, q: qq } => {
            let n = p + qq;
            PresetData {
                cartan_type: a(n - 1)?,
                ecoords: Some(ECoordinates {
                    simple_roots: QMatrix::from_columns(n, &chain(n, n - 1, 0)),
                    theta: QMatrix::identity(n),
                }),
                theta: None,
                noncompact: Box::new(move |v| {
                    let s = support(v);
                    (s[0] < p) != (s[1] < p)
                }),
            }
        }
        Preset::SlR { n } => {
            let (ct, s) = if n == 2 {
                (a(1)?, QMatrix::from_columns(2, &chain(2, 1, 0)))
            } else {
                (a(n - 1)?, QMatrix::from_columns(n, &chain(n, n - 1, 0)))
            };
            PresetData {
                cartan_type: ct,
                ecoords: Some(ECoordinates {
                    simple_roots: s,
                    theta: flip(n),
                }),
                theta: None,
                noncompact: Box::new(|_| true),
            }
        }
        Preset::SuStar { n } => {
            let m = 2 * n;
            PresetData {
                cartan_type: a(m - 1)?,
                ecoords: Some(ECoordinates {
                    simple_roots: QMatrix::from_columns(m, &chain(m, m - 1, 0)),
                    theta: flip(m),
                }),
                theta: None,
                noncompact: Box::new(|_| false),
            }
        }
        Preset::SpR { n } => {
            let (ct, cols) = if n == 1 {
                (a(1)?, vec![e(1, &[(0, 2)])])
            } else {
                (
                    CartanType::simple(Family::C, n)?,
                    classical_simple(Family::C, n).unwrap(),
                )
            };
            PresetData {
                cartan_type: ct,
                ecoords: Some(ECoordinates {
                    simple_roots: QMatrix::from_columns(n, &cols),
                    theta: QMatrix::identity(n),
                }),
                theta: None,
                noncompact: Box::new(|v| !v.iter().fold(Q::zero(), |acc, x| acc + x).is_zero()),
            }
        }
        Preset::So { p, q: qq } => so_data(p, qq)?,
        Preset::Compact(ct) => {
            let ecoords = product_simple(&ct).map(|s| {
                let d = s.rows();
                ECoordinates {
                    simple_roots: s,
                    theta: QMatrix::identity(d),
                }
            });
            PresetData {
                theta: ecoords.is_none().then(|| IntMat::identity(ct.rank())),
                cartan_type: ct,
                ecoords,
                noncompact: Box::new(|_| false),
            }
        }
        Preset::Complex(ct) => {
            let r = ct.rank();
            let doubled = ct.product(&ct);
            // second factor enters with negated e-coordinates; theta(x, y) = (-y, -x)
            let ecoords = product_simple(&ct).map(|s| {
                let (d, r) = (s.rows(), s.cols());
                let mut big = QMatrix::zeros(2 * d, 2 * r);
                let mut th = QMatrix::zeros(2 * d, 2 * d);
                for i in 0..d {
                    for j in 0..r {
                        big.set(i, j, s.get(i, j).clone());
                        big.set(d + i, r + j, -s.get(i, j).clone());
                    }
                    th.set(i, d + i, q(-1));
                    th.set(d + i, i, q(-1));
                }
                ECoordinates {
                    simple_roots: big,
                    theta: th,
                }
            });
            let mut swap = IntMat::identity(2 * r);
            for i in 0..r {
                swap.set(i, i, 0);
                swap.set(r + i, r + i, 0);
                swap.set(i, r + i, 1);
                swap.set(r + i, i, 1);
            }
            PresetData {
                cartan_type: doubled,
                theta: ecoords.is_none().then_some(swap),
                ecoords,
                noncompact: Box::new(|_| false),
            }
        }
    })
}

fn so_data(p: usize, qq: usize) -> Result<PresetData> {
    let n = p + qq;
    let signs = Preset::so_signs(p, qq);
    let m = n / 2;
    let (ct, cols): (CartanType, Vec<Vec<Q>>) = match n {
        3 => (CartanType::simple(Family::A, 1)?, vec![e(1, &[(0, 1)])]),
        4 => (
            CartanType::new(vec![(Family::A, 1), (Family::A, 1)])?,
            vec![e(2, &[(0, 1), (1, -1)]), e(2, &[(0, 1), (1, 1)])],
        ),
        _ if n % 2 == 1 => (
            CartanType::simple(Family::B, m)?,
            classical_simple(Family::B, m).unwrap(),
        ),
        _ => (
            CartanType::simple(Family::D, m)?,
            classical_simple(Family::D, m).unwrap(),
        ),
    };
    let mut theta = QMatrix::identity(m);
    if signs.middle == SoMiddle::Swap {
        theta.set(m - 1, m - 1, q(-1));
    }
    let eps = signs.eps.clone();
    let middle = signs.middle;
    Ok(PresetData {
        cartan_type: ct,
        ecoords: Some(ECoordinates {
            simple_roots: QMatrix::from_columns(m, &cols),
            theta,
        }),
        theta: None,
        noncompact: Box::new(move |v| {
            let s = support(v);
            match (s.as_slice(), middle) {
                (&[i], SoMiddle::Odd(e0)) => eps[i] != e0,
                (&[i, j], _) => eps[i] != eps[j],
                _ => unreachable!("imaginary so roots have one or two coordinates"),
            }
        }),
    })
}
