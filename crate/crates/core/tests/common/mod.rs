//! Shared fixtures and property checks for the integration tests.
#![allow(dead_code)]

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use ellhiggs::abvar::fixed_subgroup;
use ellhiggs::cayley::enumerate_admissible;
use ellhiggs::moduli::Analysis;
use ellhiggs::realform::{resolve_preset, LatticeChoice, Limits};
use ellhiggs::rootdata::{smith_normal_form, CartanType, RootDatum, ZMatrix, DEFAULT_GROUP_CAP};

/// Every preset covered by the dimension, Hitchin-base and involution criteria.
pub fn criterion_presets() -> Vec<String> {
    let mut v = Vec::new();
    for n in 2..=5 {
        for q in 0..=n / 2 {
            v.push(format!("su({},{})", n - q, q));
        }
    }
    for n in 2..=5 {
        v.push(format!("sl({n},R)"));
    }
    for n in 1..=3 {
        v.push(format!("sustar({})", 2 * n));
        v.push(format!("sp({},R)", 2 * n));
    }
    for n in 3..=7 {
        for q in 0..=n / 2 {
            v.push(format!("so({},{})", n - q, q));
        }
    }
    for ct in ["A1", "A2", "A3", "B2", "B3", "C2", "C3", "G2"] {
        v.push(format!("compact({ct})"));
        v.push(format!("complex({ct})"));
    }
    v
}

/// A smaller spread used by the randomized properties.
pub const PROPERTY_PRESETS: &[&str] = &[
    "su(1,1)",
    "su(2,1)",
    "su(2,2)",
    "sl(3,R)",
    "sl(4,R)",
    "sustar(4)",
    "sp(4,R)",
    "sp(6,R)",
    "so(3,2)",
    "so(3,3)",
    "so(4,3)",
    "so(5,2)",
    "compact(G2)",
    "complex(A2)",
    "complex(B2)",
];

pub fn fresh_analysis(s: &str) -> Analysis {
    let rf = resolve_preset(
        &s.parse().unwrap(),
        LatticeChoice::SimplyConnected,
        Limits::default(),
    )
    .unwrap_or_else(|e| panic!("{s}: {e}"));
    Analysis::new(rf, Limits::default()).unwrap_or_else(|e| panic!("{s}: {e}"))
}

/// Cached analyses, so property cases do not rebuild them.
pub fn analysis(s: &str) -> Arc<Analysis> {
    static CACHE: OnceLock<Mutex<HashMap<String, Arc<Analysis>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(a) = cache.lock().unwrap().get(s) {
        return a.clone();
    }
    let a = Arc::new(fresh_analysis(s));
    cache.lock().unwrap().insert(s.to_string(), a.clone());
    a
}

/// Weyl group order by breadth-first search over reflection matrices built straight
/// from a Cartan matrix, without the library's group machinery.
pub fn weyl_order_by_search(cartan: &[Vec<i64>]) -> usize {
    let n = cartan.len();
    // s_i(alpha_j) = alpha_j - a_ij alpha_i with a_ij = <alpha_i^vee, alpha_j>
    let gens: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut m = vec![0i64; n * n];
            for j in 0..n {
                m[j * n + j] = 1;
                m[i * n + j] -= cartan[i][j];
            }
            m
        })
        .collect();
    let mul = |a: &[i64], b: &[i64]| -> Vec<i64> {
        let mut c = vec![0i64; n * n];
        for i in 0..n {
            for k in 0..n {
                for j in 0..n {
                    c[i * n + j] += a[i * n + k] * b[k * n + j];
                }
            }
        }
        c
    };
    let id: Vec<i64> = (0..n * n).map(|p| (p / n == p % n) as i64).collect();
    let mut seen = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in &gens {
            let y = mul(g, &x);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen.len()
}

pub const CARTAN_TYPES: &[&str] = &[
    "A1", "A2", "A3", "A4", "B2", "B3", "C3", "D4", "G2", "A1xB2", "F4",
];

pub fn datum(ct: &str) -> RootDatum {
    RootDatum::build(&ct.parse::<CartanType>().unwrap()).unwrap()
}

fn cached_datum(ct: &str) -> Arc<RootDatum> {
    static CACHE: OnceLock<Mutex<HashMap<String, Arc<RootDatum>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    cache
        .lock()
        .unwrap()
        .entry(ct.to_string())
        .or_insert_with(|| Arc::new(datum(ct)))
        .clone()
}

/// A word in simple reflections permutes the roots, preserves the form, lies in the
/// generated group, and composing with another element stays inside it.
pub fn check_weyl_word(ct_idx: usize, word: &[usize], other: usize) -> Result<(), TestCaseError> {
    let ct = CARTAN_TYPES[ct_idx % CARTAN_TYPES.len()];
    let d = cached_datum(ct);
    let r = d.rank();
    let mut m = ellhiggs::rootdata::IntMat::identity(r);
    for &i in word {
        m = m.mul(&d.simple_reflections()[i % r]);
    }
    prop_assert!(d.permutes_roots(&m), "{ct}: word does not permute roots");
    prop_assert!(d.is_isometry(&m), "{ct}: word is not an isometry");
    let w = weyl_of(ct);
    prop_assert!(w.contains_matrix(&m), "{ct}: word not in W");
    let e = ellhiggs::rootdata::WeylElement::from_matrix(&d, &m).unwrap();
    let o = w.element(other % w.order()).clone();
    prop_assert!(w.contains(&e.compose(&d, &o)));
    prop_assert!(w.contains(&o.compose(&d, &e)));
    Ok(())
}

fn weyl_of(ct: &str) -> Arc<ellhiggs::rootdata::WeylGroup> {
    static CACHE: OnceLock<Mutex<HashMap<String, Arc<ellhiggs::rootdata::WeylGroup>>>> =
        OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(w) = cache.lock().unwrap().get(ct) {
        return w.clone();
    }
    let w = Arc::new(cached_datum(ct).weyl_group(DEFAULT_GROUP_CAP).unwrap());
    cache.lock().unwrap().insert(ct.to_string(), w.clone());
    w
}

pub fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=6, 1usize..=6)
        .prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-30i64..=30, c), r))
}

fn zmat(rows: &[Vec<i64>]) -> ZMatrix {
    ZMatrix::from_i64_rows(rows)
}

fn gcd_all(xs: impl Iterator<Item = BigInt>) -> BigInt {
    xs.fold(BigInt::zero(), |a, b| a.gcd(&b))
}

/// `U m V = D`, `U` and `V` unimodular, `D` diagonal with a divisibility chain, and the
/// first divisor equal to the gcd of the entries (and the product to |det| when square).
pub fn check_snf(rows: &[Vec<i64>]) -> Result<(), TestCaseError> {
    let m = zmat(rows);
    let s = smith_normal_form(&m);
    prop_assert_eq!(s.u.mul(&m).mul(&s.v), s.d.clone());
    prop_assert!(s.u.determinant().abs() == BigInt::from(1));
    prop_assert!(s.v.determinant().abs() == BigInt::from(1));
    prop_assert!(s.d.is_diagonal());
    let k = s.d.rows().min(s.d.cols());
    let diag: Vec<BigInt> = (0..k).map(|i| s.d.get(i, i).clone()).collect();
    for w in diag.windows(2) {
        prop_assert!(!w[0].is_negative() && !w[1].is_negative());
        if w[0].is_zero() {
            prop_assert!(w[1].is_zero());
        } else {
            prop_assert!((&w[1] % &w[0]).is_zero(), "chain broken: {:?}", diag);
        }
    }
    let g = gcd_all(rows.iter().flatten().map(|&x| BigInt::from(x)));
    prop_assert_eq!(diag[0].clone(), g);
    if m.rows() == m.cols() {
        let prod: BigInt = diag.iter().product();
        prop_assert_eq!(prod, m.determinant().abs());
    }
    Ok(())
}

/// Every element of W commutes with theta.
pub fn check_theta_commutes(preset_idx: usize, elem: usize) -> Result<(), TestCaseError> {
    let s = PROPERTY_PRESETS[preset_idx % PROPERTY_PRESETS.len()];
    let an = analysis(s);
    let d = an.rf.datum();
    let w = an.rf.weyl();
    let m = w.element(elem % w.order()).matrix(d);
    let t = an.rf.theta();
    prop_assert_eq!(t.mul(&m), m.mul(t), "{}", s);
    Ok(())
}

/// W maps admissible systems to admissible systems.
pub fn check_upsilon_invariant(preset_idx: usize, elem: usize) -> Result<(), TestCaseError> {
    let s = PROPERTY_PRESETS[preset_idx % PROPERTY_PRESETS.len()];
    let an = analysis(s);
    let d = an.rf.datum();
    let w = an.rf.weyl();
    let e = w.element(elem % w.order());
    for b in &an.upsilon {
        prop_assert!(
            an.upsilon.contains(&b.translate(d, e)),
            "{s}: {:?} leaves Y",
            b.labels(d)
        );
    }
    // the enumeration itself is reproducible
    prop_assert_eq!(
        enumerate_admissible(&an.rf, 1 << 20).unwrap(),
        an.upsilon.clone()
    );
    Ok(())
}

/// Elementary row operations `(i, j, k)`: row i += k row j.
pub fn unimodular(n: usize, ops: &[(usize, usize, i64)]) -> (ZMatrix, ZMatrix) {
    let mut p = ZMatrix::identity(n);
    let mut pinv = ZMatrix::identity(n);
    for &(i, j, k) in ops {
        let (i, j) = (i % n, j % n);
        if i == j {
            continue;
        }
        let mut e = ZMatrix::identity(n);
        e.set(i, j, BigInt::from(k));
        let mut einv = ZMatrix::identity(n);
        einv.set(i, j, BigInt::from(-k));
        p = e.mul(&p);
        pinv = pinv.mul(&einv);
    }
    (p, pinv)
}

/// `Fix(P g P^-1) = P Fix(g)`: same invariants, and P carries one identity lattice onto the other.
pub fn check_fixed_equivariance(
    preset_idx: usize,
    elem: usize,
    ops: &[(usize, usize, i64)],
) -> Result<(), TestCaseError> {
    let s = PROPERTY_PRESETS[preset_idx % PROPERTY_PRESETS.len()];
    let an = analysis(s);
    let action = an.lattice_action(an.rf.weyl()).unwrap();
    let n = an.rf.lambda_t().rank();
    if n == 0 {
        return Ok(());
    }
    let g = &action[elem % action.len()];
    let (p, pinv) = unimodular(n, ops);
    prop_assert_eq!(p.mul(&pinv), ZMatrix::identity(n));
    let f = fixed_subgroup(g);
    let fc = fixed_subgroup(&p.mul(g).mul(&pinv));
    prop_assert_eq!(f.identity_dim, fc.identity_dim);
    prop_assert_eq!(&f.divisors, &fc.divisors);
    let moved: Vec<Vec<BigInt>> = f
        .identity_lattice
        .basis()
        .iter()
        .map(|v| {
            let col = ZMatrix::from_rows(v.iter().map(|x| vec![x.clone()]).collect());
            p.mul(&col).column(0)
        })
        .collect();
    prop_assert_eq!(
        ellhiggs::rootdata::IntLattice::span(n, &moved),
        fc.identity_lattice.clone()
    );
    Ok(())
}
