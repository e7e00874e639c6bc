//! Admissible systems of strongly orthogonal roots and the Cartan classes they index.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::linalg::{restrict_to, QMatrix, Q};
use crate::realform::RealForm;
use crate::rootdata::{MatrixGroup, RootDatum, WeylGroup};

pub const DEFAULT_UPSILON_CAP: usize = 1_000_000;

/// Neither `a + b` nor `a - b` is a root; false for `b = a` or `b = -a`.
pub fn strongly_orthogonal(d: &RootDatum, a: usize, b: usize) -> Result<bool> {
    let n = d.num_roots();
    if a >= n || b >= n {
        return Err(Error::invalid("not a root index"));
    }
    if a == b || a == d.negate(b) {
        return Ok(false);
    }
    let (ra, rb) = (d.root(a), d.root(b));
    let sum: Vec<i64> = ra.iter().zip(rb).map(|(x, y)| x + y).collect();
    let diff: Vec<i64> = ra.iter().zip(rb).map(|(x, y)| x - y).collect();
    Ok(!d.is_root(&sum) && !d.is_root(&diff))
}

/// A sorted set of positive imaginary noncompact roots, pairwise strongly orthogonal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AdmissibleSystem {
    roots: Vec<usize>,
}

impl AdmissibleSystem {
    pub fn empty() -> Self {
        AdmissibleSystem { roots: Vec::new() }
    }

    /// Checks admissibility against `rf`.
    pub fn new(rf: &RealForm, mut roots: Vec<usize>) -> Result<Self> {
        roots.sort_unstable();
        roots.dedup();
        let nc = rf.positive_noncompact();
        for &r in &roots {
            if !nc.contains(&r) {
                return Err(Error::invalid(format!(
                    "{} is not a positive imaginary noncompact root",
                    rf.datum().root_label(r)
                )));
            }
        }
        for (i, &a) in roots.iter().enumerate() {
            for &b in &roots[i + 1..] {
                if !strongly_orthogonal(rf.datum(), a, b)? {
                    return Err(Error::invalid("roots are not strongly orthogonal"));
                }
            }
        }
        Ok(AdmissibleSystem { roots })
    }

    pub fn roots(&self) -> &[usize] {
        &self.roots
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn is_subset_of(&self, other: &AdmissibleSystem) -> bool {
        self.roots.iter().all(|r| other.roots.contains(r))
    }

    pub fn labels(&self, d: &RootDatum) -> Vec<String> {
        self.roots.iter().map(|&r| d.root_label(r)).collect()
    }

    /// Image under a group element, with each root replaced by the positive one of the pair.
    pub fn translate(&self, d: &RootDatum, w: &crate::rootdata::WeylElement) -> AdmissibleSystem {
        let mut roots: Vec<usize> = self
            .roots
            .iter()
            .map(|&r| d.positive_of(w.apply_root(d, r)))
            .collect();
        roots.sort_unstable();
        AdmissibleSystem { roots }
    }
}

/// All admissible systems, ordered by size then lexicographically.
pub fn enumerate_admissible(rf: &RealForm, cap: usize) -> Result<Vec<AdmissibleSystem>> {
    let d = rf.datum();
    let nc = rf.positive_noncompact();
    let mut out = Vec::new();
    let mut stack = Vec::new();
    fn dfs(
        d: &RootDatum,
        nc: &[usize],
        start: usize,
        stack: &mut Vec<usize>,
        out: &mut Vec<AdmissibleSystem>,
        cap: usize,
    ) -> Result<()> {
        if out.len() >= cap {
            return Err(Error::CapExceeded {
                what: "admissible systems".into(),
                cap,
                partial: out.len(),
            });
        }
        out.push(AdmissibleSystem {
            roots: stack.clone(),
        });
        for k in start..nc.len() {
            let r = nc[k];
            let mut ok = true;
            for &s in stack.iter() {
                if !strongly_orthogonal(d, r, s)? {
                    ok = false;
                    break;
                }
            }
            if ok {
                stack.push(r);
                dfs(d, nc, k + 1, stack, out, cap)?;
                stack.pop();
            }
        }
        Ok(())
    }
    dfs(d, &nc, 0, &mut stack, &mut out, cap)?;
    out.sort_by(|a, b| (a.len(), &a.roots).cmp(&(b.len(), &b.roots)));
    Ok(out)
}

/// One W-class of admissible systems with its Cartan coordinates.
#[derive(Clone, Debug)]
pub struct CartanClass {
    pub representative: AdmissibleSystem,
    pub members: Vec<AdmissibleSystem>,
    pub t_basis: Vec<Vec<Q>>,
    /// `a_0` basis followed by the coroots of the representative
    pub a_basis: Vec<Vec<Q>>,
    pub gamma_order: usize,
    pub zwb: WeylGroup,
    pub normalizer_action: MatrixGroup,
}

impl CartanClass {
    pub fn orbit_size(&self) -> usize {
        self.members.len()
    }
}

/// Partition of Y into W-orbits, as lists of indices into `upsilon`.
pub fn orbits(rf: &RealForm, upsilon: &[AdmissibleSystem]) -> Vec<Vec<usize>> {
    let d = rf.datum();
    let w = rf.weyl();
    let index: HashMap<&AdmissibleSystem, usize> =
        upsilon.iter().enumerate().map(|(i, b)| (b, i)).collect();
    let mut seen = vec![false; upsilon.len()];
    let mut out = Vec::new();
    for start in 0..upsilon.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut orbit = vec![start];
        let mut head = 0;
        while head < orbit.len() {
            let b = &upsilon[orbit[head]];
            head += 1;
            for g in w.generators() {
                let img = b.translate(d, g);
                let k = *index.get(&img).expect("admissible systems are W-stable");
                if !seen[k] {
                    seen[k] = true;
                    orbit.push(k);
                }
            }
        }
        orbit.sort_unstable();
        out.push(orbit);
    }
    out
}

/// `t_B` and `a_B` in root coordinates.
pub fn cartan_coordinates(rf: &RealForm, b: &AdmissibleSystem) -> (Vec<Vec<Q>>, Vec<Vec<Q>>) {
    let d = rf.datum();
    let t = rf.t_basis();
    let t_b = if b.is_empty() || t.is_empty() {
        t.to_vec()
    } else {
        // coefficients c with <beta, sum c_i t_i> = 0
        let rows: Vec<Vec<Q>> = b
            .roots()
            .iter()
            .map(|&r| t.iter().map(|v| d.inner(&d.root_q(r), v)).collect())
            .collect();
        QMatrix::from_rows(rows)
            .nullspace()
            .into_iter()
            .map(|c| {
                let mut v = vec![Q::from_integer(0.into()); d.rank()];
                for (ci, ti) in c.iter().zip(t) {
                    for (x, y) in v.iter_mut().zip(ti) {
                        *x += ci * y;
                    }
                }
                v
            })
            .collect()
    };
    let mut a_b = rf.a0_basis().to_vec();
    a_b.extend(b.roots().iter().map(|&r| d.coroot(r)));
    (t_b, a_b)
}

/// Elements of W mapping the roots of `b`, up to sign, onto themselves.
pub fn stabilizer(rf: &RealForm, b: &AdmissibleSystem) -> Result<WeylGroup> {
    let d = rf.datum();
    let mut set: Vec<usize> = b.roots().to_vec();
    set.extend(b.roots().iter().map(|&r| d.negate(r)));
    rf.weyl().setwise_stabilizer(&set)
}

/// Matrix group on `a_B` generated by the sign flips and the stabilizer.
pub fn normalizer_action(
    rf: &RealForm,
    b: &AdmissibleSystem,
    a_basis: &[Vec<Q>],
    zwb: &WeylGroup,
    cap: usize,
) -> Result<MatrixGroup> {
    let d = rf.datum();
    let k = a_basis.len();
    let a0 = rf.a0_basis().len();
    let mut gens = Vec::new();
    for i in 0..b.len() {
        let mut m = QMatrix::identity(k);
        m.set(a0 + i, a0 + i, Q::from_integer((-1).into()));
        gens.push(m);
    }
    for g in zwb.generators() {
        let m = restrict_to(&g.matrix(d).to_q(), a_basis)
            .ok_or_else(|| Error::invariant("stabilizer element does not preserve a_B"))?;
        gens.push(m);
    }
    MatrixGroup::generate(k, gens, cap)
}

/// W-classes of Y, representatives first in (size, lexicographic) order.
pub fn conjugacy_classes(
    rf: &RealForm,
    upsilon: &[AdmissibleSystem],
    cap: usize,
) -> Result<Vec<CartanClass>> {
    let mut classes = Vec::new();
    for orbit in orbits(rf, upsilon) {
        let representative = upsilon[orbit[0]].clone();
        classes.push(build_class(
            rf,
            representative,
            orbit.iter().map(|&i| upsilon[i].clone()).collect(),
            cap,
        )?);
    }
    classes.sort_by(|a, b| {
        (a.representative.len(), a.representative.roots())
            .cmp(&(b.representative.len(), b.representative.roots()))
    });
    Ok(classes)
}

pub fn build_class(
    rf: &RealForm,
    representative: AdmissibleSystem,
    members: Vec<AdmissibleSystem>,
    cap: usize,
) -> Result<CartanClass> {
    let (t_basis, a_basis) = cartan_coordinates(rf, &representative);
    let zwb = stabilizer(rf, &representative)?;
    let normalizer_action = normalizer_action(rf, &representative, &a_basis, &zwb, cap)?;
    let gamma_order = 1usize << representative.len();
    if (gamma_order * zwb.order()) % normalizer_action.order() != 0 {
        return Err(Error::invariant(
            "normalizer action order does not divide |Gamma_B| |Z_W(B)|",
        ));
    }
    Ok(CartanClass {
        representative,
        members,
        t_basis,
        a_basis,
        gamma_order,
        zwb,
        normalizer_action,
    })
}

/// Classes whose representative has the largest size.
pub fn maximal_class(classes: &[CartanClass]) -> &CartanClass {
    let top = classes
        .iter()
        .map(|c| c.representative.len())
        .max()
        .unwrap_or(0);
    classes
        .iter()
        .find(|c| c.representative.len() == top)
        .expect("the empty system is always present")
}

/// Whether all maximal admissible systems lie in a single class.
pub fn maximal_systems_conjugate(classes: &[CartanClass]) -> bool {
    let top = classes
        .iter()
        .map(|c| c.representative.len())
        .max()
        .unwrap_or(0);
    let maximal: BTreeSet<usize> = classes
        .iter()
        .enumerate()
        .filter(|(_, c)| c.representative.len() == top)
        .map(|(i, _)| i)
        .collect();
    maximal.len() == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realform::{resolve_preset, LatticeChoice, Limits};
    use crate::rootdata::CartanType;

    fn preset(s: &str) -> RealForm {
        resolve_preset(
            &s.parse().unwrap(),
            LatticeChoice::SimplyConnected,
            Limits::default(),
        )
        .unwrap()
    }

    fn classes(rf: &RealForm) -> Vec<CartanClass> {
        let ups = enumerate_admissible(rf, DEFAULT_UPSILON_CAP).unwrap();
        conjugacy_classes(rf, &ups, 1_000_000).unwrap()
    }

    #[test]
    fn strong_orthogonality_in_c2() {
        let d = RootDatum::build(&"C2".parse::<CartanType>().unwrap()).unwrap();
        // e1 - e2 = a1, e1 + e2 = a1 + a2, 2e1 = 2a1 + a2, 2e2 = a2
        let idx = |v: &[i64]| d.index_of(v).unwrap();
        assert!(strongly_orthogonal(&d, idx(&[2, 1]), idx(&[0, 1])).unwrap());
        assert!(!strongly_orthogonal(&d, idx(&[1, 0]), idx(&[1, 1])).unwrap());
        assert!(!strongly_orthogonal(&d, 0, 0).unwrap());
        assert!(!strongly_orthogonal(&d, 0, d.negate(0)).unwrap());
        assert!(strongly_orthogonal(&d, 0, 99).is_err());
        let a1a1 = RootDatum::build(&"A1xA1".parse::<CartanType>().unwrap()).unwrap();
        assert!(strongly_orthogonal(&a1a1, 0, 1).unwrap());
    }

    #[test]
    fn su11_classes() {
        let rf = preset("su(1,1)");
        let cl = classes(&rf);
        assert_eq!(cl.len(), 2);
        assert_eq!(cl[1].a_basis.len(), 1);
        assert!(cl[1].t_basis.is_empty());
        assert_eq!(cl[1].normalizer_action.order(), 2);
    }

    #[test]
    fn class_counts() {
        for (s, n) in [
            ("compact(B2)", 1),
            ("sl(2,R)", 2),
            ("sp(4,R)", 4),
            ("sustar(4)", 1),
            ("su(2,1)", 2),
            ("su(2,2)", 3),
        ] {
            assert_eq!(classes(&preset(s)).len(), n, "{s}");
        }
    }

    #[test]
    fn su22_maximal_class() {
        let rf = preset("su(2,2)");
        let cl = classes(&rf);
        let top = maximal_class(&cl);
        assert_eq!(top.representative.len(), 2);
        assert_eq!(top.a_basis.len(), 2);
        assert_eq!(top.normalizer_action.order(), 8);
        assert!(maximal_systems_conjugate(&cl));
    }

    #[test]
    fn orbit_stabilizer() {
        for s in ["sp(6,R)", "su(3,2)", "so(4,3)", "so(4,4)"] {
            let rf = preset(s);
            for c in classes(&rf) {
                assert_eq!(c.orbit_size() * c.zwb.order(), rf.weyl().order(), "{s}");
                assert_eq!(c.t_basis.len() + c.representative.len(), rf.t_basis().len());
            }
        }
    }
}
