//! Hitchin base via restricted roots, and fibers over points of `a_D`.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::abvar::{identify_quotient, FiniteAction, QuotientDescription};
use crate::cayley::{maximal_class, AdmissibleSystem, CartanClass};
use crate::error::{Error, Result};
use crate::linalg::{dot, q, QMatrix, Subspace, Q};
use crate::moduli::{Analysis, BaseSummary, COMPONENT_ENUMERATION_CAP};
use crate::rootdata::{MatrixGroup, ZMatrix};

pub const GENERIC_RETRIES: usize = 100;

#[derive(Clone, Debug, Serialize)]
pub struct RestrictedRoot {
    /// values on the `a_D` basis
    #[serde(serialize_with = "crate::serial::q_vec")]
    pub values: Vec<Q>,
    pub multiplicity: usize,
}

#[derive(Clone, Debug)]
pub struct RestrictedRootSystem {
    pub maximal_system: AdmissibleSystem,
    /// rank of the full Cartan
    pub ambient: usize,
    pub a_basis: Vec<Vec<Q>>,
    pub gram: QMatrix,
    pub roots: Vec<RestrictedRoot>,
    /// group generated by the reflections in the restricted roots
    pub reflection_group: MatrixGroup,
    /// image of Gamma_D x| Z_W(D) on a_D
    pub normalizer_group: MatrixGroup,
}

impl RestrictedRootSystem {
    pub fn dim(&self) -> usize {
        self.a_basis.len()
    }

    pub fn routes_agree(&self) -> bool {
        self.reflection_group.same_elements(&self.normalizer_group)
    }

    /// Vector in root coordinates for coordinates `z` on the `a_D` basis.
    pub fn point(&self, z: &[Q]) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.ambient];
        for (c, b) in z.iter().zip(&self.a_basis) {
            for (x, y) in v.iter_mut().zip(b) {
                *x += c * y;
            }
        }
        v
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HitchinBaseReport {
    pub maximal_system: Vec<String>,
    pub base_dim: usize,
    pub restricted_roots: Vec<RestrictedRoot>,
    pub reflection_group_order: usize,
    pub normalizer_group_order: usize,
    pub routes_agree: bool,
}

impl HitchinBaseReport {
    pub fn of(an: &Analysis, rs: &RestrictedRootSystem) -> Self {
        HitchinBaseReport {
            maximal_system: rs.maximal_system.labels(an.rf.datum()),
            base_dim: rs.dim(),
            restricted_roots: rs.roots.clone(),
            reflection_group_order: rs.reflection_group.order(),
            normalizer_group_order: rs.normalizer_group.order(),
            routes_agree: rs.routes_agree(),
        }
    }
}

/// Restricted roots on `a_D` for a maximal class, and both small Weyl group constructions.
pub fn hitchin_base_unchecked(an: &Analysis) -> Result<RestrictedRootSystem> {
    let d = an.rf.datum();
    let class: &CartanClass = maximal_class(&an.classes);
    let a_basis = class.a_basis.clone();
    let k = a_basis.len();
    let gram = QMatrix::from_rows(
        a_basis
            .iter()
            .map(|u| a_basis.iter().map(|v| d.inner(u, v)).collect())
            .collect(),
    );
    let mut counts: BTreeMap<Vec<Q>, usize> = BTreeMap::new();
    for i in 0..d.num_roots() {
        let a = d.root_q(i);
        let vals: Vec<Q> = a_basis.iter().map(|b| d.inner(&a, b)).collect();
        if vals.iter().any(|x| !x.is_zero()) {
            *counts.entry(vals).or_default() += 1;
        }
    }
    let roots: Vec<RestrictedRoot> = counts
        .into_iter()
        .map(|(values, multiplicity)| RestrictedRoot {
            values,
            multiplicity,
        })
        .collect();
    let reflections: Vec<QMatrix> = if k == 0 {
        Vec::new()
    } else {
        let gi = gram
            .inverse()
            .ok_or_else(|| Error::invariant("degenerate form on a_D"))?;
        let mut refl: Vec<QMatrix> = roots.iter().map(|r| reflection(&gi, &r.values)).collect();
        refl.sort_by_key(|m| format!("{m:?}"));
        refl.dedup();
        refl
    };
    let reflection_group = MatrixGroup::generate(k, reflections, an.limits.max_group_order)?;
    Ok(RestrictedRootSystem {
        maximal_system: class.representative.clone(),
        ambient: d.rank(),
        a_basis,
        gram,
        roots,
        reflection_group,
        normalizer_group: class.normalizer_action.clone(),
    })
}

/// As `hitchin_base_unchecked`, failing when the two small Weyl group constructions differ.
pub fn hitchin_base(an: &Analysis) -> Result<RestrictedRootSystem> {
    let rs = hitchin_base_unchecked(an)?;
    if !rs.routes_agree() {
        return Err(Error::invariant(format!(
            "small Weyl group routes differ on a_D: reflection group order {}, normalizer image order {}",
            rs.reflection_group.order(),
            rs.normalizer_group.order()
        )));
    }
    Ok(rs)
}

/// Reflection in the functional `r` (values on the basis), for inverse Gram matrix `gi`.
fn reflection(gi: &QMatrix, r: &[Q]) -> QMatrix {
    let u = gi.mul_vec(r);
    let ru = dot(r, &u);
    let k = r.len();
    let mut m = QMatrix::identity(k);
    for i in 0..k {
        for j in 0..k {
            let v = m.get(i, j) - q(2) * &u[i] * &r[j] / &ru;
            m.set(i, j, v);
        }
    }
    m
}

/// `a_B` as a subspace of root coordinates.
fn a_space(an: &Analysis, b: &AdmissibleSystem) -> Subspace {
    let d = an.rf.datum();
    let mut vs = an.rf.a0_basis().to_vec();
    vs.extend(b.roots().iter().map(|&r| d.coroot(r)));
    Subspace::span(d.rank(), &vs)
}

/// Systems `B` with `z` in `a_B`, and the minimal ones among them.
pub fn upsilon_z(an: &Analysis, z: &[Q]) -> (Vec<AdmissibleSystem>, Vec<AdmissibleSystem>) {
    let containing: Vec<AdmissibleSystem> = an
        .upsilon
        .iter()
        .filter(|b| a_space(an, b).contains(z))
        .cloned()
        .collect();
    let minimal = containing
        .iter()
        .filter(|b| !containing.iter().any(|c| c != *b && c.is_subset_of(b)))
        .cloned()
        .collect();
    (containing, minimal)
}

/// Exact genericity: off every proper `a_B` inside `a_D` and off every restricted hyperplane.
pub fn is_generic(an: &Analysis, rs: &RestrictedRootSystem, z: &[Q]) -> bool {
    if rs.roots.iter().any(|r| dot(&r.values, z).is_zero()) {
        return false;
    }
    let v = rs.point(z);
    let a_d = Subspace::span(an.rf.rank(), &rs.a_basis);
    an.upsilon.iter().all(|b| {
        let a_b = a_space(an, b);
        a_b.intersection_dim(&a_d) == a_d.dim() || !a_b.contains(&v)
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FiberDescription {
    #[serde(serialize_with = "crate::serial::q_vec")]
    pub z: Vec<Q>,
    #[serde(serialize_with = "crate::serial::q_vec")]
    pub z_root_coordinates: Vec<Q>,
    pub minimal_system: Vec<String>,
    pub upsilon_z_size: usize,
    pub base: BaseSummary,
    pub base_component_orbits: Option<usize>,
    pub stabilizer_order: usize,
    pub action_order: usize,
    pub quotient: QuotientDescription,
    pub quotient_summary: String,
    pub is_generic: bool,
    pub warnings: Vec<String>,
}

/// The fiber of the Hitchin map over `z` (coordinates on the `a_D` basis).
pub fn fiber_over(an: &Analysis, z: &[Q]) -> Result<FiberDescription> {
    let rs = hitchin_base_unchecked(an)?;
    fiber_with(an, &rs, z)
}

fn fiber_with(an: &Analysis, rs: &RestrictedRootSystem, z: &[Q]) -> Result<FiberDescription> {
    let d = an.rf.datum();
    if z.len() != rs.dim() {
        return Err(Error::invalid(format!(
            "z has {} coordinates but a_D has dimension {}",
            z.len(),
            rs.dim()
        )));
    }
    let mut warnings = Vec::new();
    if !rs.routes_agree() {
        warnings.push(format!(
            "small Weyl group routes differ on a_D (orders {} and {})",
            rs.reflection_group.order(),
            rs.normalizer_group.order()
        ));
    }
    let v = rs.point(z);
    let (containing, minimal) = upsilon_z(an, &v);
    let f = minimal
        .iter()
        .min_by(|a, b| (a.len(), a.roots()).cmp(&(b.len(), b.roots())))
        .cloned()
        .ok_or_else(|| Error::invalid("z does not lie in a_D"))?;
    let class_of = |b: &AdmissibleSystem| an.classes.iter().position(|c| c.members.contains(b));
    let fc = class_of(&f);
    if minimal.iter().any(|b| class_of(b) != fc) {
        return Err(Error::invariant(
            "minimal admissible systems for z are not W-conjugate",
        ));
    }
    let zwf = crate::cayley::stabilizer(&an.rf, &f)?;
    let stab = zwf.pointwise_stabilizer(&v)?;
    let base = an.base(&f)?;
    let lattice_gens = lattice_gens(an, &stab)?;
    let base_component_orbits =
        match base.component_orbits(&lattice_gens, COMPONENT_ENUMERATION_CAP) {
            Ok(n) => Some(n),
            Err(Error::CapExceeded { .. }) => None,
            Err(e) => return Err(e),
        };
    // action on the identity component, in the basis of its lattice
    let id_lat = &base.identity_lattice;
    let mut id_gens = Vec::new();
    for g in &lattice_gens {
        let m = QMatrix::from_rows(
            g.to_rows()
                .into_iter()
                .map(|r| r.into_iter().map(Q::from_integer).collect())
                .collect(),
        );
        id_gens.push(
            id_lat
                .restrict(&m)
                .ok_or_else(|| Error::invariant("stabilizer does not preserve the base"))?,
        );
    }
    let action = FiniteAction::generate(id_lat.rank(), &id_gens, an.limits.max_group_order)?;
    let quotient = identify_quotient(&action);
    if !base.is_connected() {
        warnings.push(format!(
            "base has {} connected components",
            base.component_count()
        ));
    }
    Ok(FiberDescription {
        z: z.to_vec(),
        z_root_coordinates: v.clone(),
        minimal_system: f.labels(d),
        upsilon_z_size: containing.len(),
        base: BaseSummary::from(&base),
        base_component_orbits,
        stabilizer_order: stab.order(),
        action_order: action.order(),
        quotient_summary: with_components(&quotient.summary(), base_component_orbits),
        quotient,
        is_generic: is_generic(an, rs, z),
        warnings,
    })
}

/// Prefixes the number of component orbits of the base when there is more than one.
fn with_components(summary: &str, orbits: Option<usize>) -> String {
    match orbits {
        Some(1) => summary.to_string(),
        Some(k) if summary == "point" => format!("{k} points"),
        Some(k) => format!("{k} copies of {summary}"),
        None => format!("too many components to enumerate, each {summary}"),
    }
}

fn lattice_gens(an: &Analysis, g: &crate::rootdata::WeylGroup) -> Result<Vec<ZMatrix>> {
    let d = an.rf.datum();
    g.generators()
        .iter()
        .map(|w| {
            let l = an.rf.to_lattice_coords(&w.matrix(d).to_q());
            an.rf
                .lambda_t()
                .restrict(&l)
                .ok_or_else(|| Error::invariant("W does not preserve the fixed lattice"))
        })
        .collect()
}

/// A deterministic generic point for `seed`.
pub fn generic_point(an: &Analysis, rs: &RestrictedRootSystem, seed: u64) -> Result<Vec<Q>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..GENERIC_RETRIES {
        let z: Vec<Q> = (0..rs.dim())
            .map(|_| {
                Q::new(
                    rng.gen_range(-20i64..=20).into(),
                    rng.gen_range(1i64..=7).into(),
                )
            })
            .collect();
        if is_generic(an, rs, &z) {
            return Ok(z);
        }
    }
    Err(Error::invariant(format!(
        "no generic point found in {GENERIC_RETRIES} tries"
    )))
}

pub fn generic_fiber(an: &Analysis, seed: u64) -> Result<FiberDescription> {
    let rs = hitchin_base_unchecked(an)?;
    let z = generic_point(an, &rs, seed)?;
    let f = fiber_with(an, &rs, &z)?;
    debug_assert!(f.is_generic);
    Ok(f)
}
