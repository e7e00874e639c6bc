//! Components of the moduli space as W-classes of admissible systems.

use num_bigint::BigInt;
use serde::Serialize;

use crate::abvar::{kernel_of_eta, TorusSubgroup};
use crate::cayley::{
    conjugacy_classes, enumerate_admissible, AdmissibleSystem, CartanClass, DEFAULT_UPSILON_CAP,
};
use crate::error::{Error, Result};
use crate::linalg::Q;
use crate::realform::{Limits, Preset, RealForm, RootKind};
use crate::rootdata::{WeylGroup, ZMatrix};

/// Components of a disconnected base are enumerated only up to this many.
pub const COMPONENT_ENUMERATION_CAP: usize = 1 << 16;

/// A real form together with its admissible systems and Cartan classes.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub rf: RealForm,
    pub upsilon: Vec<AdmissibleSystem>,
    pub classes: Vec<CartanClass>,
    pub limits: Limits,
}

impl Analysis {
    pub fn new(rf: RealForm, limits: Limits) -> Result<Analysis> {
        let upsilon = enumerate_admissible(&rf, DEFAULT_UPSILON_CAP)?;
        let classes = conjugacy_classes(&rf, &upsilon, limits.max_group_order)?;
        Ok(Analysis {
            rf,
            upsilon,
            classes,
            limits,
        })
    }

    /// Pairings `beta(lambda_j)` of the roots of `b` with the basis of the fixed lattice.
    pub fn eta_pairings(&self, b: &AdmissibleSystem) -> Vec<Vec<Q>> {
        let d = self.rf.datum();
        let lambdas = self.rf.lambda_t_vectors();
        b.roots()
            .iter()
            .map(|&r| lambdas.iter().map(|l| d.inner(&d.root_q(r), l)).collect())
            .collect()
    }

    /// `(X (x) Lambda_T)|_B`, in coordinates of the fixed lattice.
    pub fn base(&self, b: &AdmissibleSystem) -> Result<TorusSubgroup> {
        kernel_of_eta(self.rf.lambda_t().rank(), &self.eta_pairings(b))
    }

    /// Action of the elements of `g` on the fixed lattice, in its basis.
    pub fn lattice_action(&self, g: &WeylGroup) -> Result<Vec<ZMatrix>> {
        let d = self.rf.datum();
        g.elements()
            .iter()
            .map(|w| {
                let l = self.rf.to_lattice_coords(&w.matrix(d).to_q());
                self.rf
                    .lambda_t()
                    .restrict(&l)
                    .ok_or_else(|| Error::invariant("W does not preserve the fixed lattice"))
            })
            .collect()
    }

    fn lattice_generators(&self, g: &WeylGroup) -> Result<Vec<ZMatrix>> {
        let d = self.rf.datum();
        g.generators()
            .iter()
            .map(|w| {
                let l = self.rf.to_lattice_coords(&w.matrix(d).to_q());
                self.rf
                    .lambda_t()
                    .restrict(&l)
                    .ok_or_else(|| Error::invariant("W does not preserve the fixed lattice"))
            })
            .collect()
    }

    pub fn is_complex_form(&self) -> bool {
        matches!(self.rf.preset(), Some(Preset::Complex(_)))
            || self
                .rf
                .classification()
                .kinds()
                .iter()
                .all(|&k| k == RootKind::Complex)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BaseSummary {
    pub lattice_rank: usize,
    pub identity_dim: usize,
    #[serde(serialize_with = "crate::serial::bigints")]
    pub torsion_divisors: Vec<BigInt>,
    #[serde(serialize_with = "crate::serial::bigint")]
    pub component_count: BigInt,
}

impl From<&TorusSubgroup> for BaseSummary {
    fn from(t: &TorusSubgroup) -> Self {
        BaseSummary {
            lattice_rank: t.ambient_rank,
            identity_dim: t.identity_dim,
            torsion_divisors: t.divisors.clone(),
            component_count: t.component_count(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ModuliComponent {
    pub system: Vec<String>,
    pub orbit_size: usize,
    pub base: BaseSummary,
    /// orbits of Z_W(B) on the connected components of the base; absent above the enumeration cap
    pub base_component_orbits: Option<usize>,
    pub fiber_dim: usize,
    pub gamma_order: usize,
    pub zwb_order: usize,
    /// order of the image of Gamma_B x| Z_W(B) acting on a_B
    pub quotient_action_order: usize,
    pub total_dim: usize,
    #[serde(serialize_with = "crate::serial::q_vecs")]
    pub a_basis: Vec<Vec<Q>>,
    #[serde(serialize_with = "crate::serial::q_vecs")]
    pub t_basis: Vec<Vec<Q>>,
    pub description: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct RealFormSummary {
    pub label: String,
    pub cartan_type: String,
    pub lattice: crate::realform::LatticeChoice,
    pub rank: usize,
    pub dim_t: usize,
    pub dim_a0: usize,
    pub imaginary_compact: Vec<String>,
    pub imaginary_noncompact: Vec<String>,
    pub complex_pairs: Vec<[String; 2]>,
    pub weyl_order: usize,
    /// order of the subgroup of the full Weyl group commuting with theta, when enumerated
    pub theta_commuting_order: Option<usize>,
    pub lambda_t_rank: usize,
    #[serde(serialize_with = "crate::serial::q_vecs")]
    pub lambda_t_basis: Vec<Vec<Q>>,
}

impl RealFormSummary {
    pub fn of(rf: &RealForm) -> Self {
        let d = rf.datum();
        let cls = rf.classification();
        let pos = |k: RootKind| {
            cls.positive_of_kind(d, k)
                .into_iter()
                .map(|i| d.root_label(i))
                .collect()
        };
        RealFormSummary {
            label: rf.label().to_string(),
            cartan_type: d.cartan_type().to_string(),
            lattice: rf.lattice_choice(),
            rank: rf.rank(),
            dim_t: rf.t_basis().len(),
            dim_a0: rf.a0_basis().len(),
            imaginary_compact: pos(RootKind::ImaginaryCompact),
            imaginary_noncompact: pos(RootKind::ImaginaryNoncompact),
            complex_pairs: cls
                .complex_pairs()
                .iter()
                .map(|&(a, b)| [d.root_label(a), d.root_label(b)])
                .collect(),
            weyl_order: rf.weyl().order(),
            theta_commuting_order: rf.theta_commuting_order(),
            lambda_t_rank: rf.lambda_t().rank(),
            lambda_t_basis: rf.lambda_t_vectors(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ModuliReport {
    pub real_form: RealFormSummary,
    pub upsilon_size: usize,
    pub cartan_class_count: usize,
    pub components: Vec<ModuliComponent>,
    pub moduli_dim: usize,
    pub complex_form: bool,
    pub warnings: Vec<String>,
}

pub fn build_components(an: &Analysis) -> Result<(Vec<ModuliComponent>, Vec<String>)> {
    let d = an.rf.datum();
    let mut out = Vec::new();
    let mut warnings = Vec::new();
    for class in &an.classes {
        let b = &class.representative;
        let base = an.base(b)?;
        let gens = an.lattice_generators(&class.zwb)?;
        let orbits = match base.component_orbits(&gens, COMPONENT_ENUMERATION_CAP) {
            Ok(n) => Some(n),
            Err(Error::CapExceeded { .. }) => None,
            Err(e) => return Err(e),
        };
        let system = b.labels(d);
        if !base.is_connected() {
            warnings.push(format!(
                "component for B = {{{}}}: base has {} connected components ({}); irreducibility is not imposed",
                system.join(", "),
                base.component_count(),
                orbits.map_or("orbit count not enumerated".to_string(), |n| format!("{n} orbits under Z_W(B)")),
            ));
        }
        let fiber_dim = class.a_basis.len();
        let total_dim = base.identity_dim + fiber_dim;
        let description = describe(&base, fiber_dim, class, an.is_complex_form());
        out.push(ModuliComponent {
            system,
            orbit_size: class.orbit_size(),
            base: BaseSummary::from(&base),
            base_component_orbits: orbits,
            fiber_dim,
            gamma_order: class.gamma_order,
            zwb_order: class.zwb.order(),
            quotient_action_order: class.normalizer_action.order(),
            total_dim,
            a_basis: class.a_basis.clone(),
            t_basis: class.t_basis.clone(),
            description,
        });
    }
    Ok((out, warnings))
}

fn describe(base: &TorusSubgroup, fiber_dim: usize, class: &CartanClass, complex: bool) -> String {
    let lat = base.ambient_rank;
    if complex && class.representative.is_empty() {
        return format!("(T*X (x) Z^{lat}) / W, |W| = {}", class.zwb.order());
    }
    if class.representative.is_empty() && fiber_dim == 0 && base.is_connected() {
        return format!("(X (x) Z^{lat}) / W, |W| = {}", class.zwb.order());
    }
    let mut base_s = if base.identity_dim == 0 {
        String::new()
    } else {
        format!("X^{}", base.identity_dim)
    };
    if !base.is_connected() {
        let tors: Vec<String> = base.divisors.iter().map(|d| format!("X[{d}]")).collect();
        if !base_s.is_empty() {
            base_s.push_str(" x ");
        }
        base_s.push_str(&tors.join(" x "));
    }
    if base_s.is_empty() {
        base_s = "point".into();
    }
    let fiber = if fiber_dim == 0 {
        String::new()
    } else {
        format!(" x C^{fiber_dim}")
    };
    format!(
        "({base_s}{fiber}) / (Gamma_B x| Z_W(B)), |Gamma_B| = {}, |Z_W(B)| = {}",
        class.gamma_order,
        class.zwb.order()
    )
}

/// Largest component dimension; must equal the rank.
pub fn moduli_dimension(rank: usize, components: &[ModuliComponent]) -> Result<usize> {
    let dim = components.iter().map(|c| c.total_dim).max().unwrap_or(0);
    if dim != rank {
        return Err(Error::invariant(format!(
            "moduli dimension {dim} differs from rank {rank}"
        )));
    }
    if let Some(c) = components.iter().find(|c| c.total_dim > rank) {
        return Err(Error::invariant(format!(
            "component {:?} has dimension above the rank",
            c.system
        )));
    }
    Ok(dim)
}

pub fn moduli_report(an: &Analysis) -> Result<ModuliReport> {
    let (components, mut warnings) = build_components(an)?;
    let moduli_dim = moduli_dimension(an.rf.rank(), &components)?;
    let mut all_warnings: Vec<String> = an.rf.warnings().to_vec();
    all_warnings.append(&mut warnings);
    Ok(ModuliReport {
        real_form: RealFormSummary::of(&an.rf),
        upsilon_size: an.upsilon.len(),
        cartan_class_count: an.classes.len(),
        components,
        moduli_dim,
        complex_form: an.is_complex_form(),
        warnings: all_warnings,
    })
}
