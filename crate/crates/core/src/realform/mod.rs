//! Real forms given by a Cartan involution on the maximally compact Cartan.

mod classify;
mod presets;

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{q, QMatrix, Q};
use crate::rootdata::{
    integer_kernel, CartanType, IntLattice, IntMat, RootDatum, WeylElement, WeylGroup, ZMatrix,
};

pub use classify::{
    classify_roots, painting_from_grades, simple_imaginary_roots, Grade, RootClassification,
    RootKind,
};
pub use presets::{ECoordinates, Preset, SoMiddle, SoSigns};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LatticeChoice {
    #[default]
    #[serde(rename = "sc")]
    SimplyConnected,
    #[serde(rename = "ad")]
    Adjoint,
}

impl std::str::FromStr for LatticeChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sc" | "simply_connected" => Ok(LatticeChoice::SimplyConnected),
            "ad" | "adjoint" => Ok(LatticeChoice::Adjoint),
            _ => Err(Error::invalid(format!("unknown lattice choice '{s}'"))),
        }
    }
}

/// Explicit Vogan-style input, as read from JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitSpec {
    pub cartan_type: String,
    pub theta: Vec<Vec<i64>>,
    /// keys are root coordinates such as "1,0,1"
    #[serde(default)]
    pub painting: BTreeMap<String, Grade>,
    #[serde(default)]
    pub lattice: LatticeChoice,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RealFormSpec {
    Preset {
        preset: Preset,
        lattice: LatticeChoice,
    },
    Explicit(ExplicitSpec),
}

impl RealFormSpec {
    /// A preset name, or a JSON object for explicit input.
    pub fn parse(s: &str, lattice: LatticeChoice) -> Result<RealFormSpec> {
        let t = s.trim();
        if t.starts_with('{') {
            let mut e: ExplicitSpec = serde_json::from_str(t)
                .map_err(|err| Error::invalid(format!("bad real form JSON: {err}")))?;
            if !t.contains("\"lattice\"") {
                e.lattice = lattice;
            }
            Ok(RealFormSpec::Explicit(e))
        } else {
            Ok(RealFormSpec::Preset {
                preset: t.parse()?,
                lattice,
            })
        }
    }

    pub fn lattice(&self) -> LatticeChoice {
        match self {
            RealFormSpec::Preset { lattice, .. } => *lattice,
            RealFormSpec::Explicit(e) => e.lattice,
        }
    }
}

/// Knobs for the finite-group enumerations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_group_order: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_group_order: crate::rootdata::DEFAULT_GROUP_CAP,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RealForm {
    label: String,
    preset: Option<Preset>,
    ecoords: Option<ECoordinates>,
    datum: Arc<RootDatum>,
    theta: IntMat,
    classification: RootClassification,
    t_basis: Vec<Vec<Q>>,
    a0_basis: Vec<Vec<Q>>,
    w: WeylGroup,
    theta_commuting_order: Option<usize>,
    lattice: LatticeChoice,
    embedding: QMatrix,
    theta_lattice: IntMat,
    lambda_t: IntLattice,
    warnings: Vec<String>,
}

pub fn resolve(spec: &RealFormSpec, limits: Limits) -> Result<RealForm> {
    match spec {
        RealFormSpec::Preset { preset, lattice } => resolve_preset(preset, *lattice, limits),
        RealFormSpec::Explicit(e) => resolve_explicit(e, limits),
    }
}

pub fn resolve_preset(p: &Preset, lattice: LatticeChoice, limits: Limits) -> Result<RealForm> {
    let data = presets::preset_data(p)?;
    let datum = RootDatum::build(&data.cartan_type)?;
    let theta = match (&data.theta, &data.ecoords) {
        (Some(t), _) => t.clone(),
        (None, Some(ec)) => ec.theta_on_roots()?,
        (None, None) => unreachable!("presets carry theta or coordinates"),
    };
    validate_theta(&datum, &theta)?;
    let rule_input = |i: usize| match &data.ecoords {
        Some(ec) => ec.of(datum.root(i)),
        None => datum.root_q(i),
    };
    let expected: BTreeMap<usize, u8> = datum
        .positive_roots()
        .filter(|&i| datum.image(&theta, i) == Some(i))
        .map(|i| (i, u8::from((data.noncompact)(&rule_input(i)))))
        .collect();
    let painting = painting_from_grades(
        simple_imaginary_roots(&datum, &theta)
            .into_iter()
            .map(|i| (i, expected[&i])),
    );
    let mut rf = RealForm::new(datum, theta, &painting, lattice, limits, p.to_string())?;
    for (&i, &g) in &expected {
        if rf.classification.grading(i) != Some(g) {
            return Err(Error::invariant(format!(
                "{p}: grading of {} does not extend additively",
                rf.datum.root_label(i)
            )));
        }
    }
    rf.preset = Some(p.clone());
    rf.ecoords = data.ecoords;
    Ok(rf)
}

pub fn resolve_explicit(e: &ExplicitSpec, limits: Limits) -> Result<RealForm> {
    let ct: CartanType = e.cartan_type.parse()?;
    let datum = RootDatum::build(&ct)?;
    let r = datum.rank();
    if e.theta.len() != r || e.theta.iter().any(|row| row.len() != r) {
        return Err(Error::invalid(format!(
            "theta must be a {r}x{r} integer matrix"
        )));
    }
    let theta = IntMat::from_rows(&e.theta);
    validate_theta(&datum, &theta)?;
    let mut painting = BTreeMap::new();
    for (key, &g) in &e.painting {
        let coords = parse_root_key(key)?;
        let idx = datum
            .index_of(&coords)
            .ok_or_else(|| Error::invalid(format!("painting key '{key}' is not a root")))?;
        painting.insert(idx, g);
    }
    let label = format!("explicit({ct})");
    RealForm::new(datum, theta, &painting, e.lattice, limits, label)
}

fn parse_root_key(key: &str) -> Result<Vec<i64>> {
    key.trim()
        .trim_start_matches('(')
        .trim_end_matches(')')
        .split(',')
        .map(|x| {
            x.trim()
                .parse::<i64>()
                .map_err(|_| Error::invalid(format!("bad root key '{key}'")))
        })
        .collect()
}

/// Checks that theta is an involutive diagram automorphism without real roots.
pub fn validate_theta(d: &RootDatum, theta: &IntMat) -> Result<()> {
    if theta.dim() != d.rank() {
        return Err(Error::invalid("theta has the wrong size"));
    }
    if !theta.mul(theta).is_identity() {
        return Err(Error::invalid("theta is not an involution"));
    }
    if !d.permutes_roots(theta) {
        return Err(Error::invalid("theta does not permute the roots"));
    }
    for i in d.positive_roots() {
        let j = d.image(theta, i).unwrap();
        if j == d.negate(i) {
            return Err(Error::invalid(format!(
                "root {} is real (theta a = -a)",
                d.root_label(i)
            )));
        }
        if !d.is_positive(j) {
            return Err(Error::invalid(format!(
                "theta sends positive root {} to a negative root",
                d.root_label(i)
            )));
        }
    }
    if !d.is_isometry(theta) {
        return Err(Error::invalid("theta does not preserve the inner product"));
    }
    Ok(())
}

/// Embedding of the cocharacter lattice of the full Cartan into root coordinates (as columns).
pub fn lattice_embedding(d: &RootDatum, choice: LatticeChoice) -> QMatrix {
    match choice {
        // simple coroots 2 a_i / |a_i|^2
        LatticeChoice::SimplyConnected => QMatrix::diagonal(
            &(0..d.rank())
                .map(|i| q(2) / d.form().get(i, i))
                .collect::<Vec<_>>(),
        ),
        // fundamental coweights, dual to the simple roots under the form
        LatticeChoice::Adjoint => d.form().inverse().expect("form is nondegenerate"),
    }
}

/// The theta-fixed sublattice, in lattice coordinates.
pub fn theta_fixed_lattice(theta_lattice: &IntMat) -> IntLattice {
    let n = theta_lattice.dim();
    let mut m = ZMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let v = theta_lattice.get(i, j) - i64::from(i == j);
            m.set(i, j, BigInt::from(v));
        }
    }
    IntLattice::span(n, &integer_kernel(&m))
}

fn eigenspace(m: &QMatrix, sign: i64) -> Vec<Vec<Q>> {
    m.sub(&QMatrix::identity(m.rows()).scale(&q(sign)))
        .nullspace()
}

impl RealForm {
    pub fn new(
        datum: RootDatum,
        theta: IntMat,
        painting: &BTreeMap<usize, Grade>,
        lattice: LatticeChoice,
        limits: Limits,
        label: String,
    ) -> Result<RealForm> {
        validate_theta(&datum, &theta)?;
        let classification = classify_roots(&datum, &theta, painting)?;
        let datum = Arc::new(datum);
        let tq = theta.to_q();
        let t_basis = eigenspace(&tq, 1);
        let a0_basis = eigenspace(&tq, -1);
        debug_assert_eq!(t_basis.len() + a0_basis.len(), datum.rank());

        let embedding = lattice_embedding(&datum, lattice);
        let p_inv = embedding.inverse().expect("embedding is invertible");
        let theta_lattice = IntMat::from_q(&p_inv.mul(&tq).mul(&embedding))
            .ok_or_else(|| Error::invalid("theta does not preserve the cocharacter lattice"))?;
        let lambda_t = theta_fixed_lattice(&theta_lattice);

        let mut warnings = Vec::new();
        let (w, theta_commuting_order) = compact_weyl_group(
            &datum,
            &theta,
            &classification,
            &t_basis,
            &a0_basis,
            limits,
            &mut warnings,
        )?;

        let rf = RealForm {
            label,
            preset: None,
            ecoords: None,
            datum,
            theta,
            classification,
            t_basis,
            a0_basis,
            w,
            theta_commuting_order,
            lattice,
            embedding,
            theta_lattice,
            lambda_t,
            warnings,
        };
        rf.check_invariants()?;
        Ok(rf)
    }

    fn check_invariants(&self) -> Result<()> {
        let d = &*self.datum;
        let theta_el = WeylElement::from_matrix(d, &self.theta).expect("theta permutes roots");
        let nc: Vec<usize> = self.classification.imaginary_noncompact();
        for (k, g) in self.w.generators().iter().enumerate() {
            if g.compose(d, &theta_el) != theta_el.compose(d, g) {
                return Err(Error::invariant(format!(
                    "W generator {k} does not commute with theta"
                )));
            }
            if !self
                .lambda_t
                .is_preserved_by(&self.to_lattice_coords(&g.matrix(d).to_q()))
            {
                return Err(Error::invariant(format!(
                    "W generator {k} does not preserve the fixed lattice"
                )));
            }
            if nc.iter().any(|&i| {
                self.classification.kind(g.apply_root(d, i)) != RootKind::ImaginaryNoncompact
            }) {
                return Err(Error::invariant(format!(
                    "W generator {k} does not preserve the noncompact roots"
                )));
            }
        }
        Ok(())
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn preset(&self) -> Option<&Preset> {
        self.preset.as_ref()
    }

    pub fn ecoords(&self) -> Option<&ECoordinates> {
        self.ecoords.as_ref()
    }

    pub fn datum(&self) -> &RootDatum {
        &self.datum
    }

    pub fn datum_arc(&self) -> &Arc<RootDatum> {
        &self.datum
    }

    pub fn rank(&self) -> usize {
        self.datum.rank()
    }

    pub fn theta(&self) -> &IntMat {
        &self.theta
    }

    pub fn classification(&self) -> &RootClassification {
        &self.classification
    }

    pub fn t_basis(&self) -> &[Vec<Q>] {
        &self.t_basis
    }

    pub fn a0_basis(&self) -> &[Vec<Q>] {
        &self.a0_basis
    }

    pub fn weyl(&self) -> &WeylGroup {
        &self.w
    }

    /// Order of the subgroup of the full Weyl group commuting with theta, when it was enumerated.
    pub fn theta_commuting_order(&self) -> Option<usize> {
        self.theta_commuting_order
    }

    pub fn lattice_choice(&self) -> LatticeChoice {
        self.lattice
    }

    /// Columns are the basis of the full Cartan cocharacter lattice in root coordinates.
    pub fn lattice_embedding(&self) -> &QMatrix {
        &self.embedding
    }

    pub fn theta_lattice(&self) -> &IntMat {
        &self.theta_lattice
    }

    /// Fixed lattice in coordinates of the full Cartan cocharacter lattice.
    pub fn lambda_t(&self) -> &IntLattice {
        &self.lambda_t
    }

    /// Basis of the fixed lattice as vectors in root coordinates.
    pub fn lambda_t_vectors(&self) -> Vec<Vec<Q>> {
        self.lambda_t
            .basis_q()
            .iter()
            .map(|v| self.embedding.mul_vec(v))
            .collect()
    }

    /// `P^-1 m P` for a map `m` on root coordinates.
    pub fn to_lattice_coords(&self, m: &QMatrix) -> QMatrix {
        self.embedding
            .inverse()
            .expect("invertible")
            .mul(m)
            .mul(&self.embedding)
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn positive_noncompact(&self) -> Vec<usize> {
        self.classification
            .positive_of_kind(&self.datum, RootKind::ImaginaryNoncompact)
    }
}

/// Lifted-reflection generators and the group they generate on the full Cartan.
fn compact_weyl_group(
    d: &Arc<RootDatum>,
    theta: &IntMat,
    cls: &RootClassification,
    t_basis: &[Vec<Q>],
    a0_basis: &[Vec<Q>],
    limits: Limits,
    warnings: &mut Vec<String>,
) -> Result<(WeylGroup, Option<usize>)> {
    let mut gens: Vec<WeylElement> = Vec::new();
    for i in cls.positive_of_kind(d, RootKind::ImaginaryCompact) {
        gens.push(WeylElement::from_matrix(d, &d.reflection(i)).unwrap());
    }
    let mut nonorthogonal = Vec::new();
    for &(a, b) in cls.complex_pairs() {
        if d.inner(&d.root_q(a), &d.root_q(b)) == q(0) {
            let m = d.reflection(a).mul(&d.reflection(b));
            gens.push(WeylElement::from_matrix(d, &m).unwrap());
        } else {
            nonorthogonal.push((a, b));
        }
    }

    let full_order = d.cartan_type().weyl_order();
    let commuting = if !nonorthogonal.is_empty() || full_order <= 100_000 {
        if full_order > limits.max_group_order as u128 {
            return Err(Error::CapExceeded {
                what: "Weyl group".into(),
                cap: limits.max_group_order,
                partial: 0,
            });
        }
        let theta_el = WeylElement::from_matrix(d, theta).unwrap();
        let y = d.weyl_group(limits.max_group_order)?;
        Some(y.filter(|w| w.compose(d, &theta_el) == theta_el.compose(d, w)))
    } else {
        None
    };

    for &(a, b) in &nonorthogonal {
        let sub = commuting.as_ref().expect("enumerated above");
        gens.push(lift_reflection(d, sub, a, b, t_basis, a0_basis, warnings)?);
    }

    gens.sort();
    gens.dedup();
    let w = WeylGroup::generate(d.clone(), gens, limits.max_group_order)?;
    Ok((w, commuting.map(|c| c.order())))
}

/// An order-2 element commuting with theta that restricts to t as the reflection in (a + theta a)/2.
fn lift_reflection(
    d: &RootDatum,
    commuting: &WeylGroup,
    a: usize,
    b: usize,
    t_basis: &[Vec<Q>],
    a0_basis: &[Vec<Q>],
    warnings: &mut Vec<String>,
) -> Result<WeylElement> {
    let gamma: Vec<Q> = d
        .root_q(a)
        .iter()
        .zip(d.root_q(b))
        .map(|(x, y)| (x + y) / q(2))
        .collect();
    let gg = d.inner(&gamma, &gamma);
    let target: Vec<Vec<Q>> = t_basis
        .iter()
        .map(|v| {
            let c = q(2) * d.inner(v, &gamma) / &gg;
            v.iter().zip(&gamma).map(|(x, g)| x - &c * g).collect()
        })
        .collect();
    let mut best: Vec<(usize, Vec<Vec<Q>>, &WeylElement)> = Vec::new();
    let mut best_dim = 0;
    for w in commuting.elements() {
        if w.is_identity(d) || !w.compose(d, w).is_identity(d) {
            continue;
        }
        if t_basis
            .iter()
            .zip(&target)
            .any(|(v, tv)| &w.apply_q(d, v) != tv)
        {
            continue;
        }
        let a0_image: Vec<Vec<Q>> = a0_basis.iter().map(|v| w.apply_q(d, v)).collect();
        let fixed_dim = {
            let m = QMatrix::from_columns(d.rank(), &a0_image)
                .sub(&QMatrix::from_columns(d.rank(), a0_basis));
            a0_basis.len() - if a0_basis.is_empty() { 0 } else { m.rank() }
        };
        if best.is_empty() || fixed_dim > best_dim {
            best_dim = fixed_dim;
            best.clear();
        }
        if fixed_dim == best_dim {
            best.push((fixed_dim, a0_image, w));
        }
    }
    if best.is_empty() {
        return Err(Error::invariant(format!(
            "no lift of the reflection for the complex pair {}, {}",
            d.root_label(a),
            d.root_label(b)
        )));
    }
    best.sort_by(|x, y| x.2.cmp(y.2));
    if best.iter().any(|c| c.1 != best[0].1) {
        warnings.push(format!(
            "lift for complex pair {}, {} is ambiguous on a_0; chose the smallest fingerprint",
            d.root_label(a),
            d.root_label(b)
        ));
    }
    Ok(best[0].2.clone())
}
