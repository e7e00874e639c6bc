//! Lattice involution, Weyl elements with `sigma(w) w = id`, and etale index data.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{q, QMatrix, Subspace, Q};
use crate::moduli::Analysis;
use crate::rootdata::{IntMat, MatrixGroup, WeylElement, WeylGroup};

/// Involutive elements listed individually in reports, beyond which only counts are kept.
pub const LISTED_ELEMENTS: usize = 64;

/// theta on the cocharacter lattice of the full Cartan.
pub fn sigma_on_lattice(an: &Analysis) -> Result<IntMat> {
    let s = an.rf.theta_lattice().clone();
    if !s.mul(&s).is_identity() {
        return Err(Error::invariant(
            "sigma is not an involution on the lattice",
        ));
    }
    Ok(s)
}

#[derive(Clone, Debug, Serialize)]
pub struct WeylElementInfo {
    /// matrix on the cocharacter lattice of the full Cartan
    pub lattice_matrix: Vec<Vec<i64>>,
    pub order_sigma_w: usize,
    /// `2 rank / ord(sigma w)`
    #[serde(serialize_with = "crate::serial::q")]
    pub formula_dim: Q,
    /// `dim fix(sigma w) + dim fix(-sigma w)`
    pub fixed_locus_dim: usize,
    pub involutive: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct EtaleEntry {
    pub system: Vec<String>,
    pub abstract_small_order: usize,
    pub small_image_order: usize,
    pub big_image_order: usize,
    pub contained: bool,
    pub index: usize,
    /// theta times the reflections in B fixes t_B, inverts a_B and preserves the lattice
    pub cb_model_ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct InvolutionReport {
    pub sigma_on_lattice: Vec<Vec<i64>>,
    pub sigma_plus_dim: usize,
    pub sigma_minus_dim: usize,
    pub weyl_order: usize,
    pub involutive_count: usize,
    pub involutive_elements: Vec<WeylElementInfo>,
    /// every involutive element passed the direct matrix check
    pub all_verified: bool,
    /// involutive elements whose `formula_dim` differs from the rank
    pub formula_exceptions: usize,
    pub max_noninvolutive_fixed_dim: Option<usize>,
    pub dimension_check: bool,
    pub etale: Vec<EtaleEntry>,
}

fn order_of(d: &crate::rootdata::RootDatum, e: &WeylElement) -> usize {
    let mut p = e.clone();
    let mut k = 1;
    while !p.is_identity(d) {
        p = p.compose(d, e);
        k += 1;
    }
    k
}

fn fixed_dim(m: &QMatrix, sign: i64) -> usize {
    m.rows() - m.sub(&QMatrix::identity(m.rows()).scale(&q(sign))).rank()
}

pub fn element_info(an: &Analysis, sigma: &IntMat, w: &WeylElement) -> WeylElementInfo {
    let d = an.rf.datum();
    let rank = d.rank();
    let lat = IntMat::from_q(&an.rf.to_lattice_coords(&w.matrix(d).to_q()))
        .expect("Weyl elements preserve the lattice");
    let sw = sigma.mul(&lat);
    let involutive = sw.mul(&sw).is_identity();
    let theta_el = WeylElement::from_matrix(d, an.rf.theta()).expect("theta permutes roots");
    let ord = order_of(d, &theta_el.compose(d, w));
    let swq = sw.to_q();
    WeylElementInfo {
        lattice_matrix: lat.rows(),
        order_sigma_w: ord,
        formula_dim: Q::new((2 * rank).into(), ord.into()),
        fixed_locus_dim: fixed_dim(&swq, 1) + fixed_dim(&swq, -1),
        involutive,
    }
}

/// Subgroup of `y` preserving the subspace spanned by `basis`, as a matrix group on it.
fn subspace_normalizer_image(
    an: &Analysis,
    y: &WeylGroup,
    basis: &[Vec<Q>],
) -> Result<MatrixGroup> {
    let d = an.rf.datum();
    let space = Subspace::span(d.rank(), basis);
    let mut images = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for w in y.elements() {
        let imgs: Vec<Vec<Q>> = basis.iter().map(|v| w.apply_q(d, v)).collect();
        if imgs.iter().all(|v| space.contains(v)) {
            let m =
                crate::linalg::restrict_to(&w.matrix(d).to_q(), basis).expect("checked invariance");
            if seen.insert(m.clone()) {
                images.push(m);
            }
        }
    }
    MatrixGroup::generate(basis.len(), images, an.limits.max_group_order)
}

fn cb_model_ok(an: &Analysis, class: &crate::cayley::CartanClass) -> bool {
    let d = an.rf.datum();
    let mut m = an.rf.theta().clone();
    for &b in class.representative.roots() {
        m = m.mul(&d.reflection(b));
    }
    let mq = m.to_q();
    let fixes_t = class.t_basis.iter().all(|v| mq.mul_vec(v) == *v);
    let inverts_a = class
        .a_basis
        .iter()
        .all(|v| mq.mul_vec(v).iter().zip(v).all(|(x, y)| *x == -y.clone()));
    let integral = an.rf.to_lattice_coords(&mq).is_integral();
    fixes_t && inverts_a && integral && m.mul(&m).is_identity()
}

pub fn etale_index(an: &Analysis, y: &WeylGroup) -> Result<Vec<EtaleEntry>> {
    let d = an.rf.datum();
    let mut out = Vec::new();
    for class in &an.classes {
        let small = &class.normalizer_action;
        let big = subspace_normalizer_image(an, y, &class.a_basis)?;
        let contained = small.is_subgroup_of(&big);
        if !contained || big.order() % small.order() != 0 {
            return Err(Error::invariant(format!(
                "Gamma_B x| Z_W(B) is not inside N_Y(a_B) for B = {:?}",
                class.representative.labels(d)
            )));
        }
        out.push(EtaleEntry {
            system: class.representative.labels(d),
            abstract_small_order: class.gamma_order * class.zwb.order(),
            small_image_order: small.order(),
            big_image_order: big.order(),
            contained,
            index: big.order() / small.order(),
            cb_model_ok: cb_model_ok(an, class),
        });
    }
    Ok(out)
}

pub fn involution_report(an: &Analysis) -> Result<InvolutionReport> {
    let d = an.rf.datum();
    let rank = d.rank();
    let sigma = sigma_on_lattice(an)?;
    let y = d.weyl_group(an.limits.max_group_order)?;
    // sigma commutes with W's lattice action
    for g in an.rf.weyl().generators() {
        let l = IntMat::from_q(&an.rf.to_lattice_coords(&g.matrix(d).to_q())).expect("integral");
        if sigma.mul(&l) != l.mul(&sigma) {
            return Err(Error::invariant("sigma does not commute with W"));
        }
    }
    let mut involutive_elements = Vec::new();
    let mut involutive_count = 0;
    let mut all_verified = true;
    let mut formula_exceptions = 0;
    let mut max_non: Option<usize> = None;
    let mut dimension_check = true;
    for w in y.elements() {
        let info = element_info(an, &sigma, w);
        if info.involutive {
            involutive_count += 1;
            let lat = IntMat::from_rows(&info.lattice_matrix);
            all_verified &= sigma.mul(&lat).mul(&sigma).mul(&lat).is_identity();
            dimension_check &= info.fixed_locus_dim == rank;
            if info.formula_dim != q(rank as i64) {
                formula_exceptions += 1;
            }
            if involutive_elements.len() < LISTED_ELEMENTS {
                involutive_elements.push(info);
            }
        } else {
            dimension_check &= info.fixed_locus_dim < rank;
            max_non =
                Some(max_non.map_or(info.fixed_locus_dim, |m: usize| m.max(info.fixed_locus_dim)));
        }
    }
    let sq = sigma.to_q();
    Ok(InvolutionReport {
        sigma_on_lattice: sigma.rows(),
        sigma_plus_dim: fixed_dim(&sq, 1),
        sigma_minus_dim: fixed_dim(&sq, -1),
        weyl_order: y.order(),
        involutive_count,
        involutive_elements,
        all_verified,
        formula_exceptions,
        max_noninvolutive_fixed_dim: max_non,
        dimension_check,
        etale: etale_index(an, &y)?,
    })
}
