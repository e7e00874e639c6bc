use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rootdata::{IntMat, RootDatum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Grade {
    Compact,
    Noncompact,
}

impl Grade {
    fn bit(self) -> u8 {
        match self {
            Grade::Compact => 0,
            Grade::Noncompact => 1,
        }
    }

    fn from_bit(b: u8) -> Grade {
        if b % 2 == 0 {
            Grade::Compact
        } else {
            Grade::Noncompact
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RootKind {
    ImaginaryCompact,
    ImaginaryNoncompact,
    Complex,
}

/// Root-by-root classification; indices refer to the datum's root list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootClassification {
    kinds: Vec<RootKind>,
    theta_image: Vec<usize>,
    complex_pairs: Vec<(usize, usize)>,
}

impl RootClassification {
    pub fn kind(&self, i: usize) -> RootKind {
        self.kinds[i]
    }

    pub fn kinds(&self) -> &[RootKind] {
        &self.kinds
    }

    pub fn theta_image(&self, i: usize) -> usize {
        self.theta_image[i]
    }

    pub fn is_imaginary(&self, i: usize) -> bool {
        self.kinds[i] != RootKind::Complex
    }

    /// 0 for compact, 1 for noncompact; `None` on complex roots.
    pub fn grading(&self, i: usize) -> Option<u8> {
        match self.kinds[i] {
            RootKind::ImaginaryCompact => Some(0),
            RootKind::ImaginaryNoncompact => Some(1),
            RootKind::Complex => None,
        }
    }

    fn select(&self, k: RootKind) -> Vec<usize> {
        (0..self.kinds.len())
            .filter(|&i| self.kinds[i] == k)
            .collect()
    }

    pub fn imaginary_compact(&self) -> Vec<usize> {
        self.select(RootKind::ImaginaryCompact)
    }

    pub fn imaginary_noncompact(&self) -> Vec<usize> {
        self.select(RootKind::ImaginaryNoncompact)
    }

    pub fn complex(&self) -> Vec<usize> {
        self.select(RootKind::Complex)
    }

    /// Pairs `(a, theta a)` of positive complex roots with `a < theta a`.
    pub fn complex_pairs(&self) -> &[(usize, usize)] {
        &self.complex_pairs
    }

    pub fn positive_of_kind(&self, d: &RootDatum, k: RootKind) -> Vec<usize> {
        d.positive_roots().filter(|&i| self.kinds[i] == k).collect()
    }
}

/// Positive imaginary roots that are not the sum of two positive imaginary roots.
pub fn simple_imaginary_roots(d: &RootDatum, theta: &IntMat) -> Vec<usize> {
    let imag: Vec<usize> = d
        .positive_roots()
        .filter(|&i| d.image(theta, i) == Some(i))
        .collect();
    imag.iter()
        .copied()
        .filter(|&g| {
            !imag.iter().any(|&a| {
                let diff: Vec<i64> = d
                    .root(g)
                    .iter()
                    .zip(d.root(a))
                    .map(|(x, y)| x - y)
                    .collect();
                d.index_of(&diff)
                    .is_some_and(|b| d.is_positive(b) && imag.contains(&b))
            })
        })
        .collect()
}

/// Extend `painting` (keyed by positive imaginary roots) to a Z/2 grading and classify every root.
pub fn classify_roots(
    d: &RootDatum,
    theta: &IntMat,
    painting: &BTreeMap<usize, Grade>,
) -> Result<RootClassification> {
    let n = d.num_roots();
    let theta_image: Vec<usize> = (0..n)
        .map(|i| {
            d.image(theta, i)
                .ok_or_else(|| Error::invalid("theta does not permute the roots"))
        })
        .collect::<Result<_>>()?;
    let imaginary = |i: usize| theta_image[i] == i;

    for &k in painting.keys() {
        if k >= n || !d.is_positive(k) || !imaginary(k) {
            let label = if k < n {
                d.root_label(k)
            } else {
                k.to_string()
            };
            return Err(Error::invalid(format!(
                "painted root {label} is not a positive imaginary root"
            )));
        }
    }
    let simple = simple_imaginary_roots(d, theta);
    if let Some(&s) = simple.iter().find(|s| !painting.contains_key(s)) {
        return Err(Error::invalid(format!(
            "simple imaginary root {} is not painted",
            d.root_label(s)
        )));
    }

    // positive roots are stored in height order, so one pass suffices
    let mut grade: Vec<Option<u8>> = vec![None; n];
    for &s in &simple {
        grade[s] = Some(painting[&s].bit());
    }
    for g in d.positive_roots() {
        if !imaginary(g) || grade[g].is_some() {
            continue;
        }
        let (s, b) = simple
            .iter()
            .find_map(|&s| {
                let diff: Vec<i64> = d
                    .root(g)
                    .iter()
                    .zip(d.root(s))
                    .map(|(x, y)| x - y)
                    .collect();
                d.index_of(&diff)
                    .filter(|&b| d.is_positive(b) && imaginary(b))
                    .map(|b| (s, b))
            })
            .ok_or_else(|| {
                Error::invariant(format!(
                    "no decomposition of imaginary root {}",
                    d.root_label(g)
                ))
            })?;
        let v = (grade[s].unwrap() + grade[b].expect("lower height")) % 2;
        grade[g] = Some(v);
        if let Some(p) = painting.get(&g) {
            if p.bit() != v {
                return Err(inconsistent(d, s, b, g));
            }
        }
    }
    // additivity over every triple of positive imaginary roots
    let pos_imag: Vec<usize> = d.positive_roots().filter(|&i| imaginary(i)).collect();
    for (x, &a) in pos_imag.iter().enumerate() {
        for &b in &pos_imag[x..] {
            let sum: Vec<i64> = d
                .root(a)
                .iter()
                .zip(d.root(b))
                .map(|(p, q)| p + q)
                .collect();
            if let Some(c) = d.index_of(&sum) {
                if (grade[a].unwrap() + grade[b].unwrap()) % 2 != grade[c].unwrap() {
                    return Err(inconsistent(d, a, b, c));
                }
            }
        }
    }

    let mut kinds = vec![RootKind::Complex; n];
    for i in d.positive_roots() {
        let k = match grade[i] {
            Some(0) => RootKind::ImaginaryCompact,
            Some(_) => RootKind::ImaginaryNoncompact,
            None => RootKind::Complex,
        };
        kinds[i] = k;
        kinds[d.negate(i)] = k;
    }
    let complex_pairs = d
        .positive_roots()
        .filter(|&i| !imaginary(i) && i < theta_image[i])
        .map(|i| (i, theta_image[i]))
        .collect();
    Ok(RootClassification {
        kinds,
        theta_image,
        complex_pairs,
    })
}

fn inconsistent(d: &RootDatum, a: usize, b: usize, c: usize) -> Error {
    Error::invalid(format!(
        "painting is not additive: {} + {} = {}",
        d.root_label(a),
        d.root_label(b),
        d.root_label(c)
    ))
}

/// Read back a painting as the grading of the given roots.
pub fn painting_from_grades(
    grades: impl IntoIterator<Item = (usize, u8)>,
) -> BTreeMap<usize, Grade> {
    grades
        .into_iter()
        .map(|(i, g)| (i, Grade::from_bit(g)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::CartanType;

    fn datum(s: &str) -> RootDatum {
        RootDatum::build(&s.parse::<CartanType>().unwrap()).unwrap()
    }

    #[test]
    fn compact_a2() {
        let d = datum("A2");
        let id = IntMat::identity(2);
        let p = painting_from_grades([(0, 0), (1, 0)]);
        let c = classify_roots(&d, &id, &p).unwrap();
        assert_eq!(c.imaginary_compact().len(), 6);
        assert!(c.complex_pairs().is_empty());
    }

    #[test]
    fn a2_with_one_noncompact_simple_root() {
        let d = datum("A2");
        let id = IntMat::identity(2);
        let c = classify_roots(&d, &id, &painting_from_grades([(0, 1), (1, 0)])).unwrap();
        // the highest root inherits grade 1
        let top = d.index_of(&[1, 1]).unwrap();
        assert_eq!(c.kind(top), RootKind::ImaginaryNoncompact);
        assert_eq!(c.imaginary_noncompact().len(), 4);
    }

    #[test]
    fn inconsistent_painting_names_the_triple() {
        let d = datum("A2");
        let id = IntMat::identity(2);
        let top = d.index_of(&[1, 1]).unwrap();
        let p = painting_from_grades([(0, 1), (1, 1), (top, 1)]);
        let err = classify_roots(&d, &id, &p).unwrap_err().to_string();
        assert!(err.contains("(1,0)") && err.contains("(1,1)"), "{err}");
    }

    #[test]
    fn missing_and_bad_paint() {
        let d = datum("A2");
        let id = IntMat::identity(2);
        assert!(classify_roots(&d, &id, &painting_from_grades([(0, 1)])).is_err());
        let neg = d.negate(0);
        assert!(
            classify_roots(&d, &id, &painting_from_grades([(0, 1), (1, 0), (neg, 0)])).is_err()
        );
    }

    #[test]
    fn swap_gives_complex_pairs() {
        let d = datum("A1xA1");
        let swap = IntMat::from_rows(&[vec![0, 1], vec![1, 0]]);
        let c = classify_roots(&d, &swap, &BTreeMap::new()).unwrap();
        assert_eq!(c.complex().len(), 4);
        assert_eq!(c.complex_pairs(), &[(0, 1)]);
        assert!(simple_imaginary_roots(&d, &swap).is_empty());
    }
}
