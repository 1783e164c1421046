//! Closed-form spectra and exact eigen-extraction from the diagonal blocks.

use std::fmt;

use num_traits::Zero;
use serde::{Serialize, Serializer};

use super::exact::{self, charpoly, nullspace, rank, shifted};
use super::FlagMatrix;
use crate::error::{Error, Result};
use crate::tracepoly::{rat, Mode, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpectrumTarget {
    /// The sphere `S^{N-1}`, eigenvalues `-k(k+N-2)/2`.
    Sphere(u32),
    So3,
    So4,
}

/// Parameters producing an eigenvalue.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SpectrumLabel {
    Sphere { k: u32 },
    So3 { k: u32 },
    /// Unordered pair of same-parity integers, stored with `k1 ≥ k2`.
    /// In half-integer terms `j1 = k1/2`, `j2 = k2/2`.
    So4 { k1: u32, k2: u32 },
}

impl SpectrumLabel {
    pub fn so4(a: u32, b: u32) -> Self {
        SpectrumLabel::So4 {
            k1: a.max(b),
            k2: a.min(b),
        }
    }

    pub fn eigenvalue(&self) -> Rational {
        match *self {
            SpectrumLabel::Sphere { .. } => unreachable!("sphere eigenvalues depend on N"),
            SpectrumLabel::So3 { k } => rat(-(k as i64) * (k as i64 + 1), 2),
            SpectrumLabel::So4 { k1, k2 } => {
                let (a, b) = (k1 as i64, k2 as i64);
                rat(-(a * (a + 2) + b * (b + 2)), 4)
            }
        }
    }

    /// Degree of the associated character as a trace polynomial.
    pub fn degree(&self) -> u32 {
        match *self {
            SpectrumLabel::Sphere { k } | SpectrumLabel::So3 { k } => k,
            SpectrumLabel::So4 { k1, .. } => k1,
        }
    }
}

impl fmt::Display for SpectrumLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectrumLabel::Sphere { k } | SpectrumLabel::So3 { k } => write!(f, "k={k}"),
            SpectrumLabel::So4 { k1, k2 } => write!(f, "(k1,k2)=({k1},{k2})"),
        }
    }
}

impl Serialize for SpectrumLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn serialize_rational<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(r)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectrumEntry {
    #[serde(serialize_with = "serialize_rational")]
    pub eigenvalue: Rational,
    pub labels: Vec<SpectrumLabel>,
    /// Multiplicity as a root of the characteristic polynomial of the matrix.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub algebraic_multiplicity: Option<usize>,
    /// Dimension of the eigenspace inside the given `V_{≤k}`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub geometric_multiplicity: Option<usize>,
}

/// Closed-form eigenvalues with their parameter labels, sorted from 0
/// downwards. `bound` caps `k` (sphere, SO(3)) or `k1 + k2` (SO(4)).
pub fn spectrum_closed(target: SpectrumTarget, bound: u32) -> Vec<SpectrumEntry> {
    let mut labelled: Vec<(Rational, SpectrumLabel)> = match target {
        SpectrumTarget::Sphere(n) => (0..=bound)
            .map(|k| {
                let (k, n) = (k as i64, n as i64);
                (rat(-k * (k + n - 2), 2), SpectrumLabel::Sphere { k: k as u32 })
            })
            .collect(),
        SpectrumTarget::So3 => (0..=bound)
            .map(|k| {
                let l = SpectrumLabel::So3 { k };
                (l.eigenvalue(), l)
            })
            .collect(),
        SpectrumTarget::So4 => so4_labels(|k1, k2| k1 + k2 <= bound, bound)
            .into_iter()
            .map(|l| (l.eigenvalue(), l))
            .collect(),
    };
    labelled.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut out: Vec<SpectrumEntry> = Vec::new();
    for (value, label) in labelled {
        match out.last_mut() {
            Some(e) if e.eigenvalue == value => e.labels.push(label),
            _ => out.push(SpectrumEntry {
                eigenvalue: value,
                labels: vec![label],
                algebraic_multiplicity: None,
                geometric_multiplicity: None,
            }),
        }
    }
    out
}

/// Unordered same-parity pairs `k1 ≥ k2` with `k1 ≤ max_k1` accepted by `keep`.
pub(super) fn so4_labels(keep: impl Fn(u32, u32) -> bool, max_k1: u32) -> Vec<SpectrumLabel> {
    let mut out = Vec::new();
    for k1 in 0..=max_k1 {
        for k2 in (k1 % 2..=k1).step_by(2) {
            if keep(k1, k2) {
                out.push(SpectrumLabel::So4 { k1, k2 });
            }
        }
    }
    out
}

/// Labels whose characters have degree at most `k`.
pub(super) fn labels_within(mode: Mode, k: u32) -> Vec<SpectrumLabel> {
    match mode {
        Mode::SO3 => (0..=k).map(|k| SpectrumLabel::So3 { k }).collect(),
        _ => so4_labels(|_, _| true, k),
    }
}

fn require_group(m: &FlagMatrix) -> Result<()> {
    if m.mode().is_reduced_group() {
        Ok(())
    } else {
        Err(Error::ModeUnsupported {
            mode: m.mode(),
            reason: "the spanning set is not a basis; no spectrum is extracted".into(),
        })
    }
}

/// Spectrum of `M` as the union of its diagonal-block spectra.
///
/// Each block's characteristic polynomial is divided by the closed-form
/// candidates first, then by any rational root of what is left. A leftover
/// factor without rational roots is an error.
pub fn eigenvalues_exact(m: &FlagMatrix) -> Result<Vec<SpectrumEntry>> {
    require_group(m)?;
    let labels = labels_within(m.mode(), m.k());
    let mut candidates: Vec<Rational> = labels.iter().map(SpectrumLabel::eigenvalue).collect();
    candidates.sort_by(|a, b| b.cmp(a));
    candidates.dedup();

    let mut found: Vec<(Rational, usize)> = Vec::new();
    for (block, (start, end)) in m.blocks().into_iter().enumerate() {
        let poly = charpoly(&m.diagonal_block(start, end));
        let (mut roots, rest) = exact::strip_roots(poly, candidates.iter().cloned());
        let rest = if rest.degree().unwrap_or(0) > 0 {
            let fallback = exact::rational_root_candidates(&rest).unwrap_or_default();
            let (more, rest) = exact::strip_roots(rest, fallback);
            roots.extend(more);
            rest
        } else {
            rest
        };
        if rest.degree().unwrap_or(0) > 0 {
            return Err(Error::IrrationalSpectrum {
                block: block as u32,
                factor: rest.to_string_in("x"),
            });
        }
        for (value, mult) in roots {
            match found.iter_mut().find(|(v, _)| *v == value) {
                Some((_, total)) => *total += mult,
                None => found.push((value, mult)),
            }
        }
    }

    let dim = m.dim();
    Ok(found
        .into_iter()
        .map(|(value, alg)| {
            let geo = dim - rank(&shifted(&m.entries, &value));
            SpectrumEntry {
                labels: labels.iter().filter(|l| l.eigenvalue() == value).copied().collect(),
                eigenvalue: value,
                algebraic_multiplicity: Some(alg),
                geometric_multiplicity: Some(geo),
            }
        })
        .collect())
}

/// Exact basis of `ker(M - λI)`, each vector normalized to have first
/// nonzero coordinate 1.
pub fn eigenspace_exact(m: &FlagMatrix, lambda: &Rational) -> Result<Vec<Vec<Rational>>> {
    let basis = nullspace(&shifted(&m.entries, lambda));
    if basis.is_empty() {
        return Err(Error::NotAnEigenvalue(lambda.to_string()));
    }
    Ok(basis)
}

/// True when `v` is an eigenvector of `M` for `λ` (or zero).
pub fn in_eigenspace(m: &FlagMatrix, lambda: &Rational, v: &[Rational]) -> bool {
    exact::mat_vec(&shifted(&m.entries, lambda), v).iter().all(Zero::is_zero)
}
