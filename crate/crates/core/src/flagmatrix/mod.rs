//! Matrices of the Laplacian on the graded flag `V_{≤k}`.
//!
//! Bases:
//! - `bprime`: `p_0, p_1, p_1^2, …, p_1^k` on SO(3);
//! - `btrace`: `p_0, p_1, …, p_k` on SO(3);
//! - `so4`: `p_0` then `p_1^l p_2^m` with `0 < l + 2m ≤ k`, ordered by weight
//!   `l + 2m` and then by `m`;
//! - `partition`: all partitions of degree at most `k`, for general `N`. This
//!   is only a spanning set, so it yields an [`ExpressionTable`] rather than a
//!   matrix.
//!
//! Column `j` of a [`FlagMatrix`] holds the coordinates of `Δ(basis[j])`.
//! Columns never reach into higher weights, so the matrix is upper block
//! triangular and its spectrum is the union of the diagonal-block spectra.

mod characters;
pub mod exact;
mod export;
mod spectrum;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laplacian::{lap, lap_partition};
use crate::partitions::{enumerate_upto, Partition};
use crate::tracepoly::{int, p1p2_label, so3_basis_change, so3_pm_in_p1, Mode, Rational, So3Basis, TracePoly};

pub use characters::{
    character_so3, character_so4, character_so4_doubled, match_characters, Character, CharacterLabel,
    EigenMatch, MatchedCharacter, So3Character,
};
pub use exact::RMatrix;
pub use export::{ExpressionColumn, ExpressionTableJson, MatrixJson};
pub use spectrum::{
    eigenspace_exact, eigenvalues_exact, in_eigenspace, spectrum_closed, SpectrumEntry, SpectrumLabel, SpectrumTarget,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisId {
    BPrime,
    BTrace,
    So4,
    Partition,
}

impl BasisId {
    pub fn as_str(self) -> &'static str {
        match self {
            BasisId::BPrime => "bprime",
            BasisId::BTrace => "btrace",
            BasisId::So4 => "so4",
            BasisId::Partition => "partition",
        }
    }

    /// The basis used when none is requested.
    pub fn default_for(mode: Mode) -> BasisId {
        match mode {
            Mode::SO3 => BasisId::BTrace,
            Mode::SO4 => BasisId::So4,
            _ => BasisId::Partition,
        }
    }
}

impl fmt::Display for BasisId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BasisId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bprime" => Ok(BasisId::BPrime),
            "btrace" => Ok(BasisId::BTrace),
            "so4" => Ok(BasisId::So4),
            "partition" => Ok(BasisId::Partition),
            other => Err(Error::Parse(format!(
                "unknown basis `{other}` (expected bprime, btrace, so4 or partition)"
            ))),
        }
    }
}

/// Ordered basis (or spanning set) of `V_{≤k}`.
///
/// Each element is stored as a partition: `∅` stands for `p_0`, `(j)` for
/// `p_j` in `btrace`, `(1^j)` for `p_1^j` in `bprime`, and `(2^m, 1^l)` for
/// `p_1^l p_2^m` in `so4`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagBasis {
    pub mode: Mode,
    pub id: BasisId,
    pub k: u32,
    pub elements: Vec<Partition>,
    index: HashMap<Partition, usize>,
}

pub fn basis_for(mode: Mode, id: BasisId, k: u32) -> Result<FlagBasis> {
    let elements: Vec<Partition> = match (mode, id) {
        (Mode::SO3, BasisId::BPrime) => (0..=k).map(|j| Partition::ones_twos(j, 0)).collect(),
        (Mode::SO3, BasisId::BTrace) => (0..=k).map(Partition::single).collect(),
        (Mode::SO4, BasisId::So4) => {
            let mut out = vec![Partition::empty()];
            for w in 1..=k {
                for m in 0..=w / 2 {
                    out.push(Partition::ones_twos(w - 2 * m, m));
                }
            }
            out
        }
        (Mode::Symbolic | Mode::Fixed(_), BasisId::Partition) => enumerate_upto(k),
        _ => {
            return Err(Error::UnknownBasis {
                basis: id.to_string(),
                mode,
            })
        }
    };
    let index = elements.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    Ok(FlagBasis {
        mode,
        id,
        k,
        elements,
        index,
    })
}

impl FlagBasis {
    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    /// Grading weight of element `i`.
    pub fn weight(&self, i: usize) -> u32 {
        self.elements[i].degree()
    }

    /// Indices where each weight block starts, followed by `dim()`.
    pub fn block_bounds(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for i in 0..self.dim() {
            if i == 0 || self.weight(i) != self.weight(i - 1) {
                out.push(i);
            }
        }
        out.push(self.dim());
        out
    }

    /// Label in the notation of the printed tables.
    pub fn label(&self, i: usize) -> String {
        let lambda = &self.elements[i];
        if lambda.is_empty() {
            return "p_0".into();
        }
        match self.id {
            BasisId::BTrace => format!("p_{}", lambda.parts()[0]),
            BasisId::BPrime | BasisId::So4 => p1p2_label(lambda),
            BasisId::Partition if lambda.parts() == [1] => "p_1".into(),
            BasisId::Partition => format!("p_{{{}}}", lambda.padded()),
        }
    }

    pub fn labels(&self) -> Vec<String> {
        (0..self.dim()).map(|i| self.label(i)).collect()
    }

    /// Element `i` as a trace polynomial in the basis mode.
    pub fn element(&self, i: usize) -> TracePoly {
        let lambda = &self.elements[i];
        match (self.id, lambda.is_empty()) {
            (BasisId::Partition, _) => TracePoly::p_lambda(lambda.clone(), self.mode),
            (_, true) => TracePoly::p0(self.mode),
            (BasisId::BTrace, false) => so3_pm_in_p1(lambda.parts()[0]),
            _ => TracePoly::p_lambda(lambda.clone(), self.mode),
        }
    }

    /// Exact coordinates of `a` in this basis.
    pub fn coordinates(&self, a: &TracePoly) -> Result<Vec<Rational>> {
        match self.id {
            BasisId::BPrime => so3_basis_change(a, So3Basis::PowersOfP1, self.k),
            BasisId::BTrace => so3_basis_change(a, So3Basis::TracePowers, self.k),
            BasisId::So4 => {
                let reduced = a.reduce(Mode::SO4)?;
                let mut out = vec![Rational::zero(); self.dim()];
                for (lambda, c) in reduced.terms() {
                    let c = c.as_constant().ok_or_else(|| {
                        Error::Coordinates(format!("coefficient of {lambda:?} depends on N"))
                    })?;
                    if lambda.is_empty() {
                        out[0] += c / int(4);
                        continue;
                    }
                    let i = self.index.get(lambda).ok_or_else(|| {
                        if lambda.degree() > self.k {
                            Error::DegreeExceeds {
                                degree: lambda.degree(),
                                k: self.k,
                            }
                        } else {
                            Error::Coordinates(format!("{lambda:?} is not a p_1^l p_2^m monomial"))
                        }
                    })?;
                    out[*i] += c;
                }
                Ok(out)
            }
            BasisId::Partition => Err(Error::ModeUnsupported {
                mode: self.mode,
                reason: "the partition spanning set carries no coordinates".into(),
            }),
        }
    }

    /// Inverse of [`FlagBasis::coordinates`].
    pub fn from_coordinates(&self, coords: &[Rational]) -> TracePoly {
        let mut out = TracePoly::zero(self.mode);
        for (i, c) in coords.iter().enumerate() {
            if !c.is_zero() {
                out = &out + &self.element(i).scale_rational(c);
            }
        }
        out
    }
}

/// `[Δ]_{V_{≤k}}` in a group basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagMatrix {
    pub basis: FlagBasis,
    /// Row-major; `entries[i][j]` is the `basis[i]` coordinate of `Δ basis[j]`.
    pub entries: RMatrix,
    pub block_bounds: Vec<usize>,
}

pub fn build_matrix(mode: Mode, id: BasisId, k: u32) -> Result<FlagMatrix> {
    if !mode.is_reduced_group() {
        return Err(Error::ModeUnsupported {
            mode,
            reason: "matrices need a basis; use build_expression_table for general N".into(),
        });
    }
    let basis = basis_for(mode, id, k)?;
    let columns: Vec<Vec<Rational>> = (0..basis.dim())
        .into_par_iter()
        .map(|j| basis.coordinates(&lap(&basis.element(j), mode)?))
        .collect::<Result<_>>()?;
    let dim = basis.dim();
    let entries: RMatrix = (0..dim)
        .map(|i| (0..dim).map(|j| columns[j][i].clone()).collect())
        .collect();
    for j in 0..dim {
        for i in 0..dim {
            if basis.weight(i) > basis.weight(j) && !entries[i][j].is_zero() {
                return Err(Error::Coordinates(format!(
                    "Δ{} has a component on {} above its weight",
                    basis.label(j),
                    basis.label(i)
                )));
            }
        }
    }
    let block_bounds = basis.block_bounds();
    Ok(FlagMatrix {
        basis,
        entries,
        block_bounds,
    })
}

impl FlagMatrix {
    pub fn mode(&self) -> Mode {
        self.basis.mode
    }

    pub fn k(&self) -> u32 {
        self.basis.k
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    /// The diagonal blocks as `(start, end)` index ranges.
    pub fn blocks(&self) -> Vec<(usize, usize)> {
        self.block_bounds.windows(2).map(|w| (w[0], w[1])).collect()
    }

    pub fn diagonal_block(&self, start: usize, end: usize) -> RMatrix {
        self.entries[start..end].iter().map(|row| row[start..end].to_vec()).collect()
    }
}

/// `Δ` of every generator of the partition spanning set, in symbolic `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpressionTable {
    pub k: u32,
    pub generators: Vec<Partition>,
    pub columns: Vec<TracePoly>,
}

pub fn build_expression_table(k: u32) -> ExpressionTable {
    let generators = enumerate_upto(k);
    let columns = generators.par_iter().map(lap_partition).collect();
    ExpressionTable {
        k,
        generators,
        columns,
    }
}
