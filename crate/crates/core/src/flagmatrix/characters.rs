//! Irreducible characters of SO(3) and SO(4) as trace polynomials, and their
//! location inside the computed eigenspaces.
//!
//! SO(3): `χ_k = -((k-1)/3) p_0 + p_1 + … + p_k`, equivalently
//! `χ_k = Σ_j c_j p_1^j` with `c_j = Σ_{l=j}^k (-1)^{k-l} C(k+l, 2l) C(l, j)`.
//!
//! SO(4): with `X, Y` the half-angle variables of the two rotation planes and
//! `A(m, n) = (-1)^n C(m-n, n) 2^{m-2n}` the coefficients of `U_m`,
//! `χ = Σ_{q,r} A(k1, q) A(k2, r) (X^{k1-2q} Y^{k2-2r} + X^{k2-2r} Y^{k1-2q})`,
//! rewritten through `XY = p_1/4`, `X²Y² = p_1²/16` and
//! `X² + Y² = (p_1² - p_2 + 4)/8`.

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::spectrum::{eigenvalues_exact, in_eigenspace, labels_within, SpectrumLabel};
use super::FlagMatrix;
use crate::error::{Error, Result};
use crate::laplacian::lap;
use crate::tracepoly::{int, rat, so3_from_coords, Mode, Rational, So3Basis, TracePoly};

pub type CharacterLabel = SpectrumLabel;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Character {
    pub label: CharacterLabel,
    pub eigenvalue: Rational,
    /// Reduced SO(3) or SO(4) trace polynomial.
    pub poly: TracePoly,
}

impl Character {
    /// `χ_k` or `χ_{j1,j2}` with half-integers written as fractions.
    pub fn name(&self) -> String {
        match self.label {
            SpectrumLabel::So4 { k1, k2 } => {
                format!("chi_{{{},{}}}", rat(k1 as i64, 2), rat(k2 as i64, 2))
            }
            SpectrumLabel::So3 { k } | SpectrumLabel::Sphere { k } => format!("chi_{k}"),
        }
    }

    fn verified(self) -> Result<Self> {
        let image = lap(&self.poly, self.poly.mode())?;
        if image != self.poly.scale_rational(&self.eigenvalue) {
            return Err(Error::CharacterMismatch {
                label: self.name(),
                eigenvalue: self.eigenvalue.to_string(),
            });
        }
        Ok(self)
    }
}

/// `χ_k` of SO(3) with its coordinates in both bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct So3Character {
    pub character: Character,
    /// Coordinates on `p_0, p_1, …, p_k`.
    pub btrace: Vec<Rational>,
    /// Coordinates on `p_0, p_1, p_1^2, …, p_1^k`.
    pub bprime: Vec<Rational>,
}

fn binom(n: u32, k: u32) -> BigInt {
    binomial(BigInt::from(n), BigInt::from(k))
}

pub fn character_so3(k: u32) -> Result<So3Character> {
    let ki = k as i64;
    let mut btrace = vec![Rational::one(); k as usize + 1];
    btrace[0] = rat(1 - ki, 3);

    let mut bprime = Vec::with_capacity(k as usize + 1);
    for j in 0..=k {
        let mut c = BigInt::zero();
        for l in j..=k {
            let term = binom(k + l, 2 * l) * binom(l, j);
            if (k - l) % 2 == 0 {
                c += term;
            } else {
                c -= term;
            }
        }
        bprime.push(Rational::from_integer(c));
    }
    // the constant term sits on p_0 = 3
    bprime[0] = &bprime[0] / int(3);

    let poly = so3_from_coords(&btrace, So3Basis::TracePowers);
    let label = SpectrumLabel::So3 { k };
    if so3_from_coords(&bprime, So3Basis::PowersOfP1) != poly {
        return Err(Error::CharacterMismatch {
            label: format!("chi_{k}"),
            eigenvalue: label.eigenvalue().to_string(),
        });
    }
    let character = Character {
        eigenvalue: label.eigenvalue(),
        label,
        poly,
    }
    .verified()?;
    Ok(So3Character {
        character,
        btrace,
        bprime,
    })
}

/// `A(m, n) = (-1)^n C(m-n, n) 2^{m-2n}`.
fn chebyshev_u_coeff(m: u32, n: u32) -> BigInt {
    let c = binom(m - n, n) << (m - 2 * n) as usize;
    if n % 2 == 1 {
        -c
    } else {
        c
    }
}

/// `χ_{k1/2, k2/2}`; `k1` and `k2` must have the same parity.
pub fn character_so4_doubled(k1: u32, k2: u32) -> Result<Character> {
    if (k1 + k2) % 2 != 0 {
        return Err(Error::Parity {
            j1: rat(k1 as i64, 2).to_string(),
            j2: rat(k2 as i64, 2).to_string(),
            reason: "j1 + j2 must be an integer",
        });
    }
    let label = SpectrumLabel::so4(k1, k2);
    let SpectrumLabel::So4 { k1, k2 } = label else {
        unreachable!()
    };
    let mode = Mode::SO4;
    let poly = if k1 == 0 {
        // the trivial character is recorded as p_0
        TracePoly::p0(mode)
    } else {
        let p1 = TracePoly::p1p2(1, 0, mode);
        let p1_sq = TracePoly::p1p2(2, 0, mode);
        let p2 = TracePoly::p1p2(0, 1, mode);
        let xy = p1.scale_rational(&rat(1, 4));
        let s = (&(&p1_sq - &p2) + &TracePoly::constant(int(4), mode)).scale_rational(&rat(1, 8));
        let t = p1_sq.scale_rational(&rat(1, 16));
        // power sums X^{2d} + Y^{2d} through Newton's recurrence
        let max_d = (k1 / 2 + 1) as usize;
        let mut power = vec![TracePoly::constant(int(2), mode), s.clone()];
        while power.len() <= max_d {
            let n = power.len();
            let next = &(&s * &power[n - 1]) - &(&t * &power[n - 2]);
            power.push(next);
        }
        let mut out = TracePoly::zero(mode);
        for q in 0..=k1 / 2 {
            for r in 0..=k2 / 2 {
                let c = chebyshev_u_coeff(k1, q) * chebyshev_u_coeff(k2, r);
                let (a, b) = (k1 - 2 * q, k2 - 2 * r);
                let (lo, hi) = (a.min(b), a.max(b));
                let pair = &xy.pow(lo) * &power[((hi - lo) / 2) as usize];
                out = &out + &pair.scale_rational(&Rational::from_integer(c));
            }
        }
        out
    };
    Character {
        eigenvalue: label.eigenvalue(),
        label,
        poly,
    }
    .verified()
}

/// `χ_{j1,j2}` for half-integers `j1, j2 ≥ 0` with `j1 + j2` an integer.
pub fn character_so4(j1: &Rational, j2: &Rational) -> Result<Character> {
    let err = |reason| Error::Parity {
        j1: j1.to_string(),
        j2: j2.to_string(),
        reason,
    };
    let doubled = |j: &Rational| -> Option<u32> {
        let d = j * int(2);
        (d.is_integer() && !d.is_negative()).then(|| d.to_integer().try_into().ok()).flatten()
    };
    let (Some(k1), Some(k2)) = (doubled(j1), doubled(j2)) else {
        return Err(err("j1 and j2 must be non-negative half-integers"));
    };
    if (k1 + k2) % 2 != 0 {
        return Err(err("j1 + j2 must be an integer"));
    }
    character_so4_doubled(k1, k2)
}

fn serialize_rationals<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|r| r.to_string()))
}

fn serialize_rational<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(r)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatchedCharacter {
    pub label: CharacterLabel,
    pub name: String,
    /// Coordinates in the matrix basis, in the character's own normalization.
    #[serde(serialize_with = "serialize_rationals")]
    pub coordinates: Vec<Rational>,
}

/// One eigenvalue of a flag matrix with the characters found in its eigenspace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EigenMatch {
    #[serde(serialize_with = "serialize_rational")]
    pub eigenvalue: Rational,
    pub geometric_multiplicity: usize,
    pub characters: Vec<MatchedCharacter>,
    /// The eigenspace is larger than the span of the matched characters.
    pub unexplained: bool,
}

/// Places every character of degree at most `k` inside the eigenspace of its
/// eigenvalue; a character outside its eigenspace is an error.
pub fn match_characters(m: &FlagMatrix) -> Result<Vec<EigenMatch>> {
    let spectrum = eigenvalues_exact(m)?;
    let mut out: Vec<EigenMatch> = spectrum
        .iter()
        .map(|e| EigenMatch {
            eigenvalue: e.eigenvalue.clone(),
            geometric_multiplicity: e.geometric_multiplicity.unwrap_or(0),
            characters: Vec::new(),
            unexplained: false,
        })
        .collect();
    for label in labels_within(m.mode(), m.k()) {
        let character = match label {
            SpectrumLabel::So3 { k } => character_so3(k)?.character,
            SpectrumLabel::So4 { k1, k2 } => character_so4_doubled(k1, k2)?,
            SpectrumLabel::Sphere { .. } => unreachable!("no sphere labels in a group matrix"),
        };
        let coordinates = m.basis.coordinates(&character.poly)?;
        let slot = out.iter_mut().find(|e| e.eigenvalue == character.eigenvalue);
        match slot {
            Some(slot) if in_eigenspace(m, &character.eigenvalue, &coordinates) => {
                slot.characters.push(MatchedCharacter {
                    label,
                    name: character.name(),
                    coordinates,
                })
            }
            _ => {
                return Err(Error::CharacterMismatch {
                    label: character.name(),
                    eigenvalue: character.eigenvalue.to_string(),
                })
            }
        }
    }
    for e in &mut out {
        e.unexplained = e.geometric_multiplicity > e.characters.len();
    }
    Ok(out)
}
