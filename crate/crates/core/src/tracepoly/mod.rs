//! Trace polynomials `Σ c_λ p_λ` with coefficients polynomial in `N`.
//!
//! Internally the constant function 1 is the empty partition and
//! `p_0 = N·∅`; the printed form puts constants back on `p_0`.
//!
//! Three regimes are distinguished by [`Mode`]:
//! - `Symbolic`: `N` is an indeterminate, the `p_λ` are free generators;
//! - `Fixed(n)`: `N = n` has been substituted, still no relations applied;
//! - `SO3` / `SO4`: the relations valid on that group have been applied, so
//!   every monomial is a power of `p_1` (resp. a product `p_1^l p_2^m`).

mod json;
mod npoly;
mod reduction;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

pub use json::TermRecord;
pub use npoly::{int, rat, rational_to_f64, NPoly, Rational};
pub use reduction::{
    so3_basis_change, so3_from_coords, so3_pm_in_p1, so3_power_sums, so4_pm_in_p1p2,
    so4_power_sums, So3Basis,
};

use crate::error::{Error, Result};
use crate::partitions::Partition;

/// Which relations are legal for a trace polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    /// `N` symbolic; partitions are free generators.
    Symbolic,
    /// `N` fixed to an integer, no relations applied.
    Fixed(u32),
    SO3,
    SO4,
}

/// The `GroupMode` tag of the command line: general `N`, SO(3) or SO(4).
pub type GroupMode = Mode;

impl Mode {
    /// The integer value of `N`, if any.
    pub fn numeric_n(self) -> Option<u32> {
        match self {
            Mode::Symbolic => None,
            Mode::Fixed(n) => Some(n),
            Mode::SO3 => Some(3),
            Mode::SO4 => Some(4),
        }
    }

    pub fn is_reduced_group(self) -> bool {
        matches!(self, Mode::SO3 | Mode::SO4)
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Symbolic => write!(f, "generaln"),
            Mode::Fixed(n) => write!(f, "generaln(N={n})"),
            Mode::SO3 => write!(f, "so3"),
            Mode::SO4 => write!(f, "so4"),
        }
    }
}

/// A finite linear combination of trace monomials.
#[derive(Clone, PartialEq, Eq)]
pub struct TracePoly {
    terms: BTreeMap<Partition, NPoly>,
    mode: Mode,
}

impl TracePoly {
    pub fn zero(mode: Mode) -> Self {
        Self {
            terms: BTreeMap::new(),
            mode,
        }
    }

    /// The constant function `c`.
    pub fn constant(c: Rational, mode: Mode) -> Self {
        Self::monomial(Partition::empty(), NPoly::constant(c), mode)
    }

    pub fn one(mode: Mode) -> Self {
        Self::constant(Rational::one(), mode)
    }

    /// `p_0`, the constant function `N`.
    pub fn p0(mode: Mode) -> Self {
        let c = match mode.numeric_n() {
            None => NPoly::n(),
            Some(n) => NPoly::from_int(n as i64),
        };
        Self::monomial(Partition::empty(), c, mode)
    }

    /// `p_m = tr(U^m)`; `p_0` is the constant `N`.
    pub fn p(m: u32, mode: Mode) -> Self {
        if m == 0 {
            Self::p0(mode)
        } else {
            Self::monomial(Partition::single(m), NPoly::one(), mode)
        }
    }

    /// `p_λ` with unit coefficient.
    pub fn p_lambda(lambda: Partition, mode: Mode) -> Self {
        Self::monomial(lambda, NPoly::one(), mode)
    }

    /// `p_1^l p_2^m`.
    pub fn p1p2(l: u32, m: u32, mode: Mode) -> Self {
        Self::p_lambda(Partition::ones_twos(l, m), mode)
    }

    pub fn monomial(lambda: Partition, coeff: NPoly, mode: Mode) -> Self {
        let mut out = Self::zero(mode);
        out.add_term(lambda, coeff);
        out
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Partition, NPoly)>, mode: Mode) -> Self {
        let mut out = Self::zero(mode);
        for (lambda, c) in terms {
            out.add_term(lambda, c);
        }
        out
    }

    /// Builds from rational coefficients.
    pub fn from_rational_terms(
        terms: impl IntoIterator<Item = (Partition, Rational)>,
        mode: Mode,
    ) -> Self {
        Self::from_terms(terms.into_iter().map(|(l, c)| (l, NPoly::constant(c))), mode)
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in flag order (constant first).
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Partition, &NPoly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, lambda: &Partition) -> NPoly {
        self.terms.get(lambda).cloned().unwrap_or_default()
    }

    /// Coefficient as a rational; panics on a non-constant `NPoly`.
    pub fn rational_coeff(&self, lambda: &Partition) -> Rational {
        self.coeff(lambda)
            .as_constant()
            .expect("coefficient depends on N")
    }

    /// Largest partition degree among the terms (0 for the zero polynomial).
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Partition::degree).max().unwrap_or(0)
    }

    /// Largest single part occurring in any term.
    pub fn max_part(&self) -> u32 {
        self.terms
            .keys()
            .filter_map(|p| p.parts().first().copied())
            .max()
            .unwrap_or(0)
    }

    pub fn add_term(&mut self, lambda: Partition, c: NPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(lambda) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &NPoly) -> Self {
        Self::from_terms(self.terms.iter().map(|(l, v)| (l.clone(), v * c)), self.mode)
    }

    pub fn scale_rational(&self, c: &Rational) -> Self {
        Self::from_terms(
            self.terms.iter().map(|(l, v)| (l.clone(), v.scale(c))),
            self.mode,
        )
    }

    fn check_mode(&self, other: &TracePoly) -> Result<()> {
        if self.mode != other.mode {
            return Err(Error::ModeMismatch {
                left: self.mode,
                right: other.mode,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &TracePoly) -> Result<TracePoly> {
        self.check_mode(other)?;
        let mut out = self.clone();
        for (l, c) in &other.terms {
            out.add_term(l.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &TracePoly) -> Result<TracePoly> {
        self.try_add(&-other)
    }

    /// Bilinear product; on monomials `p_λ · p_μ = p_{sort(λ ⧺ μ)}`.
    pub fn try_mul(&self, other: &TracePoly) -> Result<TracePoly> {
        self.check_mode(other)?;
        let mut out = TracePoly::zero(self.mode);
        for (l1, c1) in &self.terms {
            for (l2, c2) in &other.terms {
                out.add_term(l1.concat(l2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, exp: u32) -> TracePoly {
        (0..exp).fold(TracePoly::one(self.mode), |acc, _| &acc * self)
    }

    /// Evaluates every coefficient at `N = n`.
    pub fn substitute_n(&self, n: u32) -> Result<TracePoly> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!("N must be at least 2, got {n}")));
        }
        match self.mode {
            Mode::Symbolic => {}
            m if m.numeric_n() == Some(n) => return Ok(self.clone()),
            m => {
                return Err(Error::ModeUnsupported {
                    mode: m,
                    reason: format!("cannot substitute N = {n} into a numeric polynomial"),
                })
            }
        }
        let value = int(n as i64);
        Ok(TracePoly::from_terms(
            self.terms
                .iter()
                .map(|(l, c)| (l.clone(), NPoly::constant(c.eval(&value)))),
            Mode::Fixed(n),
        ))
    }

    /// Rewrites every `p_m` through the relations valid on SO(3) or SO(4).
    /// Idempotent.
    pub fn reduce(&self, target: Mode) -> Result<TracePoly> {
        reduction::reduce(self, target)
    }

    /// True when every monomial is legal in reduced form for the mode.
    pub fn is_reduced(&self) -> bool {
        match self.mode {
            Mode::SO3 => self.terms.keys().all(Partition::is_power_of_p1),
            Mode::SO4 => self.terms.keys().all(Partition::is_p1_p2_monomial),
            _ => true,
        }
    }

    /// Evaluates with `p_m ↦ power_sum(m)` (for `m ≥ 1`) and `N ↦ n`.
    pub fn eval_with(&self, n: f64, mut power_sum: impl FnMut(u32) -> f64) -> f64 {
        self.terms
            .iter()
            .map(|(l, c)| {
                let mono: f64 = l.parts().iter().map(|&m| power_sum(m)).product();
                c.eval_f64(n) * mono
            })
            .sum()
    }

    /// Evaluates from a table `[p_0, p_1, p_2, …]` of power sums.
    pub fn eval_table(&self, power_sums: &[f64]) -> f64 {
        self.eval_with(power_sums[0], |m| power_sums[m as usize])
    }

    /// The constant term as an `NPoly`.
    pub fn constant_term(&self) -> NPoly {
        self.coeff(&Partition::empty())
    }

    /// Human-readable form with padded partitions (`p_{(2,1,0)}`, `p_0`).
    pub fn pretty(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut pieces: Vec<(bool, String)> = Vec::new();
        // highest degree first, flag order inside a degree, constants last
        let mut ordered: Vec<(&Partition, &NPoly)> =
            self.terms.iter().filter(|(l, _)| !l.is_empty()).collect();
        ordered.sort_by(|a, b| b.0.degree().cmp(&a.0.degree()).then_with(|| a.0.cmp(b.0)));
        for (lambda, c) in ordered {
            pieces.push(coefficient_piece(c, &self.monomial_label(lambda)));
        }
        let constant = self.constant_term();
        if !constant.is_zero() {
            let as_p0 = match self.mode.numeric_n() {
                None => constant.div_by_n(),
                Some(n) => constant
                    .as_constant()
                    .map(|c| NPoly::constant(c / int(n as i64))),
            };
            match as_p0 {
                Some(q) => pieces.push(coefficient_piece(&q, "p_0")),
                None => pieces.push(coefficient_piece(&constant, "")),
            }
        }
        let mut out = String::new();
        for (i, (neg, body)) in pieces.into_iter().enumerate() {
            match (i, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            out.push_str(&body);
        }
        out
    }

    fn monomial_label(&self, lambda: &Partition) -> String {
        match self.mode {
            Mode::SO3 | Mode::SO4 => p1p2_label(lambda),
            _ => {
                if lambda.parts() == [1] {
                    "p_1".into()
                } else {
                    format!("p_{{{}}}", lambda.padded())
                }
            }
        }
    }
}

/// `p_1^l p_2^m` style label for a reduced monomial.
pub fn p1p2_label(lambda: &Partition) -> String {
    if lambda.is_empty() {
        return "1".into();
    }
    let mut out = String::new();
    let mut part_counts: Vec<(u32, usize)> = Vec::new();
    for &p in lambda.parts().iter().rev() {
        match part_counts.last_mut() {
            Some((q, c)) if *q == p => *c += 1,
            _ => part_counts.push((p, 1)),
        }
    }
    for (p, c) in part_counts {
        match c {
            1 => out.push_str(&format!("p_{p}")),
            c if c < 10 => out.push_str(&format!("p_{p}^{c}")),
            c => out.push_str(&format!("p_{p}^{{{c}}}")),
        }
    }
    out
}

/// Sign flag plus magnitude text for `c · label`.
fn coefficient_piece(c: &NPoly, label: &str) -> (bool, String) {
    if let Some(r) = c.as_constant() {
        let neg = r.is_negative();
        let mag = r.abs();
        let body = if label.is_empty() {
            mag.to_string()
        } else if mag.is_one() {
            label.to_string()
        } else if mag.is_integer() {
            format!("{mag}{label}")
        } else {
            format!("({mag}){label}")
        };
        return (neg, body);
    }
    let neg = c.leading_coeff().is_negative();
    let shown = if neg { -c } else { c.clone() };
    let single_term = shown.terms().count() == 1;
    let body = if single_term {
        format!("{shown}{label}")
    } else {
        format!("({shown}){label}")
    };
    (neg, body)
}

impl fmt::Debug for TracePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.mode, self.pretty())
    }
}

impl fmt::Display for TracePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pretty())
    }
}

impl Add<&TracePoly> for &TracePoly {
    type Output = TracePoly;
    fn add(self, rhs: &TracePoly) -> TracePoly {
        self.try_add(rhs).expect("mode mismatch in TracePoly addition")
    }
}

impl Add for TracePoly {
    type Output = TracePoly;
    fn add(self, rhs: TracePoly) -> TracePoly {
        &self + &rhs
    }
}

impl Sub<&TracePoly> for &TracePoly {
    type Output = TracePoly;
    fn sub(self, rhs: &TracePoly) -> TracePoly {
        self.try_sub(rhs).expect("mode mismatch in TracePoly subtraction")
    }
}

impl Sub for TracePoly {
    type Output = TracePoly;
    fn sub(self, rhs: TracePoly) -> TracePoly {
        &self - &rhs
    }
}

impl Mul<&TracePoly> for &TracePoly {
    type Output = TracePoly;
    fn mul(self, rhs: &TracePoly) -> TracePoly {
        self.try_mul(rhs).expect("mode mismatch in TracePoly product")
    }
}

impl Mul for TracePoly {
    type Output = TracePoly;
    fn mul(self, rhs: TracePoly) -> TracePoly {
        &self * &rhs
    }
}

impl Neg for &TracePoly {
    type Output = TracePoly;
    fn neg(self) -> TracePoly {
        TracePoly {
            terms: self.terms.iter().map(|(l, c)| (l.clone(), -c)).collect(),
            mode: self.mode,
        }
    }
}

impl Neg for TracePoly {
    type Output = TracePoly;
    fn neg(self) -> TracePoly {
        -&self
    }
}
