//! Univariate polynomials over the rationals.
//!
//! The main use is as the coefficient ring of symbolic-`N` trace polynomials,
//! where the indeterminate is the matrix size `N`. The same type doubles as a
//! plain polynomial in one variable (characteristic polynomials, Chebyshev
//! expansions in `p_1`).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Rational = num_rational::BigRational;

/// Shorthand for the rational `num / den`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Shorthand for an integer-valued rational.
pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Polynomial in one indeterminate with arbitrary-precision rational
/// coefficients. No zero coefficient is ever stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct NPoly {
    coeffs: BTreeMap<u32, Rational>,
}

impl NPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(0, c)
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(int(c))
    }

    /// The indeterminate itself.
    pub fn n() -> Self {
        Self::monomial(1, Rational::one())
    }

    /// `c · N^exp`.
    pub fn monomial(exp: u32, c: Rational) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(exp, c);
        }
        Self { coeffs }
    }

    /// `a·N + b`.
    pub fn affine(a: Rational, b: Rational) -> Self {
        Self::monomial(1, a) + Self::constant(b)
    }

    /// Builds from `(exponent, coefficient)` pairs, summing repeats.
    pub fn from_coeffs(pairs: impl IntoIterator<Item = (u32, Rational)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in pairs {
            p.add_term(e, c);
        }
        p
    }

    /// Builds `Σ c_i x^i` from a dense coefficient slice (constant first).
    pub fn from_dense(coeffs: &[Rational]) -> Self {
        Self::from_coeffs(coeffs.iter().cloned().enumerate().map(|(i, c)| (i as u32, c)))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn coeff(&self, exp: u32) -> Rational {
        self.coeffs.get(&exp).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading_coeff(&self) -> Rational {
        self.coeffs.values().next_back().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (u32, &Rational)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    /// Dense coefficients, constant first, up to the degree.
    pub fn to_dense(&self) -> Vec<Rational> {
        match self.degree() {
            None => Vec::new(),
            Some(d) => (0..=d).map(|e| self.coeff(e)).collect(),
        }
    }

    /// The value when the polynomial is a constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.degree() {
            None => Some(Rational::zero()),
            Some(0) => Some(self.coeff(0)),
            Some(_) => None,
        }
    }

    pub fn add_term(&mut self, exp: u32, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(exp).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&exp);
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    /// Exact evaluation.
    pub fn eval(&self, x: &Rational) -> Rational {
        let dense = self.to_dense();
        dense
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .map(|(e, c)| rational_to_f64(c) * x.powi(*e as i32))
            .sum()
    }

    /// `self(g(x))`.
    pub fn compose(&self, g: &NPoly) -> NPoly {
        let dense = self.to_dense();
        dense
            .iter()
            .rev()
            .fold(NPoly::zero(), |acc, c| &(&acc * g) + &NPoly::constant(c.clone()))
    }

    /// Quotient by the indeterminate when the constant term vanishes.
    pub fn div_by_n(&self) -> Option<NPoly> {
        if self.coeffs.contains_key(&0) {
            return None;
        }
        Some(Self {
            coeffs: self.coeffs.iter().map(|(e, c)| (e - 1, c.clone())).collect(),
        })
    }

    /// Division by the linear factor `x - root`; `None` if it does not divide.
    pub fn div_linear(&self, root: &Rational) -> Option<NPoly> {
        let dense = self.to_dense();
        if dense.is_empty() {
            return Some(NPoly::zero());
        }
        // synthetic division from the top coefficient down
        let mut quotient = vec![Rational::zero(); dense.len() - 1];
        let mut carry = Rational::zero();
        for i in (0..dense.len()).rev() {
            carry = &carry * root + &dense[i];
            if i > 0 {
                quotient[i - 1] = carry.clone();
            }
        }
        carry.is_zero().then(|| NPoly::from_dense(&quotient))
    }

    /// Formal derivative.
    pub fn derivative(&self) -> NPoly {
        NPoly::from_coeffs(
            self.coeffs
                .iter()
                .filter(|(e, _)| **e > 0)
                .map(|(e, c)| (e - 1, c * int(*e as i64))),
        )
    }

    /// Primitive integer polynomial proportional to `self` (positive leading
    /// coefficient), constant first.
    pub fn primitive_integer_coeffs(&self) -> Vec<BigInt> {
        let dense = self.to_dense();
        let lcm = dense
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut ints: Vec<BigInt> = dense.iter().map(|c| (c * &lcm).to_integer()).collect();
        let gcd = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if !gcd.is_zero() {
            for c in &mut ints {
                *c /= &gcd;
            }
        }
        if ints.last().map_or(false, |c| c.is_negative()) {
            for c in &mut ints {
                *c = -&*c;
            }
        }
        ints
    }

    /// Renders with the given variable name, highest power first.
    pub fn to_string_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.coeffs.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let var_part = match e {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{e}"),
            };
            if *e == 0 {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&var_part);
            } else if mag.is_integer() {
                out.push_str(&format!("{mag}{var_part}"));
            } else {
                out.push_str(&format!("({mag}){var_part}"));
            }
        }
        out
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        // huge numerators or denominators: scale down through the quotient
        let n = r.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

impl fmt::Debug for NPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_in("N"))
    }
}

impl fmt::Display for NPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_in("N"))
    }
}

impl From<Rational> for NPoly {
    fn from(c: Rational) -> Self {
        NPoly::constant(c)
    }
}

impl AddAssign<&NPoly> for NPoly {
    fn add_assign(&mut self, rhs: &NPoly) {
        for (e, c) in &rhs.coeffs {
            self.add_term(*e, c.clone());
        }
    }
}

impl SubAssign<&NPoly> for NPoly {
    fn sub_assign(&mut self, rhs: &NPoly) {
        for (e, c) in &rhs.coeffs {
            self.add_term(*e, -c.clone());
        }
    }
}

impl Add<&NPoly> for &NPoly {
    type Output = NPoly;
    fn add(self, rhs: &NPoly) -> NPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for NPoly {
    type Output = NPoly;
    fn add(mut self, rhs: NPoly) -> NPoly {
        self += &rhs;
        self
    }
}

impl Sub<&NPoly> for &NPoly {
    type Output = NPoly;
    fn sub(self, rhs: &NPoly) -> NPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for NPoly {
    type Output = NPoly;
    fn sub(mut self, rhs: NPoly) -> NPoly {
        self -= &rhs;
        self
    }
}

impl Mul<&NPoly> for &NPoly {
    type Output = NPoly;
    fn mul(self, rhs: &NPoly) -> NPoly {
        let mut out = NPoly::zero();
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &rhs.coeffs {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Mul for NPoly {
    type Output = NPoly;
    fn mul(self, rhs: NPoly) -> NPoly {
        &self * &rhs
    }
}

impl Neg for NPoly {
    type Output = NPoly;
    fn neg(self) -> NPoly {
        NPoly {
            coeffs: self.coeffs.into_iter().map(|(e, c)| (e, -c)).collect(),
        }
    }
}

impl Neg for &NPoly {
    type Output = NPoly;
    fn neg(self) -> NPoly {
        -self.clone()
    }
}
