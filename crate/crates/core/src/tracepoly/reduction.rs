//! Relations among the `p_m` on SO(3) and SO(4).
//!
//! On SO(3) the eigenvalues are `1, e^{±iα}`, so `p_m = 1 + 2T_m((p_1 - 1)/2)`
//! with `T_m` the Chebyshev polynomial of the first kind. On SO(4) the
//! Cayley–Hamilton identity `U^4 - p_1U^3 + ½(p_1² - p_2)U^2 - p_1U + I = 0`
//! gives the recurrence
//! `p_{s+1} = p_1p_s - ½(p_1² - p_2)p_{s-1} + p_1p_{s-2} - p_{s-3}` for `s ≥ 3`.

use num_traits::Zero;

use super::{int, rat, Mode, NPoly, Rational, TracePoly};
use crate::error::{Error, Result};
use crate::partitions::Partition;

/// The two ordered bases of the SO(3) flag space `V_{≤k}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum So3Basis {
    /// `{p_0, p_1, p_1^2, …, p_1^k}`.
    PowersOfP1,
    /// `{p_0, p_1, p_2, …, p_k}`.
    TracePowers,
}

/// Chebyshev polynomial of the first kind as a polynomial in `x`.
fn chebyshev_t(m: u32) -> NPoly {
    let x = NPoly::n();
    let mut prev = NPoly::one();
    if m == 0 {
        return prev;
    }
    let mut cur = x.clone();
    let two_x = x.scale(&int(2));
    for _ in 1..m {
        let next = &(&two_x * &cur) - &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// `p_m` on SO(3) as a univariate polynomial in `p_1`.
fn so3_pm_dense(m: u32) -> NPoly {
    let shift = NPoly::from_dense(&[rat(-1, 2), rat(1, 2)]); // (p_1 - 1)/2
    let t = chebyshev_t(m).compose(&shift);
    &NPoly::one() + &t.scale(&int(2))
}

fn p1_poly_to_trace(poly: &NPoly) -> TracePoly {
    TracePoly::from_rational_terms(
        poly.terms()
            .map(|(e, c)| (Partition::ones_twos(e, 0), c.clone())),
        Mode::SO3,
    )
}

fn trace_to_p1_poly(a: &TracePoly) -> NPoly {
    debug_assert!(a.mode() == Mode::SO3 && a.is_reduced());
    NPoly::from_coeffs(
        a.terms()
            .map(|(l, _)| (l.len() as u32, a.rational_coeff(l))),
    )
}

/// `p_m` on SO(3) as a polynomial in `p_1`: the expansion of
/// `1 + 2T_m((p_1 - 1)/2)`. `p_0` is the constant 3.
pub fn so3_pm_in_p1(m: u32) -> TracePoly {
    p1_poly_to_trace(&so3_pm_dense(m))
}

/// `[p_0, p_1, …, p_max]` reduced on SO(3).
pub fn so3_power_sums(max: u32) -> Vec<TracePoly> {
    (0..=max).map(so3_pm_in_p1).collect()
}

/// `[p_0, p_1, …, p_max]` reduced on SO(4), via the Cayley–Hamilton
/// recurrence seeded with `p_0 = 4` and the closed form of `p_3`.
pub fn so4_power_sums(max: u32) -> Vec<TracePoly> {
    let mode = Mode::SO4;
    let p1 = TracePoly::p1p2(1, 0, mode);
    let p2 = TracePoly::p1p2(0, 1, mode);
    let p1_sq = TracePoly::p1p2(2, 0, mode);
    let mut table = vec![TracePoly::constant(int(4), mode), p1.clone(), p2.clone()];
    let p3 = TracePoly::from_rational_terms(
        [
            (Partition::ones_twos(3, 0), rat(-1, 2)),
            (Partition::ones_twos(1, 1), rat(3, 2)),
            (Partition::ones_twos(1, 0), int(3)),
        ],
        mode,
    );
    table.push(p3);
    // ½(p_1² - p_2)
    let e2 = (&p1_sq - &p2).scale_rational(&rat(1, 2));
    for s in 3..max.max(3) {
        let s = s as usize;
        let next = &(&(&(&p1 * &table[s]) - &(&e2 * &table[s - 1])) + &(&p1 * &table[s - 2]))
            - &table[s - 3];
        table.push(next);
    }
    table.truncate(max as usize + 1);
    table
}

/// `p_m` on SO(4) as a polynomial in `p_1, p_2`.
pub fn so4_pm_in_p1p2(m: u32) -> TracePoly {
    so4_power_sums(m).swap_remove(m as usize)
}

pub(super) fn reduce(a: &TracePoly, target: Mode) -> Result<TracePoly> {
    let target_n = match target {
        Mode::SO3 => 3,
        Mode::SO4 => 4,
        other => {
            return Err(Error::ModeUnsupported {
                mode: other,
                reason: "reduction targets are SO(3) and SO(4) only".into(),
            })
        }
    };
    match a.mode() {
        Mode::Symbolic => {
            return Err(Error::ModeUnsupported {
                mode: Mode::Symbolic,
                reason: "substitute N before reducing".into(),
            })
        }
        m if m == target => {
            if a.is_reduced() {
                return Ok(a.clone());
            }
        }
        Mode::Fixed(n) if n == target_n => {}
        m => {
            return Err(Error::ModeMismatch {
                left: m,
                right: target,
            })
        }
    }
    let table = match target {
        Mode::SO3 => so3_power_sums(a.max_part()),
        _ => so4_power_sums(a.max_part()),
    };
    let mut out = TracePoly::zero(target);
    for (lambda, c) in a.terms() {
        let mono = lambda
            .parts()
            .iter()
            .fold(TracePoly::one(target), |acc, &m| &acc * &table[m as usize]);
        out = &out + &mono.scale(c);
    }
    debug_assert!(out.is_reduced());
    Ok(out)
}

/// Exact coordinates of `a` in one of the SO(3) bases of `V_{≤k}`.
///
/// A constant `c` contributes `c/3` on `p_0`.
pub fn so3_basis_change(a: &TracePoly, target: So3Basis, k: u32) -> Result<Vec<Rational>> {
    let reduced = a.reduce(Mode::SO3)?;
    let degree = reduced.degree();
    if degree > k {
        return Err(Error::DegreeExceeds { degree, k });
    }
    let mut poly = trace_to_p1_poly(&reduced);
    let mut coords = vec![Rational::zero(); k as usize + 1];
    match target {
        So3Basis::PowersOfP1 => {
            for j in 1..=k {
                coords[j as usize] = poly.coeff(j);
            }
        }
        So3Basis::TracePowers => {
            // p_j = p_1^j + lower terms, so peel off from the top
            for j in (1..=k).rev() {
                let c = poly.coeff(j);
                if c.is_zero() {
                    continue;
                }
                poly -= &so3_pm_dense(j).scale(&c);
                coords[j as usize] = c;
            }
        }
    }
    coords[0] = poly.coeff(0) / int(3);
    Ok(coords)
}

/// Inverse of [`so3_basis_change`]: the reduced SO(3) polynomial with the
/// given coordinates.
pub fn so3_from_coords(coords: &[Rational], basis: So3Basis) -> TracePoly {
    let mut poly = NPoly::zero();
    for (j, c) in coords.iter().enumerate() {
        let j = j as u32;
        let element = match (basis, j) {
            (_, 0) => NPoly::from_int(3),
            (So3Basis::PowersOfP1, j) => NPoly::monomial(j, int(1)),
            (So3Basis::TracePowers, j) => so3_pm_dense(j),
        };
        poly += &element.scale(c);
    }
    p1_poly_to_trace(&poly)
}
