//! Closed-form action of `Δ_{SO(N)}` on trace polynomials.
//!
//! Base formulas, all in symbolic `N`:
//! - `Δp_1 = -((N-1)/2) p_1`;
//! - for `m ≥ 2`, `Δp_m = (m(1+(-1)^m)/4) p_0 + m Σ_{i=0}^{⌊(m-1)/2⌋} p_{m-2i}
//!   - (m(N+1)/2) p_m - (m/2) Σ_{j=1}^{m-1} p_j p_{m-j}`;
//! - for `q ≥ 2`, `Δ(p_1^q) = -½((N-1)q p_1^q + q(q-1)(p_2 - N) p_1^{q-2})`;
//! - `⟨∇p_m, ∇p_{m'}⟩ = (mm'/2)(p_{|m-m'|} - p_{m+m'})`.
//!
//! A general monomial `p_λ = p_{λ'} p_1^q` (all parts of `λ'` at least 2) is
//! assembled from the product rule
//! `Δ(fg) = gΔf + fΔg + 2⟨∇f, ∇g⟩`.

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::partitions::Partition;
use crate::tracepoly::{int, rat, Mode, NPoly, TracePoly};

const SYM: Mode = Mode::Symbolic;

fn p(m: u32) -> TracePoly {
    TracePoly::p(m, SYM)
}

fn p_lambda(lambda: &Partition) -> TracePoly {
    TracePoly::p_lambda(lambda.clone(), SYM)
}

/// `Δ p_m` in symbolic `N`.
pub fn lap_pm(m: u32) -> TracePoly {
    match m {
        0 => TracePoly::zero(SYM),
        1 => p(1).scale(&NPoly::affine(rat(-1, 2), rat(1, 2))),
        _ => {
            let mi = m as i64;
            let mut out = TracePoly::zero(SYM);
            if m % 2 == 0 {
                // m(1 + (-1)^m)/4 = m/2
                out = &out + &p(0).scale_rational(&rat(mi, 2));
            }
            for i in 0..=((m - 1) / 2) {
                out = &out + &p(m - 2 * i).scale_rational(&int(mi));
            }
            out = &out + &p(m).scale(&NPoly::affine(rat(-mi, 2), rat(-mi, 2)));
            for j in 1..m {
                out = &out + &(&p(j) * &p(m - j)).scale_rational(&rat(-mi, 2));
            }
            out
        }
    }
}

/// `Δ(p_1^q)` in symbolic `N`.
pub fn lap_p1_pow(q: u32) -> TracePoly {
    match q {
        0 => TracePoly::zero(SYM),
        1 => lap_pm(1),
        _ => {
            let qi = q as i64;
            // -½(N-1)q p_1^q
            let lead = TracePoly::p1p2(q, 0, SYM).scale(&NPoly::affine(rat(-qi, 2), rat(qi, 2)));
            // -½q(q-1)(p_2 - N) p_1^{q-2}
            let p2_minus_n = &p(2) - &p(0);
            let tail = (&p2_minus_n * &TracePoly::p1p2(q - 2, 0, SYM))
                .scale_rational(&rat(-qi * (qi - 1), 2));
            &lead + &tail
        }
    }
}

/// `⟨∇_{SO(N)} p_m, ∇_{SO(N)} p_{m'}⟩ = (mm'/2)(p_{|m-m'|} - p_{m+m'})`.
pub fn grad_inner_pm(m: u32, m_prime: u32) -> TracePoly {
    let (hi, lo) = if m >= m_prime { (m, m_prime) } else { (m_prime, m) };
    if lo == 0 {
        return TracePoly::zero(SYM);
    }
    let c = rat(hi as i64 * lo as i64, 2);
    (&p(hi - lo) - &p(hi + lo)).scale_rational(&c)
}

/// `Δ p_λ` for a partition whose parts are all at least 2.
fn lap_large_parts(lambda: &Partition) -> TracePoly {
    let parts = lambda.parts();
    debug_assert!(parts.iter().all(|&m| m >= 2));
    if parts.is_empty() {
        return TracePoly::zero(SYM);
    }
    let k = lambda.degree() as i64;
    // -k(N+1)/2 p_λ
    let mut out = p_lambda(lambda).scale(&NPoly::affine(rat(-k, 2), rat(-k, 2)));
    for (i, &mi) in parts.iter().enumerate() {
        let rest = p_lambda(&lambda.without(i));
        let m = mi as i64;
        if mi % 2 == 0 {
            // N · m_i(1 + (-1)^{m_i})/4 = N m_i / 2
            out = &out + &rest.scale(&NPoly::monomial(1, rat(m, 2)));
        }
        let mut inner = TracePoly::zero(SYM);
        for l in 0..=((mi - 1) / 2) {
            inner = &inner + &p(mi - 2 * l);
        }
        for j in 1..mi {
            inner = &inner + &(&p(j) * &p(mi - j)).scale_rational(&rat(-1, 2));
        }
        out = &out + &(&rest * &inner).scale_rational(&int(m));
    }
    for i in 0..parts.len() {
        for j in (i + 1)..parts.len() {
            let (mi, mj) = (parts[i], parts[j]);
            let rest = p_lambda(&lambda.without_pair(i, j));
            let diff = &p(mi - mj) - &p(mi + mj);
            out = &out + &(&rest * &diff).scale_rational(&int(mi as i64 * mj as i64));
        }
    }
    out
}

/// `2⟨∇p_{λ'}, ∇p_1^q⟩ = q Σ_i m_i p_1^{q-1} p_{λ'∖m_i} (p_{m_i-1} - p_{m_i+1})`
/// for `λ'` with all parts at least 2.
fn cross_with_p1_power(large: &Partition, q: u32) -> TracePoly {
    let mut out = TracePoly::zero(SYM);
    if q == 0 {
        return out;
    }
    let p1_pow = TracePoly::p1p2(q - 1, 0, SYM);
    for (i, &mi) in large.parts().iter().enumerate() {
        let rest = p_lambda(&large.without(i));
        let diff = &p(mi - 1) - &p(mi + 1);
        let term = &(&rest * &p1_pow) * &diff;
        out = &out + &term.scale_rational(&int(q as i64 * mi as i64));
    }
    out
}

/// `Δ p_λ` in symbolic `N`, assembled by splitting `p_λ = p_{λ'} p_1^q`
/// where every part of `λ'` is at least 2.
pub fn lap_partition(lambda: &Partition) -> TracePoly {
    let r = lambda.num_large_parts();
    let large = Partition::new(lambda.parts()[..r].iter().copied());
    let q = (lambda.len() - r) as u32;
    if q == 0 {
        return lap_large_parts(&large);
    }
    if r == 0 {
        return lap_p1_pow(q);
    }
    let p1_pow = TracePoly::p1p2(q, 0, SYM);
    let large_poly = p_lambda(&large);
    let first = &lap_large_parts(&large) * &p1_pow;
    let second = &large_poly * &lap_p1_pow(q);
    &(&first + &second) + &cross_with_p1_power(&large, q)
}

/// `Δ p_λ` by the plain product rule over the factors `p_{m_i}`:
/// `Σ_i p_{λ∖i} Δp_{m_i} + 2 Σ_{i<j} p_{λ∖{i,j}} ⟨∇p_{m_i}, ∇p_{m_j}⟩`.
pub fn lap_partition_product_rule(lambda: &Partition) -> TracePoly {
    let parts = lambda.parts();
    let mut out = TracePoly::zero(SYM);
    for (i, &mi) in parts.iter().enumerate() {
        out = &out + &(&p_lambda(&lambda.without(i)) * &lap_pm(mi));
    }
    for i in 0..parts.len() {
        for j in (i + 1)..parts.len() {
            let rest = p_lambda(&lambda.without_pair(i, j));
            out = &out + &(&rest * &grad_inner_pm(parts[i], parts[j])).scale_rational(&int(2));
        }
    }
    out
}

/// `Δ a`, linear in `a`. Symbolic and fixed-`N` inputs get spanning-set
/// expressions; SO(3)/SO(4) inputs are reduced first and the result is
/// reduced again, so it lives in the group's basis.
pub fn lap(a: &TracePoly, mode: Mode) -> Result<TracePoly> {
    if a.mode() != mode {
        return Err(Error::ModeMismatch {
            left: a.mode(),
            right: mode,
        });
    }
    let input = if mode.is_reduced_group() {
        a.reduce(mode)?
    } else {
        a.clone()
    };
    let mut out = TracePoly::zero(SYM);
    for (lambda, c) in input.terms() {
        out = &out + &lap_partition(lambda).scale(c);
    }
    match mode {
        Mode::Symbolic => Ok(out),
        Mode::Fixed(n) => out.substitute_n(n),
        Mode::SO3 => out.substitute_n(3)?.reduce(Mode::SO3),
        Mode::SO4 => out.substitute_n(4)?.reduce(Mode::SO4),
    }
}

/// `Δ_{SO(3)}(p_1^j) = -(j(j+1)/2) p_1^j + j(j-1) p_1^{j-1} + (3/2) j(j-1) p_1^{j-2}`.
pub fn lap_so3_p1_pow(j: u32) -> TracePoly {
    let ji = j as i64;
    let mut out = TracePoly::p1p2(j, 0, Mode::SO3).scale_rational(&rat(-ji * (ji + 1), 2));
    if j >= 2 {
        out = &out + &TracePoly::p1p2(j - 1, 0, Mode::SO3).scale_rational(&int(ji * (ji - 1)));
        out = &out
            + &TracePoly::p1p2(j - 2, 0, Mode::SO3).scale_rational(&rat(3 * ji * (ji - 1), 2));
    }
    out
}

/// `Δ_{SO(3)} p_m = (m(m-1)/2) p_0 - m Σ_{j=1}^{m-1} p_j - (m(m+1)/2) p_m`,
/// unreduced (fixed `N = 3`), i.e. directly in the basis `p_0, …, p_m`.
pub fn lap_so3_pm(m: u32) -> TracePoly {
    let mode = Mode::Fixed(3);
    if m == 0 {
        return TracePoly::zero(mode);
    }
    let mi = m as i64;
    let mut out = TracePoly::p0(mode).scale_rational(&rat(mi * (mi - 1), 2));
    for j in 1..m {
        out = &out + &TracePoly::p(j, mode).scale_rational(&int(-mi));
    }
    &out + &TracePoly::p(m, mode).scale_rational(&rat(-mi * (mi + 1), 2))
}

/// `Δ_{SO(4)}(p_1^l p_2^m)` from the closed formula
/// `m(m-1) p_1^l p_2^{m-2} (p_1²-4)² + m p_1^l p_2^{m-1}((l-2m+1)p_1² - 4l + 4)
///  - (l(l-1)/2) p_1^{l-2} p_2^m (p_2 - 4) - ((6ml + 2m² + 3l + 4m)/2) p_1^l p_2^m`.
pub fn lap_so4_p1p2(l: u32, m: u32) -> TracePoly {
    let mode = Mode::SO4;
    let (li, mi) = (l as i64, m as i64);
    let four = TracePoly::constant(int(4), mode);
    let p1_sq = TracePoly::p1p2(2, 0, mode);
    let p2 = TracePoly::p1p2(0, 1, mode);
    let mut out = TracePoly::p1p2(l, m, mode)
        .scale_rational(&rat(-(6 * mi * li + 2 * mi * mi + 3 * li + 4 * mi), 2));
    if m >= 2 {
        let sq = &p1_sq - &four;
        let term = &TracePoly::p1p2(l, m - 2, mode) * &(&sq * &sq);
        out = &out + &term.scale_rational(&int(mi * (mi - 1)));
    }
    if m >= 1 {
        let inner = &p1_sq.scale_rational(&int(li - 2 * mi + 1))
            + &TracePoly::constant(int(4 - 4 * li), mode);
        let term = &TracePoly::p1p2(l, m - 1, mode) * &inner;
        out = &out + &term.scale_rational(&int(mi));
    }
    if l >= 2 {
        let term = &TracePoly::p1p2(l - 2, m, mode) * &(&p2 - &four);
        out = &out + &term.scale_rational(&rat(-li * (li - 1), 2));
    }
    out
}

/// `Δ a` on SO(3)/SO(4) through the group-specific closed formulas
/// (independent of [`lap`]'s route through the general formulas).
pub fn lap_fast(a: &TracePoly) -> Result<TracePoly> {
    let mode = a.mode();
    let reduced = a.reduce(mode)?;
    let mut out = TracePoly::zero(mode);
    for (lambda, c) in reduced.terms() {
        let twos = lambda.multiplicity(2) as u32;
        let ones = lambda.multiplicity(1) as u32;
        let image = match mode {
            Mode::SO3 => lap_so3_p1_pow(ones),
            _ => lap_so4_p1p2(ones, twos),
        };
        out = &out + &image.scale(c);
    }
    Ok(out)
}

/// A monomial together with its Laplacian.
#[derive(Clone, Debug, Serialize)]
pub struct LapResult {
    pub input: Partition,
    #[serde(skip)]
    pub output: TracePoly,
}

impl LapResult {
    pub fn compute(lambda: &Partition) -> Self {
        let output = lap_partition(lambda);
        debug_assert!(output.degree() <= lambda.degree());
        Self {
            input: lambda.clone(),
            output,
        }
    }
}

/// True when every coefficient of `a` is free of `N` and zero.
pub fn is_zero_exact(a: &TracePoly) -> bool {
    a.terms().all(|(_, c)| c.is_zero() || c.as_constant().map_or(false, |r| r.is_zero()))
}
