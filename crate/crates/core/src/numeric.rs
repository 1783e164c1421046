//! Floating-point oracle: the ambient-space formulas for the Laplacians of the
//! sphere and of SO(N), evaluated on concrete matrices.
//!
//! Matrices are vectorized column by column, so `vec(U)[j·n + i] = u_ij`.
//! Hessians are `n² × n²` in that order. For `f` on `R^{n×n}`,
//!
//! `Δ_{SO(N)} f = ½ tr(Hess f) - ((N-1)/2) tr(Uᵀ ∇f) - ½ tr(Λ(U) Hess f)`,
//!
//! where block `(i, j)` of `Λ(U)` is `u_j u_iᵀ`. On the sphere of radius `R`,
//!
//! `Δ_S h = Δh - (1/R²) xᵀ (Hess h) x - ((N-1)/R²) ⟨x, ∇h⟩`.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::laplacian::lap_partition;
use crate::partitions::Partition;
use crate::tracepoly::TracePoly;

/// Default seed for every sampling routine; `TRACELAP_SEED` overrides it.
pub const DEFAULT_SEED: u64 = 20_221_015;
pub const SEED_ENV: &str = "TRACELAP_SEED";

/// Default relative tolerance for Laplacian cross-checks.
pub const LAPLACIAN_TOL: f64 = 1e-8;
/// Default tolerance for purely algebraic matrix identities.
pub const IDENTITY_TOL: f64 = 1e-12;

pub fn default_seed() -> u64 {
    std::env::var(SEED_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Seed(u64),
    Angles(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RotationSample {
    pub n: usize,
    pub u: DMatrix<f64>,
    pub provenance: Provenance,
}

const MAX_REDRAWS: usize = 16;

/// Haar-distributed element of SO(n), deterministic in `(n, seed)`.
pub fn random_son(n: usize, seed: u64) -> Result<RotationSample> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("SO(n) sampling needs n ≥ 2, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_REDRAWS {
        let g = DMatrix::<f64>::from_fn(n, n, |_, _| StandardNormal.sample(&mut rng));
        let qr = g.qr();
        let r = qr.r();
        if (0..n).any(|i| r[(i, i)].abs() < 1e-10) {
            continue;
        }
        let mut q = qr.q();
        for j in 0..n {
            if r[(j, j)] < 0.0 {
                q.column_mut(j).neg_mut();
            }
        }
        if q.determinant() < 0.0 {
            q.column_mut(n - 1).neg_mut();
        }
        return Ok(RotationSample {
            n,
            u: q,
            provenance: Provenance::Seed(seed),
        });
    }
    Err(Error::DegenerateSample(MAX_REDRAWS))
}

/// Block-diagonal rotation by `α` (n = 3) or by `α, β` (n = 4).
pub fn rotation_from_angles(n: usize, angles: &[f64]) -> Result<RotationSample> {
    let expected = match n {
        3 => 1,
        4 => 2,
        _ => return Err(Error::InvalidArgument(format!("canonical rotations exist for n = 3, 4, got {n}"))),
    };
    if angles.len() != expected {
        return Err(Error::InvalidArgument(format!("n = {n} needs {expected} angle(s), got {}", angles.len())));
    }
    let mut u = DMatrix::<f64>::identity(n, n);
    for (b, &a) in angles.iter().enumerate() {
        let (s, c) = a.sin_cos();
        let i = 2 * b;
        u[(i, i)] = c;
        u[(i, i + 1)] = -s;
        u[(i + 1, i)] = s;
        u[(i + 1, i + 1)] = c;
    }
    Ok(RotationSample {
        n,
        u,
        provenance: Provenance::Angles(angles.to_vec()),
    })
}

impl RotationSample {
    /// `max |UᵀU - I|` and `|det U - 1|`.
    pub fn orthogonality_defect(&self) -> (f64, f64) {
        let gram = self.u.transpose() * &self.u - DMatrix::<f64>::identity(self.n, self.n);
        (gram.amax(), (self.u.determinant() - 1.0).abs())
    }

    /// `p_0, …, p_max` at `U`, with `p_0 = n`.
    pub fn power_sums(&self, max: u32) -> Vec<f64> {
        power_sums(&self.u, max)
    }
}

pub fn power_sums(u: &DMatrix<f64>, max: u32) -> Vec<f64> {
    matrix_powers(u, max).iter().map(DMatrix::trace).collect()
}

fn matrix_powers(u: &DMatrix<f64>, max: u32) -> Vec<DMatrix<f64>> {
    let n = u.nrows();
    let mut out = vec![DMatrix::<f64>::identity(n, n)];
    for r in 1..=max as usize {
        let next = &out[r - 1] * u;
        out.push(next);
    }
    out
}

pub fn vec_of(a: &DMatrix<f64>) -> DVector<f64> {
    DVector::from_column_slice(a.as_slice())
}

/// The commutation matrix: block `(i, j)` is the unit matrix `J_{ji}`, so
/// `K vec(A) = vec(Aᵀ)`.
pub fn commutation_matrix(n: usize) -> DMatrix<f64> {
    let mut k = DMatrix::<f64>::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            k[(i * n + j, j * n + i)] = 1.0;
        }
    }
    k
}

/// `Λ(U)`: block `(i, j)` is `u_j u_iᵀ`.
pub fn lambda_matrix(u: &DMatrix<f64>) -> DMatrix<f64> {
    let n = u.nrows();
    let mut out = DMatrix::<f64>::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            let block = u.column(j) * u.column(i).transpose();
            out.view_mut((i * n, j * n), (n, n)).copy_from(&block);
        }
    }
    out
}

pub fn structure_matrices(u: &RotationSample) -> (DMatrix<f64>, DMatrix<f64>) {
    (commutation_matrix(u.n), lambda_matrix(&u.u))
}

/// Value, matrix-form Euclidean gradient and vectorized Hessian of a function
/// on `R^{n×n}` at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivativeBundle {
    pub value: f64,
    pub grad: DMatrix<f64>,
    pub hess: DMatrix<f64>,
}

impl DerivativeBundle {
    pub fn zero(n: usize) -> Self {
        Self {
            value: 0.0,
            grad: DMatrix::zeros(n, n),
            hess: DMatrix::zeros(n * n, n * n),
        }
    }

    pub fn constant(n: usize, c: f64) -> Self {
        Self {
            value: c,
            ..Self::zero(n)
        }
    }

    fn axpy(&mut self, c: f64, other: &DerivativeBundle) {
        self.value += c * other.value;
        self.grad += &other.grad * c;
        self.hess += &other.hess * c;
    }
}

/// `p_m`: gradient `m (Uᵀ)^{m-1}`, Hessian `m K Σ_{r=0}^{m-2} (Uᵀ)^r ⊗ U^{m-r-2}`.
fn pm_derivatives(m: u32, pows: &[DMatrix<f64>], tpows: &[DMatrix<f64>], k: &DMatrix<f64>) -> DerivativeBundle {
    let n = pows[0].nrows();
    let mf = m as f64;
    let grad = &tpows[m as usize - 1] * mf;
    let mut sum = DMatrix::<f64>::zeros(n * n, n * n);
    for r in 0..m.saturating_sub(1) as usize {
        sum += tpows[r].kronecker(&pows[m as usize - r - 2]);
    }
    DerivativeBundle {
        value: pows[m as usize].trace(),
        grad,
        hess: k * sum * mf,
    }
}

/// Derivatives of `p_λ = Π p_{m_i}` at an arbitrary square matrix.
pub fn euclid_derivatives(lambda: &Partition, u: &DMatrix<f64>) -> DerivativeBundle {
    let n = u.nrows();
    let parts = lambda.parts();
    if parts.is_empty() {
        return DerivativeBundle::constant(n, 1.0);
    }
    let max = parts[0];
    let pows = matrix_powers(u, max);
    let tpows: Vec<DMatrix<f64>> = pows.iter().map(DMatrix::transpose).collect();
    let k = commutation_matrix(n);
    let factors: Vec<DerivativeBundle> = parts.iter().map(|&m| pm_derivatives(m, &pows, &tpows, &k)).collect();
    let product_except = |skip: &[usize]| -> f64 {
        factors
            .iter()
            .enumerate()
            .filter(|(i, _)| !skip.contains(i))
            .map(|(_, f)| f.value)
            .product()
    };
    let mut out = DerivativeBundle::zero(n);
    out.value = product_except(&[]);
    for (i, f) in factors.iter().enumerate() {
        let rest = product_except(&[i]);
        out.grad += &f.grad * rest;
        out.hess += &f.hess * rest;
    }
    for i in 0..factors.len() {
        for j in 0..factors.len() {
            if i != j {
                let rest = product_except(&[i, j]);
                let outer = vec_of(&factors[i].grad) * vec_of(&factors[j].grad).transpose();
                out.hess += outer * rest;
            }
        }
    }
    out
}

/// Derivatives of a trace polynomial, coefficients evaluated at `N = n`.
pub fn poly_derivatives(a: &TracePoly, u: &DMatrix<f64>) -> DerivativeBundle {
    let n = u.nrows();
    let mut out = DerivativeBundle::zero(n);
    for (lambda, c) in a.terms() {
        out.axpy(c.eval_f64(n as f64), &euclid_derivatives(lambda, u));
    }
    out
}

/// `Δ_{SO(N)} f` at `U` from the Euclidean derivatives of a prolongation.
pub fn lap_from_bundle(f: &DerivativeBundle, u: &DMatrix<f64>) -> f64 {
    let n = u.nrows();
    let lam = lambda_matrix(u);
    let tr_lambda_hess = lam.component_mul(&f.hess.transpose()).sum();
    0.5 * f.hess.trace() - 0.5 * (n as f64 - 1.0) * (u.transpose() * &f.grad).trace() - 0.5 * tr_lambda_hess
}

pub fn lap_numeric(lambda: &Partition, u: &RotationSample) -> f64 {
    lap_from_bundle(&euclid_derivatives(lambda, &u.u), &u.u)
}

pub fn lap_numeric_poly(a: &TracePoly, u: &RotationSample) -> f64 {
    lap_from_bundle(&poly_derivatives(a, &u.u), &u.u)
}

/// Tangential gradient `½(∇h - U (∇h)ᵀ U)` on SO(N).
pub fn tangential_gradient(grad: &DMatrix<f64>, u: &DMatrix<f64>) -> DMatrix<f64> {
    (grad - u * grad.transpose() * u) * 0.5
}

/// Point data of a function on `R^N` for the sphere formula.
#[derive(Clone, Debug, PartialEq)]
pub struct PointDerivatives {
    pub value: f64,
    pub grad: DVector<f64>,
    pub hess: DMatrix<f64>,
}

/// `Δ_{S_R} h` at `x` from the Euclidean derivatives of a prolongation.
pub fn sphere_lap_numeric(h: &PointDerivatives, x: &DVector<f64>, radius: f64) -> Result<f64> {
    let norm = x.norm();
    if (norm - radius).abs() > 1e-10 {
        return Err(Error::OffSphere { norm, radius });
    }
    let n = x.len() as f64;
    let r2 = radius * radius;
    let xhx = (x.transpose() * &h.hess * x)[(0, 0)];
    Ok(h.hess.trace() - xhx / r2 - (n - 1.0) / r2 * x.dot(&h.grad))
}

/// `C_k^{(α)}(x)` with its first two derivatives, by the three-term recurrence
/// `k C_k = 2(k+α-1) x C_{k-1} - (k+2α-2) C_{k-2}` and its derivatives.
pub fn gegenbauer(k: u32, alpha: f64, x: f64) -> (f64, f64, f64) {
    let mut prev = (1.0, 0.0, 0.0);
    if k == 0 {
        return prev;
    }
    let mut cur = (2.0 * alpha * x, 2.0 * alpha, 0.0);
    for j in 2..=k {
        let jf = j as f64;
        let a = 2.0 * (jf + alpha - 1.0);
        let b = jf + 2.0 * alpha - 2.0;
        let next = (
            (a * x * cur.0 - b * prev.0) / jf,
            (a * (cur.0 + x * cur.1) - b * prev.1) / jf,
            (a * (2.0 * cur.1 + x * cur.2) - b * prev.2) / jf,
        );
        prev = cur;
        cur = next;
    }
    cur
}

/// Derivatives of `U ↦ C_k^{((n-2)/2)}(u_ij)`.
pub fn gegenbauer_entry_derivatives(k: u32, i: usize, j: usize, u: &DMatrix<f64>) -> DerivativeBundle {
    let n = u.nrows();
    let alpha = (n as f64 - 2.0) / 2.0;
    let (q, dq, ddq) = gegenbauer(k, alpha, u[(i, j)]);
    let mut out = DerivativeBundle::constant(n, q);
    out.grad[(i, j)] = dq;
    let v = j * n + i;
    out.hess[(v, v)] = ddq;
    out
}

/// Outcome of a sampled cross-check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub target: String,
    pub n: usize,
    pub params: serde_json::Value,
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    pub max_abs_err: f64,
    pub max_rel_err: f64,
    pub pass: bool,
}

/// `|a - b| / max(|a|, |b|, 1)`.
pub fn relative_error(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

/// Seed of sample `i` in a run seeded with `seed`.
pub fn sample_seed(seed: u64, i: usize) -> u64 {
    // SplitMix64 finalizer over (seed, i)
    let mut z = seed ^ (i as u64).wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Runs `check` on `samples` Haar rotations in parallel; each returns
/// `(computed, expected)` and the report keeps the worst errors.
fn sampled_report(
    target: &str,
    n: usize,
    params: serde_json::Value,
    samples: usize,
    seed: u64,
    tol: f64,
    check: impl Fn(&RotationSample) -> (f64, f64) + Sync,
) -> Result<VerifyReport> {
    let errors: Vec<(f64, f64)> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let u = random_son(n, sample_seed(seed, i))?;
            let (got, want) = check(&u);
            Ok(((got - want).abs(), relative_error(got, want)))
        })
        .collect::<Result<_>>()?;
    let max_abs_err = errors.iter().map(|e| e.0).fold(0.0, f64::max);
    let max_rel_err = errors.iter().map(|e| e.1).fold(0.0, f64::max);
    let finite = errors.iter().all(|e| e.0.is_finite());
    Ok(VerifyReport {
        target: target.into(),
        n,
        params,
        samples,
        seed,
        tol,
        max_abs_err,
        max_rel_err,
        pass: finite && max_rel_err <= tol,
    })
}

/// Compares Eq.-level numerics against the symbolic `Δ p_λ` at `N = n`.
pub fn verify_partition(n: usize, lambda: &Partition, samples: usize, seed: u64, tol: f64) -> Result<VerifyReport> {
    let symbolic = lap_partition(lambda).substitute_n(n as u32)?;
    let degree = lambda.degree().max(symbolic.degree());
    sampled_report(
        "laplacian",
        n,
        serde_json::json!({ "partition": lambda.parts() }),
        samples,
        seed,
        tol,
        |u| {
            let expected = symbolic.eval_table(&u.power_sums(degree));
            (lap_numeric(lambda, u), expected)
        },
    )
}

/// Checks `Δ C_k(u_ij) = -(k(k+n-2)/2) C_k(u_ij)` on Haar samples.
pub fn verify_gegenbauer(
    n: usize,
    k: u32,
    i: usize,
    j: usize,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<VerifyReport> {
    if n < 3 || i == 0 || j == 0 || i > n || j > n {
        return Err(Error::InvalidArgument(format!(
            "need n ≥ 3 and 1 ≤ i, j ≤ n, got n = {n}, i = {i}, j = {j}"
        )));
    }
    let eigenvalue = -((k * (k + n as u32 - 2)) as f64) / 2.0;
    sampled_report(
        "gegenbauer",
        n,
        serde_json::json!({ "k": k, "i": i, "j": j, "eigenvalue": eigenvalue }),
        samples,
        seed,
        tol,
        |u| {
            let f = gegenbauer_entry_derivatives(k, i - 1, j - 1, &u.u);
            (lap_from_bundle(&f, &u.u), eigenvalue * f.value)
        },
    )
}

/// A fixed cubic on `R^n` (n ≥ 3) with its derivatives:
/// `h = x_1 x_2 + ½ x_1² x_3 - 0.3 x_2 + 0.7 x_3²`.
pub fn sample_cubic(x: &DVector<f64>) -> PointDerivatives {
    let n = x.len();
    let (a, b, c) = (x[0], x[1], x[2]);
    let mut grad = DVector::zeros(n);
    grad[0] = b + a * c;
    grad[1] = a - 0.3;
    grad[2] = 0.5 * a * a + 1.4 * c;
    let mut hess = DMatrix::zeros(n, n);
    hess[(0, 1)] = 1.0;
    hess[(1, 0)] = 1.0;
    hess[(0, 0)] = c;
    hess[(0, 2)] = a;
    hess[(2, 0)] = a;
    hess[(2, 2)] = 1.4;
    PointDerivatives {
        value: a * b + 0.5 * a * a * c - 0.3 * b + 0.7 * c * c,
        grad,
        hess,
    }
}

/// `f(U) = h(√2 u_N)`: derivatives in `U` from those of `h`.
pub fn last_column_derivatives(h: &PointDerivatives, u: &DMatrix<f64>) -> DerivativeBundle {
    let n = u.nrows();
    let s = std::f64::consts::SQRT_2;
    let mut out = DerivativeBundle::constant(n, h.value);
    let off = (n - 1) * n;
    for a in 0..n {
        out.grad[(a, n - 1)] = s * h.grad[a];
        for b in 0..n {
            out.hess[(off + a, off + b)] = 2.0 * h.hess[(a, b)];
        }
    }
    out
}

fn frobenius(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.component_mul(b).sum()
}

/// The matrix-calculus identities behind the oracle, checked on Haar samples:
/// `tr(K(A⊗B)) = tr(AB)`, `ΛK = Uᵀ⊗U`, `KΛ = U⊗Uᵀ`, the tangential gradients
/// of `p_m` and `p_1^q`, their inner products, and the sphere/group agreement
/// for `h(√2 u_N)`.
pub fn verify_identities(n: usize, max_m: u32, samples: usize, seed: u64) -> Result<Vec<VerifyReport>> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("identity suite needs n ≥ 3, got {n}")));
    }
    let mut out = Vec::new();
    let params = serde_json::json!({ "max_m": max_m });
    out.push(sampled_report("commutation_trace", n, params.clone(), samples, seed, IDENTITY_TOL, |u| {
        // A and B from the sample, deliberately not orthogonal
        let a = &u.u + DMatrix::<f64>::from_fn(n, n, |i, j| ((i + 2 * j) as f64).sin());
        let b = u.u.transpose() * 2.0 - DMatrix::<f64>::from_fn(n, n, |i, j| ((3 * i + j) as f64).cos());
        let k = commutation_matrix(n);
        ((k * a.kronecker(&b)).trace(), (&a * &b).trace())
    })?);
    out.push(sampled_report("lambda_k", n, params.clone(), samples, seed, IDENTITY_TOL, |u| {
        let (k, lam) = structure_matrices(u);
        let ut = u.u.transpose();
        let e1 = (&lam * &k - ut.kronecker(&u.u)).amax();
        let e2 = (&k * &lam - u.u.kronecker(&ut)).amax();
        (e1.max(e2), 0.0)
    })?);
    out.push(sampled_report("tangential_gradient", n, params.clone(), samples, seed, 1e-10, |u| {
        let id = DMatrix::<f64>::identity(n, n);
        let ps = u.power_sums(2 * max_m + 1);
        let pows = matrix_powers(&u.u, max_m + 1);
        let mut worst: f64 = 0.0;
        for m in 1..=max_m {
            let g = euclid_derivatives(&Partition::single(m), &u.u).grad;
            let want = (pows[m as usize - 1].transpose() - &pows[m as usize + 1]) * (m as f64 / 2.0);
            worst = worst.max((tangential_gradient(&g, &u.u) - want).amax());
            let q = m;
            let gq = euclid_derivatives(&Partition::ones_twos(q, 0), &u.u).grad;
            let want_q = (&id - &pows[2]) * (q as f64 / 2.0 * ps[1].powi(q as i32 - 1));
            worst = worst.max(relative_error_matrix(&tangential_gradient(&gq, &u.u), &want_q));
        }
        (worst, 0.0)
    })?);
    out.push(sampled_report("gradient_inner_product", n, params.clone(), samples, seed, 1e-10, |u| {
        let ps = u.power_sums(2 * max_m);
        let mut worst: f64 = 0.0;
        for m in 1..=max_m {
            for mp in 1..=max_m {
                let gm = tangential_gradient(&euclid_derivatives(&Partition::single(m), &u.u).grad, &u.u);
                let gmp = tangential_gradient(&euclid_derivatives(&Partition::single(mp), &u.u).grad, &u.u);
                let got = 2.0 * frobenius(&gm, &gmp);
                let want = (m * mp) as f64 * (ps[m.abs_diff(mp) as usize] - ps[(m + mp) as usize]);
                worst = worst.max(relative_error(got, want));
            }
        }
        (worst, 0.0)
    })?);
    out.push(sampled_report("sphere_vs_group", n, serde_json::json!({ "h": "x1*x2 + x1^2*x3/2 - 0.3*x2 + 0.7*x3^2" }), samples, seed, 1e-9, |u| {
        let x = u.u.column(n - 1) * std::f64::consts::SQRT_2;
        let h = sample_cubic(&x);
        let f = last_column_derivatives(&h, &u.u);
        let sphere = sphere_lap_numeric(&h, &x, std::f64::consts::SQRT_2).expect("column of a rotation");
        (lap_from_bundle(&f, &u.u), sphere)
    })?);
    Ok(out)
}

fn relative_error_matrix(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).amax() / a.amax().max(b.amax()).max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tracepoly::Mode;
    use std::f64::consts::PI;

    #[test]
    fn samples_are_rotations() {
        for n in 2..=8 {
            for seed in 0..5 {
                let u = random_son(n, seed).unwrap();
                let (orth, det) = u.orthogonality_defect();
                assert!(orth <= 1e-12 && det <= 1e-12, "n = {n}: {orth} {det}");
            }
        }
        assert_eq!(random_son(4, 9).unwrap(), random_son(4, 9).unwrap());
        assert!(random_son(1, 0).is_err());
        let planar = random_son(2, 3).unwrap();
        let p1 = planar.power_sums(1)[1];
        let theta = planar.u[(1, 0)].atan2(planar.u[(0, 0)]);
        assert!((p1 - 2.0 * theta.cos()).abs() < 1e-12);
    }

    #[test]
    fn haar_mean_of_trace() {
        let total: f64 = (0..10_000).map(|i| random_son(3, sample_seed(1, i)).unwrap().power_sums(1)[1]).sum();
        assert!((total / 10_000.0).abs() < 0.05);
    }

    #[test]
    fn canonical_rotations() {
        let id = rotation_from_angles(3, &[0.0]).unwrap();
        assert!((id.power_sums(1)[1] - 3.0).abs() < 1e-15);
        let r = rotation_from_angles(4, &[PI / 2.0, PI]).unwrap();
        let ps = r.power_sums(2);
        assert!((ps[1] + 2.0).abs() < 1e-12);
        assert!(ps[2].abs() < 1e-12);
        let r = rotation_from_angles(3, &[PI]).unwrap();
        let ps = r.power_sums(3);
        assert!((ps[1] + 1.0).abs() < 1e-12 && (ps[3] + 1.0).abs() < 1e-12);
        assert!(rotation_from_angles(4, &[1.0]).is_err());
    }

    #[test]
    fn structure_at_identity() {
        let id = rotation_from_angles(3, &[0.0]).unwrap();
        let (k, lam) = structure_matrices(&id);
        assert_eq!(k, lam);
        let a = DMatrix::<f64>::from_fn(3, 3, |i, j| (i * 3 + j) as f64);
        assert_eq!(&k * vec_of(&a), vec_of(&a.transpose()));
    }

    #[test]
    fn simple_bundles() {
        let u = random_son(4, 5).unwrap();
        let p1 = euclid_derivatives(&Partition::single(1), &u.u);
        assert_eq!(p1.grad, DMatrix::identity(4, 4));
        assert_eq!(p1.hess.amax(), 0.0);
        let id = DMatrix::<f64>::identity(3, 3);
        let p2 = euclid_derivatives(&Partition::single(2), &id);
        assert_eq!(p2.hess, commutation_matrix(3) * 2.0);
        let p11 = euclid_derivatives(&Partition::ones_twos(2, 0), &u.u);
        let v = vec_of(&DMatrix::identity(4, 4));
        assert!((p11.hess - (&v * v.transpose()) * 2.0).amax() < 1e-15);
    }

    #[test]
    fn hessian_matches_finite_differences() {
        let step = 1e-5;
        for n in 2..=6 {
            // a generic matrix, not a rotation: the formulas are ambient
            let u = random_son(n, 40 + n as u64).unwrap().u + DMatrix::from_fn(n, n, |i, j| 0.1 * ((i + j) as f64).cos());
            for lambda in crate::partitions::enumerate_upto(4) {
                let f = euclid_derivatives(&lambda, &u);
                let scale = f.hess.amax().max(1.0);
                assert!((&f.hess - f.hess.transpose()).amax() <= 1e-10 * scale);
                for c in 0..n * n {
                    let mut plus = u.clone();
                    let mut minus = u.clone();
                    plus.as_mut_slice()[c] += step;
                    minus.as_mut_slice()[c] -= step;
                    let gp = euclid_derivatives(&lambda, &plus);
                    let gm = euclid_derivatives(&lambda, &minus);
                    let fd_col = (vec_of(&gp.grad) - vec_of(&gm.grad)) / (2.0 * step);
                    let fd_val = (gp.value - gm.value) / (2.0 * step);
                    assert!((fd_col - f.hess.column(c)).amax() <= 1e-6 * scale, "λ = {lambda:?}, n = {n}");
                    assert!((fd_val - f.grad.as_slice()[c]).abs() <= 1e-6 * scale);
                }
            }
        }
    }

    #[test]
    fn laplacian_examples() {
        let u = random_son(5, 11).unwrap();
        let p1 = u.power_sums(1)[1];
        assert!((lap_numeric(&Partition::single(1), &u) + 2.0 * p1).abs() < 1e-9);
        assert_eq!(lap_numeric(&Partition::empty(), &u), 0.0);
        let u4 = random_son(4, 12).unwrap();
        let lambda: Partition = "2,1".parse().unwrap();
        let symbolic = lap_partition(&lambda).substitute_n(4).unwrap();
        let want = symbolic.eval_table(&u4.power_sums(3));
        assert!(relative_error(lap_numeric(&lambda, &u4), want) <= 1e-8);
        let reduced = TracePoly::p1p2(2, 1, Mode::SO4);
        let lap_reduced = crate::laplacian::lap(&reduced, Mode::SO4).unwrap();
        assert!(relative_error(lap_numeric_poly(&reduced, &u4), lap_reduced.eval_table(&u4.power_sums(4))) <= 1e-8);
    }

    #[test]
    fn sphere_formula() {
        for n in 3..=6 {
            let u = random_son(n, 70 + n as u64).unwrap();
            let x = u.u.column(0).into_owned();
            // h = x_1 x_2, harmonic of degree 2
            let mut grad = DVector::zeros(n);
            grad[0] = x[1];
            grad[1] = x[0];
            let mut hess = DMatrix::zeros(n, n);
            hess[(0, 1)] = 1.0;
            hess[(1, 0)] = 1.0;
            let h = PointDerivatives { value: x[0] * x[1], grad, hess };
            let got = sphere_lap_numeric(&h, &x, 1.0).unwrap();
            assert!((got + 2.0 * n as f64 * h.value).abs() < 1e-10);
        }
        let x = DVector::from_vec(vec![0.0, 0.6, 0.8]);
        let mut grad = DVector::zeros(3);
        grad[0] = 1.0;
        let h = PointDerivatives { value: 0.0, grad, hess: DMatrix::zeros(3, 3) };
        assert!(sphere_lap_numeric(&h, &x, 1.0).unwrap().abs() < 1e-15);
        let c = PointDerivatives { value: 2.0, grad: DVector::zeros(3), hess: DMatrix::zeros(3, 3) };
        assert_eq!(sphere_lap_numeric(&c, &x, 1.0).unwrap(), 0.0);
        assert!(matches!(sphere_lap_numeric(&c, &(x * 2.0), 1.0), Err(Error::OffSphere { .. })));
    }

    #[test]
    fn gegenbauer_values_and_ode() {
        assert_eq!(gegenbauer(0, 0.5, 0.3), (1.0, 0.0, 0.0));
        assert!((gegenbauer(1, 0.5, 0.3).0 - 0.3).abs() < 1e-15);
        assert!((gegenbauer(2, 0.5, 0.3).0 - (3.0 * 0.09 - 1.0) / 2.0).abs() < 1e-15);
        for n in 3..=8u32 {
            let alpha = (n as f64 - 2.0) / 2.0;
            for k in 0..=10u32 {
                for &x in &[-0.9, -0.3, 0.0, 0.4, 0.95] {
                    let (q, dq, ddq) = gegenbauer(k, alpha, x);
                    let res = (1.0 - x * x) * ddq - (n as f64 - 1.0) * x * dq + (k * (k + n - 2)) as f64 * q;
                    // scale by the largest term of the equation
                    let scale = [(1.0 - x * x) * ddq, (n as f64 - 1.0) * x * dq, (k * (k + n - 2)) as f64 * q]
                        .iter()
                        .fold(1.0f64, |m, t| m.max(t.abs()));
                    assert!(res.abs() <= 1e-9 * scale, "n = {n}, k = {k}: {res}");
                }
            }
        }
    }

    #[test]
    fn verify_examples() {
        let r = verify_partition(3, &Partition::single(2), 50, 1, LAPLACIAN_TOL).unwrap();
        assert!(r.pass, "{r:?}");
        let r = verify_partition(6, &"3,2".parse().unwrap(), 50, 2, LAPLACIAN_TOL).unwrap();
        assert!(r.pass, "{r:?}");
        let r = verify_partition(4, &Partition::empty(), 5, 3, LAPLACIAN_TOL).unwrap();
        assert!(r.pass && r.max_abs_err == 0.0);
        let r = verify_gegenbauer(3, 2, 1, 3, 20, 4, LAPLACIAN_TOL).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(verify_gegenbauer(5, 1, 2, 4, 20, 4, LAPLACIAN_TOL).unwrap().pass);
        assert!(verify_gegenbauer(4, 0, 1, 1, 5, 4, LAPLACIAN_TOL).unwrap().pass);
        assert!(verify_gegenbauer(2, 1, 1, 1, 5, 4, LAPLACIAN_TOL).is_err());
    }

    #[test]
    fn identities_hold() {
        for n in 3..=6 {
            for r in verify_identities(n, 5, 10, 8).unwrap() {
                assert!(r.pass, "{r:?}");
            }
        }
    }

    #[test]
    fn reports_do_not_depend_on_thread_count() {
        let lambda: Partition = "2,1,1".parse().unwrap();
        let a = verify_partition(5, &lambda, 16, 9, LAPLACIAN_TOL).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| verify_partition(5, &lambda, 16, 9, LAPLACIAN_TOL).unwrap());
        assert_eq!(a, b);
    }
}
