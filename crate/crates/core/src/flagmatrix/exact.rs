//! Dense linear algebra over `BigRational` for the small diagonal blocks.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::tracepoly::{NPoly, Rational};

/// Row-major dense rational matrix.
pub type RMatrix = Vec<Vec<Rational>>;

pub fn zeros(rows: usize, cols: usize) -> RMatrix {
    vec![vec![Rational::zero(); cols]; rows]
}

pub fn mat_vec(m: &RMatrix, v: &[Rational]) -> Vec<Rational> {
    m.iter()
        .map(|row| row.iter().zip(v).fold(Rational::zero(), |acc, (a, b)| acc + a * b))
        .collect()
}

/// `M - λI`.
pub fn shifted(m: &RMatrix, lambda: &Rational) -> RMatrix {
    let mut out = m.clone();
    for (i, row) in out.iter_mut().enumerate() {
        row[i] -= lambda;
    }
    out
}

/// Characteristic polynomial `det(xI - A)` by Berkowitz' division-free
/// recursion on leading principal submatrices.
pub fn charpoly(a: &RMatrix) -> NPoly {
    let n = a.len();
    if n == 0 {
        return NPoly::one();
    }
    // c holds coefficients from x^r down to x^0
    let mut c = vec![Rational::one(), -a[0][0].clone()];
    for r in 1..n {
        let s: Vec<Rational> = (0..r).map(|i| a[i][r].clone()).collect();
        let mut col = vec![Rational::one(), -a[r][r].clone()];
        // -R M^i S for i = 0..r-1
        let mut ms = s;
        for _ in 0..r {
            let rs = (0..r).fold(Rational::zero(), |acc, j| acc + &a[r][j] * &ms[j]);
            col.push(-rs);
            ms = (0..r)
                .map(|i| (0..r).fold(Rational::zero(), |acc, j| acc + &a[i][j] * &ms[j]))
                .collect();
        }
        // lower-triangular Toeplitz (r+2)×(r+1) times c
        let next: Vec<Rational> = (0..r + 2)
            .map(|i| {
                (0..=r.min(i)).fold(Rational::zero(), |acc, j| {
                    if i - j < col.len() {
                        acc + &col[i - j] * &c[j]
                    } else {
                        acc
                    }
                })
            })
            .collect();
        c = next;
    }
    let dense: Vec<Rational> = c.into_iter().rev().collect();
    NPoly::from_dense(&dense)
}

/// Reduced row echelon form in place; returns pivot columns.
fn rref(m: &mut RMatrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let delta = &f * &m[r][j];
                    m[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Exact basis of `ker m`, each vector scaled so its first nonzero entry is 1.
pub fn nullspace(m: &RMatrix) -> Vec<Vec<Rational>> {
    let cols = m.first().map_or(0, Vec::len);
    let mut work = m.clone();
    let pivots = rref(&mut work);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rational::zero(); cols];
        v[free] = Rational::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -work[row][free].clone();
        }
        basis.push(normalize_first_nonzero(v));
    }
    basis
}

pub fn normalize_first_nonzero(mut v: Vec<Rational>) -> Vec<Rational> {
    if let Some(lead) = v.iter().find(|x| !x.is_zero()).cloned() {
        for x in v.iter_mut() {
            *x /= &lead;
        }
    }
    v
}

pub fn rank(m: &RMatrix) -> usize {
    let mut work = m.clone();
    rref(&mut work).len()
}

/// Strips every root in `candidates` (with multiplicity) from `poly`,
/// returning the roots found and the cofactor left over.
pub fn strip_roots(
    mut poly: NPoly,
    candidates: impl IntoIterator<Item = Rational>,
) -> (Vec<(Rational, usize)>, NPoly) {
    let mut found = Vec::new();
    for c in candidates {
        let mut mult = 0;
        while poly.degree().unwrap_or(0) > 0 {
            match poly.div_linear(&c) {
                Some(q) => {
                    poly = q;
                    mult += 1;
                }
                None => break,
            }
        }
        if mult > 0 {
            found.push((c, mult));
        }
    }
    (found, poly)
}

/// Largest integer whose divisors are enumerated by trial division.
const DIVISOR_LIMIT: u64 = 1 << 40;

fn positive_divisors(n: &BigInt) -> Option<Vec<u64>> {
    let n = n.abs().to_u64().filter(|&n| n <= DIVISOR_LIMIT)?;
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Some(small)
}

/// Candidate rational roots `±p/q` with `p | a_0` and `q | a_n` for the
/// primitive integer form of `poly`; zero is included when `a_0 = 0`.
/// `None` when the coefficients are too large to factor by trial division.
pub fn rational_root_candidates(poly: &NPoly) -> Option<Vec<Rational>> {
    let ints = poly.primitive_integer_coeffs();
    let (Some(lead), Some(lowest)) = (ints.last(), ints.iter().find(|c| !c.is_zero())) else {
        return Some(Vec::new());
    };
    let mut out = Vec::new();
    if ints[0].is_zero() {
        out.push(Rational::zero());
    }
    let ps = positive_divisors(lowest)?;
    let qs = positive_divisors(lead)?;
    for p in &ps {
        for q in &qs {
            if BigInt::from(*p).gcd(&BigInt::from(*q)).is_one() {
                let r = Rational::new(BigInt::from(*p), BigInt::from(*q));
                out.push(-r.clone());
                out.push(r);
            }
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tracepoly::{int, rat};

    fn m(rows: &[&[i64]]) -> RMatrix {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    /// Laplace expansion along the first row, for small matrices.
    fn det(a: &RMatrix) -> Rational {
        if a.is_empty() {
            return Rational::one();
        }
        let n = a.len();
        let mut total = Rational::zero();
        for j in 0..n {
            let minor: RMatrix = a[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect())
                .collect();
            let term = &a[0][j] * det(&minor);
            total = if j % 2 == 0 { total + term } else { total - term };
        }
        total
    }

    #[test]
    fn charpoly_matches_determinant() {
        let a = m(&[&[2, -1, 0, 3], &[1, 0, 4, -2], &[5, 1, -3, 0], &[0, 2, 1, 1]]);
        let p = charpoly(&a);
        assert_eq!(p.degree(), Some(4));
        for x in -3..=3 {
            let x = int(x);
            let shifted: RMatrix = (0..4)
                .map(|i| (0..4).map(|j| if i == j { &x - &a[i][j] } else { -a[i][j].clone() }).collect())
                .collect();
            assert_eq!(p.eval(&x), det(&shifted));
        }
    }

    #[test]
    fn nullspace_of_rank_deficient() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let ns = nullspace(&a);
        assert_eq!(ns.len(), 1);
        assert!(mat_vec(&a, &ns[0]).iter().all(Zero::is_zero));
        assert_eq!(ns[0][0], int(1));
        assert_eq!(rank(&a), 2);
    }

    #[test]
    fn roots_of_product() {
        // (x + 3/2)(x - 2)^2 x
        let p = NPoly::from_coeffs([(1, int(6)), (2, int(-2)), (3, rat(-5, 2)), (4, int(1))]);
        let cands = rational_root_candidates(&p).unwrap();
        let (roots, rest) = strip_roots(p, cands);
        assert_eq!(rest.degree(), Some(0));
        let total: usize = roots.iter().map(|(_, k)| k).sum();
        assert_eq!(total, 4);
        assert!(roots.contains(&(int(2), 2)));
        assert!(roots.contains(&(rat(-3, 2), 1)));
    }
}
