//! Positive-semidefiniteness tests and exact determinants.
//!
//! The exact test is authoritative. It runs fraction-free symmetric
//! elimination on the matrix scaled to integer entries: after pivots at the
//! indices in `S`, the entry `(r, c)` holds the minor on `S ∪ {r}` × `S ∪ {c}`,
//! so consecutive pivot ratios are exactly the `LDLᵀ` pivots. A zero pivot is
//! admissible only if its whole residual row vanishes; that row is then
//! skipped, which is the same as deleting it.

use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{Mode, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PsdStatus {
    Psd,
    NotPsd,
    /// Float mode only: the smallest eigenvalue is within tolerance of zero.
    Borderline,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PsdWitness {
    /// `LDLᵀ` pivot `index` is negative.
    NegativePivot { index: usize, value: Scalar },
    /// Pivot `index` is zero but the residual entry in `column` is not.
    ZeroPivotCoupling { index: usize, column: usize },
    /// Smallest eigenvalue estimate (float mode).
    MinEigenvalue(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PsdVerdict {
    pub status: PsdStatus,
    pub witness: Option<PsdWitness>,
}

impl PsdVerdict {
    fn psd() -> Self {
        PsdVerdict {
            status: PsdStatus::Psd,
            witness: None,
        }
    }

    fn not_psd(w: PsdWitness) -> Self {
        PsdVerdict {
            status: PsdStatus::NotPsd,
            witness: Some(w),
        }
    }

    pub fn is_psd(&self) -> bool {
        self.status == PsdStatus::Psd
    }
}

/// Integer matrix `L·M` with `L` the lcm of all denominators. Returns `(entries, L)`.
fn integer_scaled(m: &Matrix) -> Result<(Vec<BigInt>, BigInt)> {
    let mut lcm = BigInt::one();
    for row in m.rows() {
        for x in row {
            lcm = lcm.lcm(x.exact()?.denom());
        }
    }
    let mut out = Vec::with_capacity(m.dim() * m.dim());
    for row in m.rows() {
        for x in row {
            let r = x.exact()?;
            out.push(r.numer() * (&lcm / r.denom()));
        }
    }
    Ok((out, lcm))
}

/// Exact PSD test; entries must all be exact and the matrix symmetric.
pub fn psd_exact(m: &Matrix) -> Result<PsdVerdict> {
    if !m.is_exact() {
        return Err(Error::NotExact);
    }
    m.check_symmetric()?;
    let n = m.dim();
    let (mut a, scale) = integer_scaled(m)?;
    let mut prev = BigInt::one();
    for i in 0..n {
        let p = a[i * n + i].clone();
        match p.sign() {
            num_bigint::Sign::Minus => {
                let value = BigRational::new(p, &prev * &scale);
                return Ok(PsdVerdict::not_psd(PsdWitness::NegativePivot {
                    index: i,
                    value: Scalar::Exact(value),
                }));
            }
            num_bigint::Sign::NoSign => {
                if let Some(j) = ((i + 1)..n).find(|&j| !a[i * n + j].is_zero()) {
                    return Ok(PsdVerdict::not_psd(PsdWitness::ZeroPivotCoupling { index: i, column: j }));
                }
                continue;
            }
            num_bigint::Sign::Plus => {}
        }
        for r in (i + 1)..n {
            let air = a[i * n + r].clone();
            if air.is_zero() {
                for c in r..n {
                    let v = (&p * &a[r * n + c]) / &prev;
                    a[r * n + c] = v;
                }
            } else {
                for c in r..n {
                    let v = (&p * &a[r * n + c] - &air * &a[i * n + c]) / &prev;
                    a[r * n + c] = v;
                }
            }
            for c in (r + 1)..n {
                a[c * n + r] = a[r * n + c].clone();
            }
        }
        prev = p;
    }
    Ok(PsdVerdict::psd())
}

/// Float PSD test by the smallest eigenvalue: `≥ tol` is PSD, `≤ −tol` is not,
/// anything in between is [`PsdStatus::Borderline`].
pub fn psd_float(m: &Matrix, tol: f64) -> Result<PsdVerdict> {
    let n = m.dim();
    let a = m.to_f64();
    if let Some(pos) = a.iter().position(|x| !x.is_finite()) {
        return Err(Error::NonFinite(pos / n, pos % n));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let (x, y) = (a[i * n + j], a[j * n + i]);
            if libm::fabs(x - y) > 1e-12 * libm::fmax(1.0, libm::fmax(libm::fabs(x), libm::fabs(y))) {
                return Err(Error::Asymmetric(i, j));
            }
        }
    }
    if n == 0 {
        return Ok(PsdVerdict::psd());
    }
    let lambda = symmetric_eigenvalues(a, n)
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    let status = if lambda >= tol {
        PsdStatus::Psd
    } else if lambda <= -tol {
        PsdStatus::NotPsd
    } else {
        PsdStatus::Borderline
    };
    Ok(PsdVerdict {
        status,
        witness: Some(PsdWitness::MinEigenvalue(lambda)),
    })
}

/// Dispatches on mode.
pub fn psd(m: &Matrix, mode: Mode, tol: f64) -> Result<PsdVerdict> {
    match mode {
        Mode::Exact => psd_exact(m),
        Mode::Float => psd_float(m, tol),
    }
}

/// Eigenvalues of a symmetric matrix (row-major) by cyclic Jacobi rotations.
pub fn symmetric_eigenvalues(mut a: Vec<f64>, n: usize) -> Vec<f64> {
    let norm: f64 = a.iter().map(|x| x * x).sum();
    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p * n + q] * a[p * n + q];
            }
        }
        if off <= 1e-32 * norm || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = if libm::fabs(theta) > 1e150 {
                    0.5 / theta
                } else {
                    let s = if theta >= 0.0 { 1.0 } else { -1.0 };
                    s / (libm::fabs(theta) + libm::sqrt(theta * theta + 1.0))
                };
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k * n + p], a[k * n + q]);
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p * n + k], a[q * n + k]);
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i * n + i]).collect()
}

/// Exact determinant by fraction-free (Bareiss) elimination with row pivoting.
pub fn det_exact(m: &Matrix) -> Result<Scalar> {
    if !m.is_exact() {
        return Err(Error::NotExact);
    }
    let n = m.dim();
    if n == 0 {
        return Ok(Scalar::one());
    }
    let (mut a, scale) = integer_scaled(m)?;
    let mut negate = false;
    let mut prev = BigInt::one();
    for i in 0..n {
        let Some(piv) = (i..n).find(|&r| !a[r * n + i].is_zero()) else {
            return Ok(Scalar::zero());
        };
        if piv != i {
            for c in 0..n {
                a.swap(i * n + c, piv * n + c);
            }
            negate = !negate;
        }
        let p = a[i * n + i].clone();
        for r in (i + 1)..n {
            let ari = a[r * n + i].clone();
            for c in (i + 1)..n {
                let v = (&p * &a[r * n + c] - &ari * &a[i * n + c]) / &prev;
                a[r * n + c] = v;
            }
        }
        prev = p;
    }
    let det = BigRational::new(a[n * n - 1].clone(), num_traits::pow(scale, n));
    Ok(Scalar::Exact(if negate { -det } else { det }))
}

/// Sign of the determinant, for reports.
pub fn det_sign(m: &Matrix) -> Result<Ordering> {
    Ok(det_exact(m)?.exact()?.cmp(&BigRational::zero()))
}
