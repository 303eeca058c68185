//! Univariate polynomials in `t`, used as densities on `[0,1]`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Result;
use crate::scalar::Scalar;

/// Polynomial with ascending coefficients. Trailing zeros are trimmed, so the
/// zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Scalar) -> Self {
        Poly::new(vec![c])
    }

    /// `c · t^d`
    pub fn monomial(c: Scalar, d: usize) -> Self {
        let mut coeffs = vec![Scalar::zero(); d + 1];
        coeffs[d] = c;
        Poly::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_exact(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_exact)
    }

    pub fn coeff(&self, d: usize) -> Scalar {
        self.coeffs.get(d).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn eval(&self, t: &Scalar) -> Scalar {
        self.coeffs
            .iter()
            .rev()
            .fold(Scalar::zero(), |acc, c| acc * t + c)
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        Poly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// `t^h · p(t)`
    pub fn shift_up(&self, h: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Scalar::zero(); h];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly::new(coeffs)
    }

    /// `p(t) / t`, defined only when `p(0) = 0`.
    pub fn div_t(&self) -> Option<Poly> {
        match self.coeffs.first() {
            None => Some(Poly::zero()),
            Some(c) if c.is_zero() => Some(Poly::new(self.coeffs[1..].to_vec())),
            Some(_) => None,
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Scalar::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Poly::new(out)
    }

    /// `∫₀¹ t^k p(t) dt`, termwise: coefficient `c_d` contributes `c_d / (k + d + 1)`.
    pub fn integral_01(&self, k: u32) -> Scalar {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(d, c)| c / &Scalar::int(k as i64 + d as i64 + 1))
            .sum()
    }

    /// Certifies `p(t) ≥ 0` on `[0,1]`. Exact coefficients only.
    pub fn nonneg_01(&self) -> Result<bool> {
        let p = self.to_rational()?;
        Ok(rational_nonneg_01(&p))
    }

    fn to_rational(&self) -> Result<Vec<BigRational>> {
        self.coeffs.iter().map(|c| c.exact().cloned()).collect()
    }
}

/// `∫₀¹ t^k p(t) dt`
pub fn poly_integral_01(p: &Poly, k: u32) -> Scalar {
    p.integral_01(k)
}

/// `true` iff `p ≥ 0` on `[0,1]`; float coefficients are rejected.
pub fn poly_nonneg_01(p: &Poly) -> Result<bool> {
    p.nonneg_01()
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match d {
                0 => write!(f, "{}", c)?,
                1 => write!(f, "({})t", c)?,
                _ => write!(f, "({})t^{}", c, d)?,
            }
        }
        Ok(())
    }
}

// Dense rational polynomial helpers (ascending order, trimmed).

type RPoly = Vec<BigRational>;

fn trim(mut p: RPoly) -> RPoly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn eval_r(p: &[BigRational], t: &BigRational) -> BigRational {
    p.iter().rev().fold(BigRational::zero(), |acc, c| acc * t + c)
}

fn derivative(p: &[BigRational]) -> RPoly {
    trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(d, c)| c * BigRational::from_integer(BigInt::from(d)))
            .collect(),
    )
}

fn sub_r(a: &[BigRational], b: &[BigRational]) -> RPoly {
    let n = a.len().max(b.len());
    let zero = BigRational::zero();
    trim(
        (0..n)
            .map(|i| a.get(i).unwrap_or(&zero) - b.get(i).unwrap_or(&zero))
            .collect(),
    )
}

fn mul_r(a: &[BigRational], b: &[BigRational]) -> RPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

/// Polynomial long division; `b` must be nonzero.
fn divrem(a: &[BigRational], b: &[BigRational]) -> (RPoly, RPoly) {
    let mut rem: RPoly = a.to_vec();
    let db = b.len() - 1;
    let lead = &b[db];
    if rem.len() < b.len() {
        return (Vec::new(), trim(rem));
    }
    let mut quot = vec![BigRational::zero(); rem.len() - db];
    for i in (0..quot.len()).rev() {
        let c = &rem[i + db] / lead;
        for (j, bj) in b.iter().enumerate() {
            rem[i + j] -= &c * bj;
        }
        quot[i] = c;
    }
    rem.truncate(db);
    (trim(quot), trim(rem))
}

fn monic(p: RPoly) -> RPoly {
    match p.last() {
        Some(lead) => {
            let lead = lead.clone();
            p.into_iter().map(|c| c / &lead).collect()
        }
        None => p,
    }
}

fn gcd_r(a: &[BigRational], b: &[BigRational]) -> RPoly {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let (_, r) = divrem(&a, &b);
        a = core::mem::replace(&mut b, r);
    }
    monic(a)
}

/// Product of the squarefree factors of odd multiplicity, times the leading
/// coefficient (Yun's algorithm). `p` and the result have the same sign
/// wherever `p` does not vanish.
fn odd_part(p: &[BigRational]) -> RPoly {
    let lead = p.last().cloned().unwrap_or_else(BigRational::one);
    let f = monic(p.to_vec());
    let df = derivative(&f);
    let a0 = gcd_r(&f, &df);
    let mut b = divrem(&f, &a0).0;
    let c = divrem(&df, &a0).0;
    let mut d = sub_r(&c, &derivative(&b));
    let mut out: RPoly = vec![lead];
    let mut mult = 1usize;
    while b.len() > 1 {
        let a = gcd_r(&b, &d);
        if mult % 2 == 1 {
            out = mul_r(&out, &a);
        }
        let next_b = divrem(&b, &a).0;
        let next_c = divrem(&d, &a).0;
        d = sub_r(&next_c, &derivative(&next_b));
        b = next_b;
        mult += 1;
    }
    out
}

fn sign_changes(seq: &[RPoly], t: &BigRational) -> usize {
    let mut count = 0;
    let mut last: Option<bool> = None;
    for p in seq {
        let v = eval_r(p, t);
        if v.is_zero() {
            continue;
        }
        let pos = v.is_positive();
        if last.is_some_and(|l| l != pos) {
            count += 1;
        }
        last = Some(pos);
    }
    count
}

fn sturm_sequence(p: &[BigRational]) -> Vec<RPoly> {
    let mut seq = vec![p.to_vec(), derivative(p)];
    loop {
        let n = seq.len();
        if seq[n - 1].is_empty() {
            seq.pop();
            break;
        }
        let (_, r) = divrem(&seq[n - 2], &seq[n - 1]);
        if r.is_empty() {
            break;
        }
        seq.push(r.into_iter().map(|c| -c).collect());
    }
    seq
}

fn rational_nonneg_01(p: &[BigRational]) -> bool {
    let p = trim(p.to_vec());
    if p.is_empty() {
        return true;
    }
    // Only odd-multiplicity roots change sign.
    let mut q = odd_part(&p);
    let zero = BigRational::zero();
    let one = BigRational::one();
    // Strip endpoint roots so Sturm counts on the open interval; t > 0 inside.
    while q.len() > 1 && eval_r(&q, &zero).is_zero() {
        q = divrem(&q, &[zero.clone(), one.clone()]).0;
    }
    while q.len() > 1 && eval_r(&q, &one).is_zero() {
        // 1 − t is positive inside, so dividing by it keeps the sign.
        q = divrem(&q, &[one.clone(), -one.clone()]).0;
    }
    if q.len() > 1 {
        let seq = sturm_sequence(&q);
        let roots_inside = sign_changes(&seq, &zero).saturating_sub(sign_changes(&seq, &one));
        if roots_inside > 0 {
            return false;
        }
    }
    // No sign change inside (0,1): the sign at the midpoint decides.
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    !eval_r(&q, &half).is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn p(cs: &[(i64, i64)]) -> Poly {
        Poly::new(cs.iter().map(|&(n, d)| Scalar::ratio(n, d)).collect())
    }

    #[test]
    fn integral_examples() {
        let y2 = Scalar::one();
        let half_y2 = Poly::constant(&y2 / &Scalar::int(2));
        assert_eq!(half_y2.integral_01(0), Scalar::ratio(1, 2));
        for n in 0..10u32 {
            assert_eq!(Poly::constant(Scalar::one()).integral_01(n), Scalar::ratio(1, n as i64 + 1));
        }
        // ∫₀¹ t · 2t dt = 2/3
        assert_eq!(p(&[(0, 1), (2, 1)]).integral_01(1), Scalar::ratio(2, 3));
    }

    #[test]
    fn nonneg_examples() {
        assert!(p(&[(1, 1), (-1, 1), (1, 1)]).nonneg_01().unwrap());
        assert!(!p(&[(-2, 1), (1, 1)]).nonneg_01().unwrap());
        // (t - 1/2)^2
        assert!(p(&[(1, 4), (-1, 1), (1, 1)]).nonneg_01().unwrap());
    }

    #[test]
    fn nonneg_edge_cases() {
        assert!(Poly::zero().nonneg_01().unwrap());
        // t(1-t) vanishes at both ends, positive inside
        assert!(p(&[(0, 1), (1, 1), (-1, 1)]).nonneg_01().unwrap());
        // -(t - 1/2)^2 touches zero once and is negative elsewhere
        assert!(!p(&[(-1, 4), (1, 1), (-1, 1)]).nonneg_01().unwrap());
        // (t - 1/2)^3 changes sign at 1/2
        assert!(!p(&[(-1, 8), (3, 4), (-3, 2), (1, 1)]).nonneg_01().unwrap());
        // (t - 2)(t - 3): both roots outside [0,1]
        assert!(p(&[(6, 1), (-5, 1), (1, 1)]).nonneg_01().unwrap());
        // t - 1 is nonpositive on [0,1]
        assert!(!p(&[(-1, 1), (1, 1)]).nonneg_01().unwrap());
        // (t - 1/3)^2 (t - 1/2)^2 (t+1)
        let a = p(&[(-1, 3), (1, 1)]);
        let b = p(&[(-1, 2), (1, 1)]);
        let prod = a.mul(&a).mul(&b).mul(&b).mul(&p(&[(1, 1), (1, 1)]));
        assert!(prod.nonneg_01().unwrap());
        assert!(!prod.scale(&Scalar::int(-1)).nonneg_01().unwrap());
    }

    #[test]
    fn float_coefficients_rejected() {
        let q = Poly::new(alloc::vec![Scalar::float(1.0)]);
        assert_eq!(q.nonneg_01(), Err(Error::NotExact));
    }

    #[test]
    fn shift_and_divide() {
        let q = p(&[(1, 1), (2, 1)]);
        assert_eq!(q.shift_up(2).div_t().unwrap().div_t().unwrap(), q);
        assert!(q.div_t().is_none());
    }
}
