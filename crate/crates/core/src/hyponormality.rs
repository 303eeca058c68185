//! k-hyponormality verdicts, closed-form thresholds for the built-in family,
//! the reduced matrices `H_k(y)` / `A_k`, and empirical threshold bisection.
//!
//! A shift is k-hyponormal iff every moment matrix `M_u(k)` is PSD. Only
//! finitely many `u` can be checked, so every verdict carries the bound it
//! was checked up to and never claims more.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::moments::{moment_matrix, MomentKey};
use crate::positivity::{det_exact, psd_exact, psd_float, PsdStatus};
use crate::scalar::{Mode, Scalar, DEFAULT_TOL};
use crate::shifts::WeightField2D;

#[derive(Debug, Clone, PartialEq)]
pub struct HypoVerdict {
    pub k: u32,
    /// `true` means every `M_u(k)` with `u₁, u₂ ≤ checked_u_bound` is PSD.
    pub holds: bool,
    pub checked_u_bound: u32,
    /// First failing lattice point (scanning `u₁` then `u₂`).
    pub witness_u: Option<MomentKey>,
    pub mode: Mode,
    /// Float-mode points whose borderline verdict was settled exactly.
    pub escalations: u32,
}

/// PSD verdict for one `M_u(k)`. Returns `(is_psd, escalated)`.
fn check_u(f: &WeightField2D, u: MomentKey, k: u32, mode: Mode, tol: f64) -> Result<(bool, bool)> {
    let m = moment_matrix(f, u, k).matrix;
    match mode {
        Mode::Exact => Ok((psd_exact(&m)?.is_psd(), false)),
        Mode::Float => match psd_float(&m, tol)?.status {
            PsdStatus::Psd => Ok((true, false)),
            PsdStatus::NotPsd => Ok((false, false)),
            PsdStatus::Borderline => {
                if !m.is_exact() {
                    return Err(Error::Borderline(u.k1, u.k2));
                }
                Ok((psd_exact(&m)?.is_psd(), true))
            }
        },
    }
}

/// Checks `M_u(k) ≥ 0` for all `u` with `u₁, u₂ ≤ u_bound`.
///
/// In float mode a borderline eigenvalue is settled by the exact test when
/// the field carries exact weights, and is an error otherwise.
pub fn is_k_hyponormal(f: &WeightField2D, k: u32, u_bound: u32, mode: Mode, tol: f64) -> Result<HypoVerdict> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".to_string()));
    }
    let mut escalations = 0;
    for u1 in 0..=u_bound {
        for u2 in 0..=u_bound {
            let u = MomentKey::new(u1, u2);
            let (ok, escalated) = check_u(f, u, k, mode, tol)?;
            escalations += escalated as u32;
            if !ok {
                return Ok(HypoVerdict {
                    k,
                    holds: false,
                    checked_u_bound: u_bound,
                    witness_u: Some(u),
                    mode,
                    escalations,
                });
            }
        }
    }
    Ok(HypoVerdict {
        k,
        holds: true,
        checked_u_bound: u_bound,
        witness_u: None,
        mode,
        escalations,
    })
}

// Positions of H_k(y): 0 = 1, 1 = x, 2 = y, 3 = xy, 4.. = x², …, x^k.
fn h_monomial(pos: usize) -> (u32, u32) {
    match pos {
        0 => (0, 0),
        1 => (1, 0),
        2 => (0, 1),
        3 => (1, 1),
        p => (p as u32 - 2, 0),
    }
}

/// `H_k(y)` entry without the `1/y²` corner, i.e. `γ/y²` of the family.
fn h_entry(a2: &Scalar, i: usize, j: usize) -> Scalar {
    let (m1, n1) = h_monomial(i);
    let (m2, n2) = h_monomial(j);
    match (m1 + m2, n1 + n2) {
        (0, 0) => unreachable!("corner handled by caller"),
        (m, 0) => Scalar::ratio(m as i64 + 2, 2 * (m as i64 + 1)),
        (0, _) => Scalar::one(),
        _ => a2.clone(),
    }
}

fn check_k(k: u32) -> Result<()> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("k = {} but the reduced matrices need k >= 2", k)));
    }
    Ok(())
}

/// The `(k+3)×(k+3)` reduction of `M_(0,0)(k)/y²` for the built-in family,
/// rows labelled `1, x, y, xy, x², …, x^k`.
pub fn hk_matrix(a2: &Scalar, y2: &Scalar, k: u32) -> Result<Matrix> {
    check_k(k)?;
    let corner = y2.recip()?;
    Ok(Matrix::from_fn(k as usize + 3, |i, j| {
        if i == 0 && j == 0 {
            corner.clone()
        } else {
            h_entry(a2, i, j)
        }
    }))
}

/// `H_k(y)` without its first row and column; independent of `y`.
pub fn ak_matrix(a2: &Scalar, k: u32) -> Result<Matrix> {
    check_k(k)?;
    Ok(Matrix::from_fn(k as usize + 2, |i, j| h_entry(a2, i + 1, j + 1)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClosedForm {
    /// `D(k)²`, the squared k-hyponormality threshold (k ≥ 2).
    Dk,
    /// `(32 − 48a⁴)/(59 − 72a²)`, the squared hyponormality threshold.
    Hypo1,
    /// `1/(2 − a²)`, the squared subnormality threshold.
    Subnormal,
    /// The factorial constant `a_k` of the determinant identities.
    Ak,
    DetAk,
    DetHk1,
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// `((1!⋯(k−1)!)²·2!⋯(k+1)!) / (2^{k−1}·(k+2)!⋯(2k+1)!) · k(k+2)`
fn a_k(k: u32) -> BigRational {
    let lower: BigInt = (1..k).map(factorial).product();
    let mid: BigInt = (2..=k + 1).map(factorial).product();
    let upper: BigInt = (k + 2..=2 * k + 1).map(factorial).product();
    let num = &lower * &lower * mid * BigInt::from(k) * BigInt::from(k + 2);
    let den = num_traits::pow(BigInt::from(2), k as usize - 1) * upper;
    BigRational::new(num, den)
}

/// Evaluates a closed form at `a²` (and `k` where relevant). Thresholds are
/// returned squared, i.e. as bounds on `y²`.
pub fn closed_form(kind: ClosedForm, a2: &Scalar, k: u32) -> Result<Scalar> {
    let r = |n: i64, d: i64| Scalar::ratio(n, d);
    let one = Scalar::one();
    let a4 = a2 * a2;
    let kk = k as i64;
    match kind {
        ClosedForm::Hypo1 => (r(32, 1) - r(48, 1) * &a4).checked_div(&(r(59, 1) - r(72, 1) * a2)),
        ClosedForm::Subnormal => one.checked_div(&(r(2, 1) - a2)),
        ClosedForm::Dk => {
            check_k(k)?;
            let c = r((kk + 1) * (kk + 1), 2 * kk * (kk + 2));
            let num = &c - a2;
            let den = &a4 - &(r(5, 2) * a2) + &c + r(2 * kk * kk + 4 * kk + 3, 4 * (kk + 1) * (kk + 1));
            num.checked_div(&den)
        }
        ClosedForm::Ak => {
            check_k(k)?;
            Ok(Scalar::Exact(a_k(k)))
        }
        ClosedForm::DetAk => {
            check_k(k)?;
            let c = r((kk + 1) * (kk + 1), 2 * kk * (kk + 2));
            Ok(Scalar::Exact(a_k(k)) * a2 * (&one - a2) * (c - a2))
        }
        ClosedForm::DetHk1 => {
            check_k(k)?;
            let brace = (&one - a2) * (r(1, 2) - a2) + r(1, 4 * (kk + 1) * (kk + 1));
            Ok(Scalar::Exact(a_k(k)) * a2 * (a2 - &one) * brace)
        }
    }
}

/// `D(k)²` at `a² = 1/2` in the simplified form `1/(1 + k(k+2)/(2(k+1)²))`.
pub fn dk_sq_at_half(k: u32) -> Scalar {
    let k = k as i64;
    Scalar::one() / (Scalar::one() + Scalar::ratio(k * (k + 2), 2 * (k + 1) * (k + 1)))
}

/// Squared threshold the closed forms predict for k-hyponormality of the
/// family: `hypo1` for `k = 1`, and the minimum of `hypo1, D(2)², …, D(k)²` above.
pub fn expected_threshold(a2: &Scalar, k: u32) -> Result<Scalar> {
    let mut t = closed_form(ClosedForm::Hypo1, a2, 1)?;
    for j in 2..=k {
        t = t.min(closed_form(ClosedForm::Dk, a2, j)?);
    }
    Ok(t)
}

fn det_identities_with(
    a2: &Scalar,
    y2: &Scalar,
    k: u32,
    ak: impl Fn(&Scalar, u32) -> Result<Matrix>,
) -> Result<bool> {
    let det_a = det_exact(&ak(a2, k)?)?;
    let det_h = det_exact(&hk_matrix(a2, y2, k)?)?;
    let det_h1 = det_exact(&hk_matrix(a2, &Scalar::one(), k)?)?;
    let cofactor = (y2.recip()? - Scalar::one()) * &det_a + &det_h1;
    Ok(det_h == cofactor
        && det_a == closed_form(ClosedForm::DetAk, a2, k)?
        && det_h1 == closed_form(ClosedForm::DetHk1, a2, k)?)
}

/// Checks exactly that `det H_k(y) = (1/y² − 1)·det A_k + det H_k(1)` and that
/// `det A_k`, `det H_k(1)` match their closed forms.
pub fn det_identities_check(a2: &Scalar, y2: &Scalar, k: u32) -> Result<bool> {
    if !a2.is_exact() || !y2.is_exact() {
        return Err(Error::NotExact);
    }
    det_identities_with(a2, y2, k, ak_matrix)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdReport {
    pub a2: Scalar,
    pub k: u32,
    /// `hypo1` for `k = 1`, `D(k)²` otherwise.
    pub closed_form_y2: Scalar,
    /// Midpoint of the final bracket.
    pub bisected_y2: f64,
    /// Largest checked `y²` that holds.
    pub lo: Scalar,
    /// Smallest checked `y²` that fails.
    pub hi: Scalar,
    pub abs_gap: f64,
    pub iterations: u32,
    /// Exact re-checks of the final bracket: `lo` holds and `hi` fails.
    pub lo_confirmed: bool,
    pub hi_confirmed: bool,
    /// Exact verdict at `y² = closed_form_y2` (the boundary is inclusive);
    /// `None` when the closed form is not an exact value in `(0, 1]`.
    pub closed_form_holds: Option<bool>,
}

/// Lower end of the bisection bracket, standing in for `y² → 0⁺`.
pub fn bracket_floor() -> Scalar {
    Scalar::Exact(BigRational::new(BigInt::one(), BigInt::from(1u64 << 20)))
}

/// Settings shared by bisection and classification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSettings {
    pub u_bound: u32,
    pub mode: Mode,
    /// Float-mode eigenvalue tolerance.
    pub psd_tol: f64,
}

impl Default for SweepSettings {
    fn default() -> Self {
        SweepSettings {
            u_bound: 10,
            mode: Mode::Exact,
            psd_tol: DEFAULT_TOL,
        }
    }
}

/// Bisects on `y² ∈ (0, 1]` for the point where k-hyponormality switches off,
/// then re-checks both ends of the final bracket exactly.
///
/// `factory(a2, y2)` builds the field. The bracket must hold at
/// [`bracket_floor`] and fail at `y² = 1`.
pub fn bisect_threshold<F>(factory: F, a2: &Scalar, k: u32, tol: f64, settings: SweepSettings) -> Result<ThresholdReport>
where
    F: Fn(&Scalar, &Scalar) -> Result<WeightField2D>,
{
    if tol.partial_cmp(&0.0) != Some(core::cmp::Ordering::Greater) {
        return Err(Error::InvalidParameter(format!("tol = {} must be positive", tol)));
    }
    let holds = |y2: &Scalar, mode: Mode| -> Result<bool> {
        let f = factory(a2, y2)?;
        Ok(is_k_hyponormal(&f, k, settings.u_bound, mode, settings.psd_tol)?.holds)
    };
    let mut lo = bracket_floor();
    let mut hi = Scalar::one();
    let (lo_holds, hi_holds) = (holds(&lo, settings.mode)?, holds(&hi, settings.mode)?);
    if !lo_holds || hi_holds {
        return Err(Error::BracketNotMonotone {
            lo: lo.to_string(),
            hi: hi.to_string(),
            lo_holds,
            hi_holds,
        });
    }
    let half = Scalar::ratio(1, 2);
    let mut iterations = 0;
    while (&hi - &lo).to_f64() > tol {
        let mid = (&lo + &hi) * &half;
        if holds(&mid, settings.mode)? {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    let exact_ok = a2.is_exact();
    let lo_confirmed = exact_ok && holds(&lo, Mode::Exact)?;
    let hi_confirmed = exact_ok && !holds(&hi, Mode::Exact)?;
    let closed = if k == 1 {
        closed_form(ClosedForm::Hypo1, a2, 1)?
    } else {
        closed_form(ClosedForm::Dk, a2, k)?
    };
    let closed_form_holds = if exact_ok && closed.is_positive() && closed <= Scalar::one() {
        Some(holds(&closed, Mode::Exact)?)
    } else {
        None
    };
    let bisected_y2 = ((&lo + &hi) * &half).to_f64();
    Ok(ThresholdReport {
        a2: a2.clone(),
        k,
        abs_gap: libm::fabs(closed.to_f64() - bisected_y2),
        closed_form_y2: closed,
        bisected_y2,
        lo,
        hi,
        iterations,
        lo_confirmed,
        hi_confirmed,
        closed_form_holds,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct KClassification {
    pub verdict: HypoVerdict,
    /// Closed-form prediction; `None` where the closed forms are undefined.
    pub expected: Option<bool>,
    pub agree: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointClassification {
    pub a2: Scalar,
    pub y2: Scalar,
    pub per_k: Vec<KClassification>,
    /// `y² ≤ 1/(2 − a²)`.
    pub within_subnormal_bound: Option<bool>,
    pub outside_hypothesis: bool,
}

impl PointClassification {
    pub fn all_agree(&self) -> bool {
        self.per_k.iter().all(|c| c.agree)
    }
}

/// Empirical verdict for the built-in family at `(a², y²)` beside the
/// closed-form expectation, for each `k = 1..=k_max`.
pub fn classify_point(a2: &Scalar, y2: &Scalar, k_max: u32, settings: SweepSettings) -> Result<PointClassification> {
    let f = crate::shifts::family_figure2(a2, y2)?;
    let mut per_k = Vec::with_capacity(k_max as usize);
    for k in 1..=k_max {
        let verdict = is_k_hyponormal(&f, k, settings.u_bound, settings.mode, settings.psd_tol)?;
        let expected = expected_threshold(a2, k).ok().map(|t| *y2 <= t);
        let agree = expected.is_none_or(|e| e == verdict.holds);
        per_k.push(KClassification { verdict, expected, agree });
    }
    Ok(PointClassification {
        a2: a2.clone(),
        y2: y2.clone(),
        per_k,
        within_subnormal_bound: closed_form(ClosedForm::Subnormal, a2, 0).ok().map(|s| *y2 <= s),
        outside_hypothesis: f.outside_hypothesis(),
    })
}
