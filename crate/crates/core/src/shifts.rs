//! Weighted shifts in one and two variables, stored by their squared weights.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use alloc::format;

use spin::RwLock;

use crate::error::{Error, Result};
use crate::moments::MomentKey;
use crate::scalar::Scalar;

/// How squared weights continue past the stored prefix.
#[derive(Clone, Debug, PartialEq)]
pub enum Tail {
    /// Every remaining squared weight equals the constant.
    Constant(Scalar),
    /// `(n+1)(n+3)/(n+2)²`, the tail of the x-sequence.
    XSequence,
}

impl Tail {
    fn at(&self, n: u32) -> Scalar {
        match self {
            Tail::Constant(c) => c.clone(),
            Tail::XSequence => {
                let n = n as i64;
                Scalar::ratio((n + 1) * (n + 3), (n + 2) * (n + 2))
            }
        }
    }

    fn sup(&self) -> Scalar {
        match self {
            Tail::Constant(c) => c.clone(),
            Tail::XSequence => Scalar::one(),
        }
    }
}

/// Squared weights `α_n²` of a 1-variable shift.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightSeq1D {
    prefix: Vec<Scalar>,
    tail: Tail,
    bound: Scalar,
}

impl WeightSeq1D {
    /// Validates positivity of the prefix and the tail.
    pub fn new(prefix: Vec<Scalar>, tail: Tail) -> Result<Self> {
        if let Some((n, w)) = prefix.iter().enumerate().find(|(_, w)| !w.is_positive()) {
            return Err(Error::InvalidParameter(format!(
                "squared weight {} at n = {} is not positive",
                w, n
            )));
        }
        if let Tail::Constant(c) = &tail {
            if !c.is_positive() {
                return Err(Error::InvalidParameter(format!("tail weight {} is not positive", c)));
            }
        }
        let bound = prefix.iter().cloned().fold(tail.sup(), Scalar::max);
        Ok(WeightSeq1D { prefix, tail, bound })
    }

    /// `α_n²`
    pub fn sq(&self, n: u32) -> Scalar {
        match self.prefix.get(n as usize) {
            Some(w) => w.clone(),
            None => self.tail.at(n),
        }
    }

    /// Unsquared weight, for display only.
    pub fn weight_f64(&self, n: u32) -> f64 {
        libm::sqrt(self.sq(n).to_f64())
    }

    pub fn bound(&self) -> &Scalar {
        &self.bound
    }

    pub fn prefix(&self) -> &[Scalar] {
        &self.prefix
    }

    pub fn tail(&self) -> &Tail {
        &self.tail
    }
}

/// Squared weights of the x-sequence: `x₀² = (3/4)y²`, `x_n² = (n+1)(n+3)/(n+2)²`.
pub fn x_sequence_sq(y2: &Scalar) -> Result<WeightSeq1D> {
    if !y2.is_positive() || *y2 > Scalar::one() {
        return Err(Error::InvalidParameter(format!("y2 = {} must lie in (0, 1]", y2)));
    }
    WeightSeq1D::new(alloc::vec![Scalar::ratio(3, 4) * y2], Tail::XSequence)
}

/// Named 1-variable shifts: `S_a` (params `[a2]`), `U_plus`, `x_seq` (params `[y2]`).
pub fn builtin_1d_shift(name: &str, params: &[Scalar]) -> Result<WeightSeq1D> {
    let param = |i: usize| {
        params
            .get(i)
            .cloned()
            .ok_or_else(|| Error::InvalidParameter(format!("{} needs {} parameter(s)", name, i + 1)))
    };
    match name {
        "S_a" => {
            let a2 = param(0)?;
            if !a2.is_positive() || a2 > Scalar::one() {
                return Err(Error::InvalidParameter(format!("a2 = {} must lie in (0, 1]", a2)));
            }
            WeightSeq1D::new(alloc::vec![a2], Tail::Constant(Scalar::one()))
        }
        "U_plus" => WeightSeq1D::new(Vec::new(), Tail::Constant(Scalar::one())),
        "x_seq" => x_sequence_sq(&param(0)?),
        other => Err(Error::UnknownName(other.to_string())),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum FieldKind {
    /// The two-parameter family built on the x-sequence (rows `k₂ ≥ 1` carry `S_a ⊗ U₊`).
    Figure2 { a2: Scalar, y2: Scalar, x: WeightSeq1D },
    /// `T₁ = I ⊗ W_a`, `T₂ = W_b ⊗ I`.
    Tensor { wa: WeightSeq1D, wb: WeightSeq1D },
}

/// Squared weight maps `(k₁,k₂) ↦ α_k², β_k²` of a 2-variable shift.
///
/// Explicit overrides take precedence over the family rule; they back the
/// text format's prefix table and make fault injection easy. Moments are
/// memoized in an append-only cache shared by all readers.
pub struct WeightField2D {
    kind: FieldKind,
    alpha_over: BTreeMap<(u32, u32), Scalar>,
    beta_over: BTreeMap<(u32, u32), Scalar>,
    outside_hypothesis: bool,
    cache: RwLock<BTreeMap<MomentKey, Scalar>>,
}

impl Clone for WeightField2D {
    fn clone(&self) -> Self {
        WeightField2D {
            kind: self.kind.clone(),
            alpha_over: self.alpha_over.clone(),
            beta_over: self.beta_over.clone(),
            outside_hypothesis: self.outside_hypothesis,
            cache: RwLock::new(self.cache.read().clone()),
        }
    }
}

impl core::fmt::Debug for WeightField2D {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("WeightField2D")
            .field("kind", &self.kind)
            .field("alpha_over", &self.alpha_over)
            .field("beta_over", &self.beta_over)
            .field("outside_hypothesis", &self.outside_hypothesis)
            .finish()
    }
}

impl WeightField2D {
    fn from_kind(kind: FieldKind, outside_hypothesis: bool) -> Self {
        WeightField2D {
            kind,
            alpha_over: BTreeMap::new(),
            beta_over: BTreeMap::new(),
            outside_hypothesis,
            cache: RwLock::new(BTreeMap::new()),
        }
    }

    pub fn kind(&self) -> &FieldKind {
        &self.kind
    }

    /// Short family name used in reports and the text format.
    pub fn family_name(&self) -> &'static str {
        match self.kind {
            FieldKind::Figure2 { .. } => "figure2",
            FieldKind::Tensor { .. } => "tensor",
        }
    }

    /// Parameters lie outside the range where the family's closed forms are proven.
    pub fn outside_hypothesis(&self) -> bool {
        self.outside_hypothesis
    }

    pub fn alpha_overrides(&self) -> &BTreeMap<(u32, u32), Scalar> {
        &self.alpha_over
    }

    pub fn beta_overrides(&self) -> &BTreeMap<(u32, u32), Scalar> {
        &self.beta_over
    }

    /// Replaces `α²` at `k`; the moment cache is dropped.
    pub fn with_alpha_override(mut self, k: (u32, u32), sq: Scalar) -> Self {
        self.alpha_over.insert(k, sq);
        self.cache = RwLock::new(BTreeMap::new());
        self
    }

    /// Replaces `β²` at `k`; the moment cache is dropped.
    pub fn with_beta_override(mut self, k: (u32, u32), sq: Scalar) -> Self {
        self.beta_over.insert(k, sq);
        self.cache = RwLock::new(BTreeMap::new());
        self
    }

    /// `α²_(k₁,k₂)`: weight of the step `k → k + ε₁`.
    pub fn alpha_sq(&self, k1: u32, k2: u32) -> Scalar {
        if let Some(v) = self.alpha_over.get(&(k1, k2)) {
            return v.clone();
        }
        match &self.kind {
            FieldKind::Figure2 { a2, x, .. } => match (k1, k2) {
                (n, 0) => x.sq(n),
                (0, _) => a2.clone(),
                _ => Scalar::one(),
            },
            FieldKind::Tensor { wa, .. } => wa.sq(k1),
        }
    }

    /// `β²_(k₁,k₂)`: weight of the step `k → k + ε₂`.
    pub fn beta_sq(&self, k1: u32, k2: u32) -> Scalar {
        if let Some(v) = self.beta_over.get(&(k1, k2)) {
            return v.clone();
        }
        match &self.kind {
            FieldKind::Figure2 { a2, y2, x } => match (k1, k2) {
                (0, 0) => y2.clone(),
                (n, 0) => {
                    let gamma: Scalar = (0..n).map(|i| x.sq(i)).product();
                    a2 * y2 / gamma
                }
                _ => Scalar::one(),
            },
            FieldKind::Tensor { wb, .. } => wb.sq(k2),
        }
    }

    /// A declared upper bound for every squared weight of the unmodified family.
    pub fn bound(&self) -> Scalar {
        let base = match &self.kind {
            FieldKind::Figure2 { a2, y2, .. } => {
                // β²_(n,0) = a²·2(n+1)/(n+2) increases towards 2a².
                Scalar::one().max(y2.clone()).max(Scalar::int(2) * a2)
            }
            FieldKind::Tensor { wa, wb } => wa.bound().clone().max(wb.bound().clone()),
        };
        self.alpha_over
            .values()
            .chain(self.beta_over.values())
            .cloned()
            .fold(base, Scalar::max)
    }

    pub(crate) fn cache(&self) -> &RwLock<BTreeMap<MomentKey, Scalar>> {
        &self.cache
    }

    /// One-line description of the field's parameters.
    pub fn describe(&self) -> String {
        match &self.kind {
            FieldKind::Figure2 { a2, y2, .. } => format!("figure2 a2={} y2={}", a2, y2),
            FieldKind::Tensor { .. } => "tensor".to_string(),
        }
    }
}

/// The family whose rows above the bottom carry `S_a ⊗ U₊` and whose bottom row
/// is the x-sequence.
///
/// `a2 > 1/2` or `y2 > 1` still builds, with [`WeightField2D::outside_hypothesis`] set.
pub fn family_figure2(a2: &Scalar, y2: &Scalar) -> Result<WeightField2D> {
    if !a2.is_positive() {
        return Err(Error::InvalidParameter(format!("a2 = {} must be positive", a2)));
    }
    if !y2.is_positive() {
        return Err(Error::InvalidParameter(format!("y2 = {} must be positive", y2)));
    }
    let outside = *a2 > Scalar::ratio(1, 2) || *y2 > Scalar::one();
    let x = WeightSeq1D::new(alloc::vec![Scalar::ratio(3, 4) * y2], Tail::XSequence)?;
    Ok(WeightField2D::from_kind(
        FieldKind::Figure2 {
            a2: a2.clone(),
            y2: y2.clone(),
            x,
        },
        outside,
    ))
}

/// `α²_(k₁,k₂) = wa.sq(k₁)`, `β²_(k₁,k₂) = wb.sq(k₂)`.
pub fn tensor_field(wa: &WeightSeq1D, wb: &WeightSeq1D) -> WeightField2D {
    WeightField2D::from_kind(
        FieldKind::Tensor {
            wa: wa.clone(),
            wb: wb.clone(),
        },
        false,
    )
}

/// First `k` (with `k₁, k₂ ≤ bound`) where `β²_(k+ε₁)α²_k ≠ α²_(k+ε₂)β²_k`.
pub fn commutativity_violation(f: &WeightField2D, bound: u32) -> Option<(u32, u32)> {
    for k1 in 0..=bound {
        for k2 in 0..=bound {
            let lhs = f.beta_sq(k1 + 1, k2) * f.alpha_sq(k1, k2);
            let rhs = f.alpha_sq(k1, k2 + 1) * f.beta_sq(k1, k2);
            let equal = match (lhs.as_exact(), rhs.as_exact()) {
                (Some(a), Some(b)) => a == b,
                _ => {
                    let (a, b) = (lhs.to_f64(), rhs.to_f64());
                    libm::fabs(a - b) <= 1e-12 * libm::fmax(1.0, libm::fmax(libm::fabs(a), libm::fabs(b)))
                }
            };
            if !equal {
                return Some((k1, k2));
            }
        }
    }
    None
}

/// `true` iff the squared commutativity identity holds for `k₁, k₂ ≤ bound`.
pub fn check_commutativity(f: &WeightField2D, bound: u32) -> bool {
    commutativity_violation(f, bound).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Scalar {
        Scalar::ratio(n, d)
    }

    #[test]
    fn x_sequence_values() {
        assert_eq!(x_sequence_sq(&Scalar::one()).unwrap().sq(0), r(3, 4));
        for y2 in [r(1, 1), r(1, 2), r(1, 7)] {
            assert_eq!(x_sequence_sq(&y2).unwrap().sq(1), r(8, 9));
        }
        assert_eq!(x_sequence_sq(&r(1, 2)).unwrap().sq(0), r(3, 8));
        assert!(x_sequence_sq(&Scalar::zero()).is_err());
        assert!(x_sequence_sq(&r(3, 2)).is_err());
    }

    #[test]
    fn builtins() {
        let s = builtin_1d_shift("S_a", &[r(1, 2)]).unwrap();
        assert_eq!(s.sq(0), r(1, 2));
        assert_eq!(s.sq(1), Scalar::one());
        assert_eq!(s.sq(40), Scalar::one());
        let u = builtin_1d_shift("U_plus", &[]).unwrap();
        assert!((0..50).all(|n| u.sq(n) == Scalar::one()));
        assert!(builtin_1d_shift("S_a", &[Scalar::zero()]).is_err());
        assert!(matches!(builtin_1d_shift("nope", &[]), Err(Error::UnknownName(_))));
        assert_eq!(builtin_1d_shift("x_seq", &[r(1, 2)]).unwrap().sq(0), r(3, 8));
    }

    #[test]
    fn figure2_entries() {
        let (a2, y2) = (r(1, 3), r(1, 2));
        let f = family_figure2(&a2, &y2).unwrap();
        // β²_(1,0) = a²y²/x₀² = 4a²/3
        assert_eq!(f.beta_sq(1, 0), r(4, 1) * &a2 / r(3, 1));
        assert_eq!(f.alpha_sq(3, 5), Scalar::one());
        assert_eq!(f.alpha_sq(0, 4), a2);
        assert_eq!(f.beta_sq(0, 0), y2);
        assert_eq!(f.beta_sq(0, 3), Scalar::one());
        assert_eq!(f.beta_sq(1, 0) * f.alpha_sq(0, 0), &a2 * &y2);
        assert_eq!(f.alpha_sq(0, 1) * f.beta_sq(0, 0), &a2 * &y2);
        assert!(!f.outside_hypothesis());
    }

    #[test]
    fn figure2_flags_outside_hypothesis() {
        let f = family_figure2(&r(3, 4), &r(1, 2)).unwrap();
        assert!(f.outside_hypothesis());
        assert!(family_figure2(&Scalar::zero(), &r(1, 2)).is_err());
    }

    #[test]
    fn commutativity() {
        for (a2, y2) in [(r(1, 2), r(2, 3)), (r(1, 10), r(1, 1)), (r(1, 4), r(9, 13))] {
            assert!(check_commutativity(&family_figure2(&a2, &y2).unwrap(), 20));
        }
        let sa = builtin_1d_shift("S_a", &[r(1, 2)]).unwrap();
        let xs = x_sequence_sq(&r(1, 3)).unwrap();
        assert!(check_commutativity(&tensor_field(&sa, &xs), 20));
        let broken = family_figure2(&r(1, 2), &r(1, 2))
            .unwrap()
            .with_beta_override((0, 0), r(1, 1));
        assert_eq!(commutativity_violation(&broken, 20), Some((0, 0)));
    }

    #[test]
    fn tensor_is_row_independent() {
        let sa = builtin_1d_shift("S_a", &[r(1, 2)]).unwrap();
        let u = builtin_1d_shift("U_plus", &[]).unwrap();
        let f = tensor_field(&sa, &u);
        assert_eq!(f.alpha_sq(0, 7), r(1, 2));
        let ones = tensor_field(&u, &u);
        assert!((0..5).all(|i| (0..5).all(|j| ones.alpha_sq(i, j) == Scalar::one() && ones.beta_sq(i, j) == Scalar::one())));
    }

    #[test]
    fn bound_covers_weights() {
        let f = family_figure2(&r(1, 2), &r(1, 1)).unwrap();
        let b = f.bound();
        for i in 0..15 {
            for j in 0..15 {
                assert!(f.alpha_sq(i, j) <= b && f.beta_sq(i, j) <= b);
                assert!(f.alpha_sq(i, j).is_positive() && f.beta_sq(i, j).is_positive());
            }
        }
    }
}
