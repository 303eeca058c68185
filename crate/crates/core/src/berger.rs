//! Berger measures and the subnormal backward-extension test.
//!
//! Measures live in a small class that is closed under everything needed
//! here: finitely many atoms on `[0, ∞)` plus a polynomial density on `[0,1]`,
//! and finite sums of products of such measures in two variables. Inside
//! this class `μ₁ ≤ μ₂` is decided exactly, atom by atom and density by
//! density.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::moments::{gamma_1d, MomentKey};
use crate::poly::Poly;
use crate::scalar::Scalar;
use crate::shifts::WeightSeq1D;

/// Finite atoms plus an absolutely continuous part with polynomial density on `[0,1]`.
///
/// Atoms are kept sorted by location, merged, and zero masses dropped, so
/// structural equality is equality of measures.
#[derive(Clone, Debug, PartialEq)]
pub struct Measure1D {
    atoms: Vec<(Scalar, Scalar)>,
    density: Poly,
}

fn normalize_atoms(mut atoms: Vec<(Scalar, Scalar)>) -> Vec<(Scalar, Scalar)> {
    atoms.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(core::cmp::Ordering::Equal));
    let mut out: Vec<(Scalar, Scalar)> = Vec::with_capacity(atoms.len());
    for (t, m) in atoms {
        match out.last_mut() {
            Some(last) if last.0 == t => last.1 = &last.1 + &m,
            _ => out.push((t, m)),
        }
    }
    out.retain(|(_, m)| !m.is_zero());
    out
}

impl Measure1D {
    /// Validates nonnegative locations and masses, and (for exact
    /// densities) nonnegativity of the density on `[0,1]`.
    pub fn new(atoms: Vec<(Scalar, Scalar)>, density: Poly) -> Result<Self> {
        if let Some((t, m)) = atoms.iter().find(|(t, m)| t.is_negative() || m.is_negative()) {
            return Err(Error::InvalidParameter(format!("atom ({}, {}) is not a nonnegative mass on [0, inf)", t, m)));
        }
        if density.is_exact() && !density.nonneg_01()? {
            return Err(Error::InvalidParameter(format!("density {} is negative somewhere on [0,1]", density)));
        }
        Ok(Self::new_unchecked(atoms, density))
    }

    /// Skips the sign checks; used for signed intermediate results.
    pub fn new_unchecked(atoms: Vec<(Scalar, Scalar)>, density: Poly) -> Self {
        Measure1D {
            atoms: normalize_atoms(atoms),
            density,
        }
    }

    pub fn zero() -> Self {
        Measure1D::new_unchecked(Vec::new(), Poly::zero())
    }

    /// `δ_t`
    pub fn point(t: Scalar) -> Self {
        Measure1D::new_unchecked(alloc::vec![(t, Scalar::one())], Poly::zero())
    }

    /// Lebesgue measure on `[0,1]`.
    pub fn lebesgue() -> Self {
        Measure1D::new_unchecked(Vec::new(), Poly::constant(Scalar::one()))
    }

    pub fn atoms(&self) -> &[(Scalar, Scalar)] {
        &self.atoms
    }

    pub fn density(&self) -> &Poly {
        &self.density
    }

    pub fn scale(&self, c: &Scalar) -> Measure1D {
        Measure1D::new_unchecked(
            self.atoms.iter().map(|(t, m)| (t.clone(), m * c)).collect(),
            self.density.scale(c),
        )
    }

    pub fn add(&self, other: &Measure1D) -> Measure1D {
        let atoms = self.atoms.iter().chain(other.atoms.iter()).cloned().collect();
        Measure1D::new_unchecked(atoms, self.density.add(&other.density))
    }

    /// Signed difference `self − other`.
    pub fn difference(&self, other: &Measure1D) -> Measure1D {
        self.add(&other.scale(&Scalar::int(-1)))
    }

    /// `true` when no atom mass is negative and the density is nonnegative on `[0,1]`.
    pub fn is_nonnegative(&self) -> Result<bool> {
        Ok(self.atoms.iter().all(|(_, m)| !m.is_negative()) && self.density.nonneg_01()?)
    }

    pub fn total_mass(&self) -> Scalar {
        self.moment(0)
    }

    /// `∫ tᵏ dμ(t)`, with `0⁰ = 1`.
    pub fn moment(&self, k: u32) -> Scalar {
        let atoms: Scalar = self.atoms.iter().map(|(t, m)| m * &t.pow(k)).sum();
        atoms + self.density.integral_01(k)
    }

    /// `tʰ dμ(t)`
    pub fn weight_t_pow(&self, h: u32) -> Measure1D {
        Measure1D::new_unchecked(
            self.atoms.iter().map(|(t, m)| (t.clone(), m * &t.pow(h))).collect(),
            self.density.shift_up(h as usize),
        )
    }

    /// Mass at exactly `t` (zero if there is no atom there).
    pub fn atom_mass(&self, t: &Scalar) -> Scalar {
        self.atoms
            .iter()
            .find(|(s, _)| s == t)
            .map(|(_, m)| m.clone())
            .unwrap_or_else(Scalar::zero)
    }

    /// `∫ (1/t) dμ(t)`; an atom at 0 or a density with `p(0) ≠ 0` is not integrable.
    pub fn one_over_t_integral(&self) -> Result<Scalar> {
        let mut acc = Scalar::zero();
        for (t, m) in &self.atoms {
            if t.is_zero() {
                return Err(Error::NotIntegrable(format!("atom of mass {} at t = 0", m)));
            }
            acc = acc + m / t;
        }
        let reduced = self
            .density
            .div_t()
            .ok_or_else(|| Error::NotIntegrable(format!("density {} does not vanish at t = 0", self.density)))?;
        Ok(acc + reduced.integral_01(0))
    }
}

/// A finite sum of product measures `Σ νᵢ(s) × τᵢ(t)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Measure2D {
    terms: Vec<(Measure1D, Measure1D)>,
}

impl Measure2D {
    pub fn new(terms: Vec<(Measure1D, Measure1D)>) -> Self {
        Measure2D { terms }
    }

    pub fn product(s: Measure1D, t: Measure1D) -> Self {
        Measure2D::new(alloc::vec![(s, t)])
    }

    pub fn terms(&self) -> &[(Measure1D, Measure1D)] {
        &self.terms
    }

    pub fn scale(&self, c: &Scalar) -> Measure2D {
        Measure2D::new(self.terms.iter().map(|(s, t)| (s.scale(c), t.clone())).collect())
    }

    pub fn add(&self, other: &Measure2D) -> Measure2D {
        Measure2D::new(self.terms.iter().chain(other.terms.iter()).cloned().collect())
    }

    pub fn total_mass(&self) -> Scalar {
        self.moment(MomentKey::ORIGIN)
    }

    /// `∬ s^{k₁} t^{k₂} dμ(s,t)`
    pub fn moment(&self, k: MomentKey) -> Scalar {
        self.terms.iter().map(|(s, t)| s.moment(k.k1) * t.moment(k.k2)).sum()
    }

    /// `t dμ(s,t)`
    pub fn weight_t(&self) -> Measure2D {
        Measure2D::new(self.terms.iter().map(|(s, t)| (s.clone(), t.weight_t_pow(1))).collect())
    }

    /// Drops the part of every term that sits on the line `t = 0`.
    pub fn without_t_zero_slice(&self) -> Measure2D {
        let zero = Scalar::zero();
        Measure2D::new(
            self.terms
                .iter()
                .map(|(s, t)| {
                    let atoms = t.atoms().iter().filter(|(x, _)| *x != zero).cloned().collect();
                    (s.clone(), Measure1D::new_unchecked(atoms, t.density().clone()))
                })
                .collect(),
        )
    }
}

/// Result of [`builtin_measure`].
#[derive(Clone, Debug, PartialEq)]
pub enum Measure {
    OneVar(Measure1D),
    TwoVar(Measure2D),
}

fn unit_param(name: &str, params: &[Scalar], i: usize) -> Result<Scalar> {
    let p = params
        .get(i)
        .cloned()
        .ok_or_else(|| Error::InvalidParameter(format!("{} needs {} parameter(s)", name, i + 1)))?;
    if p.is_negative() || p > Scalar::one() {
        return Err(Error::InvalidParameter(format!("{} parameter {} must lie in [0, 1]", name, p)));
    }
    Ok(p)
}

/// `(1 − y²)δ₀ + (y²/2)λ + (y²/2)δ₁`, the Berger measure of the x-sequence.
pub fn mu_x(y2: &Scalar) -> Result<Measure1D> {
    let y2 = unit_param("mu_x", core::slice::from_ref(y2), 0)?;
    let half = &y2 / &Scalar::int(2);
    Measure1D::new(
        alloc::vec![(Scalar::zero(), Scalar::one() - &y2), (Scalar::one(), half.clone())],
        Poly::constant(half),
    )
}

/// `(1 − a²)δ₀ + a²δ₁`, the Berger measure of `S_a`.
pub fn s_a_measure(a2: &Scalar) -> Result<Measure1D> {
    let a2 = unit_param("S_a_measure", core::slice::from_ref(a2), 0)?;
    Measure1D::new(
        alloc::vec![(Scalar::zero(), Scalar::one() - &a2), (Scalar::one(), a2)],
        Poly::zero(),
    )
}

/// `[(1 − a²)δ₀ + a²δ₁] × δ₁`
pub fn mu_m(a2: &Scalar) -> Result<Measure2D> {
    Ok(Measure2D::product(s_a_measure(a2)?, Measure1D::point(Scalar::one())))
}

/// Named measures: `mu_x [y2]`, `S_a_measure [a2]`, `mu_M [a2]`, `lebesgue`, `point [t]`.
pub fn builtin_measure(name: &str, params: &[Scalar]) -> Result<Measure> {
    match name {
        "mu_x" => Ok(Measure::OneVar(mu_x(&unit_param(name, params, 0)?)?)),
        "S_a_measure" => Ok(Measure::OneVar(s_a_measure(&unit_param(name, params, 0)?)?)),
        "mu_M" => Ok(Measure::TwoVar(mu_m(&unit_param(name, params, 0)?)?)),
        "lebesgue" => Ok(Measure::OneVar(Measure1D::lebesgue())),
        "point" => {
            let t = params
                .first()
                .cloned()
                .ok_or_else(|| Error::InvalidParameter("point needs a location".to_string()))?;
            if t.is_negative() {
                return Err(Error::InvalidParameter(format!("point location {} is negative", t)));
            }
            Ok(Measure::OneVar(Measure1D::point(t)))
        }
        other => Err(Error::UnknownName(other.to_string())),
    }
}

pub fn measure_moment_1d(mu: &Measure1D, k: u32) -> Scalar {
    mu.moment(k)
}

pub fn measure_moment_2d(mu: &Measure2D, k: MomentKey) -> Scalar {
    mu.moment(k)
}

/// `γ_k(w) = ∫ tᵏ dμ` for every `0 ≤ k ≤ k_max`.
pub fn verify_berger(w: &WeightSeq1D, mu: &Measure1D, k_max: u32) -> bool {
    let mut gamma = Scalar::one();
    for k in 0..=k_max {
        if k > 0 {
            gamma = gamma * w.sq(k - 1);
        }
        if gamma != mu.moment(k) {
            return false;
        }
    }
    true
}

/// Berger measure of the restriction to `M_h`: `(1/γ_h) tʰ dξ(t)`.
pub fn restrict_measure(xi: &Measure1D, h: u32, gamma_h: &Scalar) -> Result<Measure1D> {
    if h == 0 {
        return Err(Error::InvalidParameter("restriction needs h >= 1".to_string()));
    }
    if !gamma_h.is_positive() {
        return Err(Error::InvalidParameter(format!("gamma_h = {} must be positive", gamma_h)));
    }
    let moment = xi.moment(h);
    if gamma_h.is_exact() && moment.is_exact() && moment != *gamma_h {
        return Err(Error::InvalidParameter(format!(
            "gamma_h = {} differs from the measure's moment {}",
            gamma_h, moment
        )));
    }
    Ok(xi.weight_t_pow(h).scale(&gamma_h.recip()?))
}

/// `‖1/t‖_{L¹(μ)}`, computed termwise.
pub fn one_over_t_norm(mu: &Measure2D) -> Result<Scalar> {
    let mut acc = Scalar::zero();
    for (s, t) in mu.terms() {
        let mass = s.total_mass();
        if mass.is_zero() {
            continue;
        }
        acc = acc + mass * t.one_over_t_integral()?;
    }
    Ok(acc)
}

/// `dμ_ext = (1 − δ₀(t)) · 1/(t‖1/t‖) dμ`
pub fn extremal_measure(mu: &Measure2D) -> Result<Measure2D> {
    let norm = one_over_t_norm(mu)?;
    let inv = norm.recip()?;
    let zero = Scalar::zero();
    let mut terms = Vec::with_capacity(mu.terms().len());
    for (s, t) in mu.terms() {
        if s.total_mass().is_zero() {
            continue;
        }
        let atoms = t
            .atoms()
            .iter()
            .filter(|(x, _)| *x != zero)
            .map(|(x, m)| (x.clone(), m / x * &inv))
            .collect();
        let density = t
            .density()
            .div_t()
            .ok_or_else(|| Error::NotIntegrable(format!("density {} does not vanish at t = 0", t.density())))?
            .scale(&inv);
        terms.push((s.clone(), Measure1D::new_unchecked(atoms, density)));
    }
    Ok(Measure2D::new(terms))
}

/// Push-forward onto the first coordinate.
pub fn marginal_x(mu: &Measure2D) -> Measure1D {
    mu.terms()
        .iter()
        .fold(Measure1D::zero(), |acc, (s, t)| acc.add(&s.scale(&t.total_mass())))
}

/// Where `μ₁ ≤ μ₂` fails.
#[derive(Clone, Debug, PartialEq)]
pub enum LeqViolation {
    /// The atom of `μ₁` at `location` outweighs `μ₂`'s atom there.
    Atom { location: Scalar, lhs: Scalar, rhs: Scalar },
    /// `p₂ − p₁` is negative somewhere on `[0,1]`.
    Density,
}

/// First violation of `μ₁ ≤ μ₂`, or `None` if the inequality holds.
pub fn measure_leq_witness(mu1: &Measure1D, mu2: &Measure1D) -> Result<Option<LeqViolation>> {
    for (t, m) in mu1.atoms() {
        let other = mu2.atom_mass(t);
        if *m > other {
            return Ok(Some(LeqViolation::Atom {
                location: t.clone(),
                lhs: m.clone(),
                rhs: other,
            }));
        }
    }
    if !mu2.density().sub(mu1.density()).nonneg_01()? {
        return Ok(Some(LeqViolation::Density));
    }
    Ok(None)
}

/// `μ₁ ≤ μ₂` as measures. Exact values required.
pub fn measure_leq(mu1: &Measure1D, mu2: &Measure1D) -> Result<bool> {
    Ok(measure_leq_witness(mu1, mu2)?.is_none())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BackwardCondition {
    /// `1/t ∈ L¹(μ_M)`
    Integrable,
    /// `β₀₀² ≤ ‖1/t‖⁻¹`
    NormBound,
    /// `β₀₀²‖1/t‖ (μ_M)_ext^X ≤ ν`
    MeasureBound,
}

/// Comparisons reported when `β₀₀²‖1/t‖ = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct EqualityCase {
    pub measures_equal: bool,
    /// Moments of `(μ_M)_ext^X` and `ν` agree for orders `0..=20`.
    pub moments_equal: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BackwardExtension {
    pub subnormal: bool,
    pub failed_condition: Option<BackwardCondition>,
    pub violation: Option<LeqViolation>,
    pub one_over_t_norm: Option<Scalar>,
    /// `β₀₀²‖1/t‖ d(μ_M)_ext + [dν − β₀₀²‖1/t‖ d(μ_M)_ext^X] dδ₀(t)`
    pub constructed_mu: Option<Measure2D>,
    pub equality_case: Option<EqualityCase>,
}

impl BackwardExtension {
    fn failed(cond: BackwardCondition, norm: Option<Scalar>, violation: Option<LeqViolation>) -> Self {
        BackwardExtension {
            subnormal: false,
            failed_condition: Some(cond),
            violation,
            one_over_t_norm: norm,
            constructed_mu: None,
            equality_case: None,
        }
    }
}

/// Decides subnormality of the backward extension of a shift with Berger
/// measure `mu_m` (on the upper part) by a bottom row with Berger measure
/// `nu` and connecting weight `β₀₀²`.
pub fn backward_extension_check(mu_m: &Measure2D, nu: &Measure1D, beta00_sq: &Scalar) -> Result<BackwardExtension> {
    if mu_m.total_mass() != Scalar::one() {
        return Err(Error::InvalidParameter(format!(
            "mu_M has total mass {}, expected a probability measure",
            mu_m.total_mass()
        )));
    }
    let norm = match one_over_t_norm(mu_m) {
        Ok(n) => n,
        Err(Error::NotIntegrable(_)) => return Ok(BackwardExtension::failed(BackwardCondition::Integrable, None, None)),
        Err(e) => return Err(e),
    };
    let c = beta00_sq * &norm;
    if c > Scalar::one() {
        return Ok(BackwardExtension::failed(BackwardCondition::NormBound, Some(norm), None));
    }
    let ext = extremal_measure(mu_m)?;
    let lhs = marginal_x(&ext).scale(&c);
    if let Some(v) = measure_leq_witness(&lhs, nu)? {
        return Ok(BackwardExtension::failed(BackwardCondition::MeasureBound, Some(norm), Some(v)));
    }
    let remainder = nu.difference(&lhs);
    let mu = ext
        .scale(&c)
        .add(&Measure2D::product(remainder, Measure1D::point(Scalar::zero())));
    if mu.total_mass() != Scalar::one() {
        return Err(Error::InvalidParameter(format!(
            "constructed measure has total mass {}; nu must be a probability measure",
            mu.total_mass()
        )));
    }
    let equality_case = (c == Scalar::one()).then(|| {
        let marginal = marginal_x(&ext);
        EqualityCase {
            measures_equal: marginal == *nu,
            moments_equal: (0..=20).all(|k| marginal.moment(k) == nu.moment(k)),
        }
    });
    Ok(BackwardExtension {
        subnormal: true,
        failed_condition: None,
        violation: None,
        one_over_t_norm: Some(norm),
        constructed_mu: Some(mu),
        equality_case,
    })
}

/// `γ_{h+k}/γ_h` of a 1-variable shift: the moments of its restriction to `M_h`.
pub fn restricted_gamma(w: &WeightSeq1D, h: u32, k: u32) -> Scalar {
    gamma_1d(w, h + k) / gamma_1d(w, h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::gamma_2d;
    use crate::shifts::{builtin_1d_shift, family_figure2, x_sequence_sq};

    fn r(n: i64, d: i64) -> Scalar {
        Scalar::ratio(n, d)
    }

    #[test]
    fn moments_of_builtins() {
        for y2 in [r(1, 1), r(1, 2), r(2, 7)] {
            let mu = mu_x(&y2).unwrap();
            assert_eq!(mu.total_mass(), Scalar::one());
            for n in 1..20i64 {
                assert_eq!(mu.moment(n as u32), r(n + 2, 2 * (n + 1)) * &y2);
            }
        }
        let d1 = Measure1D::point(Scalar::one());
        assert!((0..30).all(|k| d1.moment(k) == Scalar::one()));
        let leb = Measure1D::lebesgue();
        assert!((0..30).all(|k| leb.moment(k) == r(1, k as i64 + 1)));
    }

    #[test]
    fn builtin_shapes() {
        let m = mu_x(&Scalar::one()).unwrap();
        let want = Measure1D::new(alloc::vec![(Scalar::one(), r(1, 2))], Poly::constant(r(1, 2))).unwrap();
        assert_eq!(m, want);
        let Measure::TwoVar(mm) = builtin_measure("mu_M", &[r(1, 2)]).unwrap() else {
            panic!("mu_M is two-variable");
        };
        let s = Measure1D::new(alloc::vec![(Scalar::zero(), r(1, 2)), (Scalar::one(), r(1, 2))], Poly::zero()).unwrap();
        assert_eq!(mm, Measure2D::product(s, Measure1D::point(Scalar::one())));
        assert!(builtin_measure("mu_x", &[r(3, 2)]).is_err());
        assert!(builtin_measure("mu_x", &[]).is_err());
        assert!(matches!(builtin_measure("bogus", &[]), Err(Error::UnknownName(_))));
    }

    #[test]
    fn berger_verification() {
        for y2 in [r(1, 1), r(1, 2), r(1, 3)] {
            assert!(verify_berger(&x_sequence_sq(&y2).unwrap(), &mu_x(&y2).unwrap(), 50));
        }
        let u = builtin_1d_shift("U_plus", &[]).unwrap();
        assert!(verify_berger(&u, &Measure1D::point(Scalar::one()), 50));
        let x = x_sequence_sq(&r(1, 2)).unwrap();
        assert!(!verify_berger(&x, &Measure1D::point(Scalar::one()), 1));
    }

    #[test]
    fn restriction() {
        let d1 = Measure1D::point(Scalar::one());
        assert_eq!(restrict_measure(&d1, 3, &Scalar::one()).unwrap(), d1);
        let leb = restrict_measure(&Measure1D::lebesgue(), 1, &r(1, 2)).unwrap();
        assert_eq!(leb.density(), &Poly::new(alloc::vec![Scalar::zero(), Scalar::int(2)]));
        assert_eq!(leb.total_mass(), Scalar::one());
        assert!(restrict_measure(&Measure1D::lebesgue(), 1, &Scalar::zero()).is_err());
        assert!(restrict_measure(&Measure1D::lebesgue(), 1, &r(1, 3)).is_err());
        let y2 = r(3, 5);
        let w = x_sequence_sq(&y2).unwrap();
        let xi = mu_x(&y2).unwrap();
        for h in 1..6 {
            let rest = restrict_measure(&xi, h, &gamma_1d(&w, h)).unwrap();
            assert_eq!(rest.total_mass(), Scalar::one());
            for k in 0..10 {
                assert_eq!(rest.moment(k), restricted_gamma(&w, h, k));
            }
        }
    }

    #[test]
    fn one_over_t() {
        assert_eq!(one_over_t_norm(&mu_m(&r(1, 2)).unwrap()).unwrap(), Scalar::one());
        let at_zero = Measure2D::product(Measure1D::point(Scalar::one()), Measure1D::point(Scalar::zero()));
        assert!(matches!(one_over_t_norm(&at_zero), Err(Error::NotIntegrable(_))));
        let dens = Measure1D::new(Vec::new(), Poly::monomial(Scalar::one(), 1)).unwrap();
        let m = Measure2D::product(Measure1D::point(Scalar::one()), dens);
        assert_eq!(one_over_t_norm(&m).unwrap(), Scalar::one());
        let leb = Measure2D::product(Measure1D::point(Scalar::one()), Measure1D::lebesgue());
        assert!(one_over_t_norm(&leb).is_err());
    }

    #[test]
    fn extremal() {
        let mm = mu_m(&r(1, 2)).unwrap();
        assert_eq!(extremal_measure(&mm).unwrap(), mm);
        let nu = mu_x(&r(1, 2)).unwrap();
        let m = Measure2D::product(nu, Measure1D::point(r(1, 2)));
        let ext = extremal_measure(&m).unwrap();
        assert_eq!(ext, m);
        assert_eq!(ext.total_mass(), Scalar::one());
        // t · ‖1/t‖ · μ_ext recovers μ away from t = 0
        let mixed = Measure2D::new(alloc::vec![
            (Measure1D::point(Scalar::one()).scale(&r(1, 3)), Measure1D::point(r(1, 4))),
            (
                Measure1D::lebesgue().scale(&r(2, 3)),
                Measure1D::new(Vec::new(), Poly::monomial(Scalar::int(2), 1)).unwrap()
            ),
        ]);
        let norm = one_over_t_norm(&mixed).unwrap();
        let ext = extremal_measure(&mixed).unwrap();
        assert_eq!(ext.total_mass(), Scalar::one());
        let back = ext.weight_t().scale(&norm);
        for k1 in 0..5 {
            for k2 in 0..5 {
                let key = MomentKey::new(k1, k2);
                assert_eq!(back.moment(key), mixed.without_t_zero_slice().moment(key));
            }
        }
    }

    #[test]
    fn marginals() {
        let a2 = r(1, 3);
        assert_eq!(marginal_x(&mu_m(&a2).unwrap()), s_a_measure(&a2).unwrap());
        let d = Measure2D::product(Measure1D::point(Scalar::zero()), Measure1D::point(Scalar::one()));
        assert_eq!(marginal_x(&d), Measure1D::point(Scalar::zero()));
        assert_eq!(marginal_x(&mu_m(&a2).unwrap()).total_mass(), Scalar::one());
    }

    #[test]
    fn ordering() {
        let m = mu_x(&r(1, 2)).unwrap();
        assert!(measure_leq(&m, &m).unwrap());
        assert!(!measure_leq(&Measure1D::point(r(1, 2)), &Measure1D::lebesgue()).unwrap());
        assert!(!measure_leq(&Measure1D::lebesgue(), &Measure1D::lebesgue().scale(&r(1, 2))).unwrap());
        // y²[(1−a²)δ₀ + a²δ₁] ≤ μ_x ⟺ y²(2 − a²) ≤ 1 (for a² ≤ 1/2)
        for (a2, y2, want) in [(r(1, 2), r(2, 3), true), (r(1, 2), r(7, 10), false), (r(1, 4), r(4, 7), true), (r(1, 4), r(3, 5), false)] {
            let lhs = s_a_measure(&a2).unwrap().scale(&y2);
            assert_eq!(measure_leq(&lhs, &mu_x(&y2).unwrap()).unwrap(), want);
        }
    }

    #[test]
    fn backward_extension_examples() {
        let (a2, y2) = (r(1, 2), r(3, 5));
        let res = backward_extension_check(&mu_m(&a2).unwrap(), &mu_x(&y2).unwrap(), &y2).unwrap();
        assert!(res.subnormal);
        let mu = res.constructed_mu.unwrap();
        assert_eq!(mu.total_mass(), Scalar::one());
        let f = family_figure2(&a2, &y2).unwrap();
        for k1 in 0..=12 {
            for k2 in 0..=12 {
                let key = MomentKey::new(k1, k2);
                assert_eq!(mu.moment(key), gamma_2d(&f, key));
            }
        }

        let y2 = r(7, 10);
        let res = backward_extension_check(&mu_m(&a2).unwrap(), &mu_x(&y2).unwrap(), &y2).unwrap();
        assert!(!res.subnormal);
        assert_eq!(res.failed_condition, Some(BackwardCondition::MeasureBound));
        assert!(matches!(res.violation, Some(LeqViolation::Atom { ref location, .. }) if location.is_zero()));

        let res = backward_extension_check(&mu_m(&a2).unwrap(), &mu_x(&Scalar::one()).unwrap(), &Scalar::int(2)).unwrap();
        assert_eq!(res.failed_condition, Some(BackwardCondition::NormBound));
    }

    #[test]
    fn equality_case_is_reported() {
        // β₀₀²‖1/t‖ = 1 with ν equal to the marginal
        let a2 = r(1, 3);
        let res = backward_extension_check(&mu_m(&a2).unwrap(), &s_a_measure(&a2).unwrap(), &Scalar::one()).unwrap();
        assert!(res.subnormal);
        assert_eq!(
            res.equality_case,
            Some(EqualityCase {
                measures_equal: true,
                moments_equal: true
            })
        );
    }
}
