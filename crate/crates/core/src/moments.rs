//! Moments of weighted shifts and the moment matrices built from them.
//!
//! Monomials `xⁱyʲ` of degree `≤ n` are ordered by degree, then by increasing
//! power of `y`: `1, x, y, x², yx, y², …`.

use alloc::vec::Vec;
use core::ops::Add;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;
use crate::shifts::{WeightField2D, WeightSeq1D};

/// A lattice point `(k₁, k₂) ∈ Z₊²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct MomentKey {
    pub k1: u32,
    pub k2: u32,
}

impl MomentKey {
    pub const ORIGIN: MomentKey = MomentKey { k1: 0, k2: 0 };

    pub const fn new(k1: u32, k2: u32) -> Self {
        MomentKey { k1, k2 }
    }

    pub fn degree(&self) -> u32 {
        self.k1 + self.k2
    }
}

impl Add for MomentKey {
    type Output = MomentKey;
    fn add(self, rhs: MomentKey) -> MomentKey {
        MomentKey::new(self.k1 + rhs.k1, self.k2 + rhs.k2)
    }
}

impl From<(u32, u32)> for MomentKey {
    fn from((k1, k2): (u32, u32)) -> Self {
        MomentKey::new(k1, k2)
    }
}

impl core::fmt::Display for MomentKey {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "({},{})", self.k1, self.k2)
    }
}

/// `γ_k(α) = α₀²⋯α²_{k−1}`, with `γ₀ = 1`.
pub fn gamma_1d(w: &WeightSeq1D, k: u32) -> Scalar {
    (0..k).map(|i| w.sq(i)).product()
}

/// `γ_k` of a 2-variable shift along the canonical path: east along the
/// bottom row to `(k₁, 0)`, then north.
pub fn gamma_2d(f: &WeightField2D, k: MomentKey) -> Scalar {
    if let Some(v) = f.cache().read().get(&k) {
        return v.clone();
    }
    let value = if k.k2 > 0 {
        gamma_2d(f, MomentKey::new(k.k1, k.k2 - 1)) * f.beta_sq(k.k1, k.k2 - 1)
    } else if k.k1 > 0 {
        gamma_2d(f, MomentKey::new(k.k1 - 1, 0)) * f.alpha_sq(k.k1 - 1, 0)
    } else {
        Scalar::one()
    };
    // Concurrent inserts of the same key store the same value.
    f.cache().write().entry(k).or_insert_with(|| value.clone());
    value
}

/// Product of squared weights along a monotone lattice path starting at the
/// origin. An empty path gives `1`.
pub fn gamma_via_path(f: &WeightField2D, path: &[MomentKey]) -> Result<Scalar> {
    let Some(first) = path.first() else {
        return Ok(Scalar::one());
    };
    if *first != MomentKey::ORIGIN {
        return Err(Error::InvalidPath(0));
    }
    let mut acc = Scalar::one();
    for (step, pair) in path.windows(2).enumerate() {
        let (from, to) = (pair[0], pair[1]);
        let w = if to == MomentKey::new(from.k1 + 1, from.k2) {
            f.alpha_sq(from.k1, from.k2)
        } else if to == MomentKey::new(from.k1, from.k2 + 1) {
            f.beta_sq(from.k1, from.k2)
        } else {
            return Err(Error::InvalidPath(step + 1));
        };
        acc = acc * w;
    }
    Ok(acc)
}

/// Position of `xⁱyʲ` among monomials of degree `≤ n`: `d(d+1)/2 + j` with `d = i + j`.
pub fn lex_index(i: u32, j: u32, n: u32) -> Result<usize> {
    let d = i + j;
    if d > n {
        return Err(Error::IndexOutOfRange { i, j, n });
    }
    Ok((d as usize * (d as usize + 1)) / 2 + j as usize)
}

/// Exponent pairs `(i, j)` with `i + j ≤ n`, in matrix order.
pub fn lex_pairs(n: u32) -> Vec<MomentKey> {
    let mut out = Vec::with_capacity(((n + 1) * (n + 2) / 2) as usize);
    for d in 0..=n {
        for j in 0..=d {
            out.push(MomentKey::new(d - j, j));
        }
    }
    out
}

/// `M_u(k)`: the symmetric matrix `(γ_{u+(m,n)+(p,q)})` over monomials of degree `≤ k`.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentMatrix {
    pub base: MomentKey,
    pub degree: u32,
    pub matrix: Matrix,
}

impl MomentMatrix {
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Entry at row `xᵃyᵇ`, column `xᶜyᵈ`.
    pub fn entry(&self, row: MomentKey, col: MomentKey) -> Result<&Scalar> {
        let r = lex_index(row.k1, row.k2, self.degree)?;
        let c = lex_index(col.k1, col.k2, self.degree)?;
        Ok(&self.matrix[(r, c)])
    }

    pub fn monomials(&self) -> Vec<MomentKey> {
        lex_pairs(self.degree)
    }
}

pub fn moment_matrix(f: &WeightField2D, u: MomentKey, k: u32) -> MomentMatrix {
    let idx = lex_pairs(k);
    // Every entry is γ at u + (a sum of two monomial exponents), so gather those once.
    let mut table = alloc::collections::BTreeMap::new();
    for a in 0..=2 * k {
        for b in 0..=(2 * k - a) {
            let key = MomentKey::new(a, b);
            table.insert(key, gamma_2d(f, u + key));
        }
    }
    let matrix = Matrix::from_fn(idx.len(), |r, c| table[&(idx[r] + idx[c])].clone());
    MomentMatrix {
        base: u,
        degree: k,
        matrix,
    }
}

/// The `(m−1)×(m−1)` form `γ_u γ_{u+a+b} − γ_{u+a} γ_{u+b}` over monomials
/// `a, b` of degree `1..=k`.
pub fn hypo_form_matrix(f: &WeightField2D, u: MomentKey, k: u32) -> Result<Matrix> {
    if k == 0 {
        return Err(Error::InvalidParameter("hypo_form_matrix needs k >= 1".into()));
    }
    let idx: Vec<MomentKey> = lex_pairs(k).into_iter().skip(1).collect();
    let gu = gamma_2d(f, u);
    Ok(Matrix::from_fn(idx.len(), |r, c| {
        let (a, b) = (idx[r], idx[c]);
        &gu * &gamma_2d(f, u + a + b) - gamma_2d(f, u + a) * gamma_2d(f, u + b)
    }))
}
