//! Anisotropic distance |x|_a, quasi-homogeneous dilations and the
//! associated boxes/balls in frequency space.
//!
//! The distance |x|_a is the unique t > 0 with sum_k x_k^2 / t^{2 a_k} = 1
//! (and |0|_a = 0). Its level sets are ellipsoids of varying eccentricity;
//! for a = (1,...,1) it reduces to the Euclidean norm.

use crate::error::{domain, Result};
use alloc::vec::Vec;

/// Normalization conventions for the weight vector.
///
/// The literature uses both `min_k a_k = 1` and `sum_k a_k = n`; conversions
/// between them rescale the smoothness parameter of any space built on top,
/// so they are always explicit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convention {
    MinOne,
    SumN,
    Raw,
}

/// Positive per-axis weights a_k fixing the dyadic scaling rate 2^{j a_k}.
#[derive(Debug, Clone, PartialEq)]
pub struct AnisotropyVector {
    a: Vec<f64>,
    convention: Convention,
}

const CONVENTION_TOL: f64 = 1e-12;

impl AnisotropyVector {
    pub fn new(a: Vec<f64>, convention: Convention) -> Result<Self> {
        if a.is_empty() {
            return Err(domain("anisotropy vector must be nonempty"));
        }
        if a.iter().any(|&w| !w.is_finite() || w <= 0.0) {
            return Err(domain("anisotropy weights must be positive and finite"));
        }
        let v = Self { a, convention };
        match convention {
            Convention::MinOne => {
                if (v.min_weight() - 1.0).abs() > CONVENTION_TOL {
                    return Err(domain("min_one convention requires min_k a_k = 1"));
                }
            }
            Convention::SumN => {
                let n = v.a.len() as f64;
                if (v.total() - n).abs() > CONVENTION_TOL {
                    return Err(domain("sum_n convention requires sum_k a_k = n"));
                }
            }
            Convention::Raw => {}
        }
        Ok(v)
    }

    /// Weights taken as-is, without a normalization claim.
    pub fn raw(a: Vec<f64>) -> Result<Self> {
        Self::new(a, Convention::Raw)
    }

    /// Isotropic vector (1, ..., 1) in n dimensions.
    pub fn isotropic(n: usize) -> Self {
        Self {
            a: alloc::vec![1.0; n],
            convention: Convention::MinOne,
        }
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.a
    }

    pub fn weight(&self, k: usize) -> f64 {
        self.a[k]
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    /// |a| = a_1 + ... + a_n.
    pub fn total(&self) -> f64 {
        self.a.iter().sum()
    }

    pub fn min_weight(&self) -> f64 {
        self.a.iter().fold(f64::INFINITY, |m, &w| m.min(w))
    }

    pub fn max_weight(&self) -> f64 {
        self.a.iter().fold(0.0f64, |m, &w| m.max(w))
    }

    /// Drop the axis `k`, keeping the remaining weights (the tangential
    /// anisotropy a' / a'' used by traces). The convention degrades to raw.
    pub fn drop_axis(&self, k: usize) -> Result<Self> {
        if k >= self.a.len() {
            return Err(domain("axis out of range"));
        }
        if self.a.len() == 1 {
            return Err(domain("cannot drop the only axis"));
        }
        let mut a = self.a.clone();
        a.remove(k);
        Self::raw(a)
    }

    /// Scale all weights by lambda > 0 (raw convention on the result).
    pub fn scale(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(domain("lambda must be positive"));
        }
        Self::raw(self.a.iter().map(|&w| lambda * w).collect())
    }
}

/// Axis-aligned frequency box given by per-axis halfwidths.
#[derive(Debug, Clone, PartialEq)]
pub struct AnisoBox {
    pub halfwidths: Vec<f64>,
}

impl AnisoBox {
    pub fn new(halfwidths: Vec<f64>) -> Result<Self> {
        if halfwidths.iter().any(|&b| !(b > 0.0) || !b.is_finite()) {
            return Err(domain("box halfwidths must be positive"));
        }
        Ok(Self { halfwidths })
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.halfwidths.len()
            && x.iter()
                .zip(&self.halfwidths)
                .all(|(&xi, &b)| xi.abs() <= b)
    }
}

/// Ball {y : |x - y|_a <= R} for the anisotropic distance.
#[derive(Debug, Clone, PartialEq)]
pub struct AnisoBall {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl AnisoBall {
    pub fn new(center: Vec<f64>, radius: f64) -> Result<Self> {
        if !(radius >= 0.0) || !radius.is_finite() {
            return Err(domain("ball radius must be nonnegative"));
        }
        Ok(Self { center, radius })
    }

    pub fn centered(dim: usize, radius: f64) -> Result<Self> {
        Self::new(alloc::vec![0.0; dim], radius)
    }

    pub fn contains(&self, a: &AnisotropyVector, x: &[f64]) -> Result<bool> {
        let diff: Vec<f64> = x.iter().zip(&self.center).map(|(&xi, &c)| xi - c).collect();
        Ok(aniso_distance(a, &diff)? <= self.radius)
    }
}

/// The quasi-homogeneous dilation t^a x = (t^{a_1} x_1, ..., t^{a_n} x_n).
pub fn aniso_dilate(t: f64, a: &AnisotropyVector, x: &[f64]) -> Result<Vec<f64>> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(domain("dilation parameter must be positive"));
    }
    if x.len() != a.dim() {
        return Err(domain("dimension mismatch"));
    }
    Ok(x.iter()
        .zip(a.weights())
        .map(|(&xi, &ak)| libm::pow(t, ak) * xi)
        .collect())
}

/// The anisotropic distance |x|_a: the unique t > 0 solving
/// sum_k x_k^2 / t^{2 a_k} = 1, with |0|_a = 0.
///
/// The root is bracketed by max_k |x_k|^{1/a_k} <= |x|_a <= sum_k |x_k|^{1/a_k};
/// for one or two distinct weight values related by a factor two the root is
/// closed-form, otherwise the bracket is bisected to 1e-13 relative width and
/// polished with one Newton step.
pub fn aniso_distance(a: &AnisotropyVector, x: &[f64]) -> Result<f64> {
    if x.len() != a.dim() {
        return Err(domain("dimension mismatch"));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(domain("non-finite input point"));
    }
    Ok(distance_unchecked(a.weights(), x))
}

/// Distance without the argument validation; used on hot grid paths.
pub(crate) fn distance_unchecked(a: &[f64], x: &[f64]) -> f64 {
    if x.iter().all(|&v| v == 0.0) {
        return 0.0;
    }

    // Single weight value: t^{2w} = sum x_k^2.
    let w0 = a[0];
    if a.iter().all(|&w| w == w0) {
        let s2: f64 = x.iter().map(|&v| v * v).sum();
        return if w0 == 1.0 {
            libm::sqrt(s2)
        } else {
            libm::pow(s2, 0.5 / w0)
        };
    }

    // Two weight values {w, 2w}: quadratic in u = t^{2w}.
    let mut lo_w = f64::INFINITY;
    let mut hi_w = 0.0f64;
    for &w in a {
        lo_w = lo_w.min(w);
        hi_w = hi_w.max(w);
    }
    if a.iter().all(|&w| w == lo_w || w == hi_w) && hi_w == 2.0 * lo_w {
        let mut s_lo = 0.0;
        let mut s_hi = 0.0;
        for (&w, &v) in a.iter().zip(x) {
            if w == lo_w {
                s_lo += v * v;
            } else {
                s_hi += v * v;
            }
        }
        // u^2 - s_lo u - s_hi = 0, u > 0
        let u = 0.5 * (s_lo + libm::sqrt(s_lo * s_lo + 4.0 * s_hi));
        return libm::pow(u, 0.5 / lo_w);
    }

    // General case: bracketed bisection plus one Newton polish.
    let mut lo = 0.0f64;
    let mut hi = 0.0f64;
    for (&w, &v) in a.iter().zip(x) {
        let m = libm::pow(v.abs(), 1.0 / w);
        lo = lo.max(m);
        hi += m;
    }
    debug_assert!(lo > 0.0 && hi >= lo);
    let g = |t: f64| -> f64 {
        let mut s = 0.0;
        for (&w, &v) in a.iter().zip(x) {
            s += v * v / libm::pow(t, 2.0 * w);
        }
        s - 1.0
    };
    // g is strictly decreasing on (0, inf) for x != 0, so the bracket is
    // valid: g(lo) >= 0 >= g(hi).
    while hi - lo > 1e-13 * hi {
        let mid = 0.5 * (lo + hi);
        if g(mid) >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t = 0.5 * (lo + hi);
    let mut gp = 0.0;
    for (&w, &v) in a.iter().zip(x) {
        gp += -2.0 * w * v * v / libm::pow(t, 2.0 * w + 1.0);
    }
    if gp != 0.0 {
        let polished = t - g(t) / gp;
        if polished >= lo && polished <= hi {
            return polished;
        }
    }
    t
}

/// Rescale the weights to a target convention.
///
/// Returns (lambda * a, lambda); the caller must rescale any smoothness
/// parameter s to lambda * s to stay in the same space.
pub fn normalize_anisotropy(
    a: &AnisotropyVector,
    target: Convention,
) -> (AnisotropyVector, f64) {
    let lambda = match target {
        Convention::MinOne => 1.0 / a.min_weight(),
        Convention::SumN => a.dim() as f64 / a.total(),
        Convention::Raw => 1.0,
    };
    let scaled: Vec<f64> = a.weights().iter().map(|&w| lambda * w).collect();
    let v = AnisotropyVector::new(scaled, target).unwrap_or_else(|_| {
        // Rounding can leave the convention check marginally off; rebuild raw.
        AnisotropyVector {
            a: a.weights().iter().map(|&w| lambda * w).collect(),
            convention: Convention::Raw,
        }
    });
    (v, lambda)
}
