//! The borderline counterexample family: tensor products
//! w_l = (prod_{p_k >= 1} f(x_k)) (x) g(2^{l a_m} x_m)
//!       (x) (prod_{p_k < 1} 2^{l a_k} f(2^{l a_k} x_k))
//! and their means v_j = (1/j) sum_{l=j+1}^{2j} w_l, whose B- and F-norms
//! obey exact power laws in j at the borderline smoothness.
//!
//! Every spectral factor of w_l lives where Phi_l = 1 and neighbouring
//! blocks vanish, so the dyadic blocks of v_j are the w_l themselves and all
//! quasi-norms factor into 1-D profile norms with the dilation factors
//! absorbed exactly (a sample identity on matched grids). That reduction is
//! what makes the j = 4..12 range computable: the joint grid that a direct
//! construction would need grows like 2^{2 j a}, while the factors live on
//! fixed 1-D reference grids. The full-grid construction is kept for small
//! j, where it cross-checks every identity the reduction uses.

use crate::aniso::AnisotropyVector;
use crate::error::{domain, CoreError, Result};
use crate::grid::{spectrum_from_transform, Grid, GridField, IndexIter};
use crate::norms::{mixed_lp_of_abs, mixed_lp_norm, sequence_lq, ExponentVector};
use crate::C64;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

/// Smooth even bump with value 1 at the origin, supported on (-1, 1).
fn bump_unit(s: f64) -> f64 {
    if s.abs() >= 1.0 {
        0.0
    } else {
        libm::exp(-s * s / (1.0 - s * s))
    }
}

/// A 1-D profile held as a closed-form Fourier transform plus a reference
/// grid on which its periodization and norms are evaluated.
#[derive(Debug, Clone)]
pub struct Profile {
    grid: Grid,
    values: GridField,
    /// Relative magnitude of the periodized samples at the torus boundary
    /// (Schwartz-tail diagnostic).
    pub boundary_tail: f64,
}

impl Profile {
    fn build(transform: impl Fn(f64) -> f64, half_period: f64, points: usize) -> Result<Self> {
        let grid = Grid::from_dims(&[(half_period, points)])?;
        let spec = spectrum_from_transform(&grid, |xi| C64::new(transform(xi[0]), 0.0));
        let values = spec.to_field(None);
        let max = values.max_abs();
        let boundary_tail = values.values()[0].norm() / max;
        Ok(Self {
            grid,
            values,
            boundary_tail,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn field(&self) -> &GridField {
        &self.values
    }

    /// L_p norm of the profile on its reference grid.
    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        mixed_lp_norm(&self.values, &ExponentVector::uniform(p, 1)?)
    }

    /// Value at the node x = 0.
    pub fn at_zero(&self) -> C64 {
        self.values.values()[self.grid.origin_index(0)]
    }

    /// Rectangle-rule integral over the torus (the zero-frequency mass).
    pub fn integral(&self) -> C64 {
        let sum: C64 = self.values.values().iter().sum();
        sum * self.grid.cell_volume()
    }
}

/// Which group a tangential axis belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisRole {
    /// The trace axis carrying the g-dilates.
    Normal,
    /// p_k >= 1: undilated f.
    GroupGe,
    /// p_k < 1: dilated f.
    GroupLt,
}

/// The counterexample family for one (axis, anisotropy, exponent) choice.
#[derive(Debug, Clone)]
pub struct CounterexampleFamily {
    pub axis_m: usize,
    pub a: AnisotropyVector,
    pub p: ExponentVector,
    pub j_lo: usize,
    pub j_hi: usize,
    /// Halfwidth of the f-band, (10 n)^{-a_0}.
    pub f_band: f64,
    /// Lower edge of the g-band, (8/10)^{a_m}.
    pub g_band_lo: f64,
    /// Normalization of F g enforcing g(0) = 1.
    g_scale: f64,
    f: Profile,
    g: Profile,
}

fn next_pow2(x: f64) -> usize {
    let mut n = 4usize;
    while (n as f64) < x {
        n *= 2;
    }
    n
}

/// Build the family with reference profiles sized so that the periodized
/// Schwartz tails sit below ~1e-9 of the peak.
pub fn build_counterexample_family(
    axis_m: usize,
    a: &AnisotropyVector,
    p: &ExponentVector,
    j_lo: usize,
    j_hi: usize,
) -> Result<CounterexampleFamily> {
    let n = a.dim();
    if p.dim() != n || axis_m >= n {
        return Err(domain("dimensions or trace axis out of range"));
    }
    if n < 2 {
        return Err(domain("the family needs at least two axes"));
    }
    if !(1 <= j_lo && j_lo <= j_hi) {
        return Err(domain("need 1 <= j_lo <= j_hi"));
    }
    if !p.get(axis_m).is_finite() {
        return Err(domain("p_m must be finite"));
    }
    let a0 = a.max_weight();
    let f_band = libm::pow(10.0 * n as f64, -a0);
    let a_m = a.weight(axis_m);
    let g_band_lo = libm::pow(0.8, a_m);

    // sqrt(band * L) ~ 29 puts the Gevrey-2 tails near 1e-12 of the peak.
    let l_f = next_pow2(850.0 / f_band) as f64;
    let n_f = next_pow2(2.0 * l_f * 8.0 * f_band / core::f64::consts::PI).max(1024);
    let f = Profile::build(|xi| bump_unit(xi / f_band), l_f, n_f)?;

    let g_half = 0.5 * (1.0 - g_band_lo);
    let g_mid = 0.5 * (1.0 + g_band_lo);
    // normalize so that (2 pi)^{-1} integral F g = 1, i.e. g(0) = 1
    let quad = 1 << 14;
    let mut mass = 0.0;
    for i in 0..quad {
        let xi = g_band_lo + (i as f64 + 0.5) / quad as f64 * (1.0 - g_band_lo);
        mass += bump_unit((xi - g_mid) / g_half);
    }
    mass *= 2.0 * (1.0 - g_band_lo) / quad as f64; // both signs of the band
    let g_scale = 2.0 * core::f64::consts::PI / mass;
    let l_g = next_pow2(850.0 / g_half) as f64;
    let n_g = next_pow2(2.0 * l_g * 4.0 / core::f64::consts::PI).max(1024);
    let g = Profile::build(
        |xi| g_scale * bump_unit((xi.abs() - g_mid) / g_half),
        l_g,
        n_g,
    )?;

    Ok(CounterexampleFamily {
        axis_m,
        a: a.clone(),
        p: p.clone(),
        j_lo,
        j_hi,
        f_band,
        g_band_lo,
        g_scale,
        f,
        g,
    })
}

impl CounterexampleFamily {
    pub fn f_profile(&self) -> &Profile {
        &self.f
    }

    pub fn g_profile(&self) -> &Profile {
        &self.g
    }

    pub fn role(&self, axis: usize) -> AxisRole {
        if axis == self.axis_m {
            AxisRole::Normal
        } else if self.p.get(axis) >= 1.0 {
            AxisRole::GroupGe
        } else {
            AxisRole::GroupLt
        }
    }

    /// Closed-form transform of the 1-D factor on `axis` at dilation level l.
    pub fn factor_transform(&self, axis: usize, l: usize, xi: f64) -> f64 {
        let al = libm::exp2(l as f64 * self.a.weight(axis));
        match self.role(axis) {
            AxisRole::Normal => {
                let g_half = 0.5 * (1.0 - self.g_band_lo);
                let g_mid = 0.5 * (1.0 + self.g_band_lo);
                // F[g(2^{l a_m} .)](xi) = 2^{-l a_m} F g(2^{-l a_m} xi)
                self.g_scale * bump_unit(((xi / al).abs() - g_mid) / g_half) / al
            }
            AxisRole::GroupGe => bump_unit(xi / self.f_band),
            // F[2^{l a_k} f(2^{l a_k} .)](xi) = F f(2^{-l a_k} xi)
            AxisRole::GroupLt => bump_unit(xi / al / self.f_band),
        }
    }

    /// |xi|_a range of the spectral support of w_l, from the per-axis bands
    /// (extremes of the monotone distance over the product box).
    pub fn support_radius_bounds(&self, l: usize) -> (f64, f64) {
        let n = self.a.dim();
        let al = libm::exp2(l as f64 * self.a.weight(self.axis_m));
        // minimum: only the g-band lower edge contributes
        let rmin = libm::pow(self.g_band_lo * al, 1.0 / self.a.weight(self.axis_m));
        // maximum: all-corners point
        let mut corner = vec![0.0; n];
        for k in 0..n {
            corner[k] = match self.role(k) {
                AxisRole::Normal => al,
                AxisRole::GroupGe => self.f_band,
                AxisRole::GroupLt => self.f_band * libm::exp2(l as f64 * self.a.weight(k)),
            };
        }
        let rmax = crate::aniso::distance_unchecked(self.a.weights(), &corner);
        (rmin, rmax)
    }

    /// ||w_l||_{L_pbar} assembled from 1-D reference norms with the dilation
    /// factors absorbed exactly.
    pub fn block_lp_norm(&self, l: usize, p: &ExponentVector) -> Result<f64> {
        if p.dim() != self.a.dim() {
            return Err(domain("exponent dimension mismatch"));
        }
        let mut value = 1.0f64;
        for k in 0..self.a.dim() {
            let pk = p.get(k);
            let al = l as f64 * self.a.weight(k);
            let inv_pk = if pk.is_finite() { 1.0 / pk } else { 0.0 };
            value *= match self.role(k) {
                AxisRole::Normal => libm::exp2(-al * inv_pk) * self.g.lp_norm(pk)?,
                AxisRole::GroupGe => self.f.lp_norm(pk)?,
                AxisRole::GroupLt => libm::exp2(al * (1.0 - inv_pk)) * self.f.lp_norm(pk)?,
            };
        }
        Ok(value)
    }

    /// || v_j ||_{B^{s,a}_{pbar,q}} through the factorized block norms.
    pub fn besov_norm(&self, j: usize, s: f64, q: f64) -> Result<f64> {
        if j < 1 {
            return Err(domain("j must be >= 1"));
        }
        let mut terms = Vec::with_capacity(j);
        for l in j + 1..=2 * j {
            let w = libm::exp2(s * l as f64);
            terms.push(w * self.block_lp_norm(l, &self.p)?);
        }
        Ok(sequence_lq(&terms, q) / j as f64)
    }

    /// || v_j ||_{F^{s,a}_{pbar,p_m}} for the second borderline case: the
    /// sum exponent equals p_m, every tangential p_k >= 1, and the collapsed
    /// l_q/L_p nesting factorizes again.
    pub fn f_norm_case2(&self, j: usize, s: f64) -> Result<f64> {
        let pm = self.p.get(self.axis_m);
        if !pm.is_finite() || pm <= 1.0 {
            return Err(CoreError::Unsupported(
                "case 2 requires 1 < p_m < infinity".into(),
            ));
        }
        for k in 0..self.a.dim() {
            if k != self.axis_m && self.p.get(k) < 1.0 {
                return Err(CoreError::Unsupported(
                    "case 2 requires p_k >= 1 on the tangential axes".into(),
                ));
            }
        }
        let mut tangential = 1.0;
        for k in 0..self.a.dim() {
            if k != self.axis_m {
                tangential *= self.f.lp_norm(self.p.get(k))?;
            }
        }
        let a_m = self.a.weight(self.axis_m);
        let gp = self.g.lp_norm(pm)?;
        let mut sum = 0.0;
        for l in j + 1..=2 * j {
            // 2^{s l p_m} integral |g(2^{l a_m} x)|^{p_m} dx
            sum += libm::exp2(s * l as f64 * pm - l as f64 * a_m) * libm::pow(gp, pm);
        }
        Ok(tangential * libm::pow(sum, 1.0 / pm) / j as f64)
    }

    /// The borderline smoothness a_m/p_m + sum_{k != m} (a_k/p_k - a_k)_+.
    pub fn borderline_s(&self) -> f64 {
        let mut s = self.a.weight(self.axis_m) / self.p.get(self.axis_m);
        for k in 0..self.a.dim() {
            if k != self.axis_m {
                let v = self.a.weight(k) / self.p.get(k) - self.a.weight(k);
                if v > 0.0 {
                    s += v;
                }
            }
        }
        s
    }

    fn check_resolution(&self, grid: &Grid, j: usize) -> Result<()> {
        let n = self.a.dim();
        if grid.dim() != n {
            return Err(domain("grid dimension mismatch"));
        }
        for k in 0..n {
            let need = match self.role(k) {
                AxisRole::Normal => libm::exp2(2.0 * j as f64 * self.a.weight(k)),
                AxisRole::GroupGe => 4.0 * self.f_band,
                AxisRole::GroupLt => {
                    self.f_band * libm::exp2(2.0 * j as f64 * self.a.weight(k)) * 2.0
                }
            };
            if grid.nyquist(k) <= need {
                let min_n =
                    (2.0 * grid.half_period(k) * need * 1.1 / core::f64::consts::PI) as usize;
                return Err(CoreError::Resolution(format!(
                    "axis {k} Nyquist {:.2} below the required {need:.2}; need N_{k} >= {}",
                    grid.nyquist(k),
                    min_n.next_power_of_two()
                )));
            }
        }
        Ok(())
    }

    /// Sample w_l on a joint grid (spectral per-axis factors, outer product).
    pub fn build_w_l(&self, grid: &Grid, l: usize) -> Result<GridField> {
        self.check_resolution(grid, l.div_ceil(2))?;
        let n = grid.dim();
        let mut factors: Vec<Vec<C64>> = Vec::with_capacity(n);
        for k in 0..n {
            let sub = Grid::from_dims(&[(grid.half_period(k), grid.points(k))])?;
            let spec = spectrum_from_transform(&sub, |xi| {
                C64::new(self.factor_transform(k, l, xi[0]), 0.0)
            });
            factors.push(spec.to_field(None).values().to_vec());
        }
        let mut values = Vec::with_capacity(grid.len());
        let mut iter = IndexIter::new(grid);
        while let Some(idx) = iter.next_index() {
            let mut v = C64::new(1.0, 0.0);
            for (k, &i) in idx.iter().enumerate() {
                v *= factors[k][i];
            }
            values.push(v);
        }
        GridField::from_values(grid.clone(), values)
    }

    /// v_j = (1/j) sum_{l=j+1}^{2j} w_l on a joint grid.
    pub fn build_v_j(&self, grid: &Grid, j: usize) -> Result<GridField> {
        self.check_resolution(grid, j)?;
        let mut acc = GridField::zeros(grid.clone());
        for l in j + 1..=2 * j {
            acc = acc.add(&self.build_w_l(grid, l)?)?;
        }
        Ok(acc.scale(C64::new(1.0 / j as f64, 0.0)))
    }

    /// Direct mixed norm of w_l on a joint grid (the cross-check target for
    /// `block_lp_norm`).
    pub fn grid_block_lp_norm(&self, grid: &Grid, l: usize) -> Result<f64> {
        let w = self.build_w_l(grid, l)?;
        let data: Vec<f64> = w.values().iter().map(|c| c.norm()).collect();
        Ok(mixed_lp_of_abs(data, grid, &self.p))
    }
}

/// Least-squares fit of log(norm) against log(j).
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual in log space.
    pub residual: f64,
}

pub fn fit_asymptotics(js: &[f64], norms: &[f64]) -> Result<AsymptoticFit> {
    if js.len() != norms.len() || js.len() < 4 {
        return Err(domain("need at least 4 matching (j, norm) samples"));
    }
    if norms.iter().any(|&v| !(v > 0.0)) || js.iter().any(|&v| !(v > 0.0)) {
        return Err(domain("norms and j values must be positive"));
    }
    let xs: Vec<f64> = js.iter().map(|&v| libm::log(v)).collect();
    let ys: Vec<f64> = norms.iter().map(|&v| libm::log(v)).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|&x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(&x, &y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let mut rss = 0.0;
    for (&x, &y) in xs.iter().zip(&ys) {
        let e = y - (intercept + slope * x);
        rss += e * e;
    }
    Ok(AsymptoticFit {
        slope,
        intercept,
        residual: libm::sqrt(rss / n),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::restrict_hyperplane;
    use crate::lp::psi_profile;

    fn family_2d(p: (f64, f64), j_hi: usize) -> CounterexampleFamily {
        let a = AnisotropyVector::isotropic(2);
        let p = ExponentVector::new(vec![p.0, p.1]).unwrap();
        build_counterexample_family(1, &a, &p, 4, j_hi).unwrap()
    }

    #[test]
    fn profile_normalizations() {
        let fam = family_2d((2.0, 2.0), 12);
        // integral f = F f(0) = 1, exact through the DC coefficient
        let int_f = fam.f_profile().integral();
        assert!((int_f.re - 1.0).abs() < 1e-9 && int_f.im.abs() < 1e-12);
        // g(0) = 1 up to the periodization tail
        let g0 = fam.g_profile().at_zero();
        assert!((g0.re - 1.0).abs() < 1e-9, "g(0) = {}", g0.re);
        // Schwartz tails below 1e-9 at the torus boundary
        assert!(fam.f_profile().boundary_tail < 1e-9);
        assert!(fam.g_profile().boundary_tail < 1e-9);
    }

    #[test]
    fn blocks_sit_on_their_plateau() {
        let fam = family_2d((2.0, 0.5), 12);
        for l in 5..=24 {
            let (rmin, rmax) = fam.support_radius_bounds(l);
            let scale = libm::exp2(-(l as f64));
            assert!(rmin * scale >= 0.7 - 1e-12, "l={l}: rmin {}", rmin * scale);
            assert!(rmax * scale < 1.1, "l={l}: rmax {}", rmax * scale);
            // Phi_l = 1 on the whole support, neighbours vanish
            for t in [rmin, 0.5 * (rmin + rmax), rmax] {
                let phi_l = psi_profile(t * scale) - psi_profile(t * scale * 2.0);
                assert!((phi_l - 1.0).abs() < 1e-15);
                let phi_lm = psi_profile(t * scale * 2.0) - psi_profile(t * scale * 4.0);
                let phi_lp = psi_profile(t * scale * 0.5) - psi_profile(t * scale);
                assert!(phi_lm == 0.0 && phi_lp == 0.0);
            }
        }
    }

    #[test]
    fn dilation_absorption_is_a_sample_identity() {
        // || 2^{l a} f(2^{l a} .) ||_{L_p} on the 2^{-l a}-dilated grid equals
        // 2^{l a (1 - 1/p)} || f ||_{L_p} exactly: the samples coincide.
        let fam = family_2d((2.0, 2.0), 12);
        let base = fam.f_profile();
        for l in [1usize, 3] {
            let al = libm::exp2(l as f64);
            let dil_grid = Grid::from_dims(&[(
                base.grid().half_period(0) / al,
                base.grid().points(0),
            )])
            .unwrap();
            let dil = spectrum_from_transform(&dil_grid, |xi| {
                C64::new(bump_unit(xi[0] / al / fam.f_band), 0.0)
            })
            .to_field(None);
            for p in [0.5, 1.0, 2.0] {
                let lhs = mixed_lp_norm(&dil, &ExponentVector::uniform(p, 1).unwrap()).unwrap();
                let rhs = libm::exp2(l as f64 * (1.0 - 1.0 / p)) * base.lp_norm(p).unwrap();
                assert!(
                    (lhs - rhs).abs() < 1e-12 * rhs,
                    "l={l} p={p}: {lhs} vs {rhs}"
                );
            }
        }
    }

    #[test]
    fn factorized_block_norm_matches_full_grid() {
        // n = 2, trace axis 1 (outer), tangential p >= 1: the joint grid at
        // l = 5, 6 is affordable and the tensor norm must match within the
        // periodization slack.
        let fam = family_2d((1.5, 2.0), 12);
        let grid = Grid::from_dims(&[(2048.0, 1024), (64.0, 4096)]).unwrap();
        for l in [5usize, 6] {
            let direct = fam.grid_block_lp_norm(&grid, l).unwrap();
            let fact = fam.block_lp_norm(l, &fam.p).unwrap();
            let rel = (direct - fact).abs() / fact;
            assert!(rel < 0.02, "l={l}: direct {direct}, factorized {fact}, rel {rel}");
        }
    }

    #[test]
    fn besov_norm_of_v_j_matches_full_grid() {
        let fam = family_2d((1.5, 2.0), 12);
        let grid = Grid::from_dims(&[(2048.0, 1024), (64.0, 4096)]).unwrap();
        let j = 3usize;
        let s = fam.borderline_s();
        let q = 2.0;
        // blocks of v_j are the w_l / j themselves; sum their norms directly
        let mut terms = Vec::new();
        for l in j + 1..=2 * j {
            let w = fam.build_w_l(&grid, l).unwrap();
            let data: Vec<f64> = w.values().iter().map(|c| c.norm()).collect();
            terms.push(libm::exp2(s * l as f64) * mixed_lp_of_abs(data, &grid, &fam.p));
        }
        let direct = sequence_lq(&terms, q) / j as f64;
        let fact = fam.besov_norm(j, s, q).unwrap();
        let rel = (direct - fact).abs() / fact;
        assert!(rel < 0.02, "direct {direct}, factorized {fact}, rel {rel}");
    }

    #[test]
    fn borderline_slopes_match_the_lemma() {
        // case 1: slope 1/q - 1 at the borderline, any q
        let fam = family_2d((2.0, 2.0), 12);
        let s = fam.borderline_s();
        let js: Vec<f64> = (4..=12).map(|j| j as f64).collect();
        for (q, want) in [(1.0, 0.0), (2.0, -0.5), (8.0, 1.0 / 8.0 - 1.0)] {
            let norms: Vec<f64> = (4..=12)
                .map(|j| fam.besov_norm(j, s, q).unwrap())
                .collect();
            let fit = fit_asymptotics(&js, &norms).unwrap();
            assert!(
                (fit.slope - want).abs() < 0.05,
                "q={q}: slope {} want {want}",
                fit.slope
            );
            assert!(fit.residual < 1e-10);
        }

        // case 2: slope 1/p_m - 1 in the F-norm with q = p_m
        for pm in [2.0, 3.0] {
            let fam = family_2d((2.0, pm), 12);
            let s = fam.a.weight(1) / pm;
            let norms: Vec<f64> = (4..=12)
                .map(|j| fam.f_norm_case2(j, s).unwrap())
                .collect();
            let fit = fit_asymptotics(&js, &norms).unwrap();
            let want = 1.0 / pm - 1.0;
            assert!(
                (fit.slope - want).abs() < 0.05,
                "p_m={pm}: slope {} want {want}",
                fit.slope
            );
        }
    }

    #[test]
    fn below_borderline_ratio_grows() {
        // gamma_{0,m} v_j stays put while || v_j ||_{B^{s}} shrinks when s is
        // strictly below the borderline.
        let fam = family_2d((2.0, 2.0), 12);
        let s = fam.borderline_s() - 0.25;
        let mut prev = 0.0;
        for j in 4..=12 {
            let ratio = 1.0 / fam.besov_norm(j, s, 2.0).unwrap();
            assert!(ratio > prev, "ratio not growing at j={j}");
            prev = ratio;
        }
    }

    #[test]
    fn slice_of_v_j_is_the_f_tensor() {
        // empty x_<: gamma_{0,m} v_j = prod f exactly (g(0) = 1 for every l)
        let fam = family_2d((1.5, 2.0), 12);
        let grid = Grid::from_dims(&[(2048.0, 1024), (64.0, 4096)]).unwrap();
        let v = fam.build_v_j(&grid, 3).unwrap();
        let slice = restrict_hyperplane(&v, 1, grid.origin_index(1)).unwrap();
        // expected: the f profile periodized on the tangential sub-grid
        let sub = grid.drop_axis(1).unwrap();
        let want = spectrum_from_transform(&sub, |xi| {
            C64::new(bump_unit(xi[0] / fam.f_band), 0.0)
        })
        .to_field(None);
        let err = slice.sub(&want).unwrap().l2_norm() / want.l2_norm();
        assert!(err < 1e-6, "slice differs from f tensor: {err}");
    }

    #[test]
    fn resolution_errors_prescribe_grids() {
        let fam = family_2d((2.0, 2.0), 12);
        let grid = Grid::from_dims(&[(2048.0, 1024), (64.0, 256)]).unwrap();
        match fam.build_v_j(&grid, 6) {
            Err(CoreError::Resolution(msg)) => assert!(msg.contains("N_1 >=")),
            other => panic!("expected a resolution error, got {other:?}"),
        }
    }

    #[test]
    fn fit_input_validation() {
        assert!(fit_asymptotics(&[1.0, 2.0, 3.0], &[1.0, 1.0, 1.0]).is_err());
        assert!(fit_asymptotics(&[1.0, 2.0, 3.0, 4.0], &[1.0, -1.0, 1.0, 1.0]).is_err());
        let fit = fit_asymptotics(
            &[4.0, 5.0, 6.0, 7.0],
            &[16.0, 25.0, 36.0, 49.0],
        )
        .unwrap();
        assert!((fit.slope - 2.0).abs() < 1e-12 && fit.residual < 1e-12);
    }
}
