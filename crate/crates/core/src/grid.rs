//! Discrete periodic representation of functions on R^n.
//!
//! A `Grid` is a uniform product grid on the torus [-L_1, L_1) x ... x
//! [-L_n, L_n) with a power-of-two point count per axis; fields are complex
//! samples at the nodes. Frequencies are the standard discrete set
//! m * pi / L_k with m in [-N_k/2, N_k/2); band-limited fields are
//! represented exactly, and all spectral manipulation happens on the natural
//! FFT-ordered coefficient array.

use crate::aniso::{AnisoBall, AnisoBox, AnisotropyVector};
use crate::error::{domain, CoreError, Result};
use crate::fft::FftPlan;
use crate::C64;
use alloc::vec;
use alloc::vec::Vec;

#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    /// Half-period L (the axis covers [-L, L)).
    pub half_period: f64,
    /// Number of nodes N (a power of two, N >= 4).
    pub points: usize,
}

/// Uniform periodic grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    axes: Vec<Axis>,
}

impl Grid {
    pub fn new(axes: Vec<Axis>) -> Result<Self> {
        if axes.is_empty() {
            return Err(domain("grid must have at least one axis"));
        }
        for ax in &axes {
            if !(ax.half_period > 0.0) || !ax.half_period.is_finite() {
                return Err(domain("half-period must be positive and finite"));
            }
            if ax.points < 4 || !ax.points.is_power_of_two() {
                return Err(domain("points per axis must be a power of two >= 4"));
            }
        }
        Ok(Self { axes })
    }

    /// Convenience constructor from (L, N) pairs.
    pub fn from_dims(dims: &[(f64, usize)]) -> Result<Self> {
        Self::new(
            dims.iter()
                .map(|&(l, n)| Axis {
                    half_period: l,
                    points: n,
                })
                .collect(),
        )
    }

    /// Same point count N and half-period L on every axis.
    pub fn cubic(n_axes: usize, half_period: f64, points: usize) -> Result<Self> {
        Self::from_dims(&vec![(half_period, points); n_axes])
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn points(&self, axis: usize) -> usize {
        self.axes[axis].points
    }

    pub fn half_period(&self, axis: usize) -> f64 {
        self.axes[axis].half_period
    }

    /// Node spacing Delta_k = 2 L_k / N_k.
    pub fn spacing(&self, axis: usize) -> f64 {
        2.0 * self.axes[axis].half_period / self.axes[axis].points as f64
    }

    /// Nyquist frequency pi N_k / (2 L_k).
    pub fn nyquist(&self, axis: usize) -> f64 {
        core::f64::consts::PI * self.axes[axis].points as f64
            / (2.0 * self.axes[axis].half_period)
    }

    /// Total number of nodes.
    pub fn len(&self) -> usize {
        self.axes.iter().map(|ax| ax.points).product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Volume of one grid cell, prod_k Delta_k.
    pub fn cell_volume(&self) -> f64 {
        (0..self.dim()).map(|k| self.spacing(k)).product()
    }

    /// Node coordinate along an axis: x_i = -L + i Delta.
    pub fn node(&self, axis: usize, i: usize) -> f64 {
        -self.axes[axis].half_period + i as f64 * self.spacing(axis)
    }

    /// Frequency in natural FFT order: index i maps to the wavenumber
    /// m pi / L with m = i for i < N/2 and m = i - N otherwise.
    pub fn freq(&self, axis: usize, i: usize) -> f64 {
        let n = self.axes[axis].points;
        let m = if i < n / 2 {
            i as i64
        } else {
            i as i64 - n as i64
        };
        m as f64 * core::f64::consts::PI / self.axes[axis].half_period
    }

    /// Row-major strides (axis 0 slowest).
    pub fn strides(&self) -> Vec<usize> {
        let n = self.dim();
        let mut s = vec![1usize; n];
        for k in (0..n.saturating_sub(1)).rev() {
            s[k] = s[k + 1] * self.axes[k + 1].points;
        }
        s
    }

    /// Flat index of a multi-index.
    pub fn flat(&self, idx: &[usize]) -> usize {
        let strides = self.strides();
        idx.iter().zip(&strides).map(|(&i, &s)| i * s).sum()
    }

    /// Index of the node at coordinate 0 along an axis (exact: N/2).
    pub fn origin_index(&self, axis: usize) -> usize {
        self.axes[axis].points / 2
    }

    /// Drop one axis, keeping the others.
    pub fn drop_axis(&self, axis: usize) -> Result<Grid> {
        if axis >= self.dim() {
            return Err(domain("axis out of range"));
        }
        if self.dim() == 1 {
            return Err(domain("cannot drop the only axis of a grid"));
        }
        let mut axes = self.axes.clone();
        axes.remove(axis);
        Grid::new(axes)
    }

    /// |xi|_a at every frequency node, in flat FFT order.
    ///
    /// This table is the workhorse behind every radial multiplier; it is
    /// computed once per (grid, anisotropy) pair and shared.
    pub fn freq_radii(&self, a: &AnisotropyVector) -> Result<Vec<f64>> {
        if a.dim() != self.dim() {
            return Err(domain("anisotropy dimension does not match grid"));
        }
        let total = self.len();
        let mut out = Vec::with_capacity(total);
        let mut iter = IndexIter::new(self);
        let mut xi = vec![0.0f64; self.dim()];
        while let Some(idx) = iter.next_index() {
            for (k, v) in xi.iter_mut().enumerate() {
                *v = self.freq(k, idx[k]);
            }
            out.push(crate::aniso::distance_unchecked(a.weights(), &xi));
        }
        Ok(out)
    }
}

/// Odometer over the multi-indices of a grid in flat (row-major) order.
pub struct IndexIter<'g> {
    grid: &'g Grid,
    idx: Vec<usize>,
    started: bool,
    done: bool,
}

impl<'g> IndexIter<'g> {
    pub fn new(grid: &'g Grid) -> Self {
        Self {
            grid,
            idx: vec![0; grid.dim()],
            started: false,
            done: false,
        }
    }

    /// Advance to the next multi-index; returns None when exhausted.
    pub fn next_index(&mut self) -> Option<&[usize]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.idx);
        }
        let n = self.idx.len();
        for k in (0..n).rev() {
            self.idx[k] += 1;
            if self.idx[k] < self.grid.points(k) {
                return Some(&self.idx);
            }
            self.idx[k] = 0;
        }
        self.done = true;
        None
    }
}

/// Spectral-support certificate carried by a field: every coefficient
/// outside the certified set has magnitude <= 1e-10 times the largest one.
#[derive(Debug, Clone, PartialEq)]
pub enum SupportCert {
    /// Axis-aligned frequency box.
    Box(AnisoBox),
    /// Anisotropic ball (in |.|_a for the stored weights).
    Ball(AnisotropyVector, AnisoBall),
}

/// Tight axis-aligned bound on the active spectrum (halfwidths may be zero).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralBox {
    pub halfwidths: Vec<f64>,
}

/// Result of a spectral-support scan.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSupport {
    pub bounds: SpectralBox,
    pub radius_min: f64,
    pub radius_max: f64,
}

/// Complex samples on a grid, with an optional spectral certificate.
#[derive(Debug, Clone)]
pub struct GridField {
    grid: Grid,
    values: Vec<C64>,
    support_cert: Option<SupportCert>,
}

impl GridField {
    pub fn from_values(grid: Grid, values: Vec<C64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(domain("value array does not match grid size"));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(domain("field values must be finite"));
        }
        Ok(Self {
            grid,
            values,
            support_cert: None,
        })
    }

    pub fn zeros(grid: Grid) -> Self {
        let n = grid.len();
        Self {
            grid,
            values: vec![C64::new(0.0, 0.0); n],
            support_cert: None,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn support_cert(&self) -> Option<&SupportCert> {
        self.support_cert.as_ref()
    }

    pub fn with_cert(mut self, cert: Option<SupportCert>) -> Self {
        self.support_cert = cert;
        self
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Grid L2 norm (rectangle rule).
    pub fn l2_norm(&self) -> f64 {
        let s: f64 = self.values.iter().map(|v| v.norm_sqr()).sum();
        libm::sqrt(s * self.grid.cell_volume())
    }

    pub fn add(&self, other: &GridField) -> Result<GridField> {
        if self.grid != other.grid {
            return Err(CoreError::GridMismatch);
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a + b)
            .collect();
        Ok(GridField {
            grid: self.grid.clone(),
            values,
            support_cert: merge_certs(&self.support_cert, &other.support_cert),
        })
    }

    pub fn sub(&self, other: &GridField) -> Result<GridField> {
        if self.grid != other.grid {
            return Err(CoreError::GridMismatch);
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a - b)
            .collect();
        Ok(GridField {
            grid: self.grid.clone(),
            values,
            support_cert: merge_certs(&self.support_cert, &other.support_cert),
        })
    }

    pub fn scale(&self, c: C64) -> GridField {
        GridField {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
            support_cert: self.support_cert.clone(),
        }
    }

    /// Forward transform into a coefficient array.
    pub fn to_spectrum(&self) -> Spectrum {
        let mut coef = self.values.clone();
        transform_axes(&mut coef, &self.grid, true);
        Spectrum {
            grid: self.grid.clone(),
            coef,
        }
    }

    /// Check the certificate invariant; returns the worst relative leakage
    /// outside the certified set (0 when no certificate is present).
    pub fn certificate_leakage(&self) -> Result<f64> {
        let Some(cert) = &self.support_cert else {
            return Ok(0.0);
        };
        let spec = self.to_spectrum();
        let max = spec.coef.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if max == 0.0 {
            return Ok(0.0);
        }
        let mut worst = 0.0f64;
        let mut iter = IndexIter::new(&self.grid);
        let mut xi = vec![0.0; self.grid.dim()];
        let mut flat = 0usize;
        while let Some(idx) = iter.next_index() {
            for (k, v) in xi.iter_mut().enumerate() {
                *v = self.grid.freq(k, idx[k]);
            }
            let inside = match cert {
                SupportCert::Box(b) => b.contains(&xi),
                SupportCert::Ball(a, ball) => ball.contains(a, &xi)?,
            };
            if !inside {
                worst = worst.max(spec.coef[flat].norm() / max);
            }
            flat += 1;
        }
        Ok(worst)
    }
}

fn merge_certs(a: &Option<SupportCert>, b: &Option<SupportCert>) -> Option<SupportCert> {
    match (a, b) {
        (Some(SupportCert::Ball(wa, ba)), Some(SupportCert::Ball(wb, bb)))
            if wa == wb && ba.center == bb.center =>
        {
            Some(SupportCert::Ball(
                wa.clone(),
                AnisoBall {
                    center: ba.center.clone(),
                    radius: ba.radius.max(bb.radius),
                },
            ))
        }
        (Some(SupportCert::Box(ba)), Some(SupportCert::Box(bb)))
            if ba.halfwidths.len() == bb.halfwidths.len() =>
        {
            Some(SupportCert::Box(AnisoBox {
                halfwidths: ba
                    .halfwidths
                    .iter()
                    .zip(&bb.halfwidths)
                    .map(|(&x, &y)| x.max(y))
                    .collect(),
            }))
        }
        _ => None,
    }
}

/// Coefficient array in natural FFT order.
pub struct Spectrum {
    grid: Grid,
    coef: Vec<C64>,
}

impl Spectrum {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn coef(&self) -> &[C64] {
        &self.coef
    }

    pub fn coef_mut(&mut self) -> &mut [C64] {
        &mut self.coef
    }

    pub fn zeros(grid: Grid) -> Self {
        let n = grid.len();
        Self {
            grid,
            coef: vec![C64::new(0.0, 0.0); n],
        }
    }

    /// Inverse transform back to samples.
    pub fn to_field(&self, cert: Option<SupportCert>) -> GridField {
        let mut values = self.coef.clone();
        transform_axes(&mut values, &self.grid, false);
        GridField {
            grid: self.grid.clone(),
            values,
            support_cert: cert,
        }
    }

    /// Apply f(frequency vector, coefficient) to every coefficient.
    pub fn map_with_freq(&mut self, mut f: impl FnMut(&[f64], C64) -> C64) {
        let grid = self.grid.clone();
        let mut iter = IndexIter::new(&grid);
        let mut xi = vec![0.0; grid.dim()];
        let mut flat = 0usize;
        while let Some(idx) = iter.next_index() {
            for (k, v) in xi.iter_mut().enumerate() {
                *v = grid.freq(k, idx[k]);
            }
            self.coef[flat] = f(&xi, self.coef[flat]);
            flat += 1;
        }
    }
}

/// Build the coefficient array of a field whose continuum Fourier transform
/// is `transform`: coef = transform(xi) / cellvol, times the phase
/// (-1)^{sum of indices} that accounts for the nodes starting at -L rather
/// than 0. Inverse-transforming the result samples the periodization of the
/// continuum function.
pub fn spectrum_from_transform<F>(grid: &Grid, transform: F) -> Spectrum
where
    F: Fn(&[f64]) -> C64,
{
    let mut spec = Spectrum::zeros(grid.clone());
    let cellvol = grid.cell_volume();
    let mut iter = IndexIter::new(grid);
    let mut xi = vec![0.0; grid.dim()];
    let mut flat = 0usize;
    while let Some(idx) = iter.next_index() {
        let mut parity = 0usize;
        for (k, v) in xi.iter_mut().enumerate() {
            *v = grid.freq(k, idx[k]);
            parity += idx[k];
        }
        let sign = if parity % 2 == 0 { 1.0 } else { -1.0 };
        spec.coef[flat] = transform(&xi) * (sign / cellvol);
        flat += 1;
    }
    spec
}

fn transform_axes(values: &mut [C64], grid: &Grid, forward: bool) {
    let n = grid.dim();
    let strides = grid.strides();
    for axis in 0..n {
        let len = grid.points(axis);
        let stride = strides[axis];
        let plan = FftPlan::new(len);
        let block = len * stride;
        let outer_count = values.len() / block;
        let mut line = vec![C64::new(0.0, 0.0); len];
        for outer in 0..outer_count {
            let base_outer = outer * block;
            for inner in 0..stride {
                let base = base_outer + inner;
                for (t, v) in line.iter_mut().enumerate() {
                    *v = values[base + t * stride];
                }
                if forward {
                    plan.forward(&mut line);
                } else {
                    plan.inverse(&mut line);
                }
                for (t, v) in line.iter().enumerate() {
                    values[base + t * stride] = *v;
                }
            }
        }
    }
}

/// Sample a pointwise rule at the grid nodes.
pub fn sample<F>(grid: &Grid, rule: F) -> Result<GridField>
where
    F: Fn(&[f64]) -> C64,
{
    let mut values = Vec::with_capacity(grid.len());
    let mut iter = IndexIter::new(grid);
    let mut x = vec![0.0f64; grid.dim()];
    while let Some(idx) = iter.next_index() {
        for (k, v) in x.iter_mut().enumerate() {
            *v = grid.node(k, idx[k]);
        }
        let v = rule(&x);
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(domain("rule produced a non-finite value"));
        }
        values.push(v);
    }
    Ok(GridField {
        grid: grid.clone(),
        values,
        support_cert: None,
    })
}

/// Multiply the spectrum pointwise by a symbol evaluated at grid frequencies.
///
/// `declared_support`, when given, certifies {symbol != 0}; the output keeps
/// the tighter of it and the input certificate.
pub fn fourier_multiplier<F>(
    symbol: F,
    u: &GridField,
    declared_support: Option<SupportCert>,
) -> GridField
where
    F: Fn(&[f64]) -> C64,
{
    let mut spec = u.to_spectrum();
    spec.map_with_freq(|xi, c| symbol(xi) * c);
    let cert = match (&declared_support, &u.support_cert) {
        (Some(s), _) => Some(s.clone()),
        (None, Some(c)) => Some(c.clone()),
        (None, None) => None,
    };
    spec.to_field(cert)
}

/// Translation tau_h u = u(. - h), realized by spectral phase factors
/// (exact for trigonometric polynomials, i.e. every grid field, with
/// periodic wrap).
pub fn translate(u: &GridField, h: &[f64]) -> Result<GridField> {
    if h.len() != u.grid.dim() {
        return Err(domain("translation vector dimension mismatch"));
    }
    if h.iter().any(|v| !v.is_finite()) {
        return Err(domain("translation vector must be finite"));
    }
    // Per-axis phase tables e^{-i xi_k h_k}.
    let phases: Vec<Vec<C64>> = (0..u.grid.dim())
        .map(|k| {
            (0..u.grid.points(k))
                .map(|i| {
                    let ang = -u.grid.freq(k, i) * h[k];
                    C64::new(libm::cos(ang), libm::sin(ang))
                })
                .collect()
        })
        .collect();
    let mut spec = u.to_spectrum();
    let grid = u.grid.clone();
    let mut iter = IndexIter::new(&grid);
    let mut flat = 0usize;
    while let Some(idx) = iter.next_index() {
        let mut ph = C64::new(1.0, 0.0);
        for (k, &i) in idx.iter().enumerate() {
            ph *= phases[k][i];
        }
        spec.coef[flat] *= ph;
        flat += 1;
    }
    Ok(spec.to_field(u.support_cert.clone()))
}

/// Restrict to the hyperplane x_axis = node(axis, index); the result lives
/// on the grid with that axis dropped.
pub fn restrict_hyperplane(u: &GridField, axis: usize, index: usize) -> Result<GridField> {
    let grid = &u.grid;
    if axis >= grid.dim() {
        return Err(domain("axis out of range"));
    }
    if index >= grid.points(axis) {
        return Err(CoreError::IndexOutOfRange {
            axis,
            index,
            len: grid.points(axis),
        });
    }
    let out_grid = grid.drop_axis(axis)?;
    let strides = grid.strides();
    let mut values = Vec::with_capacity(out_grid.len());
    let mut iter = IndexIter::new(&out_grid);
    while let Some(idx) = iter.next_index() {
        let mut flat = index * strides[axis];
        let mut k_in = 0usize;
        for (k, &i) in idx.iter().enumerate() {
            if k_in == axis {
                k_in += 1;
            }
            let _ = k;
            flat += i * strides[k_in];
            k_in += 1;
        }
        values.push(u.values[flat]);
    }
    let cert = u.support_cert.as_ref().map(|c| match c {
        SupportCert::Box(b) => {
            let mut hw = b.halfwidths.clone();
            hw.remove(axis);
            SupportCert::Box(AnisoBox { halfwidths: hw })
        }
        // Dropping a coordinate cannot increase |.|_a, so the same radius
        // certifies the slice in the tangential distance.
        SupportCert::Ball(a, ball) => {
            let mut c = ball.center.clone();
            c.remove(axis);
            SupportCert::Ball(
                a.drop_axis(axis).expect("cert dims match grid"),
                AnisoBall {
                    center: c,
                    radius: ball.radius,
                },
            )
        }
    });
    Ok(GridField {
        grid: out_grid,
        values,
        support_cert: cert,
    })
}

/// Scan the spectrum for the tight box and the |.|_a range of coefficients
/// whose magnitude exceeds threshold * max; returns None for the zero field.
pub fn spectral_support(
    u: &GridField,
    a: &AnisotropyVector,
    threshold: f64,
) -> Result<Option<SpectralSupport>> {
    if !(threshold > 0.0) {
        return Err(domain("threshold must be positive"));
    }
    if a.dim() != u.grid.dim() {
        return Err(domain("anisotropy dimension mismatch"));
    }
    let spec = u.to_spectrum();
    let max = spec.coef.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return Ok(None);
    }
    let cut = threshold * max;
    let n = u.grid.dim();
    let mut hw = vec![0.0f64; n];
    let mut rmin = f64::INFINITY;
    let mut rmax = 0.0f64;
    let mut any = false;
    let mut iter = IndexIter::new(&u.grid);
    let mut xi = vec![0.0; n];
    let mut flat = 0usize;
    while let Some(idx) = iter.next_index() {
        if spec.coef[flat].norm() > cut {
            for (k, v) in xi.iter_mut().enumerate() {
                *v = u.grid.freq(k, idx[k]);
            }
            for k in 0..n {
                hw[k] = hw[k].max(xi[k].abs());
            }
            let r = crate::aniso::distance_unchecked(a.weights(), &xi);
            rmin = rmin.min(r);
            rmax = rmax.max(r);
            any = true;
        }
        flat += 1;
    }
    if !any {
        return Ok(None);
    }
    Ok(Some(SpectralSupport {
        bounds: SpectralBox { halfwidths: hw },
        radius_min: rmin,
        radius_max: rmax,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid2() -> Grid {
        Grid::from_dims(&[(core::f64::consts::PI, 16), (core::f64::consts::PI, 8)]).unwrap()
    }

    #[test]
    fn constant_rule_samples_to_ones() {
        let g = grid2();
        let u = sample(&g, |_| C64::new(1.0, 0.0)).unwrap();
        assert!(u.values().iter().all(|v| (v - C64::new(1.0, 0.0)).norm() == 0.0));
    }

    #[test]
    fn pure_mode_is_single_coefficient() {
        // e^{i pi x_1 / L_1} = wavenumber m=1 along axis 0
        let g = grid2();
        let l = g.half_period(0);
        let u = sample(&g, |x| {
            let ang = core::f64::consts::PI * x[0] / l;
            C64::new(libm::cos(ang), libm::sin(ang))
        })
        .unwrap();
        let spec = u.to_spectrum();
        let total = g.len();
        let mut nonzero = 0;
        for (flat, c) in spec.coef().iter().enumerate() {
            if c.norm() > 1e-9 * total as f64 {
                nonzero += 1;
                // flat index of (i0=1, i1=0)
                assert_eq!(flat, g.flat(&[1, 0]));
            }
        }
        assert_eq!(nonzero, 1);
    }

    #[test]
    fn gaussian_matches_rule_at_nodes() {
        let g = grid2();
        let rule = |x: &[f64]| C64::new(libm::exp(-(x[0] * x[0] + x[1] * x[1])), 0.0);
        let u = sample(&g, rule).unwrap();
        let mut iter = IndexIter::new(&g);
        let mut flat = 0;
        while let Some(idx) = iter.next_index() {
            let x = [g.node(0, idx[0]), g.node(1, idx[1])];
            assert_eq!(u.values()[flat], rule(&x));
            flat += 1;
        }
    }

    #[test]
    fn sample_rejects_non_finite_rule() {
        let g = grid2();
        assert!(sample(&g, |x| C64::new(1.0 / (x[0] - g.node(0, 3)), 0.0)).is_err());
    }

    #[test]
    fn roundtrip_and_parseval() {
        let g = grid2();
        let u = sample(&g, |x| {
            C64::new(libm::sin(x[0]) + 0.3 * libm::cos(2.0 * x[1]), 0.25 * libm::sin(x[1]))
        })
        .unwrap();
        let back = u.to_spectrum().to_field(None);
        let diff: f64 = u
            .values()
            .iter()
            .zip(back.values())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(diff < 1e-12 * u.max_abs());

        // Parseval: ||u||_2^2 = cellvol * sum |u|^2 = cellvol / total * sum |coef|^2
        let spec = u.to_spectrum();
        let lhs = u.l2_norm();
        let s: f64 = spec.coef().iter().map(|c| c.norm_sqr()).sum();
        let rhs = libm::sqrt(s * g.cell_volume() / g.len() as f64);
        assert!((lhs - rhs).abs() < 1e-10 * rhs);
    }

    #[test]
    fn multiplier_identity_symbol() {
        let g = grid2();
        let u = sample(&g, |x| C64::new(libm::sin(x[0] + 2.0 * x[1]), 0.0)).unwrap();
        let v = fourier_multiplier(|_| C64::new(1.0, 0.0), &u, None);
        let diff: f64 = u
            .values()
            .iter()
            .zip(v.values())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(diff < 1e-12);
    }

    #[test]
    fn multiplier_derivative_on_pure_mode() {
        let g = grid2();
        let l = g.half_period(0);
        let xi1 = 3.0 * core::f64::consts::PI / l;
        let u = sample(&g, |x| {
            let ang = xi1 * x[0];
            C64::new(libm::cos(ang), libm::sin(ang))
        })
        .unwrap();
        let du = fourier_multiplier(|xi| C64::new(0.0, xi[0]), &u, None);
        // d/dx1 e^{i xi1 x1} = i xi1 e^{i xi1 x1}
        let mut worst = 0.0f64;
        for (a, b) in du.values().iter().zip(u.values()) {
            worst = worst.max((a - C64::new(0.0, xi1) * b).norm());
        }
        assert!(worst < 1e-10 * xi1);
    }

    #[test]
    fn translation_identity_and_phase() {
        let g = grid2();
        let u = sample(&g, |x| C64::new(libm::cos(x[0]), libm::sin(x[1]))).unwrap();
        let v = translate(&u, &[0.0, 0.0]).unwrap();
        let diff: f64 = u
            .values()
            .iter()
            .zip(v.values())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(diff < 1e-12);

        // A pure mode picks up the phase e^{-i xi . h}.
        let l = g.half_period(0);
        let xi1 = 2.0 * core::f64::consts::PI / l;
        let mode = sample(&g, |x| {
            let ang = xi1 * x[0];
            C64::new(libm::cos(ang), libm::sin(ang))
        })
        .unwrap();
        let h = [0.3, 0.0];
        let shifted = translate(&mode, &h).unwrap();
        let phase = C64::new(libm::cos(-xi1 * h[0]), libm::sin(-xi1 * h[0]));
        let mut worst = 0.0f64;
        for (a, b) in shifted.values().iter().zip(mode.values()) {
            worst = worst.max((a - phase * b).norm());
        }
        assert!(worst < 1e-10);
    }

    #[test]
    fn translation_is_lp_isometry_on_nodes() {
        // For shifts that are whole numbers of grid cells the translated
        // samples are a permutation of the original ones.
        let g = grid2();
        let u = sample(&g, |x| C64::new(libm::sin(3.0 * x[0]) * libm::cos(x[1]), 0.2)).unwrap();
        let h = [2.0 * g.spacing(0), 3.0 * g.spacing(1)];
        let v = translate(&u, &h).unwrap();
        let mut a: Vec<f64> = u.values().iter().map(|c| c.norm()).collect();
        let mut b: Vec<f64> = v.values().iter().map(|c| c.norm()).collect();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        let worst = a
            .iter()
            .zip(&b)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-10);
    }

    #[test]
    fn restriction_of_tensor_field() {
        let g = grid2();
        let u = sample(&g, |x| {
            C64::new(libm::cos(x[0]), libm::sin(x[0])) * C64::new(libm::cos(2.0 * x[1]), 0.0)
        })
        .unwrap();
        let i0 = g.origin_index(0);
        let slice = restrict_hyperplane(&u, 0, i0).unwrap();
        assert_eq!(slice.grid().dim(), 1);
        // f(0) = 1, so the slice is g(x2) = cos(2 x2)
        for (i, v) in slice.values().iter().enumerate() {
            let want = libm::cos(2.0 * slice.grid().node(0, i));
            assert!((v.re - want).abs() < 1e-12 && v.im.abs() < 1e-12);
        }
        assert!(restrict_hyperplane(&u, 0, g.points(0)).is_err());
        assert!(restrict_hyperplane(&u, 5, 0).is_err());
    }

    #[test]
    fn restriction_commutes_with_tangential_multiplier() {
        let g = grid2();
        let u = sample(&g, |x| {
            C64::new(libm::sin(x[0] + x[1]), libm::cos(2.0 * x[0] - x[1]))
        })
        .unwrap();
        let sym = |xi2: f64| C64::new(1.0 / (1.0 + xi2 * xi2), 0.0);
        let mu = fourier_multiplier(|xi| sym(xi[1]), &u, None);
        let i0 = g.origin_index(0);
        let lhs = restrict_hyperplane(&mu, 0, i0).unwrap();
        let slice = restrict_hyperplane(&u, 0, i0).unwrap();
        let rhs = fourier_multiplier(|xi| sym(xi[0]), &slice, None);
        let worst: f64 = lhs
            .values()
            .iter()
            .zip(rhs.values())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(worst < 1e-10 * lhs.max_abs().max(1e-30));
    }

    #[test]
    fn spectral_support_of_modes() {
        let g = grid2();
        let a = AnisotropyVector::isotropic(2);
        let l0 = g.half_period(0);
        let l1 = g.half_period(1);
        let xi = [3.0 * core::f64::consts::PI / l0, 2.0 * core::f64::consts::PI / l1];
        let mode = sample(&g, |x| {
            let ang = xi[0] * x[0] + xi[1] * x[1];
            C64::new(libm::cos(ang), libm::sin(ang))
        })
        .unwrap();
        let sup = spectral_support(&mode, &a, 1e-8).unwrap().unwrap();
        let r = libm::sqrt(xi[0] * xi[0] + xi[1] * xi[1]);
        assert!((sup.radius_min - r).abs() < 1e-9);
        assert!((sup.radius_max - r).abs() < 1e-9);
        assert!((sup.bounds.halfwidths[0] - xi[0]).abs() < 1e-9);
        assert!((sup.bounds.halfwidths[1] - xi[1]).abs() < 1e-9);

        // Sum of two modes: bounding box of both.
        let eta = [core::f64::consts::PI / l0, 3.0 * core::f64::consts::PI / l1];
        let two = sample(&g, |x| {
            let a1 = xi[0] * x[0] + xi[1] * x[1];
            let a2 = eta[0] * x[0] + eta[1] * x[1];
            C64::new(libm::cos(a1) + libm::cos(a2), libm::sin(a1) + libm::sin(a2))
        })
        .unwrap();
        let sup2 = spectral_support(&two, &a, 1e-8).unwrap().unwrap();
        assert!((sup2.bounds.halfwidths[0] - xi[0].max(eta[0])).abs() < 1e-9);
        assert!((sup2.bounds.halfwidths[1] - xi[1].max(eta[1])).abs() < 1e-9);

        // Zero field: empty support.
        let z = GridField::zeros(g);
        assert!(spectral_support(&z, &a, 1e-8).unwrap().is_none());
    }

    #[test]
    fn certificate_survives_multiplier_and_leakage_is_checked() {
        let g = grid2();
        let a = AnisotropyVector::isotropic(2);
        let u = sample(&g, |x| C64::new(libm::cos(x[0]) + libm::cos(x[1]), 0.0)).unwrap();
        let cert = SupportCert::Ball(a.clone(), AnisoBall::centered(2, 1.5).unwrap());
        let u = u.with_cert(Some(cert));
        assert!(u.certificate_leakage().unwrap() < 1e-12);
        let v = fourier_multiplier(|xi| C64::new(xi[0].cos(), 0.0), &u, None);
        assert!(v.support_cert().is_some());
        assert!(v.certificate_leakage().unwrap() < 1e-12);
    }
}
