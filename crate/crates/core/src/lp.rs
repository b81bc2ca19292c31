//! Anisotropic dyadic decomposition of unity.
//!
//! The family is built from one C^infinity cutoff psi with psi(t) = 1 for
//! t <= 11/10 and psi(t) = 0 for t >= 13/10. Setting
//! Psi_j(xi) = psi(2^{-j} |xi|_a) and Phi_j = Psi_j - Psi_{j-1} gives
//! 1 = sum_j Phi_j with supp Phi_j inside the corona
//! 11/20 * 2^j <= |xi|_a <= 13/10 * 2^j for j >= 1. The homogeneous flavor
//! phi_k = psi(2^{-k}|.|_a) - psi(2^{1-k}|.|_a) runs over a finite window of
//! integers k and feeds the homogeneous Besov norms of symbols.

use crate::aniso::{AnisoBall, AnisotropyVector};
use crate::error::{domain, CoreError, Result};
use crate::grid::{Grid, GridField, Spectrum, SupportCert};
use alloc::format;
use alloc::vec::Vec;

/// Plateau edge of the cutoff: psi = 1 for t <= PSI_ONE.
pub const PSI_ONE: f64 = 1.1;
/// Support edge of the cutoff: psi = 0 for t >= PSI_ZERO.
pub const PSI_ZERO: f64 = 1.3;
/// Lower corona constant 11/20.
pub const CORONA_LO: f64 = 0.55;
/// Upper corona constant 13/10.
pub const CORONA_HI: f64 = 1.3;

/// The smooth step H(s) = e^{-1/s} / (e^{-1/s} + e^{-1/(1-s)}) on [0,1].
fn smooth_step(s: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    if s >= 1.0 {
        return 1.0;
    }
    let a = libm::exp(-1.0 / s);
    let b = libm::exp(-1.0 / (1.0 - s));
    a / (a + b)
}

/// The radial cutoff psi: 1 on [0, 11/10], 0 on [13/10, inf), and a smooth
/// monotone bridge in between.
pub fn psi_profile(t: f64) -> f64 {
    if t <= PSI_ONE {
        1.0
    } else if t >= PSI_ZERO {
        0.0
    } else {
        smooth_step((PSI_ZERO - t) / (PSI_ZERO - PSI_ONE))
    }
}

/// 2^j as f64, exactly.
pub fn pow2(j: i32) -> f64 {
    libm::ldexp(1.0, j)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LPFlavor {
    /// Blocks j = 0, 1, ..., J_max.
    Inhomogeneous,
    /// Blocks k in a finite window of integers; used for symbol norms.
    Homogeneous,
}

/// A dyadic family bound to one (grid, anisotropy) pair.
pub struct LPFamily {
    a: AnisotropyVector,
    grid: Grid,
    flavor: LPFlavor,
    /// |xi|_a at every frequency node, flat FFT order.
    radii: Vec<f64>,
    j_max: usize,
    /// Window of the homogeneous flavor (blocks below k_min contain no grid
    /// frequency except the origin, where every phi_k vanishes).
    k_min: i32,
    k_max: i32,
}

/// Build the family for a grid. The block count is truncated below Nyquist:
/// J_max = floor(log2 R) - 1 where R = min_k Nyquist_k^{1/a_k} is the radius
/// of the largest |.|_a-ball inside the representable frequency box, so no
/// corona touches Nyquist.
pub fn build_family(a: &AnisotropyVector, grid: &Grid, flavor: LPFlavor) -> Result<LPFamily> {
    if a.dim() != grid.dim() {
        return Err(domain("anisotropy dimension does not match grid"));
    }
    let mut nyq_radius = f64::INFINITY;
    let mut min_spacing_radius = f64::INFINITY;
    for k in 0..grid.dim() {
        let w = a.weight(k);
        nyq_radius = nyq_radius.min(libm::pow(grid.nyquist(k), 1.0 / w));
        let spacing = core::f64::consts::PI / grid.half_period(k);
        min_spacing_radius = min_spacing_radius.min(libm::pow(spacing, 1.0 / w));
    }
    let j_max_f = libm::floor(libm::log2(nyq_radius)) - 1.0;
    if !(j_max_f >= 2.0) {
        return Err(CoreError::Resolution(format!(
            "grid too coarse: anisotropic Nyquist radius {nyq_radius:.3} allows J_max = {j_max_f}, need >= 2"
        )));
    }
    let j_max = j_max_f as usize;
    let k_min = (libm::floor(libm::log2(min_spacing_radius)) as i32) - 1;
    let radii = grid.freq_radii(a)?;
    Ok(LPFamily {
        a: a.clone(),
        grid: grid.clone(),
        flavor,
        radii,
        j_max,
        k_min,
        k_max: j_max as i32,
    })
}

/// A field split into dyadic blocks u_j = Phi_j(D) u.
pub struct LPDecomposition {
    blocks: Vec<GridField>,
    /// Largest relative coefficient magnitude past the plateau of Psi_{J_max}
    /// (spectral mass the truncated family cannot reproduce).
    truncation_defect: f64,
}

impl LPDecomposition {
    pub fn blocks(&self) -> &[GridField] {
        &self.blocks
    }

    pub fn into_blocks(self) -> Vec<GridField> {
        self.blocks
    }

    pub fn j_max(&self) -> usize {
        self.blocks.len() - 1
    }

    pub fn truncation_defect(&self) -> f64 {
        self.truncation_defect
    }
}

impl LPFamily {
    pub fn anisotropy(&self) -> &AnisotropyVector {
        &self.a
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn flavor(&self) -> LPFlavor {
        self.flavor
    }

    pub fn j_max(&self) -> usize {
        self.j_max
    }

    /// Homogeneous window [k_min, k_max].
    pub fn homogeneous_window(&self) -> (i32, i32) {
        (self.k_min, self.k_max)
    }

    /// Psi_j(t) = psi(2^{-j} t); identically 0 for j < 0.
    pub fn big_psi(&self, j: i32, t: f64) -> f64 {
        if j < 0 {
            0.0
        } else {
            psi_profile(libm::ldexp(t, -j))
        }
    }

    /// Phi_j = Psi_j - Psi_{j-1}.
    pub fn phi(&self, j: usize, t: f64) -> f64 {
        self.big_psi(j as i32, t) - self.big_psi(j as i32 - 1, t)
    }

    /// Homogeneous phi_k(t) = psi(2^{-k} t) - psi(2^{1-k} t), k in Z.
    pub fn phi_hom(&self, k: i32, t: f64) -> f64 {
        psi_profile(libm::ldexp(t, -k)) - psi_profile(libm::ldexp(t, 1 - k))
    }

    /// |xi|_a table over the frequency nodes of the bound grid.
    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    /// Multiply a spectrum by a radial function of |xi|_a.
    pub fn apply_radial(&self, spec: &Spectrum, f: impl Fn(f64) -> f64) -> Spectrum {
        let mut out = Spectrum::zeros(self.grid.clone());
        for (i, c) in spec.coef().iter().enumerate() {
            out.coef_mut()[i] = c * f(self.radii[i]);
        }
        out
    }

    /// Split u into blocks u_j = Phi_j(D) u for j = 0..=J_max, with corona
    /// certificates attached.
    pub fn decompose(&self, u: &GridField) -> Result<LPDecomposition> {
        if u.grid() != &self.grid {
            return Err(CoreError::GridMismatch);
        }
        let spec = u.to_spectrum();
        let max = spec.coef().iter().map(|c| c.norm()).fold(0.0, f64::max);
        let plateau = PSI_ONE * pow2(self.j_max as i32);
        let mut defect = 0.0f64;
        if max > 0.0 {
            for (i, c) in spec.coef().iter().enumerate() {
                if self.radii[i] > plateau {
                    defect = defect.max(c.norm() / max);
                }
            }
        }
        let mut blocks = Vec::with_capacity(self.j_max + 1);
        for j in 0..=self.j_max {
            let bj = self.apply_radial(&spec, |t| self.phi(j, t));
            let cert = SupportCert::Ball(
                self.a.clone(),
                AnisoBall::centered(self.grid.dim(), CORONA_HI * pow2(j as i32))?,
            );
            blocks.push(bj.to_field(Some(cert)));
        }
        Ok(LPDecomposition {
            blocks,
            truncation_defect: defect,
        })
    }

    /// Single block Phi_j(D) u without materializing the whole decomposition.
    pub fn block(&self, spec: &Spectrum, j: usize) -> Result<GridField> {
        if spec.grid() != &self.grid {
            return Err(CoreError::GridMismatch);
        }
        let bj = self.apply_radial(spec, |t| self.phi(j, t));
        let cert = SupportCert::Ball(
            self.a.clone(),
            AnisoBall::centered(self.grid.dim(), CORONA_HI * pow2(j as i32))?,
        );
        Ok(bj.to_field(Some(cert)))
    }

    /// Psi_{J_max}(D) u, the part of u the truncated family reproduces.
    pub fn resolved_part(&self, u: &GridField) -> Result<GridField> {
        if u.grid() != &self.grid {
            return Err(CoreError::GridMismatch);
        }
        let spec = u.to_spectrum();
        let out = self.apply_radial(&spec, |t| self.big_psi(self.j_max as i32, t));
        let cert = SupportCert::Ball(
            self.a.clone(),
            AnisoBall::centered(self.grid.dim(), PSI_ZERO * pow2(self.j_max as i32))?,
        );
        Ok(out.to_field(Some(cert)))
    }
}

/// Pointwise sum of the blocks.
pub fn recompose(d: &LPDecomposition) -> Result<GridField> {
    let mut it = d.blocks.iter();
    let first = it.next().ok_or_else(|| domain("empty decomposition"))?;
    let mut acc = first.clone();
    for b in it {
        acc = acc.add(b)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{sample, spectral_support};
    use crate::C64;

    fn family(n_pts: usize) -> LPFamily {
        let g = Grid::cubic(2, core::f64::consts::PI, n_pts).unwrap();
        build_family(&AnisotropyVector::isotropic(2), &g, LPFlavor::Inhomogeneous).unwrap()
    }

    #[test]
    fn psi_plateau_and_support() {
        assert_eq!(psi_profile(1.0), 1.0);
        assert_eq!(psi_profile(1.1), 1.0);
        assert_eq!(psi_profile(1.35), 0.0);
        assert_eq!(psi_profile(1.3), 0.0);
        assert!(psi_profile(1.2) > 0.0 && psi_profile(1.2) < 1.0);
        // monotone on the bridge
        let mut prev = 1.0;
        for i in 0..=100 {
            let t = 1.1 + 0.2 * i as f64 / 100.0;
            let v = psi_profile(t);
            assert!(v <= prev + 1e-15);
            assert!((0.0..=1.0).contains(&v));
            prev = v;
        }
    }

    #[test]
    fn j_max_from_nyquist_and_coarse_grid_error() {
        let fam = family(64);
        // Nyquist = 32, so J_max = floor(log2 32) - 1 = 4
        assert_eq!(fam.j_max(), 4);
        let g = Grid::cubic(2, core::f64::consts::PI, 4).unwrap();
        assert!(build_family(
            &AnisotropyVector::isotropic(2),
            &g,
            LPFlavor::Inhomogeneous
        )
        .is_err());
    }

    #[test]
    fn telescoping_partition_of_unity() {
        let fam = family(64);
        let jm = fam.j_max();
        for i in 0..=2000 {
            let t = 40.0 * i as f64 / 2000.0;
            let sum: f64 = (0..=jm).map(|j| fam.phi(j, t)).sum();
            let want = fam.big_psi(jm as i32, t);
            assert!((sum - want).abs() < 1e-12);
            if t <= PSI_ONE * pow2(jm as i32) {
                assert!((sum - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn symbol_overlap_and_three_term_cover() {
        let fam = family(64);
        let jm = fam.j_max();
        for i in 0..=4000 {
            let t = 50.0 * i as f64 / 4000.0;
            for j in 0..=jm {
                for k in 0..=jm {
                    if (j as i32 - k as i32).abs() >= 2 {
                        assert!(fam.phi(j, t) * fam.phi(k, t) == 0.0);
                    }
                }
            }
            // phi_{j-1} + phi_j + phi_{j+1} = 1 on supp phi_j
            for j in 0..jm {
                if fam.phi(j, t) > 0.0 {
                    let s = if j == 0 {
                        fam.phi(0, t) + fam.phi(1, t)
                    } else {
                        fam.phi(j - 1, t) + fam.phi(j, t) + fam.phi(j + 1, t)
                    };
                    assert!((s - 1.0).abs() < 1e-12, "j={j} t={t} s={s}");
                }
            }
        }
    }

    #[test]
    fn constant_field_is_block_zero() {
        let fam = family(32);
        let u = sample(fam.grid(), |_| C64::new(2.5, -1.0)).unwrap();
        let d = fam.decompose(&u).unwrap();
        assert!((d.blocks()[0].max_abs() - u.max_abs()).abs() < 1e-12);
        for b in &d.blocks()[1..] {
            assert!(b.max_abs() < 1e-12);
        }
    }

    #[test]
    fn pure_mode_lands_in_its_block() {
        // |xi|_a = 32 = 2^5 sits on the plateau of Phi_5.
        let g = Grid::cubic(2, core::f64::consts::PI, 256).unwrap();
        let fam = build_family(&AnisotropyVector::isotropic(2), &g, LPFlavor::Inhomogeneous)
            .unwrap();
        assert!(fam.j_max() >= 5);
        let u = sample(&g, |x| {
            let ang = 32.0 * x[0];
            C64::new(libm::cos(ang), libm::sin(ang))
        })
        .unwrap();
        let d = fam.decompose(&u).unwrap();
        for (j, b) in d.blocks().iter().enumerate() {
            if j == 5 {
                assert!((b.max_abs() - 1.0).abs() < 1e-10);
            } else {
                assert!(b.max_abs() < 1e-12, "leak into block {j}");
            }
        }
    }

    #[test]
    fn decompose_recompose_roundtrip() {
        let fam = family(64);
        // deterministic band-limited field: a handful of modes under the plateau
        let u = sample(fam.grid(), |x| {
            let mut v = C64::new(0.0, 0.0);
            for (m1, m2, w) in [(0i32, 1i32, 0.7), (3, 2, -0.4), (7, 5, 0.2), (12, 9, 0.1)] {
                let ang = m1 as f64 * x[0] + m2 as f64 * x[1];
                v += C64::new(w * libm::cos(ang), w * libm::sin(ang));
            }
            v
        })
        .unwrap();
        let d = fam.decompose(&u).unwrap();
        assert!(d.truncation_defect() < 1e-12);
        let back = recompose(&d).unwrap();
        let err = u.sub(&back).unwrap().max_abs() / u.max_abs();
        assert!(err < 1e-10);

        // partial sums converge monotonically in grid L2
        let mut prev = f64::INFINITY;
        let mut acc = GridField::zeros(fam.grid().clone());
        for b in d.blocks() {
            acc = acc.add(b).unwrap();
            let err = u.sub(&acc).unwrap().l2_norm();
            assert!(err <= prev + 1e-12);
            prev = err;
        }
        assert!(prev < 1e-10 * u.l2_norm());
    }

    #[test]
    fn block_supports_live_in_coronas() {
        let fam = family(128);
        let u = sample(fam.grid(), |x| {
            let mut v = C64::new(0.1, 0.0);
            for m in 1..=20i32 {
                let ang = m as f64 * x[0] + (m / 2) as f64 * x[1];
                v += C64::new(libm::cos(ang) / m as f64, libm::sin(ang) / m as f64);
            }
            v
        })
        .unwrap();
        let d = fam.decompose(&u).unwrap();
        for (j, b) in d.blocks().iter().enumerate() {
            assert!(b.certificate_leakage().unwrap() < 1e-10);
            if b.max_abs() < 1e-14 {
                continue;
            }
            let sup = spectral_support(b, fam.anisotropy(), 1e-10)
                .unwrap()
                .unwrap();
            let scale = pow2(j as i32);
            assert!(sup.radius_max <= CORONA_HI * scale + 1e-9);
            if j >= 1 {
                assert!(sup.radius_min >= CORONA_LO * scale - 1e-9);
            }
        }
    }

    #[test]
    fn homogeneous_rescaling_identity() {
        let fam = family(64);
        for k in -3..=5i32 {
            for i in 0..200 {
                let t = 0.01 + 30.0 * i as f64 / 200.0;
                assert_eq!(fam.phi_hom(k, 2.0 * t), fam.phi_hom(k - 1, t));
            }
        }
    }

    #[test]
    fn homogeneous_window_covers_grid() {
        let fam = family(64);
        let (k_min, k_max) = fam.homogeneous_window();
        assert!(k_min <= 0 && k_max as usize == fam.j_max());
        // Below the window, blocks vanish on the grid: the smallest nonzero
        // radius here is 1, and phi_k(t>=1) = 0 well below k_min.
        for &t in fam.radii().iter().filter(|&&t| t > 0.0) {
            assert_eq!(fam.phi_hom(k_min - 2, t), 0.0);
        }
    }
}
