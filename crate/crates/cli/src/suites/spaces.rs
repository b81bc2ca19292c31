//! Space-level suites: embeddings, the lift, rescaling invariance, and the
//! discrete Hardy inequalities.

use super::SuiteRun;
use crate::ensemble::{band_limited_field, rng_for, Support};
use crate::report::{case, identity_case, SuiteConfig};
use anilab_core::aniso::AnisotropyVector;
use anilab_core::grid::Grid;
use anilab_core::lp::{build_family, LPFlavor};
use anilab_core::norms::{
    hardy_smoothing, lift, space_quasi_norm, ExponentVector, HardyDirection, Scale, SpaceParams,
};
use anyhow::{anyhow, Result};
use rand::Rng;

fn pvec(p: &[f64]) -> Result<ExponentVector> {
    ExponentVector::new(p.to_vec()).map_err(|e| anyhow!("{e}"))
}

fn fnorm(
    u: &anilab_core::grid::GridField,
    s: f64,
    a: &AnisotropyVector,
    p: &ExponentVector,
    q: f64,
    fam: &anilab_core::lp::LPFamily,
) -> Result<f64> {
    let sp = SpaceParams::new(s, a.clone(), p.clone(), q, Scale::F).map_err(|e| anyhow!("{e}"))?;
    Ok(space_quasi_norm(u, &sp, fam).map_err(|e| anyhow!("{e}"))?.value)
}

/// Sobolev embeddings of the F scale: raising integrability components costs
/// the differential dimension a . (1/p - 1/r) in smoothness.
pub fn embed_f(cfg: &SuiteConfig, scale: usize) -> Result<SuiteRun> {
    let constant = super::find("embed-F")?.constant;
    let g = Grid::cubic(2, std::f64::consts::PI, 128 * scale).map_err(|e| anyhow!("{e}"))?;
    let a = AnisotropyVector::raw(vec![1.0, 2.0]).map_err(|e| anyhow!("{e}"))?;
    let fam = build_family(&a, &g, LPFlavor::Inhomogeneous).map_err(|e| anyhow!("{e}"))?;
    let pairs: [([f64; 2], [f64; 2], f64, f64); 3] = [
        ([1.0, 1.0], [2.0, 2.0], 2.0, 2.0),
        ([1.5, 2.0], [1.5, 4.0], 1.0, f64::INFINITY),
        ([0.8, 1.0], [2.0, 1.5], 0.7, 1.3),
    ];
    let s = 1.5;
    let mut cases = Vec::new();
    for (pi, (p_lo, p_hi, q1, q2)) in pairs.iter().enumerate() {
        let p = pvec(p_lo)?;
        let r = pvec(p_hi)?;
        let gap: f64 = (0..2)
            .map(|k| a.weight(k) * (1.0 / p.get(k) - 1.0 / r.get(k)))
            .sum();
        let t = s - gap;
        for e in 0..cfg.ensemble / 2 {
            let mut rng = rng_for(cfg.seed, (pi * 1000 + e) as u64);
            let u = band_limited_field(
                &mut rng,
                &g,
                &a,
                Support::Ball(libm::exp2(fam.j_max() as f64)),
            );
            let lhs = fnorm(&u, t, &a, &r, *q2, &fam)?;
            let rhs = fnorm(&u, s, &a, &p, *q1, &fam)?;
            cases.push(case(format!("pair{pi}-{e}"), lhs, rhs, constant));
        }
    }
    Ok(SuiteRun { cases, notes: Vec::new() })
}

/// Besov embeddings: strict differential-dimension drop for any q's, and the
/// borderline with q1 <= q2.
pub fn embed_b(cfg: &SuiteConfig, scale: usize) -> Result<SuiteRun> {
    let constant = super::find("embed-B")?.constant;
    let g = Grid::cubic(2, std::f64::consts::PI, 128 * scale).map_err(|e| anyhow!("{e}"))?;
    let a = AnisotropyVector::isotropic(2);
    let fam = build_family(&a, &g, LPFlavor::Inhomogeneous).map_err(|e| anyhow!("{e}"))?;
    let s = 1.25;
    let p = pvec(&[1.0, 1.5])?;
    let r = pvec(&[2.0, 3.0])?;
    let gap: f64 = (0..2)
        .map(|k| a.weight(k) * (1.0 / p.get(k) - 1.0 / r.get(k)))
        .sum();
    let mut cases = Vec::new();
    let bnorm = |u: &anilab_core::grid::GridField, s: f64, pp: &ExponentVector, q: f64| -> Result<f64> {
        let sp =
            SpaceParams::new(s, a.clone(), pp.clone(), q, Scale::B).map_err(|e| anyhow!("{e}"))?;
        Ok(space_quasi_norm(u, &sp, &fam).map_err(|e| anyhow!("{e}"))?.value)
    };
    for e in 0..cfg.ensemble {
        let mut rng = rng_for(cfg.seed, e as u64);
        let u = band_limited_field(
            &mut rng,
            &g,
            &a,
            Support::Ball(libm::exp2(fam.j_max() as f64)),
        );
        // strict: t - a/r < s - a/p, q's unrelated
        let t_strict = s - gap - 0.25;
        let lhs = bnorm(&u, t_strict, &r, 0.8)?;
        let rhs = bnorm(&u, s, &p, 3.0)?;
        cases.push(case(format!("strict-{e}"), lhs, rhs, constant));
        // borderline: t - a/r = s - a/p with q1 <= q2
        let lhs = bnorm(&u, s - gap, &r, 2.0)?;
        let rhs = bnorm(&u, s, &p, 1.0)?;
        cases.push(case(format!("border-{e}"), lhs, rhs, constant));
    }
    Ok(SuiteRun { cases, notes: Vec::new() })
}

/// Lift suite: Lambda_r Lambda_{-r} = id and the F-norm bracket of
/// Lambda_r : F^s -> F^{s-r}.
pub fn lift_suite(cfg: &SuiteConfig, scale: usize) -> Result<SuiteRun> {
    let constant = super::find("lift")?.constant;
    let g = Grid::cubic(2, std::f64::consts::PI, 128 * scale).map_err(|e| anyhow!("{e}"))?;
    let a = AnisotropyVector::raw(vec![1.0, 2.0]).map_err(|e| anyhow!("{e}"))?;
    let fam = build_family(&a, &g, LPFlavor::Inhomogeneous).map_err(|e| anyhow!("{e}"))?;
    let p = pvec(&[2.0, 1.5])?;
    let (s, q) = (1.0, 2.0);
    let roundtrip_tol = cfg.tolerance("roundtrip", 1e-10);
    let mut cases = Vec::new();
    for e in 0..cfg.ensemble.min(16) {
        let mut rng = rng_for(cfg.seed, e as u64);
        let u = band_limited_field(
            &mut rng,
            &g,
            &a,
            Support::Ball(libm::exp2(fam.j_max() as f64)),
        );
        for &r in &[-2.0, -0.5, 1.0, 3.0] {
            let lifted = lift(&u, r, &a).map_err(|e| anyhow!("{e}"))?;
            let back = lift(&lifted, -r, &a).map_err(|e| anyhow!("{e}"))?;
            let err = back.sub(&u).map_err(|e| anyhow!("{e}"))?.l2_norm() / u.l2_norm();
            cases.push(identity_case(format!("roundtrip-r{r}-{e}"), err, 0.0, roundtrip_tol));

            let lhs = fnorm(&lifted, s - r, &a, &p, q, &fam)?;
            let rhs = fnorm(&u, s, &a, &p, q, &fam)?;
            let bracket = (lhs / rhs).max(rhs / lhs);
            cases.push(case(format!("bracket-r{r}-{e}"), bracket, 1.0, constant));
        }
    }
    Ok(SuiteRun { cases, notes: Vec::new() })
}

/// Rescaling invariance: the F^{s,a} and F^{lambda s, lambda a} quasi-norms
/// stay within a fixed bracket.
pub fn scaling(cfg: &SuiteConfig, scale: usize) -> Result<SuiteRun> {
    let constant = super::find("scaling")?.constant;
    let mut cases = Vec::new();
    // 1-D: lambda in {1/2, 2, 3}
    {
        let g = Grid::cubic(1, std::f64::consts::PI, 16384 * scale).map_err(|e| anyhow!("{e}"))?;
        let a = AnisotropyVector::isotropic(1);
        let fam = build_family(&a, &g, LPFlavor::Inhomogeneous).map_err(|e| anyhow!("{e}"))?;
        let p = pvec(&[1.5])?;
        let (s, q) = (0.75, 2.0);
        for &lambda in &[0.5, 2.0, 3.0] {
            let a_l = a.scale(lambda).map_err(|e| anyhow!("{e}"))?;
            let fam_l = build_family(&a_l, &g, LPFlavor::Inhomogeneous).map_err(|e| anyhow!("{e}"))?;
            for e in 0..cfg.ensemble / 2 {
                let mut rng = rng_for(cfg.seed, (lambda * 100.0) as u64 * 100 + e as u64);
                let u = band_limited_field(&mut rng, &g, &a, Support::Ball(16.0));
                let base = fnorm(&u, s, &a, &p, q, &fam)?;
                let sp = SpaceParams::new(lambda * s, a_l.clone(), p.clone(), q, Scale::F)
                    .map_err(|e| anyhow!("{e}"))?;
                let scaled = space_quasi_norm(&u, &sp, &fam_l)
                    .map_err(|e| anyhow!("{e}"))?
                    .value;
                let bracket = (scaled / base).max(base / scaled);
                cases.push(case(format!("d1-lambda{lambda}-{e}"), bracket, 1.0, constant));
            }
        }
    }
    // 2-D: anisotropic weights shrink under lambda = 1/2 and isotropic ones
    // double; larger lambdas with weight 2 would need Nyquist^(1/4) room
    for (aw, lambda) in [(vec![1.0, 2.0], 0.5), (vec![1.0, 1.0], 2.0)] {
        let g = Grid::cubic(2, std::f64::consts::PI, 256 * scale).map_err(|e| anyhow!("{e}"))?;
        let a = AnisotropyVector::raw(aw).map_err(|e| anyhow!("{e}"))?;
        let fam = build_family(&a, &g, LPFlavor::Inhomogeneous).map_err(|e| anyhow!("{e}"))?;
        let p = pvec(&[1.5, 2.0])?;
        let (s, q) = (0.75, 1.5);
        {
            let a_l = a.scale(lambda).map_err(|e| anyhow!("{e}"))?;
            let fam_l = build_family(&a_l, &g, LPFlavor::Inhomogeneous).map_err(|e| anyhow!("{e}"))?;
            for e in 0..cfg.ensemble / 2 {
                let mut rng = rng_for(cfg.seed, (lambda * 100.0) as u64 * 1000 + e as u64);
                let u = band_limited_field(&mut rng, &g, &a, Support::Ball(4.0));
                let base = fnorm(&u, s, &a, &p, q, &fam)?;
                let sp = SpaceParams::new(lambda * s, a_l.clone(), p.clone(), q, Scale::F)
                    .map_err(|e| anyhow!("{e}"))?;
                let scaled = space_quasi_norm(&u, &sp, &fam_l)
                    .map_err(|e| anyhow!("{e}"))?
                    .value;
                let bracket = (scaled / base).max(base / scaled);
                cases.push(case(format!("d2-lambda{lambda}-{e}"), bracket, 1.0, constant));
            }
        }
    }
    Ok(SuiteRun { cases, notes: Vec::new() })
}

/// Hardy smoothing suite: the two exact reference sequences plus random
/// weighted-geometric ensembles for several (s, q, r).
pub fn hardy(cfg: &SuiteConfig, scale: usize) -> Result<SuiteRun> {
    let constant = super::find("hardy")?.constant;
    let exact_tol = cfg.tolerance("exact", 1e-12);
    let mut cases = Vec::new();

    // frozen references
    let mut b = vec![0.0; 8];
    b[0] = 1.0;
    let (lhs, rhs) = hardy_smoothing(&b, 1.0, 1.0, 1.0, HardyDirection::Tail)
        .map_err(|e| anyhow!("{e}"))?;
    cases.push(identity_case("exact-single-lhs", lhs, 1.0, exact_tol));
    cases.push(identity_case("exact-single-rhs", rhs, 1.0, exact_tol));

    let b: Vec<f64> = (0..=20).map(|j| libm::pow(4.0, -(j as f64))).collect();
    let (lhs, rhs) = hardy_smoothing(&b, 1.0, f64::INFINITY, 1.0, HardyDirection::Tail)
        .map_err(|e| anyhow!("{e}"))?;
    cases.push(identity_case("exact-geometric-lhs", lhs, 4.0 / 3.0, exact_tol));
    cases.push(identity_case("exact-geometric-rhs", rhs, 1.0, exact_tol));

    // random ensembles
    let len = 24 * scale;
    let params = [
        (1.0, 1.0, 1.0),
        (0.5, 2.0, 1.0),
        (1.0, f64::INFINITY, 1.0),
        (0.7, 1.5, 2.0),
    ];
    for (pi, &(s, q, r)) in params.iter().enumerate() {
        for e in 0..cfg.ensemble {
            let mut rng = rng_for(cfg.seed, (pi * 1000 + e) as u64);
            let alpha = 0.3 + 0.7 * (e % 2) as f64;
            let b: Vec<f64> = (0..len)
                .map(|j| {
                    let g: f64 = rng.gen_range(0.0..1.0);
                    g * libm::exp2(-alpha * j as f64)
                })
                .collect();
            for dir in [HardyDirection::Tail, HardyDirection::Head] {
                let (lhs, rhs) = hardy_smoothing(&b, s, q, r, dir).map_err(|e| anyhow!("{e}"))?;
                let tag = match dir {
                    HardyDirection::Tail => "tail",
                    HardyDirection::Head => "head",
                };
                cases.push(case(format!("p{pi}-{tag}-{e}"), lhs, rhs, constant));
            }
        }
    }
    Ok(SuiteRun { cases, notes: Vec::new() })
}
