//! Maximal-function and multiplier inequalities: Nikolskij, the directional
//! maximal bound, Peetre maximal estimates, the pointwise pseudo-differential
//! estimate and its vector-valued corollary, and the Littlewood-Paley
//! inequality.

use super::SuiteRun;
use crate::ensemble::{band_limited_field, rng_for, Support};
use crate::report::{case, CaseRow, SuiteConfig};
use anilab_core::aniso::AnisotropyVector;
use anilab_core::grid::{fourier_multiplier, Grid, GridField};
use anilab_core::lp::{build_family, LPFlavor};
use anilab_core::maximal::{dyadic_radii, directional_maximal, iterated_maximal, peetre_maximal, MaximalParams};
use anilab_core::norms::{
    mixed_lp_lq_norm, mixed_lp_norm, symbol_homogeneous_besov_norm_with_tol, ExponentVector,
};
use anilab_core::C64;
use anyhow::{anyhow, Result};

fn pv(p: &[f64]) -> Result<ExponentVector> {
    ExponentVector::new(p.to_vec()).map_err(|e| anyhow!("{e}"))
}

fn grid2(points: usize) -> Result<Grid> {
    Grid::cubic(2, std::f64::consts::PI, points).map_err(|e| anyhow!("{e}"))
}

/// Vector-valued Nikolskij inequality: single band-limited functions across
/// growing rectangles, plus genuine sequences under the geometric rectangle
/// condition.
pub fn nikolskij(cfg: &SuiteConfig, scale: usize) -> Result<SuiteRun> {
    let constant = super::find("nikolskij")?.constant;
    let g = grid2(64 * scale)?;
    let mut cases = Vec::new();
    let mut per_level_max = [0.0f64; 3];
    for variant in 0..2usize {
        let a = if variant == 0 {
            AnisotropyVector::isotropic(2)
        } else {
            AnisotropyVector::raw(vec![1.0, 2.0]).map_err(|e| anyhow!("{e}"))?
        };
        let p = pv(&[1.0, 1.0])?;
        let r = pv(&[2.0, 2.0])?;
        // exponent of the rectangle factor: sum_k a_k (1/p_k - 1/r_k)
        let gap: f64 = (0..2).map(|k| a.weight(k) * (1.0 / p.get(k) - 1.0 / r.get(k))).sum();
        for e in 0..cfg.ensemble {
            let level = (e % 3) as i32 + 1; // R = 2, 4, 8
            let mut rng = rng_for(cfg.seed, (variant * 1000 + e) as u64);
            let f = band_limited_field(&mut rng, &g, &a, Support::BoxDilate { base: 1.0, level });
            let lhs = mixed_lp_norm(&f, &r).map_err(|e| anyhow!("{e}"))?;
            let rhs = libm::exp2(level as f64 * gap) * mixed_lp_norm(&f, &p).map_err(|e| anyhow!("{e}"))?;
            cases.push(case(format!("single-a{variant}-R{}-{e}", 1 << level), lhs, rhs, constant));
        }
        // extremal family: dilated bumps filling the rectangles realize the
        // rectangle factor, so their ratio is what must stay constant in R
        for level in 1..=3i32 {
            let f = anilab_core::grid::fourier_multiplier(
                |xi| {
                    let mut v = 1.0;
                    for k in 0..2 {
                        let hw = libm::exp2(level as f64 * a.weight(k));
                        v *= bump_unit(xi[k] / hw);
                    }
                    C64::new(v, 0.0)
                },
                &anilab_core::grid::sample(&g, |x| {
                    // a unit impulse spread over the whole spectrum
                    if x.iter().all(|&v| v.abs() < 1e-12) {
                        C64::new(1.0, 0.0)
                    } else {
                        C64::new(0.0, 0.0)
                    }
                })
                .map_err(|e| anyhow!("{e}"))?,
                None,
            );
            let lhs = mixed_lp_norm(&f, &r).map_err(|e| anyhow!("{e}"))?;
            let rhs = libm::exp2(level as f64 * gap) * mixed_lp_norm(&f, &p).map_err(|e| anyhow!("{e}"))?;
            let row = case(format!("extremal-a{variant}-R{}", 1 << level), lhs, rhs, constant);
            if variant == 0 {
                let idx = (level - 1) as usize;
                per_level_max[idx] = per_level_max[idx].max(row.lhs / row.rhs);
            }
            cases.push(row);
        }
        // sequence version: supports in boxes with sides 2^{j a_k}
        let q = 2.0;
        for e in 0..cfg.ensemble / 4 {
            let mut rng = rng_for(cfg.seed, (variant * 2000 + 500 + e) as u64);
            let seq: Vec<GridField> = (0..4)
                .map(|j| band_limited_field(&mut rng, &g, &a, Support::BoxDilate { base: 1.0, level: j }))
                .collect();
            let lhs = mixed_lp_lq_norm(&seq, &r, q).map_err(|e| anyhow!("{e}"))?;
            // pointwise sup_j 2^{j gap} |f_j| measured in L_p
            let total = g.len();
            let mut sup = vec![0.0f64; total];
            for (j, f) in seq.iter().enumerate() {
                let w = libm::exp2(j as f64 * gap);
                for (i, c) in f.values().iter().enumerate() {
                    sup[i] = sup[i].max(w * c.norm());
                }
            }
            let rhs = anilab_core::norms::mixed_lp_of_abs(sup, &g, &p);
            cases.push(case(format!("sequence-a{variant}-{e}"), lhs, rhs, constant));
        }
    }
    let spread = per_level_max.iter().fold(0.0f64, |m, &v| m.max(v))
        / per_level_max.iter().fold(f64::INFINITY, |m, &v| m.min(v)).max(1e-300);
    let mut notes = vec![format!(
        "extremal-family ratio spread across R in {{2,4,8}}: {spread:.3}"
    )];
    if spread > 1.5 {
        notes.push("ratio not stable in R".into());
        cases.push(CaseRow {
            id: "R-stability".into(),
            lhs: spread,
            rhs: 1.5,
            ratio: spread / 1.5,
            pass: false,
        });
    }
    Ok(SuiteRun { cases, notes })
}

/// Directional maximal bound on the last axis in L_p(l_q).
pub fn bagby(cfg: &SuiteConfig, scale: usize) -> Result<SuiteRun> {
    let constant = super::find("bagby")?.constant;
    let g = grid2(64 * scale)?;
    let a = AnisotropyVector::isotropic(2);
    let fam = build_family(&a, &g, LPFlavor::Inhomogeneous).map_err(|e| anyhow!("{e}"))?;
    let p = pv(&[2.0, 1.5])?;
    let q = 2.0;
    let radii = dyadic_radii(&g, 1);
    let mut cases = Vec::new();
    for e in 0..cfg.ensemble {
        let mut rng = rng_for(cfg.seed, e as u64);
        let u = band_limited_field(&mut rng, &g, &a, Support::Ball(0.9 * 1.1 * libm::exp2(fam.j_max() as f64)));
        let blocks = fam.decompose(&u).map_err(|e| anyhow!("{e}"))?.into_blocks();
        let maxed: Vec<GridField> = blocks
            .iter()
            .map(|b| directional_maximal(b, 1, &radii).map_err(|e| anyhow!("{e}")))
            .collect::<Result<_>>()?;
        let lhs = mixed_lp_lq_norm(&maxed, &p, q).map_err(|e| anyhow!("{e}"))?;
        let rhs = mixed_lp_lq_norm(&blocks, &p, q).map_err(|e| anyhow!("{e}"))?;
        cases.push(case(format!("case-{e}"), lhs, rhs, constant));
    }
    Ok(SuiteRun { cases, notes: Vec::new() })
}

/// Peetre maximal function: the L_p(l_q) bound for block sequences with
/// dilated weights, plus the pointwise domination by the iterated maximal
/// function.
pub fn peetre(cfg: &SuiteConfig, scale: usize) -> Result<SuiteRun> {
    let constant = super::find("peetre")?.constant;
    let g = grid2(64 * scale)?;
    let a = AnisotropyVector::isotropic(2);
    let p = pv(&[1.2, 1.5])?;
    let q = 1.5;
    let t = vec![0.9, 1.0]; // t_k < min(p_1..p_k, q)
    let mut cases = Vec::new();
    let pointwise_c = cfg.tolerance("pointwise", super::find("peetre")?.constant);
    for e in 0..cfg.ensemble {
        let mut rng = rng_for(cfg.seed, e as u64);
        let seq: Vec<GridField> = (0..5)
            .map(|j| band_limited_field(&mut rng, &g, &a, Support::BoxDilate { base: 1.0, level: j }))
            .collect();
        let mut starred = Vec::with_capacity(seq.len());
        for (j, u) in seq.iter().enumerate() {
            let scales: Vec<f64> = (0..2).map(|k| libm::exp2(j as f64 * a.weight(k))).collect();
            let params = MaximalParams::dyadic(&g, t.clone())
                .and_then(|m| m.with_scales(scales))
                .map_err(|e| anyhow!("{e}"))?;
            starred.push(peetre_maximal(u, &params).map_err(|e| anyhow!("{e}"))?);
        }
        let lhs = mixed_lp_lq_norm(&starred, &p, q).map_err(|e| anyhow!("{e}"))?;
        let rhs = mixed_lp_lq_norm(&seq, &p, q).map_err(|e| anyhow!("{e}"))?;
        cases.push(case(format!("lplq-{e}"), lhs, rhs, constant));

        // pointwise domination for the j = 0 member (unit box support)
        if e % 8 == 0 {
            let u = &seq[0];
            let params = MaximalParams::dyadic(&g, t.clone()).map_err(|e| anyhow!("{e}"))?;
            let star = peetre_maximal(u, &params).map_err(|e| anyhow!("{e}"))?;
            let iter = iterated_maximal(u, &params).map_err(|e| anyhow!("{e}"))?;
            let worst = star
                .values()
                .iter()
                .zip(iter.values())
                .map(|(s, m)| if m.re > 0.0 { s.re / m.re } else { 0.0 })
                .fold(0.0f64, f64::max);
            cases.push(case(format!("pointwise-{e}"), worst, 1.0, pointwise_c));
        }
    }
    Ok(SuiteRun { cases, notes: Vec::new() })
}

/// Steep even bump used for Marschall symbols.
fn bump_steep(s: f64) -> f64 {
    let u = 0.5 * (s + 1.0);
    if u <= 0.0 || u >= 1.0 {
        0.0
    } else {
        let w = 4.0 * u * (1.0 - u);
        libm::exp(1.0 - 1.0 / (w * w * w))
    }
}

/// Pointwise pseudo-differential estimate in one dimension: symbols
/// supported in B_a(0, A), fields band-limited in B_a(0, A R); the symbol
/// enters through its homogeneous Besov norm.
pub fn marschall(cfg: &SuiteConfig, scale: usize) -> Result<SuiteRun> {
    let constant = super::find("marschall")?.constant;
    let a = AnisotropyVector::isotropic(1);
    let t = 0.7;
    let d = t;
    let s = 1.0 / t; // a . 1/t for a = (1)
    let big_a = 2.0;

    // symbol norms on a deep 1-D grid
    let sym_grid = Grid::cubic(1, 128.0, (1 << 17) * scale).map_err(|e| anyhow!("{e}"))?;
    let hom = build_family(&a, &sym_grid, LPFlavor::Homogeneous).map_err(|e| anyhow!("{e}"))?;
    let symbols: Vec<(&str, Box<dyn Fn(f64) -> f64>)> = vec![
        ("even-bump", Box::new(move |xi: f64| bump_steep(xi / big_a))),
        (
            "odd-bump",
            Box::new(move |xi: f64| (xi / big_a) * bump_steep(xi / big_a)),
        ),
    ];
    let mut norms = Vec::new();
    for (name, sym) in &symbols {
        let field = anilab_core::grid::sample(&sym_grid, |x| C64::new(sym(x[0]), 0.0))
            .map_err(|e| anyhow!("{e}"))?;
        let rep = symbol_homogeneous_besov_norm_with_tol(&field, s, 1.0, d, &hom, 1e-2)
            .map_err(|e| anyhow!("{e}"))?;
        norms.push((*name, rep.value));
    }

    let u_grid = Grid::cubic(1, 64.0, 4096 * scale).map_err(|e| anyhow!("{e}"))?;
    let params = MaximalParams::dyadic(&u_grid, vec![t]).map_err(|e| anyhow!("{e}"))?;
    let mut cases = Vec::new();
    for e in 0..cfg.ensemble {
        let level = (e % 3) as u32; // R = 1, 2, 4
        let big_r = libm::exp2(level as f64);
        let mut rng = rng_for(cfg.seed, e as u64);
        let u = band_limited_field(&mut rng, &u_grid, &a, Support::Ball(big_a * big_r));
        let m_it = iterated_maximal(&u, &params).map_err(|e| anyhow!("{e}"))?;
        for ((name, sym), (_, norm)) in symbols.iter().zip(&norms) {
            let bu = fourier_multiplier(|xi| C64::new(sym(xi[0]), 0.0), &u, None);
            let factor = libm::pow(big_r * big_a, 1.0 / t - 1.0) * norm;
            let worst = bu
                .values()
                .iter()
                .zip(m_it.values())
                .map(|(b, m)| if m.re > 0.0 { b.norm() / (factor * m.re) } else { 0.0 })
                .fold(0.0f64, f64::max);
            cases.push(case(format!("{name}-R{big_r}-{e}"), worst, 1.0, constant));
        }
    }
    let notes = norms
        .iter()
        .map(|(n, v)| format!("symbol '{n}': homogeneous Besov norm {v:.6}"))
        .collect();
    Ok(SuiteRun { cases, notes })
}

fn bump_unit(s: f64) -> f64 {
    if s.abs() >= 1.0 {
        0.0
    } else {
        libm::exp(-s * s / (1.0 - s * s))
    }
}

/// Vector-valued multiplier bound: phi_j = phi(2^{-j a} .) applied to
/// sequences with supp F u_j inside |xi|_a <= R 2^j.
pub fn help1(cfg: &SuiteConfig, scale: usize) -> Result<SuiteRun> {
    let constant = super::find("help1-multiplier")?.constant;
    let g = grid2(128 * scale)?;
    let a = AnisotropyVector::raw(vec![1.0, 2.0]).map_err(|e| anyhow!("{e}"))?;
    let fam = build_family(&a, &g, LPFlavor::Inhomogeneous).map_err(|e| anyhow!("{e}"))?;
    let p = pv(&[0.8, 1.4])?;
    let q = 1.2;
    let t = [0.7, 0.7]; // t_k < min(1, p_1..p_k, q)
    let exponent: f64 = (0..2).map(|k| a.weight(k) / t[k]).sum::<f64>() - a.total();
    let mut cases = Vec::new();
    for e in 0..cfg.ensemble {
        let level = (e % 3) as i32; // R = 1, 2, 4
        let big_r = libm::exp2(level as f64);
        let mut rng = rng_for(cfg.seed, e as u64);
        let js = 0..4usize;
        let seq: Vec<GridField> = js
            .clone()
            .map(|j| {
                band_limited_field(
                    &mut rng,
                    &g,
                    &a,
                    Support::Ball(big_r * libm::exp2(j as f64)),
                )
            })
            .collect();
        let mapped: Vec<GridField> = seq
            .iter()
            .enumerate()
            .map(|(j, u)| {
                let spec = u.to_spectrum();
                fam.apply_radial(&spec, |r| bump_unit(libm::ldexp(r, -(j as i32)) / 2.0))
                    .to_field(None)
            })
            .collect();
        let lhs = mixed_lp_lq_norm(&mapped, &p, q).map_err(|e| anyhow!("{e}"))?;
        let rhs = libm::pow(big_r, exponent) * mixed_lp_lq_norm(&seq, &p, q).map_err(|e| anyhow!("{e}"))?;
        cases.push(case(format!("R{big_r}-{e}"), lhs, rhs, constant));
    }
    Ok(SuiteRun { cases, notes: Vec::new() })
}

/// Littlewood-Paley inequality in mixed norms, both directions.
pub fn lwp(cfg: &SuiteConfig, scale: usize) -> Result<SuiteRun> {
    let constant = super::find("lwp")?.constant;
    let g = grid2(128 * scale)?;
    let a = AnisotropyVector::isotropic(2);
    let fam = build_family(&a, &g, LPFlavor::Inhomogeneous).map_err(|e| anyhow!("{e}"))?;
    let exps = [[1.5, 3.0], [2.0, 2.0], [4.0, 1.2]];
    let mut cases = Vec::new();
    for e in 0..cfg.ensemble {
        let p = pv(&exps[e % exps.len()])?;
        let mut rng = rng_for(cfg.seed, e as u64);
        let u = band_limited_field(
            &mut rng,
            &g,
            &a,
            Support::Ball(libm::exp2(fam.j_max() as f64)),
        );
        let blocks = fam.decompose(&u).map_err(|e| anyhow!("{e}"))?.into_blocks();
        let square = mixed_lp_lq_norm(&blocks, &p, 2.0).map_err(|e| anyhow!("{e}"))?;
        let plain = mixed_lp_norm(&u, &p).map_err(|e| anyhow!("{e}"))?;
        cases.push(case(format!("upper-{e}"), square, plain, constant));
        cases.push(case(format!("lower-{e}"), plain, square, constant));
    }
    Ok(SuiteRun { cases, notes: Vec::new() })
}
