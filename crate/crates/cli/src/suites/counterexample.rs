//! Counterexample asymptotics: the fitted log-log slopes of the borderline
//! family norms against the exact exponents of the norm lemma, with
//! full-grid cross-checks of the factorized computation at small dilation
//! levels.

use super::SuiteRun;
use crate::report::{identity_case, SuiteConfig};
use anilab_core::aniso::AnisotropyVector;
use anilab_core::counterexample::{build_counterexample_family, fit_asymptotics};
use anilab_core::grid::Grid;
use anilab_core::norms::ExponentVector;
use anyhow::{anyhow, Result};

pub fn slopes(cfg: &SuiteConfig, _scale: usize) -> Result<SuiteRun> {
    let slope_tol = cfg.tolerance("slope", 0.05);
    let xcheck_tol = cfg.tolerance("xcheck", 0.02);
    let (j_lo, j_hi) = (4usize, 12usize);
    let js: Vec<f64> = (j_lo..=j_hi).map(|j| j as f64).collect();
    let mut cases = Vec::new();
    let mut notes = Vec::new();

    // case 1: B-norm slope 1/q - 1 at the borderline, for two anisotropies
    // and two exponent splittings (all tangential p >= 1, and one p < 1).
    for (ai, aw) in [vec![1.0, 1.0], vec![1.0, 2.0]].into_iter().enumerate() {
        let a = AnisotropyVector::raw(aw).map_err(|e| anyhow!("{e}"))?;
        for (pi, pw) in [vec![2.0, 2.0], vec![0.5, 2.0]].into_iter().enumerate() {
            let p = ExponentVector::new(pw).map_err(|e| anyhow!("{e}"))?;
            let fam = build_counterexample_family(1, &a, &p, j_lo, j_hi)
                .map_err(|e| anyhow!("{e}"))?;
            let s = fam.borderline_s();
            for q in [1.0, 2.0, 8.0] {
                let norms: Vec<f64> = (j_lo..=j_hi)
                    .map(|j| fam.besov_norm(j, s, q))
                    .collect::<core::result::Result<_, _>>()
                    .map_err(|e| anyhow!("{e}"))?;
                let fit = fit_asymptotics(&js, &norms).map_err(|e| anyhow!("{e}"))?;
                let want = 1.0 / q - 1.0;
                cases.push(identity_case(
                    format!("case1-a{ai}-p{pi}-q{q}"),
                    fit.slope,
                    want,
                    slope_tol,
                ));
            }
        }
    }

    // case 2: F-norm with q = p_m at s = a_m/p_m: slope 1/p_m - 1.
    for (ai, aw) in [vec![1.0, 1.0], vec![1.0, 2.0]].into_iter().enumerate() {
        let a = AnisotropyVector::raw(aw).map_err(|e| anyhow!("{e}"))?;
        for pm in [2.0, 3.0] {
            let p = ExponentVector::new(vec![2.0, pm]).map_err(|e| anyhow!("{e}"))?;
            let fam = build_counterexample_family(1, &a, &p, j_lo, j_hi)
                .map_err(|e| anyhow!("{e}"))?;
            let s = a.weight(1) / pm;
            let norms: Vec<f64> = (j_lo..=j_hi)
                .map(|j| fam.f_norm_case2(j, s))
                .collect::<core::result::Result<_, _>>()
                .map_err(|e| anyhow!("{e}"))?;
            let fit = fit_asymptotics(&js, &norms).map_err(|e| anyhow!("{e}"))?;
            let want = 1.0 / pm - 1.0;
            cases.push(identity_case(
                format!("case2-a{ai}-pm{pm}"),
                fit.slope,
                want,
                slope_tol,
            ));
        }
    }

    // cross-check of the factorized block norms against a joint grid at
    // small levels (the identities the reduction relies on).
    {
        let a = AnisotropyVector::isotropic(2);
        let p = ExponentVector::new(vec![1.5, 2.0]).map_err(|e| anyhow!("{e}"))?;
        let fam = build_counterexample_family(1, &a, &p, j_lo, j_hi).map_err(|e| anyhow!("{e}"))?;
        let grid = Grid::from_dims(&[(2048.0, 1024), (64.0, 4096)]).map_err(|e| anyhow!("{e}"))?;
        for l in [5usize, 6] {
            let direct = fam.grid_block_lp_norm(&grid, l).map_err(|e| anyhow!("{e}"))?;
            let fact = fam.block_lp_norm(l, &p).map_err(|e| anyhow!("{e}"))?;
            cases.push(identity_case(
                format!("xcheck-iso-l{l}"),
                direct / fact,
                1.0,
                xcheck_tol,
            ));
        }
    }
    {
        let a = AnisotropyVector::raw(vec![1.0, 2.0]).map_err(|e| anyhow!("{e}"))?;
        let p = ExponentVector::new(vec![1.5, 2.0]).map_err(|e| anyhow!("{e}"))?;
        let fam = build_counterexample_family(1, &a, &p, j_lo, j_hi).map_err(|e| anyhow!("{e}"))?;
        let grid = Grid::from_dims(&[(2048.0, 1024), (2.0, 16384)]).map_err(|e| anyhow!("{e}"))?;
        for l in [5usize] {
            let direct = fam.grid_block_lp_norm(&grid, l).map_err(|e| anyhow!("{e}"))?;
            let fact = fam.block_lp_norm(l, &p).map_err(|e| anyhow!("{e}"))?;
            cases.push(identity_case(
                format!("xcheck-aniso-l{l}"),
                direct / fact,
                1.0,
                xcheck_tol,
            ));
        }
    }

    // growth below the borderline (the failure demonstration)
    {
        let a = AnisotropyVector::isotropic(2);
        let p = ExponentVector::new(vec![2.0, 2.0]).map_err(|e| anyhow!("{e}"))?;
        let fam = build_counterexample_family(1, &a, &p, j_lo, j_hi).map_err(|e| anyhow!("{e}"))?;
        let s = fam.borderline_s() - 0.25;
        let mut prev = 0.0;
        let mut monotone = true;
        for j in j_lo..=j_hi {
            let r = 1.0 / fam.besov_norm(j, s, 2.0).map_err(|e| anyhow!("{e}"))?;
            if r <= prev {
                monotone = false;
            }
            prev = r;
        }
        cases.push(identity_case(
            "below-borderline-growth",
            if monotone { 1.0 } else { 0.0 },
            1.0,
            0.5,
        ));
        notes.push("below the borderline the trace/norm ratio grows monotonically".into());
    }

    Ok(SuiteRun { cases, notes })
}
