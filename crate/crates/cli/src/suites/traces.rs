//! Trace suites: the basic mixed-norm estimate on the inner hyperplane, its
//! uniform-over-slices strengthening, and the right-inverse identities of
//! the extension operators.

use super::SuiteRun;
use crate::ensemble::{band_limited_field, rng_for, Support};
use crate::report::{case, identity_case, SuiteConfig};
use anilab_core::aniso::AnisotropyVector;
use anilab_core::grid::{restrict_hyperplane, Grid, GridField};
use anilab_core::lp::{build_family, LPFamily, LPFlavor};
use anilab_core::norms::{
    mixed_lp_of_abs, space_quasi_norm, ExponentVector, Scale, SpaceParams,
};
use anilab_core::trace::{
    build_extension_family, cauchy_extension, cauchy_trace, extend, trace, TraceAxis, TraceSpec,
};
use anyhow::{anyhow, Result};

fn pvec(p: &[f64]) -> Result<ExponentVector> {
    ExponentVector::new(p.to_vec()).map_err(|e| anyhow!("{e}"))
}

/// Weighted slice functional
/// || ( sum_j |2^{(s - a_1/p_1) j} u_j(z, .)|^{p_1} )^{1/p_1} ||_{L_p''}
/// at slice index `z` of the inner axis.
fn slice_functional(
    blocks: &[GridField],
    z: usize,
    s: f64,
    a1: f64,
    p: &ExponentVector,
) -> Result<f64> {
    let p1 = p.get(0);
    let p_tang = p.drop_axis(0).map_err(|e| anyhow!("{e}"))?;
    let tang_grid = blocks[0]
        .grid()
        .drop_axis(0)
        .map_err(|e| anyhow!("{e}"))?;
    let mut acc = vec![0.0f64; tang_grid.len()];
    let weight_exp = s - a1 / p1;
    for (j, b) in blocks.iter().enumerate() {
        let slice = restrict_hyperplane(b, 0, z).map_err(|e| anyhow!("{e}"))?;
        let w = libm::exp2(weight_exp * j as f64);
        if p1.is_finite() {
            for (i, c) in slice.values().iter().enumerate() {
                acc[i] += libm::pow(w * c.norm(), p1);
            }
        } else {
            for (i, c) in slice.values().iter().enumerate() {
                acc[i] = acc[i].max(w * c.norm());
            }
        }
    }
    if p1.is_finite() {
        for v in acc.iter_mut() {
            *v = libm::pow(*v, 1.0 / p1);
        }
    }
    Ok(mixed_lp_of_abs(acc, &tang_grid, &p_tang))
}

struct TraceSetup {
    grid: Grid,
    a: AnisotropyVector,
    fam: LPFamily,
    p: ExponentVector,
    s: f64,
    q: f64,
}

fn trace_setups(scale: usize) -> Result<Vec<TraceSetup>> {
    let mut out = Vec::new();
    for (aw, s, pq, q) in [
        (vec![1.0, 1.0], 1.5, vec![2.0, 1.5], 2.0),
        (vec![1.0, 2.0], 2.0, vec![1.5, 2.0], 1.0),
    ] {
        let grid = Grid::cubic(2, std::f64::consts::PI, 128 * scale).map_err(|e| anyhow!("{e}"))?;
        let a = AnisotropyVector::raw(aw).map_err(|e| anyhow!("{e}"))?;
        let fam = build_family(&a, &grid, LPFlavor::Inhomogeneous).map_err(|e| anyhow!("{e}"))?;
        out.push(TraceSetup {
            grid,
            a,
            fam,
            p: pvec(&pq)?,
            s,
            q,
        });
    }
    Ok(out)
}

fn run_trace_estimate(cfg: &SuiteConfig, scale: usize, sup_slices: bool) -> Result<SuiteRun> {
    let name = if sup_slices { "trace-sup-slices" } else { "trace-basic" };
    let constant = super::find(name)?.constant;
    let mut cases = Vec::new();
    for (si, st) in trace_setups(scale)?.iter().enumerate() {
        let radius = libm::pow(
            libm::exp2(st.fam.j_max() as f64),
            1.0 / st.a.max_weight(),
        );
        for e in 0..cfg.ensemble / 2 {
            let mut rng = rng_for(cfg.seed, (si * 1000 + e) as u64);
            let u = band_limited_field(&mut rng, &st.grid, &st.a, Support::Ball(radius));
            let blocks = st.fam.decompose(&u).map_err(|e| anyhow!("{e}"))?.into_blocks();
            let z0 = st.grid.origin_index(0);
            let lhs = if sup_slices {
                let mut worst = 0.0f64;
                for z in 0..st.grid.points(0) {
                    worst = worst.max(slice_functional(&blocks, z, st.s, st.a.weight(0), &st.p)?);
                }
                worst
            } else {
                slice_functional(&blocks, z0, st.s, st.a.weight(0), &st.p)?
            };
            let sp = SpaceParams::new(st.s, st.a.clone(), st.p.clone(), st.q, Scale::F)
                .map_err(|e| anyhow!("{e}"))?;
            let rhs = space_quasi_norm(&u, &sp, &st.fam)
                .map_err(|e| anyhow!("{e}"))?
                .value;
            cases.push(case(format!("cfg{si}-{e}"), lhs, rhs, constant));
        }
    }
    Ok(SuiteRun { cases, notes: Vec::new() })
}

pub fn trace_basic(cfg: &SuiteConfig, scale: usize) -> Result<SuiteRun> {
    run_trace_estimate(cfg, scale, false)
}

pub fn trace_sup_slices(cfg: &SuiteConfig, scale: usize) -> Result<SuiteRun> {
    run_trace_estimate(cfg, scale, true)
}

/// Geometry for the right-inverse checks: a long, well-resolved normal axis
/// (the profile's periodization tail decides the reachable accuracy) and a
/// small tangential torus carrying band-limited data.
struct RightInvSetup {
    target: Grid,
    a: AnisotropyVector,
    tang_grid: Grid,
    tang_fam: LPFamily,
    full_fam: LPFamily,
}

fn rightinv_setup(axis: TraceAxis, tang_dims: usize) -> Result<RightInvSetup> {
    let normal = (320.0, if tang_dims == 1 { 8192 } else { 4096 });
    let tang = if tang_dims == 1 {
        vec![(std::f64::consts::PI, 256)]
    } else {
        vec![(std::f64::consts::PI, 32), (std::f64::consts::PI, 32)]
    };
    let mut dims = tang.clone();
    match axis {
        TraceAxis::Inner => dims.insert(0, normal),
        TraceAxis::Outer => dims.push(normal),
    }
    let target = Grid::from_dims(&dims).map_err(|e| anyhow!("{e}"))?;
    let a = AnisotropyVector::isotropic(tang_dims + 1);
    let k = axis.index(target.dim());
    let tang_grid = target.drop_axis(k).map_err(|e| anyhow!("{e}"))?;
    let tang_fam = build_family(
        &AnisotropyVector::isotropic(tang_dims),
        &tang_grid,
        LPFlavor::Inhomogeneous,
    )
    .map_err(|e| anyhow!("{e}"))?;
    let full_fam = build_family(&a, &target, LPFlavor::Inhomogeneous).map_err(|e| anyhow!("{e}"))?;
    Ok(RightInvSetup {
        target,
        a,
        tang_grid,
        tang_fam,
        full_fam,
    })
}

fn tangential_data(st: &RightInvSetup, seed: u64, case_id: u64) -> GridField {
    let mut rng = rng_for(seed, case_id);
    let radius = if st.tang_grid.dim() == 1 { 4.0 } else { 2.0 };
    band_limited_field(
        &mut rng,
        &st.tang_grid,
        &AnisotropyVector::isotropic(st.tang_grid.dim()),
        Support::Ball(radius),
    )
}

/// gamma_nu (K_nu v) = v for nu <= 3, both axes, 1-D and 2-D tangential data.
pub fn trace_rightinv(cfg: &SuiteConfig, _scale: usize) -> Result<SuiteRun> {
    let tol = cfg.tolerance("identity", 1e-8);
    let mut cases = Vec::new();
    let setups = [
        (TraceAxis::Inner, 1usize, 6usize),
        (TraceAxis::Outer, 1, 6),
        (TraceAxis::Inner, 2, 4),
    ];
    for (axis, tang_dims, seeds) in setups {
        let st = rightinv_setup(axis, tang_dims)?;
        let exfam = build_extension_family(axis, 3, &st.target).map_err(|e| anyhow!("{e}"))?;
        let n_seeds = seeds.min(cfg.ensemble);
        for e in 0..n_seeds {
            let v = tangential_data(&st, cfg.seed, (tang_dims * 100 + e) as u64);
            let nu = (e % 4) as u32;
            let ext = extend(&v, &exfam, &st.tang_fam, &st.target, &st.a, nu)
                .map_err(|e| anyhow!("{e}"))?;
            let tr = trace(&ext, &TraceSpec::single(axis, nu), &st.full_fam, None)
                .map_err(|e| anyhow!("{e}"))?;
            let err = tr.field.sub(&v).map_err(|e| anyhow!("{e}"))?.l2_norm() / v.l2_norm();
            let tag = match axis {
                TraceAxis::Inner => "inner",
                TraceAxis::Outer => "outer",
            };
            cases.push(identity_case(
                format!("{tag}-d{tang_dims}-nu{nu}-{e}"),
                err,
                0.0,
                tol,
            ));
        }
    }
    Ok(SuiteRun { cases, notes: Vec::new() })
}

/// rho_m K^{(m)} = identity for m <= 3, both axes.
pub fn cauchy_rightinv(cfg: &SuiteConfig, _scale: usize) -> Result<SuiteRun> {
    let tol = cfg.tolerance("identity", 1e-8);
    let mut cases = Vec::new();
    for axis in [TraceAxis::Inner, TraceAxis::Outer] {
        let st = rightinv_setup(axis, 1)?;
        let exfam = build_extension_family(axis, 3, &st.target).map_err(|e| anyhow!("{e}"))?;
        let n_seeds = 8usize.min(cfg.ensemble);
        for e in 0..n_seeds {
            let m = (e % 3) + 1;
            let vs: Vec<GridField> = (0..m)
                .map(|nu| tangential_data(&st, cfg.seed, (1000 + e * 10 + nu) as u64))
                .collect();
            let ext = cauchy_extension(&vs, &exfam, &st.tang_fam, &st.target, &st.a)
                .map_err(|e| anyhow!("{e}"))?;
            let rows = cauchy_trace(
                &ext,
                &TraceSpec {
                    axis,
                    order: 0,
                    rows: m as u32,
                },
                &st.full_fam,
            )
            .map_err(|e| anyhow!("{e}"))?;
            let tag = match axis {
                TraceAxis::Inner => "inner",
                TraceAxis::Outer => "outer",
            };
            for (nu, (row, v)) in rows.iter().zip(&vs).enumerate() {
                let err = row.sub(v).map_err(|e| anyhow!("{e}"))?.l2_norm() / v.l2_norm();
                cases.push(identity_case(format!("{tag}-m{m}-row{nu}-{e}"), err, 0.0, tol));
            }
        }
    }
    Ok(SuiteRun { cases, notes: Vec::new() })
}
