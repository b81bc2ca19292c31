use anilab_cli::ensemble::{band_limited_field, rng_for, Support};
use anilab_core::aniso::AnisotropyVector;
use anilab_core::grid::Grid;
use anilab_core::lp::{build_family, LPFlavor};
use anilab_core::trace::{build_extension_family, extend, trace, TraceAxis, TraceSpec};

#[test]
fn probe_defect() {
    for (l, n) in [(1024.0, 32768usize), (1024.0, 16384)] {
        let target = Grid::from_dims(&[(l, n), (std::f64::consts::PI, 64)]).unwrap();
        let a = AnisotropyVector::isotropic(2);
        let tang_grid = target.drop_axis(0).unwrap();
        let tang_fam = build_family(&AnisotropyVector::isotropic(1), &tang_grid, LPFlavor::Inhomogeneous).unwrap();
        let full_fam = build_family(&a, &target, LPFlavor::Inhomogeneous).unwrap();
        let exfam = build_extension_family(TraceAxis::Inner, 3, &target).unwrap();
        let mut rng = rng_for(7, 42);
        let v = band_limited_field(&mut rng, &tang_grid, &AnisotropyVector::isotropic(1), Support::Ball(4.0));
        for nu in 0..=3u32 {
            let ext = extend(&v, &exfam, &tang_fam, &target, &a, nu).unwrap();
            let tr = trace(&ext, &TraceSpec::single(TraceAxis::Inner, nu), &full_fam, None).unwrap();
            let err = tr.field.sub(&v).unwrap().l2_norm() / v.l2_norm();
            println!("L={l} N={n} nu={nu}: err {err:.3e}");
        }
    }
}
