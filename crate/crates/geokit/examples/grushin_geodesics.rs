//! The Grushin plane: the geodesic family to axis points, lengths,
//! distances, and Gauss curvature.

use geokit::cc::CCSolverConfig;
use geokit::grushin::{
    brioschi_curvature_fd, grushin_curvature, grushin_dist, grushin_length, sample_geodesic,
    AxisPolicy, GrushinGeodesic,
};
use std::f64::consts::PI;

fn main() -> geokit::Result<()> {
    // the m-th geodesic from the origin to (0, y1) has length sqrt(2 pi m y1)
    for m in 1..=3 {
        let g = GrushinGeodesic::new(m, 1.0, true)?;
        let curve = sample_geodesic(&g, 20_000)?;
        let len = grushin_length(&curve, AxisPolicy::EndpointsOnly)?;
        println!(
            "m = {m}: numeric length = {:.6}, closed form = {:.6}, speed = {:.6}",
            len,
            (2.0 * PI * m as f64).sqrt(),
            g.speed()
        );
    }

    // distances: axis pairs in closed form, generic pairs via collocation
    let cfg = CCSolverConfig::default();
    println!("d((0,0), (0,1))   = {:.6}  (sqrt(2 pi) = {:.6})",
        grushin_dist((0.0, 0.0), (0.0, 1.0), &cfg)?, (2.0 * PI).sqrt());
    println!("d((1,0), (2,0))   = {:.6}", grushin_dist((1.0, 0.0), (2.0, 0.0), &cfg)?);
    println!("d((1,0), (1,1))   = {:.6}", grushin_dist((1.0, 0.0), (1.0, 1.0), &cfg)?);

    // Gauss curvature -2/x^2 off the singular axis, against FD Brioschi
    for x in [0.5, 1.0, 2.0] {
        let exact = grushin_curvature(x)?;
        let fd = brioschi_curvature_fd(|_, _| 1.0, |x: f64, _| 1.0 / (x * x), x, 0.0, 1e-3 * x);
        println!("K({x}) = {exact:.6}  (finite differences {fd:.6})");
    }
    Ok(())
}
