//! The Carnot–Carathéodory distance: closed form, geodesic arcs, the
//! independent collocation oracle, and the eikonal equation.

use geokit::cc::{
    cc_dist, cc_oracle, comparability_scan, connecting_arc, eikonal_check, sample_arc,
    CCSolverConfig,
};
use geokit::heis::HeisPoint;

fn main() -> geokit::Result<()> {
    let cfg = CCSolverConfig::default();
    let o = HeisPoint::origin(1);

    // straight lines through the origin are geodesics
    let p = HeisPoint::new(1, vec![3.0, 4.0, 0.0])?;
    println!("d_cc(o, (3,4,0)) = {:.9}  (Euclidean 5)", cc_dist(&o, &p, &cfg)?);

    // reaching the center costs sqrt(pi |t|)
    let c = HeisPoint::new(1, vec![0.0, 0.0, 1.0])?;
    let d_center = cc_dist(&o, &c, &cfg)?;
    println!("d_cc(o, (0,0,1)) = {:.9}  (sqrt(pi) = {:.9})", d_center, std::f64::consts::PI.sqrt());

    // the collocation oracle reproduces the closed form from scratch
    let oracle = cc_oracle(&o, &c, 64, 8, 0)?;
    println!(
        "oracle length = {:.6}, endpoint residual = {:.2e}, gap = {:.2}%",
        oracle.length,
        oracle.endpoint_residual,
        100.0 * (oracle.length - d_center).abs() / d_center
    );

    // the connecting arc traces the minimizing lift of a circular arc
    let arc = connecting_arc(&o, &c)?;
    let pts = sample_arc(&arc, 5)?;
    for (i, pt) in pts.iter().enumerate() {
        println!("  arc[{i}] = {:?}", pt.coords().iter().map(|v| (v * 1e4).round() / 1e4).collect::<Vec<_>>());
    }

    // |grad_H d_o| = 1 away from the center coset
    let test = HeisPoint::new(1, vec![0.4, -0.3, 0.2])?;
    println!("eikonal at (0.4,-0.3,0.2): {:.6}", eikonal_check(&o, &test, 1e-4)?);

    // empirical comparability constants against Euclidean and Koranyi
    let rep = comparability_scan(1, -1.0, 1.0, 100, 0)?;
    println!(
        "comparability over {} pairs: C_low = {:.3}, C_high = {:.3}, C_root = {:.3}",
        rep.samples, rep.c_low, rep.c_high, rep.c_root
    );
    Ok(())
}
