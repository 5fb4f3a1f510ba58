//! The computable ingredients behind the nondensity arguments: winding
//! numbers, the Stokes pullback identity, and the Jacobian rank bound.

use geokit::curve::SampledCurve;
use geokit::embed::{legendrian_f, random_sphere_points, SpherePoint};
use geokit::lab::{rank_check, stokes_check, winding_number, OneForm};
use std::f64::consts::PI;

fn main() -> geokit::Result<()> {
    // winding numbers are exact on polyline curves
    let circle = |turns: i32| {
        let m = 500;
        let pts: Vec<Vec<f64>> = (0..=m * turns.unsigned_abs() as usize)
            .map(|i| {
                let th = turns.signum() as f64 * 2.0 * PI * i as f64 / m as f64;
                vec![th.cos(), th.sin()]
            })
            .collect();
        SampledCurve::uniform(pts, true).unwrap()
    };
    for turns in [1, 2, -1] {
        println!(
            "winding of the {turns}-fold circle about 0: {}",
            winding_number(&circle(turns), &[0.0, 0.0])?
        );
    }
    println!("about an outside point: {}", winding_number(&circle(1), &[2.5, 0.0])?);

    // Stokes: boundary and interior integrals of x dy agree for disk maps
    for (name, g) in [
        ("identity", Box::new(|x: &[f64; 2]| vec![x[0], x[1]]) as Box<dyn Fn(&[f64; 2]) -> Vec<f64>>),
        (
            "radial stretch",
            Box::new(|x: &[f64; 2]| {
                let r = (x[0] * x[0] + x[1] * x[1]).sqrt();
                vec![r * x[0], r * x[1]]
            }),
        ),
    ] {
        let (b, i) = stokes_check(&g, &OneForm::x_dy(), 1e-2)?;
        println!("{name}: boundary = {b:.5}, interior = {i:.5}, gap = {:.2e}", (b - i).abs());
    }

    // horizontal maps of surfaces into H^2 have Jacobian rank at most 2
    let map = |x: &[f64]| {
        let p = SpherePoint::project(x.to_vec()).unwrap();
        legendrian_f(&p).coords().to_vec()
    };
    let points: Vec<Vec<f64>> = random_sphere_points(2, 200, 0)
        .into_iter()
        .map(|p| p.coords().to_vec())
        .collect();
    let report = rank_check(map, &points, 1e-6)?;
    println!(
        "Legendrian S^2 -> H^2: max rank {} with singular-value ratios {:?}",
        report.max_rank,
        report.sv_ratios.iter().map(|r| format!("{r:.2e}")).collect::<Vec<_>>()
    );
    Ok(())
}
