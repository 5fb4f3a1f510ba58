//! Horizontal lifting of planar curves and the area–holonomy relation.

use geokit::curve::{contact_defect, horizontal_length, horizontal_lift, SampledCurve};
use std::f64::consts::PI;

fn main() -> geokit::Result<()> {
    // lift of the unit circle: the height drops by 4 * (enclosed area)
    let n = 2000;
    let circle: Vec<Vec<f64>> = (0..=n)
        .map(|i| {
            let th = 2.0 * PI * i as f64 / n as f64;
            vec![th.cos(), th.sin()]
        })
        .collect();
    let planar = SampledCurve::uniform(circle, true)?;
    let lifted = horizontal_lift(&planar, 0.0)?;
    let holonomy = lifted.points().last().unwrap()[2];
    println!("unit circle holonomy = {holonomy:.8}  (-4 pi = {:.8})", -4.0 * PI);

    // the lift is horizontal by construction and preserves planar length
    println!("contact defect of the lift = {:.3e}", contact_defect(&lifted)?);
    println!(
        "horizontal length = {:.8}  (2 pi = {:.8})",
        horizontal_length(&lifted, 1e-9)?,
        2.0 * PI
    );

    // a triangle: holonomy = -4 * signed area, area by the shoelace formula
    let tri = vec![
        vec![0.0, 0.0],
        vec![2.0, 0.0],
        vec![0.0, 3.0],
        vec![0.0, 0.0],
    ];
    let planar = SampledCurve::uniform(tri, true)?;
    let lifted = horizontal_lift(&planar, 0.0)?;
    println!(
        "triangle holonomy = {:.8}  (-4 * area = {:.8})",
        lifted.points().last().unwrap()[2],
        -4.0 * 3.0
    );
    Ok(())
}
