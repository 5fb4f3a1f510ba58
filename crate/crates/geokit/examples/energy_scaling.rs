//! Horizontal Sobolev energy of the cavitation composition F(x / |x|) on
//! the punctured disk: finite for p < 2, logarithmically divergent at p = 2.

use geokit::embed::legendrian_f;
use geokit::lab::{compose_on_grid, contact_residual, horizontal_energy_in};

fn main() -> geokit::Result<()> {
    let h = 2f64.powi(-9);
    let eps = 2f64.powi(-8);
    let grid = compose_on_grid(legendrian_f, 2, h, eps)?;
    println!("grid: h = 2^-9, puncture 2^-8, contact residual = {:.3e}", contact_residual(&grid)?);

    let annulus = |p: f64, r_in: f64, r_out: f64| {
        horizontal_energy_in(&grid, p, f64::INFINITY, |x| {
            let r = (x[0] * x[0] + x[1] * x[1]).sqrt();
            r >= r_in && r < r_out
        })
    };

    for p in [1.5, 2.0] {
        println!("p = {p}: dyadic annular energies inward from the boundary");
        let mut cumulative = 0.0;
        for k in 0..6 {
            let r_out = 2f64.powi(-k);
            let r_in = r_out / 2.0;
            let e = annulus(p, r_in, r_out)?;
            cumulative += e;
            println!("  [{r_in:.6}, {r_out:.6}): {e:.6}   cumulative {cumulative:.6}");
        }
        if p < 2.0 {
            println!("  ratios tend to 2^(p-2) = {:.4}: the series converges", 2f64.powf(p - 2.0));
        } else {
            println!("  equal increments per dyadic step: logarithmic divergence");
        }
    }
    Ok(())
}
