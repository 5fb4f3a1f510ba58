//! The two horizontal sphere embeddings: the Cayley-transform sphere and
//! the Legendrian lift, with horizontality and distortion diagnostics.

use geokit::embed::{
    bilip_estimate, cayley_phi, cayley_phi_on_sphere, legendrian_f, pullback_defect,
    sphere_lattice, SpherePoint, TargetMetric,
};
use geokit::heis::koranyi_norm;

fn main() -> geokit::Result<()> {
    // the Cayley image lies on the unit Koranyi sphere
    for x in [-2.0, 0.0, 0.5, 3.0] {
        let p = cayley_phi(1, Some(&[x]))?;
        println!("phi({x:5.1}) = {:?}  |.|_K = {:.12}", p.coords(), koranyi_norm(&p));
    }
    let inf = cayley_phi(1, None)?;
    println!("phi(inf)  = {:?}", inf.coords());

    // the Legendrian sphere has exact pole heights -+4/3
    for p in [
        SpherePoint::new(vec![1.0, 0.0])?,
        SpherePoint::new(vec![-1.0, 0.0])?,
        SpherePoint::new(vec![0.0, 1.0])?,
    ] {
        let f = legendrian_f(&p);
        println!("F({:?}) = {:?}", p.coords(), f.coords());
    }

    // both maps are horizontal: the pullback defect vanishes with the mesh
    for (name, map) in [
        ("legendrian", legendrian_f as fn(&SpherePoint) -> geokit::heis::HeisPoint),
        ("cayley", cayley_phi_on_sphere as fn(&SpherePoint) -> geokit::heis::HeisPoint),
    ] {
        let mut mesh = 1e-2;
        print!("{name}: pullback defect at mesh 1e-2, 5e-3, 2.5e-3 =");
        for _ in 0..3 {
            print!(" {:.3e}", pullback_defect(map, 1, mesh, 64)?);
            mesh /= 2.0;
        }
        println!();
        let rep = bilip_estimate(map, TargetMetric::Koranyi, 1, 500, 0)?;
        println!(
            "{name}: Koranyi distortion in [{:.3}, {:.3}] over {} pairs",
            rep.lower, rep.upper, rep.samples
        );
    }

    // a lattice tour of the Legendrian circle
    for p in sphere_lattice(1, 8) {
        println!("  F{:?} -> {:?}", p.coords(), legendrian_f(&p).coords());
    }
    Ok(())
}
