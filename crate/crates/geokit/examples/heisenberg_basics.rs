//! Group operations, the Korányi gauge, and the horizontal frame on H^1.

use geokit::heis::{
    contact_form, dilate, frame_push, group_mul, horizontal_norm, inverse, koranyi_dist,
    koranyi_norm, HeisPoint, HorizontalVec,
};

fn main() -> geokit::Result<()> {
    let p = HeisPoint::new(1, vec![1.0, 0.0, 0.0])?;
    let q = HeisPoint::new(1, vec![0.0, 1.0, 0.0])?;

    // the product picks up a vertical twist: the commutator is central
    let pq = group_mul(&p, &q)?;
    let qp = group_mul(&q, &p)?;
    println!("p * q = {:?}", pq.coords());
    println!("q * p = {:?}", qp.coords());
    let comm = group_mul(&group_mul(&inverse(&p), &inverse(&q))?, &pq)?;
    println!("commutator = {:?}", comm.coords());

    // the gauge is homogeneous of degree 1 under the parabolic dilations
    let r = HeisPoint::new(1, vec![0.3, -0.7, 0.5])?;
    for s in [0.5, 2.0, 10.0] {
        println!(
            "|delta_{s}(r)| = {:.6} = {s} * {:.6}",
            koranyi_norm(&dilate(s, &r)?),
            koranyi_norm(&r)
        );
    }
    println!("d_K(p, q) = {:.6}", koranyi_dist(&p, &q)?);

    // frame vectors are annihilated by the contact form wherever they sit
    let v = HorizontalVec::new(r.clone(), vec![2.0, -1.0])?;
    let ambient = frame_push(&v);
    println!("frame push of (2 X - Y) at r = {ambient:?}");
    println!("contact form on it = {:.3e}", contact_form(&r, &ambient));
    println!("horizontal norm = {:.6}", horizontal_norm(&v));
    Ok(())
}
