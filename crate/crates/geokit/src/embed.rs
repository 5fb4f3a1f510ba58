//! Horizontal embeddings of spheres into the Heisenberg group: the
//! Cayley/Siegel construction, the Legendrian lift of the sphere immersion,
//! and bi-Lipschitz distortion scans.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cc::{cc_dist, CCSolverConfig};
use crate::error::{GeoError, Result};
use crate::heis::{contact_form, koranyi_dist, HeisPoint};

/// A point of the unit sphere S^n in R^{n+1}.
#[derive(Debug, Clone, PartialEq)]
pub struct SpherePoint {
    n: usize,
    coords: Vec<f64>,
}

impl SpherePoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(GeoError::InvalidInput("sphere point needs n+1 >= 2 coordinates".into()));
        }
        let norm2: f64 = coords.iter().map(|c| c * c).sum();
        if (norm2 - 1.0).abs() > 1e-12 {
            return Err(GeoError::OffSurface(format!("|x|^2 = {norm2} is not 1")));
        }
        Ok(Self { n: coords.len() - 1, coords })
    }

    /// Normalizes an arbitrary nonzero vector onto the sphere.
    pub fn project(mut coords: Vec<f64>) -> Result<Self> {
        let norm: f64 = coords.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(GeoError::InvalidInput("cannot project the origin to the sphere".into()));
        }
        for c in coords.iter_mut() {
            *c /= norm;
        }
        // renormalize once more to absorb rounding
        let norm: f64 = coords.iter().map(|c| c * c).sum::<f64>().sqrt();
        for c in coords.iter_mut() {
            *c /= norm;
        }
        Ok(Self { n: coords.len() - 1, coords })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Great-circle distance to another sphere point.
    pub fn geodesic_dist(&self, other: &SpherePoint) -> f64 {
        let dot: f64 = self.coords.iter().zip(&other.coords).map(|(a, b)| a * b).sum();
        dot.clamp(-1.0, 1.0).acos()
    }
}

/// Complex vector stored as `(re, im)` pairs.
pub type ComplexVec = Vec<[f64; 2]>;

/// Cayley transform from the unit-ball boundary to the Siegel boundary:
/// `w_j = z_j / (1 + z_{n+1})`, `w_{n+1} = i (1 - z_{n+1}) / (1 + z_{n+1})`.
pub fn cayley_transform(z: &ComplexVec) -> Result<ComplexVec> {
    if z.len() < 2 {
        return Err(GeoError::InvalidInput("need at least two complex coordinates".into()));
    }
    let last = z[z.len() - 1];
    let den = [1.0 + last[0], last[1]];
    let den2 = den[0] * den[0] + den[1] * den[1];
    if den2 < 1e-24 {
        return Err(GeoError::PointAtInfinity);
    }
    let mut w = Vec::with_capacity(z.len());
    for zj in &z[..z.len() - 1] {
        // z_j / (1 + z_{n+1})
        w.push([
            (zj[0] * den[0] + zj[1] * den[1]) / den2,
            (zj[1] * den[0] - zj[0] * den[1]) / den2,
        ]);
    }
    // i (1 - z_{n+1}) / (1 + z_{n+1})
    let num = [1.0 - last[0], -last[1]];
    let quot = [
        (num[0] * den[0] + num[1] * den[1]) / den2,
        (num[1] * den[0] - num[0] * den[1]) / den2,
    ];
    w.push([-quot[1], quot[0]]);
    Ok(w)
}

/// Defect of the Siegel boundary relation `Im w_{n+1} = sum |w_j|^2`.
pub fn siegel_boundary_defect(w: &ComplexVec) -> f64 {
    let last = w[w.len() - 1];
    let sum: f64 = w[..w.len() - 1].iter().map(|c| c[0] * c[0] + c[1] * c[1]).sum();
    (last[1] - sum).abs()
}

/// Projection of the Siegel boundary onto the first `2n+1` coordinates,
/// identifying it with the Heisenberg group.
pub fn siegel_project(w: &ComplexVec) -> Result<HeisPoint> {
    let defect = siegel_boundary_defect(w);
    if defect > 1e-8 {
        return Err(GeoError::OffSurface(format!(
            "Siegel boundary relation violated by {defect}"
        )));
    }
    let n = w.len() - 1;
    let mut coords = Vec::with_capacity(2 * n + 1);
    for c in &w[..n] {
        coords.push(c[0]);
        coords.push(c[1]);
    }
    coords.push(w[n][0]);
    HeisPoint::new(n, coords)
}

/// The explicit horizontal sphere parameterization from the Cayley
/// construction, as a map from `R^n` (plus a point at infinity) to `H^n`:
///
/// `phi(x) = ( A x - B i x, (|x|^4 - 1)/(|x|^4 + 1) )` with
/// `A = (|x|^2 + 1)/(|x|^4 + 1)`, `B = (|x|^2 - 1)/(|x|^4 + 1)`;
/// `phi(inf) = (0, 1)`.
pub fn cayley_phi(n: usize, x: Option<&[f64]>) -> Result<HeisPoint> {
    let mut coords = vec![0.0; 2 * n + 1];
    match x {
        None => {
            coords[2 * n] = 1.0;
        }
        Some(x) => {
            if x.len() != n {
                return Err(GeoError::InvalidInput(format!(
                    "expected {} real coordinates, got {}",
                    n,
                    x.len()
                )));
            }
            let r2: f64 = x.iter().map(|c| c * c).sum();
            let r4 = r2 * r2;
            let a = (r2 + 1.0) / (r4 + 1.0);
            let b = (r2 - 1.0) / (r4 + 1.0);
            for j in 0..n {
                // z_j = (A - iB) x_j
                coords[2 * j] = a * x[j];
                coords[2 * j + 1] = -b * x[j];
            }
            coords[2 * n] = (r4 - 1.0) / (r4 + 1.0);
        }
    }
    HeisPoint::new(n, coords)
}

/// The Legendrian lift of the sphere immersion `(x0, x') -> (x_j, x0 x_j)`:
/// `F(x0, x') = (x_1, x0 x_1, ..., x_n, x0 x_n, (2/3) x0^3 - 2 x0)`,
/// integration constant fixed to zero.
pub fn legendrian_f(p: &SpherePoint) -> HeisPoint {
    let n = p.n();
    let x0 = p.coords()[0];
    let mut coords = Vec::with_capacity(2 * n + 1);
    for j in 1..=n {
        coords.push(p.coords()[j]);
        coords.push(x0 * p.coords()[j]);
    }
    coords.push((2.0 * x0 * x0 * x0 - 6.0 * x0) / 3.0);
    HeisPoint::new(n, coords).expect("legendrian image of a finite sphere point is finite")
}

/// Deterministic quasi-uniform sphere samples: uniform angles on S^1, a
/// Fibonacci lattice on S^2, and a seeded low-discrepancy fallback above.
pub fn sphere_lattice(n: usize, count: usize) -> Vec<SpherePoint> {
    match n {
        1 => (0..count)
            .map(|i| {
                let th = 2.0 * std::f64::consts::PI * i as f64 / count as f64;
                SpherePoint::new(vec![th.cos(), th.sin()]).unwrap()
            })
            .collect(),
        2 => {
            let golden = (1.0 + 5.0_f64.sqrt()) / 2.0;
            (0..count)
                .map(|i| {
                    let z = 1.0 - (2.0 * i as f64 + 1.0) / count as f64;
                    let r = (1.0 - z * z).max(0.0).sqrt();
                    let th = 2.0 * std::f64::consts::PI * i as f64 / golden;
                    SpherePoint::project(vec![r * th.cos(), r * th.sin(), z]).unwrap()
                })
                .collect()
        }
        _ => random_sphere_points(n, count, 0),
    }
}

/// Seeded uniform samples on S^n via normalized Gaussians.
pub fn random_sphere_points(n: usize, count: usize, seed: u64) -> Vec<SpherePoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let v: Vec<f64> = (0..n + 1)
            .map(|_| {
                // Box-Muller
                let u1: f64 = rng.gen_range(1e-12..1.0);
                let u2: f64 = rng.gen_range(0.0..1.0);
                (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
            })
            .collect();
        if let Ok(p) = SpherePoint::project(v) {
            out.push(p);
        }
    }
    out
}

/// Orthonormal basis of the tangent space at `p`, by Gram-Schmidt against
/// the coordinate directions.
fn tangent_basis(p: &SpherePoint) -> Vec<Vec<f64>> {
    let dim = p.n() + 1;
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(p.n());
    for i in 0..dim {
        if basis.len() == p.n() {
            break;
        }
        let mut v = vec![0.0; dim];
        v[i] = 1.0;
        // remove the normal component and previous tangents
        let dot: f64 = v.iter().zip(p.coords()).map(|(a, b)| a * b).sum();
        for (vi, pi) in v.iter_mut().zip(p.coords()) {
            *vi -= dot * pi;
        }
        for b in &basis {
            let dot: f64 = v.iter().zip(b).map(|(a, c)| a * c).sum();
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= dot * bi;
            }
        }
        let norm: f64 = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm > 1e-8 {
            for c in v.iter_mut() {
                *c /= norm;
            }
            basis.push(v);
        }
    }
    basis
}

/// Walks a unit tangent direction along the great circle by `step`.
fn great_circle_step(p: &SpherePoint, dir: &[f64], step: f64) -> SpherePoint {
    let coords: Vec<f64> = p
        .coords()
        .iter()
        .zip(dir)
        .map(|(pc, dc)| pc * step.cos() + dc * step.sin())
        .collect();
    SpherePoint::project(coords).unwrap()
}

/// Maximum contact-form value of finite-difference image tangents per unit
/// step, over a deterministic lattice of sphere points and tangent
/// directions. Vanishes linearly in `mesh` for horizontal maps.
pub fn pullback_defect<F>(map: F, n: usize, mesh: f64, lattice: usize) -> Result<f64>
where
    F: Fn(&SpherePoint) -> HeisPoint,
{
    if !(mesh > 0.0) {
        return Err(GeoError::OutOfRange("mesh must be positive".into()));
    }
    let mut worst: f64 = 0.0;
    for p in sphere_lattice(n, lattice) {
        let image = map(&p);
        for dir in tangent_basis(&p) {
            let ahead = map(&great_circle_step(&p, &dir, mesh));
            let diff: Vec<f64> = ahead
                .coords()
                .iter()
                .zip(image.coords())
                .map(|(a, b)| (a - b) / mesh)
                .collect();
            worst = worst.max(contact_form(&image, &diff).abs());
        }
    }
    Ok(worst)
}

/// Which target metric a distortion scan uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetMetric {
    Koranyi,
    CarnotCaratheodory,
}

/// Bi-Lipschitz distortion bounds of an embedding, from a random pair scan.
#[derive(Debug, Clone)]
pub struct DistortionReport {
    pub lower: f64,
    pub upper: f64,
    pub argmin_pair: (SpherePoint, SpherePoint),
    pub argmax_pair: (SpherePoint, SpherePoint),
    pub samples: usize,
}

/// Generic distortion scan: min/max of `d_target(F p, F q) / d_sphere(p, q)`
/// over seeded random pairs.
pub fn distortion_scan<F, D, T>(
    map: F,
    dist: D,
    n: usize,
    samples: usize,
    seed: u64,
) -> Result<DistortionReport>
where
    F: Fn(&SpherePoint) -> T,
    D: Fn(&T, &T) -> f64,
{
    if samples < 2 {
        return Err(GeoError::InvalidInput("samples must be at least 2".into()));
    }
    let pts = random_sphere_points(n, 2 * samples, seed);
    let mut lower = f64::INFINITY;
    let mut upper: f64 = 0.0;
    let mut argmin = (pts[0].clone(), pts[1].clone());
    let mut argmax = argmin.clone();
    let mut used = 0;
    for pair in pts.chunks_exact(2) {
        let ds = pair[0].geodesic_dist(&pair[1]);
        if ds < 1e-9 {
            continue;
        }
        let ratio = dist(&map(&pair[0]), &map(&pair[1])) / ds;
        if ratio < lower {
            lower = ratio;
            argmin = (pair[0].clone(), pair[1].clone());
        }
        if ratio > upper {
            upper = ratio;
            argmax = (pair[0].clone(), pair[1].clone());
        }
        used += 1;
    }
    Ok(DistortionReport { lower, upper, argmin_pair: argmin, argmax_pair: argmax, samples: used })
}

/// Distortion scan of a Heisenberg-valued embedding in the chosen metric.
pub fn bilip_estimate<F>(
    map: F,
    metric: TargetMetric,
    n: usize,
    samples: usize,
    seed: u64,
) -> Result<DistortionReport>
where
    F: Fn(&SpherePoint) -> HeisPoint,
{
    let cfg = CCSolverConfig::default();
    distortion_scan(
        map,
        move |a: &HeisPoint, b: &HeisPoint| match metric {
            TargetMetric::Koranyi => koranyi_dist(a, b).unwrap(),
            TargetMetric::CarnotCaratheodory => cc_dist(a, b, &cfg).unwrap(),
        },
        n,
        samples,
        seed,
    )
}

/// Sphere parameterization used to drive `cayley_phi` over S^n: the inverse
/// stereographic chart from the plane, with the pole mapped to infinity.
pub fn cayley_phi_on_sphere(p: &SpherePoint) -> HeisPoint {
    let n = p.n();
    let last = p.coords()[n];
    if (1.0 - last).abs() < 1e-14 {
        return cayley_phi(n, None).unwrap();
    }
    let x: Vec<f64> = p.coords()[..n].iter().map(|c| c / (1.0 - last)).collect();
    cayley_phi(n, Some(&x)).unwrap()
}
