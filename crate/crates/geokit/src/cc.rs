//! Carnot-Caratheodory distance on the Heisenberg group.
//!
//! The fast solver reduces to the origin by left translation, then to the
//! radial profile `(|z|, t)` by unitary rotation, and solves a bracketed
//! one-dimensional equation for the twist of the lifted circular arc. An
//! independent direct-collocation oracle over piecewise-constant horizontal
//! controls provides validation upper bounds.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{GeoError, Result};
use crate::heis::{
    contact_form, group_mul, inverse, koranyi_dist, koranyi_norm, HeisPoint,
};

/// Configuration for the variational pieces of the distance solvers.
#[derive(Debug, Clone)]
pub struct CCSolverConfig {
    /// Number of piecewise-constant control segments in the oracle.
    pub controls_per_path: usize,
    /// Independent randomized restarts of the oracle.
    pub restarts: usize,
    /// Convergence tolerance on length.
    pub tol: f64,
    /// Iteration cap per penalty stage.
    pub max_iter: usize,
    /// RNG seed for restart initialization.
    pub seed: u64,
}

impl Default for CCSolverConfig {
    fn default() -> Self {
        Self { controls_per_path: 64, restarts: 8, tol: 1e-6, max_iter: 400, seed: 0 }
    }
}

impl CCSolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.controls_per_path < 2 {
            return Err(GeoError::InvalidInput("controls_per_path must be at least 2".into()));
        }
        if !(self.tol > 0.0) {
            return Err(GeoError::InvalidInput("tol must be positive".into()));
        }
        if self.restarts == 0 || self.max_iter == 0 {
            return Err(GeoError::InvalidInput("restarts and max_iter must be positive".into()));
        }
        Ok(())
    }
}

/// A unit-speed geodesic arc: the horizontal lift of a planar circular arc
/// (a straight line when `twist == 0`) issued from `start`.
#[derive(Debug, Clone)]
pub struct GeodesicArc {
    start: HeisPoint,
    /// Unit initial horizontal velocity, frame coefficients `(a1,b1,...)`.
    direction: Vec<f64>,
    /// Signed curvature of the planar projection.
    twist: f64,
    /// Total arclength.
    duration: f64,
}

impl GeodesicArc {
    pub fn new(start: HeisPoint, direction: Vec<f64>, twist: f64, duration: f64) -> Result<Self> {
        if direction.len() != 2 * start.n() {
            return Err(GeoError::InvalidInput(format!(
                "direction must have {} components",
                2 * start.n()
            )));
        }
        let norm: f64 = direction.iter().map(|c| c * c).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(GeoError::InvalidInput(format!(
                "direction must be a unit vector, |v| = {norm}"
            )));
        }
        if !(duration >= 0.0) {
            return Err(GeoError::InvalidInput("duration must be nonnegative".into()));
        }
        Ok(Self { start, direction, twist, duration })
    }

    pub fn start(&self) -> &HeisPoint {
        &self.start
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn twist(&self) -> f64 {
        self.twist
    }
}

/// Point at arclength `s` along the arc.
///
/// From the origin with twist `k` and complex initial velocity `v`, the
/// planar part is `z_j(s) = v_j (e^{iks} - 1)/(ik)` and the vertical part
/// is `t(s) = (2/k^2)(sin(ks) - ks)`; the result is left translated by
/// `start`.
pub fn geodesic_point(arc: &GeodesicArc, s: f64) -> Result<HeisPoint> {
    if !(0.0 <= s && s <= arc.duration + 1e-15) {
        return Err(GeoError::OutOfRange(format!(
            "arclength {s} outside [0, {}]",
            arc.duration
        )));
    }
    let n = arc.start.n();
    let k = arc.twist;
    let mut coords = vec![0.0; 2 * n + 1];
    if k.abs() < 1e-14 {
        for j in 0..2 * n {
            coords[j] = arc.direction[j] * s;
        }
        // straight horizontal line: no vertical gain
    } else {
        // complex factor w(s) = sin(ks)/k + i (1 - cos(ks))/k
        let wr = (k * s).sin() / k;
        let wi = (1.0 - (k * s).cos()) / k;
        for j in 0..n {
            let vr = arc.direction[2 * j];
            let vi = arc.direction[2 * j + 1];
            coords[2 * j] = vr * wr - vi * wi;
            coords[2 * j + 1] = vr * wi + vi * wr;
        }
        coords[2 * n] = 2.0 / (k * k) * ((k * s).sin() - k * s);
    }
    let local = HeisPoint::new(n, coords)?;
    group_mul(&arc.start, &local)
}

/// Samples the arc at `m + 1` equally spaced arclengths.
pub fn sample_arc(arc: &GeodesicArc, m: usize) -> Result<Vec<HeisPoint>> {
    (0..=m)
        .map(|i| geodesic_point(arc, arc.duration * i as f64 / m as f64))
        .collect()
}

/// `mu(psi) = psi/sin^2(psi) - cot(psi)`, the vertical-to-radial profile of
/// the geodesic family in the half-angle `psi = k*s/2`. Strictly increasing
/// from 0 to infinity on `(0, pi)`.
fn twist_profile(psi: f64) -> f64 {
    let s = psi.sin();
    psi / (s * s) - psi.cos() / s
}

/// Solves `mu(psi) = v` for `psi` in `(0, pi)` by bisection.
fn solve_twist(v: f64) -> f64 {
    debug_assert!(v >= 0.0);
    if v < 1e-8 {
        // series: mu(psi) = (2/3) psi + O(psi^3)
        return 1.5 * v;
    }
    let mut lo = 0.0_f64;
    let mut hi = std::f64::consts::PI;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if twist_profile(mid) < v {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// CC distance from the origin to the radial profile `(rho, t)`, `rho >= 0`.
fn cc_dist_radial(rho: f64, t: f64) -> f64 {
    let t = t.abs();
    if rho == 0.0 {
        // full circle: d = sqrt(pi |t|)
        return (std::f64::consts::PI * t).sqrt();
    }
    if t == 0.0 {
        return rho;
    }
    let v = t / (rho * rho);
    let psi = solve_twist(v);
    if psi < 1e-6 {
        // d = rho * psi / sin(psi), expanded for tiny psi
        let p2 = psi * psi;
        return rho * (1.0 + p2 / 6.0 + 7.0 * p2 * p2 / 360.0);
    }
    rho * psi / psi.sin()
}

/// Carnot-Caratheodory distance via the geodesic family.
pub fn cc_dist(p: &HeisPoint, q: &HeisPoint, cfg: &CCSolverConfig) -> Result<f64> {
    cfg.validate()?;
    if p.n() != q.n() {
        return Err(GeoError::DimensionMismatch { expected: p.n(), got: q.n() });
    }
    let delta = group_mul(&inverse(q), p)?;
    Ok(cc_dist_radial(delta.z_norm(), delta.t()))
}

/// The minimizing geodesic arc from `q` to `p` (one of them, when the pair
/// is conjugate along the center). Useful for validating `cc_dist`: the arc
/// ends at `p` and its length is the distance.
pub fn connecting_arc(q: &HeisPoint, p: &HeisPoint) -> Result<GeodesicArc> {
    if p.n() != q.n() {
        return Err(GeoError::DimensionMismatch { expected: p.n(), got: q.n() });
    }
    let n = p.n();
    let delta = group_mul(&inverse(q), p)?;
    let rho = delta.z_norm();
    let t = delta.t();
    let d = cc_dist_radial(rho, t);
    if d == 0.0 {
        let mut dir = vec![0.0; 2 * n];
        dir[0] = 1.0;
        return GeodesicArc::new(q.clone(), dir, 0.0, 0.0);
    }
    if rho == 0.0 {
        // full circle in the (x1, y1) plane
        let k = -t.signum() * 2.0 * std::f64::consts::PI / d;
        let mut dir = vec![0.0; 2 * n];
        dir[0] = 1.0;
        return GeodesicArc::new(q.clone(), dir, k, d);
    }
    if t == 0.0 {
        let dir: Vec<f64> = delta.coords()[..2 * n].iter().map(|c| c / rho).collect();
        return GeodesicArc::new(q.clone(), dir, 0.0, d);
    }
    let psi = solve_twist(t.abs() / (rho * rho));
    let k = -t.signum() * 2.0 * psi / d;
    // initial velocity v = z / w(d) with w = sin(kd)/k + i(1 - cos(kd))/k
    let wr = (k * d).sin() / k;
    let wi = (1.0 - (k * d).cos()) / k;
    let w2 = wr * wr + wi * wi;
    let mut dir = vec![0.0; 2 * n];
    for j in 0..n {
        let zr = delta.coords()[2 * j];
        let zi = delta.coords()[2 * j + 1];
        dir[2 * j] = (zr * wr + zi * wi) / w2;
        dir[2 * j + 1] = (zi * wr - zr * wi) / w2;
    }
    // normalize away rounding before the unit check
    let norm: f64 = dir.iter().map(|c| c * c).sum::<f64>().sqrt();
    for c in dir.iter_mut() {
        *c /= norm;
    }
    GeodesicArc::new(q.clone(), dir, k, d)
}

/// Outcome of the direct-collocation oracle: best length found and the
/// achieved endpoint residual.
#[derive(Debug, Clone, Copy)]
pub struct OracleResult {
    pub length: f64,
    pub endpoint_residual: f64,
}

struct PathEval {
    length: f64,
    energy: f64,
    gap2: f64,
}

/// Integrates the piecewise-constant-control path from the origin and
/// returns its length, energy and squared endpoint gap to `target = (z*, t*)`.
/// The vertical increment per segment is exact: with constant control the
/// integrand of `t' = 2 sum (y a - x b)` is constant along the segment.
fn eval_controls(u: &[f64], n: usize, kk: usize, target: &[f64]) -> PathEval {
    let dt = 1.0 / kk as f64;
    let mut z = vec![0.0; 2 * n];
    let mut t = 0.0;
    let mut length = 0.0;
    let mut energy = 0.0;
    for i in 0..kk {
        let c = &u[2 * n * i..2 * n * (i + 1)];
        let mut speed2 = 0.0;
        for j in 0..n {
            let a = c[2 * j];
            let b = c[2 * j + 1];
            speed2 += a * a + b * b;
            t += 2.0 * dt * (z[2 * j + 1] * a - z[2 * j] * b);
            z[2 * j] += dt * a;
            z[2 * j + 1] += dt * b;
        }
        length += dt * speed2.sqrt();
        energy += dt * speed2;
    }
    let mut gap2 = 0.0;
    for j in 0..2 * n {
        let d = z[j] - target[j];
        gap2 += d * d;
    }
    let dtv = t - target[2 * n];
    gap2 += dtv * dtv;
    PathEval { length, energy, gap2 }
}

fn penalized_objective(u: &[f64], n: usize, kk: usize, target: &[f64], lambda: f64) -> f64 {
    let e = eval_controls(u, n, kk, target);
    e.energy + lambda * e.gap2
}

/// Direct-collocation upper bound on the CC distance: `kk` piecewise
/// constant horizontal controls, endpoint enforced by penalty continuation
/// with multiplicative growth, multi-restart from randomized controls.
pub fn cc_oracle(
    p: &HeisPoint,
    q: &HeisPoint,
    kk: usize,
    restarts: usize,
    seed: u64,
) -> Result<OracleResult> {
    if p.n() != q.n() {
        return Err(GeoError::DimensionMismatch { expected: p.n(), got: q.n() });
    }
    let n = p.n();
    let delta = group_mul(&inverse(q), p)?;
    let target = delta.coords().to_vec();
    let scale = 1.0 + koranyi_norm(&delta);
    if delta.coords().iter().all(|c| c.abs() == 0.0) {
        return Ok(OracleResult { length: 0.0, endpoint_residual: 0.0 });
    }

    let best = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(r as u64));
            // straight-line base controls plus restart-dependent noise; the
            // noise amplitude grows with the restart index to escape the
            // saddle at targets over the center
            let sigma = 0.3 * (1.0 + r as f64);
            let mut u = vec![0.0; 2 * n * kk];
            for i in 0..kk {
                for j in 0..2 * n {
                    u[2 * n * i + j] = target[j] + sigma * rng.gen_range(-1.0..1.0);
                }
            }
            let mut lambda = 10.0;
            let mut residual = f64::INFINITY;
            while lambda <= 1e12 {
                let obj = |v: &[f64]| penalized_objective(v, n, kk, &target, lambda);
                crate::optim::descend(&obj, &mut u, 400);
                let e = eval_controls(&u, n, kk, &target);
                residual = e.gap2.sqrt();
                if residual <= 1e-6 * scale {
                    break;
                }
                lambda *= 10.0;
            }
            let e = eval_controls(&u, n, kk, &target);
            (e.length, residual)
        })
        .reduce(
            || (f64::INFINITY, f64::INFINITY),
            |a, b| {
                // prefer feasible results, then shorter length
                let a_ok = a.1 <= 1e-4 * scale;
                let b_ok = b.1 <= 1e-4 * scale;
                match (a_ok, b_ok) {
                    (true, false) => a,
                    (false, true) => b,
                    _ => {
                        if a.0 <= b.0 {
                            a
                        } else {
                            b
                        }
                    }
                }
            },
        );

    Ok(OracleResult { length: best.0, endpoint_residual: best.1 })
}

/// Finite-difference check of the eikonal equation: the horizontal gradient
/// norm of `d_q` at `p`, central differences of step `h` along the frame
/// directions. Refuses points within `10 h` of the center coset of `q`,
/// where the distance function is not smooth.
pub fn eikonal_check(q: &HeisPoint, p: &HeisPoint, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(GeoError::OutOfRange("step h must be positive".into()));
    }
    let delta = group_mul(&inverse(q), p)?;
    if delta.z_norm() <= 10.0 * h {
        return Err(GeoError::OnCenterCoset);
    }
    let n = p.n();
    let cfg = CCSolverConfig::default();
    let mut sum = 0.0;
    for j in 0..n {
        for dir in 0..2 {
            // ambient frame vector at p: X_j or Y_j
            let mut w = vec![0.0; 2 * n + 1];
            if dir == 0 {
                w[2 * j] = 1.0;
                w[2 * n] = 2.0 * p.y(j);
            } else {
                w[2 * j + 1] = 1.0;
                w[2 * n] = -2.0 * p.x(j);
            }
            let shift = |sign: f64| -> Result<f64> {
                let coords: Vec<f64> = p
                    .coords()
                    .iter()
                    .zip(&w)
                    .map(|(c, wc)| c + sign * h * wc)
                    .collect();
                cc_dist(&HeisPoint::new(n, coords)?, q, &cfg)
            };
            let deriv = (shift(1.0)? - shift(-1.0)?) / (2.0 * h);
            sum += deriv * deriv;
        }
    }
    Ok(sum.sqrt())
}

/// Empirical comparability constants over random pairs in a coordinate box.
#[derive(Debug, Clone, Copy)]
pub struct ComparabilityReport {
    /// `max |p - q| / d_cc`: Euclidean distance is dominated by `C * d_cc`.
    pub c_low: f64,
    /// `max d_cc / |p - q|^{1/2}`: the Holder-1/2 upper bound constant.
    pub c_high: f64,
    /// `max d_cc / d_K`: comparability against the Koranyi gauge.
    pub c_root: f64,
    pub samples: usize,
}

/// Scans random pairs in the box `[lo, hi]^{2n+1}` of `H^n`.
pub fn comparability_scan(
    n: usize,
    lo: f64,
    hi: f64,
    samples: usize,
    seed: u64,
) -> Result<ComparabilityReport> {
    if samples < 2 {
        return Err(GeoError::InvalidInput("samples must be at least 2".into()));
    }
    if !(lo < hi) {
        return Err(GeoError::InvalidInput("box bounds must satisfy lo < hi".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = CCSolverConfig::default();
    let mut c_low: f64 = 0.0;
    let mut c_high: f64 = 0.0;
    let mut c_root: f64 = 0.0;
    let mut used = 0;
    for _ in 0..samples {
        let draw = |rng: &mut ChaCha8Rng| {
            let coords: Vec<f64> = (0..2 * n + 1).map(|_| rng.gen_range(lo..hi)).collect();
            HeisPoint::new(n, coords)
        };
        let p = draw(&mut rng)?;
        let q = draw(&mut rng)?;
        let eucl: f64 = p
            .coords()
            .iter()
            .zip(q.coords())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        if eucl < 1e-12 {
            continue; // degenerate pair
        }
        let dcc = cc_dist(&p, &q, &cfg)?;
        let dk = koranyi_dist(&p, &q)?;
        c_low = c_low.max(eucl / dcc);
        c_high = c_high.max(dcc / eucl.sqrt());
        c_root = c_root.max(dcc / dk);
        used += 1;
    }
    Ok(ComparabilityReport { c_low, c_high, c_root, samples: used })
}

/// Maximum contact defect per unit arclength over a sampled arc; used by
/// refinement tests.
pub fn arc_contact_defect(points: &[HeisPoint]) -> f64 {
    let mut worst: f64 = 0.0;
    for w in points.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let n = a.n();
        let mut inc = vec![0.0; 2 * n + 1];
        let mut mid = vec![0.0; 2 * n + 1];
        for j in 0..2 * n + 1 {
            inc[j] = b.coords()[j] - a.coords()[j];
            mid[j] = 0.5 * (a.coords()[j] + b.coords()[j]);
        }
        let m = HeisPoint::new(n, mid).unwrap();
        let ds: f64 = inc[..2 * n].iter().map(|c| c * c).sum::<f64>().sqrt();
        if ds > 0.0 {
            worst = worst.max(contact_form(&m, &inc).abs() / ds);
        }
    }
    worst
}
