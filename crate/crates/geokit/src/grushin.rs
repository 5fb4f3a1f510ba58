//! The Grushin plane: the closed-form geodesic family between axis points,
//! Riemannian length off the singular axis, distance queries, and Gauss
//! curvature.
//!
//! The frame is `xi_1 = d/dx`, `xi_2 = x^n d/dy`, declared orthonormal off
//! the axis; geodesics and curvature are implemented for the `n = 1` plane,
//! where the Riemannian length element off the axis is
//! `ds^2 = dx^2 + x^{-2} dy^2`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cc::CCSolverConfig;
use crate::curve::SampledCurve;
use crate::error::{GeoError, Result};

use std::f64::consts::PI;

/// Parameters of the closed-form geodesic family joining `(0, 0)` to
/// `(0, y1)`: `x(t) = sign * sqrt(2 y1 / (m pi)) sin(m pi t)`,
/// `y(t) = y1 (t - sin(2 m pi t)/(2 m pi))`, `t` in `[0, 1]`.
#[derive(Debug, Clone, Copy)]
pub struct GrushinGeodesic {
    m: usize,
    y1: f64,
    sign: f64,
}

impl GrushinGeodesic {
    pub fn new(m: usize, y1: f64, positive: bool) -> Result<Self> {
        if m == 0 {
            return Err(GeoError::InvalidInput("m must be at least 1".into()));
        }
        if !(y1 > 0.0) {
            return Err(GeoError::InvalidInput("y1 must be positive".into()));
        }
        Ok(Self { m, y1, sign: if positive { 1.0 } else { -1.0 } })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn y1(&self) -> f64 {
        self.y1
    }

    /// The constant speed `sqrt(2 y1 m pi)` of the parameterization, so the
    /// total length is the same value.
    pub fn speed(&self) -> f64 {
        (2.0 * self.y1 * self.m as f64 * PI).sqrt()
    }
}

/// Point of the geodesic at parameter `t` in `[0, 1]`.
pub fn grushin_geodesic_point(g: &GrushinGeodesic, t: f64) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&t) {
        return Err(GeoError::OutOfRange(format!("parameter {t} outside [0, 1]")));
    }
    let mp = g.m as f64 * PI;
    let x = g.sign * (2.0 * g.y1 / mp).sqrt() * (mp * t).sin();
    let y = g.y1 * (t - (2.0 * mp * t).sin() / (2.0 * mp));
    Ok((x, y))
}

/// Samples the geodesic uniformly into a planar curve.
pub fn sample_geodesic(g: &GrushinGeodesic, samples: usize) -> Result<SampledCurve> {
    if samples < 2 {
        return Err(GeoError::InvalidInput("need at least 2 samples".into()));
    }
    let params: Vec<f64> = (0..=samples).map(|i| i as f64 / samples as f64).collect();
    let points: Result<Vec<Vec<f64>>> = params
        .iter()
        .map(|&t| grushin_geodesic_point(g, t).map(|(x, y)| vec![x, y]))
        .collect();
    SampledCurve::new(params, points?, false)
}

/// How axis samples in a length computation are treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisPolicy {
    /// Every sample must stay off the axis.
    Forbid,
    /// Axis samples are allowed as path endpoints only.
    EndpointsOnly,
}

/// Grushin length element along the straight chord between `a` and `b` in
/// parameter `s` in `[0, 1]`.
fn chord_integrand(a: &[f64], b: &[f64], s: f64) -> f64 {
    let dx = b[0] - a[0];
    let dy = b[1] - a[1];
    let x = a[0] + s * dx;
    (dx * dx + (dy / x) * (dy / x)).sqrt()
}

/// Composite open-midpoint quadrature of the chord length with `parts`
/// sub-intervals.
fn chord_open_midpoint(a: &[f64], b: &[f64], parts: usize) -> f64 {
    let mut acc = 0.0;
    for i in 0..parts {
        let s = (2.0 * i as f64 + 1.0) / (2.0 * parts as f64);
        acc += chord_integrand(a, b, s);
    }
    acc / parts as f64
}

/// Riemannian length of a sampled planar curve in the Grushin metric
/// `ds^2 = dx^2 + x^{-2} dy^2`. Segments touching or crossing the axis use
/// open-interval quadrature with one Richardson extrapolation step.
pub fn grushin_length(curve: &SampledCurve, policy: AxisPolicy) -> Result<f64> {
    if curve.dim() != 2 {
        return Err(GeoError::InvalidInput("Grushin curves live in R^2".into()));
    }
    let m = curve.len();
    for (i, p) in curve.points().iter().enumerate() {
        if p[0] == 0.0 {
            let endpoint = i == 0 || i == m - 1;
            match policy {
                AxisPolicy::Forbid => return Err(GeoError::AxisCrossing { index: i }),
                AxisPolicy::EndpointsOnly if !endpoint => {
                    return Err(GeoError::AxisCrossing { index: i })
                }
                AxisPolicy::EndpointsOnly => {}
            }
        }
    }
    let mut total = 0.0;
    for w in curve.points().windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let touches_axis = a[0] == 0.0 || b[0] == 0.0 || a[0].signum() != b[0].signum();
        if touches_axis {
            // open-interval quadrature avoids the axis; Richardson step
            // removes the leading quadrature error
            let l2 = chord_open_midpoint(a, b, 4);
            let l4 = chord_open_midpoint(a, b, 8);
            total += (4.0 * l4 - l2) / 3.0;
        } else {
            let dx = b[0] - a[0];
            let dy = b[1] - a[1];
            let xm = 0.5 * (a[0] + b[0]);
            total += (dx * dx + (dy / xm) * (dy / xm)).sqrt();
        }
    }
    Ok(total)
}

struct GrushinPathEval {
    length: f64,
    energy: f64,
    gap2: f64,
}

/// Integrates piecewise-constant frame controls `(a_i, b_i)` from `p`:
/// `x' = a`, `y' = b x`. The `y` increment is exact for linear `x`.
fn eval_controls(u: &[f64], kk: usize, p: (f64, f64), q: (f64, f64)) -> GrushinPathEval {
    let dt = 1.0 / kk as f64;
    let (mut x, mut y) = p;
    let mut length = 0.0;
    let mut energy = 0.0;
    for i in 0..kk {
        let a = u[2 * i];
        let b = u[2 * i + 1];
        y += b * dt * (x + 0.5 * a * dt);
        x += a * dt;
        let speed2 = a * a + b * b;
        length += dt * speed2.sqrt();
        energy += dt * speed2;
    }
    let gx = x - q.0;
    let gy = y - q.1;
    GrushinPathEval { length, energy, gap2: gx * gx + gy * gy }
}

/// Direct-collocation upper bound on the Grushin distance.
pub fn grushin_oracle(
    p: (f64, f64),
    q: (f64, f64),
    kk: usize,
    restarts: usize,
    seed: u64,
) -> Result<crate::cc::OracleResult> {
    if kk < 2 {
        return Err(GeoError::InvalidInput("need at least 2 control segments".into()));
    }
    let scale = 1.0 + (q.0 - p.0).hypot(q.1 - p.1);
    if p == q {
        return Ok(crate::cc::OracleResult { length: 0.0, endpoint_residual: 0.0 });
    }
    let best = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(r as u64));
            let sigma = 0.5 * (1.0 + r as f64);
            let mut u = vec![0.0; 2 * kk];
            for i in 0..kk {
                u[2 * i] = (q.0 - p.0) + sigma * rng.gen_range(-1.0..1.0);
                u[2 * i + 1] = sigma * rng.gen_range(-1.0..1.0);
            }
            let mut lambda = 10.0;
            let mut residual = f64::INFINITY;
            while lambda <= 1e12 {
                let obj = |v: &[f64]| {
                    let e = eval_controls(v, kk, p, q);
                    e.energy + lambda * e.gap2
                };
                crate::optim::descend(&obj, &mut u, 400);
                residual = eval_controls(&u, kk, p, q).gap2.sqrt();
                if residual <= 1e-6 * scale {
                    break;
                }
                lambda *= 10.0;
            }
            let e = eval_controls(&u, kk, p, q);
            (e.length, residual)
        })
        .reduce(
            || (f64::INFINITY, f64::INFINITY),
            |a, b| {
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
    Ok(crate::cc::OracleResult { length: best.0, endpoint_residual: best.1 })
}

/// Grushin distance. Axis-to-axis pairs use the minimum of the geodesic
/// family, `sqrt(2 pi |dy|)`; pairs at equal height use the straight
/// horizontal segment `|dx|`; other pairs fall back to the collocation
/// minimizer.
pub fn grushin_dist(p: (f64, f64), q: (f64, f64), cfg: &CCSolverConfig) -> Result<f64> {
    cfg.validate()?;
    if p == q {
        return Ok(0.0);
    }
    if p.0 == 0.0 && q.0 == 0.0 {
        return Ok((2.0 * PI * (q.1 - p.1).abs()).sqrt());
    }
    if p.1 == q.1 {
        return Ok((q.0 - p.0).abs());
    }
    let r = grushin_oracle(p, q, cfg.controls_per_path, cfg.restarts, cfg.seed)?;
    let scale = 1.0 + (q.0 - p.0).hypot(q.1 - p.1);
    if r.endpoint_residual > 1e-4 * scale {
        return Err(GeoError::Unconverged {
            best_bound: r.length,
            residual: r.endpoint_residual,
        });
    }
    Ok(r.length)
}

/// Gauss curvature of the Riemannian component, `K = -2 / x^2`.
pub fn grushin_curvature(x: f64) -> Result<f64> {
    if x == 0.0 {
        return Err(GeoError::OutOfRange("curvature is undefined on the axis".into()));
    }
    Ok(-2.0 / (x * x))
}

/// Finite-difference Gauss curvature of an orthogonal metric
/// `ds^2 = E dx^2 + G dy^2` via Brioschi's formula
/// `K = -1/(2 sqrt(EG)) [ (G_x / sqrt(EG))_x + (E_y / sqrt(EG))_y ]`,
/// central differences of step `h`.
pub fn brioschi_curvature_fd<E, G>(e: E, g: G, x: f64, y: f64, h: f64) -> f64
where
    E: Fn(f64, f64) -> f64 + Copy,
    G: Fn(f64, f64) -> f64 + Copy,
{
    let root = |x: f64, y: f64| (e(x, y) * g(x, y)).sqrt();
    let p = |x: f64, y: f64| (g(x + h, y) - g(x - h, y)) / (2.0 * h) / root(x, y);
    let q = |x: f64, y: f64| (e(x, y + h) - e(x, y - h)) / (2.0 * h) / root(x, y);
    let px = (p(x + h, y) - p(x - h, y)) / (2.0 * h);
    let qy = (q(x, y + h) - q(x, y - h)) / (2.0 * h);
    -(px + qy) / (2.0 * root(x, y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn geodesic_endpoints() {
        for m in 1..=10 {
            let g = GrushinGeodesic::new(m, 1.7, true).unwrap();
            let (x0, y0) = grushin_geodesic_point(&g, 0.0).unwrap();
            let (x1, y1) = grushin_geodesic_point(&g, 1.0).unwrap();
            assert!(x0.abs() < 1e-12 && y0.abs() < 1e-12);
            assert!(x1.abs() < 1e-12);
            assert_relative_eq!(y1, 1.7, max_relative = 1e-12);
        }
    }

    #[test]
    fn geodesic_midpoint_value() {
        let g = GrushinGeodesic::new(1, 1.0, true).unwrap();
        let (x, y) = grushin_geodesic_point(&g, 0.5).unwrap();
        assert_relative_eq!(x, (2.0 / PI).sqrt(), max_relative = 1e-12);
        assert_relative_eq!(y, 0.5, max_relative = 1e-12);
    }

    #[test]
    fn geodesic_is_horizontal() {
        // y'(t) = m pi x(t)^2 along the family
        let g = GrushinGeodesic::new(3, 0.8, false).unwrap();
        let h = 1e-6;
        for &t in &[0.1, 0.37, 0.62, 0.9] {
            let (_, ya) = grushin_geodesic_point(&g, t - h).unwrap();
            let (_, yb) = grushin_geodesic_point(&g, t + h).unwrap();
            let (x, _) = grushin_geodesic_point(&g, t).unwrap();
            let lhs = (yb - ya) / (2.0 * h);
            let rhs = 3.0 * PI * x * x;
            assert_relative_eq!(lhs, rhs, max_relative = 1e-6, epsilon = 1e-9);
        }
    }

    #[test]
    fn geodesic_parameter_range_checked() {
        let g = GrushinGeodesic::new(1, 1.0, true).unwrap();
        assert!(grushin_geodesic_point(&g, -0.1).is_err());
        assert!(grushin_geodesic_point(&g, 1.1).is_err());
    }

    #[test]
    fn x_axis_segment_length() {
        let c = SampledCurve::uniform(vec![vec![1.0, 0.0], vec![2.0, 0.0]], false).unwrap();
        assert_relative_eq!(grushin_length(&c, AxisPolicy::Forbid).unwrap(), 1.0);
    }

    #[test]
    fn sampled_geodesic_lengths() {
        for (m, expected) in [(1, (2.0 * PI).sqrt()), (2, (4.0 * PI).sqrt()), (3, (6.0 * PI).sqrt())]
        {
            let g = GrushinGeodesic::new(m, 1.0, true).unwrap();
            let c = sample_geodesic(&g, 10_000).unwrap();
            let len = grushin_length(&c, AxisPolicy::EndpointsOnly).unwrap();
            assert!(
                (len - expected).abs() < 1e-4,
                "m = {m}: length {len} vs {expected}"
            );
        }
    }

    #[test]
    fn lengths_increase_with_m() {
        let lengths: Vec<f64> = (1..=4)
            .map(|m| {
                let g = GrushinGeodesic::new(m, 1.0, true).unwrap();
                grushin_length(&sample_geodesic(&g, 5000).unwrap(), AxisPolicy::EndpointsOnly)
                    .unwrap()
            })
            .collect();
        for w in lengths.windows(2) {
            assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn constant_speed_variance() {
        let g = GrushinGeodesic::new(2, 1.0, true).unwrap();
        let c = sample_geodesic(&g, 2000).unwrap();
        let dt = 1.0 / 2000.0;
        let mut speeds = Vec::new();
        for w in c.points().windows(2) {
            let dx = w[1][0] - w[0][0];
            let dy = w[1][1] - w[0][1];
            let xm = 0.5 * (w[0][0] + w[1][0]);
            if xm.abs() < 1e-3 {
                continue; // sign-change segments are measured separately
            }
            speeds.push((dx * dx + (dy / xm) * (dy / xm)).sqrt() / dt);
        }
        let mean: f64 = speeds.iter().sum::<f64>() / speeds.len() as f64;
        let var: f64 =
            speeds.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / speeds.len() as f64;
        assert!(var / (mean * mean) <= 1e-6, "relative variance {}", var / (mean * mean));
        assert_relative_eq!(mean, g.speed(), max_relative = 1e-5);
    }

    #[test]
    fn interior_axis_crossing_rejected() {
        let c = SampledCurve::uniform(
            vec![vec![1.0, 0.0], vec![0.0, 0.5], vec![1.0, 1.0]],
            false,
        )
        .unwrap();
        assert!(matches!(
            grushin_length(&c, AxisPolicy::EndpointsOnly),
            Err(GeoError::AxisCrossing { index: 1 })
        ));
        assert!(grushin_length(&c, AxisPolicy::Forbid).is_err());
    }

    #[test]
    fn axis_distance_closed_form() {
        let cfg = CCSolverConfig::default();
        let d = grushin_dist((0.0, 0.0), (0.0, 1.0), &cfg).unwrap();
        assert_relative_eq!(d, (2.0 * PI).sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn equal_height_distance() {
        let cfg = CCSolverConfig::default();
        assert_relative_eq!(grushin_dist((1.0, 0.0), (2.0, 0.0), &cfg).unwrap(), 1.0);
    }

    #[test]
    fn axis_distance_scales_as_sqrt() {
        let cfg = CCSolverConfig::default();
        let base = grushin_dist((0.0, 0.0), (0.0, 1.0), &cfg).unwrap();
        for &y1 in &[0.25, 4.0] {
            let d = grushin_dist((0.0, 0.0), (0.0, y1), &cfg).unwrap();
            assert_relative_eq!(d / y1.sqrt(), base, max_relative = 1e-12);
        }
    }

    #[test]
    fn oracle_validates_axis_distance() {
        let r = grushin_oracle((0.0, 0.0), (0.0, 1.0), 64, 8, 17).unwrap();
        let exact = (2.0 * PI).sqrt();
        assert!(
            (r.length - exact).abs() / exact < 0.02,
            "oracle {} vs {}",
            r.length,
            exact
        );
    }

    #[test]
    fn generic_distance_against_oracle() {
        let cfg = CCSolverConfig::default();
        let d = grushin_dist((0.5, 0.0), (1.0, 0.7), &cfg).unwrap();
        // projection lower bound and a crude upper bound via an L-path
        assert!(d >= 0.5 - 1e-9);
        assert!(d.is_finite());
    }

    #[test]
    fn curvature_values() {
        assert_relative_eq!(grushin_curvature(1.0).unwrap(), -2.0);
        assert_relative_eq!(grushin_curvature(2.0).unwrap(), -0.5);
        assert!(grushin_curvature(0.0).is_err());
        for &x in &[0.5, -0.7, 1.0, 2.0] {
            assert!(grushin_curvature(x).unwrap() < 0.0);
        }
    }

    #[test]
    fn curvature_matches_brioschi_fd() {
        let e = |_x: f64, _y: f64| 1.0;
        let g = |x: f64, _y: f64| x.powi(-2);
        for &x in &[0.5, 1.0, 2.0] {
            let k_fd = brioschi_curvature_fd(e, g, x, 0.0, 1e-3 * x);
            let k = grushin_curvature(x).unwrap();
            assert_relative_eq!(k_fd, k, max_relative = 1e-4);
        }
    }
}
