//! Sampled curves, horizontal lifting into the Heisenberg group, horizontal
//! length, and contact-defect measurement.

use crate::error::{GeoError, Result};
use crate::heis::HeisPoint;

/// An ordered list of parameter values and points in R^k.
#[derive(Debug, Clone)]
pub struct SampledCurve {
    params: Vec<f64>,
    points: Vec<Vec<f64>>,
    closed: bool,
}

impl SampledCurve {
    pub fn new(params: Vec<f64>, points: Vec<Vec<f64>>, closed: bool) -> Result<Self> {
        if params.len() != points.len() || params.len() < 2 {
            return Err(GeoError::InvalidInput(
                "params and points must have equal length >= 2".into(),
            ));
        }
        if params.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(GeoError::InvalidInput("params must be strictly increasing".into()));
        }
        let k = points[0].len();
        if points.iter().any(|p| p.len() != k) {
            return Err(GeoError::InvalidInput("points must share one dimension".into()));
        }
        if closed {
            let gap: f64 = points[0]
                .iter()
                .zip(points.last().unwrap())
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            if gap > 1e-9 {
                return Err(GeoError::InvalidInput(format!(
                    "closed curve endpoints differ by {gap}"
                )));
            }
        }
        Ok(Self { params, points, closed })
    }

    /// Uniform parameterization over `[0, 1]`.
    pub fn uniform(points: Vec<Vec<f64>>, closed: bool) -> Result<Self> {
        let m = points.len();
        if m < 2 {
            return Err(GeoError::InvalidInput("need at least 2 samples".into()));
        }
        let params = (0..m).map(|i| i as f64 / (m - 1) as f64).collect();
        Self::new(params, points, closed)
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn closed(&self) -> bool {
        self.closed
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Lifts a planar curve in R^{2n} to a horizontal curve in R^{2n+1} by
/// trapezoid integration of `dt = 2 sum_j (y_j dx_j - x_j dy_j)`, starting
/// at height `t0`.
pub fn horizontal_lift(planar: &SampledCurve, t0: f64) -> Result<SampledCurve> {
    let k = planar.dim();
    if k == 0 || k % 2 != 0 {
        return Err(GeoError::InvalidInput(format!(
            "planar curve must live in R^{{2n}}, got dimension {k}"
        )));
    }
    let n = k / 2;
    let mut t = t0;
    let mut lifted = Vec::with_capacity(planar.len());
    let mut first = planar.points()[0].clone();
    first.push(t);
    lifted.push(first);
    for w in planar.points().windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let mut inc = 0.0;
        for j in 0..n {
            let dx = b[2 * j] - a[2 * j];
            let dy = b[2 * j + 1] - a[2 * j + 1];
            let xm = 0.5 * (a[2 * j] + b[2 * j]);
            let ym = 0.5 * (a[2 * j + 1] + b[2 * j + 1]);
            inc += 2.0 * (ym * dx - xm * dy);
        }
        t += inc;
        let mut p = b.clone();
        p.push(t);
        lifted.push(p);
    }
    // the lift of a closed planar curve is closed only if the holonomy
    // vanishes, so the lifted curve is marked open
    SampledCurve::new(planar.params().to_vec(), lifted, false)
}

/// Horizontal length of an (approximately) horizontal curve in R^{2n+1}:
/// the sum of Euclidean lengths of the z-projection increments. Errors when
/// the contact defect exceeds `defect_tol`, naming the worst segment.
pub fn horizontal_length(curve: &SampledCurve, defect_tol: f64) -> Result<f64> {
    let (defect, segment) = worst_contact_segment(curve)?;
    if defect > defect_tol {
        return Err(GeoError::NotHorizontal { defect, segment });
    }
    let k = curve.dim() - 1;
    let mut total = 0.0;
    for w in curve.points().windows(2) {
        total += w[0][..k]
            .iter()
            .zip(&w[1][..k])
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
    }
    Ok(total)
}

/// Maximum per-segment contact defect `|dt + 2 sum (xm dy - ym dx)| / ds`,
/// with midpoint coefficients; normalized per unit parameter so tolerances
/// are mesh independent.
pub fn contact_defect(curve: &SampledCurve) -> Result<f64> {
    Ok(worst_contact_segment(curve)?.0)
}

fn worst_contact_segment(curve: &SampledCurve) -> Result<(f64, usize)> {
    let k = curve.dim();
    if k < 3 || k % 2 != 1 {
        return Err(GeoError::InvalidInput(format!(
            "lifted curve must live in R^{{2n+1}}, got dimension {k}"
        )));
    }
    let n = (k - 1) / 2;
    let mut worst = (0.0_f64, 0usize);
    for (i, w) in curve.points().windows(2).enumerate() {
        let (a, b) = (&w[0], &w[1]);
        let ds = curve.params()[i + 1] - curve.params()[i];
        let mut alpha = b[2 * n] - a[2 * n];
        for j in 0..n {
            let dx = b[2 * j] - a[2 * j];
            let dy = b[2 * j + 1] - a[2 * j + 1];
            let xm = 0.5 * (a[2 * j] + b[2 * j]);
            let ym = 0.5 * (a[2 * j + 1] + b[2 * j + 1]);
            alpha += 2.0 * (xm * dy - ym * dx);
        }
        let d = alpha.abs() / ds;
        if d > worst.0 {
            worst = (d, i);
        }
    }
    Ok(worst)
}

/// Converts a curve in R^{2n+1} into Heisenberg points.
pub fn curve_points(curve: &SampledCurve) -> Result<Vec<HeisPoint>> {
    let k = curve.dim();
    if k < 3 || k % 2 != 1 {
        return Err(GeoError::InvalidInput("curve is not in R^{2n+1}".into()));
    }
    let n = (k - 1) / 2;
    curve.points().iter().map(|p| HeisPoint::new(n, p.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heis::group_mul;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn circle(m: usize) -> SampledCurve {
        let pts: Vec<Vec<f64>> = (0..=m)
            .map(|i| {
                let th = 2.0 * PI * i as f64 / m as f64;
                vec![th.cos(), th.sin()]
            })
            .collect();
        let params: Vec<f64> = (0..=m).map(|i| 2.0 * PI * i as f64 / m as f64).collect();
        SampledCurve::new(params, pts, true).unwrap()
    }

    #[test]
    fn constant_curve_lifts_to_constant_t() {
        let c = SampledCurve::uniform(vec![vec![0.5, -0.5]; 4], false).unwrap();
        let l = horizontal_lift(&c, 3.0).unwrap();
        for p in l.points() {
            assert_eq!(p[2], 3.0);
        }
    }

    #[test]
    fn unit_circle_holonomy() {
        let l = horizontal_lift(&circle(10_000), 0.0).unwrap();
        let dt = l.points().last().unwrap()[2];
        assert!((dt + 4.0 * PI).abs() < 1e-6, "holonomy {dt} vs -4pi");
    }

    #[test]
    fn polygon_holonomy_matches_shoelace() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..20 {
            // random star-shaped polygon: jittered radii on sorted angles
            let m = rng.gen_range(5..40);
            let mut pts: Vec<Vec<f64>> = (0..m)
                .map(|i| {
                    let th = 2.0 * PI * i as f64 / m as f64;
                    let r = rng.gen_range(0.3..1.5);
                    vec![r * th.cos(), r * th.sin()]
                })
                .collect();
            pts.push(pts[0].clone());
            let curve = SampledCurve::uniform(pts.clone(), true).unwrap();
            let dt = horizontal_lift(&curve, 0.0).unwrap().points().last().unwrap()[2];
            // exact shoelace signed area of the polygon
            let mut area = 0.0;
            for w in pts.windows(2) {
                area += 0.5 * (w[0][0] * w[1][1] - w[1][0] * w[0][1]);
            }
            assert!(
                (dt + 4.0 * area).abs() < 1e-9,
                "holonomy {dt} vs -4*area {}",
                -4.0 * area
            );
        }
    }

    #[test]
    fn lifted_circle_length() {
        let l = horizontal_lift(&circle(10_000), 0.0).unwrap();
        let len = horizontal_length(&l, 1e-6).unwrap();
        assert!((len - 2.0 * PI).abs() < 1e-6);
    }

    #[test]
    fn straight_segment_length() {
        let c = SampledCurve::uniform(vec![vec![0.0, 0.0], vec![1.0, 0.0]], false).unwrap();
        let l = horizontal_lift(&c, 0.0).unwrap();
        assert_relative_eq!(horizontal_length(&l, 1e-12).unwrap(), 1.0);
    }

    #[test]
    fn length_matches_planar_length_after_lift() {
        let c = circle(500);
        let planar_len: f64 = c
            .points()
            .windows(2)
            .map(|w| {
                w[0].iter()
                    .zip(&w[1])
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt()
            })
            .sum();
        let l = horizontal_lift(&c, 0.0).unwrap();
        let lifted_len = horizontal_length(&l, 1e-3).unwrap();
        assert!((planar_len - lifted_len).abs() < 1e-9);
    }

    #[test]
    fn length_invariant_under_left_translation() {
        let g = HeisPoint::new(1, vec![0.3, -0.8, 0.5]).unwrap();
        let l = horizontal_lift(&circle(2000), 0.0).unwrap();
        let translated: Vec<Vec<f64>> = l
            .points()
            .iter()
            .map(|p| {
                let hp = HeisPoint::new(1, p.clone()).unwrap();
                group_mul(&g, &hp).unwrap().coords().to_vec()
            })
            .collect();
        let tc = SampledCurve::new(l.params().to_vec(), translated, false).unwrap();
        let a = horizontal_length(&l, 1e-2).unwrap();
        let b = horizontal_length(&tc, 1e-2).unwrap();
        assert_relative_eq!(a, b, max_relative = 1e-12);
    }

    #[test]
    fn vertical_segment_has_positive_defect() {
        let c =
            SampledCurve::uniform(vec![vec![0.0, 0.0, 0.0], vec![0.0, 0.0, 1.0]], false).unwrap();
        let d = contact_defect(&c).unwrap();
        assert!(d > 0.0);
        assert!(horizontal_length(&c, 1e-9).is_err());
    }

    #[test]
    fn frame_flow_curve_has_zero_defect() {
        // flow of X_1 from a generic point: x increases, t increases at 2y
        let base = [0.4, 0.7, -0.1];
        let pts: Vec<Vec<f64>> = (0..=50)
            .map(|i| {
                let s = i as f64 / 50.0;
                vec![base[0] + s, base[1], base[2] + 2.0 * base[1] * s]
            })
            .collect();
        let c = SampledCurve::uniform(pts, false).unwrap();
        assert!(contact_defect(&c).unwrap() < 1e-13);
    }

    #[test]
    fn lift_defect_vanishes_by_construction() {
        // the lift inverts exactly the quadrature the defect measures
        let d = contact_defect(&horizontal_lift(&circle(200), 0.0).unwrap()).unwrap();
        assert!(d < 1e-12, "defect {d}");
    }

    #[test]
    fn holonomy_converges_quadratically() {
        let err = |m: usize| {
            let dt = horizontal_lift(&circle(m), 0.0).unwrap().points().last().unwrap()[2];
            (dt + 4.0 * PI).abs()
        };
        let order = (err(200) / err(400)).log2();
        assert!(order >= 1.9, "observed order {order}");
    }

    #[test]
    fn rejects_too_few_samples() {
        assert!(SampledCurve::uniform(vec![vec![0.0, 0.0]], false).is_err());
    }
}
