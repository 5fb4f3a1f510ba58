//! Group algebra and exactly computable metric structure of the Heisenberg
//! group.
//!
//! Points are stored in the coordinate order `(x1, y1, ..., xn, yn, t)`;
//! complex arithmetic is expanded into real pairs throughout. The frame
//! convention is `X_j = d/dx_j + 2 y_j d/dt`, `Y_j = d/dy_j - 2 x_j d/dt`,
//! so `[X_j, Y_j] = -4 T`.

use crate::error::{GeoError, Result};

/// A point of the Heisenberg group, coordinates `(x1,y1,...,xn,yn,t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HeisPoint {
    n: usize,
    coords: Vec<f64>,
}

impl HeisPoint {
    /// Builds a point from its `2n+1` coordinates. Rejects NaN/Inf up front
    /// so every operation is total over constructed values.
    pub fn new(n: usize, coords: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(GeoError::InvalidInput("group index n must be positive".into()));
        }
        if coords.len() != 2 * n + 1 {
            return Err(GeoError::InvalidInput(format!(
                "expected {} coordinates for H^{}, got {}",
                2 * n + 1,
                n,
                coords.len()
            )));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(GeoError::InvalidInput("coordinates must be finite".into()));
        }
        Ok(Self { n, coords })
    }

    /// The identity element `o` of H^n.
    pub fn origin(n: usize) -> Self {
        Self { n, coords: vec![0.0; 2 * n + 1] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn x(&self, j: usize) -> f64 {
        self.coords[2 * j]
    }

    pub fn y(&self, j: usize) -> f64 {
        self.coords[2 * j + 1]
    }

    pub fn t(&self) -> f64 {
        self.coords[2 * self.n]
    }

    /// Euclidean norm of the z-part `(x1,y1,...,xn,yn)`.
    pub fn z_norm(&self) -> f64 {
        self.coords[..2 * self.n].iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    fn check_same_n(&self, other: &HeisPoint) -> Result<()> {
        if self.n != other.n {
            return Err(GeoError::DimensionMismatch { expected: self.n, got: other.n });
        }
        Ok(())
    }
}

/// Group product `p * q = (z + z', t + t' + 2 Im sum_j z_j conj(z'_j))`.
pub fn group_mul(p: &HeisPoint, q: &HeisPoint) -> Result<HeisPoint> {
    p.check_same_n(q)?;
    let n = p.n;
    let mut coords = vec![0.0; 2 * n + 1];
    let mut twist = 0.0;
    for j in 0..n {
        coords[2 * j] = p.x(j) + q.x(j);
        coords[2 * j + 1] = p.y(j) + q.y(j);
        // Im(z_j * conj(z'_j)) = y_j x'_j - x_j y'_j
        twist += p.y(j) * q.x(j) - p.x(j) * q.y(j);
    }
    coords[2 * n] = p.t() + q.t() + 2.0 * twist;
    HeisPoint::new(n, coords)
}

/// Group inverse `(-z, -t)`.
pub fn inverse(p: &HeisPoint) -> HeisPoint {
    HeisPoint { n: p.n, coords: p.coords.iter().map(|c| -c).collect() }
}

/// Anisotropic dilation `delta_r(z, t) = (r z, r^2 t)`, `r > 0`.
pub fn dilate(r: f64, p: &HeisPoint) -> Result<HeisPoint> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(GeoError::OutOfRange(format!("dilation factor must be positive, got {r}")));
    }
    let n = p.n;
    let mut coords: Vec<f64> = p.coords[..2 * n].iter().map(|c| r * c).collect();
    coords.push(r * r * p.t());
    HeisPoint::new(n, coords)
}

/// Koranyi gauge `||(z,t)||_K = (|z|^4 + t^2)^{1/4}`.
pub fn koranyi_norm(p: &HeisPoint) -> f64 {
    let z2: f64 = p.coords[..2 * p.n].iter().map(|c| c * c).sum();
    let t = p.t();
    (z2 * z2 + t * t).powf(0.25)
}

/// Koranyi distance `d_K(p, q) = ||q^{-1} * p||_K`.
pub fn koranyi_dist(p: &HeisPoint, q: &HeisPoint) -> Result<f64> {
    let delta = group_mul(&inverse(q), p)?;
    Ok(koranyi_norm(&delta))
}

/// Whether `p` lies on the center (the t-axis) up to `tol` in each
/// z-coordinate.
pub fn in_center(p: &HeisPoint, tol: f64) -> bool {
    p.coords[..2 * p.n].iter().all(|c| c.abs() <= tol)
}

/// A horizontal tangent vector, stored as frame coefficients
/// `(a1,b1,...,an,bn)` with respect to `{X_j, Y_j}` at `base`.
#[derive(Debug, Clone)]
pub struct HorizontalVec {
    base: HeisPoint,
    coeffs: Vec<f64>,
}

impl HorizontalVec {
    pub fn new(base: HeisPoint, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != 2 * base.n() {
            return Err(GeoError::InvalidInput(format!(
                "expected {} frame coefficients, got {}",
                2 * base.n(),
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(GeoError::InvalidInput("frame coefficients must be finite".into()));
        }
        Ok(Self { base, coeffs })
    }

    pub fn base(&self) -> &HeisPoint {
        &self.base
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }
}

/// Ambient representation `sum_j a_j X_j(base) + b_j Y_j(base)`.
///
/// The t-component is `sum_j 2 (y_j a_j - x_j b_j)`, so the result is in
/// the kernel of the contact form at `base` by construction.
pub fn frame_push(v: &HorizontalVec) -> Vec<f64> {
    let n = v.base.n();
    let mut out = vec![0.0; 2 * n + 1];
    let mut t = 0.0;
    for j in 0..n {
        let a = v.coeffs[2 * j];
        let b = v.coeffs[2 * j + 1];
        out[2 * j] = a;
        out[2 * j + 1] = b;
        t += 2.0 * (v.base.y(j) * a - v.base.x(j) * b);
    }
    out[2 * n] = t;
    out
}

/// Contact form `alpha_p(w) = w_t + 2 sum_j (x_j w_{y_j} - y_j w_{x_j})`.
pub fn contact_form(p: &HeisPoint, w: &[f64]) -> f64 {
    let n = p.n();
    debug_assert_eq!(w.len(), 2 * n + 1);
    let mut acc = w[2 * n];
    for j in 0..n {
        acc += 2.0 * (p.x(j) * w[2 * j + 1] - p.y(j) * w[2 * j]);
    }
    acc
}

/// Length of a horizontal vector in the metric making `{X_j, Y_j}`
/// orthonormal: the Euclidean norm of the frame coefficients.
pub fn horizontal_norm(v: &HorizontalVec) -> f64 {
    v.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
}
