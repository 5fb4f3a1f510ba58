//! Discrete verification bench: grid maps, the cavitation composition,
//! horizontal Sobolev energy, contact-equation residual, winding numbers,
//! the Stokes pullback identity, and the rank obstruction.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::embed::SpherePoint;
use crate::error::{GeoError, Result};
use crate::heis::HeisPoint;

/// Codomain tag of a grid map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Codomain {
    Euclidean,
    Heisenberg { n: usize },
}

/// Sampling domain: an axis-aligned box, or a ball around the origin with
/// an optional puncture.
#[derive(Debug, Clone, PartialEq)]
pub enum Domain {
    Box { lo: Vec<f64>, hi: Vec<f64> },
    Ball { radius: f64, exclusion: f64 },
}

impl Domain {
    fn dim(&self) -> usize {
        match self {
            Domain::Box { lo, .. } => lo.len(),
            Domain::Ball { .. } => 0, // dimension supplied separately
        }
    }

    fn contains(&self, x: &[f64]) -> bool {
        match self {
            Domain::Box { lo, hi } => x
                .iter()
                .zip(lo.iter().zip(hi))
                .all(|(&c, (&l, &u))| c >= l - 1e-12 && c <= u + 1e-12),
            Domain::Ball { radius, exclusion } => {
                let r: f64 = x.iter().map(|c| c * c).sum::<f64>().sqrt();
                r <= *radius + 1e-12 && r >= *exclusion - 1e-12
            }
        }
    }
}

/// A map sampled on a regular grid of spacing `h`.
#[derive(Debug, Clone)]
pub struct GridMap {
    m: usize,
    k: usize,
    h: f64,
    domain: Domain,
    /// Grid origin and node counts per axis; node coordinates are
    /// `origin[d] + i_d * h`.
    origin: Vec<f64>,
    shape: Vec<usize>,
    /// Row-major node values, NaN outside the domain.
    values: Vec<f64>,
    codomain: Codomain,
}

impl GridMap {
    /// Samples `f` over the grid covering `domain` with spacing `h`.
    pub fn sample<F>(domain: Domain, m: usize, h: f64, k: usize, codomain: Codomain, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> Vec<f64>,
    {
        if !(h > 0.0) {
            return Err(GeoError::InvalidInput("grid spacing must be positive".into()));
        }
        let (origin, shape) = match &domain {
            Domain::Box { lo, hi } => {
                if lo.len() != m || hi.len() != m {
                    return Err(GeoError::InvalidInput("box bounds must have length m".into()));
                }
                let shape: Vec<usize> =
                    lo.iter().zip(hi).map(|(&l, &u)| ((u - l) / h).round() as usize + 1).collect();
                (lo.clone(), shape)
            }
            Domain::Ball { radius, exclusion } => {
                if !(*radius > 0.0) || *exclusion < 0.0 || exclusion >= radius {
                    return Err(GeoError::InvalidInput("need 0 <= exclusion < radius".into()));
                }
                let half = (radius / h).ceil() as usize;
                (vec![-(half as f64) * h; m], vec![2 * half + 1; m])
            }
        };
        if domain.dim() != 0 && domain.dim() != m {
            return Err(GeoError::InvalidInput("domain dimension mismatch".into()));
        }
        let total: usize = shape.iter().product();
        let mut values = vec![f64::NAN; total * k];
        let mut idx = vec![0usize; m];
        let mut x = vec![0.0; m];
        for node in 0..total {
            let mut rem = node;
            for d in (0..m).rev() {
                idx[d] = rem % shape[d];
                rem /= shape[d];
            }
            for d in 0..m {
                x[d] = origin[d] + idx[d] as f64 * h;
            }
            if domain.contains(&x) {
                let v = f(&x);
                debug_assert_eq!(v.len(), k);
                values[node * k..(node + 1) * k].copy_from_slice(&v);
            }
        }
        Ok(Self { m, k, h, domain, origin, shape, values, codomain })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn codomain(&self) -> Codomain {
        self.codomain
    }

    pub fn exclusion_radius(&self) -> f64 {
        match &self.domain {
            Domain::Ball { exclusion, .. } => *exclusion,
            Domain::Box { .. } => 0.0,
        }
    }

    fn node_count(&self) -> usize {
        self.shape.iter().product()
    }

    fn value(&self, node: usize) -> &[f64] {
        &self.values[node * self.k..(node + 1) * self.k]
    }

    fn is_valid(&self, node: usize) -> bool {
        !self.values[node * self.k].is_nan()
    }

    fn decode(&self, node: usize, idx: &mut [usize]) {
        let mut rem = node;
        for d in (0..self.m).rev() {
            idx[d] = rem % self.shape[d];
            rem /= self.shape[d];
        }
    }

    fn encode(&self, idx: &[usize]) -> usize {
        let mut node = 0;
        for d in 0..self.m {
            node = node * self.shape[d] + idx[d];
        }
        node
    }

    fn coords(&self, idx: &[usize]) -> Vec<f64> {
        idx.iter().zip(&self.origin).map(|(&i, &o)| o + i as f64 * self.h).collect()
    }

    /// Partial derivative of the sampled map along axis `d` at `idx`:
    /// central difference in the interior, one-sided against the boundary.
    fn partial(&self, idx: &[usize], d: usize) -> Option<Vec<f64>> {
        let node = self.encode(idx);
        if !self.is_valid(node) {
            return None;
        }
        let mut fwd = idx.to_vec();
        let mut bwd = idx.to_vec();
        let has_fwd = idx[d] + 1 < self.shape[d] && {
            fwd[d] = idx[d] + 1;
            self.is_valid(self.encode(&fwd))
        };
        let has_bwd = idx[d] > 0 && {
            bwd[d] = idx[d] - 1;
            self.is_valid(self.encode(&bwd))
        };
        let (a, b, den) = match (has_fwd, has_bwd) {
            (true, true) => (self.encode(&fwd), self.encode(&bwd), 2.0 * self.h),
            (true, false) => (self.encode(&fwd), node, self.h),
            (false, true) => (node, self.encode(&bwd), self.h),
            (false, false) => return None,
        };
        Some(
            self.value(a)
                .iter()
                .zip(self.value(b))
                .map(|(x, y)| (x - y) / den)
                .collect(),
        )
    }

    /// Writes node values as CSV `i1,...,im,val1,...,valk`.
    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> Result<()> {
        let headers: Vec<String> = (1..=self.m)
            .map(|d| format!("i{d}"))
            .chain((1..=self.k).map(|j| format!("val{j}")))
            .collect();
        writeln!(w, "{}", headers.join(","))?;
        let mut idx = vec![0usize; self.m];
        for node in 0..self.node_count() {
            if !self.is_valid(node) {
                continue;
            }
            self.decode(node, &mut idx);
            let row: Vec<String> = idx
                .iter()
                .map(|i| i.to_string())
                .chain(self.value(node).iter().map(|v| format!("{v:.17e}")))
                .collect();
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }

    /// JSON sidecar describing the grid layout.
    pub fn sidecar(&self) -> GridSidecar {
        GridSidecar {
            m: self.m,
            k: self.k,
            h: self.h,
            exclusion_radius: self.exclusion_radius(),
            codomain: self.codomain,
        }
    }
}

/// Metadata sidecar serialized next to grid CSV files.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridSidecar {
    pub m: usize,
    pub k: usize,
    pub h: f64,
    pub exclusion_radius: f64,
    pub codomain: Codomain,
}

/// The radial projection `x -> x / |x|`.
pub fn cavitation(x: &[f64]) -> Result<Vec<f64>> {
    let norm: f64 = x.iter().map(|c| c * c).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(GeoError::OutOfRange("cavitation map is singular at the origin".into()));
    }
    Ok(x.iter().map(|c| c / norm).collect())
}

/// Samples `psi(x / |x|)` on the punctured unit ball of R^m with grid
/// spacing `h` and puncture radius `eps >= 2h`.
pub fn compose_on_grid<F>(psi: F, m: usize, h: f64, eps: f64) -> Result<GridMap>
where
    F: Fn(&SpherePoint) -> HeisPoint,
{
    if eps < 2.0 * h {
        return Err(GeoError::InvalidInput(format!(
            "exclusion radius {eps} must be at least 2h = {}",
            2.0 * h
        )));
    }
    let n = m - 1;
    GridMap::sample(
        Domain::Ball { radius: 1.0, exclusion: eps },
        m,
        h,
        2 * n + 1,
        Codomain::Heisenberg { n },
        |x| {
            let p = SpherePoint::project(x.to_vec()).expect("puncture excludes the origin");
            psi(&p).coords().to_vec()
        },
    )
}

fn heis_n(f: &GridMap) -> Result<usize> {
    match f.codomain() {
        Codomain::Heisenberg { n } if f.k() == 2 * n + 1 => Ok(n),
        _ => Err(GeoError::InvalidInput("grid map is not Heisenberg valued".into())),
    }
}

/// Maximum contact-equation residual
/// `|dt/du_k - 2 sum_j (y_j dx_j/du_k - x_j dy_j/du_k)|`
/// over nodes and grid directions.
pub fn contact_residual(f: &GridMap) -> Result<f64> {
    let n = heis_n(f)?;
    let mut worst: f64 = 0.0;
    let mut idx = vec![0usize; f.m()];
    for node in 0..f.node_count() {
        if !f.is_valid(node) {
            continue;
        }
        f.decode(node, &mut idx);
        let val = f.value(node);
        for d in 0..f.m() {
            if let Some(df) = f.partial(&idx, d) {
                let mut res = df[2 * n];
                for j in 0..n {
                    res -= 2.0 * (val[2 * j + 1] * df[2 * j] - val[2 * j] * df[2 * j + 1]);
                }
                worst = worst.max(res.abs());
            }
        }
    }
    Ok(worst)
}

/// Horizontal Sobolev energy restricted to nodes selected by `region`.
///
/// At each node the grid partials are decomposed in the frame at the mapped
/// point; for (approximately) horizontal maps the frame coefficients are
/// the z-components, so `|df/du_k|_H` is the Euclidean norm of the
/// z-projection of the partial.
pub fn horizontal_energy_in<R>(f: &GridMap, p: f64, residual_tol: f64, region: R) -> Result<f64>
where
    R: Fn(&[f64]) -> bool,
{
    if !(p >= 1.0) {
        return Err(GeoError::OutOfRange("exponent p must be at least 1".into()));
    }
    let n = heis_n(f)?;
    if residual_tol.is_finite() {
        let res = contact_residual(f)?;
        if res > residual_tol {
            return Err(GeoError::NotHorizontal { defect: res, segment: 0 });
        }
    }
    let cell = f.h().powi(f.m() as i32);
    let mut idx = vec![0usize; f.m()];
    let mut total = 0.0;
    for node in 0..f.node_count() {
        if !f.is_valid(node) {
            continue;
        }
        f.decode(node, &mut idx);
        if !region(&f.coords(&idx)) {
            continue;
        }
        let mut grad2 = 0.0;
        let mut complete = true;
        for d in 0..f.m() {
            match f.partial(&idx, d) {
                Some(df) => {
                    grad2 += df[..2 * n].iter().map(|c| c * c).sum::<f64>();
                }
                None => {
                    complete = false;
                    break;
                }
            }
        }
        if complete {
            total += grad2.powf(p / 2.0) * cell;
        }
    }
    Ok(total)
}

/// Horizontal Sobolev energy over the whole sampled domain.
pub fn horizontal_energy(f: &GridMap, p: f64, residual_tol: f64) -> Result<f64> {
    horizontal_energy_in(f, p, residual_tol, |_| true)
}

/// Exact winding number of a closed polyline around `point`, from summed
/// signed angle increments.
pub fn winding_number(curve: &crate::curve::SampledCurve, point: &[f64; 2]) -> Result<i64> {
    if curve.dim() != 2 {
        return Err(GeoError::InvalidInput("winding numbers are planar".into()));
    }
    if !curve.closed() {
        return Err(GeoError::InvalidInput("winding number needs a closed curve".into()));
    }
    // distance from the point to the polyline must be positive
    for w in curve.points().windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let vx = b[0] - a[0];
        let vy = b[1] - a[1];
        let wx = point[0] - a[0];
        let wy = point[1] - a[1];
        let len2 = vx * vx + vy * vy;
        let t = if len2 > 0.0 { ((wx * vx + wy * vy) / len2).clamp(0.0, 1.0) } else { 0.0 };
        let dx = wx - t * vx;
        let dy = wy - t * vy;
        if (dx * dx + dy * dy).sqrt() < 1e-12 {
            return Err(GeoError::OutOfRange("point lies on the curve".into()));
        }
    }
    let mut angle = 0.0;
    for w in curve.points().windows(2) {
        let a = (w[0][1] - point[1]).atan2(w[0][0] - point[0]);
        let b = (w[1][1] - point[1]).atan2(w[1][0] - point[0]);
        let mut inc = b - a;
        while inc > std::f64::consts::PI {
            inc -= 2.0 * std::f64::consts::PI;
        }
        while inc < -std::f64::consts::PI {
            inc += 2.0 * std::f64::consts::PI;
        }
        angle += inc;
    }
    let turns = angle / (2.0 * std::f64::consts::PI);
    let nearest = turns.round();
    if (turns - nearest).abs() > 0.01 {
        return Err(GeoError::InvalidInput(format!(
            "angle sum {turns} turns is not near an integer"
        )));
    }
    Ok(nearest as i64)
}

/// A sparse polynomial in `vars` variables.
#[derive(Debug, Clone)]
pub struct Poly {
    vars: usize,
    terms: Vec<(f64, Vec<u32>)>,
}

impl Poly {
    pub fn new(vars: usize, terms: Vec<(f64, Vec<u32>)>) -> Result<Self> {
        if terms.iter().any(|(_, e)| e.len() != vars) {
            return Err(GeoError::InvalidInput("exponent vectors must have length vars".into()));
        }
        Ok(Self { vars, terms })
    }

    pub fn zero(vars: usize) -> Self {
        Self { vars, terms: Vec::new() }
    }

    /// The coordinate monomial `x_j`.
    pub fn var(vars: usize, j: usize) -> Self {
        let mut e = vec![0u32; vars];
        e[j] = 1;
        Self { vars, terms: vec![(1.0, e)] }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(c, e)| c * e.iter().zip(x).map(|(&p, &xi)| xi.powi(p as i32)).product::<f64>())
            .sum()
    }

    pub fn partial(&self, j: usize) -> Poly {
        let terms = self
            .terms
            .iter()
            .filter(|(_, e)| e[j] > 0)
            .map(|(c, e)| {
                let mut e2 = e.clone();
                e2[j] -= 1;
                (c * e[j] as f64, e2)
            })
            .collect();
        Poly { vars: self.vars, terms }
    }
}

/// A 1-form `sum_i P_i dx_i` with polynomial coefficients on R^l.
#[derive(Debug, Clone)]
pub struct OneForm {
    components: Vec<Poly>,
}

impl OneForm {
    pub fn new(components: Vec<Poly>) -> Self {
        Self { components }
    }

    /// `x dy` on R^2, the standard area-form potential used in tests.
    pub fn x_dy() -> Self {
        Self::new(vec![Poly::zero(2), Poly::var(2, 0)])
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }
}

/// Trapezoid boundary integral and midpoint interior integral of the
/// Stokes identity `int_{dB} g*omega = int_B g*(d omega)` for a map of the
/// unit disk, both discretized at scale `h`.
pub fn stokes_check<G>(g: G, omega: &OneForm, h: f64) -> Result<(f64, f64)>
where
    G: Fn(&[f64; 2]) -> Vec<f64>,
{
    if !(h > 0.0 && h < 1.0) {
        return Err(GeoError::OutOfRange("need 0 < h < 1".into()));
    }
    let l = omega.dim();
    // boundary: trapezoid over the polyline on the unit circle
    let segs = (2.0 * std::f64::consts::PI / h).ceil() as usize;
    let mut boundary = 0.0;
    let bpoint = |i: usize| {
        let th = 2.0 * std::f64::consts::PI * i as f64 / segs as f64;
        g(&[th.cos(), th.sin()])
    };
    let mut prev = bpoint(0);
    for i in 1..=segs {
        let next = bpoint(i % segs);
        for (j, p) in omega.components.iter().enumerate() {
            let coef = 0.5 * (p.eval(&prev) + p.eval(&next));
            boundary += coef * (next[j] - prev[j]);
        }
        prev = next;
    }
    // interior: midpoint rule on grid cells, pullback of
    // d omega = sum_{i,j} d_j P_i dx_j ^ dx_i
    let partials: Vec<Vec<Poly>> =
        omega.components.iter().map(|p| (0..l).map(|j| p.partial(j)).collect()).collect();
    let half = (1.0 / h).ceil() as i64;
    let step = 0.5 * h;
    let mut interior = 0.0;
    for iu in -half..half {
        for iv in -half..half {
            let u = (iu as f64 + 0.5) * h;
            let v = (iv as f64 + 0.5) * h;
            if u * u + v * v > 1.0 {
                continue;
            }
            let gu: Vec<f64> = {
                let a = g(&[u + step, v]);
                let b = g(&[u - step, v]);
                a.iter().zip(&b).map(|(x, y)| (x - y) / h).collect()
            };
            let gv: Vec<f64> = {
                let a = g(&[u, v + step]);
                let b = g(&[u, v - step]);
                a.iter().zip(&b).map(|(x, y)| (x - y) / h).collect()
            };
            let gval = g(&[u, v]);
            let mut density = 0.0;
            for i in 0..l {
                for j in 0..l {
                    let c = partials[i][j].eval(&gval);
                    if c != 0.0 {
                        // dx_j ^ dx_i pulled back to du ^ dv
                        density += c * (gu[j] * gv[i] - gv[j] * gu[i]);
                    }
                }
            }
            interior += density * h * h;
        }
    }
    Ok((boundary, interior))
}

/// Result of a numerical rank scan.
#[derive(Debug, Clone)]
pub struct RankReport {
    /// Largest numerical rank observed.
    pub max_rank: usize,
    /// For each singular-value index, the largest ratio `sigma_i / sigma_1`
    /// observed over the sample points.
    pub sv_ratios: Vec<f64>,
}

/// Numerical Jacobian rank of `map` at each sample point: singular values
/// above `tol * sigma_1` count toward the rank.
pub fn rank_check<F>(map: F, points: &[Vec<f64>], tol: f64) -> Result<RankReport>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    if points.is_empty() {
        return Err(GeoError::InvalidInput("need at least one sample point".into()));
    }
    let h = 1e-5;
    let mut max_rank = 0;
    let mut sv_ratios: Vec<f64> = Vec::new();
    for x in points {
        let mdim = x.len();
        let f0 = map(x);
        let kdim = f0.len();
        let mut jac = DMatrix::zeros(kdim, mdim);
        for d in 0..mdim {
            let mut fwd = x.clone();
            let mut bwd = x.clone();
            fwd[d] += h;
            bwd[d] -= h;
            let fp = map(&fwd);
            let fm = map(&bwd);
            for r in 0..kdim {
                jac[(r, d)] = (fp[r] - fm[r]) / (2.0 * h);
            }
        }
        let svs = jac.svd(false, false).singular_values;
        let top = svs[0];
        if sv_ratios.len() < svs.len() {
            sv_ratios.resize(svs.len(), 0.0);
        }
        let mut rank = 0;
        for (i, &s) in svs.iter().enumerate() {
            if top > 0.0 {
                sv_ratios[i] = sv_ratios[i].max(s / top);
            }
            if s > tol * top {
                rank += 1;
            }
        }
        max_rank = max_rank.max(rank);
    }
    Ok(RankReport { max_rank, sv_ratios })
}
