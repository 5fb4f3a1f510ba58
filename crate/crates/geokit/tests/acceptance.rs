//! End-to-end acceptance suite: one test per criterion, each printing a
//! single pass line once its assertions hold.

use geokit::cc::{self, CCSolverConfig};
use geokit::curve::{self, SampledCurve};
use geokit::embed::{self, SpherePoint};
use geokit::grushin;
use geokit::heis::{self, HeisPoint};
use geokit::lab;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn random_point(rng: &mut ChaCha8Rng, n: usize, bound: f64) -> HeisPoint {
    let coords: Vec<f64> = (0..2 * n + 1).map(|_| rng.gen_range(-bound..bound)).collect();
    HeisPoint::new(n, coords).unwrap()
}

#[test]
fn criterion_01_group_metric_axioms() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for i in 0..100_000 {
        let n = 1 + (i % 3);
        let p = random_point(&mut rng, n, 2.0);
        let q = random_point(&mut rng, n, 2.0);
        let r = random_point(&mut rng, n, 2.0);
        let ab_c = heis::group_mul(&heis::group_mul(&p, &q).unwrap(), &r).unwrap();
        let a_bc = heis::group_mul(&p, &heis::group_mul(&q, &r).unwrap()).unwrap();
        for (a, b) in ab_c.coords().iter().zip(a_bc.coords()) {
            assert!((a - b).abs() < 1e-12, "associativity");
        }
        let e = heis::group_mul(&p, &heis::inverse(&p)).unwrap();
        assert!(e.coords().iter().all(|c| c.abs() < 1e-12), "inverse");
        let d = heis::koranyi_dist(&p, &q).unwrap();
        let gp = heis::group_mul(&r, &p).unwrap();
        let gq = heis::group_mul(&r, &q).unwrap();
        assert!(
            (heis::koranyi_dist(&gp, &gq).unwrap() - d).abs() < 1e-12,
            "left invariance"
        );
        let s = 0.3 + (i % 7) as f64 * 0.4;
        let dp = heis::dilate(s, &p).unwrap();
        assert!(
            (heis::koranyi_norm(&dp) - s * heis::koranyi_norm(&p)).abs() < 1e-12,
            "dilation homogeneity"
        );
    }
    println!("criterion 1 (group and metric axioms on 1e5 instances): pass");
}

#[test]
fn criterion_02_eikonal_equation() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let o = HeisPoint::origin(1);
    let h = 1e-4;
    let mut done = 0;
    while done < 100 {
        let p = random_point(&mut rng, 1, 1.0);
        match cc::eikonal_check(&o, &p, h) {
            Ok(g) => {
                assert!((g - 1.0).abs() <= 1e-3, "gradient norm {g} at {:?}", p.coords());
                done += 1;
            }
            Err(geokit::GeoError::OnCenterCoset) => continue,
            Err(e) => panic!("unexpected error: {e}"),
        }
    }
    println!("criterion 2 (eikonal equation at 100 points): pass");
}

#[test]
fn criterion_03_cc_solver_vs_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let cfg = CCSolverConfig::default();
    for i in 0..50 {
        let p = random_point(&mut rng, 1, 0.5);
        let q = random_point(&mut rng, 1, 0.5);
        let d = cc::cc_dist(&p, &q, &cfg).unwrap();
        let oracle = cc::cc_oracle(&p, &q, 64, 8, 1000 + i).unwrap();
        if d < 1e-9 {
            assert!(oracle.length < 1e-6);
            continue;
        }
        let rel = (d - oracle.length).abs() / oracle.length;
        assert!(rel <= 0.02, "pair {i}: closed form {d}, oracle {}, rel {rel}", oracle.length);
    }
    println!("criterion 3 (closed-form CC distance vs collocation oracle, 50 pairs): pass");
}

#[test]
fn criterion_04_line_geodesics() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let o = HeisPoint::origin(1);
    let cfg = CCSolverConfig::default();
    for _ in 0..100 {
        let x: f64 = rng.gen_range(-3.0..3.0);
        let y: f64 = rng.gen_range(-3.0..3.0);
        let p = HeisPoint::new(1, vec![x, y, 0.0]).unwrap();
        let d = cc::cc_dist(&o, &p, &cfg).unwrap();
        assert!((d - x.hypot(y)).abs() < 1e-6, "line distance at ({x},{y}): {d}");
    }
    println!("criterion 4 (straight-line geodesics through the origin): pass");
}

#[test]
fn criterion_05_lift_holonomy() {
    let n = 10_000;
    let pts: Vec<Vec<f64>> = (0..=n)
        .map(|i| {
            let th = 2.0 * PI * i as f64 / n as f64;
            vec![th.cos(), th.sin()]
        })
        .collect();
    let circle = SampledCurve::uniform(pts, true).unwrap();
    let lifted = curve::horizontal_lift(&circle, 0.0).unwrap();
    let dt = lifted.points().last().unwrap()[2];
    assert!((dt + 4.0 * PI).abs() < 1e-6, "unit circle holonomy {dt}");

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let k = rng.gen_range(3..12);
        let mut verts: Vec<Vec<f64>> = (0..k)
            .map(|_| vec![rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)])
            .collect();
        verts.push(verts[0].clone());
        // shoelace signed area
        let mut area = 0.0;
        for w in verts.windows(2) {
            area += 0.5 * (w[0][0] * w[1][1] - w[1][0] * w[0][1]);
        }
        let poly = SampledCurve::uniform(verts, true).unwrap();
        let lifted = curve::horizontal_lift(&poly, 0.0).unwrap();
        let dt = lifted.points().last().unwrap()[2];
        assert!((dt + 4.0 * area).abs() < 1e-9, "polygon holonomy {dt} vs area {area}");
    }
    println!("criterion 5 (lift holonomy: unit circle and 100 polygons): pass");
}

#[test]
fn criterion_06_embedding_horizontality_and_distortion() {
    for (name, map) in [
        ("legendrian", embed::legendrian_f as fn(&SpherePoint) -> HeisPoint),
        ("cayley", embed::cayley_phi_on_sphere as fn(&SpherePoint) -> HeisPoint),
    ] {
        let mut defects = Vec::new();
        let mut mesh = 1e-2;
        for _ in 0..5 {
            defects.push(embed::pullback_defect(map, 1, mesh, 64).unwrap());
            mesh /= 2.0;
        }
        for w in defects.windows(2) {
            let order = (w[0] / w[1]).log2();
            assert!(order >= 0.9, "{name}: observed order {order} in {defects:?}");
        }
        let a = embed::bilip_estimate(map, embed::TargetMetric::Koranyi, 1, 400, 6).unwrap();
        let b = embed::bilip_estimate(map, embed::TargetMetric::Koranyi, 1, 800, 6).unwrap();
        assert!(a.lower > 0.0 && b.lower > 0.0, "{name}: positive lower bound");
        assert!(
            (a.lower - b.lower).abs() <= 0.1 * a.lower.max(b.lower),
            "{name}: lower bound stability {} vs {}",
            a.lower,
            b.lower
        );
    }
    println!("criterion 6 (embedding horizontality order and distortion stability): pass");
}

#[test]
fn criterion_07_legendrian_pole_gap() {
    let north = SpherePoint::new(vec![1.0, 0.0]).unwrap();
    let south = SpherePoint::new(vec![-1.0, 0.0]).unwrap();
    let t_north = embed::legendrian_f(&north).t();
    let t_south = embed::legendrian_f(&south).t();
    assert_eq!(t_north, -4.0 / 3.0);
    assert_eq!(t_south, 4.0 / 3.0);
    assert_eq!(t_south - t_north, 8.0 / 3.0);
    println!("criterion 7 (pole values -+4/3 and gap 8/3, exact): pass");
}

#[test]
fn criterion_08_grushin_geodesics_and_curvature() {
    for m in 1..=3 {
        for y1 in [0.25, 1.0, 4.0] {
            let g = grushin::GrushinGeodesic::new(m, y1, true).unwrap();
            let sampled = grushin::sample_geodesic(&g, 40_000).unwrap();
            let len = grushin::grushin_length(&sampled, grushin::AxisPolicy::EndpointsOnly).unwrap();
            let exact = (2.0 * PI * m as f64 * y1).sqrt();
            assert!(
                (len - exact).abs() <= 1e-4 * exact,
                "m={m}, y1={y1}: length {len} vs {exact}"
            );
            // speed variance over interior chords
            let pts = sampled.points();
            let mut speeds = Vec::with_capacity(pts.len() - 1);
            let dt = 1.0 / (pts.len() - 1) as f64;
            for w in pts.windows(2) {
                let xm = 0.5 * (w[0][0] + w[1][0]);
                if xm.abs() < 1e-6 {
                    continue;
                }
                let dx = w[1][0] - w[0][0];
                let dy = w[1][1] - w[0][1];
                speeds.push((dx * dx + dy * dy / (xm * xm)).sqrt() / dt);
            }
            let mean: f64 = speeds.iter().sum::<f64>() / speeds.len() as f64;
            let var: f64 =
                speeds.iter().map(|s| (s / mean - 1.0) * (s / mean - 1.0)).sum::<f64>()
                    / speeds.len() as f64;
            assert!(var <= 1e-6, "m={m}, y1={y1}: speed variance {var}");
        }
    }
    for x in [0.5, 1.0, 2.0] {
        let exact = grushin::grushin_curvature(x).unwrap();
        assert!((exact + 2.0 / (x * x)).abs() < 1e-12);
        let fd = grushin::brioschi_curvature_fd(
            |_, _| 1.0,
            |x: f64, _| 1.0 / (x * x),
            x,
            0.0,
            1e-3 * x,
        );
        assert!((fd - exact).abs() <= 1e-4 * exact.abs(), "x={x}: FD {fd} vs {exact}");
    }
    println!("criterion 8 (Grushin geodesic lengths, constant speed, curvature): pass");
}

#[test]
fn criterion_09_energy_scaling() {
    let h = 2f64.powi(-10);
    let eps = 2f64.powi(-9);
    let grid = lab::compose_on_grid(embed::legendrian_f, 2, h, eps).unwrap();
    let annulus_energy = |p: f64, r_in: f64, r_out: f64| {
        lab::horizontal_energy_in(&grid, p, f64::INFINITY, |x| {
            let r = (x[0] * x[0] + x[1] * x[1]).sqrt();
            r >= r_in && r < r_out
        })
        .unwrap()
    };
    // p = 1.5: consecutive dyadic annuli scale by 2^{p-2} = 2^{-1/2}
    let radii: Vec<f64> = (0..=6).map(|k| 2f64.powi(-7 + k)).collect();
    let e15: Vec<f64> = radii.windows(2).map(|w| annulus_energy(1.5, w[0], w[1])).collect();
    let expected = 2f64.powf(-0.5);
    for w in e15.windows(2) {
        let ratio = w[0] / w[1];
        assert!(
            (ratio - expected).abs() <= 0.1 * expected,
            "p=1.5 annulus ratio {ratio} vs {expected} in {e15:?}"
        );
    }
    // p = 2: equal energy per dyadic annulus, i.e. linear growth in |log eps|
    let e2: Vec<f64> = radii.windows(2).map(|w| annulus_energy(2.0, w[0], w[1])).collect();
    let mean: f64 = e2.iter().sum::<f64>() / e2.len() as f64;
    for e in &e2 {
        assert!(*e >= 0.9 * mean, "p=2 increment {e} below 0.9 of mean {mean} in {e2:?}");
    }
    println!("criterion 9 (annular energy scaling at p=1.5, log divergence at p=2): pass");
}

#[test]
fn criterion_10_rank_obstruction() {
    let map = |x: &[f64]| {
        let p = SpherePoint::project(x.to_vec()).unwrap();
        embed::legendrian_f(&p).coords().to_vec()
    };
    let points: Vec<Vec<f64>> = embed::random_sphere_points(2, 1000, 10)
        .into_iter()
        .map(|p| p.coords().to_vec())
        .collect();
    let report = lab::rank_check(map, &points, 1e-6).unwrap();
    assert_eq!(report.max_rank, 2);
    assert!(
        report.sv_ratios[2] < 1e-6,
        "third singular value ratio {}",
        report.sv_ratios[2]
    );
    println!("criterion 10 (Jacobian rank at most n for the horizontal sphere): pass");
}

#[test]
fn criterion_11_stokes_identity() {
    let identity = |x: &[f64; 2]| vec![x[0], x[1]];
    let stretch = |x: &[f64; 2]| {
        let r = (x[0] * x[0] + x[1] * x[1]).sqrt();
        vec![r * x[0], r * x[1]]
    };
    let omega = lab::OneForm::x_dy();
    for (name, g) in [
        ("identity", Box::new(identity) as Box<dyn Fn(&[f64; 2]) -> Vec<f64>>),
        ("stretch", Box::new(stretch)),
    ] {
        let gap = |h: f64| {
            let (b, i) = lab::stokes_check(&g, &omega, h).unwrap();
            (b - i).abs()
        };
        let g1 = gap(1e-2);
        assert!(g1 <= 1e-2, "{name}: gap {g1} at h=1e-2");
        let g2 = gap(5e-3);
        assert!(g2 <= 0.75 * g1, "{name}: no first-order decay ({g1} -> {g2})");
    }
    println!("criterion 11 (Stokes boundary/interior agreement with first-order decay): pass");
}

#[test]
fn criterion_12_winding_numbers() {
    let circle = |m: usize, turns: usize, reverse: bool| {
        let pts: Vec<Vec<f64>> = (0..=m * turns)
            .map(|i| {
                let sgn = if reverse { -1.0 } else { 1.0 };
                let th = sgn * 2.0 * PI * i as f64 / m as f64;
                vec![th.cos(), th.sin()]
            })
            .collect();
        SampledCurve::uniform(pts, true).unwrap()
    };
    for m in [100, 1000] {
        assert_eq!(lab::winding_number(&circle(m, 1, false), &[0.0, 0.0]).unwrap(), 1);
        assert_eq!(lab::winding_number(&circle(m, 1, false), &[3.0, 0.5]).unwrap(), 0);
        assert_eq!(lab::winding_number(&circle(m, 2, true), &[0.0, 0.0]).unwrap(), -2);
    }
    println!("criterion 12 (winding numbers exact and refinement invariant): pass");
}
