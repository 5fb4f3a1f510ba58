//! Shared descent machinery for the collocation oracles: adaptive-step
//! gradient descent with central finite-difference gradients.

pub(crate) fn fd_gradient<F>(f: &F, u: &mut [f64]) -> Vec<f64>
where
    F: Fn(&[f64]) -> f64,
{
    let h = 1e-6;
    let mut g = vec![0.0; u.len()];
    for i in 0..u.len() {
        let saved = u[i];
        u[i] = saved + h;
        let fp = f(u);
        u[i] = saved - h;
        let fm = f(u);
        u[i] = saved;
        g[i] = (fp - fm) / (2.0 * h);
    }
    g
}

/// Minimizes `f` from `u` in place. The step grows on accepted moves and
/// halves on rejected ones; stops on a flat gradient or the iteration cap.
pub(crate) fn descend<F>(f: &F, u: &mut Vec<f64>, max_iter: usize)
where
    F: Fn(&[f64]) -> f64,
{
    let mut step = 1e-2;
    let mut fval = f(u);
    for _ in 0..max_iter {
        let g = fd_gradient(f, u);
        let gnorm: f64 = g.iter().map(|x| x * x).sum::<f64>().sqrt();
        if gnorm < 1e-10 * (1.0 + fval.abs()) {
            break;
        }
        let mut accepted = false;
        for _ in 0..40 {
            let trial: Vec<f64> = u.iter().zip(&g).map(|(x, gi)| x - step * gi).collect();
            let ft = f(&trial);
            if ft < fval {
                *u = trial;
                fval = ft;
                step *= 1.5;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
    }
}
