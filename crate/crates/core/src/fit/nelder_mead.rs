//! Nelder–Mead simplex minimisation with dimension-adaptive coefficients
//! (Gao and Han, 2012). NaN objective values rank as `+∞`.

#[derive(Debug, Clone)]
pub(crate) struct Outcome {
    pub x: Vec<f64>,
    pub f: f64,
    pub evaluations: usize,
    /// spread of objective values across the final simplex fell below tolerance
    pub converged: bool,
}

pub(crate) fn minimize<F>(mut objective: F, simplex: Vec<Vec<f64>>, tol: f64, max_evals: usize) -> Outcome
where
    F: FnMut(&[f64]) -> f64,
{
    let mut eval = |x: &[f64]| {
        let v = objective(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let n = simplex.len() - 1;
    if n == 0 {
        let f = eval(&simplex[0]);
        return Outcome {
            x: simplex[0].clone(),
            f,
            evaluations: 1,
            converged: true,
        };
    }
    let nf = n.max(2) as f64;
    let reflect = 1.0;
    let expand = 1.0 + 2.0 / nf;
    let contract = 0.75 - 0.5 / nf;
    let shrink = 1.0 - 1.0 / nf;

    let mut pts: Vec<(Vec<f64>, f64)> = simplex
        .into_iter()
        .map(|x| {
            let f = eval(&x);
            (x, f)
        })
        .collect();
    let mut evaluations = n + 1;
    let mut converged = false;

    let along = |from: &[f64], to: &[f64], t: f64| -> Vec<f64> {
        from.iter().zip(to).map(|(a, b)| a + t * (b - a)).collect()
    };

    loop {
        pts.sort_by(|a, b| a.1.total_cmp(&b.1));
        let spread = pts[n].1 - pts[0].1;
        // below the rounding floor of the objective the spread is noise
        let floor = tol.max(64.0 * f64::EPSILON * pts[0].1.abs());
        if spread <= floor || (pts[0].1.is_infinite() && pts[n].1.is_infinite()) {
            converged = spread <= floor;
            break;
        }
        if evaluations >= max_evals {
            break;
        }

        let mut centroid = vec![0.0; n];
        for (x, _) in &pts[..n] {
            for (c, v) in centroid.iter_mut().zip(x) {
                *c += v / n as f64;
            }
        }
        let worst = pts[n].0.clone();
        let xr = along(&centroid, &worst, -reflect);
        let fr = eval(&xr);
        evaluations += 1;

        if fr < pts[0].1 {
            let xe = along(&centroid, &worst, -reflect * expand);
            let fe = eval(&xe);
            evaluations += 1;
            pts[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < pts[n - 1].1 {
            pts[n] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr < pts[n].1 {
            let xc = along(&centroid, &xr, contract);
            let fc = eval(&xc);
            (xc, fc)
        } else {
            let xc = along(&centroid, &worst, contract);
            let fc = eval(&xc);
            (xc, fc)
        };
        evaluations += 1;
        if fc < fr.min(pts[n].1) {
            pts[n] = (xc, fc);
            continue;
        }
        let best = pts[0].0.clone();
        for p in pts.iter_mut().skip(1) {
            p.0 = along(&best, &p.0, shrink);
            p.1 = eval(&p.0);
        }
        evaluations += n;
    }

    pts.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, f) = pts.swap_remove(0);
    Outcome {
        x,
        f,
        evaluations,
        converged,
    }
}

/// Simplex with vertex `x0` and one vertex per axis offset by `steps[i]`.
pub(crate) fn axis_simplex(x0: &[f64], steps: &[f64]) -> Vec<Vec<f64>> {
    let mut simplex = vec![x0.to_vec()];
    for (i, s) in steps.iter().enumerate() {
        let mut v = x0.to_vec();
        v[i] += s;
        simplex.push(v);
    }
    simplex
}
