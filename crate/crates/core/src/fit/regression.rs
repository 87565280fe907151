use nalgebra::{DMatrix, DVector};

use super::problem::{robust_location_scale, validate_data, Design, Problem, Slot};
use super::spec::{ModelSpec, Param};
use super::{finish, fit_mle, optimise, FitOptions, FitResult};
use crate::error::{GatError, Result};

/// Covariates for location and/or log-scale regression.
///
/// With `model_mu`, observation `i` has location `μ + βᵀzᵢ`; with
/// `model_log_phi`, scale `φ·exp(γᵀzᵢ)`. The intercepts are the family's own
/// `μ` and `φ`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegressionSpec {
    /// `n × p`, one row per observation
    pub covariates: DMatrix<f64>,
    pub model_mu: bool,
    pub model_log_phi: bool,
}

impl RegressionSpec {
    pub fn location(covariates: DMatrix<f64>) -> Self {
        Self {
            covariates,
            model_mu: true,
            model_log_phi: false,
        }
    }
}

fn column_sd(z: &DMatrix<f64>, j: usize) -> f64 {
    let col = z.column(j);
    let n = col.len() as f64;
    let mean = col.sum() / n;
    (col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt()
}

/// Least-squares slopes of `data` on `[1, Z]`, plus the rank of that design.
fn ols(data: &[f64], z: &DMatrix<f64>) -> (Vec<f64>, usize) {
    let (n, p) = z.shape();
    let x = DMatrix::from_fn(n, p + 1, |i, j| if j == 0 { 1.0 } else { z[(i, j - 1)] });
    let svd = x.svd(true, true);
    let smax = svd.singular_values.max();
    let rank = svd.singular_values.iter().filter(|&&s| s > 1e-10 * smax).count();
    let y = DVector::from_column_slice(data);
    let coef = svd
        .solve(&y, 1e-10 * smax)
        .map(|c| c.iter().skip(1).copied().collect())
        .unwrap_or_else(|_| vec![0.0; p]);
    (coef, rank)
}

/// Fit `spec` with covariate-dependent location and/or scale.
///
/// With no covariates, or neither flag set, this is exactly [`fit_mle`].
pub fn fit_regression(
    data: &[f64],
    reg: &RegressionSpec,
    spec: &ModelSpec,
    options: &FitOptions,
) -> Result<FitResult> {
    validate_data(data)?;
    let (rows, p) = reg.covariates.shape();
    if rows != data.len() {
        return Err(GatError::InvalidSpec(format!(
            "covariate matrix has {rows} rows for {} observations",
            data.len()
        )));
    }
    if let Some((i, v)) = reg.covariates.iter().enumerate().find(|(_, v)| !v.is_finite()) {
        return Err(GatError::InvalidSpec(format!("covariate entry {i} is not finite ({v})")));
    }
    if p == 0 || !(reg.model_mu || reg.model_log_phi) {
        return fit_mle(data, spec, options);
    }

    let mut diagnostics = Vec::new();
    let (slopes, rank) = ols(data, &reg.covariates);
    if rank < p + 1 {
        diagnostics.push(format!(
            "covariates are rank deficient (rank {rank} of {}); slopes are not identified",
            p + 1
        ));
    }
    let sd: Vec<f64> = (0..p)
        .map(|j| match column_sd(&reg.covariates, j) {
            s if s > 0.0 => s,
            _ => 1.0,
        })
        .collect();

    let beta0 = if reg.model_mu { slopes } else { vec![0.0; p] };
    let residuals: Vec<f64> = data
        .iter()
        .enumerate()
        .map(|(i, &x)| x - reg.covariates.row(i).iter().zip(&beta0).map(|(a, b)| a * b).sum::<f64>())
        .collect();
    let (mu_ref, s_ref) = robust_location_scale(&residuals);

    let mut problem = Problem::new(data, spec, mu_ref, s_ref);
    problem.design = Some(Design {
        z: &reg.covariates,
        model_mu: reg.model_mu,
        model_log_phi: reg.model_log_phi,
        sd,
    });
    if reg.model_mu {
        problem.slots.extend((0..p).map(Slot::MuCoef));
    }
    if reg.model_log_phi {
        problem.slots.extend((0..p).map(Slot::LogPhiCoef));
    }
    let mut start = problem.base;
    if let Some(s) = options.start {
        for q in spec.floated() {
            start[q.index()] = s[q.index()];
        }
    }
    if !spec.is_fixed(Param::Mu) && options.start.is_none() {
        start[Param::Mu.index()] = mu_ref;
    }
    let theta0 = problem.theta_of(&start, &beta0, &vec![0.0; p]);
    let outcome = optimise(&problem, theta0, options);
    finish(&problem, spec, outcome, diagnostics)
}
