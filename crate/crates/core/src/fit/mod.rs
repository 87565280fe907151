//! Maximum-likelihood fitting of GAT and AST laws.
//!
//! Fits run Nelder–Mead on an unconstrained, data-scaled parameter vector,
//! followed by jittered restarts from the incumbent optimum. Standard errors
//! come from a finite-difference Hessian in that parameterisation, mapped
//! back with the delta method.

mod ladder;
mod nelder_mead;
mod problem;
mod regression;
mod spec;

use nalgebra::Cholesky;
use serde::Serialize;

pub use ladder::{fit_ladder, Ladder};
pub use regression::{fit_regression, RegressionSpec};
pub use spec::{Family, ModelSpec, Param};

use crate::ast::AstParams;
use crate::error::Result;
use crate::gat::GatParams;
use crate::specfun::RandomStream;
use problem::{check_spread, robust_location_scale, validate_data, Problem, Slot};

/// Optimiser settings.
#[derive(Debug, Clone, PartialEq)]
pub struct FitOptions {
    /// stop once the spread of `−ℓ` over the simplex is at most this
    pub tol: f64,
    /// extra runs restarted from the incumbent with a jittered simplex
    pub restarts: usize,
    /// objective evaluations per run; `None` means `2000·(dim + 1)`
    pub max_evals: Option<usize>,
    /// seed for the restart jitter
    pub seed: u64,
    /// natural starting values `[μ, φ, ν, c, r, α]`; fixed entries are
    /// overridden by the spec
    pub start: Option<[f64; 6]>,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            restarts: 2,
            max_evals: None,
            seed: 0,
            start: None,
        }
    }
}

/// A fitted law of either family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FittedParams {
    Gat(GatParams),
    Ast(AstParams),
}

impl FittedParams {
    pub(crate) fn build(family: Family, v: &[f64; 6]) -> Result<Self> {
        let [mu, phi, nu, c, r, alpha] = *v;
        Ok(match family {
            Family::Gat => FittedParams::Gat(GatParams::new(mu, phi, nu, c, r, alpha)?),
            Family::Ast => FittedParams::Ast(AstParams::new(mu, phi, nu, c, r)?),
        })
    }

    pub fn family(&self) -> Family {
        match self {
            FittedParams::Gat(_) => Family::Gat,
            FittedParams::Ast(_) => Family::Ast,
        }
    }

    /// Natural values `[μ, φ, ν, c, r, α]`; AST reports `α = 1`.
    pub fn values(&self) -> [f64; 6] {
        match self {
            FittedParams::Gat(g) => [g.mu(), g.phi(), g.nu(), g.c(), g.r(), g.alpha()],
            FittedParams::Ast(a) => [a.mu(), a.phi(), a.nu(), a.c(), a.r(), 1.0],
        }
    }

    pub fn log_pdf(&self, x: f64) -> f64 {
        match self {
            FittedParams::Gat(g) => g.log_pdf(x),
            FittedParams::Ast(a) => a.log_pdf(x),
        }
    }

    pub fn pdf(&self, x: f64) -> f64 {
        self.log_pdf(x).exp()
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match self {
            FittedParams::Gat(g) => g.cdf(x),
            FittedParams::Ast(a) => a.cdf(x),
        }
    }

    pub fn log_likelihood(&self, data: &[f64]) -> f64 {
        match self {
            FittedParams::Gat(g) => g.log_likelihood(data),
            FittedParams::Ast(a) => a.log_likelihood(data),
        }
    }

    pub fn sample(&self, n: usize, stream: &mut RandomStream) -> Vec<f64> {
        match self {
            FittedParams::Gat(g) => g.sample(n, stream),
            FittedParams::Ast(a) => a.sample(n, stream),
        }
    }
}

/// One reported parameter or regression coefficient.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Estimate {
    pub name: String,
    pub value: f64,
    pub fixed: bool,
    /// `None` when fixed or when the Hessian gave no usable curvature
    pub std_error: Option<f64>,
}

/// Covariate slopes of a regression fit; intercepts live in `params`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Coefficients {
    /// location slopes, empty unless the location is modelled
    pub beta: Vec<f64>,
    /// log-scale slopes, empty unless the scale is modelled
    pub gamma: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub spec: ModelSpec,
    /// For a regression, the law at covariates `z = 0`.
    #[serde(skip)]
    pub params: FittedParams,
    /// family parameters in canonical order, then any coefficients
    pub estimates: Vec<Estimate>,
    pub neg_log_lik: f64,
    pub aic: f64,
    pub bic: f64,
    pub converged: bool,
    pub n_obs: usize,
    pub evaluations: usize,
    pub diagnostics: Vec<String>,
    pub coefficients: Option<Coefficients>,
}

impl FitResult {
    /// Number of free quantities, `k` in the information criteria.
    pub fn n_free(&self) -> usize {
        self.estimates.iter().filter(|e| !e.fixed).count()
    }

    pub fn estimate(&self, name: &str) -> Option<&Estimate> {
        self.estimates.iter().find(|e| e.name == name)
    }

    /// Standard errors of the floated quantities in `estimates` order.
    pub fn std_errors(&self) -> Vec<Option<f64>> {
        self.estimates.iter().filter(|e| !e.fixed).map(|e| e.std_error).collect()
    }

    /// Fitted `E(X | z)`: the location at `z` plus the mean offset of the
    /// law, scaled by the scale at `z`. `None` for AST or when the mean
    /// does not exist.
    pub fn mean_at(&self, z: &[f64]) -> Option<f64> {
        let FittedParams::Gat(g) = self.params else {
            return None;
        };
        let offset = (g.mean()? - g.mu()) / g.phi();
        let (beta, gamma) = self
            .coefficients
            .as_ref()
            .map_or((&[][..], &[][..]), |c| (&c.beta[..], &c.gamma[..]));
        let dot = |w: &[f64]| w.iter().zip(z).map(|(a, b)| a * b).sum::<f64>();
        let mu = g.mu() + dot(beta);
        let phi = g.phi() * dot(gamma).exp();
        Some(mu + phi * offset)
    }
}

fn initial_step(slot: Slot) -> f64 {
    match slot {
        Slot::Param(Param::Mu) | Slot::Param(Param::Phi) => 0.25,
        Slot::Param(Param::Nu) | Slot::Param(Param::Alpha) => 0.5,
        Slot::Param(Param::C) | Slot::Param(Param::R) => 0.2,
        Slot::MuCoef(_) => 0.25,
        Slot::LogPhiCoef(_) => 0.1,
    }
}

/// Simplex search plus restarts; never returns a point worse than `theta0`.
fn optimise(problem: &Problem, theta0: Vec<f64>, options: &FitOptions) -> nelder_mead::Outcome {
    let dim = problem.dim();
    let max_evals = options.max_evals.unwrap_or(2000 * (dim + 1));
    let steps: Vec<f64> = problem.slots.iter().map(|&s| initial_step(s)).collect();
    let objective = |t: &[f64]| problem.objective(t);

    let f0 = objective(&theta0);
    let mut best = nelder_mead::minimize(
        objective,
        nelder_mead::axis_simplex(&theta0, &steps),
        options.tol,
        max_evals,
    );
    let mut jitter = RandomStream::new(options.seed);
    for _ in 0..options.restarts {
        let steps: Vec<f64> = steps
            .iter()
            .map(|s| {
                let sign = if jitter.uniform() < 0.5 { -1.0 } else { 1.0 };
                sign * s * (0.5 + jitter.uniform())
            })
            .collect();
        let run = nelder_mead::minimize(
            objective,
            nelder_mead::axis_simplex(&best.x, &steps),
            options.tol,
            max_evals,
        );
        let evaluations = best.evaluations + run.evaluations;
        if run.f <= best.f {
            best = run;
        } else {
            best.converged = best.converged && run.converged;
        }
        best.evaluations = evaluations;
    }
    if best.f.is_nan() || best.f > f0 {
        best.x = theta0;
        best.f = f0;
    }
    best
}

/// Standard errors of every slot, or a diagnostic when the Hessian is not
/// positive definite.
fn slot_std_errors(problem: &Problem, theta: &[f64]) -> std::result::Result<Vec<f64>, String> {
    let hess = problem.hessian(theta);
    if hess.iter().any(|v| !v.is_finite()) {
        return Err("Hessian has non-finite entries (optimum on a parameter bound?)".into());
    }
    let chol = Cholesky::new(hess).ok_or_else(|| "Hessian is not positive definite".to_string())?;
    let cov = chol.inverse();
    problem
        .slots
        .iter()
        .enumerate()
        .map(|(i, &slot)| {
            let var = cov[(i, i)];
            if var > 0.0 && var.is_finite() {
                Ok(problem.jacobian(slot, theta[i]).abs() * var.sqrt())
            } else {
                Err(format!("non-positive variance for {}", slot_name(slot)))
            }
        })
        .collect()
}

fn slot_name(slot: Slot) -> String {
    match slot {
        Slot::Param(p) => p.name().to_string(),
        Slot::MuCoef(j) => format!("beta{}", j + 1),
        Slot::LogPhiCoef(j) => format!("gamma{}", j + 1),
    }
}

const AST_SE_POLICY: &str =
    "standard errors not reported for AST: its likelihood has a discontinuous second derivative";

/// Assemble the reported result from an optimised problem.
fn finish(
    problem: &Problem,
    spec: &ModelSpec,
    outcome: nelder_mead::Outcome,
    mut diagnostics: Vec<String>,
) -> Result<FitResult> {
    let (nat, beta, gamma) = problem.unpack(&outcome.x);
    let params = FittedParams::build(spec.family(), &nat)?;
    let std_errors: Vec<Option<f64>> = match spec.family() {
        Family::Ast => {
            diagnostics.push(AST_SE_POLICY.into());
            vec![None; problem.dim()]
        }
        Family::Gat => match slot_std_errors(problem, &outcome.x) {
            Ok(se) => se.into_iter().map(Some).collect(),
            Err(msg) => {
                diagnostics.push(msg);
                vec![None; problem.dim()]
            }
        },
    };
    let se_of = |slot: Slot| {
        problem
            .slots
            .iter()
            .position(|&s| s == slot)
            .and_then(|i| std_errors[i])
    };
    let mut estimates: Vec<Estimate> = spec
        .family()
        .params()
        .iter()
        .map(|&p| Estimate {
            name: p.name().to_string(),
            value: nat[p.index()],
            fixed: spec.is_fixed(p),
            std_error: se_of(Slot::Param(p)),
        })
        .collect();
    let mut coefficients = None;
    if let Some(design) = &problem.design {
        let take = |on: bool, v: &[f64]| if on { v.to_vec() } else { Vec::new() };
        let c = Coefficients {
            beta: take(design.model_mu, &beta),
            gamma: take(design.model_log_phi, &gamma),
        };
        for (j, &v) in c.beta.iter().enumerate() {
            let slot = Slot::MuCoef(j);
            estimates.push(Estimate {
                name: slot_name(slot),
                value: v,
                fixed: false,
                std_error: se_of(slot),
            });
        }
        for (j, &v) in c.gamma.iter().enumerate() {
            let slot = Slot::LogPhiCoef(j);
            estimates.push(Estimate {
                name: slot_name(slot),
                value: v,
                fixed: false,
                std_error: se_of(slot),
            });
        }
        coefficients = Some(c);
    }
    let neg_log_lik = if problem.design.is_some() {
        outcome.f
    } else {
        -params.log_likelihood(problem.data)
    };
    let floats = |p: Param| !spec.is_fixed(p);
    if spec.family() == Family::Gat && floats(Param::Nu) && floats(Param::Alpha) && nat[5] < 1e-3 && nat[2] > 1e3 {
        diagnostics.push(
            "likelihood rises toward the S_U limit (alpha -> 0, nu -> inf, nu*alpha fixed); \
             the nu=200 proxy is the identified form"
                .into(),
        );
    }
    let k = problem.dim() as f64;
    let n = problem.data.len();
    if !outcome.converged {
        diagnostics.push(format!(
            "simplex did not reach the tolerance within {} evaluations",
            outcome.evaluations
        ));
    }
    Ok(FitResult {
        spec: spec.clone(),
        params,
        estimates,
        neg_log_lik,
        aic: 2.0 * k + 2.0 * neg_log_lik,
        bic: k * (n as f64).ln() + 2.0 * neg_log_lik,
        converged: outcome.converged,
        n_obs: n,
        evaluations: outcome.evaluations,
        diagnostics,
        coefficients,
    })
}

/// Maximum-likelihood fit of `spec` to `data`.
///
/// Non-convergence is reported through `converged = false` with the best
/// point found.
pub fn fit_mle(data: &[f64], spec: &ModelSpec, options: &FitOptions) -> Result<FitResult> {
    validate_data(data)?;
    check_spread(data, spec)?;
    let (mu_ref, s_ref) = robust_location_scale(data);
    let mut problem = Problem::new(data, spec, mu_ref, s_ref);
    if let Some(start) = options.start {
        for p in spec.floated() {
            problem.base[p.index()] = start[p.index()];
        }
    }
    let theta0 = problem.theta_of(&problem.base, &[], &[]);
    let outcome = optimise(&problem, theta0, options);
    finish(&problem, spec, outcome, Vec::new())
}

/// Recompute standard errors for a plain (non-regression) fit.
///
/// Entries are `None` for fixed parameters, for every AST parameter and
/// when the Hessian is not positive definite; the second value carries the
/// reason in those cases.
pub fn std_errors(data: &[f64], result: &FitResult) -> Result<(Vec<Option<f64>>, Option<String>)> {
    validate_data(data)?;
    let (mu_ref, s_ref) = robust_location_scale(data);
    let problem = Problem::new(data, &result.spec, mu_ref, s_ref);
    if result.spec.family() == Family::Ast {
        return Ok((vec![None; problem.dim()], Some(AST_SE_POLICY.into())));
    }
    let theta = problem.theta_of(&result.params.values(), &[], &[]);
    Ok(match slot_std_errors(&problem, &theta) {
        Ok(se) => (se.into_iter().map(Some).collect(), None),
        Err(msg) => (vec![None; problem.dim()], Some(msg)),
    })
}
