//! Anderson–Darling goodness of fit with parametric-bootstrap p-values.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{GatError, Result};
use crate::fit::{fit_mle, FitOptions, FitResult, FittedParams, ModelSpec};
use crate::specfun::RandomStream;

/// Probability-integral transforms outside `[CLAMP, 1 − CLAMP]` are rejected.
pub const CLAMP: f64 = 1e-15;

/// Smallest accepted bootstrap size.
pub const MIN_BOOT: usize = 99;

/// Largest tolerated fraction of failed replicate fits.
pub const MAX_FAILURE_RATE: f64 = 0.05;

/// `A² = −n − (1/n) Σ (2i − 1) [ln uᵢ + ln(1 − u_{n+1−i})]` over the sorted
/// transforms `uᵢ = cdf(xᵢ)`.
pub fn anderson_darling<F: Fn(f64) -> f64>(data: &[f64], cdf: F) -> Result<f64> {
    if data.len() < 2 {
        return Err(GatError::DegenerateData(format!(
            "Anderson-Darling needs at least two observations, got {}",
            data.len()
        )));
    }
    let mut u = Vec::with_capacity(data.len());
    for &x in data {
        let v = cdf(x);
        if !(CLAMP..=1.0 - CLAMP).contains(&v) {
            return Err(GatError::DegenerateData(format!(
                "probability transform of {x} is {v:e}, beyond the clamp {CLAMP:e}"
            )));
        }
        u.push(v);
    }
    u.sort_by(f64::total_cmp);
    let n = u.len();
    let s: f64 = (0..n)
        .map(|i| (2 * i + 1) as f64 * (u[i].ln() + (-u[n - 1 - i]).ln_1p()))
        .sum();
    Ok(-(n as f64) - s / n as f64)
}

/// How bootstrap replicates are scored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Protocol {
    /// Refit the model to every replicate, as the estimated-parameter null
    /// distribution requires.
    #[default]
    Refit,
    /// Score replicates against the original fit. Not a valid test; kept to
    /// demonstrate the difference.
    FixedParams,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BootstrapOptions {
    pub protocol: Protocol,
    /// settings for the original fit; replicates warm-start from its optimum
    pub fit: FitOptions,
}

impl Default for BootstrapOptions {
    fn default() -> Self {
        Self {
            protocol: Protocol::Refit,
            fit: FitOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GofReport {
    /// observed `A²`
    pub statistic: f64,
    /// `(1 + #{A*² ≥ A²}) / (B + 1)` over the `B` successful replicates
    pub p_value: f64,
    pub n_boot: usize,
    pub seed: u64,
    pub failed_replicates: usize,
    pub fit: FitResult,
}

/// Parametric-bootstrap p-value of the Anderson–Darling statistic for
/// `spec` fitted to `data`. Replicate `i` draws from substream `i + 1` of
/// `stream`'s seed.
pub fn bootstrap_p(data: &[f64], spec: &ModelSpec, n_boot: usize, stream: &RandomStream) -> Result<GofReport> {
    bootstrap_p_with(data, spec, n_boot, stream, &BootstrapOptions::default())
}

pub fn bootstrap_p_with(
    data: &[f64],
    spec: &ModelSpec,
    n_boot: usize,
    stream: &RandomStream,
    options: &BootstrapOptions,
) -> Result<GofReport> {
    if n_boot < MIN_BOOT {
        return Err(GatError::InvalidSpec(format!(
            "bootstrap size {n_boot} is below the minimum {MIN_BOOT}"
        )));
    }
    let fit = fit_mle(data, spec, &options.fit)?;
    let law = fit.params;
    let statistic = anderson_darling(data, |x| law.cdf(x))?;
    let seed = stream.seed();
    let replicate_opts = FitOptions {
        start: Some(law.values()),
        ..options.fit.clone()
    };

    let replicate = |i: usize| -> Option<f64> {
        let mut s = RandomStream::substream(seed, i as u64 + 1);
        let sample = law.sample(data.len(), &mut s);
        let scored: FittedParams = match options.protocol {
            Protocol::Refit => fit_mle(&sample, spec, &replicate_opts).ok()?.params,
            Protocol::FixedParams => law,
        };
        anderson_darling(&sample, |x| scored.cdf(x)).ok()
    };
    let stats: Vec<Option<f64>> = (0..n_boot).into_par_iter().map(replicate).collect();

    let failed = stats.iter().filter(|s| s.is_none()).count();
    if failed as f64 > MAX_FAILURE_RATE * n_boot as f64 {
        return Err(GatError::BootstrapFailures { failed, total: n_boot });
    }
    let ok = n_boot - failed;
    let exceed = stats.iter().flatten().filter(|&&a| a >= statistic).count();
    Ok(GofReport {
        statistic,
        p_value: (1 + exceed) as f64 / (ok + 1) as f64,
        n_boot,
        seed,
        failed_replicates: failed,
        fit,
    })
}
