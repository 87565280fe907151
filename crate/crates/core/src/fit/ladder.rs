use serde::Serialize;

use super::spec::{Family, ModelSpec, Param};
use super::{fit_mle, FitOptions, FitResult};
use crate::error::Result;
use crate::gat::SU_PROXY_NU;

/// Results of a nested sequence of fits.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ladder {
    pub results: Vec<FitResult>,
    /// index into `results` of the minimum-AIC fit
    pub best: usize,
}

impl Ladder {
    pub fn best(&self) -> &FitResult {
        &self.results[self.best]
    }
}

fn stages(family: Family) -> Vec<ModelSpec> {
    let fix = |pairs: &[(Param, f64)]| ModelSpec::new(family, pairs.iter().copied()).expect("valid stage");
    match family {
        Family::Gat => vec![
            ModelSpec::gat4(),
            fix(&[(Param::Alpha, 1.0)]),
            fix(&[(Param::R, 1.0)]),
            ModelSpec::full(Family::Gat),
            ModelSpec::su_proxy(),
        ],
        Family::Ast => vec![ModelSpec::ast4(), ModelSpec::full(Family::Ast)],
    }
}

/// Start for `spec` derived from an earlier fit: fixed values imposed, and
/// for the S_U proxy `α` rescaled so that `να` is preserved.
fn warm_start(spec: &ModelSpec, prev: &FitResult) -> [f64; 6] {
    let mut v = prev.params.values();
    if let Some(&nu) = spec.fixed().get(&Param::Nu) {
        if nu == SU_PROXY_NU && !spec.is_fixed(Param::Alpha) {
            v[Param::Alpha.index()] = v[Param::Nu.index()] * v[Param::Alpha.index()] / nu;
        }
    }
    for (&p, &val) in spec.fixed() {
        v[p.index()] = val;
    }
    v
}

/// Fit the nested stages of `family` in order.
///
/// GAT: `{r=1, α=1}`, `{α=1}`, `{r=1}`, full, then the S_U proxy
/// `{ν=200, r=1}`. AST: `{r=1}`, full. Each stage starts from whichever
/// earlier fit, with the stage's fixed values imposed, has the highest
/// likelihood, so a stage nesting an earlier one can only improve on it.
pub fn fit_ladder(data: &[f64], family: Family, options: &FitOptions) -> Result<Ladder> {
    let mut results: Vec<FitResult> = Vec::new();
    for spec in stages(family) {
        let mut best_start: Option<([f64; 6], f64)> = None;
        for prev in &results {
            let start = warm_start(&spec, prev);
            let Ok(law) = super::FittedParams::build(family, &start) else {
                continue;
            };
            let nll = -law.log_likelihood(data);
            if best_start.is_none_or(|(_, f)| nll < f) {
                best_start = Some((start, nll));
            }
        }
        let opts = FitOptions {
            start: best_start.map(|(s, _)| s).or(options.start),
            ..options.clone()
        };
        results.push(fit_mle(data, &spec, &opts)?);
    }
    let best = results
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.aic.total_cmp(&b.1.aic))
        .map(|(i, _)| i)
        .expect("at least one stage");
    Ok(Ladder { results, best })
}
