//! Negative log-likelihood over an unconstrained, data-scaled parameter
//! vector.
//!
//! The location is optimised as `(μ − μ_ref)/s_ref` and every positive
//! parameter as a logarithm (`ln(φ/s_ref)` for the scale), with `μ_ref`
//! the sample median and `s_ref` half the interquartile range. The scaling
//! makes the optimiser path equivariant under affine maps of the data.

use nalgebra::DMatrix;

use super::spec::{Family, ModelSpec, Param};
use crate::ast::AstParams;
use crate::error::{GatError, Result};
use crate::gat::GatParams;

/// Box on natural values; the objective is `+∞` outside it.
fn in_range(p: Param, v: f64) -> bool {
    let (lo, hi) = match p {
        Param::Mu => return v.is_finite(),
        Param::Phi => (1e-300, 1e300),
        Param::Nu => (1e-3, 1e6),
        Param::C | Param::R => (1e-3, 1e3),
        Param::Alpha => (1e-6, 1e3),
    };
    v >= lo && v <= hi
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Slot {
    Param(Param),
    /// slope of covariate `j` in the location
    MuCoef(usize),
    /// slope of covariate `j` in the log scale
    LogPhiCoef(usize),
}

#[derive(Debug, Clone)]
pub(crate) struct Design<'a> {
    pub z: &'a DMatrix<f64>,
    pub model_mu: bool,
    pub model_log_phi: bool,
    pub sd: Vec<f64>,
}

#[derive(Debug, Clone)]
pub(crate) struct Problem<'a> {
    pub data: &'a [f64],
    pub family: Family,
    pub slots: Vec<Slot>,
    /// natural parameter values; floated entries are overwritten per call
    pub base: [f64; 6],
    pub mu_ref: f64,
    pub s_ref: f64,
    pub design: Option<Design<'a>>,
}

/// Sample median and half the interquartile range (type 7 quantiles).
pub(crate) fn robust_location_scale(data: &[f64]) -> (f64, f64) {
    let mut s = data.to_vec();
    s.sort_by(f64::total_cmp);
    let q = |p: f64| {
        let h = (s.len() - 1) as f64 * p;
        let lo = h.floor() as usize;
        let hi = (lo + 1).min(s.len() - 1);
        s[lo] + (h - lo as f64) * (s[hi] - s[lo])
    };
    let median = q(0.5);
    let mut scale = 0.5 * (q(0.75) - q(0.25));
    if scale.is_nan() || scale <= 0.0 {
        let mean = s.iter().sum::<f64>() / s.len() as f64;
        scale = (s.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / s.len() as f64).sqrt();
    }
    if scale.is_nan() || scale <= 0.0 {
        scale = median.abs().max(1.0);
    }
    (median, scale)
}

pub(crate) fn validate_data(data: &[f64]) -> Result<()> {
    if data.is_empty() {
        return Err(GatError::EmptyData);
    }
    if let Some((index, &value)) = data.iter().enumerate().find(|(_, v)| !v.is_finite()) {
        return Err(GatError::NonFiniteData { index, value });
    }
    Ok(())
}

/// With a floated scale, identical observations drive `φ → 0` and the
/// likelihood has no maximum.
pub(crate) fn check_spread(data: &[f64], spec: &ModelSpec) -> Result<()> {
    if !spec.is_fixed(Param::Phi) && data.iter().all(|&x| x == data[0]) {
        return Err(GatError::DegenerateData(format!(
            "all {} observations equal {}; the scale cannot be estimated",
            data.len(),
            data[0]
        )));
    }
    Ok(())
}

impl<'a> Problem<'a> {
    pub fn new(data: &'a [f64], spec: &ModelSpec, mu_ref: f64, s_ref: f64) -> Self {
        let mut base = [mu_ref, s_ref, 5.0, 1.0, 1.0, 1.0];
        for (&p, &v) in spec.fixed() {
            base[p.index()] = v;
        }
        Self {
            data,
            family: spec.family(),
            slots: spec.floated().iter().map(|&p| Slot::Param(p)).collect(),
            base,
            mu_ref,
            s_ref,
            design: None,
        }
    }

    pub fn dim(&self) -> usize {
        self.slots.len()
    }

    fn has_covariate_slots(&self) -> bool {
        self.slots.iter().any(|s| !matches!(s, Slot::Param(_)))
    }

    /// Unconstrained coordinate of one natural value.
    pub fn to_theta(&self, slot: Slot, value: f64) -> f64 {
        match slot {
            Slot::Param(Param::Mu) => (value - self.mu_ref) / self.s_ref,
            Slot::Param(Param::Phi) => (value / self.s_ref).ln(),
            Slot::Param(_) => value.ln(),
            Slot::MuCoef(j) => value * self.sd(j) / self.s_ref,
            Slot::LogPhiCoef(j) => value * self.sd(j),
        }
    }

    pub fn natural(&self, slot: Slot, t: f64) -> f64 {
        match slot {
            Slot::Param(Param::Mu) => self.mu_ref + self.s_ref * t,
            Slot::Param(Param::Phi) => self.s_ref * t.exp(),
            Slot::Param(_) => t.exp(),
            Slot::MuCoef(j) => t * self.s_ref / self.sd(j),
            Slot::LogPhiCoef(j) => t / self.sd(j),
        }
    }

    /// `d(natural)/dθ` at `t`, for delta-method standard errors.
    pub fn jacobian(&self, slot: Slot, t: f64) -> f64 {
        match slot {
            Slot::Param(Param::Mu) => self.s_ref,
            Slot::Param(Param::Phi) => self.s_ref * t.exp(),
            Slot::Param(_) => t.exp(),
            Slot::MuCoef(j) => self.s_ref / self.sd(j),
            Slot::LogPhiCoef(j) => 1.0 / self.sd(j),
        }
    }

    fn sd(&self, j: usize) -> f64 {
        self.design.as_ref().map_or(1.0, |d| d.sd[j])
    }

    /// Natural parameters and covariate slopes for `theta`.
    pub fn unpack(&self, theta: &[f64]) -> ([f64; 6], Vec<f64>, Vec<f64>) {
        let mut nat = self.base;
        let p = self.design.as_ref().map_or(0, |d| d.z.ncols());
        let mut beta = vec![0.0; p];
        let mut gamma = vec![0.0; p];
        for (&slot, &t) in self.slots.iter().zip(theta) {
            let v = self.natural(slot, t);
            match slot {
                Slot::Param(p) => nat[p.index()] = v,
                Slot::MuCoef(j) => beta[j] = v,
                Slot::LogPhiCoef(j) => gamma[j] = v,
            }
        }
        (nat, beta, gamma)
    }

    pub fn theta_of(&self, nat: &[f64; 6], beta: &[f64], gamma: &[f64]) -> Vec<f64> {
        self.slots
            .iter()
            .map(|&slot| {
                let v = match slot {
                    Slot::Param(p) => nat[p.index()],
                    Slot::MuCoef(j) => beta[j],
                    Slot::LogPhiCoef(j) => gamma[j],
                };
                self.to_theta(slot, v)
            })
            .collect()
    }

    /// Negative log-likelihood, `+∞` for inadmissible parameters.
    pub fn objective(&self, theta: &[f64]) -> f64 {
        let (nat, beta, gamma) = self.unpack(theta);
        if !Param::ALL.iter().all(|&p| in_range(p, nat[p.index()])) {
            return f64::INFINITY;
        }
        let [mu, phi, nu, c, r, alpha] = nat;
        if !self.has_covariate_slots() {
            return match self.family {
                Family::Gat => GatParams::new(mu, phi, nu, c, r, alpha)
                    .map_or(f64::INFINITY, |g| -g.log_likelihood(self.data)),
                Family::Ast => AstParams::new(mu, phi, nu, c, r)
                    .map_or(f64::INFINITY, |a| -a.log_likelihood(self.data)),
            };
        }
        let design = self.design.as_ref().expect("covariate slots imply a design");
        let (ln_phi, z) = (phi.ln(), design.z);
        let std_log_pdf: Box<dyn Fn(f64) -> f64> = match self.family {
            Family::Gat => match GatParams::new(0.0, 1.0, nu, c, r, alpha) {
                Ok(g) => Box::new(move |u| g.log_pdf(u)),
                Err(_) => return f64::INFINITY,
            },
            Family::Ast => match AstParams::new(0.0, 1.0, nu, c, r) {
                Ok(a) => Box::new(move |u| a.log_pdf(u)),
                Err(_) => return f64::INFINITY,
            },
        };
        let mut total = 0.0;
        for (i, &x) in self.data.iter().enumerate() {
            let row = z.row(i);
            let loc = if design.model_mu {
                mu + row.iter().zip(&beta).map(|(a, b)| a * b).sum::<f64>()
            } else {
                mu
            };
            let lsc = if design.model_log_phi {
                ln_phi + row.iter().zip(&gamma).map(|(a, b)| a * b).sum::<f64>()
            } else {
                ln_phi
            };
            total += std_log_pdf((x - loc) * (-lsc).exp()) - lsc;
        }
        -total
    }

    /// Central-difference Hessian of the objective in `θ`, step
    /// `max(1e-4, 1e-4·|θᵢ|)` per coordinate.
    pub fn hessian(&self, theta: &[f64]) -> DMatrix<f64> {
        let n = theta.len();
        let h: Vec<f64> = theta.iter().map(|t| (1e-4 * t.abs()).max(1e-4)).collect();
        let f0 = self.objective(theta);
        let mut at = theta.to_vec();
        let mut eval = |shifts: &[(usize, f64)]| {
            at.copy_from_slice(theta);
            for &(i, s) in shifts {
                at[i] += s;
            }
            self.objective(&at)
        };
        let mut hess = DMatrix::zeros(n, n);
        for i in 0..n {
            let fp = eval(&[(i, h[i])]);
            let fm = eval(&[(i, -h[i])]);
            hess[(i, i)] = (fp - 2.0 * f0 + fm) / (h[i] * h[i]);
            for j in 0..i {
                let fpp = eval(&[(i, h[i]), (j, h[j])]);
                let fpm = eval(&[(i, h[i]), (j, -h[j])]);
                let fmp = eval(&[(i, -h[i]), (j, h[j])]);
                let fmm = eval(&[(i, -h[i]), (j, -h[j])]);
                let v = (fpp - fpm - fmp + fmm) / (4.0 * h[i] * h[j]);
                hess[(i, j)] = v;
                hess[(j, i)] = v;
            }
        }
        hess
    }
}
