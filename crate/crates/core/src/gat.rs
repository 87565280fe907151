//! The GAT distribution.
//!
//! With `u = (x − μ)/φ` and `y = ln c + asinh(u)`, the variable `y` follows
//! a rescaled type IV generalised logistic law
//!
//! ```text
//! f(y) = α(1+r²)/r · {exp(αry) + exp(−(α/r)y)}^(−ν/α) / B(a, b)
//! ```
//!
//! and the density of `x` picks up the Jacobian `1/(φ√(1+u²))`. Under the
//! further map `q = logistic(y/δ)` the variable `q` is Beta(a, b), which is
//! what makes the distribution function, moments and tail expectations
//! expressible through (incomplete) beta functions.

use serde::Serialize;

use crate::error::{GatError, Result};
use crate::specfun::{
    beta_log_odds, ln_beta_plus_ln2, ln_beta_unchecked, ln_inc_beta_lower, reg_inc_beta_pair, RandomStream,
};

const QUANTILE_MAX_ITER: usize = 100;
const QUANTILE_TOL: f64 = 1e-10;
const MODE_MAX_ITER: usize = 200;
const MODE_SLOPE_TOL: f64 = 1e-9;

/// Fixed tail power used by [`GatParams::su_proxy`] to stand in for `ν → ∞`.
pub const SU_PROXY_NU: f64 = 200.0;

/// Parameters of a GAT distribution.
///
/// Construct through [`GatParams::new`], which validates positivity and
/// caches the beta shapes and log normaliser.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GatParams {
    mu: f64,
    phi: f64,
    nu: f64,
    c: f64,
    r: f64,
    alpha: f64,
    #[serde(skip)]
    shape: ShapeConstants,
    #[serde(skip)]
    log_norm: f64,
}

/// Beta shapes `a`, `b` and the exponent `δ` shared by every closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShapeConstants {
    /// `ν / (α(1 + r²))`
    pub a: f64,
    /// `ν r² / (α(1 + r²))`
    pub b: f64,
    /// `r / (α(1 + r²))`
    pub delta: f64,
}

/// Probability-integral-transform coordinate `q(x)`, kept together with
/// its complement and log-odds so tail values do not cancel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PitValue {
    pub q: f64,
    pub complement: f64,
    pub log_odds: f64,
}

impl PitValue {
    fn from_log_odds(t: f64) -> Self {
        Self {
            q: logistic(t),
            complement: logistic(-t),
            log_odds: t,
        }
    }
}

/// Central moment `E(X − μ)^n` and the moment about the mean, reported
/// in-band as missing when the moment diverges.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentReport {
    pub order: u32,
    pub exists: bool,
    /// `E(X − μ)^n`
    pub central_value: Option<f64>,
    /// `E(X − E X)^n`
    pub about_mean: Option<f64>,
}

/// Value-at-risk and expected shortfall at tail probability `gamma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RiskReport {
    pub gamma: f64,
    pub var: f64,
    pub es: Option<f64>,
    /// `F(−VaR)`, which should echo `gamma`.
    pub cdf_at_neg_var: f64,
}

fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(GatError::InvalidParameter {
            name,
            value,
            reason: "must be positive and finite",
        })
    }
}

pub(crate) fn check_probability(u: f64) -> Result<()> {
    if u > 0.0 && u < 1.0 {
        Ok(())
    } else {
        Err(GatError::InvalidProbability(u))
    }
}

fn logistic(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

/// `ln((1 + exp(t)) / 2)` without overflow, accurate near `t = 0`.
fn half_softplus(t: f64) -> f64 {
    if t > 0.0 {
        t + (0.5 * (-t).exp_m1()).ln_1p()
    } else {
        (0.5 * t.exp_m1()).ln_1p()
    }
}

/// `asinh(u)` in the sign-symmetric form: no cancellation for large
/// negative `u`, no overflow for `|u|` near `f64::MAX`.
pub(crate) fn stable_asinh(u: f64) -> f64 {
    let a = u.abs();
    let v = if a > 1e150 {
        std::f64::consts::LN_2 + a.ln()
    } else {
        let inv = 1.0 / a;
        (a + a / ((1.0 + inv * inv).sqrt() + inv)).ln_1p()
    };
    if a == 0.0 {
        u
    } else {
        v.copysign(u)
    }
}

/// `½ ln(1 + u²)` safe for `|u|` up to `f64::MAX`.
pub(crate) fn half_ln_1p_sq(u: f64) -> f64 {
    let a = u.abs();
    if a > 1e150 {
        a.ln()
    } else {
        0.5 * (a * a).ln_1p()
    }
}

impl ShapeConstants {
    fn new(nu: f64, r: f64, alpha: f64) -> Self {
        let denom = alpha * (1.0 + r * r);
        let a = nu / denom;
        Self {
            a,
            b: a * r * r,
            delta: r / denom,
        }
    }
}

impl GatParams {
    pub fn new(mu: f64, phi: f64, nu: f64, c: f64, r: f64, alpha: f64) -> Result<Self> {
        if !mu.is_finite() {
            return Err(GatError::InvalidParameter {
                name: "mu",
                value: mu,
                reason: "must be finite",
            });
        }
        check_positive("phi", phi)?;
        check_positive("nu", nu)?;
        check_positive("c", c)?;
        check_positive("r", r)?;
        check_positive("alpha", alpha)?;
        let shape = ShapeConstants::new(nu, r, alpha);
        // the kernel is measured relative to its value ln 2 at y = 0, and
        // a + b = ν/α carries the matching (ν/α)·ln 2 into the normaliser
        let log_norm = alpha.ln() + (r * r).ln_1p() - r.ln() - phi.ln()
            - ln_beta_plus_ln2(shape.a, shape.b);
        if !log_norm.is_finite() {
            return Err(GatError::InvalidParameter {
                name: "nu",
                value: nu,
                reason: "beta normaliser is not finite for this parameter combination",
            });
        }
        Ok(Self {
            mu,
            phi,
            nu,
            c,
            r,
            alpha,
            shape,
            log_norm,
        })
    }

    /// Student t with `nu` degrees of freedom in standard form:
    /// `μ = 0`, `φ = √ν`, `c = r = α = 1`.
    pub fn from_t(nu: f64) -> Result<Self> {
        check_positive("nu", nu)?;
        Self::new(0.0, nu.sqrt(), nu, 1.0, 1.0, 1.0)
    }

    /// Finite stand-in for Johnson's S_U distribution.
    ///
    /// S_U is the limit `α → 0`, `ν → ∞` with `η = να` held fixed, where
    /// `asinh((x − μ)/φ) + ln c` becomes Normal(0, 1/η). The proxy fixes
    /// `ν = 200`, `α = η/200` and `r = 1`.
    pub fn su_proxy(eta: f64, mu: f64, phi: f64, c: f64) -> Result<Self> {
        check_positive("eta", eta)?;
        Self::new(mu, phi, SU_PROXY_NU, c, 1.0, eta / SU_PROXY_NU)
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }
    pub fn phi(&self) -> f64 {
        self.phi
    }
    pub fn nu(&self) -> f64 {
        self.nu
    }
    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn r(&self) -> f64 {
        self.r
    }
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn shape_constants(&self) -> ShapeConstants {
        self.shape
    }

    /// Same law moved to location `mu` and scale `phi`.
    pub fn with_location_scale(&self, mu: f64, phi: f64) -> Result<Self> {
        Self::new(mu, phi, self.nu, self.c, self.r, self.alpha)
    }

    #[inline]
    fn transformed(&self, x: f64) -> (f64, f64) {
        let u = (x - self.mu) / self.phi;
        (u, self.c.ln() + stable_asinh(u))
    }

    /// `ln((e^{αry} + e^{−(α/r)y}) / 2)`, which vanishes at `y = 0`.
    #[inline]
    fn log_kernel(&self, y: f64) -> f64 {
        let p = self.alpha * self.r * y;
        let m = -(self.alpha / self.r) * y;
        let (hi, lo) = if p >= m { (p, m) } else { (m, p) };
        hi + (0.5 * (lo - hi).exp_m1()).ln_1p()
    }

    /// Log density, evaluated entirely in log space.
    pub fn log_pdf(&self, x: f64) -> f64 {
        let (u, y) = self.transformed(x);
        self.log_norm - (self.nu / self.alpha) * self.log_kernel(y) - half_ln_1p_sq(u)
    }

    pub fn pdf(&self, x: f64) -> f64 {
        self.log_pdf(x).exp()
    }

    /// `Σ ln f(xᵢ)`
    pub fn log_likelihood(&self, data: &[f64]) -> f64 {
        let k = self.nu / self.alpha;
        let mut acc = 0.0;
        for &x in data {
            let (u, y) = self.transformed(x);
            acc -= k * self.log_kernel(y) + half_ln_1p_sq(u);
        }
        acc + data.len() as f64 * self.log_norm
    }

    /// `q(x) = logistic(y/δ)`, the Beta(a, b) coordinate of `x`.
    pub fn pit(&self, x: f64) -> PitValue {
        let (_, y) = self.transformed(x);
        PitValue::from_log_odds(y / self.shape.delta)
    }

    pub fn cdf(&self, x: f64) -> f64 {
        let q = self.pit(x);
        reg_inc_beta_pair(self.shape.a, self.shape.b, q.q, q.complement).0
    }

    /// `1 − F(x)` without cancellation.
    pub fn sf(&self, x: f64) -> f64 {
        let q = self.pit(x);
        reg_inc_beta_pair(self.shape.a, self.shape.b, q.q, q.complement).1
    }

    /// `x` for a given `y = ln c + asinh((x − μ)/φ)`.
    fn x_of_y(&self, y: f64) -> f64 {
        self.mu + self.phi * (y - self.c.ln()).sinh()
    }

    /// Log density of `y` (the type IV logistic), `a ln q + b ln(1−q) − ln δ − ln B`.
    fn log_density_y(&self, y: f64) -> f64 {
        let t = y / self.shape.delta;
        let ShapeConstants { a, b, delta } = self.shape;
        -a * half_softplus(-t) - b * half_softplus(t) - delta.ln() - ln_beta_plus_ln2(a, b)
    }

    /// Quantile by safeguarded Newton–Raphson started at `x = μ`.
    ///
    /// The iteration runs on `y = ln c + asinh((x − μ)/φ)`, a strictly
    /// increasing reparameterisation of `x` in which both tails decay
    /// exponentially. A bracket is grown around the start and any Newton
    /// step leaving it is replaced by bisection.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        check_probability(u)?;
        let ShapeConstants { a, b, .. } = self.shape;
        let upper = u > 0.5;
        let target = if upper { 1.0 - u } else { u };
        // residual > 0 means y is too far right
        let residual = |y: f64| {
            let p = PitValue::from_log_odds(y / self.shape.delta);
            let (lo, hi) = reg_inc_beta_pair(a, b, p.q, p.complement);
            if upper {
                target - hi
            } else {
                lo - target
            }
        };

        let y0 = self.c.ln();
        let r0 = residual(y0);
        if r0 == 0.0 {
            return Ok(self.mu);
        }
        let (mut lo, mut hi);
        let mut step = self.shape.delta.max(1.0);
        if r0 < 0.0 {
            lo = y0;
            hi = y0 + step;
            while residual(hi) < 0.0 {
                lo = hi;
                step *= 2.0;
                hi += step;
                if hi > 1e6 {
                    return Err(GatError::NonConvergence {
                        routine: "quantile bracket",
                        iterations: QUANTILE_MAX_ITER,
                    });
                }
            }
        } else {
            hi = y0;
            lo = y0 - step;
            while residual(lo) > 0.0 {
                hi = lo;
                step *= 2.0;
                lo -= step;
                if lo < -1e6 {
                    return Err(GatError::NonConvergence {
                        routine: "quantile bracket",
                        iterations: QUANTILE_MAX_ITER,
                    });
                }
            }
        }

        let mut y = if r0 < 0.0 { lo } else { hi };
        for _ in 0..QUANTILE_MAX_ITER {
            let res = residual(y);
            if res == 0.0 {
                return Ok(self.x_of_y(y));
            }
            if res < 0.0 {
                lo = y;
            } else {
                hi = y;
            }
            let slope = self.log_density_y(y).exp();
            let mut next = y - res / slope;
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            let moved = (next - y).abs();
            y = next;
            if moved <= 1e-15 * y.abs().max(1.0) || hi - lo <= 4.0 * f64::EPSILON * y.abs().max(1.0)
            {
                break;
            }
        }
        let x = self.x_of_y(y);
        if residual(y).abs() > QUANTILE_TOL {
            return Err(GatError::NonConvergence {
                routine: "quantile",
                iterations: QUANTILE_MAX_ITER,
            });
        }
        Ok(x)
    }

    /// Starting point for the mode search, exact for the density without
    /// the arcsinh Jacobian.
    pub fn mode_seed(&self) -> f64 {
        let e = 2.0 / (self.alpha * (self.r + 1.0 / self.r));
        self.mu + 0.5 * self.phi * (self.r.powf(-e) / self.c - self.c * self.r.powf(e))
    }

    /// `(d/du, d²/du²)` of `ln f` in standardised units.
    fn log_pdf_slope(&self, u: f64) -> (f64, f64) {
        let y = self.c.ln() + stable_asinh(u);
        let q = logistic(y / self.shape.delta);
        let one_m_q = logistic(-y / self.shape.delta);
        let s2 = 1.0 + u * u;
        let s = s2.sqrt();
        let h = self.r * q - one_m_q / self.r;
        let g = -self.nu * h / s - u / s2;
        let dq = q * one_m_q / self.shape.delta / s;
        let g2 = -self.nu * (self.r + 1.0 / self.r) * dq / s + self.nu * h * u / (s2 * s)
            - (1.0 - u * u) / (s2 * s2);
        (g, g2)
    }

    /// Mode by damped Newton iteration on the log-density slope, seeded at
    /// [`GatParams::mode_seed`].
    pub fn mode(&self) -> Result<f64> {
        let log_f = |u: f64| self.log_pdf(self.mu + self.phi * u);
        let mut u = (self.mode_seed() - self.mu) / self.phi;
        for _ in 0..MODE_MAX_ITER {
            let (g, g2) = self.log_pdf_slope(u);
            if g.abs() <= MODE_SLOPE_TOL {
                return Ok(self.mu + self.phi * u);
            }
            let mut step = if g2 < 0.0 {
                -g / g2
            } else {
                g.signum() * 0.5 * u.abs().max(1.0)
            };
            let f0 = log_f(u);
            let mut accepted = false;
            for _ in 0..60 {
                if log_f(u + step) >= f0 {
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            if !accepted {
                // flat to rounding: the slope test is the arbiter
                break;
            }
            u += step;
        }
        let (g, _) = self.log_pdf_slope(u);
        if g.abs() <= MODE_SLOPE_TOL {
            Ok(self.mu + self.phi * u)
        } else {
            Err(GatError::NonConvergence {
                routine: "mode",
                iterations: MODE_MAX_ITER,
            })
        }
    }

    /// `max(r, 1/r)`
    fn tail_asymmetry(&self) -> f64 {
        self.r.max(1.0 / self.r)
    }

    /// `E[w^k] = B(a + kδ, b − kδ)/B(a, b)` for `w = q/(1 − q)`.
    fn odds_power_mean(&self, k: f64) -> f64 {
        let ShapeConstants { a, b, delta } = self.shape;
        (ln_beta_unchecked(a + k * delta, b - k * delta) - ln_beta_unchecked(a, b)).exp()
    }

    /// `E(X − μ)^n` and `E(X − E X)^n`; present iff `ν > n·max(r, 1/r)`.
    ///
    /// With `X − μ = (φ/2)(c⁻¹w^δ − c w^(−δ))` and `w` the beta odds,
    /// binomial expansion gives
    /// `(φ/2)^n Σ_m (−1)^m C(n,m) c^(−(n−2m)) B(a+(n−2m)δ, b−(n−2m)δ)/B(a,b)`.
    pub fn central_moment(&self, n: u32) -> MomentReport {
        let exists = n >= 1 && self.nu > n as f64 * self.tail_asymmetry();
        if !exists {
            return MomentReport {
                order: n,
                exists: false,
                central_value: None,
                about_mean: None,
            };
        }
        let raw: Vec<f64> = (0..=n).map(|k| self.raw_central(k)).collect();
        let d = raw[1];
        let mut about = 0.0;
        let mut binom = 1.0;
        for k in 0..=n {
            if k > 0 {
                binom *= (n - k + 1) as f64 / k as f64;
            }
            about += binom * raw[k as usize] * (-d).powi((n - k) as i32);
        }
        MomentReport {
            order: n,
            exists: true,
            central_value: Some(raw[n as usize]),
            about_mean: Some(about),
        }
    }

    fn raw_central(&self, n: u32) -> f64 {
        if n == 0 {
            return 1.0;
        }
        let mut sum = 0.0;
        let mut binom = 1.0;
        for m in 0..=n {
            if m > 0 {
                binom *= (n - m + 1) as f64 / m as f64;
            }
            let k = n as f64 - 2.0 * m as f64;
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * binom * self.c.powf(-k) * self.odds_power_mean(k);
        }
        (0.5 * self.phi).powi(n as i32) * sum
    }

    /// `E(X)`, or `None` when `ν ≤ max(r, 1/r)`.
    pub fn mean(&self) -> Option<f64> {
        self.central_moment(1).central_value.map(|d| self.mu + d)
    }

    pub fn variance(&self) -> Option<f64> {
        self.central_moment(2).about_mean
    }

    /// `E[(X − μ) · 1{X < x}]` through incomplete beta integrals.
    fn truncated_central_mean(&self, x: f64) -> Result<f64> {
        let ShapeConstants { a, b, delta } = self.shape;
        let p = self.pit(x);
        let lb = ln_beta_unchecked(a, b);
        let up = ln_inc_beta_lower(a + delta, b - delta, p.q, p.complement)?;
        let down = ln_inc_beta_lower(a - delta, b + delta, p.q, p.complement)?;
        Ok(0.5 * self.phi * ((up - lb).exp() / self.c - self.c * (down - lb).exp()))
    }

    /// Mean absolute deviation `E|X − E X|`.
    ///
    /// Uses `E|X − m| = 2mF(m) − 2E[X·1{X < m}]` with the truncated mean in
    /// incomplete-beta form.
    pub fn mad(&self) -> Option<f64> {
        let m = self.mean()?;
        let f = self.cdf(m);
        let trunc = self.truncated_central_mean(m).ok()?;
        Some(2.0 * (m - self.mu) * f - 2.0 * trunc)
    }

    /// `n` independent draws: `q ~ Beta(a, b)` mapped through
    /// `x = μ + φ·sinh(δ·ln(q/(1−q)) − ln c)`.
    pub fn sample(&self, n: usize, stream: &mut RandomStream) -> Vec<f64> {
        let ShapeConstants { a, b, delta } = self.shape;
        let ln_c = self.c.ln();
        (0..n)
            .map(|_| {
                let t = beta_log_odds(a, b, stream);
                self.mu + self.phi * (delta * t - ln_c).sinh()
            })
            .collect()
    }

    /// Value-at-risk: the loss `v` with `F(−v) = gamma`.
    pub fn var_at(&self, gamma: f64) -> Result<f64> {
        Ok(-self.quantile(gamma)?)
    }

    /// Expected shortfall `−E(X | X < −VaR)`, or `None` when the left tail
    /// has no mean (`ν ≤ r`).
    pub fn expected_shortfall(&self, gamma: f64) -> Result<Option<f64>> {
        let var = self.var_at(gamma)?;
        self.expected_shortfall_given_var(var)
    }

    fn expected_shortfall_given_var(&self, var: f64) -> Result<Option<f64>> {
        if self.nu <= self.r {
            return Ok(None);
        }
        let ShapeConstants { a, b, delta } = self.shape;
        let p = self.pit(-var);
        let base = ln_inc_beta_lower(a, b, p.q, p.complement)?;
        let up = ln_inc_beta_lower(a + delta, b - delta, p.q, p.complement)?;
        let down = ln_inc_beta_lower(a - delta, b + delta, p.q, p.complement)?;
        let cond = 0.5 * self.phi * ((up - base).exp() / self.c - self.c * (down - base).exp());
        Ok(Some(-self.mu - cond))
    }

    pub fn risk_report(&self, gamma: f64) -> Result<RiskReport> {
        let var = self.var_at(gamma)?;
        Ok(RiskReport {
            gamma,
            var,
            es: self.expected_shortfall_given_var(var)?,
            cdf_at_neg_var: self.cdf(-var),
        })
    }
}
