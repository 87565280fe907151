//! The split-t (AST) distribution used as a comparison baseline.
//!
//! Left of the join `μ` the density is proportional to a t density with
//! scale `cφ` and `ν/r` degrees of freedom; right of it, scale `φ/c` and
//! `νr` degrees of freedom. Both halves share one constant `A`, which makes
//! the density continuous with zero slope at `μ`. Its second derivative
//! jumps there unless `c = r = 1`.

use serde::Serialize;

use crate::error::{GatError, Result};
use crate::specfun::{ln_beta_unchecked, reg_inc_beta_pair, RandomStream};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AstParams {
    mu: f64,
    phi: f64,
    nu: f64,
    c: f64,
    r: f64,
    /// Joint normalising constant `A`.
    norm: f64,
    #[serde(skip)]
    left: Half,
    #[serde(skip)]
    right: Half,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Half {
    scale: f64,
    dof: f64,
    /// probability mass of this side
    mass: f64,
}

/// `∫_0^∞ (1 + t²/d)^(−(d+1)/2) dt = √d · B(1/2, d/2) / 2`
fn half_integral(d: f64) -> f64 {
    0.5 * d.sqrt() * ln_beta_unchecked(0.5, 0.5 * d).exp()
}

impl AstParams {
    pub fn new(mu: f64, phi: f64, nu: f64, c: f64, r: f64) -> Result<Self> {
        if !mu.is_finite() {
            return Err(GatError::InvalidParameter {
                name: "mu",
                value: mu,
                reason: "must be finite",
            });
        }
        for (name, v) in [("phi", phi), ("nu", nu), ("c", c), ("r", r)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(GatError::InvalidParameter {
                    name,
                    value: v,
                    reason: "must be positive and finite",
                });
            }
        }
        let (ls, ld) = (c * phi, nu / r);
        let (rs, rd) = (phi / c, nu * r);
        let wl = ls * half_integral(ld);
        let wr = rs * half_integral(rd);
        let norm = 1.0 / (wl + wr);
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(GatError::InvalidParameter {
                name: "nu",
                value: nu,
                reason: "normalising constant is not finite",
            });
        }
        Ok(Self {
            mu,
            phi,
            nu,
            c,
            r,
            norm,
            left: Half {
                scale: ls,
                dof: ld,
                mass: norm * wl,
            },
            right: Half {
                scale: rs,
                dof: rd,
                mass: norm * wr,
            },
        })
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
    pub fn norm(&self) -> f64 {
        self.norm
    }

    /// Probability mass left of the join.
    pub fn left_mass(&self) -> f64 {
        self.left.mass
    }

    fn side(&self, x: f64) -> &Half {
        if x < self.mu {
            &self.left
        } else {
            &self.right
        }
    }

    pub fn log_pdf(&self, x: f64) -> f64 {
        let h = self.side(x);
        let t = (x - self.mu) / h.scale;
        self.norm.ln() - 0.5 * (h.dof + 1.0) * (t * t / h.dof).ln_1p()
    }

    pub fn pdf(&self, x: f64) -> f64 {
        self.log_pdf(x).exp()
    }

    pub fn log_likelihood(&self, data: &[f64]) -> f64 {
        let ln_norm = self.norm.ln();
        let mut acc = 0.0;
        for &x in data {
            let h = self.side(x);
            let t = (x - self.mu) / h.scale;
            acc -= 0.5 * (h.dof + 1.0) * (t * t / h.dof).ln_1p();
        }
        acc + data.len() as f64 * ln_norm
    }

    /// Mass of one side beyond `|t|` scale units from the join, as a fraction
    /// of that side: `I_{d/(d+t²)}(d/2, 1/2)`.
    fn outer_fraction(h: &Half, t: f64) -> f64 {
        let t2 = t * t;
        let x = h.dof / (h.dof + t2);
        let y = t2 / (h.dof + t2);
        reg_inc_beta_pair(0.5 * h.dof, 0.5, x, y).0
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x < self.mu {
            let t = (x - self.mu) / self.left.scale;
            self.left.mass * Self::outer_fraction(&self.left, t)
        } else {
            let t = (x - self.mu) / self.right.scale;
            1.0 - self.right.mass * Self::outer_fraction(&self.right, t)
        }
    }

    /// Side chosen with probability equal to its mass, then a folded t
    /// variate on that side.
    pub fn sample(&self, n: usize, stream: &mut RandomStream) -> Vec<f64> {
        (0..n)
            .map(|_| {
                let h = if stream.uniform() < self.left.mass {
                    &self.left
                } else {
                    &self.right
                };
                let z = stream.standard_normal();
                // chi-square with d dof is 2·Gamma(d/2)
                let chi2 = 2.0 * stream.ln_gamma_variate(0.5 * h.dof).exp();
                let t = (z / (chi2 / h.dof).sqrt()).abs();
                if std::ptr::eq(h, &self.left) {
                    self.mu - h.scale * t
                } else {
                    self.mu + h.scale * t
                }
            })
            .collect()
    }
}
