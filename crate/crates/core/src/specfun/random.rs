//! Seedable random streams with gamma and beta variates.
//!
//! The generator is ChaCha8 keyed by the 64-bit seed. Substreams use the
//! ChaCha stream counter, so `(seed, index)` pairs give non-overlapping
//! sequences. Sequences are reproducible within a build; no compatibility
//! with other implementations is promised.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{domain, Result};

/// A single-owner source of uniform, normal, gamma and beta variates.
#[derive(Debug, Clone)]
pub struct RandomStream {
    seed: u64,
    index: u64,
    rng: ChaCha8Rng,
}

impl RandomStream {
    pub fn new(seed: u64) -> Self {
        Self::substream(seed, 0)
    }

    /// Stream number `index` of the generator keyed by `seed`.
    pub fn substream(seed: u64, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        Self { seed, index, rng }
    }

    /// Seeded from operating-system entropy.
    pub fn from_entropy() -> Self {
        Self::new(rand::rng().next_u64())
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    /// Uniform on the open interval (0, 1).
    pub fn uniform(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    pub fn standard_normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    /// Logarithm of a unit-scale gamma variate. Working in logs keeps tiny
    /// shapes usable: `G(s)` for `s = 0.01` is routinely below `1e-300`.
    pub(crate) fn ln_gamma_variate(&mut self, shape: f64) -> f64 {
        if shape < 1.0 {
            // G(s) = G(s + 1) · U^(1/s)
            let boost = self.uniform().ln() / shape;
            return self.ln_gamma_variate(shape + 1.0) + boost;
        }
        marsaglia_tsang(self, shape).ln()
    }
}

/// Marsaglia and Tsang's squeeze method, valid for `shape >= 1`.
fn marsaglia_tsang(stream: &mut RandomStream, shape: f64) -> f64 {
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / (9.0 * d).sqrt();
    loop {
        let x = stream.standard_normal();
        let v = 1.0 + c * x;
        if v <= 0.0 {
            continue;
        }
        let v = v * v * v;
        let u = stream.uniform();
        let x2 = x * x;
        if u < 1.0 - 0.0331 * x2 * x2 {
            return d * v;
        }
        if u.ln() < 0.5 * x2 + d * (1.0 - v + v.ln()) {
            return d * v;
        }
    }
}

/// Unit-scale gamma variate with the given shape.
pub fn sample_gamma(shape: f64, stream: &mut RandomStream) -> Result<f64> {
    if !(shape > 0.0 && shape.is_finite()) {
        return Err(domain("sample_gamma", format!("shape {shape} is not positive")));
    }
    Ok(stream.ln_gamma_variate(shape).exp())
}

/// Beta(a, b) variate as `G₁ / (G₁ + G₂)`.
pub fn sample_beta(a: f64, b: f64, stream: &mut RandomStream) -> Result<f64> {
    if !(a > 0.0 && a.is_finite()) || !(b > 0.0 && b.is_finite()) {
        return Err(domain("sample_beta", format!("shapes ({a}, {b}) must be positive")));
    }
    let log_odds = beta_log_odds(a, b, stream);
    Ok(1.0 / (1.0 + (-log_odds).exp()))
}

/// `ln(q / (1 − q))` for `q ~ Beta(a, b)`, i.e. `ln G₁ − ln G₂`.
pub(crate) fn beta_log_odds(a: f64, b: f64, stream: &mut RandomStream) -> f64 {
    let g1 = stream.ln_gamma_variate(a);
    let g2 = stream.ln_gamma_variate(b);
    g1 - g2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::reg_inc_beta;

    fn ks_statistic(mut xs: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
        xs.sort_by(f64::total_cmp);
        let n = xs.len() as f64;
        xs.iter()
            .enumerate()
            .map(|(i, &x)| {
                let f = cdf(x);
                (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
            })
            .fold(0.0, f64::max)
    }

    /// 1% critical value of the one-sample KS statistic, asymptotic form.
    fn ks_crit_1pct(n: usize) -> f64 {
        1.627_6 / (n as f64).sqrt()
    }

    #[test]
    fn equal_seeds_give_equal_sequences() {
        let mut a = RandomStream::new(42);
        let mut b = RandomStream::new(42);
        for _ in 0..1000 {
            assert_eq!(a.uniform().to_bits(), b.uniform().to_bits());
            assert_eq!(
                sample_gamma(0.4, &mut a).unwrap().to_bits(),
                sample_gamma(0.4, &mut b).unwrap().to_bits()
            );
        }
        let mut c = RandomStream::substream(42, 1);
        let mut d = RandomStream::new(42);
        let same = (0..100).filter(|_| c.uniform() == d.uniform()).count();
        assert_eq!(same, 0);
    }

    #[test]
    fn gamma_mean_and_variance() {
        let mut s = RandomStream::new(1);
        let n = 100_000;
        let xs: Vec<f64> = (0..n).map(|_| sample_gamma(4.0, &mut s).unwrap()).collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!((mean - 4.0).abs() < 0.05, "mean {mean}");
        assert!((var - 4.0).abs() < 0.15, "var {var}");
    }

    #[test]
    fn small_shape_gamma_against_quadrature_cdf() {
        // G(0.3) CDF by Simpson quadrature of the density after t = s^(1/0.3)
        let shape = 0.3;
        let lg = crate::specfun::log_gamma(shape).unwrap();
        let cdf = |x: f64| {
            // substitute t = v^(1/shape): ∫_0^x t^(s−1) e^(−t) dt = (1/s) ∫_0^(x^s) e^(−v^(1/s)) dv
            let top = x.powf(shape);
            let m = 2000;
            let h = top / m as f64;
            let g = |v: f64| (-v.powf(1.0 / shape)).exp();
            let mut acc = g(0.0) + g(top);
            for i in 1..m {
                acc += g(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
            }
            (acc * h / 3.0 / shape) / lg.exp()
        };
        let mut s = RandomStream::new(2);
        let n = 20_000;
        let xs: Vec<f64> = (0..n).map(|_| sample_gamma(shape, &mut s).unwrap()).collect();
        let d = ks_statistic(xs, cdf);
        assert!(d < ks_crit_1pct(n), "KS {d}");
    }

    #[test]
    fn beta_mean_and_uniform_case() {
        let mut s = RandomStream::new(3);
        let n = 100_000;
        let mean = (0..n).map(|_| sample_beta(2.0, 3.0, &mut s).unwrap()).sum::<f64>() / n as f64;
        assert!((mean - 0.4).abs() < 0.005);

        let xs: Vec<f64> = (0..n).map(|_| sample_beta(1.0, 1.0, &mut s).unwrap()).collect();
        assert!(ks_statistic(xs, |x| x) < ks_crit_1pct(n));

        let xs: Vec<f64> = (0..n).map(|_| sample_beta(0.5, 4.0, &mut s).unwrap()).collect();
        let d = ks_statistic(xs, |x| reg_inc_beta(0.5, 4.0, x).unwrap());
        assert!(d < ks_crit_1pct(n), "KS {d}");
    }

    #[test]
    fn rejects_bad_shapes() {
        let mut s = RandomStream::new(0);
        assert!(sample_gamma(0.0, &mut s).is_err());
        assert!(sample_beta(1.0, -1.0, &mut s).is_err());
    }
}
