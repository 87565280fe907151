//! Independent numerical oracles shared by the integration tests: adaptive
//! Gauss–Kronrod quadrature, a Kolmogorov–Smirnov p-value, and
//! quadrature-based moments and tail expectations of a density given only
//! through `log_pdf`.

#![allow(dead_code, clippy::excessive_precision)]

/// Kronrod nodes on [0, 1]; odd indices are also the 7-point Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// 15-point Kronrod estimate on [a, b] and its difference from the
/// embedded 7-point Gauss rule.
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let pair = f(c - dx) + f(c + dx);
        k += WGK[j] * pair;
        if j % 2 == 1 {
            g += WG[j / 2] * pair;
        }
    }
    (k * h, (k - g).abs() * h)
}

/// Adaptive bisection until each panel's Kronrod–Gauss gap is below
/// `rel · |panel|` or an absolute floor.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel: f64) -> f64 {
    let mut total = 0.0;
    let mut stack = vec![(a, b, 0u32)];
    while let Some((lo, hi, depth)) = stack.pop() {
        let (k, err) = gk15(&f, lo, hi);
        if err <= (rel * k.abs()).max(1e-300) || err < 1e-20 || depth >= 60 {
            total += k;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid, depth + 1));
            stack.push((mid, hi, depth + 1));
        }
    }
    total
}

/// Panel edges: half-unit panels on [−40, 40] clipped to [lo, hi], plus
/// the outer remainders.
fn panels(lo: f64, hi: f64) -> Vec<(f64, f64)> {
    let mut edges = vec![lo];
    let mut t = -40.0;
    while t <= 40.0 {
        if t > lo && t < hi {
            edges.push(t);
        }
        t += 0.5;
    }
    edges.push(hi);
    edges.windows(2).map(|w| (w[0], w[1])).collect()
}

/// Largest |s| used; `sinh(700)` is about 5e303.
pub const S_MAX: f64 = 700.0;

/// `∫ g(s) ds` over `[lo, hi] ⊂ [−S_MAX, S_MAX]`, panelled for peaked
/// integrands near the origin.
pub fn integrate_s<F: Fn(f64) -> f64>(g: F, lo: f64, hi: f64) -> f64 {
    panels(lo, hi)
        .into_iter()
        .map(|(a, b)| integrate(&g, a, b, 1e-13))
        .sum()
}

/// `ln cosh(s)` without overflow.
pub fn ln_cosh(s: f64) -> f64 {
    let a = s.abs();
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}

/// Density expressed in `s`, where `x = μ + φ sinh(s)`.
pub struct SinhDensity<L: Fn(f64) -> f64> {
    pub log_pdf: L,
    pub mu: f64,
    pub phi: f64,
}

impl<L: Fn(f64) -> f64> SinhDensity<L> {
    pub fn x(&self, s: f64) -> f64 {
        self.mu + self.phi * s.sinh()
    }

    pub fn s(&self, x: f64) -> f64 {
        ((x - self.mu) / self.phi).asinh()
    }

    /// `ln[f(x(s)) · dx/ds]`
    fn ln_weight(&self, s: f64) -> f64 {
        (self.log_pdf)(self.x(s)) + self.phi.ln() + ln_cosh(s)
    }

    /// `∫ f` over `x ∈ [x(lo), x(hi)]`.
    pub fn mass(&self, lo: f64, hi: f64) -> f64 {
        integrate_s(|s| self.ln_weight(s).exp(), lo, hi)
    }

    pub fn total_mass(&self) -> f64 {
        self.mass(-S_MAX, S_MAX)
    }

    /// `∫ (x − μ)^n f(x) dx`, summed in log space per point.
    pub fn central_moment(&self, n: u32) -> f64 {
        integrate_s(
            |s| {
                let t = self.phi * s.sinh();
                if t == 0.0 {
                    return 0.0;
                }
                let mag = (n as f64 * t.abs().ln() + self.ln_weight(s)).exp();
                if t < 0.0 && n % 2 == 1 {
                    -mag
                } else {
                    mag
                }
            },
            -S_MAX,
            S_MAX,
        )
    }

    /// `∫ |x − m| f(x) dx`, split at `m`.
    pub fn abs_deviation(&self, m: f64) -> f64 {
        let sm = self.s(m);
        let g = |s: f64| (self.x(s) - m).abs() * self.ln_weight(s).exp();
        integrate_s(g, -S_MAX, sm) + integrate_s(g, sm, S_MAX)
    }

    /// `∫_{−∞}^{t} x f(x) dx` and `∫_{−∞}^{t} f(x) dx`.
    pub fn lower_partial(&self, t: f64) -> (f64, f64) {
        let st = self.s(t);
        let first = integrate_s(|s| self.x(s) * self.ln_weight(s).exp(), -S_MAX, st);
        (first, self.mass(-S_MAX, st))
    }
}

/// Asymptotic Kolmogorov p-value for the one-sample statistic `d` with
/// the Stephens small-sample correction.
pub fn ks_pvalue(d: f64, n: usize) -> f64 {
    let sn = (n as f64).sqrt();
    let lambda = (sn + 0.12 + 0.11 / sn) * d;
    let mut p = 0.0;
    for k in 1..=200 {
        let term = (-2.0 * (k * k) as f64 * lambda * lambda).exp();
        p += if k % 2 == 1 { 2.0 * term } else { -2.0 * term };
        if term < 1e-18 {
            break;
        }
    }
    p.clamp(0.0, 1.0)
}

/// One-sample KS statistic of `draws` against `cdf`.
pub fn ks_statistic<F: Fn(f64) -> f64>(draws: &[f64], cdf: F) -> f64 {
    let mut u: Vec<f64> = draws.iter().map(|&x| cdf(x)).collect();
    u.sort_by(f64::total_cmp);
    let n = u.len() as f64;
    u.iter()
        .enumerate()
        .map(|(i, &v)| (v - i as f64 / n).max((i + 1) as f64 / n - v))
        .fold(0.0, f64::max)
}

/// Standard normal distribution function: series for small arguments, the
/// `erfc` continued fraction beyond.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / std::f64::consts::SQRT_2)
}

fn erfc(x: f64) -> f64 {
    if x < 0.0 {
        return 2.0 - erfc(-x);
    }
    if x < 3.0 {
        // Maclaurin series of erf
        let mut sum = x;
        let mut term = x;
        let x2 = x * x;
        let mut k = 0.0;
        loop {
            k += 1.0;
            term *= -x2 / k;
            let add = term / (2.0 * k + 1.0);
            sum += add;
            if add.abs() <= 1e-17 * sum.abs() {
                break;
            }
        }
        1.0 - 2.0 / std::f64::consts::PI.sqrt() * sum
    } else {
        // Lentz continued fraction
        let tiny = 1e-300;
        let mut f = x;
        let mut c = x;
        let mut d = 0.0;
        for k in 1..500 {
            let an = k as f64 * 0.5;
            d = x + an * d;
            d = if d.abs() < tiny { tiny } else { d };
            c = x + an / c;
            c = if c.abs() < tiny { tiny } else { c };
            d = 1.0 / d;
            let delta = c * d;
            f *= delta;
            if (delta - 1.0).abs() < 1e-16 {
                break;
            }
        }
        (-x * x).exp() / (f * std::f64::consts::PI.sqrt())
    }
}

/// Standard normal quantile by bisection on [`normal_cdf`].
pub fn normal_quantile(p: f64) -> f64 {
    let (mut lo, mut hi) = (-40.0, 40.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if normal_cdf(mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
