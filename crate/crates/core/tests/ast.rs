mod common;

use gatdist::specfun::log_beta;
use gatdist::{AstParams, GatParams, RandomStream};

use common::{integrate, ks_pvalue, ks_statistic, SinhDensity};

fn ast(mu: f64, phi: f64, nu: f64, c: f64, r: f64) -> AstParams {
    AstParams::new(mu, phi, nu, c, r).unwrap()
}

fn oracle(a: &AstParams) -> SinhDensity<impl Fn(f64) -> f64 + '_> {
    SinhDensity {
        log_pdf: move |x| a.log_pdf(x),
        mu: a.mu(),
        phi: a.phi(),
    }
}

/// `∫₀^∞ (1 + t²/d)^{−(d+1)/2} dt`
fn half_t_integral(d: f64) -> f64 {
    0.5 * d.sqrt() * log_beta(0.5, 0.5 * d).unwrap().exp()
}

#[test]
fn normalises_across_a_sweep() {
    let mass = |a: &AstParams| oracle(a).total_mass();
    let mut worst = (mass(&ast(0.0, 1.0, 4.0, 1.2, 0.8)) - 1.0).abs();
    let mut s = RandomStream::new(31);
    for _ in 0..40 {
        let mut pick = |lo: f64, hi: f64| (lo.ln() + s.uniform() * (hi / lo).ln()).exp();
        let a = ast(pick(0.5, 5.0) - 2.0, pick(0.1, 10.0), pick(0.5, 50.0), pick(0.2, 5.0), pick(0.2, 5.0));
        worst = worst.max((mass(&a) - 1.0).abs());
    }
    assert!(worst < 1e-8, "{worst}");
}

#[test]
fn symmetric_case_is_a_scaled_t() {
    let a = ast(0.5, 2.0, 5.0, 1.0, 1.0);
    let t = GatParams::new(0.5, 2.0 * 5f64.sqrt(), 5.0, 1.0, 1.0, 1.0).unwrap();
    for i in 0..=40 {
        let x = -20.0 + i as f64;
        let (p, q) = (a.log_pdf(x), t.log_pdf(x));
        assert!((p - q).abs() <= 1e-12 * p.abs().max(1.0), "{x}: {p} vs {q}");
    }
}

#[test]
fn norm_closes_the_two_branches() {
    for (nu, c, r) in [(4.0, 1.2, 0.8), (1.0, 0.5, 2.0), (30.0, 3.0, 0.3)] {
        let a = ast(0.0, 1.5, nu, c, r);
        let (sl, sr) = (c * 1.5, 1.5 / c);
        let total = a.norm() * (sl * half_t_integral(nu / r) + sr * half_t_integral(nu * r));
        assert!((total - 1.0).abs() < 1e-13);
        assert_eq!(a.pdf(a.mu()), a.norm());
        // left-branch mass from the closed form, the cdf and quadrature
        let left = a.norm() * sl * half_t_integral(nu / r);
        let d = oracle(&a);
        assert!((a.cdf(a.mu()) - left).abs() < 1e-12);
        assert!((a.left_mass() - left).abs() < 1e-12);
        assert!((d.mass(-common::S_MAX, 0.0) - left).abs() < 1e-10);
    }
}

#[test]
fn cdf_matches_quadrature() {
    let a = ast(1.0, 0.7, 3.0, 1.6, 1.3);
    let d = oracle(&a);
    for x in [-30.0, -2.0, 0.2, 1.0, 1.4, 3.0, 50.0] {
        let want = d.mass(-common::S_MAX, d.s(x));
        assert!((a.cdf(x) - want).abs() < 1e-10, "{x}: {} vs {want}", a.cdf(x));
    }
    assert_eq!(a.cdf(f64::NEG_INFINITY), 0.0);
    assert_eq!(a.cdf(f64::INFINITY), 1.0);
    assert_eq!(ast(0.0, 1.0, 3.0, 1.0, 1.0).cdf(0.0), 0.5);
}

#[test]
fn second_derivative_jumps_at_the_join() {
    let a = ast(0.0, 1.0, 4.0, 1.3, 0.7);
    let h = 1e-3;
    let lp = |x: f64| a.log_pdf(x);
    let left = (lp(0.0) - 2.0 * lp(-h) + lp(-2.0 * h)) / (h * h);
    let right = (lp(0.0) - 2.0 * lp(h) + lp(2.0 * h)) / (h * h);
    let noise = 8.0 * f64::EPSILON * lp(0.0).abs().max(1.0) / (h * h);
    assert!((left - right).abs() > 10.0 * noise, "{left} vs {right}");
    // one-sided curvatures −(d + 1)/(d s²)
    let (dl, sl) = (4.0 / 0.7, 1.3);
    let (dr, sr) = (4.0 * 0.7, 1.0 / 1.3);
    assert!((left + (dl + 1.0) / (dl * sl * sl)).abs() < 1e-2);
    assert!((right + (dr + 1.0) / (dr * sr * sr)).abs() < 1e-2);
    // smooth through the join when symmetric
    let s = ast(0.0, 1.0, 4.0, 1.0, 1.0);
    let sym = |x: f64| s.log_pdf(x);
    let l = (sym(0.0) - 2.0 * sym(-h) + sym(-2.0 * h)) / (h * h);
    let r = (sym(0.0) - 2.0 * sym(h) + sym(2.0 * h)) / (h * h);
    assert!((l - r).abs() < 1e-6);
}

#[test]
fn sampler_passes_ks_and_median() {
    let a = ast(0.0, 1.0, 3.0, 1.4, 0.8);
    let draws = a.sample(100_000, &mut RandomStream::new(19));
    let d = ks_statistic(&draws, |x| a.cdf(x));
    assert!(ks_pvalue(d, draws.len()) > 0.01);

    let s = ast(2.0, 1.0, 5.0, 1.0, 1.0);
    let mut draws = s.sample(20_000, &mut RandomStream::new(20));
    draws.sort_by(f64::total_cmp);
    let median = 0.5 * (draws[9_999] + draws[10_000]);
    // sd of the sample median: 1 / (2 f(μ) √n)
    let se = 1.0 / (2.0 * s.pdf(2.0) * (20_000f64).sqrt());
    assert!((median - 2.0).abs() < 3.0 * se);
}

#[test]
fn density_integrates_by_plain_quadrature() {
    let a = ast(0.0, 1.0, 4.0, 1.2, 0.8);
    let mass = integrate(|x| a.pdf(x), -1e4, 0.0, 1e-12) + integrate(|x| a.pdf(x), 0.0, 1e4, 1e-12);
    // tails beyond ±10⁴ carry about 1e-11
    assert!((mass - 1.0).abs() < 1e-8);
}
