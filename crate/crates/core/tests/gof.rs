use gatdist::fit::{Family, ModelSpec, Param};
use gatdist::gof::{anderson_darling, bootstrap_p, bootstrap_p_with, BootstrapOptions, Protocol};
use gatdist::{GatParams, RandomStream};

#[test]
fn uniform_case_zero_critical_value() {
    // A² for fully specified uniforms: asymptotic 95th percentile 2.492
    let reps = 10_000;
    let n = 200;
    let mut s = RandomStream::new(2492);
    let mut stats: Vec<f64> = (0..reps)
        .map(|_| {
            let u: Vec<f64> = (0..n).map(|_| s.uniform()).collect();
            anderson_darling(&u, |x| x).unwrap()
        })
        .collect();
    let exceed = stats.iter().filter(|&&a| a > 2.492).count() as f64 / reps as f64;
    // binomial SD at p = 0.05 over 10⁴ draws is 0.0022
    assert!((exceed - 0.05).abs() < 0.008, "exceedance {exceed}");
    stats.sort_by(f64::total_cmp);
    let q95 = stats[(0.95 * reps as f64) as usize];
    assert!((q95 - 2.492).abs() < 0.15, "95th percentile {q95}");
}

#[test]
fn normal_data_rejects_cauchy_tails() {
    let mut s = RandomStream::new(11);
    let data: Vec<f64> = (0..1000).map(|_| s.standard_normal()).collect();
    let spec = ModelSpec::new(
        Family::Gat,
        [(Param::Nu, 1.0), (Param::C, 1.0), (Param::R, 1.0), (Param::Alpha, 1.0)],
    )
    .unwrap();
    let report = bootstrap_p(&data, &spec, 199, &RandomStream::new(12)).unwrap();
    assert!(report.p_value < 0.01, "p = {}, A2 = {}", report.p_value, report.statistic);
}

#[test]
fn refit_and_fixed_protocols_differ() {
    // with estimated parameters the fixed-parameter null is stochastically
    // larger, so it inflates p-values
    let truth = GatParams::new(0.0, 1.0, 5.0, 1.2, 1.0, 1.0).unwrap();
    let spec = ModelSpec::new(Family::Gat, [(Param::Nu, 5.0), (Param::R, 1.0), (Param::Alpha, 1.0)]).unwrap();
    let fixed = BootstrapOptions {
        protocol: Protocol::FixedParams,
        ..BootstrapOptions::default()
    };
    let (mut p_refit, mut p_fixed) = (Vec::new(), Vec::new());
    for t in 0..20 {
        let data = truth.sample(40, &mut RandomStream::new(100 + t));
        let stream = RandomStream::new(200 + t);
        p_refit.push(bootstrap_p(&data, &spec, 99, &stream).unwrap().p_value);
        p_fixed.push(bootstrap_p_with(&data, &spec, 99, &stream, &fixed).unwrap().p_value);
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    assert_ne!(p_refit, p_fixed);
    assert!(mean(&p_fixed) > mean(&p_refit) + 0.1, "{} vs {}", mean(&p_fixed), mean(&p_refit));
}

#[test]
fn report_carries_seed_and_bounds() {
    let g = GatParams::new(2.0, 0.5, 4.0, 0.8, 1.0, 1.0).unwrap();
    let data = g.sample(30, &mut RandomStream::new(5));
    let report = bootstrap_p(&data, &ModelSpec::gat4(), 99, &RandomStream::new(6)).unwrap();
    assert_eq!(report.seed, 6);
    assert_eq!(report.n_boot, 99);
    assert!(report.p_value > 0.0 && report.p_value <= 1.0);
    assert!(report.statistic > 0.0);
    let grid = report.p_value * (99 - report.failed_replicates + 1) as f64;
    assert!((grid - grid.round()).abs() < 1e-9);
}
