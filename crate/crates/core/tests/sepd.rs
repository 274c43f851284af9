mod common;

use common::{adaptive_simpson, simpson_total_mass};
use skewbox::ks::{ks_critical_5pct, ks_statistic};
use skewbox::rng::seeded_stream;
use skewbox::{Sepd, SepdParams};

fn sepd(mu: f64, sigma: f64, alpha: f64, p: f64) -> Sepd {
    Sepd::new(SepdParams::new(mu, sigma, alpha, p).unwrap()).unwrap()
}

/// The piecewise density with constant `1 / K(p)`, without any normalisation.
fn raw_density(x: f64, mu: f64, sigma: f64, alpha: f64, p: f64) -> f64 {
    let k = 0.5 * p.powf(1.0 / p) * lanczos_gamma(1.0 + 1.0 / p);
    let side = if x <= mu { alpha } else { 1.0 - alpha };
    (-(x - mu).abs().powf(p) / (p * 2.0 * side * sigma.powf(p))).exp() / k
}

/// Lanczos gamma, kept local so the oracle shares nothing with the crate.
fn lanczos_gamma(x: f64) -> f64 {
    const G: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    let x = x - 1.0;
    let t = x + 7.5;
    let s = G[1..].iter().enumerate().fold(G[0], |acc, (i, g)| acc + g / (x + 1.0 + i as f64));
    (2.0 * std::f64::consts::PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * s
}

#[test]
fn normalizer_matches_independent_quadrature() {
    for (a, p) in [(0.5, 2.0), (0.3, 1.5), (0.1, 0.6), (0.85, 5.0), (0.5, 0.5)] {
        let d = sepd(0.0, 1.0, a, p);
        let raw = simpson_total_mass(|x| raw_density(x, 0.0, 1.0, a, p));
        assert!((d.normalizer() - raw).abs() < 1e-8 * raw, "alpha {a} p {p}: {} vs {raw}", d.normalizer());
        assert!((simpson_total_mass(|x| d.pdf(x)) - 1.0).abs() < 1e-8);
    }
}

#[test]
fn raw_pdf_matches_direct_evaluation() {
    let d = sepd(1.0, 2.0, 0.3, 1.7);
    for x in [-6.0, -1.0, 0.5, 1.0, 1.5, 4.0, 11.0] {
        let want = raw_density(x, 1.0, 2.0, 0.3, 1.7);
        assert!((d.raw_pdf(x) - want).abs() < 1e-12 * want.max(1e-300), "{x}");
    }
}

#[test]
fn cdf_matches_integrated_density() {
    for (mu, sigma, a, p) in [(0.0, 1.0, 0.2, 0.8), (2.0, 0.5, 0.7, 3.0), (-1.0, 3.0, 0.5, 1.2)] {
        let d = sepd(mu, sigma, a, p);
        for u in [0.01, 0.2, 0.5, 0.8, 0.99] {
            let x = d.quantile(u).unwrap();
            let below = if x <= mu {
                adaptive_simpson(|t| d.pdf(mu - t), 0.0, mu - x, 1e-13)
            } else {
                adaptive_simpson(|t| d.pdf(mu + t), 0.0, x - mu, 1e-13) + d.cdf(mu)
            };
            let left_mass = if x <= mu { d.cdf(mu) - below } else { below };
            assert!((left_mass - u).abs() < 1e-8, "mu {mu} alpha {a} p {p} u {u}: {left_mass}");
        }
    }
}

#[test]
fn left_tail_mass_follows_alpha() {
    // the left branch widens with alpha
    let masses: Vec<f64> = [0.1, 0.3, 0.5, 0.7, 0.9].iter().map(|&a| sepd(0.0, 1.0, a, 1.5).cdf(0.0)).collect();
    assert!(masses.windows(2).all(|w| w[0] < w[1]), "{masses:?}");
    assert!((masses[2] - 0.5).abs() < 1e-15);
}

#[test]
fn sampler_passes_ks_at_five_percent() {
    for (i, (a, p)) in [(0.5, 2.0), (0.15, 0.7), (0.6, 8.0)].into_iter().enumerate() {
        let d = sepd(0.0, 1.0, a, p);
        let s = d.sample(&mut seeded_stream(500 + i as u64), 20_000);
        let ks = ks_statistic(s.values(), |x| d.cdf(x));
        assert!(ks < ks_critical_5pct(20_000), "alpha {a} p {p}: {ks}");
    }
}

#[test]
fn extreme_tail_quantiles_are_finite_and_ordered() {
    for (a, p) in [(0.05, 0.5), (0.95, 0.5), (0.05, 10.0), (0.5, 10.0)] {
        let d = sepd(0.0, 1.0, a, p);
        let us = [1e-15, 1e-10, 1e-3, 0.999, 1.0 - 1e-10, 1.0 - 1e-15];
        let xs: Vec<f64> = us.iter().map(|&u| d.quantile(u).unwrap()).collect();
        assert!(xs.iter().all(|x| x.is_finite()));
        assert!(xs.windows(2).all(|w| w[0] < w[1]), "alpha {a} p {p}: {xs:?}");
    }
}
