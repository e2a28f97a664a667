use kdemode::coresets::{additive_sample_size, CoresetSpec};
use kdemode::datasets::random_mixture;
use kdemode::params::rng_from_seed;
use kdemode::{kde, PointSet};
use proptest::prelude::*;
use rand::Rng as _;

fn probes(p: &PointSet, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let (lo, hi) = p.bounding_box();
    let mut rng = rng_from_seed(seed);
    let mut out: Vec<Vec<f64>> = (0..count)
        .map(|_| {
            lo.iter()
                .zip(&hi)
                .map(|(l, h)| rng.random_range(l - 0.5..=h + 0.5))
                .collect()
        })
        .collect();
    out.extend(p.iter().take(count / 4).map(<[f64]>::to_vec));
    out
}

/// Fraction of `draws` coresets with every probe inside `allowed(value)`.
fn success_rate(
    p: &PointSet,
    spec: &CoresetSpec,
    draws: usize,
    allowed: impl Fn(f64) -> f64,
) -> f64 {
    let xs = probes(p, 200, 99);
    let exact: Vec<f64> = xs.iter().map(|x| kde(p, x).unwrap()).collect();
    let mut rng = rng_from_seed(7);
    let mut ok = 0;
    for _ in 0..draws {
        let q = spec.sample(p, &mut rng).unwrap();
        ok += xs
            .iter()
            .zip(&exact)
            .all(|(x, g)| (kde(&q, x).unwrap() - g).abs() <= allowed(*g)) as usize;
    }
    ok as f64 / draws as f64
}

#[test]
fn additive_coreset_holds_with_stated_confidence() {
    let p = random_mixture(2000, 2, 3, 0.5, 2.0, 1).unwrap();
    let (alpha, delta) = (0.1, 0.1);
    let rate = success_rate(&p, &CoresetSpec::additive(alpha, delta), 100, |_| alpha);
    assert!(rate >= 1.0 - delta, "{rate}");
}

#[test]
fn relative_coreset_holds_with_stated_confidence() {
    let p = random_mixture(2000, 2, 3, 0.5, 2.0, 2).unwrap();
    let (eps, rho, delta) = (0.5, 0.1, 0.1);
    let rate = success_rate(&p, &CoresetSpec::relative(eps, rho, delta), 100, |g| {
        eps * g.max(rho)
    });
    assert!(rate >= 1.0 - delta, "{rate}");
}

#[test]
fn additive_constant_sweep_is_monotone_enough() {
    // Larger constants mean larger samples; the default must meet the target.
    let p = random_mixture(2000, 2, 3, 0.5, 2.0, 3).unwrap();
    let (alpha, delta) = (0.1, 0.1);
    let mut rates = Vec::new();
    for c in [0.25, 1.0, 4.0] {
        let spec = CoresetSpec::additive(alpha, delta).with_constant(c);
        rates.push(success_rate(&p, &spec, 60, |_| alpha));
    }
    assert!(rates[2] >= 1.0 - delta, "{rates:?}");
    assert!(rates[2] + 0.05 >= rates[0], "{rates:?}");
}

proptest! {
    #[test]
    fn additive_size_shrinks_as_alpha_grows(a in 0.01f64..0.5, b in 0.01f64..0.5, delta in 0.01f64..0.5) {
        let (small, large) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(additive_sample_size(small, delta, 4.0).unwrap() >= additive_sample_size(large, delta, 4.0).unwrap());
    }
}
