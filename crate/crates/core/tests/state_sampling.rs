use shor_noise::{Distribution, RngStream};
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn chi_square_p(probs: &[f64], counts: &[u64]) -> f64 {
    let n: u64 = counts.iter().sum();
    let mut stat = 0.0;
    let mut bins = 0;
    for (p, &k) in probs.iter().zip(counts) {
        if *p > 0.0 {
            let e = p * n as f64;
            stat += (k as f64 - e).powi(2) / e;
            bins += 1;
        } else {
            assert_eq!(k, 0, "zero-probability bin sampled");
        }
    }
    let dist = ChiSquared::new((bins - 1) as f64).unwrap();
    1.0 - dist.cdf(stat)
}

#[test]
fn empirical_frequencies_match_128_bins() {
    // uneven weights with a few empty bins
    let raw: Vec<f64> = (0..128)
        .map(|i| {
            if i % 17 == 5 {
                0.0
            } else {
                1.0 + (i as f64 * 0.37).sin().abs() * 3.0
            }
        })
        .collect();
    let total: f64 = raw.iter().sum();
    let dist = Distribution::new(raw.iter().map(|x| x / total).collect(), false).unwrap();
    let mut rng = RngStream::new(31337, 0);
    let mut counts = vec![0u64; 128];
    for _ in 0..100_000 {
        counts[dist.sample_index(&mut rng).unwrap()] += 1;
    }
    let p = chi_square_p(dist.probs(), &counts);
    assert!(p > 0.001, "chi-square p = {p}");
}

#[test]
fn relative_distributions_sample_proportionally() {
    let dist = Distribution::new(vec![2.0, 6.0], true).unwrap();
    let mut rng = RngStream::new(1, 1);
    let mut counts = [0u64; 2];
    for _ in 0..100_000 {
        counts[dist.sample_index(&mut rng).unwrap()] += 1;
    }
    let p = chi_square_p(&[0.25, 0.75], &counts);
    assert!(p > 0.001, "chi-square p = {p}");
}
