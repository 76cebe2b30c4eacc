use rand::Rng;

use super::chi_f;
use crate::error::{Error, Result};
use crate::seed::{rng_from_seed, split_seed, streams};

pub const MIN_RESAMPLES: usize = 100;
pub const DEFAULT_RESAMPLES: usize = 1000;

fn resampled_mean<R: Rng + ?Sized>(values: &[f64], rng: &mut R) -> f64 {
    let m = values.len();
    (0..m).map(|_| values[rng.gen_range(0..m)]).sum::<f64>() / m as f64
}

/// Standard deviation of `stat` over bootstrap resamples. Each ensemble is
/// resampled with replacement independently and `stat` receives the three
/// resampled means; resamples where it returns `None` are dropped.
pub fn bootstrap_sd_with<F>(
    ensembles: [&[f64]; 3],
    resamples: usize,
    seed: u64,
    stat: F,
) -> Result<f64>
where
    F: Fn([f64; 3]) -> Option<f64>,
{
    if resamples < MIN_RESAMPLES {
        return Err(Error::invalid(format!(
            "bootstrap needs at least {MIN_RESAMPLES} resamples, got {resamples}"
        )));
    }
    if ensembles.iter().any(|e| e.is_empty()) {
        return Err(Error::EmptyInput("bootstrap ensemble".into()));
    }
    let values: Vec<f64> = (0..resamples)
        .filter_map(|r| {
            let mut rng = rng_from_seed(split_seed(seed, streams::BOOTSTRAP, r as u64));
            stat(ensembles.map(|e| resampled_mean(e, &mut rng)))
        })
        .collect();
    if values.len() < 2 {
        return Err(Error::EstimateUndefined(
            "too few bootstrap resamples produced a defined estimate".into(),
        ));
    }
    let m = values.len() as f64;
    let mean = values.iter().sum::<f64>() / m;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1.0);
    Ok(var.sqrt())
}

/// Bootstrap standard deviation of `χ̂_F`.
pub fn bootstrap_sd(ensembles: [&[f64]; 3], n: usize, resamples: usize, seed: u64) -> Result<f64> {
    bootstrap_sd_with(ensembles, resamples, seed, |g| {
        chi_f(g[0], g[1], g[2], n).ok()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_data_has_zero_spread() {
        let v = [0.8; 20];
        assert_eq!(bootstrap_sd([&v, &v, &v], 3, 200, 1).unwrap(), 0.0);
    }

    #[test]
    fn two_point_data_matches_binomial() {
        let m = 50;
        let data: Vec<f64> = (0..m).map(|i| if i < 15 { 1.0 } else { 0.0 }).collect();
        let one = [1.0];
        let sd = bootstrap_sd_with([&data, &one, &one], 10_000, 7, |g| Some(g[0])).unwrap();
        let p: f64 = 0.3;
        let analytic = (p * (1.0 - p) / m as f64).sqrt();
        assert!((sd / analytic - 1.0).abs() < 0.2);
    }

    #[test]
    fn seeded_and_validated() {
        let a = [0.9, 0.8, 0.85, 0.7];
        let b = [0.95, 0.9, 0.92];
        let c = [0.97, 0.99];
        let x = bootstrap_sd([&a, &b, &c], 2, 150, 3).unwrap();
        assert_eq!(x, bootstrap_sd([&a, &b, &c], 2, 150, 3).unwrap());
        assert!(bootstrap_sd([&a, &b, &c], 2, 99, 3).is_err());
        assert!(bootstrap_sd([&a, &[], &c], 2, 150, 3).is_err());
    }
}
