//! Two-component 1-D Gaussian mixture and the rewiring thresholds derived
//! from it.
//!
//! With the fitted components ordered so that `mu1 > mu2`:
//!
//! ```text
//! lower = sigma2/(sigma1+sigma2)·mu1 + sigma1/(sigma1+sigma2)·mu2
//! upper = mu1 + sigma1
//! ```
//!
//! The lower threshold is the point between the two means weighted by the
//! opposite spread; the upper one sits a standard deviation above the
//! high-curvature mode.

use serde::Serialize;

use crate::curvature::percentile_sorted;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EmConfig {
    /// Stop once the log-likelihood gains less than this in one iteration.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Sigma floor as a fraction of the sample range.
    pub sigma_floor_fraction: f64,
    pub min_samples: usize,
    /// Sample variances at or below this are treated as constant input.
    pub variance_epsilon: f64,
}

impl Default for EmConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-6,
            max_iterations: 200,
            sigma_floor_fraction: 1e-6,
            min_samples: 4,
            variance_epsilon: 1e-12,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MixtureFit {
    pub mu1: f64,
    pub sigma1: f64,
    pub mu2: f64,
    pub sigma2: f64,
    pub w1: f64,
    pub w2: f64,
    pub log_likelihood: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Log-likelihood at the initial parameters and after every M-step.
    #[serde(skip)]
    pub log_likelihood_trace: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Thresholds {
    pub delta_lower: f64,
    pub delta_upper: f64,
    pub usable: bool,
}

#[derive(Clone, Copy, Debug)]
struct Component {
    weight: f64,
    mean: f64,
    sigma: f64,
}

impl Component {
    fn log_density(&self, x: f64) -> f64 {
        const HALF_LN_TAU: f64 = 0.918_938_533_204_672_8;
        let z = (x - self.mean) / self.sigma;
        self.weight.ln() - self.sigma.ln() - HALF_LN_TAU - 0.5 * z * z
    }
}

fn log_sum_exp(a: f64, b: f64) -> f64 {
    let hi = a.max(b);
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + ((a - hi).exp() + (b - hi).exp()).ln()
}

/// Fits two Gaussians by expectation–maximization.
///
/// Initialization depends only on order statistics and moments: means at
/// the 25th and 75th percentiles (or at the minimum and maximum when those
/// percentiles coincide), both sigmas at the sample standard deviation,
/// equal weights.
pub fn fit_gmm2(values: &[f64], config: &EmConfig) -> Result<MixtureFit> {
    let n = values.len();
    if n < config.min_samples.max(2) {
        return Err(Error::TooFewSamples {
            needed: config.min_samples.max(2),
            got: n,
        });
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let nf = n as f64;
    let mean = values.iter().sum::<f64>() / nf;
    let var = values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / nf;
    if !(var > config.variance_epsilon) {
        return Err(Error::ZeroVariance(var));
    }
    let (lo, hi) = (sorted[0], sorted[n - 1]);
    let floor = config.sigma_floor_fraction * (hi - lo);
    let (mut m_low, mut m_high) = (percentile_sorted(&sorted, 0.25), percentile_sorted(&sorted, 0.75));
    if m_high - m_low <= floor {
        m_low = lo;
        m_high = hi;
    }
    let std = var.sqrt().max(floor);
    let mut comps = [
        Component { weight: 0.5, mean: m_high, sigma: std },
        Component { weight: 0.5, mean: m_low, sigma: std },
    ];

    let mut resp = vec![0.0f64; n];
    let e_step = |comps: &[Component; 2], resp: &mut [f64]| -> f64 {
        let mut ll = 0.0;
        for (r, &x) in resp.iter_mut().zip(values) {
            let (a, b) = (comps[0].log_density(x), comps[1].log_density(x));
            let total = log_sum_exp(a, b);
            ll += total;
            *r = (a - total).exp();
        }
        ll
    };

    let mut trace = vec![e_step(&comps, &mut resp)];
    let mut converged = false;
    let mut iterations = 0;
    while iterations < config.max_iterations {
        iterations += 1;
        let mut next = comps;
        for (k, c) in next.iter_mut().enumerate() {
            let r_of = |i: usize| if k == 0 { resp[i] } else { 1.0 - resp[i] };
            let mass: f64 = (0..n).map(r_of).sum();
            if mass <= f64::MIN_POSITIVE {
                // empty component keeps its previous location
                c.weight = f64::MIN_POSITIVE;
                continue;
            }
            let mu = (0..n).map(|i| r_of(i) * values[i]).sum::<f64>() / mass;
            let v = (0..n).map(|i| r_of(i) * (values[i] - mu).powi(2)).sum::<f64>() / mass;
            c.weight = mass / nf;
            c.mean = mu;
            c.sigma = v.sqrt().max(floor);
        }
        comps = next;
        let ll = e_step(&comps, &mut resp);
        let gain = ll - trace[trace.len() - 1];
        trace.push(ll);
        if gain.abs() < config.tolerance {
            converged = true;
            break;
        }
    }

    let [mut a, mut b] = comps;
    if a.mean < b.mean {
        std::mem::swap(&mut a, &mut b);
    }
    let w_total = a.weight + b.weight;
    Ok(MixtureFit {
        mu1: a.mean,
        sigma1: a.sigma,
        mu2: b.mean,
        sigma2: b.sigma,
        w1: a.weight / w_total,
        w2: b.weight / w_total,
        log_likelihood: *trace.last().unwrap(),
        iterations,
        converged,
        log_likelihood_trace: trace,
    })
}

pub fn lower_threshold(fit: &MixtureFit) -> f64 {
    let s = fit.sigma1 + fit.sigma2;
    fit.sigma2 / s * fit.mu1 + fit.sigma1 / s * fit.mu2
}

pub fn upper_threshold(fit: &MixtureFit) -> f64 {
    fit.mu1 + fit.sigma1
}

impl MixtureFit {
    /// Parameters are finite, ordered, and both components carry weight.
    pub fn is_valid(&self) -> bool {
        let finite = [self.mu1, self.mu2, self.sigma1, self.sigma2, self.w1, self.w2]
            .iter()
            .all(|x| x.is_finite());
        finite
            && self.mu1 > self.mu2
            && self.sigma1 > 0.0
            && self.sigma2 > 0.0
            && self.w1 > 0.0
            && self.w2 > 0.0
    }
}

impl Thresholds {
    /// Thresholds are unusable when the fit is invalid or the lower one
    /// lands above the upper one.
    pub fn from_fit(fit: &MixtureFit) -> Thresholds {
        let (delta_lower, delta_upper) = (lower_threshold(fit), upper_threshold(fit));
        Thresholds {
            delta_lower,
            delta_upper,
            usable: fit.is_valid() && delta_lower <= delta_upper,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::{compute_all, CurvatureKind};
    use crate::generators;
    use crate::rng::SeededRng;

    fn fit_of(mu1: f64, sigma1: f64, mu2: f64, sigma2: f64) -> MixtureFit {
        MixtureFit {
            mu1,
            sigma1,
            mu2,
            sigma2,
            w1: 0.5,
            w2: 0.5,
            log_likelihood: 0.0,
            iterations: 0,
            converged: true,
            log_likelihood_trace: vec![],
        }
    }

    #[test]
    fn threshold_formulas() {
        let f = fit_of(10.0, 2.0, -16.0, 3.0);
        assert!((lower_threshold(&f) - (-0.4)).abs() < 1e-12);
        assert_eq!(upper_threshold(&f), 12.0);
        let f = fit_of(6.0, 1.5, 2.0, 1.5);
        assert_eq!(lower_threshold(&f), 4.0);
        assert_eq!(upper_threshold(&fit_of(0.0, 1.0, -3.0, 1.0)), 1.0);
    }

    #[test]
    fn recovers_separated_modes() {
        let mut rng = SeededRng::new(2024);
        let values: Vec<f64> = (0..10_000)
            .map(|i| if i % 2 == 0 { 10.0 + rng.gaussian() } else { -16.0 + rng.gaussian() })
            .collect();
        let fit = fit_gmm2(&values, &EmConfig::default()).unwrap();
        assert!((9.9..=10.1).contains(&fit.mu1), "{fit:?}");
        assert!((-16.1..=-15.9).contains(&fit.mu2), "{fit:?}");
        assert!(fit.converged);
        assert!((fit.w1 + fit.w2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn barbell_modes_straddle_bridge_and_clique() {
        let g = generators::barbell(10);
        let map = compute_all(&g, CurvatureKind::Af3).unwrap();
        let fit = fit_gmm2(&map.values, &EmConfig::default()).unwrap();
        assert!(fit.mu2 <= -15.5 && fit.mu1 >= 9.5, "{fit:?}");
        let t = Thresholds::from_fit(&fit);
        assert!(t.usable);
        assert!(t.delta_upper >= 10.0);
        assert!(-16.0 < t.delta_lower && t.delta_lower < fit.mu1);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(matches!(
            fit_gmm2(&[3.0; 10], &EmConfig::default()),
            Err(Error::ZeroVariance(_))
        ));
        assert!(matches!(
            fit_gmm2(&[1.0, 2.0, 3.0], &EmConfig::default()),
            Err(Error::TooFewSamples { got: 3, .. })
        ));
    }

    #[test]
    fn log_likelihood_never_decreases() {
        let mut rng = SeededRng::new(8);
        let values: Vec<f64> = (0..500)
            .map(|_| if rng.bernoulli(0.3) { 2.0 * rng.gaussian() } else { 3.0 + rng.gaussian() })
            .collect();
        let fit = fit_gmm2(&values, &EmConfig::default()).unwrap();
        for w in fit.log_likelihood_trace.windows(2) {
            assert!(w[1] >= w[0] - 1e-9, "{} -> {}", w[0], w[1]);
        }
    }

    #[test]
    fn valid_fits_never_cross() {
        // the lower threshold is a convex combination of mu2 < mu1, so it
        // cannot exceed mu1 + sigma1
        for &(s1, s2) in &[(50.0, 0.01), (0.01, 50.0), (1.0, 1.0)] {
            let t = Thresholds::from_fit(&fit_of(1.0, s1, 0.0, s2));
            assert!(t.usable && t.delta_lower <= t.delta_upper);
        }
        let mut bad = fit_of(1.0, 1.0, 0.0, 1.0);
        bad.mu2 = f64::NAN;
        assert!(!Thresholds::from_fit(&bad).usable);
    }
}
