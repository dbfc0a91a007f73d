//! Heavy-tailed degree sequences drawn from P(X=k) ∝ (k+µ)^(−α),
//! truncated to k ∈ [k_min, k_max].
//!
//! The shift µ tunes the average degree and may take any value above
//! −k_min: as µ → −k_min the mass concentrates on k_min (mean → k_min),
//! and raising µ flattens the law toward uniform (mean → (k_min+k_max)/2).
//! E[X] is strictly increasing in µ on that whole range, which makes the
//! calibration a plain bisection. Sparse ensembles like z ≈ 2 at α ≈ 2.1
//! need µ < 0.

use rand::Rng;
use thiserror::Error;

use crate::realization::{erdos_gallai, DegreeSequence};

#[derive(Debug, Error, PartialEq)]
pub enum DegreeModelError {
    #[error("invalid power-law spec: {0}")]
    InvalidSpec(String),
    #[error("target mean {target} outside the achievable range [{min}, {max})")]
    UnreachableMean { target: f64, min: f64, max: f64 },
    #[error("failed to sample a realizable sequence within {0} attempts")]
    SamplingFailed(u32),
}

/// Truncated shifted power law over integer degrees.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerLawSpec {
    pub alpha: f64,
    pub mu: f64,
    pub k_min: u32,
    pub k_max: u32,
    pub n: usize,
}

impl PowerLawSpec {
    /// Spec with the default support [1, n-1]: no isolated vertices, and no
    /// degree a simple graph cannot carry.
    pub fn new(alpha: f64, mu: f64, n: usize) -> Result<PowerLawSpec, DegreeModelError> {
        if n < 2 {
            return Err(DegreeModelError::InvalidSpec(format!(
                "need n >= 2 vertices, got {n}"
            )));
        }
        PowerLawSpec::with_support(alpha, mu, 1, n as u32 - 1, n)
    }

    pub fn with_support(
        alpha: f64,
        mu: f64,
        k_min: u32,
        k_max: u32,
        n: usize,
    ) -> Result<PowerLawSpec, DegreeModelError> {
        if !(alpha > 1.0) {
            return Err(DegreeModelError::InvalidSpec(format!(
                "alpha must exceed 1, got {alpha}"
            )));
        }
        if !(mu > -(k_min as f64)) {
            return Err(DegreeModelError::InvalidSpec(format!(
                "mu must exceed -k_min = {}, got {mu}",
                -(k_min as f64)
            )));
        }
        if k_min < 1 || k_min > k_max || k_max as usize > n.saturating_sub(1) {
            return Err(DegreeModelError::InvalidSpec(format!(
                "need 1 <= k_min <= k_max <= n-1, got k_min={k_min}, k_max={k_max}, n={n}"
            )));
        }
        Ok(PowerLawSpec {
            alpha,
            mu,
            k_min,
            k_max,
            n,
        })
    }

    fn weight(&self, k: u32) -> f64 {
        (k as f64 + self.mu).powf(-self.alpha)
    }

    /// E[X] by direct summation over the support.
    pub fn mean(&self) -> f64 {
        mean_at(self.alpha, self.mu, self.k_min, self.k_max)
    }

    /// Standard deviation of X by direct summation.
    pub fn std_dev(&self) -> f64 {
        let mut z = 0.0;
        let mut m1 = 0.0;
        let mut m2 = 0.0;
        for k in self.k_min..=self.k_max {
            let w = self.weight(k);
            z += w;
            m1 += k as f64 * w;
            m2 += (k as f64) * (k as f64) * w;
        }
        let mean = m1 / z;
        (m2 / z - mean * mean).max(0.0).sqrt()
    }

    /// Cumulative distribution table: entry i is P(X ≤ k_min + i).
    pub fn cdf(&self) -> Vec<f64> {
        let len = (self.k_max - self.k_min + 1) as usize;
        let mut cdf = Vec::with_capacity(len);
        let mut acc = 0.0;
        for k in self.k_min..=self.k_max {
            acc += self.weight(k);
            cdf.push(acc);
        }
        let total = acc;
        for c in &mut cdf {
            *c /= total;
        }
        cdf
    }
}

fn mean_at(alpha: f64, mu: f64, k_min: u32, k_max: u32) -> f64 {
    let mut z = 0.0;
    let mut m = 0.0;
    for k in k_min..=k_max {
        let w = (k as f64 + mu).powf(-alpha);
        z += w;
        m += k as f64 * w;
    }
    m / z
}

/// Finds µ > −1 with E[X] = `z_target` over support [1, n-1], to relative
/// tolerance 1e-6, by bisection on the monotone increasing map µ → E[X].
pub fn tune_mu(alpha: f64, z_target: f64, n: usize) -> Result<f64, DegreeModelError> {
    const REL_TOL: f64 = 1e-6;
    if n < 2 || !(alpha > 1.0) {
        return Err(DegreeModelError::InvalidSpec(format!(
            "need n >= 2 and alpha > 1, got n={n}, alpha={alpha}"
        )));
    }
    let k_min = 1u32;
    let k_max = n as u32 - 1;
    // µ → −k_min concentrates all mass on k_min; µ → ∞ flattens toward
    // uniform over the support.
    let lo_limit = -(k_min as f64) + 1e-9;
    let floor = mean_at(alpha, lo_limit, k_min, k_max);
    let ceiling = (k_min as f64 + k_max as f64) / 2.0;
    if z_target < floor || z_target >= ceiling {
        return Err(DegreeModelError::UnreachableMean {
            target: z_target,
            min: floor,
            max: ceiling,
        });
    }
    let mut lo = lo_limit;
    let mut hi = 1.0f64;
    let mut grow = 0;
    while mean_at(alpha, hi, k_min, k_max) < z_target {
        lo = hi;
        hi *= 2.0;
        grow += 1;
        if grow > 200 {
            return Err(DegreeModelError::UnreachableMean {
                target: z_target,
                min: floor,
                max: ceiling,
            });
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let m = mean_at(alpha, mid, k_min, k_max);
        if (m - z_target).abs() <= REL_TOL * z_target {
            return Ok(mid);
        }
        if m < z_target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Draws n i.i.d. degrees by inverse CDF, then repairs parity by redrawing
/// uniformly chosen entries until the sum is even, and redraws the whole
/// sequence (bounded retries) in the rare case it fails Erdős–Gallai.
pub fn sample_sequence<R: Rng>(
    spec: &PowerLawSpec,
    rng: &mut R,
) -> Result<DegreeSequence, DegreeModelError> {
    const SEQUENCE_RETRIES: u32 = 64;
    const PARITY_RETRIES: u32 = 100_000;
    let cdf = spec.cdf();
    let draw = |rng: &mut R| -> u32 {
        let u: f64 = rng.gen();
        let idx = cdf.partition_point(|&c| c <= u);
        spec.k_min + (idx as u32).min(spec.k_max - spec.k_min)
    };
    for _ in 0..SEQUENCE_RETRIES {
        let mut degrees: Vec<u32> = (0..spec.n).map(|_| draw(rng)).collect();
        let mut sum: u64 = degrees.iter().map(|&d| d as u64).sum();
        let mut fixed = false;
        for _ in 0..PARITY_RETRIES {
            if sum % 2 == 0 {
                fixed = true;
                break;
            }
            let i = rng.gen_range(0..spec.n);
            sum -= degrees[i] as u64;
            degrees[i] = draw(rng);
            sum += degrees[i] as u64;
        }
        if !fixed {
            return Err(DegreeModelError::SamplingFailed(PARITY_RETRIES));
        }
        let seq = DegreeSequence::new(degrees);
        if erdos_gallai(&seq) {
            return Ok(seq);
        }
    }
    Err(DegreeModelError::SamplingFailed(SEQUENCE_RETRIES))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn tune_mu_fixed_point_at_zero() {
        let n = 5000;
        let z0 = mean_at(2.5, 0.0, 1, n as u32 - 1);
        let mu = tune_mu(2.5, z0, n).unwrap();
        assert!(mu.abs() < 1e-3, "mu = {mu}");
    }

    #[test]
    fn tune_mu_self_consistent() {
        let n = 10_000;
        let mu = tune_mu(2.5, 6.7, n).unwrap();
        let spec = PowerLawSpec::new(2.5, mu, n).unwrap();
        assert!((spec.mean() - 6.7).abs() < 1e-5, "mean = {}", spec.mean());
    }

    #[test]
    fn tune_mu_unreachable_targets() {
        assert!(matches!(
            tune_mu(2.5, 0.8, 1000),
            Err(DegreeModelError::UnreachableMean { .. })
        ));
        // Flat-limit ceiling is (1 + (n-1))/2 = n/2.
        assert!(matches!(
            tune_mu(2.5, 600.0, 1000),
            Err(DegreeModelError::UnreachableMean { .. })
        ));
    }

    #[test]
    fn tune_mu_is_monotone_in_target() {
        let n = 2000;
        let mu_a = tune_mu(2.3, 3.0, n).unwrap();
        let mu_b = tune_mu(2.3, 5.0, n).unwrap();
        let mu_c = tune_mu(2.3, 9.0, n).unwrap();
        assert!(mu_a < mu_b && mu_b < mu_c, "{mu_a} {mu_b} {mu_c}");
    }

    #[test]
    fn spec_rejects_degenerate_inputs() {
        assert!(matches!(
            PowerLawSpec::new(2.5, 0.0, 1),
            Err(DegreeModelError::InvalidSpec(_))
        ));
        assert!(matches!(
            PowerLawSpec::new(0.9, 0.0, 100),
            Err(DegreeModelError::InvalidSpec(_))
        ));
        assert!(matches!(
            PowerLawSpec::new(2.5, -1.0, 100),
            Err(DegreeModelError::InvalidSpec(_))
        ));
    }

    #[test]
    fn tune_mu_reaches_sparse_targets_with_negative_shift() {
        let mu = tune_mu(2.1, 2.05, 10_000).unwrap();
        assert!(mu < 0.0 && mu > -1.0, "mu = {mu}");
        let spec = PowerLawSpec::new(2.1, mu, 10_000).unwrap();
        assert!((spec.mean() - 2.05).abs() < 1e-4, "mean {}", spec.mean());
    }

    #[test]
    fn sampled_sequences_are_even_and_realizable() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let spec = PowerLawSpec::new(2.2, 1.0, 500).unwrap();
        for _ in 0..50 {
            let seq = sample_sequence(&spec, &mut rng).unwrap();
            assert_eq!(seq.len(), 500);
            assert!(seq.has_even_sum());
            assert!(erdos_gallai(&seq));
            assert!(seq.degrees().iter().all(|&d| (1..500).contains(&(d as usize))));
        }
    }

    #[test]
    fn sampling_is_deterministic_for_fixed_seed() {
        let spec = PowerLawSpec::new(2.5, 2.0, 300).unwrap();
        let a = sample_sequence(&spec, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
        let b = sample_sequence(&spec, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sample_mean_matches_tuned_target() {
        let n = 100_000;
        let mu = tune_mu(2.5, 6.0, n).unwrap();
        let spec = PowerLawSpec::new(2.5, mu, n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let seq = sample_sequence(&spec, &mut rng).unwrap();
        let mean = seq.sum() as f64 / n as f64;
        let sigma = spec.std_dev();
        let tol = 3.0 * sigma / (n as f64).sqrt();
        assert!(
            (mean - 6.0).abs() <= tol,
            "sample mean {mean} vs target 6.0 (tol {tol})"
        );
    }

    /// Empirical CDF of many draws stays within KS distance 0.002 of the
    /// analytic CDF.
    #[test]
    fn inverse_cdf_sampling_matches_distribution() {
        let spec = PowerLawSpec::new(2.5, 3.0, 2000).unwrap();
        let cdf = spec.cdf();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let draws = 1_000_000usize;
        let mut counts = vec![0u64; cdf.len()];
        for _ in 0..draws {
            let u: f64 = rand::Rng::gen(&mut rng);
            let idx = cdf.partition_point(|&c| c <= u);
            counts[idx.min(cdf.len() - 1)] += 1;
        }
        let mut acc = 0u64;
        let mut ks: f64 = 0.0;
        for (i, &c) in counts.iter().enumerate() {
            acc += c;
            let emp = acc as f64 / draws as f64;
            ks = ks.max((emp - cdf[i]).abs());
        }
        assert!(ks <= 0.002, "KS statistic {ks}");
    }
}
