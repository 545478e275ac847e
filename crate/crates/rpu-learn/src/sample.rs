//! Synthetic data distributions and rejection sampling of uninferred points.

use alloc::vec::Vec;

use rand_core::{RngCore, SeedableRng};

use crate::error::Error;
use crate::oracle::{Counters, Label, Point};

/// The deterministic stream RNG used throughout the crate.
pub type Rng = rand_chacha::ChaCha8Rng;

/// Uniform draw from `[0, 1)` with 53 bits of precision.
pub fn uniform_f64(rng: &mut Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn gaussian_pair(rng: &mut Rng) -> (f64, f64) {
    // Box-Muller; u1 nudged away from zero so ln is finite.
    let u1 = uniform_f64(rng).max(f64::MIN_POSITIVE);
    let u2 = uniform_f64(rng);
    let r = libm::sqrt(-2.0 * libm::log(u1));
    let t = 2.0 * core::f64::consts::PI * u2;
    (r * libm::cos(t), r * libm::sin(t))
}

/// A sampling distribution over `R^d`.
#[derive(Debug, Clone)]
pub enum Distribution {
    UniformBox { lo: Vec<f64>, hi: Vec<f64> },
    IsotropicGaussian { center: Vec<f64>, scale: f64 },
    /// Finite mixture; weights must be nonnegative and sum to 1.
    Mixture(Vec<(f64, Distribution)>),
}

impl Distribution {
    /// Uniform over `[-r, r]^d`.
    pub fn centered_box(dim: usize, r: f64) -> Self {
        Distribution::UniformBox {
            lo: alloc::vec![-r; dim],
            hi: alloc::vec![r; dim],
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Distribution::UniformBox { lo, .. } => lo.len(),
            Distribution::IsotropicGaussian { center, .. } => center.len(),
            Distribution::Mixture(parts) => parts.first().map_or(0, |(_, d)| d.dim()),
        }
    }

    pub fn validate(&self) -> Result<(), Error> {
        match self {
            Distribution::UniformBox { lo, hi } => {
                if lo.len() != hi.len() || lo.is_empty() {
                    return Err(Error::InvalidConfig("uniform box bounds mismatch"));
                }
                if lo.iter().zip(hi).any(|(a, b)| a > b) {
                    return Err(Error::InvalidConfig("uniform box needs lo <= hi"));
                }
                Ok(())
            }
            Distribution::IsotropicGaussian { center, scale } => {
                if center.is_empty() || !scale.is_finite() || *scale <= 0.0 {
                    return Err(Error::InvalidConfig("gaussian needs positive scale"));
                }
                Ok(())
            }
            Distribution::Mixture(parts) => {
                if parts.is_empty() {
                    return Err(Error::InvalidConfig("empty mixture"));
                }
                let total: f64 = parts.iter().map(|(w, _)| *w).sum();
                if parts.iter().any(|(w, _)| *w < 0.0) || libm::fabs(total - 1.0) > 1e-9 {
                    return Err(Error::InvalidConfig("mixture weights must sum to 1"));
                }
                let d = self.dim();
                for (_, part) in parts {
                    part.validate()?;
                    if part.dim() != d {
                        return Err(Error::InvalidConfig("mixture dimension mismatch"));
                    }
                }
                Ok(())
            }
        }
    }

    pub fn sample(&self, rng: &mut Rng) -> Point {
        match self {
            Distribution::UniformBox { lo, hi } => {
                let coords = lo
                    .iter()
                    .zip(hi)
                    .map(|(a, b)| a + (b - a) * uniform_f64(rng))
                    .collect();
                Point::new(coords)
            }
            Distribution::IsotropicGaussian { center, scale } => {
                let mut coords = Vec::with_capacity(center.len());
                while coords.len() < center.len() {
                    let (g1, g2) = gaussian_pair(rng);
                    coords.push(g1);
                    if coords.len() < center.len() {
                        coords.push(g2);
                    }
                }
                for (c, mu) in coords.iter_mut().zip(center) {
                    *c = mu + scale * *c;
                }
                Point::new(coords)
            }
            Distribution::Mixture(parts) => {
                let mut u = uniform_f64(rng);
                for (w, part) in parts {
                    if u < *w {
                        return part.sample(rng);
                    }
                    u -= w;
                }
                parts.last().expect("nonempty mixture").1.sample(rng)
            }
        }
    }
}

/// A classifier that may abstain (`None`).
pub trait PartialClassifier {
    fn classify(&self, x: &Point) -> Option<Label>;
}

/// Rejection-sample the first point on which `classify` abstains.
///
/// Every draw, accepted or rejected, increments `counters.samples_drawn`.
/// Returns `Ok(None)` when `budget` draws pass without an abstained point
/// (a normal control outcome, not a failure).
pub fn draw_uninferred<F>(
    dist: &Distribution,
    mut classify: F,
    budget: u64,
    counters: &mut Counters,
    rng: &mut Rng,
) -> Result<Option<Point>, Error>
where
    F: FnMut(&Point) -> Result<Option<Label>, Error>,
{
    for _ in 0..budget {
        let x = dist.sample(rng);
        counters.samples_drawn += 1;
        if classify(&x)?.is_none() {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

/// Deterministic stream seeded from a run seed and a stream tag, so that
/// independent streams (sampling, hypothesis generation, evaluation) never
/// alias.
pub fn seeded_rng(seed: u64, stream: u64) -> Rng {
    let mut state = [0u8; 32];
    state[..8].copy_from_slice(&seed.to_le_bytes());
    state[8..16].copy_from_slice(&stream.to_le_bytes());
    state[16..24].copy_from_slice(&0x5e5e_5e5e_5e5e_5e5eu64.to_le_bytes());
    Rng::from_seed(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::Label;
    use alloc::vec;

    #[test]
    fn always_abstain_accepts_first_draw() {
        let dist = Distribution::centered_box(1, 1.0);
        let mut c = Counters::default();
        let mut rng = seeded_rng(1, 0);
        let p = draw_uninferred(&dist, |_| Ok(None), 5, &mut c, &mut rng).unwrap();
        assert!(p.is_some());
        assert_eq!(c.samples_drawn, 1);
    }

    #[test]
    fn never_abstain_exhausts_budget() {
        let dist = Distribution::centered_box(1, 1.0);
        let mut c = Counters::default();
        let mut rng = seeded_rng(1, 0);
        let p = draw_uninferred(&dist, |_| Ok(Some(Label::Positive)), 5, &mut c, &mut rng)
            .unwrap();
        assert!(p.is_none());
        assert_eq!(c.samples_drawn, 5);
    }

    #[test]
    fn left_half_rejection_rate_is_about_two() {
        // Classifier abstains exactly on the left half of a 1D uniform box:
        // accepted points lie on the left, and the expected number of draws
        // per acceptance is 2 (Monte Carlo, fixed seed, +-10%).
        let dist = Distribution::centered_box(1, 1.0);
        let mut c = Counters::default();
        let mut rng = seeded_rng(7, 0);
        let mut accepted = 0u64;
        while accepted < 10_000 {
            let p = draw_uninferred(
                &dist,
                |x| {
                    Ok(if x.coord(0) < 0.0 { None } else { Some(Label::Positive) })
                },
                u64::MAX,
                &mut c,
                &mut rng,
            )
            .unwrap()
            .expect("unbounded budget");
            assert!(p.coord(0) < 0.0);
            accepted += 1;
        }
        let per_accept = c.samples_drawn as f64 / accepted as f64;
        assert!((per_accept - 2.0).abs() < 0.2, "got {per_accept}");
    }

    #[test]
    fn mixture_weights_validated() {
        let bad = Distribution::Mixture(vec![
            (0.7, Distribution::centered_box(1, 1.0)),
            (0.7, Distribution::centered_box(1, 1.0)),
        ]);
        assert!(bad.validate().is_err());
    }

    #[test]
    fn gaussian_sample_has_right_dim() {
        let dist = Distribution::IsotropicGaussian { center: vec![0.0, 1.0, 2.0], scale: 0.5 };
        let mut rng = seeded_rng(3, 0);
        assert_eq!(dist.sample(&mut rng).dim(), 3);
    }
}
