//! Reproducible per-replicate random streams.
//!
//! Every Monte Carlo replicate draws from its own ChaCha8 stream, keyed by
//! `(seed, domain)` and selected by the replicate index. A replicate's draws
//! therefore do not depend on which worker runs it or in what order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::sample::Sample;

pub type StreamRng = ChaCha8Rng;

/// Separates streams used for different purposes under one seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u64)]
pub enum StreamDomain {
    /// Null samples for critical-value calibration.
    Null = 0,
    /// Samples under alternative distributions.
    Alternative = 1,
    /// Samples from reference distributions in the bias/MSE study.
    Reference = 2,
    /// Fresh null samples, independent of calibration.
    Fresh = 3,
    /// Tie-breaking jitter for real data.
    Jitter = 4,
}

pub fn substream(seed: u64, domain: StreamDomain, replicate: u64) -> StreamRng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&(domain as u64).to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(replicate);
    rng
}

/// Stream for replicate `replicate` of the null-calibration domain.
pub fn rng_substream(seed: u64, replicate: u64) -> StreamRng {
    substream(seed, StreamDomain::Null, replicate)
}

/// Re-draws allowed per replicate before giving up.
pub const MAX_REDRAWS: u32 = 1000;

/// Result of one replicate: its value and how many times the generated
/// sample had to be re-drawn.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Replicate<T> {
    pub value: T,
    pub redraws: u32,
}

/// Runs `reps` replicates in parallel and returns them in replicate order.
///
/// Replicate `r` owns the stream `substream(seed, domain, r)`. `draw` builds a
/// sample from it and `eval` scores it; a tied sample, or a numerical error
/// from `eval`, discards the draw and continues on the same stream.
pub fn run_replicates<T, D, E>(
    reps: usize,
    seed: u64,
    domain: StreamDomain,
    draw: D,
    eval: E,
) -> Result<Vec<Replicate<T>>>
where
    T: Send,
    D: Fn(&mut StreamRng) -> Result<Sample> + Sync,
    E: Fn(&Sample) -> Result<T> + Sync,
{
    (0..reps as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = substream(seed, domain, r);
            let mut redraws = 0;
            loop {
                let sample = draw(&mut rng)?;
                let outcome = if sample.has_ties() {
                    Err(Error::TiedSpacings { index: 0 })
                } else {
                    eval(&sample)
                };
                match outcome {
                    Ok(value) => return Ok(Replicate { value, redraws }),
                    Err(e) if e.is_numerical() && redraws < MAX_REDRAWS => redraws += 1,
                    Err(e) => return Err(e),
                }
            }
        })
        .collect()
}

/// Sum of the redraw counters.
pub fn total_redraws<T>(reps: &[Replicate<T>]) -> u64 {
    reps.iter().map(|r| u64::from(r.redraws)).sum()
}

/// Adds independent `U(-half_width, half_width)` noise to every value, from
/// the jitter stream of `seed`. Used to break ties in recorded data.
pub fn jitter(values: &[f64], half_width: f64, seed: u64) -> Result<Vec<f64>> {
    if !(half_width > 0.0 && half_width.is_finite()) {
        return Err(Error::NonpositiveScale(half_width));
    }
    let mut rng = substream(seed, StreamDomain::Jitter, 0);
    Ok(values
        .iter()
        .map(|v| v + half_width * (2.0 * crate::distribution::open_unit(&mut rng) - 1.0))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::open_unit;
    use rand::RngCore;

    fn head(mut rng: StreamRng) -> Vec<u64> {
        (0..64).map(|_| rng.next_u64()).collect()
    }

    #[test]
    fn same_key_same_sequence() {
        assert_eq!(head(rng_substream(7, 3)), head(rng_substream(7, 3)));
    }

    #[test]
    fn distinct_replicates_and_domains_differ() {
        let base = head(rng_substream(7, 3));
        for other in [
            rng_substream(7, 4),
            rng_substream(8, 3),
            substream(7, StreamDomain::Alternative, 3),
        ] {
            let h = head(other);
            assert!(base.iter().zip(&h).all(|(a, b)| a != b));
        }
    }

    #[test]
    fn replicates_redraw_ties_and_are_ordered() {
        // Coarse values tie often; every accepted sample must be tie-free.
        let draw = |rng: &mut StreamRng| {
            Sample::new((0..4).map(|_| (open_unit(rng) * 8.0).floor()).collect::<Vec<_>>())
        };
        let eval = |s: &Sample| Ok(s.values().to_vec());
        let a = run_replicates(200, 5, StreamDomain::Null, draw, eval).unwrap();
        assert!(a.iter().all(|r| r.value.windows(2).all(|w| w[0] < w[1])));
        assert!(total_redraws(&a) > 0);
        let b = run_replicates(200, 5, StreamDomain::Null, draw, eval).unwrap();
        assert_eq!(a, b);
        let bad = run_replicates(3, 5, StreamDomain::Null, draw, |_| -> Result<f64> {
            Err(Error::InvalidParameter("x".into()))
        });
        assert!(bad.is_err());
    }

    #[test]
    fn pooled_draws_pass_chi_square() {
        const BINS: usize = 100;
        const PER_STREAM: usize = 1000;
        let mut counts = [0usize; BINS];
        for r in 0..1000 {
            let mut rng = rng_substream(2024, r);
            for _ in 0..PER_STREAM {
                counts[(open_unit(&mut rng) * BINS as f64) as usize] += 1;
            }
        }
        let expected = (1000 * PER_STREAM / BINS) as f64;
        let chi2: f64 = counts
            .iter()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum();
        // 99th percentile of chi-square with 99 degrees of freedom.
        assert!(chi2 < 134.64, "chi2 = {chi2}");
    }

    #[test]
    fn jitter_breaks_ties_reproducibly() {
        let v = [1.0, 1.0, 2.0, 2.0];
        let a = jitter(&v, 1e-6, 5).unwrap();
        assert_eq!(a, jitter(&v, 1e-6, 5).unwrap());
        assert!(!Sample::new(a.clone()).unwrap().has_ties());
        assert!(a.iter().zip(v).all(|(x, y)| (x - y).abs() <= 1e-6));
        assert!(jitter(&v, 0.0, 5).is_err());
    }
}
