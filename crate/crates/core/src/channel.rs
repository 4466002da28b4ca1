//! BPSK over AWGN with scattered hard errors.
//!
//! Bit 0 maps to +1 and bit 1 to -1. SNR is `10·log10(1/σ²)` for unit symbol
//! energy. A scattered hard error (SHE) replaces a received sample with the
//! wrong-signed value `-x·A` for amplitude A, giving a confident wrong LLR.

use rand::seq::index::sample;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSpec {
    pub snr_db: f64,
    pub she_count: usize,
    pub she_amplitude: f64,
    pub seed: u64,
}

impl ChannelSpec {
    pub fn new(snr_db: f64, she_count: usize, she_amplitude: f64, seed: u64) -> Result<ChannelSpec> {
        if !snr_db.is_finite() && snr_db != f64::INFINITY {
            return Err(Error::Channel(format!("snr {snr_db} dB")));
        }
        if !(she_amplitude > 0.0 && she_amplitude.is_finite()) {
            return Err(Error::Channel(format!("SHE amplitude {she_amplitude}")));
        }
        Ok(ChannelSpec {
            snr_db,
            she_count,
            she_amplitude,
            seed,
        })
    }

    /// Noise standard deviation `10^(-snr_db/20)`.
    pub fn sigma(&self) -> f64 {
        sigma_from_snr(self.snr_db)
    }
}

pub fn sigma_from_snr(snr_db: f64) -> f64 {
    10f64.powf(-snr_db / 20.0)
}

pub fn modulate(bits: &[u8]) -> Vec<f64> {
    bits.iter().map(|&b| if b == 0 { 1.0 } else { -1.0 }).collect()
}

/// Hard decision: negative samples are bit 1.
pub fn demap(y: &[f64]) -> Vec<u8> {
    y.iter().map(|&v| (v < 0.0) as u8).collect()
}

/// Adds i.i.d. N(0, σ²) noise. Samples come from the ziggurat sampler of
/// `rand_distr`, so a seeded generator gives bit-identical output.
pub fn awgn<R: Rng + ?Sized>(x: &[f64], sigma: f64, rng: &mut R) -> Vec<f64> {
    if sigma == 0.0 {
        return x.to_vec();
    }
    x.iter()
        .map(|&v| {
            let z: f64 = rng.sample(StandardNormal);
            v + sigma * z
        })
        .collect()
}

/// Overwrites `count` distinct uniformly chosen samples with
/// `-transmitted·amplitude`. Returns the positions, sorted.
pub fn inject_she<R: Rng + ?Sized>(
    y: &mut [f64],
    transmitted: &[f64],
    count: usize,
    amplitude: f64,
    rng: &mut R,
) -> Result<Vec<usize>> {
    if count > y.len() {
        return Err(Error::Channel(format!(
            "{count} hard errors requested for {} samples",
            y.len()
        )));
    }
    let mut pos = sample(rng, y.len(), count).into_vec();
    pos.sort_unstable();
    for &p in &pos {
        y[p] = -transmitted[p] * amplitude;
    }
    Ok(pos)
}

/// `2y/σ²`, the LLR log P(0)/P(1) for the +1/-1 mapping.
pub fn llr(y: &[f64], sigma: f64) -> Result<Vec<f64>> {
    if sigma.is_nan() || sigma <= 0.0 {
        return Err(Error::Channel(format!("LLR needs sigma > 0, got {sigma}")));
    }
    let scale = 2.0 / (sigma * sigma);
    Ok(y.iter().map(|&v| scale * v).collect())
}

/// One channel use: modulate, add noise, inject hard errors, compute LLRs.
#[derive(Debug, Clone, PartialEq)]
pub struct Received {
    pub samples: Vec<f64>,
    pub llr: Vec<f64>,
    /// Hard-error positions, for test oracles only.
    pub she_positions: Vec<usize>,
}

pub fn transmit<R: Rng + ?Sized>(bits: &[u8], spec: &ChannelSpec, rng: &mut R) -> Result<Received> {
    let x = modulate(bits);
    let sigma = spec.sigma();
    let mut y = awgn(&x, sigma, rng);
    let she_positions = inject_she(&mut y, &x, spec.she_count, spec.she_amplitude, rng)?;
    let llr = llr(&y, sigma)?;
    Ok(Received {
        samples: y,
        llr,
        she_positions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn modulation() {
        assert_eq!(modulate(&[0, 1, 0]), vec![1.0, -1.0, 1.0]);
        assert!(modulate(&[0; 5]).iter().all(|&v| v == 1.0));
        let bits = vec![1, 0, 0, 1, 1];
        assert_eq!(demap(&modulate(&bits)), bits);
    }

    #[test]
    fn sigma_at_5db() {
        assert!((sigma_from_snr(5.0) - 0.562_341_325).abs() < 1e-8);
    }

    #[test]
    fn zero_sigma_passes_through() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let x = modulate(&[0, 1, 1]);
        assert_eq!(awgn(&x, 0.0, &mut rng), x);
    }

    #[test]
    fn noise_mean_is_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let sigma = sigma_from_snr(5.0);
        let x = vec![1.0; 1_000_000];
        let y = awgn(&x, sigma, &mut rng);
        let mean = y.iter().zip(&x).map(|(a, b)| a - b).sum::<f64>() / x.len() as f64;
        assert!(mean.abs() < 3.0 * sigma / 1000.0, "mean {mean}");
    }

    #[test]
    fn she_injection() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = modulate(&[0, 1, 0, 0, 1, 0, 1, 1]);
        let mut y = x.clone();
        assert!(inject_she(&mut y, &x, 0, 1.5, &mut rng).unwrap().is_empty());
        assert_eq!(y, x);
        let pos = inject_she(&mut y, &x, 5, 1.5, &mut rng).unwrap();
        let mut d = pos.clone();
        d.dedup();
        assert_eq!(d.len(), 5);
        for &p in &pos {
            assert_eq!(y[p], -1.5 * x[p]);
        }
        let mut y2 = x.clone();
        let pos2 = inject_she(&mut y2, &x, 5, 1.5, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        let mut y3 = x.clone();
        let pos3 = inject_she(&mut y3, &x, 5, 1.5, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        assert_eq!(pos2, pos3);
        assert!(inject_she(&mut y, &x, 9, 1.5, &mut rng).is_err());
    }

    #[test]
    fn llr_values() {
        let sigma = sigma_from_snr(5.0);
        let l = llr(&[0.0, 1.0, -1.5], sigma).unwrap();
        assert_eq!(l[0], 0.0);
        assert!((l[1] - 6.324_555).abs() < 1e-5);
        assert!((l[2] + 9.486_833).abs() < 1e-5);
        assert!(llr(&[1.0], 0.0).is_err());
    }

    #[test]
    fn transmit_is_deterministic() {
        let spec = ChannelSpec::new(5.0, 10, 1.5, 3).unwrap();
        let bits: Vec<u8> = (0..200).map(|i| (i % 3 == 0) as u8).collect();
        let a = transmit(&bits, &spec, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        let b = transmit(&bits, &spec, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.she_positions.len(), 10);
        for (y, l) in a.samples.iter().zip(&a.llr) {
            assert_eq!(y < &0.0, l < &0.0);
        }
    }

    #[test]
    fn rejects_bad_spec() {
        assert!(ChannelSpec::new(f64::NAN, 0, 1.0, 0).is_err());
        assert!(ChannelSpec::new(5.0, 0, 0.0, 0).is_err());
    }
}
