//! Counter-based random streams and the Beta / Gamma / Dirichlet samplers.
//!
//! A [`SeededRng`] is keyed by a master seed plus a stream path (typically
//! `[sample index, repetition]`). Each draw hashes `(key, counter)`, so the
//! value of draw `n` on a stream never depends on what other streams did or on
//! which thread evaluated them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeededRng {
    master_seed: u64,
    stream_path: Vec<u64>,
    #[serde(skip)]
    key: u64,
    #[serde(skip)]
    counter: u64,
}

impl SeededRng {
    pub fn new(master_seed: u64) -> Self {
        Self::stream(master_seed, &[])
    }

    pub fn stream(master_seed: u64, path: &[u64]) -> Self {
        let mut key = mix64(master_seed ^ 0x6A09_E667_F3BC_C908);
        for &p in path {
            key = mix64(key ^ mix64(p.wrapping_add(GOLDEN_GAMMA)));
        }
        Self {
            master_seed,
            stream_path: path.to_vec(),
            key,
            counter: 0,
        }
    }

    /// Child stream with `index` appended to the path. The parent's draw
    /// counter is not consumed.
    pub fn derive(&self, index: u64) -> Self {
        let mut path = self.stream_path.clone();
        path.push(index);
        Self::stream(self.master_seed, &path)
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_path(&self) -> &[u64] {
        &self.stream_path
    }

    /// Number of draws taken from this stream so far.
    pub fn draw_index(&self) -> u64 {
        self.counter
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        let c = self.counter;
        self.counter = self.counter.wrapping_add(1);
        mix64(self.key ^ mix64(c.wrapping_mul(GOLDEN_GAMMA).wrapping_add(GOLDEN_GAMMA)))
    }

    /// Uniform on `[0, 1)` with 53 bits of precision.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `(0, 1]`; safe to take a logarithm of.
    #[inline]
    pub fn uniform_positive(&mut self) -> f64 {
        1.0 - self.uniform()
    }

    pub fn uniform_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Uniform integer in `0..n`. `n` must be non-zero.
    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0, "below(0)");
        let n = n as u64;
        // Lemire's multiply-shift with rejection of the biased zone.
        let threshold = n.wrapping_neg() % n;
        loop {
            let m = (self.next_u64() as u128) * (n as u128);
            if (m as u64) >= threshold {
                return (m >> 64) as usize;
            }
        }
    }

    /// Standard normal via Box-Muller (one value per pair of uniforms).
    pub fn standard_normal(&mut self) -> f64 {
        let u1 = self.uniform_positive();
        let u2 = self.uniform();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    /// Natural log of a Gamma(shape, 1) draw.
    ///
    /// Marsaglia-Tsang for `shape >= 1`; for `shape < 1` the usual boost
    /// `G(a) = G(a + 1) * U^(1/a)` is applied in log space so tiny shapes
    /// cannot underflow to zero.
    fn ln_gamma_draw(&mut self, shape: f64) -> f64 {
        if shape < 1.0 {
            let boosted = self.ln_gamma_draw(shape + 1.0);
            return boosted + self.uniform_positive().ln() / shape;
        }
        let d = shape - 1.0 / 3.0;
        let c = 1.0 / (9.0 * d).sqrt();
        loop {
            let x = self.standard_normal();
            let v = 1.0 + c * x;
            if v <= 0.0 {
                continue;
            }
            let v = v * v * v;
            let u = self.uniform_positive();
            let x2 = x * x;
            if u < 1.0 - 0.0331 * x2 * x2 || u.ln() < 0.5 * x2 + d * (1.0 - v + v.ln()) {
                return d.ln() + v.ln();
            }
        }
    }

    pub fn gamma(&mut self, shape: f64) -> f64 {
        self.ln_gamma_draw(shape).exp()
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 0.0 {
        Ok(())
    } else {
        Err(Error::param(format!("alpha must be finite and > 0, got {alpha}")))
    }
}

/// Draw `λ ~ Beta(α, α)` as `g1 / (g1 + g2)` with `g1, g2 ~ Gamma(α, 1)`.
pub fn sample_beta(rng: &mut SeededRng, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let lg1 = rng.ln_gamma_draw(alpha);
    let lg2 = rng.ln_gamma_draw(alpha);
    // g1/(g1+g2) = 1/(1 + exp(lg2 - lg1)), stable for any magnitude.
    let lam = 1.0 / (1.0 + (lg2 - lg1).exp());
    Ok(lam.clamp(0.0, 1.0))
}

/// Draw `w ~ Dirichlet(α, …, α)` with `k` components.
pub fn sample_dirichlet(rng: &mut SeededRng, alpha: f64, k: usize) -> Result<Vec<f64>> {
    check_alpha(alpha)?;
    if k == 0 {
        return Err(Error::param("Dirichlet needs at least one component"));
    }
    if k == 1 {
        return Ok(vec![1.0]);
    }
    let logs: Vec<f64> = (0..k).map(|_| rng.ln_gamma_draw(alpha)).collect();
    let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut w: Vec<f64> = logs.iter().map(|l| (l - max).exp()).collect();
    let total: f64 = w.iter().sum();
    for v in &mut w {
        *v /= total;
    }
    Ok(w)
}
