use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::dense::CMatrix;
use crate::error::{Error, Result};
use crate::scalar::C64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DistributionRole {
    SignsOffDiagonal,
    SignsDiagonal,
}

/// Seeded Bernoulli sign source. Draw `c` is a pure function of `(seed, role, substream, c)`:
/// the ChaCha keystream is addressed directly, so draws can be taken in any order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RandomEnsemble {
    pub seed: u64,
    pub bernoulli_p: f64,
    pub distribution_role: DistributionRole,
    pub substream: u32,
}

impl RandomEnsemble {
    pub fn new(seed: u64, bernoulli_p: f64, distribution_role: DistributionRole) -> Result<Self> {
        if !(0.0..=1.0).contains(&bernoulli_p) {
            return Err(Error::InvalidInput(format!("bernoulli p = {bernoulli_p} outside [0, 1]")));
        }
        Ok(RandomEnsemble { seed, bernoulli_p, distribution_role, substream: 0 })
    }

    pub fn with_substream(mut self, s: u32) -> Self {
        self.substream = s;
        self
    }

    fn stream(&self) -> u64 {
        let role = match self.distribution_role {
            DistributionRole::SignsOffDiagonal => 1u64,
            DistributionRole::SignsDiagonal => 2u64,
        };
        (role << 32) | self.substream as u64
    }

    /// Raw 64-bit draw number `counter`.
    pub fn draw(&self, counter: u64) -> u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream());
        rng.set_word_pos(2 * counter as u128);
        rng.next_u64()
    }

    pub fn uniform(&self, counter: u64) -> f64 {
        (self.draw(counter) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// `+1` with probability `p`, else `-1`.
    pub fn sign(&self, counter: u64) -> f64 {
        if self.uniform(counter) < self.bernoulli_p {
            1.0
        } else {
            -1.0
        }
    }

    /// Sign attached to a site of `Z`; uses the folded index as counter.
    pub fn sign_z(&self, z: i64) -> f64 {
        self.sign(crate::operator::fold::fold_z_to_n(z) as u64)
    }
}

pub fn sample_bernoulli_signs(ensemble: &RandomEnsemble, count: usize) -> Vec<f64> {
    (0..count as u64).map(|c| ensemble.sign(c)).collect()
}

/// Complex Ginibre matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre(seed: u64, n: usize) -> CMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(7);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_fn(n, n, |_, _| {
        let a: f64 = StandardNormal.sample(&mut rng);
        let b: f64 = StandardNormal.sample(&mut rng);
        C64::new(a * s, b * s)
    })
}

/// Sequential ChaCha generator for test fixtures and random operator families.
pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
