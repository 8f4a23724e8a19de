//! Seeded generators of exact sample data.
//!
//! Coordinates come from a dyadic lattice `k / 2^bits`, so evaluations stay
//! exact and small. Group elements are products of elementary matrices.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::linalg::Matrix;
use crate::scalar::{q, Rational};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub seed: u64,
    #[serde(default = "default_count")]
    pub count: usize,
    /// Coordinates lie in `[-half_width, half_width]`.
    #[serde(default = "default_half_width")]
    pub half_width: i64,
    #[serde(default = "default_bits")]
    pub denominator_bits: u32,
}

fn default_count() -> usize {
    100
}
fn default_half_width() -> i64 {
    4
}
fn default_bits() -> u32 {
    3
}

impl SamplerConfig {
    pub fn new(seed: u64) -> Self {
        SamplerConfig {
            seed,
            count: default_count(),
            half_width: default_half_width(),
            denominator_bits: default_bits(),
        }
    }
}

pub struct Sampler {
    rng: ChaCha8Rng,
    half_width: i64,
    bits: u32,
}

impl Sampler {
    pub fn new(cfg: &SamplerConfig) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
            half_width: cfg.half_width.max(1),
            bits: cfg.denominator_bits.min(30),
        }
    }

    pub fn seeded(seed: u64) -> Self {
        Sampler::new(&SamplerConfig::new(seed))
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.random_range(lo..=hi)
    }

    /// Uniform lattice point `k / 2^bits` in the configured box.
    pub fn rational(&mut self) -> Rational {
        let den = 1i64 << self.bits;
        let k = self
            .rng
            .random_range(-self.half_width * den..=self.half_width * den);
        Rational::new(BigInt::from(k), BigInt::from(den))
    }

    pub fn nonzero_rational(&mut self) -> Rational {
        loop {
            let r = self.rational();
            if r != q(0) {
                return r;
            }
        }
    }

    pub fn point(&mut self, n: usize) -> Vec<Rational> {
        (0..n).map(|_| self.rational()).collect()
    }

    /// Rational point on the unit circle via `t ↦ ((1-t²)/(1+t²), 2t/(1+t²))`.
    pub fn unit_circle(&mut self) -> (Rational, Rational) {
        let t = self.rational();
        let one = q(1);
        let d = &one + &t * &t;
        ((&one - &t * &t) / &d, (q(2) * &t) / &d)
    }

    /// Exact element of SL(2,ℚ) as a product of `factors` elementary
    /// matrices: shears `[[1,s],[0,1]]`, `[[1,0],[s,1]]` and dilations
    /// `diag(d, 1/d)`.
    pub fn sl2(&mut self, factors: usize) -> Matrix<Rational> {
        let mut g = Matrix::identity(2);
        for _ in 0..factors {
            let e = match self.rng.random_range(0..3) {
                0 => {
                    let mut e = Matrix::identity(2);
                    e[(0, 1)] = self.rational();
                    e
                }
                1 => {
                    let mut e = Matrix::identity(2);
                    e[(1, 0)] = self.rational();
                    e
                }
                _ => {
                    let d = self.nonzero_rational();
                    let mut e = Matrix::zeros(2, 2);
                    e[(1, 1)] = q(1) / &d;
                    e[(0, 0)] = d;
                    e
                }
            };
            g = g.mul(&e).expect("2x2");
        }
        g
    }

    /// Rotation by a rational point on the unit circle.
    pub fn so2(&mut self) -> Matrix<Rational> {
        let (c, s) = self.unit_circle();
        Matrix::from_rows(vec![vec![c.clone(), -s.clone()], vec![s, c]]).expect("2x2")
    }
}
