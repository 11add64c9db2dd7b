//! Seeded Bernoulli reward generation.
//!
//! Streams are drawn from ChaCha8, a counter-based generator with a public
//! specification, so recorded reward sequences are reproducible across
//! platforms and releases. Each run derives its own stream from
//! `(seed, run_index)`: the 256-bit key comes from `seed` (SplitMix64
//! expansion, the standard `seed_from_u64` path) and `run_index` selects
//! the ChaCha stream counter, giving 2⁶⁴ mutually independent streams per
//! seed.
//!
//! A pull of arm `i` compares one 53-bit uniform draw `u ∈ [0, 1)` against
//! `μ_i` and pays 1 iff `u < μ_i`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::instance::BanditInstance;
use crate::Real;

/// Errors from the reward environment.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EnvError {
    #[error("arm index {arm} out of range for {arms} arms")]
    ArmOutOfRange { arm: usize, arms: usize },
}

/// Anything a run can pull rewards from. `arm` must be in range; the run
/// loop only passes indices it obtained from the instance.
pub trait RewardSource {
    fn draw(&mut self, arm: usize) -> u8;
}

/// Bernoulli rewards for one instance, owned by a single run.
#[derive(Debug, Clone)]
pub struct BernoulliEnv {
    means: Vec<Real>,
    rng: ChaCha8Rng,
    pulls: u64,
}

impl BernoulliEnv {
    /// Environment for run `run_index` of a batch seeded with `seed`.
    /// Identical `(seed, run_index)` always reproduces the same rewards.
    pub fn new(instance: &BanditInstance, seed: u64, run_index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(run_index);
        Self {
            means: instance.means().to_vec(),
            rng,
            pulls: 0,
        }
    }

    /// Draws one reward from `arm`.
    pub fn pull(&mut self, arm: usize) -> Result<u8, EnvError> {
        let &mean = self.means.get(arm).ok_or(EnvError::ArmOutOfRange {
            arm,
            arms: self.means.len(),
        })?;
        self.pulls += 1;
        let u: Real = self.rng.gen();
        Ok(u8::from(u < mean))
    }

    /// Total rewards drawn so far.
    pub fn pulls(&self) -> u64 {
        self.pulls
    }
}

impl RewardSource for BernoulliEnv {
    fn draw(&mut self, arm: usize) -> u8 {
        self.pull(arm).expect("run loop only draws valid arms")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn instance(means: Vec<Real>) -> BanditInstance {
        BanditInstance::new("env-test", 0.5, means).unwrap()
    }

    #[test]
    fn same_seed_and_run_give_identical_streams() {
        let inst = instance(vec![0.3, 0.7]);
        let mut a = BernoulliEnv::new(&inst, 42, 3);
        let mut b = BernoulliEnv::new(&inst, 42, 3);
        for i in 0..1_000_000u32 {
            let arm = (i % 2) as usize;
            assert_eq!(a.draw(arm), b.draw(arm), "diverged at pull {i}");
        }
        assert_eq!(a.pulls(), 1_000_000);
    }

    #[test]
    fn run_indices_select_distinct_streams() {
        let inst = instance(vec![0.5]);
        let mut a = BernoulliEnv::new(&inst, 42, 0);
        let mut b = BernoulliEnv::new(&inst, 42, 1);
        let first_a: Vec<u8> = (0..100).map(|_| a.draw(0)).collect();
        let first_b: Vec<u8> = (0..100).map(|_| b.draw(0)).collect();
        assert_ne!(first_a, first_b);
    }

    #[test]
    fn golden_stream_is_stable() {
        // First 32 rewards of (seed 7, run 0) and (seed 7, run 1) on a fair
        // arm, recorded once. Guards the seed-derivation scheme against
        // accidental change; ChaCha8 itself is a fixed public algorithm.
        let inst = instance(vec![0.5]);
        let mut env = BernoulliEnv::new(&inst, 7, 0);
        let got: Vec<u8> = (0..32).map(|_| env.draw(0)).collect();
        let want = [
            1u8, 1, 0, 0, 0, 1, 1, 0, 1, 0, 1, 1, 0, 1, 1, 0, 1, 1, 1, 1, 1, 0, 1, 1, 1, 1, 0, 1,
            1, 0, 0, 1,
        ];
        assert_eq!(got, want);

        let mut env = BernoulliEnv::new(&inst, 7, 1);
        let got: Vec<u8> = (0..32).map(|_| env.draw(0)).collect();
        let want = [
            0u8, 1, 0, 0, 1, 0, 0, 0, 0, 0, 1, 1, 1, 0, 1, 0, 0, 0, 1, 0, 1, 1, 0, 1, 0, 0, 0, 1,
            0, 1, 0, 1,
        ];
        assert_eq!(got, want);
    }

    #[test]
    fn degenerate_means_are_deterministic() {
        let inst = BanditInstance::new("deg", 0.5, vec![0.0, 1.0]).unwrap();
        let mut env = BernoulliEnv::new(&inst, 1, 0);
        for _ in 0..10_000 {
            assert_eq!(env.draw(0), 0);
            assert_eq!(env.draw(1), 1);
        }
    }

    #[test]
    fn fair_arm_concentrates_at_half() {
        let inst = instance(vec![0.5]);
        let mut env = BernoulliEnv::new(&inst, 123, 0);
        let n = 1_000_000u64;
        let sum: u64 = (0..n).map(|_| u64::from(env.draw(0))).sum();
        let mean = sum as f64 / n as f64;
        assert!((mean - 0.5).abs() < 0.002, "mean {mean}");
    }

    #[test]
    fn empirical_means_track_truth_within_four_sigma() {
        for (i, &mu) in [0.007, 0.1, 0.25, 0.9].iter().enumerate() {
            let inst = instance(vec![mu]);
            let mut env = BernoulliEnv::new(&inst, 99, i as u64);
            let n = 200_000u64;
            let sum: u64 = (0..n).map(|_| u64::from(env.draw(0))).sum();
            let mean = sum as f64 / n as f64;
            let tol = 4.0 * (mu * (1.0 - mu) / n as f64).sqrt();
            assert!((mean - mu).abs() <= tol, "mu={mu} mean={mean} tol={tol}");
        }
    }

    #[test]
    fn out_of_range_arm_is_an_error() {
        let inst = instance(vec![0.5]);
        let mut env = BernoulliEnv::new(&inst, 1, 0);
        assert_eq!(
            env.pull(1),
            Err(EnvError::ArmOutOfRange { arm: 1, arms: 1 })
        );
    }

    #[test]
    fn envs_do_not_share_state() {
        let inst = instance(vec![0.5]);
        let mut a = BernoulliEnv::new(&inst, 5, 0);
        let expected: Vec<u8> = (0..64).map(|_| a.draw(0)).collect();
        // Interleave a second env; `a`'s replay must be unaffected.
        let mut a2 = BernoulliEnv::new(&inst, 5, 0);
        let mut other = BernoulliEnv::new(&inst, 6, 0);
        let replay: Vec<u8> = (0..64)
            .map(|_| {
                other.draw(0);
                a2.draw(0)
            })
            .collect();
        assert_eq!(expected, replay);
    }
}
