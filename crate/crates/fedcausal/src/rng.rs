//! Deterministic seed derivation: one master seed fans out into named,
//! independent substreams.
//!
//! Every trial owns one observation stream per agent plus one participation
//! stream, derived from `(master_seed, replica, kind, index)`. Results are
//! therefore independent of agent iteration order and of how replicas are
//! scheduled across threads.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

const KIND_OBSERVATION: u64 = 0x4f42_5345_5256_4531;
const KIND_PARTICIPATION: u64 = 0x5041_5254_4943_4950;

/// SplitMix64 finalizer; decorrelates structured seed words.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn substream_seed(master: u64, replica: u64, kind: u64, index: u64) -> [u8; 32] {
    let w0 = mix64(master ^ 0x9E37_79B9_7F4A_7C15);
    let w1 = mix64(w0 ^ replica.wrapping_mul(0xD134_2543_DE82_EF95));
    let w2 = mix64(w1 ^ kind);
    let w3 = mix64(w2 ^ index.wrapping_mul(0xA076_1D64_78BD_642F));
    let mut seed = [0u8; 32];
    seed[0..8].copy_from_slice(&w0.to_le_bytes());
    seed[8..16].copy_from_slice(&w1.to_le_bytes());
    seed[16..24].copy_from_slice(&w2.to_le_bytes());
    seed[24..32].copy_from_slice(&w3.to_le_bytes());
    seed
}

/// All random state owned by one trial.
#[derive(Debug, Clone)]
pub struct TrialRng {
    observation: Vec<ChaCha12Rng>,
    participation: ChaCha12Rng,
}

impl TrialRng {
    pub fn for_replica(master_seed: u64, replica: u64, agent_count: usize) -> Self {
        let observation = (0..agent_count)
            .map(|k| {
                ChaCha12Rng::from_seed(substream_seed(
                    master_seed,
                    replica,
                    KIND_OBSERVATION,
                    k as u64,
                ))
            })
            .collect();
        let participation =
            ChaCha12Rng::from_seed(substream_seed(master_seed, replica, KIND_PARTICIPATION, 0));
        Self {
            observation,
            participation,
        }
    }

    /// Observation stream of one agent.
    pub fn observation(&mut self, agent: usize) -> &mut ChaCha12Rng {
        &mut self.observation[agent]
    }

    pub fn participation(&mut self) -> &mut ChaCha12Rng {
        &mut self.participation
    }

    pub fn agent_count(&self) -> usize {
        self.observation.len()
    }
}
