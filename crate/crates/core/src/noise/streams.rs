//! Counter-based random streams.
//!
//! Every draw is addressed by (seed, path, domain, step, mode), so ensembles
//! are reproducible and parallelizable independently of scheduling. Draws use
//! ChaCha8 positioned at a fixed word offset per cell; each cell holds 16
//! 32-bit words and Box-Muller consumes exactly one u64 per normal, so a cell
//! accommodates up to 8 normals without spilling into its neighbour.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const WORDS_PER_CELL: u128 = 16;
const MODE_CAPACITY: u64 = 4096;

/// Draw domains keep unrelated consumers of the same (path, step, mode)
/// address from sharing randomness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    /// Initial-data sampling (white noise fields).
    Init,
    /// Brownian increments and matched convolution residuals.
    Step,
    /// Brownian-bridge refinement draws at a given split level.
    Bridge(u8),
}

impl Domain {
    fn index(self) -> u64 {
        match self {
            Domain::Init => 0,
            Domain::Step => 1,
            Domain::Bridge(level) => 2 + level as u64,
        }
    }
}

/// Root of all randomness for one experiment.
#[derive(Debug, Clone)]
pub struct NoiseStreams {
    key: [u8; 32],
}

impl NoiseStreams {
    pub fn new(seed: u64) -> Self {
        // Expand the 64-bit seed into a 256-bit ChaCha key via splitmix64.
        let mut key = [0u8; 32];
        let mut state = seed;
        for chunk in key.chunks_mut(8) {
            state = state.wrapping_add(0x9e3779b97f4a7c15);
            let mut z = state;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
            z ^= z >> 31;
            chunk.copy_from_slice(&z.to_le_bytes());
        }
        Self { key }
    }

    /// RNG positioned at the cell for (path, domain, step, mode).
    /// `mode` is the 1-based Fourier mode index.
    pub fn cell_rng(&self, path: u64, domain: Domain, step: u64, mode: usize) -> ChaCha8Rng {
        assert!((mode as u64) < MODE_CAPACITY, "mode index exceeds stream capacity");
        assert!(step < (1 << 44), "step index exceeds stream capacity");
        let cell = (domain.index() << 56) | (step * MODE_CAPACITY + mode as u64);
        let mut rng = ChaCha8Rng::from_seed(self.key);
        rng.set_stream(path);
        rng.set_word_pos(cell as u128 * WORDS_PER_CELL);
        rng
    }
}

/// Two independent standard normals from one RNG (Box-Muller; fixed
/// consumption of exactly two u64 draws).
pub fn normal_pair(rng: &mut impl Rng) -> (f64, f64) {
    // Uniform in (0, 1]: the +1 keeps ln() finite.
    let u1 = ((rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64);
    let u2 = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
    let r = (-2.0 * u1.ln()).sqrt();
    let theta = 2.0 * std::f64::consts::PI * u2;
    (r * theta.cos(), r * theta.sin())
}
