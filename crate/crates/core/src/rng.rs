//! Seeded random configurations.
//!
//! Generator: SplitMix64 seeded with the 64-bit seed. Cell `k` takes bit
//! `k % 64` (least significant first) of output word `k / 64`. The mapping
//! is fixed so random starts are reproducible across platforms.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::engine::LatticeState;
use crate::error::Result;
use crate::machine::State;

pub fn random_lattice(width: usize, seed: u64) -> Result<LatticeState> {
    let mut rng = SplitMix64::seed_from_u64(seed);
    let mut cells = Vec::with_capacity(width);
    let mut word = 0u64;
    for k in 0..width {
        if k % 64 == 0 {
            word = rng.next_u64();
        }
        cells.push(State::from_bit((word >> (k % 64)) & 1 == 1));
    }
    LatticeState::new(cells)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_lattice() {
        assert_eq!(
            random_lattice(200, 7).unwrap(),
            random_lattice(200, 7).unwrap()
        );
        assert_ne!(
            random_lattice(200, 7).unwrap(),
            random_lattice(200, 8).unwrap()
        );
    }

    #[test]
    fn roughly_balanced() {
        let l = random_lattice(4096, 1).unwrap();
        let ones = l.count_s1();
        assert!((1800..2300).contains(&ones), "{ones}");
    }

    #[test]
    fn empty_is_error() {
        assert!(random_lattice(0, 1).is_err());
    }
}
