//! Fixed-width binary genomes and their fixed-point decoding.
//!
//! A genome is one row of the 40 x 200 search space: ten variables of
//! twenty bits each. Bit `j` of variable `v` sits at column `20 * v + j`,
//! with `j = 0` the most significant bit of the variable's code. Codes use
//! plain (not Gray) binary and decode onto `[lo, hi]` with both endpoints
//! attainable.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Bits per encoded variable.
pub const BITS_PER_VARIABLE: usize = 20;
/// Variables per genome.
pub const VARIABLES: usize = 10;
/// Total genome length in bits.
pub const GENOME_BITS: usize = BITS_PER_VARIABLE * VARIABLES;
/// Largest code a variable can hold, `2^20 - 1`.
pub const MAX_CODE: u32 = (1 << BITS_PER_VARIABLE) - 1;

/// Closed interval every variable of a benchmark is decoded onto.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    lo: f64,
    hi: f64,
}

impl Bounds {
    pub fn new(lo: f64, hi: f64) -> Result<Self, Error> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidParameter(format!(
                "bounds require finite lo < hi, got [{lo}, {hi}]"
            )));
        }
        Ok(Bounds { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    /// Distance between two adjacent codes.
    pub fn step(&self) -> f64 {
        (self.hi - self.lo) / MAX_CODE as f64
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// Maps a 20-bit code onto the interval.
    pub fn decode_code(&self, code: u32) -> f64 {
        debug_assert!(code <= MAX_CODE);
        if code == MAX_CODE {
            return self.hi;
        }
        self.lo + (code as f64 / MAX_CODE as f64) * (self.hi - self.lo)
    }
}

/// A 200-bit genome, stored as ten 20-bit variable codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Genome {
    codes: [u32; VARIABLES],
}

impl Genome {
    pub fn zeros() -> Self {
        Genome {
            codes: [0; VARIABLES],
        }
    }

    pub fn ones() -> Self {
        Genome {
            codes: [MAX_CODE; VARIABLES],
        }
    }

    /// Builds a genome from per-variable codes. Panics if any code exceeds 20 bits.
    pub fn from_codes(codes: [u32; VARIABLES]) -> Self {
        assert!(
            codes.iter().all(|&c| c <= MAX_CODE),
            "variable code exceeds {BITS_PER_VARIABLE} bits"
        );
        Genome { codes }
    }

    /// Builds a genome from exactly 200 bits in column order.
    pub fn from_bits(bits: &[bool]) -> Self {
        assert_eq!(
            bits.len(),
            GENOME_BITS,
            "genome must have {GENOME_BITS} bits"
        );
        let mut codes = [0u32; VARIABLES];
        for (code, segment) in codes.iter_mut().zip(bits.chunks(BITS_PER_VARIABLE)) {
            *code = segment_to_code(segment);
        }
        Genome { codes }
    }

    pub fn codes(&self) -> &[u32; VARIABLES] {
        &self.codes
    }

    pub fn bit(&self, index: usize) -> bool {
        let (var, shift) = locate(index);
        (self.codes[var] >> shift) & 1 == 1
    }

    pub fn set_bit(&mut self, index: usize, value: bool) {
        let (var, shift) = locate(index);
        if value {
            self.codes[var] |= 1 << shift;
        } else {
            self.codes[var] &= !(1 << shift);
        }
    }

    pub fn flip(&mut self, index: usize) {
        let (var, shift) = locate(index);
        self.codes[var] ^= 1 << shift;
    }

    pub fn bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..GENOME_BITS).map(move |i| self.bit(i))
    }

    pub fn count_ones(&self) -> u32 {
        self.codes.iter().map(|c| c.count_ones()).sum()
    }

    /// Number of columns in which the two genomes differ.
    pub fn hamming(&self, other: &Genome) -> u32 {
        self.codes
            .iter()
            .zip(other.codes.iter())
            .map(|(a, b)| (a ^ b).count_ones())
            .sum()
    }

    /// The segment of bits for one variable, most significant first.
    pub fn segment(&self, var: usize) -> [bool; BITS_PER_VARIABLE] {
        let mut out = [false; BITS_PER_VARIABLE];
        for (j, bit) in out.iter_mut().enumerate() {
            *bit = (self.codes[var] >> (BITS_PER_VARIABLE - 1 - j)) & 1 == 1;
        }
        out
    }
}

fn locate(index: usize) -> (usize, usize) {
    assert!(index < GENOME_BITS, "bit index {index} out of range");
    (
        index / BITS_PER_VARIABLE,
        BITS_PER_VARIABLE - 1 - index % BITS_PER_VARIABLE,
    )
}

fn segment_to_code(segment: &[bool]) -> u32 {
    segment.iter().fold(0u32, |acc, &b| (acc << 1) | b as u32)
}

impl fmt::Display for Genome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.bits() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Genome {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.len() != GENOME_BITS {
            return Err(Error::InvalidParameter(format!(
                "genome text must have {GENOME_BITS} characters, got {}",
                s.len()
            )));
        }
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidParameter(format!(
                    "genome text may only contain '0' or '1', found {other:?}"
                ))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Genome::from_bits(&bits))
    }
}

impl Serialize for Genome {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Genome {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Decodes a 20-bit segment (most significant bit first) onto `bounds`.
///
/// Panics if the segment is not exactly 20 bits long.
pub fn decode_variable(segment: &[bool], bounds: Bounds) -> f64 {
    assert_eq!(
        segment.len(),
        BITS_PER_VARIABLE,
        "segment must have {BITS_PER_VARIABLE} bits"
    );
    bounds.decode_code(segment_to_code(segment))
}

/// Decodes all ten variables of a genome.
pub fn decode_genome(genome: &Genome, bounds: Bounds) -> Vec<f64> {
    genome
        .codes
        .iter()
        .map(|&c| bounds.decode_code(c))
        .collect()
}

/// Draws a genome whose bits are independent fair coin flips.
pub fn random_genome<R: Rng + ?Sized>(rng: &mut R) -> Genome {
    let mut codes = [0u32; VARIABLES];
    for code in codes.iter_mut() {
        *code = rng.gen::<u32>() & MAX_CODE;
    }
    Genome { codes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn b(lo: f64, hi: f64) -> Bounds {
        Bounds::new(lo, hi).unwrap()
    }

    #[test]
    fn endpoints_decode_exactly() {
        let bounds = b(-100.0, 100.0);
        assert_eq!(decode_variable(&[false; 20], bounds), -100.0);
        assert_eq!(decode_variable(&[true; 20], bounds), 100.0);
    }

    #[test]
    fn msb_only_segment() {
        let mut seg = [false; 20];
        seg[0] = true;
        // -100 + 524288/1048575 * 200 = 100/1048575 exactly.
        let expected = 100.0 / 1_048_575.0;
        let got = decode_variable(&seg, b(-100.0, 100.0));
        assert!((got - expected).abs() < 1e-12, "{got}");
        assert!((got - 9.5367e-5).abs() < 1e-9);
    }

    #[test]
    #[should_panic]
    fn short_segment_is_a_contract_violation() {
        decode_variable(&[true; 19], b(0.0, 1.0));
    }

    #[test]
    fn rejects_inverted_bounds() {
        assert!(Bounds::new(1.0, 1.0).is_err());
        assert!(Bounds::new(2.0, 1.0).is_err());
        assert!(Bounds::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn whole_genome_decodes() {
        assert_eq!(decode_genome(&Genome::zeros(), b(0.0, 6.0)), vec![0.0; 10]);
        assert_eq!(
            decode_genome(&Genome::ones(), b(-5.12, 5.12)),
            vec![5.12; 10]
        );
        let half = Genome::from_codes([1 << 19; 10]);
        for x in decode_genome(&half, b(-100.0, 100.0)) {
            assert!((x - 100.0 / 1_048_575.0).abs() < 1e-12);
        }
    }

    #[test]
    fn bit_layout_is_msb_first_per_variable() {
        let mut g = Genome::zeros();
        g.set_bit(0, true);
        assert_eq!(g.codes()[0], 1 << 19);
        g.set_bit(39, true);
        assert_eq!(g.codes()[1], 1);
        assert!(g.bit(39));
        g.flip(39);
        assert!(!g.bit(39));
    }

    #[test]
    fn text_form() {
        let mut g = Genome::zeros();
        g.set_bit(0, true);
        g.set_bit(199, true);
        let s = g.to_string();
        assert_eq!(s.len(), 200);
        assert!(s.starts_with("10"));
        assert!(s.ends_with("01"));
        assert_eq!(s.parse::<Genome>().unwrap(), g);
        assert!("01".parse::<Genome>().is_err());
        assert!("2".repeat(200).parse::<Genome>().is_err());
    }

    #[test]
    fn random_genome_is_seeded() {
        let a = random_genome(&mut ChaCha8Rng::seed_from_u64(7));
        let b = random_genome(&mut ChaCha8Rng::seed_from_u64(7));
        assert_eq!(a, b);
        let c = random_genome(&mut ChaCha8Rng::seed_from_u64(8));
        assert_ne!(a, c);
    }

    #[test]
    fn random_bits_are_fair() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 10_000;
        let ones: u64 = (0..n)
            .map(|_| random_genome(&mut rng).count_ones() as u64)
            .sum();
        let mean = ones as f64 / (n as f64 * GENOME_BITS as f64);
        assert!((0.48..=0.52).contains(&mean), "{mean}");
    }
}
