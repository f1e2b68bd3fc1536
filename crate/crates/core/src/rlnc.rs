//! Generation-based random linear network coding: encoding fresh combinations
//! at sources, incremental decoding with innovation detection at sinks, and
//! the bit-exact 13-byte on-air header.

use rand::Rng;
use thiserror::Error;

use crate::gf256::{gf_inv, gf_mul, FieldElement};

pub const GENERATION_COUNT: usize = 16;
pub const GENERATION_SIZE: usize = 12;
pub const HEADER_LEN: usize = 13;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RlncError {
    #[error("generation id {0} out of range")]
    BadGeneration(usize),
    #[error("insufficient rank: generation {gen_id} has rank {rank} of {GENERATION_SIZE}")]
    InsufficientRank { gen_id: usize, rank: usize },
    #[error("header buffer too short: {0} bytes, need {HEADER_LEN}")]
    ShortHeader(usize),
    #[error("payload length mismatch: expected {expected}, got {got}")]
    PayloadLength { expected: usize, got: usize },
}

/// One block of 12 equal-length source packets coded together.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generation {
    pub gen_id: usize,
    pub packets: Vec<Vec<u8>>,
}

impl Generation {
    pub fn new(gen_id: usize, packets: Vec<Vec<u8>>) -> Result<Self, RlncError> {
        if gen_id >= GENERATION_COUNT {
            return Err(RlncError::BadGeneration(gen_id));
        }
        assert_eq!(packets.len(), GENERATION_SIZE, "generation must hold 12 packets");
        let len = packets[0].len();
        for p in &packets {
            if p.len() != len {
                return Err(RlncError::PayloadLength {
                    expected: len,
                    got: p.len(),
                });
            }
        }
        Ok(Generation { gen_id, packets })
    }

    /// Random payload data, used to populate the 16-generation data set.
    pub fn random<R: Rng>(gen_id: usize, payload_len: usize, rng: &mut R) -> Self {
        let packets = (0..GENERATION_SIZE)
            .map(|_| (0..payload_len).map(|_| rng.gen()).collect())
            .collect();
        Generation { gen_id, packets }
    }

    pub fn payload_len(&self) -> usize {
        self.packets[0].len()
    }
}

/// The on-air unit: generation metadata, coefficient vector and coded payload.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodedPacket {
    pub gen_id: usize,
    pub gen_size: usize,
    pub coeffs: [u8; GENERATION_SIZE],
    pub payload: Vec<u8>,
}

/// Draws uniform coefficients and emits the matching linear combination.
/// An all-zero draw is allowed; it simply tests non-innovative at sinks.
pub fn encode<R: Rng>(gen: &Generation, rng: &mut R) -> CodedPacket {
    let mut coeffs = [0u8; GENERATION_SIZE];
    rng.fill(&mut coeffs[..]);
    encode_with_coeffs(gen, coeffs)
}

pub fn encode_with_coeffs(gen: &Generation, coeffs: [u8; GENERATION_SIZE]) -> CodedPacket {
    let len = gen.payload_len();
    let mut payload = vec![0u8; len];
    for (c, packet) in coeffs.iter().zip(&gen.packets) {
        let c = FieldElement(*c);
        if c.is_zero() {
            continue;
        }
        for (out, &b) in payload.iter_mut().zip(packet) {
            *out ^= gf_mul(c, FieldElement(b)).0;
        }
    }
    CodedPacket {
        gen_id: gen.gen_id,
        gen_size: GENERATION_SIZE,
        coeffs,
        payload,
    }
}

/// Byte 0 packs (gen_size - 1) in the high nibble and gen_id in the low
/// nibble; bytes 1..=12 carry the coefficient vector in packet-index order.
pub fn write_header(p: &CodedPacket) -> [u8; HEADER_LEN] {
    debug_assert!((1..=16).contains(&p.gen_size));
    debug_assert!(p.gen_id < GENERATION_COUNT);
    let mut out = [0u8; HEADER_LEN];
    out[0] = (((p.gen_size - 1) as u8) << 4) | (p.gen_id as u8);
    out[1..].copy_from_slice(&p.coeffs);
    out
}

pub fn read_header(bytes: &[u8]) -> Result<(usize, usize, [u8; GENERATION_SIZE]), RlncError> {
    if bytes.len() < HEADER_LEN {
        return Err(RlncError::ShortHeader(bytes.len()));
    }
    let gen_size = (bytes[0] >> 4) as usize + 1;
    let gen_id = (bytes[0] & 0x0F) as usize;
    let mut coeffs = [0u8; GENERATION_SIZE];
    coeffs.copy_from_slice(&bytes[1..HEADER_LEN]);
    Ok((gen_id, gen_size, coeffs))
}

/// Per-generation reduced row echelon form: `rows[i]` has a leading 1 at
/// `pivots[i]` and zeros in every other pivot column, so at rank 12 the
/// coefficient matrix is the identity and the payload rows are the originals.
#[derive(Debug, Clone, Default)]
struct GenDecoder {
    pivots: Vec<usize>,
    rows: Vec<[u8; GENERATION_SIZE]>,
    payloads: Vec<Vec<u8>>,
}

impl GenDecoder {
    fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `coeffs` (and `payload`, when present) against the stored
    /// rows. Returns the pivot column of the residue, or None if it vanishes.
    fn reduce(&self, coeffs: &mut [u8; GENERATION_SIZE], payload: Option<&mut Vec<u8>>) -> Option<usize> {
        let mut payload = payload;
        for (row, (&pivot, stored)) in self.pivots.iter().zip(&self.rows).enumerate() {
            let factor = FieldElement(coeffs[pivot]);
            if factor.is_zero() {
                continue;
            }
            for (c, &s) in coeffs.iter_mut().zip(stored.iter()) {
                *c ^= gf_mul(factor, FieldElement(s)).0;
            }
            if let Some(p) = payload.as_deref_mut() {
                for (b, &s) in p.iter_mut().zip(&self.payloads[row]) {
                    *b ^= gf_mul(factor, FieldElement(s)).0;
                }
            }
        }
        coeffs.iter().position(|&c| c != 0)
    }

    fn insert(&mut self, p: &CodedPacket) -> bool {
        let mut coeffs = p.coeffs;
        let mut payload = p.payload.clone();
        let Some(pivot) = self.reduce(&mut coeffs, Some(&mut payload)) else {
            return false;
        };

        // normalize the new row to a leading 1
        let inv = gf_inv(FieldElement(coeffs[pivot])).expect("pivot is nonzero");
        for c in coeffs.iter_mut() {
            *c = gf_mul(inv, FieldElement(*c)).0;
        }
        for b in payload.iter_mut() {
            *b = gf_mul(inv, FieldElement(*b)).0;
        }

        // clear the new pivot column from the stored rows
        for (row, stored) in self.rows.iter_mut().enumerate() {
            let factor = FieldElement(stored[pivot]);
            if factor.is_zero() {
                continue;
            }
            for (s, &c) in stored.iter_mut().zip(&coeffs) {
                *s ^= gf_mul(factor, FieldElement(c)).0;
            }
            for (b, &nb) in self.payloads[row].iter_mut().zip(&payload) {
                *b ^= gf_mul(factor, FieldElement(nb)).0;
            }
        }

        // keep rows ordered by pivot column
        let at = self.pivots.partition_point(|&p| p < pivot);
        self.pivots.insert(at, pivot);
        self.rows.insert(at, coeffs);
        self.payloads.insert(at, payload);
        true
    }
}

/// A sink's decoding state across all 16 generations.
#[derive(Debug, Clone)]
pub struct DecoderState {
    generations: Vec<GenDecoder>,
}

impl Default for DecoderState {
    fn default() -> Self {
        Self::new()
    }
}

impl DecoderState {
    pub fn new() -> Self {
        DecoderState {
            generations: vec![GenDecoder::default(); GENERATION_COUNT],
        }
    }

    pub fn rank(&self, gen_id: usize) -> usize {
        self.generations[gen_id].rank()
    }

    pub fn decodable(&self, gen_id: usize) -> bool {
        self.rank(gen_id) == GENERATION_SIZE
    }

    pub fn complete(&self) -> bool {
        self.generations.iter().all(|g| g.rank() == GENERATION_SIZE)
    }

    pub fn total_rank(&self) -> usize {
        self.generations.iter().map(|g| g.rank()).sum()
    }

    /// True iff inserting `p` would raise the rank; state is untouched.
    pub fn is_innovative(&self, p: &CodedPacket) -> bool {
        let gen = &self.generations[p.gen_id];
        if gen.rank() == GENERATION_SIZE {
            return false;
        }
        let mut coeffs = p.coeffs;
        gen.reduce(&mut coeffs, None).is_some()
    }

    /// Stores the packet if innovative; returns whether rank increased.
    pub fn insert(&mut self, p: &CodedPacket) -> Result<bool, RlncError> {
        if p.gen_id >= GENERATION_COUNT {
            return Err(RlncError::BadGeneration(p.gen_id));
        }
        Ok(self.generations[p.gen_id].insert(p))
    }

    /// Returns the 12 original packets of a fully ranked generation.
    pub fn decode(&self, gen_id: usize) -> Result<Vec<Vec<u8>>, RlncError> {
        let gen = &self.generations[gen_id];
        if gen.rank() < GENERATION_SIZE {
            return Err(RlncError::InsufficientRank {
                gen_id,
                rank: gen.rank(),
            });
        }
        // RREF at full rank is the identity; rows are already pivot-ordered.
        Ok(gen.payloads.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf256::CoeffMatrix;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn unit_packet(gen: &Generation, index: usize) -> CodedPacket {
        let mut coeffs = [0u8; GENERATION_SIZE];
        coeffs[index] = 1;
        encode_with_coeffs(gen, coeffs)
    }

    #[test]
    fn encode_unit_vector_reproduces_packet() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let gen = Generation::random(0, 64, &mut rng);
        let p = unit_packet(&gen, 0);
        assert_eq!(p.payload, gen.packets[0]);
    }

    #[test]
    fn encode_zero_coeffs_gives_zero_payload() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let gen = Generation::random(3, 32, &mut rng);
        let p = encode_with_coeffs(&gen, [0u8; GENERATION_SIZE]);
        assert_eq!(p.payload, vec![0u8; 32]);
    }

    #[test]
    fn encode_matches_naive_combination() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let gen = Generation::random(5, 40, &mut rng);
        let p = encode(&gen, &mut rng);
        // recompute with a naive per-byte loop
        for j in 0..40 {
            let mut expect = 0u8;
            for i in 0..GENERATION_SIZE {
                expect ^= crate::gf256::gf_mul(
                    FieldElement(p.coeffs[i]),
                    FieldElement(gen.packets[i][j]),
                )
                .0;
            }
            assert_eq!(p.payload[j], expect);
        }
    }

    #[test]
    fn header_examples() {
        let p = CodedPacket {
            gen_id: 0,
            gen_size: 12,
            coeffs: [0u8; GENERATION_SIZE],
            payload: vec![],
        };
        let h = write_header(&p);
        assert_eq!(h[0], 0xB0);
        assert_eq!(&h[1..], &[0u8; 12]);

        let p15 = CodedPacket { gen_id: 15, ..p };
        assert_eq!(write_header(&p15)[0], 0xBF);
    }

    #[test]
    fn header_short_buffer_is_error() {
        assert_eq!(read_header(&[0u8; 12]), Err(RlncError::ShortHeader(12)));
    }

    #[test]
    fn innovation_basics() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let gen = Generation::random(2, 16, &mut rng);
        let mut d = DecoderState::new();
        let p = encode(&gen, &mut rng);
        assert!(d.is_innovative(&p));
        assert!(d.insert(&p).unwrap());
        assert!(!d.is_innovative(&p));
        assert!(!d.insert(&p).unwrap());
    }

    #[test]
    fn full_rank_rejects_everything() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let gen = Generation::random(0, 8, &mut rng);
        let mut d = DecoderState::new();
        for i in 0..GENERATION_SIZE {
            assert!(d.insert(&unit_packet(&gen, i)).unwrap());
        }
        assert!(d.decodable(0));
        let p = encode(&gen, &mut rng);
        assert!(!d.is_innovative(&p));
    }

    #[test]
    fn bad_generation_is_error() {
        let mut d = DecoderState::new();
        let p = CodedPacket {
            gen_id: 16,
            gen_size: 12,
            coeffs: [1u8; GENERATION_SIZE],
            payload: vec![0],
        };
        assert_eq!(d.insert(&p), Err(RlncError::BadGeneration(16)));
    }

    #[test]
    fn decode_identity_insertions() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let gen = Generation::random(7, 25, &mut rng);
        let mut d = DecoderState::new();
        for i in 0..GENERATION_SIZE {
            d.insert(&unit_packet(&gen, i)).unwrap();
        }
        assert_eq!(d.decode(7).unwrap(), gen.packets);
    }

    #[test]
    fn decode_below_full_rank_is_error() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let gen = Generation::random(0, 8, &mut rng);
        let mut d = DecoderState::new();
        for i in 0..(GENERATION_SIZE - 1) {
            d.insert(&unit_packet(&gen, i)).unwrap();
        }
        assert_eq!(
            d.decode(0),
            Err(RlncError::InsufficientRank { gen_id: 0, rank: 11 })
        );
    }

    #[test]
    fn rank_matrix_agrees_with_gf256_rank_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let gen = Generation::random(0, 4, &mut rng);
            let mut d = DecoderState::new();
            let mut drawn: Vec<Vec<u8>> = Vec::new();
            for _ in 0..GENERATION_SIZE {
                let p = encode(&gen, &mut rng);
                drawn.push(p.coeffs.to_vec());
                d.insert(&p).unwrap();
            }
            assert_eq!(d.rank(0), CoeffMatrix::from_rows(&drawn).rank());
        }
    }

    #[test]
    fn mean_non_innovative_receptions_is_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut wasted = 0u32;
        let trials = 100;
        for _ in 0..trials {
            let gen = Generation::random(0, 4, &mut rng);
            let mut d = DecoderState::new();
            while !d.decodable(0) {
                let p = encode(&gen, &mut rng);
                if !d.insert(&p).unwrap() {
                    wasted += 1;
                }
            }
        }
        assert!((wasted as f64) / (trials as f64) < 0.1, "wasted = {wasted}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn roundtrip_random_insertions(seed: u64, payload_len in 100usize..=1500) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let gen = Generation::random(0, payload_len, &mut rng);
            let mut d = DecoderState::new();
            while !d.decodable(0) {
                let p = encode(&gen, &mut rng);
                d.insert(&p).unwrap();
            }
            prop_assert_eq!(d.decode(0).unwrap(), gen.packets);
        }

        #[test]
        fn header_roundtrip(gen_id in 0usize..16, gen_size in 1usize..=16, coeffs: [u8; 12]) {
            let p = CodedPacket { gen_id, gen_size, coeffs, payload: vec![] };
            let bytes = write_header(&p);
            prop_assert_eq!(bytes.len(), HEADER_LEN);
            let (g, s, c) = read_header(&bytes).unwrap();
            prop_assert_eq!(g, gen_id);
            prop_assert_eq!(s, gen_size);
            prop_assert_eq!(c, coeffs);
        }
    }
}
