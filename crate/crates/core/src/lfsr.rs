//! Stage-labeled LFSR engine: left-shift update, multi-step clocking,
//! tap extraction, and the tap-set/polynomial consistency predicate.
//!
//! Stages are labeled s[1..N] left to right. One step computes
//! w = XOR of the tapped stages of the pre-shift state, moves
//! s[i] <- s[i+1] for i < N, and sets s[N] <- w. The emitted bit is
//! s[1] read before the shift.

use thiserror::Error;

use crate::gf2poly::FeedbackPolynomial;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LfsrError {
    #[error("register length {0} unsupported (must be 1..=128)")]
    LengthUnsupported(usize),
    #[error("tap set is empty")]
    NoTaps,
    #[error("tap {tap} out of range 1..={length}")]
    TapOutOfRange { tap: usize, length: usize },
    #[error("duplicate tap {0}")]
    DuplicateTap(usize),
    #[error("expected {expected} stage bits, got {got}")]
    StateWidth { expected: usize, got: usize },
    #[error("position {position} out of range 1..={length}")]
    PositionOutOfRange { position: usize, length: usize },
}

/// Register geometry: stage count and the 1-based stage indices XORed
/// to form the feedback bit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LfsrSpec {
    length: usize,
    taps: Vec<usize>,
    tap_mask: u128,
    label: String,
}

impl LfsrSpec {
    pub fn new(
        label: impl Into<String>,
        length: usize,
        taps: &[usize],
    ) -> Result<Self, LfsrError> {
        if length == 0 || length > 128 {
            return Err(LfsrError::LengthUnsupported(length));
        }
        if taps.is_empty() {
            return Err(LfsrError::NoTaps);
        }
        let mut tap_mask = 0u128;
        let mut sorted: Vec<usize> = taps.to_vec();
        sorted.sort_unstable();
        for &t in &sorted {
            if t < 1 || t > length {
                return Err(LfsrError::TapOutOfRange { tap: t, length });
            }
            if tap_mask >> (t - 1) & 1 == 1 {
                return Err(LfsrError::DuplicateTap(t));
            }
            tap_mask |= 1 << (t - 1);
        }
        Ok(Self {
            length,
            taps: sorted,
            tap_mask,
            label: label.into(),
        })
    }

    /// LILI-128 clock-control register: 39 stages, taps {38,26,25,23,9,7,5,1}.
    pub fn lili_clock_register() -> Self {
        Self::new("LFSR_c", 39, &[38, 26, 25, 23, 9, 7, 5, 1]).expect("preset is valid")
    }

    /// LILI-128 data register: 89 stages, taps {89,51,48,37,35,10,7,1}.
    pub fn lili_data_register() -> Self {
        Self::new("LFSR_d", 89, &[89, 51, 48, 37, 35, 10, 7, 1]).expect("preset is valid")
    }

    pub fn length(&self) -> usize {
        self.length
    }

    /// Taps ascending.
    pub fn taps(&self) -> &[usize] {
        &self.taps
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// True iff this tap set realizes `poly`: tap i corresponds to
    /// exponent i-1 of the reciprocal polynomial x^N poly(1/x), i.e.
    /// taps = { N - e + 1 : e in exponents(poly), e >= 1 } with the
    /// constant term present. Equivalently, the sequence emitted at
    /// stage 1 satisfies the recurrence of `poly`.
    pub fn consistent_with(&self, poly: &FeedbackPolynomial) -> bool {
        if poly.is_zero() || poly.degree() != self.length || !poly.has_term(0) {
            return false;
        }
        let mut expected: Vec<usize> = poly
            .exponents()
            .into_iter()
            .filter(|&e| e >= 1)
            .map(|e| self.length - e + 1)
            .collect();
        expected.sort_unstable();
        expected == self.taps
    }
}

/// A spec plus its current stage bits. Bit `i-1` of the backing word is
/// stage s[i].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LfsrState {
    spec: LfsrSpec,
    stages: u128,
}

impl LfsrState {
    /// `bits[i]` (0-based) is stage s[i+1].
    pub fn from_bits(spec: LfsrSpec, bits: &[u8]) -> Result<Self, LfsrError> {
        if bits.len() != spec.length {
            return Err(LfsrError::StateWidth {
                expected: spec.length,
                got: bits.len(),
            });
        }
        let mut stages = 0u128;
        for (i, &b) in bits.iter().enumerate() {
            stages |= ((b & 1) as u128) << i;
        }
        Ok(Self { spec, stages })
    }

    /// Bit `i-1` of `word` is stage s[i].
    pub fn from_word(spec: LfsrSpec, word: u128) -> Result<Self, LfsrError> {
        if spec.length < 128 && word >> spec.length != 0 {
            return Err(LfsrError::StateWidth {
                expected: spec.length,
                got: 128 - word.leading_zeros() as usize,
            });
        }
        Ok(Self { spec, stages: word })
    }

    pub fn spec(&self) -> &LfsrSpec {
        &self.spec
    }

    /// Stage s[i], 1-based.
    pub fn stage(&self, i: usize) -> Result<u8, LfsrError> {
        if i < 1 || i > self.spec.length {
            return Err(LfsrError::PositionOutOfRange {
                position: i,
                length: self.spec.length,
            });
        }
        Ok((self.stages >> (i - 1) & 1) as u8)
    }

    pub fn stages_word(&self) -> u128 {
        self.stages
    }

    /// The all-zero fixed point; stepping cannot leave it.
    pub fn is_degenerate(&self) -> bool {
        self.stages == 0
    }

    pub fn step(&mut self) {
        let w = (self.stages & self.spec.tap_mask).count_ones() as u128 & 1;
        self.stages = (self.stages >> 1) | (w << (self.spec.length - 1));
    }

    pub fn step_n(&mut self, k: u64) {
        for _ in 0..k {
            self.step();
        }
    }

    /// The emitted bit: stage s[1] of the current state.
    pub fn output_bit(&self) -> u8 {
        (self.stages & 1) as u8
    }

    /// Reads s[1], then steps.
    pub fn next_output(&mut self) -> u8 {
        let b = self.output_bit();
        self.step();
        b
    }

    pub fn emit(&mut self, count: usize) -> Vec<u8> {
        (0..count).map(|_| self.next_output()).collect()
    }

    /// Word whose j-th bit (j=1 is the LSB) is the stage at positions[j].
    pub fn extract(&self, positions: &[usize]) -> Result<u128, LfsrError> {
        let mut word = 0u128;
        for (j, &p) in positions.iter().enumerate() {
            if p < 1 || p > self.spec.length {
                return Err(LfsrError::PositionOutOfRange {
                    position: p,
                    length: self.spec.length,
                });
            }
            word |= (self.stages >> (p - 1) & 1) << j;
        }
        Ok(word)
    }

    /// State dump line: label, N, stages as a '0'/'1' string s[1] -> s[N].
    pub fn dump_line(&self) -> String {
        let bits: String = (1..=self.spec.length)
            .map(|i| if self.stages >> (i - 1) & 1 == 1 { '1' } else { '0' })
            .collect();
        format!("{} {} {}", self.spec.label, self.spec.length, bits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2poly::{lfsr_c_polynomial, lfsr_d_polynomial, FeedbackPolynomial};

    fn bits_of(s: &str) -> Vec<u8> {
        s.bytes().map(|b| b - b'0').collect()
    }

    // key-load bit layouts computed independently before the build
    const YKEY_C: &str = "011110010111100101111001011110010111100";
    const YKEY_C_STEP1: &str = "111100101111001011110010111100101111000";
    const YKEY_D: &str =
        "10111100101111001011110010111100101111001011110010111100101111001011110010111100101111001";

    #[test]
    fn zero_state_is_fixed_point() {
        let mut s = LfsrState::from_bits(LfsrSpec::lili_clock_register(), &[0; 39]).unwrap();
        assert!(s.is_degenerate());
        s.step();
        assert!(s.is_degenerate());
        assert_eq!(s.output_bit(), 0);
    }

    #[test]
    fn four_stage_period_15() {
        let spec = LfsrSpec::new("t4", 4, &[4, 1]).unwrap();
        let seed = LfsrState::from_bits(spec, &[1, 0, 0, 0]).unwrap();
        let mut s = seed.clone();
        for i in 1..=15 {
            s.step();
            if i < 15 {
                assert_ne!(s, seed, "returned early at step {i}");
            }
        }
        assert_eq!(s, seed);
    }

    #[test]
    fn lfsr_c_single_step_fixture() {
        let mut s =
            LfsrState::from_bits(LfsrSpec::lili_clock_register(), &bits_of(YKEY_C)).unwrap();
        s.step();
        assert_eq!(
            s,
            LfsrState::from_bits(LfsrSpec::lili_clock_register(), &bits_of(YKEY_C_STEP1))
                .unwrap()
        );
    }

    #[test]
    fn step_n_composes() {
        let mut a =
            LfsrState::from_bits(LfsrSpec::lili_data_register(), &bits_of(YKEY_D)).unwrap();
        let mut b = a.clone();
        a.step_n(4);
        for _ in 0..4 {
            b.step();
        }
        assert_eq!(a, b);

        let mut c = b.clone();
        c.step_n(1);
        b.step();
        assert_eq!(b, c);
    }

    #[test]
    fn extract_fixtures() {
        let positions = [1, 2, 4, 8, 13, 21, 31, 45, 66, 81];
        let all_ones = LfsrState::from_bits(LfsrSpec::lili_data_register(), &[1; 89]).unwrap();
        assert_eq!(all_ones.extract(&positions).unwrap(), 1023);

        let zeros = LfsrState::from_bits(LfsrSpec::lili_data_register(), &[0; 89]).unwrap();
        assert_eq!(zeros.extract(&positions).unwrap(), 0);

        let y = LfsrState::from_bits(LfsrSpec::lili_data_register(), &bits_of(YKEY_D)).unwrap();
        assert_eq!(y.extract(&positions).unwrap(), 693);

        assert!(matches!(
            y.extract(&[90]),
            Err(LfsrError::PositionOutOfRange { position: 90, length: 89 })
        ));
    }

    #[test]
    fn consistency_presets() {
        assert!(LfsrSpec::lili_clock_register().consistent_with(&lfsr_c_polynomial()));
        assert!(LfsrSpec::lili_data_register().consistent_with(&lfsr_d_polynomial()));
        // degree mismatch is an inconsistency, not an error
        assert!(!LfsrSpec::lili_clock_register().consistent_with(&lfsr_d_polynomial()));
    }

    #[test]
    fn consistency_small() {
        let spec = LfsrSpec::new("t4", 4, &[4, 1]).unwrap();
        let poly = FeedbackPolynomial::from_exponents(&[4, 1, 0]).unwrap();
        assert!(spec.consistent_with(&poly));
        let wrong = FeedbackPolynomial::from_exponents(&[4, 3, 0]).unwrap();
        assert!(!spec.consistent_with(&wrong));
    }

    #[test]
    fn emitted_bits_satisfy_polynomial_recurrence() {
        for (spec, poly) in [
            (LfsrSpec::lili_clock_register(), lfsr_c_polynomial()),
            (LfsrSpec::lili_data_register(), lfsr_d_polynomial()),
        ] {
            let n = spec.length();
            let mut state = LfsrState::from_word(spec, 0b1011).unwrap();
            let seq = state.emit(4096);
            let exps = poly.exponents();
            for j in n..seq.len() {
                let mut acc = 0u8;
                for &e in &exps {
                    if e >= 1 {
                        acc ^= seq[j - e];
                    }
                }
                assert_eq!(acc, seq[j], "recurrence fails at index {j}");
            }
        }
    }

    #[test]
    fn berlekamp_massey_sees_full_register_length() {
        for (spec, n) in [
            (LfsrSpec::lili_clock_register(), 39),
            (LfsrSpec::lili_data_register(), 89),
        ] {
            let mut state = LfsrState::from_word(spec, 1).unwrap();
            let seq = state.emit(2 * n);
            let profile = crate::gf2poly::berlekamp_massey(&seq).unwrap();
            assert!(profile.regenerates(&seq));
            assert_eq!(profile.final_complexity(), n);
        }
    }

    #[test]
    fn primitive_surrogate_walks_full_cycle() {
        // x^16+x^14+x^13+x^11+1 is primitive: the nonzero states form one
        // cycle of length 2^16-1, so step is a bijection on them.
        let poly = FeedbackPolynomial::from_exponents(&[16, 14, 13, 11, 0]).unwrap();
        let factors = crate::gf2poly::factorize((1 << 16) - 1);
        assert!(poly.is_primitive(&factors).unwrap());

        let taps: Vec<usize> = poly
            .exponents()
            .into_iter()
            .filter(|&e| e >= 1)
            .map(|e| 16 - e + 1)
            .collect();
        let spec = LfsrSpec::new("t16", 16, &taps).unwrap();
        assert!(spec.consistent_with(&poly));

        let seed = LfsrState::from_word(spec, 1).unwrap();
        let mut s = seed.clone();
        let mut period = 0u64;
        loop {
            s.step();
            period += 1;
            if s == seed {
                break;
            }
            assert!(period <= (1 << 16), "walk exceeded the state space");
        }
        assert_eq!(period, (1 << 16) - 1);
    }

    #[test]
    fn spec_validation() {
        assert!(matches!(
            LfsrSpec::new("bad", 0, &[1]),
            Err(LfsrError::LengthUnsupported(0))
        ));
        assert!(matches!(LfsrSpec::new("bad", 4, &[]), Err(LfsrError::NoTaps)));
        assert!(matches!(
            LfsrSpec::new("bad", 4, &[5]),
            Err(LfsrError::TapOutOfRange { tap: 5, length: 4 })
        ));
        assert!(matches!(
            LfsrSpec::new("bad", 4, &[2, 2]),
            Err(LfsrError::DuplicateTap(2))
        ));
        assert!(matches!(
            LfsrState::from_bits(LfsrSpec::lili_clock_register(), &[0; 38]),
            Err(LfsrError::StateWidth { expected: 39, got: 38 })
        ));
    }

    #[test]
    fn dump_line_format() {
        let spec = LfsrSpec::new("t4", 4, &[4, 1]).unwrap();
        let s = LfsrState::from_bits(spec, &[1, 0, 0, 1]).unwrap();
        assert_eq!(s.dump_line(), "t4 4 1001");
    }
}
