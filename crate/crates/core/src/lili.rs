//! The full LILI-128 keystream generator: clock-control subsystem
//! (LFSR_c + f_c), data-generation subsystem (LFSR_d + f_d), key loading,
//! keystream production, input replay, and the dual-representation
//! equivalence harness.

use std::fmt;

use thiserror::Error;

use crate::boolfn::{AnfPolynomial, BoolFnError};
use crate::lfsr::{LfsrError, LfsrSpec, LfsrState};
use crate::reconstruct::ObservationSet;

/// The 46-term, degree-6 nonlinear filter over x1..x10 (canonical form).
pub const FILTER_ANF: &str = "x5+x4+x3+x2+x10*x6+x10*x4+x9*x3+x9*x1+x8*x2+x8*x1+x7*x6+\
x10*x9*x5+x10*x9*x4+x10*x9*x3+x10*x9*x2+x10*x8*x4+x10*x8*x3+x10*x7*x6+x10*x7*x5+x10*x7*x4+\
x9*x8*x6+x9*x8*x3+x9*x7*x6+x9*x7*x4+x9*x7*x3+\
x10*x9*x8*x6+x10*x9*x8*x4+x10*x9*x8*x3+x10*x9*x8*x1+x10*x9*x7*x6+x10*x9*x7*x4+x10*x9*x7*x2+\
x10*x8*x7*x5+x10*x8*x7*x3+x9*x8*x7*x4+x9*x8*x7*x2+x9*x7*x6*x5+x9*x7*x6*x4+\
x10*x9*x8*x7*x4+x10*x9*x8*x7*x3+x10*x9*x7*x6*x5+x10*x9*x7*x6*x4+x9*x8*x7*x6*x5+x9*x8*x7*x6*x4+\
x10*x9*x8*x7*x6*x5+x10*x9*x8*x7*x6*x4";

/// 1-based LFSR_d stages feeding x1..x10 of the filter (the full positive
/// difference set (0,1,3,7,12,20,30,44,65,80) shifted to 1-based labels).
pub const DATA_POSITIONS: [usize; 10] = [1, 2, 4, 8, 13, 21, 31, 45, 66, 81];

/// 1-based LFSR_c stages feeding (y1, y2) of the clock function.
pub const CLOCK_POSITIONS: (usize, usize) = (13, 21);

/// Parses the built-in filter.
pub fn lili128_filter() -> AnfPolynomial {
    AnfPolynomial::parse(FILTER_ANF, 10).expect("built-in filter text is valid")
}

/// The clock function: c = 2*y1 + y2 + 1, always in {1,2,3,4}.
pub fn clock_amount(y1: u8, y2: u8) -> u8 {
    2 * (y1 & 1) + (y2 & 1) + 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegisterId {
    Clock,
    Data,
}

impl fmt::Display for RegisterId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegisterId::Clock => f.write_str("c"),
            RegisterId::Data => f.write_str("d"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("key must be {expected} characters, got {got}")]
    BadKeyLength { expected: usize, got: usize },
    #[error("ASCII key contains non-ASCII bytes")]
    NonAsciiKey,
    #[error("hex key contains a non-hex digit")]
    BadHexKey,
    #[error("register {0} would load all-zero")]
    ZeroRegister(RegisterId),
    #[error("generator state is degenerate (a register is all-zero)")]
    DegenerateState,
    #[error("invalid clock amount {0}")]
    InvalidClock(u8),
    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("keystream text invalid at byte {0}")]
    InvalidStreamText(usize),
    #[error(transparent)]
    Filter(#[from] BoolFnError),
    #[error(transparent)]
    Register(#[from] LfsrError),
}

/// 128 key bits with their source notation.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct KeyMaterial {
    bytes: [u8; 16],
    source: KeySource,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KeySource {
    Ascii16,
    Hex32,
}

impl KeyMaterial {
    /// Exactly 16 ASCII characters, bytes in text order.
    pub fn from_ascii(s: &str) -> Result<Self, GeneratorError> {
        if s.len() != 16 {
            return Err(GeneratorError::BadKeyLength {
                expected: 16,
                got: s.len(),
            });
        }
        if !s.is_ascii() {
            return Err(GeneratorError::NonAsciiKey);
        }
        let mut bytes = [0u8; 16];
        bytes.copy_from_slice(s.as_bytes());
        Ok(Self {
            bytes,
            source: KeySource::Ascii16,
        })
    }

    /// Exactly 32 hex digits.
    pub fn from_hex(s: &str) -> Result<Self, GeneratorError> {
        if s.len() != 32 {
            return Err(GeneratorError::BadKeyLength {
                expected: 32,
                got: s.len(),
            });
        }
        let mut bytes = [0u8; 16];
        for (i, chunk) in s.as_bytes().chunks(2).enumerate() {
            let hi = hex_val(chunk[0]).ok_or(GeneratorError::BadHexKey)?;
            let lo = hex_val(chunk[1]).ok_or(GeneratorError::BadHexKey)?;
            bytes[i] = hi << 4 | lo;
        }
        Ok(Self {
            bytes,
            source: KeySource::Hex32,
        })
    }

    pub fn from_bytes(bytes: [u8; 16]) -> Self {
        Self {
            bytes,
            source: KeySource::Hex32,
        }
    }

    pub fn bytes(&self) -> &[u8; 16] {
        &self.bytes
    }

    pub fn source(&self) -> KeySource {
        self.source
    }

    /// Key bit i (1..=128): bytes in text order, MSB-first within a byte.
    pub fn bit(&self, i: usize) -> u8 {
        debug_assert!((1..=128).contains(&i));
        let idx = i - 1;
        self.bytes[idx / 8] >> (7 - idx % 8) & 1
    }

    pub fn to_hex(&self) -> String {
        self.bytes.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Debug for KeyMaterial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KeyMaterial({})", self.to_hex())
    }
}

fn hex_val(b: u8) -> Option<u8> {
    match b {
        b'0'..=b'9' => Some(b - b'0'),
        b'a'..=b'f' => Some(b - b'a' + 10),
        b'A'..=b'F' => Some(b - b'A' + 10),
        _ => None,
    }
}

/// Everything that pins the generator: register specs, tap positions,
/// and the filter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorConfig {
    pub clock_positions: (usize, usize),
    pub data_positions: [usize; 10],
    pub filter: AnfPolynomial,
    pub lfsr_c: LfsrSpec,
    pub lfsr_d: LfsrSpec,
}

impl GeneratorConfig {
    pub fn lili128() -> Self {
        Self {
            clock_positions: CLOCK_POSITIONS,
            data_positions: DATA_POSITIONS,
            filter: lili128_filter(),
            lfsr_c: LfsrSpec::lili_clock_register(),
            lfsr_d: LfsrSpec::lili_data_register(),
        }
    }

    pub fn validate(&self) -> Result<(), GeneratorError> {
        if self.filter.variables() != self.data_positions.len() {
            return Err(GeneratorError::InvalidConfig(
                "filter variable count must match the data positions",
            ));
        }
        let (y1, y2) = self.clock_positions;
        for p in [y1, y2] {
            if p < 1 || p > self.lfsr_c.length() {
                return Err(GeneratorError::InvalidConfig(
                    "clock position outside LFSR_c",
                ));
            }
        }
        for &p in &self.data_positions {
            if p < 1 || p > self.lfsr_d.length() {
                return Err(GeneratorError::InvalidConfig(
                    "data position outside LFSR_d",
                ));
            }
        }
        if self.lfsr_c.length() + self.lfsr_d.length() != 128 {
            return Err(GeneratorError::InvalidConfig(
                "register lengths must consume exactly 128 key bits",
            ));
        }
        Ok(())
    }
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        Self::lili128()
    }
}

/// One emitted bit with its observable internals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepRecord {
    pub bit: u8,
    pub filter_input: u16,
    pub clock: u8,
}

/// A clock-amount trace; every value is in {1,2,3,4}.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClockSequence {
    values: Vec<u8>,
}

impl ClockSequence {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, c: u8) -> Result<(), GeneratorError> {
        if !(1..=4).contains(&c) {
            return Err(GeneratorError::InvalidClock(c));
        }
        self.values.push(c);
        Ok(())
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    pub fn total(&self) -> u64 {
        self.values.iter().map(|&c| c as u64).sum()
    }
}

#[derive(Debug, Clone)]
pub struct GeneratorState {
    config: GeneratorConfig,
    c: LfsrState,
    d: LfsrState,
    bits_emitted: u64,
}

impl GeneratorState {
    /// Key loading: bits 1..N_c fill s[1..N_c], the rest fill u[1..N_d],
    /// MSB-first within each key byte, bytes in text order.
    pub fn load(config: GeneratorConfig, key: &KeyMaterial) -> Result<Self, GeneratorError> {
        config.validate()?;
        let c_len = config.lfsr_c.length();
        let d_len = config.lfsr_d.length();
        let c_bits: Vec<u8> = (1..=c_len).map(|i| key.bit(i)).collect();
        let d_bits: Vec<u8> = (1..=d_len).map(|i| key.bit(c_len + i)).collect();
        if c_bits.iter().all(|&b| b == 0) {
            return Err(GeneratorError::ZeroRegister(RegisterId::Clock));
        }
        if d_bits.iter().all(|&b| b == 0) {
            return Err(GeneratorError::ZeroRegister(RegisterId::Data));
        }
        Ok(Self {
            c: LfsrState::from_bits(config.lfsr_c.clone(), &c_bits)?,
            d: LfsrState::from_bits(config.lfsr_d.clone(), &d_bits)?,
            config,
            bits_emitted: 0,
        })
    }

    pub fn config(&self) -> &GeneratorConfig {
        &self.config
    }

    pub fn clock_register(&self) -> &LfsrState {
        &self.c
    }

    pub fn data_register(&self) -> &LfsrState {
        &self.d
    }

    pub fn bits_emitted(&self) -> u64 {
        self.bits_emitted
    }

    /// Clocks both registers once the current output is taken: LFSR_c
    /// steps once, LFSR_d steps c = f_c(y1, y2) times. Returns c.
    fn advance(&mut self) -> Result<u8, GeneratorError> {
        let (p1, p2) = self.config.clock_positions;
        let y1 = self.c.stage(p1)?;
        let y2 = self.c.stage(p2)?;
        let ck = clock_amount(y1, y2);
        self.c.step();
        self.d.step_n(ck as u64);
        Ok(ck)
    }

    /// Emits one keystream bit with its filter input and clock amount.
    /// The first output is a function of the freshly loaded state.
    pub fn next_record(&mut self) -> Result<StepRecord, GeneratorError> {
        if self.c.is_degenerate() || self.d.is_degenerate() {
            return Err(GeneratorError::DegenerateState);
        }
        let word = self.d.extract(&self.config.data_positions)? as u16;
        let bit = self.config.filter.evaluate(word as u128)?;
        let clock = self.advance()?;
        self.bits_emitted += 1;
        Ok(StepRecord {
            bit,
            filter_input: word,
            clock,
        })
    }

    pub fn next_bit(&mut self) -> Result<u8, GeneratorError> {
        Ok(self.next_record()?.bit)
    }

    /// Two lines: clock register then data register, in dump format.
    pub fn dump(&self) -> String {
        format!("{}\n{}\n", self.c.dump_line(), self.d.dump_line())
    }
}

/// n keystream bits from a fresh load of `key`.
pub fn keystream(
    key: &KeyMaterial,
    n: u64,
    config: &GeneratorConfig,
) -> Result<Vec<u8>, GeneratorError> {
    let mut g = GeneratorState::load(config.clone(), key)?;
    (0..n).map(|_| g.next_bit()).collect()
}

/// Replays n outputs as (10-bit filter input, keystream bit) pairs; the
/// attack-side primitive under a known initial state.
pub fn replay(
    key: &KeyMaterial,
    n: u64,
    config: &GeneratorConfig,
) -> Result<ObservationSet, GeneratorError> {
    let mut g = GeneratorState::load(config.clone(), key)?;
    let mut obs = ObservationSet::new(key.to_hex());
    for _ in 0..n {
        let r = g.next_record()?;
        obs.push(r.filter_input, r.bit);
    }
    Ok(obs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquivalenceOutcome {
    Equivalent { bits: u64 },
    /// 1-based index of the first disagreeing bit.
    Mismatch { index: u64 },
}

impl EquivalenceOutcome {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, EquivalenceOutcome::Equivalent { .. })
    }
}

/// Dual-representation check. Route A evaluates `config.filter` on the
/// 10-bit extracted word; route B evaluates `reference` relabeled onto
/// the data-register stage labels directly on the whole register. The
/// two keystreams must agree bit-for-bit.
pub fn equivalence_check_vs(
    key: &KeyMaterial,
    n: u64,
    config: &GeneratorConfig,
    reference: &AnfPolynomial,
) -> Result<EquivalenceOutcome, GeneratorError> {
    let relabeled = reference.relabel(&config.data_positions, config.lfsr_d.length())?;
    let mut route_a = GeneratorState::load(config.clone(), key)?;
    let mut route_b = GeneratorState::load(config.clone(), key)?;
    for i in 1..=n {
        let za = route_a.next_bit()?;
        let zb = relabeled.evaluate(route_b.d.stages_word())?;
        route_b.advance()?;
        if za != zb {
            return Ok(EquivalenceOutcome::Mismatch { index: i });
        }
    }
    Ok(EquivalenceOutcome::Equivalent { bits: n })
}

/// The self-check: both routes derive from `config.filter`.
pub fn equivalence_check(
    key: &KeyMaterial,
    n: u64,
    config: &GeneratorConfig,
) -> Result<EquivalenceOutcome, GeneratorError> {
    equivalence_check_vs(key, n, config, &config.filter)
}

/// Packs bits into lowercase hex, MSB-first per byte in emission order;
/// a final partial byte is zero-padded.
pub fn bits_to_hex(bits: &[u8]) -> String {
    let mut out = String::with_capacity(bits.len().div_ceil(8) * 2);
    for chunk in bits.chunks(8) {
        let mut byte = 0u8;
        for (j, &b) in chunk.iter().enumerate() {
            byte |= (b & 1) << (7 - j);
        }
        out.push_str(&format!("{byte:02x}"));
    }
    out
}

pub fn hex_to_bits(s: &str) -> Result<Vec<u8>, GeneratorError> {
    let s = s.trim();
    let mut bits = Vec::with_capacity(s.len() * 4);
    for (i, &b) in s.as_bytes().iter().enumerate() {
        let v = hex_val(b).ok_or(GeneratorError::InvalidStreamText(i))?;
        for j in (0..4).rev() {
            bits.push(v >> j & 1);
        }
    }
    Ok(bits)
}

pub fn bits_to_bitstring(bits: &[u8]) -> String {
    bits.iter().map(|&b| if b & 1 == 1 { '1' } else { '0' }).collect()
}

pub fn bitstring_to_bits(s: &str) -> Result<Vec<u8>, GeneratorError> {
    let s = s.trim();
    s.bytes()
        .enumerate()
        .map(|(i, b)| match b {
            b'0' => Ok(0),
            b'1' => Ok(1),
            _ => Err(GeneratorError::InvalidStreamText(i)),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    // frozen before the build by an independent reference pipeline, and
    // re-frozen from the first validated build
    const YKEY_KS64_HEX: &str = "dbc1a17fb8b72f3f";

    // the filter rewritten over the data-register stage labels, transcribed
    // independently of the relabel implementation
    const FILTER_ON_STAGES: &str = "x13+x8+x4+x2+x81*x21+x81*x8+x66*x4+x66*x1+x45*x2+x45*x1+\
x31*x21+x81*x66*x13+x81*x66*x8+x81*x66*x4+x81*x66*x2+x81*x45*x8+x81*x45*x4+x81*x31*x21+\
x81*x31*x13+x81*x31*x8+x66*x45*x21+x66*x45*x4+x66*x31*x21+x66*x31*x8+x66*x31*x4+\
x81*x66*x45*x21+x81*x66*x45*x8+x81*x66*x45*x4+x81*x66*x45*x1+x81*x66*x31*x21+x81*x66*x31*x8+\
x81*x66*x31*x2+x81*x45*x31*x13+x81*x45*x31*x4+x66*x45*x31*x8+x66*x45*x31*x2+x66*x31*x21*x13+\
x66*x31*x21*x8+x81*x66*x45*x31*x8+x81*x66*x45*x31*x4+x81*x66*x31*x21*x13+x81*x66*x31*x21*x8+\
x66*x45*x31*x21*x13+x66*x45*x31*x21*x8+x81*x66*x45*x31*x21*x13+x81*x66*x45*x31*x21*x8";

    #[test]
    fn clock_function_table() {
        assert_eq!(clock_amount(0, 0), 1);
        assert_eq!(clock_amount(0, 1), 2);
        assert_eq!(clock_amount(1, 0), 3);
        assert_eq!(clock_amount(1, 1), 4);
    }

    #[test]
    fn filter_constant_shape() {
        let f = lili128_filter();
        assert_eq!(f.term_count(), 46);
        assert_eq!(f.degree(), 6);
        assert_eq!(f.degree_profile(), vec![4, 7, 14, 13, 6, 2]);
        assert!(!f.contains(crate::boolfn::Monomial::ONE));
        // canonical text round trip reproduces the constant exactly
        assert_eq!(f.to_text(), FILTER_ANF);
    }

    #[test]
    fn filter_relabel_matches_stage_form() {
        let relabeled = lili128_filter().relabel(&DATA_POSITIONS, 89).unwrap();
        let expected = AnfPolynomial::parse(FILTER_ON_STAGES, 89).unwrap();
        assert_eq!(relabeled, expected);
        assert_eq!(relabeled.to_text(), FILTER_ON_STAGES);
    }

    #[test]
    fn filter_evaluation_fixtures() {
        let f = lili128_filter();
        // no constant term
        assert_eq!(f.evaluate(0).unwrap(), 0);
        // only the linear x5 term survives an x5-only input
        assert_eq!(f.evaluate(1 << 4).unwrap(), 1);
        // all-ones input: every one of the 46 monomials fires; even parity
        assert_eq!(f.evaluate(1023).unwrap(), 0);
    }

    #[test]
    fn filter_metrics_fixtures() {
        // weight and nonlinearity computed by exhaustive evaluation and
        // Walsh transform in an independent pre-build run
        let m = lili128_filter().metrics().unwrap();
        assert_eq!(m.terms, 46);
        assert_eq!(m.degree, 6);
        assert_eq!(m.weight, 512);
        assert!(m.balanced);
        assert_eq!(m.nonlinearity, 480);
        assert_eq!(lili128_filter().to_truth_table().unwrap().weight(), 512);
    }

    #[test]
    fn keystream_monobit_within_three_sigma() {
        let key = KeyMaterial::from_ascii("yyyyyyyyyyyyyyyy").unwrap();
        let bits = keystream(&key, 1 << 16, &GeneratorConfig::lili128()).unwrap();
        let n = bits.len() as f64;
        let ones: f64 = bits.iter().map(|&b| b as f64).sum();
        let sigma = (2.0 * ones - n).abs() / n.sqrt();
        assert!(sigma <= 3.29, "imbalance {sigma} sigma");
    }

    #[test]
    fn degenerate_state_is_reported() {
        // a clock register whose taps exclude stage 1 can decay to zero
        let mut config = GeneratorConfig::lili128();
        config.lfsr_c = LfsrSpec::new("decay", 39, &[39]).unwrap();
        let mut bytes = [0u8; 16];
        bytes[0] = 0x80; // s[1] = 1, everything else in LFSR_c zero
        bytes[15] = 0x01;
        let key = KeyMaterial::from_bytes(bytes);
        let mut g = GeneratorState::load(config, &key).unwrap();
        assert!(g.next_bit().is_ok());
        assert!(matches!(
            g.next_bit(),
            Err(GeneratorError::DegenerateState)
        ));
    }

    #[test]
    fn key_parsing() {
        let k = KeyMaterial::from_ascii("yyyyyyyyyyyyyyyy").unwrap();
        assert_eq!(k.bytes()[0], 0x79);
        assert_eq!(k.to_hex(), "79797979797979797979797979797979");
        let h = KeyMaterial::from_hex("79797979797979797979797979797979").unwrap();
        assert_eq!(h.bytes(), k.bytes());

        // the 17-character form is rejected; the 16-character form loads
        assert!(matches!(
            KeyMaterial::from_ascii("ggggggggggggggggg"),
            Err(GeneratorError::BadKeyLength { expected: 16, got: 17 })
        ));
        assert!(KeyMaterial::from_ascii("gggggggggggggggg").is_ok());

        assert!(matches!(
            KeyMaterial::from_hex("zz797979797979797979797979797979"),
            Err(GeneratorError::BadHexKey)
        ));
        assert!(matches!(
            KeyMaterial::from_ascii("short"),
            Err(GeneratorError::BadKeyLength { expected: 16, got: 5 })
        ));
    }

    #[test]
    fn load_layout_fixture() {
        let key = KeyMaterial::from_ascii("yyyyyyyyyyyyyyyy").unwrap();
        let g = GeneratorState::load(GeneratorConfig::lili128(), &key).unwrap();
        // 'y' = 0x79 = 01111001 MSB-first
        for (i, expect) in [0, 1, 1, 1, 1, 0, 0, 1].into_iter().enumerate() {
            assert_eq!(g.clock_register().stage(i + 1).unwrap(), expect);
        }
        assert_eq!(g.data_register().stage(1).unwrap(), 1);
    }

    #[test]
    fn load_dump_fixture() {
        // mechanical bit layout recorded before the build
        let key = KeyMaterial::from_ascii("123456789abcdefg").unwrap();
        let g = GeneratorState::load(GeneratorConfig::lili128(), &key).unwrap();
        assert_eq!(
            g.dump(),
            "LFSR_c 39 001100010011001000110011001101000011010\n\
             LFSR_d 89 10011011000110111001110000011100101100001011000100110001101100100011001010110011001100111\n"
        );
    }

    #[test]
    fn zero_key_rejected() {
        let key = KeyMaterial::from_hex(&"0".repeat(32)).unwrap();
        assert!(matches!(
            GeneratorState::load(GeneratorConfig::lili128(), &key),
            Err(GeneratorError::ZeroRegister(RegisterId::Clock))
        ));
        // zero data segment only
        let mut bytes = [0u8; 16];
        bytes[0] = 0xff;
        bytes[1] = 0xff;
        let key = KeyMaterial::from_bytes(bytes);
        assert!(matches!(
            GeneratorState::load(GeneratorConfig::lili128(), &key),
            Err(GeneratorError::ZeroRegister(RegisterId::Data))
        ));
    }

    #[test]
    fn keystream_fixture_64() {
        let key = KeyMaterial::from_ascii("yyyyyyyyyyyyyyyy").unwrap();
        let ks = keystream(&key, 64, &GeneratorConfig::lili128()).unwrap();
        assert_eq!(bits_to_hex(&ks), YKEY_KS64_HEX);
    }

    #[test]
    fn generation_is_deterministic() {
        let key = KeyMaterial::from_ascii("yyyyyyyyyyyyyyyy").unwrap();
        let config = GeneratorConfig::lili128();
        let mut g1 = GeneratorState::load(config.clone(), &key).unwrap();
        let first_two = [g1.next_bit().unwrap(), g1.next_bit().unwrap()];
        let mut g2 = GeneratorState::load(config, &key).unwrap();
        let again = [g2.next_bit().unwrap(), g2.next_bit().unwrap()];
        assert_eq!(first_two, again);
        assert_eq!(g2.bits_emitted(), 2);
    }

    #[test]
    fn zero_filter_zero_keystream() {
        let key = KeyMaterial::from_ascii("yyyyyyyyyyyyyyyy").unwrap();
        let mut config = GeneratorConfig::lili128();
        config.filter = AnfPolynomial::zero(10).unwrap();
        let ks = keystream(&key, 256, &config).unwrap();
        assert!(ks.iter().all(|&b| b == 0));
    }

    #[test]
    fn keystream_n1_is_first_bit() {
        let key = KeyMaterial::from_ascii("gggggggggggggggg").unwrap();
        let config = GeneratorConfig::lili128();
        let one = keystream(&key, 1, &config).unwrap();
        let mut g = GeneratorState::load(config, &key).unwrap();
        assert_eq!(one[0], g.next_bit().unwrap());
    }

    #[test]
    fn clock_trace_stays_in_range_and_mean_near_2_5() {
        let key = KeyMaterial::from_ascii("yyyyyyyyyyyyyyyy").unwrap();
        let mut g = GeneratorState::load(GeneratorConfig::lili128(), &key).unwrap();
        let n = 1u64 << 16;
        let mut clocks = ClockSequence::new();
        for _ in 0..n {
            let r = g.next_record().unwrap();
            clocks.push(r.clock).unwrap();
        }
        let total = clocks.total();
        assert!(total >= n && total <= 4 * n);
        let mean = total as f64 / n as f64;
        assert!((mean - 2.5).abs() <= 0.05, "clock mean {mean} drifted");
    }

    #[test]
    fn clock_sequence_rejects_out_of_range() {
        let mut c = ClockSequence::new();
        assert!(matches!(c.push(0), Err(GeneratorError::InvalidClock(0))));
        assert!(matches!(c.push(5), Err(GeneratorError::InvalidClock(5))));
        assert!(c.push(4).is_ok());
    }

    #[test]
    fn equivalence_for_section_keys() {
        let config = GeneratorConfig::lili128();
        for k in ["yyyyyyyyyyyyyyyy", "gggggggggggggggg", "123456789abcdefg"] {
            let key = KeyMaterial::from_ascii(k).unwrap();
            let outcome = equivalence_check(&key, 4096, &config).unwrap();
            assert!(outcome.is_equivalent(), "key {k} diverged: {outcome:?}");
        }
    }

    #[test]
    fn equivalence_detects_mismatched_positions() {
        // route B relabeled through deliberately shifted positions
        let config = GeneratorConfig::lili128();
        let key = KeyMaterial::from_ascii("yyyyyyyyyyyyyyyy").unwrap();
        let mut bad = config.clone();
        bad.data_positions = [2, 3, 5, 9, 14, 22, 32, 46, 67, 82];
        let reference = config.filter.clone();
        let relabeled = reference.relabel(&bad.data_positions, 89).unwrap();
        let mut route_a = GeneratorState::load(config, &key).unwrap();
        let mut route_b = GeneratorState::load(bad, &key).unwrap();
        let mut diverged = false;
        for _ in 0..64 {
            let za = route_a.next_bit().unwrap();
            let zb = relabeled.evaluate(route_b.d.stages_word()).unwrap();
            route_b.advance().unwrap();
            if za != zb {
                diverged = true;
                break;
            }
        }
        assert!(diverged, "shifted positions must not stay equivalent");
    }

    #[test]
    fn equivalence_vs_perturbed_filter_mismatches() {
        let config = GeneratorConfig::lili128();
        let key = KeyMaterial::from_ascii("yyyyyyyyyyyyyyyy").unwrap();
        let mut perturbed = config.clone();
        perturbed.filter = AnfPolynomial::parse(&format!("{FILTER_ANF}+x1"), 10).unwrap();
        let outcome =
            equivalence_check_vs(&key, 4096, &perturbed, &lili128_filter()).unwrap();
        assert!(matches!(outcome, EquivalenceOutcome::Mismatch { .. }));
    }

    #[test]
    fn replay_bits_match_filter_on_words() {
        let key = KeyMaterial::from_ascii("yyyyyyyyyyyyyyyy").unwrap();
        let config = GeneratorConfig::lili128();
        let obs = replay(&key, 2048, &config).unwrap();
        for &(word, bit) in obs.pairs() {
            assert_eq!(config.filter.evaluate(word as u128).unwrap(), bit);
        }
    }

    #[test]
    fn replay_words_repeat() {
        // the tap words are not all distinct over a 2^13-bit window
        let key = KeyMaterial::from_ascii("yyyyyyyyyyyyyyyy").unwrap();
        let obs = replay(&key, 1 << 13, &GeneratorConfig::lili128()).unwrap();
        let mut counts = [0u32; 1024];
        for &(word, _) in obs.pairs() {
            counts[word as usize] += 1;
        }
        let max = counts.iter().max().copied().unwrap();
        assert!(max > 1, "8192 draws over 1024 cells must collide");
    }

    #[test]
    fn stream_text_round_trips() {
        let bits = vec![1, 1, 0, 1, 1, 0, 1, 1, 1, 1, 0, 0, 0, 0, 0, 1];
        assert_eq!(bits_to_hex(&bits), "dbc1");
        assert_eq!(hex_to_bits("dbc1").unwrap(), bits);
        let text = bits_to_bitstring(&bits);
        assert_eq!(text, "1101101111000001");
        assert_eq!(bitstring_to_bits(&text).unwrap(), bits);
        assert!(matches!(
            hex_to_bits("xy"),
            Err(GeneratorError::InvalidStreamText(0))
        ));
        assert!(matches!(
            bitstring_to_bits("10102"),
            Err(GeneratorError::InvalidStreamText(4))
        ));
    }
}
