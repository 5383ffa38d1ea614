//! Workbench for the LILI-128 keystream generator: a bit-exact
//! implementation of the clock-controlled generator, exact reconstruction
//! of its 46-term nonlinear filter from keystream observations, GF(2)
//! polynomial tooling (irreducibility, primitivity, Berlekamp-Massey),
//! and randomness tests for the produced keystream.

pub mod boolfn;
pub mod gf2poly;
pub mod lfsr;
pub mod lili;
pub mod reconstruct;
pub mod stats;

pub use boolfn::{AnfPolynomial, BoolFnError, FunctionMetrics, Monomial, TruthTable, WalshSpectrum};
pub use gf2poly::{
    berlekamp_massey, factorize, is_prime, FactorSet, FeedbackPolynomial, Gf2PolyError,
    LinearComplexityProfile,
};
pub use lfsr::{LfsrError, LfsrSpec, LfsrState};
pub use lili::{
    clock_amount, equivalence_check, equivalence_check_vs, keystream, lili128_filter, replay,
    ClockSequence, EquivalenceOutcome, GeneratorConfig, GeneratorError, GeneratorState,
    KeyMaterial, KeySource, StepRecord,
};
pub use reconstruct::{
    accumulate, end_to_end_attack, interpolate, min_bits_experiment, Accumulator, AttackReport,
    CoverageReport, MinBitsSummary, ObservationSet, ReconstructError, TrialResult,
};
pub use stats::{block_frequency, monobit, runs_test, StatsError, TestReport};
