//! Keystream randomness checks: monobit frequency, runs, and block
//! frequency, each reporting a statistic, a p-value, and a PASS/FAIL
//! verdict at a significance level.

mod special;

use std::fmt;

use thiserror::Error;

use special::{erfc, igamc};

/// Conventional significance level for the battery.
pub const DEFAULT_ALPHA: f64 = 0.01;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatsError {
    #[error("need at least {needed} bits, got {got}")]
    TooFewBits { needed: usize, got: usize },
    #[error("ones fraction {ones_fraction:.6} violates the applicability bound {tau:.6}")]
    PrecheckFailed { ones_fraction: f64, tau: f64 },
    #[error("block size must be at least 1")]
    BadBlockSize,
}

/// One test outcome; `pass` iff `p_value >= alpha`.
#[derive(Debug, Clone, PartialEq)]
pub struct TestReport {
    pub name: &'static str,
    pub n: usize,
    pub statistic: f64,
    pub p_value: f64,
    pub alpha: f64,
    pub pass: bool,
}

impl TestReport {
    fn new(name: &'static str, n: usize, statistic: f64, p_value: f64, alpha: f64) -> Self {
        Self {
            name,
            n,
            statistic,
            p_value,
            alpha,
            pass: p_value >= alpha,
        }
    }

    /// Report line: name, n, statistic and p-value to 6 significant
    /// digits, PASS/FAIL.
    pub fn line(&self) -> String {
        format!(
            "{} n={} statistic={} p={} {}",
            self.name,
            self.n,
            sig6(self.statistic),
            sig6(self.p_value),
            if self.pass { "PASS" } else { "FAIL" }
        )
    }
}

impl fmt::Display for TestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.line())
    }
}

fn sig6(x: f64) -> String {
    format!("{x:.5e}")
}

#[cfg(test)]
pub(crate) fn special_erfc_for_tests(x: f64) -> f64 {
    erfc(x)
}

fn ones_count(bits: &[u8]) -> u64 {
    bits.iter().map(|&b| (b & 1) as u64).sum()
}

/// Monobit frequency test: statistic |#ones - #zeros| / sqrt(n),
/// p = erfc(statistic / sqrt(2)). Requires n >= 100.
pub fn monobit(bits: &[u8], alpha: f64) -> Result<TestReport, StatsError> {
    let n = bits.len();
    if n < 100 {
        return Err(StatsError::TooFewBits { needed: 100, got: n });
    }
    let ones = ones_count(bits) as f64;
    let s = (2.0 * ones - n as f64).abs() / (n as f64).sqrt();
    let p = erfc(s / std::f64::consts::SQRT_2);
    Ok(TestReport::new("monobit", n, s, p, alpha))
}

/// Runs test: total runs against the expectation 2*n*pi*(1-pi) under the
/// null. Applicable only when the monobit pre-check |pi - 1/2| < 2/sqrt(n)
/// holds.
pub fn runs_test(bits: &[u8], alpha: f64) -> Result<TestReport, StatsError> {
    let n = bits.len();
    if n < 100 {
        return Err(StatsError::TooFewBits { needed: 100, got: n });
    }
    let pi = ones_count(bits) as f64 / n as f64;
    let tau = 2.0 / (n as f64).sqrt();
    if (pi - 0.5).abs() >= tau {
        return Err(StatsError::PrecheckFailed {
            ones_fraction: pi,
            tau,
        });
    }
    let mut runs = 1u64;
    for k in 1..n {
        if bits[k] & 1 != bits[k - 1] & 1 {
            runs += 1;
        }
    }
    let expected = 2.0 * n as f64 * pi * (1.0 - pi);
    // the sqrt(2) of the two-sided normal tail is folded into sqrt(2n)
    let denom = 2.0 * (2.0 * n as f64).sqrt() * pi * (1.0 - pi);
    let s = (runs as f64 - expected).abs() / denom;
    let p = erfc(s);
    Ok(TestReport::new("runs", n, s, p, alpha))
}

/// Block-frequency test: chi-square over per-block one-fractions,
/// p from the upper incomplete gamma. Requires n >= 100 * block_size.
pub fn block_frequency(
    bits: &[u8],
    block_size: usize,
    alpha: f64,
) -> Result<TestReport, StatsError> {
    if block_size == 0 {
        return Err(StatsError::BadBlockSize);
    }
    let n = bits.len();
    if n < 100 * block_size {
        return Err(StatsError::TooFewBits {
            needed: 100 * block_size,
            got: n,
        });
    }
    let blocks = n / block_size;
    let mut chi = 0.0;
    for i in 0..blocks {
        let ones = ones_count(&bits[i * block_size..(i + 1) * block_size]) as f64;
        let pi = ones / block_size as f64;
        chi += (pi - 0.5) * (pi - 0.5);
    }
    chi *= 4.0 * block_size as f64;
    let p = igamc(blocks as f64 / 2.0, chi / 2.0);
    Ok(TestReport::new("block-frequency", n, chi, p, alpha))
}
