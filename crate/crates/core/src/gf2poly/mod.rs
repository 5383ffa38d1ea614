//! Polynomial algebra over GF(2): dense-bitset polynomials, irreducibility
//! and primitivity predicates, integer factorization support, and
//! Berlekamp-Massey linear-complexity measurement.

mod bm;
mod factor;
mod words;

pub use bm::{berlekamp_massey, LinearComplexityProfile};
pub use factor::{factorize, is_prime, FactorSet};

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Gf2PolyError {
    #[error("exponent set is empty")]
    EmptyExponentSet,
    #[error("duplicate exponent {0}")]
    DuplicateExponent(usize),
    #[error("syntax error at byte {0} in polynomial text")]
    SyntaxError(usize),
    #[error("modulus must have degree >= 1")]
    ModulusDegree,
    #[error("polynomial is not irreducible")]
    NotIrreducible,
    #[error("factor set is for {actual}, expected {expected}")]
    WrongFactorTarget { expected: u128, actual: u128 },
    #[error("invalid factor set: {0}")]
    BadFactorSet(&'static str),
    #[error("empty input sequence")]
    EmptyInput,
    #[error("degree {0} exceeds the supported order-test range")]
    DegreeTooLarge(usize),
}

/// Binary polynomial over GF(2) stored as a dense coefficient bitset
/// (bit `i` = coefficient of `x^i`).
///
/// Constructed values are nonzero; the zero polynomial can only arise
/// from arithmetic (`mul_mod`, `gcd`) and prints as "0".
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FeedbackPolynomial {
    words: Vec<u64>,
}

impl FeedbackPolynomial {
    /// Builds a polynomial from its set of exponents with coefficient 1.
    pub fn from_exponents(exps: &[usize]) -> Result<Self, Gf2PolyError> {
        if exps.is_empty() {
            return Err(Gf2PolyError::EmptyExponentSet);
        }
        let mut w = Vec::new();
        for &e in exps {
            if words::get_bit(&w, e) {
                return Err(Gf2PolyError::DuplicateExponent(e));
            }
            words::set_bit(&mut w, e);
        }
        Ok(Self { words: w })
    }

    /// The constant polynomial 1.
    pub fn one() -> Self {
        Self { words: vec![1] }
    }

    /// The monomial x.
    pub fn x() -> Self {
        Self { words: vec![2] }
    }

    fn from_words(mut words: Vec<u64>) -> Self {
        words::trim(&mut words);
        Self { words }
    }

    pub fn is_zero(&self) -> bool {
        words::is_zero(&self.words)
    }

    pub fn is_one(&self) -> bool {
        self.words == [1]
    }

    /// Highest exponent with a set coefficient; 0 for both the zero
    /// polynomial and the constant 1 (check `is_zero` to distinguish).
    pub fn degree(&self) -> usize {
        words::degree_of(&self.words).unwrap_or(0)
    }

    pub fn has_term(&self, exponent: usize) -> bool {
        words::get_bit(&self.words, exponent)
    }

    /// Exponents in descending order (the canonical print order).
    pub fn exponents(&self) -> Vec<usize> {
        let mut out = Vec::new();
        if let Some(d) = words::degree_of(&self.words) {
            for e in (0..=d).rev() {
                if words::get_bit(&self.words, e) {
                    out.push(e);
                }
            }
        }
        out
    }

    /// Usable as an LFSR feedback: degree >= 1 and constant term present.
    pub fn is_lfsr_feedback(&self) -> bool {
        !self.is_zero() && self.degree() >= 1 && self.has_term(0)
    }

    /// (self * other) mod modulus.
    pub fn mul_mod(&self, other: &Self, modulus: &Self) -> Result<Self, Gf2PolyError> {
        if modulus.is_zero() || modulus.degree() < 1 {
            return Err(Gf2PolyError::ModulusDegree);
        }
        let mut prod = words::mul(&self.words, &other.words);
        words::rem_in_place(&mut prod, &modulus.words);
        Ok(Self::from_words(prod))
    }

    /// self mod modulus.
    pub fn rem(&self, modulus: &Self) -> Result<Self, Gf2PolyError> {
        if modulus.is_zero() || modulus.degree() < 1 {
            return Err(Gf2PolyError::ModulusDegree);
        }
        let mut r = self.words.clone();
        words::rem_in_place(&mut r, &modulus.words);
        Ok(Self::from_words(r))
    }

    /// self^exp mod modulus by square-and-multiply.
    pub fn pow_mod(&self, exp: u128, modulus: &Self) -> Result<Self, Gf2PolyError> {
        let mut result = Self::one().rem(modulus)?;
        let mut base = self.rem(modulus)?;
        let mut e = exp;
        while e != 0 {
            if e & 1 == 1 {
                result = result.mul_mod(&base, modulus)?;
            }
            base = base.mul_mod(&base, modulus)?;
            e >>= 1;
        }
        Ok(result)
    }

    pub fn gcd(&self, other: &Self) -> Self {
        Self::from_words(words::gcd(self.words.clone(), other.words.clone()))
    }

    fn xor(&self, other: &Self) -> Self {
        let mut w = self.words.clone();
        words::xor_shifted(&mut w, &other.words, 0);
        Self::from_words(w)
    }

    /// x^(2^k) mod self, by k squarings.
    fn x_pow_pow2_mod(&self, k: usize) -> Result<Self, Gf2PolyError> {
        let mut t = Self::x().rem(self)?;
        for _ in 0..k {
            t = t.mul_mod(&t, self)?;
        }
        Ok(t)
    }

    /// Rabin's irreducibility test: x^(2^n) == x mod f, and
    /// gcd(x^(2^(n/p)) - x, f) = 1 for every prime p dividing n.
    pub fn is_irreducible(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        let n = self.degree();
        if n == 0 {
            return false;
        }
        if n == 1 {
            return true;
        }
        let x_red = match Self::x().rem(self) {
            Ok(v) => v,
            Err(_) => return false,
        };
        let full = match self.x_pow_pow2_mod(n) {
            Ok(v) => v,
            Err(_) => return false,
        };
        if full != x_red {
            return false;
        }
        for p in factorize(n as u128).distinct_primes() {
            let sub = match self.x_pow_pow2_mod(n / p as usize) {
                Ok(v) => v,
                Err(_) => return false,
            };
            let g = sub.xor(&x_red).gcd(self);
            if !g.is_one() {
                return false;
            }
        }
        true
    }

    /// Order test: true iff ord(x mod self) = 2^n - 1, checked as
    /// x^((2^n-1)/p) != 1 mod self for each prime p of the supplied
    /// factorization of 2^n - 1.
    pub fn is_primitive(&self, factors: &FactorSet) -> Result<bool, Gf2PolyError> {
        if !self.is_irreducible() {
            return Err(Gf2PolyError::NotIrreducible);
        }
        let n = self.degree();
        if n > 127 {
            return Err(Gf2PolyError::DegreeTooLarge(n));
        }
        let target = (1u128 << n) - 1;
        if factors.value() != target {
            return Err(Gf2PolyError::WrongFactorTarget {
                expected: target,
                actual: factors.value(),
            });
        }
        if !self.has_term(0) {
            // only x itself among irreducibles; x has no multiplicative order
            return Ok(false);
        }
        let x = Self::x();
        for p in factors.distinct_primes() {
            if x.pow_mod(target / p, self)?.is_one() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Parses text like "x^39+x^35+x^2+1"; any term order, optional
    /// whitespace, "x" for the linear term, "1" for the constant.
    pub fn from_text(text: &str) -> Result<Self, Gf2PolyError> {
        let bytes = text.as_bytes();
        let mut w: Vec<u64> = Vec::new();
        let mut pos = 0;
        loop {
            while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if pos >= bytes.len() {
                return Err(Gf2PolyError::SyntaxError(pos));
            }
            let e = match bytes[pos] {
                b'1' => {
                    pos += 1;
                    0
                }
                b'x' | b'X' => {
                    pos += 1;
                    if pos < bytes.len() && bytes[pos] == b'^' {
                        pos += 1;
                        let start = pos;
                        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                            pos += 1;
                        }
                        if pos == start {
                            return Err(Gf2PolyError::SyntaxError(start));
                        }
                        text[start..pos]
                            .parse::<usize>()
                            .map_err(|_| Gf2PolyError::SyntaxError(start))?
                    } else {
                        1
                    }
                }
                _ => return Err(Gf2PolyError::SyntaxError(pos)),
            };
            if words::get_bit(&w, e) {
                return Err(Gf2PolyError::DuplicateExponent(e));
            }
            words::set_bit(&mut w, e);
            while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if pos >= bytes.len() {
                break;
            }
            if bytes[pos] != b'+' {
                return Err(Gf2PolyError::SyntaxError(pos));
            }
            pos += 1;
        }
        Ok(Self { words: w })
    }

    /// Canonical text: strictly descending exponents, no whitespace.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.exponents()
            .iter()
            .map(|&e| match e {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{e}"),
            })
            .collect::<Vec<_>>()
            .join("+")
    }
}

impl fmt::Display for FeedbackPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for FeedbackPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FeedbackPolynomial({})", self.to_text())
    }
}

/// LILI-128 feedback polynomial exponent sets, pinned once for every module.
pub const LFSR_C_POLY_EXPS: [usize; 9] = [39, 35, 33, 31, 17, 15, 14, 2, 0];
pub const LFSR_D_POLY_EXPS: [usize; 9] = [89, 83, 80, 55, 53, 42, 39, 1, 0];

pub fn lfsr_c_polynomial() -> FeedbackPolynomial {
    FeedbackPolynomial::from_exponents(&LFSR_C_POLY_EXPS).expect("preset exponents are valid")
}

pub fn lfsr_d_polynomial() -> FeedbackPolynomial {
    FeedbackPolynomial::from_exponents(&LFSR_D_POLY_EXPS).expect("preset exponents are valid")
}
