//! Berlekamp-Massey over GF(2) with a full linear-complexity profile.

use super::{words, FeedbackPolynomial, Gf2PolyError};

/// Shortest-LFSR length after each prefix, plus the final connection
/// polynomial C(x) = 1 + c_1 x + ... (constant term always present).
///
/// The sequence convention: the first bit fed in is sequence index 1, and
/// the recurrence reads s_j = XOR of s_{j-e} over the nonzero exponents e
/// of the connection polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearComplexityProfile {
    complexities: Vec<usize>,
    final_connection: FeedbackPolynomial,
}

impl LinearComplexityProfile {
    /// L_1..L_m, the complexity after each prefix length.
    pub fn complexities(&self) -> &[usize] {
        &self.complexities
    }

    pub fn final_complexity(&self) -> usize {
        *self.complexities.last().expect("profile is never empty")
    }

    pub fn final_connection(&self) -> &FeedbackPolynomial {
        &self.final_connection
    }

    /// True iff seeding an LFSR of length L with the first L bits and
    /// clocking the connection recurrence reproduces `bits` exactly.
    pub fn regenerates(&self, bits: &[u8]) -> bool {
        let l = self.final_complexity();
        if l == 0 {
            return bits.iter().all(|&b| b & 1 == 0);
        }
        let exps = self.final_connection.exponents();
        for j in l..bits.len() {
            let mut acc = 0u8;
            for &e in &exps {
                if e >= 1 {
                    acc ^= bits[j - e] & 1;
                }
            }
            if acc != bits[j] & 1 {
                return false;
            }
        }
        true
    }
}

/// Runs Berlekamp-Massey over the bit sequence (values taken mod 2).
pub fn berlekamp_massey(bits: &[u8]) -> Result<LinearComplexityProfile, Gf2PolyError> {
    if bits.is_empty() {
        return Err(Gf2PolyError::EmptyInput);
    }
    let mut c: Vec<u64> = vec![1];
    let mut b: Vec<u64> = vec![1];
    let mut l: usize = 0;
    let mut m: i64 = -1;
    let mut complexities = Vec::with_capacity(bits.len());
    for i in 0..bits.len() {
        let mut d = bits[i] & 1;
        for j in 1..=l {
            if words::get_bit(&c, j) {
                d ^= bits[i - j] & 1;
            }
        }
        if d == 1 {
            let shift = (i as i64 - m) as usize;
            if 2 * l <= i {
                let t = c.clone();
                words::xor_shifted(&mut c, &b, shift);
                l = i + 1 - l;
                m = i as i64;
                b = t;
            } else {
                words::xor_shifted(&mut c, &b, shift);
            }
        }
        complexities.push(l);
    }
    words::trim(&mut c);
    let final_connection = FeedbackPolynomial { words: c };
    Ok(LinearComplexityProfile {
        complexities,
        final_connection,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bm_checked(bits: &[u8]) -> LinearComplexityProfile {
        let profile = berlekamp_massey(bits).unwrap();
        assert!(profile.regenerates(bits), "connection fails to regenerate");
        profile
    }

    #[test]
    fn zero_sequence() {
        let profile = bm_checked(&[0, 0, 0, 0]);
        assert_eq!(profile.complexities(), &[0, 0, 0, 0]);
        assert!(profile.final_connection().is_one());
    }

    #[test]
    fn impulse_tail() {
        // 0^{k-1} 1 forces L = k
        let profile = bm_checked(&[0, 0, 1]);
        assert_eq!(profile.final_complexity(), 3);
    }

    #[test]
    fn empty_input_rejected() {
        assert_eq!(berlekamp_massey(&[]).unwrap_err(), Gf2PolyError::EmptyInput);
    }

    #[test]
    fn recovers_known_recurrence() {
        // s_j = s_{j-5} xor s_{j-9}: connection x^9+x^5+1
        let mut bits = vec![0u8; 9];
        bits[8] = 1;
        for j in 9..60 {
            let b = bits[j - 5] ^ bits[j - 9];
            bits.push(b);
        }
        let profile = bm_checked(&bits);
        assert_eq!(profile.final_complexity(), 9);
        assert_eq!(profile.final_connection().exponents(), vec![9, 5, 0]);
    }

    #[test]
    fn profile_obeys_jump_rule() {
        let bits: Vec<u8> = (0..200u32)
            .map(|i| (i.wrapping_mul(2654435761) >> 13) as u8 & 1)
            .collect();
        let profile = bm_checked(&bits);
        let mut prev = 0usize;
        for (i, &l) in profile.complexities().iter().enumerate() {
            assert!(l >= prev, "profile must be non-decreasing");
            assert!(l <= i + 1);
            if l != prev {
                assert_eq!(l, i + 1 - prev, "jump must satisfy the update rule");
            }
            prev = l;
        }
    }
}
