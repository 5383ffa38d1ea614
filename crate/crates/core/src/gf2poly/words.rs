//! Raw dense-bitset helpers for GF(2)[x] coefficient vectors.
//!
//! Bit `i` of the word vector is the coefficient of `x^i`. The zero
//! polynomial is the all-zero (or empty) vector; callers that need the
//! nonzero invariant enforce it above this layer.

pub(crate) fn degree_of(words: &[u64]) -> Option<usize> {
    for (wi, &w) in words.iter().enumerate().rev() {
        if w != 0 {
            return Some(wi * 64 + (63 - w.leading_zeros() as usize));
        }
    }
    None
}

pub(crate) fn get_bit(words: &[u64], i: usize) -> bool {
    let wi = i / 64;
    wi < words.len() && (words[wi] >> (i % 64)) & 1 == 1
}

pub(crate) fn set_bit(words: &mut Vec<u64>, i: usize) {
    let wi = i / 64;
    if wi >= words.len() {
        words.resize(wi + 1, 0);
    }
    words[wi] |= 1 << (i % 64);
}

pub(crate) fn is_zero(words: &[u64]) -> bool {
    words.iter().all(|&w| w == 0)
}

pub(crate) fn trim(words: &mut Vec<u64>) {
    while words.last() == Some(&0) {
        words.pop();
    }
}

/// dst ^= src << shift
pub(crate) fn xor_shifted(dst: &mut Vec<u64>, src: &[u64], shift: usize) {
    let (wshift, bshift) = (shift / 64, shift % 64);
    let need = src.len() + wshift + 1;
    if dst.len() < need {
        dst.resize(need, 0);
    }
    if bshift == 0 {
        for (i, &w) in src.iter().enumerate() {
            dst[i + wshift] ^= w;
        }
    } else {
        let mut carry = 0u64;
        for (i, &w) in src.iter().enumerate() {
            dst[i + wshift] ^= (w << bshift) | carry;
            carry = w >> (64 - bshift);
        }
        dst[src.len() + wshift] ^= carry;
    }
    trim(dst);
}

/// r <- r mod m (m nonzero)
pub(crate) fn rem_in_place(r: &mut Vec<u64>, m: &[u64]) {
    let md = degree_of(m).expect("modulus must be nonzero");
    while let Some(rd) = degree_of(r) {
        if rd < md {
            break;
        }
        xor_shifted(r, m, rd - md);
    }
    trim(r);
}

/// Schoolbook product a*b (no reduction).
pub(crate) fn mul(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = Vec::new();
    for (wi, &w) in a.iter().enumerate() {
        let mut bits = w;
        while bits != 0 {
            let bit = bits.trailing_zeros() as usize;
            xor_shifted(&mut out, b, wi * 64 + bit);
            bits &= bits - 1;
        }
    }
    out
}

pub(crate) fn gcd(mut a: Vec<u64>, mut b: Vec<u64>) -> Vec<u64> {
    trim(&mut a);
    trim(&mut b);
    while !is_zero(&b) {
        rem_in_place(&mut a, &b);
        std::mem::swap(&mut a, &mut b);
    }
    a
}
