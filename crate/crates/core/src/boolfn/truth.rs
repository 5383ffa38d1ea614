//! Truth tables (possibly partial), the packed Moebius butterfly, the
//! Walsh-Hadamard spectrum, and derived function metrics.

use super::{AnfPolynomial, BoolFnError, MAX_TABLE_VARIABLES};

/// 2^n output bits of an n-variable Boolean function. Assignment
/// (x_1..x_n) maps to index sum(x_i * 2^(i-1)): x_1 is the least
/// significant index bit. `defined` marks which entries are known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthTable {
    n: usize,
    outputs: Vec<u64>,
    defined: Vec<u64>,
}

fn word_len(n: usize) -> usize {
    if n >= 6 {
        1 << (n - 6)
    } else {
        1
    }
}

fn tail_mask(n: usize) -> u64 {
    if n >= 6 {
        u64::MAX
    } else {
        (1u64 << (1 << n)) - 1
    }
}

impl TruthTable {
    /// All entries undefined.
    pub fn empty(n: usize) -> Result<Self, BoolFnError> {
        if n > MAX_TABLE_VARIABLES {
            return Err(BoolFnError::TooManyVariables {
                n,
                max: MAX_TABLE_VARIABLES,
            });
        }
        Ok(Self {
            n,
            outputs: vec![0; word_len(n)],
            defined: vec![0; word_len(n)],
        })
    }

    /// A complete table with the given output bits (values taken mod 2).
    pub fn from_bits(n: usize, bits: &[u8]) -> Result<Self, BoolFnError> {
        let mut t = Self::empty(n)?;
        assert_eq!(bits.len(), 1 << n, "expected 2^n output bits");
        for (i, &b) in bits.iter().enumerate() {
            t.set(i, b & 1);
        }
        Ok(t)
    }

    pub fn variables(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        1 << self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, index: usize) -> Option<u8> {
        debug_assert!(index < self.len());
        if self.defined[index / 64] >> (index % 64) & 1 == 1 {
            Some((self.outputs[index / 64] >> (index % 64) & 1) as u8)
        } else {
            None
        }
    }

    pub fn set(&mut self, index: usize, bit: u8) {
        debug_assert!(index < self.len());
        self.defined[index / 64] |= 1 << (index % 64);
        if bit & 1 == 1 {
            self.outputs[index / 64] |= 1 << (index % 64);
        } else {
            self.outputs[index / 64] &= !(1 << (index % 64));
        }
    }

    pub fn defined_count(&self) -> usize {
        self.defined.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_complete(&self) -> bool {
        let tail = tail_mask(self.n);
        self.defined[..self.defined.len() - 1]
            .iter()
            .all(|&w| w == u64::MAX)
            && *self.defined.last().unwrap() == tail
    }

    pub fn undefined_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.get(i).is_none()).collect()
    }

    /// Number of ones among the defined entries.
    pub fn weight(&self) -> u64 {
        self.outputs
            .iter()
            .zip(&self.defined)
            .map(|(&o, &d)| (o & d).count_ones() as u64)
            .sum()
    }

    /// Moebius transform: complete table -> ANF monomial set.
    pub fn to_anf(&self) -> Result<AnfPolynomial, BoolFnError> {
        if !self.is_complete() {
            return Err(BoolFnError::IncompleteTable {
                missing: self.len() - self.defined_count(),
            });
        }
        let mut words = self.outputs.clone();
        moebius_butterfly(&mut words, self.n);
        let masks = (0..self.len())
            .filter(|&i| words[i / 64] >> (i % 64) & 1 == 1)
            .map(|i| i as u128);
        AnfPolynomial::from_masks(self.n, masks)
    }

    /// Walsh-Hadamard spectrum of a complete table.
    pub fn walsh_spectrum(&self) -> Result<WalshSpectrum, BoolFnError> {
        if !self.is_complete() {
            return Err(BoolFnError::IncompleteTable {
                missing: self.len() - self.defined_count(),
            });
        }
        let mut a: Vec<i32> = (0..self.len())
            .map(|i| 1 - 2 * self.get(i).unwrap() as i32)
            .collect();
        for s in 0..self.n {
            let d = 1usize << s;
            let mut base = 0;
            while base < a.len() {
                for j in base..base + d {
                    let u = a[j];
                    let v = a[j + d];
                    a[j] = u + v;
                    a[j + d] = u - v;
                }
                base += 2 * d;
            }
        }
        Ok(WalshSpectrum {
            n: self.n,
            coefficients: a,
        })
    }
}

impl AnfPolynomial {
    /// Evaluates the function at every input via the packed zeta
    /// butterfly (the inverse direction of `TruthTable::to_anf`).
    pub fn to_truth_table(&self) -> Result<TruthTable, BoolFnError> {
        let n = self.variables();
        if n > MAX_TABLE_VARIABLES {
            return Err(BoolFnError::TooManyVariables {
                n,
                max: MAX_TABLE_VARIABLES,
            });
        }
        let mut words = vec![0u64; word_len(n)];
        for m in self.monomials() {
            let i = m.mask() as usize;
            words[i / 64] |= 1 << (i % 64);
        }
        moebius_butterfly(&mut words, n);
        Ok(TruthTable {
            n,
            defined: {
                let mut d = vec![u64::MAX; word_len(n)];
                *d.last_mut().unwrap() = tail_mask(n);
                d
            },
            outputs: words,
        })
    }

    /// Truth-table-backed metrics; requires n <= 24.
    pub fn metrics(&self) -> Result<FunctionMetrics, BoolFnError> {
        let table = self.to_truth_table()?;
        let spectrum = table.walsh_spectrum()?;
        let n = self.variables();
        let weight = table.weight();
        let half = if n >= 1 { 1u64 << (n - 1) } else { 0 };
        Ok(FunctionMetrics {
            variables: n,
            degree: self.degree(),
            terms: self.term_count(),
            weight,
            balanced: n >= 1 && weight == half,
            nonlinearity: half.saturating_sub(spectrum.max_abs() as u64 / 2),
        })
    }
}

/// In-place zeta/Moebius butterfly over GF(2) on a packed table of 2^n
/// bits (self-inverse).
fn moebius_butterfly(words: &mut [u64], n: usize) {
    const IN_WORD: [u64; 6] = [
        0x5555_5555_5555_5555,
        0x3333_3333_3333_3333,
        0x0f0f_0f0f_0f0f_0f0f,
        0x00ff_00ff_00ff_00ff,
        0x0000_ffff_0000_ffff,
        0x0000_0000_ffff_ffff,
    ];
    for (s, &mask) in IN_WORD.iter().enumerate().take(n.min(6)) {
        let shift = 1usize << s;
        for w in words.iter_mut() {
            *w ^= (*w & mask) << shift;
        }
    }
    for s in 6..n {
        let d = 1usize << (s - 6);
        let mut base = 0;
        while base < words.len() {
            for j in base..base + d {
                words[j + d] ^= words[j];
            }
            base += 2 * d;
        }
    }
}

/// Correlations with all linear functions: coefficient[w] =
/// sum over x of (-1)^(f(x) xor w.x).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalshSpectrum {
    n: usize,
    coefficients: Vec<i32>,
}

impl WalshSpectrum {
    pub fn variables(&self) -> usize {
        self.n
    }

    pub fn coefficients(&self) -> &[i32] {
        &self.coefficients
    }

    pub fn max_abs(&self) -> u32 {
        self.coefficients
            .iter()
            .map(|c| c.unsigned_abs())
            .max()
            .unwrap_or(0)
    }

    /// Parseval: the squared coefficients must sum to 2^(2n).
    pub fn parseval_holds(&self) -> bool {
        let sum: u64 = self
            .coefficients
            .iter()
            .map(|&c| (c as i64 * c as i64) as u64)
            .sum();
        sum == 1u64 << (2 * self.n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FunctionMetrics {
    pub variables: usize,
    pub degree: usize,
    pub terms: usize,
    pub weight: u64,
    pub balanced: bool,
    pub nonlinearity: u64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_variable_table() {
        // f = x1 over 2 variables: outputs follow the LSB of the index
        let f = AnfPolynomial::parse("x1", 2).unwrap();
        let t = f.to_truth_table().unwrap();
        let bits: Vec<u8> = (0..4).map(|i| t.get(i).unwrap()).collect();
        assert_eq!(bits, vec![0, 1, 0, 1]);
    }

    #[test]
    fn zero_function_table() {
        let f = AnfPolynomial::zero(3).unwrap();
        let t = f.to_truth_table().unwrap();
        assert_eq!(t.weight(), 0);
        assert!(t.is_complete());
        assert!(t.to_anf().unwrap().is_zero());
    }

    #[test]
    fn point_indicators() {
        // indicator of the all-ones point is the single top monomial
        let mut t = TruthTable::empty(2).unwrap();
        for i in 0..4 {
            t.set(i, if i == 3 { 1 } else { 0 });
        }
        assert_eq!(t.to_anf().unwrap().to_text(), "x2*x1");

        // indicator of the all-zeros point fans out over every monomial
        let mut t = TruthTable::empty(2).unwrap();
        for i in 0..4 {
            t.set(i, if i == 0 { 1 } else { 0 });
        }
        assert_eq!(t.to_anf().unwrap().to_text(), "1+x2+x1+x2*x1");
    }

    #[test]
    fn butterfly_matches_direct_evaluation() {
        let f = AnfPolynomial::parse("x4*x2*x1 + x3 + x2 + 1", 4).unwrap();
        let t = f.to_truth_table().unwrap();
        for i in 0..16u128 {
            assert_eq!(t.get(i as usize).unwrap(), f.evaluate(i).unwrap());
        }
    }

    #[test]
    fn incomplete_table_rejected() {
        let mut t = TruthTable::empty(3).unwrap();
        t.set(0, 1);
        assert!(matches!(
            t.to_anf(),
            Err(BoolFnError::IncompleteTable { missing: 7 })
        ));
        assert_eq!(t.undefined_indices().len(), 7);
    }

    #[test]
    fn walsh_of_linear_function() {
        // f = x1: spectrum has a single +-2^n peak at mask 1
        let f = AnfPolynomial::parse("x1", 3).unwrap();
        let s = f.to_truth_table().unwrap().walsh_spectrum().unwrap();
        assert!(s.parseval_holds());
        assert_eq!(s.coefficients()[1].unsigned_abs(), 8);
        assert_eq!(s.max_abs(), 8);
        let m = f.metrics().unwrap();
        assert!(m.balanced);
        assert_eq!(m.nonlinearity, 0);
    }

    #[test]
    fn metrics_of_bent_like_function() {
        // x1*x2 is bent in 2 variables: nonlinearity 1, weight 1
        let f = AnfPolynomial::parse("x1*x2", 2).unwrap();
        let m = f.metrics().unwrap();
        assert_eq!(m.weight, 1);
        assert!(!m.balanced);
        assert_eq!(m.nonlinearity, 1);
        assert_eq!(m.degree, 2);
    }

    #[test]
    fn metrics_refuse_large_variable_counts() {
        let f = AnfPolynomial::zero(30).unwrap();
        assert!(matches!(
            f.metrics(),
            Err(BoolFnError::TooManyVariables { n: 30, max: 24 })
        ));
    }

    #[test]
    fn zero_function_metrics() {
        let f = AnfPolynomial::zero(4).unwrap();
        let m = f.metrics().unwrap();
        assert_eq!(m.terms, 0);
        assert_eq!(m.degree, 0);
        assert_eq!(m.weight, 0);
        assert!(!m.balanced);
    }
}
