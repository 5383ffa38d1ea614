//! Boolean-function algebra: algebraic normal form over GF(2), truth
//! tables, the Moebius transform in both directions, variable relabeling,
//! and function metrics.

mod truth;

pub use truth::{FunctionMetrics, TruthTable, WalshSpectrum};

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoolFnError {
    #[error("syntax error at byte {0}")]
    SyntaxError(usize),
    #[error("variable x{var} out of range 1..={max}")]
    VariableOutOfRange { var: usize, max: usize },
    #[error("input has bits above variable {n}")]
    WidthMismatch { n: usize },
    #[error("truth table incomplete: {missing} entries undefined")]
    IncompleteTable { missing: usize },
    #[error("{n} variables exceeds the truth-table limit of {max}")]
    TooManyVariables { n: usize, max: usize },
    #[error("relabel map is not injective")]
    NonInjectiveMap,
    #[error("relabel target x{target} out of range 1..={max}")]
    TargetOutOfRange { target: usize, max: usize },
}

/// Most variables an `AnfPolynomial` can carry (monomial masks are 128-bit).
pub const MAX_VARIABLES: usize = 128;

/// Largest variable count for which truth tables are materialized.
pub const MAX_TABLE_VARIABLES: usize = 24;

/// A product of variables, encoded as a mask: bit `i-1` set means `x_i`
/// is a factor. The empty mask is the constant 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(u128);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn from_mask(mask: u128) -> Self {
        Monomial(mask)
    }

    pub fn from_vars(vars: &[usize]) -> Self {
        let mut mask = 0u128;
        for &v in vars {
            debug_assert!((1..=MAX_VARIABLES).contains(&v));
            mask |= 1 << (v - 1);
        }
        Monomial(mask)
    }

    pub fn mask(&self) -> u128 {
        self.0
    }

    pub fn degree(&self) -> usize {
        self.0.count_ones() as usize
    }

    /// Variable indices, descending (the canonical print order).
    pub fn vars(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.degree());
        let mut m = self.0;
        while m != 0 {
            let top = 127 - m.leading_zeros() as usize;
            out.push(top + 1);
            m ^= 1 << top;
        }
        out
    }

    pub fn evaluates_to_one(&self, input: u128) -> bool {
        input & self.0 == self.0
    }

    fn text(&self) -> String {
        if self.0 == 0 {
            return "1".to_string();
        }
        self.vars()
            .iter()
            .map(|v| format!("x{v}"))
            .collect::<Vec<_>>()
            .join("*")
    }
}

/// A Boolean function in algebraic normal form: an XOR-sum of monomials
/// over variables x1..xn (GF(2) coefficients, set semantics).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AnfPolynomial {
    n: usize,
    monomials: Vec<Monomial>, // sorted by mask, no duplicates
}

impl AnfPolynomial {
    /// The zero function of `n` variables.
    pub fn zero(n: usize) -> Result<Self, BoolFnError> {
        if n > MAX_VARIABLES {
            return Err(BoolFnError::TooManyVariables {
                n,
                max: MAX_VARIABLES,
            });
        }
        Ok(Self {
            n,
            monomials: Vec::new(),
        })
    }

    /// Builds from monomial masks; a mask appearing an even number of
    /// times cancels out.
    pub fn from_masks(
        n: usize,
        masks: impl IntoIterator<Item = u128>,
    ) -> Result<Self, BoolFnError> {
        let mut anf = Self::zero(n)?;
        let limit = if n == 128 { u128::MAX } else { (1 << n) - 1 };
        let mut set = std::collections::BTreeSet::new();
        for mask in masks {
            if mask & !limit != 0 {
                let var = 128 - (mask & !limit).leading_zeros() as usize;
                return Err(BoolFnError::VariableOutOfRange { var, max: n });
            }
            if !set.insert(mask) {
                set.remove(&mask);
            }
        }
        anf.monomials = set.into_iter().map(Monomial::from_mask).collect();
        Ok(anf)
    }

    pub fn variables(&self) -> usize {
        self.n
    }

    /// Monomials sorted ascending by mask.
    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn term_count(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_zero(&self) -> bool {
        self.monomials.is_empty()
    }

    /// Highest monomial degree; 0 for the zero function (term_count
    /// distinguishes the zero function from the constant 1).
    pub fn degree(&self) -> usize {
        self.monomials
            .iter()
            .map(|m| m.degree())
            .max()
            .unwrap_or(0)
    }

    pub fn contains(&self, m: Monomial) -> bool {
        self.monomials.binary_search(&m).is_ok()
    }

    /// Terms of each degree 1..=degree; index 0 counts degree-1 terms.
    pub fn degree_profile(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.degree()];
        for m in &self.monomials {
            if m.degree() >= 1 {
                counts[m.degree() - 1] += 1;
            }
        }
        counts
    }

    /// XOR over monomials of AND over their variables. Input bit `i-1`
    /// is the value of `x_i`; bits at or above `n` must be clear.
    pub fn evaluate(&self, input: u128) -> Result<u8, BoolFnError> {
        if self.n < 128 && input >> self.n != 0 {
            return Err(BoolFnError::WidthMismatch { n: self.n });
        }
        Ok(self.evaluate_unchecked(input))
    }

    pub(crate) fn evaluate_unchecked(&self, input: u128) -> u8 {
        let mut acc = 0u8;
        for m in &self.monomials {
            acc ^= m.evaluates_to_one(input) as u8;
        }
        acc
    }

    /// Replaces each `x_j` by `x_map[j-1]` inside a space of `target_n`
    /// variables. The map must be injective.
    pub fn relabel(&self, map: &[usize], target_n: usize) -> Result<Self, BoolFnError> {
        if map.len() != self.n {
            return Err(BoolFnError::NonInjectiveMap);
        }
        if target_n > MAX_VARIABLES {
            return Err(BoolFnError::TooManyVariables {
                n: target_n,
                max: MAX_VARIABLES,
            });
        }
        let mut seen = std::collections::BTreeSet::new();
        for &t in map {
            if t < 1 || t > target_n {
                return Err(BoolFnError::TargetOutOfRange {
                    target: t,
                    max: target_n,
                });
            }
            if !seen.insert(t) {
                return Err(BoolFnError::NonInjectiveMap);
            }
        }
        let masks = self.monomials.iter().map(|m| {
            let mut out = 0u128;
            for (j, &t) in map.iter().enumerate() {
                if m.mask() >> j & 1 == 1 {
                    out |= 1 << (t - 1);
                }
            }
            out
        });
        let masks: Vec<u128> = masks.collect();
        Self::from_masks(target_n, masks)
    }

    /// Monomials in canonical order: ascending degree, then descending
    /// mask (highest variables first within a degree class).
    pub fn canonical_monomials(&self) -> Vec<Monomial> {
        let mut ms = self.monomials.clone();
        ms.sort_by_key(|m| (m.degree(), std::cmp::Reverse(m.mask())));
        ms
    }

    /// Canonical text form; `parse` of the result gives back `self`.
    pub fn to_text(&self) -> String {
        if self.monomials.is_empty() {
            return "0".to_string();
        }
        self.canonical_monomials()
            .iter()
            .map(Monomial::text)
            .collect::<Vec<_>>()
            .join("+")
    }

    /// Parses the ANF grammar: terms joined by '+', factors joined by '*',
    /// variables "x<k>" with 1 <= k <= n, literals "0"/"1", case-insensitive,
    /// whitespace ignored. Repeated variables collapse; duplicate terms
    /// cancel in pairs.
    pub fn parse(text: &str, n: usize) -> Result<Self, BoolFnError> {
        if n > MAX_VARIABLES {
            return Err(BoolFnError::TooManyVariables {
                n,
                max: MAX_VARIABLES,
            });
        }
        let bytes = text.as_bytes();
        let mut pos = 0usize;
        let mut terms = std::collections::BTreeSet::new();

        let skip_ws = |pos: &mut usize| {
            while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
                *pos += 1;
            }
        };

        loop {
            // one term: factors joined by '*'
            let mut mask = 0u128;
            let mut annihilated = false;
            loop {
                skip_ws(&mut pos);
                if pos >= bytes.len() {
                    return Err(BoolFnError::SyntaxError(pos));
                }
                match bytes[pos] {
                    b'0' => {
                        annihilated = true;
                        pos += 1;
                    }
                    b'1' => {
                        pos += 1;
                    }
                    b'x' | b'X' => {
                        pos += 1;
                        let start = pos;
                        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                            pos += 1;
                        }
                        if pos == start {
                            return Err(BoolFnError::SyntaxError(start));
                        }
                        let var: usize = text[start..pos]
                            .parse()
                            .map_err(|_| BoolFnError::SyntaxError(start))?;
                        if var < 1 || var > n {
                            return Err(BoolFnError::VariableOutOfRange { var, max: n });
                        }
                        mask |= 1 << (var - 1);
                    }
                    _ => return Err(BoolFnError::SyntaxError(pos)),
                }
                skip_ws(&mut pos);
                if pos < bytes.len() && bytes[pos] == b'*' {
                    pos += 1;
                    continue;
                }
                break;
            }
            if !annihilated && !terms.insert(mask) {
                terms.remove(&mask);
            }
            skip_ws(&mut pos);
            if pos >= bytes.len() {
                break;
            }
            if bytes[pos] != b'+' {
                return Err(BoolFnError::SyntaxError(pos));
            }
            pos += 1;
        }

        Ok(Self {
            n,
            monomials: terms.into_iter().map(Monomial::from_mask).collect(),
        })
    }
}

impl fmt::Display for AnfPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Reads the ANF file format: an optional first-line comment "# n=<k>"
/// carrying the variable count, then a single expression. Without the
/// header the variable count is inferred from the highest index used.
pub fn read_anf_text(content: &str) -> Result<AnfPolynomial, BoolFnError> {
    let mut n: Option<usize> = None;
    let mut expr = String::new();
    for line in content.lines() {
        let trimmed = line.trim();
        if trimmed.starts_with('#') {
            if n.is_none() {
                if let Some(idx) = trimmed.find("n=") {
                    n = trimmed[idx + 2..]
                        .trim()
                        .parse::<usize>()
                        .ok()
                        .filter(|&v| v >= 1);
                }
            }
            continue;
        }
        expr.push_str(line);
        expr.push(' ');
    }
    let n = match n {
        Some(v) => v,
        None => infer_variable_count(&expr),
    };
    AnfPolynomial::parse(expr.trim(), n)
}

fn infer_variable_count(expr: &str) -> usize {
    let bytes = expr.as_bytes();
    let mut max_var = 1usize;
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'x' || bytes[i] == b'X' {
            let start = i + 1;
            let mut end = start;
            while end < bytes.len() && bytes[end].is_ascii_digit() {
                end += 1;
            }
            if end > start {
                if let Ok(v) = expr[start..end].parse::<usize>() {
                    max_var = max_var.max(v);
                }
            }
            i = end;
        } else {
            i += 1;
        }
    }
    max_var
}

/// Writes the ANF file format with the variable-count header.
pub fn write_anf_text(f: &AnfPolynomial) -> String {
    format!("# n={}\n{}\n", f.variables(), f.to_text())
}
