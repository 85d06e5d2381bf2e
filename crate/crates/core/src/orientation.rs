//! Orientation strings: pointed cycles and words over `{+, -, *}`.
//!
//! A string `x_1 ... x_m` describes a cycle `c_0 c_1 ... c_{m-1} c_0` where
//! symbol `x_i` (1-based) orients the edge `c_{i-1} c_i`. Internally every
//! index is 0-based, so `symbols()[k]` is the edge between vertex `k` and
//! vertex `k + 1 (mod m)`.
//!
//! The same type is used for linear words (concatenations, powers, patterns)
//! and for pointed cycles. Cycle semantics are only applied by the operations
//! that need them ([`OrientationString::has_arc`],
//! [`OrientationString::classify_target`]).

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::OrientationError;

/// Orientation of one edge `c_{i-1} c_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OrientationSymbol {
    /// `+`: the arc `c_{i-1} -> c_i`.
    Forward,
    /// `-`: the arc `c_{i-1} <- c_i`.
    Backward,
    /// `*`: both arcs.
    Symmetric,
}

impl OrientationSymbol {
    pub const ALL: [OrientationSymbol; 3] = [Self::Forward, Self::Backward, Self::Symmetric];

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            '+' => Some(Self::Forward),
            '-' => Some(Self::Backward),
            '*' => Some(Self::Symmetric),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Self::Forward => '+',
            Self::Backward => '-',
            Self::Symmetric => '*',
        }
    }

    /// Swaps `+` and `-`; `*` is fixed.
    pub fn flip(self) -> Self {
        match self {
            Self::Forward => Self::Backward,
            Self::Backward => Self::Forward,
            Self::Symmetric => Self::Symmetric,
        }
    }

    /// Whether the edge carries the arc in the direction of increasing index.
    #[inline]
    pub fn has_forward_arc(self) -> bool {
        !matches!(self, Self::Backward)
    }

    /// Whether the edge carries the arc against the direction of increasing index.
    #[inline]
    pub fn has_backward_arc(self) -> bool {
        !matches!(self, Self::Forward)
    }
}

impl fmt::Display for OrientationSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// A non-empty word over [`OrientationSymbol`], also read as a pointed cycle.
///
/// Cloning is cheap; the symbols are shared.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrientationString {
    symbols: Arc<[OrientationSymbol]>,
}

/// `root` repeated `multiplicity` times reproduces the factored string, and no
/// shorter root does.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootFactorization {
    pub root: OrientationString,
    pub multiplicity: usize,
}

impl RootFactorization {
    /// Length of the root.
    pub fn period(&self) -> usize {
        self.root.len()
    }
}

/// Whether a reflexive target cycle makes reconfiguration trivial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum TargetClass {
    Contractible,
    NonContractibleDirected3Cycle,
    NonContractibleLong,
}

impl TargetClass {
    pub fn is_contractible(self) -> bool {
        self == Self::Contractible
    }
}

impl OrientationString {
    /// Builds a string from symbols. Fails on an empty sequence.
    pub fn from_symbols(symbols: Vec<OrientationSymbol>) -> Result<Self, OrientationError> {
        if symbols.is_empty() {
            return Err(OrientationError::Empty);
        }
        Ok(Self {
            symbols: symbols.into(),
        })
    }

    /// Parses the textual form. Error positions are 1-based character positions.
    pub fn parse(text: &str) -> Result<Self, OrientationError> {
        let symbols = text
            .chars()
            .enumerate()
            .map(|(i, c)| {
                OrientationSymbol::from_char(c).ok_or(OrientationError::InvalidSymbol {
                    position: i + 1,
                    found: c,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_symbols(symbols)
    }

    /// The string of `len` copies of one symbol.
    pub fn uniform(symbol: OrientationSymbol, len: usize) -> Self {
        assert!(len >= 1, "orientation strings are non-empty");
        Self {
            symbols: vec![symbol; len].into(),
        }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[OrientationSymbol] {
        &self.symbols
    }

    pub fn iter(&self) -> std::iter::Copied<std::slice::Iter<'_, OrientationSymbol>> {
        self.symbols.iter().copied()
    }

    /// Symbol at a 0-based index taken modulo the length.
    #[inline]
    pub fn cyclic(&self, index: usize) -> OrientationSymbol {
        self.symbols[index % self.symbols.len()]
    }

    /// `sigma^i`: rotates left by `i` positions, moving the base point to `c_i`.
    pub fn shift(&self, i: usize) -> Self {
        let m = self.len();
        let i = i % m;
        if i == 0 {
            return self.clone();
        }
        let mut symbols = Vec::with_capacity(m);
        symbols.extend_from_slice(&self.symbols[i..]);
        symbols.extend_from_slice(&self.symbols[..i]);
        Self {
            symbols: symbols.into(),
        }
    }

    /// The same cycle traversed in the opposite direction from the same base
    /// point: symbol `j` of the result is `flip(x_{m+1-j})`.
    pub fn reverse(&self) -> Self {
        Self {
            symbols: self.symbols.iter().rev().map(|s| s.flip()).collect(),
        }
    }

    /// `self^k` followed by `suffix`.
    ///
    /// # Panics
    ///
    /// If `k == 0`.
    pub fn concat_power(&self, k: usize, suffix: Option<&OrientationString>) -> Self {
        assert!(k >= 1, "power must be at least 1");
        let extra = suffix.map_or(0, |s| s.len());
        let mut symbols = Vec::with_capacity(k * self.len() + extra);
        for _ in 0..k {
            symbols.extend_from_slice(&self.symbols);
        }
        if let Some(suffix) = suffix {
            symbols.extend_from_slice(&suffix.symbols);
        }
        Self {
            symbols: symbols.into(),
        }
    }

    /// Appends a single symbol.
    pub fn push(&self, symbol: OrientationSymbol) -> Self {
        let mut symbols = self.symbols.to_vec();
        symbols.push(symbol);
        Self {
            symbols: symbols.into(),
        }
    }

    /// Whether `sigma^i(self) == self`, without materializing the shift.
    pub fn is_invariant_under_shift(&self, i: usize) -> bool {
        let m = self.len();
        (0..m).all(|j| self.symbols[j] == self.symbols[(j + i) % m])
    }

    /// Shortest root with `root^r == self`.
    ///
    /// Only divisors of the length can be periods, so each divisor is tried in
    /// increasing order with one linear comparison.
    pub fn primitive_root(&self) -> RootFactorization {
        let n = self.len();
        let period = (1..=n)
            .filter(|i| n % i == 0)
            .find(|&i| self.is_invariant_under_shift(i))
            .unwrap_or(n);
        RootFactorization {
            root: Self {
                symbols: self.symbols[..period].into(),
            },
            multiplicity: n / period,
        }
    }

    pub fn is_primitive(&self) -> bool {
        self.primitive_root().multiplicity == 1
    }

    pub fn is_uniform(&self, symbol: OrientationSymbol) -> bool {
        self.symbols.iter().all(|&s| s == symbol)
    }

    /// All `+` or all `-`.
    pub fn is_directed_cycle(&self) -> bool {
        self.is_uniform(OrientationSymbol::Forward) || self.is_uniform(OrientationSymbol::Backward)
    }

    /// All `*`.
    pub fn is_symmetric_cycle(&self) -> bool {
        self.is_uniform(OrientationSymbol::Symmetric)
    }

    pub fn classify_target(&self) -> Result<TargetClass, OrientationError> {
        match self.len() {
            n if n < 3 => Err(OrientationError::TooShort { len: n }),
            3 if self.is_directed_cycle() => Ok(TargetClass::NonContractibleDirected3Cycle),
            3 => Ok(TargetClass::Contractible),
            _ => Ok(TargetClass::NonContractibleLong),
        }
    }

    /// Arc relation of the reflexive cycle on `Z_n` described by this string.
    ///
    /// Every vertex has a loop; `u -> u+1` needs `+` or `*` on edge `u`, and
    /// `u -> u-1` needs `-` or `*` on edge `u-1`. Vertices are taken mod `n`.
    #[inline]
    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        let n = self.len();
        let (u, v) = (u % n, v % n);
        if u == v {
            true
        } else if v == (u + 1) % n {
            self.symbols[u].has_forward_arc()
        } else if u == (v + 1) % n {
            self.symbols[v].has_backward_arc()
        } else {
            false
        }
    }
}

impl fmt::Display for OrientationString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in self.symbols.iter() {
            write!(f, "{}", s.as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for OrientationString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl FromStr for OrientationString {
    type Err = OrientationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

impl Serialize for OrientationString {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for OrientationString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        Self::parse(&text).map_err(serde::de::Error::custom)
    }
}

/// Every string of length `len`, in lexicographic order of `+ < - < *`.
pub fn all_strings(len: usize) -> impl Iterator<Item = OrientationString> {
    let total = 3usize.pow(len as u32);
    (0..total).map(move |mut code| {
        let mut symbols = vec![OrientationSymbol::Forward; len];
        for slot in symbols.iter_mut().rev() {
            *slot = OrientationSymbol::ALL[code % 3];
            code /= 3;
        }
        OrientationString::from_symbols(symbols).expect("len >= 1")
    })
}
