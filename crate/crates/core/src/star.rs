//! The `<=*` relation on orientation strings and the streaming counters
//! built on it.
//!
//! `P <=* C` holds when some strictly increasing selection of positions of `C`
//! spells `P` after turning some letters into `*`. Equivalently each pattern
//! symbol is `*` or equal to the selected text symbol; a `*` in the text only
//! matches a `*` in the pattern.
//!
//! Greedy leftmost matching is optimal for subsequence embedding, so every
//! question here is answered with one left-to-right pass that keeps a pointer
//! into the pattern and a match counter.

use std::fmt;

use serde::Serialize;

use crate::orientation::{OrientationString, OrientationSymbol};

/// `pattern` symbol may be selected at a `text` symbol.
#[inline]
pub fn symbol_matches(pattern: OrientationSymbol, text: OrientationSymbol) -> bool {
    pattern == OrientationSymbol::Symmetric || pattern == text
}

/// Strictly increasing 1-based positions `alpha(1) < ... < alpha(p)` of the text.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct SelectionFunction(Vec<usize>);

impl SelectionFunction {
    /// Checks strict increase and the `[1, text_len]` range.
    pub fn new(indices: Vec<usize>, text_len: usize) -> Option<Self> {
        let increasing = indices.windows(2).all(|w| w[0] < w[1]);
        let in_range = indices.iter().all(|&i| (1..=text_len).contains(&i));
        (increasing && in_range).then_some(Self(indices))
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Whether this selection embeds `pattern` into `text`.
    pub fn witnesses(&self, pattern: &OrientationString, text: &OrientationString) -> bool {
        self.0.len() == pattern.len()
            && self.0.iter().all(|&i| (1..=text.len()).contains(&i))
            && self.0.windows(2).all(|w| w[0] < w[1])
            && pattern
                .iter()
                .zip(&self.0)
                .all(|(p, &i)| symbol_matches(p, text.symbols()[i - 1]))
    }
}

impl fmt::Display for SelectionFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

/// Lexicographically least selection embedding `pattern` into `text`, if any.
pub fn leftmost_embedding(
    pattern: &OrientationString,
    text: &OrientationString,
) -> Option<SelectionFunction> {
    let mut selected = Vec::with_capacity(pattern.len());
    let mut wanted = pattern.iter().peekable();
    for (pos, x) in text.iter().enumerate() {
        match wanted.peek() {
            Some(&y) if symbol_matches(y, x) => {
                selected.push(pos + 1);
                wanted.next();
            }
            Some(_) => {}
            None => break,
        }
    }
    (wanted.peek().is_none()).then_some(SelectionFunction(selected))
}

/// Result of one greedy pass of a repeated root over a text.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StreamCount {
    /// Symbols of `root^infinity` matched greedily.
    pub matched: usize,
    pub root_len: usize,
}

impl StreamCount {
    /// Complete copies of the root that were matched.
    pub fn power(&self) -> usize {
        self.matched / self.root_len
    }

    /// `ceil(matched / root_len)`; reported for comparison only.
    pub fn ceiling_power(&self) -> usize {
        self.matched.div_ceil(self.root_len)
    }
}

/// Greedy pass of `root^infinity` over `text`, starting at root position `start`
/// (i.e. matching the shift `sigma^start(root)`).
///
/// Working state is the root pointer and the match counter; the text is
/// consumed once, symbol by symbol.
#[inline]
pub fn stream_count_from<I>(root: &[OrientationSymbol], start: usize, text: I) -> StreamCount
where
    I: IntoIterator<Item = OrientationSymbol>,
{
    let p = root.len();
    assert!(p >= 1, "root must be non-empty");
    let mut d = start % p;
    let mut c = 0usize;
    for x in text {
        if symbol_matches(root[d], x) {
            d += 1;
            if d == p {
                d = 0;
            }
            c += 1;
        }
    }
    StreamCount {
        matched: c,
        root_len: p,
    }
}

/// Greedy pass of `root^infinity` over `text`.
pub fn greedy_stream_count<I>(root: &OrientationString, text: I) -> StreamCount
where
    I: IntoIterator<Item = OrientationSymbol>,
{
    stream_count_from(root.symbols(), 0, text)
}

/// Largest `R` with `root^R <=* text` (0 if not even one copy embeds).
pub fn max_power(root: &OrientationString, text: &OrientationString) -> usize {
    greedy_stream_count(root, text.iter()).power()
}

/// Largest `R` such that `sigma^i(root)^R <=* text` for some shift `i`, with the
/// smallest such `i`.
pub fn max_power_over_shifts(root: &OrientationString, text: &OrientationString) -> (usize, usize) {
    let mut best = (0, 0);
    for i in 0..root.len() {
        let r = stream_count_from(root.symbols(), i, text.iter()).power();
        if r > best.0 {
            best = (r, i);
        }
    }
    best
}

/// Shifts `i` in `[0, s)` such that `sigma^i(root)^k` followed by the first
/// symbol of `sigma^i(root)` embeds in `text`.
///
/// The test string has `k*s + 1` symbols and is a prefix of
/// `sigma^i(root)^infinity`, so membership is a threshold on the greedy count.
pub fn gamma_set(root: &OrientationString, text: &OrientationString, k: usize) -> Vec<usize> {
    shifts_reaching(root, text, k * root.len() + 1)
}

/// Shifts `i` whose greedy count reaches `threshold`.
pub(crate) fn shifts_reaching(
    root: &OrientationString,
    text: &OrientationString,
    threshold: usize,
) -> Vec<usize> {
    (0..root.len())
        .filter(|&i| stream_count_from(root.symbols(), i, text.iter()).matched >= threshold)
        .collect()
}
