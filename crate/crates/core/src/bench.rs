//! Timing of the streaming counter on random texts of growing length.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::orientation::{OrientationString, OrientationSymbol};
use crate::star::greedy_stream_count;

#[derive(Clone, Debug, Serialize)]
pub struct BenchRow {
    pub length: usize,
    pub best: Duration,
    pub mean: Duration,
    /// Matched symbols, identical across trials of one length.
    pub matched: usize,
}

impl BenchRow {
    pub fn nanos_per_symbol(&self) -> f64 {
        self.best.as_nanos() as f64 / self.length as f64
    }
}

/// Uniformly random text over `+ - *`.
pub fn random_text(length: usize, rng: &mut impl Rng) -> Vec<OrientationSymbol> {
    (0..length)
        .map(|_| OrientationSymbol::ALL[rng.random_range(0..3)])
        .collect()
}

/// Lengths `min, 2*min, ...` up to and including `max`.
pub fn doubling_lengths(min: usize, max: usize) -> Vec<usize> {
    let mut lengths = Vec::new();
    let mut length = min.max(1);
    while length <= max {
        lengths.push(length);
        length *= 2;
    }
    lengths
}

/// Times the greedy count of `root^infinity` over one random text per length.
///
/// All `trials * lengths` runs are shuffled with `seed` so slow drift in the
/// machine does not line up with the length.
pub fn run(root: &OrientationString, lengths: &[usize], trials: usize, seed: u64) -> Vec<BenchRow> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let texts: Vec<Vec<OrientationSymbol>> = lengths.iter().map(|&l| random_text(l, &mut rng)).collect();
    let mut schedule: Vec<usize> = (0..lengths.len()).flat_map(|i| std::iter::repeat_n(i, trials.max(1))).collect();
    schedule.shuffle(&mut rng);

    let mut times = vec![Vec::new(); lengths.len()];
    let mut matched = vec![0usize; lengths.len()];
    for i in schedule {
        let start = Instant::now();
        let count = greedy_stream_count(root, std::hint::black_box(&texts[i]).iter().copied());
        times[i].push(start.elapsed());
        matched[i] = std::hint::black_box(count).matched;
    }
    lengths
        .iter()
        .zip(times)
        .zip(matched)
        .map(|((&length, t), matched)| BenchRow {
            length,
            best: *t.iter().min().expect("at least one trial"),
            mean: t.iter().sum::<Duration>() / t.len() as u32,
            matched,
        })
        .collect()
}

/// Plain-text table with the best-time ratio between consecutive rows.
pub fn format_table(rows: &[BenchRow]) -> String {
    let mut out = format!("{:>12} {:>14} {:>14} {:>10} {:>8} {:>12}\n", "length", "best_ns", "mean_ns", "ns/sym", "ratio", "matched");
    let mut previous: Option<&BenchRow> = None;
    for row in rows {
        let ratio = previous
            .map(|p| format!("{:.3}", row.best.as_secs_f64() / p.best.as_secs_f64()))
            .unwrap_or_else(|| "-".into());
        out.push_str(&format!(
            "{:>12} {:>14} {:>14} {:>10.3} {:>8} {:>12}\n",
            row.length,
            row.best.as_nanos(),
            row.mean.as_nanos(),
            row.nanos_per_symbol(),
            ratio,
            row.matched
        ));
        previous = Some(row);
    }
    out
}
