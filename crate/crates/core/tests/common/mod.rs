//! Helpers shared by the integration suites and the acceptance runner.
#![allow(dead_code)]

use cycle_recon::hom::{motion_class, LiftOrder, Monotonicity, MotionClass};
use cycle_recon::oracle::{component_analysis, hom_graph, is_non_refinable, HomGraph, DEFAULT_CAP};
use cycle_recon::orientation::{all_strings, OrientationString, OrientationSymbol};
use cycle_recon::CycleHom;

pub fn s(text: &str) -> OrientationString {
    text.parse().unwrap()
}

pub fn graph(source: &OrientationString, target: &OrientationString) -> HomGraph {
    hom_graph(source, target, DEFAULT_CAP).unwrap()
}

/// Non-contractible strings of each length in `lengths`.
pub fn non_contractible(lengths: std::ops::RangeInclusive<usize>) -> Vec<OrientationString> {
    lengths
        .flat_map(all_strings)
        .filter(|d| !d.classify_target().unwrap().is_contractible())
        .collect()
}

/// Whether `d` is the lexicographically least of its rotations.
pub fn is_least_rotation(d: &OrientationString) -> bool {
    let text = d.to_string();
    (1..d.len()).all(|i| d.shift(i).to_string() >= text)
}

pub fn all_of_lengths(lengths: std::ops::RangeInclusive<usize>) -> Vec<OrientationString> {
    lengths.flat_map(all_strings).collect()
}

/// Violation counts of the structural facts about Hom-graphs of cycles.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LemmaTally {
    pub instances: usize,
    pub components: usize,
    /// Components containing maps of two different winds.
    pub mixed_wind: usize,
    pub edges: usize,
    /// Edges along which some vertex moves by more than one step.
    pub long_moves: usize,
    pub non_refinable: usize,
    /// Non-refinable edges that are neither up nor down edges.
    pub not_up_or_down: usize,
    /// Non-refinable up edges out of a non-constant monotone map with `m > n`.
    pub single_vertex_checked: usize,
    /// ... of which more than one vertex moves.
    pub single_vertex_violations: usize,
    /// ... of those, the ones whose moved vertices form runs joined by symmetric edges of `C`.
    pub symmetric_runs: usize,
    /// Non-refinable up edges out of a non-constant monotone map with `m = n`.
    pub equal_length_checked: usize,
    /// ... not of the form "directed source, symmetric target, everything moves".
    pub equal_length_violations: usize,
    /// Non-refinable edges at constant maps with `m > n` moving several vertices (not a violation).
    pub constant_multi_moves: usize,
    pub pushup_paths: usize,
    /// Push-up paths that leave the Hom-graph, take a non-up step or end off the push-up.
    pub pushup_violations: usize,
    pub examples: Vec<String>,
    pub run_examples: Vec<String>,
}

impl LemmaTally {
    /// The counts alone.
    pub fn counts(mut self) -> Self {
        self.examples.clear();
        self.run_examples.clear();
        self
    }

    /// Violations other than moved runs along symmetric edges of `C`.
    pub fn unexplained(&self) -> usize {
        self.violations() - self.symmetric_runs
    }

    pub fn violations(&self) -> usize {
        self.mixed_wind
            + self.long_moves
            + self.not_up_or_down
            + self.single_vertex_violations
            + self.equal_length_violations
            + self.pushup_violations
    }

    pub fn merge(&mut self, other: LemmaTally) {
        self.instances += other.instances;
        self.components += other.components;
        self.mixed_wind += other.mixed_wind;
        self.edges += other.edges;
        self.long_moves += other.long_moves;
        self.non_refinable += other.non_refinable;
        self.not_up_or_down += other.not_up_or_down;
        self.single_vertex_checked += other.single_vertex_checked;
        self.single_vertex_violations += other.single_vertex_violations;
        self.symmetric_runs += other.symmetric_runs;
        self.equal_length_checked += other.equal_length_checked;
        self.equal_length_violations += other.equal_length_violations;
        self.constant_multi_moves += other.constant_multi_moves;
        self.pushup_paths += other.pushup_paths;
        self.pushup_violations += other.pushup_violations;
        let room = 10usize.saturating_sub(self.examples.len());
        self.examples.extend(other.examples.into_iter().take(room));
        let room = 3usize.saturating_sub(self.run_examples.len());
        self.run_examples.extend(other.run_examples.into_iter().take(room));
    }

    fn note(&mut self, what: String) {
        if self.examples.len() < 10 {
            self.examples.push(what);
        }
    }
}

fn moved_count(a: &CycleHom, b: &CycleHom) -> usize {
    a.images().iter().zip(b.images()).filter(|(x, y)| x != y).count()
}

/// Whether every moved vertex has a moved neighbour across a symmetric edge of `C`.
fn moves_symmetric_runs(source: &OrientationString, a: &CycleHom, b: &CycleHom) -> bool {
    let m = source.len();
    let moved = |k: usize| a.images()[k % m] != b.images()[k % m];
    let symmetric = |k: usize| source.symbols()[k % m] == OrientationSymbol::Symmetric;
    (0..m).filter(|&k| moved(k)).all(|k| {
        (symmetric(k) && moved(k + 1)) || (symmetric(k + m - 1) && moved(k + m - 1))
    })
}

/// Checks one instance with a non-contractible target.
pub fn check_lemmas(source: &OrientationString, target: &OrientationString) -> LemmaTally {
    let g = graph(source, target);
    let (m, n) = (source.len(), target.len());
    let mut t = LemmaTally {
        instances: 1,
        ..LemmaTally::default()
    };

    for c in component_analysis(&g) {
        t.components += 1;
        if c.wind.is_none() {
            t.mixed_wind += 1;
            t.note(format!("C={source} D={target}: component {} mixes winds", c.id));
        }
    }

    for (i, j, _) in g.edges() {
        let (a, b) = (g.hom(i), g.hom(j));
        t.edges += 1;
        let Some(motion) = motion_class(a, b) else {
            t.long_moves += 1;
            t.note(format!("C={source} D={target}: {a} - {b} moves a vertex by more than one"));
            continue;
        };
        if !is_non_refinable(a, b).unwrap() {
            continue;
        }
        t.non_refinable += 1;
        if !matches!(motion, MotionClass::Up | MotionClass::Down) {
            t.not_up_or_down += 1;
            t.note(format!("C={source} D={target}: non-refinable {a} - {b} is {motion:?}"));
            continue;
        }
        let moved = moved_count(a, b);
        for (h, other) in [(a, b), (b, a)] {
            if motion_class(h, other) != Some(MotionClass::Up) {
                continue;
            }
            match h.monotonicity() {
                Monotonicity::Increasing | Monotonicity::Decreasing if m > n => {
                    t.single_vertex_checked += 1;
                    if moved != 1 {
                        t.single_vertex_violations += 1;
                        if moves_symmetric_runs(source, h, other) {
                            t.symmetric_runs += 1;
                            if t.run_examples.len() < 3 {
                                t.run_examples.push(format!("C={source} D={target}: {h} -> {other} moves {moved}"));
                            }
                        } else {
                            t.note(format!("C={source} D={target}: {h} -> {other} moves {moved}"));
                        }
                    }
                }
                Monotonicity::Increasing | Monotonicity::Decreasing if m == n => {
                    t.equal_length_checked += 1;
                    let directed = source.is_directed_cycle();
                    if !(directed && target.is_symmetric_cycle() && moved == m) {
                        t.equal_length_violations += 1;
                        t.note(format!("C={source} D={target}: {a} - {b} at monotone {h} with m = n"));
                    }
                }
                Monotonicity::Constant if m > n && moved > 1 => t.constant_multi_moves += 1,
                _ => {}
            }
        }
    }

    for (i, h) in g.homs().iter().enumerate() {
        let (pushup, _) = h.monotone_pushup();
        for order in [LiftOrder::DeepestFirst, LiftOrder::ScanOrder] {
            t.pushup_paths += 1;
            let path = h.pushup_path(order);
            let mut ok = path.last() == Some(&pushup) && path[0] == *h;
            ok &= matches!(
                pushup.monotonicity(),
                Monotonicity::Increasing | Monotonicity::Decreasing | Monotonicity::Constant
            );
            let mut prev = i;
            for step in &path[1..] {
                match g.index_of(step.images()) {
                    Some(k) if g.has_arc(prev, k) || g.has_arc(k, prev) => {
                        ok &= motion_class(g.hom(prev), step) == Some(MotionClass::Up);
                        prev = k;
                    }
                    _ => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                t.pushup_violations += 1;
                t.note(format!("C={source} D={target}: push-up path from {h} ({order:?})"));
            }
        }
    }
    t
}
