//! Homomorphisms between reflexive cycles.
//!
//! A map `C -> D` is stored as the images of the source vertices
//! `c_0, ..., c_{m-1}` in `Z_n`. Edge `k` (0-based) of the source joins `c_k`
//! and `c_{k+1}` and carries symbol `x_{k+1}`; it is increasing, stationary or
//! decreasing according to the difference of its endpoint images.

use std::fmt;

use serde::Serialize;

use crate::error::HomError;
use crate::orientation::{OrientationString, OrientationSymbol};
use crate::star::SelectionFunction;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycleHom {
    source: OrientationString,
    target: OrientationString,
    images: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeMotion {
    Increasing,
    Stationary,
    Decreasing,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Monotonicity {
    Increasing,
    Decreasing,
    /// Every edge stationary.
    Constant,
    NonMonotone,
}

impl Monotonicity {
    /// Increasing or decreasing; constants are excluded.
    pub fn is_monotone(self) -> bool {
        matches!(self, Self::Increasing | Self::Decreasing)
    }
}

/// How the vertices move from one map to an adjacent one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum MotionClass {
    Up,
    Down,
    Mixed,
    Stationary,
}

/// Which arcs join two maps in the Hom-graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ArcDirection {
    /// `h -> h2` only.
    Forward,
    /// `h2 -> h` only.
    Backward,
    Both,
    None,
}

impl ArcDirection {
    pub fn from_flags(forward: bool, backward: bool) -> Self {
        match (forward, backward) {
            (true, true) => Self::Both,
            (true, false) => Self::Forward,
            (false, true) => Self::Backward,
            (false, false) => Self::None,
        }
    }

    pub fn is_edge(self) -> bool {
        self != Self::None
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Adjacency {
    pub arcs: ArcDirection,
    /// `None` when the maps are not adjacent.
    pub motion: Option<MotionClass>,
}

/// A subpath `c_a ... c_b` of zero increase whose interior lies strictly below
/// its endpoints. When the whole cycle is a cutback, `start == end`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Cutback {
    pub start: usize,
    pub end: usize,
    /// Number of source edges on the subpath.
    pub edges: usize,
}

impl Cutback {
    /// Interior vertices in path order.
    pub fn interior(&self, m: usize) -> impl Iterator<Item = usize> {
        let start = self.start;
        (1..self.edges).map(move |t| (start + t) % m)
    }
}

/// Order in which [`CycleHom::pushup_path`] lifts local minima.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LiftOrder {
    /// Deepest stationary run below the push-up first.
    DeepestFirst,
    /// First run met scanning from the base point.
    ScanOrder,
}

fn check_cycle_lengths(source: &OrientationString, target: &OrientationString) -> Result<(), HomError> {
    for s in [source, target] {
        if s.len() < 3 {
            return Err(crate::error::OrientationError::TooShort { len: s.len() }.into());
        }
    }
    Ok(())
}

/// Whether the source edge `symbol`, mapped to `(a, b)`, lands on arcs of the target.
#[inline]
pub(crate) fn edge_allowed(target: &OrientationString, symbol: OrientationSymbol, a: usize, b: usize) -> bool {
    match symbol {
        OrientationSymbol::Forward => target.has_arc(a, b),
        OrientationSymbol::Backward => target.has_arc(b, a),
        OrientationSymbol::Symmetric => target.has_arc(a, b) && target.has_arc(b, a),
    }
}

/// Validates `images` as a homomorphism `source -> target`; entries are taken mod `n`.
pub fn validate_hom(
    source: &OrientationString,
    target: &OrientationString,
    images: Vec<usize>,
) -> Result<CycleHom, HomError> {
    check_cycle_lengths(source, target)?;
    let (m, n) = (source.len(), target.len());
    if images.len() != m {
        return Err(HomError::LengthMismatch {
            expected: m,
            found: images.len(),
        });
    }
    let images: Vec<usize> = images.into_iter().map(|v| v % n).collect();
    for (k, x) in source.iter().enumerate() {
        if !edge_allowed(target, x, images[k], images[(k + 1) % m]) {
            return Err(HomError::EdgeViolation { edge: k + 1 });
        }
    }
    Ok(CycleHom {
        source: source.clone(),
        target: target.clone(),
        images,
    })
}

/// Parses comma-separated decimal images such as `0,1,2,3,3,4,4`.
pub fn parse_images(text: &str) -> Result<Vec<usize>, String> {
    text.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<usize>()
                .map_err(|_| format!("invalid image {t:?}: expected a non-negative integer"))
        })
        .collect()
}

impl CycleHom {
    /// Caller guarantees validity.
    pub(crate) fn from_parts(source: OrientationString, target: OrientationString, images: Vec<usize>) -> Self {
        debug_assert!(validate_hom(&source, &target, images.clone()).is_ok());
        Self {
            source,
            target,
            images,
        }
    }

    /// The map sending every vertex to `vertex`.
    pub fn constant(source: &OrientationString, target: &OrientationString, vertex: usize) -> Result<Self, HomError> {
        validate_hom(source, target, vec![vertex; source.len()])
    }

    pub fn source(&self) -> &OrientationString {
        &self.source
    }

    pub fn target(&self) -> &OrientationString {
        &self.target
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn into_images(self) -> Vec<usize> {
        self.images
    }

    fn m(&self) -> usize {
        self.images.len()
    }

    fn n(&self) -> usize {
        self.target.len()
    }

    pub fn same_instance(&self, other: &CycleHom) -> bool {
        self.source == other.source && self.target == other.target
    }

    /// Motion of edge `k`, joining `c_k` and `c_{k+1}`.
    pub fn edge_motion(&self, k: usize) -> EdgeMotion {
        let (m, n) = (self.m(), self.n());
        let a = self.images[k % m];
        let b = self.images[(k + 1) % m];
        let diff = (b + n - a) % n;
        if diff == 0 {
            EdgeMotion::Stationary
        } else if diff == 1 {
            EdgeMotion::Increasing
        } else {
            debug_assert_eq!(diff, n - 1);
            EdgeMotion::Decreasing
        }
    }

    fn step(&self, k: usize) -> i64 {
        match self.edge_motion(k) {
            EdgeMotion::Increasing => 1,
            EdgeMotion::Stationary => 0,
            EdgeMotion::Decreasing => -1,
        }
    }

    /// Increasing edges minus decreasing edges.
    pub fn increase(&self) -> i64 {
        (0..self.m()).map(|k| self.step(k)).sum()
    }

    pub fn wind(&self) -> i64 {
        let inc = self.increase();
        let n = self.n() as i64;
        assert_eq!(inc % n, 0, "increase of a closed walk is a multiple of n");
        inc / n
    }

    pub fn monotonicity(&self) -> Monotonicity {
        let (mut up, mut down) = (false, false);
        for k in 0..self.m() {
            match self.edge_motion(k) {
                EdgeMotion::Increasing => up = true,
                EdgeMotion::Decreasing => down = true,
                EdgeMotion::Stationary => {}
            }
        }
        match (up, down) {
            (false, false) => Monotonicity::Constant,
            (true, false) => Monotonicity::Increasing,
            (false, true) => Monotonicity::Decreasing,
            (true, true) => Monotonicity::NonMonotone,
        }
    }

    /// Integer lift of the images: `lift[0] = images[0]`, consecutive entries
    /// differ by the edge steps. Has `m + 1` entries; the last is
    /// `images[0] + increase`.
    pub fn lift(&self) -> Vec<i64> {
        let m = self.m();
        let mut lift = Vec::with_capacity(m + 1);
        lift.push(self.images[0] as i64);
        for k in 0..m {
            let prev = lift[k];
            lift.push(prev + self.step(k));
        }
        lift
    }

    /// Lifted values of the push-up: the running maximum of the lift, taken
    /// from the left for positive increase, from the right for negative
    /// increase and globally for zero increase.
    pub(crate) fn pushup_levels(&self) -> Vec<i64> {
        let m = self.m();
        let lift = self.lift();
        let inc = lift[m] - lift[0];
        // value(i) for i in [-m, 2m)
        let value = |i: i64| -> i64 {
            let q = i.div_euclid(m as i64);
            lift[i.rem_euclid(m as i64) as usize] + q * inc
        };
        let mut levels = vec![0i64; m];
        if inc > 0 {
            let mut best = i64::MIN;
            for i in -(m as i64)..(m as i64) {
                best = best.max(value(i));
                if i >= 0 {
                    levels[i as usize] = best;
                }
            }
        } else if inc < 0 {
            let mut best = i64::MIN;
            for i in (0..2 * m as i64).rev() {
                best = best.max(value(i));
                if i < m as i64 {
                    levels[i as usize] = best;
                }
            }
        } else {
            let top = lift[..m].iter().copied().max().expect("m >= 3");
            levels.fill(top);
        }
        levels
    }

    /// All maximal cutbacks, ordered by start vertex.
    pub fn find_cutbacks(&self) -> Vec<Cutback> {
        let m = self.m();
        let lift = self.lift();
        let levels = self.pushup_levels();
        let below: Vec<bool> = (0..m).map(|j| lift[j] < levels[j]).collect();
        if !below.iter().any(|&b| b) {
            return Vec::new();
        }
        debug_assert!(below.iter().any(|&b| !b), "the maximum is attained");
        let mut cutbacks = Vec::new();
        for p in 0..m {
            if below[p] && !below[(p + m - 1) % m] {
                let mut len = 1;
                while below[(p + len) % m] {
                    len += 1;
                }
                cutbacks.push(Cutback {
                    start: (p + m - 1) % m,
                    end: (p + len) % m,
                    edges: len + 1,
                });
            }
        }
        cutbacks.sort_by_key(|c| c.start);
        cutbacks
    }

    /// The unique monotone (or constant) map reached by lifting cutbacks,
    /// together with its image of `c_0`.
    pub fn monotone_pushup(&self) -> (CycleHom, usize) {
        let m = self.m();
        let mut images = self.images.clone();
        loop {
            let current = CycleHom::from_parts(self.source.clone(), self.target.clone(), images.clone());
            let cutbacks = current.find_cutbacks();
            if cutbacks.is_empty() {
                let class = images[0];
                return (current, class);
            }
            for cb in cutbacks {
                let level = images[cb.start];
                for j in cb.interior(m) {
                    images[j] = level;
                }
            }
        }
    }

    /// Image of `c_0` under the push-up, computed in linear time.
    pub fn pushup_class(&self) -> usize {
        let level = self.pushup_levels()[0];
        level.rem_euclid(self.n() as i64) as usize
    }

    /// A path of one-step up edges from `self` to its push-up.
    ///
    /// Each step lifts one maximal stationary run whose two neighbours sit one
    /// level higher. The first entry is `self`, the last the push-up.
    pub fn pushup_path(&self, order: LiftOrder) -> Vec<CycleHom> {
        let (m, n) = (self.m(), self.n());
        let levels = self.pushup_levels();
        let mut path = vec![self.clone()];
        loop {
            let current = path.last().expect("non-empty");
            let images = current.images();
            let runs = local_minimum_runs(images, n);
            if runs.is_empty() {
                return path;
            }
            let chosen = match order {
                LiftOrder::ScanOrder => runs[0],
                LiftOrder::DeepestFirst => {
                    let lift = current.lift();
                    *runs
                        .iter()
                        .max_by_key(|&&(start, _)| (levels[start] - lift[start], std::cmp::Reverse(start)))
                        .expect("non-empty")
                }
            };
            let (start, len) = chosen;
            let mut next = images.to_vec();
            for t in 0..len {
                let j = (start + t) % m;
                next[j] = (next[j] + 1) % n;
            }
            let next = validate_hom(&self.source, &self.target, next).expect("lifting a local minimum is a homomorphism");
            path.push(next);
        }
    }

    /// The same map read on the reversed source: `c'_j = c_{-j}`.
    pub fn relabel_reversed(&self) -> CycleHom {
        let m = self.m();
        let images = (0..m).map(|j| self.images[(m - j) % m]).collect();
        CycleHom::from_parts(self.source.reverse(), self.target.clone(), images)
    }
}

/// Maximal runs of equal images (as `(first vertex, length)`) whose two
/// neighbours are both one higher, in scan order of their first vertex.
fn local_minimum_runs(images: &[usize], n: usize) -> Vec<(usize, usize)> {
    let m = images.len();
    let Some(break_at) = (0..m).find(|&j| images[j] != images[(j + m - 1) % m]) else {
        return Vec::new();
    };
    let mut runs = Vec::new();
    let mut t = 0;
    while t < m {
        let start = (break_at + t) % m;
        let value = images[start];
        let mut len = 1;
        while len < m && images[(start + len) % m] == value {
            len += 1;
        }
        let before = images[(start + m - 1) % m];
        let after = images[(start + len) % m];
        let up = (value + 1) % n;
        if before == up && after == up {
            runs.push((start, len));
        }
        t += len;
    }
    runs.sort_unstable();
    runs
}

/// `h -> h2` in the Hom-graph: every arc `u -> v` of the reflexive source,
/// loops included, goes to an arc `h(u) -> h2(v)` of the target.
pub fn has_hom_arc(h: &CycleHom, h2: &CycleHom) -> bool {
    let target = &h.target;
    let m = h.images.len();
    let (a, b) = (&h.images, &h2.images);
    (0..m).all(|j| target.has_arc(a[j], b[j]))
        && h.source.iter().enumerate().all(|(k, x)| {
            let (u, v) = (k, (k + 1) % m);
            match x {
                OrientationSymbol::Forward => target.has_arc(a[u], b[v]),
                OrientationSymbol::Backward => target.has_arc(a[v], b[u]),
                OrientationSymbol::Symmetric => target.has_arc(a[u], b[v]) && target.has_arc(a[v], b[u]),
            }
        })
}

/// Per-vertex displacements, or `None` if some vertex moves by more than one.
pub fn motion_class(h: &CycleHom, h2: &CycleHom) -> Option<MotionClass> {
    let n = h.n();
    let (mut up, mut down) = (false, false);
    for (&a, &b) in h.images.iter().zip(&h2.images) {
        match (b + n - a) % n {
            0 => {}
            1 => up = true,
            d if d == n - 1 => down = true,
            _ => return None,
        }
    }
    Some(match (up, down) {
        (false, false) => MotionClass::Stationary,
        (true, false) => MotionClass::Up,
        (false, true) => MotionClass::Down,
        (true, true) => MotionClass::Mixed,
    })
}

pub fn adjacency(h: &CycleHom, h2: &CycleHom) -> Result<Adjacency, HomError> {
    if !h.same_instance(h2) {
        return Err(HomError::InstanceMismatch);
    }
    let arcs = ArcDirection::from_flags(has_hom_arc(h, h2), has_hom_arc(h2, h));
    let motion = if arcs.is_edge() { motion_class(h, h2) } else { None };
    Ok(Adjacency { arcs, motion })
}

/// The increasing map of wind `w` with `c_0 -> base` whose increasing edges are
/// exactly those selected by `selection`.
pub fn selection_to_hom(
    source: &OrientationString,
    target: &OrientationString,
    base: usize,
    w: usize,
    selection: &SelectionFunction,
) -> Result<CycleHom, HomError> {
    check_cycle_lengths(source, target)?;
    if w == 0 {
        return Err(HomError::InvalidSelection("wind must be at least 1".into()));
    }
    let n = target.len();
    let pattern = target.shift(base % n).concat_power(w, None);
    if !selection.witnesses(&pattern, source) {
        return Err(HomError::InvalidSelection(format!(
            "{selection} does not embed {pattern} into {source}"
        )));
    }
    let selected = selection.indices();
    let mut taken = 0;
    let images = (0..source.len())
        .map(|j| {
            while taken < selected.len() && selected[taken] <= j {
                taken += 1;
            }
            (base + taken) % n
        })
        .collect();
    validate_hom(source, target, images)
}

/// `(base, wind, selection)` of an increasing map.
pub fn hom_to_selection(h: &CycleHom) -> Result<(usize, usize, SelectionFunction), HomError> {
    if h.monotonicity() != Monotonicity::Increasing {
        return Err(HomError::NotIncreasing);
    }
    let indices = (0..h.m())
        .filter(|&k| h.edge_motion(k) == EdgeMotion::Increasing)
        .map(|k| k + 1)
        .collect();
    let selection = SelectionFunction::new(indices, h.m()).expect("edge indices are increasing");
    Ok((h.images[0], h.wind() as usize, selection))
}

impl fmt::Display for CycleHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.images.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CycleHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycleHom({} -> {}: {})", self.source, self.target, self)
    }
}
