//! Deciding reconfigurability and describing the components of `Hom(C, D)`
//! without enumerating maps.
//!
//! For a non-contractible target with primitive root of length `s` repeated
//! `r` times, the maps of wind `w > 0` fall into blocks indexed by target
//! vertices. Vertex `j` separates two blocks when the shift of the root at
//! `j mod s`, repeated `w*r` times and followed by one more symbol, does not
//! embed in the source. Negative winds are read on the reversed source.

use serde::Serialize;

use rayon::prelude::*;

use crate::error::{HomError, OracleError};
use crate::hom::CycleHom;
use crate::oracle::{component_analysis, hom_graph};
use crate::orientation::{OrientationString, OrientationSymbol, RootFactorization, TargetClass};
use crate::star::{gamma_set, max_power_over_shifts, shifts_reaching};

/// Which vertex index places a map among the blocks.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ClassMode {
    /// Image of `c_0` under the monotone push-up.
    #[default]
    PushUp,
    /// Raw image of `c_0`.
    Base,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum WindStatus {
    Empty,
    SingleCyclic,
    Blocks,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TheoremCase {
    #[serde(rename = "1")]
    WindZero,
    #[serde(rename = "2")]
    Single,
    #[serde(rename = "3")]
    Tight,
    Exceptional,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WindReport {
    pub wind: i64,
    pub status: WindStatus,
    pub theorem_case: Option<TheoremCase>,
    /// Good residues mod `s`; empty for wind 0.
    pub gamma: Vec<usize>,
    /// Bad residues mod `s`.
    pub literal_c: usize,
    /// Barriers on `Z_n`: `literal_c * r`.
    pub block_count: usize,
    /// Components of this wind, counted exactly.
    pub component_count: usize,
    pub cyclic: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentReport {
    pub target: OrientationString,
    pub source: OrientationString,
    pub target_class: TargetClass,
    pub contractible: bool,
    pub root: OrientationString,
    pub r: usize,
    pub s: usize,
    /// Largest power of a shifted root embedding in the source.
    pub max_power: usize,
    /// The same for the reversed source.
    pub max_power_reversed: usize,
    pub exceptional: bool,
    /// Winds in increasing order, with one empty wind past each end.
    pub winds: Vec<WindReport>,
}

impl ComponentReport {
    pub fn wind(&self, w: i64) -> Option<&WindReport> {
        self.winds.iter().find(|report| report.wind == w)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum DecisionReason {
    ContractibleTarget,
    WindMismatch,
    WindZero,
    FullGamma,
    SameBlock,
    DifferentBlock,
    Exceptional,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decision {
    pub connected: bool,
    pub reason: DecisionReason,
    /// Common wind, when the target is non-contractible and the winds agree.
    pub wind: Option<i64>,
    /// Block coordinates of the two maps, when they were compared.
    pub classes: Option<(usize, usize)>,
}

impl Decision {
    fn new(connected: bool, reason: DecisionReason) -> Self {
        Self {
            connected,
            reason,
            wind: None,
            classes: None,
        }
    }
}

/// Precomputed data for one instance `(C, D)`.
#[derive(Clone, Debug)]
pub struct Reconfigurer {
    source: OrientationString,
    reversed: OrientationString,
    target: OrientationString,
    target_class: TargetClass,
    root: RootFactorization,
    exceptional: bool,
    mode: ClassMode,
    /// Per `|w|` starting at 1: membership in the good set, for `C` and for `reverse(C)`.
    good: [Vec<Vec<bool>>; 2],
}

impl Reconfigurer {
    pub fn new(source: &OrientationString, target: &OrientationString) -> Result<Self, HomError> {
        for s in [source, target] {
            if s.len() < 3 {
                return Err(crate::error::OrientationError::TooShort { len: s.len() }.into());
            }
        }
        let target_class = target.classify_target()?;
        let root = target.primitive_root();
        let reversed = source.reverse();
        let exceptional = target.is_symmetric_cycle()
            && (source.is_uniform(OrientationSymbol::Forward) || source.is_uniform(OrientationSymbol::Backward));
        let max_wind = source.len() / target.len();
        let good = [source, &reversed].map(|text| {
            (1..=max_wind)
                .map(|w| {
                    let mut member = vec![false; root.root.len()];
                    for i in gamma_set(&root.root, text, w * root.multiplicity) {
                        member[i] = true;
                    }
                    member
                })
                .collect()
        });
        Ok(Self {
            source: source.clone(),
            reversed,
            target: target.clone(),
            target_class,
            root,
            exceptional,
            mode: ClassMode::default(),
            good,
        })
    }

    pub fn with_class_mode(mut self, mode: ClassMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn class_mode(&self) -> ClassMode {
        self.mode
    }

    pub fn source(&self) -> &OrientationString {
        &self.source
    }

    pub fn target(&self) -> &OrientationString {
        &self.target
    }

    pub fn is_exceptional(&self) -> bool {
        self.exceptional
    }

    fn oriented(&self, w: i64) -> &OrientationString {
        if w >= 0 {
            &self.source
        } else {
            &self.reversed
        }
    }

    fn good_set(&self, w: i64) -> Option<&[bool]> {
        let side = usize::from(w < 0);
        let k = w.unsigned_abs() as usize;
        self.good[side].get(k.checked_sub(1)?).map(Vec::as_slice)
    }

    /// Largest `R` with a shifted root power `R` embedding in the source
    /// (`w >= 0`) or its reverse (`w < 0`).
    fn max_power(&self, w: i64) -> usize {
        max_power_over_shifts(&self.root.root, self.oriented(w)).0
    }

    pub fn wind_report(&self, w: i64) -> WindReport {
        let (r, s) = (self.root.multiplicity, self.root.root.len());
        if w == 0 {
            return WindReport {
                wind: 0,
                status: WindStatus::SingleCyclic,
                theorem_case: Some(TheoremCase::WindZero),
                gamma: Vec::new(),
                literal_c: 0,
                block_count: 0,
                component_count: 1,
                cyclic: true,
            };
        }
        let k = w.unsigned_abs() as usize * r;
        let empty = WindReport {
            wind: w,
            status: WindStatus::Empty,
            theorem_case: None,
            gamma: Vec::new(),
            literal_c: 0,
            block_count: 0,
            component_count: 0,
            cyclic: false,
        };
        if k > self.max_power(w) {
            return empty;
        }
        let text = self.oriented(w);
        let gamma = gamma_set(&self.root.root, text, k);
        let literal_c = s - gamma.len();
        let mut report = WindReport {
            gamma,
            literal_c,
            block_count: literal_c * r,
            ..empty
        };
        if self.exceptional || literal_c == 0 {
            report.status = WindStatus::SingleCyclic;
            report.theorem_case = Some(if self.exceptional {
                TheoremCase::Exceptional
            } else {
                TheoremCase::Single
            });
            report.component_count = 1;
            report.cyclic = true;
        } else {
            // A residue starts a block exactly when some map of this wind
            // has its push-up there and the block is cut off on its left.
            let occupied = shifts_reaching(&self.root.root, text, k * s);
            let starts = occupied.iter().filter(|i| !report.gamma.contains(i)).count();
            report.status = WindStatus::Blocks;
            report.theorem_case = Some(TheoremCase::Tight);
            report.component_count = r * starts;
        }
        report
    }

    pub fn characterize(&self) -> ComponentReport {
        let r = self.root.multiplicity;
        let contractible = self.target_class.is_contractible();
        let max_power = max_power_over_shifts(&self.root.root, &self.source).0;
        let max_power_reversed = max_power_over_shifts(&self.root.root, &self.reversed).0;
        let winds = if contractible {
            Vec::new()
        } else {
            let low = -((max_power_reversed / r) as i64) - 1;
            let high = (max_power / r) as i64 + 1;
            (low..=high).map(|w| self.wind_report(w)).collect()
        };
        ComponentReport {
            target: self.target.clone(),
            source: self.source.clone(),
            target_class: self.target_class,
            contractible,
            root: self.root.root.clone(),
            r,
            s: self.root.root.len(),
            max_power,
            max_power_reversed,
            exceptional: self.exceptional,
            winds,
        }
    }

    fn class_of(&self, h: &CycleHom) -> usize {
        match self.mode {
            ClassMode::PushUp => h.pushup_class(),
            ClassMode::Base => h.images()[0],
        }
    }

    pub fn decide(&self, phi: &CycleHom, psi: &CycleHom) -> Result<Decision, HomError> {
        for h in [phi, psi] {
            if h.source() != &self.source || h.target() != &self.target {
                return Err(HomError::InstanceMismatch);
            }
        }
        if self.target_class.is_contractible() {
            return Ok(Decision::new(true, DecisionReason::ContractibleTarget));
        }
        let w = phi.wind();
        if psi.wind() != w {
            return Ok(Decision::new(false, DecisionReason::WindMismatch));
        }
        let decision = |connected, reason| Decision {
            wind: Some(w),
            ..Decision::new(connected, reason)
        };
        if w == 0 {
            return Ok(decision(true, DecisionReason::WindZero));
        }
        if self.exceptional {
            return Ok(decision(true, DecisionReason::Exceptional));
        }
        let good = self.good_set(w).expect("a map of this wind exists");
        if good.iter().all(|&g| g) {
            return Ok(decision(true, DecisionReason::FullGamma));
        }
        let (a, b) = if w > 0 {
            (self.class_of(phi), self.class_of(psi))
        } else {
            (self.class_of(&phi.relabel_reversed()), self.class_of(&psi.relabel_reversed()))
        };
        let n = self.target.len();
        let s = good.len();
        let clear = |from: usize, to: usize| {
            let mut j = from;
            while j != to {
                if !good[j % s] {
                    return false;
                }
                j = (j + 1) % n;
            }
            true
        };
        let connected = clear(a, b) || clear(b, a);
        let reason = if connected {
            DecisionReason::SameBlock
        } else {
            DecisionReason::DifferentBlock
        };
        Ok(Decision {
            classes: Some((a, b)),
            ..decision(connected, reason)
        })
    }
}

pub fn characterize(source: &OrientationString, target: &OrientationString) -> Result<ComponentReport, HomError> {
    Ok(Reconfigurer::new(source, target)?.characterize())
}

pub fn decide(phi: &CycleHom, psi: &CycleHom) -> Result<Decision, HomError> {
    if !phi.same_instance(psi) {
        return Err(HomError::InstanceMismatch);
    }
    Reconfigurer::new(phi.source(), phi.target())?.decide(phi, psi)
}

/// Which reading of the block count the exhaustive count agreed with.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CountMatch {
    Literal,
    Block,
    Both,
    Neither,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountAudit {
    pub wind: i64,
    pub literal_c: usize,
    pub block_count: usize,
    pub oracle: usize,
    pub matches: CountMatch,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum Mismatch {
    Decide {
        phi: String,
        psi: String,
        engine: bool,
        oracle: bool,
        reason: DecisionReason,
    },
    Status {
        wind: i64,
        engine: WindStatus,
        oracle_components: usize,
    },
    ComponentCount {
        wind: i64,
        engine: usize,
        oracle: usize,
    },
    Cyclic {
        wind: i64,
        engine: bool,
        oracle: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub source: OrientationString,
    pub target: OrientationString,
    pub class_mode: ClassMode,
    pub homomorphisms: usize,
    pub pairs_checked: usize,
    /// Ordered pairs on which the decision disagreed with the oracle.
    pub decide_mismatches: usize,
    /// Itemized disagreements; decision mismatches beyond the first few are only counted.
    pub mismatches: Vec<Mismatch>,
    /// Winds where the literal and block readings of the count differ.
    pub audits: Vec<CountAudit>,
}

impl VerificationReport {
    pub fn is_clean(&self) -> bool {
        self.decide_mismatches == 0 && self.mismatches.is_empty()
    }
}

const LISTED_DECIDE_MISMATCHES: usize = 8;

/// Checks the engine against the exhaustive Hom-graph of `(C, D)`.
pub fn verify_instance(
    source: &OrientationString,
    target: &OrientationString,
    mode: ClassMode,
    cap: usize,
) -> Result<VerificationReport, OracleError> {
    let engine = Reconfigurer::new(source, target)?.with_class_mode(mode);
    let g = hom_graph(source, target, cap)?;
    let mut report = VerificationReport {
        source: source.clone(),
        target: target.clone(),
        class_mode: mode,
        homomorphisms: g.len(),
        pairs_checked: 0,
        decide_mismatches: 0,
        mismatches: Vec::new(),
        audits: Vec::new(),
    };

    for (i, phi) in g.homs().iter().enumerate() {
        for (j, psi) in g.homs().iter().enumerate() {
            let decision = engine.decide(phi, psi)?;
            let oracle = g.same_component(i, j);
            report.pairs_checked += 1;
            if decision.connected != oracle {
                report.decide_mismatches += 1;
                if report.decide_mismatches <= LISTED_DECIDE_MISMATCHES {
                    report.mismatches.push(Mismatch::Decide {
                        phi: phi.to_string(),
                        psi: psi.to_string(),
                        engine: decision.connected,
                        oracle,
                        reason: decision.reason,
                    });
                }
            }
        }
    }

    if !target.classify_target().map_err(HomError::from)?.is_contractible() {
        let components = component_analysis(&g);
        let characterization = engine.characterize();
        let bound = (source.len() / target.len()) as i64 + 1;
        for w in -bound..=bound {
            let wind = characterization
                .wind(w)
                .cloned()
                .unwrap_or_else(|| engine.wind_report(w));
            let found: Vec<_> = components.iter().filter(|c| c.wind == Some(w)).collect();
            if (wind.status == WindStatus::Empty) != found.is_empty() {
                report.mismatches.push(Mismatch::Status {
                    wind: w,
                    engine: wind.status,
                    oracle_components: found.len(),
                });
            }
            if wind.component_count != found.len() {
                report.mismatches.push(Mismatch::ComponentCount {
                    wind: w,
                    engine: wind.component_count,
                    oracle: found.len(),
                });
            }
            if let Some(c) = found.iter().find(|c| c.cyclic != wind.cyclic) {
                report.mismatches.push(Mismatch::Cyclic {
                    wind: w,
                    engine: wind.cyclic,
                    oracle: c.cyclic,
                });
            }
            if wind.status == WindStatus::Blocks && wind.literal_c != wind.block_count {
                let oracle = found.len();
                let matches = match (oracle == wind.literal_c, oracle == wind.block_count) {
                    (true, true) => CountMatch::Both,
                    (true, false) => CountMatch::Literal,
                    (false, true) => CountMatch::Block,
                    (false, false) => CountMatch::Neither,
                };
                report.audits.push(CountAudit {
                    wind: w,
                    literal_c: wind.literal_c,
                    block_count: wind.block_count,
                    oracle,
                    matches,
                });
            }
        }
    }
    Ok(report)
}

/// Every `(C, D)` with `3 <= |C| <= max_m` and `min_n <= |D| <= max_n`, in
/// order of lengths and then lexicographically.
pub fn desk_instances(max_m: usize, min_n: usize, max_n: usize) -> Vec<(OrientationString, OrientationString)> {
    let mut instances = Vec::new();
    for n in min_n.max(3)..=max_n {
        let targets: Vec<_> = crate::orientation::all_strings(n).collect();
        for m in 3..=max_m {
            for source in crate::orientation::all_strings(m) {
                for target in &targets {
                    instances.push((source.clone(), target.clone()));
                }
            }
        }
    }
    instances
}

/// Verifies many instances in parallel; results keep the input order.
pub fn verify_all(
    instances: &[(OrientationString, OrientationString)],
    mode: ClassMode,
    cap: usize,
) -> Vec<Result<VerificationReport, OracleError>> {
    instances
        .par_iter()
        .map(|(source, target)| verify_instance(source, target, mode, cap))
        .collect()
}
