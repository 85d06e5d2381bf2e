//! Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any failure.

mod common;

use std::alloc::{GlobalAlloc, Layout, System};
use std::process::ExitCode;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use cycle_recon::bench;
use cycle_recon::engine::{characterize, verify_all, ClassMode, CountMatch, Mismatch, WindStatus};
use cycle_recon::hom::{motion_class, MotionClass};
use cycle_recon::oracle::{component_analysis, DEFAULT_CAP};
use cycle_recon::orientation::{all_strings, OrientationString, OrientationSymbol};
use cycle_recon::star::{gamma_set, greedy_stream_count, max_power, symbol_matches};

use common::{check_lemmas, graph, is_least_rotation, non_contractible, s, LemmaTally};

/// Counts live heap bytes while `TRACKING` is set, remembering the peak.
struct CountingAlloc;

static TRACKING: AtomicBool = AtomicBool::new(false);
static LIVE: AtomicUsize = AtomicUsize::new(0);
static PEAK: AtomicUsize = AtomicUsize::new(0);

unsafe impl GlobalAlloc for CountingAlloc {
    unsafe fn alloc(&self, layout: Layout) -> *mut u8 {
        if TRACKING.load(Ordering::Relaxed) {
            let live = LIVE.fetch_add(layout.size(), Ordering::Relaxed) + layout.size();
            PEAK.fetch_max(live, Ordering::Relaxed);
        }
        unsafe { System.alloc(layout) }
    }

    unsafe fn dealloc(&self, ptr: *mut u8, layout: Layout) {
        if TRACKING.load(Ordering::Relaxed) {
            LIVE.fetch_sub(layout.size().min(LIVE.load(Ordering::Relaxed)), Ordering::Relaxed);
        }
        unsafe { System.dealloc(ptr, layout) }
    }
}

#[global_allocator]
static ALLOCATOR: CountingAlloc = CountingAlloc;

/// Peak heap bytes allocated while `f` runs.
fn peak_allocation<T>(f: impl FnOnce() -> T) -> (T, usize) {
    LIVE.store(0, Ordering::SeqCst);
    PEAK.store(0, Ordering::SeqCst);
    TRACKING.store(true, Ordering::SeqCst);
    let value = f();
    TRACKING.store(false, Ordering::SeqCst);
    (value, PEAK.load(Ordering::SeqCst))
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

const FIG1_SOURCE: &str = "+-+-+--++--++--";

fn figure_one() -> Outcome {
    let start = Instant::now();
    let report = characterize(&s(FIG1_SOURCE), &s("+-+-")).unwrap();
    let elapsed = start.elapsed();
    let w2 = report.wind(2).map(|w| w.status);
    let passed = report.r == 2
        && report.s == 2
        && report.max_power == 5
        && w2 == Some(WindStatus::SingleCyclic)
        && elapsed < Duration::from_secs(1);
    outcome(
        passed,
        format!(
            "r={} s={} R={} wind 2 {:?} in {:.1?}",
            report.r, report.s, report.max_power, w2, elapsed
        ),
    )
}

fn figure_two() -> Outcome {
    let (c, d) = ("-++--+-", "-++--");
    let args = ["cycle-recon", "enumerate", "-D", d, "-C", c, "--monotone", "--wind", "1"];
    let mut out = Vec::new();
    let code = cycle_recon::cli::run(args, &mut out, &mut Vec::new());
    let listing: serde_json::Value = serde_json::from_slice(&out).unwrap();
    let mut found: Vec<(u64, Vec<u64>)> = listing["maps"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| {
            let selection = m["selection"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
            (m["base"].as_u64().unwrap(), selection)
        })
        .collect();
    found.sort();
    let mut expected = vec![
        (0, vec![1, 2, 3, 5, 7]),
        (0, vec![1, 2, 3, 4, 7]),
        (0, vec![1, 2, 3, 4, 5]),
        (1, vec![2, 3, 4, 5, 7]),
    ];
    expected.sort();
    let listed = code == 0 && found == expected;

    let g = graph(&s(c), &s(d));
    let chain = [
        [0, 1, 2, 3, 3, 4, 4],
        [0, 1, 2, 3, 4, 4, 4],
        [0, 1, 2, 3, 4, 0, 0],
        [1, 1, 2, 3, 4, 0, 0],
    ];
    let indices: Vec<Option<usize>> = chain.iter().map(|images| g.index_of(images)).collect();
    let path = indices.iter().all(Option::is_some)
        && indices.windows(2).all(|w| {
            let (a, b) = (w[0].unwrap(), w[1].unwrap());
            (g.has_arc(a, b) || g.has_arc(b, a)) && motion_class(g.hom(a), g.hom(b)) == Some(MotionClass::Up)
        });
    outcome(
        listed && path,
        format!("{} monotone wind-1 maps listed, up path present: {path}", found.len()),
    )
}

fn fact_one_two() -> Outcome {
    let start = Instant::now();
    let g = graph(&s("********"), &s("****"));
    let components = component_analysis(&g);
    let elapsed = start.elapsed();
    let of_wind = |w: i64| components.iter().filter(|c| c.wind == Some(w)).collect::<Vec<_>>();
    let single_cyclic = |w: i64| {
        let cs = of_wind(w);
        cs.len() == 1 && cs[0].cyclic
    };
    let isolated = |w: i64| {
        let cs = of_wind(w);
        cs.len() == 4 && cs.iter().all(|c| c.size == 1 && !c.cyclic)
    };
    let accounted: usize = (-2..=2).map(|w| of_wind(w).len()).sum();
    let passed = single_cyclic(0)
        && single_cyclic(1)
        && single_cyclic(-1)
        && isolated(2)
        && isolated(-2)
        && accounted == components.len()
        && elapsed < Duration::from_secs(10);
    let counts: Vec<String> = (-2..=2).map(|w| format!("{w}:{}", of_wind(w).len())).collect();
    outcome(
        passed,
        format!("components per wind [{}], {} in total, {:.1?}", counts.join(" "), components.len(), elapsed),
    )
}

fn master_sweep() -> Outcome {
    let start = Instant::now();
    let mut targets: Vec<OrientationString> = all_strings(4).collect();
    targets.extend([s("+++"), s("---")]);
    let instances: Vec<_> = (3..=6)
        .flat_map(all_strings)
        .flat_map(|c| targets.iter().map(move |d| (c.clone(), d.clone())))
        .collect();
    let mode = ClassMode::PushUp;
    let reports = verify_all(&instances, mode, DEFAULT_CAP);
    let elapsed = start.elapsed();
    let mut pairs = 0;
    let mut mismatches = 0;
    let mut errors = 0;
    let mut other = 0;
    for report in &reports {
        match report {
            Ok(r) => {
                pairs += r.pairs_checked;
                mismatches += r.decide_mismatches;
                other += r.mismatches.iter().filter(|m| !matches!(m, Mismatch::Decide { .. })).count();
            }
            Err(_) => errors += 1,
        }
    }
    let passed = mismatches == 0 && errors == 0 && other == 0 && elapsed <= Duration::from_secs(15 * 60);
    outcome(
        passed,
        format!(
            "{} instances, {pairs} ordered pairs, {mismatches} decision mismatches, {other} report mismatches, {errors} errors, class mode {mode:?}, {:.0?}",
            instances.len(),
            elapsed
        ),
    )
}

fn lemma_suites() -> Outcome {
    let start = Instant::now();
    // Rotating the target relabels its vertices and leaves every tally unchanged.
    let targets: Vec<OrientationString> = non_contractible(3..=6).into_iter().filter(is_least_rotation).collect();
    let sources: Vec<OrientationString> = (3..=6).flat_map(all_strings).collect();
    let tally = sources
        .par_iter()
        .map(|c| {
            let mut t = LemmaTally::default();
            for d in &targets {
                t.merge(check_lemmas(c, d));
            }
            t
        })
        .reduce(LemmaTally::default, |mut a, b| {
            a.merge(b);
            a
        });
    let passed = tally.violations() == 0;
    let mut detail = format!(
        "{} instances (targets up to rotation), {} edges ({} non-refinable); violations: wind {}, step {}, up/down {}, single vertex {}/{} ({} of them runs along symmetric edges of C), equal length {}/{}, push-up {}/{}; {:.0?}",
        tally.instances,
        tally.edges,
        tally.non_refinable,
        tally.mixed_wind,
        tally.long_moves,
        tally.not_up_or_down,
        tally.single_vertex_violations,
        tally.single_vertex_checked,
        tally.symmetric_runs,
        tally.equal_length_violations,
        tally.equal_length_checked,
        tally.pushup_violations,
        tally.pushup_paths,
        start.elapsed()
    );
    if let Some(example) = tally.examples.first().or(tally.run_examples.first()) {
        detail.push_str(&format!("; e.g. {example}"));
    }
    outcome(passed, detail)
}

/// Bit `p` set when `p` pattern symbols can be embedded in the text read so far.
fn embeddable_prefixes(pattern: &[OrientationSymbol], text: &[OrientationSymbol]) -> u32 {
    let masks: Vec<u32> = OrientationSymbol::ALL
        .iter()
        .map(|&x| (0..pattern.len()).filter(|&p| symbol_matches(pattern[p], x)).fold(0, |acc, p| acc | 1 << p))
        .collect();
    let index = |x: OrientationSymbol| OrientationSymbol::ALL.iter().position(|&y| y == x).unwrap();
    text.iter().fold(1, |reach, &x| reach | (reach & masks[index(x)]) << 1)
}

fn streaming_matches_exhaustive() -> Outcome {
    let start = Instant::now();
    let roots: Vec<OrientationString> = (1..=3).flat_map(all_strings).collect();
    let texts: Vec<OrientationString> = (1..=12).flat_map(all_strings).collect();
    let (checked, power_mismatch, ceil_wrong, gamma_checked, gamma_mismatch) = texts
        .par_iter()
        .map(|text| {
            let mut tally = (0usize, 0usize, 0usize, 0usize, 0usize);
            let m = text.len();
            for root in &roots {
                let p = root.len();
                let longest = root.concat_power(m / p + 1, None);
                let reach = embeddable_prefixes(longest.symbols(), text.symbols());
                let exhaustive = (0..=m / p + 1).rev().find(|k| reach >> (k * p) & 1 == 1).unwrap_or(0);
                tally.0 += 1;
                if max_power(root, text) != exhaustive {
                    tally.1 += 1;
                }
                if greedy_stream_count(root, text.iter()).ceiling_power() != exhaustive {
                    tally.2 += 1;
                }
                for k in 1..=m / p {
                    let gamma = gamma_set(root, text, k);
                    for i in 0..p {
                        let shifted = root.shift(i);
                        let probe = shifted.concat_power(k, None).push(shifted.symbols()[0]);
                        let direct = embeddable_prefixes(probe.symbols(), text.symbols()) >> probe.len() & 1 == 1;
                        tally.3 += 1;
                        if direct != gamma.contains(&i) {
                            tally.4 += 1;
                        }
                    }
                }
            }
            tally
        })
        .reduce(|| (0, 0, 0, 0, 0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2, a.3 + b.3, a.4 + b.4));
    outcome(
        power_mismatch == 0 && gamma_mismatch == 0 && ceil_wrong > 0,
        format!(
            "{checked} root/text pairs: floor reading {power_mismatch} mismatches, ceiling reading wrong on {ceil_wrong}; {gamma_checked} gamma memberships, {gamma_mismatch} mismatches; {:.1?}",
            start.elapsed()
        ),
    )
}

fn streaming_performance() -> Outcome {
    let root = s("+-+-").primitive_root().root;
    let lengths = bench::doubling_lengths(100_000, 12_800_000);
    let rows = bench::run(&root, &lengths, 7, 1);
    let ratios: Vec<f64> = rows
        .windows(2)
        .map(|w| w[1].best.as_secs_f64() / w[0].best.as_secs_f64())
        .collect();
    let worst = ratios.iter().cloned().fold(0.0, f64::max);

    // Streaming a lazily generated text: nothing but the input generator lives on the heap.
    let peaks: Vec<usize> = [1_000usize, 100_000, 10_000_000]
        .iter()
        .map(|&length| {
            let mut rng = ChaCha8Rng::seed_from_u64(3);
            let text = (0..length).map(move |_| OrientationSymbol::ALL[rng.random_range(0..3)]);
            let (count, peak) = peak_allocation(|| greedy_stream_count(&root, text));
            std::hint::black_box(count);
            peak
        })
        .collect();
    let constant = peaks.windows(2).all(|w| w[0] == w[1]);
    outcome(
        worst <= 2.3 && constant,
        format!(
            "lengths {}..{}: worst doubling ratio {worst:.2} (ratios {}); peak heap during the pass {:?} bytes",
            lengths[0],
            lengths[lengths.len() - 1],
            ratios.iter().map(|r| format!("{r:.2}")).collect::<Vec<_>>().join(" "),
            peaks
        ),
    )
}

fn count_audit() -> Outcome {
    let start = Instant::now();
    let targets = non_contractible(3..=5);
    let sources: Vec<OrientationString> = (3..=6).flat_map(all_strings).collect();
    let audits: Vec<(CountMatch, String)> = sources
        .par_iter()
        .flat_map_iter(|c| {
            targets.iter().flat_map(move |d| {
                let report = characterize(c, d).unwrap();
                let differing: Vec<_> = report
                    .winds
                    .iter()
                    .filter(|w| w.status == WindStatus::Blocks && w.literal_c != w.block_count)
                    .cloned()
                    .collect();
                if differing.is_empty() {
                    return Vec::new();
                }
                let components = component_analysis(&graph(c, d));
                differing
                    .into_iter()
                    .map(|w| {
                        let oracle = components.iter().filter(|x| x.wind == Some(w.wind)).count();
                        let matches = match (oracle == w.literal_c, oracle == w.block_count) {
                            (true, true) => CountMatch::Both,
                            (true, false) => CountMatch::Literal,
                            (false, true) => CountMatch::Block,
                            (false, false) => CountMatch::Neither,
                        };
                        (matches, format!("C={c} D={d} w={} literal {} block {} oracle {oracle}", w.wind, w.literal_c, w.block_count))
                    })
                    .collect()
            })
        })
        .collect();
    let count = |m: CountMatch| audits.iter().filter(|(x, _)| *x == m).count();
    let neither = count(CountMatch::Neither);

    let known = characterize(&s("****"), &s("****")).unwrap();
    let w1 = known.wind(1).unwrap();
    let oracle_known = component_analysis(&graph(&s("****"), &s("****")))
        .iter()
        .filter(|c| c.wind == Some(1))
        .count();
    let known_ok = (w1.literal_c, w1.block_count, oracle_known) == (1, 4, 4);

    let mut detail = format!(
        "{} winds where the readings differ: oracle equals literal c on {}, block count on {}, neither on {neither}; C=D=**** gives literal {} block {} oracle {oracle_known}; {:.0?}",
        audits.len(),
        count(CountMatch::Literal),
        count(CountMatch::Block),
        w1.literal_c,
        w1.block_count,
        start.elapsed()
    );
    if let Some((_, example)) = audits.iter().find(|(m, _)| *m == CountMatch::Neither) {
        detail.push_str(&format!("; e.g. {example}"));
    }
    outcome(neither == 0 && known_ok && !audits.is_empty(), detail)
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("1 fifteen-cycle characterization", figure_one),
        ("2 monotone wind-1 maps and their up path", figure_two),
        ("3 eight-cycle on four-cycle components", fact_one_two),
        ("4 decision vs oracle sweep", master_sweep),
        ("5 Hom-graph lemma suites", lemma_suites),
        ("6 streaming vs exhaustive matching", streaming_matches_exhaustive),
        ("7 streaming performance", streaming_performance),
        ("8 component count audit", count_audit),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let result = check();
        let status = if result.passed { "PASS" } else { "FAIL" };
        println!("{status} criterion {name}: {}", result.detail);
        failed += usize::from(!result.passed);
    }
    if failed == 0 {
        println!("all 8 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("{failed} of 8 criteria failed");
        ExitCode::FAILURE
    }
}
