//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails. Numeric arguments select a subset of criteria.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use dynapsp::decremental::{preprocess, BuildSpec};
use dynapsp::dynamic::ScheduleKind;
use dynapsp::harness::{
    bench_stream, check_engine, generate_graph, generate_stream, verify_adaptive, verify_stream, Adversary,
    MismatchKind, VerifyReport, WorkloadSpec,
};
use dynapsp::oracle::{apsp_oracle, hop_oracle};
use dynapsp::sampling::{sample_centers, SamplerConfig};
use dynapsp::{DynamicApsp, EngineConfig, NodeId, Variant, INFINITY};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const DENSITY: f64 = 0.1;

/// Path checks gathered from every replay suite.
#[derive(Default)]
struct PathTally {
    checked: u64,
    failures: Vec<String>,
}

impl PathTally {
    fn absorb(&mut self, suite: &str, r: &VerifyReport) {
        self.checked += r.paths_checked;
        if let Some(m) = r.mismatch.filter(|m| m.kind == MismatchKind::Path) {
            self.failures.push(format!("{suite}: {m}"));
        }
    }
}

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(failures: &[String], summary: String) -> Self {
        let detail = match failures.first() {
            None => summary,
            Some(f) => format!("{summary}; {} failure(s), first: {f}", failures.len()),
        };
        Outcome {
            pass: failures.is_empty(),
            detail,
        }
    }
}

/// Replays seeds through `run`, collecting distance mismatches and errors.
fn replay_suite(
    name: &str,
    seeds: std::ops::Range<u64>,
    paths: &mut PathTally,
    mut run: impl FnMut(u64) -> dynapsp::Result<VerifyReport>,
) -> Outcome {
    let mut failures = Vec::new();
    let (mut updates, mut pairs) = (0, 0);
    for seed in seeds.clone() {
        match run(seed) {
            Ok(r) => {
                updates += r.updates;
                pairs += r.pairs_checked;
                paths.absorb(name, &r);
                if let Some(m) = r.mismatch.filter(|m| m.kind == MismatchKind::Distance) {
                    failures.push(format!("seed {seed}: {m}"));
                }
            }
            Err(e) => failures.push(format!("seed {seed}: {e}")),
        }
    }
    Outcome::new(
        &failures,
        format!(
            "{} seeds, {updates} updates, {pairs} pair checks",
            seeds.end - seeds.start
        ),
    )
}

fn oblivious(spec: &WorkloadSpec, cfg: EngineConfig) -> dynapsp::Result<VerifyReport> {
    let g = generate_graph(spec)?;
    let stream = generate_stream(spec, &g)?;
    verify_stream(&g, &stream, cfg)
}

fn weighted_oracle(paths: &mut PathTally) -> Outcome {
    replay_suite("weighted", 0..100, paths, |seed| {
        oblivious(
            &WorkloadSpec::mixed(64, DENSITY, 50, seed),
            EngineConfig::default().with_seed(seed),
        )
    })
}

fn adaptive(paths: &mut PathTally) -> Outcome {
    let mut parts = Vec::new();
    let mut failures = Vec::new();
    for kind in [Adversary::PathAttacker, Adversary::CenterHunter] {
        let o = replay_suite(&format!("{kind:?}"), 0..100, paths, |seed| {
            let spec = WorkloadSpec::mixed(64, DENSITY, 50, seed).with_adversary(kind);
            let g = generate_graph(&spec)?;
            verify_adaptive(&g, &spec, EngineConfig::default().with_seed(seed))
        });
        if !o.pass {
            failures.push(format!("{kind:?}: {}", o.detail));
        }
        parts.push(format!("{kind:?} {}", o.detail));
    }
    Outcome::new(&failures, parts.join("; "))
}

fn negative_weights(paths: &mut PathTally) -> Outcome {
    let mut failures = Vec::new();
    let (mut updates, mut triples, mut negative_edges) = (0u64, 0u64, 0usize);
    for seed in 0..50u64 {
        let spec = WorkloadSpec::mixed(48, DENSITY, 50, seed).with_weights(-20, 100);
        let mut run = || -> dynapsp::Result<Vec<String>> {
            let mut bad = Vec::new();
            let g = generate_graph(&spec)?;
            negative_edges += g.edges().filter(|e| e.2 < 0).count();
            let stream = generate_stream(&spec, &g)?;
            let mut engine = DynamicApsp::new(&g, EngineConfig::default().with_seed(seed))?;

            // potential identity on the initial snapshot, 200 triples per seed
            let ds = engine.active_structures().next().expect("one structure");
            let reweighted = apsp_oracle(ds.snapshot());
            let original = apsp_oracle(&g);
            let p = ds.potentials();
            let ids = ds.ids();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..200 {
                let (s, t) = (rng.gen_range(0..ids.len()), rng.gen_range(0..ids.len()));
                let d = original.dist(ids[s], ids[t]);
                let expect = if d == INFINITY { INFINITY } else { d + p[s] - p[t] };
                if reweighted.dist(s, t) != expect {
                    bad.push(format!("seed {seed}: identity fails at ({s}, {t}, p)"));
                }
                triples += 1;
            }

            let mut report = VerifyReport::default();
            let mut check = |engine: &DynamicApsp, bad: &mut Vec<String>| -> dynapsp::Result<()> {
                for ds in engine.active_structures() {
                    if let Some(e) = ds.snapshot().edges().find(|e| e.2 < 0) {
                        bad.push(format!(
                            "seed {seed} update {}: reweighted edge {e:?}",
                            engine.updates()
                        ));
                    }
                }
                if let Some(m) = check_engine(engine, &mut report)? {
                    bad.push(format!("seed {seed}: {m}"));
                }
                Ok(())
            };
            check(&engine, &mut bad)?;
            for r in &stream {
                if let dynapsp::format::StreamRecord::Update(e) = r {
                    engine.update(e)?;
                    updates += 1;
                    check(&engine, &mut bad)?;
                }
            }
            report.updates = engine.updates();
            paths.absorb("negative", &report);
            Ok(bad)
        };
        match run() {
            Ok(bad) => failures.extend(bad),
            Err(e) => failures.push(format!("seed {seed}: {e}")),
        }
    }
    if negative_edges == 0 {
        failures.push("no negative edges were generated".into());
    }
    Outcome::new(
        &failures,
        format!("50 seeds, {updates} updates, {negative_edges} negative input edges, {triples} identity triples"),
    )
}

/// Deletion sets of size at most 4: all of them for graphs of up to 10
/// nodes, otherwise every set of size at most 2 plus random larger sets.
fn deletion_sets(n: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<NodeId>> {
    let cap = if n <= 10 { 4 } else { 2 };
    let mut sets = vec![Vec::new()];
    for mask in 1u32..(1 << n) {
        if mask.count_ones() <= cap {
            sets.push((0..n).filter(|&i| mask >> i & 1 == 1).collect());
        }
    }
    if n > 10 {
        let nodes: Vec<NodeId> = (0..n).collect();
        for _ in 0..48 {
            let k = rng.gen_range(3..=4);
            let mut d: Vec<NodeId> = nodes.choose_multiple(rng, k).copied().collect();
            d.sort_unstable();
            sets.push(d);
        }
    }
    sets
}

fn sketch_preservation() -> Outcome {
    let mut failures = Vec::new();
    let (mut sketches, mut pairs) = (0u64, 0u64);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for instance in 0..500u64 {
        let n = rng.gen_range(3..=20);
        let density = rng.gen_range(0.1..0.35);
        let g = generate_graph(&WorkloadSpec::mixed(n, density, 0, instance).with_weights(0, 20)).unwrap();
        let ds = preprocess(&g, 3.0, instance).unwrap();
        let snap = ds.snapshot();
        for d in deletion_sets(n, &mut rng) {
            for (li, layer) in ds.layers().iter().enumerate() {
                for rank in 0..layer.visits().len() {
                    let Some(sk) = ds.sketch(li, rank, &d).unwrap() else {
                        continue;
                    };
                    sketches += 1;
                    let v = layer.visits()[rank].node();
                    let mut gone: BTreeSet<NodeId> = d.iter().copied().collect();
                    let before = layer.visited_before(rank);
                    gone.extend((0..n).filter(|&u| before[u]));
                    let sub = snap.without(gone.iter().copied());
                    let full = apsp_oracle(&sub);
                    let hop = hop_oracle(&sub, layer.hop_bound());
                    for x in sub.alive_nodes() {
                        for (exact, bounded, got, dir) in [
                            (full.dist(x, v), hop.dist(x, v), sk.to_root.dist(x), "to"),
                            (full.dist(v, x), hop.dist(v, x), sk.from_root.dist(x), "from"),
                        ] {
                            if exact == INFINITY || bounded != exact {
                                continue;
                            }
                            pairs += 1;
                            if got != exact {
                                failures.push(format!(
                                    "instance {instance} level {} v {v} x {x} ({dir}) D {d:?}: sketch {got}, oracle {exact}",
                                    layer.level()
                                ));
                            }
                        }
                    }
                }
            }
        }
    }
    Outcome::new(
        &failures,
        format!("500 instances, {sketches} sketches, {pairs} hop-feasible pairs"),
    )
}

fn congestion_bound() -> Outcome {
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    for n in [128usize, 256] {
        for seed in 0..20u64 {
            let g = generate_graph(&WorkloadSpec::mixed(n, 6.0 / n as f64, 0, seed)).unwrap();
            let ds = preprocess(&g, 3.0, seed).unwrap();
            for layer in ds.layers() {
                let bound = 4.0 * layer.hop_bound() as f64 * n as f64 * (1.0 + (n as f64).ln());
                let c = layer.max_congestion() as f64;
                worst = worst.max(c / bound);
                if c > bound {
                    failures.push(format!("n {n} seed {seed} level {}: {c} > {bound:.0}", layer.level()));
                }
            }
        }
    }
    Outcome::new(
        &failures,
        format!("n in {{128, 256}}, 20 seeds each, max counter / bound = {worst:.4}"),
    )
}

fn hitting_sets() -> Outcome {
    const N: usize = 256;
    let mut failures = Vec::new();
    let (mut long_paths, mut tied) = (0u64, 0u64);
    let universe: Vec<NodeId> = (0..N).collect();
    for seed in 0..200u64 {
        let g = generate_graph(&WorkloadSpec::mixed(N, 3.0 / N as f64, 0, seed)).unwrap();
        let spec = BuildSpec::randomized(3.0, seed);
        let cfg = SamplerConfig::new(3.0, seed, N).unwrap();
        let x = 1.0 + 3.0 * 4.0 * (N as f64).ln();
        let levels: Vec<(usize, Vec<bool>)> = (1..=8u32)
            .map(|i| {
                let h = 1usize << i;
                let centers = sample_centers(&cfg, h, &universe, spec.stream(i));
                if centers.len() as f64 > 3.0 * x * N as f64 / h as f64 {
                    failures.push(format!("seed {seed} level {i}: |C| = {}", centers.len()));
                }
                let mut mask = vec![false; N];
                centers.iter().for_each(|&c| mask[c] = true);
                (h, mask)
            })
            .collect();
        if seed < 4 {
            // the build samples the same centers
            let ds = preprocess(&g, 3.0, seed).unwrap();
            for (layer, (_, mask)) in ds.layers().iter().zip(&levels) {
                if layer.centers().any(|c| !mask[c]) || layer.center_count() != mask.iter().filter(|&&b| b).count() {
                    failures.push(format!("seed {seed} level {}: build centers differ", layer.level()));
                }
            }
            tied += 1;
        }
        let o = apsp_oracle(&g);
        for s in 0..N {
            for t in 0..N {
                let Some(hops) = o.hops(s, t) else { continue };
                let path = o.path(s, t).unwrap();
                for (h, mask) in &levels {
                    if 2 * hops < *h {
                        continue;
                    }
                    long_paths += 1;
                    if !path.iter().any(|&u| mask[u]) {
                        failures.push(format!("seed {seed} h {h}: path {s}->{t} with {hops} edges missed"));
                    }
                }
            }
        }
    }
    Outcome::new(
        &failures,
        format!("200 seeds, {long_paths} (path, level) checks, {tied} seeds cross-checked against the build"),
    )
}

fn deterministic(paths: &mut PathTally) -> Outcome {
    replay_suite("deterministic", 0..30, paths, |seed| {
        oblivious(
            &WorkloadSpec::mixed(48, DENSITY, 40, seed),
            EngineConfig::new(Variant::Deterministic).with_seed(seed),
        )
    })
}

/// Expected rebuild periods: twice the period of level `i` is `ceil(2 sqrt(n) / (2^i sqrt(log2 n)))`
/// for levels `1..=floor(log2(ceil(sqrt n)))`.
fn unweighted_periods(n: usize) -> Vec<(u32, usize)> {
    let root = (n as f64).sqrt().ceil() as usize;
    let top = usize::BITS - 1 - root.leading_zeros();
    (1..=top)
        .map(|i| {
            let twice = (2.0 * (n as f64).sqrt() / (f64::from(1u32 << i) * (n as f64).log2().sqrt())).ceil() as usize;
            (i, twice.div_ceil(2).max(1))
        })
        .collect()
}

fn unweighted(paths: &mut PathTally) -> Outcome {
    const N: usize = 64;
    const UPDATES: u64 = 40;
    let periods = unweighted_periods(N);
    let mut expected = Vec::new();
    for u in 1..=UPDATES {
        for &(level, delta) in &periods {
            let swap = u > 1 && (u - 1) % delta as u64 == 0;
            if swap {
                expected.push((u, level, ScheduleKind::Swap));
            }
            if u == 1 || swap {
                expected.push((u, level, ScheduleKind::BuildStart));
            }
        }
    }
    let mut schedule_failures = Vec::new();
    let mut o = replay_suite("unweighted", 0..50, paths, |seed| {
        let spec = WorkloadSpec::mixed(N, DENSITY, UPDATES as usize, seed).with_weights(1, 1);
        let g = generate_graph(&spec)?;
        let stream = generate_stream(&spec, &g)?;
        let cfg = EngineConfig::new(Variant::Unweighted).with_seed(seed);
        let report = verify_stream(&g, &stream, cfg)?;
        let mut engine = DynamicApsp::new(&g, cfg)?;
        for r in &stream {
            if let dynapsp::format::StreamRecord::Update(e) = r {
                engine.update(e)?;
            }
        }
        let got: Vec<_> = engine.audit_log().iter().map(|e| (e.update, e.level, e.kind)).collect();
        if engine.deltas() != periods || got != expected {
            schedule_failures.push(format!("seed {seed}: schedule {:?} differs", engine.deltas()));
        }
        Ok(report)
    });
    if !schedule_failures.is_empty() {
        o = Outcome::new(&schedule_failures, o.detail);
    }
    o.detail = format!("{}; periods {periods:?}", o.detail);
    o
}

fn realizability(paths: &PathTally) -> Outcome {
    let mut failures = paths.failures.clone();
    if paths.checked == 0 {
        failures.push("no paths were checked".into());
    }
    Outcome::new(
        &failures,
        format!("{} finite answers walked across the replay suites", paths.checked),
    )
}

fn scaling_trend() -> Outcome {
    let mut ratios = Vec::new();
    let mut failures = Vec::new();
    for n in [64usize, 128, 256] {
        let mut total = 0u64;
        let mut count = 0u64;
        for seed in 0..3u64 {
            let spec = WorkloadSpec::mixed(n, 6.0 / n as f64, 50, seed);
            let g = generate_graph(&spec).unwrap();
            let stream = generate_stream(&spec, &g).unwrap();
            for r in bench_stream(&g, &stream, EngineConfig::default().with_seed(seed)).unwrap() {
                total += r.relaxations;
                count += 1;
            }
        }
        ratios.push((n, total as f64 / count as f64 / (n as f64).powi(3)));
    }
    for w in ratios.windows(2) {
        if w[1].1 >= w[0].1 {
            failures.push(format!(
                "n {} ratio {:.4} not below n {} ratio {:.4}",
                w[1].0, w[1].1, w[0].0, w[0].1
            ));
        }
    }
    let shown: Vec<String> = ratios.iter().map(|(n, r)| format!("n={n}: {r:.4}")).collect();
    Outcome::new(
        &failures,
        format!("mean relaxations per update / n^3: {}", shown.join(", ")),
    )
}

fn main() -> ExitCode {
    let selected: BTreeSet<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let wanted = |k: u32| selected.is_empty() || selected.contains(&k);
    let mut paths = PathTally::default();
    let mut all_pass = true;
    let mut report = |k: u32, name: &str, f: &mut dyn FnMut(&mut PathTally) -> Outcome| {
        if !wanted(k) {
            return;
        }
        let start = Instant::now();
        let o = f(&mut paths);
        all_pass &= o.pass;
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!(
            "{tag} {k:>2} {name}: {} [{:.1}s]",
            o.detail,
            start.elapsed().as_secs_f64()
        );
    };
    report(1, "oracle equivalence, randomized weighted", &mut weighted_oracle);
    report(2, "adaptive adversaries", &mut adaptive);
    report(3, "negative weights", &mut negative_weights);
    report(4, "sketch preservation", &mut |_| sketch_preservation());
    report(5, "congestion bound", &mut |_| congestion_bound());
    report(6, "hitting-set bounds", &mut |_| hitting_sets());
    report(7, "deterministic variant", &mut deterministic);
    report(8, "unweighted variant and schedule", &mut unweighted);
    report(9, "path realizability", &mut |p| realizability(p));
    report(10, "scaling trend", &mut |_| scaling_trend());
    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
