//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero when a criterion fails that is not listed in `KNOWN_RED`.

use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use num_bigint::BigUint;
use reachckt::combinatorics::{
    check_family_exact, check_family_sampled, corollary_condition, failure_probability_bound, hitting_decomposition,
    plane_family, sample_family, statement4_bound, verify_cover_bound_exhaustive, CoverBoundVerdict, CoveringFamily,
    FamilyParams, FamilyVerdict, DEFAULT_EXACT_BUDGET,
};
use reachckt::constructions::{
    build_explicit, build_reach, build_reach_leq, build_theorem, ceil_log2, closure_squarings, predict_depth,
    ratio_table, DepthLedger, PredictMode, TheoremOptions, TREND_EXPONENTS,
};
use reachckt::rng::derive_seed;
use reachckt::verification::{
    bfs_reachable, enumerate_graphs, no_path_graph, planted_path_graph, random_graph, shortest_path,
};
use reachckt::{AdjacencyMatrix, MonotoneCircuit};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

/// Criteria expected to fail; see the README.
const KNOWN_RED: &[usize] = &[9];

/// Evaluates in batches of 64 and returns the first disagreement with `want`.
fn first_mismatch(
    c: &MonotoneCircuit,
    graphs: impl Iterator<Item = AdjacencyMatrix>,
    want: impl Fn(&AdjacencyMatrix) -> bool,
) -> (u64, Option<AdjacencyMatrix>) {
    let mut count = 0;
    let mut batch = Vec::with_capacity(64);
    let mut graphs = graphs.peekable();
    while graphs.peek().is_some() {
        batch.clear();
        batch.extend(graphs.by_ref().take(64));
        for (g, got) in batch.iter().zip(c.evaluate_many(&batch).unwrap()) {
            if got != want(g) {
                return (count, Some(g.clone()));
            }
            count += 1;
        }
    }
    (count, None)
}

fn bfs(g: &AdjacencyMatrix) -> bool {
    bfs_reachable(g, 1, g.n()).unwrap()
}

fn criterion_1() -> Outcome {
    let mut total = 0;
    for n in 2..=4 {
        let circuits = [("squaring", build_reach(n).unwrap()), ("explicit", build_explicit(n).unwrap().circuit)];
        for (name, c) in &circuits {
            let (count, bad) = first_mismatch(c, enumerate_graphs(n).unwrap(), bfs);
            if let Some(g) = bad {
                return Err(format!("{name} n={n} disagrees on\n{}", g.to_text()));
            }
            total += count;
        }
    }
    Ok(format!("{total} exhaustive evaluations, 0 mismatches"))
}

fn criterion_2() -> Outcome {
    let densities = [0.02, 0.1, 0.5];
    let mut parts = Vec::new();
    for n in [9usize, 16, 25, 64] {
        let c = build_explicit(n).unwrap().circuit;
        let graphs =
            (0..100_000u64).map(|i| random_graph(n, densities[(i % 3) as usize], derive_seed(2, n as u64, i)).unwrap().matrix);
        let (count, bad) = first_mismatch(&c, graphs, bfs);
        if let Some(g) = bad {
            return Err(format!("explicit n={n} disagrees on\n{}", g.to_text()));
        }
        parts.push(format!("n={n}: {count}"));
    }
    Ok(parts.join(", "))
}

fn promise_check(name: &str, c: &MonotoneCircuit, n: usize, l: usize) -> Outcome {
    let max_len = l.min(n - 1);
    let planted = (0..10_000u64).map(|i| {
        planted_path_graph(n, 1 + i as usize % max_len, 0.03, derive_seed(3, n as u64 * 1000 + l as u64, i))
            .unwrap()
            .matrix
    });
    if let (_, Some(g)) = first_mismatch(c, planted, |_| true) {
        return Err(format!("{name} missed a planted path in\n{}", g.to_text()));
    }
    let no_path = (0..10_000u64).map(|i| {
        let p = [0.1, 0.3, 0.6][(i % 3) as usize];
        no_path_graph(n, p, derive_seed(4, n as u64 * 1000 + l as u64, i)).unwrap().matrix
    });
    if let (_, Some(g)) = first_mismatch(c, no_path, |_| false) {
        return Err(format!("{name} fired without a path on\n{}", g.to_text()));
    }
    Ok(format!("{name} (n={n}, l={l})"))
}

fn criterion_3() -> Outcome {
    let mut done = Vec::new();
    for (n, l) in [(8usize, 3usize), (16, 5), (32, 7), (12, 11), (40, 2)] {
        done.push(promise_check("squaring", &build_reach_leq(n, l).unwrap(), n, l)?);
    }
    for (n, l) in [(8usize, 7usize), (16, 15), (16, 4)] {
        let built = build_theorem(n, l, &TheoremOptions::default()).map_err(|e| e.to_string())?;
        if built.schedule.k == 0 {
            return Err(format!("theorem n={n} l={l} has no composition level"));
        }
        done.push(promise_check("theorem", &built.circuit, n, l)?);
    }
    Ok(format!("2 x 10^4 graphs each for {}", done.join(", ")))
}

fn ledger_identity(name: &str, ledger: &DepthLedger, c: &MonotoneCircuit) -> Result<(), String> {
    let depth = c.measure_depth() as u64;
    let stage_sum: u64 = ledger.stages.iter().map(|s| s.measured.unwrap()).sum();
    if ledger.total_measured != Some(depth) || stage_sum != depth || ledger.total_predicted != depth {
        return Err(format!(
            "{name}: depth {depth}, stage sum {stage_sum}, predicted {}",
            ledger.total_predicted
        ));
    }
    Ok(())
}

fn criterion_4() -> Outcome {
    let mut builds = 0;
    for n in 2..=64usize {
        for l in 2..=64usize {
            let depth = build_reach_leq(n, l).unwrap().measure_depth() as u64;
            let bound = ceil_log2(l as u64) as u64 * (2 + ceil_log2(n as u64) as u64);
            if depth > bound {
                return Err(format!("n={n} l={l}: depth {depth} > {bound}"));
            }
            builds += 1;
        }
    }
    let mut compositions = 0;
    for n in 2..=64usize {
        let built = build_explicit(n).unwrap();
        let p = plane_family(n).unwrap().params();
        let closed = ceil_log2(p.m as u64) as u64
            + closure_squarings(p.d) as u64 * (1 + ceil_log2(n as u64) as u64)
            + build_reach_leq(p.s + 2, p.l / p.d).unwrap().measure_depth() as u64;
        ledger_identity(&format!("explicit n={n}"), &built.ledger, &built.circuit)?;
        if built.ledger.total_measured != Some(closed) {
            return Err(format!("explicit n={n}: closed form {closed}"));
        }
        compositions += 1;
    }
    for (n, l) in [(8usize, 7usize), (16, 15), (16, 4)] {
        let built = build_theorem(n, l, &TheoremOptions::default()).unwrap();
        ledger_identity(&format!("theorem n={n} l={l}"), &built.ledger, &built.circuit)?;
        let predicted = predict_depth(PredictMode::Theorem, &BigUint::from(n), Some(&BigUint::from(l))).unwrap();
        if predicted.total_predicted != built.ledger.total_predicted {
            return Err(format!("theorem n={n} l={l}: formula ledger disagrees"));
        }
        compositions += 1;
    }
    Ok(format!("{builds} squaring depths within bound; {compositions} composed ledgers exact"))
}

fn criterion_5() -> Outcome {
    let mut parts = Vec::new();
    for q in [2u64, 3] {
        match verify_cover_bound_exhaustive(q).unwrap() {
            CoverBoundVerdict::Pass { subsets } => parts.push(format!("q={q}: {subsets} subsets")),
            CoverBoundVerdict::Counterexample { lines, uncovered } => {
                return Err(format!("q={q}: lines {lines:?} leave {uncovered} points uncovered"))
            }
        }
    }
    Ok(parts.join(", "))
}

fn criterion_6() -> Outcome {
    for n in [4usize, 9] {
        let verdict = check_family_exact(&plane_family(n).unwrap(), DEFAULT_EXACT_BUDGET).unwrap();
        if verdict != FamilyVerdict::Verified {
            return Err(format!("plane n={n}: {verdict:?}"));
        }
    }
    for n in [16usize, 25, 49] {
        let verdict = check_family_sampled(&plane_family(n).unwrap(), 100_000, 6 + n as u64).unwrap();
        if verdict.is_violation() {
            return Err(format!("plane n={n}: {verdict:?}"));
        }
    }
    Ok("exact for n=4,9; 10^5 random d-sets for n=16,25,49".into())
}

const SAMPLER_PARAMS: [(usize, usize, usize, usize, usize); 3] =
    [(16, 16, 12, 8, 8), (12, 12, 10, 6, 6), (20, 20, 12, 10, 10)];

fn verified(f: &CoveringFamily) -> bool {
    check_family_exact(f, DEFAULT_EXACT_BUDGET).unwrap() == FamilyVerdict::Verified
}

fn criterion_7() -> Outcome {
    let mut parts = Vec::new();
    for (n, m, s, l, d) in SAMPLER_PARAMS {
        let p = FamilyParams::new(n, m, s, l, d).unwrap();
        if !corollary_condition(&p) || p.exact_check_cost() > 10_000_000 {
            return Err(format!("{p} is not an admissible parameter set"));
        }
        let first = (0..10u64).find(|&seed| verified(&sample_family(&p, seed).unwrap()));
        let Some(first) = first else {
            return Err(format!("{p}: no verified family in 10 seeds"));
        };
        let failures = (0..100u64).filter(|&seed| !verified(&sample_family(&p, seed).unwrap())).count();
        let allowed = 10.0 * failure_probability_bound(&p);
        if failures as f64 / 100.0 > allowed {
            return Err(format!("{p}: {failures}/100 failures, allowed {allowed:e}"));
        }
        parts.push(format!("{p} seed {first}, {failures}/100 failed (bound {:.1})", statement4_bound(&p)));
    }
    Ok(parts.join("; "))
}

fn criterion_8() -> Outcome {
    let mut families: Vec<CoveringFamily> = [9usize, 16, 25].iter().map(|&n| plane_family(n).unwrap()).collect();
    for (n, m, s, l, d) in SAMPLER_PARAMS {
        let p = FamilyParams::new(n, m, s, l, d).unwrap();
        let f = (0..10u64).map(|seed| sample_family(&p, seed).unwrap()).find(verified).unwrap();
        families.push(f);
    }
    let mut pairs = 0;
    let mut attempt = 0u64;
    while pairs < 1000 {
        let family = &families[attempt as usize % families.len()];
        let p = family.params();
        attempt += 1;
        let universe = family.union();
        let len = 1 + attempt as usize % p.l.min(p.n - 1);
        let g = planted_path_graph(p.n, len, 0.02, derive_seed(8, 0, attempt)).unwrap().matrix;
        let path = shortest_path(&g, 1, p.n).unwrap().unwrap();
        if path.iter().any(|v| universe.binary_search(v).is_err()) {
            continue;
        }
        let w = hitting_decomposition(family, &path).map_err(|e| format!("{p}: {e}"))?;
        w.check(family, &path).map_err(|e| format!("{p}: {e}"))?;
        if w.hops() * p.d > p.l || w.max_gap() > 2 * p.d {
            return Err(format!("{p}: witness {w:?}"));
        }
        pairs += 1;
    }
    Ok(format!("{pairs} witnesses over {} families", families.len()))
}

fn criterion_9() -> Outcome {
    let explicit = ratio_table(PredictMode::Explicit, &TREND_EXPONENTS).unwrap();
    let theorem = ratio_table(PredictMode::Theorem, &TREND_EXPONENTS).unwrap();
    let squaring = ratio_table(PredictMode::Squaring, &TREND_EXPONENTS).unwrap();
    let fmt = |rows: &[reachckt::constructions::TrendRow]| {
        rows.iter().map(|r| format!("{:.3}", *r.ratio.numer() as f64 / *r.ratio.denom() as f64)).collect::<Vec<_>>().join(" ")
    };
    println!("    exponents {TREND_EXPONENTS:?}");
    println!("    explicit  {}", fmt(&explicit));
    println!("    theorem   {}", fmt(&theorem));
    println!("    squaring  {}", fmt(&squaring));
    let monotone = explicit.windows(2).all(|w| w[1].ratio <= w[0].ratio);
    let above: Vec<u32> = theorem
        .iter()
        .zip(&squaring)
        .filter(|(t, s)| t.exponent >= 20 && t.ratio >= s.ratio)
        .map(|(t, _)| t.exponent)
        .collect();
    let summary = format!(
        "explicit nonincreasing: {}; theorem not below squaring at 2^{above:?}",
        if monotone { "yes" } else { "no" }
    );
    if monotone && above.is_empty() {
        Ok(summary)
    } else {
        Err(summary)
    }
}

fn criterion_10() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_reachckt");
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.mc");
    let runs: [&[&str]; 4] = [
        &["--mode", "squaring", "--n", "12", "--l", "5"],
        &["--mode", "exact", "--n", "6", "--l", "5"],
        &["--mode", "explicit", "--n", "16"],
        &["--mode", "theorem", "--n", "8", "--l", "7", "--seed", "11"],
    ];
    let build = |flags: &[&str], path: &Path| -> Result<Vec<u8>, String> {
        let status = Command::new(bin)
            .arg("build")
            .args(flags)
            .arg("--out")
            .arg(path)
            .output()
            .map_err(|e| e.to_string())?;
        if !status.status.success() {
            return Err(String::from_utf8_lossy(&status.stderr).into_owned());
        }
        fs::read(path).map_err(|e| e.to_string())
    };
    for flags in runs {
        let first = build(flags, &out)?;
        let first_csv = fs::read(dir.path().join("c.mc.csv")).unwrap();
        let second = build(flags, &out)?;
        let second_csv = fs::read(dir.path().join("c.mc.csv")).unwrap();
        if first != second || first_csv != second_csv {
            return Err(format!("build {flags:?} is not reproducible"));
        }
    }
    Ok(format!("{} build configurations byte-identical across runs", runs.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("exhaustive oracle equivalence", criterion_1),
        ("randomized oracle equivalence", criterion_2),
        ("promise soundness and completeness", criterion_3),
        ("depth bound and ledger identity", criterion_4),
        ("line cover bound, exhaustive", criterion_5),
        ("plane family correctness", criterion_6),
        ("random family sampler", criterion_7),
        ("hitting decomposition witnesses", criterion_8),
        ("depth trend report", criterion_9),
        ("build reproducibility", criterion_10),
    ];
    let mut unexpected = Vec::new();
    for (idx, (name, run)) in criteria.iter().enumerate() {
        let number = idx + 1;
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {number:>2} PASS  {name} [{secs:.1}s]: {detail}"),
            Err(detail) => {
                let tag = if KNOWN_RED.contains(&number) { "known" } else { "unexpected" };
                println!("criterion {number:>2} FAIL  {name} [{secs:.1}s] ({tag}): {detail}");
                if !KNOWN_RED.contains(&number) {
                    unexpected.push(number);
                }
            }
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
