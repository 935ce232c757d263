use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use reachckt::combinatorics::{
    check_family_exact, check_family_sampled, plane_family, sample_family, CoveringFamily, FamilyParams, FamilyVerdict,
    DEFAULT_EXACT_BUDGET,
};
use reachckt::constructions::{
    build_explicit, build_reach_exact, build_reach_leq, build_theorem, predict_depth, ratio_table, squaring_ledger,
    DepthLedger, PredictMode, TheoremOptions, TREND_EXPONENTS,
};
use num_bigint::BigUint;
use reachckt::rng::{derive_seed, RNG_ALGORITHM};
use reachckt::verification::{
    bfs_reachable, enumerate_graphs, no_path_graph, planted_path_graph, random_graph, shortest_path_length,
};
use reachckt::{AdjacencyMatrix, Error, MonotoneCircuit, VERSION};

use crate::{BuildArgs, BuildMode, CheckArgs, CheckMode, PredictArgs, PredictModeArg, SampleArgs, VerifyArgs, VerifyMode};

const DENSITIES: [f64; 3] = [0.02, 0.1, 0.5];

/// Parse and argument errors exit with 2, everything else with 1.
pub fn exit_code_for(err: &anyhow::Error) -> ExitCode {
    match err.downcast_ref::<Error>() {
        Some(Error::Parse { .. }) | Some(Error::InvalidParameter(_)) => ExitCode::from(2),
        _ => ExitCode::from(1),
    }
}

fn header(seed: Option<u64>) -> Vec<String> {
    let argv: Vec<String> = std::env::args().collect();
    let mut lines = vec![format!("reachckt {VERSION}"), format!("command: {}", argv.join(" "))];
    if let Some(seed) = seed {
        lines.push(format!("rng: {RNG_ALGORITHM} seed={seed}"));
    }
    lines
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn load_circuit(path: &Path) -> Result<MonotoneCircuit> {
    Ok(MonotoneCircuit::parse(&read(path)?)?)
}

pub fn build(a: &BuildArgs) -> Result<ExitCode> {
    let default_l = || a.n.saturating_sub(1).max(1);
    let mut seed = None;
    let (circuit, ledger) = match a.mode {
        BuildMode::Squaring => {
            let l = a.l.unwrap_or_else(default_l);
            let c = build_reach_leq(a.n, l)?;
            let ledger = squaring_ledger(a.n, l, &c);
            (c, ledger)
        }
        BuildMode::Exact => {
            let Some(l) = a.l else { bail!(Error::InvalidParameter("exact mode needs --l".into())) };
            let c = build_reach_exact(a.n, l)?;
            let mut ledger = DepthLedger::new();
            ledger.push("exact product", c.measure_depth() as u64, Some(c.measure_depth() as u64));
            (c, ledger)
        }
        BuildMode::Explicit => {
            let built = build_explicit(a.n)?;
            (built.circuit, built.ledger)
        }
        BuildMode::Theorem => {
            seed = Some(a.seed);
            let opts = TheoremOptions {
                seed: a.seed,
                attempt_budget: a.attempts,
                allow_sampled: a.allow_sampled,
                ..TheoremOptions::default()
            };
            let built = build_theorem(a.n, a.l.unwrap_or_else(default_l), &opts)?;
            (built.circuit, built.ledger)
        }
    };
    write(&a.out, &circuit.to_text())?;
    let ledger_path = a.ledger.clone().unwrap_or_else(|| {
        let mut p = a.out.clone().into_os_string();
        p.push(".csv");
        PathBuf::from(p)
    });
    write(&ledger_path, &ledger.to_csv(&header(seed)))?;
    println!(
        "wrote {} (depth {}, {} gates) and {}",
        a.out.display(),
        circuit.measure_depth(),
        circuit.gate_count(),
        ledger_path.display()
    );
    Ok(ExitCode::SUCCESS)
}

pub fn eval(circuit: &Path, graph: &Path) -> Result<ExitCode> {
    let c = load_circuit(circuit)?;
    let g = AdjacencyMatrix::parse(&read(graph)?)?;
    let bits: Vec<&str> = c
        .evaluate_all(&g)?
        .into_iter()
        .map(|b| if b { "1" } else { "0" })
        .collect();
    println!("{}", bits.join(" "));
    Ok(ExitCode::SUCCESS)
}

fn sample_graph(a: &VerifyArgs, idx: u64) -> Result<AdjacencyMatrix> {
    let seed = derive_seed(a.seed, 1, idx);
    let n = a.n;
    let sample = match a.mode {
        VerifyMode::Exhaustive => unreachable!(),
        VerifyMode::Random => random_graph(n, DENSITIES[(idx % 3) as usize], seed)?,
        VerifyMode::Planted if idx.is_multiple_of(2) => {
            let max_len = a.l.unwrap_or(n - 1).clamp(1, n - 1);
            let len = 1 + (idx / 2) as usize % max_len;
            planted_path_graph(n, len, DENSITIES[(idx / 2 % 3) as usize] / 2.0, seed)?
        }
        VerifyMode::Planted => no_path_graph(n, DENSITIES[(idx / 2 % 3) as usize], seed)?,
    };
    Ok(sample.matrix)
}

pub fn verify(a: &VerifyArgs) -> Result<ExitCode> {
    let c = load_circuit(&a.circuit)?;
    if c.num_vertices() != a.n {
        bail!(Error::InvalidParameter(format!(
            "circuit has {} vertices, --n is {}",
            c.num_vertices(),
            a.n
        )));
    }
    if c.outputs().len() != 1 || a.n < 2 {
        bail!(Error::InvalidParameter("verify needs a single-output circuit with n >= 2".into()));
    }
    let graphs: Box<dyn Iterator<Item = Result<AdjacencyMatrix>>> = match a.mode {
        VerifyMode::Exhaustive => Box::new(enumerate_graphs(a.n)?.map(Ok)),
        _ => Box::new((0..a.samples).map(|idx| sample_graph(a, idx))),
    };
    let (mut checked, mut skipped) = (0u64, 0u64);
    let mut batch = Vec::with_capacity(64);
    let mut expected = Vec::with_capacity(64);
    let mut graphs = graphs.peekable();
    while graphs.peek().is_some() {
        batch.clear();
        expected.clear();
        for g in graphs.by_ref() {
            let g = g?;
            let want = bfs_reachable(&g, 1, a.n)?;
            if let (Some(l), true) = (a.l, want) {
                if shortest_path_length(&g, 1, a.n)?.is_some_and(|d| d > l) {
                    skipped += 1;
                    continue;
                }
            }
            batch.push(g);
            expected.push(want);
            if batch.len() == 64 {
                break;
            }
        }
        let got = c.evaluate_many(&batch)?;
        for ((g, &want), &have) in batch.iter().zip(&expected).zip(&got) {
            if want != have {
                eprintln!("mismatch after {checked} agreeing graphs: circuit {have}, oracle {want}");
                print!("{}", g.to_text());
                return Ok(ExitCode::from(1));
            }
            checked += 1;
        }
    }
    println!("ok: {checked} graphs agree with the oracle, {skipped} outside the promise skipped");
    Ok(ExitCode::SUCCESS)
}

pub fn family_plane(n: usize, out: &Path) -> Result<ExitCode> {
    let family = plane_family(n)?;
    write(out, &family.to_text())?;
    println!("wrote {} ({})", out.display(), family.params());
    Ok(ExitCode::SUCCESS)
}

pub fn family_sample(a: &SampleArgs) -> Result<ExitCode> {
    let p = FamilyParams::new(a.n, a.m, a.s, a.l, a.d)?;
    for attempt in 0..a.attempts {
        let seed = derive_seed(a.seed, 0, attempt);
        let family = sample_family(&p, seed)?;
        if let FamilyVerdict::Verified = check_family_exact(&family, DEFAULT_EXACT_BUDGET)? {
            write(&a.out, &family.to_text())?;
            println!(
                "rng {RNG_ALGORITHM} seed={} attempt={attempt} derived seed={seed}: verified {p}, wrote {}",
                a.seed,
                a.out.display()
            );
            return Ok(ExitCode::SUCCESS);
        }
    }
    eprintln!("no verified {p} family in {} attempts (seed={})", a.attempts, a.seed);
    Ok(ExitCode::from(1))
}

pub fn family_check(a: &CheckArgs) -> Result<ExitCode> {
    let family = CoveringFamily::parse(&read(&a.file)?)?;
    let verdict = match a.mode {
        CheckMode::Exact => check_family_exact(&family, a.budget.unwrap_or(DEFAULT_EXACT_BUDGET))?,
        CheckMode::Sampled => check_family_sampled(&family, a.trials, a.seed)?,
    };
    match verdict {
        FamilyVerdict::Verified => println!("pass: every d-subset checked"),
        FamilyVerdict::NoViolationFound { trials } => {
            println!("no violation found in {trials} random d-subsets (rng {RNG_ALGORITHM} seed={})", a.seed)
        }
        FamilyVerdict::Violated(cx) => {
            println!("fail: {cx}");
            return Ok(ExitCode::from(1));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_size(text: &str) -> Result<BigUint> {
    let parsed = match text.trim().strip_prefix("2^") {
        Some(exp) => exp.parse::<u32>().ok().map(|e| BigUint::from(1u32) << e),
        None => text.trim().parse::<BigUint>().ok(),
    };
    parsed.ok_or_else(|| Error::InvalidParameter(format!("{text:?} is neither N nor 2^E")).into())
}

pub fn predict(a: &PredictArgs) -> Result<ExitCode> {
    let mode = match a.mode {
        PredictModeArg::Squaring => PredictMode::Squaring,
        PredictModeArg::Explicit => PredictMode::Explicit,
        PredictModeArg::Theorem => PredictMode::Theorem,
    };
    let mut text = String::new();
    for line in header(None) {
        text.push_str(&format!("# {line}\n"));
    }
    if a.trend {
        text.push_str("exponent,predicted,ratio_num,ratio_den,ratio\n");
        for row in ratio_table(mode, &TREND_EXPONENTS)? {
            let (num, den) = (*row.ratio.numer(), *row.ratio.denom());
            text.push_str(&format!(
                "{},{},{num},{den},{:.6}\n",
                row.exponent,
                row.predicted,
                num as f64 / den as f64
            ));
        }
    } else {
        let n = parse_size(a.n.as_deref().unwrap_or_default())?;
        let l = a.l.as_deref().map(parse_size).transpose()?;
        let ledger = predict_depth(mode, &n, l.as_ref())?;
        text = ledger.to_csv(&header(None));
        text.push_str(&format!("# overhead over leading term: {:.3}\n", ledger.overhead));
    }
    match &a.out {
        Some(path) => write(path, &text)?,
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

pub fn stats(path: &Path) -> Result<ExitCode> {
    let c = load_circuit(path)?;
    println!("vertices {}", c.num_vertices());
    println!("gates {}", c.gate_count());
    println!("outputs {}", c.outputs().len());
    println!("depth {}", c.measure_depth());
    match c.validate() {
        Ok(()) => println!("valid"),
        Err(v) => {
            println!("invalid: {v}");
            return Ok(ExitCode::from(1));
        }
    }
    Ok(ExitCode::SUCCESS)
}
