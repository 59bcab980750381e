//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the report prints unconditionally;
//! exits non-zero if any criterion fails.

use std::process::{Command, ExitCode};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tempcops::fixtures;
use tempcops::kcop::{compute_max_k_augmented, decide_k_copwin, find_k_augmentation};
use tempcops::oracle::{copwin_configs, table_decides_copwin};
use tempcops::solver::SolverState;
use tempcops::strategy::{extract_strategy, play, round_limit, AdversarialRobber, Strategy};
use tempcops::{
    classify, compute_max_augmented, gen_random, solve, Arena, AugmentedArena, Budget, GenFlags,
    PeriodicGraph, SolveOptions, TemporalNode, Verdict,
};

/// Work constant for `op_total <= C·(p·n² + n·m)`, in thousandths. Measured
/// once at n = 50 (1.033 for p = 2 and p = 4, seed 9) and rounded up.
const C_MILLI: u64 = 1040;
/// Constant for `corner_scans <= c·n·m` and `dif_updates <= n·m`.
const C_SCAN: u64 = 1;

type Outcome = Result<String, String>;

const EARLY: SolveOptions = SolveOptions {
    early_stop: true,
    reflexive_connected: false,
};
const FULL: SolveOptions = SolveOptions {
    early_stop: false,
    reflexive_connected: false,
};

fn flag_sets() -> [GenFlags; 4] {
    [
        GenFlags {
            reflexive: false,
            symmetric: false,
        },
        GenFlags {
            reflexive: true,
            symmetric: false,
        },
        GenFlags {
            reflexive: false,
            symmetric: true,
        },
        GenFlags {
            reflexive: true,
            symmetric: true,
        },
    ]
}

/// 576 instances: n 2..=7, p 1..=4, d 0..=2, four flag sets, two seeds each.
fn suite() -> Vec<(String, PeriodicGraph)> {
    let mut out = Vec::new();
    let mut seed = 1000u64;
    for n in 2..=7 {
        for p in 1..=4 {
            for d in 0..=2 {
                for flags in flag_sets() {
                    for _ in 0..2 {
                        seed += 1;
                        let name = format!(
                            "n={n} p={p} d={d} refl={} sym={} seed={seed}",
                            flags.reflexive, flags.symmetric
                        );
                        out.push((name, gen_random(n, p, d, seed, flags)));
                    }
                }
            }
        }
    }
    out
}

fn off_diagonal_k1(d: &Arena) -> Vec<(usize, usize, usize)> {
    compute_max_augmented(d)
        .off_diagonal_edges()
        .into_iter()
        .map(|e| (e.t, e.x, e.y))
        .collect()
}

fn oracle_k1(d: &Arena) -> (Vec<(usize, usize, usize)>, bool) {
    let tab = copwin_configs(d, 1, Budget::default()).unwrap();
    let set = tab
        .off_diagonal_copwin()
        .into_iter()
        .map(|(t, c, r)| (t, c.elems()[0], r))
        .collect();
    (set, table_decides_copwin(&tab))
}

fn c1_equivalence(suite: &[(String, PeriodicGraph)]) -> Outcome {
    let mut copwin = 0;
    for (name, g) in suite {
        let d = Arena::build(g);
        let (want, oracle_verdict) = oracle_k1(&d);
        if off_diagonal_k1(&d) != want {
            return Err(format!("{name}: E(A*) differs from oracle copwin set"));
        }
        for opts in [FULL, EARLY] {
            if solve(&d, &opts).0.copwin != oracle_verdict {
                return Err(format!(
                    "{name}: verdict differs (early_stop={})",
                    opts.early_stop
                ));
            }
        }
        copwin += usize::from(oracle_verdict);
    }
    Ok(format!(
        "{} instances, {copwin} copwin, 0 mismatches",
        suite.len()
    ))
}

fn c2_equivalence_k2() -> Outcome {
    let b = Budget::default();
    let mut count = 0;
    let mut seed = 5000u64;
    for n in 2..=5 {
        for p in 1..=3 {
            for d in 0..=1 {
                for flags in [flag_sets()[0], flag_sets()[1]] {
                    for _ in 0..3 {
                        seed += 1;
                        let g = gen_random(n, p, d, seed, flags);
                        let a = Arena::build(&g);
                        let set = compute_max_k_augmented(&a, 2, b).unwrap();
                        let tab = copwin_configs(&a, 2, b).unwrap();
                        if set.off_diagonal() != tab.off_diagonal_copwin() {
                            return Err(format!(
                                "seed {seed}: hyperedges differ from 2-cop oracle"
                            ));
                        }
                        if decide_k_copwin(&a, 2, b).unwrap().copwin != table_decides_copwin(&tab) {
                            return Err(format!("seed {seed}: 2-cop verdict differs"));
                        }
                        if let Some(h) = find_k_augmentation(&a, &set) {
                            return Err(format!("seed {seed}: closure not maximal at {h:?}"));
                        }
                        if solve(&a, &FULL).0.copwin && !table_decides_copwin(&tab) {
                            return Err(format!("seed {seed}: copwin with 1 cop but not with 2"));
                        }
                        count += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{count} instances, 0 mismatches"))
}

fn verdicts(g: &PeriodicGraph, k: usize) -> (bool, bool) {
    let d = Arena::build(g);
    let solver = if k == 1 {
        solve(&d, &FULL).0.copwin
    } else {
        decide_k_copwin(&d, k, Budget::default()).unwrap().copwin
    };
    let oracle = table_decides_copwin(&copwin_configs(&d, k, Budget::default()).unwrap());
    (solver, oracle)
}

fn c3_families() -> Outcome {
    let mut cases: Vec<(String, PeriodicGraph, usize, bool)> = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for i in 0..20 {
        let n = rng.random_range(1..=7);
        let edges: Vec<(usize, usize)> = (1..n).map(|v| (v, rng.random_range(0..v))).collect();
        cases.push((
            format!("tree #{i} n={n}"),
            fixtures::reflexive_static(n, &edges),
            1,
            true,
        ));
    }
    cases.push(("RC3".into(), fixtures::rc(3), 1, true));
    for n in 4..=7 {
        cases.push((format!("RC{n} k=1"), fixtures::rc(n), 1, false));
        cases.push((format!("RC{n} k=2"), fixtures::rc(n), 2, true));
    }
    for n in 3..=7 {
        cases.push((format!("DICYC{n}"), fixtures::dicyc(n), 1, false));
    }
    cases.push(("SWAP2".into(), fixtures::swap2(), 1, true));
    cases.push(("n=1".into(), fixtures::single(), 1, true));
    for (name, g, k, want) in &cases {
        let (solver, oracle) = verdicts(g, *k);
        if solver != *want || oracle != *want {
            return Err(format!(
                "{name}: expected copwin={want}, solver {solver}, oracle {oracle}"
            ));
        }
    }
    Ok(format!("{} family instances match", cases.len()))
}

fn c4_iterations(suite: &[(String, PeriodicGraph)]) -> Outcome {
    for (name, g) in suite {
        let d = Arena::build(g);
        let bound = solve(&d, &FULL).0.stats.edges - d.m();
        for opts in [FULL, EARLY] {
            let it = solve(&d, &opts).0.stats.iterations;
            if it > bound {
                return Err(format!(
                    "{name}: {it} iterations > |E(A*)| - |E(D)| = {bound} (early_stop={})",
                    opts.early_stop
                ));
            }
        }
    }
    Ok(format!("{} instances within |E(A*)| - |E(D)|", suite.len()))
}

fn c5_counters() -> Outcome {
    let mut report = Vec::new();
    for p in [2, 4] {
        for n in [50, 100, 200] {
            let g = gen_random(n, p, 1, 9, GenFlags::default());
            let d = Arena::build(&g);
            let c = solve(&d, &FULL).0.stats.counters;
            let (n64, p64, m64) = (n as u64, p as u64, d.m() as u64);
            let scale = p64 * n64 * n64 + n64 * m64;
            let ratio = c.total() * 1000 / scale;
            report.push(format!("n={n},p={p}:{ratio}"));
            if c.total() * 1000 > C_MILLI * scale {
                return Err(format!(
                    "n={n} p={p}: op_total {} > {C_MILLI}/1000 * {scale}",
                    c.total()
                ));
            }
            if c.dif_updates > n64 * m64 || c.corner_scans > C_SCAN * n64 * m64 {
                return Err(format!(
                    "n={n} p={p}: dif_updates {} corner_scans {} vs n*m {}",
                    c.dif_updates,
                    c.corner_scans,
                    n64 * m64
                ));
            }
        }
    }
    Ok(format!(
        "op_ratio (milli) {} <= C = {C_MILLI}",
        report.join(" ")
    ))
}

fn strategy_from(d: &Arena, opts: &SolveOptions) -> Option<Strategy> {
    let (v, st): (Verdict, SolverState) = solve(d, opts);
    v.copwin
        .then(|| extract_strategy(d, &v, &st).expect("copwin verdict yields a strategy"))
}

fn c6_strategies(suite: &[(String, PeriodicGraph)]) -> Outcome {
    let mut games = 0;
    let mut longest = 0;
    for (name, g) in suite {
        let d = Arena::build(g);
        let tab = copwin_configs(&d, 1, Budget::default()).unwrap();
        for opts in [EARLY, FULL] {
            let Some(s) = strategy_from(&d, &opts) else {
                continue;
            };
            let limit = round_limit(&d);
            for r in 0..d.n() {
                let mut robber = AdversarialRobber {
                    table: &tab,
                    start: Some(r),
                };
                let tr = play(&d, &s, &mut robber, limit).map_err(|e| format!("{name}: {e}"))?;
                match tr.captured {
                    Some(t) => longest = longest.max(t),
                    None => {
                        return Err(format!(
                            "{name}: robber from {r} survives {limit} rounds (early_stop={})",
                            opts.early_stop
                        ))
                    }
                }
                games += 1;
            }
        }
    }
    Ok(format!(
        "{games} games captured, latest capture in round {longest}"
    ))
}

fn c7_structure(suite: &[(String, PeriodicGraph)]) -> Outcome {
    let mut extra: Vec<(String, PeriodicGraph)> = vec![
        ("RP3".into(), fixtures::rp3()),
        ("RC3".into(), fixtures::rc(3)),
        ("RK2".into(), fixtures::rk2()),
        ("PER2".into(), fixtures::per2()),
        ("PER-DISC".into(), fixtures::per_disc()),
    ];
    extra.extend(suite.iter().cloned());
    let mut property_ii = 0;
    let mut pure_missing = 0;
    for (name, g) in &extra {
        let d = Arena::build(g);
        let aug = compute_max_augmented(&d);
        let copwin = solve(&d, &FULL).0.copwin;
        let anchored = d.anchored_mask();
        let nodes = || (0..d.p()).flat_map(|t| (0..d.n()).map(move |v| TemporalNode::new(t, v)));
        let anchored_star = nodes().any(|x| anchored.contains(x.t * d.n() + x.v) && aug.is_star(x));
        let slice0_star = (0..d.n()).any(|v| aug.is_star(TemporalNode::new(0, v)));
        if anchored_star != slice0_star || anchored_star != copwin {
            return Err(format!("{name}: anchored star {anchored_star}, slice-0 star {slice0_star}, copwin {copwin}"));
        }
        if copwin {
            // capture by the robber stepping onto the cop lets the final
            // escape land on the cover itself, so the corner is taken with
            // the cover's own vertex included
            let base = AugmentedArena::from_base(d.clone());
            let lifted = (0..d.p()).any(|t| {
                (0..d.n()).any(|u| (0..d.n()).any(|v| u != v && base.is_shadow_corner(t, u, v)))
            });
            if !lifted {
                return Err(format!("{name}: copwin without a temporal corner"));
            }
            if d.temporal_corners().is_empty() {
                pure_missing += 1;
            }
        }
        if let Some(e) = aug.find_augmentation() {
            return Err(format!("{name}: A* not maximal, {e:?} addable"));
        }
        let class = classify(g);
        if class.sourceless && anchored.count() != d.p() * d.n() {
            return Err(format!("{name}: sourceless but not all nodes anchored"));
        }
        if class.reflexive && class.temporally_connected && copwin {
            if !nodes().all(|x| aug.is_star(x) && anchored.contains(x.t * d.n() + x.v)) {
                return Err(format!(
                    "{name}: reflexive connected copwin but some node is not an anchored star"
                ));
            }
            property_ii += 1;
        }
    }
    Ok(format!(
        "{} instances; reflexive connected copwin cases: {property_ii}; copwin without a pure inclusion corner: {pure_missing}",
        extra.len()
    ))
}

fn run_cli(args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_tempcops"))
        .args(args)
        .output()
        .expect("binary runs");
    assert!(out.status.success(), "tempcops {args:?} failed");
    out.stdout
}

fn c8_determinism(suite: &[(String, PeriodicGraph)]) -> Outcome {
    for (name, g) in suite.iter().step_by(4) {
        let d = Arena::build(g);
        for opts in [EARLY, FULL] {
            if solve(&d, &opts).0 != solve(&d, &opts).0 {
                return Err(format!("{name}: verdicts differ between runs"));
            }
            if strategy_from(&d, &opts).map(|s| s.to_text())
                != strategy_from(&d, &opts).map(|s| s.to_text())
            {
                return Err(format!("{name}: strategy files differ between runs"));
            }
        }
    }
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let ptg = dir.path().join("g.ptg");
    std::fs::write(&ptg, run_cli(&["gen", "6", "3", "1", "42"])).map_err(|e| e.to_string())?;
    if run_cli(&["gen", "6", "3", "1", "42"]) != std::fs::read(&ptg).unwrap() {
        return Err("gen output differs between runs".into());
    }
    let p = ptg.to_str().unwrap();
    if run_cli(&["check", p]) != run_cli(&["check", p]) {
        return Err("check output differs between runs".into());
    }
    let (s1, s2) = (dir.path().join("a.strat"), dir.path().join("b.strat"));
    run_cli(&["strategy", p, s1.to_str().unwrap()]);
    run_cli(&["strategy", p, s2.to_str().unwrap()]);
    if std::fs::read(&s1).ok() != std::fs::read(&s2).ok() {
        return Err("strategy files differ between runs".into());
    }
    // wall time is the only line allowed to change
    let bench = || {
        String::from_utf8(run_cli(&["bench", "--sizes", "50,100", "--seed", "9"]))
            .unwrap()
            .lines()
            .filter(|l| !l.starts_with("stat wall_us"))
            .map(str::to_owned)
            .collect::<Vec<_>>()
    };
    if bench() != bench() {
        return Err("bench output differs between runs".into());
    }
    Ok(format!(
        "{} instances and CLI gen/check/strategy/bench byte-identical",
        suite.len().div_ceil(4)
    ))
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn main() -> ExitCode {
    let suite = suite();
    let criteria: Vec<Criterion> = vec![
        (
            "1 oracle equivalence k=1",
            Box::new(|| c1_equivalence(&suite)),
        ),
        ("2 oracle equivalence k=2", Box::new(c2_equivalence_k2)),
        ("3 classical families", Box::new(c3_families)),
        ("4 iteration bound", Box::new(|| c4_iterations(&suite))),
        ("5 complexity counters", Box::new(c5_counters)),
        ("6 strategy soundness", Box::new(|| c6_strategies(&suite))),
        (
            "7 structural equivalences",
            Box::new(|| c7_structure(&suite)),
        ),
        ("8 determinism", Box::new(|| c8_determinism(&suite))),
    ];
    let mut failed = 0;
    for (name, run) in &criteria {
        let clock = Instant::now();
        let res = run();
        let secs = clock.elapsed().as_secs_f64();
        match res {
            Ok(detail) => println!("PASS criterion {name}: {detail} ({secs:.1}s)"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail} ({secs:.1}s)");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
