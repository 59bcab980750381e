use std::fmt;
use std::io::{self, Write};
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use tempcops::kcop::{compute_max_k_augmented, decide_k_copwin};
use tempcops::oracle::{copwin_configs, table_decides_copwin};
use tempcops::strategy::{
    extract_strategy, play as play_game, round_limit, AdversarialRobber, RandomRobber,
    RobberSource, StrategyError,
};
use tempcops::{
    classify, compute_max_augmented, gen_random, parse_ptg, solve, Arena, Budget, BudgetExceeded,
    GenFlags, PeriodicGraph, SolveOptions,
};

use crate::human::HumanRobber;
use crate::{GenFlag, RobberKind};

pub enum CmdError {
    Input(String),
    Io(io::Error),
    Robberwin,
    Play(StrategyError),
    Budget(BudgetExceeded),
    Mismatch,
}

impl CmdError {
    pub fn code(&self) -> u8 {
        match self {
            CmdError::Budget(_) | CmdError::Mismatch => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for CmdError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CmdError::Input(m) => write!(f, "{m}"),
            CmdError::Io(e) => write!(f, "{e}"),
            CmdError::Robberwin => write!(
                f,
                "instance is robberwin; the cop has no winning strategy to play"
            ),
            CmdError::Play(e) => write!(f, "{e}"),
            CmdError::Budget(e) => write!(f, "{e}"),
            CmdError::Mismatch => write!(f, "solver and oracle disagree"),
        }
    }
}

impl From<io::Error> for CmdError {
    fn from(e: io::Error) -> Self {
        CmdError::Io(e)
    }
}

impl From<BudgetExceeded> for CmdError {
    fn from(e: BudgetExceeded) -> Self {
        CmdError::Budget(e)
    }
}

type Res = Result<(), CmdError>;

/// Table-entry cap, from `PP_BUDGET` when set.
fn budget() -> Result<Budget, CmdError> {
    match std::env::var("PP_BUDGET") {
        Ok(s) => s.trim().parse().map(Budget::new).map_err(|_| {
            CmdError::Input(format!(
                "PP_BUDGET must be a non-negative integer, got `{s}`"
            ))
        }),
        Err(_) => Ok(Budget::default()),
    }
}

fn load(path: &Path) -> Result<PeriodicGraph, CmdError> {
    let bytes =
        std::fs::read(path).map_err(|e| CmdError::Input(format!("{}: {e}", path.display())))?;
    parse_ptg(&bytes).map_err(|e| CmdError::Input(format!("{}: {e}", path.display())))
}

fn need_k(k: usize) -> Result<(), CmdError> {
    if k == 0 {
        return Err(CmdError::Input("--k must be at least 1".into()));
    }
    Ok(())
}

fn line(out: &mut dyn Write, key: &str, vals: &[usize]) -> io::Result<()> {
    write!(out, "{key}")?;
    for v in vals {
        write!(out, " {v}")?;
    }
    writeln!(out)
}

fn stat(out: &mut dyn Write, name: &str, v: impl fmt::Display) -> io::Result<()> {
    writeln!(out, "stat {name} {v}")
}

pub fn check(out: &mut dyn Write, file: &Path, k: usize, early_stop: bool) -> Res {
    need_k(k)?;
    let g = load(file)?;
    let d = Arena::build(&g);
    if k == 1 {
        let (v, _) = solve(
            &d,
            &SolveOptions {
                early_stop,
                reflexive_connected: false,
            },
        );
        writeln!(
            out,
            "verdict {}",
            if v.copwin { "copwin" } else { "robberwin" }
        )?;
        if let Some(w) = &v.witness {
            line(out, "star", &[w.star.t, w.star.v])?;
            line(out, "anchor", &[w.anchor])?;
            line(out, "journey", &w.journey)?;
        }
        stat(out, "iterations", v.stats.iterations)?;
        stat(out, "edges", v.stats.edges)?;
        stat(out, "base_edges", v.stats.base_edges)?;
        for (name, val) in v.stats.counters.named() {
            stat(out, name, val)?;
        }
    } else {
        let v = decide_k_copwin(&d, k, budget()?)?;
        writeln!(
            out,
            "verdict {}",
            if v.copwin { "copwin" } else { "robberwin" }
        )?;
        if let Some(w) = &v.witness {
            let mut star = vec![w.t];
            star.extend_from_slice(w.star.elems());
            line(out, "star", &star)?;
            line(out, "anchor", w.anchor.elems())?;
            for j in &w.journeys {
                line(out, "journey", j)?;
            }
        }
        stat(out, "edges", v.edges)?;
        stat(out, "added", v.added)?;
    }
    Ok(())
}

/// Compares the solver (or the k-cop closure) with the oracle on one
/// instance; returns a description of the first disagreement.
fn compare(
    g: &PeriodicGraph,
    k: usize,
    budget: Budget,
) -> Result<Option<Vec<String>>, BudgetExceeded> {
    let d = Arena::build(g);
    let tab = copwin_configs(&d, k, budget)?;
    let want: Vec<(usize, Vec<usize>, usize)> = tab
        .off_diagonal_copwin()
        .into_iter()
        .map(|(t, c, r)| (t, c.elems().to_vec(), r))
        .collect();
    let (got, verdicts): (Vec<_>, Vec<bool>) = if k == 1 {
        let aug = compute_max_augmented(&d);
        let got = aug
            .off_diagonal_edges()
            .into_iter()
            .map(|e| (e.t, vec![e.x], e.y))
            .collect();
        let early = solve(
            &d,
            &SolveOptions {
                early_stop: true,
                reflexive_connected: false,
            },
        )
        .0
        .copwin;
        let full = solve(&d, &SolveOptions::default()).0.copwin;
        (got, vec![full, early])
    } else {
        let set = compute_max_k_augmented(&d, k, budget)?;
        let got = set
            .off_diagonal()
            .into_iter()
            .map(|(t, c, r)| (t, c.elems().to_vec(), r))
            .collect();
        (got, vec![decide_k_copwin(&d, k, budget)?.copwin])
    };
    let oracle_verdict = table_decides_copwin(&tab);
    let fmt_cfg = |(t, c, r): &(usize, Vec<usize>, usize)| {
        let cops: Vec<String> = c.iter().map(usize::to_string).collect();
        format!("{t} {} {r}", cops.join(" "))
    };
    if let Some(i) = (0..got.len().max(want.len())).find(|&i| got.get(i) != want.get(i)) {
        // the smaller of the two entries at the first divergence is the one
        // the other side lacks
        let cfg = match (got.get(i), want.get(i)) {
            (Some(a), Some(b)) => a.min(b).clone(),
            (Some(a), None) | (None, Some(a)) => a.clone(),
            (None, None) => unreachable!(),
        };
        let in_got = got.binary_search(&cfg).is_ok();
        let in_want = want.binary_search(&cfg).is_ok();
        return Ok(Some(vec![format!(
            "edge {} solver {in_got} oracle {in_want}",
            fmt_cfg(&cfg)
        )]));
    }
    if let Some(&v) = verdicts.iter().find(|&&v| v != oracle_verdict) {
        return Ok(Some(vec![format!(
            "verdict solver {v} oracle {oracle_verdict}"
        )]));
    }
    Ok(None)
}

pub fn verify(
    out: &mut dyn Write,
    file: Option<&Path>,
    random: Option<&[u64]>,
    k: usize,
    reflexive: bool,
    symmetric: bool,
) -> Res {
    need_k(k)?;
    let budget = budget()?;
    let instances: Vec<(String, PeriodicGraph)> = match (file, random) {
        (Some(f), None) => vec![(f.display().to_string(), load(f)?)],
        (None, Some(&[n, p, d, seed, count])) => {
            if n == 0 || p == 0 {
                return Err(CmdError::Input("--random needs n >= 1 and p >= 1".into()));
            }
            let flags = GenFlags {
                reflexive,
                symmetric,
            };
            (0..count)
                .into_par_iter()
                .map(|i| {
                    let s = seed.wrapping_add(i);
                    (
                        format!("seed {s}"),
                        gen_random(n as usize, p as usize, d as usize, s, flags),
                    )
                })
                .collect()
        }
        _ => {
            return Err(CmdError::Input(
                "verify needs a file or --random N P D SEED COUNT".into(),
            ))
        }
    };
    let results: Vec<_> = instances
        .par_iter()
        .map(|(_, g)| compare(g, k, budget))
        .collect();
    for (i, r) in results.into_iter().enumerate() {
        if let Some(lines) = r? {
            let (name, g) = &instances[i];
            writeln!(out, "mismatch instance {i} {name}")?;
            for l in lines {
                writeln!(out, "{l}")?;
            }
            out.write_all(g.to_ptg().as_bytes())?;
            return Err(CmdError::Mismatch);
        }
    }
    writeln!(out, "verify ok")?;
    stat(out, "instances", instances.len())?;
    Ok(())
}

pub fn strategy(out: &mut dyn Write, file: &Path, path: &Path) -> Res {
    let g = load(file)?;
    let d = Arena::build(&g);
    let (v, st) = solve(
        &d,
        &SolveOptions {
            early_stop: true,
            reflexive_connected: false,
        },
    );
    if !v.copwin {
        writeln!(out, "error robberwin")?;
        return Ok(());
    }
    let s = extract_strategy(&d, &v, &st).map_err(CmdError::Play)?;
    std::fs::write(path, s.to_text())
        .map_err(|e| CmdError::Input(format!("{}: {e}", path.display())))?;
    writeln!(out, "strategy written {}", path.display())?;
    Ok(())
}

pub fn play(
    out: &mut dyn Write,
    file: &Path,
    kind: RobberKind,
    seed: u64,
    start: Option<usize>,
    limit: Option<usize>,
) -> Res {
    let g = load(file)?;
    let d = Arena::build(&g);
    if start.is_some_and(|s| s >= d.n()) {
        return Err(CmdError::Input(format!(
            "--start must be below n = {}",
            d.n()
        )));
    }
    let (v, st) = solve(
        &d,
        &SolveOptions {
            early_stop: true,
            reflexive_connected: false,
        },
    );
    if !v.copwin {
        return Err(CmdError::Robberwin);
    }
    let s = extract_strategy(&d, &v, &st).map_err(CmdError::Play)?;
    let limit = limit.unwrap_or_else(|| round_limit(&d));
    let table;
    let stdin = io::stdin();
    let mut robber: Box<dyn RobberSource> = match kind {
        RobberKind::Adversarial => {
            table = copwin_configs(&d, 1, budget()?)?;
            Box::new(AdversarialRobber {
                table: &table,
                start,
            })
        }
        RobberKind::Random => Box::new(RandomRobber::new(seed, start)),
        RobberKind::Human => Box::new(HumanRobber::new(stdin.lock(), io::stderr(), start)),
    };
    let tr = play_game(&d, &s, robber.as_mut(), limit).map_err(CmdError::Play)?;
    writeln!(out, "start cop {} robber {}", tr.cop_start, tr.robber_start)?;
    for r in &tr.rounds {
        match r.robber_to {
            Some(to) => writeln!(
                out,
                "round {} cop {} {} robber {} {}",
                r.t, r.cop_from, r.cop_to, r.robber_from, to
            )?,
            None => writeln!(
                out,
                "round {} cop {} {} robber {} -",
                r.t, r.cop_from, r.cop_to, r.robber_from
            )?,
        }
    }
    match tr.captured {
        Some(t) => writeln!(out, "captured round {t}")?,
        None => writeln!(out, "survived {limit} rounds")?,
    }
    Ok(())
}

pub fn gen(out: &mut dyn Write, n: usize, p: usize, d: usize, seed: u64, flags: &[GenFlag]) -> Res {
    if n == 0 || p == 0 {
        return Err(CmdError::Input("n and p must be at least 1".into()));
    }
    let flags = GenFlags {
        reflexive: flags.contains(&GenFlag::Reflexive),
        symmetric: flags.contains(&GenFlag::Symmetric),
    };
    out.write_all(gen_random(n, p, d, seed, flags).to_ptg().as_bytes())?;
    Ok(())
}

/// Solves one random instance per size. Reflexive temporally connected
/// instances get the single-check final star test.
pub fn bench(
    out: &mut dyn Write,
    sizes: &[usize],
    seed: u64,
    period: usize,
    degree: usize,
    flags: GenFlags,
) -> Res {
    if period == 0 || sizes.contains(&0) {
        return Err(CmdError::Input(
            "sizes and period must be at least 1".into(),
        ));
    }
    for &n in sizes {
        let g = gen_random(n, period, degree, seed, flags);
        let class = classify(&g);
        let d = Arena::build(&g);
        let opts = SolveOptions {
            early_stop: false,
            reflexive_connected: class.reflexive && class.temporally_connected,
        };
        let clock = Instant::now();
        let (v, _) = solve(&d, &opts);
        let wall = clock.elapsed().as_micros();
        let (p, m) = (d.p() as u64, d.m() as u64);
        let scale = p * (n * n) as u64 + n as u64 * m;
        writeln!(out, "bench n {n} p {p} m {m}")?;
        stat(out, "wall_us", wall)?;
        stat(
            out,
            "reflexive_connected",
            u8::from(opts.reflexive_connected),
        )?;
        stat(out, "iterations", v.stats.iterations)?;
        stat(out, "edges", v.stats.edges)?;
        for (name, val) in v.stats.counters.named() {
            stat(out, name, val)?;
        }
        stat(out, "op_ratio", v.stats.counters.total() * 1000 / scale)?;
    }
    Ok(())
}
