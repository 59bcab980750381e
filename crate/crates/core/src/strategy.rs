//! Executable cop strategies and game simulation.
//!
//! A strategy has two phases. The cop starts on `start` and walks `journey`
//! to a star of the augmented arena; from there it follows the table `rho`,
//! which maps the configuration `(t mod p, cop, robber)` to the cop's next
//! vertex. Every `rho` entry comes from a shadow edge and points at a cover
//! discovered strictly earlier, so pursuit never revisits a configuration.
//!
//! Text format:
//!
//! ```text
//! strategy 1
//! start <v>
//! journey <v0> .. <vT>
//! rho <t> <x> <y> <z>      one line per entry, sorted by (t, x, y)
//! ```

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::arena::Arena;
use crate::oracle::{adversarial_move, ConfigTable, NEVER};
use crate::solver::{SolverState, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrategyError {
    #[error("instance is robberwin; no cop strategy exists")]
    Robberwin,
    #[error("no rho entry for configuration ({t},{x},{y})")]
    MissingRho { t: usize, x: usize, y: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("robber input ended")]
    RobberGaveUp,
    #[error("strategy moves the cop along a non-edge ({t},{from},{to})")]
    IllegalCopMove { t: usize, from: usize, to: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Strategy {
    pub start: usize,
    pub journey: Vec<usize>,
    pub rho: BTreeMap<(usize, usize, usize), usize>,
}

/// Builds the strategy certified by a copwin `verdict`, keeping only the
/// `rho` entries reachable in pursuit from the star.
pub fn extract_strategy(
    d: &Arena,
    verdict: &Verdict,
    state: &SolverState,
) -> Result<Strategy, StrategyError> {
    let w = verdict.witness.as_ref().ok_or(StrategyError::Robberwin)?;
    let n = d.n();
    let mut rho = BTreeMap::new();
    let mut queue: VecDeque<(usize, usize, usize)> = (0..n)
        .filter(|&y| y != w.star.v)
        .map(|y| (w.star.t, w.star.v, y))
        .collect();
    while let Some((t, x, y)) = queue.pop_front() {
        if rho.contains_key(&(t, x, y)) {
            continue;
        }
        let z = state
            .rho(t, x, y)
            .ok_or(StrategyError::MissingRho { t, x, y })?;
        debug_assert!(d.has_edge(t, x, z), "rho leaves the arena at ({t},{x},{y})");
        rho.insert((t, x, y), z);
        if z == y {
            continue;
        }
        let next = d.next(t);
        for &y2 in d.out_list(t, y) {
            if y2 != z && !rho.contains_key(&(next, z, y2)) {
                queue.push_back((next, z, y2));
            }
        }
    }
    Ok(Strategy {
        start: w.anchor,
        journey: w.journey.clone(),
        rho,
    })
}

impl Strategy {
    pub fn to_text(&self) -> String {
        let mut s = String::from("strategy 1\n");
        writeln!(s, "start {}", self.start).unwrap();
        s.push_str("journey");
        for v in &self.journey {
            write!(s, " {v}").unwrap();
        }
        s.push('\n');
        for (&(t, x, y), &z) in &self.rho {
            writeln!(s, "rho {t} {x} {y} {z}").unwrap();
        }
        s
    }

    pub fn parse(text: &str) -> Result<Strategy, StrategyError> {
        let mut start = None;
        let mut journey = None;
        let mut rho = BTreeMap::new();
        let mut header = false;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let err = |message: String| StrategyError::Parse { line, message };
            let toks: Vec<&str> = raw.split_whitespace().collect();
            let Some((&kw, rest)) = toks.split_first() else {
                continue;
            };
            let nums: Vec<usize> = rest
                .iter()
                .map(|a| a.parse().map_err(|_| err(format!("invalid integer `{a}`"))))
                .collect::<Result<_, _>>()?;
            match (kw, header) {
                ("strategy", false) if nums == [1] => header = true,
                (_, false) => return Err(err("expected `strategy 1` header".into())),
                ("start", true) if nums.len() == 1 && start.is_none() => start = Some(nums[0]),
                ("journey", true) if !nums.is_empty() && journey.is_none() => journey = Some(nums),
                ("rho", true) if nums.len() == 4 => {
                    if rho.insert((nums[0], nums[1], nums[2]), nums[3]).is_some() {
                        return Err(err("duplicate rho entry".into()));
                    }
                }
                _ => return Err(err(format!("unexpected `{raw}`"))),
            }
        }
        let start = start.ok_or(StrategyError::Parse {
            line: 0,
            message: "missing `start`".into(),
        })?;
        let journey: Vec<usize> = journey.ok_or(StrategyError::Parse {
            line: 0,
            message: "missing `journey`".into(),
        })?;
        if journey[0] != start {
            return Err(StrategyError::Parse {
                line: 0,
                message: "journey does not begin at start".into(),
            });
        }
        Ok(Strategy {
            start,
            journey,
            rho,
        })
    }

    /// The cop's move in round `t` from `cop` against a robber on `robber`.
    pub fn cop_move(
        &self,
        d: &Arena,
        t: usize,
        cop: usize,
        robber: usize,
    ) -> Result<usize, StrategyError> {
        let to = if t + 1 < self.journey.len() {
            self.journey[t + 1]
        } else {
            let key = (t % d.p(), cop, robber);
            *self.rho.get(&key).ok_or(StrategyError::MissingRho {
                t: key.0,
                x: cop,
                y: robber,
            })?
        };
        if !d.has_edge(t % d.p(), cop, to) {
            return Err(StrategyError::IllegalCopMove { t, from: cop, to });
        }
        Ok(to)
    }
}

/// Supplies the robber's decisions during [`play`].
pub trait RobberSource {
    /// Initial vertex, knowing where the cop starts. `None` ends the game.
    fn start(&mut self, d: &Arena, cop: usize) -> Option<usize>;
    /// Reply in round `t` after the cop moved onto `cop`.
    fn reply(&mut self, d: &Arena, t: usize, cop: usize, robber: usize) -> Option<usize>;
    /// Called when the last reply was not a legal move; `reply` is asked again.
    fn rejected(&mut self, _t: usize, _robber: usize, _attempt: usize) {}
}

/// One round: the cop moves, then (unless already captured) the robber.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Round {
    pub t: usize,
    pub cop_from: usize,
    pub cop_to: usize,
    pub robber_from: usize,
    pub robber_to: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript {
    pub cop_start: usize,
    pub robber_start: usize,
    pub rounds: Vec<Round>,
    /// Round in which the two met, counted from 0.
    pub captured: Option<usize>,
}

/// Default round limit `p·n²`.
pub fn round_limit(d: &Arena) -> usize {
    d.p() * d.n() * d.n()
}

/// Plays `s` against `robber` for at most `limit` rounds.
pub fn play(
    d: &Arena,
    s: &Strategy,
    robber: &mut dyn RobberSource,
    limit: usize,
) -> Result<Transcript, StrategyError> {
    let mut cop = s.start;
    let mut r = robber.start(d, cop).ok_or(StrategyError::RobberGaveUp)?;
    let mut tr = Transcript {
        cop_start: cop,
        robber_start: r,
        rounds: Vec::new(),
        captured: None,
    };
    if r == cop {
        tr.captured = Some(0);
        return Ok(tr);
    }
    for t in 0..limit {
        let to = s.cop_move(d, t, cop, r)?;
        let mut round = Round {
            t,
            cop_from: cop,
            cop_to: to,
            robber_from: r,
            robber_to: None,
        };
        cop = to;
        if cop == r {
            tr.rounds.push(round);
            tr.captured = Some(t);
            return Ok(tr);
        }
        let mut attempt = 0;
        let next = loop {
            let v = robber
                .reply(d, t, cop, r)
                .ok_or(StrategyError::RobberGaveUp)?;
            if v < d.n() && d.has_edge(t % d.p(), r, v) {
                break v;
            }
            attempt += 1;
            robber.rejected(t, v, attempt);
        };
        round.robber_to = Some(next);
        tr.rounds.push(round);
        r = next;
        if r == cop {
            tr.captured = Some(t);
            return Ok(tr);
        }
    }
    Ok(tr)
}

/// A robber that plays the oracle's adversarial move.
pub struct AdversarialRobber<'a> {
    pub table: &'a ConfigTable,
    /// Forced starting vertex; otherwise the best start against the cop.
    pub start: Option<usize>,
}

impl RobberSource for AdversarialRobber<'_> {
    fn start(&mut self, d: &Arena, cop: usize) -> Option<usize> {
        if let Some(v) = self.start {
            return Some(v);
        }
        let mut best = None;
        for r in (0..d.n()).filter(|&r| r != cop) {
            let key = if self.table.is_copwin(0, &[cop], r) {
                self.table.rank(0, &[cop], r)
            } else {
                NEVER
            };
            if best.is_none_or(|(_, k)| key > k) {
                best = Some((r, key));
            }
        }
        Some(best.map_or(cop, |(r, _)| r))
    }

    fn reply(&mut self, d: &Arena, t: usize, cop: usize, robber: usize) -> Option<usize> {
        Some(adversarial_move(d, self.table, t, &[cop], robber))
    }
}

/// A robber that picks uniformly random legal moves.
pub struct RandomRobber {
    rng: ChaCha8Rng,
    start: Option<usize>,
}

impl RandomRobber {
    pub fn new(seed: u64, start: Option<usize>) -> Self {
        RandomRobber {
            rng: ChaCha8Rng::seed_from_u64(seed),
            start,
        }
    }
}

impl RobberSource for RandomRobber {
    fn start(&mut self, d: &Arena, cop: usize) -> Option<usize> {
        if let Some(v) = self.start {
            return Some(v);
        }
        if d.n() == 1 {
            return Some(0);
        }
        let r = self.rng.random_range(0..d.n() - 1);
        Some(if r >= cop { r + 1 } else { r })
    }

    fn reply(&mut self, d: &Arena, t: usize, _cop: usize, robber: usize) -> Option<usize> {
        let moves = d.out_list(t % d.p(), robber);
        Some(moves[self.rng.random_range(0..moves.len())])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::oracle::{copwin_configs, Budget};
    use crate::solver::{solve, SolveOptions};

    fn strategy(g: crate::graph::PeriodicGraph) -> (Arena, Strategy) {
        let d = Arena::build(&g);
        let (v, st) = solve(
            &d,
            &SolveOptions {
                early_stop: true,
                reflexive_connected: false,
            },
        );
        let s = extract_strategy(&d, &v, &st).unwrap();
        (d, s)
    }

    #[test]
    fn rk2_strategy() {
        let (d, s) = strategy(fixtures::rk2());
        assert_eq!(s.start, 0);
        assert_eq!(s.journey, vec![0]);
        assert_eq!(s.rho.get(&(0, 0, 1)), Some(&1));
        let tab = copwin_configs(&d, 1, Budget::default()).unwrap();
        let tr = play(
            &d,
            &s,
            &mut AdversarialRobber {
                table: &tab,
                start: Some(1),
            },
            round_limit(&d),
        )
        .unwrap();
        assert_eq!(tr.captured, Some(0));
    }

    #[test]
    fn swap2_strategy() {
        let (_, s) = strategy(fixtures::swap2());
        assert_eq!((s.start, s.journey.clone()), (0, vec![0]));
        assert_eq!(s.to_text(), "strategy 1\nstart 0\njourney 0\nrho 0 0 1 1\n");
    }

    #[test]
    fn rp3_strategy() {
        let (d, s) = strategy(fixtures::rp3());
        assert_eq!((s.start, s.journey.clone()), (1, vec![1]));
        assert_eq!(s.rho.get(&(0, 1, 0)), Some(&0));
        assert_eq!(s.rho.get(&(0, 1, 2)), Some(&2));
        let tab = copwin_configs(&d, 1, Budget::default()).unwrap();
        for r in 0..3 {
            let tr = play(
                &d,
                &s,
                &mut AdversarialRobber {
                    table: &tab,
                    start: Some(r),
                },
                round_limit(&d),
            )
            .unwrap();
            assert!(tr.captured.is_some_and(|c| c < 9));
        }
    }

    #[test]
    fn robberwin_has_no_strategy() {
        let d = Arena::build(&fixtures::rc(4));
        let (v, st) = solve(&d, &SolveOptions::default());
        assert_eq!(extract_strategy(&d, &v, &st), Err(StrategyError::Robberwin));
    }

    #[test]
    fn text_round_trip() {
        for g in [
            fixtures::rp3(),
            fixtures::rc(3),
            fixtures::per2(),
            fixtures::single(),
        ] {
            let (_, s) = strategy(g);
            assert_eq!(Strategy::parse(&s.to_text()).unwrap(), s);
        }
        assert!(matches!(
            Strategy::parse("strategy 2\n"),
            Err(StrategyError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            Strategy::parse("strategy 1\nstart 0\njourney 1\n"),
            Err(StrategyError::Parse { .. })
        ));
    }

    #[test]
    fn base_edges_map_to_their_target() {
        let (d, s) = strategy(fixtures::rc(3));
        for (&(t, x, y), &z) in &s.rho {
            assert!(d.has_edge(t, x, z));
            if d.has_edge(t, x, y) {
                assert_eq!(z, y);
            }
        }
    }

    struct Scripted(Vec<usize>, usize);

    impl RobberSource for Scripted {
        fn start(&mut self, _: &Arena, _: usize) -> Option<usize> {
            self.0.first().copied()
        }
        fn reply(&mut self, _: &Arena, _: usize, _: usize, _: usize) -> Option<usize> {
            self.1 += 1;
            self.0.get(self.1).copied()
        }
    }

    #[test]
    fn illegal_replies_are_asked_again() {
        let d = Arena::build(&fixtures::rc(5));
        // a hand-written cop that sits still
        let s = Strategy {
            start: 0,
            journey: vec![0; 4],
            rho: BTreeMap::new(),
        };
        let tr = play(&d, &s, &mut Scripted(vec![2, 4, 3, 3, 3], 0), 3).unwrap();
        // reply 4 from 2 is illegal on the cycle, 3 is accepted
        assert_eq!(tr.rounds[0].robber_to, Some(3));
        assert_eq!(tr.captured, None);
    }

    #[test]
    fn random_robber_is_seeded() {
        let (d, s) = strategy(fixtures::rc(3));
        let a = play(&d, &s, &mut RandomRobber::new(5, None), 9).unwrap();
        let b = play(&d, &s, &mut RandomRobber::new(5, None), 9).unwrap();
        assert_eq!(a, b);
    }
}
