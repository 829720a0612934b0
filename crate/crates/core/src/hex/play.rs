//! Bots, seeded playouts and the no-tie sweep.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::board::Board;
use super::game::{batch_winner, Game, Move, Status};
use crate::error::HexError;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Policy {
    UniformRandom,
    /// Claims a cell that most shortens the player's cheapest connection.
    ConnectivityGreedy,
}

impl Policy {
    pub fn name(self) -> &'static str {
        match self {
            Policy::UniformRandom => "uniform-random",
            Policy::ConnectivityGreedy => "connectivity-greedy",
        }
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Policy {
    type Err = HexError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "uniform-random" | "random" => Ok(Policy::UniformRandom),
            "connectivity-greedy" | "greedy" => Ok(Policy::ConnectivityGreedy),
            _ => Err(HexError::InvalidBoard(format!("unknown policy {s}"))),
        }
    }
}

/// Number of unclaimed cells on the cheapest path of the player's cells
/// and free cells joining the anchor facet to another facet of the
/// player's color; `None` when the opponents have cut every path.
pub fn connection_cost<S: Scalar>(board: &Board<S>, owner: &[Option<usize>], player: usize) -> Option<usize> {
    let target = &board.targets()[player];
    let cost = |c: usize| match owner[c] {
        Some(p) if p == player => Some(0),
        None => Some(1),
        Some(_) => None,
    };
    let mut dist = vec![usize::MAX; board.num_cells()];
    let mut deque = VecDeque::new();
    for c in 0..board.num_cells() {
        if board.cell(c).facets.contains(&target.anchor) {
            if let Some(w) = cost(c) {
                dist[c] = w;
                if w == 0 {
                    deque.push_front(c);
                } else {
                    deque.push_back(c);
                }
            }
        }
    }
    // 0-1 BFS; entries may repeat, stale ones are skipped
    let mut done = vec![false; board.num_cells()];
    while let Some(c) = deque.pop_front() {
        if done[c] {
            continue;
        }
        done[c] = true;
        for &d in &board.cell(c).neighbors {
            let Some(w) = cost(d) else { continue };
            if dist[c] + w < dist[d] {
                dist[d] = dist[c] + w;
                if w == 0 {
                    deque.push_front(d);
                } else {
                    deque.push_back(d);
                }
            }
        }
    }
    (0..board.num_cells())
        .filter(|&c| dist[c] != usize::MAX && target.others.iter().any(|f| board.cell(c).facets.contains(f)))
        .map(|c| dist[c])
        .min()
}

/// The move `policy` makes for the player to move.
pub fn bot_move<S: Scalar>(game: &Game<S>, policy: Policy, rng: &mut ChaCha8Rng) -> Result<Move, HexError> {
    let legal = game.legal_moves();
    if game.is_over() {
        return Err(HexError::GameOver);
    }
    if legal.is_empty() {
        return Err(HexError::NoLegalMoves);
    }
    let player = game.turn();
    let cell = match policy {
        Policy::UniformRandom => legal[rng.gen_range(0..legal.len())],
        Policy::ConnectivityGreedy => {
            let board = game.board();
            let mut owner = game.owners().to_vec();
            let mut scored: Vec<(usize, usize)> = legal
                .iter()
                .map(|&c| {
                    owner[c] = Some(player);
                    let own = connection_cost(board, &owner, player).unwrap_or(usize::MAX / 2);
                    owner[c] = None;
                    (own, c)
                })
                .collect();
            let best = scored.iter().map(|s| s.0).min().expect("legal moves exist");
            scored.retain(|s| s.0 == best);
            scored[rng.gen_range(0..scored.len())].1
        }
    };
    Ok(Move { player, cell })
}

/// Plays to the end with one policy per player.
pub fn playout<S: Scalar>(
    board: Arc<Board<S>>,
    policies: &[Policy],
    rng: &mut ChaCha8Rng,
) -> Result<Game<S>, HexError> {
    if policies.len() != board.players() {
        return Err(HexError::InvalidBoard(format!("{} policies for {} players", policies.len(), board.players())));
    }
    let mut game = Game::new(board);
    while !game.is_over() {
        let mv = bot_move(&game, policies[game.turn()], rng)?;
        game.apply_move(mv)?;
    }
    Ok(game)
}

/// Uniform-random playout, deterministic per seed.
pub fn random_playout<S: Scalar>(board: Arc<Board<S>>, seed: u64) -> Result<Game<S>, HexError> {
    let policies = vec![Policy::UniformRandom; board.players()];
    playout(board, &policies, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Generator for trial `stream` of a seeded run.
pub fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tie {
    pub trial: usize,
    pub moves: Vec<Move>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoTieReport {
    pub trials: usize,
    pub seed: u64,
    pub wins: BTreeMap<usize, usize>,
    pub ties: Vec<Tie>,
    /// Trials where the incremental and from-scratch winners disagreed.
    pub mismatches: Vec<usize>,
    pub max_moves: usize,
}

impl NoTieReport {
    pub fn is_clean(&self) -> bool {
        self.ties.is_empty() && self.mismatches.is_empty()
    }
}

/// Random complete playouts; trial `t` uses stream `t` of the seed. With
/// `instrument`, the incremental winner is compared against a from-scratch
/// scan after every move.
pub fn no_tie_check<S: Scalar>(
    board: Arc<Board<S>>,
    trials: usize,
    seed: u64,
    instrument: bool,
) -> Result<NoTieReport, HexError> {
    let results: Vec<(Game<S>, bool)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t as u64);
            let mut game = Game::new(board.clone());
            let mut agree = true;
            while !game.is_over() {
                let mv = bot_move(&game, Policy::UniformRandom, &mut rng)?;
                game.apply_move(mv)?;
                if instrument {
                    agree &= batch_winner(&board, game.owners()).as_ref() == game.winner();
                }
            }
            Ok((game, agree))
        })
        .collect::<Result<_, HexError>>()?;
    let mut report =
        NoTieReport { trials, seed, wins: BTreeMap::new(), ties: Vec::new(), mismatches: Vec::new(), max_moves: 0 };
    for (t, (game, agree)) in results.into_iter().enumerate() {
        report.max_moves = report.max_moves.max(game.history().len());
        match game.status() {
            Status::Won(w) => *report.wins.entry(w.player).or_default() += 1,
            _ => report.ties.push(Tie { trial: t, moves: game.history().to_vec() }),
        }
        if !agree {
            report.mismatches.push(t);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hex::board::random_sites;
    use crate::polytope::builders;

    fn hexagon(seed: u64) -> Arc<Board<f64>> {
        let b = builders::polygon::<f64>(6);
        Arc::new(Board::new(&b, b.coloring.clone().unwrap(), 0, random_sites(&b.realization, 20, seed)).unwrap())
    }

    #[test]
    fn playouts_are_reproducible() {
        let a = random_playout(hexagon(1), 9).unwrap();
        let b = random_playout(hexagon(1), 9).unwrap();
        assert_eq!(a.history(), b.history());
        assert!(a.winner().is_some());
        assert!(a.history().len() <= 20);
    }

    #[test]
    fn zero_trials_is_an_empty_report() {
        let r = no_tie_check(hexagon(2), 0, 1, true).unwrap();
        assert_eq!(r.trials, 0);
        assert!(r.wins.is_empty() && r.is_clean());
    }

    #[test]
    fn cost_drops_as_cells_are_claimed() {
        let board = hexagon(3);
        let mut owner = vec![None; board.num_cells()];
        let before = connection_cost(&board, &owner, 0).unwrap();
        assert!(before >= 1);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let game = Game::new(board.clone());
        let mv = bot_move(&game, Policy::ConnectivityGreedy, &mut rng).unwrap();
        owner[mv.cell] = Some(0);
        assert_eq!(connection_cost(&board, &owner, 0).unwrap(), before - 1);
    }
}
