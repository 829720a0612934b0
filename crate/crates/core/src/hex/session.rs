//! Game sessions: versioned snapshots, seats and bot turns.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, RwLock};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::board::{random_sites, Board, Outline, Target};
use super::game::{Game, Move, Status, Win};
use super::play::{bot_move, Policy};
use crate::cover::PolytopeSource;
use crate::error::HexError;
use crate::polytope::{find_coloring, Coloring};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Seat {
    Human,
    Bot(Policy),
}

impl fmt::Display for Seat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Seat::Human => f.write_str("human"),
            Seat::Bot(p) => write!(f, "bot:{p}"),
        }
    }
}

impl FromStr for Seat {
    type Err = HexError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "human" => Ok(Seat::Human),
            "bot" => Ok(Seat::Bot(Policy::UniformRandom)),
            _ => match s.strip_prefix("bot:") {
                Some(p) => Ok(Seat::Bot(p.parse()?)),
                None => Err(HexError::InvalidBoard(format!("unknown seat {s}"))),
            },
        }
    }
}

impl TryFrom<String> for Seat {
    type Error = HexError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<Seat> for String {
    fn from(s: Seat) -> String {
        s.to_string()
    }
}

/// Explicit site coordinates or `"random:k:seed"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SiteSpec {
    Points(Vec<Vec<f64>>),
    Random(String),
}

/// Body of a create request.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GameSpec {
    pub polytope: PolytopeSource,
    /// Facet colors; the builder's coloring, or a search, when absent.
    #[serde(default)]
    pub coloring: Option<Vec<usize>>,
    #[serde(default)]
    pub vertex: usize,
    pub sites: SiteSpec,
    pub players: Vec<Seat>,
    /// Seed for bot moves.
    #[serde(default)]
    pub seed: u64,
}

impl GameSpec {
    pub fn build_board(&self) -> Result<Board<f64>, HexError> {
        let built = self.polytope.build::<f64>()?;
        let n = built.polytope.dim();
        let coloring = match &self.coloring {
            Some(c) => Coloring::new(c.clone(), n)?,
            None => match &built.coloring {
                Some(c) if c.num_colors() == n => c.clone(),
                _ => find_coloring(&built.polytope, n)?
                    .ok_or_else(|| HexError::InvalidBoard(format!("polytope is not {n}-colorable")))?,
            },
        };
        let sites = match &self.sites {
            SiteSpec::Points(p) => p.clone(),
            SiteSpec::Random(s) => {
                let bad = || HexError::InvalidBoard(format!("bad site spec {s}"));
                let mut parts = s.split(':');
                if parts.next() != Some("random") {
                    return Err(bad());
                }
                let k: usize = parts.next().and_then(|x| x.parse().ok()).ok_or_else(bad)?;
                let seed: u64 = parts.next().map_or(Some(0), |x| x.parse().ok()).ok_or_else(bad)?;
                if k == 0 || parts.next().is_some() {
                    return Err(bad());
                }
                random_sites(&built.realization, k, seed)
            }
        };
        Board::new(&built, coloring, self.vertex, sites)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MoveRequest {
    pub player: usize,
    pub cell: usize,
    #[serde(default)]
    pub expected_version: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CellView {
    pub id: usize,
    pub site: Vec<f64>,
    pub outline: Outline,
    pub owner: Option<usize>,
    pub facet_contacts: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Snapshot {
    pub game_id: u64,
    pub version: u64,
    pub dim: usize,
    pub turn: usize,
    pub status: Status,
    pub players: Vec<Seat>,
    pub targets: Vec<Target>,
    pub cells: Vec<CellView>,
    pub history: Vec<Move>,
    pub winner: Option<Win>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JoinReply {
    pub game_id: u64,
    pub player: usize,
    pub version: u64,
}

pub struct Session {
    id: u64,
    game: Game<f64>,
    seats: Vec<Seat>,
    joined: Vec<bool>,
    version: u64,
    rng: ChaCha8Rng,
    outlines: Vec<Outline>,
}

impl Session {
    fn new(id: u64, spec: &GameSpec) -> Result<Self, HexError> {
        let board = spec.build_board()?;
        if spec.players.len() != board.players() {
            return Err(HexError::InvalidBoard(format!(
                "{} seats for a {}-player board",
                spec.players.len(),
                board.players()
            )));
        }
        let outlines = (0..board.num_cells()).map(|c| board.outline(c)).collect();
        let mut session = Self {
            id,
            game: Game::new(Arc::new(board)),
            joined: vec![false; spec.players.len()],
            seats: spec.players.clone(),
            version: 0,
            rng: ChaCha8Rng::seed_from_u64(spec.seed),
            outlines,
        };
        session.run_bots()?;
        Ok(session)
    }

    pub fn game(&self) -> &Game<f64> {
        &self.game
    }

    pub fn version(&self) -> u64 {
        self.version
    }

    fn run_bots(&mut self) -> Result<(), HexError> {
        while !self.game.is_over() {
            let Seat::Bot(policy) = self.seats[self.game.turn()] else { break };
            let mv = bot_move(&self.game, policy, &mut self.rng)?;
            self.game.apply_move(mv)?;
            self.version += 1;
        }
        Ok(())
    }

    fn play(&mut self, req: &MoveRequest) -> Result<(), HexError> {
        if let Some(expected) = req.expected_version {
            if expected != self.version {
                return Err(HexError::VersionConflict { expected, current: self.version });
            }
        }
        if self.game.is_over() {
            return Err(HexError::GameOver);
        }
        if req.player >= self.seats.len() || self.seats[req.player] != Seat::Human {
            return Err(HexError::WrongPlayer { expected: self.game.turn(), got: req.player });
        }
        self.game.apply_move(Move { player: req.player, cell: req.cell })?;
        self.version += 1;
        self.run_bots()
    }

    fn join(&mut self, player: Option<usize>) -> Result<JoinReply, HexError> {
        let free = |p: usize| self.seats[p] == Seat::Human && !self.joined[p];
        let seat = match player {
            Some(p) if p < self.seats.len() && free(p) => p,
            Some(_) => return Err(HexError::NoFreeSeat),
            None => (0..self.seats.len()).find(|&p| free(p)).ok_or(HexError::NoFreeSeat)?,
        };
        self.joined[seat] = true;
        Ok(JoinReply { game_id: self.id, player: seat, version: self.version })
    }

    pub fn snapshot(&self) -> Snapshot {
        let board = self.game.board();
        let cells = board
            .cells()
            .iter()
            .enumerate()
            .map(|(id, c)| CellView {
                id,
                site: c.site.clone(),
                outline: self.outlines[id].clone(),
                owner: self.game.owners()[id],
                facet_contacts: c.facets.clone(),
            })
            .collect();
        Snapshot {
            game_id: self.id,
            version: self.version,
            dim: board.dim(),
            turn: self.game.turn(),
            status: self.game.status().clone(),
            players: self.seats.clone(),
            targets: board.targets().to_vec(),
            cells,
            history: self.game.history().to_vec(),
            winner: self.game.winner().cloned(),
        }
    }
}

/// Independent sessions; moves within a session are serialized by its lock.
#[derive(Default)]
pub struct SessionStore {
    next: AtomicU64,
    sessions: RwLock<HashMap<u64, Arc<Mutex<Session>>>>,
}

impl SessionStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn create(&self, spec: &GameSpec) -> Result<u64, HexError> {
        let id = self.next.fetch_add(1, Ordering::Relaxed) + 1;
        let session = Session::new(id, spec)?;
        self.sessions.write().expect("store lock").insert(id, Arc::new(Mutex::new(session)));
        Ok(id)
    }

    pub fn len(&self) -> usize {
        self.sessions.read().expect("store lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn get(&self, id: u64) -> Result<Arc<Mutex<Session>>, HexError> {
        self.sessions.read().expect("store lock").get(&id).cloned().ok_or(HexError::UnknownSession(id))
    }

    pub fn snapshot(&self, id: u64) -> Result<Snapshot, HexError> {
        Ok(self.get(id)?.lock().expect("session lock").snapshot())
    }

    pub fn join(&self, id: u64, player: Option<usize>) -> Result<JoinReply, HexError> {
        self.get(id)?.lock().expect("session lock").join(player)
    }

    pub fn play(&self, id: u64, req: &MoveRequest) -> Result<Snapshot, HexError> {
        let session = self.get(id)?;
        let mut s = session.lock().expect("session lock");
        s.play(req)?;
        Ok(s.snapshot())
    }

    pub fn winner(&self, id: u64) -> Result<Option<Win>, HexError> {
        Ok(self.get(id)?.lock().expect("session lock").game.winner().cloned())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(players: &str) -> GameSpec {
        serde_json::from_str(&format!(r#"{{"polytope":"hexagon","sites":"random:20:3","players":{players},"seed":7}}"#))
            .unwrap()
    }

    #[test]
    fn seats_round_trip() {
        for s in ["human", "bot:uniform-random", "bot:connectivity-greedy"] {
            assert_eq!(s.parse::<Seat>().unwrap().to_string(), s);
        }
        assert!("robot".parse::<Seat>().is_err());
    }

    #[test]
    fn snapshots_are_stable_between_moves() {
        let store = SessionStore::new();
        let id = store.create(&spec(r#"["human","human"]"#)).unwrap();
        assert_eq!(store.snapshot(id).unwrap(), store.snapshot(id).unwrap());
        assert_eq!(store.snapshot(id).unwrap().cells.len(), 20);
        assert_eq!(store.snapshot(99), Err(HexError::UnknownSession(99)));
    }

    #[test]
    fn moves_conflicts_and_bots() {
        let store = SessionStore::new();
        let id = store.create(&spec(r#"["human","bot:uniform-random"]"#)).unwrap();
        assert_eq!(store.join(id, None).unwrap().player, 0);
        assert_eq!(store.join(id, None), Err(HexError::NoFreeSeat));
        let wrong = MoveRequest { player: 1, cell: 0, expected_version: None };
        assert_eq!(store.play(id, &wrong).unwrap_err().reason(), "wrong_player");
        let snap = store.play(id, &MoveRequest { player: 0, cell: 0, expected_version: Some(0) }).unwrap();
        assert_eq!(snap.version, 2);
        let stale = MoveRequest { player: 0, cell: 1, expected_version: Some(0) };
        assert_eq!(store.play(id, &stale), Err(HexError::VersionConflict { expected: 0, current: 2 }));
    }

    #[test]
    fn bot_first_moves_on_creation() {
        let store = SessionStore::new();
        let id = store.create(&spec(r#"["bot:connectivity-greedy","human"]"#)).unwrap();
        let snap = store.snapshot(id).unwrap();
        assert_eq!((snap.version, snap.turn, snap.history.len()), (1, 1, 1));
    }
}
