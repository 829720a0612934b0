//! The colorful Voronoi-Hex game.

pub mod board;
pub mod game;
pub mod play;
pub mod session;

pub use board::{random_sites, Board, HexCell, Outline, Target, WALL_TOLERANCE};
pub use game::{batch_winner, Game, Move, Status, Win};
pub use play::{bot_move, connection_cost, no_tie_check, playout, random_playout, trial_rng, NoTieReport, Policy, Tie};
pub use session::{GameSpec, JoinReply, MoveRequest, Seat, SessionStore, SiteSpec, Snapshot};
