//! Game state with incremental win detection.

use std::collections::VecDeque;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::board::Board;
use crate::error::HexError;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Move {
    pub player: usize,
    pub cell: usize,
}

/// A winning certificate: the player's component through its anchor facet
/// and the second facet of the player's color that it reaches.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Win {
    pub player: usize,
    pub component: Vec<usize>,
    pub facets: [usize; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "state", rename_all = "snake_case")]
pub enum Status {
    Ongoing,
    Won(Win),
    /// Every cell claimed and nobody connected.
    Exhausted,
}

/// Union-find whose sets carry a flag, or-ed on union.
#[derive(Clone, Debug)]
struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
    flag: Vec<bool>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect(), size: vec![1; n], flag: vec![false; n] }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        self.flag[a] |= self.flag[b];
    }

    fn mark(&mut self, x: usize) {
        let r = self.find(x);
        self.flag[r] = true;
    }

    fn flagged(&mut self, x: usize) -> bool {
        let r = self.find(x);
        self.flag[r]
    }
}

#[derive(Clone, Debug)]
pub struct Game<S> {
    board: Arc<Board<S>>,
    owner: Vec<Option<usize>>,
    turn: usize,
    history: Vec<Move>,
    status: Status,
    /// Per player: cells, then the anchor terminal; a set is flagged once
    /// it touches another facet of the player's color.
    sets: Vec<UnionFind>,
}

impl<S: Scalar> Game<S> {
    pub fn new(board: Arc<Board<S>>) -> Self {
        let nodes = board.num_cells() + 1;
        let sets = (0..board.players()).map(|_| UnionFind::new(nodes)).collect();
        Self {
            owner: vec![None; board.num_cells()],
            turn: 0,
            history: Vec::new(),
            status: Status::Ongoing,
            sets,
            board,
        }
    }

    pub fn board(&self) -> &Arc<Board<S>> {
        &self.board
    }

    pub fn owners(&self) -> &[Option<usize>] {
        &self.owner
    }

    pub fn turn(&self) -> usize {
        self.turn
    }

    pub fn history(&self) -> &[Move] {
        &self.history
    }

    pub fn status(&self) -> &Status {
        &self.status
    }

    pub fn winner(&self) -> Option<&Win> {
        match &self.status {
            Status::Won(w) => Some(w),
            _ => None,
        }
    }

    pub fn is_over(&self) -> bool {
        self.status != Status::Ongoing
    }

    pub fn legal_moves(&self) -> Vec<usize> {
        if self.is_over() {
            return Vec::new();
        }
        (0..self.owner.len()).filter(|&c| self.owner[c].is_none()).collect()
    }

    pub fn apply_move(&mut self, mv: Move) -> Result<&Status, HexError> {
        if self.is_over() {
            return Err(HexError::GameOver);
        }
        if mv.cell >= self.owner.len() {
            return Err(HexError::NoSuchCell(mv.cell));
        }
        if self.owner[mv.cell].is_some() {
            return Err(HexError::Claimed(mv.cell));
        }
        if mv.player != self.turn {
            return Err(HexError::WrongPlayer { expected: self.turn, got: mv.player });
        }
        let p = mv.player;
        self.owner[mv.cell] = Some(p);
        self.history.push(mv);

        let cells = self.board.num_cells();
        let cell = self.board.cell(mv.cell);
        let target = &self.board.targets()[p];
        let uf = &mut self.sets[p];
        for &nb in &cell.neighbors {
            if self.owner[nb] == Some(p) {
                uf.union(mv.cell, nb);
            }
        }
        if cell.facets.contains(&target.anchor) {
            uf.union(mv.cell, cells);
        }
        if target.others.iter().any(|f| cell.facets.contains(f)) {
            uf.mark(mv.cell);
        }

        if uf.flagged(cells) {
            let component = anchor_component(&self.board, &self.owner, p);
            let other = *target
                .others
                .iter()
                .find(|f| component.iter().any(|&c| self.board.cell(c).facets.contains(f)))
                .expect("flagged component touches a target facet");
            self.status = Status::Won(Win { player: p, component, facets: [target.anchor, other] });
        } else if self.owner.iter().all(Option::is_some) {
            self.status = Status::Exhausted;
        } else {
            self.turn = (self.turn + 1) % self.board.players();
        }
        Ok(&self.status)
    }
}

/// The player's cells connected to the anchor facet through walls, ascending.
fn anchor_component<S: Scalar>(board: &Board<S>, owner: &[Option<usize>], player: usize) -> Vec<usize> {
    let anchor = board.targets()[player].anchor;
    let mut seen = vec![false; board.num_cells()];
    let mut queue: VecDeque<usize> = VecDeque::new();
    for c in 0..board.num_cells() {
        if owner[c] == Some(player) && board.cell(c).facets.contains(&anchor) {
            seen[c] = true;
            queue.push_back(c);
        }
    }
    let mut component = Vec::new();
    while let Some(c) = queue.pop_front() {
        component.push(c);
        for &d in &board.cell(c).neighbors {
            if !seen[d] && owner[d] == Some(player) {
                seen[d] = true;
                queue.push_back(d);
            }
        }
    }
    component.sort_unstable();
    component
}

/// From-scratch winner scan over the ownership vector, players in order.
pub fn batch_winner<S: Scalar>(board: &Board<S>, owner: &[Option<usize>]) -> Option<Win> {
    for target in board.targets() {
        let component = anchor_component(board, owner, target.player);
        let reached = target.others.iter().find(|f| component.iter().any(|&c| board.cell(c).facets.contains(f)));
        if let Some(&other) = reached {
            return Some(Win { player: target.player, component, facets: [target.anchor, other] });
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hex::board::random_sites;
    use crate::polytope::builders;

    fn hexagon_game() -> Game<f64> {
        let b = builders::polygon::<f64>(6);
        let sites = random_sites(&b.realization, 20, 5);
        Game::new(Arc::new(Board::new(&b, b.coloring.clone().unwrap(), 0, sites).unwrap()))
    }

    #[test]
    fn moves_and_errors() {
        let mut g = hexagon_game();
        assert_eq!(g.legal_moves().len(), 20);
        assert!(batch_winner(g.board(), g.owners()).is_none());
        g.apply_move(Move { player: 0, cell: 3 }).unwrap();
        assert_eq!(g.legal_moves().len(), 19);
        assert_eq!(g.turn(), 1);
        assert_eq!(g.apply_move(Move { player: 1, cell: 3 }), Err(HexError::Claimed(3)));
        assert_eq!(g.apply_move(Move { player: 0, cell: 4 }), Err(HexError::WrongPlayer { expected: 1, got: 0 }));
        assert_eq!(g.apply_move(Move { player: 1, cell: 20 }), Err(HexError::NoSuchCell(20)));
    }

    #[test]
    fn single_cell_board_is_won_at_once() {
        let b = builders::polygon::<f64>(6);
        let board = Board::new(&b, b.coloring.clone().unwrap(), 0, vec![vec![0.0, 0.0]]).unwrap();
        let mut g = Game::new(Arc::new(board));
        let status = g.apply_move(Move { player: 0, cell: 0 }).unwrap().clone();
        assert_eq!(status, Status::Won(Win { player: 0, component: vec![0], facets: [0, 2] }));
        assert_eq!(g.apply_move(Move { player: 1, cell: 0 }), Err(HexError::GameOver));
        assert!(g.legal_moves().is_empty());
    }
}
