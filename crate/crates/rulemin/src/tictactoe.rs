//! Tic-tac-toe strategy transition systems.
//!
//! Game states are 3x3 grid graphs with nine tile vertices and twelve
//! neighbor edges, labeled `_`, `O` or `X`. For the modeled player the
//! system contains every reachable state where that player moves and every
//! move that denies the opponent a winning strategy, decided by full-game
//! minimax. Which moves the opponent is allowed during reachability
//! exploration is configurable; the default constrains both players to
//! non-losing play.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::Result;
use crate::graph::{Graph, VertexId};
use crate::label::LabelPoset;
use crate::morphism::GraphMap;
use crate::transition::{Transition, TransitionSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Player {
    O,
    X,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::O => Player::X,
            Player::X => Player::O,
        }
    }

    pub fn cell(self) -> u8 {
        match self {
            Player::O => 1,
            Player::X => 2,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Player::O => "O",
            Player::X => "X",
        }
    }
}

impl std::str::FromStr for Player {
    type Err = crate::error::Error;
    fn from_str(s: &str) -> Result<Player> {
        match s {
            "o" | "O" => Ok(Player::O),
            "x" | "X" => Ok(Player::X),
            other => Err(crate::error::Error::Parse(format!(
                "unknown player `{other}`"
            ))),
        }
    }
}

/// Which states count as reachable when collecting the modeled player's
/// states. Transitions are always the player's non-losing moves only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReachabilityMode {
    /// Reachable under any legal play; states already winning for the
    /// opponent are excluded. This reproduces the published state and
    /// transition counts.
    #[default]
    Legal,
    /// Both players only make non-losing moves.
    BothConstrained,
    /// Only the modeled player is constrained; the opponent may play any
    /// legal move.
    ModeledOnly,
}

impl std::str::FromStr for ReachabilityMode {
    type Err = crate::error::Error;
    fn from_str(s: &str) -> Result<ReachabilityMode> {
        match s {
            "legal" => Ok(ReachabilityMode::Legal),
            "both" => Ok(ReachabilityMode::BothConstrained),
            "modeled" => Ok(ReachabilityMode::ModeledOnly),
            other => Err(crate::error::Error::Parse(format!(
                "unknown reachability mode `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct GameSpec {
    pub player: Player,
    pub reachability: ReachabilityMode,
}

impl Default for GameSpec {
    fn default() -> Self {
        GameSpec {
            player: Player::O,
            reachability: ReachabilityMode::BothConstrained,
        }
    }
}

pub type Board = [u8; 9];

pub const EMPTY_BOARD: Board = [0; 9];

const LINES: [[usize; 3]; 8] = [
    [0, 1, 2],
    [3, 4, 5],
    [6, 7, 8],
    [0, 3, 6],
    [1, 4, 7],
    [2, 5, 8],
    [0, 4, 8],
    [2, 4, 6],
];

/// Grid adjacencies: six horizontal and six vertical neighbor pairs.
pub const GRID_EDGES: [(usize, usize); 12] = [
    (0, 1),
    (1, 2),
    (3, 4),
    (4, 5),
    (6, 7),
    (7, 8),
    (0, 3),
    (3, 6),
    (1, 4),
    (4, 7),
    (2, 5),
    (5, 8),
];

pub fn winner(b: &Board) -> Option<Player> {
    for line in LINES {
        let v = b[line[0]];
        if v != 0 && b[line[1]] == v && b[line[2]] == v {
            return Some(if v == 1 { Player::O } else { Player::X });
        }
    }
    None
}

pub fn is_full(b: &Board) -> bool {
    b.iter().all(|&c| c != 0)
}

/// Whose move it is (O starts).
pub fn to_move(b: &Board) -> Player {
    let o = b.iter().filter(|&&c| c == 1).count();
    let x = b.iter().filter(|&&c| c == 2).count();
    if o == x {
        Player::O
    } else {
        Player::X
    }
}

pub fn board_index(b: &Board) -> usize {
    b.iter().fold(0usize, |acc, &c| acc * 3 + c as usize)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    OWins,
    Draw,
    XWins,
}

impl Outcome {
    pub fn win_for(p: Player) -> Outcome {
        match p {
            Player::O => Outcome::OWins,
            Player::X => Outcome::XWins,
        }
    }
}

/// Memoized minimax value of every state reachable in play.
pub struct GameTable {
    values: Vec<Option<Outcome>>,
    winnable: Vec<Option<bool>>,
}

impl Default for GameTable {
    fn default() -> Self {
        Self::new()
    }
}

impl GameTable {
    pub fn new() -> GameTable {
        GameTable {
            values: vec![None; 19683],
            winnable: vec![None; 19683],
        }
    }

    /// Whether some line could still be completed: a line counts as open
    /// while it is free of at least one player's symbols. The game ends in
    /// a tie as soon as every line contains both symbols.
    pub fn victory_possible(&mut self, b: &Board) -> bool {
        let idx = board_index(b);
        if let Some(v) = self.winnable[idx] {
            return v;
        }
        let v = LINES.iter().any(|line| {
            let cells = [b[line[0]], b[line[1]], b[line[2]]];
            !cells.contains(&1) || !cells.contains(&2)
        });
        self.winnable[idx] = Some(v);
        v
    }

    /// The game is over on a win, a full board, or a dead draw.
    pub fn game_over(&mut self, b: &Board) -> bool {
        winner(b).is_some() || is_full(b) || !self.victory_possible(b)
    }

    pub fn value(&mut self, b: &Board) -> Outcome {
        let idx = board_index(b);
        if let Some(v) = self.values[idx] {
            return v;
        }
        let v = if let Some(w) = winner(b) {
            Outcome::win_for(w)
        } else if is_full(b) {
            Outcome::Draw
        } else {
            let mover = to_move(b);
            let mut best: Option<Outcome> = None;
            for cell in 0..9 {
                if b[cell] != 0 {
                    continue;
                }
                let mut child = *b;
                child[cell] = mover.cell();
                let cv = self.value(&child);
                best = Some(match (mover, best) {
                    (_, None) => cv,
                    (Player::O, Some(acc)) => prefer(Player::O, acc, cv),
                    (Player::X, Some(acc)) => prefer(Player::X, acc, cv),
                });
            }
            best.expect("non-terminal board has moves")
        };
        self.values[idx] = Some(v);
        v
    }

    /// Moves that do not hand the opponent a winning strategy.
    pub fn non_losing_moves(&mut self, b: &Board) -> Vec<usize> {
        let mover = to_move(b);
        let opponent_wins = Outcome::win_for(mover.opponent());
        (0..9)
            .filter(|&cell| {
                if b[cell] != 0 {
                    return false;
                }
                let mut child = *b;
                child[cell] = mover.cell();
                self.value(&child) != opponent_wins
            })
            .collect()
    }
}

fn prefer(p: Player, a: Outcome, b: Outcome) -> Outcome {
    let rank = |o: Outcome| match (p, o) {
        (Player::O, Outcome::OWins) | (Player::X, Outcome::XWins) => 2,
        (_, Outcome::Draw) => 1,
        _ => 0,
    };
    if rank(b) > rank(a) {
        b
    } else {
        a
    }
}

pub fn tictactoe_poset() -> Arc<LabelPoset> {
    LabelPoset::flat(&["_", "O", "X", "-"]).expect("static poset")
}

pub fn board_graph(poset: &Arc<LabelPoset>, b: &Board) -> Result<Arc<Graph>> {
    let mut gb = Graph::builder(poset.clone());
    for cell in b {
        let label = match cell {
            1 => "O",
            2 => "X",
            _ => "_",
        };
        gb.add_vertex_named(label)?;
    }
    for (u, v) in GRID_EDGES {
        gb.add_edge_named(VertexId(u as u32), VertexId(v as u32), "-", false)?;
    }
    gb.build_arc()
}

/// The move transition: one tile relabels from `_` to the player's symbol,
/// every tile and edge maps identically.
pub fn move_transition(
    poset: &Arc<LabelPoset>,
    before: &Board,
    after: &Board,
) -> Result<Transition> {
    let source = board_graph(poset, before)?;
    let target = board_graph(poset, after)?;
    let mut map = GraphMap::new_empty(source.clone(), target.clone());
    for v in source.vertices() {
        map.set_vertex(v, v);
    }
    for e in source.edge_ids() {
        map.set_edge(e, e);
    }
    Transition::new(map)
}

/// Raw (pre-deduplication) states and moves of the player-specific system.
pub struct RawStrategy {
    pub states: Vec<Board>,
    pub moves: Vec<(Board, Board)>,
}

/// Explores reachable play under the chosen discipline and collects the
/// modeled player's states and non-losing moves.
pub fn raw_strategy(spec: &GameSpec) -> RawStrategy {
    let mut table = GameTable::new();
    let mut seen: BTreeSet<usize> = BTreeSet::new();
    let mut states: BTreeSet<Board> = BTreeSet::new();
    let mut moves: BTreeSet<(Board, Board)> = BTreeSet::new();
    let mut stack = vec![EMPTY_BOARD];
    seen.insert(board_index(&EMPTY_BOARD));
    while let Some(b) = stack.pop() {
        if table.game_over(&b) {
            continue;
        }
        let mover = to_move(&b);
        let constrained = match spec.reachability {
            ReachabilityMode::Legal => false,
            ReachabilityMode::BothConstrained => true,
            ReachabilityMode::ModeledOnly => mover == spec.player,
        };
        let explore: Vec<usize> = if constrained {
            table.non_losing_moves(&b)
        } else {
            (0..9).filter(|&c| b[c] == 0).collect()
        };
        if mover == spec.player {
            let opponent_wins = Outcome::win_for(spec.player.opponent());
            if table.value(&b) != opponent_wins {
                states.insert(b);
                for cell in table.non_losing_moves(&b) {
                    let mut child = b;
                    child[cell] = mover.cell();
                    moves.insert((b, child));
                }
            }
        }
        for &cell in &explore {
            let mut child = b;
            child[cell] = mover.cell();
            if seen.insert(board_index(&child)) {
                stack.push(child);
            }
        }
    }
    RawStrategy {
        states: states.into_iter().collect(),
        moves: moves.into_iter().collect(),
    }
}

/// Generates the player's input transition system; isomorphic boards (grid
/// symmetries) collapse during system construction.
pub fn gen_tictactoe(spec: &GameSpec) -> Result<TransitionSystem> {
    let poset = tictactoe_poset();
    let raw = raw_strategy(spec);
    let mut builder = TransitionSystem::builder(poset.clone());
    for b in &raw.states {
        builder.add_input(board_graph(&poset, b)?)?;
    }
    for (before, after) in &raw.moves {
        builder.add_transition(move_transition(&poset, before, after)?)?;
    }
    Ok(builder.build())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_board_is_a_draw() {
        let mut table = GameTable::new();
        assert_eq!(table.value(&EMPTY_BOARD), Outcome::Draw);
        assert_eq!(table.non_losing_moves(&EMPTY_BOARD).len(), 9);
    }

    #[test]
    fn immediate_win_detected() {
        // O O _ / X X _ / _ _ _, O to move: winning move at 2.
        let b: Board = [1, 1, 0, 2, 2, 0, 0, 0, 0];
        let mut table = GameTable::new();
        assert_eq!(to_move(&b), Player::O);
        assert_eq!(table.value(&b), Outcome::OWins);
    }

    #[test]
    fn lost_position_has_no_nonlosing_moves() {
        // X X _ / O _ _ / O _ _ with O to move: blocking at 2 runs into the
        // center double threat, anything else loses to X at 2.
        let b: Board = [2, 2, 0, 1, 0, 0, 1, 0, 0];
        let mut table = GameTable::new();
        assert_eq!(table.value(&b), Outcome::XWins);
        assert!(table.non_losing_moves(&b).is_empty());
    }

    #[test]
    fn winning_move_is_nonlosing() {
        let b: Board = [1, 1, 0, 2, 2, 0, 0, 0, 0];
        let mut table = GameTable::new();
        let moves = table.non_losing_moves(&b);
        assert!(moves.contains(&2));
    }

    #[test]
    fn moves_change_exactly_one_tile() {
        let spec = GameSpec::default();
        let raw = raw_strategy(&spec);
        for (before, after) in &raw.moves {
            let diff: Vec<usize> = (0..9).filter(|&i| before[i] != after[i]).collect();
            assert_eq!(diff.len(), 1);
            assert_eq!(before[diff[0]], 0);
            assert_eq!(after[diff[0]], Player::O.cell());
        }
    }

    #[test]
    fn no_won_states_in_inputs() {
        for player in [Player::O, Player::X] {
            let raw = raw_strategy(&GameSpec {
                player,
                reachability: ReachabilityMode::BothConstrained,
            });
            for b in &raw.states {
                assert!(winner(b).is_none());
                assert_eq!(to_move(b), player);
            }
        }
    }
}
