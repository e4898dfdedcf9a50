//! Sliding-tile puzzle on an N×N board (N <= 4), unit-cost moves.
//!
//! Cells are packed four bits each into a `u64`; cell `i` holds the tile at
//! row `i / N`, column `i % N`, and 0 is the blank. The goal places the blank
//! in the top-left corner followed by tiles `1..N²-1` in row-major order.

use super::{parse_permutation_lines, ParseError};
use crate::scalar::Scalar;
use crate::search::StateSpace;
use std::fmt;
use std::marker::PhantomData;

pub const MAX_WIDTH: usize = 4;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct TileState(u64);

impl TileState {
    pub fn from_tiles(width: usize, tiles: &[u8]) -> Result<Self, String> {
        if !(2..=MAX_WIDTH).contains(&width) {
            return Err(format!("board width {width} is not supported (2..={MAX_WIDTH})"));
        }
        let cells = width * width;
        if tiles.len() != cells {
            return Err(format!("expected {cells} tiles, found {}", tiles.len()));
        }
        let mut seen = vec![false; cells];
        let mut packed = 0u64;
        for (i, &t) in tiles.iter().enumerate() {
            let t = t as usize;
            if t >= cells || seen[t] {
                return Err(format!("{tiles:?} is not a permutation of 0..{cells}"));
            }
            seen[t] = true;
            packed |= (t as u64) << (4 * i);
        }
        Ok(TileState(packed))
    }

    pub fn goal(width: usize) -> Self {
        let tiles: Vec<u8> = (0..(width * width) as u8).collect();
        TileState::from_tiles(width, &tiles).expect("identity is a permutation")
    }

    #[inline]
    pub fn tile_at(self, cell: usize) -> u8 {
        ((self.0 >> (4 * cell)) & 0xF) as u8
    }

    pub fn tiles(self, width: usize) -> Vec<u8> {
        (0..width * width).map(|c| self.tile_at(c)).collect()
    }

    pub fn blank(self, width: usize) -> usize {
        (0..width * width)
            .find(|&c| self.tile_at(c) == 0)
            .expect("valid state has a blank")
    }

    /// Swaps the contents of two cells.
    fn swap(self, a: usize, b: usize) -> Self {
        let (ta, tb) = (self.tile_at(a) as u64, self.tile_at(b) as u64);
        let cleared = self.0 & !(0xF << (4 * a)) & !(0xF << (4 * b));
        TileState(cleared | (tb << (4 * a)) | (ta << (4 * b)))
    }
}

impl fmt::Debug for TileState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<u8> = (0..16).map(|c| self.tile_at(c)).collect();
        write!(f, "TileState({cells:?})")
    }
}

/// Neighbouring boards reachable by one blank move, each at unit cost.
pub fn tile_successors(width: usize, s: TileState) -> Vec<TileState> {
    let blank = s.blank(width);
    let (row, col) = (blank / width, blank % width);
    let mut out = Vec::with_capacity(4);
    if row > 0 {
        out.push(s.swap(blank, blank - width));
    }
    if row + 1 < width {
        out.push(s.swap(blank, blank + width));
    }
    if col > 0 {
        out.push(s.swap(blank, blank - 1));
    }
    if col + 1 < width {
        out.push(s.swap(blank, blank + 1));
    }
    out
}

/// Sum of Manhattan distances of the non-blank tiles to their goal cells.
pub fn manhattan(width: usize, s: TileState) -> u32 {
    let mut total = 0;
    for cell in 0..width * width {
        let t = s.tile_at(cell) as usize;
        if t == 0 {
            continue;
        }
        let (r, c) = (cell / width, cell % width);
        let (gr, gc) = (t / width, t % width);
        total += (r.abs_diff(gr) + c.abs_diff(gc)) as u32;
    }
    total
}

/// Whether `s` can reach the goal: the permutation parity must match the
/// parity of the blank's distance from its goal cell.
pub fn is_solvable(width: usize, s: TileState) -> bool {
    let tiles = s.tiles(width);
    let mut inversions = 0usize;
    for i in 0..tiles.len() {
        for j in i + 1..tiles.len() {
            if tiles[i] > tiles[j] {
                inversions += 1;
            }
        }
    }
    let blank = s.blank(width);
    let blank_dist = blank / width + blank % width;
    inversions % 2 == blank_dist % 2
}

/// One tile puzzle instance with the Manhattan heuristic.
#[derive(Debug, Clone)]
pub struct TilePuzzle<C = f64> {
    width: usize,
    start: TileState,
    goal: TileState,
    _cost: PhantomData<C>,
}

impl<C: Scalar> TilePuzzle<C> {
    pub fn new(width: usize, start: TileState) -> Self {
        TilePuzzle {
            width,
            start,
            goal: TileState::goal(width),
            _cost: PhantomData,
        }
    }

    /// Infers the width from the number of tiles.
    pub fn from_tiles(tiles: &[u8]) -> Result<Self, String> {
        let width = (tiles.len() as f64).sqrt().round() as usize;
        if width * width != tiles.len() {
            return Err(format!("{} tiles do not form a square board", tiles.len()));
        }
        Ok(TilePuzzle::new(width, TileState::from_tiles(width, tiles)?))
    }

    pub fn width(&self) -> usize {
        self.width
    }
}

impl<C: Scalar> StateSpace for TilePuzzle<C> {
    type State = TileState;
    type Cost = C;

    fn start(&self) -> TileState {
        self.start
    }

    fn is_goal(&self, s: &TileState) -> bool {
        *s == self.goal
    }

    fn successors(&self, s: &TileState, out: &mut Vec<(TileState, C)>) {
        out.extend(tile_successors(self.width, *s).into_iter().map(|t| (t, C::one())));
    }

    fn heuristic(&self, s: &TileState) -> C {
        C::from_u32(manhattan(self.width, *s)).expect("small integer")
    }
}

/// Parses one instance per line; every line must describe a square board.
pub fn parse_tile_instances(text: &str) -> Result<Vec<Vec<u8>>, ParseError> {
    let lines = parse_permutation_lines(text)?;
    for (i, tiles) in lines.iter().enumerate() {
        TilePuzzle::<f64>::from_tiles(tiles).map_err(|m| ParseError::new(i + 1, 1, m))?;
    }
    Ok(lines)
}

pub fn format_tile_instance(tiles: &[u8]) -> String {
    tiles.iter().map(u8::to_string).collect::<Vec<_>>().join(" ")
}
