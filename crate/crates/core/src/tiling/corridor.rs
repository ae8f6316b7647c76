//! Corridor tiling instances, validity, the row-graph solver and the
//! binary counter family.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::error::TilingError;

pub type Colour = u32;

/// A Wang tile given by its colours in top, right, bottom, left order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tile {
    pub top: Colour,
    pub right: Colour,
    pub bottom: Colour,
    pub left: Colour,
}

impl Tile {
    pub const fn new(top: Colour, right: Colour, bottom: Colour, left: Colour) -> Tile {
        Tile {
            top,
            right,
            bottom,
            left,
        }
    }

    pub const fn mono(c: Colour) -> Tile {
        Tile::new(c, c, c, c)
    }
}

impl fmt::Display for Tile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},{},{})",
            self.top, self.right, self.bottom, self.left
        )
    }
}

/// Tiles, the two corner tiles and the width exponent `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorridorInstance {
    pub tiles: Vec<Tile>,
    pub top_left: usize,
    pub bottom_right: usize,
    pub n: u32,
}

impl CorridorInstance {
    pub fn new(
        tiles: Vec<Tile>,
        top_left: usize,
        bottom_right: usize,
        n: u32,
    ) -> Result<CorridorInstance, TilingError> {
        for c in [top_left, bottom_right] {
            if c >= tiles.len() {
                return Err(TilingError::BadCorner(c));
            }
        }
        if n == 0 {
            return Err(TilingError::ZeroN);
        }
        Ok(CorridorInstance {
            tiles,
            top_left,
            bottom_right,
            n,
        })
    }

    /// One tile with every side coloured 0, in both corners.
    pub fn monochrome(n: u32) -> CorridorInstance {
        CorridorInstance::new(vec![Tile::mono(0)], 0, 0, n).expect("valid")
    }

    /// `2^n`.
    pub fn width(&self) -> usize {
        1usize << self.n
    }

    pub fn colours(&self) -> Vec<Colour> {
        let mut out: Vec<Colour> = self
            .tiles
            .iter()
            .flat_map(|t| [t.top, t.right, t.bottom, t.left])
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Tiles whose top colour equals the bottom colour of tile `t`.
    pub fn below(&self, t: usize) -> Vec<usize> {
        let b = self.tiles[t].bottom;
        (0..self.tiles.len())
            .filter(|&i| self.tiles[i].top == b)
            .collect()
    }

    fn corners_valid(&self) -> bool {
        self.top_left < self.tiles.len() && self.bottom_right < self.tiles.len()
    }
}

/// An `h x w` matrix of tile indices, `h, w >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tiling {
    rows: Vec<Vec<usize>>,
}

impl Tiling {
    pub fn new(rows: Vec<Vec<usize>>) -> Result<Tiling, TilingError> {
        let w = rows.first().map_or(0, Vec::len);
        if w == 0 {
            return Err(TilingError::Shape("empty tiling".into()));
        }
        if let Some(i) = rows.iter().position(|r| r.len() != w) {
            return Err(TilingError::Shape(format!(
                "row {} has length {}, expected {}",
                i + 1,
                rows[i].len(),
                w
            )));
        }
        Ok(Tiling { rows })
    }

    pub fn height(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.rows[0].len()
    }

    pub fn get(&self, i: usize, j: usize) -> usize {
        self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn with(&self, i: usize, j: usize, t: usize) -> Tiling {
        let mut out = self.clone();
        out.rows[i][j] = t;
        out
    }
}

impl fmt::Display for Tiling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(usize::to_string).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// The first reason a tiling is not valid. Positions are 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    UnknownTile { row: usize, col: usize },
    TopLeft,
    BottomRight,
    Horizontal { row: usize, col: usize },
    Vertical { row: usize, col: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UnknownTile { row, col } => write!(f, "unknown tile at ({row},{col})"),
            Violation::TopLeft => write!(f, "top-left corner is not the top-left tile"),
            Violation::BottomRight => write!(f, "bottom-right corner is not the bottom-right tile"),
            Violation::Horizontal { row, col } => {
                write!(f, "horizontal mismatch ({row},{col})-({row},{})", col + 1)
            }
            Violation::Vertical { row, col } => {
                write!(f, "vertical mismatch ({row},{col})-({},{col})", row + 1)
            }
        }
    }
}

/// Scans corners, then rows top to bottom, reporting the first violation.
pub fn check_tiling(inst: &CorridorInstance, t: &Tiling) -> Option<Violation> {
    for (i, r) in t.rows.iter().enumerate() {
        if let Some(j) = r.iter().position(|&x| x >= inst.tiles.len()) {
            return Some(Violation::UnknownTile {
                row: i + 1,
                col: j + 1,
            });
        }
    }
    if t.get(0, 0) != inst.top_left {
        return Some(Violation::TopLeft);
    }
    if t.get(t.height() - 1, t.width() - 1) != inst.bottom_right {
        return Some(Violation::BottomRight);
    }
    for i in 0..t.height() {
        for j in 0..t.width() {
            let a = inst.tiles[t.get(i, j)];
            if j + 1 < t.width() && a.right != inst.tiles[t.get(i, j + 1)].left {
                return Some(Violation::Horizontal {
                    row: i + 1,
                    col: j + 1,
                });
            }
            if i + 1 < t.height() && a.bottom != inst.tiles[t.get(i + 1, j)].top {
                return Some(Violation::Vertical {
                    row: i + 1,
                    col: j + 1,
                });
            }
        }
    }
    None
}

pub fn is_valid_tiling(inst: &CorridorInstance, t: &Tiling) -> bool {
    check_tiling(inst, t).is_none()
}

/// Row budget used by [`solve_corridor`] and [`enumerate_tilings`].
pub const ROW_BUDGET: usize = 1 << 20;

/// Horizontally valid rows of a fixed width, in lexicographic order, with
/// successor lists by vertical compatibility.
pub struct RowGraph {
    rows: Vec<Vec<usize>>,
    succ: Vec<Vec<usize>>,
}

impl RowGraph {
    pub fn new(
        inst: &CorridorInstance,
        width: usize,
        budget: usize,
    ) -> Result<RowGraph, TilingError> {
        let mut rows = Vec::new();
        let mut cur = Vec::with_capacity(width);
        if width > 0 {
            extend_rows(inst, width, budget, &mut cur, &mut rows)?;
        }
        let mut by_top: HashMap<Vec<Colour>, Vec<usize>> = HashMap::new();
        for (i, r) in rows.iter().enumerate() {
            by_top
                .entry(r.iter().map(|&t| inst.tiles[t].top).collect())
                .or_default()
                .push(i);
        }
        let succ = rows
            .iter()
            .map(|r| {
                let key: Vec<Colour> = r.iter().map(|&t| inst.tiles[t].bottom).collect();
                by_top.get(&key).cloned().unwrap_or_default()
            })
            .collect();
        Ok(RowGraph { rows, succ })
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn row(&self, i: usize) -> &[usize] {
        &self.rows[i]
    }

    pub fn successors(&self, i: usize) -> &[usize] {
        &self.succ[i]
    }
}

fn extend_rows(
    inst: &CorridorInstance,
    width: usize,
    budget: usize,
    cur: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) -> Result<(), TilingError> {
    if cur.len() == width {
        if out.len() >= budget {
            return Err(TilingError::Budget { limit: budget });
        }
        out.push(cur.clone());
        return Ok(());
    }
    for (i, t) in inst.tiles.iter().enumerate() {
        if let Some(&prev) = cur.last() {
            if inst.tiles[prev].right != t.left {
                continue;
            }
        }
        cur.push(i);
        extend_rows(inst, width, budget, cur, out)?;
        cur.pop();
    }
    Ok(())
}

fn endpoints(inst: &CorridorInstance, g: &RowGraph) -> (Vec<bool>, Vec<bool>) {
    let start = (0..g.len()).map(|i| g.row(i)[0] == inst.top_left).collect();
    let end = (0..g.len())
        .map(|i| *g.row(i).last().expect("nonempty row") == inst.bottom_right)
        .collect();
    (start, end)
}

/// A shortest valid tiling of the given width, found by breadth-first
/// search through the row graph. Ties go to the lexicographically first
/// rows.
pub fn solve_corridor(
    inst: &CorridorInstance,
    width: usize,
) -> Result<Option<Tiling>, TilingError> {
    solve_corridor_with(inst, width, ROW_BUDGET)
}

pub fn solve_corridor_with(
    inst: &CorridorInstance,
    width: usize,
    budget: usize,
) -> Result<Option<Tiling>, TilingError> {
    if !inst.corners_valid() || width == 0 {
        return Ok(None);
    }
    let g = RowGraph::new(inst, width, budget)?;
    let (start, end) = endpoints(inst, &g);
    let mut parent: Vec<Option<usize>> = vec![None; g.len()];
    let mut seen = vec![false; g.len()];
    let mut queue = VecDeque::new();
    for i in (0..g.len()).filter(|&i| start[i]) {
        seen[i] = true;
        queue.push_back(i);
    }
    while let Some(i) = queue.pop_front() {
        if end[i] {
            let mut path = vec![i];
            while let Some(p) = parent[*path.last().expect("nonempty")] {
                path.push(p);
            }
            path.reverse();
            let rows = path.into_iter().map(|r| g.row(r).to_vec()).collect();
            return Tiling::new(rows).map(Some);
        }
        for &j in g.successors(i) {
            if !seen[j] {
                seen[j] = true;
                parent[j] = Some(i);
                queue.push_back(j);
            }
        }
    }
    Ok(None)
}

/// Every valid tiling of the given width and height at most `max_height`,
/// ordered by height and then row by row.
pub fn enumerate_tilings(
    inst: &CorridorInstance,
    width: usize,
    max_height: usize,
) -> Result<Vec<Tiling>, TilingError> {
    enumerate_tilings_with(inst, width, max_height, ROW_BUDGET)
}

pub fn enumerate_tilings_with(
    inst: &CorridorInstance,
    width: usize,
    max_height: usize,
    budget: usize,
) -> Result<Vec<Tiling>, TilingError> {
    if !inst.corners_valid() || width == 0 || max_height == 0 {
        return Ok(Vec::new());
    }
    let g = RowGraph::new(inst, width, budget)?;
    let (start, end) = endpoints(inst, &g);
    let mut found: Vec<Vec<usize>> = Vec::new();
    let mut path = Vec::new();
    for i in (0..g.len()).filter(|&i| start[i]) {
        path.push(i);
        walk(&g, &end, max_height, budget, &mut path, &mut found)?;
        path.pop();
    }
    found.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    found
        .into_iter()
        .map(|p| Tiling::new(p.into_iter().map(|r| g.row(r).to_vec()).collect()))
        .collect()
}

fn walk(
    g: &RowGraph,
    end: &[bool],
    max_height: usize,
    budget: usize,
    path: &mut Vec<usize>,
    found: &mut Vec<Vec<usize>>,
) -> Result<(), TilingError> {
    let last = *path.last().expect("nonempty");
    if end[last] {
        if found.len() >= budget {
            return Err(TilingError::Budget { limit: budget });
        }
        found.push(path.clone());
    }
    if path.len() == max_height {
        return Ok(());
    }
    for &j in g.successors(last) {
        path.push(j);
        walk(g, end, max_height, budget, path, found)?;
        path.pop();
    }
    Ok(())
}

const BIT0: Colour = 0;
const BIT1: Colour = 1;
const LEFT: Colour = 2;
const RIGHT: Colour = 3;
const TOP: Colour = 4;
const END: Colour = 5;
const START: Colour = 6;
const ZERO: Colour = 7;
const EDGE_R: Colour = 8;
const EDGE_L: Colour = 9;

/// A tile set whose unique valid tiling of the given width counts in
/// binary. Columns: a left border, `width - 2` bit columns with the least
/// significant bit leftmost, and a right border. Row `r` (1-based) carries
/// `r - 1` on the top edges of its bit columns and `r` on the bottom
/// edges; carries flow left to right. The bottom-right tile only fits
/// after an overflowing carry, so the tiling has `2^(width-2)` rows.
pub fn counter_instance(width: usize) -> CorridorInstance {
    assert!(width >= 3, "counter needs width >= 3");
    let mut tiles = vec![
        Tile::new(TOP, START, LEFT, EDGE_L),
        Tile::new(LEFT, BIT1, LEFT, EDGE_L),
        Tile::new(BIT0, ZERO, BIT1, START),
        Tile::new(BIT0, ZERO, BIT0, ZERO),
        Tile::new(TOP, EDGE_R, RIGHT, ZERO),
    ];
    for b in 0..2 {
        for c in 0..2 {
            tiles.push(Tile::new(b, b & c, b ^ c, c));
        }
    }
    tiles.push(Tile::new(RIGHT, EDGE_R, RIGHT, BIT0));
    tiles.push(Tile::new(RIGHT, EDGE_R, END, BIT1));
    let n = (usize::BITS - (width - 1).leading_zeros()).max(1);
    let br = tiles.len() - 1;
    CorridorInstance::new(tiles, 0, br, n).expect("valid")
}

/// The counter value on the top edges of each row's bit columns, least
/// significant bit in column 2.
pub fn counter_values(inst: &CorridorInstance, t: &Tiling) -> Vec<u64> {
    t.rows()
        .iter()
        .map(|r| {
            r[1..r.len() - 1]
                .iter()
                .enumerate()
                .map(|(j, &x)| u64::from(inst.tiles[x].top == BIT1) << j)
                .sum()
        })
        .collect()
}
