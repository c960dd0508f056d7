//! Grid and tiling data model: tiles, the tatami condition, symmetry
//! transforms, and the `tatami v1` text format.
//!
//! Coordinates are 0-based with the origin at the bottom left; a cell is
//! addressed by the lattice point at its bottom-left corner.

use std::fmt::Write as _;
use thiserror::Error;

/// A grid cell `(x, y)`.
pub type Cell = (i32, i32);

/// Tile shapes. The discriminant order matches the letters `H < M < V`
/// used by the canonical text encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TileKind {
    /// Dimer covering `(x, y)` and `(x+1, y)`.
    HDimer,
    /// Single cell `(x, y)`.
    Monomer,
    /// Dimer covering `(x, y)` and `(x, y+1)`.
    VDimer,
}

impl TileKind {
    pub fn letter(self) -> char {
        match self {
            TileKind::HDimer => 'H',
            TileKind::Monomer => 'M',
            TileKind::VDimer => 'V',
        }
    }
}

/// A tile anchored at its minimum covered cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Tile {
    pub kind: TileKind,
    pub x: i32,
    pub y: i32,
}

impl Tile {
    pub fn monomer(x: i32, y: i32) -> Tile {
        Tile { kind: TileKind::Monomer, x, y }
    }

    pub fn hdimer(x: i32, y: i32) -> Tile {
        Tile { kind: TileKind::HDimer, x, y }
    }

    pub fn vdimer(x: i32, y: i32) -> Tile {
        Tile { kind: TileKind::VDimer, x, y }
    }

    pub fn anchor(&self) -> Cell {
        (self.x, self.y)
    }

    /// Cells covered by the tile, anchor first.
    pub fn cells(&self) -> impl Iterator<Item = Cell> {
        let second = match self.kind {
            TileKind::Monomer => None,
            TileKind::HDimer => Some((self.x + 1, self.y)),
            TileKind::VDimer => Some((self.x, self.y + 1)),
        };
        std::iter::once((self.x, self.y)).chain(second)
    }
}

// Canonical order: by row, then column, then kind letter.
impl Ord for Tile {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.y, self.x, self.kind).cmp(&(other.y, other.x, other.kind))
    }
}

impl PartialOrd for Tile {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TilingError {
    #[error("grid side must be positive, got {0}")]
    BadSide(i32),
    #[error("tile {0:?} extends outside the {1}x{1} grid")]
    OutOfBounds(Tile, i32),
    #[error("tiles overlap at cell ({0}, {1})")]
    Overlap(i32, i32),
    #[error("cell ({0}, {1}) is not covered")]
    Incomplete(i32, i32),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line 1 must be exactly `tatami v1`")]
    BadMagic,
    #[error("line 2 must be `n <side>` with a positive decimal side")]
    BadSize,
    #[error("line {0}: malformed tile line {1:?}, expected `M|H|V <x> <y>`")]
    BadTileLine(usize, String),
    #[error(transparent)]
    Structure(#[from] TilingError),
}

/// An interior lattice point where four distinct tiles meet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TatamiViolation {
    pub point: (i32, i32),
}

/// A complete, non-overlapping tiling of an `n x n` grid.
///
/// Tilings are immutable once constructed and hold their tiles in canonical
/// `(y, x, kind)` order, so equality and hashing are structural.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tiling {
    n: i32,
    tiles: Vec<Tile>,
}

impl Tiling {
    /// Builds a tiling, rejecting out-of-bounds tiles, overlaps and
    /// uncovered cells. The tatami condition is *not* enforced here; see
    /// [`Tiling::validate_tatami`].
    pub fn new(n: i32, mut tiles: Vec<Tile>) -> Result<Tiling, TilingError> {
        if n < 1 {
            return Err(TilingError::BadSide(n));
        }
        tiles.sort_unstable();
        let t = Tiling { n, tiles };
        t.check_structure()?;
        Ok(t)
    }

    /// Constructor for internally produced tilings that are valid by
    /// construction.
    pub(crate) fn from_tiles_unchecked(n: i32, mut tiles: Vec<Tile>) -> Tiling {
        tiles.sort_unstable();
        let t = Tiling { n, tiles };
        debug_assert_eq!(t.check_structure(), Ok(()));
        t
    }

    fn check_structure(&self) -> Result<(), TilingError> {
        let n = self.n;
        let mut covered = vec![false; (n * n) as usize];
        for tile in &self.tiles {
            for (x, y) in tile.cells() {
                if x < 0 || x >= n || y < 0 || y >= n {
                    return Err(TilingError::OutOfBounds(*tile, n));
                }
                let i = (y * n + x) as usize;
                if covered[i] {
                    return Err(TilingError::Overlap(x, y));
                }
                covered[i] = true;
            }
        }
        if let Some(i) = covered.iter().position(|c| !c) {
            let i = i as i32;
            return Err(TilingError::Incomplete(i % n, i / n));
        }
        Ok(())
    }

    pub fn n(&self) -> i32 {
        self.n
    }

    pub fn tiles(&self) -> &[Tile] {
        &self.tiles
    }

    pub fn monomer_count(&self) -> usize {
        self.tiles.iter().filter(|t| t.kind == TileKind::Monomer).count()
    }

    pub(crate) fn cover(&self) -> CoverGrid<'_> {
        let mut idx = vec![u32::MAX; (self.n * self.n) as usize];
        for (i, tile) in self.tiles.iter().enumerate() {
            for (x, y) in tile.cells() {
                idx[(y * self.n + x) as usize] = i as u32;
            }
        }
        CoverGrid { n: self.n, tiling: self, idx }
    }

    /// All interior lattice points where four distinct tiles meet; empty iff
    /// the tiling satisfies the tatami condition.
    pub fn validate_tatami(&self) -> Vec<TatamiViolation> {
        let cov = self.cover();
        let mut out = Vec::new();
        for py in 1..self.n {
            for px in 1..self.n {
                let a = cov.tile_index((px - 1, py - 1));
                let b = cov.tile_index((px, py - 1));
                let c = cov.tile_index((px - 1, py));
                let d = cov.tile_index((px, py));
                if a != b && a != c && a != d && b != c && b != d && c != d {
                    out.push(TatamiViolation { point: (px, py) });
                }
            }
        }
        out
    }

    /// Counterclockwise quarter turn: cell `(x, y)` maps to `(n-1-y, x)`.
    pub fn rotate90(&self) -> Tiling {
        let n = self.n;
        let tiles = self
            .tiles
            .iter()
            .map(|t| match t.kind {
                TileKind::Monomer => Tile::monomer(n - 1 - t.y, t.x),
                TileKind::HDimer => Tile::vdimer(n - 1 - t.y, t.x),
                TileKind::VDimer => Tile::hdimer(n - 2 - t.y, t.x),
            })
            .collect();
        Tiling::from_tiles_unchecked(n, tiles)
    }

    /// Mirror across the vertical center line: cell `(x, y)` maps to
    /// `(n-1-x, y)`.
    pub fn reflect(&self) -> Tiling {
        let n = self.n;
        let tiles = self
            .tiles
            .iter()
            .map(|t| match t.kind {
                TileKind::Monomer => Tile::monomer(n - 1 - t.x, t.y),
                TileKind::HDimer => Tile::hdimer(n - 2 - t.x, t.y),
                TileKind::VDimer => Tile::vdimer(n - 1 - t.x, t.y),
            })
            .collect();
        Tiling::from_tiles_unchecked(n, tiles)
    }

    /// Canonical `tatami v1` text form. Byte-identical for equal tilings.
    pub fn encode(&self) -> String {
        let mut s = String::new();
        writeln!(s, "tatami v1").unwrap();
        writeln!(s, "n {}", self.n).unwrap();
        for t in &self.tiles {
            writeln!(s, "{} {} {}", t.kind.letter(), t.x, t.y).unwrap();
        }
        s
    }

    /// Parses the `tatami v1` text form. Tile order in the input is not
    /// significant; the result is canonicalized.
    pub fn decode(text: &str) -> Result<Tiling, ParseError> {
        let mut lines = text.lines();
        if lines.next() != Some("tatami v1") {
            return Err(ParseError::BadMagic);
        }
        let n = lines
            .next()
            .and_then(|l| l.strip_prefix("n "))
            .and_then(|v| v.parse::<i32>().ok())
            .filter(|&v| v >= 1)
            .ok_or(ParseError::BadSize)?;
        let mut tiles = Vec::new();
        for (i, line) in lines.enumerate() {
            let bad = || ParseError::BadTileLine(i + 3, line.to_string());
            let mut parts = line.split(' ');
            let kind = match parts.next() {
                Some("M") => TileKind::Monomer,
                Some("H") => TileKind::HDimer,
                Some("V") => TileKind::VDimer,
                _ => return Err(bad()),
            };
            let x = parts.next().and_then(|v| v.parse::<i32>().ok()).ok_or_else(bad)?;
            let y = parts.next().and_then(|v| v.parse::<i32>().ok()).ok_or_else(bad)?;
            if parts.next().is_some() {
                return Err(bad());
            }
            tiles.push(Tile { kind, x, y });
        }
        Ok(Tiling::new(n, tiles)?)
    }
}

/// Dense cell-to-tile lookup for one tiling.
pub(crate) struct CoverGrid<'a> {
    n: i32,
    tiling: &'a Tiling,
    idx: Vec<u32>,
}

impl<'a> CoverGrid<'a> {
    pub fn tile_index(&self, (x, y): Cell) -> Option<usize> {
        if x < 0 || x >= self.n || y < 0 || y >= self.n {
            return None;
        }
        match self.idx[(y * self.n + x) as usize] {
            u32::MAX => None,
            i => Some(i as usize),
        }
    }

    pub fn tile(&self, c: Cell) -> Option<&'a Tile> {
        self.tile_index(c).map(|i| &self.tiling.tiles[i])
    }

    /// True when both cells exist and belong to one tile.
    pub fn same_tile(&self, a: Cell, b: Cell) -> bool {
        match (self.tile_index(a), self.tile_index(b)) {
            (Some(i), Some(j)) => i == j,
            _ => false,
        }
    }

    /// Exact-tile membership test.
    pub fn has_tile(&self, t: &Tile) -> bool {
        self.tile((t.x, t.y)) == Some(t)
    }
}
