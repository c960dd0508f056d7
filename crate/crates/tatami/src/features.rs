//! Local structure of tatami tilings: features (bidimers, vortices, loners,
//! vees), the canonical tiling forced by a single bidimer or vortex,
//! diagonal staircases with their flip operation, and constructive
//! enumeration of all tilings with fewer monomers than the grid side.

use thiserror::Error;

use crate::tiling::{Cell, CoverGrid, Tile, TileKind, Tiling};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FeatureError {
    #[error("grid side must be positive, got {0}")]
    BadSide(i32),
    #[error("feature source does not fit inside the {0}x{0} grid")]
    CenterOutOfRange(i32),
    #[error("only bidimers and vortices determine a tiling; loners and vees cannot be placed")]
    NotPlaceable,
    #[error("no {m}-monomer tilings of the {n}x{n} grid exist: parity mismatch or m >= n")]
    EmptyDomain { n: i32, m: i32 },
    #[error("diagonal monomer must sit on exactly one boundary (non-corner)")]
    BadDiagonalMonomer,
    #[error("heading does not run along the monomer's boundary into the grid")]
    BadDiagonalHeading,
    #[error("tiling does not contain this diagonal's monomer-and-staircase pattern")]
    DiagonalMismatch,
}

/// Boundary edges of the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Bottom,
    Left,
    Right,
    Top,
}

/// Diagonal staircase directions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Heading {
    NE,
    NW,
    SE,
    SW,
}

impl Heading {
    pub fn delta(self) -> (i32, i32) {
        match self {
            Heading::NE => (1, 1),
            Heading::NW => (-1, 1),
            Heading::SE => (1, -1),
            Heading::SW => (-1, -1),
        }
    }

    pub fn opposite(self) -> Heading {
        match self {
            Heading::NE => Heading::SW,
            Heading::NW => Heading::SE,
            Heading::SE => Heading::NW,
            Heading::SW => Heading::NE,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FeatureKind {
    HBidimer,
    VBidimer,
    CwVortex,
    CcwVortex,
    Loner,
    Vee,
}

/// A feature: the local tile configuration that acts as a source in a
/// tiling's structure.
///
/// Bidimer centers are lattice points; vortex centers sit at the middle of
/// `cell`, i.e. at half-integer coordinates. Loners and vees are boundary
/// features identified by their side and monomer cell (for a vee, the
/// lower/left monomer of the pair).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Feature {
    Bidimer { horizontal: bool, center: (i32, i32) },
    Vortex { clockwise: bool, cell: Cell },
    Loner { side: Side, cell: Cell },
    Vee { side: Side, cell: Cell },
}

impl Feature {
    pub fn kind(&self) -> FeatureKind {
        match self {
            Feature::Bidimer { horizontal: true, .. } => FeatureKind::HBidimer,
            Feature::Bidimer { horizontal: false, .. } => FeatureKind::VBidimer,
            Feature::Vortex { clockwise: true, .. } => FeatureKind::CwVortex,
            Feature::Vortex { clockwise: false, .. } => FeatureKind::CcwVortex,
            Feature::Loner { .. } => FeatureKind::Loner,
            Feature::Vee { .. } => FeatureKind::Vee,
        }
    }

    /// Feature center in doubled coordinates, so half-integer vortex centers
    /// stay exact.
    pub fn center2(&self) -> (i32, i32) {
        match *self {
            Feature::Bidimer { center: (x, y), .. } => (2 * x, 2 * y),
            Feature::Vortex { cell: (x, y), .. } => (2 * x + 1, 2 * y + 1),
            Feature::Loner { cell: (x, y), .. } => (2 * x + 1, 2 * y + 1),
            Feature::Vee { cell: (x, y), side } => match side {
                Side::Bottom | Side::Top => (2 * x + 2, 2 * y + 1),
                Side::Left | Side::Right => (2 * x + 1, 2 * y + 2),
            },
        }
    }

    fn sort_key(&self) -> (FeatureKind, i32, i32) {
        let (x, y) = self.center2();
        (self.kind(), y, x)
    }
}

/// The tiles a bidimer or vortex source lays down.
pub fn source_tiles(n: i32, f: &Feature) -> Result<Vec<Tile>, FeatureError> {
    let tiles = match *f {
        Feature::Bidimer { horizontal, center: (cx, cy) } => {
            if cx < 1 || cx > n - 1 || cy < 1 || cy > n - 1 {
                return Err(FeatureError::CenterOutOfRange(n));
            }
            if horizontal {
                vec![Tile::hdimer(cx - 1, cy - 1), Tile::hdimer(cx - 1, cy)]
            } else {
                vec![Tile::vdimer(cx - 1, cy - 1), Tile::vdimer(cx, cy - 1)]
            }
        }
        Feature::Vortex { clockwise, cell: (x, y) } => {
            if x < 1 || x > n - 2 || y < 1 || y > n - 2 {
                return Err(FeatureError::CenterOutOfRange(n));
            }
            if clockwise {
                vec![
                    Tile::monomer(x, y),
                    Tile::hdimer(x, y + 1),
                    Tile::vdimer(x + 1, y - 1),
                    Tile::hdimer(x - 1, y - 1),
                    Tile::vdimer(x - 1, y),
                ]
            } else {
                vec![
                    Tile::monomer(x, y),
                    Tile::hdimer(x - 1, y + 1),
                    Tile::vdimer(x + 1, y),
                    Tile::hdimer(x, y - 1),
                    Tile::vdimer(x - 1, y - 1),
                ]
            }
        }
        Feature::Loner { .. } | Feature::Vee { .. } => return Err(FeatureError::NotPlaceable),
    };
    Ok(tiles)
}

/// A boundary-monomer staircase: the monomer plus `length` dimers stepping
/// diagonally to the perpendicular boundary. Flipping slides the monomer to
/// the far end and reorients every dimer in place.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Diagonal {
    n: i32,
    monomer: Cell,
    heading: Heading,
    side: Side,
    // along-boundary and into-grid unit steps; length = dimer count
    along: (i32, i32),
    into: (i32, i32),
    length: i32,
}

impl Diagonal {
    pub fn new(n: i32, monomer: Cell, heading: Heading) -> Result<Diagonal, FeatureError> {
        let (x, y) = monomer;
        let on_bottom = y == 0;
        let on_top = y == n - 1;
        let on_left = x == 0;
        let on_right = x == n - 1;
        let side = match (on_bottom, on_top, on_left, on_right) {
            (true, false, false, false) => Side::Bottom,
            (false, true, false, false) => Side::Top,
            (false, false, true, false) => Side::Left,
            (false, false, false, true) => Side::Right,
            _ => return Err(FeatureError::BadDiagonalMonomer),
        };
        if x < 0 || x >= n || y < 0 || y >= n {
            return Err(FeatureError::BadDiagonalMonomer);
        }
        let (dx, dy) = heading.delta();
        let (along, into) = match side {
            Side::Bottom if dy == 1 => ((dx, 0), (0, 1)),
            Side::Top if dy == -1 => ((dx, 0), (0, -1)),
            Side::Left if dx == 1 => ((0, dy), (1, 0)),
            Side::Right if dx == -1 => ((0, dy), (-1, 0)),
            _ => return Err(FeatureError::BadDiagonalHeading),
        };
        let length = match along {
            (1, 0) => n - 1 - x,
            (-1, 0) => x,
            (0, 1) => n - 1 - y,
            (0, -1) => y,
            _ => unreachable!(),
        };
        debug_assert!(length >= 1);
        Ok(Diagonal { n, monomer, heading, side, along, into, length })
    }

    pub fn n(&self) -> i32 {
        self.n
    }

    pub fn monomer(&self) -> Cell {
        self.monomer
    }

    pub fn heading(&self) -> Heading {
        self.heading
    }

    pub fn side(&self) -> Side {
        self.side
    }

    /// Number of dimers in the staircase.
    pub fn length(&self) -> i32 {
        self.length
    }

    /// Where the monomer lands when the diagonal is flipped.
    pub fn far_end(&self) -> Cell {
        let (x, y) = self.monomer;
        let l = self.length;
        (x + l * (self.along.0 + self.into.0), y + l * (self.along.1 + self.into.1))
    }

    /// The same staircase viewed from its far end.
    pub fn reversed(&self) -> Diagonal {
        Diagonal::new(self.n, self.far_end(), self.heading.opposite())
            .expect("far end of a valid diagonal is a non-corner boundary cell")
    }

    /// Dimers as they lie when the monomer is at `self.monomer`:
    /// perpendicular to the monomer's boundary.
    pub(crate) fn resting_dimers(&self) -> Vec<Tile> {
        (0..self.length)
            .map(|k| {
                let a = self.cell_at(k + 1, k);
                let b = self.cell_at(k + 1, k + 1);
                dimer_covering(a, b)
            })
            .collect()
    }

    /// Dimers as they lie after the flip: parallel to the monomer's original
    /// boundary.
    pub(crate) fn flipped_dimers(&self) -> Vec<Tile> {
        (0..self.length)
            .map(|k| {
                let a = self.cell_at(k, k);
                let b = self.cell_at(k + 1, k);
                dimer_covering(a, b)
            })
            .collect()
    }

    fn cell_at(&self, a: i32, i: i32) -> Cell {
        let (x, y) = self.monomer;
        (x + a * self.along.0 + i * self.into.0, y + a * self.along.1 + i * self.into.1)
    }

    /// Every cell the staircase occupies, in either state.
    pub fn cells(&self) -> Vec<Cell> {
        let mut out = vec![self.monomer];
        for d in self.resting_dimers() {
            out.extend(d.cells());
        }
        out
    }
}

fn dimer_covering(a: Cell, b: Cell) -> Tile {
    let (ax, ay) = a;
    let (bx, by) = b;
    if ax == bx {
        Tile::vdimer(ax, ay.min(by))
    } else {
        debug_assert_eq!(ay, by);
        Tile::hdimer(ax.min(bx), ay)
    }
}

/// Slides the diagonal's monomer to the far end and reorients its dimers.
/// The inverse flip is `flip_diagonal(_, &d.reversed())`.
pub fn flip_diagonal(t: &Tiling, d: &Diagonal) -> Result<Tiling, FeatureError> {
    if d.n != t.n() {
        return Err(FeatureError::DiagonalMismatch);
    }
    let cov = t.cover();
    let monomer = Tile::monomer(d.monomer.0, d.monomer.1);
    if !cov.has_tile(&monomer) {
        return Err(FeatureError::DiagonalMismatch);
    }
    let old = d.resting_dimers();
    for dim in &old {
        if !cov.has_tile(dim) {
            return Err(FeatureError::DiagonalMismatch);
        }
    }
    let mut removed: Vec<Tile> = old;
    removed.push(monomer);
    let mut tiles: Vec<Tile> =
        t.tiles().iter().filter(|tl| !removed.contains(tl)).copied().collect();
    let far = d.far_end();
    tiles.push(Tile::monomer(far.0, far.1));
    tiles.extend(d.flipped_dimers());
    Ok(Tiling::from_tiles_unchecked(t.n(), tiles))
}

/// All individually flippable diagonals: boundary monomers whose full
/// staircase is present and whose flip keeps the tiling tatami.
pub fn find_flippable_diagonals(t: &Tiling) -> Vec<Diagonal> {
    let cov = t.cover();
    let mut out = Vec::new();
    for tile in t.tiles() {
        if tile.kind != TileKind::Monomer {
            continue;
        }
        for heading in [Heading::NE, Heading::NW, Heading::SE, Heading::SW] {
            let Ok(d) = Diagonal::new(t.n(), (tile.x, tile.y), heading) else {
                continue;
            };
            if !d.resting_dimers().iter().all(|dim| cov.has_tile(dim)) {
                continue;
            }
            let flipped = flip_diagonal(t, &d).expect("staircase verified present");
            if flipped.validate_tatami().is_empty() {
                out.push(d);
            }
        }
    }
    out
}

/// Builds the unique tatami tiling whose only feature is the given bidimer
/// or vortex.
pub fn place_feature(n: i32, f: &Feature) -> Result<Tiling, FeatureError> {
    if n < 1 {
        return Err(FeatureError::BadSide(n));
    }
    let source = source_tiles(n, f)?;
    let solutions = SingleFeatureSearch::new(n, &source).run();
    assert_eq!(
        solutions.len(),
        1,
        "a bidimer or vortex source must force exactly one loner-free tiling"
    );
    Ok(solutions.into_iter().next().unwrap())
}

/// Streams the `2^d` tilings reachable from the single-feature tiling by
/// flipping subsets of its `d` flippable diagonals.
pub fn enumerate_with_feature(n: i32, f: &Feature) -> Result<FlipSubsets, FeatureError> {
    let base = place_feature(n, f)?;
    let diagonals = find_flippable_diagonals(&base);
    assert!(diagonals.len() < 64);
    Ok(FlipSubsets { base, diagonals, next: 0 })
}

pub struct FlipSubsets {
    base: Tiling,
    diagonals: Vec<Diagonal>,
    next: u64,
}

impl FlipSubsets {
    pub fn diagonal_count(&self) -> usize {
        self.diagonals.len()
    }
}

impl Iterator for FlipSubsets {
    type Item = Tiling;

    fn next(&mut self) -> Option<Tiling> {
        if self.next >= 1u64 << self.diagonals.len() {
            return None;
        }
        let mask = self.next;
        self.next += 1;
        let mut t = self.base.clone();
        for (i, d) in self.diagonals.iter().enumerate() {
            if mask & (1 << i) != 0 {
                t = flip_diagonal(&t, d).expect("diagonals of a single-feature tiling flip independently");
            }
        }
        Some(t)
    }
}

/// Streams every `n x n` tatami tiling with exactly `m < n` monomers by
/// walking all bidimer and vortex positions at the matching boundary
/// distance. Rejects impossible `(n, m)` outright, as opposed to returning
/// an empty stream.
pub fn enumerate_class(n: i32, m: i32) -> Result<ClassEnumeration, FeatureError> {
    if n < 1 {
        return Err(FeatureError::BadSide(n));
    }
    if m < 0 || m >= n || (n - m) % 2 != 0 {
        return Err(FeatureError::EmptyDomain { n, m });
    }
    let features = class_features(n, m);
    Ok(ClassEnumeration { n, features: features.into_iter(), current: None })
}

pub struct ClassEnumeration {
    n: i32,
    features: std::vec::IntoIter<Feature>,
    current: Option<FlipSubsets>,
}

impl Iterator for ClassEnumeration {
    type Item = Tiling;

    fn next(&mut self) -> Option<Tiling> {
        loop {
            if let Some(cur) = &mut self.current {
                if let Some(t) = cur.next() {
                    return Some(t);
                }
            }
            let f = self.features.next()?;
            self.current =
                Some(enumerate_with_feature(self.n, &f).expect("ring positions are in range"));
        }
    }
}

/// Walks a square ring `min(x, y, hi+lo-x, hi+lo-y) = lo` counterclockwise
/// from its bottom-left corner: up the left edge, across the top, down the
/// right, back along the bottom.
fn ring_walk(lo: i32, hi: i32) -> Vec<(i32, i32)> {
    if lo == hi {
        return vec![(lo, lo)];
    }
    let mut out = Vec::with_capacity(4 * (hi - lo) as usize);
    for y in lo..=hi {
        out.push((lo, y));
    }
    for x in lo + 1..=hi {
        out.push((x, hi));
    }
    for y in (lo..hi).rev() {
        out.push((hi, y));
    }
    for x in (lo + 1..hi).rev() {
        out.push((x, lo));
    }
    out
}

/// All bidimer and vortex placements producing exactly `m` monomers, in
/// deterministic order: bidimers first (horizontal before vertical), then
/// vortices (counterclockwise before clockwise), ring-walked.
fn class_features(n: i32, m: i32) -> Vec<Feature> {
    let k = (n - m) / 2;
    let mut out = Vec::new();
    for center in ring_walk(k, n - k) {
        out.push(Feature::Bidimer { horizontal: true, center });
        out.push(Feature::Bidimer { horizontal: false, center });
    }
    if m >= 1 {
        for cell in ring_walk(k, n - 1 - k) {
            out.push(Feature::Vortex { clockwise: false, cell });
            out.push(Feature::Vortex { clockwise: true, cell });
        }
    }
    out
}

/// Reports every feature present in a complete tatami tiling: bidimers,
/// vortices, vees (adjacent boundary monomer pairs) and loners (a boundary
/// monomer flanked along its edge by one perpendicular and one in-line
/// dimer).
pub fn detect_features(t: &Tiling) -> Vec<Feature> {
    let n = t.n();
    let cov = t.cover();
    let mut out = Vec::new();
    for tile in t.tiles() {
        match tile.kind {
            TileKind::HDimer => {
                if cov.has_tile(&Tile::hdimer(tile.x, tile.y + 1)) {
                    out.push(Feature::Bidimer { horizontal: true, center: (tile.x + 1, tile.y + 1) });
                }
            }
            TileKind::VDimer => {
                if cov.has_tile(&Tile::vdimer(tile.x + 1, tile.y)) {
                    out.push(Feature::Bidimer { horizontal: false, center: (tile.x + 1, tile.y + 1) });
                }
            }
            TileKind::Monomer => {
                let (x, y) = (tile.x, tile.y);
                if let Some(v) = vortex_at(&cov, n, (x, y)) {
                    out.push(v);
                }
                // vees: report from the lower/left monomer of the pair
                if cov.has_tile(&Tile::monomer(x + 1, y)) {
                    if y == 0 {
                        out.push(Feature::Vee { side: Side::Bottom, cell: (x, y) });
                    } else if y == n - 1 {
                        out.push(Feature::Vee { side: Side::Top, cell: (x, y) });
                    }
                }
                if cov.has_tile(&Tile::monomer(x, y + 1)) {
                    if x == 0 {
                        out.push(Feature::Vee { side: Side::Left, cell: (x, y) });
                    } else if x == n - 1 {
                        out.push(Feature::Vee { side: Side::Right, cell: (x, y) });
                    }
                }
                if let Some(l) = loner_at(&cov, n, (x, y)) {
                    out.push(l);
                }
            }
        }
    }
    out.sort_by_key(|f| f.sort_key());
    out
}

fn vortex_at(cov: &CoverGrid, n: i32, (x, y): Cell) -> Option<Feature> {
    if x < 1 || x > n - 2 || y < 1 || y > n - 2 {
        return None;
    }
    for clockwise in [false, true] {
        let f = Feature::Vortex { clockwise, cell: (x, y) };
        let tiles = source_tiles(n, &f).expect("center bounds checked");
        if tiles.iter().all(|tl| cov.has_tile(tl)) {
            return Some(f);
        }
    }
    None
}

/// Classifies the flanking dimers of a non-corner boundary monomer. A loner
/// has exactly one perpendicular and one in-line flank; a monomer inside a
/// running bond has two perpendicular flanks.
fn loner_at(cov: &CoverGrid, n: i32, (x, y): Cell) -> Option<Feature> {
    let (side, flanks) = match (x, y) {
        (x, 0) if x >= 1 && x <= n - 2 => (Side::Bottom, [(x - 1, 0), (x + 1, 0)]),
        (x, y) if y == n - 1 && x >= 1 && x <= n - 2 => (Side::Top, [(x - 1, y), (x + 1, y)]),
        (0, y) if y >= 1 && y <= n - 2 => (Side::Left, [(0, y - 1), (0, y + 1)]),
        (x, y) if x == n - 1 && y >= 1 && y <= n - 2 => (Side::Right, [(x, y - 1), (x, y + 1)]),
        _ => return None,
    };
    let perpendicular = match side {
        Side::Bottom | Side::Top => TileKind::VDimer,
        Side::Left | Side::Right => TileKind::HDimer,
    };
    let mut perp = 0;
    let mut inline = 0;
    for flank in flanks {
        match cov.tile(flank)?.kind {
            TileKind::Monomer => return None, // part of a vee
            k if k == perpendicular => perp += 1,
            _ => inline += 1,
        }
    }
    (perp == 1 && inline == 1).then_some(Feature::Loner { side, cell: (x, y) })
}

/// Backtracking fill around a pre-placed source, pruned so that no second
/// feature and no loner can appear. The unique surviving completion is the
/// canonical single-feature tiling.
struct SingleFeatureSearch {
    n: i32,
    cover: Vec<u32>,
    tiles: Vec<Tile>,
}

const FREE: u32 = u32::MAX;

impl SingleFeatureSearch {
    fn new(n: i32, source: &[Tile]) -> SingleFeatureSearch {
        let mut s = SingleFeatureSearch {
            n,
            cover: vec![FREE; (n * n) as usize],
            tiles: Vec::new(),
        };
        for t in source {
            for (x, y) in t.cells() {
                assert!(x >= 0 && x < n && y >= 0 && y < n);
                let i = (y * n + x) as usize;
                assert_eq!(s.cover[i], FREE, "source tiles overlap");
                s.cover[i] = s.tiles.len() as u32;
            }
            s.tiles.push(*t);
        }
        s
    }

    fn run(mut self) -> Vec<Tiling> {
        let mut out = Vec::new();
        self.search(0, &mut out);
        out
    }

    fn search(&mut self, from: usize, out: &mut Vec<Tiling>) {
        let mut cur = from;
        while cur < self.cover.len() && self.cover[cur] != FREE {
            cur += 1;
        }
        if cur == self.cover.len() {
            out.push(Tiling::from_tiles_unchecked(self.n, self.tiles.clone()));
            return;
        }
        let (x, y) = (cur as i32 % self.n, cur as i32 / self.n);
        for kind in [TileKind::Monomer, TileKind::HDimer, TileKind::VDimer] {
            let tile = Tile { kind, x, y };
            if self.place_checked(&tile) {
                self.search(cur + 1, out);
                self.unplace(&tile);
            }
        }
    }

    fn at(&self, (x, y): Cell) -> Option<&Tile> {
        if x < 0 || x >= self.n || y < 0 || y >= self.n {
            return None;
        }
        match self.cover[(y * self.n + x) as usize] {
            FREE => None,
            i => Some(&self.tiles[i as usize]),
        }
    }

    fn covered(&self, (x, y): Cell) -> bool {
        self.at((x, y)).is_some()
    }

    fn place_checked(&mut self, tile: &Tile) -> bool {
        let n = self.n;
        let cells: Vec<Cell> = tile.cells().collect();
        for &(x, y) in &cells {
            if x < 0 || x >= n || y < 0 || y >= n {
                return false;
            }
            if self.covered((x, y)) {
                return false;
            }
        }
        if tile.kind == TileKind::Monomer {
            let (x, y) = (tile.x, tile.y);
            let interior = x > 0 && x < n - 1 && y > 0 && y < n - 1;
            if interior {
                return false; // interior monomers only occur inside the source
            }
            // adjacent boundary monomers would form a vee
            for nb in [(x - 1, y), (x + 1, y), (x, y - 1), (x, y + 1)] {
                if self.at(nb).is_some_and(|t| t.kind == TileKind::Monomer) {
                    return false;
                }
            }
        } else if self.completes_bidimer(tile) {
            return false;
        }
        let id = self.tiles.len() as u32;
        for &(x, y) in &cells {
            self.cover[(y * n + x) as usize] = id;
        }
        self.tiles.push(*tile);
        if !self.tatami_ok_around(&cells) || !self.loners_ok_around(&cells) {
            self.unplace(tile);
            return false;
        }
        true
    }

    fn unplace(&mut self, tile: &Tile) {
        let popped = self.tiles.pop();
        debug_assert_eq!(popped.as_ref(), Some(tile));
        for (x, y) in tile.cells() {
            self.cover[(y * self.n + x) as usize] = FREE;
        }
    }

    fn completes_bidimer(&self, tile: &Tile) -> bool {
        match tile.kind {
            TileKind::HDimer => [(tile.x, tile.y - 1), (tile.x, tile.y + 1)]
                .iter()
                .any(|&(x, y)| self.at((x, y)) == Some(&Tile::hdimer(x, y))),
            TileKind::VDimer => [(tile.x - 1, tile.y), (tile.x + 1, tile.y)]
                .iter()
                .any(|&(x, y)| self.at((x, y)) == Some(&Tile::vdimer(x, y))),
            TileKind::Monomer => false,
        }
    }

    fn tatami_ok_around(&self, cells: &[Cell]) -> bool {
        let n = self.n;
        let id = |x: i32, y: i32| self.cover[(y * n + x) as usize];
        for &(x, y) in cells {
            for (px, py) in [(x, y), (x + 1, y), (x, y + 1), (x + 1, y + 1)] {
                if px < 1 || px > n - 1 || py < 1 || py > n - 1 {
                    continue;
                }
                let quad = [id(px - 1, py - 1), id(px, py - 1), id(px - 1, py), id(px, py)];
                if quad.contains(&FREE) {
                    continue;
                }
                if quad[0] != quad[1]
                    && quad[0] != quad[2]
                    && quad[0] != quad[3]
                    && quad[1] != quad[2]
                    && quad[1] != quad[3]
                    && quad[2] != quad[3]
                {
                    return false;
                }
            }
        }
        true
    }

    /// Re-examines every boundary monomer whose flanks may have just been
    /// decided; a loner means this branch is a flipped variant, not the
    /// canonical tiling.
    fn loners_ok_around(&self, cells: &[Cell]) -> bool {
        for &(x, y) in cells {
            let mut candidates = vec![(x, y)];
            candidates.extend([(x - 1, y), (x + 1, y), (x, y - 1), (x, y + 1)]);
            for c in candidates {
                if self.at(c).is_some_and(|t| t.kind == TileKind::Monomer && t.anchor() == c)
                    && self.is_decided_loner(c)
                {
                    return false;
                }
            }
        }
        true
    }

    fn is_decided_loner(&self, (x, y): Cell) -> bool {
        let n = self.n;
        let (side, flanks) = match (x, y) {
            (x, 0) if x >= 1 && x <= n - 2 => (Side::Bottom, [(x - 1, 0), (x + 1, 0)]),
            (x, y) if y == n - 1 && x >= 1 && x <= n - 2 => (Side::Top, [(x - 1, y), (x + 1, y)]),
            (0, y) if y >= 1 && y <= n - 2 => (Side::Left, [(0, y - 1), (0, y + 1)]),
            (x, y) if x == n - 1 && y >= 1 && y <= n - 2 => (Side::Right, [(x, y - 1), (x, y + 1)]),
            _ => return false,
        };
        let perpendicular = match side {
            Side::Bottom | Side::Top => TileKind::VDimer,
            Side::Left | Side::Right => TileKind::HDimer,
        };
        let mut perp = 0;
        let mut inline = 0;
        for flank in flanks {
            match self.at(flank) {
                None => return false, // not decided yet
                Some(t) if t.kind == TileKind::Monomer => return false,
                Some(t) if t.kind == perpendicular => perp += 1,
                Some(_) => inline += 1,
            }
        }
        perp == 1 && inline == 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::count_tilings;
    use crate::oracle;
    use num_bigint::BigUint;
    use std::collections::{BTreeMap, HashSet};

    /// Normalizes a feature center (doubled coordinates) into the octant
    /// `y <= x <= n` by rotations and reflections, then returns the expected
    /// monomer and flippable-diagonal counts at that position.
    fn expected_counts(n: i32, f: &Feature) -> (i32, i32) {
        let (mut x2, mut y2) = f.center2();
        let full = 2 * n;
        let mut best: Option<(i32, i32)> = None;
        for _ in 0..4 {
            for (cx, cy) in [(x2, y2), (y2, x2)] {
                if cy <= cx && cx <= n {
                    best = Some((cx, cy));
                }
            }
            let (rx, ry) = (full - y2, x2);
            x2 = rx;
            y2 = ry;
        }
        let (x2, y2) = best.expect("every center has a representative in the octant");
        let m = match f {
            Feature::Bidimer { .. } => n - y2,
            Feature::Vortex { .. } => n - y2 + 1,
            _ => unreachable!(),
        };
        let d = if y2 < x2 {
            n - y2 - 2
        } else if x2 < n {
            n - y2 - 1
        } else {
            0
        };
        (m, d)
    }

    #[test]
    fn forced_tiling_for_corner_bidimer() {
        // worked out by hand for the 6x6 grid, bidimer centered at (2, 2)
        let f = Feature::Bidimer { horizontal: false, center: (2, 2) };
        let t = place_feature(6, &f).unwrap();
        assert!(t.validate_tatami().is_empty());
        assert_eq!(t.monomer_count(), 2);
        assert!(t.tiles().contains(&Tile::monomer(4, 0)));
        assert!(t.tiles().contains(&Tile::monomer(0, 5)));
        assert!(t.tiles().contains(&Tile::vdimer(1, 1)));
        assert!(t.tiles().contains(&Tile::vdimer(2, 1)));
        assert_eq!(detect_features(&t), vec![f]);
        assert_eq!(find_flippable_diagonals(&t).len(), 1);
    }

    #[test]
    fn centered_bidimer_forces_everything() {
        for n in [2, 4, 6, 8] {
            for horizontal in [false, true] {
                let f = Feature::Bidimer { horizontal, center: (n / 2, n / 2) };
                let t = place_feature(n, &f).unwrap();
                assert_eq!(t.monomer_count(), 0);
                assert!(find_flippable_diagonals(&t).is_empty());
            }
        }
    }

    #[test]
    fn centered_vortex_on_odd_grids() {
        for n in [3, 5, 7] {
            for clockwise in [false, true] {
                let f = Feature::Vortex { clockwise, cell: ((n - 1) / 2, (n - 1) / 2) };
                let t = place_feature(n, &f).unwrap();
                assert_eq!(t.monomer_count(), 1);
                assert!(find_flippable_diagonals(&t).is_empty());
                assert_eq!(detect_features(&t), vec![f]);
            }
        }
    }

    #[test]
    fn rejects_bad_placements() {
        let center = Feature::Bidimer { horizontal: true, center: (0, 2) };
        assert_eq!(place_feature(4, &center), Err(FeatureError::CenterOutOfRange(4)));
        let loner = Feature::Loner { side: Side::Bottom, cell: (1, 0) };
        assert_eq!(place_feature(4, &loner), Err(FeatureError::NotPlaceable));
    }

    #[test]
    fn monomer_and_diagonal_counts_match_distance_formulas() {
        for n in 2..=9 {
            for m in (0..n).filter(|m| (n - m) % 2 == 0) {
                for f in class_features(n, m) {
                    let t = place_feature(n, &f).unwrap();
                    let (want_m, want_d) = expected_counts(n, &f);
                    assert_eq!(want_m, m);
                    assert_eq!(t.monomer_count() as i32, m, "n={n} {f:?}");
                    assert_eq!(
                        find_flippable_diagonals(&t).len() as i32,
                        want_d,
                        "n={n} {f:?}"
                    );
                    assert!(t.validate_tatami().is_empty());
                }
            }
        }
    }

    #[test]
    fn flips_are_involutions_and_preserve_monomers() {
        let f = Feature::Bidimer { horizontal: false, center: (2, 2) };
        let t = place_feature(8, &f).unwrap();
        for d in find_flippable_diagonals(&t) {
            let flipped = flip_diagonal(&t, &d).unwrap();
            assert!(flipped.validate_tatami().is_empty());
            assert_eq!(flipped.monomer_count(), t.monomer_count());
            assert_ne!(flipped, t);
            let back = flip_diagonal(&flipped, &d.reversed()).unwrap();
            assert_eq!(back, t);
            // the resting pattern is gone, so the same flip no longer applies
            assert_eq!(flip_diagonal(&flipped, &d), Err(FeatureError::DiagonalMismatch));
        }
    }

    #[test]
    fn base_diagonal_flip_lands_where_expected() {
        // monomer at (x0, 0) heading NE lands at (n-1, n-1-x0)
        let f = Feature::Bidimer { horizontal: false, center: (2, 2) };
        let t = place_feature(6, &f).unwrap();
        let d = Diagonal::new(6, (4, 0), Heading::NE).unwrap();
        let flipped = flip_diagonal(&t, &d).unwrap();
        assert!(flipped.tiles().contains(&Tile::monomer(5, 1)));
        assert_eq!(d.far_end(), (5, 1));
    }

    #[test]
    fn enumerate_with_feature_counts() {
        let f = Feature::Bidimer { horizontal: false, center: (6, 6) };
        let gen = enumerate_with_feature(12, &f).unwrap();
        assert_eq!(gen.count(), 1);
    }

    #[test]
    fn class_enumeration_matches_closed_form() {
        for n in 2..=8 {
            for m in (0..n).filter(|m| (n - m) % 2 == 0) {
                let mut seen = HashSet::new();
                for t in enumerate_class(n, m).unwrap() {
                    assert!(t.validate_tatami().is_empty());
                    assert_eq!(t.monomer_count() as i32, m);
                    assert!(seen.insert(t.encode()));
                }
                assert_eq!(
                    BigUint::from(seen.len() as u64),
                    count_tilings(n, m),
                    "n={n} m={m}"
                );
            }
        }
    }

    #[test]
    fn class_enumeration_rejects_empty_domains() {
        assert!(matches!(
            enumerate_class(5, 2),
            Err(FeatureError::EmptyDomain { n: 5, m: 2 })
        ));
        assert!(matches!(enumerate_class(4, 4), Err(FeatureError::EmptyDomain { .. })));
        assert!(matches!(enumerate_class(4, 6), Err(FeatureError::EmptyDomain { .. })));
    }

    #[test]
    fn class_enumeration_matches_oracle() {
        for n in 2..=5 {
            let mut by_m: BTreeMap<i32, HashSet<String>> = BTreeMap::new();
            for t in oracle::enumerate_all(n) {
                by_m.entry(t.monomer_count() as i32).or_default().insert(t.encode());
            }
            for m in (0..n).filter(|m| (n - m) % 2 == 0) {
                let got: HashSet<String> =
                    enumerate_class(n, m).unwrap().map(|t| t.encode()).collect();
                assert_eq!(Some(&got), by_m.get(&m), "n={n} m={m}");
            }
        }
    }

    #[test]
    fn every_class_tiling_reports_one_source_feature() {
        for n in 2..=7 {
            for m in (0..n).filter(|m| (n - m) % 2 == 0) {
                for t in enumerate_class(n, m).unwrap() {
                    let feats = detect_features(&t);
                    let sources: Vec<_> = feats
                        .iter()
                        .filter(|f| {
                            matches!(f, Feature::Bidimer { .. } | Feature::Vortex { .. })
                        })
                        .collect();
                    assert_eq!(sources.len(), 1, "n={n} m={m} {feats:?}");
                    assert!(
                        !feats.iter().any(|f| matches!(f, Feature::Vee { .. })),
                        "n={n} m={m} {feats:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn detect_reports_nothing_on_running_bond() {
        // horizontal running bond, monomer rows at odd heights
        let n = 6;
        let mut tiles = Vec::new();
        for y in 0..n {
            if y % 2 == 0 {
                for x in (0..n).step_by(2) {
                    tiles.push(Tile::hdimer(x as i32, y));
                }
            } else {
                tiles.push(Tile::monomer(0, y));
                for x in (1..n - 2).step_by(2) {
                    tiles.push(Tile::hdimer(x as i32, y));
                }
                tiles.push(Tile::monomer(n - 1, y));
            }
        }
        let t = Tiling::new(n, tiles).unwrap();
        assert!(t.validate_tatami().is_empty());
        assert_eq!(detect_features(&t), vec![]);
        // both staircases of every non-corner boundary monomer are present
        assert_eq!(find_flippable_diagonals(&t).len(), 2 * (n as usize - 2));
    }

    #[test]
    fn diagonal_construction_errors() {
        assert!(Diagonal::new(6, (0, 0), Heading::NE).is_err()); // corner
        assert!(Diagonal::new(6, (2, 2), Heading::NE).is_err()); // interior
        assert!(Diagonal::new(6, (2, 0), Heading::SE).is_err()); // points outward
    }
}
