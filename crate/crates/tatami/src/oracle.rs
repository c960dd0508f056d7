//! Brute-force backtracking enumeration of every tatami tiling of an
//! `n x n` grid. This is the ground truth that the closed-form counters and
//! the structured generators are checked against at small `n` (practical up
//! to about `n = 7`).

use std::collections::BTreeMap;

use crate::tiling::{Tile, TileKind, Tiling};

/// Streams every complete tatami tiling of the `n x n` grid exactly once,
/// in the deterministic order induced by scanning cells bottom-left
/// row-major and trying monomer, then horizontal dimer, then vertical dimer
/// at the first uncovered cell.
pub fn enumerate_all(n: i32) -> Enumerator {
    Enumerator::new(n, None)
}

/// Like [`enumerate_all`], but abandons branches as soon as the number of
/// monomers exceeds `budget`.
pub fn enumerate_with_monomer_budget(n: i32, budget: usize) -> Enumerator {
    Enumerator::new(n, Some(budget))
}

/// Tiling counts keyed by monomer count; absent keys mean zero.
pub fn count_by_monomers(n: i32) -> BTreeMap<usize, u64> {
    let mut out = BTreeMap::new();
    for t in enumerate_all(n) {
        *out.entry(t.monomer_count()).or_insert(0) += 1;
    }
    out
}

const EMPTY: u32 = u32::MAX;
const KINDS: [TileKind; 3] = [TileKind::Monomer, TileKind::HDimer, TileKind::VDimer];

pub struct Enumerator {
    n: i32,
    budget: Option<usize>,
    cover: Vec<u32>,
    tiles: Vec<Tile>,
    monomers: usize,
    /// One frame per placed tile: (anchor cell index, kind rank placed).
    stack: Vec<(usize, u8)>,
    cursor: usize,
    next_kind: u8,
    done: bool,
}

impl Enumerator {
    fn new(n: i32, budget: Option<usize>) -> Enumerator {
        assert!(n >= 1, "grid side must be positive");
        Enumerator {
            n,
            budget,
            cover: vec![EMPTY; (n * n) as usize],
            tiles: Vec::new(),
            monomers: 0,
            stack: Vec::new(),
            cursor: 0,
            next_kind: 0,
            done: false,
        }
    }

    fn cell(&self, idx: usize) -> (i32, i32) {
        (idx as i32 % self.n, idx as i32 / self.n)
    }

    /// Any interior lattice point whose four cells just became fully covered
    /// must not have four distinct tiles.
    fn tatami_ok_around(&self, cells: &[(i32, i32)]) -> bool {
        let n = self.n;
        let at = |x: i32, y: i32| self.cover[(y * n + x) as usize];
        for &(x, y) in cells {
            for (px, py) in [(x, y), (x + 1, y), (x, y + 1), (x + 1, y + 1)] {
                if px < 1 || px > n - 1 || py < 1 || py > n - 1 {
                    continue;
                }
                let quad = [
                    at(px - 1, py - 1),
                    at(px, py - 1),
                    at(px - 1, py),
                    at(px, py),
                ];
                if quad.contains(&EMPTY) {
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

    fn try_place(&mut self, idx: usize, kind_rank: u8) -> bool {
        let n = self.n;
        let (x, y) = self.cell(idx);
        let kind = KINDS[kind_rank as usize];
        let second = match kind {
            TileKind::Monomer => {
                if self.budget.is_some_and(|b| self.monomers >= b) {
                    return false;
                }
                None
            }
            TileKind::HDimer => {
                if x + 1 >= n || self.cover[idx + 1] != EMPTY {
                    return false;
                }
                Some(idx + 1)
            }
            TileKind::VDimer => {
                if y + 1 >= n || self.cover[idx + n as usize] != EMPTY {
                    return false;
                }
                Some(idx + n as usize)
            }
        };
        let id = self.tiles.len() as u32;
        self.cover[idx] = id;
        let mut covered = vec![(x, y)];
        if let Some(s) = second {
            self.cover[s] = id;
            covered.push(self.cell(s));
        }
        if !self.tatami_ok_around(&covered) {
            self.cover[idx] = EMPTY;
            if let Some(s) = second {
                self.cover[s] = EMPTY;
            }
            return false;
        }
        self.tiles.push(Tile { kind, x, y });
        if kind == TileKind::Monomer {
            self.monomers += 1;
        }
        true
    }

    fn unplace(&mut self, idx: usize) {
        let tile = self.tiles.pop().expect("frame without tile");
        if tile.kind == TileKind::Monomer {
            self.monomers -= 1;
        }
        self.cover[idx] = EMPTY;
        match tile.kind {
            TileKind::Monomer => {}
            TileKind::HDimer => self.cover[idx + 1] = EMPTY,
            TileKind::VDimer => self.cover[idx + self.n as usize] = EMPTY,
        }
    }

    fn backtrack(&mut self) -> bool {
        match self.stack.pop() {
            None => false,
            Some((idx, rank)) => {
                self.unplace(idx);
                self.cursor = idx;
                self.next_kind = rank + 1;
                true
            }
        }
    }
}

impl Iterator for Enumerator {
    type Item = Tiling;

    fn next(&mut self) -> Option<Tiling> {
        if self.done {
            return None;
        }
        loop {
            while self.cursor < self.cover.len() && self.cover[self.cursor] != EMPTY {
                self.cursor += 1;
            }
            if self.cursor == self.cover.len() {
                let out = Tiling::from_tiles_unchecked(self.n, self.tiles.clone());
                if !self.backtrack() {
                    self.done = true;
                }
                return Some(out);
            }
            let mut placed = false;
            for rank in self.next_kind..3 {
                if self.try_place(self.cursor, rank) {
                    self.stack.push((self.cursor, rank));
                    self.next_kind = 0;
                    placed = true;
                    break;
                }
            }
            if !placed && !self.backtrack() {
                self.done = true;
                return None;
            }
        }
    }
}
