//! Human-inspectable output: box-drawing text and SVG, with optional
//! feature/diagonal highlighting in the SVG.

use crate::features::{source_tiles, Diagonal, Feature};
use crate::tiling::{Cell, TileKind, Tiling};
use std::collections::HashSet;
use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderFormat {
    Ascii,
    Svg,
}

/// What to colour in an SVG rendering.
#[derive(Debug, Clone)]
pub enum Highlight {
    Feature(Feature),
    Diagonal(Diagonal),
}

#[derive(Debug, Clone)]
pub struct RenderOptions {
    pub format: RenderFormat,
    /// SVG pixels per grid cell.
    pub cell_size: u32,
    pub highlight: Vec<Highlight>,
    /// Replace box-drawing glyphs with `+ - |`.
    pub ascii_only: bool,
}

impl Default for RenderOptions {
    fn default() -> RenderOptions {
        RenderOptions {
            format: RenderFormat::Ascii,
            cell_size: 24,
            highlight: Vec::new(),
            ascii_only: false,
        }
    }
}

pub fn render(t: &Tiling, opts: &RenderOptions) -> String {
    match opts.format {
        RenderFormat::Ascii => render_ascii(t, opts),
        RenderFormat::Svg => render_svg(t, opts),
    }
}

/// One character per cell, boundary glyphs wherever two adjacent cells
/// belong to different tiles. The text row order puts the top of the grid
/// first.
pub fn render_ascii(t: &Tiling, opts: &RenderOptions) -> String {
    let n = t.n();
    let cov = t.cover();
    // separator between two cells, or against the outside
    let hsep = |x: i32, y_low: i32| !cov.same_tile((x, y_low), (x, y_low + 1));
    let vsep = |x_left: i32, y: i32| !cov.same_tile((x_left, y), (x_left + 1, y));
    let vbar = if opts.ascii_only { '|' } else { '\u{2502}' };
    let hbar = if opts.ascii_only { '-' } else { '\u{2500}' };
    let w = (2 * n + 1) as usize;
    let mut grid = vec![vec![' '; w]; w];
    for y in 0..n {
        for x in 0..n {
            let row = (2 * (n - 1 - y) + 1) as usize;
            let col = (2 * x + 1) as usize;
            if vsep(x - 1, y) {
                grid[row][col - 1] = vbar;
            }
            if x == n - 1 && vsep(x, y) {
                grid[row][col + 1] = vbar;
            }
            if hsep(x, y - 1) {
                grid[row + 1][col] = hbar;
            }
            if y == n - 1 && hsep(x, y) {
                grid[row - 1][col] = hbar;
            }
        }
    }
    // junction glyphs, chosen from the four incident segments
    for jy in 0..=n {
        for jx in 0..=n {
            let row = (2 * (n - jy)) as usize;
            let col = (2 * jx) as usize;
            let up = jy < n && grid[row - 1][col] != ' ';
            let down = jy > 0 && grid[row + 1][col] != ' ';
            let left = jx > 0 && grid[row][col - 1] != ' ';
            let right = (jx as i32) < n && grid[row][col + 1] != ' ';
            if !(up || down || left || right) {
                continue;
            }
            grid[row][col] = if opts.ascii_only {
                match (up, down, left, right) {
                    (true, true, false, false) => '|',
                    (false, false, true, true) => '-',
                    _ => '+',
                }
            } else {
                junction_glyph(up, down, left, right)
            };
        }
    }
    let mut out = String::with_capacity(w * (w + 1));
    for row in grid {
        let line: String = row.into_iter().collect();
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

fn junction_glyph(up: bool, down: bool, left: bool, right: bool) -> char {
    match (up, down, left, right) {
        (true, true, false, false) => '\u{2502}',
        (false, false, true, true) => '\u{2500}',
        (false, true, false, true) => '\u{250c}',
        (false, true, true, false) => '\u{2510}',
        (true, false, false, true) => '\u{2514}',
        (true, false, true, false) => '\u{2518}',
        (true, false, true, true) => '\u{2534}',
        (true, true, false, true) => '\u{251c}',
        (true, true, true, false) => '\u{2524}',
        (false, true, true, true) => '\u{252c}',
        (true, true, true, true) => '\u{253c}',
        // stubs cannot arise from closed tile boundaries; keep them visible
        (true, false, false, false) | (false, true, false, false) => '\u{2502}',
        (false, false, true, false) | (false, false, false, true) => '\u{2500}',
        (false, false, false, false) => ' ',
    }
}

fn highlighted_cells(n: i32, highlight: &[Highlight]) -> HashSet<Cell> {
    let mut cells = HashSet::new();
    for h in highlight {
        match h {
            Highlight::Feature(f) => {
                if let Ok(tiles) = source_tiles(n, f) {
                    for tile in tiles {
                        cells.extend(tile.cells());
                    }
                }
            }
            Highlight::Diagonal(d) => cells.extend(d.cells()),
        }
    }
    cells
}

/// One `<rect>` per tile; the y axis is flipped so the grid renders with
/// its origin at the bottom left. Output is byte-deterministic for a fixed
/// tiling and options.
pub fn render_svg(t: &Tiling, opts: &RenderOptions) -> String {
    assert!(opts.cell_size > 0, "cell size must be positive");
    let n = t.n();
    let cell = opts.cell_size as i64;
    let size = n as i64 * cell;
    let marked = highlighted_cells(n, &opts.highlight);
    let mut s = String::new();
    writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    )
    .unwrap();
    for tile in t.tiles() {
        let (x0, y0) = tile.anchor();
        let (mut w, mut h) = (1i64, 1i64);
        let mut top = y0;
        match tile.kind {
            TileKind::HDimer => w = 2,
            TileKind::VDimer => {
                h = 2;
                top = y0 + 1;
            }
            TileKind::Monomer => {}
        }
        let class = match tile.kind {
            TileKind::Monomer => "monomer",
            TileKind::HDimer => "h-dimer",
            TileKind::VDimer => "v-dimer",
        };
        let hl = tile.cells().any(|c| marked.contains(&c));
        let fill = if hl {
            "#e544c4"
        } else {
            match tile.kind {
                TileKind::Monomer => "#f0d896",
                TileKind::HDimer => "#c4d7ee",
                TileKind::VDimer => "#bfe3c5",
            }
        };
        writeln!(
            s,
            r##"<rect class="{class}{}" x="{}" y="{}" width="{}" height="{}" fill="{fill}" stroke="#333333" stroke-width="1"/>"##,
            if hl { " highlight" } else { "" },
            x0 as i64 * cell,
            (n as i64 - 1 - top as i64) * cell,
            w * cell,
            h * cell,
        )
        .unwrap();
    }
    writeln!(s, "</svg>").unwrap();
    s
}
