//! The maximum-monomer layer: tilings of the `n x n` grid with `n`
//! monomers.
//!
//! Fixing the two corner monomers to the upper corners, every such tiling is
//! a set of non-conflicting diagonal flips applied to the trivial running
//! bond, recorded as one ternary symbol per non-corner monomer. The tilings
//! split into classes keyed by the longest flipped diagonal; each class is
//! generated by plain subset enumeration, and for even `n` the classes chain
//! into a Gray code whose step is a single diagonal flip.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::features::{flip_diagonal, Diagonal, Heading};
use crate::tiling::{Cell, Tile, TileKind, Tiling};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MaxMonoError {
    #[error("grid side must be at least 2, got {0}")]
    BadSide(i32),
    #[error("diagonal {0} does not exist on the side-{1} grid")]
    BadDiagonal(DiagonalId, i32),
    #[error("word lengths {0}/{1} do not fit grid side {2}")]
    BadWordLengths(usize, usize, i32),
    #[error("ternary symbols must be -1, 0 or 1, got {0}")]
    BadSymbol(i8),
    #[error("flips {0} and {1} conflict")]
    ConflictingPair(DiagonalId, DiagonalId),
    #[error("class diagonal {0} is not a longest-of-its-monomer diagonal")]
    InvalidClass(DiagonalId),
    #[error("expected an n-monomer tiling with monomers in both upper corners")]
    NotFixedCornerMax,
    #[error("tiling is not reachable from the trivial running bond by single flips")]
    NotFlipReachable,
    #[error("malformed ternary word text")]
    BadRepText,
    #[error("the diagonal-flip Gray code is only defined for even grid sides, got {0}")]
    OddSideGray(i32),
}

/// Which staircase of which boundary monomer. Even grids use the left/right
/// tags, odd grids the top/bottom tags. The derive order doubles as the
/// deterministic tie-break order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DiagonalTag {
    LeftDown,
    LeftUp,
    RightDown,
    RightUp,
    TopLeft,
    TopRight,
    BottomLeft,
    BottomRight,
}

impl DiagonalTag {
    pub fn partner(self) -> DiagonalTag {
        use DiagonalTag::*;
        match self {
            LeftDown => LeftUp,
            LeftUp => LeftDown,
            RightDown => RightUp,
            RightUp => RightDown,
            TopLeft => TopRight,
            TopRight => TopLeft,
            BottomLeft => BottomRight,
            BottomRight => BottomLeft,
        }
    }

    fn label(self) -> &'static str {
        use DiagonalTag::*;
        match self {
            LeftDown => "left-down",
            LeftUp => "left-up",
            RightDown => "right-down",
            RightUp => "right-up",
            TopLeft => "top-left",
            TopRight => "top-right",
            BottomLeft => "bottom-left",
            BottomRight => "bottom-right",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiagonalId {
    pub tag: DiagonalTag,
    pub index: i32,
}

impl DiagonalId {
    pub fn new(tag: DiagonalTag, index: i32) -> DiagonalId {
        DiagonalId { tag, index }
    }

    /// The other diagonal of the same monomer.
    pub fn partner(self) -> DiagonalId {
        DiagonalId { tag: self.tag.partner(), index: self.index }
    }

    pub fn same_monomer(self, other: DiagonalId) -> bool {
        self.index == other.index && (self.tag == other.tag || self.tag == other.tag.partner())
    }
}

impl fmt::Display for DiagonalId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.tag.label(), self.index)
    }
}

/// Word lengths of the ternary representation: `(left, right)` for even
/// sides, `(top, bottom)` for odd sides.
pub fn word_lengths(n: i32) -> (usize, usize) {
    assert!(n >= 2);
    if n % 2 == 0 {
        let w = ((n - 2) / 2) as usize;
        (w, w)
    } else {
        (((n - 2) / 2) as usize, ((n - 1) / 2) as usize)
    }
}

fn tag_is_even_side(tag: DiagonalTag) -> bool {
    use DiagonalTag::*;
    matches!(tag, LeftDown | LeftUp | RightDown | RightUp)
}

/// Checks tag parity and index range for grid side `n`.
pub fn diagonal_id_valid(n: i32, a: DiagonalId) -> bool {
    if n < 2 || a.index < 0 {
        return false;
    }
    let (first, second) = word_lengths(n);
    use DiagonalTag::*;
    let limit = if n % 2 == 0 {
        if !tag_is_even_side(a.tag) {
            return false;
        }
        first
    } else {
        match a.tag {
            TopLeft | TopRight => first,
            BottomLeft | BottomRight => second,
            _ => return false,
        }
    };
    (a.index as usize) < limit
}

fn check_id(n: i32, a: DiagonalId) -> Result<(), MaxMonoError> {
    if diagonal_id_valid(n, a) {
        Ok(())
    } else {
        Err(MaxMonoError::BadDiagonal(a, n))
    }
}

/// Number of dimers in the diagonal.
pub fn diagonal_length(n: i32, a: DiagonalId) -> i32 {
    assert!(diagonal_id_valid(n, a), "{a} invalid for side {n}");
    let i = a.index;
    use DiagonalTag::*;
    match a.tag {
        LeftDown | RightDown | BottomLeft => 2 * i + 1,
        LeftUp | RightUp | BottomRight => n - 2 * i - 2,
        TopLeft => 2 * i + 2,
        TopRight => n - 2 * i - 3,
    }
}

/// All diagonals of the trivial tiling, in tag-then-index order.
pub fn all_diagonals(n: i32) -> Vec<DiagonalId> {
    use DiagonalTag::*;
    let (first, second) = word_lengths(n);
    let tags: [(DiagonalTag, usize); 4] = if n % 2 == 0 {
        [(LeftDown, first), (LeftUp, first), (RightDown, second), (RightUp, second)]
    } else {
        [(TopLeft, first), (TopRight, first), (BottomLeft, second), (BottomRight, second)]
    };
    let mut out = Vec::new();
    for (tag, len) in tags {
        for i in 0..len as i32 {
            out.push(DiagonalId::new(tag, i));
        }
    }
    out
}

/// Direction component of a tag, shared by opposite sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Direction {
    Down,
    Up,
    Leftward,
    Rightward,
}

fn direction(tag: DiagonalTag) -> Direction {
    use DiagonalTag::*;
    match tag {
        LeftDown | RightDown => Direction::Down,
        LeftUp | RightUp => Direction::Up,
        TopLeft | BottomLeft => Direction::Leftward,
        TopRight | BottomRight => Direction::Rightward,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SideGroup {
    Left,
    Right,
    Top,
    Bottom,
}

fn side_group(tag: DiagonalTag) -> SideGroup {
    use DiagonalTag::*;
    match tag {
        LeftDown | LeftUp => SideGroup::Left,
        RightDown | RightUp => SideGroup::Right,
        TopLeft | TopRight => SideGroup::Top,
        BottomLeft | BottomRight => SideGroup::Bottom,
    }
}

/// Whether flipping both diagonals is impossible. Same-monomer pairs
/// conflict by convention; same-side pairs conflict exactly when flipped
/// toward each other; opposite-side pairs flipped in the same direction
/// conflict exactly when their lengths sum to at least `n`.
pub fn conflicts(n: i32, a: DiagonalId, b: DiagonalId) -> bool {
    assert!(diagonal_id_valid(n, a), "{a} invalid for side {n}");
    assert!(diagonal_id_valid(n, b), "{b} invalid for side {n}");
    if a.same_monomer(b) {
        return true;
    }
    if side_group(a.tag) == side_group(b.tag) {
        // toward each other: the lower/lefter monomer flips up/right while
        // the upper/righter one flips down/left
        let toward = |p: DiagonalId, q: DiagonalId| {
            use Direction::*;
            matches!(direction(p.tag), Up | Rightward)
                && matches!(direction(q.tag), Down | Leftward)
                && p.index < q.index
        };
        return toward(a, b) || toward(b, a);
    }
    if direction(a.tag) == direction(b.tag) {
        return diagonal_length(n, a) + diagonal_length(n, b) >= n;
    }
    false
}

/// True when `a` is at least as long as its partner, i.e. eligible to be a
/// longest flipped diagonal. For odd sides the middle monomer's two
/// diagonals tie and both qualify.
pub fn in_longest_set(n: i32, a: DiagonalId) -> bool {
    2 * diagonal_length(n, a) >= n - 1
}

/// Sort key used everywhere an order matters: longest first, then tag
/// order, then index.
fn class_sort_key(n: i32, a: DiagonalId) -> (i32, DiagonalTag, i32) {
    (-diagonal_length(n, a), a.tag, a.index)
}

/// The class labels: every diagonal eligible to be the longest flip.
pub fn longest_diagonals(n: i32) -> Vec<DiagonalId> {
    let mut out: Vec<DiagonalId> =
        all_diagonals(n).into_iter().filter(|&a| in_longest_set(n, a)).collect();
    out.sort_by_key(|&a| class_sort_key(n, a));
    out
}

/// A class of fixed-corner tilings: either "no monomer is flipped on its
/// longest diagonal", or the tilings whose longest flipped diagonal is the
/// given one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClassId {
    Empty,
    Longest(DiagonalId),
}

/// Every class, longest diagonals first, the empty class last.
pub fn class_ids(n: i32) -> Vec<ClassId> {
    let mut out: Vec<ClassId> = longest_diagonals(n).into_iter().map(ClassId::Longest).collect();
    out.push(ClassId::Empty);
    out
}

/// Diagonals that may be flipped freely inside a class: shorter than the
/// class diagonal, on a different monomer, and conflict-free with it. For
/// the empty class, each monomer's strictly shorter diagonal.
pub fn available_diagonals(n: i32, c: &ClassId) -> Result<Vec<DiagonalId>, MaxMonoError> {
    if n < 2 {
        return Err(MaxMonoError::BadSide(n));
    }
    let mut out: Vec<DiagonalId> = match *c {
        ClassId::Empty => all_diagonals(n)
            .into_iter()
            .filter(|&b| diagonal_length(n, b) < diagonal_length(n, b.partner()))
            .collect(),
        ClassId::Longest(a) => {
            check_id(n, a)?;
            if !in_longest_set(n, a) {
                return Err(MaxMonoError::InvalidClass(a));
            }
            let da = diagonal_length(n, a);
            all_diagonals(n)
                .into_iter()
                .filter(|&b| {
                    diagonal_length(n, b) < da && !b.same_monomer(a) && !conflicts(n, a, b)
                })
                .collect()
        }
    };
    out.sort_by_key(|&b| class_sort_key(n, b));
    Ok(out)
}

/// The trivial running bond with monomers in both upper corners: horizontal
/// bond with side monomers at odd heights for even `n`, vertical bond with
/// bottom monomers at odd columns and top monomers at even columns for odd
/// `n`.
pub fn trivial_tiling(n: i32) -> Tiling {
    assert!(n >= 1);
    let mut tiles = Vec::new();
    if n % 2 == 0 {
        for y in 0..n {
            if y % 2 == 0 {
                let mut x = 0;
                while x < n {
                    tiles.push(Tile::hdimer(x, y));
                    x += 2;
                }
            } else {
                tiles.push(Tile::monomer(0, y));
                let mut x = 1;
                while x + 1 <= n - 2 {
                    tiles.push(Tile::hdimer(x, y));
                    x += 2;
                }
                tiles.push(Tile::monomer(n - 1, y));
            }
        }
    } else {
        for x in 0..n {
            if x % 2 == 0 {
                let mut y = 0;
                while y + 1 <= n - 2 {
                    tiles.push(Tile::vdimer(x, y));
                    y += 2;
                }
                tiles.push(Tile::monomer(x, n - 1));
            } else {
                tiles.push(Tile::monomer(x, 0));
                let mut y = 1;
                while y + 1 <= n - 1 {
                    tiles.push(Tile::vdimer(x, y));
                    y += 2;
                }
            }
        }
    }
    Tiling::from_tiles_unchecked(n, tiles)
}

/// Trivial-tiling position of the diagonal's monomer.
pub fn monomer_cell(n: i32, a: DiagonalId) -> Cell {
    debug_assert!(diagonal_id_valid(n, a));
    let i = a.index;
    use DiagonalTag::*;
    match a.tag {
        LeftDown | LeftUp => (0, 2 * i + 1),
        RightDown | RightUp => (n - 1, 2 * i + 1),
        TopLeft | TopRight => (2 * i + 2, n - 1),
        BottomLeft | BottomRight => (2 * i + 1, 0),
    }
}

/// The staircase geometry of a diagonal as it rests in the trivial tiling.
pub fn geometric(n: i32, a: DiagonalId) -> Diagonal {
    use DiagonalTag::*;
    let heading = match a.tag {
        LeftDown => Heading::SE,
        LeftUp => Heading::NE,
        RightDown => Heading::SW,
        RightUp => Heading::NW,
        TopLeft => Heading::SW,
        TopRight => Heading::SE,
        BottomLeft => Heading::NW,
        BottomRight => Heading::NE,
    };
    let d = Diagonal::new(n, monomer_cell(n, a), heading)
        .expect("trivial-tiling monomers are non-corner boundary cells");
    debug_assert_eq!(d.length(), diagonal_length(n, a));
    d
}

fn flip_symbol(tag: DiagonalTag) -> i8 {
    use DiagonalTag::*;
    match tag {
        LeftDown | RightDown | TopLeft | BottomLeft => -1,
        LeftUp | RightUp | TopRight | BottomRight => 1,
    }
}

/// Ternary flip words: one symbol per non-corner monomer of the trivial
/// tiling. 0 = unflipped; -1/+1 = flipped on the down/left vs up/right
/// diagonal. Even sides read up the left side then up the right; odd sides
/// read the top then the bottom, left to right.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TernaryRep {
    Even { left: Vec<i8>, right: Vec<i8> },
    Odd { top: Vec<i8>, bottom: Vec<i8> },
}

impl TernaryRep {
    /// The all-zero word pair for grid side `n`.
    pub fn zero(n: i32) -> TernaryRep {
        let (first, second) = word_lengths(n);
        if n % 2 == 0 {
            TernaryRep::Even { left: vec![0; first], right: vec![0; second] }
        } else {
            TernaryRep::Odd { top: vec![0; first], bottom: vec![0; second] }
        }
    }

    pub fn words(&self) -> (&[i8], &[i8]) {
        match self {
            TernaryRep::Even { left, right } => (left, right),
            TernaryRep::Odd { top, bottom } => (top, bottom),
        }
    }

    pub fn validate_for(&self, n: i32) -> Result<(), MaxMonoError> {
        if n < 2 {
            return Err(MaxMonoError::BadSide(n));
        }
        let (first, second) = self.words();
        let even = matches!(self, TernaryRep::Even { .. });
        if even != (n % 2 == 0) || (first.len(), second.len()) != word_lengths(n) {
            return Err(MaxMonoError::BadWordLengths(first.len(), second.len(), n));
        }
        for &s in first.iter().chain(second) {
            if !(-1..=1).contains(&s) {
                return Err(MaxMonoError::BadSymbol(s));
            }
        }
        Ok(())
    }

    /// The flipped diagonals, first word then second.
    pub fn flipped(&self) -> Vec<DiagonalId> {
        use DiagonalTag::*;
        let (first, second) = self.words();
        let tags = match self {
            TernaryRep::Even { .. } => [(LeftDown, LeftUp), (RightDown, RightUp)],
            TernaryRep::Odd { .. } => [(TopLeft, TopRight), (BottomLeft, BottomRight)],
        };
        let mut out = Vec::new();
        for (word, (minus, plus)) in [first, second].into_iter().zip(tags) {
            for (i, &s) in word.iter().enumerate() {
                match s {
                    -1 => out.push(DiagonalId::new(minus, i as i32)),
                    1 => out.push(DiagonalId::new(plus, i as i32)),
                    _ => {}
                }
            }
        }
        out
    }

    /// Current symbol of the monomer the diagonal belongs to.
    pub fn symbol(&self, a: DiagonalId) -> i8 {
        use DiagonalTag::*;
        let first =
            matches!(a.tag, LeftDown | LeftUp | TopLeft | TopRight);
        let (f, s) = self.words();
        let word = if first { f } else { s };
        word[a.index as usize]
    }

    fn set_symbol(&mut self, a: DiagonalId, v: i8) {
        use DiagonalTag::*;
        let first =
            matches!(a.tag, LeftDown | LeftUp | TopLeft | TopRight);
        let word = match self {
            TernaryRep::Even { left, right } => {
                if first {
                    left
                } else {
                    right
                }
            }
            TernaryRep::Odd { top, bottom } => {
                if first {
                    top
                } else {
                    bottom
                }
            }
        };
        word[a.index as usize] = v;
    }
}

fn write_word(f: &mut fmt::Formatter<'_>, word: &[i8]) -> fmt::Result {
    write!(f, "(")?;
    for (i, s) in word.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{s}")?;
    }
    write!(f, ")")
}

impl fmt::Display for TernaryRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (first, second) = self.words();
        write_word(f, first)?;
        write!(f, "\u{b7}")?;
        write_word(f, second)
    }
}

impl FromStr for TernaryRep {
    type Err = MaxMonoError;

    fn from_str(s: &str) -> Result<TernaryRep, MaxMonoError> {
        fn parse_word(w: &str) -> Result<Vec<i8>, MaxMonoError> {
            let inner = w
                .strip_prefix('(')
                .and_then(|w| w.strip_suffix(')'))
                .ok_or(MaxMonoError::BadRepText)?;
            if inner.is_empty() {
                return Ok(Vec::new());
            }
            inner
                .split(',')
                .map(|p| match p.trim() {
                    "-1" => Ok(-1),
                    "0" => Ok(0),
                    "1" => Ok(1),
                    _ => Err(MaxMonoError::BadRepText),
                })
                .collect()
        }
        let (a, b) = s.trim().split_once('\u{b7}').ok_or(MaxMonoError::BadRepText)?;
        let (first, second) = (parse_word(a)?, parse_word(b)?);
        if first.len() == second.len() {
            Ok(TernaryRep::Even { left: first, right: second })
        } else if first.len() + 1 == second.len() {
            Ok(TernaryRep::Odd { top: first, bottom: second })
        } else {
            Err(MaxMonoError::BadRepText)
        }
    }
}

/// Applies the word's flips to the trivial tiling. Conflicting words are
/// rejected with the first offending pair.
pub fn decode(n: i32, rep: &TernaryRep) -> Result<Tiling, MaxMonoError> {
    rep.validate_for(n)?;
    let flips = rep.flipped();
    for i in 0..flips.len() {
        for j in i + 1..flips.len() {
            if conflicts(n, flips[i], flips[j]) {
                return Err(MaxMonoError::ConflictingPair(flips[i], flips[j]));
            }
        }
    }
    let mut t = trivial_tiling(n);
    for a in flips {
        t = flip_diagonal(&t, &geometric(n, a))
            .expect("non-conflicting staircases stay intact under each other's flips");
    }
    Ok(t)
}

/// Reads the flip word off a fixed-corner n-monomer tiling by locating each
/// trivial monomer at its rest cell or at one of its two flip targets.
pub fn encode_rep(t: &Tiling) -> Result<TernaryRep, MaxMonoError> {
    let n = t.n();
    if n < 2 {
        return Err(MaxMonoError::BadSide(n));
    }
    if t.monomer_count() != n as usize {
        return Err(MaxMonoError::NotFixedCornerMax);
    }
    let cov = t.cover();
    let monomer_at = |c: Cell| {
        cov.tile(c).is_some_and(|tile| tile.kind == TileKind::Monomer && tile.anchor() == c)
    };
    if !monomer_at((0, n - 1)) || !monomer_at((n - 1, n - 1)) {
        return Err(MaxMonoError::NotFixedCornerMax);
    }
    let mut rep = TernaryRep::zero(n);
    let mut visited_monomers = Vec::new();
    for a in all_diagonals(n) {
        let rest = monomer_cell(n, a);
        if visited_monomers.contains(&rest) {
            continue;
        }
        visited_monomers.push(rest);
        if monomer_at(rest) {
            continue;
        }
        let partner = a.partner();
        if monomer_at(geometric(n, a).far_end()) {
            rep.set_symbol(a, flip_symbol(a.tag));
        } else if monomer_at(geometric(n, partner).far_end()) {
            rep.set_symbol(partner, flip_symbol(partner.tag));
        } else {
            return Err(MaxMonoError::NotFlipReachable);
        }
    }
    if &decode(n, &rep)? != t {
        return Err(MaxMonoError::NotFlipReachable);
    }
    Ok(rep)
}

/// One Gray-code step: the toggled diagonal and the +1/-1 change it makes
/// to that monomer's ternary symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FlipStep {
    pub diagonal: DiagonalId,
    pub delta: i8,
}

fn gray_code(i: u64) -> u64 {
    i ^ (i >> 1)
}

/// Mutable walk state shared by the class and Gray generators.
struct FlipState {
    n: i32,
    current: Tiling,
    rep: TernaryRep,
    flips: u64,
}

impl FlipState {
    fn new(n: i32) -> FlipState {
        FlipState { n, current: trivial_tiling(n), rep: TernaryRep::zero(n), flips: 0 }
    }

    /// Toggles one diagonal: a forward flip from the rest state, or the
    /// reverse flip back to it.
    fn toggle(&mut self, a: DiagonalId) -> FlipStep {
        let sym = self.rep.symbol(a);
        let delta = if sym == 0 {
            self.current = flip_diagonal(&self.current, &geometric(self.n, a))
                .expect("a resting diagonal of the current tiling can be flipped");
            let s = flip_symbol(a.tag);
            self.rep.set_symbol(a, s);
            s
        } else {
            debug_assert_eq!(sym, flip_symbol(a.tag), "{a} is flipped the other way");
            self.current = flip_diagonal(&self.current, &geometric(self.n, a).reversed())
                .expect("a flipped diagonal can always be flipped back");
            self.rep.set_symbol(a, 0);
            -sym
        };
        self.flips += 1;
        FlipStep { diagonal: a, delta }
    }
}

/// Generates one class: the class diagonal (if any) stays flipped while the
/// available diagonals run through all subsets in binary-reflected Gray
/// order, one flip per step.
pub fn generate_class(n: i32, c: &ClassId) -> Result<ClassGenerator, MaxMonoError> {
    if n < 2 {
        return Err(MaxMonoError::BadSide(n));
    }
    let bits = available_diagonals(n, c)?;
    assert!(bits.len() < 63);
    let mut state = FlipState::new(n);
    if let ClassId::Longest(a) = *c {
        state.toggle(a);
    }
    Ok(ClassGenerator { state, bits, next: 0 })
}

pub struct ClassGenerator {
    state: FlipState,
    bits: Vec<DiagonalId>,
    next: u64,
}

impl Iterator for ClassGenerator {
    type Item = Tiling;

    fn next(&mut self) -> Option<Tiling> {
        let total = 1u64 << self.bits.len();
        if self.next >= total {
            return None;
        }
        if self.next > 0 {
            let changed = gray_code(self.next - 1) ^ gray_code(self.next);
            let bit = changed.trailing_zeros() as usize;
            self.state.toggle(self.bits[bit]);
        }
        self.next += 1;
        Some(self.state.current.clone())
    }
}

/// All `n * 2^(n-3)` fixed-corner tilings, class by class.
pub fn generate_fixed_corner(n: i32) -> Result<FixedCornerGenerator, MaxMonoError> {
    if n < 2 {
        return Err(MaxMonoError::BadSide(n));
    }
    Ok(FixedCornerGenerator { n, classes: class_ids(n).into_iter(), current: None })
}

pub struct FixedCornerGenerator {
    n: i32,
    classes: std::vec::IntoIter<ClassId>,
    current: Option<ClassGenerator>,
}

impl Iterator for FixedCornerGenerator {
    type Item = Tiling;

    fn next(&mut self) -> Option<Tiling> {
        loop {
            if let Some(cur) = &mut self.current {
                if let Some(t) = cur.next() {
                    return Some(t);
                }
            }
            let c = self.classes.next()?;
            self.current = Some(generate_class(self.n, &c).expect("class ids are valid"));
        }
    }
}

/// All `n * 2^(n-1)` n-monomer tilings: the four rotations of the
/// fixed-corner set, disjoint because the corner-monomer pair lands on a
/// different edge each quarter turn.
pub fn generate_all_max(n: i32) -> Result<AllMaxGenerator, MaxMonoError> {
    if n < 2 {
        return Err(MaxMonoError::BadSide(n));
    }
    Ok(AllMaxGenerator { n, rotation: 0, inner: generate_fixed_corner(n)? })
}

pub struct AllMaxGenerator {
    n: i32,
    rotation: u8,
    inner: FixedCornerGenerator,
}

impl Iterator for AllMaxGenerator {
    type Item = Tiling;

    fn next(&mut self) -> Option<Tiling> {
        loop {
            if let Some(t) = self.inner.next() {
                let mut out = t;
                for _ in 0..self.rotation {
                    out = out.rotate90();
                }
                return Some(out);
            }
            if self.rotation == 3 {
                return None;
            }
            self.rotation += 1;
            self.inner = generate_fixed_corner(self.n).expect("side already validated");
        }
    }
}

/// Class order for the Gray code: the up-the-left/down-the-right family in
/// decreasing length, the empty class, then the mirrored family. Adjacent
/// non-empty classes sit on opposite sides, point in opposite directions,
/// and differ in length by exactly one, so each hand-off is a single flip.
pub fn gray_class_order(n: i32) -> Result<Vec<ClassId>, MaxMonoError> {
    if n < 2 {
        return Err(MaxMonoError::BadSide(n));
    }
    if n % 2 != 0 {
        return Err(MaxMonoError::OddSideGray(n));
    }
    use DiagonalTag::*;
    let family = |tags: [DiagonalTag; 2]| -> Vec<ClassId> {
        let mut v: Vec<DiagonalId> =
            longest_diagonals(n).into_iter().filter(|a| tags.contains(&a.tag)).collect();
        v.sort_by_key(|&a| class_sort_key(n, a));
        v.into_iter().map(ClassId::Longest).collect()
    };
    let mut order = family([LeftUp, RightDown]);
    order.push(ClassId::Empty);
    order.extend(family([RightUp, LeftDown]));
    Ok(order)
}

struct GrayClassPlan {
    class: ClassId,
    /// Bit position -> diagonal; the top bit is the link toggled jointly
    /// with the neighbouring class.
    bits: Vec<DiagonalId>,
    reversed: bool,
}

fn build_gray_plan(n: i32) -> Result<Vec<GrayClassPlan>, MaxMonoError> {
    let order = gray_class_order(n)?;
    let mut plan = Vec::with_capacity(order.len());
    let mut link_into_empty: Option<DiagonalId> = None;
    for (p, &class) in order.iter().enumerate() {
        let avail = available_diagonals(n, &class)?;
        let leading = match (class, order.get(p + 1)) {
            (_, None) => None,
            (ClassId::Longest(_), Some(ClassId::Longest(b))) => Some(*b),
            (ClassId::Longest(_), Some(ClassId::Empty)) => {
                // any diagonal available both here and in the empty class;
                // take the longest for determinism
                let empty_avail = available_diagonals(n, &ClassId::Empty)?;
                let link = avail
                    .iter()
                    .copied()
                    .find(|d| empty_avail.contains(d))
                    .expect("some short diagonal is available in both classes");
                link_into_empty = Some(link);
                Some(link)
            }
            (ClassId::Empty, Some(ClassId::Longest(_))) => {
                Some(link_into_empty.expect("the empty class follows a longest class"))
            }
            (ClassId::Empty, Some(ClassId::Empty)) => unreachable!("one empty class"),
        };
        let mut rest: Vec<DiagonalId> =
            avail.iter().copied().filter(|d| Some(*d) != leading).collect();
        rest.sort_by_key(|&d| class_sort_key(n, d));
        let k = avail.len();
        let mut bits = vec![DiagonalId::new(DiagonalTag::LeftDown, 0); k];
        match leading {
            Some(link) => {
                debug_assert!(avail.contains(&link), "link diagonal must be available");
                bits[k - 1] = link;
                for (i, d) in rest.into_iter().enumerate() {
                    bits[k - 2 - i] = d;
                }
            }
            None => {
                for (i, d) in rest.into_iter().enumerate() {
                    bits[k - 1 - i] = d;
                }
            }
        }
        let reversed = class == ClassId::Empty && p + 1 < order.len();
        plan.push(GrayClassPlan { class, bits, reversed });
    }
    Ok(plan)
}

/// Streams every fixed-corner tiling of an even-sided grid so that
/// consecutive tilings differ by one diagonal flip, i.e. one ternary symbol
/// changing by one. Classes appear contiguously in [`gray_class_order`];
/// the empty class runs in reverse so it ends on the trivial tiling.
pub fn gray_generate(n: i32) -> Result<GrayGenerator, MaxMonoError> {
    let plan = build_gray_plan(n)?;
    Ok(GrayGenerator {
        state: FlipState::new(n),
        plan,
        class_idx: 0,
        emitted_in_class: 0,
        primed: false,
    })
}

pub struct GrayGenerator {
    state: FlipState,
    plan: Vec<GrayClassPlan>,
    class_idx: usize,
    emitted_in_class: u64,
    primed: bool,
}

impl GrayGenerator {
    /// Total diagonal flips performed so far; the constant-amortized-time
    /// witness checked against the number of tilings emitted.
    pub fn flips_performed(&self) -> u64 {
        self.state.flips
    }

    fn class_code(&self, i: u64) -> u64 {
        let p = &self.plan[self.class_idx];
        let total = 1u64 << p.bits.len();
        if p.reversed {
            gray_code(total - 1 - i)
        } else {
            gray_code(i)
        }
    }
}

impl Iterator for GrayGenerator {
    type Item = (Tiling, Option<FlipStep>);

    fn next(&mut self) -> Option<(Tiling, Option<FlipStep>)> {
        if !self.primed {
            self.primed = true;
            // the first class opens on its all-zeros code: only the class
            // diagonal is flipped
            if let ClassId::Longest(a) = self.plan[0].class {
                self.state.toggle(a);
            }
            debug_assert!(!self.plan[0].reversed || self.plan[0].bits.is_empty());
            self.emitted_in_class = 1;
            return Some((self.state.current.clone(), None));
        }
        let total = 1u64 << self.plan[self.class_idx].bits.len();
        if self.emitted_in_class < total {
            let i = self.emitted_in_class;
            let changed = self.class_code(i - 1) ^ self.class_code(i);
            debug_assert_eq!(changed.count_ones(), 1);
            let bit = changed.trailing_zeros() as usize;
            let step = self.state.toggle(self.plan[self.class_idx].bits[bit]);
            self.emitted_in_class += 1;
            return Some((self.state.current.clone(), Some(step)));
        }
        if self.class_idx + 1 == self.plan.len() {
            return None;
        }
        // hand-off: unflip the finished class diagonal (its end state is the
        // class diagonal plus the link), or flip the next class diagonal out
        // of the trivial tiling when leaving the empty class
        let step = match (self.plan[self.class_idx].class, self.plan[self.class_idx + 1].class) {
            (ClassId::Longest(a), _) => self.state.toggle(a),
            (ClassId::Empty, ClassId::Longest(b)) => self.state.toggle(b),
            (ClassId::Empty, ClassId::Empty) => unreachable!("one empty class"),
        };
        self.class_idx += 1;
        self.emitted_in_class = 1;
        Some((self.state.current.clone(), Some(step)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use std::collections::HashSet;
    use DiagonalTag::*;

    fn id(tag: DiagonalTag, index: i32) -> DiagonalId {
        DiagonalId::new(tag, index)
    }

    #[test]
    fn diagonal_lengths() {
        assert_eq!(diagonal_length(18, id(RightDown, 1)), 3);
        assert_eq!(diagonal_length(18, id(RightUp, 1)), 14);
        assert_eq!(diagonal_length(17, id(TopLeft, 4)), 10);
        assert_eq!(diagonal_length(17, id(TopRight, 4)), 6);
    }

    #[test]
    fn partner_lengths_sum_to_n_minus_1() {
        for n in 2..=50 {
            for a in all_diagonals(n) {
                assert_eq!(
                    diagonal_length(n, a) + diagonal_length(n, a.partner()),
                    n - 1,
                    "n={n} {a}"
                );
            }
        }
    }

    #[test]
    fn trivial_tiling_is_sound_and_geometry_matches() {
        for n in 2..=30 {
            let trivial = trivial_tiling(n);
            assert!(trivial.validate_tatami().is_empty());
            assert_eq!(trivial.monomer_count(), n as usize);
            for a in all_diagonals(n) {
                assert_eq!(geometric(n, a).length(), diagonal_length(n, a), "n={n} {a}");
            }
        }
        // every staircase of the running bond is in place and flippable
        for n in [5, 6] {
            let trivial = trivial_tiling(n);
            let flippable = crate::features::find_flippable_diagonals(&trivial);
            assert_eq!(flippable.len(), 2 * (n as usize - 2));
        }
    }

    #[test]
    fn conflict_examples() {
        assert!(conflicts(18, id(LeftDown, 3), id(RightDown, 5)));
        assert!(!conflicts(18, id(LeftDown, 3), id(RightDown, 4)));
        assert!(conflicts(18, id(LeftUp, 1), id(LeftDown, 2)));
        assert!(!conflicts(18, id(LeftUp, 2), id(LeftDown, 1))); // away from each other
        assert!(conflicts(18, id(LeftUp, 1), id(LeftDown, 1))); // same monomer
        assert!(!conflicts(18, id(LeftUp, 1), id(RightDown, 2))); // opposite directions
    }

    /// The four opposite-side conflict inequalities, written out literally.
    fn conflict_table(n: i32, a: DiagonalId, b: DiagonalId) -> Option<bool> {
        let (i, j) = (a.index, b.index);
        match (a.tag, b.tag) {
            (LeftDown, RightDown) => Some(n <= 2 * (i + j) + 2),
            (LeftUp, RightUp) => Some(n >= 2 * (i + j) + 4),
            (BottomLeft, TopLeft) => Some(n <= 2 * (i + j) + 3),
            (BottomRight, TopRight) => Some(n >= 2 * (i + j) + 5),
            _ => None,
        }
    }

    #[test]
    fn conflicts_match_inequality_table() {
        for n in 4..=19 {
            for a in all_diagonals(n) {
                for b in all_diagonals(n) {
                    assert_eq!(conflicts(n, a, b), conflicts(n, b, a), "symmetry n={n} {a} {b}");
                    if let Some(want) = conflict_table(n, a, b) {
                        assert_eq!(conflicts(n, a, b), want, "n={n} {a} {b}");
                    }
                }
            }
        }
    }

    #[test]
    fn longest_set_sizes() {
        for n in 2..=20 {
            let want = if n % 2 == 0 { n - 2 } else { n - 1 };
            assert_eq!(longest_diagonals(n).len() as i32, want.max(0), "n={n}");
        }
    }

    #[test]
    fn available_diagonals_for_known_classes() {
        let c = ClassId::Longest(id(LeftDown, 5));
        let got = available_diagonals(18, &c).unwrap();
        let mut want = Vec::new();
        want.extend((0..5).map(|i| id(LeftDown, i)));
        want.extend((6..8).map(|i| id(LeftUp, i)));
        want.extend((0..3).map(|i| id(RightDown, i)));
        want.extend((3..8).map(|i| id(RightUp, i)));
        let got_set: HashSet<_> = got.iter().copied().collect();
        assert_eq!(got_set, want.into_iter().collect::<HashSet<_>>());
        assert_eq!(got.len(), 15);

        assert_eq!(available_diagonals(17, &ClassId::Empty).unwrap().len(), 14);
        assert_eq!(available_diagonals(18, &ClassId::Empty).unwrap().len(), 16);
    }

    #[test]
    fn available_diagonal_counts_match_class_sizes() {
        for n in 4..=14 {
            for c in class_ids(n) {
                let avail = available_diagonals(n, &c).unwrap();
                let want = match c {
                    ClassId::Longest(_) => n - 3,
                    ClassId::Empty if n % 2 == 0 => n - 2,
                    ClassId::Empty => n - 3,
                };
                assert_eq!(avail.len() as i32, want, "n={n} {c:?}");
                for (x, &a) in avail.iter().enumerate() {
                    for &b in &avail[x + 1..] {
                        assert!(!conflicts(n, a, b), "n={n} {c:?}: {a} vs {b}");
                    }
                }
            }
        }
    }

    #[test]
    fn invalid_classes_are_rejected() {
        // left-down 0 is the short diagonal of its monomer for any n >= 4
        assert_eq!(
            available_diagonals(8, &ClassId::Longest(id(LeftDown, 0))),
            Err(MaxMonoError::InvalidClass(id(LeftDown, 0)))
        );
        assert!(matches!(
            available_diagonals(8, &ClassId::Longest(id(TopLeft, 0))),
            Err(MaxMonoError::BadDiagonal(..))
        ));
    }

    #[test]
    fn rep_round_trip_through_text() {
        let rep = TernaryRep::Even { left: vec![0, 0, -1], right: vec![1, 0, 0] };
        let shown = rep.to_string();
        assert_eq!(shown, "(0,0,-1)\u{b7}(1,0,0)");
        assert_eq!(shown.parse::<TernaryRep>().unwrap(), rep);
        let odd = TernaryRep::Odd { top: vec![0], bottom: vec![1, -1] };
        assert_eq!(odd.to_string().parse::<TernaryRep>().unwrap(), odd);
        assert!("(0,2)\u{b7}(0,0)".parse::<TernaryRep>().is_err());
    }

    #[test]
    fn decode_trivial_and_published_words() {
        let t = decode(18, &TernaryRep::zero(18)).unwrap();
        assert_eq!(t, trivial_tiling(18));

        // 18x18: flips left-down 5, left-up 7, right-up 3
        let rep = TernaryRep::Even {
            left: vec![0, 0, 0, 0, 0, -1, 0, 1],
            right: vec![0, 0, 0, 1, 0, 0, 0, 0],
        };
        let t = decode(18, &rep).unwrap();
        assert!(t.validate_tatami().is_empty());
        assert_eq!(t.monomer_count(), 18);
        assert_eq!(rep.flipped(), vec![id(LeftDown, 5), id(LeftUp, 7), id(RightUp, 3)]);
        assert_eq!(encode_rep(&t).unwrap(), rep);

        // 17x17: flips top-left 1, bottom-left 2, bottom-right 5
        let rep = TernaryRep::Odd {
            top: vec![0, -1, 0, 0, 0, 0, 0],
            bottom: vec![0, 0, -1, 0, 0, 1, 0, 0],
        };
        let t = decode(17, &rep).unwrap();
        assert!(t.validate_tatami().is_empty());
        assert_eq!(t.monomer_count(), 17);
        assert_eq!(rep.flipped(), vec![id(TopLeft, 1), id(BottomLeft, 2), id(BottomRight, 5)]);
        assert_eq!(encode_rep(&t).unwrap(), rep);
    }

    #[test]
    fn decode_rejects_conflicts_with_the_pair() {
        let mut rep = TernaryRep::zero(18);
        rep.set_symbol(id(LeftDown, 3), -1);
        rep.set_symbol(id(RightDown, 5), -1);
        assert_eq!(
            decode(18, &rep),
            Err(MaxMonoError::ConflictingPair(id(LeftDown, 3), id(RightDown, 5)))
        );
        assert!(matches!(
            decode(16, &TernaryRep::zero(18)),
            Err(MaxMonoError::BadWordLengths(..))
        ));
    }

    #[test]
    fn class_sizes_partition_fixed_corner_set() {
        for n in 2..=8 {
            let mut all = HashSet::new();
            let mut total = 0u64;
            for c in class_ids(n) {
                let mut size = 0u64;
                for t in generate_class(n, &c).unwrap() {
                    assert!(t.validate_tatami().is_empty());
                    assert_eq!(t.monomer_count(), n as usize);
                    assert!(all.insert(t.encode()), "classes overlap at n={n}");
                    size += 1;
                }
                let want = match c {
                    ClassId::Longest(_) => 1u64 << (n - 3),
                    ClassId::Empty if n % 2 == 0 => 1 << (n - 2),
                    ClassId::Empty if n >= 3 => 1 << (n - 3),
                    ClassId::Empty => 1,
                };
                assert_eq!(size, want, "n={n} {c:?}");
                total += size;
            }
            let want_total = if n >= 3 { (n as u64) << (n - 3) } else { 1 };
            assert_eq!(total, want_total, "n={n}");
        }
    }

    #[test]
    fn fixed_corner_set_matches_oracle() {
        for n in 2..=5 {
            let want: HashSet<String> = oracle::enumerate_all(n)
                .filter(|t| t.monomer_count() == n as usize)
                .filter(|t| {
                    let cov = t.cover();
                    [(0, n - 1), (n - 1, n - 1)].into_iter().all(|c| {
                        cov.tile(c).is_some_and(|tile| tile.kind == TileKind::Monomer)
                    })
                })
                .map(|t| t.encode())
                .collect();
            let got: HashSet<String> =
                generate_fixed_corner(n).unwrap().map(|t| t.encode()).collect();
            assert_eq!(got, want, "n={n}");
        }
    }

    #[test]
    fn all_max_matches_oracle() {
        for n in 2..=5 {
            let want: HashSet<String> = oracle::enumerate_all(n)
                .filter(|t| t.monomer_count() == n as usize)
                .map(|t| t.encode())
                .collect();
            let got: Vec<String> = generate_all_max(n).unwrap().map(|t| t.encode()).collect();
            let got_set: HashSet<String> = got.iter().cloned().collect();
            assert_eq!(got.len(), got_set.len(), "duplicates at n={n}");
            assert_eq!(got_set, want, "n={n}");
        }
    }

    #[test]
    fn gray_order_for_18_matches_published_sequence() {
        let got = gray_class_order(18).unwrap();
        let mut want: Vec<ClassId> = Vec::new();
        for (u, d) in [(0, 7), (1, 6), (2, 5), (3, 4)] {
            want.push(ClassId::Longest(id(LeftUp, u)));
            want.push(ClassId::Longest(id(RightDown, d)));
        }
        want.push(ClassId::Empty);
        for (u, d) in [(0, 7), (1, 6), (2, 5), (3, 4)] {
            want.push(ClassId::Longest(id(RightUp, u)));
            want.push(ClassId::Longest(id(LeftDown, d)));
        }
        assert_eq!(got, want);
    }

    #[test]
    fn gray_order_for_6() {
        let got = gray_class_order(6).unwrap();
        assert_eq!(
            got,
            vec![
                ClassId::Longest(id(LeftUp, 0)),
                ClassId::Longest(id(RightDown, 1)),
                ClassId::Empty,
                ClassId::Longest(id(RightUp, 0)),
                ClassId::Longest(id(LeftDown, 1)),
            ]
        );
        assert!(gray_class_order(7).is_err());
    }

    #[test]
    fn gray_order_adjacency() {
        for n in (4..=16).step_by(2) {
            let order = gray_class_order(n).unwrap();
            for pair in order.windows(2) {
                if let [ClassId::Longest(a), ClassId::Longest(b)] = pair {
                    assert_eq!(
                        diagonal_length(n, *b),
                        diagonal_length(n, *a) - 1,
                        "n={n} {a} {b}"
                    );
                    assert!(!conflicts(n, *a, *b), "n={n} {a} {b}");
                }
            }
        }
    }

    #[test]
    fn gray_walk_small_even_sides() {
        for n in [2i32, 4, 6] {
            let items: Vec<_> = gray_generate(n).unwrap().collect();
            let want = if n >= 3 { (n as u64) << (n - 3) } else { 1 };
            assert_eq!(items.len() as u64, want, "n={n}");
            let distinct: HashSet<String> = items.iter().map(|(t, _)| t.encode()).collect();
            assert_eq!(distinct.len(), items.len(), "n={n}");
            assert!(items[0].1.is_none());
            // consecutive words differ in exactly one symbol, by one
            let mut prev = encode_rep(&items[0].0).unwrap();
            for (t, step) in &items[1..] {
                let step = step.expect("only the first item lacks a step");
                let rep = encode_rep(t).unwrap();
                let diffs: Vec<(i8, i8)> = prev
                    .words()
                    .0
                    .iter()
                    .chain(prev.words().1)
                    .zip(rep.words().0.iter().chain(rep.words().1))
                    .filter(|(a, b)| a != b)
                    .map(|(a, b)| (*a, *b))
                    .collect();
                assert_eq!(diffs.len(), 1, "n={n}");
                let (before, after) = diffs[0];
                assert_eq!((after - before).abs(), 1, "n={n}");
                assert_eq!(rep.symbol(step.diagonal) - prev.symbol(step.diagonal), step.delta);
                prev = rep;
            }
        }
    }

    #[test]
    fn gray_first_tiling_flips_shortest_left_up() {
        let (first, _) = gray_generate(6).unwrap().next().unwrap();
        let rep = encode_rep(&first).unwrap();
        assert_eq!(rep.flipped(), vec![id(LeftUp, 0)]);
    }

    #[test]
    fn gray_rejects_odd_sides() {
        assert_eq!(gray_generate(7).err(), Some(MaxMonoError::OddSideGray(7)));
    }
}
